//! Sosemanuk: a 10-cell LFSR over GF(2^32) coupled to a two-register FSM.
//! Keys run 128..256 bits, the IV is 128 bits, and every four LFSR steps
//! the four FSM outputs pass through a bitsliced Serpent S-box to yield
//! 16 keystream bytes.
//!
//! Key setup is the Serpent key schedule; IV setup runs the 24-round
//! Serpent transform ([`crate::serpent`]) over the IV and seeds the LFSR
//! and FSM from its intermediate and final states.

use crate::serpent;

/// GF(2^8) multiplication modulo x^8 + x^7 + x^5 + x^3 + 1.
const fn gf8_mul(a: u8, b: u8) -> u8 {
    let mut a = a as u32;
    let mut b = b as u32;
    let mut r = 0u32;
    while b != 0 {
        if b & 1 != 0 {
            r ^= a;
        }
        a <<= 1;
        if a & 0x100 != 0 {
            a ^= 0x1A9;
        }
        b >>= 1;
    }
    r as u8
}

/// beta^e in the GF(2^8) field above, beta being the polynomial root 0x02.
const fn gf8_pow(e: u32) -> u8 {
    let mut r = 1u8;
    let mut i = 0;
    while i < e {
        r = gf8_mul(r, 0x02);
        i += 1;
    }
    r
}

const fn build_table(exponents: [u32; 4]) -> [u32; 256] {
    let b0 = gf8_pow(exponents[0]);
    let b1 = gf8_pow(exponents[1]);
    let b2 = gf8_pow(exponents[2]);
    let b3 = gf8_pow(exponents[3]);
    let mut table = [0u32; 256];
    let mut c = 0;
    while c < 256 {
        table[c] = ((gf8_mul(c as u8, b0) as u32) << 24)
            | ((gf8_mul(c as u8, b1) as u32) << 16)
            | ((gf8_mul(c as u8, b2) as u32) << 8)
            | gf8_mul(c as u8, b3) as u32;
        c += 1;
    }
    table
}

// The LFSR feedback multiplies by alpha and by alpha^-1, where GF(2^32) is
// built over the GF(2^8) field above. Each table row holds the four result
// bytes contributed by one input byte.
static MUL_A: [u32; 256] = build_table([23, 245, 48, 239]);
static DIV_A: [u32; 256] = build_table([16, 39, 6, 64]);

/// Multiplication by alpha in GF(2^32).
pub fn mul_alpha(x: u32) -> u32 {
    (x << 8) ^ MUL_A[(x >> 24) as usize]
}

/// Multiplication by alpha^-1 in GF(2^32).
pub fn div_alpha(x: u32) -> u32 {
    (x >> 8) ^ DIV_A[(x & 0xff) as usize]
}

/// The FSM's Trans mapping: multiply by an odd constant, rotate left 7.
pub fn trans(z: u32) -> u32 {
    z.wrapping_mul(0x5465_5307).rotate_left(7)
}

pub struct SosemanukCore {
    subkeys: [u32; 100],
    // LFSR cells s_t .. s_{t+9}.
    s: [u32; 10],
    r1: u32,
    r2: u32,
}

impl SosemanukCore {
    /// `key` must be 16..=32 bytes (validated by the caller).
    pub fn new(key: &[u8], iv: &[u8; 16]) -> SosemanukCore {
        let mut core = SosemanukCore {
            subkeys: serpent::key_schedule(key),
            s: [0; 10],
            r1: 0,
            r2: 0,
        };
        core.load_iv(iv);
        core
    }

    fn load_iv(&mut self, iv: &[u8; 16]) {
        let block: [u32; 4] =
            std::array::from_fn(|i| u32::from_le_bytes(iv[4 * i..4 * i + 4].try_into().unwrap()));
        let (y12, y18, y24) = serpent::serpent24(&self.subkeys, block);
        self.s = [
            y24[3], y24[2], y24[1], y24[0], y18[1], y18[3], y12[3], y12[2], y12[1], y12[0],
        ];
        self.r1 = y18[0];
        self.r2 = y18[2];
    }

    // One LFSR/FSM step: returns the FSM output f_t and the dropped LFSR
    // cell s_t.
    fn step(&mut self) -> (u32, u32) {
        let tt = self.r1;
        let mux = if tt & 1 != 0 { self.s[8] } else { 0 };
        self.r1 = self.r2.wrapping_add(self.s[1] ^ mux);
        self.r2 = trans(tt);
        let v = self.s[0];
        let f = self.s[9].wrapping_add(self.r1) ^ self.r2;
        let feedback = mul_alpha(self.s[0]) ^ div_alpha(self.s[3]) ^ self.s[9];
        self.s.copy_within(1.., 0);
        self.s[9] = feedback;
        (f, v)
    }

    pub(crate) fn next_block(&mut self, out: &mut [u8; 16]) {
        let mut f = [0u32; 4];
        let mut v = [0u32; 4];
        for i in 0..4 {
            (f[i], v[i]) = self.step();
        }
        let z = serpent::sbox2(f);
        for i in 0..4 {
            out[4 * i..4 * i + 4].copy_from_slice(&(z[i] ^ v[i]).to_le_bytes());
        }
    }

    pub(crate) fn reset(&mut self, iv: &[u8; 16]) {
        self.load_iv(iv);
    }
}

impl Drop for SosemanukCore {
    fn drop(&mut self) {
        for w in self.subkeys.iter_mut().chain(self.s.iter_mut()) {
            unsafe { std::ptr::write_volatile(w, 0) };
        }
        unsafe {
            std::ptr::write_volatile(&mut self.r1, 0);
            std::ptr::write_volatile(&mut self.r2, 0);
        }
    }
}
