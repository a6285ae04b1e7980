//! Rabbit: eight 32-bit state variables and eight 32-bit counters coupled by
//! a carry bit, mixed with the g-function `low32((u+v)^2) XOR high32((u+v)^2)`.
//! Keys are 128 bits, IVs 64 bits, and each iteration extracts a 128-bit
//! keystream block.
//!
//! The post-key-setup "master" state is retained so that loading a fresh IV
//! does not repeat the key schedule.

/// Counter increment constants A0..A7.
const A: [u32; 8] = [
    0x4D34_D34D,
    0xD34D_34D3,
    0x34D3_4D34,
    0x4D34_D34D,
    0xD34D_34D3,
    0x34D3_4D34,
    0x4D34_D34D,
    0xD34D_34D3,
];

/// The full inner state: state words `x`, counters `c`, and the counter
/// carry bit.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RabbitState {
    pub x: [u32; 8],
    pub c: [u32; 8],
    pub carry: bool,
}

/// The Rabbit g-function: square the 32-bit sum into 64 bits and fold.
pub fn g_function(u: u32, v: u32) -> u32 {
    let sq = (u.wrapping_add(v) as u64).wrapping_mul(u.wrapping_add(v) as u64);
    (sq as u32) ^ ((sq >> 32) as u32)
}

impl RabbitState {
    /// Derives the post-key-setup master state from a 128-bit key.
    pub fn key_setup(key: &[u8; 16]) -> RabbitState {
        let mut k = [0u32; 8];
        for (i, chunk) in key.chunks_exact(2).enumerate() {
            k[i] = u16::from_le_bytes(chunk.try_into().unwrap()) as u32;
        }
        let mut s = RabbitState {
            x: [0; 8],
            c: [0; 8],
            carry: false,
        };
        for j in 0..8 {
            if j % 2 == 0 {
                s.x[j] = (k[(j + 1) % 8] << 16) | k[j];
                s.c[j] = (k[(j + 4) % 8] << 16) | k[(j + 5) % 8];
            } else {
                s.x[j] = (k[(j + 5) % 8] << 16) | k[(j + 4) % 8];
                s.c[j] = (k[j] << 16) | k[(j + 1) % 8];
            }
        }
        for _ in 0..4 {
            s.next_state();
        }
        for j in 0..8 {
            s.c[j] ^= s.x[(j + 4) % 8];
        }
        s
    }

    /// Derives a working state from the master state and a 64-bit IV.
    pub fn iv_setup(&self, iv: &[u8; 8]) -> RabbitState {
        let i0 = u32::from_le_bytes(iv[0..4].try_into().unwrap());
        let i2 = u32::from_le_bytes(iv[4..8].try_into().unwrap());
        let i1 = (i2 & 0xFFFF_0000) | (i0 >> 16);
        let i3 = (i2 << 16) | (i0 & 0xFFFF);
        let mut s = *self;
        for (j, m) in [i0, i1, i2, i3, i0, i1, i2, i3].iter().enumerate() {
            s.c[j] ^= m;
        }
        for _ in 0..4 {
            s.next_state();
        }
        s
    }

    /// Advances the counter system one step, propagating the carry bit.
    pub fn counter_update(&mut self) {
        let mut carry = self.carry as u64;
        for (c, a) in self.c.iter_mut().zip(A) {
            let t = *c as u64 + a as u64 + carry;
            carry = t >> 32;
            *c = t as u32;
        }
        self.carry = carry != 0;
    }

    /// One full iteration: counter update, g-functions, state recombination.
    pub fn next_state(&mut self) {
        self.counter_update();
        let g: [u32; 8] = std::array::from_fn(|j| g_function(self.x[j], self.c[j]));
        for j in 0..8 {
            self.x[j] = if j % 2 == 0 {
                g[j].wrapping_add(g[(j + 7) % 8].rotate_left(16))
                    .wrapping_add(g[(j + 6) % 8].rotate_left(16))
            } else {
                g[j].wrapping_add(g[(j + 7) % 8].rotate_left(8))
                    .wrapping_add(g[(j + 6) % 8])
            };
        }
    }

    /// Extracts the 128-bit keystream block for the current state.
    pub fn extract(&self) -> [u8; 16] {
        let x = &self.x;
        let k = [
            x[0] ^ ((x[5] >> 16) | (x[3] << 16)),
            x[2] ^ ((x[7] >> 16) | (x[5] << 16)),
            x[4] ^ ((x[1] >> 16) | (x[7] << 16)),
            x[6] ^ ((x[3] >> 16) | (x[1] << 16)),
        ];
        let mut out = [0u8; 16];
        for (i, w) in k.iter().enumerate() {
            out[4 * i..4 * i + 4].copy_from_slice(&w.to_le_bytes());
        }
        out
    }
}

pub(crate) struct RabbitCore {
    master: RabbitState,
    state: RabbitState,
}

impl RabbitCore {
    pub(crate) fn new(key: &[u8; 16], iv: &[u8; 8]) -> RabbitCore {
        let master = RabbitState::key_setup(key);
        let state = master.iv_setup(iv);
        RabbitCore { master, state }
    }

    pub(crate) fn next_block(&mut self, out: &mut [u8; 16]) {
        self.state.next_state();
        *out = self.state.extract();
    }

    pub(crate) fn reset(&mut self, iv: &[u8; 8]) {
        self.state = self.master.iv_setup(iv);
    }
}

impl Drop for RabbitCore {
    fn drop(&mut self) {
        for s in [&mut self.master, &mut self.state] {
            for w in s.x.iter_mut().chain(s.c.iter_mut()) {
                unsafe { std::ptr::write_volatile(w, 0) };
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_function_folds_the_square() {
        assert_eq!(g_function(0, 0), 0);
        assert_eq!(g_function(1, 0), 1);
        // (2^16)^2 = 2^32: low half zero, high half one.
        assert_eq!(g_function(0x1_0000, 0), 1);
        assert_eq!(g_function(0xFFFF_FFFF, 1), 0);
    }

    #[test]
    fn counter_update_from_zero_loads_the_constants() {
        let mut s = RabbitState {
            x: [0; 8],
            c: [0; 8],
            carry: false,
        };
        s.counter_update();
        assert_eq!(s.c, A);
        assert!(!s.carry);
    }

    #[test]
    fn counter_update_propagates_the_carry_chain() {
        let mut s = RabbitState {
            x: [0; 8],
            c: [0xFFFF_FFFF; 8],
            carry: true,
        };
        s.counter_update();
        // Every lane overflows, so each gets its constant and the carry
        // survives to the next update.
        assert_eq!(s.c, A);
        assert!(s.carry);
    }

    #[test]
    fn zero_key_master_state() {
        let s = RabbitState::key_setup(&[0u8; 16]);
        assert_eq!(
            s.x,
            [
                0x6e9e1d18, 0xf5a54e5c, 0xf8fd49c6, 0x9b94253f, 0xdcd14a79, 0x1f32fa20, 0xd2055921,
                0x53f371d0,
            ]
        );
        assert_eq!(
            s.c,
            [
                0xe802074f, 0x5206296d, 0x01486df2, 0x67203ce4, 0x23aace55, 0x26e87a8f, 0xcc2e04f2,
                0xd6a0f672,
            ]
        );
        assert!(s.carry);
    }

    #[test]
    fn zero_key_zero_iv_iterations() {
        let master = RabbitState::key_setup(&[0u8; 16]);
        let mut s = master.iv_setup(&[0u8; 8]);
        s.next_state();
        assert_eq!(
            s.x,
            [
                0xb5c313f5, 0xf36d2608, 0x45816c7d, 0x32cad2c6, 0x801966b5, 0xa418394c, 0xe0af1594,
                0x314a784d,
            ]
        );
        for _ in 0..3 {
            s.next_state();
        }
        assert_eq!(
            s.x,
            [
                0x137280b4, 0x8dbf038f, 0xa4d0fa99, 0x9536d558, 0xe9d244b1, 0x0d0086a9, 0x9befc2d1,
                0xa3cf4edb,
            ]
        );
    }

    #[test]
    fn iv_setup_leaves_the_master_untouched() {
        let mut core = RabbitCore::new(&[3u8; 16], &[1u8; 8]);
        let master = core.master;
        let mut a = [0u8; 16];
        core.next_block(&mut a);
        core.reset(&[2u8; 8]);
        assert_eq!(core.master, master);
        let mut b = [0u8; 16];
        core.next_block(&mut b);
        assert_ne!(a, b);
        // Same IV again reproduces the first block.
        core.reset(&[1u8; 8]);
        let mut c = [0u8; 16];
        core.next_block(&mut c);
        assert_eq!(a, c);
    }
}
