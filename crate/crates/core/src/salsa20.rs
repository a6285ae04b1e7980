//! Salsa20 family: an ARX hash over a 4x4 matrix of 32-bit words, run in
//! counter mode. The round count is a parameter (8, 12 or 20 double-rounds
//! halved to 4/6/10 column+row pairs — callers pass total rounds 8/12/20).
//!
//! 32-byte keys use the "expand 32-byte k" diagonal constants, 16-byte keys
//! repeat the key halves with the "expand 16-byte k" constants. The 64-bit
//! block counter at words 8 and 9 makes the family seekable.

/// Diagonal constants for 32-byte keys ("expand 32-byte k", little-endian).
const SIGMA: [u32; 4] = [0x6170_7865, 0x3320_646e, 0x7962_2d32, 0x6b20_6574];
/// Diagonal constants for 16-byte keys ("expand 16-byte k").
const TAU: [u32; 4] = [0x6170_7865, 0x3120_646e, 0x7962_2d36, 0x6b20_6574];

/// The Salsa20 quarter-round on four words.
pub fn quarter_round(a: u32, b: u32, c: u32, d: u32) -> (u32, u32, u32, u32) {
    let b = b ^ a.wrapping_add(d).rotate_left(7);
    let c = c ^ b.wrapping_add(a).rotate_left(9);
    let d = d ^ c.wrapping_add(b).rotate_left(13);
    let a = a ^ d.wrapping_add(c).rotate_left(18);
    (a, b, c, d)
}

/// One double-round: quarter-rounds down the columns, then along the rows.
pub fn double_round(w: &mut [u32; 16]) {
    const COLUMNS: [[usize; 4]; 4] = [[0, 4, 8, 12], [5, 9, 13, 1], [10, 14, 2, 6], [15, 3, 7, 11]];
    const ROWS: [[usize; 4]; 4] = [[0, 1, 2, 3], [5, 6, 7, 4], [10, 11, 8, 9], [15, 12, 13, 14]];
    for idx in COLUMNS.iter().chain(ROWS.iter()) {
        let (a, b, c, d) = quarter_round(w[idx[0]], w[idx[1]], w[idx[2]], w[idx[3]]);
        w[idx[0]] = a;
        w[idx[1]] = b;
        w[idx[2]] = c;
        w[idx[3]] = d;
    }
}

/// The core hash: `rounds / 2` double-rounds over `input`, plus the
/// feed-forward addition, serialized little-endian.
pub fn salsa_block(input: &[u32; 16], rounds: u32) -> [u8; 64] {
    debug_assert!(rounds.is_multiple_of(2));
    let mut w = *input;
    for _ in 0..rounds / 2 {
        double_round(&mut w);
    }
    let mut out = [0u8; 64];
    for (i, (word, init)) in w.iter().zip(input.iter()).enumerate() {
        out[4 * i..4 * i + 4].copy_from_slice(&word.wrapping_add(*init).to_le_bytes());
    }
    out
}

pub(crate) struct SalsaCore {
    // Matrix template; words 8 and 9 are overwritten from `counter` per block.
    words: [u32; 16],
    counter: u64,
    rounds: u32,
}

fn le_words<const N: usize>(bytes: &[u8]) -> [u32; N] {
    let mut out = [0u32; N];
    for (i, chunk) in bytes.chunks_exact(4).enumerate() {
        out[i] = u32::from_le_bytes(chunk.try_into().unwrap());
    }
    out
}

impl SalsaCore {
    /// `key` must be 16 or 32 bytes (validated by the caller).
    pub(crate) fn new(key: &[u8], iv: &[u8; 8], rounds: u32) -> SalsaCore {
        let mut w = [0u32; 16];
        let (consts, k0, k1): (&[u32; 4], [u32; 4], [u32; 4]) = if key.len() == 32 {
            (&SIGMA, le_words(&key[..16]), le_words(&key[16..]))
        } else {
            let k: [u32; 4] = le_words(key);
            (&TAU, k, k)
        };
        w[0] = consts[0];
        w[5] = consts[1];
        w[10] = consts[2];
        w[15] = consts[3];
        w[1..5].copy_from_slice(&k0);
        w[11..15].copy_from_slice(&k1);
        let n: [u32; 2] = le_words(iv);
        w[6] = n[0];
        w[7] = n[1];
        SalsaCore {
            words: w,
            counter: 0,
            rounds,
        }
    }

    pub(crate) fn next_block(&mut self, out: &mut [u8; 64]) {
        self.words[8] = self.counter as u32;
        self.words[9] = (self.counter >> 32) as u32;
        *out = salsa_block(&self.words, self.rounds);
        self.counter += 1;
    }

    pub(crate) fn reset(&mut self, iv: &[u8; 8]) {
        let n: [u32; 2] = le_words(iv);
        self.words[6] = n[0];
        self.words[7] = n[1];
        self.counter = 0;
    }

    pub(crate) fn set_counter(&mut self, block: u64) {
        self.counter = block;
    }
}

impl Drop for SalsaCore {
    fn drop(&mut self) {
        for w in &mut self.words {
            unsafe { std::ptr::write_volatile(w, 0) };
        }
    }
}
