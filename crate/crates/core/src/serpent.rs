//! The reduced 24-round Serpent block transform used by Sosemanuk's key and
//! IV setup, in the standard bitsliced representation (each of the four
//! `u32` lanes carries one bit of 32 parallel S-box applications).
//!
//! All 24 rounds apply the linear transform; the final round key `K_24` is
//! XORed after the last round. The states after rounds 12 and 18 are
//! exported alongside the final output, since Sosemanuk seeds its LFSR and
//! FSM from all three.

const GOLDEN_RATIO: u32 = 0x9E37_79B9;

pub(crate) fn sbox0(x: [u32; 4]) -> [u32; 4] {
    let [mut r0, mut r1, mut r2, mut r3] = x;
    let mut r4: u32;
    r3 ^= r0;
    r4 = r1;
    r1 &= r3;
    r4 ^= r2;
    r1 ^= r0;
    r0 |= r3;
    r0 ^= r4;
    r4 ^= r3;
    r3 ^= r2;
    r2 |= r1;
    r2 ^= r4;
    r4 = !r4;
    r4 |= r1;
    r1 ^= r3;
    r1 ^= r4;
    r3 |= r0;
    r1 ^= r3;
    r4 ^= r3;
    [r1, r4, r2, r0]
}

pub(crate) fn sbox1(x: [u32; 4]) -> [u32; 4] {
    let [mut r0, mut r1, mut r2, mut r3] = x;
    let mut r4: u32;
    r0 = !r0;
    r2 = !r2;
    r4 = r0;
    r0 &= r1;
    r2 ^= r0;
    r0 |= r3;
    r3 ^= r2;
    r1 ^= r0;
    r0 ^= r4;
    r4 |= r1;
    r1 ^= r3;
    r2 |= r0;
    r2 &= r4;
    r0 ^= r1;
    r1 &= r2;
    r1 ^= r0;
    r0 &= r2;
    r0 ^= r4;
    [r2, r0, r3, r1]
}

pub(crate) fn sbox2(x: [u32; 4]) -> [u32; 4] {
    let [mut r0, mut r1, mut r2, mut r3] = x;
    let mut r4 = r0;
    r0 &= r2;
    r0 ^= r3;
    r2 ^= r1;
    r2 ^= r0;
    r3 |= r4;
    r3 ^= r1;
    r4 ^= r2;
    r1 = r3;
    r3 |= r4;
    r3 ^= r0;
    r0 &= r1;
    r4 ^= r0;
    r1 ^= r3;
    r1 ^= r4;
    r4 = !r4;
    [r2, r3, r1, r4]
}

pub(crate) fn sbox3(x: [u32; 4]) -> [u32; 4] {
    let [mut r0, mut r1, mut r2, mut r3] = x;
    let mut r4 = r0;
    r0 |= r3;
    r3 ^= r1;
    r1 &= r4;
    r4 ^= r2;
    r2 ^= r3;
    r3 &= r0;
    r4 |= r1;
    r3 ^= r4;
    r0 ^= r1;
    r4 &= r0;
    r1 ^= r3;
    r4 ^= r2;
    r1 |= r0;
    r1 ^= r2;
    r0 ^= r3;
    r2 = r1;
    r1 |= r3;
    r1 ^= r0;
    [r1, r2, r3, r4]
}

pub(crate) fn sbox4(x: [u32; 4]) -> [u32; 4] {
    let [mut r0, mut r1, mut r2, mut r3] = x;
    let mut r4: u32;
    r1 ^= r3;
    r3 = !r3;
    r2 ^= r3;
    r3 ^= r0;
    r4 = r1;
    r1 &= r3;
    r1 ^= r2;
    r4 ^= r3;
    r0 ^= r4;
    r2 &= r4;
    r2 ^= r0;
    r0 &= r1;
    r3 ^= r0;
    r4 |= r1;
    r4 ^= r0;
    r0 |= r3;
    r0 ^= r2;
    r2 &= r3;
    r0 = !r0;
    r4 ^= r2;
    [r1, r4, r0, r3]
}

pub(crate) fn sbox5(x: [u32; 4]) -> [u32; 4] {
    let [mut r0, mut r1, mut r2, mut r3] = x;
    let mut r4: u32;
    r0 ^= r1;
    r1 ^= r3;
    r3 = !r3;
    r4 = r1;
    r1 &= r0;
    r2 ^= r3;
    r1 ^= r2;
    r2 |= r4;
    r4 ^= r3;
    r3 &= r1;
    r3 ^= r0;
    r4 ^= r1;
    r4 ^= r2;
    r2 ^= r0;
    r0 &= r3;
    r2 = !r2;
    r0 ^= r4;
    r4 |= r3;
    r2 ^= r4;
    [r1, r3, r0, r2]
}

pub(crate) fn sbox6(x: [u32; 4]) -> [u32; 4] {
    let [mut r0, mut r1, mut r2, mut r3] = x;
    let mut r4: u32;
    r2 = !r2;
    r4 = r3;
    r3 &= r0;
    r0 ^= r4;
    r3 ^= r2;
    r2 |= r4;
    r1 ^= r3;
    r2 ^= r0;
    r0 |= r1;
    r2 ^= r1;
    r4 ^= r0;
    r0 |= r3;
    r0 ^= r2;
    r4 ^= r3;
    r4 ^= r0;
    r3 = !r3;
    r2 &= r4;
    r2 ^= r3;
    [r0, r1, r4, r2]
}

pub(crate) fn sbox7(x: [u32; 4]) -> [u32; 4] {
    let [mut r0, mut r1, mut r2, mut r3] = x;
    let mut r4 = r1;
    r1 |= r2;
    r1 ^= r3;
    r4 ^= r2;
    r2 ^= r1;
    r3 |= r4;
    r3 &= r0;
    r4 ^= r2;
    r3 ^= r1;
    r1 |= r4;
    r1 ^= r0;
    r0 |= r4;
    r0 ^= r2;
    r1 ^= r4;
    r2 ^= r1;
    r1 &= r0;
    r1 ^= r4;
    r2 = !r2;
    r2 |= r0;
    r4 ^= r2;
    [r4, r3, r1, r0]
}

pub(crate) fn sbox(index: usize, x: [u32; 4]) -> [u32; 4] {
    match index {
        0 => sbox0(x),
        1 => sbox1(x),
        2 => sbox2(x),
        3 => sbox3(x),
        4 => sbox4(x),
        5 => sbox5(x),
        6 => sbox6(x),
        7 => sbox7(x),
        _ => unreachable!("S-box index out of range"),
    }
}

/// The Serpent linear transform on a bitsliced state.
pub(crate) fn linear(x: [u32; 4]) -> [u32; 4] {
    let [mut r0, mut r1, mut r2, mut r3] = x;
    r0 = r0.rotate_left(13);
    r2 = r2.rotate_left(3);
    r1 ^= r0 ^ r2;
    r3 ^= r2 ^ (r0 << 3);
    r1 = r1.rotate_left(1);
    r3 = r3.rotate_left(7);
    r0 ^= r1 ^ r3;
    r2 ^= r3 ^ (r1 << 7);
    r0 = r0.rotate_left(5);
    r2 = r2.rotate_left(22);
    [r0, r1, r2, r3]
}

/// Expands a 16..=32-byte key into the 25 round keys (100 words) used by
/// the 24-round transform. Short keys are padded with a single 0x01 byte
/// followed by zeros.
pub(crate) fn key_schedule(key: &[u8]) -> [u32; 100] {
    debug_assert!((16..=32).contains(&key.len()));
    let mut padded = [0u8; 32];
    padded[..key.len()].copy_from_slice(key);
    if key.len() < 32 {
        padded[key.len()] = 0x01;
    }
    let mut w = [0u32; 108]; // 8 preload words + 100 schedule words
    for (i, chunk) in padded.chunks_exact(4).enumerate() {
        w[i] = u32::from_le_bytes(chunk.try_into().unwrap());
    }
    for i in 0..100 {
        w[i + 8] =
            (w[i] ^ w[i + 3] ^ w[i + 5] ^ w[i + 7] ^ GOLDEN_RATIO ^ i as u32).rotate_left(11);
    }
    let mut subkeys = [0u32; 100];
    for j in 0..25 {
        let words = [w[8 + 4 * j], w[9 + 4 * j], w[10 + 4 * j], w[11 + 4 * j]];
        subkeys[4 * j..4 * j + 4].copy_from_slice(&sbox((3 + 8 - j % 8) % 8, words));
    }
    subkeys
}

/// Runs the 24-round transform on one 128-bit block, returning the
/// intermediate states after rounds 12 and 18 and the final output.
pub(crate) fn serpent24(subkeys: &[u32; 100], block: [u32; 4]) -> ([u32; 4], [u32; 4], [u32; 4]) {
    let mut state = block;
    let mut y12 = [0u32; 4];
    let mut y18 = [0u32; 4];
    for r in 0..24 {
        for i in 0..4 {
            state[i] ^= subkeys[4 * r + i];
        }
        state = sbox(r % 8, state);
        state = linear(state);
        if r == 11 {
            y12 = state;
        } else if r == 17 {
            y18 = state;
        }
    }
    for i in 0..4 {
        state[i] ^= subkeys[96 + i];
    }
    (y12, y18, state)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Serpent S-boxes as nibble permutations, for cross-checking the
    // bitsliced boolean formulas above.
    const SBOX_TABLES: [[u8; 16]; 8] = [
        [3, 8, 15, 1, 10, 6, 5, 11, 14, 13, 4, 2, 7, 0, 9, 12],
        [15, 12, 2, 7, 9, 0, 5, 10, 1, 11, 14, 8, 6, 13, 3, 4],
        [8, 6, 7, 9, 3, 12, 10, 15, 13, 1, 14, 4, 0, 11, 5, 2],
        [0, 15, 11, 8, 12, 9, 6, 3, 13, 1, 2, 4, 10, 7, 5, 14],
        [1, 15, 8, 3, 12, 0, 11, 6, 2, 5, 4, 10, 9, 14, 7, 13],
        [15, 5, 2, 11, 4, 10, 9, 12, 0, 3, 14, 8, 13, 6, 7, 1],
        [7, 2, 12, 5, 8, 4, 6, 11, 14, 9, 1, 15, 13, 3, 10, 0],
        [1, 13, 15, 0, 14, 8, 2, 11, 7, 4, 12, 10, 9, 3, 5, 6],
    ];

    fn bitsliced_from_nibble(table: &[u8; 16], input: u8) -> u8 {
        // Feed the nibble through a one-bit-wide slice of the formulas.
        let x: [u32; 4] = std::array::from_fn(|i| ((input >> i) & 1) as u32);
        let idx = SBOX_TABLES.iter().position(|t| t == table).unwrap();
        let y = sbox(idx, x);
        (0..4).fold(0u8, |acc, i| acc | (((y[i] & 1) as u8) << i))
    }

    #[test]
    fn boolean_formulas_match_the_nibble_tables() {
        for table in &SBOX_TABLES {
            for input in 0u8..16 {
                assert_eq!(bitsliced_from_nibble(table, input), table[input as usize]);
            }
        }
    }

    #[test]
    fn zero_key_schedule_endpoints() {
        let subkeys = key_schedule(&[0u8; 16]);
        assert_eq!(
            &subkeys[0..4],
            &[0x6f57_9dd2, 0xa7a3_a3ce, 0xf299_90ed, 0x8ed7_7392]
        );
        assert_eq!(
            &subkeys[96..100],
            &[0x9237_2bc2, 0x0fe1_07a2, 0x7ea9_08d8, 0xd2f3_ec0f]
        );
    }

    #[test]
    fn zero_key_zero_block_intermediates() {
        let subkeys = key_schedule(&[0u8; 16]);
        let (y12, y18, y24) = serpent24(&subkeys, [0u32; 4]);
        assert_eq!(y12, [0x41d7_2d13, 0xda1b_9f75, 0xf7a7_c72d, 0x74b5_7f3a]);
        assert_eq!(y18, [0xff4e_63f3, 0xc9b2_7820, 0xbc17_d4b5, 0xe918_afbf]);
        assert_eq!(y24, [0x67ff_2675, 0xaedd_77fe, 0xc1aa_91e2, 0x17a7_d515]);
    }
}
