//! Cipher registry, shared error type, and the buffered stream interface
//! every cipher is driven through.

use std::fmt;
use std::str::FromStr;

use crate::hc128::Hc128Core;
use crate::rabbit::RabbitCore;
use crate::salsa20::SalsaCore;
use crate::sosemanuk::SosemanukCore;

/// Hard cap on how far a single (key, IV) stream may run: 2^38 bytes.
///
/// This is the tightest per-stream limit among the four ciphers (Rabbit's
/// security claim covers 2^64 128-bit blocks, Salsa20's counter 2^64 64-byte
/// blocks, but HC-128 and Sosemanuk are specified for at most 2^64 bits
/// ≈ 2^61 bytes; 2^38 ≈ 256 GiB leaves a wide safety margin for all four
/// and keeps position arithmetic trivially overflow-free in `u64`).
pub const STREAM_LENGTH_CAP: u64 = 1 << 38;

/// Identifies one concrete cipher (including the Salsa20 round-count
/// variants kept for benchmarking comparisons).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CipherId {
    /// Salsa20 with 8 double-rounds (the eSTREAM portfolio choice).
    Salsa20_12,
    /// Reduced-round Salsa20 variant.
    Salsa20_8,
    /// Full-round Salsa20 variant.
    Salsa20_20,
    Rabbit,
    Hc128,
    Sosemanuk,
}

impl CipherId {
    /// Every selectable cipher.
    pub const ALL: [CipherId; 6] = [
        CipherId::Salsa20_12,
        CipherId::Salsa20_8,
        CipherId::Salsa20_20,
        CipherId::Rabbit,
        CipherId::Hc128,
        CipherId::Sosemanuk,
    ];

    /// The four portfolio members, in the column order used by the bundled
    /// reference measurements.
    pub const PORTFOLIO: [CipherId; 4] = [
        CipherId::Hc128,
        CipherId::Rabbit,
        CipherId::Sosemanuk,
        CipherId::Salsa20_12,
    ];

    /// Canonical text name, as used in vector files and CSV output.
    pub fn name(self) -> &'static str {
        match self {
            CipherId::Salsa20_12 => "SALSA20_12",
            CipherId::Salsa20_8 => "SALSA20_8",
            CipherId::Salsa20_20 => "SALSA20_20",
            CipherId::Rabbit => "RABBIT",
            CipherId::Hc128 => "HC128",
            CipherId::Sosemanuk => "SOSEMANUK",
        }
    }

    /// Human-readable description of the accepted key lengths.
    pub fn key_length_rule(self) -> &'static str {
        match self {
            CipherId::Salsa20_12 | CipherId::Salsa20_8 | CipherId::Salsa20_20 => "16 or 32",
            CipherId::Rabbit | CipherId::Hc128 => "16",
            CipherId::Sosemanuk => "16 to 32",
        }
    }

    /// Whether `len` is an accepted key length in bytes.
    pub fn key_length_ok(self, len: usize) -> bool {
        match self {
            CipherId::Salsa20_12 | CipherId::Salsa20_8 | CipherId::Salsa20_20 => {
                len == 16 || len == 32
            }
            CipherId::Rabbit | CipherId::Hc128 => len == 16,
            CipherId::Sosemanuk => (16..=32).contains(&len),
        }
    }

    /// Required IV length in bytes.
    pub fn iv_length(self) -> usize {
        match self {
            CipherId::Salsa20_12 | CipherId::Salsa20_8 | CipherId::Salsa20_20 => 8,
            CipherId::Rabbit => 8,
            CipherId::Hc128 | CipherId::Sosemanuk => 16,
        }
    }

    /// Native keystream block size in bytes.
    pub fn block_size(self) -> usize {
        match self {
            CipherId::Salsa20_12 | CipherId::Salsa20_8 | CipherId::Salsa20_20 => 64,
            CipherId::Rabbit => 16,
            CipherId::Hc128 => 4,
            CipherId::Sosemanuk => 16,
        }
    }

    /// Whether random access into the keystream is supported.
    pub fn seekable(self) -> bool {
        matches!(
            self,
            CipherId::Salsa20_12 | CipherId::Salsa20_8 | CipherId::Salsa20_20
        )
    }

    /// Key length used when none is otherwise dictated (benchmarks, demos).
    pub fn default_key_length(self) -> usize {
        match self {
            CipherId::Rabbit | CipherId::Hc128 => 16,
            _ => 32,
        }
    }
}

impl fmt::Display for CipherId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for CipherId {
    type Err = UnknownCipher;

    fn from_str(s: &str) -> Result<Self, UnknownCipher> {
        let norm: String = s
            .chars()
            .map(|c| match c {
                '-' | '/' => '_',
                c => c.to_ascii_uppercase(),
            })
            .collect();
        match norm.as_str() {
            "SALSA20_12" | "SALSA20" => Ok(CipherId::Salsa20_12),
            "SALSA20_8" => Ok(CipherId::Salsa20_8),
            "SALSA20_20" => Ok(CipherId::Salsa20_20),
            "RABBIT" => Ok(CipherId::Rabbit),
            "HC128" | "HC_128" => Ok(CipherId::Hc128),
            "SOSEMANUK" => Ok(CipherId::Sosemanuk),
            _ => Err(UnknownCipher(s.to_string())),
        }
    }
}

/// A cipher name that did not match any known [`CipherId`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown cipher {0:?} (expected one of SALSA20_12, SALSA20_8, SALSA20_20, RABBIT, HC128, SOSEMANUK)")]
pub struct UnknownCipher(pub String);

/// Errors surfaced by cipher construction and keystream generation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CipherError {
    #[error("{cipher}: bad key length: expected {expected} bytes, got {got}")]
    BadKeyLength {
        cipher: CipherId,
        expected: &'static str,
        got: usize,
    },
    #[error("{cipher}: bad IV length: expected {expected} bytes, got {got}")]
    BadIvLength {
        cipher: CipherId,
        expected: usize,
        got: usize,
    },
    #[error(
        "stream position overflow: {requested} bytes past position {position} \
         exceeds the per-stream cap of 2^38 bytes"
    )]
    PositionOverflow { position: u64, requested: u64 },
    #[error("{cipher}: keystream seeking is not supported")]
    NotSeekable { cipher: CipherId },
}

enum Core {
    Salsa(SalsaCore),
    Rabbit(RabbitCore),
    Hc128(Box<Hc128Core>),
    Sosemanuk(Box<SosemanukCore>),
}

impl Core {
    fn next_block(&mut self, out: &mut [u8]) {
        match self {
            Core::Salsa(c) => c.next_block(out.try_into().expect("64-byte block")),
            Core::Rabbit(c) => c.next_block(out.try_into().expect("16-byte block")),
            Core::Hc128(c) => c.next_block(out.try_into().expect("4-byte block")),
            Core::Sosemanuk(c) => c.next_block(out.try_into().expect("16-byte block")),
        }
    }

    fn reset(&mut self, iv: &[u8]) {
        match self {
            Core::Salsa(c) => c.reset(iv.try_into().expect("8-byte IV")),
            Core::Rabbit(c) => c.reset(iv.try_into().expect("8-byte IV")),
            Core::Hc128(c) => c.reset(iv.try_into().expect("16-byte IV")),
            Core::Sosemanuk(c) => c.reset(iv.try_into().expect("16-byte IV")),
        }
    }
}

/// A keyed, IV-loaded stream cipher positioned somewhere in its keystream.
///
/// The instance buffers the unconsumed tail of the cipher's native block, so
/// callers may request keystream in arbitrary byte counts:
///
/// ```
/// use estream_portfolio::{CipherId, CipherInstance};
///
/// let mut c = CipherInstance::new(CipherId::Salsa20_12, &[0u8; 32], &[0u8; 8]).unwrap();
/// let a = c.keystream(5).unwrap();
/// let b = c.keystream(11).unwrap();
/// let mut d = CipherInstance::new(CipherId::Salsa20_12, &[0u8; 32], &[0u8; 8]).unwrap();
/// assert_eq!([a, b].concat(), d.keystream(16).unwrap());
/// ```
pub struct CipherInstance {
    id: CipherId,
    core: Core,
    position: u64,
    // Unconsumed keystream from the most recent native block.
    buf: [u8; 64],
    buf_start: usize,
    buf_len: usize,
}

// Deliberately omits the internal state: instances hold key material.
impl fmt::Debug for CipherInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CipherInstance")
            .field("id", &self.id)
            .field("position", &self.position)
            .finish_non_exhaustive()
    }
}

impl CipherInstance {
    /// Keys and IV-loads a cipher. Key and IV lengths are validated against
    /// the rules of `id` (see [`CipherId::key_length_ok`] and
    /// [`CipherId::iv_length`]).
    pub fn new(id: CipherId, key: &[u8], iv: &[u8]) -> Result<CipherInstance, CipherError> {
        if !id.key_length_ok(key.len()) {
            return Err(CipherError::BadKeyLength {
                cipher: id,
                expected: id.key_length_rule(),
                got: key.len(),
            });
        }
        if iv.len() != id.iv_length() {
            return Err(CipherError::BadIvLength {
                cipher: id,
                expected: id.iv_length(),
                got: iv.len(),
            });
        }
        let core = match id {
            CipherId::Salsa20_12 => Core::Salsa(SalsaCore::new(key, iv.try_into().unwrap(), 12)),
            CipherId::Salsa20_8 => Core::Salsa(SalsaCore::new(key, iv.try_into().unwrap(), 8)),
            CipherId::Salsa20_20 => Core::Salsa(SalsaCore::new(key, iv.try_into().unwrap(), 20)),
            CipherId::Rabbit => Core::Rabbit(RabbitCore::new(
                key.try_into().unwrap(),
                iv.try_into().unwrap(),
            )),
            CipherId::Hc128 => Core::Hc128(Box::new(Hc128Core::new(
                key.try_into().unwrap(),
                iv.try_into().unwrap(),
            ))),
            CipherId::Sosemanuk => {
                Core::Sosemanuk(Box::new(SosemanukCore::new(key, iv.try_into().unwrap())))
            }
        };
        Ok(CipherInstance {
            id,
            core,
            position: 0,
            buf: [0u8; 64],
            buf_start: 0,
            buf_len: 0,
        })
    }

    pub fn id(&self) -> CipherId {
        self.id
    }

    /// Byte offset of the next keystream byte this instance will produce.
    pub fn position(&self) -> u64 {
        self.position
    }

    fn check_budget(&self, n: u64) -> Result<(), CipherError> {
        if n > STREAM_LENGTH_CAP - self.position {
            return Err(CipherError::PositionOverflow {
                position: self.position,
                requested: n,
            });
        }
        Ok(())
    }

    fn fill(&mut self, out: &mut [u8]) {
        let mut done = 0;
        let n = out.len();
        // Drain the buffered tail of the previous block first.
        if self.buf_len > 0 {
            let take = self.buf_len.min(n);
            out[..take].copy_from_slice(&self.buf[self.buf_start..self.buf_start + take]);
            self.buf_start += take;
            self.buf_len -= take;
            done = take;
        }
        let bs = self.id.block_size();
        while n - done >= bs {
            self.core.next_block(&mut out[done..done + bs]);
            done += bs;
        }
        if done < n {
            self.core.next_block(&mut self.buf[..bs]);
            let take = n - done;
            out[done..].copy_from_slice(&self.buf[..take]);
            self.buf_start = take;
            self.buf_len = bs - take;
        }
        self.position += n as u64;
    }

    /// Produces the next `n` keystream bytes.
    pub fn keystream(&mut self, n: usize) -> Result<Vec<u8>, CipherError> {
        self.check_budget(n as u64)?;
        let mut out = vec![0u8; n];
        self.fill(&mut out);
        Ok(out)
    }

    /// XORs the next keystream bytes into `data`. Encryption and decryption
    /// are the same operation.
    pub fn apply_in_place(&mut self, data: &mut [u8]) -> Result<(), CipherError> {
        self.check_budget(data.len() as u64)?;
        let mut ks = [0u8; 4096];
        let mut off = 0;
        while off < data.len() {
            let take = (data.len() - off).min(ks.len());
            self.fill(&mut ks[..take]);
            for (d, k) in data[off..off + take].iter_mut().zip(&ks[..take]) {
                *d ^= k;
            }
            off += take;
        }
        Ok(())
    }

    /// XORs the next keystream bytes against `data`, returning the result.
    pub fn apply(&mut self, data: &[u8]) -> Result<Vec<u8>, CipherError> {
        let mut out = data.to_vec();
        self.apply_in_place(&mut out)?;
        Ok(out)
    }

    /// Rewinds to keystream position 0 under the same key and a (possibly
    /// new) IV. Cheap for Rabbit, which retains its post-key-setup master
    /// state; HC-128 and Sosemanuk rerun their initialization.
    pub fn reset(&mut self, iv: &[u8]) -> Result<(), CipherError> {
        if iv.len() != self.id.iv_length() {
            return Err(CipherError::BadIvLength {
                cipher: self.id,
                expected: self.id.iv_length(),
                got: iv.len(),
            });
        }
        self.core.reset(iv);
        self.position = 0;
        self.buf_start = 0;
        self.buf_len = 0;
        Ok(())
    }

    /// Jumps to an absolute keystream byte offset. Only the Salsa20 family
    /// supports this (its block counter gives O(1) random access); the other
    /// ciphers return [`CipherError::NotSeekable`].
    pub fn seek(&mut self, offset: u64) -> Result<(), CipherError> {
        if offset > STREAM_LENGTH_CAP {
            return Err(CipherError::PositionOverflow {
                position: self.position,
                requested: offset,
            });
        }
        let Core::Salsa(core) = &mut self.core else {
            return Err(CipherError::NotSeekable { cipher: self.id });
        };
        let bs = self.id.block_size() as u64;
        core.set_counter(offset / bs);
        self.buf_start = 0;
        self.buf_len = 0;
        self.position = offset - offset % bs;
        if !offset.is_multiple_of(bs) {
            // Discard the head of the block to land mid-block.
            let skip = (offset % bs) as usize;
            let mut scratch = [0u8; 64];
            self.fill(&mut scratch[..skip]);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for id in CipherId::ALL {
            assert_eq!(id.name().parse::<CipherId>().unwrap(), id);
            assert_eq!(id.name().to_lowercase().parse::<CipherId>().unwrap(), id);
        }
        assert_eq!(
            "salsa20/12".parse::<CipherId>().unwrap(),
            CipherId::Salsa20_12
        );
        assert!("vernam".parse::<CipherId>().is_err());
    }

    #[test]
    fn key_and_iv_lengths_validated() {
        let err = CipherInstance::new(CipherId::Rabbit, &[0u8; 15], &[0u8; 8]).unwrap_err();
        assert_eq!(
            err,
            CipherError::BadKeyLength {
                cipher: CipherId::Rabbit,
                expected: "16",
                got: 15
            }
        );
        let err = CipherInstance::new(CipherId::Hc128, &[0u8; 16], &[0u8; 8]).unwrap_err();
        assert_eq!(
            err,
            CipherError::BadIvLength {
                cipher: CipherId::Hc128,
                expected: 16,
                got: 8
            }
        );
        // Sosemanuk accepts any key length from 16 to 32 bytes.
        for len in 16..=32 {
            assert!(CipherInstance::new(CipherId::Sosemanuk, &vec![7u8; len], &[0u8; 16]).is_ok());
        }
    }

    #[test]
    fn apply_is_an_involution() {
        for id in CipherId::ALL {
            let key = vec![0x42u8; id.default_key_length()];
            let iv = vec![0x17u8; id.iv_length()];
            let msg: Vec<u8> = (0..1000u32).map(|i| (i * 7 + 3) as u8).collect();
            let mut enc = CipherInstance::new(id, &key, &iv).unwrap();
            let ct = enc.apply(&msg).unwrap();
            assert_ne!(ct, msg, "{id}: ciphertext equals plaintext");
            let mut dec = CipherInstance::new(id, &key, &iv).unwrap();
            assert_eq!(dec.apply(&ct).unwrap(), msg, "{id}: roundtrip failed");
        }
    }

    #[test]
    fn chunking_does_not_change_the_stream() {
        for id in CipherId::ALL {
            let key = vec![0x99u8; id.default_key_length()];
            let iv = vec![0x01u8; id.iv_length()];
            let mut whole = CipherInstance::new(id, &key, &iv).unwrap();
            let expected = whole.keystream(257).unwrap();
            let mut pieces = CipherInstance::new(id, &key, &iv).unwrap();
            let mut got = Vec::new();
            for n in [1usize, 2, 3, 5, 63, 64, 65, 30, 17, 7] {
                got.extend(pieces.keystream(n).unwrap());
            }
            assert_eq!(got, expected, "{id}: chunked stream diverged");
            assert_eq!(pieces.position(), 257);
        }
    }

    #[test]
    fn position_cap_enforced() {
        let mut c = CipherInstance::new(CipherId::Rabbit, &[0u8; 16], &[0u8; 8]).unwrap();
        c.keystream(16).unwrap();
        let err = c.keystream(usize::MAX).unwrap_err();
        assert!(matches!(
            err,
            CipherError::PositionOverflow { position: 16, .. }
        ));
        // Position is unchanged after a refused request.
        assert_eq!(c.position(), 16);
    }

    #[test]
    fn reset_rewinds_to_the_same_stream() {
        for id in CipherId::ALL {
            let key = vec![0xabu8; id.default_key_length()];
            let iv = vec![0xcdu8; id.iv_length()];
            let mut c = CipherInstance::new(id, &key, &iv).unwrap();
            let first = c.keystream(100).unwrap();
            c.keystream(33).unwrap();
            c.reset(&iv).unwrap();
            assert_eq!(c.position(), 0);
            assert_eq!(c.keystream(100).unwrap(), first, "{id}: reset diverged");
        }
    }

    #[test]
    fn reset_with_new_iv_changes_the_stream() {
        for id in CipherId::ALL {
            let key = vec![0x55u8; id.default_key_length()];
            let iv1 = vec![0u8; id.iv_length()];
            let mut iv2 = iv1.clone();
            iv2[0] = 1;
            let mut c = CipherInstance::new(id, &key, &iv1).unwrap();
            let s1 = c.keystream(64).unwrap();
            c.reset(&iv2).unwrap();
            let s2 = c.keystream(64).unwrap();
            assert_ne!(s1, s2, "{id}: IV change did not affect the stream");
        }
    }

    #[test]
    fn seek_matches_sequential_generation() {
        let key = [7u8; 32];
        let iv = [9u8; 8];
        let mut seq = CipherInstance::new(CipherId::Salsa20_12, &key, &iv).unwrap();
        let stream = seq.keystream(512).unwrap();
        let mut rnd = CipherInstance::new(CipherId::Salsa20_12, &key, &iv).unwrap();
        for off in [0u64, 1, 63, 64, 65, 200, 511, 96] {
            rnd.seek(off).unwrap();
            assert_eq!(rnd.position(), off);
            let got = rnd.keystream(1).unwrap();
            assert_eq!(got[0], stream[off as usize], "seek({off}) mismatch");
        }
    }

    #[test]
    fn seek_refused_off_the_salsa_family() {
        for id in [CipherId::Rabbit, CipherId::Hc128, CipherId::Sosemanuk] {
            let key = vec![0u8; id.default_key_length()];
            let iv = vec![0u8; id.iv_length()];
            let mut c = CipherInstance::new(id, &key, &iv).unwrap();
            assert_eq!(
                c.seek(64).unwrap_err(),
                CipherError::NotSeekable { cipher: id }
            );
            assert!(!id.seekable());
        }
    }
}
