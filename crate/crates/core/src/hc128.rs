//! HC-128: two secret 512-word tables `P` and `Q`, one of which is updated
//! and read per step while the other serves as the S-box for the output
//! filter. Key and IV are 128 bits each; each step yields 32 bits.
//!
//! Initialization expands key and IV into a 1280-word schedule, loads `P`
//! and `Q` from it, and runs the cipher for 1024 steps with the output fed
//! back into the tables.

/// First schedule/update filter: `x>>>7 ^ x>>>18 ^ x>>3`.
pub fn f1(x: u32) -> u32 {
    x.rotate_right(7) ^ x.rotate_right(18) ^ (x >> 3)
}

/// Second schedule/update filter: `x>>>17 ^ x>>>19 ^ x>>10`.
pub fn f2(x: u32) -> u32 {
    x.rotate_right(17) ^ x.rotate_right(19) ^ (x >> 10)
}

/// Update function for the `P` half (right rotations).
pub fn g1(x: u32, y: u32, z: u32) -> u32 {
    (x.rotate_right(10) ^ z.rotate_right(23)).wrapping_add(y.rotate_right(8))
}

/// Update function for the `Q` half (left rotations, mirroring [`g1`]).
pub fn g2(x: u32, y: u32, z: u32) -> u32 {
    (x.rotate_left(10) ^ z.rotate_left(23)).wrapping_add(y.rotate_left(8))
}

pub struct Hc128Core {
    p: [u32; 512],
    q: [u32; 512],
    // Step counter modulo 1024: 0..512 updates P, 512..1024 updates Q.
    cnt: usize,
    key: [u8; 16],
}

// Index j minus d, wrapping within a 512-entry table.
fn m512(j: usize, d: usize) -> usize {
    (j + 512 - d) % 512
}

impl Hc128Core {
    pub fn new(key: &[u8; 16], iv: &[u8; 16]) -> Hc128Core {
        let mut core = Hc128Core {
            p: [0; 512],
            q: [0; 512],
            cnt: 0,
            key: *key,
        };
        core.init(iv);
        core
    }

    fn init(&mut self, iv: &[u8; 16]) {
        let mut w = vec![0u32; 1280];
        for i in 0..4 {
            let k = u32::from_le_bytes(self.key[4 * i..4 * i + 4].try_into().unwrap());
            let v = u32::from_le_bytes(iv[4 * i..4 * i + 4].try_into().unwrap());
            w[i] = k;
            w[i + 4] = k;
            w[i + 8] = v;
            w[i + 12] = v;
        }
        for i in 16..1280 {
            w[i] = f2(w[i - 2])
                .wrapping_add(w[i - 7])
                .wrapping_add(f1(w[i - 15]))
                .wrapping_add(w[i - 16])
                .wrapping_add(i as u32);
        }
        self.p.copy_from_slice(&w[256..768]);
        self.q.copy_from_slice(&w[768..1280]);
        self.cnt = 0;
        // Run the cipher for 1024 steps, replacing each freshly updated
        // table entry with the step's output.
        for _ in 0..1024 {
            let slot = self.cnt;
            let s = self.step();
            if slot < 512 {
                self.p[slot] = s;
            } else {
                self.q[slot - 512] = s;
            }
        }
    }

    fn h1(&self, x: u32) -> u32 {
        self.q[(x & 0xff) as usize].wrapping_add(self.q[256 + ((x >> 16) & 0xff) as usize])
    }

    fn h2(&self, x: u32) -> u32 {
        self.p[(x & 0xff) as usize].wrapping_add(self.p[256 + ((x >> 16) & 0xff) as usize])
    }

    /// One cipher step: updates a single table entry and returns 32
    /// keystream bits.
    pub fn step(&mut self) -> u32 {
        let j = self.cnt % 512;
        let s = if self.cnt < 512 {
            self.p[j] = self.p[j].wrapping_add(g1(
                self.p[m512(j, 3)],
                self.p[m512(j, 10)],
                self.p[m512(j, 511)],
            ));
            self.h1(self.p[m512(j, 12)]) ^ self.p[j]
        } else {
            self.q[j] = self.q[j].wrapping_add(g2(
                self.q[m512(j, 3)],
                self.q[m512(j, 10)],
                self.q[m512(j, 511)],
            ));
            self.h2(self.q[m512(j, 12)]) ^ self.q[j]
        };
        self.cnt = (self.cnt + 1) % 1024;
        s
    }

    /// Like [`Hc128Core::step`], also reporting which of the 1024 table
    /// slots (0..512 in `P`, 512..1024 in `Q`) the step updated.
    pub fn step_traced(&mut self) -> (u32, usize) {
        let slot = self.cnt;
        (self.step(), slot)
    }

    pub(crate) fn next_block(&mut self, out: &mut [u8; 4]) {
        *out = self.step().to_le_bytes();
    }

    pub(crate) fn reset(&mut self, iv: &[u8; 16]) {
        self.init(iv);
    }
}

impl Drop for Hc128Core {
    fn drop(&mut self) {
        for w in self.p.iter_mut().chain(self.q.iter_mut()) {
            unsafe { std::ptr::write_volatile(w, 0) };
        }
        for b in &mut self.key {
            unsafe { std::ptr::write_volatile(b, 0) };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filter_functions() {
        assert_eq!(f1(0), 0);
        assert_eq!(f1(0x8000_0000), 0x1100_2000);
        assert_eq!(f2(1), 0x0000_a000);
        assert_eq!(g1(0, 1, 0), 0x0100_0000);
        assert_eq!(g2(0, 1, 0), 0x0000_0100);
    }

    #[test]
    fn zero_key_zero_iv_first_word() {
        let mut core = Hc128Core::new(&[0u8; 16], &[0u8; 16]);
        assert_eq!(core.step(), 0x7315_0082);
    }

    #[test]
    fn steps_alternate_between_the_tables() {
        let mut core = Hc128Core::new(&[1u8; 16], &[2u8; 16]);
        for i in 0..2048 {
            let (_, slot) = core.step_traced();
            assert_eq!(slot, i % 1024);
        }
    }

    #[test]
    fn reset_reproduces_the_stream() {
        let mut core = Hc128Core::new(&[9u8; 16], &[7u8; 16]);
        let first: Vec<u32> = (0..32).map(|_| core.step()).collect();
        core.reset(&[7u8; 16]);
        let again: Vec<u32> = (0..32).map(|_| core.step()).collect();
        assert_eq!(first, again);
    }
}
