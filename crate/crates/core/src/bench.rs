//! Timing harness: measures encryption time as a function of message
//! length for a set of ciphers, the same shape of experiment as the
//! bundled reference dataset (see [`crate::reference`]).
//!
//! Messages are drawn from a seeded generator so runs are reproducible;
//! the seed is recorded in the report metadata. Timing uses the
//! monotonic clock, and operations much shorter than the measured clock
//! granularity are batched (several executions per timed sample, divided
//! out) so small-message means are not dominated by timer quantization.

use std::time::{Duration, Instant};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::cipher_core::{CipherId, CipherInstance};

/// Default message-generator seed (printed in the report metadata).
pub const DEFAULT_SEED: u64 = 0x746f_7274_6f69_7365;

/// What to measure and how often.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub ciphers: Vec<CipherId>,
    /// Message lengths in bytes.
    pub lengths: Vec<usize>,
    /// Timed samples per (cipher, length) cell.
    pub iterations: u32,
    /// Untimed executions before sampling starts.
    pub warmup_iterations: u32,
    /// When true (the default), every timed execution keys the cipher and
    /// loads the IV before encrypting, so per-message setup cost is part
    /// of the measurement. When false, one instance is reused and only
    /// keystream generation plus XOR is timed.
    pub include_setup: bool,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> BenchConfig {
        BenchConfig {
            ciphers: CipherId::PORTFOLIO.to_vec(),
            lengths: vec![16, 32, 64, 128, 256, 512, 1024, 2048],
            iterations: 5000,
            warmup_iterations: 500,
            include_setup: true,
            seed: DEFAULT_SEED,
        }
    }
}

/// Timing summary for one (cipher, message length) cell, in milliseconds
/// per encryption.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchCell {
    pub cipher: CipherId,
    pub length: usize,
    pub iterations: u32,
    /// Executions per timed sample (1 unless the operation was too short
    /// for the clock).
    pub batch: u32,
    pub mean_ms: f64,
    pub median_ms: f64,
    pub stddev_ms: f64,
    pub min_ms: f64,
    pub max_ms: f64,
}

/// A full benchmark run: host metadata plus one cell per (cipher, length).
#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub metadata: Vec<(String, String)>,
    pub cells: Vec<BenchCell>,
}

impl BenchReport {
    pub fn cell(&self, cipher: CipherId, length: usize) -> Option<&BenchCell> {
        self.cells
            .iter()
            .find(|c| c.cipher == cipher && c.length == length)
    }
}

// Smallest observable nonzero step of the monotonic clock.
fn clock_granularity() -> Duration {
    let mut min = Duration::from_millis(1);
    for _ in 0..200 {
        let t0 = Instant::now();
        let mut t1 = Instant::now();
        while t1 == t0 {
            t1 = Instant::now();
        }
        min = min.min(t1 - t0);
    }
    min.max(Duration::from_nanos(1))
}

fn summarize(cipher: CipherId, length: usize, batch: u32, samples: &mut [f64]) -> BenchCell {
    samples.sort_by(|a, b| a.total_cmp(b));
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let median = if samples.len().is_multiple_of(2) {
        (samples[samples.len() / 2 - 1] + samples[samples.len() / 2]) / 2.0
    } else {
        samples[samples.len() / 2]
    };
    let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    BenchCell {
        cipher,
        length,
        iterations: samples.len() as u32,
        batch,
        mean_ms: mean,
        median_ms: median,
        stddev_ms: var.sqrt(),
        min_ms: samples[0],
        max_ms: samples[samples.len() - 1],
    }
}

/// Runs the configured measurement. Cell order follows the configured
/// cipher and length order, so output is deterministic row-for-row (times
/// themselves vary with the host, of course).
pub fn run_benchmark(config: &BenchConfig) -> BenchReport {
    assert!(config.iterations > 0, "iterations must be positive");
    assert!(!config.lengths.is_empty(), "no message lengths given");
    let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
    let granularity = clock_granularity();
    // A sample should span well over the clock step to keep quantization
    // under a few percent.
    let target = granularity * 32;

    let mut cells = Vec::new();
    for &cipher in &config.ciphers {
        for &length in &config.lengths {
            let mut key = vec![0u8; cipher.default_key_length()];
            let mut iv = vec![0u8; cipher.iv_length()];
            let mut msg = vec![0u8; length];
            rng.fill_bytes(&mut key);
            rng.fill_bytes(&mut iv);
            rng.fill_bytes(&mut msg);

            let mut buf = msg.clone();
            let mut reused = (!config.include_setup)
                .then(|| CipherInstance::new(cipher, &key, &iv).expect("valid bench key/IV"));
            let mut run_once = |buf: &mut [u8]| match reused.as_mut() {
                Some(instance) => instance.apply_in_place(buf).expect("within stream cap"),
                None => {
                    let mut instance =
                        CipherInstance::new(cipher, &key, &iv).expect("valid bench key/IV");
                    instance.apply_in_place(buf).expect("within stream cap");
                }
            };

            for _ in 0..config.warmup_iterations {
                run_once(&mut buf);
            }

            // Pilot run to size the batch.
            let pilot = {
                let t0 = Instant::now();
                for _ in 0..8 {
                    run_once(&mut buf);
                }
                t0.elapsed() / 8
            };
            let batch = if pilot >= target {
                1u32
            } else {
                (target.as_nanos() / pilot.as_nanos().max(1)).clamp(1, 65_536) as u32
            };

            let mut samples = Vec::with_capacity(config.iterations as usize);
            for _ in 0..config.iterations {
                let t0 = Instant::now();
                for _ in 0..batch {
                    run_once(&mut buf);
                }
                let per_op = t0.elapsed().as_secs_f64() / batch as f64;
                samples.push(per_op * 1e3);
            }
            cells.push(summarize(cipher, length, batch, &mut samples));
        }
    }

    let mut metadata = host_metadata();
    metadata.push(("seed".into(), format!("{:#018x}", config.seed)));
    metadata.push(("iterations".into(), config.iterations.to_string()));
    metadata.push((
        "warmup_iterations".into(),
        config.warmup_iterations.to_string(),
    ));
    metadata.push(("include_setup".into(), config.include_setup.to_string()));
    metadata.push((
        "clock_granularity_ns".into(),
        granularity.as_nanos().to_string(),
    ));
    let batched: Vec<String> = cells
        .iter()
        .filter(|c| c.batch > 1)
        .map(|c| format!("{}/{}x{}", c.cipher, c.length, c.batch))
        .collect();
    if !batched.is_empty() {
        metadata.push(("batched_cells".into(), batched.join(" ")));
    }
    BenchReport { metadata, cells }
}

fn host_metadata() -> Vec<(String, String)> {
    let mut meta = vec![
        ("os".into(), std::env::consts::OS.into()),
        ("arch".into(), std::env::consts::ARCH.into()),
        ("timer".into(), "monotonic (std::time::Instant)".into()),
    ];
    if let Ok(cpuinfo) = std::fs::read_to_string("/proc/cpuinfo") {
        if let Some(model) = cpuinfo
            .lines()
            .find(|l| l.starts_with("model name"))
            .and_then(|l| l.split(':').nth(1))
        {
            meta.push(("cpu".into(), model.trim().into()));
        }
    }
    if let Ok(n) = std::thread::available_parallelism() {
        meta.push(("logical_cpus".into(), n.get().to_string()));
    }
    if let Ok(t) = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH) {
        meta.push(("unix_time".into(), t.as_secs().to_string()));
    }
    meta
}

/// Serializes a report as CSV: metadata as leading `#` comments, then a
/// header row and one row per cell in report order.
pub fn emit_csv(report: &BenchReport) -> String {
    let mut out = String::new();
    for (k, v) in &report.metadata {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    out.push_str("cipher,length_bytes,iterations,mean_ms,median_ms,stddev_ms,min_ms,max_ms\n");
    for c in &report.cells {
        out.push_str(&format!(
            "{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
            c.cipher,
            c.length,
            c.iterations,
            c.mean_ms,
            c.median_ms,
            c.stddev_ms,
            c.min_ms,
            c.max_ms
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> BenchConfig {
        BenchConfig {
            ciphers: vec![CipherId::Rabbit, CipherId::Salsa20_12],
            lengths: vec![16, 64],
            iterations: 25,
            warmup_iterations: 5,
            include_setup: true,
            seed: 7,
        }
    }

    #[test]
    fn report_has_one_cell_per_cipher_length_pair() {
        let report = run_benchmark(&tiny_config());
        assert_eq!(report.cells.len(), 4);
        for cell in &report.cells {
            assert!(cell.mean_ms > 0.0);
            assert!(cell.min_ms <= cell.median_ms && cell.median_ms <= cell.max_ms);
            assert_eq!(cell.iterations, 25);
        }
        // Row order is cipher-major in config order.
        assert_eq!(report.cells[0].cipher, CipherId::Rabbit);
        assert_eq!(report.cells[3].cipher, CipherId::Salsa20_12);
        assert!(report.metadata.iter().any(|(k, _)| k == "seed"));
    }

    #[test]
    fn csv_round_trips_header_and_rows() {
        let report = run_benchmark(&BenchConfig {
            ciphers: vec![CipherId::Hc128],
            lengths: vec![32],
            iterations: 10,
            warmup_iterations: 2,
            include_setup: false,
            seed: 1,
        });
        let csv = emit_csv(&report);
        let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
        assert_eq!(
            lines.next().unwrap(),
            "cipher,length_bytes,iterations,mean_ms,median_ms,stddev_ms,min_ms,max_ms"
        );
        let row = lines.next().unwrap();
        assert!(row.starts_with("HC128,32,10,"));
        assert_eq!(row.split(',').count(), 8);
        assert_eq!(lines.next(), None);
    }
}
