//! Bundled reference dataset: per-device encryption times for the four
//! portfolio ciphers measured on twelve mobile handsets, plus the handset
//! descriptions. [`compare_reference`] lines a local [`BenchReport`]
//! (crate::bench) up against it.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::bench::BenchReport;
use crate::cipher_core::CipherId;

const TABLE_CSV: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../../data/reference_table2.csv"
));
const DEVICES_CSV: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../../data/reference_devices.csv"
));

/// One handset from the reference study.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviceInfo {
    pub device: String,
    pub manufacturer: String,
    pub os: String,
    pub memory: String,
    pub processor: String,
    pub year: String,
}

/// One measured cell: encryption time for `cipher` on `device` at
/// `length_bytes`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceCell {
    pub device: String,
    pub cipher: CipherId,
    pub length_bytes: usize,
    pub time_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceDataset {
    pub devices: Vec<DeviceInfo>,
    pub cells: Vec<ReferenceCell>,
}

// Splits one CSV line, honoring double-quoted fields.
fn split_csv(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut field = String::new();
    let mut quoted = false;
    for c in line.chars() {
        match c {
            '"' => quoted = !quoted,
            ',' if !quoted => fields.push(std::mem::take(&mut field)),
            c => field.push(c),
        }
    }
    fields.push(field);
    fields
}

fn data_rows(csv: &str) -> impl Iterator<Item = Vec<String>> + '_ {
    csv.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .skip(1) // header
        .map(split_csv)
}

impl ReferenceDataset {
    /// The dataset shipped with the crate.
    pub fn bundled() -> ReferenceDataset {
        let devices = data_rows(DEVICES_CSV)
            .map(|f| {
                assert_eq!(f.len(), 6, "bundled device row malformed: {f:?}");
                DeviceInfo {
                    device: f[0].clone(),
                    manufacturer: f[1].clone(),
                    os: f[2].clone(),
                    memory: f[3].clone(),
                    processor: f[4].clone(),
                    year: f[5].clone(),
                }
            })
            .collect();
        let cells = data_rows(TABLE_CSV)
            .map(|f| {
                assert_eq!(f.len(), 4, "bundled timing row malformed: {f:?}");
                ReferenceCell {
                    device: f[0].clone(),
                    cipher: f[1].parse().expect("bundled cipher id"),
                    length_bytes: f[2].parse().expect("bundled length"),
                    time_ms: f[3].parse().expect("bundled time"),
                }
            })
            .collect();
        ReferenceDataset { devices, cells }
    }

    /// The distinct message lengths present, ascending.
    pub fn lengths(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.cells.iter().map(|c| c.length_bytes).collect();
        set.into_iter().collect()
    }

    /// Mean time across all devices for one (cipher, length) cell.
    pub fn cross_device_mean(&self, cipher: CipherId, length_bytes: usize) -> Option<f64> {
        let times: Vec<f64> = self
            .cells
            .iter()
            .filter(|c| c.cipher == cipher && c.length_bytes == length_bytes)
            .map(|c| c.time_ms)
            .collect();
        (!times.is_empty()).then(|| times.iter().sum::<f64>() / times.len() as f64)
    }

    /// Mean time for one cipher across every device and length.
    pub fn overall_mean(&self, cipher: CipherId) -> Option<f64> {
        let times: Vec<f64> = self
            .cells
            .iter()
            .filter(|c| c.cipher == cipher)
            .map(|c| c.time_ms)
            .collect();
        (!times.is_empty()).then(|| times.iter().sum::<f64>() / times.len() as f64)
    }

    /// The cipher with the lowest cross-device mean at each length.
    pub fn winners_by_length(&self) -> Vec<(usize, CipherId)> {
        self.lengths()
            .into_iter()
            .filter_map(|len| {
                CipherId::PORTFOLIO
                    .into_iter()
                    .filter_map(|c| self.cross_device_mean(c, len).map(|m| (c, m)))
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .map(|(c, _)| (len, c))
            })
            .collect()
    }
}

/// Renders a text table setting local benchmark means next to the
/// reference dataset's cross-device means, length by length.
pub fn compare_reference(report: &BenchReport, dataset: &ReferenceDataset) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<12} {:>8} {:>14} {:>14} {:>8}",
        "cipher", "bytes", "local mean ms", "ref mean ms", "ratio"
    );
    for cell in &report.cells {
        let reference = dataset.cross_device_mean(cell.cipher, cell.length);
        match reference {
            Some(r) => {
                let _ = writeln!(
                    out,
                    "{:<12} {:>8} {:>14.6} {:>14.3} {:>8.4}",
                    cell.cipher.to_string(),
                    cell.length,
                    cell.mean_ms,
                    r,
                    cell.mean_ms / r
                );
            }
            None => {
                let _ = writeln!(
                    out,
                    "{:<12} {:>8} {:>14.6} {:>14} {:>8}",
                    cell.cipher.to_string(),
                    cell.length,
                    cell.mean_ms,
                    "-",
                    "-"
                );
            }
        }
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "reference cross-device means over all lengths:");
    for cipher in CipherId::PORTFOLIO {
        if let Some(m) = dataset.overall_mean(cipher) {
            let _ = writeln!(out, "  {cipher:<12} {m:.2} ms");
        }
    }
    out
}
