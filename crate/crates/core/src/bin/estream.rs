//! Command-line front end: keystream generation, encryption/decryption,
//! known-answer verification, and the timing benchmark.
//!
//! Exit codes: 0 on success, 1 when a verification or benchmark check
//! fails, 2 for usage, parse, or I/O errors.

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use estream_portfolio::bench::{emit_csv, run_benchmark, BenchConfig};
use estream_portfolio::reference::{compare_reference, ReferenceDataset};
use estream_portfolio::vectors::{load_vectors, verify, BUNDLED_VECTORS};
use estream_portfolio::{CipherId, CipherInstance};

#[derive(Parser)]
#[command(
    name = "estream",
    about = "eSTREAM software-portfolio stream ciphers: keystream, XOR encryption, \
             known-answer verification, and timing benchmarks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate raw keystream bytes
    Keystream(KeystreamArgs),
    /// Encrypt a file or stdin (XOR with keystream)
    Encrypt(CryptArgs),
    /// Decrypt a file or stdin (same transform as encrypt)
    Decrypt(CryptArgs),
    /// Check known-answer vectors against the implementations
    Verify(VerifyArgs),
    /// Measure encryption time as a function of message length
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Hex,
    Raw,
}

#[derive(Args)]
struct CipherSelect {
    /// Cipher: SALSA20_12, SALSA20_8, SALSA20_20, RABBIT, HC128, SOSEMANUK
    #[arg(short, long, value_parser = parse_cipher)]
    cipher: CipherId,
    /// Key as hex
    #[arg(short, long)]
    key: String,
    /// IV as hex
    #[arg(short, long)]
    iv: String,
}

fn parse_cipher(s: &str) -> Result<CipherId, String> {
    s.parse().map_err(|e| format!("{e}"))
}

impl CipherSelect {
    fn instance(&self) -> Result<CipherInstance, String> {
        let key = hex::decode(&self.key).map_err(|_| "key is not valid hex".to_string())?;
        let iv = hex::decode(&self.iv).map_err(|_| "iv is not valid hex".to_string())?;
        CipherInstance::new(self.cipher, &key, &iv).map_err(|e| e.to_string())
    }
}

#[derive(Args)]
struct KeystreamArgs {
    #[command(flatten)]
    select: CipherSelect,
    /// Number of keystream bytes to emit
    #[arg(short, long)]
    length: u64,
    /// Start offset into the keystream (Salsa20 family seeks; the others
    /// generate and discard)
    #[arg(long, default_value_t = 0)]
    offset: u64,
    #[arg(long, value_enum, default_value = "hex")]
    format: Format,
    /// Output file (stdout if omitted)
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CryptArgs {
    #[command(flatten)]
    select: CipherSelect,
    /// Input file ("-" or omitted for stdin)
    #[arg(short = 'I', long)]
    input: Option<PathBuf>,
    /// Output file ("-" or omitted for stdout)
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Vector file (bundled corpus if omitted)
    file: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated cipher list (default: the four portfolio members)
    #[arg(long, value_delimiter = ',', value_parser = parse_cipher)]
    ciphers: Option<Vec<CipherId>>,
    /// Comma-separated message lengths in bytes
    #[arg(long, value_delimiter = ',')]
    lengths: Option<Vec<usize>>,
    /// Timed samples per cell
    #[arg(long)]
    iterations: Option<u32>,
    /// Untimed executions before sampling
    #[arg(long)]
    warmup: Option<u32>,
    /// Time keystream generation only, skipping per-message key/IV setup
    #[arg(long)]
    no_setup: bool,
    /// Message-generator seed
    #[arg(long)]
    seed: Option<u64>,
    /// Write the per-cell CSV to this file
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Print the local-vs-reference comparison table
    #[arg(long)]
    compare_reference: bool,
}

// Failures that should exit 1 (checks failed) vs 2 (bad input/IO).
enum CliError {
    Check(String),
    Usage(String),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> CliError {
        CliError::Usage(format!("I/O error: {e}"))
    }
}

fn open_input(path: &Option<PathBuf>) -> Result<Box<dyn Read>, CliError> {
    match path {
        Some(p) if p.as_os_str() != "-" => Ok(Box::new(File::open(p)?)),
        _ => Ok(Box::new(io::stdin().lock())),
    }
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    match path {
        Some(p) if p.as_os_str() != "-" => Ok(Box::new(File::create(p)?)),
        _ => Ok(Box::new(io::stdout().lock())),
    }
}

fn cmd_keystream(args: &KeystreamArgs) -> Result<(), CliError> {
    let mut cipher = args.select.instance().map_err(CliError::Usage)?;
    if args.offset > 0 {
        if cipher.id().seekable() {
            cipher
                .seek(args.offset)
                .map_err(|e| CliError::Usage(e.to_string()))?;
        } else {
            let mut remaining = args.offset;
            while remaining > 0 {
                let take = remaining.min(1 << 16) as usize;
                cipher
                    .keystream(take)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                remaining -= take as u64;
            }
        }
    }
    let mut out = open_output(&args.output)?;
    let mut remaining = args.length;
    while remaining > 0 {
        let take = remaining.min(1 << 16) as usize;
        let bytes = cipher
            .keystream(take)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        match args.format {
            Format::Hex => out.write_all(hex::encode(&bytes).as_bytes())?,
            Format::Raw => out.write_all(&bytes)?,
        }
        remaining -= take as u64;
    }
    if matches!(args.format, Format::Hex) {
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn cmd_crypt(args: &CryptArgs) -> Result<(), CliError> {
    let mut cipher = args.select.instance().map_err(CliError::Usage)?;
    let mut input = open_input(&args.input)?;
    let mut output = open_output(&args.output)?;
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let n = input.read(&mut buf)?;
        if n == 0 {
            break;
        }
        cipher
            .apply_in_place(&mut buf[..n])
            .map_err(|e| CliError::Usage(e.to_string()))?;
        output.write_all(&buf[..n])?;
    }
    output.flush()?;
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let source = match &args.file {
        Some(p) => std::fs::read_to_string(p)?,
        None => BUNDLED_VECTORS.to_string(),
    };
    let records = load_vectors(&source).map_err(|e| CliError::Usage(e.to_string()))?;
    let report = verify(&records);
    print!("{}", report.render());
    if report.all_passed() {
        Ok(())
    } else {
        Err(CliError::Check(format!(
            "{} of {} checks failed",
            report.failures.len(),
            report.total
        )))
    }
}

fn cmd_bench(args: &BenchArgs) -> Result<(), CliError> {
    let mut config = BenchConfig::default();
    if let Some(c) = &args.ciphers {
        config.ciphers = c.clone();
    }
    if let Some(l) = &args.lengths {
        config.lengths = l.clone();
    }
    if let Some(i) = args.iterations {
        config.iterations = i;
    }
    if let Some(w) = args.warmup {
        config.warmup_iterations = w;
    }
    if args.no_setup {
        config.include_setup = false;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    if config.iterations == 0 || config.lengths.is_empty() || config.ciphers.is_empty() {
        return Err(CliError::Usage(
            "bench needs at least one cipher, one length, and one iteration".into(),
        ));
    }
    eprintln!(
        "benchmarking {} cipher(s) x {} length(s), {} iterations (seed {:#x}, setup {})...",
        config.ciphers.len(),
        config.lengths.len(),
        config.iterations,
        config.seed,
        if config.include_setup {
            "included"
        } else {
            "excluded"
        }
    );
    let report = run_benchmark(&config);
    let csv = emit_csv(&report);
    match &args.csv {
        Some(p) => std::fs::write(p, &csv)?,
        None => print!("{csv}"),
    }
    if args.compare_reference {
        println!();
        print!(
            "{}",
            compare_reference(&report, &ReferenceDataset::bundled())
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Keystream(a) => cmd_keystream(a),
        Command::Encrypt(a) | Command::Decrypt(a) => cmd_crypt(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
