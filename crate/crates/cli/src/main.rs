mod bench;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mlss::blockio::{self, BlockError, BlockView};
use mlss::cff;
use mlss::keys::{SignatureAlgorithm, SigningKey, VerifyingKey};
use mlss::scheme;
use mlss::{HashAlgorithm, HashBackend, SchemeError, VerifyOutcome};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

/// Process exit codes.
mod exit {
    pub const VALID: u8 = 0;
    pub const FAILURE: u8 = 1;
    pub const INVALID_SIGNATURE: u8 = 10;
    pub const MODIFIED: u8 = 20;
    pub const STRUCTURAL: u8 = 30;
    pub const USAGE: u8 = 64;
}

#[derive(Parser)]
#[command(name = "mlss", version, about = "Sign documents so that modified blocks can be located")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair
    Keygen(KeygenArgs),
    /// Show the cover-free family chosen for (d, n)
    Plan(PlanArgs),
    /// Sign a document
    Sign(SignArgs),
    /// Verify a document, optionally locating modified blocks
    Verify(VerifyArgs),
    /// Print the matrix for (d, n)
    CffDump(DumpArgs),
    /// Measure hash costs against the predicted byte totals
    Bench(bench::BenchArgs),
}

#[derive(Args)]
struct KeygenArgs {
    /// ed25519 or test-stub
    #[arg(long, default_value = "ed25519")]
    alg: String,
    /// Security parameter in bits
    #[arg(long, default_value_t = 128)]
    security: u32,
    /// Derive the key from a fixed seed (reproducible, for fixtures)
    #[arg(long)]
    seed: Option<u64>,
    /// Output file for the secret key
    #[arg(long)]
    secret: PathBuf,
    /// Output file for the public key
    #[arg(long)]
    public: PathBuf,
}

#[derive(Args)]
struct PlanArgs {
    #[arg(short = 'd', value_parser = clap::value_parser!(u32).range(1..))]
    d: u32,
    #[arg(short = 'n')]
    n: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct BlockArgs {
    /// Fixed-size blocks of this many bytes
    #[arg(long, value_name = "BYTES")]
    fixed: Option<u64>,
    /// Split after each occurrence of this hex-encoded delimiter
    #[arg(long, value_name = "HEX")]
    delim: Option<String>,
    /// Offsets and lengths from a manifest file
    #[arg(long, value_name = "FILE")]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct SignArgs {
    /// Secret key file
    #[arg(long)]
    key: PathBuf,
    /// Document to sign
    #[arg(long)]
    document: PathBuf,
    #[arg(short = 'd', value_parser = clap::value_parser!(u32).range(1..))]
    d: u32,
    #[command(flatten)]
    blocks: BlockArgs,
    /// sha256 or sha512
    #[arg(long, default_value = "sha256")]
    hash: String,
    /// Output signature file (.mlss)
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Public key file
    #[arg(long)]
    pubkey: PathBuf,
    #[arg(long)]
    document: PathBuf,
    /// Signature file (.mlss)
    #[arg(long)]
    signature: PathBuf,
    /// Locate modified blocks
    #[arg(long)]
    locate: bool,
    #[command(flatten)]
    blocks: BlockArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DumpArgs {
    #[arg(short = 'd', value_parser = clap::value_parser!(u32).range(1..))]
    d: u32,
    #[arg(short = 'n')]
    n: usize,
    /// Write the canonical binary encoding instead of readable rows
    #[arg(long)]
    canonical: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Debug)]
pub(crate) enum CliError {
    Usage(String),
    Io(PathBuf, io::Error),
    Structural(String),
    Failure(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Structural(_) => exit::STRUCTURAL,
            CliError::Io(..) | CliError::Failure(_) => exit::FAILURE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Structural(m) | CliError::Failure(m) => f.write_str(m),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

impl From<BlockError> for CliError {
    fn from(e: BlockError) -> Self {
        CliError::Structural(format!("block structure: {e}"))
    }
}

impl From<SchemeError> for CliError {
    fn from(e: SchemeError) -> Self {
        if e.is_structural() {
            CliError::Structural(e.to_string())
        } else {
            CliError::Failure(e.to_string())
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn parse_hash(name: &str) -> Result<HashAlgorithm, CliError> {
    HashAlgorithm::from_name(name).ok_or_else(|| CliError::Usage(format!("unknown hash algorithm {name:?}")))
}

fn block_view(args: &BlockArgs, document: &[u8]) -> Result<BlockView, CliError> {
    let view = if let Some(size) = args.fixed {
        blockio::split_fixed(document.len() as u64, size)?
    } else if let Some(hex_delim) = &args.delim {
        let delim = hex::decode(hex_delim).map_err(|e| CliError::Usage(format!("--delim: {e}")))?;
        blockio::split_delimiter(document, &delim)?
    } else if let Some(path) = &args.manifest {
        let text = read(path)?;
        let text = String::from_utf8(text).map_err(|_| CliError::Structural("manifest is not UTF-8".into()))?;
        blockio::parse_manifest(&text)?
    } else {
        return Err(CliError::Usage("one of --fixed, --delim, --manifest is required".into()));
    };
    if view.total_len() != document.len() as u64 {
        return Err(CliError::Structural(format!(
            "manifest describes {} bytes but the document has {}",
            view.total_len(),
            document.len()
        )));
    }
    Ok(view)
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn keygen(args: KeygenArgs) -> Result<u8, CliError> {
    let alg = SignatureAlgorithm::from_name(&args.alg)
        .ok_or_else(|| CliError::Usage(format!("unknown signature algorithm {:?}", args.alg)))?;
    let generated = match args.seed {
        Some(seed) => scheme::generate_keys(alg, args.security, &mut ChaCha20Rng::seed_from_u64(seed)),
        None => scheme::generate_keys(alg, args.security, &mut rand::rngs::OsRng),
    };
    let (sk, pk) = generated.map_err(|e| CliError::Usage(e.to_string()))?;
    write(&args.secret, &sk.to_bytes())?;
    write(&args.public, &pk.to_bytes())?;
    println!("{alg} key pair written to {} and {}", args.secret.display(), args.public.display());
    Ok(exit::VALID)
}

#[derive(Serialize)]
struct PlanReport {
    construction: String,
    d: u32,
    n: usize,
    formula_t: u64,
    formula_w: u64,
    actual_construction: String,
    actual_t: usize,
    actual_w: usize,
    params: cff::ConstructionParams,
}

fn plan(args: PlanArgs) -> Result<u8, CliError> {
    let p = cff::plan(args.d, args.n).map_err(|e| CliError::Usage(e.to_string()))?;
    let m = cff::build(args.d, args.n).map_err(|e| CliError::Usage(e.to_string()))?;
    let report = PlanReport {
        construction: p.construction.to_string(),
        d: args.d,
        n: args.n,
        formula_t: p.t,
        formula_w: p.w,
        actual_construction: m.construction().to_string(),
        actual_t: m.t(),
        actual_w: m.weight(),
        params: m.params(),
    };
    if args.json {
        print_json(&report);
    } else {
        println!("{} t={} w={} (formula)", report.construction, report.formula_t, report.formula_w);
        println!(
            "{} t={} w={} (built)",
            report.actual_construction, report.actual_t, report.actual_w
        );
    }
    Ok(exit::VALID)
}

#[derive(Serialize)]
struct SignReport {
    d: u32,
    n: u32,
    t: usize,
    hash: HashAlgorithm,
    signature_algorithm: SignatureAlgorithm,
    signature_bytes: usize,
    output: PathBuf,
}

fn sign(args: SignArgs) -> Result<u8, CliError> {
    let key = SigningKey::from_bytes(&read(&args.key)?).map_err(|e| CliError::Usage(format!("secret key: {e}")))?;
    let hash = parse_hash(&args.hash)?;
    let document = read(&args.document)?;
    let view = block_view(&args.blocks, &document)?;
    let mut hasher = HashBackend::new(hash);
    let sig = mlss::sign(&key, &document, &view, args.d, &mut hasher)?;
    let bytes = mlss::encode_signature(&sig).map_err(|e| CliError::Failure(e.to_string()))?;
    write(&args.output, &bytes)?;
    let report = SignReport {
        d: sig.d,
        n: sig.n,
        t: sig.t(),
        hash,
        signature_algorithm: sig.signature_algorithm,
        signature_bytes: bytes.len(),
        output: args.output,
    };
    if args.json {
        print_json(&report);
    } else {
        println!(
            "signed: d={} n={} t={} signature={} bytes -> {}",
            report.d,
            report.n,
            report.t,
            report.signature_bytes,
            report.output.display()
        );
    }
    Ok(exit::VALID)
}

#[derive(Serialize)]
struct VerifyReport {
    outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    modified_blocks: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    over_threshold: Option<bool>,
    d: u32,
    n: u32,
}

fn verify(args: VerifyArgs) -> Result<u8, CliError> {
    let key = VerifyingKey::from_bytes(&read(&args.pubkey)?).map_err(|e| CliError::Usage(format!("public key: {e}")))?;
    let raw = read(&args.signature)?;
    let sig = match mlss::decode_signature(&raw) {
        Ok(sig) => sig,
        Err(e) => {
            // an unreadable container is not an authentic signature
            if args.json {
                println!("{}", serde_json::json!({ "outcome": "INVALID_SIGNATURE", "error": e.to_string() }));
            } else {
                println!("INVALID_SIGNATURE");
                eprintln!("signature file: {e}");
            }
            return Ok(exit::INVALID_SIGNATURE);
        }
    };
    let document = read(&args.document)?;
    let view = block_view(&args.blocks, &document)?;
    let mut hasher = HashBackend::new(sig.hash);
    let outcome = mlss::verify(&key, &sig, &document, &view, args.locate, &mut hasher)?;

    let (label, code) = match &outcome {
        VerifyOutcome::InvalidSignature => ("INVALID_SIGNATURE", exit::INVALID_SIGNATURE),
        VerifyOutcome::Valid => ("VALID", exit::VALID),
        VerifyOutcome::ModifiedUnlocated => ("MODIFIED", exit::MODIFIED),
        VerifyOutcome::ModifiedLocated { .. } => ("MODIFIED", exit::MODIFIED),
    };
    let (blocks, over) = match outcome {
        VerifyOutcome::ModifiedLocated {
            blocks,
            over_threshold,
        } => (Some(blocks), Some(over_threshold)),
        _ => (None, None),
    };
    let report = VerifyReport {
        outcome: label,
        modified_blocks: blocks,
        over_threshold: over,
        d: sig.d,
        n: sig.n,
    };
    if args.json {
        print_json(&report);
    } else {
        println!("{label}");
        if let Some(blocks) = &report.modified_blocks {
            let list: Vec<String> = blocks.iter().map(usize::to_string).collect();
            println!("modified blocks: {}", list.join(" "));
            if report.over_threshold == Some(true) {
                eprintln!(
                    "warning: {} candidate blocks exceed d={}; the list may include unmodified blocks",
                    blocks.len(),
                    sig.d
                );
            }
        }
    }
    Ok(code)
}

#[derive(Serialize)]
struct DumpReport {
    construction: String,
    d: u32,
    n: usize,
    t: usize,
    w: usize,
    digest: String,
    rows: Vec<Vec<u32>>,
}

fn cff_dump(args: DumpArgs) -> Result<u8, CliError> {
    let m = cff::build(args.d, args.n).map_err(|e| CliError::Usage(e.to_string()))?;
    if args.canonical {
        io::stdout()
            .write_all(&m.canonical_bytes())
            .map_err(|e| CliError::Io("<stdout>".into(), e))?;
        return Ok(exit::VALID);
    }
    let report = DumpReport {
        construction: m.construction().to_string(),
        d: m.d(),
        n: m.n(),
        t: m.t(),
        w: m.weight(),
        digest: m.canonical_digest().to_hex(),
        rows: m.rows().to_vec(),
    };
    if args.json {
        print_json(&report);
        return Ok(exit::VALID);
    }
    println!(
        "# {} d={} n={} t={} w={} sha256={}",
        report.construction, report.d, report.n, report.t, report.w, report.digest
    );
    for row in &report.rows {
        let cols: Vec<String> = row.iter().map(u32::to_string).collect();
        println!("{}", cols.join(" "));
    }
    Ok(exit::VALID)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::VALID };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Keygen(a) => keygen(a),
        Command::Plan(a) => plan(a),
        Command::Sign(a) => sign(a),
        Command::Verify(a) => verify(a),
        Command::CffDump(a) => cff_dump(a),
        Command::Bench(a) => bench::run(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
