//! `mlss bench`: exact hash-byte accounting plus machine-specific timings.

use std::time::Instant;

use clap::Args;
use mlss::blockio;
use mlss::cff;
use mlss::cost::{fit_linear, time_hash, ByteBudget, LinearFit};
use mlss::keys::SignatureAlgorithm;
use mlss::{scheme, HashAlgorithm, HashBackend, VerifyOutcome};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::CliError;

const SEED: u64 = 0x6d6c7373;

/// Slope and intercept (seconds) of SHA-256 cost vs input bytes measured with
/// OpenSSL on a 2.7 GHz Core i5. Shown for comparison only.
const REFERENCE_FIT: (f64, f64) = (5.52e-9, 3.819e-7);

#[derive(Args)]
pub struct BenchArgs {
    #[arg(short = 'd', value_parser = clap::value_parser!(u32).range(1..))]
    d: u32,
    #[arg(short = 'n')]
    n: usize,
    /// Block size in bytes
    #[arg(long = "block-size", default_value_t = 1024)]
    block_size: usize,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value = "sha256")]
    hash: String,
    /// Skip the timing sweep and hash-cost fit
    #[arg(long)]
    no_timing: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Serialize)]
struct OpReport {
    predicted_bytes: u64,
    measured_bytes: u64,
    matches: bool,
    median_seconds: f64,
}

#[derive(Serialize)]
struct FitReport {
    /// Always true: timings depend on the host.
    machine_specific: bool,
    samples: Vec<(usize, f64)>,
    fit: Option<LinearFit>,
    reference_slope: f64,
    reference_intercept: f64,
}

#[derive(Serialize)]
struct BenchReport {
    d: u32,
    n: usize,
    block_size: usize,
    document_bytes: u64,
    hash: HashAlgorithm,
    construction: String,
    t: usize,
    w: usize,
    trials: usize,
    sign: OpReport,
    verify_fast: OpReport,
    verify_locate: OpReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    hash_cost: Option<FitReport>,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs[xs.len() / 2]
}

/// Runs `op` `trials` times, returning the byte count of the last run and
/// the median wall-clock time.
fn measure<F>(hasher: &mut HashBackend, trials: usize, mut op: F) -> Result<(u64, f64), CliError>
where
    F: FnMut(&mut HashBackend) -> Result<(), CliError>,
{
    let mut times = Vec::with_capacity(trials);
    let mut bytes = 0;
    for _ in 0..trials {
        hasher.reset_counter();
        let start = Instant::now();
        op(hasher)?;
        times.push(start.elapsed().as_secs_f64());
        bytes = hasher.bytes_hashed();
    }
    Ok((bytes, median(times)))
}

fn op_report(predicted: u64, (measured, secs): (u64, f64)) -> OpReport {
    OpReport {
        predicted_bytes: predicted,
        measured_bytes: measured,
        matches: predicted == measured,
        median_seconds: secs,
    }
}

pub fn run(args: BenchArgs) -> Result<u8, CliError> {
    if args.n < 2 || args.block_size == 0 {
        return Err(CliError::Usage("bench needs n >= 2 and a non-zero block size".into()));
    }
    let hash = HashAlgorithm::from_name(&args.hash)
        .ok_or_else(|| CliError::Usage(format!("unknown hash algorithm {:?}", args.hash)))?;
    let trials = args.trials.max(1);
    let total = args
        .n
        .checked_mul(args.block_size)
        .ok_or_else(|| CliError::Usage("document size overflows".into()))?;

    let mut rng = ChaCha20Rng::seed_from_u64(SEED);
    let mut document = vec![0u8; total];
    rng.fill_bytes(&mut document);
    let view = blockio::split_fixed(total as u64, args.block_size as u64)?;
    let (sk, pk) = scheme::generate_keys(SignatureAlgorithm::TestStub, 128, &mut rng)
        .map_err(|e| CliError::Failure(e.to_string()))?;
    let m = cff::build(args.d, args.n).map_err(|e| CliError::Usage(e.to_string()))?;

    // modify the first min(d, n) blocks for the locating run
    let mut tampered = document.clone();
    for block in view.blocks().iter().take(args.d as usize) {
        tampered[block.offset as usize] ^= 0xFF;
    }

    let mut hasher = HashBackend::new(hash);
    let sig = scheme::sign_with_matrix(&sk, &document, &view, &m, &mut hasher)?;
    let sign = measure(&mut hasher, trials, |h| {
        scheme::sign_with_matrix(&sk, &document, &view, &m, h)?;
        Ok(())
    })?;
    let verify_fast = measure(&mut hasher, trials, |h| {
        match scheme::verify(&pk, &sig, &document, &view, true, h)? {
            VerifyOutcome::Valid => Ok(()),
            other => Err(CliError::Failure(format!("untouched document verified as {other:?}"))),
        }
    })?;
    let verify_locate = measure(&mut hasher, trials, |h| {
        match scheme::verify_with(&pk, &sig, &tampered, &view, true, h, |_, _| Ok(m.clone()))? {
            VerifyOutcome::ModifiedLocated { .. } => Ok(()),
            other => Err(CliError::Failure(format!("tampered document verified as {other:?}"))),
        }
    })?;

    let budget = ByteBudget::new(total as u64, m.t() as u64, m.weight() as u64, hash.output_len() as u64);
    let hash_cost = (!args.no_timing).then(|| {
        let sizes: Vec<usize> = (0..11).map(|i| 1024 << i).collect();
        let samples = time_hash(hash, &sizes, trials);
        let xs: Vec<f64> = samples.iter().map(|&(s, _)| s as f64).collect();
        let ys: Vec<f64> = samples.iter().map(|&(_, y)| y).collect();
        FitReport {
            machine_specific: true,
            fit: fit_linear(&xs, &ys),
            samples,
            reference_slope: REFERENCE_FIT.0,
            reference_intercept: REFERENCE_FIT.1,
        }
    });
    let report = BenchReport {
        d: args.d,
        n: args.n,
        block_size: args.block_size,
        document_bytes: total as u64,
        hash,
        construction: m.construction().to_string(),
        t: m.t(),
        w: m.weight(),
        trials,
        sign: op_report(budget.sign, sign),
        verify_fast: op_report(budget.verify_fast, verify_fast),
        verify_locate: op_report(budget.verify_locate, verify_locate),
        hash_cost,
    };
    let all_match = report.sign.matches && report.verify_fast.matches && report.verify_locate.matches;

    if args.json {
        crate::print_json(&report);
    } else {
        println!(
            "{} d={} n={} t={} w={} b={} bytes, {} trials, {}",
            report.construction, report.d, report.n, report.t, report.w, report.document_bytes, trials, hash
        );
        for (name, op) in [
            ("sign", &report.sign),
            ("verify-fast", &report.verify_fast),
            ("verify-locate", &report.verify_locate),
        ] {
            println!(
                "{name:<14} hashed {:>12} bytes (predicted {:>12}) {}  median {:.6} s",
                op.measured_bytes,
                op.predicted_bytes,
                if op.matches { "ok" } else { "MISMATCH" },
                op.median_seconds
            );
        }
        if let Some(cost) = &report.hash_cost {
            match &cost.fit {
                Some(f) => println!(
                    "hash cost fit (this machine): {:.3e} * x + {:.3e} s, R^2 = {:.4}",
                    f.slope, f.intercept, f.r_squared
                ),
                None => println!("hash cost fit: not enough samples"),
            }
            println!(
                "reference fit (other hardware, not comparable): {:.3e} * x + {:.3e} s",
                cost.reference_slope, cost.reference_intercept
            );
        }
    }
    if all_match {
        Ok(0)
    } else {
        Err(CliError::Failure("hash byte totals differ from the prediction".into()))
    }
}
