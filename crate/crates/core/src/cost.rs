//! Hash cost accounting and timing.
//!
//! Byte totals here are exact. Timings are machine-specific and only feed
//! reports.

use std::time::Instant;

use serde::Serialize;

use crate::hash::{HashAlgorithm, HashBackend};

/// Predicted hash-input bytes for a document of `b` bytes under a matrix of
/// `t` rows and weight `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ByteBudget {
    /// Signing, and verification that locates modifications.
    pub sign: u64,
    /// Verification of an unmodified document, or without location.
    pub verify_fast: u64,
    pub verify_locate: u64,
}

impl ByteBudget {
    pub fn new(b: u64, t: u64, w: u64, h_out: u64) -> Self {
        let full = 2 * b + (w + t + 1) * h_out;
        ByteBudget {
            sign: full,
            verify_fast: b + (t + 1) * h_out,
            verify_locate: full,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares fit `y = slope * x + intercept`.
pub fn fit_linear(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let n = xs.len();
    if n < 2 || n != ys.len() {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Some(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Median wall-clock seconds per hash call for each input size.
pub fn time_hash(algorithm: HashAlgorithm, sizes: &[usize], trials: usize) -> Vec<(usize, f64)> {
    let mut hasher = HashBackend::new(algorithm);
    let trials = trials.max(1);
    sizes
        .iter()
        .map(|&size| {
            let data: Vec<u8> = (0..size).map(|i| (i * 131 + 7) as u8).collect();
            // repeat short inputs so each sample is long enough to time
            let reps = (1 << 20) / size.max(1) + 1;
            let mut samples: Vec<f64> = (0..trials)
                .map(|_| {
                    let start = Instant::now();
                    for _ in 0..reps {
                        std::hint::black_box(hasher.digest(std::hint::black_box(&data)));
                    }
                    start.elapsed().as_secs_f64() / reps as f64
                })
                .collect();
            samples.sort_by(f64::total_cmp);
            (size, samples[samples.len() / 2])
        })
        .collect()
}
