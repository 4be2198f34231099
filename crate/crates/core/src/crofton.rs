//! Monte Carlo evaluation of the Cauchy–Crofton integral
//! `H^k(A) = c(m,k) ∫∫ #(A ∩ p^{-1}(y)) dy dθ(p)`.
//!
//! Sample `i` draws from the ChaCha8 substream `i` of the run seed, so the
//! result does not depend on how samples are distributed over threads.
//! Per-sample outcomes are collected in index order and summed sequentially.

use rand::SeedableRng;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::geom::{
    crofton_constant, fiber_flat, sample_in_ball, sample_projection, unit_ball_volume, GeomError,
    Window,
};
use crate::sets::{
    construct_fiber_set, CountOptions, FiberCount, ParametricCurve, PolynomialMap,
    SemiAlgebraicSet, SetError,
};

pub const MIN_SAMPLES: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CroftonError {
    #[error("at least {MIN_SAMPLES} samples are required, got {0}")]
    TooFewSamples(usize),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EstimatorOptions {
    pub count: CountOptions,
    /// Fresh draws tried after a degenerate or ambiguous fiber.
    pub max_resamples: u32,
    /// Fraction of resampled draws above which the estimate is flagged.
    pub degeneracy_warn_rate: f64,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        EstimatorOptions {
            count: CountOptions::default(),
            max_resamples: 3,
            degeneracy_warn_rate: 0.01,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: usize,
    /// Samples scored 0 after the last draw was still degenerate.
    pub n_degenerate: usize,
    /// Samples scored 0 after the last draw was still ambiguous.
    pub n_ambiguous: usize,
    /// Samples whose first draw had to be replaced.
    pub n_resampled: usize,
    pub m: usize,
    pub k: usize,
    pub constant_used: f64,
    pub window: Option<Window>,
    pub seed: u64,
    pub degeneracy_warning: bool,
}

/// One row of the per-sample diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleRecord {
    pub sample_index: usize,
    pub projection_hash: String,
    pub offset: Vec<f64>,
    pub count: usize,
    pub degenerate_flag: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outcome {
    Counted,
    Degenerate,
    Ambiguous,
}

struct Sample {
    record: SampleRecord,
    outcome: Outcome,
    resampled: bool,
    /// Integrand value before the constant factor.
    weight: f64,
}

fn check_samples(n: usize) -> Result<(), CroftonError> {
    if n < MIN_SAMPLES {
        Err(CroftonError::TooFewSamples(n))
    } else {
        Ok(())
    }
}

fn substream(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Evaluate `draw` on every sample index with up to `max_resamples` retries.
fn run_samples<F>(n: usize, seed: u64, opts: &EstimatorOptions, draw: F) -> Result<Vec<Sample>, CroftonError>
where
    F: Fn(&mut ChaCha8Rng) -> Result<(String, Vec<f64>, FiberCount, f64), CroftonError> + Sync,
{
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, i);
            let mut attempt = 0;
            loop {
                let (hash, offset, count, span) = draw(&mut rng)?;
                let outcome = match count {
                    FiberCount::Points(c) => {
                        return Ok(Sample {
                            record: SampleRecord {
                                sample_index: i,
                                projection_hash: hash,
                                offset,
                                count: c,
                                degenerate_flag: false,
                            },
                            outcome: Outcome::Counted,
                            resampled: attempt > 0,
                            weight: span * c as f64,
                        })
                    }
                    FiberCount::Degenerate => Outcome::Degenerate,
                    FiberCount::Ambiguous => Outcome::Ambiguous,
                };
                if attempt == opts.max_resamples {
                    return Ok(Sample {
                        record: SampleRecord {
                            sample_index: i,
                            projection_hash: hash,
                            offset,
                            count: 0,
                            degenerate_flag: true,
                        },
                        outcome,
                        resampled: true,
                        weight: 0.0,
                    });
                }
                attempt += 1;
            }
        })
        .collect()
}

struct Tally {
    n_degenerate: usize,
    n_ambiguous: usize,
    n_resampled: usize,
}

fn tally(samples: &[Sample]) -> Tally {
    Tally {
        n_degenerate: samples.iter().filter(|s| s.outcome == Outcome::Degenerate).count(),
        n_ambiguous: samples.iter().filter(|s| s.outcome == Outcome::Ambiguous).count(),
        n_resampled: samples.iter().filter(|s| s.resampled).count(),
    }
}

/// Mean and sample variance of integer counts, from exact integer sums.
fn count_moments(samples: &[Sample]) -> (f64, f64) {
    let n = samples.len() as u128;
    let (s1, s2) = samples.iter().fold((0u128, 0u128), |(a, b), s| {
        let c = s.record.count as u128;
        (a + c, b + c * c)
    });
    let mean = s1 as f64 / n as f64;
    let var = (n * s2 - s1 * s1) as f64 / (n * (n - 1)) as f64;
    (mean, var)
}

/// Mean and sample variance of real weights, summed in index order.
fn weight_moments(samples: &[Sample]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().map(|s| s.weight).sum::<f64>() / n;
    let ss: f64 = samples.iter().map(|s| (s.weight - mean).powi(2)).sum();
    (mean, ss / (n - 1.0))
}

/// Estimate `H^{m-1}(A)` by counting points of `A` on random lines.
///
/// Offsets are drawn uniformly from the `k`-ball of radius `r` about
/// `p(center)`, so the estimate is `c(m,k) · mean count · Vol_k(B_1) · r^k`.
pub fn estimate_measure(
    set: &SemiAlgebraicSet,
    window: &Window,
    n_samples: usize,
    seed: u64,
    opts: &EstimatorOptions,
) -> Result<MeasureEstimate, CroftonError> {
    estimate_measure_with_samples(set, window, n_samples, seed, opts).map(|(e, _)| e)
}

pub fn estimate_measure_with_samples(
    set: &SemiAlgebraicSet,
    window: &Window,
    n_samples: usize,
    seed: u64,
    opts: &EstimatorOptions,
) -> Result<(MeasureEstimate, Vec<SampleRecord>), CroftonError> {
    check_samples(n_samples)?;
    let m = set.ambient_dim();
    if m < 2 {
        return Err(CroftonError::Unsupported(
            "zero-dimensional sets in R^1 have no line fibers".into(),
        ));
    }
    let k = m - 1;
    if set.declared_dim() != Some(k) {
        return Err(SetError::WrongDeclaredDim {
            expected: k,
            declared: set.declared_dim(),
        }
        .into());
    }
    if window.dim() != m {
        return Err(GeomError::DimensionMismatch {
            expected: m,
            got: window.dim(),
        }
        .into());
    }
    let constant = crofton_constant(m, k)?;
    let samples = run_samples(n_samples, seed, opts, |rng| {
        let p = sample_projection(m, k, rng)?;
        let y = sample_in_ball(&p.apply(&window.center)?, window.radius, rng);
        let flat = fiber_flat(&p, &y)?;
        let count = set.count_line_intersections(&flat, window, &opts.count)?;
        Ok((p.digest(), y, count, 1.0))
    })?;
    let (mean, var) = count_moments(&samples);
    let vol = unit_ball_volume(k);
    let rk = window.radius.powi(k as i32);
    let t = tally(&samples);
    let estimate = MeasureEstimate {
        value: constant * mean * vol * rk,
        std_error: constant * vol * rk * (var / n_samples as f64).sqrt(),
        n_samples,
        n_degenerate: t.n_degenerate,
        n_ambiguous: t.n_ambiguous,
        n_resampled: t.n_resampled,
        m,
        k,
        constant_used: constant,
        window: Some(window.clone()),
        seed,
        degeneracy_warning: t.n_resampled as f64 > opts.degeneracy_warn_rate * n_samples as f64,
    };
    Ok((estimate, samples.into_iter().map(|s| s.record).collect()))
}

/// Estimate the length of a polynomial curve on `[0, 1]` from counts of
/// hyperplane crossings. For each direction `u` the offset is uniform on
/// the range of `⟨u, γ⟩`, and the count is weighted by that range's length.
pub fn estimate_curve_length(
    curve: &ParametricCurve,
    n_samples: usize,
    seed: u64,
    opts: &EstimatorOptions,
) -> Result<MeasureEstimate, CroftonError> {
    estimate_curve_length_with_samples(curve, n_samples, seed, opts).map(|(e, _)| e)
}

pub fn estimate_curve_length_with_samples(
    curve: &ParametricCurve,
    n_samples: usize,
    seed: u64,
    opts: &EstimatorOptions,
) -> Result<(MeasureEstimate, Vec<SampleRecord>), CroftonError> {
    check_samples(n_samples)?;
    if curve.is_constant() {
        return Err(CroftonError::Unsupported("curve is a single point".into()));
    }
    let m = curve.ambient_dim();
    let constant = crofton_constant(m, 1)?;
    let samples = run_samples(n_samples, seed, opts, |rng| {
        let p = sample_projection(m, 1, rng)?;
        let u = &p.rows()[0];
        let (lo, hi) = curve.projection_range(u)?;
        let s: f64 = rng.random();
        let y = lo + (hi - lo) * s;
        let count = if hi > lo {
            curve.count_hyperplane_intersections(u, y, &opts.count)?
        } else {
            FiberCount::Points(0)
        };
        Ok((p.digest(), vec![y], count, hi - lo))
    })?;
    let (mean, var) = weight_moments(&samples);
    let t = tally(&samples);
    let estimate = MeasureEstimate {
        value: constant * mean,
        std_error: constant * (var / n_samples as f64).sqrt(),
        n_samples,
        n_degenerate: t.n_degenerate,
        n_ambiguous: t.n_ambiguous,
        n_resampled: t.n_resampled,
        m,
        k: 1,
        constant_used: constant,
        window: None,
        seed,
        degeneracy_warning: t.n_resampled as f64 > opts.degeneracy_warn_rate * n_samples as f64,
    };
    Ok((estimate, samples.into_iter().map(|s| s.record).collect()))
}

/// `H^{m-1}(f^{-1}(y) ∩ container ∩ window)` for a scalar map `f`. The
/// caller asserts that the fiber is a hypersurface.
pub fn estimate_fiber_measure(
    f: &PolynomialMap,
    y: &[f64],
    container: Option<&SemiAlgebraicSet>,
    window: &Window,
    n_samples: usize,
    seed: u64,
    opts: &EstimatorOptions,
) -> Result<MeasureEstimate, CroftonError> {
    let fiber = construct_fiber_set(f, y, container)?;
    estimate_measure(&fiber, window, n_samples, seed, opts)
}
