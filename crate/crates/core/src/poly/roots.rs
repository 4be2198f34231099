//! Real-root isolation by Bernstein subdivision.
//!
//! The polynomial is rewritten in the Bernstein basis of the current
//! interval; the number of sign variations of those coefficients bounds the
//! number of roots in the open interval and has the same parity (Descartes'
//! rule). Intervals with zero variations are discarded, intervals with one
//! variation hold exactly one root, and the rest are halved by de Casteljau.

use num_rational::BigRational;
use serde::Serialize;

use super::coeff::FLOAT_ZERO_REL;
use super::{Coeff, PolyError, UniPoly};

pub const DEFAULT_EPS_ROOT: f64 = 1e-10;
pub const DEFAULT_EPS_CLUSTER: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RootOptions {
    /// Target width of isolating intervals.
    pub eps_root: f64,
    /// Float mode only: width below which an interval still holding several
    /// sign variations is reported as a single, ill-conditioned cluster.
    pub eps_cluster: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            eps_root: DEFAULT_EPS_ROOT,
            eps_cluster: DEFAULT_EPS_CLUSTER,
        }
    }
}

/// Closed interval containing exactly one distinct root. `lo == hi` marks a
/// root found exactly at a subdivision point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootInterval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Coeff> RootInterval<T> {
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> T {
        self.hi.clone() - self.lo.clone()
    }

    pub fn midpoint(&self) -> T {
        (self.lo.clone() + self.hi.clone()) * T::half()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FloatIsolation {
    pub intervals: Vec<RootInterval<f64>>,
    /// Set when some cluster of sign variations could not be resolved at
    /// `eps_cluster`, or rounding made the variation count inconsistent.
    pub ill_conditioned: bool,
}

impl FloatIsolation {
    pub fn count(&self) -> usize {
        self.intervals.len()
    }

    pub fn roots(&self) -> impl Iterator<Item = f64> + '_ {
        self.intervals.iter().map(RootInterval::midpoint)
    }
}

/// Isolate the distinct real roots of `q` in `[lo, hi]` with exact
/// arithmetic. The square-free part is taken first, so repeated roots are
/// reported once.
pub fn isolate_real_roots_exact(
    q: &UniPoly<BigRational>,
    lo: &BigRational,
    hi: &BigRational,
    eps_root: &BigRational,
) -> Result<Vec<RootInterval<BigRational>>, PolyError> {
    if q.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if lo >= hi {
        return Err(PolyError::BadInterval {
            lo: lo.to_f64_lossy(),
            hi: hi.to_f64_lossy(),
        });
    }
    let sf = q.square_free_part();
    let (roots, _) = subdivide(&sf, lo.clone(), hi.clone(), eps_root, None);
    Ok(roots)
}

/// Isolate the real roots of a binary64 polynomial in `[lo, hi]`. Roots that
/// cannot be separated at `eps_cluster` are merged into one interval and
/// flag the result ill-conditioned.
pub fn isolate_real_roots_f64(
    q: &UniPoly<f64>,
    lo: f64,
    hi: f64,
    opts: &RootOptions,
) -> Result<FloatIsolation, PolyError> {
    if q.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(PolyError::BadInterval { lo, hi });
    }
    let (intervals, ill_conditioned) =
        subdivide(q, lo, hi, &opts.eps_root, Some(&opts.eps_cluster));
    Ok(FloatIsolation {
        intervals,
        ill_conditioned,
    })
}

/// Convenience for exact isolation with a binary64 target width.
#[cfg(test)]
pub(crate) fn exact_eps(eps: f64) -> BigRational {
    super::coeff::rational_from_f64(eps).expect("finite tolerance")
}

fn variations<T: Coeff>(bern: &[T]) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for b in bern {
        let s = if b.is_zero() {
            0
        } else if b.is_positive() {
            1
        } else {
            -1
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// de Casteljau split at the midpoint. The midpoint value is the last entry
/// of the left half and the first of the right half.
fn split_half<T: Coeff>(bern: &[T]) -> (Vec<T>, Vec<T>) {
    let n = bern.len() - 1;
    let half = T::half();
    let mut work = bern.to_vec();
    let mut left = Vec::with_capacity(n + 1);
    let mut right = Vec::with_capacity(n + 1);
    left.push(work[0].clone());
    right.push(work[n].clone());
    for r in 1..=n {
        for i in 0..=n - r {
            work[i] = (work[i].clone() + work[i + 1].clone()) * half.clone();
        }
        left.push(work[0].clone());
        right.push(work[n - r].clone());
    }
    right.reverse();
    (left, right)
}

struct Subdivision<'a, T> {
    zero_scale: f64,
    derivative: UniPoly<T>,
    eps_root: &'a T,
    eps_cluster: Option<&'a T>,
    ill_conditioned: bool,
    roots: Vec<RootInterval<T>>,
}

impl<T: Coeff> Subdivision<'_, T> {
    /// Snap a negligible value to exact zero; returns whether it was.
    fn snap(&self, v: &mut T) -> bool {
        if v.is_negligible(self.zero_scale) {
            *v = T::zero();
            true
        } else {
            false
        }
    }

    /// A binary64 zero at `t` is only trustworthy when the polynomial is not
    /// also flat there; otherwise nearby roots may have merged or vanished.
    fn check_flat_zero(&mut self, t: &T) {
        if T::EXACT || self.eps_cluster.is_none() {
            return;
        }
        let slope = self.derivative.eval(t).to_f64_lossy().abs();
        let cluster = self.eps_cluster.map_or(0.0, Coeff::to_f64_lossy);
        if slope * cluster <= FLOAT_ZERO_REL * self.zero_scale {
            self.ill_conditioned = true;
        }
    }

    fn split(&self, lo: &T, hi: &T, bern: &[T]) -> (T, Vec<T>, Vec<T>, bool) {
        let mid = (lo.clone() + hi.clone()) * T::half();
        let (mut left, mut right) = split_half(bern);
        let n = bern.len() - 1;
        let mut value = left[n].clone();
        let is_root = self.snap(&mut value);
        left[n] = value.clone();
        right[0] = value;
        (mid, left, right, is_root)
    }

    /// Shrink an interval known to contain exactly one root in its interior.
    fn refine(&mut self, mut lo: T, mut hi: T, mut bern: Vec<T>) {
        let n = bern.len() - 1;
        loop {
            let endpoint_root = bern[0].is_zero() || bern[n].is_zero();
            if hi.clone() - lo.clone() < *self.eps_root && !endpoint_root {
                break;
            }
            let (mid, left, right, mid_root) = self.split(&lo, &hi, &bern);
            if !T::EXACT && (mid <= lo || mid >= hi) {
                break;
            }
            if mid_root {
                self.check_flat_zero(&mid);
                self.roots.push(RootInterval {
                    lo: mid.clone(),
                    hi: mid,
                });
                return;
            }
            if variations(&left) == 1 {
                hi = mid;
                bern = left;
            } else if variations(&right) == 1 {
                lo = mid;
                bern = right;
            } else {
                // rounding lost the root between the halves
                self.ill_conditioned = true;
                break;
            }
        }
        self.roots.push(RootInterval { lo, hi });
    }
}

fn subdivide<T: Coeff>(
    q: &UniPoly<T>,
    lo: T,
    hi: T,
    eps_root: &T,
    eps_cluster: Option<&T>,
) -> (Vec<RootInterval<T>>, bool) {
    if q.degree().unwrap_or(0) == 0 {
        return (Vec::new(), false);
    }
    let width = hi.clone() - lo.clone();
    let mut bern = q.compose_affine(&lo, &width).bernstein_coefficients();
    let n = bern.len() - 1;
    let scale = bern.iter().map(|b| b.to_f64_lossy().abs()).fold(0.0, f64::max);
    let mut state = Subdivision {
        zero_scale: scale,
        derivative: q.derivative(),
        eps_root,
        eps_cluster,
        ill_conditioned: false,
        roots: Vec::new(),
    };
    let mut first = bern[0].clone();
    if state.snap(&mut first) {
        state.check_flat_zero(&lo);
        state.roots.push(RootInterval {
            lo: lo.clone(),
            hi: lo.clone(),
        });
    }
    bern[0] = first;
    let mut last = bern[n].clone();
    if state.snap(&mut last) {
        state.check_flat_zero(&hi);
        state.roots.push(RootInterval {
            lo: hi.clone(),
            hi: hi.clone(),
        });
    }
    bern[n] = last;

    let mut stack = vec![(lo, hi, bern)];
    while let Some((lo, hi, bern)) = stack.pop() {
        match variations(&bern) {
            0 => {}
            1 => state.refine(lo, hi, bern),
            _ => {
                if let Some(cluster) = state.eps_cluster {
                    if hi.clone() - lo.clone() < *cluster {
                        state.ill_conditioned = true;
                        state.roots.push(RootInterval { lo, hi });
                        continue;
                    }
                }
                let (mid, left, right, mid_root) = state.split(&lo, &hi, &bern);
                if !T::EXACT && (mid <= lo || mid >= hi) {
                    state.ill_conditioned = true;
                    state.roots.push(RootInterval { lo, hi });
                    continue;
                }
                if mid_root {
                    state.check_flat_zero(&mid);
                    state.roots.push(RootInterval {
                        lo: mid.clone(),
                        hi: mid.clone(),
                    });
                }
                stack.push((mid.clone(), hi, right));
                stack.push((lo, mid, left));
            }
        }
    }
    let Subdivision {
        mut roots,
        ill_conditioned,
        ..
    } = state;
    roots.sort_by(|a, b| a.lo.partial_cmp(&b.lo).expect("comparable endpoints"));
    let Some(cluster) = eps_cluster else {
        return (roots, ill_conditioned);
    };
    let mut merged: Vec<RootInterval<T>> = Vec::with_capacity(roots.len());
    let mut ill_conditioned = ill_conditioned;
    for r in roots {
        match merged.last_mut() {
            Some(prev) if r.hi.clone() - prev.lo.clone() < *cluster => {
                prev.hi = r.hi;
                ill_conditioned = true;
            }
            _ => merged.push(r),
        }
    }
    (merged, ill_conditioned)
}
