//! Integral-geometry constants and invariant sampling of orthogonal
//! projections `p: R^m -> R^k` with `p ∘ p* = id`, together with their fiber
//! flats `p^{-1}(y)`.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("target dimension {k} out of range for ambient dimension {m}")]
    DimensionOutOfRange { m: usize, k: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("window radius must be positive and finite, got {0}")]
    BadRadius(f64),
}

/// `c(m,k) = Γ((m+1)/2) Γ(1/2) / (Γ((k+1)/2) Γ((m-k+1)/2))`.
pub fn crofton_constant(m: usize, k: usize) -> Result<f64, GeomError> {
    if k > m {
        return Err(GeomError::DimensionOutOfRange { m, k });
    }
    let lg = |x: f64| libm::lgamma(x);
    let (m, k) = (m as f64, k as f64);
    // grouped so that k = 0 and k = m cancel exactly
    let log_c = (lg((m + 1.0) / 2.0) - lg((m - k + 1.0) / 2.0)) + (lg(0.5) - lg((k + 1.0) / 2.0));
    Ok(log_c.exp())
}

/// Volume of the unit ball in `R^k`, `π^{k/2} / Γ(k/2 + 1)`.
pub fn unit_ball_volume(k: usize) -> f64 {
    let k = k as f64;
    (0.5 * k * std::f64::consts::PI.ln() - libm::lgamma(0.5 * k + 1.0)).exp()
}

/// Orthogonal projection `R^m -> R^k`, stored as `k` orthonormal rows.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Projection {
    m: usize,
    k: usize,
    rows: Vec<Vec<f64>>,
}

impl Projection {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, GeomError> {
        let k = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if k == 0 || k > m {
            return Err(GeomError::DimensionOutOfRange { m, k });
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != m) {
            return Err(GeomError::DimensionMismatch {
                expected: m,
                got: bad.len(),
            });
        }
        Ok(Projection { m, k, rows })
    }

    /// `(x_1, ..., x_m) -> (x_1, ..., x_k)`.
    pub fn coordinate(m: usize, k: usize) -> Result<Self, GeomError> {
        if k == 0 || k > m {
            return Err(GeomError::DimensionOutOfRange { m, k });
        }
        let rows = (0..k)
            .map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Ok(Projection { m, k, rows })
    }

    pub fn ambient_dim(&self) -> usize {
        self.m
    }

    pub fn target_dim(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>, GeomError> {
        check_len(self.m, x.len())?;
        Ok(self.rows.iter().map(|r| dot(r, x)).collect())
    }

    /// `p*(y) = pᵀ y`, the right inverse of `p`.
    pub fn adjoint_apply(&self, y: &[f64]) -> Result<Vec<f64>, GeomError> {
        check_len(self.k, y.len())?;
        let mut x = vec![0.0; self.m];
        for (row, &yi) in self.rows.iter().zip(y) {
            axpy(&mut x, yi, row);
        }
        Ok(x)
    }

    /// Max entry of `|rows·rowsᵀ - I|`.
    pub fn orthonormality_residual(&self) -> f64 {
        gram_residual(&self.rows)
    }

    /// The projection `x -> p(g x)` for an `m×m` matrix `g` given by rows.
    pub fn compose(&self, g: &[Vec<f64>]) -> Result<Self, GeomError> {
        check_len(self.m, g.len())?;
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..self.m)
                    .map(|j| r.iter().zip(g).map(|(ri, gi)| ri * gi[j]).sum())
                    .collect()
            })
            .collect();
        Ok(Projection {
            m: self.m,
            k: self.k,
            rows,
        })
    }

    /// Stable digest of the exact binary64 entries.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        for r in &self.rows {
            for x in r {
                h.update(x.to_bits().to_le_bytes());
            }
        }
        h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Fiber `p^{-1}(y)`: `base + span(directions)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AffineFlat {
    pub base: Vec<f64>,
    pub directions: Vec<Vec<f64>>,
}

impl AffineFlat {
    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn point_at(&self, params: &[f64]) -> Vec<f64> {
        let mut x = self.base.clone();
        for (d, &t) in self.directions.iter().zip(params) {
            axpy(&mut x, t, d);
        }
        x
    }
}

/// Euclidean ball `B_r(center)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Window {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self, GeomError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(GeomError::BadRadius(radius));
        }
        Ok(Window { center, radius })
    }

    pub fn centered(m: usize, radius: f64) -> Result<Self, GeomError> {
        Self::new(vec![0.0; m], radius)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Parameter range `[t_lo, t_hi]` of the chord cut from the line
    /// `base + t·dir` (unit `dir`), or `None` when the line misses.
    pub fn chord(&self, base: &[f64], dir: &[f64]) -> Option<(f64, f64)> {
        let offset: Vec<f64> = self.center.iter().zip(base).map(|(c, b)| c - b).collect();
        let t0 = dot(&offset, dir);
        let dist_sq = dot(&offset, &offset) - t0 * t0;
        let h_sq = self.radius * self.radius - dist_sq;
        if h_sq < 0.0 {
            return None;
        }
        let h = h_sq.sqrt();
        Some((t0 - h, t0 + h))
    }

    /// Closed-ball membership with relative slack `rel_tol`.
    pub fn contains(&self, x: &[f64], rel_tol: f64) -> bool {
        let d_sq: f64 = self.center.iter().zip(x).map(|(c, xi)| (c - xi).powi(2)).sum();
        d_sq.sqrt() <= self.radius * (1.0 + rel_tol)
    }
}

/// Draw from the invariant probability measure on projections `R^m -> R^k`:
/// Gram–Schmidt of an i.i.d. Gaussian `k×m` matrix, i.e. the Q factor of its
/// transpose with positive diagonal in R.
pub fn sample_projection<R: Rng + ?Sized>(
    m: usize,
    k: usize,
    rng: &mut R,
) -> Result<Projection, GeomError> {
    if k == 0 || k > m {
        return Err(GeomError::DimensionOutOfRange { m, k });
    }
    'draw: loop {
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(k);
        for _ in 0..k {
            let g: Vec<f64> = (0..m).map(|_| StandardNormal.sample(rng)).collect();
            match orthonormalize_against(&g, &rows) {
                Some(v) => rows.push(v),
                None => continue 'draw,
            }
        }
        return Ok(Projection { m, k, rows });
    }
}

/// Uniform point in the `k`-ball of radius `r` about `center`.
pub fn sample_in_ball<R: Rng + ?Sized>(center: &[f64], radius: f64, rng: &mut R) -> Vec<f64> {
    let k = center.len();
    loop {
        let g: Vec<f64> = (0..k).map(|_| StandardNormal.sample(rng)).collect();
        let norm = dot(&g, &g).sqrt();
        if norm == 0.0 {
            continue;
        }
        let u: f64 = rng.random();
        let rho = radius * u.powf(1.0 / k as f64);
        return center
            .iter()
            .zip(&g)
            .map(|(c, gi)| c + rho * gi / norm)
            .collect();
    }
}

/// The fiber `p^{-1}(y)`: base `p*(y)` and an orthonormal basis of `ker p`.
pub fn fiber_flat(p: &Projection, y: &[f64]) -> Result<AffineFlat, GeomError> {
    let base = p.adjoint_apply(y)?;
    let m = p.m;
    let mut basis: Vec<Vec<f64>> = p.rows.clone();
    let mut directions = Vec::with_capacity(m - p.k);
    while basis.len() < m {
        // complete with the standard basis vector least aligned with the span
        let (_, best) = (0..m)
            .filter_map(|j| {
                let e: Vec<f64> = (0..m).map(|i| if i == j { 1.0 } else { 0.0 }).collect();
                let r = residual(&e, &basis);
                let n = dot(&r, &r);
                Some((n, r))
            })
            .fold((f64::NEG_INFINITY, Vec::new()), |acc, cand| {
                if cand.0 > acc.0 {
                    cand
                } else {
                    acc
                }
            });
        let v = orthonormalize_against(&best, &basis).expect("completion vector is independent");
        basis.push(v.clone());
        directions.push(v);
    }
    Ok(AffineFlat { base, directions })
}

/// Max entry of `|directions·directionsᵀ - I|` and `|directions·rowsᵀ|`.
pub fn flat_residual(p: &Projection, flat: &AffineFlat) -> f64 {
    let cross = flat
        .directions
        .iter()
        .flat_map(|d| p.rows.iter().map(move |r| dot(d, r).abs()))
        .fold(0.0, f64::max);
    gram_residual(&flat.directions).max(cross)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn residual(v: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut r = v.to_vec();
    for b in basis {
        let c = dot(&r, b);
        axpy(&mut r, -c, b);
    }
    r
}

/// Two passes of modified Gram–Schmidt, then normalization. `None` when the
/// vector is numerically in the span.
fn orthonormalize_against(v: &[f64], basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    let scale = dot(v, v).sqrt();
    let r = residual(&residual(v, basis), basis);
    let n = dot(&r, &r).sqrt();
    if !(n > 1e-8 * scale) {
        return None;
    }
    Some(r.into_iter().map(|x| x / n).collect())
}

fn gram_residual(rows: &[Vec<f64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in rows.iter().enumerate() {
        for (j, b) in rows.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot(a, b) - target).abs());
        }
    }
    worst
}

fn check_len(expected: usize, got: usize) -> Result<(), GeomError> {
    if expected == got {
        Ok(())
    } else {
        Err(GeomError::DimensionMismatch { expected, got })
    }
}
