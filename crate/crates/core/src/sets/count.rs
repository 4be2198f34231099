//! Counting points of `A ∩ p^{-1}(y)` for the two supported fiber shapes:
//! lines through hypersurface-dimensional sets, and hyperplanes cutting
//! parametric curves. Both reduce to univariate root isolation.

use serde::Serialize;

use super::{Atom, Membership, ParametricCurve, Relation, SemiAlgebraicSet, SetError, DEFAULT_EPS_SIGN};
use crate::geom::{dot, AffineFlat, Window};
use crate::poly::{isolate_real_roots_f64, RootOptions, UniPoly};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CountOptions {
    pub eps_sign: f64,
    pub roots: RootOptions,
    /// Relative slack on the window radius, so that points of the set lying
    /// on the window boundary are not lost to rounding.
    pub window_slack: f64,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            eps_sign: DEFAULT_EPS_SIGN,
            roots: RootOptions::default(),
            window_slack: 1e-9,
        }
    }
}

/// Outcome of counting one fiber.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FiberCount {
    Points(usize),
    /// The fiber meets the set in a positive-dimensional piece.
    Degenerate,
    /// A root sits within tolerance of a sign boundary or could not be
    /// separated from a neighbour.
    Ambiguous,
}

impl FiberCount {
    pub fn points(self) -> Option<usize> {
        match self {
            FiberCount::Points(n) => Some(n),
            _ => None,
        }
    }
}

/// Zero test for a restricted polynomial against the size of its inputs.
fn negligible(q: &UniPoly<f64>, scale: f64) -> bool {
    q.magnitude() <= 1e-13 * scale.max(f64::MIN_POSITIVE)
}

/// Coefficient mass of `p(base + t·dir)` before cancellation.
fn restriction_scale(atom: &Atom, base: &[f64]) -> f64 {
    let reach = 1.0 + base.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    atom.float_poly()
        .terms()
        .map(|(e, c)| c.abs() * reach.powi(e.iter().sum::<u32>() as i32))
        .sum()
}

struct Restricted {
    poly: UniPoly<f64>,
    zero: bool,
}

fn restrict(atom: &Atom, base: &[f64], dir: &[f64]) -> Result<Restricted, SetError> {
    let poly = atom.float_poly().restrict_to_line(base, dir)?;
    let zero = poly.is_zero() || negligible(&poly, restriction_scale(atom, base));
    Ok(Restricted { poly, zero })
}

impl SemiAlgebraicSet {
    /// Number of distinct points of `A ∩ line ∩ window` for a line fiber.
    ///
    /// For each disjunct, the roots of one non-vanishing equality
    /// restriction are isolated on the chord the window cuts from the line;
    /// every root is then checked against the remaining atoms of the
    /// disjunct. Points found by several disjuncts are counted once.
    pub fn count_line_intersections(
        &self,
        flat: &AffineFlat,
        window: &Window,
        opts: &CountOptions,
    ) -> Result<FiberCount, SetError> {
        let m = self.ambient_dim;
        if flat.dim() != 1 {
            return Err(SetError::FiberNotALine(flat.dim()));
        }
        if self.declared_dim != m.checked_sub(1) {
            return Err(SetError::WrongDeclaredDim {
                expected: m.saturating_sub(1),
                declared: self.declared_dim,
            });
        }
        if window.dim() != m || flat.base.len() != m {
            return Err(SetError::DimensionMismatch {
                expected: m,
                got: window.dim().min(flat.base.len()),
            });
        }
        let base = &flat.base;
        let dir = &flat.directions[0];
        let padded = Window {
            center: window.center.clone(),
            radius: window.radius * (1.0 + opts.window_slack),
        };
        let Some((t_lo, t_hi)) = padded.chord(base, dir) else {
            return Ok(FiberCount::Points(0));
        };
        if !(t_lo < t_hi) {
            // tangent to the window: a single point, measure zero
            return Ok(FiberCount::Ambiguous);
        }

        let mut hits: Vec<f64> = Vec::new();
        for disjunct in &self.disjuncts {
            let restricted = disjunct
                .iter()
                .map(|atom| restrict(atom, base, dir))
                .collect::<Result<Vec<_>, _>>()?;
            let pivot = disjunct
                .iter()
                .zip(&restricted)
                .enumerate()
                .filter(|(_, (a, r))| a.relation == Relation::Eq && !r.zero)
                .min_by_key(|(_, (_, r))| r.poly.degree().unwrap_or(0))
                .map(|(i, _)| i);
            let Some(pivot) = pivot else {
                let stricts: Vec<&Restricted> = disjunct
                    .iter()
                    .zip(&restricted)
                    .filter(|(a, _)| a.relation == Relation::Gt)
                    .map(|(_, r)| r)
                    .collect();
                if strict_atoms_admit_interval(&stricts, t_lo, t_hi, opts)? {
                    return Ok(FiberCount::Degenerate);
                }
                continue;
            };
            let pivot_poly = &restricted[pivot].poly;
            if pivot_poly.degree() == Some(0) {
                continue;
            }
            let iso = isolate_real_roots_f64(pivot_poly, t_lo, t_hi, &opts.roots)?;
            if iso.ill_conditioned {
                return Ok(FiberCount::Ambiguous);
            }
            for t in iso.roots() {
                let x = flat.point_at(&[t]);
                if !window.contains(&x, opts.window_slack) {
                    continue;
                }
                let mut verdict = Membership::Inside;
                for (i, atom) in disjunct.iter().enumerate() {
                    // the pivot vanishes at its own roots by construction
                    if i != pivot {
                        let v = atom.float_poly().eval(&x)?;
                        verdict = super::conjoin(verdict, atom.judge(v, opts.eps_sign));
                    }
                }
                match verdict {
                    Membership::Inside => hits.push(t),
                    Membership::BoundaryAmbiguous => return Ok(FiberCount::Ambiguous),
                    Membership::Outside => {}
                }
            }
        }
        hits.sort_by(f64::total_cmp);
        hits.dedup_by(|a, b| (*a - *b).abs() <= opts.roots.eps_cluster);
        Ok(FiberCount::Points(hits.len()))
    }
}

/// Whether the strict atoms of a disjunct hold on some open sub-interval of
/// `[t_lo, t_hi]`, judged at the midpoints between consecutive sign breaks.
fn strict_atoms_admit_interval(
    stricts: &[&Restricted],
    t_lo: f64,
    t_hi: f64,
    opts: &CountOptions,
) -> Result<bool, SetError> {
    if stricts.iter().any(|r| r.zero) {
        return Ok(false);
    }
    let mut breaks = vec![t_lo, t_hi];
    for r in stricts {
        if r.poly.degree().unwrap_or(0) > 0 {
            let iso = isolate_real_roots_f64(&r.poly, t_lo, t_hi, &opts.roots)?;
            breaks.extend(iso.roots());
        }
    }
    breaks.sort_by(f64::total_cmp);
    Ok(breaks.windows(2).any(|w| {
        let mid = 0.5 * (w[0] + w[1]);
        w[1] - w[0] > opts.roots.eps_cluster
            && stricts.iter().all(|r| r.poly.eval(&mid) > opts.eps_sign)
    }))
}

impl ParametricCurve {
    /// Distinct `t ∈ [0, 1]` with `⟨u, γ(t)⟩ = y`.
    pub fn count_hyperplane_intersections(
        &self,
        normal: &[f64],
        offset: f64,
        opts: &CountOptions,
    ) -> Result<FiberCount, SetError> {
        let norm_sq = dot(normal, normal);
        if normal.len() == self.ambient_dim() && (norm_sq - 1.0).abs() > 1e-12 {
            return Err(SetError::Poly(crate::poly::PolyError::NotUnitDirection {
                norm_sq,
            }));
        }
        let g = self.height_poly(normal, offset)?;
        if g.is_zero() || negligible(&g, self.height_scale(normal, offset)) {
            return Ok(FiberCount::Degenerate);
        }
        if g.degree() == Some(0) {
            return Ok(FiberCount::Points(0));
        }
        let iso = isolate_real_roots_f64(&g, 0.0, 1.0, &opts.roots)?;
        if iso.ill_conditioned {
            return Ok(FiberCount::Ambiguous);
        }
        Ok(FiberCount::Points(iso.count()))
    }

    /// `(min, max)` of `⟨u, γ(t)⟩` over `t ∈ [0, 1]`.
    pub fn projection_range(&self, normal: &[f64]) -> Result<(f64, f64), SetError> {
        let g = self.height_poly(normal, 0.0)?;
        let mut candidates = vec![g.eval(&0.0), g.eval(&1.0)];
        let dg = g.derivative();
        if dg.degree().unwrap_or(0) > 0 {
            let iso = isolate_real_roots_f64(&dg, 0.0, 1.0, &RootOptions::default())?;
            candidates.extend(iso.roots().map(|t| g.eval(&t)));
        }
        let lo = candidates.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = candidates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok((lo, hi))
    }
}
