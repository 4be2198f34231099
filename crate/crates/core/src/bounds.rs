//! Explicit upper bounds on component counts and on measures of fiber
//! intersections.
//!
//! Every function returns a [`BoundReport`] echoing its inputs. Values are
//! evaluated in binary64; when the result would exceed `1e300` only the
//! base-10 logarithm is reported.

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::geom::{crofton_constant, unit_ball_volume, GeomError};
use crate::sets::{Diagram, PfaffianFormat};

const DIRECT_LIMIT_LOG10: f64 = 300.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("invalid bound input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundKind {
    #[serde(rename = "diagram-B0")]
    DiagramB0,
    #[serde(rename = "optm")]
    Optm,
    #[serde(rename = "khovanskii")]
    Khovanskii,
    #[serde(rename = "zell-V")]
    ZellV,
    #[serde(rename = "zell-measure")]
    ZellMeasure,
    #[serde(rename = "corollary-measure")]
    CorollaryMeasure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Caveat {
    /// A lower-order term without a published constant was dropped.
    LeadingTermOnly,
    /// An exponent left undetermined by the formula was chosen by the caller.
    ExponentSuppliedByUser,
    /// The value overflowed the direct range; see `log10_value`.
    LogSpaceOnly,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub inputs: Value,
    /// `None` when the value is only available in log space.
    pub value: Option<f64>,
    pub log10_value: f64,
    pub caveats: Vec<Caveat>,
}

/// A product `Π base_i^exp_i` of non-negative factors, kept both directly
/// and as a base-10 logarithm.
struct Product {
    direct: f64,
    log10: f64,
}

impl Product {
    fn one() -> Self {
        Product {
            direct: 1.0,
            log10: 0.0,
        }
    }

    fn times(self, base: f64, exp: u32) -> Self {
        Product {
            direct: self.direct * base.powi(exp as i32),
            log10: self.log10 + exp as f64 * base.log10(),
        }
    }
}

fn report(kind: BoundKind, inputs: Value, log10: f64, direct: f64, mut caveats: Vec<Caveat>) -> BoundReport {
    let value = if log10 <= DIRECT_LIMIT_LOG10 && direct.is_finite() {
        Some(direct)
    } else {
        caveats.push(Caveat::LogSpaceOnly);
        None
    };
    caveats.sort();
    caveats.dedup();
    BoundReport {
        kind,
        inputs,
        value,
        log10_value: log10,
        caveats,
    }
}

fn factorial_log10(m: u32) -> f64 {
    (2..=m).map(|i| (i as f64).log10()).sum()
}

fn factorial(m: u32) -> f64 {
    (2..=m).map(f64::from).product()
}

/// Leading term of the component bound of a semi-algebraic set,
/// `(2^m/m!) Σ_i (d_i s_i)^m` with `d_i = max_j d_ij`.
pub fn diagram_component_bound(d: &Diagram) -> BoundReport {
    let m = d.m as u32;
    let terms: Vec<f64> = d
        .max_degrees()
        .iter()
        .zip(&d.s)
        .map(|(&di, &si)| di as f64 * si as f64)
        .collect();
    let direct = 2f64.powi(m as i32) / factorial(m) * terms.iter().map(|t| t.powi(m as i32)).sum::<f64>();
    // log10 of the sum via the largest term
    let top = terms.iter().copied().fold(0.0, f64::max);
    let log10 = if top == 0.0 {
        f64::NEG_INFINITY
    } else {
        let rel: f64 = terms.iter().map(|t| (t / top).powi(m as i32)).sum();
        m as f64 * 2f64.log10() - factorial_log10(m) + m as f64 * top.log10() + rel.log10()
    };
    report(
        BoundKind::DiagramB0,
        json!({ "diagram": d }),
        log10,
        direct,
        vec![Caveat::LeadingTermOnly],
    )
}

/// Component bound for the zero set of a degree-`d` polynomial on the
/// positive orthant of `R^m`: `(m+d)(m+d-1)^{m-1}/2`.
pub fn optm_bound(m: u32, d: u32) -> Result<BoundReport, BoundsError> {
    if m < 1 || d < 1 {
        return Err(BoundsError::Invalid("optm bound needs m >= 1 and d >= 1".into()));
    }
    let p = Product::one()
        .times((m + d) as f64, 1)
        .times((m + d - 1) as f64, m - 1)
        .times(0.5, 1);
    Ok(report(BoundKind::Optm, json!({ "m": m, "d": d }), p.log10, p.direct, vec![]))
}

/// Khovanskii's fewnomial bound for `q` monomials on `R^m`:
/// `2^{q(q-1)/2} (2m)^{m-1} (2m²-m+1)^q`.
pub fn khovanskii_fewnomial_bound(m: u32, q: u32) -> Result<BoundReport, BoundsError> {
    if m < 1 || q < 1 {
        return Err(BoundsError::Invalid("khovanskii bound needs m >= 1 and q >= 1".into()));
    }
    let mf = m as f64;
    let p = Product::one()
        .times(2.0, q * (q - 1) / 2)
        .times(2.0 * mf, m - 1)
        .times(2.0 * mf * mf - mf + 1.0, q);
    Ok(report(BoundKind::Khovanskii, json!({ "m": m, "q": q }), p.log10, p.direct, vec![]))
}

/// `𝒱(m,l,α,β*,γ) = 2^{l(l-1)/2} β* (α+β*-1)^{m-1} (γ/2) [m(α+β*-1)+γ+min(m,l)α]^l`
/// with `β* = max(β, γ)`.
fn zell_v(f: &PfaffianFormat) -> Product {
    let beta = f.beta.max(f.gamma);
    let ab = (f.alpha + beta - 1) as f64;
    let bracket = f.m as f64 * ab + f.gamma as f64 + f.m.min(f.l) as f64 * f.alpha as f64;
    Product::one()
        .times(2.0, f.l * f.l.saturating_sub(1) / 2)
        .times(beta as f64, 1)
        .times(ab, f.m.saturating_sub(1))
        .times(f.gamma as f64 / 2.0, 1)
        .times(bracket, f.l)
}

/// Component bound `(4s+1)^e · 𝒱(m,l,α,β*,γ)` for a semi-Pfaffian set of
/// the given format. The exponent `e` is chosen by the caller.
pub fn zell_bound(f: &PfaffianFormat, exponent_e: u32) -> BoundReport {
    let p = zell_v(f).times((4 * f.s + 1) as f64, exponent_e);
    report(
        BoundKind::ZellV,
        json!({ "format": f, "exponent_e": exponent_e }),
        p.log10,
        p.direct,
        vec![Caveat::ExponentSuppliedByUser],
    )
}

fn check_measure_inputs(m: usize, k: usize, b0: f64, r: f64) -> Result<(), BoundsError> {
    if k > m || m == 0 {
        return Err(GeomError::DimensionOutOfRange { m, k }.into());
    }
    if !(b0 >= 0.0) || !b0.is_finite() {
        return Err(BoundsError::Invalid(format!("B0 must be finite and >= 0, got {b0}")));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(BoundsError::Invalid(format!("radius must be positive, got {r}")));
    }
    Ok(())
}

/// `c(m,k) · B0 · Vol_k(B_1^k) · r^k`, bounding `H^k(A ∩ B_r^m)`.
pub fn corollary_measure_bound(m: usize, k: usize, b0: f64, r: f64) -> Result<BoundReport, BoundsError> {
    check_measure_inputs(m, k, b0, r)?;
    let c = crofton_constant(m, k)?;
    let direct = c * b0 * unit_ball_volume(k) * r.powi(k as i32);
    Ok(report(
        BoundKind::CorollaryMeasure,
        json!({ "m": m, "k": k, "B0": b0, "r": r }),
        direct.log10(),
        direct,
        vec![],
    ))
}

/// The measure bound with the semi-Pfaffian component bound as `B0`.
pub fn zell_measure_bound(
    f: &PfaffianFormat,
    exponent_e: u32,
    k: usize,
    r: f64,
) -> Result<BoundReport, BoundsError> {
    let m = f.m as usize;
    check_measure_inputs(m, k, 0.0, r)?;
    let b0 = zell_bound(f, exponent_e);
    let scale = crofton_constant(m, k)? * unit_ball_volume(k) * r.powi(k as i32);
    let log10 = b0.log10_value + scale.log10();
    let direct = b0.value.map_or(f64::INFINITY, |v| scale * v);
    Ok(report(
        BoundKind::ZellMeasure,
        json!({ "format": f, "exponent_e": exponent_e, "k": k, "r": r }),
        log10,
        direct,
        b0.caveats,
    ))
}
