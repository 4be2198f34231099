use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{exact_curve_length_oracle, fermat_cubic_arc_length, fit_power_law, FitResult};
use super::{HarnessError, QuadratureResult};
use crate::bounds::{
    corollary_measure_bound, diagram_component_bound, khovanskii_fewnomial_bound, optm_bound,
    zell_bound, BoundReport,
};
use crate::crofton::{
    estimate_curve_length_with_samples, estimate_measure_with_samples, EstimatorOptions,
    MeasureEstimate, SampleRecord,
};
use crate::geom::{crofton_constant, Window};
use crate::poly::{isolate_real_roots_f64, parse_expression, BigRational, MultiPoly, RootOptions, UniPoly, VariableNames};
use crate::sets::{
    construct_fiber_set, positive_orthant, CurveDoc, Diagram, ParametricCurve, PfaffianFormat,
    PolynomialMap, SemiAlgebraicSet, SetDoc,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Circle,
    Sphere,
    Segment,
    ParametricCurve,
    Fewnomial,
    HoelderFit,
    NonHoelderDemo,
    BoundsTable,
}

impl Scenario {
    pub const ALL: [Scenario; 8] = [
        Scenario::Circle,
        Scenario::Sphere,
        Scenario::Segment,
        Scenario::ParametricCurve,
        Scenario::Fewnomial,
        Scenario::HoelderFit,
        Scenario::NonHoelderDemo,
        Scenario::BoundsTable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Circle => "circle",
            Scenario::Sphere => "sphere",
            Scenario::Segment => "segment",
            Scenario::ParametricCurve => "parametric-curve",
            Scenario::Fewnomial => "fewnomial",
            Scenario::HoelderFit => "hoelder-fit",
            Scenario::NonHoelderDemo => "non-hoelder-demo",
            Scenario::BoundsTable => "bounds-table",
        }
    }

    /// Sample count used when the configuration leaves it open; `None` for
    /// scenarios without Monte Carlo estimates.
    pub fn default_samples(self) -> Option<usize> {
        match self {
            Scenario::Circle | Scenario::Segment | Scenario::ParametricCurve | Scenario::Fewnomial => {
                Some(20_000)
            }
            Scenario::Sphere => Some(50_000),
            _ => None,
        }
    }
}

impl std::str::FromStr for Scenario {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| HarnessError::UnknownScenario(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub n_samples: Option<usize>,
    pub seed: u64,
    /// Report destination; not part of the serialized report.
    #[serde(skip)]
    pub output: Option<PathBuf>,
    /// Per-sample CSV destination; not part of the serialized report.
    #[serde(skip)]
    pub csv: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(scenario: Scenario, n_samples: Option<usize>, seed: u64) -> Self {
        RunConfig {
            scenario,
            n_samples,
            seed,
            output: None,
            csv: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckRelation {
    /// `|observed - expected| <= tolerance`
    Within,
    /// `observed <= expected + tolerance`
    AtMost,
    /// `observed < expected`
    LessThan,
    /// `observed > expected`
    GreaterThan,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub relation: CheckRelation,
    pub observed: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn within(name: impl Into<String>, observed: f64, expected: f64, tolerance: f64) -> Self {
        Self::make(name, CheckRelation::Within, observed, expected, tolerance)
    }

    pub fn at_most(name: impl Into<String>, observed: f64, bound: f64, slack: f64) -> Self {
        Self::make(name, CheckRelation::AtMost, observed, bound, slack)
    }

    pub fn less_than(name: impl Into<String>, observed: f64, expected: f64) -> Self {
        Self::make(name, CheckRelation::LessThan, observed, expected, 0.0)
    }

    pub fn greater_than(name: impl Into<String>, observed: f64, expected: f64) -> Self {
        Self::make(name, CheckRelation::GreaterThan, observed, expected, 0.0)
    }

    fn make(name: impl Into<String>, relation: CheckRelation, observed: f64, expected: f64, tolerance: f64) -> Self {
        let passed = match relation {
            CheckRelation::Within => (observed - expected).abs() <= tolerance,
            CheckRelation::AtMost => observed <= expected + tolerance,
            CheckRelation::LessThan => observed < expected,
            CheckRelation::GreaterThan => observed > expected,
        };
        Check {
            name: name.into(),
            relation,
            observed,
            expected,
            tolerance,
            passed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Named<T> {
    pub name: String,
    #[serde(flatten)]
    pub item: T,
}

fn named<T>(name: &str, item: T) -> Named<T> {
    Named {
        name: name.to_string(),
        item,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub config: RunConfig,
    pub inputs: BTreeMap<String, Value>,
    pub options: Option<EstimatorOptions>,
    pub estimates: Vec<Named<MeasureEstimate>>,
    pub bounds: Vec<Named<BoundReport>>,
    pub oracles: Vec<Named<QuadratureResult>>,
    pub fits: Vec<Named<FitResult>>,
    pub checks: Vec<Check>,
    pub passed: bool,
    /// Filled in by callers that want timing; absent by default so that
    /// reports are byte-identical across reruns.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_seconds: Option<f64>,
}

/// A report together with the per-sample records of each estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioRun {
    pub report: Report,
    pub samples: Vec<(String, Vec<SampleRecord>)>,
}

struct Builder {
    report: Report,
    samples: Vec<(String, Vec<SampleRecord>)>,
}

impl Builder {
    fn new(config: RunConfig) -> Self {
        Builder {
            report: Report {
                config,
                inputs: BTreeMap::new(),
                options: None,
                estimates: Vec::new(),
                bounds: Vec::new(),
                oracles: Vec::new(),
                fits: Vec::new(),
                checks: Vec::new(),
                passed: false,
                wall_clock_seconds: None,
            },
            samples: Vec::new(),
        }
    }

    fn n_samples(&self) -> usize {
        self.report.config.n_samples.expect("resolved for sampling scenarios")
    }

    fn seed(&self) -> u64 {
        self.report.config.seed
    }

    fn input(&mut self, name: &str, doc: impl Serialize) {
        let v = serde_json::to_value(doc).expect("documents serialize");
        self.report.inputs.insert(name.to_string(), v);
    }

    fn estimate(&mut self, name: &str, e: (MeasureEstimate, Vec<SampleRecord>)) -> MeasureEstimate {
        self.report.options.get_or_insert_with(EstimatorOptions::default);
        self.report.estimates.push(named(name, e.0.clone()));
        self.samples.push((name.to_string(), e.1));
        e.0
    }

    fn bound(&mut self, name: &str, b: BoundReport) -> BoundReport {
        self.report.bounds.push(named(name, b.clone()));
        b
    }

    fn oracle(&mut self, name: &str, q: QuadratureResult) -> QuadratureResult {
        self.report.oracles.push(named(name, q));
        q
    }

    fn check(&mut self, c: Check) {
        self.report.checks.push(c);
    }

    fn finish(mut self) -> ScenarioRun {
        self.report.passed = self.report.checks.iter().all(|c| c.passed);
        ScenarioRun {
            report: self.report,
            samples: self.samples,
        }
    }
}

fn expr_set(src: &str, m: usize) -> Result<SemiAlgebraicSet, HarnessError> {
    let p = parse_expression(src, &VariableNames::for_dim(m))?;
    Ok(SemiAlgebraicSet::hypersurface(MultiPoly::Exact(p))?)
}

fn value_of(b: &BoundReport) -> f64 {
    b.value.unwrap_or(f64::INFINITY)
}

/// Run a scenario and evaluate its checks. Reports are a pure function of
/// the configuration's scenario, sample count and seed.
pub fn run_scenario(config: &RunConfig) -> Result<ScenarioRun, HarnessError> {
    if let Some(n) = config.n_samples {
        if n < crate::crofton::MIN_SAMPLES {
            return Err(crate::crofton::CroftonError::TooFewSamples(n).into());
        }
    }
    let mut resolved = config.clone();
    resolved.n_samples = config.n_samples.or(config.scenario.default_samples());
    let mut b = Builder::new(resolved);
    match config.scenario {
        Scenario::Circle => circle(&mut b)?,
        Scenario::Sphere => sphere(&mut b)?,
        Scenario::Segment => segment(&mut b)?,
        Scenario::ParametricCurve => parametric_curve(&mut b)?,
        Scenario::Fewnomial => fewnomial(&mut b)?,
        Scenario::HoelderFit => hoelder_fit(&mut b)?,
        Scenario::NonHoelderDemo => non_hoelder_demo(&mut b)?,
        Scenario::BoundsTable => bounds_table(&mut b)?,
    }
    Ok(b.finish())
}

fn circle(b: &mut Builder) -> Result<(), HarnessError> {
    let set = expr_set("x^2 + y^2 - 1", 2)?;
    let window = Window::centered(2, 1.5)?;
    b.input("set", SetDoc::from(&set));
    b.input("window", &window);
    let c = crofton_constant(2, 1)?;
    b.check(Check::within("crofton-constant-c(2,1)", c, PI / 2.0, 1e-12));
    let e = b.estimate(
        "circle-length",
        estimate_measure_with_samples(&set, &window, b.n_samples(), b.seed(), &EstimatorOptions::default())?,
    );
    let bound = b.bound("corollary-d2-r1.5", corollary_measure_bound(2, 1, 2.0, window.radius)?);
    let two_pi = 2.0 * PI;
    b.check(Check::within("length-vs-2pi", e.value, two_pi, (0.02 * two_pi).max(3.0 * e.std_error)));
    b.check(Check::at_most("length-below-corollary-bound", e.value, value_of(&bound), 3.0 * e.std_error));
    Ok(())
}

fn sphere(b: &mut Builder) -> Result<(), HarnessError> {
    let set = expr_set("x^2 + y^2 + z^2 - 1", 3)?;
    let window = Window::centered(3, 1.0)?;
    b.input("set", SetDoc::from(&set));
    b.input("window", &window);
    let e = b.estimate(
        "sphere-area",
        estimate_measure_with_samples(&set, &window, b.n_samples(), b.seed(), &EstimatorOptions::default())?,
    );
    let bound = b.bound("corollary-B0-2-r1", corollary_measure_bound(3, 2, 2.0, window.radius)?);
    let four_pi = 4.0 * PI;
    b.check(Check::within("area-vs-4pi", e.value, four_pi, 0.03 * four_pi));
    b.check(Check::at_most("area-below-corollary-bound", e.value, value_of(&bound), 3.0 * e.std_error));
    Ok(())
}

fn segment(b: &mut Builder) -> Result<(), HarnessError> {
    let set = expr_set("y", 2)?;
    let window = Window::centered(2, 1.0)?;
    b.input("set", SetDoc::from(&set));
    b.input("window", &window);
    let e = b.estimate(
        "diameter-length",
        estimate_measure_with_samples(&set, &window, b.n_samples(), b.seed(), &EstimatorOptions::default())?,
    );
    b.check(Check::within("length-vs-2r", e.value, 2.0, 3.0 * e.std_error));
    Ok(())
}

fn parametric_curve(b: &mut Builder) -> Result<(), HarnessError> {
    let curves = [
        ("parabola", r#"{"m":2,"coords":["t","t^2"]}"#),
        ("twisted-cubic", r#"{"m":3,"coords":["t","t^2","t^3"]}"#),
    ];
    for (name, doc) in curves {
        let doc: CurveDoc = serde_json::from_str(doc).expect("built-in curve");
        let curve = ParametricCurve::from_doc(&doc)?;
        b.input(name, &doc);
        let oracle = b.oracle(name, exact_curve_length_oracle(&curve, 32)?);
        b.check(Check::within(
            format!("{name}-oracle-converged"),
            oracle.relative_change,
            0.0,
            super::QUADRATURE_TOL,
        ));
        if name == "parabola" {
            let closed = (2.0 * 5f64.sqrt() + 2f64.asinh()) / 4.0;
            b.check(Check::within("parabola-oracle-vs-closed-form", oracle.value, closed, 1e-9));
        }
        let e = b.estimate(
            name,
            estimate_curve_length_with_samples(&curve, b.n_samples(), b.seed(), &EstimatorOptions::default())?,
        );
        b.check(Check::within(
            format!("{name}-length-vs-oracle"),
            e.value,
            oracle.value,
            (0.02 * oracle.value).max(3.0 * e.std_error),
        ));
    }
    Ok(())
}

fn fewnomial(b: &mut Builder) -> Result<(), HarnessError> {
    let one = BigRational::from_integer(1.into());
    let f = PolynomialMap::fewnomial(
        2,
        &[(vec![3, 0], one.clone()), (vec![0, 3], one.clone()), (vec![0, 0], -one)],
    )?;
    let set = construct_fiber_set(&f, &[0.0], Some(&positive_orthant(2)))?;
    let window = Window::centered(2, 1.5)?;
    b.input("set", SetDoc::from(&set));
    b.input("window", &window);
    let (m, q, d) = (2, 3, 3);
    let oracle = b.oracle("polar-arc-length", fermat_cubic_arc_length(64)?);
    let e = b.estimate(
        "fewnomial-length",
        estimate_measure_with_samples(&set, &window, b.n_samples(), b.seed(), &EstimatorOptions::default())?,
    );
    let optm = b.bound("optm", optm_bound(m, d)?);
    let khov = b.bound("khovanskii", khovanskii_fewnomial_bound(m, q)?);
    let via_optm = b.bound(
        "corollary-with-optm",
        corollary_measure_bound(2, 1, value_of(&optm), window.radius)?,
    );
    let via_khov = b.bound(
        "corollary-with-khovanskii",
        corollary_measure_bound(2, 1, value_of(&khov), window.radius)?,
    );
    b.check(Check::within(
        "length-vs-polar-oracle",
        e.value,
        oracle.value,
        (0.02 * oracle.value).max(3.0 * e.std_error),
    ));
    b.check(Check::at_most("length-below-optm-measure-bound", e.value, value_of(&via_optm), 3.0 * e.std_error));
    b.check(Check::at_most(
        "length-below-khovanskii-measure-bound",
        e.value,
        value_of(&via_khov),
        3.0 * e.std_error,
    ));
    b.check(Check::less_than("optm-sharper-than-khovanskii", value_of(&optm), value_of(&khov)));
    Ok(())
}

/// `f(x) = 2x³`: the preimage of `[0, y]` is `[0, (y/2)^{1/3}]`.
fn hoelder_fit(b: &mut Builder) -> Result<(), HarnessError> {
    let map = UniPoly::new(vec![0.0, 0.0, 0.0, 2.0]);
    b.input("map", serde_json::json!({ "f": "2*x^3", "y": "0.1..0.9" }));
    let mut pairs = Vec::new();
    let mut worst: f64 = 0.0;
    for i in 1..=9 {
        let y = i as f64 / 10.0;
        let closed = (y / 2.0).cbrt();
        // the preimage endpoint as the root of 2x³ - y
        let g = &map - &UniPoly::constant(y);
        let iso = isolate_real_roots_f64(&g, 0.0, 1.0, &RootOptions::default())?;
        let root = iso.roots().next().unwrap_or(f64::NAN);
        worst = worst.max((root - closed).abs());
        pairs.push((y, closed));
    }
    b.check(Check::within("closed-form-vs-root-isolation", worst, 0.0, 1e-9));
    let fit = fit_power_law(&pairs)?;
    b.report.fits.push(named("preimage-length", fit));
    let third = 1.0 / 3.0;
    let c = 2f64.powf(-third);
    b.check(Check::within("alpha-vs-one-third", fit.alpha, third, 0.05 * third));
    b.check(Check::within("C-vs-two-to-minus-one-third", fit.c, c, 0.05 * c));
    Ok(())
}

/// `f⁻¹([0, y]) = [0, -1/ln y]` admits no bound `C·y^α`.
fn non_hoelder_demo(b: &mut Builder) -> Result<(), HarnessError> {
    const T_MAX: u32 = 1000;
    b.input(
        "grid",
        serde_json::json!({ "C": [1, 10, 100], "alpha": "0.1..1.0", "y": format!("e^-t, t = 1..{T_MAX}") }),
    );
    let pairs: Vec<(f64, f64)> = [5.0f64, 10.0, 20.0]
        .iter()
        .map(|&t| ((-t).exp(), 1.0 / t))
        .collect();
    let fit = fit_power_law(&pairs)?;
    b.report.fits.push(named("log-law", fit));
    b.check(Check::greater_than("power-law-residual", fit.residual, 0.01));
    for c in [1.0f64, 10.0, 100.0] {
        for j in 1..=10 {
            let alpha = j as f64 / 10.0;
            // with y = e^{-t}: -1/ln y > C y^α  ⇔  α t - ln t > ln C
            let witness = (1..=T_MAX).find(|&t| {
                let t = t as f64;
                alpha * t - t.ln() > c.ln()
            });
            b.check(Check::greater_than(
                format!("violation-C{c}-alpha{alpha}"),
                witness.map_or(0.0, f64::from),
                0.0,
            ));
        }
    }
    Ok(())
}

fn bounds_table(b: &mut Builder) -> Result<(), HarnessError> {
    let fmt = PfaffianFormat::new;
    let rows: Vec<(&str, BoundReport, f64, f64)> = vec![
        ("diagram-(2,1,1,(2))", diagram_component_bound(&Diagram::new(2, vec![vec![2]])?), 8.0, 0.0),
        ("diagram-(1,1,1,(1))", diagram_component_bound(&Diagram::new(1, vec![vec![1]])?), 2.0, 0.0),
        ("optm-(2,3)", optm_bound(2, 3)?, 10.0, 0.0),
        ("optm-(1,1)", optm_bound(1, 1)?, 1.0, 0.0),
        ("optm-(2,2)", optm_bound(2, 2)?, 6.0, 0.0),
        ("khovanskii-(1,1)", khovanskii_fewnomial_bound(1, 1)?, 2.0, 0.0),
        ("khovanskii-(2,2)", khovanskii_fewnomial_bound(2, 2)?, 392.0, 0.0),
        ("khovanskii-(2,1)", khovanskii_fewnomial_bound(2, 1)?, 28.0, 0.0),
        ("zell-(1,1,1,1,0,1)-e0", zell_bound(&fmt(1, 1, 1, 1, 0, 1)?, 0), 1.5, 0.0),
        ("zell-(2,1,2,3,0,1)-e0", zell_bound(&fmt(2, 1, 2, 3, 0, 1)?, 0), 66.0, 0.0),
        ("zell-(1,1,1,1,1,1)-e1", zell_bound(&fmt(1, 1, 1, 1, 1, 1)?, 1), 7.5, 0.0),
        ("zell-(2,1,2,3,1,1)-e1", zell_bound(&fmt(2, 1, 2, 3, 1, 1)?, 1), 330.0, 0.0),
        ("corollary-(2,1,2,1)", corollary_measure_bound(2, 1, 2.0, 1.0)?, 2.0 * PI, 1e-12),
        ("corollary-(3,2,2,1)", corollary_measure_bound(3, 2, 2.0, 1.0)?, 4.0 * PI, 1e-12),
        ("corollary-(3,1,0,2)", corollary_measure_bound(3, 1, 0.0, 2.0)?, 0.0, 0.0),
    ];
    for (name, report, expected, tol) in rows {
        let v = value_of(&b.bound(name, report));
        b.check(Check::within(name, v, expected, tol));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenario_names_round_trip() {
        for s in Scenario::ALL {
            assert_eq!(s.name().parse::<Scenario>().unwrap(), s);
            assert_eq!(serde_json::to_value(s).unwrap(), Value::String(s.name().into()));
        }
        assert!(matches!("torus".parse::<Scenario>(), Err(HarnessError::UnknownScenario(_))));
    }

    #[test]
    fn deterministic_scenarios_pass() {
        for s in [Scenario::BoundsTable, Scenario::HoelderFit, Scenario::NonHoelderDemo] {
            let run = run_scenario(&RunConfig::new(s, None, 0)).unwrap();
            let failed: Vec<_> = run.report.checks.iter().filter(|c| !c.passed).collect();
            assert!(failed.is_empty(), "{s:?}: {failed:?}");
            assert!(run.samples.is_empty());
        }
    }

    #[test]
    fn small_circle_run() {
        let run = run_scenario(&RunConfig::new(Scenario::Circle, Some(2000), 42)).unwrap();
        assert!(run.report.passed, "{:?}", run.report.checks);
        assert_eq!(run.samples.len(), 1);
        assert_eq!(run.samples[0].1.len(), 2000);
        assert_eq!(run.report.config.n_samples, Some(2000));
    }

    #[test]
    fn rerun_from_embedded_config_is_identical() {
        let a = run_scenario(&RunConfig::new(Scenario::Segment, Some(500), 3)).unwrap();
        let text = serde_json::to_string(&a.report).unwrap();
        let cfg: RunConfig = serde_json::from_value(
            serde_json::from_str::<Value>(&text).unwrap()["config"].clone(),
        )
        .unwrap();
        let b = run_scenario(&cfg).unwrap();
        assert_eq!(text, serde_json::to_string(&b.report).unwrap());
    }

    #[test]
    fn too_few_samples() {
        assert!(run_scenario(&RunConfig::new(Scenario::Circle, Some(10), 0)).is_err());
    }
}
