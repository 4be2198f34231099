use std::collections::BTreeMap;
use std::path::Path;

use super::HarnessError;
use crate::bounds::{
    corollary_measure_bound, diagram_component_bound, khovanskii_fewnomial_bound, optm_bound,
    zell_bound, zell_measure_bound, BoundReport,
};
use crate::crofton::SampleRecord;
use crate::geom::Window;
use crate::sets::{Diagram, PfaffianFormat};

/// Parse `"c_1,c_2,...;r"` into a window.
pub fn parse_window(text: &str) -> Result<Window, HarnessError> {
    let bad = |why: &str| HarnessError::Input(format!("window {text:?}: {why}"));
    let (center, radius) = text.split_once(';').ok_or_else(|| bad("expected \"c1,c2,...;r\""))?;
    let center = center
        .split(',')
        .map(|c| c.trim().parse::<f64>().map_err(|_| bad("bad center coordinate")))
        .collect::<Result<Vec<_>, _>>()?;
    if center.iter().any(|c| !c.is_finite()) {
        return Err(bad("center must be finite"));
    }
    let radius: f64 = radius.trim().parse().map_err(|_| bad("bad radius"))?;
    Ok(Window::new(center, radius)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundCommand {
    Diagram,
    Optm,
    Khovanskii,
    Zell,
    Corollary,
}

impl std::str::FromStr for BoundCommand {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "diagram" => BoundCommand::Diagram,
            "optm" => BoundCommand::Optm,
            "khovanskii" => BoundCommand::Khovanskii,
            "zell" => BoundCommand::Zell,
            "corollary" => BoundCommand::Corollary,
            _ => return Err(HarnessError::Input(format!("unknown bound {s:?}"))),
        })
    }
}

struct Args(BTreeMap<String, String>);

impl Args {
    fn parse(pairs: &[String], allowed: &[&str]) -> Result<Self, HarnessError> {
        let mut map = BTreeMap::new();
        for pair in pairs {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| HarnessError::Input(format!("expected KEY=VALUE, got {pair:?}")))?;
            let k = k.trim();
            if !allowed.contains(&k) {
                return Err(HarnessError::Input(format!(
                    "unknown key {k:?}; expected one of {allowed:?}"
                )));
            }
            if map.insert(k.to_string(), v.trim().to_string()).is_some() {
                return Err(HarnessError::Input(format!("duplicate key {k:?}")));
            }
        }
        Ok(Args(map))
    }

    fn raw(&self, key: &str) -> Result<&str, HarnessError> {
        self.0
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| HarnessError::Input(format!("missing key {key:?}")))
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<T, HarnessError> {
        let raw = self.raw(key)?;
        raw.parse()
            .map_err(|_| HarnessError::Input(format!("bad value for {key}: {raw:?}")))
    }

    fn get_or<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, HarnessError> {
        if self.0.contains_key(key) {
            self.get(key)
        } else {
            Ok(default)
        }
    }
}

/// Evaluate one `bound` subcommand from `KEY=VALUE` arguments.
///
/// * `diagram m=2 degrees=2,1;3` (atoms separated by `,`, disjuncts by `;`)
/// * `optm m=2 d=3`
/// * `khovanskii m=2 q=3`
/// * `zell m=2 l=1 alpha=2 beta=3 s=0 gamma=1 e=0 [k=1 r=1.5]`
/// * `corollary m=2 k=1 B0=2 r=1`
pub fn bound_command(cmd: BoundCommand, pairs: &[String]) -> Result<BoundReport, HarnessError> {
    match cmd {
        BoundCommand::Diagram => {
            let a = Args::parse(pairs, &["m", "degrees"])?;
            let degrees = a
                .raw("degrees")?
                .split(';')
                .map(|row| {
                    row.split(',')
                        .map(|d| {
                            d.trim()
                                .parse::<u32>()
                                .map_err(|_| HarnessError::Input(format!("bad degree {d:?}")))
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(diagram_component_bound(&Diagram::new(a.get("m")?, degrees)?))
        }
        BoundCommand::Optm => {
            let a = Args::parse(pairs, &["m", "d"])?;
            Ok(optm_bound(a.get("m")?, a.get("d")?)?)
        }
        BoundCommand::Khovanskii => {
            let a = Args::parse(pairs, &["m", "q"])?;
            Ok(khovanskii_fewnomial_bound(a.get("m")?, a.get("q")?)?)
        }
        BoundCommand::Zell => {
            let a = Args::parse(pairs, &["m", "l", "alpha", "beta", "s", "gamma", "e", "k", "r"])?;
            let f = PfaffianFormat::new(
                a.get("m")?,
                a.get("l")?,
                a.get("alpha")?,
                a.get("beta")?,
                a.get_or("s", 0)?,
                a.get("gamma")?,
            )?;
            let e = a.get("e")?;
            match (a.0.contains_key("k"), a.0.contains_key("r")) {
                (false, false) => Ok(zell_bound(&f, e)),
                (true, true) => Ok(zell_measure_bound(&f, e, a.get("k")?, a.get("r")?)?),
                _ => Err(HarnessError::Input("zell measure bound needs both k and r".into())),
            }
        }
        BoundCommand::Corollary => {
            let a = Args::parse(pairs, &["m", "k", "B0", "r"])?;
            Ok(corollary_measure_bound(a.get("m")?, a.get("k")?, a.get("B0")?, a.get("r")?)?)
        }
    }
}

/// Per-sample diagnostics with columns
/// `sample_index, projection_hash, offset, count, degenerate_flag`; offset
/// coordinates are joined with `;`.
pub fn write_samples_csv(path: &Path, samples: &[SampleRecord]) -> Result<(), HarnessError> {
    let io = |e: csv::Error| HarnessError::Io(e.to_string());
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(["sample_index", "projection_hash", "offset", "count", "degenerate_flag"])
        .map_err(io)?;
    for s in samples {
        let offset: Vec<String> = s.offset.iter().map(f64::to_string).collect();
        w.write_record([
            s.sample_index.to_string(),
            s.projection_hash.clone(),
            offset.join(";"),
            s.count.to_string(),
            s.degenerate_flag.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
