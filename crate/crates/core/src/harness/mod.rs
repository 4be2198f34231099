//! Scenario runner, reference oracles, power-law fits and the command-line
//! plumbing behind the `tame-measure` binary.

mod commands;
mod fit;
mod oracle;
mod scenario;

pub use commands::{bound_command, parse_window, write_samples_csv, BoundCommand};
pub use fit::{fit_power_law, FitResult};
pub use oracle::{
    exact_curve_length_oracle, fermat_cubic_arc_length, gauss_legendre, integrate,
    integrate_checked, QuadratureResult, MIN_QUADRATURE_ORDER, QUADRATURE_TOL,
};
pub use scenario::{
    run_scenario, Check, CheckRelation, Named, Report, RunConfig, Scenario, ScenarioRun,
};

use thiserror::Error;

use crate::bounds::BoundsError;
use crate::crofton::CroftonError;
use crate::geom::GeomError;
use crate::poly::PolyError;
use crate::sets::SetError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error("{0}")]
    Input(String),
    #[error("unknown scenario {0:?}")]
    UnknownScenario(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Crofton(#[from] CroftonError),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::Io(e.to_string())
    }
}
