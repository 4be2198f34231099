//! Monte Carlo estimates of Hausdorff measures of semi-algebraic sets by the
//! Cauchy–Crofton formula, together with explicit combinatorial upper bounds
//! for those measures.

pub mod bounds;
pub mod crofton;
pub mod geom;
pub mod harness;
pub mod poly;
pub mod sets;
