use serde::Serialize;

use super::HarnessError;

/// `M ≈ C · L^α` fitted in log-log coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitResult {
    #[serde(rename = "C")]
    pub c: f64,
    pub alpha: f64,
    /// RMS of the residuals of `ln M` against the fitted line.
    pub residual: f64,
}

/// Ordinary least squares of `ln M` on `ln L`.
pub fn fit_power_law(pairs: &[(f64, f64)]) -> Result<FitResult, HarnessError> {
    if pairs.len() < 3 {
        return Err(HarnessError::Input(format!(
            "a power-law fit needs at least 3 pairs, got {}",
            pairs.len()
        )));
    }
    if let Some(bad) = pairs.iter().find(|(l, m)| !(*l > 0.0 && *m > 0.0)) {
        return Err(HarnessError::Input(format!("non-positive pair {bad:?}")));
    }
    let n = pairs.len() as f64;
    let xs: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(HarnessError::Input("all L values are equal".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let alpha = sxy / sxx;
    let intercept = my - alpha * mx;
    let ss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - alpha * x).powi(2))
        .sum();
    Ok(FitResult {
        c: intercept.exp(),
        alpha,
        residual: (ss / n).sqrt(),
    })
}
