//! Large-n asymptotics of the spectrum and the condensation index.
//!
//! For the pair index n ≥ 1 (the even member of the n-th pair is the record
//! with index 2(n−1), the odd member 2(n−1)+1; for n ≥ 2 the two share a
//! certified bracket, while pair 1 is the zero mode and its odd partner):
//!
//! ```text
//! √λ_even = π(n − ν/2 − 1/4) − R sin(νπ)(2/(πn))^{2ν} − (4ν²−1)/(8πn) + O(n^{−min(2,4ν)})
//! ```
//!
//! The 1/n term is the McMahon correction of j_{−ν,n}; for ν < 1/2 it is
//! subleading to the R-term (remainder O(n^{−min(1,4ν)}) without it) and it
//! vanishes at ν = 1/2.
//!
//! with R = Γ(ν+1)/Γ(1−ν); the odd member carries the extra factor
//! ρ = (1−2ν)/(1+2ν) on the R-term. The even/odd gap follows:
//! λ_odd − λ_even ≈ 16ν/(1+2ν) · R sin(νπ) (2/(πn))^{2ν−1}.
//!
//! The condensation index of the eigenvalue sequence is 0; this module
//! computes its finite-n terms −(1/λ_n) ln|C′(λ_n)| from truncated products
//! with an analytic tail correction.

use crate::spectrum::{Parity, SpectralParameter};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Prediction for √λ of one member of the n-th eigenvalue pair.
#[derive(Debug, Clone, Copy)]
pub struct AsymptoticPrediction {
    /// Pair index n ≥ 1.
    pub n: usize,
    pub parity: Parity,
    /// Leading term π(n − ν/2 − 1/4).
    pub leading: f64,
    /// Regime-dependent correction added to the leading term.
    pub correction: f64,
    /// leading + correction.
    pub predicted_sqrt_lambda: f64,
}

/// Finite-n condensation diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct CondensationDiagnostics {
    /// Index into the positive eigenvalue sequence (1-based; the zero
    /// eigenvalue is dropped).
    pub n: usize,
    /// Number of product terms kept before the analytic tail.
    pub truncation: usize,
    /// −(1/λ_n)[ln(2/λ_n) + Σ_{j≠n} ln|1 − λ_n²/λ_j²|].
    pub term: f64,
}

/// Regime-correct prediction for √λ of the requested member of pair n.
pub fn predicted_sqrt_eigenvalue(
    param: &SpectralParameter,
    n: usize,
    parity: Parity,
) -> AsymptoticPrediction {
    assert!(n >= 1);
    let nu = param.nu;
    let nf = n as f64;
    let leading = PI * (nf - 0.5 * nu - 0.25);
    let r_term = param.gamma_ratio * (nu * PI).sin() * (2.0 / (PI * nf)).powf(2.0 * nu);
    let mut correction = match parity {
        Parity::Even => -r_term,
        Parity::Odd => -param.odd_factor * r_term,
    };
    // McMahon-type 1/n term of j_{-nu,n}; subleading to the R-term for
    // nu < 1/2 but kept for all nu since it sharpens the remainder to the
    // next power (it vanishes identically at nu = 1/2).
    correction -= (4.0 * nu * nu - 1.0) / (8.0 * PI * nf);
    AsymptoticPrediction {
        n,
        parity,
        leading,
        correction,
        predicted_sqrt_lambda: leading + correction,
    }
}

/// Predicted gap λ_{2(n−1)+1} − λ_{2(n−1)} of the n-th pair:
/// 16ν/(1+2ν) · Γ(ν+1)/Γ(1−ν) · sin(νπ) · (2/(πn))^{2ν−1}.
pub fn gap_prediction(param: &SpectralParameter, n: usize) -> f64 {
    assert!(n >= 1);
    let nu = param.nu;
    16.0 * nu / (1.0 + 2.0 * nu)
        * param.gamma_ratio
        * (nu * PI).sin()
        * (2.0 / (PI * n as f64)).powf(2.0 * nu - 1.0)
}

/// One finite-n term of the condensation index for the positive sequence
/// `lambdas` (λ_1 < λ_2 < ..., the zero mode already removed):
///
/// term = −(1/λ_n)[ln(2/λ_n) + Σ_{j≤truncation, j≠n} ln|1 − λ_n²/λ_j²| + tail]
///
/// where the tail beyond the truncation uses ln|1−λ_n²/λ_j²| ≈ −λ_n²/λ_j² and
/// the quadratic growth λ_j ≈ λ_K (j/K)² at K = truncation, summed through the
/// Euler–Maclaurin tail of Σ j^{−4}.
pub fn condensation_term(
    lambdas: &[f64],
    n: usize,
    truncation: usize,
) -> Result<CondensationDiagnostics> {
    if n == 0 || n > lambdas.len() {
        return Err(Error::InvalidArgument(format!(
            "condensation index n = {n} out of range 1..={}",
            lambdas.len()
        )));
    }
    if truncation < 2 * n {
        return Err(Error::InvalidArgument(format!(
            "truncation {truncation} < 2n = {}",
            2 * n
        )));
    }
    let k = truncation.min(lambdas.len());
    let ln_ = lambdas[n - 1];
    let mut log_sum = (2.0 / ln_).ln();
    for (j, &lj) in lambdas.iter().enumerate().take(k) {
        if j + 1 == n {
            continue;
        }
        log_sum += (1.0 - ln_ * ln_ / (lj * lj)).abs().ln();
    }
    // Analytic tail: Σ_{j>K} −λ_n²/λ_j² with λ_j ≈ λ_K (j/K)².
    let lk = lambdas[k - 1];
    let kf = k as f64;
    let tail_zeta4 = 1.0 / (3.0 * kf.powi(3)) - 1.0 / (2.0 * kf.powi(4)) + 1.0 / (3.0 * kf.powi(5));
    log_sum -= ln_ * ln_ / (lk * lk) * kf.powi(4) * tail_zeta4;
    Ok(CondensationDiagnostics { n, truncation: k, term: -log_sum / ln_ })
}

/// Least-squares slope of y against x (used for log-log residual-rate fits).
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        num += (xi - mx) * (yi - my);
        den += (xi - mx) * (xi - mx);
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_nu_odd_prediction_is_closed_form() {
        // At ν = 1/2 the odd factor vanishes and the 1/n term vanishes, so the
        // prediction is exactly π(n − 1/2) = j_{−1/2,n}.
        let p = SpectralParameter::new(0.5).unwrap();
        let pred = predicted_sqrt_eigenvalue(&p, 7, Parity::Odd);
        assert!((pred.predicted_sqrt_lambda - PI * 6.5).abs() < 1e-12);
    }

    #[test]
    fn half_nu_gap_is_two() {
        let p = SpectralParameter::new(0.5).unwrap();
        for n in [1, 10, 100] {
            assert!((gap_prediction(&p, n) - 2.0).abs() < 1e-12);
        }
    }
}
