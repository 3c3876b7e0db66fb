//! One-step channel prediction and the prediction-based rate bounds.
//!
//! Past powers enter through D = diag(√z); the observation covariance is
//! factored in the form D R D + σ_n² I so that zero powers stay regular.

mod circulant;
mod convexity;
mod sethuraman;

pub use circulant::{circulant_eigs, toeplitz_circulant_weak_norm};
pub use convexity::{convexity_check, isolate_power, ConvexityReport, Isolated};
pub use sethuraman::{sethuraman_lower, sethuraman_upper};

use nalgebra::{DMatrix, DVector};

use crate::error::{domain, Error, Result};
use crate::model::{ChannelParams, PsdModel};
use crate::quadrature::{g_unchecked, szego_log_integral};
use crate::rates::{alpha_opt_from_penalty, BoundKind, BoundValue, PeakConstraint};

/// Covariance lags r_h(0..N−1) of a stationary fading process.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzCov {
    lags: Vec<f64>,
}

impl ToeplitzCov {
    /// Checks r(0) > 0 and positive semidefiniteness (Cholesky with a
    /// 1e−10·r(0) diagonal jitter).
    pub fn new(lags: Vec<f64>) -> Result<Self> {
        if lags.is_empty() || !(lags[0] > 0.0) {
            return domain("r(0) must be positive");
        }
        if lags.iter().any(|x| !x.is_finite()) {
            return domain("lags must be finite");
        }
        let c = ToeplitzCov { lags };
        let n = c.n();
        let mut m = c.matrix(n);
        for i in 0..n {
            m[(i, i)] += 1e-10 * c.lags[0];
        }
        if m.cholesky().is_none() {
            return Err(Error::NotPsd(format!("Toeplitz matrix of {n} lags")));
        }
        Ok(c)
    }

    /// Lags of a PSD model; positive semidefinite by construction, so not re-checked.
    pub fn from_model(model: &PsdModel, n: usize) -> Self {
        ToeplitzCov { lags: (0..n as i64).map(|l| model.autocorr(l)).collect() }
    }

    pub fn n(&self) -> usize {
        self.lags.len()
    }

    pub fn lags(&self) -> &[f64] {
        &self.lags
    }

    /// Leading k×k Toeplitz block.
    pub fn matrix(&self, k: usize) -> DMatrix<f64> {
        DMatrix::from_fn(k, k, |i, j| self.lags[i.abs_diff(j)])
    }
}

/// Past transmit powers z_1..z_{N−1}.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerProfile {
    z: Vec<f64>,
}

impl PowerProfile {
    pub fn new(z: Vec<f64>) -> Result<Self> {
        if z.iter().any(|&v| !(v >= 0.0 && v.is_finite())) {
            return domain("powers must be finite and nonnegative");
        }
        Ok(PowerProfile { z })
    }

    pub fn constant(len: usize, power: f64) -> Result<Self> {
        Self::new(vec![power; len])
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }
}

/// LMMSE error of predicting h_N from y_1..y_{N−1} with y_i = √z_i h_i + n_i.
pub fn pred_error_finite(cov: &ToeplitzCov, z: &PowerProfile, sigma_n2: f64) -> Result<f64> {
    let n = cov.n();
    if z.len() + 1 != n {
        return Err(Error::LengthMismatch { expected: n - 1, got: z.len() });
    }
    if !(sigma_n2 > 0.0) {
        return domain("sigma_n2 must be positive");
    }
    let r0 = cov.lags[0];
    let m = n - 1;
    if m == 0 {
        return Ok(r0);
    }
    let d: Vec<f64> = z.z.iter().map(|v| v.sqrt()).collect();
    let a = DMatrix::from_fn(m, m, |i, j| {
        d[i] * cov.lags[i.abs_diff(j)] * d[j] + if i == j { sigma_n2 } else { 0.0 }
    });
    let b = DVector::from_fn(m, |i, _| d[i] * cov.lags[m - i]);
    let ch = a.cholesky().ok_or_else(|| Error::NotPsd("observation covariance".into()))?;
    let x = ch.l().solve_lower_triangular(&b).ok_or_else(|| Error::NotPsd("singular factor".into()))?;
    Ok((r0 - x.norm_squared()).clamp(0.0, r0))
}

/// Infinite-past prediction error for constant input power:
/// (σ_n²/P)[exp(∫ log(1 + (P/σ_n²) S_h) df) − 1].
pub fn pred_error_cm_infinite(model: &PsdModel, power: f64, sigma_n2: f64) -> Result<f64> {
    if !(power >= 0.0) || !(sigma_n2 > 0.0) {
        return domain("need power ≥ 0 and sigma_n2 > 0");
    }
    if power == 0.0 {
        return Ok(model.sigma_h2());
    }
    let s = szego_log_integral(model, power * model.sigma_h2() / sigma_n2)?;
    Ok(sigma_n2 / power * s.exp_m1())
}

/// Finite-horizon error with constant powers, doubling N from 8 until the
/// change drops below `tol` or N would exceed `cap`.
#[derive(Debug, Clone, PartialEq)]
pub struct HorizonConvergence {
    /// (N, σ²_pred) for every horizon tried.
    pub history: Vec<(usize, f64)>,
    pub converged: bool,
}

pub fn pred_error_horizon(model: &PsdModel, power: f64, sigma_n2: f64, tol: f64, cap: usize) -> Result<HorizonConvergence> {
    let mut history = Vec::new();
    let mut n = 8;
    while n <= cap {
        let cov = ToeplitzCov::from_model(model, n);
        let v = pred_error_finite(&cov, &PowerProfile::constant(n - 1, power)?, sigma_n2)?;
        if let Some(&(_, prev)) = history.last() {
            history.push((n, v));
            if (prev - v).abs() < tol {
                return Ok(HorizonConvergence { history, converged: true });
            }
        } else {
            history.push((n, v));
        }
        n *= 2;
    }
    Ok(HorizonConvergence { history, converged: false })
}

/// min{log(ρ+1) − g(ρ σ²_pred/σ_h²), g(ρ)} with σ²_pred the infinite-past
/// error at full power.
pub fn rate_upper_pred_pg(params: &ChannelParams, model: &PsdModel) -> Result<BoundValue> {
    let rho = params.rho();
    let e = pred_error_cm_infinite(model, params.sigma_x2, params.sigma_n2)? / model.sigma_h2();
    Ok(BoundValue::upper(BoundKind::UpperPredPg, rho.ln_1p() - g_unchecked(rho * e), rho))
}

/// log(αρ+1) − (α/β) log(1 + ρβ σ²_pred/σ_h²) at the optimal α.
pub fn rate_upper_pred_peak(params: &ChannelParams, model: &PsdModel, peak: &PeakConstraint) -> Result<BoundValue> {
    let rho = params.rho();
    let b = peak.beta();
    let e = pred_error_cm_infinite(model, params.sigma_x2, params.sigma_n2)? / model.sigma_h2();
    let k = (rho * b * e).ln_1p() / b;
    let alpha = alpha_opt_from_penalty(rho, k);
    let u = (alpha * rho).ln_1p() - alpha * k;
    Ok(BoundValue::upper(BoundKind::UpperPredPeak, u, rho).with_alpha(alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::special::sinc;

    fn rect(f: f64) -> PsdModel {
        PsdModel::rectangular(f, 1.0).unwrap()
    }

    #[test]
    fn two_by_two_hand_solve() {
        let cov = ToeplitzCov::from_model(&rect(0.1), 2);
        let v = pred_error_finite(&cov, &PowerProfile::new(vec![1.0]).unwrap(), 1.0).unwrap();
        let r1 = sinc(0.2);
        assert!((v - (1.0 - r1 * r1 / 2.0)).abs() < 1e-15);
        assert!((v - 0.562_430).abs() < 1e-6);
    }

    #[test]
    fn zero_power_gives_prior_variance() {
        let cov = ToeplitzCov::from_model(&rect(0.1), 6);
        let v = pred_error_finite(&cov, &PowerProfile::constant(5, 0.0).unwrap(), 1.0).unwrap();
        assert_eq!(v, 1.0);
        assert!(pred_error_finite(&cov, &PowerProfile::constant(4, 1.0).unwrap(), 1.0).is_err());
    }

    #[test]
    fn infinite_rect_closed_form() {
        let v = pred_error_cm_infinite(&rect(0.1), 1.0, 1.0).unwrap();
        assert!((v - (6f64.powf(0.2) - 1.0)).abs() < 1e-12);
        assert_eq!(pred_error_cm_infinite(&rect(0.1), 0.0, 1.0).unwrap(), 1.0);
        let tiny = pred_error_cm_infinite(&rect(0.1), 1e-9, 1.0).unwrap();
        assert!((tiny - 1.0).abs() < 1e-8);
    }

    #[test]
    fn infinite_rect_nonregular_decay() {
        let m = rect(0.1);
        let (p1, p2) = (1e6, 1e8);
        let v1 = pred_error_cm_infinite(&m, p1, 1.0).unwrap();
        let v2 = pred_error_cm_infinite(&m, p2, 1.0).unwrap();
        let slope = (v2.ln() - v1.ln()) / (p2 / p1).ln();
        assert!((slope - (2.0 * 0.1 - 1.0)).abs() < 0.02, "{slope}");
    }

    #[test]
    fn toeplitz_validation() {
        assert!(ToeplitzCov::new(vec![1.0, 0.5, 0.2]).is_ok());
        assert!(matches!(ToeplitzCov::new(vec![1.0, 1.5]), Err(Error::NotPsd(_))));
        assert!(ToeplitzCov::new(vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn pred_pg_spot_value() {
        let p = ChannelParams::normalized(1.0, 0.1).unwrap();
        let b = rate_upper_pred_pg(&p, &rect(0.1)).unwrap();
        let e = 6f64.powf(0.2) - 1.0;
        let want = 2f64.ln() - crate::quadrature::g_logmoment_laguerre(e, 96);
        assert!((b.unclamped - want).abs() < 1e-8);
    }

    #[test]
    fn pred_pg_matches_upper_pg_near_memoryless() {
        let f = 0.499;
        let p = ChannelParams::normalized(3.0, f).unwrap();
        let a = rate_upper_pred_pg(&p, &rect(f)).unwrap().unclamped;
        let b = crate::rates::rate_upper_pg_rect(&p).unclamped;
        assert!((a - b).abs() < 5e-3, "{a} vs {b}");
    }

    #[test]
    fn pred_peak_zero_snr() {
        let p = ChannelParams::normalized(0.0, 0.1).unwrap();
        let b = rate_upper_pred_peak(&p, &rect(0.1), &PeakConstraint::new(2.0).unwrap()).unwrap();
        assert_eq!(b.value, 0.0);
    }
}
