//! Peak-power-constrained upper bound for a rectangular PSD.

use crate::error::Result;
use crate::model::{ChannelParams, PsdModel};

use super::{BoundKind, BoundValue, PeakConstraint};

// (2f_d/β) log(ρβ/(2f_d) + 1)
fn rect_penalty(rho: f64, f_d: f64, beta: f64) -> f64 {
    2.0 * f_d / beta * (rho * beta / (2.0 * f_d)).ln_1p()
}

/// Power fraction maximizing log(αρ+1) − α·K with K the per-unit-power penalty.
pub(crate) fn alpha_opt_from_penalty(rho: f64, k: f64) -> f64 {
    if rho == 0.0 || k <= 0.0 {
        return 1.0;
    }
    (1.0 / k - 1.0 / rho).clamp(0.0, 1.0)
}

pub fn alpha_opt_rect(params: &ChannelParams, peak: &PeakConstraint) -> f64 {
    let rho = params.rho();
    alpha_opt_from_penalty(rho, rect_penalty(rho, params.f_d, peak.beta()))
}

/// Upper bound with the average power fraction fixed to `alpha`.
pub fn rate_upper_peak_rect_with_alpha(params: &ChannelParams, peak: &PeakConstraint, alpha: f64) -> BoundValue {
    let rho = params.rho();
    let k = rect_penalty(rho, params.f_d, peak.beta());
    let u = (alpha * rho).ln_1p() - alpha * k;
    BoundValue::upper(BoundKind::UpperPeak, u, rho).with_alpha(alpha)
}

/// log(α ρ + 1) − (2f_d α/β) log(ρβ/(2f_d) + 1) at the optimal α.
pub fn rate_upper_peak_rect(params: &ChannelParams, peak: &PeakConstraint) -> BoundValue {
    rate_upper_peak_rect_with_alpha(params, peak, alpha_opt_rect(params, peak))
}

/// Sufficient conditions for the optimal power fraction to be 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlphaOptConditions {
    pub cond1: bool,
    pub cond2: bool,
}

impl AlphaOptConditions {
    pub fn any(&self) -> bool {
        self.cond1 || self.cond2
    }
}

pub fn alpha_opt_conditions(params: &ChannelParams, peak: &PeakConstraint) -> AlphaOptConditions {
    let rho = params.rho();
    let f = params.f_d;
    let b = peak.beta();
    let cond1 = rho >= 1.0 && rho <= 2.0 * f / b * (b / (4.0 * f)).exp_m1();
    let cond2 = rho <= 1.0 && 2.0 * f <= b / (rho + 2.0);
    AlphaOptConditions { cond1, cond2 }
}

/// Closed criteria under which i.i.d. inputs are known to be optimal at low SNR.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IidConditions {
    /// λ = σ_h⁴: the fading is memoryless.
    pub memoryless: bool,
    /// β = 1 and λ ≥ 2σ_h⁴.
    pub nonephemeral: bool,
}

pub fn iid_low_snr_conditions(model: &PsdModel, peak: &PeakConstraint) -> Result<IidConditions> {
    let lam = model.spectral_l2()?;
    let p2 = model.sigma_h2() * model.sigma_h2();
    Ok(IidConditions {
        memoryless: ((lam - p2) / p2).abs() <= 1e-9,
        nonephemeral: peak.beta() == 1.0 && lam >= 2.0 * p2,
    })
}
