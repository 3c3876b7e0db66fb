//! High-SNR asymptotes of the peak-constrained capacity (the o(1) term of
//! the upper asymptote is dropped).

use std::f64::consts::E;

use crate::error::{domain, Result};
use crate::model::{ChannelParams, PsdModel};
use crate::quadrature::EULER_GAMMA;

/// ε²(δ²) = exp(∫ log(S_h/σ_h² + δ²) df) − δ².
pub fn eps2_pred(model: &PsdModel, delta2: f64) -> Result<f64> {
    if !(delta2 > 0.0) {
        return domain(format!("delta² must be positive, got {delta2}"));
    }
    let k = 1.0 / model.sigma_h2();
    let i = model.spectral_integral(|s| (k * s + delta2).ln())?;
    Ok(i.exp() - delta2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LapidothAsymptotes {
    /// `None` for ρ̃ ≤ 1, where log log ρ̃ is undefined.
    pub upper: Option<f64>,
    pub lower: f64,
}

/// Both asymptotes evaluated at ρ̃ = ρ.
pub fn lapidoth_asymptotes(params: &ChannelParams, model: &PsdModel) -> Result<LapidothAsymptotes> {
    let r = params.rho();
    if !(r > 0.0) {
        return domain("asymptotes need rho > 0");
    }
    let upper = if r > 1.0 {
        Some(r.ln().ln() - EULER_GAMMA - 1.0 - eps2_pred(model, 1.0 / r)?.ln())
    } else {
        None
    };
    let e4 = eps2_pred(model, 4.0 / r)?;
    let lower = -(e4 + 8.0 / (5.0 * r)).ln() - EULER_GAMMA + (1.0 - e4).ln() - (5.0 * E / 6.0).ln();
    Ok(LapidothAsymptotes { upper, lower })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rect_eps2_closed_form() {
        let f: f64 = 0.1;
        let m = PsdModel::rectangular(f, 1.0).unwrap();
        for d2 in [1e-6, 1e-2, 1.0, 10.0] {
            let want = (2.0 * f * (1.0 / (2.0 * f) + d2).ln() + (1.0 - 2.0 * f) * d2.ln()).exp() - d2;
            let got = eps2_pred(&m, d2).unwrap();
            assert!((got - want).abs() < 1e-12 * want.max(1.0), "{d2}: {got} vs {want}");
            assert!(got >= 0.0);
        }
    }

    #[test]
    fn upper_above_lower_at_high_snr() {
        let m = PsdModel::rectangular(0.1, 1.0).unwrap();
        let a = lapidoth_asymptotes(&ChannelParams::normalized(1e6, 0.1).unwrap(), &m).unwrap();
        assert!(a.upper.unwrap() > a.lower);
        let b = lapidoth_asymptotes(&ChannelParams::normalized(0.5, 0.1).unwrap(), &m).unwrap();
        assert!(b.upper.is_none());
    }
}
