//! Peak-limited bounds built on the infinite-past CM prediction error.

use crate::error::{domain, Result};
use crate::model::{ChannelParams, PsdModel};
use crate::quadrature::{mc_mean, szego_log_integral, QuadratureConfig};
use crate::rates::cm::{cn, psk_constellation, psk_log_sum};
use crate::rates::{alpha_opt_from_penalty, maximize_scalar_with, MC_SCAN, MC_TOL, BoundKind, BoundValue, PeakConstraint};

use super::pred_error_cm_infinite;

/// log(αρ+1) − (α/β) ∫ log(1 + ρβ S_h/σ_h²) df at the optimal α,
/// clamped by the coherent capacity.
pub fn sethuraman_upper(params: &ChannelParams, model: &PsdModel, peak: &PeakConstraint) -> Result<BoundValue> {
    let rho = params.rho();
    let b = peak.beta();
    let k = szego_log_integral(model, rho * b)? / b;
    let alpha = alpha_opt_from_penalty(rho, k);
    let u = (alpha * rho).ln_1p() - alpha * k;
    Ok(BoundValue::upper(BoundKind::SethuramanUpper, u, rho).with_alpha(alpha))
}

// (1/γ)·[h(y|ĥ) − log(πe σ_n²) − ∫ log(1 + γρ S_h/σ_h²) df] at power γσ_x²,
// with ĥ the infinite-past CM predictor. Returns (value, stderr).
fn c_l1(params: &ChannelParams, model: &PsdModel, m: usize, cfg: &QuadratureConfig, gamma: f64) -> Result<(f64, f64)> {
    let p = gamma * params.sigma_x2;
    let rho = gamma * params.rho();
    let sn = params.sigma_n2;
    let szego = szego_log_integral(model, rho)?;
    if rho == 0.0 {
        return Ok((0.0, 0.0));
    }
    let se2 = pred_error_cm_infinite(model, p, sn)?;
    let var_hat = (model.sigma_h2() - se2).max(0.0);
    // effective noise of y given ĥ, on the symbol scale
    let v = p * se2 + sn;
    let points = psk_constellation(m);
    let amp = p.sqrt();
    let lm = (m as f64).ln();
    // circular symmetry of ĥ lets every sample send points[0]
    let est = mc_mean(cfg.mc_default_n, cfg.seed, |rng| {
        let g = cn(rng, var_hat) * amp;
        let w = cn(rng, se2) * amp + cn(rng, sn);
        lm - psk_log_sum(&points, g, w, v)
    });
    let est = cfg.accept("CM mutual information given the channel estimate", est)?;
    let value = est.mean + (v / sn).ln() - szego;
    Ok((value / gamma, est.stderr / gamma))
}

/// Lower bound from decoding with the CM channel predictor.
/// With `timeshare`, maximize over duty cycles 1/γ, γ ∈ [1, β].
pub fn sethuraman_lower(
    params: &ChannelParams,
    model: &PsdModel,
    peak: &PeakConstraint,
    m_points: usize,
    timeshare: bool,
    cfg: &QuadratureConfig,
) -> Result<BoundValue> {
    if m_points < 2 {
        return domain(format!("need at least 2 constellation points, got {m_points}"));
    }
    if !timeshare {
        let (v, se) = c_l1(params, model, m_points, cfg, 1.0)?;
        return Ok(BoundValue::lower(BoundKind::SethuramanLower, v).with_stderr(se));
    }
    let (g, v) = maximize_scalar_with(|g| c_l1(params, model, m_points, cfg, g).map(|x| x.0), 1.0, peak.beta(), MC_SCAN, MC_TOL)?;
    let (_, se) = c_l1(params, model, m_points, cfg, g)?;
    Ok(BoundValue::lower(BoundKind::SethuramanLowerTs, v).with_stderr(se).with_argmax(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rates::{coherent_mi_cm, rate_upper_peak_rect};

    #[test]
    fn upper_equals_peak_bound_for_rect() {
        for (rho, f, b) in [(1.0, 0.1, 2.0), (10.0, 0.01, 1.0), (0.3, 0.2, 4.0)] {
            let p = ChannelParams::normalized(rho, f).unwrap();
            let m = PsdModel::rectangular(f, 1.0).unwrap();
            let pk = PeakConstraint::new(b).unwrap();
            let s = sethuraman_upper(&p, &m, &pk).unwrap();
            let r = rate_upper_peak_rect(&p, &pk);
            assert!((s.unclamped - r.unclamped).abs() < 1e-12, "{s:?} {r:?}");
        }
    }

    #[test]
    fn unit_peak_equals_pred_peak() {
        let p = ChannelParams::normalized(5.0, 0.05).unwrap();
        let m = PsdModel::jakes(0.05, 1.0).unwrap();
        let pk = PeakConstraint::new(1.0).unwrap();
        let a = sethuraman_upper(&p, &m, &pk).unwrap();
        let b = super::super::rate_upper_pred_peak(&p, &m, &pk).unwrap();
        assert!((a.unclamped - b.unclamped).abs() < 1e-10);
    }

    #[test]
    fn lower_reduces_to_coherent_mi_at_effective_snr() {
        let rho = 3.0;
        let f = 0.05;
        let p = ChannelParams::normalized(rho, f).unwrap();
        let m = PsdModel::rectangular(f, 1.0).unwrap();
        let cfg = QuadratureConfig::default().with_samples(20_000);
        let pk = PeakConstraint::new(1.0).unwrap();
        let b = sethuraman_lower(&p, &m, &pk, 16, false, &cfg).unwrap();
        let e = pred_error_cm_infinite(&m, rho, 1.0).unwrap();
        let eff = rho * (1.0 - e) / (1.0 + rho * e);
        let i = coherent_mi_cm(eff, 16, &cfg).unwrap();
        // 1 + ρσ²_pred/σ_h² = exp(∫ log(1 + ρS_h/σ_h²)), so the Szegő term cancels
        let want = i.mean;
        assert!((b.unclamped - want).abs() < 4.0 * (b.stderr.unwrap() + i.stderr), "{b:?} vs {want}");
    }
}
