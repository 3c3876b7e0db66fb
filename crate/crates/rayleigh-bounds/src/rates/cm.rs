//! Constant-modulus (m-PSK) inputs: coherent mutual information and the
//! CM lower bound with optional time-sharing.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{domain, Result};
use crate::model::{ChannelParams, PsdModel};
use crate::quadrature::{mc_mean, szego_log_integral, McEstimate, QuadratureConfig};

use super::{maximize_scalar_with, MC_SCAN, MC_TOL, BoundKind, BoundValue, PeakConstraint};

/// Unit-power m-PSK points e^{j2πk/m}.
pub fn psk_constellation(m: usize) -> Vec<Complex64> {
    (0..m).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64)).collect()
}

pub(crate) fn cn(rng: &mut ChaCha8Rng, var: f64) -> Complex64 {
    let s = (0.5 * var).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(s * re, s * im)
}

/// log Σ_j exp(−(|y − g x_j|² − |w|²)/v) for the sent point x_0 = points[0],
/// where y = g x_0 + w. The j = 0 term is exactly 1.
pub(crate) fn psk_log_sum(points: &[Complex64], g: Complex64, w: Complex64, v: f64) -> f64 {
    let x0 = points[0];
    let w2 = w.norm_sqr();
    // streaming log-sum-exp
    let mut top = 0.0f64;
    let mut sum = 1.0f64;
    for &xj in &points[1..] {
        let d = g * (x0 - xj) + w;
        let t = -(d.norm_sqr() - w2) / v;
        if t > top {
            sum = sum * (top - t).exp() + 1.0;
            top = t;
        } else {
            sum += (t - top).exp();
        }
    }
    top + sum.ln()
}

/// I(y; x | h) for uniform m-PSK of power σ_x² on a Rayleigh channel,
/// in nats, by Monte Carlo with `cfg.mc_default_n` samples.
///
/// Rotational symmetry lets every sample send the same point. Errors if
/// the standard error exceeds `cfg.mc_max_stderr`.
pub fn coherent_mi_cm(rho: f64, m_points: usize, cfg: &QuadratureConfig) -> Result<McEstimate> {
    if m_points < 2 {
        return domain(format!("need at least 2 constellation points, got {m_points}"));
    }
    if !(rho >= 0.0) {
        return domain(format!("rho must be nonnegative, got {rho}"));
    }
    let n = cfg.mc_default_n;
    if rho == 0.0 {
        return Ok(McEstimate { mean: 0.0, stderr: 0.0, n, seed: cfg.seed });
    }
    let points = psk_constellation(m_points);
    let lm = (m_points as f64).ln();
    let amp = rho.sqrt();
    let est = mc_mean(n, cfg.seed, |rng| {
        let h = cn(rng, 1.0) * amp;
        let w = cn(rng, 1.0);
        lm - psk_log_sum(&points, h, w, 1.0)
    });
    cfg.accept("coherent CM mutual information", est)
}

fn cm_objective(params: &ChannelParams, model: &PsdModel, m: usize, cfg: &QuadratureConfig, gamma: f64) -> Result<(f64, f64)> {
    let rho = gamma * params.rho();
    let i = coherent_mi_cm(rho, m, cfg)?;
    let s = szego_log_integral(model, rho)?;
    Ok(((i.mean - s) / gamma, i.stderr / gamma))
}

/// I_CM(ρ) − ∫ log(1 + ρ S_h/σ_h²) df, clamped at 0.
pub fn rate_lower_cm(params: &ChannelParams, model: &PsdModel, m_points: usize, cfg: &QuadratureConfig) -> Result<BoundValue> {
    let (v, se) = cm_objective(params, model, m_points, cfg, 1.0)?;
    Ok(BoundValue::lower(BoundKind::LowerCm, v).with_stderr(se))
}

/// max over γ ∈ [1, β] of (1/γ)[I_CM(γρ) − ∫ log(1 + γρ S_h/σ_h²) df]:
/// transmit a 1/γ fraction of the time at γ times the power. All γ share
/// the same random numbers, so the objective is smooth in γ.
pub fn rate_lower_cm_timeshare(
    params: &ChannelParams,
    model: &PsdModel,
    peak: &PeakConstraint,
    m_points: usize,
    cfg: &QuadratureConfig,
) -> Result<BoundValue> {
    let (g, v) = maximize_scalar_with(|g| cm_objective(params, model, m_points, cfg, g).map(|x| x.0), 1.0, peak.beta(), MC_SCAN, MC_TOL)?;
    let (_, se) = cm_objective(params, model, m_points, cfg, g)?;
    Ok(BoundValue::lower(BoundKind::LowerCmTs, v).with_stderr(se).with_argmax(g).with_alpha(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::g_logmoment;

    fn cfg(n: usize) -> QuadratureConfig {
        QuadratureConfig::default().with_samples(n)
    }

    #[test]
    fn zero_snr_is_zero() {
        assert_eq!(coherent_mi_cm(0.0, 100, &cfg(1000)).unwrap().mean, 0.0);
        assert!(coherent_mi_cm(1.0, 1, &cfg(1000)).is_err());
    }

    #[test]
    fn qpsk_saturates() {
        let e = coherent_mi_cm(1e6, 4, &cfg(20_000)).unwrap();
        assert!((e.mean - 4f64.ln()).abs() < 1e-3, "{e:?}");
    }

    #[test]
    fn below_gaussian_capacity() {
        let e = coherent_mi_cm(1.0, 100, &cfg(100_000)).unwrap();
        let c = g_logmoment(1.0).unwrap();
        assert!(e.mean < c, "{e:?}");
        assert!(e.mean > 0.4);
    }

    #[test]
    fn low_snr_bpsk_matches_first_order() {
        // I = ρ + O(ρ²) for small ρ with any unit-power constellation
        let rho = 1e-2;
        let e = coherent_mi_cm(rho, 2, &cfg(50_000)).unwrap();
        assert!((e.mean - rho).abs() < 4.0 * e.stderr + 2.0 * rho * rho, "{e:?}");
    }

    #[test]
    fn timeshare_dominates_plain() {
        let p = ChannelParams::normalized(1.0, 0.1).unwrap();
        let m = PsdModel::rectangular(0.1, 1.0).unwrap();
        let c = cfg(20_000);
        let plain = rate_lower_cm(&p, &m, 16, &c).unwrap();
        let one = rate_lower_cm_timeshare(&p, &m, &PeakConstraint::new(1.0).unwrap(), 16, &c).unwrap();
        assert_eq!(one.unclamped, plain.unclamped);
        let two = rate_lower_cm_timeshare(&p, &m, &PeakConstraint::new(2.0).unwrap(), 16, &c).unwrap();
        assert!(two.unclamped >= plain.unclamped);
        let g = two.argmax.unwrap();
        assert!((1.0..=2.0).contains(&g));
    }

    #[test]
    fn tiny_doppler_stays_below_coherent_capacity() {
        let p = ChannelParams::normalized(1.0, 1e-6).unwrap();
        let m = PsdModel::rectangular(1e-6, 1.0).unwrap();
        let c = cfg(100_000);
        let lo = rate_lower_cm(&p, &m, 100, &c).unwrap();
        let i = coherent_mi_cm(1.0, 100, &c).unwrap();
        assert!((lo.value - i.mean).abs() < 1e-4);
        assert!(lo.value < g_logmoment(1.0).unwrap() - 3.0 * i.stderr);
    }
}
