//! Bounds on the output entropy rate h'(y) and the conditional entropy
//! rate h'(y|x) for i.i.d. inputs.

use std::f64::consts::{E, PI};

use crate::error::{domain, Error, Result};
use crate::model::{ChannelParams, PsdModel};
use crate::quadrature::gauss::{integrate, integrate_to_inf, Quad, Tol};
use crate::quadrature::{g_unchecked, szego_log_integral, QuadratureConfig, EULER_GAMMA};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntropyKind {
    HyLower,
    HyUpper,
    HyUpperRefined,
    HyxUpper,
    HyxLowerRect,
}

impl EntropyKind {
    pub fn id(&self) -> &'static str {
        match self {
            EntropyKind::HyLower => "hy_lower",
            EntropyKind::HyUpper => "hy_upper",
            EntropyKind::HyUpperRefined => "hy_upper_refined",
            EntropyKind::HyxUpper => "hyx_upper",
            EntropyKind::HyxLowerRect => "hyx_lower_rect",
        }
    }
}

/// Differential entropy rate in nats per channel use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyRate {
    pub value: f64,
    pub kind: EntropyKind,
    /// Numerical error estimate (0 for closed forms).
    pub abs_err: f64,
}

impl EntropyRate {
    fn exact(value: f64, kind: EntropyKind) -> Self {
        EntropyRate { value, kind, abs_err: 0.0 }
    }
}

/// Law of the input power |x|² for [`h_yx_lower_rect`].
#[derive(Debug, Clone, PartialEq)]
pub enum InputPower {
    /// Proper Gaussian: |x|² exponential with mean σ_x².
    Pg,
    /// Constant modulus: |x|² = σ_x².
    Cm,
    /// Equally weighted samples of |x|².
    Sampled(Vec<f64>),
}

/// log(πe σ_n²), the entropy of one noise sample.
pub fn noise_entropy(sigma_n2: f64) -> f64 {
    (PI * E * sigma_n2).ln()
}

pub fn h_y_lower(params: &ChannelParams) -> EntropyRate {
    EntropyRate::exact(noise_entropy(params.sigma_n2) + g_unchecked(params.rho()), EntropyKind::HyLower)
}

/// Gaussian bound at average power α σ_x².
pub fn h_y_upper(params: &ChannelParams, alpha: f64) -> Result<EntropyRate> {
    if !(0.0..=1.0).contains(&alpha) {
        return domain(format!("alpha must lie in [0, 1], got {alpha}"));
    }
    let v = alpha * params.sigma_x2 * params.sigma_h2 + params.sigma_n2;
    Ok(EntropyRate::exact((PI * E * v).ln(), EntropyKind::HyUpper))
}

/// Entropy h(y_k) of one output sample for PG inputs.
///
/// Evaluated in polar form, h(y) = h(|y|) + log 2π + E log|y|, where the
/// radial density is a scale mixture of Rayleigh laws. The radial integral
/// is cut where its integrand drops below 1e−14 of the peak; the cut-off
/// contribution is added to the reported error.
pub fn h_y_upper_refined(params: &ChannelParams, cfg: &QuadratureConfig) -> Result<EntropyRate> {
    let rho = params.rho();
    let closed = (2.0 * PI).ln() - 0.5 * EULER_GAMMA + 0.5 * g_unchecked(rho);
    let (h_abs, err) = radial_entropy(rho, cfg)?;
    // h(|y|) and E log|y| each carry ½ log σ_n²
    let value = h_abs + closed + params.sigma_n2.ln();
    Ok(EntropyRate { value, kind: EntropyKind::HyUpperRefined, abs_err: err })
}

// Radial density of |y| at unit noise power: ∫ 2u/s e^{−u²/s} e^{−z} dz, s = ρz + 1.
fn radial_density(u: f64, rho: f64, tol: Tol) -> Result<f64> {
    if rho == 0.0 {
        return Ok(2.0 * u * (-u * u).exp());
    }
    let q = integrate_to_inf(
        |z| {
            let s = rho * z + 1.0;
            2.0 * u / s * (-u * u / s - z).exp()
        },
        0.0,
        tol,
    )?;
    Ok(q.value)
}

// h(|y|) at unit noise power, with its error estimate.
fn radial_entropy(rho: f64, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let inner = Tol { abs: 1e-300, rel: 1e-13, max_pieces: 2000 };
    let integrand = |u: f64| -> f64 {
        match radial_density(u, rho, inner) {
            Ok(p) if p > 0.0 => -p * p.ln(),
            _ => 0.0,
        }
    };
    // |y|² has mean ρ + 1; the tail decays like exp(−2u/√ρ)
    let mut hi = 4.0 * (rho + 1.0).sqrt();
    let peak = (1..=64)
        .map(|k| integrand(hi * k as f64 / 64.0).abs())
        .fold(0.0, f64::max);
    let mut guard = 0;
    while integrand(hi).abs() > 1e-14 * peak {
        hi *= 1.5;
        guard += 1;
        if guard > 200 {
            return Err(Error::Convergence { what: "radial truncation".into(), achieved: integrand(hi), target: 1e-14 * peak });
        }
    }
    let Quad { value, abs_err } = integrate(integrand, 0.0, hi, cfg.tol())?;
    // the density is log-concave in the tail: bound the remainder by a geometric tail
    let tail = integrand(hi).abs() * hi;
    Ok((value, abs_err + tail))
}

/// h(y) = log π + h(r) with r = |y|² at unit noise power; an independent
/// evaluation path used to check [`h_y_upper_refined`].
pub fn h_y_via_power(params: &ChannelParams) -> Result<f64> {
    let rho = params.rho();
    let tol = Tol { abs: 1e-300, rel: 1e-13, max_pieces: 2000 };
    let density = |r: f64| -> f64 {
        if rho == 0.0 {
            return (-r).exp();
        }
        integrate_to_inf(
            |z| {
                let s = rho * z + 1.0;
                (-r / s - z).exp() / s
            },
            0.0,
            tol,
        )
        .map(|q| q.value)
        .unwrap_or(0.0)
    };
    let q = integrate_to_inf(
        |r| {
            let p = density(r);
            if p > 0.0 {
                -p * p.ln()
            } else {
                0.0
            }
        },
        0.0,
        Tol { abs: 1e-11, rel: 1e-11, max_pieces: 4000 },
    )?;
    Ok(PI.ln() + q.value + params.sigma_n2.ln())
}

/// Szegő bound; exact for constant-modulus inputs.
pub fn h_yx_upper(params: &ChannelParams, model: &PsdModel) -> Result<EntropyRate> {
    let s = szego_log_integral(model, params.rho())?;
    Ok(EntropyRate::exact(s + noise_entropy(params.sigma_n2), EntropyKind::HyxUpper))
}

/// 2f_d E log(σ_h²|x|²/(2f_d σ_n²) + 1) + log(πe σ_n²), for a rectangular PSD.
pub fn h_yx_lower_rect(params: &ChannelParams, input: &InputPower) -> Result<EntropyRate> {
    let f_d = params.f_d;
    let k = params.sigma_h2 / (2.0 * f_d * params.sigma_n2);
    let mean_log = match input {
        InputPower::Pg => g_unchecked(params.rho() / (2.0 * f_d)),
        InputPower::Cm => (k * params.sigma_x2).ln_1p(),
        InputPower::Sampled(z) => {
            if z.is_empty() {
                return domain("empty input-power sample");
            }
            if z.iter().any(|&v| !(v >= 0.0)) {
                return domain("input powers must be nonnegative");
            }
            z.iter().map(|&v| (k * v).ln_1p()).sum::<f64>() / z.len() as f64
        }
    };
    Ok(EntropyRate::exact(2.0 * f_d * mean_log + noise_entropy(params.sigma_n2), EntropyKind::HyxLowerRect))
}

/// (Δ_h'(y), Δ_h'(y|x)) for PG inputs and a rectangular PSD.
pub fn entropy_gaps(params: &ChannelParams) -> (f64, f64) {
    let rho = params.rho();
    let c = rho / (2.0 * params.f_d);
    let dy = (rho.ln_1p() - g_unchecked(rho)).max(0.0);
    let dyx = (2.0 * params.f_d * (c.ln_1p() - g_unchecked(c))).max(0.0);
    (dy, dyx)
}

/// Refined output-entropy gap h'_U2(y) − h'_L(y).
pub fn refined_gap(params: &ChannelParams, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(h_y_upper_refined(params, cfg)?.value - h_y_lower(params).value)
}
