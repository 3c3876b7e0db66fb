//! Integration primitives: exponential-weighted log-moments, Szegő-type
//! spectral integrals and seeded Monte Carlo.

pub mod gauss;
pub mod mc;
pub mod special;

use crate::error::{domain, Error, Result};
use crate::model::PsdModel;

pub use mc::{derive_seed, mc_expectation, mc_mean, stream_rng, McEstimate, Moments, Sampler};
pub use special::EULER_GAMMA;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Node count of the Gauss–Laguerre cross-check rule.
    pub laguerre_order: usize,
    /// Absolute tolerance of adaptive integration.
    pub abs_tol: f64,
    /// Relative tolerance of adaptive integration.
    pub rel_tol: f64,
    /// Default Monte Carlo sample count.
    pub mc_default_n: usize,
    /// Largest acceptable Monte Carlo standard error (nats).
    pub mc_max_stderr: f64,
    pub seed: u64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            laguerre_order: 96,
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            mc_default_n: 100_000,
            mc_max_stderr: 1e-2,
            seed: 0x5eed,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.laguerre_order < 16 {
            return domain("laguerre_order must be at least 16");
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.mc_max_stderr > 0.0) {
            return domain("tolerances must be positive");
        }
        if self.mc_default_n < 2 {
            return domain("mc_default_n must be at least 2");
        }
        Ok(())
    }

    pub fn with_samples(mut self, n: usize) -> Self {
        self.mc_default_n = n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_max_stderr(mut self, max: f64) -> Self {
        self.mc_max_stderr = max;
        self
    }

    pub(crate) fn tol(&self) -> gauss::Tol {
        gauss::Tol { abs: self.abs_tol, rel: self.rel_tol, max_pieces: 8000 }
    }

    /// Turns a Monte Carlo estimate into an error if it is too noisy.
    pub fn accept(&self, what: &str, e: McEstimate) -> Result<McEstimate> {
        if e.stderr <= self.mc_max_stderr && e.mean.is_finite() {
            Ok(e)
        } else {
            Err(Error::Convergence { what: what.into(), achieved: e.stderr, target: self.mc_max_stderr })
        }
    }
}

/// g(a) = ∫₀^∞ log(1 + a z) e^{−z} dz = e^{1/a} E₁(1/a).
pub fn g_logmoment(a: f64) -> Result<f64> {
    if !(a >= 0.0) {
        return domain(format!("g_logmoment needs a ≥ 0, got {a}"));
    }
    Ok(g_unchecked(a))
}

pub(crate) fn g_unchecked(a: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else if a <= 1e-3 {
        a * (1.0 + a * (-1.0 + a * (2.0 + a * (-6.0 + 24.0 * a))))
    } else if a.is_infinite() {
        f64::INFINITY
    } else {
        special::scaled_expint_e1(1.0 / a)
    }
}

/// g(a) by Gauss–Laguerre; the independent path used to cross-check [`g_logmoment`].
pub fn g_logmoment_laguerre(a: f64, order: usize) -> f64 {
    gauss::gauss_laguerre(order).apply(|z| (a * z).ln_1p())
}

/// ∫_{−1/2}^{1/2} log(1 + c S_h(f)/σ_h²) df.
pub fn szego_log_integral(model: &PsdModel, c: f64) -> Result<f64> {
    if !(c >= 0.0) {
        return domain(format!("szego_log_integral needs c ≥ 0, got {c}"));
    }
    if c == 0.0 {
        return Ok(0.0);
    }
    let k = c / model.sigma_h2();
    model.spectral_integral(|s| (k * s).ln_1p())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PsdModel;

    #[test]
    fn g_known_values() {
        assert_eq!(g_logmoment(0.0).unwrap(), 0.0);
        assert!((g_logmoment(1.0).unwrap() - 0.596_347_362_323_194_6).abs() < 1e-14);
        assert!((g_logmoment(5.0).unwrap() - 1.493_348_746_932_239_3).abs() < 1e-13);
        assert!(g_logmoment(-1.0).is_err());
        let a = 1e-7;
        assert!((g_logmoment(a).unwrap() / a - 1.0).abs() < 1e-6);
    }

    #[test]
    fn g_branches_agree_at_switch() {
        let a = 1e-3;
        let series = g_unchecked(a);
        let exact = special::scaled_expint_e1(1.0 / a);
        // truncation error of the five-term series is 120·a⁵ relative
        assert!(((series - exact) / exact).abs() < 2e-13);
    }

    #[test]
    fn laguerre_cross_check() {
        for a in [0.01, 0.1, 1.0, 10.0] {
            let exact = g_logmoment(a).unwrap();
            let gl = g_logmoment_laguerre(a, 96);
            assert!((exact - gl).abs() < 1e-6 * exact.max(1.0), "a={a}: {exact} vs {gl}");
        }
    }

    #[test]
    fn szego_rect_closed_form() {
        let m = PsdModel::rectangular(0.1, 1.0).unwrap();
        assert!((szego_log_integral(&m, 1.0).unwrap() - 0.2 * 6f64.ln()).abs() < 1e-15);
        assert_eq!(szego_log_integral(&m, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn szego_jakes_against_midpoint_rule() {
        let m = PsdModel::jakes(0.1, 1.0).unwrap();
        let s = szego_log_integral(&m, 1.0).unwrap();
        let n = 1_000_000;
        let h = 0.2 / n as f64;
        let mid: f64 = (0..n)
            .map(|k| {
                let f = -0.1 + (k as f64 + 0.5) * h;
                (m.psd_eval(f).unwrap()).ln_1p()
            })
            .sum::<f64>()
            * h;
        assert!((s - mid).abs() < 1e-7, "{s} vs {mid}");
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::default().validate().is_ok());
        let bad = QuadratureConfig { laguerre_order: 8, ..Default::default() };
        assert!(bad.validate().is_err());
    }
}
