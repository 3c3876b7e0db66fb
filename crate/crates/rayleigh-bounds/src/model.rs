//! Channel parameters and fading power spectral densities.
//!
//! Frequencies are normalized to the symbol rate, so every PSD lives on
//! [−1/2, 1/2]. Autocorrelations are indexed by integer symbol lag.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{domain, Error, Result};
use crate::quadrature::gauss::{integrate, Tol};
use crate::quadrature::special::sinc;

/// Powers and Doppler of one channel use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub sigma_h2: f64,
    pub sigma_n2: f64,
    pub sigma_x2: f64,
    pub f_d: f64,
    rho: f64,
}

impl ChannelParams {
    /// `sigma_x2 = 0` is accepted and means a silent transmitter (ρ = 0).
    pub fn new(sigma_h2: f64, sigma_n2: f64, sigma_x2: f64, f_d: f64) -> Result<Self> {
        if !(sigma_h2 > 0.0 && sigma_h2.is_finite()) {
            return domain(format!("sigma_h2 must be positive, got {sigma_h2}"));
        }
        if !(sigma_n2 > 0.0 && sigma_n2.is_finite()) {
            return domain(format!("sigma_n2 must be positive, got {sigma_n2}"));
        }
        if !(sigma_x2 >= 0.0 && sigma_x2.is_finite()) {
            return domain(format!("sigma_x2 must be nonnegative, got {sigma_x2}"));
        }
        if !(f_d > 0.0 && f_d < 0.5) {
            return domain(format!("f_d must lie in (0, 0.5), got {f_d}"));
        }
        Ok(ChannelParams {
            sigma_h2,
            sigma_n2,
            sigma_x2,
            f_d,
            rho: sigma_x2 * sigma_h2 / sigma_n2,
        })
    }

    /// Unit fading and noise power, input power `rho`.
    pub fn normalized(rho: f64, f_d: f64) -> Result<Self> {
        Self::new(1.0, 1.0, rho, f_d)
    }

    pub fn from_snr_db(snr_db: f64, f_d: f64) -> Result<Self> {
        Self::normalized(10f64.powf(snr_db / 10.0), f_d)
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Same channel with the input power rescaled to reach SNR `rho`.
    pub fn with_rho(&self, rho: f64) -> Result<Self> {
        Self::new(self.sigma_h2, self.sigma_n2, rho * self.sigma_n2 / self.sigma_h2, self.f_d)
    }

    pub fn with_f_d(&self, f_d: f64) -> Result<Self> {
        Self::new(self.sigma_h2, self.sigma_n2, self.sigma_x2, f_d)
    }
}

/// Piecewise-linear symmetric PSD, stored on f ≥ 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    f: Vec<f64>,
    s: Vec<f64>,
}

impl Table {
    pub fn freqs(&self) -> &[f64] {
        &self.f
    }

    pub fn values(&self) -> &[f64] {
        &self.s
    }

    fn eval(&self, f: f64) -> f64 {
        let f = f.abs();
        let edge = *self.f.last().expect("table is nonempty");
        if f > edge {
            return 0.0;
        }
        let k = self.f.partition_point(|&x| x <= f).clamp(1, self.f.len() - 1);
        let (f0, f1) = (self.f[k - 1], self.f[k]);
        let t = if f1 > f0 { (f - f0) / (f1 - f0) } else { 0.0 };
        self.s[k - 1] + t * (self.s[k] - self.s[k - 1])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PsdShape {
    Rectangular { f_d: f64 },
    Jakes { f_d: f64 },
    RaisedCosine { f_d: f64, rolloff: f64 },
    Tabulated(Table),
}

/// A fading PSD `S_h(f)` with total power `sigma_h2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdModel {
    shape: PsdShape,
    sigma_h2: f64,
}

fn check_power(sigma_h2: f64) -> Result<()> {
    if sigma_h2 > 0.0 && sigma_h2.is_finite() {
        Ok(())
    } else {
        domain(format!("sigma_h2 must be positive, got {sigma_h2}"))
    }
}

fn check_fd(f_d: f64) -> Result<()> {
    if f_d > 0.0 && f_d < 0.5 {
        Ok(())
    } else {
        domain(format!("f_d must lie in (0, 0.5), got {f_d}"))
    }
}

const SPECTRAL_TOL: Tol = Tol { abs: 1e-13, rel: 1e-13, max_pieces: 8000 };

impl PsdModel {
    pub fn rectangular(f_d: f64, sigma_h2: f64) -> Result<Self> {
        check_fd(f_d)?;
        check_power(sigma_h2)?;
        Ok(PsdModel { shape: PsdShape::Rectangular { f_d }, sigma_h2 })
    }

    pub fn jakes(f_d: f64, sigma_h2: f64) -> Result<Self> {
        check_fd(f_d)?;
        check_power(sigma_h2)?;
        Ok(PsdModel { shape: PsdShape::Jakes { f_d }, sigma_h2 })
    }

    pub fn raised_cosine(f_d: f64, rolloff: f64, sigma_h2: f64) -> Result<Self> {
        check_fd(f_d)?;
        check_power(sigma_h2)?;
        if !(rolloff > 0.0 && rolloff <= 1.0) {
            return domain(format!("roll-off must lie in (0, 1], got {rolloff}"));
        }
        if (1.0 + rolloff) * f_d >= 0.5 {
            return domain(format!(
                "raised-cosine support edge (1+{rolloff})·{f_d} must stay below 0.5"
            ));
        }
        Ok(PsdModel { shape: PsdShape::RaisedCosine { f_d, rolloff }, sigma_h2 })
    }

    /// Piecewise-linear PSD through `(freqs[i], values[i])`, renormalized
    /// to `sigma_h2`. The grid must be increasing and symmetric about 0.
    pub fn tabulated(freqs: &[f64], values: &[f64], sigma_h2: f64) -> Result<Self> {
        check_power(sigma_h2)?;
        if freqs.len() != values.len() {
            return Err(Error::LengthMismatch { expected: freqs.len(), got: values.len() });
        }
        if freqs.len() < 2 {
            return domain("tabulated PSD needs at least two points");
        }
        if freqs.windows(2).any(|w| w[1] <= w[0]) {
            return domain("tabulated frequencies must be strictly increasing");
        }
        let n = freqs.len();
        let edge = freqs[n - 1];
        if edge > 0.5 || edge <= 0.0 {
            return domain(format!("tabulated support edge {edge} outside (0, 0.5]"));
        }
        let vmax = values.iter().cloned().fold(0.0, f64::max);
        for i in 0..n {
            let j = n - 1 - i;
            if (freqs[i] + freqs[j]).abs() > 1e-12 || (values[i] - values[j]).abs() > 1e-12 * vmax.max(1.0) {
                return domain("tabulated PSD must be supplied symmetric");
            }
            if !(values[i] >= 0.0 && values[i].is_finite()) {
                return domain("tabulated PSD values must be finite and nonnegative");
            }
        }
        let mut f: Vec<f64> = Vec::new();
        let mut s: Vec<f64> = Vec::new();
        for i in 0..n {
            if freqs[i] >= 0.0 {
                if f.is_empty() && freqs[i] > 0.0 {
                    f.push(0.0);
                    s.push(values[i]);
                }
                f.push(freqs[i].abs());
                s.push(values[i]);
            }
        }
        let half: f64 = (1..f.len()).map(|k| 0.5 * (s[k] + s[k - 1]) * (f[k] - f[k - 1])).sum();
        if half <= 0.0 {
            return domain("tabulated PSD has zero power");
        }
        let scale = sigma_h2 / (2.0 * half);
        s.iter_mut().for_each(|v| *v *= scale);
        Ok(PsdModel { shape: PsdShape::Tabulated(Table { f, s }), sigma_h2 })
    }

    pub fn shape(&self) -> &PsdShape {
        &self.shape
    }

    pub fn sigma_h2(&self) -> f64 {
        self.sigma_h2
    }

    /// Nominal Doppler parameter (the table edge for tabulated PSDs).
    pub fn f_d(&self) -> f64 {
        match &self.shape {
            PsdShape::Rectangular { f_d } | PsdShape::Jakes { f_d } | PsdShape::RaisedCosine { f_d, .. } => *f_d,
            PsdShape::Tabulated(t) => *t.f.last().expect("table is nonempty"),
        }
    }

    /// Largest |f| with S_h(f) > 0.
    pub fn support_edge(&self) -> f64 {
        match &self.shape {
            PsdShape::RaisedCosine { f_d, rolloff } => (1.0 + rolloff) * f_d,
            _ => self.f_d(),
        }
    }

    /// Short descriptor, e.g. `rect:0.1`, `rc:0.1:0.2`.
    pub fn describe(&self) -> String {
        match &self.shape {
            PsdShape::Rectangular { f_d } => format!("rect:{f_d}"),
            PsdShape::Jakes { f_d } => format!("jakes:{f_d}"),
            PsdShape::RaisedCosine { f_d, rolloff } => format!("rc:{f_d}:{rolloff}"),
            PsdShape::Tabulated(t) => format!("table:{}pts", t.f.len()),
        }
    }

    /// Same shape family rescaled to Doppler `f_d` (tabulated grids are stretched).
    pub fn with_f_d(&self, f_d: f64) -> Result<Self> {
        match &self.shape {
            PsdShape::Rectangular { .. } => Self::rectangular(f_d, self.sigma_h2),
            PsdShape::Jakes { .. } => Self::jakes(f_d, self.sigma_h2),
            PsdShape::RaisedCosine { rolloff, .. } => Self::raised_cosine(f_d, *rolloff, self.sigma_h2),
            PsdShape::Tabulated(t) => {
                let k = f_d / self.f_d();
                let mut freqs: Vec<f64> = t.f.iter().rev().map(|x| -x * k).collect();
                let mut vals: Vec<f64> = t.s.iter().rev().cloned().collect();
                freqs.extend(t.f.iter().skip(1).map(|x| x * k));
                vals.extend(t.s.iter().skip(1));
                Self::tabulated(&freqs, &vals, self.sigma_h2)
            }
        }
    }

    /// S_h(f). Jakes is clamped to its value at f_d − 1e−12 near the band edge.
    pub fn psd_eval(&self, f: f64) -> Result<f64> {
        if !(f.abs() <= 0.5) {
            return domain(format!("frequency {f} outside [-1/2, 1/2]"));
        }
        Ok(self.eval_unchecked(f))
    }

    pub(crate) fn eval_unchecked(&self, f: f64) -> f64 {
        let a = f.abs();
        let p = self.sigma_h2;
        match &self.shape {
            PsdShape::Rectangular { f_d } => {
                if a <= *f_d {
                    p / (2.0 * f_d)
                } else {
                    0.0
                }
            }
            PsdShape::Jakes { f_d } => {
                if a > *f_d {
                    0.0
                } else {
                    let a = a.min(f_d - 1e-12);
                    p / (PI * (f_d * f_d - a * a).sqrt())
                }
            }
            PsdShape::RaisedCosine { f_d, rolloff } => rc_value(a, *f_d, *rolloff, p),
            PsdShape::Tabulated(t) => t.eval(a),
        }
    }

    /// r_h(lag) = ∫ S_h(f) e^{j2πf·lag} df.
    pub fn autocorr(&self, lag: i64) -> f64 {
        let l = lag.unsigned_abs() as f64;
        let p = self.sigma_h2;
        if lag == 0 {
            return p;
        }
        match &self.shape {
            PsdShape::Rectangular { f_d } => p * sinc(2.0 * f_d * l),
            PsdShape::RaisedCosine { f_d, rolloff } => {
                let x = 4.0 * rolloff * f_d * l;
                let taper = if (1.0 - x).abs() < 1e-9 {
                    let d = 1.0 - x;
                    if d == 0.0 {
                        PI / 4.0
                    } else {
                        (FRAC_PI_2 * d).sin() / (d * (2.0 - d))
                    }
                } else {
                    (PI * rolloff * 2.0 * f_d * l).cos() / (1.0 - x * x)
                };
                p * sinc(2.0 * f_d * l) * taper
            }
            PsdShape::Jakes { f_d } => p * libm::j0(2.0 * PI * f_d * l),
            PsdShape::Tabulated(t) => table_corr(t, l),
        }
    }

    /// ∫_{−1/2}^{1/2} g(S_h(f)) df.
    ///
    /// Constant pieces are summed in closed form. The Jakes band edge is
    /// removed with f = f_d cos φ.
    pub fn spectral_integral(&self, g: impl Fn(f64) -> f64) -> Result<f64> {
        let p = self.sigma_h2;
        let outside = (1.0 - 2.0 * self.support_edge()) * g(0.0);
        let inside = match &self.shape {
            PsdShape::Rectangular { f_d } => 2.0 * f_d * g(p / (2.0 * f_d)),
            PsdShape::Jakes { f_d } => {
                let q = integrate(
                    |phi| {
                        let s = phi.sin();
                        g(p / (PI * f_d * s)) * f_d * s
                    },
                    0.0,
                    FRAC_PI_2,
                    SPECTRAL_TOL,
                )?;
                2.0 * q.value
            }
            PsdShape::RaisedCosine { f_d, rolloff } => {
                let lo = (1.0 - rolloff) * f_d;
                let hi = (1.0 + rolloff) * f_d;
                let q = integrate(|f| g(rc_value(f, *f_d, *rolloff, p)), lo, hi, SPECTRAL_TOL)?;
                2.0 * lo * g(p / (2.0 * f_d)) + 2.0 * q.value
            }
            PsdShape::Tabulated(t) => {
                let mut acc = 0.0;
                for k in 1..t.f.len() {
                    let (f0, f1, s0, s1) = (t.f[k - 1], t.f[k], t.s[k - 1], t.s[k]);
                    if s0 == s1 {
                        acc += (f1 - f0) * g(s0);
                    } else {
                        let q = integrate(|f| g(s0 + (s1 - s0) * (f - f0) / (f1 - f0)), f0, f1, SPECTRAL_TOL)?;
                        acc += q.value;
                    }
                }
                2.0 * acc
            }
        };
        Ok(inside + outside)
    }

    /// λ = ∫ S_h(f)² df; diverges for Jakes.
    pub fn spectral_l2(&self) -> Result<f64> {
        if let PsdShape::Jakes { .. } = self.shape {
            return Err(Error::Divergent(
                "the squared Jakes PSD is not integrable at the band edges".into(),
            ));
        }
        self.spectral_integral(|s| s * s)
    }
}

fn rc_value(a: f64, f_d: f64, rolloff: f64, p: f64) -> f64 {
    let lo = (1.0 - rolloff) * f_d;
    let hi = (1.0 + rolloff) * f_d;
    if a <= lo {
        p / (2.0 * f_d)
    } else if a <= hi {
        p / (4.0 * f_d) * (1.0 - (PI * (a - f_d) / (2.0 * rolloff * f_d)).sin())
    } else {
        0.0
    }
}


// Exact transform of the piecewise-linear PSD, segment by segment.
fn table_corr(t: &Table, l: f64) -> f64 {
    let w = 2.0 * PI * l;
    let mut acc = 0.0;
    for k in 1..t.f.len() {
        let (f0, f1, s0, s1) = (t.f[k - 1], t.f[k], t.s[k - 1], t.s[k]);
        let b = (s1 - s0) / (f1 - f0);
        let a = s0 - b * f0;
        let prim = |f: f64| (a + b * f) * (w * f).sin() / w + b * (w * f).cos() / (w * w);
        acc += prim(f1) - prim(f0);
    }
    2.0 * acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_rho() {
        let p = ChannelParams::new(2.0, 0.5, 3.0, 0.1).unwrap();
        assert_eq!(p.rho(), 3.0 * 2.0 / 0.5);
        assert!(ChannelParams::new(1.0, 1.0, 1.0, 0.5).is_err());
        assert!(ChannelParams::new(1.0, 1.0, 1.0, 0.0).is_err());
        assert!(ChannelParams::new(1.0, 0.0, 1.0, 0.1).is_err());
        assert_eq!(ChannelParams::new(1.0, 1.0, 0.0, 0.1).unwrap().rho(), 0.0);
    }

    #[test]
    fn point_values() {
        let r = PsdModel::rectangular(0.1, 1.0).unwrap();
        assert_eq!(r.psd_eval(0.0).unwrap(), 5.0);
        assert_eq!(r.psd_eval(0.2).unwrap(), 0.0);
        assert!(r.psd_eval(0.6).is_err());
        let j = PsdModel::jakes(0.1, 1.0).unwrap();
        assert!((j.psd_eval(0.0).unwrap() - 3.183_098_861_837_907).abs() < 1e-12);
        assert!(j.psd_eval(0.1).unwrap().is_finite());
        assert_eq!(j.psd_eval(0.1).unwrap(), j.psd_eval(0.1 - 1e-12).unwrap());
    }

    #[test]
    fn rect_autocorr() {
        let r = PsdModel::rectangular(0.1, 1.0).unwrap();
        assert_eq!(r.autocorr(0), 1.0);
        let r = PsdModel::rectangular(0.25, 1.0).unwrap();
        assert!(r.autocorr(2).abs() < 1e-16);
    }

    #[test]
    fn autocorr_matches_fourier_integral() {
        let models = [
            PsdModel::raised_cosine(0.1, 0.2, 1.0).unwrap(),
            PsdModel::raised_cosine(0.125, 1.0, 1.5).unwrap(),
            PsdModel::tabulated(&[-0.2, -0.05, 0.0, 0.05, 0.2], &[0.3, 1.0, 2.0, 1.0, 0.3], 1.0).unwrap(),
        ];
        for m in &models {
            for lag in [1i64, 2, 3, 7, 20] {
                let edge = m.support_edge();
                let q = integrate(
                    |f| 2.0 * m.eval_unchecked(f) * (2.0 * PI * f * lag as f64).cos(),
                    0.0,
                    edge,
                    Tol { abs: 1e-13, rel: 1e-13, max_pieces: 4000 },
                )
                .unwrap();
                assert!((q.value - m.autocorr(lag)).abs() < 1e-8, "{} lag {lag}", m.describe());
            }
        }
    }

    #[test]
    fn rc_singular_lag_uses_limit() {
        // 4·β·f_d·l = 1 at β = 0.5, f_d = 0.125, l = 4
        let m = PsdModel::raised_cosine(0.125, 0.5, 1.0).unwrap();
        let direct = integrate(
            |f| 2.0 * m.eval_unchecked(f) * (2.0 * PI * f * 4.0).cos(),
            0.0,
            m.support_edge(),
            Tol::default(),
        )
        .unwrap()
        .value;
        assert!((m.autocorr(4) - direct).abs() < 1e-10);
    }

    #[test]
    fn jakes_autocorr_is_bessel_j0() {
        let m = PsdModel::jakes(0.1, 1.0).unwrap();
        // J0(2π·0.1·l)
        let table = [(1, 0.903_712_642_092_466_3), (5, -0.304_242_177_644_093_84), (50, 0.100_250_994_573_006_12)];
        for (l, want) in table {
            assert!((m.autocorr(l) - want).abs() < 1e-12, "lag {l}: {}", m.autocorr(l));
        }
    }

    #[test]
    fn spectral_l2_values() {
        assert!((PsdModel::rectangular(0.1, 1.0).unwrap().spectral_l2().unwrap() - 5.0).abs() < 1e-12);
        let near_iid = PsdModel::rectangular(0.5 - 1e-12, 1.0).unwrap().spectral_l2().unwrap();
        assert!((near_iid - 1.0).abs() < 1e-9);
        assert!(matches!(PsdModel::jakes(0.1, 1.0).unwrap().spectral_l2(), Err(Error::Divergent(_))));
    }

    #[test]
    fn rc_l2_matches_riemann_sum() {
        let m = PsdModel::raised_cosine(0.1, 0.2, 1.0).unwrap();
        let lam = m.spectral_l2().unwrap();
        let n = 1_000_000;
        let h = 1.0 / n as f64;
        let riemann: f64 = (0..n).map(|k| m.eval_unchecked(-0.5 + (k as f64 + 0.5) * h).powi(2)).sum::<f64>() * h;
        assert!(((lam - riemann) / lam).abs() < 1e-6);
    }

    #[test]
    fn tabulated_is_renormalized() {
        let m = PsdModel::tabulated(&[-0.3, 0.0, 0.3], &[1.0, 7.0, 1.0], 2.0).unwrap();
        assert!((m.spectral_integral(|s| s).unwrap() - 2.0).abs() < 1e-12);
        assert!(PsdModel::tabulated(&[-0.3, 0.0, 0.2], &[1.0, 7.0, 1.0], 2.0).is_err());
    }
}
