//! Monte Carlo oracle: stationary fading synthesis, the flat-fading channel
//! y_k = h_k x_k + n_k, and empirical checks of the analytic quantities.

mod fade;

pub use fade::{read_fade, write_fade, FadeHeader, FADE_MAGIC, FADE_VERSION};

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{domain, Error, Result};
use crate::model::PsdModel;
use crate::prediction::{PowerProfile, ToeplitzCov};
use crate::quadrature::{derive_seed, mc_mean, stream_rng, McEstimate};
use crate::rates::cm::{cn, psk_constellation};

/// Largest horizon for the Cholesky generator.
pub const CHOLESKY_MAX_N: usize = 2048;

/// Floored negative eigenvalue mass above this fraction of the trace is an error.
pub const MAX_NEGATIVE_MASS: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct FadingRealization {
    pub h: Vec<Complex64>,
    pub model: PsdModel,
    pub seed: u64,
    /// Circulant size used (0 for the Cholesky path).
    pub embedding: usize,
    /// Negative eigenvalue mass floored at zero, relative to the trace.
    pub floored_mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InputKind {
    /// Proper Gaussian with variance σ_x².
    Pg,
    /// Uniform m-PSK of power σ_x².
    Cm(usize),
    /// Power β σ_x² with probability 1/β, else silent; uniform phase.
    OnOff { beta: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n_symbols: usize,
    pub n_realizations: usize,
    pub seed: u64,
    pub input_kind: InputKind,
}

impl SimConfig {
    pub fn new(n_symbols: usize, n_realizations: usize, seed: u64, input_kind: InputKind) -> Result<Self> {
        if n_symbols < 2 {
            return domain("n_symbols must be at least 2");
        }
        if n_realizations == 0 {
            return domain("n_realizations must be positive");
        }
        match input_kind {
            InputKind::Cm(m) if m < 2 => return domain("CM input needs at least 2 points"),
            InputKind::OnOff { beta } if !(beta >= 1.0) => return domain("on-off input needs beta ≥ 1"),
            _ => {}
        }
        Ok(SimConfig { n_symbols, n_realizations, seed, input_kind })
    }
}

// Eigenvalues of the size-M circulant whose first row wraps the lags.
// Only lags below N must be exact; the rest are free, and a cosine taper
// down to zero at M/2 suppresses the ringing of slowly decaying r_h.
fn embedding_eigs(model: &PsdModel, n: usize, m: usize) -> Vec<f64> {
    let half = m / 2;
    let taper = |k: usize| -> f64 {
        if k < n {
            1.0
        } else {
            let t = (k + 1 - n) as f64 / (half + 1 - n) as f64;
            0.5 * (1.0 + (PI * t).cos())
        }
    };
    let mut c: Vec<Complex64> = (0..m)
        .map(|k| {
            let l = k.min(m - k);
            Complex64::new(model.autocorr(l as i64) * taper(l), 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut c);
    c.into_iter().map(|z| z.re).collect()
}

/// Circulant-embedding synthesis: size 2N, doubled while the embedding has
/// negative eigenvalues, up to 8N; the remaining negative mass is floored.
pub fn gen_fading(model: &PsdModel, n: usize, seed: u64) -> Result<FadingRealization> {
    if n < 2 {
        return domain("N must be at least 2");
    }
    let (m, eig, neg) = {
        let mut m = 2 * n;
        loop {
            let eig = embedding_eigs(model, n, m);
            let trace: f64 = eig.iter().sum();
            let neg = eig.iter().filter(|&&l| l < 0.0).map(|l| -l).sum::<f64>() / trace;
            if neg <= 1e-12 * trace.abs().max(1.0) || m >= 8 * n {
                break (m, eig, neg);
            }
            m *= 2;
        }
    };
    if neg > MAX_NEGATIVE_MASS {
        return Err(Error::NotPsd(format!(
            "circulant embedding of size {m} has negative mass {neg:.3e} of the trace; use a larger embedding or the Cholesky path"
        )));
    }
    let mut rng = stream_rng(seed, 0);
    let scale = 1.0 / m as f64;
    let mut buf: Vec<Complex64> = eig.iter().map(|&l| cn(&mut rng, 1.0) * (l.max(0.0) * scale).sqrt()).collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    buf.truncate(n);
    Ok(FadingRealization { h: buf, model: model.clone(), seed, embedding: m, floored_mass: neg })
}

// Lower Cholesky factor of the Toeplitz covariance, with jitter escalated
// from 1e−12 r(0) when the matrix is numerically singular.
fn cholesky_factor(model: &PsdModel, n: usize) -> Result<DMatrix<f64>> {
    let r = ToeplitzCov::from_model(model, n).matrix(n);
    let r0 = model.sigma_h2();
    let mut jitter = 0.0;
    for _ in 0..6 {
        let mut a = r.clone();
        for i in 0..n {
            a[(i, i)] += jitter;
        }
        if let Some(ch) = a.cholesky() {
            return Ok(ch.unpack());
        }
        jitter = if jitter == 0.0 { 1e-12 * r0 } else { jitter * 100.0 };
    }
    Err(Error::NotPsd(format!("Toeplitz covariance of size {n}")))
}

/// Exact synthesis h = L ξ; N ≤ 2048.
pub fn gen_fading_cholesky(model: &PsdModel, n: usize, seed: u64) -> Result<FadingRealization> {
    if !(2..=CHOLESKY_MAX_N).contains(&n) {
        return domain(format!("Cholesky path needs 2 ≤ N ≤ {CHOLESKY_MAX_N}"));
    }
    let l = cholesky_factor(model, n)?;
    let mut rng = stream_rng(seed, 0);
    let h = correlate(&l, &mut rng);
    Ok(FadingRealization { h, model: model.clone(), seed, embedding: 0, floored_mass: 0.0 })
}

fn correlate(l: &DMatrix<f64>, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let n = l.nrows();
    let xi: Vec<Complex64> = (0..n).map(|_| cn(rng, 1.0)).collect();
    (0..n).map(|i| (0..=i).map(|j| xi[j] * l[(i, j)]).sum()).collect()
}

/// i.i.d. inputs of average power σ_x².
pub fn gen_inputs(kind: InputKind, n: usize, sigma_x2: f64, seed: u64) -> Result<Vec<Complex64>> {
    let mut rng = stream_rng(seed, 1);
    let amp = sigma_x2.sqrt();
    match kind {
        InputKind::Pg => Ok((0..n).map(|_| cn(&mut rng, sigma_x2)).collect()),
        InputKind::Cm(m) => {
            if m < 2 {
                return domain("CM input needs at least 2 points");
            }
            let pts = psk_constellation(m);
            Ok((0..n).map(|_| pts[rng.random_range(0..m)] * amp).collect())
        }
        InputKind::OnOff { beta } => {
            if !(beta >= 1.0) {
                return domain("on-off input needs beta ≥ 1");
            }
            let on = amp * beta.sqrt();
            Ok((0..n)
                .map(|_| {
                    let phase = rng.random::<f64>() * 2.0 * PI;
                    if rng.random::<f64>() * beta < 1.0 {
                        Complex64::from_polar(on, phase)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect())
        }
    }
}

/// y_k = h_k x_k + n_k with n_k ~ CN(0, σ_n²).
pub fn simulate_channel(real: &FadingRealization, inputs: &[Complex64], sigma_n2: f64, seed: u64) -> Result<Vec<Complex64>> {
    if inputs.len() != real.h.len() {
        return Err(Error::LengthMismatch { expected: real.h.len(), got: inputs.len() });
    }
    if !(sigma_n2 >= 0.0) {
        return domain("sigma_n2 must be nonnegative");
    }
    let mut rng = stream_rng(seed, 2);
    Ok(real
        .h
        .iter()
        .zip(inputs)
        .map(|(&h, &x)| {
            let n = if sigma_n2 > 0.0 { cn(&mut rng, sigma_n2) } else { Complex64::new(0.0, 0.0) };
            h * x + n
        })
        .collect())
}

/// Empirical one-step prediction error of the exact LMMSE predictor.
///
/// Each realization sends unit-phase symbols of power z_i, removes the known
/// phase from y_i and predicts h_N with the real filter coefficients of the
/// analytic covariance.
pub fn empirical_pred_error(
    model: &PsdModel,
    z: &PowerProfile,
    sigma_n2: f64,
    n_realizations: usize,
    seed: u64,
) -> Result<McEstimate> {
    let n = z.len() + 1;
    if n > CHOLESKY_MAX_N {
        return domain(format!("horizon {n} exceeds {CHOLESKY_MAX_N}"));
    }
    if !(sigma_n2 > 0.0) {
        return domain("sigma_n2 must be positive");
    }
    let cov = ToeplitzCov::from_model(model, n);
    let m = n - 1;
    let d: Vec<f64> = z.z().iter().map(|v| v.sqrt()).collect();
    let a = DMatrix::from_fn(m, m, |i, j| d[i] * cov.lags()[i.abs_diff(j)] * d[j] + if i == j { sigma_n2 } else { 0.0 });
    let b = DVector::from_fn(m, |i, _| d[i] * cov.lags()[m - i]);
    let w = a.cholesky().ok_or_else(|| Error::NotPsd("observation covariance".into()))?.solve(&b);
    let l = cholesky_factor(model, n)?;
    let est = mc_mean(n_realizations, seed, |rng| {
        let h = correlate(&l, rng);
        let mut pred = Complex64::new(0.0, 0.0);
        for i in 0..m {
            let x = Complex64::from_polar(d[i], rng.random::<f64>() * 2.0 * PI);
            let y = h[i] * x + cn(rng, sigma_n2);
            // y x*/|x| = √z_i h_i + n'_i
            let derot = if d[i] > 0.0 { y * x.conj() / d[i] } else { Complex64::new(0.0, 0.0) };
            pred += derot * w[i];
        }
        (h[m] - pred).norm_sqr()
    });
    Ok(est)
}

/// Coherent mutual information by direct simulation of (x, h, n).
///
/// PG averages log(1 + ρ|h|²); CM draws the sent symbol and evaluates the
/// full posterior sum over the constellation. On-off inputs are rejected.
pub fn empirical_coherent_mi(rho: f64, input: InputKind, n: usize, seed: u64) -> Result<McEstimate> {
    if n < 10_000 {
        return domain("need at least 10⁴ samples");
    }
    if !(rho >= 0.0) {
        return domain("rho must be nonnegative");
    }
    match input {
        InputKind::Pg => Ok(mc_mean(n, seed, |rng| (rho * cn(rng, 1.0).norm_sqr()).ln_1p())),
        InputKind::Cm(m) => {
            if m < 2 {
                return domain("CM input needs at least 2 points");
            }
            let pts = psk_constellation(m);
            let amp = rho.sqrt();
            Ok(mc_mean(n, seed, |rng| {
                let x = pts[rng.random_range(0..m)];
                let h = cn(rng, 1.0) * amp;
                let w = cn(rng, 1.0);
                let y = h * x + w;
                let e: Vec<f64> = pts.iter().map(|&xj| -(y - h * xj).norm_sqr() + w.norm_sqr()).collect();
                let top = e.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let lse = top + e.iter().map(|t| (t - top).exp()).sum::<f64>().ln();
                (m as f64).ln() - lse
            }))
        }
        InputKind::OnOff { .. } => domain("coherent mutual information is defined here for PG and CM inputs only"),
    }
}

/// Periodogram |FFT(h)|²/N averaged over realizations of [`gen_fading`];
/// bin k is frequency k/N.
pub fn average_periodogram(model: &PsdModel, n: usize, realizations: usize, seed: u64) -> Result<Vec<f64>> {
    let fft = FftPlanner::new().plan_fft_forward(n);
    let parts = (0..realizations)
        .into_par_iter()
        .map(|r| {
            let mut h = gen_fading(model, n, derive_seed(seed, &[r as u64]))?.h;
            fft.process(&mut h);
            Ok(h.iter().map(|c| c.norm_sqr() / n as f64).collect::<Vec<f64>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut acc = vec![0.0; n];
    for p in &parts {
        for (a, v) in acc.iter_mut().zip(p) {
            *a += v;
        }
    }
    Ok(acc.into_iter().map(|v| v / realizations as f64).collect())
}
