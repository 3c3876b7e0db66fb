//! Dependence of the prediction error on a single past power z_i.
//!
//! With every other power fixed, σ²_pred(z_i) = c − a z_i/(1 + λ z_i), where
//! c is the error with z_i = 0, λ = Σ[i,i]/σ_n² and a = Σ[N,i]²/σ_n² are read
//! off the joint posterior of (h_1..h_N) given the remaining observations.

use nalgebra::DMatrix;

use crate::error::{domain, Error, Result};

use super::{pred_error_finite, PowerProfile, ToeplitzCov};

/// Exact rational form of σ²_pred as a function of one past power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isolated {
    pub c: f64,
    pub a: f64,
    pub lambda: f64,
}

impl Isolated {
    pub fn eval(&self, z: f64) -> f64 {
        self.c - self.a * z / (1.0 + self.lambda * z)
    }

    /// Limit as z_i → ∞.
    pub fn limit(&self) -> f64 {
        if self.lambda > 0.0 {
            self.c - self.a / self.lambda
        } else {
            f64::NEG_INFINITY
        }
    }
}

/// Posterior decomposition for past index `index` (0-based, < N−1).
pub fn isolate_power(cov: &ToeplitzCov, z: &PowerProfile, sigma_n2: f64, index: usize) -> Result<Isolated> {
    let n = cov.n();
    if z.len() + 1 != n {
        return Err(Error::LengthMismatch { expected: n - 1, got: z.len() });
    }
    if index + 1 >= n {
        return domain(format!("index {index} is not a past sample of a length-{n} window"));
    }
    let rf = cov.matrix(n);
    let obs: Vec<usize> = (0..n - 1).filter(|&j| j != index).collect();
    let k = obs.len();
    let sq: Vec<f64> = z.z().iter().map(|v| v.sqrt()).collect();
    // A R Aᵀ + σ_n² I and R Aᵀ for the observation operator A = rows √z_j e_j
    let s = DMatrix::from_fn(k, k, |p, q| {
        sq[obs[p]] * rf[(obs[p], obs[q])] * sq[obs[q]] + if p == q { sigma_n2 } else { 0.0 }
    });
    let ra = DMatrix::from_fn(n, k, |r, q| rf[(r, obs[q])] * sq[obs[q]]);
    let ch = s.cholesky().ok_or_else(|| Error::NotPsd("observation covariance".into()))?;
    let post = &rf - &ra * ch.solve(&ra.transpose());
    let c = post[(n - 1, n - 1)];
    let lambda = post[(index, index)] / sigma_n2;
    let a = post[(n - 1, index)].powi(2) / sigma_n2;
    Ok(Isolated { c, a, lambda })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityReport {
    pub index: usize,
    /// Uniform grid of z_i values, starting at 0.
    pub grid: Vec<f64>,
    pub sigma2: Vec<f64>,
    /// Smallest second difference of log(1 + (P/σ_n²) σ²_pred) on the grid.
    pub min_second_diff: f64,
    /// (a, λ) fitted from the errors at z = 0 and two grid points.
    pub fit: Isolated,
    pub exact: Isolated,
    /// Largest deviation of the fitted rational form from the other points.
    pub fit_max_err: f64,
}

impl ConvexityReport {
    pub fn passed(&self) -> bool {
        self.min_second_diff >= -1e-9
            && self.fit_max_err <= 1e-8
            && self.exact.a >= 0.0
            && self.exact.lambda >= 0.0
            && self.exact.limit() >= -1e-12
    }
}

/// Sweeps z_i over `points` uniform values in [0, z_max] and checks the
/// rational form and the convexity of log(1 + (P/σ_n²) σ²_pred) in z_i.
pub fn convexity_check(
    cov: &ToeplitzCov,
    z: &PowerProfile,
    x_power: f64,
    sigma_n2: f64,
    index: usize,
    z_max: f64,
    points: usize,
) -> Result<ConvexityReport> {
    if points < 4 || !(z_max > 0.0) {
        return domain("need at least 4 grid points and z_max > 0");
    }
    let exact = isolate_power(cov, z, sigma_n2, index)?;
    let grid: Vec<f64> = (0..points).map(|k| z_max * k as f64 / (points - 1) as f64).collect();
    let mut zz = z.z().to_vec();
    let sigma2 = grid
        .iter()
        .map(|&zi| {
            zz[index] = zi;
            pred_error_finite(cov, &PowerProfile::new(zz.clone())?, sigma_n2)
        })
        .collect::<Result<Vec<_>>>()?;

    let kf: Vec<f64> = sigma2.iter().map(|s| (x_power / sigma_n2 * s).ln_1p()).collect();
    let min_second_diff = kf.windows(3).map(|w| w[2] - 2.0 * w[1] + w[0]).fold(f64::INFINITY, f64::min);

    // z/(c − σ²) = 1/a + (λ/a) z is linear in z
    let c = sigma2[0];
    let (i1, i2) = (points / 2, points - 1);
    let (d1, d2) = (c - sigma2[i1], c - sigma2[i2]);
    let fit = if d1.abs() < 1e-14 || d2.abs() < 1e-14 {
        Isolated { c, a: 0.0, lambda: 0.0 }
    } else {
        let (q1, q2) = (grid[i1] / d1, grid[i2] / d2);
        let slope = (q2 - q1) / (grid[i2] - grid[i1]);
        let inv_a = q1 - slope * grid[i1];
        Isolated { c, a: 1.0 / inv_a, lambda: slope / inv_a }
    };
    let fit_max_err = grid
        .iter()
        .zip(&sigma2)
        .enumerate()
        .filter(|(k, _)| ![0, i1, i2].contains(k))
        .map(|(_, (&zi, &s))| (fit.eval(zi) - s).abs())
        .fold(0.0, f64::max);

    Ok(ConvexityReport { index, grid, sigma2, min_second_diff, fit, exact, fit_max_err })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PsdModel;

    #[test]
    fn posterior_form_matches_direct_solve() {
        let cov = ToeplitzCov::from_model(&PsdModel::jakes(0.05, 1.0).unwrap(), 8);
        let z = PowerProfile::new(vec![0.5, 2.0, 1.0, 0.0, 3.0, 1.5, 0.7]).unwrap();
        let iso = isolate_power(&cov, &z, 1.0, 3).unwrap();
        let mut zz = z.z().to_vec();
        for zi in [0.0, 0.4, 5.0, 80.0] {
            zz[3] = zi;
            let d = pred_error_finite(&cov, &PowerProfile::new(zz.clone()).unwrap(), 1.0).unwrap();
            assert!((iso.eval(zi) - d).abs() < 1e-12, "{zi}");
        }
    }

    #[test]
    fn report_passes_for_rect() {
        let cov = ToeplitzCov::from_model(&PsdModel::rectangular(0.1, 1.0).unwrap(), 10);
        let z = PowerProfile::constant(9, 1.0).unwrap();
        let r = convexity_check(&cov, &z, 1.0, 1.0, 4, 10.0, 21).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!((r.fit.a - r.exact.a).abs() < 1e-8);
        assert!((r.fit.lambda - r.exact.lambda).abs() < 1e-6);
    }
}
