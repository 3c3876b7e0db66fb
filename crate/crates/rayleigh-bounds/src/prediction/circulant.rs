//! Circulant approximation of the Toeplitz channel covariance.

use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::model::PsdModel;

/// Eigenvalues S_h(f_k) of the N×N circulant matrix, with f_k = k/N folded
/// into [−½, ½).
pub fn circulant_eigs(model: &PsdModel, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return domain("circulant size must be positive");
    }
    let nf = n as f64;
    Ok((0..n)
        .map(|k| {
            let f = if 2 * k < n { k as f64 / nf } else { (k as f64 - nf) / nf };
            model.eval_unchecked(f)
        })
        .collect())
}

/// Weak (normalized Frobenius) norm between the Toeplitz matrix of r_h and
/// the circulant matrix with eigenvalues [`circulant_eigs`].
pub fn toeplitz_circulant_weak_norm(model: &PsdModel, n: usize) -> Result<f64> {
    let eig = circulant_eigs(model, n)?;
    let nf = n as f64;
    let cos: Vec<f64> = (0..n).map(|j| (2.0 * PI * j as f64 / nf).cos()).collect();
    // first row of the circulant matrix
    let c: Vec<f64> = (0..n)
        .map(|k| (0..n).map(|l| eig[l] * cos[(k * l) % n]).sum::<f64>() / nf)
        .collect();
    let mut acc = 0.0;
    for d in -(n as i64 - 1)..=(n as i64 - 1) {
        let r = model.autocorr(d);
        let diff = r - c[d.rem_euclid(n as i64) as usize];
        acc += (n as i64 - d.abs()) as f64 * diff * diff;
    }
    Ok((acc / nf).sqrt())
}
