//! Synchronized detection with a solely pilot-based channel estimate.

use crate::error::{domain, Result};
use crate::model::{ChannelParams, PsdModel};
use crate::quadrature::g_unchecked;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdBounds {
    pub pilot_spacing: usize,
    pub sigma2_pil: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Bounds for every admissible pilot spacing, with the index of the one
/// maximizing the lower bound.
#[derive(Debug, Clone, PartialEq)]
pub struct SdTable {
    pub rows: Vec<SdBounds>,
    pub best: usize,
}

/// Admissible spacings: 2 ≤ L < ⌊1/(2 f_max)⌋ with f_max the PSD support edge.
pub fn admissible_spacings(model: &PsdModel) -> std::ops::Range<usize> {
    let cap = (0.5 / model.support_edge()).floor() as usize;
    2..cap.max(2)
}

pub fn sd_rate_bounds(params: &ChannelParams, model: &PsdModel, pilot_spacing: usize) -> Result<SdBounds> {
    if !admissible_spacings(model).contains(&pilot_spacing) {
        return domain(format!(
            "pilot spacing {pilot_spacing} violates 2 ≤ L < floor(1/(2·{}))",
            model.support_edge()
        ));
    }
    let rho = params.rho();
    let l = pilot_spacing as f64;
    let sh = model.sigma_h2();
    let k = rho / l / sh;
    let sigma2_pil = model.spectral_integral(|s| s / (k * s + 1.0))?;
    let e = sigma2_pil / sh;
    let pre = (l - 1.0) / l;
    let lower = pre * g_unchecked(rho * (1.0 - e) / (1.0 + rho * e));
    let upper = lower + pre * ((rho * e).ln_1p() - g_unchecked(rho * e)).max(0.0);
    Ok(SdBounds { pilot_spacing, sigma2_pil, lower, upper })
}

/// Exhaustive search over all admissible pilot spacings.
pub fn sd_optimal(params: &ChannelParams, model: &PsdModel) -> Result<SdTable> {
    let rows = admissible_spacings(model)
        .map(|l| sd_rate_bounds(params, model, l))
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return domain(format!("no admissible pilot spacing for support edge {}", model.support_edge()));
    }
    let mut best = 0;
    for (i, r) in rows.iter().enumerate() {
        if r.lower > rows[best].lower {
            best = i;
        }
    }
    Ok(SdTable { rows, best })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rect_estimation_error_closed_form() {
        let m = PsdModel::rectangular(0.05, 1.0).unwrap();
        let p = ChannelParams::normalized(10.0, 0.05).unwrap();
        for l in 2..10 {
            let b = sd_rate_bounds(&p, &m, l).unwrap();
            let want = 1.0 / (1.0 + 10.0 / (2.0 * 0.05 * l as f64));
            assert!((b.sigma2_pil - want).abs() < 1e-12);
            assert!(b.lower <= b.upper);
        }
        assert!(sd_rate_bounds(&p, &m, 10).is_err());
        assert!(sd_rate_bounds(&p, &m, 1).is_err());
    }

    #[test]
    fn optimal_spacing_is_argmax() {
        let m = PsdModel::rectangular(0.05, 1.0).unwrap();
        let p = ChannelParams::normalized(10.0, 0.05).unwrap();
        let t = sd_optimal(&p, &m).unwrap();
        assert_eq!(t.rows.len(), 8);
        let top = t.rows.iter().map(|r| r.lower).fold(f64::MIN, f64::max);
        assert_eq!(t.rows[t.best].lower, top);
    }

    #[test]
    fn high_snr_error_vanishes() {
        let m = PsdModel::rectangular(0.05, 1.0).unwrap();
        let p = ChannelParams::normalized(1e8, 0.05).unwrap();
        let b = sd_rate_bounds(&p, &m, 4).unwrap();
        assert!(b.sigma2_pil < 1e-7);
        // ρσ²_pil → 2f_d L, so the lower bound grows with pre-log (L−1)/L
        let a = sd_rate_bounds(&ChannelParams::normalized(1e6, 0.05).unwrap(), &m, 4).unwrap();
        let slope = (b.lower - a.lower) / 100f64.ln();
        assert!((slope - 0.75).abs() < 1e-3, "{slope}");
    }

    #[test]
    fn fast_fading_has_no_spacing() {
        let m = PsdModel::rectangular(0.2, 1.0).unwrap();
        let p = ChannelParams::normalized(1.0, 0.2).unwrap();
        assert!(sd_optimal(&p, &m).is_err());
    }
}
