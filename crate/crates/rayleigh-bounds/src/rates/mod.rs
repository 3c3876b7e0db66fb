//! Achievable-rate and capacity bounds.
//!
//! Lower bounds are clamped at 0 and upper bounds at the coherent capacity;
//! the unclamped value is kept alongside because gap computations are
//! defined on it.

pub(crate) mod cm;
mod lapidoth;
mod peak;
mod pilot;

pub use cm::{coherent_mi_cm, psk_constellation, rate_lower_cm, rate_lower_cm_timeshare};
pub use lapidoth::{eps2_pred, lapidoth_asymptotes, LapidothAsymptotes};
pub use peak::{
    alpha_opt_conditions, alpha_opt_rect, iid_low_snr_conditions, rate_upper_peak_rect,
    rate_upper_peak_rect_with_alpha, AlphaOptConditions, IidConditions,
};
pub(crate) use peak::alpha_opt_from_penalty;
pub use pilot::{admissible_spacings, sd_optimal, sd_rate_bounds, SdBounds, SdTable};

use crate::error::{domain, Error, Result};
use crate::model::{ChannelParams, PsdModel};
use crate::prediction;
use crate::quadrature::{g_unchecked, szego_log_integral, QuadratureConfig};

/// Identifiers of every bound the library evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundKind {
    Coherent,
    LowerPg,
    UpperPg,
    GapPg,
    UpperPeak,
    LowerCm,
    LowerCmTs,
    UpperPredPg,
    UpperPredPeak,
    SethuramanUpper,
    SethuramanLower,
    SethuramanLowerTs,
    LapidothUpper,
    LapidothLower,
    SdLower,
    SdUpper,
    GapHy,
    GapHyRefined,
}

impl BoundKind {
    pub const ALL: [BoundKind; 18] = [
        BoundKind::Coherent,
        BoundKind::LowerPg,
        BoundKind::UpperPg,
        BoundKind::GapPg,
        BoundKind::UpperPeak,
        BoundKind::LowerCm,
        BoundKind::LowerCmTs,
        BoundKind::UpperPredPg,
        BoundKind::UpperPredPeak,
        BoundKind::SethuramanUpper,
        BoundKind::SethuramanLower,
        BoundKind::SethuramanLowerTs,
        BoundKind::LapidothUpper,
        BoundKind::LapidothLower,
        BoundKind::SdLower,
        BoundKind::SdUpper,
        BoundKind::GapHy,
        BoundKind::GapHyRefined,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            BoundKind::Coherent => "coherent",
            BoundKind::LowerPg => "lower_pg",
            BoundKind::UpperPg => "upper_pg",
            BoundKind::GapPg => "gap_pg",
            BoundKind::UpperPeak => "upper_peak",
            BoundKind::LowerCm => "lower_cm",
            BoundKind::LowerCmTs => "lower_cm_ts",
            BoundKind::UpperPredPg => "upper_pred_pg",
            BoundKind::UpperPredPeak => "upper_pred_peak",
            BoundKind::SethuramanUpper => "sethuraman_upper",
            BoundKind::SethuramanLower => "sethuraman_lower",
            BoundKind::SethuramanLowerTs => "sethuraman_lower_ts",
            BoundKind::LapidothUpper => "lapidoth_upper",
            BoundKind::LapidothLower => "lapidoth_lower",
            BoundKind::SdLower => "sd_lower",
            BoundKind::SdUpper => "sd_upper",
            BoundKind::GapHy => "gap_hy",
            BoundKind::GapHyRefined => "gap_hy_refined",
        }
    }

    pub fn from_id(s: &str) -> Option<BoundKind> {
        BoundKind::ALL.iter().copied().find(|k| k.id() == s)
    }

    /// Estimated by Monte Carlo (values carry a standard error).
    pub fn is_monte_carlo(&self) -> bool {
        matches!(
            self,
            BoundKind::LowerCm | BoundKind::LowerCmTs | BoundKind::SethuramanLower | BoundKind::SethuramanLowerTs
        )
    }

    /// Meaningful only for a rectangular PSD.
    pub fn needs_rect(&self) -> bool {
        matches!(self, BoundKind::UpperPg | BoundKind::GapPg | BoundKind::UpperPeak)
    }
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

/// A bound in nats per channel use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundValue {
    pub kind: BoundKind,
    pub value: f64,
    /// Value before the 0 / coherent-capacity clamps.
    pub unclamped: f64,
    /// True when a clamp changed the value.
    pub clamped: bool,
    /// Fraction of the average power actually used (1 unless optimized).
    pub alpha_used: f64,
    /// Maximizing argument where one was searched (γ for time-sharing, L for pilots).
    pub argmax: Option<f64>,
    /// Monte Carlo standard error, if estimated.
    pub stderr: Option<f64>,
}

impl BoundValue {
    pub fn exact(kind: BoundKind, value: f64) -> Self {
        BoundValue { kind, value, unclamped: value, clamped: false, alpha_used: 1.0, argmax: None, stderr: None }
    }

    pub(crate) fn lower(kind: BoundKind, unclamped: f64) -> Self {
        let value = unclamped.max(0.0);
        BoundValue { clamped: value != unclamped, value, ..Self::exact(kind, unclamped) }
    }

    pub(crate) fn upper(kind: BoundKind, unclamped: f64, rho: f64) -> Self {
        let cap = g_unchecked(rho);
        let value = unclamped.min(cap).max(0.0);
        BoundValue { clamped: value != unclamped, value, ..Self::exact(kind, unclamped) }
    }

    pub(crate) fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha_used = alpha;
        self
    }

    pub(crate) fn with_stderr(mut self, s: f64) -> Self {
        self.stderr = Some(s);
        self
    }

    pub(crate) fn with_argmax(mut self, x: f64) -> Self {
        self.argmax = Some(x);
        self
    }
}

/// Nominal peak-to-average power ratio β = P_peak/σ_x².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakConstraint {
    beta: f64,
}

impl PeakConstraint {
    pub fn new(beta: f64) -> Result<Self> {
        if beta >= 1.0 && beta.is_finite() {
            Ok(PeakConstraint { beta })
        } else {
            domain(format!("peak-to-average ratio must be ≥ 1, got {beta}"))
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Capacity with perfect channel knowledge, g(ρ).
pub fn coherent_capacity(rho: f64) -> Result<BoundValue> {
    if !(rho >= 0.0) {
        return domain(format!("rho must be nonnegative, got {rho}"));
    }
    Ok(BoundValue::exact(BoundKind::Coherent, g_unchecked(rho)))
}

/// max{0, g(ρ) − ∫ log(1 + ρ S_h/σ_h²) df}, achievable with i.i.d. PG inputs.
pub fn rate_lower_pg(params: &ChannelParams, model: &PsdModel) -> Result<BoundValue> {
    let rho = params.rho();
    let s = szego_log_integral(model, rho)?;
    Ok(BoundValue::lower(BoundKind::LowerPg, g_unchecked(rho) - s))
}

/// min{log(1+ρ) − 2f_d g(ρ/2f_d), g(ρ)} for a rectangular PSD.
pub fn rate_upper_pg_rect(params: &ChannelParams) -> BoundValue {
    let rho = params.rho();
    let f = params.f_d;
    BoundValue::upper(BoundKind::UpperPg, rho.ln_1p() - 2.0 * f * g_unchecked(rho / (2.0 * f)), rho)
}

/// Unclamped upper − unclamped lower, rectangular PSD.
pub fn rate_gap_pg_rect(params: &ChannelParams) -> f64 {
    let (dy, dyx) = crate::entropy::entropy_gaps(params);
    dy + dyx
}

/// Everything besides the channel that a bound evaluation may need.
#[derive(Debug, Clone)]
pub struct EvalContext {
    pub model: PsdModel,
    pub peak: PeakConstraint,
    pub cm_points: usize,
    /// Fixed pilot spacing; `None` picks the best admissible one.
    pub pilot_spacing: Option<usize>,
    pub cfg: QuadratureConfig,
}

impl EvalContext {
    pub fn new(model: PsdModel) -> Self {
        EvalContext {
            model,
            peak: PeakConstraint { beta: 1.0 },
            cm_points: 100,
            pilot_spacing: None,
            cfg: QuadratureConfig::default(),
        }
    }

    pub fn with_beta(mut self, beta: f64) -> Result<Self> {
        self.peak = PeakConstraint::new(beta)?;
        Ok(self)
    }
}

fn is_rect(model: &PsdModel) -> bool {
    matches!(model.shape(), crate::model::PsdShape::Rectangular { .. })
}

/// Evaluates one bound. `Ok(None)` marks combinations where the bound is
/// not defined (e.g. a rectangular-only bound on another PSD, or the
/// log-log asymptote at ρ ≤ 1).
pub fn evaluate_bound(kind: BoundKind, params: &ChannelParams, ctx: &EvalContext) -> Result<Option<BoundValue>> {
    let rho = params.rho();
    let m = &ctx.model;
    if kind.needs_rect() && !is_rect(m) {
        return Ok(None);
    }
    let v = match kind {
        BoundKind::Coherent => coherent_capacity(rho)?,
        BoundKind::LowerPg => rate_lower_pg(params, m)?,
        BoundKind::UpperPg => rate_upper_pg_rect(params),
        BoundKind::GapPg => BoundValue::exact(kind, rate_gap_pg_rect(params)),
        BoundKind::UpperPeak => rate_upper_peak_rect(params, &ctx.peak),
        BoundKind::LowerCm => rate_lower_cm(params, m, ctx.cm_points, &ctx.cfg)?,
        BoundKind::LowerCmTs => rate_lower_cm_timeshare(params, m, &ctx.peak, ctx.cm_points, &ctx.cfg)?,
        BoundKind::UpperPredPg => prediction::rate_upper_pred_pg(params, m)?,
        BoundKind::UpperPredPeak => prediction::rate_upper_pred_peak(params, m, &ctx.peak)?,
        BoundKind::SethuramanUpper => prediction::sethuraman_upper(params, m, &ctx.peak)?,
        BoundKind::SethuramanLower => prediction::sethuraman_lower(params, m, &ctx.peak, ctx.cm_points, false, &ctx.cfg)?,
        BoundKind::SethuramanLowerTs => prediction::sethuraman_lower(params, m, &ctx.peak, ctx.cm_points, true, &ctx.cfg)?,
        BoundKind::LapidothUpper => match lapidoth_asymptotes(params, m)?.upper {
            Some(u) => BoundValue::exact(kind, u),
            None => return Ok(None),
        },
        BoundKind::LapidothLower => BoundValue::exact(kind, lapidoth_asymptotes(params, m)?.lower),
        BoundKind::SdLower | BoundKind::SdUpper => {
            let sd = match ctx.pilot_spacing {
                Some(l) => sd_rate_bounds(params, m, l),
                None => sd_optimal(params, m).map(|t| t.rows[t.best]),
            };
            let sd = match sd {
                Ok(sd) => sd,
                Err(Error::Domain(_)) => return Ok(None),
                Err(e) => return Err(e),
            };
            let x = if kind == BoundKind::SdLower { sd.lower } else { sd.upper };
            BoundValue::exact(kind, x).with_argmax(sd.pilot_spacing as f64)
        }
        BoundKind::GapHy => BoundValue::exact(kind, crate::entropy::entropy_gaps(params).0),
        BoundKind::GapHyRefined => BoundValue::exact(kind, crate::entropy::refined_gap(params, &ctx.cfg)?),
    };
    Ok(Some(v))
}

/// Least-squares slope of a bound against log ρ on a 2 dB grid over
/// `window` (dB).
pub fn prelog_estimate(kind: BoundKind, params: &ChannelParams, ctx: &EvalContext, window: (f64, f64)) -> Result<f64> {
    let (lo, hi) = window;
    if !(hi > lo) {
        return domain(format!("empty SNR window [{lo}, {hi}]"));
    }
    let steps = ((hi - lo) / 2.0).round() as usize;
    let mut xs = Vec::with_capacity(steps + 1);
    let mut ys = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let db = lo + (hi - lo) * k as f64 / steps.max(1) as f64;
        let rho = 10f64.powf(db / 10.0);
        let p = params.with_rho(rho)?;
        let v = evaluate_bound(kind, &p, ctx)?
            .ok_or_else(|| Error::Domain(format!("{kind} is not defined for this model")))?;
        xs.push(rho.ln());
        ys.push(v.value);
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

// Time-share searches over Monte Carlo objectives: the estimate is only
// resolved to its standard error, so a coarse search suffices.
pub(crate) const MC_SCAN: usize = 16;
pub(crate) const MC_TOL: f64 = 1e-4;

/// Maximizes f on [lo, hi]: a 64-point scan, then golden-section search
/// around the best scan point to 1e−6.
pub fn maximize_scalar(f: impl Fn(f64) -> Result<f64>, lo: f64, hi: f64) -> Result<(f64, f64)> {
    maximize_scalar_with(f, lo, hi, 64, 1e-6)
}

/// [`maximize_scalar`] with an explicit scan size and bracket tolerance.
pub fn maximize_scalar_with(f: impl Fn(f64) -> Result<f64>, lo: f64, hi: f64, scan: usize, tol: f64) -> Result<(f64, f64)> {
    if hi <= lo {
        return Ok((lo, f(lo)?));
    }
    let n = scan.max(2);
    let h = (hi - lo) / (n - 1) as f64;
    let mut best = (lo, f(lo)?);
    for k in 1..n {
        let x = if k == n - 1 { hi } else { lo + k as f64 * h };
        let v = f(x)?;
        if v > best.1 {
            best = (x, v);
        }
    }
    let mut a = (best.0 - h).max(lo);
    let mut b = (best.0 + h).min(hi);
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    for (x, v) in [(c, fc), (d, fd)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect(f_d: f64) -> PsdModel {
        PsdModel::rectangular(f_d, 1.0).unwrap()
    }

    #[test]
    fn coherent_values() {
        assert_eq!(coherent_capacity(0.0).unwrap().value, 0.0);
        let c = coherent_capacity(1.0).unwrap().value;
        assert!((c - 0.596_347_362_323_194_6).abs() < 1e-14);
        assert!((c / std::f64::consts::LN_2 - 0.860_347_382_270_886_8).abs() < 1e-12);
        assert!(coherent_capacity(10.0).unwrap().value > c);
    }

    #[test]
    fn pg_spot_values() {
        let p = ChannelParams::normalized(1.0, 0.1).unwrap();
        let lo = rate_lower_pg(&p, &rect(0.1)).unwrap();
        assert!((lo.value - 0.237_995_468_477_583_6).abs() < 1e-12);
        assert!(!lo.clamped);
        let up = rate_upper_pg_rect(&p);
        assert!((up.value - 0.394_477_431_173_497_4).abs() < 1e-12);
        assert!((rate_gap_pg_rect(&p) - (up.unclamped - lo.unclamped)).abs() < 1e-14);
        let z = ChannelParams::normalized(0.0, 0.1).unwrap();
        assert_eq!(rate_upper_pg_rect(&z).value, 0.0);
        assert_eq!(rate_gap_pg_rect(&z), 0.0);
    }

    #[test]
    fn lower_bound_clamps() {
        let p = ChannelParams::normalized(0.1, 0.49).unwrap();
        let lo = rate_lower_pg(&p, &rect(0.49)).unwrap();
        assert!(lo.unclamped < 0.0);
        assert_eq!(lo.value, 0.0);
        assert!(lo.clamped);
    }

    #[test]
    fn tiny_doppler_approaches_coherent() {
        let p = ChannelParams::normalized(1.0, 1e-6).unwrap();
        let lo = rate_lower_pg(&p, &rect(1e-6)).unwrap().value;
        assert!((lo - coherent_capacity(1.0).unwrap().value).abs() < 1e-4);
    }

    #[test]
    fn large_snr_gap_limit() {
        let p = ChannelParams::normalized(1e6, 0.25).unwrap();
        assert!((rate_gap_pg_rect(&p) - 1.5 * crate::quadrature::EULER_GAMMA).abs() < 1e-3);
    }

    #[test]
    fn prelog_slopes() {
        let p = ChannelParams::normalized(1.0, 0.1).unwrap();
        let ctx = EvalContext::new(rect(0.1));
        let s = prelog_estimate(BoundKind::LowerPg, &p, &ctx, (60.0, 80.0)).unwrap();
        assert!((s - 0.8).abs() < 0.02, "{s}");
        let s = prelog_estimate(BoundKind::UpperPg, &p, &ctx, (60.0, 80.0)).unwrap();
        assert!((s - 0.8).abs() < 0.02, "{s}");
        let s = prelog_estimate(BoundKind::Coherent, &p, &ctx, (60.0, 80.0)).unwrap();
        assert!((s - 1.0).abs() < 0.02, "{s}");
    }

    #[test]
    fn kinds_round_trip() {
        for k in BoundKind::ALL {
            assert_eq!(BoundKind::from_id(k.id()), Some(k));
        }
        assert_eq!(BoundKind::from_id("nope"), None);
    }

    #[test]
    fn rect_only_bounds_are_not_applicable_elsewhere() {
        let p = ChannelParams::normalized(1.0, 0.1).unwrap();
        let ctx = EvalContext::new(PsdModel::jakes(0.1, 1.0).unwrap());
        assert_eq!(evaluate_bound(BoundKind::UpperPg, &p, &ctx).unwrap(), None);
        assert!(evaluate_bound(BoundKind::LowerPg, &p, &ctx).unwrap().is_some());
    }

    #[test]
    fn maximizer_finds_interior_peak() {
        let (x, v) = maximize_scalar(|x| Ok(-(x - 1.3).powi(2)), 1.0, 2.0).unwrap();
        assert!((x - 1.3).abs() < 1e-6 && v <= 0.0);
        let (x, _) = maximize_scalar(|x| Ok(-x), 1.0, 2.0).unwrap();
        assert_eq!(x, 1.0);
    }
}
