//! Parameter sweeps over (f_d, SNR) grids, CSV output and the figure datasets.

use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::model::{ChannelParams, PsdModel};
use crate::quadrature::{QuadratureConfig, EULER_GAMMA};
use crate::rates::{evaluate_bound, BoundKind, BoundValue, EvalContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Units {
    Nat,
    Bit,
}

impl Units {
    pub fn id(&self) -> &'static str {
        match self {
            Units::Nat => "nat",
            Units::Bit => "bit",
        }
    }

    fn scale(&self) -> f64 {
        match self {
            Units::Nat => 1.0,
            Units::Bit => std::f64::consts::LOG2_E,
        }
    }
}

impl FromStr for Units {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nat" => Ok(Units::Nat),
            "bit" => Ok(Units::Bit),
            _ => domain(format!("unknown units '{s}' (expected nat or bit)")),
        }
    }
}

/// PSD family instantiated per f_d: `rect`, `jakes` or `rc:<rolloff>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PsdFamily {
    Rect,
    Jakes,
    RaisedCosine { rolloff: f64 },
}

impl PsdFamily {
    pub fn build(&self, f_d: f64) -> Result<PsdModel> {
        match *self {
            PsdFamily::Rect => PsdModel::rectangular(f_d, 1.0),
            PsdFamily::Jakes => PsdModel::jakes(f_d, 1.0),
            PsdFamily::RaisedCosine { rolloff } => PsdModel::raised_cosine(f_d, rolloff, 1.0),
        }
    }

    pub fn id(&self) -> String {
        match self {
            PsdFamily::Rect => "rect".into(),
            PsdFamily::Jakes => "jakes".into(),
            PsdFamily::RaisedCosine { rolloff } => format!("rc:{rolloff}"),
        }
    }
}

impl FromStr for PsdFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rect" => Ok(PsdFamily::Rect),
            "jakes" => Ok(PsdFamily::Jakes),
            _ => match s.strip_prefix("rc:").map(str::parse::<f64>) {
                Some(Ok(r)) if (0.0..=1.0).contains(&r) => Ok(PsdFamily::RaisedCosine { rolloff: r }),
                _ => domain(format!("unknown PSD '{s}' (expected rect, jakes or rc:<rolloff in [0,1]>)")),
            },
        }
    }
}

/// Parses `lo:hi:step` (inclusive) or a comma-separated list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| Error::Domain(format!("not a number: '{t}'")));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let (lo, hi, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(step > 0.0) || hi < lo {
            return domain(format!("bad range '{s}'"));
        }
        let n = ((hi - lo) / step + 1e-9).floor() as usize;
        return Ok((0..=n).map(|k| lo + k as f64 * step).collect());
    }
    let v = s.split(',').map(num).collect::<Result<Vec<_>>>()?;
    if v.is_empty() {
        return domain("empty grid");
    }
    Ok(v)
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub psd: PsdFamily,
    pub f_d: Vec<f64>,
    pub snr_db: Vec<f64>,
    pub beta: f64,
    pub pilot_spacing: Option<usize>,
    pub bounds: Vec<BoundKind>,
    pub units: Units,
    pub seed: u64,
    pub mc_samples: usize,
    pub cm_points: usize,
}

impl SweepSpec {
    pub fn new(psd: PsdFamily, f_d: Vec<f64>, snr_db: Vec<f64>, bounds: Vec<BoundKind>) -> Self {
        SweepSpec {
            psd,
            f_d,
            snr_db,
            beta: 1.0,
            pilot_spacing: None,
            bounds,
            units: Units::Nat,
            seed: QuadratureConfig::default().seed,
            mc_samples: 20_000,
            cm_points: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub psd: String,
    pub f_d: f64,
    pub snr_db: f64,
    pub rho: f64,
    pub beta: f64,
    /// One entry per requested bound; `None` when not applicable.
    pub cells: Vec<Option<BoundValue>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub meta: Vec<String>,
    pub bounds: Vec<BoundKind>,
    pub units: Units,
    pub rows: Vec<SweepRow>,
    /// Constant reference columns appended to every row.
    pub extras: Vec<(String, f64)>,
}

fn has_alpha(k: BoundKind) -> bool {
    matches!(k, BoundKind::UpperPeak | BoundKind::UpperPredPeak | BoundKind::SethuramanUpper)
}

fn has_gamma(k: BoundKind) -> bool {
    matches!(k, BoundKind::LowerCmTs | BoundKind::SethuramanLowerTs)
}

fn has_spacing(k: BoundKind) -> bool {
    matches!(k, BoundKind::SdLower | BoundKind::SdUpper)
}

// 17 significant digits: enough to round-trip any f64.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

impl SweepResult {
    /// Column names; a deterministic function of the bound list.
    pub fn header(&self) -> Vec<String> {
        let mut h: Vec<String> = ["psd", "f_d", "snr_db", "rho", "beta", "units"].iter().map(|s| s.to_string()).collect();
        for k in &self.bounds {
            let id = k.id();
            h.push(id.to_string());
            h.push(format!("{id}_clamped"));
            if k.is_monte_carlo() {
                h.push(format!("{id}_stderr"));
            }
            if has_alpha(*k) {
                h.push(format!("{id}_alpha"));
            }
            if has_gamma(*k) {
                h.push(format!("{id}_gamma"));
            }
            if has_spacing(*k) {
                h.push(format!("{id}_pilot_spacing"));
            }
        }
        h.extend(self.extras.iter().map(|(n, _)| n.clone()));
        h
    }

    fn row_cells(&self, r: &SweepRow) -> Vec<String> {
        let s = self.units.scale();
        let mut out = vec![r.psd.clone(), num(r.f_d), num(r.snr_db), num(r.rho), num(r.beta), self.units.id().to_string()];
        for (k, cell) in self.bounds.iter().zip(&r.cells) {
            match cell {
                Some(v) => {
                    out.push(num(v.value * s));
                    out.push(v.clamped.to_string());
                    if k.is_monte_carlo() {
                        out.push(v.stderr.map(|e| num(e * s)).unwrap_or_default());
                    }
                    if has_alpha(*k) {
                        out.push(num(v.alpha_used));
                    }
                    if has_gamma(*k) {
                        out.push(v.argmax.map(num).unwrap_or_default());
                    }
                    if has_spacing(*k) {
                        out.push(v.argmax.map(|l| format!("{}", l as usize)).unwrap_or_default());
                    }
                }
                None => {
                    let width = 2
                        + k.is_monte_carlo() as usize
                        + has_alpha(*k) as usize
                        + has_gamma(*k) as usize
                        + has_spacing(*k) as usize;
                    out.extend(std::iter::repeat_n(String::new(), width));
                }
            }
        }
        out.extend(self.extras.iter().map(|(_, v)| num(v * s)));
        out
    }

    pub fn to_csv(&self) -> String {
        let mut o = String::new();
        for m in &self.meta {
            let _ = writeln!(o, "# {m}");
        }
        let _ = writeln!(o, "{}", self.header().join(","));
        for r in &self.rows {
            let _ = writeln!(o, "{}", self.row_cells(r).join(","));
        }
        o
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }

    fn append(&mut self, other: SweepResult) -> Result<()> {
        if other.bounds != self.bounds {
            return domain("cannot merge sweeps with different bound columns");
        }
        self.rows.extend(other.rows);
        Ok(())
    }
}

/// Evaluates every requested bound on the f_d × SNR grid (f_d-major).
/// Grid points run in parallel; rows come back in grid order.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    if spec.f_d.is_empty() || spec.snr_db.is_empty() {
        return domain("empty f_d or SNR grid");
    }
    if spec.bounds.is_empty() {
        return domain("no bounds requested");
    }
    let cfg = QuadratureConfig::default().with_samples(spec.mc_samples).with_seed(spec.seed);
    let contexts = spec
        .f_d
        .iter()
        .map(|&f| {
            let mut ctx = EvalContext::new(spec.psd.build(f)?).with_beta(spec.beta)?;
            ctx.pilot_spacing = spec.pilot_spacing;
            ctx.cm_points = spec.cm_points;
            ctx.cfg = cfg.clone();
            Ok(ctx)
        })
        .collect::<Result<Vec<_>>>()?;
    let grid: Vec<(usize, f64)> = (0..spec.f_d.len()).flat_map(|i| spec.snr_db.iter().map(move |&s| (i, s))).collect();
    let rows = grid
        .par_iter()
        .map(|&(i, snr_db)| {
            let f_d = spec.f_d[i];
            let params = ChannelParams::from_snr_db(snr_db, f_d)?;
            let cells = spec
                .bounds
                .iter()
                .map(|&k| evaluate_bound(k, &params, &contexts[i]))
                .collect::<Result<Vec<_>>>()?;
            Ok(SweepRow { psd: spec.psd.id(), f_d, snr_db, rho: params.rho(), beta: spec.beta, cells })
        })
        .collect::<Result<Vec<_>>>()?;
    let meta = vec![
        format!("rayleigh-bounds {}", env!("CARGO_PKG_VERSION")),
        format!("psd={} beta={} pilot_spacing={}", spec.psd.id(), spec.beta, spec.pilot_spacing.map_or("best".into(), |l| l.to_string())),
        format!("seed={} mc_samples={} cm_points={}", spec.seed, spec.mc_samples, spec.cm_points),
        format!("units={}", spec.units.id()),
    ];
    Ok(SweepResult { meta, bounds: spec.bounds.clone(), units: spec.units, rows, extras: vec![] })
}

/// Knobs shared by the figure datasets.
#[derive(Debug, Clone)]
pub struct FigureOptions {
    pub seed: u64,
    pub mc_samples: usize,
    pub cm_points: usize,
    /// Defaults to bits for figures 1–6 and nats for figure 7.
    pub units: Option<Units>,
}

impl Default for FigureOptions {
    fn default() -> Self {
        FigureOptions { seed: QuadratureConfig::default().seed, mc_samples: 20_000, cm_points: 100, units: None }
    }
}

pub const FIGURES: std::ops::RangeInclusive<u8> = 1..=7;

/// f_d axis for the "over f_d" figures: dense near 0, then steps of 0.01.
pub fn doppler_axis() -> Vec<f64> {
    let mut v = vec![0.001, 0.002, 0.005];
    v.extend((1..=49).map(|k| k as f64 / 100.0));
    v
}

fn range(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n).map(|k| lo + k as f64 * step).collect()
}

/// Dataset of figure `n`:
/// 1 PG bounds vs f_d; 2 prediction-based PG bound vs f_d; 3 asymptotic
/// peak-capacity bounds vs SNR; 4 peak-constrained bounds for β = 2 vs SNR;
/// 5 peak/CM bounds vs f_d; 6 synchronized detection vs f_d; 7 entropy gaps vs SNR.
pub fn figure(n: u8, opts: &FigureOptions) -> Result<SweepResult> {
    use BoundKind::*;
    let base = |psd, f_d: Vec<f64>, snr: Vec<f64>, bounds: Vec<BoundKind>, default_units| {
        let mut s = SweepSpec::new(psd, f_d, snr, bounds);
        s.seed = opts.seed;
        s.mc_samples = opts.mc_samples;
        s.cm_points = opts.cm_points;
        s.units = opts.units.unwrap_or(default_units);
        s
    };
    let mut res = match n {
        1 => run_sweep(&base(PsdFamily::Rect, doppler_axis(), vec![0.0, 6.0, 12.0], vec![LowerPg, UpperPg], Units::Bit))?,
        2 => run_sweep(&base(PsdFamily::Rect, doppler_axis(), vec![0.0, 12.0], vec![LowerPg, UpperPg, UpperPredPg], Units::Bit))?,
        3 => run_sweep(&base(
            PsdFamily::Rect,
            vec![0.1, 0.3],
            range(0.0, 60.0, 1.0),
            vec![LowerPg, UpperPg, LapidothUpper, LapidothLower, Coherent],
            Units::Bit,
        ))?,
        4 => {
            let mut s = base(
                PsdFamily::Rect,
                vec![0.001, 0.01, 0.1],
                range(-10.0, 30.0, 2.0),
                vec![SethuramanUpper, UpperPredPeak, SethuramanLower, SethuramanLowerTs, Coherent],
                Units::Bit,
            );
            s.beta = 2.0;
            run_sweep(&s)?
        }
        5 => {
            let mut out: Option<SweepResult> = None;
            for beta in [1.0, 2.0, 4.0] {
                let mut s = base(PsdFamily::Rect, doppler_axis(), vec![0.0, 12.0], vec![UpperPg, UpperPeak, LowerCm], Units::Bit);
                s.beta = beta;
                let r = run_sweep(&s)?;
                match out.as_mut() {
                    Some(o) => o.append(r)?,
                    None => out = Some(r),
                }
            }
            let mut o = out.expect("three β values");
            o.meta[1] = "psd=rect beta=1,2,4".into();
            o
        }
        6 => run_sweep(&base(PsdFamily::Rect, doppler_axis(), vec![0.0, 6.0, 12.0], vec![LowerPg, UpperPg, SdLower, SdUpper], Units::Bit))?,
        7 => {
            let mut r = run_sweep(&base(PsdFamily::Rect, vec![0.1], range(-10.0, 40.0, 1.0), vec![GapHy, GapHyRefined], Units::Nat))?;
            r.extras.push(("euler_gamma".into(), EULER_GAMMA));
            r
        }
        _ => return domain(format!("figure must be 1–7, got {n}")),
    };
    res.meta.insert(1, format!("figure={n}"));
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("0:12:6").unwrap(), vec![0.0, 6.0, 12.0]);
        assert_eq!(parse_grid("0.1,0.2").unwrap(), vec![0.1, 0.2]);
        assert!(parse_grid("1:0:1").is_err());
        assert!(parse_grid("a").is_err());
        assert_eq!("rc:0.2".parse::<PsdFamily>().unwrap(), PsdFamily::RaisedCosine { rolloff: 0.2 });
        assert!("rc:x".parse::<PsdFamily>().is_err());
    }

    #[test]
    fn fig1_style_sweep() {
        let spec = SweepSpec::new(PsdFamily::Rect, vec![0.1], vec![0.0, 6.0, 12.0], vec![BoundKind::LowerPg, BoundKind::UpperPg]);
        let r = run_sweep(&spec).unwrap();
        assert_eq!(r.rows.len(), 3);
        let csv = r.to_csv();
        let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
        assert_eq!(header, "psd,f_d,snr_db,rho,beta,units,lower_pg,lower_pg_clamped,upper_pg,upper_pg_clamped");
        assert_eq!(csv, run_sweep(&spec).unwrap().to_csv());
    }

    #[test]
    fn bits_are_nats_over_ln2() {
        let mut spec = SweepSpec::new(PsdFamily::Rect, vec![0.1], vec![0.0], vec![BoundKind::LowerPg]);
        let nat = run_sweep(&spec).unwrap();
        spec.units = Units::Bit;
        let bit = run_sweep(&spec).unwrap();
        let cell = |r: &SweepResult| r.row_cells(&r.rows[0])[6].parse::<f64>().unwrap();
        assert!((cell(&bit) - cell(&nat) / std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn not_applicable_cells_are_empty() {
        let spec = SweepSpec::new(PsdFamily::Jakes, vec![0.1], vec![0.0], vec![BoundKind::UpperPg, BoundKind::LapidothUpper]);
        let r = run_sweep(&spec).unwrap();
        let line = r.to_csv().lines().last().unwrap().to_string();
        assert!(line.ends_with(",,,,"), "{line}");
    }
}
