use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rayleigh_bounds::prediction::{pred_error_cm_infinite, pred_error_finite, PowerProfile, ToeplitzCov};
use rayleigh_bounds::rates::BoundKind;
use rayleigh_bounds::simulator::{gen_fading, gen_fading_cholesky, write_fade};
use rayleigh_bounds::sweep::{figure, parse_grid, run_sweep, FigureOptions, PsdFamily, SweepResult, SweepSpec, Units};
use rayleigh_bounds::verify::{run_verify, Level};
use rayleigh_bounds::Error;

/// Bounds on the achievable rate of stationary Rayleigh flat-fading channels.
#[derive(Parser)]
#[command(name = "rayleigh-bounds", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate bounds on an f_d × SNR grid and print CSV.
    Sweep(SweepArgs),
    /// Emit the dataset of one figure (1–7) as CSV.
    Figure(FigureArgs),
    /// Run the verification suite; exit 1 if any check fails.
    Verify(VerifyArgs),
    /// One-step prediction error for a finite past.
    Predict(PredictArgs),
    /// Generate one fading realization and write it as a FADE dump.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct Common {
    /// nat or bit
    #[arg(long)]
    units: Option<String>,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    /// Monte Carlo samples per bound evaluation.
    #[arg(long, default_value_t = 20_000)]
    mc_samples: usize,
    /// Constellation size of constant-modulus inputs.
    #[arg(long, default_value_t = 100)]
    cm_points: usize,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// rect, jakes or rc:<rolloff>
    #[arg(long, default_value = "rect")]
    psd: String,
    /// Comma list or lo:hi:step.
    #[arg(long)]
    fd: String,
    /// Comma list or lo:hi:step, in dB.
    #[arg(long)]
    snr_db: String,
    /// Nominal peak-to-average power ratio.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Fixed pilot spacing for the SD bounds (default: best admissible).
    #[arg(long)]
    pilot_spacing: Option<usize>,
    /// Comma-separated bound identifiers.
    #[arg(long, default_value = "lower_pg,upper_pg")]
    bounds: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct FigureArgs {
    n: u8,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    /// fast or full
    #[arg(long, default_value = "fast")]
    level: String,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long, default_value = "rect")]
    psd: String,
    #[arg(long)]
    fd: f64,
    /// Past powers z_1..z_{N−1}, comma-separated.
    #[arg(long, conflicts_with_all = ["n", "power"])]
    powers: Option<String>,
    /// Horizon N for constant powers.
    #[arg(long, requires = "power")]
    n: Option<usize>,
    /// Constant past power.
    #[arg(long, requires = "n")]
    power: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    sigma_n2: f64,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, default_value = "rect")]
    psd: String,
    #[arg(long)]
    fd: f64,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    /// Exact Cholesky synthesis (N ≤ 2048) instead of circulant embedding.
    #[arg(long)]
    cholesky: bool,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Usage(String),
    Runtime(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::LengthMismatch { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn units(s: &Option<String>) -> Result<Option<Units>, Failure> {
    Ok(match s {
        Some(u) => Some(u.parse()?),
        None => None,
    })
}

fn emit(mut res: SweepResult, common: &Common) -> Result<(), Failure> {
    let flags: Vec<String> = std::env::args().skip(1).collect();
    res.meta.insert(1, format!("flags: {}", flags.join(" ")));
    let mut w = sink(&common.out)?;
    res.write_csv(&mut w)?;
    w.flush()?;
    Ok(())
}

fn sweep(a: SweepArgs) -> Result<(), Failure> {
    let bounds = a
        .bounds
        .split(',')
        .map(|s| BoundKind::from_id(s.trim()).ok_or_else(|| Failure::Usage(format!("unknown bound '{s}'"))))
        .collect::<Result<Vec<_>, _>>()?;
    let psd: PsdFamily = a.psd.parse()?;
    let mut spec = SweepSpec::new(psd, parse_grid(&a.fd)?, parse_grid(&a.snr_db)?, bounds);
    spec.beta = a.beta;
    spec.pilot_spacing = a.pilot_spacing;
    spec.units = units(&a.common.units)?.unwrap_or(Units::Nat);
    spec.seed = a.common.seed;
    spec.mc_samples = a.common.mc_samples;
    spec.cm_points = a.common.cm_points;
    emit(run_sweep(&spec)?, &a.common)
}

fn fig(a: FigureArgs) -> Result<(), Failure> {
    let opts = FigureOptions {
        seed: a.common.seed,
        mc_samples: a.common.mc_samples,
        cm_points: a.common.cm_points,
        units: units(&a.common.units)?,
    };
    emit(figure(a.n, &opts)?, &a.common)
}

fn verify(a: VerifyArgs) -> Result<(), Failure> {
    let level = match a.level.as_str() {
        "fast" => Level::Fast,
        "full" => Level::Full,
        l => return Err(Failure::Usage(format!("unknown level '{l}' (expected fast or full)"))),
    };
    let report = run_verify(level, a.seed);
    print!("{}", report.render());
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn predict(a: PredictArgs) -> Result<(), Failure> {
    let model = a.psd.parse::<PsdFamily>()?.build(a.fd)?;
    let z = match (&a.powers, a.n, a.power) {
        (Some(p), _, _) => PowerProfile::new(parse_grid(p)?)?,
        (None, Some(n), Some(p)) if n >= 1 => PowerProfile::constant(n - 1, p)?,
        _ => return Err(Failure::Usage("give --powers or both --n and --power".into())),
    };
    let n = z.len() + 1;
    let v = pred_error_finite(&ToeplitzCov::from_model(&model, n), &z, a.sigma_n2)?;
    println!("model={} N={n} sigma_n2={} pred_error={v:.16e}", model.describe(), a.sigma_n2);
    if let Some(p) = a.power {
        let inf = pred_error_cm_infinite(&model, p, a.sigma_n2)?;
        println!("pred_error_infinite={inf:.16e}");
    }
    Ok(())
}

fn simulate(a: SimulateArgs) -> Result<(), Failure> {
    let model = a.psd.parse::<PsdFamily>()?.build(a.fd)?;
    let real = if a.cholesky { gen_fading_cholesky(&model, a.n, a.seed)? } else { gen_fading(&model, a.n, a.seed)? };
    let mut w = BufWriter::new(File::create(&a.out)?);
    write_fade(&mut w, &real)?;
    w.flush()?;
    let power = real.h.iter().map(|c| c.norm_sqr()).sum::<f64>() / real.h.len() as f64;
    println!(
        "wrote {} samples of {} to {} (embedding {}, floored mass {:.3e}, mean power {power:.6})",
        real.h.len(),
        model.describe(),
        a.out.display(),
        real.embedding,
        real.floored_mass
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.cmd {
        Cmd::Sweep(a) => sweep(a),
        Cmd::Figure(a) => fig(a),
        Cmd::Verify(a) => verify(a),
        Cmd::Predict(a) => predict(a),
        Cmd::Simulate(a) => simulate(a),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
