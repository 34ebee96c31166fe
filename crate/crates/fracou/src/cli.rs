//! Command-line runs: reproducible, scriptable wrappers around the library.
//!
//! Every run resolves its parameters (flags override the optional config
//! file, which overrides defaults), writes the resolved configuration next
//! to its outputs, and stages all files in a temporary directory first so a
//! failing run leaves nothing partial behind.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Field, Grid};
use crate::initial::InitialData;
use crate::kernel::{heat_kernel, tail_radius};
use crate::law::{sharp_bound, StableLaw};
use crate::mc::{empirical_density, simulate_ensemble};
use crate::ou::ou_kernel;
use crate::solver::{stationary_field, SolvePlan};
use crate::verify::{run_suite, Suite};

#[derive(Parser, Debug)]
#[command(
    name = "fracou",
    version,
    about = "Stable heat kernels, the linear-drift fractional Fokker-Planck \
             equation, and a Monte Carlo cross-validation suite"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate the heat kernel or the drift kernel over a lattice of points
    Kernel(KernelArgs),
    /// Solve the Cauchy problem and write field snapshots
    Solve(SolveArgs),
    /// Simulate a particle ensemble and write its histogram
    Simulate(SimulateArgs),
    /// Run the verification suite and write its report
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Output directory (created if missing)
    #[arg(long, env = "FRACOU_OUT_DIR", default_value = "fracou-out")]
    pub out_dir: PathBuf,
    /// JSON config file; flags take precedence over its entries
    #[arg(long)]
    pub config: Option<PathBuf>,
}

// ---------------------------------------------------------------------------
// kernel
// ---------------------------------------------------------------------------

#[derive(Args, Debug, Clone)]
pub struct KernelArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Evaluation time
    #[arg(long)]
    pub t: Option<f64>,
    /// Lattice of first-coordinate values, as lo:hi:count
    #[arg(long, allow_hyphen_values = true)]
    pub x_range: Option<String>,
    /// Drift-kernel mode: evaluate p(t, x, y) instead of the heat kernel
    #[arg(long)]
    pub ou: bool,
    /// Source point for the drift kernel (comma-separated coordinates)
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<String>,
    /// "kernel" emits values only; "both" adds the envelope and the ratio
    #[arg(long)]
    pub profile: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct KernelConfig {
    pub alpha: Option<f64>,
    pub dim: Option<usize>,
    pub t: Option<f64>,
    pub x_range: Option<String>,
    pub ou: Option<bool>,
    pub y: Option<Vec<f64>>,
    pub profile: Option<String>,
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
struct KernelResolved {
    command: &'static str,
    alpha: f64,
    dim: usize,
    t: f64,
    x_lo: f64,
    x_hi: f64,
    x_count: usize,
    ou: bool,
    y: Vec<f64>,
    profile: String,
    tol: f64,
    version: &'static str,
}

fn parse_range(spec: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!(
            "range must be lo:hi:count, got {spec:?}"
        )));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|e| Error::Parse(format!("range lo: {e}")))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|e| Error::Parse(format!("range hi: {e}")))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|e| Error::Parse(format!("range count: {e}")))?;
    if count < 2 || !(hi > lo) {
        return Err(Error::Parse(format!(
            "range needs hi > lo and count >= 2, got {spec:?}"
        )));
    }
    Ok((lo, hi, count))
}

fn parse_point(spec: &str) -> Result<Vec<f64>> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("point coordinate {s:?}: {e}")))
        })
        .collect()
}

fn load_config<T: serde::de::DeserializeOwned + Default>(path: &Option<PathBuf>) -> Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("config file: {e}")))
        }
    }
}

pub fn run_kernel(args: &KernelArgs) -> Result<()> {
    let file: KernelConfig = load_config(&args.common.config)?;
    let alpha = args
        .alpha
        .or(file.alpha)
        .ok_or_else(|| Error::Parse("missing --alpha".into()))?;
    let dim = args.dim.or(file.dim).unwrap_or(1);
    let t = args
        .t
        .or(file.t)
        .ok_or_else(|| Error::Parse("missing --t".into()))?;
    let range = match (&args.x_range, &file.x_range) {
        (Some(r), _) | (None, Some(r)) => parse_range(r)?,
        _ => return Err(Error::Parse("missing --x-range".into())),
    };
    let ou = args.ou || file.ou.unwrap_or(false);
    let y = match (&args.y, &file.y) {
        (Some(s), _) => parse_point(s)?,
        (None, Some(v)) => v.clone(),
        _ => vec![0.0; dim],
    };
    let profile = args
        .profile
        .clone()
        .or(file.profile)
        .unwrap_or_else(|| "kernel".to_string());
    if profile != "kernel" && profile != "both" {
        return Err(Error::Parse(format!(
            "--profile must be 'kernel' or 'both', got {profile:?}"
        )));
    }
    let law = StableLaw::new(alpha, dim)?;
    let tol = args
        .tol
        .or(file.tol)
        .unwrap_or_else(|| crate::kernel::default_tol(law));
    if y.len() != dim {
        return Err(Error::Parse(format!(
            "y has {} coordinates for dimension {dim}",
            y.len()
        )));
    }

    let (lo, hi, count) = range;
    let resolved = KernelResolved {
        command: "kernel",
        alpha,
        dim,
        t,
        x_lo: lo,
        x_hi: hi,
        x_count: count,
        ou,
        y: y.clone(),
        profile: profile.clone(),
        tol,
        version: env!("CARGO_PKG_VERSION"),
    };

    let mut csv = String::new();
    if ou {
        csv.push_str("x1,value\n");
    } else if profile == "both" {
        csv.push_str("x1,value,envelope,ratio\n");
    } else {
        csv.push_str("x1,value\n");
    }
    for i in 0..count {
        let x1 = lo + (hi - lo) * i as f64 / (count - 1) as f64;
        let mut x = vec![0.0; dim];
        x[0] = x1;
        if ou {
            let v = ou_kernel(law, t, &x, &y, tol)?;
            csv.push_str(&format!("{x1},{v}\n"));
        } else {
            let v = heat_kernel(law, t, &x, tol)?;
            if profile == "both" {
                let b = sharp_bound(law, t, x1.abs())?.value;
                csv.push_str(&format!("{x1},{v},{b},{}\n", v / b));
            } else {
                csv.push_str(&format!("{x1},{v}\n"));
            }
        }
    }

    let stage = Stage::new(&args.common.out_dir)?;
    stage.write("kernel.csv", csv.as_bytes())?;
    stage.write(
        "kernel_config.json",
        serde_json::to_string_pretty(&resolved)?.as_bytes(),
    )?;
    stage.commit()
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

#[derive(Args, Debug, Clone)]
pub struct SolveArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Comma-separated output times
    #[arg(long)]
    pub t: Option<String>,
    #[arg(long)]
    pub out_half_width: Option<f64>,
    /// Output points per axis (power of two)
    #[arg(long)]
    pub n: Option<usize>,
    /// Initial data: box:lo:hi, uniform, gaussian:mean:sigma, stationary,
    /// or samples:<csv path>
    #[arg(long, allow_hyphen_values = true)]
    pub initial: Option<String>,
    #[arg(long)]
    pub wrap_tol: Option<f64>,
    /// Budget for |output mass - initial mass|
    #[arg(long)]
    pub mass_tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct SolveConfig {
    pub alpha: Option<f64>,
    pub dim: Option<usize>,
    pub t: Option<Vec<f64>>,
    pub out_half_width: Option<f64>,
    pub n: Option<usize>,
    pub initial: Option<String>,
    pub wrap_tol: Option<f64>,
    pub mass_tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
struct SolveResolved {
    command: &'static str,
    alpha: f64,
    dim: usize,
    times: Vec<f64>,
    out_half_width: f64,
    n: usize,
    initial: String,
    wrap_tol: f64,
    mass_tol: f64,
    input_half_width: f64,
    input_n: usize,
    version: &'static str,
}

enum InitialSelection {
    Data(InitialData),
    Stationary,
}

fn parse_initial(spec: &str, dim: usize, out_half_width: f64) -> Result<InitialSelection> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts[0] {
        "box" => {
            if parts.len() != 3 {
                return Err(Error::Parse("box needs box:lo:hi".into()));
            }
            let lo = parse_point(parts[1])?;
            let hi = parse_point(parts[2])?;
            if lo.len() != dim || hi.len() != dim {
                return Err(Error::Parse("box bounds must match the dimension".into()));
            }
            Ok(InitialSelection::Data(InitialData::indicator_box(lo, hi)?))
        }
        "uniform" => Ok(InitialSelection::Data(InitialData::uniform(
            dim,
            out_half_width,
        )?)),
        "gaussian" => {
            if parts.len() != 3 {
                return Err(Error::Parse("gaussian needs gaussian:mean:sigma".into()));
            }
            let mean = parse_point(parts[1])?;
            let sigma: f64 = parts[2]
                .parse()
                .map_err(|e| Error::Parse(format!("sigma: {e}")))?;
            if mean.len() != dim {
                return Err(Error::Parse("gaussian mean must match the dimension".into()));
            }
            Ok(InitialSelection::Data(InitialData::gaussian_mixture(
                vec![crate::initial::MixtureComponent {
                    weight: 1.0,
                    mean,
                    sigma,
                }],
            )?))
        }
        "stationary" => Ok(InitialSelection::Stationary),
        "samples" => {
            if parts.len() != 2 {
                return Err(Error::Parse("samples needs samples:<path>".into()));
            }
            let text = std::fs::read_to_string(parts[1])?;
            let mut points = Vec::new();
            for (i, line) in text.lines().enumerate() {
                if i == 0 && line.chars().any(|c| c.is_alphabetic()) {
                    continue; // header
                }
                if line.is_empty() {
                    continue;
                }
                points.extend(parse_point(line)?);
            }
            Ok(InitialSelection::Data(InitialData::custom_samples(
                dim, points,
            )?))
        }
        other => Err(Error::Parse(format!("unknown initial data kind {other:?}"))),
    }
}

pub fn run_solve(args: &SolveArgs) -> Result<()> {
    let file: SolveConfig = load_config(&args.common.config)?;
    let alpha = args
        .alpha
        .or(file.alpha)
        .ok_or_else(|| Error::Parse("missing --alpha".into()))?;
    let dim = args.dim.or(file.dim).unwrap_or(1);
    let times: Vec<f64> = match (&args.t, &file.t) {
        (Some(s), _) => s
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("time {v:?}: {e}")))
            })
            .collect::<Result<_>>()?,
        (None, Some(v)) => v.clone(),
        _ => return Err(Error::Parse("missing --t".into())),
    };
    if times.is_empty() {
        return Err(Error::Parse("the output time list is empty".into()));
    }
    if times.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::Parse("output times must be positive".into()));
    }
    let out_half_width = args.out_half_width.or(file.out_half_width).unwrap_or(8.0);
    let n = args.n.or(file.n).unwrap_or(512);
    let initial_spec = args
        .initial
        .clone()
        .or(file.initial)
        .unwrap_or_else(|| "box:-1:1".to_string());
    let wrap_tol = args.wrap_tol.or(file.wrap_tol).unwrap_or(1e-5);
    let mass_tol = args.mass_tol.or(file.mass_tol).unwrap_or(1e-4);

    let law = StableLaw::new(alpha, dim)?;
    let out = Grid::new(dim, n, out_half_width)?;
    let t_max = times.iter().cloned().fold(0.0f64, f64::max);
    let plan = SolvePlan::new(law, out, t_max, wrap_tol).map_err(|e| match e {
        Error::InvalidParameter(msg) => Error::InvalidParameter(format!(
            "{msg}; the input window must reach e^t_max * (output window + wrap margin)"
        )),
        other => other,
    })?;
    let initial = parse_initial(&initial_spec, dim, out_half_width)?;
    let (field0, mass_ref) = match &initial {
        InitialSelection::Data(u0) => {
            let f = plan.discretize(u0)?;
            let m = f.mass();
            (f, m)
        }
        InitialSelection::Stationary => {
            let f = stationary_field(law, &plan.input)?;
            let m = f.mass();
            (f, m)
        }
    };

    let resolved = SolveResolved {
        command: "solve",
        alpha,
        dim,
        times: times.clone(),
        out_half_width,
        n,
        initial: initial_spec.clone(),
        wrap_tol,
        mass_tol,
        input_half_width: plan.input.half_width(),
        input_n: plan.input.n(),
        version: env!("CARGO_PKG_VERSION"),
    };

    let stage = Stage::new(&args.common.out_dir)?;
    let mut summaries = Vec::new();
    for &t in &times {
        let unclamped = crate::solver::ou_solve_unclamped(law, &field0, t, &out)?;
        let min_before = unclamped.min_value();
        let mut field = unclamped;
        field.clamp_negative();
        let mass = field.mass();
        if (mass - mass_ref).abs() > mass_tol {
            let suggestion = tail_radius(law, crate::ou::effective_time(alpha, t), mass_tol / 2.0);
            eprintln!(
                "the output window loses mass through the heavy tail; \
                 a half-width around {suggestion:.0} would hold the budget"
            );
            return Err(Error::TailMassBudget {
                estimated: (mass - mass_ref).abs(),
                budget: mass_tol,
            });
        }
        let tag = format!("{t}").replace('.', "p");
        stage.write_field(&format!("solve_t{tag}"), &field)?;
        summaries.push((t, mass, min_before));
    }
    stage.write(
        "solve_config.json",
        serde_json::to_string_pretty(&resolved)?.as_bytes(),
    )?;
    stage.commit()?;
    for (t, mass, min_before) in summaries {
        println!("t={t}: mass={mass:.9}, min before clamp={min_before:.3e}");
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

#[derive(Args, Debug, Clone)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub n_samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (the result does not depend on this)
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub out_half_width: Option<f64>,
    /// Histogram cells per axis (power of two)
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub initial: Option<String>,
    /// Also write the raw particle positions
    #[arg(long)]
    pub positions: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    pub alpha: Option<f64>,
    pub dim: Option<usize>,
    pub t: Option<f64>,
    pub n_samples: Option<usize>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out_half_width: Option<f64>,
    pub n: Option<usize>,
    pub initial: Option<String>,
    pub positions: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
struct SimulateResolved {
    command: &'static str,
    alpha: f64,
    dim: usize,
    t: f64,
    n_samples: usize,
    seed: u64,
    out_half_width: f64,
    n: usize,
    initial: String,
    outside_fraction: f64,
    version: &'static str,
}

pub fn run_simulate(args: &SimulateArgs) -> Result<()> {
    let file: SimulateConfig = load_config(&args.common.config)?;
    let alpha = args
        .alpha
        .or(file.alpha)
        .ok_or_else(|| Error::Parse("missing --alpha".into()))?;
    let dim = args.dim.or(file.dim).unwrap_or(1);
    let t = args.t.or(file.t).unwrap_or(1.0);
    let n_samples = args.n_samples.or(file.n_samples).unwrap_or(100_000);
    if n_samples == 0 {
        return Err(Error::Parse("need at least one sample".into()));
    }
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let workers = args.workers.or(file.workers);
    let out_half_width = args.out_half_width.or(file.out_half_width).unwrap_or(8.0);
    let n = args.n.or(file.n).unwrap_or(128);
    let initial_spec = args
        .initial
        .clone()
        .or(file.initial)
        .unwrap_or_else(|| "box:-1:1".to_string());
    let write_positions = args.positions || file.positions.unwrap_or(false);

    let law = StableLaw::new(alpha, dim)?;
    let grid = Grid::new(dim, n, out_half_width)?;
    let u0 = match parse_initial(&initial_spec, dim, out_half_width)? {
        InitialSelection::Data(u0) => u0,
        InitialSelection::Stationary => {
            return Err(Error::Unsupported(
                "direct sampling of the stationary preset is not wired into the CLI; \
                 simulate from an explicit initial datum instead"
                    .into(),
            ))
        }
    };

    let run = || simulate_ensemble(law, &u0, t, n_samples, seed);
    let ensemble = match workers {
        None => run()?,
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
            pool.install(run)?
        }
    };
    let density = empirical_density(&ensemble, grid)?;
    if density.heavy_tail_warning {
        eprintln!(
            "note: {:.2}% of the ensemble falls outside the grid (heavy tails); \
             the histogram mass is reported, not renormalized",
            100.0 * density.outside_fraction
        );
    }

    let resolved = SimulateResolved {
        command: "simulate",
        alpha,
        dim,
        t,
        n_samples,
        seed,
        out_half_width,
        n,
        initial: initial_spec.clone(),
        outside_fraction: density.outside_fraction,
        version: env!("CARGO_PKG_VERSION"),
    };

    let stage = Stage::new(&args.common.out_dir)?;
    stage.write_field("histogram", &density.field)?;
    let errs: Vec<String> = density.std_err.iter().map(|v| format!("{v}")).collect();
    stage.write("histogram_stderr.csv", (errs.join("\n") + "\n").as_bytes())?;
    if write_positions {
        let tmp_csv = stage.path("ensemble.csv");
        let tmp_meta = stage.path("ensemble_meta.json");
        ensemble.write_files(&tmp_csv, &tmp_meta)?;
    }
    stage.write(
        "simulate_config.json",
        serde_json::to_string_pretty(&resolved)?.as_bytes(),
    )?;
    stage.commit()
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// quick or full
    #[arg(long, default_value = "quick")]
    pub suite: String,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Run a deliberately broken configuration and demonstrate that the
    /// guard rejects it
    #[arg(long)]
    pub negative_control: bool,
}

pub fn run_verify(args: &VerifyArgs) -> Result<bool> {
    if args.negative_control {
        let law = StableLaw::new(1.0, 1)?;
        let grid = Grid::new(1, 64, 4.0)?;
        let u0 = InitialData::indicator_box(vec![-1.0], vec![1.0])?;
        let field0 = u0.discretize(grid)?;
        return match crate::solver::ou_solve(law, &field0, 1.0, &grid) {
            Err(e) => {
                println!("negative control: failure correctly reported: {e}");
                Ok(true)
            }
            Ok(_) => {
                println!("negative control: the broken configuration was NOT rejected");
                Ok(false)
            }
        };
    }
    let suite = match args.suite.as_str() {
        "quick" => Suite::Quick,
        "full" => Suite::Full,
        other => {
            return Err(Error::Parse(format!(
                "--suite must be quick or full, got {other:?}"
            )))
        }
    };
    let report = run_suite(suite, args.seed)?;
    let stage = Stage::new(&args.common.out_dir)?;
    stage.write("report.json", report.to_json()?.as_bytes())?;
    stage.write("report.txt", report.text_table().as_bytes())?;
    stage.commit()?;
    print!("{}", report.text_table());
    Ok(report.passed())
}

// ---------------------------------------------------------------------------
// output staging
// ---------------------------------------------------------------------------

/// Collects a run's files in a temporary directory and moves them into the
/// output directory only when the whole run has succeeded.
struct Stage {
    out_dir: PathBuf,
    tmp: tempfile::TempDir,
}

impl Stage {
    fn new(out_dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(out_dir)?;
        let tmp = tempfile::TempDir::with_prefix_in(".staging-", out_dir)?;
        Ok(Stage {
            out_dir: out_dir.to_path_buf(),
            tmp,
        })
    }

    fn path(&self, name: &str) -> PathBuf {
        self.tmp.path().join(name)
    }

    fn write(&self, name: &str, bytes: &[u8]) -> Result<()> {
        std::fs::write(self.path(name), bytes)?;
        Ok(())
    }

    fn write_field(&self, stem: &str, field: &Field) -> Result<()> {
        field.write_files(
            &self.path(&format!("{stem}.csv")),
            &self.path(&format!("{stem}_meta.json")),
        )
    }

    fn commit(self) -> Result<()> {
        for entry in std::fs::read_dir(self.tmp.path())? {
            let entry = entry?;
            let target = self.out_dir.join(entry.file_name());
            std::fs::rename(entry.path(), target)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("-5:5:101").unwrap(), (-5.0, 5.0, 101));
        assert!(parse_range("1:2").is_err());
        assert!(parse_range("2:1:10").is_err());
        assert!(parse_range("a:b:c").is_err());
        assert!(parse_range("0:1:1").is_err());
    }

    #[test]
    fn initial_spec_parsing() {
        match parse_initial("box:-1:1", 1, 8.0).unwrap() {
            InitialSelection::Data(InitialData::IndicatorBox { lo, hi }) => {
                assert_eq!(lo, vec![-1.0]);
                assert_eq!(hi, vec![1.0]);
            }
            _ => panic!("expected a box"),
        }
        assert!(matches!(
            parse_initial("stationary", 1, 8.0).unwrap(),
            InitialSelection::Stationary
        ));
        assert!(parse_initial("boxx:1:2", 1, 8.0).is_err());
        assert!(parse_initial("gaussian:0", 1, 8.0).is_err());
    }

    #[test]
    fn kernel_run_writes_expected_row() {
        let dir = tempfile::tempdir().unwrap();
        let args = KernelArgs {
            common: CommonArgs {
                out_dir: dir.path().to_path_buf(),
                config: None,
            },
            alpha: Some(1.0),
            dim: Some(1),
            t: Some(1.0),
            x_range: Some("-5:5:101".into()),
            ou: false,
            y: None,
            profile: Some("both".into()),
            tol: None,
        };
        run_kernel(&args).unwrap();
        let csv = std::fs::read_to_string(dir.path().join("kernel.csv")).unwrap();
        assert_eq!(csv.lines().count(), 102); // header + 101 rows
        // the row at x = 0 carries 1/pi
        let row = csv.lines().nth(51).unwrap();
        let value: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert!((value - 1.0 / std::f64::consts::PI).abs() < 1e-12);
        assert!(dir.path().join("kernel_config.json").exists());
    }

    #[test]
    fn malformed_range_leaves_no_files() {
        let dir = tempfile::tempdir().unwrap();
        let args = KernelArgs {
            common: CommonArgs {
                out_dir: dir.path().to_path_buf(),
                config: None,
            },
            alpha: Some(1.0),
            dim: Some(1),
            t: Some(1.0),
            x_range: Some("5:1:bad".into()),
            ou: false,
            y: None,
            profile: None,
            tol: None,
        };
        assert!(matches!(run_kernel(&args), Err(Error::Parse(_))));
        assert!(!dir.path().join("kernel.csv").exists());
        assert!(!dir.path().join("kernel_config.json").exists());
    }

    #[test]
    fn config_file_feeds_defaults_and_flags_override() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("cfg.json");
        std::fs::write(
            &cfg,
            r#"{"alpha": 2.0, "t": 1.0, "x_range": "0:1:4"}"#,
        )
        .unwrap();
        let args = KernelArgs {
            common: CommonArgs {
                out_dir: dir.path().to_path_buf(),
                config: Some(cfg),
            },
            alpha: Some(1.0), // flag wins over the file
            dim: None,
            t: None,
            x_range: None,
            ou: false,
            y: None,
            profile: None,
            tol: None,
        };
        run_kernel(&args).unwrap();
        let resolved: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(dir.path().join("kernel_config.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(resolved["alpha"], 1.0);
        assert_eq!(resolved["t"], 1.0);
    }
}
