//! Argument parsing and dispatch for the `ctxfrac` binary.
//!
//! [`run`] takes the argument list and two writers so the whole command line
//! can be driven in-process. Exit codes: 0 success, 1 invalid input, 2 solver
//! or size limit.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use ctxfrac::entanglement::{
    diagonal_sweep, mirror_curve, write_curve_csv, DEFAULT_CURVE_POINTS, DEFAULT_GRID,
    DEFAULT_MONOTONICITY_SAMPLES, DEFAULT_SEED,
};
use ctxfrac::fraction::DEFAULT_NONCONTEXTUAL_TOL;
use ctxfrac::notation::{parse_scenario, parse_state};
use ctxfrac::scenario::FIXTURE_NAMES;
use ctxfrac::{
    born_model, contextual_fraction, distinguished_cf, entanglement_entropy, equatorial_sweep,
    fixture_model, monotonicity_check, reduced_density, schmidt_decompose, theta_curve,
    threshold_entropy, EmpiricalModel, Error, Mat2, SweepGrid,
};

#[derive(Debug, Parser)]
#[command(name = "ctxfrac", version, about = "Contextual fraction toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Contextual fraction of an empirical model file.
    Cf {
        #[arg(long)]
        model: PathBuf,
        /// Threshold for reporting the model as noncontextual.
        #[arg(long, default_value_t = DEFAULT_NONCONTEXTUAL_TOL)]
        tol: f64,
        /// Write the optimal global sub-distribution here.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Born-rule empirical model of a state in a Bell scenario.
    Born {
        #[arg(long)]
        state: String,
        #[arg(long)]
        scenario: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Schmidt angle and local unitaries of a two-qubit state.
    Schmidt {
        #[arg(long)]
        state: String,
    },
    /// Entanglement entropy of a two-qubit state.
    Entropy {
        #[arg(long)]
        state: String,
    },
    /// Distinguished contextual fraction of a two-qubit state.
    DistinguishedCf {
        #[arg(long)]
        state: String,
    },
    /// CF over equatorial measurement angles (phi1, phi2) in [0, 2pi)^2.
    SweepEquatorial {
        #[arg(long, default_value = "ghz:2")]
        state: String,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Entropy and CF of diagonal states over (theta, phi).
    SweepDiagonal {
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Distinguished CF along the Schmidt angle.
    CurveTheta {
        #[arg(long, default_value_t = DEFAULT_CURVE_POINTS)]
        points: usize,
        /// Extend the curve from [0, pi/2] to [0, pi].
        #[arg(long)]
        mirror: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Entropy below which the distinguished CF vanishes.
    Threshold,
    /// Randomised check that the distinguished CF is monotone in entropy.
    Monotonicity {
        #[arg(long, default_value_t = DEFAULT_MONOTONICITY_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Write the three example tables as model files.
    Fixtures {
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct OutArg {
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn io_at(path: &Path) -> impl FnOnce(io::Error) -> Failure + '_ {
    move |e| Failure::Io(format!("{}: {e}", path.display()))
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                1
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => 0,
        Err(Failure::Lib(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_resource_limit() {
                2
            } else {
                1
            }
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
    }
}

/// Rounds to 9 decimals and drops trailing zeros.
pub fn fmt_value(x: f64) -> String {
    let s = format!("{x:.9}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_owned()
    } else {
        s.to_owned()
    }
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), Failure> {
    fs::write(path, contents).map_err(io_at(path))
}

fn dispatch(command: Command, so: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Cf {
            model,
            tol,
            witness,
            out,
        } => {
            if tol.is_nan() || tol <= 0.0 {
                return Err(
                    Error::InvalidArgument(format!("--tol must be positive, got {tol}")).into(),
                );
            }
            let text = fs::read_to_string(&model).map_err(io_at(&model))?;
            let e = EmpiricalModel::from_json(&text)?;
            let r = contextual_fraction(&e)?;
            writeln!(so, "CF = {}", fmt_value(r.cf))?;
            writeln!(so, "NCF = {}", fmt_value(r.ncf))?;
            writeln!(so, "noncontextual (tol {tol:e}) = {}", r.cf <= tol)?;
            if let Some(path) = witness {
                write_file(&path, r.witness.to_witness_json().as_bytes())?;
            }
            if let Some(path) = out.out {
                let summary = serde_json::json!({
                    "cf": r.cf,
                    "ncf": r.ncf,
                    "noncontextual": r.cf <= tol,
                    "iterations": r.iterations,
                });
                let text = serde_json::to_string_pretty(&summary).expect("plain json");
                write_file(&path, text.as_bytes())?;
            }
        }
        Command::Born {
            state,
            scenario,
            out,
        } => {
            let psi = parse_state(&state)?;
            let sc = parse_scenario(&scenario, psi.n_qubits())?;
            let model = born_model(&psi, &sc)?;
            match out.out {
                Some(path) => {
                    write_file(&path, model.to_json().as_bytes())?;
                    let s = model.scenario();
                    writeln!(
                        so,
                        "wrote {} ({} measurements, {} contexts)",
                        path.display(),
                        s.measurements().len(),
                        s.contexts().len()
                    )?;
                }
                None => writeln!(so, "{}", model.to_json())?,
            }
        }
        Command::Schmidt { state } => {
            let f = schmidt_decompose(&parse_state(&state)?)?;
            let [c0, c1] = f.coefficients();
            writeln!(so, "theta = {}", fmt_value(f.theta))?;
            writeln!(so, "coefficients = {}, {}", fmt_value(c0), fmt_value(c1))?;
            writeln!(so, "u_a = {}", fmt_mat(&f.u_a))?;
            writeln!(so, "u_b = {}", fmt_mat(&f.u_b))?;
        }
        Command::Entropy { state } => {
            let psi = parse_state(&state)?;
            let [l0, l1] = reduced_density(&psi)?.eigenvalues();
            writeln!(so, "S_ent = {}", fmt_value(entanglement_entropy(&psi)?))?;
            writeln!(so, "spectrum = {}, {}", fmt_value(l0), fmt_value(l1))?;
        }
        Command::DistinguishedCf { state } => {
            let r = distinguished_cf(&parse_state(&state)?)?;
            writeln!(so, "theta = {:.6}", r.theta)?;
            writeln!(so, "S_ent = {:.6}", r.entropy)?;
            writeln!(so, "CF = {:.6}", r.cf)?;
        }
        Command::SweepEquatorial { state, grid, out } => {
            let g = equatorial_sweep(&parse_state(&state)?, grid)?;
            report_grid(so, &g)?;
            write_grid(&g, out.out.as_deref())?;
        }
        Command::SweepDiagonal { grid, out } => {
            let g = diagonal_sweep(grid)?;
            report_grid(so, &g)?;
            write_grid(&g, out.out.as_deref())?;
        }
        Command::CurveTheta {
            points,
            mirror,
            out,
        } => {
            let mut curve = theta_curve(points)?;
            if mirror {
                curve = mirror_curve(&curve);
            }
            let first_positive = curve
                .iter()
                .find(|p| p.cf > DEFAULT_NONCONTEXTUAL_TOL)
                .map(|p| p.theta);
            writeln!(so, "points = {}", curve.len())?;
            match first_positive {
                Some(t) => writeln!(so, "first theta with CF > 0: {}", fmt_value(t))?,
                None => writeln!(so, "CF vanishes on the whole curve")?,
            }
            if let Some(path) = out.out {
                let mut buf = Vec::new();
                write_curve_csv(&curve, &mut buf)?;
                write_file(&path, &buf)?;
            }
        }
        Command::Threshold => {
            writeln!(so, "{:.6}", threshold_entropy())?;
        }
        Command::Monotonicity { samples, seed, out } => {
            let report = monotonicity_check(samples, seed)?;
            writeln!(
                so,
                "seed = {seed}, samples = {samples}, violations = {}",
                report.violations.len()
            )?;
            for v in &report.violations {
                writeln!(
                    so,
                    "pair {}: S {} > {} but CF {} < {}",
                    v.pair,
                    fmt_value(v.higher.entropy),
                    fmt_value(v.lower.entropy),
                    fmt_value(v.higher.cf),
                    fmt_value(v.lower.cf)
                )?;
            }
            if let Some(path) = out.out {
                let mut buf = Vec::new();
                report.write_csv(&mut buf)?;
                write_file(&path, &buf)?;
            }
        }
        Command::Fixtures { out } => {
            fs::create_dir_all(&out).map_err(io_at(&out))?;
            for name in FIXTURE_NAMES {
                let path = out.join(format!("{name}.json"));
                write_file(&path, fixture_model(name)?.to_json().as_bytes())?;
                writeln!(so, "wrote {}", path.display())?;
            }
        }
    }
    Ok(())
}

fn report_grid(so: &mut dyn Write, g: &SweepGrid) -> io::Result<()> {
    let (i, j, v) = g.argmax();
    writeln!(so, "grid = {}x{}", g.rows.points, g.cols.points)?;
    writeln!(
        so,
        "max CF = {} at {} = {}, {} = {}",
        fmt_value(v),
        g.rows.name,
        fmt_value(g.rows.value(i)),
        g.cols.name,
        fmt_value(g.cols.value(j))
    )?;
    writeln!(
        so,
        "local maxima = {}",
        g.periodic_local_maxima(DEFAULT_NONCONTEXTUAL_TOL).len()
    )
}

fn write_grid(g: &SweepGrid, path: Option<&Path>) -> Result<(), Failure> {
    if let Some(path) = path {
        let mut buf = Vec::new();
        g.write_csv(&mut buf)?;
        write_file(path, &buf)?;
    }
    Ok(())
}

fn fmt_mat(m: &Mat2) -> String {
    let entry = |z: ctxfrac::C64| {
        let im = fmt_value(z.im);
        match im.strip_prefix('-') {
            Some(abs) => format!("{}-{abs}i", fmt_value(z.re)),
            None => format!("{}+{im}i", fmt_value(z.re)),
        }
    };
    let [[a, b], [c, d]] = m.0;
    format!(
        "[[{}, {}], [{}, {}]]",
        entry(a),
        entry(b),
        entry(c),
        entry(d)
    )
}
