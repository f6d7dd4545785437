//! Command-line front end: quantum bounds, visibility scans, the classical
//! strategy table, moment-matrix randomness bounds, and monogamy sampling.
//!
//! Exit status convention: 0 success, 1 usage, 2 input validation, 3 I/O,
//! 4 numerical-consistency failure. All floating output is printed at 12
//! significant digits, and identical configs (and seeds) produce
//! byte-identical output files.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use parity_chsh::bell::{lhv_bound, quantum_bound_with, see_saw_maximize, BoundParams};
use parity_chsh::linalg::C64;
use parity_chsh::monogamy::{exclusivity_check, probe_maximum, sample_monogamy};
use parity_chsh::npa::{npa_upper_bound, NpaParams, SolverParams};
use parity_chsh::pauli::{load_state, save_state, white_noise_state, DensityMatrix};
use parity_chsh::randomness::{min_entropy, noise_scan, write_scan_csv};
use parity_chsh::{fmt_sig, Error};

const SIG_DIGITS: usize = 12;

fn f(x: f64) -> String {
    fmt_sig(x, SIG_DIGITS)
}

#[derive(Parser)]
#[command(name = "parity-chsh", version, arg_required_else_help = true)]
#[command(
    about = "Tight bounds, certified randomness, and monogamy for the parity-CHSH inequality"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tight maximum Bell value of a three-qubit state
    Bound(BoundArgs),
    /// Sweep white-noise visibility and write the bound/randomness table as CSV
    Scan(ScanArgs),
    /// Enumerate all 32 deterministic strategies and list the maximizers
    Lhv(LhvArgs),
    /// Moment-matrix upper bound on the guessing probability at a Bell value
    Npa(NpaArgs),
    /// Trade-off of the four triple Bell values: random sampling or a probe
    Monogamy(MonogamyArgs),
    /// Write a built-in example state to a JSON file
    State(StateArgs),
}

#[derive(Args)]
struct BoundArgs {
    /// Built-in state family (`white-noise`)
    #[arg(long)]
    family: Option<String>,
    /// Visibility parameter for the white-noise family
    #[arg(long)]
    p: Option<f64>,
    /// Density-matrix JSON file (alternative to --family)
    #[arg(long)]
    state: Option<PathBuf>,
    /// Spherical grid resolution of the direction search
    #[arg(long, default_value_t = 64)]
    grid_n: usize,
    /// Simplex refinement budget after the grid stage
    #[arg(long, default_value_t = 200)]
    refine_iters: usize,
    /// Restarts of the see-saw cross-check
    #[arg(long, default_value_t = 8)]
    seesaw_restarts: usize,
    /// Seed of the see-saw cross-check
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Emit a JSON report instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, default_value_t = 0.0)]
    p_min: f64,
    #[arg(long, default_value_t = 1.0)]
    p_max: f64,
    /// Number of grid points, endpoints included
    #[arg(long, default_value_t = 21)]
    steps: usize,
    /// Also compute the moment-matrix upper bound per row (slow)
    #[arg(long)]
    npa: bool,
    /// Bisection tolerance of the NPA column
    #[arg(long, default_value_t = 1e-3)]
    npa_tol: f64,
    /// Output CSV path; the resolved config goes to `<out>.meta.json`
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct LhvArgs {
    /// Emit a JSON report instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct NpaArgs {
    /// Observed Bell value to condition on
    #[arg(long)]
    bell: f64,
    /// Bisection tolerance on the guessing probability
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    /// Residual tolerance of the feasibility solver
    #[arg(long, default_value_t = 1e-7)]
    solver_tol: f64,
    /// Iteration cap per feasibility solve
    #[arg(long, default_value_t = 20_000)]
    max_iters: usize,
    /// Emit a JSON report instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct MonogamyArgs {
    #[command(subcommand)]
    sub: Option<MonogamySub>,
    /// Random (state, settings) configurations to draw
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Emit a JSON report instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum MonogamySub {
    /// Maximize the squared sum over all sixteen setting angles at one state
    Probe(ProbeArgs),
}

#[derive(Args)]
struct ProbeArgs {
    /// State parameter theta
    #[arg(long)]
    theta: f64,
    /// State parameter phi
    #[arg(long)]
    phi: f64,
    /// Optimizer restarts; the first starts from the aligned-z settings
    #[arg(long, default_value_t = 64)]
    restarts: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Emit a JSON report instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct StateArgs {
    /// Family: `ghz-abc` or `white-noise`
    #[arg(long)]
    family: String,
    /// Visibility for the white-noise family
    #[arg(long)]
    p: Option<f64>,
    /// Output JSON path
    #[arg(long)]
    out: PathBuf,
}

/// CLI failure: either a usage problem (exit 1) or a library error mapped to
/// the documented exit statuses.
enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure::Lib(err)
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure::Lib(Error::Io(err))
    }
}

fn failure_code(failure: &Failure) -> i32 {
    match failure {
        Failure::Usage(_) => 1,
        Failure::Lib(err) => match err {
            Error::InvalidInput(_)
            | Error::Validation(_)
            | Error::Parse(_)
            | Error::Infeasible(_) => 2,
            Error::Io(_) => 3,
            Error::NumericalConsistency(_) => 4,
        },
    }
}

fn main() {
    if let Ok(threads) = std::env::var("PARITY_CHSH_THREADS") {
        let trimmed = threads.trim();
        if !trimmed.is_empty() && trimmed != "1" {
            eprintln!(
                "note: PARITY_CHSH_THREADS={trimmed} requested; this build computes sequentially"
            );
        }
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    let result = match &cli.command {
        Command::Bound(args) => cmd_bound(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Lhv(args) => cmd_lhv(args),
        Command::Npa(args) => cmd_npa(args),
        Command::Monogamy(args) => cmd_monogamy(args),
        Command::State(args) => cmd_state(args),
    };
    if let Err(failure) = result {
        match &failure {
            Failure::Usage(msg) => eprintln!("error: {msg}"),
            Failure::Lib(err) => eprintln!("error: {err}"),
        }
        std::process::exit(failure_code(&failure));
    }
}

/// Writes a finished report to stdout in one call, ignoring write failures
/// such as a closed pipe so `parity-chsh ... | head` exits quietly.
fn emit(text: &str) {
    use std::io::Write as _;
    let _ = std::io::stdout().write_all(text.as_bytes());
}

fn json_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn vec3_str(v: [f64; 3]) -> String {
    format!("[{}, {}, {}]", f(v[0]), f(v[1]), f(v[2]))
}

fn vec4_str(v: [f64; 4]) -> String {
    format!("[{}, {}, {}, {}]", f(v[0]), f(v[1]), f(v[2]), f(v[3]))
}

fn resolve_state(args: &BoundArgs) -> Result<(DensityMatrix, String), Failure> {
    match (&args.family, &args.state) {
        (Some(_), Some(_)) => Err(Failure::Usage(
            "--family and --state are mutually exclusive".into(),
        )),
        (None, None) => Err(Failure::Usage(
            "one of --family or --state is required".into(),
        )),
        (Some(name), None) => {
            if name != "white-noise" {
                return Err(Failure::Usage(format!(
                    "unknown family `{name}`; available: white-noise"
                )));
            }
            let p = args
                .p
                .ok_or_else(|| Failure::Usage("--family white-noise requires --p".into()))?;
            Ok((
                white_noise_state(p)?,
                format!("family=white-noise p={}", f(p)),
            ))
        }
        (None, Some(path)) => {
            if args.p.is_some() {
                return Err(Failure::Usage(
                    "--p only applies to --family white-noise".into(),
                ));
            }
            Ok((load_state(path)?, format!("state={}", path.display())))
        }
    }
}

fn cmd_bound(args: &BoundArgs) -> Result<(), Failure> {
    let (rho, source) = resolve_state(args)?;
    let params = BoundParams {
        grid_n: args.grid_n,
        refine_iters: args.refine_iters,
    };
    let report = quantum_bound_with(&rho, &params)?;
    let see_saw = see_saw_maximize(&rho, args.seesaw_restarts, args.seed)?;
    let mut out = String::new();
    if args.json {
        let family = args.family.as_deref().map_or("null".into(), json_str);
        let p = args.p.map_or("null".into(), f);
        let state = args
            .state
            .as_ref()
            .map_or("null".into(), |s| json_str(&s.display().to_string()));
        let _ = writeln!(out, "{{");
        let _ = writeln!(
            out,
            "  \"config\": {{\"subcommand\": \"bound\", \"family\": {family}, \"p\": {p}, \
             \"state\": {state}, \"grid_n\": {}, \"refine_iters\": {}, \"seesaw_restarts\": {}, \
             \"seed\": {}}},",
            args.grid_n, args.refine_iters, args.seesaw_restarts, args.seed
        );
        let _ = writeln!(out, "  \"bound\": {},", f(report.bound));
        let _ = writeln!(out, "  \"lambda1\": {},", f(report.lambda1));
        let _ = writeln!(out, "  \"lambda2\": {},", f(report.lambda2));
        let _ = writeln!(
            out,
            "  \"c_star\": {},",
            vec3_str(report.c_star.components())
        );
        let _ = writeln!(
            out,
            "  \"frame\": {{\"a\": {}, \"a_prime\": {}, \"b\": {}, \"b_prime\": {}, \"c\": {}}},",
            vec3_str(report.frame.a.components()),
            vec3_str(report.frame.a_prime.components()),
            vec3_str(report.frame.b.components()),
            vec3_str(report.frame.b_prime.components()),
            vec3_str(report.frame.c.components())
        );
        let _ = writeln!(out, "  \"see_saw\": {}", f(see_saw.value));
        let _ = writeln!(out, "}}");
    } else {
        let _ = writeln!(
            out,
            "config: subcommand=bound {source} grid_n={} refine_iters={} seesaw_restarts={} seed={}",
            args.grid_n, args.refine_iters, args.seesaw_restarts, args.seed
        );
        let _ = writeln!(out, "bound: {}", f(report.bound));
        let _ = writeln!(out, "lambda1: {}", f(report.lambda1));
        let _ = writeln!(out, "lambda2: {}", f(report.lambda2));
        let _ = writeln!(out, "c_star: {}", vec3_str(report.c_star.components()));
        let _ = writeln!(out, "frame.a: {}", vec3_str(report.frame.a.components()));
        let _ = writeln!(
            out,
            "frame.a_prime: {}",
            vec3_str(report.frame.a_prime.components())
        );
        let _ = writeln!(out, "frame.b: {}", vec3_str(report.frame.b.components()));
        let _ = writeln!(
            out,
            "frame.b_prime: {}",
            vec3_str(report.frame.b_prime.components())
        );
        let _ = writeln!(out, "frame.c: {}", vec3_str(report.frame.c.components()));
        let _ = writeln!(out, "see_saw: {}", f(see_saw.value));
    }
    emit(&out);
    Ok(())
}

fn cmd_scan(args: &ScanArgs) -> Result<(), Failure> {
    if args.steps < 2 {
        return Err(Failure::Usage(format!(
            "--steps must be at least 2, got {}",
            args.steps
        )));
    }
    if !(0.0..=1.0).contains(&args.p_min) || !(0.0..=1.0).contains(&args.p_max) {
        return Err(Failure::Usage(format!(
            "visibility range must lie within [0, 1], got [{}, {}]",
            f(args.p_min),
            f(args.p_max)
        )));
    }
    if args.p_min >= args.p_max {
        return Err(Failure::Usage(format!(
            "empty visibility range [{}, {}]",
            f(args.p_min),
            f(args.p_max)
        )));
    }
    if args.npa_tol.is_nan() || args.npa_tol <= 0.0 {
        return Err(Failure::Usage("--npa-tol must be positive".into()));
    }
    let npa_params = NpaParams {
        bisect_tol: args.npa_tol,
        ..NpaParams::default()
    };
    let rows = noise_scan(args.p_min, args.p_max, args.steps, args.npa, &npa_params)?;
    let mut csv = Vec::new();
    write_scan_csv(&rows, &mut csv)?;
    std::fs::write(&args.out, &csv)?;

    let meta_path = {
        let mut s = args.out.clone().into_os_string();
        s.push(".meta.json");
        PathBuf::from(s)
    };
    let mut meta = String::new();
    let _ = writeln!(meta, "{{");
    let _ = writeln!(meta, "  \"subcommand\": \"scan\",");
    let _ = writeln!(meta, "  \"p_min\": {},", f(args.p_min));
    let _ = writeln!(meta, "  \"p_max\": {},", f(args.p_max));
    let _ = writeln!(meta, "  \"steps\": {},", args.steps);
    let _ = writeln!(meta, "  \"npa\": {},", args.npa);
    let _ = writeln!(meta, "  \"npa_tol\": {},", f(npa_params.bisect_tol));
    let _ = writeln!(meta, "  \"solver_tol\": {},", f(npa_params.solver.tol));
    let _ = writeln!(
        meta,
        "  \"solver_max_iters\": {},",
        npa_params.solver.max_iters
    );
    let _ = writeln!(
        meta,
        "  \"out\": {},",
        json_str(&args.out.display().to_string())
    );
    let _ = writeln!(meta, "  \"rows\": {}", rows.len());
    let _ = writeln!(meta, "}}");
    std::fs::write(&meta_path, meta)?;

    emit(&format!(
        "rows: {}\nout: {}\nmeta: {}\n",
        rows.len(),
        args.out.display(),
        meta_path.display()
    ));
    Ok(())
}

fn cmd_lhv(args: &LhvArgs) -> Result<(), Failure> {
    let summary = lhv_bound();
    let mut out = String::new();
    if args.json {
        let rows: Vec<String> = summary
            .maximizers
            .iter()
            .map(|m| format!("[{}, {}, {}, {}, {}]", m[0], m[1], m[2], m[3], m[4]))
            .collect();
        let _ = writeln!(out, "{{");
        let _ = writeln!(out, "  \"config\": {{\"subcommand\": \"lhv\"}},");
        let _ = writeln!(out, "  \"classical_max\": {},", f(summary.max));
        let _ = writeln!(out, "  \"classical_min\": {},", f(summary.min));
        let _ = writeln!(out, "  \"maximizer_count\": {},", summary.maximizers.len());
        let _ = writeln!(out, "  \"maximizers\": [{}]", rows.join(", "));
        let _ = writeln!(out, "}}");
    } else {
        let _ = writeln!(out, "config: subcommand=lhv");
        let _ = writeln!(out, "classical_max: {}", f(summary.max));
        let _ = writeln!(out, "classical_min: {}", f(summary.min));
        let _ = writeln!(out, "maximizer_count: {}", summary.maximizers.len());
        let _ = writeln!(out, "maximizers (a0 a1 b0 b1 c):");
        for m in &summary.maximizers {
            let row: Vec<&str> = m.iter().map(|&s| if s > 0 { "+1" } else { "-1" }).collect();
            let _ = writeln!(out, "  {}", row.join(" "));
        }
    }
    emit(&out);
    Ok(())
}

fn cmd_npa(args: &NpaArgs) -> Result<(), Failure> {
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(Failure::Usage("--tol must be positive".into()));
    }
    if args.solver_tol.is_nan() || args.solver_tol <= 0.0 {
        return Err(Failure::Usage("--solver-tol must be positive".into()));
    }
    if args.max_iters == 0 {
        return Err(Failure::Usage("--max-iters must be at least 1".into()));
    }
    let params = NpaParams {
        bisect_tol: args.tol,
        solver: SolverParams {
            tol: args.solver_tol,
            max_iters: args.max_iters,
        },
    };
    let bound = npa_upper_bound(args.bell, &params)?;
    let entropy = min_entropy(bound.upper)?;
    let warning = (bound.inconclusive_steps > 0).then(|| {
        format!(
            "{} bisection solves hit the iteration cap and were treated as infeasible",
            bound.inconclusive_steps
        )
    });
    let mut out = String::new();
    if args.json {
        let _ = writeln!(out, "{{");
        let _ = writeln!(
            out,
            "  \"config\": {{\"subcommand\": \"npa\", \"bell\": {}, \"tol\": {}, \
             \"solver_tol\": {}, \"max_iters\": {}}},",
            f(args.bell),
            f(args.tol),
            f(args.solver_tol),
            args.max_iters
        );
        let _ = writeln!(out, "  \"upper\": {},", f(bound.upper));
        match bound.best_feasible {
            Some(v) => {
                let _ = writeln!(out, "  \"best_feasible\": {},", f(v));
            }
            None => {
                let _ = writeln!(out, "  \"best_feasible\": null,");
            }
        }
        let _ = writeln!(out, "  \"uncertainty\": {},", f(bound.uncertainty));
        let _ = writeln!(out, "  \"certified_min_entropy\": {},", f(entropy));
        let _ = writeln!(out, "  \"basis_size\": {},", bound.basis_size);
        let _ = writeln!(out, "  \"moment_classes\": {},", bound.num_classes);
        let _ = writeln!(
            out,
            "  \"inconclusive_steps\": {},",
            bound.inconclusive_steps
        );
        match &warning {
            Some(w) => {
                let _ = writeln!(out, "  \"warning\": {}", json_str(w));
            }
            None => {
                let _ = writeln!(out, "  \"warning\": null");
            }
        }
        let _ = writeln!(out, "}}");
    } else {
        let _ = writeln!(
            out,
            "config: subcommand=npa bell={} tol={} solver_tol={} max_iters={}",
            f(args.bell),
            f(args.tol),
            f(args.solver_tol),
            args.max_iters
        );
        let _ = writeln!(out, "upper: {}", f(bound.upper));
        match bound.best_feasible {
            Some(v) => {
                let _ = writeln!(out, "best_feasible: {}", f(v));
            }
            None => {
                let _ = writeln!(out, "best_feasible: none");
            }
        }
        let _ = writeln!(out, "uncertainty: {}", f(bound.uncertainty));
        let _ = writeln!(out, "certified_min_entropy: {}", f(entropy));
        let _ = writeln!(out, "basis_size: {}", bound.basis_size);
        let _ = writeln!(out, "moment_classes: {}", bound.num_classes);
        let _ = writeln!(out, "inconclusive_steps: {}", bound.inconclusive_steps);
        if let Some(w) = &warning {
            let _ = writeln!(out, "warning: {w}");
        }
    }
    emit(&out);
    Ok(())
}

fn cmd_monogamy(args: &MonogamyArgs) -> Result<(), Failure> {
    if let Some(MonogamySub::Probe(probe)) = &args.sub {
        return cmd_probe(probe);
    }
    if args.samples == 0 {
        return Err(Failure::Usage("--samples must be at least 1".into()));
    }
    let summary = sample_monogamy(args.samples, args.seed)?;
    let (theta, phi) = summary.max_report.params;
    let mut out = String::new();
    if args.json {
        let _ = writeln!(out, "{{");
        let _ = writeln!(
            out,
            "  \"config\": {{\"subcommand\": \"monogamy\", \"samples\": {}, \"seed\": {}}},",
            args.samples, args.seed
        );
        let _ = writeln!(out, "  \"samples\": {},", summary.samples);
        let _ = writeln!(out, "  \"max_sum_sq\": {},", f(summary.max_sum_sq));
        let _ = writeln!(out, "  \"violations\": {},", summary.violations);
        let _ = writeln!(
            out,
            "  \"exclusivity_failures\": {},",
            summary.exclusivity_failures
        );
        let _ = writeln!(out, "  \"max_theta\": {},", f(theta));
        let _ = writeln!(out, "  \"max_phi\": {},", f(phi));
        let _ = writeln!(
            out,
            "  \"max_values\": {}",
            vec4_str(summary.max_report.values)
        );
        let _ = writeln!(out, "}}");
    } else {
        let _ = writeln!(
            out,
            "config: subcommand=monogamy samples={} seed={}",
            args.samples, args.seed
        );
        let _ = writeln!(out, "samples: {}", summary.samples);
        let _ = writeln!(out, "max_sum_sq: {}", f(summary.max_sum_sq));
        let _ = writeln!(out, "violations: {}", summary.violations);
        let _ = writeln!(
            out,
            "exclusivity_failures: {}",
            summary.exclusivity_failures
        );
        let _ = writeln!(out, "max_theta: {}", f(theta));
        let _ = writeln!(out, "max_phi: {}", f(phi));
        let _ = writeln!(out, "max_values: {}", vec4_str(summary.max_report.values));
    }
    emit(&out);
    Ok(())
}

fn cmd_probe(args: &ProbeArgs) -> Result<(), Failure> {
    if args.restarts == 0 {
        return Err(Failure::Usage("--restarts must be at least 1".into()));
    }
    let report = probe_maximum(args.theta, args.phi, args.restarts, args.seed)?;
    let exclusive = exclusivity_check(&report);
    let mut out = String::new();
    if args.json {
        let _ = writeln!(out, "{{");
        let _ = writeln!(
            out,
            "  \"config\": {{\"subcommand\": \"monogamy-probe\", \"theta\": {}, \"phi\": {}, \
             \"restarts\": {}, \"seed\": {}}},",
            f(args.theta),
            f(args.phi),
            args.restarts,
            args.seed
        );
        let _ = writeln!(out, "  \"sum_sq\": {},", f(report.sum_sq));
        let _ = writeln!(out, "  \"values\": {},", vec4_str(report.values));
        let _ = writeln!(out, "  \"exclusivity\": {exclusive}");
        let _ = writeln!(out, "}}");
    } else {
        let _ = writeln!(
            out,
            "config: subcommand=monogamy-probe theta={} phi={} restarts={} seed={}",
            f(args.theta),
            f(args.phi),
            args.restarts,
            args.seed
        );
        let _ = writeln!(out, "sum_sq: {}", f(report.sum_sq));
        let _ = writeln!(out, "values: {}", vec4_str(report.values));
        let _ = writeln!(out, "exclusivity: {exclusive}");
    }
    emit(&out);
    Ok(())
}

fn cmd_state(args: &StateArgs) -> Result<(), Failure> {
    let rho = match args.family.as_str() {
        "ghz-abc" => {
            if args.p.is_some() {
                return Err(Failure::Usage(
                    "--p only applies to --family white-noise".into(),
                ));
            }
            let amp = C64::new(0.5f64.sqrt(), 0.0);
            let mut amplitudes = vec![C64::new(0.0, 0.0); 8];
            amplitudes[0] = amp;
            amplitudes[7] = amp;
            DensityMatrix::pure_state(&amplitudes)?
        }
        "white-noise" => {
            let p = args
                .p
                .ok_or_else(|| Failure::Usage("--family white-noise requires --p".into()))?;
            white_noise_state(p)?
        }
        other => {
            return Err(Failure::Usage(format!(
                "unknown family `{other}`; available: ghz-abc, white-noise"
            )))
        }
    };
    save_state(&rho, &args.out)?;
    emit(&format!("wrote {}\n", args.out.display()));
    Ok(())
}
