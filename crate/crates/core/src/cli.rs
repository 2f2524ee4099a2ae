//! Command-line front end: `solve`, `synth`, `verify`, `sample`, `mono`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 internal error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::oracle::{monotonicity_trial, optimality_trial, TrialConfig};
use crate::partition::{
    column_spectra, concat_sorted, solve, verify_solution, BlockSpectrum, PartitionSolution, ProblemInput,
    ToleranceConfig, WeightPartition,
};
use crate::potentials::{joint_potential, lambda_vector, Potential, SpectrumVector};
use crate::synth::{synthesize_design, FrameFamily};
use crate::vecmaj::SortedVector;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "optframe", version, about = "Optimal frame designs under energy restrictions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the optimal partition, spectra and block structure.
    Solve(SolveArgs),
    /// Build explicit frame vectors for the optimal design.
    Synth(JobArgs),
    /// Re-check a document produced by `solve`.
    Verify(VerifyArgs),
    /// Compare the optimum against random designs.
    Sample(SampleArgs),
    /// Check spectral monotonicity between two weight vectors.
    Mono(MonoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct JobArgs {
    /// Comma-separated weights, any order.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alpha: Option<Vec<f64>>,
    /// Comma-separated subspace dimensions, any order.
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    /// JSON job file with `alpha` and `dims` (a `solve` document works too).
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Relative root tolerance of the fixed-point solve.
    #[arg(long)]
    pub tol_t: Option<f64>,
    /// Relative spread below which a spectrum counts as flat.
    #[arg(long)]
    pub tol_flat: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub job: JobArgs,
    /// Write water-filling profiles (group, index, weight, level) as CSV.
    #[arg(long)]
    pub plot_data: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Document produced by `solve`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub job: JobArgs,
    #[arg(long, env = "OPTFRAME_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
}

#[derive(Debug, Args)]
pub struct MonoArgs {
    #[command(flatten)]
    pub job: JobArgs,
    /// Smaller weights, entrywise at most `alpha` once both are sorted.
    #[arg(long, value_delimiter = ',')]
    pub beta: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
pub struct JobSpec {
    #[serde(default)]
    pub alpha: Vec<f64>,
    #[serde(default)]
    pub dims: Vec<usize>,
    #[serde(default)]
    pub beta: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PotentialValues {
    pub fp: f64,
    pub mse: f64,
}

/// Output of `solve`. Matrices are row-major; `partition` and `spectra` are
/// in canonical (sorted) order, the `_user_order` fields in the caller's.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveDocument {
    pub schema: u32,
    pub alpha: Vec<f64>,
    pub dims: Vec<usize>,
    pub alpha_sorted: Vec<f64>,
    pub dims_sorted: Vec<usize>,
    pub alpha_perm: Vec<usize>,
    pub dims_perm: Vec<usize>,
    pub partition: Vec<Vec<f64>>,
    pub partition_user_order: Vec<Vec<f64>>,
    pub spectra: Vec<Vec<f64>>,
    pub lambda_sorted: Vec<f64>,
    pub blocks: BlockSpectrum,
    pub t_seq: Vec<f64>,
    pub stop_iteration: usize,
    pub potentials: PotentialValues,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
}

impl SolveDocument {
    pub fn from_solution(sol: &PartitionSolution, cfg: &ToleranceConfig) -> Result<Self, Error> {
        let spec = SpectrumVector::from_groups(sol.spectra.clone());
        let user = sol.partition_user_order();
        Ok(Self {
            schema: SCHEMA_VERSION,
            alpha: sol.input.alpha_user(),
            dims: sol.input.dims_user(),
            alpha_sorted: sol.input.alpha().as_slice().to_vec(),
            dims_sorted: sol.input.dims().to_vec(),
            alpha_perm: sol.input.alpha_perm().to_vec(),
            dims_perm: sol.input.dims_perm().to_vec(),
            partition: sol.partition.rows(),
            partition_user_order: (0..user.nrows())
                .map(|i| user.row(i).iter().copied().collect())
                .collect(),
            spectra: sol.spectra.iter().map(|g| g.as_slice().to_vec()).collect(),
            lambda_sorted: sol.lambda.as_slice().to_vec(),
            blocks: sol.blocks.clone(),
            t_seq: sol.t_seq.clone(),
            stop_iteration: sol.stop_iteration,
            potentials: PotentialValues {
                fp: joint_potential(&spec, &Potential::frame())?,
                mse: joint_potential(&spec, &Potential::mse())?,
            },
            tolerances: *cfg,
        })
    }

    /// Rebuilds the solution exactly as stored, without re-solving, so that
    /// tampering is visible to [`verify_solution`].
    pub fn to_solution(&self) -> Result<PartitionSolution, Error> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::InvalidInput(format!("unsupported schema {}", self.schema)));
        }
        let input = ProblemInput::new(&self.alpha, &self.dims)?;
        let partition = WeightPartition::from_rows(&self.partition)?;
        let spectra = self
            .spectra
            .iter()
            .map(|g| SortedVector::from_unsorted(g))
            .collect::<Result<Vec<_>, _>>()?;
        let lambda = if spectra.is_empty() {
            SortedVector::zeros(0)
        } else {
            concat_sorted(&spectra)?
        };
        Ok(PartitionSolution {
            input,
            partition,
            spectra,
            t_seq: self.t_seq.clone(),
            stop_iteration: self.stop_iteration,
            lambda,
            blocks: self.blocks.clone(),
        })
    }
}

#[derive(Debug, Serialize)]
struct FamilyReport {
    group: usize,
    dim: usize,
    count: usize,
    /// `dim × count`, vector `i` in column `i` (caller's weight order).
    matrix: Vec<Vec<f64>>,
    norms_sq_target: Vec<f64>,
    norms_sq_achieved: Vec<f64>,
    spectrum_target: Vec<f64>,
    spectrum_achieved: Vec<f64>,
    max_norm_dev: f64,
    max_spectrum_dev: f64,
}

#[derive(Debug, Serialize)]
struct SynthDocument {
    schema: u32,
    alpha: Vec<f64>,
    dims: Vec<usize>,
    families: Vec<FamilyReport>,
    passed: bool,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            _ if e.is_input_error() => EXIT_USAGE,
            Error::InvalidInput(_) => EXIT_USAGE,
            _ => EXIT_INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

/// Parses `args` (including the program name) and runs the subcommand,
/// writing the document to `out` unless `--out` redirects it.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            if e.use_stderr() {
                eprint!("{e}");
            } else {
                let _ = write!(out, "{e}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("optframe: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Solve(a) => cmd_solve(&a, out),
        Command::Synth(a) => cmd_synth(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Sample(a) => cmd_sample(&a, out),
        Command::Mono(a) => cmd_mono(&a, out),
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("cannot parse {}: {e}", path.display())))
}

fn load_job(args: &JobArgs) -> Result<JobSpec, Failure> {
    let mut spec = match &args.input {
        Some(path) => read_json::<JobSpec>(path)?,
        None => JobSpec::default(),
    };
    if let Some(a) = &args.alpha {
        spec.alpha = a.clone();
    }
    if let Some(d) = &args.dims {
        spec.dims = d.clone();
    }
    if spec.alpha.is_empty() {
        return Err(usage("no weights: pass --alpha or --input"));
    }
    if spec.dims.is_empty() {
        return Err(usage("no dimensions: pass --dims or --input"));
    }
    Ok(spec)
}

fn tolerances(args: &JobArgs) -> Result<ToleranceConfig, Failure> {
    let mut cfg = ToleranceConfig::default();
    for (flag, value, slot) in [
        ("--tol-t", args.tol_t, &mut cfg.t_tol),
        ("--tol-flat", args.tol_flat, &mut cfg.flat_tol),
    ] {
        if let Some(v) = value {
            if !(v.is_finite() && v > 0.0) {
                return Err(usage(format!("{flag} must be positive, got {v}")));
            }
            *slot = v;
        }
    }
    Ok(cfg)
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure {
        code: EXIT_INTERNAL,
        message: format!("write failed: {e}"),
    };
    match path {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(io),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Failure {
            code: EXIT_INTERNAL,
            message: e.to_string(),
        })
}

/// Six significant digits, plain notation.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (5 - mag).clamp(0, 17) as usize;
    format!("{x:.decimals$}")
}

fn csv_row<'a>(cells: impl IntoIterator<Item = &'a f64>) -> String {
    cells.into_iter().map(|&x| sig6(x)).collect::<Vec<_>>().join(",")
}

fn matrix_csv(header: &str, rows: &[Vec<f64>]) -> String {
    let mut s = String::from(header);
    s.push('\n');
    for r in rows {
        s.push_str(&csv_row(r));
        s.push('\n');
    }
    s
}

fn plot_profile(sol: &PartitionSolution) -> String {
    let mut s = String::from("group,index,weight,level\n");
    for (j, gamma) in sol.spectra.iter().enumerate() {
        let mut col = sol.partition.column(j);
        col.sort_by(|a, b| b.total_cmp(a));
        for (i, w) in col.iter().enumerate() {
            let level = if i < gamma.len() { gamma[i] } else { 0.0 };
            s.push_str(&format!("{},{},{},{}\n", j + 1, i + 1, w, level));
        }
    }
    s
}

fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let job = load_job(&args.job)?;
    let cfg = tolerances(&args.job)?;
    let input = ProblemInput::new(&job.alpha, &job.dims)?;
    let sol = solve(&input, &cfg)?;
    if let Some(path) = &args.plot_data {
        fs::write(path, plot_profile(&sol)).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let doc = SolveDocument::from_solution(&sol, &cfg)?;
    let text = match args.job.format {
        Format::Json => to_json(&doc)?,
        Format::Csv => {
            let header = (1..=input.m()).map(|j| format!("group{j}")).collect::<Vec<_>>().join(",");
            matrix_csv(&header, &doc.partition)
        }
    };
    emit(out, args.job.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn solution_for_job(args: &JobArgs) -> Result<PartitionSolution, Failure> {
    if let Some(path) = &args.input {
        let value: serde_json::Value = read_json(path)?;
        if value.get("partition").is_some() && args.alpha.is_none() && args.dims.is_none() {
            let doc: SolveDocument =
                serde_json::from_value(value).map_err(|e| usage(format!("malformed solve document: {e}")))?;
            return Ok(doc.to_solution()?);
        }
    }
    let job = load_job(args)?;
    let cfg = tolerances(args)?;
    Ok(solve(&ProblemInput::new(&job.alpha, &job.dims)?, &cfg)?)
}

fn max_dev(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn cmd_synth(args: &JobArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let sol = solution_for_job(args)?;
    let design = synthesize_design(&sol)?;
    let achieved = lambda_vector(&design)?;
    let ap = sol.input.alpha_perm();
    let mut families = Vec::with_capacity(design.len());
    let mut passed = true;
    for &j in sol.input.dims_perm() {
        let f: &FrameFamily = &design[j];
        let target_norms: Vec<f64> = ap.iter().map(|&p| sol.partition.get(p, j)).collect();
        let norms_all = f.norms_sq();
        let norms: Vec<f64> = ap.iter().map(|&p| norms_all[p]).collect();
        let spectrum_target = sol.spectra[j].as_slice().to_vec();
        let spectrum_achieved = achieved.per_group[j].as_slice().to_vec();
        let norm_dev = max_dev(&norms, &target_norms);
        let spec_dev = max_dev(&spectrum_achieved, &spectrum_target);
        let scale = sol.input.alpha()[0].max(1.0);
        passed &= norm_dev <= 1e-10 * scale && spec_dev <= 1e-8 * scale;
        let t = f.synthesis();
        families.push(FamilyReport {
            group: families.len() + 1,
            dim: f.dim(),
            count: f.count(),
            matrix: (0..t.nrows())
                .map(|r| ap.iter().map(|&p| t[(r, p)]).collect())
                .collect(),
            norms_sq_target: target_norms,
            norms_sq_achieved: norms,
            spectrum_target,
            spectrum_achieved,
            max_norm_dev: norm_dev,
            max_spectrum_dev: spec_dev,
        });
    }
    let doc = SynthDocument {
        schema: SCHEMA_VERSION,
        alpha: sol.input.alpha_user(),
        dims: sol.input.dims_user(),
        families,
        passed,
    };
    let text = match args.format {
        Format::Json => to_json(&doc)?,
        Format::Csv => {
            let n = sol.input.n();
            let mut s = String::from("group,row");
            for i in 1..=n {
                s.push_str(&format!(",v{i}"));
            }
            s.push('\n');
            for fam in &doc.families {
                for (r, row) in fam.matrix.iter().enumerate() {
                    s.push_str(&format!("{},{},{}\n", fam.group, r + 1, csv_row(row)));
                }
            }
            s
        }
    };
    emit(out, args.out.as_deref(), &text)?;
    if passed {
        Ok(EXIT_OK)
    } else {
        Err(Failure {
            code: EXIT_INTERNAL,
            message: "synthesized frames miss their targets".into(),
        })
    }
}

#[derive(Debug, Serialize)]
struct VerifyDocument {
    schema: u32,
    passed: bool,
    checks: Vec<crate::partition::CheckResult>,
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let doc: SolveDocument = read_json(&args.input)?;
    let sol = doc.to_solution()?;
    let mut report = verify_solution(&sol.input, &sol, &doc.tolerances);

    // stored summary fields must agree with the stored spectra
    let recomputed = column_spectra(&sol.partition, sol.input.dims()).ok();
    let lambda_ok = recomputed
        .as_ref()
        .and_then(|s| concat_sorted(s).ok())
        .is_some_and(|l| {
            l.len() == doc.lambda_sorted.len()
                && max_dev(l.as_slice(), &doc.lambda_sorted) <= doc.tolerances.verify_tol * l[0].max(1.0)
        });
    report.checks.push(crate::partition::CheckResult {
        name: "lambda_sorted".into(),
        passed: lambda_ok,
        detail: if lambda_ok {
            "ok".into()
        } else {
            "stored sorted spectrum differs from the partition's".into()
        },
    });

    let passed = report.passed();
    let text = match args.format {
        Format::Json => to_json(&VerifyDocument {
            schema: SCHEMA_VERSION,
            passed,
            checks: report.checks,
        })?,
        Format::Csv => {
            let mut s = String::from("check,passed,detail\n");
            for c in &report.checks {
                s.push_str(&format!("{},{},\"{}\"\n", c.name, c.passed, c.detail.replace('"', "'")));
            }
            s
        }
    };
    emit(out, args.out.as_deref(), &text)?;
    Ok(if passed { EXIT_OK } else { EXIT_VIOLATION })
}

#[derive(Debug, Serialize)]
struct SampleDocument {
    schema: u32,
    alpha: Vec<f64>,
    dims: Vec<usize>,
    seed: u64,
    report: crate::oracle::OptimalityReport,
    violations: usize,
    passed: bool,
}

fn cmd_sample(args: &SampleArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let job = load_job(&args.job)?;
    if args.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    let input = ProblemInput::new(&job.alpha, &job.dims)?;
    let cfg = TrialConfig {
        seed: args.seed,
        trials: args.trials,
        ..TrialConfig::default()
    };
    let report = optimality_trial(&input, &cfg)?;
    let violations = report.violations();
    let text = match args.job.format {
        Format::Json => to_json(&SampleDocument {
            schema: SCHEMA_VERSION,
            alpha: job.alpha,
            dims: job.dims,
            seed: args.seed,
            violations,
            passed: violations == 0,
            report,
        })?,
        Format::Csv => {
            let mut s = format!(
                "potential,optimal,min_trial,violations,undefined\nmajorization,,,{},0\n",
                report.majorization_violations
            );
            for p in &report.potentials {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    p.name,
                    sig6(p.optimal),
                    sig6(p.min_trial),
                    p.violations,
                    p.undefined
                ));
            }
            s
        }
    };
    emit(out, args.job.out.as_deref(), &text)?;
    Ok(if violations == 0 { EXIT_OK } else { EXIT_VIOLATION })
}

#[derive(Debug, Serialize)]
struct MonoDocument {
    schema: u32,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    dims: Vec<usize>,
    report: crate::oracle::MonotonicityReport,
    passed: bool,
}

fn cmd_mono(args: &MonoArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let job = load_job(&args.job)?;
    let beta = args
        .beta
        .clone()
        .or(job.beta.clone())
        .ok_or_else(|| usage("no smaller weights: pass --beta"))?;
    let report = monotonicity_trial(&job.alpha, &beta, &job.dims, ToleranceConfig::default().verify_tol)?;
    let passed = report.passed();
    let text = match args.job.format {
        Format::Json => to_json(&MonoDocument {
            schema: SCHEMA_VERSION,
            alpha: job.alpha,
            beta,
            dims: job.dims,
            passed,
            report,
        })?,
        Format::Csv => {
            let mut s = String::from("group,index,larger,smaller\n");
            for (j, (l, sm)) in report.larger.iter().zip(&report.smaller).enumerate() {
                for i in 0..l.len() {
                    s.push_str(&format!("{},{},{},{}\n", j + 1, i + 1, sig6(l[i]), sig6(sm[i])));
                }
            }
            s
        }
    };
    emit(out, args.job.out.as_deref(), &text)?;
    Ok(if passed { EXIT_OK } else { EXIT_VIOLATION })
}
