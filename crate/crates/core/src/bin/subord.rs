use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use subord::admissibility::{boundary_scan, hyperbolic_rho_grid, PsiSpec, DEFAULT_DEPTH, DEFAULT_RHO_POINTS, RHO_CAP};
use subord::classes::{classify_starlike, MemberDescriptor, ParameterSet, SamplerConfig};
use subord::expressions::{PremiseKind, Theorem};
use subord::harness::{self, check_member, HarnessConfig, VerificationReport, CSV_HEADER};
use subord::hunter::{hunt_on, search_grid, HuntSpec};
use subord::subordination::SampleGrid;
use subord::thresholds::{k_bracket, sigma_max, threshold_set, ThresholdSet, Variant};
use subord::{admissibility, expressions, Error};

const DEFAULT_SEED: u64 = 7;

#[derive(Parser)]
#[command(name = "subord", version, about = "Differential subordination verification toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print every threshold for one parameter choice.
    Threshold {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check one member from a JSON descriptor.
    Check {
        /// Member descriptor file.
        #[arg(long)]
        member: PathBuf,
        /// Result whose premise and conclusion are checked (e.g. L2_5, T2_1.3).
        #[arg(long)]
        result: Option<String>,
        /// Test starlikeness of the given order instead.
        #[arg(long, allow_hyphen_values = true)]
        starlike: Option<f64>,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sampled premise => conclusion checks.
    Verify {
        /// `default` (analytic results), `meromorphic`, or `all`.
        #[arg(long)]
        suite: Option<String>,
        /// Single result, with parameters from the flags.
        #[arg(long)]
        result: Option<String>,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        sampler: SamplerArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Scan Re psi(i rho, sigma) on and below the admissibility boundary.
    Admissibility {
        #[arg(long)]
        lemma: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_RHO_POINTS)]
        points: usize,
        /// Largest admissible max Re psi.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Search for implication violations under a weakened threshold.
    Hunt {
        #[arg(long)]
        result: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 2000)]
        budget: usize,
        #[arg(long, default_value_t = 6)]
        refine_steps: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        sampler: SamplerArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args, Clone)]
struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    #[arg(long)]
    n: Option<u32>,
    /// Fixed coefficient of the function-level member.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "mu")]
    b: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Comma-separated sampling radii.
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    #[arg(long)]
    angles: Option<usize>,
    /// Strictness margin for verdicts.
    #[arg(long = "tol")]
    tol: Option<f64>,
}

#[derive(Args, Clone)]
struct SamplerArgs {
    /// Series order of sampled members.
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    decay: Option<f64>,
    /// Rejection budget per sampled member.
    #[arg(long = "sampler-budget")]
    sampler_budget: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output file (directory for `verify` and `hunt`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

/// Errors mapped to exit code 2.
struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

impl From<std::io::Error> for Usage {
    fn from(e: std::io::Error) -> Self {
        Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Usage {
    fn from(e: serde_json::Error) -> Self {
        Usage(e.to_string())
    }
}

type CmdResult = Result<bool, Usage>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Usage> {
    Err(Usage(msg.into()))
}

impl GridArgs {
    fn build(&self, base: SampleGrid) -> Result<SampleGrid, Usage> {
        let grid = SampleGrid {
            radii: self.radii.clone().unwrap_or(base.radii),
            angles: self.angles.unwrap_or(base.angles),
            tol: self.tol.unwrap_or(base.tol),
        };
        grid.validate()?;
        Ok(grid)
    }
}

impl SamplerArgs {
    fn build(&self) -> SamplerConfig {
        let d = SamplerConfig::default();
        SamplerConfig {
            order: self.order.unwrap_or(d.order),
            decay: self.decay.unwrap_or(d.decay),
            budget: self.sampler_budget.unwrap_or(d.budget),
            ..d
        }
    }
}

impl ParamArgs {
    fn beta(&self) -> Result<f64, Usage> {
        self.beta.ok_or_else(|| Usage("--beta is required".into()))
    }

    /// Parameter set for `kind`; `--b` is converted through the theorem's
    /// coupling, and `fallback_mu` fills in a missing `--mu`.
    fn resolve(&self, kind: Option<PremiseKind>, fallback_mu: Option<f64>) -> Result<ParameterSet, Usage> {
        let n = self.n.unwrap_or(1);
        let mu = match (self.mu, self.b, kind) {
            (Some(mu), _, _) => mu,
            (None, Some(b), Some(PremiseKind::Theorem { theorem, .. })) => theorem.mu_from_b(n, b),
            (None, Some(_), _) => return usage("--b only applies to theorem results; use --mu"),
            (None, None, _) => match fallback_mu {
                Some(mu) => mu,
                None => return usage("--mu (or --b for a theorem) is required"),
            },
        };
        Ok(ParameterSet::new(self.alpha.unwrap_or(1.0), self.beta()?, self.gamma.unwrap_or(1.0), n, mu)?)
    }
}

/// Writes `contents` to `path` through a sibling temporary file.
fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)
}

fn emit(output: &OutputArgs, contents: &str) -> Result<(), Usage> {
    match &output.out {
        Some(path) => write_atomic(path, contents)?,
        None => print!("{contents}"),
    }
    Ok(())
}

fn json<T: Serialize>(v: &T) -> Result<String, Usage> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn parse_kind(id: &str) -> Result<PremiseKind, Usage> {
    Ok(id.parse::<PremiseKind>()?)
}

#[derive(Serialize)]
struct ThresholdRow {
    label: String,
    n: u32,
    mu: f64,
    k: f64,
    delta1: f64,
    delta2: f64,
    delta3: f64,
    delta4: f64,
}

#[derive(Serialize)]
struct ThresholdTable {
    alpha: f64,
    beta: f64,
    gamma: f64,
    rows: Vec<ThresholdRow>,
    lemmas: Vec<(String, Option<f64>)>,
    sigma_max: Vec<(f64, f64)>,
}

// `+ 0.0` folds -0 into 0 for display
fn row(label: &str, p: &ParameterSet, t: &ThresholdSet) -> ThresholdRow {
    ThresholdRow {
        label: label.to_string(),
        n: p.n,
        mu: p.mu,
        k: p.k(),
        delta1: t.delta1 + 0.0,
        delta2: t.delta2 + 0.0,
        delta3: t.delta3 + 0.0,
        delta4: t.delta4 + 0.0,
    }
}

fn cmd_threshold(params: &ParamArgs, output: &OutputArgs) -> CmdResult {
    let beta = params.beta()?;
    let n = params.n.unwrap_or(1);
    let alpha = params.alpha.unwrap_or(1.0);
    let gamma = params.gamma.unwrap_or(1.0);
    let mut rows = Vec::new();
    let base = match (params.mu, params.b) {
        (Some(mu), _) => {
            let p = ParameterSet::new(alpha, beta, gamma, n, mu)?;
            rows.push(row("analytic", &p, &threshold_set(&p, Variant::Analytic)?));
            rows.push(row("meromorphic", &p, &threshold_set(&p, Variant::Meromorphic)?));
            p
        }
        (None, Some(b)) => {
            let mut first = None;
            for theorem in Theorem::ALL {
                let (tn, variant) = match theorem {
                    // thresholds follow the computed p, whose leading power is n + 1
                    Theorem::MeromorphicStarlike => (n + 1, Variant::Meromorphic),
                    _ => (n, Variant::Analytic),
                };
                let Ok(p) = ParameterSet::new(alpha, beta, gamma, tn, theorem.mu_from_b(n, b)) else { continue };
                rows.push(row(theorem.id(), &p, &threshold_set(&p, variant)?));
                first.get_or_insert(p);
            }
            match first {
                Some(p) => p,
                None => return usage(format!("no theorem admits b = {b} with n = {n}")),
            }
        }
        (None, None) => return usage("--mu or --b is required"),
    };
    let lemma_params = ParameterSet { n, ..base };
    let lemmas = expressions::Lemma::ALL
        .iter()
        .map(|l| (l.id().to_string(), admissibility::lemma_threshold(*l, &lemma_params).ok().map(|d| d + 0.0)))
        .collect();
    let sigma = [0.0, 0.5, 1.0, 2.0, 5.0]
        .iter()
        .map(|&rho| Ok((rho, sigma_max(rho, base.n, base.mu)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    let table = ThresholdTable { alpha, beta, gamma, rows, lemmas, sigma_max: sigma };
    let text = match output.format.unwrap_or(Format::Text) {
        Format::Json => json(&table)?,
        Format::Csv => {
            let mut s = String::from("label,n,mu,k,delta1,delta2,delta3,delta4\n");
            for r in &table.rows {
                let _ = writeln!(s, "{},{},{},{},{},{},{},{}", r.label, r.n, r.mu, r.k, r.delta1, r.delta2, r.delta3, r.delta4);
            }
            s
        }
        Format::Text => {
            let mut s = format!("alpha = {alpha}, beta = {beta}, gamma = {gamma}\n");
            let _ = writeln!(s, "{:<12} {:>3} {:>8} {:>10} {:>20} {:>20} {:>20} {:>20}", "", "n", "mu", "K", "delta1", "delta2", "delta3", "delta4");
            for r in &table.rows {
                let _ = writeln!(
                    s,
                    "{:<12} {:>3} {:>8} {:>10.6} {:>20} {:>20} {:>20} {:>20}",
                    r.label, r.n, r.mu, r.k, r.delta1, r.delta2, r.delta3, r.delta4
                );
            }
            let _ = writeln!(s, "lemma thresholds (n = {n}, mu = {}):", lemma_params.mu);
            for (id, d) in &table.lemmas {
                let _ = writeln!(s, "  {id}: {}", d.map_or("outside domain".to_string(), |d| d.to_string()));
            }
            let _ = writeln!(s, "sigma_max (K = {}):", k_bracket(base.n, base.mu));
            for (rho, v) in &table.sigma_max {
                let _ = writeln!(s, "  rho = {rho}: {v}");
            }
            s
        }
    };
    emit(output, &text)?;
    Ok(true)
}

fn cmd_check(
    member: &Path,
    result: Option<&str>,
    starlike: Option<f64>,
    params: &ParamArgs,
    grid: &GridArgs,
    output: &OutputArgs,
) -> CmdResult {
    let desc: MemberDescriptor = serde_json::from_str(&std::fs::read_to_string(member)?)?;
    let (spec, f) = desc.to_member()?;
    let grid = grid.build(SampleGrid::default())?;
    let fmt = output.format.unwrap_or(Format::Json);
    match (result, starlike) {
        (Some(_), Some(_)) => usage("--result and --starlike are exclusive"),
        (None, None) => usage("one of --result or --starlike is required"),
        (None, Some(beta)) => {
            let check = classify_starlike(&f, beta, &grid)?;
            #[derive(Serialize)]
            struct Out {
                beta: f64,
                starlike: bool,
                verdict: subord::subordination::Verdict,
                margin: f64,
            }
            let out = Out { beta, starlike: check.is_starlike(), verdict: check.verdict, margin: check.margin };
            let text = match fmt {
                Format::Text => format!("starlike of order {beta}: {} (margin {})\n", out.starlike, out.margin),
                Format::Csv => format!("beta,starlike,margin\n{},{},{}\n", beta, out.starlike, out.margin),
                Format::Json => json(&out)?,
            };
            emit(output, &text)?;
            Ok(out.starlike)
        }
        (Some(id), None) => {
            let kind = parse_kind(id)?;
            if kind.family() != spec.family {
                return usage(format!("{kind} needs a {:?} member, file holds {:?}", kind.family(), spec.family));
            }
            let fallback = match kind {
                PremiseKind::Lemma(_) => spec.fixed,
                PremiseKind::Theorem { theorem, .. } => theorem.mu_from_b(spec.n, spec.fixed),
            };
            let mut params = params.clone();
            params.n.get_or_insert(spec.n);
            let p = params.resolve(Some(kind), Some(fallback))?;
            let out = check_member(kind, p, &f, &grid)?;
            let text = match fmt {
                Format::Text => format!(
                    "{}: premise {:?} (margin {}), conclusion {:?} (margin {}), violation: {}\n",
                    out.result_id, out.premise.verdict, out.premise.margin, out.conclusion.verdict, out.conclusion.margin, out.violation
                ),
                Format::Csv => format!(
                    "result_id,premise_margin,conclusion_margin,violation\n{},{},{},{}\n",
                    out.result_id, out.premise.margin, out.conclusion.margin, out.violation
                ),
                Format::Json => json(&out)?,
            };
            emit(output, &text)?;
            Ok(!out.violation)
        }
    }
}

fn csv_summary(reports: &[VerificationReport]) -> String {
    let mut s = format!("{CSV_HEADER}\n");
    for r in reports {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    suite: Option<&str>,
    result: Option<&str>,
    params: &ParamArgs,
    trials: usize,
    seed: u64,
    sampler: &SamplerArgs,
    grid: &GridArgs,
    output: &OutputArgs,
) -> CmdResult {
    let cfg = HarnessConfig { grid: grid.build(SampleGrid::default())?, sampler: sampler.build() };
    let cells = match (suite, result) {
        (Some(_), Some(_)) => return usage("--suite and --result are exclusive"),
        (None, None) => return usage("one of --suite or --result is required"),
        (Some("default"), None) => harness::default_suite(),
        (Some("meromorphic"), None) => harness::meromorphic_suite(),
        (Some("all"), None) => {
            let mut c = harness::default_suite();
            c.extend(harness::meromorphic_suite());
            c
        }
        (Some(other), None) => return usage(format!("unknown suite {other:?}")),
        (None, Some(id)) => {
            let kind = parse_kind(id)?;
            vec![(kind, params.resolve(Some(kind), None)?)]
        }
    };
    let reports = cells
        .iter()
        .map(|(kind, p)| harness::verify(*kind, *p, trials, seed, &cfg))
        .collect::<Result<Vec<_>, Error>>()?;
    // the meromorphic result is reported, not asserted
    let clean = reports
        .iter()
        .filter(|r| !r.result_id.starts_with(Theorem::MeromorphicStarlike.id()))
        .all(|r| r.implication_violations == 0);
    let report_json = json(&reports)?;
    let summary = csv_summary(&reports);
    if let Some(dir) = &output.out {
        write_atomic(&dir.join("verify_report.json"), &report_json)?;
        write_atomic(&dir.join("verify_summary.csv"), &summary)?;
    }
    match output.format.unwrap_or(Format::Text) {
        Format::Json => print!("{report_json}"),
        Format::Csv => print!("{summary}"),
        Format::Text => {
            for r in &reports {
                println!(
                    "{:<8} alpha={:<4} beta={:<5} gamma={:<4} n={} mu={:<5} premise {:>4}/{} violations {}",
                    r.result_id, r.params.alpha, r.params.beta, r.params.gamma, r.params.n, r.params.mu, r.premise_pass, r.trials, r.implication_violations
                );
            }
            let total: usize = reports.iter().map(|r| r.implication_violations).sum();
            println!("{} cells, {total} violations", reports.len());
        }
    }
    Ok(clean)
}

fn cmd_admissibility(lemma: &str, params: &ParamArgs, depth: usize, points: usize, tol: f64, output: &OutputArgs) -> CmdResult {
    let lemma = match parse_kind(lemma)? {
        PremiseKind::Lemma(l) => l,
        other => return usage(format!("{other} is not a lemma")),
    };
    let p = params.resolve(Some(PremiseKind::Lemma(lemma)), None)?;
    let spec = PsiSpec::new(lemma, p)?;
    let scan = boundary_scan(&spec, &hyperbolic_rho_grid(points, RHO_CAP), depth)?;
    eprintln!(
        "{}: delta = {}, max Re psi = {} at rho = {}, sigma = {} ({} pole points skipped)",
        lemma.id(),
        spec.delta,
        scan.max_re,
        scan.argmax.rho,
        scan.argmax.sigma,
        scan.skipped.len()
    );
    let text = match output.format.unwrap_or(Format::Csv) {
        Format::Json => json(&scan)?,
        Format::Csv => scan.to_csv(),
        Format::Text => format!(
            "max Re psi = {} at rho = {}, sigma = {}\nadmissible: {}\n",
            scan.max_re,
            scan.argmax.rho,
            scan.argmax.sigma,
            scan.admissible(tol)
        ),
    };
    emit(output, &text)?;
    Ok(scan.admissible(tol))
}

#[allow(clippy::too_many_arguments)]
fn cmd_hunt(
    result: &str,
    params: &ParamArgs,
    epsilon: f64,
    budget: usize,
    refine_steps: usize,
    seed: u64,
    sampler: &SamplerArgs,
    grid: &GridArgs,
    output: &OutputArgs,
) -> CmdResult {
    let kind = parse_kind(result)?;
    let p = params.resolve(Some(kind), None)?;
    let mut spec = HuntSpec::new(kind, epsilon, budget)?;
    spec.refine_steps = refine_steps;
    let report = hunt_on(&spec, p, seed, &sampler.build(), &grid.build(search_grid())?)?;
    let report_json = json(&report)?;
    if let Some(dir) = &output.out {
        for (i, w) in report.witnesses.iter().enumerate() {
            write_atomic(&dir.join(format!("witness_{i}.json")), &json(&w.member)?)?;
        }
        write_atomic(&dir.join("hunt_report.json"), &report_json)?;
    }
    match output.format.unwrap_or(Format::Text) {
        Format::Json => print!("{report_json}"),
        Format::Csv => {
            println!("restart,premise_margin,conclusion_margin,objective");
            for w in &report.witnesses {
                println!("{},{},{},{}", w.restart, w.premise_margin, w.conclusion_margin, w.objective);
            }
        }
        Format::Text => println!(
            "{}: epsilon = {}, premise abscissa {} -> {}, {} evaluations, {} witnesses (best objective {})",
            report.result_id,
            report.epsilon,
            report.delta,
            report.weakened_abscissa,
            report.evaluations,
            report.witnesses.len(),
            report.best_objective
        ),
    }
    Ok(report.witnesses.is_empty())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.cmd {
        Cmd::Threshold { params, output } => cmd_threshold(params, output),
        Cmd::Check { member, result, starlike, params, grid, output } => {
            cmd_check(member, result.as_deref(), *starlike, params, grid, output)
        }
        Cmd::Verify { suite, result, params, trials, seed, sampler, grid, output } => {
            cmd_verify(suite.as_deref(), result.as_deref(), params, *trials, *seed, sampler, grid, output)
        }
        Cmd::Admissibility { lemma, params, depth, points, tol, output } => {
            cmd_admissibility(lemma, params, *depth, *points, *tol, output)
        }
        Cmd::Hunt { result, params, epsilon, budget, refine_steps, seed, sampler, grid, output } => {
            cmd_hunt(result, params, *epsilon, *budget, *refine_steps, *seed, sampler, grid, output)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(msg)) => {
            let _ = Cli::command().error(clap::error::ErrorKind::ValueValidation, msg).print();
            ExitCode::from(2)
        }
    }
}
