use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use fjpop::bounds::{BoundReport, BoundVariant};
use fjpop::certify::{parse_certificate_text, verify_certificate, Certificate, VerificationReport};
use fjpop::fjkkt::{self, classify_point, SystemVariant, DEFAULT_CLASSIFY_TOL, DEFAULT_ENUMERATION_CAP};
use fjpop::par::{self, ExecMode};
use fjpop::poly::{Polynomial, rational_to_f64};
use fjpop::relax::{self, SdpProblem, SosProgram};
use fjpop::sdp::{self, export_sdpa, HierarchyOptions, HierarchyReport};
use fjpop::PopProblem;
use serde::Serialize;
use serde_json::json;

use crate::problem::{parse_variant, ProblemFile};
use crate::{CliError, Outcome};

#[derive(Debug, Parser)]
#[command(name = "fjpop", version, about = "Fritz John / KKT augmented moment-SOS hierarchies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// How the problem is relaxed; flags override the file's `options`.
#[derive(Debug, Clone, Default, Args)]
pub struct RelaxArgs {
    /// Optimality system: none, fj, fj+, kkt or kkt+.
    #[arg(long)]
    pub variant: Option<String>,
    /// Replace g by its product vector.
    #[arg(long)]
    pub products: bool,
    /// Use the denominator relaxation (θ from the file, or λ₀ for fj/fj+).
    #[arg(long)]
    pub denominator: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree bounds w and relaxation orders r.
    Bounds {
        /// fj, fj-sos, fj+, fj+-sos, fj-deno, kkt or kkt+; all when omitted.
        #[arg(long, value_parser = parse_bound_variant)]
        variant: Option<BoundVariant>,
        #[arg(short = 'n')]
        n: u64,
        #[arg(short = 'm')]
        m: u64,
        #[arg(short = 'd')]
        d: u64,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Write the moment relaxation of order k in SDPA sparse format.
    Build {
        file: PathBuf,
        #[arg(short = 'k')]
        k: u32,
        #[command(flatten)]
        relax: RelaxArgs,
        /// Output file; stdout when omitted.
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Solve the hierarchy for every order in range.
    Run {
        file: PathBuf,
        #[command(flatten)]
        relax: RelaxArgs,
        #[arg(long = "kmin")]
        k_min: Option<u32>,
        #[arg(long = "kmax")]
        k_max: Option<u32>,
        /// Solver tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long = "max-iter")]
        max_iter: Option<usize>,
        /// Also write each moment relaxation to DIR/k<k>.dat-s.
        #[arg(long = "export-sdpa", value_name = "DIR")]
        export_sdpa: Option<PathBuf>,
        /// Worker threads; 1 runs sequentially.
        #[arg(long)]
        jobs: Option<usize>,
        /// Emit CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Verify a certificate (JSON, or plain text with -k) against a problem.
    Certify {
        certificate: PathBuf,
        problem: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Order of the SOS program a plain-text certificate refers to.
        #[arg(short = 'k')]
        k: Option<u32>,
        #[command(flatten)]
        relax: RelaxArgs,
    },
    /// Fritz John / KKT status of a feasible point.
    Classify {
        file: PathBuf,
        /// Coordinates separated by commas or spaces.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = DEFAULT_CLASSIFY_TOL)]
        tol: f64,
    },
    /// Print the problem file in canonical form.
    Echo { file: PathBuf },
}

fn parse_bound_variant(s: &str) -> Result<BoundVariant, String> {
    s.parse().map_err(|e: fjpop::bounds::BoundError| e.to_string())
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(ProblemFile, PopProblem), CliError> {
    let file = ProblemFile::parse(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let pop = file.to_problem()?;
    Ok((file, pop))
}

fn hierarchy_options(file: &ProblemFile, relax: &RelaxArgs) -> Result<HierarchyOptions, CliError> {
    let o = &file.options;
    let variant = match relax.variant.as_deref().or(o.variant.as_deref()) {
        Some(v) => parse_variant(v)?,
        None => None,
    };
    let mut opts = HierarchyOptions {
        variant,
        use_products: relax.products || o.use_products.unwrap_or(false),
        denominator: relax.denominator || o.use_denominator.unwrap_or(false),
        k_min: o.k_min,
        ..HierarchyOptions::default()
    };
    if let Some(k) = o.k_max {
        opts.k_max = k;
    }
    if let Some(t) = o.tol {
        opts.solver.tol = t;
    }
    if let Some(i) = o.max_iter {
        opts.solver.max_iter = i;
    }
    if let Some(t) = o.stagnation_tol {
        opts.stagnation_tol = t;
    }
    Ok(opts)
}

fn moment_program(pop: &PopProblem, k: u32, denominator: bool) -> Result<SdpProblem, CliError> {
    if denominator {
        Ok(relax::build_denominator_sdp(pop, k).map_err(CliError::lib)?.0)
    } else {
        relax::build_moment_sdp(pop, k).map_err(CliError::lib)
    }
}

fn sos_program(pop: &PopProblem, k: u32, denominator: bool) -> Result<SosProgram, CliError> {
    if denominator {
        Ok(relax::build_denominator_sdp(pop, k).map_err(CliError::lib)?.1)
    } else {
        relax::build_sos_sdp(pop, k).map_err(CliError::lib)
    }
}

/// Runs one command, writing its report to `out`.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Bounds { variant, n, m, d, json } => cmd_bounds(variant, n, m, d, json, out),
        Command::Build { file, k, relax, output } => cmd_build(&file, k, &relax, output.as_deref(), out),
        Command::Run { file, relax, k_min, k_max, tol, max_iter, export_sdpa, jobs, csv } => {
            let (pf, pop) = load(&file)?;
            let mut opts = hierarchy_options(&pf, &relax)?;
            opts.k_min = k_min.or(opts.k_min);
            opts.k_max = k_max.unwrap_or(opts.k_max);
            if let Some(t) = tol {
                opts.solver.tol = t;
            }
            if let Some(i) = max_iter {
                opts.solver.max_iter = i;
            }
            if jobs == Some(1) {
                opts.mode = ExecMode::Sequential;
                opts.solver.mode = ExecMode::Sequential;
            }
            cmd_run(&pop, &opts, export_sdpa.as_deref(), jobs, csv, out)
        }
        Command::Certify { certificate, problem, tol, k, relax } => {
            cmd_certify(&certificate, &problem, tol, k, &relax, out)
        }
        Command::Classify { file, point, tol } => cmd_classify(&file, &point, tol, out),
        Command::Echo { file } => {
            let (pf, pop) = load(&file)?;
            let canonical = ProblemFile::from_problem(&pop, pf.options);
            writeln!(out, "{}", serde_json::to_string_pretty(&canonical).expect("serializable"))?;
            Ok(Outcome::Success)
        }
    }
}

fn cmd_bounds(
    variant: Option<BoundVariant>,
    n: u64,
    m: u64,
    d: u64,
    json: bool,
    out: &mut dyn Write,
) -> Result<Outcome, CliError> {
    let variants = variant.map_or(BoundVariant::ALL.to_vec(), |v| vec![v]);
    let reports = variants
        .into_iter()
        .map(|v| BoundReport::new(v, n, m, d))
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::lib)?;
    if json {
        let value = if reports.len() == 1 { json!(reports[0]) } else { json!(reports) };
        writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("serializable"))?;
    } else {
        for (i, r) in reports.iter().enumerate() {
            if i > 0 {
                writeln!(out)?;
            }
            writeln!(out, "{r}")?;
        }
    }
    Ok(Outcome::Success)
}

fn cmd_build(
    file: &Path,
    k: u32,
    relax: &RelaxArgs,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Result<Outcome, CliError> {
    let (pf, pop) = load(file)?;
    let opts = hierarchy_options(&pf, relax)?;
    let prepared = sdp::prepare(&pop, &opts).map_err(CliError::lib)?;
    let text = export_sdpa(&moment_program(&prepared, k, opts.denominator)?).to_text();
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct RunRow {
    k: u32,
    rho_k: Option<f64>,
    tau_k: Option<f64>,
    status: String,
    wall_ms: u128,
    moment_status: Option<String>,
    sos_status: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct RunSummary {
    stagnation_order: Option<u32>,
    final_rho: Option<f64>,
    monotone: bool,
    all_optimal: bool,
    /// Solver-status annotations for the rows.
    notes: Vec<String>,
}

fn summarize(report: &HierarchyReport) -> (Vec<RunRow>, RunSummary) {
    let rows: Vec<RunRow> = report
        .rows
        .iter()
        .map(|r| RunRow {
            k: r.k,
            rho_k: r.rho_k,
            tau_k: r.tau_k,
            status: r.status(),
            wall_ms: r.wall_ms,
            moment_status: r.moment_status.map(|s| s.to_string()),
            sos_status: r.sos_status.map(|s| s.to_string()),
            error: r.error.clone(),
        })
        .collect();
    let mut notes = Vec::new();
    for r in report.rows.iter().filter(|r| !r.all_optimal()) {
        notes.push(format!("k={}: {}", r.k, r.error.clone().unwrap_or_else(|| r.status())));
    }
    if !report.monotone {
        notes.push("rho_k decreases between optimal orders".into());
    }
    let summary = RunSummary {
        stagnation_order: report.stagnation_order,
        final_rho: report.final_rho(),
        monotone: report.monotone,
        all_optimal: report.all_optimal(),
        notes,
    };
    (rows, summary)
}

fn cmd_run(
    pop: &PopProblem,
    opts: &HierarchyOptions,
    export: Option<&Path>,
    jobs: Option<usize>,
    csv: bool,
    out: &mut dyn Write,
) -> Result<Outcome, CliError> {
    if let Some(dir) = export {
        std::fs::create_dir_all(dir)?;
        let prepared = sdp::prepare(pop, opts).map_err(CliError::lib)?;
        let k_min = opts.k_min.unwrap_or_else(|| relax::minimal_order(&prepared).max(1));
        for k in k_min..=opts.k_max {
            let text = export_sdpa(&moment_program(&prepared, k, opts.denominator)?).to_text();
            std::fs::write(dir.join(format!("k{k}.dat-s")), text)?;
        }
    }
    let report = par::with_threads(jobs, || sdp::run_hierarchy(pop, opts)).map_err(CliError::lib)?;
    let (rows, summary) = summarize(&report);
    if csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["k", "rho_k", "tau_k", "status", "wall_ms"]).map_err(csv_error)?;
        let num = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
        for r in &rows {
            w.write_record([r.k.to_string(), num(r.rho_k), num(r.tau_k), r.status.clone(), r.wall_ms.to_string()])
                .map_err(csv_error)?;
        }
        out.write_all(&w.into_inner().map_err(|e| CliError::Input(e.to_string()))?)?;
        writeln!(
            out,
            "# stagnation_order={} final_rho={} monotone={} all_optimal={}",
            summary.stagnation_order.map_or("none".into(), |k| k.to_string()),
            num(summary.final_rho),
            summary.monotone,
            summary.all_optimal
        )?;
    } else {
        let value = json!({ "rows": rows, "summary": summary });
        writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("serializable"))?;
    }
    Ok(if report.all_optimal() { Outcome::Success } else { Outcome::Incomplete })
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Input(e.to_string())
}

#[derive(Serialize)]
struct CertifyReport {
    #[serde(flatten)]
    verification: VerificationReport,
    xi: f64,
    /// Every Gram generator is 1 or a product of inequality constraints.
    generators_ok: bool,
    /// Every ideal generator is an equality of the problem or of an
    /// optimality system.
    ideal_ok: bool,
    /// The weight on `ξ` is 1 or a power of the denominator or of one variable.
    weight_ok: bool,
    passed: bool,
}

fn lift(p: &Polynomial, n: usize) -> Option<Polynomial> {
    (p.nvars() <= n).then(|| p.extend_vars(n - p.nvars()))
}

fn is_power_of(w: &Polynomial, base: &Polynomial) -> bool {
    let deg_b = base.degree().or_zero();
    if deg_b == 0 {
        return false;
    }
    let deg_w = w.degree().or_zero();
    deg_w % deg_b == 0 && base.pow(deg_w / deg_b) == *w
}

fn check_generators(cert: &Certificate, pop: &PopProblem) -> Result<(bool, bool, bool), CliError> {
    let n = cert.var_names.len();
    let mut allowed: Vec<Polynomial> = vec![Polynomial::one(n)];
    let products = fjkkt::products(&pop.g, DEFAULT_ENUMERATION_CAP).map_err(CliError::lib)?;
    allowed.extend(products.iter().chain(&pop.g).filter_map(|g| lift(g, n)));
    let mut ideal: Vec<Polynomial> = pop.h.iter().filter_map(|h| lift(h, n)).collect();
    for v in [SystemVariant::Fj, SystemVariant::FjPlus, SystemVariant::Kkt, SystemVariant::KktPlus] {
        let sys = fjkkt::build(pop, v);
        ideal.extend(sys.polynomials.iter().filter_map(|h| lift(h, n)));
    }
    let generators_ok = cert.gram.iter().all(|g| allowed.contains(&g.generator));
    let ideal_ok = cert.ideal.iter().all(|t| ideal.contains(&t.h));
    let w = &cert.xi_weight;
    let weight_ok = *w == Polynomial::one(n)
        || pop.theta.as_ref().and_then(|t| lift(t, n)).is_some_and(|t| is_power_of(w, &t))
        || (0..n).any(|i| is_power_of(w, &Polynomial::var(n, i)));
    Ok((generators_ok, ideal_ok, weight_ok))
}

fn cmd_certify(
    cert_path: &Path,
    problem_path: &Path,
    tol: f64,
    k: Option<u32>,
    relax: &RelaxArgs,
    out: &mut dyn Write,
) -> Result<Outcome, CliError> {
    let (pf, pop) = load(problem_path)?;
    let text = read(cert_path)?;
    let cert = if text.trim_start().starts_with('{') {
        Certificate::from_json(&text, &pop.var_names, &pop.f).map_err(CliError::lib)?
    } else {
        let k = k.ok_or_else(|| CliError::Input("a plain-text certificate needs -k".into()))?;
        let opts = hierarchy_options(&pf, relax)?;
        let prepared = sdp::prepare(&pop, &opts).map_err(CliError::lib)?;
        parse_certificate_text(&text, &sos_program(&prepared, k, opts.denominator)?).map_err(CliError::lib)?
    };
    let verification = verify_certificate(&cert, tol).map_err(CliError::lib)?;
    let (generators_ok, ideal_ok, weight_ok) = check_generators(&cert, &pop)?;
    let passed = verification.passed && generators_ok && ideal_ok && weight_ok;
    let report = CertifyReport {
        xi: rational_to_f64(&cert.xi),
        verification,
        generators_ok,
        ideal_ok,
        weight_ok,
        passed,
    };
    writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("serializable"))?;
    Ok(if passed { Outcome::Success } else { Outcome::Incomplete })
}

fn cmd_classify(file: &Path, point: &str, tol: f64, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let (_, pop) = load(file)?;
    let x = point
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| CliError::Input(format!("bad coordinate '{s}'"))))
        .collect::<Result<Vec<_>, _>>()?;
    let c = classify_point(&pop, &x, tol).map_err(CliError::lib)?;
    let value = json!({
        "fj": c.fj_holds,
        "kkt": c.kkt_holds,
        "in_W": c.in_w,
        "fj_multipliers": c.fj_multipliers,
        "kkt_multipliers": c.kkt_multipliers,
        "fj_residual": c.fj_residual,
        "kkt_residual": c.kkt_residual,
    });
    writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("serializable"))?;
    Ok(Outcome::Success)
}
