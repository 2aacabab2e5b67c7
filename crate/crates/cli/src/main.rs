//! `sl2`: generate, check, analyse and render SL2-tilings.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sl2_core::analysis::{enumerate_block_classes, rank_deficiency_report, RankMode, RankOptions};
use sl2_core::catalog::{pqrs_tiling, unit_tiling, wildest_integer_tiling, z36_tiling, PqrsParams};
use sl2_core::io::{
    parse_assignment, parse_grid, render_model_svg, render_window_svg, write_grid, ClassEntry,
    DensityEntry, GridDocument, GridKind, IoError, Parsed, RenderOptions, Report, ViolationEntry,
    WriteOptions,
};
use sl2_core::search::{
    brute_force_oracle, brute_force_oracle_for, search_fully_wild, SearchConfig, SearchResult,
    SearchTarget,
};
use sl2_core::tiling::{
    audit_model, corner_window, cross_window, dodgson_window, verify_sl2, wild_density_exact,
    wild_density_windows, window_violations, AuditKind, AuditOutcome, ParameterAssignment,
    TilingModel, Violation, Window,
};

#[derive(Parser)]
#[command(
    name = "sl2",
    version,
    about = "Toolkit for SL2-tilings and their wild entries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a catalog tiling in grid format.
    Generate(GenerateArgs),
    /// Check that every adjacent 2x2 minor is 1.
    Verify(VerifyArgs),
    /// Wild density, exact or sampled on discs.
    Density(DensityArgs),
    /// Equivalence classes of n x n blocks.
    Classes(ClassesArgs),
    /// Rank deficiency of each block class.
    Rank(RankArgs),
    /// Check the local identities on a window.
    Audit(AuditArgs),
    /// Search for fully wild periodic tilings over Z/N.
    Search(SearchArgs),
    /// Render a window as SVG.
    Render(RenderArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum CatalogModel {
    Unit,
    Wildest,
    Pqrs,
    Z36,
}

#[derive(Args)]
struct GenerateArgs {
    model: CatalogModel,
    #[arg(long, default_value_t = 3)]
    p: u64,
    #[arg(long, default_value_t = 2)]
    q: u64,
    #[arg(long, default_value_t = 4)]
    r: u64,
    #[arg(long, default_value_t = 3)]
    s: u64,
    /// Numeric parameters, e.g. `default=2,1:3=5`.
    #[arg(long, conflicts_with = "formal")]
    params: Option<String>,
    /// Keep the parameters as formal variables (the default).
    #[arg(long)]
    formal: bool,
    /// Print residues above N/2 as negative numbers.
    #[arg(long)]
    signed: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WindowArg {
    /// Rectangle `I0 J0 ROWS COLS`.
    #[arg(long, num_args = 4, value_names = ["I0", "J0", "ROWS", "COLS"], allow_negative_numbers = true)]
    window: Option<Vec<i64>>,
}

#[derive(Args)]
struct VerifyArgs {
    file: PathBuf,
    #[command(flatten)]
    window: WindowArg,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DensityArgs {
    file: PathBuf,
    #[arg(long, conflicts_with = "radii")]
    exact: bool,
    /// Disc radii, e.g. `10,100,500`.
    #[arg(long, value_delimiter = ',')]
    radii: Vec<u64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ClassesArgs {
    file: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Symbolic,
    Probe,
    Both,
}

#[derive(Args)]
struct RankArgs {
    file: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "symbolic")]
    mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    trials: u32,
    /// Allow symbolic elimination above n = 9.
    #[arg(long)]
    allow_large: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct AuditArgs {
    file: PathBuf,
    #[arg(long)]
    dodgson: bool,
    #[arg(long)]
    corner: bool,
    #[arg(long)]
    cross: bool,
    #[command(flatten)]
    window: WindowArg,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    modulus: u64,
    #[arg(long, default_value_t = 4)]
    rows: usize,
    #[arg(long, default_value_t = 4)]
    cols: usize,
    /// Only place non-units of Z/N.
    #[arg(long)]
    prune_nonunits: bool,
    /// Cross-check against exhaustive enumeration.
    #[arg(long)]
    oracle: bool,
    /// Stop after this many cell assignments.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Collect every SL2 block, not only the fully wild ones.
    #[arg(long)]
    all_sl2: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RenderArgs {
    file: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 24)]
    cell_size: u32,
    #[arg(long)]
    labels: bool,
    /// Render even if the input is not an SL2-tiling.
    #[arg(long)]
    force: bool,
    #[command(flatten)]
    window: WindowArg,
}

/// Failures mapped to exit codes: `Failed` is 1, `Usage` is 2.
enum CliError {
    Failed(String),
    Usage(String),
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Unverified(m) => CliError::Failed(m),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

type CliResult = Result<bool, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Verify(a) => verify(a),
        Command::Density(a) => density(a),
        Command::Classes(a) => classes(a),
        Command::Rank(a) => rank(a),
        Command::Audit(a) => audit(a),
        Command::Search(a) => search(a),
        Command::Render(a) => render(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Failed(m)) => {
            eprintln!("sl2: {m}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(m)) => {
            eprintln!("sl2: {m}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path) -> Result<Parsed, CliError> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let doc = parse_grid(&text).map_err(|e| {
        usage(format!(
            "{}:{}:{}: {}",
            path.display(),
            e.line,
            e.col,
            e.message
        ))
    })?;
    Ok(doc.into_parsed()?)
}

fn load_model(path: &Path) -> Result<TilingModel, CliError> {
    match load(path)? {
        Parsed::Model(t) => Ok(t),
        Parsed::Window(_) => Err(usage(format!(
            "{}: this command needs a periodic or patched tiling, not a window",
            path.display()
        ))),
    }
}

fn window_rect(arg: &WindowArg) -> Result<Option<(i64, i64, usize, usize)>, CliError> {
    let Some(v) = &arg.window else {
        return Ok(None);
    };
    if v[2] <= 0 || v[3] <= 0 {
        return Err(usage("window sizes must be positive"));
    }
    Ok(Some((v[0], v[1], v[2] as usize, v[3] as usize)))
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn generate(a: GenerateArgs) -> CliResult {
    let model = match a.model {
        CatalogModel::Unit => unit_tiling(),
        CatalogModel::Z36 => z36_tiling(),
        CatalogModel::Pqrs => pqrs_tiling(&PqrsParams::new(a.p, a.q, a.r, a.s).map_err(usage)?),
        CatalogModel::Wildest => {
            let assignment = match &a.params {
                Some(p) => {
                    parse_assignment(p).map_err(|e| usage(format!("--params: {}", e.message)))?
                }
                None => ParameterAssignment::Formal,
            };
            wildest_integer_tiling(assignment)
        }
    };
    let text = write_grid(
        &GridDocument::from_model(&model),
        WriteOptions { signed: a.signed },
    )?;
    write_out(a.out.as_deref(), &text)?;
    Ok(true)
}

fn describe(parsed: &Parsed) -> String {
    match parsed {
        Parsed::Model(t) => t.describe(),
        Parsed::Window(w) => format!("window {}x{} over {}", w.rows(), w.cols(), w.ring()),
    }
}

fn verify(a: VerifyArgs) -> CliResult {
    let parsed = load(&a.file)?;
    let rect = window_rect(&a.window)?;
    let violations: Vec<Violation> = match (&parsed, rect) {
        (Parsed::Model(t), None) => verify_sl2(t).err().into_iter().collect(),
        (Parsed::Model(t), Some((i0, j0, h, w))) => {
            window_violations(&t.extract_window(i0, j0, h, w))
        }
        (Parsed::Window(w), None) => window_violations(w),
        (Parsed::Window(_), Some(_)) => {
            return Err(usage("--window applies to tilings, not windows"))
        }
    };
    let ok = violations.is_empty();
    if a.json {
        let mut r = Report::new("verify", &describe(&parsed));
        r.ok = ok;
        r.violations = violations.iter().map(ViolationEntry::from).collect();
        println!("{}", r.to_json());
    } else if ok {
        println!("ok: every adjacent 2x2 minor is 1 ({})", describe(&parsed));
    } else {
        for v in &violations {
            println!("violation: 2x2 minor at ({}, {}) is {}", v.i, v.j, v.det);
        }
    }
    Ok(ok)
}

fn density(a: DensityArgs) -> CliResult {
    let t = load_model(&a.file)?;
    let entry = if a.radii.is_empty() {
        match wild_density_exact(&t) {
            Ok(d) => DensityEntry::exact(d),
            Err(e) if a.exact => return Err(usage(e)),
            Err(_) => DensityEntry::samples(&wild_density_windows(&t, &[10, 50, 100])),
        }
    } else {
        DensityEntry::samples(&wild_density_windows(&t, &a.radii))
    };
    if a.json {
        let mut r = Report::new("density", &t.describe());
        r.density = Some(entry);
        println!("{}", r.to_json());
        return Ok(true);
    }
    match entry {
        DensityEntry::Exact {
            exact_num,
            exact_den,
        } => {
            println!("wild density {exact_num}/{exact_den}");
        }
        DensityEntry::Samples { samples } => {
            for s in samples {
                println!(
                    "r = {}: {} wild of {} ({:.6})",
                    s.radius,
                    s.wild,
                    s.total,
                    s.wild as f64 / s.total as f64
                );
            }
        }
    }
    Ok(true)
}

fn classes(a: ClassesArgs) -> CliResult {
    let t = load_model(&a.file)?;
    let classes = enumerate_block_classes(&t, a.n).map_err(usage)?;
    if a.json {
        let mut r = Report::new("classes", &t.describe());
        r.classes = classes.iter().map(ClassEntry::from).collect();
        r.stat("n", a.n).stat("count", classes.len());
        println!("{}", r.to_json());
    } else {
        println!("{} classes of {}x{} blocks", classes.len(), a.n, a.n);
        for c in &classes {
            println!("orbit {:>2}  {}", c.orbit_size, c.encoding);
        }
    }
    Ok(true)
}

fn rank(a: RankArgs) -> CliResult {
    let t = load_model(&a.file)?;
    let opts = RankOptions {
        mode: match a.mode {
            ModeArg::Symbolic => RankMode::Symbolic,
            ModeArg::Probe => RankMode::Probe,
            ModeArg::Both => RankMode::Both,
        },
        seed: a.seed,
        trials: a.trials,
        allow_large: a.allow_large,
    };
    let report = rank_deficiency_report(&t, a.n, opts).map_err(usage)?;
    if a.json {
        let mut r = Report::new("rank", &t.describe());
        r.classes = report.classes.iter().map(ClassEntry::from).collect();
        r.stat("n", a.n)
            .stat("max_deficiency", report.max_deficiency());
        println!("{}", r.to_json());
    } else {
        for c in &report.classes {
            let method = ClassEntry::from(c).method.unwrap_or_default();
            println!(
                "deficiency {} ({method})  {}",
                c.deficiency, c.class.encoding
            );
        }
    }
    Ok(true)
}

fn audit(a: AuditArgs) -> CliResult {
    let parsed = load(&a.file)?;
    let mut kinds = Vec::new();
    if a.dodgson {
        kinds.push(AuditKind::Dodgson);
    }
    if a.corner {
        kinds.push(AuditKind::Corner);
    }
    if a.cross {
        kinds.push(AuditKind::Cross);
    }
    if kinds.is_empty() {
        kinds = vec![AuditKind::Dodgson, AuditKind::Corner];
        let domain = match &parsed {
            Parsed::Model(t) => t.ring().is_domain(),
            Parsed::Window(w) => w.ring().is_domain(),
        };
        // The cross audit only makes sense without zero divisors.
        if domain {
            kinds.push(AuditKind::Cross);
        }
    }
    let rect = window_rect(&a.window)?;
    let mut outcomes: Vec<AuditOutcome> = Vec::new();
    for kind in kinds {
        let outcome = match &parsed {
            Parsed::Model(t) => {
                let (i0, j0, h, w) = rect.unwrap_or((0, 0, 40, 40));
                audit_model(t, kind, i0, j0, h, w).map_err(usage)?
            }
            Parsed::Window(w) => {
                if rect.is_some() {
                    return Err(usage("--window applies to tilings, not windows"));
                }
                match kind {
                    AuditKind::Dodgson => dodgson_window(w),
                    AuditKind::Corner => corner_window(w),
                    AuditKind::Cross => cross_window(w).map_err(usage)?,
                }
            }
        };
        outcomes.push(outcome);
    }
    let ok = outcomes.iter().all(AuditOutcome::is_ok);
    if a.json {
        let mut r = Report::new("audit", &describe(&parsed));
        r.ok = ok;
        for o in &outcomes {
            r.stat(&format!("{}_checked", o.kind), o.checked);
            if let Some(c) = &o.counterexample {
                r.stat(&format!("{}_counterexample", o.kind), c.to_string());
            }
        }
        println!("{}", r.to_json());
    } else {
        for o in &outcomes {
            match &o.counterexample {
                None => println!("{}: ok ({} centres)", o.kind, o.checked),
                Some(c) => println!("{c}"),
            }
        }
    }
    Ok(ok)
}

fn search_documents(r: &SearchResult) -> Result<String, CliError> {
    let mut out = Vec::new();
    for k in 0..r.solutions.len() {
        let w = Window::new((0, 0), r.block_matrix(k));
        let mut doc = GridDocument::from_window(&w);
        doc.kind = GridKind::Periodic;
        doc.origin = None;
        out.push(write_grid(&doc, WriteOptions::default())?);
    }
    Ok(out.join("---\n"))
}

fn search(a: SearchArgs) -> CliResult {
    let config = SearchConfig {
        modulus: a.modulus,
        rows: a.rows,
        cols: a.cols,
        prune_nonunits: a.prune_nonunits,
        node_budget: a.budget,
        worker_count: a.jobs,
        first_row: None,
        target: if a.all_sl2 {
            SearchTarget::AnySl2
        } else {
            SearchTarget::FullyWild
        },
    };
    let result = search_fully_wild(&config).map_err(usage)?;
    let mut ok = true;
    let mut oracle_note = String::new();
    if a.oracle {
        let oracle = if a.all_sl2 {
            brute_force_oracle_for(SearchTarget::AnySl2, a.modulus, a.rows, a.cols, false)
        } else {
            brute_force_oracle(a.modulus, a.rows, a.cols, false)
        }
        .map_err(usage)?;
        ok = oracle.solutions == result.solutions || result.stats.budget_exhausted;
        oracle_note = format!(
            ", oracle {} ({})",
            oracle.solutions.len(),
            if ok { "agrees" } else { "DISAGREES" }
        );
    }
    let s = &result.stats;
    if a.json {
        let mut r = Report::new("search", &format!("Z/{} {}x{}", a.modulus, a.rows, a.cols));
        r.ok = ok;
        r.stat("nodes", s.nodes)
            .stat("solutions", s.solutions)
            .stat("budget_exhausted", s.budget_exhausted)
            .stat("elapsed_ms", s.elapsed.as_millis() as u64)
            .stat("blocks", &result.solutions);
        println!("{}", r.to_json());
    } else {
        let docs = search_documents(&result)?;
        if !docs.is_empty() {
            println!("{docs}---");
        }
        println!(
            "# Z/{} {}x{}: {} solutions, {} nodes, {} ms{}{}",
            a.modulus,
            a.rows,
            a.cols,
            result.solutions.len(),
            s.nodes,
            s.elapsed.as_millis(),
            if s.budget_exhausted {
                ", budget exhausted"
            } else {
                ""
            },
            oracle_note
        );
    }
    Ok(ok)
}

fn render(a: RenderArgs) -> CliResult {
    let parsed = load(&a.file)?;
    let opts = RenderOptions {
        cell_size: a.cell_size,
        labels: a.labels,
        force: a.force,
    };
    let rect = window_rect(&a.window)?;
    let svg = match &parsed {
        Parsed::Model(t) => {
            let (i0, j0, h, w) = rect.unwrap_or_else(|| {
                let (pi, pj) = t.period();
                (0, 0, (2 * pi).clamp(8, 40), (2 * pj).clamp(8, 40))
            });
            render_model_svg(t, i0, j0, h, w, &opts)?
        }
        Parsed::Window(w) => {
            if rect.is_some() {
                return Err(usage("--window applies to tilings, not windows"));
            }
            render_window_svg(w, &opts)?
        }
    };
    write_out(Some(&a.out), &svg)?;
    Ok(true)
}
