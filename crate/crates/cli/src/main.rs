//! `partreg`, the command-line front end: structures, colorings, patterns,
//! and budgets wired into the checkers, searchers, and constructors, with a
//! manifest written per run.
//!
//! Exit codes: 0 verdict produced, 1 precondition failure, 2 budget or
//! window exhaustion, 3 input error.

mod manifest;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use partreg::algebra::{parse_structure, GroundStructure, HomOps, Homomorphism, OpKind};
use partreg::constructive::{
    bowen_thick_tree, replay, thick_syndetic_constructor, BruteForceOracle, ConstructionTrace,
    FailKind, ReplayInputs,
};
use partreg::largeness::{
    compute_d_set, is_combinatorially_rich, is_ipr, is_ipr_star, is_piecewise_syndetic,
    is_syndetic, is_thick, Budget, DSetQuery, Verdict,
};
use partreg::mask::{format_subset, parse_subset};
use partreg::patterns::{
    find_monochromatic_par, parse_pattern, verify_instance, Coloring, ExpandedPattern,
};
use partreg::search::{
    check_coloring, compute_threshold, enumerate_avoiding, export_cnf, random_coloring_experiment,
    AvoidOutcome, Preset, SearchConfig, ThresholdStatus,
};
use partreg::SubsetMask;

use manifest::Manifest;

#[derive(Parser)]
#[command(
    name = "partreg",
    version,
    about = "Partition-regularity laboratory for finite semigroups and semirings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structure axioms and diagnostics
    Algebra {
        #[command(subcommand)]
        cmd: AlgebraCmd,
    },
    /// Largeness checkers
    Largeness {
        #[command(subcommand)]
        cmd: LargenessCmd,
    },
    /// D-set computation
    Dset {
        #[command(subcommand)]
        cmd: DsetCmd,
    },
    /// Monochromatic pattern search over a fixed coloring
    Pattern {
        #[command(subcommand)]
        cmd: PatternCmd,
    },
    /// Avoiding-coloring search, thresholds, CNF export, experiments
    Search {
        #[command(subcommand)]
        cmd: SearchCmd,
    },
    /// Constructive executors and trace replay
    Construct {
        #[command(subcommand)]
        cmd: ConstructCmd,
    },
}

#[derive(Args)]
struct CommonOpts {
    /// Directory for run manifests
    #[arg(long, default_value = "runs")]
    manifest_dir: PathBuf,
    /// Seed for randomized operations
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Candidate/node budget
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    /// Worker count for parallelizable scans
    #[arg(long, default_value_t = 1)]
    parallel_width: usize,
}

#[derive(Subcommand)]
enum AlgebraCmd {
    /// Check associativity, commutativity of +, and distributivity
    Validate {
        structure: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
}

#[derive(Subcommand)]
enum LargenessCmd {
    /// Decide a largeness property of a subset
    Check {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        subset: PathBuf,
        /// thick | syndetic | piecewise-syndetic | ipr | ipr-star | combinatorially-rich
        #[arg(long)]
        property: String,
        #[arg(long, default_value = "add")]
        op: String,
        /// r for ipr/ipr-star/combinatorially-rich
        #[arg(long, default_value_t = 2)]
        r: u32,
        /// n (columns) for combinatorially-rich
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Witness-size cap for cover searches
        #[arg(long)]
        max_witness: Option<usize>,
        #[command(flatten)]
        common: CommonOpts,
    },
}

#[derive(Subcommand)]
enum DsetCmd {
    /// Compute D(A; phi_1..phi_n) and print it as a subset
    Compute {
        /// Source structure S
        #[arg(long)]
        structure: PathBuf,
        /// Target structure R (defaults to the source)
        #[arg(long)]
        target: Option<PathBuf>,
        /// Subset A of the target
        #[arg(long)]
        subset: PathBuf,
        /// Homomorphism file (repeatable); omitting it means the identity
        #[arg(long = "hom")]
        homs: Vec<PathBuf>,
        /// Use the A ∩ ⋂ φ_i(d)⁻¹A form
        #[arg(long)]
        adjoin_identity: bool,
        #[arg(long, default_value = "add")]
        op: String,
        #[arg(long)]
        max_witness: Option<usize>,
        #[command(flatten)]
        common: CommonOpts,
    },
}

#[derive(Subcommand)]
enum PatternCmd {
    /// Find the least monochromatic instance of a pattern
    Find {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        pattern: String,
        /// Number of colors in the coloring file
        #[arg(long, default_value_t = 2)]
        colors: u32,
        /// Pattern parameter, e.g. -P k=3 (repeatable)
        #[arg(long = "param", short = 'P')]
        params: Vec<String>,
        /// Allow variables to share values
        #[arg(long)]
        not_distinct: bool,
        /// Least canonical index a variable value may take
        #[arg(long)]
        min_element: Option<usize>,
        #[command(flatten)]
        common: CommonOpts,
    },
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Search for a coloring with no monochromatic instance
    Avoid {
        #[arg(long)]
        pattern: Option<String>,
        #[arg(long, default_value_t = 2)]
        colors: u32,
        /// Integer window a..b (alternative to --structure)
        #[arg(long)]
        window: Option<String>,
        #[arg(long)]
        structure: Option<PathBuf>,
        /// hindman990 | poly-conjecture | schur
        #[arg(long)]
        preset: Option<String>,
        #[arg(long = "param", short = 'P')]
        params: Vec<String>,
        #[arg(long)]
        not_distinct: bool,
        #[arg(long)]
        no_symmetry_breaking: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Least window size at which no avoiding coloring exists
    Threshold {
        #[arg(long)]
        pattern: Option<String>,
        #[arg(long, default_value_t = 2)]
        colors: u32,
        /// Window family a..b: nested windows [a..n] for n up to b
        #[arg(long)]
        window: String,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long = "param", short = 'P')]
        params: Vec<String>,
        #[arg(long)]
        not_distinct: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Export the avoidance problem as DIMACS CNF
    Cnf {
        #[arg(long)]
        pattern: Option<String>,
        #[arg(long, default_value_t = 2)]
        colors: u32,
        #[arg(long)]
        window: Option<String>,
        #[arg(long)]
        structure: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long = "param", short = 'P')]
        params: Vec<String>,
        #[arg(long)]
        not_distinct: bool,
        /// Output path for the DIMACS file; a .map sidecar is written next to it
        #[arg(long)]
        emit_cnf: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Fraction of random colorings containing a monochromatic instance
    Experiment {
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value_t = 2)]
        colors: u32,
        #[arg(long)]
        window: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long = "param", short = 'P')]
        params: Vec<String>,
        #[arg(long)]
        not_distinct: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Run the thick-and-syndetic pattern constructor
    ThickSyndetic {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        subset: PathBuf,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        max_witness: Option<usize>,
        /// Write the construction trace here
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Walk the two-coloring decision tree
    BowenTree {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 2)]
        l: u32,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Re-execute a recorded trace and verify it reproduces
    Replay {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        structure: PathBuf,
        /// Coloring file (for bowen traces)
        #[arg(long)]
        coloring: Option<PathBuf>,
        /// Subset file (for thick-syndetic traces)
        #[arg(long)]
        subset: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        colors: u32,
        #[command(flatten)]
        common: CommonOpts,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure {
            code: 3,
            message: message.to_string(),
        }
    }

    fn precondition(message: impl ToString) -> Self {
        Failure {
            code: 1,
            message: message.to_string(),
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn load_structure(path: &Path, m: &mut Manifest) -> Result<GroundStructure, Failure> {
    let text = read_file(path)?;
    m.input_file(path, &text);
    parse_structure(&text).map_err(Failure::input)
}

fn load_subset(path: &Path, n: usize, m: &mut Manifest) -> Result<SubsetMask, Failure> {
    let text = read_file(path)?;
    m.input_file(path, &text);
    parse_subset(&text, n).map_err(Failure::input)
}

fn load_coloring(path: &Path, n: usize, k: u32, m: &mut Manifest) -> Result<Coloring, Failure> {
    let text = read_file(path)?;
    m.input_file(path, &text);
    Coloring::parse(&text, n, k).map_err(Failure::input)
}

fn parse_op(op: &str) -> Result<OpKind, Failure> {
    match op {
        "add" | "+" => Ok(OpKind::Add),
        "mul" | "*" => Ok(OpKind::Mul),
        other => Err(Failure::input(format!("unknown operation {other:?}"))),
    }
}

fn parse_window(spec: &str) -> Result<(u64, u64), Failure> {
    let (lo, hi) = spec
        .split_once("..")
        .ok_or_else(|| Failure::input(format!("window must be a..b, got {spec:?}")))?;
    let lo = lo
        .trim()
        .parse()
        .map_err(|_| Failure::input(format!("bad window bound {lo:?}")))?;
    let hi = hi
        .trim()
        .parse()
        .map_err(|_| Failure::input(format!("bad window bound {hi:?}")))?;
    Ok((lo, hi))
}

fn parse_params(params: &[String]) -> Result<BTreeMap<String, u32>, Failure> {
    let mut out = BTreeMap::new();
    for p in params {
        let (key, value) = p
            .split_once('=')
            .ok_or_else(|| Failure::input(format!("parameter must be name=value, got {p:?}")))?;
        let value: u32 = value
            .parse()
            .map_err(|_| Failure::input(format!("bad parameter value in {p:?}")))?;
        out.insert(key.trim().to_string(), value);
    }
    Ok(out)
}

fn build_pattern(
    source: Option<&str>,
    preset: Option<&str>,
    params: &[String],
    not_distinct: bool,
    min_element: Option<usize>,
) -> Result<(ExpandedPattern, String), Failure> {
    let (text, preset_distinct) = match (source, preset) {
        (Some(s), _) => (s.to_string(), None),
        (None, Some(name)) => {
            let p = Preset::from_name(name)
                .ok_or_else(|| Failure::input(format!("unknown preset {name:?}")))?;
            (p.pattern_source().to_string(), Some(p.distinct()))
        }
        (None, None) => return Err(Failure::input("need --pattern or --preset")),
    };
    let mut fam = parse_pattern(&text).map_err(Failure::input)?;
    if let Some(d) = preset_distinct {
        fam.distinct = d;
    }
    if not_distinct {
        fam.distinct = false;
    }
    fam.min_element = min_element;
    let params = parse_params(params)?;
    let pat = fam.expand(&params).map_err(Failure::input)?;
    Ok((pat, text))
}

fn structure_for_search(
    window: Option<&str>,
    structure: Option<&Path>,
    preset: Option<&str>,
    m: &mut Manifest,
) -> Result<GroundStructure, Failure> {
    if let Some(path) = structure {
        return load_structure(path, m);
    }
    if let Some(spec) = window {
        let (lo, hi) = parse_window(spec)?;
        return GroundStructure::nat_range(lo, hi).map_err(Failure::input);
    }
    if let Some(name) = preset {
        let p = Preset::from_name(name)
            .ok_or_else(|| Failure::input(format!("unknown preset {name:?}")))?;
        return p.structure(None).map_err(Failure::input);
    }
    Err(Failure::input("need --structure, --window, or --preset"))
}

fn render_instance(
    g: &GroundStructure,
    pat: &ExpandedPattern,
    inst: &partreg::patterns::PatternInstance,
) -> String {
    let assign: Vec<String> = pat
        .variables
        .iter()
        .zip(&inst.assignment)
        .map(|(v, &e)| format!("{v}={}", g.element_name(e)))
        .collect();
    let values: Vec<String> = inst.values.iter().map(|&e| g.element_name(e)).collect();
    format!(
        "color={} {} values=[{}]",
        inst.color,
        assign.join(" "),
        values.join(",")
    )
}

/// Die quietly when stdout is closed early (e.g. piped into `head`).
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() {
    reset_sigpipe();
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().collect();
    let command_line = argv.join(" ");
    let started = Instant::now();
    let code = match run(cli, command_line, started) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli, command_line: String, started: Instant) -> Result<i32, Failure> {
    let mut m = Manifest::new(command_line);
    let (code, manifest_dir) = dispatch(cli, &mut m)?;
    let path = m
        .write(&manifest_dir, started.elapsed().as_millis())
        .map_err(|e| Failure::input(format!("cannot write manifest: {e}")))?;
    println!("manifest: {}", path.display());
    Ok(code)
}

fn dispatch(cli: Cli, m: &mut Manifest) -> Result<(i32, PathBuf), Failure> {
    match cli.command {
        Command::Algebra { cmd } => match cmd {
            AlgebraCmd::Validate { structure, common } => {
                let g = load_structure(&structure, m)?;
                m.field("seed", common.seed);
                m.field("budget", common.budget);
                let report = g.validate_axioms_capped(common.budget.max(1));
                print!("{}", report.to_text(&g));
                m.verdict(if report.all_hold() {
                    "axioms-pass"
                } else {
                    "axioms-fail"
                });
                m.witness(report.to_text(&g).replace('\n', "; "));
                Ok((0, common.manifest_dir))
            }
        },
        Command::Largeness { cmd } => match cmd {
            LargenessCmd::Check {
                structure,
                subset,
                property,
                op,
                r,
                n,
                max_witness,
                common,
            } => {
                let g = load_structure(&structure, m)?;
                let a = load_subset(&subset, g.carrier_size(), m)?;
                let op = parse_op(&op)?;
                g.require_op(op).map_err(Failure::input)?;
                let budget = Budget {
                    max_candidates: common.budget,
                    ..Budget::default()
                };
                let max_witness = max_witness.unwrap_or(g.carrier_size());
                m.field("seed", common.seed);
                m.field("budget", common.budget);
                let report = match property.as_str() {
                    "thick" => is_thick(&g, &a, op, &budget),
                    "syndetic" => is_syndetic(&g, &a, op, max_witness, &budget),
                    "piecewise-syndetic" => is_piecewise_syndetic(&g, &a, op, max_witness, &budget),
                    "ipr" => is_ipr(&g, &a, r, op, &budget).map_err(Failure::precondition)?,
                    "ipr-star" => {
                        is_ipr_star(&g, &a, r, op, &budget).map_err(Failure::precondition)?
                    }
                    "combinatorially-rich" => is_combinatorially_rich(&g, &a, n, r, &budget)
                        .map_err(Failure::precondition)?,
                    other => return Err(Failure::input(format!("unknown property {other:?}"))),
                };
                print!("{}", report.to_text());
                m.verdict(report.verdict.name());
                m.witness(report.to_text().replace('\n', "; "));
                let code = if report.verdict == Verdict::Inconclusive {
                    2
                } else {
                    0
                };
                Ok((code, common.manifest_dir))
            }
        },
        Command::Dset { cmd } => match cmd {
            DsetCmd::Compute {
                structure,
                target,
                subset,
                homs,
                adjoin_identity,
                op,
                max_witness,
                common,
            } => {
                let source = load_structure(&structure, m)?;
                let target_g = match &target {
                    Some(path) => load_structure(path, m)?,
                    None => source.clone(),
                };
                let a = load_subset(&subset, target_g.carrier_size(), m)?;
                let op = parse_op(&op)?;
                let hom_ops = match op {
                    OpKind::Add => HomOps::Add,
                    OpKind::Mul => HomOps::Mul,
                };
                let mut hom_list = Vec::new();
                if homs.is_empty() {
                    if source.carrier_size() != target_g.carrier_size() {
                        return Err(Failure::input(
                            "identity homomorphism needs equal carriers; pass --hom",
                        ));
                    }
                    hom_list.push(Homomorphism::identity(source.carrier_size(), hom_ops));
                } else {
                    for path in &homs {
                        let text = read_file(path)?;
                        m.input_file(path, &text);
                        hom_list.push(
                            Homomorphism::parse(
                                &text,
                                source.carrier_size(),
                                target_g.carrier_size(),
                                hom_ops,
                            )
                            .map_err(Failure::input)?,
                        );
                    }
                }
                let q = DSetQuery {
                    source: &source,
                    target: &target_g,
                    subset: &a,
                    homs: &hom_list,
                    adjoin_identity,
                    operation: op,
                };
                let budget = Budget {
                    max_candidates: common.budget,
                    ..Budget::default()
                };
                let d =
                    compute_d_set(&q, max_witness.unwrap_or(target_g.carrier_size()), &budget)
                        .map_err(Failure::precondition)?;
                print!("{}", format_subset(&d));
                m.field("seed", common.seed);
                m.field("budget", common.budget);
                m.verdict(format!("d-set-size {}", d.count()));
                m.witness(format_subset(&d).replace('\n', " ").trim().to_string());
                Ok((0, common.manifest_dir))
            }
        },
        Command::Pattern { cmd } => match cmd {
            PatternCmd::Find {
                structure,
                coloring,
                pattern,
                colors,
                params,
                not_distinct,
                min_element,
                common,
            } => {
                let g = load_structure(&structure, m)?;
                let coloring = load_coloring(&coloring, g.carrier_size(), colors, m)?;
                let (pat, _) =
                    build_pattern(Some(&pattern), None, &params, not_distinct, min_element)?;
                m.field("seed", common.seed);
                m.field("budget", common.budget);
                m.field("parallel-width", common.parallel_width);
                let found = find_monochromatic_par(&g, &coloring, &pat, common.parallel_width)
                    .map_err(Failure::input)?;
                match found {
                    Some(inst) => {
                        let report = verify_instance(&g, &coloring, &pat, &inst.assignment)
                            .map_err(Failure::input)?;
                        assert!(report.ok, "found instance must re-verify");
                        let text = render_instance(&g, &pat, &inst);
                        println!("found {text}");
                        m.verdict("found");
                        m.witness(text);
                    }
                    None => {
                        println!("exhausted: no within-window instance");
                        m.verdict("exhausted");
                        m.witness("none");
                    }
                }
                Ok((0, common.manifest_dir))
            }
        },
        Command::Search { cmd } => dispatch_search(cmd, m),
        Command::Construct { cmd } => dispatch_construct(cmd, m),
    }
}

fn dispatch_search(cmd: SearchCmd, m: &mut Manifest) -> Result<(i32, PathBuf), Failure> {
    match cmd {
        SearchCmd::Avoid {
            pattern,
            colors,
            window,
            structure,
            preset,
            params,
            not_distinct,
            no_symmetry_breaking,
            common,
        } => {
            let g = structure_for_search(
                window.as_deref(),
                structure.as_deref(),
                preset.as_deref(),
                m,
            )?;
            let (pat, _) = build_pattern(
                pattern.as_deref(),
                preset.as_deref(),
                &params,
                not_distinct,
                None,
            )?;
            let cfg = SearchConfig {
                colors,
                symmetry_breaking: !no_symmetry_breaking,
                node_budget: common.budget,
                parallel_width: common.parallel_width,
                seed: common.seed,
            };
            m.field("seed", common.seed);
            m.field("budget", common.budget);
            m.field("parallel-width", common.parallel_width);
            let outcome = enumerate_avoiding(&g, &pat, &cfg).map_err(Failure::input)?;
            let (code, verdict, witness) = match outcome {
                AvoidOutcome::Found(coloring) => {
                    let check = check_coloring(&g, &coloring, &pat).map_err(Failure::input)?;
                    assert!(check.is_none(), "avoiding coloring must re-verify");
                    let colors_text: Vec<String> =
                        coloring.colors().iter().map(|c| c.to_string()).collect();
                    println!("avoiding-coloring {}", colors_text.join(" "));
                    (0, "avoiding-found", colors_text.join(" "))
                }
                AvoidOutcome::NoneExact => {
                    println!("none (exact): every coloring contains a monochromatic instance");
                    (0, "none-exact", String::from("none"))
                }
                AvoidOutcome::NoneBudget => {
                    println!("none (budget exhausted)");
                    (2, "none-budget", String::from("none"))
                }
            };
            m.verdict(verdict);
            m.witness(witness);
            Ok((code, common.manifest_dir))
        }
        SearchCmd::Threshold {
            pattern,
            colors,
            window,
            preset,
            params,
            not_distinct,
            common,
        } => {
            let (lo, hi) = parse_window(&window)?;
            let (pat, text) = build_pattern(
                pattern.as_deref(),
                preset.as_deref(),
                &params,
                not_distinct,
                None,
            )?;
            let cfg = SearchConfig {
                colors,
                node_budget: common.budget,
                parallel_width: common.parallel_width,
                seed: common.seed,
                ..SearchConfig::default()
            };
            m.field("seed", common.seed);
            m.field("budget", common.budget);
            let mut result = compute_threshold(lo, &pat, &cfg, hi).map_err(Failure::input)?;
            result.pattern = text;
            let (code, verdict) = match &result.status {
                ThresholdStatus::Exact { threshold } => {
                    println!("threshold {threshold}");
                    (0, format!("threshold {threshold}"))
                }
                ThresholdStatus::NotReached { n_max } => {
                    println!("not reached <= {n_max}");
                    (0, format!("not-reached {n_max}"))
                }
                ThresholdStatus::BudgetExhausted { at } => {
                    println!("budget exhausted at window {at}");
                    (2, format!("budget-exhausted {at}"))
                }
            };
            m.verdict(verdict);
            match &result.avoiding_witness {
                Some((n, coloring)) => {
                    let colors_text: Vec<String> =
                        coloring.colors().iter().map(|c| c.to_string()).collect();
                    println!("avoiding witness at {n}: {}", colors_text.join(" "));
                    m.witness(format!("window {n}: {}", colors_text.join(" ")));
                }
                None => m.witness("none"),
            }
            Ok((code, common.manifest_dir))
        }
        SearchCmd::Cnf {
            pattern,
            colors,
            window,
            structure,
            preset,
            params,
            not_distinct,
            emit_cnf,
            common,
        } => {
            let g = structure_for_search(
                window.as_deref(),
                structure.as_deref(),
                preset.as_deref(),
                m,
            )?;
            let (pat, _) = build_pattern(
                pattern.as_deref(),
                preset.as_deref(),
                &params,
                not_distinct,
                None,
            )?;
            let doc =
                export_cnf(&g, &pat, colors, common.budget.max(1 << 22)).map_err(Failure::input)?;
            std::fs::write(&emit_cnf, doc.to_dimacs())
                .map_err(|e| Failure::input(format!("cannot write CNF: {e}")))?;
            let map_path = emit_cnf.with_extension("map");
            std::fs::write(&map_path, doc.mapping_text())
                .map_err(|e| Failure::input(format!("cannot write mapping: {e}")))?;
            println!(
                "wrote {} ({} variables, {} clauses) and {}",
                emit_cnf.display(),
                doc.variable_count,
                doc.clauses.len(),
                map_path.display()
            );
            m.field("seed", common.seed);
            m.field("budget", common.budget);
            m.verdict(format!(
                "cnf {} variables {} clauses",
                doc.variable_count,
                doc.clauses.len()
            ));
            m.witness(emit_cnf.display().to_string());
            Ok((0, common.manifest_dir))
        }
        SearchCmd::Experiment {
            pattern,
            colors,
            window,
            trials,
            params,
            not_distinct,
            common,
        } => {
            let (lo, hi) = parse_window(&window)?;
            let g = GroundStructure::nat_range(lo, hi).map_err(Failure::input)?;
            let (pat, _) = build_pattern(Some(&pattern), None, &params, not_distinct, None)?;
            let stats = random_coloring_experiment(&g, &pat, colors, trials, common.seed)
                .map_err(Failure::input)?;
            println!(
                "trials {} hits {} fraction {:.6}",
                stats.trials, stats.hits, stats.fraction
            );
            m.field("seed", common.seed);
            m.field("budget", common.budget);
            m.verdict(format!("fraction {:.6}", stats.fraction));
            m.witness(format!("{}/{}", stats.hits, stats.trials));
            Ok((0, common.manifest_dir))
        }
    }
}

fn dispatch_construct(cmd: ConstructCmd, m: &mut Manifest) -> Result<(i32, PathBuf), Failure> {
    match cmd {
        ConstructCmd::ThickSyndetic {
            structure,
            subset,
            n,
            k,
            max_witness,
            trace,
            common,
        } => {
            let g = load_structure(&structure, m)?;
            let a = load_subset(&subset, g.carrier_size(), m)?;
            let budget = Budget {
                max_candidates: common.budget,
                ..Budget::default()
            };
            let mut oracle = BruteForceOracle;
            let run = thick_syndetic_constructor(
                &g,
                &a,
                n,
                k,
                &mut oracle,
                max_witness.unwrap_or(g.carrier_size()),
                &budget,
            )
            .map_err(Failure::precondition)?;
            m.field("seed", common.seed);
            m.field("budget", common.budget);
            if let Some(path) = &trace {
                std::fs::write(path, run.trace.to_text())
                    .map_err(|e| Failure::input(format!("cannot write trace: {e}")))?;
                println!("trace: {}", path.display());
            }
            let code = match &run.result {
                Ok(success) => {
                    let xs: Vec<String> = success.xs.iter().map(|&e| g.element_name(e)).collect();
                    println!("success xs=[{}]", xs.join(","));
                    m.verdict("constructed");
                    m.witness(run.trace.outcome.clone());
                    0
                }
                Err(failure) => {
                    println!("failure: {} {}", failure.kind.name(), failure.detail);
                    m.verdict(format!("failure {}", failure.kind.name()));
                    m.witness(failure.detail.clone());
                    if failure.kind == FailKind::CoverNotFound {
                        1
                    } else {
                        2
                    }
                }
            };
            Ok((code, common.manifest_dir))
        }
        ConstructCmd::BowenTree {
            structure,
            coloring,
            k,
            l,
            trace,
            common,
        } => {
            let g = load_structure(&structure, m)?;
            let coloring = load_coloring(&coloring, g.carrier_size(), 2, m)?;
            let budget = Budget {
                max_candidates: common.budget,
                ..Budget::default()
            };
            let mut oracle = BruteForceOracle;
            let run = bowen_thick_tree(&g, &coloring, k, l, &mut oracle, &budget)
                .map_err(Failure::precondition)?;
            m.field("seed", common.seed);
            m.field("budget", common.budget);
            if let Some(path) = &trace {
                std::fs::write(path, run.trace.to_text())
                    .map_err(|e| Failure::input(format!("cannot write trace: {e}")))?;
                println!("trace: {}", path.display());
            }
            let code = match &run.result {
                Ok(success) => {
                    println!(
                        "success node={} color={} x={} y={} values=[{}]",
                        success.node,
                        success.color,
                        g.element_name(success.x),
                        g.element_name(success.y),
                        success
                            .values
                            .iter()
                            .map(|&v| g.element_name(v))
                            .collect::<Vec<_>>()
                            .join(",")
                    );
                    m.verdict("monochromatic-found");
                    m.witness(run.trace.outcome.clone());
                    0
                }
                Err(failure) => {
                    println!("failure: {} {}", failure.kind.name(), failure.detail);
                    m.verdict(format!("failure {}", failure.kind.name()));
                    m.witness(failure.detail.clone());
                    2
                }
            };
            Ok((code, common.manifest_dir))
        }
        ConstructCmd::Replay {
            trace,
            structure,
            coloring,
            subset,
            colors,
            common,
        } => {
            let text = read_file(&trace)?;
            m.input_file(&trace, &text);
            let recorded = ConstructionTrace::parse(&text).map_err(Failure::input)?;
            let g = load_structure(&structure, m)?;
            m.field("seed", common.seed);
            m.field("budget", common.budget);
            let outcome = match recorded.kind.as_str() {
                "bowen" => {
                    let path =
                        coloring.ok_or_else(|| Failure::input("bowen replay needs --coloring"))?;
                    let coloring = load_coloring(&path, g.carrier_size(), colors, m)?;
                    replay(
                        &recorded,
                        ReplayInputs::Bowen {
                            g: &g,
                            coloring: &coloring,
                        },
                    )
                }
                "thick-syndetic" => {
                    let path = subset
                        .ok_or_else(|| Failure::input("thick-syndetic replay needs --subset"))?;
                    let a = load_subset(&path, g.carrier_size(), m)?;
                    replay(
                        &recorded,
                        ReplayInputs::ThickSyndetic { g: &g, subset: &a },
                    )
                }
                other => return Err(Failure::input(format!("unknown trace kind {other:?}"))),
            };
            match outcome {
                Ok(()) => {
                    println!("replay ok: outcome `{}` reproduced", recorded.outcome);
                    m.verdict("replay-ok");
                    m.witness(recorded.outcome.clone());
                    Ok((0, common.manifest_dir))
                }
                Err(e) => {
                    println!("replay diverged: {e}");
                    m.verdict("replay-diverged");
                    m.witness(e.to_string());
                    Ok((1, common.manifest_dir))
                }
            }
        }
    }
}
