//! Command line front end.
//!
//! Exit codes: 0 success or "holds", 1 "violated", 2 invalid input or model,
//! 3 enumeration budget exhausted.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;

use crate::bayes::{estimate_transition_matrix, posterior_update, PartitionedPrior};
use crate::counts::TransitionCounts;
use crate::dummy::{
    completion_classes, completion_posterior, gibbs_successors, marginal_probability,
    marginal_probability_enumerated, AugmentedGraph, GibbsConfig,
};
use crate::enumerate::{Budget, PatternBudget};
use crate::error::{Error, Result};
use crate::exchangeability::{
    brute_force_markov_exchangeable, check_colored_condition, check_condition_a, check_condition_b,
    check_linear_condition, check_one_step_vs_full_sufficiency, is_partitioned_colors, CheckReport,
    LinearProbe, Verdict,
};
use crate::rational::{format_rational, to_f64, Rational};
use crate::recurrence::{recurrence_replicates, Arithmetic};
use crate::rng::{self, tags};
use crate::schemes::{
    counterexample_scheme, hoppe_pi, simulate_with, ColoredGraph, ColoredScheme, ErrwParams,
    ErrwScheme, HoppeParams, HoppeScheme, PredictiveScheme, Sufficiency, TableScheme,
};
use crate::space::{Path, StateId, StateSpace};
use crate::specfile::{path_from_csv, path_to_csv, GraphSpec};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(
    name = "mexch",
    version,
    about = "Reinforced random walks and Markov exchangeability checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Simulate a path and print it as `step,state` CSV.
    Simulate(SimulateArgs),
    /// Check a predictive scheme for Markov exchangeability.
    Check(CheckArgs),
    /// Conjugate update of a partitioned-colors spec along a path.
    Posterior(PosteriorArgs),
    /// Partial sums of the return probabilities to the start.
    Recurrence(RecurrenceArgs),
    /// Marginals and latent successors for a spec with dummy states.
    Dummy(DummyArgs),
    /// Tabulate a scheme's predictive laws as a JSON table.
    Tabulate(TabulateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchemeKind {
    /// Colored edge-reinforced walk on the spec graph.
    Colored,
    /// Edge-reinforced walk with the spec edges read as undirected.
    Errw,
    /// Reinforced Hoppe urns with `α_i q_i(j) = β_{i,j}`.
    Hoppe,
    /// The uniform-on-`{1..n}` scheme; needs no spec.
    Counterexample,
}

#[derive(Args, Debug, Clone)]
pub struct Source {
    /// Graph spec (JSON).
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Predictive table (JSON), instead of a spec.
    #[arg(long, conflicts_with = "spec")]
    pub table: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = SchemeKind::Colored)]
    pub scheme: SchemeKind,
    /// Start state, overriding the spec's.
    #[arg(long)]
    pub x0: Option<String>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Path CSV destination; the summary then goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckMode {
    Brute,
    A,
    B,
    Kstep,
    Linear,
    Colored,
    Partition,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, value_enum, default_value_t = CheckMode::Brute)]
    pub mode: CheckMode,
    #[arg(long, default_value_t = 5)]
    pub max_len: usize,
    #[arg(long)]
    pub budget: Option<u64>,
    /// Steps of the joint predictive in `kstep` mode.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Largest row entry probed in `linear` mode.
    #[arg(long, default_value_t = 5)]
    pub max_entry: u64,
    /// Witnesses listed in the report.
    #[arg(long)]
    pub max_witnesses: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PosteriorArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// Observed path (`step,state` CSV).
    #[arg(long)]
    pub path: PathBuf,
    /// Updated spec destination; the predictive table then goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RecurrenceArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    #[arg(long, default_value_t = 1)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Evaluate summands as exact rationals.
    #[arg(long, conflicts_with = "float")]
    pub exact: bool,
    #[arg(long)]
    pub float: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DummyMode {
    /// Exact marginal grouped by dummy visit counts.
    Marginal,
    /// Exact marginal summed over every completion.
    Enumerate,
    /// Gibbs sampling of the latent successors.
    Gibbs,
}

#[derive(Args, Debug)]
pub struct DummyArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub path: PathBuf,
    #[arg(long, value_enum, default_value_t = DummyMode::Marginal)]
    pub mode: DummyMode,
    #[arg(long, default_value_t = 1000)]
    pub sweeps: usize,
    #[arg(long)]
    pub burn_in: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TabulateArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 5)]
    pub max_len: usize,
    /// `full`, `last_counts` or `last_row`.
    #[arg(long, default_value = "full")]
    pub sufficiency: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Maps an error to its exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Budget { .. } => 3,
        _ => 2,
    }
}

/// Parses `args` and runs; every outcome, including usage errors, becomes an
/// exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match run(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Simulate(a) => cmd_simulate(a, out, err),
        Command::Check(a) => cmd_check(a, out),
        Command::Posterior(a) => cmd_posterior(a, out, err),
        Command::Recurrence(a) => cmd_recurrence(a, out),
        Command::Dummy(a) => cmd_dummy(a, out),
        Command::Tabulate(a) => cmd_tabulate(a, out),
    }
}

/// A scheme ready to run.
pub struct Loaded {
    pub scheme: Box<dyn PredictiveScheme>,
    pub space: StateSpace,
    pub x0: StateId,
    pub spec: Option<GraphSpec>,
    pub hoppe: Option<HoppeParams>,
    /// The walk on `G*` when the spec declares dummies.
    pub augmented: Option<AugmentedGraph>,
}

fn read_spec(path: &std::path::Path) -> Result<GraphSpec> {
    GraphSpec::read(path).map_err(|e| match e {
        Error::Input(m) => Error::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn read_text(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// `{from, to}` with weight `β`; both directions must agree when given.
pub fn errw_from_graph(graph: &ColoredGraph) -> Result<ErrwParams> {
    let sp = graph.space();
    let mut edges: BTreeMap<(StateId, StateId), Rational> = BTreeMap::new();
    for e in graph.edges() {
        let key = if e.from <= e.to {
            (e.from, e.to)
        } else {
            (e.to, e.from)
        };
        if let Some(w) = edges.get(&key) {
            if *w != e.beta {
                return Err(Error::Input(format!(
                    "errw needs symmetric weights; ({}, {}) and its reverse differ",
                    sp.label(e.from),
                    sp.label(e.to)
                )));
            }
        } else {
            edges.insert(key, e.beta.clone());
        }
    }
    ErrwParams::new(sp, edges.into_iter().map(|((a, b), w)| (a, b, w)))
}

/// `α_i = Σ_j β_{i,j}` and `q_i(j) = β_{i,j} / α_i`.
pub fn hoppe_from_graph(graph: &ColoredGraph) -> Result<HoppeParams> {
    let sp = graph.space();
    let mut alpha = Vec::with_capacity(sp.len());
    let mut q = Vec::with_capacity(sp.len());
    for i in sp.ids() {
        let total = graph
            .out_edges(i)
            .fold(Rational::zero(), |a, e| a + &e.beta);
        if total.is_zero() {
            return Err(Error::Model(format!(
                "vertex `{}` has no outgoing edges",
                sp.label(i)
            )));
        }
        let mut row = vec![Rational::zero(); sp.len()];
        for e in graph.out_edges(i) {
            row[e.to.index()] = &e.beta / &total;
        }
        alpha.push(total);
        q.push(row);
    }
    HoppeParams::new(sp, alpha, q)
}

fn check_no_sinks(graph: &ColoredGraph) -> Result<()> {
    if let Some(s) = graph.sinks().first() {
        return Err(Error::Model(format!(
            "vertex `{}` has no outgoing edges",
            graph.space().label(*s)
        )));
    }
    Ok(())
}

/// Loads the scheme named by `source`; `horizon` sizes the counterexample.
pub fn load(source: &Source, horizon: usize) -> Result<Loaded> {
    if let Some(t) = &source.table {
        let table = TableScheme::from_json(&read_text(t)?)
            .map_err(|e| Error::Input(format!("{}: {e}", t.display())))?;
        let space = table.space().clone();
        let x0 = match &source.x0 {
            Some(l) => space.id(l)?,
            None => table.x0(),
        };
        return Ok(Loaded {
            scheme: Box::new(table),
            space,
            x0,
            spec: None,
            hoppe: None,
            augmented: None,
        });
    }
    if source.scheme == SchemeKind::Counterexample {
        let s = counterexample_scheme(horizon + 1)?;
        let space = s.space().clone();
        let x0 = space.id(source.x0.as_deref().unwrap_or("0"))?;
        return Ok(Loaded {
            scheme: Box::new(s),
            space,
            x0,
            spec: None,
            hoppe: None,
            augmented: None,
        });
    }
    let path = source
        .spec
        .as_ref()
        .ok_or_else(|| Error::Input("--spec or --table is required".into()))?;
    let spec = read_spec(path)?;
    let x0 = match &source.x0 {
        Some(l) => spec.space().id(l)?,
        None => spec.x0,
    };
    let mut augmented = None;
    let mut hoppe = None;
    let (scheme, space): (Box<dyn PredictiveScheme>, StateSpace) = match source.scheme {
        SchemeKind::Colored => {
            if spec.dummies.is_empty() {
                check_no_sinks(&spec.graph)?;
                (
                    Box::new(ColoredScheme::new(spec.graph.clone())),
                    spec.space().clone(),
                )
            } else {
                let aug = spec.augmented(false)?;
                check_no_sinks(aug.full())?;
                let s = aug.scheme();
                let sp = aug.full().space().clone();
                augmented = Some(aug);
                (Box::new(s), sp)
            }
        }
        SchemeKind::Errw => (
            Box::new(ErrwScheme::new(errw_from_graph(&spec.graph)?)),
            spec.space().clone(),
        ),
        SchemeKind::Hoppe => {
            let p = hoppe_from_graph(&spec.graph)?;
            hoppe = Some(p.clone());
            (Box::new(HoppeScheme::new(p)), spec.space().clone())
        }
        SchemeKind::Counterexample => unreachable!(),
    };
    Ok(Loaded {
        scheme,
        space,
        x0,
        spec: Some(spec),
        hoppe,
        augmented,
    })
}

fn emit(out: &mut dyn Write, dest: Option<&PathBuf>, text: &str) -> Result<()> {
    match dest {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(Error::from),
    }
}

fn header(command: &str, fields: &[(&str, String)]) -> String {
    let mut s = format!("mexch {VERSION}\ncommand: {command}\n");
    for (k, v) in fields {
        let _ = writeln!(s, "{k}: {v}");
    }
    s
}

fn cmd_simulate(a: &SimulateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let loaded = load(&a.source, a.steps)?;
    let mut rng = rng::stream(a.seed, &[tags::SIMULATE]);
    let full = match (&loaded.augmented, a.source.scheme) {
        (_, SchemeKind::Colored) if loaded.spec.is_some() => {
            let g = match &loaded.augmented {
                Some(aug) => aug.full().clone(),
                None => loaded.spec.as_ref().unwrap().graph.clone(),
            };
            ColoredScheme::new(g).walk(loaded.x0, a.steps, &mut rng)?
        }
        _ => simulate_with(loaded.scheme.as_ref(), loaded.x0, a.steps, &mut rng)?,
    };
    let (space, path) = match &loaded.augmented {
        Some(aug) => (aug.base().space().clone(), aug.project(&full)),
        None => (loaded.space.clone(), full.clone()),
    };
    emit(out, a.out.as_ref(), &path_to_csv(&space, &path))?;

    let mut s = header(
        "simulate",
        &[
            ("scheme", format!("{:?}", a.source.scheme).to_lowercase()),
            ("seed", a.seed.to_string()),
            ("steps", a.steps.to_string()),
        ],
    );
    if loaded.augmented.is_some() {
        let _ = writeln!(s, "dummy_visits: {}", full.len() - path.len());
    }
    let counts = TransitionCounts::from_path(&path);
    let _ = writeln!(s, "visits:");
    for i in space.ids() {
        let v = path.states().filter(|x| *x == i).count();
        let _ = writeln!(s, "  {}: {v}", space.label(i));
    }
    let t_hat = estimate_transition_matrix(&path, &space)?;
    let star = t_hat.space().clone();
    let _ = writeln!(s, "t_hat:");
    let cols: Vec<&str> = star.ids().map(|i| star.label(i)).collect();
    let _ = writeln!(s, "  from,{}", cols.join(","));
    for i in star.ids() {
        let row: Vec<String> = t_hat.row(i).iter().map(format_rational).collect();
        let _ = writeln!(s, "  {},{}", star.label(i), row.join(","));
    }
    let _ = writeln!(s, "transitions: {}", counts.total());
    if a.out.is_some() {
        out.write_all(s.as_bytes())?;
    } else {
        err.write_all(s.as_bytes())?;
    }
    Ok(0)
}

fn partition_report(graph: &ColoredGraph) -> CheckReport {
    let sp = graph.space();
    let mut report = CheckReport {
        check: "partition".into(),
        verdict: Verdict::Holds,
        witnesses: Vec::new(),
        coverage: BTreeMap::new(),
        max_spread: None,
        max_len: 0,
        notes: Vec::new(),
    };
    report.coverage.insert("vertices".into(), sp.len() as u64);
    match is_partitioned_colors(graph) {
        Some(p) => {
            for (k, g) in p.groups.iter().enumerate() {
                let names: Vec<&str> = g.iter().map(|c| graph.color(*c).name.as_str()).collect();
                report
                    .notes
                    .push(format!("group {k}: {{{}}}", names.join(", ")));
            }
        }
        None => {
            report.verdict = Verdict::Violated;
            for i in sp.ids() {
                for j in sp.ids().filter(|j| *j > i) {
                    let (ci, cj) = (graph.color_set(i), graph.color_set(j));
                    if ci != cj && !ci.is_disjoint(cj) {
                        report.notes.push(format!(
                            "overlap: `{}` and `{}` share colors but differ",
                            sp.label(i),
                            sp.label(j)
                        ));
                    }
                }
            }
        }
    }
    report
}

fn cmd_check(a: &CheckArgs, out: &mut dyn Write) -> Result<i32> {
    let loaded = load(&a.source, a.max_len)?;
    let budget = a.budget.map(Budget).unwrap_or_default();
    let scheme = loaded.scheme.as_ref();
    let (sp, x0) = (&loaded.space, loaded.x0);
    let colored_graph = || -> Result<ColoredGraph> {
        match (&loaded.augmented, &loaded.spec) {
            (Some(aug), _) => Ok(aug.full().clone()),
            (None, Some(spec)) if a.source.scheme == SchemeKind::Colored => Ok(spec.graph.clone()),
            _ => Err(Error::Input(
                "this mode needs --spec with --scheme colored".into(),
            )),
        }
    };
    let report = match a.mode {
        CheckMode::Brute => brute_force_markov_exchangeable(scheme, sp, x0, a.max_len, budget)?,
        CheckMode::A => check_condition_a(scheme, sp, x0, a.max_len, budget)?,
        CheckMode::B => {
            check_condition_b(scheme, sp, x0, a.max_len, PatternBudget::default(), budget)?
        }
        CheckMode::Kstep => {
            check_one_step_vs_full_sufficiency(scheme, sp, x0, a.max_len, a.k, budget)?
        }
        CheckMode::Linear => {
            let p = loaded
                .hoppe
                .as_ref()
                .ok_or_else(|| Error::Input("linear mode needs --scheme hoppe".into()))?;
            budget.check_power(a.max_entry as usize + 1, sp.len())?;
            check_linear_condition(
                |j, row, i| hoppe_pi(p, j, row, i),
                sp,
                LinearProbe {
                    max_entry: a.max_entry,
                },
            )
        }
        CheckMode::Colored => {
            check_colored_condition(&colored_graph()?, x0, a.max_len, PatternBudget::default())
        }
        CheckMode::Partition => partition_report(&colored_graph()?),
    };
    let mut s = header(
        "check",
        &[
            ("mode", format!("{:?}", a.mode).to_lowercase()),
            ("budget", budget.0.to_string()),
            ("x0", sp.label(x0).to_string()),
        ],
    );
    s.push_str(&report.render(sp, a.max_witnesses.unwrap_or(usize::MAX)));
    emit(out, a.out.as_ref(), &s)?;
    Ok(report.verdict.exit_code())
}

fn cmd_posterior(a: &PosteriorArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let spec = read_spec(&a.spec)?;
    if !spec.dummies.is_empty() {
        return Err(Error::Input(
            "specs with dummies have no conjugate update; use `dummy --mode gibbs`".into(),
        ));
    }
    let path = path_from_csv(spec.space(), &read_text(&a.path)?)?;
    let prior = PartitionedPrior::new(spec.graph.clone(), spec.x0)?;
    let post = posterior_update(&prior, &path)?;
    let updated = GraphSpec {
        graph: post.graph().clone(),
        x0: post.x0(),
        dummies: Vec::new(),
    };
    emit(out, a.out.as_ref(), &updated.to_json())?;

    let sp = spec.space();
    let mut s = format!("from,{}\nnext,probability\n", sp.label(post.x0()));
    if post.graph().has_out_edges(post.x0()) {
        let d = ColoredScheme::new(post.graph().clone())
            .predictive(&TransitionCounts::empty(post.x0()), post.x0())?;
        for (j, p) in d.iter() {
            let _ = writeln!(s, "{},{}", sp.label(j), format_rational(p));
        }
    }
    if a.out.is_some() {
        out.write_all(s.as_bytes())?;
    } else {
        err.write_all(s.as_bytes())?;
    }
    Ok(0)
}

fn cmd_recurrence(a: &RecurrenceArgs, out: &mut dyn Write) -> Result<i32> {
    let loaded = load(&a.source, a.steps)?;
    if a.replicates == 0 {
        return Err(Error::Input("--replicates must be positive".into()));
    }
    let arith = if a.exact {
        Arithmetic::Exact
    } else {
        Arithmetic::Float
    };
    let traces = recurrence_replicates(
        loaded.scheme.as_ref(),
        loaded.x0,
        a.steps,
        a.replicates,
        a.seed,
        arith,
    )?;
    let mut s = String::from("n");
    for r in 0..a.replicates {
        let _ = write!(s, ",rep{r}");
    }
    s.push('\n');
    for n in 0..a.steps {
        let _ = write!(s, "{}", n + 1);
        for t in &traces {
            let _ = write!(s, ",{}", t.partial_sums[n]);
        }
        s.push('\n');
    }
    emit(out, a.out.as_ref(), &s)?;
    Ok(0)
}

fn cmd_dummy(a: &DummyArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = read_spec(&a.spec)?;
    let aug = spec.augmented(false)?;
    let sp = aug.base().space();
    let fs = aug.full().space();
    let path = path_from_csv(sp, &read_text(&a.path)?)?;
    let budget = a.budget.map(Budget).unwrap_or_default();
    let mut s = header(
        "dummy",
        &[
            ("mode", format!("{:?}", a.mode).to_lowercase()),
            ("budget", budget.0.to_string()),
            ("path", sp.format_path(&path)),
            ("completions", aug.completion_count(&path).to_string()),
        ],
    );
    match a.mode {
        DummyMode::Marginal => {
            let _ = writeln!(s, "classes:");
            for c in completion_classes(&aug, &path, budget)? {
                let m: Vec<String> =
                    c.m.iter()
                        .map(|(d, k)| format!("{}={k}", fs.label(*d)))
                        .collect();
                let _ = writeln!(
                    s,
                    "  m=[{}] N_m={} representative={}",
                    m.join(" "),
                    c.size,
                    fs.format_path(&c.representative)
                );
            }
            let p = marginal_probability(&aug, &path, budget)?;
            let _ = writeln!(s, "probability: {} ({:e})", format_rational(&p), to_f64(&p));
        }
        DummyMode::Enumerate => {
            let p = marginal_probability_enumerated(&aug, &path, budget)?;
            let _ = writeln!(s, "probability: {} ({:e})", format_rational(&p), to_f64(&p));
        }
        DummyMode::Gibbs => {
            let config = GibbsConfig {
                sweeps: a.sweeps,
                burn_in: a.burn_in,
                seed: a.seed,
                chain: 0,
            };
            let run = gibbs_successors(&aug, &path, &config)?;
            let exact: BTreeMap<Path, Rational> = match completion_posterior(&aug, &path, budget) {
                Ok(v) => v.into_iter().collect(),
                Err(Error::Budget { .. }) => BTreeMap::new(),
                Err(e) => return Err(e),
            };
            let _ = writeln!(s, "seed: {}", a.seed);
            let _ = writeln!(s, "burn_in: {}", run.burn_in);
            let _ = writeln!(s, "sweeps: {}", a.sweeps);
            let _ = writeln!(s, "completion,count,frequency,exact");
            for (c, n) in run.frequencies() {
                let f = n as f64 / run.samples.len().max(1) as f64;
                let e = exact.get(&c).map(format_rational).unwrap_or_default();
                let _ = writeln!(s, "\"{}\",{n},{f},{e}", fs.format_path(&c));
            }
        }
    }
    emit(out, a.out.as_ref(), &s)?;
    Ok(0)
}

fn cmd_tabulate(a: &TabulateArgs, out: &mut dyn Write) -> Result<i32> {
    let loaded = load(&a.source, a.max_len)?;
    let suff = Sufficiency::parse(&a.sufficiency)?;
    let table = TableScheme::tabulate(
        loaded.scheme.as_ref(),
        &loaded.space,
        loaded.x0,
        a.max_len,
        suff,
    )?;
    emit(out, a.out.as_ref(), &table.to_json())?;
    Ok(0)
}
