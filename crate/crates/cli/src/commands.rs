//! Subcommands and their dispatch.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_integer::Integer;
use serde::Serialize;
use serde_json::{json, Value};
use symdyn::dyck::{self, DyckCountMode};
use symdyn::generators::{
    cyclic_cover_period, extract_generators, gap_lengths, mixing_evidence, mixing_gcd_test,
    svgl_witness, GeneratorSet, MixingVerdict, SvglOutcome,
};
use symdyn::graphs::label_isomorphic;
use symdyn::spectra::{self, CountKind, CountTable, Recurrence};
use symdyn::zeta::{self, IntSeries, RecurrenceFit};
use symdyn::{Error, LabeledGraph, Result, SyncVerdict, Word};

use crate::presentation::{load_presentation, Presentation};
use crate::report::{self, big, bigs, enclosure, estimate, num, signed_bigs, Report, Warning};

#[derive(Debug, Parser)]
#[command(name = "symdyn", version, about = "Symbolic dynamics workbench")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountModeArg {
    Dp,
    Enumerate,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Block counts, entropy, irreducibility, Fischer cover and period in one report
    Analyze {
        input: PathBuf,
        /// Largest block length counted
        #[arg(long, default_value_t = 12)]
        n: usize,
        /// Also write the block-count growth table as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Topological entropy: certified Perron enclosure where a finite graph exists, count estimates otherwise
    Entropy {
        input: PathBuf,
        /// Target enclosure width
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Largest block length for the count estimate
        #[arg(long, default_value_t = 12)]
        n: usize,
        /// Estimator window (default: second half of the counts)
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Synchronized entropy from words v with alpha·v·alpha admissible
    Hsyn {
        input: PathBuf,
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 12)]
        n: usize,
        /// Tolerance for the comparison with the Fischer-cover entropy
        #[arg(long, default_value_t = 0.02)]
        tol: f64,
    },
    /// gcd mixing test on the generator set of alpha, with a direct witness search
    Mixing {
        input: PathBuf,
        /// Synchronizing word (taken from the document for generator sets)
        #[arg(long)]
        alpha: Option<String>,
        /// Generator enumeration horizon
        #[arg(long, default_value_t = 9)]
        horizon: usize,
        /// Horizon of the direct search for return lengths
        #[arg(long, default_value_t = 20)]
        witness_horizon: usize,
    },
    /// Cyclic-cover period from generator lengths and the period of the Fischer cover
    Period {
        input: PathBuf,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value_t = 9)]
        horizon: usize,
    },
    /// Fischer cover (minimal right-resolving presentation)
    Fischer { input: PathBuf },
    /// Shortest synchronizing word of the Fischer cover, or a verdict for --word
    SyncWords {
        input: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        /// Check this word instead of searching
        #[arg(long)]
        word: Option<String>,
        /// Counterexample search horizon for --word
        #[arg(long, default_value_t = 6)]
        horizon: usize,
    },
    /// Periodic-point counts and the zeta series, optionally against a depth tower
    Zeta {
        input: PathBuf,
        #[arg(long, default_value_t = zeta::DEFAULT_ORDER)]
        order: usize,
        /// Loop-graph or generator documents f^1 .. f^k of a depth tower
        #[arg(long, num_args = 1..)]
        tower: Vec<PathBuf>,
        /// Largest recurrence order tried on the coefficients
        #[arg(long, default_value_t = 8)]
        max_recurrence: usize,
        /// Use these p_1, p_2, ... instead of counting periodic points
        #[arg(long, value_delimiter = ',')]
        periodic: Vec<u64>,
    },
    /// 1/(1 - f(t)) for the first-return series of a loop graph
    LoopZeta {
        input: PathBuf,
        #[arg(long, default_value_t = zeta::DEFAULT_ORDER)]
        order: usize,
    },
    /// Loop-graph entropy and recurrence class of the base vertex
    Recurrence { input: PathBuf },
    /// Bounded search for a transition length
    Svgl {
        input: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        /// Longest u, v tested
        #[arg(long, default_value_t = 3)]
        word_horizon: usize,
    },
    /// Entropy drop when one more word is forbidden
    Gap {
        input: PathBuf,
        /// Longest forbidden word tried
        #[arg(long, default_value_t = 4)]
        extend_len: usize,
        #[arg(long, default_value_t = 12)]
        n: usize,
    },
    /// Exact Dyck block counts and A/B/C class counts
    DyckCount {
        input: PathBuf,
        #[arg(long, default_value_t = 14)]
        n: usize,
        #[arg(long, value_enum, default_value = "dp")]
        mode: CountModeArg,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Dyck entropy estimates against the claimed bounds, with the growth-inequality check
    DyckEntropy {
        input: PathBuf,
        #[arg(long, default_value_t = 14)]
        n: usize,
        #[arg(long, default_value_t = 7)]
        window: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze { .. } => "analyze",
            Command::Entropy { .. } => "entropy",
            Command::Hsyn { .. } => "hsyn",
            Command::Mixing { .. } => "mixing",
            Command::Period { .. } => "period",
            Command::Fischer { .. } => "fischer",
            Command::SyncWords { .. } => "sync-words",
            Command::Zeta { .. } => "zeta",
            Command::LoopZeta { .. } => "loop-zeta",
            Command::Recurrence { .. } => "recurrence",
            Command::Svgl { .. } => "svgl",
            Command::Gap { .. } => "gap",
            Command::DyckCount { .. } => "dyck-count",
            Command::DyckEntropy { .. } => "dyck-entropy",
        }
    }

    pub fn input(&self) -> &Path {
        match self {
            Command::Analyze { input, .. }
            | Command::Entropy { input, .. }
            | Command::Hsyn { input, .. }
            | Command::Mixing { input, .. }
            | Command::Period { input, .. }
            | Command::Fischer { input }
            | Command::SyncWords { input, .. }
            | Command::Zeta { input, .. }
            | Command::LoopZeta { input, .. }
            | Command::Recurrence { input }
            | Command::Svgl { input, .. }
            | Command::Gap { input, .. }
            | Command::DyckCount { input, .. }
            | Command::DyckEntropy { input, .. } => input,
        }
    }
}

/// Exit status for an error class.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Input(_) => 1,
        Error::Precondition(_) => 2,
        Error::Budget(_) => 3,
        Error::Integrity(_) => 4,
    }
}

/// Loads the input document and runs the command.
pub fn run(cmd: &Command) -> Result<Report> {
    let p = load_presentation(cmd.input())?;
    run_command(cmd, &p)
}

pub fn run_command(cmd: &Command, p: &Presentation) -> Result<Report> {
    let mut warnings = Vec::new();
    let results = match cmd {
        Command::Analyze { n, csv, .. } => analyze(p, *n, csv.as_deref(), &mut warnings)?,
        Command::Entropy {
            tol,
            n,
            window,
            csv,
            ..
        } => entropy(p, *tol, *n, *window, csv.as_deref(), &mut warnings)?,
        Command::Hsyn { alpha, n, tol, .. } => hsyn(p, alpha, *n, *tol, &mut warnings)?,
        Command::Mixing {
            alpha,
            horizon,
            witness_horizon,
            ..
        } => mixing(
            p,
            alpha.as_deref(),
            *horizon,
            *witness_horizon,
            &mut warnings,
        )?,
        Command::Period { alpha, horizon, .. } => {
            period(p, alpha.as_deref(), *horizon, &mut warnings)?
        }
        Command::Fischer { .. } => fischer(p)?,
        Command::SyncWords {
            max_len,
            word,
            horizon,
            ..
        } => sync_words(p, *max_len, word.as_deref(), *horizon, &mut warnings)?,
        Command::Zeta {
            order,
            tower,
            max_recurrence,
            periodic,
            ..
        } => zeta_cmd(p, *order, tower, *max_recurrence, periodic, &mut warnings)?,
        Command::LoopZeta { order, .. } => loop_zeta(p, *order)?,
        Command::Recurrence { .. } => recurrence(p)?,
        Command::Svgl {
            max_n,
            word_horizon,
            ..
        } => svgl(p, *max_n, *word_horizon, &mut warnings)?,
        Command::Gap { extend_len, n, .. } => gap(p, *extend_len, *n, &mut warnings)?,
        Command::DyckCount { n, mode, csv, .. } => dyck_count(p, *n, *mode, csv.as_deref())?,
        Command::DyckEntropy { n, window, .. } => dyck_entropy(p, *n, *window, &mut warnings)?,
    };
    Ok(Report {
        command: cmd.name().to_string(),
        input: p.to_document(),
        options: serde_json::to_value(cmd).expect("options serialize"),
        results,
        warnings,
        versions: report::versions(),
    })
}

fn parse_alpha(p: &Presentation, alpha: &str) -> Result<Word> {
    let ab = p.alphabet().ok_or_else(|| {
        Error::Precondition(format!("a {} presentation has no alphabet", p.kind()))
    })?;
    let w = ab.parse_word(alpha).map_err(|e| match e {
        Error::Input(m) => Error::Input(format!("--alpha: {m}")),
        other => other,
    })?;
    if w.is_empty() {
        return Err(Error::Input("--alpha: must be a nonempty word".into()));
    }
    Ok(w)
}

fn render(p: &Presentation, w: &[usize]) -> String {
    match p.alphabet() {
        Some(_) if w.is_empty() => "ε".to_string(),
        Some(ab) => ab.render(w),
        None => format!("{w:?}"),
    }
}

/// Right-resolving presentation of the same shift.
fn right_resolving(g: &LabeledGraph) -> Result<LabeledGraph> {
    if g.is_right_resolving() {
        Ok(g.clone())
    } else {
        Ok(g.determinize()?.graph)
    }
}

fn block_table(p: &Presentation, n: usize) -> Result<CountTable> {
    match p {
        Presentation::Dyck(d) => dyck::dyck_count_table(d, n),
        _ => Ok(spectra::block_count_table(p.require_language()?, n)),
    }
}

fn graph_entropy(g: &LabeledGraph, tol: f64) -> Result<Option<symdyn::Enclosure>> {
    let rr = right_resolving(g)?;
    rr.essential().0.underlying().entropy_reducible(tol)
}

fn count_estimate(t: &CountTable, window: Option<usize>) -> Result<Value> {
    let w = window.unwrap_or_else(|| spectra::default_window(t.len()));
    Ok(estimate(&spectra::entropy_from_counts(t, w)?))
}

fn analyze(
    p: &Presentation,
    n: usize,
    csv: Option<&Path>,
    warnings: &mut Vec<Warning>,
) -> Result<Value> {
    if let Presentation::LoopGraph(spec) = p {
        let e = spectra::loop_entropy(spec, 1e-9)?;
        let r = spectra::classify_recurrence(spec)?;
        return Ok(json!({
            "loop_entropy": estimate(&e),
            "recurrence": recurrence_value(&r),
            "gcd": spec.gcd(),
            "first_return": spec.first_return_counts(n),
        }));
    }
    let table = block_table(p, n)?;
    if let Some(path) = csv {
        report::emit_growth_csv(&table, path)?;
    }
    let mut out = json!({
        "block_counts": bigs(table.counts()),
        "entropy_estimate": count_estimate(&table, None)?,
    });
    let Some(g) = p.graph() else {
        warnings.push(Warning::new(
            "no-finite-presentation",
            "entropy is a count estimate only",
            Some(n),
        ));
        return Ok(out);
    };
    out["certified_entropy"] = match graph_entropy(&g, 1e-9)? {
        Some(e) => enclosure(&e),
        None => Value::Null,
    };
    match g.fischer_cover() {
        Ok(f) => {
            out["irreducible"] = json!(true);
            out["fischer_states"] = json!(f.vertex_count());
            out["period"] = json!(f.underlying().period()?);
            out["synchronizing_word"] = match f.find_synchronizing_word(8)? {
                Some(w) => json!(render(p, &w)),
                None => {
                    warnings.push(Warning::new(
                        "no-sync-word",
                        "no synchronizing word of length <= 8 in the Fischer cover",
                        Some(8),
                    ));
                    Value::Null
                }
            };
        }
        Err(Error::Precondition(m)) => {
            out["irreducible"] = json!(false);
            warnings.push(Warning::new("reducible", m, None));
        }
        Err(e) => return Err(e),
    }
    Ok(out)
}

fn entropy(
    p: &Presentation,
    tol: f64,
    n: usize,
    window: Option<usize>,
    csv: Option<&Path>,
    warnings: &mut Vec<Warning>,
) -> Result<Value> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Input(
            "--tol: must be a positive finite number".into(),
        ));
    }
    if let Presentation::LoopGraph(spec) = p {
        let e = spectra::loop_entropy(spec, tol)?;
        return Ok(json!({ "loop_entropy": estimate(&e) }));
    }
    let table = block_table(p, n)?;
    if let Some(path) = csv {
        report::emit_growth_csv(&table, path)?;
    }
    let mut out = json!({
        "block_counts": bigs(table.counts()),
        "count_estimate": count_estimate(&table, window)?,
    });
    match p.graph() {
        Some(g) => {
            out["enclosure"] = match graph_entropy(&g, tol)? {
                Some(e) => enclosure(&e),
                None => {
                    warnings.push(Warning::new(
                        "empty-shift",
                        "the presented shift is empty",
                        None,
                    ));
                    Value::Null
                }
            };
        }
        None => {
            if let Presentation::Dyck(_) = p {
                let w = window.unwrap_or_else(|| spectra::default_window(n)).max(3);
                out["extrapolated"] = num(spectra::ratio_extrapolation(table.counts(), w)?);
            }
            warnings.push(Warning::new(
                "estimate-only",
                "no finite presentation; entropy is estimated from exact counts",
                Some(n),
            ));
        }
    }
    Ok(out)
}

fn hsyn(
    p: &Presentation,
    alpha: &str,
    n: usize,
    tol: f64,
    warnings: &mut Vec<Warning>,
) -> Result<Value> {
    let lang = p.require_language()?;
    let alpha = parse_alpha(p, alpha)?;
    let counts = spectra::synchronized_counts(lang, &alpha, n);
    let h = spectra::h_syn(lang, &alpha, n)?;
    let mut out = json!({
        "alpha": render(p, &alpha),
        "synchronized_counts": bigs(&counts[1..]),
        "h_syn": estimate(&h),
    });
    if let Some(g) = p.graph() {
        match g.fischer_cover() {
            Ok(f) => {
                let r = spectra::sync_entropy_check(&f, &alpha, n, tol)?;
                out["graph_entropy"] = enclosure(&r.graph_entropy);
                out["consistent"] = json!(r.consistent);
                out["tol"] = json!(tol);
            }
            Err(Error::Precondition(m)) => warnings.push(Warning::new("reducible", m, None)),
            Err(e) => return Err(e),
        }
        if let SyncVerdict::No { left, right } = g.is_synchronizing_word(&alpha, 6)? {
            warnings.push(Warning::new(
                "not-synchronizing",
                format!(
                    "alpha is not synchronizing: {}·alpha and alpha·{} are admissible, the join is not",
                    render(p, &left),
                    render(p, &right)
                ),
                Some(6),
            ));
        }
    }
    warnings.push(Warning::new(
        "estimate",
        "h_syn is a finite-horizon estimate",
        Some(n),
    ));
    Ok(out)
}

fn generator_set(p: &Presentation, alpha: Option<&str>, horizon: usize) -> Result<GeneratorSet> {
    match (p, alpha) {
        (Presentation::Generators { set, .. }, None) => Ok(set.clone()),
        (_, Some(a)) => extract_generators(p.require_language()?, &parse_alpha(p, a)?, horizon),
        (_, None) => Err(Error::Input(
            "--alpha is required for this presentation".into(),
        )),
    }
}

fn generator_value(p: &Presentation, s: &GeneratorSet) -> Value {
    json!({
        "alpha": render(p, &s.alpha),
        "members": s.returns.iter().map(|w| render(p, w)).collect::<Vec<_>>(),
        "lengths": s.lengths(),
        "horizon": s.horizon,
        "complete": s.complete,
        "structure": s.structure.as_ref().map(|l| json!({
            "finite": l.finite_lengths,
            "progressions": l.progressions.iter().map(|q| [q.start, q.step]).collect::<Vec<_>>(),
        })),
    })
}

fn bounded_list_warning(s: &GeneratorSet, warnings: &mut Vec<Warning>) {
    if !s.complete {
        let certified = if s.structure.is_some() {
            "; full length set certified as eventually periodic"
        } else {
            ""
        };
        warnings.push(Warning::new(
            "horizon-bounded",
            format!("horizon-bounded generator list{certified}"),
            Some(s.horizon),
        ));
    }
}

fn mixing(
    p: &Presentation,
    alpha: Option<&str>,
    horizon: usize,
    witness_horizon: usize,
    warnings: &mut Vec<Warning>,
) -> Result<Value> {
    if let Presentation::LoopGraph(spec) = p {
        let g = spec.gcd();
        return Ok(json!({
            "verdict": if g == 1 { "mixing" } else { "not-mixing" },
            "gcd": g,
        }));
    }
    let s = generator_set(p, alpha, horizon)?;
    bounded_list_warning(&s, warnings);
    let verdict = mixing_gcd_test(&s)?;
    let mut out = json!({
        "generators": generator_value(p, &s),
        "gcd": s.gcd_at_horizon(),
    });
    out["verdict"] = match verdict {
        MixingVerdict::Mixing => json!("mixing"),
        MixingVerdict::NotMixing { period } => {
            out["period"] = json!(period);
            json!("not-mixing")
        }
        MixingVerdict::Inconclusive { gcd_at_horizon } => {
            warnings.push(Warning::new(
                "inconclusive",
                format!("gcd {gcd_at_horizon} among listed generators; longer ones may lower it"),
                Some(s.horizon),
            ));
            json!("inconclusive")
        }
    };
    let lang = p.require_language()?;
    let ev = mixing_evidence(lang, &s.alpha, witness_horizon, 5, 5);
    let lengths: Vec<usize> = gap_lengths(lang, &s.alpha, witness_horizon)
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(n, _)| n + s.alpha.len())
        .collect();
    let witness_gcd = lengths.iter().fold(0usize, |g, &l| g.gcd(&l));
    let confirms = match verdict {
        MixingVerdict::Mixing => ev.mixing_from.is_some(),
        MixingVerdict::NotMixing { period } => witness_gcd as u64 == period,
        MixingVerdict::Inconclusive { .. } => false,
    };
    out["witness"] = json!({
        "horizon": witness_horizon,
        "return_length_gcd": witness_gcd,
        "mixing_from": ev.mixing_from,
        "weak_mixing": ev.weak_mixing,
        "totally_irreducible": ev.totally_irreducible,
        "confirms_verdict": confirms,
    });
    warnings.push(Warning::new(
        "bounded-witness",
        "direct witness search is evidence within its horizon only",
        Some(witness_horizon),
    ));
    Ok(out)
}

fn period(
    p: &Presentation,
    alpha: Option<&str>,
    horizon: usize,
    warnings: &mut Vec<Warning>,
) -> Result<Value> {
    let mut out = json!({});
    if let Presentation::LoopGraph(spec) = p {
        out["cyclic_cover_period"] = json!(spec.gcd());
        return Ok(out);
    }
    if alpha.is_some() || matches!(p, Presentation::Generators { .. }) {
        let s = generator_set(p, alpha, horizon)?;
        out["generators"] = generator_value(p, &s);
        match cyclic_cover_period(&s) {
            Ok(q) => out["cyclic_cover_period"] = json!(q),
            Err(Error::Precondition(m)) => {
                out["gcd_at_horizon"] = json!(s.gcd_at_horizon());
                warnings.push(Warning::new("horizon-bounded", m, Some(s.horizon)));
            }
            Err(e) => return Err(e),
        }
    }
    if let Some(g) = p.graph() {
        match g.fischer_cover() {
            Ok(f) => out["fischer_period"] = json!(f.underlying().period()?),
            Err(Error::Precondition(m)) => warnings.push(Warning::new("reducible", m, None)),
            Err(e) => return Err(e),
        }
    }
    if out.as_object().is_some_and(|o| o.is_empty()) {
        return Err(Error::Precondition(
            "no generator set or finite presentation to take a period from".into(),
        ));
    }
    Ok(out)
}

fn fischer(p: &Presentation) -> Result<Value> {
    let g = p.require_graph()?;
    let f = g.fischer_cover()?;
    let doc = Presentation::LabeledGraph(f.clone()).to_document();
    Ok(json!({
        "states": f.vertex_count(),
        "edges": f.edges().len(),
        "input_is_fischer_cover": label_isomorphic(&g.essential().0, &f),
        "cover": doc,
    }))
}

fn sync_words(
    p: &Presentation,
    max_len: usize,
    word: Option<&str>,
    horizon: usize,
    warnings: &mut Vec<Warning>,
) -> Result<Value> {
    if let Some(text) = word {
        let w = parse_alpha(p, text)?;
        let verdict = match p {
            Presentation::Sft(s) => s.is_synchronizing_word(&w, horizon)?,
            _ => p
                .require_graph()?
                .fischer_cover()?
                .is_synchronizing_word(&w, horizon)?,
        };
        let v = match verdict {
            SyncVerdict::Yes => json!({ "word": render(p, &w), "verdict": "synchronizing" }),
            SyncVerdict::No { left, right } => json!({
                "word": render(p, &w),
                "verdict": "not-synchronizing",
                "left": render(p, &left),
                "right": render(p, &right),
            }),
            SyncVerdict::Unknown { horizon } => {
                warnings.push(Warning::new(
                    "unknown",
                    "no counterexample found within the horizon; nothing certified",
                    Some(horizon),
                ));
                json!({ "word": render(p, &w), "verdict": "unknown", "horizon": horizon })
            }
        };
        return Ok(v);
    }
    let f = p.require_graph()?.fischer_cover()?;
    Ok(match f.find_synchronizing_word(max_len)? {
        Some(w) => json!({ "word": render(p, &w), "length": w.len() }),
        None => {
            warnings.push(Warning::new(
                "not-found",
                "no synchronizing word within the length bound",
                Some(max_len),
            ));
            json!({ "word": Value::Null })
        }
    })
}

fn recurrence_fit_value(fit: &RecurrenceFit) -> Value {
    match fit {
        RecurrenceFit::Found { coefficients } => json!({
            "order": coefficients.len(),
            "coefficients": coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        }),
        RecurrenceFit::NoneAtHorizon { max_order } => json!({ "none_at_horizon": max_order }),
    }
}

fn first_return_of(p: &Presentation, order: usize) -> Result<IntSeries> {
    Ok(IntSeries::first_return(&p.loop_spec()?, order))
}

fn zeta_cmd(
    p: &Presentation,
    order: usize,
    tower: &[PathBuf],
    max_recurrence: usize,
    supplied: &[u64],
    warnings: &mut Vec<Warning>,
) -> Result<Value> {
    let (z, periodic) = match p {
        _ if !supplied.is_empty() => {
            let t = zeta::PeriodicTable::from_u64(supplied)?;
            (zeta::zeta_from_periodic(&t, order.min(t.len()))?, Some(t))
        }
        Presentation::LoopGraph(_) => (zeta::zeta_loop(&first_return_of(p, order)?, order)?, None),
        Presentation::Sft(s) => {
            let t = zeta::periodic_table_sft(s, order);
            (zeta::zeta_from_periodic(&t, order)?, Some(t))
        }
        _ => {
            let t = zeta::periodic_table(p.require_language()?, order)?;
            (zeta::zeta_from_periodic(&t, order)?, Some(t))
        }
    };
    let fit = zeta::detect_linear_recurrence(z.coeffs(), max_recurrence);
    if matches!(fit, RecurrenceFit::NoneAtHorizon { .. }) {
        warnings.push(Warning::new(
            "no-recurrence",
            "no linear recurrence found; this is not a transcendence proof",
            Some(order),
        ));
    }
    let mut out = json!({
        "order": order,
        "coefficients": signed_bigs(z.coeffs()),
        "recurrence": recurrence_fit_value(&fit),
    });
    if let Some(t) = &periodic {
        out["periodic_points"] = bigs(t.values());
    }
    if !tower.is_empty() {
        let fs = tower
            .iter()
            .map(|path| first_return_of(&load_presentation(path)?, order))
            .collect::<Result<Vec<_>>>()?;
        let prod = zeta::zeta_depth_product(&fs, order)?;
        out["tower"] = json!({
            "factors": fs.iter().map(|f| signed_bigs(f.coeffs())).collect::<Vec<_>>(),
            "product": signed_bigs(prod.coeffs()),
            "matches": prod == z,
        });
    }
    Ok(out)
}

fn loop_zeta(p: &Presentation, order: usize) -> Result<Value> {
    let f = first_return_of(p, order)?;
    let z = zeta::zeta_loop(&f, order)?;
    Ok(json!({
        "order": order,
        "first_return": signed_bigs(f.coeffs()),
        "coefficients": signed_bigs(z.coeffs()),
    }))
}

fn recurrence_value(r: &spectra::RecurrenceReport) -> Value {
    let (class, mean) = match r.class {
        Recurrence::PositiveRecurrent { mean_return_time } => {
            ("positive-recurrent", num(mean_return_time))
        }
        Recurrence::NullRecurrent => ("null-recurrent", Value::Null),
        Recurrence::Transient => ("transient", Value::Null),
    };
    json!({
        "class": class,
        "mean_return_time": mean,
        "root": r.root.map(num),
        "entropy": num(r.entropy),
    })
}

fn recurrence(p: &Presentation) -> Result<Value> {
    let spec = p.loop_spec()?;
    let r = spectra::classify_recurrence(&spec)?;
    let e = spectra::loop_entropy(&spec, 1e-12)?;
    Ok(json!({ "recurrence": recurrence_value(&r), "loop_entropy": estimate(&e) }))
}

fn svgl(
    p: &Presentation,
    max_n: usize,
    word_horizon: usize,
    warnings: &mut Vec<Warning>,
) -> Result<Value> {
    let lang = p.require_language()?;
    warnings.push(Warning::new(
        "bounded-witness",
        format!("pairs u, v of length <= {word_horizon} tested; evidence only"),
        Some(max_n),
    ));
    Ok(match svgl_witness(lang, max_n, word_horizon) {
        SvglOutcome::Witness { transition_length } => json!({
            "verdict": "witness",
            "transition_length": transition_length,
            "word_horizon": word_horizon,
        }),
        SvglOutcome::NoWitness { left, right } => json!({
            "verdict": "no-witness",
            "left": render(p, &left),
            "right": render(p, &right),
            "max_n": max_n,
        }),
    })
}

fn gap(
    p: &Presentation,
    extend_len: usize,
    n: usize,
    warnings: &mut Vec<Warning>,
) -> Result<Value> {
    let r = spectra::subsystem_gap_harness(p.require_language()?, extend_len, n)?;
    if !r.nonpositive.is_empty() {
        warnings.push(Warning::new(
            "nonpositive-gap",
            format!(
                "{} subsystems show no entropy drop at this horizon",
                r.nonpositive.len()
            ),
            Some(n),
        ));
    }
    Ok(json!({
        "h": estimate(&r.h_full),
        "h_certified": enclosure(&r.h_full_certified),
        "entries": r.entries.iter().map(|e| json!({
            "word": render(p, &e.word),
            "subsystem_empty": e.subsystem_empty,
            "h_sub": num(e.h_sub.point),
            "gap": num(e.gap),
            "certified_gap": e.certified_gap.as_ref().map(enclosure),
        })).collect::<Vec<_>>(),
        "all_positive": r.nonpositive.is_empty(),
    }))
}

fn require_dyck(p: &Presentation) -> Result<&dyck::DyckSystem> {
    match p {
        Presentation::Dyck(d) => Ok(d),
        other => Err(Error::Precondition(format!(
            "dyck commands need a dyck document, got {}",
            other.kind()
        ))),
    }
}

fn dyck_count(p: &Presentation, n: usize, mode: CountModeArg, csv: Option<&Path>) -> Result<Value> {
    let d = require_dyck(p)?;
    let mode = match mode {
        CountModeArg::Dp => DyckCountMode::StackDp,
        CountModeArg::Enumerate => DyckCountMode::Enumerate,
    };
    let rows = (1..=n)
        .map(|k| dyck::dyck_counts(d, k, mode))
        .collect::<Result<Vec<_>>>()?;
    if let Some(path) = csv {
        let t = CountTable::new(
            CountKind::Block,
            rows.iter().map(|r| r.total.clone()).collect(),
        );
        report::emit_growth_csv(&t, path)?;
    }
    let col =
        |f: fn(&dyck::AbcCounts) -> &BigUint| rows.iter().map(|r| big(f(r))).collect::<Vec<_>>();
    Ok(json!({
        "block_counts": col(|r| &r.total),
        "a_counts": col(|r| &r.a),
        "balanced_counts": col(|r| &r.b),
        "c_counts": col(|r| &r.c),
    }))
}

fn dyck_entropy(
    p: &Presentation,
    n: usize,
    window: usize,
    warnings: &mut Vec<Warning>,
) -> Result<Value> {
    let d = require_dyck(p)?;
    let r = dyck::dyck_entropy_report(d, n, window)?;
    let g = dyck::dyck_growth_inequality_check(d, n)?;
    if r.b3_flag {
        warnings.push(Warning::new(
            "b3-discrepancy",
            format!(
                "exact |B_3| = {} differs from the 64 assumed by the averaging bound",
                r.b3
            ),
            None,
        ));
    }
    if !g.violations.is_empty() {
        warnings.push(Warning::new(
            "growth-inequality-violated",
            format!(
                "|C_(n+1)| <= {}|C_n| fails for n in {:?}",
                g.factor, g.violations
            ),
            Some(n),
        ));
    }
    Ok(json!({
        "block_counts": bigs(r.counts.counts()),
        "estimate": estimate(&r.estimate),
        "extrapolated": num(r.extrapolated),
        "log_ratios": r.ratios.iter().map(|(k, x)| json!([k, num(*x)])).collect::<Vec<_>>(),
        "unrestricted_entropy": num(r.unrestricted_entropy),
        "claimed_bound": r.claimed_bound.map(num),
        "margin": r.margin.map(num),
        "b3": big(&r.b3),
        "b3_flag": r.b3_flag,
        "growth_check": {
            "factor": g.factor.to_string(),
            "c_counts": g.rows.iter().map(|row| big(&row.1)).collect::<Vec<_>>(),
            "violations": g.violations,
        },
    }))
}

/// Convenience for tests and scripts: parse argv and run.
pub fn run_args<I, T>(args: I) -> std::result::Result<Report, String>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| e.to_string())?;
    run(&cli.command).map_err(|e| e.to_string())
}
