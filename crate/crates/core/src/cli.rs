//! The `factor-avoid` command line.
//!
//! Every subcommand produces a text rendering and a JSON value carrying the
//! same data; `--json` (or `FACTOR_AVOID_FORMAT=json`) selects the latter.
//! Exit status is 0 on success, 1 when a verification fails and 2 for
//! invalid input.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::avoidance::{avoiding_series, count_avoiding, occurrence_gf, verify_cluster_theorem};
use crate::clusters::{
    cluster_gf, cluster_polynomial, cluster_words, enumerate_clusters, recurrence_trace, render_marked, MarkedWord,
    Method,
};
use crate::error::{Error, Result};
use crate::lattice::{build_lattice, cluster_bridge, greene_check, mobius_crosscut, IntervalFamily, UnionLattice};
use crate::problem::{split_alphabet, Problem, ProblemSpec};
use crate::reciprocal::{
    csv_check, m_all, m_by_clusters, m_by_inversion, m_by_salient, path_agreement_check, salient_words, witness_chain,
    MTable,
};
use crate::report::{Check, Report};
use crate::series::{bigint_json, Coefficient, Series};
use crate::sweep;
use crate::words::{guard_enumeration, occurrences, reduce, ForbiddenSet};

pub const DEFAULT_WORD_LIMIT: u128 = 10_000_000;

/// Derived families with more intervals than this are skipped by `verify`.
const DERIVED_FAMILY_LIMIT: usize = 12;
const DERIVED_FAMILY_COUNT: usize = 500;

#[derive(Parser, Debug)]
#[command(
    name = "factor-avoid",
    version,
    about = "Words avoiding forbidden factors: counts, clusters, reciprocals, Möbius functions"
)]
pub struct Cli {
    /// JSON problem file: {"alphabet": [...], "forbidden": [...], "max_len": n, "t_value": t}
    #[arg(long, global = true, value_name = "FILE")]
    pub spec: Option<PathBuf>,

    /// Alphabet, as "abc" or "x1,x2,x3"; inferred from --forbid when omitted
    #[arg(short = 'a', long, global = true)]
    pub alphabet: Option<String>,

    /// Forbidden words, comma separated or repeated
    #[arg(short = 'f', long = "forbid", global = true, value_delimiter = ',')]
    pub forbid: Vec<String>,

    /// Longest word considered
    #[arg(short = 'L', long = "max-len", global = true)]
    pub max_len: Option<usize>,

    /// Shorthand for --format json
    #[arg(long, global = true)]
    pub json: bool,

    #[arg(long, global = true, value_enum, env = "FACTOR_AVOID_FORMAT", default_value = "text")]
    pub format: Format,

    /// Refuse commands that would enumerate more than this many words
    #[arg(long, global = true, default_value_t = DEFAULT_WORD_LIMIT)]
    pub limit: u128,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Number of avoiding words of each length
    Count,
    /// Print a truncated series
    Series {
        #[arg(long, value_enum, default_value = "avoiding")]
        which: Which,
        /// Evaluate the t-variable at this integer
        #[arg(long, allow_hyphen_values = true)]
        t: Option<i64>,
    },
    /// Clusters of one word and its cluster polynomial
    Clusters {
        #[arg(long)]
        word: String,
    },
    /// Nonzero coefficients of the reciprocal of the avoiding series
    MTable {
        #[arg(long, value_enum, default_value = "inversion")]
        method: MMethod,
        /// List zero entries too
        #[arg(long)]
        dense: bool,
    },
    /// Salient words with their witness chains
    Salient,
    /// Möbius function of the lattice of unions of an interval family
    Mobius {
        /// JSON file: {"intervals": [[lo, hi], ...]}
        #[arg(long, value_name = "FILE")]
        intervals: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        method: MobiusMethod,
        /// With --method recursive, every pair X <= Y instead of (0, Y)
        #[arg(long)]
        all_pairs: bool,
    },
    /// Run every identity check on the problem
    Verify {
        /// Also run seeded random sweeps
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 20)]
        random_sets: usize,
        #[arg(long, default_value_t = 20)]
        random_families: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Avoiding,
    Reciprocal,
    ClusterGf,
    OccurrenceGf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MMethod {
    Inversion,
    Clusters,
    Salient,
    All,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MobiusMethod {
    Recursive,
    Crosscut,
    Cluster,
    All,
}

/// Result of a subcommand in both renderings.
struct Output {
    text: String,
    json: Value,
    ok: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, ok: true }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let json = cli.json || cli.format == Format::Json;
    match execute(&cli) {
        Ok(o) => {
            let written = if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&o.json).expect("serializable"))
            } else {
                write!(out, "{}", o.text)
            };
            if written.is_err() {
                return 2;
            }
            if o.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let code = exit_code(&e);
            if json {
                let _ = writeln!(out, "{}", json!({"error": e.to_string(), "exit_code": code}));
            }
            let _ = writeln!(err, "error: {e}");
            code
        }
    }
}

/// 1 for failed verifications, 2 for everything else.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::PathDisagreement { .. } | Error::RangeViolation { .. } => 1,
        _ => 2,
    }
}

fn load_problem(cli: &Cli) -> Result<Problem> {
    let mut spec = match &cli.spec {
        Some(path) => ProblemSpec::from_json(&read_file(path)?)?,
        None => ProblemSpec::default(),
    };
    if let Some(a) = &cli.alphabet {
        spec.alphabet = split_alphabet(a);
    }
    if !cli.forbid.is_empty() {
        spec.forbidden = cli.forbid.iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
    }
    if let Some(l) = cli.max_len {
        spec.max_len = l;
    }
    spec.build()
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Spec(format!("{}: {e}", path.display())))
}

fn problem_json(p: &Problem) -> Value {
    json!({
        "alphabet": p.alphabet.letters(),
        "forbidden": p.forbidden.render(),
        "max_len": p.max_len,
    })
}

fn execute(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Mobius { intervals, method, all_pairs } => {
            let fam = IntervalFamily::from_json(&read_file(intervals)?)?;
            mobius(&fam, *method, *all_pairs)
        }
        Command::Count => count(&load_problem(cli)?),
        Command::Series { which, t } => {
            let p = load_problem(cli)?;
            guard_enumeration(&p.alphabet, p.max_len, cli.limit)?;
            series(&p, *which, t.or(p.t_value))
        }
        Command::Clusters { word } => clusters(&load_problem(cli)?, word),
        Command::MTable { method, dense } => {
            let p = load_problem(cli)?;
            guard_enumeration(&p.alphabet, p.max_len, cli.limit)?;
            m_table(&p, *method, *dense)
        }
        Command::Salient => salient(&load_problem(cli)?),
        Command::Verify { seed, random_sets, random_families } => {
            let p = load_problem(cli)?;
            guard_enumeration(&p.alphabet, p.max_len, cli.limit)?;
            verify(&p, *seed, *random_sets, *random_families)
        }
    }
}

fn count(p: &Problem) -> Result<Output> {
    let counts = count_avoiding(&p.forbidden, p.max_len);
    let mut text = String::from("n\tcount\n");
    for (n, c) in counts.iter().enumerate() {
        text.push_str(&format!("{n}\t{c}\n"));
    }
    let mut j = problem_json(p);
    j["counts"] = Value::Array(counts.iter().map(bigint_json).collect());
    Ok(Output::ok(text, j))
}

fn series_output<C: Coefficient>(p: &Problem, which: &str, t: Option<i64>, s: &Series<C>) -> Output {
    let mut j = problem_json(p);
    j["series"] = json!(which);
    j["t"] = json!(t);
    j["terms"] = s.to_json();
    Output::ok(format!("{}\n", s.render()), j)
}

fn series(p: &Problem, which: Which, t: Option<i64>) -> Result<Output> {
    let f = &p.forbidden;
    let l = p.max_len;
    let name = which.to_possible_value().expect("no skipped variants").get_name().to_string();
    let poly = match which {
        Which::Avoiding => return Ok(series_output(p, &name, None, &avoiding_series(f, l))),
        Which::Reciprocal => return Ok(series_output(p, &name, None, &avoiding_series(f, l).invert()?)),
        Which::ClusterGf => cluster_gf(f, l)?,
        Which::OccurrenceGf => occurrence_gf(f, l),
    };
    Ok(match t {
        Some(t0) => series_output(p, &name, t, &poly.eval_t(&BigInt::from(t0))),
        None => series_output(p, &name, None, &poly),
    })
}

fn clusters(p: &Problem, word: &str) -> Result<Output> {
    let f = &p.forbidden;
    let w = p.alphabet.parse_word(word)?;
    let all = enumerate_clusters(&w, f)?;
    let subset = cluster_polynomial(&w, f, Method::Subset)?;
    let recurrence = if f.is_reduced() { Some(cluster_polynomial(&w, f, Method::Recurrence)?) } else { None };
    let trace = if f.is_reduced() { recurrence_trace(&w, f).ok() } else { None };

    let rendered = p.alphabet.render(&w);
    let mut text = format!("word: {rendered}\nclusters: {}\n", all.len());
    let mut marks_json = Vec::new();
    for (i, marks) in all.iter().enumerate() {
        let mw = MarkedWord::new(w.clone(), marks.iter().cloned(), f)?;
        text.push_str(&format!("[{}] {:?}\n{}\n", i + 1, mw.intervals(), render_marked(&p.alphabet, &mw)));
        marks_json.push(json!(mw.intervals()));
    }
    text.push_str(&format!("P(t) by subsets: {subset}\n"));
    match &recurrence {
        Some(r) => text.push_str(&format!("P(t) by recurrence: {r}\n")),
        None => text.push_str("P(t) by recurrence: unavailable, forbidden set is not reduced\n"),
    }
    if let Some(tr) = &trace {
        let r: Vec<String> = tr.r.iter().map(|x| x.to_string()).collect();
        let ps: Vec<String> = tr.p.iter().map(|x| x.to_string()).collect();
        text.push_str(&format!("r: [{}]\np: [{}]\n", r.join(", "), ps.join(", ")));
    }

    let mut j = problem_json(p);
    j["word"] = json!(rendered);
    j["clusters"] = json!(marks_json);
    j["polynomial"] = json!({
        "subset": subset.to_json().1,
        "recurrence": recurrence.as_ref().map(|r| r.to_json().1),
        "text": subset.to_string(),
    });
    j["recurrence_trace"] = match &trace {
        Some(tr) => json!({"r": tr.r, "p": tr.p.iter().map(|x| x.to_string()).collect::<Vec<_>>()}),
        None => Value::Null,
    };
    Ok(Output::ok(text, j))
}

fn m_table(p: &Problem, method: MMethod, dense: bool) -> Result<Output> {
    let f = &p.forbidden;
    let l = p.max_len;
    let (table, cross_checked): (MTable, Vec<&str>) = match method {
        MMethod::Inversion => (m_by_inversion(f, l)?, vec![]),
        MMethod::Clusters => (m_by_clusters(f, l)?, vec![]),
        MMethod::Salient => (m_by_salient(f, l)?, vec![]),
        MMethod::All => {
            let [inv, _, _] = m_all(f, l)?;
            (inv, vec!["cluster_eval", "salient"])
        }
    };
    let rows: Vec<(String, i8)> = if dense {
        table.dense().into_iter().map(|(w, v)| (p.alphabet.render(&w), v)).collect()
    } else {
        table.nonzero().map(|(w, v)| (p.alphabet.render(w), v)).collect()
    };
    let prov = table.provenance().to_string();
    let mut text = String::from("word\tM\tprovenance\n");
    for (w, v) in &rows {
        text.push_str(&format!("{w}\t{v}\t{prov}\n"));
    }
    if !cross_checked.is_empty() {
        text.push_str(&format!("agrees with: {}\n", cross_checked.join(", ")));
    }
    let mut j = problem_json(p);
    j["entries"] = rows.iter().map(|(w, v)| json!({"word": w, "M": v, "provenance": prov})).collect();
    j["cross_checked_with"] = json!(cross_checked);
    Ok(Output::ok(text, j))
}

fn salient(p: &Problem) -> Result<Output> {
    let records = salient_words(&p.forbidden, p.max_len)?;
    let a = &p.alphabet;
    let mut text = String::from("word\tM\twitness\tchain\n");
    let mut rows = Vec::new();
    for r in &records {
        let chain: Vec<String> = witness_chain(&records, &r.word).iter().map(|w| a.render_power(w)).collect();
        let witness = r.witness.as_ref().map(|w| a.render_power(w));
        text.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            a.render_power(&r.word),
            r.sign,
            witness.as_deref().unwrap_or("-"),
            chain.join(" <- ")
        ));
        rows.push(json!({
            "word": a.render(&r.word),
            "M": r.sign,
            "witness": r.witness.as_ref().map(|w| a.render(w)),
            "candidates": r.candidates.iter().map(|w| a.render(w)).collect::<Vec<_>>(),
            "chain": witness_chain(&records, &r.word).iter().map(|w| a.render(w)).collect::<Vec<_>>(),
        }));
    }
    let mut j = problem_json(p);
    j["salient"] = Value::Array(rows);
    Ok(Output::ok(text, j))
}

fn render_set(s: &[i64]) -> String {
    let parts: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn mobius_rows(lat: &UnionLattice, all_pairs: bool) -> Vec<(usize, usize, i64)> {
    let starts: Vec<usize> = if all_pairs { (0..lat.len()).collect() } else { vec![lat.bottom()] };
    let mut rows = Vec::new();
    for x in starts {
        for (y, v) in lat.mobius_row(x).into_iter().enumerate() {
            if let Some(v) = v {
                rows.push((x, y, v));
            }
        }
    }
    rows
}

fn mobius(fam: &IntervalFamily, method: MobiusMethod, all_pairs: bool) -> Result<Output> {
    let base = json!({"intervals": fam.intervals(), "method": method.to_possible_value().expect("named").get_name()});
    match method {
        MobiusMethod::Recursive | MobiusMethod::Crosscut => {
            let lat = build_lattice(fam)?;
            let rows: Vec<(usize, usize, i64)> = if method == MobiusMethod::Recursive {
                mobius_rows(&lat, all_pairs)
            } else {
                (0..lat.len()).map(|y| mobius_crosscut(&lat, y).map(|v| (lat.bottom(), y, v))).collect::<Result<_>>()?
            };
            let mut text = String::from("X\tY\tmu\n");
            let mut entries = Vec::new();
            for (x, y, v) in rows {
                let (xs, ys) = (lat.element(x), lat.element(y));
                text.push_str(&format!("{}\t{}\t{v}\n", render_set(&xs), render_set(&ys)));
                entries.push(json!({"x": xs, "y": ys, "mu": v}));
            }
            let mut j = base;
            j["elements"] = json!(lat.len());
            j["entries"] = Value::Array(entries);
            Ok(Output::ok(text, j))
        }
        MobiusMethod::Cluster => {
            let comps = cluster_bridge(fam)?;
            let value: i64 = comps.iter().map(|c| c.value).product();
            let mut text = String::new();
            let mut parts = Vec::new();
            for c in &comps {
                let inst = c.instance.as_ref().map(|(f, w)| (f.alphabet().render(w), f.render()));
                match &inst {
                    Some((w, f)) => text.push_str(&format!(
                        "piece {}..{}: word {w}, forbidden {{{}}}, P(-1) = {}\n",
                        c.range.0,
                        c.range.1,
                        f.join(","),
                        c.value
                    )),
                    None => text.push_str(&format!("piece {}..{}: atoms leave a gap, value 0\n", c.range.0, c.range.1)),
                }
                parts.push(json!({
                    "range": [c.range.0, c.range.1],
                    "word": inst.as_ref().map(|i| i.0.clone()),
                    "forbidden": inst.as_ref().map(|i| i.1.clone()),
                    "value": c.value,
                }));
            }
            text.push_str(&format!("mu(0, top) = {value}\n"));
            let mut j = base;
            j["components"] = Value::Array(parts);
            j["mu"] = json!(value);
            Ok(Output::ok(text, j))
        }
        MobiusMethod::All => {
            let report = greene_check(fam, true)?;
            let ok = report.passed();
            let mut j = base;
            j["report"] = serde_json::to_value(&report).expect("serializable");
            j["passed"] = json!(ok);
            Ok(Output { text: report.to_string(), json: j, ok })
        }
    }
}

/// Greene checks on the interval families cut out by the forbidden
/// occurrences of cluster words.
fn derived_greene(f: &ForbiddenSet, max_len: usize) -> Result<Check> {
    let f = reduce(f);
    let mut seen = BTreeSet::new();
    for w in cluster_words(&f, max_len) {
        let spans: Vec<_> = occurrences(&w, &f)?.into_iter().map(|o| o.span).collect();
        if spans.len() > DERIVED_FAMILY_LIMIT {
            continue;
        }
        let mut ivs = IntervalFamily::from_spans(&spans)?.normalized().intervals().to_vec();
        ivs.sort();
        seen.insert(ivs);
        if seen.len() >= DERIVED_FAMILY_COUNT {
            break;
        }
    }
    let name = "Greene checks on interval families of cluster words";
    for ivs in &seen {
        let fam = IntervalFamily::new(ivs.clone())?;
        let r = greene_check(&fam, ivs.len() <= 8)?;
        if let Some(c) = r.checks.iter().find(|c| !c.passed) {
            let mut d = c.first_failure.clone().unwrap_or_default();
            d.word = format!("{ivs:?} {}", d.word);
            return Ok(Check::fail(name, d));
        }
    }
    Ok(Check::pass(name).with_note(format!("{} families", seen.len())))
}

fn verify(p: &Problem, seed: Option<u64>, random_sets: usize, random_families: usize) -> Result<Output> {
    let report = verify_report(p, seed, random_sets, random_families)?;
    let ok = report.passed();
    let mut j = problem_json(p);
    j["checks"] = serde_json::to_value(&report.checks).expect("serializable");
    j["passed"] = json!(ok);
    let mut text = report.to_string();
    text.push_str(if ok { "all checks passed\n" } else { "some checks failed\n" });
    Ok(Output { text, json: j, ok })
}

/// Everything `verify` checks: the cluster theorem, the two-letter
/// complement identity when it applies, agreement of the three `M` tables,
/// Greene checks on interval families of cluster words and, with a seed,
/// random sweeps.
pub fn verify_report(p: &Problem, seed: Option<u64>, random_sets: usize, random_families: usize) -> Result<Report> {
    let f = &p.forbidden;
    let l = p.max_len;
    let mut report = verify_cluster_theorem(f, l)?;
    if f.words().iter().all(|w| w.len() == 2) {
        report.extend(csv_check(f, l)?);
    }
    report.checks.push(path_agreement_check(f, l));
    report.checks.push(derived_greene(f, l)?);

    if let Some(seed) = seed {
        let mut rng = sweep::rng(seed);
        let sweep_len = l.min(8);
        let mut bad = None;
        for i in 0..random_sets {
            let size = 1 + i % 3;
            let g = sweep::random_reduced_set(&mut rng, size, 3, 4);
            let mut r = verify_cluster_theorem(&g, sweep_len)?;
            r.checks.push(path_agreement_check(&g, sweep_len));
            if let Some(c) = r.checks.into_iter().find(|c| !c.passed) {
                bad = Some((g.render().join(","), c));
                break;
            }
        }
        let name = format!("cluster theorem and path agreement on {random_sets} random sets (seed {seed})");
        report.checks.push(match bad {
            None => Check::pass(name),
            Some((set, c)) => {
                let mut d = c.first_failure.unwrap_or_default();
                d.word = format!("{{{set}}} {}: {}", c.identity, d.word);
                Check::fail(name, d)
            }
        });

        let mut bad = None;
        for _ in 0..random_families {
            let fam = sweep::random_family(&mut rng, 8, 1, 12);
            let r = greene_check(&fam, true)?;
            if let Some(c) = r.checks.into_iter().find(|c| !c.passed) {
                bad = Some((fam, c));
                break;
            }
        }
        let name = format!("Greene checks on {random_families} random families (seed {seed})");
        report.checks.push(match bad {
            None => Check::pass(name),
            Some((fam, c)) => {
                let mut d = c.first_failure.unwrap_or_default();
                d.word = format!("{:?} {}: {}", fam.intervals(), c.identity, d.word);
                Check::fail(name, d)
            }
        });
    }

    Ok(report)
}
