//! Command-line front end: `query`, `fuzz` and `bench`.
//!
//! Exit codes: 0 on success, 1 when fuzzing finds a mismatch, 2 for bad
//! input (with the script line when there is one), 3 when the script holds
//! an edit the chosen engine cannot apply.

use std::fmt::Write as _;
use std::io::Write;
use std::ops::RangeInclusive;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::counters;
use crate::csr::DynamicIsa;
use crate::dsa::DynamicSa;
use crate::dynstr::EditOp;
use crate::oracle;
use crate::EpochPolicy;

#[derive(Debug, Parser)]
#[command(name = "dynsa", version, about = "Suffix array lookups on a text under edits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply an edit script to a text file, then answer rank queries.
    Query(QueryArgs),
    /// Random texts and edits checked against brute force after every edit.
    Fuzz(FuzzArgs),
    /// Per-update and per-query operation counts over a grid of lengths.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Isa,
    Sa,
    Bwt,
    Lcp,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Isa => "isa",
            Mode::Sa => "sa",
            Mode::Bwt => "bwt",
            Mode::Lcp => "lcp",
        }
    }
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    /// Text file, read as raw bytes (one trailing newline is dropped).
    pub text: PathBuf,
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Edit script: `sub <i> <c>`, `ins <i> <c>` or `del <i>` per line.
    #[arg(long)]
    pub script: Option<PathBuf>,
    /// Whitespace-separated ranks, or `all`.
    #[arg(long, default_value = "")]
    pub queries: String,
}

#[derive(Debug, Args)]
pub struct FuzzArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Text length, `N` or `LO..HI`.
    #[arg(long, default_value = "16..96")]
    pub n: String,
    #[arg(long, default_value = "ab")]
    pub alphabet: String,
    /// Edits per text.
    #[arg(long, default_value_t = 100)]
    pub ops: usize,
    #[arg(long, value_enum, default_value = "isa")]
    pub mode: Mode,
    #[arg(long, default_value_t = 20)]
    pub texts: usize,
    /// Corrupt one answer after the first edit (harness self-test).
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value = "isa")]
    pub mode: Mode,
    /// Comma-separated text lengths.
    #[arg(long, default_value = "256,512,1024,2048,4096")]
    pub n: String,
    /// Edits measured per length.
    #[arg(long, default_value_t = 20)]
    pub ops: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value = "ab")]
    pub alphabet: String,
    #[arg(long, value_enum, default_value = "random")]
    pub shape: Shape,
}

/// How benchmark texts are generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    /// Uniform random symbols.
    Random,
    /// Long runs of short random units separated by noise, so that long
    /// words repeat and the periodic code paths are exercised.
    Periodic,
}

/// A text of length `n` with the given shape.
pub fn random_text(rng: &mut impl Rng, n: usize, sigma: &[u8], shape: Shape) -> Vec<u8> {
    let pick = |rng: &mut dyn rand::RngCore| sigma[rng.gen_range(0..sigma.len())];
    let mut out = Vec::with_capacity(n);
    match shape {
        Shape::Random => out.extend((0..n).map(|_| pick(rng))),
        Shape::Periodic => {
            while out.len() < n {
                let unit: Vec<u8> = (0..rng.gen_range(1..=4)).map(|_| pick(rng)).collect();
                let len = rng.gen_range(n / 8..=n / 3).max(1);
                out.extend(unit.iter().cycle().take(len));
                out.extend((0..rng.gen_range(1..=3)).map(|_| pick(rng)));
            }
            out.truncate(n);
        }
    }
    out
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {msg}")]
    Script { line: usize, msg: String },
    #[error("line {line}: `{op}` is not supported in isa mode")]
    Unsupported { line: usize, op: &'static str },
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Unsupported { .. } => 3,
            _ => 2,
        }
    }
}

/// One parsed script line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScriptOp {
    pub line: usize,
    pub op: EditOp,
}

/// Parses an edit script. Blank lines and lines starting with `#` are
/// skipped. `ins i c` makes `c` the new `i`-th symbol.
pub fn parse_script(src: &str) -> Result<Vec<ScriptOp>, CliError> {
    let mut out = Vec::new();
    for (idx, raw) in src.lines().enumerate() {
        let line = idx + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if fields.is_empty() || fields[0].starts_with('#') {
            continue;
        }
        let bad = |msg: String| CliError::Script { line, msg };
        let pos = |s: &str| s.parse::<usize>().map_err(|_| bad(format!("bad position `{s}`")));
        let sym = |s: &str| match s.as_bytes() {
            [c] if c.is_ascii_graphic() => Ok(*c),
            _ => Err(bad(format!("bad symbol `{s}` (expected one printable byte)"))),
        };
        let op = match (fields[0], fields.len()) {
            ("sub", 3) => EditOp::Substitute { pos: pos(fields[1])?, sym: sym(fields[2])? },
            ("ins", 3) => {
                let i = pos(fields[1])?;
                if i == 0 {
                    return Err(bad("positions start at 1".into()));
                }
                EditOp::Insert { pos: i - 1, sym: sym(fields[2])? }
            }
            ("del", 2) => EditOp::Delete { pos: pos(fields[1])? },
            ("sub" | "ins" | "del", _) => return Err(bad(format!("wrong number of fields in `{}`", raw.trim()))),
            (w, _) => return Err(bad(format!("unknown edit `{w}`"))),
        };
        out.push(ScriptOp { line, op });
    }
    Ok(out)
}

/// Parses a query list against a text of length `n`.
pub fn parse_queries(src: &str, n: usize) -> Result<Vec<usize>, CliError> {
    let src = src.trim();
    if src == "all" {
        return Ok((1..=n).collect());
    }
    src.split_whitespace()
        .map(|t| match t.parse::<usize>() {
            Ok(q) if (1..=n).contains(&q) => Ok(q),
            Ok(q) => Err(CliError::Input(format!("query {q} outside 1..={n}"))),
            Err(_) => Err(CliError::Input(format!("bad query `{t}`"))),
        })
        .collect()
}

fn read(path: &PathBuf) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Io { path: path.clone(), source })
}

fn policy() -> Result<EpochPolicy, CliError> {
    EpochPolicy::from_env().map_err(|e| CliError::Input(format!("DYNSA_EPOCH_POLICY: {e}")))
}

/// Runs a parsed command, writing results to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Query(a) => query(&a, out),
        Command::Fuzz(a) => fuzz(&a, out),
        Command::Bench(a) => bench(&a, out),
    }
}

fn emit(out: &mut dyn Write, s: &str) -> Result<(), CliError> {
    out.write_all(s.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })
}

fn query(a: &QueryArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut text = read(&a.text)?;
    if text.ends_with(b"\n") {
        text.pop();
        if text.ends_with(b"\r") {
            text.pop();
        }
    }
    let script = match &a.script {
        Some(p) => {
            let raw = read(p)?;
            let src = String::from_utf8(raw).map_err(|_| CliError::Input(format!("{}: not UTF-8", p.display())))?;
            parse_script(&src)?
        }
        None => Vec::new(),
    };
    if a.mode == Mode::Isa {
        if let Some(s) = script.iter().find(|s| !matches!(s.op, EditOp::Substitute { .. })) {
            let op = if matches!(s.op, EditOp::Insert { .. }) { "ins" } else { "del" };
            return Err(CliError::Unsupported { line: s.line, op });
        }
    }
    if text.is_empty() {
        return Err(CliError::Input("text is empty".into()));
    }
    let policy = policy()?;
    let mut buf = String::new();
    if a.mode == Mode::Isa {
        let mut idx = DynamicIsa::with_policy(&text, policy).map_err(|e| CliError::Input(e.to_string()))?;
        for s in &script {
            idx.apply(s.op).map_err(|e| CliError::Script { line: s.line, msg: e.to_string() })?;
        }
        for q in parse_queries(&a.queries, idx.len())? {
            writeln!(buf, "{q}\t{}", idx.isa(q)).unwrap();
        }
    } else {
        let mut sa = DynamicSa::with_policy(&text, policy).map_err(|e| CliError::Input(e.to_string()))?;
        for s in &script {
            sa.apply(s.op).map_err(|e| CliError::Script { line: s.line, msg: e.to_string() })?;
        }
        for q in parse_queries(&a.queries, sa.len())? {
            let ans = match a.mode {
                Mode::Sa => sa.sa(q).map(|v| v.to_string()),
                Mode::Bwt => sa.bwt(q).map(|c| char::from(c).to_string()),
                _ if q == 1 => Ok("-".to_string()),
                _ => sa.lcp_entry(q).map(|v| v.to_string()),
            }
            .map_err(|e| CliError::Input(e.to_string()))?;
            writeln!(buf, "{q}\t{ans}").unwrap();
        }
    }
    emit(out, &buf)
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, CliError> {
    let bad = || CliError::Input(format!("bad length `{s}` (expected N or LO..HI)"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

fn alphabet(s: &str) -> Result<Vec<u8>, CliError> {
    let mut a: Vec<u8> = s.bytes().collect();
    a.sort_unstable();
    a.dedup();
    if a.is_empty() {
        return Err(CliError::Input("alphabet is empty".into()));
    }
    Ok(a)
}

/// Random edits valid for a text evolving from length `n`. The isa engine
/// only receives substitutions.
pub fn random_edits(rng: &mut impl Rng, text: &[u8], sigma: &[u8], count: usize, mixed: bool) -> Vec<EditOp> {
    let mut cur = text.to_vec();
    let mut ops = Vec::with_capacity(count);
    while ops.len() < count {
        let c = sigma[rng.gen_range(0..sigma.len())];
        let kind = if mixed { rng.gen_range(0..3) } else { 0 };
        let op = match kind {
            1 => EditOp::Insert { pos: rng.gen_range(0..=cur.len()), sym: c },
            2 if cur.len() > 1 => EditOp::Delete { pos: rng.gen_range(1..=cur.len()) },
            _ => {
                if sigma.len() < 2 {
                    continue;
                }
                let pos = rng.gen_range(1..=cur.len());
                if cur[pos - 1] == c {
                    continue;
                }
                EditOp::Substitute { pos, sym: c }
            }
        };
        apply_plain(&mut cur, op);
        ops.push(op);
    }
    ops
}

/// Applies an edit to a plain vector; `false` if it does not fit.
pub fn apply_plain(text: &mut Vec<u8>, op: EditOp) -> bool {
    match op {
        EditOp::Substitute { pos, sym } if (1..=text.len()).contains(&pos) && text[pos - 1] != sym => {
            text[pos - 1] = sym;
        }
        EditOp::Insert { pos, sym } if pos <= text.len() => text.insert(pos, sym),
        EditOp::Delete { pos } if (1..=text.len()).contains(&pos) && text.len() > 1 => {
            text.remove(pos - 1);
        }
        _ => return false,
    }
    true
}

/// Script line for an edit, in the `query --script` format.
pub fn script_line(op: EditOp) -> String {
    match op {
        EditOp::Substitute { pos, sym } => format!("sub {pos} {}", char::from(sym)),
        EditOp::Insert { pos, sym } => format!("ins {} {}", pos + 1, char::from(sym)),
        EditOp::Delete { pos } => format!("del {pos}"),
    }
}

/// First disagreement with brute force.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    /// Number of edits applied when it showed up.
    pub step: usize,
    pub what: String,
}

fn compare(step: usize, what: &str, q: usize, want: impl ToString, got: impl ToString) -> Result<(), Mismatch> {
    let (want, got) = (want.to_string(), got.to_string());
    if want == got {
        Ok(())
    } else {
        Err(Mismatch { step, what: format!("{what} {q} expected {want} got {got}") })
    }
}

/// Replays `ops` on `text` with the engine for `mode`, checking every
/// answer after every edit.
pub fn replay(mode: Mode, text: &[u8], ops: &[EditOp], policy: EpochPolicy, fault: bool) -> Result<(), Mismatch> {
    let run = || -> Result<(), Mismatch> {
        let mut plain = text.to_vec();
        if mode == Mode::Isa {
            let mut idx = DynamicIsa::with_policy(text, policy).map_err(|e| Mismatch { step: 0, what: e.to_string() })?;
            for step in 0..=ops.len() {
                if step > 0 {
                    let op = ops[step - 1];
                    apply_plain(&mut plain, op);
                    idx.apply(op).map_err(|e| Mismatch { step, what: format!("edit rejected: {e}") })?;
                }
                let want = oracle::naive_isa(&plain);
                for (i, &w) in want.iter().enumerate() {
                    let mut got = idx.isa(i + 1);
                    if fault && step > 0 && i == 0 {
                        got += 1;
                    }
                    compare(step, "isa", i + 1, w, got)?;
                }
                idx.check_invariants().map_err(|e| Mismatch { step, what: format!("invariant: {e}") })?;
            }
        } else {
            let mut sa = DynamicSa::with_policy(text, policy).map_err(|e| Mismatch { step: 0, what: e.to_string() })?;
            for step in 0..=ops.len() {
                if step > 0 {
                    let op = ops[step - 1];
                    apply_plain(&mut plain, op);
                    sa.apply(op).map_err(|e| Mismatch { step, what: format!("edit rejected: {e}") })?;
                }
                let want = oracle::naive_sa(&plain);
                let lcp = oracle::naive_lcp_array(&plain);
                let bwt = oracle::naive_bwt(&plain);
                for i in 1..=plain.len() {
                    let mut got = sa.sa(i).map_err(|e| Mismatch { step, what: e.to_string() })?;
                    if fault && step > 0 && i == 1 {
                        got += 1;
                    }
                    compare(step, "sa", i, want[i - 1], got)?;
                    let b = sa.bwt(i).map_err(|e| Mismatch { step, what: e.to_string() })?;
                    compare(step, "bwt", i, char::from(bwt[i - 1]), char::from(b))?;
                    if i > 1 {
                        let l = sa.lcp_entry(i).map_err(|e| Mismatch { step, what: e.to_string() })?;
                        compare(step, "lcp", i, lcp[i - 1], l)?;
                    }
                }
            }
        }
        Ok(())
    };
    match catch_unwind(AssertUnwindSafe(run)) {
        Ok(r) => r,
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(Mismatch { step: usize::MAX, what: format!("panic: {msg}") })
        }
    }
}

fn still_valid(text: &[u8], ops: &[EditOp]) -> bool {
    let mut t = text.to_vec();
    ops.iter().all(|&op| apply_plain(&mut t, op))
}

/// Drops edits one at a time while the replay still fails.
pub fn minimize(mode: Mode, text: &[u8], ops: &[EditOp], policy: EpochPolicy, fault: bool) -> Vec<EditOp> {
    let mut ops = ops.to_vec();
    if let Err(m) = replay(mode, text, &ops, policy, fault) {
        if m.step <= ops.len() {
            ops.truncate(m.step);
        }
    }
    let mut i = ops.len();
    while i > 0 {
        i -= 1;
        let mut cand = ops.clone();
        cand.remove(i);
        if still_valid(text, &cand) && replay(mode, text, &cand, policy, fault).is_err() {
            ops = cand;
        }
    }
    ops
}

fn fuzz(a: &FuzzArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let lens = parse_range(&a.n)?;
    let sigma = alphabet(&a.alphabet)?;
    let policy = policy()?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mode = if a.mode == Mode::Isa { Mode::Isa } else { Mode::Sa };
    let (res, cost) = counters::measure(|| -> Result<(), CliError> {
        for round in 0..a.texts {
            let n = rng.gen_range(lens.clone());
            let text = random_text(&mut rng, n, &sigma, Shape::Random);
            let ops = random_edits(&mut rng, &text, &sigma, a.ops, mode != Mode::Isa);
            if replay(mode, &text, &ops, policy, a.inject_fault).is_err() {
                let small = minimize(mode, &text, &ops, policy, a.inject_fault);
                let m = replay(mode, &text, &small, policy, a.inject_fault).expect_err("minimized case still fails");
                let mut rep = format!(
                    "FAIL\tmode={}\tseed={}\ttext={}\tedits={}\n{}\n# text: {}\n",
                    mode.name(),
                    a.seed,
                    round + 1,
                    small.len(),
                    m.what,
                    String::from_utf8_lossy(&text)
                );
                for op in &small {
                    rep.push_str(&script_line(*op));
                    rep.push('\n');
                }
                emit(out, &rep)?;
                return Err(CliError::Mismatch(format!("mismatch in text {} after {} edits", round + 1, m.step)));
            }
        }
        Ok(())
    });
    res?;
    let summary = format!(
        "PASS\tmode={}\ttexts={}\tedits={}\tlce={}\trange_visits={}\n",
        mode.name(),
        a.texts,
        a.texts * a.ops,
        cost.lce,
        cost.range_visits
    );
    emit(out, &summary)
}

/// Averages for one text length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub k: usize,
    pub update_lce: f64,
    pub update_visits: f64,
    pub query_cost: f64,
    pub micros: f64,
}

impl BenchRow {
    pub fn update_cost(&self) -> f64 {
        self.update_lce + self.update_visits
    }
}

/// Measures `ops` random edits and as many random queries per length.
pub fn bench_rows(
    mode: Mode,
    grid: &[usize],
    ops: usize,
    seed: u64,
    sigma: &[u8],
    shape: Shape,
    policy: EpochPolicy,
) -> Vec<BenchRow> {
    let mut rows = Vec::new();
    for &n in grid {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
        let text = random_text(&mut rng, n, sigma, shape);
        let edits = random_edits(&mut rng, &text, sigma, ops, mode != Mode::Isa);
        let queries: Vec<usize> = (0..256).map(|_| rng.gen_range(1..=n)).collect();
        let mut total = counters::Cost::default();
        let start;
        let (k, query_cost);
        if mode == Mode::Isa {
            let mut idx = DynamicIsa::with_policy(&text, policy).expect("non-empty text");
            start = Instant::now();
            for &op in &edits {
                let (r, c) = counters::measure(|| idx.apply(op));
                r.expect("generated edits are valid");
                total.lce += c.lce;
                total.range_visits += c.range_visits;
            }
            k = idx.k();
            let (_, qc) = counters::measure(|| queries.iter().map(|&q| idx.isa(q.min(idx.len()))).sum::<usize>());
            query_cost = qc.total() as f64 / queries.len() as f64;
        } else {
            let mut sa = DynamicSa::with_policy(&text, policy).expect("non-empty text");
            start = Instant::now();
            for &op in &edits {
                let (r, c) = counters::measure(|| sa.apply(op));
                r.expect("generated edits are valid");
                total.lce += c.lce;
                total.range_visits += c.range_visits;
            }
            k = sa.k();
            let (_, qc) =
                counters::measure(|| queries.iter().map(|&q| sa.sa(q.min(sa.len())).unwrap()).sum::<usize>());
            query_cost = qc.total() as f64 / queries.len() as f64;
        }
        let m = ops.max(1) as f64;
        rows.push(BenchRow {
            n,
            k,
            update_lce: total.lce as f64 / m,
            update_visits: total.range_visits as f64 / m,
            query_cost,
            micros: start.elapsed().as_secs_f64() * 1e6 / m,
        });
    }
    rows
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs.iter().zip(ys).map(|(x, y)| (x.ln(), y.max(1e-9).ln())).collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn bench(a: &BenchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let grid: Vec<usize> = a
        .n
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().ok().filter(|&v: &usize| v > 0).ok_or_else(|| CliError::Input(format!("bad length `{s}`"))))
        .collect::<Result<_, _>>()?;
    let sigma = alphabet(&a.alphabet)?;
    let mode = if a.mode == Mode::Isa { Mode::Isa } else { Mode::Sa };
    let rows = bench_rows(mode, &grid, a.ops, a.seed, &sigma, a.shape, policy()?);
    let mut buf = String::from("n\tk\tupdate_lce\tupdate_range_visits\tupdate_cost\tquery_cost\tupdate_micros\n");
    for r in &rows {
        writeln!(
            buf,
            "{}\t{}\t{:.1}\t{:.1}\t{:.1}\t{:.1}\t{:.1}",
            r.n,
            r.k,
            r.update_lce,
            r.update_visits,
            r.update_cost(),
            r.query_cost,
            r.micros
        )
        .unwrap();
    }
    if rows.len() >= 2 {
        let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
        let ys: Vec<f64> = rows.iter().map(BenchRow::update_cost).collect();
        eprintln!("slope\tupdate_cost\t{:.3}", loglog_slope(&xs, &ys));
    }
    emit(out, &buf)
}
