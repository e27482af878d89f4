//! Inverted suffix array under substitutions.
//!
//! Suffixes sharing a length-k prefix are *close*; `isa(i)` is the number of
//! occurrences of smaller k-words (from the k-words tree) plus the rank of
//! suffix `i` among its close suffixes, kept in a [`RankStore`]. A
//! substitution at `x` changes close ranks in three ways, each applied as
//! O(1) interval or stairs updates per cluster of occurrences:
//!
//! - shifts: suffixes whose k-word contains `x` leave one class and join
//!   another, moving the ranks of the larger members by one;
//! - overtakes: two unaffected suffixes of one class swap order because
//!   their common extension reaches `x`;
//! - evaluation: the affected suffixes get their new ranks computed from
//!   scratch.
//!
//! Stairs updates are only stored while they sit inside an extremely
//! periodic run that is registered, so a rank lookup reads one stairs store
//! per registered run containing the position.

use std::cmp::Ordering;
use std::collections::HashMap;

use thiserror::Error;

use crate::dynstr::{DynamicString, EditOp, OldView, TextError, TextView};
use crate::occindex::{cluster_lce_progression, lex_segments, por, run_with_period, KWordsTree, Progression, Run};
use crate::rangetree::{self, Range, RangeTree};
use crate::stairs::{
    reduce_interval_sequence, FixedWidthStairs, IntervalStore, PNormalSeq, RangeUpdate, StairsCounter,
};
use crate::EpochPolicy;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsaError {
    #[error(transparent)]
    Text(#[from] TextError),
    #[error("the inverted suffix array index only supports substitutions")]
    Unsupported,
}

/// Bookkeeping for tests and benchmarks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IsaStats {
    pub substitutions: u64,
    /// Stairs updates stored in a per-period store.
    pub stairs_stored: u64,
    /// Stairs updates written out step by step.
    pub stairs_expanded: u64,
    /// Stairs updates that did not lie inside a run of their period.
    pub stairs_outside_run: u64,
    pub flushes: u64,
}

/// Close-suffix ranks: an interval store plus per-period stairs stores, read
/// through the registry of extremely periodic runs.
pub struct RankStore {
    n: usize,
    base: IntervalStore,
    per_p: HashMap<usize, FixedWidthStairs>,
    act: RangeTree,
    act_keys: HashMap<Run, rangetree::Handle>,
    stored: usize,
}

impl RankStore {
    fn from_values(values: &[i64]) -> Self {
        let n = values.len();
        let mut base = IntervalStore::new(n);
        for (i, &v) in values.iter().enumerate() {
            if v != 0 {
                base.add(i + 1, i + 1, v).unwrap();
            }
        }
        RankStore {
            n,
            base,
            per_p: HashMap::new(),
            act: RangeTree::new(2).unwrap(),
            act_keys: HashMap::new(),
            stored: 0,
        }
    }

    fn runs_at(&self, i: usize) -> Vec<usize> {
        if self.act.is_empty() {
            return Vec::new();
        }
        let r = Range::all(2).at_most(0, i as i64).at_least(1, i as i64);
        let mut ps: Vec<usize> = self.act.report(&r).unwrap().into_iter().map(|pt| pt.value as usize).collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    pub fn get(&self, i: usize) -> i64 {
        let mut v = self.base.read(i);
        for p in self.runs_at(i) {
            v += self.per_p[&p].read(i);
        }
        v
    }

    fn set(&mut self, i: usize, target: i64) {
        let d = target - self.get(i);
        if d != 0 {
            self.base.add(i, i, d).unwrap();
        }
    }

    fn register(&mut self, run: Run) {
        if !self.act_keys.contains_key(&run) {
            let h = self.act.insert(&[run.start as i64, run.end as i64], run.p as i64).unwrap();
            self.act_keys.insert(run, h);
        }
    }

    fn unregister(&mut self, run: Run) {
        if let Some(h) = self.act_keys.remove(&run) {
            self.act.remove(h).unwrap();
        }
    }

    fn registered(&self) -> Vec<Run> {
        let mut v: Vec<Run> = self.act_keys.keys().copied().collect();
        v.sort();
        v
    }

    /// Moves the stairs value at `y` for period `p` into the interval store.
    fn fold(&mut self, p: usize, y: usize) {
        if let Some(st) = self.per_p.get_mut(&p) {
            let v = st.zero_index(y);
            if v != 0 {
                self.base.add(y, y, v).unwrap();
            }
        }
    }

    fn apply<T: TextView + ?Sized>(&mut self, text: &T, u: RangeUpdate, stats: &mut IsaStats) {
        match u {
            RangeUpdate::Interval { i, j, x } => {
                if i <= j {
                    self.base.add(i as usize, j as usize, x).unwrap();
                }
            }
            RangeUpdate::Stairs(s) => {
                let p = s.p as usize;
                let (i, j) = (s.i as usize, s.j as usize);
                if j + 1 - i <= p {
                    self.base.add(i, j, s.sign).unwrap();
                    return;
                }
                let run = run_with_period(text, i, p);
                let inside = run.contains(i, j);
                if inside && run.is_extremely_periodic() {
                    self.register(run);
                    let n = self.n;
                    self.per_p.entry(p).or_insert_with(|| FixedWidthStairs::new(p, n)).apply(s).unwrap();
                    self.stored += 1;
                    stats.stairs_stored += 1;
                } else {
                    if !inside {
                        stats.stairs_outside_run += 1;
                    }
                    stats.stairs_expanded += 1;
                    for step in s.steps() {
                        self.apply(text, step, stats);
                    }
                }
            }
        }
    }

    /// Re-registers the runs touched by a substitution at `x` and folds the
    /// stairs values that lost their run.
    fn repair<T: TextView + ?Sized>(&mut self, text: &T, x: usize) {
        if self.act.is_empty() {
            return;
        }
        let n = text.len();
        let r = Range::all(2).at_most(0, x as i64 + 1).at_least(1, x as i64 - 1);
        let hits: Vec<Run> = self
            .act
            .report(&r)
            .unwrap()
            .into_iter()
            .map(|pt| Run { start: pt.coords[0] as usize, end: pt.coords[1] as usize, p: pt.value as usize })
            .collect();
        for old in hits {
            self.unregister(old);
            let p = old.p;
            let mut covered: Vec<(usize, usize)> = Vec::new();
            let mut y = old.start;
            while y <= old.end && y + p - 1 <= n {
                let run = run_with_period(text, y, p);
                if run.is_extremely_periodic() {
                    self.register(run);
                    covered.push((run.start, run.end));
                }
                if run.end >= old.end {
                    break;
                }
                y = run.end + 2 - p;
            }
            // positions of the old run outside every new one
            let mut gaps = Vec::new();
            let mut from = old.start;
            for &(a, b) in &covered {
                if a > from {
                    gaps.push((from, a - 1));
                }
                from = from.max(b + 1);
            }
            if from <= old.end {
                gaps.push((from, old.end));
            }
            for (a, b) in gaps {
                for y in a..=b.min(n) {
                    if !self.runs_at(y).contains(&p) {
                        self.fold(p, y);
                    }
                }
            }
        }
    }

    /// Folds every stairs store into the interval store.
    fn flush(&mut self) {
        let values: Vec<i64> = (1..=self.n).map(|i| self.get(i)).collect();
        *self = RankStore::from_values(&values);
    }
}

/// One half of the affected suffixes: the length-h window `S[c..=e]` that
/// every suffix `c - δ`, `δ ∈ 0..=delta_hi`, contains at offset δ.
#[derive(Clone, Copy, Debug)]
struct Half {
    c: usize,
    e: usize,
    delta_hi: usize,
}

/// Splits `t0..=t1` into maximal ranges avoiding `aligned`, plus the aligned
/// values inside it.
fn pieces(t0: usize, t1: usize, aligned: &[usize]) -> (Vec<(usize, usize)>, Vec<usize>) {
    let mut ranges = Vec::new();
    let mut singles = Vec::new();
    let mut from = t0;
    for &t in aligned {
        if t < t0 || t > t1 {
            continue;
        }
        if t > from {
            ranges.push((from, t - 1));
        }
        singles.push(t);
        from = t + 1;
    }
    if from <= t1 {
        ranges.push((from, t1));
    }
    (ranges, singles)
}

fn fixed(v: i64) -> PNormalSeq {
    PNormalSeq::Fixed(v)
}

fn arith(b0: i64, p: i64) -> PNormalSeq {
    PNormalSeq::arith(b0, p)
}

/// Interval adds `(i_t, j_t, +1)` for `t ∈ t0..=t1`, reduced.
fn emit(i_seq: &PNormalSeq, j_seq: &PNormalSeq, t0: usize, t1: usize, sign: i64, out: &mut Vec<RangeUpdate>) {
    let i = i_seq.advanced(t0 as i64);
    let j = j_seq.advanced(t0 as i64);
    let ups = reduce_interval_sequence(&i, &j, t1 + 1 - t0).expect("one difference per cluster");
    out.extend(ups.into_iter().map(|u| if sign < 0 { u.negated() } else { u }));
}

fn interval(i: i64, j: i64, x: i64, out: &mut Vec<RangeUpdate>) {
    if i <= j {
        out.push(RangeUpdate::Interval { i, j, x });
    }
}

/// Dynamic inverted suffix array; `k = ⌈√n⌉` rounded up to even.
pub struct DynamicIsa {
    text: DynamicString,
    k: usize,
    h: usize,
    kw: KWordsTree,
    kh: KWordsTree,
    kq: KWordsTree,
    ranks: RankStore,
    policy: EpochPolicy,
    stats: IsaStats,
}

impl DynamicIsa {
    pub fn new(text: &[u8]) -> Result<Self, IsaError> {
        Self::with_policy(text, EpochPolicy::default())
    }

    pub fn with_policy(text: &[u8], policy: EpochPolicy) -> Result<Self, IsaError> {
        let k = policy.isa_k(text.len());
        Ok(Self::build(DynamicString::new(text), k, policy))
    }

    fn build(text: DynamicString, k: usize, policy: EpochPolicy) -> Self {
        let k = k.max(2).next_multiple_of(2);
        let h = k / 2;
        let raw = text.to_vec();
        let sa = crate::suffix_sort::suffix_array(&raw);
        let lcp = crate::suffix_sort::lcp_array(&raw, &sa);
        let mut r = vec![0i64; raw.len()];
        for q in 1..sa.len() {
            if lcp[q] >= k {
                r[sa[q] - 1] = r[sa[q - 1] - 1] + 1;
            }
        }
        DynamicIsa {
            kw: KWordsTree::build(&text, k),
            kh: KWordsTree::build(&text, h),
            kq: KWordsTree::build(&text, h.div_ceil(2)),
            ranks: RankStore::from_values(&r),
            text,
            k,
            h,
            policy,
            stats: IsaStats::default(),
        }
    }

    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn text(&self) -> &DynamicString {
        &self.text
    }

    pub fn stats(&self) -> IsaStats {
        self.stats
    }

    /// Rank of suffix `i` among the suffixes sharing its first k symbols.
    pub fn close_rank(&self, i: usize) -> usize {
        self.ranks.get(i) as usize
    }

    /// 1-based rank of suffix `i`.
    pub fn isa(&self, i: usize) -> usize {
        let v = self.kw.node_of(&self.text, i);
        self.kw.left_count(v) + self.close_rank(i) + 1
    }

    pub fn apply(&mut self, op: EditOp) -> Result<(), IsaError> {
        match op {
            EditOp::Substitute { pos, sym } => self.substitute(pos, sym),
            _ => Err(IsaError::Unsupported),
        }
    }

    fn halves(&self, x: usize) -> Vec<Half> {
        let (n, h) = (self.len(), self.h);
        let mut out = Vec::new();
        if x >= h {
            let c = x + 1 - h;
            out.push(Half { c, e: x, delta_hi: (self.k - h).min(c - 1) });
        }
        if h >= 2 && x + h - 1 <= n {
            out.push(Half { c: x, e: x + h - 1, delta_hi: (h - 2).min(x - 1) });
        }
        out
    }

    pub fn substitute(&mut self, x: usize, sym: u8) -> Result<(), IsaError> {
        let cur = self.text.char_at(x)?;
        if cur == sym {
            return Err(TextError::TrivialSubstitution { position: x }.into());
        }
        if !self.text.alphabet().contains(sym) {
            return Err(TextError::ForeignSymbol { position: x, symbol: sym }.into());
        }
        let halves = self.halves(x);

        // ranks lost by the classes the affected suffixes leave
        for &half in &halves {
            let ups = self.shift_updates(half, -1);
            self.route(&ups);
        }

        let applied = self.text.apply_raw(EditOp::Substitute { pos: x, sym })?;
        self.kw.update_on_edit(&self.text, applied);
        self.kh.update_on_edit(&self.text, applied);
        self.kq.update_on_edit(&self.text, applied);
        self.ranks.repair(&self.text, x);

        if x > self.k {
            let ups = self.overtake_updates(x, OldView::new(&self.text, applied));
            self.route(&ups);
        }
        for &half in &halves {
            let ups = self.shift_updates(half, 1);
            self.route(&ups);
        }
        for &half in &halves {
            self.evaluate(half);
        }
        let n = self.len();
        if self.h >= 2 && x + self.h - 1 > n {
            for i in x.saturating_sub(self.h - 2).max(1)..=x {
                self.ranks.set(i, 0);
            }
        }

        self.stats.substitutions += 1;
        if self.ranks.stored > self.policy.flush_factor * n.max(1) {
            self.ranks.flush();
            self.stats.flushes += 1;
        }
        Ok(())
    }

    fn route(&mut self, ups: &[RangeUpdate]) {
        for &u in ups {
            self.ranks.apply(&self.text, u, &mut self.stats);
        }
    }

    /// Rank changes of the unaffected suffixes caused by the affected
    /// suffixes of `half`: +1 for each smaller one joining, -1 for each
    /// smaller one leaving.
    fn shift_updates(&self, half: Half, sign: i64) -> Vec<RangeUpdate> {
        let text = &self.text;
        let kk = (self.k - self.h) as i64;
        let dh = half.delta_hi as i64;
        let por = por(text, &self.kh, &self.kq, half.c, self.h);
        let mut out = Vec::new();
        for &cl in &por.clusters {
            let prog = cluster_lce_progression(text, half.c, half.e, cl);
            let (a, p) = (cl.a as i64, cl.p as i64);
            let (exl, exr, excl, excr) = (prog.ex_l as i64, prog.ex_r as i64, prog.exc_l as i64, prog.exc_r as i64);
            let i_seq = PNormalSeq::max(PNormalSeq::max(arith(a - exl, p), fixed(a - excl)), arith(a - dh, p));
            let j_seq = PNormalSeq::min(PNormalSeq::min(arith(a, p), arith(a - kk + exr, p)), fixed(a - kk + excr));
            let aligned = prog.aligned();
            for (t0, t1, o) in lex_segments(text, &prog, half.c) {
                if o != Ordering::Greater {
                    continue;
                }
                let (ranges, singles) = pieces(t0, t1, &aligned);
                for (u0, u1) in ranges {
                    emit(&i_seq, &j_seq, u0, u1, sign, &mut out);
                }
                for t in singles {
                    let st = cl.at(t) as i64;
                    let (l, r) = (prog.l(t) as i64, prog.r(t) as i64);
                    interval(st - l.min(dh), st - 0.max(kk - r), sign, &mut out);
                }
            }
        }
        out
    }

    /// Order swaps between unaffected close suffixes whose common prefix
    /// reaches `x`, found through the occurrences of `S[x-k..x-1]`.
    fn overtake_updates(&self, x: usize, old: OldView<'_>) -> Vec<RangeUpdate> {
        let text = &self.text;
        let k = self.k;
        let s0 = x - k;
        let e0 = x - 1;
        let por = por(text, &self.kw, &self.kh, s0, k);
        let mut out = Vec::new();
        for &cl in &por.clusters {
            // members whose window avoids x, as runs of consecutive t
            let size = cl.size();
            let mut subs = Vec::new();
            let below = (0..size).take_while(|&t| cl.at(t) < s0).count();
            if below > 0 {
                subs.push((0, below - 1));
            }
            let above = (0..size).position(|t| cl.at(t) > x);
            if let Some(t) = above {
                subs.push((t, size - 1));
            }
            for (t0, t1) in subs {
                let sub = crate::occindex::Cluster { a: cl.at(t0), b: cl.at(t1), p: cl.p };
                let ps = cluster_lce_progression(text, s0, e0, sub);
                let pt = cluster_lce_progression(&old, s0, e0, sub);
                let seg_s = lex_segments(text, &ps, s0);
                let seg_t = lex_segments(&old, &pt, s0);
                for &(a0, a1, os) in &seg_s {
                    for &(b0, b1, ot) in &seg_t {
                        let (u0, u1) = (a0.max(b0), a1.min(b1));
                        if u0 > u1 {
                            continue;
                        }
                        // +1: s_t - δ now has s0 - δ above it instead of below
                        let sign = match (ot, os) {
                            (Ordering::Greater, Ordering::Less) => -1,
                            (Ordering::Less, Ordering::Greater) => 1,
                            _ => continue,
                        };
                        self.overtake_range(&sub, s0, &ps, &pt, u0, u1, sign, &mut out);
                    }
                }
            }
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn overtake_range(
        &self,
        sub: &crate::occindex::Cluster,
        s0: usize,
        ps: &Progression,
        pt: &Progression,
        t0: usize,
        t1: usize,
        sign: i64,
        out: &mut Vec<RangeUpdate>,
    ) {
        let (a, p, s0) = (sub.a as i64, sub.p as i64, s0 as i64);
        let ex = ps.ex_l.min(pt.ex_l) as i64;
        let exc = ps.exc_l.min(pt.exc_l) as i64;
        let mut aligned: Vec<usize> = ps.aligned_l().into_iter().chain(pt.aligned_l()).collect();
        aligned.sort_unstable();
        aligned.dedup();
        let (ranges, singles) = pieces(t0, t1, &aligned);
        for (u0, u1) in ranges {
            // m_t = min(ex, exc + t p)
            let lo_member = PNormalSeq::max(arith(a - ex, p), fixed(a - exc));
            emit(&lo_member, &arith(a, p), u0, u1, sign, out);
            let lo_ref = PNormalSeq::max(fixed(s0 - ex), arith(s0 - exc, -p));
            emit(&lo_ref, &fixed(s0), u0, u1, -sign, out);
        }
        for t in singles {
            let m = ps.l(t).min(pt.l(t)) as i64;
            let st = sub.at(t) as i64;
            interval(st - m, st, sign, out);
            interval(s0 - m, s0, -sign, out);
        }
    }

    /// Recomputes the ranks of the suffixes owned by `half`.
    fn evaluate(&mut self, half: Half) {
        let text = &self.text;
        let kk = (self.k - self.h) as i64;
        let dh = half.delta_hi as i64;
        let por = por(text, &self.kh, &self.kq, half.c, self.h);
        let mut re = StairsCounter::new(half.delta_hi + 1);
        let mut ups = Vec::new();
        for &cl in &por.clusters {
            let prog = cluster_lce_progression(text, half.c, half.e, cl);
            let p = cl.p as i64;
            let (exl, exr, excl, excr) = (prog.ex_l as i64, prog.ex_r as i64, prog.exc_l as i64, prog.exc_r as i64);
            let i_seq = PNormalSeq::max(PNormalSeq::max(fixed(0), fixed(kk - exr)), arith(kk - excr, p));
            let j_seq = PNormalSeq::min(PNormalSeq::min(fixed(exl), arith(excl, p)), fixed(dh));
            let aligned = prog.aligned();
            for (t0, t1, o) in lex_segments(text, &prog, half.c) {
                if o != Ordering::Less {
                    continue;
                }
                let (ranges, singles) = pieces(t0, t1, &aligned);
                for (u0, u1) in ranges {
                    emit(&i_seq, &j_seq, u0, u1, 1, &mut ups);
                }
                for t in singles {
                    let (l, r) = (prog.l(t) as i64, prog.r(t) as i64);
                    interval(0.max(kk - r), l.min(dh), 1, &mut ups);
                }
            }
        }
        for u in ups {
            re.apply(u.shifted(1)).expect("scratch updates stay in range");
        }
        for d in 0..=half.delta_hi {
            self.ranks.set(half.c - d, re.read(d + 1));
        }
    }

    /// Registered runs and stored stairs agree with the text: every
    /// registered interval is an extremely periodic run, and every nonzero
    /// stairs value sits inside a registered run of its period.
    pub fn check_invariants(&self) -> Result<(), String> {
        let n = self.len();
        for run in self.ranks.registered() {
            if run.start + run.p - 1 > n {
                return Err(format!("registered {run:?} does not fit the text"));
            }
            let now = run_with_period(&self.text, run.start, run.p);
            if now != run || !run.is_extremely_periodic() {
                return Err(format!("registered {run:?} is not an extremely periodic run (now {now:?})"));
            }
        }
        for (&p, st) in &self.ranks.per_p {
            for y in 1..=n {
                if st.read(y) != 0 && !self.ranks.runs_at(y).contains(&p) {
                    return Err(format!("stairs value at {y} for period {p} outside every registered run"));
                }
            }
        }
        if self.stats.stairs_outside_run != 0 {
            return Err(format!("{} stairs updates fell outside their run", self.stats.stairs_outside_run));
        }
        Ok(())
    }

    /// Number of registered runs.
    pub fn registry_len(&self) -> usize {
        self.ranks.act_keys.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check(idx: &DynamicIsa, text: &[u8]) {
        let want = oracle::naive_isa(text);
        let close = oracle::naive_close_ranks(text, idx.k());
        for i in 1..=text.len() {
            assert_eq!(idx.close_rank(i), close[i - 1], "close rank of {i} in {:?}", String::from_utf8_lossy(text));
            assert_eq!(idx.isa(i), want[i - 1], "isa({i})");
        }
        idx.check_invariants().unwrap();
    }

    #[test]
    fn static_examples() {
        let idx = DynamicIsa::new(b"banana").unwrap();
        assert_eq!((1..=6).map(|i| idx.isa(i)).collect::<Vec<_>>(), [4, 3, 6, 2, 5, 1]);
        let idx = DynamicIsa::new(b"aaaa").unwrap();
        assert_eq!((1..=4).map(|i| idx.isa(i)).collect::<Vec<_>>(), [4, 3, 2, 1]);
        let policy = EpochPolicy { isa_k: Some(2), ..EpochPolicy::default() };
        let idx = DynamicIsa::with_policy(b"aaaa", policy).unwrap();
        assert_eq!((1..=4).map(|i| idx.close_rank(i)).collect::<Vec<_>>(), [2, 1, 0, 0]);
        let idx = DynamicIsa::new(b"abcdefg").unwrap();
        assert!((1..=7).all(|i| idx.close_rank(i) == 0));
    }

    #[test]
    fn rejects_other_edits() {
        let mut idx = DynamicIsa::new(b"abc").unwrap();
        assert_eq!(idx.apply(EditOp::Insert { pos: 1, sym: b'a' }), Err(IsaError::Unsupported));
        assert_eq!(idx.apply(EditOp::Delete { pos: 1 }), Err(IsaError::Unsupported));
        assert!(matches!(idx.apply(EditOp::Substitute { pos: 2, sym: b'b' }), Err(IsaError::Text(_))));
        assert!(matches!(idx.apply(EditOp::Substitute { pos: 9, sym: b'b' }), Err(IsaError::Text(_))));
    }

    #[test]
    fn banana_substitution() {
        let mut idx = DynamicIsa::new(b"banana").unwrap();
        idx.apply(EditOp::Substitute { pos: 1, sym: b'c' }).unwrap();
        check(&idx, b"canana");
    }

    #[test]
    fn becomes_unary() {
        let mut text = b"aaaaaaabaaaaaaaaaaaaaaaaa".to_vec();
        let mut idx = DynamicIsa::new(&text).unwrap();
        text[7] = b'a';
        idx.apply(EditOp::Substitute { pos: 8, sym: b'a' }).unwrap();
        check(&idx, &text);
        let n = text.len();
        let k = idx.k();
        for i in 1..=n - k + 1 {
            assert_eq!(idx.close_rank(i), n - k + 1 - i);
        }
    }

    #[test]
    fn aperiodic_text_issues_no_stairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut text: Vec<u8> = (0..400).map(|_| rng.gen_range(b'a'..=b'z')).collect();
        let mut idx = DynamicIsa::new(&text).unwrap();
        for _ in 0..50 {
            let x = rng.gen_range(1..=text.len());
            let c = loop {
                let c = rng.gen_range(b'a'..=b'z');
                if c != text[x - 1] {
                    break c;
                }
            };
            text[x - 1] = c;
            idx.apply(EditOp::Substitute { pos: x, sym: c }).unwrap();
        }
        check(&idx, &text);
        let st = idx.stats();
        assert_eq!(st.stairs_stored + st.stairs_expanded, 0);
    }

    fn random_run(seed: u64, n: usize, sigma: u8, subs: usize, k: Option<usize>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut text: Vec<u8> = (0..n).map(|_| b'a' + rng.gen_range(0..sigma)).collect();
        let policy = EpochPolicy { isa_k: k, ..EpochPolicy::default() };
        let mut idx = DynamicIsa::with_policy(&text, policy).unwrap();
        check(&idx, &text);
        for _ in 0..subs {
            let x = rng.gen_range(1..=n);
            let c = loop {
                let c = b'a' + rng.gen_range(0..sigma);
                if c != text[x - 1] {
                    break c;
                }
            };
            text[x - 1] = c;
            idx.apply(EditOp::Substitute { pos: x, sym: c }).unwrap();
            check(&idx, &text);
        }
    }

    #[test]
    fn random_binary() {
        for seed in 0..20 {
            random_run(seed, 60, 2, 60, None);
        }
    }

    #[test]
    fn random_small_k() {
        for seed in 0..20 {
            for k in [2, 4, 6] {
                random_run(100 + seed, 40, 2, 40, Some(k));
            }
        }
    }

    #[test]
    fn periodic_texts() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut stored = 0;
        for round in 0..40 {
            let unit: Vec<u8> = (0..rng.gen_range(1..4)).map(|_| b'a' + rng.gen_range(0..2)).collect();
            let n = 80;
            let mut text: Vec<u8> = unit.iter().cycle().take(n).copied().collect();
            let policy = EpochPolicy { isa_k: Some([4, 6, 8, 10][round % 4]), sa_k: None, flush_factor: 1 + round % 2 };
            let mut idx = DynamicIsa::with_policy(&text, policy).unwrap();
            check(&idx, &text);
            for _ in 0..60 {
                let x = rng.gen_range(1..=n);
                // mostly restore the period, sometimes break it
                let want = if rng.gen_bool(0.6) { unit[(x - 1) % unit.len()] } else { b'a' + rng.gen_range(0..2) };
                let c = if want == text[x - 1] { if want == b'a' { b'b' } else { b'a' } } else { want };
                text[x - 1] = c;
                idx.apply(EditOp::Substitute { pos: x, sym: c }).unwrap();
                check(&idx, &text);
            }
            stored += idx.stats().stairs_stored;
        }
        assert!(stored > 0);
    }

    #[test]
    fn larger_texts() {
        for (seed, sigma) in [(1, 2), (2, 4), (3, 26)] {
            random_run(seed, 300, sigma, 100, None);
        }
    }
}
