//! Counter arrays with batched range updates.
//!
//! [`IntervalStore`] adds a constant to a range; [`FixedWidthStairs`] applies
//! stairs updates of one fixed step width p, where the t-th step of width p
//! (counted from the right for decreasing stairs, from the left for
//! increasing ones) changes by t. [`reduce_interval_sequence`] turns a run of
//! interval adds whose endpoints follow p-normal sequences into a constant
//! number of stairs and interval updates.

use std::collections::HashMap;

use thiserror::Error;

use crate::rangetree::{Range, RangeTree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StairsError {
    #[error("interval [{i}, {j}] is empty or outside 1..={cap}")]
    BadInterval { i: i64, j: i64, cap: usize },
    #[error("stairs width {got} does not match store width {want}")]
    WidthMismatch { want: usize, got: i64 },
    #[error("sequences use different differences {0} and {1}")]
    MixedDifferences(i64, i64),
}

/// Range add, point read over `1..=n`.
#[derive(Clone, Debug)]
pub struct IntervalStore {
    fen: Vec<i64>,
}

impl IntervalStore {
    pub fn new(n: usize) -> Self {
        IntervalStore { fen: vec![0; n + 2] }
    }

    pub fn len(&self) -> usize {
        self.fen.len() - 2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn bump(&mut self, mut i: usize, x: i64) {
        while i < self.fen.len() {
            self.fen[i] += x;
            i += i & i.wrapping_neg();
        }
    }

    pub fn add(&mut self, i: usize, j: usize, x: i64) -> Result<(), StairsError> {
        if i < 1 || i > j || j > self.len() {
            return Err(StairsError::BadInterval { i: i as i64, j: j as i64, cap: self.len() });
        }
        self.bump(i, x);
        self.bump(j + 1, -x);
        Ok(())
    }

    pub fn read(&self, mut i: usize) -> i64 {
        let mut s = 0;
        while i > 0 {
            s += self.fen[i];
            i &= i - 1;
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    Decreasing,
    Increasing,
}

/// A stairs update over `[i, j]` with step width `p`; `sign` is +1 or -1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StairsUpdate {
    pub i: i64,
    pub j: i64,
    pub p: i64,
    pub orientation: Orientation,
    pub sign: i64,
}

impl StairsUpdate {
    pub fn decreasing(i: i64, j: i64, p: i64) -> Self {
        StairsUpdate { i, j, p, orientation: Orientation::Decreasing, sign: 1 }
    }

    pub fn increasing(i: i64, j: i64, p: i64) -> Self {
        StairsUpdate { i, j, p, orientation: Orientation::Increasing, sign: 1 }
    }

    pub fn negated(self) -> Self {
        StairsUpdate { sign: -self.sign, ..self }
    }

    pub fn shifted(self, by: i64) -> Self {
        StairsUpdate { i: self.i + by, j: self.j + by, ..self }
    }

    /// Change this update makes at `x`.
    pub fn value_at(&self, x: i64) -> i64 {
        if x < self.i || x > self.j {
            return 0;
        }
        let t = match self.orientation {
            Orientation::Decreasing => (self.j - x) / self.p + 1,
            Orientation::Increasing => (x - self.i) / self.p + 1,
        };
        self.sign * t
    }

    /// The same change written as one interval add per step.
    pub fn steps(&self) -> Vec<RangeUpdate> {
        let mut out = Vec::new();
        let mut t = 1;
        loop {
            let (a, b) = match self.orientation {
                Orientation::Decreasing => ((self.j - t * self.p + 1).max(self.i), self.j - (t - 1) * self.p),
                Orientation::Increasing => (self.i + (t - 1) * self.p, (self.i + t * self.p - 1).min(self.j)),
            };
            if a > b || a > self.j || b < self.i {
                break;
            }
            out.push(RangeUpdate::Interval { i: a, j: b, x: self.sign * t });
            t += 1;
        }
        out
    }
}

/// Either kind of range update.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RangeUpdate {
    Stairs(StairsUpdate),
    Interval { i: i64, j: i64, x: i64 },
}

impl RangeUpdate {
    pub fn value_at(&self, x: i64) -> i64 {
        match *self {
            RangeUpdate::Stairs(s) => s.value_at(x),
            RangeUpdate::Interval { i, j, x: v } => {
                if i <= x && x <= j {
                    v
                } else {
                    0
                }
            }
        }
    }

    pub fn shifted(self, by: i64) -> Self {
        match self {
            RangeUpdate::Stairs(s) => RangeUpdate::Stairs(s.shifted(by)),
            RangeUpdate::Interval { i, j, x } => RangeUpdate::Interval { i: i + by, j: j + by, x },
        }
    }

    pub fn negated(self) -> Self {
        match self {
            RangeUpdate::Stairs(s) => RangeUpdate::Stairs(s.negated()),
            RangeUpdate::Interval { i, j, x } => RangeUpdate::Interval { i, j, x: -x },
        }
    }

    pub fn bounds(&self) -> (i64, i64) {
        match *self {
            RangeUpdate::Stairs(s) => (s.i, s.j),
            RangeUpdate::Interval { i, j, .. } => (i, j),
        }
    }
}

/// Decreasing stairs of one sign: points (i, j) valued ⌈j/p⌉ plus points
/// (i, j, ρ(j)) with ρ the remainder mapped into 1..=p.
struct SubStore {
    o: RangeTree,
    r3: RangeTree,
}

impl SubStore {
    fn new() -> Self {
        SubStore { o: RangeTree::new(2).unwrap(), r3: RangeTree::new(3).unwrap() }
    }

    fn add(&mut self, i: i64, j: i64, p: i64) {
        let rho = j - ((j + p - 1) / p - 1) * p;
        self.o.insert(&[i, j], (j + p - 1) / p).unwrap();
        self.r3.insert(&[i, j, rho], 0).unwrap();
    }

    fn read(&self, x: i64, p: i64) -> i64 {
        if self.o.is_empty() {
            return 0;
        }
        let q = (x + p - 1) / p - 1;
        let rho = x - q * p;
        let cover = Range::all(2).at_most(0, x).at_least(1, x);
        let (c, s) = self.o.count_sum(&cover).unwrap();
        if c == 0 {
            return 0;
        }
        let d = if rho > 1 {
            self.r3.count(&Range::all(3).at_most(0, x).at_least(1, x).axis(2, 1, rho - 1)).unwrap() as i64
        } else {
            0
        };
        s - c as i64 * q - d
    }
}

/// Stairs updates of one step width over `1..=capacity`.
pub struct FixedWidthStairs {
    p: i64,
    cap: i64,
    // dec+, dec-, inc+, inc- ; increasing ones are stored reflected
    subs: [SubStore; 4],
    zero: HashMap<i64, i64>,
    updates: usize,
}

impl std::fmt::Debug for FixedWidthStairs {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FixedWidthStairs")
            .field("p", &self.p)
            .field("capacity", &self.cap)
            .field("updates", &self.updates)
            .finish()
    }
}

impl FixedWidthStairs {
    pub fn new(p: usize, capacity: usize) -> Self {
        assert!(p >= 1);
        FixedWidthStairs {
            p: p as i64,
            cap: capacity as i64,
            subs: [SubStore::new(), SubStore::new(), SubStore::new(), SubStore::new()],
            zero: HashMap::new(),
            updates: 0,
        }
    }

    pub fn width(&self) -> usize {
        self.p as usize
    }

    pub fn capacity(&self) -> usize {
        self.cap as usize
    }

    /// Number of stored updates since creation.
    pub fn updates(&self) -> usize {
        self.updates
    }

    pub fn apply(&mut self, u: StairsUpdate) -> Result<(), StairsError> {
        if u.p != self.p {
            return Err(StairsError::WidthMismatch { want: self.p as usize, got: u.p });
        }
        if u.i < 1 || u.i > u.j || u.j > self.cap {
            return Err(StairsError::BadInterval { i: u.i, j: u.j, cap: self.cap as usize });
        }
        let neg = usize::from(u.sign < 0);
        match u.orientation {
            Orientation::Decreasing => self.subs[neg].add(u.i, u.j, self.p),
            Orientation::Increasing => {
                let (i, j) = (self.cap + 1 - u.j, self.cap + 1 - u.i);
                self.subs[2 + neg].add(i, j, self.p);
            }
        }
        self.updates += 1;
        Ok(())
    }

    pub fn read(&self, x: usize) -> i64 {
        let x = x as i64;
        if x < 1 || x > self.cap {
            return 0;
        }
        let xr = self.cap + 1 - x;
        let raw = self.subs[0].read(x, self.p) - self.subs[1].read(x, self.p) + self.subs[2].read(xr, self.p)
            - self.subs[3].read(xr, self.p);
        raw - self.zero.get(&x).copied().unwrap_or(0)
    }

    /// Makes `read(x)` zero and returns what it was.
    pub fn zero_index(&mut self, x: usize) -> i64 {
        let v = self.read(x);
        if v != 0 {
            *self.zero.entry(x as i64).or_insert(0) += v;
        }
        v
    }
}

/// An interval store plus one lazily created stairs store, flushed into the
/// interval store once the stairs store holds more than `4n` updates.
#[derive(Debug)]
pub struct StairsCounter {
    base: IntervalStore,
    stairs: Option<FixedWidthStairs>,
    flush_factor: usize,
}

impl StairsCounter {
    pub fn new(n: usize) -> Self {
        StairsCounter { base: IntervalStore::new(n), stairs: None, flush_factor: 4 }
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn apply(&mut self, u: RangeUpdate) -> Result<(), StairsError> {
        match u {
            RangeUpdate::Interval { i, j, x } => {
                if i < 1 || i > j {
                    return Err(StairsError::BadInterval { i, j, cap: self.len() });
                }
                self.base.add(i as usize, j as usize, x)
            }
            RangeUpdate::Stairs(s) => {
                let n = self.len();
                let st = self.stairs.get_or_insert_with(|| FixedWidthStairs::new(s.p.max(1) as usize, n));
                st.apply(s)?;
                if st.updates() > self.flush_factor * n.max(1) {
                    self.flush();
                }
                Ok(())
            }
        }
    }

    pub fn read(&self, x: usize) -> i64 {
        self.base.read(x) + self.stairs.as_ref().map_or(0, |s| s.read(x))
    }

    fn flush(&mut self) {
        if let Some(st) = self.stairs.take() {
            for x in 1..=self.len() {
                let v = st.read(x);
                if v != 0 {
                    self.base.add(x, x, v).unwrap();
                }
            }
        }
    }
}

/// A p-normal sequence: fixed values and arithmetic progressions combined
/// with min and max.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PNormalSeq {
    Fixed(i64),
    Arith { b0: i64, p: i64 },
    Min(Box<PNormalSeq>, Box<PNormalSeq>),
    Max(Box<PNormalSeq>, Box<PNormalSeq>),
}

impl PNormalSeq {
    pub fn arith(b0: i64, p: i64) -> Self {
        PNormalSeq::Arith { b0, p }
    }

    pub fn min(a: PNormalSeq, b: PNormalSeq) -> Self {
        PNormalSeq::Min(Box::new(a), Box::new(b))
    }

    pub fn max(a: PNormalSeq, b: PNormalSeq) -> Self {
        PNormalSeq::Max(Box::new(a), Box::new(b))
    }

    pub fn at(&self, t: i64) -> i64 {
        match self {
            PNormalSeq::Fixed(c) => *c,
            PNormalSeq::Arith { b0, p } => b0 + p * t,
            PNormalSeq::Min(a, b) => a.at(t).min(b.at(t)),
            PNormalSeq::Max(a, b) => a.at(t).max(b.at(t)),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            PNormalSeq::Fixed(_) | PNormalSeq::Arith { .. } => 1,
            PNormalSeq::Min(a, b) | PNormalSeq::Max(a, b) => a.degree() + b.degree(),
        }
    }

    /// Re-indexes so that term `t` becomes term `t - by`.
    pub fn advanced(&self, by: i64) -> Self {
        self.map_leaves(&|s| match s {
            PNormalSeq::Arith { b0, p } => PNormalSeq::Arith { b0: b0 + p * by, p },
            other => other,
        })
    }

    fn map_leaves(&self, f: &dyn Fn(PNormalSeq) -> PNormalSeq) -> Self {
        match self {
            PNormalSeq::Min(a, b) => PNormalSeq::min(a.map_leaves(f), b.map_leaves(f)),
            PNormalSeq::Max(a, b) => PNormalSeq::max(a.map_leaves(f), b.map_leaves(f)),
            leaf => f(leaf.clone()),
        }
    }

    fn differences(&self, out: &mut Vec<i64>) {
        match self {
            PNormalSeq::Fixed(_) => {}
            PNormalSeq::Arith { p, .. } => {
                if *p != 0 {
                    out.push(*p)
                }
            }
            PNormalSeq::Min(a, b) | PNormalSeq::Max(a, b) => {
                a.differences(out);
                b.differences(out);
            }
        }
    }

    fn is_leaf(&self) -> bool {
        matches!(self, PNormalSeq::Fixed(_) | PNormalSeq::Arith { .. })
    }

    /// (value at t = 0, slope) of a leaf.
    fn line(&self) -> (i64, i64) {
        match self {
            PNormalSeq::Fixed(c) => (*c, 0),
            PNormalSeq::Arith { b0, p } => (*b0, *p),
            _ => unreachable!("not a leaf"),
        }
    }
}

enum Elim {
    Whole(PNormalSeq),
    /// `before` holds for t <= at, `after` for t > at.
    Split { at: i64, before: PNormalSeq, after: PNormalSeq },
}

impl Elim {
    fn map(self, f: impl Fn(PNormalSeq) -> PNormalSeq) -> Elim {
        match self {
            Elim::Whole(s) => Elim::Whole(f(s)),
            Elim::Split { at, before, after } => Elim::Split { at, before: f(before), after: f(after) },
        }
    }
}

fn combine(is_max: bool, a: &PNormalSeq, b: &PNormalSeq) -> Elim {
    let ((a0, pa), (b0, pb)) = (a.line(), b.line());
    let pick = |x: i64, y: i64| if is_max { x.max(y) } else { x.min(y) };
    match (pa, pb) {
        (0, 0) => Elim::Whole(PNormalSeq::Fixed(pick(a0, b0))),
        (p, q) if p != 0 && q != 0 => Elim::Whole(PNormalSeq::arith(pick(a0, b0), p)),
        _ => {
            let (fixed, (c0, p)) = if pa == 0 { (a0, (b0, pb)) } else { (b0, (a0, pa)) };
            // slopes are positive here; the progression is <= fixed up to `at`
            let at = (fixed - c0).div_euclid(p);
            let (f, g) = (PNormalSeq::Fixed(fixed), PNormalSeq::arith(c0, p));
            if is_max {
                Elim::Split { at, before: f, after: g }
            } else {
                Elim::Split { at, before: g, after: f }
            }
        }
    }
}

fn elim(s: &PNormalSeq) -> Option<Elim> {
    let (is_max, a, b) = match s {
        PNormalSeq::Min(a, b) => (false, a, b),
        PNormalSeq::Max(a, b) => (true, a, b),
        _ => return None,
    };
    let wrap = |x: PNormalSeq, y: PNormalSeq| {
        if is_max {
            PNormalSeq::max(x, y)
        } else {
            PNormalSeq::min(x, y)
        }
    };
    if a.is_leaf() && b.is_leaf() {
        return Some(combine(is_max, a, b));
    }
    if let Some(e) = elim(a) {
        return Some(e.map(|x| wrap(x, (**b).clone())));
    }
    elim(b).map(|e| e.map(|y| wrap((**a).clone(), y)))
}

fn reduce_rec(i: &PNormalSeq, j: &PNormalSeq, t0: i64, t1: i64, p: i64, out: &mut Vec<RangeUpdate>) {
    if t0 > t1 {
        return;
    }
    for (which, s) in [(0, i), (1, j)] {
        if let Some(e) = elim(s) {
            match e {
                Elim::Whole(x) => {
                    if which == 0 {
                        reduce_rec(&x, j, t0, t1, p, out)
                    } else {
                        reduce_rec(i, &x, t0, t1, p, out)
                    }
                }
                Elim::Split { at, before, after } => {
                    let (lo, hi) = ((t0, t1.min(at)), (t0.max(at + 1), t1));
                    if which == 0 {
                        reduce_rec(&before, j, lo.0, lo.1, p, out);
                        reduce_rec(&after, j, hi.0, hi.1, p, out);
                    } else {
                        reduce_rec(i, &before, lo.0, lo.1, p, out);
                        reduce_rec(i, &after, hi.0, hi.1, p, out);
                    }
                }
            }
            return;
        }
    }
    base_case(i.line(), j.line(), t0, t1, p, out);
}

fn base_case((i0, pi): (i64, i64), (j0, pj): (i64, i64), mut t0: i64, mut t1: i64, p: i64, out: &mut Vec<RangeUpdate>) {
    // keep only the t with a non-empty interval
    let gap = j0 - i0;
    let slope = pj - pi;
    if slope == 0 {
        if gap < 0 {
            return;
        }
    } else if slope > 0 {
        t0 = t0.max((-gap + slope - 1).div_euclid(slope));
    } else {
        t1 = t1.min(gap.div_euclid(-slope));
    }
    if t0 > t1 {
        return;
    }
    let cnt = t1 - t0 + 1;
    let (ia, ib) = (i0 + pi * t0, i0 + pi * t1);
    let (ja, jb) = (j0 + pj * t0, j0 + pj * t1);
    let mut stairs = |u: StairsUpdate| {
        if u.i <= u.j {
            out.push(RangeUpdate::Stairs(u));
        }
    };
    match (pi != 0, pj != 0) {
        (false, false) => out.push(RangeUpdate::Interval { i: ia, j: ja, x: cnt }),
        (false, true) => {
            stairs(StairsUpdate::decreasing(ja + 1, jb, p));
            out.push(RangeUpdate::Interval { i: ia, j: ja, x: cnt });
        }
        (true, false) => {
            stairs(StairsUpdate::increasing(ia, ib - 1, p));
            out.push(RangeUpdate::Interval { i: ib, j: ja, x: cnt });
        }
        (true, true) => {
            stairs(StairsUpdate::increasing(ia, ib - 1, p));
            stairs(StairsUpdate::increasing(ja + 1, jb, p).negated());
            out.push(RangeUpdate::Interval { i: ib, j: jb, x: cnt });
        }
    }
}

/// Rewrites the interval adds `(i_seq(t), j_seq(t), +1)` for `t` in
/// `0..count` as stairs and interval updates with the same total effect.
/// Empty intervals (`i_t > j_t`) contribute nothing.
pub fn reduce_interval_sequence(
    i_seq: &PNormalSeq,
    j_seq: &PNormalSeq,
    count: usize,
) -> Result<Vec<RangeUpdate>, StairsError> {
    let mut diffs = Vec::new();
    i_seq.differences(&mut diffs);
    j_seq.differences(&mut diffs);
    if let Some(w) = diffs.windows(2).find(|w| w[0] != w[1]) {
        return Err(StairsError::MixedDifferences(w[0], w[1]));
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    let last = count as i64 - 1;
    let p = diffs.first().copied().unwrap_or(1);
    let (i_seq, j_seq, p) = if p < 0 {
        // read the sequences backwards so every slope is positive
        let flip = |s: &PNormalSeq| {
            s.map_leaves(&|l| match l {
                PNormalSeq::Arith { b0, p } => PNormalSeq::arith(b0 + p * last, -p),
                other => other,
            })
        };
        (flip(i_seq), flip(j_seq), -p)
    } else {
        (i_seq.clone(), j_seq.clone(), p)
    };
    let mut out = Vec::new();
    reduce_rec(&i_seq, &j_seq, 0, last, p, &mut out);
    out.sort_by_key(|u| match *u {
        RangeUpdate::Stairs(s) => (0, s.i, s.j, s.sign),
        RangeUpdate::Interval { i, j, x } => (1, i, j, x),
    });
    Ok(out)
}
