//! Orthogonal range counting in up to four dimensions.
//!
//! Static range trees are kept in a logarithmic-method stack: an insert
//! becomes a one-point tree that is merged with the occupied prefix of the
//! stack. A removal inserts a tombstone with negated weight and value, so
//! count and sum need no special cases. Once tombstones outnumber live points
//! everything is rebuilt from the live set.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::counters;

pub const NEG_INF: i64 = i64::MIN;
pub const POS_INF: i64 = i64::MAX;

const MAX_DIM: usize = 4;
const SMALL: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RangeError {
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("handle {0:?} does not refer to a live point")]
    StaleHandle(Handle),
    #[error("unsupported dimension {0}")]
    BadDimension(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Handle(u64);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub coords: Vec<i64>,
    pub value: i64,
    pub handle: Handle,
}

/// A closed box; unset axes span everything.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Range {
    d: usize,
    lo: [i64; MAX_DIM],
    hi: [i64; MAX_DIM],
}

impl Range {
    pub fn all(d: usize) -> Self {
        Range { d, lo: [NEG_INF; MAX_DIM], hi: [POS_INF; MAX_DIM] }
    }

    pub fn axis(mut self, k: usize, lo: i64, hi: i64) -> Self {
        self.lo[k] = lo;
        self.hi[k] = hi;
        self
    }

    pub fn at_least(self, k: usize, lo: i64) -> Self {
        let hi = self.hi[k];
        self.axis(k, lo, hi)
    }

    pub fn at_most(self, k: usize, hi: i64) -> Self {
        let lo = self.lo[k];
        self.axis(k, lo, hi)
    }

    pub fn exactly(self, k: usize, v: i64) -> Self {
        self.axis(k, v, v)
    }

    pub fn dims(&self) -> usize {
        self.d
    }

    fn is_empty(&self) -> bool {
        (0..self.d).any(|k| self.lo[k] > self.hi[k])
    }
}

#[derive(Clone, Copy, Debug)]
struct Entry {
    c: [i64; MAX_DIM],
    v: i64,
    w: i64,
    id: u64,
}

#[inline]
fn inside(e: &Entry, r: &Range, from: usize) -> bool {
    (from..r.d).all(|k| e.c[k] >= r.lo[k] && e.c[k] <= r.hi[k])
}

#[derive(Clone, Copy, Default)]
struct Acc {
    w: i64,
    v: i64,
}

enum Level {
    Scan(Vec<Entry>),
    Last { keys: Vec<i64>, pw: Vec<i64>, pv: Vec<i64>, ents: Vec<Entry> },
    Inner { keys: Vec<i64>, ents: Vec<Entry>, root: Box<TNode> },
}

struct TNode {
    lo: usize,
    hi: usize,
    sub: Level,
    kids: Option<Box<(TNode, TNode)>>,
}

fn build(mut ents: Vec<Entry>, dim: usize, d: usize) -> Level {
    if ents.len() <= SMALL {
        return Level::Scan(ents);
    }
    ents.sort_unstable_by_key(|e| e.c[dim]);
    let keys: Vec<i64> = ents.iter().map(|e| e.c[dim]).collect();
    if dim == d - 1 {
        let mut pw = Vec::with_capacity(ents.len() + 1);
        let mut pv = Vec::with_capacity(ents.len() + 1);
        pw.push(0);
        pv.push(0);
        for e in &ents {
            pw.push(pw.last().unwrap() + e.w);
            pv.push(pv.last().unwrap() + e.v);
        }
        return Level::Last { keys, pw, pv, ents };
    }
    let root = Box::new(build_node(&ents, 0, ents.len(), dim, d));
    Level::Inner { keys, ents, root }
}

fn build_node(ents: &[Entry], lo: usize, hi: usize, dim: usize, d: usize) -> TNode {
    let sub = build(ents[lo..hi].to_vec(), dim + 1, d);
    let kids = if hi - lo > SMALL {
        let mid = (lo + hi) / 2;
        Some(Box::new((build_node(ents, lo, mid, dim, d), build_node(ents, mid, hi, dim, d))))
    } else {
        None
    };
    TNode { lo, hi, sub, kids }
}

fn key_range(keys: &[i64], lo: i64, hi: i64) -> (usize, usize) {
    (keys.partition_point(|&k| k < lo), keys.partition_point(|&k| k <= hi))
}

fn query(level: &Level, dim: usize, r: &Range, acc: &mut Acc, visits: &mut u64) {
    *visits += 1;
    match level {
        Level::Scan(ents) => {
            for e in ents {
                if inside(e, r, dim) {
                    acc.w += e.w;
                    acc.v += e.v;
                }
            }
        }
        Level::Last { keys, pw, pv, .. } => {
            let (a, b) = key_range(keys, r.lo[dim], r.hi[dim]);
            if a < b {
                acc.w += pw[b] - pw[a];
                acc.v += pv[b] - pv[a];
            }
        }
        Level::Inner { keys, ents, root } => {
            let (a, b) = key_range(keys, r.lo[dim], r.hi[dim]);
            if a < b {
                query_node(root, ents, a, b, dim, r, acc, visits);
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn query_node(
    node: &TNode,
    ents: &[Entry],
    a: usize,
    b: usize,
    dim: usize,
    r: &Range,
    acc: &mut Acc,
    visits: &mut u64,
) {
    if node.hi <= a || node.lo >= b {
        return;
    }
    if a <= node.lo && node.hi <= b {
        query(&node.sub, dim + 1, r, acc, visits);
        return;
    }
    *visits += 1;
    match &node.kids {
        Some(kids) => {
            query_node(&kids.0, ents, a, b, dim, r, acc, visits);
            query_node(&kids.1, ents, a, b, dim, r, acc, visits);
        }
        None => {
            for e in &ents[node.lo.max(a)..node.hi.min(b)] {
                if inside(e, r, dim + 1) {
                    acc.w += e.w;
                    acc.v += e.v;
                }
            }
        }
    }
}

fn collect(level: &Level, dim: usize, r: &Range, out: &mut Vec<Entry>, visits: &mut u64) {
    *visits += 1;
    match level {
        Level::Scan(ents) => out.extend(ents.iter().filter(|e| inside(e, r, dim))),
        Level::Last { keys, ents, .. } => {
            let (a, b) = key_range(keys, r.lo[dim], r.hi[dim]);
            if a < b {
                out.extend_from_slice(&ents[a..b]);
            }
        }
        Level::Inner { keys, ents, root } => {
            let (a, b) = key_range(keys, r.lo[dim], r.hi[dim]);
            if a < b {
                collect_node(root, ents, a, b, dim, r, out, visits);
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn collect_node(
    node: &TNode,
    ents: &[Entry],
    a: usize,
    b: usize,
    dim: usize,
    r: &Range,
    out: &mut Vec<Entry>,
    visits: &mut u64,
) {
    if node.hi <= a || node.lo >= b {
        return;
    }
    if a <= node.lo && node.hi <= b {
        collect(&node.sub, dim + 1, r, out, visits);
        return;
    }
    *visits += 1;
    match &node.kids {
        Some(kids) => {
            collect_node(&kids.0, ents, a, b, dim, r, out, visits);
            collect_node(&kids.1, ents, a, b, dim, r, out, visits);
        }
        None => out.extend(ents[node.lo.max(a)..node.hi.min(b)].iter().filter(|e| inside(e, r, dim + 1))),
    }
}

struct Bucket {
    level: Level,
    ents: Vec<Entry>,
}

/// Dynamic multiset of weighted points.
pub struct RangeTree {
    d: usize,
    buckets: Vec<Option<Bucket>>,
    live: HashMap<u64, Entry>,
    dead: HashSet<u64>,
    next_id: u64,
}

impl std::fmt::Debug for RangeTree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RangeTree").field("d", &self.d).field("len", &self.live.len()).finish()
    }
}

impl RangeTree {
    pub fn new(d: usize) -> Result<Self, RangeError> {
        if d == 0 || d > MAX_DIM {
            return Err(RangeError::BadDimension(d));
        }
        Ok(RangeTree { d, buckets: Vec::new(), live: HashMap::new(), dead: HashSet::new(), next_id: 0 })
    }

    /// Builds a tree holding all `points` at once.
    pub fn from_points<'a>(
        d: usize,
        points: impl IntoIterator<Item = (&'a [i64], i64)>,
    ) -> Result<(Self, Vec<Handle>), RangeError> {
        let mut t = Self::new(d)?;
        let mut ents = Vec::new();
        let mut handles = Vec::new();
        for (c, v) in points {
            let e = t.entry(c, v)?;
            t.live.insert(e.id, e);
            handles.push(Handle(e.id));
            ents.push(e);
        }
        t.place(ents);
        Ok((t, handles))
    }

    pub fn dims(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.live.len()
    }

    pub fn is_empty(&self) -> bool {
        self.live.is_empty()
    }

    fn entry(&mut self, coords: &[i64], value: i64) -> Result<Entry, RangeError> {
        if coords.len() != self.d {
            return Err(RangeError::DimensionMismatch { expected: self.d, got: coords.len() });
        }
        let mut c = [0; MAX_DIM];
        c[..self.d].copy_from_slice(coords);
        let id = self.next_id;
        self.next_id += 1;
        Ok(Entry { c, v: value, w: 1, id })
    }

    pub fn insert(&mut self, coords: &[i64], value: i64) -> Result<Handle, RangeError> {
        let e = self.entry(coords, value)?;
        self.live.insert(e.id, e);
        self.push(e);
        Ok(Handle(e.id))
    }

    pub fn remove(&mut self, h: Handle) -> Result<(), RangeError> {
        let e = self.live.remove(&h.0).ok_or(RangeError::StaleHandle(h))?;
        self.dead.insert(e.id);
        if self.dead.len() >= self.live.len().max(8) {
            self.rebuild();
        } else {
            self.push(Entry { v: -e.v, w: -1, ..e });
        }
        Ok(())
    }

    pub fn get(&self, h: Handle) -> Option<Point> {
        self.live.get(&h.0).map(|e| self.point(e))
    }

    fn point(&self, e: &Entry) -> Point {
        Point { coords: e.c[..self.d].to_vec(), value: e.v, handle: Handle(e.id) }
    }

    fn push(&mut self, e: Entry) {
        let mut carry = vec![e];
        let mut i = 0;
        loop {
            if i == self.buckets.len() {
                self.buckets.push(None);
            }
            match self.buckets[i].take() {
                None => {
                    let level = build(carry.clone(), 0, self.d);
                    self.buckets[i] = Some(Bucket { level, ents: carry });
                    return;
                }
                Some(b) => {
                    carry.extend(b.ents);
                    i += 1;
                }
            }
        }
    }

    fn place(&mut self, ents: Vec<Entry>) {
        self.buckets.clear();
        if ents.is_empty() {
            return;
        }
        let slot = usize::BITS as usize - ents.len().leading_zeros() as usize;
        self.buckets.resize_with(slot + 1, || None);
        let level = build(ents.clone(), 0, self.d);
        self.buckets[slot] = Some(Bucket { level, ents });
    }

    fn rebuild(&mut self) {
        self.dead.clear();
        let mut ents: Vec<Entry> = self.live.values().copied().collect();
        ents.sort_unstable_by_key(|e| e.id);
        self.place(ents);
    }

    fn check(&self, r: &Range) -> Result<(), RangeError> {
        if r.d != self.d {
            Err(RangeError::DimensionMismatch { expected: self.d, got: r.d })
        } else {
            Ok(())
        }
    }

    fn acc(&self, r: &Range) -> Acc {
        let mut acc = Acc::default();
        if r.is_empty() {
            return acc;
        }
        let mut visits = 0;
        for b in self.buckets.iter().flatten() {
            query(&b.level, 0, r, &mut acc, &mut visits);
        }
        counters::range_visits(visits);
        acc
    }

    pub fn count(&self, r: &Range) -> Result<u64, RangeError> {
        self.check(r)?;
        Ok(self.acc(r).w as u64)
    }

    pub fn sum(&self, r: &Range) -> Result<i64, RangeError> {
        self.check(r)?;
        Ok(self.acc(r).v)
    }

    /// Count and sum in one pass.
    pub fn count_sum(&self, r: &Range) -> Result<(u64, i64), RangeError> {
        self.check(r)?;
        let a = self.acc(r);
        Ok((a.w as u64, a.v))
    }

    pub fn report(&self, r: &Range) -> Result<Vec<Point>, RangeError> {
        self.check(r)?;
        let mut out: Vec<Entry> = Vec::new();
        if r.is_empty() {
            return Ok(Vec::new());
        }
        let mut visits = 0;
        for b in self.buckets.iter().flatten() {
            collect(&b.level, 0, r, &mut out, &mut visits);
        }
        counters::range_visits(visits);
        let mut pts: Vec<Point> = out
            .iter()
            .filter(|e| e.w > 0 && !self.dead.contains(&e.id))
            .map(|e| self.point(e))
            .collect();
        pts.sort_by_key(|p| p.handle);
        Ok(pts)
    }

    /// All live points in insertion order.
    pub fn points(&self) -> Vec<Point> {
        let mut pts: Vec<Point> = self.live.values().map(|e| self.point(e)).collect();
        pts.sort_by_key(|p| p.handle);
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_examples() {
        let mut t = RangeTree::new(2).unwrap();
        assert_eq!(t.count(&Range::all(2)), Ok(0));
        assert_eq!(t.sum(&Range::all(2)), Ok(0));
        assert_eq!(t.report(&Range::all(2)), Ok(vec![]));
        let h = t.insert(&[1, 2], 5).unwrap();
        assert_eq!(t.count(&Range::all(2).exactly(0, 1).exactly(1, 2)), Ok(1));
        t.insert(&[1, 2], 5).unwrap();
        assert_eq!(t.count(&Range::all(2)), Ok(2));
        t.remove(h).unwrap();
        assert_eq!(t.count(&Range::all(2)), Ok(1));
        assert_eq!(t.remove(h), Err(RangeError::StaleHandle(h)));
        assert!(t.insert(&[1], 1).is_err());

        let mut t = RangeTree::new(2).unwrap();
        t.insert(&[1, 1], 2).unwrap();
        t.insert(&[3, 4], 7).unwrap();
        assert_eq!(t.sum(&Range::all(2).axis(0, 0, 5).axis(1, 0, 5)), Ok(9));
    }

    #[test]
    fn remove_from_empty_is_stale() {
        let mut t = RangeTree::new(3).unwrap();
        let h = t.insert(&[0, 0, 0], 1).unwrap();
        t.remove(h).unwrap();
        assert!(t.remove(h).is_err());
        let mut three = RangeTree::new(3).unwrap();
        let hs: Vec<_> = (0..3).map(|i| three.insert(&[i, i, i], 1).unwrap()).collect();
        three.remove(hs[1]).unwrap();
        assert_eq!(three.count(&Range::all(3)), Ok(2));
    }

    fn random_ops(d: usize, ops: usize, seed: u64) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut t = RangeTree::new(d).unwrap();
        let mut flat: Vec<(Handle, Vec<i64>, i64)> = Vec::new();
        for _ in 0..ops {
            let roll = rng.gen_range(0..10);
            if roll < 4 || flat.is_empty() {
                let c: Vec<i64> = (0..d).map(|_| rng.gen_range(0..20)).collect();
                let v = rng.gen_range(-5..10);
                let h = t.insert(&c, v).unwrap();
                flat.push((h, c, v));
            } else if roll < 6 {
                let k = rng.gen_range(0..flat.len());
                let (h, _, _) = flat.swap_remove(k);
                t.remove(h).unwrap();
            } else {
                let mut r = Range::all(d);
                for k in 0..d {
                    if rng.gen_bool(0.8) {
                        let a = rng.gen_range(-2..22);
                        let b = rng.gen_range(a..23);
                        r = r.axis(k, a, b);
                    }
                }
                let hit: Vec<_> = flat
                    .iter()
                    .filter(|(_, c, _)| (0..d).all(|k| c[k] >= r.lo[k] && c[k] <= r.hi[k]))
                    .collect();
                assert_eq!(t.count(&r).unwrap(), hit.len() as u64);
                assert_eq!(t.sum(&r).unwrap(), hit.iter().map(|x| x.2).sum::<i64>());
                let rep = t.report(&r).unwrap();
                let mut want: Vec<Handle> = hit.iter().map(|x| x.0).collect();
                want.sort();
                assert_eq!(rep.iter().map(|p| p.handle).collect::<Vec<_>>(), want);
            }
        }
    }

    #[test]
    fn differential_against_flat_list() {
        for d in 2..=4 {
            random_ops(d, 20_000, d as u64);
        }
    }

    proptest! {
        #[test]
        fn partition_sums_add_up(pts in proptest::collection::vec((0i64..30, 0i64..30, -9i64..9), 0..60), cut in 0i64..30) {
            let coords: Vec<[i64; 2]> = pts.iter().map(|p| [p.0, p.1]).collect();
            let (t, _) = RangeTree::from_points(2, coords.iter().zip(&pts).map(|(c, p)| (&c[..], p.2))).unwrap();
            let whole = t.sum(&Range::all(2)).unwrap();
            let a = t.sum(&Range::all(2).at_most(0, cut)).unwrap();
            let b = t.sum(&Range::all(2).at_least(0, cut + 1)).unwrap();
            prop_assert_eq!(whole, a + b);
            prop_assert_eq!(t.count(&Range::all(2)).unwrap() as usize, t.report(&Range::all(2)).unwrap().len());
        }
    }
}
