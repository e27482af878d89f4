//! Occurrences of one word in suffix order, with counting and selection
//! restricted to occurrences whose context extends that of the word.
//!
//! Let `w = S[s..=e]` with period `p` and let `u∞` be the left-infinite and
//! right-infinite periodic extension of `w`. Every occurrence agrees with
//! `u∞` up to the end of its run, `m + r·p + ρ` symbols, where `r` is its
//! *period rank* (occurrences of the cluster still to come) and `ρ < p` is
//! shared by the whole cluster. Past the run the occurrence drops below
//! `u∞` (a *decreasing* cluster, also when the text ends) or rises above it
//! (*increasing*). Hence the sorted occurrences are all decreasing ones
//! followed by all increasing ones; the decreasing part is ordered by rank
//! ascending, the increasing part by rank descending, and within one rank by
//! a per-class cluster order `tr` (leftover `ρ`, then the text after the
//! run).

use std::cmp::Ordering;

use thiserror::Error;

use crate::dynstr::TextView;
use crate::occindex::{cluster_lce_progression, Cluster, Por, Progression};
use crate::rangetree::{Range, RangeTree, POS_INF};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ErsError {
    #[error("rank {rank} outside 1..={len}")]
    RankOutOfRange { rank: usize, len: usize },
    #[error("range {i}..={j} is not inside 1..={len}")]
    BadRange { i: usize, j: usize, len: usize },
    #[error("rank {rank} exceeds the {count} extendable occurrences")]
    NotExtendable { rank: usize, count: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClusterClass {
    Decreasing,
    Increasing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClusterMeta {
    pub cluster: Cluster,
    pub size: usize,
    /// Periodic extension left of the first occurrence (always `< p`).
    pub r_l: usize,
    /// Periodic extension right of the last occurrence (always `< p`).
    pub r_r: usize,
    /// 1-based position in the cluster order of its class.
    pub tr: usize,
    pub class: ClusterClass,
    pub prog: Progression,
}

impl ClusterMeta {
    /// Start of the occurrence with period rank `r`.
    pub fn at_rank(&self, r: usize) -> usize {
        self.cluster.at(self.size - 1 - r)
    }
}

/// Result of [`SortedOccView::select`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Selected {
    pub pos: usize,
    pub class: ClusterClass,
    /// Period rank of the occurrence.
    pub rank: usize,
    /// Index into [`SortedOccView::clusters`].
    pub cluster: usize,
}

/// Clusters of one class with the structures for locating and counting.
struct ClassIndex {
    /// Cluster indices in `tr` order.
    by_tr: Vec<usize>,
    sizes: Vec<usize>,
    prefix: Vec<u64>,
    total: usize,
    /// (tr, size)
    sel: RangeTree,
    /// (r_r, r_l, size) valued size
    t3: RangeTree,
    /// (tr, r_r, r_l, size)
    t4: RangeTree,
}

impl ClassIndex {
    fn new(metas: &[ClusterMeta], by_tr: Vec<usize>) -> Self {
        let mut sizes: Vec<usize> = by_tr.iter().map(|&c| metas[c].size).collect();
        sizes.sort_unstable();
        let mut prefix = vec![0u64];
        for &z in &sizes {
            prefix.push(prefix.last().unwrap() + z as u64);
        }
        let rows: Vec<[i64; 4]> = by_tr
            .iter()
            .map(|&c| {
                let m = &metas[c];
                [m.tr as i64, m.r_r as i64, m.r_l as i64, m.size as i64]
            })
            .collect();
        let sel_pts: Vec<[i64; 2]> = rows.iter().map(|r| [r[0], r[3]]).collect();
        let t3_pts: Vec<[i64; 3]> = rows.iter().map(|r| [r[1], r[2], r[3]]).collect();
        let (sel, _) = RangeTree::from_points(2, sel_pts.iter().map(|c| (&c[..], 0))).unwrap();
        let (t3, _) = RangeTree::from_points(3, t3_pts.iter().map(|c| (&c[..], c[2]))).unwrap();
        let (t4, _) = RangeTree::from_points(4, rows.iter().map(|c| (&c[..], 0))).unwrap();
        ClassIndex { total: prefix[sizes.len()] as usize, by_tr, sizes, prefix, sel, t3, t4 }
    }

    fn max_size(&self) -> usize {
        self.sizes.last().copied().unwrap_or(0)
    }

    /// Occurrences with rank below `r`: `Σ min(z, r)`.
    fn below(&self, r: usize) -> usize {
        let k = self.sizes.partition_point(|&z| z <= r);
        self.prefix[k] as usize + r * (self.sizes.len() - k)
    }

    /// Occurrences with rank at least `r`: `Σ max(0, z - r)`.
    fn at_least(&self, r: usize) -> usize {
        self.total - self.below(r)
    }

    /// Clusters with `tr <= m` holding an occurrence of rank `r`.
    fn bucket_prefix(&self, m: usize, r: usize) -> usize {
        let q = Range::all(2).at_most(0, m as i64).at_least(1, r as i64 + 1);
        self.sel.count(&q).unwrap() as usize
    }

    /// The `idx`-th (1-based) cluster in `tr` order among those with an
    /// occurrence of rank `r`.
    fn bucket_select(&self, idx: usize, r: usize) -> usize {
        let (mut lo, mut hi) = (1, self.by_tr.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.bucket_prefix(mid, r) >= idx {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        self.by_tr[lo - 1]
    }

    fn zsum(&self, rho: (i64, i64), rl: (i64, i64), z: (i64, i64)) -> (i64, i64) {
        if rho.0 > rho.1 || rl.0 > rl.1 || z.0 > z.1 {
            return (0, 0);
        }
        let q = Range::all(3).axis(0, rho.0, rho.1).axis(1, rl.0, rl.1).axis(2, z.0, z.1);
        let (c, s) = self.t3.count_sum(&q).unwrap();
        (c as i64, s)
    }

    fn count4(&self, tr_hi: i64, rho: (i64, i64), rl: (i64, i64), z_lo: i64) -> i64 {
        if rho.0 > rho.1 || rl.0 > rl.1 {
            return 0;
        }
        let q = Range::all(4).at_most(0, tr_hi).axis(1, rho.0, rho.1).axis(2, rl.0, rl.1).at_least(3, z_lo);
        self.t4.count(&q).unwrap() as i64
    }
}

/// Split of an extension length `l = q·p + m` plus the derived query bounds.
/// `(ρ range, r_l range, lowest rank, rank loss)`.
type Group = ((i64, i64), (i64, i64), i64, i64);

#[derive(Clone, Copy)]
struct Ext {
    lam: i64,
    mu: i64,
    nu: i64,
    pi: i64,
}

impl Ext {
    /// The four `(ρ` vs `π`, `r_l` vs `μ)` groups.
    fn groups(&self) -> [Group; 4] {
        let below_pi = (0, self.pi - 1);
        let from_pi = (self.pi, POS_INF);
        let below_mu = (0, self.mu - 1);
        let from_mu = (self.mu, POS_INF);
        [
            (from_pi, from_mu, self.nu, 0),
            (below_pi, from_mu, self.nu + 1, 0),
            (from_pi, below_mu, self.nu, 1),
            (below_pi, below_mu, self.nu + 1, 1),
        ]
    }
}

pub struct SortedOccView {
    s: usize,
    e: usize,
    p: usize,
    ex_l: usize,
    ex_r: usize,
    metas: Vec<ClusterMeta>,
    dec: ClassIndex,
    inc: ClassIndex,
    /// Left-aligned / right-aligned occurrences as (lcs, lcp, global index).
    left_aligned: RangeTree,
    right_aligned: RangeTree,
}

impl SortedOccView {
    /// Preprocesses the POR of `S[s..=e]`.
    pub fn build<T: TextView + ?Sized>(text: &T, por: &Por) -> Self {
        let (s, e, p) = (por.s, por.e, por.p);
        let n = text.len();
        let x = e + 1 - s;
        let mut metas: Vec<ClusterMeta> = por
            .clusters
            .iter()
            .map(|&c| {
                let prog = cluster_lce_progression(text, s, e, c);
                let size = c.size();
                let run_end = c.a + x - 1 + prog.exc_r;
                let class = match text.sym(run_end + 1) {
                    None => ClusterClass::Decreasing,
                    Some(ch) if Some(ch) < text.sym(run_end + 1 - p) => ClusterClass::Decreasing,
                    Some(_) => ClusterClass::Increasing,
                };
                ClusterMeta { cluster: c, size, r_l: prog.exc_l, r_r: prog.exc_r % p, tr: 0, class, prog }
            })
            .collect();
        let tail = |m: &ClusterMeta| m.cluster.a + x + m.prog.exc_r;
        let mut order = |class: ClusterClass| {
            let mut idx: Vec<usize> = (0..metas.len()).filter(|&c| metas[c].class == class).collect();
            idx.sort_by(|&a, &b| {
                let (ma, mb) = (&metas[a], &metas[b]);
                let by_rho = ma.r_r.cmp(&mb.r_r);
                let by_rho = if class == ClusterClass::Increasing { by_rho.reverse() } else { by_rho };
                by_rho.then_with(|| text.cmp_suffixes(tail(ma), tail(mb)))
            });
            for (q, &c) in idx.iter().enumerate() {
                metas[c].tr = q + 1;
            }
            idx
        };
        let dec_order = order(ClusterClass::Decreasing);
        let inc_order = order(ClusterClass::Increasing);
        debug_assert!(n >= e);
        let mut view = SortedOccView {
            s,
            e,
            p,
            ex_l: text.lce_bwd(s - 1, s + p - 1),
            ex_r: text.lce_fwd(e + 1, e + 1 - p),
            dec: ClassIndex::new(&metas, dec_order),
            inc: ClassIndex::new(&metas, inc_order),
            metas,
            left_aligned: RangeTree::new(3).unwrap(),
            right_aligned: RangeTree::new(3).unwrap(),
        };
        let mut left = Vec::new();
        let mut right = Vec::new();
        for (c, m) in view.metas.iter().enumerate() {
            for (t, out) in [(m.prog.aligned_l(), &mut left), (m.prog.aligned_r(), &mut right)] {
                if let Some(t) = t {
                    let g = view.index_of(c, m.size - 1 - t) as i64;
                    out.push([m.prog.l(t) as i64, m.prog.r(t) as i64, g]);
                }
            }
        }
        view.left_aligned = RangeTree::from_points(3, left.iter().map(|c| (&c[..], 0))).unwrap().0;
        view.right_aligned = RangeTree::from_points(3, right.iter().map(|c| (&c[..], 0))).unwrap().0;
        view
    }

    /// Number of occurrences.
    pub fn len(&self) -> usize {
        self.dec.total + self.inc.total
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Occurrences in decreasing clusters; they come first.
    pub fn decreasing_len(&self) -> usize {
        self.dec.total
    }

    pub fn word(&self) -> (usize, usize) {
        (self.s, self.e)
    }

    pub fn period(&self) -> usize {
        self.p
    }

    pub fn clusters(&self) -> &[ClusterMeta] {
        &self.metas
    }

    fn class(&self, c: ClusterClass) -> &ClassIndex {
        match c {
            ClusterClass::Decreasing => &self.dec,
            ClusterClass::Increasing => &self.inc,
        }
    }

    /// 1-based position in suffix order of the rank-`r` occurrence of
    /// cluster `c`.
    fn index_of(&self, c: usize, r: usize) -> usize {
        let m = &self.metas[c];
        let ci = self.class(m.class);
        let inside = ci.bucket_prefix(m.tr, r);
        match m.class {
            ClusterClass::Decreasing => ci.below(r) + inside,
            ClusterClass::Increasing => self.dec.total + ci.at_least(r + 1) + inside,
        }
    }

    /// The `i`-th occurrence in suffix order.
    pub fn select(&self, i: usize) -> Result<Selected, ErsError> {
        let (class, rank, cluster) = self.locate(i)?;
        Ok(Selected { pos: self.metas[cluster].at_rank(rank), class, rank, cluster })
    }

    fn locate(&self, i: usize) -> Result<(ClusterClass, usize, usize), ErsError> {
        if i == 0 || i > self.len() {
            return Err(ErsError::RankOutOfRange { rank: i, len: self.len() });
        }
        if i <= self.dec.total {
            let ci = &self.dec;
            // largest r with below(r) < i
            let (mut lo, mut hi) = (0, ci.max_size() - 1);
            while lo < hi {
                let mid = (lo + hi).div_ceil(2);
                if ci.below(mid) < i {
                    lo = mid;
                } else {
                    hi = mid - 1;
                }
            }
            let c = ci.bucket_select(i - ci.below(lo), lo);
            Ok((ClusterClass::Decreasing, lo, c))
        } else {
            let ci = &self.inc;
            let i = i - self.dec.total;
            // largest r with at_least(r) >= i
            let (mut lo, mut hi) = (0, ci.max_size() - 1);
            while lo < hi {
                let mid = (lo + hi).div_ceil(2);
                if ci.at_least(mid) >= i {
                    lo = mid;
                } else {
                    hi = mid - 1;
                }
            }
            let c = ci.bucket_select(i - ci.at_least(lo + 1), lo);
            Ok((ClusterClass::Increasing, lo, c))
        }
    }

    /// Occurrences among the first `x` in suffix order whose left context
    /// matches the word's for `l` symbols and right context for `r`.
    fn prefix_count(&self, l: usize, r: usize, x: usize) -> usize {
        if x == 0 {
            return 0;
        }
        if l > self.ex_l || r > self.ex_r {
            let tree = if l > self.ex_l { &self.left_aligned } else { &self.right_aligned };
            let q = Range::all(3).at_least(0, l as i64).at_least(1, r as i64).at_most(2, x as i64);
            return tree.count(&q).unwrap() as usize;
        }
        let p = self.p as i64;
        let ext = Ext { lam: l as i64 / p, mu: l as i64 % p, nu: r as i64 / p, pi: r as i64 % p };
        let (class, r0, c) = self.locate(x).expect("x is a valid rank");
        let m0 = self.metas[c].tr as i64;
        let r0 = r0 as i64;
        let mut total = 0;
        match class {
            ClusterClass::Decreasing => {
                for (rho, rl, lo, loss) in ext.groups() {
                    // ranks lo..=z-1-lam-loss, cut below r0
                    if r0 > lo {
                        let c = ext.lam + loss + lo;
                        let top = r0 + ext.lam + loss;
                        let (cnt, sum) = self.dec.zsum(rho, rl, (c + 1, top));
                        total += sum - c * cnt;
                        let (cnt, _) = self.dec.zsum(rho, rl, (top + 1, POS_INF));
                        total += cnt * (r0 - lo);
                    }
                    if lo <= r0 {
                        total += self.dec.count4(m0, rho, rl, r0 + 1 + ext.lam + loss);
                    }
                }
            }
            ClusterClass::Increasing => {
                for (rho, rl, lo, loss) in ext.groups() {
                    let c = ext.lam + loss + lo;
                    let (cnt, sum) = self.dec.zsum(rho, rl, (c + 1, POS_INF));
                    total += sum - c * cnt;
                    let g = lo.max(r0 + 1);
                    let c = ext.lam + loss + g;
                    let (cnt, sum) = self.inc.zsum(rho, rl, (c + 1, POS_INF));
                    total += sum - c * cnt;
                    if lo <= r0 {
                        total += self.inc.count4(m0, rho, rl, r0 + 1 + ext.lam + loss);
                    }
                }
            }
        }
        total as usize
    }

    /// `(l, r)`-extendable occurrences among positions `i..=j` of the
    /// sorted order.
    pub fn erc_count(&self, l: usize, r: usize, i: usize, j: usize) -> Result<usize, ErsError> {
        if i == 0 || i > j || j > self.len() {
            return Err(ErsError::BadRange { i, j, len: self.len() });
        }
        Ok(self.prefix_count(l, r, j) - self.prefix_count(l, r, i - 1))
    }

    /// Number of `(l, r)`-extendable occurrences.
    pub fn extendable(&self, l: usize, r: usize) -> usize {
        self.prefix_count(l, r, self.len())
    }

    /// Start of the `i`-th `(l, r)`-extendable occurrence in suffix order.
    pub fn ers_select(&self, l: usize, r: usize, i: usize) -> Result<usize, ErsError> {
        let count = self.extendable(l, r);
        if i == 0 || i > count {
            return Err(ErsError::NotExtendable { rank: i, count });
        }
        let (mut lo, mut hi) = (1, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.prefix_count(l, r, mid) >= i {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(self.select(lo)?.pos)
    }

    /// Class and period rank of every occurrence in suffix order.
    pub fn decomposition(&self) -> Vec<(ClusterClass, usize)> {
        (1..=self.len())
            .map(|i| {
                let s = self.select(i).unwrap();
                (s.class, s.rank)
            })
            .collect()
    }
}

impl std::fmt::Debug for SortedOccView {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SortedOccView")
            .field("word", &(self.s, self.e))
            .field("p", &self.p)
            .field("occurrences", &self.len())
            .field("decreasing", &self.dec.total)
            .finish()
    }
}

/// Compares two `(class, rank)` pairs in the order the view lists them.
pub fn decomposition_order(a: (ClusterClass, usize), b: (ClusterClass, usize)) -> Ordering {
    match (a.0, b.0) {
        (ClusterClass::Decreasing, ClusterClass::Decreasing) => a.1.cmp(&b.1),
        (ClusterClass::Increasing, ClusterClass::Increasing) => b.1.cmp(&a.1),
        (x, y) => x.cmp(&y),
    }
}
