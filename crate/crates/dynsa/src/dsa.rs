//! Suffix array, BWT and LCP array lookups under insertions, deletions and
//! substitutions.
//!
//! Suffixes are grouped by their first `k = ⌈n^(2/3)⌉` symbols in a k-words
//! tree, which answers which group holds rank `i` and the rank inside the
//! group. Every length-k window contains one of the aligned blocks
//! `S[(x-1)t+1..=xt]`, `t = ⌊k/2⌋`, so the group's members are exactly the
//! block's occurrences that extend by the right amounts on both sides, and a
//! sorted occurrence view per block selects among them. The views are
//! rebuilt after every edit.

use thiserror::Error;

use crate::dynstr::{DynamicString, EditOp, TextError, TextView};
use crate::ers::{ErsError, SortedOccView};
use crate::occindex::{por, KWordsTree};
use crate::EpochPolicy;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SaError {
    #[error(transparent)]
    Text(#[from] TextError),
    #[error("rank {rank} outside 1..={len}")]
    RankOutOfRange { rank: usize, len: usize },
    #[error("the LCP entry of rank 1 is undefined")]
    FirstLcp,
    #[error("deleting the last symbol would leave an empty text")]
    WouldEmpty,
    #[error("occurrence selection failed: {0}")]
    Selection(#[from] ErsError),
}

pub struct DynamicSa {
    text: DynamicString,
    policy: EpochPolicy,
    k: usize,
    t: usize,
    kw: KWordsTree,
    kt: KWordsTree,
    kq: KWordsTree,
    blocks: Vec<SortedOccView>,
    rebuilds: u64,
}

impl DynamicSa {
    pub fn new(text: &[u8]) -> Result<Self, SaError> {
        Self::with_policy(text, EpochPolicy::default())
    }

    pub fn with_policy(text: &[u8], policy: EpochPolicy) -> Result<Self, SaError> {
        Self::from_string(DynamicString::new(text), policy)
    }

    /// Like [`with_policy`](Self::with_policy) but keeps the alphabet of an
    /// existing string.
    pub fn from_string(text: DynamicString, policy: EpochPolicy) -> Result<Self, SaError> {
        if text.is_empty() {
            return Err(SaError::WouldEmpty);
        }
        let k = policy.sa_k(text.len());
        let t = (k / 2).max(1);
        let mut sa = DynamicSa {
            kw: KWordsTree::build(&text, k),
            kt: KWordsTree::build(&text, t),
            kq: KWordsTree::build(&text, t.div_ceil(2)),
            text,
            policy,
            k,
            t,
            blocks: Vec::new(),
            rebuilds: 0,
        };
        sa.rebuild_blocks();
        Ok(sa)
    }

    fn rebuild_blocks(&mut self) {
        let (n, t) = (self.text.len(), self.t);
        self.blocks = (1..=n / t)
            .map(|x| {
                let s = (x - 1) * t + 1;
                let por = por(&self.text, &self.kt, &self.kq, s, t);
                SortedOccView::build(&self.text, &por)
            })
            .collect();
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

    /// Full rebuilds caused by `k` changing with the text length.
    pub fn rebuilds(&self) -> u64 {
        self.rebuilds
    }

    pub fn apply(&mut self, op: EditOp) -> Result<(), SaError> {
        if matches!(op, EditOp::Delete { .. }) && self.text.len() == 1 {
            return Err(SaError::WouldEmpty);
        }
        let applied = self.text.apply_raw(op)?;
        let n = self.text.len();
        let k = self.policy.sa_k(n);
        if k != self.k {
            self.k = k;
            self.t = (k / 2).max(1);
            self.kw = KWordsTree::build(&self.text, k);
            self.kt = KWordsTree::build(&self.text, self.t);
            self.kq = KWordsTree::build(&self.text, self.t.div_ceil(2));
            self.rebuilds += 1;
        } else {
            self.kw.update_on_edit(&self.text, applied);
            self.kt.update_on_edit(&self.text, applied);
            self.kq.update_on_edit(&self.text, applied);
        }
        self.rebuild_blocks();
        Ok(())
    }

    fn check_rank(&self, i: usize) -> Result<(), SaError> {
        if i == 0 || i > self.len() {
            return Err(SaError::RankOutOfRange { rank: i, len: self.len() });
        }
        Ok(())
    }

    /// Start of the suffix of rank `i`.
    pub fn sa(&self, i: usize) -> Result<usize, SaError> {
        self.check_rank(i)?;
        let (v, r) = self.kw.findvr(i).expect("rank checked");
        if self.kw.count(v) == 1 {
            return Ok(self.kw.anchor(&self.text, v));
        }
        let i0 = self.kw.first(&self.text, v);
        let t = self.t;
        let x = (i0 - 1).div_ceil(t) + 1;
        let bs = (x - 1) * t + 1;
        let be = x * t;
        let left = bs - i0;
        let right = i0 + self.k - 1 - be;
        Ok(self.blocks[x - 1].ers_select(left, right, r)? - left)
    }

    /// Symbol before the suffix of rank `i`, cyclically.
    pub fn bwt(&self, i: usize) -> Result<u8, SaError> {
        let p = self.sa(i)?;
        let q = if p == 1 { self.len() } else { p - 1 };
        Ok(self.text.sym(q).expect("inside the text"))
    }

    /// Longest common prefix of the suffixes of ranks `i - 1` and `i`.
    pub fn lcp_entry(&self, i: usize) -> Result<usize, SaError> {
        if i == 1 {
            return Err(SaError::FirstLcp);
        }
        self.check_rank(i)?;
        Ok(self.text.lce_fwd(self.sa(i - 1)?, self.sa(i)?))
    }
}

impl std::fmt::Debug for DynamicSa {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DynamicSa").field("n", &self.len()).field("k", &self.k).field("blocks", &self.blocks.len()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check(sa: &DynamicSa, text: &[u8]) {
        let want = oracle::naive_sa(text);
        let got: Vec<usize> = (1..=text.len()).map(|i| sa.sa(i).unwrap()).collect();
        assert_eq!(got, want, "text {:?} k {}", String::from_utf8_lossy(text), sa.k());
        let bwt: Vec<u8> = (1..=text.len()).map(|i| sa.bwt(i).unwrap()).collect();
        assert_eq!(bwt, oracle::naive_bwt(text));
        let lcp = oracle::naive_lcp_array(text);
        for i in 2..=text.len() {
            assert_eq!(sa.lcp_entry(i).unwrap(), lcp[i - 1]);
        }
    }

    #[test]
    fn small_examples() {
        let sa = DynamicSa::new(b"banana").unwrap();
        check(&sa, b"banana");
        assert_eq!(sa.lcp_entry(3).unwrap(), 3);
        assert_eq!(sa.lcp_entry(1), Err(SaError::FirstLcp));
        assert!(sa.sa(7).is_err());
        check(&DynamicSa::new(b"aaaaaaaaaa").unwrap(), b"aaaaaaaaaa");
        check(&DynamicSa::new(b"a").unwrap(), b"a");
        check(&DynamicSa::new(b"qwertyuiop").unwrap(), b"qwertyuiop");
    }

    #[test]
    fn insert_then_delete() {
        let text = b"abaababaabaab".to_vec();
        let mut sa = DynamicSa::new(&text).unwrap();
        sa.apply(EditOp::Insert { pos: 4, sym: b'b' }).unwrap();
        sa.apply(EditOp::Delete { pos: 5 }).unwrap();
        check(&sa, &text);
        let mut one = DynamicSa::new(b"x").unwrap();
        assert_eq!(one.apply(EditOp::Delete { pos: 1 }), Err(SaError::WouldEmpty));
    }

    fn random_edits(seed: u64, n: usize, sigma: u8, edits: usize, k: Option<usize>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut text: Vec<u8> = (0..n).map(|_| b'a' + rng.gen_range(0..sigma)).collect();
        let policy = EpochPolicy { sa_k: k, ..EpochPolicy::default() };
        let mut sa = DynamicSa::with_policy(&text, policy).unwrap();
        check(&sa, &text);
        for _ in 0..edits {
            let c = b'a' + rng.gen_range(0..sigma);
            let op = match rng.gen_range(0..3) {
                0 if text.len() > 1 => {
                    let pos = rng.gen_range(1..=text.len());
                    text.remove(pos - 1);
                    EditOp::Delete { pos }
                }
                1 => {
                    let pos = rng.gen_range(0..=text.len());
                    text.insert(pos, c);
                    EditOp::Insert { pos, sym: c }
                }
                _ => {
                    let pos = rng.gen_range(1..=text.len());
                    if text[pos - 1] == c {
                        continue;
                    }
                    text[pos - 1] = c;
                    EditOp::Substitute { pos, sym: c }
                }
            };
            sa.apply(op).unwrap();
            check(&sa, &text);
        }
    }

    #[test]
    fn random_mixed_edits() {
        for seed in 0..10 {
            random_edits(seed, 50, 2, 40, None);
            random_edits(50 + seed, 40, 3, 40, Some(6));
        }
    }

    #[test]
    fn periodic_text_edits() {
        for seed in 0..10 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let unit: Vec<u8> = (0..rng.gen_range(1..4)).map(|_| b'a' + rng.gen_range(0..2)).collect();
            let mut text: Vec<u8> = unit.iter().cycle().take(60).copied().collect();
            let mut sa = DynamicSa::with_policy(&text, EpochPolicy { sa_k: Some(8), ..EpochPolicy::default() }).unwrap();
            for _ in 0..30 {
                let pos = rng.gen_range(1..=text.len());
                let c = if text[pos - 1] == b'a' { b'b' } else { b'a' };
                text[pos - 1] = c;
                sa.apply(EditOp::Substitute { pos, sym: c }).unwrap();
                check(&sa, &text);
            }
        }
    }
}
