//! Occurrence indexes over a [`DynamicString`].
//!
//! [`KWordsTree`] groups the text positions by the length-k word starting at
//! them (words running past the end are padded with a symbol below the
//! alphabet, so they are unique). On top of it sit periodic occurrence
//! representations ([`Por`]), maximal periodic intervals ([`Run`]) and the
//! per-cluster LCE progressions used to compare many occurrences at once.

use std::cmp::Ordering;

use crate::dynstr::{Applied, DynamicString, Handle, TextView};

const NIL: u32 = u32::MAX;

pub type NodeId = u32;

/// Treap arrays with parent pointers and weighted subtree sums. Roots are
/// kept by the caller.
#[derive(Clone, Debug, Default)]
struct Forest {
    l: Vec<u32>,
    r: Vec<u32>,
    p: Vec<u32>,
    pri: Vec<u32>,
    w: Vec<u32>,
    s: Vec<u32>,
}

impl Forest {
    fn grow(&mut self, n: usize) {
        if self.l.len() < n {
            self.l.resize(n, NIL);
            self.r.resize(n, NIL);
            self.p.resize(n, NIL);
            self.pri.resize(n, 0);
            self.w.resize(n, 0);
            self.s.resize(n, 0);
        }
    }

    fn reset(&mut self, x: u32, pri: u32, w: u32) {
        self.grow(x as usize + 1);
        let x = x as usize;
        self.l[x] = NIL;
        self.r[x] = NIL;
        self.p[x] = NIL;
        self.pri[x] = pri;
        self.w[x] = w;
        self.s[x] = w;
    }

    fn sum(&self, x: u32) -> u32 {
        if x == NIL {
            0
        } else {
            self.s[x as usize]
        }
    }

    fn pull(&mut self, x: u32) {
        let i = x as usize;
        self.s[i] = self.w[i] + self.sum(self.l[i]) + self.sum(self.r[i]);
    }

    fn pull_up(&mut self, mut x: u32) {
        while x != NIL {
            self.pull(x);
            x = self.p[x as usize];
        }
    }

    fn replace_child(&mut self, g: u32, old: u32, new: u32, root: &mut u32) {
        if g == NIL {
            *root = new;
        } else if self.l[g as usize] == old {
            self.l[g as usize] = new;
        } else {
            self.r[g as usize] = new;
        }
        if new != NIL {
            self.p[new as usize] = g;
        }
    }

    fn rotate_up(&mut self, x: u32, root: &mut u32) {
        let y = self.p[x as usize];
        let g = self.p[y as usize];
        if self.l[y as usize] == x {
            let b = self.r[x as usize];
            self.l[y as usize] = b;
            if b != NIL {
                self.p[b as usize] = y;
            }
            self.r[x as usize] = y;
        } else {
            let b = self.l[x as usize];
            self.r[y as usize] = b;
            if b != NIL {
                self.p[b as usize] = y;
            }
            self.l[x as usize] = y;
        }
        self.p[y as usize] = x;
        self.replace_child(g, y, x, root);
        self.pull(y);
        self.pull(x);
    }

    /// Hangs the fresh node `x` below `parent` and restores heap order.
    fn attach(&mut self, parent: u32, x: u32, left: bool, root: &mut u32) {
        if parent == NIL {
            *root = x;
            self.p[x as usize] = NIL;
        } else {
            if left {
                self.l[parent as usize] = x;
            } else {
                self.r[parent as usize] = x;
            }
            self.p[x as usize] = parent;
        }
        self.pull_up(x);
        while self.p[x as usize] != NIL && self.pri[x as usize] > self.pri[self.p[x as usize] as usize] {
            self.rotate_up(x, root);
        }
    }

    fn detach(&mut self, x: u32, root: &mut u32) {
        loop {
            let (a, b) = (self.l[x as usize], self.r[x as usize]);
            let c = match (a, b) {
                (NIL, NIL) => break,
                (NIL, c) | (c, NIL) => c,
                _ => {
                    if self.pri[a as usize] > self.pri[b as usize] {
                        a
                    } else {
                        b
                    }
                }
            };
            self.rotate_up(c, root);
        }
        let g = self.p[x as usize];
        self.replace_child(g, x, NIL, root);
        self.p[x as usize] = NIL;
        self.pull_up(g);
    }

    fn leftmost(&self, mut x: u32) -> u32 {
        while x != NIL && self.l[x as usize] != NIL {
            x = self.l[x as usize];
        }
        x
    }

    fn in_order(&self, root: u32, out: &mut Vec<u32>) {
        let mut stack = Vec::new();
        let mut x = root;
        loop {
            while x != NIL {
                stack.push(x);
                x = self.l[x as usize];
            }
            match stack.pop() {
                None => break,
                Some(y) => {
                    out.push(y);
                    x = self.r[y as usize];
                }
            }
        }
    }

    /// Builds a treap over `ids` (already in order) and returns its root.
    fn build_sorted(&mut self, ids: &[u32]) -> u32 {
        let mut stack: Vec<u32> = Vec::new();
        for &x in ids {
            let mut last = NIL;
            while let Some(&top) = stack.last() {
                if self.pri[top as usize] >= self.pri[x as usize] {
                    break;
                }
                last = stack.pop().unwrap();
            }
            self.l[x as usize] = last;
            if last != NIL {
                self.p[last as usize] = x;
            }
            if let Some(&top) = stack.last() {
                self.r[top as usize] = x;
                self.p[x as usize] = top;
            }
            stack.push(x);
        }
        let root = stack.first().copied().unwrap_or(NIL);
        if root != NIL {
            self.p[root as usize] = NIL;
        }
        // subtree sums bottom-up
        let mut post = Vec::with_capacity(ids.len());
        let mut st = vec![(root, false)];
        while let Some((x, done)) = st.pop() {
            if x == NIL {
                continue;
            }
            if done {
                post.push(x);
            } else {
                st.push((x, true));
                st.push((self.r[x as usize], false));
                st.push((self.l[x as usize], false));
            }
        }
        for x in post {
            self.pull(x);
        }
        root
    }
}

/// Word order of the length-`k` words at `i` and `j`.
pub fn cmp_words<T: TextView + ?Sized>(text: &T, k: usize, i: usize, j: usize) -> Ordering {
    if i == j {
        return Ordering::Equal;
    }
    let l = text.lce_fwd(i, j);
    if l >= k {
        Ordering::Equal
    } else {
        text.sym(i + l).cmp(&text.sym(j + l))
    }
}

/// Distinct length-k words in lexicographic order, each with its
/// occurrences ordered by position.
#[derive(Clone, Debug)]
pub struct KWordsTree {
    k: usize,
    words: Forest,
    root: u32,
    anchor: Vec<Handle>,
    occ_root: Vec<u32>,
    free: Vec<u32>,
    occ: Forest,
    node_of: Vec<u32>,
    rng: u64,
}

impl KWordsTree {
    pub fn build(text: &DynamicString, k: usize) -> Self {
        assert!(k >= 1, "word length must be positive");
        let mut t = KWordsTree {
            k,
            words: Forest::default(),
            root: NIL,
            anchor: Vec::new(),
            occ_root: Vec::new(),
            free: Vec::new(),
            occ: Forest::default(),
            node_of: Vec::new(),
            rng: 0x9e37_79b9_7f4a_7c15 ^ k as u64,
        };
        let n = text.len();
        let cap = text.handle_capacity();
        t.node_of = vec![NIL; cap];
        t.occ.grow(cap);
        if n == 0 {
            return t;
        }
        let raw = text.to_vec();
        let sa = crate::suffix_sort::suffix_array(&raw);
        let lcp = crate::suffix_sort::lcp_array(&raw, &sa);
        let handles: Vec<Handle> = (1..=n).map(|i| text.handle_at(i)).collect();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (r, &pos) in sa.iter().enumerate() {
            // padded words never match anything
            let same = r > 0 && lcp[r] >= k && pos + k - 1 <= n && sa[r - 1] + k - 1 <= n;
            if same {
                groups.last_mut().unwrap().push(pos);
            } else {
                groups.push(vec![pos]);
            }
        }
        let mut node_ids = Vec::with_capacity(groups.len());
        for mut g in groups {
            g.sort_unstable();
            let v = t.new_node(handles[g[0] - 1], g.len() as u32);
            let ids: Vec<u32> = g.iter().map(|&pos| handles[pos - 1]).collect();
            for &h in &ids {
                let pri = t.next_pri();
                t.occ.reset(h, pri, 1);
                t.node_of[h as usize] = v;
            }
            t.occ_root[v as usize] = t.occ.build_sorted(&ids);
            node_ids.push(v);
        }
        t.root = t.words.build_sorted(&node_ids);
        t
    }

    fn next_pri(&mut self) -> u32 {
        self.rng ^= self.rng << 13;
        self.rng ^= self.rng >> 7;
        self.rng ^= self.rng << 17;
        (self.rng >> 32) as u32
    }

    fn new_node(&mut self, anchor: Handle, cnt: u32) -> u32 {
        let v = match self.free.pop() {
            Some(v) => v,
            None => {
                self.anchor.push(0);
                self.occ_root.push(NIL);
                (self.anchor.len() - 1) as u32
            }
        };
        let pri = self.next_pri();
        self.words.reset(v, pri, cnt);
        self.anchor[v as usize] = anchor;
        self.occ_root[v as usize] = NIL;
        v
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Total number of occurrences (the text length).
    pub fn total(&self) -> usize {
        self.words.sum(self.root) as usize
    }

    pub fn node_of(&self, text: &DynamicString, i: usize) -> NodeId {
        self.node_of[text.handle_at(i) as usize]
    }

    pub fn count(&self, v: NodeId) -> usize {
        self.words.w[v as usize] as usize
    }

    /// Some occurrence of the node's word.
    pub fn anchor(&self, text: &DynamicString, v: NodeId) -> usize {
        text.position_of(self.anchor[v as usize])
    }

    /// Node of position `i` and the number of occurrences of smaller words.
    pub fn find_node(&self, text: &DynamicString, i: usize) -> (NodeId, usize) {
        let v = self.node_of(text, i);
        (v, self.left_count(v))
    }

    pub fn left_count(&self, v: NodeId) -> usize {
        let f = &self.words;
        let mut c = f.sum(f.l[v as usize]);
        let mut x = v;
        loop {
            let q = f.p[x as usize];
            if q == NIL {
                break;
            }
            if f.r[q as usize] == x {
                c += f.sum(f.l[q as usize]) + f.w[q as usize];
            }
            x = q;
        }
        c as usize
    }

    /// The node holding the suffix of rank `i` among all suffixes, and that
    /// suffix's rank among the node's occurrences (both 1-based).
    pub fn findvr(&self, mut i: usize) -> Option<(NodeId, usize)> {
        let f = &self.words;
        if i == 0 || i > self.total() {
            return None;
        }
        let mut x = self.root;
        while x != NIL {
            let ls = f.sum(f.l[x as usize]) as usize;
            let w = f.w[x as usize] as usize;
            if i <= ls {
                x = f.l[x as usize];
            } else if i <= ls + w {
                return Some((x, i - ls));
            } else {
                i -= ls + w;
                x = f.r[x as usize];
            }
        }
        None
    }

    /// Smallest occurrence position of the node.
    pub fn first(&self, text: &DynamicString, v: NodeId) -> usize {
        text.position_of(self.occ.leftmost(self.occ_root[v as usize]))
    }

    /// Smallest occurrence of the node after `pos`.
    pub fn successor(&self, text: &DynamicString, v: NodeId, pos: usize) -> Option<usize> {
        let mut x = self.occ_root[v as usize];
        let mut best = None;
        while x != NIL {
            let q = text.position_of(x);
            if q > pos {
                best = Some(q);
                x = self.occ.l[x as usize];
            } else {
                x = self.occ.r[x as usize];
            }
        }
        best
    }

    /// Occurrence positions of the node, ascending.
    pub fn occurrences(&self, text: &DynamicString, v: NodeId) -> Vec<usize> {
        let mut hs = Vec::new();
        self.occ.in_order(self.occ_root[v as usize], &mut hs);
        hs.into_iter().map(|h| text.position_of(h)).collect()
    }

    /// Every node's occurrence list, in word order.
    pub fn groups(&self, text: &DynamicString) -> Vec<Vec<usize>> {
        let mut vs = Vec::new();
        self.words.in_order(self.root, &mut vs);
        vs.into_iter().map(|v| self.occurrences(text, v)).collect()
    }

    fn detach_handle(&mut self, h: Handle) {
        let v = self.node_of[h as usize];
        if v == NIL {
            return;
        }
        self.node_of[h as usize] = NIL;
        let mut root = self.occ_root[v as usize];
        self.occ.detach(h, &mut root);
        self.occ_root[v as usize] = root;
        self.words.w[v as usize] -= 1;
        self.words.pull_up(v);
        if root == NIL {
            let mut wr = self.root;
            self.words.detach(v, &mut wr);
            self.root = wr;
            self.free.push(v);
        } else if self.anchor[v as usize] == h {
            self.anchor[v as usize] = root;
        }
    }

    fn attach_handle(&mut self, text: &DynamicString, h: Handle) {
        let i = text.position_of(h);
        let mut x = self.root;
        let mut parent = NIL;
        let mut left = false;
        while x != NIL {
            let a = text.position_of(self.anchor[x as usize]);
            match cmp_words(text, self.k, i, a) {
                Ordering::Equal => break,
                Ordering::Less => {
                    parent = x;
                    left = true;
                    x = self.words.l[x as usize];
                }
                Ordering::Greater => {
                    parent = x;
                    left = false;
                    x = self.words.r[x as usize];
                }
            }
        }
        let v = if x == NIL {
            let v = self.new_node(h, 0);
            let mut wr = self.root;
            self.words.attach(parent, v, left, &mut wr);
            self.root = wr;
            v
        } else {
            x
        };
        // occurrence treap, keyed by position
        let pri = self.next_pri();
        self.occ.reset(h, pri, 1);
        let mut y = self.occ_root[v as usize];
        let (mut op, mut ol) = (NIL, false);
        while y != NIL {
            op = y;
            ol = i < text.position_of(y);
            y = if ol { self.occ.l[y as usize] } else { self.occ.r[y as usize] };
        }
        let mut root = self.occ_root[v as usize];
        self.occ.attach(op, h, ol, &mut root);
        self.occ_root[v as usize] = root;
        self.node_of[h as usize] = v;
        self.words.w[v as usize] += 1;
        self.words.pull_up(v);
    }

    /// Re-files the words changed by one edit of `text`.
    pub fn update_on_edit(&mut self, text: &DynamicString, applied: Applied) {
        let n = text.len();
        let cap = text.handle_capacity();
        if self.node_of.len() < cap {
            self.node_of.resize(cap, NIL);
            self.occ.grow(cap);
        }
        let k = self.k;
        let (lo, hi, fresh, dead) = match applied {
            Applied::Substituted { pos, .. } => (pos.saturating_sub(k - 1).max(1), pos, None, None),
            Applied::Inserted { pos, handle } => (pos.saturating_sub(k - 1).max(1), pos - 1, Some(handle), None),
            Applied::Deleted { pos, handle, .. } => (pos.saturating_sub(k - 1).max(1), (pos - 1).min(n), None, Some(handle)),
        };
        let moved: Vec<Handle> = (lo..=hi).map(|i| text.handle_at(i)).collect();
        if let Some(h) = dead {
            self.detach_handle(h);
        }
        for &h in &moved {
            self.detach_handle(h);
        }
        for &h in moved.iter().chain(fresh.iter()) {
            self.attach_handle(text, h);
        }
    }
}

/// Maximal interval with period `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Run {
    pub start: usize,
    pub end: usize,
    pub p: usize,
}

impl Run {
    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.start <= i && j <= self.end
    }

    /// Period at most a fifth of the length.
    pub fn is_extremely_periodic(&self) -> bool {
        5 * self.p <= self.len()
    }
}

/// The maximal period-`p` interval containing `[i, i + p - 1]`.
pub fn run_with_period<T: TextView + ?Sized>(text: &T, i: usize, p: usize) -> Run {
    assert!(i >= 1 && p >= 1 && i + p - 1 <= text.len(), "window [{i}, {}] out of range", i + p - 1);
    let left = text.lce_bwd(i - 1, i + p - 1);
    let right = text.lce_fwd(i + p, i);
    Run { start: i - left, end: i + p - 1 + right, p }
}

/// Occurrences `a, a + p, ..., b` of one word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cluster {
    pub a: usize,
    pub b: usize,
    pub p: usize,
}

impl Cluster {
    pub fn size(&self) -> usize {
        (self.b - self.a) / self.p + 1
    }

    pub fn at(&self, t: usize) -> usize {
        self.a + t * self.p
    }

    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.size()).map(|t| self.at(t))
    }
}

/// Every occurrence of `S[s..=e]` as maximal progressions with difference
/// `p`, ordered by position. `p` is the smallest period of the word when it
/// is at most half the length, and the length otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Por {
    pub s: usize,
    pub e: usize,
    pub p: usize,
    pub clusters: Vec<Cluster>,
}

impl Por {
    pub fn len(&self) -> usize {
        self.e + 1 - self.s
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn occurrences(&self) -> usize {
        self.clusters.iter().map(Cluster::size).sum()
    }
}

/// Period of `S[s..s+x-1]` as used by [`Por`], via the next occurrence of
/// its first half.
pub fn word_period(text: &DynamicString, half: &KWordsTree, s: usize, x: usize) -> usize {
    if x < 2 {
        return x.max(1);
    }
    assert_eq!(half.k(), x.div_ceil(2), "period lookup needs the tree of half-length words");
    let v = half.node_of(text, s);
    match half.successor(text, v, s) {
        Some(q) if q - s <= x / 2 && text.lce_fwd(s, q) >= x - (q - s) => q - s,
        _ => x,
    }
}

/// POR of `S[s..s+x-1]`; `words` must index words of length `x` and `half`
/// words of length `⌈x/2⌉`.
pub fn por(text: &DynamicString, words: &KWordsTree, half: &KWordsTree, s: usize, x: usize) -> Por {
    assert_eq!(words.k(), x, "occurrence lookup needs the tree of length-{x} words");
    assert!(s >= 1 && s + x - 1 <= text.len());
    let p = word_period(text, half, s, x);
    por_with_period(text, words, s, x, p)
}

pub fn por_with_period(text: &DynamicString, words: &KWordsTree, s: usize, x: usize, p: usize) -> Por {
    let v = words.node_of(text, s);
    let mut clusters = Vec::new();
    let mut next = Some(words.first(text, v));
    while let Some(a) = next {
        let ext = text.lce_fwd(a + x, a + x - p);
        let b = a + p * (ext / p);
        clusters.push(Cluster { a, b, p });
        next = words.successor(text, v, b);
    }
    Por { s, e: s + x - 1, p, clusters }
}

/// LCE values between a word occurrence and the members of one cluster of
/// the same word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Progression {
    pub cluster: Cluster,
    /// Word length.
    pub x: usize,
    /// Run extension left of the word / right of it.
    pub ex_l: usize,
    pub ex_r: usize,
    /// Run extension left of the cluster's first occurrence / right of it.
    pub exc_l: usize,
    pub exc_r: usize,
    aligned_l: Option<(usize, usize)>,
    aligned_r: Option<(usize, usize)>,
}

impl Progression {
    /// `lcs(s - 1, s_t - 1)`.
    pub fn l(&self, t: usize) -> usize {
        match self.aligned_l {
            Some((u, v)) if u == t => v,
            _ => self.ex_l.min(self.exc_l + t * self.cluster.p),
        }
    }

    /// `lcp(e + 1, e_t + 1)`.
    pub fn r(&self, t: usize) -> usize {
        match self.aligned_r {
            Some((u, v)) if u == t => v,
            _ => self.ex_r.min(self.exc_r - t * self.cluster.p),
        }
    }

    /// The `t` where the closed forms do not apply.
    pub fn aligned(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.aligned_l.iter().chain(self.aligned_r.iter()).map(|a| a.0).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn aligned_l(&self) -> Option<usize> {
        self.aligned_l.map(|a| a.0)
    }

    pub fn aligned_r(&self) -> Option<usize> {
        self.aligned_r.map(|a| a.0)
    }
}

fn exact_step(diff: i64, p: usize, size: usize) -> Option<usize> {
    if diff < 0 || diff % p as i64 != 0 {
        return None;
    }
    let t = (diff / p as i64) as usize;
    (t < size).then_some(t)
}

/// Four LCE queries around the word `S[s..=e]` and the cluster, plus one
/// direct query for each of the (at most two) aligned members.
pub fn cluster_lce_progression<T: TextView + ?Sized>(text: &T, s: usize, e: usize, c: Cluster) -> Progression {
    let x = e + 1 - s;
    let p = c.p;
    assert!(p <= x, "cluster step {p} exceeds word length {x}");
    let ex_l = text.lce_bwd(s - 1, s + p - 1);
    let ex_r = text.lce_fwd(e + 1, e + 1 - p);
    let exc_l = text.lce_bwd(c.a - 1, c.a + p - 1);
    let exc_r = text.lce_fwd(c.a + x, c.a + x - p);
    let size = c.size();
    let aligned_l = exact_step(ex_l as i64 - exc_l as i64, p, size).map(|t| (t, text.lce_bwd(s - 1, c.at(t) - 1)));
    let aligned_r =
        exact_step(exc_r as i64 - ex_r as i64, p, size).map(|t| (t, text.lce_fwd(e + 1, c.at(t) + x)));
    Progression { cluster: c, x, ex_l, ex_r, exc_l, exc_r, aligned_l, aligned_r }
}

/// Consecutive `t` ranges of the cluster with the order of suffix `s_t`
/// against suffix `s` (which must start with the cluster's word).
pub fn lex_segments<T: TextView + ?Sized>(text: &T, prog: &Progression, s: usize) -> Vec<(usize, usize, Ordering)> {
    let c = prog.cluster;
    let size = c.size();
    let mut cuts: Vec<(usize, usize)> = Vec::new();
    match prog.aligned_r() {
        Some(t) => {
            if t > 0 {
                cuts.push((0, t - 1));
            }
            cuts.push((t, t));
            if t + 1 < size {
                cuts.push((t + 1, size - 1));
            }
        }
        None => {
            // members with t < i' leave the run after the word does
            let d = prog.exc_r as i64 - prog.ex_r as i64;
            let split = if d <= 0 { 0 } else { ((d + c.p as i64 - 1) / c.p as i64).min(size as i64) as usize };
            if split > 0 {
                cuts.push((0, split - 1));
            }
            if split < size {
                cuts.push((split, size - 1));
            }
        }
    }
    let mut out: Vec<(usize, usize, Ordering)> = Vec::new();
    for (t0, t1) in cuts {
        let o = text.cmp_suffixes(c.at(t0), s);
        match out.last_mut() {
            Some(last) if last.2 == o => last.1 = t1,
            _ => out.push((t0, t1, o)),
        }
    }
    out
}

/// The `t` ranges with `S^{s_t} < S^s` and `S^{s_t} > S^s`.
pub type LexIntervals = (Option<(usize, usize)>, Option<(usize, usize)>);

pub fn lex_intervals<T: TextView + ?Sized>(text: &T, prog: &Progression, s: usize) -> LexIntervals {
    let segs = lex_segments(text, prog, s);
    let span = |want: Ordering| -> Option<(usize, usize)> {
        let hits: Vec<usize> = (0..segs.len()).filter(|&q| segs[q].2 == want).collect();
        let (&first, &last) = (hits.first()?, hits.last()?);
        assert!(
            (first..=last).all(|q| segs[q].2 == want || segs[q].2 == Ordering::Equal),
            "order classes of a cluster must be consecutive"
        );
        Some((segs[first].0, segs[last].1))
    };
    (span(Ordering::Less), span(Ordering::Greater))
}
