//! Dynamic text with LCE and suffix-comparison queries.
//!
//! The text lives in an implicit treap whose nodes carry polynomial
//! fingerprints (mod 2^61 - 1). LCE runs a galloping search over
//! fingerprint equality and then checks the symbols at the mismatch
//! boundary directly; if that check ever fails the query falls back to a
//! plain scan, so answers never depend on the absence of collisions.
//!
//! Positions are 1-based. Reads past either end behave like a symbol smaller
//! than every alphabet symbol, so a suffix that is a proper prefix of another
//! sorts first and LCE stops at the text end.
//!
//! Every tree node doubles as a stable *handle* for its character. Handles
//! survive inserts and deletes elsewhere, and [`DynamicString::position_of`]
//! recovers the current position in O(log n).

use std::cmp::Ordering;
use std::sync::OnceLock;

use thiserror::Error;

use crate::counters;

pub type Symbol = u8;
pub type Handle = u32;

const NIL: u32 = u32::MAX;
const MOD: u64 = (1 << 61) - 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TextError {
    #[error("symbol {symbol:#04x} at position {position} is outside the alphabet")]
    ForeignSymbol { position: usize, symbol: Symbol },
    #[error("position {position} is out of range {lo}..={hi}")]
    OutOfRange { position: usize, lo: usize, hi: usize },
    #[error("substitution at position {position} does not change the symbol")]
    TrivialSubstitution { position: usize },
}

/// An ordered set of permitted symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    member: [bool; 256],
}

impl Alphabet {
    /// Every byte value.
    pub fn bytes() -> Self {
        Alphabet { member: [true; 256] }
    }

    pub fn from_symbols(symbols: &[Symbol]) -> Self {
        let mut member = [false; 256];
        for &s in symbols {
            member[s as usize] = true;
        }
        Alphabet { member }
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.member[s as usize]
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        (0..=255u8).filter(|&s| self.contains(s)).collect()
    }
}

/// One edit. Insert places the symbol *after* `pos` (so `pos` may be 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EditOp {
    Substitute { pos: usize, sym: Symbol },
    Insert { pos: usize, sym: Symbol },
    Delete { pos: usize },
}

/// What an applied edit did, in terms of positions of the *new* text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Applied {
    Substituted { pos: usize, old: Symbol, handle: Handle },
    /// The new symbol sits at `pos`.
    Inserted { pos: usize, handle: Handle },
    /// `handle` is dead; positions after `pos` moved left by one.
    Deleted { pos: usize, old: Symbol, handle: Handle },
}

/// Read access shared by the live text and the pre-edit view.
pub trait TextView {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Symbol at `i`, or `None` outside `1..=n`.
    fn sym(&self, i: usize) -> Option<Symbol>;

    /// Longest common prefix of the suffixes at `i` and `j`; 0 if either is
    /// outside `1..=n`.
    fn lce_fwd(&self, i: usize, j: usize) -> usize;

    /// Longest common suffix of the prefixes ending at `i` and `j`; 0 if
    /// either is outside `1..=n`.
    fn lce_bwd(&self, i: usize, j: usize) -> usize;

    /// Order of suffixes `i` and `j`; `n + 1` is the empty suffix.
    fn cmp_suffixes(&self, i: usize, j: usize) -> Ordering {
        if i == j {
            return Ordering::Equal;
        }
        let l = self.lce_fwd(i, j);
        self.sym(i + l).cmp(&self.sym(j + l))
    }
}

struct Params {
    base: u64,
    seed: u64,
}

fn params() -> &'static Params {
    static P: OnceLock<Params> = OnceLock::new();
    P.get_or_init(|| {
        let seed: u64 = rand::random();
        // keep the base away from tiny values
        let base = (seed % (MOD - (1 << 20))) + (1 << 19);
        Params { base, seed }
    })
}

#[inline]
fn mulmod(a: u64, b: u64) -> u64 {
    let r = (a as u128) * (b as u128);
    let x = ((r as u64) & MOD) + ((r >> 61) as u64);
    if x >= MOD {
        x - MOD
    } else {
        x
    }
}

#[inline]
fn addmod(a: u64, b: u64) -> u64 {
    let x = a + b;
    if x >= MOD {
        x - MOD
    } else {
        x
    }
}

#[inline]
fn submod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + MOD - b
    }
}

/// The dynamic text.
#[derive(Clone)]
pub struct DynamicString {
    sym: Vec<Symbol>,
    pri: Vec<u32>,
    left: Vec<u32>,
    right: Vec<u32>,
    parent: Vec<u32>,
    size: Vec<u32>,
    hash: Vec<u64>,
    root: u32,
    pow: Vec<u64>,
    base: u64,
    rng: u64,
    alphabet: Alphabet,
    version: u64,
}

impl std::fmt::Debug for DynamicString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DynamicString")
            .field("text", &String::from_utf8_lossy(&self.to_vec()))
            .field("version", &self.version)
            .finish()
    }
}

impl DynamicString {
    /// Builds a text over the full byte alphabet.
    pub fn new(text: &[Symbol]) -> Self {
        Self::with_alphabet(text, Alphabet::bytes()).expect("every byte is in the byte alphabet")
    }

    pub fn with_alphabet(text: &[Symbol], alphabet: Alphabet) -> Result<Self, TextError> {
        if let Some(p) = text.iter().position(|&c| !alphabet.contains(c)) {
            return Err(TextError::ForeignSymbol { position: p + 1, symbol: text[p] });
        }
        let prm = params();
        let mut s = DynamicString {
            sym: Vec::with_capacity(text.len()),
            pri: Vec::with_capacity(text.len()),
            left: Vec::with_capacity(text.len()),
            right: Vec::with_capacity(text.len()),
            parent: Vec::with_capacity(text.len()),
            size: Vec::with_capacity(text.len()),
            hash: Vec::with_capacity(text.len()),
            root: NIL,
            pow: vec![1],
            base: prm.base,
            rng: prm.seed | 1,
            alphabet,
            version: 0,
        };
        s.grow_pow(text.len() + 1);
        s.build(text);
        Ok(s)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn len(&self) -> usize {
        self.sz(self.root)
    }

    pub fn is_empty(&self) -> bool {
        self.root == NIL
    }

    /// Number of handles ever allocated (live or dead).
    pub fn handle_capacity(&self) -> usize {
        self.sym.len()
    }

    pub fn to_vec(&self) -> Vec<Symbol> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = Vec::new();
        let mut x = self.root;
        loop {
            while x != NIL {
                stack.push(x);
                x = self.left[x as usize];
            }
            match stack.pop() {
                None => break,
                Some(y) => {
                    out.push(self.sym[y as usize]);
                    x = self.right[y as usize];
                }
            }
        }
        out
    }

    fn next_pri(&mut self) -> u32 {
        // xorshift64*
        self.rng ^= self.rng >> 12;
        self.rng ^= self.rng << 25;
        self.rng ^= self.rng >> 27;
        (self.rng.wrapping_mul(0x2545_F491_4F6C_DD1D) >> 32) as u32
    }

    fn grow_pow(&mut self, upto: usize) {
        while self.pow.len() <= upto {
            let last = *self.pow.last().unwrap();
            self.pow.push(mulmod(last, self.base));
        }
    }

    #[inline]
    fn sz(&self, x: u32) -> usize {
        if x == NIL {
            0
        } else {
            self.size[x as usize] as usize
        }
    }

    #[inline]
    fn hs(&self, x: u32) -> u64 {
        if x == NIL {
            0
        } else {
            self.hash[x as usize]
        }
    }

    fn alloc(&mut self, c: Symbol) -> u32 {
        let id = self.sym.len() as u32;
        let p = self.next_pri();
        self.sym.push(c);
        self.pri.push(p);
        self.left.push(NIL);
        self.right.push(NIL);
        self.parent.push(NIL);
        self.size.push(1);
        self.hash.push(c as u64 + 1);
        id
    }

    fn pull(&mut self, x: u32) {
        let (l, r) = (self.left[x as usize], self.right[x as usize]);
        let rs = self.sz(r);
        self.size[x as usize] = (self.sz(l) + 1 + rs) as u32;
        let v = self.sym[x as usize] as u64 + 1;
        let h = addmod(
            addmod(mulmod(self.hs(l), self.pow[rs + 1]), mulmod(v, self.pow[rs])),
            self.hs(r),
        );
        self.hash[x as usize] = h;
    }

    fn build(&mut self, text: &[Symbol]) {
        // Cartesian tree over random priorities.
        let mut stack: Vec<u32> = Vec::new();
        for &c in text {
            let x = self.alloc(c);
            let mut last = NIL;
            while let Some(&top) = stack.last() {
                if self.pri[top as usize] < self.pri[x as usize] {
                    last = stack.pop().unwrap();
                } else {
                    break;
                }
            }
            if last != NIL {
                self.left[x as usize] = last;
                self.parent[last as usize] = x;
            }
            if let Some(&top) = stack.last() {
                self.right[top as usize] = x;
                self.parent[x as usize] = top;
            }
            stack.push(x);
        }
        self.root = stack.first().copied().unwrap_or(NIL);
        // post-order aggregate computation
        if self.root == NIL {
            return;
        }
        let mut order = Vec::with_capacity(text.len());
        let mut st = vec![self.root];
        while let Some(x) = st.pop() {
            order.push(x);
            let (l, r) = (self.left[x as usize], self.right[x as usize]);
            if l != NIL {
                st.push(l);
            }
            if r != NIL {
                st.push(r);
            }
        }
        for &x in order.iter().rev() {
            self.pull(x);
        }
    }

    /// Node at 1-based position `i` (must be in range).
    fn node_at(&self, mut i: usize) -> u32 {
        let mut x = self.root;
        loop {
            let ls = self.sz(self.left[x as usize]);
            if i <= ls {
                x = self.left[x as usize];
            } else if i == ls + 1 {
                return x;
            } else {
                i -= ls + 1;
                x = self.right[x as usize];
            }
        }
    }

    /// Handle of the symbol currently at position `i`.
    pub fn handle_at(&self, i: usize) -> Handle {
        assert!(i >= 1 && i <= self.len(), "position {i} out of range");
        self.node_at(i)
    }

    /// Current position of a live handle.
    pub fn position_of(&self, h: Handle) -> usize {
        let mut x = h;
        let mut pos = self.sz(self.left[x as usize]) + 1;
        loop {
            let p = self.parent[x as usize];
            if p == NIL {
                break;
            }
            if self.right[p as usize] == x {
                pos += self.sz(self.left[p as usize]) + 1;
            }
            x = p;
        }
        debug_assert_eq!(x, self.root, "handle {h} is not live");
        pos
    }

    pub fn is_live(&self, h: Handle) -> bool {
        if (h as usize) >= self.sym.len() {
            return false;
        }
        let mut x = h;
        while self.parent[x as usize] != NIL {
            x = self.parent[x as usize];
        }
        x == self.root
    }

    pub fn char_at(&self, i: usize) -> Result<Symbol, TextError> {
        self.check(i, 1, self.len())?;
        Ok(self.sym[self.node_at(i) as usize])
    }

    fn check(&self, i: usize, lo: usize, hi: usize) -> Result<(), TextError> {
        if i < lo || i > hi {
            Err(TextError::OutOfRange { position: i, lo, hi })
        } else {
            Ok(())
        }
    }

    /// Fingerprint of the first `i` symbols.
    fn prefix_hash(&self, mut i: usize) -> u64 {
        let mut acc = 0u64;
        let mut x = self.root;
        while i > 0 {
            let l = self.left[x as usize];
            let ls = self.sz(l);
            if i <= ls {
                x = l;
                continue;
            }
            acc = addmod(mulmod(acc, self.pow[ls + 1]), mulmod(self.hs(l), self.base));
            acc = addmod(acc, self.sym[x as usize] as u64 + 1);
            i -= ls + 1;
            x = self.right[x as usize];
        }
        acc
    }

    /// Fingerprint of `S[i..i+len-1]` given the fingerprint of the first
    /// `i - 1` symbols.
    #[inline]
    fn window(&self, before: u64, i: usize, len: usize) -> u64 {
        submod(self.prefix_hash(i - 1 + len), mulmod(before, self.pow[len]))
    }

    fn rotate_up(&mut self, x: u32) {
        let y = self.parent[x as usize];
        let z = self.parent[y as usize];
        if self.left[y as usize] == x {
            let b = self.right[x as usize];
            self.left[y as usize] = b;
            if b != NIL {
                self.parent[b as usize] = y;
            }
            self.right[x as usize] = y;
        } else {
            let b = self.left[x as usize];
            self.right[y as usize] = b;
            if b != NIL {
                self.parent[b as usize] = y;
            }
            self.left[x as usize] = y;
        }
        self.parent[y as usize] = x;
        self.parent[x as usize] = z;
        if z == NIL {
            self.root = x;
        } else if self.left[z as usize] == y {
            self.left[z as usize] = x;
        } else {
            self.right[z as usize] = x;
        }
        self.pull(y);
        self.pull(x);
    }

    fn pull_to_root(&mut self, mut x: u32) {
        while x != NIL {
            self.pull(x);
            x = self.parent[x as usize];
        }
    }

    /// Applies `op` and returns both views of the text. The old view stays
    /// readable until the [`DualView`] is dropped or committed.
    pub fn apply(&mut self, op: EditOp) -> Result<DualView<'_>, TextError> {
        let applied = self.apply_raw(op)?;
        Ok(DualView { text: self, applied })
    }

    /// Applies `op` without producing a dual view.
    pub fn apply_raw(&mut self, op: EditOp) -> Result<Applied, TextError> {
        let n = self.len();
        let applied = match op {
            EditOp::Substitute { pos, sym } => {
                self.check(pos, 1, n)?;
                self.check_sym(pos, sym)?;
                let x = self.node_at(pos);
                let old = self.sym[x as usize];
                if old == sym {
                    return Err(TextError::TrivialSubstitution { position: pos });
                }
                self.sym[x as usize] = sym;
                self.pull_to_root(x);
                Applied::Substituted { pos, old, handle: x }
            }
            EditOp::Insert { pos, sym } => {
                self.check(pos, 0, n)?;
                self.check_sym(pos + 1, sym)?;
                self.grow_pow(n + 2);
                let x = self.alloc(sym);
                self.insert_node(x, pos);
                Applied::Inserted { pos: pos + 1, handle: x }
            }
            EditOp::Delete { pos } => {
                self.check(pos, 1, n)?;
                let x = self.node_at(pos);
                let old = self.sym[x as usize];
                self.delete_node(x);
                Applied::Deleted { pos, old, handle: x }
            }
        };
        self.version += 1;
        Ok(applied)
    }

    fn check_sym(&self, pos: usize, sym: Symbol) -> Result<(), TextError> {
        if self.alphabet.contains(sym) {
            Ok(())
        } else {
            Err(TextError::ForeignSymbol { position: pos, symbol: sym })
        }
    }

    /// Inserts detached node `x` so that `before` symbols precede it.
    fn insert_node(&mut self, x: u32, before: usize) {
        if self.root == NIL {
            self.root = x;
            return;
        }
        let mut cur = self.root;
        let mut k = before;
        loop {
            let ls = self.sz(self.left[cur as usize]);
            if k <= ls {
                let l = self.left[cur as usize];
                if l == NIL {
                    self.left[cur as usize] = x;
                    break;
                }
                cur = l;
            } else {
                k -= ls + 1;
                let r = self.right[cur as usize];
                if r == NIL {
                    self.right[cur as usize] = x;
                    break;
                }
                cur = r;
            }
        }
        self.parent[x as usize] = cur;
        while self.parent[x as usize] != NIL
            && self.pri[self.parent[x as usize] as usize] < self.pri[x as usize]
        {
            self.rotate_up(x);
        }
        self.pull_to_root(self.parent[x as usize]);
    }

    fn delete_node(&mut self, x: u32) {
        loop {
            let (l, r) = (self.left[x as usize], self.right[x as usize]);
            if l == NIL && r == NIL {
                break;
            }
            let c = if l == NIL {
                r
            } else if r == NIL || self.pri[l as usize] > self.pri[r as usize] {
                l
            } else {
                r
            };
            self.rotate_up(c);
        }
        let p = self.parent[x as usize];
        if p == NIL {
            self.root = NIL;
        } else {
            if self.left[p as usize] == x {
                self.left[p as usize] = NIL;
            } else {
                self.right[p as usize] = NIL;
            }
            self.parent[x as usize] = NIL;
            self.pull_to_root(p);
        }
    }

    /// Longest common prefix of `S[i..]` and `S[j..]`.
    pub fn lcp(&self, i: usize, j: usize) -> Result<usize, TextError> {
        self.check(i, 1, self.len())?;
        self.check(j, 1, self.len())?;
        Ok(self.lce_fwd(i, j))
    }

    /// Longest common suffix of `S[..=i]` and `S[..=j]`; index 0 is the empty
    /// prefix.
    pub fn lcs(&self, i: usize, j: usize) -> Result<usize, TextError> {
        self.check(i, 0, self.len())?;
        self.check(j, 0, self.len())?;
        Ok(self.lce_bwd(i, j))
    }

    pub fn suffix_cmp(&self, i: usize, j: usize) -> Result<Ordering, TextError> {
        self.check(i, 1, self.len())?;
        self.check(j, 1, self.len())?;
        Ok(self.cmp_suffixes(i, j))
    }

    /// Galloping search for the largest `len <= max` with `eq(len)`, given
    /// `eq(1)` holds.
    fn gallop(max: usize, mut eq: impl FnMut(usize) -> bool) -> usize {
        let mut good = 1;
        let mut len = 2;
        while len <= max && eq(len) {
            good = len;
            len *= 2;
        }
        let mut bad = len.min(max + 1);
        while bad - good > 1 {
            let mid = good + (bad - good) / 2;
            if eq(mid) {
                good = mid;
            } else {
                bad = mid;
            }
        }
        good
    }

    fn scan_fwd(&self, i: usize, j: usize) -> usize {
        let mut l = 0;
        while self.sym(i + l).is_some() && self.sym(i + l) == self.sym(j + l) {
            l += 1;
        }
        l
    }

    fn scan_bwd(&self, i: usize, j: usize) -> usize {
        let mut l = 0;
        while l < i.min(j) && self.sym(i - l) == self.sym(j - l) {
            l += 1;
        }
        l
    }
}

impl TextView for DynamicString {
    fn len(&self) -> usize {
        DynamicString::len(self)
    }

    fn sym(&self, i: usize) -> Option<Symbol> {
        if i == 0 || i > self.len() {
            None
        } else {
            Some(self.sym[self.node_at(i) as usize])
        }
    }

    fn lce_fwd(&self, i: usize, j: usize) -> usize {
        counters::lce_call();
        let n = self.len();
        if i == 0 || j == 0 || i > n || j > n {
            return 0;
        }
        if i == j {
            return n - i + 1;
        }
        if self.sym(i) != self.sym(j) {
            return 0;
        }
        let max = n + 1 - i.max(j);
        let (hi, hj) = (self.prefix_hash(i - 1), self.prefix_hash(j - 1));
        let l = Self::gallop(max, |len| self.window(hi, i, len) == self.window(hj, j, len));
        if l < max && self.sym(i + l) == self.sym(j + l) {
            return self.scan_fwd(i, j);
        }
        if l >= 1 && self.sym(i + l - 1) != self.sym(j + l - 1) {
            return self.scan_fwd(i, j);
        }
        l
    }

    fn lce_bwd(&self, i: usize, j: usize) -> usize {
        counters::lce_call();
        let n = self.len();
        if i == 0 || j == 0 || i > n || j > n {
            return 0;
        }
        if i == j {
            return i;
        }
        if self.sym(i) != self.sym(j) {
            return 0;
        }
        let max = i.min(j);
        let (hi, hj) = (self.prefix_hash(i), self.prefix_hash(j));
        let l = Self::gallop(max, |len| {
            let a = submod(hi, mulmod(self.prefix_hash(i - len), self.pow[len]));
            let b = submod(hj, mulmod(self.prefix_hash(j - len), self.pow[len]));
            a == b
        });
        if l < max && self.sym(i - l) == self.sym(j - l) {
            return self.scan_bwd(i, j);
        }
        if self.sym(i - l + 1) != self.sym(j - l + 1) {
            return self.scan_bwd(i, j);
        }
        l
    }
}

/// Both versions of the text during one update.
pub struct DualView<'a> {
    text: &'a DynamicString,
    applied: Applied,
}

impl<'a> DualView<'a> {
    pub fn new_view(&self) -> &'a DynamicString {
        self.text
    }

    pub fn old_view(&self) -> OldView<'a> {
        OldView::new(self.text, self.applied)
    }

    pub fn applied(&self) -> Applied {
        self.applied
    }

    /// Ends the transaction; only the new text remains.
    pub fn commit(self) -> Applied {
        self.applied
    }
}

/// The text as it was before one edit, expressed over the edited text.
#[derive(Clone, Copy)]
pub struct OldView<'a> {
    text: &'a DynamicString,
    applied: Applied,
    n: usize,
}

/// Where a position of the old text lives.
enum Loc {
    /// Same symbol as new-text position `pos`, valid for `run` more positions
    /// in the forward direction and `back` in the backward direction.
    Mapped { pos: usize, run: usize, back: usize },
    Literal(Symbol),
    Outside,
}

impl<'a> OldView<'a> {
    pub fn new(text: &'a DynamicString, applied: Applied) -> Self {
        let m = text.len();
        let n = match applied {
            Applied::Substituted { .. } => m,
            Applied::Inserted { .. } => m - 1,
            Applied::Deleted { .. } => m + 1,
        };
        OldView { text, applied, n }
    }

    fn loc(&self, q: usize) -> Loc {
        if q == 0 || q > self.n {
            return Loc::Outside;
        }
        let n = self.n;
        match self.applied {
            Applied::Substituted { pos, old, .. } => {
                if q == pos {
                    Loc::Literal(old)
                } else if q < pos {
                    Loc::Mapped { pos: q, run: pos - q, back: q }
                } else {
                    Loc::Mapped { pos: q, run: n - q + 1, back: q - pos }
                }
            }
            Applied::Inserted { pos, .. } => {
                // old q < pos maps to q; old q >= pos maps to q + 1
                if q < pos {
                    Loc::Mapped { pos: q, run: pos - q, back: q }
                } else {
                    Loc::Mapped { pos: q + 1, run: n - q + 1, back: q - pos + 1 }
                }
            }
            Applied::Deleted { pos, old, .. } => {
                if q == pos {
                    Loc::Literal(old)
                } else if q < pos {
                    Loc::Mapped { pos: q, run: pos - q, back: q }
                } else {
                    Loc::Mapped { pos: q - 1, run: n - q + 1, back: q - pos }
                }
            }
        }
    }
}

impl TextView for OldView<'_> {
    fn len(&self) -> usize {
        self.n
    }

    fn sym(&self, i: usize) -> Option<Symbol> {
        match self.loc(i) {
            Loc::Outside => None,
            Loc::Literal(c) => Some(c),
            Loc::Mapped { pos, .. } => self.text.sym(pos),
        }
    }

    fn lce_fwd(&self, i: usize, j: usize) -> usize {
        if i == j && i >= 1 && i <= self.n {
            return self.n - i + 1;
        }
        let (mut a, mut b, mut acc) = (i, j, 0);
        loop {
            match (self.loc(a), self.loc(b)) {
                (Loc::Outside, _) | (_, Loc::Outside) => return acc,
                (Loc::Mapped { pos: pa, run: ra, .. }, Loc::Mapped { pos: pb, run: rb, .. }) => {
                    let span = ra.min(rb);
                    let l = self.text.lce_fwd(pa, pb).min(span);
                    acc += l;
                    if l < span {
                        return acc;
                    }
                    a += span;
                    b += span;
                }
                _ => {
                    if self.sym(a) != self.sym(b) {
                        return acc;
                    }
                    acc += 1;
                    a += 1;
                    b += 1;
                }
            }
        }
    }

    fn lce_bwd(&self, i: usize, j: usize) -> usize {
        if i == j && i >= 1 && i <= self.n {
            return i;
        }
        let (mut a, mut b, mut acc) = (i, j, 0);
        loop {
            match (self.loc(a), self.loc(b)) {
                (Loc::Outside, _) | (_, Loc::Outside) => return acc,
                (Loc::Mapped { pos: pa, back: ba, .. }, Loc::Mapped { pos: pb, back: bb, .. }) => {
                    let span = ba.min(bb);
                    let l = self.text.lce_bwd(pa, pb).min(span);
                    acc += l;
                    if l < span {
                        return acc;
                    }
                    a -= span;
                    b -= span;
                }
                _ => {
                    if self.sym(a) != self.sym(b) {
                        return acc;
                    }
                    acc += 1;
                    a -= 1;
                    b -= 1;
                }
            }
        }
    }
}
