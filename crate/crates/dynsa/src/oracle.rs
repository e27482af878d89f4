//! Brute-force reference answers.
//!
//! Everything here works on plain byte slices with 1-based positions in the
//! signatures and shares no code with the indexes it checks.

use std::cmp::Ordering;

fn suffix_order(t: &[u8], i: usize, j: usize) -> Ordering {
    t[i - 1..].cmp(&t[j - 1..])
}

/// Suffix start positions in lexicographic order.
pub fn naive_sa(text: &[u8]) -> Vec<usize> {
    let mut sa: Vec<usize> = (1..=text.len()).collect();
    sa.sort_by(|&a, &b| suffix_order(text, a, b));
    sa
}

/// `isa[i - 1]` is the rank of suffix `i`.
pub fn naive_isa(text: &[u8]) -> Vec<usize> {
    let mut isa = vec![0; text.len()];
    for (r, &p) in naive_sa(text).iter().enumerate() {
        isa[p - 1] = r + 1;
    }
    isa
}

pub fn naive_lcp(text: &[u8], i: usize, j: usize) -> usize {
    if i == 0 || j == 0 || i > text.len() || j > text.len() {
        return 0;
    }
    text[i - 1..].iter().zip(&text[j - 1..]).take_while(|(a, b)| a == b).count()
}

pub fn naive_lcs(text: &[u8], i: usize, j: usize) -> usize {
    if i == 0 || j == 0 || i > text.len() || j > text.len() {
        return 0;
    }
    text[..i].iter().rev().zip(text[..j].iter().rev()).take_while(|(a, b)| a == b).count()
}

/// `lcp[0]` is unused (0); `lcp[r - 1]` compares ranks `r - 1` and `r`.
pub fn naive_lcp_array(text: &[u8]) -> Vec<usize> {
    let sa = naive_sa(text);
    let mut out = vec![0; sa.len()];
    for r in 1..sa.len() {
        out[r] = naive_lcp(text, sa[r - 1], sa[r]);
    }
    out
}

pub fn naive_bwt(text: &[u8]) -> Vec<u8> {
    let n = text.len();
    naive_sa(text).iter().map(|&p| if p == 1 { text[n - 1] } else { text[p - 2] }).collect()
}

/// Number of suffixes sharing at least `k` symbols with suffix `i` that are
/// smaller than it.
pub fn naive_close_rank(text: &[u8], k: usize, i: usize) -> usize {
    (1..=text.len())
        .filter(|&j| j != i && naive_lcp(text, i, j) >= k && suffix_order(text, j, i) == Ordering::Less)
        .count()
}

/// Close ranks of every suffix, `out[i - 1]` for suffix `i`.
pub fn naive_close_ranks(text: &[u8], k: usize) -> Vec<usize> {
    let sa = naive_sa(text);
    let mut out = vec![0; text.len()];
    for r in 1..sa.len() {
        if naive_lcp(text, sa[r - 1], sa[r]) >= k {
            out[sa[r] - 1] = out[sa[r - 1] - 1] + 1;
        }
    }
    out
}

/// Start positions of every occurrence of `text[s..=e]`, ascending.
pub fn naive_occurrences(text: &[u8], s: usize, e: usize) -> Vec<usize> {
    let w = &text[s - 1..e];
    (1..=text.len() + 1 - w.len()).filter(|&q| &text[q - 1..q - 1 + w.len()] == w).collect()
}

/// Occurrences of `text[s..=e]` ordered by their suffixes.
pub fn naive_a_w(text: &[u8], s: usize, e: usize) -> Vec<usize> {
    let mut occ = naive_occurrences(text, s, e);
    occ.sort_by(|&a, &b| suffix_order(text, a, b));
    occ
}

/// The occurrences in [`naive_a_w`] whose left context matches that of `s`
/// for `l` symbols and whose right context matches that of `e` for `r`.
pub fn naive_a_lr(text: &[u8], s: usize, e: usize, l: usize, r: usize) -> Vec<usize> {
    let m = e + 1 - s;
    naive_a_w(text, s, e)
        .into_iter()
        .filter(|&q| {
            let left = if l == 0 { true } else { naive_lcs(text, s - 1, q - 1) >= l };
            let right = if r == 0 { true } else { naive_lcp(text, e + 1, q + m) >= r };
            left && right
        })
        .collect()
}

/// Applies a stairs update literally, step by step. `arr[0]` is index 1.
pub fn naive_stairs(arr: &mut [i64], i: usize, j: usize, p: usize, increasing: bool, sign: i64) {
    for x in i..=j {
        let step = if increasing { (x - i) / p + 1 } else { (j - x) / p + 1 };
        arr[x - 1] += sign * step as i64;
    }
}

/// Smallest period of `w` if it is at most `|w| / 2`, otherwise `|w|`.
pub fn naive_period(w: &[u8]) -> usize {
    let m = w.len();
    (1..=m / 2).find(|&p| (p..m).all(|q| w[q] == w[q - p])).unwrap_or(m)
}

/// Occurrences of `text[s..=e]` grouped into maximal progressions with
/// difference [`naive_period`]; each entry is `(first, last, period)`.
pub fn naive_por(text: &[u8], s: usize, e: usize) -> Vec<(usize, usize, usize)> {
    let p = naive_period(&text[s - 1..e]);
    let mut out: Vec<(usize, usize, usize)> = Vec::new();
    for q in naive_occurrences(text, s, e) {
        match out.last_mut() {
            Some(c) if c.1 + p == q => c.1 = q,
            _ => out.push((q, q, p)),
        }
    }
    out
}

/// Maximal intervals with period `p` and length at least `5p`, as
/// `(start, end, p)`, over every `p`.
pub fn naive_extreme_runs(text: &[u8]) -> Vec<(usize, usize, usize)> {
    let n = text.len();
    let mut out = Vec::new();
    for p in 1..=n / 5 {
        let mut start = 1;
        while start + p <= n {
            let mut end = start + p - 1;
            while end < n && text[end] == text[end - p] {
                end += 1;
            }
            let len = end + 1 - start;
            if len >= 5 * p {
                // keep only p as the smallest period of the run
                if (1..p).all(|q| p % q != 0 || (start + q..=end).any(|x| text[x - 1] != text[x - 1 - q])) {
                    out.push((start, end, p));
                }
            }
            if end == n {
                break;
            }
            start = end + 1 - p + 1;
        }
    }
    out.sort();
    out.dedup();
    out
}
