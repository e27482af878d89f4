//! Static suffix array and LCP array, used when an index is (re)built.

/// Suffix array by prefix doubling with radix passes; positions are 1-based.
pub fn suffix_array(text: &[u8]) -> Vec<usize> {
    let n = text.len();
    if n == 0 {
        return Vec::new();
    }
    let mut sa: Vec<usize> = (0..n).collect();
    let mut rank: Vec<usize> = text.iter().map(|&c| c as usize + 1).collect();
    let mut tmp = vec![0usize; n];
    let mut cnt = vec![0usize; n.max(257) + 1];
    let mut h = 1;
    loop {
        let key2 = |i: usize, rank: &[usize]| if i + h < n { rank[i + h] } else { 0 };
        let m = cnt.len();
        // radix by second key then first key
        let mut by2 = vec![0usize; n];
        cnt.iter_mut().for_each(|c| *c = 0);
        for i in 0..n {
            cnt[key2(i, &rank)] += 1;
        }
        for v in 1..m {
            cnt[v] += cnt[v - 1];
        }
        for i in (0..n).rev() {
            let k = key2(i, &rank);
            cnt[k] -= 1;
            by2[cnt[k]] = i;
        }
        cnt.iter_mut().for_each(|c| *c = 0);
        for i in 0..n {
            cnt[rank[i]] += 1;
        }
        for v in 1..m {
            cnt[v] += cnt[v - 1];
        }
        for &i in by2.iter().rev() {
            cnt[rank[i]] -= 1;
            sa[cnt[rank[i]]] = i;
        }
        tmp[sa[0]] = 1;
        for r in 1..n {
            let (a, b) = (sa[r - 1], sa[r]);
            let same = rank[a] == rank[b] && key2(a, &rank) == key2(b, &rank);
            tmp[b] = tmp[a] + usize::from(!same);
        }
        std::mem::swap(&mut rank, &mut tmp);
        if rank[sa[n - 1]] == n || h >= n {
            break;
        }
        h *= 2;
    }
    sa.into_iter().map(|i| i + 1).collect()
}

/// Kasai's LCP array: `lcp[r]` is the common prefix of ranks `r` and `r + 1`
/// (0-based `r`, so `lcp[0] = 0`).
pub fn lcp_array(text: &[u8], sa: &[usize]) -> Vec<usize> {
    let n = text.len();
    let mut rank = vec![0; n];
    for (r, &p) in sa.iter().enumerate() {
        rank[p - 1] = r;
    }
    let mut lcp = vec![0; n];
    let mut h = 0usize;
    for i in 0..n {
        if rank[i] > 0 {
            let j = sa[rank[i] - 1] - 1;
            while i + h < n && j + h < n && text[i + h] == text[j + h] {
                h += 1;
            }
            lcp[rank[i]] = h;
            h = h.saturating_sub(1);
        } else {
            h = 0;
        }
    }
    lcp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;

    #[test]
    fn small() {
        assert_eq!(suffix_array(b"banana"), [6, 4, 2, 1, 5, 3]);
        assert_eq!(lcp_array(b"banana", &[6, 4, 2, 1, 5, 3]), [0, 1, 3, 0, 0, 2]);
        assert!(suffix_array(b"").is_empty());
        assert_eq!(suffix_array(b"aaaa"), [4, 3, 2, 1]);
    }

    proptest! {
        #[test]
        fn matches_naive(t in proptest::collection::vec(0u8..3, 0..120)) {
            let sa = suffix_array(&t);
            prop_assert_eq!(&sa, &oracle::naive_sa(&t));
            prop_assert_eq!(lcp_array(&t, &sa), oracle::naive_lcp_array(&t));
        }
    }
}
