//! Occurrences of a periodic word in suffix order, and counting those whose
//! context extends the word's.

use dynsa::dynstr::DynamicString;
use dynsa::ers::SortedOccView;
use dynsa::occindex::{por, KWordsTree};

fn main() {
    let text = b"bbbababbababbababbababbababaaa";
    let s = DynamicString::new(text);
    let w = b"ababbababba";
    let start = text.windows(w.len()).position(|q| q == w).unwrap() + 1;
    let len = w.len();
    let words = KWordsTree::build(&s, len);
    let half = KWordsTree::build(&s, len.div_ceil(2));
    let view = SortedOccView::build(&s, &por(&s, &words, &half, start, len));

    println!("word {:?}, period {}", String::from_utf8_lossy(&text[start - 1..start - 1 + len]), view.period());
    println!("{} occurrences, {} in decreasing clusters", view.len(), view.decreasing_len());
    for i in 1..=view.len() {
        let sel = view.select(i).unwrap();
        println!("  A[{i}] = {:>2}  {:?} rank {}", sel.pos, sel.class, sel.rank);
    }

    for (l, r) in [(0, 0), (1, 2), (3, 0), (0, 6)] {
        let n = view.extendable(l, r);
        let firsts: Vec<usize> = (1..=n.min(3)).map(|i| view.ers_select(l, r, i).unwrap()).collect();
        println!("(l={l}, r={r}): {n} extendable, first {firsts:?}");
    }
}
