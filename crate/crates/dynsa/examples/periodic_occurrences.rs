//! k-words tree, periodic occurrence representation, and extremely periodic
//! runs.

use dynsa::dynstr::DynamicString;
use dynsa::occindex::{por, run_with_period, KWordsTree};

fn main() {
    let s = DynamicString::new(b"BAABBABBABBABBABBABAB");
    let words = KWordsTree::build(&s, 7);
    let half = KWordsTree::build(&s, 4);

    let v = words.node_of(&s, 4);
    println!("word at 4 occurs at {:?}", words.occurrences(&s, v));
    println!("{} suffixes start with a smaller 7-word", words.left_count(v));

    let p = por(&s, &words, &half, 4, 7);
    println!("period {}", p.p);
    for c in &p.clusters {
        println!("cluster a={} b={} size={}", c.a, c.b, c.size());
    }

    let run = run_with_period(&s, 4, 3);
    println!("run [{}, {}] p={} extremely periodic: {}", run.start, run.end, run.p, run.is_extremely_periodic());
}
