//! Points in a 3-d range tree: insert, remove, count, sum and report.

use dynsa::rangetree::{Range, RangeTree};

fn main() {
    let mut t = RangeTree::new(3).unwrap();
    let mut handles = Vec::new();
    for x in 0..20i64 {
        let h = t.insert(&[x, (x * 7) % 11, x % 3], x).unwrap();
        handles.push(h);
    }
    let q = Range::all(3).axis(0, 5, 15).at_most(1, 5).exactly(2, 1);
    println!("count {}  sum {}", t.count(&q).unwrap(), t.sum(&q).unwrap());

    for h in handles.iter().step_by(2) {
        t.remove(*h).unwrap();
    }
    let (count, sum) = t.count_sum(&q).unwrap();
    println!("after removing every other point: count {count}  sum {sum}");
    for p in t.report(&q).unwrap() {
        println!("  {:?} -> {}", p.coords, p.value);
    }
}
