//! Stairs updates on a fixed-width store, and a p-normal interval sequence
//! folded into a handful of stairs.

use dynsa::stairs::{reduce_interval_sequence, FixedWidthStairs, PNormalSeq, RangeUpdate, StairsUpdate};

fn show(name: &str, vals: impl Iterator<Item = i64>) {
    let v: Vec<String> = vals.map(|x| x.to_string()).collect();
    println!("{name:<10} {}", v.join(" "));
}

fn main() {
    let mut st = FixedWidthStairs::new(3, 12);
    st.apply(StairsUpdate::decreasing(2, 10, 3)).unwrap();
    st.apply(StairsUpdate::increasing(4, 12, 3).negated()).unwrap();
    show("store", (1..=12).map(|x| st.read(x)));

    // intervals [max(1, 3t - 8), 3 + 3t] for t = 0..5, one +1 each
    let i = PNormalSeq::max(PNormalSeq::Fixed(1), PNormalSeq::arith(-8, 3));
    let j = PNormalSeq::arith(3, 3);
    let ups = reduce_interval_sequence(&i, &j, 5).unwrap();
    for u in &ups {
        match u {
            RangeUpdate::Stairs(s) => println!("stairs   {:?} [{}, {}] p={} sign={}", s.orientation, s.i, s.j, s.p, s.sign),
            RangeUpdate::Interval { i, j, x } => println!("interval [{i}, {j}] {x:+}"),
        }
    }
    show("reduced", (1..=16).map(|x| ups.iter().map(|u| u.value_at(x)).sum::<i64>()));
    show("direct", (1..=16).map(|x| (0..5).filter(|&t| i.at(t) <= x && x <= j.at(t)).count() as i64));
}
