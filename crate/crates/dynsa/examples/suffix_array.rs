//! Suffix array, BWT and LCP entries while inserting, deleting and
//! substituting.

use dynsa::dsa::DynamicSa;
use dynsa::dynstr::EditOp;

fn row(sa: &DynamicSa) {
    let n = sa.len();
    let sav: Vec<usize> = (1..=n).map(|i| sa.sa(i).unwrap()).collect();
    let bwt: String = (1..=n).map(|i| char::from(sa.bwt(i).unwrap())).collect();
    let lcp: Vec<usize> = (2..=n).map(|i| sa.lcp_entry(i).unwrap()).collect();
    println!("sa {sav:?}\nbwt {bwt}\nlcp - {lcp:?}\n");
}

fn main() {
    let mut sa = DynamicSa::new(b"mississippi").unwrap();
    row(&sa);
    sa.apply(EditOp::Insert { pos: 11, sym: b's' }).unwrap();
    row(&sa);
    sa.apply(EditOp::Delete { pos: 1 }).unwrap();
    sa.apply(EditOp::Substitute { pos: 4, sym: b'p' }).unwrap();
    row(&sa);
}
