//! Dynamic text: LCE queries, suffix comparisons, and the old/new views of
//! one edit.

use dynsa::dynstr::{DynamicString, EditOp, TextView};

fn main() {
    let mut s = DynamicString::new(b"abracadabra");
    println!("text      {}", String::from_utf8_lossy(&s.to_vec()));
    println!("lcp(1, 8) {}", s.lcp(1, 8).unwrap());
    println!("lcs(4, 11) {}", s.lcs(4, 11).unwrap());
    println!("cmp(1, 8) {:?}", s.suffix_cmp(1, 8).unwrap());

    // Keep a handle on the 'c' and watch it move.
    let c = s.handle_at(5);
    let dual = s.apply(EditOp::Insert { pos: 0, sym: b'x' }).unwrap();
    let old = dual.old_view();
    let new = dual.new_view();
    println!("old lcp(1, 8) {}", old.lce_fwd(1, 8));
    println!("new lcp(2, 9) {}", new.lce_fwd(2, 9));
    dual.commit();
    println!("'c' now at {}", s.position_of(c));

    s.apply_raw(EditOp::Substitute { pos: 9, sym: b'r' }).unwrap();
    s.apply_raw(EditOp::Delete { pos: 1 }).unwrap();
    println!("text      {}", String::from_utf8_lossy(&s.to_vec()));
}
