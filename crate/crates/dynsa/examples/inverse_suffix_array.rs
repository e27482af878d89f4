//! Inverted suffix array under substitutions, checked against a full sort.

use dynsa::csr::DynamicIsa;
use dynsa::dynstr::EditOp;
use dynsa::oracle::naive_isa;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut text: Vec<u8> = b"ab".iter().cycle().take(300).copied().collect();
    let mut idx = DynamicIsa::new(&text).unwrap();
    println!("n = {}, k = {}", idx.len(), idx.k());

    for round in 0..200 {
        let pos = rng.gen_range(1..=text.len());
        let sym = if text[pos - 1] == b'a' { b'b' } else { b'a' };
        text[pos - 1] = sym;
        idx.apply(EditOp::Substitute { pos, sym }).unwrap();
        if round % 50 == 49 {
            let want = naive_isa(&text);
            let ok = (1..=text.len()).all(|i| idx.isa(i) == want[i - 1]);
            println!("after {:>3} edits: isa(1) = {:>3}, matches sort: {ok}", round + 1, idx.isa(1));
        }
    }
    let st = idx.stats();
    println!("stairs stored {}, expanded {}, registered runs {}", st.stairs_stored, st.stairs_expanded, idx.registry_len());
    idx.check_invariants().unwrap();
}
