use dynsa::cli::{apply_plain, random_text, Shape};
use dynsa::csr::DynamicIsa;
use dynsa::dsa::DynamicSa;
use dynsa::dynstr::EditOp;
use dynsa::oracle;
use dynsa::EpochPolicy;
use proptest::prelude::*;

fn edit() -> impl Strategy<Value = (u8, usize, u8)> {
    (0u8..3, 0usize..1000, prop::sample::select(b"abc".to_vec()))
}

/// Turns raw draws into an edit valid for `text`.
fn concrete(text: &[u8], (kind, at, sym): (u8, usize, u8), subs_only: bool) -> Option<EditOp> {
    let n = text.len();
    let kind = if subs_only { 0 } else { kind };
    match kind {
        1 => Some(EditOp::Insert { pos: at % (n + 1), sym }),
        2 if n > 1 => Some(EditOp::Delete { pos: 1 + at % n }),
        _ => {
            let pos = 1 + at % n;
            (text[pos - 1] != sym).then_some(EditOp::Substitute { pos, sym })
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn isa_tracks_substitutions(text in prop::collection::vec(prop::sample::select(b"abc".to_vec()), 1..70),
                                edits in prop::collection::vec(edit(), 1..40),
                                k in prop::option::of(1usize..8)) {
        let mut plain = text.clone();
        let mut idx = DynamicIsa::with_policy(&text, EpochPolicy { isa_k: k, ..EpochPolicy::default() }).unwrap();
        for e in edits {
            let Some(op) = concrete(&plain, e, true) else { continue };
            apply_plain(&mut plain, op);
            idx.apply(op).unwrap();
            let want = oracle::naive_isa(&plain);
            for i in 1..=plain.len() {
                prop_assert_eq!(idx.isa(i), want[i - 1]);
            }
            prop_assert!(idx.check_invariants().is_ok());
        }
    }

    #[test]
    fn sa_tracks_edits(text in prop::collection::vec(prop::sample::select(b"abc".to_vec()), 1..50),
                       edits in prop::collection::vec(edit(), 1..25),
                       k in prop::option::of(1usize..12)) {
        let mut plain = text.clone();
        let mut sa = DynamicSa::with_policy(&text, EpochPolicy { sa_k: k, ..EpochPolicy::default() }).unwrap();
        for e in edits {
            let Some(op) = concrete(&plain, e, false) else { continue };
            apply_plain(&mut plain, op);
            sa.apply(op).unwrap();
            let want = oracle::naive_sa(&plain);
            for i in 1..=plain.len() {
                prop_assert_eq!(sa.sa(i).unwrap(), want[i - 1]);
            }
        }
    }
}

#[test]
fn periodic_shapes_both_engines() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for round in 0..6 {
        let n = 120 + 40 * round;
        let mut text = random_text(&mut rng, n, b"ab", Shape::Periodic);
        let mut idx = DynamicIsa::new(&text).unwrap();
        let mut sa = DynamicSa::new(&text).unwrap();
        for _ in 0..40 {
            let pos = rng.gen_range(1..=text.len());
            let sym = if text[pos - 1] == b'a' { b'b' } else { b'a' };
            let op = EditOp::Substitute { pos, sym };
            apply_plain(&mut text, op);
            idx.apply(op).unwrap();
            sa.apply(op).unwrap();
        }
        let isa = oracle::naive_isa(&text);
        let want = oracle::naive_sa(&text);
        for i in 1..=text.len() {
            assert_eq!(idx.isa(i), isa[i - 1]);
            assert_eq!(sa.sa(i).unwrap(), want[i - 1]);
        }
        idx.check_invariants().unwrap();
    }
}

#[test]
fn epoch_boundary_rebuilds() {
    // n = 27 -> k = 9; growing to 28 moves k to 10
    let mut text = b"abaababaabaababaababaabaaba".to_vec();
    let mut sa = DynamicSa::new(&text).unwrap();
    assert_eq!(sa.k(), 9);
    for (pos, sym) in [(3, b'b'), (0, b'a'), (10, b'b')] {
        let op = EditOp::Insert { pos, sym };
        apply_plain(&mut text, op);
        sa.apply(op).unwrap();
        let want = oracle::naive_sa(&text);
        assert_eq!((1..=text.len()).map(|i| sa.sa(i).unwrap()).collect::<Vec<_>>(), want);
    }
    assert!(sa.rebuilds() >= 1);
}
