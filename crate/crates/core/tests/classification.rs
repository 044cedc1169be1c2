use quadric_monads::bundle::{Atom, BundleExpr};
use quadric_monads::chow::QuadricSpace;
use quadric_monads::classify::{classify, counterexample_rank4, expected_results, ClassifyError, SearchConfig, Status};
use quadric_monads::monad::{dualize, MonadCandidate};

fn q(n: u32) -> QuadricSpace {
    QuadricSpace::new(n).unwrap()
}

#[test]
fn survivors_stable_in_the_twist_bound() {
    for n in 4..=8 {
        for rank in [2, 3] {
            let base = classify(&SearchConfig::new(n, rank).with_twist_bound(3)).unwrap();
            for t in 4..=6 {
                let r = classify(&SearchConfig::new(n, rank).with_twist_bound(t)).unwrap();
                assert_eq!(r.labels(), base.labels(), "Q_{n} rank {rank} T = {t}");
                assert!(r.matches_expected(), "Q_{n} rank {rank} T = {t}: {:?}", r.missing);
                for s in r.survivors.iter().filter(|s| !s.parameter_values.is_empty()) {
                    let want: Vec<i64> = (-t..=t).filter(|a| ![0, 1].contains(a)).collect();
                    assert_eq!(s.parameter_values, want);
                }
            }
        }
    }
}

#[test]
fn every_survivor_is_normalized_and_exists() {
    for n in 4..=8 {
        for rank in [2, 3] {
            let r = classify(&SearchConfig::new(n, rank)).unwrap();
            assert!(r.survivor_monads.iter().all(MonadCandidate::is_normalized));
            assert!(r.survivors.iter().all(|s| s.status == Status::Exists));
        }
    }
}

#[test]
fn pairs_under_duality() {
    let pairs = [
        (4, "0 -> S'(1) + S''(1) -> O(1)", "O -> S'(1) + S''(1) -> 0"),
        (5, "0 -> S(1) -> O(1)", "O -> S(1) -> 0"),
        // n = 6: the dual swaps the spinor families
        (6, "O -> S'(1) -> 0", "0 -> S''(1) -> O(1)"),
        (6, "O -> S''(1) -> 0", "0 -> S'(1) -> O(1)"),
    ];
    for (n, x, y) in pairs {
        let (x, y) = (MonadCandidate::parse(x, q(n)).unwrap(), MonadCandidate::parse(y, q(n)).unwrap());
        assert_eq!(dualize(&x).unwrap(), y);
        assert_eq!(dualize(&y).unwrap(), x);
    }
    // the family is self-dual up to the parameter: O(a) goes to O(1 - a)
    let f = MonadCandidate::parse("O -> O(3) + S'(1) + S''(1) -> O(1)", q(4)).unwrap();
    assert_eq!(dualize(&f).unwrap(), MonadCandidate::parse("O -> O(-2) + S'(1) + S''(1) -> O(1)", q(4)).unwrap());
}

#[test]
fn spinors_disabled_is_empty_at_wider_bounds() {
    for n in 4..=8 {
        for rank in [2, 3] {
            let cfg = SearchConfig::new(n, rank).with_twist_bound(6).without_spinors();
            let r = classify(&cfg).unwrap();
            assert!(r.survivors.is_empty());
            assert!(r.matches_expected());
        }
    }
}

#[test]
fn expected_lists() {
    let e = expected_results(q(5), 3).unwrap();
    let monads: Vec<&str> = e.iter().map(|x| x.monad.as_str()).collect();
    assert_eq!(monads, ["0 -> S(1) -> O(1)", "O -> S(1) -> 0", "O -> O(a) + S(1) -> O(1)"]);
    assert!(expected_results(q(8), 3).unwrap().is_empty());
    assert_eq!(expected_results(q(4), 2).unwrap()[0].monad, "O -> S'(1) + S''(1) -> O(1)");
    assert!(matches!(expected_results(q(4), 4), Err(ClassifyError::UnsupportedRank(4))));
}

#[test]
fn rank4_descriptor_always_has_rank_four() {
    for extra in 1..=4usize {
        let mut h = BundleExpr::from_atoms(q(4), [Atom::Spinor(quadric_monads::bundle::SpinorKind::Plus, 1)]).unwrap();
        for i in 0..extra + 2 {
            h.push(Atom::Line(i as i64 % 3), 1).unwrap();
        }
        let d = counterexample_rank4(&h).unwrap();
        assert_eq!(d.rank, 4);
    }
    let odd = BundleExpr::lines(q(5), &[0, 0, 0, 0, 0]);
    assert!(counterexample_rank4(&odd).is_err());
}
