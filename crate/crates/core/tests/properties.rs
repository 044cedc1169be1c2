mod common;

use proptest::prelude::*;

use common::q;
use quadric_monads::bundle::{twist_chern, Atom, BundleExpr, SpinorKind};
use quadric_monads::chow::ChowClass;
use quadric_monads::monad::{check_theorem_conditions, dualize, MonadCandidate};
use quadric_monads::parse::{parse_bundle_expr, parse_chow_expr};

fn class(n: u32) -> impl Strategy<Value = ChowClass> {
    let s = q(n);
    let basis = s.basis();
    prop::collection::vec(-5i64..=5, basis.len())
        .prop_map(move |cs| ChowClass::from_terms(s, &basis.iter().copied().zip(cs).collect::<Vec<_>>()))
}

fn atom(n: u32) -> impl Strategy<Value = Atom> {
    let kinds: Vec<SpinorKind> = if n.is_multiple_of(2) { vec![SpinorKind::Plus, SpinorKind::Minus] } else { vec![SpinorKind::Odd] };
    prop_oneof![
        (-4i64..=4).prop_map(Atom::Line),
        (prop::sample::select(kinds), -4i64..=4).prop_map(|(k, t)| Atom::Spinor(k, t)),
    ]
}

fn bundle(n: u32, max: usize) -> impl Strategy<Value = BundleExpr> {
    prop::collection::vec(atom(n), 0..=max).prop_map(move |v| BundleExpr::from_atoms(q(n), v).unwrap())
}

fn monad4() -> impl Strategy<Value = MonadCandidate> {
    (
        prop::collection::vec(-3i64..=3, 0..=1),
        bundle(4, 4),
        prop::collection::vec(-3i64..=4, 0..=1),
    )
        .prop_filter_map("valid candidate", |(a, b, c)| {
            MonadCandidate::new(BundleExpr::lines(q(4), &a), b, BundleExpr::lines(q(4), &c)).ok()
        })
}

proptest! {
    #[test]
    fn ring_axioms((x, y, z) in (4u32..=7).prop_flat_map(|n| (class(n), class(n), class(n)))) {
        let m = |u: &ChowClass, v: &ChowClass| u.mul(v).unwrap();
        prop_assert_eq!(m(&m(&x, &y), &z), m(&x, &m(&y, &z)));
        prop_assert_eq!(m(&x, &y), m(&y, &x));
        prop_assert_eq!(m(&x, &y.add(&z).unwrap()), m(&x, &y).add(&m(&x, &z)).unwrap());
        prop_assert_eq!(m(&x, &ChowClass::one(x.space())), x);
    }

    #[test]
    fn division_undoes_multiplication(x in class(4), k in -3i64..=3) {
        // any class with constant term 1 is a unit
        let unit = ChowClass::one(q(4)).add(&ChowClass::hyperplane(q(4), k)).unwrap();
        prop_assert_eq!(x.mul(&unit).unwrap().divide(&unit).unwrap(), x);
    }

    #[test]
    fn whitney_sum(e in bundle(4, 3), f in bundle(4, 3)) {
        let sum = e.direct_sum(&f).unwrap();
        prop_assert_eq!(sum.total_chern().unwrap(), e.total_chern().unwrap().mul(&f.total_chern().unwrap()).unwrap());
    }

    #[test]
    fn twisting_chern_classes(e in bundle(4, 3), t in -3i64..=3) {
        let c = e.total_chern().unwrap();
        prop_assert_eq!(twist_chern(&c, e.rank(), t), e.twist(t).total_chern().unwrap());
    }

    #[test]
    fn rank_invariants(e in (4u32..=8).prop_flat_map(|n| bundle(n, 4)), t in -3i64..=3) {
        let r = e.rank();
        prop_assert_eq!(e.twist(t).rank(), r);
        prop_assert_eq!(e.dual().unwrap().rank(), r);
        prop_assert_eq!(e.wedge2().unwrap().rank(), r * r.saturating_sub(1) / 2);
        let lines = e.line_part();
        let l = lines.rank();
        prop_assert_eq!(lines.sym2().unwrap().rank(), l * (l + 1) / 2);
        if e.space().n() >= 5 {
            prop_assert_eq!(e.restrict().unwrap().rank(), r);
        }
    }

    #[test]
    fn twist_and_dual_round_trips(e in (4u32..=8).prop_flat_map(|n| bundle(n, 4)), t in -4i64..=4) {
        prop_assert_eq!(e.twist(t).twist(-t), e.clone());
        prop_assert_eq!(e.dual().unwrap().dual().unwrap(), e.clone());
        prop_assert_eq!(e.twist(t).dual().unwrap(), e.dual().unwrap().twist(-t));
    }

    #[test]
    fn lifts_restrict_back(e in (4u32..=7).prop_flat_map(|n| bundle(n, 4))) {
        for lift in e.lift_candidates() {
            prop_assert_eq!(lift.restrict().unwrap(), e.clone());
        }
    }

    #[test]
    fn display_parses_back(e in (4u32..=8).prop_flat_map(|n| bundle(n, 4))) {
        prop_assert_eq!(parse_bundle_expr(&e.to_string(), e.space()).unwrap(), e);
    }

    #[test]
    fn chow_display_parses_back(x in class(4)) {
        prop_assert_eq!(parse_chow_expr(&x.to_string(), q(4)).unwrap(), x);
    }

    #[test]
    fn normalization(m in monad4(), t in -3i64..=3) {
        // with A = C = 0 there is no twist to pin
        prop_assume!(!(m.a().is_empty() && m.c().is_empty()));
        let norm = m.normalize();
        prop_assert!(norm.is_normalized());
        prop_assert_eq!(norm.normalize(), norm.clone());
        prop_assert_eq!(m.twist(t).normalize(), norm);
        prop_assert_eq!(dualize(&dualize(&m).unwrap()).unwrap(), m.normalize());
    }

    #[test]
    fn conditions_swap_under_duality(m in monad4()) {
        let r = check_theorem_conditions(&m).unwrap();
        let d = check_theorem_conditions(&dualize(&m).unwrap()).unwrap();
        prop_assert_eq!(r.verdict("condition_1"), d.verdict("condition_2"));
        prop_assert_eq!(r.verdict("condition_2"), d.verdict("condition_1"));
        prop_assert_eq!(r.verdict("condition_3"), d.verdict("condition_3"));
    }
}
