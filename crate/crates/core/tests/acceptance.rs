//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::time::{Duration, Instant};

use common::{q, spinor_pair, z4_chase};
use quadric_monads::bundle::BundleExpr;
use quadric_monads::chow::{Basis, ChowClass};
use quadric_monads::classify::{classify, classify_rank2, classify_rank3, counterexample_rank4, SearchConfig};
use quadric_monads::cohomology::{betti0, cohomology};
use quadric_monads::monad::{
    check_monad, check_theorem_conditions, condition_1_parts, dualize, restrict_monad, MonadCandidate, Mode,
    Verdict,
};
use quadric_monads::parse::parse_bundle_expr;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let spent = start.elapsed();
    ensure(spent < limit, format!("took {spent:?}, limit {limit:?}"))
}

fn c1_chow() -> Check {
    let start = Instant::now();
    for n in 4..=7 {
        let s = q(n);
        let d = ChowClass::hyperplane(s, 1).pow(n).degree();
        ensure(d == 2, format!("deg h^{n} = {d} on Q_{n}"))?;
    }
    let mut checked = 0u64;
    for n in 4..=7 {
        let s = q(n);
        let basis = s.basis();
        for &x in &basis {
            for &y in &basis {
                for &z in &basis {
                    for p in -2..=2 {
                        for r in -2..=2 {
                            let (px, ry, z1) = (ChowClass::term(s, x, p), ChowClass::term(s, y, r), ChowClass::basis(s, z));
                            let m = |u: &ChowClass, v: &ChowClass| u.mul(v).unwrap();
                            ensure(m(&m(&px, &ry), &z1) == m(&px, &m(&ry, &z1)), format!("associativity {x:?} {y:?} {z:?}"))?;
                            ensure(m(&px, &ry) == m(&ry, &px), format!("commutativity {x:?} {y:?}"))?;
                            let sum = ry.add(&z1).unwrap();
                            ensure(
                                m(&px, &sum) == m(&px, &ry).add(&m(&px, &z1)).unwrap(),
                                format!("distributivity {x:?} {y:?} {z:?}"),
                            )?;
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    within(Duration::from_secs(1), start)?;
    Ok(format!("deg h^n = 2 on Q_4..Q_7; {checked} axiom instances"))
}

fn c2_c4_spinor_pair() -> Check {
    let c = spinor_pair(1).total_chern().map_err(|e| e.to_string())?;
    let c4 = c.component(4);
    ensure(c4.is_zero(), format!("c_4 = {c4}"))?;
    Ok(format!("c(S'(1)+S''(1)) = {c}"))
}

fn c3_kernel_c3() -> Check {
    let s = q(4);
    for b in -3..=6i64 {
        let pair = spinor_pair(1 + b);
        let c = pair
            .total_chern()
            .unwrap()
            .divide(&BundleExpr::lines(s, &[1 + b]).total_chern().unwrap())
            .map_err(|e| e.to_string())?;
        let c3 = c.component(3).coeff(Basis::L(3));
        let closed = 2 * b * (1 + b + b * b);
        ensure(c3 == closed, format!("b = {b}: c_3 = {c3}, want {closed}"))?;
        // the unsimplified form 2(1+b+b^2)(b+b^2)/(1+b), cleared of its denominator
        if b != -1 {
            ensure(c3 * (1 + b) == 2 * (1 + b + b * b) * (b + b * b), format!("b = {b}: unsimplified form"))?;
        }
        ensure((c3 == 0) == (b == 0), format!("b = {b}: zero iff b = 0"))?;
    }
    Ok("c_3 = 2b(1+b+b^2) l_3 on b in [-3, 6], zero only at b = 0".into())
}

fn c4_theorem_checker() -> Check {
    let s = q(4);
    let m = |src: &str| MonadCandidate::parse(src, s).unwrap();
    for a in [-3, 2, 5] {
        let r = check_theorem_conditions(&m(&format!("O -> O({a}) + S'(1) + S''(1) -> O(1)"))).unwrap();
        ensure(!r.fatal && !r.has_unknown(), format!("(5) with a = {a}: {:?}", r.verdicts))?;
    }
    let split = check_theorem_conditions(&m("0 -> O(1) + O(1) + O(2) -> O(3)")).unwrap();
    ensure(split.verdict("condition_1") == Some(Verdict::Fail), "split B passes condition 1")?;
    let doubled = check_theorem_conditions(&m("O -> S'(1) + S'(1) + S''(1) -> O(1)")).unwrap();
    ensure(doubled.verdict("condition_3") == Some(Verdict::Fail), "doubled S' passes condition 3")?;
    let h1 = cohomology(&parse_bundle_expr("S'*S''", s).unwrap()).row(1).clone();
    let b0 = betti0(&h1).map_err(|e| e.to_string())?;
    ensure(b0 == 1, format!("beta_0(H^1_*(S'*S'')) = {b0}"))?;
    Ok("(5) passes; split B fails 1; doubled S' fails 3; beta_0 = 1".into())
}

fn c5_betti_equation() -> Check {
    let s = q(4);
    let mut survivors = 0;
    for b in -4..=4i64 {
        for c in -4..=4i64 {
            for d in -4..=4i64 {
                let p = parse_bundle_expr(&format!("S'({}) + S''({})", 1 + b, 1 + c), s).unwrap();
                let (v, _) = condition_1_parts(&p, &BundleExpr::lines(s, &[d])).map_err(|e| e.to_string())?;
                let expect = 2 + b + c == 2 * d;
                ensure((v == Verdict::Pass) == expect, format!("(b, c, d) = ({b}, {c}, {d}): {v}"))?;
                survivors += expect as u32;
            }
        }
    }
    Ok(format!("{survivors} of 729 triples survive, exactly the solutions of 2+b+c = 2d"))
}

fn c6_rank3_lists() -> Check {
    let start = Instant::now();
    let want: [(u32, &[&str]); 5] = [
        (4, &["(1)", "(2)", "(5)"]),
        (5, &["(3)", "(4)", "(5')"]),
        (6, &["(6)", "(7)", "(8)", "(9)"]),
        (7, &[]),
        (8, &[]),
    ];
    for t in [3, 5] {
        for (n, w) in want {
            let r = classify_rank3(&SearchConfig::new(n, 3).with_twist_bound(t)).map_err(|e| e.to_string())?;
            ensure(r.labels() == w, format!("Q_{n}, T = {t}: {:?}", r.labels()))?;
            ensure(r.matches_expected(), format!("Q_{n}, T = {t}: missing {:?}", r.missing))?;
        }
    }
    within(Duration::from_secs(10), start)?;
    Ok(format!("Q_4..Q_8 at T = 3, 5 in {:?}", start.elapsed()))
}

fn c7_rank2_lists() -> Check {
    let start = Instant::now();
    let want: [(u32, &[&str]); 3] = [(4, &["Z4"]), (5, &["Z5"]), (6, &[])];
    for (n, w) in want {
        let r = classify_rank2(&SearchConfig::new(n, 2)).map_err(|e| e.to_string())?;
        ensure(r.labels() == w, format!("Q_{n}: {:?}", r.labels()))?;
        ensure(r.matches_expected(), format!("Q_{n}: missing {:?}", r.missing))?;
    }
    within(Duration::from_secs(5), start)?;
    Ok(format!("Q_4, Q_5, Q_6 in {:?}", start.elapsed()))
}

fn c8_z4_h1() -> Check {
    let c = z4_chase(-16..=16).map_err(|e| e.to_string())?;
    let z = c.sys.table(c.z);
    for t in -6..=6 {
        let v = z.value(1, t);
        ensure(v == Some(u64::from(t == -1)), format!("h^1(Z_4({t})) = {v:?}"))?;
    }
    Ok("h^1(Z_4(t)) = 1 at t = -1, 0 elsewhere on [-6, 6]".into())
}

fn c9_closure() -> Check {
    let mut pairs = 0;
    let mut restricted = 0;
    for n in 4..=6 {
        for rank in [2, 3] {
            let cfg = SearchConfig::new(n, rank);
            let r = classify(&cfg).map_err(|e| e.to_string())?;
            let lower = if n >= 5 { Some(classify(&SearchConfig::new(n - 1, rank)).map_err(|e| e.to_string())?) } else { None };
            for m in &r.survivor_monads {
                let d = dualize(m).map_err(|e| e.to_string())?;
                let inside = [d.a(), d.b(), d.c()]
                    .iter()
                    .all(|e| e.atoms().all(|(a, _)| twist_of(&a).abs() <= cfg.twist_bound));
                if inside {
                    ensure(r.survivor_monads.contains(&d), format!("dual of {m} is {d}, not a survivor"))?;
                    pairs += 1;
                }
                if let Some(lower) = &lower {
                    let low = restrict_monad(m).map_err(|e| e.to_string())?;
                    ensure(check_monad(&low, Mode::FirstFatal).first_fatal().is_none(), format!("{m} restricts to {low}"))?;
                    ensure(lower.survivor_monads.contains(&low), format!("{low} not among Q_{} survivors", n - 1))?;
                    restricted += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} duals inside the bounds are survivors; {restricted} restrictions are survivors"))
}

fn twist_of(a: &quadric_monads::bundle::Atom) -> i64 {
    use quadric_monads::bundle::Atom;
    match *a {
        Atom::Line(t) | Atom::Spinor(_, t) => t,
        _ => i64::MAX,
    }
}

fn c10_no_spinors() -> Check {
    let start = Instant::now();
    for n in 4..=8 {
        for rank in [2, 3] {
            let r = classify(&SearchConfig::new(n, rank).without_spinors())
                .map_err(|e| e.to_string())?;
            ensure(r.survivors.is_empty(), format!("Q_{n} rank {rank}: {:?}", r.survivors))?;
        }
    }
    within(Duration::from_secs(5), start)?;
    Ok(format!("empty on Q_4..Q_8, ranks 2 and 3, in {:?}", start.elapsed()))
}

fn c11_rank4() -> Check {
    let h = parse_bundle_expr("S' + S'' + O(1)", q(4)).unwrap();
    let d = counterexample_rank4(&h).map_err(|e| e.to_string())?;
    ensure(d.rank == 4, format!("rank {}", d.rank))?;
    ensure(d.inner_cohomology == Verdict::Pass, format!("inner cohomology {}", d.inner_cohomology))?;
    ensure(d.chern_class == Some(h.total_chern().unwrap()), "Chern class differs from c(H)")?;
    Ok(format!("rank 4, c = {}, H^2_* = 0 on [{}, {}]", d.chern, d.window.0, d.window.1))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("Chow consistency", c1_chow),
        ("c_4(S'(1)+S''(1)) = 0", c2_c4_spinor_pair),
        ("c_3(G_4(b))", c3_kernel_c3),
        ("theorem checker", c4_theorem_checker),
        ("graded Betti equation", c5_betti_equation),
        ("rank-3 lists", c6_rank3_lists),
        ("rank-2 lists", c7_rank2_lists),
        ("LES oracle for Z_4", c8_z4_h1),
        ("duality and restriction closure", c9_closure),
        ("spinors disabled", c10_no_spinors),
        ("rank-4 construction", c11_rank4),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
