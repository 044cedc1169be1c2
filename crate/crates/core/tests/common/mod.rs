#![allow(dead_code)]

use quadric_monads::bundle::{Atom, BundleExpr, SpinorKind};
use quadric_monads::chow::QuadricSpace;
use quadric_monads::cohomology::cohomology;
use quadric_monads::les::{LesError, LesSystem, TableId};

pub fn q(n: u32) -> QuadricSpace {
    QuadricSpace::new(n).unwrap()
}

pub fn bundle(n: u32, atoms: &[Atom]) -> BundleExpr {
    BundleExpr::from_atoms(q(n), atoms.iter().copied()).unwrap()
}

pub fn spinor_pair(t: i64) -> BundleExpr {
    bundle(4, &[Atom::Spinor(SpinorKind::Plus, t), Atom::Spinor(SpinorKind::Minus, t)])
}

/// Unknown tables for the kernel G and homology Z of `0 -> O -> S'(1)+S''(1) -> O(1) -> 0`.
pub struct Z4Chase {
    pub sys: LesSystem,
    pub g: TableId,
    pub z: TableId,
}

/// Chases
///   0 -> G -> B -> O(1) -> 0,         B = S'(1)+S''(1)
///   0 -> wedge2 G -> wedge2 B -> G(1) -> 0,  wedge2 G = G^dual(1) since det G = O(1)
///   0 -> O -> G -> Z -> 0,            Z^dual = Z(-1)
///   0 -> O(-1) -> B(-1) -> G^dual -> 0
pub fn z4_chase(window: std::ops::RangeInclusive<i64>) -> Result<Z4Chase, LesError> {
    let s = q(4);
    let mut sys = LesSystem::new(s, window);
    let b = spinor_pair(1);
    let bt = sys.add_known("B", &cohomology(&b));
    let wbt = sys.add_known("wedge2 B", &cohomology(&b.wedge2().unwrap()));
    let o = sys.add_known("O", &cohomology(&BundleExpr::lines(s, &[0])));
    let g = sys.add_unknown("G");
    let gd = sys.add_unknown("G^dual");
    let w = sys.add_unknown("wedge2 G");
    let z = sys.add_unknown("Z");
    let zd = sys.add_unknown("Z^dual");
    sys.add_sequence([(g, 0), (bt, 0), (o, 1)]);
    sys.add_sequence([(w, 0), (wbt, 0), (g, 1)]);
    sys.add_shift(w, gd, 1);
    sys.add_serre_pair(g, gd);
    sys.add_sequence([(o, 0), (g, 0), (z, 0)]);
    sys.add_shift(zd, z, -1);
    sys.add_serre_pair(z, zd);
    sys.add_sequence([(o, -1), (bt, -1), (gd, 0)]);
    sys.solve()?;
    Ok(Z4Chase { sys, g, z })
}
