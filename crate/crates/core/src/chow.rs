//! Integral Chow ring of a smooth quadric hypersurface.
//!
//! For `Q_n` with `m = floor(n/2)` the additive basis is
//!
//! * `h^i` for codimension `i < m` (and `i = m` when `n` is odd),
//! * the two classes `a`, `b` of maximal linear subspaces in codimension `m` when `n` is even,
//! * linear subspace classes `l_i` for `m < i < n`, and the point class `pt = l_n`.
//!
//! Multiplication uses `h^m = a + b` (even `n`), `h^{m+1} = 2 l_{m+1}`, `h * a = h * b = l_{m+1}`,
//! `h * l_i = l_{i+1}`, and the middle intersection numbers from [`MIDDLE_PRODUCTS`].

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChowError {
    #[error("quadric dimension must be at least 2, got {0}")]
    BadDimension(u32),
    #[error("classes live on different quadrics (Q_{0} vs Q_{1})")]
    SpaceMismatch(u32, u32),
    #[error("{0} is not divisible by {1}")]
    NotDivisible(String, String),
    #[error("quotient of {0} by {1} is not unique")]
    NonUnique(String, String),
    #[error("division by the zero class")]
    DivisionByZero,
    #[error("unknown basis label `{0}` on Q_{1}")]
    UnknownLabel(String, u32),
}

/// A smooth quadric `Q_n` in `P^{n+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadricSpace {
    n: u32,
}

impl QuadricSpace {
    pub fn new(n: u32) -> Result<Self, ChowError> {
        if n < 2 {
            return Err(ChowError::BadDimension(n));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.n / 2
    }

    pub fn is_even(&self) -> bool {
        self.n.is_multiple_of(2)
    }

    /// Degree `a` with `omega = O(a)`.
    pub fn canonical_twist(&self) -> i64 {
        -(self.n as i64)
    }

    /// Rank of the spinor bundle(s), `2^(ceil(n/2) - 1)`.
    pub fn spinor_rank(&self) -> u64 {
        1u64 << (self.n.div_ceil(2) - 1)
    }

    /// The quadric one dimension down, if it is still at least a surface.
    pub fn hyperplane_section(&self) -> Option<QuadricSpace> {
        QuadricSpace::new(self.n - 1).ok()
    }

    pub fn basis(&self) -> Vec<Basis> {
        let m = self.m();
        let mut out = Vec::with_capacity(self.n as usize + 2);
        for i in 0..=self.n {
            if self.is_even() && i == m {
                out.push(Basis::A);
                out.push(Basis::B);
            } else if i < m || (!self.is_even() && i == m) {
                out.push(Basis::H(i));
            } else {
                out.push(Basis::L(i));
            }
        }
        out
    }

    pub fn basis_in_codim(&self, codim: u32) -> Vec<Basis> {
        self.basis()
            .into_iter()
            .filter(|e| e.codim(self) == codim)
            .collect()
    }

    pub fn parse_label(&self, label: &str) -> Result<Basis, ChowError> {
        let bad = || ChowError::UnknownLabel(label.to_string(), self.n);
        let elem = match label {
            "1" => Basis::H(0),
            "h" => Basis::H(1),
            "pt" => Basis::L(self.n),
            "a" if self.is_even() => Basis::A,
            "b" if self.is_even() => Basis::B,
            _ => {
                if let Some(k) = label.strip_prefix("h^") {
                    Basis::H(k.parse().map_err(|_| bad())?)
                } else if let Some(k) = label.strip_prefix("l_") {
                    Basis::L(k.parse().map_err(|_| bad())?)
                } else {
                    return Err(bad());
                }
            }
        };
        if self.basis().contains(&elem) {
            Ok(elem)
        } else {
            Err(bad())
        }
    }
}

/// One element of the additive basis. Ordering follows codimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    H(u32),
    A,
    B,
    L(u32),
}

impl Basis {
    pub fn codim(&self, space: &QuadricSpace) -> u32 {
        match *self {
            Basis::H(i) | Basis::L(i) => i,
            Basis::A | Basis::B => space.m(),
        }
    }

    pub fn label(&self, space: &QuadricSpace) -> String {
        match *self {
            Basis::H(0) => "1".into(),
            Basis::H(1) => "h".into(),
            Basis::H(i) => format!("h^{i}"),
            Basis::A => "a".into(),
            Basis::B => "b".into(),
            Basis::L(i) if i == space.n() => "pt".into(),
            Basis::L(i) => format!("l_{i}"),
        }
    }
}

/// Intersection numbers of the two middle classes on `Q_{2m}`, as multiples of `pt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MiddleProducts {
    pub aa: i64,
    pub bb: i64,
    pub ab: i64,
}

/// Indexed by `m mod 2`: on `Q_4` two planes of one family meet in a point while planes of
/// opposite families are disjoint; the roles swap when `m` is odd.
pub const MIDDLE_PRODUCTS: [MiddleProducts; 2] = [
    MiddleProducts { aa: 1, bb: 1, ab: 0 },
    MiddleProducts { aa: 0, bb: 0, ab: 1 },
];

/// An integral class in `A*(Q_n)`, stored sparsely.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChowClass {
    space: QuadricSpace,
    coeffs: BTreeMap<Basis, i64>,
}

impl ChowClass {
    pub fn zero(space: QuadricSpace) -> Self {
        Self { space, coeffs: BTreeMap::new() }
    }

    pub fn one(space: QuadricSpace) -> Self {
        Self::basis(space, Basis::H(0))
    }

    pub fn basis(space: QuadricSpace, elem: Basis) -> Self {
        Self::term(space, elem, 1)
    }

    pub fn term(space: QuadricSpace, elem: Basis, coeff: i64) -> Self {
        let mut c = Self::zero(space);
        c.add_term(elem, coeff);
        c
    }

    pub fn from_terms(space: QuadricSpace, terms: &[(Basis, i64)]) -> Self {
        let mut c = Self::zero(space);
        for &(e, k) in terms {
            c.add_term(e, k);
        }
        c
    }

    pub fn scalar(space: QuadricSpace, k: i64) -> Self {
        Self::term(space, Basis::H(0), k)
    }

    /// `k * h`.
    pub fn hyperplane(space: QuadricSpace, k: i64) -> Self {
        Self::term(space, Basis::H(1), k)
    }

    pub fn point(space: QuadricSpace) -> Self {
        Self::basis(space, Basis::L(space.n()))
    }

    /// `h^k` expressed in the basis.
    pub fn h_pow(space: QuadricSpace, k: u32) -> Self {
        let (n, m) = (space.n(), space.m());
        if k > n {
            Self::zero(space)
        } else if space.is_even() && k == m {
            Self::from_terms(space, &[(Basis::A, 1), (Basis::B, 1)])
        } else if k < m || (!space.is_even() && k == m) {
            Self::basis(space, Basis::H(k))
        } else {
            Self::term(space, Basis::L(k), 2)
        }
    }

    fn add_term(&mut self, elem: Basis, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let slot = self.coeffs.entry(elem).or_insert(0);
        *slot += coeff;
        if *slot == 0 {
            self.coeffs.remove(&elem);
        }
    }

    pub fn space(&self) -> QuadricSpace {
        self.space
    }

    pub fn coeff(&self, elem: Basis) -> i64 {
        self.coeffs.get(&elem).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Basis, i64)> + '_ {
        self.coeffs.iter().map(|(e, k)| (*e, *k))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Part of codimension `codim`.
    pub fn component(&self, codim: u32) -> ChowClass {
        let mut out = Self::zero(self.space);
        for (e, k) in self.terms() {
            if e.codim(&self.space) == codim {
                out.add_term(e, k);
            }
        }
        out
    }

    /// Codimension of a nonzero homogeneous class.
    pub fn homogeneous_codim(&self) -> Option<u32> {
        let mut codims = self.coeffs.keys().map(|e| e.codim(&self.space));
        let first = codims.next()?;
        codims.all(|c| c == first).then_some(first)
    }

    /// Coefficient of the point class.
    pub fn degree(&self) -> i64 {
        self.coeff(Basis::L(self.space.n()))
    }

    fn check_space(&self, other: &ChowClass) -> Result<(), ChowError> {
        if self.space != other.space {
            return Err(ChowError::SpaceMismatch(self.space.n(), other.space.n()));
        }
        Ok(())
    }

    pub fn add(&self, other: &ChowClass) -> Result<ChowClass, ChowError> {
        self.check_space(other)?;
        let mut out = self.clone();
        for (e, k) in other.terms() {
            out.add_term(e, k);
        }
        Ok(out)
    }

    pub fn neg(&self) -> ChowClass {
        self.scale(-1)
    }

    pub fn sub(&self, other: &ChowClass) -> Result<ChowClass, ChowError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> ChowClass {
        let mut out = Self::zero(self.space);
        for (e, c) in self.terms() {
            out.add_term(e, c * k);
        }
        out
    }

    pub fn mul(&self, other: &ChowClass) -> Result<ChowClass, ChowError> {
        self.check_space(other)?;
        let mut out = Self::zero(self.space);
        for (x, p) in self.terms() {
            for (y, q) in other.terms() {
                for (e, k) in basis_product(&self.space, x, y).terms() {
                    out.add_term(e, k * p * q);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> ChowClass {
        let mut out = Self::one(self.space);
        for _ in 0..k {
            out = out.mul(self).expect("same space");
        }
        out
    }

    /// Returns the unique `q` with `q * divisor = self`.
    ///
    /// Divisors with constant term `±1` are units. A homogeneous divisor yields a homogeneous
    /// quotient. Anything else is solved over the whole basis.
    pub fn divide(&self, divisor: &ChowClass) -> Result<ChowClass, ChowError> {
        self.check_space(divisor)?;
        if divisor.is_zero() {
            return Err(ChowError::DivisionByZero);
        }
        let unit = divisor.coeff(Basis::H(0));
        if unit == 1 || unit == -1 {
            return self.mul(&divisor.inverse_unit());
        }
        if self.is_zero() {
            return Ok(Self::zero(self.space));
        }
        let unknowns = match (divisor.homogeneous_codim(), self.homogeneous_codim()) {
            (Some(cy), Some(cx)) if cx >= cy => self.space.basis_in_codim(cx - cy),
            (Some(_), _) => return Err(self.not_divisible(divisor)),
            (None, _) => self.space.basis(),
        };
        self.solve_quotient(divisor, &unknowns)
    }

    fn not_divisible(&self, divisor: &ChowClass) -> ChowError {
        ChowError::NotDivisible(self.to_string(), divisor.to_string())
    }

    /// Inverse of a class whose constant term is `±1`.
    fn inverse_unit(&self) -> ChowClass {
        let u = self.coeff(Basis::H(0));
        // self = u (1 + z) with z nilpotent
        let z = self.scale(u).sub(&Self::one(self.space)).expect("same space");
        let mut inv = Self::one(self.space);
        let mut power = Self::one(self.space);
        for _ in 0..self.space.n() {
            power = power.mul(&z.neg()).expect("same space");
            inv = inv.add(&power).expect("same space");
        }
        inv.scale(u)
    }

    fn solve_quotient(&self, divisor: &ChowClass, unknowns: &[Basis]) -> Result<ChowClass, ChowError> {
        let rows = self.space.basis();
        let images: Vec<ChowClass> = unknowns
            .iter()
            .map(|u| Self::basis(self.space, *u).mul(divisor).expect("same space"))
            .collect();
        let matrix: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| images.iter().map(|img| img.coeff(*r)).collect())
            .collect();
        let rhs: Vec<i64> = rows.iter().map(|r| self.coeff(*r)).collect();
        match solve_exact(&matrix, &rhs) {
            LinearSolution::Unique(q) => {
                let mut out = Self::zero(self.space);
                for (e, k) in unknowns.iter().zip(q) {
                    out.add_term(*e, k);
                }
                Ok(out)
            }
            LinearSolution::NonUnique => Err(ChowError::NonUnique(self.to_string(), divisor.to_string())),
            LinearSolution::Inconsistent | LinearSolution::NonIntegral => Err(self.not_divisible(divisor)),
        }
    }
}

fn h_times(space: &QuadricSpace, k: u32, x: Basis) -> ChowClass {
    let n = space.n();
    match x {
        Basis::H(j) => ChowClass::h_pow(*space, k + j),
        _ if k == 0 => ChowClass::basis(*space, x),
        Basis::A | Basis::B | Basis::L(_) => {
            let c = x.codim(space) + k;
            if c > n {
                ChowClass::zero(*space)
            } else {
                ChowClass::basis(*space, Basis::L(c))
            }
        }
    }
}

fn basis_product(space: &QuadricSpace, x: Basis, y: Basis) -> ChowClass {
    match (x, y) {
        (Basis::H(i), _) => h_times(space, i, y),
        (_, Basis::H(j)) => h_times(space, j, x),
        (Basis::A | Basis::B, Basis::A | Basis::B) => {
            let rule = MIDDLE_PRODUCTS[(space.m() % 2) as usize];
            let k = match (x, y) {
                (Basis::A, Basis::A) => rule.aa,
                (Basis::B, Basis::B) => rule.bb,
                _ => rule.ab,
            };
            ChowClass::term(*space, Basis::L(space.n()), k)
        }
        // both factors have codimension above the middle
        _ => ChowClass::zero(*space),
    }
}

impl fmt::Display for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (e, k)) in self.terms().enumerate() {
            let label = e.label(&self.space);
            let mag = k.abs();
            if idx == 0 {
                if k < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if k < 0 { '-' } else { '+' })?;
            }
            match (e, mag) {
                (Basis::H(0), _) => write!(f, "{mag}")?,
                (_, 1) => write!(f, "{label}")?,
                _ => write!(f, "{mag}*{label}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, PartialEq, Eq)]
pub(crate) enum LinearSolution {
    Unique(Vec<i64>),
    NonUnique,
    Inconsistent,
    NonIntegral,
}

/// Exact solution of `matrix * x = rhs` over the rationals, then checked for integrality.
pub(crate) fn solve_exact(matrix: &[Vec<i64>], rhs: &[i64]) -> LinearSolution {
    let cols = matrix.first().map_or(0, Vec::len);
    let mut rows: Vec<Vec<Ratio<i128>>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            row.iter()
                .chain(std::iter::once(b))
                .map(|&v| Ratio::from_integer(v as i128))
                .collect()
        })
        .collect();
    let zero = Ratio::from_integer(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != zero) else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r][c];
        for v in rows[r].iter_mut() {
            *v /= lead;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != zero {
                let factor = rows[i][c];
                for j in 0..=cols {
                    let delta = rows[r][j] * factor;
                    rows[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| row[cols] != zero) {
        return LinearSolution::Inconsistent;
    }
    if pivots.len() < cols {
        return LinearSolution::NonUnique;
    }
    let mut x = vec![0i64; cols];
    for (i, &c) in pivots.iter().enumerate() {
        let v = rows[i][cols];
        if !v.is_integer() {
            return LinearSolution::NonIntegral;
        }
        x[c] = v.to_integer() as i64;
    }
    LinearSolution::Unique(x)
}
