//! Text syntax for bundle expressions, monads and Chow classes.
//!
//! Bundles: `S'(1) + S''(1) + O(2)`, with atoms `O`, `S`, `S'`, `S''`, an optional integer
//! twist in parentheses, and `X*Y` for a tensor of two spinors. `0` is the empty sum.
//! Monads: `A -> B -> C`. Chow classes: integer combinations and products of basis labels,
//! e.g. `2*h^2 - a` or `(h + a)*b`.

use thiserror::Error;

use crate::bundle::{Atom, BundleError, BundleExpr, SpinorKind};
use crate::chow::{ChowClass, ChowError, QuadricSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at column {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Chow(#[from] ChowError),
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        // columns are 1-based for humans
        Err(ParseError::Syntax { pos: self.pos + 1, msg: msg.into() })
    }

    fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat(s) {
            Ok(())
        } else {
            self.error(format!("expected `{s}`"))
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut end = start;
        let bytes = self.src.as_bytes();
        if end < bytes.len() && (bytes[end] == b'-' || bytes[end] == b'+') {
            end += 1;
        }
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        match self.src[start..end].parse() {
            Ok(v) => {
                self.pos = end;
                Ok(v)
            }
            Err(_) => self.error("expected an integer"),
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }
}

fn spinor_atom(cur: &mut Cursor) -> Result<Option<(SpinorKind, i64)>, ParseError> {
    if !cur.eat("S") {
        return Ok(None);
    }
    let kind = if cur.eat("''") {
        SpinorKind::Minus
    } else if cur.eat("'") {
        SpinorKind::Plus
    } else {
        SpinorKind::Odd
    };
    Ok(Some((kind, twist(cur)?)))
}

fn twist(cur: &mut Cursor) -> Result<i64, ParseError> {
    if cur.eat("(") {
        let t = cur.integer()?;
        cur.expect(")")?;
        Ok(t)
    } else {
        Ok(0)
    }
}

fn term(cur: &mut Cursor) -> Result<Atom, ParseError> {
    if cur.eat("O") {
        return Ok(Atom::Line(twist(cur)?));
    }
    let Some(left) = spinor_atom(cur)? else {
        return cur.error("expected O, S, S' or S''");
    };
    if cur.eat("*") {
        let Some(right) = spinor_atom(cur)? else {
            return cur.error("expected a spinor after `*`");
        };
        return Ok(Atom::tensor_pair(left, right));
    }
    Ok(Atom::Spinor(left.0, left.1))
}

fn expr(cur: &mut Cursor, space: QuadricSpace) -> Result<BundleExpr, ParseError> {
    if cur.peek() == Some('0') {
        cur.eat("0");
        return Ok(BundleExpr::zero(space));
    }
    let mut out = BundleExpr::zero(space);
    loop {
        out.push(term(cur)?, 1)?;
        if !cur.eat("+") {
            break;
        }
    }
    Ok(out)
}

pub fn parse_bundle_expr(src: &str, space: QuadricSpace) -> Result<BundleExpr, ParseError> {
    let mut cur = Cursor::new(src);
    let e = expr(&mut cur, space)?;
    if !cur.at_end() {
        return cur.error("unexpected trailing input");
    }
    Ok(e)
}

/// `A -> B -> C`; each part is a bundle expression or `0`.
pub fn parse_monad_terms(src: &str, space: QuadricSpace) -> Result<[BundleExpr; 3], ParseError> {
    let mut cur = Cursor::new(src);
    let a = expr(&mut cur, space)?;
    cur.expect("->")?;
    let b = expr(&mut cur, space)?;
    cur.expect("->")?;
    let c = expr(&mut cur, space)?;
    if !cur.at_end() {
        return cur.error("unexpected trailing input");
    }
    Ok([a, b, c])
}

fn chow_sum(cur: &mut Cursor, space: QuadricSpace) -> Result<ChowClass, ParseError> {
    let mut acc = if cur.eat("-") { chow_product(cur, space)?.neg() } else { chow_product(cur, space)? };
    loop {
        if cur.eat("+") {
            acc = acc.add(&chow_product(cur, space)?)?;
        } else if cur.eat("-") {
            acc = acc.sub(&chow_product(cur, space)?)?;
        } else {
            return Ok(acc);
        }
    }
}

fn chow_product(cur: &mut Cursor, space: QuadricSpace) -> Result<ChowClass, ParseError> {
    let mut acc = chow_power(cur, space)?;
    while cur.eat("*") {
        acc = acc.mul(&chow_power(cur, space)?)?;
    }
    Ok(acc)
}

fn chow_power(cur: &mut Cursor, space: QuadricSpace) -> Result<ChowClass, ParseError> {
    let base = chow_atom(cur, space)?;
    if cur.eat("^") {
        let k = cur.integer()?;
        if k < 0 {
            return cur.error("negative exponent");
        }
        return Ok(base.pow(k as u32));
    }
    Ok(base)
}

fn chow_atom(cur: &mut Cursor, space: QuadricSpace) -> Result<ChowClass, ParseError> {
    match cur.peek() {
        Some('(') => {
            cur.eat("(");
            let inner = chow_sum(cur, space)?;
            cur.expect(")")?;
            Ok(inner)
        }
        Some(c) if c.is_ascii_digit() => Ok(ChowClass::scalar(space, cur.integer()?)),
        Some(c) if c.is_ascii_alphabetic() => {
            let start = cur.pos;
            let rest = cur.rest();
            let mut len = rest.find(|ch: char| !ch.is_ascii_alphabetic()).unwrap_or(rest.len());
            if rest[len..].starts_with('_') {
                let digits = rest[len + 1..].find(|ch: char| !ch.is_ascii_digit()).unwrap_or(rest.len() - len - 1);
                len += 1 + digits;
            }
            let label = &rest[..len];
            match space.parse_label(label) {
                Ok(elem) => {
                    cur.pos += len;
                    Ok(ChowClass::basis(space, elem))
                }
                Err(_) => Err(ParseError::Syntax { pos: start + 1, msg: format!("unknown class `{label}` on Q_{}", space.n()) }),
            }
        }
        _ => cur.error("expected a class, an integer or `(`"),
    }
}

pub fn parse_chow_expr(src: &str, space: QuadricSpace) -> Result<ChowClass, ParseError> {
    let mut cur = Cursor::new(src);
    let c = chow_sum(&mut cur, space)?;
    if !cur.at_end() {
        return cur.error("unexpected trailing input");
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::Basis;

    fn q(n: u32) -> QuadricSpace {
        QuadricSpace::new(n).unwrap()
    }

    #[test]
    fn three_atoms() {
        let e = parse_bundle_expr("S'(1) + S''(1) + O(2)", q(4)).unwrap();
        let want = BundleExpr::from_atoms(
            q(4),
            [Atom::Spinor(SpinorKind::Plus, 1), Atom::Spinor(SpinorKind::Minus, 1), Atom::Line(2)],
        )
        .unwrap();
        assert_eq!(e, want);
        assert_eq!(parse_bundle_expr(&e.to_string(), q(4)).unwrap(), e);
    }

    #[test]
    fn default_twist_and_negative_twists() {
        assert_eq!(parse_bundle_expr("O", q(4)).unwrap(), BundleExpr::lines(q(4), &[0]));
        assert_eq!(parse_bundle_expr("O(-3)+O(+2)", q(5)).unwrap(), BundleExpr::lines(q(5), &[-3, 2]));
        assert!(parse_bundle_expr("0", q(5)).unwrap().is_empty());
    }

    #[test]
    fn parity_is_checked() {
        assert!(matches!(parse_bundle_expr("S(1)", q(4)), Err(ParseError::Bundle(BundleError::IllegalAtom { .. }))));
        assert!(matches!(parse_bundle_expr("S'", q(5)), Err(ParseError::Bundle(BundleError::IllegalAtom { .. }))));
    }

    #[test]
    fn syntax_errors_carry_columns() {
        assert_eq!(parse_bundle_expr("O(1) + X", q(4)), Err(ParseError::Syntax { pos: 8, msg: "expected O, S, S' or S''".into() }));
        assert!(matches!(parse_bundle_expr("O(1", q(4)), Err(ParseError::Syntax { pos: 4, .. })));
        assert!(matches!(parse_bundle_expr("O(1) O", q(4)), Err(ParseError::Syntax { pos: 6, .. })));
    }

    #[test]
    fn tensor_pairs() {
        let e = parse_bundle_expr("S'(1)*S''(1)", q(4)).unwrap();
        assert_eq!(e.to_string(), "S'(1)*S''(1)");
    }

    #[test]
    fn monads() {
        let [a, b, c] = parse_monad_terms("O -> S'(1) + S''(1) -> O(1)", q(4)).unwrap();
        assert_eq!(a.to_string(), "O");
        assert_eq!(b.rank(), 4);
        assert_eq!(c.to_string(), "O(1)");
        let [a, _, _] = parse_monad_terms("0 -> S(1) -> O(1)", q(5)).unwrap();
        assert!(a.is_empty());
        assert!(parse_monad_terms("O -> S(1)", q(5)).is_err());
    }

    #[test]
    fn chow_expressions() {
        let s = q(4);
        let c = parse_chow_expr("2*h^2 + a", s).unwrap();
        assert_eq!(c.coeff(Basis::A), 3);
        assert_eq!(c.coeff(Basis::B), 2);
        assert!(parse_chow_expr("a*b", s).unwrap().is_zero());
        assert_eq!(parse_chow_expr("h^2*h^2", s).unwrap().degree(), 2);
        assert_eq!(parse_chow_expr("-(h + 1)^2", s).unwrap().to_string(), "-1 - 2*h - a - b");
        assert_eq!(parse_chow_expr("l_3", s).unwrap(), ChowClass::basis(s, Basis::L(3)));
        assert!(matches!(parse_chow_expr("a", q(5)), Err(ParseError::Syntax { pos: 1, .. })));
    }
}
