//! Polynomials in the hypersurface degree `d` and the twist parameter `δ`.
//!
//! A `CoeffPoly` is a sparse map (deg_d, deg_δ) → Rational with no stored
//! zero coefficients. It is the coefficient ring of every Laurent series in
//! the engine: `d` and `δ` stay symbolic through the whole residue pipeline
//! and are only evaluated when a report is assembled.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::rational::Rational;

/// Sparse exact polynomial in `d` and `δ`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct CoeffPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl CoeffPoly {
    pub fn zero() -> Self {
        CoeffPoly::default()
    }

    pub fn one() -> Self {
        CoeffPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = CoeffPoly::zero();
        p.add_term(0, 0, c);
        p
    }

    pub fn from_int(n: i64) -> Self {
        CoeffPoly::constant(Rational::from_int(n))
    }

    /// The variable `d`.
    pub fn var_d() -> Self {
        CoeffPoly::term(1, 0, Rational::one())
    }

    /// The variable `δ`.
    pub fn var_delta() -> Self {
        CoeffPoly::term(0, 1, Rational::one())
    }

    /// Single term `c · d^deg_d · δ^deg_delta`.
    pub fn term(deg_d: u32, deg_delta: u32, c: Rational) -> Self {
        let mut p = CoeffPoly::zero();
        p.add_term(deg_d, deg_delta, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for the constant polynomial 1.
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&(0, 0))
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn add_term(&mut self, deg_d: u32, deg_delta: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = (deg_d, deg_delta);
        let entry = self.terms.entry(key).or_insert_with(Rational::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn coeff(&self, deg_d: u32, deg_delta: u32) -> Rational {
        self.terms
            .get(&(deg_d, deg_delta))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    /// Highest power of `d`, or None for the zero polynomial.
    pub fn degree_d(&self) -> Option<u32> {
        self.terms.keys().map(|&(dd, _)| dd).max()
    }

    /// Highest power of `δ`, or None for the zero polynomial.
    pub fn degree_delta(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, dl)| dl).max()
    }

    /// True when every term has `deg_δ ≤ 1`.
    pub fn is_delta_linear(&self) -> bool {
        self.degree_delta().unwrap_or(0) <= 1
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return CoeffPoly::zero();
        }
        let mut out = CoeffPoly::zero();
        for (&k, v) in &self.terms {
            out.terms.insert(k, v * c);
        }
        out
    }

    /// Substitutes an exact value for `δ`, leaving `d` symbolic.
    pub fn eval_delta(&self, delta: &Rational) -> CoeffPoly {
        let mut out = CoeffPoly::zero();
        for (&(dd, dl), v) in &self.terms {
            out.add_term(dd, 0, v * &delta.pow(dl as i64));
        }
        out
    }

    /// Substitutes an exact value for `d`, leaving `δ` symbolic.
    pub fn eval_d(&self, d: &Rational) -> CoeffPoly {
        let mut out = CoeffPoly::zero();
        for (&(dd, dl), v) in &self.terms {
            out.add_term(0, dl, v * &d.pow(dd as i64));
        }
        out
    }

    /// Full evaluation at exact `d` and `δ`.
    pub fn eval(&self, d: &Rational, delta: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&(dd, dl), v) in &self.terms {
            acc += &(v * &d.pow(dd as i64) * delta.pow(dl as i64));
        }
        acc
    }

    /// The unique rational value of a constant polynomial.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&(0, 0)) {
                return Some(c.clone());
            }
        }
        None
    }
}

impl Add<&CoeffPoly> for &CoeffPoly {
    type Output = CoeffPoly;
    fn add(self, rhs: &CoeffPoly) -> CoeffPoly {
        let mut out = self.clone();
        for (&(dd, dl), v) in &rhs.terms {
            out.add_term(dd, dl, v.clone());
        }
        out
    }
}

impl Sub<&CoeffPoly> for &CoeffPoly {
    type Output = CoeffPoly;
    fn sub(self, rhs: &CoeffPoly) -> CoeffPoly {
        let mut out = self.clone();
        for (&(dd, dl), v) in &rhs.terms {
            out.add_term(dd, dl, -v);
        }
        out
    }
}

impl Mul<&CoeffPoly> for &CoeffPoly {
    type Output = CoeffPoly;
    fn mul(self, rhs: &CoeffPoly) -> CoeffPoly {
        let mut out = CoeffPoly::zero();
        for (&(da, la), va) in &self.terms {
            for (&(db, lb), vb) in &rhs.terms {
                out.add_term(da + db, la + lb, va * vb);
            }
        }
        out
    }
}

impl Neg for &CoeffPoly {
    type Output = CoeffPoly;
    fn neg(self) -> CoeffPoly {
        let mut out = CoeffPoly::zero();
        for (&k, v) in &self.terms {
            out.terms.insert(k, -v);
        }
        out
    }
}

impl fmt::Display for CoeffPoly {
    /// Canonical text form: terms in descending (deg_d, deg_δ) order,
    /// e.g. `-2 d^3 delta + 3/2 d - 7`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(dd, dl), c) in self.terms.iter().rev() {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut wrote = false;
            if !mag.is_one() || (dd == 0 && dl == 0) {
                write!(f, "{mag}")?;
                wrote = true;
            }
            for (sym, e) in [("d", dd), ("delta", dl)] {
                if e > 0 {
                    if wrote {
                        write!(f, " ")?;
                    }
                    if e == 1 {
                        write!(f, "{sym}")?;
                    } else {
                        write!(f, "{sym}^{e}")?;
                    }
                    wrote = true;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
