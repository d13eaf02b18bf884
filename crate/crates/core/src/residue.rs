//! The iterated residue operator and the projective-space residue used to
//! pin its sign convention.
//!
//! The iterated residue of a series on the contour `z ≫ w` is literally the
//! coefficient of `(zw)^{-1}`; no orientation sign is introduced. The input
//! must be (z,w,h)-homogeneous of total degree `n - 2`, which forces the
//! extracted coefficient to sit in `h`-degree exactly `n`.

use crate::coeffpoly::CoeffPoly;
use crate::error::EngineError;
use crate::rational::Rational;
use crate::series::{LaurentSeries, Monomial};

/// Coefficient of `z^{-1} w^{-1} h^n` together with the `h`-degree it carries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueResult {
    pub value: CoeffPoly,
    pub h_degree: u32,
}

/// Extracts the coefficient of `(zw)^{-1}` from a homogeneous series of
/// total degree `n - 2`.
///
/// Homogeneity is asserted, not assumed: a mixed-degree input is a hard
/// error, and a budget too small to contain `z^{-1} w^{-1} h^n` is an
/// insufficient-order error.
pub fn iterated_residue(expr: &LaurentSeries, n: u32) -> Result<ResidueResult, EngineError> {
    let expected = n as i64 - 2;
    if let Some(g) = expr.homogeneous_degree()? {
        if g != expected {
            return Err(EngineError::NonHomogeneous(format!(
                "total degree {g}, expected {expected}"
            )));
        }
    }
    let target = Monomial::new(-1, -1, n);
    let value = expr.coeff(&target)?;
    Ok(ResidueResult {
        value,
        h_degree: n,
    })
}

/// Single-variable fast path: with homogeneity already checked, setting
/// `z = 1` and reading off `w^{-1} h^n` gives the same coefficient, since
/// the degree constraint pins `z_exp = -1` whenever `w_exp = -1` and
/// `h_exp = n`. Must agree exactly with [`iterated_residue`].
pub fn dehomogenized_residue(expr: &LaurentSeries, n: u32) -> Result<ResidueResult, EngineError> {
    let expected = n as i64 - 2;
    if let Some(g) = expr.homogeneous_degree()? {
        if g != expected {
            return Err(EngineError::NonHomogeneous(format!(
                "total degree {g}, expected {expected}"
            )));
        }
    }
    if !expr.spec().contains(&Monomial::new(-1, -1, n)) {
        return Err(EngineError::InsufficientOrder(
            "budget cannot hold the residue monomial".into(),
        ));
    }
    let mut value = CoeffPoly::zero();
    for (m, c) in expr.iter() {
        if m.w_exp == -1 && m.h_exp == n {
            value = &value + c;
        }
    }
    Ok(ResidueResult {
        value,
        h_degree: n,
    })
}

/// Univariate polynomial with exact rational coefficients, ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    pub coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut p = UniPoly { coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Monic product `∏ (x - root_i)`.
    pub fn from_roots(roots: &[Rational]) -> Self {
        let mut coeffs = vec![Rational::one()];
        for r in roots {
            let mut next = vec![Rational::zero(); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] += &(&(-r) * c);
            }
            coeffs = next;
        }
        UniPoly::new(coeffs)
    }

    /// Remainder of division by a monic divisor.
    pub fn rem_monic(&self, divisor: &UniPoly) -> UniPoly {
        let dd = divisor.degree().expect("divisor must be nonzero");
        assert!(divisor.coeff(dd).is_one(), "divisor must be monic");
        let mut rem = self.coeffs.clone();
        while rem.len() > dd {
            let lead = rem.pop().unwrap();
            if lead.is_zero() {
                continue;
            }
            let shift = rem.len() - dd;
            for k in 0..dd {
                let t = &lead * &divisor.coeff(k);
                rem[shift + k] -= &t;
            }
        }
        UniPoly::new(rem)
    }
}

/// Residue at `w = ∞` of `P(w) / ∏_i (w - λ_i)`, computed as the `w^{-1}`
/// coefficient of the expansion in `1/w`.
///
/// Equals the fixed-point sum `Σ_j P(λ_j) / ∏_{i≠j} (λ_j - λ_i)` exactly;
/// [`fixed_point_sum`] computes that side independently so the two can be
/// compared in oracle runs.
pub fn projective_residue(p: &UniPoly, lambdas: &[Rational]) -> Result<Rational, EngineError> {
    check_distinct(lambdas)?;
    let q = UniPoly::from_roots(lambdas);
    // P/Q = S + R/Q with deg R < n; only R/Q reaches w^{-1}, with
    // coefficient equal to the w^{n-1} coefficient of R.
    let r = p.rem_monic(&q);
    Ok(r.coeff(lambdas.len() - 1))
}

/// Sum of `P(λ_j) / ∏_{i≠j} (λ_j - λ_i)` over the fixed points.
pub fn fixed_point_sum(p: &UniPoly, lambdas: &[Rational]) -> Result<Rational, EngineError> {
    check_distinct(lambdas)?;
    let mut acc = Rational::zero();
    for (j, lj) in lambdas.iter().enumerate() {
        let mut denom = Rational::one();
        for (i, li) in lambdas.iter().enumerate() {
            if i != j {
                denom *= &(lj - li);
            }
        }
        acc += &(&p.eval(lj) / &denom);
    }
    Ok(acc)
}

fn check_distinct(lambdas: &[Rational]) -> Result<(), EngineError> {
    if lambdas.is_empty() {
        return Err(EngineError::InvalidConfig(
            "need at least one fixed-point weight".into(),
        ));
    }
    for (i, a) in lambdas.iter().enumerate() {
        for b in lambdas.iter().skip(i + 1) {
            if a == b {
                return Err(EngineError::RepeatedWeight(a.to_string()));
            }
        }
    }
    Ok(())
}
