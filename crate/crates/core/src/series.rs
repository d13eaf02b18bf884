//! Sparse truncated Laurent series in the residue variables `z`, `w` and the
//! hyperplane class `h`, with `CoeffPoly` coefficients.
//!
//! Every series is an expansion on the contour `z ≫ w`: all rational factors
//! are expanded with `z` dominant, so no other expansion region is even
//! representable. `h` is nilpotent of order `max_h + 1` (classes of degree
//! above the dimension vanish), which makes the `h`-cutoff exact rather than
//! an approximation. The `w`-depth and the `z`-floor are genuine truncation
//! budgets; their adequacy is validated by budget-doubling oracles, not
//! trusted.
//!
//! All values are immutable after construction and every operation is a pure
//! function, so series can be shared freely across workers. The
//! multiplication kernel parallelises over blocks of terms; partial products
//! are merged by exact addition, so results are bit-identical for any worker
//! count.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::coeffpoly::CoeffPoly;
use crate::error::EngineError;
use crate::rational::Rational;

/// Exponent triple `z^z_exp w^w_exp h^h_exp`. `z_exp` and `w_exp` may be
/// negative; `h_exp` may not.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial {
    pub z_exp: i32,
    pub w_exp: i32,
    pub h_exp: u32,
}

impl Monomial {
    pub fn new(z_exp: i32, w_exp: i32, h_exp: u32) -> Self {
        Monomial { z_exp, w_exp, h_exp }
    }

    /// Total degree with `z`, `w`, `h` each of degree 1.
    pub fn total_degree(&self) -> i64 {
        self.z_exp as i64 + self.w_exp as i64 + self.h_exp as i64
    }

    fn checked_mul(&self, other: &Monomial) -> Monomial {
        let z_exp = self
            .z_exp
            .checked_add(other.z_exp)
            .expect("z exponent overflow: truncation budget misconfigured");
        let w_exp = self
            .w_exp
            .checked_add(other.w_exp)
            .expect("w exponent overflow: truncation budget misconfigured");
        let h_exp = self
            .h_exp
            .checked_add(other.h_exp)
            .expect("h exponent overflow: truncation budget misconfigured");
        Monomial { z_exp, w_exp, h_exp }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z^{} w^{} h^{}", self.z_exp, self.w_exp, self.h_exp)
    }
}

/// Truncation budget for the `z ≫ w` expansion.
///
/// A monomial is retained iff `min_z ≤ z_exp`, `min_w ≤ w_exp ≤ max_w` and
/// `h_exp ≤ max_h`. `max_w` is the depth of the `w/z` expansion; `max_h` is
/// the nilpotency degree of `h`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct OrderSpec {
    pub min_z: i32,
    pub min_w: i32,
    pub max_w: i32,
    pub max_h: u32,
}

impl OrderSpec {
    /// Default budget for a dimension-`n` pipeline run, scaled by
    /// `multiplier` (doubling the multiplier must reproduce the same residue
    /// exactly; that invariance is what validates the default).
    pub fn for_dimension(n: u32, multiplier: u32) -> Self {
        let m = multiplier.max(1) as i32;
        let n = n as i32;
        let depth = m * (n * n + n + 2);
        OrderSpec {
            min_z: -2 * depth,
            min_w: -m * (2 * n + 2),
            max_w: depth,
            max_h: n as u32,
        }
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        m.z_exp >= self.min_z
            && m.w_exp >= self.min_w
            && m.w_exp <= self.max_w
            && m.h_exp <= self.max_h
    }

    /// Common budget of two series: the intersection of the boxes.
    pub fn intersect(&self, other: &OrderSpec) -> OrderSpec {
        OrderSpec {
            min_z: self.min_z.max(other.min_z),
            min_w: self.min_w.max(other.min_w),
            max_w: self.max_w.min(other.max_w),
            max_h: self.max_h.min(other.max_h),
        }
    }
}

/// Sparse truncated Laurent series over `CoeffPoly`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentSeries {
    terms: BTreeMap<Monomial, CoeffPoly>,
    spec: OrderSpec,
}

/// Above this many coefficient products, multiplication runs on the rayon
/// pool. Partial maps are merged by exact addition, so the block split does
/// not affect the result.
const PARALLEL_MUL_THRESHOLD: usize = 1 << 14;

impl LaurentSeries {
    pub fn zero(spec: OrderSpec) -> Self {
        LaurentSeries {
            terms: BTreeMap::new(),
            spec,
        }
    }

    pub fn one(spec: OrderSpec) -> Self {
        LaurentSeries::from_terms([(Monomial::new(0, 0, 0), CoeffPoly::one())], spec)
    }

    pub fn from_terms<I>(terms: I, spec: OrderSpec) -> Self
    where
        I: IntoIterator<Item = (Monomial, CoeffPoly)>,
    {
        let mut s = LaurentSeries::zero(spec);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    /// Single monomial with coefficient 1.
    pub fn monomial(m: Monomial, spec: OrderSpec) -> Self {
        LaurentSeries::from_terms([(m, CoeffPoly::one())], spec)
    }

    pub fn spec(&self) -> &OrderSpec {
        &self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &CoeffPoly)> {
        self.terms.iter()
    }

    /// Adds a term, dropping it silently if outside the budget and pruning
    /// cancellations to zero.
    pub fn add_term(&mut self, m: Monomial, c: CoeffPoly) {
        if c.is_zero() || !self.spec.contains(&m) {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(CoeffPoly::zero);
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Exact coefficient of `m`; zero if absent. Requesting a monomial
    /// outside the truncation budget is an insufficient-order error.
    pub fn coeff(&self, m: &Monomial) -> Result<CoeffPoly, EngineError> {
        if !self.spec.contains(m) {
            return Err(EngineError::InsufficientOrder(format!(
                "monomial {m} outside budget {:?}",
                self.spec
            )));
        }
        Ok(self.terms.get(m).cloned().unwrap_or_else(CoeffPoly::zero))
    }

    /// Termwise sum on the intersected budget.
    pub fn add(&self, other: &LaurentSeries) -> LaurentSeries {
        let spec = self.spec.intersect(&other.spec);
        let mut out = LaurentSeries::zero(spec);
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn neg(&self) -> LaurentSeries {
        let mut out = LaurentSeries::zero(self.spec);
        for (m, c) in &self.terms {
            out.terms.insert(*m, -c);
        }
        out
    }

    pub fn sub(&self, other: &LaurentSeries) -> LaurentSeries {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &CoeffPoly) -> LaurentSeries {
        let mut out = LaurentSeries::zero(self.spec);
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.add_term(*m, v * c);
        }
        out
    }

    pub fn scale_rational(&self, c: &Rational) -> LaurentSeries {
        self.scale(&CoeffPoly::constant(c.clone()))
    }

    /// Multiplies by a single monomial times coefficient (an exact shift).
    pub fn mul_term(&self, m: &Monomial, c: &CoeffPoly) -> LaurentSeries {
        let mut out = LaurentSeries::zero(self.spec);
        if c.is_zero() {
            return out;
        }
        for (ma, ca) in &self.terms {
            out.add_term(ma.checked_mul(m), ca * c);
        }
        out
    }

    /// Cauchy product, truncated to the intersected budget. Terms beyond the
    /// `w` depth, below the `z` floor, or above the `h` nilpotency degree are
    /// dropped.
    pub fn mul(&self, other: &LaurentSeries) -> LaurentSeries {
        let spec = self.spec.intersect(&other.spec);
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let work = small.terms.len().saturating_mul(large.terms.len());
        if work < PARALLEL_MUL_THRESHOLD {
            let mut out = LaurentSeries::zero(spec);
            for (ma, ca) in &small.terms {
                for (mb, cb) in &large.terms {
                    let m = ma.checked_mul(mb);
                    if spec.contains(&m) {
                        out.add_term(m, ca * cb);
                    }
                }
            }
            return out;
        }

        let blocks: Vec<(&Monomial, &CoeffPoly)> = small.terms.iter().collect();
        let merged = blocks
            .par_iter()
            .fold(
                BTreeMap::<Monomial, CoeffPoly>::new,
                |mut acc, (ma, ca)| {
                    for (mb, cb) in &large.terms {
                        let m = ma.checked_mul(mb);
                        if spec.contains(&m) {
                            let entry = acc.entry(m).or_insert_with(CoeffPoly::zero);
                            *entry = &*entry + &(*ca * cb);
                        }
                    }
                    acc
                },
            )
            .reduce(BTreeMap::new, |mut a, b| {
                for (m, c) in b {
                    let entry = a.entry(m).or_insert_with(CoeffPoly::zero);
                    *entry = &*entry + &c;
                }
                a
            });
        let mut out = LaurentSeries::zero(spec);
        for (m, c) in merged {
            if !c.is_zero() {
                out.terms.insert(m, c);
            }
        }
        out
    }

    /// Power by repeated squaring, truncated like `mul`.
    pub fn pow(&self, e: u32) -> LaurentSeries {
        let mut acc = LaurentSeries::one(self.spec);
        if e == 0 {
            return acc;
        }
        let mut sq = self.clone();
        let mut e = e;
        loop {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e == 0 {
                return acc;
            }
            sq = sq.mul(&sq);
        }
    }

    /// Total degree if the series is (z,w,h)-homogeneous: `Ok(None)` for the
    /// zero series, `Ok(Some(g))` when all stored monomials have degree `g`.
    pub fn homogeneous_degree(&self) -> Result<Option<i64>, EngineError> {
        let mut deg = None;
        for m in self.terms.keys() {
            let g = m.total_degree();
            match deg {
                None => deg = Some(g),
                Some(g0) if g0 != g => {
                    return Err(EngineError::NonHomogeneous(format!(
                        "mixed degrees {g0} and {g} (at {m})"
                    )))
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Canonical text form: lexicographically sorted terms, one per line,
    /// each as `z^a w^b h^c : <CoeffPoly>`.
    pub fn to_canonical_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut lines = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            lines.push(format!("{m} : {c}"));
        }
        lines.join("\n")
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_canonical_text())
    }
}

/// Laurent expansion of `1/(a·z + b·w)` on the contour `z ≫ w`.
///
/// For `a ≠ 0` this is `Σ_k (-b)^k / a^{k+1} · w^k z^{-1-k}`; for `a = 0`
/// the factor is exactly `(1/b)·w^{-1}` with no expansion at all.
pub fn linear_inverse(a: i64, b: i64, spec: &OrderSpec) -> LaurentSeries {
    assert!(a != 0 || b != 0, "cannot invert the zero form");
    let mut out = LaurentSeries::zero(*spec);
    if a == 0 {
        out.add_term(
            Monomial::new(0, -1, 0),
            CoeffPoly::constant(Rational::new(1, b)),
        );
        return out;
    }
    let ra = Rational::from_int(a);
    let rb = Rational::from_int(-b);
    let mut k: i32 = 0;
    let mut coeff = ra.recip(); // (-b)^k / a^{k+1} at k = 0
    loop {
        let m = Monomial::new(-1 - k, k, 0);
        if !spec.contains(&m) {
            break;
        }
        out.add_term(m, CoeffPoly::constant(coeff.clone()));
        coeff = &coeff * &(&rb / &ra);
        k += 1;
    }
    out
}

/// Laurent expansion of `1/(l·z - (l+1)·w)` on `z ≫ w`; the `l = 0` factor is
/// exactly `-w^{-1}`.
pub fn geom_inverse(l: u32, spec: &OrderSpec) -> LaurentSeries {
    linear_inverse(l as i64, -(l as i64) - 1, spec)
}
