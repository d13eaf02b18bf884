//! Characteristic classes of a smooth degree-`d` hypersurface in projective
//! space, and the integration-over-the-base step.
//!
//! For `X ⊂ P^{n+1}` of degree `d` the total Chern class satisfies
//! `(1 + d·h)·c(X) = (1 + h)^{n+2}` with `h` the hyperplane class, and the
//! total Segre class is its exact inverse mod `h^{n+1}`. Both are computed by
//! exact series division; `d` stays a polynomial variable throughout.

use num_bigint::BigInt;
use num_traits::One;

use crate::coeffpoly::CoeffPoly;
use crate::error::EngineError;
use crate::rational::Rational;
use crate::residue::ResidueResult;
use crate::series::{geom_inverse, LaurentSeries, Monomial, OrderSpec};

/// Total Chern and Segre classes of a degree-`d` hypersurface of dimension
/// `n`, stored by `h`-power. Coefficients are polynomials in `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypersurfaceClasses {
    pub n: u32,
    pub total_chern: Vec<CoeffPoly>,
    pub total_segre: Vec<CoeffPoly>,
}

/// Exact binomial coefficient.
pub fn binomial(a: u64, b: u64) -> Rational {
    if b > a {
        return Rational::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for k in 0..b.min(a - b) {
        num *= BigInt::from(a - k);
        den *= BigInt::from(k + 1);
    }
    &Rational::from_bigint(num) / &Rational::from_bigint(den)
}

/// Product of two `h`-power series mod `h^{len}`.
fn h_series_mul(a: &[CoeffPoly], b: &[CoeffPoly], len: usize) -> Vec<CoeffPoly> {
    let mut out = vec![CoeffPoly::zero(); len];
    for (i, ca) in a.iter().enumerate().take(len) {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate().take(len - i) {
            out[i + j] = &out[i + j] + &(ca * cb);
        }
    }
    out
}

/// Computes the total Chern and Segre classes of a dimension-`n` hypersurface
/// by exact series division mod `h^{n+1}`.
pub fn hypersurface_segre(n: u32) -> HypersurfaceClasses {
    let len = n as usize + 1;
    let d = CoeffPoly::var_d();

    // (1+h)^{n+2} truncated at h^n
    let mut hyperplane_pow = vec![CoeffPoly::zero(); len];
    for (j, c) in hyperplane_pow.iter_mut().enumerate() {
        *c = CoeffPoly::constant(binomial(n as u64 + 2, j as u64));
    }

    // (1 + dh)^{-1} = Σ (-d)^j h^j
    let mut inv_twist = vec![CoeffPoly::zero(); len];
    let mut pow = CoeffPoly::one();
    let minus_d = -&d;
    for c in inv_twist.iter_mut() {
        *c = pow.clone();
        pow = &pow * &minus_d;
    }

    // (1+h)^{-(n+2)} = Σ (-1)^j C(n+1+j, j) h^j
    let mut inv_hyperplane_pow = vec![CoeffPoly::zero(); len];
    for (j, c) in inv_hyperplane_pow.iter_mut().enumerate() {
        let mag = binomial(n as u64 + 1 + j as u64, j as u64);
        let signed = if j % 2 == 0 { mag } else { -mag };
        *c = CoeffPoly::constant(signed);
    }

    // (1 + dh) as an h-series
    let mut twist = vec![CoeffPoly::zero(); len];
    twist[0] = CoeffPoly::one();
    if len > 1 {
        twist[1] = d;
    }

    let total_chern = h_series_mul(&hyperplane_pow, &inv_twist, len);
    let total_segre = h_series_mul(&twist, &inv_hyperplane_pow, len);

    HypersurfaceClasses {
        n,
        total_chern,
        total_segre,
    }
}

/// The full per-column Segre factor of the residue formula, expanded on
/// `z ≫ w`:
///
/// `(1 + d·h·g) · (1 - h·g + h²·g² - …)^{n+2}` with `g = 1/(lz - (l+1)w)`.
///
/// This equals the total Segre class evaluated at `1/(lz - (l+1)w)`, i.e.
/// `Σ_i s_i(d) h^i g^i`, but is expanded directly in the Laurent ring so the
/// truncation stays exact (no substitution layer).
pub fn segre_substituted_factor(l: u32, n: u32, spec: &OrderSpec) -> LaurentSeries {
    let g = geom_inverse(l, spec);
    segre_factor_from_inverse(&g, n)
}

/// Same Segre factor built from an arbitrary expanded linear-form inverse.
/// Used by the unsheared variable frame, where the columns carry
/// `g = 1/(lz - w)` instead.
pub fn segre_factor_from_inverse(g: &LaurentSeries, n: u32) -> LaurentSeries {
    let spec = *g.spec();
    let h = Monomial::new(0, 0, 1);
    let hg = g.mul_term(&h, &CoeffPoly::one());

    // 1 - hg + (hg)^2 - ... ; h-nilpotency ends the sum by itself, but the
    // exponent cap keeps the loop finite even for permissive budgets.
    let mut alternating = LaurentSeries::one(spec);
    let mut power = LaurentSeries::one(spec);
    for j in 1..=spec.max_h {
        power = power.mul(&hg);
        if power.is_zero() {
            break;
        }
        let signed = if j % 2 == 1 { power.neg() } else { power.clone() };
        alternating = alternating.add(&signed);
    }

    let twist = LaurentSeries::one(spec).add(&hg.scale(&CoeffPoly::var_d()));
    twist.mul(&alternating.pow(n + 2))
}

/// Integration over the base: a residue of pure `h`-degree `n` integrates to
/// `d` times its coefficient, since the top power of the hyperplane class
/// evaluates to the degree of the hypersurface.
pub fn integrate_over_base(r: &ResidueResult, n: u32) -> Result<CoeffPoly, EngineError> {
    if r.h_degree != n {
        return Err(EngineError::HDegreeMismatch {
            got: r.h_degree,
            expected: n,
        });
    }
    Ok(&r.value * &CoeffPoly::var_d())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d_linear(c0: i64, c1: i64) -> CoeffPoly {
        // c0 + c1·d
        let mut p = CoeffPoly::from_int(c0);
        p.add_term(1, 0, Rational::from_int(c1));
        p
    }

    #[test]
    fn curve_case_classes() {
        // n = 1: c(X) = 1 + (3-d)h, s(X) = 1 + (d-3)h
        let c = hypersurface_segre(1);
        assert_eq!(c.total_chern, vec![CoeffPoly::one(), d_linear(3, -1)]);
        assert_eq!(c.total_segre, vec![CoeffPoly::one(), d_linear(-3, 1)]);
    }

    #[test]
    fn segre_starts_at_one_and_s1() {
        for n in 1..=8u32 {
            let c = hypersurface_segre(n);
            assert_eq!(c.total_segre[0], CoeffPoly::one());
            // s_1 = d - (n+2)
            assert_eq!(c.total_segre[1], d_linear(-(n as i64) - 2, 1));
        }
    }

    #[test]
    fn chern_segre_inversion_and_defining_identity() {
        for n in 1..=8u32 {
            let len = n as usize + 1;
            let c = hypersurface_segre(n);

            let mut one = vec![CoeffPoly::zero(); len];
            one[0] = CoeffPoly::one();
            assert_eq!(h_series_mul(&c.total_chern, &c.total_segre, len), one);

            let mut twist = vec![CoeffPoly::zero(); len];
            twist[0] = CoeffPoly::one();
            twist[1] = CoeffPoly::var_d();
            let lhs = h_series_mul(&twist, &c.total_chern, len);
            let rhs: Vec<CoeffPoly> = (0..len)
                .map(|j| CoeffPoly::constant(binomial(n as u64 + 2, j as u64)))
                .collect();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn segre_degree_bound() {
        // the h^k coefficient of s(X) has d-degree ≤ k
        for n in 1..=8u32 {
            let c = hypersurface_segre(n);
            for (k, s) in c.total_segre.iter().enumerate() {
                assert!(s.degree_d().unwrap_or(0) as usize <= k);
            }
        }
    }

    #[test]
    fn factor_h0_part_is_one() {
        let n = 3;
        let spec = OrderSpec::for_dimension(n, 1);
        for l in 0..n {
            let f = segre_substituted_factor(l, n, &spec);
            let h0: Vec<_> = f.iter().filter(|(m, _)| m.h_exp == 0).collect();
            assert_eq!(h0.len(), 1);
            let (m, c) = h0[0];
            assert_eq!(*m, Monomial::new(0, 0, 0));
            assert!(c.is_one());
        }
    }

    #[test]
    fn l0_factor_expansion() {
        // l = 0: (1 - d·h/w)(1 + h/w + h²/w² + …)^{n+2}
        let n = 2;
        let spec = OrderSpec::for_dimension(n, 1);
        let got = segre_substituted_factor(0, n, &spec);

        let w_inv = Monomial::new(0, -1, 1); // h/w
        let hw = LaurentSeries::monomial(w_inv, spec);
        let mut geom = LaurentSeries::one(spec);
        let mut p = LaurentSeries::one(spec);
        for _ in 1..=n {
            p = p.mul(&hw);
            geom = geom.add(&p);
        }
        let lead = LaurentSeries::one(spec)
            .add(&hw.scale(&(-&CoeffPoly::var_d())));
        let expected = lead.mul(&geom.pow(n + 2));
        assert_eq!(got, expected);
    }

    #[test]
    fn factor_matches_segre_class_substitution() {
        // Σ_i s_i(d) h^i g^i must reproduce the directly-expanded factor.
        for n in [2u32, 3] {
            let spec = OrderSpec::for_dimension(n, 1);
            let classes = hypersurface_segre(n);
            for l in 0..n {
                let g = geom_inverse(l, &spec);
                let hg = g.mul_term(&Monomial::new(0, 0, 1), &CoeffPoly::one());
                let mut expected = LaurentSeries::zero(spec);
                let mut pw = LaurentSeries::one(spec);
                for s_i in classes.total_segre.iter() {
                    expected = expected.add(&pw.scale(s_i));
                    pw = pw.mul(&hg);
                }
                assert_eq!(segre_substituted_factor(l, n, &spec), expected);
            }
        }
    }

    #[test]
    fn integrate_over_base_multiplies_by_degree() {
        let q = CoeffPoly::term(2, 1, Rational::new(7, 3));
        let r = ResidueResult {
            value: q.clone(),
            h_degree: 4,
        };
        assert_eq!(
            integrate_over_base(&r, 4).unwrap(),
            &q * &CoeffPoly::var_d()
        );
        let zero = ResidueResult {
            value: CoeffPoly::zero(),
            h_degree: 4,
        };
        assert!(integrate_over_base(&zero, 4).unwrap().is_zero());
        assert!(matches!(
            integrate_over_base(&r, 3),
            Err(EngineError::HDegreeMismatch { .. })
        ));
    }
}
