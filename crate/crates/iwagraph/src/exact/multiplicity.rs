//! Multiplicity of height-one primes in two-variable power-series rings
//! over F_p.
//!
//! A nonzero G in F_p[[S,T]] (arriving as a Laurent polynomial in the group
//! variables σ = 1+S, τ = 1+T) can be divisible by primes of the shape
//! σ^a τ^b - 1 for a primitive integer direction (a,b). Completing (a,b) to
//! a GL_2(Z) basis turns that prime into σ'-1 = S' in new coordinates, where
//! its multiplicity is just the minimum S'-degree across monomials — exact
//! and purely combinatorial.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exact::laurent::LaurentPoly;

/// Multiplicity of σ^a τ^b - 1 in g mod p, for primitive (a, b).
///
/// Errors: `NotPrimitive` when gcd(a,b) != 1, `ZeroModP` when g vanishes
/// mod p (every multiplicity would be infinite), `WrongArity` unless g has
/// exactly two variables.
pub fn prime_multiplicity_mod_p(g: &LaurentPoly, direction: (i64, i64), p: u64) -> Result<u64> {
    if g.vars() != 2 {
        return Err(Error::WrongArity {
            expected: 2,
            got: g.vars(),
        });
    }
    let (a, b) = direction;
    let e = a.extended_gcd(&b);
    if e.gcd != 1 {
        return Err(Error::NotPrimitive { a, b });
    }
    let reduced = g.reduce_coeffs_mod_p(p);
    if reduced.is_zero() {
        return Err(Error::ZeroModP { p });
    }
    // a·u + b·v = 1; M = [[a, -v], [b, u]] in GL_2(Z) sends e_1 to (a,b),
    // so remapping exponents by M^{-1} = [[u, v], [-b, a]] turns the prime
    // σ^a τ^b - 1 into σ' - 1.
    let (u, v) = (e.x, e.y);
    let remapped = reduced.map_exponents(|exp| {
        vec![u * exp[0] + v * exp[1], -b * exp[0] + a * exp[1]]
    });
    // Units ±σ'^i τ'^j don't change multiplicities; canonicalizing makes the
    // exponents nonnegative so the S-shift below is a plain polynomial move.
    let series = remapped.canonical().shift_vars_plus_one().reduce_coeffs_mod_p(p);
    let min_s_degree = series
        .terms()
        .map(|(exp, _)| exp[0])
        .min()
        .expect("nonzero mod p stays nonzero under exponent remap and shift");
    Ok(min_s_degree as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    // The Laurent variables here are the group generators σ, τ; the series
    // variables are S = σ - 1, T = τ - 1.
    fn sigma() -> LaurentPoly {
        LaurentPoly::variable(2, 0)
    }
    fn tau() -> LaurentPoly {
        LaurentPoly::variable(2, 1)
    }
    fn s() -> LaurentPoly {
        sigma().sub(&LaurentPoly::one(2))
    }
    fn t() -> LaurentPoly {
        tau().sub(&LaurentPoly::one(2))
    }

    #[test]
    fn coordinate_directions_read_off_degrees() {
        // G = S²T(σ + τ) = S²T(2 + S + T): multiplicity 2 along (1,0),
        // 1 along (0,1); the factor 2 + S + T hides no monomial prime.
        let g = s().pow(2).mul(&t()).mul(&sigma().add(&tau()));
        assert_eq!(prime_multiplicity_mod_p(&g, (1, 0), 5).unwrap(), 2);
        assert_eq!(prime_multiplicity_mod_p(&g, (0, 1), 5).unwrap(), 1);
        assert_eq!(prime_multiplicity_mod_p(&g, (1, 1), 5).unwrap(), 0);
        assert_eq!(prime_multiplicity_mod_p(&g, (1, -1), 5).unwrap(), 0);
    }

    #[test]
    fn skew_primes_are_detected() {
        // στ - 1 itself: multiplicity 1 along (1,1), 0 along the axes.
        let g = sigma().mul(&tau()).sub(&LaurentPoly::one(2));
        assert_eq!(prime_multiplicity_mod_p(&g, (1, 1), 3).unwrap(), 1);
        assert_eq!(prime_multiplicity_mod_p(&g, (1, 0), 3).unwrap(), 0);
        assert_eq!(prime_multiplicity_mod_p(&g, (0, 1), 3).unwrap(), 0);
        // σ²τ - 1 has direction (2,1); (1,1) must not see it.
        let h = sigma().pow(2).mul(&tau()).sub(&LaurentPoly::one(2));
        assert_eq!(prime_multiplicity_mod_p(&h, (2, 1), 3).unwrap(), 1);
        assert_eq!(prime_multiplicity_mod_p(&h, (1, 1), 3).unwrap(), 0);
        // σ - τ = τ(στ^{-1} - 1) lives along (1,-1).
        let w = sigma().sub(&tau());
        assert_eq!(prime_multiplicity_mod_p(&w, (1, -1), 5).unwrap(), 1);
        assert_eq!(prime_multiplicity_mod_p(&w, (1, 1), 5).unwrap(), 0);
    }

    #[test]
    fn multiplicity_is_additive_over_products() {
        let f = sigma().mul(&tau()).sub(&LaurentPoly::one(2)); // direction (1,1)
        let g = s().pow(3); // direction (1,0), three times
        let h = sigma().add(&tau()); // no monomial prime at p = 5
        let prod = f.mul(&g).mul(&h).mul(&f);
        for dir in [(1i64, 1i64), (1, 0), (0, 1), (1, -1), (2, 1)] {
            let total = prime_multiplicity_mod_p(&prod, dir, 5).unwrap();
            let parts = prime_multiplicity_mod_p(&f, dir, 5).unwrap() * 2
                + prime_multiplicity_mod_p(&g, dir, 5).unwrap()
                + prime_multiplicity_mod_p(&h, dir, 5).unwrap();
            assert_eq!(total, parts, "direction {dir:?}");
        }
    }

    #[test]
    fn mod_p_collapse_changes_the_answer() {
        // G = S² + 3S: along (1,0) the second factor S + 3 dies mod 3 only.
        let g = s().pow(2).add(&s().mul_scalar(3));
        assert_eq!(prime_multiplicity_mod_p(&g, (1, 0), 3).unwrap(), 2);
        assert_eq!(prime_multiplicity_mod_p(&g, (1, 0), 5).unwrap(), 1);
    }

    #[test]
    fn error_cases() {
        let g = s();
        assert!(matches!(
            prime_multiplicity_mod_p(&g, (2, 4), 5),
            Err(Error::NotPrimitive { a: 2, b: 4 })
        ));
        let vanishing = s().mul_scalar(5);
        assert!(matches!(
            prime_multiplicity_mod_p(&vanishing, (1, 0), 5),
            Err(Error::ZeroModP { p: 5 })
        ));
        let univar = LaurentPoly::variable(1, 0);
        assert!(matches!(
            prime_multiplicity_mod_p(&univar, (1, 0), 5),
            Err(Error::WrongArity { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn negative_direction_components_work() {
        // σ^{-1}τ - 1: direction (-1, 1).
        let g = LaurentPoly::monomial(2, &[-1, 1], 1).sub(&LaurentPoly::one(2));
        assert_eq!(prime_multiplicity_mod_p(&g, (-1, 1), 3).unwrap(), 1);
        // Its associate direction (1,-1) names the same prime:
        // σ^{-1}τ - 1 = -σ^{-1}τ(στ^{-1} - 1).
        assert_eq!(prime_multiplicity_mod_p(&g, (1, -1), 3).unwrap(), 1);
    }
}
