//! Exact scalars, polynomials, quadratic forms and low-degree polynomial
//! maps.

pub mod form;
pub mod linalg;
pub mod poly;
pub mod polymap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// Arbitrary-precision rational. Always stored reduced with a positive
/// denominator; zero is `0/1`.
pub type Rational = num_rational::BigRational;

/// Integer-valued rational.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `num/den`, reduced. Panics if `den == 0`.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Nearest `f64`, saturating to infinity for out-of-range values.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.numer().sign() == num_bigint::Sign::Minus {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}
