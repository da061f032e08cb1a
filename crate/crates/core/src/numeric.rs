//! Exact-number helpers shared by the invariant modules.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serializer;

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(p))
}

/// Renders `p/q` with an explicit denominator, e.g. `3/1`.
pub fn format_rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn as_integer(x: &BigRational) -> Option<BigInt> {
    x.is_integer().then(|| x.to_integer())
}

pub fn serialize_rational<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

pub fn serialize_opt_rational<S: Serializer>(x: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.serialize_str(&format_rational(x)),
        None => s.serialize_none(),
    }
}

/// Integers go out as JSON numbers while they fit in `i64`.
pub fn serialize_bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match x.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&x.to_string()),
    }
}

/// `floor(x)` for an exact rational.
pub fn floor(x: &BigRational) -> BigInt {
    x.floor().to_integer()
}

pub fn is_positive(x: &BigRational) -> bool {
    x.is_positive()
}

pub fn is_zero(x: &BigRational) -> bool {
    x.is_zero()
}

pub fn one() -> BigRational {
    BigRational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        assert_eq!(format_rational(&int(3)), "3/1");
        assert_eq!(format_rational(&rat(53, 13)), "53/13");
        assert_eq!(format_rational(&rat(-2, 4)), "-1/2");
        assert_eq!(floor(&rat(-1, 2)), BigInt::from(-1));
        assert_eq!(as_integer(&rat(6, 3)), Some(BigInt::from(2)));
        assert_eq!(as_integer(&rat(1, 3)), None);
    }
}
