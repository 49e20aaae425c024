//! Small numeric helpers shared across modules.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::ToPrimitive;

use crate::error::{Error, Result};

/// Ceiling of the square root of `t`.
pub(crate) fn ceil_sqrt(t: u128) -> u128 {
    let r = t.isqrt();
    if r * r == t {
        r
    } else {
        r + 1
    }
}

/// Ceiling of an exact rational, as an `i128`.
pub(crate) fn rat_ceil_i128(r: &BigRational) -> Result<i128> {
    r.ceil()
        .to_integer()
        .to_i128()
        .ok_or_else(|| Error::capacity(format!("ceiling of {r} does not fit in 128 bits")))
}

/// Exact rational from an integer.
pub(crate) fn rat_from_i128(v: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Exact rational `num/den`.
pub(crate) fn rat(num: i128, den: i128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Checked `base^exp` for nonnegative base.
pub(crate) fn checked_pow(base: i128, exp: u32, context: &str) -> Result<i128> {
    base.checked_pow(exp)
        .ok_or_else(|| Error::capacity(format!("{context}: {base}^{exp} overflows 128 bits")))
}
