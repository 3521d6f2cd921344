//! Working precision and small constructors for the extended-precision layer.
//!
//! All series, zeta, and Euler-product arithmetic runs at [`PREC`] bits
//! (roughly 77 decimal digits). Fourth-derivative extraction at the order-5
//! pole mixes coefficient magnitudes across many orders; 256 bits leaves a
//! wide margin over the >= 30 significant digits the numerics need.

use rug::Float;

pub const PREC: u32 = 256;

pub fn real<T>(val: T) -> Float
where
    Float: rug::Assign<T>,
{
    Float::with_val(PREC, val)
}

pub fn zero() -> Float {
    Float::with_val(PREC, 0)
}

pub fn one() -> Float {
    Float::with_val(PREC, 1)
}

/// Exact conversion of a u128 accumulator into the working precision
/// (PREC exceeds 128 bits, so no rounding occurs).
pub fn real_u128(v: u128) -> Float {
    Float::with_val(PREC, v)
}
