//! Exact integer arithmetic shared by the length sequences.
//!
//! Every length sequence in this crate (kernel numbers, gap lengths, the
//! period-doubling numbers) is computed over any type implementing
//! [`ExactInt`]. Primitive unsigned integers report overflow as an error;
//! [`num_bigint::BigUint`] never overflows.

use std::fmt::{Debug, Display};

use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Unsigned exact integer usable for length bookkeeping.
pub trait ExactInt:
    Clone
    + Debug
    + Display
    + Ord
    + Zero
    + One
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
{
}

impl<T> ExactInt for T where
    T: Clone
        + Debug
        + Display
        + Ord
        + Zero
        + One
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
{
}

pub(crate) fn from_usize<T: ExactInt>(v: usize, what: &'static str, index: usize) -> Result<T> {
    T::from_usize(v).ok_or(Error::Overflow { what, index })
}

pub(crate) fn add<T: ExactInt>(a: &T, b: &T, what: &'static str, index: usize) -> Result<T> {
    a.checked_add(b).ok_or(Error::Overflow { what, index })
}

pub(crate) fn sub<T: ExactInt>(a: &T, b: &T, what: &'static str, index: usize) -> Result<T> {
    a.checked_sub(b).ok_or(Error::Overflow { what, index })
}

pub(crate) fn mul<T: ExactInt>(a: &T, b: &T, what: &'static str, index: usize) -> Result<T> {
    a.checked_mul(b).ok_or(Error::Overflow { what, index })
}

/// `2^e`, by repeated doubling so that overflow is caught for every width.
pub fn pow2<T: ExactInt>(e: usize) -> Result<T> {
    let two = from_usize::<T>(2, "power of two", e)?;
    let mut acc = T::one();
    for _ in 0..e {
        acc = mul(&acc, &two, "power of two", e)?;
    }
    Ok(acc)
}

/// Converts to `u64`, failing if the value does not fit.
pub fn to_u64<T: ExactInt>(v: &T, what: &'static str, index: usize) -> Result<u64> {
    v.to_u64().ok_or(Error::Overflow { what, index })
}
