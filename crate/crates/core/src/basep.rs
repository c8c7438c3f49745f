//! Base-p digit expansions, digit sums and cyclic digit rotations.
//!
//! The digit rotation is the map sending an m-digit number to `p*u mod p^m-1`,
//! with the top value `p^m - 1` fixed.  On digit vectors it cyclically shifts
//! every digit one place toward the most significant position, which is the
//! form implemented here so the two fixed points of the modular description
//! (`0` and `p^m - 1`) need no special casing.

use crate::{Error, Natural, Result};
use num::{One, Zero};

/// Checks that `p` is a prime suitable as a digit base.
pub fn check_prime(p: u64) -> Result<()> {
    if p < 2 {
        return Err(Error::validation(format!("base {p} is not a prime")));
    }
    let mut k = 2u64;
    while k.saturating_mul(k) <= p {
        if p.is_multiple_of(k) {
            return Err(Error::validation(format!(
                "base {p} is not a prime (divisible by {k})"
            )));
        }
        k += 1;
    }
    Ok(())
}

/// Base-p digits of `u`, least significant first, padded to exactly `m` digits.
///
/// Fails if `u > p^m - 1` or `m = 0`.
pub fn digits(u: &Natural, p: u64, m: usize) -> Result<Vec<u64>> {
    check_prime(p)?;
    if m == 0 {
        return Err(Error::validation("digit count m must be at least 1"));
    }
    let big_p = Natural::from(p);
    let mut out = Vec::with_capacity(m);
    let mut rest = u.clone();
    for _ in 0..m {
        let digit = (&rest % &big_p)
            .try_into()
            .expect("digit below u64 prime");
        out.push(digit);
        rest /= &big_p;
    }
    if !rest.is_zero() {
        return Err(Error::validation(format!(
            "{u} does not fit in {m} base-{p} digits"
        )));
    }
    Ok(out)
}

/// Reassembles a number from base-p digits (least significant first).
pub fn from_digits(digits: &[u64], p: u64) -> Natural {
    let big_p = Natural::from(p);
    let mut acc = Natural::zero();
    for &d in digits.iter().rev() {
        acc = acc * &big_p + Natural::from(d);
    }
    acc
}

/// Sum of all base-p digits of `u` (the p-weight).
pub fn weight(u: &Natural, p: u64) -> Result<u64> {
    check_prime(p)?;
    let big_p = Natural::from(p);
    let mut acc = 0u64;
    let mut rest = u.clone();
    while !rest.is_zero() {
        let digit: u64 = (&rest % &big_p).try_into().expect("digit below u64");
        acc += digit;
        rest /= &big_p;
    }
    Ok(acc)
}

/// p-weight of a machine-word value; hot-loop variant of [`weight`].
///
/// Assumes `p` is already validated prime.
#[inline]
pub fn weight_u64(mut u: u64, p: u64) -> u64 {
    if p == 2 {
        return u64::from(u.count_ones());
    }
    let mut acc = 0;
    while u > 0 {
        acc += u % p;
        u /= p;
    }
    acc
}

/// Applies `k` cyclic digit rotations of the m-digit expansion of `u`.
///
/// One rotation sends digit position `i` to position `i+1 (mod m)`; on values
/// this is `u -> p*u mod p^m - 1` for `0 <= u <= p^m - 2`, and fixes `p^m - 1`.
pub fn rotate(u: &Natural, p: u64, m: usize, k: usize) -> Result<Natural> {
    let ds = digits(u, p, m)?;
    let k = k % m;
    let mut out = vec![0u64; m];
    for (i, &d) in ds.iter().enumerate() {
        out[(i + k) % m] = d;
    }
    Ok(from_digits(&out, p))
}

/// `p^m` as a big natural.
pub fn pow_p(p: u64, m: usize) -> Natural {
    num::pow::pow(Natural::from(p), m)
}

/// `p^m - 1` as a big natural.
pub fn modulus(p: u64, m: usize) -> Natural {
    pow_p(p, m) - Natural::one()
}
