//! Exact arithmetic in the ring of integers of the p-th cyclotomic field.
//!
//! An element is stored as `sum_{k=0}^{p-2} c_k z^k` for a primitive p-th
//! root of unity `z`, reduced with `z^{p-1} = -(1 + z + ... + z^{p-2})`; the
//! reduced form is unique, so equality is coefficientwise.  The prime above
//! p is generated by `1 - z`, and the valuation along it satisfies
//! `v(integer N) = (p-1) * (p-adic valuation of N)`; exponential-sum
//! valuations divide this integer valuation by `m (p-1)`.

use crate::{basep, Error, Int, Result};
use num::{Integer, One, Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicInt {
    p: u64,
    /// length p-1; coeffs[k] multiplies z^k
    coeffs: Vec<Int>,
}

impl CyclotomicInt {
    pub fn zero(p: u64) -> Self {
        CyclotomicInt {
            p,
            coeffs: vec![Int::zero(); (p - 1) as usize],
        }
    }

    pub fn from_int(p: u64, n: impl Into<Int>) -> Self {
        let mut out = Self::zero(p);
        out.coeffs[0] = n.into();
        out
    }

    /// `z^k` in reduced form, exponent taken mod p.
    /// Builds an element from its p-1 basis coefficients.
    pub fn from_coeffs(p: u64, coeffs: Vec<Int>) -> Result<Self> {
        basep::check_prime(p)?;
        if coeffs.len() != (p - 1) as usize {
            return Err(Error::validation(format!(
                "need exactly {} coefficients for p = {p}",
                p - 1
            )));
        }
        Ok(CyclotomicInt { p, coeffs })
    }

    pub fn zeta_pow(p: u64, k: u64) -> Self {
        let k = (k % p) as usize;
        let mut out = Self::zero(p);
        if k < (p - 1) as usize {
            out.coeffs[k] = Int::one();
        } else {
            for c in out.coeffs.iter_mut() {
                *c = -Int::one();
            }
        }
        out
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check_same_p(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::validation(
                "cyclotomic operands come from different primes",
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_p(other)?;
        Ok(CyclotomicInt {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_p(other)?;
        Ok(CyclotomicInt {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        CyclotomicInt {
            p: self.p,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_p(other)?;
        let p = self.p as usize;
        // convolve with exponents mod p, then eliminate z^{p-1}
        let mut acc = vec![Int::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = (i + j) % p;
                acc[k] += a * b;
            }
        }
        let top = acc[p - 1].clone();
        let coeffs = acc[..p - 1].iter().map(|c| c - &top).collect();
        Ok(CyclotomicInt { p: self.p, coeffs })
    }

    pub fn scale(&self, n: &Int) -> Self {
        CyclotomicInt {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| c * n).collect(),
        }
    }

    /// Exact quotient by a rational integer; fails if any coefficient is
    /// not divisible.
    pub fn div_int(&self, n: &Int) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::validation("division by zero"));
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(n);
            if !r.is_zero() {
                return Err(Error::validation("coefficient not divisible"));
            }
            coeffs.push(q);
        }
        Ok(CyclotomicInt {
            p: self.p,
            coeffs,
        })
    }

    /// Value at z = 1, i.e. the coefficient sum; divisibility by `1 - z`
    /// is equivalent to p dividing it.
    pub fn augmentation(&self) -> Int {
        self.coeffs.iter().fold(Int::zero(), |a, c| a + c)
    }

    /// Exact quotient by `1 - z`; fails if not divisible.
    ///
    /// Multiplies by the cofactor `prod_{k=2}^{p-1} (1 - z^k)`, whose product
    /// with `1 - z` is exactly p, then divides every coefficient by p.
    pub fn div_one_minus_zeta(&self) -> Result<Self> {
        let p = self.p;
        if !self.augmentation().mod_floor(&Int::from(p)).is_zero() {
            return Err(Error::validation(
                "element is not divisible by the uniformizer",
            ));
        }
        let mut cof = CyclotomicInt::from_int(p, 1);
        for k in 2..p {
            let term = CyclotomicInt::from_int(p, 1)
                .sub(&CyclotomicInt::zeta_pow(p, k))
                .expect("same p");
            cof = cof.mul(&term).expect("same p");
        }
        let prod = self.mul(&cof)?;
        let pint = Int::from(p);
        let mut coeffs = Vec::with_capacity((p - 1) as usize);
        for c in &prod.coeffs {
            let (q, r) = c.div_rem(&pint);
            if !r.is_zero() {
                return Err(Error::internal(
                    "uniformizer division left a nonzero remainder",
                ));
            }
            coeffs.push(q);
        }
        Ok(CyclotomicInt { p, coeffs })
    }

    /// Valuation along `1 - z`, in integer units; `None` means infinite
    /// (the zero element).
    pub fn valuation(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let mut v = 0u64;
        let mut cur = self.clone();
        loop {
            match cur.div_one_minus_zeta() {
                Ok(next) => {
                    v += 1;
                    cur = next;
                }
                Err(_) => return Some(v),
            }
        }
    }
}

impl fmt::Display for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let lead = first;
            first = false;
            if !lead {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            }
            let mag = if lead { c.clone() } else { c.abs() };
            match k {
                0 => write!(f, "{mag}")?,
                1 if mag.abs().is_one() => {
                    write!(f, "{}z", if mag.is_negative() { "-" } else { "" })?
                }
                1 => write!(f, "{mag}*z")?,
                _ if mag.abs().is_one() => {
                    write!(f, "{}z^{k}", if mag.is_negative() { "-" } else { "" })?
                }
                _ => write!(f, "{mag}*z^{k}")?,
            }
        }
        Ok(())
    }
}
