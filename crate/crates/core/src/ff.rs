//! Finite-field arithmetic for F_{p^m} as F_p[t] modulo a monic irreducible.
//!
//! Elements are coefficient vectors of length m (constant term first,
//! entries reduced mod p).  Moduli come from a shipped deterministic table
//! (`data/moduli.txt`, lines `p m c0 ... cm`, ascending degree, monic) for
//! p in {2, 3, 5, 7} and m <= 12, or from the caller; either way
//! irreducibility is verified at construction.  Enumeration order is fixed:
//! the element of index i has the base-p digits of i as coefficients.

use crate::cyclotomic::CyclotomicInt;
use crate::{basep, Error, Result};
use std::collections::BTreeMap;
use std::sync::OnceLock;

const MODULUS_TABLE: &str = include_str!("../data/moduli.txt");

fn table() -> &'static BTreeMap<(u64, usize), Vec<u64>> {
    static TABLE: OnceLock<BTreeMap<(u64, usize), Vec<u64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut map = BTreeMap::new();
        for line in MODULUS_TABLE.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let nums: Vec<u64> = line
                .split_whitespace()
                .map(|w| w.parse().expect("modulus table entries are integers"))
                .collect();
            let (p, m) = (nums[0], nums[1] as usize);
            map.insert((p, m), nums[2..].to_vec());
        }
        map
    })
}

/// The shipped modulus for F_{p^m}; stable across versions.
pub fn builtin_modulus(p: u64, m: usize) -> Result<Vec<u64>> {
    table().get(&(p, m)).cloned().ok_or_else(|| {
        Error::validation(format!(
            "no built-in modulus for p = {p}, m = {m} (table covers p in {{2,3,5,7}}, m <= 12); \
             supply one explicitly"
        ))
    })
}

// dense polynomials over F_p, ascending coefficients

fn ptrim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn pmul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    ptrim(&mut out);
    out
}

fn inv_mod_p(c: u64, p: u64) -> u64 {
    // Fermat; p prime, c nonzero mod p
    let mut acc = 1u64;
    let mut base = c % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn prem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    ptrim(&mut r);
    let df = f.len() - 1;
    let lead_inv = inv_mod_p(f[df], p);
    while r.len() > df {
        let k = r.len() - 1 - df;
        let c = r[r.len() - 1] * lead_inv % p;
        for (j, &fj) in f.iter().enumerate() {
            r[j + k] = (r[j + k] + p - c * fj % p) % p;
        }
        ptrim(&mut r);
    }
    r
}

fn pgcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    ptrim(&mut x);
    ptrim(&mut y);
    while !y.is_empty() {
        let r = prem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        let inv = inv_mod_p(lead, p);
        for c in x.iter_mut() {
            *c = *c * inv % p;
        }
    }
    x
}

fn ppowmod(base: &[u64], mut e: u128, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = prem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = prem(&pmul(&acc, &b, p), f, p);
        }
        b = prem(&pmul(&b, &b, p), f, p);
        e >>= 1;
    }
    acc
}

fn fmt_poly(a: &[u64]) -> String {
    if a.is_empty() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (k, &c) in a.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let part = match (k, c) {
            (0, c) => format!("{c}"),
            (1, 1) => "t".into(),
            (1, c) => format!("{c}*t"),
            (k, 1) => format!("t^{k}"),
            (k, c) => format!("{c}*t^{k}"),
        };
        parts.push(part);
    }
    parts.join(" + ")
}

/// F_{p^m} with a verified modulus and precomputed basis traces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    p: u64,
    m: usize,
    modulus: Vec<u64>,
    trace_of_basis: Vec<u64>,
}

impl Field {
    /// Builds the field, taking the modulus from the shipped table when not
    /// supplied.  A reducible modulus is rejected with a witness factor.
    pub fn new(p: u64, m: usize, modulus: Option<Vec<u64>>) -> Result<Field> {
        basep::check_prime(p)?;
        if m == 0 {
            return Err(Error::validation("field degree m must be >= 1"));
        }
        let modulus = match modulus {
            Some(f) => f,
            None => builtin_modulus(p, m)?,
        };
        if modulus.len() != m + 1 {
            return Err(Error::validation(format!(
                "modulus must have degree {m} (got {} coefficients, need {})",
                modulus.len(),
                m + 1
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::validation("modulus coefficients must be reduced mod p"));
        }
        if modulus[m] != 1 {
            return Err(Error::validation("modulus must be monic"));
        }
        // Irreducible iff gcd(x^{p^k} - x, f) = 1 for all k <= m/2.
        for k in 1..=m / 2 {
            let e = (p as u128).pow(k as u32);
            let xq = ppowmod(&[0, 1], e, &modulus, p);
            // xq - x
            let mut g = xq;
            if g.len() < 2 {
                g.resize(2, 0);
            }
            g[1] = (g[1] + p - 1) % p;
            ptrim(&mut g);
            let gcd = pgcd(&g, &modulus, p);
            if gcd.len() > 1 {
                return Err(Error::validation(format!(
                    "modulus {} is reducible over F_{p}: factor {}",
                    fmt_poly(&modulus),
                    fmt_poly(&gcd)
                )));
            }
        }
        let mut field = Field {
            p,
            m,
            modulus,
            trace_of_basis: Vec::new(),
        };
        let mut tb = Vec::with_capacity(m);
        for j in 0..m {
            let mut e = field.zero();
            e[j] = 1;
            let mut acc = e.clone();
            let mut total = e;
            for _ in 1..m {
                acc = field.pow(&acc, p as u128);
                total = field.add(&total, &acc);
            }
            if total[1..].iter().any(|&c| c != 0) {
                return Err(Error::internal("trace of a basis element is not scalar"));
            }
            tb.push(total[0]);
        }
        field.trace_of_basis = tb;
        Ok(field)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn degree(&self) -> usize {
        self.m
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.m as u32)
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.m]
    }
    pub fn one(&self) -> Vec<u64> {
        self.from_u64(1)
    }
    pub fn from_u64(&self, c: u64) -> Vec<u64> {
        let mut e = self.zero();
        e[0] = c % self.p;
        e
    }

    pub fn check_elem(&self, x: &[u64]) -> Result<()> {
        if x.len() != self.m || x.iter().any(|&c| c >= self.p) {
            return Err(Error::validation(format!(
                "element must have {} coefficients below {}",
                self.m, self.p
            )));
        }
        Ok(())
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.p).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| (x + self.p - y) % self.p)
            .collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&x| (self.p - x) % self.p).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let prod = pmul(a, b, self.p);
        let mut r = prem(&prod, &self.modulus, self.p);
        r.resize(self.m, 0);
        r
    }

    pub fn pow(&self, a: &[u64], mut e: u128) -> Vec<u64> {
        let mut acc = self.one();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    /// Multiplicative inverse by extended euclidean division in F_p[t].
    pub fn inverse(&self, a: &[u64]) -> Result<Vec<u64>> {
        if self.is_zero(a) {
            return Err(Error::validation("zero has no inverse"));
        }
        let p = self.p;
        let mut r0 = self.modulus.clone();
        let mut r1 = a.to_vec();
        ptrim(&mut r1);
        let mut s0: Vec<u64> = vec![];
        let mut s1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            // quotient of r0 by r1
            let mut q: Vec<u64> = vec![0; r0.len().saturating_sub(r1.len()) + 1];
            let mut r = r0.clone();
            let lead_inv = inv_mod_p(*r1.last().unwrap(), p);
            while r.len() >= r1.len() && !r.is_empty() {
                let k = r.len() - r1.len();
                let c = r.last().unwrap() * lead_inv % p;
                q[k] = c;
                for (j, &fj) in r1.iter().enumerate() {
                    r[j + k] = (r[j + k] + p - c * fj % p) % p;
                }
                ptrim(&mut r);
            }
            let s2 = {
                let qs1 = pmul(&q, &s1, p);
                let mut out = vec![0u64; s0.len().max(qs1.len())];
                for (i, &c) in s0.iter().enumerate() {
                    out[i] = c;
                }
                for (i, &c) in qs1.iter().enumerate() {
                    out[i] = (out[i] + p - c) % p;
                }
                ptrim(&mut out);
                out
            };
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        if r0.len() != 1 {
            return Err(Error::internal("gcd with an irreducible modulus must be scalar"));
        }
        let scale = inv_mod_p(r0[0], p);
        let mut inv: Vec<u64> = s0.iter().map(|&c| c * scale % p).collect();
        inv.resize(self.m, 0);
        Ok(inv)
    }

    /// Absolute trace down to the prime field, via cached basis traces.
    pub fn trace(&self, x: &[u64]) -> u64 {
        x.iter()
            .zip(&self.trace_of_basis)
            .map(|(&c, &t)| c * t % self.p)
            .fold(0, |a, b| (a + b) % self.p)
    }

    /// The canonical additive character: z^trace(x).
    pub fn character(&self, x: &[u64]) -> CyclotomicInt {
        CyclotomicInt::zeta_pow(self.p, self.trace(x))
    }

    pub fn elem_of_index(&self, i: u128) -> Vec<u64> {
        let mut e = self.zero();
        let mut v = i;
        for c in e.iter_mut() {
            *c = (v % self.p as u128) as u64;
            v /= self.p as u128;
        }
        e
    }

    /// Streams all q elements in the fixed index order.
    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.order()).map(move |i| self.elem_of_index(i))
    }

    /// Evaluates a polynomial with prime-field coefficients at `x`.
    pub fn eval_prime_poly(&self, coeffs: &[u64], x: &[u64]) -> Vec<u64> {
        let mut acc = self.zero();
        for &c in coeffs.iter().rev() {
            acc = self.mul(&acc, x);
            acc = self.add(&acc, &self.from_u64(c));
        }
        acc
    }
}

const EMBED_SCAN_CEILING: u128 = 1 << 22;

/// Embedding of a base field into an extension whose degree it divides,
/// fixed by sending `t` to the first root of the base modulus in the
/// extension's enumeration order.
#[derive(Debug, Clone)]
pub struct Embedding {
    rho_powers: Vec<Vec<u64>>,
}

impl Embedding {
    pub fn new(base: &Field, ext: &Field) -> Result<Embedding> {
        if base.p != ext.p {
            return Err(Error::validation("embedding requires equal characteristics"));
        }
        if !ext.m.is_multiple_of(base.m) {
            return Err(Error::validation(
                "embedding requires the base degree to divide the extension degree",
            ));
        }
        if base.m == 1 {
            // prime field embeds canonically; the scan is unnecessary
            return Ok(Embedding {
                rho_powers: vec![ext.one()],
            });
        }
        if ext.order() > EMBED_SCAN_CEILING {
            return Err(Error::resource(format!(
                "root scan over {} elements exceeds the embedding ceiling",
                ext.order()
            )));
        }
        let rho = ext
            .elements()
            .find(|x| ext.is_zero(&ext.eval_prime_poly(&base.modulus, x)))
            .ok_or_else(|| {
                Error::internal("base modulus must split in a divisible-degree extension")
            })?;
        let mut rho_powers = Vec::with_capacity(base.m);
        let mut acc = ext.one();
        for _ in 0..base.m {
            rho_powers.push(acc.clone());
            acc = ext.mul(&acc, &rho);
        }
        Ok(Embedding { rho_powers })
    }

    pub fn embed(&self, ext: &Field, x: &[u64]) -> Vec<u64> {
        let mut out = ext.zero();
        for (c, rp) in x.iter().zip(&self.rho_powers) {
            let term: Vec<u64> = rp.iter().map(|&r| r * c % ext.p()).collect();
            out = ext.add(&out, &term);
        }
        out
    }
}
