//! Closed-form densities for one-dimensional singletons.
//!
//! For `d >= 2` prime to `p` with `l` the multiplicative order of `p` mod
//! `d`, the Gauss-sum valuation of `a` in `[1, d-1]` is
//!
//! ```text
//!   tau_d(a) = (1/l) * sum_{i=0}^{l-1} frac(a p^i / d),
//! ```
//!
//! and the density of `{d}` is the minimum of `tau_d` over `a`.  `tau` is
//! constant on p-orbits and satisfies `tau_d(a) + tau_d(d-a) = 1`.

use crate::basep;
use crate::{Error, Rat, Result};
use std::collections::BTreeMap;

fn validate(p: u64, d: u64) -> Result<u64> {
    basep::check_prime(p)?;
    if d < 2 {
        return Err(Error::validation("tau needs d >= 2"));
    }
    if d.is_multiple_of(p) {
        return Err(Error::validation("tau needs d prime to p"));
    }
    Ok(multiplicative_order(p, d))
}

/// Order of `p` in the units mod `d`; requires gcd(p, d) = 1.
pub fn multiplicative_order(p: u64, d: u64) -> u64 {
    if d == 1 {
        return 1;
    }
    let mut pk = p % d;
    let mut k = 1;
    while pk != 1 {
        pk = pk * p % d;
        k += 1;
    }
    k
}

/// Sum of residues `a p^i mod d` over one full order-length orbit.
fn orbit_residue_sum(p: u64, d: u64, a: u64, ell: u64) -> u64 {
    let mut cur = a % d;
    let mut sum = 0u64;
    for _ in 0..ell {
        sum += cur;
        cur = cur * p % d;
    }
    sum
}

/// The Gauss-sum valuation `tau_d(a)`, exact.
pub fn gauss_valuation(p: u64, d: u64, a: u64) -> Result<Rat> {
    let ell = validate(p, d)?;
    if a == 0 || a >= d {
        return Err(Error::validation(format!(
            "argument a = {a} out of range 1..={}",
            d - 1
        )));
    }
    let sum = orbit_residue_sum(p, d, a, ell);
    Ok(crate::rat(sum as i64, (ell * d) as i64))
}

/// Full table of `tau_d` with its order, computed once per p-orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauTable {
    pub p: u64,
    pub d: u64,
    pub ell: u64,
    pub values: BTreeMap<u64, Rat>,
}

pub fn gauss_valuation_table(p: u64, d: u64) -> Result<TauTable> {
    let ell = validate(p, d)?;
    let mut values = BTreeMap::new();
    for a in 1..d {
        if values.contains_key(&a) {
            continue;
        }
        let tau = crate::rat(orbit_residue_sum(p, d, a, ell) as i64, (ell * d) as i64);
        // constant on the p-orbit of a
        let mut cur = a;
        loop {
            values.insert(cur, tau.clone());
            cur = cur * p % d;
            if cur == a {
                break;
            }
        }
    }
    Ok(TauTable { p, d, ell, values })
}

/// `(min_a tau_d(a), least minimizing a)`: the density of the singleton
/// `{d}`, matching the graph engine exactly.
pub fn singleton_density(p: u64, d: u64) -> Result<(Rat, u64)> {
    let table = gauss_valuation_table(p, d)?;
    let (a, tau) = table
        .values
        .iter()
        .min_by(|x, y| x.1.cmp(y.1).then(x.0.cmp(y.0)))
        .expect("d >= 2 gives a nonempty table");
    Ok((tau.clone(), *a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn tau_examples() {
        assert_eq!(gauss_valuation(2, 3, 1).unwrap(), rat(1, 2));
        assert_eq!(gauss_valuation(2, 7, 1).unwrap(), rat(1, 3));
        assert_eq!(gauss_valuation(2, 7, 3).unwrap(), rat(2, 3));
        assert_eq!(gauss_valuation(3, 2, 1).unwrap(), rat(1, 2));
    }

    #[test]
    fn tau_validation() {
        assert!(gauss_valuation(2, 1, 1).is_err());
        assert!(gauss_valuation(2, 6, 1).is_err());
        assert!(gauss_valuation(2, 7, 0).is_err());
        assert!(gauss_valuation(2, 7, 7).is_err());
        assert!(gauss_valuation(4, 7, 1).is_err());
    }

    #[test]
    fn table_examples() {
        let t = gauss_valuation_table(2, 3).unwrap();
        assert_eq!(t.ell, 2);
        assert_eq!(t.values[&1], rat(1, 2));
        assert_eq!(t.values[&2], rat(1, 2));

        let t = gauss_valuation_table(2, 7).unwrap();
        assert_eq!(t.ell, 3);
        let want = [
            (1, rat(1, 3)),
            (2, rat(1, 3)),
            (3, rat(2, 3)),
            (4, rat(1, 3)),
            (5, rat(2, 3)),
            (6, rat(2, 3)),
        ];
        for (a, v) in want {
            assert_eq!(t.values[&a], v, "a = {a}");
        }

        let t = gauss_valuation_table(3, 2).unwrap();
        assert_eq!(t.ell, 1);
        assert_eq!(t.values.len(), 1);
        assert_eq!(t.values[&1], rat(1, 2));
    }

    #[test]
    fn singleton_examples() {
        assert_eq!(singleton_density(2, 3).unwrap(), (rat(1, 2), 1));
        assert_eq!(singleton_density(2, 7).unwrap(), (rat(1, 3), 1));
        assert_eq!(singleton_density(2, 5).unwrap(), (rat(1, 2), 1));
        // least minimizer is reported: for (2,11) the orbit of 1 has size 10
        let (v, a) = singleton_density(2, 11).unwrap();
        assert_eq!(v, rat(1, 2));
        assert_eq!(a, 1);
    }

    #[test]
    fn symmetry_and_range() {
        let mut cases = 0u32;
        for p in [2u64, 3, 5, 7] {
            for d in 2..=40u64 {
                if d % p == 0 {
                    continue;
                }
                let t = gauss_valuation_table(p, d).unwrap();
                for a in 1..d {
                    let tau = &t.values[&a];
                    assert!(tau > &rat(0, 1) && tau < &rat(1, 1));
                    assert_eq!(tau + &t.values[&(d - a)], rat(1, 1), "p={p} d={d} a={a}");
                    cases += 1;
                }
            }
        }
        assert!(cases >= 1000);
    }

    #[test]
    fn orbit_constancy() {
        for p in [2u64, 3, 5] {
            for d in 2..=30u64 {
                if d % p == 0 {
                    continue;
                }
                for a in 1..d {
                    let ta = gauss_valuation(p, d, a).unwrap();
                    let tb = gauss_valuation(p, d, a * p % d).unwrap();
                    assert_eq!(ta, tb);
                }
            }
        }
    }

    #[test]
    fn matches_density_engine_small() {
        use crate::density::p_density;
        use crate::modular::ExponentSet;
        let cfg = crate::Config::default();
        for (p, dmax) in [(2u64, 13u64), (3, 10), (5, 8)] {
            for d in 2..=dmax {
                if d % p == 0 {
                    continue;
                }
                let (tau_min, _) = singleton_density(p, d).unwrap();
                let set = ExponentSet::from_integers(p, &[d]).unwrap();
                let engine = p_density(&set, &cfg).unwrap().density;
                assert_eq!(tau_min, engine, "p={p} d={d}");
            }
        }
    }
}
