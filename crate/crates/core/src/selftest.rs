//! Built-in verification corpus: curated cases with independently known
//! answers plus small randomized property suites.  The CLI `selftest`
//! subcommand prints one line per item and fails if any item fails.

use crate::cyclotomic::CyclotomicInt;
use crate::density::p_density;
use crate::expsum::{exponential_sum, q_valuation, Polynomial};
use crate::ff::Field;
use crate::lfunc::{affine_point_count, l_polynomial, newton_polygon};
use crate::modular::ExponentSet;
use crate::polyparse::parse_polynomial;
use crate::stickelberger::{gauss_valuation, singleton_density};
use crate::{basep, bounds, expsum, rat, Config, Error, Int, Natural, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct SelfTestItem {
    pub name: &'static str,
    pub passed: bool,
    pub note: String,
}

fn verify(ok: bool, what: impl Into<String>) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::internal(what.into()))
    }
}

fn half_slope_rows(config: &Config) -> Result<String> {
    let rows: [(u64, &[u64]); 6] = [
        (2, &[11, 3, 1]),
        (2, &[13, 3, 1]),
        (3, &[7, 2, 1]),
        (3, &[14, 2, 1]),
        (5, &[7, 1]),
        (7, &[5, 2]),
    ];
    for (p, ds) in rows {
        let set = ExponentSet::from_integers(p, ds)?;
        let res = p_density(&set, config)?;
        verify(
            res.density == rat(1, 2),
            format!("p={p} D={ds:?}: density {} is not 1/2", res.density),
        )?;
    }
    Ok(format!("{} half-slope rows", rows.len()))
}

fn interval_endpoints(config: &Config) -> Result<String> {
    let mut cases = 0;
    for (p, n) in [(2u64, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2)] {
        let pn = p.pow(n);
        for d in [pn - 1, 2 * pn - 2] {
            if d == 0 {
                continue;
            }
            let set = ExponentSet::prime_to_p_interval(p, d)?;
            let res = p_density(&set, config)?;
            let want = rat(1, n as i64 * (p as i64 - 1));
            verify(
                res.density == want,
                format!("p={p} d={d}: density {} is not {want}", res.density),
            )?;
            cases += 1;
        }
    }
    Ok(format!("{cases} interval endpoints"))
}

fn singleton_agreement(config: &Config) -> Result<String> {
    let mut cases = 0;
    for p in [2u64, 3, 5, 7] {
        for d in 2..=20u64 {
            if d % p == 0 {
                continue;
            }
            let (tau_min, argmin) = singleton_density(p, d)?;
            let set = ExponentSet::from_integers(p, &[d])?;
            let res = p_density(&set, config)?;
            verify(
                tau_min == res.density,
                format!(
                    "p={p} d={d}: orbit-sum value {tau_min} (at a={argmin}) vs engine {}",
                    res.density
                ),
            )?;
            cases += 1;
        }
    }
    Ok(format!("{cases} singletons"))
}

fn bound_report_examples(config: &Config) -> Result<String> {
    let set = ExponentSet::from_integers(2, &[7])?;
    let rep = bounds::bound_report(&set, config)?;
    verify(rep.density.density == rat(1, 3), "density of {7} at p=2")?;
    verify(rep.weight_bound == rat(1, 3) && rep.weight_tight, "digit-weight bound of {7}")?;
    let omega = rep.omega.as_ref().expect("one-dimensional dilation is closed-form");
    verify(omega.omega == rat(1, 7), "dilation bound of {7}")?;
    verify(rep.omega_tight == Some(false), "dilation bound of {7} is not tight")?;
    verify(rep.upper_half == Some(rat(1, 2)), "demi upper bound present")?;

    let set = ExponentSet::from_integers(3, &[7, 2, 1])?;
    let rep = bounds::bound_report(&set, config)?;
    verify(
        rep.density.density == rat(1, 2) && rep.upper_half == Some(rat(1, 2)),
        "p=3 D={7,2,1} attains the demi upper bound",
    )?;
    Ok("2 bound reports".into())
}

fn tau_examples() -> Result<String> {
    for (p, d, a, want) in [
        (2u64, 3u64, 1u64, rat(1, 2)),
        (2, 7, 1, rat(1, 3)),
        (2, 7, 3, rat(2, 3)),
        (3, 2, 1, rat(1, 2)),
    ] {
        let got = gauss_valuation(p, d, a)?;
        verify(got == want, format!("tau_{d}({a}) at p={p}: {got} vs {want}"))?;
    }
    Ok("4 orbit-sum values".into())
}

fn tau_symmetry_suite() -> Result<String> {
    let mut cases = 0;
    for p in [2u64, 3, 5, 7] {
        for d in 2..=30u64 {
            if d % p == 0 {
                continue;
            }
            for a in 1..d {
                let t = gauss_valuation(p, d, a)?;
                let s = gauss_valuation(p, d, d - a)?;
                verify(
                    t.clone() + s == rat(1, 1),
                    format!("tau symmetry broken at p={p} d={d} a={a}"),
                )?;
                verify(
                    t > rat(0, 1) && t < rat(1, 1),
                    format!("tau range broken at p={p} d={d} a={a}"),
                )?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} symmetry pairs"))
}

fn exponential_sum_examples(config: &Config) -> Result<String> {
    let f4 = Field::new(2, 2, None)?;
    let cubic = Polynomial::resolve(&parse_polynomial("x1^3", None)?, &f4)?;
    let s = exponential_sum(&f4, &cubic, config)?;
    verify(s == CyclotomicInt::from_int(2, 4), "S(x^3) over F_4 is 4")?;
    let twisted = Polynomial::resolve(&parse_polynomial("[0,1]*x1^3", None)?, &f4)?;
    let s = exponential_sum(&f4, &twisted, config)?;
    verify(s == CyclotomicInt::from_int(2, -2), "S(w*x^3) over F_4 is -2")?;
    verify(
        q_valuation(&s, &f4) == Some(rat(1, 2)),
        "valuation 1/2 attained over F_4",
    )?;
    Ok("2 sums".into())
}

fn l_polynomial_example(config: &Config) -> Result<String> {
    let f2 = Field::new(2, 1, None)?;
    let f = Polynomial::resolve(&parse_polynomial("x1^3 + x1", None)?, &f2)?;
    let lp = l_polynomial(&f2, &f, config)?;
    let want: Vec<CyclotomicInt> = [1, 2, 2]
        .iter()
        .map(|&n| CyclotomicInt::from_int(2, n))
        .collect();
    verify(lp.coefficients == want, "L(x^3 + x over F_2) = 1 + 2T + 2T^2")?;
    let np = newton_polygon(&lp)?;
    verify(np.slopes == vec![rat(1, 2), rat(1, 2)], "both slopes are 1/2")?;
    let aff = affine_point_count(&f2, &f, config)?;
    verify(aff + 1 == 5, "5 projective points")?;
    Ok("1 curve".into())
}

fn ax_katz_example(config: &Config) -> Result<String> {
    let f2 = Field::new(2, 1, None)?;
    let f = Polynomial::resolve(&parse_polynomial("x1 + x2 + x3", Some(3))?, &f2)?;
    let rep = expsum::ax_katz_bound(&f2, &[f], config)?;
    verify(rep.bound == rat(2, 1), "bound 2 for one linear form in 3 variables")?;
    verify(rep.count == Natural::from(4u32), "4 kernel points over F_2")?;
    verify(rep.count_valuation == Some(rat(2, 1)), "count valuation is exactly 2")?;
    Ok("1 system".into())
}

fn rotation_suite() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut cases = 0;
    while cases < 100 {
        let p = [2u64, 3, 5, 7][rng.gen_range(0..4)];
        let m = rng.gen_range(1..=6usize);
        let modulus = basep::modulus(p, m);
        if modulus <= Natural::from(1u32) {
            continue;
        }
        let u = Natural::from(rng.gen_range(0..1u64 << 32)) % &modulus;
        let k = rng.gen_range(0..2 * m);
        let r = basep::rotate(&u, p, m, k)?;
        verify(
            basep::weight(&r, p)? == basep::weight(&u, p)?,
            format!("rotation changed the digit weight: p={p} m={m} u={u} k={k}"),
        )?;
        let full = basep::rotate(&u, p, m, m)?;
        verify(full == u, format!("m-fold rotation is not the identity: p={p} m={m} u={u}"))?;
        cases += 1;
    }
    Ok("100 rotations".into())
}

fn character_suite() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut cases = 0;
    for (p, m) in [(2u64, 3usize), (3, 2), (5, 1), (7, 1)] {
        let field = Field::new(p, m, None)?;
        for _ in 0..25 {
            let a = field.elem_of_index(rng.gen_range(0..field.order()));
            let b = field.elem_of_index(rng.gen_range(0..field.order()));
            let lhs = field.character(&field.add(&a, &b));
            let rhs = field.character(&a).mul(&field.character(&b))?;
            verify(lhs == rhs, format!("character not additive at p={p} m={m}"))?;
            cases += 1;
        }
        let mut total = CyclotomicInt::zero(p);
        for x in field.elements() {
            total = total.add(&field.character(&x))?;
        }
        verify(total.is_zero(), format!("character sum not zero at p={p} m={m}"))?;
    }
    Ok(format!("{cases} additivity cases plus 4 orthogonality sums"))
}

fn valuation_suite() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut cases = 0;
    while cases < 100 {
        let p = [2u64, 3, 5][rng.gen_range(0..3)];
        let width = (p - 1) as usize;
        let draw = |rng: &mut ChaCha8Rng| {
            let coeffs = (0..width).map(|_| Int::from(rng.gen_range(-9..=9i64))).collect();
            CyclotomicInt::from_coeffs(p, coeffs).expect("width matches p")
        };
        let a = draw(&mut rng);
        let b = draw(&mut rng);
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let va = a.valuation().expect("nonzero");
        let vb = b.valuation().expect("nonzero");
        let vab = a.mul(&b)?.valuation().expect("product of nonzeros in a domain");
        verify(
            vab == va + vb,
            format!("valuation not additive: p={p} va={va} vb={vb} v(ab)={vab}"),
        )?;
        cases += 1;
    }
    Ok("100 products".into())
}

type Check<'a> = (&'static str, Box<dyn FnOnce() -> Result<String> + 'a>);

pub fn run(config: &Config) -> Vec<SelfTestItem> {
    let checks: Vec<Check> = vec![
        ("half-slope-rows", Box::new(|| half_slope_rows(config))),
        ("interval-endpoints", Box::new(|| interval_endpoints(config))),
        ("singleton-agreement", Box::new(|| singleton_agreement(config))),
        ("bound-reports", Box::new(|| bound_report_examples(config))),
        ("orbit-sum-values", Box::new(tau_examples)),
        ("orbit-sum-symmetry", Box::new(tau_symmetry_suite)),
        ("exponential-sums", Box::new(|| exponential_sum_examples(config))),
        ("l-polynomial", Box::new(|| l_polynomial_example(config))),
        ("point-count-bound", Box::new(|| ax_katz_example(config))),
        ("digit-rotations", Box::new(rotation_suite)),
        ("additive-characters", Box::new(character_suite)),
        ("uniformizer-valuations", Box::new(valuation_suite)),
    ];
    checks
        .into_iter()
        .map(|(name, f)| match f() {
            Ok(note) => SelfTestItem {
                name,
                passed: true,
                note,
            },
            Err(e) => SelfTestItem {
                name,
                passed: false,
                note: e.to_string(),
            },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_passes() {
        let items = run(&Config::default());
        assert_eq!(items.len(), 12);
        for item in &items {
            assert!(item.passed, "{}: {}", item.name, item.note);
        }
    }
}
