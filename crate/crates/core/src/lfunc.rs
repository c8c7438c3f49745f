//! L-functions of one-variable exponential sums, their Newton polygons,
//! and the slope consequences for Artin-Schreier covers y^p - y = f(x):
//! first-slope sampling over coefficient families, the half-slope
//! (supersingularity) verdict, and the genus/slope window table.

use crate::cyclotomic::CyclotomicInt;
use crate::density::{p_density, DensityResult};
use crate::expsum::{exponential_sum, q_valuation, Polynomial};
use crate::ff::{Embedding, Field};
use crate::modular::ExponentSet;
use crate::{rat, Config, Error, Int, Rat, Result};
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest absolute extension degree reachable through the modulus table.
const MAX_ABSOLUTE_DEGREE: usize = 12;

/// Sums S_k of z^trace(f(x)) over the degree-k extensions, k = 1..=k_max.
pub fn power_sums(
    field: &Field,
    f: &Polynomial,
    k_max: usize,
    config: &Config,
) -> Result<Vec<CyclotomicInt>> {
    if f.nvars() != 1 {
        return Err(Error::validation("power sums need a one-variable polynomial"));
    }
    let p = field.p();
    let m = field.degree();
    if m * k_max > MAX_ABSOLUTE_DEGREE {
        return Err(Error::resource(format!(
            "extension degree {} exceeds the modulus table limit {MAX_ABSOLUTE_DEGREE}",
            m * k_max
        )));
    }
    let mut sums = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        if k == 1 {
            sums.push(exponential_sum(field, f, config)?);
            continue;
        }
        let ext = Field::new(p, m * k, None)?;
        let emb = Embedding::new(field, &ext)?;
        let terms: Vec<(Vec<u64>, Vec<u64>)> = f
            .terms()
            .iter()
            .map(|(e, c)| (e.clone(), emb.embed(&ext, c)))
            .collect();
        let lifted = Polynomial::from_parts(&ext, terms, 1)?;
        sums.push(exponential_sum(&ext, &lifted, config)?);
    }
    Ok(sums)
}

/// L(T) for the sum attached to f over F_q, as the degree-(d-1) polynomial
/// with exp(sum_k S_k T^k / k) = L(T); coefficients live in Z[z_p].
#[derive(Debug, Clone)]
pub struct LPolynomial {
    /// c_0 = 1 through c_{d-1}.
    pub coefficients: Vec<CyclotomicInt>,
    pub power_sums: Vec<CyclotomicInt>,
    pub p: u64,
    /// Degree of the base field over the prime field.
    pub m: usize,
}

impl LPolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// q-adic valuations of the coefficients; `None` marks zero
    /// coefficients (infinite valuation).
    pub fn valuations(&self) -> Vec<Option<Rat>> {
        let denom = self.m as i64 * (self.p as i64 - 1);
        self.coefficients
            .iter()
            .map(|c| c.valuation().map(|v| rat(v as i64, denom)))
            .collect()
    }
}

pub fn l_polynomial(field: &Field, f: &Polynomial, config: &Config) -> Result<LPolynomial> {
    if f.nvars() != 1 {
        return Err(Error::validation("the L-polynomial needs a one-variable polynomial"));
    }
    let d = f
        .terms()
        .iter()
        .map(|(e, _)| e[0])
        .max()
        .ok_or_else(|| Error::validation("the zero polynomial has no L-polynomial"))?;
    if d == 0 {
        return Err(Error::validation("a constant has no L-polynomial"));
    }
    if d % field.p() == 0 {
        return Err(Error::validation(format!(
            "degree {d} is divisible by p = {}; the family needs a degree prime to p",
            field.p()
        )));
    }
    let d = d as usize;
    let sums = power_sums(field, f, d - 1, config)?;
    let p = field.p();
    let mut coeffs = vec![CyclotomicInt::from_int(p, 1)];
    for k in 1..d {
        let mut acc = CyclotomicInt::zero(p);
        for j in 1..=k {
            acc = acc.add(&sums[j - 1].mul(&coeffs[k - j])?)?;
        }
        let ck = acc.div_int(&Int::from(k)).map_err(|_| {
            Error::internal(format!(
                "Newton recursion produced a non-integral coefficient at index {k}; \
                 the power-sum sign convention is broken"
            ))
        })?;
        coeffs.push(ck);
    }
    let lp = LPolynomial {
        coefficients: coeffs,
        power_sums: sums,
        p,
        m: field.degree(),
    };
    if d > 1 && lp.coefficients[d - 1].is_zero() {
        return Err(Error::internal(
            "the leading L-coefficient vanished; the degree must be d - 1",
        ));
    }
    // total slope: the polygon rises exactly (d-1)/2 over its full width
    if d > 1 {
        let top = q_valuation(&lp.coefficients[d - 1], field)
            .expect("leading coefficient is nonzero");
        if top != rat(d as i64 - 1, 2) {
            return Err(Error::internal(format!(
                "leading coefficient valuation {top} differs from (d-1)/2",
            )));
        }
    }
    Ok(lp)
}

/// Lower convex hull of the coefficient valuations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// Hull vertices (index, valuation), left to right.
    pub vertices: Vec<(usize, Rat)>,
    /// Slopes repeated by horizontal length; ascending.
    pub slopes: Vec<Rat>,
}

impl NewtonPolygon {
    pub fn first_slope(&self) -> Option<&Rat> {
        self.slopes.first()
    }
}

pub fn newton_polygon(l: &LPolynomial) -> Result<NewtonPolygon> {
    let pts: Vec<(usize, Rat)> = l
        .valuations()
        .into_iter()
        .enumerate()
        .filter_map(|(j, v)| v.map(|v| (j, v)))
        .collect();
    if pts.len() < 2 {
        return Ok(NewtonPolygon {
            vertices: pts,
            slopes: vec![],
        });
    }
    // monotone chain over points already sorted by index
    let mut hull: Vec<(usize, Rat)> = Vec::new();
    for pt in pts {
        while hull.len() >= 2 {
            let a = &hull[hull.len() - 2];
            let b = &hull[hull.len() - 1];
            // b survives only if a -> b -> pt turns strictly left
            let cross = rat(b.0 as i64 - a.0 as i64, 1) * (&pt.1 - &a.1)
                - (&b.1 - &a.1) * rat(pt.0 as i64 - a.0 as i64, 1);
            if cross <= Rat::zero() {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut slopes = Vec::new();
    for w in hull.windows(2) {
        let run = w[1].0 - w[0].0;
        let slope = (&w[1].1 - &w[0].1) / rat(run as i64, 1);
        for _ in 0..run {
            slopes.push(slope.clone());
        }
    }
    Ok(NewtonPolygon {
        vertices: hull,
        slopes,
    })
}

/// Affine points of y^p - y = f(x) over the base field, by enumeration.
pub fn affine_point_count(field: &Field, f: &Polynomial, config: &Config) -> Result<u64> {
    if f.nvars() != 1 {
        return Err(Error::validation("the curve equation needs a one-variable f"));
    }
    let q = field.order();
    if q * q > config.expsum_ceiling {
        return Err(Error::resource("point enumeration exceeds the ceiling"));
    }
    let lhs_values: Vec<Vec<u64>> = field
        .elements()
        .map(|y| field.sub(&field.pow(&y, field.p() as u128), &y))
        .collect();
    let mut count = 0u64;
    for x in field.elements() {
        let fx = f.evaluate(field, std::slice::from_ref(&x));
        count += lhs_values.iter().filter(|lhs| **lhs == fx).count() as u64;
    }
    Ok(count)
}

#[derive(Debug, Clone)]
pub struct SlopeSampleReport {
    pub density: Rat,
    /// Size of the coefficient family, when it fits in 128 bits.
    pub space: Option<u128>,
    pub tried: u64,
    pub exhausted: bool,
    pub min_slope: Option<Rat>,
    /// How many sampled polynomials attained `min_slope`.
    pub attained: u64,
    /// Whether the minimum equals the density exactly.
    pub attains_density: bool,
}

/// Samples the family of monic degree-d polynomials supported on the given
/// one-dimensional exponent set (lower exponents carry free coefficients,
/// zero allowed) and measures first slopes; every observed slope is checked
/// against the density lower bound.
pub fn first_slope_sample(
    field: &Field,
    set: &ExponentSet,
    budget: u64,
    seed: u64,
    config: &Config,
) -> Result<SlopeSampleReport> {
    if set.dim() != 1 {
        return Err(Error::validation("slope sampling needs a one-dimensional set"));
    }
    if field.p() != set.p() {
        return Err(Error::validation("field and exponent set use different primes"));
    }
    set.require_normalized()?;
    if budget == 0 {
        return Err(Error::validation("sample budget must be positive"));
    }
    let exponents: Vec<u64> = set.vectors().iter().map(|v| v[0]).collect();
    let d_top = *exponents.last().expect("sets are nonempty");
    if d_top < 2 {
        return Err(Error::validation(
            "the top exponent must be at least 2; degree-one covers have trivial L-polynomial",
        ));
    }
    let lower: Vec<u64> = exponents[..exponents.len() - 1].to_vec();
    let density = p_density(set, config)?.density;

    let q = field.order();
    let n_free = lower.len();
    let space = q.checked_pow(n_free as u32);
    let exhaustive = space.is_some_and(|s| s <= budget as u128);
    let deterministic_quota = if exhaustive { budget } else { budget / 2 };

    let mut tried = 0u64;
    let mut min_slope: Option<Rat> = None;
    let mut attained = 0u64;

    let measure = |indices: &[u128], tried: &mut u64| -> Result<Rat> {
        let mut terms = vec![(vec![d_top], field.one())];
        for (&d, &i) in lower.iter().zip(indices) {
            terms.push((vec![d], field.elem_of_index(i)));
        }
        let f = Polynomial::from_parts(field, terms, 1)?;
        let lp = l_polynomial(field, &f, config)?;
        let np = newton_polygon(&lp)?;
        let fs = np
            .first_slope()
            .cloned()
            .ok_or_else(|| Error::internal("a degree >= 2 cover has a nonempty polygon"))?;
        *tried += 1;
        if fs < density {
            return Err(Error::internal(format!(
                "observed first slope {fs} below the density bound {density}",
            )));
        }
        Ok(fs)
    };

    let record = |fs: Rat, min_slope: &mut Option<Rat>, attained: &mut u64| {
        match min_slope {
            Some(cur) if fs > *cur => {}
            Some(cur) if fs == *cur => *attained += 1,
            _ => {
                *min_slope = Some(fs);
                *attained = 1;
            }
        }
    };

    let mut indices: Vec<u128> = vec![0; n_free];
    let mut live = true;
    while live && tried < deterministic_quota {
        let fs = measure(&indices, &mut tried)?;
        record(fs, &mut min_slope, &mut attained);
        let mut i = 0;
        loop {
            if i == n_free {
                live = false;
                break;
            }
            indices[i] += 1;
            if indices[i] < q {
                break;
            }
            indices[i] = 0;
            i += 1;
        }
    }
    if !exhaustive {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        while tried < budget {
            let indices: Vec<u128> = (0..n_free).map(|_| rng.gen_range(0..q)).collect();
            let fs = measure(&indices, &mut tried)?;
            record(fs, &mut min_slope, &mut attained);
        }
    }

    let attains_density = min_slope.as_ref() == Some(&density);
    Ok(SlopeSampleReport {
        density,
        space,
        tried,
        exhausted: exhaustive && !live,
        min_slope,
        attained,
        attains_density,
    })
}

#[derive(Debug, Clone)]
pub struct SupersingularReport {
    pub density: DensityResult,
    /// True when the density is exactly 1/2, forcing every first slope of
    /// the family to be 1/2.
    pub supersingular: bool,
}

pub fn supersingular_check(set: &ExponentSet, config: &Config) -> Result<SupersingularReport> {
    if set.dim() != 1 {
        return Err(Error::validation("the half-slope verdict needs a one-dimensional set"));
    }
    let density = p_density(set, config)?;
    let supersingular = density.density == rat(1, 2);
    Ok(SupersingularReport {
        density,
        supersingular,
    })
}

#[derive(Debug, Clone)]
pub struct GenusRow {
    pub d: u64,
    /// Genus of y^p - y = f(x) for deg f = d prime to p.
    pub genus: u64,
    /// The n with p^n - 1 <= d <= 2p^n - 2, when d lies in such a window.
    pub window: Option<u32>,
    pub predicted: Option<Rat>,
    /// Density of the full prime-to-p support {1..d}.
    pub density: Rat,
}

/// One row per degree d <= dmax prime to p; inside a window the generic
/// first slope is pinned to 1/(n(p-1)) and the computed density is checked
/// against it.
pub fn genus_slope_table(p: u64, dmax: u64, config: &Config) -> Result<Vec<GenusRow>> {
    crate::basep::check_prime(p)?;
    if dmax < 2 {
        return Err(Error::validation("the table needs dmax >= 2"));
    }
    let mut rows = Vec::new();
    for d in 2..=dmax {
        if d % p == 0 {
            continue;
        }
        let genus = (p - 1) * (d - 1) / 2;
        let window = (1..=42u32).find(|&n| {
            let pn = (p as u128).pow(n);
            pn - 1 <= d as u128 && (d as u128) <= 2 * pn - 2
        });
        let predicted = window.map(|n| rat(1, n as i64 * (p as i64 - 1)));
        let set = ExponentSet::prime_to_p_interval(p, d)?;
        let density = p_density(&set, config)?.density;
        if let Some(pred) = &predicted {
            if *pred != density {
                return Err(Error::internal(format!(
                    "window density {density} for d = {d} differs from the predicted {pred}",
                )));
            }
        }
        rows.push(GenusRow {
            d,
            genus,
            window,
            predicted,
            density,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyparse::parse_polynomial;

    fn poly(field: &Field, text: &str) -> Polynomial {
        Polynomial::resolve(&parse_polynomial(text, None).unwrap(), field).unwrap()
    }

    fn int(p: u64, n: i64) -> CyclotomicInt {
        CyclotomicInt::from_int(p, n)
    }

    #[test]
    fn power_sum_examples() {
        let f2 = Field::new(2, 1, None).unwrap();
        let cfg = Config::default();
        let s = power_sums(&f2, &poly(&f2, "x1^3 + x1"), 2, &cfg).unwrap();
        assert_eq!(s, vec![int(2, 2), int(2, 0)]);

        let s = power_sums(&f2, &poly(&f2, "x1^3"), 2, &cfg).unwrap();
        assert_eq!(s, vec![int(2, 0), int(2, 4)]);
    }

    #[test]
    fn power_sums_respect_table_limit() {
        let f8 = Field::new(2, 3, None).unwrap();
        let err = power_sums(&f8, &poly(&f8, "x1^3"), 5, &Config::default()).unwrap_err();
        assert!(matches!(err, Error::Resource(_)));
    }

    #[test]
    fn l_polynomial_of_the_split_cubic() {
        let f2 = Field::new(2, 1, None).unwrap();
        let lp = l_polynomial(&f2, &poly(&f2, "x1^3 + x1"), &Config::default()).unwrap();
        assert_eq!(lp.coefficients, vec![int(2, 1), int(2, 2), int(2, 2)]);
        let np = newton_polygon(&lp).unwrap();
        assert_eq!(np.slopes, vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(np.vertices, vec![(0, rat(0, 1)), (2, rat(1, 1))]);
    }

    #[test]
    fn l_polynomial_of_the_plain_cubic() {
        let f2 = Field::new(2, 1, None).unwrap();
        let lp = l_polynomial(&f2, &poly(&f2, "x1^3"), &Config::default()).unwrap();
        assert_eq!(lp.coefficients, vec![int(2, 1), int(2, 0), int(2, 2)]);
        let np = newton_polygon(&lp).unwrap();
        assert_eq!(np.slopes, vec![rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn l_polynomial_of_a_quadratic_over_f3() {
        let f3 = Field::new(3, 1, None).unwrap();
        let lp = l_polynomial(&f3, &poly(&f3, "x1^2"), &Config::default()).unwrap();
        assert_eq!(lp.coefficients.len(), 2);
        let expect = int(3, 1)
            .add(&CyclotomicInt::zeta_pow(3, 1).scale(&Int::from(2)))
            .unwrap();
        assert_eq!(lp.coefficients[1], expect);
        let np = newton_polygon(&lp).unwrap();
        assert_eq!(np.slopes, vec![rat(1, 2)]);
    }

    #[test]
    fn degree_one_covers_are_trivial() {
        let f2 = Field::new(2, 1, None).unwrap();
        let lp = l_polynomial(&f2, &poly(&f2, "x1"), &Config::default()).unwrap();
        assert_eq!(lp.coefficients, vec![int(2, 1)]);
        let np = newton_polygon(&lp).unwrap();
        assert!(np.slopes.is_empty());
        assert!(np.first_slope().is_none());
    }

    #[test]
    fn rejects_bad_degrees() {
        let f2 = Field::new(2, 1, None).unwrap();
        let cfg = Config::default();
        assert!(l_polynomial(&f2, &poly(&f2, "x1^4 + x1"), &cfg).is_err());
        assert!(l_polynomial(&f2, &poly(&f2, "1"), &cfg).is_err());
    }

    #[test]
    fn point_counts_match_the_first_power_sum() {
        // for p = 2 the affine count is q + S_1
        let cfg = Config::default();
        for (m, text) in [(1usize, "x1^3 + x1"), (1, "x1^3"), (2, "x1^3"), (2, "x1^5 + x1^3")] {
            let field = Field::new(2, m, None).unwrap();
            let f = poly(&field, text);
            let aff = affine_point_count(&field, &f, &cfg).unwrap();
            let s1 = exponential_sum(&field, &f, &cfg).unwrap();
            let s1: Int = s1.coeffs()[0].clone();
            let expect = Int::from(field.order() as u64) + s1;
            assert_eq!(Int::from(aff), expect, "m={m} f={text}");
        }
        // genus-1 frozen case: 4 affine, 5 projective points
        let f2 = Field::new(2, 1, None).unwrap();
        assert_eq!(
            affine_point_count(&f2, &poly(&f2, "x1^3 + x1"), &cfg).unwrap(),
            4
        );
    }

    #[test]
    fn point_count_identity_odd_p() {
        // N_aff = q + sum over nonzero prime-field multiples a of S(a*f)
        let f3 = Field::new(3, 1, None).unwrap();
        let cfg = Config::default();
        for text in ["x1^2", "x1^4 + x1", "2*x1^5 + x1^2"] {
            let f = poly(&f3, text);
            let aff = affine_point_count(&f3, &f, &cfg).unwrap();
            let mut total = CyclotomicInt::zero(3);
            for a in 1..3u64 {
                let scaled_terms: Vec<(Vec<u64>, Vec<u64>)> = f
                    .terms()
                    .iter()
                    .map(|(e, c)| (e.clone(), f3.mul(c, &f3.from_u64(a))))
                    .collect();
                let af = Polynomial::from_parts(&f3, scaled_terms, 1).unwrap();
                total = total.add(&exponential_sum(&f3, &af, &cfg).unwrap()).unwrap();
            }
            // conjugate sums: the total is a rational integer
            assert!(total.coeffs()[1].is_zero(), "f={text}");
            let expect = Int::from(f3.order() as u64) + total.coeffs()[0].clone();
            assert_eq!(Int::from(aff), expect, "f={text}");
        }
    }

    #[test]
    fn slope_sample_exhausts_small_family() {
        let f2 = Field::new(2, 1, None).unwrap();
        let set = ExponentSet::from_integers(2, &[3, 1]).unwrap();
        let rep = first_slope_sample(&f2, &set, 16, 0, &Config::default()).unwrap();
        assert_eq!(rep.density, rat(1, 2));
        assert_eq!(rep.space, Some(2));
        assert_eq!(rep.tried, 2);
        assert!(rep.exhausted);
        assert_eq!(rep.min_slope, Some(rat(1, 2)));
        assert_eq!(rep.attained, 2);
        assert!(rep.attains_density);
    }

    #[test]
    fn slope_sample_randomized_respects_budget() {
        let f4 = Field::new(2, 2, None).unwrap();
        let set = ExponentSet::from_integers(2, &[5, 3, 1]).unwrap();
        let rep = first_slope_sample(&f4, &set, 6, 3, &Config::default()).unwrap();
        assert_eq!(rep.tried, 6);
        assert!(!rep.exhausted);
        assert!(rep.min_slope.unwrap() >= rep.density);
    }

    #[test]
    fn slope_sample_rejects_degenerate_input() {
        let f2 = Field::new(2, 1, None).unwrap();
        let cfg = Config::default();
        let one = ExponentSet::from_integers(2, &[1]).unwrap();
        assert!(first_slope_sample(&f2, &one, 4, 0, &cfg).is_err());
        let unnormalized = ExponentSet::from_integers(2, &[6, 1]).unwrap();
        assert!(first_slope_sample(&f2, &unnormalized, 4, 0, &cfg).is_err());
    }

    #[test]
    fn supersingular_verdicts() {
        let cfg = Config::default();
        let yes = ExponentSet::from_integers(2, &[11, 3, 1]).unwrap();
        let rep = supersingular_check(&yes, &cfg).unwrap();
        assert!(rep.supersingular);
        assert_eq!(rep.density.density, rat(1, 2));

        let no = ExponentSet::from_integers(2, &[7, 3, 1]).unwrap();
        let rep = supersingular_check(&no, &cfg).unwrap();
        assert!(!rep.supersingular);
        assert_eq!(rep.density.density, rat(1, 3));
    }

    #[test]
    fn pulled_back_family_keeps_the_verdict() {
        let cfg = Config::default();
        let base = ExponentSet::from_integers(3, &[14, 2, 1]).unwrap();
        let doubled = ExponentSet::from_integers(3, &[28, 4, 2]).unwrap();
        let a = supersingular_check(&base, &cfg).unwrap();
        let b = supersingular_check(&doubled, &cfg).unwrap();
        assert!(a.supersingular);
        assert!(b.supersingular);
    }

    #[test]
    fn genus_table_small() {
        let cfg = Config::default();
        let rows = genus_slope_table(2, 13, &cfg).unwrap();
        let by_d: std::collections::BTreeMap<u64, &GenusRow> =
            rows.iter().map(|r| (r.d, r)).collect();
        assert_eq!(rows.len(), 6); // odd d in 3..=13
        assert_eq!(by_d[&3].genus, 1);
        assert_eq!(by_d[&3].window, Some(2));
        assert_eq!(by_d[&3].density, rat(1, 2));
        assert_eq!(by_d[&7].window, Some(3));
        assert_eq!(by_d[&7].density, rat(1, 3));
        assert_eq!(by_d[&13].genus, 6);
        assert_eq!(by_d[&13].window, Some(3));
        assert_eq!(by_d[&13].density, rat(1, 3));

        // p = 3 has gaps between windows
        let rows = genus_slope_table(3, 8, &cfg).unwrap();
        let by_d: std::collections::BTreeMap<u64, &GenusRow> =
            rows.iter().map(|r| (r.d, r)).collect();
        assert_eq!(by_d[&2].window, Some(1));
        assert_eq!(by_d[&2].density, rat(1, 2));
        assert_eq!(by_d[&4].window, Some(1));
        assert_eq!(by_d[&5].window, None);
        assert_eq!(by_d[&7].window, None);
        assert_eq!(by_d[&8].window, Some(2));
        assert_eq!(by_d[&8].density, rat(1, 4));
        assert_eq!(by_d[&8].genus, 7);
    }

    #[test]
    fn slope_sum_invariant_across_a_corpus() {
        let cfg = Config::default();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for (p, m) in [(2u64, 1usize), (2, 2), (3, 1), (5, 1)] {
            let field = Field::new(p, m, None).unwrap();
            let q = field.order();
            for _ in 0..20 {
                let d = loop {
                    let d = rng.gen_range(2..=7u64);
                    if d % p != 0 {
                        break d;
                    }
                };
                if m * (d as usize - 1) > MAX_ABSOLUTE_DEGREE {
                    continue;
                }
                let mut terms = vec![(vec![d], field.elem_of_index(rng.gen_range(1..q)))];
                for e in 1..d {
                    if rng.gen_bool(0.5) {
                        terms.push((vec![e], field.elem_of_index(rng.gen_range(0..q))));
                    }
                }
                let f = Polynomial::from_parts(&field, terms, 1).unwrap();
                // the constructor itself asserts the slope-sum invariant
                let lp = l_polynomial(&field, &f, &cfg).unwrap();
                let np = newton_polygon(&lp).unwrap();
                assert_eq!(np.slopes.len(), d as usize - 1);
                let total: Rat = np.slopes.iter().fold(Rat::zero(), |a, s| a + s);
                assert_eq!(total, rat(d as i64 - 1, 2), "p={p} m={m} d={d}");
            }
        }
    }
}
