//! A-priori bounds on the p-density, all exact.
//!
//! Lower bounds: the digit-weight bound `1/weight_of_set`, two covector
//! linear programs, the polytope dilation `omega`, and coordinate projection
//! densities.  Upper bound: `1/2` for one-dimensional sets other than `{1}`.
//! The aggregated report asserts every ordering relation it prints; a
//! violation is an internal invariant failure, never bad input.

use crate::basep;
use crate::density::{p_density, DensityResult};
use crate::lp::{self, Constraint, LpOutcome, Objective};
use crate::modular::ExponentSet;
use crate::{rat, Config, Error, Int, Rat, Result};
use num::{One, Zero};
use rayon::prelude::*;

/// Largest base-p digit sum among all entries of the set.
pub fn weight_of_set(set: &ExponentSet) -> u64 {
    set.vectors()
        .iter()
        .flat_map(|v| v.iter())
        .map(|&c| basep::weight_u64(c, set.p()))
        .max()
        .expect("exponent sets are nonempty")
}

/// The digit-weight lower bound `1/weight_of_set`.
pub fn weight_bound(set: &ExponentSet) -> Result<Rat> {
    set.require_normalized()?;
    Ok(rat(1, weight_of_set(set) as i64))
}

/// An optimal covector with its objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct CovectorCertificate {
    pub bound: Rat,
    pub covector: Vec<Rat>,
}

/// Covector lower bound: maximize `sum_j v_j` over `v >= 0` subject to
/// `v . d_i <= 1` for every vector (`v . weights(d_i) <= 1` in the weighted
/// variant, entries replaced by their digit sums).
///
/// Any feasible `v` certifies `density >= sum_j v_j`; the optimum is
/// returned.  Nonnegativity of `v` is required for the certificate to be
/// sound and also keeps the program bounded.
pub fn covector_bound(set: &ExponentSet, use_weights: bool) -> Result<CovectorCertificate> {
    set.require_normalized()?;
    let r = set.dim();
    let objective = vec![Rat::one(); r];
    let constraints: Vec<Constraint> = set
        .vectors()
        .iter()
        .map(|v| {
            let coeffs: Vec<Rat> = v
                .iter()
                .map(|&c| {
                    let val = if use_weights {
                        basep::weight_u64(c, set.p())
                    } else {
                        c
                    };
                    Rat::from_integer(Int::from(val))
                })
                .collect();
            Constraint::le(coeffs, Rat::one())
        })
        .collect();
    match lp::solve(Objective::Maximize, &objective, &constraints)? {
        LpOutcome::Optimal { value, point } => Ok(CovectorCertificate {
            bound: value,
            covector: point,
        }),
        other => Err(Error::internal(format!(
            "covector program must be feasible and bounded, got {other:?}"
        ))),
    }
}

/// Optimality certificate for the polytope dilation.
#[derive(Debug, Clone, PartialEq)]
pub struct DilationCertificate {
    pub omega: Rat,
    /// The positive lattice point first reached by dilating the hull of
    /// `D and 0`.
    pub lattice_point: Vec<u64>,
    /// Nonnegative coefficients with `sum_i c_i d_i = lattice_point` and
    /// `sum_i c_i = omega`.
    pub coefficients: Vec<Rat>,
}

const OMEGA_BOX_CEILING: u128 = 200_000;

/// Smallest dilation of the convex hull of `D and 0` containing a lattice
/// point with all coordinates positive.
///
/// The search ranges over lattice points `y` with `1 <= y_j <= D_j`; the
/// multiplier orbit of a minimal solution lies in that box, so restricting
/// to it cannot miss the optimum.
pub fn omega_dilation(set: &ExponentSet) -> Result<DilationCertificate> {
    let sums = set.column_sums();
    if set.dim() == 1 {
        // all mass on the largest exponent
        let dmax = set.vectors().last().unwrap()[0];
        let mut coefficients = vec![Rat::zero(); set.len()];
        *coefficients.last_mut().unwrap() = rat(1, dmax as i64);
        return Ok(DilationCertificate {
            omega: rat(1, dmax as i64),
            lattice_point: vec![1],
            coefficients,
        });
    }
    let box_size: u128 = sums.iter().map(|&s| s as u128).product();
    if box_size > OMEGA_BOX_CEILING {
        return Err(Error::resource(format!(
            "dilation search box has {box_size} lattice points, above {OMEGA_BOX_CEILING}"
        )));
    }
    let r = set.dim();
    let n = set.len();
    let mut strides = vec![1u128; r];
    for j in (0..r - 1).rev() {
        strides[j] = strides[j + 1] * sums[j + 1] as u128;
    }
    let y_of = |idx: u128| -> Vec<u64> {
        (0..r)
            .map(|j| ((idx / strides[j]) % sums[j] as u128) as u64 + 1)
            .collect()
    };
    let objective = vec![Rat::one(); n];
    let best = (0..box_size)
        .into_par_iter()
        .filter_map(|idx| {
            let y = y_of(idx);
            let constraints: Vec<Constraint> = (0..r)
                .map(|j| {
                    let coeffs: Vec<Rat> = set
                        .vectors()
                        .iter()
                        .map(|v| Rat::from_integer(Int::from(v[j])))
                        .collect();
                    Constraint::eq(coeffs, Rat::from_integer(Int::from(y[j])))
                })
                .collect();
            match lp::solve(Objective::Minimize, &objective, &constraints).ok()? {
                LpOutcome::Optimal { value, point } => Some((value, idx, point)),
                _ => None,
            }
        })
        .min_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)))
        .ok_or_else(|| {
            Error::internal("dilation box always contains the multiplier of a solution")
        })?;
    Ok(DilationCertificate {
        omega: best.0,
        lattice_point: y_of(best.1),
        coefficients: best.2,
    })
}

/// Density of the coordinate projection: a lower bound for the density of
/// the full set.  `coords` is 1-based and strictly increasing.
pub fn projection_bound(set: &ExponentSet, coords: &[usize], config: &Config) -> Result<Rat> {
    let projected = set.project(coords)?;
    Ok(p_density(&projected, config)?.density)
}

/// Best of the cheap lower bounds, with its report label.  Used by the
/// density engine to certify box-restricted searches.
pub fn best_lower_bound(set: &ExponentSet) -> Result<(&'static str, Rat)> {
    let mut best = ("digit-weight", weight_bound(set)?);
    let plain = covector_bound(set, false)?;
    if plain.bound > best.1 {
        best = ("covector", plain.bound);
    }
    let weighted = covector_bound(set, true)?;
    if weighted.bound > best.1 {
        best = ("weighted-covector", weighted.bound);
    }
    Ok(best)
}

/// True when some power of p is congruent to -1 modulo d.
pub fn is_semi_primitive(p: u64, d: u64) -> Result<bool> {
    basep::check_prime(p)?;
    if d < 2 || d.is_multiple_of(p) {
        return Err(Error::validation(
            "semi-primitivity needs d >= 2 prime to p",
        ));
    }
    let mut pk = p % d;
    loop {
        if pk == d - 1 {
            return Ok(true);
        }
        if pk == 1 {
            return Ok(false);
        }
        pk = pk * p % d;
    }
}

/// Every bound beside the computed density, with tightness flags.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub density: DensityResult,
    pub weight_of_set: u64,
    pub weight_bound: Rat,
    pub weight_tight: bool,
    pub covector: CovectorCertificate,
    pub covector_tight: bool,
    pub covector_weighted: CovectorCertificate,
    pub covector_weighted_tight: bool,
    pub omega: Option<DilationCertificate>,
    pub omega_tight: Option<bool>,
    /// (coordinate, projection density) per kept coordinate, r >= 2 only.
    pub projections: Vec<(usize, Rat)>,
    /// `Some(1/2)` when the one-dimensional two-sided bound applies.
    pub upper_half: Option<Rat>,
    /// For one-dimensional singletons: whether some p-power is -1 mod d.
    pub semi_primitive: Option<bool>,
}

/// Computes the density and all bounds, asserting every ordering relation.
///
/// The set is normalized first.  The dilation search is skipped (with `None`)
/// when its box exceeds the internal ceiling; everything else always runs.
pub fn bound_report(set: &ExponentSet, config: &Config) -> Result<BoundReport> {
    let norm = set.normalize().set;
    let density = p_density(&norm, config)?;
    let pi = density.density.clone();

    let w = weight_of_set(&norm);
    let wb = weight_bound(&norm)?;
    let cov = covector_bound(&norm, false)?;
    let covw = covector_bound(&norm, true)?;
    let omega = match omega_dilation(&norm) {
        Ok(c) => Some(c),
        Err(Error::Resource(_)) => None,
        Err(e) => return Err(e),
    };

    let check = |name: &str, bound: &Rat| -> Result<()> {
        if bound > &pi {
            return Err(Error::internal(format!(
                "{name} bound {bound} exceeds the density {pi}"
            )));
        }
        Ok(())
    };
    check("digit-weight", &wb)?;
    check("covector", &cov.bound)?;
    check("weighted-covector", &covw.bound)?;
    if let Some(ref o) = omega {
        check("dilation", &o.omega)?;
    }

    let mut projections = Vec::new();
    if norm.dim() >= 2 {
        for j in 1..=norm.dim() {
            let b = projection_bound(&norm, &[j], config)?;
            if b > pi {
                return Err(Error::internal(format!(
                    "projection bound on coordinate {j} exceeds the density"
                )));
            }
            projections.push((j, b));
        }
    }

    let is_one = norm.dim() == 1 && norm.vectors() == [vec![1]];
    let upper_half = if norm.dim() == 1 && !is_one {
        let half = rat(1, 2);
        if pi > half {
            return Err(Error::internal(
                "density exceeds 1/2 on a one-dimensional set other than {1}",
            ));
        }
        Some(half)
    } else {
        None
    };

    let semi_primitive = if norm.dim() == 1 && norm.len() == 1 && norm.vectors()[0][0] >= 2 {
        let flag = is_semi_primitive(norm.p(), norm.vectors()[0][0])?;
        if flag && pi != rat(1, 2) {
            return Err(Error::internal(
                "semi-primitive singleton must have density 1/2",
            ));
        }
        Some(flag)
    } else {
        None
    };

    Ok(BoundReport {
        weight_of_set: w,
        weight_tight: wb == pi,
        weight_bound: wb,
        covector_tight: cov.bound == pi,
        covector: cov,
        covector_weighted_tight: covw.bound == pi,
        covector_weighted: covw,
        omega_tight: omega.as_ref().map(|o| o.omega == pi),
        omega,
        projections,
        upper_half,
        semi_primitive,
        density,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Signed;

    fn exset(p: u64, vs: &[&[u64]]) -> ExponentSet {
        ExponentSet::new(p, vs.iter().map(|v| v.to_vec()).collect()).unwrap()
    }

    #[test]
    fn weight_of_set_examples() {
        assert_eq!(weight_of_set(&exset(2, &[&[11], &[3], &[1]])), 3);
        assert_eq!(weight_of_set(&exset(3, &[&[7], &[2], &[1]])), 3);
        assert_eq!(weight_of_set(&exset(5, &[&[7], &[1]])), 3);
    }

    #[test]
    fn weight_bound_examples() {
        assert_eq!(weight_bound(&exset(2, &[&[7]])).unwrap(), rat(1, 3));
        assert_eq!(weight_bound(&exset(2, &[&[1]])).unwrap(), rat(1, 1));
        assert_eq!(weight_bound(&exset(3, &[&[7], &[2], &[1]])).unwrap(), rat(1, 3));
        // requires a normalized set
        assert!(weight_bound(&exset(2, &[&[6]])).is_err());
    }

    #[test]
    fn covector_examples() {
        let c = covector_bound(&exset(2, &[&[5]]), false).unwrap();
        assert_eq!(c.bound, rat(1, 5));
        assert_eq!(c.covector, vec![rat(1, 5)]);

        let c = covector_bound(&exset(2, &[&[1, 0], &[0, 1]]), false).unwrap();
        assert_eq!(c.bound, rat(2, 1));
        assert_eq!(c.covector, vec![rat(1, 1), rat(1, 1)]);

        let c = covector_bound(&exset(2, &[&[3], &[1]]), false).unwrap();
        assert_eq!(c.bound, rat(1, 3));

        // weighted variant can be strictly better: sigma_2(3) = 2
        let c = covector_bound(&exset(2, &[&[3], &[1]]), true).unwrap();
        assert_eq!(c.bound, rat(1, 2));
    }

    #[test]
    fn covector_certificate_is_feasible() {
        for (s, w) in [
            (exset(2, &[&[3], &[5], &[1]]), false),
            (exset(3, &[&[2, 1], &[1, 2]]), false),
            (exset(3, &[&[2, 1], &[1, 2]]), true),
            (exset(5, &[&[7], &[1]]), true),
        ] {
            let c = covector_bound(&s, w).unwrap();
            for v in s.vectors() {
                let lhs: Rat = v
                    .iter()
                    .zip(&c.covector)
                    .map(|(&d, x)| {
                        let val = if w {
                            basep::weight_u64(d, s.p())
                        } else {
                            d
                        };
                        Rat::from_integer(Int::from(val)) * x
                    })
                    .fold(Rat::zero(), |a, b| a + b);
                assert!(lhs <= Rat::one());
            }
            let total: Rat = c.covector.iter().fold(Rat::zero(), |a, b| a + b.clone());
            assert_eq!(total, c.bound);
            assert!(c.covector.iter().all(|x| !x.is_negative()));
        }
    }

    #[test]
    fn omega_examples() {
        let c = omega_dilation(&exset(2, &[&[7]])).unwrap();
        assert_eq!(c.omega, rat(1, 7));
        assert_eq!(c.lattice_point, vec![1]);

        let c = omega_dilation(&exset(2, &[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(c.omega, rat(2, 1));
        assert_eq!(c.lattice_point, vec![1, 1]);

        let c = omega_dilation(&exset(2, &[&[3], &[1]])).unwrap();
        assert_eq!(c.omega, rat(1, 3));
        assert_eq!(c.lattice_point, vec![1]);
        assert_eq!(c.coefficients, vec![rat(0, 1), rat(1, 3)]);
    }

    #[test]
    fn omega_certificate_reconstructs_point() {
        let sets = [
            exset(2, &[&[2, 1], &[1, 2]]),
            exset(3, &[&[1, 1], &[2, 1]]),
            exset(2, &[&[3, 1], &[1, 2]]),
        ];
        for s in sets {
            let c = omega_dilation(&s).unwrap();
            for j in 0..s.dim() {
                let lhs: Rat = s
                    .vectors()
                    .iter()
                    .zip(&c.coefficients)
                    .map(|(v, x)| Rat::from_integer(Int::from(v[j])) * x)
                    .fold(Rat::zero(), |a, b| a + b);
                assert_eq!(lhs, Rat::from_integer(Int::from(c.lattice_point[j])));
            }
            let total: Rat = c.coefficients.iter().fold(Rat::zero(), |a, b| a + b.clone());
            assert_eq!(total, c.omega);
            assert!(c.lattice_point.iter().all(|&y| y >= 1));
        }
    }

    #[test]
    fn projection_examples() {
        let cfg = Config::default();
        let s = exset(2, &[&[3, 1], &[1, 2]]);
        let b1 = projection_bound(&s, &[1], &cfg).unwrap();
        let full = p_density(&s, &cfg).unwrap().density;
        assert!(b1 <= full);
        // identity projection returns the density itself
        let s1 = exset(2, &[&[3], &[5]]);
        assert_eq!(
            projection_bound(&s1, &[1], &cfg).unwrap(),
            p_density(&s1, &cfg).unwrap().density
        );
    }

    #[test]
    fn semi_primitive_examples() {
        assert!(is_semi_primitive(2, 3).unwrap());
        assert!(is_semi_primitive(2, 5).unwrap());
        assert!(is_semi_primitive(2, 17).unwrap());
        assert!(is_semi_primitive(3, 4).unwrap());
        assert!(!is_semi_primitive(2, 7).unwrap()); // orbit {2,4,1}
        assert!(is_semi_primitive(2, 9).unwrap()); // 2^3 = 8 = -1 mod 9
        assert!(is_semi_primitive(2, 1).is_err());
        assert!(is_semi_primitive(3, 6).is_err());
    }

    #[test]
    fn report_for_seven() {
        let cfg = Config::default();
        let r = bound_report(&exset(2, &[&[7]]), &cfg).unwrap();
        assert_eq!(r.density.density, rat(1, 3));
        assert_eq!(r.weight_bound, rat(1, 3));
        assert!(r.weight_tight);
        assert_eq!(r.omega.as_ref().unwrap().omega, rat(1, 7));
        assert_eq!(r.omega_tight, Some(false));
        assert_eq!(r.upper_half, Some(rat(1, 2)));
        assert_eq!(r.semi_primitive, Some(false));
    }

    #[test]
    fn report_hits_upper_bound() {
        let cfg = Config::default();
        let r = bound_report(&exset(3, &[&[7], &[2], &[1]]), &cfg).unwrap();
        assert_eq!(r.density.density, rat(1, 2));
        assert_eq!(r.upper_half, Some(rat(1, 2)));
        assert_eq!(r.weight_bound, rat(1, 3));
        assert!(!r.weight_tight);
    }

    #[test]
    fn report_excludes_one() {
        let cfg = Config::default();
        let r = bound_report(&exset(2, &[&[1]]), &cfg).unwrap();
        assert_eq!(r.density.density, rat(1, 1));
        assert_eq!(r.upper_half, None);
        assert_eq!(r.semi_primitive, None);
    }

    #[test]
    fn report_semi_primitive_singletons() {
        let cfg = Config::default();
        for (p, d) in [(2u64, 3u64), (2, 5), (2, 17), (3, 4)] {
            let r = bound_report(&exset(p, &[&[d]]), &cfg).unwrap();
            assert_eq!(r.semi_primitive, Some(true));
            assert_eq!(r.density.density, rat(1, 2), "p={p} d={d}");
        }
    }

    #[test]
    fn report_with_projections() {
        let cfg = Config::default();
        let r = bound_report(&exset(2, &[&[3, 1], &[1, 2]]), &cfg).unwrap();
        assert_eq!(r.projections.len(), 2);
        for (_, b) in &r.projections {
            assert!(*b <= r.density.density);
        }
        assert_eq!(r.upper_half, None);
    }

    #[test]
    fn best_lower_bound_prefers_largest() {
        // tie at 1/2 keeps the cheaper digit-weight certificate
        let s = exset(2, &[&[3], &[1]]);
        let (name, b) = best_lower_bound(&s).unwrap();
        assert_eq!(b, rat(1, 2));
        assert_eq!(name, "digit-weight");

        let s = exset(2, &[&[7]]);
        let (name, b) = best_lower_bound(&s).unwrap();
        assert_eq!(b, rat(1, 3));
        assert_eq!(name, "digit-weight");

        // strict win: digit weights (2,1),(1,1) admit the covector (0,1)
        let s = exset(2, &[&[3, 1], &[1, 2]]);
        let (name, b) = best_lower_bound(&s).unwrap();
        assert_eq!(b, rat(1, 1));
        assert_eq!(name, "weighted-covector");
    }

    #[test]
    fn bounds_never_exceed_density_random() {
        use rand::{Rng, SeedableRng};
        let cfg = Config::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut done = 0;
        while done < 20 {
            let p = [2u64, 3][rng.gen_range(0..2)];
            let k = rng.gen_range(1..=3usize);
            let mut vs = std::collections::BTreeSet::new();
            for _ in 0..k {
                vs.insert(vec![rng.gen_range(1..=9u64)]);
            }
            let Ok(s) = ExponentSet::new(p, vs.into_iter().collect()) else {
                continue;
            };
            // bound_report normalizes and asserts all orderings internally
            bound_report(&s, &cfg).unwrap();
            done += 1;
        }
    }
}
