//! Exact arithmetic for the p-density of exponent sets.
//!
//! Given a prime `p` and a finite set `D` of nonzero exponent vectors in `N^r`,
//! the p-density `pi_p(D)` is
//!
//! ```text
//!   pi_p(D) = 1/(p-1) * min_{m >= 1} sigma_p(D, m) / m
//! ```
//!
//! where `sigma_p(D, m)` is the least total base-p digit sum of a tuple
//! `U = (u_1, ..., u_n)`, `0 <= u_i <= p^m - 1`, satisfying
//! `sum_i u_i d_i = 0 (mod p^m - 1)` componentwise with every coordinate of
//! `sum_i u_i d_i` positive.  This quantity is the best exponent `e` such that
//! `q^e` divides the exponential sum `S_q(f)` of every polynomial `f` with
//! exponent support `D` over every finite field of characteristic `p`, and it
//! controls first slopes of Newton polygons of Artin-Schreier curves as well as
//! q-divisibility of point counts of affine systems.
//!
//! The crate computes `pi_p(D)` exactly (as a rational number, never floating
//! point) by reformulating the minimum over all `m` as a minimum-mean-cycle
//! problem on a finite digit-transition graph, and verifies the surrounding
//! theory at desk scale: closed-form singleton densities, linear-programming
//! and digit-weight bounds, cyclotomic-integer valuations of concrete
//! exponential sums, L-polynomials and their Newton polygons, supersingularity
//! checks, and point-count divisibility for systems of equations.
//!
//! Modules:
//! - [`basep`]: base-p digit expansions, digit sums, cyclic digit rotations.
//! - [`modular`]: exponent sets, solution tuples, exhaustive enumeration.
//! - [`density`]: the digit graph and the exact minimum-mean-cycle engine.
//! - [`bounds`]: digit-weight, covector (LP) and polytope-dilation bounds.
//! - [`stickelberger`]: closed-form singleton densities via fractional-part
//!   averages over p-orbits.
//! - [`cyclotomic`]: the ring `Z[zeta_p]` and `(1 - zeta_p)`-adic valuations.
//! - [`ff`]: finite fields `F_{p^m}` with a deterministic modulus table.
//! - [`expsum`]: exponential sums, their q-adic valuations, tightness search,
//!   point-count divisibility for polynomial systems.
//! - [`lfunc`]: power sums, L-polynomials, Newton polygons, first-slope
//!   sampling, supersingularity, genus/slope tables.
//! - [`polyparse`]: text form for sparse polynomials over a finite field.
//! - [`report`]: deterministic key/value reports.
//! - [`selftest`]: the built-in regression corpus.

pub mod basep;
pub mod bounds;
pub mod cyclotomic;
pub mod density;
pub mod error;
pub mod expsum;
pub mod ff;
pub mod lfunc;
pub mod lp;
pub mod modular;
pub mod polyparse;
pub mod report;
pub mod selftest;
pub mod stickelberger;

pub use error::Error;

/// Arbitrary-precision natural number used for solution entries and moduli.
pub type Natural = num::BigUint;
/// Arbitrary-precision signed integer.
pub type Int = num::BigInt;
/// Exact rational number; densities, bounds and slopes are always this type.
pub type Rat = num::rational::BigRational;

/// Result alias for fallible operations in this crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Resource ceilings and switches for the engines.
///
/// All limits are inclusive.  The defaults are sized for desk-scale runs;
/// every ceiling produces a resource error rather than silent truncation.
#[derive(Debug, Clone)]
pub struct Config {
    /// Largest admissible node count `prod_j D_j` for a full digit graph.
    pub node_ceiling: u64,
    /// Largest admissible search space `p^(m*n)` for exhaustive enumeration
    /// without a weight cap.
    pub enumeration_ceiling: u128,
    /// Largest admissible point count `q^r` for exponential-sum evaluation.
    pub expsum_ceiling: u128,
    /// Largest admissible `nodes * edges` product for the cycle-mean search;
    /// guards against graphs that fit in memory but not in time.
    pub cycle_work_ceiling: u64,
    /// Node counts at or below this run the full graph without trying the
    /// certified bound shortcut first.
    pub direct_threshold: u64,
    /// Re-check the engine density against exhaustive enumeration for every
    /// length the enumeration ceiling allows.
    pub validate: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            node_ceiling: 1_000_000,
            enumeration_ceiling: 1 << 24,
            expsum_ceiling: 1 << 26,
            cycle_work_ceiling: 20_000_000_000,
            direct_threshold: 256,
            validate: false,
        }
    }
}

/// Crate version string embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Pins the global worker-thread count.  Call once, before any parallel
/// work; later calls fail harmlessly inside the thread-pool builder.
pub fn set_parallelism(threads: usize) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::validation(format!("could not set the thread count: {e}")))
}

/// Exact rational from machine integers; panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}
