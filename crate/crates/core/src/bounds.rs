//! Checks of the general upper-bound machinery against concrete graphs.
//!
//! All comparisons are exact. The checkers use the inclusive epsilon of a
//! report, `(max offcount + 1) / n`, under which at least `(1 - ε) n`
//! vertices sit at the critical distance from every vertex. That is the
//! hypothesis the bounds are derived from; the other-vertices epsilon can be
//! smaller than it and is not enough (the 4-cycle has ε = 1/4 at d = 1 but
//! minimum degree 2 < 3).

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::graph::{ExplicitGraph, GraphError};
use crate::rational::{format_rational, Rational};
use crate::uniformity::{all_profiles, UniformityReport};

/// Minimum degree is at least `1/ε - 1`.
pub fn min_degree_bound_holds(g: &ExplicitGraph, epsilon: &Rational) -> Result<bool, GraphError> {
    if !epsilon.is_positive() {
        return Err(GraphError::ZeroEpsilon);
    }
    // deg >= 1/ε - 1  <=>  (deg + 1) ε >= 1
    let deg = BigInt::from(g.min_degree() as u64 + 1);
    Ok(Rational::from_integer(deg) * epsilon >= Rational::one())
}

pub fn check_min_degree(g: &ExplicitGraph, report: &UniformityReport) -> Result<bool, GraphError> {
    min_degree_bound_holds(g, &report.epsilon_inclusive())
}

/// `r_j = (3^j - 1) / 2`, i.e. 1, 4, 13, 40, ...
pub fn growth_radius(j: u32) -> u64 {
    (3u64.pow(j) - 1) / 2
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthRow {
    pub j: u32,
    pub radius: u64,
    /// Smallest ball of this radius over all vertices, center included.
    pub min_ball: u64,
    /// `ε^-j`, as a fraction.
    pub required: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthTable {
    pub epsilon: String,
    pub d: u32,
    pub rows: Vec<GrowthRow>,
}

impl GrowthTable {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Ball growth along `r_1 = 1, r_{j+1} = 3 r_j + 1`: every ball of radius
/// `r_j` holds at least `ε^-j` vertices, for `j = 1` and for each `j + 1`
/// with `2 r_j + 1 <= d`.
pub fn check_neighborhood_growth(
    g: &ExplicitGraph,
    report: &UniformityReport,
) -> Result<GrowthTable, GraphError> {
    growth_table(g, &report.epsilon_inclusive(), report.d)
}

pub fn growth_table(
    g: &ExplicitGraph,
    epsilon: &Rational,
    d: u32,
) -> Result<GrowthTable, GraphError> {
    if !epsilon.is_positive() {
        return Err(GraphError::ZeroEpsilon);
    }
    let mut last_j = 1;
    while 2 * growth_radius(last_j) < d as u64 {
        last_j += 1;
    }
    let profiles = all_profiles(g);
    let inv = epsilon.recip();
    let rows = (1..=last_j)
        .map(|j| {
            let radius = growth_radius(j);
            let r32 = u32::try_from(radius).unwrap_or(u32::MAX);
            let min_ball = profiles.iter().map(|p| p.within(r32)).min().unwrap_or(0);
            let required = Pow::pow(&inv, j);
            let pass = Rational::from_integer(BigInt::from(min_ball)) >= required;
            GrowthRow {
                j,
                radius,
                min_ball,
                required: format_rational(&required),
                pass,
            }
        })
        .collect();
    Ok(GrowthTable {
        epsilon: format_rational(epsilon),
        d,
        rows,
    })
}

/// `floor(log_3 d)` for `d >= 1`.
pub fn floor_log3(d: u64) -> u32 {
    let mut f = 0;
    let mut p = 3u64;
    while p <= d {
        f += 1;
        match p.checked_mul(3) {
            Some(next) => p = next,
            None => break,
        }
    }
    f
}

/// The critical-distance bound in its integer form: with
/// `f = floor(log_3 d)`, it holds iff `n >= ε^-(f+1)`, which gives
/// `d <= 3^(log n / log ε^-1)`.
pub fn check_upper_bound(n: u64, epsilon: &Rational, d: u64) -> Result<bool, GraphError> {
    if n < 2 || d < 1 {
        return Err(GraphError::BadParams(format!(
            "need n >= 2 and d >= 1, got n = {n}, d = {d}"
        )));
    }
    if !epsilon.is_positive() || epsilon >= &Rational::one() {
        return Err(GraphError::BadParams(format!(
            "epsilon {} outside (0, 1)",
            format_rational(epsilon)
        )));
    }
    let e = floor_log3(d) + 1;
    let p = epsilon.numer().to_biguint().expect("positive");
    let q = epsilon.denom().to_biguint().expect("positive");
    Ok(BigUint::from(n) * Pow::pow(&p, e) >= Pow::pow(&q, e))
}

/// `3^(ln n / ln ε^-1)` in floating point, for display.
pub fn upper_bound_value(n: u64, epsilon: &Rational) -> f64 {
    let eps = epsilon.to_f64().unwrap_or(f64::NAN);
    3f64.powf((n as f64).ln() / (1.0 / eps).ln())
}

/// `d <= diameter <= 2d`, applicable to fully analysed connected graphs with
/// inclusive epsilon below 1/2. `None` when not applicable.
pub fn diameter_within_twice_d(report: &UniformityReport) -> Option<bool> {
    let diam = report.diameter()?;
    if report.epsilon_inclusive() >= Rational::new(BigInt::one(), BigInt::from(2)) {
        return None;
    }
    Some(report.d <= diam && diam <= 2 * report.d)
}

/// Outcome of all three checkers on one graph.
#[derive(Debug, Clone, Serialize)]
pub struct BoundsSummary {
    pub epsilon_inclusive: String,
    pub d: u32,
    pub min_degree: usize,
    pub min_degree_ok: bool,
    pub growth: GrowthTable,
    pub upper_bound_ok: bool,
    pub upper_bound_value: f64,
}

impl BoundsSummary {
    pub fn all_pass(&self) -> bool {
        self.min_degree_ok && self.growth.all_pass() && self.upper_bound_ok
    }
}

pub fn check_all(
    g: &ExplicitGraph,
    report: &UniformityReport,
) -> Result<BoundsSummary, GraphError> {
    let eps = report.epsilon_inclusive();
    let n = report.n as u64;
    let upper_bound_ok = if eps < Rational::one() {
        check_upper_bound(n, &eps, report.d as u64)?
    } else {
        // ε = 1 says nothing
        true
    };
    Ok(BoundsSummary {
        epsilon_inclusive: format_rational(&eps),
        d: report.d,
        min_degree: g.min_degree(),
        min_degree_ok: check_min_degree(g, report)?,
        growth: check_neighborhood_growth(g, report)?,
        upper_bound_ok,
        upper_bound_value: if eps < Rational::one() && !eps.is_zero() {
            upper_bound_value(n, &eps)
        } else {
            f64::INFINITY
        },
    })
}
