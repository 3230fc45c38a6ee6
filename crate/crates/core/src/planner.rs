//! Parameter selection for an `n`-vertex ε-distance-uniform graph with large
//! critical distance.
//!
//! For `n = 2^(2^m)` the planner picks `a + b = m` with
//!
//! ```text
//! 2^(2b) / 2^(2^a)  <=  ε  <  2^(2(b+1)) / 2^(2^(a-1))
//! ```
//!
//! and uses the proper Hanoi graph with `r = 2^(2^a)`, `k = 2^b`, which has
//! exactly `n` vertices and critical distance `2^k - 1`. Other `n` use the
//! largest `2^(2^m) <= n`, select against `ε/2` and blow the graph up to `n`
//! vertices; when `ε < 2/sqrt(n)` the plan degenerates to `K_n`. All
//! comparisons are exact. Logarithms are base 2.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow, Signed, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::blowup::blow_up;
use crate::graph::{build_explicit, ExplicitGraph, GraphError};
use crate::hanoi::HanoiParams;
use crate::rational::{format_rational, to_f64, Rational};

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("parameters out of range: {0}")]
    OutOfRange(String),
    #[error("planned parameters violate the critical-distance guarantee: {0}")]
    BoundViolated(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanMode {
    /// `n` is a double power of two; the Hanoi graph is used as is.
    Direct,
    /// Select against `ε/2` for the largest double power of two below `n`,
    /// then blow up.
    Halved,
    /// `ε < 2/sqrt(n)`: the complete graph.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CopyCounts {
    pub floor: u64,
    pub ceil: u64,
    /// Number of base vertices receiving `ceil` copies.
    pub ceil_vertices: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    pub n_target: u64,
    pub epsilon: Rational,
    /// ε in direct mode, ε/2 in halved mode.
    pub selection_epsilon: Rational,
    pub mode: PlanMode,
    pub m: u32,
    pub a: u32,
    pub b: u32,
    pub r: u64,
    pub k: u64,
    pub base_n: u64,
    pub predicted_d: u64,
    pub copy_counts: CopyCounts,
    /// `k >= log n_base / (6 log (1/selection ε))`.
    pub k_bound_holds: bool,
    pub warnings: Vec<String>,
}

impl Plan {
    pub fn is_degenerate(&self) -> bool {
        self.mode == PlanMode::Degenerate
    }

    /// Hanoi parameters of the base graph; `None` for the complete graph.
    pub fn hanoi_params(&self) -> Option<HanoiParams> {
        if self.is_degenerate() {
            return None;
        }
        HanoiParams::proper(u32::try_from(self.r).ok()?, self.k as usize).ok()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n_target,
            "epsilon": format_rational(&self.epsilon),
            "epsilon_float": to_f64(&self.epsilon),
            "selection_epsilon": format_rational(&self.selection_epsilon),
            "mode": self.mode,
            "degenerate": self.is_degenerate(),
            "m": self.m,
            "a": self.a,
            "b": self.b,
            "r": self.r,
            "k": self.k,
            "base_n": self.base_n,
            "predicted_d": self.predicted_d,
            "copy_counts": self.copy_counts,
            "k_bound_holds": self.k_bound_holds,
            "warnings": self.warnings,
        })
    }
}

fn pow2(e: u64) -> BigUint {
    BigUint::one() << e
}

fn big(x: BigUint) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

/// `ε <= 1/log2 n`, i.e. `n^p <= 2^q` for `ε = p/q`. Falls back to floating
/// point for enormous numerators or denominators.
fn within_log_hypothesis(n: u64, eps: &Rational) -> bool {
    let (p, q) = (eps.numer(), eps.denom());
    match (p.to_u32(), q.to_u64()) {
        (Some(p), Some(q)) if p <= 10_000 && q <= 10_000_000 => {
            Pow::pow(&BigUint::from(n), p) <= pow2(q)
        }
        _ => to_f64(eps) * (n as f64).log2() <= 1.0,
    }
}

/// `2^(2b) / 2^(2^a) <= eps < 2^(2(b+1)) / 2^(2^(a-1))`; at `a = 0` the right
/// side has a `sqrt 2` denominator and is compared squared.
fn chain_holds(a: u32, b: u32, eps: &Rational) -> bool {
    let lower = big(pow2(2 * b as u64)) / big(pow2(1 << a));
    if &lower > eps {
        return false;
    }
    let top = big(pow2(2 * (b as u64 + 1)));
    if a >= 1 {
        eps < &(top / big(pow2(1 << (a - 1))))
    } else {
        let two = Rational::from_integer(BigInt::from(2));
        eps * eps < top.clone() * top / two
    }
}

pub fn plan_parameters(n: u64, epsilon: &Rational) -> Result<Plan, PlanError> {
    if n < 2 {
        return Err(PlanError::OutOfRange(format!("n = {n} must be at least 2")));
    }
    if !epsilon.is_positive() || epsilon > &Rational::one() {
        return Err(PlanError::OutOfRange(format!(
            "epsilon {} must lie in (0, 1]",
            format_rational(epsilon)
        )));
    }
    let n_big = Rational::from_integer(BigInt::from(n));
    if epsilon * &n_big < Rational::one() {
        return Err(PlanError::OutOfRange(format!(
            "epsilon {} is below 1/n",
            format_rational(epsilon)
        )));
    }
    let mut warnings = Vec::new();
    let hypothesis = within_log_hypothesis(n, epsilon);
    if !hypothesis {
        warnings.push(format!(
            "epsilon {} exceeds 1/log2(n); the critical-distance guarantee is not claimed",
            format_rational(epsilon)
        ));
    }

    let mut m = 0u32;
    while (m + 1) < 6 && (1u128 << (1u32 << (m + 1))) <= n as u128 {
        m += 1;
    }
    let base_n = 1u64.checked_shl(1 << m).unwrap_or(0);
    let direct = base_n == n;

    let four = Rational::from_integer(BigInt::from(4));
    if !direct && epsilon * epsilon * &n_big < four {
        return Ok(Plan {
            n_target: n,
            epsilon: epsilon.clone(),
            selection_epsilon: epsilon.clone(),
            mode: PlanMode::Degenerate,
            m: 0,
            a: 0,
            b: 0,
            r: n,
            k: 1,
            base_n: n,
            predicted_d: 1,
            copy_counts: CopyCounts {
                floor: 1,
                ceil: 1,
                ceil_vertices: 0,
            },
            k_bound_holds: true,
            warnings,
        });
    }

    let selection = if direct {
        epsilon.clone()
    } else {
        epsilon / Rational::from_integer(BigInt::from(2))
    };
    let b = (0..=m)
        .rev()
        .find(|&b| chain_holds(m - b, b, &selection))
        .ok_or_else(|| {
            PlanError::OutOfRange(format!(
                "no (a, b) with a + b = {m} fits epsilon {}",
                format_rational(&selection)
            ))
        })?;
    let a = m - b;
    let r = 1u64 << (1u32 << a);
    let k = 1u64 << b;
    debug_assert_eq!(Some(base_n), r.checked_pow(k as u32));

    // k >= 2^m / (6 log2(1/sel))  <=>  (q/p)^(6k) >= 2^(2^m)
    let (p, q) = (
        selection.numer().to_biguint().expect("positive"),
        selection.denom().to_biguint().expect("positive"),
    );
    let e = 6 * k as u32;
    let k_bound_holds = Pow::pow(&q, e) >= pow2(1 << m) * Pow::pow(&p, e);
    // at ε = 1 the bound divides by log 1 and says nothing
    if hypothesis && !k_bound_holds && selection < Rational::one() {
        return Err(PlanError::BoundViolated(format!(
            "k = {k} for n_base = {base_n}, epsilon {}",
            format_rational(&selection)
        )));
    }
    if !k_bound_holds {
        warnings.push(format!(
            "k = {k} is below log2(n_base) / (6 log2(1/epsilon))"
        ));
    }

    let floor = n / base_n;
    let rem = n % base_n;
    Ok(Plan {
        n_target: n,
        epsilon: epsilon.clone(),
        selection_epsilon: selection,
        mode: if direct {
            PlanMode::Direct
        } else {
            PlanMode::Halved
        },
        m,
        a,
        b,
        r,
        k,
        base_n,
        predicted_d: (1u64 << k) - 1,
        copy_counts: CopyCounts {
            floor,
            ceil: floor + u64::from(rem > 0),
            ceil_vertices: rem,
        },
        k_bound_holds,
        warnings,
    })
}

/// The graph a plan describes: `K_n`, the base Hanoi graph, or its blow-up.
pub fn build_planned_graph(plan: &Plan, cap: u64) -> Result<ExplicitGraph, PlanError> {
    let Some(params) = plan.hanoi_params() else {
        if plan.n_target > cap {
            return Err(PlanError::OutOfRange(format!(
                "complete graph on {} vertices exceeds the cap {cap}",
                plan.n_target
            )));
        }
        return Ok(ExplicitGraph::complete(plan.n_target as usize));
    };
    if plan.n_target > cap {
        return Err(PlanError::OutOfRange(format!(
            "{} vertices exceed the cap {cap}",
            plan.n_target
        )));
    }
    let base = build_explicit(&params, cap)?;
    if plan.n_target == plan.base_n {
        Ok(base)
    } else {
        Ok(blow_up(&base, plan.n_target)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn direct_65536() {
        let plan = plan_parameters(1 << 16, &ratio(1, 16)).unwrap();
        assert_eq!(plan.mode, PlanMode::Direct);
        assert_eq!((plan.m, plan.a, plan.b), (4, 3, 1));
        assert_eq!(
            (plan.r, plan.k, plan.base_n, plan.predicted_d),
            (256, 2, 65536, 3)
        );
        assert!(plan.k_bound_holds);
        assert!(plan.warnings.is_empty());
    }

    #[test]
    fn chain_hand_values() {
        // a = 3, b = 1: 4/256 <= 1/16 < 16/16
        assert!(chain_holds(3, 1, &ratio(1, 16)));
        assert!(!chain_holds(2, 2, &ratio(1, 16)));
        assert!(!chain_holds(4, 0, &ratio(1, 16)));
        // a = 0 uses the sqrt 2 branch: upper 2^(2(b+1)) / sqrt 2
        assert!(chain_holds(0, 1, &ratio(2, 1)));
        assert!(!chain_holds(0, 1, &ratio(12, 1)));
    }

    #[test]
    fn intervals_tile() {
        // exactly one b fits any epsilon in [1/n, 1]
        for m in 1..=4u32 {
            for den in 1..=300u64 {
                let eps = ratio(1, den);
                if eps < ratio(1, 1u64 << (1 << m)) {
                    continue;
                }
                let fits = (0..=m).filter(|&b| chain_holds(m - b, b, &eps)).count();
                assert_eq!(fits, 1, "m = {m}, eps = 1/{den}");
            }
        }
    }

    #[test]
    fn degenerate_complete_graph() {
        let plan = plan_parameters(300, &ratio(1, 10)).unwrap();
        assert_eq!(plan.mode, PlanMode::Degenerate);
        assert_eq!(plan.predicted_d, 1);
        let g = build_planned_graph(&plan, 1 << 20).unwrap();
        assert_eq!(g.n(), 300);
        assert_eq!(g.regular_degree(), Some(299));
    }

    #[test]
    fn halved_with_blow_up() {
        // 2/sqrt(300) ~ 0.1155 <= 0.12 <= 1/log2(300) ~ 0.1215
        let plan = plan_parameters(300, &ratio(12, 100)).unwrap();
        assert_eq!(plan.mode, PlanMode::Halved);
        assert_eq!(plan.selection_epsilon, ratio(6, 100));
        assert_eq!((plan.m, plan.base_n), (3, 256));
        assert_eq!(
            plan.copy_counts,
            CopyCounts {
                floor: 1,
                ceil: 2,
                ceil_vertices: 44
            }
        );
        assert!(plan.warnings.is_empty());
        let g = build_planned_graph(&plan, 1 << 20).unwrap();
        assert_eq!(g.n(), 300);
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(
            plan_parameters(16, &ratio(1, 32)),
            Err(PlanError::OutOfRange(_))
        ));
        assert!(matches!(
            plan_parameters(16, &ratio(3, 2)),
            Err(PlanError::OutOfRange(_))
        ));
        assert!(matches!(
            plan_parameters(1, &ratio(1, 1)),
            Err(PlanError::OutOfRange(_))
        ));
        assert!(matches!(
            plan_parameters(16, &ratio(0, 1)),
            Err(PlanError::OutOfRange(_))
        ));
    }

    #[test]
    fn above_log_hypothesis_warns() {
        let plan = plan_parameters(256, &ratio(1, 4)).unwrap();
        assert!(!plan.warnings.is_empty());
        assert_eq!((plan.r, plan.k), (16, 2));
    }

    #[test]
    fn invariants_over_grid() {
        for n in [
            2u64,
            3,
            4,
            15,
            16,
            17,
            100,
            255,
            256,
            1000,
            65535,
            65536,
            1 << 20,
            u64::MAX,
        ] {
            for den in [1u64, 2, 3, 4, 5, 8, 10, 16, 32, 64, 100, 1000] {
                let eps = ratio(1, den);
                let Ok(plan) = plan_parameters(n, &eps) else {
                    assert!(
                        eps.clone() * Rational::from_integer(BigInt::from(n)) < Rational::one(),
                        "n = {n}, eps = 1/{den}"
                    );
                    continue;
                };
                if plan.is_degenerate() {
                    continue;
                }
                assert_eq!(plan.a + plan.b, plan.m);
                assert_eq!(plan.r, 1u64 << (1 << plan.a));
                assert_eq!(plan.k, 1u64 << plan.b);
                assert_eq!(
                    BigUint::from(plan.r).pow(plan.k as u32),
                    BigUint::from(plan.base_n)
                );
                let k2r = ratio(plan.k * plan.k, plan.r);
                assert!(k2r <= plan.selection_epsilon);
                let cc = plan.copy_counts;
                assert_eq!(cc.floor * plan.base_n + cc.ceil_vertices, n);
            }
        }
    }
}
