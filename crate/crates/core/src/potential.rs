//! Potential representation of homogeneous cocycle solutions.
//!
//! A symmetric solution Ĥ of the partitioning identity admits a potential
//! g with g(1) = 0 such that Ĥ(w) = Σ g(wᵢ) − g(Σ wᵢ); for Shannon entropy
//! g is u(x) = x·log₂(1/x). This module evaluates that representation,
//! recovers g from an Ĥ oracle on positive rationals, and measures the
//! residuals of the identities g must satisfy when Ĥ is homogeneous: the
//! scaling identity, vanishing of the multiplication defect
//! D(a,b) = g(ab) − a·g(b) − b·g(a) on rationals, additivity of D in each
//! slot, and additivity of the slope l(a) = g(a)/a under multiplication.

use std::sync::Arc;

use num::rational::BigRational;
use num::{One, Signed, ToPrimitive};

use crate::entropy::{u_pos, EntropyValue, WeightVector};
use crate::error::{Error, Result};
use crate::rational::{rat_int, to_f64};

/// Largest numerator/denominator accepted by [`recover_potential`]; the
/// integer ladder walks one step per unit.
const LADDER_BOUND: u64 = 1_000_000;

/// A potential function g on positive rationals, normalized by g(1) = 0.
#[derive(Clone)]
pub struct Potential {
    name: String,
    eval: Arc<dyn Fn(&BigRational) -> f64 + Send + Sync>,
}

impl Potential {
    /// Wraps an oracle, checking the g(1) = 0 normalization.
    pub fn new<F>(name: impl Into<String>, eval: F) -> Result<Self>
    where
        F: Fn(&BigRational) -> f64 + Send + Sync + 'static,
    {
        let at_one = eval(&BigRational::one());
        if at_one.is_nan() || at_one.abs() > 1e-12 {
            return Err(Error::UnnormalizedPotential(at_one));
        }
        Ok(Potential {
            name: name.into(),
            eval: Arc::new(eval),
        })
    }

    /// The Shannon potential g = u.
    pub fn shannon_u() -> Self {
        Potential::new("u", |a| u_pos(to_f64(a))).expect("u(1) = 0")
    }

    /// c·u, still a valid potential for the scaled cocycle solution.
    pub fn scaled_u(c: f64) -> Self {
        Potential::new(format!("{c}*u"), move |a| c * u_pos(to_f64(a))).expect("c·u(1) = 0")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, a: &BigRational) -> f64 {
        (self.eval)(a)
    }
}

impl std::fmt::Debug for Potential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Potential").field("name", &self.name).finish()
    }
}

type PairOracle = dyn Fn(&BigRational, &BigRational) -> f64 + Send + Sync;

/// The multiplication defect D(a,b) = g(ab) − a·g(b) − b·g(a) of some g.
#[derive(Clone)]
pub struct Defect {
    eval: Arc<PairOracle>,
}

impl Defect {
    pub fn eval(&self, a: &BigRational, b: &BigRational) -> f64 {
        (self.eval)(a, b)
    }
}

/// Σ g(wᵢ) − g(Σ wᵢ): the entropy the potential g induces on a weight
/// vector. Oracle misbehavior (NaN at some argument) surfaces as a
/// non-finite error.
pub fn hat_from_potential(g: &Potential, w: &WeightVector) -> Result<EntropyValue> {
    let s = w.total();
    if !s.is_positive() {
        return Err(Error::ZeroTotalWeight);
    }
    let terms: Vec<f64> = w.entries().iter().map(|a| g.eval(a)).collect();
    let value = crate::entropy::stable_sum(terms) - g.eval(&s);
    EntropyValue::new(value, "hat_from_potential")
}

/// Recovers g(q) from an Ĥ oracle, assuming Ĥ is symmetric, additive over
/// partitionings, and homogeneous on the probed inputs.
///
/// Integers climb the ladder g(n+1) = g(n) − Ĥ(n, 1) from g(1) = 0; a
/// fraction p/q then follows from Ĥ(p/q, ..., p/q) = q·g(p/q) − g(p).
pub fn recover_potential<F>(hat: F, q: &BigRational) -> Result<f64>
where
    F: Fn(&WeightVector) -> Result<f64>,
{
    if !q.is_positive() {
        return Err(Error::NonPositive(q.to_string()));
    }
    let numer = q
        .numer()
        .to_u64()
        .filter(|&n| n <= LADDER_BOUND)
        .ok_or_else(|| Error::LadderTooLong(q.to_string()))?;
    let denom = q
        .denom()
        .to_u64()
        .filter(|&d| d <= LADDER_BOUND)
        .ok_or_else(|| Error::LadderTooLong(q.to_string()))?;

    // g on integers up to the numerator
    let mut g_int = 0.0;
    for n in 1..numer {
        let step = WeightVector::new(vec![rat_int(n as i64), BigRational::one()])?;
        g_int -= hat(&step)?;
    }
    if denom == 1 {
        return Ok(g_int);
    }
    let repeated = WeightVector::new(vec![q.clone(); denom as usize])?;
    Ok((hat(&repeated)? + g_int) / denom as f64)
}

/// The defect D of a potential.
pub fn defect_of(g: &Potential) -> Defect {
    let eval = g.eval.clone();
    Defect {
        eval: Arc::new(move |a: &BigRational, b: &BigRational| {
            eval(&(a * b)) - to_f64(a) * eval(b) - to_f64(b) * eval(a)
        }),
    }
}

/// Residual of the scaling identity
/// g(a(b₁+b₂)) − g(ab₁) − g(ab₂) = a·[g(b₁+b₂) − g(b₁) − g(b₂)].
/// Vanishes exactly when a = 1 and up to rounding for g = u.
pub fn homogeneity_residual(
    g: &Potential,
    a: &BigRational,
    b1: &BigRational,
    b2: &BigRational,
) -> f64 {
    let b_sum = b1 + b2;
    let lhs = g.eval(&(a * &b_sum)) - g.eval(&(a * b1)) - g.eval(&(a * b2));
    let rhs = to_f64(a) * (g.eval(&b_sum) - g.eval(b1) - g.eval(b2));
    lhs - rhs
}

/// Additivity residuals D(a, b₁+b₂) − D(a, b₁) − D(a, b₂), one per sample.
/// Additivity in the first slot follows from the symmetry of D.
pub fn bilinearity_residuals(
    d: &Defect,
    samples: &[(BigRational, BigRational, BigRational)],
) -> Vec<f64> {
    samples
        .iter()
        .map(|(a, b1, b2)| d.eval(a, &(b1 + b2)) - d.eval(a, b1) - d.eval(a, b2))
        .collect()
}

/// g(ab) − a·g(b) − b·g(a): the derivation rule that holds on positive
/// rationals for the potential of a homogeneous solution.
pub fn rational_rule_residual(g: &Potential, a: &BigRational, b: &BigRational) -> f64 {
    g.eval(&(a * b)) - to_f64(a) * g.eval(b) - to_f64(b) * g.eval(a)
}

/// The slope l(a) = g(a)/a; for g = u it is log₂(1/a) and satisfies
/// l(ab) = l(a) + l(b).
pub fn slope_function(g: &Potential, a: &BigRational) -> Result<f64> {
    if !a.is_positive() {
        return Err(Error::NonPositive(a.to_string()));
    }
    Ok(g.eval(a) / to_f64(a))
}
