//! Shannon entropy on probability vectors and its homogeneous extension to
//! nonnegative weight vectors.
//!
//! For a probability vector p the entropy is H(p) = Σ u(pᵢ) with
//! u(x) = x·log₂(1/x). The extension to a weight vector w with total s > 0 is
//! Ĥ(w) = s·H(w/s), which collapses to the closed form Σ u(wᵢ) − u(s). Both
//! routes are exposed: [`hat_entropy`] computes the closed form, while
//! [`extend`] lifts an arbitrary probability-vector functional by
//! normalize-and-scale, and the two must agree for Shannon.
//!
//! Weights are exact arbitrary-precision rationals; entropy values are `f64`
//! bits. All float summation goes through a compensated sum over sorted
//! terms, so results are invariant under permutation of the input.

use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::to_f64;

/// Sum tolerance when a probability vector is built from exact rationals.
pub const RATIONAL_SUM_TOLERANCE: f64 = 1e-12;
/// Sum tolerance when a probability vector is built from floats.
pub const FLOAT_SUM_TOLERANCE: f64 = 1e-9;

/// u(x) = x·log₂(1/x), extended by continuity with u(0) = 0.
pub fn u(x: f64) -> Result<f64> {
    if x < 0.0 || x.is_nan() {
        return Err(Error::Negative(format!("{x}")));
    }
    Ok(u_pos(x))
}

/// `u` without the domain check, for internal use on validated inputs.
pub(crate) fn u_pos(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x == 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Compensated (Kahan) sum over terms sorted by `total_cmp`. Sorting first
/// makes the result independent of the order the terms arrived in.
pub(crate) fn stable_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    let mut sum = 0.0;
    let mut carry = 0.0;
    for t in terms {
        let y = t - carry;
        let s = sum + y;
        carry = (s - sum) - y;
        sum = s;
    }
    sum
}

/// An entropy value in bits (base-2 logarithms throughout).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EntropyValue(f64);

impl EntropyValue {
    pub(crate) fn new(value: f64, source: &str) -> Result<Self> {
        if value.is_finite() {
            Ok(EntropyValue(value))
        } else {
            Err(Error::NonFinite(source.to_string()))
        }
    }

    /// The value in bits.
    pub fn bits(self) -> f64 {
        self.0
    }
}

impl std::fmt::Display for EntropyValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite probability distribution: nonnegative `f64` entries summing
/// to 1 within the construction tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector {
    entries: Vec<f64>,
}

impl ProbVector {
    /// Builds from floats, allowing [`FLOAT_SUM_TOLERANCE`] slack in the sum.
    pub fn from_floats(entries: Vec<f64>) -> Result<Self> {
        Self::validated(entries, FLOAT_SUM_TOLERANCE)
    }

    /// Builds from exact rationals; only conversion rounding is tolerated.
    pub fn from_rationals(entries: &[BigRational]) -> Result<Self> {
        let floats = entries.iter().map(to_f64).collect();
        Self::validated(floats, RATIONAL_SUM_TOLERANCE)
    }

    fn validated(entries: Vec<f64>, tol: f64) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        for &e in &entries {
            if !e.is_finite() || e < 0.0 {
                return Err(Error::Negative(format!("{e}")));
            }
        }
        let sum = stable_sum(entries.clone());
        if (sum - 1.0).abs() > tol {
            return Err(Error::NotNormalized { sum, tol });
        }
        Ok(ProbVector { entries })
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length ≥ 1 by construction
    }
}

/// A finite sequence of nonnegative exact rational weights. The total may
/// be zero at the type level; operations that need positive mass check it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    entries: Vec<BigRational>,
}

impl WeightVector {
    pub fn new(entries: Vec<BigRational>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        if let Some(neg) = entries.iter().find(|e| e.is_negative()) {
            return Err(Error::Negative(neg.to_string()));
        }
        Ok(WeightVector { entries })
    }

    /// Convenience constructor from nonnegative integers.
    pub fn from_integers(weights: &[u64]) -> Self {
        let entries = weights
            .iter()
            .map(|&w| BigRational::from_integer(w.into()))
            .collect();
        WeightVector { entries }
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length ≥ 1 by construction
    }

    /// Exact total weight Σ wᵢ.
    pub fn total(&self) -> BigRational {
        self.entries
            .iter()
            .fold(BigRational::zero(), |acc, w| acc + w)
    }

    /// The vector scaled entrywise by a nonnegative rational.
    pub fn scaled(&self, c: &BigRational) -> Result<Self> {
        if c.is_negative() {
            return Err(Error::Negative(c.to_string()));
        }
        Ok(WeightVector {
            entries: self.entries.iter().map(|w| w * c).collect(),
        })
    }

    /// Entries divided by the exact total; errors on zero total mass.
    pub fn normalized(&self) -> Result<Vec<BigRational>> {
        let s = self.total();
        if !s.is_positive() {
            return Err(Error::ZeroTotalWeight);
        }
        Ok(self.entries.iter().map(|w| w / &s).collect())
    }
}

/// Shannon entropy H(p) = Σ u(pᵢ) in bits. Zero entries contribute nothing.
pub fn shannon_entropy(p: &ProbVector) -> Result<EntropyValue> {
    let terms: Vec<f64> = p
        .entries()
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| u_pos(x))
        .collect();
    EntropyValue::new(stable_sum(terms), "shannon_entropy")
}

/// Homogeneous entropy Ĥ(w) = Σ u(wᵢ) − u(Σ wᵢ), in bits.
///
/// Equals s·H(w/s) for s = Σ wᵢ; a singleton has Ĥ = 0 and an all-zero
/// vector is a domain error.
pub fn hat_entropy(w: &WeightVector) -> Result<EntropyValue> {
    let s = w.total();
    if !s.is_positive() {
        return Err(Error::ZeroTotalWeight);
    }
    Ok(hat_entropy_positive(w, &s))
}

/// Ĥ for a weight vector already known to have positive total.
pub(crate) fn hat_entropy_positive(w: &WeightVector, total: &BigRational) -> EntropyValue {
    let terms: Vec<f64> = w
        .entries()
        .iter()
        .filter(|e| e.is_positive())
        .map(|e| u_pos(to_f64(e)))
        .collect();
    EntropyValue(stable_sum(terms) - u_pos(to_f64(total)))
}

/// Lifts a probability-vector functional h to weight vectors by
/// ŵ ↦ s·h(w/s). When the exact total is 1 the oracle is called on the
/// converted entries directly, so restricting the extension back to the
/// simplex reproduces h bit for bit.
pub fn extend<F>(h: F) -> impl Fn(&WeightVector) -> Result<f64>
where
    F: Fn(&ProbVector) -> f64,
{
    move |w: &WeightVector| {
        let s = w.total();
        if !s.is_positive() {
            return Err(Error::ZeroTotalWeight);
        }
        if s.is_one() {
            let p = ProbVector::from_rationals(w.entries())?;
            return Ok(h(&p));
        }
        let p = ProbVector::from_rationals(&w.normalized()?)?;
        Ok(to_f64(&s) * h(&p))
    }
}
