//! Completely additive arithmetic functions and the vanishing-difference
//! diagnostic.
//!
//! A completely additive l is fixed by its values on primes via
//! l(p₁^e₁···p_k^e_k) = Σ eᵢ·l(pᵢ), with l(1) = 0. If additionally
//! l(n+1) − l(n) → 0, then l is a multiple of the natural logarithm; at a
//! finite scan bound that can only be probed, so [`erdos_diagnostic`]
//! reports the tail supremum of the differences together with a
//! least-squares fit of l(n) ≈ c·ln n, and never claims more than those
//! numbers. [`bridge_identity_residual`] checks the exact algebra linking
//! the differences of l to the potential g(a) = a·l(a).

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec;

/// Largest integer the trial-division factorizer accepts.
pub const FACTOR_BOUND: u64 = 10_000_000;

/// Largest residual allowed by the log-likeness classification.
pub const FIT_RESIDUAL_THRESHOLD: f64 = 1e-6;

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = (FACTOR_BOUND as f64).sqrt() as usize + 1;
        let mut composite = vec![false; limit + 1];
        let mut primes = Vec::new();
        for n in 2..=limit {
            if !composite[n] {
                primes.push(n as u64);
                let mut m = n * n;
                while m <= limit {
                    composite[m] = true;
                    m += n;
                }
            }
        }
        primes
    })
}

/// Prime factorization by trial division over the sieved prime list.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    if n > FACTOR_BOUND {
        return Err(Error::BoundExceeded(n, FACTOR_BOUND));
    }
    let mut rest = n;
    let mut factors = Vec::new();
    for &p in small_primes() {
        if p * p > rest {
            break;
        }
        if rest.is_multiple_of(p) {
            let mut e = 0u32;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(factors)
}

/// Primality test for values within the factorization bound.
pub fn is_prime(n: u64) -> bool {
    if !(2..=FACTOR_BOUND).contains(&n) {
        return false;
    }
    for &p in small_primes() {
        if p * p > n {
            break;
        }
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    true
}

#[derive(Clone, Debug)]
enum PrimeValues {
    /// l(p) = log₂ p, so l = log₂ on all of ℕ.
    Log2,
    /// l ≡ 0.
    Zero,
    /// The 2-adic valuation: l(2) = 1, other primes 0.
    Nu2,
    /// Explicit table; unlisted primes map to 0.
    Table(BTreeMap<u64, f64>),
}

/// A completely additive function given by its values on primes.
#[derive(Clone, Debug)]
pub struct AdditiveFunction {
    name: String,
    values: PrimeValues,
}

impl AdditiveFunction {
    pub fn log2() -> Self {
        AdditiveFunction {
            name: "log2".into(),
            values: PrimeValues::Log2,
        }
    }

    pub fn zero() -> Self {
        AdditiveFunction {
            name: "zero".into(),
            values: PrimeValues::Zero,
        }
    }

    pub fn nu2() -> Self {
        AdditiveFunction {
            name: "nu2".into(),
            values: PrimeValues::Nu2,
        }
    }

    /// The three built-ins by name.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "log2" => Ok(Self::log2()),
            "zero" => Ok(Self::zero()),
            "nu2" => Ok(Self::nu2()),
            other => Err(Error::UnknownName(other.to_string())),
        }
    }

    /// Builds from an explicit prime → value table; every key must be prime.
    pub fn from_prime_table(name: impl Into<String>, table: BTreeMap<u64, f64>) -> Result<Self> {
        for &p in table.keys() {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
        }
        Ok(AdditiveFunction {
            name: name.into(),
            values: PrimeValues::Table(table),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Value on a prime.
    pub fn prime_value(&self, p: u64) -> f64 {
        match &self.values {
            PrimeValues::Log2 => (p as f64).log2(),
            PrimeValues::Zero => 0.0,
            PrimeValues::Nu2 => {
                if p == 2 {
                    1.0
                } else {
                    0.0
                }
            }
            PrimeValues::Table(t) => t.get(&p).copied().unwrap_or(0.0),
        }
    }

    /// The three built-in functions, in a fixed order.
    pub fn builtins() -> Vec<AdditiveFunction> {
        vec![Self::log2(), Self::zero(), Self::nu2()]
    }
}

/// l(n) = Σ e·l(p) over the prime powers p^e dividing n; l(1) = 0.
pub fn eval_additive(l: &AdditiveFunction, n: u64) -> Result<f64> {
    let factors = factorize(n)?;
    Ok(factors
        .into_iter()
        .map(|(p, e)| e as f64 * l.prime_value(p))
        .sum())
}

/// l(1), l(2), ..., l(n_max) as a vector (index k holds l(k+1)).
pub fn scan_values(l: &AdditiveFunction, n_max: u64) -> Result<Vec<f64>> {
    if n_max == 0 {
        return Err(Error::ZeroArgument);
    }
    if n_max > FACTOR_BOUND {
        return Err(Error::BoundExceeded(n_max, FACTOR_BOUND));
    }
    Ok(exec::map_range(1, n_max, |n| {
        eval_additive(l, n).expect("n within bound")
    }))
}

/// The difference sequence l(n+1) − l(n) for n = 1..N−1.
pub fn delta_sequence(l: &AdditiveFunction, n_max: u64) -> Result<Vec<f64>> {
    if n_max < 2 {
        return Err(Error::ScanTooShort { got: n_max, min: 2 });
    }
    let values = scan_values(l, n_max)?;
    Ok(values.windows(2).map(|w| w[1] - w[0]).collect())
}

/// Finite-scan evidence about whether l looks like c·ln n.
///
/// `tail_sup` is the largest |l(n+1) − l(n)| over n ∈ [⌈N/2⌉, N−1];
/// `fitted_c` the least-squares slope of l(n) against ln n through the
/// origin over n ∈ [2, N]; `max_fit_residual` the worst deviation from that
/// fit. `log_like` is a coarse classification, not a verdict: the
/// hypothesis is asymptotic and cannot be decided at finite N.
#[derive(Clone, Debug, Serialize)]
pub struct ErdosDiagnostic {
    pub scan_bound: u64,
    pub tail_sup: f64,
    pub fitted_c: f64,
    pub max_fit_residual: f64,
    pub tail_threshold: f64,
    pub log_like: bool,
}

pub fn erdos_diagnostic(l: &AdditiveFunction, n_max: u64) -> Result<ErdosDiagnostic> {
    if n_max < 16 {
        return Err(Error::ScanTooShort { got: n_max, min: 16 });
    }
    let values = scan_values(l, n_max)?;
    let lv = |n: u64| values[(n - 1) as usize];

    let tail_start = n_max.div_ceil(2);
    let mut tail_sup = 0.0f64;
    for n in tail_start..n_max {
        tail_sup = tail_sup.max((lv(n + 1) - lv(n)).abs());
    }

    let mut num = 0.0;
    let mut den = 0.0;
    for n in 2..=n_max {
        let ln_n = (n as f64).ln();
        num += lv(n) * ln_n;
        den += ln_n * ln_n;
    }
    let fitted_c = num / den;

    let mut max_fit_residual = 0.0f64;
    for n in 2..=n_max {
        max_fit_residual = max_fit_residual.max((lv(n) - fitted_c * (n as f64).ln()).abs());
    }

    let tail_threshold = 10.0 * (1.0 + 1.0 / (n_max as f64 / 2.0)).ln() / std::f64::consts::LN_2;
    let log_like = tail_sup < tail_threshold && max_fit_residual < FIT_RESIDUAL_THRESHOLD;

    if !tail_sup.is_finite() || !fitted_c.is_finite() || !max_fit_residual.is_finite() {
        return Err(Error::NonFinite(format!("diagnostic of {}", l.name)));
    }
    Ok(ErdosDiagnostic {
        scan_bound: n_max,
        tail_sup,
        fitted_c,
        max_fit_residual,
        tail_threshold,
        log_like,
    })
}

/// Residual of the algebraic identity
/// l(n+1) − l(n) + l(n+1)/n = g((n+1)/n) − g(1) − g(1/n)
/// for g(a) = a·l(a) with l extended to fractions by l(p/q) = l(p) − l(q).
/// Zero up to rounding for every completely additive l.
pub fn bridge_identity_residual(l: &AdditiveFunction, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let ln_n = eval_additive(l, n)?;
    let ln_n1 = eval_additive(l, n + 1)?;
    let nf = n as f64;

    let lhs = (ln_n1 - ln_n) + ln_n1 / nf;
    // g((n+1)/n) = ((n+1)/n)·(l(n+1) − l(n));  g(1) = 0;  g(1/n) = −l(n)/n
    let g_ratio = ((n as f64 + 1.0) / nf) * (ln_n1 - ln_n);
    let g_inv = (1.0 / nf) * (0.0 - ln_n);
    let rhs = g_ratio - 0.0 - g_inv;
    Ok(lhs - rhs)
}
