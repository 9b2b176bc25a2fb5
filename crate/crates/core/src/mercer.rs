//! The Mercer sequence transform aₙ ↦ aₙ + sₙ/n (sₙ the running partial
//! sum) and finite-scan convergence probes.
//!
//! The transform converges to 2a exactly when aₙ converges to a; applied
//! to the difference sequence aₙ = l(n+1) − l(n) of an additive function
//! it turns the near-telescoping identity from the potential side into the
//! hypothesis the vanishing-difference theorem needs. Probes report an
//! estimated limit (mean of the last tenth of the scan) and the tail
//! supremum of deviations from it; they never assert convergence.

use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::additive::{scan_values, AdditiveFunction};
use crate::error::{Error, Result};
use crate::exec;

/// A real sequence indexed from n = 1, given by a total generator oracle.
#[derive(Clone)]
pub struct RealSequence {
    name: String,
    gen: Arc<dyn Fn(u64) -> f64 + Send + Sync>,
}

impl RealSequence {
    pub fn new<F>(name: impl Into<String>, gen: F) -> Self
    where
        F: Fn(u64) -> f64 + Send + Sync + 'static,
    {
        RealSequence {
            name: name.into(),
            gen: Arc::new(gen),
        }
    }

    /// aₙ ≡ c.
    pub fn constant(c: f64) -> Self {
        Self::new(format!("const({c})"), move |_| c)
    }

    /// aₙ = 1/n.
    pub fn reciprocal() -> Self {
        Self::new("1/n", |n| 1.0 / n as f64)
    }

    /// aₙ = 1/√n.
    pub fn inverse_sqrt() -> Self {
        Self::new("1/sqrt(n)", |n| 1.0 / (n as f64).sqrt())
    }

    /// aₙ = (−1)ⁿ.
    pub fn alternating() -> Self {
        Self::new("(-1)^n", |n| if n % 2 == 0 { 1.0 } else { -1.0 })
    }

    /// Sequence backed by precomputed values; index n reads `values[n-1]`.
    pub fn from_values(name: impl Into<String>, values: Arc<Vec<f64>>) -> Self {
        Self::new(name, move |n| values[(n - 1) as usize])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, n: u64) -> f64 {
        debug_assert!(n >= 1);
        (self.gen)(n)
    }
}

impl std::fmt::Debug for RealSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RealSequence").field("name", &self.name).finish()
    }
}

/// The transformed sequence n ↦ aₙ + sₙ/n.
///
/// Terms and prefix sums are cached behind a mutex and always extended in
/// index order, so concurrent evaluation sees the same values a sequential
/// pass would.
pub fn mercer_transform(a: &RealSequence) -> RealSequence {
    struct Cache {
        terms: Vec<f64>,
        prefix: Vec<f64>,
    }
    let inner = a.gen.clone();
    let cache = Mutex::new(Cache {
        terms: Vec::new(),
        prefix: Vec::new(),
    });
    RealSequence::new(format!("mercer({})", a.name), move |n| {
        let mut c = cache.lock().expect("cache poisoned");
        while (c.terms.len() as u64) < n {
            let k = c.terms.len() as u64 + 1;
            let t = inner(k);
            let s = c.prefix.last().copied().unwrap_or(0.0) + t;
            c.terms.push(t);
            c.prefix.push(s);
        }
        let i = (n - 1) as usize;
        c.terms[i] + c.prefix[i] / n as f64
    })
}

/// Finite-scan convergence evidence for a sequence.
#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceProbe {
    pub scan_bound: u64,
    /// Mean of the last ⌈N/10⌉ terms.
    pub estimated_limit: f64,
    /// sup over n ∈ [⌈N/2⌉, N] of |xₙ − estimated_limit|.
    pub tail_sup_deviation: f64,
}

pub fn probe(x: &RealSequence, n_max: u64) -> Result<ConvergenceProbe> {
    if n_max < 20 {
        return Err(Error::ScanTooShort { got: n_max, min: 20 });
    }
    let window_start = n_max.div_ceil(2);
    let values = exec::map_range(window_start, n_max, |n| x.eval(n));
    let at = |n: u64| values[(n - window_start) as usize];

    let limit_count = n_max.div_ceil(10);
    let limit_start = n_max - limit_count + 1;
    let mut sum = 0.0;
    for n in limit_start..=n_max {
        sum += at(n);
    }
    let estimated_limit = sum / limit_count as f64;

    let mut tail_sup_deviation = 0.0f64;
    for n in window_start..=n_max {
        tail_sup_deviation = tail_sup_deviation.max((at(n) - estimated_limit).abs());
    }

    if !estimated_limit.is_finite() || !tail_sup_deviation.is_finite() {
        return Err(Error::NonFinite(format!("probe of {}", x.name)));
    }
    Ok(ConvergenceProbe {
        scan_bound: n_max,
        estimated_limit,
        tail_sup_deviation,
    })
}

/// One row of a Mercer scan: the term, the running mean, and their sum.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MercerRow {
    pub n: u64,
    pub term: f64,
    pub mean: f64,
    pub transformed: f64,
}

/// Probes the Mercer transform of the difference sequence of `l`, returning
/// the full scan alongside the probe.
///
/// The partial sums of l(n+1) − l(n) telescope to l(n+1); that identity is
/// asserted against an independent evaluation at every n, with slack for
/// accumulated rounding.
pub fn delta_mercer_scan(
    l: &AdditiveFunction,
    n_max: u64,
) -> Result<(Vec<MercerRow>, ConvergenceProbe)> {
    if n_max < 20 {
        return Err(Error::ScanTooShort { got: n_max, min: 20 });
    }
    let values = scan_values(l, n_max + 1)?; // l(1) ..= l(n_max + 1)
    let mut rows = Vec::with_capacity(n_max as usize);
    let mut partial = 0.0;
    let mut carry = 0.0;
    for n in 1..=n_max {
        let i = (n - 1) as usize;
        let term = values[i + 1] - values[i];
        let y = term - carry;
        let t = partial + y;
        carry = (t - partial) - y;
        partial = t;
        let telescoped = values[i + 1]; // = l(n+1) − l(1), and l(1) = 0
        let allowed = 1e-12 * (n as f64 / 1e4).max(1.0);
        assert!(
            (partial - telescoped).abs() <= allowed,
            "telescoping drift {} at n = {n}",
            partial - telescoped
        );
        let mean = partial / n as f64;
        rows.push(MercerRow {
            n,
            term,
            mean,
            transformed: term + mean,
        });
    }
    let transformed: Arc<Vec<f64>> = Arc::new(rows.iter().map(|r| r.transformed).collect());
    let seq = RealSequence::from_values(format!("mercer(delta {})", l.name()), transformed);
    let probe = probe(&seq, n_max)?;
    Ok((rows, probe))
}

/// Just the probe of [`delta_mercer_scan`].
pub fn delta_mercer(l: &AdditiveFunction, n_max: u64) -> Result<ConvergenceProbe> {
    delta_mercer_scan(l, n_max).map(|(_, p)| p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_sequence_doubles_exactly() {
        for c in [5.0, 0.5, -3.0] {
            let t = mercer_transform(&RealSequence::constant(c));
            for n in [1u64, 2, 7, 100, 999] {
                assert_eq!(t.eval(n), 2.0 * c, "c = {c}, n = {n}");
            }
        }
    }

    #[test]
    fn reciprocal_transform_is_small_at_ten_thousand() {
        let t = mercer_transform(&RealSequence::reciprocal());
        let v = t.eval(10_000);
        // 1/n + Hₙ/n with Hₙ ≤ ln n + 1
        assert!(v > 0.0 && v <= 2e-3, "value {v}");
    }

    #[test]
    fn alternating_transform_keeps_oscillating() {
        let t = mercer_transform(&RealSequence::alternating());
        // sₙ ∈ {−1, 0}, so the transform stays within O(1/n) of (−1)ⁿ
        assert!(t.eval(1001) < -0.99);
        assert!(t.eval(1002) > 0.99);
    }

    #[test]
    fn transform_cache_is_order_insensitive() {
        let t1 = mercer_transform(&RealSequence::reciprocal());
        let t2 = mercer_transform(&RealSequence::reciprocal());
        let backwards: Vec<f64> = (1..=50u64).rev().map(|n| t1.eval(n)).collect();
        let forwards: Vec<f64> = (1..=50u64).map(|n| t2.eval(n)).collect();
        let backwards_reversed: Vec<f64> = backwards.into_iter().rev().collect();
        assert_eq!(forwards, backwards_reversed);
    }

    #[test]
    fn probe_constant() {
        let p = probe(&RealSequence::constant(5.0), 100).unwrap();
        assert_eq!(p.estimated_limit, 5.0);
        assert_eq!(p.tail_sup_deviation, 0.0);
    }

    #[test]
    fn probe_reciprocal_bounds() {
        let p = probe(&RealSequence::reciprocal(), 10_000).unwrap();
        assert!(p.estimated_limit <= 1.2e-4, "limit {}", p.estimated_limit);
        assert!(p.tail_sup_deviation <= 1e-4, "dev {}", p.tail_sup_deviation);
    }

    #[test]
    fn probe_alternating_sees_oscillation() {
        let p = probe(&RealSequence::alternating(), 10_000).unwrap();
        assert!(p.tail_sup_deviation >= 1.0);
    }

    #[test]
    fn probe_rejects_short_scans() {
        assert!(matches!(
            probe(&RealSequence::constant(0.0), 19),
            Err(Error::ScanTooShort { .. })
        ));
    }

    #[test]
    fn transform_is_linear() {
        let a = RealSequence::reciprocal();
        let b = RealSequence::alternating();
        let (alpha, beta) = (2.5, -1.25);
        let combo = RealSequence::new("combo", move |n| {
            alpha * (1.0 / n as f64) + beta * (if n % 2 == 0 { 1.0 } else { -1.0 })
        });
        let ta = mercer_transform(&a);
        let tb = mercer_transform(&b);
        let tc = mercer_transform(&combo);
        for n in [1u64, 3, 10, 97, 500] {
            let lin = alpha * ta.eval(n) + beta * tb.eval(n);
            assert!((tc.eval(n) - lin).abs() <= 1e-12, "n = {n}");
        }
    }

    #[test]
    fn delta_mercer_log2_converges() {
        let p = delta_mercer(&AdditiveFunction::log2(), 20_000).unwrap();
        assert!(p.estimated_limit.abs() <= 1e-3);
        assert!(p.tail_sup_deviation <= 1e-3);
    }

    #[test]
    fn delta_mercer_zero_is_identically_zero() {
        let (rows, p) = delta_mercer_scan(&AdditiveFunction::zero(), 100).unwrap();
        assert!(rows.iter().all(|r| r.transformed == 0.0));
        assert_eq!(p.estimated_limit, 0.0);
        assert_eq!(p.tail_sup_deviation, 0.0);
    }

    #[test]
    fn delta_mercer_nu2_keeps_spiking() {
        let p = delta_mercer(&AdditiveFunction::nu2(), 20_000).unwrap();
        assert!(p.tail_sup_deviation >= 0.5, "dev {}", p.tail_sup_deviation);
    }
}
