//! Degree profiles (the per-order dynamical degrees of one map) and degree
//! sequences (the exact per-iterate degrees of a fixed order), together
//! with log-concavity checks and first-degree estimation from sequences.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};

/// Representation tolerance for float shadows of exact algebraic data.
pub const SHADOW_EPS: f64 = 1e-9;

/// One dynamical degree: an exact integer, the float shadow of an exact
/// algebraic number (eigenvalue-modulus product, at least 12 correct
/// digits), or an estimate carrying its declared tolerance.
#[derive(Debug, Clone, PartialEq)]
pub enum DegreeValue {
    ExactInt(BigInt),
    Algebraic(f64),
    Estimated { value: f64, tol: f64 },
}

impl DegreeValue {
    pub fn shadow(&self) -> f64 {
        match self {
            DegreeValue::ExactInt(v) => big_to_f64(v),
            DegreeValue::Algebraic(v) => *v,
            DegreeValue::Estimated { value, .. } => *value,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, DegreeValue::Estimated { .. })
    }

    /// Declared tolerance: 0 for exact values (comparisons then use the
    /// representation epsilon), the carried tolerance for estimates.
    pub fn tolerance(&self) -> f64 {
        match self {
            DegreeValue::Estimated { tol, .. } => *tol,
            _ => 0.0,
        }
    }
}

/// The dynamical degrees `d_0, ..., d_k` of one map.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeProfile {
    values: Vec<DegreeValue>,
    /// Exact characteristic data when the profile is eigenvalue-derived.
    char_poly: Option<Vec<BigInt>>,
}

impl DegreeProfile {
    pub fn new(values: Vec<DegreeValue>) -> Self {
        Self {
            values,
            char_poly: None,
        }
    }

    pub fn with_char_poly(values: Vec<DegreeValue>, char_poly: Vec<BigInt>) -> Self {
        Self {
            values,
            char_poly: Some(char_poly),
        }
    }

    /// The cohomological order range is `0..=k`, so `k = len - 1`.
    pub fn top_order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[DegreeValue] {
        &self.values
    }

    pub fn value(&self, p: usize) -> &DegreeValue {
        &self.values[p]
    }

    pub fn shadows(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.shadow()).collect()
    }

    pub fn is_exact(&self) -> bool {
        self.values.iter().all(|v| v.is_exact())
    }

    pub fn max_tolerance(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v.tolerance())
            .fold(0.0, f64::max)
    }

    pub fn char_poly(&self) -> Option<&[BigInt]> {
        self.char_poly.as_deref()
    }

    /// Validates `d_0 = 1`, `d_p >= 1` and log-concavity within the
    /// representation tolerance.
    pub fn check_invariants(&self) -> Result<()> {
        match &self.values[0] {
            DegreeValue::ExactInt(v) if v.is_one() => {}
            v if (v.shadow() - 1.0).abs() <= SHADOW_EPS => {}
            v => {
                return Err(Error::InvalidInput(format!(
                    "d_0 must be 1, got {}",
                    v.shadow()
                )))
            }
        }
        for (p, v) in self.values.iter().enumerate() {
            if v.shadow() < 1.0 - SHADOW_EPS - v.tolerance() {
                return Err(Error::InvalidInput(format!(
                    "d_{p} = {} is below 1",
                    v.shadow()
                )));
            }
        }
        let report = log_concavity_floats(&self.shadows(), SHADOW_EPS);
        if let Some(p) = report.first_violation {
            return Err(Error::InvalidInput(format!(
                "degree profile is not log-concave at p = {p}"
            )));
        }
        Ok(())
    }
}

/// Result of a log-concavity scan; a violation is data, not an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogConcavityReport {
    pub holds: bool,
    pub first_violation: Option<usize>,
}

/// Checks `d_{p-1} d_{p+1} <= d_p^2 (1 + eps)` on float shadows.
pub fn log_concavity_floats(values: &[f64], eps: f64) -> LogConcavityReport {
    for p in 1..values.len().saturating_sub(1) {
        if values[p - 1] * values[p + 1] > values[p] * values[p] * (1.0 + eps) {
            return LogConcavityReport {
                holds: false,
                first_violation: Some(p),
            };
        }
    }
    LogConcavityReport {
        holds: true,
        first_violation: None,
    }
}

/// Exact log-concavity check on integer values.
pub fn log_concavity_exact(values: &[BigInt]) -> LogConcavityReport {
    for p in 1..values.len().saturating_sub(1) {
        if &values[p - 1] * &values[p + 1] > &values[p] * &values[p] {
            return LogConcavityReport {
                holds: false,
                first_violation: Some(p),
            };
        }
    }
    LogConcavityReport {
        holds: true,
        first_violation: None,
    }
}

/// The exact per-iterate degrees `lambda_p(f^n)` for `n = 1..=N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    order: usize,
    values: Vec<BigInt>,
}

impl DegreeSequence {
    pub fn new(order: usize, values: Vec<BigInt>) -> Self {
        Self { order, values }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `lambda_p(f^n)`, 1-based in `n`.
    pub fn value(&self, n: usize) -> &BigInt {
        &self.values[n - 1]
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }
}

/// How the first-degree estimate was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateMethod {
    /// Last ratio `v_n / v_{n-1}` of a monotone-stable ratio tail.
    Ratio,
    /// Plain root `v_N^{1/N}` when the ratios are not settled.
    Root,
}

#[derive(Debug, Clone, PartialEq)]
pub struct D1Estimate {
    pub estimate: f64,
    /// `min_n v_n^{1/n}`: a true upper bound for `d_1` by submultiplicativity.
    pub upper_bound: f64,
    /// The iterate achieving the upper bound.
    pub upper_bound_at: usize,
    pub tol: f64,
    pub method: EstimateMethod,
}

/// Estimates `d_1` from a first-degree sequence.
pub fn estimate_d1(seq: &DegreeSequence) -> Result<D1Estimate> {
    if seq.is_empty() {
        return Err(Error::InvalidInput("empty degree sequence".into()));
    }
    if seq.values.iter().any(|v| v < &BigInt::one()) {
        return Err(Error::InvalidInput(
            "degree sequence entries must be >= 1".into(),
        ));
    }
    let logs: Vec<f64> = seq.values.iter().map(ln_big).collect();
    let (upper_bound_at, upper_bound) = logs
        .iter()
        .enumerate()
        .map(|(i, l)| (i + 1, (l / (i + 1) as f64).exp()))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .expect("nonempty");
    let n = logs.len();
    if n == 1 {
        let v = logs[0].exp();
        return Ok(D1Estimate {
            estimate: v,
            upper_bound,
            upper_bound_at,
            tol: (v - 1.0).abs().max(SHADOW_EPS),
            method: EstimateMethod::Root,
        });
    }
    let ratios: Vec<f64> = (1..n).map(|i| (logs[i] - logs[i - 1]).exp()).collect();
    let tail = &ratios[ratios.len().saturating_sub(4)..];
    let nondecreasing = tail.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12));
    let nonincreasing = tail.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
    let last = *ratios.last().unwrap();
    let root = (logs[n - 1] / n as f64).exp();
    if nondecreasing || nonincreasing {
        let prev = if ratios.len() >= 2 {
            ratios[ratios.len() - 2]
        } else {
            last
        };
        // geometric tail extrapolation: with two consecutive differences
        // available, |r_N - limit| ~ diff * rho / (1 - rho), so a bare
        // last-difference tolerance undercovers by that factor
        let diff = (last - prev).abs();
        let tol = if ratios.len() >= 3 {
            let prev_diff = (prev - ratios[ratios.len() - 3]).abs();
            let rho = if prev_diff > 0.0 {
                (diff / prev_diff).clamp(0.0, 0.95)
            } else {
                0.0
            };
            diff * (1.0 + rho / (1.0 - rho))
        } else {
            2.0 * diff
        };
        Ok(D1Estimate {
            estimate: last,
            upper_bound,
            upper_bound_at,
            tol: tol.max(SHADOW_EPS),
            method: EstimateMethod::Ratio,
        })
    } else {
        let prev_root = (logs[n - 2] / (n - 1) as f64).exp();
        Ok(D1Estimate {
            estimate: root,
            upper_bound,
            upper_bound_at,
            tol: (root - prev_root).abs().max(SHADOW_EPS),
            method: EstimateMethod::Root,
        })
    }
}

/// Natural log of a positive big integer, safe for values far beyond the
/// f64 range.
pub fn ln_big(v: &BigInt) -> f64 {
    debug_assert!(v.is_positive());
    let bits = v.bits();
    if bits <= 512 {
        return v.to_f64().expect("fits f64").ln();
    }
    let shift = bits - 512;
    let scaled = v >> shift;
    scaled.to_f64().expect("fits f64").ln() + shift as f64 * std::f64::consts::LN_2
}

fn big_to_f64(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or(f64::INFINITY)
}
