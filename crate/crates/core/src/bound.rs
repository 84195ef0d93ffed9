//! Information-counting bounds on identifying fault locations from
//! measurement outcomes.

use crate::error::AnalysisError;
use serde::Serialize;

/// Binary entropy h(x) = −x log₂x − (1−x) log₂(1−x), with h(0) = h(1) = 0.
pub fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// log₂ of the binomial coefficient C(n, k), summed in double precision.
pub fn log2_binomial(n: u64, k: u64) -> f64 {
    let k = k.min(n - k.min(n));
    let mut acc = 0.0;
    for i in 1..=k {
        acc += ((n - k + i) as f64).log2() - (i as f64).log2();
    }
    acc
}

/// Exact and entropy-bound bit counts for the number of fault sets in a
/// circuit of `gate_count` locations with per-location error rate `p` and
/// `alphabet` possible errors per location.
#[derive(Clone, Debug, Serialize)]
pub struct InfoBound {
    pub gate_count: u64,
    pub p: f64,
    pub alphabet: u64,
    /// Expected number of faulty locations, rounded to the nearest integer.
    pub expected_faults: u64,
    /// log₂(alphabet^{pT} · C(T, pT)) at the rounded fault count.
    pub exact_log2_count: f64,
    /// T · (h(p) + p·log₂ alphabet).
    pub entropy_bound_bits: f64,
}

/// Count the fault sets of a typical fault number, exactly and via the
/// entropy approximation.
pub fn info_bound(gate_count: u64, p: f64, alphabet: u64) -> Result<InfoBound, AnalysisError> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(AnalysisError::BadProbability(p));
    }
    let expected_faults = (p * gate_count as f64).round() as u64;
    let exact_log2_count = expected_faults as f64 * (alphabet as f64).log2()
        + log2_binomial(gate_count, expected_faults);
    let entropy_bound_bits = gate_count as f64 * (binary_entropy(p) + p * (alphabet as f64).log2());
    Ok(InfoBound {
        gate_count,
        p,
        alphabet,
        expected_faults,
        exact_log2_count,
        entropy_bound_bits,
    })
}

/// The measurement bit budget d·(k+m)·(h(p) + p·log₂ a) for a depth-d
/// gadget on k logical and m extra qubits.
pub fn budget_bits(
    depth: u64,
    k: u64,
    m: u64,
    p: f64,
    alphabet: u64,
) -> Result<f64, AnalysisError> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(AnalysisError::BadProbability(p));
    }
    Ok((depth * (k + m)) as f64 * (binary_entropy(p) + p * (alphabet as f64).log2()))
}
