//! JSON report schema shared by the analysis commands. Serialization is
//! deterministic: struct field order is fixed and all maps are ordered.

use crate::bound::InfoBound;
use crate::code::{subsystem_k, DistanceBound};
use crate::fault::{ChainReport, FailureEstimate, VerifyReport};
use crate::spacetime::{GaugeSource, MaskCase, SpacetimeCode};
use serde::Serialize;

/// Parameters of a compiled spacetime code.
#[derive(Clone, Debug, Serialize)]
pub struct CodeSummary {
    /// Spacetime qubit count N = (T+1)·n_total.
    pub n: usize,
    /// Subsystem logical qubit count.
    pub k: usize,
    /// Gauge group rank.
    pub rank: usize,
    pub stabilizer_generators: usize,
    pub unmasked_generators: usize,
    pub temporarily_masked_generators: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<DistanceBound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_t: Option<DistanceBound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_u: Option<DistanceBound>,
    /// Weight cap used for any distance searches in this report.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified_to: Option<usize>,
}

impl CodeSummary {
    pub fn from_spacetime(st: &SpacetimeCode, certified_to: Option<usize>) -> Self {
        let base = st.base();
        CodeSummary {
            n: st.n_spacetime(),
            k: subsystem_k(base),
            rank: base.gauge_rank(),
            stabilizer_generators: base.stabilizer_generators().len(),
            unmasked_generators: base.unmasked_generators().len(),
            temporarily_masked_generators: base.temporarily_masked_generators().len(),
            d: base.distance_full.clone(),
            d_t: base.distance_temporarily_masked.clone(),
            d_u: base.distance_unmasked.clone(),
            certified_to,
        }
    }
}

/// One stabilizer generator with its masking case.
#[derive(Clone, Debug, Serialize)]
pub struct MaskEntry {
    pub index: usize,
    pub case: MaskCase,
    pub generator: String,
}

/// One gauge generator with its provenance.
#[derive(Clone, Debug, Serialize)]
pub struct ProvenanceEntry {
    pub index: usize,
    #[serde(flatten)]
    pub source: GaugeSource,
    pub generator: String,
}

/// The top-level report emitted by the analysis commands; sections not
/// relevant to a command are omitted.
#[derive(Clone, Debug, Serialize, Default)]
pub struct AnalysisReport {
    /// Circuit name or path the analysis ran on.
    pub circuit: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub code_summary: Option<CodeSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub masks: Option<Vec<MaskEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Vec<ProvenanceEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdicts: Option<VerifyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<FailureEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decode: Option<DecodeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residuals: Option<crate::fault::ResidualDistribution>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainReport>,
}

/// Info-bound section.
#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    pub exact_log2: f64,
    pub entropy_bits: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget_bits: Option<f64>,
    #[serde(flatten)]
    pub detail: InfoBound,
}

/// Decode-command section.
#[derive(Clone, Debug, Serialize)]
pub struct DecodeReport {
    pub syndrome: String,
    pub found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    pub max_faults: usize,
}

/// Mask table of a compiled code.
pub fn mask_entries(st: &SpacetimeCode) -> Vec<MaskEntry> {
    st.mask_cases()
        .iter()
        .zip(st.base().stabilizer_generators())
        .enumerate()
        .map(|(index, (case, generator))| MaskEntry {
            index,
            case: *case,
            generator: generator.to_string(),
        })
        .collect()
}

/// Provenance table of a compiled code.
pub fn provenance_entries(st: &SpacetimeCode) -> Vec<ProvenanceEntry> {
    st.provenance()
        .iter()
        .zip(st.base().gauge_generators())
        .enumerate()
        .map(|(index, (source, generator))| ProvenanceEntry {
            index,
            source: source.clone(),
            generator: generator.to_string(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;
    use crate::spacetime::build_spacetime_code;

    #[test]
    fn fully_measured_idle_wire_has_no_logical_qubits() {
        let c = parse_circuit("qubits 1\nprep_z 0\ntick\ntick\nmeas_z 0\n")
            .unwrap()
            .normalize()
            .unwrap();
        let st = build_spacetime_code(&c).unwrap();
        let summary = CodeSummary::from_spacetime(&st, None);
        assert_eq!(summary.n, 3);
        assert_eq!(summary.rank, 5);
        assert_eq!(summary.k, 0);
    }

    #[test]
    fn bare_wire_keeps_one_logical_qubit() {
        let c = parse_circuit("qubits 1\ntick\ntick\n")
            .unwrap()
            .normalize()
            .unwrap();
        let st = build_spacetime_code(&c).unwrap();
        let summary = CodeSummary::from_spacetime(&st, None);
        assert_eq!(summary.n, 3);
        assert_eq!(summary.k, 1);
    }

    #[test]
    fn report_serialization_is_deterministic() {
        let c = parse_circuit("qubits 2\nprep_z 1\ncnot 0 1\ntick\ntick\nmeas_z 1\n")
            .unwrap()
            .normalize()
            .unwrap();
        let st = build_spacetime_code(&c).unwrap();
        let report = AnalysisReport {
            circuit: "test".to_string(),
            code_summary: Some(CodeSummary::from_spacetime(&st, None)),
            masks: Some(mask_entries(&st)),
            provenance: Some(provenance_entries(&st)),
            ..Default::default()
        };
        let a = serde_json::to_string_pretty(&report).unwrap();
        let b = serde_json::to_string_pretty(&report).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"code_summary\""));
    }
}
