//! Gadget-chain closure checks on the distance-3 extraction gadgets.
//!
//! The acceptable set follows the low-weight policy: for the accepted
//! (all-zero) syndrome, the identity and every weight-one residual class;
//! any other syndrome counts as a detection. The flagged gadget closes
//! under one new fault per gadget, because every dangerous hook raises a
//! flag. The plain gadget leaves a weight-two hook residual on the quiet
//! syndrome, which is not equivalent to any weight-one class: the
//! chain-level form of the flag claim.

mod common;

use std::collections::BTreeMap;

use stcode::error::AnalysisError;
use stcode::fault::AcceptableSet;
use stcode::fixtures::{surface_extraction, ExtractionStyle};
use stcode::pauli::{PauliOperator, SinglePauli};
use stcode::{build_spacetime_code, verify_gadget_chain, Circuit, SpacetimeCode, DEFAULT_BUDGET};

fn compile(c: &Circuit) -> SpacetimeCode {
    build_spacetime_code(&c.normalize().unwrap()).unwrap()
}

/// The low-weight acceptable set: quiet syndrome → identity plus all
/// weight-one residuals on the output qubits.
fn low_weight_set(st: &SpacetimeCode) -> AcceptableSet {
    let n_out = st.output().output_qubits.len();
    let zero = "0".repeat(st.base().unmasked_generators().len());
    let mut classes = vec![PauliOperator::identity(n_out)];
    for q in 0..n_out {
        for letter in [SinglePauli::X, SinglePauli::Y, SinglePauli::Z] {
            classes.push(PauliOperator::single(n_out, q, letter));
        }
    }
    let mut set = AcceptableSet::new();
    set.insert(zero, classes);
    set
}

#[test]
fn flagged_extraction_closes_under_low_weight_policy() {
    let g = surface_extraction(3, ExtractionStyle::Flagged).unwrap();
    let st = compile(&g);
    let acceptable = low_weight_set(&st);
    let report = verify_gadget_chain(&[g], &[acceptable], 1, DEFAULT_BUDGET).unwrap();
    assert!(
        report.violation.is_none(),
        "flagged gadget should close: {:?}",
        report.violation
    );
}

#[test]
fn second_round_reports_the_accumulation_limit() {
    // A weight-one input error plus one new fault can cancel syndrome bits
    // and hide a weight-two residual for a round; a distance-3 code only
    // guarantees one fault per cycle. The checker must surface exactly
    // that witness on the second gadget.
    let g = surface_extraction(3, ExtractionStyle::Flagged).unwrap();
    let st = compile(&g);
    let acceptable = low_weight_set(&st);
    let report = verify_gadget_chain(
        &[g.clone(), g],
        &[acceptable.clone(), acceptable],
        1,
        DEFAULT_BUDGET,
    )
    .unwrap();
    let violation = report.violation.expect("accumulation must be reported");
    assert_eq!(violation.gadget, 1);
    let weight = violation
        .residual
        .chars()
        .filter(|c| matches!(c, 'X' | 'Y' | 'Z'))
        .count();
    assert_eq!(weight, 2, "witness should be a hidden weight-2 residual");
    assert!(violation.syndrome.chars().all(|c| c == '0'));
}

#[test]
fn plain_extraction_violates_low_weight_policy() {
    let g = surface_extraction(3, ExtractionStyle::Plain).unwrap();
    let st = compile(&g);
    let acceptable = low_weight_set(&st);
    let report = verify_gadget_chain(&[g], &[acceptable], 1, DEFAULT_BUDGET).unwrap();
    let violation = report
        .violation
        .expect("plain gadget must violate the low-weight policy");
    // The witness is a quiet hook: a weight-two residual on the accepted
    // syndrome.
    let weight = violation
        .residual
        .chars()
        .filter(|c| matches!(c, 'X' | 'Y' | 'Z'))
        .count();
    assert!(weight >= 2, "unexpected witness: {violation:?}");
}

#[test]
fn identity_chain_with_explicit_identity_class() {
    let text = "qubits 1\ntick\ntick\n";
    let g = stcode::parse_circuit(text).unwrap();
    let mut set = AcceptableSet::new();
    set.insert("(empty)".to_string(), vec![PauliOperator::identity(1)]);
    let report =
        verify_gadget_chain(&[g.clone(), g], &[set.clone(), set], 0, DEFAULT_BUDGET).unwrap();
    assert!(report.violation.is_none());
}

#[test]
fn chain_rejects_mismatched_codes() {
    let g1 = surface_extraction(2, ExtractionStyle::Plain).unwrap();
    let g2 = surface_extraction(3, ExtractionStyle::Plain).unwrap();
    let empty: AcceptableSet = BTreeMap::new();
    let err =
        verify_gadget_chain(&[g1, g2], &[empty.clone(), empty], 0, DEFAULT_BUDGET).unwrap_err();
    assert!(matches!(err, AnalysisError::ChainCodeMismatch(0, 1)));
}

#[test]
fn confusable_acceptable_set_is_rejected() {
    // Two weight-one residuals differing by a logical of the output code
    // are confusable and must be rejected up front: on the distance-2
    // patch, Z on the two diagonal corners differ by the weight-two
    // logical.
    let g = surface_extraction(2, ExtractionStyle::Plain).unwrap();
    let st = compile(&g);
    let zero = "0".repeat(st.base().unmasked_generators().len());
    let mut set = AcceptableSet::new();
    set.insert(
        zero,
        vec![
            PauliOperator::single(4, 0, SinglePauli::Z),
            PauliOperator::single(4, 2, SinglePauli::Z),
        ],
    );
    let err = verify_gadget_chain(&[g], &[set], 0, DEFAULT_BUDGET).unwrap_err();
    assert!(matches!(
        err,
        AnalysisError::ConfusableAcceptableSet { gadget: 0, .. }
    ));
}
