//! Compilation of a normalized Clifford gadget into its spacetime masked
//! subsystem code.
//!
//! The spacetime code has one qubit per (circuit qubit, tick) pair. Its
//! gauge group collects four kinds of generators: propagation pairs for
//! every gate (idle qubits carry implicit identities), Z constraints for
//! preparations at tick 0 and measurements at the final tick, and the input
//! stabilizer rows at tick 0. Stabilizer generators are spackles of input
//! or output constraints, classified into always-unmasked, temporarily
//! masked, and permanently masked subgroups by how their propagated images
//! relate to the final measurements.

use crate::circuit::{output_stabilizer, Circuit, OutputStabilizer};
use crate::clifford::CliffordGate;
use crate::code::{GroupBasis, MaskedSubsystemCode};
use crate::error::CircuitError;
use crate::gf2::Echelon;
use crate::pauli::{PauliOperator, SinglePauli};
use serde::Serialize;

/// Where a gauge generator came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "source")]
pub enum GaugeSource {
    /// Propagation pair for a gate between ticks `tick` and `tick + 1`.
    /// `generator` names which seed Pauli it encodes (X or Z on the listed
    /// operand).
    Gate {
        tick: usize,
        gate: String,
        operand: usize,
        seed: char,
    },
    Prep {
        qubit: usize,
    },
    Measurement {
        qubit: usize,
    },
    InputStabilizer {
        row: usize,
    },
}

/// Masking classification of a spacetime stabilizer generator.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MaskCase {
    /// Case 3: the constraint propagates to a product of final Z
    /// measurements; its eigenvalue is read out by this circuit.
    AlwaysUnmasked,
    /// Case 4: the constraint survives into the output stabilizer but is
    /// not measured here; a later gadget may measure it.
    TemporarilyMasked,
    /// Case 1: an initial constraint that ends as a logical operator of the
    /// output code (a fresh logical preparation); permanently masked.
    NewLogicalPrep,
    /// Case 2: a measurement of a logical qubit of the input code;
    /// permanently masked.
    LogicalMeasurement,
}

/// A compiled spacetime code with provenance and masking tables.
#[derive(Clone, Debug)]
pub struct SpacetimeCode {
    circuit: Circuit,
    output: OutputStabilizer,
    base: MaskedSubsystemCode,
    provenance: Vec<GaugeSource>,
    mask_cases: Vec<MaskCase>,
}

impl SpacetimeCode {
    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn output(&self) -> &OutputStabilizer {
        &self.output
    }

    pub fn base(&self) -> &MaskedSubsystemCode {
        &self.base
    }

    pub fn base_mut(&mut self) -> &mut MaskedSubsystemCode {
        &mut self.base
    }

    /// Per-gauge-generator provenance, aligned with the gauge list.
    pub fn provenance(&self) -> &[GaugeSource] {
        &self.provenance
    }

    /// Per-stabilizer-generator masking case, aligned with the stabilizer
    /// list.
    pub fn mask_cases(&self) -> &[MaskCase] {
        &self.mask_cases
    }

    pub fn n_total(&self) -> usize {
        self.circuit.n_total()
    }

    pub fn t_len(&self) -> usize {
        self.circuit.t_len()
    }

    /// Spacetime qubit count N = (T + 1) · n_total.
    pub fn n_spacetime(&self) -> usize {
        (self.t_len() + 1) * self.n_total()
    }

    /// The (qubit, tick) → spacetime index map.
    pub fn index(&self, qubit: usize, tick: usize) -> usize {
        debug_assert!(qubit < self.n_total() && tick <= self.t_len());
        tick * self.n_total() + qubit
    }

    /// Embed a circuit-width operator at one time slice.
    pub fn embed_at_slice(&self, p: &PauliOperator, tick: usize) -> PauliOperator {
        embed_slice(p, tick, self.t_len(), self.n_total())
    }

    /// Extract the circuit-width component of a spacetime operator at one
    /// time slice.
    pub fn slice_of(&self, big: &PauliOperator, tick: usize) -> PauliOperator {
        let n = self.n_total();
        let positions: Vec<usize> = (0..n).map(|q| tick * n + q).collect();
        let mut out = big.extract(&positions);
        out.set_phase(0);
        out
    }
}

fn embed_slice(p: &PauliOperator, tick: usize, t_len: usize, n_total: usize) -> PauliOperator {
    debug_assert!(tick <= t_len);
    let n_st = (t_len + 1) * n_total;
    let positions: Vec<usize> = (0..n_total).map(|q| tick * n_total + q).collect();
    let mut out = PauliOperator::identity(n_st);
    for q in p.support() {
        out.set_letter(positions[q], p.letter(q));
    }
    out.set_phase(p.phase());
    out
}

/// The spackle of `p` anchored at tick `t`: the product over every slice s
/// of the propagated image of `p` at s. With an even tick count it is
/// gauge-equivalent to `p` embedded at slice t.
pub fn spackle(c: &Circuit, p: &PauliOperator, t: usize) -> PauliOperator {
    let t_len = c.t_len();
    let n = c.n_total();
    let mut out = PauliOperator::identity((t_len + 1) * n);
    let mut img = p.clone();
    for s in t..=t_len {
        out.multiply_assign(&embed_slice(&img, s, t_len, n));
        if s < t_len {
            img = c.propagate(&img, s, s + 1);
        }
    }
    let mut img = p.clone();
    for s in (0..t).rev() {
        img = c.propagate(&img, s + 1, s);
        out.multiply_assign(&embed_slice(&img, s, t_len, n));
    }
    out
}

/// Compile a normalized circuit into its spacetime masked subsystem code.
pub fn build_spacetime_code(c: &Circuit) -> Result<SpacetimeCode, CircuitError> {
    if !c.is_normalized() {
        return Err(CircuitError::NotNormalized);
    }
    let n = c.n_total();
    let t_len = c.t_len();
    let output = output_stabilizer(c)?;

    let mut gauge: Vec<PauliOperator> = Vec::new();
    let mut provenance: Vec<GaugeSource> = Vec::new();

    // Source 1: propagation pairs for every gate, including implicit idles.
    for t in 0..t_len {
        let mut covered = vec![false; n];
        for gate in &c.layers()[t] {
            for q in gate.operands() {
                covered[q] = true;
            }
            push_gate_generators(c, gate, t, &mut gauge, &mut provenance);
        }
        #[allow(clippy::needless_range_loop)]
        for q in 0..n {
            if !covered[q] {
                let idle = CliffordGate::one(crate::clifford::GateKind::I, q);
                push_gate_generators(c, &idle, t, &mut gauge, &mut provenance);
            }
        }
    }
    // Source 2: preparation constraints at tick 0.
    let mut prep_qubits: Vec<usize> = c.preps().iter().map(|p| p.qubit).collect();
    prep_qubits.sort_unstable();
    for q in prep_qubits {
        let z = PauliOperator::single(n, q, SinglePauli::Z);
        gauge.push(embed_slice(&z, 0, t_len, n));
        provenance.push(GaugeSource::Prep { qubit: q });
    }
    // Source 3: measurement constraints at the final tick.
    for q in c.measured_qubits() {
        let z = PauliOperator::single(n, q, SinglePauli::Z);
        gauge.push(embed_slice(&z, t_len, t_len, n));
        provenance.push(GaugeSource::Measurement { qubit: q });
    }
    // Source 4: input stabilizer rows at tick 0.
    for (row, m) in c.input_stabilizer().iter().enumerate() {
        gauge.push(embed_slice(m, 0, t_len, n));
        provenance.push(GaugeSource::InputStabilizer { row });
    }

    let (stabilizer, mask_cases) = classify_masks(c, &output);
    let unmasked: Vec<PauliOperator> = stabilizer
        .iter()
        .zip(&mask_cases)
        .filter(|(_, case)| **case == MaskCase::AlwaysUnmasked)
        .map(|(p, _)| p.clone())
        .collect();
    let temporarily_masked: Vec<PauliOperator> = stabilizer
        .iter()
        .zip(&mask_cases)
        .filter(|(_, case)| matches!(case, MaskCase::AlwaysUnmasked | MaskCase::TemporarilyMasked))
        .map(|(p, _)| p.clone())
        .collect();

    let base = MaskedSubsystemCode::new(
        (t_len + 1) * n,
        gauge,
        stabilizer,
        temporarily_masked,
        unmasked,
    )
    .expect("spacetime code construction obeys the containment chain");

    Ok(SpacetimeCode {
        circuit: c.clone(),
        output,
        base,
        provenance,
        mask_cases,
    })
}

fn push_gate_generators(
    c: &Circuit,
    gate: &CliffordGate,
    t: usize,
    gauge: &mut Vec<PauliOperator>,
    provenance: &mut Vec<GaugeSource>,
) {
    let n = c.n_total();
    let t_len = c.t_len();
    for &q in gate.operands().iter() {
        for seed in [SinglePauli::X, SinglePauli::Z] {
            let before = PauliOperator::single(n, q, seed);
            let mut after = before.clone();
            crate::clifford::apply_gate(&mut after, gate, crate::clifford::Direction::Forward);
            let mut gen = embed_slice(&before, t, t_len, n);
            gen.multiply_assign(&embed_slice(&after, t + 1, t_len, n));
            gauge.push(gen);
            provenance.push(GaugeSource::Gate {
                tick: t,
                gate: gate.to_string(),
                operand: q,
                seed: if seed == SinglePauli::X { 'X' } else { 'Z' },
            });
        }
    }
}

/// Classify the stabilizer generators of the spacetime code into the four
/// masking cases, after a basis change of Ŝ that maximizes the number of
/// always-unmasked rows.
///
/// Returns the spackled stabilizer generators and their cases, ordered:
/// case 3 (always unmasked), case 4 (temporarily masked), case 1 (new
/// logical preparations), case 2 (logical measurements). Rows of Ŝ whose
/// propagated image anticommutes with a final measurement are consumed by
/// that measurement and yield no stabilizer generator.
fn classify_masks(c: &Circuit, output: &OutputStabilizer) -> (Vec<PauliOperator>, Vec<MaskCase>) {
    let n = c.n_total();
    let t_len = c.t_len();
    let measured = c.measured_qubits();

    // Reduce images modulo the measurement subgroup: clear z-bits at
    // measured qubits.
    let reduce_mod_meas = |p: &PauliOperator| {
        let mut row = p.symplectic_row();
        for &m in &measured {
            row.set(n + m, false);
        }
        row
    };

    let rows = &output.s_hat;
    let images = &output.propagated;

    // Nested canonicalization over combinations of Ŝ rows, largest
    // measurable content first:
    //   case 3: image in the measurement-Z subgroup;
    //   case 4: image additionally free of X support on measured qubits
    //           (equivalently, inside Ŝ');
    //   case 1: image merely commuting with Ŝ' (reachable only for
    //           declared fresh logical preparations).
    // Combinations outside all three kernels were consumed by pivoting
    // measurements and yield no stabilizer row.
    let case3_combos = {
        let reduced: Vec<crate::bits::Bits> = images.iter().map(reduce_mod_meas).collect();
        crate::gf2::kernel_basis(2 * n, &reduced)
    };
    let case4_kernel = {
        let mut prime_echelon = Echelon::new(2 * n);
        for g in &output.s_hat_prime {
            let _ = prime_echelon.insert(g.symplectic_row());
        }
        let reduced: Vec<crate::bits::Bits> = images
            .iter()
            .map(|img| prime_echelon.reduce(&img.symplectic_row()))
            .collect();
        crate::gf2::kernel_basis(2 * n, &reduced)
    };
    let case1_kernel = {
        let prime = &output.s_hat_prime;
        let comm_rows: Vec<crate::bits::Bits> = images
            .iter()
            .map(|img| {
                let mut row = crate::bits::Bits::zeros(prime.len().max(1));
                for (j, g) in prime.iter().enumerate() {
                    row.set(j, !g.commutes(img));
                }
                row
            })
            .collect();
        crate::gf2::kernel_basis(prime.len().max(1), &comm_rows)
    };

    // Split the nested kernels into independent layers in combo space.
    let mut combo_echelon = Echelon::new(rows.len().max(1));
    let mut case3 = Vec::new();
    for combo in case3_combos {
        if combo_echelon.insert(combo.clone()).is_ok() {
            case3.push(combo);
        }
    }
    let mut case4 = Vec::new();
    for combo in case4_kernel {
        if combo_echelon.insert(combo.clone()).is_ok() {
            case4.push(combo);
        }
    }
    let mut case1 = Vec::new();
    for combo in case1_kernel {
        if combo_echelon.insert(combo.clone()).is_ok() {
            case1.push(combo);
        }
    }

    let product_of = |combo: &crate::bits::Bits, list: &[PauliOperator]| {
        let mut acc = PauliOperator::identity(n);
        for i in combo.iter_ones() {
            acc.multiply_assign(&list[i]);
        }
        acc
    };

    let s_hat_prime_basis = GroupBasis::new(n, output.s_hat_prime.clone());
    let mut stabilizer = Vec::new();
    let mut cases = Vec::new();
    for combo in &case3 {
        stabilizer.push(spackle(c, &product_of(combo, rows), 0));
        cases.push(MaskCase::AlwaysUnmasked);
    }
    for combo in &case4 {
        debug_assert!(s_hat_prime_basis.contains_phaseless(&product_of(combo, images)));
        stabilizer.push(spackle(c, &product_of(combo, rows), 0));
        cases.push(MaskCase::TemporarilyMasked);
    }
    for combo in &case1 {
        stabilizer.push(spackle(c, &product_of(combo, rows), 0));
        cases.push(MaskCase::NewLogicalPrep);
    }

    // Case 2: adjoined logical measurements, spackled backward from the
    // final tick. An adjoined Z whose backward image anticommutes with an
    // input constraint (possible once an earlier measurement pivoted that
    // constraint away) has a non-central spackle and contributes no
    // stabilizer row.
    for &q in &output.adjoined {
        let z = PauliOperator::single(n, q, SinglePauli::Z);
        let back = c.propagate(&z, t_len, 0);
        if output.s_hat.iter().all(|m| m.commutes(&back)) {
            stabilizer.push(spackle(c, &z, t_len));
            cases.push(MaskCase::LogicalMeasurement);
        }
    }

    (stabilizer, cases)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;
    use crate::code::{in_group, MembershipMode};

    fn compile(text: &str) -> SpacetimeCode {
        let c = parse_circuit(text).unwrap().normalize().unwrap();
        build_spacetime_code(&c).unwrap()
    }

    #[test]
    fn idle_wire_generators() {
        // One qubit, prepped and measured, two idle ticks: N = 3.
        let st = compile("qubits 1\nprep_z 0\ntick\ntick\nmeas_z 0\n");
        assert_eq!(st.n_spacetime(), 3);
        let gens: Vec<String> = st
            .base()
            .gauge_generators()
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(gens, vec!["+XXI", "+ZZI", "+IXX", "+IZZ", "+ZII", "+IIZ"]);
        assert_eq!(st.base().gauge_rank(), 5);
        // The single prep row is measured: one always-unmasked generator.
        assert_eq!(st.mask_cases(), &[MaskCase::AlwaysUnmasked]);
        assert_eq!(st.base().stabilizer_generators()[0].to_string(), "+ZZZ");
    }

    #[test]
    fn spackle_of_idle_z_spans_all_slices() {
        let c = parse_circuit("qubits 1\ntick\ntick\n")
            .unwrap()
            .normalize()
            .unwrap();
        let z = PauliOperator::parse("Z", 1).unwrap();
        let s = spackle(&c, &z, 0);
        assert_eq!(s.to_string(), "+ZZZ");
        assert_eq!(s.weight(), 3);
    }

    #[test]
    fn spackle_is_gauge_equivalent_to_slice_embedding() {
        let text = "qubits 3\nprep_z 2\ncnot 0 2\ntick\nh 1\ns 0\ntick\nmeas_z 2\n";
        let st = compile(text);
        let c = st.circuit();
        for letter in ["XII", "IZI", "IIY", "ZZI"] {
            let p = PauliOperator::parse(letter, 3).unwrap();
            for t in 0..=c.t_len() {
                let mut combined = spackle(c, &p, t);
                combined.multiply_assign(&st.embed_at_slice(&c.propagate(&p, t, t), t));
                assert!(
                    st.base().gauge_basis().contains_phaseless(&combined),
                    "spackle({letter}, {t}) not gauge-equivalent"
                );
            }
        }
    }

    #[test]
    fn spackle_anchor_independence() {
        let text = "qubits 2\ncnot 0 1\ntick\nh 0\ntick\n";
        let st = compile(text);
        let c = st.circuit();
        let p = PauliOperator::parse("XZ", 2).unwrap();
        for t in 0..=2usize {
            for t2 in 0..=2usize {
                let a = spackle(c, &p, t);
                let moved = c.propagate(&p, t, t2);
                let b = spackle(c, &moved, t2);
                let mut prod = a.clone();
                prod.multiply_assign(&b);
                assert!(st.base().gauge_basis().contains_phaseless(&prod));
            }
        }
    }

    #[test]
    fn cnot_contributes_four_propagation_generators() {
        let st = compile("qubits 2\ncnot 0 1\ntick\ntick\n");
        let cnot_gens: Vec<&PauliOperator> = st
            .provenance()
            .iter()
            .zip(st.base().gauge_generators())
            .filter(|(src, _)| matches!(src, GaugeSource::Gate { gate, .. } if gate.starts_with("cnot")))
            .map(|(_, g)| g)
            .collect();
        assert_eq!(cnot_gens.len(), 4);
        let texts: Vec<String> = cnot_gens.iter().map(|g| g.to_string()).collect();
        // X0 -> X0X1, X1 -> X1, Z0 -> Z0, Z1 -> Z0Z1, at slices 0 and 1.
        assert!(texts.contains(&"+XIXXII".to_string()));
        assert!(texts.contains(&"+IXIXII".to_string()));
        assert!(texts.contains(&"+ZIZIII".to_string()));
        assert!(texts.contains(&"+IZZZII".to_string()));
    }

    #[test]
    fn masking_cases_cover_logical_measurement() {
        // Bare qubit measured: the adjoined Z is a logical measurement,
        // permanently masked but central.
        let st = compile("qubits 1\ntick\ntick\nmeas_z 0\n");
        assert_eq!(st.mask_cases(), &[MaskCase::LogicalMeasurement]);
        let sp = &st.base().stabilizer_generators()[0];
        assert!(st.base().gauge_generators().iter().all(|g| g.commutes(sp)));
    }

    #[test]
    fn pivoted_measurement_spackle_is_not_central() {
        // The measurement replaces the rotated prep constraint; its spackle
        // anticommutes with the prep gauge generator, so it contributes no
        // stabilizer row.
        let text = "qubits 1\nprep_z 0\nh 0\ntick\ntick\nmeas_z 0\n";
        let st = compile(text);
        assert!(st.mask_cases().is_empty());
        assert!(matches!(
            st.output().measurement_roles[0].1,
            crate::circuit::MeasurementRole::Pivot
        ));
        let c = st.circuit();
        let z = PauliOperator::parse("Z", 1).unwrap();
        let sp = spackle(c, &z, c.t_len());
        assert!(st
            .base()
            .gauge_generators()
            .iter()
            .any(|g| !g.commutes(&sp)));
    }

    #[test]
    fn fresh_logical_prep_is_permanently_masked() {
        let mut c = parse_circuit("qubits 1\nprep_z 0\ntick\ntick\n").unwrap();
        c.declare_fresh_logical_prep(0).unwrap();
        let st = build_spacetime_code(&c.normalize().unwrap()).unwrap();
        assert_eq!(st.mask_cases(), &[MaskCase::NewLogicalPrep]);
        // The output code no longer carries the Z constraint.
        assert_eq!(st.output().output_code.rank(), 0);
    }

    #[test]
    fn containment_chain_on_small_circuit() {
        let text = "qubits 3\nstab +ZZI\nprep_z 2\ncnot 1 2\ntick\nh 0\ntick\nmeas_z 2\n";
        let st = compile(text);
        let base = st.base();
        let n = st.n_spacetime();
        for u in base.unmasked_generators() {
            assert!(in_group(
                n,
                base.temporarily_masked_generators(),
                u,
                MembershipMode::Phaseless
            )
            .is_member());
        }
        for t in base.temporarily_masked_generators() {
            assert!(in_group(
                n,
                base.stabilizer_generators(),
                t,
                MembershipMode::Phaseless
            )
            .is_member());
        }
        for s in base.stabilizer_generators() {
            assert!(base.gauge_basis().contains_phaseless(s));
            for g in base.gauge_generators() {
                assert!(g.commutes(s));
            }
        }
    }
}
