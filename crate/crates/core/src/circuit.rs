//! Circuit intermediate representation: text format, validation, gadget
//! normalization, and output-stabilizer computation.
//!
//! A circuit is a sequence of gate layers over `n_total` qubits, with
//! Z-basis preparations and measurements attached to ticks. The normalized
//! gadget form has every preparation at tick 0, every measurement at the
//! final tick, and an even tick count; idle slots vacated by moving a
//! preparation or measurement are marked fault-free, since they stand in
//! for waiting steps that do not physically exist.

use crate::clifford::{apply_layer, CliffordGate, Direction, GateKind};
use crate::code::{reduce, StabilizerGroup};
use crate::error::{CircuitError, FormatError};
use crate::gf2::Echelon;
use crate::pauli::{PauliOperator, SinglePauli};
use serde::Serialize;
use std::collections::BTreeSet;

/// Preparation or measurement basis. X-basis forms are sugar that
/// normalization rewrites into Z forms plus Hadamards.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Z,
    X,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prep {
    pub qubit: usize,
    pub tick: usize,
    pub basis: Basis,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Measurement {
    pub qubit: usize,
    pub tick: usize,
    pub basis: Basis,
}

/// A Clifford gadget circuit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Circuit {
    n_total: usize,
    layers: Vec<Vec<CliffordGate>>,
    preps: Vec<Prep>,
    measurements: Vec<Measurement>,
    input_stabilizer: Vec<PauliOperator>,
    /// Idle (qubit, tick) slots that carry no fault locations.
    fault_free: BTreeSet<(usize, usize)>,
    /// Preparations declared to create fresh logical qubits of the output
    /// code: their constraint is left out of the derived output stabilizer.
    fresh_logical_preps: BTreeSet<usize>,
    normalized: bool,
}

impl Circuit {
    pub fn empty(n_total: usize) -> Self {
        Circuit {
            n_total,
            layers: Vec::new(),
            preps: Vec::new(),
            measurements: Vec::new(),
            input_stabilizer: Vec::new(),
            fault_free: BTreeSet::new(),
            fresh_logical_preps: BTreeSet::new(),
            normalized: false,
        }
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    /// Tick count T; gates in layer t act between slices t and t+1.
    pub fn t_len(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Vec<CliffordGate>] {
        &self.layers
    }

    pub fn preps(&self) -> &[Prep] {
        &self.preps
    }

    pub fn measurements(&self) -> &[Measurement] {
        &self.measurements
    }

    pub fn input_stabilizer(&self) -> &[PauliOperator] {
        &self.input_stabilizer
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn fault_free(&self) -> &BTreeSet<(usize, usize)> {
        &self.fault_free
    }

    pub fn fresh_logical_preps(&self) -> &BTreeSet<usize> {
        &self.fresh_logical_preps
    }

    /// Input qubit count n (code Q lives on qubits 0..n).
    pub fn input_count(&self) -> usize {
        self.n_total - self.preps.len()
    }

    /// Output qubit count n' (unmeasured qubits).
    pub fn output_count(&self) -> usize {
        self.n_total - self.measurements.len()
    }

    pub fn measured_qubits(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.measurements.iter().map(|m| m.qubit).collect();
        v.sort_unstable();
        v
    }

    pub fn output_qubits(&self) -> Vec<usize> {
        let measured: BTreeSet<usize> = self.measurements.iter().map(|m| m.qubit).collect();
        (0..self.n_total)
            .filter(|q| !measured.contains(q))
            .collect()
    }

    pub fn is_prepped(&self, qubit: usize) -> bool {
        self.preps.iter().any(|p| p.qubit == qubit)
    }

    pub fn add_gate(&mut self, tick: usize, gate: CliffordGate) -> Result<(), CircuitError> {
        if gate.max_operand() >= self.n_total {
            return Err(CircuitError::QubitOutOfRange {
                qubit: gate.max_operand(),
                n_total: self.n_total,
            });
        }
        if let Some(b) = gate.b {
            if b == gate.a {
                return Err(CircuitError::RepeatedOperand(b));
            }
        }
        while self.layers.len() <= tick {
            self.layers.push(Vec::new());
        }
        for q in gate.operands() {
            if self.layers[tick].iter().any(|g| g.supports(q)) {
                return Err(CircuitError::OverlappingSupport { qubit: q, tick });
            }
        }
        self.layers[tick].push(gate);
        self.normalized = false;
        Ok(())
    }

    /// Append an empty tick.
    pub fn push_tick(&mut self) {
        self.layers.push(Vec::new());
        self.normalized = false;
    }

    pub fn prep(&mut self, qubit: usize, tick: usize, basis: Basis) -> Result<(), CircuitError> {
        if qubit >= self.n_total {
            return Err(CircuitError::QubitOutOfRange {
                qubit,
                n_total: self.n_total,
            });
        }
        if self.preps.iter().any(|p| p.qubit == qubit) {
            return Err(CircuitError::RepeatedPrep { qubit });
        }
        self.preps.push(Prep { qubit, tick, basis });
        self.normalized = false;
        Ok(())
    }

    pub fn measure(&mut self, qubit: usize, tick: usize, basis: Basis) -> Result<(), CircuitError> {
        if qubit >= self.n_total {
            return Err(CircuitError::QubitOutOfRange {
                qubit,
                n_total: self.n_total,
            });
        }
        if self.measurements.iter().any(|m| m.qubit == qubit) {
            return Err(CircuitError::RepeatedMeasurement { qubit });
        }
        self.measurements.push(Measurement { qubit, tick, basis });
        self.normalized = false;
        Ok(())
    }

    /// Install the input stabilizer S of the code Q carried by the input
    /// qubits. Rows are full-width operators supported on input qubits.
    pub fn set_input_stabilizer(&mut self, rows: Vec<PauliOperator>) -> Result<(), CircuitError> {
        self.input_stabilizer = rows;
        Ok(())
    }

    /// Declare that a preparation creates a fresh logical qubit of the
    /// output code; its constraint is then excluded from the derived output
    /// stabilizer and classifies as permanently masked.
    pub fn declare_fresh_logical_prep(&mut self, qubit: usize) -> Result<(), CircuitError> {
        if !self.preps.iter().any(|p| p.qubit == qubit) {
            return Err(CircuitError::QubitOutOfRange {
                qubit,
                n_total: self.n_total,
            });
        }
        self.fresh_logical_preps.insert(qubit);
        Ok(())
    }

    fn prep_tick(&self, qubit: usize) -> Option<usize> {
        self.preps.iter().find(|p| p.qubit == qubit).map(|p| p.tick)
    }

    fn meas_tick(&self, qubit: usize) -> Option<usize> {
        self.measurements
            .iter()
            .find(|m| m.qubit == qubit)
            .map(|m| m.tick)
    }

    /// Full consistency check across gates, preparations, measurements, and
    /// the input stabilizer.
    pub fn validate(&self) -> Result<(), CircuitError> {
        let t_len = self.t_len();
        for p in &self.preps {
            if p.tick > t_len {
                return Err(CircuitError::TickOutOfRange {
                    tick: p.tick,
                    t_len,
                });
            }
        }
        for m in &self.measurements {
            if m.tick > t_len {
                return Err(CircuitError::TickOutOfRange {
                    tick: m.tick,
                    t_len,
                });
            }
        }
        // Input qubits are the leading indices; ancillas follow.
        let n = self.input_count();
        let prepped: BTreeSet<usize> = self.preps.iter().map(|p| p.qubit).collect();
        if let Some(&anc) = prepped.iter().find(|&&a| a < n) {
            let hole = (n..self.n_total)
                .find(|h| !prepped.contains(h))
                .unwrap_or(self.n_total);
            return Err(CircuitError::PrepsNotTrailing { qubit: anc, hole });
        }
        for (t, layer) in self.layers.iter().enumerate() {
            for gate in layer {
                for q in gate.operands() {
                    if let Some(pt) = self.prep_tick(q) {
                        if t < pt {
                            return Err(CircuitError::GateBeforePrep {
                                qubit: q,
                                tick: t,
                                prep: pt,
                            });
                        }
                    }
                    if let Some(mt) = self.meas_tick(q) {
                        if t >= mt {
                            return Err(CircuitError::GateAfterMeasurement {
                                qubit: q,
                                tick: t,
                                meas: mt,
                            });
                        }
                    }
                }
            }
        }
        for (i, row) in self.input_stabilizer.iter().enumerate() {
            for q in row.support() {
                if prepped.contains(&q) {
                    return Err(CircuitError::StabilizerOnAncilla { row: i, qubit: q });
                }
            }
            for (j, other) in self.input_stabilizer.iter().enumerate().skip(i + 1) {
                if !row.commutes(other) {
                    return Err(CircuitError::StabilizerAnticommutes(i, j));
                }
            }
        }
        let (_, rank) = reduce(self.n_total, &self.input_stabilizer);
        if rank != self.input_stabilizer.len() {
            let mut e = Echelon::new(2 * self.n_total);
            for (i, row) in self.input_stabilizer.iter().enumerate() {
                if e.insert(row.symplectic_row()).is_err() {
                    return Err(CircuitError::StabilizerDependent(i));
                }
            }
        }
        Ok(())
    }

    /// Is a (qubit, tick) idle slot excluded from fault locations?
    pub fn is_fault_free(&self, qubit: usize, tick: usize) -> bool {
        self.fault_free.contains(&(qubit, tick))
    }

    /// The gate acting on `qubit` in layer `tick`, if any.
    pub fn gate_on(&self, qubit: usize, tick: usize) -> Option<&CliffordGate> {
        self.layers[tick].iter().find(|g| g.supports(qubit))
    }

    /// Conjugate `p` through the circuit from slice `t_from` to `t_to`,
    /// either direction. Idle qubits carry implicit identity gates.
    pub fn propagate(&self, p: &PauliOperator, t_from: usize, t_to: usize) -> PauliOperator {
        assert!(
            t_from <= self.t_len() && t_to <= self.t_len(),
            "tick out of range"
        );
        assert_eq!(p.n(), self.n_total, "dimension error");
        let mut q = p.clone();
        if t_from <= t_to {
            for t in t_from..t_to {
                apply_layer(&mut q, &self.layers[t], Direction::Forward);
            }
        } else {
            for t in (t_to..t_from).rev() {
                apply_layer(&mut q, &self.layers[t], Direction::Backward);
            }
        }
        q
    }

    /// Rewrite into the normal gadget form: X-basis sugar removed, all
    /// preparations at tick 0, all measurements at the final tick, an even
    /// tick count. Idempotent.
    pub fn normalize(&self) -> Result<Circuit, CircuitError> {
        if self.normalized {
            return Ok(self.clone());
        }
        self.validate()?;
        let mut c = self.clone();

        // Desugar X-basis preparations and measurements.
        for i in 0..c.preps.len() {
            if c.preps[i].basis == Basis::X {
                let q = c.preps[i].qubit;
                let t = c.preps[i].tick;
                while c.layers.len() <= t {
                    c.layers.push(Vec::new());
                }
                if c.layers[t].iter().any(|g| g.supports(q)) {
                    return Err(CircuitError::NoRoomForBasisChange {
                        qubit: q,
                        tick: t,
                        basis: 'X',
                    });
                }
                c.layers[t].push(CliffordGate::one(GateKind::H, q));
                c.preps[i].basis = Basis::Z;
            }
        }
        for i in 0..c.measurements.len() {
            if c.measurements[i].basis == Basis::X {
                let q = c.measurements[i].qubit;
                let t = c.measurements[i].tick;
                if t == 0 {
                    return Err(CircuitError::NoRoomForBasisChange {
                        qubit: q,
                        tick: t,
                        basis: 'X',
                    });
                }
                if c.layers[t - 1].iter().any(|g| g.supports(q)) {
                    return Err(CircuitError::NoRoomForBasisChange {
                        qubit: q,
                        tick: t - 1,
                        basis: 'X',
                    });
                }
                c.layers[t - 1].push(CliffordGate::one(GateKind::H, q));
                c.measurements[i].basis = Basis::Z;
            }
        }

        // Make T even with one empty waiting tick, fault-free on all qubits.
        if c.layers.len() % 2 == 1 {
            let t = c.layers.len();
            c.layers.push(Vec::new());
            for q in 0..c.n_total {
                c.fault_free.insert((q, t));
            }
        }
        let t_final = c.layers.len();

        // Move preparations to tick 0 and measurements to the final tick;
        // the vacated idles introduce no extra errors.
        for p in &mut c.preps {
            for t in 0..p.tick {
                c.fault_free.insert((p.qubit, t));
            }
            p.tick = 0;
        }
        for m in &mut c.measurements {
            for t in m.tick..t_final {
                c.fault_free.insert((m.qubit, t));
            }
            m.tick = t_final;
        }

        c.normalized = true;
        c.validate()?;
        Ok(c)
    }
}

/// How each measurement relates to the propagated input stabilizer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum MeasurementRole {
    /// The measured Z is already in the propagated group; its no-fault
    /// outcome is +1 iff `reference_sign` is false.
    Dependent { reference_sign: bool },
    /// The measured Z anticommuted and replaced a propagated generator.
    Pivot,
    /// The measured Z commuted with, and was independent of, the propagated
    /// group: a logical measurement.
    Adjoined,
}

/// The stabilizer bookkeeping of a normalized gadget: the input group Ŝ,
/// its propagation to the final tick, the output group Ŝ', and the output
/// code Q' on the unmeasured qubits.
#[derive(Clone, Debug)]
pub struct OutputStabilizer {
    /// Rows of Ŝ at tick 0: input stabilizer rows then prep constraints in
    /// qubit order. Fresh-logical prep rows are included here.
    pub s_hat: Vec<PauliOperator>,
    /// Forward propagation of each `s_hat` row to the final tick.
    pub propagated: Vec<PauliOperator>,
    /// Row indices excluded from the output-group derivation because their
    /// preparation was declared a fresh logical qubit.
    pub fresh_rows: Vec<usize>,
    /// Generators of Ŝ' on all qubits at the final tick.
    pub s_hat_prime: Vec<PauliOperator>,
    /// (qubit, role) per measurement, in ascending qubit order.
    pub measurement_roles: Vec<(usize, MeasurementRole)>,
    /// Measured qubits adjoined as logical measurements.
    pub adjoined: Vec<usize>,
    /// The output code Q' restricted to unmeasured qubits.
    pub output_code: StabilizerGroup,
    /// Unmeasured qubit indices, in ascending order (row order of Q').
    pub output_qubits: Vec<usize>,
}

impl OutputStabilizer {
    pub fn rank_s_hat(&self) -> usize {
        self.s_hat.len() - self.fresh_rows.len()
    }

    pub fn rank_s_hat_prime(&self) -> usize {
        self.s_hat_prime.len()
    }
}

/// Compute Ŝ, its propagation, Ŝ', and the output code of a normalized
/// circuit.
///
/// Measurements are folded in one at a time (ascending qubit order): a
/// dependent Z leaves the group unchanged, an anticommuting Z replaces the
/// first anticommuting generator and repairs the rest by multiplication,
/// and a commuting independent Z is adjoined as a logical measurement.
pub fn output_stabilizer(c: &Circuit) -> Result<OutputStabilizer, CircuitError> {
    if !c.is_normalized() {
        return Err(CircuitError::NotNormalized);
    }
    let n = c.n_total();
    let t_final = c.t_len();

    let mut s_hat: Vec<PauliOperator> = c.input_stabilizer().to_vec();
    let mut fresh_rows = Vec::new();
    let mut prep_qubits: Vec<usize> = c.preps().iter().map(|p| p.qubit).collect();
    prep_qubits.sort_unstable();
    for q in prep_qubits {
        if c.fresh_logical_preps().contains(&q) {
            fresh_rows.push(s_hat.len());
        }
        s_hat.push(PauliOperator::single(n, q, SinglePauli::Z));
    }
    let propagated: Vec<PauliOperator> = s_hat
        .iter()
        .map(|row| c.propagate(row, 0, t_final))
        .collect();

    let mut rows: Vec<PauliOperator> = propagated
        .iter()
        .enumerate()
        .filter(|(i, _)| !fresh_rows.contains(i))
        .map(|(_, p)| p.clone())
        .collect();

    let mut roles = Vec::new();
    let mut adjoined = Vec::new();
    for q in c.measured_qubits() {
        let z = PauliOperator::single(n, q, SinglePauli::Z);
        let basis = crate::code::GroupBasis::new(n, rows.clone());
        if let Some(witness) = basis.witness(&z) {
            let product = basis.product_of(&witness);
            let reference_sign = product.phase() != 0;
            roles.push((q, MeasurementRole::Dependent { reference_sign }));
            continue;
        }
        let anticommuting: Vec<usize> = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.commutes(&z))
            .map(|(i, _)| i)
            .collect();
        if anticommuting.is_empty() {
            rows.push(z.clone());
            roles.push((q, MeasurementRole::Adjoined));
            adjoined.push(q);
        } else {
            let pivot = anticommuting[0];
            let pivot_row = rows[pivot].clone();
            for &i in &anticommuting[1..] {
                rows[i] = rows[i].multiply(&pivot_row);
            }
            rows[pivot] = z;
            roles.push((q, MeasurementRole::Pivot));
        }
    }
    let s_hat_prime = rows;

    // Eliminate measured-qubit support to obtain the output code.
    let mut working = s_hat_prime.clone();
    for q in c.measured_qubits() {
        for part in 0..2 {
            let has_bit = |p: &PauliOperator| {
                if part == 0 {
                    p.x_bit(q)
                } else {
                    p.z_bit(q)
                }
            };
            if let Some(pos) = working.iter().position(has_bit) {
                let pivot_row = working.remove(pos);
                for row in working.iter_mut() {
                    if has_bit(row) {
                        *row = row.multiply(&pivot_row);
                    }
                }
            }
        }
    }
    let output_qubits = c.output_qubits();
    let restricted: Vec<PauliOperator> =
        working.iter().map(|p| p.extract(&output_qubits)).collect();
    let output_code = StabilizerGroup::new(output_qubits.len(), restricted)
        .expect("output code generators commute");

    Ok(OutputStabilizer {
        s_hat,
        propagated,
        fresh_rows,
        s_hat_prime,
        measurement_roles: roles,
        adjoined,
        output_code,
        output_qubits,
    })
}

const GATE_MNEMONICS: [(&str, GateKind); 10] = [
    ("i", GateKind::I),
    ("x", GateKind::X),
    ("y", GateKind::Y),
    ("z", GateKind::Z),
    ("h", GateKind::H),
    ("s", GateKind::S),
    ("sdg", GateKind::Sdg),
    ("cnot", GateKind::Cnot),
    ("cz", GateKind::Cz),
    ("swap", GateKind::Swap),
];

/// Parse the circuit text format.
///
/// Line forms: `qubits N`, `stab <pauli>` (full-width rows of the input
/// stabilizer), `tick` separators, gate lines (`h q`, `s q`, `sdg q`,
/// `x q`, `y q`, `z q`, `i q`, `cnot a b`, `cz a b`, `swap a b`),
/// `prep_z q`, `prep_x q`, `meas_z q`, `meas_x q`, and `#` comments.
pub fn parse_circuit(text: &str) -> Result<Circuit, FormatError> {
    let mut circuit: Option<Circuit> = None;
    let mut stab_rows: Vec<PauliOperator> = Vec::new();
    let mut cur_tick = 0usize;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut parts = content.split_whitespace();
        let key = parts.next().unwrap();
        let args: Vec<&str> = parts.collect();
        if key == "qubits" {
            if circuit.is_some() {
                return Err(FormatError::at(line, "duplicate qubits header"));
            }
            let n = args
                .first()
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| FormatError::at(line, "qubits needs a count"))?;
            circuit = Some(Circuit::empty(n));
            continue;
        }
        let c = circuit
            .as_mut()
            .ok_or_else(|| FormatError::at(line, "qubits header must come first"))?;
        let parse_qubit = |s: Option<&&str>| -> Result<usize, FormatError> {
            s.and_then(|t| t.parse::<usize>().ok())
                .ok_or_else(|| FormatError::at(line, "expected a qubit index"))
        };
        match key {
            "tick" => {
                cur_tick += 1;
                while c.t_len() < cur_tick {
                    c.push_tick();
                }
            }
            "stab" => {
                let text = args
                    .first()
                    .ok_or_else(|| FormatError::at(line, "stab needs an operator"))?;
                let p = PauliOperator::parse(text, c.n_total())
                    .map_err(|e| FormatError::at(line, e.to_string()))?;
                stab_rows.push(p);
            }
            "prep_z" | "prep_x" => {
                let q = parse_qubit(args.first())?;
                let basis = if key == "prep_z" { Basis::Z } else { Basis::X };
                c.prep(q, cur_tick, basis)
                    .map_err(|e| FormatError::at(line, e.to_string()))?;
            }
            "meas_z" | "meas_x" => {
                let q = parse_qubit(args.first())?;
                let basis = if key == "meas_z" { Basis::Z } else { Basis::X };
                c.measure(q, cur_tick, basis)
                    .map_err(|e| FormatError::at(line, e.to_string()))?;
            }
            mnemonic => {
                let kind = GATE_MNEMONICS
                    .iter()
                    .find(|(m, _)| *m == mnemonic)
                    .map(|(_, k)| *k)
                    .ok_or_else(|| {
                        FormatError::at(line, format!("unknown mnemonic {mnemonic:?}"))
                    })?;
                let gate = match kind.arity() {
                    1 => CliffordGate::one(kind, parse_qubit(args.first())?),
                    _ => {
                        let a = parse_qubit(args.first())?;
                        let b = parse_qubit(args.get(1))?;
                        if a == b {
                            return Err(FormatError::at(
                                line,
                                "operands must be distinct".to_string(),
                            ));
                        }
                        CliffordGate::two(kind, a, b)
                    }
                };
                c.add_gate(cur_tick, gate)
                    .map_err(|e| FormatError::at(line, e.to_string()))?;
            }
        }
    }
    let mut c = circuit.ok_or_else(|| FormatError::Structure("missing qubits header".into()))?;
    c.set_input_stabilizer(stab_rows)
        .map_err(|e| FormatError::Structure(e.to_string()))?;
    c.validate()
        .map_err(|e| FormatError::Structure(e.to_string()))?;
    Ok(c)
}

/// Serialize a circuit in the text format, preps and measurements at their
/// recorded ticks. Vacated fault-free padding is derived data and is not
/// written; re-normalizing a parsed pre-normal circuit reproduces it.
pub fn serialize_circuit(c: &Circuit) -> String {
    let mut out = format!("qubits {}\n", c.n_total());
    for row in c.input_stabilizer() {
        out.push_str(&format!("stab {row}\n"));
    }
    let emit_boundary = |out: &mut String, tick: usize| {
        for p in c.preps().iter().filter(|p| p.tick == tick) {
            let key = if p.basis == Basis::Z {
                "prep_z"
            } else {
                "prep_x"
            };
            out.push_str(&format!("{key} {}\n", p.qubit));
        }
        for m in c.measurements().iter().filter(|m| m.tick == tick) {
            let key = if m.basis == Basis::Z {
                "meas_z"
            } else {
                "meas_x"
            };
            out.push_str(&format!("{key} {}\n", m.qubit));
        }
    };
    emit_boundary(&mut out, 0);
    for (t, layer) in c.layers().iter().enumerate() {
        for gate in layer {
            out.push_str(&format!("{gate}\n"));
        }
        out.push_str("tick\n");
        emit_boundary(&mut out, t + 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli(text: &str, n: usize) -> PauliOperator {
        PauliOperator::parse(text, n).unwrap()
    }

    #[test]
    fn parse_empty_idle_circuit() {
        let c = parse_circuit("qubits 2\n").unwrap();
        assert_eq!(c.n_total(), 2);
        assert_eq!(c.t_len(), 0);
        let n = c.normalize().unwrap();
        assert_eq!(n.t_len(), 0);
    }

    #[test]
    fn parse_rejects_repeated_operand() {
        let err = parse_circuit("qubits 2\ncnot 0 0\n").unwrap_err();
        assert!(err.to_string().contains("distinct"));
    }

    #[test]
    fn parse_rejects_unknown_mnemonic() {
        let err = parse_circuit("qubits 2\nfrob 0\n").unwrap_err();
        assert!(err.to_string().contains("unknown mnemonic"));
    }

    #[test]
    fn parse_rejects_gate_after_measurement() {
        let text = "qubits 2\nmeas_z 0\nh 0\n";
        assert!(parse_circuit(text).is_err());
    }

    #[test]
    fn odd_tick_count_gets_padded() {
        let c = parse_circuit("qubits 1\nh 0\ntick\nh 0\ntick\nh 0\ntick\n").unwrap();
        assert_eq!(c.t_len(), 3);
        let n = c.normalize().unwrap();
        assert_eq!(n.t_len(), 4);
        assert!(n.is_fault_free(0, 3));
    }

    #[test]
    fn normalize_moves_boundaries_with_fault_free_padding() {
        let text = "qubits 2\ntick\nprep_z 1\ncnot 0 1\ntick\nmeas_z 1\ntick\n";
        let c = parse_circuit(text).unwrap();
        let n = c.normalize().unwrap();
        assert_eq!(n.preps()[0].tick, 0);
        assert!(n.is_fault_free(1, 0));
        let t = n.t_len();
        assert_eq!(n.measurements()[0].tick, t);
        assert!(n.is_fault_free(1, 2));
        // Idles of the never-touched qubit 0 stay faulty.
        assert!(!n.is_fault_free(0, 0));
    }

    #[test]
    fn normalize_is_idempotent() {
        let text = "qubits 3\nprep_z 2\ncnot 0 2\ntick\nh 1\ntick\nmeas_z 2\n";
        let n = parse_circuit(text).unwrap().normalize().unwrap();
        let again = n.normalize().unwrap();
        assert_eq!(n, again);
    }

    #[test]
    fn normalize_preserves_propagation() {
        let text = "qubits 3\nprep_z 2\ncnot 0 2\ntick\nh 1\ns 0\ntick\ncz 1 2\ntick\nmeas_z 2\n";
        let c = parse_circuit(text).unwrap();
        let n = c.normalize().unwrap();
        for text in ["XII", "IYI", "ZZZ", "IXZ"] {
            let p = pauli(text, 3);
            let a = c.propagate(&p, 0, c.t_len());
            let b = n.propagate(&p, 0, c.t_len());
            assert_eq!(a, b);
        }
    }

    #[test]
    fn propagate_round_trip_is_identity() {
        let text = "qubits 3\ncnot 0 1\ntick\nh 2\ns 1\ntick\nswap 0 2\ntick\ncz 0 1\ntick\n";
        let c = parse_circuit(text).unwrap();
        for text in ["XYZ", "ZIX", "YYI"] {
            let p = pauli(text, 3);
            let fwd = c.propagate(&p, 0, 4);
            assert_eq!(c.propagate(&fwd, 4, 0), p);
        }
    }

    #[test]
    fn serialize_round_trip() {
        let text = "qubits 3\nstab +ZZI\nprep_z 2\ncnot 0 2\ntick\nh 1\ntick\nmeas_z 2\n";
        let c = parse_circuit(text).unwrap();
        let round = parse_circuit(&serialize_circuit(&c)).unwrap();
        assert_eq!(c, round);
        let n = c.normalize().unwrap();
        let round_n = parse_circuit(&serialize_circuit(&n)).unwrap();
        assert_eq!(n.layers(), round_n.layers());
        assert_eq!(n.preps(), round_n.preps());
        assert_eq!(n.measurements(), round_n.measurements());
    }

    #[test]
    fn desugar_places_hadamards() {
        let text = "qubits 2\nprep_x 1\ncnot 0 1\ntick\nmeas_x 1\n";
        // prep_x needs a free slot in layer 0, but cnot occupies qubit 1.
        assert!(parse_circuit(text).unwrap().normalize().is_err());
        let text = "qubits 2\nprep_x 1\ntick\ncnot 0 1\ntick\ntick\nmeas_x 1\n";
        let n = parse_circuit(text).unwrap().normalize().unwrap();
        assert_eq!(n.preps()[0].basis, Basis::Z);
        assert_eq!(n.measurements()[0].basis, Basis::Z);
        let h_count: usize = n
            .layers()
            .iter()
            .flatten()
            .filter(|g| g.kind == GateKind::H)
            .count();
        assert_eq!(h_count, 2);
    }

    #[test]
    fn output_stabilizer_dependent_measurement() {
        // Prep and immediately measure: Z is already in the group.
        let text = "qubits 1\nprep_z 0\ntick\ntick\nmeas_z 0\n";
        let c = parse_circuit(text).unwrap().normalize().unwrap();
        let out = output_stabilizer(&c).unwrap();
        assert_eq!(out.measurement_roles.len(), 1);
        assert!(matches!(
            out.measurement_roles[0].1,
            MeasurementRole::Dependent {
                reference_sign: false
            }
        ));
        assert_eq!(out.output_code.n(), 0);
    }

    #[test]
    fn output_stabilizer_adjoins_logical_measurement() {
        let text = "qubits 1\ntick\ntick\nmeas_z 0\n";
        let c = parse_circuit(text).unwrap().normalize().unwrap();
        let out = output_stabilizer(&c).unwrap();
        assert!(matches!(
            out.measurement_roles[0].1,
            MeasurementRole::Adjoined
        ));
        assert_eq!(out.adjoined, vec![0]);
        assert_eq!(out.rank_s_hat_prime(), 1);
        assert_eq!(out.output_code.rank(), 0);
    }

    #[test]
    fn output_stabilizer_rank_bookkeeping() {
        // Both measurements read bare logical qubits: qubit 1 directly,
        // qubit 0 through the ancilla.
        let text = "qubits 3\nprep_z 2\ncnot 0 2\ntick\ntick\nmeas_z 2\nmeas_z 1\n";
        let c = parse_circuit(text).unwrap().normalize().unwrap();
        let out = output_stabilizer(&c).unwrap();
        assert_eq!(out.rank_s_hat(), 1);
        assert_eq!(out.adjoined, vec![1, 2]);
        assert_eq!(
            out.rank_s_hat_prime(),
            out.rank_s_hat() + out.adjoined.len()
        );
        for (q, _) in &out.measurement_roles {
            let z = PauliOperator::single(3, *q, SinglePauli::Z);
            assert!(crate::code::in_group(
                3,
                &out.s_hat_prime,
                &z,
                crate::code::MembershipMode::Phaseless
            )
            .is_member());
        }
    }

    #[test]
    fn output_code_elements_act_trivially_on_measured_qubits() {
        let text = "qubits 3\nstab +ZZI\nprep_z 2\ncnot 1 2\ntick\ntick\nmeas_z 2\n";
        let c = parse_circuit(text).unwrap().normalize().unwrap();
        let out = output_stabilizer(&c).unwrap();
        assert_eq!(out.output_qubits, vec![0, 1]);
        assert_eq!(out.output_code.n(), 2);
        // ZZ on the two data qubits survives.
        assert!(crate::code::in_group(
            2,
            out.output_code.generators(),
            &pauli("ZZ", 2),
            crate::code::MembershipMode::Phaseless
        )
        .is_member());
    }
}
