//! Shared helpers for the integration and acceptance suites: dense-matrix
//! Pauli/Clifford oracles, seeded random circuits, and a circuit-level
//! fault-distinguishability oracle that never touches the spacetime code.
// Each test binary uses a different subset of these helpers.
#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use stcode::bits::Bits;
use stcode::circuit::{Basis, Circuit};
use stcode::clifford::{CliffordGate, GateKind};
use stcode::fault::{FaultPath, ProjectionEnd};
use stcode::gf2::Echelon;
use stcode::pauli::{PauliOperator, SinglePauli};
use stcode::SpacetimeCode;

pub const LETTERS: [SinglePauli; 4] = [
    SinglePauli::I,
    SinglePauli::X,
    SinglePauli::Y,
    SinglePauli::Z,
];

// ---------------------------------------------------------------------
// Dense matrix oracle.

pub type Matrix = Vec<Vec<Complex64>>;

pub fn letter_matrix(letter: SinglePauli) -> Matrix {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match letter {
        SinglePauli::I => vec![vec![l, o], vec![o, l]],
        SinglePauli::X => vec![vec![o, l], vec![l, o]],
        SinglePauli::Y => vec![vec![o, -i], vec![i, o]],
        SinglePauli::Z => vec![vec![l, o], vec![o, -l]],
    }
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, ca) = (a.len(), a[0].len());
    let (rb, cb) = (b.len(), b[0].len());
    let mut out = vec![vec![Complex64::new(0.0, 0.0); ca * cb]; ra * rb];
    for i in 0..ra {
        for j in 0..ca {
            for k in 0..rb {
                for l in 0..cb {
                    out[i * rb + k][j * cb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, ca) = (a.len(), a[0].len());
    let cb = b[0].len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); cb]; ra];
    for i in 0..ra {
        for k in 0..ca {
            if a[i][k].norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..cb {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn dagger(a: &Matrix) -> Matrix {
    let (r, c) = (a.len(), a[0].len());
    let mut out = vec![vec![Complex64::new(0.0, 0.0); r]; c];
    for i in 0..r {
        for j in 0..c {
            out[j][i] = a[i][j].conj();
        }
    }
    out
}

pub fn mat_approx_eq(a: &Matrix, b: &Matrix) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(ra, rb)| ra.iter().zip(rb).all(|(x, y)| (x - y).norm() < 1e-9))
}

/// Dense matrix of a Pauli operator, qubit 0 as the leftmost tensor factor.
pub fn pauli_matrix(p: &PauliOperator) -> Matrix {
    let phase = Complex64::new(0.0, 1.0).powu(p.phase() as u32);
    let mut m = vec![vec![phase]];
    for q in 0..p.n() {
        m = kron(&m, &letter_matrix(p.letter(q)));
    }
    m
}

/// Dense unitary of a gate on `n` qubits.
pub fn gate_unitary(gate: &CliffordGate, n: usize) -> Matrix {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let single = |kind: GateKind| -> Matrix {
        match kind {
            GateKind::I => vec![vec![l, o], vec![o, l]],
            GateKind::X => vec![vec![o, l], vec![l, o]],
            GateKind::Y => vec![vec![o, -i], vec![i, o]],
            GateKind::Z => vec![vec![l, o], vec![o, -l]],
            GateKind::H => vec![vec![s, s], vec![s, -s]],
            GateKind::S => vec![vec![l, o], vec![o, i]],
            GateKind::Sdg => vec![vec![l, o], vec![o, -i]],
            _ => unreachable!(),
        }
    };
    let dim = 1usize << n;
    let mut u = vec![vec![o; dim]; dim];
    match gate.kind.arity() {
        1 => {
            let g = single(gate.kind);
            // U |x> = sum_y U[y][x] |y>, acting on the gate's qubit.
            for row in 0..dim {
                let bit = row >> (n - 1 - gate.a) & 1;
                for new_bit in 0..2 {
                    let amp = g[new_bit][bit];
                    if amp.norm_sqr() == 0.0 {
                        continue;
                    }
                    let target = (row & !(1 << (n - 1 - gate.a))) | (new_bit << (n - 1 - gate.a));
                    u[target][row] += amp;
                }
            }
        }
        _ => {
            let b = gate.b.unwrap();
            for row in 0..dim {
                let ba = row >> (n - 1 - gate.a) & 1;
                let bb = row >> (n - 1 - b) & 1;
                let (na, nb, amp) = match gate.kind {
                    GateKind::Cnot => (ba, ba ^ bb, l),
                    GateKind::Cz => (ba, bb, if ba == 1 && bb == 1 { -l } else { l }),
                    GateKind::Swap => (bb, ba, l),
                    _ => unreachable!(),
                };
                let target = (row & !(1 << (n - 1 - gate.a)) & !(1 << (n - 1 - b)))
                    | (na << (n - 1 - gate.a))
                    | (nb << (n - 1 - b));
                u[target][row] += amp;
            }
        }
    }
    u
}

// ---------------------------------------------------------------------
// Random values.

pub fn random_pauli(rng: &mut ChaCha12Rng, n: usize) -> PauliOperator {
    let mut p = PauliOperator::identity(n);
    for q in 0..n {
        p.set_letter(q, LETTERS[rng.gen_range(0..4)]);
    }
    p.set_phase(rng.gen_range(0..4));
    p
}

const ONE_QUBIT_KINDS: [GateKind; 7] = [
    GateKind::I,
    GateKind::X,
    GateKind::Y,
    GateKind::Z,
    GateKind::H,
    GateKind::S,
    GateKind::Sdg,
];
const TWO_QUBIT_KINDS: [GateKind; 3] = [GateKind::Cnot, GateKind::Cz, GateKind::Swap];

/// A random valid circuit: trailing prepared qubits, random layers, a
/// random subset of final measurements, and a random commuting independent
/// input stabilizer.
pub fn random_circuit(rng: &mut ChaCha12Rng, max_total: usize, max_ticks: usize) -> Circuit {
    let n_total = rng.gen_range(1..=max_total);
    let t = rng.gen_range(1..=max_ticks);
    let preps = rng.gen_range(0..=n_total);
    let n_input = n_total - preps;
    let mut c = Circuit::empty(n_total);
    for q in n_input..n_total {
        c.prep(q, 0, Basis::Z).unwrap();
    }
    for tick in 0..t {
        let mut free: Vec<usize> = (0..n_total).collect();
        while !free.is_empty() && rng.gen_bool(0.75) {
            if free.len() >= 2 && rng.gen_bool(0.5) {
                let a = free.swap_remove(rng.gen_range(0..free.len()));
                let b = free.swap_remove(rng.gen_range(0..free.len()));
                let kind = TWO_QUBIT_KINDS[rng.gen_range(0..TWO_QUBIT_KINDS.len())];
                c.add_gate(tick, CliffordGate::two(kind, a, b)).unwrap();
            } else {
                let q = free.swap_remove(rng.gen_range(0..free.len()));
                let kind = ONE_QUBIT_KINDS[rng.gen_range(0..ONE_QUBIT_KINDS.len())];
                c.add_gate(tick, CliffordGate::one(kind, q)).unwrap();
            }
        }
    }
    while c.t_len() < t {
        c.push_tick();
    }
    for q in 0..n_total {
        if rng.gen_bool(0.35) {
            c.measure(q, t, Basis::Z).unwrap();
        }
    }
    // Random commuting independent stabilizer rows on the input qubits.
    if n_input > 0 {
        let mut rows: Vec<PauliOperator> = Vec::new();
        let mut echelon = Echelon::new(2 * n_total);
        let attempts = rng.gen_range(0..=n_input);
        for _ in 0..attempts * 4 {
            if rows.len() >= n_input {
                break;
            }
            let mut candidate = PauliOperator::identity(n_total);
            for q in 0..n_input {
                candidate.set_letter(q, LETTERS[rng.gen_range(0..4)]);
            }
            if candidate.is_phaseless_identity() {
                continue;
            }
            if !rows.iter().all(|r| r.commutes(&candidate)) {
                continue;
            }
            if echelon.insert(candidate.symplectic_row()).is_ok() {
                rows.push(candidate);
            }
        }
        c.set_input_stabilizer(rows).unwrap();
    }
    c.validate().unwrap();
    c
}

// ---------------------------------------------------------------------
// Circuit-level distinguishability oracle.
//
// Works entirely on circuit-width operators at the final tick: propagate
// each fault forward, collect raw measurement flips, and compare paths
// through (a) parity combinations of measurements that are determined by
// the input constraints, (b) frame checks of constraints that survive into
// the output group, and (c) equivalence modulo propagated constraints and
// measurement operators. No spacetime qubits, spackles, or mask tables.

pub struct DirectOracle {
    circuit: Circuit,
    measured: Vec<usize>,
    /// Propagated images of the input constraints (stabilizer rows then
    /// prep rows).
    images: Vec<PauliOperator>,
    /// Products of images lying in the measurement-Z subgroup: the
    /// syndrome-bearing parity combinations.
    now_checks: Vec<PauliOperator>,
    /// Products of images free of X support on measured qubits: constraints
    /// whose frame can still be checked in or after this gadget.
    future_checks: Vec<PauliOperator>,
    /// Echelon of <images, measurement Zs>: the residual equivalence group.
    closure: Echelon,
}

#[derive(Debug, PartialEq, Eq, Clone, Copy)]
pub enum OracleVerdict {
    CorrectedNow,
    DeferredDistinct,
    LogicalConfusion,
}

impl DirectOracle {
    pub fn new(circuit: &Circuit) -> Self {
        assert!(circuit.is_normalized());
        let n = circuit.n_total();
        let t = circuit.t_len();
        let measured = circuit.measured_qubits();
        let mut rows: Vec<PauliOperator> = circuit.input_stabilizer().to_vec();
        let mut prep_qubits: Vec<usize> = circuit.preps().iter().map(|p| p.qubit).collect();
        prep_qubits.sort_unstable();
        for q in prep_qubits {
            rows.push(PauliOperator::single(n, q, SinglePauli::Z));
        }
        let images: Vec<PauliOperator> = rows.iter().map(|r| circuit.propagate(r, 0, t)).collect();

        // Syndrome-bearing combinations: kernel of images reduced modulo
        // the measurement-Z subgroup.
        let mut reduced_rows = Vec::new();
        for img in &images {
            let mut row = img.symplectic_row();
            for &m in &measured {
                row.set(n + m, false);
            }
            reduced_rows.push(row);
        }
        let now_combos = stcode::gf2::kernel_basis(2 * n, &reduced_rows);
        let now_checks: Vec<PauliOperator> = now_combos
            .iter()
            .map(|combo| product_of(&images, combo))
            .collect();

        // Future-checkable combinations: kernel of the X-components at
        // measured qubits.
        let x_rows: Vec<Bits> = images
            .iter()
            .map(|img| {
                let mut row = Bits::zeros(measured.len());
                for (j, &m) in measured.iter().enumerate() {
                    row.set(j, img.x_bit(m));
                }
                row
            })
            .collect();
        let future_combos = stcode::gf2::kernel_basis(measured.len(), &x_rows);
        let future_checks: Vec<PauliOperator> = future_combos
            .iter()
            .map(|combo| product_of(&images, combo))
            .collect();

        let mut closure = Echelon::new(2 * n);
        for img in &images {
            let _ = closure.insert(img.symplectic_row());
        }
        for &m in &measured {
            let _ = closure.insert(PauliOperator::single(n, m, SinglePauli::Z).symplectic_row());
        }
        DirectOracle {
            circuit: circuit.clone(),
            measured,
            images,
            now_checks,
            future_checks,
            closure,
        }
    }

    /// Forward-propagated total error of a fault path at the final tick.
    pub fn propagated_error(&self, path: &FaultPath) -> PauliOperator {
        let n = self.circuit.n_total();
        let t = self.circuit.t_len();
        let mut out = PauliOperator::identity(n);
        for (loc, err) in path.faults() {
            let slice = loc.slice(t);
            let embedded = err.embed(n, &loc.support());
            out.multiply_assign(&self.circuit.propagate(&embedded, slice, t));
        }
        out
    }

    /// Raw measurement flips: the X components of the propagated error on
    /// the measured qubits.
    pub fn raw_flips(&self, path: &FaultPath) -> Vec<bool> {
        let err = self.propagated_error(path);
        self.measured.iter().map(|&m| err.x_bit(m)).collect()
    }

    /// Observable syndrome: parities of raw flips over the determined
    /// measurement combinations.
    pub fn observed_bits(&self, path: &FaultPath) -> Vec<bool> {
        let err = self.propagated_error(path);
        self.now_checks.iter().map(|c| !c.commutes(&err)).collect()
    }

    pub fn verdict(&self, a: &FaultPath, b: &FaultPath) -> OracleVerdict {
        let mut r = self.propagated_error(a);
        r.multiply_assign(&self.propagated_error(b));
        let now_differs = self.now_checks.iter().any(|c| !c.commutes(&r));
        if now_differs || self.closure.contains(&r.symplectic_row()) {
            return OracleVerdict::CorrectedNow;
        }
        if self.future_checks.iter().any(|c| !c.commutes(&r)) {
            return OracleVerdict::DeferredDistinct;
        }
        OracleVerdict::LogicalConfusion
    }

    pub fn images(&self) -> &[PauliOperator] {
        &self.images
    }
}

fn product_of(items: &[PauliOperator], combo: &Bits) -> PauliOperator {
    let n = items[0].n();
    let mut acc = PauliOperator::identity(n);
    for i in combo.iter_ones() {
        acc.multiply_assign(&items[i]);
    }
    acc
}

/// All single-fault paths of a compiled circuit, including the empty path.
pub fn single_fault_paths(st: &SpacetimeCode) -> Vec<FaultPath> {
    let mut paths = Vec::new();
    stcode::for_each_fault_path(st, 1, stcode::DEFAULT_BUDGET, |p| paths.push(p.clone()))
        .expect("single-fault enumeration fits any budget");
    paths
}

/// Spacetime-side residual, restricted to the output qubits.
pub fn output_residual(st: &SpacetimeCode, path: &FaultPath) -> PauliOperator {
    let error = path.spacetime_error(st);
    stcode::project(st, &error, ProjectionEnd::Out).extract(&st.output().output_qubits)
}
