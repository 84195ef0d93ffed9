//! Clifford gates and conjugation of Pauli operators through gates and
//! circuit layers.
//!
//! Gate semantics live in data tables: each gate kind records the images
//! `U X U†` and `U Z U†` for every operand position. Conjugating a general
//! Pauli decomposes it on the gate support into X/Z factors and substitutes
//! the table images with exact phase bookkeeping, so adding a Clifford gate
//! is a table entry, not a new code path.

use crate::pauli::{PauliOperator, SinglePauli};
use serde::{Deserialize, Serialize};

/// The supported gate kinds.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    I,
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    Cnot,
    Cz,
    Swap,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Cz | GateKind::Swap => 2,
            _ => 1,
        }
    }

    /// The gate implementing the inverse unitary.
    pub fn inverse(self) -> GateKind {
        match self {
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            other => other,
        }
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::I => "i",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::H => "h",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::Cnot => "cnot",
            GateKind::Cz => "cz",
            GateKind::Swap => "swap",
        }
    }
}

/// A gate applied to one or two distinct qubits.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CliffordGate {
    pub kind: GateKind,
    pub a: usize,
    pub b: Option<usize>,
}

impl CliffordGate {
    pub fn one(kind: GateKind, q: usize) -> Self {
        assert_eq!(kind.arity(), 1, "{kind:?} takes two operands");
        CliffordGate {
            kind,
            a: q,
            b: None,
        }
    }

    pub fn two(kind: GateKind, a: usize, b: usize) -> Self {
        assert_eq!(kind.arity(), 2, "{kind:?} takes one operand");
        assert_ne!(a, b, "gate operands must be distinct");
        CliffordGate {
            kind,
            a,
            b: Some(b),
        }
    }

    pub fn operands(&self) -> Vec<usize> {
        match self.b {
            Some(b) => vec![self.a, b],
            None => vec![self.a],
        }
    }

    pub fn supports(&self, qubit: usize) -> bool {
        self.a == qubit || self.b == Some(qubit)
    }

    pub fn max_operand(&self) -> usize {
        self.a.max(self.b.unwrap_or(0))
    }
}

impl std::fmt::Display for CliffordGate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.b {
            Some(b) => write!(f, "{} {} {}", self.kind.mnemonic(), self.a, b),
            None => write!(f, "{} {}", self.kind.mnemonic(), self.a),
        }
    }
}

/// One conjugation image: a phase power of i and a letter per operand.
#[derive(Copy, Clone, Debug)]
pub struct Image {
    pub phase: u8,
    pub letters: [SinglePauli; 2],
}

const fn img1(phase: u8, l: SinglePauli) -> Image {
    Image {
        phase,
        letters: [l, SinglePauli::I],
    }
}

const fn img2(phase: u8, l0: SinglePauli, l1: SinglePauli) -> Image {
    Image {
        phase,
        letters: [l0, l1],
    }
}

/// Conjugation images of the generators X and Z on each operand position.
#[derive(Copy, Clone, Debug)]
pub struct GateSemantics {
    /// `images[j].0` is U X_j U†, `images[j].1` is U Z_j U†.
    pub images: [(Image, Image); 2],
}

use SinglePauli::{I, X, Y, Z};

const ONE_QUBIT_PAD: (Image, Image) = (img1(0, I), img1(0, I));

/// Conjugation table for every gate kind.
pub fn semantics(kind: GateKind) -> GateSemantics {
    let images = match kind {
        GateKind::I => [(img1(0, X), img1(0, Z)), ONE_QUBIT_PAD],
        GateKind::X => [(img1(0, X), img1(2, Z)), ONE_QUBIT_PAD],
        GateKind::Y => [(img1(2, X), img1(2, Z)), ONE_QUBIT_PAD],
        GateKind::Z => [(img1(2, X), img1(0, Z)), ONE_QUBIT_PAD],
        GateKind::H => [(img1(0, Z), img1(0, X)), ONE_QUBIT_PAD],
        GateKind::S => [(img1(0, Y), img1(0, Z)), ONE_QUBIT_PAD],
        GateKind::Sdg => [(img1(2, Y), img1(0, Z)), ONE_QUBIT_PAD],
        GateKind::Cnot => [
            (img2(0, X, X), img2(0, Z, I)),
            (img2(0, I, X), img2(0, Z, Z)),
        ],
        GateKind::Cz => [
            (img2(0, X, Z), img2(0, Z, I)),
            (img2(0, Z, X), img2(0, I, Z)),
        ],
        GateKind::Swap => [
            (img2(0, I, X), img2(0, I, Z)),
            (img2(0, X, I), img2(0, Z, I)),
        ],
    };
    GateSemantics { images }
}

/// Propagation direction through a gate or circuit.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Conjugate `p` in place through `gate`: forward gives U p U†, backward
/// gives U† p U.
pub fn apply_gate(p: &mut PauliOperator, gate: &CliffordGate, direction: Direction) {
    let kind = match direction {
        Direction::Forward => gate.kind,
        Direction::Backward => gate.kind.inverse(),
    };
    let table = semantics(kind);
    let ops = gate.operands();
    debug_assert!(ops.iter().all(|&q| q < p.n()));

    let mut acc = PauliOperator::identity(p.n());
    let mut extra_phase = 0u8;
    let mut touched = false;
    for (pos, &q) in ops.iter().enumerate() {
        let x = p.x_bit(q);
        let z = p.z_bit(q);
        if x && z {
            // The letter Y decomposes as i·X·Z before substitution.
            extra_phase = (extra_phase + 1) % 4;
        }
        if x {
            acc.multiply_assign(&image_operator(&table.images[pos].0, &ops, p.n()));
            touched = true;
        }
        if z {
            acc.multiply_assign(&image_operator(&table.images[pos].1, &ops, p.n()));
            touched = true;
        }
    }
    if !touched {
        return;
    }
    let mut out = p.clone();
    for &q in &ops {
        out.set_letter(q, SinglePauli::I);
    }
    out.set_phase((p.phase() + extra_phase) % 4);
    out.multiply_assign(&acc);
    *p = out;
}

fn image_operator(img: &Image, ops: &[usize], n: usize) -> PauliOperator {
    let mut p = PauliOperator::identity(n);
    for (pos, &q) in ops.iter().enumerate() {
        p.set_letter(q, img.letters[pos]);
    }
    p.set_phase(img.phase);
    p
}

/// Conjugate through a whole layer of disjoint gates.
pub fn apply_layer(p: &mut PauliOperator, layer: &[CliffordGate], direction: Direction) {
    for gate in layer {
        apply_gate(p, gate, direction);
    }
}
