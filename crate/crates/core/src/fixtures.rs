//! Built-in circuits: the plain and flagged parity-measurement gadgets, the
//! five-qubit toy gadget, and one round of syndrome extraction for the
//! distance-L rotated planar surface code.
//!
//! The extraction fixture deliberately uses hook-prone CNOT orderings and a
//! schedule that runs every X-type window before every Z-type window, so
//! the plain variant exhibits the classic confusable hook fault while the
//! flagged variant does not. Note the extraction code here is the rotated
//! planar patch, not the torus of [`crate::code::surface_code`]: on the
//! torus the two same-type qubits of any check are displaced perpendicular
//! to the logical strings, so no hook can align with a logical and the
//! plain/flagged contrast disappears.

use crate::circuit::{parse_circuit, Basis, Circuit};
use crate::clifford::{CliffordGate, GateKind};
use crate::code::StabilizerGroup;
use crate::error::CodeError;
use crate::pauli::{PauliOperator, SinglePauli};

/// Non-fault-tolerant measurement of ZZZZ with a bare ancilla: four data
/// qubits 0..4, ancilla 4.
///
/// Standalone the data qubits carry a definite all-zeros state (Z rows in
/// the input stabilizer), so the gadget's own fault tolerance is
/// well-posed; the code-embedded behavior of these gadgets is exercised
/// by the surface-extraction fixtures.
pub fn flag_circuit_plain() -> Circuit {
    parse_circuit(
        "qubits 5\n\
         stab +ZIIII\n\
         stab +IZIII\n\
         stab +IIZII\n\
         stab +IIIZI\n\
         prep_z 4\n\
         cnot 0 4\ntick\n\
         cnot 1 4\ntick\n\
         cnot 2 4\ntick\n\
         cnot 3 4\ntick\n\
         meas_z 4\n",
    )
    .expect("plain flag fixture parses")
}

/// Flagged measurement of ZZZZ: data 0..4 in a definite all-zeros state,
/// ancilla 4, flag 5 prepared in the plus state and read out in the X
/// basis.
pub fn flag_circuit_flagged() -> Circuit {
    parse_circuit(
        "qubits 6\n\
         stab +ZIIIII\n\
         stab +IZIIII\n\
         stab +IIZIII\n\
         stab +IIIZII\n\
         prep_z 4\n\
         prep_x 5\n\
         cnot 0 4\ntick\n\
         cnot 5 4\ntick\n\
         cnot 1 4\ntick\n\
         cnot 2 4\ntick\n\
         cnot 5 4\ntick\n\
         cnot 3 4\ntick\n\
         meas_z 4\n\
         meas_x 5\n",
    )
    .expect("flagged fixture parses")
}

/// The five-qubit toy gadget: two ancilla preparations, three gate layers,
/// one measurement.
pub fn toy_circuit() -> Circuit {
    parse_circuit(
        "qubits 5\n\
         prep_z 3\n\
         prep_z 4\n\
         cnot 0 1\n\
         cnot 2 3\n\
         h 4\ntick\n\
         cnot 4 2\ntick\n\
         cnot 1 3\ntick\n\
         meas_z 3\n",
    )
    .expect("toy fixture parses")
}

/// X-type or Z-type parity check.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CheckType {
    X,
    Z,
}

/// One parity check of the rotated planar code, with its data qubits in
/// the CNOT order used by the extraction circuits.
#[derive(Clone, Debug)]
pub struct SurfaceCheck {
    pub check_type: CheckType,
    pub data: Vec<usize>,
    pub site: (usize, usize),
}

/// The parity checks of the distance-L rotated planar surface code on an
/// L×L data grid: [[L², 1, L]].
///
/// Plaquette sites live on the (L+1)×(L+1) corner grid; a site is Z-type
/// when its coordinates sum to an even number. Weight-two boundary checks
/// survive on the top/bottom edges for Z and the left/right edges for X.
///
/// Weight-four CNOT orders are chosen hook-prone on purpose: Z checks
/// finish on a column pair and X checks on a row pair, parallel to the
/// corresponding logical string.
pub fn rotated_planar_checks(lattice: usize) -> Result<Vec<SurfaceCheck>, CodeError> {
    if lattice < 2 {
        return Err(CodeError::LatticeTooSmall(lattice));
    }
    let l = lattice;
    let q = |r: isize, c: isize| -> Option<usize> {
        if r >= 0 && c >= 0 && (r as usize) < l && (c as usize) < l {
            Some(r as usize * l + c as usize)
        } else {
            None
        }
    };
    let mut x_checks = Vec::new();
    let mut z_checks = Vec::new();
    for r in 0..=l {
        for c in 0..=l {
            let (ri, ci) = (r as isize, c as isize);
            let top_left = q(ri - 1, ci - 1);
            let top_right = q(ri - 1, ci);
            let bottom_left = q(ri, ci - 1);
            let bottom_right = q(ri, ci);
            let corners = [top_left, top_right, bottom_left, bottom_right];
            let present: Vec<usize> = corners.iter().flatten().copied().collect();
            let is_z = (r + c) % 2 == 0;
            let data = match present.len() {
                4 => {
                    let (tl, tr, bl, br) = (
                        top_left.unwrap(),
                        top_right.unwrap(),
                        bottom_left.unwrap(),
                        bottom_right.unwrap(),
                    );
                    if is_z {
                        // Left column first; the hook suffix is the right
                        // column pair.
                        vec![tl, bl, tr, br]
                    } else {
                        // Top row first; the hook suffix is the bottom row
                        // pair.
                        vec![tl, tr, bl, br]
                    }
                }
                2 => {
                    let on_vertical_boundary = r == 0 || r == l;
                    if is_z != on_vertical_boundary {
                        continue;
                    }
                    present
                }
                _ => continue,
            };
            let check = SurfaceCheck {
                check_type: if is_z { CheckType::Z } else { CheckType::X },
                data,
                site: (r, c),
            };
            if is_z {
                z_checks.push(check);
            } else {
                x_checks.push(check);
            }
        }
    }
    let mut checks = x_checks;
    checks.append(&mut z_checks);
    Ok(checks)
}

/// The rotated planar code as a stabilizer group.
pub fn rotated_planar_code(lattice: usize) -> Result<StabilizerGroup, CodeError> {
    let checks = rotated_planar_checks(lattice)?;
    let n = lattice * lattice;
    let generators = checks
        .iter()
        .map(|check| {
            let letter = match check.check_type {
                CheckType::X => SinglePauli::X,
                CheckType::Z => SinglePauli::Z,
            };
            let mut p = PauliOperator::identity(n);
            for &q in &check.data {
                p.set_letter(q, letter);
            }
            p
        })
        .collect();
    StabilizerGroup::new(n, generators)
}

/// Ancilla style for syndrome extraction.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ExtractionStyle {
    Plain,
    Flagged,
}

/// One round of syndrome extraction for every check of the distance-L
/// rotated planar code, one check window at a time, all X-type windows
/// before all Z-type windows.
///
/// Plain style measures each check through a bare ancilla; flagged style
/// adds one flag qubit to each weight-four window, wired as in the flagged
/// ZZZZ gadget. Desk scale only: L must be 2 or 3.
pub fn surface_extraction(lattice: usize, style: ExtractionStyle) -> Result<Circuit, CodeError> {
    if !(2..=3).contains(&lattice) {
        return Err(CodeError::UnsupportedLattice(lattice));
    }
    let checks = rotated_planar_checks(lattice)?;
    let n_data = lattice * lattice;
    let flagged_windows: Vec<bool> = checks
        .iter()
        .map(|ch| style == ExtractionStyle::Flagged && ch.data.len() == 4)
        .collect();
    let n_flags = flagged_windows.iter().filter(|&&f| f).count();
    let n_total = n_data + checks.len() + n_flags;

    let mut c = Circuit::empty(n_total);
    let code = rotated_planar_code(lattice)?;
    let rows: Vec<PauliOperator> = code
        .generators()
        .iter()
        .map(|p| {
            let positions: Vec<usize> = (0..n_data).collect();
            p.embed(n_total, &positions)
        })
        .collect();
    c.set_input_stabilizer(rows).expect("input stabilizer rows");

    let mut tick = 0usize;
    let mut next_flag = n_data + checks.len();
    for (k, check) in checks.iter().enumerate() {
        let anc = n_data + k;
        let flag = if flagged_windows[k] {
            let f = next_flag;
            next_flag += 1;
            Some(f)
        } else {
            None
        };
        let window = build_window(check, anc, flag);
        let start = tick;
        c.prep(anc, start, Basis::Z).expect("ancilla prep");
        if let Some(f) = flag {
            let basis = match check.check_type {
                CheckType::Z => Basis::X,
                CheckType::X => Basis::Z,
            };
            c.prep(f, start, basis).expect("flag prep");
        }
        for (dt, layer) in window.iter().enumerate() {
            for gate in layer {
                c.add_gate(start + dt, *gate).expect("window gate");
            }
        }
        tick = start + window.len();
        c.measure(anc, tick, Basis::Z).expect("ancilla measurement");
        if let Some(f) = flag {
            let basis = match check.check_type {
                CheckType::Z => Basis::X,
                CheckType::X => Basis::Z,
            };
            c.measure(f, tick, basis).expect("flag measurement");
        }
    }
    while c.t_len() < tick {
        c.push_tick();
    }
    c.validate().expect("extraction circuit is consistent");
    Ok(c)
}

/// Gate layers of one check window (relative ticks).
fn build_window(check: &SurfaceCheck, anc: usize, flag: Option<usize>) -> Vec<Vec<CliffordGate>> {
    let d = &check.data;
    let cnot = |a, b| CliffordGate::two(GateKind::Cnot, a, b);
    let h = |q| CliffordGate::one(GateKind::H, q);
    match (check.check_type, flag) {
        (CheckType::Z, None) => d.iter().map(|&q| vec![cnot(q, anc)]).collect(),
        (CheckType::X, None) => {
            let mut layers = vec![vec![h(anc)]];
            layers.extend(d.iter().map(|&q| vec![cnot(anc, q)]));
            layers.push(vec![h(anc)]);
            layers
        }
        (CheckType::Z, Some(f)) => vec![
            vec![cnot(d[0], anc)],
            vec![cnot(f, anc)],
            vec![cnot(d[1], anc)],
            vec![cnot(d[2], anc)],
            vec![cnot(f, anc)],
            vec![cnot(d[3], anc)],
        ],
        (CheckType::X, Some(f)) => vec![
            vec![h(anc)],
            vec![cnot(anc, d[0])],
            vec![cnot(anc, f)],
            vec![cnot(anc, d[1])],
            vec![cnot(anc, d[2])],
            vec![cnot(anc, f)],
            vec![cnot(anc, d[3])],
            vec![h(anc)],
        ],
    }
}
