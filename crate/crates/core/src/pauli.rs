//! n-qubit Pauli operators in binary symplectic form with exact phase tracking.
//!
//! An operator is stored as `i^phase · σ_0 ⊗ σ_1 ⊗ … ⊗ σ_{n-1}` where the
//! single-qubit factor on qubit j is read off two bit vectors:
//! `(x=0,z=0) → I`, `(1,0) → X`, `(1,1) → Y`, `(0,1) → Z`. With this
//! convention Hermitian operators carry an even phase exponent, and the
//! string form prints qubit 0 leftmost with a sign prefix (`+`, `+i`, `-`,
//! `-i`).

use crate::bits::Bits;
use crate::error::PauliParseError;
use serde::{Deserialize, Serialize};

/// One single-qubit Pauli letter.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SinglePauli {
    I,
    X,
    Y,
    Z,
}

impl SinglePauli {
    pub fn bits(self) -> (bool, bool) {
        match self {
            SinglePauli::I => (false, false),
            SinglePauli::X => (true, false),
            SinglePauli::Y => (true, true),
            SinglePauli::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => SinglePauli::I,
            (true, false) => SinglePauli::X,
            (true, true) => SinglePauli::Y,
            (false, true) => SinglePauli::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            SinglePauli::I => 'I',
            SinglePauli::X => 'X',
            SinglePauli::Y => 'Y',
            SinglePauli::Z => 'Z',
        }
    }
}

/// An n-qubit Pauli operator with an i-power phase.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    x: Bits,
    z: Bits,
    phase: u8,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        PauliOperator {
            n,
            x: Bits::zeros(n),
            z: Bits::zeros(n),
            phase: 0,
        }
    }

    /// Single nontrivial letter at `qubit`, all other positions identity.
    pub fn single(n: usize, qubit: usize, letter: SinglePauli) -> Self {
        assert!(qubit < n, "qubit {qubit} out of range for {n} qubits");
        let mut p = PauliOperator::identity(n);
        p.set_letter(qubit, letter);
        p
    }

    /// Build from a letter slice, qubit 0 first.
    pub fn from_letters(letters: &[SinglePauli]) -> Self {
        let mut p = PauliOperator::identity(letters.len());
        for (q, &l) in letters.iter().enumerate() {
            p.set_letter(q, l);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn set_phase(&mut self, phase: u8) {
        self.phase = phase & 3;
    }

    pub fn x_bit(&self, qubit: usize) -> bool {
        self.x.get(qubit)
    }

    pub fn z_bit(&self, qubit: usize) -> bool {
        self.z.get(qubit)
    }

    pub fn x_bits(&self) -> &Bits {
        &self.x
    }

    pub fn z_bits(&self) -> &Bits {
        &self.z
    }

    pub fn letter(&self, qubit: usize) -> SinglePauli {
        SinglePauli::from_bits(self.x.get(qubit), self.z.get(qubit))
    }

    pub fn set_letter(&mut self, qubit: usize, letter: SinglePauli) {
        let (x, z) = letter.bits();
        self.x.set(qubit, x);
        self.z.set(qubit, z);
    }

    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.x.is_zero() && self.z.is_zero()
    }

    /// True when the symplectic part is trivial, regardless of phase.
    pub fn is_phaseless_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.x.or_count(&self.z)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|&q| self.x.get(q) || self.z.get(q))
    }

    fn y_count(&self) -> usize {
        self.x.and_count(&self.z)
    }

    /// Exact operator product `self · other`.
    pub fn multiply(&self, other: &PauliOperator) -> PauliOperator {
        assert_eq!(
            self.n, other.n,
            "dimension error: {} vs {} qubits",
            self.n, other.n
        );
        let mut x = self.x.clone();
        let mut z = self.z.clone();
        x.xor_assign(&other.x);
        z.xor_assign(&other.z);
        let r = PauliOperator {
            n: self.n,
            x,
            z,
            phase: 0,
        };
        // Moving other's X block past self's Z block gives (-1) per overlap;
        // converting between letter form and XZ form costs i per Y.
        let phase = (self.phase as usize
            + other.phase as usize
            + self.y_count()
            + other.y_count()
            + 2 * self.z.and_count(&other.x)
            + 4usize.wrapping_sub(r.y_count() % 4))
            % 4;
        PauliOperator {
            phase: phase as u8,
            ..r
        }
    }

    pub fn multiply_assign(&mut self, other: &PauliOperator) {
        *self = self.multiply(other);
    }

    /// Group inverse: same letters, negated phase.
    pub fn inverse(&self) -> PauliOperator {
        let mut p = self.clone();
        p.phase = (4 - self.phase) % 4;
        p
    }

    /// True iff the symplectic inner product is even; phases are irrelevant.
    pub fn commutes(&self, other: &PauliOperator) -> bool {
        assert_eq!(
            self.n, other.n,
            "dimension error: {} vs {} qubits",
            self.n, other.n
        );
        !(self.x.and_parity(&other.z) ^ self.z.and_parity(&other.x))
    }

    /// Same letters, phase ignored.
    pub fn phaseless_eq(&self, other: &PauliOperator) -> bool {
        self.x == other.x && self.z == other.z
    }

    /// The symplectic row `[x | z]` of length 2n.
    pub fn symplectic_row(&self) -> Bits {
        self.x.concat(&self.z)
    }

    /// Rebuild from a symplectic row, with phase 0.
    pub fn from_symplectic_row(row: &Bits) -> PauliOperator {
        let n = row.len() / 2;
        let mut p = PauliOperator::identity(n);
        for i in row.iter_ones() {
            if i < n {
                p.x.set(i, true);
            } else {
                p.z.set(i - n, true);
            }
        }
        p
    }

    /// Place `self` into a larger register, qubit j of `self` landing on
    /// `positions[j]`.
    pub fn embed(&self, n: usize, positions: &[usize]) -> PauliOperator {
        assert_eq!(positions.len(), self.n);
        let mut p = PauliOperator::identity(n);
        p.phase = self.phase;
        for (q, &pos) in positions.iter().enumerate() {
            p.x.set(pos, self.x.get(q));
            p.z.set(pos, self.z.get(q));
        }
        p
    }

    /// Extract the letters at `positions` as a smaller operator, phase kept.
    pub fn extract(&self, positions: &[usize]) -> PauliOperator {
        let mut p = PauliOperator::identity(positions.len());
        p.phase = self.phase;
        for (j, &q) in positions.iter().enumerate() {
            p.x.set(j, self.x.get(q));
            p.z.set(j, self.z.get(q));
        }
        p
    }

    /// Parse from string form, expecting exactly `n` letters.
    pub fn parse(text: &str, n: usize) -> Result<PauliOperator, PauliParseError> {
        let chars: Vec<char> = text.chars().collect();
        let mut pos = 0;
        let mut phase: u8 = 0;
        let mut negative = false;
        if pos < chars.len() && (chars[pos] == '+' || chars[pos] == '-') {
            negative = chars[pos] == '-';
            pos += 1;
            if pos < chars.len() && chars[pos] == 'i' {
                phase = 1;
                pos += 1;
            }
        } else if pos < chars.len() && chars[pos] == 'i' {
            // A bare 'i' prefix is rejected: the sign is required with it.
            return Err(PauliParseError::MalformedSign { pos });
        }
        if negative {
            phase = (phase + 2) % 4;
        }
        let body = &chars[pos..];
        if body.len() != n {
            // Report bad characters first so "XQ" errors at the Q.
            for (j, &ch) in body.iter().enumerate() {
                if !matches!(ch, 'I' | 'X' | 'Y' | 'Z') {
                    return Err(PauliParseError::BadCharacter { pos: pos + j, ch });
                }
            }
            return Err(PauliParseError::LengthMismatch {
                expected: n,
                got: body.len(),
            });
        }
        let mut p = PauliOperator::identity(n);
        for (j, &ch) in body.iter().enumerate() {
            let letter = match ch {
                'I' => SinglePauli::I,
                'X' => SinglePauli::X,
                'Y' => SinglePauli::Y,
                'Z' => SinglePauli::Z,
                _ => return Err(PauliParseError::BadCharacter { pos: pos + j, ch }),
            };
            p.set_letter(j, letter);
        }
        p.phase = phase;
        Ok(p)
    }
}

impl std::fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let prefix = match self.phase {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}")?;
        for q in 0..self.n {
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl std::fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for PauliOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        let n = text
            .chars()
            .filter(|c| matches!(c, 'I' | 'X' | 'Y' | 'Z'))
            .count();
        PauliOperator::parse(&text, n).map_err(serde::de::Error::custom)
    }
}
