//! Error types shared across the crate.

use thiserror::Error;

/// Errors from parsing Pauli strings.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PauliParseError {
    #[error("malformed sign prefix at position {pos}")]
    MalformedSign { pos: usize },
    #[error("bad character {ch:?} at position {pos}")]
    BadCharacter { pos: usize, ch: char },
    #[error("operator has {got} qubits, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

/// Errors from parsing or validating circuit and code files.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("{0}")]
    Structure(String),
}

impl FormatError {
    pub fn at(line: usize, msg: impl Into<String>) -> Self {
        FormatError::Line {
            line,
            msg: msg.into(),
        }
    }
}

/// Errors from constructing or validating code objects.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("stabilizer generators {0} and {1} anticommute")]
    NonAbelianStabilizer(usize, usize),
    #[error("gauge generator {gauge} anticommutes with stabilizer generator {stab}")]
    GaugeOutsideNormalizer { gauge: usize, stab: usize },
    #[error("stabilizer generator {0} is not in the gauge group")]
    StabilizerOutsideGauge(usize),
    #[error("temporarily-masked generator {0} is not in the stabilizer group")]
    MaskOutsideStabilizer(usize),
    #[error("unmasked generator {0} is not in the temporarily-masked subgroup")]
    UnmaskedOutsideMask(usize),
    #[error("lattice size must be at least 2, got {0}")]
    LatticeTooSmall(usize),
    #[error("syndrome extraction supports lattice sizes 2 and 3, got {0}")]
    UnsupportedLattice(usize),
}

/// Errors from circuit validation and analysis preconditions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("qubit {qubit} out of range for {n_total} qubits")]
    QubitOutOfRange { qubit: usize, n_total: usize },
    #[error("tick {tick} out of range for {t_len} ticks")]
    TickOutOfRange { tick: usize, t_len: usize },
    #[error("gate operands must be distinct, got qubit {0} twice")]
    RepeatedOperand(usize),
    #[error("qubit {qubit} used twice in tick {tick}")]
    OverlappingSupport { qubit: usize, tick: usize },
    #[error("qubit {qubit} is prepared twice")]
    RepeatedPrep { qubit: usize },
    #[error("qubit {qubit} is measured twice")]
    RepeatedMeasurement { qubit: usize },
    #[error("gate touches qubit {qubit} at tick {tick}, before its preparation at tick {prep}")]
    GateBeforePrep {
        qubit: usize,
        tick: usize,
        prep: usize,
    },
    #[error("gate touches qubit {qubit} at tick {tick}, after its measurement at tick {meas}")]
    GateAfterMeasurement {
        qubit: usize,
        tick: usize,
        meas: usize,
    },
    #[error("input stabilizer row {row} has support on prepared qubit {qubit}")]
    StabilizerOnAncilla { row: usize, qubit: usize },
    #[error("input stabilizer rows {0} and {1} anticommute")]
    StabilizerAnticommutes(usize, usize),
    #[error("input stabilizer row {0} is dependent on earlier rows")]
    StabilizerDependent(usize),
    #[error(
        "prepared qubits must be the trailing indices; qubit {qubit} is prepared but {hole} is not"
    )]
    PrepsNotTrailing { qubit: usize, hole: usize },
    #[error("{basis}-basis rotation for qubit {qubit} needs a free slot at tick {tick}")]
    NoRoomForBasisChange {
        qubit: usize,
        tick: usize,
        basis: char,
    },
    #[error("circuit must be normalized first")]
    NotNormalized,
}

/// Errors from fault-path analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("enumeration budget exceeded: {needed} paths, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("fault probability must be in [0, 1], got {0}")]
    BadProbability(f64),
    #[error("shot count must be at least 1")]
    NoShots,
    #[error("syndrome has {got} bits, expected {expected}")]
    SyndromeLength { expected: usize, got: usize },
    #[error("invalid fault location: {0}")]
    BadLocation(String),
    #[error("gadget {0} output code does not match gadget {1} input code")]
    ChainCodeMismatch(usize, usize),
    #[error(
        "acceptable residual classes for syndrome {syndrome:?} of gadget {gadget} are confusable"
    )]
    ConfusableAcceptableSet { gadget: usize, syndrome: String },
}
