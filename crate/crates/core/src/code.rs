//! Stabilizer groups, masked subsystem codes, group membership solvers, and
//! weight-bounded distance search.
//!
//! All membership and distance computations here are phaseless (they act on
//! the symplectic part only); signed membership is available separately for
//! measurement-frame work.

use crate::bits::Bits;
use crate::error::{CodeError, FormatError};
use crate::gf2::Echelon;
use crate::pauli::{PauliOperator, SinglePauli};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Independent spanning set for a list of Pauli generators, with the rank.
///
/// The returned operators are products of the input generators (phases are
/// the exact product phases), in reduced row-echelon order: deterministic
/// for a fixed input order.
pub fn reduce(n: usize, generators: &[PauliOperator]) -> (Vec<PauliOperator>, usize) {
    let mut echelon = Echelon::with_tracking(2 * n, generators.len());
    let mut kept: Vec<usize> = Vec::new();
    for (i, g) in generators.iter().enumerate() {
        if echelon.insert(g.symplectic_row()).is_ok() {
            kept.push(i);
        }
    }
    let basis: Vec<PauliOperator> = kept.iter().map(|&i| generators[i].clone()).collect();
    let rank = basis.len();
    (basis, rank)
}

/// Membership query result; the witness lists indices of generators whose
/// product equals the query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupMembership {
    No,
    Yes { witness: Vec<usize> },
}

impl GroupMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, GroupMembership::Yes { .. })
    }
}

/// Phase handling for membership queries.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum MembershipMode {
    Phaseless,
    Signed,
}

/// A generator list with a prepared reduced echelon basis for fast
/// membership and canonical coset representatives.
#[derive(Clone, Debug)]
pub struct GroupBasis {
    n: usize,
    generators: Vec<PauliOperator>,
    echelon: Echelon,
}

impl GroupBasis {
    pub fn new(n: usize, generators: Vec<PauliOperator>) -> Self {
        let mut echelon = Echelon::with_tracking(2 * n, generators.len());
        for g in &generators {
            let _ = echelon.insert(g.symplectic_row());
        }
        GroupBasis {
            n,
            generators,
            echelon,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn contains_phaseless(&self, p: &PauliOperator) -> bool {
        self.echelon.contains(&p.symplectic_row())
    }

    /// Canonical representative of p's coset modulo the group.
    pub fn coset_representative(&self, p: &PauliOperator) -> Bits {
        self.echelon.reduce(&p.symplectic_row())
    }

    /// Generator indices whose product is phaseless-equal to `p`.
    pub fn witness(&self, p: &PauliOperator) -> Option<Vec<usize>> {
        self.echelon
            .combination_for(&p.symplectic_row())
            .map(|combo| combo.iter_ones().collect())
    }

    /// The exact product of the generators listed in `witness`.
    pub fn product_of(&self, witness: &[usize]) -> PauliOperator {
        let mut acc = PauliOperator::identity(self.n);
        for &i in witness {
            acc.multiply_assign(&self.generators[i]);
        }
        acc
    }

    /// The reduced basis as phaseless operators.
    pub fn basis_rows(&self) -> Vec<PauliOperator> {
        (0..self.rank())
            .map(|i| PauliOperator::from_symplectic_row(self.echelon.row(i)))
            .collect()
    }

    pub fn membership(&self, p: &PauliOperator, mode: MembershipMode) -> GroupMembership {
        match self.witness(p) {
            None => GroupMembership::No,
            Some(witness) => match mode {
                MembershipMode::Phaseless => GroupMembership::Yes { witness },
                MembershipMode::Signed => {
                    if self.product_of(&witness).phase() == p.phase() {
                        GroupMembership::Yes { witness }
                    } else {
                        GroupMembership::No
                    }
                }
            },
        }
    }
}

/// Solve whether `p` is in the group generated by `generators`.
pub fn in_group(
    n: usize,
    generators: &[PauliOperator],
    p: &PauliOperator,
    mode: MembershipMode,
) -> GroupMembership {
    GroupBasis::new(n, generators.to_vec()).membership(p, mode)
}

/// True iff `p` commutes with every generator.
pub fn in_normalizer(generators: &[PauliOperator], p: &PauliOperator) -> bool {
    generators.iter().all(|g| g.commutes(p))
}

/// A stabilizer group: pairwise-commuting signed generators.
///
/// The generator list is kept as given (it may contain dependent elements,
/// like the 2L² checks of a torus); `rank` counts the independent ones.
#[derive(Clone, Debug, Serialize)]
pub struct StabilizerGroup {
    n: usize,
    generators: Vec<PauliOperator>,
    rank: usize,
}

impl StabilizerGroup {
    pub fn new(n: usize, generators: Vec<PauliOperator>) -> Result<Self, CodeError> {
        for (i, a) in generators.iter().enumerate() {
            for (j, b) in generators.iter().enumerate().skip(i + 1) {
                if !a.commutes(b) {
                    return Err(CodeError::NonAbelianStabilizer(i, j));
                }
            }
        }
        let (_, rank) = reduce(n, &generators);
        Ok(StabilizerGroup {
            n,
            generators,
            rank,
        })
    }

    pub fn empty(n: usize) -> Self {
        StabilizerGroup {
            n,
            generators: Vec::new(),
            rank: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Logical qubit count k = n − rank.
    pub fn k(&self) -> usize {
        self.n - self.rank
    }

    /// The same group with an independent generator list.
    pub fn reduced(&self) -> StabilizerGroup {
        let (basis, rank) = reduce(self.n, &self.generators);
        StabilizerGroup {
            n: self.n,
            generators: basis,
            rank,
        }
    }
}

/// Which masked distance to compute.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceKind {
    Full,
    TemporarilyMasked,
    Unmasked,
}

/// Search strategy for the distance.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum DistanceMethod {
    Exhaustive,
    /// Randomized support sampling; the result is an upper bound only.
    RandomInformationSet {
        trials: u64,
        seed: u64,
    },
}

/// Outcome of a weight-bounded distance search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistanceBound {
    Exact { weight: usize, witness: String },
    AtLeast { weight: usize },
    UpperBound { weight: usize, witness: String },
}

impl DistanceBound {
    pub fn exact_weight(&self) -> Option<usize> {
        match self {
            DistanceBound::Exact { weight, .. } => Some(*weight),
            _ => None,
        }
    }
}

/// A subsystem stabilizer code with masked subgroup structure.
///
/// `gauge` generates G, `stabilizer` the relevant part of the center S,
/// `temporarily_masked` generates T ⊆ S and `unmasked` U ⊆ T. Construction
/// validates the containment chain and commutation, rejecting invalid input.
#[derive(Clone, Debug)]
pub struct MaskedSubsystemCode {
    n: usize,
    gauge: Vec<PauliOperator>,
    stabilizer: Vec<PauliOperator>,
    temporarily_masked: Vec<PauliOperator>,
    unmasked: Vec<PauliOperator>,
    gauge_basis: GroupBasis,
    pub distance_full: Option<DistanceBound>,
    pub distance_temporarily_masked: Option<DistanceBound>,
    pub distance_unmasked: Option<DistanceBound>,
}

impl MaskedSubsystemCode {
    pub fn new(
        n: usize,
        gauge: Vec<PauliOperator>,
        stabilizer: Vec<PauliOperator>,
        temporarily_masked: Vec<PauliOperator>,
        unmasked: Vec<PauliOperator>,
    ) -> Result<Self, CodeError> {
        let gauge = if gauge.is_empty() {
            stabilizer.clone()
        } else {
            gauge
        };
        for (i, a) in stabilizer.iter().enumerate() {
            for (j, b) in stabilizer.iter().enumerate().skip(i + 1) {
                if !a.commutes(b) {
                    return Err(CodeError::NonAbelianStabilizer(i, j));
                }
            }
        }
        for (gi, g) in gauge.iter().enumerate() {
            for (si, s) in stabilizer.iter().enumerate() {
                if !g.commutes(s) {
                    return Err(CodeError::GaugeOutsideNormalizer {
                        gauge: gi,
                        stab: si,
                    });
                }
            }
        }
        let gauge_basis = GroupBasis::new(n, gauge.clone());
        for (si, s) in stabilizer.iter().enumerate() {
            if !gauge_basis.contains_phaseless(s) {
                return Err(CodeError::StabilizerOutsideGauge(si));
            }
        }
        let stab_basis = GroupBasis::new(n, stabilizer.clone());
        for (ti, t) in temporarily_masked.iter().enumerate() {
            if !stab_basis.contains_phaseless(t) {
                return Err(CodeError::MaskOutsideStabilizer(ti));
            }
        }
        let tmask_basis = GroupBasis::new(n, temporarily_masked.clone());
        for (ui, u) in unmasked.iter().enumerate() {
            if !tmask_basis.contains_phaseless(u) {
                return Err(CodeError::UnmaskedOutsideMask(ui));
            }
        }
        Ok(MaskedSubsystemCode {
            n,
            gauge,
            stabilizer,
            temporarily_masked,
            unmasked,
            gauge_basis,
            distance_full: None,
            distance_temporarily_masked: None,
            distance_unmasked: None,
        })
    }

    /// A plain stabilizer code viewed as a fully-unmasked subsystem code
    /// with G = S.
    pub fn from_stabilizer(group: &StabilizerGroup) -> Self {
        let gens = group.generators().to_vec();
        MaskedSubsystemCode::new(group.n(), gens.clone(), gens.clone(), gens.clone(), gens)
            .expect("a stabilizer group is a valid masked code")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gauge_generators(&self) -> &[PauliOperator] {
        &self.gauge
    }

    pub fn stabilizer_generators(&self) -> &[PauliOperator] {
        &self.stabilizer
    }

    pub fn temporarily_masked_generators(&self) -> &[PauliOperator] {
        &self.temporarily_masked
    }

    pub fn unmasked_generators(&self) -> &[PauliOperator] {
        &self.unmasked
    }

    pub fn gauge_basis(&self) -> &GroupBasis {
        &self.gauge_basis
    }

    pub fn gauge_rank(&self) -> usize {
        self.gauge_basis.rank()
    }

    /// Generators constraining the candidate space for a distance kind.
    fn constraint_list(&self, kind: DistanceKind) -> &[PauliOperator] {
        match kind {
            DistanceKind::Full => &self.stabilizer,
            DistanceKind::TemporarilyMasked => &self.temporarily_masked,
            DistanceKind::Unmasked => &self.unmasked,
        }
    }

    /// Minimum weight of an element of N(list) \ G, searched by increasing
    /// weight up to `w_max`.
    pub fn distance(
        &self,
        kind: DistanceKind,
        w_max: usize,
        method: DistanceMethod,
    ) -> DistanceBound {
        assert!(w_max >= 1, "w_max must be at least 1");
        let constraints = self.constraint_list(kind);
        match method {
            DistanceMethod::Exhaustive => self.distance_exhaustive(constraints, w_max),
            DistanceMethod::RandomInformationSet { trials, seed } => {
                self.distance_random(constraints, w_max, trials, seed)
            }
        }
    }

    /// Compute and cache the distance for a kind.
    pub fn compute_distance(
        &mut self,
        kind: DistanceKind,
        w_max: usize,
        method: DistanceMethod,
    ) -> DistanceBound {
        let bound = self.distance(kind, w_max, method);
        match kind {
            DistanceKind::Full => self.distance_full = Some(bound.clone()),
            DistanceKind::TemporarilyMasked => {
                self.distance_temporarily_masked = Some(bound.clone())
            }
            DistanceKind::Unmasked => self.distance_unmasked = Some(bound.clone()),
        }
        bound
    }

    pub fn cached_distance(&self, kind: DistanceKind) -> Option<&DistanceBound> {
        match kind {
            DistanceKind::Full => self.distance_full.as_ref(),
            DistanceKind::TemporarilyMasked => self.distance_temporarily_masked.as_ref(),
            DistanceKind::Unmasked => self.distance_unmasked.as_ref(),
        }
    }

    fn distance_exhaustive(&self, constraints: &[PauliOperator], w_max: usize) -> DistanceBound {
        for weight in 1..=w_max {
            let hit = (0..self.n)
                .into_par_iter()
                .filter_map(|first| self.scan_weight(constraints, weight, first))
                .min_by(candidate_order);
            if let Some((positions, letters)) = hit {
                let witness = candidate_operator(self.n, &positions, &letters);
                return DistanceBound::Exact {
                    weight,
                    witness: witness.to_string(),
                };
            }
        }
        DistanceBound::AtLeast { weight: w_max + 1 }
    }

    /// First logical candidate (enumeration order) of the given weight whose
    /// lowest support position is `first`.
    fn scan_weight(
        &self,
        constraints: &[PauliOperator],
        weight: usize,
        first: usize,
    ) -> Option<(Vec<usize>, Vec<SinglePauli>)> {
        let mut positions = vec![0usize; weight];
        positions[0] = first;
        self.scan_positions(constraints, &mut positions, 1)
    }

    fn scan_positions(
        &self,
        constraints: &[PauliOperator],
        positions: &mut Vec<usize>,
        depth: usize,
    ) -> Option<(Vec<usize>, Vec<SinglePauli>)> {
        if depth == positions.len() {
            return self.scan_letters(constraints, positions);
        }
        let lo = positions[depth - 1] + 1;
        for q in lo..self.n {
            positions[depth] = q;
            if let Some(hit) = self.scan_positions(constraints, positions, depth + 1) {
                return Some(hit);
            }
        }
        None
    }

    fn scan_letters(
        &self,
        constraints: &[PauliOperator],
        positions: &[usize],
    ) -> Option<(Vec<usize>, Vec<SinglePauli>)> {
        const LETTERS: [SinglePauli; 3] = [SinglePauli::X, SinglePauli::Y, SinglePauli::Z];
        let w = positions.len();
        let mut letters = vec![SinglePauli::X; w];
        let combos = 3usize.pow(w as u32);
        for combo in 0..combos {
            let mut rem = combo;
            // Leftmost position is the most significant digit.
            for j in (0..w).rev() {
                letters[j] = LETTERS[rem % 3];
                rem /= 3;
            }
            if self.candidate_is_logical(constraints, positions, &letters) {
                return Some((positions.to_vec(), letters.clone()));
            }
        }
        None
    }

    fn candidate_is_logical(
        &self,
        constraints: &[PauliOperator],
        positions: &[usize],
        letters: &[SinglePauli],
    ) -> bool {
        for g in constraints {
            let mut parity = false;
            for (&q, &l) in positions.iter().zip(letters) {
                let (cx, cz) = l.bits();
                parity ^= (cx & g.z_bit(q)) ^ (cz & g.x_bit(q));
            }
            if parity {
                return false;
            }
        }
        let candidate = candidate_operator(self.n, positions, letters);
        !self.gauge_basis.contains_phaseless(&candidate)
    }

    fn distance_random(
        &self,
        constraints: &[PauliOperator],
        w_max: usize,
        trials: u64,
        seed: u64,
    ) -> DistanceBound {
        use rand::seq::SliceRandom;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        let mut best: Option<(usize, PauliOperator)> = None;
        const LETTERS: [SinglePauli; 3] = [SinglePauli::X, SinglePauli::Y, SinglePauli::Z];
        for _ in 0..trials {
            let w = rng.gen_range(1..=w_max);
            let mut qubits: Vec<usize> = (0..self.n).collect();
            qubits.shuffle(&mut rng);
            let positions = &mut qubits[..w];
            positions.sort_unstable();
            let letters: Vec<SinglePauli> = (0..w).map(|_| LETTERS[rng.gen_range(0..3)]).collect();
            if self.candidate_is_logical(constraints, positions, &letters) {
                let cand = candidate_operator(self.n, positions, &letters);
                let weight = cand.weight();
                if best.as_ref().is_none_or(|(bw, _)| weight < *bw) {
                    best = Some((weight, cand));
                }
            }
        }
        match best {
            Some((weight, witness)) => DistanceBound::UpperBound {
                weight,
                witness: witness.to_string(),
            },
            None => DistanceBound::AtLeast { weight: w_max + 1 },
        }
    }
}

/// Logical qubit count of a subsystem code: k = n − r_G + g, where r_G is
/// the gauge rank and 2g the rank of the anticommutation (Gram) matrix of
/// a gauge basis.
pub fn subsystem_k(code: &MaskedSubsystemCode) -> usize {
    let basis = code.gauge_basis().basis_rows();
    let r = basis.len();
    let gram: Vec<crate::bits::Bits> = basis
        .iter()
        .map(|a| {
            let mut row = crate::bits::Bits::zeros(r);
            for (j, b) in basis.iter().enumerate() {
                if !a.commutes(b) {
                    row.set(j, true);
                }
            }
            row
        })
        .collect();
    let gram_rank = crate::gf2::rank(r, &gram);
    debug_assert_eq!(gram_rank % 2, 0);
    code.n() + gram_rank / 2 - r
}

fn candidate_operator(n: usize, positions: &[usize], letters: &[SinglePauli]) -> PauliOperator {
    let mut p = PauliOperator::identity(n);
    for (&q, &l) in positions.iter().zip(letters) {
        p.set_letter(q, l);
    }
    p
}

fn candidate_order(
    a: &(Vec<usize>, Vec<SinglePauli>),
    b: &(Vec<usize>, Vec<SinglePauli>),
) -> std::cmp::Ordering {
    a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1))
}

/// The L×L toric surface code: qubits on edges, X-type face checks and
/// Z-type vertex checks, [[2L², 2, L]].
pub fn surface_code(lattice: usize) -> Result<StabilizerGroup, CodeError> {
    if lattice < 2 {
        return Err(CodeError::LatticeTooSmall(lattice));
    }
    let l = lattice;
    let n = 2 * l * l;
    let h = |i: usize, j: usize| (j % l) * l + (i % l);
    let v = |i: usize, j: usize| l * l + (j % l) * l + (i % l);
    let mut generators = Vec::with_capacity(2 * l * l);
    for j in 0..l {
        for i in 0..l {
            let mut face = PauliOperator::identity(n);
            for q in [h(i, j), h(i, j + 1), v(i, j), v(i + 1, j)] {
                face.set_letter(q, SinglePauli::X);
            }
            generators.push(face);
        }
    }
    for j in 0..l {
        for i in 0..l {
            let mut star = PauliOperator::identity(n);
            for q in [h(i, j), h(i + l - 1, j), v(i, j), v(i, j + l - 1)] {
                star.set_letter(q, SinglePauli::Z);
            }
            generators.push(star);
        }
    }
    StabilizerGroup::new(n, generators)
}

/// Serialized form of a masked subsystem code (JSON flavor).
#[derive(Serialize, Deserialize)]
struct CodeFile {
    qubits: usize,
    #[serde(default)]
    gauge: Vec<String>,
    #[serde(default)]
    stab: Vec<String>,
    #[serde(default)]
    tmask: Option<Vec<String>>,
    #[serde(default)]
    umask: Option<Vec<String>>,
}

impl MaskedSubsystemCode {
    /// Parse the code text format: `qubits N` then `gauge|stab|tmask|umask
    /// <pauli>` lines. A missing tmask section defaults to T = S, and a
    /// missing umask section to U = T.
    pub fn parse_text(text: &str) -> Result<Self, FormatError> {
        let mut qubits: Option<usize> = None;
        let mut gauge = Vec::new();
        let mut stab = Vec::new();
        let mut tmask: Option<Vec<PauliOperator>> = None;
        let mut umask: Option<Vec<PauliOperator>> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut parts = content.split_whitespace();
            let key = parts.next().unwrap();
            let rest: Vec<&str> = parts.collect();
            match key {
                "qubits" => {
                    if qubits.is_some() {
                        return Err(FormatError::at(line, "duplicate qubits header"));
                    }
                    let n = rest
                        .first()
                        .and_then(|s| s.parse::<usize>().ok())
                        .ok_or_else(|| FormatError::at(line, "qubits needs a count"))?;
                    qubits = Some(n);
                }
                "gauge" | "stab" | "tmask" | "umask" => {
                    let n = qubits
                        .ok_or_else(|| FormatError::at(line, "qubits header must come first"))?;
                    let text = rest
                        .first()
                        .ok_or_else(|| FormatError::at(line, format!("{key} needs an operator")))?;
                    let p = PauliOperator::parse(text, n)
                        .map_err(|e| FormatError::at(line, e.to_string()))?;
                    match key {
                        "gauge" => gauge.push(p),
                        "stab" => stab.push(p),
                        "tmask" => tmask.get_or_insert_with(Vec::new).push(p),
                        _ => umask.get_or_insert_with(Vec::new).push(p),
                    }
                }
                other => {
                    return Err(FormatError::at(line, format!("unknown keyword {other:?}")));
                }
            }
        }
        let n = qubits.ok_or_else(|| FormatError::Structure("missing qubits header".into()))?;
        let tmask = tmask.unwrap_or_else(|| stab.clone());
        let umask = umask.unwrap_or_else(|| tmask.clone());
        MaskedSubsystemCode::new(n, gauge, stab, tmask, umask)
            .map_err(|e| FormatError::Structure(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("qubits {}\n", self.n);
        for g in &self.gauge {
            out.push_str(&format!("gauge {g}\n"));
        }
        for s in &self.stabilizer {
            out.push_str(&format!("stab {s}\n"));
        }
        for t in &self.temporarily_masked {
            out.push_str(&format!("tmask {t}\n"));
        }
        for u in &self.unmasked {
            out.push_str(&format!("umask {u}\n"));
        }
        out
    }

    pub fn parse_json(text: &str) -> Result<Self, FormatError> {
        let file: CodeFile = serde_json::from_str(text)
            .map_err(|e| FormatError::Structure(format!("bad JSON: {e}")))?;
        let parse_list = |items: &[String]| -> Result<Vec<PauliOperator>, FormatError> {
            items
                .iter()
                .map(|s| {
                    PauliOperator::parse(s, file.qubits)
                        .map_err(|e| FormatError::Structure(e.to_string()))
                })
                .collect()
        };
        let gauge = parse_list(&file.gauge)?;
        let stab = parse_list(&file.stab)?;
        let tmask = match &file.tmask {
            Some(items) => parse_list(items)?,
            None => stab.clone(),
        };
        let umask = match &file.umask {
            Some(items) => parse_list(items)?,
            None => tmask.clone(),
        };
        MaskedSubsystemCode::new(file.qubits, gauge, stab, tmask, umask)
            .map_err(|e| FormatError::Structure(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let file = CodeFile {
            qubits: self.n,
            gauge: self.gauge.iter().map(|p| p.to_string()).collect(),
            stab: self.stabilizer.iter().map(|p| p.to_string()).collect(),
            tmask: Some(
                self.temporarily_masked
                    .iter()
                    .map(|p| p.to_string())
                    .collect(),
            ),
            umask: Some(self.unmasked.iter().map(|p| p.to_string()).collect()),
        };
        serde_json::to_string_pretty(&file).expect("code file serialization")
    }
}
