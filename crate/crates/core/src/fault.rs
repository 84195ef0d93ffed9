//! Fault paths and their analysis through the spacetime code: syndromes,
//! pair verdicts, exhaustive fault-set verification, decoding, residual
//! distributions, failure probabilities, and gadget-chain closure.

use crate::bits::Bits;
use crate::circuit::Circuit;
use crate::clifford::CliffordGate;
use crate::error::AnalysisError;
use crate::pauli::{PauliOperator, SinglePauli};
use crate::spacetime::{build_spacetime_code, SpacetimeCode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// Default cap on enumerated fault paths.
pub const DEFAULT_BUDGET: u128 = 5_000_000;

/// A fault location in the circuit. Errors act after gates (idle slots
/// carry implicit identity gates), before measurements, or on the input
/// qubits at time 0 (errors carried over from earlier gadgets).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FaultLocation {
    Input { qubit: usize },
    AfterGate { tick: usize, gate: CliffordGate },
    BeforeMeasurement { qubit: usize },
}

impl FaultLocation {
    /// Qubits the fault can act on, in canonical order.
    pub fn support(&self) -> Vec<usize> {
        match self {
            FaultLocation::Input { qubit } | FaultLocation::BeforeMeasurement { qubit } => {
                vec![*qubit]
            }
            FaultLocation::AfterGate { gate, .. } => gate.operands(),
        }
    }

    /// The time slice where the fault's error appears.
    pub fn slice(&self, t_len: usize) -> usize {
        match self {
            FaultLocation::Input { .. } => 0,
            FaultLocation::AfterGate { tick, .. } => tick + 1,
            FaultLocation::BeforeMeasurement { .. } => t_len,
        }
    }

    fn order_key(&self) -> (u8, usize, usize, usize) {
        match self {
            FaultLocation::Input { qubit } => (0, *qubit, 0, 0),
            FaultLocation::AfterGate { tick, gate } => {
                (1, *tick, gate.a, gate.b.map_or(usize::MAX, |b| b))
            }
            FaultLocation::BeforeMeasurement { qubit } => (2, *qubit, 0, 0),
        }
    }
}

impl PartialOrd for FaultLocation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FaultLocation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl std::fmt::Display for FaultLocation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FaultLocation::Input { qubit } => write!(f, "input {qubit}"),
            FaultLocation::AfterGate { tick, gate } => write!(f, "after {gate} @t{tick}"),
            FaultLocation::BeforeMeasurement { qubit } => write!(f, "before meas {qubit}"),
        }
    }
}

/// A set of located Pauli faults; at most one fault per location (merged by
/// multiplication).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FaultPath {
    faults: Vec<(FaultLocation, PauliOperator)>,
}

impl FaultPath {
    pub fn empty() -> Self {
        FaultPath { faults: Vec::new() }
    }

    pub fn faults(&self) -> &[(FaultLocation, PauliOperator)] {
        &self.faults
    }

    pub fn fault_count(&self) -> usize {
        self.faults.len()
    }

    /// Add a fault, merging with an existing fault at the same location;
    /// identity merges drop the location.
    pub fn add_fault(&mut self, location: FaultLocation, error: PauliOperator) {
        assert_eq!(location.support().len(), error.n(), "fault width mismatch");
        match self.faults.iter().position(|(l, _)| *l == location) {
            Some(i) => {
                let merged = self.faults[i].1.multiply(&error);
                if merged.is_phaseless_identity() {
                    self.faults.remove(i);
                } else {
                    self.faults[i].1 = merged;
                }
            }
            None => {
                let pos = self
                    .faults
                    .binary_search_by(|(l, _)| l.cmp(&location))
                    .unwrap_or_else(|e| e);
                self.faults.insert(pos, (location, error));
            }
        }
    }

    /// The spacetime Pauli error of this fault path.
    pub fn spacetime_error(&self, st: &SpacetimeCode) -> PauliOperator {
        let mut out = PauliOperator::identity(st.n_spacetime());
        let t_len = st.t_len();
        for (loc, err) in &self.faults {
            let slice = loc.slice(t_len);
            let positions: Vec<usize> = loc.support().iter().map(|&q| st.index(q, slice)).collect();
            out.multiply_assign(&err.embed(st.n_spacetime(), &positions));
        }
        out
    }
}

impl std::fmt::Display for FaultPath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.faults.is_empty() {
            return write!(f, "(no faults)");
        }
        for (i, (loc, err)) in self.faults.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let letters: String = (0..err.n()).map(|q| err.letter(q).as_char()).collect();
            write!(f, "{loc}: {letters}")?;
        }
        Ok(())
    }
}

/// All fault locations of the circuit, in canonical order. Fault-free
/// padding idles are excluded; implicit identity gates elsewhere are not.
pub fn enumerate_locations(st: &SpacetimeCode) -> Vec<FaultLocation> {
    let c = st.circuit();
    let mut locations = Vec::new();
    for q in 0..c.input_count() {
        locations.push(FaultLocation::Input { qubit: q });
    }
    for t in 0..c.t_len() {
        let mut covered = vec![false; c.n_total()];
        for gate in &c.layers()[t] {
            for q in gate.operands() {
                covered[q] = true;
            }
            locations.push(FaultLocation::AfterGate {
                tick: t,
                gate: *gate,
            });
        }
        #[allow(clippy::needless_range_loop)]
        for q in 0..c.n_total() {
            if !covered[q] && !c.is_fault_free(q, t) {
                locations.push(FaultLocation::AfterGate {
                    tick: t,
                    gate: CliffordGate::one(crate::clifford::GateKind::I, q),
                });
            }
        }
    }
    for q in c.measured_qubits() {
        locations.push(FaultLocation::BeforeMeasurement { qubit: q });
    }
    locations.sort();
    locations
}

/// The nontrivial error alphabet of a location: 3 single-qubit Paulis or
/// the 15 nontrivial two-qubit Paulis, in lexicographic letter order.
pub fn location_alphabet(location: &FaultLocation) -> Vec<PauliOperator> {
    const LETTERS: [SinglePauli; 4] = [
        SinglePauli::I,
        SinglePauli::X,
        SinglePauli::Y,
        SinglePauli::Z,
    ];
    match location.support().len() {
        1 => LETTERS[1..]
            .iter()
            .map(|&l| PauliOperator::from_letters(&[l]))
            .collect(),
        _ => {
            let mut out = Vec::with_capacity(15);
            for &a in &LETTERS {
                for &b in &LETTERS {
                    if a == SinglePauli::I && b == SinglePauli::I {
                        continue;
                    }
                    out.push(PauliOperator::from_letters(&[a, b]));
                }
            }
            out
        }
    }
}

/// The unmasked error syndrome: one parity bit per always-unmasked
/// stabilizer generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SyndromeReport {
    bits: Vec<bool>,
}

impl SyndromeReport {
    pub fn new(bits: Vec<bool>) -> Self {
        SyndromeReport { bits }
    }

    pub fn zero(len: usize) -> Self {
        SyndromeReport {
            bits: vec![false; len],
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&b| !b)
    }

    pub fn xor(&self, other: &SyndromeReport) -> SyndromeReport {
        SyndromeReport {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }

    pub fn parse(text: &str, expected: usize) -> Result<Self, AnalysisError> {
        let bits: Vec<bool> = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| c == '1')
            .collect();
        if bits.len() != expected {
            return Err(AnalysisError::SyndromeLength {
                expected,
                got: bits.len(),
            });
        }
        Ok(SyndromeReport { bits })
    }
}

impl std::fmt::Display for SyndromeReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.bits.is_empty() {
            return write!(f, "(empty)");
        }
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Anticommutation bits of a spacetime error against a generator list.
fn syndrome_against(generators: &[PauliOperator], error: &PauliOperator) -> Vec<bool> {
    generators.iter().map(|g| !g.commutes(error)).collect()
}

/// Unmasked syndrome of a spacetime error.
pub fn syndrome_of_error(st: &SpacetimeCode, error: &PauliOperator) -> SyndromeReport {
    SyndromeReport::new(syndrome_against(st.base().unmasked_generators(), error))
}

/// Unmasked syndrome of a fault path.
pub fn syndrome(st: &SpacetimeCode, path: &FaultPath) -> SyndromeReport {
    syndrome_of_error(st, &path.spacetime_error(st))
}

/// Which end of the circuit to project a spacetime error onto.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ProjectionEnd {
    In,
    Out,
}

/// Propagate every slice component of a spacetime error to one end of the
/// circuit and multiply; the result is gauge-equivalent to the input.
pub fn project(st: &SpacetimeCode, error: &PauliOperator, end: ProjectionEnd) -> PauliOperator {
    let c = st.circuit();
    let t_len = st.t_len();
    let mut out = PauliOperator::identity(c.n_total());
    for s in 0..=t_len {
        let part = st.slice_of(error, s);
        if part.is_phaseless_identity() {
            continue;
        }
        let target = match end {
            ProjectionEnd::In => 0,
            ProjectionEnd::Out => t_len,
        };
        out.multiply_assign(&c.propagate(&part, s, target));
    }
    out
}

/// Embed a circuit-width operator at the slice matching a projection end.
pub fn embed_projection(
    st: &SpacetimeCode,
    p: &PauliOperator,
    end: ProjectionEnd,
) -> PauliOperator {
    let tick = match end {
        ProjectionEnd::In => 0,
        ProjectionEnd::Out => st.t_len(),
    };
    st.embed_at_slice(p, tick)
}

/// Correctability verdict for a pair of spacetime errors.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum Verdict {
    /// Distinguishable by the unmasked syndrome, or gauge-equivalent.
    CorrectedNow,
    /// Same unmasked syndrome but distinguishable by a future gadget.
    DeferredDistinct,
    /// Same unmasked syndrome, same future syndrome, inequivalent: the
    /// product is an undetectable logical operator.
    LogicalConfusion { witness: String },
}

/// Classify whether two spacetime errors can be confused.
pub fn pair_verdict(st: &SpacetimeCode, k: &PauliOperator, l: &PauliOperator) -> Verdict {
    let kl = k.multiply(l);
    let base = st.base();
    if syndrome_against(base.unmasked_generators(), &kl)
        .iter()
        .any(|&b| b)
    {
        return Verdict::CorrectedNow;
    }
    if base.gauge_basis().contains_phaseless(&kl) {
        return Verdict::CorrectedNow;
    }
    if syndrome_against(base.temporarily_masked_generators(), &kl)
        .iter()
        .any(|&b| b)
    {
        return Verdict::DeferredDistinct;
    }
    Verdict::LogicalConfusion {
        witness: kl.to_string(),
    }
}

/// The fault model: independent faults per location.
#[derive(Copy, Clone, Debug, Serialize)]
pub struct FaultModel {
    /// Total nontrivial-fault probability per gate/measurement location.
    pub gate_p: f64,
    /// Probability for input (carried-over) locations; defaults to gate_p.
    pub input_p: Option<f64>,
    /// Interpretation of the probabilities.
    pub convention: NoiseConvention,
}

/// How the location probability is normalized.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseConvention {
    /// `p` is the total probability of a nontrivial fault.
    Uniform,
    /// `p` is the full randomization rate; an identity draw is included, so
    /// the nontrivial probability is 3p/4 (one qubit) or 15p/16 (two).
    Depolarizing,
}

impl FaultModel {
    pub fn uniform(p: f64) -> Self {
        FaultModel {
            gate_p: p,
            input_p: None,
            convention: NoiseConvention::Uniform,
        }
    }

    pub fn validate(&self) -> Result<(), AnalysisError> {
        for p in [self.gate_p, self.input_p.unwrap_or(self.gate_p)] {
            if !(0.0..=1.0).contains(&p) || p.is_nan() {
                return Err(AnalysisError::BadProbability(p));
            }
        }
        Ok(())
    }

    /// Probability that a location faults at all.
    pub fn location_probability(&self, location: &FaultLocation) -> f64 {
        let base = match location {
            FaultLocation::Input { .. } => self.input_p.unwrap_or(self.gate_p),
            _ => self.gate_p,
        };
        match self.convention {
            NoiseConvention::Uniform => base,
            NoiseConvention::Depolarizing => match location.support().len() {
                1 => base * 3.0 / 4.0,
                _ => base * 15.0 / 16.0,
            },
        }
    }
}

/// Enumerate every fault path with at most `max_faults` faulty locations,
/// in lexicographic order (by fault count, then location tuple, then
/// alphabet order), invoking `visit` on each. The empty path comes first.
pub fn for_each_fault_path<F: FnMut(&FaultPath)>(
    st: &SpacetimeCode,
    max_faults: usize,
    budget: u128,
    mut visit: F,
) -> Result<u128, AnalysisError> {
    let locations = enumerate_locations(st);
    let alphabets: Vec<Vec<PauliOperator>> = locations.iter().map(location_alphabet).collect();
    let total = count_fault_paths(&alphabets, max_faults);
    if total > budget {
        return Err(AnalysisError::BudgetExceeded {
            needed: total,
            budget,
        });
    }
    let mut path = FaultPath::empty();
    visit(&path);
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    enumerate_rec(
        &locations,
        &alphabets,
        max_faults,
        0,
        &mut chosen,
        &mut path,
        &mut visit,
    );
    Ok(total)
}

fn count_fault_paths(alphabets: &[Vec<PauliOperator>], max_faults: usize) -> u128 {
    // Sum over k-subsets of locations of the product of alphabet sizes,
    // via dynamic programming over locations.
    let mut acc: Vec<u128> = vec![0; max_faults + 1];
    acc[0] = 1;
    for alphabet in alphabets {
        let a = alphabet.len() as u128;
        for k in (1..=max_faults).rev() {
            acc[k] = acc[k].saturating_add(acc[k - 1].saturating_mul(a));
        }
    }
    acc.iter().sum()
}

fn enumerate_rec<F: FnMut(&FaultPath)>(
    locations: &[FaultLocation],
    alphabets: &[Vec<PauliOperator>],
    max_faults: usize,
    from: usize,
    chosen: &mut Vec<(usize, usize)>,
    path: &mut FaultPath,
    visit: &mut F,
) {
    if chosen.len() == max_faults {
        return;
    }
    for i in from..locations.len() {
        for (j, err) in alphabets[i].iter().enumerate() {
            chosen.push((i, j));
            path.add_fault(locations[i].clone(), err.clone());
            visit(path);
            enumerate_rec(locations, alphabets, max_faults, i + 1, chosen, path, visit);
            path.add_fault(locations[i].clone(), err.clone());
            chosen.pop();
        }
    }
}

/// Per-path analysis record used by the scans.
#[derive(Clone, Debug)]
struct PathProfile {
    path: FaultPath,
    syndrome_u: Vec<bool>,
    syndrome_t: Vec<bool>,
    gauge_rep: Bits,
}

fn profile_paths(
    st: &SpacetimeCode,
    max_faults: usize,
    budget: u128,
) -> Result<Vec<PathProfile>, AnalysisError> {
    let mut paths: Vec<FaultPath> = Vec::new();
    for_each_fault_path(st, max_faults, budget, |p| paths.push(p.clone()))?;
    let profiles: Vec<PathProfile> = paths
        .into_par_iter()
        .map(|path| profile_one(st, path))
        .collect();
    Ok(profiles)
}

fn profile_one(st: &SpacetimeCode, path: FaultPath) -> PathProfile {
    let error = path.spacetime_error(st);
    let base = st.base();
    PathProfile {
        syndrome_u: syndrome_against(base.unmasked_generators(), &error),
        syndrome_t: syndrome_against(base.temporarily_masked_generators(), &error),
        gauge_rep: base.gauge_basis().coset_representative(&error),
        path,
    }
}

/// A confusable pair found by the scan.
#[derive(Clone, Debug, Serialize)]
pub struct ConfusionWitness {
    pub path_a: String,
    pub path_b: String,
    pub syndrome: String,
}

/// Summary of the pairwise verdict matrix over a fault set.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub max_faults: usize,
    pub fault_paths: u128,
    pub corrected_pairs: u128,
    pub deferred_pairs: u128,
    pub confusion_pairs: u128,
    pub first_confusion: Option<ConfusionWitness>,
    /// Consistency statement against the certified unmasked distance, when
    /// one is cached.
    pub distance_cross_check: Option<String>,
}

/// Exhaustively scan all fault paths with up to `max_faults` faults and
/// classify every pair.
pub fn verify_fault_set(
    st: &SpacetimeCode,
    max_faults: usize,
    budget: u128,
) -> Result<VerifyReport, AnalysisError> {
    let profiles = profile_paths(st, max_faults, budget)?;
    let m = profiles.len() as u128;
    let total_pairs = m * (m - 1) / 2;

    // Bucket by unmasked syndrome, then by full masked syndrome, then by
    // gauge coset: pairs across syndrome buckets are corrected, pairs in
    // one gauge coset are corrected, pairs differing only beyond the
    // temporarily-masked syndrome are deferred, and same-syndrome
    // different-coset pairs are confusions.
    let mut by_u: BTreeMap<Vec<bool>, u128> = BTreeMap::new();
    let mut by_ut: BTreeMap<(Vec<bool>, Vec<bool>), u128> = BTreeMap::new();
    let mut by_ut_rep: BTreeMap<(Vec<bool>, Vec<bool>, Bits), u128> = BTreeMap::new();
    let mut by_u_rep: BTreeMap<(Vec<bool>, Bits), u128> = BTreeMap::new();
    let mut first_confusion: Option<(usize, usize)> = None;
    type RepsSeen = BTreeMap<(Vec<bool>, Vec<bool>), Vec<(Bits, usize)>>;
    let mut seen_reps: RepsSeen = BTreeMap::new();

    for (idx, pr) in profiles.iter().enumerate() {
        *by_u.entry(pr.syndrome_u.clone()).or_default() += 1;
        *by_ut
            .entry((pr.syndrome_u.clone(), pr.syndrome_t.clone()))
            .or_default() += 1;
        *by_ut_rep
            .entry((
                pr.syndrome_u.clone(),
                pr.syndrome_t.clone(),
                pr.gauge_rep.clone(),
            ))
            .or_default() += 1;
        *by_u_rep
            .entry((pr.syndrome_u.clone(), pr.gauge_rep.clone()))
            .or_default() += 1;
        if first_confusion.is_none() {
            let key = (pr.syndrome_u.clone(), pr.syndrome_t.clone());
            let entry = seen_reps.entry(key).or_default();
            if let Some((_, other)) = entry.iter().find(|(rep, _)| *rep != pr.gauge_rep) {
                first_confusion = Some((*other, idx));
            }
            if !entry.iter().any(|(rep, _)| *rep == pr.gauge_rep) {
                entry.push((pr.gauge_rep.clone(), idx));
            }
        }
    }

    let same_u: u128 = by_u.values().map(|&n| n * (n - 1) / 2).sum();
    let same_ut: u128 = by_ut.values().map(|&n| n * (n - 1) / 2).sum();
    let same_ut_rep: u128 = by_ut_rep.values().map(|&n| n * (n - 1) / 2).sum();
    let cross_u_pairs = total_pairs - same_u;
    let gauge_pairs = same_ut_rep;
    let confusion_pairs = same_ut - same_ut_rep;
    let deferred_pairs = same_u - same_ut;
    let corrected_pairs = cross_u_pairs + gauge_pairs;

    let first_confusion = first_confusion.map(|(i, j)| ConfusionWitness {
        path_a: profiles[i].path.to_string(),
        path_b: profiles[j].path.to_string(),
        syndrome: SyndromeReport::new(profiles[i].syndrome_u.clone()).to_string(),
    });

    let distance_cross_check = st
        .base()
        .cached_distance(crate::code::DistanceKind::Unmasked)
        .and_then(|bound| bound.exact_weight())
        .map(|d_u| {
            let max_pair_weight = 4 * max_faults;
            if max_pair_weight < d_u {
                let consistent = confusion_pairs == 0 && deferred_pairs == 0;
                format!(
                    "d_U = {d_u} certifies fault sets up to floor((d_U-1)/2) = {}; \
                     pair weights <= {max_pair_weight} < d_U: {}",
                    (d_u - 1) / 2,
                    if consistent {
                        "all pairs corrected, consistent"
                    } else {
                        "INCONSISTENT: undetected pair found below the distance"
                    }
                )
            } else {
                format!(
                    "d_U = {d_u} does not cover pair weights up to {max_pair_weight}; \
                     no implication"
                )
            }
        });

    Ok(VerifyReport {
        max_faults,
        fault_paths: m,
        corrected_pairs,
        deferred_pairs,
        confusion_pairs,
        first_confusion,
        distance_cross_check,
    })
}

/// Minimum-fault-count decoding: the first fault path (in enumeration
/// order) whose unmasked syndrome matches.
pub fn decode(
    st: &SpacetimeCode,
    target: &SyndromeReport,
    max_faults: usize,
    budget: u128,
) -> Result<Option<FaultPath>, AnalysisError> {
    if target.len() != st.base().unmasked_generators().len() {
        return Err(AnalysisError::SyndromeLength {
            expected: st.base().unmasked_generators().len(),
            got: target.len(),
        });
    }
    let table = decode_table(st, max_faults, budget)?;
    Ok(table.get(target.bits()).cloned())
}

/// First-hit decode table: syndrome bits → minimum-fault-count path. Paths
/// are enumerated by fault count, so the first hit per syndrome is minimal
/// and lexicographically least.
pub fn decode_table(
    st: &SpacetimeCode,
    max_faults: usize,
    budget: u128,
) -> Result<BTreeMap<Vec<bool>, FaultPath>, AnalysisError> {
    let mut table: BTreeMap<Vec<bool>, FaultPath> = BTreeMap::new();
    for count in 0..=max_faults {
        let mut level: Vec<FaultPath> = Vec::new();
        for_each_fault_path(st, count, budget, |p| {
            if p.fault_count() == count {
                level.push(p.clone());
            }
        })?;
        let syndromes: Vec<Vec<bool>> = level
            .par_iter()
            .map(|p| syndrome(st, p).bits().to_vec())
            .collect();
        for (path, syn) in level.into_iter().zip(syndromes) {
            table.entry(syn).or_insert(path);
        }
    }
    Ok(table)
}

/// One residual class of the conditional output-error distribution.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualClass {
    /// Canonical representative modulo the output stabilizer group.
    pub representative: String,
    pub probability: f64,
}

/// Conditional distribution of residual output errors given an unmasked
/// syndrome, truncated at a fault-count order.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualDistribution {
    pub syndrome: String,
    pub order: usize,
    /// Probability mass of fault paths beyond the truncation order.
    pub truncation_mass: f64,
    /// Total probability of the conditioning syndrome (within the order).
    pub syndrome_probability: f64,
    /// Classes with conditional probabilities; empty when the syndrome has
    /// no support at this order.
    pub classes: Vec<ResidualClass>,
    pub empty_support: bool,
}

/// Compute the conditional residual distribution for one syndrome.
pub fn residual_distribution(
    st: &SpacetimeCode,
    model: &FaultModel,
    order: usize,
    target: &SyndromeReport,
    budget: u128,
) -> Result<ResidualDistribution, AnalysisError> {
    model.validate()?;
    if target.len() != st.base().unmasked_generators().len() {
        return Err(AnalysisError::SyndromeLength {
            expected: st.base().unmasked_generators().len(),
            got: target.len(),
        });
    }
    let locations = enumerate_locations(st);
    let no_fault_prob: f64 = locations
        .iter()
        .map(|l| 1.0 - model.location_probability(l))
        .product();

    let mut paths: Vec<FaultPath> = Vec::new();
    for_each_fault_path(st, order, budget, |p| paths.push(p.clone()))?;

    let prime_basis = crate::code::GroupBasis::new(st.n_total(), st.output().s_hat_prime.clone());
    let records: Vec<(Vec<bool>, Bits, f64)> = paths
        .par_iter()
        .map(|path| {
            let error = path.spacetime_error(st);
            let syn = syndrome_against(st.base().unmasked_generators(), &error);
            let residual = project(st, &error, ProjectionEnd::Out);
            let rep = prime_basis.coset_representative(&residual);
            let prob = path_probability(path, model, no_fault_prob);
            (syn, rep, prob)
        })
        .collect();

    let enumerated_mass: f64 = records.iter().map(|(_, _, p)| p).sum();
    let truncation_mass = (1.0 - enumerated_mass).max(0.0);

    let mut class_mass: BTreeMap<Bits, f64> = BTreeMap::new();
    let mut syndrome_probability = 0.0;
    for (syn, rep, prob) in &records {
        if *prob > 0.0 && syn == target.bits() {
            syndrome_probability += prob;
            *class_mass.entry(rep.clone()).or_default() += prob;
        }
    }
    let empty_support = syndrome_probability == 0.0;
    let mut classes: Vec<ResidualClass> = class_mass
        .into_iter()
        .map(|(rep, mass)| ResidualClass {
            representative: PauliOperator::from_symplectic_row(&rep).to_string(),
            probability: if empty_support {
                0.0
            } else {
                mass / syndrome_probability
            },
        })
        .collect();
    classes.sort_by(|a, b| {
        b.probability
            .partial_cmp(&a.probability)
            .unwrap()
            .then_with(|| a.representative.cmp(&b.representative))
    });
    Ok(ResidualDistribution {
        syndrome: target.to_string(),
        order,
        truncation_mass,
        syndrome_probability,
        classes,
        empty_support,
    })
}

fn path_probability(path: &FaultPath, model: &FaultModel, no_fault_prob: f64) -> f64 {
    let mut prob = no_fault_prob;
    for (loc, _) in path.faults() {
        let p = model.location_probability(loc);
        let a = location_alphabet(loc).len() as f64;
        // Swap the no-fault factor of this location for a specific fault.
        prob *= (p / a) / (1.0 - p);
    }
    prob
}

/// Failure estimate for one observed syndrome.
#[derive(Clone, Debug, Serialize)]
pub struct SyndromeFailure {
    pub probability: f64,
    pub failure: f64,
    pub decoded: String,
}

/// How a failure probability was computed.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum FailureMode {
    Exhaustive { order: usize },
    MonteCarlo { shots: u64, seed: u64 },
}

/// Failure probability per syndrome and marginal.
#[derive(Clone, Debug, Serialize)]
pub struct FailureEstimate {
    #[serde(flatten)]
    pub mode: FailureMode,
    pub per_syndrome: BTreeMap<String, SyndromeFailure>,
    /// Total probability (or sampled fraction) of a logical failure.
    pub marginal: f64,
    /// Binomial standard error of the marginal, for Monte Carlo.
    pub std_error: Option<f64>,
    /// Unenumerated probability mass, for exhaustive truncation.
    pub truncation_mass: Option<f64>,
    /// Monte Carlo shots whose syndrome had no decode-table entry; counted
    /// as failures.
    pub undecodable_shots: Option<u64>,
}

/// Exhaustive failure probability, truncated at `order` faults.
///
/// The decoder commits to the minimum-fault-count path for each syndrome;
/// a fault path fails when its error and the decoded error have the same
/// temporarily-masked syndrome but different gauge cosets.
pub fn failure_probability_exhaustive(
    st: &SpacetimeCode,
    model: &FaultModel,
    order: usize,
    budget: u128,
) -> Result<FailureEstimate, AnalysisError> {
    model.validate()?;
    let locations = enumerate_locations(st);
    let no_fault_prob: f64 = locations
        .iter()
        .map(|l| 1.0 - model.location_probability(l))
        .product();
    let profiles = profile_paths(st, order, budget)?;
    let table = decode_table(st, order, budget)?;
    let decoded_profiles: BTreeMap<Vec<bool>, PathProfile> = table
        .iter()
        .map(|(syn, path)| (syn.clone(), profile_one(st, path.clone())))
        .collect();

    let mut per_syndrome: BTreeMap<String, (f64, f64, String)> = BTreeMap::new();
    let mut marginal = 0.0;
    let mut enumerated = 0.0;
    for pr in &profiles {
        let prob = path_probability(&pr.path, model, no_fault_prob);
        enumerated += prob;
        let decoded = &decoded_profiles[&pr.syndrome_u];
        let fails = pr.syndrome_t == decoded.syndrome_t && pr.gauge_rep != decoded.gauge_rep;
        let key = SyndromeReport::new(pr.syndrome_u.clone()).to_string();
        let entry = per_syndrome
            .entry(key)
            .or_insert_with(|| (0.0, 0.0, decoded.path.to_string()));
        entry.0 += prob;
        if fails {
            entry.1 += prob;
            marginal += prob;
        }
    }
    let per_syndrome = per_syndrome
        .into_iter()
        .map(|(k, (total, fail, decoded))| {
            (
                k,
                SyndromeFailure {
                    probability: total,
                    failure: if total > 0.0 { fail / total } else { 0.0 },
                    decoded,
                },
            )
        })
        .collect();
    Ok(FailureEstimate {
        mode: FailureMode::Exhaustive { order },
        per_syndrome,
        marginal,
        std_error: None,
        truncation_mass: Some((1.0 - enumerated).max(0.0)),
        undecodable_shots: None,
    })
}

/// Monte Carlo failure probability under iid location faults, decoding
/// each sampled syndrome through a fault-count-capped table. Deterministic
/// for a fixed seed regardless of worker count.
pub fn failure_probability_monte_carlo(
    st: &SpacetimeCode,
    model: &FaultModel,
    shots: u64,
    seed: u64,
    decode_cap: usize,
    budget: u128,
) -> Result<FailureEstimate, AnalysisError> {
    model.validate()?;
    if shots == 0 {
        return Err(AnalysisError::NoShots);
    }
    let locations = enumerate_locations(st);
    let alphabets: Vec<Vec<PauliOperator>> = locations.iter().map(location_alphabet).collect();
    let probs: Vec<f64> = locations
        .iter()
        .map(|l| model.location_probability(l))
        .collect();
    let table = decode_table(st, decode_cap, budget)?;
    let decoded_profiles: BTreeMap<Vec<bool>, PathProfile> = table
        .iter()
        .map(|(syn, path)| (syn.clone(), profile_one(st, path.clone())))
        .collect();

    const BLOCK: u64 = 4096;
    let blocks: u64 = shots.div_ceil(BLOCK);
    struct BlockStats {
        per_syndrome: BTreeMap<Vec<bool>, (u64, u64)>,
        failures: u64,
        undecodable: u64,
    }
    let stats: Vec<BlockStats> = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(block + 1);
            let in_block = BLOCK.min(shots - block * BLOCK);
            let mut per_syndrome: BTreeMap<Vec<bool>, (u64, u64)> = BTreeMap::new();
            let mut failures = 0;
            let mut undecodable = 0;
            for _ in 0..in_block {
                let mut path = FaultPath::empty();
                for (i, loc) in locations.iter().enumerate() {
                    if rng.gen::<f64>() < probs[i] {
                        let err = &alphabets[i][rng.gen_range(0..alphabets[i].len())];
                        path.add_fault(loc.clone(), err.clone());
                    }
                }
                let pr = profile_one(st, path);
                let entry = per_syndrome.entry(pr.syndrome_u.clone()).or_default();
                entry.0 += 1;
                let failed = match decoded_profiles.get(&pr.syndrome_u) {
                    Some(decoded) => {
                        pr.syndrome_t == decoded.syndrome_t && pr.gauge_rep != decoded.gauge_rep
                    }
                    None => {
                        undecodable += 1;
                        true
                    }
                };
                if failed {
                    entry.1 += 1;
                    failures += 1;
                }
            }
            BlockStats {
                per_syndrome,
                failures,
                undecodable,
            }
        })
        .collect();

    let mut per_syndrome_counts: BTreeMap<Vec<bool>, (u64, u64)> = BTreeMap::new();
    let mut failures = 0u64;
    let mut undecodable = 0u64;
    for s in stats {
        failures += s.failures;
        undecodable += s.undecodable;
        for (k, (n, f)) in s.per_syndrome {
            let e = per_syndrome_counts.entry(k).or_default();
            e.0 += n;
            e.1 += f;
        }
    }
    let marginal = failures as f64 / shots as f64;
    let std_error = (marginal * (1.0 - marginal) / shots as f64).sqrt();
    let per_syndrome = per_syndrome_counts
        .into_iter()
        .map(|(bits, (n, f))| {
            let decoded = decoded_profiles
                .get(&bits)
                .map(|d| d.path.to_string())
                .unwrap_or_else(|| "(undecodable)".to_string());
            (
                SyndromeReport::new(bits).to_string(),
                SyndromeFailure {
                    probability: n as f64 / shots as f64,
                    failure: f as f64 / n as f64,
                    decoded,
                },
            )
        })
        .collect();
    Ok(FailureEstimate {
        mode: FailureMode::MonteCarlo { shots, seed },
        per_syndrome,
        marginal,
        std_error: Some(std_error),
        truncation_mass: None,
        undecodable_shots: Some(undecodable),
    })
}

/// Acceptable residual classes per observed syndrome, on the output qubits
/// of one gadget.
pub type AcceptableSet = BTreeMap<String, Vec<PauliOperator>>;

/// Outcome of a gadget-chain closure check.
#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub gadgets: usize,
    pub combinations_checked: u128,
    pub violation: Option<ChainViolation>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainViolation {
    pub gadget: usize,
    pub input_error: String,
    pub new_faults: String,
    pub syndrome: String,
    pub residual: String,
    pub reason: String,
}

/// Verify closure of a chain of gadgets under acceptable residual sets.
///
/// `acceptable[i]` lists, per accepted syndrome of gadget i, the residual
/// classes (on gadget i's output qubits) the protocol tolerates. Gadget 0
/// takes the identity as its only input error. For every gadget the
/// acceptable classes of one syndrome must be pairwise gauge-equivalent or
/// distinguishable by the output code; then every acceptable input error
/// combined with up to `max_new_faults` new faults must either land in an
/// acceptable class for the observed syndrome or be detected (a syndrome
/// outside the accepted map).
pub fn verify_gadget_chain(
    gadgets: &[Circuit],
    acceptable: &[AcceptableSet],
    max_new_faults: usize,
    budget: u128,
) -> Result<ChainReport, AnalysisError> {
    assert_eq!(gadgets.len(), acceptable.len());
    let mut compiled = Vec::new();
    for g in gadgets {
        let norm = g
            .normalize()
            .map_err(|e| AnalysisError::BadLocation(e.to_string()))?;
        let st =
            build_spacetime_code(&norm).map_err(|e| AnalysisError::BadLocation(e.to_string()))?;
        compiled.push(st);
    }
    // Interface check: output code of gadget i == input code of gadget i+1.
    for i in 0..compiled.len().saturating_sub(1) {
        let out_code = &compiled[i].output().output_code;
        let next = compiled[i + 1].circuit();
        let next_inputs = next.input_count();
        if out_code.n() != next_inputs {
            return Err(AnalysisError::ChainCodeMismatch(i, i + 1));
        }
        let next_rows: Vec<PauliOperator> = next
            .input_stabilizer()
            .iter()
            .map(|r| r.extract(&(0..next_inputs).collect::<Vec<_>>()))
            .collect();
        let a = crate::code::GroupBasis::new(out_code.n(), out_code.generators().to_vec());
        let b = crate::code::GroupBasis::new(out_code.n(), next_rows.clone());
        let same = out_code
            .generators()
            .iter()
            .all(|g| b.contains_phaseless(g))
            && next_rows.iter().all(|g| a.contains_phaseless(g));
        if !same {
            return Err(AnalysisError::ChainCodeMismatch(i, i + 1));
        }
    }

    let mut combinations: u128 = 0;
    for (i, st) in compiled.iter().enumerate() {
        let n = st.n_total();
        let output_positions = st.output().output_qubits.clone();
        let closure_rows: Vec<PauliOperator> = st
            .output()
            .propagated
            .iter()
            .cloned()
            .chain(
                st.circuit()
                    .measured_qubits()
                    .into_iter()
                    .map(|q| PauliOperator::single(n, q, SinglePauli::Z)),
            )
            .collect();
        let closure = crate::code::GroupBasis::new(n, closure_rows);
        let s_prime = &st.output().output_code;

        let lift = |res: &PauliOperator| res.embed(n, &output_positions);

        // Acceptable classes for one syndrome must not be confusable.
        for (syn, classes) in &acceptable[i] {
            for (a_idx, a) in classes.iter().enumerate() {
                for b in classes.iter().skip(a_idx + 1) {
                    let prod = a.multiply(b);
                    let lifted = lift(&prod);
                    let gauge_equiv = closure.contains_phaseless(&lifted);
                    let distinguished = s_prime.generators().iter().any(|g| !g.commutes(&prod));
                    if !gauge_equiv && !distinguished {
                        return Err(AnalysisError::ConfusableAcceptableSet {
                            gadget: i,
                            syndrome: syn.clone(),
                        });
                    }
                }
            }
        }

        // Input classes: previous gadget's acceptable residuals.
        let input_classes: Vec<PauliOperator> = if i == 0 {
            vec![PauliOperator::identity(st.circuit().input_count())]
        } else {
            acceptable[i - 1].values().flatten().cloned().collect()
        };

        let locations: Vec<FaultLocation> = enumerate_locations(st)
            .into_iter()
            .filter(|l| !matches!(l, FaultLocation::Input { .. }))
            .collect();
        let alphabets: Vec<Vec<PauliOperator>> = locations.iter().map(location_alphabet).collect();
        let new_paths = count_fault_paths(&alphabets, max_new_faults);
        let total = new_paths.saturating_mul(input_classes.len() as u128);
        combinations = combinations.saturating_add(total);
        if combinations > budget {
            return Err(AnalysisError::BudgetExceeded {
                needed: combinations,
                budget,
            });
        }

        let u_gens = st.base().unmasked_generators();
        for eps in &input_classes {
            let mut base_path = FaultPath::empty();
            for q in eps.support() {
                base_path.add_fault(
                    FaultLocation::Input { qubit: q },
                    PauliOperator::single(1, 0, eps.letter(q)),
                );
            }
            let mut violation: Option<ChainViolation> = None;
            let mut check = |new_faults: &FaultPath| {
                if violation.is_some() {
                    return;
                }
                let mut path = base_path.clone();
                for (loc, err) in new_faults.faults() {
                    path.add_fault(loc.clone(), err.clone());
                }
                let error = path.spacetime_error(st);
                let syn = SyndromeReport::new(syndrome_against(u_gens, &error)).to_string();
                // The residual class lives on the output qubits; measured
                // content is syndrome information, not residual error.
                let residual =
                    lift(&project(st, &error, ProjectionEnd::Out).extract(&output_positions));
                // A syndrome with no acceptable entry is a detection: the
                // combination announced itself and conditioning handles it.
                // Only syndromes the protocol accepts constrain residuals.
                let ok = match acceptable[i].get(&syn) {
                    None => true,
                    Some(classes) => classes.iter().any(|class| {
                        let mut diff = residual.clone();
                        diff.multiply_assign(&lift(class));
                        closure.contains_phaseless(&diff)
                    }),
                };
                if !ok {
                    violation = Some(ChainViolation {
                        gadget: i,
                        input_error: eps.to_string(),
                        new_faults: new_faults.to_string(),
                        syndrome: syn.clone(),
                        residual: residual.extract(&output_positions).to_string(),
                        reason: "residual not equivalent to any acceptable class".to_string(),
                    });
                }
            };
            let mut path = FaultPath::empty();
            check(&path);
            let mut chosen = Vec::new();
            enumerate_rec(
                &locations,
                &alphabets,
                max_new_faults,
                0,
                &mut chosen,
                &mut path,
                &mut check,
            );
            if let Some(v) = violation {
                return Ok(ChainReport {
                    gadgets: gadgets.len(),
                    combinations_checked: combinations,
                    violation: Some(v),
                });
            }
        }
    }
    Ok(ChainReport {
        gadgets: gadgets.len(),
        combinations_checked: combinations,
        violation: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;
    use crate::fixtures::{flag_circuit_flagged, flag_circuit_plain, toy_circuit};

    fn compile(c: &Circuit) -> SpacetimeCode {
        build_spacetime_code(&c.normalize().unwrap()).unwrap()
    }

    #[test]
    fn empty_fault_path_is_trivial() {
        let st = compile(&toy_circuit());
        let path = FaultPath::empty();
        assert!(path.spacetime_error(&st).is_identity());
        assert!(syndrome(&st, &path).is_zero());
    }

    #[test]
    fn faults_at_same_location_merge() {
        let loc = FaultLocation::BeforeMeasurement { qubit: 4 };
        let mut path = FaultPath::empty();
        path.add_fault(loc.clone(), PauliOperator::parse("X", 1).unwrap());
        path.add_fault(loc.clone(), PauliOperator::parse("Y", 1).unwrap());
        assert_eq!(path.fault_count(), 1);
        // X·Y = iZ, phaseless letter Z.
        assert_eq!(path.faults()[0].1.letter(0), SinglePauli::Z);
        path.add_fault(loc.clone(), PauliOperator::parse("Z", 1).unwrap());
        assert_eq!(path.fault_count(), 0);
    }

    #[test]
    fn ancilla_hook_lands_on_late_data_qubits() {
        // Z on the ancilla after the second CNOT of the plain gadget
        // projects out to Z on the two remaining data qubits (and the
        // ancilla itself at measurement time).
        let st = compile(&flag_circuit_plain());
        let gate = *st.circuit().gate_on(4, 1).unwrap();
        let mut path = FaultPath::empty();
        path.add_fault(
            FaultLocation::AfterGate { tick: 1, gate },
            PauliOperator::parse("IZ", 2).unwrap(),
        );
        let error = path.spacetime_error(&st);
        // Error sits at (ancilla, tick 2).
        assert!(error.z_bit(st.index(4, 2)));
        assert_eq!(error.weight(), 1);
        let out = project(&st, &error, ProjectionEnd::Out);
        let mut letters: Vec<(usize, char)> = out
            .support()
            .map(|q| (q, out.letter(q).as_char()))
            .collect();
        letters.sort();
        assert_eq!(letters, vec![(2, 'Z'), (3, 'Z'), (4, 'Z')]);
    }

    #[test]
    fn projection_is_gauge_equivalent() {
        let st = compile(&toy_circuit());
        let mut count = 0;
        for_each_fault_path(&st, 1, DEFAULT_BUDGET, |path| {
            let error = path.spacetime_error(&st);
            for end in [ProjectionEnd::In, ProjectionEnd::Out] {
                let projected = project(&st, &error, end);
                let mut combined = error.clone();
                combined.multiply_assign(&embed_projection(&st, &projected, end));
                assert!(
                    st.base().gauge_basis().contains_phaseless(&combined),
                    "projection not gauge-equivalent for {path}"
                );
            }
            count += 1;
        })
        .unwrap();
        assert!(count > 50);
    }

    #[test]
    fn final_tick_fault_projects_to_itself() {
        let st = compile(&flag_circuit_plain());
        let mut path = FaultPath::empty();
        path.add_fault(
            FaultLocation::BeforeMeasurement { qubit: 4 },
            PauliOperator::parse("X", 1).unwrap(),
        );
        let error = path.spacetime_error(&st);
        let out = project(&st, &error, ProjectionEnd::Out);
        assert_eq!(out.weight(), 1);
        assert!(out.x_bit(4));
    }

    #[test]
    fn syndrome_is_linear() {
        let st = compile(&flag_circuit_flagged());
        let locations = enumerate_locations(&st);
        let mut a = FaultPath::empty();
        a.add_fault(
            locations[3].clone(),
            location_alphabet(&locations[3])[0].clone(),
        );
        let mut b = FaultPath::empty();
        b.add_fault(
            locations[7].clone(),
            location_alphabet(&locations[7])[2].clone(),
        );
        let mut ab = a.clone();
        for (l, e) in b.faults() {
            ab.add_fault(l.clone(), e.clone());
        }
        assert_eq!(
            syndrome(&st, &ab),
            syndrome(&st, &a).xor(&syndrome(&st, &b))
        );
    }

    #[test]
    fn flag_catches_the_dangerous_hook() {
        // Z on the ancilla after the second data CNOT of the flagged gadget
        // flips the flag measurement.
        let st = compile(&flag_circuit_flagged());
        // Data CNOTs are at ticks 0, 2, 3, 5; the fault goes after tick 2.
        let gate = *st.circuit().gate_on(4, 2).unwrap();
        let mut path = FaultPath::empty();
        path.add_fault(
            FaultLocation::AfterGate { tick: 2, gate },
            PauliOperator::parse("IZ", 2).unwrap(),
        );
        let syn = syndrome(&st, &path);
        assert!(!syn.is_zero(), "hook must set the flag bit");
    }

    #[test]
    fn identity_pair_verdict_is_corrected() {
        let st = compile(&toy_circuit());
        let k = PauliOperator::identity(st.n_spacetime());
        assert_eq!(pair_verdict(&st, &k, &k), Verdict::CorrectedNow);
    }

    #[test]
    fn propagated_image_pair_is_gauge_equivalent() {
        let st = compile(&toy_circuit());
        let c = st.circuit();
        let p = PauliOperator::parse("XIIII", 5).unwrap();
        let k = st.embed_at_slice(&p, 1);
        let l = st.embed_at_slice(&c.propagate(&p, 1, 2), 2);
        assert_eq!(pair_verdict(&st, &k, &l), Verdict::CorrectedNow);
    }

    #[test]
    fn decode_zero_syndrome_gives_empty_path() {
        let st = compile(&flag_circuit_flagged());
        let zero = SyndromeReport::zero(st.base().unmasked_generators().len());
        let path = decode(&st, &zero, 1, DEFAULT_BUDGET).unwrap().unwrap();
        assert_eq!(path.fault_count(), 0);
    }

    #[test]
    fn decode_matches_planted_syndrome() {
        let st = compile(&flag_circuit_flagged());
        let mut checked = 0;
        for_each_fault_path(&st, 1, DEFAULT_BUDGET, |path| {
            let syn = syndrome(&st, path);
            let decoded = decode(&st, &syn, 1, DEFAULT_BUDGET).unwrap().unwrap();
            assert_eq!(syndrome(&st, &decoded), syn);
            checked += 1;
        })
        .unwrap();
        assert!(checked > 100);
    }

    #[test]
    fn budget_is_enforced() {
        let st = compile(&toy_circuit());
        let err = for_each_fault_path(&st, 2, 10, |_| {}).unwrap_err();
        assert!(matches!(err, AnalysisError::BudgetExceeded { .. }));
    }

    #[test]
    fn residual_distribution_zero_noise() {
        let st = compile(&toy_circuit());
        let zero = SyndromeReport::zero(st.base().unmasked_generators().len());
        let dist = residual_distribution(&st, &FaultModel::uniform(0.0), 1, &zero, DEFAULT_BUDGET)
            .unwrap();
        assert_eq!(dist.classes.len(), 1);
        assert_eq!(dist.classes[0].probability, 1.0);
        assert!(dist.truncation_mass.abs() < 1e-12);
    }

    #[test]
    fn failure_probability_zero_noise_is_zero() {
        let st = compile(&toy_circuit());
        let est = failure_probability_exhaustive(&st, &FaultModel::uniform(0.0), 1, DEFAULT_BUDGET)
            .unwrap();
        assert_eq!(est.marginal, 0.0);
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let st = compile(&toy_circuit());
        let model = FaultModel::uniform(0.02);
        let a = failure_probability_monte_carlo(&st, &model, 2000, 7, 2, DEFAULT_BUDGET).unwrap();
        let b = failure_probability_monte_carlo(&st, &model, 2000, 7, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(a.marginal, b.marginal);
        assert_eq!(
            serde_json::to_string(&a.per_syndrome).unwrap(),
            serde_json::to_string(&b.per_syndrome).unwrap()
        );
        let c = failure_probability_monte_carlo(&st, &model, 2000, 8, 2, DEFAULT_BUDGET).unwrap();
        assert!(a.marginal != c.marginal || a.per_syndrome.len() != c.per_syndrome.len());
    }

    #[test]
    fn identity_gadget_chain_is_closed() {
        let text = "qubits 1\ntick\ntick\n";
        let g = parse_circuit(text).unwrap();
        let mut set = AcceptableSet::new();
        set.insert("(empty)".to_string(), vec![PauliOperator::identity(1)]);
        let report =
            verify_gadget_chain(&[g.clone(), g], &[set.clone(), set], 0, DEFAULT_BUDGET).unwrap();
        assert!(report.violation.is_none());
    }
}
