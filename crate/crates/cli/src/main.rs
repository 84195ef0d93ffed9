//! Command-line frontend: compile circuits to spacetime codes, search
//! distances, verify fault sets, decode syndromes, estimate failure
//! probabilities, and evaluate counting bounds.
//!
//! Exit codes: 0 on success, 1 when the analysis ran but found problems in
//! the circuit (for example a confusable fault pair, or no decodable
//! path), 2 on usage or input errors.

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::io::Read;
use std::process::ExitCode;

use stcode::fixtures::{
    flag_circuit_flagged, flag_circuit_plain, surface_extraction, toy_circuit, ExtractionStyle,
};
use stcode::report::{
    mask_entries, provenance_entries, AnalysisReport, BoundsReport, CodeSummary, DecodeReport,
};
use stcode::{
    budget_bits, build_spacetime_code, decode, failure_probability_exhaustive,
    failure_probability_monte_carlo, info_bound, parse_circuit, serialize_circuit,
    verify_fault_set, Circuit, DistanceBound, DistanceKind, DistanceMethod, FaultModel,
    MaskedSubsystemCode, NoiseConvention, SpacetimeCode, SyndromeReport,
};

#[derive(Parser)]
#[command(
    name = "stcode",
    version,
    about = "Spacetime-code compilation and fault analysis"
)]
struct Cli {
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker thread cap (also via the STCODE_WORKERS environment
    /// variable).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Full,
    T,
    U,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Exhaustive,
    RandomInformationSet,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum StyleArg {
    Plain,
    Flagged,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    Uniform,
    Depolarizing,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a built-in circuit in the text format.
    Gen {
        /// surface, flag-a, flag-b, or toy.
        fixture: String,
        /// Lattice size for the surface fixture.
        #[arg(long = "L", default_value_t = 3)]
        lattice: usize,
        /// Ancilla style for the surface fixture.
        #[arg(long, value_enum, default_value_t = StyleArg::Plain)]
        style: StyleArg,
    },
    /// Compile a circuit and emit its spacetime code with provenance and
    /// masking tables.
    EmitCode {
        /// Circuit file, or - for standard input.
        #[arg(default_value = "-")]
        circuit: String,
    },
    /// Compute masked distances of a compiled circuit or a code file.
    Distance {
        #[arg(default_value = "-")]
        circuit: String,
        /// Read a code file instead of compiling a circuit.
        #[arg(long)]
        code: Option<String>,
        /// Distance kind; all three when omitted.
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        #[arg(long, default_value_t = 4)]
        max_weight: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Exhaustive)]
        method: MethodArg,
        /// Trials for the randomized method.
        #[arg(long, default_value_t = 2000)]
        trials: u64,
        /// Seed for the randomized method.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Enumerate fault paths and classify every pair.
    Verify {
        #[arg(default_value = "-")]
        circuit: String,
        #[arg(long, default_value_t = 1)]
        max_faults: usize,
        /// Also certify the masked distances up to this weight first,
        /// enabling the distance cross-check.
        #[arg(long)]
        max_weight: Option<usize>,
        #[arg(long, default_value_t = stcode::DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Decode an unmasked syndrome to a minimum-fault-count path.
    Decode {
        #[arg(default_value = "-")]
        circuit: String,
        /// Syndrome bit string, one bit per always-unmasked generator.
        #[arg(long)]
        syndrome: String,
        #[arg(long, default_value_t = 2)]
        max_faults: usize,
        #[arg(long, default_value_t = stcode::DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Monte Carlo failure-probability estimate.
    Sample {
        #[arg(default_value = "-")]
        circuit: String,
        /// Per-location fault probability.
        #[arg(short = 'p', long = "rate")]
        rate: f64,
        #[arg(long)]
        shots: u64,
        #[arg(long)]
        seed: u64,
        /// Fault probability for input locations (defaults to the rate).
        #[arg(long)]
        input_rate: Option<f64>,
        #[arg(long, value_enum, default_value_t = ConventionArg::Uniform)]
        convention: ConventionArg,
        /// Decode-table fault-count cap.
        #[arg(long, default_value_t = 2)]
        decode_cap: usize,
        #[arg(long, default_value_t = stcode::DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Exhaustive truncated failure probability.
    Exhaust {
        #[arg(default_value = "-")]
        circuit: String,
        #[arg(short = 'p', long = "rate")]
        rate: f64,
        /// Truncation order (maximum fault count enumerated).
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long)]
        input_rate: Option<f64>,
        #[arg(long, value_enum, default_value_t = ConventionArg::Uniform)]
        convention: ConventionArg,
        #[arg(long, default_value_t = stcode::DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Fault-set counting bound.
    Bound {
        /// Gate (location) count.
        #[arg(long = "T")]
        gates: u64,
        #[arg(short = 'p', long = "rate")]
        rate: f64,
        /// Errors per location.
        #[arg(short = 'a', long = "alphabet")]
        alphabet: u64,
        /// Gadget depth for the bit budget (with --logical and --extra).
        #[arg(long)]
        depth: Option<u64>,
        /// Logical qubit count for the bit budget.
        #[arg(long)]
        logical: Option<u64>,
        /// Extra qubit count for the bit budget.
        #[arg(long)]
        extra: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(workers) = cli.workers.or_else(|| {
        std::env::var("STCODE_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
    }) {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global();
    }
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Gen {
            fixture,
            lattice,
            style,
        } => {
            let circuit = match fixture.as_str() {
                "flag-a" => flag_circuit_plain(),
                "flag-b" => flag_circuit_flagged(),
                "toy" => toy_circuit(),
                "surface" => {
                    let style = match style {
                        StyleArg::Plain => ExtractionStyle::Plain,
                        StyleArg::Flagged => ExtractionStyle::Flagged,
                    };
                    surface_extraction(*lattice, style)
                        .map_err(|e| anyhow!("surface fixture: {e}"))?
                }
                other => {
                    return Err(anyhow!(
                        "unknown fixture {other:?} (expected surface, flag-a, flag-b, or toy)"
                    ))
                }
            };
            print!("{}", serialize_circuit(&circuit));
            Ok(ExitCode::SUCCESS)
        }
        Command::EmitCode { circuit } => {
            let (st, name) = compile(circuit)?;
            emit_code(cli, &st, &name)
        }
        Command::Distance {
            circuit,
            code,
            kind,
            max_weight,
            method,
            trials,
            seed,
        } => {
            let method = match method {
                MethodArg::Exhaustive => DistanceMethod::Exhaustive,
                MethodArg::RandomInformationSet => DistanceMethod::RandomInformationSet {
                    trials: *trials,
                    seed: *seed,
                },
            };
            let kinds: Vec<DistanceKind> = match kind {
                Some(KindArg::Full) => vec![DistanceKind::Full],
                Some(KindArg::T) => vec![DistanceKind::TemporarilyMasked],
                Some(KindArg::U) => vec![DistanceKind::Unmasked],
                None => vec![
                    DistanceKind::Full,
                    DistanceKind::TemporarilyMasked,
                    DistanceKind::Unmasked,
                ],
            };
            match code {
                Some(path) => {
                    let text =
                        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
                    let code = parse_code_file(&text)?;
                    distance_report(cli, code, path.clone(), &kinds, *max_weight, method)
                }
                None => {
                    let (st, name) = compile(circuit)?;
                    distance_report(cli, st.base().clone(), name, &kinds, *max_weight, method)
                }
            }
        }
        Command::Verify {
            circuit,
            max_faults,
            max_weight,
            budget,
        } => {
            let (mut st, name) = compile(circuit)?;
            if let Some(w) = max_weight {
                for kind in [
                    DistanceKind::Full,
                    DistanceKind::TemporarilyMasked,
                    DistanceKind::Unmasked,
                ] {
                    st.base_mut()
                        .compute_distance(kind, *w, DistanceMethod::Exhaustive);
                }
            }
            let report = verify_fault_set(&st, *max_faults, *budget)?;
            let confusions = report.confusion_pairs;
            let doc = AnalysisReport {
                circuit: name,
                code_summary: Some(CodeSummary::from_spacetime(&st, *max_weight)),
                masks: Some(mask_entries(&st)),
                verdicts: Some(report),
                ..Default::default()
            };
            render(cli, &doc, render_verify)?;
            Ok(if confusions > 0 {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Decode {
            circuit,
            syndrome,
            max_faults,
            budget,
        } => {
            let (st, name) = compile(circuit)?;
            let expected = st.base().unmasked_generators().len();
            let target = SyndromeReport::parse(syndrome, expected)?;
            let found = decode(&st, &target, *max_faults, *budget)?;
            let decode_section = match &found {
                Some(path) => {
                    let error = path.spacetime_error(&st);
                    let residual = stcode::project(&st, &error, stcode::ProjectionEnd::Out);
                    DecodeReport {
                        syndrome: target.to_string(),
                        found: true,
                        path: Some(path.to_string()),
                        residual: Some(residual.extract(&st.output().output_qubits).to_string()),
                        max_faults: *max_faults,
                    }
                }
                None => DecodeReport {
                    syndrome: target.to_string(),
                    found: false,
                    path: None,
                    residual: None,
                    max_faults: *max_faults,
                },
            };
            let ok = decode_section.found;
            let doc = AnalysisReport {
                circuit: name,
                decode: Some(decode_section),
                ..Default::default()
            };
            render(cli, &doc, render_decode)?;
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Sample {
            circuit,
            rate,
            shots,
            seed,
            input_rate,
            convention,
            decode_cap,
            budget,
        } => {
            let (st, name) = compile(circuit)?;
            let model = FaultModel {
                gate_p: *rate,
                input_p: *input_rate,
                convention: match convention {
                    ConventionArg::Uniform => NoiseConvention::Uniform,
                    ConventionArg::Depolarizing => NoiseConvention::Depolarizing,
                },
            };
            let estimate =
                failure_probability_monte_carlo(&st, &model, *shots, *seed, *decode_cap, *budget)?;
            let doc = AnalysisReport {
                circuit: name,
                failure: Some(estimate),
                ..Default::default()
            };
            render(cli, &doc, render_failure)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Exhaust {
            circuit,
            rate,
            order,
            input_rate,
            convention,
            budget,
        } => {
            let (st, name) = compile(circuit)?;
            let model = FaultModel {
                gate_p: *rate,
                input_p: *input_rate,
                convention: match convention {
                    ConventionArg::Uniform => NoiseConvention::Uniform,
                    ConventionArg::Depolarizing => NoiseConvention::Depolarizing,
                },
            };
            let estimate = failure_probability_exhaustive(&st, &model, *order, *budget)?;
            let doc = AnalysisReport {
                circuit: name,
                failure: Some(estimate),
                ..Default::default()
            };
            render(cli, &doc, render_failure)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bound {
            gates,
            rate,
            alphabet,
            depth,
            logical,
            extra,
        } => {
            let detail = info_bound(*gates, *rate, *alphabet)?;
            let budget = match (depth, logical, extra) {
                (Some(d), Some(k), Some(m)) => Some(budget_bits(*d, *k, *m, *rate, *alphabet)?),
                _ => None,
            };
            let doc = AnalysisReport {
                circuit: format!("T={gates}"),
                bounds: Some(BoundsReport {
                    exact_log2: detail.exact_log2_count,
                    entropy_bits: detail.entropy_bound_bits,
                    budget_bits: budget,
                    detail,
                }),
                ..Default::default()
            };
            render(cli, &doc, render_bounds)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Read a circuit from a file or stdin, normalize, and compile.
fn compile(source: &str) -> Result<(SpacetimeCode, String)> {
    let (text, name) = if source == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .context("reading standard input")?;
        (buf, "<stdin>".to_string())
    } else {
        (
            std::fs::read_to_string(source).with_context(|| format!("reading {source}"))?,
            source.to_string(),
        )
    };
    let circuit: Circuit = parse_circuit(&text)?;
    let normalized = circuit.normalize()?;
    let st = build_spacetime_code(&normalized)?;
    Ok((st, name))
}

/// Parse a code file as text, falling back to JSON.
fn parse_code_file(text: &str) -> Result<MaskedSubsystemCode> {
    if text.trim_start().starts_with('{') {
        Ok(MaskedSubsystemCode::parse_json(text)?)
    } else {
        Ok(MaskedSubsystemCode::parse_text(text)?)
    }
}

fn emit_code(cli: &Cli, st: &SpacetimeCode, name: &str) -> Result<ExitCode> {
    match cli.format {
        Format::Json => {
            let doc = AnalysisReport {
                circuit: name.to_string(),
                code_summary: Some(CodeSummary::from_spacetime(st, None)),
                masks: Some(mask_entries(st)),
                provenance: Some(provenance_entries(st)),
                ..Default::default()
            };
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        Format::Text => {
            print!("{}", st.base().to_text());
            println!(
                "# spacetime index: (qubit q, tick t) -> t*{} + q",
                st.n_total()
            );
            for entry in provenance_entries(st) {
                println!(
                    "# gauge {}: {}",
                    entry.index,
                    provenance_label(&entry.source)
                );
            }
            for entry in mask_entries(st) {
                println!("# stab {}: {:?}", entry.index, entry.case);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn provenance_label(source: &stcode::GaugeSource) -> String {
    match source {
        stcode::GaugeSource::Gate {
            tick,
            gate,
            operand,
            seed,
        } => format!("gate {gate} @t{tick}, seed {seed} on qubit {operand}"),
        stcode::GaugeSource::Prep { qubit } => format!("prep {qubit}"),
        stcode::GaugeSource::Measurement { qubit } => format!("measurement {qubit}"),
        stcode::GaugeSource::InputStabilizer { row } => format!("input stabilizer row {row}"),
    }
}

#[derive(Serialize)]
struct DistanceEntry {
    kind: DistanceKind,
    bound: DistanceBound,
}

#[derive(Serialize)]
struct DistanceDoc {
    source: String,
    qubits: usize,
    gauge_rank: usize,
    max_weight: usize,
    distances: Vec<DistanceEntry>,
}

fn distance_report(
    cli: &Cli,
    code: MaskedSubsystemCode,
    source: String,
    kinds: &[DistanceKind],
    max_weight: usize,
    method: DistanceMethod,
) -> Result<ExitCode> {
    let distances: Vec<DistanceEntry> = kinds
        .iter()
        .map(|&kind| DistanceEntry {
            kind,
            bound: code.distance(kind, max_weight, method),
        })
        .collect();
    let doc = DistanceDoc {
        source,
        qubits: code.n(),
        gauge_rank: code.gauge_rank(),
        max_weight,
        distances,
    };
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&doc)?),
        Format::Text => {
            println!(
                "code: {} ({} qubits, gauge rank {})",
                doc.source, doc.qubits, doc.gauge_rank
            );
            for entry in &doc.distances {
                let label = match entry.kind {
                    DistanceKind::Full => "d  ",
                    DistanceKind::TemporarilyMasked => "d_T",
                    DistanceKind::Unmasked => "d_U",
                };
                println!("  {label} = {}", bound_label(&entry.bound));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn bound_label(bound: &DistanceBound) -> String {
    match bound {
        DistanceBound::Exact { weight, witness } => format!("{weight} (witness {witness})"),
        DistanceBound::AtLeast { weight } => format!(">= {weight} (search cap reached)"),
        DistanceBound::UpperBound { weight, witness } => {
            format!("<= {weight} (randomized, witness {witness}; not certified)")
        }
    }
}

fn render(cli: &Cli, doc: &AnalysisReport, text: fn(&AnalysisReport) -> ()) -> Result<()> {
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(doc)?),
        Format::Text => text(doc),
    }
    Ok(())
}

fn render_verify(doc: &AnalysisReport) {
    let v = doc.verdicts.as_ref().unwrap();
    let s = doc.code_summary.as_ref().unwrap();
    println!("circuit: {}", doc.circuit);
    println!(
        "spacetime code: N={} k={} gauge rank={} (stabilizer {}, unmasked {}, temporarily masked {})",
        s.n,
        s.k,
        s.rank,
        s.stabilizer_generators,
        s.unmasked_generators,
        s.temporarily_masked_generators
    );
    for (label, bound) in [("d  ", &s.d), ("d_T", &s.d_t), ("d_U", &s.d_u)] {
        if let Some(bound) = bound {
            println!("  {label} = {}", bound_label(bound));
        }
    }
    println!(
        "fault paths (<= {} faults): {}",
        v.max_faults, v.fault_paths
    );
    println!(
        "pairs: corrected {} / deferred {} / confusions {}",
        v.corrected_pairs, v.deferred_pairs, v.confusion_pairs
    );
    if let Some(w) = &v.first_confusion {
        println!("first confusion @ syndrome {}:", w.syndrome);
        println!("  {}", w.path_a);
        println!("  {}", w.path_b);
    }
    if let Some(check) = &v.distance_cross_check {
        println!("distance check: {check}");
    }
}

fn render_decode(doc: &AnalysisReport) {
    let d = doc.decode.as_ref().unwrap();
    println!("circuit: {}", doc.circuit);
    println!("syndrome: {}", d.syndrome);
    match (&d.path, &d.residual) {
        (Some(path), Some(residual)) => {
            println!("decoded: {path}");
            println!("residual on output qubits: {residual}");
        }
        _ => println!("no consistent path within {} faults", d.max_faults),
    }
}

fn render_failure(doc: &AnalysisReport) {
    let f = doc.failure.as_ref().unwrap();
    println!("circuit: {}", doc.circuit);
    match &f.mode {
        stcode::fault::FailureMode::Exhaustive { order } => {
            println!("exhaustive failure probability, order {order}");
        }
        stcode::fault::FailureMode::MonteCarlo { shots, seed } => {
            println!("Monte Carlo failure probability, {shots} shots, seed {seed}");
        }
    }
    println!("marginal failure: {:.6e}", f.marginal);
    if let Some(se) = f.std_error {
        println!("std error: {se:.3e}");
    }
    if let Some(mass) = f.truncation_mass {
        println!("truncation mass: {mass:.6e}");
    }
    if let Some(n) = f.undecodable_shots {
        if n > 0 {
            println!("undecodable shots (counted as failures): {n}");
        }
    }
    for (syndrome, sf) in &f.per_syndrome {
        println!(
            "  s={syndrome}: P(s)={:.4e} P(fail|s)={:.4e} decoded [{}]",
            sf.probability, sf.failure, sf.decoded
        );
    }
}

fn render_bounds(doc: &AnalysisReport) {
    let b = doc.bounds.as_ref().unwrap();
    println!(
        "T={} p={} a={}",
        b.detail.gate_count, b.detail.p, b.detail.alphabet
    );
    println!("exact log2 count: {:.4} bits", b.exact_log2);
    println!("entropy bound:    {:.4} bits", b.entropy_bits);
    if let Some(budget) = b.budget_bits {
        println!("bit budget:       {budget:.4} bits");
    }
}
