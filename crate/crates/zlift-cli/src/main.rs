mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use output::*;
use zlift::billiard::{extended_billiard, BilliardParams};
use zlift::error::{Error, Result};
use zlift::lift::{build_lift, EdgeSet, LiftVertex};
use zlift::long_cycle::{check_circumference_params, long_cycle, CycleBudget, ParamCheck};
use zlift::oracle::{brute_force_hamiltonian, is_hamiltonian_cycle, validate_path_family};
use zlift::path_ham::{ham_cycle_odd_shifting, two_factor_of_path, CycleCertificate};
use zlift::prime_ham::{
    anchored_two_factor, ham_cycle_adjacent_ones, ham_cycle_leaf_condition,
    random_label_experiment, reduce_mod_prime, sufficient_prime, IntegerLabeledTree,
};
use zlift::text::{parse_decomposition, parse_tree, ParsedTree};
use zlift::tree_ham::{ham_cycle_from_decomposition, verify_decomposition};
use zlift::voltage::{normalize_cut_edges, VoltageTree};

/// Builds covering graphs of reflexive voltage trees over cyclic groups and
/// constructs certified Hamiltonian cycles, 2-factors, and long cycles.
#[derive(Parser)]
#[command(name = "zlift", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Args)]
struct CommonOpts {
    /// Input tree file
    input: PathBuf,
    /// Override the modulus of a voltage-tree input
    #[arg(long)]
    modulus: Option<u64>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct PrimeOpt {
    /// Reduction prime for integer-labeled inputs: a prime, or `auto` for
    /// the built-in sufficient bound
    #[arg(long, default_value = "auto")]
    prime: String,
}

#[derive(Args)]
struct OracleOpt {
    /// Cross-check cycles against the exact search when the lift has at
    /// most this many vertices
    #[arg(long, default_value_t = 24)]
    oracle_bound: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Build the covering graph of the input tree
    Lift {
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        prime: PrimeOpt,
    },
    /// Run the billiard path family on a reflexive path and print the
    /// arrival offsets and order permutations
    Billiard {
        #[command(flatten)]
        common: CommonOpts,
        /// Start offset
        #[arg(long, default_value_t = 0)]
        l: u64,
        /// Progression stride
        #[arg(long)]
        r: u64,
        /// Number of paths
        #[arg(long)]
        d: usize,
    },
    /// Build a 2-factor: of a path lift for an even track count, or of a
    /// tree lift anchored at vertex 0 when the input carries integer labels
    TwoFactor {
        #[command(flatten)]
        common: CommonOpts,
        /// Track count (path mode)
        #[arg(long)]
        d: Option<usize>,
        /// Start offset (path mode)
        #[arg(long, default_value_t = 0)]
        l: u64,
        #[command(flatten)]
        prime: PrimeOpt,
    },
    /// Hamiltonian cycle of an odd shifting path lift
    HamPath {
        #[command(flatten)]
        common: CommonOpts,
        /// Start offset
        #[arg(long, default_value_t = 0)]
        l: u64,
        #[command(flatten)]
        oracle: OracleOpt,
    },
    /// Hamiltonian cycle of a tree lift glued along an odd shifting
    /// decomposition
    HamTree {
        #[command(flatten)]
        common: CommonOpts,
        /// Decomposition file (`path <v1> <v2> ..` records)
        #[arg(long)]
        decomposition: PathBuf,
        #[command(flatten)]
        oracle: OracleOpt,
    },
    /// Hamiltonian cycle of an integer-labeled tree lifted over a prime,
    /// picking whichever label hypothesis applies
    HamPrime {
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        prime: PrimeOpt,
        #[command(flatten)]
        oracle: OracleOpt,
    },
    /// Long cycle through almost all vertices of the lift
    LongCycle {
        #[command(flatten)]
        common: CommonOpts,
        /// Budget parameter
        #[arg(long, conflicts_with_all = ["epsilon", "delta"])]
        omega: Option<u64>,
        /// Coverage slack (wrapper mode, with --delta)
        #[arg(long, requires = "delta")]
        epsilon: Option<f64>,
        /// Maximum degree (wrapper mode, with --epsilon)
        #[arg(long, requires = "epsilon")]
        delta: Option<u64>,
    },
    /// Re-validate a cycle emitted by one of the cycle commands
    Verify {
        #[command(flatten)]
        common: CommonOpts,
        /// JSON artifact holding a `cycle` array
        #[arg(long)]
        cycle: PathBuf,
        /// Check simple-cycle structure only, without full coverage
        /// (long cycles are not spanning)
        #[arg(long)]
        partial: bool,
        #[command(flatten)]
        prime: PrimeOpt,
    },
    /// Random-label detector experiment on the input tree's shape
    Experiment {
        #[command(flatten)]
        common: CommonOpts,
        /// Number of trials
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// Seed for the per-trial label streams
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated label support, sampled uniformly
        #[arg(long, default_value = "1,2")]
        dist: String,
        /// Also run the construction end to end on small hits
        #[arg(long)]
        construct: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn with_modulus(t: &VoltageTree, n: u64) -> Result<VoltageTree> {
    VoltageTree::new(
        n,
        t.loop_labels().iter().map(|&l| l as i64).collect(),
        t.tree_edges().iter().map(|&(u, v, l)| (u, v, l as i64)).collect(),
    )
}

fn load(common: &CommonOpts) -> Result<ParsedTree> {
    let parsed = parse_tree(&read_file(&common.input)?)?;
    match (parsed, common.modulus) {
        (ParsedTree::Voltage(t), Some(n)) => Ok(ParsedTree::Voltage(with_modulus(&t, n)?)),
        (ParsedTree::Integer(_), Some(_)) => {
            Err(Error::Parse("--modulus applies only to voltage-tree inputs".into()))
        }
        (parsed, None) => Ok(parsed),
    }
}

fn resolve_prime(t: &IntegerLabeledTree, prime: &PrimeOpt) -> Result<u64> {
    if prime.prime == "auto" {
        sufficient_prime(t)
    } else {
        prime.prime.parse::<u64>().map_err(|_| Error::Parse(format!("bad prime `{}`", prime.prime)))
    }
}

/// The voltage tree a construction command works on. Integer inputs are
/// reduced mod the resolved prime; voltage inputs are used as they are.
fn construction_tree(parsed: ParsedTree, prime: &PrimeOpt) -> Result<(VoltageTree, Option<u64>)> {
    match parsed {
        ParsedTree::Voltage(t) => Ok((t, None)),
        ParsedTree::Integer(t) => {
            let p = resolve_prime(&t, prime)?;
            Ok((reduce_mod_prime(&t, p)?, Some(p)))
        }
    }
}

#[derive(Serialize)]
struct LiftJson {
    n: u64,
    base_vertices: usize,
    vertices: usize,
    edges: Vec<[[u64; 2]; 2]>,
}

#[derive(Serialize)]
struct JointWeightsJson {
    endpoint_voltage: u64,
    properly_weighted: bool,
    joints: Vec<(usize, u64)>,
}

#[derive(Serialize)]
struct CycleJson {
    n: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    prime: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    construction: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weights: Option<JointWeightsJson>,
    cycle: Vec<[u64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    left: Option<JsonMatching>,
    #[serde(skip_serializing_if = "Option::is_none")]
    right: Option<JsonMatching>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_hamiltonian: Option<bool>,
    validation: JsonValidation,
}

fn emit_cycle(
    t: &VoltageTree,
    prime: Option<u64>,
    construction: Option<String>,
    weights: Option<JointWeightsJson>,
    cert: &CycleCertificate,
    format: Format,
    oracle_bound: usize,
) -> Result<()> {
    let lift = build_lift(t);
    let report = is_hamiltonian_cycle(&lift, &cert.cycle);
    let oracle = if lift.vertex_count() <= oracle_bound.min(64) {
        Some(brute_force_hamiltonian(&lift, oracle_bound.min(64))?.is_some())
    } else {
        None
    };
    match format {
        Format::Json => print_json(&CycleJson {
            n: t.order(),
            prime,
            construction,
            weights,
            cycle: cycle_json(&cert.cycle),
            left: cert.left.as_ref().map(matching_json),
            right: cert.right.as_ref().map(matching_json),
            oracle_hamiltonian: oracle,
            validation: validation_json(&report),
        }),
        Format::Dot => {
            let mut removed = EdgeSet::new();
            for m in [&cert.left, &cert.right].into_iter().flatten() {
                removed.extend(m.edge_set());
            }
            print_str(&dot_graph(&lift, &cert.edges(), &removed));
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Error::InternalInvariantBroken("emitted cycle failed validation".into()))
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Lift { common, prime } => {
            let (t, _prime) = construction_tree(load(&common)?, &prime)?;
            let lift = build_lift(&t);
            match common.format {
                Format::Json => print_json(&LiftJson {
                    n: t.order(),
                    base_vertices: t.vertex_count(),
                    vertices: lift.vertex_count(),
                    edges: edges_json(&lift.edges()),
                }),
                Format::Dot => print_str(&dot_graph(&lift, &EdgeSet::new(), &EdgeSet::new())),
            }
            Ok(())
        }
        Command::Billiard { common, l, r, d } => {
            let (t, _) = construction_tree(load(&common)?, &PrimeOpt { prime: "auto".into() })?;
            let t = normalize_cut_edges(&t);
            let fam = extended_billiard(&t, BilliardParams { l, r, d })?;
            let lift = build_lift(&t);
            let report = validate_path_family(&lift, &fam);

            #[derive(Serialize)]
            struct BilliardJson {
                n: u64,
                l: u64,
                r: u64,
                d: usize,
                sequence: Vec<usize>,
                paths: Vec<Vec<[u64; 2]>>,
                arrivals: Vec<u64>,
                exit_offsets: Vec<Option<u64>>,
                orders: Vec<Vec<usize>>,
                validation: JsonValidation,
            }
            match common.format {
                Format::Json => print_json(&BilliardJson {
                    n: t.order(),
                    l,
                    r,
                    d,
                    sequence: fam.sequence().to_vec(),
                    paths: fam.paths().iter().map(|p| cycle_json(p)).collect(),
                    arrivals: fam.arrivals().to_vec(),
                    exit_offsets: (1..=fam.sequence().len()).map(|t| fam.exit_offset(t)).collect(),
                    orders: fam.orders().iter().map(|p| p.images().to_vec()).collect(),
                    validation: validation_json(&report),
                }),
                Format::Dot => {
                    let mut highlight = EdgeSet::new();
                    for p in fam.paths() {
                        for w in p.windows(2) {
                            highlight.insert(zlift::lift::LiftEdge::new(w[0], w[1]));
                        }
                    }
                    print_str(&dot_graph(&lift, &highlight, &EdgeSet::new()));
                }
            }
            if report.passed() {
                Ok(())
            } else {
                Err(Error::InternalInvariantBroken("family failed validation".into()))
            }
        }
        Command::TwoFactor { common, d, l, prime } => {
            let parsed = load(&common)?;
            match parsed {
                ParsedTree::Integer(int) => {
                    let p = resolve_prime(&int, &prime)?;
                    let f = anchored_two_factor(&int, p, 0)?;
                    let vt = reduce_mod_prime(&int, p)?;
                    let lift = build_lift(&vt);
                    let report = zlift::oracle::is_two_factor(&lift, &f.factor);

                    #[derive(Serialize)]
                    struct AnchoredJson {
                        prime: u64,
                        anchor_vertex: usize,
                        span: u64,
                        anchor: Vec<[[u64; 2]; 2]>,
                        factor: Vec<[[u64; 2]; 2]>,
                        validation: JsonValidation,
                    }
                    match common.format {
                        Format::Json => print_json(&AnchoredJson {
                            prime: p,
                            anchor_vertex: 0,
                            span: f.span,
                            anchor: edges_json(&f.anchor.edges),
                            factor: edges_json(&f.factor),
                            validation: validation_json(&report),
                        }),
                        Format::Dot => print_str(&dot_graph(&lift, &f.factor, &f.anchor.edges)),
                    }
                    if report.passed() {
                        Ok(())
                    } else {
                        Err(Error::InternalInvariantBroken("factor failed validation".into()))
                    }
                }
                ParsedTree::Voltage(t) => {
                    let d = d.ok_or_else(|| {
                        Error::Parse("two-factor on a voltage path requires --d".into())
                    })?;
                    let t = normalize_cut_edges(&t);
                    let f = two_factor_of_path(&t, d, l)?;
                    let lift = build_lift(&t);
                    let report = zlift::oracle::is_two_factor(&lift, &f.factor);

                    #[derive(Serialize)]
                    struct FactorJson {
                        n: u64,
                        d: usize,
                        l: u64,
                        drift: u64,
                        factor: Vec<[[u64; 2]; 2]>,
                        left: JsonMatching,
                        right: JsonMatching,
                        validation: JsonValidation,
                    }
                    match common.format {
                        Format::Json => print_json(&FactorJson {
                            n: t.order(),
                            d,
                            l,
                            drift: f.drift,
                            factor: edges_json(&f.factor),
                            left: matching_json(&f.left),
                            right: matching_json(&f.right),
                            validation: validation_json(&report),
                        }),
                        Format::Dot => {
                            let mut removed = f.left.edge_set();
                            removed.extend(f.right.edge_set());
                            print_str(&dot_graph(&lift, &f.factor, &removed));
                        }
                    }
                    if report.passed() {
                        Ok(())
                    } else {
                        Err(Error::InternalInvariantBroken("factor failed validation".into()))
                    }
                }
            }
        }
        Command::HamPath { common, l, oracle } => {
            let (t, _) = construction_tree(load(&common)?, &PrimeOpt { prime: "auto".into() })?;
            let t = normalize_cut_edges(&t);
            let cert = ham_cycle_odd_shifting(&t, l)?;
            emit_cycle(&t, None, None, None, &cert, common.format, oracle.oracle_bound)
        }
        Command::HamTree { common, decomposition, oracle } => {
            let (t, _) = construction_tree(load(&common)?, &PrimeOpt { prime: "auto".into() })?;
            let t = normalize_cut_edges(&t);
            let dec = parse_decomposition(&read_file(&decomposition)?)?;
            let weights = verify_decomposition(&t, &dec)?;
            let cert = ham_cycle_from_decomposition(&t, &dec)?;
            let weights_json = JointWeightsJson {
                endpoint_voltage: weights.endpoint_voltage(),
                properly_weighted: weights.properly_weighted(),
                joints: weights.weights().iter().map(|(&v, &w)| (v, w)).collect(),
            };
            emit_cycle(&t, None, None, Some(weights_json), &cert, common.format, oracle.oracle_bound)
        }
        Command::HamPrime { common, prime, oracle } => {
            let parsed = load(&common)?;
            let int = match parsed {
                ParsedTree::Integer(t) => t,
                ParsedTree::Voltage(_) => {
                    return Err(Error::Parse(
                        "ham-prime needs an integer-labeled input (`labels integer`)".into(),
                    ))
                }
            };
            let p = resolve_prime(&int, &prime)?;
            let m = int.vertex_count();
            let leaf_vertex = (0..m)
                .find(|&v| int.neighbors(v).iter().all(|&u| int.loop_label(u) == int.loop_label(v)));
            let (cert, construction) = if let Some(v) = leaf_vertex {
                (ham_cycle_leaf_condition(&int, p, v)?, format!("leaf-condition at vertex {v}"))
            } else if let Some(&(u, v)) = int
                .edges()
                .iter()
                .find(|&&(u, v)| int.loop_label(u) == 1 && int.loop_label(v) == 1)
            {
                (ham_cycle_adjacent_ones(&int, p, u, v)?, format!("adjacent-ones at ({u}, {v})"))
            } else {
                return Err(Error::ConditionNotMet(
                    "no vertex agrees with all neighbors and no adjacent pair of 1-labels".into(),
                ));
            };
            let vt = reduce_mod_prime(&int, p)?;
            emit_cycle(&vt, Some(p), Some(construction), None, &cert, common.format, oracle.oracle_bound)
        }
        Command::LongCycle { common, omega, epsilon, delta } => {
            let (t, _) = construction_tree(load(&common)?, &PrimeOpt { prime: "auto".into() })?;
            let t = normalize_cut_edges(&t);
            let omega = match (omega, epsilon, delta) {
                (Some(w), None, None) => Some(w),
                (None, Some(eps), Some(dl)) => {
                    if (t.max_degree() as u64) > dl {
                        return Err(Error::ParamsRejected(format!(
                            "tree has maximum degree {}, above --delta {dl}",
                            t.max_degree()
                        )));
                    }
                    match check_circumference_params(dl, eps, t.order())? {
                        // A single vertex: its fiber is already the cycle.
                        ParamCheck::TrivialDeltaZero => None,
                        ParamCheck::Accepted { omega, .. } => Some(omega),
                    }
                }
                _ => {
                    return Err(Error::Parse(
                        "long-cycle needs --omega, or --epsilon with --delta".into(),
                    ))
                }
            };
            let cert = match omega {
                Some(w) => long_cycle(&t, w)?,
                None => {
                    let lift = build_lift(&t);
                    let cycle = zlift::lift::trace_cycle(&lift.edges()).ok_or_else(|| {
                        Error::HypothesisViolated(
                            "single-vertex fiber does not form a cycle".into(),
                        )
                    })?;
                    CycleCertificate { cycle, left: None, right: None }
                }
            };
            let budget = CycleBudget::new(omega.unwrap_or(1));
            let lift = build_lift(&t);
            let report = zlift::oracle::simple_cycle_report(&lift, &cert.cycle);

            #[derive(Serialize)]
            struct LongJson {
                n: u64,
                #[serde(skip_serializing_if = "Option::is_none")]
                omega: Option<u64>,
                #[serde(skip_serializing_if = "Option::is_none")]
                s: Option<u64>,
                covered: usize,
                total: usize,
                cycle: Vec<[u64; 2]>,
                validation: JsonValidation,
            }
            match common.format {
                Format::Json => print_json(&LongJson {
                    n: t.order(),
                    omega,
                    s: omega.map(|_| budget.s),
                    covered: cert.cycle.len(),
                    total: lift.vertex_count(),
                    cycle: cycle_json(&cert.cycle),
                    validation: validation_json(&report),
                }),
                Format::Dot => print_str(&dot_graph(&lift, &cert.edges(), &EdgeSet::new())),
            }
            if report.passed() {
                Ok(())
            } else {
                Err(Error::InternalInvariantBroken("cycle failed validation".into()))
            }
        }
        Command::Verify { common, cycle, partial, prime } => {
            let (t, _) = construction_tree(load(&common)?, &prime)?;
            let t = normalize_cut_edges(&t);
            let artifact: serde_json::Value = serde_json::from_str(&read_file(&cycle)?)
                .map_err(|e| Error::Parse(format!("bad cycle artifact: {e}")))?;
            let arr = artifact
                .get("cycle")
                .and_then(|c| c.as_array())
                .ok_or_else(|| Error::Parse("artifact has no `cycle` array".into()))?;
            let mut vs = Vec::with_capacity(arr.len());
            for item in arr {
                let pair = item
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| Error::Parse("cycle entries must be [base, group]".into()))?;
                let base = pair[0].as_u64().ok_or_else(|| Error::Parse("bad base".into()))?;
                let g = pair[1].as_u64().ok_or_else(|| Error::Parse("bad group value".into()))?;
                vs.push(LiftVertex::new(base as usize, g));
            }
            let lift = build_lift(&t);
            let report = if partial {
                zlift::oracle::simple_cycle_report(&lift, &vs)
            } else {
                is_hamiltonian_cycle(&lift, &vs)
            };

            #[derive(Serialize)]
            struct VerifyJson {
                vertices: usize,
                partial: bool,
                validation: JsonValidation,
            }
            print_json(&VerifyJson {
                vertices: vs.len(),
                partial,
                validation: validation_json(&report),
            });
            if report.passed() {
                Ok(())
            } else {
                Err(Error::InternalInvariantBroken("supplied cycle failed validation".into()))
            }
        }
        Command::Experiment { common, trials, seed, dist, construct } => {
            let parsed = load(&common)?;
            let int = match parsed {
                ParsedTree::Integer(t) => t,
                ParsedTree::Voltage(_) => {
                    return Err(Error::Parse(
                        "experiment needs an integer-labeled input (`labels integer`)".into(),
                    ))
                }
            };
            let support: Vec<u64> = dist
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::Parse(format!("bad label `{s}` in --dist")))
                })
                .collect::<Result<_>>()?;
            let stats = random_label_experiment(&int, &support, trials, seed, construct)?;

            #[derive(Serialize)]
            struct ExperimentJson {
                vertices: usize,
                trials: u64,
                seed: u64,
                support: Vec<u64>,
                detector_hits: u64,
                frequency: f64,
                constructions_run: u64,
                constructions_validated: u64,
            }
            print_json(&ExperimentJson {
                vertices: int.vertex_count(),
                trials,
                seed,
                support,
                detector_hits: stats.detector_hits,
                frequency: stats.frequency(),
                constructions_run: stats.constructions_run,
                constructions_validated: stats.constructions_validated,
            });
            Ok(())
        }
    }
}
