use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use setqm::attributes::{measure, measure_given, measure_probs, Attribute};
use setqm::density::{
    entropy_increase, logical_entropy_rho, measure_density, purity, rho_of_partition, rho_of_subset, DensityMatrix,
};
use setqm::dsl::{parse, run, run_forced};
use setqm::dynamics::{double_slit, double_slit_sample};
use setqm::entangle::{bell_violation, counterfactual_joint, state_outcome_table, ProductState};
use setqm::partitions::{dit_set, logical_entropy, shannon_entropy, Partition};
use setqm::prob::{parse_rational, rational_string};
use setqm::qc2::{deutsch, parity_sat, teleport, teleport_given, BooleanFunction};
use setqm::setspace::{born, bracket, ket_table, normalize_label, render_columns, to_basis};
use setqm::{presets, BasisFrame, Error, SubsetKet, Universe};

#[derive(Parser)]
#[command(name = "setqm", version, about = "Quantum mechanics over sets, with exact probabilities")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Universe labels, e.g. `a,b,c` (default `a,b,c`).
    #[arg(long, global = true)]
    universe: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Every ket of the space written in each preset basis.
    KetTable {
        /// Use the two-element universe {a,b} and its three bases.
        #[arg(long)]
        bell: bool,
    },
    /// The bracket ⟨T|S⟩ = |T ∩ S| in the canonical basis.
    Bracket { t: String, s: String },
    /// Born-rule probabilities of a state in a basis.
    Born {
        state: String,
        /// Basis name: U, U' or U''.
        #[arg(long, default_value = "U")]
        frame: String,
    },
    /// Measure an attribute on a state and collapse it.
    Measure {
        /// `a=1,b=2,c=3`, `ordinal`, or `chi:{b,c}`.
        #[arg(long)]
        attr: String,
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Force this eigenvalue instead of sampling.
        #[arg(long)]
        outcome: Option<String>,
    },
    /// Logical and Shannon entropy of a partition such as `{a,b}|{c}`.
    Entropy {
        #[arg(long)]
        partition: String,
    },
    /// Density matrix of a partition or of a state.
    #[command(group(ArgGroup::new("source").required(true).args(["partition", "state"])))]
    Density {
        #[arg(long)]
        partition: Option<String>,
        #[arg(long)]
        state: Option<String>,
    },
    /// Density matrix before and after measuring an attribute.
    MeasureDensity {
        #[arg(long)]
        attr: String,
        /// Pre-measurement state (default: the whole universe).
        #[arg(long)]
        state: Option<String>,
    },
    /// Wall distribution of the double-slit setup.
    DoubleSlit {
        #[arg(long)]
        measure_at_slits: bool,
        /// Also sample this many particles.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// State-outcome table, sequential probabilities and the Bell inequality.
    Bell {
        /// Subset of {a,b}×{a,b}, e.g. `{(a,b),(b,a)}`.
        #[arg(long)]
        state: Option<String>,
    },
    /// Teleport α|0⟩ + β|1⟩ with one classical bit.
    Teleport {
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        alpha: u8,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        beta: u8,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Force Alice's measurement result.
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        outcome: Option<u8>,
    },
    /// Parity SAT (and Deutsch, for arity 1) from a truth table like `1101`.
    ParitySat {
        #[arg(long)]
        table: String,
    },
    /// Run a `.qc2` circuit file.
    Run {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Forced measurement bits, e.g. `0,1`, instead of sampling.
        #[arg(long)]
        outcomes: Option<String>,
    },
}

enum Failure {
    Domain(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Out = Result<(String, Value), Failure>;

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize")
}

fn universe(cli: &Cli) -> Result<Universe, Error> {
    match &cli.universe {
        Some(text) => Universe::parse(text),
        None => Ok(presets::abc()),
    }
}

/// The preset bases for a universe: three for `{a,b,c}` and `{a,b}`, else
/// only the canonical one.
fn frames_for(u: &Universe) -> Vec<BasisFrame> {
    if *u == presets::abc() {
        presets::triad_frames().to_vec()
    } else if *u == presets::ab() {
        presets::bell_frames().to_vec()
    } else {
        vec![BasisFrame::canonical("U", u)]
    }
}

fn find_frame(frames: &[BasisFrame], name: &str) -> Result<BasisFrame, Error> {
    let want = normalize_label(name);
    frames
        .iter()
        .find(|f| f.name() == want)
        .cloned()
        .ok_or(Error::UnknownLabel(name.to_string()))
}

/// A subset written in canonical labels, or in the labels of any preset basis.
fn parse_state(u: &Universe, text: &str) -> Result<SubsetKet, Error> {
    match u.parse_subset(text) {
        Err(Error::UnknownLabel(l)) => {
            for f in frames_for(u) {
                if let Ok(s) = f.universe().parse_subset(text) {
                    return f.to_canonical(&s);
                }
            }
            Err(Error::UnknownLabel(l))
        }
        other => other,
    }
}

fn parse_attr(u: &Universe, text: &str) -> Result<Attribute, Error> {
    if text == "ordinal" {
        Ok(Attribute::ordinal(u))
    } else if let Some(set) = text.strip_prefix("chi:") {
        Ok(Attribute::characteristic(&u.parse_subset(set)?))
    } else {
        Attribute::parse(u, text)
    }
}

fn prob_map<'a>(pairs: impl IntoIterator<Item = (&'a String, &'a setqm::Probability)>) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.clone(), to_json(v));
    }
    Value::Object(m)
}

fn kv_lines(rows: &[(&str, String)]) -> String {
    let w = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k}{}  {v}\n", " ".repeat(w - k.chars().count())))
        .collect()
}

fn density_summary(title: &str, rho: &DensityMatrix) -> String {
    format!(
        "{title}\n{}{}",
        rho.render_text(),
        kv_lines(&[
            ("trace", rho.trace().to_string()),
            ("purity", purity(rho).to_string()),
            ("h", logical_entropy_rho(rho).to_string()),
        ])
    )
}

fn density_json(rho: &DensityMatrix) -> Value {
    json!({
        "matrix": to_json(rho),
        "trace": rational_string(&rho.trace()),
        "purity": to_json(&purity(rho)),
        "logical_entropy": to_json(&logical_entropy_rho(rho)),
    })
}

fn execute(cli: &Cli) -> Out {
    match &cli.command {
        Command::KetTable { bell } => {
            let frames = if *bell {
                presets::bell_frames().to_vec()
            } else {
                frames_for(&universe(cli)?)
            };
            let t = ket_table(frames[0].dim(), &frames)?;
            Ok((t.render_text(), to_json(&t)))
        }
        Command::Bracket { t, s } => {
            let u = universe(cli)?;
            let (tk, sk) = (u.parse_subset(t)?, u.parse_subset(s)?);
            let b = bracket(&tk, &sk)?;
            Ok((
                format!("⟨{tk}|{sk}⟩ = {b}\n"),
                json!({ "t": to_json(&tk), "s": to_json(&sk), "bracket": b }),
            ))
        }
        Command::Born { state, frame } => {
            let u = universe(cli)?;
            let f = find_frame(&frames_for(&u), frame)?;
            let s = parse_state(&u, state)?;
            let coords = to_basis(&s, &f)?;
            let probs = born(&s, &f)?;
            let rows: Vec<Vec<String>> = probs.iter().map(|(l, p)| vec![l.clone(), p.to_string()]).collect();
            let text = format!(
                "{s} = {coords} in {}\n{}",
                f.name(),
                render_columns(&["outcome".into(), "probability".into()], &rows)
            );
            let json = json!({
                "state": to_json(&s),
                "frame": f.name(),
                "coordinates": to_json(&coords),
                "probabilities": prob_map(probs.iter().map(|(l, p)| (l, p))),
            });
            Ok((text, json))
        }
        Command::Measure {
            attr,
            state,
            seed,
            outcome,
        } => {
            let u = universe(cli)?;
            let f = parse_attr(&u, attr)?;
            let s = u.parse_subset(state)?;
            let probs = measure_probs(&f, &s)?;
            let result = match outcome {
                Some(r) => measure_given(&f, &s, parse_rational(r)?)?,
                None => measure(&f, &s, &mut ChaCha8Rng::seed_from_u64(*seed))?,
            };
            let rows: Vec<Vec<String>> = probs
                .iter()
                .map(|(r, p)| vec![r.to_string(), p.to_string(), setqm::attributes::project(&f, *r, &s).map(|k| k.to_string()).unwrap_or_default()])
                .collect();
            let text = format!(
                "{}\nresult    {}\nprob      {}\ncollapsed {}\n",
                render_columns(&["eigenvalue".into(), "probability".into(), "projection".into()], &rows),
                result.eigenvalue,
                result.probability,
                result.post_state
            );
            let mut dist = Map::new();
            for (r, p) in &probs {
                dist.insert(rational_string(r), to_json(p));
            }
            let json = json!({
                "attribute": to_json(&f),
                "state": to_json(&s),
                "distribution": dist,
                "result": to_json(&result),
            });
            Ok((text, json))
        }
        Command::Entropy { partition } => {
            let u = universe(cli)?;
            let p = Partition::parse(&u, partition)?;
            let h = logical_entropy(&p);
            let sh = shannon_entropy(&p);
            let dits = dit_set(&p).len();
            let text = kv_lines(&[
                ("partition", p.to_string()),
                ("dits", dits.to_string()),
                ("h", h.to_string()),
                ("H", format!("{sh:.6} bits")),
            ]);
            let json = json!({
                "partition": to_json(&p),
                "dits": dits,
                "logical_entropy": to_json(&h),
                "shannon_entropy": sh,
            });
            Ok((text, json))
        }
        Command::Density { partition, state } => {
            let u = universe(cli)?;
            let (title, rho) = match (partition, state) {
                (Some(p), _) => {
                    let p = Partition::parse(&u, p)?;
                    (format!("ρ({p})"), rho_of_partition(&p))
                }
                (None, Some(s)) => {
                    let s = u.parse_subset(s)?;
                    (format!("ρ({s})"), rho_of_subset(&s)?)
                }
                (None, None) => unreachable!("clap requires one source"),
            };
            Ok((density_summary(&title, &rho), density_json(&rho)))
        }
        Command::MeasureDensity { attr, state } => {
            let u = universe(cli)?;
            let f = parse_attr(&u, attr)?;
            let s = match state {
                Some(s) => u.parse_subset(s)?,
                None => u.full(),
            };
            let before = rho_of_subset(&s)?;
            let after = measure_density(&f, &before)?;
            let gain = entropy_increase(&before, &after)?;
            let text = format!(
                "{}\n{}\nentropy increase  {gain}\n",
                density_summary("before", &before),
                density_summary("after", &after)
            );
            let json = json!({
                "before": density_json(&before),
                "after": density_json(&after),
                "entropy_increase": to_json(&gain),
            });
            Ok((text, json))
        }
        Command::DoubleSlit {
            measure_at_slits,
            trials,
            seed,
        } => {
            let cfg = presets::double_slit();
            let dist = double_slit(&cfg, *measure_at_slits)?;
            let mut header = vec!["position".to_string(), "probability".to_string()];
            let counts = match trials {
                Some(n) => {
                    header.push("hits".into());
                    Some(double_slit_sample(&cfg, *measure_at_slits, *n, &mut ChaCha8Rng::seed_from_u64(*seed))?)
                }
                None => None,
            };
            let rows: Vec<Vec<String>> = dist
                .iter()
                .enumerate()
                .map(|(i, (l, p))| {
                    let mut r = vec![l.clone(), p.to_string()];
                    if let Some(c) = &counts {
                        r.push(c[i].1.to_string());
                    }
                    r
                })
                .collect();
            let mut json = json!({
                "measure_at_slits": measure_at_slits,
                "distribution": prob_map(dist.iter().map(|(l, p)| (l, p))),
            });
            if let Some(c) = &counts {
                json["hits"] = c.iter().map(|(l, n)| (l.clone(), json!(n))).collect::<Map<_, _>>().into();
            }
            Ok((render_columns(&header, &rows), json))
        }
        Command::Bell { state } => {
            let pu = presets::bell_product();
            let s: ProductState = match state {
                Some(text) => pu.parse_state(text)?,
                None => presets::bell_state(),
            };
            let frames = presets::bell_frames();
            let u = presets::ab();
            let states = [u.full(), u.subset(&["b"])?, u.subset(&["a"])?];
            let table = state_outcome_table(&states, &frames)?;
            let report = bell_violation(&s)?;
            let joint = counterfactual_joint(&s, &frames)?;
            let label = |i: usize, j: usize| frames[i].universe().label(j).to_string();
            let triple = format!("Pr({},{},{})", label(0, 0), label(1, 0), label(2, 0));
            let mut lines = vec![("state", s.to_string())];
            for (name, p) in &report.terms {
                lines.push((name.as_str(), p.to_string()));
            }
            let counterfactual = format!("{} = {}", triple, joint.prob(0, 0, 0));
            lines.push(("counterfactual", counterfactual));
            let text = format!(
                "{}\n{}{}\n",
                table.render_text(),
                kv_lines(&lines),
                report.summary()
            );
            let json = json!({
                "state": to_json(&s),
                "outcome_table": to_json(&table),
                "report": to_json(&report),
                "counterfactual": {
                    triple: to_json(&joint.prob(0, 0, 0)),
                    "marginals": to_json(&joint.marginals),
                    "inequality_holds": joint.inequality_holds(),
                },
            });
            Ok((text, json))
        }
        Command::Teleport {
            alpha,
            beta,
            seed,
            outcome,
        } => {
            let (a, b) = (*alpha == 1, *beta == 1);
            let t = match outcome {
                Some(m) => teleport_given(a, b, *m)?,
                None => teleport(a, b, &mut ChaCha8Rng::seed_from_u64(*seed))?,
            };
            let text = kv_lines(&[
                ("input", t.input.to_string()),
                ("φ0", t.phi0.to_string()),
                ("φ1", t.phi1.to_string()),
                ("φ2", t.phi2.to_string()),
                ("M", format!("{} (probability {})", t.measured, t.probability)),
                ("collapsed", t.collapsed.to_string()),
                ("Bob receives", t.bob_received.to_string()),
                ("Bob applies", if t.measured == 1 { "X".into() } else { "I".into() }),
                ("Bob holds", t.bob_final.to_string()),
                ("success", t.success.to_string()),
            ]);
            Ok((text, to_json(&t)))
        }
        Command::ParitySat { table } => {
            let f = BooleanFunction::from_bits(table)?;
            let r = parity_sat(&f)?;
            let plural = if r.lines == 1 { "" } else { "s" };
            let mut text = format!("f = {} (arity {}, {} line{plural})\n", r.table, r.arity, r.lines);
            for s in &r.steps {
                text += &format!("  {} on {} → {}\n", s.gate, s.lines, s.state);
            }
            let mut rows = vec![
                ("measured", format!("|{}⟩", r.measured_ket)),
                ("slices", r.slice_label.clone()),
                ("parity", if r.parity == 1 { "odd".into() } else { "even".into() }),
                ("E_f uses", r.ef_applications.to_string()),
            ];
            let mut json = to_json(&r);
            if f.arity() == 1 {
                let d = deutsch(&f)?;
                rows.push(("deutsch", to_json(&d).as_str().unwrap_or_default().to_string()));
                json["deutsch"] = to_json(&d);
            }
            text += &kv_lines(&rows);
            Ok((text, json))
        }
        Command::Run { file, seed, outcomes } => {
            let src = std::fs::read_to_string(file).map_err(|e| Failure::Io(format!("{}: {e}", file.display())))?;
            let ast = parse(&src).map_err(Error::from)?;
            let rec = match outcomes {
                Some(bits) => {
                    let forced = bits
                        .split(',')
                        .map(|b| match b.trim() {
                            "0" => Ok(0),
                            "1" => Ok(1),
                            other => Err(Error::Invalid(format!("outcome `{other}` is not a bit"))),
                        })
                        .collect::<Result<Vec<u8>, _>>()?;
                    run_forced(&ast, &forced)?
                }
                None => run(&ast, *seed)?,
            };
            let mut text = format!("initial  {}\n", rec.initial);
            for s in &rec.steps {
                text += &format!("{:<16} → {}", s.statement, s.state);
                if let (Some(o), Some(p)) = (&s.outcome, &s.probability) {
                    text += &format!("   [read {o}, probability {p}]");
                }
                if let Some(fired) = s.applied {
                    text += if fired { "   [applied]" } else { "   [skipped]" };
                }
                text.push('\n');
            }
            text += &format!("final    {}\n", rec.final_state);
            Ok((text, to_json(&rec)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok((text, json)) => {
            let body = match cli.format {
                Format::Table => text,
                Format::Json => serde_json::to_string_pretty(&json).expect("valid json") + "\n",
            };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = std::io::stdout().write_all(body.as_bytes());
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: Io: {msg}");
            ExitCode::from(1)
        }
    }
}
