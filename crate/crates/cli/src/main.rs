//! `lsys`: JSON in, JSON certificates out.
//!
//! Exit codes: 0 on success, 1 on a checked failure (the certificate is on
//! stdout), 2 on malformed input or usage errors.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use lambda_systems::abelian::{build_h, divisibility_evidence, NonfreeSpec};
use lambda_systems::freeness::{
    find_reshuffling, find_reshuffling_backtracking, find_transversal, k_free_check, ReshuffleOutcome,
};
use lambda_systems::int::rational_to_string;
use lambda_systems::lambda_core::{
    check_beautiful, node_key, transform_disjoint, transform_tree, LambdaDoc, Node, Transformed,
};
use lambda_systems::uniformization::{lemma2_table, lemma3_table, lemma4_table, simulate, t_sequence, LadderInstance};
use lambda_systems::whitehead::{
    build_g, coloring_from_json, enumerate_basis, solve_witness, verify_basis, verify_infeasibility, verify_witness,
    WhiteheadDoc, WhiteheadSystem, WitnessDoc, WitnessOutcome,
};

const SCHEMA: &str = "lambda-systems/cli/1";

#[derive(Parser)]
#[command(
    name = "lsys",
    version,
    about = "Finite checks on lambda-systems, Whitehead systems and ladder uniformization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a skeleton and its family against the structural clauses.
    Validate(DocArg),
    /// Transversal of the family, or a Hall violator; with --k, k-freeness.
    CheckFree {
        #[command(flatten)]
        doc: DocArg,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Search for a reshuffling order.
    Reshuffle {
        #[command(flatten)]
        doc: DocArg,
        #[arg(long, allow_hyphen_values = true)]
        alpha: i64,
        /// Only finals with first coordinate below beta are ordered.
        #[arg(long)]
        beta: Option<i64>,
        #[arg(long, default_value_t = 1)]
        fresh: usize,
        /// Use depth-first search limited to this many nodes.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Truncated presentation of the nonfree rank-(r+1) group.
    BuildGroup {
        #[arg(long)]
        spec: PathBuf,
        /// Largest m for the divisibility evidence.
        #[arg(long, default_value_t = 5)]
        m: usize,
    },
    /// Presentation of the group G of a Whitehead system.
    #[command(name = "build-G")]
    BuildG(SystemArgs),
    /// Solve for a witness (f, a) for the coloring c.
    SolveWitness {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        c: PathBuf,
    },
    /// Candidate basis of G_beta / G_(alpha+1), checked in the quotient.
    Basis {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, allow_hyphen_values = true)]
        alpha: i64,
        #[arg(long)]
        beta: i64,
    },
    /// Residue tables for uniformization.
    UnifTable {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        r: usize,
        /// Block index for the fixed-prime tables.
        #[arg(long)]
        i: Option<usize>,
        /// Coefficients: one value per k, or with --i one comma list per k
        /// separated by ';'.
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
    },
    /// Run the uniformization chain on a ladder instance.
    UnifSim {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Make carriers disjoint or enumerations tree-like.
    Transform {
        #[command(flatten)]
        doc: DocArg,
        #[arg(long, value_enum)]
        kind: Kind,
    },
}

#[derive(Args)]
struct DocArg {
    /// Skeleton and family document.
    file: PathBuf,
}

#[derive(Args)]
struct SystemArgs {
    #[arg(long)]
    system: PathBuf,
    /// Keep only finals whose first coordinate is listed (comma separated).
    #[arg(long)]
    variant: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Disjoint,
    Tree,
}

#[derive(Serialize)]
struct RunManifest {
    subcommand: &'static str,
    inputs: Vec<String>,
    params: BTreeMap<&'static str, String>,
    schema: &'static str,
    seed: Option<u64>,
}

struct Output {
    manifest: RunManifest,
    result: Value,
    passed: bool,
}

impl Output {
    fn new(subcommand: &'static str, inputs: &[&Path]) -> Self {
        Output {
            manifest: RunManifest {
                subcommand,
                inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
                params: BTreeMap::new(),
                schema: SCHEMA,
                seed: None,
            },
            result: Value::Null,
            passed: true,
        }
    }

    fn param(mut self, name: &'static str, value: Option<impl ToString>) -> Self {
        if let Some(v) = value {
            self.manifest.params.insert(name, v.to_string());
        }
        self
    }

    fn done(mut self, passed: bool, result: impl Serialize) -> Result<Self> {
        self.passed = passed;
        self.result = serde_json::to_value(result)?;
        Ok(self)
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_system(args: &SystemArgs) -> Result<(WhiteheadSystem, Option<lambda_systems::freeness::ReshufflingOrder>)> {
    let (ws, order) = WhiteheadDoc::from_json(&read(&args.system)?)?;
    match &args.variant {
        None => Ok((ws, order)),
        Some(list) => {
            let allowed: BTreeSet<u32> = list
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| anyhow!("--variant expects integers, got {x:?}")))
                .collect::<Result<_>>()?;
            Ok((ws.variant(&allowed), order.filter(|o| o.order.iter().all(|z| allowed.contains(&z[0])))))
        }
    }
}

fn keys(nodes: &[Node]) -> Vec<String> {
    nodes.iter().map(|n| node_key(n)).collect()
}

fn parse_ints(list: &str) -> Result<Vec<BigInt>> {
    list.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse().map_err(|_| anyhow!("not an integer: {x:?}")))
        .collect()
}

fn run(command: Command) -> Result<Output> {
    match command {
        Command::Validate(DocArg { file }) => {
            let (sys, fam) = LambdaDoc::from_json(&read(&file)?)?;
            let report = sys.validate();
            let family = fam.validate(&sys);
            let beautiful = check_beautiful(&sys, &fam);
            let ok = report.is_valid() && family.is_empty();
            Output::new("validate", &[&file])
                .done(ok, json!({ "valid": ok, "skeleton": report, "family": family, "beautiful": beautiful }))
        }
        Command::CheckFree { doc, k } => {
            let (_, fam) = LambdaDoc::from_json(&read(&doc.file)?)?;
            let index = keys(&fam.finals());
            let sets = fam.sets();
            let out = Output::new("check-free", &[&doc.file]).param("k", k);
            match k {
                Some(k) => {
                    let res = k_free_check(&sets, k);
                    out.done(res.passes(), json!({ "index": index, "k_free": res }))
                }
                None => {
                    let res = find_transversal(&sets);
                    out.done(res.is_free(), json!({ "index": index, "transversal": res }))
                }
            }
        }
        Command::Reshuffle { doc, alpha, beta, fresh, budget } => {
            let (_, fam) = LambdaDoc::from_json(&read(&doc.file)?)?;
            let index: Vec<Node> =
                fam.finals().into_iter().filter(|z| beta.is_none_or(|b| i64::from(z[0]) < b)).collect();
            let outcome = match budget {
                Some(n) => find_reshuffling_backtracking(&fam, &index, alpha, fresh, n),
                None => find_reshuffling(&fam, &index, alpha, fresh),
            };
            Output::new("reshuffle", &[&doc.file])
                .param("alpha", Some(alpha))
                .param("beta", beta)
                .param("fresh", Some(fresh))
                .param("budget", budget)
                .done(
                    matches!(outcome, ReshuffleOutcome::Found { .. }),
                    json!({ "index": keys(&index), "outcome": outcome }),
                )
        }
        Command::BuildGroup { spec, m } => {
            let s: NonfreeSpec = serde_json::from_str(&read(&spec)?).context("malformed group specification")?;
            let h = build_h(&s)?;
            let m_max = m.min(s.relation_count().saturating_sub(1));
            let evidence = divisibility_evidence(&s, m_max)?;
            let factors: Vec<String> = h.invariant_factors().iter().map(ToString::to_string).collect();
            Output::new("build-group", &[&spec]).param("m", Some(m_max)).done(
                true,
                json!({
                    "presentation": h.to_doc(),
                    "invariant_factors": factors,
                    "free": h.is_free(),
                    "rank": h.rank(),
                    "evidence": evidence,
                    "evidence_verified": evidence.verify(&s),
                }),
            )
        }
        Command::BuildG(args) => {
            let (ws, _) = load_system(&args)?;
            let g = build_g(&ws)?;
            let factors: Vec<String> = g.invariant_factors().iter().map(ToString::to_string).collect();
            Output::new("build-G", &[&args.system]).param("variant", args.variant.as_ref()).done(
                true,
                json!({
                    "presentation": g.to_doc(),
                    "invariant_factors": factors,
                    "free": g.is_free(),
                    "rank": g.rank(),
                    "levels_disjoint": ws.levels_disjoint(),
                }),
            )
        }
        Command::SolveWitness { system, c } => {
            let (ws, _) = load_system(&system)?;
            let coloring = coloring_from_json(&read(&c)?)?;
            let out = Output::new("solve-witness", &[&system.system, &c]).param("variant", system.variant.as_ref());
            match solve_witness(&ws, &coloring)? {
                WitnessOutcome::Feasible(w) => {
                    let check = verify_witness(&ws, &coloring, &w)?;
                    out.done(true, json!({ "feasible": true, "witness": WitnessDoc::from_witness(&w), "check": check }))
                }
                WitnessOutcome::Infeasible(cert) => {
                    let verified = verify_infeasibility(&ws, &coloring, &cert)?;
                    let rows: Vec<String> =
                        ws.equations().iter().map(|(z, m)| format!("w[{},{m}]", node_key(z))).collect();
                    let y: Vec<String> = cert.y.iter().map(rational_to_string).collect();
                    out.done(
                        false,
                        json!({ "feasible": false, "certificate": { "rows": rows, "y": y }, "verified": verified }),
                    )
                }
            }
        }
        Command::Basis { system, alpha, beta } => {
            let (ws, given) = load_system(&system)?;
            let order = match given {
                Some(o) => o,
                None => {
                    let index: Vec<Node> = ws.finals().into_iter().filter(|z| i64::from(z[0]) < beta).collect();
                    match find_reshuffling(&ws.family, &index, alpha, 0) {
                        ReshuffleOutcome::Found { order } => order,
                        other => bail!("no reshuffling order for alpha = {alpha}: {}", serde_json::to_string(&other)?),
                    }
                }
            };
            let cand = enumerate_basis(&ws, Some(&order), alpha, beta)?;
            let report = verify_basis(&cand);
            let dropped = cand.dropped()?;
            Output::new("basis", &[&system.system])
                .param("alpha", Some(alpha))
                .param("beta", Some(beta))
                .param("variant", system.variant.as_ref())
                .done(
                    report.is_basis,
                    json!({
                        "order": order,
                        "z": cand.z,
                        "atoms": cand.atoms,
                        "dropped": dropped,
                        "report": report,
                    }),
                )
        }
        Command::UnifTable { p, r, i, mu } => {
            let out = Output::new("unif-table", &[])
                .param("p", Some(p))
                .param("r", Some(r))
                .param("i", i)
                .param("mu", mu.as_ref());
            match i {
                Some(i) => {
                    let rows: Vec<Vec<BigInt>> = match &mu {
                        Some(s) if r > 0 => s.split(';').map(parse_ints).collect::<Result<_>>()?,
                        _ => Vec::new(),
                    };
                    if rows.len() != r {
                        bail!("--mu needs {r} ';'-separated rows");
                    }
                    let t = t_sequence(p, r, i)?;
                    let rows: Vec<Vec<BigInt>> = rows
                        .into_iter()
                        .map(|row| {
                            if row.len() < t[i] {
                                bail!("each --mu row needs t_{i} = {} values", t[i]);
                            }
                            Ok(row[..t[i]].to_vec())
                        })
                        .collect::<Result<_>>()?;
                    out.done(true, json!({ "t": t, "table": lemma3_table(p, r, &rows, i, &t)? }))
                }
                None if r == 0 && mu.is_none() => out.done(true, json!({ "table": lemma2_table(p)? })),
                None => {
                    let values = mu.as_deref().map(parse_ints).transpose()?.unwrap_or_default();
                    if values.len() != r {
                        bail!("--mu needs {r} values");
                    }
                    out.done(true, json!({ "table": lemma4_table(p, r, &values)? }))
                }
            }
        }
        Command::UnifSim { instance } => {
            let inst = LadderInstance::from_json(&read(&instance)?)?;
            let report = simulate(&inst)?;
            Output::new("unif-sim", &[&instance]).done(report.recovered, report)
        }
        Command::Transform { doc, kind } => {
            let text = read(&doc.file)?;
            let raw: Value = serde_json::from_str(&text).context("malformed JSON")?;
            // a Whitehead document carries its q, d and pins across unchanged
            let ws = match raw.get("lambda") {
                Some(_) => Some(WhiteheadDoc::from_json(&text)?.0),
                None => None,
            };
            let (sys, fam) = match &ws {
                Some(ws) => (ws.skeleton.clone(), ws.family.clone()),
                None => LambdaDoc::from_json(&text)?,
            };
            let (name, t): (&str, Transformed) = match kind {
                Kind::Disjoint => ("disjoint", transform_disjoint(&sys, &fam)),
                Kind::Tree => ("tree", transform_tree(&sys, &fam)),
            };
            let renaming: Vec<(String, String)> =
                t.renaming.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
            let document = match ws {
                Some(ws) => {
                    let moved = WhiteheadSystem { skeleton: t.skeleton.clone(), family: t.family.clone(), ..ws };
                    serde_json::to_value(WhiteheadDoc::from_parts(&moved, None))?
                }
                None => serde_json::to_value(LambdaDoc::from_parts(&t.skeleton, &t.family))?,
            };
            Output::new("transform", &[&doc.file]).param("kind", Some(name)).done(
                true,
                json!({ "document": document, "renaming": renaming, "relabeling": t.is_injective_on_family() }),
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            let doc = json!({ "manifest": out.manifest, "result": out.result });
            let text = serde_json::to_string_pretty(&doc).expect("values serialize");
            // a closed pipe is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
