//! chiforge: exact chromatic/clique oracles, P5-free generators, certified
//! structure-lemma procedures, certificate verification, and campaigns.
//!
//! Exit codes: 0 success/accept, 1 reject/fail (or P5 found for p5check),
//! 2 usage error.

use anyhow::{anyhow, Context, Result};
use chiforge_core::campaign::{
    extremal_scan, run_campaign, run_lemma, verify_measure_axioms, CampaignSpec, TrialStatus,
    REGISTERED_LEMMAS,
};
use chiforge_core::cert::Certificate;
use chiforge_core::gen::{self, FamilySpec, GenSpec};
use chiforge_core::graph::Graph;
use chiforge_core::increment::{ledger, trichotomy};
use chiforge_core::lemmas::Mode;
use chiforge_core::oracle::{budget_from_env, ExtremalKind, Oracle};
use chiforge_core::verify::{verify_certificate, Verdict};
use chiforge_core::{graph6, VertexSet};
use clap::{Args, Parser, Subcommand};
use std::io::Read;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "chiforge", version, about = "P5-free chromatic structure engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GraphInput {
    /// graph6 string, or a path to a file containing one line of graph6;
    /// `-` (or omitted) reads from stdin.
    #[arg(long, global = true)]
    graph: Option<String>,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "relaxed")]
    mode: String,
    /// Exact-solve vertex budget (env CHIFORGE_SOLVE_BUDGET overrides the
    /// default of 30; this flag overrides both).
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory (campaign) or file (scan, gen).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Emit P5-free instances as graph6 lines, one per instance.
    Gen {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 0.35)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// rejection | repair
        #[arg(long, default_value = "repair")]
        strategy: String,
        /// Structured family instead: complete_multipartite:2,2,2 |
        /// split:4,4 | cograph:9 | cycle5 | complete:5 | edgeless:4
        #[arg(long)]
        family: Option<String>,
    },
    /// Exact chromatic number with an optimal proper coloring.
    Chi {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        graph: GraphInput,
    },
    /// Exact clique number with witness.
    Omega {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        graph: GraphInput,
    },
    /// Exact stability number with witness.
    Alpha {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        graph: GraphInput,
    },
    /// Induced-P5 detection; exits 1 with the witness tuple when not P5-free.
    P5check {
        #[command(flatten)]
        graph: GraphInput,
    },
    /// Run one lemma procedure and print its certificate JSON.
    Lemma {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        graph: GraphInput,
        /// One of the registered lemma ids.
        id: String,
        /// Pivot vertex for the bipartite-style procedures.
        #[arg(long)]
        pivot: Option<usize>,
        /// Comma-separated vertex lists for the bipartite-style procedures.
        #[arg(long)]
        set_a: Option<String>,
        #[arg(long)]
        set_b: Option<String>,
        /// Recursion depth for grow_anticomplete.
        #[arg(long, default_value_t = 0)]
        s_depth: u32,
    },
    /// Re-verify a certificate JSON against a graph.
    Verify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        graph: GraphInput,
        cert: PathBuf,
    },
    /// Run a verification campaign for one lemma.
    Campaign {
        #[command(flatten)]
        common: Common,
        id: String,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 0.35)]
        p: f64,
        /// Record wall-clock millis (breaks byte-determinism of reports).
        #[arg(long)]
        timing: bool,
    },
    /// Print the exponent chain.
    Ledger,
    /// Exploratory chi-vs-omega scan as CSV.
    Scan {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 0.35)]
        p: f64,
    },
    /// Measure-axiom suite for chi.
    Axioms {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 200)]
        constructed: usize,
        #[arg(long, default_value_t = 500)]
        random_pairs: usize,
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
    /// Re-run a persisted campaign counterexample from its JSON sidecar.
    Replay { sidecar: PathBuf },
}

fn read_graph(input: &GraphInput) -> Result<Graph> {
    let text = match input.graph.as_deref() {
        None | Some("-") => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            buf
        }
        Some(s) if std::path::Path::new(s).exists() => std::fs::read_to_string(s)?,
        Some(s) => s.to_string(),
    };
    let line = text
        .lines()
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| anyhow!("no graph6 line in input"))?;
    Ok(graph6::decode(line.trim())?)
}

fn parse_mode(s: &str) -> Result<Mode> {
    s.parse().map_err(|e: String| anyhow!(e))
}

fn budget_of(common: &Common) -> usize {
    common.budget.unwrap_or_else(budget_from_env)
}

fn parse_vertex_list(s: &str, n: usize) -> Result<VertexSet> {
    let mut out = VertexSet::empty(n);
    for tok in s.split(',').filter(|t| !t.trim().is_empty()) {
        let v: usize = tok.trim().parse().context("vertex index")?;
        if v >= n {
            return Err(anyhow!("vertex {v} out of range for n = {n}"));
        }
        out.insert(v);
    }
    Ok(out)
}

fn parse_family(s: &str) -> Result<FamilySpec> {
    let (name, args) = match s.split_once(':') {
        Some((n, a)) => (n, a),
        None => (s, ""),
    };
    let nums = || -> Result<Vec<usize>> {
        args.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse().context("family parameter"))
            .collect()
    };
    Ok(match name {
        "complete_multipartite" => FamilySpec::CompleteMultipartite { parts: nums()? },
        "split" => {
            let v = nums()?;
            FamilySpec::Split {
                clique: *v.first().ok_or_else(|| anyhow!("split:<clique>,<stable>"))?,
                stable: *v.get(1).ok_or_else(|| anyhow!("split:<clique>,<stable>"))?,
            }
        }
        "cograph" => FamilySpec::Cograph {
            n: *nums()?.first().ok_or_else(|| anyhow!("cograph:<n>"))?,
        },
        "cycle5" => FamilySpec::Cycle5,
        "complete" => FamilySpec::Complete {
            n: *nums()?.first().ok_or_else(|| anyhow!("complete:<n>"))?,
        },
        "edgeless" => FamilySpec::Edgeless {
            n: *nums()?.first().ok_or_else(|| anyhow!("edgeless:<n>"))?,
        },
        other => return Err(anyhow!("unknown family `{other}`")),
    })
}

#[derive(serde::Serialize, serde::Deserialize)]
struct ReplaySidecar {
    lemma: String,
    seed: u64,
    trial: usize,
    n: usize,
    p: f64,
    mode: String,
    budget: usize,
    graph6: String,
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Gen {
            common,
            n,
            p,
            count,
            strategy,
            family,
        } => {
            let mut lines = Vec::with_capacity(count);
            for i in 0..count {
                let g = match &family {
                    Some(f) => gen::family_graph(&parse_family(f)?, common.seed, i as u64)?,
                    None => {
                        let spec = match strategy.as_str() {
                            "rejection" => GenSpec::rejection(n, p, common.seed),
                            "repair" => GenSpec::repair(n, p, common.seed),
                            other => return Err(anyhow!("unknown strategy `{other}`")),
                        }
                        .with_stream(i as u64);
                        gen::random_p5free(&spec)?
                    }
                };
                lines.push(graph6::encode(&g));
            }
            let out = lines.join("\n") + "\n";
            match &common.out {
                Some(path) => std::fs::write(path, out)?,
                None => print!("{out}"),
            }
            Ok(0)
        }
        Command::Chi { common, graph } => {
            let g = read_graph(&graph)?;
            let o = Oracle::with_budget(g, budget_of(&common));
            let (k, w) = o.chi_witness(&o.graph().full_set())?;
            let colors: std::collections::BTreeMap<String, usize> =
                w.colors.iter().map(|(v, c)| (v.to_string(), *c)).collect();
            println!(
                "{}",
                serde_json::json!({ "chi": k, "coloring": colors })
            );
            Ok(0)
        }
        Command::Omega { common, graph } => extremal_cmd(&common, &graph, ExtremalKind::Clique),
        Command::Alpha { common, graph } => extremal_cmd(&common, &graph, ExtremalKind::Stable),
        Command::P5check { graph } => {
            let g = read_graph(&graph)?;
            match g.find_induced_p5() {
                None => {
                    println!("{}", serde_json::json!({ "p5_free": true }));
                    Ok(0)
                }
                Some(w) => {
                    println!(
                        "{}",
                        serde_json::json!({ "p5_free": false, "witness": w })
                    );
                    Ok(1)
                }
            }
        }
        Command::Lemma {
            common,
            graph,
            id,
            pivot,
            set_a,
            set_b,
            s_depth,
        } => {
            let g = read_graph(&graph)?;
            let mode = parse_mode(&common.mode)?;
            let o = Oracle::with_budget(g.clone(), budget_of(&common));
            let n = g.n();
            let inst = chiforge_core::campaign::TrialInstance {
                graph: g,
                pivot,
                a: set_a.as_deref().map(|s| parse_vertex_list(s, n)).transpose()?,
                b: set_b.as_deref().map(|s| parse_vertex_list(s, n)).transpose()?,
                s_param: s_depth,
            };
            if !REGISTERED_LEMMAS.contains(&id.as_str()) {
                return Err(anyhow!(
                    "unknown lemma `{id}`; registered: {REGISTERED_LEMMAS:?}"
                ));
            }
            let outcome = run_lemma(&id, &o, &inst, mode)?;
            println!("{}", outcome.cert.to_json());
            if id == "main_trichotomy" {
                let report = trichotomy::account_p5_bound(&o, &outcome)?;
                eprintln!("{}", serde_json::to_string(&report)?);
            }
            Ok(0)
        }
        Command::Verify { common, graph, cert } => {
            let g = read_graph(&graph)?;
            let o = Oracle::with_budget(g, budget_of(&common));
            let cert = Certificate::from_json(&std::fs::read_to_string(&cert)?)?;
            match verify_certificate(&o, &cert)? {
                Verdict::Accept => {
                    println!("{}", serde_json::json!({ "verdict": "accept" }));
                    Ok(0)
                }
                Verdict::Reject(reason) => {
                    println!(
                        "{}",
                        serde_json::json!({ "verdict": "reject", "reason": reason })
                    );
                    Ok(1)
                }
            }
        }
        Command::Campaign {
            common,
            id,
            trials,
            n,
            p,
            timing,
        } => {
            let mode = parse_mode(&common.mode)?;
            let spec = CampaignSpec {
                lemma: id,
                trials,
                seed: common.seed,
                mode,
                n,
                p,
                budget: budget_of(&common),
                workers: common.workers,
                timing,
            };
            let report = run_campaign(&spec)?;
            println!("{}", report.to_json());
            if let Some(dir) = &common.out {
                std::fs::create_dir_all(dir)?;
                std::fs::write(dir.join("report.json"), report.to_json())?;
                std::fs::write(dir.join("report.csv"), report.to_csv())?;
            }
            // Counterexamples persist under results/ (or --out) for replay.
            if report.fail > 0 {
                let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("results"));
                let cx_dir = dir.join("counterexamples");
                for rec in report
                    .records
                    .iter()
                    .filter(|r| r.status == TrialStatus::Fail)
                {
                    std::fs::create_dir_all(&cx_dir)?;
                    let stem = format!("{}-{}", spec.lemma, rec.instance_id);
                    std::fs::write(cx_dir.join(format!("{stem}.g6")), &rec.graph6)?;
                    let sidecar = ReplaySidecar {
                        lemma: spec.lemma.clone(),
                        seed: spec.seed,
                        trial: rec.instance_id,
                        n: spec.n,
                        p: spec.p,
                        mode: common.mode.clone(),
                        budget: spec.budget,
                        graph6: rec.graph6.clone(),
                    };
                    std::fs::write(
                        cx_dir.join(format!("{stem}.json")),
                        serde_json::to_string_pretty(&sidecar)?,
                    )?;
                }
            }
            eprintln!(
                "campaign {}: pass={} fail={} error={} waived={}",
                report.lemma, report.pass, report.fail, report.error, report.waived
            );
            Ok(if report.fail > 0 { 1 } else { 0 })
        }
        Command::Ledger => {
            let l = ledger();
            println!("{}", serde_json::to_string(&l)?);
            eprintln!(
                "a1 = {}, b = 6*a1^3 = {}, a' = 16b^2+24b = {}, d = 32a'+96 = {}, d >= 160: {}",
                l.a1,
                l.b_mid,
                l.a2,
                l.d,
                l.d >= 160
            );
            Ok(0)
        }
        Command::Scan {
            common,
            trials,
            n,
            p,
        } => {
            let report = extremal_scan(common.seed, trials, n, p, budget_of(&common), common.workers)?;
            let csv = report.to_csv();
            match &common.out {
                Some(path) => std::fs::write(path, &csv)?,
                None => print!("{csv}"),
            }
            eprintln!(
                "max observed exponent: {}",
                report
                    .max_exponent
                    .map(|e| format!("{e:.6}"))
                    .unwrap_or_else(|| "n/a".into())
            );
            Ok(0)
        }
        Command::Axioms {
            common,
            constructed,
            random_pairs,
            n,
        } => {
            let report =
                verify_measure_axioms(common.seed, constructed, random_pairs, n, budget_of(&common))?;
            println!("{}", serde_json::to_string(&report)?);
            Ok(if report.fail > 0 { 1 } else { 0 })
        }
        Command::Replay { sidecar } => {
            let sc: ReplaySidecar =
                serde_json::from_str(&std::fs::read_to_string(&sidecar)?)?;
            let mode = parse_mode(&sc.mode)?;
            let spec = CampaignSpec {
                lemma: sc.lemma.clone(),
                trials: sc.trial + 1,
                seed: sc.seed,
                mode,
                n: sc.n,
                p: sc.p,
                budget: sc.budget,
                workers: Some(1),
                timing: false,
            };
            let inst = chiforge_core::campaign::generate_instance(&sc.lemma, &spec, sc.trial)?;
            let got = graph6::encode(&inst.graph);
            if got != sc.graph6 {
                return Err(anyhow!(
                    "replayed instance mismatch: sidecar has {}, regenerated {got}",
                    sc.graph6
                ));
            }
            let o = Oracle::with_budget(inst.graph.clone(), sc.budget);
            match run_lemma(&sc.lemma, &o, &inst, mode) {
                Ok(outcome) => {
                    let verdict = verify_certificate(&o, &outcome.cert)?;
                    println!(
                        "{}",
                        serde_json::json!({
                            "outcome": outcome.cert.kind,
                            "verdict": match &verdict {
                                Verdict::Accept => "accept".to_string(),
                                Verdict::Reject(r) => format!("reject: {r}"),
                            },
                            "certificate": outcome.cert,
                        })
                    );
                    Ok(if verdict.is_accept() { 0 } else { 1 })
                }
                Err(e) => {
                    println!("{}", serde_json::json!({ "error": e.to_string() }));
                    Ok(1)
                }
            }
        }
    }
}

fn extremal_cmd(common: &Common, graph: &GraphInput, kind: ExtremalKind) -> Result<i32> {
    let g = read_graph(graph)?;
    let o = Oracle::with_budget(g, budget_of(common));
    let (size, w) = o.extremal(&o.graph().full_set(), kind)?;
    let key = if kind == ExtremalKind::Clique {
        "omega"
    } else {
        "alpha"
    };
    println!(
        "{}",
        serde_json::json!({ key: size, "witness": w.members.to_vec() })
    );
    Ok(0)
}
