use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use homcx::hom::{enumerate_homs, random_clique};
use homcx::universality::{conjecture_experiment, hom_complex, Construction};
use homcx::{
    betti_z2_limited, choose_k, BettiReport, ComplexJson, Error, Graph, GraphJson, Limits, Route,
    SimplicialComplex, DEFAULT_MAX_CELLS,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "homcx",
    version,
    about = "Graph homomorphism complexes and the G_{k,X} construction"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,

    /// Cell budget for every construction.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_CELLS)]
    max_cells: usize,

    /// Write the constructed graph or complex to this path as JSON.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Z/2 Betti numbers of a complex.
    Betti {
        #[arg(long)]
        x: PathBuf,
    },
    /// Hom complex of a test graph into a target graph.
    Hom {
        #[arg(long)]
        t: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long, value_enum, default_value_t = Via::Exp)]
        via: Via,
    },
    /// Build G_{k,X}; k is chosen from --t or given by --k.
    Build {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        t: Option<PathBuf>,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Compare Betti numbers of X and Hom(T, G_{k,X}) and check the ball cover.
    Verify {
        #[arg(long)]
        t: PathBuf,
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, value_enum, default_value_t = Via::Exp)]
        via: Via,
        /// Also sample cliques of the Hom complex and check each lies in a ball.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Greedy fold sequence of a graph.
    Dismantle {
        #[arg(long)]
        g: PathBuf,
    },
    /// Nerve of the ball cover of G_{k,X}.
    Nerve {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        t: Option<PathBuf>,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Compare Hom(K_2, G_{1,X}) with X. Reported, never asserted.
    Conjecture41 {
        #[arg(long)]
        x: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Via {
    Exp,
    Poset,
}

impl From<Via> for Route {
    fn from(v: Via) -> Route {
        match v {
            Via::Exp => Route::Exponential,
            Via::Poset => Route::Poset,
        }
    }
}

enum Failure {
    Input(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type CmdResult = Result<(Value, bool), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            emit(&json!({ "error": { "kind": "usage", "message": first_line(&e.to_string()) } }));
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok((report, ok)) => {
            emit(&report);
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(f) => {
            let (code, err) = match f {
                Failure::Input(msg) => (2, json!({ "kind": "input", "message": msg })),
                Failure::Core(Error::CapExceeded { stage, limit }) => (
                    3,
                    json!({ "kind": "cap_exceeded", "stage": stage, "limit": limit,
                            "message": Error::CapExceeded { stage, limit }.to_string() }),
                ),
                Failure::Core(e) => (2, json!({ "kind": "invalid", "message": e.to_string() })),
            };
            eprintln!("error: {}", err["message"].as_str().unwrap_or_default());
            emit(&json!({ "error": err }));
            ExitCode::from(code)
        }
    }
}

fn first_line(s: &str) -> String {
    s.lines()
        .next()
        .unwrap_or_default()
        .trim_start_matches("error: ")
        .to_string()
}

fn emit(v: &Value) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{v}");
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Input(format!("{}: malformed JSON: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    let json: GraphJson = read_json(path)?;
    Graph::from_json(&json).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_complex(path: &Path) -> Result<SimplicialComplex, Failure> {
    let json: ComplexJson = read_json(path)?;
    let x = SimplicialComplex::from_json(&json)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    if x.is_empty() {
        return Err(Failure::Input(format!(
            "{}: complex has no vertices",
            path.display()
        )));
    }
    Ok(x)
}

fn write_out<T: Serialize>(out: Option<&PathBuf>, value: &T) -> Result<(), Failure> {
    if let Some(path) = out {
        let text = serde_json::to_string(value).expect("serializable");
        fs::write(path, text + "\n")
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

/// `k` from an explicit value, else from the test graph, else 2.
fn resolve_k(t: Option<&PathBuf>, k: Option<u32>) -> Result<u32, Failure> {
    let params = match t {
        Some(path) => choose_k(&load_graph(path)?)?,
        None => choose_k(&homcx::generators::complete(2))?,
    };
    match k {
        Some(k) => Ok(params.with_k(k)?.k),
        None => Ok(params.k),
    }
}

fn run(cli: &Cli) -> CmdResult {
    let limits = Limits::new(cli.max_cells);
    let out = cli.out.as_ref();
    match &cli.verb {
        Verb::Betti { x } => {
            let x = load_complex(x)?;
            let r = BettiReport::of(&x, &limits)?;
            eprintln!("betti {} euler {}", r.betti, r.euler);
            Ok((serde_json::to_value(&r).expect("serializable"), true))
        }
        Verb::Hom { t, g, via } => {
            let (t, g) = (load_graph(t)?, load_graph(g)?);
            let homs = enumerate_homs(&t, &g, &limits)?.len();
            let complex = hom_complex(&t, &g, (*via).into(), &limits)?;
            let betti = betti_z2_limited(&complex, &limits)?;
            write_out(out, &complex.to_json())?;
            eprintln!("{homs} graph maps, betti {betti}");
            let r = json!({ "homs": homs, "f_vector": complex.f_vector(), "betti": betti });
            Ok((r, true))
        }
        Verb::Build { x, t, k } => {
            let x = load_complex(x)?;
            let k = resolve_k(t.as_ref(), *k)?;
            let g = homcx::build_g_kx(&x, k, &limits)?;
            write_out(out, &g.to_json())?;
            eprintln!(
                "G_{{{k},X}}: {} vertices, {} edges",
                g.len(),
                g.edge_count()
            );
            let r = json!({ "k": k, "g_size": homcx::universality::GraphSize::of(&g) });
            Ok((r, true))
        }
        Verb::Verify {
            t,
            x,
            k,
            via,
            seed,
            samples,
        } => {
            let (tg, xc) = (load_graph(t)?, load_complex(x)?);
            let report = homcx::verify_universality(&tg, &xc, *k, (*via).into(), &limits)?;
            let mut ok = report.all_passed();
            let mut value = serde_json::to_value(&report).expect("serializable");
            if let Some(seed) = seed {
                let cons = Construction::new(&xc, report.k, &limits)?;
                let (covered, total) = sample_cover(&tg, &cons, *seed, *samples, &limits)?;
                ok &= covered == total;
                value["cover_samples"] =
                    json!({ "seed": seed, "samples": total, "covered": covered });
            }
            if out.is_some() {
                let g = homcx::build_g_kx(&xc, report.k, &limits)?;
                write_out(out, &g.to_json())?;
            }
            eprintln!(
                "k = {}: betti X {} vs Hom {} -> {}",
                report.k,
                report.betti_x,
                report.betti_hom,
                if ok { "pass" } else { "FAIL" }
            );
            Ok((value, ok))
        }
        Verb::Dismantle { g } => {
            let g = load_graph(g)?;
            let d = g.dismantle()?;
            let witness: Vec<[&str; 2]> = d
                .witness
                .steps
                .iter()
                .map(|&(v, w)| [g.label(v), g.label(w)])
                .collect();
            write_out(out, &d.residual.to_json())?;
            eprintln!(
                "{}",
                if d.dismantlable {
                    "dismantlable"
                } else {
                    "not dismantlable"
                }
            );
            let r = json!({ "dismantlable": d.dismantlable, "witness": witness, "residual": d.residual.labels() });
            Ok((r, d.dismantlable))
        }
        Verb::Nerve { x, t, k } => {
            let x = load_complex(x)?;
            let k = resolve_k(t.as_ref(), *k)?;
            let cons = Construction::new(&x, k, &limits)?;
            let (nerve, matches) = cons.cover_nerve()?;
            write_out(out, &nerve.to_json())?;
            eprintln!(
                "nerve {} X",
                if matches { "matches" } else { "differs from" }
            );
            let r = json!({ "k": k, "nerve": nerve.to_json(), "matches": matches });
            Ok((r, matches))
        }
        Verb::Conjecture41 { x } => {
            let x = load_complex(x)?;
            let r = conjecture_experiment(&x, &limits)?;
            eprintln!(
                "Hom(K_2, G_1,X): betti {} vs X {} ({})",
                r.betti_hom,
                r.betti_x,
                if r.matches { "equal" } else { "different" }
            );
            Ok((serde_json::to_value(&r).expect("serializable"), true))
        }
    }
}

/// Seeded random cliques of `Δ(G^T)`; counts those whose support lies in a ball.
fn sample_cover(
    t: &Graph,
    cons: &Construction,
    seed: u64,
    samples: usize,
    limits: &Limits,
) -> Result<(usize, usize), Failure> {
    let homs = enumerate_homs(t, &cons.g, limits)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut covered = 0;
    for _ in 0..samples {
        let alpha = random_clique(t, &cons.g, &homs, 0.3, &mut rng, limits)?;
        if cons.covering_ball(t, &alpha)?.is_some() {
            covered += 1;
        }
    }
    Ok((covered, samples))
}
