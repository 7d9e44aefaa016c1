use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use twcanon::atom_decomp::{atom_bounded_decomposition, Thresholds};
use twcanon::atoms::clique_free_decomposition;
use twcanon::canonizer::{canon_with, isomorphic_with, verify_isomorphism, CanonOptions};
use twcanon::harness::formats::{
    emit_canon, emit_decomposition_json, nested_json, parse_graph, tree_json,
};
use twcanon::harness::generate::{permute, random_partial_ktree, random_permutation};
use twcanon::harness::oracle::brute_force_isomorphic;
use twcanon::nested::{is_p_bounded, nested_for_improved, p_bound};
use twcanon::treedec::{improve, reserve_improvement_color, treewidth_exact};
use twcanon::ColoredGraph;

#[derive(Parser)]
#[command(
    name = "twcanon",
    version,
    about = "Canonization of graphs of bounded tree width"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Tuning {
    /// Tree width bound; computed exactly when omitted.
    #[arg(short, long)]
    k: Option<usize>,
    /// Factor of the small interface threshold, `factor·(k+1)`.
    #[arg(long, default_value_t = Thresholds::default().small_factor)]
    small_factor: usize,
    /// Factor of the medium interface threshold, `factor·(k+1)³`.
    #[arg(long, default_value_t = Thresholds::default().medium_factor)]
    medium_factor: usize,
}

impl Tuning {
    fn thresholds(&self) -> Thresholds {
        Thresholds {
            small_factor: self.small_factor,
            medium_factor: self.medium_factor,
        }
    }

    fn options(&self) -> CanonOptions {
        CanonOptions {
            thresholds: self.thresholds(),
            ..CanonOptions::default()
        }
    }

    fn width(&self, g: &ColoredGraph) -> Result<usize> {
        match self.k {
            Some(k) => Ok(k),
            None => treewidth_exact(g).context("cannot determine the tree width"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical color matrix.
    Canon {
        #[command(flatten)]
        tuning: Tuning,
        file: PathBuf,
    },
    /// Test two graphs for isomorphism (exit 0 isomorphic, 1 not, 2 error).
    Iso {
        #[command(flatten)]
        tuning: Tuning,
        first: PathBuf,
        second: PathBuf,
    },
    /// Print a decomposition as JSON.
    Decompose {
        #[arg(long, value_enum, default_value_t = Stage::Nested)]
        stage: Stage,
        #[command(flatten)]
        tuning: Tuning,
        file: PathBuf,
    },
    /// Check canonization against the brute-force oracle on random graphs.
    Selftest {
        #[arg(long, default_value_t = 50)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Stage {
    Atoms,
    Bounded,
    Nested,
}

fn read_graph(path: &Path) -> Result<ColoredGraph> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_graph(&text).with_context(|| format!("cannot parse {}", path.display()))
}

fn canon_cmd(tuning: Tuning, file: &Path) -> Result<()> {
    let g = read_graph(file)?;
    let c = canon_with(&g, tuning.width(&g)?, tuning.options())?;
    print!("{}", emit_canon(c.n, &c.matrix));
    Ok(())
}

fn iso_cmd(tuning: Tuning, first: &Path, second: &Path) -> Result<bool> {
    let g = read_graph(first)?;
    let h = read_graph(second)?;
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        println!("not isomorphic");
        return Ok(false);
    }
    let k = tuning.width(&g)?.max(tuning.width(&h)?);
    match isomorphic_with(&g, &h, k, tuning.options())? {
        Some(phi) => {
            println!("isomorphic");
            for (u, v) in phi {
                println!("{u} {v}");
            }
            Ok(true)
        }
        None => {
            println!("not isomorphic");
            Ok(false)
        }
    }
}

fn decompose_cmd(stage: Stage, tuning: Tuning, file: &Path) -> Result<()> {
    let g = read_graph(file)?;
    if g.n() == 0 || !g.is_connected() {
        bail!("decompose expects a connected, nonempty graph");
    }
    let k = tuning.width(&g)?;
    let th = tuning.thresholds();
    let improved = improve(&reserve_improvement_color(&g), k)?;
    let base = clique_free_decomposition(&improved, k)?;
    let sizes: Vec<usize> = base.bags.iter().map(Vec::len).collect();
    let doc = match stage {
        Stage::Atoms => emit_decomposition_json(
            "atoms",
            k,
            None,
            g.n(),
            tree_json(&base),
            json!({ "bag_sizes": sizes }),
        ),
        Stage::Bounded => {
            let mut parts = Vec::new();
            let mut k_prime = None;
            for (node, bag) in base.bags.iter().enumerate() {
                let atom = improved.induced(bag);
                let Some(&uv) = atom.non_edges().first() else {
                    continue;
                };
                let bd = atom_bounded_decomposition(&atom, uv, k, th)?;
                k_prime = k_prime.max(Some(bd.width));
                parts.push(json!({
                    "node": node,
                    "anchor": [uv.0, uv.1],
                    "width": bd.width,
                    "decomposition": tree_json(&bd.decomposition),
                }));
            }
            emit_decomposition_json(
                "bounded",
                k,
                k_prime,
                g.n(),
                tree_json(&base),
                json!({ "bag_sizes": sizes, "atoms": parts }),
            )
        }
        Stage::Nested => {
            let nd = nested_for_improved(&improved, k, th)?;
            let bounded = is_p_bounded(&improved, &nd, |m| p_bound(k, m));
            emit_decomposition_json(
                "nested",
                k,
                Some(nd.width()),
                g.n(),
                nested_json(&nd),
                json!({ "size": nd.size(), "p_bounded": bounded }),
            )
        }
    };
    println!("{doc}");
    Ok(())
}

fn selftest_cmd(size: usize, seed: u64) -> Result<bool> {
    let mut failures = Vec::<Value>::new();
    for i in 0..size as u64 {
        let s = seed.wrapping_add(i);
        let k = 1 + (s % 3) as usize;
        let n = (k + 1 + (s / 3 % 8) as usize).min(10);
        let g = random_partial_ktree(n, k, 0.8, s)?;
        let h = if i % 2 == 0 {
            permute(&g, &random_permutation(n, s ^ 0x5eed))
        } else {
            random_partial_ktree(n, k, 0.8, s ^ 0x5eed)?
        };
        let cg = canon_with(&g, k, CanonOptions::default())?;
        let ch = canon_with(&h, k, CanonOptions::default())?;
        let oracle = brute_force_isomorphic(&g, &h)?.is_some();
        if (cg.matrix == ch.matrix) != oracle {
            failures.push(json!({ "seed": s, "check": "canon" }));
        }
        if g.relabel(|v| cg.position(v).expect("labeled vertex")) != cg.graph() {
            failures.push(json!({ "seed": s, "check": "labeling" }));
        }
        if let Some(phi) = isomorphic_with(&g, &h, k, CanonOptions::default())? {
            if !verify_isomorphism(&g, &h, &phi) {
                failures.push(json!({ "seed": s, "check": "witness" }));
            }
        }
    }
    println!("selftest: {} graphs, {} failures", size, failures.len());
    for f in &failures {
        println!("{f}");
    }
    Ok(failures.is_empty())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Canon { tuning, file } => canon_cmd(tuning, &file).map(|_| true),
        Command::Iso {
            tuning,
            first,
            second,
        } => iso_cmd(tuning, &first, &second),
        Command::Decompose {
            stage,
            tuning,
            file,
        } => decompose_cmd(stage, tuning, &file).map(|_| true),
        Command::Selftest { size, seed } => selftest_cmd(size, seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("twcanon: {e:#}");
            ExitCode::from(2)
        }
    }
}
