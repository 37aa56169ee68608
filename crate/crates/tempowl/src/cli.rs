// SPDX-License-Identifier: Apache-2.0

//! Command-line surface. Exit codes: 0 success, 1 property violation or
//! invalid graph, 2 usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use tempowl_core::distinguish::{classify_all, JointRefinement};
use tempowl_core::gen::{fixture, random_tg, Fixture, RandomSpec, FIXTURE_NAMES};
use tempowl_core::iso::{pointwise_iso_with, timewise_iso_with, IsoOptions, DEFAULT_NODE_LIMIT};
use tempowl_core::props::Property;
use tempowl_core::rwl::refine;
use tempowl_core::tgnn::{forward, ModelConfig, Variant};
use tempowl_core::tgraph::{from_events, is_colour_persistent, validate};
use tempowl_core::{Mode, PairClass};

use crate::fuzz;
use crate::io::{
    embeddings_json, graph_to_json, load_events, load_graph, parse_graph, parse_node, partitions_json, read_input,
    write_matrix_csv, KnowledgeGraphJson, VerdictJson, WitnessJson,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "tempowl",
    version,
    about = "Which temporal GNNs can tell timestamped nodes apart"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Encoding {
    Glob,
    Loc,
}

impl Encoding {
    fn mode(self) -> Mode {
        match self {
            Encoding::Glob => Mode::Global,
            Encoding::Loc => Mode::Local,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Encoding::Glob => "glob",
            Encoding::Loc => "loc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Global,
    Local,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Global => Mode::Global,
            ModeArg::Local => Mode::Local,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CompareMode {
    Global,
    Local,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IsoKindArg {
    Pointwise,
    Timewise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    SumSign,
    ConcatSumRelu,
    HashInjective,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::SumSign => Variant::SumSign,
            VariantArg::ConcatSumRelu => Variant::ConcatSumRelu,
            VariantArg::HashInjective => Variant::HashInjective,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    First,
    Second,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a temporal graph JSON file.
    Validate { graph: PathBuf },
    /// Compile a temporal graph into a knowledge graph.
    Transform {
        graph: PathBuf,
        #[arg(long, value_enum)]
        encoding: Encoding,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Per-layer colour classes of relational refinement.
    Refine {
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "glob")]
        encoding: Encoding,
        /// Stop after this many refinement layers.
        #[arg(long)]
        layers: Option<usize>,
    },
    /// Can a model family separate two timestamped nodes?
    Compare {
        #[arg(long)]
        a: PathBuf,
        /// `node@time` or `node#index`.
        #[arg(long)]
        node_a: String,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        node_b: String,
        #[arg(long, value_enum, default_value = "both")]
        mode: CompareMode,
        #[arg(long)]
        layers: Option<usize>,
    },
    /// Classify every cross pair of timestamped nodes as CSV.
    Classify {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search for a pointwise or timewise isomorphism.
    Iso {
        #[arg(long, value_enum)]
        kind: IsoKindArg,
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
        node_limit: usize,
    },
    /// Run the exact MP-TGNN simulator.
    Simulate {
        graph: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "sum-sign")]
        variant: VariantArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        layers: usize,
        #[arg(long, default_value_t = 4)]
        width: usize,
    },
    /// Write one of the built-in fixture graphs.
    Fixture {
        name: String,
        #[arg(long, value_enum, default_value = "first")]
        side: Side,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a seeded random temporal graph.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        nodes: usize,
        #[arg(long, default_value_t = 3)]
        snapshots: usize,
        #[arg(long, default_value_t = 0.3)]
        edge_prob: f64,
        #[arg(long, default_value_t = 2)]
        palette: usize,
        #[arg(long)]
        colour_persistent: bool,
        /// Use random increasing times instead of 1..n.
        #[arg(long)]
        irregular: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a property over a range of seeds.
    Fuzz {
        #[arg(long, value_parser = parse_property)]
        property: Property,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Node, edge and step counts of a `u,v,t` CSV event file.
    Stats { events: PathBuf },
}

fn parse_property(s: &str) -> Result<Property, String> {
    s.parse().map_err(|_| {
        let names: Vec<&str> = Property::ALL.iter().map(|p| p.name()).collect();
        format!("expected one of {}", names.join(", "))
    })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn write_to(output: Option<&Path>, out: &mut dyn Write, text: &str) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, format!("{text}\n"))?,
        None => writeln!(out, "{text}")?,
    }
    Ok(())
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8> {
    match command {
        Command::Validate { graph } => {
            let raw = parse_graph(&read_input(&graph)?)?;
            match validate(&raw) {
                Ok(tg) => {
                    emit(
                        out,
                        &json!({
                            "valid": true,
                            "nodes": tg.node_count(),
                            "times": tg.len(),
                            "edges": tg.edge_count(),
                            "colour_persistent": is_colour_persistent(&tg),
                        }),
                    )?;
                    Ok(EXIT_OK)
                }
                Err(e) => {
                    emit(out, &json!({ "valid": false, "error": e.to_string() }))?;
                    Ok(EXIT_VIOLATION)
                }
            }
        }
        Command::Transform {
            graph,
            encoding,
            output,
        } => {
            let kg = encoding.mode().encode(&load_graph(&graph)?);
            let text = serde_json::to_string(&KnowledgeGraphJson::from(&kg))?;
            write_to(output.as_deref(), out, &text)?;
            Ok(EXIT_OK)
        }
        Command::Refine {
            graph,
            encoding,
            layers,
        } => {
            let kg = encoding.mode().encode(&load_graph(&graph)?);
            let colouring = refine(&kg, layers);
            emit(out, &partitions_json(encoding.name(), &kg, &colouring))?;
            Ok(EXIT_OK)
        }
        Command::Compare {
            a,
            node_a,
            b,
            node_b,
            mode,
            layers,
        } => {
            let (tg1, tg2) = (load_graph(&a)?, load_graph(&b)?);
            let (n1, n2) = (parse_node(&tg1, &node_a)?, parse_node(&tg2, &node_b)?);
            let verdict = |m: Mode| JointRefinement::new(m, &tg1, &tg2, layers).verdict(&n1, &n2);
            match mode {
                CompareMode::Global => emit(out, &VerdictJson::from(&verdict(Mode::Global)?))?,
                CompareMode::Local => emit(out, &VerdictJson::from(&verdict(Mode::Local)?))?,
                CompareMode::Both => {
                    let (g, l) = (verdict(Mode::Global)?, verdict(Mode::Local)?);
                    emit(
                        out,
                        &json!({
                            "class": PairClass::from_verdicts(&g, &l).name(),
                            "global": VerdictJson::from(&g),
                            "local": VerdictJson::from(&l),
                        }),
                    )?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Classify { a, b, output } => {
            let matrix = classify_all(&load_graph(&a)?, &load_graph(&b)?);
            match output {
                Some(path) => write_matrix_csv(&matrix, std::fs::File::create(path)?)?,
                None => write_matrix_csv(&matrix, &mut *out)?,
            }
            let c = matrix.counts;
            emit(
                err,
                &json!({
                    "both": c.both,
                    "global_only": c.global_only,
                    "local_only": c.local_only,
                    "neither": c.neither,
                }),
            )?;
            Ok(EXIT_OK)
        }
        Command::Iso { kind, a, b, node_limit } => {
            let (tg1, tg2) = (load_graph(&a)?, load_graph(&b)?);
            let opts = IsoOptions { node_limit };
            let witness = match kind {
                IsoKindArg::Pointwise => pointwise_iso_with(&tg1, &tg2, opts)?,
                IsoKindArg::Timewise => timewise_iso_with(&tg1, &tg2, opts)?,
            };
            match witness {
                Some(w) => emit(out, &WitnessJson::from(&w))?,
                None => emit(out, &"none")?,
            }
            Ok(EXIT_OK)
        }
        Command::Simulate {
            graph,
            mode,
            variant,
            seed,
            layers,
            width,
        } => {
            let tg = load_graph(&graph)?;
            let cfg = ModelConfig::new(mode.into(), variant.into(), layers, width, seed);
            let state = forward(&tg, &cfg)?;
            emit(out, &embeddings_json(&cfg, &state))?;
            Ok(EXIT_OK)
        }
        Command::Fixture { name, side, output } => {
            let f = fixture(&name).map_err(|e| anyhow::anyhow!("{e} (known: {})", FIXTURE_NAMES.join(", ")))?;
            let tg = match (side, &f) {
                (Side::First, _) => f.first(),
                (Side::Second, Fixture::Pair(_, g)) => g,
                (Side::Second, Fixture::Single(_)) => bail!("fixture `{name}` has only one graph"),
            };
            write_to(output.as_deref(), out, &graph_to_json(tg))?;
            Ok(EXIT_OK)
        }
        Command::Gen {
            seed,
            nodes,
            snapshots,
            edge_prob,
            palette,
            colour_persistent,
            irregular,
            output,
        } => {
            let tg = random_tg(&RandomSpec {
                seed,
                nodes,
                snapshots,
                edge_prob,
                palette,
                colour_persistent,
                uniform_grid: !irregular,
            })?;
            write_to(output.as_deref(), out, &graph_to_json(&tg))?;
            Ok(EXIT_OK)
        }
        Command::Fuzz { property, trials, seed } => {
            let report = fuzz::run(property, seed, trials, fuzz::worker_count());
            emit(out, &report)?;
            if report.passed() {
                Ok(EXIT_OK)
            } else {
                if let Some(s) = report.minimal_seed {
                    writeln!(err, "{property} violated; reproduce with --seed {s} --trials 1")?;
                }
                Ok(EXIT_VIOLATION)
            }
        }
        Command::Stats { events } => {
            let rows = load_events(&events)?;
            let tg = from_events(&rows, "default")?;
            emit(
                out,
                &json!({
                    "nodes": tg.node_count(),
                    "edges": rows.len(),
                    "distinct_edges": tg.edge_count(),
                    "steps": tg.len(),
                }),
            )?;
            Ok(EXIT_OK)
        }
    }
}
