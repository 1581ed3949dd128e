use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use gliderep_core::clifford::{pentad, BuildingBlock, ChainSquare};
use gliderep_core::glider::{distinguish_chains, enumerate_gliders, generalized_table_csv, Glider};
use gliderep_core::group::{chain_from_json, FiniteGroup, GroupFile, SubgroupChain};
use gliderep_core::hasse::chain_hasse;
use gliderep_core::linalg::parse_vector;
use gliderep_core::nilpotent::{is_tensor_decomposable, theorem_char_suite, ProductChain, ProductModule};
use gliderep_core::registry::{build_descriptor, build_named, parse_chain, subgroup_name};
use gliderep_core::rep::{character_table, LabeledModule, Representation};
use gliderep_core::suites::{clifford_over, default_max_order, groups_with_tables, run_suite, SuiteOptions};
use gliderep_core::{CycNumber, Error};

#[derive(Parser)]
#[command(name = "gliderep", version, about = "Glider representations of finite group algebra filtrations")]
struct Cli {
    /// Seed for generic generator vectors and random instances.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest group order accepted.
    #[arg(long, global = true, env = "GLIDEREP_ORDER_CAP", default_value_t = 64)]
    order_cap: usize,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a group and print a summary or its multiplication table.
    Group {
        /// Descriptor: cyclic:n, dihedral:2n, dicyclic:4n, product:A,B or a registry name.
        #[arg(long, conflicts_with = "group")]
        make: Option<String>,
        /// Registry name or group-table file.
        #[arg(long)]
        group: Option<String>,
        /// Print the table in the group-file format.
        #[arg(long)]
        print: bool,
        /// Save the table in the group-file format.
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Character table.
    Chars {
        #[arg(long)]
        group: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Lies-over diagram of a chain.
    Hasse {
        #[arg(long)]
        group: String,
        #[arg(long)]
        chain: String,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
    /// Build, tabulate and compare gliders.
    #[command(subcommand)]
    Glider(GliderCmd),
    /// Generalized character table of the enumerated irreducible gliders.
    Gentable {
        #[arg(long)]
        group: String,
        #[arg(long)]
        chain: String,
        /// Keep only gliders with this dimension vector (comma-separated).
        #[arg(long)]
        filter: Option<String>,
    },
    /// Compare two chains given as GROUP:CHAIN.
    Distinguish {
        a: String,
        b: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Pentads of squares and the square suite.
    #[command(subcommand)]
    Clifford(CliffordCmd),
    /// Gliders over direct products of coprime-order groups.
    #[command(subcommand)]
    Nilpotent(NilpotentCmd),
    /// Run a verification suite.
    Verify {
        /// group-algebra, cyclic-module, pgroup-thm, anti-diagonal, clifford or nilpotent.
        #[arg(long)]
        suite: String,
        /// Largest group order in the suite (default depends on the suite).
        #[arg(long)]
        max_order: Option<usize>,
        #[arg(long, default_value_t = 200)]
        instances: usize,
        /// Include runtime_ms in the report.
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Subcommand)]
enum GliderCmd {
    /// Build one glider from labeled ambient components and a generator.
    Build {
        #[arg(long)]
        group: String,
        #[arg(long)]
        chain: String,
        /// Top-level labels of the diagram, e.g. U,T3 or U^2.
        #[arg(long)]
        ambient: String,
        /// Generator coordinates, comma-separated.
        #[arg(long)]
        gen: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Same as `gentable`.
    Table {
        #[arg(long)]
        group: String,
        #[arg(long)]
        chain: String,
        #[arg(long)]
        filter: Option<String>,
    },
    /// Same as `hasse`.
    Hasse {
        #[arg(long)]
        group: String,
        #[arg(long)]
        chain: String,
    },
    /// Same as `distinguish`.
    Distinguish {
        a: String,
        b: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Subcommand)]
enum CliffordCmd {
    /// Pentad of a building block.
    Pentad {
        #[arg(long)]
        group: String,
        /// H_i,H_{i+1},G_i,G_{i+1}
        #[arg(long)]
        square: String,
        /// Top-level labels of the square's diagram.
        #[arg(long)]
        ambient: String,
        /// Vectors of Ω spanning the block, separated by ';'.
        #[arg(long)]
        block: String,
    },
    /// Square suite over a family of built-in groups.
    Verify {
        /// `builtin` or a registry name.
        #[arg(long, default_value = "builtin")]
        family: String,
        #[arg(long)]
        max_order: Option<usize>,
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Subcommand)]
enum NilpotentCmd {
    /// Triple (a, b, c) and decomposability of a glider over G × H.
    Triple {
        /// Product written GxH, e.g. C2xC3.
        #[arg(long)]
        group: String,
        /// Levels of the G-chain ('=' repeats a level).
        #[arg(long, default_value = "")]
        g_chain: String,
        #[arg(long, default_value = "")]
        h_chain: String,
        /// Components i:j or i:j^m (factor table indices).
        #[arg(long)]
        glider: String,
        /// Generator; all ones by default.
        #[arg(long)]
        gen: Option<String>,
    },
    /// Characterization suite (abelian) or counterexample (non-abelian).
    Verify {
        #[arg(long)]
        p_group: String,
        #[arg(long)]
        q_group: String,
    },
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidTable(_) => "invalid_table",
        Error::InvalidAction(_) => "invalid_action",
        Error::MalformedSpec(_) => "malformed_spec",
        Error::OrderBoundExceeded { .. } => "order_bound_exceeded",
        Error::NotNormal(_) => "not_normal",
        Error::NotSubgroup(_) => "not_subgroup",
        Error::DivisionByZero => "division_by_zero",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::NotInvariant => "not_invariant",
        Error::UnsupportedGroup(_) => "unsupported_group",
        Error::Precondition(_) => "precondition",
        Error::Parse(_) => "parse",
        Error::Io(_) => "io",
    }
}

type Res<T> = std::result::Result<T, Error>;

fn load_group(spec: &str, cap: usize) -> Res<Arc<FiniteGroup>> {
    let g = if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec)?;
        GroupFile::from_json(&text)?.to_group()?
    } else if spec.contains(':') {
        build_descriptor(spec, cap)?
    } else {
        build_named(spec, cap)?
    };
    if g.order() > cap {
        return Err(Error::OrderBoundExceeded { order: g.order(), cap });
    }
    Ok(Arc::new(g))
}

fn load_chain(g: &FiniteGroup, spec: &str) -> Res<SubgroupChain> {
    if Path::new(spec).is_file() {
        chain_from_json(g, &std::fs::read_to_string(spec)?)
    } else {
        parse_chain(g, spec)
    }
}

/// `U,T3`, `U^2,T1` → (label, multiplicity), merging repeats.
fn parse_labels(spec: &str) -> Res<Vec<(String, usize)>> {
    let mut out: Vec<(String, usize)> = Vec::new();
    for tok in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (label, m) = match tok.split_once('^') {
            Some((l, m)) => (
                l.trim(),
                m.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::MalformedSpec(format!("bad multiplicity in '{tok}'")))?,
            ),
            None => (tok, 1),
        };
        match out.iter_mut().find(|(l, _)| l == label) {
            Some((_, k)) => *k += m,
            None => out.push((label.to_string(), m)),
        }
    }
    if out.is_empty() {
        return Err(Error::MalformedSpec("empty ambient".into()));
    }
    Ok(out)
}

fn labeled_module(g: &Arc<FiniteGroup>, chain: &SubgroupChain, spec: &str) -> Res<Arc<LabeledModule>> {
    let h = chain_hasse(g, chain)?;
    let top = &h.levels[0];
    let comps = parse_labels(spec)?
        .into_iter()
        .map(|(label, m)| {
            let i = top
                .find(&label)
                .ok_or_else(|| Error::MalformedSpec(format!("no top-level label '{label}'")))?;
            let rep: Representation = top.table.irreps()[i].clone().with_label(&label);
            Ok((Arc::new(rep), m))
        })
        .collect::<Res<Vec<_>>>()?;
    Ok(Arc::new(LabeledModule::new(g.clone(), comps)?))
}

fn parse_filter(spec: &Option<String>) -> Res<Option<Vec<usize>>> {
    spec.as_ref()
        .map(|s| {
            s.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::MalformedSpec(format!("bad dimension vector '{s}'")))
                })
                .collect()
        })
        .transpose()
}

fn gentable(g: &str, chain: &str, filter: &Option<String>, cli: &Cli) -> Res<String> {
    let g = load_group(g, cli.order_cap)?;
    let chain = load_chain(&g, chain)?;
    let f = parse_filter(filter)?;
    let gliders = enumerate_gliders(&g, &chain, f.as_deref(), cli.seed)?;
    let h = chain_hasse(&g, &chain)?;
    let label = |x: &Glider| -> String {
        let top = &h.levels[0];
        let (rep, _) = &x.ambient().components()[0];
        let chi = rep.character();
        top.table
            .characters()
            .iter()
            .position(|c| *c == chi)
            .map(|i| top.label(i).to_string())
            .unwrap_or_default()
    };
    generalized_table_csv(&gliders, &label)
}

fn group_and_chain(spec: &str, cap: usize) -> Res<(Arc<FiniteGroup>, SubgroupChain)> {
    let (g, c) = spec
        .split_once(':')
        .ok_or_else(|| Error::MalformedSpec(format!("expected GROUP:CHAIN, got '{spec}'")))?;
    let g = load_group(g, cap)?;
    let c = load_chain(&g, c)?;
    Ok((g, c))
}

fn distinguish(a: &str, b: &str, format: Format, cli: &Cli) -> Res<String> {
    let (ga, ca) = group_and_chain(a, cli.order_cap)?;
    let (gb, cb) = group_and_chain(b, cli.order_cap)?;
    let r = distinguish_chains((&ga, &ca), (&gb, &cb), cli.seed)?;
    Ok(match format {
        Format::Json => to_json_line(&r),
        _ => r.to_string(),
    })
}

fn to_json_line<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("report serializes");
    s.push('\n');
    s
}

fn hasse(g: &str, chain: &str, format: Format, cli: &Cli) -> Res<String> {
    let g = load_group(g, cli.order_cap)?;
    let chain = load_chain(&g, chain)?;
    let h = chain_hasse(&g, &chain)?;
    Ok(match format {
        Format::Json => to_json_line(&json!({
            "levels": h.levels.iter().map(|l| json!({
                "level": l.level,
                "subgroup": l.subgroup,
                "labels": l.order.iter().map(|&i| l.label(i)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "edges": h.labeled_edges(),
            "components": h.components(),
        })),
        _ => h.to_dot(),
    })
}

/// Splits `GxH` into two registry names with coprime orders.
fn split_product(spec: &str) -> Res<(String, String)> {
    for (k, _) in spec.match_indices('x') {
        let (a, b) = (&spec[..k], &spec[k + 1..]);
        if let (Ok(x), Ok(y)) = (build_named(a, usize::MAX), build_named(b, usize::MAX)) {
            if num_integer::gcd(x.order(), y.order()) == 1 {
                return Ok((a.to_string(), b.to_string()));
            }
        }
    }
    Err(Error::MalformedSpec(format!(
        "'{spec}' is not a product GxH of built-in groups with coprime orders"
    )))
}

fn run(cli: &Cli) -> Res<String> {
    match &cli.cmd {
        Cmd::Group { make, group, print, save } => {
            let spec = make
                .as_deref()
                .or(group.as_deref())
                .ok_or_else(|| Error::MalformedSpec("give --make or --group".into()))?;
            let g = load_group(spec, cli.order_cap)?;
            let file = GroupFile::from_group(&g);
            if let Some(p) = save {
                std::fs::write(p, file.to_json())?;
            }
            if *print {
                return Ok(file.to_json() + "\n");
            }
            let classes = g.conjugacy_classes();
            Ok(to_json_line(&json!({
                "name": g.name(),
                "order": g.order(),
                "exponent": g.exponent(),
                "abelian": g.is_abelian(),
                "labels": g.labels(),
                "classes": classes,
                "center": g.center(),
                "commutator_subgroup": g.commutator_subgroup(),
            })))
        }
        Cmd::Chars { group, format } => {
            let g = load_group(group, cli.order_cap)?;
            let t = character_table(&g)?;
            Ok(match format {
                Format::Json => to_json_line(&json!({
                    "group": g.name(),
                    "degrees": t.degrees(),
                    "characters": t.characters().iter().map(|c| c.values().iter().map(CycNumber::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
                })),
                _ => t.to_csv(),
            })
        }
        Cmd::Hasse { group, chain, format } => hasse(group, chain, *format, cli),
        Cmd::Glider(GliderCmd::Hasse { group, chain }) => hasse(group, chain, Format::Dot, cli),
        Cmd::Glider(GliderCmd::Build { group, chain, ambient, gen, format }) => {
            let g = load_group(group, cli.order_cap)?;
            let chain = load_chain(&g, chain)?;
            let module = labeled_module(&g, &chain, ambient)?;
            let a = parse_vector(gen, module.conductor())?;
            let m = Glider::build(&chain, module, a)?;
            if *format == Format::Csv {
                return generalized_table_csv(&[m], &|_| ambient.clone());
            }
            Ok(to_json_line(&json!({
                "ambient": ambient,
                "dimension_vector": m.dimension_vector(),
                "essential_length": m.essential_length(),
                "dimension_matrix": m.dimension_matrix(),
                "irreducible": m.is_irreducible(),
                "anti_diagonal": m.anti_diagonal_test(),
                "irreducible_tail": m.is_irreducible_certified().ok(),
            })))
        }
        Cmd::Glider(GliderCmd::Table { group, chain, filter }) | Cmd::Gentable { group, chain, filter } => {
            gentable(group, chain, filter, cli)
        }
        Cmd::Glider(GliderCmd::Distinguish { a, b, format }) | Cmd::Distinguish { a, b, format } => {
            distinguish(a, b, *format, cli)
        }
        Cmd::Clifford(CliffordCmd::Pentad { group, square, ambient, block }) => {
            let g = load_group(group, cli.order_cap)?;
            let sq = ChainSquare::parse(g.clone(), square)?;
            let labels: Vec<&str> = ambient.split(',').map(str::trim).collect();
            let omega = sq.labeled_ambient(&labels)?;
            let vectors = block
                .split(';')
                .map(|v| parse_vector(v, omega.conductor()))
                .collect::<Res<Vec<_>>>()?;
            let s = BuildingBlock::new(&sq, omega, &vectors)?;
            let p = pentad(&sq, &s)?;
            let names: Vec<String> = p.groups().iter().map(|x| subgroup_name(&g, x)).collect();
            Ok(to_json_line(&json!({
                "h_prime": p.h_prime,
                "g_prime": p.g_prime,
                "h_sq": p.h_sq,
                "g_dprime": p.g_dprime,
                "g_next_prime": p.g_next_prime,
                "names": names,
                "situation": p.situation.to_string(),
            })))
        }
        Cmd::Clifford(CliffordCmd::Verify { family, max_order, timing }) => {
            let start = std::time::Instant::now();
            let cap = max_order.unwrap_or_else(|| default_max_order("clifford"));
            let groups: Vec<Arc<FiniteGroup>> = if family == "builtin" {
                groups_with_tables(cap)
            } else {
                vec![load_group(family, cli.order_cap)?]
            };
            let mut r = clifford_over(&groups)?;
            if *timing {
                r.runtime_ms = Some(start.elapsed().as_millis() as u64);
            }
            Ok(to_json_line(&r))
        }
        Cmd::Nilpotent(NilpotentCmd::Triple { group, g_chain, h_chain, glider, gen }) => {
            let (gn, hn) = split_product(group)?;
            let pc = ProductChain::from_specs(&gn, g_chain, &hn, h_chain)?;
            let pm = ProductModule::parse(&pc, glider)?;
            let n = pm.module.conductor();
            let a = match gen {
                Some(v) => parse_vector(v, n)?,
                None => vec![CycNumber::one(n); pm.module.dim()],
            };
            let m = Glider::build(&pc.chain, pm.module.clone(), a)?;
            let d = is_tensor_decomposable(&pc, &pm, &m)?;
            Ok(to_json_line(&json!({
                "group": pc.product.name(),
                "irreducible": m.is_irreducible(),
                "a": d.triple.a,
                "b": d.triple.b,
                "c": d.triple.c,
                "decomposable": d.decomposable,
                "factors": d.factors,
                "round_trip": d.round_trip,
            })))
        }
        Cmd::Nilpotent(NilpotentCmd::Verify { p_group, q_group }) => Ok(to_json_line(&theorem_char_suite(p_group, q_group)?)),
        Cmd::Verify { suite, max_order, instances, timing } => {
            let r = run_suite(
                suite,
                SuiteOptions {
                    max_order: max_order.unwrap_or(0),
                    seed: cli.seed,
                    instances: *instances,
                    timing: *timing,
                },
            )?;
            Ok(to_json_line(&r))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| match &cli.output {
        Some(p) => std::fs::write(p, out).map_err(Error::from),
        None => {
            print!("{out}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({"error": {"kind": kind(&e), "message": e.to_string()}}));
            ExitCode::from(1)
        }
    }
}
