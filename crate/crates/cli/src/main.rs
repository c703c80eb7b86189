use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use latbox_core::jsonutil::{self, sig12};
use latbox_core::twobox::{self, biprojection_of_subgroup, TwoBoxElement, TwoBoxModel};
use latbox_core::{
    catalogue, verify, ChainMode, CharacterTable, Config, Error, Group, OutputFormat, Permutation,
    SubgroupLattice,
};

#[derive(Parser)]
#[command(name = "latbox")]
#[command(about = "Subgroup lattices, character tables and 2-box calculus for finite groups")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Emit JSON (shorthand for --format json)
    #[arg(long, global = true)]
    json: bool,

    /// Output format: text, json or dot
    #[arg(long, global = true)]
    format: Option<String>,

    /// Base seed for randomized routines
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Eigenvalue clustering tolerance
    #[arg(long = "tol-eigen", global = true)]
    tol_eigen: Option<f64>,

    /// Integer rounding tolerance
    #[arg(long = "tol-round", global = true)]
    tol_round: Option<f64>,

    /// Projection equality tolerance
    #[arg(long = "tol-proj", global = true)]
    tol_proj: Option<f64>,

    /// Group order cap for closure
    #[arg(long = "cap-order", global = true)]
    cap_order: Option<usize>,

    /// Subgroup count cap for lattice enumeration
    #[arg(long = "cap-subgroups", global = true)]
    cap_subgroups: Option<usize>,

    /// Worker threads for verification (0 = all cores)
    #[arg(long, global = true)]
    parallelism: Option<usize>,

    /// Samples per randomized sub-test
    #[arg(long, global = true)]
    samples: Option<u32>,

    /// Retry budget for spectral searches
    #[arg(long, global = true)]
    retries: Option<u32>,

    /// Include wall-clock timings in JSON reports (breaks byte-stability)
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the subgroup lattice and analyze its profile
    Lattice { group: String },
    /// Analyze the interval [H, G] for H given by generators
    Interval {
        group: String,
        /// Cycle-notation generators of H, comma separated
        h_gens: String,
    },
    /// Shortest Boolean chain from bottom to top
    Chain {
        group: String,
        /// top or bottom
        #[arg(long, default_value = "top")]
        mode: String,
    },
    /// Irreducible complex character table
    Chartable { group: String },
    /// Fusion multiplicities of tensor products
    Fusion { group: String },
    /// Tour of the two 2-box models over a group
    Twobox {
        group: String,
        /// Print the walkthrough (default behavior)
        #[arg(long)]
        demo: bool,
    },
    /// Run verification suites (the whole catalogue when no group is
    /// given)
    Verify {
        group: Option<String>,
        /// ore, dual_ore, wcyclic, bounds, fusion, generation, lemmas or all
        #[arg(long)]
        suite: Option<String>,
    },
    /// The built-in group catalogue
    Catalogue {
        #[arg(long)]
        list: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn build_config(cli: &Cli) -> Result<Config, Error> {
    let mut config = Config::from_env();
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(v) = cli.tol_eigen {
        config.tol_eigen = v;
    }
    if let Some(v) = cli.tol_round {
        config.tol_round = v;
    }
    if let Some(v) = cli.tol_proj {
        config.tol_proj = v;
    }
    if let Some(v) = cli.cap_order {
        config.cap_group_order = v;
    }
    if let Some(v) = cli.cap_subgroups {
        config.cap_subgroups = v;
    }
    if let Some(v) = cli.parallelism {
        config.parallelism = v;
    }
    if let Some(v) = cli.samples {
        config.samples = v;
    }
    if let Some(v) = cli.retries {
        config.retries = v;
    }
    if cli.json {
        config.format = OutputFormat::Json;
    }
    if let Some(fmt) = &cli.format {
        config.format = match fmt.as_str() {
            "text" => OutputFormat::Text,
            "json" => OutputFormat::Json,
            "dot" => OutputFormat::Dot,
            other => return Err(Error::UnsupportedFormat(other.to_string())),
        };
    }
    Ok(config)
}

/// A catalogue descriptor, or a comma-separated cycle-notation generator
/// list.
fn parse_group(input: &str, config: &Config) -> Result<Arc<Group>, Error> {
    if input.contains('(') {
        let degree = Permutation::scan_degree(input)?;
        let gens = Permutation::parse_list(input, degree)?;
        Group::closure_labeled(degree, &gens, config.cap_group_order, input.trim())
    } else {
        catalogue::build(input, config.cap_group_order)
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    let config = build_config(&cli)?;
    match &cli.command {
        Command::Lattice { group } => cmd_lattice(group, &config),
        Command::Interval { group, h_gens } => cmd_interval(group, h_gens, &config),
        Command::Chain { group, mode } => cmd_chain(group, mode, &config),
        Command::Chartable { group } => cmd_chartable(group, &config),
        Command::Fusion { group } => cmd_fusion(group, &config),
        Command::Twobox { group, .. } => cmd_twobox(group, &config),
        Command::Verify { group, suite } => {
            cmd_verify(group.as_deref(), suite.as_deref(), &config, cli.timings)
        }
        Command::Catalogue { .. } => cmd_catalogue(&config),
    }
}

fn emit(value: &Value) {
    print!("{}", jsonutil::to_stable_string(value));
}

fn cmd_lattice(group: &str, config: &Config) -> Result<u8, Error> {
    let g = parse_group(group, config)?;
    let lattice = Arc::new(SubgroupLattice::enumerate(g, config.cap_subgroups)?);
    match config.format {
        OutputFormat::Dot => print!("{}", lattice.to_dot()),
        OutputFormat::Json => emit(&lattice.to_json()),
        OutputFormat::Text => {
            let profile = lattice.full_interval().analyze();
            println!(
                "subgroup lattice of {} (order {}): {} subgroups",
                lattice.group().label(),
                lattice.group().order(),
                lattice.len()
            );
            for (i, node) in lattice.nodes().iter().enumerate() {
                println!("  node {:3}  order {:4}", i, node.order());
            }
            println!("distributive: {}", profile.is_distributive);
            match profile.boolean_rank {
                Some(rank) => println!("Boolean of rank {}", rank),
                None => println!("Boolean: false"),
            }
            println!(
                "top interval Boolean: {} / bottom interval Boolean: {}",
                profile.is_top_boolean, profile.is_bottom_boolean
            );
            println!("atoms: {:?}, coatoms: {:?}", profile.atoms, profile.coatoms);
        }
    }
    Ok(0)
}

fn cmd_interval(group: &str, h_gens: &str, config: &Config) -> Result<u8, Error> {
    let g = parse_group(group, config)?;
    let gens = Permutation::parse_list(h_gens, g.degree())?;
    let mut seed_elements = Vec::new();
    for p in &gens {
        let idx = g
            .index_of(p)
            .ok_or_else(|| Error::Parse(format!("{} is not an element of {}", p, group)))?;
        seed_elements.push(idx);
    }
    let h = g.generated_subgroup(seed_elements);
    let lattice = Arc::new(SubgroupLattice::enumerate(Arc::clone(&g), config.cap_subgroups)?);
    let low = lattice.node_of(&h).expect("subgroup is a lattice node");
    let iv = lattice.interval(low, lattice.top()).expect("comparable");
    let profile = iv.analyze();
    let witness = iv.h_cyclic_witness();
    let table = CharacterTable::compute(Arc::clone(&g), config)?;
    let primitive = table.linearly_primitive_witness(&h)?;

    match config.format {
        OutputFormat::Json => {
            emit(&json!({
                "group": g.label(),
                "h_generators": gens.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "h_order": h.order(),
                "interval": {"low": low, "high": lattice.top()},
                "members": iv.members(),
                "profile": profile.to_json(),
                "h_cyclic_witness": witness.map(|w| g.element(w).to_string()),
                "linearly_primitive_witness": primitive.map(|i| json!({
                    "irrep": i,
                    "degree": table.degrees()[i],
                })),
            }));
        }
        _ => {
            println!(
                "interval [H, {}] with H = <{}> of order {} ({} members)",
                g.label(),
                h_gens.trim(),
                h.order(),
                iv.len()
            );
            println!(
                "  distributive: {} | {}top Boolean | {}bottom Boolean",
                profile.is_distributive,
                if profile.is_top_boolean { "" } else { "not " },
                if profile.is_bottom_boolean { "" } else { "not " },
            );
            match witness {
                Some(w) => println!("  H-cyclic witness: {}", g.element(w)),
                None => println!("  H-cyclic: no witness"),
            }
            match primitive {
                Some(i) => println!(
                    "  linearly primitive witness: irrep #{} of degree {}",
                    i,
                    table.degrees()[i]
                ),
                None => println!("  linearly primitive: no witness"),
            }
        }
    }
    Ok(0)
}

fn cmd_chain(group: &str, mode: &str, config: &Config) -> Result<u8, Error> {
    let g = parse_group(group, config)?;
    let lattice = Arc::new(SubgroupLattice::enumerate(g, config.cap_subgroups)?);
    let chain_mode = match mode {
        "top" => ChainMode::Top,
        "bottom" => ChainMode::Bottom,
        other => return Err(Error::Parse(format!("unknown chain mode {:?}", other))),
    };
    let (len, chain) = lattice.boolean_chain_length(chain_mode);
    let orders: Vec<usize> = chain.iter().map(|&n| lattice.node(n).order()).collect();
    match config.format {
        OutputFormat::Json => emit(&json!({
            "group": lattice.group().label(),
            "mode": mode,
            "length": len,
            "chain_nodes": chain,
            "chain_orders": orders,
        })),
        _ => {
            println!(
                "{} Boolean chain for {}: length {}",
                mode,
                lattice.group().label(),
                len
            );
            println!("  orders along the chain: {:?}", orders);
        }
    }
    Ok(0)
}

fn cmd_chartable(group: &str, config: &Config) -> Result<u8, Error> {
    let g = parse_group(group, config)?;
    let table = CharacterTable::compute(g, config)?;
    match config.format {
        OutputFormat::Json => emit(&table.to_json()),
        _ => {
            println!(
                "character table of {} ({} classes, seed {})",
                table.group().label(),
                table.class_count(),
                table.seed_used()
            );
            print!("{:>10}", "size");
            for s in table.class_sizes() {
                print!("{:>14}", s);
            }
            println!();
            print!("{:>10}", "rep");
            for &r in table.class_reps() {
                print!("{:>14}", table.group().element(r).to_string());
            }
            println!();
            for i in 0..table.irrep_count() {
                print!("chi_{:<2} d={:<2}", i, table.degrees()[i]);
                for j in 0..table.class_count() {
                    let v = table.chi(i, j);
                    if v.im.abs() < 1e-9 {
                        print!("{:>14.4}", v.re);
                    } else {
                        print!("{:>7.3}{:+.3}i", v.re, v.im);
                    }
                }
                println!();
            }
        }
    }
    Ok(0)
}

fn cmd_fusion(group: &str, config: &Config) -> Result<u8, Error> {
    let g = parse_group(group, config)?;
    let table = CharacterTable::compute(g, config)?;
    let fusion = table.fusion()?;
    match config.format {
        OutputFormat::Json => emit(&fusion.to_json(table.degrees())),
        _ => {
            println!(
                "fusion rules of {} ({} irreps, degrees {:?})",
                table.group().label(),
                table.irrep_count(),
                table.degrees()
            );
            let r = table.irrep_count();
            for i in 0..r {
                for j in i..r {
                    let terms: Vec<String> = (0..r)
                        .filter(|&k| fusion.get(i, j, k) > 0)
                        .map(|k| {
                            let n = fusion.get(i, j, k);
                            if n == 1 {
                                format!("{}", k)
                            } else {
                                format!("{}x{}", n, k)
                            }
                        })
                        .collect();
                    println!("  {} (x) {} = {}", i, j, terms.join(" + "));
                }
            }
        }
    }
    Ok(0)
}

fn cmd_twobox(group: &str, config: &Config) -> Result<u8, Error> {
    let g = parse_group(group, config)?;
    let lattice = Arc::new(SubgroupLattice::enumerate(Arc::clone(&g), config.cap_subgroups)?);
    let table = CharacterTable::compute(Arc::clone(&g), config)?;
    let delta = (g.order() as f64).sqrt();

    // a middling subgroup makes the most interesting showcase
    let node = (0..lattice.len())
        .find(|&n| lattice.node(n).order() > 1 && lattice.node(n).order() < g.order())
        .unwrap_or(lattice.top());
    let handle = lattice.node(node);
    let ps = twobox::minimal_central_projections(&table, config)?;

    if config.format == OutputFormat::Json {
        let mut models = Vec::new();
        for model in [TwoBoxModel::Function, TwoBoxModel::GroupAlgebra] {
            let b = biprojection_of_subgroup(model, &g, handle);
            let checks = twobox::biprojection_checks(&b.element, config)?;
            models.push(json!({
                "model": model.tag(),
                "subgroup_order": handle.order(),
                "biprojection": b.element.to_json(),
                "fourier": b.element.fourier().to_json(),
                "max_residual": sig12(checks.max_residual()),
                "trace": sig12(b.element.trace().re),
            }));
        }
        emit(&json!({
            "group": g.label(),
            "delta": sig12(delta),
            "showcase": models,
            "central_projection_traces": ps.iter().map(|p| sig12(p.trace().re)).collect::<Vec<_>>(),
        }));
        return Ok(0);
    }

    println!("2-box models over {} (delta = {:.6})", g.label(), delta);
    for model in [TwoBoxModel::Function, TwoBoxModel::GroupAlgebra] {
        let tag = match model {
            TwoBoxModel::Function => "function model C^G",
            TwoBoxModel::GroupAlgebra => "group algebra model CG",
        };
        let id = TwoBoxElement::identity(model, Arc::clone(&g));
        let e1 = TwoBoxElement::bottom(model, Arc::clone(&g));
        println!("{}:", tag);
        println!(
            "  tr(id) = {:.6}, tr(e1) = {:.6} (= 1/delta^2)",
            id.trace().re,
            e1.trace().re
        );
        let b = biprojection_of_subgroup(model, &g, handle);
        let checks = twobox::biprojection_checks(&b.element, config)?;
        println!(
            "  subgroup of order {} -> biprojection with tr = {:.6}, clause residual {:.2e}",
            handle.order(),
            b.element.trace().re,
            checks.max_residual()
        );
        let gen = twobox::generate_biprojection(&b.element, config)?;
        println!(
            "  regenerating it fixes the same subgroup: order {}",
            gen.subgroup.order()
        );
    }
    println!("minimal central projections of CG:");
    for (i, p) in ps.iter().enumerate() {
        println!(
            "  p_{} (degree {}): tr = {:.6}",
            i,
            table.degrees()[i],
            p.trace().re
        );
    }
    Ok(0)
}

fn cmd_verify(
    group: Option<&str>,
    suite: Option<&str>,
    config: &Config,
    timings: bool,
) -> Result<u8, Error> {
    let groups: Vec<String> = match group {
        Some(name) => vec![name.to_string()],
        None => catalogue::DEFAULT_CATALOGUE
            .iter()
            .map(|s| s.to_string())
            .collect(),
    };
    let mut all = Vec::new();
    for name in &groups {
        let g = parse_group(name, config)?;
        let reports = verify::run(g, config, suite)?;
        all.extend(reports);
    }
    let code = verify::exit_code(&all);
    match config.format {
        OutputFormat::Json => {
            let reports: Vec<Value> = all.iter().map(|r| r.to_json(timings)).collect();
            let summary = json!({
                "pass": all.iter().filter(|r| r.verdict == verify::Verdict::Pass).count(),
                "fail": all.iter().filter(|r| r.verdict == verify::Verdict::Fail).count(),
                "skip": all.iter().filter(|r| r.verdict == verify::Verdict::Skip).count(),
                "integrity": all.iter().filter(|r| r.verdict == verify::Verdict::Integrity).count(),
            });
            emit(&json!({
                "seed": config.seed,
                "reports": reports,
                "summary": summary,
                "exit_code": code,
            }));
        }
        _ => {
            for r in &all {
                let interval = r
                    .interval
                    .map(|(low, high)| format!(" [{} <= {}]", low, high))
                    .unwrap_or_default();
                let ms = if timings {
                    format!(" ({} ms)", r.ms)
                } else {
                    String::new()
                };
                println!(
                    "{:9} {:30}{} {}{}",
                    r.verdict.tag(),
                    r.suite,
                    interval,
                    r.group,
                    ms
                );
            }
            let count = |v: verify::Verdict| all.iter().filter(|r| r.verdict == v).count();
            println!(
                "summary: {} pass, {} fail, {} skip, {} integrity",
                count(verify::Verdict::Pass),
                count(verify::Verdict::Fail),
                count(verify::Verdict::Skip),
                count(verify::Verdict::Integrity)
            );
        }
    }
    Ok(code as u8)
}

fn cmd_catalogue(config: &Config) -> Result<u8, Error> {
    match config.format {
        OutputFormat::Json => {
            let entries: Vec<Value> = catalogue::DEFAULT_CATALOGUE
                .iter()
                .map(|name| {
                    let g = catalogue::build(name, config.cap_group_order).unwrap();
                    json!({"name": name, "order": g.order(), "degree": g.degree()})
                })
                .collect();
            emit(&json!({"catalogue": entries}));
        }
        _ => {
            println!(
                "built-in catalogue ({} groups):",
                catalogue::DEFAULT_CATALOGUE.len()
            );
            for name in catalogue::DEFAULT_CATALOGUE {
                let g = catalogue::build(name, config.cap_group_order).unwrap();
                println!("  {:10} order {:4} on {:2} points", name, g.order(), g.degree());
            }
        }
    }
    Ok(0)
}
