use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use fairdiv_core::enumerate::{enumerate_fpo_graphs_with, EnumerateOptions};
use fairdiv_core::graph::Node;
use fairdiv_core::improve::eliminate_cycles;
use fairdiv_core::instances;
use fairdiv_core::io::{self, allocation_json, certificate_json, solve_result_json, to_text};
use fairdiv_core::oracle::{brute_fpo_graphs, brute_min_objective};
use fairdiv_core::rational::{self, Rational};
use fairdiv_core::solver::{check_allocation, solve_two_agents_fast};
use fairdiv_core::{
    degeneracy, solve_consensus, solve_min_sharing_with, Allocation, Error, Execution,
    FairnessKind, FairnessSpec, Instance, Objective, SolveOptions,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::budget::Budgets;
use crate::{
    CheckArgs, Cli, Command, ConsensusArgs, EnumerateArgs, FairnessArg, FairnessArgs, GenArgs,
    ImproveArgs, InputArgs, ObjectiveArg, SolveArgs,
};

pub fn run(cli: Cli) -> Result<()> {
    if cli.threads == 0 {
        bail!("--threads must be at least 1");
    }
    let execution = if cli.threads > 1 {
        Execution::Parallel
    } else {
        Execution::Sequential
    };
    #[cfg(feature = "parallel")]
    if cli.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build()
            .context("cannot start worker threads")?;
        return pool.install(|| dispatch(cli.command, execution));
    }
    dispatch(cli.command, execution)
}

fn dispatch(command: Command, execution: Execution) -> Result<()> {
    let budgets = Budgets::from_env()?;
    match command {
        Command::Solve(args) => solve(&args, execution, budgets),
        Command::Check(args) => check(&args),
        Command::Enumerate(args) => enumerate(&args, execution, budgets),
        Command::Consensus(args) => consensus(&args),
        Command::Improve(args) => improve(&args),
        Command::Degeneracy(args) => {
            let inst = read_instance(&args)?;
            println!("{}", degeneracy(&inst));
            Ok(())
        }
        Command::Gen(args) => gen(&args),
        Command::Oracle(args) => oracle(&args, budgets),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_instance(args: &InputArgs) -> Result<Instance> {
    let text = read_text(&args.input)?;
    io::parse_instance(&text).with_context(|| format!("in {}", args.input.display()))
}

fn read_allocation(path: &Path, inst: &Instance) -> Result<Allocation> {
    let text = read_text(path)?;
    io::parse_allocation(&text, inst).with_context(|| format!("in {}", path.display()))
}

fn write_output(output: Option<&PathBuf>, value: &Value) -> Result<()> {
    let text = to_text(value);
    match output {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn fairness_spec(args: &FairnessArgs) -> Result<FairnessSpec> {
    let kind = match args.fairness {
        FairnessArg::Ef => FairnessKind::EnvyFree,
        FairnessArg::Prop => FairnessKind::Proportional,
    };
    Ok(match &args.weights {
        None if kind == FairnessKind::EnvyFree => FairnessSpec::envy_free(),
        None => FairnessSpec::proportional(),
        Some(texts) => {
            let weights = texts
                .iter()
                .map(|t| rational::parse(t.trim()))
                .collect::<fairdiv_core::Result<Vec<Rational>>>()?;
            FairnessSpec::weighted(kind, weights)?
        }
    })
}

fn objective(arg: ObjectiveArg) -> Objective {
    match arg {
        ObjectiveArg::Sharings => Objective::Sharings,
        ObjectiveArg::SharedObjects => Objective::SharedObjects,
        ObjectiveArg::SharedValue => Objective::SharedValue,
        ObjectiveArg::Feasible => Objective::AnyFeasible,
    }
}

fn solve(args: &SolveArgs, execution: Execution, budgets: Budgets) -> Result<()> {
    let inst = read_instance(&args.input)?;
    let spec = fairness_spec(&args.fairness)?;
    let result = if args.fast_two_agent {
        if args.objective != ObjectiveArg::Sharings {
            bail!("--fast-2agent only minimizes sharings");
        }
        solve_two_agents_fast(&inst, &spec)?
    } else {
        let opts = SolveOptions {
            execution,
            degeneracy_budget: budgets.degeneracy,
        };
        solve_min_sharing_with(&inst, &spec, objective(args.objective), &opts)?
    };
    write_output(
        args.output.as_ref(),
        &solve_result_json(&inst, &result, args.decimal)?,
    )
}

fn node_label(inst: &Instance, node: Node) -> String {
    match node {
        Node::Agent(i) => inst.agent_labels()[i].clone(),
        Node::Object(o) => inst.object_labels()[o].clone(),
    }
}

fn check(args: &CheckArgs) -> Result<()> {
    let inst = read_instance(&args.input)?;
    let alloc = read_allocation(&args.allocation, &inst)?;
    let spec = fairness_spec(&args.fairness)?;
    let report = check_allocation(&inst, &alloc, &spec)?;
    let cycle = report.cycle.as_ref().map(|c| {
        json!({
            "nodes": c.nodes().into_iter().map(|n| node_label(&inst, n)).collect::<Vec<_>>(),
            "product": rational::format(&c.product),
        })
    });
    let value = json!({
        "fair": report.fair,
        "fpo": report.fpo,
        "nonmalicious": report.nonmalicious,
        "utilities": report.utilities.iter().map(rational::format).collect::<Vec<_>>(),
        "num_sharings": report.stats.num_sharings,
        "num_shared_objects": report.stats.num_shared_objects,
        "certificate": report.certificate.as_ref().map(certificate_json),
        "cycle": cycle,
    });
    write_output(None, &value)
}

fn enumerate(args: &EnumerateArgs, execution: Execution, budgets: Budgets) -> Result<()> {
    let inst = read_instance(&args.input)?;
    let opts = EnumerateOptions {
        max_sharings: args.max_sharings,
        execution,
        degeneracy_budget: budgets.degeneracy,
    };
    let set = enumerate_fpo_graphs_with(&inst, &opts)?;
    if !args.count_only {
        let agents = inst.agent_labels();
        for (k, g) in set.iter().enumerate() {
            let parts: Vec<String> = g
                .masks()
                .iter()
                .zip(inst.object_labels())
                .map(|(&mask, object)| {
                    let holders: Vec<&str> = (0..inst.num_agents())
                        .filter(|&i| mask >> i & 1 == 1)
                        .map(|i| agents[i].as_str())
                        .collect();
                    format!("{object} -> {{{}}}", holders.join(", "))
                })
                .collect();
            println!("graph {}: {}", k + 1, parts.join("; "));
        }
    }
    println!("count: {}", set.len());
    Ok(())
}

fn consensus(args: &ConsensusArgs) -> Result<()> {
    let inst = read_instance(&args.input)?;
    let mut alloc = solve_consensus(&inst)?;
    if let Some(seed) = args.permute_seed {
        let mut perm: Vec<usize> = (0..inst.num_agents()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        alloc = alloc.permute_bundles(&perm)?;
    }
    write_output(
        args.output.as_ref(),
        &allocation_json(&inst, &alloc, args.decimal)?,
    )
}

fn improve(args: &ImproveArgs) -> Result<()> {
    let inst = read_instance(&args.input)?;
    let alloc = read_allocation(&args.allocation, &inst)?;
    let better = eliminate_cycles(&inst, &alloc)?;
    write_output(
        args.output.as_ref(),
        &allocation_json(&inst, &better, args.decimal)?,
    )
}

fn oracle(args: &SolveArgs, budgets: Budgets) -> Result<()> {
    if args.fast_two_agent {
        bail!("--fast-2agent does not apply to the oracle");
    }
    let inst = read_instance(&args.input)?;
    let spec = fairness_spec(&args.fairness)?;
    let graphs = brute_fpo_graphs(&inst, budgets.oracle)?.len();
    let objective = objective(args.objective);
    let Some(min) = brute_min_objective(&inst, &spec, objective, budgets.oracle)? else {
        return Err(Error::NoFairAllocation.into());
    };
    let mut value = json!({
        "minimum": rational::format(&min),
        "fpo_graphs": graphs,
    });
    if args.decimal {
        value["approximate"] = json!({ "minimum": rational::approx(&min) });
    }
    write_output(args.output.as_ref(), &value)
}

fn numbers<T: std::str::FromStr>(text: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| anyhow::anyhow!("bad number {t:?}"))
        })
        .collect()
}

fn param<T: std::str::FromStr>(params: &[String], k: usize, what: &str) -> Result<T> {
    let text = params
        .get(k)
        .with_context(|| format!("missing parameter: {what}"))?;
    text.parse()
        .map_err(|_| anyhow::anyhow!("bad {what}: {text:?}"))
}

fn gen(args: &GenArgs) -> Result<()> {
    let p = &args.params;
    let inst = match args.family.as_str() {
        "random" => {
            let lo = if p.len() > 2 {
                param(p, 2, "low value")?
            } else {
                -10
            };
            let hi = if p.len() > 3 {
                param(p, 3, "high value")?
            } else {
                10
            };
            instances::gen_random(
                param(p, 0, "agents")?,
                param(p, 1, "objects")?,
                args.seed,
                lo,
                hi,
            )?
        }
        "identical-partition" => {
            instances::gen_identical_partition(&numbers(&param::<String>(p, 0, "numbers")?)?)?
        }
        "perturbed-partition" => {
            instances::gen_perturbed_partition(&numbers(&param::<String>(p, 0, "numbers")?)?)?
        }
        "degeneracy-family" => instances::gen_degeneracy_family(
            &numbers(&param::<String>(p, 0, "numbers")?)?,
            param(p, 1, "objects")?,
        )?,
        "consensus-tightness" => instances::gen_consensus_tightness(param(p, 0, "agents")?)?,
        "identical-goods" => instances::identical_goods(param(p, 0, "agents")?)?,
        "fig1-left" => instances::fig1_left().0,
        "fig1-right" => instances::fig1_right().0,
        other => bail!("unknown family {other:?}"),
    };
    write_output(args.output.as_ref(), &io::instance_json(&inst))
}
