//! Sharing-minimizing fair fPO allocations, the two-agent fast path, consensus
//! allocations, and allocation checking.

use num_traits::{One, Signed, Zero};

use crate::degeneracy::degeneracy;
use crate::enumerate::{enumerate_fpo_graphs_with, EnumerateOptions, DEFAULT_DEGENERACY_BUDGET};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fairness::{bundle_value, fairness_forms, is_fair, sharing_stats, utilities};
use crate::graph::{
    dcg_of, is_nonmalicious, po_weights, ucg_of, ConsumptionGraph, Cycle, WeightCertificate,
};
use crate::lp::{basic_feasible_point, feasible_point, LinearProgram, Relation};
use crate::model::{Allocation, FairnessSpec, Instance, ObjectClass, Objective, SharingStats};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOptions {
    pub execution: Execution,
    pub degeneracy_budget: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            execution: Execution::default(),
            degeneracy_budget: DEFAULT_DEGENERACY_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub allocation: Allocation,
    /// Recomputed from `allocation`.
    pub stats: SharingStats,
    pub certificate: WeightCertificate,
    /// Number of graphs whose fairness LP was solved.
    pub graphs_examined: usize,
    pub objective_value: Rational,
}

/// Objective value of a sharing pattern.
pub fn objective_value(objective: Objective, stats: &SharingStats) -> Rational {
    match objective {
        Objective::Sharings => Rational::from_integer(stats.num_sharings.into()),
        Objective::SharedObjects => Rational::from_integer(stats.num_shared_objects.into()),
        Objective::SharedValue => stats.shared_value.clone(),
        Objective::AnyFeasible => Rational::zero(),
    }
}

pub fn graph_stats(inst: &Instance, g: &ConsumptionGraph) -> SharingStats {
    SharingStats {
        num_sharings: g.num_sharings(),
        num_shared_objects: g.num_shared_objects(),
        shared_value: g.shared_value(inst),
    }
}

/// The fairness LP of a graph: one variable per (consumer, shared object),
/// with unshared objects fixed to their single consumer.
#[derive(Debug, Clone)]
pub struct GraphLp {
    pub lp: LinearProgram,
    /// `(agent, object)` for each LP variable.
    pub vars: Vec<(usize, usize)>,
    graph: ConsumptionGraph,
}

impl GraphLp {
    pub fn build(inst: &Instance, spec: &FairnessSpec, g: &ConsumptionGraph) -> Result<Self> {
        g.check_instance(inst)?;
        let mut index = vec![vec![None; inst.num_objects()]; inst.num_agents()];
        let mut vars = Vec::new();
        for o in (0..g.num_objects()).filter(|&o| g.is_shared(o)) {
            for i in g.consumers(o) {
                index[i][o] = Some(vars.len());
                vars.push((i, o));
            }
        }
        let mut lp = LinearProgram::new(vars.len());
        for o in (0..g.num_objects()).filter(|&o| g.is_shared(o)) {
            let terms: Vec<_> = g
                .consumers(o)
                .into_iter()
                .map(|i| {
                    (
                        index[i][o].expect("consumer has a variable"),
                        Rational::one(),
                    )
                })
                .collect();
            lp.add_sparse(&terms, Relation::Eq, Rational::one())?;
        }
        for form in fairness_forms(inst, spec)? {
            let mut constant = form.constant.clone();
            let mut terms = Vec::new();
            for (i, o, c) in form.terms {
                match index[i][o] {
                    Some(var) => terms.push((var, c)),
                    None if g.consumes(i, o) => constant += c,
                    None => {}
                }
            }
            if terms.is_empty() {
                if constant.is_negative() {
                    // A violated constant constraint: 0 >= 1.
                    lp.add_sparse(&[], Relation::Ge, Rational::one())?;
                }
                continue;
            }
            lp.add_sparse(&terms, Relation::Ge, -constant)?;
        }
        Ok(Self {
            lp,
            vars,
            graph: g.clone(),
        })
    }

    /// The allocation with this support pattern given an LP point.
    pub fn allocation(&self, point: &[Rational]) -> Result<Allocation> {
        let g = &self.graph;
        let mut shares = vec![vec![Rational::zero(); g.num_objects()]; g.num_agents()];
        for o in (0..g.num_objects()).filter(|&o| !g.is_shared(o)) {
            shares[g.consumers(o)[0]][o] = Rational::one();
        }
        for (&(i, o), x) in self.vars.iter().zip(point) {
            shares[i][o] = x.clone();
        }
        Allocation::new(shares)
    }

    /// A fair allocation supported within the graph, if one exists.
    pub fn solve(&self) -> Result<Option<Allocation>> {
        feasible_point(&self.lp)
            .map(|p| self.allocation(&p))
            .transpose()
    }
}

/// A fair fPO allocation minimizing `objective`, with default options.
pub fn solve_min_sharing(
    inst: &Instance,
    spec: &FairnessSpec,
    objective: Objective,
) -> Result<SolveResult> {
    solve_min_sharing_with(inst, spec, objective, &SolveOptions::default())
}

pub fn solve_min_sharing_with(
    inst: &Instance,
    spec: &FairnessSpec,
    objective: Objective,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    spec.weights_for(inst.num_agents())?;
    let cap = (objective == Objective::Sharings).then(|| inst.num_agents() - 1);
    let mut examined = 0;
    if let Some(found) = scan(inst, spec, objective, cap, opts, &mut examined)? {
        return Ok(found);
    }
    if cap.is_some() {
        // Unequal entitlements can force more than n-1 sharings.
        if let Some(found) = scan(inst, spec, objective, None, opts, &mut examined)? {
            return Ok(found);
        }
    }
    Err(Error::NoFairAllocation)
}

fn scan(
    inst: &Instance,
    spec: &FairnessSpec,
    objective: Objective,
    cap: Option<usize>,
    opts: &SolveOptions,
    examined: &mut usize,
) -> Result<Option<SolveResult>> {
    let set = enumerate_fpo_graphs_with(
        inst,
        &EnumerateOptions {
            max_sharings: cap,
            execution: opts.execution,
            degeneracy_budget: opts.degeneracy_budget,
        },
    )?;
    let mut ranked: Vec<(Rational, &ConsumptionGraph)> = set
        .iter()
        .map(|g| (objective_value(objective, &graph_stats(inst, g)), g))
        .collect();
    // Stable: graphs stay in canonical order within equal objective values.
    ranked.sort_by(|a, b| a.0.cmp(&b.0));
    let mut start = 0;
    while start < ranked.len() {
        let end = start + ranked[start..].partition_point(|(v, _)| *v == ranked[start].0);
        let group: Vec<&ConsumptionGraph> = ranked[start..end].iter().map(|(_, g)| *g).collect();
        *examined += group.len();
        let outcomes = opts
            .execution
            .map(&group, |g| GraphLp::build(inst, spec, g)?.solve());
        for outcome in outcomes {
            if let Some(alloc) = outcome? {
                return finish(inst, spec, objective, alloc, *examined).map(Some);
            }
        }
        start = end;
    }
    Ok(None)
}

fn finish(
    inst: &Instance,
    spec: &FairnessSpec,
    objective: Objective,
    allocation: Allocation,
    graphs_examined: usize,
) -> Result<SolveResult> {
    assert!(
        is_fair(inst, &allocation, spec)?,
        "solver produced an unfair allocation"
    );
    let certificate = po_weights(inst, &allocation)?;
    let stats = sharing_stats(inst, &allocation);
    Ok(SolveResult {
        objective_value: objective_value(objective, &stats),
        allocation,
        stats,
        certificate,
        graphs_examined,
    })
}

/// Two agents, pure goods, no ratio ties: sort by `v1/v2` and try every
/// prefix split, then every split with one fractional good.
pub fn solve_two_agents_fast(inst: &Instance, spec: &FairnessSpec) -> Result<SolveResult> {
    let m = inst.num_objects();
    if inst.num_agents() != 2 {
        return Err(Error::Precondition(
            "the fast path needs exactly 2 agents".into(),
        ));
    }
    if (0..m).any(|o| inst.classify_object(o).ok() != Some(ObjectClass::PureGood)) {
        return Err(Error::Precondition(
            "the fast path needs pure goods only".into(),
        ));
    }
    if degeneracy(inst) != 0 {
        return Err(Error::Precondition(
            "the fast path needs a non-degenerate instance".into(),
        ));
    }
    let mut order: Vec<usize> = (0..m).collect();
    let ratio = |o: usize| inst.value(0, o) / inst.value(1, o);
    order.sort_by_key(|&o| std::cmp::Reverse(ratio(o)));

    // Agent 1 takes `order[..k]`, a fraction `x` of `order[k]` (if any), and
    // agent 2 the rest.
    let split = |k: usize, x: Option<&Rational>| {
        let mut shares = vec![vec![Rational::zero(); m]; 2];
        for (pos, &o) in order.iter().enumerate() {
            let first = match (pos.cmp(&k), x) {
                (std::cmp::Ordering::Less, _) => Rational::one(),
                (std::cmp::Ordering::Equal, Some(x)) => x.clone(),
                _ => Rational::zero(),
            };
            shares[1][o] = Rational::one() - &first;
            shares[0][o] = first;
        }
        Allocation::new(shares).expect("split is a valid allocation")
    };

    let mut examined = 0;
    for k in 0..=m {
        examined += 1;
        let alloc = split(k, None);
        if is_fair(inst, &alloc, spec)? {
            return finish(inst, spec, Objective::Sharings, alloc, examined);
        }
    }
    let forms = fairness_forms(inst, spec)?;
    for k in 0..m {
        examined += 1;
        // Each form is affine in x: f(x) = f(0) + (f(1) - f(0)) x >= 0.
        let (at0, at1) = (
            split(k, Some(&Rational::zero())),
            split(k, Some(&Rational::one())),
        );
        let mut lo = Rational::zero();
        let mut hi = Rational::one();
        for f in &forms {
            let a = f.eval(&at0);
            let b = f.eval(&at1) - &a;
            if b.is_zero() {
                if a.is_negative() {
                    hi = -Rational::one();
                }
            } else if b.is_positive() {
                lo = lo.max(-&a / &b);
            } else {
                hi = hi.min(-&a / &b);
            }
        }
        if lo <= hi {
            return finish(
                inst,
                spec,
                Objective::Sharings,
                split(k, Some(&lo)),
                examined,
            );
        }
    }
    Err(Error::NoFairAllocation)
}

/// A vertex of `{z : u_i(z_j) = V_i / n for all i, j}`: every agent values
/// every bundle equally, with at most `n(n-1)` sharings.
pub fn solve_consensus(inst: &Instance) -> Result<Allocation> {
    let n = inst.num_agents();
    let m = inst.num_objects();
    let var = |i: usize, o: usize| i * m + o;
    let mut lp = LinearProgram::new(n * m);
    for o in 0..m {
        let terms: Vec<_> = (0..n).map(|i| (var(i, o), Rational::one())).collect();
        lp.add_sparse(&terms, Relation::Eq, Rational::one())?;
    }
    let share = Rational::new(1.into(), (n as i64).into());
    for i in 0..n {
        let target = inst.row_sum(i) * &share;
        for j in 0..n - 1 {
            let terms: Vec<_> = (0..m)
                .filter(|&o| !inst.value(i, o).is_zero())
                .map(|o| (var(j, o), inst.value(i, o).clone()))
                .collect();
            lp.add_sparse(&terms, Relation::Eq, target.clone())?;
        }
    }
    let point = basic_feasible_point(&lp).expect("the equal split satisfies the consensus LP");
    let shares = (0..n).map(|i| point[i * m..(i + 1) * m].to_vec()).collect();
    let alloc = Allocation::for_instance(inst, shares)?;
    for i in 0..n {
        let target = inst.row_sum(i) * &share;
        for j in 0..n {
            assert_eq!(
                bundle_value(inst, &alloc, i, j)?,
                target,
                "consensus violated"
            );
        }
    }
    Ok(alloc)
}

/// Everything [`check_allocation`] reports about an allocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub fair: bool,
    pub fpo: bool,
    pub nonmalicious: bool,
    pub utilities: Vec<Rational>,
    pub stats: SharingStats,
    /// Present when the allocation is fPO.
    pub certificate: Option<WeightCertificate>,
    /// A cycle with product below one, when one exists.
    pub cycle: Option<Cycle>,
}

pub fn check_allocation(
    inst: &Instance,
    alloc: &Allocation,
    spec: &FairnessSpec,
) -> Result<CheckReport> {
    alloc.check_dimensions(inst)?;
    let g = ucg_of(alloc);
    let nonmalicious = is_nonmalicious(inst, &g);
    let cycle = dcg_of(inst, &g).find_violating_cycle();
    let fpo = nonmalicious && cycle.is_none();
    Ok(CheckReport {
        fair: is_fair(inst, alloc, spec)?,
        fpo,
        nonmalicious,
        utilities: utilities(inst, alloc)?,
        stats: sharing_stats(inst, alloc),
        certificate: if fpo {
            Some(po_weights(inst, alloc)?)
        } else {
            None
        },
        cycle,
    })
}
