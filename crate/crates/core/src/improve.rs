//! Pareto improvements: repairing malicious shares and trading along cycles
//! until the consumption graph is a forest.
//!
//! A cyclic trade moves `eps_k` of `o_k` from `i_k` to `i_{k+1}` (or, for a
//! bad, from `i_{k+1}` to `i_k`). Choosing
//! `eps_k = eps_1 * prod_{q=2..k} |v(i_q, o_{q-1})| / |v(i_q, o_q)|` keeps every
//! agent but the first exactly indifferent; the first gains iff the cycle
//! product is at most one. `eps_1` is the largest value that keeps every share
//! nonnegative, so each trade empties at least one share.

use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::fairness::utilities;
use crate::graph::{dcg_of, ucg_of};
use crate::lp::{maximize, LinearProgram, LpOutcome, Relation};
use crate::model::{Allocation, Instance, ObjectClass};
use crate::rational::Rational;

/// Moves shares of goods held by non-positive valuers to the first positive
/// valuer, and shares of neutral objects held by negative valuers to the first
/// zero valuer. Nobody loses utility.
#[allow(clippy::needless_range_loop)] // column-wise over agents
pub fn repair_malicious(inst: &Instance, alloc: &Allocation) -> Allocation {
    let mut z = alloc.clone();
    let shares = z.shares_mut();
    for o in 0..inst.num_objects() {
        let class = inst.classify_object(o).expect("object in range");
        let (target, misplaced): (usize, fn(&Rational) -> bool) = match class {
            ObjectClass::Bad => continue,
            ObjectClass::PureGood | ObjectClass::Good => (
                (0..inst.num_agents())
                    .find(|&i| inst.value(i, o).is_positive())
                    .expect("a good has a positive valuer"),
                |v| !v.is_positive(),
            ),
            ObjectClass::Neutral => (
                (0..inst.num_agents())
                    .find(|&i| inst.value(i, o).is_zero())
                    .expect("a neutral object has a zero valuer"),
                |v| v.is_negative(),
            ),
        };
        for j in 0..inst.num_agents() {
            if misplaced(inst.value(j, o)) && !shares[j][o].is_zero() {
                let moved = std::mem::take(&mut shares[j][o]);
                shares[target][o] += moved;
            }
        }
    }
    z
}

/// What [`eliminate_cycles_traced`] did, for inspection and tests.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EliminationTrace {
    /// Trades along cycles with product below one.
    pub improving_trades: usize,
    /// Trades along product-one cycles of the undirected graph, with the
    /// undirected edge count before and after each.
    pub neutral_trades: Vec<(usize, usize)>,
    /// Whether the trade loop hit its iteration guard and an LP finished the
    /// Pareto improvement instead.
    pub used_lp_fallback: bool,
}

/// A dominating fPO allocation whose consumption graph is a forest, so it has
/// at most `n - 1` sharings.
pub fn eliminate_cycles(inst: &Instance, alloc: &Allocation) -> Result<Allocation> {
    eliminate_cycles_traced(inst, alloc).map(|(z, _)| z)
}

pub fn eliminate_cycles_traced(
    inst: &Instance,
    alloc: &Allocation,
) -> Result<(Allocation, EliminationTrace)> {
    alloc.check_dimensions(inst)?;
    let mut trace = EliminationTrace::default();
    let mut z = repair_malicious(inst, alloc);
    consolidate_neutral(inst, &mut z);

    let n = inst.num_agents();
    let m = inst.num_objects();
    let guard = 8 * n * m * (n + m) + 64;
    loop {
        let d = dcg_of(inst, &ucg_of(&z));
        let Some(cycle) = d.find_violating_cycle() else {
            break;
        };
        if trace.improving_trades == guard {
            z = pareto_optimize(inst, &z)?;
            consolidate_neutral(inst, &mut z);
            trace.used_lp_fallback = true;
            break;
        }
        trade(inst, &mut z, &cycle.steps);
        trace.improving_trades += 1;
    }

    loop {
        let g = ucg_of(&z);
        let Some(mut steps) = g.find_undirected_cycle() else {
            break;
        };
        let d = dcg_of(inst, &g);
        let product = d
            .cycle_product(&steps)
            .expect("both orientations of a consumption cycle exist");
        if product > Rational::one() {
            steps = reverse_cycle(&steps);
        }
        debug_assert_eq!(d.cycle_product(&steps), Some(Rational::one()));
        let before = g.num_edges();
        trade(inst, &mut z, &steps);
        let after = ucg_of(&z).num_edges();
        assert!(after < before, "cycle trade did not remove an edge");
        trace.neutral_trades.push((before, after));
    }
    Ok((z, trace))
}

/// Equal split followed by cycle elimination: proportional, fPO, and at most
/// `n - 1` sharings.
pub fn prop_fpo_simple(inst: &Instance) -> Result<Allocation> {
    eliminate_cycles(inst, &Allocation::equal_split(inst))
}

/// Neutral objects are worth nothing to their (zero-valuing) consumers, so
/// handing each to a single consumer changes no utility and keeps them off
/// every cycle.
#[allow(clippy::needless_range_loop)]
fn consolidate_neutral(inst: &Instance, z: &mut Allocation) {
    let shares = z.shares_mut();
    for o in 0..inst.num_objects() {
        if inst.classify_object(o).expect("object in range") != ObjectClass::Neutral {
            continue;
        }
        let holders: Vec<usize> = (0..inst.num_agents())
            .filter(|&i| shares[i][o].is_positive())
            .collect();
        if let Some((&first, rest)) = holders.split_first() {
            for &j in rest {
                let moved = std::mem::take(&mut shares[j][o]);
                shares[first][o] += moved;
            }
        }
    }
}

/// `[(i_1, o_1), ..., (i_L, o_L)]` traversed backwards, starting at `i_1`.
fn reverse_cycle(steps: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let len = steps.len();
    (0..len)
        .map(|k| {
            let agent = steps[(len - k) % len].0;
            let object = steps[(2 * len - k - 1) % len].1;
            (agent, object)
        })
        .collect()
}

fn trade(inst: &Instance, z: &mut Allocation, steps: &[(usize, usize)]) {
    let len = steps.len();
    let next = |k: usize| steps[(k + 1) % len].0;
    let good = |k: usize| inst.value(steps[k].0, steps[k].1).is_positive();

    // Relative amounts: agent i_k receives o_{k-1} and gives up o_k.
    let mut scale = vec![Rational::one(); len];
    for k in 1..len {
        let (agent, object) = steps[k];
        let received = inst.value(agent, steps[k - 1].1).abs();
        let given = inst.value(agent, object).abs();
        scale[k] = &scale[k - 1] * received / given;
    }
    let shares = z.shares_mut();
    let capacity = |k: usize| {
        let (agent, object) = steps[k];
        if good(k) {
            shares[agent][object].clone()
        } else {
            shares[next(k)][object].clone()
        }
    };
    let eps = (0..len)
        .map(|k| capacity(k) / &scale[k])
        .min()
        .expect("cycle is nonempty");
    debug_assert!(eps.is_positive());
    for k in 0..len {
        let (agent, object) = steps[k];
        let amount = &eps * &scale[k];
        let (from, to) = if good(k) {
            (agent, next(k))
        } else {
            (next(k), agent)
        };
        shares[from][object] -= &amount;
        shares[to][object] += amount;
    }
}

/// Maximizes total utility over allocations that weakly dominate `z`. The
/// optimum is Pareto-optimal, since anything dominating it would have a
/// larger total.
fn pareto_optimize(inst: &Instance, z: &Allocation) -> Result<Allocation> {
    let n = inst.num_agents();
    let m = inst.num_objects();
    let var = |i: usize, o: usize| i * m + o;
    let mut lp = LinearProgram::new(n * m);
    for o in 0..m {
        let terms: Vec<_> = (0..n).map(|i| (var(i, o), Rational::one())).collect();
        lp.add_sparse(&terms, Relation::Eq, Rational::one())?;
    }
    let current = utilities(inst, z)?;
    for (i, u) in current.into_iter().enumerate() {
        let terms: Vec<_> = (0..m)
            .map(|o| (var(i, o), inst.value(i, o).clone()))
            .collect();
        lp.add_sparse(&terms, Relation::Ge, u)?;
    }
    let mut objective = vec![Rational::zero(); n * m];
    for i in 0..n {
        for o in 0..m {
            objective[var(i, o)] = inst.value(i, o).clone();
        }
    }
    let LpOutcome::Optimal { point, .. } = maximize(&lp, &objective)? else {
        unreachable!("z itself is feasible and utilities are bounded");
    };
    let shares = (0..n).map(|i| point[i * m..(i + 1) * m].to_vec()).collect();
    Allocation::for_instance(inst, shares)
}
