//! Brute-force ground truth for small instances.
//!
//! [`brute_fpo_graphs`] tries every support; [`domination_check`] decides
//! Pareto-optimality with a direct LP over all `n * m` shares, sharing no code
//! with the graph characterization.

use num_traits::{One, Zero};

use crate::enumerate::FpoGraphSet;
use crate::error::{Error, Result};
use crate::fairness::{is_fair, sharing_stats, utilities};
use crate::graph::{full_mask, is_fpo_graph, ConsumptionGraph};
use crate::lp::{maximize, LinearProgram, LpOutcome, Relation};
use crate::model::{Allocation, FairnessSpec, Instance, Objective};
use crate::rational::Rational;
use crate::solver::{objective_value, GraphLp};

pub const DEFAULT_ORACLE_BUDGET: u64 = 1_000_000;

/// `(2^n - 1)^m`, saturating.
pub fn support_count(n: usize, m: usize) -> u128 {
    let per_object = (1u128 << n) - 1;
    (0..m).fold(1u128, |acc, _| acc.saturating_mul(per_object))
}

fn check_budget(inst: &Instance, budget: u64) -> Result<()> {
    let size = support_count(inst.num_agents(), inst.num_objects());
    if size > u128::from(budget) {
        return Err(Error::BudgetExceeded { size, budget });
    }
    Ok(())
}

/// Every support that passes the fPO graph test.
pub fn brute_fpo_graphs(inst: &Instance, budget: u64) -> Result<FpoGraphSet> {
    check_budget(inst, budget)?;
    let n = inst.num_agents();
    let m = inst.num_objects();
    let full = full_mask(n);
    let mut masks = vec![1u16; m];
    let mut found = Vec::new();
    loop {
        let g = ConsumptionGraph::new(n, masks.clone())?;
        if is_fpo_graph(inst, &g) {
            found.push(g);
        }
        let Some(k) = masks.iter().position(|&x| x < full) else {
            break;
        };
        masks[k] += 1;
        masks[..k].fill(1);
    }
    FpoGraphSet::from_graphs(n, m, found)
}

/// The smallest objective value of a fair allocation supported on an fPO
/// graph, searching every fPO graph; `None` if no fair fPO allocation exists.
pub fn brute_min_objective(
    inst: &Instance,
    spec: &FairnessSpec,
    objective: Objective,
    budget: u64,
) -> Result<Option<Rational>> {
    let mut best: Option<Rational> = None;
    for g in &brute_fpo_graphs(inst, budget)? {
        let Some(alloc) = GraphLp::build(inst, spec, g)?.solve()? else {
            continue;
        };
        // Re-verify from the definitions rather than trusting the LP rows.
        if !is_fair(inst, &alloc, spec)? {
            return Err(Error::Precondition(format!(
                "fairness LP returned an unfair point for {:?}",
                g.masks()
            )));
        }
        let value = objective_value(objective, &sharing_stats(inst, &alloc));
        if best.as_ref().is_none_or(|b| value < *b) {
            best = Some(value);
        }
    }
    Ok(best)
}

/// The first fair allocation with no sharing at all, searching all `n^m`
/// integral assignments. Pareto-optimality is not required.
pub fn brute_fair_integral(
    inst: &Instance,
    spec: &FairnessSpec,
    budget: u64,
) -> Result<Option<Allocation>> {
    let n = inst.num_agents();
    let m = inst.num_objects();
    let size = (0..m).fold(1u128, |acc, _| acc.saturating_mul(n as u128));
    if size > u128::from(budget) {
        return Err(Error::BudgetExceeded { size, budget });
    }
    let mut owners = vec![0usize; m];
    loop {
        let alloc = Allocation::from_owners(n, &owners)?;
        if is_fair(inst, &alloc, spec)? {
            return Ok(Some(alloc));
        }
        let Some(k) = owners.iter().position(|&x| x + 1 < n) else {
            return Ok(None);
        };
        owners[k] += 1;
        owners[..k].fill(0);
    }
}

/// True iff no allocation weakly improves every agent and strictly improves
/// one: maximize total utility subject to nobody losing, and compare.
pub fn domination_check(inst: &Instance, alloc: &Allocation) -> Result<bool> {
    alloc.check_dimensions(inst)?;
    let n = inst.num_agents();
    let m = inst.num_objects();
    let var = |i: usize, o: usize| i * m + o;
    let mut lp = LinearProgram::new(n * m);
    for o in 0..m {
        let terms: Vec<_> = (0..n).map(|i| (var(i, o), Rational::one())).collect();
        lp.add_sparse(&terms, Relation::Eq, Rational::one())?;
    }
    let current = utilities(inst, alloc)?;
    let mut objective = vec![Rational::zero(); n * m];
    for (i, u) in current.iter().enumerate() {
        let terms: Vec<_> = (0..m)
            .map(|o| (var(i, o), inst.value(i, o).clone()))
            .collect();
        lp.add_sparse(&terms, Relation::Ge, u.clone())?;
        for o in 0..m {
            objective[var(i, o)] = inst.value(i, o).clone();
        }
    }
    match maximize(&lp, &objective)? {
        LpOutcome::Optimal { value, .. } => Ok(value == current.iter().sum::<Rational>()),
        other => unreachable!("domination LP is feasible and bounded, got {other:?}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_fpo;
    use crate::improve::eliminate_cycles;
    use crate::instances::{
        fig1_left, fig1_right, gen_identical_partition, gen_random, identical_goods,
    };
    use crate::rational::int;

    #[test]
    fn graph_counts() {
        let (inst, _) = fig1_left();
        assert_eq!(
            brute_fpo_graphs(&inst, DEFAULT_ORACLE_BUDGET)
                .unwrap()
                .len(),
            7
        );
        let one = Instance::from_ints(&[&[1], &[2]]).unwrap();
        assert_eq!(
            brute_fpo_graphs(&one, DEFAULT_ORACLE_BUDGET).unwrap().len(),
            3
        );
        let same = Instance::from_ints(&[&[1, 2], &[1, 2], &[1, 2]]).unwrap();
        assert_eq!(
            brute_fpo_graphs(&same, DEFAULT_ORACLE_BUDGET)
                .unwrap()
                .len(),
            49
        );
    }

    #[test]
    fn budget_is_enforced() {
        let inst = gen_random(4, 8, 1, 1, 9).unwrap();
        assert!(matches!(
            brute_fpo_graphs(&inst, DEFAULT_ORACLE_BUDGET),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn minimum_sharings() {
        let ef = FairnessSpec::envy_free();
        let min = |inst: &Instance, spec: &FairnessSpec| {
            brute_min_objective(inst, spec, Objective::Sharings, DEFAULT_ORACLE_BUDGET)
                .unwrap()
                .unwrap()
        };
        assert_eq!(
            min(&gen_identical_partition(&[3, 5, 8]).unwrap(), &ef),
            int(0)
        );
        assert_eq!(
            min(&gen_identical_partition(&[3, 5, 9]).unwrap(), &ef),
            int(1)
        );
        assert_eq!(
            min(&identical_goods(3).unwrap(), &FairnessSpec::proportional()),
            int(2)
        );
    }

    #[test]
    fn integral_fairness_follows_partitions() {
        use crate::instances::gen_perturbed_partition;
        let ef = FairnessSpec::envy_free();
        let exists = |a: &[u64]| {
            brute_fair_integral(
                &gen_perturbed_partition(a).unwrap(),
                &ef,
                DEFAULT_ORACLE_BUDGET,
            )
            .unwrap()
            .is_some()
        };
        assert!(exists(&[2, 3, 4, 5]));
        assert!(!exists(&[3, 5, 9]));
        let found = brute_fair_integral(&gen_identical_partition(&[3, 5, 8]).unwrap(), &ef, 100)
            .unwrap()
            .unwrap();
        assert_eq!(
            sharing_stats(&gen_identical_partition(&[3, 5, 8]).unwrap(), &found).num_sharings,
            0
        );
        assert!(matches!(
            brute_fair_integral(&identical_goods(3).unwrap(), &ef, 2),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn domination_on_figures() {
        let (inst, alloc) = fig1_left();
        assert!(domination_check(&inst, &alloc).unwrap());
        let (inst, alloc) = fig1_right();
        assert!(!domination_check(&inst, &alloc).unwrap());
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]
        #[test]
        fn domination_agrees_with_cycles(
            n in 2usize..=3,
            m in 1usize..=4,
            seed in 0u64..100_000,
            raw in proptest::collection::vec(0u8..3, 12),
        ) {
            let inst = gen_random(n, m, seed, -3, 4).unwrap();
            let mut shares = vec![vec![Rational::zero(); m]; n];
            for o in 0..m {
                let w: Vec<i64> = (0..n).map(|i| i64::from(raw[o * n + i])).collect();
                let total: i64 = w.iter().sum();
                for i in 0..n {
                    shares[i][o] = if total == 0 {
                        int(i64::from(i == o % n))
                    } else {
                        Rational::new(w[i].into(), total.into())
                    };
                }
            }
            let alloc = Allocation::new(shares).unwrap();
            proptest::prop_assert_eq!(domination_check(&inst, &alloc).unwrap(), is_fpo(&inst, &alloc));
            let improved = eliminate_cycles(&inst, &alloc).unwrap();
            proptest::prop_assert!(domination_check(&inst, &improved).unwrap());
        }
    }
}
