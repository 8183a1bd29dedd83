//! Utilities, fairness predicates and sharing measures.

use num_traits::{Signed, Zero};

use crate::error::{check_index, Result};
use crate::model::{Allocation, FairnessKind, FairnessSpec, Instance, SharingStats};
use crate::rational::Rational;

/// `u_i(z_j)`: agent `i`'s value for the bundle held by agent `j`.
pub fn bundle_value(inst: &Instance, alloc: &Allocation, i: usize, j: usize) -> Result<Rational> {
    check_index("agent", i, inst.num_agents())?;
    check_index("agent", j, alloc.num_agents())?;
    alloc.check_dimensions(inst)?;
    Ok(inst.values()[i]
        .iter()
        .zip(&alloc.shares()[j])
        .filter(|(_, z)| !z.is_zero())
        .map(|(v, z)| v * z)
        .sum())
}

/// `u_i(z_i)`.
pub fn utility(inst: &Instance, alloc: &Allocation, i: usize) -> Result<Rational> {
    bundle_value(inst, alloc, i, i)
}

pub fn utilities(inst: &Instance, alloc: &Allocation) -> Result<Vec<Rational>> {
    (0..inst.num_agents())
        .map(|i| utility(inst, alloc, i))
        .collect()
}

/// An affine function of the share matrix, `constant + sum coeff * z[i][o]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    pub terms: Vec<(usize, usize, Rational)>,
    pub constant: Rational,
}

impl LinearForm {
    pub fn eval(&self, alloc: &Allocation) -> Rational {
        self.terms
            .iter()
            .map(|(i, o, c)| c * alloc.share(*i, *o))
            .fold(self.constant.clone(), |acc, x| acc + x)
    }
}

/// The fairness notion as a list of affine forms that must all be `>= 0`.
///
/// Envy-freeness for `(i, j)`: `w_j u_i(z_i) - w_i u_i(z_j)`.
/// Proportionality for `i`: `u_i(z_i) - w_i V_i`.
pub fn fairness_forms(inst: &Instance, spec: &FairnessSpec) -> Result<Vec<LinearForm>> {
    let n = inst.num_agents();
    let m = inst.num_objects();
    let w = spec.weights_for(n)?;
    let mut forms = Vec::new();
    match spec.kind {
        FairnessKind::EnvyFree => {
            for i in 0..n {
                for j in (0..n).filter(|&j| j != i) {
                    let mut terms = Vec::with_capacity(2 * m);
                    for o in 0..m {
                        let v = inst.value(i, o);
                        if v.is_zero() {
                            continue;
                        }
                        terms.push((i, o, &w[j] * v));
                        terms.push((j, o, -(&w[i] * v)));
                    }
                    forms.push(LinearForm {
                        terms,
                        constant: Rational::zero(),
                    });
                }
            }
        }
        FairnessKind::Proportional => {
            for (i, wi) in w.iter().enumerate() {
                let terms = (0..m)
                    .filter(|&o| !inst.value(i, o).is_zero())
                    .map(|o| (i, o, inst.value(i, o).clone()))
                    .collect();
                forms.push(LinearForm {
                    terms,
                    constant: -(wi * inst.row_sum(i)),
                });
            }
        }
    }
    Ok(forms)
}

/// Exact fairness test straight from the definitions.
pub fn is_fair(inst: &Instance, alloc: &Allocation, spec: &FairnessSpec) -> Result<bool> {
    alloc.check_dimensions(inst)?;
    let n = inst.num_agents();
    let w = spec.weights_for(n)?;
    match spec.kind {
        FairnessKind::EnvyFree => {
            for i in 0..n {
                let own = utility(inst, alloc, i)?;
                for j in (0..n).filter(|&j| j != i) {
                    let other = bundle_value(inst, alloc, i, j)?;
                    if &own / &w[i] < other / &w[j] {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        FairnessKind::Proportional => {
            for (i, wi) in w.iter().enumerate() {
                if utility(inst, alloc, i)? < wi * inst.row_sum(i) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

pub fn sharing_stats(inst: &Instance, alloc: &Allocation) -> SharingStats {
    let mut stats = SharingStats {
        num_sharings: 0,
        num_shared_objects: 0,
        shared_value: Rational::zero(),
    };
    for o in 0..alloc.num_objects() {
        let holders: Vec<usize> = (0..alloc.num_agents())
            .filter(|&i| alloc.share(i, o).is_positive())
            .collect();
        if holders.len() > 1 {
            stats.num_sharings += holders.len() - 1;
            stats.num_shared_objects += 1;
            for i in holders {
                stats.shared_value += inst.value(i, o).abs();
            }
        }
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::fig1_left;
    use crate::rational::{int, ratio};

    #[test]
    fn figure_one_utilities() {
        let (inst, alloc) = fig1_left();
        assert_eq!(utility(&inst, &alloc, 0).unwrap(), ratio(21, 4));
        assert_eq!(utility(&inst, &alloc, 1).unwrap(), int(6));
        assert_eq!(bundle_value(&inst, &alloc, 0, 1).unwrap(), ratio(9, 4));
        assert_eq!(bundle_value(&inst, &alloc, 1, 0).unwrap(), ratio(9, 4));
        let split = Allocation::equal_split(&inst);
        assert_eq!(utility(&inst, &split, 0).unwrap(), ratio(15, 4));
    }

    #[test]
    fn figure_one_fairness_and_stats() {
        let (inst, alloc) = fig1_left();
        assert!(is_fair(&inst, &alloc, &FairnessSpec::envy_free()).unwrap());
        let stats = sharing_stats(&inst, &alloc);
        assert_eq!(stats.num_sharings, 1);
        assert_eq!(stats.num_shared_objects, 1);
        assert_eq!(stats.shared_value, ratio(9, 2));
    }

    #[test]
    fn zero_valuations_give_zero_utility() {
        let inst = Instance::from_ints(&[&[0, 0], &[0, 0]]).unwrap();
        let alloc = Allocation::from_owners(2, &[0, 1]).unwrap();
        assert_eq!(utility(&inst, &alloc, 0).unwrap(), int(0));
    }

    #[test]
    fn whole_good_to_one_agent_is_envied() {
        let inst = Instance::from_ints(&[&[1], &[1]]).unwrap();
        let alloc = Allocation::from_owners(2, &[0]).unwrap();
        assert!(!is_fair(&inst, &alloc, &FairnessSpec::envy_free()).unwrap());
        assert!(!is_fair(&inst, &alloc, &FairnessSpec::proportional()).unwrap());
    }

    #[test]
    fn sharing_counts() {
        let inst = Instance::from_ints(&[&[1, 2], &[3, 4], &[5, 6]]).unwrap();
        let owners = Allocation::from_owners(3, &[0, 2]).unwrap();
        let stats = sharing_stats(&inst, &owners);
        assert_eq!((stats.num_sharings, stats.num_shared_objects), (0, 0));
        assert!(stats.shared_value.is_zero());
        let third = ratio(1, 3);
        let alloc = Allocation::new(vec![
            vec![third.clone(), int(1)],
            vec![third.clone(), int(0)],
            vec![third, int(0)],
        ])
        .unwrap();
        let stats = sharing_stats(&inst, &alloc);
        assert_eq!((stats.num_sharings, stats.num_shared_objects), (2, 1));
        assert_eq!(stats.shared_value, int(9));
    }

    #[test]
    fn forms_agree_with_predicate() {
        let (inst, alloc) = fig1_left();
        for spec in [FairnessSpec::envy_free(), FairnessSpec::proportional()] {
            let forms = fairness_forms(&inst, &spec).unwrap();
            let all_ok = forms.iter().all(|f| !f.eval(&alloc).is_negative());
            assert_eq!(all_ok, is_fair(&inst, &alloc, &spec).unwrap());
        }
    }
}
