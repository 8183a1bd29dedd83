//! Degree of degeneracy of a valuation matrix.

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use crate::model::Instance;
use crate::rational::Rational;

/// Size of the largest object set on which agents `i` and `j` have
/// proportional values `v_i = r * v_j` for a single `r > 0`.
///
/// Objects both agents value at zero satisfy the relation for every `r`, so
/// they join every ratio class.
pub fn pair_class_size(inst: &Instance, i: usize, j: usize, objects: &[usize]) -> usize {
    let mut both_zero = 0;
    let mut classes: HashMap<Rational, usize> = HashMap::new();
    for &o in objects {
        let (a, b) = (inst.value(i, o), inst.value(j, o));
        if a.is_zero() && b.is_zero() {
            both_zero += 1;
        } else if !a.is_zero() && !b.is_zero() && a.is_positive() == b.is_positive() {
            *classes.entry(a / b).or_default() += 1;
        }
    }
    classes.values().copied().max().unwrap_or(0) + both_zero
}

/// `D(v)`: the largest pairwise proportional class, minus one, clamped at 0.
pub fn degeneracy(inst: &Instance) -> usize {
    let objects: Vec<usize> = (0..inst.num_objects()).collect();
    let n = inst.num_agents();
    let mut best = 0;
    for i in 0..n {
        for j in i + 1..n {
            best = best.max(pair_class_size(inst, i, j, &objects));
        }
    }
    best.saturating_sub(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::fig1_left;
    use crate::rational::{int, ratio};

    #[test]
    fn figure_one_is_non_degenerate() {
        assert_eq!(degeneracy(&fig1_left().0), 0);
    }

    #[test]
    fn identical_rows_reach_the_maximum() {
        let inst = Instance::from_ints(&[&[3, 5, 9, 2], &[3, 5, 9, 2]]).unwrap();
        assert_eq!(degeneracy(&inst), 3);
    }

    #[test]
    fn shared_ratio_pair() {
        let inst = Instance::from_ints(&[&[1, 2, 3], &[2, 4, 5]]).unwrap();
        assert_eq!(degeneracy(&inst), 1);
    }

    #[test]
    fn zeros_join_every_class_and_opposite_signs_never_count() {
        let inst = Instance::from_ints(&[&[0, 0, 1, -1, 2], &[0, 0, 1, 1, 4]]).unwrap();
        // two both-zero objects join the singleton ratio classes {2} and {4}
        assert_eq!(degeneracy(&inst), 2);
        let all_zero = Instance::from_ints(&[&[0, 0, 0], &[0, 0, 0]]).unwrap();
        assert_eq!(degeneracy(&all_zero), 2);
        let opposite = Instance::from_ints(&[&[1, -1], &[-1, 1]]).unwrap();
        assert_eq!(degeneracy(&opposite), 0);
    }

    /// Independent brute force: for every pair and every candidate ratio r
    /// count objects with v_i = r v_j.
    fn brute(inst: &Instance) -> usize {
        let n = inst.num_agents();
        let m = inst.num_objects();
        let mut best = 0;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let mut candidates: Vec<Rational> = (0..m)
                    .filter(|&o| !inst.value(j, o).is_zero())
                    .map(|o| inst.value(i, o) / inst.value(j, o))
                    .filter(|r| r.is_positive())
                    .collect();
                candidates.push(int(1));
                for r in candidates {
                    let count = (0..m)
                        .filter(|&o| *inst.value(i, o) == &r * inst.value(j, o))
                        .count();
                    best = best.max(count);
                }
            }
        }
        best.saturating_sub(1)
    }

    proptest::proptest! {
        #[test]
        fn matches_brute_force(rows in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 4), 2..=3)) {
            let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
            let inst = Instance::from_ints(&refs).unwrap();
            proptest::prop_assert_eq!(degeneracy(&inst), brute(&inst));
        }

        #[test]
        fn invariant_under_row_rescaling(
            rows in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 5), 2..=3),
            scale in 1i64..=7,
            agent in 0usize..2,
        ) {
            let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
            let inst = Instance::from_ints(&refs).unwrap();
            let mut values = inst.values().to_vec();
            for v in &mut values[agent] {
                *v *= ratio(scale, 3);
            }
            let scaled = Instance::from_values(values).unwrap();
            proptest::prop_assert_eq!(degeneracy(&inst), degeneracy(&scaled));
        }
    }
}
