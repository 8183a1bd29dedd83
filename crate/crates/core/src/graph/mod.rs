//! Consumption graphs and the cycle characterization of fractional Pareto
//! optimality.
//!
//! An allocation is fPO iff it is non-malicious and its directed consumption
//! graph has no exchange cycle whose weight product is below one. Only the
//! support of the allocation matters, so every test here also runs on bare
//! [`ConsumptionGraph`]s.

mod arith;
mod consumption;
mod directed;
mod weights;

pub use consumption::{is_nonmalicious, ucg_of, ConsumptionGraph};
pub(crate) use directed::dcg_of_masks;
pub use directed::{dcg_of, Cycle, DirectedConsumptionGraph, Direction, Edge, Node};
pub use weights::{po_weights, po_weights_for_graph, WeightCertificate};

pub(crate) use consumption::full_mask;

use crate::model::{Allocation, Instance};

pub fn find_violating_cycle(d: &DirectedConsumptionGraph) -> Option<Cycle> {
    d.find_violating_cycle()
}

/// Graph-level fPO test: some allocation with this support is fPO iff every
/// allocation with it is.
pub fn is_fpo_graph(inst: &Instance, g: &ConsumptionGraph) -> bool {
    is_nonmalicious(inst, g) && dcg_of(inst, g).find_violating_cycle().is_none()
}

pub fn is_fpo(inst: &Instance, alloc: &Allocation) -> bool {
    is_fpo_graph(inst, &ucg_of(alloc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{fig1_left, fig1_right};

    #[test]
    fn figure_one() {
        let (inst, alloc) = fig1_left();
        assert!(is_fpo(&inst, &alloc));
        let (inst, alloc) = fig1_right();
        assert!(!is_fpo(&inst, &alloc));
    }

    #[test]
    fn identical_pure_goods_every_support_is_fpo() {
        let inst = Instance::from_ints(&[&[3, 1, 2], &[3, 1, 2]]).unwrap();
        for a in 1u16..4 {
            for b in 1u16..4 {
                for c in 1u16..4 {
                    let g = ConsumptionGraph::new(2, vec![a, b, c]).unwrap();
                    assert!(is_fpo_graph(&inst, &g));
                }
            }
        }
    }

    proptest::proptest! {
        // Scaling an agent's row by `c` multiplies its outgoing arcs by `c`
        // and its incoming arcs by `1/c`, leaving every cycle product fixed.
        // Huge factors push the search off the word-sized fast path, so this
        // checks the two arithmetic paths against each other.
        #[test]
        fn huge_scaling_preserves_fpo(
            n in 2usize..=3,
            m in 1usize..=5,
            seed in 0u64..100_000,
            raw in proptest::collection::vec(1u16..8, 5),
        ) {
            let inst = crate::instances::gen_random(n, m, seed, -6, 6).unwrap();
            let full = full_mask(n);
            let masks: Vec<u16> = raw[..m].iter().map(|&x| x & full).map(|x| x.max(1)).collect();
            let g = ConsumptionGraph::new(n, masks).unwrap();
            let huge = crate::rational::parse("1000000000000000000000000000007").unwrap();
            let scaled: Vec<Vec<_>> = inst
                .values()
                .iter()
                .enumerate()
                .map(|(i, row)| row.iter().map(|v| v * huge.pow(i as i32 + 1)).collect())
                .collect();
            let scaled = Instance::from_values(scaled).unwrap();
            let d = dcg_of(&inst, &g).find_violating_cycle();
            let ds = dcg_of(&scaled, &g).find_violating_cycle();
            proptest::prop_assert_eq!(is_fpo_graph(&inst, &g), is_fpo_graph(&scaled, &g));
            proptest::prop_assert_eq!(d.map(|c| c.product), ds.map(|c| c.product));
        }
    }
}
