use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{Allocation, Instance, ObjectClass};
use crate::rational::Rational;

/// Undirected consumption graph: for each object, the bitmask of agents
/// consuming a positive share of it.
///
/// The mask vector is the canonical identity; ordering is lexicographic on it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConsumptionGraph {
    masks: Vec<u16>,
    num_agents: usize,
}

impl ConsumptionGraph {
    pub fn new(num_agents: usize, masks: Vec<u16>) -> Result<Self> {
        let full = full_mask(num_agents);
        for (o, &mask) in masks.iter().enumerate() {
            if mask == 0 || mask & !full != 0 {
                return Err(Error::InvalidInput(format!(
                    "object {o} has invalid consumer set {mask:#b}"
                )));
            }
        }
        Ok(Self { masks, num_agents })
    }

    pub(crate) fn from_masks_unchecked(num_agents: usize, masks: Vec<u16>) -> Self {
        debug_assert!(masks.iter().all(|&m| m != 0));
        Self { masks, num_agents }
    }

    pub fn num_agents(&self) -> usize {
        self.num_agents
    }

    pub fn num_objects(&self) -> usize {
        self.masks.len()
    }

    pub fn masks(&self) -> &[u16] {
        &self.masks
    }

    #[inline]
    pub fn consumes(&self, agent: usize, object: usize) -> bool {
        self.masks[object] >> agent & 1 == 1
    }

    /// `S_o` as a sorted list of agents.
    pub fn consumers(&self, object: usize) -> Vec<usize> {
        agents_in(self.masks[object])
    }

    /// Objects adjacent to `agent`.
    pub fn bundle(&self, agent: usize) -> Vec<usize> {
        (0..self.num_objects())
            .filter(|&o| self.consumes(agent, o))
            .collect()
    }

    pub fn is_shared(&self, object: usize) -> bool {
        self.masks[object].count_ones() > 1
    }

    pub fn num_edges(&self) -> usize {
        self.masks.iter().map(|m| m.count_ones() as usize).sum()
    }

    pub fn num_sharings(&self) -> usize {
        self.num_edges() - self.num_objects()
    }

    pub fn num_shared_objects(&self) -> usize {
        self.masks.iter().filter(|m| m.count_ones() > 1).count()
    }

    /// Sum of `|v[i][o]|` over every consumer `i` of every shared object `o`.
    pub fn shared_value(&self, inst: &Instance) -> Rational {
        let mut total = Rational::zero();
        for o in (0..self.num_objects()).filter(|&o| self.is_shared(o)) {
            for i in self.consumers(o) {
                total += inst.value(i, o).abs();
            }
        }
        total
    }

    pub fn check_instance(&self, inst: &Instance) -> Result<()> {
        if self.num_agents != inst.num_agents() || self.num_objects() != inst.num_objects() {
            return Err(Error::Dimension(format!(
                "graph is {}x{}, instance is {}x{}",
                self.num_agents,
                self.num_objects(),
                inst.num_agents(),
                inst.num_objects()
            )));
        }
        Ok(())
    }

    /// The allocation giving each consumer an equal share of each object.
    pub fn uniform_allocation(&self) -> Allocation {
        let n = self.num_agents;
        let mut shares = vec![vec![Rational::zero(); self.num_objects()]; n];
        for (o, &mask) in self.masks.iter().enumerate() {
            let share = Rational::new(1.into(), i64::from(mask.count_ones()).into());
            for i in agents_in(mask) {
                shares[i][o] = share.clone();
            }
        }
        Allocation::new(shares).expect("uniform shares sum to one")
    }

    /// Undirected cycle in the bipartite agent-object graph, if any, as
    /// `[(i_1, o_1), (i_2, o_2), ...]` where `o_k` is adjacent to `i_k` and `i_{k+1}`.
    pub fn find_undirected_cycle(&self) -> Option<Vec<(usize, usize)>> {
        let n = self.num_agents;
        let total = n + self.num_objects();
        let neighbours = |node: usize| -> Vec<usize> {
            if node < n {
                self.bundle(node).into_iter().map(|o| n + o).collect()
            } else {
                self.consumers(node - n)
            }
        };
        let mut parent: Vec<Option<usize>> = vec![None; total];
        let mut visited = vec![false; total];
        for root in 0..total {
            if visited[root] {
                continue;
            }
            visited[root] = true;
            let mut stack = vec![root];
            while let Some(node) = stack.pop() {
                for next in neighbours(node) {
                    if Some(next) == parent[node] {
                        continue;
                    }
                    if visited[next] {
                        return Some(self.close_cycle(node, next, &parent));
                    }
                    visited[next] = true;
                    parent[next] = Some(node);
                    stack.push(next);
                }
            }
        }
        None
    }

    fn close_cycle(&self, a: usize, b: usize, parent: &[Option<usize>]) -> Vec<(usize, usize)> {
        let path_to_root = |mut x: usize| {
            let mut path = vec![x];
            while let Some(p) = parent[x] {
                path.push(p);
                x = p;
            }
            path
        };
        let pa = path_to_root(a);
        let pb = path_to_root(b);
        // Lowest common ancestor: strip the common suffix.
        let common = pa
            .iter()
            .rev()
            .zip(pb.iter().rev())
            .take_while(|(x, y)| x == y)
            .count();
        let mut cycle: Vec<usize> = pa[..pa.len() - common + 1].to_vec();
        cycle.reverse();
        cycle.extend_from_slice(&pb[..pb.len() - common]);
        // cycle: lca .. a, then b .. (child of lca); closes back to lca.
        let n = self.num_agents;
        let start = cycle
            .iter()
            .position(|&x| x < n)
            .expect("bipartite cycle has agents");
        cycle.rotate_left(start);
        cycle.chunks(2).map(|pair| (pair[0], pair[1] - n)).collect()
    }
}

pub(crate) fn full_mask(n: usize) -> u16 {
    if n >= 16 {
        u16::MAX
    } else {
        (1u16 << n) - 1
    }
}

pub(crate) fn agents_in(mask: u16) -> Vec<usize> {
    (0..16).filter(|i| mask >> i & 1 == 1).collect()
}

/// `ucg(z)`: agent `i` is adjacent to object `o` iff `z[i][o] > 0`.
pub fn ucg_of(alloc: &Allocation) -> ConsumptionGraph {
    let masks = (0..alloc.num_objects())
        .map(|o| {
            (0..alloc.num_agents())
                .filter(|&i| alloc.share(i, o).is_positive())
                .fold(0u16, |m, i| m | 1 << i)
        })
        .collect();
    ConsumptionGraph::from_masks_unchecked(alloc.num_agents(), masks)
}

/// Goods go only to positive valuers, neutral objects only to zero valuers.
pub fn is_nonmalicious(inst: &Instance, g: &ConsumptionGraph) -> bool {
    (0..g.num_objects()).all(|o| object_nonmalicious(inst, g, o))
}

pub(crate) fn object_nonmalicious(inst: &Instance, g: &ConsumptionGraph, o: usize) -> bool {
    let class = inst.classify_object(o).expect("object in range");
    let consumers = g.consumers(o);
    match class {
        ObjectClass::PureGood | ObjectClass::Good => {
            consumers.iter().all(|&i| inst.value(i, o).is_positive())
        }
        ObjectClass::Neutral => consumers.iter().all(|&i| inst.value(i, o).is_zero()),
        ObjectClass::Bad => true,
    }
}
