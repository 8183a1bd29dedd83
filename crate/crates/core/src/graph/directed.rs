use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::model::Instance;
use crate::rational::Rational;

use super::arith::{Small, Weight};
use super::consumption::ConsumptionGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Agent(usize),
    Object(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    AgentToObject,
    ObjectToAgent,
}

/// A weighted arc between an agent and an object.
///
/// `sign` is the sign of the agent's value for the object. An exchange
/// `i -> o -> j` is only meaningful when both arcs carry the same sign, i.e.
/// both agents agree on whether `o` is a good or a bad.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub agent: usize,
    pub object: usize,
    pub direction: Direction,
    pub weight: Rational,
    pub sign: Ordering,
}

impl Edge {
    pub fn from(&self) -> Node {
        match self.direction {
            Direction::AgentToObject => Node::Agent(self.agent),
            Direction::ObjectToAgent => Node::Object(self.object),
        }
    }

    pub fn to(&self) -> Node {
        match self.direction {
            Direction::AgentToObject => Node::Object(self.object),
            Direction::ObjectToAgent => Node::Agent(self.agent),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedConsumptionGraph {
    num_agents: usize,
    num_objects: usize,
    edges: Vec<Edge>,
}

/// A directed cycle `i_1 -> o_1 -> i_2 -> ... -> o_L -> i_1` with its exact product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    /// `(i_k, o_k)` pairs: agent `i_k` passes object `o_k` on to `i_{k+1}`.
    pub steps: Vec<(usize, usize)>,
    pub product: Rational,
}

impl Cycle {
    /// Alternating agent/object node list starting at an agent.
    pub fn nodes(&self) -> Vec<Node> {
        self.steps
            .iter()
            .flat_map(|&(i, o)| [Node::Agent(i), Node::Object(o)])
            .collect()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl DirectedConsumptionGraph {
    pub fn num_agents(&self) -> usize {
        self.num_agents
    }

    pub fn num_objects(&self) -> usize {
        self.num_objects
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, from: Node, to: Node) -> Option<&Edge> {
        self.edges.iter().find(|e| e.from() == from && e.to() == to)
    }

    /// Weight of `i -> o -> j` when both arcs exist with agreeing signs.
    pub fn exchange_weight(&self, i: usize, o: usize, j: usize) -> Option<Rational> {
        let out = self.edge(Node::Agent(i), Node::Object(o))?;
        let back = self.edge(Node::Object(o), Node::Agent(j))?;
        (out.sign == back.sign && out.sign != Ordering::Equal).then(|| &out.weight * &back.weight)
    }

    /// Product of a cycle given as `(i_k, o_k)` steps, or `None` if some
    /// exchange along it is missing.
    pub fn cycle_product(&self, steps: &[(usize, usize)]) -> Option<Rational> {
        let mut product = Rational::one();
        for (k, &(i, o)) in steps.iter().enumerate() {
            let next = steps[(k + 1) % steps.len()].0;
            product *= self.exchange_weight(i, o, next)?;
        }
        Some(product)
    }

    // Object nodes are split into one port per value sign so that a path can
    // only continue through an object to an agent who agrees on its sign.
    fn port(&self, object: usize, sign: Ordering) -> usize {
        let offset = match sign {
            Ordering::Greater => 0,
            Ordering::Less => 1,
            Ordering::Equal => 2,
        };
        self.num_agents + 3 * object + offset
    }

    fn arcs<W>(&self, convert: impl Fn(&Rational) -> Option<W>) -> Option<Vec<(usize, usize, W)>> {
        self.edges
            .iter()
            .map(|e| {
                let port = self.port(e.object, e.sign);
                let w = convert(&e.weight)?;
                Some(match e.direction {
                    Direction::AgentToObject => (e.agent, port, w),
                    Direction::ObjectToAgent => (port, e.agent, w),
                })
            })
            .collect()
    }

    /// Runs the search in word-sized arithmetic when every weight fits and
    /// nothing overflows, and in [`Rational`] otherwise. Both give the same
    /// answer; the fast path only saves time.
    fn search(
        &self,
        extra: &[(usize, usize, Rational)],
        source: Option<usize>,
    ) -> BellmanFord<Rational> {
        let total = self.num_agents + 3 * self.num_objects;
        let fast = self.arcs(Small::from_rational).and_then(|mut arcs| {
            for (a, b, w) in extra {
                arcs.push((*a, *b, Small::from_rational(w)?));
            }
            bellman_ford(total, &arcs, source)
        });
        if let Some(result) = fast {
            return match result {
                BellmanFord::Distances(dist) => BellmanFord::Distances(
                    dist.into_iter()
                        .map(|d| d.map(Small::to_rational))
                        .collect(),
                ),
                BellmanFord::Cycle(c) => BellmanFord::Cycle(c),
            };
        }
        let mut arcs = self.arcs(|w| Some(w.clone())).expect("conversion is total");
        arcs.extend(extra.iter().cloned());
        bellman_ford(total, &arcs, source).expect("exact arithmetic cannot overflow")
    }

    fn steps_from_ports(&self, nodes: &[usize]) -> Vec<(usize, usize)> {
        let n = self.num_agents;
        let start = nodes
            .iter()
            .position(|&x| x < n)
            .expect("cycle has an agent");
        let mut rotated = nodes.to_vec();
        rotated.rotate_left(start);
        rotated
            .chunks(2)
            .map(|pair| (pair[0], (pair[1] - n) / 3))
            .collect()
    }

    /// A cycle with product `< 1`, found by multiplicative Bellman-Ford from a
    /// virtual source (every node starts at distance 1).
    pub fn find_violating_cycle(&self) -> Option<Cycle> {
        let BellmanFord::Cycle(cycle) = self.search(&[], None) else {
            return None;
        };
        let steps = self.steps_from_ports(&cycle);
        let product = self
            .cycle_product(&steps)
            .expect("cycle built from existing arcs");
        assert!(
            product < Rational::one(),
            "extracted cycle has product {product}"
        );
        Some(Cycle { steps, product })
    }

    /// Minimum-product path values from `source` to every agent over this
    /// graph plus extra agent-to-agent arcs; `None` when a product-<1 cycle
    /// is reachable from `source`.
    pub(crate) fn min_product_to_agents(
        &self,
        source: usize,
        extra: &[(usize, usize, Rational)],
    ) -> Option<Vec<Option<Rational>>> {
        match self.search(extra, Some(source)) {
            BellmanFord::Distances(dist) => Some(dist[..self.num_agents].to_vec()),
            BellmanFord::Cycle(_) => None,
        }
    }
}

enum BellmanFord<W> {
    Distances(Vec<Option<W>>),
    Cycle(Vec<usize>),
}

/// Multiplicative Bellman-Ford: `dist[v] = min over paths of the product of
/// weights`. With no `source`, every node starts at 1.
///
/// After each round the predecessor graph is searched for a cycle; any such
/// cycle with product below one is reported at once, so violating graphs are
/// usually rejected long before the `|V|`-th round.
/// `None` if the arithmetic overflowed.
fn bellman_ford<W: Weight>(
    total: usize,
    arcs: &[(usize, usize, W)],
    source: Option<usize>,
) -> Option<BellmanFord<W>> {
    let mut dist: Vec<Option<W>> = match source {
        Some(s) => {
            let mut d = vec![None; total];
            d[s] = Some(W::unit());
            d
        }
        None => vec![Some(W::unit()); total],
    };
    // Predecessor node and the arc index used to reach each node.
    let mut pred: Vec<Option<(usize, usize)>> = vec![None; total];
    for round in 0..=total {
        let mut last_updated = None;
        for (idx, (from, to, weight)) in arcs.iter().enumerate() {
            let Some(d) = &dist[*from] else { continue };
            let candidate = d.times(weight)?;
            let better = match &dist[*to] {
                None => true,
                Some(current) => candidate.below(current)?,
            };
            if better {
                dist[*to] = Some(candidate);
                pred[*to] = Some((*from, idx));
                last_updated = Some(*to);
            }
        }
        let Some(x) = last_updated else {
            return Some(BellmanFord::Distances(dist));
        };
        if let Some(cycle) = predecessor_cycle(&pred) {
            let mut product = W::unit();
            for &v in &cycle {
                let arc = pred[v].expect("cycle node has a predecessor").1;
                product = product.times(&arcs[arc].2)?;
            }
            if product.below(&W::unit())? {
                return Some(BellmanFord::Cycle(cycle));
            }
        }
        if round == total {
            return Some(BellmanFord::Cycle(extract_cycle(x, &pred, total)));
        }
    }
    unreachable!("loop returns in its final round")
}

/// A cycle of the predecessor graph in forward (arc) order, if any.
fn predecessor_cycle(pred: &[Option<(usize, usize)>]) -> Option<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    const DONE: usize = usize::MAX - 1;
    let mut mark = vec![UNSEEN; pred.len()];
    for start in 0..pred.len() {
        let mut v = start;
        while mark[v] == UNSEEN {
            mark[v] = start;
            match pred[v] {
                Some((p, _)) => v = p,
                None => break,
            }
        }
        if mark[v] == start && pred[v].is_some() {
            let mut cycle = vec![v];
            let mut u = pred[v].expect("checked above").0;
            while u != v {
                cycle.push(u);
                u = pred[u].expect("cycle node has a predecessor").0;
            }
            cycle.reverse();
            return Some(cycle);
        }
        let mut u = start;
        while mark[u] == start {
            mark[u] = DONE;
            match pred[u] {
                Some((p, _)) => u = p,
                None => break,
            }
        }
    }
    None
}

fn extract_cycle(start: usize, pred: &[Option<(usize, usize)>], total: usize) -> Vec<usize> {
    let step = |x: usize| pred[x].expect("relaxed node has a predecessor").0;
    let mut x = start;
    for _ in 0..total {
        x = step(x);
    }
    // x now lies on a predecessor cycle; walk it once.
    let mut cycle = vec![x];
    let mut y = step(x);
    while y != x {
        cycle.push(y);
        y = step(y);
    }
    cycle.reverse();
    cycle
}

/// `dcg(z)` rebuilt from the support alone.
///
/// For each consumer `i` of `o`: `i -> o` with weight `v` if `v >= 0`, else
/// `o -> i` with weight `1/|v|`. For each agent with `z < 1` (some other agent
/// consumes `o`): `o -> i` with weight `1/v` if `v > 0`, `i -> o` with weight
/// `|v|` if `v < 0`.
pub fn dcg_of(inst: &Instance, g: &ConsumptionGraph) -> DirectedConsumptionGraph {
    dcg_of_masks(inst, g.masks(), |_| true)
}

/// The arcs of the objects selected by `include`, given per-object consumer
/// masks. Every arc depends only on its own object's mask.
pub(crate) fn dcg_of_masks(
    inst: &Instance,
    masks: &[u16],
    include: impl Fn(usize) -> bool,
) -> DirectedConsumptionGraph {
    let n = inst.num_agents();
    let m = inst.num_objects();
    let mut edges = Vec::new();
    for (o, &mask) in masks.iter().enumerate().filter(|&(o, _)| include(o)) {
        let shared = mask.count_ones() > 1;
        for i in 0..n {
            let v = inst.value(i, o);
            let sign = v.cmp(&Rational::zero());
            let consumes = mask >> i & 1 == 1;
            let partial = !consumes || shared;
            let mut push = |direction, weight| {
                edges.push(Edge {
                    agent: i,
                    object: o,
                    direction,
                    weight,
                    sign,
                })
            };
            if consumes {
                if !v.is_negative() {
                    push(Direction::AgentToObject, v.clone());
                } else {
                    push(Direction::ObjectToAgent, v.abs().recip());
                }
            }
            if partial {
                if v.is_positive() {
                    push(Direction::ObjectToAgent, v.recip());
                } else if v.is_negative() {
                    push(Direction::AgentToObject, v.abs());
                }
            }
        }
    }
    edges.sort_by_key(|e| (e.from(), e.to()));
    DirectedConsumptionGraph {
        num_agents: n,
        num_objects: m,
        edges,
    }
}
