//! Enumeration of every consumption graph an fPO allocation can have.
//!
//! Two agents are handled directly: an fPO split is determined by a price
//! ratio threshold, with free choices only for objects exactly at the
//! threshold and for objects both agents value at zero. More agents are added
//! one at a time: each old agent `i` re-splits its bundle with the newcomer
//! using the two-agent rule, every combination is composed into a candidate,
//! and candidates are filtered through the fPO test and deduplicated.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::degeneracy::degeneracy;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::graph::{dcg_of_masks, is_fpo_graph, ConsumptionGraph};
use crate::model::Instance;
use crate::rational::Rational;

/// Default cap on `D(v) * n(n-1)/2` before enumeration refuses to run.
pub const DEFAULT_DEGENERACY_BUDGET: u64 = 24;

/// Split codes for one object between two agents `a` and `b`.
const TO_A: u8 = 1;
const TO_B: u8 = 2;
const BOTH: u8 = TO_A | TO_B;

/// A deduplicated set of fPO consumption graphs in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpoGraphSet {
    num_agents: usize,
    num_objects: usize,
    graphs: Vec<ConsumptionGraph>,
}

impl FpoGraphSet {
    /// Sorts and deduplicates `graphs`; each must have the given shape.
    pub fn from_graphs(
        num_agents: usize,
        num_objects: usize,
        mut graphs: Vec<ConsumptionGraph>,
    ) -> Result<Self> {
        if let Some(g) = graphs
            .iter()
            .find(|g| g.num_agents() != num_agents || g.num_objects() != num_objects)
        {
            return Err(Error::Dimension(format!(
                "graph is {}x{}, set is {num_agents}x{num_objects}",
                g.num_agents(),
                g.num_objects()
            )));
        }
        graphs.sort_unstable();
        graphs.dedup();
        Ok(Self {
            num_agents,
            num_objects,
            graphs,
        })
    }

    pub fn num_agents(&self) -> usize {
        self.num_agents
    }

    pub fn num_objects(&self) -> usize {
        self.num_objects
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn graphs(&self) -> &[ConsumptionGraph] {
        &self.graphs
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ConsumptionGraph> {
        self.graphs.iter()
    }

    pub fn contains(&self, g: &ConsumptionGraph) -> bool {
        self.graphs.binary_search(g).is_ok()
    }

    pub fn into_graphs(self) -> Vec<ConsumptionGraph> {
        self.graphs
    }
}

impl<'a> IntoIterator for &'a FpoGraphSet {
    type Item = &'a ConsumptionGraph;
    type IntoIter = std::slice::Iter<'a, ConsumptionGraph>;

    fn into_iter(self) -> Self::IntoIter {
        self.graphs.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerateOptions {
    /// Drop graphs with more sharings than this (applied to the last agent
    /// only; earlier stages must stay complete).
    pub max_sharings: Option<usize>,
    pub execution: Execution,
    pub degeneracy_budget: u64,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self {
            max_sharings: None,
            execution: Execution::default(),
            degeneracy_budget: DEFAULT_DEGENERACY_BUDGET,
        }
    }
}

fn pairs(n: usize) -> u64 {
    (n * (n - 1) / 2) as u64
}

/// `|G(v)| <= 3^((1+D) n(n-1)/2) * m^(n(n-1)/2)`.
pub fn cardinality_bound(n: usize, m: usize, d: usize) -> BigUint {
    let p = pairs(n) as u32;
    BigUint::from(3u32).pow((1 + d as u32) * p) * BigUint::from(m).pow(p)
}

/// Two-agent count bound `3m * 3^D`.
pub fn two_agent_bound(m: usize, d: usize) -> BigUint {
    BigUint::from(3 * m) * BigUint::from(3u32).pow(d as u32)
}

/// No fPO graph has more than `(D+1) n(n-1)/2` sharings.
pub fn sharing_cap(n: usize, d: usize) -> usize {
    (d + 1) * n * (n - 1) / 2
}

/// Refuses instances whose degeneracy would blow up the enumeration.
pub fn check_degeneracy_budget(inst: &Instance, budget: u64) -> Result<usize> {
    let d = degeneracy(inst);
    let exponent = d as u64 * pairs(inst.num_agents());
    if exponent > budget {
        return Err(Error::DegeneracyTooHigh {
            degeneracy: d,
            exponent,
            budget,
        });
    }
    Ok(d)
}

/// Every fPO split of `objects` between agents `a` and `b`, as one code per
/// object (`TO_A`, `TO_B` or `BOTH`), sorted and deduplicated.
fn two_agent_splits(inst: &Instance, a: usize, b: usize, objects: &[usize]) -> Vec<Vec<u8>> {
    let mut forced = vec![0u8; objects.len()];
    let mut zeros = Vec::new();
    // (position, |v_a| / |v_b|, is a good for both)
    let mut ranked: Vec<(usize, Rational, bool)> = Vec::new();
    for (p, &o) in objects.iter().enumerate() {
        let (va, vb) = (inst.value(a, o), inst.value(b, o));
        match (va.cmp(&Rational::zero()), vb.cmp(&Rational::zero())) {
            (Ordering::Greater, Ordering::Greater) => ranked.push((p, va / vb, true)),
            (Ordering::Less, Ordering::Less) => ranked.push((p, va / vb, false)),
            (Ordering::Equal, Ordering::Equal) => zeros.push(p),
            // Mixed signs: only the larger value is a non-malicious consumer.
            _ => forced[p] = if va > vb { TO_A } else { TO_B },
        }
    }
    let mut thresholds: Vec<&Rational> = ranked.iter().map(|(_, r, _)| r).collect();
    thresholds.sort_unstable();
    thresholds.dedup();

    let mut out = Vec::new();
    if thresholds.is_empty() {
        push_choices(&forced, &zeros, &mut out);
    }
    for t in thresholds {
        let mut base = forced.clone();
        let mut open = zeros.clone();
        for (p, r, good) in &ranked {
            base[*p] = match (r.cmp(t), good) {
                (Ordering::Equal, _) => {
                    open.push(*p);
                    continue;
                }
                (Ordering::Greater, true) | (Ordering::Less, false) => TO_A,
                _ => TO_B,
            };
        }
        push_choices(&base, &open, &mut out);
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Appends `base` with every one of the `3^|open|` code choices at `open`.
fn push_choices(base: &[u8], open: &[usize], out: &mut Vec<Vec<u8>>) {
    let mut codes = base.to_vec();
    let mut digits = vec![0u8; open.len()];
    loop {
        for (&p, &d) in open.iter().zip(&digits) {
            codes[p] = [TO_A, TO_B, BOTH][usize::from(d)];
        }
        out.push(codes.clone());
        let Some(k) = digits.iter().position(|&d| d < 2) else {
            return;
        };
        digits[k] += 1;
        digits[..k].fill(0);
    }
}

/// All fPO graphs of a two-agent instance.
pub fn enumerate_two_agents(inst: &Instance) -> Result<FpoGraphSet> {
    if inst.num_agents() != 2 {
        return Err(Error::Precondition(format!(
            "two-agent enumeration on {} agents",
            inst.num_agents()
        )));
    }
    Ok(base_stage(inst, None))
}

fn base_stage(inst: &Instance, max_sharings: Option<usize>) -> FpoGraphSet {
    let m = inst.num_objects();
    let objects: Vec<usize> = (0..m).collect();
    let graphs = two_agent_splits(inst, 0, 1, &objects)
        .into_iter()
        .map(|codes| {
            ConsumptionGraph::from_masks_unchecked(2, codes.into_iter().map(u16::from).collect())
        })
        .filter(|g| max_sharings.is_none_or(|cap| g.num_sharings() <= cap))
        .inspect(|g| debug_assert!(is_fpo_graph(inst, g), "threshold split {g:?} is not fPO"))
        .collect();
    FpoGraphSet::from_graphs(2, m, graphs).expect("graphs have the instance shape")
}

/// Adds the next agent to a complete set of fPO graphs for a prefix of
/// `inst`'s agents. `inst` may have more agents than the result; only the
/// first `gs.num_agents() + 1` are used.
pub fn extend_with_agent(
    inst: &Instance,
    gs: &FpoGraphSet,
    execution: Execution,
) -> Result<FpoGraphSet> {
    extend_stage(inst, gs, None, execution)
}

fn extend_stage(
    inst: &Instance,
    gs: &FpoGraphSet,
    max_sharings: Option<usize>,
    execution: Execution,
) -> Result<FpoGraphSet> {
    let new = gs.num_agents();
    if new >= inst.num_agents() || gs.num_objects() != inst.num_objects() {
        return Err(Error::Dimension(format!(
            "cannot extend {}-agent graphs over {} objects for a {}x{} instance",
            new,
            gs.num_objects(),
            inst.num_agents(),
            inst.num_objects()
        )));
    }
    let prefix = inst.prefix_agents(new + 1)?;
    let mut graphs = execution.flat_map(gs.graphs(), |g| {
        let mut local = extend_graph(&prefix, g, max_sharings);
        local.sort_unstable();
        local.dedup();
        local
    });
    graphs.sort_unstable();
    graphs.dedup();
    FpoGraphSet::from_graphs(new + 1, inst.num_objects(), graphs)
}

/// Candidates obtained from `g` by letting each old agent re-split its bundle
/// with the new agent (the last agent of `inst`), filtered to fPO graphs.
fn extend_graph(
    inst: &Instance,
    g: &ConsumptionGraph,
    max_sharings: Option<usize>,
) -> Vec<ConsumptionGraph> {
    let new = g.num_agents();
    let bundles: Vec<Vec<usize>> = (0..new).map(|i| g.bundle(i)).collect();
    let options: Vec<Vec<Vec<u8>>> = bundles
        .iter()
        .enumerate()
        .map(|(i, bundle)| two_agent_splits(inst, i, new, bundle))
        .collect();
    // An object's final consumer set is known once its last old consumer
    // has chosen a split.
    let settled_at: Vec<usize> = g
        .masks()
        .iter()
        .map(|&mask| 15 - mask.leading_zeros() as usize)
        .collect();
    let mut search = Extension {
        inst,
        new,
        bundles: &bundles,
        options: &options,
        settled_at: &settled_at,
        max_sharings,
        masks: vec![0; g.num_objects()],
        out: Vec::new(),
    };
    search.descend(0);
    search.out
}

struct Extension<'a> {
    inst: &'a Instance,
    new: usize,
    bundles: &'a [Vec<usize>],
    options: &'a [Vec<Vec<u8>>],
    settled_at: &'a [usize],
    max_sharings: Option<usize>,
    masks: Vec<u16>,
    out: Vec<ConsumptionGraph>,
}

impl Extension<'_> {
    fn descend(&mut self, agent: usize) {
        if agent == self.new {
            let g = ConsumptionGraph::from_masks_unchecked(self.new + 1, self.masks.clone());
            if is_fpo_graph(self.inst, &g) {
                self.out.push(g);
            }
            return;
        }
        let settles_here = self.settled_at.contains(&agent);
        let saved = self.masks.clone();
        for codes in &self.options[agent] {
            for (&o, &code) in self.bundles[agent].iter().zip(codes) {
                if code & TO_A != 0 {
                    self.masks[o] |= 1 << agent;
                }
                if code & TO_B != 0 {
                    self.masks[o] |= 1 << self.new;
                }
            }
            if self.within_cap()
                && (!settles_here || agent + 1 == self.new || self.settled_ok(agent))
            {
                self.descend(agent + 1);
            }
            self.masks.copy_from_slice(&saved);
        }
    }

    /// Masks only grow further down, so partial sharings are a lower bound.
    fn within_cap(&self) -> bool {
        self.max_sharings.is_none_or(|cap| {
            let partial: usize = self
                .masks
                .iter()
                .map(|m| (m.count_ones() as usize).saturating_sub(1))
                .sum();
            partial <= cap
        })
    }

    /// Settled objects keep their arcs in every completion, so a violating
    /// cycle among them rules the whole subtree out.
    fn settled_ok(&self, agent: usize) -> bool {
        dcg_of_masks(self.inst, &self.masks, |o| self.settled_at[o] <= agent)
            .find_violating_cycle()
            .is_none()
    }
}

/// Every fPO consumption graph of `inst`, optionally capped in sharings.
pub fn enumerate_fpo_graphs(inst: &Instance, max_sharings: Option<usize>) -> Result<FpoGraphSet> {
    enumerate_fpo_graphs_with(
        inst,
        &EnumerateOptions {
            max_sharings,
            ..EnumerateOptions::default()
        },
    )
}

pub fn enumerate_fpo_graphs_with(inst: &Instance, opts: &EnumerateOptions) -> Result<FpoGraphSet> {
    check_degeneracy_budget(inst, opts.degeneracy_budget)?;
    let n = inst.num_agents();
    let cap_at = |k: usize| if k == n { opts.max_sharings } else { None };
    let mut set = base_stage(&inst.prefix_agents(2)?, cap_at(2));
    for k in 3..=n {
        set = extend_stage(inst, &set, cap_at(k), opts.execution)?;
    }
    Ok(set)
}
