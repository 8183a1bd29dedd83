//! Instances, allocations, and the small enums that describe what to solve for.

use num_traits::{One, Signed, Zero};

use crate::error::{check_index, Error, Result};
use crate::rational::{self, Rational};

/// Largest agent count supported by the bitmask graph encoding.
pub const MAX_AGENTS: usize = 16;

/// An `n x m` valuation matrix with display labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    agents: Vec<String>,
    objects: Vec<String>,
    values: Vec<Vec<Rational>>,
}

impl Instance {
    pub fn new(
        agents: Vec<String>,
        objects: Vec<String>,
        values: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        if agents.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "need at least 2 agents, got {}",
                agents.len()
            )));
        }
        if agents.len() > MAX_AGENTS {
            return Err(Error::InvalidInput(format!(
                "at most {MAX_AGENTS} agents are supported, got {}",
                agents.len()
            )));
        }
        if objects.is_empty() {
            return Err(Error::InvalidInput("need at least 1 object".into()));
        }
        if values.len() != agents.len() {
            return Err(Error::Dimension(format!(
                "{} valuation rows for {} agents",
                values.len(),
                agents.len()
            )));
        }
        for (i, row) in values.iter().enumerate() {
            if row.len() != objects.len() {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries for {} objects",
                    row.len(),
                    objects.len()
                )));
            }
        }
        Ok(Self {
            agents,
            objects,
            values,
        })
    }

    /// Builds an instance with generated labels (`agent1..`, `object1..`).
    pub fn from_values(values: Vec<Vec<Rational>>) -> Result<Self> {
        let n = values.len();
        let m = values.first().map_or(0, Vec::len);
        let agents = (1..=n).map(|i| format!("agent{i}")).collect();
        let objects = (1..=m).map(|o| format!("object{o}")).collect();
        Self::new(agents, objects, values)
    }

    /// Convenience constructor from integer rows.
    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::from_values(
            rows.iter()
                .map(|r| r.iter().map(|&x| rational::int(x)).collect())
                .collect(),
        )
    }

    pub fn num_agents(&self) -> usize {
        self.agents.len()
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn agent_labels(&self) -> &[String] {
        &self.agents
    }

    pub fn object_labels(&self) -> &[String] {
        &self.objects
    }

    pub fn values(&self) -> &[Vec<Rational>] {
        &self.values
    }

    #[inline]
    pub fn value(&self, agent: usize, object: usize) -> &Rational {
        &self.values[agent][object]
    }

    pub fn row_sum(&self, agent: usize) -> Rational {
        self.values[agent].iter().sum()
    }

    pub fn classify_object(&self, object: usize) -> Result<ObjectClass> {
        check_index("object", object, self.num_objects())?;
        let column = self.values.iter().map(|row| &row[object]);
        let (mut pos, mut neg) = (0, 0);
        for v in column {
            if v.is_positive() {
                pos += 1;
            } else if v.is_negative() {
                neg += 1;
            }
        }
        let n = self.num_agents();
        Ok(if pos == n {
            ObjectClass::PureGood
        } else if pos > 0 {
            ObjectClass::Good
        } else if neg == n {
            ObjectClass::Bad
        } else {
            ObjectClass::Neutral
        })
    }

    /// The same instance restricted to its first `k` agents.
    pub fn prefix_agents(&self, k: usize) -> Result<Self> {
        if k < 2 || k > self.num_agents() {
            return Err(Error::InvalidInput(format!("cannot keep {k} agents")));
        }
        Self::new(
            self.agents[..k].to_vec(),
            self.objects.clone(),
            self.values[..k].to_vec(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjectClass {
    PureGood,
    Good,
    Bad,
    Neutral,
}

impl ObjectClass {
    pub fn is_good(self) -> bool {
        matches!(self, ObjectClass::PureGood | ObjectClass::Good)
    }
}

/// Fractional shares `z[i][o]`; every column sums to exactly one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    shares: Vec<Vec<Rational>>,
}

impl Allocation {
    pub fn new(shares: Vec<Vec<Rational>>) -> Result<Self> {
        let n = shares.len();
        if n == 0 {
            return Err(Error::InvalidAllocation("no agents".into()));
        }
        let m = shares[0].len();
        if shares.iter().any(|row| row.len() != m) {
            return Err(Error::InvalidAllocation("ragged share matrix".into()));
        }
        for o in 0..m {
            let mut total = Rational::zero();
            for (i, row) in shares.iter().enumerate() {
                let z = &row[o];
                if z.is_negative() || *z > Rational::one() {
                    return Err(Error::InvalidAllocation(format!(
                        "share z[{i}][{o}] = {z} outside [0, 1]"
                    )));
                }
                total += z;
            }
            if !total.is_one() {
                return Err(Error::InvalidAllocation(format!(
                    "object {o} shares sum to {total}, not 1"
                )));
            }
        }
        Ok(Self { shares })
    }

    /// Builds an allocation and checks it matches the instance dimensions.
    pub fn for_instance(inst: &Instance, shares: Vec<Vec<Rational>>) -> Result<Self> {
        let alloc = Self::new(shares)?;
        alloc.check_dimensions(inst)?;
        Ok(alloc)
    }

    /// Every object split equally among all agents.
    pub fn equal_split(inst: &Instance) -> Self {
        let n = inst.num_agents();
        let share = Rational::new(1.into(), (n as i64).into());
        Self {
            shares: vec![vec![share; inst.num_objects()]; n],
        }
    }

    /// Indivisible allocation from an owner per object.
    pub fn from_owners(n: usize, owners: &[usize]) -> Result<Self> {
        let mut shares = vec![vec![Rational::zero(); owners.len()]; n];
        for (o, &i) in owners.iter().enumerate() {
            check_index("agent", i, n)?;
            shares[i][o] = Rational::one();
        }
        Self::new(shares)
    }

    pub fn num_agents(&self) -> usize {
        self.shares.len()
    }

    pub fn num_objects(&self) -> usize {
        self.shares[0].len()
    }

    #[inline]
    pub fn share(&self, agent: usize, object: usize) -> &Rational {
        &self.shares[agent][object]
    }

    pub fn shares(&self) -> &[Vec<Rational>] {
        &self.shares
    }

    pub fn into_shares(self) -> Vec<Vec<Rational>> {
        self.shares
    }

    pub fn check_dimensions(&self, inst: &Instance) -> Result<()> {
        if self.num_agents() != inst.num_agents() || self.num_objects() != inst.num_objects() {
            return Err(Error::Dimension(format!(
                "allocation is {}x{}, instance is {}x{}",
                self.num_agents(),
                self.num_objects(),
                inst.num_agents(),
                inst.num_objects()
            )));
        }
        Ok(())
    }

    /// Mutable access for crate-internal transformations that re-establish the
    /// column-sum invariant before handing the allocation back.
    pub(crate) fn shares_mut(&mut self) -> &mut Vec<Vec<Rational>> {
        &mut self.shares
    }

    /// Reorders bundles: agent `i` receives the bundle previously held by `perm[i]`.
    pub fn permute_bundles(&self, perm: &[usize]) -> Result<Self> {
        let n = self.num_agents();
        let mut seen = vec![false; n];
        if perm.len() != n {
            return Err(Error::Dimension("permutation length".into()));
        }
        for &p in perm {
            check_index("agent", p, n)?;
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidInput("not a permutation".into()));
            }
        }
        Ok(Self {
            shares: perm.iter().map(|&p| self.shares[p].clone()).collect(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FairnessKind {
    EnvyFree,
    Proportional,
}

/// Fairness notion plus optional entitlements (default: equal, `1/n` each).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FairnessSpec {
    pub kind: FairnessKind,
    weights: Option<Vec<Rational>>,
}

impl FairnessSpec {
    pub fn envy_free() -> Self {
        Self {
            kind: FairnessKind::EnvyFree,
            weights: None,
        }
    }

    pub fn proportional() -> Self {
        Self {
            kind: FairnessKind::Proportional,
            weights: None,
        }
    }

    pub fn weighted(kind: FairnessKind, weights: Vec<Rational>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::InvalidWeights(
                "weights must be strictly positive".into(),
            ));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(Self {
            kind,
            weights: Some(weights),
        })
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    /// Entitlement vector for `n` agents.
    pub fn weights_for(&self, n: usize) -> Result<Vec<Rational>> {
        match &self.weights {
            Some(w) if w.len() == n => Ok(w.clone()),
            Some(w) => Err(Error::Dimension(format!(
                "{} weights for {n} agents",
                w.len()
            ))),
            None => Ok(vec![Rational::new(1.into(), (n as i64).into()); n]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    Sharings,
    SharedObjects,
    SharedValue,
    AnyFeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharingStats {
    pub num_sharings: usize,
    pub num_shared_objects: usize,
    /// Sum of `|v[i][o]|` over agents holding a fractional share of `o`.
    pub shared_value: Rational,
}
