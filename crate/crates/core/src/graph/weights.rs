use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{Allocation, Instance};
use crate::rational::Rational;

use super::consumption::{is_nonmalicious, ucg_of, ConsumptionGraph};
use super::directed::dcg_of;

/// Positive agent weights `lambda` such that every consumed `(i, o)`
/// maximizes `lambda_i * v[i][o]` over agents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightCertificate {
    pub lambda: Vec<Rational>,
}

impl WeightCertificate {
    /// Checks positivity and `lambda_i v_io >= lambda_j v_jo` for every edge `(i, o)`.
    pub fn validate(&self, inst: &Instance, g: &ConsumptionGraph) -> bool {
        let n = inst.num_agents();
        if self.lambda.len() != n || self.lambda.iter().any(|l| !l.is_positive()) {
            return false;
        }
        (0..inst.num_objects()).all(|o| {
            let best = (0..n)
                .map(|j| &self.lambda[j] * inst.value(j, o))
                .max()
                .expect("at least one agent");
            g.consumers(o)
                .into_iter()
                .all(|i| &self.lambda[i] * inst.value(i, o) == best)
        })
    }
}

pub fn po_weights(inst: &Instance, alloc: &Allocation) -> Result<WeightCertificate> {
    alloc.check_dimensions(inst)?;
    po_weights_for_graph(inst, &ucg_of(alloc))
}

/// Weights from minimum-product paths out of agent 0 in the directed
/// consumption graph augmented with a heavy arc between every agent pair.
pub fn po_weights_for_graph(inst: &Instance, g: &ConsumptionGraph) -> Result<WeightCertificate> {
    g.check_instance(inst)?;
    if !is_nonmalicious(inst, g) {
        return Err(Error::NotFpo);
    }
    let n = inst.num_agents();
    let mut base = Rational::one();
    for row in inst.values() {
        for v in row.iter().filter(|v| !v.is_zero()) {
            let a = v.abs();
            let inv = a.recip();
            base = base.max(a).max(inv);
        }
    }
    let heavy = num_traits::pow(base, 2 * (n - 1));
    let extra: Vec<(usize, usize, Rational)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, heavy.clone()))
        .collect();
    let dist = dcg_of(inst, g)
        .min_product_to_agents(0, &extra)
        .ok_or(Error::NotFpo)?;
    let lambda: Vec<Rational> = dist
        .into_iter()
        .map(|d| d.expect("heavy arcs reach every agent"))
        .collect();
    if lambda.iter().any(|l| !l.is_positive()) {
        return Err(Error::NotFpo);
    }
    Ok(WeightCertificate { lambda })
}
