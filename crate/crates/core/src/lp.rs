//! Exact rational simplex for the small linear programs the solver builds.
//!
//! Dense tableau, two phases, Bland's rule throughout. Phase 1 finds a basic
//! feasible solution; phase 2 (only used by [`maximize`]) optimizes a linear
//! objective from there.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn is_satisfied_by(&self, point: &[Rational]) -> bool {
        let lhs: Rational = self
            .coeffs
            .iter()
            .zip(point)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, x)| c * x)
            .sum();
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    num_vars: usize,
    constraints: Vec<Constraint>,
    nonneg: Vec<bool>,
}

impl LinearProgram {
    /// A program over `num_vars` variables, all constrained to be `>= 0`.
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            constraints: Vec::new(),
            nonneg: vec![true; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn add_constraint(
        &mut self,
        coeffs: Vec<Rational>,
        relation: Relation,
        rhs: Rational,
    ) -> Result<()> {
        if coeffs.len() != self.num_vars {
            return Err(Error::Dimension(format!(
                "{} coefficients for {} variables",
                coeffs.len(),
                self.num_vars
            )));
        }
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        Ok(())
    }

    /// Adds a constraint from sparse `(variable, coefficient)` terms.
    pub fn add_sparse(
        &mut self,
        terms: &[(usize, Rational)],
        relation: Relation,
        rhs: Rational,
    ) -> Result<()> {
        let mut coeffs = vec![Rational::zero(); self.num_vars];
        for (var, c) in terms {
            let slot = coeffs
                .get_mut(*var)
                .ok_or_else(|| Error::Dimension(format!("variable {var} of {}", self.num_vars)))?;
            *slot += c;
        }
        self.add_constraint(coeffs, relation, rhs)
    }

    pub fn set_free(&mut self, var: usize) {
        self.nonneg[var] = false;
    }

    pub fn is_satisfied_by(&self, point: &[Rational]) -> bool {
        point.len() == self.num_vars
            && self
                .nonneg
                .iter()
                .zip(point)
                .all(|(&nn, x)| !nn || !x.is_negative())
            && self.constraints.iter().all(|c| c.is_satisfied_by(point))
    }

    /// Rows of the equality system the simplex works on (after dropping
    /// redundant rows this bounds the nonzeros of a basic solution).
    pub fn num_standard_rows(&self) -> usize {
        self.constraints.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal {
        point: Vec<Rational>,
        value: Rational,
    },
}

/// Any exact feasible point, or `None` when the program is infeasible.
pub fn feasible_point(lp: &LinearProgram) -> Option<Vec<Rational>> {
    basic_feasible_point(lp)
}

/// A vertex of the feasible region: at most as many nonzero variables as
/// there are (non-redundant) constraint rows.
pub fn basic_feasible_point(lp: &LinearProgram) -> Option<Vec<Rational>> {
    let mut tableau = Tableau::build(lp);
    if !tableau.phase_one() {
        return None;
    }
    let point = tableau.point(lp);
    debug_assert!(lp.is_satisfied_by(&point));
    Some(point)
}

/// Maximizes `objective . x` over the feasible region.
pub fn maximize(lp: &LinearProgram, objective: &[Rational]) -> Result<LpOutcome> {
    if objective.len() != lp.num_vars {
        return Err(Error::Dimension("objective length".into()));
    }
    let mut tableau = Tableau::build(lp);
    if !tableau.phase_one() {
        return Ok(LpOutcome::Infeasible);
    }
    // Minimize the negated objective over the split columns.
    let mut cost = vec![Rational::zero(); tableau.width()];
    for (var, c) in objective.iter().enumerate() {
        let (pos, neg) = tableau.var_cols[var];
        cost[pos] = -c.clone();
        if let Some(neg) = neg {
            cost[neg] = c.clone();
        }
    }
    let structural = tableau.num_structural;
    if !tableau.minimize(&cost, |j| j < structural) {
        return Ok(LpOutcome::Unbounded);
    }
    let point = tableau.point(lp);
    let value = objective.iter().zip(&point).map(|(c, x)| c * x).sum();
    Ok(LpOutcome::Optimal { point, value })
}

struct Tableau {
    /// Each row: coefficients for every column, then the right-hand side.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Columns `< num_structural` are variables and slacks; the rest are artificial.
    num_structural: usize,
    var_cols: Vec<(usize, Option<usize>)>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let mut var_cols = Vec::with_capacity(lp.num_vars);
        let mut next = 0;
        for &nn in &lp.nonneg {
            if nn {
                var_cols.push((next, None));
                next += 1;
            } else {
                var_cols.push((next, Some(next + 1)));
                next += 2;
            }
        }
        let num_slacks = lp
            .constraints
            .iter()
            .filter(|c| c.relation != Relation::Eq)
            .count();
        let num_structural = next + num_slacks;

        // Normalize every row to a nonnegative right-hand side first, then
        // decide which rows need an artificial variable.
        let mut normalized = Vec::with_capacity(lp.constraints.len());
        for c in &lp.constraints {
            let flip = c.rhs.is_negative();
            let relation = match (flip, c.relation) {
                (true, Relation::Le) => Relation::Ge,
                (true, Relation::Ge) => Relation::Le,
                (_, r) => r,
            };
            let sign = if flip {
                -Rational::one()
            } else {
                Rational::one()
            };
            normalized.push((c, relation, sign));
        }
        let num_artificial = normalized
            .iter()
            .filter(|(_, r, _)| *r != Relation::Le)
            .count();
        let width = num_structural + num_artificial;

        let mut rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let mut slack = next;
        let mut artificial = num_structural;
        for (c, relation, sign) in normalized {
            let mut row = vec![Rational::zero(); width + 1];
            for (var, coeff) in c.coeffs.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let (pos, neg) = var_cols[var];
                row[pos] = &sign * coeff;
                if let Some(neg) = neg {
                    row[neg] = -(&sign * coeff);
                }
            }
            row[width] = &sign * &c.rhs;
            // The slack keeps the original orientation of the inequality.
            if c.relation != Relation::Eq {
                let slack_sign = if c.relation == Relation::Le {
                    Rational::one()
                } else {
                    -Rational::one()
                };
                row[slack] = &sign * slack_sign;
                slack += 1;
            }
            match relation {
                Relation::Le => basis.push(slack - 1),
                _ => {
                    row[artificial] = Rational::one();
                    basis.push(artificial);
                    artificial += 1;
                }
            }
            rows.push(row);
        }
        Self {
            rows,
            basis,
            num_structural,
            var_cols,
        }
    }

    fn width(&self) -> usize {
        self.rows
            .first()
            .map_or(self.num_structural, |r| r.len() - 1)
    }

    fn phase_one(&mut self) -> bool {
        let width = self.width();
        if width == self.num_structural {
            return true;
        }
        let mut cost = vec![Rational::zero(); width];
        for c in &mut cost[self.num_structural..] {
            *c = Rational::one();
        }
        let bounded = self.minimize(&cost, |_| true);
        debug_assert!(bounded, "phase one objective is bounded below");
        let infeasibility: Rational = self
            .basis
            .iter()
            .zip(&self.rows)
            .filter(|(&b, _)| b >= self.num_structural)
            .map(|(_, row)| row[width].clone())
            .sum();
        if infeasibility.is_positive() {
            return false;
        }
        self.drive_out_artificials();
        true
    }

    /// Pivots zero-valued artificials out of the basis; rows where that is
    /// impossible are linearly redundant and get dropped.
    fn drive_out_artificials(&mut self) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] < self.num_structural {
                r += 1;
                continue;
            }
            let col = (0..self.num_structural).find(|&j| !self.rows[r][j].is_zero());
            match col {
                Some(j) => {
                    self.pivot(r, j);
                    r += 1;
                }
                None => {
                    self.rows.remove(r);
                    self.basis.remove(r);
                }
            }
        }
    }

    /// Minimizes `cost . x` with Bland's rule over columns allowed by `allowed`.
    /// Returns `false` if unbounded.
    fn minimize(&mut self, cost: &[Rational], allowed: impl Fn(usize) -> bool) -> bool {
        let width = self.width();
        loop {
            let entering = (0..width).filter(|&j| allowed(j)).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut reduced = cost[j].clone();
                for (row, &b) in self.rows.iter().zip(&self.basis) {
                    if !cost[b].is_zero() && !row[j].is_zero() {
                        reduced -= &cost[b] * &row[j];
                    }
                }
                reduced.is_negative()
            });
            let Some(j) = entering else { return true };
            let mut leave: Option<(usize, Rational)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !row[j].is_positive() {
                    continue;
                }
                let ratio = &row[width] / &row[j];
                let better = match &leave {
                    None => true,
                    Some((best_r, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*best_r])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, _)) = leave else { return false };
            self.pivot(r, j);
        }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let pivot = self.rows[r][j].clone();
        if !pivot.is_one() {
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x /= &pivot;
                }
            }
        }
        let pivot_row = self.rows[r].clone();
        for (k, row) in self.rows.iter_mut().enumerate() {
            if k == r || row[j].is_zero() {
                continue;
            }
            let factor = row[j].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        self.basis[r] = j;
    }

    fn point(&self, lp: &LinearProgram) -> Vec<Rational> {
        let width = self.width();
        let mut columns = vec![Rational::zero(); width];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            columns[b] = row[width].clone();
        }
        (0..lp.num_vars)
            .map(|var| {
                let (pos, neg) = self.var_cols[var];
                match neg {
                    Some(neg) => &columns[pos] - &columns[neg],
                    None => columns[pos].clone(),
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn lp1(rows: &[(&[i64], Relation, i64)], vars: usize) -> LinearProgram {
        let mut lp = LinearProgram::new(vars);
        for (coeffs, rel, rhs) in rows {
            lp.add_constraint(coeffs.iter().map(|&c| int(c)).collect(), *rel, int(*rhs))
                .unwrap();
        }
        lp
    }

    #[test]
    fn half_point() {
        let lp = lp1(&[(&[1], Relation::Le, 1), (&[2], Relation::Eq, 1)], 1);
        assert_eq!(feasible_point(&lp), Some(vec![ratio(1, 2)]));
    }

    #[test]
    fn infeasible_bound() {
        let lp = lp1(&[(&[1], Relation::Le, -1)], 1);
        assert_eq!(feasible_point(&lp), None);
        assert_eq!(basic_feasible_point(&lp), None);
        let lp = lp1(&[(&[1, 1], Relation::Eq, 1), (&[1, 1], Relation::Ge, 2)], 2);
        assert_eq!(basic_feasible_point(&lp), None);
    }

    #[test]
    fn segment_vertex() {
        let lp = lp1(&[(&[1, 1], Relation::Eq, 1)], 2);
        let p = basic_feasible_point(&lp).unwrap();
        assert!(
            p == vec![int(1), int(0)] || p == vec![int(0), int(1)],
            "{p:?}"
        );
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        let lp = lp1(
            &[
                (&[1, 1, 0], Relation::Eq, 1),
                (&[2, 2, 0], Relation::Eq, 2),
                (&[0, 1, 1], Relation::Eq, 1),
            ],
            3,
        );
        let p = basic_feasible_point(&lp).unwrap();
        assert!(lp.is_satisfied_by(&p));
        assert!(p.iter().filter(|x| !x.is_zero()).count() <= 2);
    }

    #[test]
    fn maximize_small() {
        // max x + y s.t. x + 2y <= 4, 3x + y <= 6
        let lp = lp1(&[(&[1, 2], Relation::Le, 4), (&[3, 1], Relation::Le, 6)], 2);
        match maximize(&lp, &[int(1), int(1)]).unwrap() {
            LpOutcome::Optimal { point, value } => {
                assert_eq!(point, vec![ratio(8, 5), ratio(6, 5)]);
                assert_eq!(value, ratio(14, 5));
            }
            other => panic!("{other:?}"),
        }
        let unbounded = lp1(&[(&[1, -1], Relation::Le, 1)], 2);
        assert_eq!(
            maximize(&unbounded, &[int(0), int(1)]).unwrap(),
            LpOutcome::Unbounded
        );
    }

    #[test]
    fn free_variables() {
        let mut lp = lp1(&[(&[1], Relation::Le, -3)], 1);
        lp.set_free(0);
        let p = feasible_point(&lp).unwrap();
        assert!(p[0] <= int(-3));
        match maximize(&lp, &[int(1)]).unwrap() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, int(-3)),
            other => panic!("{other:?}"),
        }
    }

    fn small_lp() -> impl proptest::strategy::Strategy<Value = LinearProgram> {
        use proptest::prelude::*;
        let row = (
            proptest::collection::vec(-3i64..=3, 3),
            prop_oneof![Just(Relation::Le), Just(Relation::Eq), Just(Relation::Ge)],
            -4i64..=4,
        );
        proptest::collection::vec(row, 1..5).prop_map(|rows| {
            let mut lp = LinearProgram::new(3);
            for (c, rel, rhs) in rows {
                lp.add_constraint(c.into_iter().map(int).collect(), rel, int(rhs))
                    .unwrap();
            }
            // keep the region bounded
            lp.add_constraint(vec![int(1), int(1), int(1)], Relation::Le, int(10))
                .unwrap();
            lp
        })
    }

    /// Brute-force vertex enumeration over 3 variables: every 3-subset of the
    /// tight constraints (including nonnegativity) defines a candidate point.
    fn brute_feasible(lp: &LinearProgram) -> bool {
        let mut planes: Vec<(Vec<Rational>, Rational)> = lp
            .constraints()
            .iter()
            .map(|c| (c.coeffs.clone(), c.rhs.clone()))
            .collect();
        for v in 0..3 {
            let mut e = vec![int(0); 3];
            e[v] = int(1);
            planes.push((e, int(0)));
        }
        let k = planes.len();
        for a in 0..k {
            for b in a + 1..k {
                for c in b + 1..k {
                    if let Some(x) = solve3(&planes[a], &planes[b], &planes[c]) {
                        if lp.is_satisfied_by(&x) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    fn solve3(
        p: &(Vec<Rational>, Rational),
        q: &(Vec<Rational>, Rational),
        r: &(Vec<Rational>, Rational),
    ) -> Option<Vec<Rational>> {
        let mut m: Vec<Vec<Rational>> = [p, q, r]
            .iter()
            .map(|(c, b)| {
                let mut row = c.clone();
                row.push(b.clone());
                row
            })
            .collect();
        for col in 0..3 {
            let piv = (col..3).find(|&i| !m[i][col].is_zero())?;
            m.swap(col, piv);
            let d = m[col][col].clone();
            for x in m[col].iter_mut() {
                *x /= &d;
            }
            for i in 0..3 {
                if i != col {
                    let f = m[i][col].clone();
                    let pr = m[col].clone();
                    for (x, y) in m[i].iter_mut().zip(&pr) {
                        *x -= &f * y;
                    }
                }
            }
        }
        Some(m.into_iter().map(|row| row[3].clone()).collect())
    }

    proptest::proptest! {
        #[test]
        fn agrees_with_vertex_enumeration(lp in small_lp()) {
            let found = basic_feasible_point(&lp);
            proptest::prop_assert_eq!(found.is_some(), brute_feasible(&lp));
            if let Some(p) = found {
                proptest::prop_assert!(lp.is_satisfied_by(&p));
                let nonzeros = p.iter().filter(|x| !x.is_zero()).count();
                proptest::prop_assert!(nonzeros <= lp.num_standard_rows());
            }
        }
    }
}
