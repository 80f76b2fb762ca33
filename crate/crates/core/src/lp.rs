//! Exact linear programming over the rationals.
//!
//! A dense two-phase primal simplex with bounded variables and Bland's
//! anti-cycling rule. Variables carry finite lower bounds and optional
//! upper bounds; upper bounds are handled by column complementation, so
//! every nonbasic variable sits at zero in its current orientation and a
//! bound-to-bound move is a column flip rather than a pivot. All data is
//! rational and every pivot is exact, so identical problems always yield
//! identical certificates.

use num_traits::{One, Signed, Zero};

use crate::rational::Q;
use crate::{Error, Result};

/// Row comparison in a constraint.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Cmp {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct LpRow {
    pub coeffs: Vec<Q>,
    pub cmp: Cmp,
    pub rhs: Q,
}

/// `maximize objective . x` subject to the rows and `lower <= x <= upper`.
#[derive(Clone, Debug)]
pub struct LpProblem {
    pub num_vars: usize,
    pub lower: Vec<Q>,
    /// `None` means unbounded above.
    pub upper: Vec<Option<Q>>,
    pub objective: Vec<Q>,
    pub rows: Vec<LpRow>,
}

impl LpProblem {
    /// All-default problem: variables in `[0, +inf)`, zero objective.
    pub fn new(num_vars: usize) -> Self {
        LpProblem {
            num_vars,
            lower: vec![Q::zero(); num_vars],
            upper: vec![None; num_vars],
            objective: vec![Q::zero(); num_vars],
            rows: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Bounded { value: Q, solution: Vec<Q> },
    /// A feasible point and a recession direction along which the
    /// objective strictly increases.
    Unbounded { point: Vec<Q>, ray: Vec<Q> },
}

/// Exact maximization. Deterministic: lowest-index entering variable,
/// lowest-variable-index leaving among the blocking rows.
pub fn lp_max(problem: &LpProblem) -> Result<LpOutcome> {
    Solver::new(problem)?.run()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Step {
    Optimal,
    Unbounded(usize),
}

struct Solver {
    num_structural: usize,
    total: usize,
    num_artificial: usize,
    rows: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    range: Vec<Option<Q>>,
    flipped: Vec<bool>,
    allowed: Vec<bool>,
    lower: Vec<Q>,
    objective: Vec<Q>,
    dcost: Vec<Q>,
    dval: Q,
}

impl Solver {
    fn new(p: &LpProblem) -> Result<Self> {
        if p.num_vars == 0 {
            return Err(Error::MalformedProgram("no variables".into()));
        }
        for (name, len) in [
            ("lower", p.lower.len()),
            ("upper", p.upper.len()),
            ("objective", p.objective.len()),
        ] {
            if len != p.num_vars {
                return Err(Error::MalformedProgram(format!(
                    "{name} has length {len}, expected {}",
                    p.num_vars
                )));
            }
        }
        for row in &p.rows {
            if row.coeffs.len() != p.num_vars {
                return Err(Error::MalformedProgram(format!(
                    "row has {} coefficients, expected {}",
                    row.coeffs.len(),
                    p.num_vars
                )));
            }
        }
        for j in 0..p.num_vars {
            if let Some(u) = &p.upper[j] {
                if u < &p.lower[j] {
                    return Err(Error::MalformedProgram(format!(
                        "variable {j} has empty bound interval"
                    )));
                }
            }
        }

        let m = p.rows.len();
        let num_slacks = p
            .rows
            .iter()
            .filter(|r| r.cmp != Cmp::Eq)
            .count();
        let num_structural = p.num_vars;
        let mut total = num_structural + num_slacks;

        let mut range: Vec<Option<Q>> = (0..num_structural)
            .map(|j| p.upper[j].as_ref().map(|u| u - &p.lower[j]))
            .collect();
        range.extend(std::iter::repeat(None).take(num_slacks));

        // Shifted rows: y = x - lower, slacks appended.
        let mut rows: Vec<Vec<Q>> = Vec::with_capacity(m);
        let mut rhs_eff: Vec<Q> = Vec::with_capacity(m);
        let mut slack_at = num_structural;
        for r in &p.rows {
            let mut row = vec![Q::zero(); total];
            row[..num_structural].clone_from_slice(&r.coeffs);
            let mut b = r.rhs.clone();
            for j in 0..num_structural {
                b -= &r.coeffs[j] * &p.lower[j];
            }
            match r.cmp {
                Cmp::Le => {
                    row[slack_at] = Q::one();
                    slack_at += 1;
                }
                Cmp::Ge => {
                    row[slack_at] = -Q::one();
                    slack_at += 1;
                }
                Cmp::Eq => {}
            }
            if b.is_negative() {
                for x in row.iter_mut() {
                    *x = -&*x;
                }
                b = -b;
            }
            rows.push(row);
            rhs_eff.push(b);
        }

        // Crash: a column whose only nonzero sits in one row and whose
        // implied value respects its bounds can start out basic; the rest
        // get artificials.
        let mut nonzero_rows_of: Vec<Vec<usize>> = vec![Vec::new(); total];
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    nonzero_rows_of[j].push(i);
                }
            }
        }
        let mut basis = vec![usize::MAX; m];
        let mut used = vec![false; total];
        for i in 0..m {
            for j in 0..total {
                if used[j] || nonzero_rows_of[j] != [i] {
                    continue;
                }
                let v = &rhs_eff[i] / &rows[i][j];
                if v.is_negative() {
                    continue;
                }
                if let Some(r) = &range[j] {
                    if &v > r {
                        continue;
                    }
                }
                // Normalize the row so the basic coefficient is one.
                let piv = rows[i][j].clone();
                for x in rows[i].iter_mut() {
                    if !x.is_zero() {
                        *x = &*x / &piv;
                    }
                }
                rhs_eff[i] = v;
                basis[i] = j;
                used[j] = true;
                break;
            }
        }

        let mut num_artificial = 0;
        for i in 0..m {
            if basis[i] == usize::MAX {
                num_artificial += 1;
            }
        }
        let art_start = total;
        total += num_artificial;
        range.extend(std::iter::repeat(None).take(num_artificial));
        let mut next_art = art_start;
        for row in rows.iter_mut() {
            row.extend(std::iter::repeat(Q::zero()).take(num_artificial));
        }
        for i in 0..m {
            if basis[i] == usize::MAX {
                rows[i][next_art] = Q::one();
                basis[i] = next_art;
                next_art += 1;
            }
        }

        let mut in_basis = vec![false; total];
        for &b in &basis {
            in_basis[b] = true;
        }
        let mut lower = p.lower.clone();
        lower.extend(std::iter::repeat(Q::zero()).take(total - num_structural));
        let mut objective = p.objective.clone();
        objective.extend(std::iter::repeat(Q::zero()).take(total - num_structural));

        Ok(Solver {
            num_structural,
            total,
            num_artificial,
            rows,
            rhs: rhs_eff,
            basis,
            in_basis,
            range,
            flipped: vec![false; total],
            allowed: vec![true; total],
            lower,
            objective,
            dcost: vec![Q::zero(); total],
            dval: Q::zero(),
        })
    }

    fn run(mut self) -> Result<LpOutcome> {
        if self.num_artificial > 0 {
            // Phase 1: maximize minus the sum of artificials.
            let art_start = self.total - self.num_artificial;
            let mut cost = vec![Q::zero(); self.total];
            for c in cost.iter_mut().skip(art_start) {
                *c = -Q::one();
            }
            self.load_costs(&cost);
            match self.iterate() {
                Step::Optimal => {}
                Step::Unbounded(_) => unreachable!("phase 1 objective is bounded above"),
            }
            if self.dval.is_negative() {
                return Ok(LpOutcome::Infeasible);
            }
            self.evict_artificials(art_start);
            for j in art_start..self.total {
                self.allowed[j] = false;
            }
        }

        let cost = self.objective.clone();
        self.load_costs(&cost);
        match self.iterate() {
            Step::Optimal => {
                let solution = self.extract_point();
                Ok(LpOutcome::Bounded {
                    value: self.dval.clone(),
                    solution,
                })
            }
            Step::Unbounded(entering) => {
                let point = self.extract_point();
                let mut ray = vec![Q::zero(); self.num_structural];
                let dir = if self.flipped[entering] {
                    -Q::one()
                } else {
                    Q::one()
                };
                if entering < self.num_structural {
                    ray[entering] = dir;
                }
                for (i, &b) in self.basis.iter().enumerate() {
                    if b < self.num_structural {
                        let delta = -&self.rows[i][entering];
                        ray[b] = if self.flipped[b] { -delta } else { delta };
                    }
                }
                Ok(LpOutcome::Unbounded { point, ray })
            }
        }
    }

    /// Reduced costs and objective value for a cost vector, in the
    /// current orientation and basis.
    fn load_costs(&mut self, cost: &[Q]) {
        let mut base = Q::zero();
        let mut eff: Vec<Q> = Vec::with_capacity(self.total);
        for j in 0..self.total {
            base += &cost[j] * &self.lower[j];
            if self.flipped[j] {
                let r = self.range[j].as_ref().expect("flipped var has a range");
                base += &cost[j] * r;
                eff.push(-&cost[j]);
            } else {
                eff.push(cost[j].clone());
            }
        }
        self.dval = base;
        self.dcost = eff;
        for i in 0..self.rows.len() {
            let f = self.dcost[self.basis[i]].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..self.total {
                if !self.rows[i][j].is_zero() {
                    let t = &f * &self.rows[i][j];
                    self.dcost[j] -= t;
                }
            }
            self.dval += &f * &self.rhs[i];
        }
    }

    fn iterate(&mut self) -> Step {
        loop {
            let entering = (0..self.total).find(|&j| {
                !self.in_basis[j]
                    && self.allowed[j]
                    && self.range[j] != Some(Q::zero())
                    && self.dcost[j].is_positive()
            });
            let Some(j) = entering else {
                return Step::Optimal;
            };

            // Ratio test: smallest step over blocking rows, Bland
            // tie-break on the basic variable index; a flip only when it
            // is strictly the smallest.
            let mut best: Option<(Q, usize)> = None; // (step, row)
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                let t = if a.is_positive() {
                    &self.rhs[i] / a
                } else if a.is_negative() {
                    match &self.range[self.basis[i]] {
                        Some(r) => (r - &self.rhs[i]) / -a,
                        None => continue,
                    }
                } else {
                    continue;
                };
                best = match best {
                    None => Some((t, i)),
                    Some((bt, bi)) => {
                        if t < bt || (t == bt && self.basis[i] < self.basis[bi]) {
                            Some((t, i))
                        } else {
                            Some((bt, bi))
                        }
                    }
                };
            }

            let flip_step = self.range[j].clone();
            match (best, flip_step) {
                (None, None) => return Step::Unbounded(j),
                (None, Some(_)) => self.flip(j),
                (Some((t, _)), Some(r)) if r < t => self.flip(j),
                (Some((_, r)), _) => self.pivot(r, j),
            }
        }
    }

    fn flip(&mut self, j: usize) {
        let r = self.range[j].clone().expect("flip needs a finite range");
        for i in 0..self.rows.len() {
            if !self.rows[i][j].is_zero() {
                let t = &self.rows[i][j] * &r;
                self.rhs[i] -= t;
                self.rows[i][j] = -&self.rows[i][j];
            }
        }
        self.dval += &self.dcost[j] * &r;
        self.dcost[j] = -&self.dcost[j];
        self.flipped[j] = !self.flipped[j];
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let leaving = self.basis[r];
        let leaves_at_upper = self.rows[r][j].is_negative();

        let piv = self.rows[r][j].clone();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x = &*x / &piv;
            }
        }
        self.rhs[r] = &self.rhs[r] / &piv;
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][j].is_zero() {
                continue;
            }
            let f = self.rows[i][j].clone();
            for k in 0..self.total {
                if !self.rows[r][k].is_zero() {
                    let t = &f * &self.rows[r][k];
                    self.rows[i][k] -= t;
                }
            }
            let t = &f * &self.rhs[r];
            self.rhs[i] -= t;
        }
        let f = self.dcost[j].clone();
        if !f.is_zero() {
            for k in 0..self.total {
                if !self.rows[r][k].is_zero() {
                    let t = &f * &self.rows[r][k];
                    self.dcost[k] -= t;
                }
            }
            self.dval += &f * &self.rhs[r];
        }

        self.basis[r] = j;
        self.in_basis[j] = true;
        self.in_basis[leaving] = false;
        if leaves_at_upper {
            self.flip(leaving);
        }
    }

    /// After phase 1, pivot zero-valued artificial basics out on any
    /// usable column; a row with no usable column is redundant and drops.
    fn evict_artificials(&mut self, art_start: usize) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < art_start {
                i += 1;
                continue;
            }
            let col = (0..art_start)
                .find(|&j| !self.in_basis[j] && !self.rows[i][j].is_zero());
            match col {
                Some(j) => {
                    // The artificial sits at zero, so this pivot moves
                    // nothing.
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    self.in_basis[self.basis[i]] = false;
                    self.rows.remove(i);
                    self.rhs.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }

    fn extract_point(&self) -> Vec<Q> {
        let mut x = Vec::with_capacity(self.num_structural);
        for j in 0..self.num_structural {
            let y = self
                .basis
                .iter()
                .position(|&b| b == j)
                .map(|i| self.rhs[i].clone())
                .unwrap_or_else(Q::zero);
            let v = if self.flipped[j] {
                let r = self.range[j].as_ref().expect("flipped var has a range");
                &self.lower[j] + r - y
            } else {
                &self.lower[j] + y
            };
            x.push(v);
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_int};

    fn check_feasible(p: &LpProblem, x: &[Q]) {
        for j in 0..p.num_vars {
            assert!(x[j] >= p.lower[j], "lower bound violated at {j}");
            if let Some(u) = &p.upper[j] {
                assert!(&x[j] <= u, "upper bound violated at {j}");
            }
        }
        for (i, row) in p.rows.iter().enumerate() {
            let lhs: Q = row.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
            let ok = match row.cmp {
                Cmp::Le => lhs <= row.rhs,
                Cmp::Eq => lhs == row.rhs,
                Cmp::Ge => lhs >= row.rhs,
            };
            assert!(ok, "row {i} violated: {lhs} vs {}", row.rhs);
        }
    }

    #[test]
    fn single_upper_bound_row() {
        // max r s.t. r <= 1
        let mut p = LpProblem::new(1);
        p.objective = vec![q_int(1)];
        p.rows.push(LpRow {
            coeffs: vec![q_int(1)],
            cmp: Cmp::Le,
            rhs: q_int(1),
        });
        match lp_max(&p).unwrap() {
            LpOutcome::Bounded { value, solution } => {
                assert_eq!(value, q_int(1));
                check_feasible(&p, &solution);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible_by_sign() {
        // max r s.t. r <= -1, r >= 0
        let mut p = LpProblem::new(1);
        p.objective = vec![q_int(1)];
        p.rows.push(LpRow {
            coeffs: vec![q_int(1)],
            cmp: Cmp::Le,
            rhs: q_int(-1),
        });
        assert_eq!(lp_max(&p).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_with_ray() {
        // max r s.t. 0 <= e <= r
        let mut p = LpProblem::new(2);
        p.objective = vec![q_int(1), q_int(0)];
        p.rows.push(LpRow {
            coeffs: vec![q_int(-1), q_int(1)],
            cmp: Cmp::Le,
            rhs: q_int(0),
        });
        match lp_max(&p).unwrap() {
            LpOutcome::Unbounded { point, ray } => {
                check_feasible(&p, &point);
                // point + 7 ray stays feasible and improves the objective
                let shifted: Vec<Q> =
                    point.iter().zip(&ray).map(|(x, d)| x + d * q_int(7)).collect();
                check_feasible(&p, &shifted);
                assert!(ray[0].is_positive());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bounded_box_with_equalities() {
        // max x + 2y s.t. x + y = 3/2, 0 <= x <= 1, 0 <= y <= 1
        let mut p = LpProblem::new(2);
        p.upper = vec![Some(q_int(1)), Some(q_int(1))];
        p.objective = vec![q_int(1), q_int(2)];
        p.rows.push(LpRow {
            coeffs: vec![q_int(1), q_int(1)],
            cmp: Cmp::Eq,
            rhs: q(3, 2),
        });
        match lp_max(&p).unwrap() {
            LpOutcome::Bounded { value, solution } => {
                assert_eq!(value, q(5, 2));
                assert_eq!(solution, vec![q(1, 2), q_int(1)]);
                check_feasible(&p, &solution);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bound_flips_reach_the_optimum() {
        // max x + y + z, all in [0,1], x + y + z <= 5/2
        let mut p = LpProblem::new(3);
        p.upper = vec![Some(q_int(1)); 3];
        p.objective = vec![q_int(1); 3];
        p.rows.push(LpRow {
            coeffs: vec![q_int(1); 3],
            cmp: Cmp::Le,
            rhs: q(5, 2),
        });
        match lp_max(&p).unwrap() {
            LpOutcome::Bounded { value, solution } => {
                assert_eq!(value, q(5, 2));
                check_feasible(&p, &solution);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn degenerate_rows_do_not_cycle() {
        // Redundant constraints meeting at the same vertex.
        let mut p = LpProblem::new(2);
        p.objective = vec![q_int(3), q_int(2)];
        for (coeffs, rhs) in [
            (vec![q_int(1), q_int(1)], q_int(1)),
            (vec![q_int(2), q_int(2)], q_int(2)),
            (vec![q_int(1), q_int(0)], q_int(1)),
        ] {
            p.rows.push(LpRow {
                coeffs,
                cmp: Cmp::Le,
                rhs,
            });
        }
        match lp_max(&p).unwrap() {
            LpOutcome::Bounded { value, solution } => {
                assert_eq!(value, q_int(3));
                check_feasible(&p, &solution);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_lower_bounds() {
        // max x with -2 <= x <= -1
        let mut p = LpProblem::new(1);
        p.lower = vec![q_int(-2)];
        p.upper = vec![Some(q_int(-1))];
        p.objective = vec![q_int(1)];
        match lp_max(&p).unwrap() {
            LpOutcome::Bounded { value, solution } => {
                assert_eq!(value, q_int(-1));
                assert_eq!(solution, vec![q_int(-1)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ge_rows_and_mixed_system() {
        // max -x - y s.t. x + 2y >= 2, 3x + y >= 3, x,y >= 0
        let mut p = LpProblem::new(2);
        p.objective = vec![q_int(-1), q_int(-1)];
        p.rows.push(LpRow {
            coeffs: vec![q_int(1), q_int(2)],
            cmp: Cmp::Ge,
            rhs: q_int(2),
        });
        p.rows.push(LpRow {
            coeffs: vec![q_int(3), q_int(1)],
            cmp: Cmp::Ge,
            rhs: q_int(3),
        });
        match lp_max(&p).unwrap() {
            LpOutcome::Bounded { value, solution } => {
                // optimum at the intersection (4/5, 3/5)
                assert_eq!(value, q(-7, 5));
                assert_eq!(solution, vec![q(4, 5), q(3, 5)]);
                check_feasible(&p, &solution);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible_equalities() {
        let mut p = LpProblem::new(2);
        p.objective = vec![q_int(1), q_int(0)];
        p.rows.push(LpRow {
            coeffs: vec![q_int(1), q_int(1)],
            cmp: Cmp::Eq,
            rhs: q_int(1),
        });
        p.rows.push(LpRow {
            coeffs: vec![q_int(1), q_int(1)],
            cmp: Cmp::Eq,
            rhs: q_int(2),
        });
        assert_eq!(lp_max(&p).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let mut p = LpProblem::new(2);
        p.objective = vec![q_int(1), q_int(1)];
        p.upper = vec![Some(q_int(2)), Some(q_int(2))];
        p.rows.push(LpRow {
            coeffs: vec![q_int(1), q_int(1)],
            cmp: Cmp::Eq,
            rhs: q_int(2),
        });
        p.rows.push(LpRow {
            coeffs: vec![q_int(2), q_int(2)],
            cmp: Cmp::Eq,
            rhs: q_int(4),
        });
        match lp_max(&p).unwrap() {
            LpOutcome::Bounded { value, solution } => {
                assert_eq!(value, q_int(2));
                check_feasible(&p, &solution);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn deterministic_certificates() {
        let mut p = LpProblem::new(3);
        p.upper = vec![Some(q_int(1)), Some(q_int(2)), None];
        p.objective = vec![q_int(2), q_int(1), q_int(-1)];
        p.rows.push(LpRow {
            coeffs: vec![q_int(1), q_int(1), q_int(1)],
            cmp: Cmp::Eq,
            rhs: q_int(2),
        });
        p.rows.push(LpRow {
            coeffs: vec![q_int(1), q_int(-1), q_int(0)],
            cmp: Cmp::Le,
            rhs: q_int(0),
        });
        let a = lp_max(&p).unwrap();
        let b = lp_max(&p).unwrap();
        assert_eq!(a, b);
        if let LpOutcome::Bounded { solution, .. } = &a {
            check_feasible(&p, solution);
        } else {
            panic!("expected bounded");
        }
    }
}
