//! Exact dense simplex: maximize `c·x` subject to `A x ≤ b`, `x ≥ 0`.
//!
//! Two phases, Bland's rule throughout. Optimal solutions carry a dual vector
//! `y ≥ 0` with `Aᵀy ≥ c` and `b·y = c·x`.

use crate::scalar::ExactField;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram<T> {
    pub objective: Vec<T>,
    pub matrix: Vec<Vec<T>>,
    pub rhs: Vec<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    /// Optimal value; zero unless `status` is `Optimal`.
    pub value: T,
    /// A feasible point: optimal, or the base point of the ray when unbounded.
    pub primal: Vec<T>,
    pub dual: Vec<T>,
    /// Unbounded direction `r ≥ 0` with `A r ≤ 0` and `c·r > 0`.
    pub ray: Option<Vec<T>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    /// Reduced costs `z_j − c_j` and the current objective value.
    cost: Vec<T>,
    value: T,
}

impl<T: ExactField> Tableau<T> {
    fn set_objective(&mut self, c: &[T]) {
        let width = self.rows.first().map_or(c.len(), |r| r.len());
        let mut cost: Vec<T> = c.iter().map(|x| -x.clone()).collect();
        cost.resize(width, T::zero());
        let mut value = T::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = c.get(b).cloned().unwrap_or_else(T::zero);
            if cb.is_zero() {
                continue;
            }
            for (cj, aij) in cost.iter_mut().zip(&self.rows[i]) {
                *cj = cj.clone() + cb.clone() * aij.clone();
            }
            value = value + cb * self.rhs[i].clone();
        }
        self.cost = cost;
        self.value = value;
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        for x in self.rows[r].iter_mut() {
            *x = x.clone() / p.clone();
        }
        self.rhs[r] = self.rhs[r].clone() / p;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for (x, y) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
            self.rhs[i] = self.rhs[i].clone() - f * pivot_rhs.clone();
        }
        let f = self.cost[col].clone();
        if !f.is_zero() {
            for (x, y) in self.cost.iter_mut().zip(&pivot_row) {
                *x = x.clone() - f.clone() * y.clone();
            }
            self.value = self.value.clone() - f * pivot_rhs;
        }
        self.basis[r] = col;
    }

    /// Runs Bland's rule over columns `< allowed`. Returns the entering column
    /// of an unbounded direction, if any.
    fn optimize(&mut self, allowed: usize) -> Option<usize> {
        loop {
            let col = (0..allowed).find(|&j| self.cost[j].is_negative())?;
            let mut leave: Option<(usize, T)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs[i].clone() / a.clone();
                let better = match &leave {
                    None => true,
                    Some((l, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, col),
                None => return Some(col),
            }
        }
    }

    fn basic_values(&self, n: usize) -> Vec<T> {
        let mut x = vec![T::zero(); n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                x[b] = self.rhs[i].clone();
            }
        }
        x
    }
}

impl<T: ExactField> LinearProgram<T> {
    pub fn new(objective: Vec<T>, matrix: Vec<Vec<T>>, rhs: Vec<T>) -> Result<Self, LpError> {
        if matrix.len() != rhs.len() {
            return Err(LpError::Dimension(format!(
                "{} constraint rows but {} right-hand sides",
                matrix.len(),
                rhs.len()
            )));
        }
        if let Some((i, row)) = matrix.iter().enumerate().find(|(_, r)| r.len() != objective.len()) {
            return Err(LpError::Dimension(format!(
                "row {i} has {} entries, expected {}",
                row.len(),
                objective.len()
            )));
        }
        Ok(Self { objective, matrix, rhs })
    }

    pub fn variables(&self) -> usize {
        self.objective.len()
    }

    pub fn constraints(&self) -> usize {
        self.rhs.len()
    }

    pub fn solve(&self) -> LpSolution<T> {
        let (n, m) = (self.variables(), self.constraints());
        // Columns: x (n), slacks (m), artificials (one per negative rhs).
        let negative: Vec<usize> = (0..m).filter(|&i| self.rhs[i].is_negative()).collect();
        let width = n + m + negative.len();
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        for i in 0..m {
            let mut row = vec![T::zero(); width];
            row[..n].clone_from_slice(&self.matrix[i]);
            row[n + i] = T::one();
            let mut b = self.rhs[i].clone();
            if let Some(k) = negative.iter().position(|&r| r == i) {
                row[n + m + k] = -T::one();
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
                b = -b;
                basis.push(n + m + k);
            } else {
                basis.push(n + i);
            }
            rows.push(row);
            rhs.push(b);
        }
        let mut t = Tableau {
            rows,
            rhs,
            basis,
            cost: Vec::new(),
            value: T::zero(),
        };

        if !negative.is_empty() {
            let mut phase1 = vec![T::zero(); width];
            for x in &mut phase1[n + m..] {
                *x = -T::one();
            }
            t.set_objective(&phase1);
            t.optimize(width);
            if t.value.is_negative() {
                return LpSolution {
                    status: LpStatus::Infeasible,
                    value: T::zero(),
                    primal: Vec::new(),
                    dual: Vec::new(),
                    ray: None,
                };
            }
            // Drive zero-level artificials out of the basis where possible.
            for r in 0..m {
                if t.basis[r] >= n + m {
                    if let Some(col) = (0..n + m).find(|&j| !t.rows[r][j].is_zero()) {
                        t.pivot(r, col);
                    }
                }
            }
        }

        t.set_objective(&self.objective);
        if let Some(col) = t.optimize(n + m) {
            let mut ray = vec![T::zero(); n];
            if col < n {
                ray[col] = T::one();
            }
            for (i, &b) in t.basis.iter().enumerate() {
                if b < n {
                    ray[b] = -t.rows[i][col].clone();
                }
            }
            return LpSolution {
                status: LpStatus::Unbounded,
                value: T::zero(),
                primal: t.basic_values(n),
                dual: Vec::new(),
                ray: Some(ray),
            };
        }
        let dual = (0..m).map(|i| t.cost[n + i].clone()).collect();
        LpSolution {
            status: LpStatus::Optimal,
            value: t.value.clone(),
            primal: t.basic_values(n),
            dual,
            ray: None,
        }
    }

    fn row_dot(&self, i: usize, x: &[T]) -> T {
        self.matrix[i]
            .iter()
            .zip(x)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    fn column_dot(&self, j: usize, y: &[T]) -> T {
        (0..self.constraints()).fold(T::zero(), |acc, i| acc + self.matrix[i][j].clone() * y[i].clone())
    }

    /// Checks primal and dual feasibility, zero duality gap and complementary
    /// slackness of an optimal solution, or the ray of an unbounded one.
    pub fn check_certificates(&self, sol: &LpSolution<T>) -> Result<(), String> {
        let (n, m) = (self.variables(), self.constraints());
        let dot = |a: &[T], b: &[T]| a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone());
        match sol.status {
            LpStatus::Infeasible => Ok(()),
            LpStatus::Unbounded => {
                let r = sol.ray.as_ref().ok_or("missing ray")?;
                if r.iter().any(|x| x.is_negative()) {
                    return Err("ray has a negative entry".into());
                }
                if (0..m).any(|i| self.row_dot(i, r).is_positive()) {
                    return Err("ray leaves the feasible region".into());
                }
                if !dot(&self.objective, r).is_positive() {
                    return Err("ray does not improve the objective".into());
                }
                Ok(())
            }
            LpStatus::Optimal => {
                let (x, y) = (&sol.primal, &sol.dual);
                if x.len() != n || y.len() != m {
                    return Err("certificate has the wrong length".into());
                }
                if x.iter().chain(y.iter()).any(|v| v.is_negative()) {
                    return Err("negative certificate entry".into());
                }
                for i in 0..m {
                    let ax = self.row_dot(i, x);
                    if ax > self.rhs[i] {
                        return Err(format!("primal violates row {i}"));
                    }
                    if y[i].is_positive() && ax != self.rhs[i] {
                        return Err(format!("slackness fails on row {i}"));
                    }
                }
                for j in 0..n {
                    let aty = self.column_dot(j, y);
                    if aty < self.objective[j] {
                        return Err(format!("dual violates column {j}"));
                    }
                    if x[j].is_positive() && aty != self.objective[j] {
                        return Err(format!("slackness fails on column {j}"));
                    }
                }
                let primal = dot(&self.objective, x);
                let dual = dot(&self.rhs, y);
                if primal != sol.value || dual != sol.value {
                    return Err("duality gap is not zero".into());
                }
                Ok(())
            }
        }
    }
}
