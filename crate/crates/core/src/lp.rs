//! Dense two-phase simplex with Bland's rule. Sized for the small programs
//! that appear here (a handful of variables, at most a few hundred rows).

use alloc::vec;
use alloc::vec::Vec;

const PIVOT_EPS: f64 = 1e-11;
const FEAS_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpOutcome {
    Optimal { value: f64, x: Vec<f64> },
    Unbounded,
    Infeasible,
}

/// `max c·x` subject to `le_rows`/`eq_rows`, with `x_j ≥ 0` for the indices in
/// `nonneg` and `x_j` free otherwise.
#[derive(Debug, Clone, Default)]
pub(crate) struct LinearProgram {
    pub n: usize,
    pub objective: Vec<f64>,
    pub le_rows: Vec<(Vec<f64>, f64)>,
    pub eq_rows: Vec<(Vec<f64>, f64)>,
    pub nonneg: Vec<bool>,
}

impl LinearProgram {
    pub fn new(n: usize) -> Self {
        LinearProgram { n, objective: vec![0.0; n], le_rows: Vec::new(), eq_rows: Vec::new(), nonneg: vec![false; n] }
    }

    pub fn maximize(mut self, c: &[f64]) -> Self {
        self.objective = c.to_vec();
        self
    }

    pub fn le(mut self, row: &[f64], rhs: f64) -> Self {
        self.le_rows.push((row.to_vec(), rhs));
        self
    }

    pub fn eq(mut self, row: &[f64], rhs: f64) -> Self {
        self.eq_rows.push((row.to_vec(), rhs));
        self
    }

    pub fn all_nonneg(mut self) -> Self {
        self.nonneg = vec![true; self.n];
        self
    }

    pub fn solve(&self) -> LpOutcome {
        // column layout: for each original variable one column (nonneg) or two
        // (u - v), then one slack per ≤ row
        let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(self.n);
        let mut ncols = 0;
        for j in 0..self.n {
            if self.nonneg[j] {
                col_of.push((ncols, None));
                ncols += 1;
            } else {
                col_of.push((ncols, Some(ncols + 1)));
                ncols += 2;
            }
        }
        let n_slack = self.le_rows.len();
        let m = self.le_rows.len() + self.eq_rows.len();
        let n_struct = ncols + n_slack;
        let total = n_struct + m; // one artificial per row
        let width = total + 1;

        let mut t = vec![0.0; (m + 1) * width];
        let idx = |r: usize, c: usize| r * width + c;
        let mut basis = vec![0usize; m];

        let mut r = 0;
        let rows = self.le_rows.iter().map(|x| (x, true)).chain(self.eq_rows.iter().map(|x| (x, false)));
        for (k, ((row, rhs), is_le)) in rows.enumerate() {
            let sign = if *rhs < 0.0 { -1.0 } else { 1.0 };
            for j in 0..self.n {
                let (u, v) = col_of[j];
                t[idx(r, u)] = sign * row[j];
                if let Some(v) = v {
                    t[idx(r, v)] = -sign * row[j];
                }
            }
            if is_le {
                t[idx(r, ncols + k)] = sign;
            }
            t[idx(r, n_struct + r)] = 1.0;
            t[idx(r, total)] = sign * rhs;
            basis[r] = n_struct + r;
            r += 1;
        }

        // phase 1: minimize the sum of artificials == maximize -sum
        let mut cost = vec![0.0; total];
        for a in n_struct..total {
            cost[a] = -1.0;
        }
        set_objective_row(&mut t, &basis, &cost, m, width);
        if run_simplex(&mut t, &mut basis, m, width, total) == Step::Unbounded {
            // cannot happen in phase 1 (objective bounded by 0)
            return LpOutcome::Infeasible;
        }
        if -t[idx(m, total)] > FEAS_EPS * (1.0 + max_abs_rhs(self)) {
            return LpOutcome::Infeasible;
        }
        // drive remaining artificials out of the basis where possible
        for r in 0..m {
            if basis[r] >= n_struct {
                if let Some(c) = (0..n_struct).find(|&c| t[idx(r, c)].abs() > PIVOT_EPS) {
                    pivot(&mut t, &mut basis, m, width, r, c);
                }
            }
        }

        // phase 2: artificials are frozen by zeroing their columns
        for r in 0..=m {
            for a in n_struct..total {
                if !basis.contains(&a) || r == m {
                    t[idx(r, a)] = 0.0;
                }
            }
        }
        let mut cost = vec![0.0; total];
        for j in 0..self.n {
            let (u, v) = col_of[j];
            cost[u] = self.objective[j];
            if let Some(v) = v {
                cost[v] = -self.objective[j];
            }
        }
        set_objective_row(&mut t, &basis, &cost, m, width);
        if run_simplex(&mut t, &mut basis, m, width, n_struct) == Step::Unbounded {
            return LpOutcome::Unbounded;
        }

        let mut raw = vec![0.0; total];
        for r in 0..m {
            raw[basis[r]] = t[idx(r, total)];
        }
        let x: Vec<f64> = (0..self.n)
            .map(|j| {
                let (u, v) = col_of[j];
                raw[u] - v.map_or(0.0, |v| raw[v])
            })
            .collect();
        let value = (0..self.n).map(|j| self.objective[j] * x[j]).sum();
        LpOutcome::Optimal { value, x }
    }
}

fn max_abs_rhs(lp: &LinearProgram) -> f64 {
    lp.le_rows.iter().chain(lp.eq_rows.iter()).fold(0.0, |m, (_, b)| m.max(b.abs()))
}

#[derive(Debug, PartialEq)]
enum Step {
    Optimal,
    Unbounded,
}

/// Writes the reduced-cost row `z_j - c_j` for the current basis.
fn set_objective_row(t: &mut [f64], basis: &[usize], cost: &[f64], m: usize, width: usize) {
    let total = width - 1;
    for c in 0..=total {
        let mut z = 0.0;
        for r in 0..m {
            let cb = cost.get(basis[r]).copied().unwrap_or(0.0);
            z += cb * t[r * width + c];
        }
        let cj = if c < total { cost[c] } else { 0.0 };
        t[m * width + c] = z - cj;
    }
}

fn pivot(t: &mut [f64], basis: &mut [usize], m: usize, width: usize, pr: usize, pc: usize) {
    let p = t[pr * width + pc];
    for c in 0..width {
        t[pr * width + c] /= p;
    }
    for r in 0..=m {
        if r == pr {
            continue;
        }
        let f = t[r * width + pc];
        if f != 0.0 {
            for c in 0..width {
                t[r * width + c] -= f * t[pr * width + c];
            }
        }
    }
    basis[pr] = pc;
}

/// Maximization with Bland's rule over the first `ncols` columns.
fn run_simplex(t: &mut [f64], basis: &mut [usize], m: usize, width: usize, ncols: usize) -> Step {
    let rhs = width - 1;
    for _ in 0..10_000 {
        let Some(pc) = (0..ncols).find(|&c| t[m * width + c] < -PIVOT_EPS) else {
            return Step::Optimal;
        };
        let mut best: Option<(usize, f64)> = None;
        for r in 0..m {
            let a = t[r * width + pc];
            if a > PIVOT_EPS {
                let ratio = t[r * width + rhs] / a;
                match best {
                    None => best = Some((r, ratio)),
                    Some((br, bv)) => {
                        if ratio < bv - 1e-12 || ((ratio - bv).abs() <= 1e-12 && basis[r] < basis[br]) {
                            best = Some((r, ratio));
                        }
                    }
                }
            }
        }
        let Some((pr, _)) = best else {
            return Step::Unbounded;
        };
        pivot(t, basis, m, width, pr, pc);
    }
    Step::Optimal
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_maximum() {
        let mut lp = LinearProgram::new(2).maximize(&[1.0, 2.0]);
        lp = lp.le(&[1.0, 0.0], 1.0).le(&[-1.0, 0.0], 1.0).le(&[0.0, 1.0], 3.0).le(&[0.0, -1.0], 1.0);
        match lp.solve() {
            LpOutcome::Optimal { value, x } => {
                assert!((value - 7.0).abs() < 1e-12);
                assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 3.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_rhs_and_unbounded() {
        // x >= 2 written as -x <= -2, maximize -x -> -2
        let lp = LinearProgram::new(1).maximize(&[-1.0]).le(&[-1.0], -2.0);
        assert!(matches!(lp.solve(), LpOutcome::Optimal { value, .. } if (value + 2.0).abs() < 1e-12));
        let lp = LinearProgram::new(1).maximize(&[1.0]).le(&[-1.0], -2.0);
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn infeasible() {
        let lp = LinearProgram::new(1).maximize(&[1.0]).le(&[1.0], 0.0).le(&[-1.0], -1.0);
        assert_eq!(lp.solve(), LpOutcome::Infeasible);
    }

    #[test]
    fn equality_with_nonneg() {
        // λ1 + λ2 = 1, λ ≥ 0, maximize 3λ1 + λ2
        let lp = LinearProgram::new(2).maximize(&[3.0, 1.0]).eq(&[1.0, 1.0], 1.0).all_nonneg();
        assert!(matches!(lp.solve(), LpOutcome::Optimal { value, .. } if (value - 3.0).abs() < 1e-12));
    }

    #[test]
    fn degenerate_vertex() {
        // many constraints through the same optimal vertex (0,0)
        let mut lp = LinearProgram::new(2).maximize(&[1.0, 1.0]);
        for k in 1..20 {
            let a = k as f64 * 0.1;
            lp = lp.le(&[1.0, a], 0.0).le(&[a, 1.0], 0.0);
        }
        assert!(matches!(lp.solve(), LpOutcome::Optimal { value, .. } if value.abs() < 1e-12));
    }
}
