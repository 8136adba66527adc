//! Dense two-phase simplex for the small linear programs that arise when
//! measuring distances to polytope faces. Bland's rule; sizes are tiny.

const EPS: f64 = 1e-11;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: f64, z: Vec<f64> },
    Infeasible,
    Unbounded,
}

/// `min c·z` subject to `ub · z ≤ b_ub`, `eq · z = b_eq`, `z ≥ 0`.
pub fn minimize(
    c: &[f64],
    ub: &[Vec<f64>],
    b_ub: &[f64],
    eq: &[Vec<f64>],
    b_eq: &[f64],
) -> LpOutcome {
    let n = c.len();
    // Each row: coefficients over [z, slack/surplus, artificial], rhs >= 0.
    let m = ub.len() + eq.len();
    let n_slack = ub.len();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut rhs: Vec<f64> = Vec::with_capacity(m);
    let mut needs_art: Vec<bool> = Vec::with_capacity(m);
    for (k, (row, &b)) in ub.iter().zip(b_ub).enumerate() {
        let mut r = vec![0.0; n + n_slack];
        r[..n].copy_from_slice(row);
        r[n + k] = 1.0;
        if b < 0.0 {
            r.iter_mut().for_each(|v| *v = -*v);
            rows.push(r);
            rhs.push(-b);
            needs_art.push(true);
        } else {
            rows.push(r);
            rhs.push(b);
            needs_art.push(false);
        }
    }
    for (row, &b) in eq.iter().zip(b_eq) {
        let mut r = vec![0.0; n + n_slack];
        r[..n].copy_from_slice(row);
        if b < 0.0 {
            r.iter_mut().for_each(|v| *v = -*v);
            rhs.push(-b);
        } else {
            rhs.push(b);
        }
        rows.push(r);
        needs_art.push(true);
    }
    let n_art = needs_art.iter().filter(|&&a| a).count();
    let width = n + n_slack + n_art;
    let mut basis = vec![0usize; m];
    let mut art = 0;
    for i in 0..m {
        rows[i].resize(width, 0.0);
        if needs_art[i] {
            rows[i][n + n_slack + art] = 1.0;
            basis[i] = n + n_slack + art;
            art += 1;
        } else {
            basis[i] = n + (i);
        }
    }
    let mut t = Tableau { rows, rhs, basis, width };

    if n_art > 0 {
        let mut phase1 = vec![0.0; width];
        for j in n + n_slack..width {
            phase1[j] = 1.0;
        }
        if !t.optimize(&phase1, width) {
            return LpOutcome::Unbounded;
        }
        if t.objective(&phase1) > 1e-9 {
            return LpOutcome::Infeasible;
        }
        t.drive_out_artificials(n + n_slack);
    }
    let mut cost = vec![0.0; width];
    cost[..n].copy_from_slice(c);
    if !t.optimize(&cost, n + n_slack) {
        return LpOutcome::Unbounded;
    }
    let mut z = vec![0.0; n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            z[b] = t.rhs[i];
        }
    }
    LpOutcome::Optimal { value: t.objective(&cost), z }
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn objective(&self, cost: &[f64]) -> f64 {
        self.basis.iter().zip(&self.rhs).map(|(&b, &r)| cost[b] * r).sum()
    }

    /// Runs simplex iterations allowing entering columns `< allowed`.
    /// Returns `false` when unbounded.
    fn optimize(&mut self, cost: &[f64], allowed: usize) -> bool {
        for _ in 0..50_000 {
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let reduced = cost[j]
                    - self.basis.iter().enumerate().map(|(i, &b)| cost[b] * self.rows[i][j]).sum::<f64>();
                reduced < -EPS
            });
            let Some(j) = entering else { return true };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][j];
                if a > EPS {
                    let ratio = self.rhs[i] / a;
                    match leave {
                        Some((li, lr))
                            if ratio > lr + EPS
                                || (ratio > lr - EPS && self.basis[i] > self.basis[li]) => {}
                        _ => leave = Some((i, ratio)),
                    }
                }
            }
            let Some((i, _)) = leave else { return false };
            self.pivot(i, j);
        }
        true
    }

    fn pivot(&mut self, i: usize, j: usize) {
        let p = self.rows[i][j];
        for v in self.rows[i].iter_mut() {
            *v /= p;
        }
        self.rhs[i] /= p;
        for r in 0..self.rows.len() {
            if r == i {
                continue;
            }
            let f = self.rows[r][j];
            if f.abs() <= 0.0 {
                continue;
            }
            for c in 0..self.width {
                self.rows[r][c] -= f * self.rows[i][c];
            }
            self.rhs[r] -= f * self.rhs[i];
        }
        self.basis[i] = j;
    }

    fn drive_out_artificials(&mut self, first_art: usize) {
        for i in 0..self.rows.len() {
            if self.basis[i] < first_art {
                continue;
            }
            if let Some(j) = (0..first_art).find(|&j| self.rows[i][j].abs() > 1e-9 && !self.basis.contains(&j)) {
                self.pivot(i, j);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value(o: LpOutcome) -> f64 {
        match o {
            LpOutcome::Optimal { value, .. } => value,
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  -> 36 at (2, 6)
        let out = minimize(
            &[-3.0, -5.0],
            &[vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]],
            &[4.0, 12.0, 18.0],
            &[],
            &[],
        );
        match out {
            LpOutcome::Optimal { value, z } => {
                assert!((value + 36.0).abs() < 1e-9);
                assert!((z[0] - 2.0).abs() < 1e-9 && (z[1] - 6.0).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equality_and_negative_rhs() {
        // min t s.t. |x - 0.3| <= t written as inequalities, x = 1 - y, x,y >= 0
        let out = minimize(
            &[0.0, 0.0, 1.0],
            &[vec![1.0, 0.0, -1.0], vec![-1.0, 0.0, -1.0]],
            &[0.3, -0.3],
            &[vec![1.0, 1.0, 0.0]],
            &[1.0],
        );
        assert!(value(out).abs() < 1e-9);
        let infeasible = minimize(&[1.0], &[vec![1.0]], &[-1.0], &[], &[]);
        assert_eq!(infeasible, LpOutcome::Infeasible);
        let unbounded = minimize(&[-1.0], &[], &[], &[], &[]);
        assert_eq!(unbounded, LpOutcome::Unbounded);
    }
}
