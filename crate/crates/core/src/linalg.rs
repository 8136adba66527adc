//! Small dense linear algebra over [`Scalar`].

use crate::scalar::Scalar;

/// Solves the square system `rows · a = rhs` by Gaussian elimination with
/// largest-magnitude pivoting. Returns `None` when the system is singular
/// (pivot magnitude at or below `tiny`).
pub fn solve<S: Scalar>(rows: &[Vec<S>], rhs: &[S], tiny: &S) -> Option<Vec<S>> {
    let n = rows.len();
    debug_assert!(rows.iter().all(|r| r.len() == n) && rhs.len() == n);
    let mut m: Vec<Vec<S>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    for col in 0..n {
        let mut pivot = col;
        for r in col + 1..n {
            if m[r][col].abs() > m[pivot][col].abs() {
                pivot = r;
            }
        }
        if m[pivot][col].abs() <= *tiny {
            return None;
        }
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone() / p.clone();
            for c in col..=n {
                let delta = factor.clone() * m[col][c].clone();
                m[r][c] = m[r][c].clone() - delta;
            }
        }
    }
    Some((0..n).map(|i| m[i][n].clone() / m[i][i].clone()).collect())
}

/// Rank of a set of row vectors.
pub fn rank<S: Scalar>(rows: &[Vec<S>], tiny: &S) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<S>> = rows.to_vec();
    let mut rank = 0;
    for col in 0..cols {
        if rank == m.len() {
            break;
        }
        let mut pivot = rank;
        for r in rank + 1..m.len() {
            if m[r][col].abs() > m[pivot][col].abs() {
                pivot = r;
            }
        }
        if m[pivot][col].abs() <= *tiny {
            continue;
        }
        m.swap(rank, pivot);
        let p = m[rank][col].clone();
        for r in rank + 1..m.len() {
            let factor = m[r][col].clone() / p.clone();
            for c in col..cols {
                let delta = factor.clone() * m[rank][c].clone();
                m[r][c] = m[r][c].clone() - delta;
            }
        }
        rank += 1;
    }
    rank
}

/// Calls `f` with every `k`-subset of `0..n` in lexicographic order.
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn solves_exactly_over_rationals() {
        let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
        let rows = vec![vec![q(1, 1), q(0, 1)], vec![q(2, 3), q(2, 3)]];
        let rhs = vec![q(1, 1), q(1, 1)];
        let a = solve(&rows, &rhs, &q(0, 1)).unwrap();
        assert_eq!(a, vec![q(1, 1), q(1, 2)]);
    }

    #[test]
    fn singular_systems_are_detected() {
        let rows = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(solve(&rows, &[1.0, 1.0], &1e-12).is_none());
        assert_eq!(rank(&rows, &1e-12), 1);
    }

    #[test]
    fn subsets_are_enumerated_once() {
        let mut seen = Vec::new();
        for_each_subset(5, 3, |s| seen.push(s.to_vec()));
        assert_eq!(seen.len() as u128, binomial(5, 3));
        assert_eq!(seen.first().unwrap(), &vec![0, 1, 2]);
        assert_eq!(seen.last().unwrap(), &vec![2, 3, 4]);
        let mut count = 0;
        for_each_subset(4, 4, |_| count += 1);
        assert_eq!(count, 1);
        for_each_subset(3, 0, |_| count += 1);
        assert_eq!(count, 2);
    }
}
