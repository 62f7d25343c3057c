//! Dense two-phase simplex method over Q with Bland's rule.

use crate::arith::Q;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq)]
pub enum LpResult {
    Optimal { x: Vec<Q>, value: Q },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let pr = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(pr.iter()) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `obj . x` over columns `allowed`; returns false when unbounded.
    fn optimize(&mut self, obj: &[Q], allowed: &[bool]) -> bool {
        let rhs = self.ncols;
        loop {
            // reduced costs: obj_j - sum_i obj_{basis_i} a_ij
            let mut enter = None;
            for j in 0..self.ncols {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut rc = obj[j].clone();
                for (i, row) in self.rows.iter().enumerate() {
                    let cb = &obj[self.basis[i]];
                    if !cb.is_zero() && !row[j].is_zero() {
                        rc -= cb * &row[j];
                    }
                }
                if rc.is_positive() {
                    enter = Some(j);
                    break;
                }
            }
            let Some(c) = enter else { return true };
            let mut leave: Option<(usize, Q)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[rhs] / &row[c];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else { return false };
            self.pivot(r, c);
        }
    }
}

/// Maximizes `c . x` subject to `A x = b`, `x >= 0`.
pub fn maximize_eq(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> LpResult {
    let m = a.len();
    let n = c.len();
    let ncols = n + m;
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let neg = b[i].is_negative();
        let mut row: Vec<Q> = a[i].iter().map(|x| if neg { -x.clone() } else { x.clone() }).collect();
        row.extend((0..m).map(|k| if k == i { Q::one() } else { Q::zero() }));
        row.push(if neg { -b[i].clone() } else { b[i].clone() });
        rows.push(row);
    }
    let mut t = Tableau { rows, basis: (n..n + m).collect(), ncols };
    let mut phase1 = vec![Q::zero(); ncols];
    for x in phase1.iter_mut().skip(n) {
        *x = -Q::one();
    }
    let all = vec![true; ncols];
    t.optimize(&phase1, &all);
    let infeas: Q = (0..m).filter(|&i| t.basis[i] >= n).map(|i| t.rows[i][ncols].clone()).sum();
    if infeas.is_positive() {
        return LpResult::Infeasible;
    }
    // drive artificials out of the basis
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                t.pivot(i, j);
                i += 1;
            } else {
                t.rows.remove(i);
                t.basis.remove(i);
            }
        } else {
            i += 1;
        }
    }
    let mut obj = c.to_vec();
    obj.extend((0..m).map(|_| Q::zero()));
    let allowed: Vec<bool> = (0..ncols).map(|j| j < n).collect();
    if !t.optimize(&obj, &allowed) {
        return LpResult::Unbounded;
    }
    let mut x = vec![Q::zero(); n];
    for (i, &bi) in t.basis.iter().enumerate() {
        if bi < n {
            x[bi] = t.rows[i][ncols].clone();
        }
    }
    let value = x.iter().zip(c).map(|(a, b)| a * b).sum();
    LpResult::Optimal { x, value }
}

/// Maximizes `c . x` subject to `A x <= b`, `x >= 0`.
pub fn maximize_le(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> LpResult {
    let m = a.len();
    let n = c.len();
    let rows: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..m).map(|k| if k == i { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    let mut cc = c.to_vec();
    cc.extend((0..m).map(|_| Q::zero()));
    match maximize_eq(&cc, &rows, b) {
        LpResult::Optimal { mut x, value } => {
            x.truncate(n);
            LpResult::Optimal { x, value }
        }
        other => other,
    }
}

/// True iff `p` lies in the convex hull of `pts`.
pub fn in_convex_hull(p: &[Q], pts: &[Vec<Q>]) -> bool {
    if pts.is_empty() {
        return false;
    }
    let d = p.len();
    let mut a: Vec<Vec<Q>> = (0..d).map(|i| pts.iter().map(|v| v[i].clone()).collect()).collect();
    a.push(vec![Q::one(); pts.len()]);
    let mut b = p.to_vec();
    b.push(Q::one());
    let c = vec![Q::zero(); pts.len()];
    !matches!(maximize_eq(&c, &a, &b), LpResult::Infeasible)
}
