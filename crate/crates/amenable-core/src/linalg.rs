//! Exact linear algebra over Z and Q.

use crate::arith::{egcd, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Result of unimodular column reduction `A U = [H | 0]`.
#[derive(Clone, Debug)]
pub struct ColumnReduction {
    /// The reduced matrix `A U`.
    pub reduced: Vec<Vec<i64>>,
    /// Unimodular transform `U` (n x n).
    pub u: Vec<Vec<i64>>,
    /// Inverse of `U`.
    pub u_inv: Vec<Vec<i64>>,
    pub rank: usize,
}

/// Unimodular column reduction of an `m x n` integer matrix.
pub fn column_reduce(a: &[Vec<i64>], n: usize) -> ColumnReduction {
    let m = a.len();
    let mut w: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
    let mut ui = u.clone();
    let mut piv = 0;
    for i in 0..m {
        if piv == n {
            break;
        }
        for c in piv + 1..n {
            if w[i][c] == 0 {
                continue;
            }
            let (a0, b0) = (w[i][piv], w[i][c]);
            let (g, x, y) = egcd(a0, b0);
            let (p, qq) = (a0 / g, b0 / g);
            // columns: piv <- x*piv + y*c ; c <- -qq*piv + p*c
            for row in w.iter_mut() {
                let (s, t) = (row[piv], row[c]);
                row[piv] = x * s + y * t;
                row[c] = -qq * s + p * t;
            }
            for row in u.iter_mut() {
                let (s, t) = (row[piv], row[c]);
                row[piv] = x * s + y * t;
                row[c] = -qq * s + p * t;
            }
            // inverse acts on rows piv and c
            let (rp, rc) = (ui[piv].clone(), ui[c].clone());
            for k in 0..n {
                ui[piv][k] = p * rp[k] + qq * rc[k];
                ui[c][k] = -y * rp[k] + x * rc[k];
            }
        }
        if w[i][piv] != 0 {
            piv += 1;
        }
    }
    let cv = |v: Vec<Vec<i128>>| -> Vec<Vec<i64>> {
        v.into_iter().map(|r| r.into_iter().map(|x| i64::try_from(x).expect("overflow")).collect()).collect()
    };
    ColumnReduction { reduced: cv(w), u: cv(u), u_inv: cv(ui), rank: piv }
}

/// Basis of the integer kernel `{x : A x = 0}` (saturated).
pub fn integer_kernel(a: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let cr = column_reduce(a, n);
    (cr.rank..n).map(|c| (0..n).map(|r| cr.u[r][c]).collect()).collect()
}

/// Unimodular matrix whose last row is the primitive vector `w`.
pub fn complete_with_last_row(w: &[i64]) -> Vec<Vec<i64>> {
    let n = w.len();
    let cr = column_reduce(&[w.to_vec()], n);
    let g = cr.reduced[0][0];
    assert!(g.abs() == 1, "vector not primitive");
    // w = g * (first row of U^{-1})
    let mut rows: Vec<Vec<i64>> = cr.u_inv[1..].to_vec();
    rows.push(cr.u_inv[0].iter().map(|x| x * g).collect());
    if det_i64(&rows) < 0 && n > 1 {
        for x in rows[0].iter_mut() {
            *x = -*x;
        }
    }
    rows
}

/// An integral solution of `E x = v` when `E` has full row rank, if one exists.
pub fn integral_solution(e: &[Vec<i64>], v: &[i64], n: usize) -> Option<Vec<i64>> {
    let cr = column_reduce(e, n);
    let k = e.len();
    if cr.rank < k {
        return None;
    }
    let mut z = vec![0i64; n];
    for i in 0..k {
        let s: i64 = (0..i).map(|j| cr.reduced[i][j] * z[j]).sum();
        let r = v[i] - s;
        let d = cr.reduced[i][i];
        if r % d != 0 {
            return None;
        }
        z[i] = r / d;
    }
    Some((0..n).map(|r| (0..n).map(|c| cr.u[r][c] * z[c]).sum()).collect())
}

/// Affine lattice spanned by a point set: intrinsic coordinates for its affine hull.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFrame {
    pub ambient: usize,
    pub dim: usize,
    pub origin: Vec<i64>,
    /// `dim x ambient`: local coordinates of `x` are `to_local (x - origin)`.
    pub to_local: Vec<Vec<i64>>,
    /// `ambient x dim` basis of the saturated direction lattice.
    pub basis: Vec<Vec<i64>>,
    /// Functionals constant on the hull, with their values.
    pub equations: Vec<(Vec<i64>, i64)>,
}

impl AffineFrame {
    pub fn new(points: &[Vec<i64>]) -> Self {
        let n = points[0].len();
        let origin = points[0].clone();
        let diffs: Vec<Vec<i64>> = points[1..]
            .iter()
            .map(|p| p.iter().zip(&origin).map(|(a, b)| a - b).collect())
            .filter(|d: &Vec<i64>| d.iter().any(|&x| x != 0))
            .collect();
        if diffs.is_empty() {
            let equations = (0..n)
                .map(|i| {
                    let e: Vec<i64> = (0..n).map(|j| (i == j) as i64).collect();
                    (e, origin[i])
                })
                .collect();
            return AffineFrame { ambient: n, dim: 0, origin, to_local: vec![], basis: vec![vec![]; n], equations };
        }
        let cr = column_reduce(&diffs, n);
        let r = cr.rank;
        // rows of U^T: first r span the image functionals, last n-r vanish on the span
        let to_local: Vec<Vec<i64>> = (0..r).map(|c| (0..n).map(|k| cr.u[k][c]).collect()).collect();
        let kernel: Vec<Vec<i64>> = (r..n).map(|c| (0..n).map(|k| cr.u[k][c]).collect()).collect();
        // T = [to_local; kernel] is unimodular; basis = first r columns of T^{-1}
        let mut t = to_local.clone();
        t.extend(kernel.iter().cloned());
        let tinv = unimodular_inverse(&t);
        let basis: Vec<Vec<i64>> = (0..n).map(|row| (0..r).map(|c| tinv[row][c]).collect()).collect();
        let equations = kernel
            .into_iter()
            .map(|a| {
                let v = crate::arith::dot(&a, &origin);
                (a, v)
            })
            .collect();
        AffineFrame { ambient: n, dim: r, origin, to_local, basis, equations }
    }

    pub fn local(&self, x: &[i64]) -> Vec<i64> {
        self.to_local
            .iter()
            .map(|row| row.iter().zip(x.iter().zip(&self.origin)).map(|(a, (xi, oi))| a * (xi - oi)).sum())
            .collect()
    }

    pub fn global(&self, y: &[i64]) -> Vec<i64> {
        (0..self.ambient)
            .map(|i| self.origin[i] + (0..self.dim).map(|j| self.basis[i][j] * y[j]).sum::<i64>())
            .collect()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.equations.iter().all(|(a, v)| crate::arith::dot(a, x) == *v)
    }

    /// Pulls back a local functional to an ambient one: `<a_loc, local(x)> = <a, x> - shift`.
    pub fn functional_to_global(&self, a_loc: &[i64]) -> (Vec<i64>, i64) {
        let a: Vec<i64> = (0..self.ambient).map(|k| (0..self.dim).map(|j| a_loc[j] * self.to_local[j][k]).sum()).collect();
        let shift = crate::arith::dot(&a, &self.origin);
        (a, shift)
    }
}

/// Inverse of a unimodular integer matrix.
pub fn unimodular_inverse(t: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = t.len();
    let inv = rational_inverse(&t.iter().map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect()).collect::<Vec<_>>())
        .expect("singular matrix");
    inv.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| {
                    assert!(x.is_integer(), "matrix not unimodular");
                    i64::try_from(x.to_integer()).expect("overflow")
                })
                .collect::<Vec<i64>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .take(n)
        .collect()
}

/// Determinant of a square integer matrix (Bareiss, exact).
pub fn det_i64(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(s) = (k + 1..n).find(|&i| a[i][k] != 0) else { return 0 };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Rank of an integer matrix.
pub fn rank_i64(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    column_reduce(rows, rows[0].len()).rank
}

/// Gauss-Jordan inverse over Q.
pub fn rational_inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let pivot_row = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row.iter()) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solves `A x = b` for square nonsingular `A` over Q.
pub fn rational_solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let inv = rational_inverse(a)?;
    Some(inv.iter().map(|r| r.iter().zip(b).map(|(x, y)| x * y).sum()).collect())
}

/// Row echelon form by fraction-free (Bareiss) elimination; returns pivot columns.
/// Pivot rows are chosen by smallest-magnitude nonzero entry to limit growth.
pub fn bareiss_echelon(rows: &mut Vec<Vec<BigInt>>) -> Vec<usize> {
    let m = rows.len();
    if m == 0 {
        return vec![];
    }
    let n = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..n {
        if r == m {
            break;
        }
        let best = (r..m).filter(|&i| !rows[i][c].is_zero()).min_by(|&i, &j| rows[i][c].abs().cmp(&rows[j][c].abs()));
        let Some(p) = best else { continue };
        rows.swap(r, p);
        let pr = rows[r].clone();
        for i in r + 1..m {
            let f = rows[i][c].clone();
            for j in 0..n {
                let v = &rows[i][j] * &pr[c] - &f * &pr[j];
                rows[i][j] = v / &prev;
            }
        }
        prev = pr[c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the rational nullspace of an integer matrix, as primitive integer vectors.
pub fn integer_nullspace(rows: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let pivots = bareiss_echelon(&mut a);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &f in &free {
        let mut x: Vec<Q> = vec![Q::zero(); n];
        x[f] = Q::one();
        for (k, &pc) in pivots.iter().enumerate().rev() {
            let mut s = Q::zero();
            for j in pc + 1..n {
                if !a[k][j].is_zero() && !x[j].is_zero() {
                    s += Q::from_integer(a[k][j].clone()) * &x[j];
                }
            }
            x[pc] = -s / Q::from_integer(a[k][pc].clone());
        }
        basis.push(clear_denominators(&x));
    }
    basis
}

/// Scales a rational vector to a primitive integer vector (sign preserved).
pub fn clear_denominators(x: &[Q]) -> Vec<BigInt> {
    let den = crate::arith::common_denominator(x.iter());
    let v: Vec<BigInt> = x.iter().map(|t| (t * Q::from_integer(den.clone())).to_integer()).collect();
    let g = v.iter().fold(BigInt::zero(), |g, t| g.gcd(t));
    if g.is_zero() {
        return v;
    }
    v.into_iter().map(|t| t / &g).collect()
}

/// Rank of a rational matrix.
pub fn rank_q(rows: &[Vec<Q>]) -> usize {
    let mut a = rows.to_vec();
    let m = a.len();
    if m == 0 {
        return 0;
    }
    let n = a[0].len();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in r + 1..m {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[r][c];
            let pr = a[r].clone();
            for (x, y) in a[i].iter_mut().zip(pr.iter()) {
                *x -= &f * y;
            }
        }
        r += 1;
        if r == m {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn completion_and_solutions() {
        let w = vec![2, 3, 5];
        let t = complete_with_last_row(&w);
        assert_eq!(t[2], w);
        assert_eq!(det_i64(&t).abs(), 1);
        let e = vec![vec![1, 1, 0], vec![0, 2, 1]];
        let x = integral_solution(&e, &[1, -1], 3).unwrap();
        assert_eq!((crate::arith::dot(&e[0], &x), crate::arith::dot(&e[1], &x)), (1, -1));
        assert!(integral_solution(&[vec![2, 4]], &[1], 2).is_none());
    }

    #[test]
    fn kernel_and_frame() {
        let k = integer_kernel(&[vec![1, 2, 3]], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(v[0] + 2 * v[1] + 3 * v[2], 0);
        }
        let pts = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let f = AffineFrame::new(&pts);
        assert_eq!(f.dim, 2);
        for p in &pts {
            assert_eq!(f.global(&f.local(p)), *p);
            assert!(f.contains(p));
        }
        assert!(!f.contains(&[0, 0, 0]));
    }

    #[test]
    fn determinants() {
        assert_eq!(det_i64(&[vec![2, 1], vec![1, 1]]), 1);
        assert_eq!(det_i64(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 3]]), -3);
        assert_eq!(det_i64(&[vec![1, 2], vec![2, 4]]), 0);
    }

    #[test]
    fn nullspace_small() {
        let rows = vec![vec![BigInt::from(1), BigInt::from(1), BigInt::from(0)], vec![BigInt::from(0), BigInt::from(1), BigInt::from(1)]];
        let ns = integer_nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        assert_eq!(&v[0] + &v[1], BigInt::zero());
        assert_eq!(&v[1] + &v[2], BigInt::zero());
    }
}
