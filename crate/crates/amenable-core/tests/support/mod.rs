//! Property checks shared by the property suite and the acceptance run.
//!
//! Each check returns `Err(description)` on a counterexample and `Ok(false)` when the generated
//! input does not meet the check's precondition.

#![allow(dead_code)]

use amenable_core::apery::extend;
use amenable_core::arith::{q, Q};
use amenable_core::corpus;
use amenable_core::lattice::LatticePolytope;
use amenable_core::laurent::{mutate, LaurentPolynomial, MutationSpec};
use amenable_core::minkowski::decompose_width1;
use amenable_core::periods::{compress, constant_terms, constant_terms_naive, support_gcd};
use amenable_core::picard_fuchs::{annihilator_uncompressed, DiffOperator, GuessBounds};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeSet;

pub fn rank(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let piv = rows[r].clone();
        for row in rows.iter_mut().skip(r + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &piv[c];
            for k in c..cols {
                let d = &f * &piv[k];
                row[k] -= d;
            }
        }
        r += 1;
    }
    r
}

/// Rows `sum_{i<=d, j<=r} c_ij (n - i)^j u_{n-i}` for every `n` the data allows.
fn shape_matrix(u: &[Q], r: usize, d: usize) -> Vec<Vec<Q>> {
    (0..u.len())
        .map(|n| {
            let mut row = Vec::new();
            for i in 0..=d {
                for j in 0..=r {
                    row.push(if i > n { Q::zero() } else { q((n - i) as i64).pow(j as i32) * &u[n - i] });
                }
            }
            row
        })
        .collect()
}

fn binom(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Hull of the six unit vectors and the points of `{-1,0,1}^3` selected by `mask` (20 bits).
pub fn dual_involution(mask: u32) -> Result<bool, String> {
    let mut pts: Vec<Vec<i64>> = Vec::new();
    for i in 0..3 {
        for s in [-1, 1] {
            let mut v = vec![0; 3];
            v[i] = s;
            pts.push(v);
        }
    }
    let mut k = 0;
    for x in -1..=1i64 {
        for y in -1..=1i64 {
            for z in -1..=1i64 {
                if x.abs() + y.abs() + z.abs() >= 2 {
                    if mask >> k & 1 == 1 {
                        pts.push(vec![x, y, z]);
                    }
                    k += 1;
                }
            }
        }
    }
    let p = LatticePolytope::hull(&pts).map_err(|e| e.to_string())?;
    if !p.is_reflexive().map_err(|e| e.to_string())? {
        return Ok(false);
    }
    let d = p.dual().map_err(|e| e.to_string())?;
    if !d.is_reflexive().unwrap_or(false) {
        return Err(format!("dual of {:?} is not reflexive", p.vertices()));
    }
    let dd = d.dual().map_err(|e| e.to_string())?;
    if dd != p {
        return Err(format!("dual of dual of {:?} is {:?}", p.vertices(), dd.vertices()));
    }
    if d.vertices().len() != p.facets().len() {
        return Err(format!("{:?}: {} facets but dual has {} vertices", p.vertices(), p.facets().len(), d.vertices().len()));
    }
    Ok(true)
}

/// `p = y A(x) + B(x) + h^k C(x) / y` with `h = 1 + c x`, mutated by `(w, h) = ((0, 1), h)`.
pub fn mutation_invariance(top: &[i64], mid: &[i64], low: &[i64], k: u32, c: i64, n: usize) -> Result<bool, String> {
    let x = LaurentPolynomial::var(2, 0);
    let y = LaurentPolynomial::var(2, 1);
    let yi = LaurentPolynomial::from_terms(2, vec![(vec![0, -1], q(1))]);
    let poly_in_x = |cs: &[i64]| {
        LaurentPolynomial::from_terms(2, cs.iter().enumerate().filter(|(_, &a)| a != 0).map(|(e, &a)| (vec![e as i64 - 1, 0], q(a))))
    };
    let one = LaurentPolynomial::from_terms(2, vec![(vec![0, 0], q(1))]);
    let h = &one + &(&x * &LaurentPolynomial::from_terms(2, vec![(vec![0, 0], q(c))]));
    let p = &(&(&y * &poly_in_x(top)) + &poly_in_x(mid)) + &(&(&h.pow(k) * &poly_in_x(low)) * &yi);
    if p.terms().is_empty() {
        return Ok(false);
    }
    let m = mutate(&p, &MutationSpec { weight: vec![0, 1], factor: h }).map_err(|e| e.to_string())?;
    let a = constant_terms(&p, n).values;
    let b = constant_terms_naive(&m, n).values;
    if a != b {
        return Err(format!("periods of {p} and its mutation {m} differ"));
    }
    Ok(true)
}

/// `u_n = C(2n,n)^a C(3n,n)^b C(4n,2n)^c`: the guessed operator annihilates `u`, and no operator of
/// a smaller shape does (checked by exact rank of the full coefficient matrix).
pub fn annihilator_minimality(a: u32, b: u32, c: u32) -> Result<bool, String> {
    if a + b + c == 0 {
        return Ok(false);
    }
    let u: Vec<Q> = (0..40u64)
        .map(|n| Q::from_integer(binom(2 * n, n).pow(a) * binom(3 * n, n).pow(b) * binom(4 * n, 2 * n).pow(c)))
        .collect();
    let l = annihilator_uncompressed(&u, GuessBounds::new(4, 6)).map_err(|e| e.to_string())?;
    if !l.annihilates(&u) {
        return Err(format!("{l} does not annihilate the sequence ({a}, {b}, {c})"));
    }
    let (r, d) = (l.order(), l.degree());
    for r2 in 0..=r {
        for d2 in 0..=d {
            if (r2, d2) == (r, d) {
                continue;
            }
            if rank(shape_matrix(&u, r2, d2)) < (r2 + 1) * (d2 + 1) {
                return Err(format!("({a}, {b}, {c}): an operator of shape ({r2}, {d2}) exists below ({r}, {d})"));
            }
        }
    }
    Ok(true)
}

fn lattice_set(p: &LatticePolytope) -> BTreeSet<Vec<i64>> {
    let pts = p.lattice_points();
    let min: Vec<i64> = (0..2).map(|i| pts.iter().map(|v| v[i]).min().unwrap()).collect();
    pts.iter().map(|v| vec![v[0] - min[0], v[1] - min[1]]).collect()
}

/// Every lattice polygon in `[0,3]^2` with at most eight lattice points: each reported width-one
/// decomposition sums back (as lattice point sets) to the polygon.
///
/// Returns the number of polygons and of decompositions checked.
pub fn minkowski_soundness() -> Result<(usize, usize), String> {
    let grid: Vec<Vec<i64>> = (0..4).flat_map(|x| (0..4).map(move |y| vec![x, y])).collect();
    let mut seen = BTreeSet::new();
    let mut polygons = 0;
    let mut checked = 0;
    for mask in 1u32..(1 << 16) {
        if !(3..=8).contains(&mask.count_ones()) {
            continue;
        }
        let pts: Vec<Vec<i64>> = (0..16).filter(|k| mask >> k & 1 == 1).map(|k| grid[k].clone()).collect();
        let Ok(p) = LatticePolytope::hull(&pts) else { continue };
        if p.dim() != 2 || !seen.insert(p.vertices().to_vec()) {
            continue;
        }
        let target = lattice_set(&p);
        if target.len() > 8 {
            continue;
        }
        polygons += 1;
        for dec in decompose_width1(&p).map_err(|e| e.to_string())? {
            let mut acc: BTreeSet<Vec<i64>> = [vec![0, 0]].into_iter().collect();
            for s in &dec.summands {
                let pts = lattice_set(&s.polytope);
                for _ in 0..s.mult {
                    acc = acc.iter().flat_map(|a| pts.iter().map(move |b| vec![a[0] + b[0], a[1] + b[1]])).collect();
                }
            }
            if acc != target {
                return Err(format!("decomposition of {:?} does not sum back", p.vertices()));
            }
            checked += 1;
        }
    }
    Ok((polygons, checked))
}

/// Each corpus recurrence regenerates its printed series, and for entries with a polynomial,
/// freshly computed periods up to three times the printed length.
pub fn recurrence_round_trip() -> Result<usize, String> {
    let mut checked = 0;
    for e in corpus::entries() {
        let l = DiffOperator::parse(&e.operator).map_err(|err| err.to_string())?;
        let series = e.series_values();
        let i = support_gcd(&series).map_err(|err| err.to_string())?;
        if i != e.fano_index.max(1) {
            return Err(format!("{}: support gcd {i}, index {}", e.id, e.fano_index));
        }
        let rec = l.to_recurrence(i).map_err(|err| err.to_string())?;
        let c = compress(&series, i).map_err(|err| err.to_string())?;
        if extend(&rec, &c[..rec.span], c.len()).map_err(|err| err.to_string())? != c {
            return Err(format!("{}: recurrence does not regenerate the printed series", e.id));
        }
        if let Some(Ok(p)) = e.laurent() {
            let fresh = compress(&constant_terms(&p, 3 * c.len() * i).values, i).map_err(|err| err.to_string())?;
            if extend(&rec, &c[..rec.span], fresh.len()).map_err(|err| err.to_string())? != fresh {
                return Err(format!("{}: recurrence disagrees with computed periods", e.id));
            }
        }
        checked += 1;
    }
    Ok(checked)
}
