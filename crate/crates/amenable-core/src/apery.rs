//! Solution spaces of period recurrences and limits of quotients of solutions.

use crate::arith::{working_precision, zeta_fixed, Fixed, Q};
use crate::picard_fuchs::Recurrence;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AperyError {
    #[error("initial values violate the recurrence at n = {0}")]
    Inconsistent(usize),
    #[error("initial window has length {0}, recurrence needs {1}")]
    Window(usize, usize),
    #[error("denominator sequence vanishes near n = {0}")]
    ZeroDenominator(usize),
    #[error("quotients do not settle (last differences grow)")]
    NotConvergent,
    #[error("need at least {0} terms")]
    TooShort(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionBasis {
    pub recurrence: Recurrence,
    /// Independent solutions of length `N`.
    pub basis: Vec<Vec<Q>>,
    /// Indices `n >= span` where the coefficient of `u_n` vanished.
    pub constraints: Vec<usize>,
}

impl SolutionBasis {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// A general solution as coordinates over free parameters, one vector per index.
fn parametric(rec: &Recurrence, n_terms: usize) -> (Vec<Vec<Q>>, Vec<Vec<Q>>, Vec<usize>) {
    let d = rec.span;
    let mut nparams = d.min(n_terms);
    let mut u: Vec<Vec<Q>> = (0..nparams)
        .map(|k| {
            let mut e = vec![Q::zero(); nparams];
            e[k] = Q::one();
            e
        })
        .collect();
    let mut eqs: Vec<Vec<Q>> = Vec::new();
    let mut hit = Vec::new();
    for n in d..n_terms {
        let c = rec.coefficients_at(n);
        let mut rhs = vec![Q::zero(); nparams];
        for i in 1..=d {
            if c[i].is_zero() {
                continue;
            }
            for (k, x) in u[n - i].iter().enumerate() {
                if !x.is_zero() {
                    rhs[k] -= &c[i] * x;
                }
            }
        }
        if c[0].is_zero() {
            hit.push(n);
            eqs.push(rhs);
            nparams += 1;
            for v in u.iter_mut() {
                v.push(Q::zero());
            }
            for e in eqs.iter_mut() {
                e.resize(nparams, Q::zero());
            }
            let mut e = vec![Q::zero(); nparams];
            e[nparams - 1] = Q::one();
            u.push(e);
        } else {
            u.push(rhs.into_iter().map(|x| x / &c[0]).collect());
        }
    }
    (u, eqs, hit)
}

/// Basis of the solutions of `rec` truncated to `n_terms`. When the coefficient of `u_n`
/// vanishes, `u_n` becomes a free parameter and the relation at `n` a linear constraint.
pub fn solution_basis(rec: &Recurrence, n_terms: usize) -> SolutionBasis {
    let (u, eqs, hit) = parametric(rec, n_terms);
    let nparams = u.first().map_or(0, |v| v.len());
    let rows: Vec<Vec<BigInt>> = eqs.iter().map(|e| crate::linalg::clear_denominators(e)).collect();
    let kernel: Vec<Vec<Q>> = if rows.is_empty() {
        (0..nparams)
            .map(|k| (0..nparams).map(|j| if j == k { Q::one() } else { Q::zero() }).collect())
            .collect()
    } else {
        crate::linalg::integer_nullspace(&rows, nparams)
            .into_iter()
            .map(|v| v.into_iter().map(Q::from_integer).collect())
            .collect()
    };
    let basis = kernel
        .iter()
        .map(|w| u.iter().map(|coords| coords.iter().zip(w).map(|(a, b)| a * b).fold(Q::zero(), |x, y| x + y)).collect())
        .collect();
    SolutionBasis { recurrence: rec.clone(), basis, constraints: hit }
}

/// The solution with the given initial window extended to `n_terms`.
pub fn extend(rec: &Recurrence, init: &[Q], n_terms: usize) -> Result<Vec<Q>, AperyError> {
    let d = rec.span;
    if init.len() < d {
        return Err(AperyError::Window(init.len(), d));
    }
    let mut u: Vec<Q> = init.to_vec();
    for n in d..n_terms {
        let c = rec.coefficients_at(n);
        let mut rhs = Q::zero();
        for i in 1..=d {
            if !c[i].is_zero() && !u[n - i].is_zero() {
                rhs -= &c[i] * &u[n - i];
            }
        }
        if n < u.len() {
            // the window prescribes u_n; check it
            if &c[0] * &u[n] != rhs {
                return Err(AperyError::Inconsistent(n));
            }
            continue;
        }
        if c[0].is_zero() {
            if !rhs.is_zero() {
                return Err(AperyError::Inconsistent(n));
            }
            // u_n is free; the canonical choice is 0
            u.push(Q::zero());
        } else {
            u.push(rhs / &c[0]);
        }
    }
    u.truncate(n_terms.max(d));
    Ok(u)
}

/// The pair `(A, B)` extended from their initial windows; `A` is flagged when integral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalPair {
    pub a: Vec<Q>,
    pub b: Vec<Q>,
    pub a_integral: bool,
}

pub fn canonical_ab(rec: &Recurrence, a_init: &[Q], b_init: &[Q], n_terms: usize) -> Result<CanonicalPair, AperyError> {
    let a = extend(rec, a_init, n_terms)?;
    let b = extend(rec, b_init, n_terms)?;
    let a_integral = a.iter().all(|x| x.is_integer());
    Ok(CanonicalPair { a, b, a_integral })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AperyLimit {
    pub value: Fixed,
    pub error_estimate: Fixed,
    pub n_used: usize,
}

impl fmt::Display for AperyLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown = self.value.digits.min(40);
        write!(f, "{} +- {:.1e} (n = {})", self.value.to_decimal(shown), self.error_estimate.to_f64(), self.n_used)
    }
}

fn quotient(b: &Q, a: &Q, digits: u32) -> Fixed {
    Fixed::from_q(&(b / a), digits)
}

/// `lim B_n / A_n` at `working_precision()` digits.
pub fn apery_limit(a: &[Q], b: &[Q], n: usize) -> Result<AperyLimit, AperyError> {
    apery_limit_at(a, b, n, working_precision())
}

/// Aitken extrapolation of the last three quotients `B_k / A_k`, `k <= n`.
pub fn apery_limit_at(a: &[Q], b: &[Q], n: usize, digits: u32) -> Result<AperyLimit, AperyError> {
    let n = n.min(a.len()).min(b.len());
    if n < 3 {
        return Err(AperyError::TooShort(3));
    }
    let mut qs = Vec::new();
    for k in n - 3..n {
        if a[k].is_zero() {
            return Err(AperyError::ZeroDenominator(k));
        }
        qs.push(quotient(&b[k], &a[k], digits));
    }
    let d0 = qs[1].sub(&qs[0]);
    let d1 = qs[2].sub(&qs[1]);
    let floor = Fixed { v: BigInt::from(10), digits };
    if d1.abs().v > d0.abs().v && d1.abs().v > floor.v {
        return Err(AperyError::NotConvergent);
    }
    let den = d1.sub(&d0);
    let value = if den.v.is_zero() || d1.v.is_zero() { qs[2].clone() } else { qs[2].sub(&d1.mul(&d1).div(&den)) };
    let err = value.sub(&qs[2]).abs();
    let error_estimate = if err.v < floor.v { floor } else { err };
    Ok(AperyLimit { value, error_estimate, n_used: n })
}

/// Constants tried by [`recognize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Constant {
    Zeta(u32),
    One,
}

impl Constant {
    pub fn value(&self, digits: u32) -> Fixed {
        match self {
            Constant::Zeta(k) => zeta_fixed(*k, digits),
            Constant::One => Fixed::from_int(1, digits),
        }
    }

    pub fn default_catalog() -> Vec<Constant> {
        vec![Constant::Zeta(2), Constant::Zeta(3), Constant::Zeta(4), Constant::One]
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Zeta(k) => write!(f, "zeta({k})"),
            Constant::One => write!(f, "1"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recognition {
    pub multiplier: Q,
    pub constant: Constant,
}

impl fmt::Display for Recognition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * {}", crate::arith::fmt_q(&self.multiplier), self.constant)
    }
}

/// Continued-fraction convergents of `x` with denominator at most `bound`.
pub fn convergents(x: &Q, bound: &BigInt) -> Vec<Q> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut r = x.clone();
    for _ in 0..200 {
        let a = r.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if &k2 > bound {
            break;
        }
        out.push(Q::new(h2.clone(), k2.clone()));
        let frac = &r - Q::from_integer(a);
        if frac.is_zero() {
            break;
        }
        r = frac.recip();
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
    }
    out
}

/// First constant `c` of `catalog` for which `value / c` is within `tolerance` of a rational
/// with denominator at most `bound`.
pub fn recognize(value: &Fixed, catalog: &[Constant], bound: u64, tolerance: &Q) -> Option<Recognition> {
    let bound = BigInt::from(bound);
    for &c in catalog {
        let cv = c.value(value.digits);
        let x = value.to_q() / cv.to_q();
        for m in convergents(&x, &bound) {
            if m.is_zero() {
                continue;
            }
            let resid = (value.to_q() - &m * cv.to_q()).abs();
            if &resid < tolerance {
                return Some(Recognition { multiplier: m, constant: c });
            }
        }
    }
    None
}

/// Default tolerance: `10^(-digits/2)`.
pub fn default_tolerance(digits: u32) -> Q {
    Q::new(BigInt::one(), BigInt::from(10).pow(digits / 2))
}

/// LLL-reduced basis of the integer lattice spanned by `rows` (delta = 3/4).
pub fn lll(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut b: Vec<Vec<BigInt>> = rows.to_vec();
    let n = b.len();
    if n == 0 {
        return b;
    }
    let dot = |x: &[Q], y: &[Q]| x.iter().zip(y).map(|(a, b)| a * b).fold(Q::zero(), |s, t| s + t);
    let gso = |b: &[Vec<BigInt>]| -> (Vec<Vec<Q>>, Vec<Vec<Q>>, Vec<Q>) {
        let n = b.len();
        let bq: Vec<Vec<Q>> = b.iter().map(|r| r.iter().cloned().map(Q::from_integer).collect()).collect();
        let mut bs: Vec<Vec<Q>> = Vec::with_capacity(n);
        let mut mu = vec![vec![Q::zero(); n]; n];
        let mut norms = Vec::with_capacity(n);
        for i in 0..n {
            let mut v = bq[i].clone();
            for j in 0..i {
                mu[i][j] = if norms[j] == Q::zero() { Q::zero() } else { dot(&bq[i], &bs[j]) / &norms[j] };
                for (x, y) in v.iter_mut().zip(&bs[j]) {
                    *x -= &mu[i][j] * y;
                }
            }
            norms.push(dot(&v, &v));
            bs.push(v);
        }
        (bs, mu, norms)
    };
    let (_, mut mu, mut norms) = gso(&b);
    let delta = Q::new(BigInt::from(3), BigInt::from(4));
    let half = Q::new(BigInt::one(), BigInt::from(2));
    let mut k = 1;
    let mut guard = 0usize;
    while k < n && guard < 100_000 {
        guard += 1;
        for j in (0..k).rev() {
            if mu[k][j].abs() > half {
                let r = mu[k][j].round().to_integer();
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= &r * y;
                }
                let (_, m2, n2) = gso(&b);
                mu = m2;
                norms = n2;
            }
        }
        let lhs = &norms[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if lhs >= &rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            let (_, m2, n2) = gso(&b);
            mu = m2;
            norms = n2;
            k = (k - 1).max(1);
        }
    }
    b
}

/// Small integer vectors `c` with `sum c_i x_i ~ 0`, shortest first.
pub fn integer_relations(xs: &[Fixed], max_coeff: u64) -> Vec<Vec<BigInt>> {
    let m = xs.len();
    if m == 0 {
        return vec![];
    }
    let digits = xs[0].digits;
    // keep a margin below the working precision
    let used = digits.saturating_sub(digits / 5 + 5).max(10);
    let scale = BigInt::from(10).pow(digits - used);
    let rows: Vec<Vec<BigInt>> = (0..m)
        .map(|i| {
            let mut r: Vec<BigInt> = (0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect();
            r.push(xs[i].v.div_floor(&scale));
            r
        })
        .collect();
    let reduced = lll(&rows);
    let limit = BigInt::from(max_coeff);
    let tol = BigInt::from(10).pow(digits - digits / 3);
    let mut out: Vec<Vec<BigInt>> = reduced
        .into_iter()
        .map(|r| r[..m].to_vec())
        .filter(|c| c.iter().any(|x| !x.is_zero()) && c.iter().all(|x| x.abs() <= limit))
        .filter(|c| {
            let s: BigInt = c.iter().zip(xs).map(|(a, x)| a * &x.v).sum();
            // residual well below 10^(-2 digits / 3) in absolute value
            s.abs() * BigInt::from(1) < tol
        })
        .collect();
    out.sort_by_key(|c| c.iter().map(|x| x.abs()).max().unwrap());
    out
}

/// Rational weights `w` (one per limit) with `sum w_k L_k = constant`, if a relation with small
/// coefficients exists.
pub fn combination_for(limits: &[Fixed], constant: &Fixed, max_coeff: u64) -> Option<Vec<Q>> {
    let mut xs = limits.to_vec();
    xs.push(constant.clone());
    let m = limits.len();
    integer_relations(&xs, max_coeff).into_iter().find(|c| !c[m].is_zero()).map(|c| {
        let den = -c[m].clone();
        c[..m].iter().map(|x| Q::new(x.clone(), den.clone())).collect()
    })
}

/// A limit obtained from a solution of the recurrence with a given initial window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowLimit {
    pub window: Vec<Q>,
    pub limit: Fixed,
    pub recognized: Option<Recognition>,
}

/// For the solution space of `rec`: the limits of `e_k / A` for unit windows `e_k` and, for every
/// constant in `catalog`, a window (combination of unit windows) whose limit is that constant.
pub fn scan_limits(rec: &Recurrence, a_window: &[Q], n_terms: usize, catalog: &[Constant], max_coeff: u64) -> Result<(Vec<Fixed>, Vec<WindowLimit>), AperyError> {
    let digits = working_precision();
    let d = rec.span;
    let a = extend(rec, a_window, n_terms)?;
    let mut limits = Vec::new();
    for k in 0..d {
        let mut e = vec![Q::zero(); d];
        e[k] = Q::one();
        let b = extend(rec, &e, n_terms)?;
        limits.push(apery_limit_at(&a, &b, n_terms, digits)?.value);
    }
    let mut found = Vec::new();
    for &c in catalog {
        let cv = c.value(digits);
        if let Some(w) = combination_for(&limits, &cv, max_coeff) {
            found.push(WindowLimit { window: w, limit: cv, recognized: Some(Recognition { multiplier: Q::one(), constant: c }) });
        }
    }
    Ok((limits, found))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qf, zeta3_fixed};
    use crate::picard_fuchs::DiffOperator;

    fn apery3() -> Recurrence {
        DiffOperator::parse("D^3 - t (34 D^3 + 51 D^2 + 27 D + 5) + t^2 (D + 1)^3").unwrap().to_recurrence(1).unwrap()
    }

    // n^2 u_n - (11 n^2 - 11 n + 3) u_{n-1} - (n-1)^2 u_{n-2} = 0
    fn apery2() -> Recurrence {
        DiffOperator::parse("D^2 - t (11 D^2 + 11 D + 3) - t^2 (D + 1)^2").unwrap().to_recurrence(1).unwrap()
    }

    #[test]
    fn windows_and_second_terms() {
        let p = canonical_ab(&apery3(), &[q(1), q(5)], &[q(0), q(6)], 5).unwrap();
        assert_eq!(p.a, vec![q(1), q(5), q(73), q(1445), q(33001)]);
        assert!(p.a_integral);
        assert_eq!(p.b[2], qf(351, 4));
        let s = canonical_ab(&apery2(), &[q(1), q(3)], &[q(0), q(5)], 4).unwrap();
        assert_eq!(s.a[2], q(19));
        assert_eq!(s.a[3], q(147));
    }

    #[test]
    fn geometric_basis() {
        let rec = DiffOperator::parse("(1 - t) D - t").unwrap().to_recurrence(1).unwrap();
        let b = solution_basis(&rec, 6);
        assert_eq!(b.dimension(), 1);
        assert!(b.basis[0].iter().all(|x| x == &b.basis[0][0]));
    }

    #[test]
    fn constraint_when_leading_vanishes() {
        // (n - 2) u_n = (n - 2) u_{n-1}: u_2 is free
        let rec = DiffOperator::parse("D - 2 - t (D - 1)").unwrap().to_recurrence(1).unwrap();
        let b = solution_basis(&rec, 6);
        assert_eq!(b.constraints, vec![2]);
        assert_eq!(b.dimension(), 2);
        for u in &b.basis {
            assert!(rec.satisfied_by(u));
        }
    }

    #[test]
    fn zeta3_and_zeta2_limits() {
        let p = canonical_ab(&apery3(), &[q(1), q(5)], &[q(0), q(6)], 200).unwrap();
        let lim = apery_limit_at(&p.a, &p.b, 200, 60).unwrap();
        let z3 = zeta3_fixed(60);
        assert!(lim.value.sub(&z3).abs().to_f64() < 1e-25);
        let r = recognize(&lim.value, &Constant::default_catalog(), 1000, &default_tolerance(60)).unwrap();
        assert_eq!(r, Recognition { multiplier: q(1), constant: Constant::Zeta(3) });
        let s = canonical_ab(&apery2(), &[q(1), q(3)], &[q(0), q(5)], 200).unwrap();
        let lim = apery_limit_at(&s.a, &s.b, 200, 60).unwrap();
        let r = recognize(&lim.value, &Constant::default_catalog(), 1000, &default_tolerance(60)).unwrap();
        assert_eq!(r.constant, Constant::Zeta(2));
        assert_eq!(r.multiplier, q(1));
    }

    #[test]
    fn recognition_examples() {
        let tol = Q::new(BigInt::one(), BigInt::from(10u64.pow(12)));
        let z3 = Fixed::from_q(&crate::arith::parse_q("1.2020569031595942").unwrap(), 16);
        let r = recognize(&z3, &Constant::default_catalog(), 100, &Q::new(BigInt::one(), BigInt::from(10u64.pow(14)))).unwrap();
        assert_eq!((r.multiplier, r.constant), (q(1), Constant::Zeta(3)));
        let x = zeta_fixed(2, 40).mul(&Fixed::from_q(&qf(5, 2), 40));
        let r = recognize(&x, &Constant::default_catalog(), 100, &tol).unwrap();
        assert_eq!((r.multiplier, r.constant), (qf(5, 2), Constant::Zeta(2)));
        let s2 = Fixed::from_q(&crate::arith::parse_q("1.4142135").unwrap(), 7);
        assert_eq!(recognize(&s2, &Constant::default_catalog(), 100, &qf(1, 100_000_000)), None);
    }

    #[test]
    fn equal_sequences_give_one() {
        let p = canonical_ab(&apery3(), &[q(1), q(5)], &[q(1), q(5)], 30).unwrap();
        let lim = apery_limit_at(&p.a, &p.b, 30, 40).unwrap();
        assert_eq!(lim.value, Fixed::from_int(1, 40));
    }

    #[test]
    fn relation_finder() {
        let d = 60;
        let z2 = zeta_fixed(2, d);
        let z4 = zeta_fixed(4, d);
        // 3 z2 - 7 z4 + 2 = 0 is false; look for x = 3 z2 - 7 z4 + 2
        let x = z2.mul(&Fixed::from_int(3, d)).sub(&z4.mul(&Fixed::from_int(7, d))).add(&Fixed::from_int(2, d));
        let rels = integer_relations(&[x, z2.clone(), z4, Fixed::from_int(1, d)], 1000);
        let c = &rels[0];
        let s = &c[0];
        let norm: Vec<BigInt> = c.iter().map(|v| v * s.signum()).collect();
        assert_eq!(norm, vec![1, -3, 7, -2].into_iter().map(BigInt::from).collect::<Vec<_>>());
        let w = combination_for(&[z2.clone(), Fixed::from_int(1, d)], &z2.mul(&Fixed::from_q(&qf(2, 3), d)), 1000).unwrap();
        assert_eq!(w, vec![qf(2, 3), q(0)]);
    }
}
