//! Factorization of face polynomials into width-one factors.
//!
//! A width-one factor has the form `A(x') y + c x'^u B(x')` in coordinates where `y`
//! is the grading along a width-one direction `w`. Its top and bottom coefficients
//! divide those of the polynomial, and its root in `y` at a rational point is a
//! rational root of the specialized polynomial. The directions `w` are enumerated
//! from edge directions of the Newton polytope: every edge of a Minkowski summand
//! is parallel to an edge of the sum, and `w` pairs to `-1, 0, 1` with the edges
//! of the summand.

use super::LaurentPolynomial;
use crate::arith::{q, Q};
use crate::factor::factor_q;
use crate::linalg::{complete_with_last_row, integral_solution, rank_i64, unimodular_inverse};
use crate::mpoly::{coprime, div_exact, divide_out, normalize};
use crate::upoly::UPoly;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeSet, HashMap};

/// `q = F(x_1..x_{m-1}) x_m + G(x_1..x_{m-1})` after the unimodular change `transform`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Width1Form {
    /// Rows are the new coordinate functionals; the last one is the width-one direction.
    pub transform: Vec<Vec<i64>>,
    pub f: LaurentPolynomial,
    pub g: LaurentPolynomial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrreducibleFactor {
    /// Normalized: non-negative exponents with zero minima, primitive integer coefficients.
    pub poly: LaurentPolynomial,
    pub multiplicity: usize,
    pub width1: Option<Width1Form>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<IrreducibleFactor>,
    /// Cofactor with no width-one factor, not split further.
    pub residue: Option<LaurentPolynomial>,
    /// Whether every width-one factor was provably found (the residue has none).
    pub complete: bool,
}

impl Factorization {
    pub fn all_width1(&self) -> bool {
        self.residue.is_none() && self.factors.iter().all(|f| f.width1.is_some())
    }
}

/// Writes `q` in the form `F x_m + G` if its Newton polytope has width one.
pub fn width1_form(q: &LaurentPolynomial) -> Option<Width1Form> {
    if q.is_zero() || q.is_monomial() {
        return None;
    }
    let newton = q.newton_polytope();
    let dirs = newton.width_directions(1);
    let w = dirs.first()?;
    let t = complete_with_last_row(w);
    let m = q.nvars();
    let r = q.transform(&t);
    let pieces = r.collect_in(m - 1);
    let (_, lo) = pieces.iter().next().unwrap();
    let (_, hi) = pieces.iter().next_back().unwrap();
    Some(Width1Form { transform: t, f: hi.drop_var(m - 1), g: lo.drop_var(m - 1) })
}

#[derive(Default)]
pub struct Factorizer {
    cache: HashMap<LaurentPolynomial, Factorization>,
}

const PRIMES: [i64; 12] = [101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157];

impl Factorizer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Irreducible factorization up to units (scalars and monomials).
    pub fn factorize(&mut self, p: &LaurentPolynomial) -> Factorization {
        assert!(!p.is_zero(), "zero polynomial");
        let key = normalize(p);
        if let Some(f) = self.cache.get(&key) {
            return f.clone();
        }
        let out = self.factorize_uncached(&key);
        self.cache.insert(key, out.clone());
        out
    }

    fn factorize_uncached(&mut self, p: &LaurentPolynomial) -> Factorization {
        let m = p.nvars();
        let empty = Factorization { factors: vec![], residue: None, complete: true };
        if p.is_monomial() {
            return empty;
        }
        let newton = p.newton_polytope();
        let d = newton.dim();
        if d < m {
            return self.factorize_lower(p, &newton);
        }
        if m == 1 {
            let u = UPoly::new((0..=p.max_exponents()[0]).map(|k| p.coeff(&[k])).collect());
            let (_, fs) = factor_q(&u);
            let factors = fs
                .into_iter()
                .map(|(f, e)| {
                    let poly = normalize(&LaurentPolynomial::from_terms(
                        1,
                        f.coeffs().iter().enumerate().map(|(i, c)| (vec![i as i64], c.clone())),
                    ));
                    let width1 = width1_form(&poly);
                    IrreducibleFactor { poly, multiplicity: e, width1 }
                })
                .collect();
            return Factorization { factors, residue: None, complete: true };
        }
        let mut r = p.clone();
        let mut factors: Vec<IrreducibleFactor> = Vec::new();
        let mut residue = None;
        let mut complete = true;
        loop {
            if r.is_monomial() {
                break;
            }
            let nr = r.newton_polytope();
            if nr.dim() < m {
                let sub = self.factorize_lower(&r, &nr);
                complete &= sub.complete;
                merge(&mut factors, sub.factors);
                residue = sub.residue;
                break;
            }
            if let Some(form) = width1_form(&r) {
                if coprime(&form.f, &form.g) {
                    merge(&mut factors, vec![IrreducibleFactor { poly: normalize(&r), multiplicity: 1, width1: Some(form) }]);
                    break;
                }
            }
            let (found, comp) = self.find_width1_factor(&r);
            match found {
                Some(f) => {
                    let (k, rest) = divide_out(&r, &f);
                    debug_assert!(k > 0);
                    let width1 = width1_form(&f);
                    merge(&mut factors, vec![IrreducibleFactor { poly: f, multiplicity: k, width1 }]);
                    r = normalize(&rest);
                }
                None => {
                    complete &= comp;
                    residue = Some(r);
                    break;
                }
            }
        }
        factors.sort_by(|a, b| a.poly.cmp(&b.poly));
        Factorization { factors, residue, complete }
    }

    /// Factors a polynomial whose Newton polytope is not full-dimensional in its own lattice.
    fn factorize_lower(&mut self, p: &LaurentPolynomial, newton: &crate::lattice::LatticePolytope) -> Factorization {
        let frame = newton.frame().clone();
        let local = super::to_local_coordinates(p, newton);
        let sub = self.factorize(&local);
        let lift = |f: &LaurentPolynomial| -> LaurentPolynomial {
            let zero = vec![0i64; frame.dim];
            let o = frame.global(&zero);
            normalize(&LaurentPolynomial::from_terms(
                frame.ambient,
                f.terms().iter().map(|(e, c)| {
                    let g = frame.global(e);
                    (g.iter().zip(&o).map(|(a, b)| a - b).collect(), c.clone())
                }),
            ))
        };
        let factors = sub
            .factors
            .iter()
            .map(|f| {
                let poly = lift(&f.poly);
                let width1 = width1_form(&poly);
                IrreducibleFactor { poly, multiplicity: f.multiplicity, width1 }
            })
            .collect();
        Factorization { factors, residue: sub.residue.as_ref().map(lift), complete: sub.complete }
    }

    /// All divisors (normalized) of `p`, and whether the list is provably complete.
    fn divisors(&mut self, p: &LaurentPolynomial) -> (Vec<LaurentPolynomial>, bool) {
        let n = p.nvars();
        let fz = self.factorize(p);
        let mut parts: Vec<(LaurentPolynomial, usize)> = fz.factors.iter().map(|f| (f.poly.clone(), f.multiplicity)).collect();
        let mut complete = true;
        if let Some(r) = &fz.residue {
            parts.push((r.clone(), 1));
            complete = n <= 1;
        }
        let mut out = vec![LaurentPolynomial::one(n)];
        for (f, e) in parts {
            let mut next = Vec::new();
            for d in &out {
                let mut cur = d.clone();
                next.push(cur.clone());
                for _ in 0..e {
                    cur = &cur * &f;
                    next.push(cur.clone());
                }
            }
            out = next;
        }
        (out.into_iter().map(|d| normalize(&d)).collect(), complete)
    }

    /// Searches for one irreducible width-one factor of a full-dimensional polynomial.
    fn find_width1_factor(&mut self, r: &LaurentPolynomial) -> (Option<LaurentPolynomial>, bool) {
        let m = r.nvars();
        let newton = r.newton_polytope();
        let mut complete = true;
        for w in candidate_directions(&newton) {
            let t = complete_with_last_row(&w);
            let rt = r.transform(&t);
            let pieces = rt.collect_in(m - 1);
            if pieces.len() < 2 {
                continue;
            }
            let (&kmin, bot) = pieces.iter().next().unwrap();
            let (_, top) = pieces.iter().next_back().unwrap();
            let top = top.drop_var(m - 1);
            let bot = bot.drop_var(m - 1);
            let Some((xi1, xi2)) = sample_points(&top, &bot, m - 1) else {
                complete = false;
                continue;
            };
            let roots1 = y_roots(&pieces, kmin, &xi1);
            if roots1.is_empty() {
                continue;
            }
            let roots2 = y_roots(&pieces, kmin, &xi2);
            if roots2.is_empty() {
                continue;
            }
            let (dt, ct) = self.divisors(&top);
            let (db, cb) = self.divisors(&bot);
            complete &= ct && cb;
            let tinv = unimodular_inverse(&t);
            for a in &dt {
                let (a1, a2) = (a.eval(&xi1), a.eval(&xi2));
                for b in &db {
                    if !coprime(a, b) {
                        continue;
                    }
                    let (b1, b2) = (b.eval(&xi1), b.eval(&xi2));
                    for y1 in &roots1 {
                        let k1 = -y1 * &a1 / &b1;
                        for y2 in &roots2 {
                            let k2 = -y2 * &a2 / &b2;
                            let Some(u) = monomial_exponent(&(&k1 / &k2), &xi1, &xi2) else { continue };
                            let c = &k1 / monomial_value(&xi1, &u);
                            let ay = a.insert_var(m - 1).shift(&unit(m, m - 1));
                            let mut uu = u.clone();
                            uu.push(0);
                            let bb = b.insert_var(m - 1).shift(&uu).scale(&c);
                            let cand = &ay + &bb;
                            if div_exact(&rt, &cand).is_some() {
                                return (Some(normalize(&cand.transform(&tinv))), complete);
                            }
                        }
                    }
                }
            }
        }
        (None, complete)
    }
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    (0..n).map(|j| (i == j) as i64).collect()
}

fn merge(into: &mut Vec<IrreducibleFactor>, new: Vec<IrreducibleFactor>) {
    for f in new {
        if let Some(g) = into.iter_mut().find(|g| g.poly == f.poly) {
            g.multiplicity += f.multiplicity;
        } else {
            into.push(f);
        }
    }
}

/// Primitive functionals `w` (up to sign) pairing to `-1, 0, 1` with independent edge directions.
pub fn candidate_directions(newton: &crate::lattice::LatticePolytope) -> Vec<Vec<i64>> {
    let m = newton.ambient_dim();
    let v = newton.vertices();
    let mut edges: BTreeSet<Vec<i64>> = BTreeSet::new();
    for (i, j) in newton.edges() {
        let d: Vec<i64> = v[j].iter().zip(&v[i]).map(|(a, b)| a - b).collect();
        edges.insert(sign_normal(crate::arith::primitive(&d)));
    }
    let edges: Vec<Vec<i64>> = edges.into_iter().collect();
    let mut out: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut subset: Vec<usize> = Vec::new();
    fn rec(
        start: usize,
        subset: &mut Vec<usize>,
        edges: &[Vec<i64>],
        m: usize,
        out: &mut BTreeSet<Vec<i64>>,
    ) {
        if !subset.is_empty() {
            let rows: Vec<Vec<i64>> = subset.iter().map(|&i| edges[i].clone()).collect();
            if rank_i64(&rows) < rows.len() {
                return;
            }
            let k = rows.len();
            let total = 3usize.pow(k as u32);
            for code in 0..total {
                let mut c = code;
                let vals: Vec<i64> = (0..k)
                    .map(|_| {
                        let d = (c % 3) as i64 - 1;
                        c /= 3;
                        d
                    })
                    .collect();
                let first = vals.iter().find(|&&x| x != 0);
                if first != Some(&1) {
                    continue;
                }
                if let Some(w) = integral_solution(&rows, &vals, m) {
                    out.insert(sign_normal(w));
                }
            }
        }
        if subset.len() == m {
            return;
        }
        for i in start..edges.len() {
            subset.push(i);
            rec(i + 1, subset, edges, m, out);
            subset.pop();
        }
    }
    rec(0, &mut subset, &edges, m, &mut out);
    let width = |w: &Vec<i64>| newton.max_of(w) - newton.min_of(w);
    let mut ws: Vec<Vec<i64>> = out.into_iter().filter(|w| width(w) >= 1).collect();
    ws.sort_by_key(|w| (width(w), w.iter().map(|x| x.abs()).sum::<i64>(), w.clone()));
    ws
}

fn sign_normal(v: Vec<i64>) -> Vec<i64> {
    match v.iter().find(|&&x| x != 0) {
        Some(&x) if x < 0 => v.into_iter().map(|y| -y).collect(),
        _ => v,
    }
}

/// Two points with disjoint prime coordinates where `top` and `bot` do not vanish.
fn sample_points(top: &LaurentPolynomial, bot: &LaurentPolynomial, k: usize) -> Option<(Vec<Q>, Vec<Q>)> {
    let mut found: Vec<Vec<Q>> = Vec::new();
    let mut i = 0;
    while found.len() < 2 && i + k <= PRIMES.len() {
        let xi: Vec<Q> = PRIMES[i..i + k].iter().map(|&p| q(p)).collect();
        if !top.eval(&xi).is_zero() && !bot.eval(&xi).is_zero() {
            found.push(xi);
            i += k;
        } else {
            i += 1;
        }
    }
    if found.len() < 2 {
        return None;
    }
    let b = found.pop().unwrap();
    let a = found.pop().unwrap();
    Some((a, b))
}

/// Nonzero rational roots in `y` after substituting `x' = xi`.
fn y_roots(pieces: &std::collections::BTreeMap<i64, LaurentPolynomial>, kmin: i64, xi: &[Q]) -> Vec<Q> {
    let kmax = *pieces.keys().next_back().unwrap();
    let mut c = vec![Q::zero(); (kmax - kmin + 1) as usize];
    let mut pt = xi.to_vec();
    pt.push(Q::one());
    for (k, p) in pieces {
        c[(k - kmin) as usize] = p.eval(&pt);
    }
    UPoly::new(c).rational_roots().into_iter().filter(|r| !r.is_zero()).collect()
}

fn valuation(x: &BigInt, p: i64) -> (i64, BigInt) {
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    while !x.is_zero() && (&x % &p).is_zero() {
        x /= &p;
        v += 1;
    }
    (v, x)
}

/// Finds `u` with `ratio = prod (xi1_i / xi2_i)^{u_i}` for prime coordinates.
fn monomial_exponent(ratio: &Q, xi1: &[Q], xi2: &[Q]) -> Option<Vec<i64>> {
    let mut num = ratio.numer().abs();
    let mut den = ratio.denom().clone();
    if ratio.is_negative() {
        return None;
    }
    let mut u = Vec::with_capacity(xi1.len());
    for (a, b) in xi1.iter().zip(xi2) {
        let pa = i64::try_from(a.to_integer()).ok()?;
        let pb = i64::try_from(b.to_integer()).ok()?;
        let (va_n, n1) = valuation(&num, pa);
        let (va_d, d1) = valuation(&den, pa);
        let (vb_n, n2) = valuation(&n1, pb);
        let (vb_d, d2) = valuation(&d1, pb);
        num = n2;
        den = d2;
        let ua = va_n - va_d;
        let ub = vb_d - vb_n;
        if ua != ub {
            return None;
        }
        u.push(ua);
    }
    if num.is_one() && den.is_one() {
        Some(u)
    } else {
        None
    }
}

fn monomial_value(xi: &[Q], u: &[i64]) -> Q {
    xi.iter()
        .zip(u)
        .map(|(x, &k)| if k >= 0 { num_traits::pow(x.clone(), k as usize) } else { num_traits::pow(x.recip(), (-k) as usize) })
        .fold(Q::one(), |a, b| a * b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse_with_vars;

    fn p(s: &str) -> LaurentPolynomial {
        let v: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        parse_with_vars(s, &v).unwrap().poly
    }

    fn product(f: &Factorization, n: usize) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::one(n);
        for g in &f.factors {
            out = &out * &g.poly.pow(g.multiplicity as u32);
        }
        if let Some(r) = &f.residue {
            out = &out * r;
        }
        out
    }

    #[test]
    fn facet_product() {
        let q = p("(z + 1)*(y*z + y + 1)*(x*y + x + 1)^3");
        let mut fz = Factorizer::new();
        let f = fz.factorize(&q);
        assert!(f.all_width1());
        assert_eq!(f.factors.len(), 3);
        assert_eq!(f.factors.iter().map(|g| g.multiplicity).sum::<usize>(), 5);
        assert_eq!(normalize(&product(&f, 3)), normalize(&q));
    }

    #[test]
    fn irreducible_and_wide() {
        let mut fz = Factorizer::new();
        let f = fz.factorize(&p("(1 + y)^4 + x"));
        assert_eq!(f.factors.len(), 1);
        assert!(f.all_width1());
        let f = fz.factorize(&p("x^2 + y^2 + 1"));
        assert!(f.residue.is_some() && f.complete);
        assert!(!f.all_width1());
    }

    #[test]
    fn mixed_dimensions() {
        let mut fz = Factorizer::new();
        let q = p("(1 + x + x^2)*(1 + y + x*y)*(1 + x*y)^2");
        let f = fz.factorize(&q);
        assert_eq!(normalize(&product(&f, 3)), normalize(&q));
        assert_eq!(f.factors.len(), 3);
        assert!(!f.all_width1());
        let q = p("(x + y + z + 1)^3");
        let f = fz.factorize(&q);
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0].multiplicity, 3);
    }
}
