//! Multivariate division and gcd for Laurent polynomials.

use crate::arith::Q;
use crate::laurent::LaurentPolynomial;
use crate::upoly::UPoly;
use num_traits::{One, Zero};
use std::cmp::Ordering;

fn lex(a: &[i64], b: &[i64]) -> Ordering {
    a.cmp(b)
}

/// Exact quotient `a / b` in the Laurent ring, or `None`.
pub fn div_exact(a: &LaurentPolynomial, b: &LaurentPolynomial) -> Option<LaurentPolynomial> {
    assert!(!b.is_zero(), "division by zero");
    let n = a.nvars();
    if a.is_zero() {
        return Some(LaurentPolynomial::zero(n));
    }
    let (lb, cb) = b.leading(lex).map(|(e, c)| (e.clone(), c.clone()))?;
    // Newton(q) + Newton(b) = Newton(a) bounds every quotient exponent
    let lo: Vec<i64> = a.min_exponents().iter().zip(b.min_exponents()).map(|(x, y)| x - y).collect();
    let hi: Vec<i64> = a.max_exponents().iter().zip(b.max_exponents()).map(|(x, y)| x - y).collect();
    let mut r = a.clone();
    let mut qt = LaurentPolynomial::zero(n);
    while !r.is_zero() {
        let (lr, cr) = r.leading(lex).map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let e: Vec<i64> = lr.iter().zip(&lb).map(|(x, y)| x - y).collect();
        if e.iter().zip(&lo).zip(&hi).any(|((x, l), h)| x < l || x > h) {
            return None;
        }
        let c = cr / &cb;
        let m = LaurentPolynomial::monomial(e, c);
        r = &r - &(&m * b);
        qt = &qt + &m;
    }
    Some(qt)
}

/// Multiplicity of `f` as a factor of `a` and the cofactor.
pub fn divide_out(a: &LaurentPolynomial, f: &LaurentPolynomial) -> (usize, LaurentPolynomial) {
    let mut k = 0;
    let mut cur = a.clone();
    if f.is_monomial() {
        return (0, cur);
    }
    while let Some(qt) = div_exact(&cur, f) {
        cur = qt;
        k += 1;
    }
    (k, cur)
}

/// Recursive representation: polynomial in the last variable with coefficients in the others.
fn split_last(p: &LaurentPolynomial) -> Vec<LaurentPolynomial> {
    let n = p.nvars();
    let m = p.max_exponents()[n - 1].max(0) as usize;
    let mut out = vec![LaurentPolynomial::zero(n - 1); m + 1];
    for (e, c) in p.terms() {
        let mut e2 = e.clone();
        let k = e2.pop().unwrap() as usize;
        out[k].add_term(e2, c.clone());
    }
    out
}

fn join_last(cs: &[LaurentPolynomial], n: usize) -> LaurentPolynomial {
    let mut out = LaurentPolynomial::zero(n);
    for (k, c) in cs.iter().enumerate() {
        for (e, a) in c.terms() {
            let mut e2 = e.clone();
            e2.push(k as i64);
            out.add_term(e2, a.clone());
        }
    }
    out
}

fn to_upoly(p: &LaurentPolynomial) -> UPoly {
    let m = p.max_exponents().first().copied().unwrap_or(0).max(0) as usize;
    let mut c = vec![Q::zero(); m + 1];
    for (e, a) in p.terms() {
        c[e[0] as usize] = a.clone();
    }
    UPoly::new(c)
}

fn from_upoly(u: &UPoly) -> LaurentPolynomial {
    LaurentPolynomial::from_terms(1, u.coeffs().iter().enumerate().map(|(i, c)| (vec![i as i64], c.clone())))
}

/// Gcd of polynomials with non-negative exponents (normalized primitive, positive lex-leading coefficient).
fn poly_gcd(a: &LaurentPolynomial, b: &LaurentPolynomial) -> LaurentPolynomial {
    let n = a.nvars();
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if n == 0 {
        return LaurentPolynomial::one(0);
    }
    if n == 1 {
        return from_upoly(&to_upoly(a).gcd(&to_upoly(b))).primitive();
    }
    let ca = split_last(a);
    let cb = split_last(b);
    let cont = |cs: &[LaurentPolynomial]| cs.iter().fold(LaurentPolynomial::zero(n - 1), |g, c| poly_gcd(&g, c));
    let (conta, contb) = (cont(&ca), cont(&cb));
    let g_cont = poly_gcd(&conta, &contb);
    let prim = |cs: &[LaurentPolynomial], c: &LaurentPolynomial| -> Vec<LaurentPolynomial> {
        cs.iter().map(|x| div_exact(x, c).expect("content divides")).collect()
    };
    let mut u = prim(&ca, &conta);
    let mut v = prim(&cb, &contb);
    if u.len() < v.len() {
        std::mem::swap(&mut u, &mut v);
    }
    // primitive PRS
    loop {
        while v.last().is_some_and(|x| x.is_zero()) {
            v.pop();
        }
        if v.is_empty() {
            break;
        }
        if v.len() == 1 {
            u = vec![LaurentPolynomial::one(n - 1)];
            break;
        }
        let r = pseudo_rem(&u, &v);
        let r: Vec<LaurentPolynomial> = {
            let mut r = r;
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
            r
        };
        u = v;
        if r.is_empty() {
            v = vec![];
        } else {
            let c = cont(&r);
            v = prim(&r, &c);
        }
    }
    let pp = join_last(&u, n);
    let gc = g_cont.insert_var(n - 1);
    (&pp * &gc).primitive()
}

fn pseudo_rem(u: &[LaurentPolynomial], v: &[LaurentPolynomial]) -> Vec<LaurentPolynomial> {
    let mut r = u.to_vec();
    let dv = v.len() - 1;
    let lv = &v[dv];
    while r.len() > dv && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        if lr.is_zero() {
            r.pop();
            continue;
        }
        for x in r.iter_mut() {
            *x = &*x * lv;
        }
        for j in 0..=dv {
            let t = &lr * &v[j];
            r[dr - dv + j] = &r[dr - dv + j] - &t;
        }
        r.pop();
    }
    r
}

/// Gcd in the Laurent ring (defined up to units: monomials and scalars), normalized to have
/// minimum exponent 0 in each variable.
pub fn gcd(a: &LaurentPolynomial, b: &LaurentPolynomial) -> LaurentPolynomial {
    let (a0, _) = a.normalize_shift();
    let (b0, _) = b.normalize_shift();
    let g = poly_gcd(&a0, &b0);
    if g.is_zero() {
        return g;
    }
    g.normalize_shift().0
}

/// True iff `a` and `b` have no common non-unit factor.
pub fn coprime(a: &LaurentPolynomial, b: &LaurentPolynomial) -> bool {
    let g = gcd(a, b);
    g.is_monomial()
}

/// A normalized representative: shifted to minimum exponent 0 per variable, primitive.
pub fn normalize(p: &LaurentPolynomial) -> LaurentPolynomial {
    if p.is_zero() {
        return p.clone();
    }
    p.normalize_shift().0.primitive()
}

/// True iff `p` is a nonzero scalar multiple of a monomial.
pub fn is_unit(p: &LaurentPolynomial) -> bool {
    p.is_monomial()
}

pub fn one_like(p: &LaurentPolynomial) -> LaurentPolynomial {
    LaurentPolynomial::constant(p.nvars(), Q::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse_with_vars;

    fn p(s: &str) -> LaurentPolynomial {
        let v: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        parse_with_vars(s, &v).unwrap().poly
    }

    #[test]
    fn exact_division() {
        let a = p("(x + y + 1)^2 * (x*y + 1/x)");
        let b = p("x + y + 1");
        let q = div_exact(&a, &b).unwrap();
        assert_eq!(&q * &b, a);
        assert!(div_exact(&p("x + 2"), &p("x + 1")).is_none());
        assert_eq!(divide_out(&a, &b).0, 2);
    }

    #[test]
    fn gcds() {
        let f = p("x*y + z + 1");
        let a = &f * &p("x + y^2");
        let b = &f * &p("x - z");
        assert_eq!(normalize(&gcd(&a, &b)), normalize(&f));
        assert!(coprime(&p("x + y"), &p("x + 1")));
        assert!(coprime(&p("x*y"), &p("x + 1")));
        let g = gcd(&p("x^2 - 1"), &p("x^2 + 2*x + 1"));
        assert_eq!(normalize(&g), p("x + 1"));
    }
}
