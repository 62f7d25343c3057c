//! Buchberger's algorithm over Q for small systems.

use crate::arith::Q;
use crate::laurent::LaurentPolynomial;
use crate::upoly::UPoly;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::GrevLex => {
                let da: u32 = a.iter().sum();
                let db: u32 = b.iter().sum();
                da.cmp(&db).then_with(|| {
                    for (x, y) in a.iter().zip(b).rev() {
                        if x != y {
                            return y.cmp(x);
                        }
                    }
                    Ordering::Equal
                })
            }
        }
    }
}

/// Polynomial with non-negative exponents, terms sorted by decreasing monomial order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    pub terms: Vec<(Vec<u32>, Q)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("Groebner basis computation exceeded its step budget")]
pub struct BudgetExceeded;

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

impl MPoly {
    pub fn from_map(m: BTreeMap<Vec<u32>, Q>, ord: MonomialOrder) -> Self {
        let mut terms: Vec<(Vec<u32>, Q)> = m.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        MPoly { terms }
    }

    /// From a Laurent polynomial with non-negative exponents.
    pub fn from_laurent(p: &LaurentPolynomial, ord: MonomialOrder) -> Self {
        let m = p
            .terms()
            .iter()
            .map(|(e, c)| (e.iter().map(|&k| u32::try_from(k).expect("non-negative exponents")).collect(), c.clone()))
            .collect();
        Self::from_map(m, ord)
    }

    pub fn to_laurent(&self, n: usize) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(n, self.terms.iter().map(|(e, c)| (e.iter().map(|&k| k as i64).collect(), c.clone())))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> &[u32] {
        &self.terms[0].0
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.iter().all(|&k| k == 0)
    }

    fn monic(mut self) -> Self {
        if let Some(c) = self.terms.first().map(|t| t.1.clone()) {
            for t in &mut self.terms {
                t.1 /= &c;
            }
        }
        self
    }

    /// `self - c * x^e * g`
    fn sub_mul(&self, c: &Q, e: &[u32], g: &MPoly, ord: MonomialOrder) -> MPoly {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let shifted = g.terms.iter().map(|(m, a)| (m.iter().zip(e).map(|(x, y)| x + y).collect::<Vec<u32>>(), a * c));
        let mut i = self.terms.iter().peekable();
        let mut j = shifted.peekable();
        loop {
            match (i.peek(), j.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(i.next().unwrap().clone()),
                (None, Some(_)) => {
                    let (m, a) = j.next().unwrap();
                    out.push((m, -a));
                }
                (Some(x), Some(y)) => match ord.cmp(&x.0, &y.0) {
                    Ordering::Greater => out.push(i.next().unwrap().clone()),
                    Ordering::Less => {
                        let (m, a) = j.next().unwrap();
                        out.push((m, -a));
                    }
                    Ordering::Equal => {
                        let x = i.next().unwrap();
                        let (_, a) = j.next().unwrap();
                        let s = &x.1 - a;
                        if !s.is_zero() {
                            out.push((x.0.clone(), s));
                        }
                    }
                },
            }
        }
        MPoly { terms: out }
    }
}

/// Fully reduces `f` modulo `g`, counting steps against `budget`.
fn reduce(f: &MPoly, g: &[MPoly], ord: MonomialOrder, budget: &mut usize) -> Result<MPoly, BudgetExceeded> {
    let mut p = f.clone();
    let mut r: Vec<(Vec<u32>, Q)> = Vec::new();
    'outer: while !p.is_zero() {
        let (lm, lc) = p.terms[0].clone();
        for h in g {
            if divides(h.lm(), &lm) {
                if *budget == 0 {
                    return Err(BudgetExceeded);
                }
                *budget -= 1;
                let e: Vec<u32> = lm.iter().zip(h.lm()).map(|(x, y)| x - y).collect();
                let c = &lc / &h.terms[0].1;
                p = p.sub_mul(&c, &e, h, ord);
                continue 'outer;
            }
        }
        r.push(p.terms.remove(0));
    }
    Ok(MPoly { terms: r })
}

/// Reduced Groebner basis of the ideal generated by `gens`.
pub fn groebner(gens: &[MPoly], ord: MonomialOrder, budget: usize) -> Result<Vec<MPoly>, BudgetExceeded> {
    let mut budget = budget;
    let mut basis: Vec<MPoly> = Vec::new();
    for g in gens {
        if !g.is_zero() {
            basis.push(g.clone().monic());
        }
    }
    if basis.iter().any(|g| g.is_constant()) {
        return Ok(vec![MPoly { terms: vec![(vec![0; gens[0].lm().len()], Q::one())] }]);
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    while !pairs.is_empty() {
        // normal strategy: smallest lcm first
        let (k, _) = pairs
            .iter()
            .enumerate()
            .min_by(|a, b| ord.cmp(&lcm(basis[a.1 .0].lm(), basis[a.1 .1].lm()), &lcm(basis[b.1 .0].lm(), basis[b.1 .1].lm())))
            .unwrap();
        let (i, j) = pairs.swap_remove(k);
        let l = lcm(basis[i].lm(), basis[j].lm());
        if l.iter().zip(basis[i].lm()).zip(basis[j].lm()).all(|((a, b), c)| *a == b + c) {
            continue;
        }
        let chain = (0..basis.len()).any(|t| {
            t != i
                && t != j
                && divides(basis[t].lm(), &l)
                && !pairs.contains(&(i.min(t), i.max(t)))
                && !pairs.contains(&(j.min(t), j.max(t)))
        });
        if chain {
            continue;
        }
        let ei: Vec<u32> = l.iter().zip(basis[i].lm()).map(|(a, b)| a - b).collect();
        let ej: Vec<u32> = l.iter().zip(basis[j].lm()).map(|(a, b)| a - b).collect();
        let si = MPoly { terms: basis[i].terms.iter().map(|(m, c)| (m.iter().zip(&ei).map(|(x, y)| x + y).collect(), c.clone())).collect() };
        let s = si.sub_mul(&Q::one(), &ej, &basis[j], ord);
        let h = reduce(&s, &basis, ord, &mut budget)?;
        if h.is_zero() {
            continue;
        }
        let h = h.monic();
        if h.is_constant() {
            return Ok(vec![h]);
        }
        let idx = basis.len();
        basis.push(h);
        for t in 0..idx {
            pairs.push((t, idx));
        }
    }
    // minimalize and inter-reduce
    let mut keep: Vec<MPoly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            j != i && divides(h.lm(), g.lm()) && (h.lm() != g.lm() || j < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<MPoly> = keep.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        let head = MPoly { terms: vec![keep[i].terms[0].clone()] };
        let tail = MPoly { terms: keep[i].terms[1..].to_vec() };
        let t = reduce(&tail, &others, ord, &mut budget)?;
        let mut terms = head.terms;
        terms.extend(t.terms);
        out.push(MPoly { terms });
    }
    out.sort_by(|a, b| ord.cmp(a.lm(), b.lm()));
    Ok(out)
}

/// True iff the basis is `{1}`.
pub fn is_unit_ideal(gb: &[MPoly]) -> bool {
    gb.iter().any(|g| g.is_constant())
}

/// Krull dimension of the ideal with leading monomials `gb`, or -1 for the unit ideal.
pub fn dimension(gb: &[MPoly], nvars: usize) -> i64 {
    if is_unit_ideal(gb) {
        return -1;
    }
    let mut best = 0;
    for mask in 0u32..(1 << nvars) {
        let size = mask.count_ones() as i64;
        if size <= best {
            continue;
        }
        // variables in `mask` are independent if no leading monomial uses only them
        let indep = gb.iter().all(|g| g.lm().iter().enumerate().any(|(i, &k)| k > 0 && mask & (1 << i) == 0));
        if indep {
            best = size;
        }
    }
    best
}

/// Laurent generators restricted to the torus: shifted to polynomials, plus `1 - z x_1 ... x_m`.
pub fn torus_system(gens: &[LaurentPolynomial], ord: MonomialOrder) -> Vec<MPoly> {
    let m = gens[0].nvars();
    let mut out: Vec<MPoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| MPoly::from_laurent(&g.normalize_shift().0.insert_var(m), ord))
        .collect();
    let mut rab = BTreeMap::new();
    rab.insert(vec![0; m + 1], Q::one());
    rab.insert(vec![1; m + 1], -Q::one());
    out.push(MPoly::from_map(rab, ord));
    out
}

/// Torus zero set of the generators: Groebner basis in `m + 1` variables.
pub fn torus_groebner(gens: &[LaurentPolynomial], budget: usize) -> Result<Vec<MPoly>, BudgetExceeded> {
    groebner(&torus_system(gens, MonomialOrder::GrevLex), MonomialOrder::GrevLex, budget)
}

/// Generator of the elimination ideal `I ∩ Q[x_i]` for the torus zero set, if it is nonzero.
pub fn elimination_polynomial(gens: &[LaurentPolynomial], i: usize, budget: usize) -> Result<Option<UPoly>, BudgetExceeded> {
    let m = gens[0].nvars();
    // permute so that x_i is the last variable; z stays first
    let mut perm: Vec<usize> = vec![m];
    perm.extend((0..m).filter(|&k| k != i));
    perm.push(i);
    let sys = torus_system(gens, MonomialOrder::Lex);
    let permuted: Vec<MPoly> = sys
        .iter()
        .map(|g| {
            let map = g.terms.iter().map(|(e, c)| (perm.iter().map(|&k| e[k]).collect::<Vec<u32>>(), c.clone())).collect();
            MPoly::from_map(map, MonomialOrder::Lex)
        })
        .collect();
    let gb = groebner(&permuted, MonomialOrder::Lex, budget)?;
    for g in gb.iter().rev() {
        if g.terms.iter().all(|(e, _)| e[..m].iter().all(|&k| k == 0)) {
            let deg = g.terms.iter().map(|(e, _)| e[m]).max().unwrap_or(0) as usize;
            let mut c = vec![Q::zero(); deg + 1];
            for (e, a) in &g.terms {
                c[e[m] as usize] = a.clone();
            }
            return Ok(Some(UPoly::new(c)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse_with_vars;

    fn p(s: &str) -> LaurentPolynomial {
        parse_with_vars(s, &["x".to_string(), "y".to_string()]).unwrap().poly
    }

    #[test]
    fn unit_and_dimension() {
        let gb = torus_groebner(&[p("x + y + 1"), p("x - y")], 10_000).unwrap();
        assert_eq!(dimension(&gb, 3), 0);
        let gb = torus_groebner(&[p("x + 1"), p("x - 1")], 10_000).unwrap();
        assert!(is_unit_ideal(&gb));
        // only solution off the torus
        let gb = torus_groebner(&[p("x*y"), p("x + y - 1")], 10_000).unwrap();
        assert!(is_unit_ideal(&gb));
        let gb = torus_groebner(&[p("x*y + 1")], 10_000).unwrap();
        assert_eq!(dimension(&gb, 3), 1);
    }

    #[test]
    fn elimination() {
        let e = elimination_polynomial(&[p("x^2 - 2"), p("y - x")], 1, 10_000).unwrap().unwrap();
        assert_eq!(e.monic(), UPoly::from_i64(&[-2, 0, 1]));
    }

    #[test]
    fn node_is_detected() {
        let f = p("(y-1)^2 - (x-1)^2*x");
        let gb = torus_groebner(&[f.clone(), f.derivative(0), f.derivative(1)], 10_000).unwrap();
        assert_eq!(dimension(&gb, 3), 0);
    }
}
