//! Sparse Laurent polynomials with rational coefficients.

mod analysis;
mod faces;
mod factorize;
mod mutation;
mod parse;

pub use analysis::*;
pub use faces::*;
pub use factorize::*;
pub use mutation::*;
pub use parse::*;

use crate::arith::{fmt_q, parse_q, Q};
use crate::lattice::LatticePolytope;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A Laurent polynomial in `n` variables: exponent vector to nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPolynomial {
    n: usize,
    terms: BTreeMap<Vec<i64>, Q>,
}

impl LaurentPolynomial {
    pub fn zero(n: usize) -> Self {
        LaurentPolynomial { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Q) -> Self {
        Self::monomial(vec![0; n], c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Q::one())
    }

    pub fn monomial(exp: Vec<i64>, c: Q) -> Self {
        let n = exp.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPolynomial { n, terms }
    }

    /// The variable `x_i`.
    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self::monomial(e, Q::one())
    }

    pub fn from_terms(n: usize, it: impl IntoIterator<Item = (Vec<i64>, Q)>) -> Self {
        let mut p = Self::zero(n);
        for (e, c) in it {
            assert_eq!(e.len(), n, "exponent length");
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Vec<i64>, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn coeff(&self, e: &[i64]) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&vec![0; self.n])
    }

    pub fn support(&self) -> Vec<Vec<i64>> {
        self.terms.keys().cloned().collect()
    }

    pub fn newton_polytope(&self) -> LatticePolytope {
        LatticePolytope::hull(&self.support()).expect("nonzero polynomial")
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        LaurentPolynomial { n: self.n, terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect() }
    }

    /// Multiplies by the monomial `x^e`.
    pub fn shift(&self, e: &[i64]) -> Self {
        LaurentPolynomial {
            n: self.n,
            terms: self.terms.iter().map(|(k, a)| (k.iter().zip(e).map(|(x, y)| x + y).collect(), a.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::one(self.n);
        let mut b = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                r = &r * &b;
            }
            k >>= 1;
            if k > 0 {
                b = &b * &b;
            }
        }
        r
    }

    /// Componentwise minimum of exponents.
    pub fn min_exponents(&self) -> Vec<i64> {
        (0..self.n).map(|i| self.terms.keys().map(|e| e[i]).min().unwrap_or(0)).collect()
    }

    pub fn max_exponents(&self) -> Vec<i64> {
        (0..self.n).map(|i| self.terms.keys().map(|e| e[i]).max().unwrap_or(0)).collect()
    }

    /// Shifts so that every exponent is non-negative and each variable's minimum is 0.
    pub fn normalize_shift(&self) -> (Self, Vec<i64>) {
        let m = self.min_exponents();
        let neg: Vec<i64> = m.iter().map(|x| -x).collect();
        (self.shift(&neg), m)
    }

    /// Applies the exponent map `e -> M e` (M is `m x n`).
    pub fn transform(&self, m: &[Vec<i64>]) -> Self {
        let k = m.len();
        Self::from_terms(
            k,
            self.terms.iter().map(|(e, a)| (m.iter().map(|r| crate::arith::dot(r, e)).collect(), a.clone())),
        )
    }

    /// Terms whose exponents satisfy `pred`.
    pub fn filter(&self, pred: impl Fn(&[i64]) -> bool) -> Self {
        LaurentPolynomial { n: self.n, terms: self.terms.iter().filter(|(e, _)| pred(e)).map(|(e, a)| (e.clone(), a.clone())).collect() }
    }

    /// Writes `self = sum_k C_k x_i^k`.
    pub fn collect_in(&self, i: usize) -> BTreeMap<i64, LaurentPolynomial> {
        let mut out: BTreeMap<i64, LaurentPolynomial> = BTreeMap::new();
        for (e, a) in &self.terms {
            let mut e2 = e.clone();
            e2[i] = 0;
            out.entry(e[i]).or_insert_with(|| Self::zero(self.n)).add_term(e2, a.clone());
        }
        out
    }

    /// Drops variable `i` (all exponents of it must be zero).
    pub fn drop_var(&self, i: usize) -> Self {
        Self::from_terms(
            self.n - 1,
            self.terms.iter().map(|(e, a)| {
                debug_assert_eq!(e[i], 0);
                let mut e2 = e.clone();
                e2.remove(i);
                (e2, a.clone())
            }),
        )
    }

    /// Inserts a new variable at position `i` with exponent 0.
    pub fn insert_var(&self, i: usize) -> Self {
        Self::from_terms(
            self.n + 1,
            self.terms.iter().map(|(e, a)| {
                let mut e2 = e.clone();
                e2.insert(i, 0);
                (e2, a.clone())
            }),
        )
    }

    /// Leading term for a monomial order given as a comparison function.
    pub fn leading(&self, cmp: impl Fn(&[i64], &[i64]) -> std::cmp::Ordering) -> Option<(&Vec<i64>, &Q)> {
        self.terms.iter().max_by(|a, b| cmp(a.0, b.0))
    }

    /// Makes the coefficients coprime integers with a positive leading (lex-max) coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let den = crate::arith::common_denominator(self.terms.values());
        let ints: Vec<num_bigint::BigInt> = self.terms.values().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect();
        let mut g = ints.iter().fold(num_bigint::BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x));
        if self.terms.values().next_back().unwrap().is_negative() {
            g = -g;
        }
        self.scale(&Q::new(den, g))
    }

    /// Evaluates at rational values of all variables.
    pub fn eval(&self, x: &[Q]) -> Q {
        self.terms
            .iter()
            .map(|(e, a)| {
                let mut v = a.clone();
                for (xi, &k) in x.iter().zip(e) {
                    if k >= 0 {
                        v *= num_traits::pow(xi.clone(), k as usize);
                    } else {
                        v /= num_traits::pow(xi.clone(), (-k) as usize);
                    }
                }
                v
            })
            .sum()
    }

    /// Substitutes a rational value for variable `i` (keeping the variable slot with exponent 0).
    pub fn substitute(&self, i: usize, v: &Q) -> Self {
        let mut out = Self::zero(self.n);
        for (e, a) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[i];
            e2[i] = 0;
            let f = if k >= 0 { num_traits::pow(v.clone(), k as usize) } else { num_traits::pow(v.recip(), (-k) as usize) };
            out.add_term(e2, a * f);
        }
        out
    }

    /// Partial derivative with respect to `x_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (e, a) in &self.terms {
            if e[i] != 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(e2, a * Q::from_integer(e[i].into()));
            }
        }
        out
    }

    /// Exact division by a single term.
    pub fn div_monomial(&self, e: &[i64], c: &Q) -> Self {
        let neg: Vec<i64> = e.iter().map(|x| -x).collect();
        self.shift(&neg).scale(&c.recip())
    }

    /// Formats with the given variable names.
    pub fn format_with(&self, vars: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (e, a) in self.terms.iter().rev() {
            let neg = a.is_negative();
            let mag = a.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || e.iter().all(|&k| k == 0) {
                parts.push(fmt_q(&mag));
            }
            for (v, &k) in vars.iter().zip(e) {
                match k {
                    0 => {}
                    1 => parts.push(v.clone()),
                    _ => parts.push(format!("{v}^{k}")),
                }
            }
            s.push_str(&parts.join("*"));
        }
        s
    }

    pub fn default_vars(&self) -> Vec<String> {
        default_var_names(self.n)
    }

    pub fn to_json(&self) -> PolynomialJson {
        PolynomialJson {
            n: self.n,
            terms: self.terms.iter().map(|(e, a)| TermJson { exp: e.clone(), coef: fmt_q(a) }).collect(),
        }
    }
}

/// `x`, `y`, `z`, `w` for up to four variables, else `x0, x1, ...`.
pub fn default_var_names(n: usize) -> Vec<String> {
    if n <= 4 {
        ["x", "y", "z", "w"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (0..n).map(|i| format!("x{i}")).collect()
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(&self.default_vars()))
    }
}

/// `{"n": dim, "terms": [{"exp": [..], "coef": "p/q"}]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PolynomialJson {
    pub n: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermJson {
    pub exp: Vec<i64>,
    pub coef: String,
}

impl PolynomialJson {
    pub fn to_polynomial(&self) -> Result<LaurentPolynomial, ParseError> {
        let mut p = LaurentPolynomial::zero(self.n);
        for t in &self.terms {
            if t.exp.len() != self.n {
                return Err(ParseError { pos: 0, msg: "exponent length mismatch".into() });
            }
            let c = parse_q(&t.coef).ok_or_else(|| ParseError { pos: 0, msg: format!("bad coefficient {}", t.coef) })?;
            p.add_term(t.exp.clone(), c);
        }
        Ok(p)
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, o: &LaurentPolynomial) -> LaurentPolynomial {
        assert_eq!(self.n, o.n);
        let mut r = self.clone();
        for (e, a) in &o.terms {
            r.add_term(e.clone(), a.clone());
        }
        r
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, o: &LaurentPolynomial) -> LaurentPolynomial {
        assert_eq!(self.n, o.n);
        let mut r = self.clone();
        for (e, a) in &o.terms {
            r.add_term(e.clone(), -a.clone());
        }
        r
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, o: &LaurentPolynomial) -> LaurentPolynomial {
        assert_eq!(self.n, o.n);
        let mut acc: std::collections::HashMap<Vec<i64>, Q> = std::collections::HashMap::new();
        for (e1, a1) in &self.terms {
            for (e2, a2) in &o.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                *acc.entry(e).or_insert_with(Q::zero) += a1 * a2;
            }
        }
        LaurentPolynomial { n: self.n, terms: acc.into_iter().filter(|(_, a)| !a.is_zero()).collect() }
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        self.scale(&-Q::one())
    }
}
