//! Dense univariate polynomials over Q.

use crate::arith::{fmt_q, q, Fixed, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Coefficients `c[i]` of `t^i`; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    c: Vec<Q>,
}

impl UPoly {
    /// Parses a polynomial in the single variable `var`; negative powers are rejected.
    pub fn parse(text: &str, var: &str) -> Option<Self> {
        let lp = crate::laurent::parse_with_vars(text, &[var.to_string()]).ok()?.poly;
        let mut c = Vec::new();
        for (e, a) in lp.terms() {
            let k = usize::try_from(e[0]).ok()?;
            if c.len() <= k {
                c.resize(k + 1, Q::zero());
            }
            c[k] = a.clone();
        }
        Some(UPoly::new(c))
    }

    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| q(x)).collect())
    }

    pub fn from_ints(c: &[BigInt]) -> Self {
        Self::new(c.iter().map(|x| Q::from_integer(x.clone())).collect())
    }

    pub fn zero() -> Self {
        UPoly { c: vec![] }
    }

    pub fn one() -> Self {
        UPoly { c: vec![Q::one()] }
    }

    pub fn constant(a: Q) -> Self {
        Self::new(vec![a])
    }

    /// `a t^k`.
    pub fn monomial(a: Q, k: usize) -> Self {
        let mut c = vec![Q::zero(); k + 1];
        c[k] = a;
        Self::new(c)
    }

    pub fn t() -> Self {
        Self::monomial(Q::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial has degree -1.
    pub fn degree(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.c.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn lc(&self) -> Q {
        self.c.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, a: &Q) -> Self {
        Self::new(self.c.iter().map(|x| x * a).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().recip())
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.c.iter().rev().fold(0.0, |acc, a| acc * x + a.to_f64().unwrap_or(f64::NAN))
    }

    pub fn eval_fixed(&self, x: &Fixed) -> Fixed {
        let mut acc = Fixed::zero(x.digits);
        for a in self.c.iter().rev() {
            acc = acc.mul(x).add(&Fixed::from_q(a, x.digits));
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.c.iter().enumerate().skip(1).map(|(i, a)| a * q(i as i64)).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = UPoly::one();
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.c.len() - 1;
        let inv = d.lc().recip();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut qt = vec![Q::zero(); r.len() - dd];
        for i in (0..qt.len()).rev() {
            let f = &r[i + dd] * &inv;
            if !f.is_zero() {
                for j in 0..=dd {
                    r[i + j] -= &f * &d.c[j];
                }
            }
            qt[i] = f;
        }
        r.truncate(dd);
        (UPoly::new(qt), UPoly::new(r))
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.divrem(d).1
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &UPoly) -> Option<UPoly> {
        let (qt, r) = self.divrem(d);
        r.is_zero().then_some(qt)
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Extended gcd: `(g, s, t)` with `s a + t b = g`, `g` monic.
    pub fn xgcd(&self, o: &UPoly) -> (UPoly, UPoly, UPoly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (UPoly::one(), UPoly::zero());
        let (mut t0, mut t1) = (UPoly::zero(), UPoly::one());
        while !r1.is_zero() {
            let (qt, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&qt * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&qt * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// `self(g(t))`.
    pub fn compose(&self, g: &UPoly) -> UPoly {
        let mut acc = UPoly::zero();
        for a in self.c.iter().rev() {
            acc = &(&acc * g) + &UPoly::constant(a.clone());
        }
        acc
    }

    /// `self(t + a)`.
    pub fn shift(&self, a: &Q) -> UPoly {
        self.compose(&UPoly::new(vec![a.clone(), Q::one()]))
    }

    /// `t^deg self(1/t)`.
    pub fn reverse(&self) -> UPoly {
        let mut c = self.c.clone();
        c.reverse();
        UPoly::new(c)
    }

    /// `self(t^k)`.
    pub fn inflate(&self, k: usize) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![Q::zero(); (self.c.len() - 1) * k + 1];
        for (i, a) in self.c.iter().enumerate() {
            c[i * k] = a.clone();
        }
        UPoly::new(c)
    }

    /// Multiplicity of `t` as a factor.
    pub fn t_valuation(&self) -> usize {
        self.c.iter().position(|x| !x.is_zero()).unwrap_or(0)
    }

    /// Divides out the largest power of `t`.
    pub fn strip_t(&self) -> UPoly {
        UPoly::new(self.c[self.t_valuation()..].to_vec())
    }

    /// Content (signed like the leading coefficient) and primitive integer part with positive leading coefficient.
    pub fn primitive_part(&self) -> (Q, Vec<BigInt>) {
        if self.is_zero() {
            return (Q::zero(), vec![]);
        }
        let den = crate::arith::common_denominator(self.c.iter());
        let ints: Vec<BigInt> = self.c.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect();
        let mut g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        let prim: Vec<BigInt> = ints.iter().map(|x| x / &g).collect();
        (Q::new(g, den), prim)
    }

    /// Square-free decomposition `self = lc * prod f_i^i` (Yun); returns monic `(f_i, i)` with `f_i != 1`.
    pub fn squarefree(&self) -> Vec<(UPoly, usize)> {
        let mut out = Vec::new();
        if self.degree() < 1 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let mut a = f.gcd(&fp);
        let mut b = f.divrem(&a).0;
        let mut c = fp.divrem(&a).0;
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while b.degree() > 0 {
            a = b.gcd(&d);
            if a.degree() > 0 {
                out.push((a.clone(), i));
            }
            b = b.divrem(&a).0;
            c = d.divrem(&a).0;
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    /// Sturm sequence of a square-free polynomial.
    pub fn sturm_sequence(&self) -> Vec<UPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(-r);
        }
        seq
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count_real_roots(&self, a: &Q, b: &Q) -> usize {
        let sf = self.squarefree_part();
        let s = sf.sturm_sequence();
        sign_changes(&s, a) - sign_changes(&s, b)
    }

    pub fn squarefree_part(&self) -> UPoly {
        if self.degree() < 1 {
            return self.clone();
        }
        self.divrem(&self.gcd(&self.derivative())).0.monic()
    }

    /// Cauchy bound on the modulus of the roots.
    pub fn root_bound(&self) -> Q {
        let lc = self.lc().abs();
        let m = self.c[..self.c.len() - 1].iter().map(|x| x.abs() / &lc).fold(Q::zero(), |a, b| if b > a { b } else { a });
        m + Q::one()
    }

    /// Isolating intervals `[lo, hi]` for the distinct real roots, sorted, each of width at most `width`.
    pub fn real_root_intervals(&self, width: &Q) -> Vec<(Q, Q)> {
        if self.degree() < 1 {
            return vec![];
        }
        let sf = self.squarefree_part();
        let s = sf.sturm_sequence();
        let b = sf.root_bound();
        let mut stack = vec![(-b.clone(), b)];
        let mut out = Vec::new();
        while let Some((lo, hi)) = stack.pop() {
            let n = sign_changes(&s, &lo) - sign_changes(&s, &hi);
            if n == 0 {
                continue;
            }
            if n == 1 {
                out.push((lo, hi));
                continue;
            }
            let mid = (&lo + &hi) / q(2);
            stack.push((mid.clone(), hi));
            stack.push((lo, mid));
        }
        // each interval holds one root in (lo, hi]; refine by bisection
        let mut res = Vec::new();
        for (mut lo, mut hi) in out {
            if sf.eval(&hi).is_zero() {
                res.push((hi.clone(), hi));
                continue;
            }
            while &hi - &lo > *width {
                let mid = (&lo + &hi) / q(2);
                let fm = sf.eval(&mid);
                if fm.is_zero() {
                    lo = mid.clone();
                    hi = mid;
                    break;
                }
                if sign_changes(&s, &lo) - sign_changes(&s, &mid) == 1 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            res.push((lo, hi));
        }
        res.sort();
        res
    }

    /// Rational roots (distinct, sorted).
    pub fn rational_roots(&self) -> Vec<Q> {
        if self.degree() < 1 {
            return vec![];
        }
        let mut out: Vec<Q> = crate::factor::factor_q(self)
            .1
            .into_iter()
            .filter(|(f, _)| f.degree() == 1)
            .map(|(f, _)| -f.coeff(0) / f.coeff(1))
            .collect();
        out.sort();
        out
    }

    /// Formats with variable name `v`, highest degree first.
    pub fn format(&self, v: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let coef = fmt_q(&mag);
            match i {
                0 => s.push_str(&coef),
                _ => {
                    if !mag.is_one() {
                        s.push_str(&coef);
                        s.push('*');
                    }
                    s.push_str(v);
                    if i > 1 {
                        s.push_str(&format!("^{i}"));
                    }
                }
            }
        }
        s
    }
}

fn sign_changes(seq: &[UPoly], x: &Q) -> usize {
    let mut last = 0i32;
    let mut n = 0;
    for p in seq {
        let v = p.eval(x);
        let s = if v.is_positive() { 1 } else if v.is_negative() { -1 } else { 0 };
        if s != 0 {
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
    }
    n
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format("t"))
    }
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        UPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        UPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![Q::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UPoly::new(c)
    }
}

impl Neg for UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly::new(self.c.into_iter().map(|x| -x).collect())
    }
}

/// A complex number with fixed-point parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexFixed {
    pub re: Fixed,
    pub im: Fixed,
}

impl ComplexFixed {
    fn mul(&self, o: &Self) -> Self {
        ComplexFixed { re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)), im: self.re.mul(&o.im).add(&self.im.mul(&o.re)) }
    }

    fn add(&self, o: &Self) -> Self {
        ComplexFixed { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    fn sub(&self, o: &Self) -> Self {
        ComplexFixed { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    fn div(&self, o: &Self) -> Self {
        let den = o.re.mul(&o.re).add(&o.im.mul(&o.im));
        let num = self.mul(&ComplexFixed { re: o.re.clone(), im: Fixed { v: -o.im.v.clone(), digits: o.im.digits } });
        ComplexFixed { re: num.re.div(&den), im: num.im.div(&den) }
    }

    /// Modulus squared.
    pub fn norm_sqr(&self) -> Fixed {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }
}

/// All complex roots of a square-free polynomial to `digits` decimals.
///
/// Durand-Kerner in double precision followed by Newton refinement in fixed point.
pub fn complex_roots(p: &UPoly, digits: u32) -> Vec<ComplexFixed> {
    use num_complex::Complex64;
    use num_traits::ToPrimitive;
    let n = p.degree();
    if n < 1 {
        return vec![];
    }
    let n = n as usize;
    let m = p.monic();
    let cf: Vec<f64> = m.c.iter().map(|x| x.to_f64().unwrap()).collect();
    let ev = |z: Complex64| cf.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
    let seed = Complex64::new(0.4, 0.9);
    let r = m.root_bound().to_f64().unwrap();
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * r.min(1e6).max(1.0) * 0.5).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = ev(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm() / (1.0 + z[i].norm()));
        }
        if delta < 1e-15 {
            break;
        }
    }
    let d = digits + 10;
    let to_fixed = |x: f64| Fixed::from_q(&Q::from_float(x).unwrap_or_else(Q::zero), d);
    let coeffs: Vec<ComplexFixed> =
        m.c.iter().map(|a| ComplexFixed { re: Fixed::from_q(a, d), im: Fixed::zero(d) }).collect();
    let dm = m.derivative();
    let dcf: Vec<ComplexFixed> = dm.c.iter().map(|a| ComplexFixed { re: Fixed::from_q(a, d), im: Fixed::zero(d) }).collect();
    let horner = |cs: &[ComplexFixed], x: &ComplexFixed| {
        let mut acc = ComplexFixed { re: Fixed::zero(d), im: Fixed::zero(d) };
        for a in cs.iter().rev() {
            acc = acc.mul(x).add(a);
        }
        acc
    };
    let tol = BigInt::from(10).pow(11);
    let mut out = Vec::new();
    for zi in z {
        let mut x = ComplexFixed { re: to_fixed(zi.re), im: to_fixed(zi.im) };
        for _ in 0..200 {
            let fx = horner(&coeffs, &x);
            let dfx = horner(&dcf, &x);
            if dfx.re.v.is_zero() && dfx.im.v.is_zero() {
                break;
            }
            let step = fx.div(&dfx);
            x = x.sub(&step);
            if step.re.v.abs() < tol && step.im.v.abs() < tol {
                break;
            }
        }
        let cut = |f: &Fixed| Fixed { v: div_round(&f.v, &BigInt::from(10).pow(10)), digits };
        out.push(ComplexFixed { re: cut(&x.re), im: cut(&x.im) });
    }
    out.sort_by(|a, b| a.re.v.cmp(&b.re.v).then(a.im.v.cmp(&b.im.v)));
    out
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (qt, r) = a.div_mod_floor(b);
    if r * 2 >= *b {
        qt + 1
    } else {
        qt
    }
}

/// Midpoint of an isolating interval as a fixed-point value.
pub fn interval_value(iv: &(Q, Q), digits: u32) -> Fixed {
    Fixed::from_q(&((&iv.0 + &iv.1) / q(2)), digits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qf;

    #[test]
    fn divrem_and_gcd() {
        let a = UPoly::from_i64(&[-1, 0, 1]);
        let b = UPoly::from_i64(&[1, 1]);
        let (qt, r) = a.divrem(&b);
        assert_eq!(qt, UPoly::from_i64(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&UPoly::from_i64(&[-1, 1])), UPoly::from_i64(&[-1, 1]));
        let (g, s, t) = a.xgcd(&UPoly::from_i64(&[2, 1]));
        assert_eq!(g, UPoly::one());
        assert_eq!(&(&s * &a) + &(&t * &UPoly::from_i64(&[2, 1])), UPoly::one());
    }

    #[test]
    fn squarefree_yun() {
        // (t+1)^3 (t-2)
        let f = &UPoly::from_i64(&[1, 1]).pow(3) * &UPoly::from_i64(&[-2, 1]);
        let sf = f.squarefree();
        assert_eq!(sf, vec![(UPoly::from_i64(&[-2, 1]), 1), (UPoly::from_i64(&[1, 1]), 3)]);
    }

    #[test]
    fn sturm_counts() {
        let f = UPoly::from_i64(&[-2, 0, 1]);
        assert_eq!(f.count_real_roots(&q(-10), &q(10)), 2);
        assert_eq!(f.count_real_roots(&q(0), &q(10)), 1);
        let iv = f.real_root_intervals(&qf(1, 1_000_000));
        assert_eq!(iv.len(), 2);
        assert!(interval_value(&iv[1], 5).to_decimal(4).starts_with("1.414"));
    }

    #[test]
    fn complex_roots_of_cyclotomic() {
        let f = UPoly::from_i64(&[1, 1, 1]);
        let r = complex_roots(&f, 30);
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].re.to_decimal(20), "-0.50000000000000000000");
        assert!(r[1].im.to_decimal(10).starts_with("0.8660254037"));
    }

    #[test]
    fn format_poly() {
        assert_eq!(UPoly::from_i64(&[-1, 0, 3]).to_string(), "3*t^2 - 1");
    }
}
