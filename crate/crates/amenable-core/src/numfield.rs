//! Arithmetic in simple algebraic extensions `Q[x]/(m)`.

use crate::arith::Q;
use crate::upoly::UPoly;
use num_traits::Zero;

/// `Q(c)` for a root `c` of the irreducible polynomial `m`. Elements are reduced
/// polynomials in `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberField {
    m: UPoly,
}

pub type Elem = UPoly;

impl NumberField {
    pub fn new(m: &UPoly) -> Self {
        assert!(m.degree() >= 1, "modulus must be non-constant");
        NumberField { m: m.monic() }
    }

    /// `Q` itself, presented as `Q[x]/(x - a)` with generator `a`.
    pub fn rational(a: &Q) -> Self {
        NumberField::new(&UPoly::new(vec![-a.clone(), Q::from_integer(1.into())]))
    }

    pub fn modulus(&self) -> &UPoly {
        &self.m
    }

    pub fn degree(&self) -> usize {
        self.m.degree() as usize
    }

    pub fn reduce(&self, p: &UPoly) -> Elem {
        p.rem(&self.m)
    }

    pub fn from_q(&self, a: &Q) -> Elem {
        UPoly::constant(a.clone())
    }

    pub fn gen(&self) -> Elem {
        self.reduce(&UPoly::t())
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        a + b
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        a - b
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.reduce(&(a * b))
    }

    pub fn inv(&self, a: &Elem) -> Option<Elem> {
        if a.is_zero() {
            return None;
        }
        let (g, s, _) = a.xgcd(&self.m);
        (g.degree() == 0).then(|| self.reduce(&s))
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Option<Elem> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    /// `p(c)` for a rational polynomial `p`.
    pub fn eval(&self, p: &UPoly) -> Elem {
        self.reduce(p)
    }

    /// Horner evaluation of a polynomial with coefficients in the field at `x`.
    pub fn eval_poly(&self, coeffs: &[Elem], x: &Elem) -> Elem {
        let mut acc = UPoly::zero();
        for a in coeffs.iter().rev() {
            acc = self.add(&self.mul(&acc, x), a);
        }
        acc
    }

    /// Minimal polynomial over Q of `a` (monic).
    pub fn min_poly(&self, a: &Elem) -> UPoly {
        let n = self.degree();
        let mut powers: Vec<Elem> = vec![UPoly::one()];
        for k in 1..=n {
            let next = self.mul(&powers[k - 1], a);
            powers.push(next);
            // columns: coordinates of a^0..a^k; look for a dependency
            let rows: Vec<Vec<Q>> = (0..n).map(|i| powers.iter().map(|p| p.coeff(i)).collect()).collect();
            let ints: Vec<Vec<num_bigint::BigInt>> = rows.iter().map(|r| crate::linalg::clear_denominators(r)).collect();
            let ns = crate::linalg::integer_nullspace(&ints, k + 1);
            if let Some(v) = ns.first() {
                return UPoly::from_ints(v).monic();
            }
        }
        unreachable!("degree bound")
    }

    pub fn as_rational(&self, a: &Elem) -> Option<Q> {
        match a.degree() {
            -1 => Some(Q::zero()),
            0 => Some(a.coeff(0)),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    #[test]
    fn quadratic_field() {
        // Q(sqrt 2)
        let k = NumberField::new(&UPoly::from_i64(&[-2, 0, 1]));
        let s = k.gen();
        assert_eq!(k.as_rational(&k.mul(&s, &s)), Some(q(2)));
        let a = k.add(&s, &k.from_q(&q(1)));
        let b = k.inv(&a).unwrap();
        assert_eq!(k.as_rational(&k.mul(&a, &b)), Some(q(1)));
        assert_eq!(k.eval(&UPoly::from_i64(&[0, 0, 0, 0, 1])), UPoly::from_i64(&[4]));
        let r = NumberField::rational(&q(3));
        assert_eq!(r.as_rational(&r.gen()), Some(q(3)));
        // c^3 for c a root of t^6 + 11/27 t^3 - 1/729
        let k6 = NumberField::new(&UPoly::parse("t^6 + 11/27 t^3 - 1/729", "t").unwrap());
        let c3 = k6.mul(&k6.mul(&k6.gen(), &k6.gen()), &k6.gen());
        assert_eq!(k6.min_poly(&c3), UPoly::parse("t^2 + 11/27 t - 1/729", "t").unwrap());
        assert_eq!(k.min_poly(&k.from_q(&q(5))), UPoly::from_i64(&[-5, 1]));
    }
}
