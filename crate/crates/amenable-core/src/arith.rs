//! Rational numbers, fixed-point reals and small number-theoretic helpers.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Exact rational number used throughout the crate.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: BigInt) -> Q {
    Q::from_integer(n)
}

/// Parses `"p"`, `"-p/q"` or a decimal literal such as `"2.5"`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        let ip: BigInt = if ip.is_empty() { BigInt::zero() } else { ip.parse().ok()? };
        let fd: BigInt = fp.parse().ok()?;
        let den = num_traits::pow(BigInt::from(10), fp.len());
        let v = Q::new(ip * &den + fd, den);
        return Some(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Q::from_integer(n))
}

pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn lcm_big(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    (a / a.gcd(b) * b).abs()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| lcm_big(&acc, x.denom()))
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Extended gcd: returns `(g, x, y)` with `a x + b y = g >= 0`.
pub fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let qt = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - qt * r1);
        (s0, s1) = (s1, s0 - qt * s1);
        (t0, t1) = (t1, t0 - qt * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Divides a vector by the gcd of its entries; the zero vector is returned unchanged.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = gcd_slice(v);
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Euler's totient.
pub fn totient(mut n: u64) -> u64 {
    let mut r = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if n > 1 {
        r -= r / n;
    }
    r
}

/// Fixed-point real number `v / 10^digits` used for limits and numeric roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixed {
    pub v: BigInt,
    pub digits: u32,
}

fn ten_pow(d: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), d as usize)
}

impl Fixed {
    pub fn zero(digits: u32) -> Self {
        Fixed { v: BigInt::zero(), digits }
    }

    /// Nearest fixed-point value to the rational `x`.
    pub fn from_q(x: &Q, digits: u32) -> Self {
        let num = x.numer() * ten_pow(digits);
        let den = x.denom();
        let (qt, r) = num.div_mod_floor(den);
        let v = if (r * 2) >= *den { qt + 1 } else { qt };
        Fixed { v, digits }
    }

    pub fn from_int(n: i64, digits: u32) -> Self {
        Fixed { v: BigInt::from(n) * ten_pow(digits), digits }
    }

    pub fn to_q(&self) -> Q {
        Q::new(self.v.clone(), ten_pow(self.digits))
    }

    pub fn to_f64(&self) -> f64 {
        self.to_q().to_f64().unwrap_or(f64::NAN)
    }

    pub fn add(&self, o: &Fixed) -> Fixed {
        Fixed { v: &self.v + &o.v, digits: self.digits }
    }

    pub fn sub(&self, o: &Fixed) -> Fixed {
        Fixed { v: &self.v - &o.v, digits: self.digits }
    }

    pub fn mul(&self, o: &Fixed) -> Fixed {
        Fixed { v: (&self.v * &o.v).div_floor(&ten_pow(self.digits)), digits: self.digits }
    }

    pub fn div(&self, o: &Fixed) -> Fixed {
        Fixed { v: (&self.v * ten_pow(self.digits)).div_floor(&o.v), digits: self.digits }
    }

    pub fn abs(&self) -> Fixed {
        Fixed { v: self.v.abs(), digits: self.digits }
    }

    pub fn is_negative(&self) -> bool {
        self.v.sign() == Sign::Minus
    }

    /// Decimal rendering with `shown` fractional digits (truncated toward zero).
    pub fn to_decimal(&self, shown: u32) -> String {
        let shown = shown.min(self.digits);
        let neg = self.is_negative();
        let a = self.v.abs() / ten_pow(self.digits - shown);
        let s = a.to_string();
        let s = if s.len() <= shown as usize {
            format!("{}{}", "0".repeat(shown as usize + 1 - s.len()), s)
        } else {
            s
        };
        let (ip, fp) = s.split_at(s.len() - shown as usize);
        let body = if shown == 0 { ip.to_string() } else { format!("{ip}.{fp}") };
        if neg && a.is_positive() {
            format!("-{body}")
        } else {
            body
        }
    }

    /// Square root by Newton iteration; `self` must be non-negative.
    pub fn sqrt(&self) -> Fixed {
        let scaled = &self.v * ten_pow(self.digits);
        Fixed { v: scaled.sqrt(), digits: self.digits }
    }
}

impl fmt::Display for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(self.digits))
    }
}

/// Working precision in decimal digits; `AMENABLE_PRECISION` overrides the default of 100.
pub fn working_precision() -> u32 {
    std::env::var("AMENABLE_PRECISION")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&d: &u32| d >= 10)
        .unwrap_or(100)
}

/// pi to `digits` decimals via Machin's formula.
pub fn pi_fixed(digits: u32) -> Fixed {
    let guard = 10;
    let d = digits + guard;
    let one = ten_pow(d);
    let arctan_inv = |x: i64| -> BigInt {
        let x2 = BigInt::from(x * x);
        let mut term = &one / BigInt::from(x);
        let mut sum = term.clone();
        let mut k = 1u64;
        loop {
            term = term / &x2;
            if term.is_zero() {
                break;
            }
            let t = &term / BigInt::from(2 * k + 1);
            if k % 2 == 1 {
                sum -= t;
            } else {
                sum += t;
            }
            k += 1;
        }
        sum
    };
    let pi = (arctan_inv(5) * 4 - arctan_inv(239)) * 4;
    Fixed { v: pi / ten_pow(guard), digits }
}

/// zeta(3) through the accelerated series 5/2 sum (-1)^(k+1) / (k^3 binom(2k,k)).
pub fn zeta3_fixed(digits: u32) -> Fixed {
    let guard = 10;
    let d = digits + guard;
    let one = ten_pow(d);
    let mut sum = BigInt::zero();
    let mut k = 1u64;
    loop {
        let den = BigInt::from(k).pow(3) * binomial(2 * k, k);
        let t = &one / den;
        if t.is_zero() {
            break;
        }
        if k % 2 == 1 {
            sum += t;
        } else {
            sum -= t;
        }
        k += 1;
    }
    let v = sum * 5 / 2;
    Fixed { v: v / ten_pow(guard), digits }
}

/// zeta(k) for k in 2..=4 (even values through pi).
pub fn zeta_fixed(k: u32, digits: u32) -> Fixed {
    match k {
        2 => {
            let p = pi_fixed(digits + 5);
            let v = (&p.v * &p.v) / ten_pow(digits + 5) / 6;
            Fixed { v: v / ten_pow(5), digits }
        }
        3 => zeta3_fixed(digits),
        4 => {
            let p = pi_fixed(digits + 5);
            let s = ten_pow(digits + 5);
            let p2 = (&p.v * &p.v) / &s;
            let p4 = (&p2 * &p2) / &s;
            Fixed { v: p4 / 90 / ten_pow(5), digits }
        }
        _ => panic!("zeta_fixed supports k in 2..=4"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("3/6"), Some(qf(1, 2)));
        assert_eq!(parse_q("-2.5"), Some(qf(-5, 2)));
        assert_eq!(parse_q("7"), Some(q(7)));
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(fmt_q(&qf(-4, 6)), "-2/3");
    }

    #[test]
    fn fixed_constants() {
        let pi = pi_fixed(40);
        assert_eq!(pi.to_decimal(30), "3.141592653589793238462643383279");
        let z3 = zeta_fixed(3, 40);
        assert_eq!(z3.to_decimal(25), "1.2020569031595942853997381");
        let z2 = zeta_fixed(2, 40);
        assert_eq!(z2.to_decimal(20), "1.64493406684822643647");
    }

    #[test]
    fn egcd_identity() {
        for (a, b) in [(12, 18), (-7, 3), (0, 5), (5, 0), (-4, -6)] {
            let (g, x, y) = egcd(a, b);
            assert_eq!(a * x + b * y, g);
            assert!(g >= 0);
        }
    }

    #[test]
    fn totient_small() {
        let t: Vec<u64> = (1..=10).map(totient).collect();
        assert_eq!(t, vec![1, 1, 2, 2, 4, 2, 6, 4, 6, 4]);
    }
}
