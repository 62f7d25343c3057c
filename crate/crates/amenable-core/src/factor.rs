//! Factorization of univariate polynomials over Q (Zassenhaus) and cyclotomic tests.

use crate::arith::Q;
use crate::upoly::UPoly;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

type ModPoly = Vec<u64>;

fn trim(mut a: ModPoly) -> ModPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (g, x, _) = crate::arith::egcd(a as i128, p as i128);
    debug_assert_eq!(g, 1);
    x.rem_euclid(p as i128) as u64
}

fn mp_sub(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p).collect())
}

fn mp_mul(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut c = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            c[i + j] = (c[i + j] + x * y) % p;
        }
    }
    trim(c)
}

fn mp_divrem(a: &ModPoly, b: &ModPoly, p: u64) -> (ModPoly, ModPoly) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (vec![], a.clone());
    }
    let inv = inv_mod(b[db], p);
    let mut r = a.clone();
    let mut qt = vec![0u64; a.len() - db];
    for i in (0..qt.len()).rev() {
        let f = r[i + db] * inv % p;
        qt[i] = f;
        if f != 0 {
            for j in 0..=db {
                r[i + j] = (r[i + j] + p - f * b[j] % p) % p;
            }
        }
    }
    r.truncate(db);
    (trim(qt), trim(r))
}

fn mp_monic(a: &ModPoly, p: u64) -> ModPoly {
    if a.is_empty() {
        return vec![];
    }
    let inv = inv_mod(*a.last().unwrap(), p);
    a.iter().map(|x| x * inv % p).collect()
}

fn mp_gcd(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = mp_divrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    mp_monic(&a, p)
}

/// `(s, t)` with `s a + t b = 1` for coprime `a`, `b`.
fn mp_xgcd(a: &ModPoly, b: &ModPoly, p: u64) -> (ModPoly, ModPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (ModPoly, ModPoly) = (vec![1], vec![]);
    let (mut t0, mut t1): (ModPoly, ModPoly) = (vec![], vec![1]);
    while !r1.is_empty() {
        let (qt, r) = mp_divrem(&r0, &r1, p);
        r0 = std::mem::replace(&mut r1, r);
        let s = mp_sub(&s0, &mp_mul(&qt, &s1, p), p);
        s0 = std::mem::replace(&mut s1, s);
        let t = mp_sub(&t0, &mp_mul(&qt, &t1, p), p);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = inv_mod(r0[0], p);
    (s0.iter().map(|x| x * inv % p).collect(), t0.iter().map(|x| x * inv % p).collect())
}

fn mp_powmod(base: &ModPoly, e: &BigUint, m: &ModPoly, p: u64) -> ModPoly {
    let mut result: ModPoly = vec![1];
    let b = mp_divrem(base, m, p).1;
    for i in (0..e.bits()).rev() {
        result = mp_divrem(&mp_mul(&result, &result, p), m, p).1;
        if e.bit(i) {
            result = mp_divrem(&mp_mul(&result, &b, p), m, p).1;
        }
    }
    result
}

fn mp_deriv(a: &ModPoly, p: u64) -> ModPoly {
    trim(a.iter().enumerate().skip(1).map(|(i, &x)| (i as u64 % p) * x % p).collect())
}

fn reduce(f: &[BigInt], p: u64) -> ModPoly {
    let pb = BigInt::from(p);
    trim(f.iter().map(|x| x.mod_floor(&pb).to_u64().unwrap()).collect())
}

/// Equal-degree splitting with deterministic trial polynomials.
fn edf(g: &ModPoly, d: usize, p: u64, out: &mut Vec<ModPoly>) {
    let n = g.len() - 1;
    if n == d {
        out.push(g.clone());
        return;
    }
    let e: BigUint = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    let mut counter: u64 = p;
    loop {
        // trial polynomial: base-p digits of the counter
        let mut a: ModPoly = Vec::new();
        let mut c = counter;
        while c > 0 {
            a.push(c % p);
            c /= p;
        }
        counter += 1;
        let a = trim(a);
        if a.len() < 2 {
            continue;
        }
        let cand = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(d-1))
            let mut acc = a.clone();
            let mut cur = mp_divrem(&a, g, p).1;
            for _ in 1..d {
                cur = mp_divrem(&mp_mul(&cur, &cur, p), g, p).1;
                acc = mp_sub(&acc, &cur.iter().map(|x| (p - x) % p).collect(), p);
            }
            acc
        } else {
            let r = mp_powmod(&a, &e, g, p);
            mp_sub(&r, &vec![1], p)
        };
        let u = mp_gcd(&cand, g, p);
        if u.len() > 1 && u.len() < g.len() {
            let v = mp_monic(&mp_divrem(g, &u, p).0, p);
            edf(&u, d, p, out);
            edf(&v, d, p, out);
            return;
        }
    }
}

/// Monic irreducible factors of a monic square-free polynomial mod `p`.
fn factor_mod_p(f: &ModPoly, p: u64) -> Vec<ModPoly> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x: ModPoly = vec![0, 1];
    let mut h = x.clone();
    let mut d = 0;
    while f.len() > 1 {
        d += 1;
        if 2 * d > f.len() - 1 {
            out.push(f.clone());
            break;
        }
        h = mp_powmod(&h, &BigUint::from(p), &f, p);
        let g = mp_gcd(&mp_sub(&h, &x, p), &f, p);
        if g.len() > 1 {
            edf(&g, d, p, &mut out);
            f = mp_monic(&mp_divrem(&f, &g, p).0, p);
            h = mp_divrem(&h, &f, p).1;
        }
    }
    out.sort();
    out
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

// integer polynomial helpers

fn zp_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c
}

fn sym_mod(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2;
    let mut v: Vec<BigInt> = a
        .iter()
        .map(|x| {
            let r = x.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect();
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
    v
}

fn to_big(a: &ModPoly) -> Vec<BigInt> {
    a.iter().map(|&x| BigInt::from(x)).collect()
}

/// Lifts `f = g h mod p` (`h` monic, `lc(g) = lc(f)`) to modulus `p^k`.
fn hensel_two(f: &[BigInt], g0: &ModPoly, h0: &ModPoly, p: u64, k: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let pb = BigInt::from(p);
    let (s, t) = mp_xgcd(g0, h0, p);
    let lc = f.last().unwrap().clone();
    let mut g = to_big(g0);
    let gl = g.len() - 1;
    g[gl] = lc.clone();
    let mut h = to_big(h0);
    let mut m = pb.clone();
    for _ in 1..k {
        let gh = zp_mul(&g, &h);
        let n = f.len().max(gh.len());
        let e: Vec<BigInt> = (0..n)
            .map(|i| {
                let a = f.get(i).cloned().unwrap_or_default() - gh.get(i).cloned().unwrap_or_default();
                debug_assert!((&a % &m).is_zero());
                a / &m
            })
            .collect();
        let e = reduce(&e, p);
        let se = mp_mul(&s, &e, p);
        let (qt, dh) = mp_divrem(&se, h0, p);
        let te = mp_mul(&t, &e, p);
        let dg = trim({
            let a = te;
            let b = mp_mul(&qt, g0, p);
            let n = a.len().max(b.len());
            (0..n).map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p).collect()
        });
        for (i, x) in dg.iter().enumerate() {
            if i < g.len() {
                g[i] += &m * BigInt::from(*x);
            }
        }
        for (i, x) in dh.iter().enumerate() {
            h[i] += &m * BigInt::from(*x);
        }
        m *= &pb;
        g = sym_mod(&g, &m);
        h = sym_mod(&h, &m);
        let gl = g.len() - 1;
        g[gl] = lc.clone();
    }
    (g, h)
}

/// Lifts the monic modular factors of `f` to monic factors mod `p^k`.
fn hensel_multi(f: &[BigInt], factors: &[ModPoly], p: u64, k: u32) -> Vec<Vec<BigInt>> {
    let m = BigInt::from(p).pow(k);
    if factors.len() == 1 {
        let lc_inv = f.last().unwrap().modinv(&m).expect("lc invertible");
        return vec![sym_mod(&f.iter().map(|x| x * &lc_inv).collect::<Vec<_>>(), &m)];
    }
    let (a, b) = factors.split_at(factors.len() / 2);
    let lc = reduce(&[f.last().unwrap().clone()], p);
    let mut g0: ModPoly = lc;
    for x in a {
        g0 = mp_mul(&g0, x, p);
    }
    let mut h0: ModPoly = vec![1];
    for x in b {
        h0 = mp_mul(&h0, x, p);
    }
    let (g, h) = hensel_two(f, &g0, &h0, p, k);
    let mut out = hensel_multi(&g, a, p, k);
    out.extend(hensel_multi(&h, b, p, k));
    out
}

fn zp_divexact(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let db = b.len() - 1;
    if a.len() < b.len() {
        return None;
    }
    let mut r = a.to_vec();
    let mut qt = vec![BigInt::zero(); a.len() - db];
    for i in (0..qt.len()).rev() {
        let (f, rem) = r[i + db].div_rem(&b[db]);
        if !rem.is_zero() {
            return None;
        }
        for j in 0..=db {
            r[i + j] -= &f * &b[j];
        }
        qt[i] = f;
    }
    r.iter().all(|x| x.is_zero()).then_some(qt)
}

fn zp_primitive(a: &[BigInt]) -> Vec<BigInt> {
    let mut g = a.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if a.last().unwrap().is_negative() {
        g = -g;
    }
    a.iter().map(|x| x / &g).collect()
}

/// Irreducible factors over Z of a primitive square-free polynomial with positive leading coefficient.
pub fn factor_squarefree_z(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    if f[0].is_zero() {
        let mut out = vec![vec![BigInt::zero(), BigInt::one()]];
        out.extend(factor_squarefree_z(&f[1..]));
        return out;
    }
    // choose a good prime with few modular factors
    let mut best: Option<(u64, Vec<ModPoly>)> = None;
    let mut tried = 0;
    for p in small_primes() {
        if (f[n].clone() % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = mp_monic(&reduce(f, p), p);
        if mp_gcd(&fp, &mp_deriv(&fp, p), p).len() != 1 {
            continue;
        }
        let fac = factor_mod_p(&fp, p);
        if fac.len() == 1 {
            return vec![f.to_vec()];
        }
        if best.as_ref().map_or(true, |(_, b)| fac.len() < b.len()) {
            best = Some((p, fac));
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    let (p, fac) = best.unwrap();
    // Mignotte-type bound on coefficients of lc * factor
    let norm2: BigInt = f.iter().map(|x| x * x).sum::<BigInt>().sqrt() + 1;
    let bound = f[n].abs() * (BigInt::one() << n) * norm2;
    let mut k = 1u32;
    let mut m = BigInt::from(p);
    while m <= &bound * 2 {
        m *= p;
        k += 1;
    }
    let lifted = hensel_multi(f, &fac, p, k);
    // recombination
    let mut remaining: Vec<Vec<BigInt>> = lifted;
    let mut fcur = f.to_vec();
    let mut out = Vec::new();
    let mut s = 1;
    'outer: while 2 * s <= remaining.len() {
        let r = remaining.len();
        let mut idx: Vec<usize> = (0..s).collect();
        loop {
            let lc = fcur.last().unwrap().clone();
            let mut g = vec![lc.clone()];
            for &i in &idx {
                g = sym_mod(&zp_mul(&g, &remaining[i]), &m);
            }
            let gp = zp_primitive(&g);
            if let Some(qt) = zp_divexact(&fcur, &gp) {
                out.push(gp);
                fcur = qt;
                for &i in idx.iter().rev() {
                    remaining.remove(i);
                }
                continue 'outer;
            }
            // next subset
            let mut i = s;
            loop {
                if i == 0 {
                    s += 1;
                    continue 'outer;
                }
                i -= 1;
                if idx[i] < r - s + i {
                    idx[i] += 1;
                    for j in i + 1..s {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
    if fcur.len() > 1 {
        out.push(zp_primitive(&fcur));
    }
    out
}

/// `p = c * prod f_i^{e_i}` with primitive integer `f_i` (positive leading coefficient), sorted.
pub fn factor_q(p: &UPoly) -> (Q, Vec<(UPoly, usize)>) {
    if p.degree() < 1 {
        return (p.coeff(0), vec![]);
    }
    let mut out: Vec<(UPoly, usize)> = Vec::new();
    for (g, e) in p.squarefree() {
        let (_, prim) = g.primitive_part();
        for h in factor_squarefree_z(&prim) {
            out.push((UPoly::from_ints(&h), e));
        }
    }
    out.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| cmp_coeffs(&a.0, &b.0)).then(a.1.cmp(&b.1)));
    let mut prod = UPoly::one();
    for (f, e) in &out {
        prod = &prod * &f.pow(*e as u32);
    }
    let c = p.lc() / prod.lc();
    (c, out)
}

fn cmp_coeffs(a: &UPoly, b: &UPoly) -> std::cmp::Ordering {
    a.coeffs().iter().rev().cmp(b.coeffs().iter().rev())
}

/// The m-th cyclotomic polynomial.
pub fn cyclotomic(m: u64) -> UPoly {
    let mut num = UPoly::monomial(Q::one(), m as usize);
    num = &num - &UPoly::one();
    for d in 1..m {
        if m % d == 0 {
            num = num.div_exact(&cyclotomic(d)).expect("cyclotomic division");
        }
    }
    num
}

/// Index `m` with `f = Phi_m`, for a primitive integer irreducible `f`.
pub fn cyclotomic_index(f: &UPoly) -> Option<u64> {
    let k = f.degree();
    if k < 1 {
        return None;
    }
    let k = k as u64;
    (1..=2 * k * k + 2).filter(|&m| crate::arith::totient(m) == k).find(|&m| cyclotomic(m) == *f)
}

/// True iff `u` is a nonzero rational multiple of `t^a` times a product of cyclotomic polynomials.
pub fn is_cyclotomic_product(u: &UPoly) -> bool {
    if u.is_zero() {
        return false;
    }
    let (_, fs) = factor_q(&u.strip_t());
    fs.iter().all(|(f, _)| cyclotomic_index(f).is_some())
}

/// True iff every nonzero root of `u` is a root of unity.
pub fn vanishes_only_at_roots_of_unity(u: &UPoly) -> bool {
    is_cyclotomic_product(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(c: &[i64]) -> UPoly {
        UPoly::from_i64(c)
    }

    #[test]
    fn factors_small() {
        // (t^2+1)(t-3)(2t+1)
        let f = &(&up(&[1, 0, 1]) * &up(&[-3, 1])) * &up(&[1, 2]);
        let (c, fs) = factor_q(&f);
        assert_eq!(c, crate::arith::q(1));
        assert_eq!(fs, vec![(up(&[-3, 1]), 1), (up(&[1, 2]), 1), (up(&[1, 0, 1]), 1)]);
    }

    #[test]
    fn swinnerton_dyer_irreducible() {
        // t^4 - 10 t^2 + 1 splits modulo every prime but is irreducible
        let (_, fs) = factor_q(&up(&[1, 0, -10, 0, 1]));
        assert_eq!(fs.len(), 1);
    }

    #[test]
    fn factor_with_multiplicity() {
        let f = &up(&[1, 1]).pow(3) * &up(&[1, 1, 1]).pow(2);
        let (_, fs) = factor_q(&f.scale(&crate::arith::qf(3, 2)));
        assert_eq!(fs, vec![(up(&[1, 1]), 3), (up(&[1, 1, 1]), 2)]);
    }

    #[test]
    fn product_of_many_linear() {
        let mut f = UPoly::one();
        for a in 1..=8 {
            f = &f * &up(&[-a, 1]);
        }
        let (_, fs) = factor_q(&f);
        assert_eq!(fs.len(), 8);
        assert_eq!(f.rational_roots(), (1..=8).map(crate::arith::q).collect::<Vec<_>>());
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic(6), up(&[1, -1, 1]));
        assert!(is_cyclotomic_product(&up(&[1, 3, 3, 1])));
        assert!(is_cyclotomic_product(&up(&[1, 1, 1])));
        assert!(!is_cyclotomic_product(&up(&[1, 3, 1])));
        assert!(vanishes_only_at_roots_of_unity(&up(&[2, 2])));
        assert!(vanishes_only_at_roots_of_unity(&up(&[0, 0, 0, 5])));
        assert!(!vanishes_only_at_roots_of_unity(&(&up(&[1, 1]) * &up(&[1, -2]))));
    }
}
