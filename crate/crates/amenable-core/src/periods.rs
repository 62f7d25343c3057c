//! Constant-term sequences of powers of Laurent polynomials.
//!
//! Powers are accumulated modulo several 62-bit primes at once and recovered by
//! Chinese remaindering. Before each step a monomial `m` of `p^k` is dropped
//! unless `-m` lies in `(N - k) * Newton(p)`, since otherwise no product of the
//! remaining `N - k` factors can bring it back to the origin.

use crate::arith::{fmt_q, parse_q, Q};
use crate::laurent::LaurentPolynomial;
use crate::modular::{big_mod, crt, large_primes, mul_mod};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodSequence {
    pub values: Vec<Q>,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PeriodError {
    #[error("no nonzero term beyond index 0")]
    AllZeroTail,
    #[error("index {0} is nonzero but not divisible by {1}")]
    NotDivisible(usize, usize),
    #[error("exponents too large for the packed representation")]
    ExponentRange,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SequenceJson {
    pub values: Vec<String>,
}

impl PeriodSequence {
    pub fn new(values: Vec<Q>, source: impl Into<String>) -> Self {
        PeriodSequence { values, source: source.into() }
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(|v| v.is_integer())
    }

    pub fn to_json(&self) -> SequenceJson {
        SequenceJson { values: self.values.iter().map(fmt_q).collect() }
    }

    pub fn from_json(j: &SequenceJson) -> Option<Self> {
        Some(PeriodSequence::new(j.values.iter().map(|s| parse_q(s)).collect::<Option<Vec<Q>>>()?, "json"))
    }
}

const BIAS: i64 = 1 << 15;
const FIELD: u32 = 16;

fn pack(e: &[i64]) -> Option<u128> {
    let mut k: u128 = 0;
    for (i, &x) in e.iter().enumerate() {
        let b = x + BIAS;
        if !(0..1 << FIELD).contains(&b) {
            return None;
        }
        k |= (b as u128) << (FIELD * i as u32);
    }
    Some(k)
}

fn offset(e: &[i64]) -> i128 {
    e.iter().enumerate().map(|(i, &x)| (x as i128) << (FIELD * i as u32)).sum()
}

/// `[p^k]_0` for `k = 0..=n`.
pub fn constant_terms(p: &LaurentPolynomial, n: usize) -> PeriodSequence {
    constant_terms_checked(p, n).expect("exponent range")
}

pub fn constant_terms_checked(p: &LaurentPolynomial, n: usize) -> Result<PeriodSequence, PeriodError> {
    let mut values = vec![Q::zero(); n + 1];
    values[0] = Q::one();
    let src = "constant_terms";
    if p.is_zero() || n == 0 {
        return Ok(PeriodSequence::new(values, src));
    }
    let dim = p.nvars();
    let newton = p.newton_polytope();
    if !newton.contains(&vec![0; dim]) {
        return Ok(PeriodSequence::new(values, src));
    }
    let span = p.terms().keys().flat_map(|e| e.iter()).map(|x| x.abs()).max().unwrap_or(0);
    if dim > 8 || span * n as i64 >= BIAS {
        return Err(PeriodError::ExponentRange);
    }
    // integer coefficients P = D p
    let den = crate::arith::common_denominator(p.terms().values());
    let ints: Vec<(Vec<i64>, BigInt)> =
        p.terms().iter().map(|(e, c)| (e.clone(), (c * Q::from_integer(den.clone())).to_integer())).collect();
    let norm: BigInt = ints.iter().map(|(_, c)| c.abs()).sum();
    let bits = norm.bits() as usize * n + 2;
    let primes = large_primes(bits / 61 + 1);
    let np = primes.len();
    // pruning functionals: <a, m> <= -(N - k) b for facets <a, x> >= b
    let facets: Vec<(Vec<i64>, i64)> = if newton.dim() == dim {
        newton.facets().iter().map(|h| (h.normal.clone(), h.offset)).collect()
    } else {
        vec![]
    };
    let nf = facets.len();
    struct Term {
        off: i128,
        fv: Vec<i64>,
        res: Vec<u64>,
    }
    let pterms: Vec<Term> = ints
        .iter()
        .map(|(e, c)| Term {
            off: offset(e),
            fv: facets.iter().map(|(a, _)| crate::arith::dot(a, e)).collect(),
            res: primes.iter().map(|&q| big_mod(c, q)).collect(),
        })
        .collect();
    let zero_key = pack(&vec![0; dim]).unwrap();
    // current power: key -> index into flat arrays
    let mut keys: Vec<u128> = vec![zero_key];
    let mut fvals: Vec<i64> = vec![0; nf];
    let mut res: Vec<u64> = vec![1; np];
    let mut dens = vec![BigInt::one()];
    for k in 1..=n {
        let bound: Vec<i64> = facets.iter().map(|(_, b)| -((n - k) as i64) * b).collect();
        let mut index: FxHashMap<u128, usize> = FxHashMap::default();
        let mut nkeys: Vec<u128> = Vec::with_capacity(keys.len() * 2);
        let mut nf_vals: Vec<i64> = Vec::with_capacity(keys.len() * 2 * nf);
        let mut nres: Vec<u64> = Vec::with_capacity(keys.len() * 2 * np);
        let mut scratch = vec![0i64; nf];
        for (i, &key) in keys.iter().enumerate() {
            let fv = &fvals[i * nf..(i + 1) * nf];
            let r = &res[i * np..(i + 1) * np];
            'term: for t in &pterms {
                for j in 0..nf {
                    let v = fv[j] + t.fv[j];
                    if v > bound[j] {
                        continue 'term;
                    }
                    scratch[j] = v;
                }
                let nk = (key as i128 + t.off) as u128;
                let idx = *index.entry(nk).or_insert_with(|| {
                    nkeys.push(nk);
                    nf_vals.extend_from_slice(&scratch);
                    nres.extend(std::iter::repeat(0).take(np));
                    nkeys.len() - 1
                });
                let dst = &mut nres[idx * np..(idx + 1) * np];
                for (l, &q) in primes.iter().enumerate() {
                    dst[l] = (dst[l] + mul_mod(r[l], t.res[l], q)) % q;
                }
            }
        }
        keys = nkeys;
        fvals = nf_vals;
        res = nres;
        dens.push(dens.last().unwrap() * &den);
        if let Some(&i) = index.get(&zero_key) {
            let c = crt(&res[i * np..(i + 1) * np], &primes);
            values[k] = Q::new(c, dens[k].clone());
        }
    }
    Ok(PeriodSequence::new(values, src))
}

/// Reference implementation by full expansion of `p^k`.
pub fn constant_terms_naive(p: &LaurentPolynomial, n: usize) -> PeriodSequence {
    let mut values = vec![Q::one()];
    let mut cur = LaurentPolynomial::one(p.nvars());
    for _ in 1..=n {
        cur = &cur * p;
        values.push(cur.constant_term());
    }
    PeriodSequence::new(values, "naive")
}

/// Gcd of the indices `k >= 1` with `c_k != 0`.
pub fn support_gcd(seq: &[Q]) -> Result<usize, PeriodError> {
    let g = seq.iter().enumerate().skip(1).filter(|(_, c)| !c.is_zero()).fold(0usize, |g, (i, _)| g.gcd(&i));
    if g == 0 {
        Err(PeriodError::AllZeroTail)
    } else {
        Ok(g)
    }
}

/// `c'_m = c_{jm}`.
pub fn compress(seq: &[Q], j: usize) -> Result<Vec<Q>, PeriodError> {
    assert!(j > 0);
    if let Some((i, _)) = seq.iter().enumerate().find(|(i, c)| i % j != 0 && !c.is_zero()) {
        return Err(PeriodError::NotDivisible(i, j));
    }
    Ok(seq.iter().step_by(j).cloned().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;
    use crate::laurent::parse_poly;

    #[test]
    fn central_binomials() {
        let s = constant_terms(&parse_poly("x + 1/x").unwrap(), 8);
        let want: Vec<Q> = [1, 0, 2, 0, 6, 0, 20, 0, 70].iter().map(|&v| q(v)).collect();
        assert_eq!(s.values, want);
        assert_eq!(support_gcd(&s.values), Ok(2));
        assert_eq!(compress(&s.values, 2).unwrap()[2], q(6));
    }

    #[test]
    fn pruned_matches_naive() {
        for src in ["x + y + 1/(x*y)", "(1 + x + y)^2/(x*y) + 3/2*x", "x + y + z + 1/(x*y*z) + 2"] {
            let p = parse_poly(src).unwrap();
            assert_eq!(constant_terms(&p, 7).values, constant_terms_naive(&p, 7).values, "{src}");
        }
    }

    #[test]
    fn origin_outside() {
        let s = constant_terms(&parse_poly("x + x*y").unwrap(), 3);
        assert_eq!(s.values, vec![q(1), q(0), q(0), q(0)]);
    }

    #[test]
    fn compress_errors() {
        let s: Vec<Q> = [1, 0, 2, 0, 3].iter().map(|&v| q(v)).collect();
        assert_eq!(compress(&s, 2).unwrap(), vec![q(1), q(2), q(3)]);
        assert_eq!(compress(&s, 3), Err(PeriodError::NotDivisible(2, 3)));
        assert_eq!(support_gcd(&[q(1), q(0)]), Err(PeriodError::AllZeroTail));
    }
}
