//! Differential operators in `D = t d/dt`: guessing annihilators of period
//! sequences, recurrences, pullbacks, singular points and local exponents.

use crate::arith::{fmt_q, parse_q, q, Fixed, Q};
use crate::factor::factor_q;
use crate::laurent::parse_with_vars;
use crate::linalg::integer_nullspace;
use crate::modular::{big_mod, inv_mod, large_primes, mul_mod};
use crate::numfield::{Elem, NumberField};
use crate::periods::{compress, support_gcd, PeriodError, PeriodSequence};
use crate::upoly::{complex_roots, ComplexFixed, UPoly};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PfError {
    #[error("no operator with order <= {0} and degree <= {1} annihilates the sequence")]
    NoOperator(usize, usize),
    #[error("nullspace of dimension {2} at order {0}, degree {1}; more terms needed")]
    Ambiguous(usize, usize, usize),
    #[error("{0} terms needed, {1} available")]
    NotEnoughTerms(usize, usize),
    #[error("operator degree is not compatible with index {0}")]
    IncompatibleIndex(usize),
    #[error("operator text: {0}")]
    Parse(String),
    #[error(transparent)]
    Period(#[from] PeriodError),
}

/// `sum beta[i][j] t^i D^j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiffOperator {
    beta: Vec<Vec<Q>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub order: usize,
    pub degree: usize,
    pub beta: Vec<Vec<String>>,
}

impl DiffOperator {
    /// `beta[i][j]` is the coefficient of `t^i D^j`; trailing zero rows and columns are dropped.
    pub fn new(beta: Vec<Vec<Q>>) -> Self {
        let r = beta.iter().filter_map(|row| row.iter().rposition(|x| !x.is_zero())).max();
        let d = beta.iter().rposition(|row| row.iter().any(|x| !x.is_zero()));
        match (r, d) {
            (Some(r), Some(d)) => {
                let beta = beta[..=d]
                    .iter()
                    .map(|row| (0..=r).map(|j| row.get(j).cloned().unwrap_or_else(Q::zero)).collect())
                    .collect();
                DiffOperator { beta }
            }
            _ => DiffOperator { beta: vec![vec![Q::zero()]] },
        }
    }

    /// From the coefficient polynomials `P_j(t)` of `D^j`.
    pub fn from_coefficients(p: &[UPoly]) -> Self {
        let d = p.iter().map(|x| x.degree().max(0) as usize).max().unwrap_or(0);
        let beta = (0..=d).map(|i| p.iter().map(|x| x.coeff(i)).collect()).collect();
        DiffOperator::new(beta)
    }

    pub fn is_zero(&self) -> bool {
        self.beta.iter().all(|row| row.iter().all(|x| x.is_zero()))
    }

    pub fn order(&self) -> usize {
        self.beta[0].len() - 1
    }

    /// Degree in `t`.
    pub fn degree(&self) -> usize {
        self.beta.len() - 1
    }

    pub fn beta(&self, i: usize, j: usize) -> Q {
        self.beta.get(i).and_then(|r| r.get(j)).cloned().unwrap_or_else(Q::zero)
    }

    /// `P_j(t) = sum_i beta_ij t^i`.
    pub fn coefficient(&self, j: usize) -> UPoly {
        UPoly::new(self.beta.iter().map(|row| row.get(j).cloned().unwrap_or_else(Q::zero)).collect())
    }

    pub fn leading_coefficient(&self) -> UPoly {
        self.coefficient(self.order())
    }

    /// Coprime integer coefficients with the first nonzero `beta` (lexicographic in `(i, j)`) positive.
    pub fn normalized(&self) -> Self {
        let flat: Vec<Q> = self.beta.iter().flatten().cloned().collect();
        let ints = crate::linalg::clear_denominators(&flat);
        let sign = ints.iter().find(|x| !x.is_zero()).map(|x| x.is_negative()).unwrap_or(false);
        let w = self.order() + 1;
        let beta = ints
            .chunks(w)
            .map(|row| row.iter().map(|x| Q::from_integer(if sign { -x } else { x.clone() })).collect())
            .collect();
        DiffOperator { beta }
    }

    /// Equality up to a nonzero scalar.
    pub fn equivalent(&self, other: &DiffOperator) -> bool {
        self.normalized() == other.normalized()
    }

    /// Parses text such as `(27 t (27 t + 11) - 1) D^4 + 54 t (54 t + 11) D^3`. `D` must stand to the
    /// right of every power of `t` it multiplies, which makes the commutative expansion valid.
    pub fn parse(text: &str) -> Result<Self, PfError> {
        let vars = vec!["t".to_string(), "D".to_string()];
        let p = parse_with_vars(text, &vars).map_err(|e| PfError::Parse(e.to_string()))?.poly;
        let mut beta: Vec<Vec<Q>> = Vec::new();
        for (e, c) in p.terms() {
            if e[0] < 0 || e[1] < 0 {
                return Err(PfError::Parse("negative power".into()));
            }
            let (i, j) = (e[0] as usize, e[1] as usize);
            if beta.len() <= i {
                beta.resize(i + 1, vec![]);
            }
            if beta[i].len() <= j {
                beta[i].resize(j + 1, Q::zero());
            }
            beta[i][j] = c.clone();
        }
        if beta.is_empty() {
            return Err(PfError::Parse("zero operator".into()));
        }
        Ok(DiffOperator::new(beta))
    }

    pub fn to_json(&self) -> OperatorJson {
        OperatorJson {
            order: self.order(),
            degree: self.degree(),
            beta: self.beta.iter().map(|r| r.iter().map(fmt_q).collect()).collect(),
        }
    }

    pub fn from_json(j: &OperatorJson) -> Option<Self> {
        let beta = j.beta.iter().map(|r| r.iter().map(|s| parse_q(s)).collect::<Option<Vec<Q>>>()).collect::<Option<_>>()?;
        Some(DiffOperator::new(beta))
    }

    /// Operator obtained by `t -> t^j`: annihilates `f(t^j)` whenever `self` annihilates `f`.
    pub fn pullback(&self, j: usize) -> DiffOperator {
        assert!(j >= 1);
        let r = self.order();
        let polys: Vec<UPoly> = (0..=r)
            .map(|k| self.coefficient(k).inflate(j).scale(&Q::from_integer(BigInt::from(j).pow((r - k) as u32))))
            .collect();
        DiffOperator::from_coefficients(&polys).normalized()
    }

    /// Coefficients of `L(sum c_n t^n)`, same length as the input.
    pub fn apply(&self, seq: &[Q]) -> Vec<Q> {
        (0..seq.len())
            .map(|n| {
                let mut s = Q::zero();
                for (i, row) in self.beta.iter().enumerate() {
                    if i > n || seq[n - i].is_zero() {
                        continue;
                    }
                    let m = q((n - i) as i64);
                    let mut acc = Q::zero();
                    for b in row.iter().rev() {
                        acc = acc * &m + b;
                    }
                    s += acc * &seq[n - i];
                }
                s
            })
            .collect()
    }

    pub fn annihilates(&self, seq: &[Q]) -> bool {
        self.apply(seq).iter().all(|x| x.is_zero())
    }

    /// The operator written in `s = t^i`, keeping `D = t d/dt`.
    pub fn to_recurrence(&self, fano_index: usize) -> Result<Recurrence, PfError> {
        let i_x = fano_index.max(1);
        let mut beta = Vec::new();
        for (i, row) in self.beta.iter().enumerate() {
            if i % i_x != 0 {
                if row.iter().any(|x| !x.is_zero()) {
                    return Err(PfError::IncompatibleIndex(i_x));
                }
                continue;
            }
            beta.push(row.clone());
        }
        let span = beta.len() - 1;
        Ok(Recurrence { fano_index: i_x, beta, span })
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for j in (0..=self.order()).rev() {
            let p = self.coefficient(j);
            if p.is_zero() {
                continue;
            }
            let body = p.format("t");
            let dj = match j {
                0 => String::new(),
                1 => " D".to_string(),
                _ => format!(" D^{j}"),
            };
            parts.push(format!("({body}){dj}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// `sum_{i,j} beta_ij (i_X (n - i))^j u_{n-i} = 0` for `n >= span`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recurrence {
    pub fano_index: usize,
    pub beta: Vec<Vec<Q>>,
    pub span: usize,
}

impl Recurrence {
    /// Coefficient of `u_{n-i}` as a polynomial in `n`.
    pub fn poly(&self, i: usize) -> UPoly {
        let lin = UPoly::new(vec![q(-((self.fano_index * i) as i64)), q(self.fano_index as i64)]);
        let mut acc = UPoly::zero();
        for b in self.beta[i].iter().rev() {
            acc = &(&acc * &lin) + &UPoly::constant(b.clone());
        }
        acc
    }

    /// Coefficients of `u_n, u_{n-1}, ..., u_{n-span}` at `n`.
    pub fn coefficients_at(&self, n: usize) -> Vec<Q> {
        (0..=self.span)
            .map(|i| {
                let m = q(self.fano_index as i64 * (n as i64 - i as i64));
                let mut acc = Q::zero();
                for b in self.beta[i].iter().rev() {
                    acc = acc * &m + b;
                }
                acc
            })
            .collect()
    }

    /// True iff `u` satisfies the recurrence for every `span <= n < u.len()`.
    pub fn satisfied_by(&self, u: &[Q]) -> bool {
        (self.span..u.len()).all(|n| {
            let c = self.coefficients_at(n);
            c.iter().enumerate().map(|(i, a)| a * &u[n - i]).fold(Q::zero(), |x, y| x + y).is_zero()
        })
    }

    pub fn to_operator(&self) -> DiffOperator {
        let mut beta = vec![vec![]; self.span * self.fano_index + 1];
        for (i, row) in self.beta.iter().enumerate() {
            beta[i * self.fano_index] = row.clone();
        }
        DiffOperator::new(beta)
    }
}

impl fmt::Display for Recurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for i in 0..=self.span {
            let p = self.poly(i);
            if p.is_zero() {
                continue;
            }
            let u = if i == 0 { "u_n".to_string() } else { format!("u_{{n-{i}}}") };
            parts.push(format!("({}) {u}", p.format("n")));
        }
        write!(f, "{} = 0", parts.join(" + "))
    }
}

/// Search bounds for [`annihilator`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GuessBounds {
    pub max_order: usize,
    pub max_degree: usize,
    /// Extra equations beyond the number of unknowns.
    pub guard: usize,
    /// Further terms used only to re-verify the candidate.
    pub verify: usize,
}

impl Default for GuessBounds {
    fn default() -> Self {
        GuessBounds { max_order: 4, max_degree: 6, guard: 5, verify: 5 }
    }
}

impl GuessBounds {
    pub fn new(max_order: usize, max_degree: usize) -> Self {
        GuessBounds { max_order, max_degree, ..Default::default() }
    }

    /// Terms needed to certify an operator of order `r` and degree `d`.
    pub fn terms_needed(&self, r: usize, d: usize) -> usize {
        (r + 1) * (d + 1) + self.guard + self.verify
    }
}

fn equation_rows(seq: &[Q], r: usize, d: usize, rows: usize) -> Vec<Vec<BigInt>> {
    let den = crate::arith::common_denominator(seq[..rows].iter());
    let ints: Vec<BigInt> = seq[..rows].iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect();
    (0..rows)
        .map(|n| {
            let mut row = Vec::with_capacity((d + 1) * (r + 1));
            for i in 0..=d {
                for j in 0..=r {
                    if i > n {
                        row.push(BigInt::zero());
                    } else {
                        row.push(BigInt::from(n - i).pow(j as u32) * &ints[n - i]);
                    }
                }
            }
            row
        })
        .collect()
}

fn rank_mod(rows: &[Vec<BigInt>], p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| big_mod(x, p)).collect()).collect();
    let n = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..n {
        let Some(pr) = (rank..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(rank, pr);
        let inv = inv_mod(a[rank][c], p);
        let piv = a[rank].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == rank || row[c] == 0 {
                continue;
            }
            let f = mul_mod(row[c], inv, p);
            for k in c..n {
                row[k] = (row[k] + p - mul_mod(f, piv[k], p)) % p;
            }
        }
        rank += 1;
    }
    rank
}

/// Minimal operator (lexicographic in order, then degree) annihilating `seq`.
///
/// The sequence is first compressed by the gcd of its support; the operator found for the
/// compressed sequence is pulled back.
pub fn annihilator(seq: &PeriodSequence, bounds: GuessBounds) -> Result<DiffOperator, PfError> {
    let g = support_gcd(&seq.values)?;
    let c = compress(&seq.values, g)?;
    let l = annihilator_uncompressed(&c, bounds)?;
    Ok(l.pullback(g))
}

/// Guesses the operator of the period sequence of `p`, computing more terms (by factors of 3/2,
/// starting from `start`) while the guess fails, up to `max_terms`.
///
/// Returns the operator together with the sequence it was found from.
pub fn annihilator_adaptive(
    p: &crate::laurent::LaurentPolynomial,
    start: usize,
    max_terms: usize,
    bounds: GuessBounds,
) -> Result<(DiffOperator, PeriodSequence), PfError> {
    let mut n = start.max(2).min(max_terms);
    loop {
        let seq = crate::periods::constant_terms(p, n);
        match annihilator(&seq, bounds) {
            Ok(l) => return Ok((l, seq)),
            Err(e) if n >= max_terms => return Err(e),
            Err(_) => n = (n * 3 / 2).min(max_terms),
        }
    }
}

/// Like [`annihilator`] without the compression step.
pub fn annihilator_uncompressed(seq: &[Q], bounds: GuessBounds) -> Result<DiffOperator, PfError> {
    let prime = large_primes(1)[0];
    let mut fitted_any = false;
    for r in 1..=bounds.max_order {
        for d in 0..=bounds.max_degree {
            let unknowns = (r + 1) * (d + 1);
            let rows = unknowns + bounds.guard;
            if rows + bounds.verify > seq.len() {
                break;
            }
            fitted_any = true;
            let m = equation_rows(seq, r, d, rows);
            if rank_mod(&m, prime) == unknowns {
                continue;
            }
            let ns = integer_nullspace(&m, unknowns);
            match ns.len() {
                0 => continue,
                1 => {
                    let v = &ns[0];
                    let beta: Vec<Vec<Q>> =
                        v.chunks(r + 1).map(|row| row.iter().map(|x| Q::from_integer(x.clone())).collect()).collect();
                    let l = DiffOperator::new(beta).normalized();
                    if l.order() < r || l.degree() < d {
                        // a smaller operator would have been found earlier
                        continue;
                    }
                    if l.annihilates(seq) {
                        return Ok(l);
                    }
                }
                k => return Err(PfError::Ambiguous(r, d, k)),
            }
        }
    }
    if !fitted_any {
        return Err(PfError::NotEnoughTerms(bounds.terms_needed(1, 0), seq.len()));
    }
    Err(PfError::NoOperator(bounds.max_order, bounds.max_degree))
}

/// Location of a singular point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Zero,
    Infinity,
    Rational(Q),
    /// Root number `root_index` (roots sorted by real part, then imaginary part) of `minpoly`.
    Algebraic { minpoly: UPoly, root_index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Apparentness {
    Candidate,
    Apparent,
    Genuine,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularPoint {
    pub location: Location,
    /// Numeric value (absent at infinity).
    pub value: Option<ComplexFixed>,
    /// Isolating interval for real algebraic points.
    pub interval: Option<(Q, Q)>,
    /// Multiplicity as a root of the leading coefficient (0 at `0` and infinity when not a root).
    pub multiplicity: usize,
    pub status: Apparentness,
}

impl SingularPoint {
    pub fn is_finite_nonzero(&self) -> bool {
        matches!(self.location, Location::Rational(_) | Location::Algebraic { .. })
    }

    /// Modulus, when finite.
    pub fn modulus(&self) -> Option<Fixed> {
        self.value.as_ref().map(|v| v.re.mul(&v.re).add(&v.im.mul(&v.im)).sqrt())
    }

    /// The minimal polynomial of the point over Q (for finite points).
    pub fn minpoly(&self) -> Option<UPoly> {
        match &self.location {
            Location::Zero => Some(UPoly::t()),
            Location::Rational(a) => Some(UPoly::new(vec![-a.clone(), Q::one()])),
            Location::Algebraic { minpoly, .. } => Some(minpoly.clone()),
            Location::Infinity => None,
        }
    }

    pub fn describe(&self) -> String {
        match &self.location {
            Location::Zero => "0".into(),
            Location::Infinity => "inf".into(),
            Location::Rational(a) => fmt_q(a),
            Location::Algebraic { minpoly, root_index } => format!("root #{root_index} of {}", minpoly.format("t")),
        }
    }
}

/// Roots of `p` (irreducible over Q, degree >= 2) with exact interval data for the real ones.
fn algebraic_roots(p: &UPoly, digits: u32) -> Vec<(ComplexFixed, Option<(Q, Q)>)> {
    let eps = Q::new(BigInt::one(), BigInt::from(10).pow(digits + 5));
    let reals = p.real_root_intervals(&eps);
    let mut out: Vec<(ComplexFixed, Option<(Q, Q)>)> = reals
        .iter()
        .map(|iv| (ComplexFixed { re: crate::upoly::interval_value(iv, digits), im: Fixed::zero(digits) }, Some(iv.clone())))
        .collect();
    let mut cx: Vec<ComplexFixed> = complex_roots(p, digits).into_iter().map(|z| ComplexFixed { re: z.re, im: z.im }).collect();
    // keep the non-real roots: drop the entries closest to each real root
    let tol = Fixed::from_q(&Q::new(BigInt::one(), BigInt::from(10).pow(digits / 2)), digits);
    cx.retain(|z| z.im.abs().v > tol.v);
    out.extend(cx.into_iter().map(|z| (z, None)));
    out.sort_by(|a, b| a.0.re.v.cmp(&b.0.re.v).then(a.0.im.v.cmp(&b.0.im.v)));
    out
}

/// Singular points: `0`, `infinity` and the roots of the leading coefficient, each a candidate.
pub fn singular_points(l: &DiffOperator, digits: u32) -> Vec<SingularPoint> {
    let lead = l.leading_coefficient();
    let mut out = vec![SingularPoint {
        location: Location::Zero,
        value: Some(ComplexFixed { re: Fixed::zero(digits), im: Fixed::zero(digits) }),
        interval: Some((Q::zero(), Q::zero())),
        multiplicity: lead.t_valuation(),
        status: Apparentness::Candidate,
    }];
    let (_, factors) = factor_q(&lead.strip_t());
    for (f, e) in factors {
        if f.degree() == 1 {
            let a = -f.coeff(0) / f.coeff(1);
            out.push(SingularPoint {
                location: Location::Rational(a.clone()),
                value: Some(ComplexFixed { re: Fixed::from_q(&a, digits), im: Fixed::zero(digits) }),
                interval: Some((a.clone(), a)),
                multiplicity: e,
                status: Apparentness::Candidate,
            });
        } else {
            for (k, (z, iv)) in algebraic_roots(&f, digits).into_iter().enumerate() {
                out.push(SingularPoint {
                    location: Location::Algebraic { minpoly: f.monic(), root_index: k },
                    value: Some(z),
                    interval: iv,
                    multiplicity: e,
                    status: Apparentness::Candidate,
                });
            }
        }
    }
    out.push(SingularPoint { location: Location::Infinity, value: None, interval: None, multiplicity: 0, status: Apparentness::Candidate });
    out
}

/// Roots of an indicial polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exponents {
    /// Rational roots with multiplicity, sorted.
    pub rational: Vec<Q>,
    /// True iff every root is rational.
    pub complete: bool,
    /// The indicial polynomial when its coefficients are rational.
    pub poly: Option<UPoly>,
}

impl Exponents {
    fn from_poly(p: UPoly) -> Self {
        let (_, fs) = factor_q(&p);
        let mut rational = Vec::new();
        let mut complete = true;
        for (f, e) in fs {
            if f.degree() == 1 {
                let a = -f.coeff(0) / f.coeff(1);
                rational.extend(std::iter::repeat(a).take(e));
            } else {
                complete = false;
            }
        }
        rational.sort();
        Exponents { rational, complete, poly: Some(p) }
    }
}

/// `(t D)`-form coefficients `Q_k(t)` of `d^k/dt^k`: `D^j = sum_k S(j,k) t^k d^k`.
fn derivative_form(l: &DiffOperator) -> Vec<UPoly> {
    let r = l.order();
    // Stirling numbers of the second kind
    let mut s = vec![vec![Q::zero(); r + 1]; r + 1];
    s[0][0] = Q::one();
    for j in 1..=r {
        for k in 1..=j {
            s[j][k] = &s[j - 1][k - 1] + q(k as i64) * &s[j - 1][k];
        }
    }
    (0..=r)
        .map(|k| {
            let mut acc = UPoly::zero();
            for (j, row) in s.iter().enumerate().skip(k) {
                if !row[k].is_zero() {
                    acc = &acc + &l.coefficient(j).scale(&row[k]);
                }
            }
            &acc * &UPoly::monomial(Q::one(), k)
        })
        .collect()
}

/// Taylor coefficients of `p(c + s)` in `K = Q(c)`.
fn taylor_at(k: &NumberField, p: &UPoly, c: &Elem) -> Vec<Elem> {
    let mut cur: Vec<Elem> = p.coeffs().iter().map(|a| k.from_q(a)).collect();
    let mut out = Vec::new();
    while !cur.is_empty() {
        // synthetic division by (t - c)
        let n = cur.len();
        let mut qt = vec![UPoly::zero(); n - 1];
        let mut acc = UPoly::zero();
        for i in (0..n).rev() {
            acc = k.add(&k.mul(&acc, c), &cur[i]);
            if i > 0 {
                qt[i - 1] = acc.clone();
            }
        }
        out.push(acc);
        cur = qt;
    }
    out
}

fn falling(k: &NumberField, mu: &Q, n: usize) -> Elem {
    let mut acc = Q::one();
    for i in 0..n {
        acc *= mu - q(i as i64);
    }
    k.from_q(&acc)
}

/// Local expansion data at a finite point: `f_h(mu) = sum_k q_{k,k+h} [mu]_k` for `h >= delta`.
struct LocalForm {
    field: NumberField,
    /// `coeffs[k][l]` = Taylor coefficient `l` of `Q_k` at the point.
    coeffs: Vec<Vec<Elem>>,
    delta: i64,
}

impl LocalForm {
    fn at(l: &DiffOperator, minpoly: &UPoly) -> Self {
        let field = NumberField::new(minpoly);
        let c = field.gen();
        let coeffs: Vec<Vec<Elem>> = derivative_form(l).iter().map(|p| taylor_at(&field, p, &c)).collect();
        let mut delta = i64::MAX;
        for (k, row) in coeffs.iter().enumerate() {
            if let Some(lv) = row.iter().position(|x| !x.is_zero()) {
                delta = delta.min(lv as i64 - k as i64);
            }
        }
        LocalForm { field, coeffs, delta }
    }

    fn f(&self, h: i64, mu: &Q) -> Elem {
        let k = &self.field;
        let mut acc = UPoly::zero();
        for (kk, row) in self.coeffs.iter().enumerate() {
            let l = h + kk as i64;
            if l < 0 || l as usize >= row.len() || row[l as usize].is_zero() {
                continue;
            }
            acc = k.add(&acc, &k.mul(&row[l as usize], &falling(k, mu, kk)));
        }
        acc
    }

    /// The indicial polynomial `f_delta(lambda)` as a polynomial with coefficients in `K`.
    fn indicial(&self) -> Vec<Elem> {
        let k = &self.field;
        let mut poly: Vec<Elem> = vec![UPoly::zero()];
        for (kk, row) in self.coeffs.iter().enumerate() {
            let l = self.delta + kk as i64;
            if l < 0 || l as usize >= row.len() || row[l as usize].is_zero() {
                continue;
            }
            // [lambda]_kk as a rational polynomial
            let mut ff = UPoly::one();
            for i in 0..kk {
                ff = &ff * &UPoly::new(vec![q(-(i as i64)), Q::one()]);
            }
            if poly.len() < ff.coeffs().len() {
                poly.resize(ff.coeffs().len(), UPoly::zero());
            }
            for (i, a) in ff.coeffs().iter().enumerate() {
                poly[i] = k.add(&poly[i], &k.mul(&row[l as usize], &k.from_q(a)));
            }
        }
        poly
    }

    fn max_shift(&self) -> i64 {
        self.coeffs.iter().enumerate().map(|(kk, row)| row.len() as i64 - 1 - kk as i64).max().unwrap_or(0)
    }
}

/// Indicial exponents at a point.
pub fn indicial_exponents(l: &DiffOperator, point: &Location) -> Exponents {
    match point {
        Location::Zero => Exponents::from_poly(l.beta_row(0)),
        Location::Infinity => {
            let d = l.degree();
            // u = 1/t, D_t = -D_u
            let row = l.beta_row(d);
            let flipped: Vec<Q> = row.coeffs().iter().enumerate().map(|(j, b)| if j % 2 == 1 { -b } else { b.clone() }).collect();
            Exponents::from_poly(UPoly::new(flipped))
        }
        Location::Rational(a) => finite_exponents(l, &UPoly::new(vec![-a.clone(), Q::one()])),
        Location::Algebraic { minpoly, .. } => finite_exponents(l, minpoly),
    }
}

fn finite_exponents(l: &DiffOperator, minpoly: &UPoly) -> Exponents {
    let lf = LocalForm::at(l, minpoly);
    let k = &lf.field;
    let poly = lf.indicial();
    let lead = poly.iter().rev().find(|x| !x.is_zero()).cloned().unwrap_or_else(UPoly::one);
    let inv = k.inv(&lead).expect("nonzero");
    let monic: Vec<Option<Q>> = poly.iter().map(|x| k.as_rational(&k.mul(x, &inv))).collect();
    if monic.iter().any(|x| x.is_none()) {
        return Exponents { rational: vec![], complete: false, poly: None };
    }
    Exponents::from_poly(UPoly::new(monic.into_iter().map(|x| x.unwrap()).collect()))
}

impl DiffOperator {
    /// `sum_j beta_ij lambda^j` for a fixed `i`.
    pub fn beta_row(&self, i: usize) -> UPoly {
        UPoly::new(self.beta.get(i).cloned().unwrap_or_default())
    }
}

/// Decides whether a finite point is an apparent singularity by running the Frobenius recursion
/// for every exponent to `depth` terms.
pub fn is_apparent(l: &DiffOperator, point: &Location, depth: usize) -> Apparentness {
    let minpoly = match point {
        Location::Rational(a) => UPoly::new(vec![-a.clone(), Q::one()]),
        Location::Algebraic { minpoly, .. } => minpoly.clone(),
        Location::Zero | Location::Infinity => return Apparentness::Undetermined,
    };
    let ex = finite_exponents(l, &minpoly);
    if !ex.complete {
        return Apparentness::Undetermined;
    }
    let rho = &ex.rational;
    let distinct = rho.windows(2).all(|w| w[0] != w[1]);
    if !distinct || rho.iter().any(|x| !x.is_integer() || x.is_negative()) {
        return Apparentness::Genuine;
    }
    let lf = LocalForm::at(l, &minpoly);
    let k = &lf.field;
    let hmax = lf.max_shift() - lf.delta;
    for r0 in rho {
        let mut a: Vec<Elem> = vec![k.from_q(&Q::one())];
        for n in 1..=depth {
            let mut rhs = UPoly::zero();
            for h in 1..=(hmax.min(n as i64)) {
                let prev = &a[n - h as usize];
                if prev.is_zero() {
                    continue;
                }
                let mu = r0 + q(n as i64 - h);
                rhs = k.sub(&rhs, &k.mul(prev, &lf.f(lf.delta + h, &mu)));
            }
            let lead = lf.f(lf.delta, &(r0 + q(n as i64)));
            if lead.is_zero() {
                if !rhs.is_zero() {
                    return Apparentness::Genuine;
                }
                a.push(UPoly::zero());
            } else {
                a.push(k.div(&rhs, &lead).unwrap());
            }
        }
    }
    Apparentness::Apparent
}

/// Singular points with the finite nonzero candidates screened by [`is_apparent`].
pub fn screened_singular_points(l: &DiffOperator, digits: u32, depth: usize) -> Vec<SingularPoint> {
    let mut pts = singular_points(l, digits);
    for p in pts.iter_mut() {
        p.status = match p.location {
            Location::Zero | Location::Infinity => Apparentness::Genuine,
            _ => is_apparent(l, &p.location, depth),
        };
    }
    pts
}

/// The non-apparent finite singular point of largest modulus.
pub fn t_max(points: &[SingularPoint]) -> Option<&SingularPoint> {
    points
        .iter()
        .filter(|p| p.is_finite_nonzero() && p.status != Apparentness::Apparent)
        .max_by(|a, b| a.modulus().unwrap().v.cmp(&b.modulus().unwrap().v))
}

/// Numeric value of a point as `f64` pair (for display).
pub fn approx(p: &SingularPoint) -> Option<(f64, f64)> {
    p.value.as_ref().map(|v| (v.re.to_f64(), v.im.to_f64()))
}

/// Degree in `s = t^i` when the operator only involves powers of `t^i`.
pub fn degree_in_s(l: &DiffOperator, i: usize) -> Option<usize> {
    let i = i.max(1);
    (0..=l.degree()).all(|k| k % i == 0 || l.beta_row(k).is_zero()).then(|| l.degree() / i)
}

/// Number of terms actually required to guess an operator of shape `(r, d)` with `bounds`.
pub fn required_terms(bounds: &GuessBounds, r: usize, d: usize, compression: usize) -> usize {
    (bounds.terms_needed(r, d) - 1) * compression + 1
}

/// Parses a rational exponent multiset such as `["0", "1/3"]`.
pub fn parse_exponents(xs: &[&str]) -> Option<Vec<Q>> {
    xs.iter().map(|s| parse_q(s)).collect()
}

#[allow(dead_code)]
fn to_i64(x: &Q) -> Option<i64> {
    x.is_integer().then(|| x.to_integer().to_i64()).flatten()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{qf, working_precision};

    fn seq(v: &[i64]) -> PeriodSequence {
        PeriodSequence::new(v.iter().map(|&x| q(x)).collect(), "test")
    }

    fn binom_central(n: usize) -> Vec<i64> {
        (0..n).map(|k| crate::arith::binomial(2 * k as u64, k as u64).to_i64().unwrap()).collect()
    }

    #[test]
    fn geometric_and_binomial() {
        let l = annihilator(&seq(&[1; 20]), GuessBounds::new(2, 2)).unwrap();
        assert!(l.equivalent(&DiffOperator::parse("(1 - t) D - t").unwrap()));
        let l = annihilator(&seq(&binom_central(20)), GuessBounds::new(2, 2)).unwrap();
        assert!(l.equivalent(&DiffOperator::parse("(1 - 4 t) D - 2 t").unwrap()));
        // interleaved zeros are compressed and pulled back
        let mut z = Vec::new();
        for c in binom_central(20) {
            z.push(c);
            z.push(0);
        }
        let l2 = annihilator(&seq(&z), GuessBounds::new(2, 3)).unwrap();
        assert!(l2.equivalent(&DiffOperator::parse("(1 - 4 t^2) D - 4 t^2").unwrap()));
    }

    #[test]
    fn apply_basics() {
        let d = DiffOperator::parse("D").unwrap();
        assert_eq!(d.apply(&[q(5), q(5), q(5)]), vec![q(0), q(5), q(10)]);
        let l = DiffOperator::parse("(1 - t) D - t").unwrap();
        assert!(l.apply(&vec![q(1); 8]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn apery_recurrence() {
        let l = DiffOperator::parse("D^3 - t (34 D^3 + 51 D^2 + 27 D + 5) + t^2 (D + 1)^3").unwrap();
        let rec = l.to_recurrence(1).unwrap();
        assert_eq!(rec.span, 2);
        assert_eq!(rec.poly(0), UPoly::from_i64(&[0, 0, 0, 1]));
        assert_eq!(rec.poly(1), UPoly::from_i64(&[5, -27, 51, -34]));
        assert_eq!(rec.poly(2), UPoly::from_i64(&[-1, 3, -3, 1]));
        assert!(rec.satisfied_by(&[q(1), q(5), q(73), q(1445), q(33001)]));
        assert!(rec.to_operator().equivalent(&l));
        let g = DiffOperator::parse("(1 - t) D - t").unwrap().to_recurrence(1).unwrap();
        assert_eq!(g.poly(0), UPoly::from_i64(&[0, 1]));
        assert_eq!(g.poly(1), UPoly::from_i64(&[0, -1]));
    }

    #[test]
    fn pullback_scaling() {
        let l = DiffOperator::parse("(1 - 4 t) D - 2 t").unwrap();
        assert_eq!(l.pullback(1), l.normalized());
        let p = l.pullback(2);
        assert!(p.equivalent(&DiffOperator::parse("(1 - 4 t^2) D - 4 t^2").unwrap()));
        assert!(matches!(p.to_recurrence(2), Ok(r) if r.span == 1));
        assert_eq!(p.to_recurrence(3), Err(PfError::IncompatibleIndex(3)));
    }

    #[test]
    fn singular_points_and_exponents() {
        let l = DiffOperator::parse("(1 - t) D - t").unwrap();
        let pts = singular_points(&l, 30);
        assert_eq!(pts.len(), 3);
        assert_eq!(pts[1].location, Location::Rational(q(1)));
        assert_eq!(is_apparent(&l, &pts[1].location, 20), Apparentness::Genuine);
        assert_eq!(indicial_exponents(&l, &pts[1].location).rational, vec![q(-1)]);
        let b = DiffOperator::parse("(1 - 4 t) D - 2 t").unwrap();
        assert_eq!(indicial_exponents(&b, &Location::Zero).rational, vec![q(0)]);
        assert_eq!(indicial_exponents(&b, &Location::Infinity).rational, vec![qf(1, 2)]);
        // quadratic point: t^2 - 2
        let c = DiffOperator::parse("(t^2 - 2) D - t").unwrap();
        let pts = singular_points(&c, working_precision().min(40));
        let roots: Vec<_> = pts.iter().filter(|p| p.is_finite_nonzero()).collect();
        assert_eq!(roots.len(), 2);
        assert!(roots[0].value.as_ref().unwrap().re.is_negative());
        assert_eq!(roots[1].value.as_ref().unwrap().re.to_decimal(10), "1.4142135623");
    }

    #[test]
    fn apparent_point() {
        // y = 1 + (t - 1)^2 ... solutions 1 and (t-1)^3 around t = 1: exponents 0 and 3
        // L = (t - 1) d^2 - 2 d  in d/dt-form; D-form: (t - 1)(D^2 - D) - 2 t D
        let l = DiffOperator::parse("(t - 1) D^2 - (t - 1) D - 2 t D").unwrap();
        let p = Location::Rational(q(1));
        assert_eq!(indicial_exponents(&l, &p).rational, vec![q(0), q(3)]);
        assert_eq!(is_apparent(&l, &p, 30), Apparentness::Apparent);
    }

    #[test]
    fn json_round_trip() {
        let l = DiffOperator::parse("(1 - 4 t) D - 2 t").unwrap();
        let j = l.to_json();
        assert_eq!(j.order, 1);
        assert_eq!(DiffOperator::from_json(&j).unwrap(), l);
        assert_eq!(format!("{l}"), "(-4*t + 1) D + (-2*t)");
    }
}
