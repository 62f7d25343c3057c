//! Mutations of Laurent polynomials.

use super::LaurentPolynomial;
use crate::arith::dot;
use crate::mpoly::div_exact;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MutationError {
    #[error("weight vector must be primitive and of matching dimension")]
    BadWeight,
    #[error("factor is not supported on the orthogonal complement of the weight")]
    FactorNotOrthogonal,
    #[error("factor^{power} does not divide the coefficient at grade {grade}")]
    NotDivisible { grade: i64, power: u32 },
}

/// A mutation datum: grading `w` and a factor `h` of degree zero for `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationSpec {
    pub weight: Vec<i64>,
    pub factor: LaurentPolynomial,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MutationJson {
    pub weight: Vec<i64>,
    pub factor: String,
}

/// Splits `p` into its homogeneous pieces for the grading `e -> <w, e>`.
pub fn graded_pieces(p: &LaurentPolynomial, w: &[i64]) -> std::collections::BTreeMap<i64, LaurentPolynomial> {
    let mut out = std::collections::BTreeMap::new();
    for (e, c) in p.terms() {
        out.entry(dot(w, e)).or_insert_with(|| LaurentPolynomial::zero(p.nvars())).add_term(e.clone(), c.clone());
    }
    out
}

/// Replaces each graded piece `C_k` by `C_k * h^k`.
pub fn mutate(p: &LaurentPolynomial, spec: &MutationSpec) -> Result<LaurentPolynomial, MutationError> {
    let w = &spec.weight;
    if w.len() != p.nvars() || spec.factor.nvars() != p.nvars() || crate::arith::gcd_slice(w) != 1 {
        return Err(MutationError::BadWeight);
    }
    if spec.factor.is_zero() || spec.factor.terms().keys().any(|e| dot(w, e) != 0) {
        return Err(MutationError::FactorNotOrthogonal);
    }
    let mut out = LaurentPolynomial::zero(p.nvars());
    for (k, c) in graded_pieces(p, w) {
        let hk = spec.factor.pow(k.unsigned_abs() as u32);
        let term = if k >= 0 {
            &c * &hk
        } else {
            div_exact(&c, &hk).ok_or(MutationError::NotDivisible { grade: k, power: (-k) as u32 })?
        };
        out = &out + &term;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse_with_vars;

    fn p(s: &str) -> LaurentPolynomial {
        parse_with_vars(s, &["x".to_string(), "y".to_string()]).unwrap().poly
    }

    #[test]
    fn mutation_examples() {
        let spec = MutationSpec { weight: vec![0, 1], factor: p("1 + x") };
        let m = mutate(&p("y + (1+x)^2/y"), &spec).unwrap();
        assert_eq!(m, p("(1+x)*y + (1+x)/y"));
        let id = MutationSpec { weight: vec![0, 1], factor: p("1") };
        assert_eq!(mutate(&p("y + x/y"), &id).unwrap(), p("y + x/y"));
        assert!(matches!(mutate(&p("y + 1/y"), &spec), Err(MutationError::NotDivisible { .. })));
        let bad = MutationSpec { weight: vec![0, 1], factor: p("1 + y") };
        assert_eq!(mutate(&p("y"), &bad), Err(MutationError::FactorNotOrthogonal));
    }
}
