//! Face and edge polynomials.

use super::LaurentPolynomial;
use crate::arith::{gcd_slice, Q};
use crate::lattice::LatticePolytope;
use crate::upoly::UPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FaceError {
    #[error("not a face of the Newton polytope")]
    NotAFace,
    #[error("zero polynomial has no Newton polytope")]
    ZeroPolynomial,
}

/// Restriction of `p` to the terms lying on `face` (original coordinates).
pub fn face_polynomial(p: &LaurentPolynomial, face: &LatticePolytope) -> Result<LaurentPolynomial, FaceError> {
    if p.is_zero() {
        return Err(FaceError::ZeroPolynomial);
    }
    let newton = p.newton_polytope();
    let mut fv = face.vertices().to_vec();
    fv.sort();
    let is_face = newton.face_index_sets().iter().any(|(_, idx)| {
        let mut v: Vec<Vec<i64>> = idx.iter().map(|&i| newton.vertices()[i].clone()).collect();
        v.sort();
        v == fv
    });
    if !is_face {
        return Err(FaceError::NotAFace);
    }
    Ok(p.filter(|e| face.contains(e)))
}

/// A face polynomial re-expressed in the intrinsic lattice of the face, shifted so every
/// variable has minimum exponent 0.
pub fn local_face_polynomial(p: &LaurentPolynomial, face: &LatticePolytope) -> Result<LaurentPolynomial, FaceError> {
    let f = face_polynomial(p, face)?;
    Ok(to_local_coordinates(&f, face))
}

/// Re-coordinatizes a polynomial supported on the affine hull of `face`.
pub fn to_local_coordinates(f: &LaurentPolynomial, face: &LatticePolytope) -> LaurentPolynomial {
    let frame = face.frame();
    let q = LaurentPolynomial::from_terms(frame.dim, f.terms().iter().map(|(e, c)| (frame.local(e), c.clone())));
    q.normalize_shift().0
}

/// An edge of the Newton polytope with its univariate polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgePolynomial {
    pub start: Vec<i64>,
    pub end: Vec<i64>,
    /// Coefficients read from `start` along the primitive edge direction.
    pub poly: UPoly,
}

/// Edge polynomials of all edges of the Newton polytope, lexicographic by endpoints.
pub fn edge_polynomials(p: &LaurentPolynomial) -> Vec<EdgePolynomial> {
    if p.is_zero() {
        return vec![];
    }
    let newton = p.newton_polytope();
    if newton.dim() == 0 {
        return vec![];
    }
    let v = newton.vertices();
    let mut out: Vec<EdgePolynomial> = newton
        .edges()
        .into_iter()
        .map(|(i, j)| {
            let (a, b) = if v[i] <= v[j] { (&v[i], &v[j]) } else { (&v[j], &v[i]) };
            edge_polynomial(p, a, b)
        })
        .collect();
    out.sort_by(|x, y| (&x.start, &x.end).cmp(&(&y.start, &y.end)));
    out
}

/// Coefficients of `p` along the lattice segment from `a` to `b`.
pub fn edge_polynomial(p: &LaurentPolynomial, a: &[i64], b: &[i64]) -> EdgePolynomial {
    let d: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let g = gcd_slice(&d);
    let step: Vec<i64> = d.iter().map(|x| x / g).collect();
    let coeffs: Vec<Q> = (0..=g)
        .map(|k| {
            let e: Vec<i64> = a.iter().zip(&step).map(|(x, s)| x + k * s).collect();
            p.coeff(&e)
        })
        .collect();
    EdgePolynomial { start: a.to_vec(), end: b.to_vec(), poly: UPoly::new(coeffs) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse_poly;

    #[test]
    fn face_restriction() {
        let p = parse_poly("x + y + 1/(x*y)").unwrap();
        let e = LatticePolytope::hull(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(face_polynomial(&p, &e).unwrap(), parse_poly("x + y").unwrap());
        let full = p.newton_polytope();
        assert_eq!(face_polynomial(&p, &full).unwrap(), p);
        let bad = LatticePolytope::hull(&[vec![1, 0], vec![0, 0]]).unwrap();
        assert_eq!(face_polynomial(&p, &bad), Err(FaceError::NotAFace));
    }

    #[test]
    fn edges() {
        let p = parse_poly("(1+x)^2 + y").unwrap();
        let es = edge_polynomials(&p);
        assert_eq!(es.len(), 3);
        let bottom = es.iter().find(|e| e.start == vec![0, 0] && e.end == vec![2, 0]).unwrap();
        assert_eq!(bottom.poly, UPoly::from_i64(&[1, 2, 1]));
        let q = parse_poly("x + 2*y").unwrap();
        let es = edge_polynomials(&q);
        assert_eq!(es[0].poly, UPoly::from_i64(&[2, 1]));
    }
}
