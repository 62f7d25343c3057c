//! Face-by-face certification: cyclotomic edges, width-one factors, total
//! rationality, weak non-degeneracy, and the aggregate amenability verdicts.
//!
//! Zero sets live in the torus. Smoothness and rationality questions are decided
//! with Groebner bases over Q (Rabinowitsch variable for the torus), after
//! eliminating a variable that enters linearly whenever a width-one form exists.

use super::{edge_polynomials, to_local_coordinates, width1_form, EdgePolynomial, Factorization, Factorizer, LaurentPolynomial};
use crate::arith::Q;
use crate::factor::{factor_q, is_cyclotomic_product, vanishes_only_at_roots_of_unity};
use crate::groebner::{dimension, elimination_polynomial, is_unit_ideal, torus_groebner};
use crate::lattice::LatticePolytope;
use crate::minkowski::{is_amenable_polytope, MinkowskiError};
use crate::mpoly::{divide_out, normalize};
use crate::triangulation::{fan_report, fine_report, in_generated_lattice, verify_regular, verify_star, verify_tiling, Triangulation};
use crate::upoly::UPoly;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Groebner reduction steps allowed per system before giving up.
pub const GROEBNER_BUDGET: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Check {
    Certified,
    Refuted,
    Undetermined,
}

impl Check {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Check::Certified
        } else {
            Check::Refuted
        }
    }

    /// Conjunction: any refutation wins, then any undetermined.
    pub fn and(self, o: Check) -> Check {
        match (self, o) {
            (Check::Refuted, _) | (_, Check::Refuted) => Check::Refuted,
            (Check::Undetermined, _) | (_, Check::Undetermined) => Check::Undetermined,
            _ => Check::Certified,
        }
    }

    pub fn all(it: impl IntoIterator<Item = Check>) -> Check {
        it.into_iter().fold(Check::Certified, Check::and)
    }

    pub fn is_certified(self) -> bool {
        self == Check::Certified
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Check::Certified => "certified",
            Check::Refuted => "refuted",
            Check::Undetermined => "undetermined",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    TooManyVariables(usize),
    Minkowski(MinkowskiError),
}

impl fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalysisError::TooManyVariables(m) => write!(f, "face analysis needs at most 3 variables, got {m}"),
            AnalysisError::Minkowski(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for AnalysisError {}

/// A failed smoothness test: the factor indices involved and what was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularWitness {
    pub components: Vec<usize>,
    /// Dimension of the singular locus in the torus.
    pub dimension: i64,
    /// Rational singular points, when the locus is finite and they are rational.
    pub points: Vec<Vec<Q>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceVerdict {
    /// Vertex indices of the face in the ambient Newton polytope; empty for a standalone polynomial.
    pub face: Vec<usize>,
    pub dim: usize,
    /// The face polynomial in intrinsic coordinates.
    pub polynomial: LaurentPolynomial,
    pub factorization: Factorization,
    pub cyclotomic_edges: Check,
    pub width1_factors: Check,
    pub rationality: Check,
    pub real_reducibility: Check,
    pub nondegeneracy: Check,
    pub singular: Vec<SingularWitness>,
}

impl FaceVerdict {
    /// Width-one factors, rational intersections and real-reducible `F = G = 0`.
    pub fn totally_rational(&self) -> Check {
        self.width1_factors.and(self.rationality).and(self.real_reducibility)
    }

    /// Newton polytopes of the irreducible factors with multiplicities.
    pub fn summands(&self) -> Vec<(LatticePolytope, usize)> {
        self.factorization.factors.iter().map(|f| (f.poly.newton_polytope(), f.multiplicity)).collect()
    }
}

/// Distinct irreducible components of the zero set, residue included.
fn components(f: &Factorization) -> Vec<LaurentPolynomial> {
    let mut out: Vec<LaurentPolynomial> = f.factors.iter().map(|g| g.poly.clone()).collect();
    if let Some(r) = &f.residue {
        out.push(normalize(r));
    }
    out
}

fn subsets(r: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..(1 << r)).map(move |mask| (0..r).filter(|i| mask & (1 << i) != 0).collect())
}

/// Analysis of a face polynomial in at most three variables.
pub fn analyze_face(q: &LaurentPolynomial) -> Result<FaceVerdict, AnalysisError> {
    analyze_face_with(q, &mut Factorizer::new())
}

pub fn analyze_face_with(q: &LaurentPolynomial, fz: &mut Factorizer) -> Result<FaceVerdict, AnalysisError> {
    let m = q.nvars();
    if m > 3 {
        return Err(AnalysisError::TooManyVariables(m));
    }
    let edges = edge_polynomials(q);
    let cyclotomic_edges = Check::from_bool(edges.iter().all(|e| is_cyclotomic_product(&e.poly)));
    let factorization = fz.factorize(q);
    let width1_factors = if factorization.all_width1() {
        Check::Certified
    } else if factorization.complete {
        Check::Refuted
    } else {
        Check::Undetermined
    };
    let comps = components(&factorization);
    let rationality = if comps.is_empty() {
        Check::Certified
    } else {
        Check::all(subsets(comps.len()).map(|j| {
            let sys: Vec<LaurentPolynomial> = j.iter().map(|&i| comps[i].clone()).collect();
            rational_locus(&sys, fz, 6)
        }))
    };
    let real_reducibility = if m < 3 {
        Check::Certified
    } else {
        Check::all(factorization.factors.iter().map(|f| match &f.width1 {
            Some(w) => real_reducible(&w.f, &w.g, fz),
            None => Check::Undetermined,
        }))
    };
    let (nondegeneracy, singular) = smooth_components(&comps);
    Ok(FaceVerdict {
        face: vec![],
        dim: q.newton_polytope().dim(),
        polynomial: q.clone(),
        factorization,
        cyclotomic_edges,
        width1_factors,
        rationality,
        real_reducibility,
        nondegeneracy,
        singular,
    })
}

fn log_gradient(g: &LaurentPolynomial, i: usize) -> LaurentPolynomial {
    &g.derivative(i) * &LaurentPolynomial::var(g.nvars(), i)
}

/// Determinant of a square matrix of polynomials by cofactor expansion.
fn det(rows: &[Vec<LaurentPolynomial>]) -> LaurentPolynomial {
    let k = rows.len();
    if k == 1 {
        return rows[0][0].clone();
    }
    let n = rows[0][0].nvars();
    let mut out = LaurentPolynomial::zero(n);
    for c in 0..k {
        let minor: Vec<Vec<LaurentPolynomial>> =
            rows[1..].iter().map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect()).collect();
        let term = &rows[0][c] * &det(&minor);
        out = if c % 2 == 0 { &out + &term } else { &out - &term };
    }
    out
}

/// Every subset of components meets transversally in the torus (each component smooth).
pub fn smooth_components(comps: &[LaurentPolynomial]) -> (Check, Vec<SingularWitness>) {
    let mut verdict = Check::Certified;
    let mut witnesses = Vec::new();
    let Some(first) = comps.first() else {
        return (verdict, witnesses);
    };
    let m = first.nvars();
    for j in subsets(comps.len()) {
        if j.len() > m {
            // more components than variables: only the empty intersection is smooth
            let sys: Vec<LaurentPolynomial> = j.iter().map(|&i| comps[i].clone()).collect();
            match torus_groebner(&sys, GROEBNER_BUDGET) {
                Ok(gb) if is_unit_ideal(&gb) => continue,
                Ok(gb) => {
                    verdict = verdict.and(Check::Refuted);
                    witnesses.push(SingularWitness { components: j, dimension: dimension(&gb, m + 1), points: vec![] });
                    continue;
                }
                Err(_) => {
                    verdict = verdict.and(Check::Undetermined);
                    continue;
                }
            }
        }
        let jac: Vec<Vec<LaurentPolynomial>> = j.iter().map(|&i| (0..m).map(|v| log_gradient(&comps[i], v)).collect()).collect();
        let mut sys: Vec<LaurentPolynomial> = j.iter().map(|&i| comps[i].clone()).collect();
        for cols in column_subsets(m, j.len()) {
            let sub: Vec<Vec<LaurentPolynomial>> = jac.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
            let d = det(&sub);
            if !d.is_zero() {
                sys.push(d);
            }
        }
        match torus_groebner(&sys, GROEBNER_BUDGET) {
            Ok(gb) if is_unit_ideal(&gb) => {}
            Ok(gb) => {
                let dim = dimension(&gb, m + 1);
                let points = if dim == 0 { rational_points(&sys) } else { vec![] };
                verdict = verdict.and(Check::Refuted);
                witnesses.push(SingularWitness { components: j, dimension: dim, points });
            }
            Err(_) => verdict = verdict.and(Check::Undetermined),
        }
    }
    (verdict, witnesses)
}

fn column_subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    subsets(m).filter(|s| s.len() == k).collect()
}

/// Rational solutions of a zero-dimensional torus system (by coordinate elimination).
fn rational_points(sys: &[LaurentPolynomial]) -> Vec<Vec<Q>> {
    let m = sys[0].nvars();
    let mut coords: Vec<Vec<Q>> = Vec::new();
    for i in 0..m {
        match elimination_polynomial(sys, i, GROEBNER_BUDGET) {
            Ok(Some(u)) => coords.push(u.rational_roots().into_iter().filter(|r| !r.is_zero()).collect()),
            _ => return vec![],
        }
    }
    let mut pts: Vec<Vec<Q>> = vec![vec![]];
    for c in &coords {
        pts = pts.iter().flat_map(|p| c.iter().map(move |x| [p.clone(), vec![x.clone()]].concat())).collect();
    }
    pts.into_iter().filter(|p| sys.iter().all(|g| g.eval(p).is_zero())).collect()
}

fn univariate(p: &LaurentPolynomial) -> UPoly {
    let (s, _) = p.normalize_shift();
    let deg = s.max_exponents()[0];
    UPoly::new((0..=deg).map(|k| s.coeff(&[k])).collect())
}

/// Whether every irreducible component of the torus zero set of `sys` is rational over Q.
fn rational_locus(sys: &[LaurentPolynomial], fz: &mut Factorizer, depth: usize) -> Check {
    let sys: Vec<LaurentPolynomial> = sys.iter().filter(|g| !g.is_zero()).map(normalize).collect();
    if sys.iter().any(|g| g.is_monomial()) {
        return Check::Certified;
    }
    let Some(first) = sys.first() else {
        return Check::Certified;
    };
    let m = first.nvars();
    if m == 0 {
        return Check::Certified;
    }
    // split a reducible generator into its components
    for (k, g) in sys.iter().enumerate() {
        let f = fz.factorize(g);
        let comps = components(&f);
        if comps.len() > 1 || f.factors.iter().any(|x| x.multiplicity > 1) {
            if depth == 0 {
                return Check::Undetermined;
            }
            return Check::all(comps.into_iter().map(|c| {
                let mut s = sys.clone();
                s[k] = c;
                rational_locus(&s, fz, depth - 1)
            }));
        }
    }
    if sys.len() == 1 {
        let g = &sys[0];
        if m == 1 {
            return Check::from_bool(univariate(g).degree() == 1);
        }
        return if width1_form(g).is_some() { Check::Certified } else { Check::Undetermined };
    }
    let gb = match torus_groebner(&sys, GROEBNER_BUDGET) {
        Ok(gb) => gb,
        Err(_) => return Check::Undetermined,
    };
    if is_unit_ideal(&gb) {
        return Check::Certified;
    }
    if dimension(&gb, m + 1) == 0 {
        let mut all_rational = true;
        for i in 0..m {
            match elimination_polynomial(&sys, i, GROEBNER_BUDGET) {
                Ok(Some(u)) => {
                    let (_, fs) = factor_q(&u);
                    all_rational &= fs.iter().all(|(f, _)| f.degree() <= 1);
                }
                _ => return Check::Undetermined,
            }
        }
        return Check::from_bool(all_rational);
    }
    if depth == 0 {
        return Check::Undetermined;
    }
    // eliminate the linear variable of a width-one generator
    let Some((k, form)) = sys.iter().enumerate().find_map(|(k, g)| width1_form(g).map(|w| (k, w))) else {
        return Check::Undetermined;
    };
    let last = m - 1;
    let f = form.f.insert_var(last);
    let g = form.g.insert_var(last);
    let mut reduced = Vec::new();
    let mut on_base = vec![form.f.clone(), form.g.clone()];
    let f_factors = components(&fz.factorize(&form.f));
    for (i, h) in sys.iter().enumerate() {
        if i == k {
            continue;
        }
        let t = h.transform(&form.transform);
        on_base.push(t.clone());
        let pieces = t.collect_in(last);
        let lo = *pieces.keys().next().unwrap();
        let hi = *pieces.keys().next_back().unwrap();
        let neg_g = -&g;
        let mut acc = LaurentPolynomial::zero(m);
        for (e, c) in &pieces {
            let term = &(c * &neg_g.pow((e - lo) as u32)) * &f.pow((hi - e) as u32);
            acc = &acc + &term;
        }
        let mut r = acc.drop_var(last);
        if r.is_zero() {
            continue;
        }
        for ff in &f_factors {
            r = divide_out(&r, ff).1;
        }
        reduced.push(r);
    }
    let open_part = rational_locus(&reduced, fz, depth - 1);
    // the part over F = G = 0, where the eliminated variable is free
    let base = if on_base[0].is_monomial() || on_base[1].is_monomial() {
        Check::Certified
    } else {
        let mut sys2: Vec<LaurentPolynomial> = on_base.drain(..2).map(|x| x.insert_var(last)).collect();
        sys2.extend(on_base);
        rational_locus(&sys2, fz, depth - 1)
    };
    match open_part.and(base) {
        Check::Certified => Check::Certified,
        _ => Check::Undetermined,
    }
}

/// `F = G = 0` in the two-dimensional torus splits into real points and rational curves.
fn real_reducible(f: &LaurentPolynomial, g: &LaurentPolynomial, fz: &mut Factorizer) -> Check {
    if f.is_monomial() || g.is_monomial() {
        return Check::Certified;
    }
    let common = crate::mpoly::gcd(f, g);
    let mut verdict = Check::Certified;
    let (mut f1, mut g1) = (f.clone(), g.clone());
    if !common.is_monomial() {
        for c in components(&fz.factorize(&common)) {
            if width1_form(&c).is_none() {
                verdict = verdict.and(Check::Undetermined);
            }
            f1 = divide_out(&f1, &c).1;
            g1 = divide_out(&g1, &c).1;
        }
        if f1.is_monomial() || g1.is_monomial() {
            return verdict;
        }
    }
    let sys = [f1, g1];
    match torus_groebner(&sys, GROEBNER_BUDGET) {
        Ok(gb) if is_unit_ideal(&gb) => return verdict,
        Ok(_) => {}
        Err(_) => return Check::Undetermined,
    }
    for i in 0..sys[0].nvars() {
        match elimination_polynomial(&sys, i, GROEBNER_BUDGET) {
            Ok(Some(u)) => {
                let sf = u.squarefree_part();
                let b = sf.root_bound();
                let real = sf.count_real_roots(&(-&b - Q::from_integer(1.into())), &b);
                if real != sf.degree() as usize {
                    return Check::Refuted;
                }
            }
            _ => return Check::Undetermined,
        }
    }
    verdict
}

/// Non-degeneracy verdicts for every face of dimension at least one.
pub fn weak_nondegeneracy(p: &LaurentPolynomial) -> Vec<FaceVerdict> {
    face_verdicts(p).into_iter().filter_map(Result::ok).collect()
}

fn face_verdicts(p: &LaurentPolynomial) -> Vec<Result<FaceVerdict, AnalysisError>> {
    let newton = p.newton_polytope();
    let mut fz = Factorizer::new();
    newton
        .face_index_sets()
        .into_iter()
        .filter(|(d, _)| *d >= 1 && *d < newton.dim())
        .map(|(_, idx)| {
            let face = newton.sub_polytope(&idx);
            let fp = p.filter(|e| face.contains(e));
            let local = to_local_coordinates(&fp, &face);
            analyze_face_with(&local, &mut fz).map(|mut v| {
                v.face = idx;
                v
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeVerdict {
    pub edge: EdgePolynomial,
    pub cyclotomic: bool,
    pub roots_of_unity: bool,
}

#[derive(Debug, Clone)]
pub struct TriangulationVerdict {
    pub dual_matches: bool,
    pub star: bool,
    pub tiling: bool,
    pub regular: bool,
    pub fine: bool,
    pub smooth: bool,
    pub missing_points: usize,
    /// Index of the sublattice spanned by the triangulation's points.
    pub sublattice_index: u128,
    /// Fineness and smoothness re-checked in that sublattice.
    pub fine_in_sublattice: bool,
    pub smooth_in_sublattice: bool,
}

impl TriangulationVerdict {
    pub fn ok(&self) -> bool {
        self.dual_matches && self.star && self.tiling && self.regular && self.fine && self.smooth
    }
}

#[derive(Debug, Clone)]
pub struct AmenabilityReport {
    pub nvars: usize,
    pub reflexive: bool,
    pub edges: Vec<EdgeVerdict>,
    pub polytope_amenable: Check,
    pub coherent_datum: bool,
    pub faces: Vec<FaceVerdict>,
    pub nondegenerate: Check,
    pub totally_rational: Check,
    pub triangulation: Option<TriangulationVerdict>,
    pub weakly_amenable: Check,
    pub amenable: Check,
    pub strictly_amenable: Check,
}

/// Checks a triangulation of the dual of the Newton polytope.
pub fn check_triangulation(newton: &LatticePolytope, t: &Triangulation) -> TriangulationVerdict {
    let hull = t.hull();
    let dual_matches = match (&hull, newton.dual()) {
        (Ok(h), Ok(d)) => crate::lattice::linear_equivalence(&d, h).is_some(),
        _ => false,
    };
    let star = verify_star(t);
    let tiling = verify_tiling(t).map(|r| r.ok()).unwrap_or(false);
    let regular = verify_regular(t).is_some();
    let (fine, missing_points, smooth) = match &hull {
        Ok(h) => {
            let fr = fine_report(t, h);
            let smooth = fan_report(t, h).map(|f| f.smooth()).unwrap_or(false);
            (fr.ok(), fr.missing_boundary.len() + fr.missing_interior.len(), smooth)
        }
        Err(_) => (false, 0, false),
    };
    let (sublattice_index, fine_in_sublattice, smooth_in_sublattice) = match in_generated_lattice(t) {
        Ok((sub, index)) => match sub.hull() {
            Ok(h) => (index, fine_report(&sub, &h).ok(), fan_report(&sub, &h).map(|f| f.smooth()).unwrap_or(false)),
            Err(_) => (index, false, false),
        },
        Err(_) => (0, false, false),
    };
    TriangulationVerdict { dual_matches, star, tiling, regular, fine, smooth, missing_points, sublattice_index, fine_in_sublattice, smooth_in_sublattice }
}

/// Weak, plain and strict amenability with all sub-verdicts.
pub fn amenability_report(p: &LaurentPolynomial, triangulation: Option<&Triangulation>) -> Result<AmenabilityReport, AnalysisError> {
    let n = p.nvars();
    let newton = p.newton_polytope();
    let reflexive = newton.is_reflexive().unwrap_or(false);
    let edges: Vec<EdgeVerdict> = edge_polynomials(p)
        .into_iter()
        .map(|e| EdgeVerdict {
            cyclotomic: is_cyclotomic_product(&e.poly),
            roots_of_unity: vanishes_only_at_roots_of_unity(&e.poly),
            edge: e,
        })
        .collect();
    let (polytope_amenable, coherent_datum) = if reflexive {
        match is_amenable_polytope(&newton) {
            Ok(r) => (Check::from_bool(r.amenable), r.coherent),
            Err(MinkowskiError::DimensionTooLarge(_)) => (Check::Undetermined, false),
            Err(e) => return Err(AnalysisError::Minkowski(e)),
        }
    } else {
        (Check::Refuted, false)
    };
    let faces: Vec<FaceVerdict> = face_verdicts(p).into_iter().collect::<Result<_, _>>()?;
    let nondegenerate = Check::all(faces.iter().map(|f| f.nondegeneracy));
    let totally_rational = if n == 4 { Check::all(faces.iter().map(|f| f.totally_rational())) } else { Check::Certified };
    let base = nondegenerate.and(polytope_amenable);
    let weakly_amenable = base.and(Check::from_bool(edges.iter().all(|e| e.roots_of_unity)));
    let amenable = base.and(Check::from_bool(edges.iter().all(|e| e.cyclotomic))).and(totally_rational);
    let tri = triangulation.map(|t| check_triangulation(&newton, t));
    let strictly_amenable = if n < 4 {
        amenable
    } else {
        match &tri {
            Some(t) if t.ok() => amenable,
            Some(_) => amenable.and(Check::Undetermined),
            None => amenable.and(Check::Undetermined),
        }
    };
    Ok(AmenabilityReport {
        nvars: n,
        reflexive,
        edges,
        polytope_amenable,
        coherent_datum,
        faces,
        nondegenerate,
        totally_rational,
        triangulation: tri,
        weakly_amenable,
        amenable,
        strictly_amenable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse_with_vars;
    use num_traits::Signed;

    fn p(s: &str) -> LaurentPolynomial {
        let v: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        parse_with_vars(s, &v).unwrap().poly
    }

    fn p2(s: &str) -> LaurentPolynomial {
        let v: Vec<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
        parse_with_vars(s, &v).unwrap().poly
    }

    #[test]
    fn facet_product_is_certified() {
        let v = analyze_face(&p("(z + 1)*(y*z + y + 1)*(x*y + x + 1)^3")).unwrap();
        assert_eq!(v.width1_factors, Check::Certified);
        assert_eq!(v.rationality, Check::Certified);
        assert_eq!(v.real_reducibility, Check::Certified);
        assert_eq!(v.nondegeneracy, Check::Certified);
        assert_eq!(v.cyclotomic_edges, Check::Certified);
    }

    #[test]
    fn an_type_binomial() {
        let v = analyze_face(&p2("(1 + y)^3 + x")).unwrap();
        assert_eq!(v.factorization.factors.len(), 1);
        assert_eq!(v.width1_factors, Check::Certified);
        assert_eq!(v.nondegeneracy, Check::Certified);
    }

    #[test]
    fn wide_factor_is_refuted() {
        let v = analyze_face(&p2("x^2 + y^2 + 1")).unwrap();
        assert_eq!(v.width1_factors, Check::Refuted);
    }

    #[test]
    fn doubled_point_is_smooth() {
        let q = LaurentPolynomial::from_terms(1, [(vec![0], Q::from_integer(1.into())), (vec![1], Q::from_integer(2.into())), (vec![2], Q::from_integer(1.into()))]);
        let v = analyze_face(&q).unwrap();
        assert_eq!(v.nondegeneracy, Check::Certified);
        assert_eq!(v.factorization.factors[0].multiplicity, 2);
    }

    #[test]
    fn node_is_refuted_with_witness() {
        let v = analyze_face(&p2("(y - 1)^2 - (x - 1)^2*x")).unwrap();
        assert_eq!(v.nondegeneracy, Check::Refuted);
        let one = Q::from_integer(1.into());
        assert_eq!(v.singular[0].points, vec![vec![one.clone(), one]]);
    }

    #[test]
    fn tangent_components_are_refuted() {
        // y = 1 + (x-1)^2 touches y = 1 at x = 1
        let v = analyze_face(&p2("(y - 1)*(y - 1 - (x - 1)^2)")).unwrap();
        assert_eq!(v.nondegeneracy, Check::Refuted);
        // transversal lines are fine
        let v = analyze_face(&p2("(y - 2)*(x - 3)")).unwrap();
        assert_eq!(v.nondegeneracy, Check::Certified);
        assert_eq!(v.rationality, Check::Certified);
    }

    #[test]
    fn irrational_intersection_is_refuted() {
        // y = x and x y = 2 meet at x = ±sqrt 2
        let v = analyze_face(&p2("(y - x)*(x*y - 2)")).unwrap();
        assert_eq!(v.rationality, Check::Refuted);
    }

    #[test]
    fn real_reducibility_of_f_g() {
        // F = x^2 - 2, G = y - 1: real points
        let v = analyze_face(&p("(x^2 - 2)*z + y - 1")).unwrap();
        assert_eq!(v.real_reducibility, Check::Certified);
        // F = x^2 + 1 has no real points
        let v = analyze_face(&p("(x^2 + 1)*z + y - 1")).unwrap();
        assert_eq!(v.real_reducibility, Check::Refuted);
    }

    #[test]
    fn plane_reports() {
        let r = amenability_report(&p2("x + y + x^-1*y^-1"), None).unwrap();
        assert!(r.reflexive);
        assert_eq!(r.weakly_amenable, Check::Certified);
        assert_eq!(r.amenable, Check::Certified);
        assert_eq!(r.strictly_amenable, Check::Certified);
        let r = amenability_report(&p2("3*x + y + x^-1*y^-1"), None).unwrap();
        assert_eq!(r.weakly_amenable, Check::Refuted);
        let bad = r.edges.iter().find(|e| !e.roots_of_unity).unwrap();
        assert!(bad.edge.poly.coeffs().iter().any(|c| c.abs() == Q::from_integer(3.into())));
    }

    #[test]
    fn too_many_variables() {
        let v: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let q = parse_with_vars("a + b + c + d + 1", &v).unwrap().poly;
        assert_eq!(analyze_face(&q).unwrap_err(), AnalysisError::TooManyVariables(4));
    }

    #[test]
    fn corpus_case_b() {
        let e = crate::corpus::entry("lg_1_1_gr25").unwrap();
        let poly = e.laurent().unwrap().unwrap();
        let t = Triangulation::from_value(e.triangulation.as_ref().unwrap()).unwrap();
        let r = amenability_report(&poly, Some(&t)).unwrap();
        assert_eq!(r.amenable, Check::Certified);
        assert!(r.coherent_datum);
        // the given triangulation is fine and unimodular only in the sublattice its points span
        let tv = r.triangulation.unwrap();
        assert!(tv.dual_matches && tv.star && tv.regular && !tv.fine && !tv.smooth);
        assert_eq!(tv.sublattice_index, 27);
        assert!(tv.fine_in_sublattice && tv.smooth_in_sublattice);
        assert_eq!(r.strictly_amenable, Check::Undetermined);
    }
}
