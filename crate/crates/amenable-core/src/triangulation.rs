//! Checks for triangulations of lattice polytopes: star property, fineness,
//! regularity (with an explicit lifting) and unimodularity of the induced fan.

use crate::arith::Q;
use crate::lattice::LatticePolytope;
use crate::linalg::{det_i64, rational_solve};
use crate::lp::{maximize_le, LpResult};
use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TriangulationError {
    #[error("simplex {0} does not have dim + 1 vertices")]
    Arity(usize),
    #[error("index {0} out of range")]
    Index(usize),
    #[error("simplex {0} is degenerate")]
    Degenerate(usize),
    #[error("points are not full-dimensional")]
    NotFullDimensional,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangulation {
    pub points: Vec<Vec<i64>>,
    pub simplices: Vec<Vec<usize>>,
    #[serde(rename = "star")]
    pub star_point: usize,
}

/// Rational heights certifying regularity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftingWeights {
    pub heights: Vec<Q>,
}

impl Triangulation {
    pub fn new(points: Vec<Vec<i64>>, simplices: Vec<Vec<usize>>, star_point: usize) -> Result<Self, TriangulationError> {
        let t = Triangulation { points, simplices, star_point };
        t.validate()?;
        Ok(t)
    }

    pub fn from_value(v: &serde_json::Value) -> Result<Self, String> {
        let t: Triangulation = serde_json::from_value(v.clone()).map_err(|e| e.to_string())?;
        t.validate().map_err(|e| e.to_string())?;
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, |p| p.len())
    }

    fn validate(&self) -> Result<(), TriangulationError> {
        let d = self.dim();
        for (k, s) in self.simplices.iter().enumerate() {
            if s.len() != d + 1 {
                return Err(TriangulationError::Arity(k));
            }
            if let Some(&i) = s.iter().find(|&&i| i >= self.points.len()) {
                return Err(TriangulationError::Index(i));
            }
        }
        if self.star_point >= self.points.len() {
            return Err(TriangulationError::Index(self.star_point));
        }
        Ok(())
    }

    /// Signed `d!`-volume of a simplex.
    pub fn simplex_volume(&self, s: &[usize]) -> i128 {
        let base = &self.points[s[0]];
        let m: Vec<Vec<i64>> = s[1..].iter().map(|&i| self.points[i].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
        det_i64(&m)
    }

    pub fn hull(&self) -> Result<LatticePolytope, TriangulationError> {
        let p = LatticePolytope::hull(&self.points).map_err(|_| TriangulationError::NotFullDimensional)?;
        if p.dim() != self.dim() {
            return Err(TriangulationError::NotFullDimensional);
        }
        Ok(p)
    }

    /// Indices used by at least one simplex.
    pub fn used(&self) -> BTreeSet<usize> {
        self.simplices.iter().flatten().copied().collect()
    }

    /// Codimension-one faces with the number of simplices containing them.
    fn ridge_counts(&self) -> BTreeMap<Vec<usize>, usize> {
        let mut m = BTreeMap::new();
        for s in &self.simplices {
            let mut s = s.clone();
            s.sort();
            for skip in 0..s.len() {
                let f: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x).collect();
                *m.entry(f).or_insert(0) += 1;
            }
        }
        m
    }

    /// Ridges contained in a facet of the hull.
    pub fn boundary_faces(&self) -> Result<Vec<Vec<usize>>, TriangulationError> {
        let hull = self.hull()?;
        Ok(self
            .ridge_counts()
            .into_keys()
            .filter(|f| hull.facets().iter().any(|h| f.iter().all(|&i| crate::arith::dot(&h.normal, &self.points[i]) == h.offset)))
            .collect())
    }
}

/// The same triangulation in coordinates of the lattice generated by its points, together
/// with the index of that lattice in `Z^d`.
pub fn in_generated_lattice(t: &Triangulation) -> Result<(Triangulation, u128), TriangulationError> {
    let d = t.dim();
    let k = t.points.len();
    let a: Vec<Vec<i64>> = (0..d).map(|r| t.points.iter().map(|p| p[r]).collect()).collect();
    let cr = crate::linalg::column_reduce(&a, k);
    if cr.rank < d {
        return Err(TriangulationError::NotFullDimensional);
    }
    let h: Vec<Vec<Q>> = (0..d).map(|r| (0..d).map(|c| Q::from_integer(cr.reduced[r][c].into())).collect()).collect();
    let hi: Vec<Vec<i64>> = (0..d).map(|r| cr.reduced[r][..d].to_vec()).collect();
    let index = det_i64(&hi).unsigned_abs();
    let points = t
        .points
        .iter()
        .map(|p| {
            let b: Vec<Q> = p.iter().map(|&x| Q::from_integer(x.into())).collect();
            let y = rational_solve(&h, &b).ok_or(TriangulationError::NotFullDimensional)?;
            y.iter()
                .map(|v| if v.is_integer() { i64::try_from(v.to_integer()).ok() } else { None })
                .collect::<Option<Vec<i64>>>()
                .ok_or(TriangulationError::NotFullDimensional)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((Triangulation { points, simplices: t.simplices.clone(), star_point: t.star_point }, index))
}

/// Every maximal simplex contains the star point.
pub fn verify_star(t: &Triangulation) -> bool {
    t.simplices.iter().all(|s| s.contains(&t.star_point))
}

/// Result of checking that simplices tile the hull.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingReport {
    pub volume_sum: u128,
    pub hull_volume: u64,
    pub degenerate: Vec<usize>,
    /// Ridges not shared by exactly two simplices (interior) or one (boundary).
    pub bad_ridges: Vec<Vec<usize>>,
}

impl TilingReport {
    pub fn ok(&self) -> bool {
        self.volume_sum == self.hull_volume as u128 && self.degenerate.is_empty() && self.bad_ridges.is_empty()
    }
}

pub fn verify_tiling(t: &Triangulation) -> Result<TilingReport, TriangulationError> {
    let hull = t.hull()?;
    let mut degenerate = Vec::new();
    let mut volume_sum = 0u128;
    for (k, s) in t.simplices.iter().enumerate() {
        let v = t.simplex_volume(s).unsigned_abs();
        if v == 0 {
            degenerate.push(k);
        }
        volume_sum += v;
    }
    let boundary: BTreeSet<Vec<usize>> = t.boundary_faces()?.into_iter().collect();
    let bad_ridges = t
        .ridge_counts()
        .into_iter()
        .filter(|(f, c)| *c != if boundary.contains(f) { 1 } else { 2 })
        .map(|(f, _)| f)
        .collect();
    Ok(TilingReport { volume_sum, hull_volume: hull.normalized_volume(), degenerate, bad_ridges })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FineReport {
    /// Boundary lattice points of the polytope not used by any simplex.
    pub missing_boundary: Vec<Vec<i64>>,
    /// Interior lattice points other than the origin not used.
    pub missing_interior: Vec<Vec<i64>>,
    /// Used points that are not lattice points of the polytope.
    pub foreign: Vec<Vec<i64>>,
}

impl FineReport {
    pub fn ok(&self) -> bool {
        self.missing_boundary.is_empty() && self.missing_interior.is_empty() && self.foreign.is_empty()
    }
}

/// Compares the vertex set of `t` with the lattice points of `p` (the origin may stay unused).
pub fn fine_report(t: &Triangulation, p: &LatticePolytope) -> FineReport {
    let used: BTreeSet<Vec<i64>> = t.used().into_iter().map(|i| t.points[i].clone()).collect();
    let boundary: BTreeSet<Vec<i64>> = p.boundary_lattice_points().into_iter().collect();
    let zero = vec![0; p.ambient_dim()];
    let interior: BTreeSet<Vec<i64>> = p.interior_lattice_points().into_iter().filter(|x| x != &zero).collect();
    FineReport {
        missing_boundary: boundary.difference(&used).cloned().collect(),
        missing_interior: interior.difference(&used).cloned().collect(),
        foreign: used.iter().filter(|x| !p.contains(x)).cloned().collect(),
    }
}

pub fn verify_fine(t: &Triangulation, p: &LatticePolytope) -> bool {
    fine_report(t, p).ok()
}

/// Barycentric coordinates of `q` in the simplex `s`.
fn barycentric(t: &Triangulation, s: &[usize], q: &[i64]) -> Option<Vec<Q>> {
    let d = t.dim();
    let mut a: Vec<Vec<Q>> = (0..d).map(|r| s.iter().map(|&i| Q::from_integer(t.points[i][r].into())).collect()).collect();
    a.push(vec![Q::one(); d + 1]);
    let mut b: Vec<Q> = q.iter().map(|&x| Q::from_integer(x.into())).collect();
    b.push(Q::one());
    rational_solve(&a, &b)
}

/// Heights making every simplex a lower facet of the lifted used points, or `None`.
///
/// Maximizes a common slack `eps <= 1` in `h_q - sum lambda_i h_{s_i} >= eps` over all
/// simplices `S` and used points `q` outside `S`; regular iff the optimum is positive.
pub fn verify_regular(t: &Triangulation) -> Option<LiftingWeights> {
    let used: Vec<usize> = t.used().into_iter().collect();
    let col: BTreeMap<usize, usize> = used.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let nv = used.len() + 1;
    let eps = nv - 1;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for s in &t.simplices {
        for &q in &used {
            if s.contains(&q) {
                continue;
            }
            let lam = barycentric(t, s, &t.points[q])?;
            // eps - h_q + sum lambda_i h_i <= 0
            let mut row = vec![Q::zero(); nv];
            row[eps] = Q::one();
            row[col[&q]] -= Q::one();
            for (l, &i) in lam.iter().zip(s) {
                row[col[&i]] += l;
            }
            a.push(row);
            b.push(Q::zero());
        }
    }
    let mut cap = vec![Q::zero(); nv];
    cap[eps] = Q::one();
    a.push(cap.clone());
    b.push(Q::one());
    match maximize_le(&cap, &a, &b) {
        LpResult::Optimal { x, value } if value.is_positive() => {
            let mut heights = vec![Q::zero(); t.points.len()];
            for (k, &i) in used.iter().enumerate() {
                heights[i] = x[k].clone();
            }
            Some(LiftingWeights { heights })
        }
        _ => None,
    }
}

/// Full-dimensional simplices on the lower hull of the lifted used points (generic heights).
pub fn lower_simplices(t: &Triangulation, w: &LiftingWeights) -> Vec<Vec<usize>> {
    let used: Vec<usize> = t.used().into_iter().collect();
    let d = t.dim();
    let mut out = Vec::new();
    for s in used.iter().copied().combinations(d + 1) {
        if t.simplex_volume(&s) == 0 {
            continue;
        }
        let lower = used.iter().filter(|q| !s.contains(q)).all(|&q| match barycentric(t, &s, &t.points[q]) {
            Some(lam) => {
                let plane: Q = lam.iter().zip(&s).map(|(l, &i)| l * &w.heights[i]).sum();
                w.heights[q] > plane
            }
            None => false,
        });
        if lower {
            out.push(s);
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanReport {
    /// Boundary faces with their cone determinants.
    pub cones: Vec<(Vec<usize>, i128)>,
    pub origin_interior: bool,
}

impl FanReport {
    pub fn smooth(&self) -> bool {
        self.origin_interior && self.cones.iter().all(|(_, d)| d.abs() == 1)
    }

    pub fn degenerate(&self) -> Vec<Vec<usize>> {
        self.cones.iter().filter(|(_, d)| *d == 0).map(|(f, _)| f.clone()).collect()
    }
}

/// Cones over the boundary faces of `t` from the origin.
pub fn fan_report(t: &Triangulation, p: &LatticePolytope) -> Result<FanReport, TriangulationError> {
    let zero = vec![0; t.dim()];
    let origin_interior = p.contains(&zero) && !p.boundary_lattice_points().contains(&zero);
    let cones = t
        .boundary_faces()?
        .into_iter()
        .map(|f| {
            let m: Vec<Vec<i64>> = f.iter().map(|&i| t.points[i].clone()).collect();
            let d = det_i64(&m);
            (f, d)
        })
        .collect();
    Ok(FanReport { cones, origin_interior })
}

pub fn verify_smooth_fan(t: &Triangulation, p: &LatticePolytope) -> bool {
    fan_report(t, p).map(|r| r.smooth()).unwrap_or(false)
}

/// Simplices counted for the volume identity.
pub fn total_volume(t: &Triangulation) -> u128 {
    t.simplices.iter().map(|s| t.simplex_volume(s).unsigned_abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Vec<Vec<i64>> {
        vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![0, 1]]
    }

    #[test]
    fn star_examples() {
        let t = Triangulation::new(square(), vec![vec![0, 1, 2], vec![0, 2, 3]], 0).unwrap();
        assert!(verify_star(&t));
        let t2 = Triangulation { star_point: 1, ..t.clone() };
        assert!(!verify_star(&t2));
        assert!(verify_tiling(&t).unwrap().ok());
        let p = t.hull().unwrap();
        assert!(verify_fine(&t, &p));
    }

    #[test]
    fn fineness_detects_skipped_point() {
        let pts = vec![vec![0, 0], vec![1, 0], vec![2, 0], vec![2, 1], vec![0, 1]];
        let t = Triangulation::new(pts, vec![vec![0, 2, 3], vec![0, 3, 4]], 0).unwrap();
        let p = t.hull().unwrap();
        let r = fine_report(&t, &p);
        assert_eq!(r.missing_boundary, vec![vec![1, 0], vec![1, 1]]);
        assert!(!verify_fine(&t, &p));
    }

    #[test]
    fn regular_polygon_and_roundtrip() {
        let t = Triangulation::new(square(), vec![vec![0, 1, 2], vec![0, 2, 3]], 0).unwrap();
        let w = verify_regular(&t).unwrap();
        assert_eq!(lower_simplices(&t, &w), vec![vec![0, 1, 2], vec![0, 2, 3]]);
    }

    #[test]
    fn mother_of_all_examples() {
        // outer triangle 0,1,2 and inner triangle 3,4,5, with the twisted fill
        let pts = vec![vec![0, 0], vec![8, 0], vec![4, 8], vec![3, 2], vec![5, 2], vec![4, 4]];
        let simplices = vec![
            vec![3, 4, 5],
            vec![0, 1, 3],
            vec![1, 4, 3],
            vec![1, 2, 4],
            vec![2, 5, 4],
            vec![2, 0, 5],
            vec![0, 3, 5],
        ];
        let t = Triangulation::new(pts, simplices, 3).unwrap();
        assert!(verify_tiling(&t).unwrap().ok());
        assert!(verify_regular(&t).is_none());
        // the mirrored fill is not regular either, while a fill with a consistent cone is
    }

    #[test]
    fn smooth_fans() {
        let pts = vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1], vec![0, 0]];
        let t = Triangulation::new(pts, vec![vec![4, 0, 1], vec![4, 1, 2], vec![4, 2, 3], vec![4, 3, 0]], 4).unwrap();
        let p = t.hull().unwrap();
        assert!(verify_smooth_fan(&t, &p));
        let pts = vec![vec![1, 0], vec![-1, 2], vec![0, -1], vec![0, 0]];
        let t = Triangulation::new(pts, vec![vec![3, 0, 1], vec![3, 1, 2], vec![3, 2, 0]], 3).unwrap();
        let p = t.hull().unwrap();
        let r = fan_report(&t, &p).unwrap();
        assert!(r.cones.iter().any(|(_, d)| d.abs() == 2));
        assert!(!verify_smooth_fan(&t, &p));
    }

    #[test]
    fn corpus_triangulations() {
        for e in crate::corpus::theorem_cases() {
            let t = Triangulation::from_value(e.triangulation.as_ref().unwrap()).unwrap();
            let p = t.hull().unwrap();
            assert!(verify_star(&t), "{}", e.id);
            let tiling = verify_tiling(&t).unwrap();
            assert!(tiling.ok(), "{} {:?}", e.id, tiling);
            let w = verify_regular(&t).expect("regular");
            let mut want = t.simplices.clone();
            for s in want.iter_mut() {
                s.sort();
            }
            want.sort();
            assert_eq!(lower_simplices(&t, &w), want, "{}", e.id);
            let fr = fine_report(&t, &p);
            let fan = fan_report(&t, &p).unwrap();
            let (sub, index) = in_generated_lattice(&t).unwrap();
            let sub_hull = sub.hull().unwrap();
            let sub_fr = fine_report(&sub, &sub_hull);
            let sub_fan = fan_report(&sub, &sub_hull).unwrap();
            match e.id.as_str() {
                "lg_1_3_gr25" | "lg_2_2_gr25" | "lg_111111_gr27" => {
                    assert!(fr.ok() && fan.smooth(), "{} {:?}", e.id, fr);
                    assert_eq!(index, 1);
                }
                // the vertices span a sublattice; in it the triangulation is fine and unimodular
                "lg_1_1_gr25" | "lg_1111_gr26" => {
                    assert_eq!(fr.missing_boundary.len(), if e.id == "lg_1_1_gr25" { 76 } else { 39 });
                    assert!(!fan.smooth());
                    assert_eq!(index, if e.id == "lg_1_1_gr25" { 27 } else { 8 });
                    assert!(sub_fr.ok() && sub_fan.smooth(), "{}", e.id);
                }
                // index 8, and even in the sublattice one boundary point is skipped
                "lg_1_2_gr25" => {
                    assert_eq!(fr.missing_boundary.len(), 30);
                    assert_eq!(index, 8);
                    assert_eq!(sub_fr.missing_boundary.len(), 1);
                    assert!(!sub_fan.smooth());
                    assert!(sub_fan.cones.iter().all(|(_, d)| d.abs() <= 2));
                }
                other => panic!("unexpected case {other}"),
            }
            // the hull is the dual of the Newton polytope up to GL(4, Z)
            let newton = e.laurent().unwrap().unwrap().newton_polytope();
            assert!(crate::lattice::linear_equivalence(&newton.dual().unwrap(), &p).is_some(), "{}", e.id);
        }
    }
}
