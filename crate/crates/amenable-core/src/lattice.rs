//! Lattice polytopes: hulls, facets, face lattices, lattice points, reflexivity,
//! duality, lattice width, Fine interior and unimodular equivalence.

use crate::arith::{dot, primitive, Q};
use crate::linalg::{integer_kernel, rational_solve, unimodular_inverse, AffineFrame};
use crate::lp::in_convex_hull;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashSet};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("points have mismatched dimensions")]
    DimensionMismatch,
    #[error("empty point set")]
    Empty,
    #[error("polytope is not full-dimensional")]
    NotFullDimensional,
    #[error("polytope is not reflexive")]
    NotReflexive,
    #[error("face dimension {0} out of range")]
    FaceDimension(usize),
}

/// Inequality `<normal, x> >= offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Hyperplane {
    pub normal: Vec<i64>,
    pub offset: i64,
}

#[derive(Clone, Debug)]
struct LocalFacet {
    normal: Vec<i64>,
    offset: i64,
    vertices: Vec<usize>,
}

/// A lattice polytope with exact V- and H-representation.
///
/// Facets of lower-dimensional polytopes are relative facets; their ambient
/// normals are pulled back through the intrinsic lattice frame.
#[derive(Clone, Debug)]
pub struct LatticePolytope {
    vertices: Vec<Vec<i64>>,
    frame: AffineFrame,
    local_vertices: Vec<Vec<i64>>,
    local_facets: Vec<LocalFacet>,
    facets: Vec<Hyperplane>,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}
impl Eq for LatticePolytope {}

fn identity_frame(n: usize) -> AffineFrame {
    let id: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    AffineFrame { ambient: n, dim: n, origin: vec![0; n], to_local: id.clone(), basis: id, equations: vec![] }
}

fn to_q(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| Q::from_integer(x.into())).collect()
}

/// Extreme points of a full-dimensional point set (indices into `pts`).
fn extreme_points(pts: &[Vec<i64>]) -> Vec<usize> {
    let n = pts.len();
    if n <= 1 {
        return (0..n).collect();
    }
    let d = pts[0].len();
    // unique optimizers of coordinate-like functionals are vertices without an LP
    let mut sure = vec![false; n];
    let mut dirs: Vec<Vec<i64>> = Vec::new();
    for i in 0..d {
        let mut e = vec![0; d];
        e[i] = 1;
        dirs.push(e.clone());
        e[i] = -1;
        dirs.push(e);
    }
    for w in &dirs {
        let vals: Vec<i64> = pts.iter().map(|p| dot(w, p)).collect();
        let mx = *vals.iter().max().unwrap();
        let at: Vec<usize> = (0..n).filter(|&i| vals[i] == mx).collect();
        if at.len() == 1 {
            sure[at[0]] = true;
        }
    }
    let qp: Vec<Vec<Q>> = pts.iter().map(|p| to_q(p)).collect();
    let mut result = Vec::new();
    let mut alive: Vec<bool> = vec![true; n];
    for i in 0..n {
        if sure[i] {
            result.push(i);
            continue;
        }
        let others: Vec<Vec<Q>> = (0..n).filter(|&j| j != i && alive[j]).map(|j| qp[j].clone()).collect();
        if in_convex_hull(&qp[i], &others) {
            alive[i] = false;
        } else {
            result.push(i);
        }
    }
    result
}

/// Primitive normal of the hyperplane through `k` affinely independent points in Z^k.
fn hyperplane_normal(pts: &[&Vec<i64>]) -> Option<Vec<i64>> {
    let k = pts[0].len();
    let diffs: Vec<Vec<i64>> = pts[1..].iter().map(|p| p.iter().zip(pts[0]).map(|(a, b)| a - b).collect()).collect();
    let ker = integer_kernel(&diffs, k);
    if ker.len() != 1 {
        return None;
    }
    Some(primitive(&ker[0]))
}

fn local_facets(verts: &[Vec<i64>]) -> Vec<LocalFacet> {
    let k = verts[0].len();
    let nv = verts.len();
    if k == 0 {
        return vec![];
    }
    if k == 1 {
        let (lo, hi) = (0..nv).fold((0, 0), |(lo, hi), i| {
            (if verts[i][0] < verts[lo][0] { i } else { lo }, if verts[i][0] > verts[hi][0] { i } else { hi })
        });
        return vec![
            LocalFacet { normal: vec![1], offset: verts[lo][0], vertices: vec![lo] },
            LocalFacet { normal: vec![-1], offset: -verts[hi][0], vertices: vec![hi] },
        ];
    }
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let pts: Vec<&Vec<i64>> = idx.iter().map(|&i| &verts[i]).collect();
        if let Some(a) = hyperplane_normal(&pts) {
            let b = dot(&a, pts[0]);
            let vals: Vec<i64> = verts.iter().map(|v| dot(&a, v)).collect();
            let (mn, mx) = (*vals.iter().min().unwrap(), *vals.iter().max().unwrap());
            let cand = if mn == b {
                Some((a.clone(), b))
            } else if mx == b {
                Some((a.iter().map(|x| -x).collect::<Vec<i64>>(), -b))
            } else {
                None
            };
            if let Some((a, b)) = cand {
                if seen.insert(a.clone()) {
                    let vs = (0..nv).filter(|&i| dot(&a, &verts[i]) == b).collect();
                    out.push(LocalFacet { normal: a, offset: b, vertices: vs });
                }
            }
        }
        // next k-subset
        let mut i = k;
        loop {
            if i == 0 {
                out.sort_by(|x, y| x.normal.cmp(&y.normal));
                return out;
            }
            i -= 1;
            if idx[i] < nv - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

impl LatticePolytope {
    /// Convex hull of a nonempty set of lattice points.
    pub fn hull(points: &[Vec<i64>]) -> Result<Self, GeometryError> {
        if points.is_empty() {
            return Err(GeometryError::Empty);
        }
        let n = points[0].len();
        if points.iter().any(|p| p.len() != n) {
            return Err(GeometryError::DimensionMismatch);
        }
        let mut pts: Vec<Vec<i64>> = points.to_vec();
        pts.sort();
        pts.dedup();
        let frame0 = AffineFrame::new(&pts);
        let frame = if frame0.dim == n { identity_frame(n) } else { frame0 };
        let local: Vec<Vec<i64>> = pts.iter().map(|p| frame.local(p)).collect();
        let ext = if frame.dim == 0 { vec![0] } else { extreme_points(&local) };
        let mut vertices: Vec<Vec<i64>> = ext.iter().map(|&i| pts[i].clone()).collect();
        vertices.sort();
        Ok(Self::from_vertices_unchecked(vertices, frame))
    }

    fn from_vertices_unchecked(vertices: Vec<Vec<i64>>, frame: AffineFrame) -> Self {
        let local_vertices: Vec<Vec<i64>> = vertices.iter().map(|p| frame.local(p)).collect();
        let lf = if frame.dim == 0 { vec![] } else { local_facets(&local_vertices) };
        let facets = lf
            .iter()
            .map(|f| {
                let (a, shift) = frame.functional_to_global(&f.normal);
                Hyperplane { normal: a, offset: f.offset + shift }
            })
            .collect();
        LatticePolytope { vertices, frame, local_vertices, local_facets: lf, facets }
    }

    pub fn ambient_dim(&self) -> usize {
        self.frame.ambient
    }

    pub fn dim(&self) -> usize {
        self.frame.dim
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn frame(&self) -> &AffineFrame {
        &self.frame
    }

    /// Relative facets as ambient inequalities.
    pub fn facets(&self) -> &[Hyperplane] {
        &self.facets
    }

    /// Vertex indices of each facet, aligned with [`Self::facets`].
    pub fn facet_vertex_sets(&self) -> Vec<Vec<usize>> {
        self.local_facets.iter().map(|f| f.vertices.clone()).collect()
    }

    /// Vertices in intrinsic lattice coordinates.
    pub fn local_vertices(&self) -> &[Vec<i64>] {
        &self.local_vertices
    }

    /// The same polytope re-expressed in its intrinsic lattice `Z^dim`.
    pub fn to_local(&self) -> LatticePolytope {
        LatticePolytope::hull(&self.local_vertices).expect("nonempty")
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.frame.contains(x) && self.facets.iter().all(|h| dot(&h.normal, x) >= h.offset)
    }

    /// Minimum of a linear functional over the polytope.
    pub fn min_of(&self, a: &[i64]) -> i64 {
        self.vertices.iter().map(|v| dot(a, v)).min().unwrap()
    }

    pub fn max_of(&self, a: &[i64]) -> i64 {
        self.vertices.iter().map(|v| dot(a, v)).max().unwrap()
    }

    /// True iff 0 is interior and every facet has offset -1.
    pub fn is_reflexive(&self) -> Result<bool, GeometryError> {
        if self.dim() != self.ambient_dim() {
            return Err(GeometryError::NotFullDimensional);
        }
        Ok(self.facets.iter().all(|h| h.offset == -1))
    }

    /// Dual polytope; its vertices are the primitive facet normals.
    pub fn dual(&self) -> Result<LatticePolytope, GeometryError> {
        if !self.is_reflexive()? {
            return Err(GeometryError::NotReflexive);
        }
        let normals: Vec<Vec<i64>> = self.facets.iter().map(|h| h.normal.clone()).collect();
        LatticePolytope::hull(&normals)
    }

    /// All faces as vertex-index sets, including the improper face.
    pub fn face_index_sets(&self) -> Vec<(usize, Vec<usize>)> {
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
        faces.insert(all);
        let facets: Vec<Vec<usize>> = self.facet_vertex_sets();
        let mut frontier: Vec<Vec<usize>> = facets.clone();
        while let Some(f) = frontier.pop() {
            if !faces.insert(f.clone()) {
                continue;
            }
            for g in &facets {
                let inter: Vec<usize> = f.iter().copied().filter(|i| g.contains(i)).collect();
                if !inter.is_empty() && !faces.contains(&inter) {
                    frontier.push(inter);
                }
            }
        }
        let mut out: Vec<(usize, Vec<usize>)> = faces.into_iter().map(|s| (self.rank_of(&s), s)).collect();
        out.sort();
        out
    }

    fn rank_of(&self, idx: &[usize]) -> usize {
        let pts: Vec<Vec<i64>> = idx.iter().map(|&i| self.vertices[i].clone()).collect();
        AffineFrame::new(&pts).dim
    }

    /// All `k`-faces (proper unless `k == dim`).
    pub fn faces(&self, k: usize) -> Result<Vec<LatticePolytope>, GeometryError> {
        if k > self.dim() {
            return Err(GeometryError::FaceDimension(k));
        }
        Ok(self
            .face_index_sets()
            .into_iter()
            .filter(|(d, _)| *d == k)
            .map(|(_, s)| self.sub_polytope(&s))
            .collect())
    }

    /// Polytope spanned by a subset of vertices.
    pub fn sub_polytope(&self, idx: &[usize]) -> LatticePolytope {
        let pts: Vec<Vec<i64>> = idx.iter().map(|&i| self.vertices[i].clone()).collect();
        let frame = AffineFrame::new(&pts);
        let frame = if frame.dim == self.ambient_dim() { identity_frame(frame.ambient) } else { frame };
        let mut v = pts;
        v.sort();
        LatticePolytope::from_vertices_unchecked(v, frame)
    }

    /// Edges as pairs of vertex indices.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.face_index_sets().into_iter().filter(|(d, _)| *d == 1).map(|(_, s)| (s[0], s[1])).collect()
    }

    /// The face on which `<a, x>` is minimal, as vertex indices.
    pub fn face_minimizing(&self, a: &[i64]) -> Vec<usize> {
        let m = self.min_of(a);
        (0..self.vertices.len()).filter(|&i| dot(a, &self.vertices[i]) == m).collect()
    }

    /// All lattice points in lexicographic order.
    pub fn lattice_points(&self) -> Vec<Vec<i64>> {
        let k = self.dim();
        if k == 0 {
            return vec![self.vertices[0].clone()];
        }
        let lo: Vec<i64> = (0..k).map(|i| self.local_vertices.iter().map(|v| v[i]).min().unwrap()).collect();
        let hi: Vec<i64> = (0..k).map(|i| self.local_vertices.iter().map(|v| v[i]).max().unwrap()).collect();
        let mut out = Vec::new();
        let mut y = lo.clone();
        loop {
            if self.local_facets.iter().all(|f| dot(&f.normal, &y) >= f.offset) {
                out.push(self.frame.global(&y));
            }
            let mut i = 0;
            loop {
                if i == k {
                    out.sort();
                    return out;
                }
                if y[i] < hi[i] {
                    y[i] += 1;
                    break;
                }
                y[i] = lo[i];
                i += 1;
            }
        }
    }

    /// Lattice points on the relative boundary.
    pub fn boundary_lattice_points(&self) -> Vec<Vec<i64>> {
        self.lattice_points()
            .into_iter()
            .filter(|p| self.facets.iter().any(|h| dot(&h.normal, p) == h.offset))
            .collect()
    }

    /// Lattice points in the relative interior.
    pub fn interior_lattice_points(&self) -> Vec<Vec<i64>> {
        self.lattice_points()
            .into_iter()
            .filter(|p| self.facets.iter().all(|h| dot(&h.normal, p) > h.offset))
            .collect()
    }

    /// Lattice width in the intrinsic lattice with a witness functional (ambient coordinates).
    pub fn lattice_width(&self) -> (i64, Vec<i64>) {
        let k = self.dim();
        if k == 0 {
            return (0, vec![0; self.ambient_dim()]);
        }
        let (w, dir) = local_width(&self.local_vertices);
        let (a, _) = self.frame.functional_to_global(&dir);
        (w, a)
    }

    /// All primitive intrinsic directions realizing width `target` (up to sign), ambient coordinates.
    pub fn width_directions(&self, target: i64) -> Vec<Vec<i64>> {
        if self.dim() == 0 {
            return vec![];
        }
        self.local_width_directions(target).into_iter().map(|d| self.frame.functional_to_global(&d).0).collect()
    }

    /// Same width directions in intrinsic coordinates.
    pub fn local_width_directions(&self, target: i64) -> Vec<Vec<i64>> {
        if self.dim() == 0 {
            return vec![];
        }
        width_candidates(&self.local_vertices, target)
            .into_iter()
            .filter(|w| width_along(&self.local_vertices, w) == target)
            .collect()
    }

    /// Normalized volume (`dim! * Euclidean volume` in the intrinsic lattice).
    pub fn normalized_volume(&self) -> u64 {
        normalized_volume_local(&self.local_vertices)
    }

    /// Minkowski sum with another polytope in the same ambient space.
    pub fn minkowski_sum(&self, other: &LatticePolytope) -> LatticePolytope {
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        LatticePolytope::hull(&pts).expect("nonempty")
    }

    pub fn translate(&self, t: &[i64]) -> LatticePolytope {
        let pts: Vec<Vec<i64>> = self.vertices.iter().map(|v| v.iter().zip(t).map(|(a, b)| a + b).collect()).collect();
        LatticePolytope::hull(&pts).expect("nonempty")
    }

    pub fn scale(&self, k: i64) -> LatticePolytope {
        let pts: Vec<Vec<i64>> = self.vertices.iter().map(|v| v.iter().map(|a| a * k).collect()).collect();
        LatticePolytope::hull(&pts).expect("nonempty")
    }

    /// Fine interior with the default sweep bound.
    pub fn fine_interior(&self) -> Result<RationalPolytope, GeometryError> {
        self.fine_interior_with_bound(3)
    }

    /// Fine interior: intersection of `<a,x> >= min_P(a) + 1` over facet normals and all
    /// primitive `a` with entries bounded by `bound`.
    pub fn fine_interior_with_bound(&self, bound: i64) -> Result<RationalPolytope, GeometryError> {
        let n = self.ambient_dim();
        if self.dim() != n {
            return Err(GeometryError::NotFullDimensional);
        }
        let mut cons: Vec<(Vec<i64>, Q)> =
            self.facets.iter().map(|h| (h.normal.clone(), Q::from_integer((h.offset + 1).into()))).collect();
        let mut verts = rational_vertices(&cons, n);
        let mut a = vec![-bound; n];
        loop {
            if verts.is_empty() {
                break;
            }
            if a.iter().any(|&x| x != 0) && crate::arith::gcd_slice(&a) == 1 {
                let b = Q::from_integer((self.min_of(&a) + 1).into());
                let cuts = verts.iter().any(|v| {
                    let s: Q = v.iter().zip(&a).map(|(x, &y)| x * Q::from_integer(y.into())).sum();
                    s < b
                });
                if cuts {
                    cons.push((a.clone(), b));
                    verts = rational_vertices(&cons, n);
                }
            }
            let mut i = 0;
            loop {
                if i == n {
                    return Ok(RationalPolytope::new(verts, n));
                }
                if a[i] < bound {
                    a[i] += 1;
                    break;
                }
                a[i] = -bound;
                i += 1;
            }
        }
        Ok(RationalPolytope::new(vec![], n))
    }

    pub fn to_json(&self) -> PolytopeJson {
        PolytopeJson { dim: self.ambient_dim(), vertices: self.vertices.clone() }
    }
}

/// Polytope JSON: `{"dim": n, "vertices": [[ints]]}` with `n` the ambient dimension.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PolytopeJson {
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
}

impl PolytopeJson {
    pub fn to_polytope(&self) -> Result<LatticePolytope, GeometryError> {
        if self.vertices.iter().any(|v| v.len() != self.dim) {
            return Err(GeometryError::DimensionMismatch);
        }
        LatticePolytope::hull(&self.vertices)
    }
}

/// Polytope with rational vertices (e.g. a Fine interior).
#[derive(Clone, Debug, PartialEq)]
pub struct RationalPolytope {
    pub ambient: usize,
    pub vertices: Vec<Vec<Q>>,
}

impl RationalPolytope {
    fn new(mut vertices: Vec<Vec<Q>>, ambient: usize) -> Self {
        vertices.sort();
        vertices.dedup();
        // keep extreme points only
        let pts = vertices.clone();
        let v: Vec<Vec<Q>> = (0..pts.len())
            .filter(|&i| {
                let others: Vec<Vec<Q>> = (0..pts.len()).filter(|&j| j != i).map(|j| pts[j].clone()).collect();
                !in_convex_hull(&pts[i], &others)
            })
            .map(|i| pts[i].clone())
            .collect();
        RationalPolytope { ambient, vertices: v }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains_origin(&self) -> bool {
        let z = vec![Q::zero(); self.ambient];
        self.vertices.contains(&z) || in_convex_hull(&z, &self.vertices)
    }
}

/// Vertices of `{x : <a_i, x> >= b_i}` (assumed bounded) by brute-force basis enumeration.
fn rational_vertices(cons: &[(Vec<i64>, Q)], n: usize) -> Vec<Vec<Q>> {
    let m = cons.len();
    let mut out: Vec<Vec<Q>> = Vec::new();
    if m < n {
        return out;
    }
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let a: Vec<Vec<Q>> = idx.iter().map(|&i| to_q(&cons[i].0)).collect();
        let b: Vec<Q> = idx.iter().map(|&i| cons[i].1.clone()).collect();
        if let Some(x) = rational_solve(&a, &b) {
            let ok = cons.iter().all(|(ai, bi)| {
                let s: Q = ai.iter().zip(&x).map(|(&p, xv)| Q::from_integer(p.into()) * xv).sum();
                s >= *bi
            });
            if ok && !out.contains(&x) {
                out.push(x);
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                out.sort();
                return out;
            }
            i -= 1;
            if idx[i] < m - n + i {
                idx[i] += 1;
                for j in i + 1..n {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn width_along(verts: &[Vec<i64>], w: &[i64]) -> i64 {
    let vals: Vec<i64> = verts.iter().map(|v| dot(w, v)).collect();
    vals.iter().max().unwrap() - vals.iter().min().unwrap()
}

/// Primitive directions with width at most `bound`, first nonzero entry positive, sorted.
fn width_candidates(verts: &[Vec<i64>], bound: i64) -> Vec<Vec<i64>> {
    let k = verts[0].len();
    // k affinely independent difference vectors
    let mut basis_rows: Vec<Vec<i64>> = Vec::new();
    for v in &verts[1..] {
        let d: Vec<i64> = v.iter().zip(&verts[0]).map(|(a, b)| a - b).collect();
        let mut trial = basis_rows.clone();
        trial.push(d.clone());
        if crate::linalg::rank_i64(&trial) == trial.len() {
            basis_rows = trial;
            if basis_rows.len() == k {
                break;
            }
        }
    }
    let m: Vec<Vec<Q>> = basis_rows.iter().map(|r| to_q(r)).collect();
    let minv = crate::linalg::rational_inverse(&m).expect("full rank");
    let mut out = Vec::new();
    let mut y = vec![-bound; k];
    loop {
        // w = M^{-1} y
        let w: Vec<Q> = (0..k).map(|i| (0..k).map(|j| &minv[i][j] * Q::from_integer(y[j].into())).sum()).collect();
        if w.iter().all(|x| x.is_integer()) {
            let wi: Vec<i64> = w.iter().map(|x| i64::try_from(x.to_integer()).unwrap()).collect();
            let first = wi.iter().find(|&&x| x != 0).copied();
            if first.map_or(false, |f| f > 0) && crate::arith::gcd_slice(&wi) == 1 && width_along(verts, &wi) <= bound {
                out.push(wi);
            }
        }
        let mut i = 0;
        loop {
            if i == k {
                out.sort();
                out.dedup();
                return out;
            }
            if y[i] < bound {
                y[i] += 1;
                break;
            }
            y[i] = -bound;
            i += 1;
        }
    }
}

fn local_width(verts: &[Vec<i64>]) -> (i64, Vec<i64>) {
    let k = verts[0].len();
    let w0 = (0..k)
        .map(|i| {
            let vals: Vec<i64> = verts.iter().map(|v| v[i]).collect();
            vals.iter().max().unwrap() - vals.iter().min().unwrap()
        })
        .min()
        .unwrap();
    for w in 1..=w0 {
        let c = width_candidates(verts, w);
        if let Some(d) = c.into_iter().next() {
            return (w, d);
        }
    }
    unreachable!("coordinate direction attains w0")
}

fn normalized_volume_local(verts: &[Vec<i64>]) -> u64 {
    let k = verts[0].len();
    if k == 0 {
        return 1;
    }
    let p = LatticePolytope::hull(verts).expect("nonempty");
    if p.dim() < k {
        return 0;
    }
    if k == 1 {
        let vals: Vec<i64> = verts.iter().map(|v| v[0]).collect();
        return (vals.iter().max().unwrap() - vals.iter().min().unwrap()) as u64;
    }
    let apex = &p.vertices[0];
    let mut total = 0u64;
    for (f, hs) in p.local_facets.iter().zip(p.facets.iter()) {
        let dist = dot(&hs.normal, apex) - hs.offset;
        if dist == 0 {
            continue;
        }
        let face = p.sub_polytope(&f.vertices);
        total += dist as u64 * normalized_volume_local(face.local_vertices());
    }
    total
}

/// Affine lattice map `x -> U x + t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineLatticeMap {
    pub matrix: Vec<Vec<i64>>,
    pub translation: Vec<i64>,
}

impl AffineLatticeMap {
    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.matrix.iter().zip(&self.translation).map(|(r, t)| dot(r, x) + t).collect()
    }
}

fn frame_matrix(f: &AffineFrame) -> Vec<Vec<i64>> {
    let mut t = f.to_local.clone();
    t.extend(f.equations.iter().map(|(a, _)| a.clone()));
    t
}

/// Local affine unimodular maps between vertex sets of equal dimension `k`.
fn local_maps(p: &[Vec<i64>], q: &[Vec<i64>], first_only: bool) -> Vec<(Vec<Vec<i64>>, Vec<i64>)> {
    let k = p[0].len();
    let mut out = Vec::new();
    if p.len() != q.len() {
        return out;
    }
    if k == 0 {
        return vec![(vec![], vec![])];
    }
    let qset: HashSet<Vec<i64>> = q.iter().cloned().collect();
    let hp = LatticePolytope::hull(p).unwrap();
    let hq = LatticePolytope::hull(q).unwrap();
    let adj = |h: &LatticePolytope| -> Vec<Vec<usize>> {
        let mut a = vec![vec![]; h.vertices.len()];
        for (i, j) in h.edges() {
            a[i].push(j);
            a[j].push(i);
        }
        a
    };
    let (ap, aq) = (adj(&hp), adj(&hq));
    let mut dp: Vec<usize> = ap.iter().map(|x| x.len()).collect();
    let mut dq: Vec<usize> = aq.iter().map(|x| x.len()).collect();
    dp.sort();
    dq.sort();
    if dp != dq || hp.facets.len() != hq.facets.len() {
        return out;
    }
    // base vertex and spanning neighbours in P
    let pv = &hp.vertices;
    let (p0, nbrs) = (0..pv.len())
        .find_map(|i| {
            let mut chosen: Vec<usize> = Vec::new();
            for &j in &ap[i] {
                let mut rows: Vec<Vec<i64>> = chosen.iter().map(|&c| diff(&pv[c], &pv[i])).collect();
                rows.push(diff(&pv[j], &pv[i]));
                if crate::linalg::rank_i64(&rows) == rows.len() {
                    chosen.push(j);
                    if chosen.len() == k {
                        return Some((i, chosen));
                    }
                }
            }
            None
        })
        .expect("vertex edges span");
    let mp: Vec<Vec<Q>> = (0..k).map(|r| (0..k).map(|c| Q::from_integer(diff(&pv[nbrs[c]], &pv[p0])[r].into())).collect()).collect();
    let mp_inv = crate::linalg::rational_inverse(&mp).unwrap();
    let qv = &hq.vertices;
    for q0 in 0..qv.len() {
        if aq[q0].len() != ap[p0].len() {
            continue;
        }
        let cand = &aq[q0];
        let mut perm: Vec<usize> = Vec::new();
        let mut used = vec![false; cand.len()];
        // iterative permutations of length k from cand
        fn rec(
            depth: usize,
            k: usize,
            cand: &[usize],
            used: &mut Vec<bool>,
            perm: &mut Vec<usize>,
            f: &mut dyn FnMut(&[usize]) -> bool,
        ) -> bool {
            if depth == k {
                return f(perm);
            }
            for i in 0..cand.len() {
                if used[i] {
                    continue;
                }
                used[i] = true;
                perm.push(cand[i]);
                let stop = rec(depth + 1, k, cand, used, perm, f);
                perm.pop();
                used[i] = false;
                if stop {
                    return true;
                }
            }
            false
        }
        let mut f = |sel: &[usize]| -> bool {
            let mq: Vec<Vec<Q>> =
                (0..k).map(|r| (0..k).map(|c| Q::from_integer(diff(&qv[sel[c]], &qv[q0])[r].into())).collect()).collect();
            let mut u = vec![vec![0i64; k]; k];
            for r in 0..k {
                for c in 0..k {
                    let s: Q = (0..k).map(|t| &mq[r][t] * &mp_inv[t][c]).sum();
                    if !s.is_integer() {
                        return false;
                    }
                    u[r][c] = i64::try_from(s.to_integer()).unwrap();
                }
            }
            if crate::linalg::det_i64(&u).abs() != 1 {
                return false;
            }
            let up0: Vec<i64> = u.iter().map(|r| dot(r, &pv[p0])).collect();
            let t: Vec<i64> = qv[q0].iter().zip(&up0).map(|(a, b)| a - b).collect();
            let ok = pv.iter().all(|v| {
                let img: Vec<i64> = u.iter().zip(&t).map(|(r, tt)| dot(r, v) + tt).collect();
                qset.contains(&img)
            });
            if ok {
                out.push((u, t));
                return first_only;
            }
            false
        };
        if rec(0, k, cand, &mut used, &mut perm, &mut f) {
            break;
        }
    }
    out
}

fn diff(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// An affine unimodular map carrying `p` onto `q`, if one exists.
pub fn unimodular_map_between(p: &LatticePolytope, q: &LatticePolytope) -> Option<AffineLatticeMap> {
    if p.dim() != q.dim() || p.ambient_dim() != q.ambient_dim() || p.vertices.len() != q.vertices.len() {
        return None;
    }
    let k = p.dim();
    let n = p.ambient_dim();
    let (u, t) = if k == 0 {
        (vec![], vec![])
    } else if k == 1 {
        let len = |h: &LatticePolytope| (h.local_vertices[0][0] - h.local_vertices[1][0]).abs();
        if len(p) != len(q) {
            return None;
        }
        let (a0, b0) = (p.local_vertices[0][0], p.local_vertices[1][0]);
        let (a1, b1) = (q.local_vertices[0][0], q.local_vertices[1][0]);
        let s = if (b0 - a0).signum() == (b1 - a1).signum() { 1 } else { -1 };
        (vec![vec![s]], vec![a1 - s * a0])
    } else {
        local_maps(&p.local_vertices, &q.local_vertices, true).into_iter().next()?
    };
    // ambient: x -> Tq^{-1} (diag(u, I) Tp (x - op) + (t, 0)) + oq
    let tp = frame_matrix(&p.frame);
    let tq = frame_matrix(&q.frame);
    let tq_inv = unimodular_inverse(&tq);
    let mut mid = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            mid[i][j] = if i < k && j < k { u[i][j] } else { (i == j) as i64 };
        }
    }
    let mul = |a: &Vec<Vec<i64>>, b: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|l| a[i][l] * b[l][j]).sum()).collect()).collect()
    };
    let mat = mul(&tq_inv, &mul(&mid, &tp));
    let mut tt = vec![0i64; n];
    tt[..k].copy_from_slice(&t[..k]);
    let mx_op: Vec<i64> = mat.iter().map(|r| dot(r, &p.frame.origin)).collect();
    let tq_inv_t: Vec<i64> = tq_inv.iter().map(|r| dot(r, &tt)).collect();
    let translation: Vec<i64> = (0..n).map(|i| q.frame.origin[i] + tq_inv_t[i] - mx_op[i]).collect();
    let map = AffineLatticeMap { matrix: mat, translation };
    let qset: HashSet<Vec<i64>> = q.vertices.iter().cloned().collect();
    if p.vertices.iter().all(|v| qset.contains(&map.apply(v))) {
        Some(map)
    } else {
        None
    }
}

/// A linear unimodular map (zero translation) between full-dimensional polytopes.
pub fn linear_equivalence(p: &LatticePolytope, q: &LatticePolytope) -> Option<AffineLatticeMap> {
    let n = p.ambient_dim();
    if p.dim() != n || q.dim() != n || n < 2 {
        return unimodular_map_between(p, q).filter(|m| m.translation.iter().all(|&x| x == 0));
    }
    local_maps(p.vertices(), q.vertices(), false)
        .into_iter()
        .find(|(_, t)| t.iter().all(|&x| x == 0))
        .map(|(u, t)| AffineLatticeMap { matrix: u, translation: t })
}
