//! Lattice Minkowski decompositions into width-one summands.
//!
//! Summands of a polytope `δ` are read off from its edge graph: a summand assigns
//! every edge `e` a length `k_e` in `0..=len(e)` such that the induced vertex
//! positions are consistent. A decomposition is then a multiset of such length
//! vectors adding up to the edge lengths of `δ`, subject to the lattice-point
//! identity `δ ∩ M = Σ (δ_i ∩ M)`.

use crate::lattice::{unimodular_map_between, GeometryError, LatticePolytope, PolytopeJson};
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MinkowskiError {
    #[error("decomposition search supports dimension <= 3, got {0}")]
    DimensionTooLarge(usize),
    #[error("decompositions have different targets")]
    TargetMismatch,
    #[error("not a face of the target")]
    NotAFace,
    #[error("polytope is not reflexive")]
    NotReflexive,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summand {
    /// Translated so that its lexicographically smallest vertex is the origin.
    pub polytope: LatticePolytope,
    pub mult: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinkowskiDecomposition {
    pub target: LatticePolytope,
    pub summands: Vec<Summand>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SummandClass {
    UnitSegment,
    AnTriangle(u64),
    Width1Other,
    NotWidth1,
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Upper bound on the number of summands counted with multiplicity.
    pub max_summands: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { max_summands: 8 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SummandJson {
    pub polytope: PolytopeJson,
    pub mult: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub target: PolytopeJson,
    pub summands: Vec<SummandJson>,
}

fn canonical(p: &LatticePolytope) -> LatticePolytope {
    let m = p.vertices()[0].clone();
    let neg: Vec<i64> = m.iter().map(|x| -x).collect();
    p.translate(&neg)
}

fn same_up_to_translation(a: &LatticePolytope, b: &LatticePolytope) -> bool {
    canonical(a) == canonical(b)
}

impl MinkowskiDecomposition {
    /// The decomposition `{(δ, 1)}`.
    pub fn trivial(target: &LatticePolytope) -> Self {
        let summands = if target.dim() == 0 { vec![] } else { vec![Summand { polytope: canonical(target), mult: 1 }] };
        MinkowskiDecomposition { target: target.clone(), summands }
    }

    /// Builds a decomposition, merging translates of the same summand and dropping points.
    pub fn new(target: &LatticePolytope, parts: Vec<(LatticePolytope, usize)>) -> Self {
        let mut merged: BTreeMap<Vec<Vec<i64>>, (LatticePolytope, usize)> = BTreeMap::new();
        for (p, k) in parts {
            if p.dim() == 0 || k == 0 {
                continue;
            }
            let c = canonical(&p);
            merged.entry(c.vertices().to_vec()).or_insert((c, 0)).1 += k;
        }
        let summands = merged.into_values().map(|(polytope, mult)| Summand { polytope, mult }).collect();
        MinkowskiDecomposition { target: target.clone(), summands }
    }

    /// Number of summands counted with multiplicity.
    pub fn len(&self) -> usize {
        self.summands.iter().map(|s| s.mult).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    fn copies(&self) -> Vec<&LatticePolytope> {
        self.summands.iter().flat_map(|s| std::iter::repeat_n(&s.polytope, s.mult)).collect()
    }

    /// Minkowski sum of all summands with multiplicity.
    pub fn sum(&self) -> Option<LatticePolytope> {
        let copies = self.copies();
        let mut it = copies.into_iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, p| acc.minkowski_sum(p)))
    }

    /// The sum reproduces the target up to translation.
    pub fn sums_to_target(&self) -> bool {
        match self.sum() {
            Some(s) => same_up_to_translation(&s, &self.target),
            None => self.target.dim() == 0,
        }
    }

    /// The lattice points of the target are exactly the sums of lattice points of the summands.
    pub fn lattice_identity_holds(&self) -> bool {
        let Some(s) = self.sum() else {
            return self.target.dim() == 0;
        };
        if !same_up_to_translation(&s, &self.target) {
            return false;
        }
        let parts: Vec<Vec<Vec<i64>>> = self.copies().iter().map(|p| p.lattice_points()).collect();
        set_sum(&parts).len() == self.target.lattice_points().len()
    }

    pub fn all_width1(&self) -> bool {
        self.summands.iter().all(|s| s.polytope.lattice_width().0 == 1)
    }

    pub fn to_json(&self) -> DecompositionJson {
        DecompositionJson {
            target: self.target.to_json(),
            summands: self.summands.iter().map(|s| SummandJson { polytope: s.polytope.to_json(), mult: s.mult }).collect(),
        }
    }

    pub fn from_json(j: &DecompositionJson) -> Result<Self, GeometryError> {
        let target = j.target.to_polytope()?;
        let parts = j.summands.iter().map(|s| Ok((s.polytope.to_polytope()?, s.mult))).collect::<Result<Vec<_>, GeometryError>>()?;
        Ok(Self::new(&target, parts))
    }
}

fn set_sum(parts: &[Vec<Vec<i64>>]) -> HashSet<Vec<i64>> {
    let mut acc: HashSet<Vec<i64>> = HashSet::new();
    let Some(first) = parts.first() else {
        return acc;
    };
    acc.extend(first.iter().cloned());
    for p in &parts[1..] {
        let mut next = HashSet::with_capacity(acc.len() * p.len());
        for a in &acc {
            for b in p {
                next.insert(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        acc = next;
    }
    acc
}

pub fn classify_summand(d: &LatticePolytope) -> SummandClass {
    let (w, _) = d.lattice_width();
    if w != 1 {
        return SummandClass::NotWidth1;
    }
    match (d.dim(), d.vertices().len()) {
        (1, _) => SummandClass::UnitSegment,
        (2, 3) => SummandClass::AnTriangle(d.normalized_volume()),
        _ => SummandClass::Width1Other,
    }
}

struct EdgeGraph {
    vertices: Vec<Vec<i64>>,
    /// `(a, b, primitive direction a -> b, lattice length)`
    edges: Vec<(usize, usize, Vec<i64>, i64)>,
}

impl EdgeGraph {
    fn new(d: &LatticePolytope) -> Self {
        let vertices = d.vertices().to_vec();
        let edges = d
            .edges()
            .into_iter()
            .map(|(a, b)| {
                let dv: Vec<i64> = vertices[b].iter().zip(&vertices[a]).map(|(x, y)| x - y).collect();
                let len = dv.iter().fold(0i64, |g, x| g.gcd(x));
                (a, b, dv.iter().map(|x| x / len).collect(), len)
            })
            .collect();
        EdgeGraph { vertices, edges }
    }

    /// Every summand as a vector of edge lengths with its vertex positions (vertex 0 at the origin).
    fn summands(&self) -> Vec<(Vec<i64>, Vec<Vec<i64>>)> {
        let nv = self.vertices.len();
        let n = self.vertices[0].len();
        let mut adj: Vec<Vec<usize>> = vec![vec![]; nv];
        for (i, (a, b, _, _)) in self.edges.iter().enumerate() {
            adj[*a].push(i);
            adj[*b].push(i);
        }
        // BFS order with a parent edge for every non-root vertex
        let mut order = vec![0usize];
        let mut parent = vec![usize::MAX; nv];
        let mut seen = vec![false; nv];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &e in &adj[v] {
                let (a, b, _, _) = &self.edges[e];
                let u = if *a == v { *b } else { *a };
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = e;
                    order.push(u);
                    queue.push_back(u);
                }
            }
        }
        let mut pos: Vec<Option<Vec<i64>>> = vec![None; nv];
        pos[0] = Some(vec![0; n]);
        let mut out = Vec::new();
        self.place(1, &order, &parent, &adj, &mut pos, &mut out);
        out
    }

    fn edge_length_of(&self, e: usize, pos: &[Option<Vec<i64>>]) -> Option<i64> {
        let (a, b, dir, len) = &self.edges[e];
        let (pa, pb) = (pos[*a].as_ref()?, pos[*b].as_ref()?);
        let d: Vec<i64> = pb.iter().zip(pa).map(|(x, y)| x - y).collect();
        let i = dir.iter().position(|&x| x != 0).unwrap();
        let k = d[i] / dir[i];
        if k < 0 || k > *len || d.iter().zip(dir).any(|(x, y)| *x != k * y) {
            return None;
        }
        Some(k)
    }

    fn place(
        &self,
        depth: usize,
        order: &[usize],
        parent: &[usize],
        adj: &[Vec<usize>],
        pos: &mut Vec<Option<Vec<i64>>>,
        out: &mut Vec<(Vec<i64>, Vec<Vec<i64>>)>,
    ) {
        if depth == order.len() {
            let ks: Option<Vec<i64>> = (0..self.edges.len()).map(|e| self.edge_length_of(e, pos)).collect();
            if let Some(ks) = ks {
                out.push((ks, pos.iter().map(|p| p.clone().unwrap()).collect()));
            }
            return;
        }
        let u = order[depth];
        let e = parent[u];
        let (a, b, dir, len) = &self.edges[e];
        let (from, sign) = if *b == u { (*a, 1) } else { (*b, -1) };
        let base = pos[from].clone().unwrap();
        for k in 0..=*len {
            pos[u] = Some(base.iter().zip(dir).map(|(x, d)| x + sign * k * d).collect());
            let ok = adj[u].iter().all(|&f| {
                let (fa, fb, _, _) = &self.edges[f];
                pos[*fa].is_none() || pos[*fb].is_none() || self.edge_length_of(f, pos).is_some()
            });
            if ok {
                self.place(depth + 1, order, parent, adj, pos, out);
            }
        }
        pos[u] = None;
    }
}

/// All lattice Minkowski decompositions of `d` into width-one summands.
pub fn decompose_width1(d: &LatticePolytope) -> Result<Vec<MinkowskiDecomposition>, MinkowskiError> {
    decompose_width1_with(d, SearchOptions::default())
}

pub fn decompose_width1_with(d: &LatticePolytope, opts: SearchOptions) -> Result<Vec<MinkowskiDecomposition>, MinkowskiError> {
    if d.dim() > 3 {
        return Err(MinkowskiError::DimensionTooLarge(d.dim()));
    }
    if d.dim() == 0 {
        return Ok(vec![]);
    }
    let g = EdgeGraph::new(d);
    let lens: Vec<i64> = g.edges.iter().map(|e| e.3).collect();
    let cands: Vec<(Vec<i64>, LatticePolytope)> = g
        .summands()
        .into_iter()
        .filter(|(ks, _)| ks.iter().any(|&k| k != 0))
        .map(|(ks, pts)| (ks, LatticePolytope::hull(&pts).expect("nonempty")))
        .filter(|(_, p)| p.lattice_width().0 == 1)
        .collect();
    let mut found: BTreeSet<Vec<(Vec<Vec<i64>>, usize)>> = BTreeSet::new();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut rest = lens.clone();
    let target_points = d.lattice_points().len();
    let mut visit = |chosen: &[usize]| {
        let dec = MinkowskiDecomposition::new(d, chosen.iter().map(|&i| (cands[i].1.clone(), 1)).collect());
        let key: Vec<(Vec<Vec<i64>>, usize)> = dec.summands.iter().map(|s| (s.polytope.vertices().to_vec(), s.mult)).collect();
        if found.contains(&key) {
            return;
        }
        let parts: Vec<Vec<Vec<i64>>> = chosen.iter().map(|&i| cands[i].1.lattice_points()).collect();
        if set_sum(&parts).len() == target_points {
            found.insert(key);
            out.push(dec);
        }
    };
    partitions(&cands, 0, &mut rest, &mut chosen, opts.max_summands, &mut visit);
    out.sort_by_key(|m| std::cmp::Reverse(m.len()));
    Ok(out)
}

fn partitions(
    cands: &[(Vec<i64>, LatticePolytope)],
    start: usize,
    rest: &mut Vec<i64>,
    chosen: &mut Vec<usize>,
    cap: usize,
    visit: &mut impl FnMut(&[usize]),
) {
    if rest.iter().all(|&r| r == 0) {
        visit(chosen);
        return;
    }
    if chosen.len() == cap {
        return;
    }
    for i in start..cands.len() {
        let ks = &cands[i].0;
        if ks.iter().zip(rest.iter()).any(|(k, r)| k > r) {
            continue;
        }
        for (r, k) in rest.iter_mut().zip(ks) {
            *r -= k;
        }
        chosen.push(i);
        partitions(cands, i, rest, chosen, cap, visit);
        chosen.pop();
        for (r, k) in rest.iter_mut().zip(ks) {
            *r += k;
        }
    }
}

/// Whether `m1` refines `m2`: the summands of `m1` (with multiplicity) can be
/// grouped so that each group sums to one summand of `m2`, again with multiplicity.
pub fn refines(m1: &MinkowskiDecomposition, m2: &MinkowskiDecomposition) -> Result<bool, MinkowskiError> {
    if !same_up_to_translation(&m1.target, &m2.target) {
        return Err(MinkowskiError::TargetMismatch);
    }
    let fine = m1.copies();
    let coarse = m2.copies();
    if coarse.is_empty() {
        return Ok(fine.is_empty());
    }
    let mut groups: Vec<Vec<usize>> = vec![vec![]; coarse.len()];
    Ok(assign(&fine, &coarse, 0, &mut groups))
}

fn assign(fine: &[&LatticePolytope], coarse: &[&LatticePolytope], i: usize, groups: &mut Vec<Vec<usize>>) -> bool {
    if i == fine.len() {
        return groups.iter().zip(coarse).all(|(g, c)| {
            let mut it = g.iter();
            let Some(&first) = it.next() else {
                return false;
            };
            let s = it.fold(fine[first].clone(), |acc, &j| acc.minkowski_sum(fine[j]));
            same_up_to_translation(&s, c)
        });
    }
    let mut tried: Vec<(&LatticePolytope, Vec<usize>)> = Vec::new();
    for j in 0..coarse.len() {
        // identical targets with identical contents are interchangeable
        if tried.iter().any(|(c, g)| same_up_to_translation(c, coarse[j]) && *g == groups[j]) {
            continue;
        }
        tried.push((coarse[j], groups[j].clone()));
        groups[j].push(i);
        if partial_fits(fine, &groups[j], coarse[j]) && assign(fine, coarse, i + 1, groups) {
            return true;
        }
        groups[j].pop();
    }
    false
}

/// Necessary condition: the partial sum is no wider than the target along the target's facet normals.
fn partial_fits(fine: &[&LatticePolytope], group: &[usize], target: &LatticePolytope) -> bool {
    let mut dirs: Vec<Vec<i64>> = target.facets().iter().map(|h| h.normal.clone()).collect();
    let n = target.ambient_dim();
    dirs.extend((0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()));
    dirs.iter().all(|a| {
        let w: i64 = group.iter().map(|&j| fine[j].max_of(a) - fine[j].min_of(a)).sum();
        w <= target.max_of(a) - target.min_of(a)
    })
}

/// A functional minimized on `face` over `target`, if `face` is a face.
fn supporting_functional(target: &LatticePolytope, face: &LatticePolytope) -> Option<Vec<i64>> {
    let n = target.ambient_dim();
    if face.vertices().iter().any(|v| !target.vertices().contains(v)) {
        return None;
    }
    let mut a = vec![0i64; n];
    for h in target.facets() {
        if face.vertices().iter().all(|v| dot(&h.normal, v) == h.offset) {
            for (x, y) in a.iter_mut().zip(&h.normal) {
                *x += y;
            }
        }
    }
    let mut got: Vec<usize> = target.face_minimizing(&a);
    got.sort();
    let want: Vec<usize> = face.vertices().iter().map(|v| target.vertices().iter().position(|w| w == v).unwrap()).collect();
    let mut want = want;
    want.sort();
    (got == want).then_some(a)
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The decomposition of a face induced by selecting the matching face of every summand.
pub fn restrict(m: &MinkowskiDecomposition, face: &LatticePolytope) -> Result<MinkowskiDecomposition, MinkowskiError> {
    if face.vertices() == m.target.vertices() {
        return Ok(m.clone());
    }
    let a = supporting_functional(&m.target, face).ok_or(MinkowskiError::NotAFace)?;
    let parts = m
        .summands
        .iter()
        .map(|s| (s.polytope.sub_polytope(&s.polytope.face_minimizing(&a)), s.mult))
        .collect();
    Ok(MinkowskiDecomposition::new(face, parts))
}

/// A choice of decomposition for every face, keyed by vertex indices in the ambient polytope.
#[derive(Debug, Clone, Default)]
pub struct MinkowskiDatum {
    pub decompositions: BTreeMap<Vec<usize>, MinkowskiDecomposition>,
}

impl MinkowskiDatum {
    /// Incident face pairs `(δ', δ)` where `M(δ)|δ'` is not refined by `M(δ')`.
    pub fn violations(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut bad = Vec::new();
        for (big, mb) in &self.decompositions {
            for (small, ms) in &self.decompositions {
                if small.len() >= big.len() || !small.iter().all(|i| big.contains(i)) {
                    continue;
                }
                let ok = restrict(mb, &ms.target).and_then(|r| refines(ms, &r)).unwrap_or(false);
                if !ok {
                    bad.push((small.clone(), big.clone()));
                }
            }
        }
        bad
    }
}

#[derive(Debug, Clone)]
pub struct FaceDecompositions {
    pub vertices: Vec<usize>,
    pub dim: usize,
    pub face: LatticePolytope,
    pub decompositions: Vec<MinkowskiDecomposition>,
}

#[derive(Debug, Clone)]
pub struct AmenablePolytopeReport {
    pub faces: Vec<FaceDecompositions>,
    /// Every proper face of positive dimension has a width-one decomposition.
    pub amenable: bool,
    pub datum: MinkowskiDatum,
    /// The datum satisfies the compatibility law on all incident pairs.
    pub coherent: bool,
}

impl AmenablePolytopeReport {
    pub fn failing_faces(&self) -> Vec<&FaceDecompositions> {
        self.faces.iter().filter(|f| f.decompositions.is_empty()).collect()
    }
}

/// Face-wise width-one decomposability of a reflexive polytope, with a witness datum.
pub fn is_amenable_polytope(p: &LatticePolytope) -> Result<AmenablePolytopeReport, MinkowskiError> {
    if !p.is_reflexive()? {
        return Err(MinkowskiError::NotReflexive);
    }
    if p.dim() > 4 {
        return Err(MinkowskiError::DimensionTooLarge(p.dim()));
    }
    let mut faces = Vec::new();
    for (dim, idx) in p.face_index_sets() {
        if dim == 0 || dim == p.dim() {
            continue;
        }
        let face = p.sub_polytope(&idx);
        let decompositions = decompose_width1(&face)?;
        faces.push(FaceDecompositions { vertices: idx, dim, face, decompositions });
    }
    let amenable = faces.iter().all(|f| !f.decompositions.is_empty());
    let mut datum = MinkowskiDatum::default();
    let mut coherent = true;
    for f in &faces {
        let below: Vec<&MinkowskiDecomposition> = datum
            .decompositions
            .iter()
            .filter(|(k, _)| k.len() < f.vertices.len() && k.iter().all(|i| f.vertices.contains(i)))
            .map(|(_, m)| m)
            .collect();
        let compatible = |cand: &MinkowskiDecomposition| {
            below.iter().all(|ms| restrict(cand, &ms.target).and_then(|r| refines(ms, &r)).unwrap_or(false))
        };
        let pick = f.decompositions.iter().find(|c| compatible(c));
        match pick {
            Some(c) => {
                datum.decompositions.insert(f.vertices.clone(), c.clone());
            }
            None => {
                coherent = false;
                if let Some(c) = f.decompositions.first() {
                    datum.decompositions.insert(f.vertices.clone(), c.clone());
                }
            }
        }
    }
    Ok(AmenablePolytopeReport { faces, amenable, datum, coherent: coherent && amenable })
}

/// Polytopes agree up to an affine unimodular map of their intrinsic lattices.
pub fn intrinsically_equivalent(a: &LatticePolytope, b: &LatticePolytope) -> bool {
    a.dim() == b.dim() && unimodular_map_between(&a.to_local(), &b.to_local()).is_some()
}

/// Summand lists agree as multisets up to intrinsic unimodular equivalence.
pub fn summands_match(a: &[(LatticePolytope, usize)], b: &[(LatticePolytope, usize)]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(|(p, k)| {
        let hit = (0..b.len()).find(|&j| !used[j] && b[j].1 == *k && intrinsically_equivalent(p, &b[j].0));
        if let Some(j) = hit {
            used[j] = true;
        }
        hit.is_some()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(pts: &[&[i64]]) -> LatticePolytope {
        LatticePolytope::hull(&pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn shapes(m: &MinkowskiDecomposition) -> Vec<(Vec<Vec<i64>>, usize)> {
        m.summands.iter().map(|s| (s.polytope.vertices().to_vec(), s.mult)).collect()
    }

    #[test]
    fn segments() {
        let unit = poly(&[&[0, 0], &[1, 0]]);
        let ds = decompose_width1(&unit).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds[0], MinkowskiDecomposition::trivial(&unit));
        let long = poly(&[&[0, 0], &[3, 3]]);
        let ds = decompose_width1(&long).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(shapes(&ds[0]), vec![(vec![vec![0, 0], vec![1, 1]], 3)]);
    }

    #[test]
    fn a2_triangle_is_indecomposable() {
        let t = poly(&[&[0, 0], &[1, 0], &[0, 2]]);
        let ds = decompose_width1(&t).unwrap();
        assert_eq!(ds, vec![MinkowskiDecomposition::trivial(&t)]);
        assert_eq!(classify_summand(&t), SummandClass::AnTriangle(2));
    }

    #[test]
    fn square_and_hexagon() {
        // [0,2]^2: {sq,2}, {sq,h,v}, {h,h,v,v}, {1x2 rectangle, h}, {2x1 rectangle, v}
        let sq = poly(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2]]);
        let ds = decompose_width1(&sq).unwrap();
        assert_eq!(ds.len(), 5);
        assert!(ds.iter().all(|d| d.sums_to_target() && d.lattice_identity_holds() && d.all_width1()));
        // the hexagon has width two: two triangles or three segments
        let hex = poly(&[&[0, 0], &[1, 0], &[2, 1], &[2, 2], &[1, 2], &[0, 1]]);
        let ds = decompose_width1(&hex).unwrap();
        let lens: BTreeSet<usize> = ds.iter().map(|d| d.len()).collect();
        assert_eq!(lens, BTreeSet::from([2, 3]));
    }

    #[test]
    fn lattice_point_identity_rejects_sums() {
        let t2 = poly(&[&[0, 0], &[2, 0], &[0, 2]]);
        let ds = decompose_width1(&t2).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds[0].summands[0].mult, 2);
        // two unit segments sum to this parallelogram but miss its interior point (1,1)
        let par = poly(&[&[0, 0], &[1, 0], &[1, 2], &[2, 2]]);
        assert!(decompose_width1(&par).unwrap().is_empty());
    }

    #[test]
    fn pentagon_restriction() {
        // triangle conv{(0,0),(1,0),(0,1)} plus the vertical segment
        let pent = poly(&[&[0, 0], &[1, 0], &[1, 1], &[0, 2]]);
        let m = MinkowskiDecomposition::new(
            &pent,
            vec![(poly(&[&[0, 0], &[1, 0], &[0, 1]]), 1), (poly(&[&[0, 0], &[0, 1]]), 1)],
        );
        assert!(m.sums_to_target() && m.lattice_identity_holds());
        let left = poly(&[&[0, 0], &[0, 2]]);
        let r = restrict(&m, &left).unwrap();
        assert_eq!(shapes(&r), vec![(vec![vec![0, 0], vec![0, 1]], 2)]);
        let vertex = poly(&[&[1, 0]]);
        assert!(restrict(&m, &vertex).unwrap().is_empty());
        assert_eq!(restrict(&m, &poly(&[&[0, 0], &[2, 0]])), Err(MinkowskiError::NotAFace));
    }

    #[test]
    fn refinement_examples() {
        let sq = poly(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2]]);
        let ds = decompose_width1(&sq).unwrap();
        let triv = MinkowskiDecomposition::trivial(&sq);
        for d in &ds {
            assert!(refines(d, &triv).unwrap());
        }
        let unit = poly(&[&[0, 0], &[1, 1]]);
        let k = MinkowskiDecomposition::new(&sq, vec![(unit.clone(), 2)]);
        let ones = MinkowskiDecomposition { target: sq.clone(), summands: vec![Summand { polytope: unit.clone(), mult: 1 }; 2] };
        assert!(refines(&k, &ones).unwrap());
        let a = poly(&[&[0, 0], &[1, 0]]);
        let b = poly(&[&[0, 0], &[0, 1]]);
        let seg = poly(&[&[0, 0], &[2, 0]]);
        let ab = MinkowskiDecomposition::new(&seg, vec![(a.clone(), 1), (b, 1)]);
        let aa = MinkowskiDecomposition::new(&seg, vec![(a, 2)]);
        assert!(!refines(&ab, &aa).unwrap());
    }

    #[test]
    fn classification() {
        assert_eq!(classify_summand(&poly(&[&[0, 0], &[1, 0]])), SummandClass::UnitSegment);
        assert_eq!(classify_summand(&poly(&[&[0, 0], &[1, 0], &[0, 3]])), SummandClass::AnTriangle(3));
        assert_eq!(classify_summand(&poly(&[&[0, 0], &[2, 0]])), SummandClass::NotWidth1);
        assert_eq!(classify_summand(&poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])), SummandClass::Width1Other);
    }

    #[test]
    fn amenable_cross_polytope() {
        let p = poly(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]);
        let r = is_amenable_polytope(&p).unwrap();
        assert!(r.amenable && r.coherent);
        assert!(r.datum.violations().is_empty());
        let big = poly(&[&[2, 0], &[0, 2], &[-2, -2]]);
        assert_eq!(is_amenable_polytope(&big).unwrap_err(), MinkowskiError::NotReflexive);
    }

    #[test]
    fn json_roundtrip() {
        let sq = poly(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2]]);
        for d in decompose_width1(&sq).unwrap() {
            let j = serde_json::to_string(&d.to_json()).unwrap();
            let back = MinkowskiDecomposition::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
            assert_eq!(back, d);
        }
    }
}
