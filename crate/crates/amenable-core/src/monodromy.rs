//! Rank bookkeeping for local monodromy: ramification, defect and the dimensions of
//! intersection cohomology that follow from Euler-Poincare.

use crate::arith::{fmt_q, parse_q, Q};
use crate::picard_fuchs::Location;
use crate::upoly::{complex_roots, UPoly};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MonodromyError {
    #[error("blocks at {0} have total size {1}, rank is {2}")]
    RankMismatch(String, usize, usize),
    #[error("point {0} appears twice")]
    DuplicatePoint(String),
    #[error("malformed monodromy data: {0}")]
    Malformed(String),
}

/// A Jordan block of the monodromy with eigenvalue `exp(2 pi i theta)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub theta: Q,
    pub size: usize,
}

impl Block {
    pub fn new(theta: Q, size: usize) -> Self {
        Block { theta, size }
    }

    fn unipotent(&self) -> bool {
        self.theta.is_integer()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct JordanSpec {
    pub blocks: Vec<Block>,
}

impl JordanSpec {
    pub fn new(blocks: Vec<Block>) -> Self {
        JordanSpec { blocks }
    }

    /// Single blocks of size 1 with the given rotation numbers.
    pub fn diagonal(thetas: &[Q]) -> Self {
        JordanSpec { blocks: thetas.iter().map(|t| Block::new(t.clone(), 1)).collect() }
    }

    pub fn size(&self) -> usize {
        self.blocks.iter().map(|b| b.size).sum()
    }

    /// Maximally unipotent: one unipotent block.
    pub fn is_mum(&self) -> bool {
        self.blocks.len() == 1 && self.blocks[0].unipotent()
    }
}

/// `dim V / V^T = rank(T - I)`.
pub fn rank_t_minus_i(spec: &JordanSpec) -> usize {
    spec.blocks.iter().map(|b| if b.unipotent() { b.size - 1 } else { b.size }).sum()
}

/// `dim coker(T - I)`, the number of blocks with eigenvalue 1.
pub fn coker_dim(spec: &JordanSpec) -> usize {
    spec.blocks.iter().filter(|b| b.unipotent()).count()
}

/// `dim ker(T - I)`, which equals the cokernel dimension.
pub fn kernel_dim(spec: &JordanSpec) -> usize {
    spec.size() - rank_t_minus_i(spec)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonodromyRecord {
    pub point: Location,
    pub spec: JordanSpec,
}

fn describe(p: &Location) -> String {
    match p {
        Location::Zero => "0".into(),
        Location::Infinity => "inf".into(),
        Location::Rational(a) => fmt_q(a),
        Location::Algebraic { minpoly, root_index } => format!("{}#{root_index}", minpoly.format("t")),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSystemReport {
    pub rank: usize,
    pub rf: usize,
    pub defect: i64,
    /// `rank IH^1(P^1)`, equal to the defect.
    pub ih1_closed: i64,
    /// `rank IH^1(P^1 minus infinity)`.
    pub ih1_open: i64,
    pub per_point: Vec<(String, usize)>,
    /// Defect zero.
    pub extremal: bool,
    /// A negative defect cannot come from a geometric family.
    pub non_physical: bool,
    /// The identities assume no global invariants on the affine line.
    pub assumes_no_global_invariants: bool,
}

pub fn ramification(records: &[MonodromyRecord], rank: usize) -> Result<LocalSystemReport, MonodromyError> {
    let mut seen = std::collections::BTreeSet::new();
    let mut per_point = Vec::new();
    let mut rf = 0usize;
    let mut finite = 0usize;
    for r in records {
        let name = describe(&r.point);
        if !seen.insert(name.clone()) {
            return Err(MonodromyError::DuplicatePoint(name));
        }
        if r.spec.size() != rank {
            return Err(MonodromyError::RankMismatch(name, r.spec.size(), rank));
        }
        let k = rank_t_minus_i(&r.spec);
        rf += k;
        if r.point != Location::Infinity {
            finite += k;
        }
        per_point.push((name, k));
    }
    let defect = rf as i64 - 2 * rank as i64;
    Ok(LocalSystemReport {
        rank,
        rf,
        defect,
        ih1_closed: defect,
        ih1_open: finite as i64 - rank as i64,
        per_point,
        extremal: defect == 0,
        non_physical: defect < 0,
        assumes_no_global_invariants: true,
    })
}

/// Heuristic local type read off from exponents (logarithms are not checked).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExponentType {
    Mum,
    Conifold,
    Other,
}

pub fn classify_from_exponents(exponents: &[Q]) -> ExponentType {
    let mut e = exponents.to_vec();
    e.sort();
    let ints = |v: &[i64]| v.iter().map(|&x| Q::from_integer(x.into())).collect::<Vec<Q>>();
    if e.len() == 4 && e == ints(&[0, 0, 0, 0]) {
        ExponentType::Mum
    } else if e.len() == 4 && e == ints(&[0, 1, 1, 2]) {
        ExponentType::Conifold
    } else {
        ExponentType::Other
    }
}

/// `deg_s - sum rank(T_sigma - I)` over the finite nonzero singular points of the `s = t^i` plane.
///
/// Points of the `t`-plane are pushed forward by `t -> t^i`; each image point is counted once,
/// with the rank of any of its preimages.
pub fn remark_r(deg_s: usize, records: &[MonodromyRecord], fano_index: usize) -> i64 {
    let i = fano_index.max(1) as i32;
    let mut images: Vec<(Complex64, usize)> = Vec::new();
    for r in records {
        let z = match &r.point {
            Location::Zero | Location::Infinity => continue,
            Location::Rational(a) => Complex64::new(a.to_f64().unwrap_or(f64::NAN), 0.0),
            Location::Algebraic { minpoly, root_index } => {
                let roots = complex_roots(minpoly, 30);
                let Some(w) = roots.get(*root_index) else { continue };
                Complex64::new(w.re.to_f64(), w.im.to_f64())
            }
        };
        let s = z.powi(i);
        if !images.iter().any(|(w, _)| (w - s).norm() <= 1e-9 * (1.0 + s.norm())) {
            images.push((s, rank_t_minus_i(&r.spec)));
        }
    }
    deg_s as i64 - images.iter().map(|&(_, k)| k as i64).sum::<i64>()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockJson {
    pub theta: String,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WhereJson {
    Named(String),
    Algebraic { minpoly: String, root_index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointJson {
    #[serde(rename = "where")]
    pub location: WhereJson,
    pub blocks: Vec<BlockJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonodromyJson {
    pub rank: usize,
    pub points: Vec<PointJson>,
}

impl MonodromyJson {
    pub fn records(&self) -> Result<Vec<MonodromyRecord>, MonodromyError> {
        self.points
            .iter()
            .map(|p| {
                let point = match &p.location {
                    WhereJson::Named(s) if s == "0" => Location::Zero,
                    WhereJson::Named(s) if s == "inf" => Location::Infinity,
                    WhereJson::Named(s) => Location::Rational(parse_q(s).ok_or_else(|| MonodromyError::Malformed(s.clone()))?),
                    WhereJson::Algebraic { minpoly, root_index } => Location::Algebraic {
                        minpoly: UPoly::parse(minpoly, "t").ok_or_else(|| MonodromyError::Malformed(minpoly.clone()))?.monic(),
                        root_index: *root_index,
                    },
                };
                let blocks = p
                    .blocks
                    .iter()
                    .map(|b| Ok(Block::new(parse_q(&b.theta).ok_or_else(|| MonodromyError::Malformed(b.theta.clone()))?, b.size)))
                    .collect::<Result<Vec<_>, MonodromyError>>()?;
                Ok(MonodromyRecord { point, spec: JordanSpec::new(blocks) })
            })
            .collect()
    }

    pub fn from_value(v: &serde_json::Value) -> Result<Self, MonodromyError> {
        serde_json::from_value(v.clone()).map_err(|e| MonodromyError::Malformed(e.to_string()))
    }
}

/// `theta` reduced into `[0, 1)`.
pub fn reduce_theta(theta: &Q) -> Q {
    theta - theta.floor()
}

/// Multiset of rotation numbers mod Z; comparable with exponents of the operator.
pub fn rotation_multiset(spec: &JordanSpec) -> Vec<Q> {
    let mut out: Vec<Q> =
        spec.blocks.iter().flat_map(|b| std::iter::repeat(reduce_theta(&b.theta)).take(b.size)).collect();
    out.sort();
    out
}

/// Exponents reduced mod Z, sorted.
pub fn exponents_mod_z(e: &[Q]) -> Vec<Q> {
    let mut out: Vec<Q> = e.iter().map(reduce_theta).collect();
    out.sort();
    out
}
