//! Bundled reference data for the Grassmannian complete intersections and the
//! Beukers-Peters polynomial.

use crate::arith::Q;
use crate::laurent::{parse, LaurentPolynomial, ParseError};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Pullback {
    pub id: String,
    pub power: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TMax {
    /// `t_max^power` is the root of `minpoly` of largest modulus.
    pub power: usize,
    pub minpoly: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approx: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CorpusEntry {
    pub id: String,
    pub label: String,
    pub case: Option<String>,
    pub grassmannian: Option<[usize; 2]>,
    pub fano_index: usize,
    pub polynomial: Option<String>,
    /// Leading terms of the period series as printed.
    pub series: String,
    pub operator: String,
    pub pullback_of: Option<Pullback>,
    pub monodromy: Option<serde_json::Value>,
    pub t_max: Option<TMax>,
    pub triangulation: Option<serde_json::Value>,
    pub facets: Option<Vec<String>>,
}

const RAW: &[(&str, &str)] = &[
    ("lg_1_3_gr25", include_str!("../corpus/lg_1_3_gr25.json")),
    ("lg_1_1_gr25", include_str!("../corpus/lg_1_1_gr25.json")),
    ("lg_2_2_gr25", include_str!("../corpus/lg_2_2_gr25.json")),
    ("lg_1_2_gr25", include_str!("../corpus/lg_1_2_gr25.json")),
    ("lg_1112_gr26", include_str!("../corpus/lg_1112_gr26.json")),
    ("lg_1111_gr26", include_str!("../corpus/lg_1111_gr26.json")),
    ("lg_111111_gr27", include_str!("../corpus/lg_111111_gr27.json")),
    ("beukers_peters", include_str!("../corpus/beukers_peters.json")),
];

/// Identifiers of all bundled entries.
pub fn ids() -> Vec<&'static str> {
    RAW.iter().map(|(id, _)| *id).collect()
}

/// Raw JSON text of an entry; accepts `corpus/<id>` as well as `<id>`.
pub fn raw(id: &str) -> Option<&'static str> {
    let id = id.strip_prefix("corpus/").unwrap_or(id);
    RAW.iter().find(|(k, _)| *k == id).map(|(_, v)| *v)
}

pub fn entry(id: &str) -> Option<CorpusEntry> {
    raw(id).map(|s| serde_json::from_str(s).expect("bundled corpus is valid JSON"))
}

pub fn entries() -> Vec<CorpusEntry> {
    ids().into_iter().filter_map(entry).collect()
}

/// The entries for the six Grassmannian cases carrying a Laurent polynomial.
pub fn theorem_cases() -> Vec<CorpusEntry> {
    entries().into_iter().filter(|e| e.case.is_some()).collect()
}

impl CorpusEntry {
    pub fn laurent(&self) -> Option<Result<LaurentPolynomial, ParseError>> {
        self.polynomial.as_ref().map(|s| parse(s).map(|p| p.poly))
    }

    /// Printed series coefficients `c_0, c_1, ...` (zeros filled in).
    pub fn series_values(&self) -> Vec<Q> {
        let p = parse(&self.series).expect("series text parses").poly;
        let deg = p.max_exponents().first().copied().unwrap_or(0).max(0) as usize;
        (0..=deg).map(|k| p.coeff(&[k as i64])).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    #[test]
    fn loads_everything() {
        let all = entries();
        assert_eq!(all.len(), 8);
        assert_eq!(theorem_cases().len(), 6);
        for e in &all {
            if let Some(p) = e.laurent() {
                let p = p.unwrap();
                assert_eq!(p.nvars(), if e.id == "beukers_peters" { 3 } else { 4 }, "{}", e.id);
            }
        }
        let bp = entry("corpus/beukers_peters").unwrap();
        assert_eq!(bp.series_values()[..3], [q(1), q(5), q(73)]);
        assert_eq!(entry("lg_1_1_gr25").unwrap().series_values()[3], q(18));
    }
}
