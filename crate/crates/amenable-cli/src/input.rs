//! Loading polynomials, sequences and corpus entries from the command line.

use crate::CliError;
use amenable_core::arith::{parse_q, Q};
use amenable_core::corpus::{self, CorpusEntry};
use amenable_core::laurent::{default_var_names, parse, LaurentPolynomial, PolynomialJson};
use amenable_core::periods::SequenceJson;
use serde_json::Value;
use std::path::Path;

/// What an `<input>` argument resolved to.
pub enum Input {
    Polynomial { label: String, poly: LaurentPolynomial, vars: Vec<String>, entry: Option<CorpusEntry> },
    Sequence { label: String, values: Vec<Q> },
}

pub fn read_text(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Other(format!("{path}: {e}")))
}

pub fn corpus_entry(id: &str) -> Option<CorpusEntry> {
    if id.starts_with("corpus/") || !Path::new(id).exists() {
        corpus::entry(id)
    } else {
        None
    }
}

fn from_entry(e: CorpusEntry) -> Result<Input, CliError> {
    let label = format!("corpus/{}", e.id);
    match e.polynomial.as_deref().map(parse) {
        Some(Ok(p)) => Ok(Input::Polynomial { label, poly: p.poly, vars: p.vars, entry: Some(e) }),
        Some(Err(err)) => Err(CliError::Parse(format!("{label}: {err}"))),
        None => Ok(Input::Sequence { label, values: e.series_values() }),
    }
}

fn parse_values(text: &str) -> Option<Vec<Q>> {
    let vals: Option<Vec<Q>> = text.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).map(parse_q).collect();
    vals.filter(|v| !v.is_empty())
}

/// Resolves `corpus/<id>`, a JSON file (polynomial, corpus entry or sequence), a file of
/// whitespace-separated values, or a file in the polynomial grammar.
pub fn load(arg: &str) -> Result<Input, CliError> {
    if let Some(e) = corpus_entry(arg) {
        return from_entry(e);
    }
    if arg.starts_with("corpus/") {
        return Err(CliError::Other(format!("unknown corpus entry {arg}")));
    }
    let text = std::fs::read_to_string(arg).map_err(|e| CliError::Parse(format!("{arg}: {e}")))?;
    let label = arg.to_string();
    if let Ok(v) = serde_json::from_str::<Value>(&text) {
        if v.get("terms").is_some() {
            let pj: PolynomialJson = serde_json::from_value(v).map_err(|e| CliError::Parse(format!("{arg}: {e}")))?;
            let poly = pj.to_polynomial().map_err(|e| CliError::Parse(format!("{arg}: {e}")))?;
            let vars = default_var_names(poly.nvars());
            return Ok(Input::Polynomial { label, poly, vars, entry: None });
        }
        if v.get("polynomial").is_some() && v.get("series").is_some() {
            let e: CorpusEntry = serde_json::from_value(v).map_err(|e| CliError::Parse(format!("{arg}: {e}")))?;
            return from_entry(e);
        }
        if v.get("values").is_some() {
            let sj: SequenceJson = serde_json::from_value(v).map_err(|e| CliError::Parse(format!("{arg}: {e}")))?;
            let values: Option<Vec<Q>> = sj.values.iter().map(|s| parse_q(s)).collect();
            let values = values.ok_or_else(|| CliError::Parse(format!("{arg}: bad sequence value")))?;
            return Ok(Input::Sequence { label, values });
        }
        if let Value::String(s) = v {
            return parse(&s).map(|p| Input::Polynomial { label, poly: p.poly, vars: p.vars, entry: None }).map_err(|e| CliError::Parse(format!("{arg}: {e}")));
        }
        return Err(CliError::Parse(format!("{arg}: unrecognized JSON input")));
    }
    if let Some(values) = parse_values(&text) {
        return Ok(Input::Sequence { label, values });
    }
    match parse(text.trim()) {
        Ok(p) if p.poly.nvars() > 0 => Ok(Input::Polynomial { label, poly: p.poly, vars: p.vars, entry: None }),
        Ok(_) => Err(CliError::Parse(format!("{arg}: constant input has no variables"))),
        Err(e) => Err(CliError::Parse(format!("{arg}: {e}"))),
    }
}

/// Loads a JSON value from a file or, for `corpus/<id>`, the named field of that entry.
pub fn json_or_corpus_field(arg: &str, field: &str) -> Result<Value, CliError> {
    if let Some(raw) = corpus::raw(arg).filter(|_| corpus_entry(arg).is_some()) {
        let v: Value = serde_json::from_str(raw).map_err(|e| CliError::Other(e.to_string()))?;
        return v.get(field).cloned().filter(|x| !x.is_null()).ok_or_else(|| CliError::Other(format!("{arg} has no {field}")));
    }
    let text = read_text(arg)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{arg}: {e}")))?;
    Ok(v.get(field).cloned().filter(|x| !x.is_null()).unwrap_or(v))
}

/// Reads every `*.json` corpus file in `dir`.
pub fn corpus_from_dir(dir: &str) -> Result<Vec<CorpusEntry>, CliError> {
    let mut out = Vec::new();
    for id in corpus::ids() {
        let path = Path::new(dir).join(format!("{id}.json"));
        let text = std::fs::read_to_string(&path).map_err(|e| CliError::Other(format!("{}: {e}", path.display())))?;
        let e: CorpusEntry = serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        out.push(e);
    }
    Ok(out)
}
