//! The end-to-end pipeline behind `amenable analyze`.

use amenable_core::apery::{recognize, scan_limits, default_tolerance, Constant};
use amenable_core::arith::{fmt_q, working_precision, Fixed, Q};
use amenable_core::laurent::{amenability_report, AmenabilityReport, Check, LaurentPolynomial};
use amenable_core::monodromy::{ramification, remark_r, MonodromyJson};
use amenable_core::periods::{compress, support_gcd, PeriodSequence};
use amenable_core::picard_fuchs::{
    annihilator, annihilator_adaptive, approx, degree_in_s, indicial_exponents, screened_singular_points, t_max, DiffOperator,
    GuessBounds, SingularPoint,
};
use amenable_core::triangulation::Triangulation;
use serde_json::{json, Map, Value};
use std::time::Instant;

#[derive(Clone)]
pub struct Options {
    pub terms: usize,
    pub max_terms: usize,
    pub apery_terms: usize,
    pub bounds: GuessBounds,
    pub triangulation: Option<Triangulation>,
    pub monodromy: Option<MonodromyJson>,
    pub timings: bool,
    pub skip_amenability: bool,
}

pub struct Outcome {
    pub report: Value,
    pub refuted: Vec<String>,
    pub failed: Vec<String>,
}

pub fn fixed(x: &Fixed, shown: u32) -> String {
    format!("{} [{} digits]", x.to_decimal(shown.min(x.digits)), x.digits)
}

fn q_list(xs: &[Q]) -> Vec<String> {
    xs.iter().map(fmt_q).collect()
}

pub fn amenability_json(r: &AmenabilityReport) -> Value {
    let edges: Vec<Value> = r
        .edges
        .iter()
        .map(|e| {
            json!({
                "start": e.edge.start,
                "end": e.edge.end,
                "polynomial": e.edge.poly.format("u"),
                "cyclotomic": e.cyclotomic,
                "roots_of_unity_only": e.roots_of_unity,
            })
        })
        .collect();
    let faces: Vec<Value> = r
        .faces
        .iter()
        .map(|f| {
            let factors: Vec<Value> = f
                .factorization
                .factors
                .iter()
                .map(|g| json!({"factor": g.poly.to_string(), "multiplicity": g.multiplicity, "width1": g.width1.is_some()}))
                .collect();
            let singular: Vec<Value> = f
                .singular
                .iter()
                .map(|s| {
                    json!({
                        "components": s.components,
                        "dimension": s.dimension,
                        "points": s.points.iter().map(|p| q_list(p)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            json!({
                "face": f.face,
                "dim": f.dim,
                "polynomial": f.polynomial.to_string(),
                "factors": factors,
                "residue": f.factorization.residue.as_ref().map(|x| x.to_string()),
                "cyclotomic_edges": f.cyclotomic_edges,
                "width1_factors": f.width1_factors,
                "rationality": f.rationality,
                "real_reducibility": f.real_reducibility,
                "nondegeneracy": f.nondegeneracy,
                "singular": singular,
            })
        })
        .collect();
    let tri = r.triangulation.as_ref().map(|t| {
        json!({
            "ok": t.ok(),
            "dual_matches": t.dual_matches,
            "star": t.star,
            "tiling": t.tiling,
            "regular": t.regular,
            "fine": t.fine,
            "smooth": t.smooth,
            "missing_points": t.missing_points,
            "sublattice_index": t.sublattice_index.to_string(),
            "fine_in_sublattice": t.fine_in_sublattice,
            "smooth_in_sublattice": t.smooth_in_sublattice,
        })
    });
    json!({
        "nvars": r.nvars,
        "reflexive": r.reflexive,
        "polytope_amenable": r.polytope_amenable,
        "coherent_datum": r.coherent_datum,
        "nondegenerate": r.nondegenerate,
        "totally_rational": r.totally_rational,
        "weakly_amenable": r.weakly_amenable,
        "amenable": r.amenable,
        "strictly_amenable": r.strictly_amenable,
        "triangulation": tri,
        "edges": edges,
        "faces": faces,
    })
}

pub fn point_json(p: &SingularPoint, shown: u32) -> Value {
    let value = p.value.as_ref().map(|v| json!({"re": fixed(&v.re, shown), "im": fixed(&v.im, shown)}));
    json!({
        "point": p.describe(),
        "minpoly": p.minpoly().map(|m| m.format("t")),
        "value": value,
        "modulus": p.modulus().map(|m| fixed(&m, shown)),
        "multiplicity": p.multiplicity,
        "status": format!("{:?}", p.status),
    })
}

/// Operator, singular points and exponents for a recovered operator.
pub fn operator_json(l: &DiffOperator, compression: usize, shown: u32) -> (Value, Vec<SingularPoint>) {
    let digits = working_precision();
    let pts = screened_singular_points(l, digits, 30);
    let points: Vec<Value> = pts
        .iter()
        .map(|p| {
            let ex = indicial_exponents(l, &p.location);
            let mut v = point_json(p, shown);
            v["exponents"] = json!({
                "rational": q_list(&ex.rational),
                "complete": ex.complete,
                "indicial": ex.poly.as_ref().map(|x| x.format("s")),
            });
            v
        })
        .collect();
    let tm = t_max(&pts).map(|p| {
        let mut v = point_json(p, 30);
        if let Some((re, im)) = approx(p) {
            v["approx"] = json!(format!("{re:.2}{:+.2}i", im));
        }
        v
    });
    let rec = l.to_recurrence(compression).ok().map(|r| {
        let rows: Vec<Value> = (0..=r.span).map(|i| json!(r.poly(i).format("n"))).collect();
        json!({"fano_index": r.fano_index, "span": r.span, "coefficients": rows})
    });
    let v = json!({
        "text": l.to_string(),
        "order": l.order(),
        "deg_t": l.degree(),
        "deg_s": degree_in_s(l, compression),
        "compression": compression,
        "json": l.to_json(),
        "recurrence": rec,
        "singular_points": points,
        "t_max": tm,
    });
    (v, pts)
}

/// Largest coefficient allowed in the integer relations that express a constant through window limits.
pub const RELATION_BOUND: u64 = 10_000_000_000;

/// Unit-window limits of the recurrence in `s = t^compression` and their recognitions.
pub fn apery_json(l: &DiffOperator, seq: &[Q], compression: usize, n: usize, shown: u32) -> Result<Value, String> {
    let rec = l.to_recurrence(compression).map_err(|e| e.to_string())?;
    let c = compress(seq, compression).map_err(|e| e.to_string())?;
    if c.len() < rec.span {
        return Err(format!("{} compressed terms, recurrence span {}", c.len(), rec.span));
    }
    let catalog = Constant::default_catalog();
    let (limits, windows) = scan_limits(&rec, &c[..rec.span], n, &catalog, RELATION_BOUND).map_err(|e| e.to_string())?;
    let digits = working_precision();
    let tol = default_tolerance(digits);
    let unit: Vec<Value> = limits
        .iter()
        .enumerate()
        .map(|(k, x)| {
            let mut w = vec![0; rec.span];
            w[k] = 1;
            let r = recognize(x, &catalog, 1000, &tol);
            json!({"window": w, "limit": fixed(x, shown), "recognized": r.map(|r| r.to_string())})
        })
        .collect();
    let combos: Vec<Value> = windows
        .iter()
        .map(|w| json!({"constant": w.recognized.as_ref().map(|r| r.constant.to_string()), "window": q_list(&w.window)}))
        .collect();
    Ok(json!({"n_terms": n, "digits": digits, "unit_windows": unit, "combinations": combos}))
}

fn check_failed(c: Check) -> bool {
    c == Check::Refuted
}

pub fn analyze(label: &str, poly: Option<&LaurentPolynomial>, given: Option<PeriodSequence>, opts: &Options) -> Outcome {
    let shown = 40;
    let mut report = Map::new();
    let mut timings = Map::new();
    let mut refuted = Vec::new();
    let mut failed = Vec::new();
    report.insert("input".into(), json!(label));
    if let Some(p) = poly {
        report.insert("polynomial".into(), json!(p.to_string()));
        if !opts.skip_amenability {
            let t0 = Instant::now();
            match amenability_report(p, opts.triangulation.as_ref()) {
                Ok(r) => {
                    for (name, c) in [("weakly_amenable", r.weakly_amenable), ("amenable", r.amenable), ("strictly_amenable", r.strictly_amenable)] {
                        if check_failed(c) {
                            refuted.push(name.to_string());
                        }
                    }
                    report.insert("amenability".into(), amenability_json(&r));
                }
                Err(e) => {
                    report.insert("amenability".into(), json!({"skipped": format!("{e:?}")}));
                }
            }
            timings.insert("amenability_s".into(), json!(t0.elapsed().as_secs_f64()));
        }
    }

    let t0 = Instant::now();
    let guess = match (poly, given) {
        (Some(p), _) => annihilator_adaptive(p, opts.terms, opts.max_terms.max(opts.terms), opts.bounds),
        (None, Some(seq)) => annihilator(&seq, opts.bounds).map(|l| (l, seq)),
        (None, None) => unreachable!("analyze needs a polynomial or a sequence"),
    };
    timings.insert("periods_and_operator_s".into(), json!(t0.elapsed().as_secs_f64()));
    match guess {
        Ok((l, seq)) => {
            let shown_terms = opts.terms.min(seq.values.len());
            report.insert("periods".into(), json!({"terms": shown_terms, "values": q_list(&seq.values[..shown_terms])}));
            report.insert("terms_used".into(), json!(seq.values.len()));
            let i = support_gcd(&seq.values).unwrap_or(1);
            let t0 = Instant::now();
            let (op, _) = operator_json(&l, i, shown);
            report.insert("operator".into(), op);
            timings.insert("singular_points_s".into(), json!(t0.elapsed().as_secs_f64()));
            if opts.apery_terms > 0 {
                let t0 = Instant::now();
                match apery_json(&l, &seq.values, i, opts.apery_terms, shown) {
                    Ok(v) => {
                        report.insert("apery".into(), v);
                    }
                    Err(e) => {
                        failed.push("apery".into());
                        report.insert("apery".into(), json!({"error": e}));
                    }
                }
                timings.insert("apery_s".into(), json!(t0.elapsed().as_secs_f64()));
            }
            if let Some(m) = &opts.monodromy {
                report.insert("ramification".into(), ramification_json(m, &l, i));
            }
        }
        Err(e) => {
            failed.push("operator".into());
            report.insert("operator".into(), json!({"error": e.to_string()}));
        }
    }
    report.insert("verdict".into(), json!({"refuted": refuted, "failed": failed}));
    if opts.timings {
        report.insert("timings".into(), Value::Object(timings));
    }
    Outcome { report: Value::Object(report), refuted, failed }
}

pub fn ramification_json(m: &MonodromyJson, l: &DiffOperator, fano_index: usize) -> Value {
    match m.records().map_err(|e| e.to_string()).and_then(|recs| ramification(&recs, m.rank).map(|r| (recs, r)).map_err(|e| e.to_string())) {
        Ok((recs, r)) => {
            let mut v = serde_json::to_value(&r).unwrap_or(Value::Null);
            if let Some(ds) = degree_in_s(l, fano_index) {
                v["remark_r"] = json!(remark_r(ds, &recs, fano_index));
            }
            v
        }
        Err(e) => json!({"error": e}),
    }
}

/// A short human-readable rendering of a report.
pub fn summary(v: &Value) -> String {
    let mut out = String::new();
    let get = |path: &[&str]| -> Option<&Value> {
        let mut cur = v;
        for k in path {
            cur = cur.get(*k)?;
        }
        Some(cur)
    };
    out.push_str(&format!("input: {}\n", v["input"].as_str().unwrap_or("?")));
    if let Some(a) = get(&["amenability"]) {
        if a.get("skipped").is_some() {
            out.push_str(&format!("amenability: skipped ({})\n", a["skipped"].as_str().unwrap_or("")));
        } else {
            out.push_str(&format!(
                "amenability: reflexive={} weakly={} amenable={} strict={}\n",
                a["reflexive"], a["weakly_amenable"].as_str().unwrap_or("?"), a["amenable"].as_str().unwrap_or("?"), a["strictly_amenable"].as_str().unwrap_or("?")
            ));
        }
    }
    if let Some(p) = get(&["periods", "values"]).and_then(|x| x.as_array()) {
        let s: Vec<&str> = p.iter().filter_map(|x| x.as_str()).collect();
        out.push_str(&format!("periods: {}\n", s.join(", ")));
    }
    if let Some(o) = get(&["operator"]) {
        if let Some(e) = o.get("error") {
            out.push_str(&format!("operator: not found ({})\n", e.as_str().unwrap_or("")));
        } else {
            out.push_str(&format!("operator: {}\n", o["text"].as_str().unwrap_or("")));
            out.push_str(&format!("  order {}, deg_t {}, deg_s {}\n", o["order"], o["deg_t"], o["deg_s"]));
            for p in o["singular_points"].as_array().into_iter().flatten() {
                out.push_str(&format!(
                    "  singular {} ({}), exponents {}\n",
                    p["point"].as_str().unwrap_or(""),
                    p["status"].as_str().unwrap_or(""),
                    p["exponents"]["rational"]
                ));
            }
            if let Some(t) = o.get("t_max").filter(|x| !x.is_null()) {
                out.push_str(&format!("  t_max: {} ~ {}\n", t["point"].as_str().unwrap_or(""), t["approx"].as_str().unwrap_or("")));
            }
        }
    }
    if let Some(a) = get(&["apery"]) {
        for w in a["unit_windows"].as_array().into_iter().flatten() {
            out.push_str(&format!(
                "apery window {}: {} -> {}\n",
                w["window"],
                w["limit"].as_str().unwrap_or(""),
                w["recognized"].as_str().unwrap_or("unrecognized")
            ));
        }
        if let Some(e) = a.get("error") {
            out.push_str(&format!("apery: {}\n", e.as_str().unwrap_or("")));
        }
    }
    if let Some(r) = get(&["ramification"]) {
        out.push_str(&format!("ramification: rf={} defect={} ih1_open={}\n", r["rf"], r["defect"], r["ih1_open"]));
    }
    out
}
