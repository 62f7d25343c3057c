//! `amenable corpus verify`: re-runs the reference checks against a corpus.

use amenable_core::apery::{apery_limit_at, canonical_ab, recognize, scan_limits, default_tolerance, Constant};
use amenable_core::arith::{q, working_precision, zeta3_fixed, zeta_fixed, Q};
use amenable_core::corpus::CorpusEntry;
use amenable_core::laurent::{amenability_report, analyze_face, parse, LaurentPolynomial};
use amenable_core::minkowski::summands_match;
use amenable_core::monodromy::{ramification, remark_r, MonodromyJson};
use amenable_core::periods::constant_terms;
use amenable_core::picard_fuchs::{
    annihilator_adaptive, approx, degree_in_s, required_terms, screened_singular_points, t_max, Apparentness, DiffOperator, GuessBounds, Location,
};
use amenable_core::triangulation::{fan_report, fine_report, verify_regular, verify_star, verify_tiling, Triangulation};
use amenable_core::upoly::{complex_roots, UPoly};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub const GROUPS: &[&str] = &["periods", "operators", "pullbacks", "apery", "singular", "ramification", "amenability", "triangulations"];

pub struct Settings {
    /// Period terms for the `periods` group; `None` uses the printed length.
    pub period_terms: Option<usize>,
    pub apery_terms: usize,
}

pub struct CheckResult {
    pub group: &'static str,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

struct Ctx<'a> {
    entries: &'a [CorpusEntry],
    out: Vec<CheckResult>,
    group: &'static str,
}

impl Ctx<'_> {
    fn record(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        let r = CheckResult { group: self.group, name: name.into(), pass, detail: detail.into() };
        println!("{} {}/{}: {}", if r.pass { "ok  " } else { "FAIL" }, r.group, r.name, r.detail);
        self.out.push(r);
    }

    fn find(&self, id: &str) -> Option<&CorpusEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    fn cases(&self) -> Vec<CorpusEntry> {
        self.entries.iter().filter(|e| e.case.is_some()).cloned().collect()
    }
}

fn operator(e: &CorpusEntry) -> Result<DiffOperator, String> {
    DiffOperator::parse(&e.operator).map_err(|err| format!("operator text: {err}"))
}

fn laurent(e: &CorpusEntry) -> Result<LaurentPolynomial, String> {
    match e.laurent() {
        Some(Ok(p)) => Ok(p),
        Some(Err(err)) => Err(format!("polynomial text: {err}")),
        None => Err("no polynomial".into()),
    }
}

fn periods(ctx: &mut Ctx, s: &Settings) {
    for e in ctx.cases() {
        let want = e.series_values();
        let res = laurent(&e).map(|p| {
            let n = s.period_terms.unwrap_or(want.len()).max(want.len());
            constant_terms(&p, n).values
        });
        match res {
            Ok(got) => {
                let bad = (0..want.len()).find(|&k| got[k] != want[k]);
                match bad {
                    None => ctx.record(&e.id, true, format!("{} printed terms match ({} computed)", want.len(), got.len())),
                    Some(k) => ctx.record(&e.id, false, format!("term {k}: computed {} but the corpus series has {}", got[k], want[k])),
                }
            }
            Err(err) => ctx.record(&e.id, false, err),
        }
    }
}

fn operators(ctx: &mut Ctx, s: &Settings) {
    for e in ctx.entries.to_vec() {
        let l = match operator(&e) {
            Ok(l) => l,
            Err(err) => {
                ctx.record(&e.id, false, err);
                continue;
            }
        };
        let series = e.series_values();
        if !l.annihilates(&series) {
            ctx.record(&e.id, false, "printed operator does not annihilate the printed series");
            continue;
        }
        let Ok(p) = laurent(&e) else {
            ctx.record(&e.id, true, "printed operator annihilates the printed series");
            continue;
        };
        // enough terms for an operator of the printed shape, found without looking at its coefficients
        let bounds = GuessBounds::default();
        let i = e.fano_index.max(1);
        let n = required_terms(&bounds, l.order(), l.degree() / i, i).max(s.period_terms.unwrap_or(0));
        match annihilator_adaptive(&p, n, 2 * n, bounds) {
            Ok((g, seq)) if g.equivalent(&l) => ctx.record(&e.id, true, format!("recovered from {} terms", seq.values.len())),
            Ok((g, _)) => ctx.record(&e.id, false, format!("recovered {g}, expected {l}")),
            Err(err) => ctx.record(&e.id, false, err.to_string()),
        }
    }
}

fn pullbacks(ctx: &mut Ctx) {
    for e in ctx.entries.to_vec() {
        let Some(pb) = &e.pullback_of else { continue };
        let Some(parent) = ctx.find(&pb.id).cloned() else {
            ctx.record(&e.id, false, format!("missing parent {}", pb.id));
            continue;
        };
        match (operator(&parent), operator(&e)) {
            (Ok(a), Ok(b)) => {
                let ok = a.pullback(pb.power).equivalent(&b);
                ctx.record(&e.id, ok, format!("pullback of {} under t -> t^{}", pb.id, pb.power));
            }
            (Err(err), _) | (_, Err(err)) => ctx.record(&e.id, false, err),
        }
    }
}

fn apery(ctx: &mut Ctx, s: &Settings) {
    let digits = working_precision();
    let tol = default_tolerance(digits);
    let catalog = Constant::default_catalog();
    let small: Q = Q::new(BigInt::one(), BigInt::from(10u64).pow(20));
    for (id, text, a, b, want) in [
        ("zeta3", "D^3 - t (34 D^3 + 51 D^2 + 27 D + 5) + t^2 (D + 1)^3", [q(1), q(5)], [q(0), q(6)], zeta3_fixed(digits)),
        ("zeta2", "D^2 - t (11 D^2 + 11 D + 3) - t^2 (D + 1)^2", [q(1), q(3)], [q(0), q(5)], zeta_fixed(2, digits)),
    ] {
        let rec = DiffOperator::parse(text).unwrap().to_recurrence(1).unwrap();
        let res = canonical_ab(&rec, &a, &b, 500).and_then(|p| apery_limit_at(&p.a, &p.b, 500, digits));
        match res {
            Ok(lim) => {
                let err = lim.value.sub(&want).abs();
                let r = recognize(&lim.value, &catalog, 1000, &tol);
                let ok = err.to_q() < small && r.as_ref().is_some_and(|r| r.multiplier.is_one());
                ctx.record(id, ok, format!("N=500 limit {} , recognized {}", lim.value.to_decimal(30), r.map_or("nothing".into(), |r| r.to_string())));
            }
            Err(err) => ctx.record(id, false, err.to_string()),
        }
    }
    for e in ctx.cases() {
        let l = match operator(&e) {
            Ok(l) => l,
            Err(err) => {
                ctx.record(&e.id, false, err);
                continue;
            }
        };
        let i = e.fano_index;
        let ds = degree_in_s(&l, i);
        let series = e.series_values();
        let c: Vec<Q> = series.iter().step_by(i).cloned().collect();
        let Ok(rec) = l.to_recurrence(i) else {
            ctx.record(&e.id, false, "operator is not a polynomial in t^i");
            continue;
        };
        if e.case.as_deref() == Some("F") {
            let n = s.apery_terms.min(400);
            match scan_limits(&rec, &c[..rec.span], n, &catalog, crate::analyze::RELATION_BOUND) {
                Ok((_, found)) => {
                    let has = |k| found.iter().any(|w| w.recognized.as_ref().is_some_and(|r| r.constant == Constant::Zeta(k)));
                    let ok = ds == Some(5) && has(2) && has(4);
                    ctx.record(&e.id, ok, format!("deg_s {ds:?}; zeta(2) window {}, zeta(4) window {} (N={n})", has(2), has(4)));
                }
                Err(err) => ctx.record(&e.id, false, err.to_string()),
            }
            continue;
        }
        let n = s.apery_terms;
        let res = amenable_core::apery::extend(&rec, &c[..rec.span], n).and_then(|a| {
            let mut w = vec![Q::zero(); rec.span];
            w[1] = Q::one();
            let b = amenable_core::apery::extend(&rec, &w, n)?;
            apery_limit_at(&a, &b, n, digits)
        });
        match res {
            Ok(lim) => {
                let t = lim.error_estimate.to_q() * q(10);
                let t = if t > tol { t } else { tol.clone() };
                let r = recognize(&lim.value, &catalog, 1000, &t);
                let ok = ds == Some(2)
                    && r.as_ref().is_some_and(|r| r.constant == Constant::Zeta(2) && r.multiplier.denom() <= &BigInt::from(1000) && !r.multiplier.is_negative());
                ctx.record(&e.id, ok, format!("deg_s {ds:?}; window (0,1) limit {} -> {} (N={n})", lim.value.to_decimal(25), r.map_or("nothing".into(), |r| r.to_string())));
            }
            Err(err) => ctx.record(&e.id, false, err.to_string()),
        }
    }
}

fn singular(ctx: &mut Ctx) {
    let digits = working_precision();
    for e in ctx.entries.to_vec() {
        let Some(tm) = &e.t_max else { continue };
        let l = match operator(&e) {
            Ok(l) => l,
            Err(err) => {
                ctx.record(&e.id, false, err);
                continue;
            }
        };
        let pts = screened_singular_points(&l, digits, 30);
        let Some(top) = t_max(&pts) else {
            ctx.record(&e.id, false, "no finite non-apparent singular point");
            continue;
        };
        let Some(mp) = UPoly::parse(&tm.minpoly, "t") else {
            ctx.record(&e.id, false, format!("bad minpoly {}", tm.minpoly));
            continue;
        };
        let roots = complex_roots(&mp, 40);
        let Some(root) = roots.iter().max_by(|a, b| (a.re.to_f64().hypot(a.im.to_f64())).total_cmp(&b.re.to_f64().hypot(b.im.to_f64()))) else {
            ctx.record(&e.id, false, "minpoly has no roots");
            continue;
        };
        let (re, im) = approx(top).unwrap_or((f64::NAN, f64::NAN));
        let z = num_complex::Complex64::new(re, im).powi(tm.power as i32);
        let w = num_complex::Complex64::new(root.re.to_f64(), root.im.to_f64());
        let mut ok = (z - w).norm() <= 1e-9 * (1.0 + w.norm());
        let mut detail = format!("t_max = {} ~ {re:.6}{im:+.6}i", top.describe());
        if tm.power == 1 {
            ok &= top.minpoly().map(|m| m.monic()) == Some(mp.monic());
        }
        if let Some(a) = &tm.approx {
            let shown = format!("{:.prec$}", re, prec = a.split('.').nth(1).map_or(0, |f| f.len()));
            ok &= &shown == a;
            detail.push_str(&format!(", printed {a}"));
        }
        if e.case.as_deref() == Some("F") {
            let genuine = pts.iter().filter(|p| p.is_finite_nonzero() && p.status != Apparentness::Apparent).count();
            let three = pts.iter().find(|p| p.location == Location::Rational(q(3))).map(|p| p.status);
            ok &= genuine == 3 && three == Some(Apparentness::Apparent);
            detail.push_str(&format!(", {genuine} genuine finite points, t=3 {three:?}"));
        }
        if e.id == "lg_1112_gr26" {
            let set: Vec<String> = pts.iter().map(|p| p.describe()).collect();
            let want = ["0", "1/108", "-1/4", "inf"];
            let same = set.len() == want.len() && want.iter().all(|w| set.iter().any(|s| s == w));
            ok &= same;
            detail.push_str(&format!(", singular set {set:?}"));
        }
        ctx.record(&e.id, ok, detail);
    }
}

fn ramification_checks(ctx: &mut Ctx) {
    for e in ctx.entries.to_vec() {
        let Some(m) = &e.monodromy else { continue };
        let res = MonodromyJson::from_value(m)
            .map_err(|err| err.to_string())
            .and_then(|mj| mj.records().map(|r| (mj.rank, r)).map_err(|err| err.to_string()))
            .and_then(|(rank, recs)| ramification(&recs, rank).map(|r| (recs, r)).map_err(|err| err.to_string()));
        match res {
            Ok((recs, r)) => {
                let want_open = match e.case.as_deref() {
                    Some("F") => Some(2),
                    Some("A") | Some("C") => Some(1),
                    _ => None,
                };
                let mut ok = r.defect == 1 && want_open.is_none_or(|w| r.ih1_open == w);
                let mut detail = format!("rf {} defect {} ih1_open {}", r.rf, r.defect, r.ih1_open);
                if let Ok(l) = operator(&e) {
                    if let Some(ds) = degree_in_s(&l, e.fano_index) {
                        let rr = remark_r(ds, &recs, e.fano_index);
                        let want_r = if e.case.as_deref() == Some("F") { 2 } else { 0 };
                        ok &= e.case.is_none() || rr == want_r;
                        detail.push_str(&format!(", R = {rr}"));
                    }
                }
                ctx.record(&e.id, ok, detail);
            }
            Err(err) => ctx.record(&e.id, false, err),
        }
    }
}

fn triangulation_of(e: &CorpusEntry) -> Result<Triangulation, String> {
    e.triangulation.as_ref().ok_or_else(|| "no triangulation".to_string()).and_then(Triangulation::from_value)
}

fn amenability(ctx: &mut Ctx) {
    for e in ctx.cases() {
        let (p, t) = match (laurent(&e), triangulation_of(&e)) {
            (Ok(p), Ok(t)) => (p, t),
            (Err(err), _) | (_, Err(err)) => {
                ctx.record(&e.id, false, err);
                continue;
            }
        };
        let r = match amenability_report(&p, Some(&t)) {
            Ok(r) => r,
            Err(err) => {
                ctx.record(&e.id, false, format!("{err:?}"));
                continue;
            }
        };
        let facets: Vec<_> = r.faces.iter().filter(|f| f.dim + 1 == r.nvars).collect();
        let mut used = vec![false; facets.len()];
        let mut unmatched = Vec::new();
        for s in e.facets.iter().flatten() {
            let Ok(w) = parse(s) else {
                unmatched.push(s.clone());
                continue;
            };
            let ws = analyze_face(&w.poly).map(|v| v.summands()).unwrap_or_default();
            match (0..facets.len()).find(|&k| !used[k] && summands_match(&facets[k].summands(), &ws)) {
                Some(k) => used[k] = true,
                None => unmatched.push(s.clone()),
            }
        }
        let ok = r.strictly_amenable.is_certified() && unmatched.is_empty();
        let mut detail = format!(
            "amenable {}, strictly {}, {} facets, {} unmatched",
            r.amenable,
            r.strictly_amenable,
            facets.len(),
            unmatched.len()
        );
        if let Some(tv) = &r.triangulation {
            if !tv.ok() {
                detail.push_str(&format!(
                    "; supplied triangulation: fine {}, smooth {}, {} lattice points unused, sublattice index {}",
                    tv.fine, tv.smooth, tv.missing_points, tv.sublattice_index
                ));
            }
        }
        ctx.record(&e.id, ok, detail);
    }
}

fn triangulations(ctx: &mut Ctx) {
    for e in ctx.cases() {
        let t = match triangulation_of(&e) {
            Ok(t) => t,
            Err(err) => {
                ctx.record(&e.id, false, err);
                continue;
            }
        };
        let hull = match t.hull() {
            Ok(h) => h,
            Err(err) => {
                ctx.record(&e.id, false, err.to_string());
                continue;
            }
        };
        let star = verify_star(&t);
        let tiling = verify_tiling(&t).map(|r| r.ok()).unwrap_or(false);
        let regular = verify_regular(&t).is_some();
        let fr = fine_report(&t, &hull);
        let smooth = fan_report(&t, &hull).map(|f| f.smooth()).unwrap_or(false);
        let ok = star && tiling && regular && fr.ok() && smooth;
        ctx.record(
            &e.id,
            ok,
            format!(
                "star {star}, tiling {tiling}, regular {regular}, fine {} ({} boundary and {} interior points unused), smooth {smooth}",
                fr.ok(),
                fr.missing_boundary.len(),
                fr.missing_interior.len()
            ),
        );
    }
}

/// Runs the selected groups (all when `only` is empty) and returns every check.
pub fn run(entries: &[CorpusEntry], only: &[String], settings: &Settings) -> Vec<CheckResult> {
    let mut ctx = Ctx { entries, out: Vec::new(), group: "" };
    for &g in GROUPS {
        if !only.is_empty() && !only.iter().any(|o| o == g) {
            continue;
        }
        ctx.group = g;
        match g {
            "periods" => periods(&mut ctx, settings),
            "operators" => operators(&mut ctx, settings),
            "pullbacks" => pullbacks(&mut ctx),
            "apery" => apery(&mut ctx, settings),
            "singular" => singular(&mut ctx),
            "ramification" => ramification_checks(&mut ctx),
            "amenability" => amenability(&mut ctx),
            "triangulations" => triangulations(&mut ctx),
            _ => unreachable!(),
        }
    }
    ctx.out
}
