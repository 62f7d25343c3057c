mod analyze;
mod input;
mod verify;

use amenable_core::apery::{apery_limit_at, canonical_ab, default_tolerance, recognize, Constant};
use amenable_core::arith::{fmt_q, parse_q, working_precision, Q};
use amenable_core::corpus;
use amenable_core::laurent::{mutate, MutationSpec};
use amenable_core::monodromy::MonodromyJson;
use amenable_core::periods::{constant_terms, PeriodSequence, SequenceJson};
use amenable_core::picard_fuchs::{annihilator, DiffOperator, GuessBounds};
use amenable_core::triangulation::{fan_report, fine_report, in_generated_lattice, verify_regular, verify_star, verify_tiling, Triangulation};
use clap::{Parser, Subcommand};
use input::Input;
use serde_json::json;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable input; exit code 2.
    Parse(String),
    /// A check was refuted or failed; exit code 1.
    Refuted(String),
    /// Anything else (missing files, resource limits); exit code 3.
    Other(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Refuted(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Other(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(s) => write!(f, "parse error: {s}"),
            CliError::Refuted(s) => write!(f, "failed: {s}"),
            CliError::Other(s) => write!(f, "error: {s}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "amenable", version, about = "Periods, Picard-Fuchs operators and amenability checks for Laurent polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: amenability, periods, operator, singular points, Apery limits.
    Analyze {
        /// `corpus/<id>`, a polynomial file, or a JSON polynomial/sequence; several are analyzed concurrently.
        #[arg(required = true)]
        inputs: Vec<String>,
        /// Number of period terms to start from (more are computed if the guess needs them).
        #[arg(long, default_value_t = 25)]
        terms: usize,
        /// Upper limit for the adaptive period computation.
        #[arg(long, default_value_t = 120)]
        max_terms: usize,
        /// Triangulation JSON of the dual polytope (corpus entries supply their own).
        #[arg(long)]
        triangulation: Option<String>,
        /// Monodromy JSON (corpus entries supply their own).
        #[arg(long)]
        monodromy: Option<String>,
        /// Terms of the recurrence used for Apery limits; 0 skips them.
        #[arg(long, default_value_t = 500)]
        apery_terms: usize,
        /// Skip the amenability checks.
        #[arg(long)]
        no_amenability: bool,
        /// Include wall-clock timings (makes the report run-dependent).
        #[arg(long)]
        timings: bool,
        /// Write the JSON report here (`-` for stdout instead of the summary).
        #[arg(long)]
        json: Option<String>,
    },
    /// Constant terms of powers, one value per line.
    Periods {
        input: String,
        #[arg(long, default_value_t = 20)]
        terms: usize,
        /// Emit `{"values": [...]}` instead of lines.
        #[arg(long)]
        json: bool,
    },
    /// Minimal operator annihilating the period sequence.
    Pf {
        input: String,
        #[arg(long, default_value_t = 25)]
        terms: usize,
        #[arg(long, default_value_t = 120)]
        max_terms: usize,
        #[arg(long, default_value_t = 4)]
        max_order: usize,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
        #[arg(long)]
        json: bool,
    },
    /// Apery limits of the recurrence of an operator.
    Apery {
        /// Operator text, a file holding it, or `corpus/<id>`.
        operator: String,
        /// Recurrence variable is `s = t^i`.
        #[arg(long, default_value_t = 1)]
        fano_index: usize,
        /// Initial window of the period sequence (comma separated); taken from the corpus when omitted.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Vec<String>,
        /// Initial window of a second solution; when omitted all unit windows are scanned.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        b: Vec<String>,
        #[arg(long, default_value_t = 500)]
        terms: usize,
    },
    /// Ramification bookkeeping for a monodromy JSON file or `corpus/<id>`.
    Monodromy { input: String },
    /// Checks a triangulation JSON file or `corpus/<id>`.
    Triangulate {
        input: String,
        /// Polynomial whose Newton polytope should be dual to the hull.
        #[arg(long)]
        polynomial: Option<String>,
    },
    /// Applies a mutation with grading `--weight` and factor `--factor`.
    ///
    /// Weights follow the order in which variables first appear in the input.
    Mutate {
        input: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weight: Vec<i64>,
        #[arg(long)]
        factor: String,
        /// Compare period sequences up to this many terms.
        #[arg(long, default_value_t = 0)]
        check: usize,
    },
    /// The bundled reference corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    List,
    Show { id: String },
    /// Re-runs the reference checks.
    Verify {
        /// Restrict to these groups (periods, operators, pullbacks, apery, singular, ramification, amenability, triangulations).
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Read the corpus files from this directory instead of the bundled copy.
        #[arg(long)]
        corpus_dir: Option<String>,
        /// Check only the printed period terms instead of 45.
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = 2000)]
        apery_terms: usize,
    },
}

fn print_json(v: &impl serde::Serialize) -> Result<(), CliError> {
    let s = serde_json::to_string_pretty(v).map_err(|e| CliError::Other(e.to_string()))?;
    println!("{s}");
    Ok(())
}

fn parse_window(xs: &[String]) -> Result<Vec<Q>, CliError> {
    xs.iter().map(|s| parse_q(s).ok_or_else(|| CliError::Parse(format!("bad value {s}")))).collect()
}

fn load_operator(arg: &str) -> Result<(DiffOperator, Option<corpus::CorpusEntry>), CliError> {
    if let Some(e) = input::corpus_entry(arg) {
        let l = DiffOperator::parse(&e.operator).map_err(|err| CliError::Parse(err.to_string()))?;
        return Ok((l, Some(e)));
    }
    let text = if std::path::Path::new(arg).exists() { input::read_text(arg)? } else { arg.to_string() };
    let l = DiffOperator::parse(text.trim()).map_err(|err| CliError::Parse(err.to_string()))?;
    Ok((l, None))
}

fn analyze_one(input_arg: &str, base: &analyze::Options, triangulation: Option<&str>, monodromy: Option<&str>) -> Result<analyze::Outcome, CliError> {
    let mut opts = base.clone();
    let loaded = input::load(input_arg)?;
    let entry = match &loaded {
        Input::Polynomial { entry, .. } => entry.clone(),
        Input::Sequence { .. } => input::corpus_entry(input_arg),
    };
    if let Some(path) = triangulation {
        let v = input::json_or_corpus_field(path, "triangulation")?;
        opts.triangulation = Some(Triangulation::from_value(&v).map_err(CliError::Parse)?);
    } else if let Some(v) = entry.as_ref().and_then(|e| e.triangulation.as_ref()) {
        opts.triangulation = Triangulation::from_value(v).ok();
    }
    if let Some(path) = monodromy {
        let v = input::json_or_corpus_field(path, "monodromy")?;
        opts.monodromy = Some(MonodromyJson::from_value(&v).map_err(|e| CliError::Parse(e.to_string()))?);
    } else if let Some(v) = entry.as_ref().and_then(|e| e.monodromy.as_ref()) {
        opts.monodromy = MonodromyJson::from_value(v).ok();
    }
    Ok(match loaded {
        Input::Polynomial { label, poly, .. } => analyze::analyze(&label, Some(&poly), None, &opts),
        Input::Sequence { label, values } => {
            let seq = PeriodSequence::new(values, label.clone());
            analyze::analyze(&label, None, Some(seq), &opts)
        }
    })
}

/// Analyzes every input on its own thread; reports are emitted in input order.
fn cmd_analyze(
    inputs: &[String],
    opts: analyze::Options,
    triangulation: Option<&str>,
    monodromy: Option<&str>,
    json_out: Option<&str>,
) -> Result<(), CliError> {
    let results: Vec<Result<analyze::Outcome, CliError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = inputs.iter().map(|a| scope.spawn(|| analyze_one(a, &opts, triangulation, monodromy))).collect();
        handles.into_iter().map(|h| h.join().unwrap_or_else(|_| Err(CliError::Other("analysis thread panicked".into())))).collect()
    });
    let mut first_err = None;
    let mut reports = Vec::new();
    for (arg, r) in inputs.iter().zip(results) {
        match r {
            Ok(o) => {
                if json_out != Some("-") {
                    print!("{}", analyze::summary(&o.report));
                }
                if first_err.is_none() && !o.refuted.is_empty() {
                    first_err = Some(CliError::Refuted(format!("{arg}: refuted: {}", o.refuted.join(", "))));
                }
                if first_err.is_none() && !o.failed.is_empty() {
                    first_err = Some(CliError::Other(format!("{arg}: stage failed: {}", o.failed.join(", "))));
                }
                reports.push(o.report);
            }
            Err(e) => {
                eprintln!("{e}");
                first_err.get_or_insert(e);
            }
        }
    }
    let doc = if inputs.len() == 1 && reports.len() == 1 { reports.pop().unwrap() } else { serde_json::Value::Array(reports) };
    match json_out {
        Some("-") => print_json(&doc)?,
        Some(path) => {
            let s = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Other(e.to_string()))?;
            std::fs::write(path, s + "\n").map_err(|e| CliError::Other(format!("{path}: {e}")))?;
        }
        None => {}
    }
    first_err.map_or(Ok(()), Err)
}

fn cmd_pf(arg: &str, terms: usize, max_terms: usize, bounds: GuessBounds, as_json: bool) -> Result<(), CliError> {
    let (l, seq) = match input::load(arg)? {
        Input::Polynomial { poly, .. } => {
            amenable_core::picard_fuchs::annihilator_adaptive(&poly, terms, max_terms.max(terms), bounds).map_err(|e| CliError::Other(e.to_string()))?
        }
        Input::Sequence { label, values } => {
            let seq = PeriodSequence::new(values, label);
            let l = annihilator(&seq, bounds).map_err(|e| CliError::Other(e.to_string()))?;
            (l, seq)
        }
    };
    let i = amenable_core::periods::support_gcd(&seq.values).unwrap_or(1);
    let (v, _) = analyze::operator_json(&l, i, 40);
    if as_json {
        print_json(&v)
    } else {
        println!("{l}");
        println!("order {}, deg_t {}, deg_s {}, terms used {}", l.order(), l.degree(), v["deg_s"], seq.values.len());
        for p in v["singular_points"].as_array().into_iter().flatten() {
            println!("singular {} ({}), exponents {}", p["point"].as_str().unwrap_or(""), p["status"].as_str().unwrap_or(""), p["exponents"]["rational"]);
        }
        Ok(())
    }
}

fn cmd_apery(arg: &str, fano_index: usize, a: &[String], b: &[String], n: usize) -> Result<(), CliError> {
    let (l, entry) = load_operator(arg)?;
    let i = entry.as_ref().map_or(fano_index, |e| e.fano_index);
    let rec = l.to_recurrence(i).map_err(|e| CliError::Parse(e.to_string()))?;
    let a_win = if a.is_empty() {
        let e = entry.ok_or_else(|| CliError::Other("--a is required for an operator outside the corpus".into()))?;
        let s: Vec<Q> = e.series_values().into_iter().step_by(i).collect();
        s.get(..rec.span).ok_or_else(|| CliError::Other("printed series is too short".into()))?.to_vec()
    } else {
        parse_window(a)?
    };
    let digits = working_precision();
    if !b.is_empty() {
        let b_win = parse_window(b)?;
        let pair = canonical_ab(&rec, &a_win, &b_win, n).map_err(|e| CliError::Other(e.to_string()))?;
        let lim = apery_limit_at(&pair.a, &pair.b, n, digits).map_err(|e| CliError::Other(e.to_string()))?;
        let t = lim.error_estimate.to_q() * amenable_core::arith::q(10);
        let tol = if t > default_tolerance(digits) { t } else { default_tolerance(digits) };
        let r = recognize(&lim.value, &Constant::default_catalog(), 1000, &tol);
        println!("limit {} +/- {:.1e} [N={}, {} digits]", lim.value.to_decimal(40.min(digits)), lim.error_estimate.to_f64(), lim.n_used, digits);
        println!("recognized: {}", r.map_or("nothing".to_string(), |r| r.to_string()));
        return Ok(());
    }
    let mut seq = a_win.clone();
    seq.resize(rec.span, Q::from_integer(0.into()));
    let expanded: Vec<Q> = seq.iter().flat_map(|x| std::iter::once(x.clone()).chain(std::iter::repeat_n(Q::from_integer(0.into()), i - 1))).collect();
    let v = analyze::apery_json(&l, &expanded, i, n, 40).map_err(CliError::Other)?;
    for w in v["unit_windows"].as_array().into_iter().flatten() {
        println!("window {}: {} -> {}", w["window"], w["limit"].as_str().unwrap_or(""), w["recognized"].as_str().unwrap_or("unrecognized"));
    }
    for c in v["combinations"].as_array().into_iter().flatten() {
        println!("{} from window {}", c["constant"].as_str().unwrap_or(""), c["window"]);
    }
    Ok(())
}

fn cmd_monodromy(arg: &str) -> Result<(), CliError> {
    let v = input::json_or_corpus_field(arg, "monodromy")?;
    let mj = MonodromyJson::from_value(&v).map_err(|e| CliError::Parse(e.to_string()))?;
    let report = match input::corpus_entry(arg) {
        Some(e) => {
            let l = DiffOperator::parse(&e.operator).map_err(|err| CliError::Parse(err.to_string()))?;
            analyze::ramification_json(&mj, &l, e.fano_index)
        }
        None => {
            let recs = mj.records().map_err(|e| CliError::Parse(e.to_string()))?;
            let r = amenable_core::monodromy::ramification(&recs, mj.rank).map_err(|e| CliError::Parse(e.to_string()))?;
            serde_json::to_value(r).map_err(|e| CliError::Other(e.to_string()))?
        }
    };
    if let Some(e) = report.get("error") {
        return Err(CliError::Parse(e.to_string()));
    }
    print_json(&report)
}

fn cmd_triangulate(arg: &str, polynomial: Option<&str>) -> Result<(), CliError> {
    let v = input::json_or_corpus_field(arg, "triangulation")?;
    let t = Triangulation::from_value(&v).map_err(CliError::Parse)?;
    let hull = t.hull().map_err(|e| CliError::Parse(e.to_string()))?;
    let fr = fine_report(&t, &hull);
    let fan = fan_report(&t, &hull).map_err(|e| CliError::Other(e.to_string()))?;
    let (sub, index) = in_generated_lattice(&t).map_err(|e| CliError::Other(e.to_string()))?;
    let sub_fine = sub.hull().map(|h| fine_report(&sub, &h).ok()).unwrap_or(false);
    let sub_smooth = sub.hull().ok().and_then(|h| fan_report(&sub, &h).ok()).is_some_and(|f| f.smooth());
    let mut report = json!({
        "star": verify_star(&t),
        "tiling": verify_tiling(&t).map(|r| r.ok()).unwrap_or(false),
        "regular": verify_regular(&t).is_some(),
        "fine": fr.ok(),
        "missing_boundary": fr.missing_boundary,
        "missing_interior": fr.missing_interior,
        "smooth": fan.smooth(),
        "singular_cones": fan.degenerate(),
        "sublattice_index": index.to_string(),
        "fine_in_sublattice": sub_fine,
        "smooth_in_sublattice": sub_smooth,
    });
    let poly_arg = polynomial.map(str::to_string).or_else(|| input::corpus_entry(arg).filter(|e| e.polynomial.is_some()).map(|_| arg.to_string()));
    if let Some(p) = poly_arg {
        let Input::Polynomial { poly, .. } = input::load(&p)? else {
            return Err(CliError::Parse(format!("{p} is not a polynomial")));
        };
        let dual = poly.newton_polytope().dual().ok();
        report["dual_matches"] = json!(dual.is_some_and(|d| amenable_core::lattice::linear_equivalence(&d, &hull).is_some()));
    }
    print_json(&report)?;
    let ok = ["star", "tiling", "regular", "fine", "smooth"].iter().all(|k| report[k] == json!(true)) && report.get("dual_matches").is_none_or(|d| d == &json!(true));
    if ok {
        Ok(())
    } else {
        Err(CliError::Refuted("triangulation checks failed".into()))
    }
}

fn cmd_mutate(arg: &str, weight: Vec<i64>, factor: &str, check: usize) -> Result<(), CliError> {
    let Input::Polynomial { poly, vars, .. } = input::load(arg)? else {
        return Err(CliError::Parse(format!("{arg} is not a polynomial")));
    };
    let factor = amenable_core::laurent::parse_with_vars(factor, &vars).map_err(|e| CliError::Parse(e.to_string()))?.poly;
    let spec = MutationSpec { weight, factor };
    let m = mutate(&poly, &spec).map_err(|e| CliError::Refuted(format!("{e} (weights follow the variable order {})", vars.join(", "))))?;
    println!("{}", m.format_with(&vars));
    if check > 0 {
        let a = constant_terms(&poly, check).values;
        let b = constant_terms(&m, check).values;
        if a != b {
            return Err(CliError::Refuted("period sequences differ".into()));
        }
        println!("periods agree through {check} terms");
    }
    Ok(())
}

fn cmd_corpus(action: CorpusAction) -> Result<(), CliError> {
    match action {
        CorpusAction::List => {
            for e in corpus::entries() {
                println!("corpus/{:<16} {:<2} {}", e.id, e.case.as_deref().unwrap_or("-"), e.label);
            }
            Ok(())
        }
        CorpusAction::Show { id } => {
            let raw = corpus::raw(&id).ok_or_else(|| CliError::Other(format!("unknown corpus entry {id}")))?;
            print!("{raw}");
            Ok(())
        }
        CorpusAction::Verify { only, corpus_dir, quick, apery_terms } => {
            if let Some(bad) = only.iter().find(|g| !verify::GROUPS.contains(&g.as_str())) {
                return Err(CliError::Parse(format!("unknown group {bad}; groups are {}", verify::GROUPS.join(", "))));
            }
            let entries = match &corpus_dir {
                Some(dir) => input::corpus_from_dir(dir)?,
                None => corpus::entries(),
            };
            let settings = verify::Settings { period_terms: if quick { None } else { Some(45) }, apery_terms };
            let results = verify::run(&entries, &only, &settings);
            let failed: Vec<_> = results.iter().filter(|r| !r.pass).collect();
            println!("{} checks, {} failed", results.len(), failed.len());
            match failed.first() {
                None => Ok(()),
                Some(r) => Err(CliError::Refuted(format!("{}/{}: {}", r.group, r.name, r.detail))),
            }
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { inputs, terms, max_terms, triangulation, monodromy, apery_terms, no_amenability, timings, json } => {
            let opts = analyze::Options {
                terms,
                max_terms,
                apery_terms,
                bounds: GuessBounds::default(),
                triangulation: None,
                monodromy: None,
                timings,
                skip_amenability: no_amenability,
            };
            cmd_analyze(&inputs, opts, triangulation.as_deref(), monodromy.as_deref(), json.as_deref())
        }
        Command::Periods { input, terms, json } => {
            let values = match input::load(&input)? {
                Input::Polynomial { poly, .. } => constant_terms(&poly, terms).values,
                Input::Sequence { values, .. } => values.into_iter().take(terms).collect(),
            };
            if json {
                print_json(&SequenceJson { values: values.iter().map(fmt_q).collect() })
            } else {
                for v in &values {
                    println!("{}", fmt_q(v));
                }
                Ok(())
            }
        }
        Command::Pf { input, terms, max_terms, max_order, max_degree, json } => {
            cmd_pf(&input, terms, max_terms, GuessBounds::new(max_order, max_degree), json)
        }
        Command::Apery { operator, fano_index, a, b, terms } => cmd_apery(&operator, fano_index, &a, &b, terms),
        Command::Monodromy { input } => cmd_monodromy(&input),
        Command::Triangulate { input, polynomial } => cmd_triangulate(&input, polynomial.as_deref()),
        Command::Mutate { input, weight, factor, check } => cmd_mutate(&input, weight, &factor, check),
        Command::Corpus { action } => cmd_corpus(action),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}
