//! One function per subcommand, each returning an output document.

use std::path::Path;

use mahler_core::becker::{
    becker_form_search, certify_irregular, certify_regular, g_series, normalization_violations, normalize,
    recompose, structure_decompose, verify_normalization, witness_equation, BeckerNormalization,
    Certificate, SearchBounds, Verdict,
};
use mahler_core::corpus::{self, CorpusItem, ITEM_NAMES};
use mahler_core::json::{canonical_mismatch, parse};
use mahler_core::mahler::{guess, pole_profile, solve_series, verify, GuessOptions, MahlerEquation};
use mahler_core::regular::{closure_rep, eval_rep, rep_to_equation, ClosureCaps, LinearRepresentation};
use mahler_core::series::LaurentSeries;
use mahler_core::Error;
use serde::Serialize;
use serde_json::{json, Value};

use crate::input::{self, Prefix};
use crate::{CliError, Command, CorpusAction, SearchArgs, EXIT_INVARIANT, EXIT_MALFORMED};

pub struct Output {
    pub doc: Value,
    /// Custom text rendering; the generic one is used otherwise.
    pub text: Option<String>,
    pub code: u8,
}

impl Output {
    fn doc(doc: Value) -> Self {
        Output { doc, text: None, code: 0 }
    }

    fn with_text(mut self, text: String) -> Self {
        self.text = Some(text);
        self
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::invariant(e.to_string()))
}

fn bounds(b: SearchArgs) -> SearchBounds {
    SearchBounds::new(b.depth_max, b.deg_max)
}

fn prefix_doc(p: &Prefix) -> Value {
    json!({
        "source": p.source,
        "order": p.series.order(),
        "solution_space_dim": p.solution_space_dim,
    })
}

pub fn dispatch(cmd: &Command) -> Result<Output, CliError> {
    match cmd {
        Command::Solve { eq, order } => solve(&input::equation(&eq.input, eq.k)?.equation, *order),
        Command::Verify { eq, series } => {
            let e = input::equation(&eq.input, eq.k)?.equation;
            let f = input::series(series)?;
            let v = verify(&e, &f);
            Ok(Output::doc(json!({
                "holds": v.holds(),
                "residual_order": v.residual_order,
                "known_order": v.known_order,
            })))
        }
        Command::Guess { series, k, depth_max, deg_max } => {
            let f = input::series(series)?;
            let found = guess(&f, *k, GuessOptions::new(*depth_max, *deg_max))?;
            let text = match &found {
                Some(eq) => format!("{eq}\n"),
                None => "no equation within the bounds\n".to_string(),
            };
            Ok(Output::doc(json!({ "found": found.is_some(), "equation": to_value(&found)? })).with_text(text))
        }
        Command::Cartier { series, k, digit } => {
            let f = input::series(series)?;
            if *k < 2 {
                return Err(CliError::usage("--k must be at least 2"));
            }
            let digits: Vec<usize> = match digit {
                Some(r) if r >= k => return Err(CliError::usage(format!("--digit {r} must be below --k {k}"))),
                Some(r) => vec![*r],
                None => (0..*k).collect(),
            };
            let sections: Vec<Value> = digits
                .iter()
                .map(|&r| Ok(json!({ "digit": r, "series": to_value(&f.cartier(*k, r))? })))
                .collect::<Result<_, CliError>>()?;
            let text = digits
                .iter()
                .map(|&r| format!("Lambda_{r}: {}\n", f.cartier(*k, r)))
                .collect();
            Ok(Output::doc(json!({ "k": k, "sections": sections })).with_text(text))
        }
        Command::RepEval { input, count } => {
            let rep = input::representation(input)?;
            let values: Vec<String> = (0..*count)
                .map(|n| mahler_core::algebra::rational::format_rational(&eval_rep(&rep, n)))
                .collect();
            let text = format!("{}\n", values.join(" "));
            Ok(Output::doc(json!({ "values": values })).with_text(text))
        }
        Command::RepFromEq { eq, prefix, max_dim, max_depth } => {
            let e = input::equation(&eq.input, eq.k)?;
            let p = input::prefix(&e, prefix.series.as_deref(), prefix.order)?;
            let caps = ClosureCaps { max_dim: *max_dim, max_depth: *max_depth };
            let outcome = closure_rep(&e.equation, &p.series, caps)?;
            Ok(Output::doc(json!({ "prefix": prefix_doc(&p), "closure": to_value(&outcome)? })))
        }
        Command::EqFromRep { input } => {
            let rep: LinearRepresentation = input::representation(input)?;
            let eq = rep_to_equation(&rep)?;
            Ok(Output::doc(to_value(&eq)?).with_text(format!("{eq}\n")))
        }
        Command::Normalize { eq } => {
            let e = input::equation(&eq.input, eq.k)?.equation;
            let norm = checked_normalize(&e)?;
            let text = normalization_text(&norm);
            Ok(Output::doc(to_value(&norm)?).with_text(text))
        }
        Command::BeckerSearch { series, k, bounds: b } => {
            let f = input::series(series)?;
            let out = becker_form_search(&f, *k, bounds(*b))?;
            Ok(Output::doc(to_value(&out)?))
        }
        Command::Certify { eq, prefix, m_max } => {
            let e = input::equation(&eq.input, eq.k)?;
            let p = input::prefix(&e, prefix.series.as_deref(), prefix.order)?;
            let cert = certify(&e.equation, &p.series, *m_max)?;
            let text = certificate_text(&cert);
            Ok(Output::doc(to_value(&cert)?).with_text(text))
        }
        Command::Witness { eq, prefix, bounds: b } => {
            let e = input::equation(&eq.input, eq.k)?;
            let p = input::prefix(&e, prefix.series.as_deref(), prefix.order)?;
            let norm = checked_normalize(&e.equation)?;
            let (becker, how) = becker_equation(&norm, &p.series, bounds(*b))?;
            let Some(becker) = becker else {
                return Ok(Output::doc(json!({ "witness": null, "becker": how })));
            };
            let w = witness_equation(&norm, &becker)?;
            Ok(Output::doc(json!({ "witness": to_value(&w)?, "becker": how })).with_text(format!("{w}\n")))
        }
        Command::Decompose { eq, prefix } => {
            let e = input::equation(&eq.input, eq.k)?;
            let p = input::prefix(&e, prefix.series.as_deref(), prefix.order)?;
            let dec = structure_decompose(&e.equation, &p.series);
            let back = recompose(&dec, e.equation.k())?;
            if !back.agrees_with(&p.series) {
                return Err(CliError::invariant("recomposition does not reproduce the prefix"));
            }
            Ok(Output::doc(json!({ "prefix": prefix_doc(&p), "decomposition": to_value(&dec)? })))
        }
        Command::PoleProfile { eq, root_order, n_max } => {
            if *root_order == 0 || *n_max == 0 {
                return Err(CliError::usage("--root-order and --n-max must be positive"));
            }
            let e = input::equation(&eq.input, eq.k)?.equation;
            let profile = pole_profile(&e, *root_order, *n_max);
            let bounded = profile.iter().all(|&x| x == 0);
            Ok(Output::doc(json!({ "root_order": root_order, "profile": profile, "all_zero": bounded })))
        }
        Command::Corpus { action } => corpus_command(action),
        Command::Roundtrip { paths } => roundtrip(paths),
        Command::Pipeline { eq, prefix, bounds: b, m_max } => {
            let e = input::equation(&eq.input, eq.k)?;
            pipeline(&e, prefix.series.as_deref(), prefix.order, bounds(*b), *m_max)
        }
    }
}

fn solve(eq: &MahlerEquation, order: i64) -> Result<Output, CliError> {
    let basis = solve_series(eq, order)?;
    let text = basis.iter().map(|b| format!("{b}\n")).collect();
    Ok(Output::doc(json!({ "k": eq.k(), "order": order, "basis": to_value(&basis)? })).with_text(text))
}

fn checked_normalize(eq: &MahlerEquation) -> Result<BeckerNormalization, CliError> {
    let norm = normalize(eq)?;
    let bad = normalization_violations(&norm);
    if !bad.is_empty() {
        return Err(CliError::invariant(format!("normalization: {}", bad.join("; "))));
    }
    Ok(norm)
}

fn normalization_text(n: &BeckerNormalization) -> String {
    format!(
        "gamma = {}\nN = {}\nQ = {}\nP = {}\nh = {}\nc = {}\na = {}\nequation for G: {}\n",
        n.gamma,
        n.n,
        n.q,
        n.p,
        n.h,
        mahler_core::algebra::rational::format_rational(&n.c),
        n.a,
        n.new_eq
    )
}

/// The sufficient test first, then the obstruction.
fn certify(eq: &MahlerEquation, f: &LaurentSeries, m_max: usize) -> Result<Certificate, CliError> {
    let reg = certify_regular(eq);
    if reg.verdict == Verdict::Regular {
        return Ok(reg);
    }
    let mut cert = certify_irregular(eq, f, m_max)?;
    let mut trace = reg.trace;
    trace.append(&mut cert.trace);
    cert.trace = trace;
    Ok(cert)
}

fn certificate_text(c: &Certificate) -> String {
    let verdict = serde_json::to_value(c.verdict).ok().and_then(|v| v.as_str().map(String::from));
    let mut s = format!("verdict: {}\n", verdict.unwrap_or_default());
    if let Some(eq) = &c.equation {
        s.push_str(&format!("equation: {eq}\n"));
    }
    for line in &c.trace {
        s.push_str(&format!("  {line}\n"));
    }
    s
}

/// An equation with `a_0 = 1` for `G = F / (z^gamma Q)`: the normalized
/// equation itself when its `a_0` is constant, otherwise a bounded search
/// on the prefix of `G`.
fn becker_equation(
    norm: &BeckerNormalization,
    f: &LaurentSeries,
    bounds: SearchBounds,
) -> Result<(Option<MahlerEquation>, Value), CliError> {
    let a0 = norm.new_eq.a(0);
    if a0.is_constant() {
        let unit = a0.coeff(0).recip();
        let coeffs = norm.new_eq.coeffs().iter().map(|a| a.scale(&unit)).collect();
        let eq = MahlerEquation::new(norm.k, coeffs)?;
        return Ok((
            Some(eq.clone()),
            json!({ "source": "normalized equation", "equation": to_value(&eq)? }),
        ));
    }
    let g = g_series(norm, f)?;
    let found = becker_form_search(&g, norm.k, bounds)?;
    let eq = found.equation().cloned();
    Ok((eq, json!({ "source": "search", "search": to_value(&found)? })))
}

fn pipeline(
    e: &input::EquationInput,
    series: Option<&str>,
    order: i64,
    bounds: SearchBounds,
    m_max: usize,
) -> Result<Output, CliError> {
    let eq = &e.equation;
    let p = input::prefix(e, series, order).map_err(|x| x.in_stage("solve"))?;
    let v = verify(eq, &p.series);
    if !v.holds() {
        return Err(CliError::malformed("the prefix does not satisfy the equation").in_stage("solve"));
    }
    let norm = checked_normalize(eq).map_err(|x| x.in_stage("normalize"))?;
    let check = verify_normalization(&norm, &p.series).map_err(|x| CliError::from(x).in_stage("normalize"))?;
    if !check.holds() {
        return Err(CliError::invariant("G does not satisfy its equation").in_stage("normalize"));
    }
    let (becker, how) = becker_equation(&norm, &p.series, bounds).map_err(|x| x.in_stage("becker-search"))?;
    let becker_check = match &becker {
        Some(b) => {
            let g = g_series(&norm, &p.series).map_err(|x| CliError::from(x).in_stage("becker-search"))?;
            let c = verify(b, &g);
            if !c.holds() {
                return Err(CliError::invariant("the equation for G fails on its prefix").in_stage("becker-search"));
            }
            json!({ "holds": true, "known_order": c.known_order })
        }
        None => Value::Null,
    };
    let witness = match &becker {
        Some(b) => Some(witness_equation(&norm, b).map_err(|x| CliError::from(x).in_stage("witness"))?),
        None => None,
    };
    let cert = certify(eq, &p.series, m_max).map_err(|x| x.in_stage("certify"))?;
    Ok(Output::doc(json!({
        "equation": to_value(eq)?,
        "prefix": prefix_doc(&p),
        "verification": { "residual_order": v.residual_order, "known_order": v.known_order },
        "normalization": to_value(&norm)?,
        "normalization_check": { "holds": true, "known_order": check.known_order },
        "becker": how,
        "becker_check": becker_check,
        "witness": to_value(&witness)?,
        "certificate": to_value(&cert)?,
    })))
}

fn corpus_command(action: &CorpusAction) -> Result<Output, CliError> {
    match action {
        CorpusAction::List => {
            Ok(Output::doc(json!({ "items": ITEM_NAMES })).with_text(ITEM_NAMES.join("\n") + "\n"))
        }
        CorpusAction::Emit { name } => {
            if !ITEM_NAMES.contains(&name.as_str()) {
                return Err(CliError::usage(format!("unknown corpus item {name:?}")));
            }
            Ok(Output::doc(to_value(&corpus::corpus_item(name)?)?))
        }
        CorpusAction::Regenerate { dir } => {
            let written = corpus::regenerate(Path::new(dir)).map_err(|e| match e {
                Error::InvalidArgument(m) => CliError::usage(m),
                other => other.into(),
            })?;
            let paths: Vec<String> = written.iter().map(|p| p.display().to_string()).collect();
            Ok(Output::doc(json!({ "written": paths })))
        }
        CorpusAction::Check { dir } => {
            let bad = corpus::golden_mismatches(Path::new(dir))?;
            let code = if bad.is_empty() { 0 } else { EXIT_INVARIANT };
            Ok(Output { doc: json!({ "mismatches": bad }), text: None, code })
        }
    }
}

/// Which schema a document follows, judged by its keys.
fn schema_of(v: &Value) -> &'static str {
    let has = |k: &str| v.get(k).is_some();
    if has("expected") && has("equation") && has("prefix") {
        "corpus_item"
    } else if has("matrices") {
        "representation"
    } else if has("valuation") && has("coeffs") {
        "series"
    } else if has("k") && has("coeffs") {
        "equation"
    } else {
        "json"
    }
}

fn mismatch_for(schema: &str, text: &str) -> mahler_core::Result<Option<(usize, usize)>> {
    match schema {
        "corpus_item" => canonical_mismatch::<CorpusItem>(text),
        "representation" => canonical_mismatch::<LinearRepresentation>(text),
        "series" => canonical_mismatch::<LaurentSeries>(text),
        "equation" => canonical_mismatch::<MahlerEquation>(text),
        _ => canonical_mismatch::<Value>(text),
    }
}

fn roundtrip(paths: &[String]) -> Result<Output, CliError> {
    let mut files = Vec::new();
    let mut failed = false;
    for path in paths {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{path}: {e}")))?;
        let entry = match parse::<Value>(&text) {
            Err(e) => {
                failed = true;
                json!({ "path": path, "status": "malformed", "message": e.to_string() })
            }
            Ok(v) => {
                let schema = schema_of(&v);
                match mismatch_for(schema, &text) {
                    Ok(None) => json!({ "path": path, "schema": schema, "status": "canonical" }),
                    Ok(Some((line, column))) => {
                        failed = true;
                        json!({
                            "path": path,
                            "schema": schema,
                            "status": "non_canonical",
                            "line": line,
                            "column": column,
                        })
                    }
                    Err(e) => {
                        failed = true;
                        json!({ "path": path, "schema": schema, "status": "malformed", "message": e.to_string() })
                    }
                }
            }
        };
        files.push(entry);
    }
    let code = if failed { EXIT_MALFORMED } else { 0 };
    Ok(Output { doc: json!({ "files": files }), text: None, code })
}
