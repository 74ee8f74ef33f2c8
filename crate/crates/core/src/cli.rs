//! Command-line front end: fan ingestion, command dispatch, and reports.
//!
//! Every command emits a report envelope `{command, input, payload,
//! warnings}`.  JSON output is byte-stable: keys are sorted, integers are
//! checked into the i64 range, and parse/re-emit round-trips exactly.
//! Exit codes: 0 success, 1 error, 2 assumption violation.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::coxring::{cox_model, twist_line_bundle_locus, Chart, CoxModel, ModelKind};
use crate::error::{Error, Result};
use crate::fan::{builtin_fan, Fan, FanFile};
use crate::intlin::{Int, IntMatrix, SubgroupIndex};
use crate::projcmp::{
    classify_surface, compare_fan, projmh_atlas, random_complete_smooth_surface, tproj_atlas,
    Verdict,
};
use crate::suppfun::{picard, support_function_lattice};

#[derive(Parser)]
#[command(name = "toricproj", version, about = "Compare toric and multihomogeneous Proj of a fan")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "text")]
    format: Format,
    /// Seed for randomized checks.
    #[arg(long, global = true, value_name = "N", default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Fan source: a builtin family spec or a JSON file.
#[derive(Args)]
#[group(required = false, multiple = false)]
struct FanInput {
    /// Builtin fan: p<n>, hirzebruch:<r>, wps:<q0,q1,...>, product:<a>x<b>,
    /// displaced-cube.
    #[arg(long, value_name = "SPEC")]
    builtin: Option<String>,
    /// Path to a fan JSON file ({lattice_rank, rays, cones}).
    #[arg(long, value_name = "FILE")]
    fan: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the fan axioms and report every violation.
    Validate(FanCmd),
    /// Structural summary: counts, smoothness, completeness.
    Info(FanCmd),
    /// Support-function lattice and Picard group.
    Picard(FanCmd),
    /// The graded polynomial model: degrees, dilations, model kind.
    Coxring(FanCmd),
    /// Chart atlases of both Proj constructions.
    Charts(FanCmd),
    /// Decide whether the toric space equals the multihomogeneous Proj.
    Compare(FanCmd),
    /// Classify a complete smooth surface fan (or a random batch).
    ClassifySurface(ClassifyCmd),
    /// Line-bundle locus of a twist over the chart atlases.
    Linebundle(LinebundleCmd),
    /// Star-subdivide a smooth 2-cone and emit the blown-up fan.
    Blowup(BlowupCmd),
}

#[derive(Args)]
struct FanCmd {
    #[command(flatten)]
    input: FanInput,
}

#[derive(Args)]
struct ClassifyCmd {
    #[command(flatten)]
    input: FanInput,
    /// Classify this many seeded random fans instead of an input fan.
    #[arg(long, value_name = "N")]
    random: Option<usize>,
}

#[derive(Args)]
struct LinebundleCmd {
    #[command(flatten)]
    input: FanInput,
    /// Twist coordinates in the printed Picard basis, e.g. "1,0".
    #[arg(long, value_name = "D")]
    twist: String,
    /// Restrict the report to the chart with this complement ray set, e.g. "0,2".
    #[arg(long, value_name = "RAYS")]
    chart: Option<String>,
    /// Pin the Picard basis: projection rows "a,b,..;c,d,..".
    #[arg(long = "pic-basis", value_name = "ROWS")]
    pic_basis: Option<String>,
}

#[derive(Args)]
struct BlowupCmd {
    #[command(flatten)]
    input: FanInput,
    /// Ray indices of the 2-cone to subdivide, e.g. "0,1".
    #[arg(long, value_name = "RAYS")]
    cone: String,
    /// Write the resulting fan JSON to this file.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

/// One finished report, ready to render in either format.
struct Outcome {
    digest: String,
    payload: Value,
    warnings: Vec<String>,
    text: Vec<String>,
    exit: i32,
}

type Parts = (Value, Vec<String>, Vec<String>, i32);

/// Parses arguments, runs the command, renders the report; returns the
/// process exit code.
pub fn run_from<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = write!(out, "{}", e.render());
            return code;
        }
    };
    let format = cli.format;
    let (name, outcome) = dispatch(&cli);
    render(out, format, name, &outcome)
}

fn dispatch(cli: &Cli) -> (&'static str, Outcome) {
    match &cli.command {
        Command::Validate(c) => ("validate", handle_validate(&c.input)),
        Command::Info(c) => {
            let d = input_digest(&c.input);
            ("info", finish(d, load_fan(&c.input).and_then(|f| info_parts(&f))))
        }
        Command::Picard(c) => {
            let d = input_digest(&c.input);
            ("picard", finish(d, load_fan(&c.input).and_then(|f| picard_parts(&f))))
        }
        Command::Coxring(c) => {
            let d = input_digest(&c.input);
            ("coxring", finish(d, load_fan(&c.input).and_then(|f| coxring_parts(&f))))
        }
        Command::Charts(c) => {
            let d = input_digest(&c.input);
            ("charts", finish(d, load_fan(&c.input).and_then(|f| charts_parts(&f))))
        }
        Command::Compare(c) => {
            let d = input_digest(&c.input);
            ("compare", finish(d, load_fan(&c.input).and_then(|f| compare_parts(&f))))
        }
        Command::ClassifySurface(c) => {
            let d = input_digest(&c.input);
            ("classify-surface", finish(d, classify_parts(c, cli.seed)))
        }
        Command::Linebundle(c) => {
            let d = input_digest(&c.input);
            ("linebundle", finish(d, linebundle_parts(c)))
        }
        Command::Blowup(c) => {
            let d = input_digest(&c.input);
            ("blowup", finish(d, blowup_parts(c)))
        }
    }
}

fn finish(digest: String, parts: Result<Parts>) -> Outcome {
    match parts {
        Ok((payload, warnings, text, exit)) => Outcome { digest, payload, warnings, text, exit },
        Err(e) => error_outcome(digest, &e),
    }
}

fn error_outcome(digest: String, e: &Error) -> Outcome {
    let exit = if e.is_assumption_violation() { 2 } else { 1 };
    let messages: Vec<String> = match e {
        Error::InvalidFan(v) | Error::AssumptionViolated(v) => v.clone(),
        other => vec![other.to_string()],
    };
    let kind = if exit == 2 { "assumption-violation" } else { "error" };
    let payload = json!({ "error": { "kind": kind, "messages": messages } });
    let mut text = vec![format!("{kind}:")];
    for m in &messages {
        text.push(format!("  {m}"));
    }
    Outcome { digest, payload, warnings: vec![], text, exit }
}

fn render(out: &mut dyn Write, format: Format, name: &str, outcome: &Outcome) -> i32 {
    match format {
        Format::Json => {
            let envelope = json!({
                "command": name,
                "input": outcome.digest,
                "payload": outcome.payload,
                "warnings": outcome.warnings,
            });
            let rendered =
                serde_json::to_string_pretty(&envelope).expect("reports contain no non-string keys");
            let _ = writeln!(out, "{rendered}");
        }
        Format::Text => {
            for line in &outcome.text {
                let _ = writeln!(out, "{line}");
            }
            for w in &outcome.warnings {
                let _ = writeln!(out, "warning: {w}");
            }
        }
    }
    outcome.exit
}

// ---- input plumbing ----

fn load_fan(input: &FanInput) -> Result<Fan> {
    match (&input.builtin, &input.fan) {
        (Some(spec), None) => builtin_fan(spec),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
            FanFile::from_json(&text)?.to_fan()
        }
        (None, None) => Err(Error::Input("provide --builtin or --fan".to_string())),
        (Some(_), Some(_)) => {
            Err(Error::Input("provide only one of --builtin and --fan".to_string()))
        }
    }
}

fn input_digest(input: &FanInput) -> String {
    let bytes: Vec<u8> = match (&input.builtin, &input.fan) {
        (Some(spec), _) => format!("builtin:{spec}").into_bytes(),
        (None, Some(path)) => fs::read(path)
            .unwrap_or_else(|_| format!("file:{}:unreadable", path.display()).into_bytes()),
        (None, None) => b"none".to_vec(),
    };
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

// ---- JSON helpers (checked integers, deterministic shapes) ----

fn int_json(x: &Int) -> Result<Value> {
    x.to_i64()
        .map(Value::from)
        .ok_or_else(|| Error::Internal("integer exceeds the JSON-safe range".into()))
}

fn ints_json(v: &[Int]) -> Result<Value> {
    Ok(Value::Array(v.iter().map(int_json).collect::<Result<_>>()?))
}

fn matrix_rows_json(m: &IntMatrix) -> Result<Value> {
    Ok(Value::Array((0..m.rows()).map(|r| ints_json(m.row(r))).collect::<Result<_>>()?))
}

fn set_json(c: &BTreeSet<usize>) -> Value {
    Value::Array(c.iter().map(|&i| Value::from(i as u64)).collect())
}

fn index_json(ix: &SubgroupIndex) -> Result<Value> {
    match ix {
        SubgroupIndex::Finite { index, invariant_factors } => Ok(json!({
            "finite": true,
            "value": int_json(index)?,
            "invariant_factors": ints_json(invariant_factors)?,
        })),
        SubgroupIndex::Infinite => Ok(json!({ "finite": false })),
    }
}

// ---- text helpers ----

fn fmt_set(c: &BTreeSet<usize>) -> String {
    let inner: Vec<String> = c.iter().map(usize::to_string).collect();
    format!("{{{}}}", inner.join(", "))
}

fn fmt_ints(v: &[Int]) -> String {
    let inner: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", inner.join(", "))
}

fn fmt_index(ix: &SubgroupIndex) -> String {
    match ix {
        SubgroupIndex::Finite { index, .. } => index.to_string(),
        SubgroupIndex::Infinite => "infinite".to_string(),
    }
}

fn push_pic_basis_text(text: &mut Vec<String>, basis: &IntMatrix) {
    text.push("Picard basis rows:".to_string());
    if basis.rows() == 0 {
        text.push("  (trivial group)".to_string());
    }
    for r in 0..basis.rows() {
        text.push(format!("  {}", fmt_ints(basis.row(r))));
    }
}

// ---- argument value parsing ----

fn parse_int_list(s: &str) -> Result<Vec<Int>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map(Int::from)
                .map_err(|_| Error::Input(format!("not an integer: {t:?}")))
        })
        .collect()
}

fn parse_usize_set(s: &str) -> Result<BTreeSet<usize>> {
    s.split(',')
        .map(|t| {
            t.trim().parse::<usize>().map_err(|_| Error::Input(format!("not a ray index: {t:?}")))
        })
        .collect()
}

fn parse_matrix(s: &str) -> Result<IntMatrix> {
    let rows = s.split(';').map(parse_int_list).collect::<Result<Vec<_>>>()?;
    IntMatrix::from_rows(rows)
}

// ---- command handlers ----

fn handle_validate(input: &FanInput) -> Outcome {
    let digest = input_digest(input);
    match load_fan(input) {
        Ok(fan) => {
            let payload = json!({
                "valid": true,
                "violations": [],
                "lattice_rank": fan.lattice_rank(),
                "rays": fan.rays().len(),
                "cones": fan.cones().len(),
            });
            let text = vec![
                "fan is valid".to_string(),
                format!("lattice rank: {}", fan.lattice_rank()),
                format!("rays: {}", fan.rays().len()),
                format!("cones: {} ({} maximal)", fan.cones().len(), fan.max_cones().len()),
            ];
            Outcome { digest, payload, warnings: vec![], text, exit: 0 }
        }
        Err(Error::InvalidFan(violations)) => {
            let payload = json!({ "valid": false, "violations": violations });
            let mut text = vec!["fan is invalid".to_string()];
            for v in &violations {
                text.push(format!("  {v}"));
            }
            Outcome { digest, payload, warnings: vec![], text, exit: 1 }
        }
        Err(e) => error_outcome(digest, &e),
    }
}

fn info_parts(fan: &Fan) -> Result<Parts> {
    let report = fan.report();
    let payload = serde_json::to_value(&report)
        .map_err(|e| Error::Internal(format!("report serialization: {e}")))?;
    let complete = match report.complete {
        Some(true) => "true",
        Some(false) => "false",
        None => "unknown",
    };
    let mut text = vec![
        format!("lattice rank: {}", report.lattice_rank),
        format!("rays: {}", report.ray_count),
        format!("cones: {} ({} maximal)", report.cone_count, report.max_cone_count),
        format!("support spans: {}", report.support_spans),
        format!("simplicial: {}", report.simplicial),
        format!("smooth: {}", report.smooth),
        format!("complete: {complete}"),
    ];
    for v in &report.assumption_violations {
        text.push(format!("assumption violated: {v}"));
    }
    Ok((payload, vec![], text, 0))
}

fn picard_parts(fan: &Fan) -> Result<Parts> {
    let sf = support_function_lattice(fan)?;
    let pic = picard(&sf)?;
    let free_rows: Vec<usize> = (0..pic.free_rank()).collect();
    let basis = pic.projection().select_rows(&free_rows);
    let payload = json!({
        "sf_rank": sf.rank(),
        "sf_basis": matrix_rows_json(sf.basis())?,
        "pic_rank": pic.free_rank(),
        "torsion": ints_json(pic.torsion())?,
        "pic_basis": matrix_rows_json(&basis)?,
    });
    let torsion_text = if pic.torsion().is_empty() {
        "none".to_string()
    } else {
        pic.torsion().iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", ")
    };
    let mut text = vec![
        format!("support-function rank: {}", sf.rank()),
        format!("Picard rank: {}", pic.free_rank()),
        format!("torsion: {torsion_text}"),
    ];
    push_pic_basis_text(&mut text, &basis);
    Ok((payload, vec![], text, 0))
}

fn model_kind_str(kind: ModelKind) -> &'static str {
    match kind {
        ModelKind::Exact => "exact",
        ModelKind::PaperModel => "paper-model",
    }
}

fn coxring_parts(fan: &Fan) -> Result<Parts> {
    let model = cox_model(fan)?;
    let lambdas: Vec<Int> = model.ray_fns().iter().map(|k| k.dilation.clone()).collect();
    let degree_cols: Vec<Value> =
        (0..model.nvars()).map(|r| ints_json(&model.degree(r))).collect::<Result<_>>()?;
    let payload = json!({
        "variables": model.nvars(),
        "degrees": Value::Array(degree_cols),
        "lambda": ints_json(&lambdas)?,
        "model_kind": model_kind_str(model.model_kind()),
        "krull_dim": model.krull_dim(),
        "pic_rank": model.pic().free_rank(),
        "pic_basis": matrix_rows_json(model.pic().projection())?,
    });
    let mut text = vec![
        format!("variables: {}", model.nvars()),
        format!("model kind: {}", model_kind_str(model.model_kind())),
        format!("Krull dimension: {}", model.krull_dim()),
        format!("Picard rank: {}", model.pic().free_rank()),
    ];
    push_pic_basis_text(&mut text, model.pic().projection());
    for (rho, lambda) in lambdas.iter().enumerate() {
        text.push(format!("x{rho}: deg {}, lambda {lambda}", fmt_ints(&model.degree(rho))));
    }
    Ok((payload, model.warnings().to_vec(), text, 0))
}

fn chart_json(model: &CoxModel, c: &Chart) -> Result<Value> {
    Ok(json!({
        "key": set_json(c.complement()),
        "support": set_json(c.support()),
        "index": index_json(c.index())?,
        "in_fan": model.fan().contains_cone(c.complement()),
    }))
}

fn charts_parts(fan: &Fan) -> Result<Parts> {
    let model = cox_model(fan)?;
    let tp = tproj_atlas(&model)?;
    let pm = projmh_atlas(&model)?;
    let tp_json: Vec<Value> = tp.iter().map(|c| chart_json(&model, c)).collect::<Result<_>>()?;
    let pm_json: Vec<Value> = pm.iter().map(|c| chart_json(&model, c)).collect::<Result<_>>()?;
    let payload = json!({
        "tproj": Value::Array(tp_json),
        "projmh": Value::Array(pm_json),
        "pic_basis": matrix_rows_json(model.pic().projection())?,
    });
    let mut text = vec![format!("toric atlas: {} charts", tp.len())];
    for c in &tp {
        text.push(format!(
            "  cone {}: support {}, index {}",
            fmt_set(c.complement()),
            fmt_set(c.support()),
            fmt_index(c.index())
        ));
    }
    text.push(format!("multihomogeneous atlas: {} charts", pm.len()));
    for c in &pm {
        let marker = if model.fan().contains_cone(c.complement()) { "" } else { " (extra)" };
        text.push(format!(
            "  key {}{marker}: support {}, index {}",
            fmt_set(c.complement()),
            fmt_set(c.support()),
            fmt_index(c.index())
        ));
    }
    Ok((payload, model.warnings().to_vec(), text, 0))
}

fn verdict_str(v: &Verdict) -> &'static str {
    match v {
        Verdict::Isomorphism => "isomorphism",
        Verdict::NotIsomorphism => "not isomorphism",
        Verdict::AssumptionViolated(_) => "assumption violated",
    }
}

fn compare_parts(fan: &Fan) -> Result<Parts> {
    let report = compare_fan(fan)?;
    let violations = match &report.verdict {
        Verdict::AssumptionViolated(v) => v.clone(),
        _ => vec![],
    };
    let witnesses: Vec<Value> = report
        .witnesses
        .iter()
        .map(|w| {
            let cert: Vec<Value> = w
                .certificate
                .iter()
                .map(|s| json!({ "cone": set_json(&s.cone), "generator": s.generator }))
                .collect();
            json!({
                "cone": set_json(&w.cone),
                "generators": set_json(&w.generators),
                "extra_chart_support": set_json(w.extra_chart.support()),
                "certificate": Value::Array(cert),
            })
        })
        .collect();
    let payload = json!({
        "verdict": verdict_str(&report.verdict),
        "is_isomorphism": match report.is_isomorphism() {
            Some(b) => Value::Bool(b),
            None => Value::Null,
        },
        "assumptions": {
            "support_spans": report.assumptions.support_spans,
            "simplicial": report.assumptions.simplicial,
            "pic_torsion_free": report.assumptions.pic_torsion_free,
            "enough_cartier": report.assumptions.enough_cartier,
        },
        "pic_rank": report.pic_rank,
        "pic_basis": match &report.pic_basis {
            Some(b) => matrix_rows_json(b)?,
            None => Value::Null,
        },
        "tproj_charts": Value::Array(report.tproj_atlas.iter().map(|c| set_json(c.complement())).collect()),
        "projmh_charts": Value::Array(report.projmh_atlas.iter().map(|c| set_json(c.complement())).collect()),
        "missing_cones": Value::Array(report.missing_cones.iter().map(set_json).collect()),
        "witnesses": Value::Array(witnesses),
        "notes": report.notes,
        "violations": violations,
    });

    let mut text = vec![format!("verdict: {}", verdict_str(&report.verdict))];
    text.push(format!(
        "assumptions: support spans {}, simplicial {}, torsion-free Picard {}, enough Cartier {}",
        report.assumptions.support_spans,
        report.assumptions.simplicial,
        report.assumptions.pic_torsion_free,
        report.assumptions.enough_cartier
    ));
    for v in &violations {
        text.push(format!("  violated: {v}"));
    }
    text.push(format!("Picard rank: {}", report.pic_rank));
    if let Some(basis) = &report.pic_basis {
        push_pic_basis_text(&mut text, basis);
    }
    if report.is_isomorphism().is_some() {
        text.push(format!(
            "charts: {} toric, {} multihomogeneous",
            report.tproj_atlas.len(),
            report.projmh_atlas.len()
        ));
    }
    for c in &report.missing_cones {
        let rays: Vec<String> = c.iter().map(|&i| fmt_ints(fan.ray(i))).collect();
        text.push(format!("missing cone {}: rays {}", fmt_set(c), rays.join(", ")));
    }
    for w in &report.witnesses {
        let gens: Vec<String> = w.generators.iter().map(|&i| format!("x{i}")).collect();
        text.push(format!(
            "witness for {}: generators {}; extra chart support {}",
            fmt_set(&w.cone),
            gens.join(", "),
            fmt_set(w.extra_chart.support())
        ));
    }
    for n in &report.notes {
        text.push(format!("note: {n}"));
    }
    let exit = if matches!(report.verdict, Verdict::AssumptionViolated(_)) { 2 } else { 0 };
    Ok((payload, vec![], text, exit))
}

fn classify_parts(cmd: &ClassifyCmd, seed: u64) -> Result<Parts> {
    if let Some(n) = cmd.random {
        let mut results = Vec::with_capacity(n);
        let mut text = Vec::with_capacity(n + 1);
        let mut all_agree = true;
        for k in 0..n {
            let fan_seed = seed.wrapping_add(k as u64);
            let fan = random_complete_smooth_surface(fan_seed, 10)?;
            let sc = classify_surface(&fan)?;
            let simplicially_complete = fan.is_simplicially_complete()?.complete;
            let agree = sc.is_isomorphism == simplicially_complete;
            all_agree &= agree;
            results.push(json!({
                "seed": fan_seed,
                "rays": sc.rays,
                "pic_rank": sc.pic_rank,
                "is_isomorphism": sc.is_isomorphism,
                "simplicially_complete": simplicially_complete,
                "agree": agree,
            }));
            text.push(format!(
                "seed {fan_seed}: rays {}, Picard rank {}, isomorphism {}, simplicially complete {}, agree {agree}",
                sc.rays, sc.pic_rank, sc.is_isomorphism, simplicially_complete
            ));
        }
        text.push(format!("all agree: {all_agree}"));
        let payload = json!({
            "random": n,
            "base_seed": seed,
            "results": Value::Array(results),
            "all_agree": all_agree,
        });
        let exit = i32::from(!all_agree);
        return Ok((payload, vec![], text, exit));
    }

    let fan = load_fan(&cmd.input)?;
    let sc = classify_surface(&fan)?;
    let verdict = if sc.is_isomorphism { "isomorphism" } else { "not isomorphism" };
    let payload = json!({
        "rays": sc.rays,
        "pic_rank": sc.pic_rank,
        "is_isomorphism": sc.is_isomorphism,
        "verdict": verdict,
        "reasons": sc.reasons,
    });
    let mut text = vec![
        format!("verdict: {verdict}"),
        format!("rays: {}", sc.rays),
        format!("Picard rank: {}", sc.pic_rank),
    ];
    for r in &sc.reasons {
        text.push(format!("reason: {r}"));
    }
    Ok((payload, vec![], text, 0))
}

fn linebundle_parts(cmd: &LinebundleCmd) -> Result<Parts> {
    let fan = load_fan(&cmd.input)?;
    let mut model = cox_model(&fan)?;
    if let Some(basis) = &cmd.pic_basis {
        model = model.with_pic_basis(parse_matrix(basis)?)?;
    }
    let d = parse_int_list(&cmd.twist)?;
    let charts = projmh_atlas(&model)?;
    let locus = twist_line_bundle_locus(&model, &d, &charts)?;

    if let Some(sel) = &cmd.chart {
        let key = parse_usize_set(sel)?;
        let pos = charts.iter().position(|c| c.complement() == &key).ok_or_else(|| {
            Error::Input(format!("no chart has complement {} (rays dependent or unknown)", fmt_set(&key)))
        })?;
        let flag = locus.per_chart[pos];
        let in_fan = model.fan().contains_cone(&key);
        let payload = json!({
            "twist": ints_json(&d)?,
            "pic_basis": matrix_rows_json(model.pic().projection())?,
            "chart": { "key": set_json(&key), "in_fan": in_fan, "line_bundle": flag },
        });
        let mut text = vec![format!("twist: {}", fmt_ints(&d))];
        push_pic_basis_text(&mut text, model.pic().projection());
        text.push(format!("chart {}: line bundle {flag}", fmt_set(&key)));
        return Ok((payload, model.warnings().to_vec(), text, 0));
    }

    let rows: Vec<Value> = charts
        .iter()
        .zip(&locus.per_chart)
        .map(|(c, &flag)| {
            json!({
                "key": set_json(c.complement()),
                "in_fan": model.fan().contains_cone(c.complement()),
                "line_bundle": flag,
            })
        })
        .collect();
    let payload = json!({
        "twist": ints_json(&d)?,
        "pic_basis": matrix_rows_json(model.pic().projection())?,
        "charts": Value::Array(rows),
        "tproj_all": locus.tproj_all,
        "projmh_all": locus.projmh_all,
    });
    let mut text = vec![format!("twist: {}", fmt_ints(&d))];
    push_pic_basis_text(&mut text, model.pic().projection());
    for (c, &flag) in charts.iter().zip(&locus.per_chart) {
        let marker = if model.fan().contains_cone(c.complement()) { "" } else { " (extra)" };
        text.push(format!("  chart {}{marker}: {flag}", fmt_set(c.complement())));
    }
    text.push(format!("all toric charts: {}", locus.tproj_all));
    text.push(format!("all charts: {}", locus.projmh_all));
    Ok((payload, model.warnings().to_vec(), text, 0))
}

fn blowup_parts(cmd: &BlowupCmd) -> Result<Parts> {
    let fan = load_fan(&cmd.input)?;
    let cone = parse_usize_set(&cmd.cone)?;
    let blown = fan.star_subdivision(&cone)?;
    let name = match (&cmd.input.builtin, &cmd.input.fan) {
        (Some(b), _) => Some(format!("{b} blown up at {}", fmt_set(&cone))),
        (_, Some(p)) => p
            .file_stem()
            .map(|s| format!("{} blown up at {}", s.to_string_lossy(), fmt_set(&cone))),
        _ => None,
    };
    let file = FanFile::from_fan(&blown, name)?;
    let written = match &cmd.out {
        Some(path) => {
            fs::write(path, format!("{}\n", file.to_json()))
                .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
            Value::String(path.display().to_string())
        }
        None => Value::Null,
    };
    let new_ray = blown.ray(blown.rays().len() - 1).to_vec();
    let payload = json!({
        "fan": serde_json::to_value(&file)
            .map_err(|e| Error::Internal(format!("fan serialization: {e}")))?,
        "new_ray": ints_json(&new_ray)?,
        "rays": blown.rays().len(),
        "written": written,
    });
    let mut text = vec![
        format!("new ray: {}", fmt_ints(&new_ray)),
        format!("rays: {}", blown.rays().len()),
    ];
    if let Some(path) = &cmd.out {
        text.push(format!("written: {}", path.display()));
    }
    Ok((payload, vec![], text, 0))
}
