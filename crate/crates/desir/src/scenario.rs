//! Scenario files: a JSON schema describing a space, named gambles, one
//! operator, one set, and a list of typed queries, executed in order into
//! a deterministic report.
//!
//! The schema is deliberately flat and diffable: `space`, `gambles`,
//! `operator{kind,params}`, exactly one of `generators`/`catalog`,
//! `queries[{type,args}]`, `tol`, `seed`. Reports echo enough of each
//! query to re-run it standalone, and identical scenario+seed pairs
//! produce byte-identical JSON.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::consistency::{self, EPS_GRID};
use crate::credal;
use crate::decide;
use crate::demo;
use crate::gamble::{Event, Gamble, Partition, PossibilitySpace};
use crate::operators::{
    CatalogId, ClosureSpec, DesirSet, OperatorKind, PriceFunctional, Tolerances, UtilityFn,
};
use crate::previsions;
use crate::structure::{self, ConditionalFamily};

#[derive(Debug, Error)]
pub enum ScenarioError {
    /// Malformed file or a query asking something the operator cannot
    /// provide; maps to exit code 2.
    #[error("schema: {0}")]
    Schema(String),
    /// A numerical routine failed or two routes disagreed; exit code 3.
    #[error("numerical: {0}")]
    Numerical(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

fn schema(msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Schema(msg.into())
}

#[derive(Clone, Debug, Deserialize)]
pub struct OperatorDescriptor {
    pub kind: String,
    #[serde(default)]
    pub params: Value,
}

#[derive(Clone, Debug, Deserialize)]
pub struct QuerySpec {
    #[serde(rename = "type")]
    pub query_type: String,
    #[serde(default)]
    pub args: Value,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Scenario {
    pub space: Vec<String>,
    #[serde(default)]
    pub gambles: BTreeMap<String, Vec<f64>>,
    pub operator: OperatorDescriptor,
    #[serde(default)]
    pub generators: Option<Vec<String>>,
    #[serde(default)]
    pub catalog: Option<String>,
    pub queries: Vec<QuerySpec>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_tol() -> f64 {
    1e-9
}

#[derive(Serialize)]
pub struct ReportRecord {
    pub index: usize,
    #[serde(rename = "type")]
    pub query_type: String,
    pub args: Value,
    pub result: Value,
}

#[derive(Serialize)]
pub struct ScenarioReport {
    pub space: Vec<String>,
    pub operator: String,
    pub set: String,
    pub tol: f64,
    pub seed: u64,
    pub records: Vec<ReportRecord>,
}

struct Context {
    space: PossibilitySpace,
    gambles: BTreeMap<String, Gamble>,
    set: DesirSet,
    tol: f64,
    seed: u64,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario, ScenarioError> {
        serde_json::from_str(text).map_err(|e| schema(format!("cannot parse scenario: {e}")))
    }

    fn build(&self) -> Result<Context, ScenarioError> {
        let space = PossibilitySpace::new(self.space.clone())
            .map_err(|e| schema(format!("bad space: {e}")))?;
        let mut gambles = BTreeMap::new();
        for (name, values) in &self.gambles {
            let g = Gamble::new(&space, values.clone())
                .map_err(|e| schema(format!("gamble `{name}`: {e}")))?;
            gambles.insert(name.clone(), g);
        }
        let kind = parse_operator(&self.operator)?;
        let spec = ClosureSpec {
            kind,
            tol: Tolerances::default(),
        };
        let set = match (&self.generators, &self.catalog) {
            (Some(names), None) => {
                let gens = names
                    .iter()
                    .map(|n| {
                        gambles
                            .get(n)
                            .cloned()
                            .ok_or_else(|| schema(format!("unknown generator gamble `{n}`")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                DesirSet::generated(&space, gens, spec)
                    .map_err(|e| schema(format!("cannot build set: {e}")))?
            }
            (None, Some(id)) => {
                let id = CatalogId::parse(id)
                    .ok_or_else(|| schema(format!("unknown catalog set `{id}`")))?;
                DesirSet::catalog(&space, id)
                    .map_err(|e| schema(format!("cannot build catalog set: {e}")))?
            }
            _ => {
                return Err(schema(
                    "exactly one of `generators` and `catalog` must be given",
                ))
            }
        };
        Ok(Context {
            space,
            gambles,
            set,
            tol: self.tol,
            seed: self.seed,
        })
    }
}

fn parse_operator(descriptor: &OperatorDescriptor) -> Result<OperatorKind, ScenarioError> {
    let p = &descriptor.params;
    let kind = match descriptor.kind.as_str() {
        "kappa1" => OperatorKind::Kappa1,
        "kappa2" => OperatorKind::Kappa2 {
            max_multiplicity: p
                .get("max_multiplicity")
                .and_then(Value::as_u64)
                .unwrap_or(64) as u32,
        },
        "kappa3" => OperatorKind::Kappa3,
        "kappa4" => OperatorKind::Kappa4,
        "utility-warp" => {
            let utility: UtilityFn = serde_json::from_value(
                p.get("utility")
                    .cloned()
                    .ok_or_else(|| schema("utility-warp needs params.utility"))?,
            )
            .map_err(|e| schema(format!("bad utility: {e}")))?;
            OperatorKind::UtilityWarp { utility }
        }
        "prevision-induced" => {
            let functional: PriceFunctional = serde_json::from_value(
                p.get("functional")
                    .cloned()
                    .ok_or_else(|| schema("prevision-induced needs params.functional"))?,
            )
            .map_err(|e| schema(format!("bad functional: {e}")))?;
            OperatorKind::PrevisionInduced { functional }
        }
        "neg-limit" => OperatorKind::NegLimit {
            max_negative_coords: p
                .get("max_negative_coords")
                .and_then(Value::as_u64)
                .ok_or_else(|| schema("neg-limit needs params.max_negative_coords"))?
                as usize,
        },
        other => return Err(schema(format!("unknown operator kind `{other}`"))),
    };
    Ok(kind)
}

impl Context {
    fn gamble(&self, v: &Value) -> Result<Gamble, ScenarioError> {
        match v {
            Value::String(name) => self
                .gambles
                .get(name)
                .cloned()
                .ok_or_else(|| schema(format!("unknown gamble `{name}`"))),
            Value::Array(values) => {
                let vec: Vec<f64> = values
                    .iter()
                    .map(|x| x.as_f64().ok_or_else(|| schema("gamble entries must be numbers")))
                    .collect::<Result<_, _>>()?;
                Gamble::new(&self.space, vec).map_err(|e| schema(format!("inline gamble: {e}")))
            }
            _ => Err(schema("gamble must be a name or a vector")),
        }
    }

    fn event(&self, v: &Value) -> Result<Event, ScenarioError> {
        let labels: Vec<String> = serde_json::from_value(v.clone())
            .map_err(|_| schema("event must be a list of outcome labels"))?;
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        Event::from_labels(&self.space, &refs).map_err(|e| schema(format!("bad event: {e}")))
    }

    fn partition(&self, v: &Value) -> Result<Partition, ScenarioError> {
        let blocks: Vec<Vec<String>> = serde_json::from_value(v.clone())
            .map_err(|_| schema("partition must be a list of label lists"))?;
        let refs: Vec<Vec<&str>> = blocks
            .iter()
            .map(|b| b.iter().map(String::as_str).collect())
            .collect();
        Partition::from_labels(&self.space, &refs)
            .map_err(|e| schema(format!("bad partition: {e}")))
    }
}

fn to_value<T: Serialize>(value: &T) -> Result<Value, ScenarioError> {
    serde_json::to_value(value).map_err(|e| ScenarioError::Numerical(e.to_string()))
}

fn numerical<E: std::fmt::Display>(e: E) -> ScenarioError {
    ScenarioError::Numerical(e.to_string())
}

/// Run a parsed scenario. `tol`/`seed` overrides take precedence over the
/// file's values.
pub fn run(
    scenario: &Scenario,
    tol_override: Option<f64>,
    seed_override: Option<u64>,
    verbose: bool,
) -> Result<ScenarioReport, ScenarioError> {
    let mut ctx = scenario.build()?;
    if let Some(t) = tol_override {
        ctx.tol = t;
    }
    if let Some(s) = seed_override {
        ctx.seed = s;
    }
    let mut records = Vec::new();
    for (index, q) in scenario.queries.iter().enumerate() {
        if verbose {
            eprintln!("desir: query {index}: {}", q.query_type);
        }
        let result = run_query(&ctx, q)?;
        records.push(ReportRecord {
            index,
            query_type: q.query_type.clone(),
            args: q.args.clone(),
            result,
        });
    }
    Ok(ScenarioReport {
        space: scenario.space.clone(),
        operator: scenario.operator.kind.clone(),
        set: ctx.set.describe(),
        tol: ctx.tol,
        seed: ctx.seed,
        records,
    })
}

fn run_query(ctx: &Context, q: &QuerySpec) -> Result<Value, ScenarioError> {
    let args = &q.args;
    let set = &ctx.set;
    match q.query_type.as_str() {
        "member" => {
            let f = ctx.gamble(args.get("gamble").ok_or_else(|| schema("member needs a gamble"))?)?;
            let m = set.member(&f).map_err(numerical)?;
            to_value(&m)
        }
        "classify" => {
            let f = ctx.gamble(args.get("gamble").ok_or_else(|| schema("classify needs a gamble"))?)?;
            to_value(&crate::gamble::classify(&f))
        }
        "apl" => {
            let verdict = consistency::avoids_partial_loss(set).map_err(numerical)?;
            to_value(&json!({ "avoids_partial_loss": verdict }))
        }
        "asl" => {
            let report = consistency::avoids_sure_loss(set, &EPS_GRID).map_err(numerical)?;
            to_value(&json!({
                "avoids_sure_loss": report.verdict,
                "witness": report.witness.map(|w| w.values().to_vec()),
                "note": report.note,
            }))
        }
        "coherent" => {
            let verdict = consistency::is_coherent(set).map_err(numerical)?;
            to_value(&json!({ "coherent": verdict }))
        }
        "lower-prevision" => {
            let f = ctx.gamble(args.get("gamble").ok_or_else(|| schema("needs a gamble"))?)?;
            let b = previsions::lower_prevision(set, &f, ctx.tol).map_err(numerical)?;
            to_value(&b)
        }
        "upper-prevision" => {
            let f = ctx.gamble(args.get("gamble").ok_or_else(|| schema("needs a gamble"))?)?;
            let b = previsions::upper_prevision(set, &f, ctx.tol).map_err(numerical)?;
            to_value(&b)
        }
        "precise" => {
            let samples = args.get("samples").and_then(Value::as_u64).unwrap_or(1000) as u32;
            let report =
                previsions::is_precise(set, samples, ctx.seed, ctx.tol).map_err(numerical)?;
            to_value(&report)
        }
        "gbr" => {
            let f = ctx.gamble(args.get("gamble").ok_or_else(|| schema("gbr needs a gamble"))?)?;
            let event = ctx.event(args.get("event").ok_or_else(|| schema("gbr needs an event"))?)?;
            let report = previsions::gbr_conditional(set, &f, &event, ctx.tol).map_err(numerical)?;
            to_value(&report)
        }
        "marginal" => {
            let f = ctx.gamble(args.get("gamble").ok_or_else(|| schema("needs a gamble"))?)?;
            let partition =
                ctx.partition(args.get("partition").ok_or_else(|| schema("needs a partition"))?)?;
            let m = structure::marginal_member(set, &f, &partition).map_err(numerical)?;
            to_value(&m)
        }
        "conditional" => {
            let f = ctx.gamble(args.get("gamble").ok_or_else(|| schema("needs a gamble"))?)?;
            let event = ctx.event(args.get("event").ok_or_else(|| schema("needs an event"))?)?;
            let m = structure::conditional_member(set, &f, &event).map_err(numerical)?;
            to_value(&m)
        }
        "assemble" => {
            let f = ctx.gamble(args.get("gamble").ok_or_else(|| schema("needs a gamble"))?)?;
            let partition =
                ctx.partition(args.get("partition").ok_or_else(|| schema("needs a partition"))?)?;
            let family = ConditionalFamily::from_set(set, &partition).map_err(numerical)?;
            let m = structure::assembled_member(&family, &f).map_err(numerical)?;
            to_value(&m)
        }
        "conglomerable" => {
            let partition =
                ctx.partition(args.get("partition").ok_or_else(|| schema("needs a partition"))?)?;
            let trials = args.get("trials").and_then(Value::as_u64).unwrap_or(200) as u32;
            let family = ConditionalFamily::from_set(set, &partition).map_err(numerical)?;
            let outcome = structure::conglomerability_check(set, &family, trials, ctx.seed)
                .map_err(numerical)?;
            match outcome {
                structure::ConglomerabilityOutcome::NoWitness { candidates_checked } => {
                    to_value(&json!({ "witness": Value::Null, "candidates_checked": candidates_checked }))
                }
                structure::ConglomerabilityOutcome::Witness { gamble } => {
                    to_value(&json!({ "witness": gamble.values().to_vec() }))
                }
            }
        }
        "marginal-extension" => run_marginal_extension(ctx, args),
        "credal" => {
            let polytope = credal_polytope_for(ctx)?;
            let report = credal::is_empty(&polytope).map_err(numerical)?;
            to_value(&json!({
                "constraints": polytope.constraints,
                "emptiness": report,
            }))
        }
        "vertices" => {
            let polytope = credal_polytope_for(ctx)?;
            let verts = credal::vertices(&polytope).map_err(|e| schema(e.to_string()))?;
            let coords: Vec<Vec<f64>> = verts.into_iter().map(|v| v.weights).collect();
            to_value(&json!({ "vertices": coords }))
        }
        "decide" => run_decide(ctx, args),
        "demo" => {
            let name = args
                .get("name")
                .and_then(Value::as_str)
                .ok_or_else(|| schema("demo needs a name"))?;
            let report = demo::run_demo(name).map_err(|e| schema(e))?;
            to_value(&report)
        }
        other => Err(schema(format!("unknown query type `{other}`"))),
    }
}

fn credal_polytope_for(ctx: &Context) -> Result<credal::CredalPolytope, ScenarioError> {
    match credal::credal_intersection(&ctx.set) {
        Ok(p) => Ok(p),
        Err(_) => {
            // non-cone kinds and catalog sets: probe-family polytope
            let probe = crate::sampling::battery(&ctx.space);
            credal::credal_from_probe(&ctx.set, &probe, ctx.tol).map_err(numerical)
        }
    }
}

fn run_marginal_extension(ctx: &Context, args: &Value) -> Result<Value, ScenarioError> {
    let partition =
        ctx.partition(args.get("partition").ok_or_else(|| schema("needs a partition"))?)?;
    let marginal_names: Vec<String> = serde_json::from_value(
        args.get("marginal")
            .cloned()
            .ok_or_else(|| schema("needs marginal generator names"))?,
    )
    .map_err(|_| schema("marginal must be a list of gamble names"))?;
    let conditional_names: Vec<Vec<String>> = serde_json::from_value(
        args.get("conditional")
            .cloned()
            .ok_or_else(|| schema("needs per-block conditional generator names"))?,
    )
    .map_err(|_| schema("conditional must be a list of name lists, one per block"))?;
    let f = ctx.gamble(args.get("gamble").ok_or_else(|| schema("needs a gamble"))?)?;

    let spec = ctx
        .set
        .spec()
        .cloned()
        .ok_or_else(|| schema("marginal extension needs a generated operator"))?;
    let resolve = |names: &[String]| -> Result<Vec<Gamble>, ScenarioError> {
        names
            .iter()
            .map(|n| ctx.gamble(&Value::String(n.clone())))
            .collect()
    };
    let marginal = DesirSet::generated(&ctx.space, resolve(&marginal_names)?, spec.clone())
        .map_err(|e| schema(e.to_string()))?;
    if conditional_names.len() != partition.blocks().len() {
        return Err(schema("one conditional generator list per block required"));
    }
    let per_block = conditional_names
        .iter()
        .map(|names| {
            DesirSet::generated(&ctx.space, resolve(names)?, spec.clone())
                .map_err(|e| schema(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let family = ConditionalFamily::new(partition, per_block).map_err(|e| schema(e.to_string()))?;
    let report =
        previsions::marginal_extension_prevision(&marginal, &family, &spec.kind, &f, ctx.tol)
            .map_err(numerical)?;
    to_value(&report)
}

fn run_decide(ctx: &Context, args: &Value) -> Result<Value, ScenarioError> {
    let criterion = args
        .get("criterion")
        .and_then(Value::as_str)
        .ok_or_else(|| schema("decide needs a criterion"))?;
    let names: Vec<String> = serde_json::from_value(
        args.get("options")
            .cloned()
            .ok_or_else(|| schema("decide needs options"))?,
    )
    .map_err(|_| schema("options must be a list of gamble names"))?;
    let options: Vec<(String, Gamble)> = names
        .iter()
        .map(|n| Ok((n.clone(), ctx.gamble(&Value::String(n.clone()))?)))
        .collect::<Result<_, ScenarioError>>()?;
    let report = match criterion {
        decide::GAMMA_MAXIMIN => decide::gamma_maximin(&ctx.set, &options, ctx.tol),
        decide::GAMMA_MAXIMAX => decide::gamma_maximax(&ctx.set, &options, ctx.tol),
        decide::INTERVAL_DOMINANCE => decide::interval_dominance(&ctx.set, &options, ctx.tol),
        decide::MAXIMALITY | decide::E_ADMISSIBILITY => {
            let is_kappa1 = matches!(
                ctx.set.spec().map(|s| &s.kind),
                Some(OperatorKind::Kappa1)
            );
            if !is_kappa1 {
                return Err(schema(format!(
                    "criterion `{criterion}` requires the kappa1 operator or an enumerator"
                )));
            }
            let gens = ctx.set.generators().unwrap_or(&[]).to_vec();
            if criterion == decide::MAXIMALITY {
                decide::maximality_kappa1(&ctx.space, &gens, &options, ctx.tol)
            } else {
                decide::e_admissible_kappa1(&ctx.space, &gens, &options, ctx.tol)
            }
        }
        other => return Err(schema(format!("unknown criterion `{other}`"))),
    }
    .map_err(|e| match e {
        decide::DecideError::Inapplicable(msg) => schema(format!("criterion inapplicable: {msg}")),
        decide::DecideError::Unavailable => schema("criterion unavailable"),
        other => numerical(other),
    })?;
    to_value(&report)
}

/// Build just the set and the named gambles of a scenario, for plotting.
pub fn build_for_plot(
    scenario: &Scenario,
) -> Result<(DesirSet, BTreeMap<String, Gamble>), ScenarioError> {
    let ctx = scenario.build()?;
    Ok((ctx.set, ctx.gambles))
}

/// Pretty JSON with a trailing newline; the canonical report format.
pub fn report_to_json(report: &ScenarioReport) -> Result<String, ScenarioError> {
    let mut text = serde_json::to_string_pretty(report).map_err(|e| numerical(e))?;
    text.push('\n');
    Ok(text)
}

/// CSV flattening: one row per record, prevision brackets as lo/hi
/// columns, everything else summarized into the result column.
pub fn report_to_csv(report: &ScenarioReport) -> Result<String, ScenarioError> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["index", "type", "args", "result", "lo", "hi", "boundary_in"])
        .map_err(|e| numerical(e))?;
    for r in &report.records {
        let (lo, hi, boundary) = bracket_columns(&r.result);
        wtr.write_record([
            r.index.to_string(),
            r.query_type.clone(),
            r.args.to_string(),
            r.result.to_string(),
            lo,
            hi,
            boundary,
        ])
        .map_err(|e| numerical(e))?;
    }
    let bytes = wtr.into_inner().map_err(|e| numerical(e))?;
    String::from_utf8(bytes).map_err(|e| numerical(e))
}

fn bracket_columns(result: &Value) -> (String, String, String) {
    let direct = (
        result.get("lo").and_then(Value::as_f64),
        result.get("hi").and_then(Value::as_f64),
        result.get("boundary_in").and_then(Value::as_str),
    );
    match direct {
        (Some(lo), Some(hi), boundary) => (
            lo.to_string(),
            hi.to_string(),
            boundary.unwrap_or("").to_string(),
        ),
        _ => (String::new(), String::new(), String::new()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const KAPPA3_SCENARIO: &str = r#"{
        "space": ["w1", "w2"],
        "gambles": {
            "f": [-1.0, 1.0],
            "g": [1.0, -2.0],
            "h1": [-2.0, 3.0],
            "h2": [3.0, -2.0],
            "sum": [1.0, 1.0]
        },
        "operator": {"kind": "kappa3"},
        "generators": ["f", "g"],
        "queries": [
            {"type": "lower-prevision", "args": {"gamble": "h1"}},
            {"type": "lower-prevision", "args": {"gamble": "h2"}},
            {"type": "lower-prevision", "args": {"gamble": "sum"}},
            {"type": "apl"},
            {"type": "coherent"}
        ],
        "tol": 1e-9,
        "seed": 7
    }"#;

    #[test]
    fn kappa3_prevision_scenario() {
        let scenario = Scenario::from_json(KAPPA3_SCENARIO).unwrap();
        let report = run(&scenario, None, None, false).unwrap();
        let lo = |i: usize| report.records[i].result["lo"].as_f64().unwrap();
        let hi = |i: usize| report.records[i].result["hi"].as_f64().unwrap();
        assert!((lo(0) - 0.5).abs() < 1e-6 && (hi(0) - 0.5).abs() < 1e-6);
        assert!((lo(1) - 4.0 / 3.0).abs() < 1e-6);
        assert!((lo(2) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn byte_identical_reruns() {
        let scenario = Scenario::from_json(KAPPA3_SCENARIO).unwrap();
        let a = report_to_json(&run(&scenario, None, None, false).unwrap()).unwrap();
        let b = report_to_json(&run(&scenario, None, None, false).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn malformed_vector_is_schema_error() {
        let bad = r#"{
            "space": ["w1", "w2"],
            "gambles": {"f": [1.0]},
            "operator": {"kind": "kappa4"},
            "generators": ["f"],
            "queries": []
        }"#;
        let scenario = Scenario::from_json(bad).unwrap();
        assert!(matches!(
            run(&scenario, None, None, false),
            Err(ScenarioError::Schema(_))
        ));
    }

    #[test]
    fn csv_flattens_brackets() {
        let scenario = Scenario::from_json(KAPPA3_SCENARIO).unwrap();
        let report = run(&scenario, None, None, false).unwrap();
        let csv_text = report_to_csv(&report).unwrap();
        let mut lines = csv_text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "index,type,args,result,lo,hi,boundary_in"
        );
        assert!(csv_text.lines().count() >= 6);
    }
}
