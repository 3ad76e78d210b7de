//! JSON report assembly. Objects are key-sorted and non-finite floats are
//! written as the strings "inf", "-inf" and "nan", so reports are valid JSON
//! and byte-stable across runs.

use modloc_core::conventions;
use modloc_core::flap::BoundReport;
use modloc_core::geometry::PoincareElement;
use modloc_core::localization::LocalizationResult;
use modloc_core::modular::ModularReport;
use modloc_core::regions::PolyRegion;
use modloc_core::C64;
use serde_json::{json, Map, Value};

use crate::formats::RegionJson;

pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

pub fn complex(z: C64) -> Value {
    json!([num(z.re), num(z.im)])
}

pub fn frame(l: &PoincareElement) -> Value {
    json!({
        "a": nums(&l.a.0),
        "lambda": l.lambda.m.iter().map(|r| nums(r)).collect::<Vec<_>>(),
    })
}

pub fn region(r: &PolyRegion) -> Value {
    let rj = RegionJson::from_region(r);
    json!({
        "dim": r.dim,
        "halfspaces": rj.halfspaces.iter().map(|h| json!({"n": nums(&h.n), "c": num(h.c)})).collect::<Vec<_>>(),
        "vertices": rj.vertices.map(|v| v.iter().map(|x| nums(x)).collect::<Vec<_>>()),
        "rays": rj.rays.map(|v| v.iter().map(|x| nums(x)).collect::<Vec<_>>()),
    })
}

/// Convention tags embedded in every report.
pub fn conventions(pairing: &str) -> Value {
    json!({
        "boost_sign": conventions::BOOST_SIGN,
        "light_cone": conventions::LIGHT_CONE,
        "pairing": pairing,
        "norm": conventions::NORM_MAX,
        "inner_product": "antilinear in the first argument",
    })
}

pub fn bound_report(b: &BoundReport) -> Value {
    json!({
        "check": b.check,
        "N_declared": b.n_declared.map(num),
        "N_est": num(b.n_est),
        "C": num(b.c),
        "C_doubled": b.c_doubled.map(num),
        "max_ratio_at": nums(&b.max_ratio_at),
        "grid": nums(&b.grid),
        "skipped": b.skipped,
        "pass": b.pass,
    })
}

pub fn modular_report(r: &ModularReport) -> Value {
    let mut rel = Map::new();
    for x in &r.relations {
        rel.insert(x.name.clone(), num(x.residual));
    }
    json!({
        "wedge": frame(&r.wedge),
        "sign": r.sign.symbol(),
        "relations": rel,
        "max_residual": num(r.max_residual()),
        "decay_exponent": num(r.decay_exponent),
    })
}

/// The projected vector itself goes to a CSV file named by `projected_file`.
pub fn localization_result(r: &LocalizationResult, projected_file: &str) -> Value {
    json!({
        "family": r.family.iter().map(frame).collect::<Vec<_>>(),
        "sign": r.sign.symbol(),
        "method": r.method.name(),
        "tol": num(r.tol),
        "iterations": r.iterations,
        "residual_history": nums(&r.residual_history),
        "residuals": nums(&r.residuals),
        "converged": r.converged,
        "projected_norm": num(r.projected.norm()),
        "projected_file": projected_file,
    })
}

/// One asserted check. `relation` is "<=", ">" or "==".
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub relation: &'static str,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Check {
        Check { name: name.into(), value, bound, relation: "<=", pass: value <= bound }
    }

    pub fn above(name: impl Into<String>, value: f64, bound: f64) -> Check {
        Check { name: name.into(), value, bound, relation: ">", pass: value > bound }
    }

    /// A yes/no outcome, recorded as 1/0 against an expected 1.
    pub fn holds(name: impl Into<String>, ok: bool) -> Check {
        Check { name: name.into(), value: if ok { 1.0 } else { 0.0 }, bound: 1.0, relation: "==", pass: ok }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "value": num(self.value),
            "bound": num(self.bound),
            "relation": self.relation,
            "pass": self.pass,
        })
    }
}

/// Seconds since the Unix epoch; the only nondeterministic report field.
pub fn metadata() -> Value {
    let secs = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    json!({"timestamp_unix": secs, "version": env!("CARGO_PKG_VERSION")})
}

/// Report body without the `metadata` key.
pub fn strip_metadata(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.remove("metadata");
    }
    v
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values are serializable");
    s.push('\n');
    s
}
