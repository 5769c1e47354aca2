//! JSON renderings of check and cohomology results.
//!
//! Objects are `serde_json` maps, which keep keys sorted, and every exact
//! rational is written as a string `p` or `p/q`, so reports are byte-stable.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::axioms::{Axiom, AxiomReport, Instance};
use crate::cohomology::{CohomologyResult, TwoCochain};
use crate::graded::{GradedMap, GradedSpace};
use crate::scalar::{Coeff, Scalar};

/// Which spaces the indices of an instance and its residual refer to.
#[derive(Clone, Copy)]
pub struct Roles<'a> {
    /// `u` and `v` of Borcherds instances, `u` of mode instances.
    pub algebra: &'a GradedSpace,
    /// `v` of mode instances, `w` of Borcherds instances, basis instances.
    pub acted: &'a GradedSpace,
    pub residual: &'a GradedSpace,
}

impl<'a> Roles<'a> {
    pub fn uniform(space: &'a GradedSpace) -> Self {
        Roles {
            algebra: space,
            acted: space,
            residual: space,
        }
    }
}

pub fn instance_json(instance: &Instance, roles: Roles<'_>) -> Value {
    let (a, x) = (roles.algebra, roles.acted);
    match *instance {
        Instance::Basis { v } => json!({"kind": "basis", "v": x.label(v)}),
        Instance::Mode { u, n, v } => json!({
            "kind": "mode",
            "u": a.label(u),
            "n": n,
            "v": x.label(v),
        }),
        Instance::Borcherds { u, v, w, p, q, r } => json!({
            "kind": "borcherds",
            "u": a.label(u),
            "v": a.label(v),
            "w": x.label(w),
            "p": p,
            "q": q,
            "r": r,
        }),
    }
}

/// One line per instance, e.g. `jacobi u=eps v=eps w=one p=0 q=-1 r=-1`.
pub fn instance_text(axiom: Axiom, instance: &Instance, roles: Roles<'_>) -> String {
    let (a, x) = (roles.algebra, roles.acted);
    let at = match *instance {
        Instance::Basis { v } => format!("v={}", x.label(v)),
        Instance::Mode { u, n, v } => format!("u={} n={} v={}", a.label(u), n, x.label(v)),
        Instance::Borcherds { u, v, w, p, q, r } => format!(
            "u={} v={} w={} p={} q={} r={}",
            a.label(u),
            a.label(v),
            x.label(w),
            p,
            q,
            r
        ),
    };
    format!("{} {}", axiom.name(), at)
}

pub fn axiom_report_json<'a, R: Coeff>(
    report: &AxiomReport<R>,
    roles: impl Fn(Axiom) -> Roles<'a>,
) -> Value {
    let failed: Vec<Value> = report
        .failed
        .iter()
        .map(|f| {
            let r = roles(f.axiom);
            json!({
                "axiom": f.axiom.name(),
                "instance": instance_json(&f.instance, r),
                "residual": r.residual.format_vector(&f.residual),
            })
        })
        .collect();
    let skipped: Vec<Value> = report
        .skipped
        .iter()
        .map(|s| {
            json!({
                "axiom": s.axiom.name(),
                "instance": instance_json(&s.instance, roles(s.axiom)),
                "reason": "truncation-breach",
                "weight": s.breach.weight,
                "cutoff": s.breach.cutoff,
            })
        })
        .collect();
    json!({
        "verdict": report.verdict().as_str(),
        "passed": report.passed.len(),
        "failed": failed,
        "skipped": skipped,
    })
}

pub fn axiom_report_text<'a, R: Coeff>(
    report: &AxiomReport<R>,
    roles: impl Fn(Axiom) -> Roles<'a>,
) -> String {
    let mut out = format!(
        "verdict: {}\nchecks: {} passed, {} failed, {} skipped\n",
        report.verdict().as_str(),
        report.passed.len(),
        report.failed.len(),
        report.skipped.len()
    );
    for f in &report.failed {
        let r = roles(f.axiom);
        out.push_str(&format!(
            "FAIL {} residual {}\n",
            instance_text(f.axiom, &f.instance, r),
            r.residual.format_vector(&f.residual)
        ));
    }
    out
}

pub fn cochain_json(psi: &TwoCochain) -> Value {
    Value::Array(
        psi.entries()
            .iter()
            .map(|(&(a, n, b), v)| {
                json!({
                    "u": psi.left().label(a),
                    "n": n,
                    "v": psi.right().label(b),
                    "value": psi.target().format_vector(v),
                })
            })
            .collect(),
    )
}

pub fn cochain_text(psi: &TwoCochain) -> String {
    if psi.is_zero() {
        return "0".to_string();
    }
    psi.entries()
        .iter()
        .map(|(&(a, n, b), v)| {
            format!(
                "{}_({}) {} = {}",
                psi.left().label(a),
                n,
                psi.right().label(b),
                psi.target().format_vector(v)
            )
        })
        .collect::<Vec<_>>()
        .join("; ")
}

pub fn map_json(g: &GradedMap<Scalar>) -> Value {
    let mut m = Map::new();
    for i in 0..g.source().dim() {
        m.insert(
            g.source().label(i).to_string(),
            Value::String(g.target().format_vector(g.image(i))),
        );
    }
    Value::Object(m)
}

pub fn map_text(g: &GradedMap<Scalar>) -> String {
    (0..g.source().dim())
        .map(|i| format!("{} -> {}", g.source().label(i), g.target().format_vector(g.image(i))))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn cohomology_json<T>(r: &CohomologyResult<T>, item: impl Fn(&T) -> Value) -> Value {
    json!({
        "h_dim": r.h_dim,
        "cocycle_dim": r.cocycle_basis.len(),
        "coboundary_dim": r.coboundary_basis.len(),
        "cocycle_basis": r.cocycle_basis.iter().map(&item).collect::<Vec<_>>(),
        "coboundary_basis": r.coboundary_basis.iter().map(&item).collect::<Vec<_>>(),
        "representatives": r.representatives.iter().map(&item).collect::<Vec<_>>(),
        "window": r.window.map(|w| json!({
            "label": w.describe(),
            "min_weight": w.min_weight,
            "cutoff": w.cutoff,
        })),
        "skipped": r.skipped,
    })
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::check_all;
    use crate::presets::{dual_numbers_algebra, truncated_free_boson};

    #[test]
    fn report_keys_are_sorted_and_stable() {
        let v = dual_numbers_algebra();
        let r = check_all(&v);
        let a = axiom_report_json(&r, |_| Roles::uniform(v.space()));
        let text = serde_json::to_string(&a).unwrap();
        assert!(text.starts_with("{\"failed\":[],\"passed\":"));
        assert_eq!(text, serde_json::to_string(&axiom_report_json(&check_all(&v), |_| Roles::uniform(v.space()))).unwrap());
    }

    #[test]
    fn skips_carry_breach_weight() {
        let v = truncated_free_boson(2);
        let r = check_all(&v);
        let j = axiom_report_json(&r, |_| Roles::uniform(v.space()));
        let skipped = j["skipped"].as_array().unwrap();
        assert!(!skipped.is_empty());
        assert!(skipped.iter().all(|s| s["weight"].as_i64().unwrap() > 2));
    }

    #[test]
    fn digest_is_hex_sha256() {
        assert_eq!(
            sha256_hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
