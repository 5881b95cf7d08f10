//! Report document: one structured record per run, rendered as stable JSON
//! or as text. Field order and map ordering are deterministic; equal
//! requests with equal seeds serialize identically except for `timing`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use curvlab::{
    apply_to_own_direction, characteristic_checks, direction_scaling_is_homogeneous,
    jacobi_trace_defect, metric_compatibility_defect, nilpotency_order, second_bianchi_defect,
    self_adjointness_defect, skew_adjointness_defect, Curvature, NilpotencyVerdict,
    OperatorError, OperatorKind, OperatorMatrix, Polynomial, Rational,
};

use crate::claims::Claim;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RequestEcho {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    pub operator: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<BTreeMap<String, String>>,
    pub format: String,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignatureJson {
    pub minus: usize,
    pub plus: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricSummary {
    pub dim: usize,
    pub coords: Vec<String>,
    pub signature: SignatureJson,
    pub determinant: String,
    pub nonzero_entries: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorSummary {
    pub kind: String,
    pub direction_vectors: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankSampleJson {
    pub directions: BTreeMap<String, String>,
    pub rank: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateJson {
    pub first_nonzero_trace_power: usize,
    pub trace: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NilpotencyJson {
    pub nilpotent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generically_nonzero_power: Option<usize>,
    pub witness_found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<BTreeMap<String, String>>,
    pub rank_profile: Vec<RankSampleJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub not_nilpotent_certificate: Option<CertificateJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumJson {
    pub all_power_traces_zero: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_nonzero_power: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InvariantResult {
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClaimJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_signature: Option<[usize; 2]>,
    pub expected_order: String,
    pub matched: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Timing {
    pub total_ms: u128,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub request: RequestEcho,
    pub metric: MetricSummary,
    pub operator: OperatorSummary,
    pub nilpotency: NilpotencyJson,
    pub spectrum: SpectrumJson,
    pub invariants: Vec<InvariantResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claim: Option<ClaimJson>,
    pub timing: Timing,
}

pub fn metric_summary(curv: &Curvature) -> MetricSummary {
    let metric = curv.metric();
    let (minus, plus) = metric.signature();
    let mut nonzero_entries = BTreeMap::new();
    for i in 0..metric.dim() {
        for j in i..metric.dim() {
            let e = metric.matrix().get(i, j);
            if !e.is_zero() {
                nonzero_entries.insert(format!("g[{i}][{j}]"), e.render());
            }
        }
    }
    MetricSummary {
        dim: metric.dim(),
        coords: metric.coords().iter().map(|s| s.to_string()).collect(),
        signature: SignatureJson { minus, plus },
        determinant: metric.determinant().to_string(),
        nonzero_entries,
    }
}

pub fn operator_summary(op: &OperatorMatrix) -> OperatorSummary {
    OperatorSummary {
        kind: op.kind().name().to_string(),
        direction_vectors: op
            .directions()
            .iter()
            .map(|d| d.names().to_vec())
            .collect(),
    }
}

fn rational_map(map: &BTreeMap<String, Rational>) -> BTreeMap<String, String> {
    map.iter().map(|(k, v)| (k.clone(), v.to_string())).collect()
}

/// Run the nilpotency decision and spectrum check, and package them.
pub fn analyze_operator(
    op: &OperatorMatrix,
    point: Option<&[(&str, Rational)]>,
    seed: u64,
) -> Result<(NilpotencyJson, SpectrumJson, Option<usize>), OperatorError> {
    let verdict = nilpotency_order(op, point, seed)?;
    let spectrum = characteristic_checks(op);
    let spectrum_json = SpectrumJson {
        all_power_traces_zero: spectrum.all_power_traces_zero,
        first_nonzero_power: spectrum.first_nonzero_power,
    };
    let (nilpotency, order) = match verdict {
        NilpotencyVerdict::Nilpotent(report) => {
            let order = report.order;
            (
                NilpotencyJson {
                    nilpotent: true,
                    order: Some(report.order),
                    generically_nonzero_power: Some(report.generically_nonzero_power),
                    witness_found: report.witness.is_some(),
                    witness: report.witness.as_ref().map(rational_map),
                    rank_profile: report
                        .rank_profile
                        .iter()
                        .map(|s| RankSampleJson {
                            directions: rational_map(&s.directions),
                            rank: s.rank,
                        })
                        .collect(),
                    not_nilpotent_certificate: None,
                },
                Some(order),
            )
        }
        NilpotencyVerdict::NotNilpotent {
            first_nonzero_trace_power,
            trace,
        } => (
            NilpotencyJson {
                nilpotent: false,
                order: None,
                generically_nonzero_power: None,
                witness_found: false,
                witness: None,
                rank_profile: Vec::new(),
                not_nilpotent_certificate: Some(CertificateJson {
                    first_nonzero_trace_power,
                    trace: trace.render(),
                }),
            },
            None,
        ),
    };
    Ok((nilpotency, spectrum_json, order))
}

/// The per-run invariant battery; all of these are exact identities that
/// must hold for every admissible metric, so a failure is an internal
/// inconsistency.
pub fn invariant_battery(curv: &Curvature, op: &OperatorMatrix) -> Vec<InvariantResult> {
    let metric = curv.metric();
    let mut results = Vec::new();
    let mut push = |name: &str, passed: bool| {
        results.push(InvariantResult {
            name: name.to_string(),
            passed,
        });
    };
    push(
        "metric-compatibility",
        metric_compatibility_defect(metric).is_zero(),
    );
    push("riemann-symmetries", curv.riemann.symmetries_hold());
    push(
        "second-bianchi",
        second_bianchi_defect(&curv.nabla_riemann).is_zero(),
    );
    match op.kind() {
        OperatorKind::SkewCurvature => {
            push("skew-adjointness", skew_adjointness_defect(op).is_zero())
        }
        _ => push("self-adjointness", self_adjointness_defect(op).is_zero()),
    }
    if let Some(applied) = apply_to_own_direction(op) {
        if matches!(op.kind(), OperatorKind::Szabo | OperatorKind::Jacobi) {
            push(
                "annihilates-own-direction",
                applied.iter().all(Polynomial::is_zero),
            );
        }
    }
    let degree = op.kind().direction_degree();
    if degree > 0 {
        push(
            "direction-homogeneity",
            direction_scaling_is_homogeneous(op, degree),
        );
    }
    if matches!(op.kind(), OperatorKind::Jacobi) {
        push("jacobi-trace-is-ricci", jacobi_trace_defect(curv, op).is_zero());
    }
    results
}

/// Spectrum/nilpotency agreement: nilpotent exactly when every power trace
/// vanishes.
pub fn spectrum_consistent(nilpotency: &NilpotencyJson, spectrum: &SpectrumJson) -> bool {
    nilpotency.nilpotent == spectrum.all_power_traces_zero
}

pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let r = &report.request;
    out.push_str(&format!("request: {}", r.command));
    if let Some(f) = &r.family {
        out.push_str(&format!(" family={f}"));
    }
    if let Some(n) = r.n {
        out.push_str(&format!(" n={n}"));
    }
    if let Some(file) = &r.metric_file {
        out.push_str(&format!(" file={file}"));
    }
    out.push_str(&format!(" operator={} seed={}\n", r.operator, r.seed));
    if let Some(point) = &r.point {
        let parts: Vec<String> = point.iter().map(|(k, v)| format!("{k}={v}")).collect();
        out.push_str(&format!("point: {}\n", parts.join(",")));
    }
    let m = &report.metric;
    out.push_str(&format!(
        "metric: dim={} coords={} signature=({},{}) det={}\n",
        m.dim,
        m.coords.join(","),
        m.signature.minus,
        m.signature.plus,
        m.determinant
    ));
    for (k, v) in &m.nonzero_entries {
        out.push_str(&format!("  {k} = {v}\n"));
    }
    out.push_str(&format!("operator: {}", report.operator.kind));
    if !report.operator.direction_vectors.is_empty() {
        let vs: Vec<String> = report
            .operator
            .direction_vectors
            .iter()
            .map(|v| format!("({})", v.join(",")))
            .collect();
        out.push_str(&format!(" directions={}", vs.join(" ")));
    }
    out.push('\n');
    let nil = &report.nilpotency;
    if nil.nilpotent {
        out.push_str(&format!(
            "nilpotency: nilpotent order={} generically-nonzero-power={}\n",
            nil.order.unwrap(),
            nil.generically_nonzero_power.unwrap()
        ));
        match &nil.witness {
            Some(w) => {
                let parts: Vec<String> = w.iter().map(|(k, v)| format!("{k}={v}")).collect();
                out.push_str(&format!("witness: {}\n", parts.join(",")));
            }
            None => out.push_str("witness: not-found-within-budget\n"),
        }
        for s in &nil.rank_profile {
            let parts: Vec<String> = s.directions.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out.push_str(&format!("rank: {} at {}\n", s.rank, parts.join(",")));
        }
    } else {
        let cert = nil.not_nilpotent_certificate.as_ref().unwrap();
        out.push_str(&format!(
            "nilpotency: NOT nilpotent; trace(A^{}) = {}\n",
            cert.first_nonzero_trace_power, cert.trace
        ));
    }
    out.push_str(&format!(
        "spectrum: all-power-traces-zero={}\n",
        report.spectrum.all_power_traces_zero
    ));
    for inv in &report.invariants {
        out.push_str(&format!(
            "invariant: {} {}\n",
            inv.name,
            if inv.passed { "PASS" } else { "FAIL" }
        ));
    }
    if let Some(claim) = &report.claim {
        let sig = claim
            .expected_signature
            .map(|s| format!(" signature=({},{})", s[0], s[1]))
            .unwrap_or_default();
        out.push_str(&format!(
            "claim: order {}{} -> {}\n",
            claim.expected_order,
            sig,
            if claim.matched { "MATCHED" } else { "VIOLATED" }
        ));
    }
    out.push_str(&format!("timing: {} ms\n", report.timing.total_ms));
    out
}

pub fn claim_json(claim: &Claim, matched: bool) -> ClaimJson {
    ClaimJson {
        expected_signature: claim.signature.map(|(p, q)| [p, q]),
        expected_order: claim.order.describe(),
        matched,
    }
}
