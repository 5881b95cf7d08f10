//! The `suite` command: one row per claim, deterministic order, exit zero
//! only when every row passes.

use curvlab::*;
use serde::{Deserialize, Serialize};

use crate::claims::{claim_for_family, OrderClaim};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RowResult {
    pub id: String,
    pub description: String,
    pub passed: bool,
    pub detail: String,
}

fn row(id: String, description: String, passed: bool, detail: String) -> RowResult {
    RowResult {
        id,
        description,
        passed,
        detail,
    }
}

fn build_operator(curv: &Curvature, kind: OperatorKind) -> OperatorMatrix {
    match kind {
        OperatorKind::Szabo => szabo_operator(curv),
        OperatorKind::Jacobi => jacobi_operator(curv),
        OperatorKind::SkewCurvature => skew_curvature_operator(curv),
        OperatorKind::HigherJacobi => higher_order_jacobi(curv, &[Sign::Plus, Sign::Minus]),
        OperatorKind::Ricci => ricci_operator(curv),
    }
}

/// A family/operator order check. Public with an explicit expected order so
/// tests can exercise the negative path with a tampered expectation.
pub fn order_row(
    id: &str,
    family: FamilyKind,
    n: usize,
    operator: OperatorKind,
    expected_order: usize,
    seed: u64,
) -> RowResult {
    let description = format!(
        "{} operator of {} family at n={} has order {} and signature {:?}",
        operator.name(),
        family.name(),
        n,
        expected_order,
        crate::claims::family_signature(n)
    );
    let metric = match family_metric(family, n) {
        Ok(m) => m,
        Err(e) => return row(id.into(), description, false, format!("metric: {e}")),
    };
    let signature_ok = metric.signature() == crate::claims::family_signature(n);
    let curv = Curvature::compute(&metric);
    let op = build_operator(&curv, operator);
    match nilpotency_order(&op, None, seed) {
        Ok(NilpotencyVerdict::Nilpotent(report)) => {
            let passed = signature_ok && report.order == expected_order;
            row(
                id.into(),
                description,
                passed,
                format!(
                    "order={} signature={:?} witness={}",
                    report.order,
                    metric.signature(),
                    report.witness.is_some()
                ),
            )
        }
        Ok(NilpotencyVerdict::NotNilpotent { first_nonzero_trace_power, .. }) => row(
            id.into(),
            description,
            false,
            format!("not nilpotent (trace power {first_nonzero_trace_power})"),
        ),
        Err(e) => row(id.into(), description, false, e.to_string()),
    }
}

fn closed_form_oracle_row(seed: u64) -> RowResult {
    let description =
        "general pipeline equals the closed forms for random g_f instances".to_string();
    let mut rng = SplitMix64::new(seed ^ 0x1E44A21);
    let mut checked = 0;
    for trial in 0..5 {
        let nu = 1 + (trial % 3);
        let names: Vec<String> = (1..=nu).map(|i| format!("u{i}")).collect();
        let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let mids = VarTable::coordinates(&name_refs).unwrap();
        // Random f of degree <= 4 with a guaranteed degree >= 2 monomial.
        let mut f = Polynomial::zero(&mids);
        for k in 0..4 {
            let mut piece = Polynomial::constant(&mids, rat_int(rng.int_in(-3, 3)));
            let mut degree = 0;
            for i in 0..nu {
                let e = rng.int_in(0, 2) as u32;
                degree += e;
                piece = piece.mul_ref(&Polynomial::var(&mids, i).pow(e));
            }
            if k == 0 && degree < 2 {
                piece = piece.mul_ref(&Polynomial::var(&mids, 0).pow(2));
            }
            f = f.add_ref(&piece);
        }
        // Hyperbolic-style Xi blocks stay unimodular.
        let mut xi = vec![vec![rat_int(0); nu]; nu];
        for i in 0..nu {
            xi[i][i] = rat_int(if rng.int_in(0, 1) == 0 { 1 } else { -1 });
        }
        if nu >= 2 {
            let off = rat_int(rng.int_in(-2, 2));
            xi[0][1] = &xi[0][1] + &off;
            xi[1][0] = xi[0][1].clone();
            let empty = VarTable::empty();
            let m = PolyMatrix::from_fn(&empty, nu, |a, b| {
                Polynomial::constant(&empty, xi[a][b].clone())
            });
            if m.determinant()
                .as_constant()
                .unwrap()
                == rat_int(0)
            {
                xi[0][1] = rat_int(0);
                xi[1][0] = rat_int(0);
            }
        }
        let metric = match gf_metric(&f, &xi) {
            Ok(m) => m,
            Err(e) => return row("gf-closed-forms".into(), description, false, e.to_string()),
        };
        let curv = Curvature::compute(&metric);
        let dim = metric.dim();
        let table = metric.table();
        let half = rat(-1, 2);
        let mut expected_r = TensorField::zero(table, dim, &[Variance::Covariant; 4]);
        let mut expected_nr = TensorField::zero(table, dim, &[Variance::Covariant; 5]);
        let ffull = metric.matrix().get(0, 0);
        for a in 1..dim - 1 {
            for b in 1..dim - 1 {
                let v = ffull.diff_index(a).diff_index(b).scale(&half);
                if !v.is_zero() {
                    expected_r.set(&[0, a, b, 0], v.clone());
                    expected_r.set(&[a, 0, b, 0], v.neg_ref());
                    expected_r.set(&[0, a, 0, b], v.neg_ref());
                    expected_r.set(&[a, 0, 0, b], v.clone());
                }
                for c in 1..dim - 1 {
                    let w = ffull.diff_index(a).diff_index(b).diff_index(c).scale(&half);
                    if !w.is_zero() {
                        expected_nr.set(&[0, a, b, 0, c], w.clone());
                        expected_nr.set(&[a, 0, b, 0, c], w.neg_ref());
                        expected_nr.set(&[0, a, 0, b, c], w.neg_ref());
                        expected_nr.set(&[a, 0, 0, b, c], w.clone());
                    }
                }
            }
        }
        if curv.riemann.components() != expected_r.components()
            || curv.nabla_riemann.components() != expected_nr.components()
        {
            return row(
                "gf-closed-forms".into(),
                description,
                false,
                format!("mismatch on trial {trial}"),
            );
        }
        checked += 1;
    }
    row(
        "gf-closed-forms".into(),
        description,
        true,
        format!("{checked} random instances match exactly"),
    )
}

fn ricci_row(kind: FamilyKind, n: usize, seed: u64) -> RowResult {
    let id = format!("ricci-{}-{n}", kind.name());
    let description = format!(
        "Ricci operator of {} n={} squares to zero and trace J = rho(xi,xi)",
        kind.name(),
        n
    );
    let metric = family_metric(kind, n).unwrap();
    let curv = Curvature::compute(&metric);
    let rho_hat = ricci_operator(&curv);
    let squared_zero = rho_hat.matrix().mul(rho_hat.matrix()).is_zero();
    let jacobi = jacobi_operator(&curv);
    let trace_ok = jacobi_trace_defect(&curv, &jacobi).is_zero();
    let _ = seed;
    row(
        id,
        description,
        squared_zero && trace_ok,
        format!("rho-hat^2=0: {squared_zero}, trace identity: {trace_ok}"),
    )
}

fn pointwise_row(kind: FamilyKind, n: usize, seed: u64) -> RowResult {
    let id = format!("pointwise-{}-{n}", kind.name().trim_start_matches("pointwise-"));
    let description = format!(
        "{} n={} has order 1 at the origin and {} at the all-ones point",
        kind.name(),
        n,
        n
    );
    let metric = family_metric(kind, n).unwrap();
    let curv = Curvature::compute(&metric);
    let op = match kind {
        FamilyKind::PointwiseSzabo => szabo_operator(&curv),
        _ => jacobi_operator(&curv),
    };
    let coords: Vec<String> = metric.table().names().map(str::to_string).collect();
    let origin: Vec<(&str, Rational)> = coords.iter().map(|c| (c.as_str(), rat_int(0))).collect();
    let ones: Vec<(&str, Rational)> = coords.iter().map(|c| (c.as_str(), rat_int(1))).collect();
    let order_origin = nilpotency_order(&op, Some(&origin), seed)
        .ok()
        .and_then(|v| v.report().map(|r| r.order));
    let order_ones = nilpotency_order(&op, Some(&ones), seed)
        .ok()
        .and_then(|v| v.report().map(|r| r.order));
    let passed = order_origin == Some(1) && order_ones == Some(n);
    row(
        id,
        description,
        passed,
        format!("origin: {order_origin:?}, all-ones: {order_ones:?}"),
    )
}

fn higher_jacobi_row(n: usize, seed: u64) -> RowResult {
    use Sign::{Minus, Plus};
    let id = format!("higher-jacobi-{n}");
    let description = format!(
        "signed Jacobi sums of up to 3 terms for the quadratic family n={n} satisfy the order-{n} identity"
    );
    let metric = family_metric(FamilyKind::Osserman, n).unwrap();
    let curv = Curvature::compute(&metric);
    let combos: [&[Sign]; 6] = [
        &[Plus],
        &[Plus, Plus],
        &[Plus, Minus],
        &[Plus, Plus, Plus],
        &[Plus, Plus, Minus],
        &[Plus, Minus, Minus],
    ];
    let mut downgraded = false;
    for combo in combos {
        let op = higher_order_jacobi(&curv, combo);
        let mut acc = op.matrix().clone();
        for _ in 1..n {
            acc = acc.mul(op.matrix());
        }
        if !acc.is_zero() {
            downgraded = true;
            if !sampled_subspace_jacobi_vanishes(&curv, combo.len(), n, 12, seed ^ 0x4A) {
                return row(
                    id,
                    description,
                    false,
                    format!("formal identity and sampled verification both failed for {combo:?}"),
                );
            }
        }
    }
    let detail = if downgraded {
        "DOWNGRADED: formal identity failed somewhere; sampled subspace verification passed".into()
    } else {
        "formal identity holds for all sign patterns".into()
    };
    row(id, description, true, detail)
}

fn span_rows(seed: u64) -> Vec<RowResult> {
    let mut rows = Vec::new();
    for m in 2..=4 {
        let check = curvature_span_check(m, 40, seed);
        rows.push(row(
            format!("span-curvature-m{m}"),
            format!("random R_L tensors span the curvature constraint space at m={m}"),
            check.passed(),
            format!(
                "observed={} expected={} samples={} seed={}{}",
                check.observed,
                check.expected,
                check.samples,
                check.seed,
                if check.insufficient() { " (insufficient)" } else { "" }
            ),
        ));
    }
    for m in 2..=3 {
        let check = nabla_span_check(m, 60, seed);
        rows.push(row(
            format!("span-nabla-m{m}"),
            format!("random nabla R_LS tensors span their constraint space at m={m}"),
            check.passed(),
            format!(
                "observed={} expected={} samples={} seed={}{}",
                check.observed,
                check.expected,
                check.samples,
                check.seed,
                if check.insufficient() { " (insufficient)" } else { "" }
            ),
        ));
    }
    rows
}

fn invariant_row(kind: FamilyKind, n: usize) -> RowResult {
    let id = format!("invariants-{}-{n}", kind.name());
    let description = format!(
        "exact invariant battery for {} n={} (compatibility, symmetries, Bianchi, adjointness, annihilation, homogeneity, traces)",
        kind.name(),
        n
    );
    let metric = family_metric(kind, n).unwrap();
    let curv = Curvature::compute(&metric);
    let mut fails: Vec<&str> = Vec::new();
    if !metric_compatibility_defect(&metric).is_zero() {
        fails.push("metric-compatibility");
    }
    if !curv.riemann.symmetries_hold() {
        fails.push("riemann-symmetries");
    }
    if !second_bianchi_defect(&curv.nabla_riemann).is_zero() {
        fails.push("second-bianchi");
    }
    let szabo = szabo_operator(&curv);
    let jacobi = jacobi_operator(&curv);
    let skew = skew_curvature_operator(&curv);
    if !self_adjointness_defect(&szabo).is_zero() || !self_adjointness_defect(&jacobi).is_zero() {
        fails.push("self-adjointness");
    }
    if !skew_adjointness_defect(&skew).is_zero() {
        fails.push("skew-adjointness");
    }
    if !apply_to_own_direction(&szabo).unwrap().iter().all(Polynomial::is_zero)
        || !apply_to_own_direction(&jacobi).unwrap().iter().all(Polynomial::is_zero)
    {
        fails.push("annihilation");
    }
    if !direction_scaling_is_homogeneous(&szabo, 3) || !direction_scaling_is_homogeneous(&jacobi, 2)
    {
        fails.push("homogeneity");
    }
    for op in [&szabo, &jacobi, &skew] {
        if !characteristic_checks(op).all_power_traces_zero {
            fails.push("power-traces");
            break;
        }
    }
    let passed = fails.is_empty();
    row(
        id,
        description,
        passed,
        if passed {
            "all identities exact".into()
        } else {
            format!("failed: {}", fails.join(","))
        },
    )
}

fn non_jordan_row() -> RowResult {
    let description =
        "g_2 Szabo operator rank varies with direction (0 along e_0, 1 along e_1)".to_string();
    let metric = family_metric(FamilyKind::Szabo, 2).unwrap();
    let curv = Curvature::compute(&metric);
    let op = szabo_operator(&curv);
    let rank = |xi: [i64; 4]| {
        let mut bindings: Vec<(&str, Rational)> = ["x", "u", "v", "y"]
            .iter()
            .map(|c| (*c, rat_int(0)))
            .collect();
        for (i, v) in xi.into_iter().enumerate() {
            bindings.push((["xi0", "xi1", "xi2", "xi3"][i], rat_int(v)));
        }
        rank_at_point(&op, &bindings).unwrap()
    };
    let r0 = rank([1, 0, 0, 0]);
    let r1 = rank([0, 1, 0, 0]);
    row(
        "non-jordan-rank".into(),
        description,
        r0 == 0 && r1 == 1,
        format!("rank(e_0)={r0}, rank(e_1)={r1}"),
    )
}

fn flat_product_row(seed: u64) -> RowResult {
    let description =
        "g_2 + flat(1,1) has signature (3,3) and unchanged Szabo order 2".to_string();
    let metric = family_metric(FamilyKind::Szabo, 2).unwrap();
    let summed = direct_sum_flat(&metric, 1, 1);
    let curv = Curvature::compute(&summed);
    let op = szabo_operator(&curv);
    let order = nilpotency_order(&op, None, seed)
        .ok()
        .and_then(|v| v.report().map(|r| r.order));
    row(
        "flat-product".into(),
        description,
        summed.signature() == (3, 3) && order == Some(2),
        format!("signature={:?} order={order:?}", summed.signature()),
    )
}

/// Run the whole battery up to `n_max`.
pub fn run_suite(n_max: usize, seed: u64) -> Vec<RowResult> {
    let mut rows = Vec::new();
    for n in 2..=n_max {
        let claim = claim_for_family(FamilyKind::Szabo, n, OperatorKind::Szabo, None);
        let OrderClaim::Exactly(expected) = claim.order else {
            unreachable!()
        };
        rows.push(order_row(
            &format!("szabo-order-{n}"),
            FamilyKind::Szabo,
            n,
            OperatorKind::Szabo,
            expected,
            seed,
        ));
    }
    for n in 2..=n_max {
        rows.push(order_row(
            &format!("osserman-order-{n}"),
            FamilyKind::Osserman,
            n,
            OperatorKind::Jacobi,
            n,
            seed,
        ));
    }
    for n in 2..=n_max.min(6) {
        let expected = if n == 2 { 2 } else { 3 };
        rows.push(order_row(
            &format!("skew-order-{n}"),
            FamilyKind::Osserman,
            n,
            OperatorKind::SkewCurvature,
            expected,
            seed,
        ));
    }
    rows.push(closed_form_oracle_row(seed));
    for n in 2..=n_max.min(6) {
        rows.push(ricci_row(FamilyKind::Szabo, n, seed));
        rows.push(ricci_row(FamilyKind::Osserman, n, seed));
    }
    for n in 2..=n_max.min(3) {
        rows.push(pointwise_row(FamilyKind::PointwiseSzabo, n, seed));
        rows.push(pointwise_row(FamilyKind::PointwiseOsserman, n, seed));
    }
    for n in 2..=n_max.min(5) {
        rows.push(higher_jacobi_row(n, seed));
    }
    rows.extend(span_rows(seed));
    for n in 2..=n_max.min(6) {
        rows.push(invariant_row(FamilyKind::Szabo, n));
        rows.push(invariant_row(FamilyKind::Osserman, n));
    }
    rows.push(non_jordan_row());
    rows.push(flat_product_row(seed));
    rows
}
