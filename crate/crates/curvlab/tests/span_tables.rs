//! Column-span checks for the operator matrices of the higher-order metric
//! families. The coupling pattern of each family confines every operator
//! column to a fixed span, and that filtration is exactly what forces the
//! stated nilpotency orders. Coefficients are only generically nonzero, so
//! the checks are span containments, not coefficient values; observed
//! minimal row sets are printed for the record.

use std::collections::BTreeSet;

use curvlab::*;

/// Rows with a nonzero entry in column `col`.
fn column_support(op: &OperatorMatrix, col: usize) -> BTreeSet<usize> {
    (0..op.dim())
        .filter(|&row| !op.entry(row, col).is_zero())
        .collect()
}

fn assert_contained(
    op: &OperatorMatrix,
    coords: &[&str],
    col_name: &str,
    allowed: &[&str],
) {
    let col = coords.iter().position(|c| c == &col_name).unwrap();
    let allowed_rows: BTreeSet<usize> = allowed
        .iter()
        .map(|a| coords.iter().position(|c| c == a).unwrap())
        .collect();
    let support = column_support(op, col);
    assert!(
        support.is_subset(&allowed_rows),
        "column {col_name}: support {:?} not within allowed {:?}",
        support.iter().map(|&r| coords[r]).collect::<Vec<_>>(),
        allowed
    );
    let observed: Vec<&str> = support.iter().map(|&r| coords[r]).collect();
    println!("{} column {col_name}: observed span {{{}}}", op.kind().name(), observed.join(","));
}

#[test]
fn szabo_columns_for_order_five() {
    // n = 2l+1 with l = 2: coordinates (x, t, u2, u3, v2, v3, y).
    let metric = family_metric(FamilyKind::Szabo, 5).unwrap();
    let curv = Curvature::compute(&metric);
    let op = szabo_operator(&curv);
    let coords = ["x", "t", "u2", "u3", "v2", "v3", "y"];
    assert_contained(&op, &coords, "x", &["y", "t", "u2", "v2", "v3"]);
    assert_contained(&op, &coords, "y", &[]);
    assert_contained(&op, &coords, "t", &["y", "v2"]);
    assert_contained(&op, &coords, "u2", &["t", "y", "v2", "v3"]);
    // Last middle column: the liberal reading keeps the y row available.
    assert_contained(&op, &coords, "u3", &["u2", "y", "v2", "v3"]);
    assert_contained(&op, &coords, "v2", &["y", "v3"]);
    assert_contained(&op, &coords, "v3", &[]);
}

#[test]
fn szabo_columns_for_order_six() {
    // n = 2l+2 with l = 2: coordinates (x, u1, u2, u3, v1, v2, v3, y).
    let metric = family_metric(FamilyKind::Szabo, 6).unwrap();
    let curv = Curvature::compute(&metric);
    let op = szabo_operator(&curv);
    let coords = ["x", "u1", "u2", "u3", "v1", "v2", "v3", "y"];
    assert_contained(
        &op,
        &coords,
        "x",
        &["u1", "u2", "y", "v1", "v2", "v3"],
    );
    assert_contained(&op, &coords, "u1", &["y", "v1", "v2"]);
    assert_contained(&op, &coords, "u2", &["u1", "y", "v1", "v2", "v3"]);
    assert_contained(&op, &coords, "u3", &["u2", "y", "v2", "v3"]);
    assert_contained(&op, &coords, "y", &[]);
    assert_contained(&op, &coords, "v1", &["y", "v2"]);
    assert_contained(&op, &coords, "v2", &["y", "v3"]);
    assert_contained(&op, &coords, "v3", &[]);
}

#[test]
fn jacobi_columns_for_order_five() {
    let metric = family_metric(FamilyKind::Osserman, 5).unwrap();
    let curv = Curvature::compute(&metric);
    let op = jacobi_operator(&curv);
    let coords = ["x", "t", "u2", "u3", "v2", "v3", "y"];
    assert_contained(&op, &coords, "x", &["y", "t", "u2", "v2", "v3"]);
    assert_contained(&op, &coords, "y", &[]);
    assert_contained(&op, &coords, "t", &["y", "v2"]);
    assert_contained(&op, &coords, "u2", &["t", "y", "v2", "v3"]);
    assert_contained(&op, &coords, "u3", &["u2", "y", "v2", "v3"]);
    assert_contained(&op, &coords, "v2", &["y", "v3"]);
    assert_contained(&op, &coords, "v3", &[]);
}

#[test]
fn skew_curvature_columns_for_quadratic_families() {
    // Order 3: columns of R(pi) for the five-dimensional quadratic metric.
    let metric = family_metric(FamilyKind::Osserman, 3).unwrap();
    let curv = Curvature::compute(&metric);
    let op = skew_curvature_operator(&curv);
    let coords = ["x", "t", "u", "v", "y"];
    assert_contained(&op, &coords, "x", &["v", "t"]);
    assert_contained(&op, &coords, "t", &["y"]);
    assert_contained(&op, &coords, "u", &["y"]);
    assert_contained(&op, &coords, "v", &[]);
    assert_contained(&op, &coords, "y", &[]);

    // Order 6 (even case, l = 2).
    let metric = family_metric(FamilyKind::Osserman, 6).unwrap();
    let curv = Curvature::compute(&metric);
    let op = skew_curvature_operator(&curv);
    let coords = ["x", "u1", "u2", "u3", "v1", "v2", "v3", "y"];
    assert_contained(
        &op,
        &coords,
        "x",
        &["u1", "u2", "u3", "v1", "v2", "v3"],
    );
    for u in ["u1", "u2", "u3", "v1", "v2", "v3"] {
        assert_contained(&op, &coords, u, &["y"]);
    }
    assert_contained(&op, &coords, "y", &[]);
}
