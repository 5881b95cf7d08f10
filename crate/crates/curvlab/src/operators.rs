//! Curvature operators with formal direction variables, and exact nilpotency
//! decisions.
//!
//! Each operator is a square matrix of polynomials in the coordinates and in
//! the components of one or more formal direction vectors. Lowered entries
//! come from contracting the curvature tensors with the direction variables;
//! the last slot is raised with the exact inverse metric:
//!
//! ```text
//! szabo:   g(S(xi) e_j, e_k) = sum_{a,b,c} xi_a xi_b xi_c R_{j a b k; c}
//! jacobi:  g(J(xi) e_j, e_k) = sum_{a,b}   xi_a xi_b R_{j a b k}
//! skew:    g(R(pi) e_j, e_k) = sum_{a,b}   xi_a eta_b R_{a b j k}
//! ricci:   rho-hat = g^{-1} rho
//! ```
//!
//! Nilpotency of a polynomial matrix is decided exactly: the minimal `n` with
//! the n-th power identically zero, a nonzero (n-1)-st power standing for
//! "nonzero for generic directions".

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::curvature::Curvature;
use crate::matrix::{rational_rank, PolyMatrix};
use crate::metric::MetricSpec;
use crate::poly::{Binding, Polynomial};
use crate::rational::Rational;
use crate::rng::SplitMix64;
use crate::vars::{VarRole, VarTable};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OperatorError {
    #[error("bindings do not cover variable `{0}`")]
    MissingBinding(String),
    #[error("binding refers to unknown variable `{0}`")]
    UnknownBinding(String),
    #[error("point must bind coordinates only, `{0}` is not a coordinate")]
    NotACoordinate(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Szabo,
    Jacobi,
    SkewCurvature,
    HigherJacobi,
    Ricci,
}

impl OperatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            OperatorKind::Szabo => "szabo",
            OperatorKind::Jacobi => "jacobi",
            OperatorKind::SkewCurvature => "skew",
            OperatorKind::HigherJacobi => "higher-jacobi",
            OperatorKind::Ricci => "ricci",
        }
    }

    /// Homogeneity degree in the direction variables.
    pub fn direction_degree(&self) -> u32 {
        match self {
            OperatorKind::Szabo => 3,
            OperatorKind::Jacobi | OperatorKind::SkewCurvature | OperatorKind::HigherJacobi => 2,
            OperatorKind::Ricci => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// One formal direction vector: `dim` fresh variables against the coordinate
/// frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionVector {
    names: Vec<String>,
}

impl DirectionVector {
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Component polynomials over a table containing the names.
    pub fn components(&self, table: &VarTable) -> Vec<Polynomial> {
        self.names
            .iter()
            .map(|n| Polynomial::var_named(table, n).expect("direction variable in table"))
            .collect()
    }
}

/// Pick a prefix that generates `dim` names free in `table`.
fn fresh_direction(table: &VarTable, preferred: &str, dim: usize) -> (VarTable, DirectionVector) {
    let mut prefix = preferred.to_string();
    loop {
        let names: Vec<String> = (0..dim).map(|i| format!("{prefix}{i}")).collect();
        if names.iter().all(|n| table.position(n).is_none()) {
            let extra: Vec<(String, VarRole)> = names
                .iter()
                .map(|n| (n.clone(), VarRole::Direction))
                .collect();
            let extended = table.extended(&extra).expect("fresh names cannot collide");
            return (extended, DirectionVector { names });
        }
        prefix.push('_');
    }
}

const VECTOR_PREFIXES: [&str; 6] = ["xi", "eta", "zeta", "omega", "phi", "psi"];

fn vector_prefix(index: usize) -> String {
    if index < VECTOR_PREFIXES.len() {
        VECTOR_PREFIXES[index].to_string()
    } else {
        format!("dir{index}")
    }
}

/// A curvature operator as a polynomial matrix plus its provenance.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    kind: OperatorKind,
    metric: MetricSpec,
    matrix: PolyMatrix,
    directions: Vec<DirectionVector>,
    signs: Vec<Sign>,
}

impl OperatorMatrix {
    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn metric(&self) -> &MetricSpec {
        &self.metric
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    pub fn table(&self) -> &VarTable {
        self.matrix.table()
    }

    pub fn dim(&self) -> usize {
        self.matrix.size()
    }

    pub fn directions(&self) -> &[DirectionVector] {
        &self.directions
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    /// Entry `(row, col)`: the coefficient of `e_row` in `A(e_col)`.
    pub fn entry(&self, row: usize, col: usize) -> &Polynomial {
        self.matrix.get(row, col)
    }

    /// All direction variable names, vector by vector.
    pub fn direction_names(&self) -> Vec<String> {
        self.directions
            .iter()
            .flat_map(|d| d.names.iter().cloned())
            .collect()
    }
}

fn raise_last_slot(metric: &MetricSpec, ext: &VarTable, lowered: &PolyMatrix) -> PolyMatrix {
    // A^i_j = sum_k g^{ik} L_{jk}, i.e. A = g^{-1} L^T.
    let ginv = metric.inverse_matrix().lift(ext);
    ginv.mul(&lowered.transpose())
}

/// Szabo operator `g(S(xi)y, z) = nabla R(y, xi, xi, z; xi)`.
pub fn szabo_operator(curv: &Curvature) -> OperatorMatrix {
    let metric = curv.metric();
    let dim = metric.dim();
    let (ext, xi) = fresh_direction(metric.table(), &vector_prefix(0), dim);
    let xi_vars = xi.components(&ext);
    let mut lowered = PolyMatrix::zero(&ext, dim);
    for idx in curv.nabla_riemann.indices() {
        let comp = curv.nabla_riemann.get(&idx);
        if comp.is_zero() {
            continue;
        }
        let (j, a, b, k, c) = (idx[0], idx[1], idx[2], idx[3], idx[4]);
        let cubic = xi_vars[a].mul_ref(&xi_vars[b]).mul_ref(&xi_vars[c]);
        let term = comp.lift(&ext).unwrap().mul_ref(&cubic);
        let cell = lowered.get_mut(j, k);
        *cell = cell.add_ref(&term);
    }
    OperatorMatrix {
        kind: OperatorKind::Szabo,
        metric: metric.clone(),
        matrix: raise_last_slot(metric, &ext, &lowered),
        directions: vec![xi],
        signs: vec![Sign::Plus],
    }
}

/// Jacobi operator `g(J(xi)y, z) = R(y, xi, xi, z)`.
pub fn jacobi_operator(curv: &Curvature) -> OperatorMatrix {
    let metric = curv.metric();
    let dim = metric.dim();
    let (ext, xi) = fresh_direction(metric.table(), &vector_prefix(0), dim);
    let lowered = jacobi_lowered(curv, &ext, &xi);
    OperatorMatrix {
        kind: OperatorKind::Jacobi,
        metric: metric.clone(),
        matrix: raise_last_slot(metric, &ext, &lowered),
        directions: vec![xi],
        signs: vec![Sign::Plus],
    }
}

fn jacobi_lowered(curv: &Curvature, ext: &VarTable, xi: &DirectionVector) -> PolyMatrix {
    let dim = curv.metric().dim();
    let xi_vars = xi.components(ext);
    let mut lowered = PolyMatrix::zero(ext, dim);
    for idx in curv.riemann.indices() {
        let comp = curv.riemann.get(&idx);
        if comp.is_zero() {
            continue;
        }
        let (j, a, b, k) = (idx[0], idx[1], idx[2], idx[3]);
        let quad = xi_vars[a].mul_ref(&xi_vars[b]);
        let term = comp.lift(ext).unwrap().mul_ref(&quad);
        let cell = lowered.get_mut(j, k);
        *cell = cell.add_ref(&term);
    }
    lowered
}

/// Skew-symmetric curvature operator `g(R(pi)y, z) = R(f1, f2, y, z)` for a
/// plane spanned by two formal vectors.
pub fn skew_curvature_operator(curv: &Curvature) -> OperatorMatrix {
    let metric = curv.metric();
    let dim = metric.dim();
    let (ext1, f1) = fresh_direction(metric.table(), &vector_prefix(0), dim);
    let (ext, f2) = fresh_direction(&ext1, &vector_prefix(1), dim);
    let f1_vars = f1.components(&ext);
    let f2_vars = f2.components(&ext);
    let mut lowered = PolyMatrix::zero(&ext, dim);
    for idx in curv.riemann.indices() {
        let comp = curv.riemann.get(&idx);
        if comp.is_zero() {
            continue;
        }
        let (a, b, j, k) = (idx[0], idx[1], idx[2], idx[3]);
        let bilinear = f1_vars[a].mul_ref(&f2_vars[b]);
        let term = comp.lift(&ext).unwrap().mul_ref(&bilinear);
        let cell = lowered.get_mut(j, k);
        *cell = cell.add_ref(&term);
    }
    OperatorMatrix {
        kind: OperatorKind::SkewCurvature,
        metric: metric.clone(),
        matrix: raise_last_slot(metric, &ext, &lowered),
        directions: vec![f1, f2],
        signs: vec![Sign::Plus, Sign::Plus],
    }
}

/// Signed sum of Jacobi operators over pairwise variable-disjoint formal
/// vectors, one per sign.
pub fn higher_order_jacobi(curv: &Curvature, signs: &[Sign]) -> OperatorMatrix {
    let metric = curv.metric();
    let dim = metric.dim();
    let mut ext = metric.table().clone();
    let mut vectors = Vec::with_capacity(signs.len());
    for i in 0..signs.len() {
        let (next, vector) = fresh_direction(&ext, &vector_prefix(i), dim);
        ext = next;
        vectors.push(vector);
    }
    let mut lowered = PolyMatrix::zero(&ext, dim);
    for (vector, sign) in vectors.iter().zip(signs) {
        let one = jacobi_lowered(curv, &ext, vector);
        lowered = match sign {
            Sign::Plus => lowered.add(&one),
            Sign::Minus => lowered.sub(&one),
        };
    }
    OperatorMatrix {
        kind: OperatorKind::HigherJacobi,
        metric: metric.clone(),
        matrix: raise_last_slot(metric, &ext, &lowered),
        directions: vectors,
        signs: signs.to_vec(),
    }
}

/// Ricci operator `rho-hat = g^{-1} rho`; direction-free.
pub fn ricci_operator(curv: &Curvature) -> OperatorMatrix {
    let metric = curv.metric();
    let dim = metric.dim();
    let table = metric.table().clone();
    let mut lowered = PolyMatrix::zero(&table, dim);
    for i in 0..dim {
        for j in 0..dim {
            *lowered.get_mut(i, j) = curv.ricci.get(&[i, j]).clone();
        }
    }
    OperatorMatrix {
        kind: OperatorKind::Ricci,
        metric: metric.clone(),
        matrix: raise_last_slot(metric, &table, &lowered),
        directions: Vec::new(),
        signs: Vec::new(),
    }
}

/// Result of the exact nilpotency decision.
#[derive(Debug, Clone)]
pub enum NilpotencyVerdict {
    Nilpotent(NilpotencyReport),
    /// The dim-th power is still nonzero; some power trace certifies a
    /// nonzero eigenvalue.
    NotNilpotent {
        first_nonzero_trace_power: usize,
        trace: Polynomial,
    },
}

impl NilpotencyVerdict {
    pub fn report(&self) -> Option<&NilpotencyReport> {
        match self {
            NilpotencyVerdict::Nilpotent(r) => Some(r),
            NilpotencyVerdict::NotNilpotent { .. } => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RankSample {
    pub directions: BTreeMap<String, Rational>,
    pub rank: usize,
}

#[derive(Debug, Clone)]
pub struct NilpotencyReport {
    pub kind: OperatorKind,
    pub dim: usize,
    pub order: usize,
    pub signature: (usize, usize),
    pub witness: Option<BTreeMap<String, Rational>>,
    pub rank_profile: Vec<RankSample>,
    pub generically_nonzero_power: usize,
}

/// Budget for the deterministic witness search.
const WITNESS_BUDGET: usize = 10_000;

/// Decide the nilpotency order of `op` exactly, optionally after substituting
/// a coordinate point (direction variables always stay formal).
pub fn nilpotency_order(
    op: &OperatorMatrix,
    at_point: Option<&[(&str, Rational)]>,
    seed: u64,
) -> Result<NilpotencyVerdict, OperatorError> {
    let matrix = match at_point {
        None => op.matrix.clone(),
        Some(bindings) => substitute_coordinates(op, bindings)?,
    };
    let dim = matrix.size();

    let mut powers: Vec<PolyMatrix> = vec![matrix.clone()];
    let mut order = None;
    if matrix.is_zero() {
        order = Some(1);
    } else {
        for n in 2..=dim {
            let next = powers.last().unwrap().mul(&matrix);
            let zero = next.is_zero();
            powers.push(next);
            if zero {
                order = Some(n);
                break;
            }
        }
    }

    let Some(order) = order else {
        // Not nilpotent: over characteristic zero some power trace up to dim
        // must be a nonzero polynomial.
        for (i, p) in powers.iter().enumerate() {
            let trace = p.trace();
            if !trace.is_zero() {
                return Ok(NilpotencyVerdict::NotNilpotent {
                    first_nonzero_trace_power: i + 1,
                    trace,
                });
            }
        }
        unreachable!("a non-nilpotent matrix has a nonzero power trace");
    };

    let witness = search_witness(op, &matrix, order, seed);
    let rank_profile = rank_profile(op, &matrix);
    Ok(NilpotencyVerdict::Nilpotent(NilpotencyReport {
        kind: op.kind,
        dim,
        order,
        signature: op.metric.signature(),
        witness,
        rank_profile,
        generically_nonzero_power: order - 1,
    }))
}

fn substitute_coordinates(
    op: &OperatorMatrix,
    bindings: &[(&str, Rational)],
) -> Result<PolyMatrix, OperatorError> {
    let table = op.table();
    let metric_table = op.metric.table();
    for (name, _) in bindings {
        match table.position(name) {
            None => return Err(OperatorError::UnknownBinding(name.to_string())),
            Some(i) => {
                if table.role(i) != VarRole::Coordinate {
                    return Err(OperatorError::NotACoordinate(name.to_string()));
                }
            }
        }
    }
    for coord in metric_table.names() {
        if !bindings.iter().any(|(n, _)| *n == coord) {
            return Err(OperatorError::MissingBinding(coord.to_string()));
        }
    }
    let subs: Vec<(&str, Binding)> = bindings
        .iter()
        .map(|(n, v)| (*n, Binding::Value(v.clone())))
        .collect();
    Ok(op.matrix.map(|p| p.substitute(&subs).unwrap()))
}

/// Candidate direction assignments: a deterministic staggered-unit and
/// all-ones prelude, then seeded random integer vectors with entries in
/// [-2, 2], then seeded random rationals, within one overall budget.
fn witness_candidates(op: &OperatorMatrix, seed: u64) -> impl Iterator<Item = Vec<Rational>> + '_ {
    let dim = op.dim();
    let total: usize = op.directions.iter().map(|d| d.names.len()).sum();
    let n_vectors = op.directions.len();
    let mut produced = 0usize;
    let mut rng = SplitMix64::new(seed);
    std::iter::from_fn(move || {
        if total == 0 {
            // Direction-free operator: a single empty assignment.
            if produced == 0 {
                produced = 1;
                return Some(Vec::new());
            }
            return None;
        }
        let i = produced;
        produced += 1;
        if i >= WITNESS_BUDGET {
            return None;
        }
        if i < dim {
            // Vector t gets the unit e_{(i + t) mod dim}.
            let mut values = vec![Rational::zero(); total];
            for t in 0..n_vectors {
                values[t * dim + (i + t) % dim] = Rational::one();
            }
            Some(values)
        } else if i == dim {
            Some(vec![Rational::one(); total])
        } else if i < WITNESS_BUDGET / 2 {
            Some(
                (0..total)
                    .map(|_| Rational::from_integer(rng.int_in(-2, 2).into()))
                    .collect(),
            )
        } else {
            Some(
                (0..total)
                    .map(|_| {
                        let num = rng.int_in(-9, 9);
                        let den = rng.int_in(1, 9);
                        Rational::new(num.into(), den.into())
                    })
                    .collect(),
            )
        }
    })
}

fn bind_directions(op: &OperatorMatrix, matrix: &PolyMatrix, values: &[Rational]) -> PolyMatrix {
    let names: Vec<String> = op.direction_names();
    debug_assert_eq!(names.len(), values.len());
    let subs: Vec<(&str, Binding)> = names
        .iter()
        .zip(values)
        .map(|(n, v)| (n.as_str(), Binding::Value(v.clone())))
        .collect();
    matrix.map(|p| p.substitute(&subs).unwrap())
}

fn search_witness(
    op: &OperatorMatrix,
    matrix: &PolyMatrix,
    order: usize,
    seed: u64,
) -> Option<BTreeMap<String, Rational>> {
    let names = op.direction_names();
    for values in witness_candidates(op, seed) {
        let bound = bind_directions(op, matrix, &values);
        if power_is_nonzero(&bound, order - 1) {
            return Some(names.iter().cloned().zip(values).collect());
        }
    }
    None
}

/// Is `m^power` nonzero (as a polynomial matrix; power 0 is the identity)?
fn power_is_nonzero(m: &PolyMatrix, power: usize) -> bool {
    if power == 0 {
        return true;
    }
    // Numeric fast path when no variable survives.
    if let Some(rows) = constant_rows(m) {
        let mut acc = rows.clone();
        for _ in 1..power {
            acc = rat_mat_mul(&acc, &rows);
        }
        return acc.iter().flatten().any(|v| !v.is_zero());
    }
    let mut acc = m.clone();
    for _ in 1..power {
        acc = acc.mul(m);
        if acc.is_zero() {
            return false;
        }
    }
    !acc.is_zero()
}

fn constant_rows(m: &PolyMatrix) -> Option<Vec<Vec<Rational>>> {
    let n = m.size();
    let mut rows = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            rows[i][j] = m.get(i, j).as_constant()?;
        }
    }
    Some(rows)
}

fn rat_mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    let mut out = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[k][j].is_zero() {
                    continue;
                }
                let prod = &a[i][k] * &b[k][j];
                out[i][j] = &out[i][j] + &prod;
            }
        }
    }
    out
}

/// Deterministic rank profile: staggered unit directions and the all-ones
/// direction, coordinates at the (possibly substituted) point.
fn rank_profile(op: &OperatorMatrix, matrix: &PolyMatrix) -> Vec<RankSample> {
    let dim = op.dim();
    let names = op.direction_names();
    let total = names.len();
    let n_vectors = op.directions.len();
    let mut samples = Vec::new();
    let mut points: Vec<Vec<Rational>> = Vec::new();
    for s in 0..dim.min(4) {
        let mut values = vec![Rational::zero(); total];
        for t in 0..n_vectors {
            values[t * dim + (s + t) % dim] = Rational::one();
        }
        points.push(values);
    }
    points.push(vec![Rational::one(); total]);
    for values in points {
        let bound = bind_directions(op, matrix, &values);
        let rows = numeric_rows_at_base(op, &bound);
        let rank = rational_rank(rows);
        samples.push(RankSample {
            directions: names.iter().cloned().zip(values).collect(),
            rank,
        });
    }
    samples
}

/// Evaluate any surviving coordinate variables at the metric base point.
fn numeric_rows_at_base(op: &OperatorMatrix, m: &PolyMatrix) -> Vec<Vec<Rational>> {
    let table = m.table();
    let metric_table = op.metric.table();
    let base = op.metric.base_point();
    let values: Vec<Rational> = (0..table.len())
        .map(|i| {
            metric_table
                .position(table.name(i))
                .map(|p| base[p].clone())
                .unwrap_or_else(Rational::zero)
        })
        .collect();
    m.eval(&values)
}

/// Power-trace spectrum check: all of `trace(op^k)` for `k = 1..=dim` vanish
/// exactly iff the characteristic polynomial is `lambda^dim`.
#[derive(Debug, Clone)]
pub struct SpectrumCheck {
    pub all_power_traces_zero: bool,
    pub first_nonzero_power: Option<usize>,
    pub first_nonzero_trace: Option<Polynomial>,
}

pub fn characteristic_checks(op: &OperatorMatrix) -> SpectrumCheck {
    spectrum_of_matrix(&op.matrix)
}

pub fn spectrum_of_matrix(matrix: &PolyMatrix) -> SpectrumCheck {
    let dim = matrix.size();
    let mut acc = PolyMatrix::identity(matrix.table(), dim);
    for k in 1..=dim {
        acc = acc.mul(matrix);
        let trace = acc.trace();
        if !trace.is_zero() {
            return SpectrumCheck {
                all_power_traces_zero: false,
                first_nonzero_power: Some(k),
                first_nonzero_trace: Some(trace),
            };
        }
    }
    SpectrumCheck {
        all_power_traces_zero: true,
        first_nonzero_power: None,
        first_nonzero_trace: None,
    }
}

/// Exact rank of the operator matrix after binding every variable.
pub fn rank_at_point(
    op: &OperatorMatrix,
    bindings: &[(&str, Rational)],
) -> Result<usize, OperatorError> {
    let table = op.table();
    for (name, _) in bindings {
        if table.position(name).is_none() {
            return Err(OperatorError::UnknownBinding(name.to_string()));
        }
    }
    let values: Vec<Rational> = (0..table.len())
        .map(|i| {
            bindings
                .iter()
                .find(|(n, _)| *n == table.name(i))
                .map(|(_, v)| Ok(v.clone()))
                .unwrap_or_else(|| Err(OperatorError::MissingBinding(table.name(i).to_string())))
        })
        .collect::<Result<_, _>>()?;
    Ok(rational_rank(op.matrix.eval(&values)))
}

/// `g(A v, w) - g(A w, v)` as one polynomial in fresh probe vectors; zero iff
/// the operator is self-adjoint.
pub fn self_adjointness_defect(op: &OperatorMatrix) -> Polynomial {
    let (gav_w, gaw_v) = adjointness_pairings(op);
    gav_w.sub_ref(&gaw_v)
}

/// `g(A v, w) + g(A w, v)`; zero iff the operator is skew-adjoint.
pub fn skew_adjointness_defect(op: &OperatorMatrix) -> Polynomial {
    let (gav_w, gaw_v) = adjointness_pairings(op);
    gav_w.add_ref(&gaw_v)
}

fn adjointness_pairings(op: &OperatorMatrix) -> (Polynomial, Polynomial) {
    let dim = op.dim();
    let (ext1, v) = fresh_direction(op.table(), "v", dim);
    let (ext, w) = fresh_direction(&ext1, "w", dim);
    let a = op.matrix.lift(&ext);
    let g = op.metric.matrix().lift(&ext);
    let v_vars = v.components(&ext);
    let w_vars = w.components(&ext);
    let av = a.apply(&v_vars);
    let aw = a.apply(&w_vars);
    let pair = |left: &[Polynomial], right: &[Polynomial]| {
        let mut acc = Polynomial::zero(&ext);
        for i in 0..dim {
            if left[i].is_zero() {
                continue;
            }
            for k in 0..dim {
                let gik = g.get(i, k);
                if gik.is_zero() || right[k].is_zero() {
                    continue;
                }
                acc = acc.add_ref(&gik.mul_ref(&left[i]).mul_ref(&right[k]));
            }
        }
        acc
    };
    (pair(&av, &w_vars), pair(&aw, &v_vars))
}

/// Apply a single-direction operator to its own formal vector; `None` if the
/// operator does not have exactly one direction vector.
pub fn apply_to_own_direction(op: &OperatorMatrix) -> Option<Vec<Polynomial>> {
    if op.directions.len() != 1 {
        return None;
    }
    let xi = op.directions[0].components(op.table());
    Some(op.matrix.apply(&xi))
}

/// Check entrywise homogeneity of the stated degree under scaling every
/// direction variable by a fresh constant `c`.
pub fn direction_scaling_is_homogeneous(op: &OperatorMatrix, degree: u32) -> bool {
    let table = op.table();
    let mut c_name = "c".to_string();
    while table.position(&c_name).is_some() {
        c_name.push('_');
    }
    let ext = table
        .extended(&[(c_name.clone(), VarRole::Auxiliary)])
        .unwrap();
    let c = Polynomial::var_named(&ext, &c_name).unwrap();
    let scaled_vars: Vec<(String, Polynomial)> = op
        .direction_names()
        .iter()
        .map(|n| {
            let var = Polynomial::var_named(&ext, n).unwrap();
            (n.clone(), var.mul_ref(&c))
        })
        .collect();
    let subs: Vec<(&str, Binding)> = scaled_vars
        .iter()
        .map(|(n, p)| (n.as_str(), Binding::Poly(p.clone())))
        .collect();
    let c_pow = c.pow(degree);
    for i in 0..op.dim() {
        for j in 0..op.dim() {
            let lifted = op.matrix.get(i, j).lift(&ext).unwrap();
            let scaled = lifted.substitute(&subs).unwrap();
            if scaled != lifted.mul_ref(&c_pow) {
                return false;
            }
        }
    }
    true
}

/// `trace J(xi) - rho(xi, xi)` as a polynomial; identically zero links the
/// Jacobi operator to the Ricci tensor.
pub fn jacobi_trace_defect(curv: &Curvature, op: &OperatorMatrix) -> Polynomial {
    assert!(matches!(op.kind, OperatorKind::Jacobi));
    let ext = op.table();
    let xi = op.directions[0].components(ext);
    let dim = op.dim();
    let mut rho_xx = Polynomial::zero(ext);
    for i in 0..dim {
        for j in 0..dim {
            let rho = curv.ricci.get(&[i, j]);
            if rho.is_zero() {
                continue;
            }
            rho_xx = rho_xx.add_ref(&rho.lift(ext).unwrap().mul_ref(&xi[i].mul_ref(&xi[j])));
        }
    }
    op.matrix.trace().sub_ref(&rho_xx)
}

/// Sampled fallback for subspace Jacobi operators: draw rational bases of
/// k-dimensional subspaces at a random coordinate point, form
/// `J(pi) = sum_{ij} (G^{-1})_{ij} J(w_i, w_j)` with `G` the Gram matrix (the
/// basis-free form of the signed orthonormal sum), and check the stated power
/// vanishes numerically.
pub fn sampled_subspace_jacobi_vanishes(
    curv: &Curvature,
    k: usize,
    power: usize,
    samples: usize,
    seed: u64,
) -> bool {
    let metric = curv.metric();
    let dim = metric.dim();
    let mut rng = SplitMix64::new(seed);
    let mut done = 0usize;
    let mut attempts = 0usize;
    while done < samples && attempts < samples * 20 {
        attempts += 1;
        let point: Vec<Rational> = (0..dim)
            .map(|_| Rational::from_integer(rng.int_in(-3, 3).into()))
            .collect();
        let g_at: Vec<Vec<Rational>> = metric.matrix().eval(&point);
        let r_at: Vec<Rational> = curv
            .riemann
            .components()
            .iter()
            .map(|p| p.eval(&point))
            .collect();
        let vectors: Vec<Vec<Rational>> = (0..k)
            .map(|_| {
                (0..dim)
                    .map(|_| Rational::from_integer(rng.int_in(-3, 3).into()))
                    .collect()
            })
            .collect();
        // Gram matrix and its inverse; skip degenerate draws.
        let mut gram = vec![vec![Rational::zero(); k]; k];
        for a in 0..k {
            for b in 0..k {
                let mut acc = Rational::zero();
                for i in 0..dim {
                    for j in 0..dim {
                        if g_at[i][j].is_zero() {
                            continue;
                        }
                        acc += &g_at[i][j] * &(&vectors[a][i] * &vectors[b][j]);
                    }
                }
                gram[a][b] = acc;
            }
        }
        let Some(gram_inv) = rat_inverse(&gram) else {
            continue;
        };
        // Inverse metric at the point.
        let ginv_at: Vec<Vec<Rational>> = metric.inverse_matrix().eval(&point);
        // J(pi)^i_j = sum_k ginv[i][k] sum_{ab} Ginv[a][b] * sym R(e_j, w_a, w_b, e_k).
        let flat = |i: usize, j: usize, p: usize, q: usize| {
            r_at[((i * dim + j) * dim + p) * dim + q].clone()
        };
        let mut jpi = vec![vec![Rational::zero(); dim]; dim];
        for col in 0..dim {
            for row in 0..dim {
                let mut acc = Rational::zero();
                for kk in 0..dim {
                    if ginv_at[row][kk].is_zero() {
                        continue;
                    }
                    let mut lowered = Rational::zero();
                    for a in 0..k {
                        for b in 0..k {
                            if gram_inv[a][b].is_zero() {
                                continue;
                            }
                            let mut contraction = Rational::zero();
                            for p in 0..dim {
                                for q in 0..dim {
                                    let rv = flat(col, p, q, kk);
                                    if rv.is_zero() {
                                        continue;
                                    }
                                    contraction += &rv * &(&vectors[a][p] * &vectors[b][q]);
                                }
                            }
                            lowered += &gram_inv[a][b] * &contraction;
                        }
                    }
                    acc += &ginv_at[row][kk] * &lowered;
                }
                jpi[row][col] = acc;
            }
        }
        let mut acc = jpi.clone();
        for _ in 1..power {
            acc = rat_mat_mul(&acc, &jpi);
        }
        if acc.iter().flatten().any(|v| !v.is_zero()) {
            return false;
        }
        done += 1;
    }
    done == samples
}

/// Inverse of a small rational matrix; `None` if singular.
fn rat_inverse(a: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { Rational::one() } else { Rational::zero() });
            }
            r
        })
        .collect();
    for col in 0..n {
        let pivot_row = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, pivot_row);
        let pivot = aug[col][col].clone();
        for c in 0..2 * n {
            aug[col][c] = &aug[col][c] / &pivot;
        }
        for r in 0..n {
            if r == col || aug[r][col].is_zero() {
                continue;
            }
            let factor = aug[r][col].clone();
            for c in 0..2 * n {
                let delta = &factor * &aug[col][c];
                aug[r][c] = &aug[r][c] - &delta;
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::MetricSpec;
    use crate::parse::poly_parse;
    use crate::rational::rat_int;

    fn g2_curv() -> Curvature {
        let m = MetricSpec::from_entries(
            &["x", "u", "v", "y"],
            &[((0, 0), "-1/3*u^3"), ((0, 3), "1"), ((1, 2), "1")],
        )
        .unwrap();
        Curvature::compute(&m)
    }

    fn g2_tilde_curv() -> Curvature {
        let m = MetricSpec::from_entries(
            &["x", "u", "v", "y"],
            &[((0, 0), "-(u^2)"), ((0, 3), "1"), ((1, 2), "1")],
        )
        .unwrap();
        Curvature::compute(&m)
    }

    #[test]
    fn szabo_columns_match_closed_form_on_g2() {
        let op = szabo_operator(&g2_curv());
        let t = op.table().clone();
        // S(xi)X = xi1^3 Y - xi0 xi1^2 V; column 0, rows y=3 and v=2.
        assert_eq!(op.entry(3, 0), &poly_parse("xi1^3", &t).unwrap());
        assert_eq!(op.entry(2, 0), &poly_parse("-xi0*xi1^2", &t).unwrap());
        assert!(op.entry(0, 0).is_zero());
        assert!(op.entry(1, 0).is_zero());
        // S(xi)U = -xi0 xi1^2 Y + xi0^2 xi1 V.
        assert_eq!(op.entry(3, 1), &poly_parse("-xi0*xi1^2", &t).unwrap());
        assert_eq!(op.entry(2, 1), &poly_parse("xi0^2*xi1", &t).unwrap());
        // S(xi)Y = S(xi)V = 0.
        for row in 0..4 {
            assert!(op.entry(row, 2).is_zero());
            assert!(op.entry(row, 3).is_zero());
        }
    }

    #[test]
    fn szabo_annihilates_its_direction() {
        let op = szabo_operator(&g2_curv());
        let sv = apply_to_own_direction(&op).unwrap();
        assert!(sv.iter().all(Polynomial::is_zero));
    }

    #[test]
    fn jacobi_columns_on_g2_tilde() {
        let op = jacobi_operator(&g2_tilde_curv());
        let t = op.table().clone();
        // J(xi)X = xi1^2 Y - xi0 xi1 V.
        assert_eq!(op.entry(3, 0), &poly_parse("xi1^2", &t).unwrap());
        assert_eq!(op.entry(2, 0), &poly_parse("-xi0*xi1", &t).unwrap());
        // J(xi)Y = J(xi)V = 0.
        for row in 0..4 {
            assert!(op.entry(row, 2).is_zero());
            assert!(op.entry(row, 3).is_zero());
        }
        let jv = apply_to_own_direction(&op).unwrap();
        assert!(jv.iter().all(Polynomial::is_zero));
    }

    #[test]
    fn skew_operator_specializes_to_plane_basis() {
        let op = skew_curvature_operator(&g2_tilde_curv());
        // Specialize f1 = X, f2 = U: R(pi)X = -V, R(pi)U = Y.
        let names = op.direction_names();
        let mut bindings: Vec<(&str, Rational)> = Vec::new();
        for n in &names {
            let v = match n.as_str() {
                "xi0" | "eta1" => rat_int(1),
                _ => rat_int(0),
            };
            bindings.push((n.as_str(), v));
        }
        // Columns V and Y vanish identically.
        for row in 0..4 {
            assert!(op.entry(row, 2).is_zero());
            assert!(op.entry(row, 3).is_zero());
        }
        let subs: Vec<(&str, Binding)> = bindings
            .iter()
            .map(|(n, v)| (*n, Binding::Value(v.clone())))
            .collect();
        let specialized = op.matrix().map(|p| p.substitute(&subs).unwrap());
        assert_eq!(specialized.get(2, 0).as_constant(), Some(rat_int(-1)));
        assert_eq!(specialized.get(3, 1).as_constant(), Some(rat_int(1)));
        assert_eq!(specialized.get(3, 0).as_constant(), Some(rat_int(0)));
    }

    #[test]
    fn higher_jacobi_degenerate_cases() {
        let curv = g2_tilde_curv();
        let empty = higher_order_jacobi(&curv, &[]);
        assert!(empty.matrix().is_zero());
        let single = higher_order_jacobi(&curv, &[Sign::Plus]);
        let jacobi = jacobi_operator(&curv);
        assert_eq!(single.matrix(), jacobi.matrix());
        let diff = higher_order_jacobi(&curv, &[Sign::Plus, Sign::Minus]);
        let squared = diff.matrix().mul(diff.matrix());
        assert!(squared.is_zero());
    }

    #[test]
    fn ricci_operator_squares_to_zero() {
        let m = MetricSpec::from_entries(
            &["x", "u", "y"],
            &[((0, 0), "-(u^2)"), ((1, 1), "1"), ((0, 2), "1")],
        )
        .unwrap();
        let curv = Curvature::compute(&m);
        let op = ricci_operator(&curv);
        // rho-hat(e_0) = 1 * e_y, rho-hat(e_i) = 0 for i > 0.
        assert_eq!(op.entry(2, 0).as_constant(), Some(rat_int(1)));
        assert!(op.entry(0, 0).is_zero());
        assert!(op.entry(1, 0).is_zero());
        for col in 1..3 {
            for row in 0..3 {
                assert!(op.entry(row, col).is_zero());
            }
        }
        assert!(op.matrix().mul(op.matrix()).is_zero());
    }

    #[test]
    fn nilpotency_of_g2_szabo() {
        let op = szabo_operator(&g2_curv());
        let verdict = nilpotency_order(&op, None, 0).unwrap();
        let report = verdict.report().expect("nilpotent");
        assert_eq!(report.order, 2);
        assert_eq!(report.signature, (2, 2));
        assert_eq!(report.generically_nonzero_power, 1);
        let witness = report.witness.as_ref().expect("witness found");
        // The witness must make S(xi) itself nonzero.
        assert!(witness.values().any(|v| !v.is_zero()));
    }

    #[test]
    fn flat_operator_has_order_one() {
        let m = MetricSpec::flat(&["a", "b", "c", "d"], 2).unwrap();
        let curv = Curvature::compute(&m);
        for op in [
            szabo_operator(&curv),
            jacobi_operator(&curv),
            skew_curvature_operator(&curv),
            ricci_operator(&curv),
        ] {
            let verdict = nilpotency_order(&op, None, 0).unwrap();
            assert_eq!(verdict.report().unwrap().order, 1);
        }
    }

    #[test]
    fn not_nilpotent_certificate() {
        // J of g_f with Xi = identity, f = -u^2 has nonzero Ricci trace.
        let m = MetricSpec::from_entries(
            &["x", "u", "y"],
            &[((0, 0), "-(u^2)"), ((1, 1), "1"), ((0, 2), "1")],
        )
        .unwrap();
        let curv = Curvature::compute(&m);
        let op = jacobi_operator(&curv);
        match nilpotency_order(&op, None, 0).unwrap() {
            NilpotencyVerdict::NotNilpotent {
                first_nonzero_trace_power,
                trace,
            } => {
                assert_eq!(first_nonzero_trace_power, 1);
                assert!(!trace.is_zero());
            }
            other => panic!("expected not-nilpotent, got {other:?}"),
        }
        let spectrum = characteristic_checks(&op);
        assert!(!spectrum.all_power_traces_zero);
        assert_eq!(spectrum.first_nonzero_power, Some(1));
    }

    #[test]
    fn identity_fails_spectrum_at_power_one() {
        let m = MetricSpec::flat(&["a", "b"], 0).unwrap();
        let table = m.table().clone();
        let matrix = PolyMatrix::identity(&table, 2);
        let check = spectrum_of_matrix(&matrix);
        assert!(!check.all_power_traces_zero);
        assert_eq!(check.first_nonzero_power, Some(1));
        assert_eq!(
            check.first_nonzero_trace.unwrap().as_constant(),
            Some(rat_int(2))
        );
    }

    #[test]
    fn rank_at_point_on_g2_szabo() {
        let op = szabo_operator(&g2_curv());
        let mut bindings: Vec<(&str, Rational)> = vec![
            ("x", rat_int(0)),
            ("u", rat_int(0)),
            ("v", rat_int(0)),
            ("y", rat_int(0)),
        ];
        bindings.extend([
            ("xi0", rat_int(0)),
            ("xi1", rat_int(1)),
            ("xi2", rat_int(0)),
            ("xi3", rat_int(0)),
        ]);
        assert_eq!(rank_at_point(&op, &bindings).unwrap(), 1);
        let mut axis0 = bindings.clone();
        axis0[4] = ("xi0", rat_int(1));
        axis0[5] = ("xi1", rat_int(0));
        assert_eq!(rank_at_point(&op, &axis0).unwrap(), 0);
        assert!(matches!(
            rank_at_point(&op, &bindings[..4]),
            Err(OperatorError::MissingBinding(_))
        ));
    }

    #[test]
    fn adjointness_defects() {
        let curv = g2_curv();
        assert!(self_adjointness_defect(&szabo_operator(&curv)).is_zero());
        let tcurv = g2_tilde_curv();
        assert!(self_adjointness_defect(&jacobi_operator(&tcurv)).is_zero());
        assert!(skew_adjointness_defect(&skew_curvature_operator(&tcurv)).is_zero());
    }

    #[test]
    fn homogeneity_degrees() {
        let curv = g2_curv();
        assert!(direction_scaling_is_homogeneous(&szabo_operator(&curv), 3));
        let tcurv = g2_tilde_curv();
        assert!(direction_scaling_is_homogeneous(&jacobi_operator(&tcurv), 2));
        assert!(direction_scaling_is_homogeneous(
            &skew_curvature_operator(&tcurv),
            2
        ));
        assert!(!direction_scaling_is_homogeneous(&szabo_operator(&curv), 2));
    }

    #[test]
    fn jacobi_trace_matches_ricci() {
        for curv in [g2_curv(), g2_tilde_curv()] {
            let op = jacobi_operator(&curv);
            assert!(jacobi_trace_defect(&curv, &op).is_zero());
        }
    }

    #[test]
    fn sampled_subspace_fallback_passes_on_g2_tilde() {
        let curv = g2_tilde_curv();
        assert!(sampled_subspace_jacobi_vanishes(&curv, 2, 2, 8, 11));
        // Negative control: power 1 does not kill J(pi) generically.
        assert!(!sampled_subspace_jacobi_vanishes(&curv, 2, 1, 8, 11));
    }

    #[test]
    fn pointwise_substitution_changes_order() {
        // Quartic pointwise variant of g2: f = -u^4/3.
        let m = MetricSpec::from_entries(
            &["x", "u", "v", "y"],
            &[((0, 0), "-1/3*u^4"), ((0, 3), "1"), ((1, 2), "1")],
        )
        .unwrap();
        let curv = Curvature::compute(&m);
        let op = szabo_operator(&curv);
        let origin: Vec<(&str, Rational)> = vec![
            ("x", rat_int(0)),
            ("u", rat_int(0)),
            ("v", rat_int(0)),
            ("y", rat_int(0)),
        ];
        let at_origin = nilpotency_order(&op, Some(&origin), 0).unwrap();
        assert_eq!(at_origin.report().unwrap().order, 1);
        let ones: Vec<(&str, Rational)> = vec![
            ("x", rat_int(1)),
            ("u", rat_int(1)),
            ("v", rat_int(1)),
            ("y", rat_int(1)),
        ];
        let at_ones = nilpotency_order(&op, Some(&ones), 0).unwrap();
        assert_eq!(at_ones.report().unwrap().order, 2);
        // Anywhere on the u = 0 plane the operator vanishes identically.
        let u_zero: Vec<(&str, Rational)> = vec![
            ("x", rat_int(3)),
            ("u", rat_int(0)),
            ("v", rat_int(2)),
            ("y", rat_int(1)),
        ];
        let on_plane = nilpotency_order(&op, Some(&u_zero), 0).unwrap();
        assert_eq!(on_plane.report().unwrap().order, 1);
        // Formal order (no point) is also 2.
        let formal = nilpotency_order(&op, None, 0).unwrap();
        assert_eq!(formal.report().unwrap().order, 2);
        // Incomplete point is rejected.
        assert!(matches!(
            nilpotency_order(&op, Some(&origin[..2]), 0),
            Err(OperatorError::MissingBinding(_))
        ));
    }
}
