//! The metric families under study, their pointwise variants, the algebraic
//! tensors built from symmetric forms, and the flat-product combinator.
//!
//! All of them share one template: coordinates `(x, m_1, .., m_nu, y)` with
//! `g(X,X) = f(m)`, `g(X,Y) = 1` and a constant symmetric middle block, which
//! keeps the determinant constant and the whole pipeline polynomial.

use num_traits::Zero;
use thiserror::Error;

use crate::matrix::PolyMatrix;
use crate::metric::{MetricError, MetricSpec};
use crate::poly::Polynomial;
use crate::rational::Rational;
use crate::tensor::{Symmetry, TensorField, Variance};
use crate::vars::VarTable;

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("nilpotency order must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error("Xi must be a square symmetric matrix")]
    XiNotSymmetric,
    #[error("Xi is singular")]
    XiSingular,
    #[error("f must be a polynomial in middle coordinates; `x` and `y` are reserved")]
    ReservedName,
    #[error("f ranges over {got} variables but Xi is {expected}x{expected}")]
    ArityMismatch { got: usize, expected: usize },
    #[error("symmetric form input is not symmetric")]
    FormNotSymmetric,
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Which family of metrics to construct.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Szabo,
    Osserman,
    PointwiseSzabo,
    PointwiseOsserman,
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Szabo => "szabo",
            FamilyKind::Osserman => "osserman",
            FamilyKind::PointwiseSzabo => "pointwise-szabo",
            FamilyKind::PointwiseOsserman => "pointwise-osserman",
        }
    }

    pub fn parse(name: &str) -> Option<FamilyKind> {
        match name {
            "szabo" => Some(FamilyKind::Szabo),
            "osserman" => Some(FamilyKind::Osserman),
            "pointwise-szabo" => Some(FamilyKind::PointwiseSzabo),
            "pointwise-osserman" => Some(FamilyKind::PointwiseOsserman),
            _ => None,
        }
    }
}

/// Coordinates and hyperbolic pairing shared by the order-n families.
struct Layout {
    coords: Vec<String>,
    /// (row, col) middle-block entries set to 1 (T*T or U_a*V_a pairs).
    block_ones: Vec<(usize, usize)>,
}

fn layout(n: usize) -> Layout {
    match n {
        2 => Layout {
            coords: vec!["x".into(), "u".into(), "v".into(), "y".into()],
            block_ones: vec![(1, 2)],
        },
        3 => Layout {
            coords: vec!["x".into(), "t".into(), "u".into(), "v".into(), "y".into()],
            block_ones: vec![(1, 1), (2, 3)],
        },
        n if n % 2 == 1 => {
            // n = 2l+1, l >= 2: (x, t, u2..u_{l+1}, v2..v_{l+1}, y).
            let l = (n - 1) / 2;
            let mut coords = vec!["x".to_string(), "t".to_string()];
            for a in 2..=l + 1 {
                coords.push(format!("u{a}"));
            }
            for a in 2..=l + 1 {
                coords.push(format!("v{a}"));
            }
            coords.push("y".to_string());
            let mut block_ones = vec![(1, 1)];
            for a in 2..=l + 1 {
                block_ones.push((a, l + a));
            }
            Layout { coords, block_ones }
        }
        _ => {
            // n = 2l+2, l >= 1: (x, u1..u_{l+1}, v1..v_{l+1}, y).
            let l = (n - 2) / 2;
            let mut coords = vec!["x".to_string()];
            for a in 1..=l + 1 {
                coords.push(format!("u{a}"));
            }
            for a in 1..=l + 1 {
                coords.push(format!("v{a}"));
            }
            coords.push("y".to_string());
            let block_ones = (1..=l + 1).map(|a| (a, l + 1 + a)).collect();
            Layout { coords, block_ones }
        }
    }
}

/// `g(X,X)` for each family, as a list of negated pieces.
fn f_pieces(kind: FamilyKind, n: usize) -> Vec<String> {
    let l = if n % 2 == 1 { (n - 1) / 2 } else { (n - 2) / 2 };
    match (kind, n) {
        (FamilyKind::Szabo, 2) => vec!["1/3*u^3".into()],
        (FamilyKind::Szabo, 3) => vec!["t*u^2".into()],
        (FamilyKind::Szabo, n) if n % 2 == 1 => {
            let mut pieces = vec!["t*u2^2".to_string()];
            for a in 2..=l {
                pieces.push(format!("(u{a}+v{a})*u{}^2", a + 1));
            }
            pieces
        }
        (FamilyKind::Szabo, _) => {
            let mut pieces: Vec<String> = (1..=l)
                .map(|a| format!("(u{a}+v{a})*u{}^2", a + 1))
                .collect();
            pieces.push("1/3*u1^3".into());
            pieces
        }
        (FamilyKind::Osserman, 2) => vec!["u^2".into()],
        (FamilyKind::Osserman, 3) => vec!["2*t*u".into(), "u^2".into()],
        (FamilyKind::Osserman, n) if n % 2 == 1 => {
            let mut pieces = vec!["2*t*u2".to_string(), "u2^2".to_string()];
            for a in 2..=l {
                pieces.push(format!("2*(u{a}+v{a})*u{}", a + 1));
                pieces.push(format!("u{}^2", a + 1));
            }
            pieces
        }
        (FamilyKind::Osserman, _) => {
            let mut pieces = Vec::new();
            for a in 1..=l {
                pieces.push(format!("2*(u{a}+v{a})*u{}", a + 1));
                pieces.push(format!("u{}^2", a + 1));
            }
            pieces.push("u1^2".into());
            pieces
        }
        // Degree-raised variants: cubic terms become quartic (Szabo kind) and
        // quadratic terms become cubic (Osserman kind), so the derivative
        // tensor of interest vanishes at the origin.
        (FamilyKind::PointwiseSzabo, 2) => vec!["1/3*u^4".into()],
        (FamilyKind::PointwiseSzabo, 3) => vec!["t*u^3".into()],
        (FamilyKind::PointwiseSzabo, n) if n % 2 == 1 => {
            let mut pieces = vec!["t*u2^3".to_string()];
            for a in 2..=l {
                pieces.push(format!("(u{a}+v{a})*u{}^3", a + 1));
            }
            pieces
        }
        (FamilyKind::PointwiseSzabo, _) => {
            let mut pieces: Vec<String> = (1..=l)
                .map(|a| format!("(u{a}+v{a})*u{}^3", a + 1))
                .collect();
            pieces.push("1/3*u1^4".into());
            pieces
        }
        (FamilyKind::PointwiseOsserman, 2) => vec!["u^3".into()],
        (FamilyKind::PointwiseOsserman, 3) => vec!["2*t*u^2".into(), "u^3".into()],
        (FamilyKind::PointwiseOsserman, n) if n % 2 == 1 => {
            let mut pieces = vec!["2*t*u2^2".to_string(), "u2^3".to_string()];
            for a in 2..=l {
                pieces.push(format!("2*(u{a}+v{a})*u{}^2", a + 1));
                pieces.push(format!("u{}^3", a + 1));
            }
            pieces
        }
        (FamilyKind::PointwiseOsserman, _) => {
            let mut pieces = Vec::new();
            for a in 1..=l {
                pieces.push(format!("2*(u{a}+v{a})*u{}^2", a + 1));
                pieces.push(format!("u{}^3", a + 1));
            }
            pieces.push("u1^3".into());
            pieces
        }
    }
}

/// Construct the order-n metric of the requested family on `R^{n+2}`.
pub fn family_metric(kind: FamilyKind, n: usize) -> Result<MetricSpec, FamilyError> {
    if n < 2 {
        return Err(FamilyError::OrderTooSmall(n));
    }
    let Layout { coords, block_ones } = layout(n);
    let dim = coords.len();
    debug_assert_eq!(dim, n + 2);
    // Each piece is parenthesized: a bare leading `-P` would bind the sign
    // inside the first exponentiated base (`-u^2` reads as `(-u)^2`).
    let f = format!("-({})", f_pieces(kind, n).join(") - ("));
    let coord_refs: Vec<&str> = coords.iter().map(String::as_str).collect();
    let mut entries: Vec<((usize, usize), String)> = vec![((0, 0), f), ((0, dim - 1), "1".into())];
    for (i, j) in block_ones {
        entries.push(((i, j), "1".into()));
    }
    let entry_refs: Vec<((usize, usize), &str)> = entries
        .iter()
        .map(|((i, j), e)| ((*i, *j), e.as_str()))
        .collect();
    Ok(MetricSpec::from_entries(&coord_refs, &entry_refs)?)
}

/// General `g_f` construction: `f` over the middle coordinates, `Xi` the
/// constant symmetric middle block; yields a metric on `(x, mids.., y)`.
pub fn gf_metric(f: &Polynomial, xi: &[Vec<Rational>]) -> Result<MetricSpec, FamilyError> {
    let nu = xi.len();
    if xi.iter().any(|row| row.len() != nu) {
        return Err(FamilyError::XiNotSymmetric);
    }
    for a in 0..nu {
        for b in a + 1..nu {
            if xi[a][b] != xi[b][a] {
                return Err(FamilyError::XiNotSymmetric);
            }
        }
    }
    let mids: Vec<&str> = f.table().names().collect();
    if mids.len() != nu {
        return Err(FamilyError::ArityMismatch {
            got: mids.len(),
            expected: nu,
        });
    }
    if mids.iter().any(|m| *m == "x" || *m == "y") {
        return Err(FamilyError::ReservedName);
    }
    // Reject a singular middle block up front with a targeted error.
    let empty = VarTable::empty();
    let xi_matrix = PolyMatrix::from_fn(&empty, nu, |a, b| {
        Polynomial::constant(&empty, xi[a][b].clone())
    });
    if nu > 0 && xi_matrix.determinant().as_constant().unwrap().is_zero() {
        return Err(FamilyError::XiSingular);
    }

    let mut coords: Vec<&str> = vec!["x"];
    coords.extend(&mids);
    coords.push("y");
    let table = VarTable::coordinates(&coords).map_err(MetricError::from)?;
    let dim = nu + 2;
    let mut g = PolyMatrix::zero(&table, dim);
    *g.get_mut(0, 0) = f.lift(&table).expect("middle coordinates lift");
    *g.get_mut(0, dim - 1) = Polynomial::one(&table);
    *g.get_mut(dim - 1, 0) = Polynomial::one(&table);
    for a in 0..nu {
        for b in 0..nu {
            *g.get_mut(1 + a, 1 + b) = Polynomial::constant(&table, xi[a][b].clone());
        }
    }
    Ok(MetricSpec::from_matrix(table, g, None)?)
}

/// Isometric product with a flat factor: block sum with `extra_minus` entries
/// of `-1` and `extra_plus` entries of `+1`.
pub fn direct_sum_flat(
    metric: &MetricSpec,
    extra_minus: usize,
    extra_plus: usize,
) -> MetricSpec {
    let old_dim = metric.dim();
    let extra = extra_minus + extra_plus;
    let mut names: Vec<String> = metric.table().names().map(str::to_string).collect();
    let mut counter = 1usize;
    for _ in 0..extra {
        loop {
            let candidate = format!("z{counter}");
            counter += 1;
            if !names.contains(&candidate) {
                names.push(candidate);
                break;
            }
        }
    }
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let table = VarTable::coordinates(&name_refs).expect("collision-free names");
    let dim = old_dim + extra;
    let mut g = PolyMatrix::zero(&table, dim);
    for i in 0..old_dim {
        for j in 0..old_dim {
            *g.get_mut(i, j) = metric.matrix().get(i, j).lift(&table).unwrap();
        }
    }
    for e in 0..extra {
        let sign = if e < extra_minus { -1 } else { 1 };
        *g.get_mut(old_dim + e, old_dim + e) =
            Polynomial::constant(&table, Rational::from_integer(sign.into()));
    }
    let mut base = metric.base_point().to_vec();
    base.extend(std::iter::repeat_n(Rational::zero(), extra));
    MetricSpec::from_matrix(table, g, Some(base)).expect("block sum keeps det constant")
}

/// Totally symmetric rational 2-form.
#[derive(Debug, Clone, PartialEq)]
pub struct Sym2 {
    dim: usize,
    vals: Vec<Rational>,
}

impl Sym2 {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self, FamilyError> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(FamilyError::FormNotSymmetric);
        }
        for i in 0..dim {
            for j in i + 1..dim {
                if rows[i][j] != rows[j][i] {
                    return Err(FamilyError::FormNotSymmetric);
                }
            }
        }
        Ok(Sym2 {
            dim,
            vals: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.vals[i * self.dim + j]
    }
}

/// Totally symmetric rational 3-form, built from its sorted-index entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Sym3 {
    dim: usize,
    vals: Vec<Rational>,
}

impl Sym3 {
    pub fn from_sorted_entries(dim: usize, mut entry: impl FnMut(usize, usize, usize) -> Rational) -> Self {
        let mut vals = vec![Rational::zero(); dim * dim * dim];
        for i in 0..dim {
            for j in i..dim {
                for k in j..dim {
                    let v = entry(i, j, k);
                    // Fill the whole orbit of (i,j,k).
                    for (a, b, c) in [
                        (i, j, k),
                        (i, k, j),
                        (j, i, k),
                        (j, k, i),
                        (k, i, j),
                        (k, j, i),
                    ] {
                        vals[(a * dim + b) * dim + c] = v.clone();
                    }
                }
            }
        }
        Sym3 { dim, vals }
    }

    pub fn zero(dim: usize) -> Self {
        Sym3 {
            dim,
            vals: vec![Rational::zero(); dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.vals[(i * self.dim + j) * self.dim + k]
    }
}

const CO: Variance = Variance::Covariant;

/// Algebraic curvature tensor of a symmetric 2-form:
/// `R_L(x1,x2,x3,x4) = L(x1,x4)L(x2,x3) - L(x1,x3)L(x2,x4)`.
pub fn make_rl(l: &Sym2) -> TensorField {
    let dim = l.dim();
    let table = VarTable::empty();
    let mut out = TensorField::zero(&table, dim, &[CO, CO, CO, CO]);
    for idx in out.indices() {
        let (i, j, k, m) = (idx[0], idx[1], idx[2], idx[3]);
        let value = l.get(i, m) * l.get(j, k) - l.get(i, k) * l.get(j, m);
        out.set(&idx, Polynomial::constant(&table, value));
    }
    out.with_symmetries(&[
        Symmetry::AntisymmetricPair(0, 1),
        Symmetry::AntisymmetricPair(2, 3),
        Symmetry::BlockExchange([0, 1], [2, 3]),
        Symmetry::CyclicVanishes(0, 1, 2),
    ])
}

/// Algebraic covariant-derivative curvature tensor of a pair (L, S):
/// `S(x1,x4,x5)L(x2,x3) + L(x1,x4)S(x2,x3,x5) - S(x1,x3,x5)L(x2,x4) - L(x1,x3)S(x2,x4,x5)`.
pub fn make_nabla_rls(l: &Sym2, s: &Sym3) -> TensorField {
    assert_eq!(l.dim(), s.dim(), "forms must share a dimension");
    let dim = l.dim();
    let table = VarTable::empty();
    let mut out = TensorField::zero(&table, dim, &[CO, CO, CO, CO, CO]);
    for idx in out.indices() {
        let (i, j, k, m, n) = (idx[0], idx[1], idx[2], idx[3], idx[4]);
        let value = s.get(i, m, n) * l.get(j, k) + l.get(i, m) * s.get(j, k, n)
            - s.get(i, k, n) * l.get(j, m)
            - l.get(i, k) * s.get(j, m, n);
        out.set(&idx, Polynomial::constant(&table, value));
    }
    out.with_symmetries(&[
        Symmetry::AntisymmetricPair(0, 1),
        Symmetry::AntisymmetricPair(2, 3),
        Symmetry::BlockExchange([0, 1], [2, 3]),
        Symmetry::CyclicVanishes(0, 1, 2),
        Symmetry::CyclicVanishes(2, 3, 4),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::poly_parse;
    use crate::curvature::{covariant_derivative_riemann, Curvature};
    use crate::operators::{nilpotency_order, szabo_operator};
    use crate::rational::{rat, rat_int};

    #[test]
    fn g2_matches_hand_built_metric() {
        let m = family_metric(FamilyKind::Szabo, 2).unwrap();
        let by_hand = MetricSpec::from_entries(
            &["x", "u", "v", "y"],
            &[((0, 0), "-1/3*u^3"), ((0, 3), "1"), ((1, 2), "1")],
        )
        .unwrap();
        assert_eq!(&m, &by_hand);
        assert_eq!(m.signature(), (2, 2));
    }

    #[test]
    fn family_dimensions_and_signatures() {
        for n in 2..=8 {
            for kind in [FamilyKind::Szabo, FamilyKind::Osserman] {
                let m = family_metric(kind, n).unwrap();
                assert_eq!(m.dim(), n + 2, "{} n={}", kind.name(), n);
                let p = n / 2;
                let expected = if n % 2 == 0 { (p + 1, p + 1) } else { (p + 1, p + 2) };
                assert_eq!(m.signature(), expected, "{} n={}", kind.name(), n);
            }
        }
        assert!(matches!(
            family_metric(FamilyKind::Szabo, 1),
            Err(FamilyError::OrderTooSmall(1))
        ));
    }

    #[test]
    fn order_five_metric_entry() {
        let m = family_metric(FamilyKind::Szabo, 5).unwrap();
        assert_eq!(
            m.coords(),
            vec!["x", "t", "u2", "u3", "v2", "v3", "y"]
        );
        let expected = poly_parse("-t*u2^2 - (u2+v2)*u3^2", m.table()).unwrap();
        assert_eq!(m.matrix().get(0, 0), &expected);
        assert_eq!(m.signature(), (3, 4));
    }

    #[test]
    fn order_four_metric_entry() {
        let m = family_metric(FamilyKind::Szabo, 4).unwrap();
        let expected = poly_parse("-(u1+v1)*u2^2 - 1/3*u1^3", m.table()).unwrap();
        assert_eq!(m.matrix().get(0, 0), &expected);
        assert_eq!(m.signature(), (3, 3));
    }

    #[test]
    fn osserman_examples() {
        let m2 = family_metric(FamilyKind::Osserman, 2).unwrap();
        assert_eq!(
            m2.matrix().get(0, 0),
            &poly_parse("-(u^2)", m2.table()).unwrap()
        );
        let m3 = family_metric(FamilyKind::Osserman, 3).unwrap();
        assert_eq!(
            m3.matrix().get(0, 0),
            &poly_parse("-2*t*u - u^2", m3.table()).unwrap()
        );
        let m6 = family_metric(FamilyKind::Osserman, 6).unwrap();
        assert_eq!(m6.signature(), (4, 4));
    }

    #[test]
    fn quadratic_families_are_locally_symmetric() {
        for n in 2..=6 {
            let m = family_metric(FamilyKind::Osserman, n).unwrap();
            assert!(covariant_derivative_riemann(&m).is_zero(), "n={n}");
        }
    }

    #[test]
    fn gf_constructor_reproduces_g2() {
        let mids = VarTable::coordinates(&["u", "v"]).unwrap();
        let f = poly_parse("-1/3*u^3", &mids).unwrap();
        let xi = vec![
            vec![rat_int(0), rat_int(1)],
            vec![rat_int(1), rat_int(0)],
        ];
        let m = gf_metric(&f, &xi).unwrap();
        assert_eq!(&m, &family_metric(FamilyKind::Szabo, 2).unwrap());
    }

    #[test]
    fn gf_zero_f_is_flat() {
        let mids = VarTable::coordinates(&["u"]).unwrap();
        let f = Polynomial::zero(&mids);
        let m = gf_metric(&f, &[vec![rat_int(1)]]).unwrap();
        assert!(crate::curvature::riemann(&m).is_zero());
    }

    #[test]
    fn gf_rejects_bad_input() {
        let mids = VarTable::coordinates(&["u", "v"]).unwrap();
        let f = poly_parse("u", &mids).unwrap();
        assert!(matches!(
            gf_metric(&f, &[vec![rat_int(0), rat_int(0)], vec![rat_int(0), rat_int(0)]]),
            Err(FamilyError::XiSingular)
        ));
        assert!(matches!(
            gf_metric(&f, &[vec![rat_int(1)]]),
            Err(FamilyError::ArityMismatch { .. })
        ));
        let bad = VarTable::coordinates(&["x"]).unwrap();
        let fx = poly_parse("x", &bad).unwrap();
        assert!(matches!(
            gf_metric(&fx, &[vec![rat_int(1)]]),
            Err(FamilyError::ReservedName)
        ));
    }

    #[test]
    fn gf_reproduces_order_three_metric() {
        let mids = VarTable::coordinates(&["t", "u", "v"]).unwrap();
        let f = poly_parse("-t*u^2", &mids).unwrap();
        let xi = vec![
            vec![rat_int(1), rat_int(0), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat_int(1)],
            vec![rat_int(0), rat_int(1), rat_int(0)],
        ];
        let m = gf_metric(&f, &xi).unwrap();
        assert_eq!(&m, &family_metric(FamilyKind::Szabo, 3).unwrap());
    }

    #[test]
    fn direct_sum_shifts_signature_only() {
        let g2 = family_metric(FamilyKind::Szabo, 2).unwrap();
        let summed = direct_sum_flat(&g2, 1, 1);
        assert_eq!(summed.dim(), 6);
        assert_eq!(summed.signature(), (3, 3));
        let curv = Curvature::compute(&summed);
        let op = szabo_operator(&curv);
        let verdict = nilpotency_order(&op, None, 0).unwrap();
        assert_eq!(verdict.report().unwrap().order, 2);

        let flat = MetricSpec::flat(&["a", "b"], 1).unwrap();
        let bigger_flat = direct_sum_flat(&flat, 2, 1);
        assert!(crate::curvature::riemann(&bigger_flat).is_zero());
        assert_eq!(bigger_flat.signature(), (3, 2));

        let same = direct_sum_flat(&g2, 0, 0);
        assert_eq!(&same, &g2);
    }

    #[test]
    fn direct_sum_preserves_other_operator_orders() {
        use crate::operators::{jacobi_operator, skew_curvature_operator};
        let base = family_metric(FamilyKind::Osserman, 3).unwrap();
        let summed = direct_sum_flat(&base, 2, 1);
        assert_eq!(summed.signature(), (4, 4));
        let curv = Curvature::compute(&summed);
        let jacobi = nilpotency_order(&jacobi_operator(&curv), None, 0).unwrap();
        assert_eq!(jacobi.report().unwrap().order, 3);
        let skew = nilpotency_order(&skew_curvature_operator(&curv), None, 0).unwrap();
        assert_eq!(skew.report().unwrap().order, 3);
    }

    #[test]
    fn rl_of_identity_is_constant_curvature() {
        let l = Sym2::new(vec![
            vec![rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(1)],
        ])
        .unwrap();
        let r = make_rl(&l);
        assert_eq!(r.get(&[1, 0, 0, 1]).as_constant(), Some(rat_int(1)));
        assert!(r.symmetries_hold());
    }

    #[test]
    fn rl_degenerate_cases() {
        // Rank-one L gives R_L = 0.
        let l = Sym2::new(vec![
            vec![rat_int(4), rat_int(2)],
            vec![rat_int(2), rat_int(1)],
        ])
        .unwrap();
        assert!(make_rl(&l).is_zero());
        let zero = Sym2::new(vec![vec![rat_int(0); 2]; 2]).unwrap();
        assert!(make_rl(&zero).is_zero());
        assert!(Sym2::new(vec![
            vec![rat_int(0), rat_int(1)],
            vec![rat_int(2), rat_int(0)],
        ])
        .is_err());
    }

    #[test]
    fn nabla_rls_reproduces_pipeline_for_cubic_f() {
        // L = delta_0 x delta_0 and S_{ijk} = -1/2 d_i d_j d_k f rebuild the
        // covariant derivative tensor of the cubic-f metric.
        let metric = family_metric(FamilyKind::Szabo, 2).unwrap();
        let nabla = crate::curvature::covariant_derivative_riemann(&metric);
        let dim = metric.dim();
        let f = metric.matrix().get(0, 0);
        let mut l_rows = vec![vec![Rational::zero(); dim]; dim];
        l_rows[0][0] = rat_int(1);
        let l = Sym2::new(l_rows).unwrap();
        let s = Sym3::from_sorted_entries(dim, |i, j, k| {
            f.diff_index(i)
                .diff_index(j)
                .diff_index(k)
                .as_constant()
                .expect("third derivatives of a cubic are constant")
                * rat(-1, 2)
        });
        let rebuilt = make_nabla_rls(&l, &s);
        for idx in nabla.indices() {
            assert_eq!(
                nabla.get(&idx).as_constant().unwrap(),
                rebuilt.get(&idx).as_constant().unwrap(),
                "component {idx:?}"
            );
        }
    }

    #[test]
    fn nabla_rls_vanishes_when_either_form_does() {
        let l = Sym2::new(vec![
            vec![rat_int(1), rat(1, 2)],
            vec![rat(1, 2), rat_int(3)],
        ])
        .unwrap();
        let s0 = Sym3::zero(2);
        assert!(make_nabla_rls(&l, &s0).is_zero());
        let s = Sym3::from_sorted_entries(2, |i, j, k| rat_int((i + j + k) as i64));
        let zero = Sym2::new(vec![vec![rat_int(0); 2]; 2]).unwrap();
        assert!(make_nabla_rls(&zero, &s).is_zero());
        assert!(make_nabla_rls(&l, &s).symmetries_hold());
    }
}
