//! Pseudo-Riemannian metric specifications.
//!
//! A [`MetricSpec`] is a symmetric matrix of polynomials over a coordinate
//! table whose determinant is a nonzero constant, so the inverse metric is
//! again polynomial and the signature is the same at every point. The exact
//! inverse and the signature are computed at construction.

use num_traits::Zero;
use thiserror::Error;

use crate::matrix::{congruence_inertia, PolyMatrix};
use crate::parse::{poly_parse, ParseError};
use crate::poly::Polynomial;
use crate::rational::Rational;
use crate::tensor::{TensorField, Variance};
use crate::vars::{VarRole, VarTable, VarTableError};

#[derive(Debug, Error)]
pub enum MetricError {
    #[error(transparent)]
    VarTable(#[from] VarTableError),
    #[error("metric entry parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("metric matrix is not symmetric at entry ({0},{1})")]
    NotSymmetric(usize, usize),
    #[error("metric determinant is zero: the metric is degenerate")]
    DegenerateMetric,
    #[error("metric determinant `{0}` is not constant; the inverse would not be polynomial")]
    NonConstantDeterminant(String),
    #[error("metric entries use non-coordinate variables")]
    NonCoordinateEntries,
    #[error("base point has {got} components, expected {expected}")]
    BasePointArity { got: usize, expected: usize },
    #[error("entry index ({0},{1}) out of range for dimension {2}")]
    IndexOutOfRange(usize, usize, usize),
    #[error("dimension {0} exceeds the supported maximum of {MAX_DIM}")]
    DimensionTooLarge(usize),
}

/// Exact determinants and adjugates enumerate column subsets, so dimensions
/// are capped well below the mask width.
pub const MAX_DIM: usize = 16;

/// A polynomial metric with constant nonzero determinant.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpec {
    table: VarTable,
    dim: usize,
    g: PolyMatrix,
    g_inv: PolyMatrix,
    det: Rational,
    signature: (usize, usize),
    base_point: Vec<Rational>,
}

impl MetricSpec {
    /// Build a metric from its component matrix over a coordinate table.
    pub fn from_matrix(
        table: VarTable,
        g: PolyMatrix,
        base_point: Option<Vec<Rational>>,
    ) -> Result<Self, MetricError> {
        let dim = table.len();
        assert_eq!(g.size(), dim, "metric matrix size must match coordinates");
        if dim > MAX_DIM {
            return Err(MetricError::DimensionTooLarge(dim));
        }
        if (0..dim).any(|i| table.role(i) != VarRole::Coordinate) {
            return Err(MetricError::NonCoordinateEntries);
        }
        for i in 0..dim {
            for j in i + 1..dim {
                if g.get(i, j) != g.get(j, i) {
                    return Err(MetricError::NotSymmetric(i, j));
                }
            }
        }
        let det_poly = g.determinant();
        let det = match det_poly.as_constant() {
            Some(c) => c,
            None => return Err(MetricError::NonConstantDeterminant(det_poly.render())),
        };
        if det.is_zero() {
            return Err(MetricError::DegenerateMetric);
        }
        let base_point = match base_point {
            Some(p) => {
                if p.len() != dim {
                    return Err(MetricError::BasePointArity {
                        got: p.len(),
                        expected: dim,
                    });
                }
                p
            }
            None => vec![Rational::zero(); dim],
        };
        let g_inv = g.inverse_constant_det(&det);
        debug_assert_eq!(g.mul(&g_inv), PolyMatrix::identity(&table, dim));
        let at_base = g.eval(&base_point);
        let (neg, pos, zero) = congruence_inertia(at_base);
        debug_assert_eq!(zero, 0, "constant nonzero determinant precludes degeneracy");
        debug_assert_eq!(neg + pos, dim);
        Ok(MetricSpec {
            table,
            dim,
            g,
            g_inv,
            det,
            signature: (neg, pos),
            base_point,
        })
    }

    /// Convenience constructor: coordinates plus `((i, j), expr)` entries with
    /// `i <= j`; unspecified entries are zero and the symmetric entry is
    /// auto-filled.
    pub fn from_entries(
        coords: &[&str],
        entries: &[((usize, usize), &str)],
    ) -> Result<Self, MetricError> {
        let table = VarTable::coordinates(coords)?;
        let dim = table.len();
        let mut g = PolyMatrix::zero(&table, dim);
        for ((i, j), expr) in entries {
            if *i >= dim || *j >= dim {
                return Err(MetricError::IndexOutOfRange(*i, *j, dim));
            }
            let p = poly_parse(expr, &table)?;
            *g.get_mut(*i, *j) = p.clone();
            if i != j {
                *g.get_mut(*j, *i) = p;
            }
        }
        MetricSpec::from_matrix(table, g, None)
    }

    /// Flat metric with `minus` entries of -1 followed by `plus` entries of +1.
    pub fn flat(coords: &[&str], minus: usize) -> Result<Self, MetricError> {
        let table = VarTable::coordinates(coords)?;
        let dim = table.len();
        assert!(minus <= dim);
        let mut g = PolyMatrix::zero(&table, dim);
        for i in 0..dim {
            let sign = if i < minus { -1 } else { 1 };
            *g.get_mut(i, i) = Polynomial::constant(&table, Rational::from_integer(sign.into()));
        }
        MetricSpec::from_matrix(table, g, None)
    }

    pub fn with_base_point(mut self, base_point: Vec<Rational>) -> Result<Self, MetricError> {
        if base_point.len() != self.dim {
            return Err(MetricError::BasePointArity {
                got: base_point.len(),
                expected: self.dim,
            });
        }
        let at_base = self.g.eval(&base_point);
        let (neg, pos, _zero) = congruence_inertia(at_base);
        self.signature = (neg, pos);
        self.base_point = base_point;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn table(&self) -> &VarTable {
        &self.table
    }

    pub fn coords(&self) -> Vec<&str> {
        self.table.names().collect()
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.g
    }

    pub fn inverse_matrix(&self) -> &PolyMatrix {
        &self.g_inv
    }

    pub fn determinant(&self) -> &Rational {
        &self.det
    }

    /// Signature as (count of -1, count of +1) after congruence
    /// diagonalization at the base point.
    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn base_point(&self) -> &[Rational] {
        &self.base_point
    }

    /// The inverse metric as a rank-2 contravariant tensor field.
    pub fn inverse_metric(&self) -> TensorField {
        let mut t = TensorField::zero(
            &self.table,
            self.dim,
            &[Variance::Contravariant, Variance::Contravariant],
        );
        for i in 0..self.dim {
            for j in 0..self.dim {
                t.set(&[i, j], self.g_inv.get(i, j).clone());
            }
        }
        t
    }

    /// The metric as a rank-2 covariant tensor field.
    pub fn metric_tensor(&self) -> TensorField {
        let mut t = TensorField::zero(
            &self.table,
            self.dim,
            &[Variance::Covariant, Variance::Covariant],
        );
        for i in 0..self.dim {
            for j in 0..self.dim {
                t.set(&[i, j], self.g.get(i, j).clone());
            }
        }
        t
    }

    /// Serialize to the metric text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("dim = {}\n", self.dim));
        out.push_str(&format!("coords = {}\n", self.coords().join(",")));
        for i in 0..self.dim {
            for j in i..self.dim {
                let entry = self.g.get(i, j);
                if !entry.is_zero() {
                    out.push_str(&format!("g[{}][{}] = {}\n", i, j, entry.render()));
                }
            }
        }
        out
    }
}
