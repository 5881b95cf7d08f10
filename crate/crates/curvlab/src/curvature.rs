//! The exact curvature pipeline for polynomial metrics.
//!
//! Everything is computed from the general coordinate formulas:
//!
//! ```text
//! Gamma_{ijk}   = (d_i g_{jk} + d_j g_{ik} - d_k g_{ij}) / 2
//! Gamma_{ij}^k  = sum_l g^{kl} Gamma_{ijl}
//! R_{ijkl}      = d_i Gamma_{jkl} - d_j Gamma_{ikl}
//!                 + sum_n (Gamma_{inl} Gamma_{jk}^n - Gamma_{jnl} Gamma_{ik}^n)
//! R_{ijkl;n}    = d_n R_{ijkl} - sum_p (Gamma_{ni}^p R_{pjkl} + Gamma_{nj}^p R_{ipkl}
//!                 + Gamma_{nk}^p R_{ijpl} + Gamma_{nl}^p R_{ijkp})
//! rho_{ij}      = sum_{kl} g^{kl} R_{iklj}
//! ```
//!
//! Every component is computed independently from its formula; the curvature
//! symmetries are checked by tests, never assumed to fill components.

use crate::metric::MetricSpec;
use crate::poly::Polynomial;
use crate::rational::Rational;
use crate::tensor::{Symmetry, TensorField, Variance};

const CO: Variance = Variance::Covariant;
const CONTRA: Variance = Variance::Contravariant;

/// Christoffel symbols of the first kind.
pub fn christoffel_first(metric: &MetricSpec) -> TensorField {
    let dim = metric.dim();
    let table = metric.table();
    let g = metric.matrix();
    let half = Rational::new(1.into(), 2.into());
    let mut out = TensorField::zero(table, dim, &[CO, CO, CO]);
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                let term = g
                    .get(j, k)
                    .diff_index(i)
                    .add_ref(&g.get(i, k).diff_index(j))
                    .sub_ref(&g.get(i, j).diff_index(k));
                out.set(&[i, j, k], term.scale(&half));
            }
        }
    }
    out.with_symmetries(&[Symmetry::SymmetricPair(0, 1)])
}

/// Christoffel symbols of the second kind (last slot raised).
pub fn christoffel_second(metric: &MetricSpec) -> TensorField {
    let first = christoffel_first(metric);
    christoffel_second_from(metric, &first)
}

fn christoffel_second_from(metric: &MetricSpec, first: &TensorField) -> TensorField {
    let dim = metric.dim();
    let g_inv = metric.inverse_matrix();
    let mut out = TensorField::zero(metric.table(), dim, &[CO, CO, CONTRA]);
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                let mut acc = Polynomial::zero(metric.table());
                for l in 0..dim {
                    let ginv = g_inv.get(k, l);
                    let gamma = first.get(&[i, j, l]);
                    if !ginv.is_zero() && !gamma.is_zero() {
                        acc = acc.add_ref(&ginv.mul_ref(gamma));
                    }
                }
                out.set(&[i, j, k], acc);
            }
        }
    }
    out.with_symmetries(&[Symmetry::SymmetricPair(0, 1)])
}

/// Riemann curvature tensor, all indices down.
pub fn riemann(metric: &MetricSpec) -> TensorField {
    let first = christoffel_first(metric);
    let second = christoffel_second_from(metric, &first);
    riemann_from(metric, &first, &second)
}

fn riemann_from(metric: &MetricSpec, first: &TensorField, second: &TensorField) -> TensorField {
    let dim = metric.dim();
    let mut out = TensorField::zero(metric.table(), dim, &[CO, CO, CO, CO]);
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                for l in 0..dim {
                    let mut acc = first
                        .get(&[j, k, l])
                        .diff_index(i)
                        .sub_ref(&first.get(&[i, k, l]).diff_index(j));
                    for n in 0..dim {
                        let a = first.get(&[i, n, l]);
                        let b = second.get(&[j, k, n]);
                        if !a.is_zero() && !b.is_zero() {
                            acc = acc.add_ref(&a.mul_ref(b));
                        }
                        let c = first.get(&[j, n, l]);
                        let d = second.get(&[i, k, n]);
                        if !c.is_zero() && !d.is_zero() {
                            acc = acc.sub_ref(&c.mul_ref(d));
                        }
                    }
                    out.set(&[i, j, k, l], acc);
                }
            }
        }
    }
    out.with_symmetries(&[
        Symmetry::AntisymmetricPair(0, 1),
        Symmetry::AntisymmetricPair(2, 3),
        Symmetry::BlockExchange([0, 1], [2, 3]),
        Symmetry::CyclicVanishes(0, 1, 2),
    ])
}

/// Covariant derivative of the curvature tensor, derivative slot last.
pub fn covariant_derivative_riemann(metric: &MetricSpec) -> TensorField {
    let first = christoffel_first(metric);
    let second = christoffel_second_from(metric, &first);
    let r = riemann_from(metric, &first, &second);
    nabla_riemann_from(metric, &second, &r)
}

fn nabla_riemann_from(
    metric: &MetricSpec,
    second: &TensorField,
    r: &TensorField,
) -> TensorField {
    let dim = metric.dim();
    let mut out = TensorField::zero(metric.table(), dim, &[CO, CO, CO, CO, CO]);
    for idx in TensorField::zero(metric.table(), dim, &[CO, CO, CO, CO, CO]).indices() {
        let (i, j, k, l, n) = (idx[0], idx[1], idx[2], idx[3], idx[4]);
        let mut acc = r.get(&[i, j, k, l]).diff_index(n);
        for p in 0..dim {
            for (gamma_idx, r_idx) in [
                ([n, i, p], [p, j, k, l]),
                ([n, j, p], [i, p, k, l]),
                ([n, k, p], [i, j, p, l]),
                ([n, l, p], [i, j, k, p]),
            ] {
                let gamma = second.get(&gamma_idx);
                if gamma.is_zero() {
                    continue;
                }
                let rcomp = r.get(&r_idx);
                if rcomp.is_zero() {
                    continue;
                }
                acc = acc.sub_ref(&gamma.mul_ref(rcomp));
            }
        }
        out.set(&idx, acc);
    }
    out.with_symmetries(&[
        Symmetry::AntisymmetricPair(0, 1),
        Symmetry::AntisymmetricPair(2, 3),
        Symmetry::BlockExchange([0, 1], [2, 3]),
        Symmetry::CyclicVanishes(0, 1, 2),
        Symmetry::CyclicVanishes(2, 3, 4),
    ])
}

/// Ricci tensor `rho_{ij} = sum_{kl} g^{kl} R_{iklj}`.
pub fn ricci_tensor(metric: &MetricSpec) -> TensorField {
    let r = riemann(metric);
    ricci_from(metric, &r)
}

fn ricci_from(metric: &MetricSpec, r: &TensorField) -> TensorField {
    let dim = metric.dim();
    let g_inv = metric.inverse_matrix();
    let mut out = TensorField::zero(metric.table(), dim, &[CO, CO]);
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = Polynomial::zero(metric.table());
            for k in 0..dim {
                for l in 0..dim {
                    let ginv = g_inv.get(k, l);
                    if ginv.is_zero() {
                        continue;
                    }
                    let rcomp = r.get(&[i, k, l, j]);
                    if rcomp.is_zero() {
                        continue;
                    }
                    acc = acc.add_ref(&ginv.mul_ref(rcomp));
                }
            }
            out.set(&[i, j], acc);
        }
    }
    out.with_symmetries(&[Symmetry::SymmetricPair(0, 1)])
}

/// Covariant derivative of the metric itself; identically zero exactly when
/// the connection is metric-compatible.
pub fn metric_compatibility_defect(metric: &MetricSpec) -> TensorField {
    let second = christoffel_second(metric);
    let dim = metric.dim();
    let g = metric.matrix();
    let mut out = TensorField::zero(metric.table(), dim, &[CO, CO, CO]);
    for i in 0..dim {
        for j in 0..dim {
            for n in 0..dim {
                let mut acc = g.get(i, j).diff_index(n);
                for p in 0..dim {
                    let a = second.get(&[n, i, p]);
                    if !a.is_zero() && !g.get(p, j).is_zero() {
                        acc = acc.sub_ref(&a.mul_ref(g.get(p, j)));
                    }
                    let b = second.get(&[n, j, p]);
                    if !b.is_zero() && !g.get(i, p).is_zero() {
                        acc = acc.sub_ref(&b.mul_ref(g.get(i, p)));
                    }
                }
                out.set(&[i, j, n], acc);
            }
        }
    }
    out
}

/// Second Bianchi defect `R_{ijkl;n} + R_{ijln;k} + R_{ijnk;l}` as a tensor;
/// identically zero for Levi-Civita curvature.
pub fn second_bianchi_defect(nabla_r: &TensorField) -> TensorField {
    let dim = nabla_r.dim();
    let mut out = TensorField::zero(nabla_r.table(), dim, &[CO, CO, CO, CO, CO]);
    for idx in out.indices() {
        let (i, j, k, l, n) = (idx[0], idx[1], idx[2], idx[3], idx[4]);
        let sum = nabla_r
            .get(&[i, j, k, l, n])
            .add_ref(nabla_r.get(&[i, j, l, n, k]))
            .add_ref(nabla_r.get(&[i, j, n, k, l]));
        out.set(&idx, sum);
    }
    out
}

/// The full pipeline output for one metric, computed once and shared.
#[derive(Debug, Clone)]
pub struct Curvature {
    metric: MetricSpec,
    pub gamma_first: TensorField,
    pub gamma_second: TensorField,
    pub riemann: TensorField,
    pub nabla_riemann: TensorField,
    pub ricci: TensorField,
}

impl Curvature {
    pub fn compute(metric: &MetricSpec) -> Curvature {
        let gamma_first = christoffel_first(metric);
        let gamma_second = christoffel_second_from(metric, &gamma_first);
        let riemann = riemann_from(metric, &gamma_first, &gamma_second);
        let nabla_riemann = nabla_riemann_from(metric, &gamma_second, &riemann);
        let ricci = ricci_from(metric, &riemann);
        Curvature {
            metric: metric.clone(),
            gamma_first,
            gamma_second,
            riemann,
            nabla_riemann,
            ricci,
        }
    }

    pub fn metric(&self) -> &MetricSpec {
        &self.metric
    }
}
