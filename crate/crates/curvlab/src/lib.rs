//! Exact symbolic curvature laboratory.
//!
//! The crate builds polynomial pseudo-Riemannian metrics over named
//! coordinates, computes Christoffel symbols, the curvature tensor, its
//! covariant derivative and the Ricci tensor exactly over the rationals, and
//! assembles the Szabo, Jacobi, skew-symmetric curvature, higher-order Jacobi
//! and Ricci operators in formal direction variables. Nilpotency orders and
//! metric signatures are decided as exact polynomial identities: there are no
//! floating-point numbers and no tolerances anywhere.
//!
//! Layout:
//!
//! - [`vars`], [`rational`], [`poly`], [`parse`]: the exact arithmetic core
//!   (role-tagged variable tables, sparse rational polynomials, expression
//!   parsing).
//! - [`matrix`], [`tensor`]: polynomial matrices and multi-indexed fields.
//! - [`metric`], [`metric_text`], [`curvature`]: metric validation (constant
//!   determinant, exact inverse, signature) and the tensor pipeline.
//! - [`operators`]: the curvature operators, nilpotency decisions, spectrum
//!   checks, witnesses and ranks.
//! - [`families`], [`span`]: the metric families under study, algebraic
//!   tensors from symmetric forms, flat products, and span-dimension checks.

pub mod curvature;
pub mod families;
pub mod matrix;
pub mod metric;
pub mod metric_text;
pub mod operators;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod rng;
pub mod span;
pub mod tensor;
pub mod vars;

pub use curvature::{
    christoffel_first, christoffel_second, covariant_derivative_riemann,
    metric_compatibility_defect, ricci_tensor, riemann, second_bianchi_defect, Curvature,
};
pub use families::{
    direct_sum_flat, family_metric, gf_metric, make_nabla_rls, make_rl, FamilyError, FamilyKind,
    Sym2, Sym3,
};
pub use matrix::{congruence_inertia, rational_rank, PolyMatrix};
pub use metric::{MetricError, MetricSpec, MAX_DIM};
pub use metric_text::{parse_metric_text, MetricTextError};
pub use operators::{
    apply_to_own_direction, characteristic_checks, direction_scaling_is_homogeneous,
    higher_order_jacobi, jacobi_operator, jacobi_trace_defect, nilpotency_order, rank_at_point,
    ricci_operator, sampled_subspace_jacobi_vanishes, self_adjointness_defect,
    skew_adjointness_defect, skew_curvature_operator, szabo_operator, DirectionVector,
    NilpotencyReport, NilpotencyVerdict, OperatorError, OperatorKind, OperatorMatrix, RankSample,
    Sign, SpectrumCheck,
};
pub use parse::{poly_parse, ParseError};
pub use poly::{Binding, Monomial, PolyError, Polynomial};
pub use rational::{parse_rational, rat, rat_int, Rational};
pub use rng::SplitMix64;
pub use span::{
    curvature_constraint_dim, curvature_span_check, nabla_constraint_dim, nabla_span_check,
    SpanCheck,
};
pub use tensor::{Symmetry, TensorField, Variance};
pub use vars::{VarRole, VarTable, VarTableError};
