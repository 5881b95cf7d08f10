//! Expected signatures and nilpotency orders for each family/operator pair.

use curvlab::{FamilyKind, OperatorKind};

/// What the verified result must satisfy for an exit code of zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderClaim {
    Exactly(usize),
    AtMost(usize),
    Nilpotent,
    /// No stated order for this combination; the report is informational.
    Unconstrained,
}

impl OrderClaim {
    pub fn describe(&self) -> String {
        match self {
            OrderClaim::Exactly(n) => format!("exactly {n}"),
            OrderClaim::AtMost(n) => format!("at most {n}"),
            OrderClaim::Nilpotent => "nilpotent".into(),
            OrderClaim::Unconstrained => "none".into(),
        }
    }

    pub fn matched(&self, order: Option<usize>) -> bool {
        match (self, order) {
            (OrderClaim::Exactly(n), Some(o)) => o == *n,
            (OrderClaim::AtMost(n), Some(o)) => o <= *n,
            (OrderClaim::Nilpotent, Some(_)) => true,
            (OrderClaim::Unconstrained, _) => true,
            (_, None) => false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Claim {
    pub signature: Option<(usize, usize)>,
    pub order: OrderClaim,
}

/// Signature claimed for the order-n families: (p+1, p+1) when n = 2p and
/// (p+1, p+2) when n = 2p+1.
pub fn family_signature(n: usize) -> (usize, usize) {
    let p = n / 2;
    if n % 2 == 0 {
        (p + 1, p + 1)
    } else {
        (p + 1, p + 2)
    }
}

/// The claim checked by `verify` for a named family. `at_origin` is `Some`
/// when a coordinate point was supplied, telling whether it is the origin;
/// away from the origin the generic-point order is expected.
pub fn claim_for_family(
    kind: FamilyKind,
    n: usize,
    operator: OperatorKind,
    at_origin: Option<bool>,
) -> Claim {
    let signature = Some(family_signature(n));
    let pointwise_order = |base: usize| match at_origin {
        Some(true) => OrderClaim::Exactly(1),
        _ => OrderClaim::Exactly(base),
    };
    let order = match (kind, operator) {
        (FamilyKind::Szabo, OperatorKind::Szabo) => OrderClaim::Exactly(n),
        (FamilyKind::Osserman, OperatorKind::Jacobi) => OrderClaim::Exactly(n),
        // Quadratic f makes nabla R vanish: the Szabo operator is zero.
        (FamilyKind::Osserman, OperatorKind::Szabo) => OrderClaim::Exactly(1),
        (FamilyKind::Osserman, OperatorKind::SkewCurvature) => {
            OrderClaim::Exactly(if n == 2 { 2 } else { 3 })
        }
        (FamilyKind::Osserman, OperatorKind::HigherJacobi) => OrderClaim::AtMost(n),
        (FamilyKind::PointwiseSzabo, OperatorKind::Szabo) => pointwise_order(n),
        (FamilyKind::PointwiseOsserman, OperatorKind::Jacobi) => pointwise_order(n),
        (_, OperatorKind::Ricci) => OrderClaim::AtMost(2),
        _ => OrderClaim::Nilpotent,
    };
    Claim { signature, order }
}

/// The claim for a user-supplied `g_f` metric: only the Ricci-operator
/// statement holds unconditionally.
pub fn claim_for_gf(operator: OperatorKind) -> Claim {
    let order = match operator {
        OperatorKind::Ricci => OrderClaim::AtMost(2),
        _ => OrderClaim::Unconstrained,
    };
    Claim {
        signature: None,
        order,
    }
}
