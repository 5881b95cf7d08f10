//! Span-dimension checks: do tensors built from symmetric forms generate
//! the full constraint space?
//!
//! The constraint space (all tensors with the curvature symmetries, plus the
//! second Bianchi identity in the rank-5 case) is cut out by an explicit
//! linear system and solved exactly; random integer forms then have to span
//! it. Failure to reach the full span is reported as insufficient sampling,
//! never as refutation.

use num_traits::Zero;

use crate::families::{make_nabla_rls, make_rl, Sym2, Sym3};
use crate::matrix::rational_rank;
use crate::rational::Rational;
use crate::rng::SplitMix64;

/// Outcome of one span check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpanCheck {
    pub observed: usize,
    pub expected: usize,
    pub samples: usize,
    pub seed: u64,
}

impl SpanCheck {
    pub fn passed(&self) -> bool {
        self.observed == self.expected
    }

    /// True when the span fell short, which only means more samples needed.
    pub fn insufficient(&self) -> bool {
        self.observed < self.expected
    }
}

fn flat4(m: usize, i: usize, j: usize, k: usize, l: usize) -> usize {
    ((i * m + j) * m + k) * m + l
}

fn flat5(m: usize, i: usize, j: usize, k: usize, l: usize, n: usize) -> usize {
    (((i * m + j) * m + k) * m + l) * m + n
}

/// Dimension of the space of algebraic curvature tensors on `R^m`, from the
/// symmetry constraint system by exact rank computation.
pub fn curvature_constraint_dim(m: usize) -> usize {
    let unknowns = m.pow(4);
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut push = |entries: &[(usize, i64)]| {
        let mut row = vec![Rational::zero(); unknowns];
        let mut nonzero = false;
        for (col, c) in entries {
            row[*col] = &row[*col] + &Rational::from_integer((*c).into());
        }
        for v in &row {
            if !v.is_zero() {
                nonzero = true;
                break;
            }
        }
        if nonzero {
            rows.push(row);
        }
    };
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    push(&[(flat4(m, i, j, k, l), 1), (flat4(m, j, i, k, l), 1)]);
                    push(&[(flat4(m, i, j, k, l), 1), (flat4(m, i, j, l, k), 1)]);
                    push(&[(flat4(m, i, j, k, l), 1), (flat4(m, k, l, i, j), -1)]);
                    push(&[
                        (flat4(m, i, j, k, l), 1),
                        (flat4(m, j, k, i, l), 1),
                        (flat4(m, k, i, j, l), 1),
                    ]);
                }
            }
        }
    }
    unknowns - rational_rank(rows)
}

/// Dimension of the space of algebraic covariant-derivative curvature
/// tensors on `R^m` (curvature symmetries in the first four slots plus the
/// second Bianchi identity in the last three).
pub fn nabla_constraint_dim(m: usize) -> usize {
    let unknowns = m.pow(5);
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut push = |entries: &[(usize, i64)]| {
        let mut row = vec![Rational::zero(); unknowns];
        for (col, c) in entries {
            row[*col] = &row[*col] + &Rational::from_integer((*c).into());
        }
        if row.iter().any(|v| !v.is_zero()) {
            rows.push(row);
        }
    };
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    for n in 0..m {
                        push(&[(flat5(m, i, j, k, l, n), 1), (flat5(m, j, i, k, l, n), 1)]);
                        push(&[(flat5(m, i, j, k, l, n), 1), (flat5(m, i, j, l, k, n), 1)]);
                        push(&[(flat5(m, i, j, k, l, n), 1), (flat5(m, k, l, i, j, n), -1)]);
                        push(&[
                            (flat5(m, i, j, k, l, n), 1),
                            (flat5(m, j, k, i, l, n), 1),
                            (flat5(m, k, i, j, l, n), 1),
                        ]);
                        push(&[
                            (flat5(m, i, j, k, l, n), 1),
                            (flat5(m, i, j, l, n, k), 1),
                            (flat5(m, i, j, n, k, l), 1),
                        ]);
                    }
                }
            }
        }
    }
    unknowns - rational_rank(rows)
}

fn random_sym2(rng: &mut SplitMix64, m: usize) -> Sym2 {
    let mut rows = vec![vec![Rational::zero(); m]; m];
    for i in 0..m {
        for j in i..m {
            let v = Rational::from_integer(rng.int_in(-4, 4).into());
            rows[i][j] = v.clone();
            rows[j][i] = v;
        }
    }
    Sym2::new(rows).expect("constructed symmetric")
}

fn random_sym3(rng: &mut SplitMix64, m: usize) -> Sym3 {
    Sym3::from_sorted_entries(m, |_, _, _| Rational::from_integer(rng.int_in(-4, 4).into()))
}

/// Span of `count` random `R_L` tensors against the curvature constraint
/// space on `R^m`.
pub fn curvature_span_check(m: usize, count: usize, seed: u64) -> SpanCheck {
    let expected = curvature_constraint_dim(m);
    let mut rng = SplitMix64::new(seed);
    let rows: Vec<Vec<Rational>> = (0..count)
        .map(|_| {
            let l = random_sym2(&mut rng, m);
            make_rl(&l)
                .components()
                .iter()
                .map(|p| p.as_constant().expect("constant components"))
                .collect()
        })
        .collect();
    SpanCheck {
        observed: rational_rank(rows),
        expected,
        samples: count,
        seed,
    }
}

/// Span of `count` random `nabla R_{L,S}` tensors against the constraint
/// space on `R^m`.
pub fn nabla_span_check(m: usize, count: usize, seed: u64) -> SpanCheck {
    let expected = nabla_constraint_dim(m);
    let mut rng = SplitMix64::new(seed);
    let rows: Vec<Vec<Rational>> = (0..count)
        .map(|_| {
            let l = random_sym2(&mut rng, m);
            let s = random_sym3(&mut rng, m);
            make_nabla_rls(&l, &s)
                .components()
                .iter()
                .map(|p| p.as_constant().expect("constant components"))
                .collect()
        })
        .collect();
    SpanCheck {
        observed: rational_rank(rows),
        expected,
        samples: count,
        seed,
    }
}
