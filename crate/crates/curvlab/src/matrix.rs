//! Square polynomial matrices and exact rational linear algebra.
//!
//! Polynomial matrices carry the operator algebra (products, powers, traces);
//! the rational routines supply ranks and the congruence diagonalization used
//! for metric signatures.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use crate::poly::Polynomial;
use crate::rational::Rational;
use crate::vars::VarTable;

/// Dense square matrix of polynomials over one variable table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    table: VarTable,
    n: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zero(table: &VarTable, n: usize) -> Self {
        PolyMatrix {
            table: table.clone(),
            n,
            entries: vec![Polynomial::zero(table); n * n],
        }
    }

    pub fn identity(table: &VarTable, n: usize) -> Self {
        let mut m = PolyMatrix::zero(table, n);
        for i in 0..n {
            *m.get_mut(i, i) = Polynomial::one(table);
        }
        m
    }

    pub fn from_fn(table: &VarTable, n: usize, mut f: impl FnMut(usize, usize) -> Polynomial) -> Self {
        let mut m = PolyMatrix::zero(table, n);
        for i in 0..n {
            for j in 0..n {
                *m.get_mut(i, j) = f(i, j);
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &VarTable {
        &self.table
    }

    pub fn get(&self, row: usize, col: usize) -> &Polynomial {
        &self.entries[row * self.n + col]
    }

    pub fn get_mut(&mut self, row: usize, col: usize) -> &mut Polynomial {
        &mut self.entries[row * self.n + col]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> PolyMatrix {
        PolyMatrix::from_fn(&self.table, self.n, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.n, other.n);
        PolyMatrix::from_fn(&self.table, self.n, |i, j| {
            self.get(i, j).add_ref(other.get(i, j))
        })
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.n, other.n);
        PolyMatrix::from_fn(&self.table, self.n, |i, j| {
            self.get(i, j).sub_ref(other.get(i, j))
        })
    }

    pub fn neg(&self) -> PolyMatrix {
        PolyMatrix::from_fn(&self.table, self.n, |i, j| self.get(i, j).neg_ref())
    }

    pub fn scale(&self, factor: &Polynomial) -> PolyMatrix {
        PolyMatrix::from_fn(&self.table, self.n, |i, j| self.get(i, j).mul_ref(factor))
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        let mut out = PolyMatrix::zero(&self.table, self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..self.n {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.mul_ref(b);
                    let cell = out.get_mut(i, j);
                    *cell = cell.add_ref(&prod);
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Polynomial {
        let mut t = Polynomial::zero(&self.table);
        for i in 0..self.n {
            t = t.add_ref(self.get(i, i));
        }
        t
    }

    /// Apply the matrix to a column vector of polynomials.
    pub fn apply(&self, vector: &[Polynomial]) -> Vec<Polynomial> {
        assert_eq!(vector.len(), self.n);
        (0..self.n)
            .map(|i| {
                let mut acc = Polynomial::zero(&self.table);
                for j in 0..self.n {
                    if !self.get(i, j).is_zero() && !vector[j].is_zero() {
                        acc = acc.add_ref(&self.get(i, j).mul_ref(&vector[j]));
                    }
                }
                acc
            })
            .collect()
    }

    /// Re-express every entry over a larger table.
    pub fn lift(&self, target: &VarTable) -> PolyMatrix {
        PolyMatrix::from_fn(target, self.n, |i, j| {
            self.get(i, j)
                .lift(target)
                .expect("lift target must contain all matrix variables")
        })
    }

    pub fn map(&self, mut f: impl FnMut(&Polynomial) -> Polynomial) -> PolyMatrix {
        PolyMatrix::from_fn(&self.table, self.n, |i, j| f(self.get(i, j)))
    }

    /// Evaluate every entry at a full rational point.
    pub fn eval(&self, values: &[Rational]) -> Vec<Vec<Rational>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).eval(values)).collect())
            .collect()
    }

    /// Exact determinant by Laplace expansion with subset memoization.
    pub fn determinant(&self) -> Polynomial {
        let full_mask: u32 = if self.n == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        };
        let rows: Vec<usize> = (0..self.n).collect();
        let mut memo = HashMap::new();
        self.det_masked(&rows, 0, full_mask, &mut memo)
    }

    fn det_masked(
        &self,
        rows: &[usize],
        depth: usize,
        col_mask: u32,
        memo: &mut HashMap<(usize, u32), Polynomial>,
    ) -> Polynomial {
        if depth == rows.len() {
            return Polynomial::one(&self.table);
        }
        if let Some(p) = memo.get(&(depth, col_mask)) {
            return p.clone();
        }
        let row = rows[depth];
        let mut acc = Polynomial::zero(&self.table);
        let mut sign_positive = true;
        for col in 0..self.n {
            if col_mask & (1 << col) == 0 {
                continue;
            }
            let entry = self.get(row, col);
            if !entry.is_zero() {
                let minor = self.det_masked(rows, depth + 1, col_mask & !(1 << col), memo);
                let contribution = entry.mul_ref(&minor);
                acc = if sign_positive {
                    acc.add_ref(&contribution)
                } else {
                    acc.sub_ref(&contribution)
                };
            }
            sign_positive = !sign_positive;
        }
        memo.insert((depth, col_mask), acc.clone());
        acc
    }

    /// Exact inverse for matrices whose determinant is a nonzero constant:
    /// the adjugate divided by the determinant stays polynomial.
    pub fn inverse_constant_det(&self, det: &Rational) -> PolyMatrix {
        assert!(!det.is_zero());
        let inv_det = Rational::one() / det;
        let full_mask: u32 = if self.n == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        };
        let mut out = PolyMatrix::zero(&self.table, self.n);
        for i in 0..self.n {
            // Cofactors along row i feed column i of the inverse.
            let rows: Vec<usize> = (0..self.n).filter(|&r| r != i).collect();
            let mut memo = HashMap::new();
            for j in 0..self.n {
                let minor = self.det_masked(&rows, 0, full_mask & !(1 << j), &mut memo);
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                let cofactor = minor.scale(&(&inv_det * Rational::from_integer(sign.into())));
                *out.get_mut(j, i) = cofactor;
            }
        }
        out
    }
}

/// Rank of a rational matrix given as rows (not necessarily square).
pub fn rational_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot_row) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let pivot = rows[rank][col].clone();
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] / &pivot;
            for c in col..cols {
                let delta = &factor * &rows[rank][c];
                rows[r][c] = &rows[r][c] - &delta;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Sylvester signature of a symmetric rational matrix by congruence
/// diagonalization: returns (negative, positive, zero) inertia counts.
pub fn congruence_inertia(mut a: Vec<Vec<Rational>>) -> (usize, usize, usize) {
    let n = a.len();
    let (mut neg, mut pos, mut zero) = (0usize, 0usize, 0usize);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                // Swap variables k and j (rows and columns).
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // All remaining diagonal entries vanish; add variable j into k
                // to expose the hyperbolic pivot 2*a[k][j].
                for c in k..n {
                    let v = a[j][c].clone();
                    a[k][c] = &a[k][c] + &v;
                }
                for r in k..n {
                    let v = a[r][j].clone();
                    a[r][k] = &a[r][k] + &v;
                }
            } else {
                zero += 1;
                continue;
            }
        }
        let pivot = a[k][k].clone();
        if pivot.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        // Row eliminations below a symmetric pivot leave the symmetric Schur
        // complement in the trailing block.
        let pivot_row: Vec<Rational> = a[k][k..n].to_vec();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let factor = &a[i][k] / &pivot;
            for j in k..n {
                let delta = &factor * &pivot_row[j - k];
                a[i][j] = &a[i][j] - &delta;
            }
        }
    }
    (neg, pos, zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::poly_parse;
    use crate::rational::{rat, rat_int};

    fn table() -> VarTable {
        VarTable::coordinates(&["u", "v"]).unwrap()
    }

    #[test]
    fn determinant_of_polynomial_matrix() {
        let t = table();
        let m = PolyMatrix::from_fn(&t, 2, |i, j| match (i, j) {
            (0, 0) => poly_parse("u", &t).unwrap(),
            (0, 1) => poly_parse("1", &t).unwrap(),
            (1, 0) => poly_parse("1", &t).unwrap(),
            (1, 1) => poly_parse("v", &t).unwrap(),
        _ => unreachable!(),
        });
        assert_eq!(m.determinant(), poly_parse("u*v - 1", &t).unwrap());
    }

    #[test]
    fn inverse_with_constant_determinant() {
        let t = table();
        // [[f, 1], [1, 0]] has determinant -1 for any f.
        let m = PolyMatrix::from_fn(&t, 2, |i, j| match (i, j) {
            (0, 0) => poly_parse("-1/3*u^3", &t).unwrap(),
            (0, 1) | (1, 0) => Polynomial::one(&t),
            _ => Polynomial::zero(&t),
        });
        let det = m.determinant().as_constant().unwrap();
        assert_eq!(det, rat_int(-1));
        let inv = m.inverse_constant_det(&det);
        assert_eq!(m.mul(&inv), PolyMatrix::identity(&t, 2));
        assert_eq!(inv.mul(&m), PolyMatrix::identity(&t, 2));
        assert_eq!(inv.get(1, 1), &poly_parse("1/3*u^3", &t).unwrap());
    }

    #[test]
    fn inverse_of_non_symmetric_constant_matrix() {
        let t = VarTable::empty();
        let c = |v: i64| Polynomial::constant(&t, rat_int(v));
        let m = PolyMatrix::from_fn(&t, 2, |i, j| match (i, j) {
            (0, 0) => c(0),
            (0, 1) => c(1),
            (1, 0) => c(2),
            (1, 1) => c(3),
            _ => unreachable!(),
        });
        let det = m.determinant().as_constant().unwrap();
        assert_eq!(det, rat_int(-2));
        let inv = m.inverse_constant_det(&det);
        assert_eq!(m.mul(&inv), PolyMatrix::identity(&t, 2));
        assert_eq!(inv.mul(&m), PolyMatrix::identity(&t, 2));
        assert_eq!(inv.get(0, 0).as_constant().unwrap(), rat(-3, 2));
    }

    #[test]
    fn rank_of_rational_rows() {
        let rows = vec![
            vec![rat_int(1), rat_int(2), rat_int(3)],
            vec![rat_int(2), rat_int(4), rat_int(6)],
            vec![rat_int(0), rat_int(1), rat_int(1)],
        ];
        assert_eq!(rational_rank(rows), 2);
        assert_eq!(rational_rank(vec![vec![rat_int(0); 3]; 2]), 0);
    }

    #[test]
    fn inertia_of_hyperbolic_pair() {
        // Antidiagonal pair has signature (1,1).
        let a = vec![
            vec![rat_int(0), rat_int(1)],
            vec![rat_int(1), rat_int(0)],
        ];
        assert_eq!(congruence_inertia(a), (1, 1, 0));
        let d = vec![
            vec![rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(-1)],
        ];
        assert_eq!(congruence_inertia(d), (1, 1, 0));
        let degenerate = vec![
            vec![rat_int(0), rat_int(0)],
            vec![rat_int(0), rat(5, 2)],
        ];
        assert_eq!(congruence_inertia(degenerate), (0, 1, 1));
    }
}
