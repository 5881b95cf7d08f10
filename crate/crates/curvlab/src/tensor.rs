//! Dense multi-indexed tensor fields with polynomial components.

use crate::poly::Polynomial;
use crate::vars::VarTable;

/// Index variance of one tensor slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variance {
    Covariant,
    Contravariant,
}

/// Declared component symmetries, checkable exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    /// T[.. i .. j ..] = T[.. j .. i ..] for the two named slots.
    SymmetricPair(usize, usize),
    /// T[.. i .. j ..] = -T[.. j .. i ..].
    AntisymmetricPair(usize, usize),
    /// Exchange of two index blocks: T[a b ..] = T[b a ..].
    BlockExchange([usize; 2], [usize; 2]),
    /// Cyclic sum over three slots vanishes (Bianchi-type identity).
    CyclicVanishes(usize, usize, usize),
}

/// Multi-indexed array of polynomials: `dim^rank` components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorField {
    table: VarTable,
    dim: usize,
    rank: usize,
    variance: Vec<Variance>,
    symmetries: Vec<Symmetry>,
    components: Vec<Polynomial>,
}

impl TensorField {
    pub fn zero(table: &VarTable, dim: usize, variance: &[Variance]) -> Self {
        let rank = variance.len();
        let size = dim.pow(rank as u32);
        TensorField {
            table: table.clone(),
            dim,
            rank,
            variance: variance.to_vec(),
            symmetries: Vec::new(),
            components: vec![Polynomial::zero(table); size],
        }
    }

    pub fn with_symmetries(mut self, symmetries: &[Symmetry]) -> Self {
        self.symmetries = symmetries.to_vec();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn table(&self) -> &VarTable {
        &self.table
    }

    pub fn variance(&self) -> &[Variance] {
        &self.variance
    }

    pub fn symmetries(&self) -> &[Symmetry] {
        &self.symmetries
    }

    fn flat(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.rank);
        let mut flat = 0;
        for &i in index {
            debug_assert!(i < self.dim);
            flat = flat * self.dim + i;
        }
        flat
    }

    pub fn get(&self, index: &[usize]) -> &Polynomial {
        &self.components[self.flat(index)]
    }

    pub fn set(&mut self, index: &[usize], value: Polynomial) {
        let flat = self.flat(index);
        self.components[flat] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    /// All multi-indices in row-major order.
    pub fn indices(&self) -> MultiIndexIter {
        MultiIndexIter::new(self.dim, self.rank)
    }

    pub fn add(&self, other: &TensorField) -> TensorField {
        assert_eq!(self.dim, other.dim);
        assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for (c, o) in out.components.iter_mut().zip(other.components.iter()) {
            *c = c.add_ref(o);
        }
        out.symmetries.clear();
        out
    }

    pub fn sub(&self, other: &TensorField) -> TensorField {
        assert_eq!(self.dim, other.dim);
        assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for (c, o) in out.components.iter_mut().zip(other.components.iter()) {
            *c = c.sub_ref(o);
        }
        out.symmetries.clear();
        out
    }

    /// Verify every declared symmetry as an exact identity.
    pub fn symmetries_hold(&self) -> bool {
        self.symmetries
            .iter()
            .all(|s| self.symmetry_holds(s))
    }

    pub fn symmetry_holds(&self, symmetry: &Symmetry) -> bool {
        match symmetry {
            Symmetry::SymmetricPair(a, b) => self.indices().all(|idx| {
                let mut swapped = idx.clone();
                swapped.swap(*a, *b);
                self.get(&idx) == self.get(&swapped)
            }),
            Symmetry::AntisymmetricPair(a, b) => self.indices().all(|idx| {
                let mut swapped = idx.clone();
                swapped.swap(*a, *b);
                *self.get(&idx) == self.get(&swapped).neg_ref()
            }),
            Symmetry::BlockExchange(first, second) => self.indices().all(|idx| {
                let mut swapped = idx.clone();
                swapped.swap(first[0], second[0]);
                swapped.swap(first[1], second[1]);
                self.get(&idx) == self.get(&swapped)
            }),
            Symmetry::CyclicVanishes(a, b, c) => self.indices().all(|idx| {
                let mut rot1 = idx.clone();
                rot1[*a] = idx[*b];
                rot1[*b] = idx[*c];
                rot1[*c] = idx[*a];
                let mut rot2 = idx.clone();
                rot2[*a] = idx[*c];
                rot2[*b] = idx[*a];
                rot2[*c] = idx[*b];
                self.get(&idx)
                    .add_ref(self.get(&rot1))
                    .add_ref(self.get(&rot2))
                    .is_zero()
            }),
        }
    }
}

pub struct MultiIndexIter {
    dim: usize,
    rank: usize,
    next: Option<Vec<usize>>,
}

impl MultiIndexIter {
    pub fn new(dim: usize, rank: usize) -> Self {
        let next = if dim == 0 && rank > 0 {
            None
        } else {
            Some(vec![0; rank])
        };
        MultiIndexIter { dim, rank, next }
    }
}

impl Iterator for MultiIndexIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.clone()?;
        // Odometer increment from the last slot.
        let mut bumped = current.clone();
        let mut slot = self.rank;
        loop {
            if slot == 0 {
                self.next = None;
                break;
            }
            slot -= 1;
            bumped[slot] += 1;
            if bumped[slot] < self.dim {
                self.next = Some(bumped);
                break;
            }
            bumped[slot] = 0;
        }
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    #[test]
    fn index_iteration_is_row_major() {
        let all: Vec<Vec<usize>> = MultiIndexIter::new(2, 2).collect();
        assert_eq!(
            all,
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        assert_eq!(MultiIndexIter::new(3, 4).count(), 81);
        assert_eq!(MultiIndexIter::new(2, 0).count(), 1);
    }

    #[test]
    fn symmetry_checks() {
        let table = VarTable::empty();
        let mut t = TensorField::zero(&table, 2, &[Variance::Covariant, Variance::Covariant]);
        t.set(&[0, 1], Polynomial::constant(&table, rat_int(3)));
        t.set(&[1, 0], Polynomial::constant(&table, rat_int(-3)));
        assert!(t.symmetry_holds(&Symmetry::AntisymmetricPair(0, 1)));
        assert!(!t.symmetry_holds(&Symmetry::SymmetricPair(0, 1)));
    }
}
