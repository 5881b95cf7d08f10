//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A polynomial is a map from exponent vectors to nonzero coefficients over a
//! fixed [`VarTable`]. The map is kept in graded-lexicographic order, so two
//! polynomials are equal exactly when they denote the same function and the
//! printed form is deterministic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::Rational;
use crate::vars::VarTable;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
}

/// Exponent vector, one entry per table variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn constant(n_vars: usize) -> Self {
        Monomial(vec![0; n_vars].into_boxed_slice())
    }

    pub fn var(n_vars: usize, index: usize) -> Self {
        let mut exps = vec![0; n_vars];
        exps[index] = 1;
        Monomial(exps.into_boxed_slice())
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.0[index]
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }
}

// Graded lexicographic: total degree first, earlier variables break ties.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A value to substitute for a variable.
#[derive(Debug, Clone)]
pub enum Binding {
    Value(Rational),
    Poly(Polynomial),
}

/// Sparse multivariate polynomial over a fixed variable table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    table: VarTable,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(table: &VarTable) -> Self {
        Polynomial {
            table: table.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(table: &VarTable) -> Self {
        Polynomial::constant(table, Rational::one())
    }

    pub fn constant(table: &VarTable, value: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(Monomial::constant(table.len()), value);
        }
        Polynomial {
            table: table.clone(),
            terms,
        }
    }

    /// The variable at `index` as a polynomial.
    pub fn var(table: &VarTable, index: usize) -> Self {
        assert!(index < table.len(), "variable index out of range");
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(table.len(), index), Rational::one());
        Polynomial {
            table: table.clone(),
            terms,
        }
    }

    pub fn var_named(table: &VarTable, name: &str) -> Result<Self, PolyError> {
        let index = table
            .position(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        Ok(Polynomial::var(table, index))
    }

    pub fn table(&self) -> &VarTable {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// The value as a rational if no variable occurs.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.terms.len() == 1 {
            let (mono, coeff) = self.terms.iter().next().unwrap();
            if mono.is_constant() {
                return Some(coeff.clone());
            }
        }
        None
    }

    fn assert_same_table(&self, other: &Polynomial) {
        assert!(
            self.table == other.table,
            "mismatched variable tables: {} vs {}",
            self.table,
            other.table
        );
    }

    fn add_term(&mut self, mono: Monomial, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_ref(&self, other: &Polynomial) -> Polynomial {
        self.assert_same_table(other);
        let mut out = self.clone();
        for (mono, coeff) in &other.terms {
            out.add_term(mono.clone(), coeff.clone());
        }
        out
    }

    pub fn sub_ref(&self, other: &Polynomial) -> Polynomial {
        self.assert_same_table(other);
        let mut out = self.clone();
        for (mono, coeff) in &other.terms {
            out.add_term(mono.clone(), -coeff);
        }
        out
    }

    pub fn mul_ref(&self, other: &Polynomial) -> Polynomial {
        self.assert_same_table(other);
        let mut out = Polynomial::zero(&self.table);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn neg_ref(&self) -> Polynomial {
        Polynomial {
            table: self.table.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c))
                .collect(),
        }
    }

    pub fn scale(&self, factor: &Rational) -> Polynomial {
        if factor.is_zero() {
            return Polynomial::zero(&self.table);
        }
        Polynomial {
            table: self.table.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Polynomial {
        let mut result = Polynomial::one(&self.table);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        result
    }

    /// Exact partial derivative with respect to a named variable.
    pub fn diff(&self, var: &str) -> Result<Polynomial, PolyError> {
        let index = self
            .table
            .position(var)
            .ok_or_else(|| PolyError::UnknownVariable(var.to_string()))?;
        Ok(self.diff_index(index))
    }

    pub fn diff_index(&self, index: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.table);
        for (mono, coeff) in &self.terms {
            let e = mono.exponent(index);
            if e == 0 {
                continue;
            }
            let mut exps = mono.exponents().to_vec();
            exps[index] = e - 1;
            out.add_term(
                Monomial(exps.into_boxed_slice()),
                coeff * Rational::from_integer(e.into()),
            );
        }
        out
    }

    /// Simultaneous substitution. Bound variables are replaced, unbound ones
    /// survive; polynomial bindings must live over the same table.
    pub fn substitute(&self, bindings: &[(&str, Binding)]) -> Result<Polynomial, PolyError> {
        let mut bound: Vec<Option<&Binding>> = vec![None; self.table.len()];
        for (name, binding) in bindings {
            let index = self
                .table
                .position(name)
                .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
            if let Binding::Poly(p) = binding {
                self.assert_same_table(p);
            }
            bound[index] = Some(binding);
        }
        let mut out = Polynomial::zero(&self.table);
        for (mono, coeff) in &self.terms {
            let mut residual = mono.exponents().to_vec();
            let mut factor = Polynomial::constant(&self.table, coeff.clone());
            let mut scalar = Rational::one();
            for (i, slot) in bound.iter().enumerate() {
                let e = residual[i];
                if e == 0 {
                    continue;
                }
                match slot {
                    None => {}
                    Some(Binding::Value(v)) => {
                        residual[i] = 0;
                        scalar *= pow_rational(v, e);
                    }
                    Some(Binding::Poly(p)) => {
                        residual[i] = 0;
                        factor = factor.mul_ref(&p.pow(e));
                    }
                }
            }
            if scalar.is_zero() {
                continue;
            }
            let residual_mono = Polynomial {
                table: self.table.clone(),
                terms: BTreeMap::from([(Monomial(residual.into_boxed_slice()), scalar)]),
            };
            out = out.add_ref(&factor.mul_ref(&residual_mono));
        }
        Ok(out)
    }

    /// Full numeric evaluation; `values[i]` binds table variable `i`.
    pub fn eval(&self, values: &[Rational]) -> Rational {
        assert_eq!(values.len(), self.table.len(), "evaluation point arity");
        let mut total = Rational::zero();
        for (mono, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (i, &e) in mono.exponents().iter().enumerate() {
                if e > 0 {
                    term *= pow_rational(&values[i], e);
                }
            }
            total += term;
        }
        total
    }

    /// Re-express this polynomial over `target`, matching variables by name.
    /// Every variable of the current table must exist in `target`.
    pub fn lift(&self, target: &VarTable) -> Result<Polynomial, PolyError> {
        if &self.table == target {
            return Ok(self.clone());
        }
        let mut mapping = Vec::with_capacity(self.table.len());
        for name in self.table.names() {
            let index = target
                .position(name)
                .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
            mapping.push(index);
        }
        let mut terms = BTreeMap::new();
        for (mono, coeff) in &self.terms {
            let mut exps = vec![0u32; target.len()];
            for (i, &e) in mono.exponents().iter().enumerate() {
                exps[mapping[i]] = e;
            }
            terms.insert(Monomial(exps.into_boxed_slice()), coeff.clone());
        }
        Ok(Polynomial {
            table: target.clone(),
            terms,
        })
    }

    /// Render in the canonical form accepted back by the parser.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

fn pow_rational(base: &Rational, exp: u32) -> Rational {
    let mut result = Rational::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    result
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Leading term first: descending graded-lex order.
        for (i, (mono, coeff)) in self.terms.iter().rev().enumerate() {
            let negative = coeff.is_negative();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let magnitude = coeff.abs();
            let mut factors: Vec<String> = Vec::new();
            // A leading `-` binds to the first base, so `-u^2` would read
            // back as `(-u)^2`; make the coefficient explicit in that case.
            let first_exponent_ambiguous = i == 0
                && negative
                && mono
                    .exponents()
                    .iter()
                    .find(|&&e| e > 0)
                    .is_some_and(|&e| e >= 2);
            if !magnitude.is_one() || mono.is_constant() || first_exponent_ambiguous {
                factors.push(magnitude.to_string());
            }
            for (v, &e) in mono.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.table.name(v).to_string()),
                    _ => factors.push(format!("{}^{}", self.table.name(v), e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, other: Self) -> Polynomial {
        self.add_ref(other)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, other: Self) -> Polynomial {
        self.sub_ref(other)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, other: Self) -> Polynomial {
        self.mul_ref(other)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn table() -> VarTable {
        VarTable::coordinates(&["u", "v"]).unwrap()
    }

    #[test]
    fn additive_inverse_cancels() {
        let t = table();
        let u3 = Polynomial::var(&t, 0).pow(3);
        assert!(u3.add_ref(&u3.neg_ref()).is_zero());
    }

    #[test]
    fn binomial_product() {
        let t = table();
        let u = Polynomial::var(&t, 0);
        let v = Polynomial::var(&t, 1);
        let sum = &u + &v;
        let diff = &u - &v;
        let product = &sum * &diff;
        let expected = &u.pow(2) - &v.pow(2);
        assert_eq!(product, expected);
        // (u+v) + (u-v) collapses to 2u.
        assert_eq!(&sum + &diff, u.scale(&rat_int(2)));
        assert_eq!(sum.num_terms(), 2);
    }

    #[test]
    fn degree_additivity() {
        let t = table();
        let u = Polynomial::var(&t, 0);
        let v = Polynomial::var(&t, 1);
        let p = &u.pow(2) + &v;
        let q = &v.pow(3) + &Polynomial::one(&t);
        assert_eq!(
            p.mul_ref(&q).degree(),
            Some(p.degree().unwrap() + q.degree().unwrap())
        );
        assert!(p.mul_ref(&Polynomial::zero(&t)).is_zero());
    }

    #[test]
    fn power_rule_derivatives() {
        let t = table();
        let u = Polynomial::var(&t, 0);
        // -u^3/3
        let p = u.pow(3).scale(&rat(-1, 3));
        let du = p.diff("u").unwrap();
        assert_eq!(du, u.pow(2).neg_ref());
        assert!(p.diff("v").unwrap().is_zero());
        let ddu = du.diff("u").unwrap();
        assert_eq!(ddu, u.scale(&rat_int(-2)));
        assert!(p.diff("w").is_err());
    }

    #[test]
    fn substitution_examples() {
        let t = table();
        let u = Polynomial::var(&t, 0);
        let p = u.pow(3).scale(&rat(-1, 3));
        let at_one = p
            .substitute(&[("u", Binding::Value(rat_int(1)))])
            .unwrap();
        assert_eq!(at_one.as_constant(), Some(rat(-1, 3)));

        // simultaneous swap u <-> v
        let v = Polynomial::var(&t, 1);
        let q = &u.pow(2) + &v;
        let swapped = q
            .substitute(&[
                ("u", Binding::Poly(v.clone())),
                ("v", Binding::Poly(u.clone())),
            ])
            .unwrap();
        assert_eq!(swapped, &v.pow(2) + &u);

        let zeroed = q
            .substitute(&[("u", Binding::Value(rat_int(0)))])
            .unwrap();
        assert_eq!(zeroed, v);
    }

    #[test]
    fn mixed_partials_commute() {
        let t = table();
        let u = Polynomial::var(&t, 0);
        let v = Polynomial::var(&t, 1);
        let p = (&u.pow(3) * &v.pow(2)).add_ref(&(&u * &v));
        let ab = p.diff("u").unwrap().diff("v").unwrap();
        let ba = p.diff("v").unwrap().diff("u").unwrap();
        assert_eq!(ab, ba);
    }

    #[test]
    fn lift_preserves_terms() {
        let small = VarTable::coordinates(&["u"]).unwrap();
        let big = VarTable::coordinates(&["x", "u", "y"]).unwrap();
        let p = Polynomial::var(&small, 0).pow(2);
        let lifted = p.lift(&big).unwrap();
        assert_eq!(lifted, Polynomial::var(&big, 1).pow(2));
        assert!(p.lift(&VarTable::coordinates(&["w"]).unwrap()).is_err());
    }

    #[test]
    fn values_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Polynomial>();
        assert_send_sync::<VarTable>();
    }

    #[test]
    fn eval_is_exact() {
        let t = table();
        let u = Polynomial::var(&t, 0);
        let v = Polynomial::var(&t, 1);
        let p = (&u.pow(2) * &v).scale(&rat(3, 2));
        assert_eq!(p.eval(&[rat_int(2), rat(1, 3)]), rat_int(2));
    }
}
