//! Variable tables: the ordered, role-tagged symbol universe that every
//! polynomial in the system is expressed over.
//!
//! A table is fixed at creation; its ordering defines the monomial order and
//! the tensor index layout. Coordinates come first for metric tables, and
//! direction-vector components or auxiliary probe symbols are appended later
//! via [`VarTable::extended`].

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// What a variable stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarRole {
    /// A manifold coordinate.
    Coordinate,
    /// A component of a formal direction vector.
    Direction,
    /// A scratch symbol used by identity checks (scaling constants, probe vectors).
    Auxiliary,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VarTableError {
    #[error("duplicate variable name `{0}`")]
    DuplicateName(String),
    #[error("invalid variable name `{0}`: must be letter (letter|digit|'_')*")]
    InvalidName(String),
}

#[derive(Debug, PartialEq, Eq)]
struct VarInfo {
    name: String,
    role: VarRole,
}

#[derive(Debug, PartialEq, Eq)]
struct Inner {
    vars: Vec<VarInfo>,
}

/// An immutable, ordered list of distinct variables.
///
/// Cheap to clone (shared behind an `Arc`); two tables are equal when their
/// name/role sequences are equal, regardless of sharing.
#[derive(Debug, Clone)]
pub struct VarTable {
    inner: Arc<Inner>,
}

impl PartialEq for VarTable {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner == other.inner
    }
}

impl Eq for VarTable {}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl VarTable {
    /// A table with no variables; constants only.
    pub fn empty() -> Self {
        VarTable {
            inner: Arc::new(Inner { vars: Vec::new() }),
        }
    }

    /// Build a table from (name, role) pairs, in order.
    pub fn new<S: AsRef<str>>(vars: &[(S, VarRole)]) -> Result<Self, VarTableError> {
        let mut infos: Vec<VarInfo> = Vec::with_capacity(vars.len());
        for (name, role) in vars {
            let name = name.as_ref();
            if !valid_name(name) {
                return Err(VarTableError::InvalidName(name.to_string()));
            }
            if infos.iter().any(|v| v.name == name) {
                return Err(VarTableError::DuplicateName(name.to_string()));
            }
            infos.push(VarInfo {
                name: name.to_string(),
                role: *role,
            });
        }
        Ok(VarTable {
            inner: Arc::new(Inner { vars: infos }),
        })
    }

    /// Build a table of coordinate variables.
    pub fn coordinates<S: AsRef<str>>(names: &[S]) -> Result<Self, VarTableError> {
        let pairs: Vec<(&str, VarRole)> = names
            .iter()
            .map(|n| (n.as_ref(), VarRole::Coordinate))
            .collect();
        VarTable::new(&pairs)
    }

    /// A new table with extra variables appended after the existing ones.
    pub fn extended<S: AsRef<str>>(&self, extra: &[(S, VarRole)]) -> Result<Self, VarTableError> {
        let mut pairs: Vec<(String, VarRole)> = self
            .inner
            .vars
            .iter()
            .map(|v| (v.name.clone(), v.role))
            .collect();
        for (name, role) in extra {
            pairs.push((name.as_ref().to_string(), *role));
        }
        VarTable::new(&pairs)
    }

    pub fn len(&self) -> usize {
        self.inner.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.vars.is_empty()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.inner.vars[index].name
    }

    pub fn role(&self, index: usize) -> VarRole {
        self.inner.vars[index].role
    }

    /// Position of `name` in the table, if present.
    pub fn position(&self, name: &str) -> Option<usize> {
        self.inner.vars.iter().position(|v| v.name == name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.inner.vars.iter().map(|v| v.name.as_str())
    }

    /// Indices of the variables with the given role, in table order.
    pub fn indices_with_role(&self, role: VarRole) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.role(i) == role).collect()
    }
}

impl fmt::Display for VarTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.names().collect();
        write!(f, "({})", names.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates() {
        let err = VarTable::coordinates(&["x", "u", "x"]).unwrap_err();
        assert_eq!(err, VarTableError::DuplicateName("x".into()));
    }

    #[test]
    fn rejects_bad_names() {
        assert!(VarTable::coordinates(&["1x"]).is_err());
        assert!(VarTable::coordinates(&[""]).is_err());
        assert!(VarTable::coordinates(&["u_1"]).is_ok());
    }

    #[test]
    fn extension_keeps_order_and_checks_collisions() {
        let t = VarTable::coordinates(&["x", "u"]).unwrap();
        let e = t.extended(&[("xi0", VarRole::Direction)]).unwrap();
        assert_eq!(e.len(), 3);
        assert_eq!(e.name(0), "x");
        assert_eq!(e.name(2), "xi0");
        assert_eq!(e.role(2), VarRole::Direction);
        assert!(t.extended(&[("u", VarRole::Direction)]).is_err());
    }

    #[test]
    fn equality_is_structural() {
        let a = VarTable::coordinates(&["x", "y"]).unwrap();
        let b = VarTable::coordinates(&["x", "y"]).unwrap();
        assert_eq!(a, b);
        let c = VarTable::new(&[("x", VarRole::Coordinate), ("y", VarRole::Direction)]).unwrap();
        assert_ne!(a, c);
    }
}
