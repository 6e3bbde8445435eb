use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An ordered list of distinct variable names.
///
/// Cloning is cheap; two sets compare equal when their names agree in order.
#[derive(Clone, Eq)]
pub struct VarSet(Arc<[String]>);

impl VarSet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_owned()).collect();
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::DuplicateVariable(name.clone()));
            }
        }
        Ok(VarSet(names.into()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    /// Index of `name`, or [`Error::UnknownVariable`].
    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_owned()))
    }

    /// A new set with `extra` appended after the existing names.
    pub fn extend<S: AsRef<str>>(&self, extra: &[S]) -> Result<Self> {
        let mut all: Vec<&str> = self.0.iter().map(String::as_str).collect();
        all.extend(extra.iter().map(AsRef::as_ref));
        VarSet::new(&all)
    }

    pub(crate) fn check_same(&self, other: &VarSet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::VarSetMismatch {
                left: self.0.join(","),
                right: other.0.join(","),
            })
        }
    }
}

impl PartialEq for VarSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl std::hash::Hash for VarSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VarSet({})", self.0.join(","))
    }
}
