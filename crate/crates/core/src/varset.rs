//! Variable sets as bitmasks, plus the name table that gives them meaning.

use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

use crate::error::{Error, Result};

/// Largest universe any structure in this crate accepts.
pub const MAX_VARS: usize = 24;

/// A set of variable indices, bit `i` set iff variable `i` is a member.
#[derive(Copy, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarSet(u32);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    pub const fn from_bits(bits: u32) -> Self {
        VarSet(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < MAX_VARS);
        VarSet(1 << i)
    }

    /// All of `0..n`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VARS);
        VarSet(((1u64 << n) - 1) as u32)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        indices
            .into_iter()
            .fold(VarSet::EMPTY, |acc, i| acc | VarSet::singleton(i))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        i < 32 && self.0 & (1 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn union(self, other: VarSet) -> VarSet {
        VarSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VarSet) -> VarSet {
        VarSet(self.0 & other.0)
    }

    pub fn difference(self, other: VarSet) -> VarSet {
        VarSet(self.0 & !other.0)
    }

    pub fn complement(self, n: usize) -> VarSet {
        VarSet::full(n).difference(self)
    }

    pub fn is_subset(self, other: VarSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: VarSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn intersects(self, other: VarSet) -> bool {
        !self.is_disjoint(other)
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// One past the largest member (0 for the empty set).
    pub fn span(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    /// Members in increasing index order.
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// All subsets of `self`, in increasing mask order, starting with the empty set.
    pub fn subsets(self) -> Subsets {
        Subsets {
            of: self.0,
            next: Some(0),
        }
    }
}

impl BitOr for VarSet {
    type Output = VarSet;
    fn bitor(self, rhs: VarSet) -> VarSet {
        self.union(rhs)
    }
}

impl BitAnd for VarSet {
    type Output = VarSet;
    fn bitand(self, rhs: VarSet) -> VarSet {
        self.intersection(rhs)
    }
}

impl Sub for VarSet {
    type Output = VarSet;
    fn sub(self, rhs: VarSet) -> VarSet {
        self.difference(rhs)
    }
}

impl FromIterator<usize> for VarSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VarSet::from_indices(iter)
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter(u32);

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(i as usize)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for Iter {}

pub struct Subsets {
    of: u32,
    next: Option<u32>,
}

impl Iterator for Subsets {
    type Item = VarSet;

    fn next(&mut self) -> Option<VarSet> {
        let cur = self.next?;
        self.next = if cur == self.of {
            None
        } else {
            Some((cur.wrapping_sub(self.of)) & self.of)
        };
        Some(VarSet(cur))
    }
}

/// Variable names in index order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Universe {
    names: Vec<String>,
}

impl Universe {
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(names: I) -> Result<Self> {
        let mut u = Universe::default();
        for name in names {
            u.add(name)?;
        }
        Ok(u)
    }

    /// `X1..Xn`.
    pub fn numbered(n: usize) -> Self {
        Universe {
            names: (1..=n).map(|i| format!("X{i}")).collect(),
        }
    }

    /// Appends a variable and returns its index.
    pub fn add(&mut self, name: impl Into<String>) -> Result<usize> {
        let name = name.into();
        if self.index_of(&name).is_some() {
            return Err(Error::DuplicateVariable(name));
        }
        if self.names.len() >= MAX_VARS {
            return Err(Error::CapExceeded {
                what: "a universe",
                n: self.names.len() + 1,
                max: MAX_VARS,
            });
        }
        self.names.push(name);
        Ok(self.names.len() - 1)
    }

    /// Index of `name`, adding it if unseen.
    pub fn intern(&mut self, name: &str) -> Result<usize> {
        match self.index_of(name) {
            Some(i) => Ok(i),
            None => self.add(name),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn full(&self) -> VarSet {
        VarSet::full(self.len())
    }

    /// Comma-separated member names, no braces.
    pub fn list(&self, set: VarSet) -> String {
        set.iter()
            .map(|i| self.names.get(i).map_or("?", String::as_str))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// `{X1,X3}` style rendering.
    pub fn braces(&self, set: VarSet) -> String {
        format!("{{{}}}", self.list(set))
    }
}
