//! The atom field of `n` variables and the positive-polymatroid implication test.
//!
//! An atom is named by the set of variables appearing in positive form. The
//! image `m(X;Y|Z)` is the set of atoms meeting `X` and `Y` and avoiding `Z`.

use num::BigRational;

use crate::error::{Error, Result};
use crate::polymatroid::PolymatroidTable;
use crate::triple::{CISet, CITriple};
use crate::value::Value;
use crate::varset::VarSet;

/// Largest universe for which atom sets are materialised.
pub const MAX_ATOM_VARS: usize = 16;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AtomSet {
    n: usize,
    words: Vec<u64>,
}

impl AtomSet {
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_ATOM_VARS {
            return Err(Error::CapExceeded {
                what: "an atom set",
                n,
                max: MAX_ATOM_VARS,
            });
        }
        Ok(AtomSet {
            n,
            words: vec![0; (1usize << n).div_ceil(64)],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, atom: VarSet) -> bool {
        let k = atom.bits() as usize;
        k != 0 && self.words[k / 64] >> (k % 64) & 1 == 1
    }

    /// Adds `atom`; the empty atom is ignored.
    pub fn insert(&mut self, atom: VarSet) {
        let k = atom.bits() as usize;
        if k != 0 {
            self.words[k / 64] |= 1 << (k % 64);
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &AtomSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn is_subset(&self, other: &AtomSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &AtomSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    /// Smallest atom in `self` but not in `other`.
    pub fn first_missing_from(&self, other: &AtomSet) -> Option<VarSet> {
        self.words
            .iter()
            .zip(&other.words)
            .enumerate()
            .find_map(|(i, (a, b))| {
                let d = a & !b;
                (d != 0).then(|| VarSet::from_bits((i * 64 + d.trailing_zeros() as usize) as u32))
            })
    }

    /// Atoms in ascending mask order.
    pub fn iter(&self) -> impl Iterator<Item = VarSet> + '_ {
        (1..1u32 << self.n)
            .map(VarSet::from_bits)
            .filter(|&a| self.contains(a))
    }
}

impl std::fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// `m(t)` over `n` variables.
pub fn atoms_of(t: &CITriple, n: usize) -> Result<AtomSet> {
    t.check_universe(n)?;
    let mut out = AtomSet::empty(n)?;
    add_atoms(&mut out, t);
    Ok(out)
}

fn add_atoms(out: &mut AtomSet, t: &CITriple) {
    // every atom meets x, meets y and avoids z: enumerate the free part once
    let (x, y, z) = (t.x(), t.y(), t.z());
    let free = VarSet::full(out.n) - x - y - z;
    for sx in x.subsets().skip(1) {
        for sy in y.subsets().skip(1) {
            for rest in free.subsets() {
                out.insert(sx | sy | rest);
            }
        }
    }
}

/// `m(Σ)`: the union of the images of the members.
pub fn atoms_of_set(sigma: &CISet, n: usize) -> Result<AtomSet> {
    sigma.check_universe(n)?;
    let mut out = AtomSet::empty(n)?;
    for t in sigma {
        add_atoms(&mut out, t);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub implied: bool,
    /// Smallest atom of `m(τ)∖m(Σ)` when not implied.
    pub witness: Option<VarSet>,
}

/// Implication over positive polymatroids: holds iff `m(τ) ⊆ m(Σ)`.
pub fn implies_positive(sigma: &CISet, tau: &CITriple, n: usize) -> Result<Verdict> {
    let need = atoms_of(tau, n)?;
    let have = atoms_of_set(sigma, n)?;
    let witness = need.first_missing_from(&have);
    Ok(Verdict {
        implied: witness.is_none(),
        witness,
    })
}

/// Drops every antecedent whose image is disjoint from `m(τ)`.
pub fn reduce_antecedents(sigma: &CISet, tau: &CITriple, n: usize) -> Result<CISet> {
    if !implies_positive(sigma, tau, n)?.implied {
        return Err(Error::Precondition("antecedents do not imply the consequent".into()));
    }
    let need = atoms_of(tau, n)?;
    let mut out = CISet::new();
    for s in sigma {
        if atoms_of(s, n)?.intersects(&need) {
            out.insert(*s);
        }
    }
    Ok(out)
}

/// `h(α) = [α ∩ atom ≠ ∅]`: the polymatroid with unit mass on one atom.
pub fn single_atom_polymatroid(atom: VarSet, n: usize) -> Result<PolymatroidTable<BigRational>> {
    if atom.is_empty() {
        return Err(Error::EmptyAtom);
    }
    if !atom.is_subset(VarSet::full(n)) {
        return Err(Error::OutOfUniverse {
            index: atom.span() - 1,
            n,
        });
    }
    PolymatroidTable::new(
        n,
        (0..1u32 << n)
            .map(|m| <BigRational as Value>::from_int(VarSet::from_bits(m).intersects(atom) as i64))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::all_triples;

    fn s(ix: &[usize]) -> VarSet {
        VarSet::from_indices(ix.iter().copied())
    }

    fn brute(t: &CITriple, n: usize) -> Vec<VarSet> {
        (1..1u32 << n)
            .map(VarSet::from_bits)
            .filter(|a| a.intersects(t.x()) && a.intersects(t.y()) && a.is_disjoint(t.z()))
            .collect()
    }

    #[test]
    fn small_images() {
        let a = atoms_of(&CITriple::of(&[0], &[1], &[]), 2).unwrap();
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![s(&[0, 1])]);
        let a = atoms_of(&CITriple::of(&[0], &[1], &[2]), 3).unwrap();
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![s(&[0, 1])]);
        let a = atoms_of(&CITriple::of(&[0], &[1], &[]), 3).unwrap();
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![s(&[0, 1]), s(&[0, 1, 2])]);
    }

    #[test]
    fn images_match_definition() {
        for n in 1..=5 {
            for t in all_triples(n) {
                let got: Vec<_> = atoms_of(&t, n).unwrap().iter().collect();
                assert_eq!(got, brute(&t, n), "{t:?}");
            }
        }
    }

    #[test]
    fn example_union() {
        let sigma: CISet = [CITriple::of(&[0], &[1], &[]), CITriple::of(&[0], &[2], &[1])]
            .into_iter()
            .collect();
        let m = atoms_of_set(&sigma, 3).unwrap();
        assert_eq!(
            m.iter().collect::<Vec<_>>(),
            vec![s(&[0, 1]), s(&[0, 2]), s(&[0, 1, 2])]
        );
        assert!(atoms_of_set(&CISet::new(), 3).unwrap().is_empty());
        let v = implies_positive(&sigma, &CITriple::of(&[0], &[2], &[]), 3).unwrap();
        assert!(v.implied);
        assert_eq!(v.witness, None);
    }

    #[test]
    fn witness_is_smallest_missing() {
        let sigma: CISet = [CITriple::of(&[0], &[1], &[2])].into_iter().collect();
        let v = implies_positive(&sigma, &CITriple::of(&[0], &[1], &[]), 3).unwrap();
        assert!(!v.implied);
        assert_eq!(v.witness, Some(s(&[0, 1, 2])));
        let v = implies_positive(&CISet::new(), &CITriple::of(&[1], &[2], &[]), 3).unwrap();
        assert_eq!(v.witness, Some(s(&[1, 2])));
    }

    #[test]
    fn reduce_drops_disjoint_images() {
        let sigma: CISet = [CITriple::of(&[0], &[1], &[]), CITriple::of(&[1], &[2], &[0])]
            .into_iter()
            .collect();
        let tau = CITriple::of(&[0], &[1], &[]);
        let r = reduce_antecedents(&sigma, &tau, 3).unwrap();
        assert_eq!(r.as_slice(), &[CITriple::of(&[0], &[1], &[])]);
        assert!(reduce_antecedents(&CISet::new(), &tau, 3).is_err());
    }

    #[test]
    fn single_atom_tables() {
        let h = single_atom_polymatroid(s(&[0]), 2).unwrap();
        assert_eq!(h.values(), &[0, 1, 0, 1].map(<BigRational as Value>::from_int));
        for n in 1..=6 {
            for atom in VarSet::full(n).subsets().skip(1) {
                let h = single_atom_polymatroid(atom, n).unwrap();
                assert!(h.is_polymatroid());
            }
        }
        assert!(matches!(single_atom_polymatroid(VarSet::EMPTY, 2), Err(Error::EmptyAtom)));
    }

    #[test]
    fn single_atom_cmi_is_membership() {
        let n = 4;
        for atom in VarSet::full(n).subsets().skip(1) {
            let h = single_atom_polymatroid(atom, n).unwrap();
            for t in all_triples(n) {
                let inside = atoms_of(&t, n).unwrap().contains(atom);
                assert_eq!(h.cmi(&t), <BigRational as Value>::from_int(inside as i64));
            }
        }
    }

    #[test]
    fn caps() {
        assert!(AtomSet::empty(16).is_ok());
        assert!(AtomSet::empty(17).is_err());
    }
}
