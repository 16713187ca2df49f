//! Atom masses of the I-measure, obtained by Möbius inversion of a set function.

use crate::distribution::JointDistribution;
use crate::error::{Error, Result};
use crate::polymatroid::{PolymatroidTable, MAX_TABLE_VARS};
use crate::triple::CITriple;
use crate::value::Value;
use crate::varset::VarSet;

/// Largest universe accepted by [`atom_measure`].
pub const MAX_MEASURE_VARS: usize = 10;

/// One mass per nonempty atom, indexed by the atom's positive-form subset mask.
/// Slot 0 is kept at zero so masks index directly.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomMeasure<T> {
    n: usize,
    mass: Vec<T>,
}

impl<T: Value> AtomMeasure<T> {
    pub fn new(n: usize, mass: Vec<T>) -> Result<Self> {
        if n > MAX_TABLE_VARS {
            return Err(Error::CapExceeded {
                what: "an atom measure",
                n,
                max: MAX_TABLE_VARS,
            });
        }
        if mass.len() != 1 << n {
            return Err(Error::Precondition(format!(
                "measure over {n} variables needs {} entries, got {}",
                1usize << n,
                mass.len()
            )));
        }
        let mut mass = mass;
        mass[0] = T::zero();
        Ok(AtomMeasure { n, mass })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mass(&self, atom: VarSet) -> &T {
        &self.mass[atom.bits() as usize]
    }

    pub fn masses(&self) -> &[T] {
        &self.mass
    }

    /// True iff every atom carries nonnegative mass.
    pub fn is_positive(&self) -> bool {
        !self.mass.iter().any(Value::is_negative)
    }

    /// Measure of `m(t)`: the sum of masses over atoms meeting `x` and `y` but not `z`.
    pub fn measure_of(&self, t: &CITriple) -> T {
        let (x, y, z) = (t.x(), t.y(), t.z());
        VarSet::full(self.n)
            .subsets()
            .filter(|s| s.intersects(x) && s.intersects(y) && s.is_disjoint(z))
            .fold(T::zero(), |acc, s| acc.add(self.mass(s)))
    }
}

/// Möbius inversion of `h`: `mass(S) = −Σ_{T⊆S} (−1)^{|S∖T|} h([n]∖T)`.
pub fn atom_measure_of_table<T: Value>(h: &PolymatroidTable<T>) -> AtomMeasure<T> {
    let n = h.n();
    let full = VarSet::full(n);
    let mut f: Vec<T> = (0..1u32 << n)
        .map(|m| h.get(full - VarSet::from_bits(m)).clone())
        .collect();
    for i in 0..n {
        let bit = 1usize << i;
        for m in 0..f.len() {
            if m & bit != 0 {
                f[m] = f[m].sub(&f[m ^ bit]);
            }
        }
    }
    let mut mass: Vec<T> = f.iter().map(|v| T::zero().sub(v)).collect();
    mass[0] = T::zero();
    AtomMeasure { n, mass }
}

/// I-measure of the entropy function of `d` (floating-point).
pub fn atom_measure(d: &JointDistribution) -> Result<AtomMeasure<f64>> {
    if d.n() > MAX_MEASURE_VARS {
        return Err(Error::CapExceeded {
            what: "an atom measure",
            n: d.n(),
            max: MAX_MEASURE_VARS,
        });
    }
    Ok(atom_measure_of_table(&d.entropic_table()))
}

/// `h(α) = Σ_{s∩α≠∅} mass(s)`; the masses must be nonnegative.
pub fn polymatroid_from_atoms<T: Value>(m: &AtomMeasure<T>) -> Result<PolymatroidTable<T>> {
    if let Some(bad) = m.mass.iter().position(Value::is_negative) {
        return Err(Error::NegativeMass(format!("atom mask {bad:#b}")));
    }
    Ok(table_from_atoms_unchecked(m))
}

/// The reconstruction map without the sign check; used for consistency tests.
pub fn table_from_atoms_unchecked<T: Value>(m: &AtomMeasure<T>) -> PolymatroidTable<T> {
    // zeta transform: g(U) = Σ_{s⊆U} mass(s); then h(α) = g(Ω) − g(Ω∖α)
    let n = m.n;
    let mut g = m.mass.clone();
    for i in 0..n {
        let bit = 1usize << i;
        for k in 0..g.len() {
            if k & bit != 0 {
                g[k] = g[k].add(&g[k ^ bit]);
            }
        }
    }
    let full = VarSet::full(n);
    let total = g[full.bits() as usize].clone();
    PolymatroidTable::from_fn(n, |alpha| total.sub(&g[(full - alpha).bits() as usize]))
}
