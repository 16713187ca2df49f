//! Conditional-independence implication: exact tests, λ-relaxation bounds,
//! counterexample construction and an exact Shannon-cone LP.

pub mod dag;
pub mod distribution;
pub mod enumerate;
pub mod error;
pub mod exact;
pub mod imeasure;
pub mod implication;
pub mod lp;
pub mod measure;
pub mod polymatroid;
pub mod triple;
pub mod value;
pub mod varset;

pub use dag::Dag;
pub use distribution::{parity_distribution, random_distribution, JointDistribution};
pub use error::{Error, ParseError, Result};
pub use exact::ExactBits;
pub use imeasure::{atoms_of, atoms_of_set, implies_positive, single_atom_polymatroid, AtomSet, Verdict};
pub use measure::{atom_measure, polymatroid_from_atoms, AtomMeasure};
pub use polymatroid::PolymatroidTable;
pub use triple::{parse_ci_set, parse_ci_triple, CISet, CITriple};
pub use varset::{Universe, VarSet};
