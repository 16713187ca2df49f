//! Exhaustive enumeration of triples over small universes.

use crate::triple::CITriple;
use crate::varset::VarSet;

/// Every canonical triple over `0..n`, each variable assigned to x, y, z or nothing.
pub fn all_triples(n: usize) -> Vec<CITriple> {
    assert!(n <= 8, "4^n assignments");
    let mut out = Vec::new();
    let total = 4usize.pow(n as u32);
    for code in 0..total {
        let (mut x, mut y, mut z) = (VarSet::EMPTY, VarSet::EMPTY, VarSet::EMPTY);
        let mut c = code;
        for i in 0..n {
            match c % 4 {
                1 => x.insert(i),
                2 => y.insert(i),
                3 => z.insert(i),
                _ => {}
            }
            c /= 4;
        }
        if !x.is_empty() && !y.is_empty() && x.first() < y.first() {
            out.push(CITriple::canonical(x, y, z));
        }
    }
    out.sort();
    out
}

/// Elemental triples `(a;b|z)` over `0..n` with `|z| <= max_z`.
pub fn elemental_triples(n: usize, max_z: usize) -> Vec<CITriple> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let rest = VarSet::full(n) - VarSet::from_indices([a, b]);
            for z in rest.subsets().filter(|z| z.len() <= max_z) {
                out.push(CITriple::canonical(VarSet::singleton(a), VarSet::singleton(b), z));
            }
        }
    }
    out
}
