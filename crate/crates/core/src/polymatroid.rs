//! Set functions on the subset lattice and the Shannon-inequality checks.

use num::BigRational;

use crate::error::{Error, ParseError, Result};
use crate::triple::{CISet, CITriple};
use crate::value::{format_rational, parse_rational, Value};
use crate::varset::{Universe, VarSet};

/// Largest universe for which a full table is materialised.
pub const MAX_TABLE_VARS: usize = 20;

/// One value per subset of `0..n`, indexed by mask, with `h(∅) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolymatroidTable<T> {
    n: usize,
    values: Vec<T>,
}

impl<T: Value> PolymatroidTable<T> {
    pub fn new(n: usize, values: Vec<T>) -> Result<Self> {
        check_table_cap(n)?;
        if values.len() != 1 << n {
            return Err(Error::Precondition(format!(
                "table over {n} variables needs {} entries, got {}",
                1usize << n,
                values.len()
            )));
        }
        if !values[0].is_zero_value() {
            return Err(Error::Precondition("h(∅) must be 0".into()));
        }
        Ok(PolymatroidTable { n, values })
    }

    /// Table from a function of subsets; `h(∅)` is forced to zero.
    pub fn from_fn(n: usize, mut f: impl FnMut(VarSet) -> T) -> Self {
        check_table_cap(n).expect("table cap");
        let values = (0..1u32 << n)
            .map(|m| if m == 0 { T::zero() } else { f(VarSet::from_bits(m)) })
            .collect();
        PolymatroidTable { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, set: VarSet) -> &T {
        &self.values[set.bits() as usize]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn map<U: Value>(&self, f: impl FnMut(&T) -> U) -> PolymatroidTable<U> {
        PolymatroidTable {
            n: self.n,
            values: self.values.iter().map(f).collect(),
        }
    }

    /// `h(b|a) = h(ab) − h(a)`.
    pub fn conditional_entropy(&self, b: VarSet, a: VarSet) -> T {
        self.get(a | b).sub(self.get(a))
    }

    /// `I(x;y|z) = h(zx) + h(zy) − h(zxy) − h(z)`.
    pub fn cmi(&self, t: &CITriple) -> T {
        cmi_raw(self, t.x(), t.y(), t.z())
    }

    /// `h(Σ)`: the sum of `cmi` over the set.
    pub fn sum_cmi(&self, sigma: &CISet) -> T {
        sigma.iter().fold(T::zero(), |acc, t| acc.add(&self.cmi(t)))
    }

    /// `h(∅) = 0`, monotone and submodular, checked pair by pair over all subsets.
    pub fn is_polymatroid(&self) -> bool {
        if !self.values[0].is_zero_value() {
            return false;
        }
        let full = VarSet::full(self.n);
        for b in full.subsets() {
            for a in b.subsets() {
                if self.get(b).sub(self.get(a)).is_negative() {
                    return false;
                }
            }
        }
        for a in full.subsets() {
            for b in full.subsets().filter(|b| b.bits() > a.bits()) {
                let lhs = self.get(a).add(self.get(b));
                let rhs = self.get(a | b).add(self.get(a & b));
                if lhs.sub(&rhs).is_negative() {
                    return false;
                }
            }
        }
        true
    }

    /// The elemental generating set of the Shannon cone:
    /// `h(Ω) − h(Ω∖i) ≥ 0` and `I(i;j|K) ≥ 0`.
    pub fn satisfies_elemental(&self) -> bool {
        if !self.values[0].is_zero_value() {
            return false;
        }
        let full = VarSet::full(self.n);
        for i in 0..self.n {
            let single = VarSet::singleton(i);
            if self.conditional_entropy(single, full - single).is_negative() {
                return false;
            }
        }
        for i in 0..self.n {
            for j in i + 1..self.n {
                let (a, b) = (VarSet::singleton(i), VarSet::singleton(j));
                for k in (full - a - b).subsets() {
                    if cmi_raw(self, a, b, k).is_negative() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

pub(crate) fn cmi_raw<T: Value>(h: &PolymatroidTable<T>, x: VarSet, y: VarSet, z: VarSet) -> T {
    h.get(z | x)
        .add(h.get(z | y))
        .sub(h.get(z | x | y))
        .sub(h.get(z))
}

fn check_table_cap(n: usize) -> Result<()> {
    if n > MAX_TABLE_VARS {
        return Err(Error::CapExceeded {
            what: "a polymatroid table",
            n,
            max: MAX_TABLE_VARS,
        });
    }
    Ok(())
}

impl PolymatroidTable<BigRational> {
    /// Text dump: a `polymatroid vars ...` header, then `{A,B} value` for every nonempty subset.
    pub fn to_text(&self, universe: &Universe) -> String {
        let mut out = format!("polymatroid vars {}\n", universe.names().join(" "));
        for m in 1..1u32 << self.n {
            let s = VarSet::from_bits(m);
            out.push_str(&format!(
                "{} {}\n",
                universe.braces(s),
                format_rational(self.get(s))
            ));
        }
        out
    }

    /// Reads the [`to_text`](Self::to_text) format. Subsets not listed default to 0.
    pub fn parse(text: &str) -> Result<(Universe, Self)> {
        let mut universe = None;
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(rest) = body.strip_prefix("polymatroid") {
                let rest = rest.trim();
                let names = rest.strip_prefix("vars").ok_or_else(|| {
                    ParseError::new(line_no, 1, "expected `polymatroid vars <names>`")
                })?;
                universe = Some(Universe::new(names.split_whitespace())?);
                continue;
            }
            let u = universe
                .as_ref()
                .ok_or_else(|| ParseError::new(line_no, 1, "missing `polymatroid vars` header"))?;
            let (set_text, value_text) = body
                .strip_prefix('{')
                .and_then(|r| r.split_once('}'))
                .ok_or_else(|| ParseError::new(line_no, 1, "expected `{names} value`"))?;
            let mut set = VarSet::EMPTY;
            for name in set_text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let i = u.index_of(name).ok_or_else(|| {
                    ParseError::new(line_no, 1, format!("unknown variable `{name}`"))
                })?;
                set.insert(i);
            }
            let value = parse_rational(value_text).ok_or_else(|| {
                ParseError::new(line_no, 1, format!("bad value `{}`", value_text.trim()))
            })?;
            entries.push((set, value));
        }
        let universe = universe.ok_or_else(|| ParseError::new(1, 1, "empty polymatroid file"))?;
        let n = universe.len();
        let mut values = vec![<BigRational as Value>::zero(); 1 << n];
        for (set, v) in entries {
            values[set.bits() as usize] = v;
        }
        let table = PolymatroidTable::new(n, values)?;
        Ok((universe, table))
    }
}
