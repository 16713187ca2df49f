//! CI triples `(X;Y|Z)`, sets of them, and the `I(...)` text grammar.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! triple := "I" "(" list ";" list [ "|" list ] ")"
//! term   := triple | "H" "(" list [ "|" list ] ")"
//! list   := name { ("," | whitespace) name }      (may be empty after "|")
//! name   := [A-Za-z0-9_.']+
//! ```

use std::fmt;

use crate::error::{Error, ParseError, Result};
use crate::varset::{Universe, VarSet};

/// A conditional-independence statement `(x;y|z)` with pairwise disjoint sides.
///
/// The side with the smaller least index is always stored in `x`, so `(X;Y|Z)`
/// and `(Y;X|Z)` compare equal.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CITriple {
    x: VarSet,
    y: VarSet,
    z: VarSet,
}

impl CITriple {
    pub fn new(x: VarSet, y: VarSet, z: VarSet) -> Result<Self> {
        if x.is_empty() || y.is_empty() {
            return Err(Error::EmptySide);
        }
        if x.intersects(y) || x.intersects(z) || y.intersects(z) {
            return Err(Error::Overlap(format!("{x:?}, {y:?}, {z:?}")));
        }
        Ok(Self::canonical(x, y, z))
    }

    /// Caller guarantees the invariants.
    pub(crate) fn canonical(x: VarSet, y: VarSet, z: VarSet) -> Self {
        debug_assert!(!x.is_empty() && !y.is_empty());
        debug_assert!(x.is_disjoint(y) && x.is_disjoint(z) && y.is_disjoint(z));
        if x.first() <= y.first() {
            CITriple { x, y, z }
        } else {
            CITriple { x: y, y: x, z }
        }
    }

    /// Shorthand for index lists, panicking on invalid input. Intended for tests and examples.
    pub fn of(x: &[usize], y: &[usize], z: &[usize]) -> Self {
        Self::new(
            VarSet::from_indices(x.iter().copied()),
            VarSet::from_indices(y.iter().copied()),
            VarSet::from_indices(z.iter().copied()),
        )
        .expect("invalid triple")
    }

    pub fn x(&self) -> VarSet {
        self.x
    }

    pub fn y(&self) -> VarSet {
        self.y
    }

    pub fn z(&self) -> VarSet {
        self.z
    }

    /// Every variable mentioned.
    pub fn vars(&self) -> VarSet {
        self.x | self.y | self.z
    }

    pub fn is_elemental(&self) -> bool {
        self.x.len() == 1 && self.y.len() == 1
    }

    pub fn is_marginal(&self) -> bool {
        self.z.is_empty()
    }

    pub fn is_saturated(&self, n: usize) -> bool {
        self.vars() == VarSet::full(n)
    }

    pub fn classify(&self, n: usize) -> Classification {
        Classification {
            saturated: self.is_saturated(n),
            marginal: self.is_marginal(),
        }
    }

    /// Errors unless every mentioned index is below `n`.
    pub fn check_universe(&self, n: usize) -> Result<()> {
        let span = self.vars().span();
        if span > n {
            return Err(Error::OutOfUniverse { index: span - 1, n });
        }
        Ok(())
    }

    /// Splits into elemental triples by the chain rule.
    ///
    /// For `y = y1..yk` and `x = x1..xm` (index order) this yields
    /// `(xi; yj | z y1..y(j-1) x1..x(i-1))`, `y` in the outer loop. The parts'
    /// conditional mutual informations sum to that of `self` under every polymatroid.
    pub fn elemental_decompose(&self) -> Vec<CITriple> {
        let mut parts = Vec::with_capacity(self.x.len() * self.y.len());
        let mut y_done = VarSet::EMPTY;
        for yj in self.y.iter() {
            let mut x_done = VarSet::EMPTY;
            for xi in self.x.iter() {
                parts.push(CITriple::canonical(
                    VarSet::singleton(xi),
                    VarSet::singleton(yj),
                    self.z | y_done | x_done,
                ));
                x_done.insert(xi);
            }
            y_done.insert(yj);
        }
        parts
    }

    pub fn display<'a>(&'a self, universe: &'a Universe) -> TripleDisplay<'a> {
        TripleDisplay {
            triple: self,
            universe,
        }
    }
}

impl fmt::Debug for CITriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?};{:?}|{:?})", self.x, self.y, self.z)
    }
}

pub struct TripleDisplay<'a> {
    triple: &'a CITriple,
    universe: &'a Universe,
}

impl fmt::Display for TripleDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = self.universe;
        let t = self.triple;
        write!(f, "I({};{}", u.list(t.x), u.list(t.y))?;
        if !t.z.is_empty() {
            write!(f, "|{}", u.list(t.z))?;
        }
        write!(f, ")")
    }
}

/// Both labels may hold at once; neither means "general".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub saturated: bool,
    pub marginal: bool,
}

impl Classification {
    pub fn is_general(&self) -> bool {
        !self.saturated && !self.marginal
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.saturated, self.marginal) {
            (true, true) => write!(f, "saturated,marginal"),
            (true, false) => write!(f, "saturated"),
            (false, true) => write!(f, "marginal"),
            (false, false) => write!(f, "general"),
        }
    }
}

/// An insertion-ordered set of triples without canonical duplicates.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CISet {
    triples: Vec<CITriple>,
}

impl CISet {
    pub fn new() -> Self {
        CISet::default()
    }

    /// Returns false if the triple was already present.
    pub fn insert(&mut self, t: CITriple) -> bool {
        if self.triples.contains(&t) {
            false
        } else {
            self.triples.push(t);
            true
        }
    }

    pub fn contains(&self, t: &CITriple) -> bool {
        self.triples.contains(t)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CITriple> {
        self.triples.iter()
    }

    pub fn as_slice(&self) -> &[CITriple] {
        &self.triples
    }

    pub fn vars(&self) -> VarSet {
        self.triples
            .iter()
            .fold(VarSet::EMPTY, |acc, t| acc | t.vars())
    }

    pub fn check_universe(&self, n: usize) -> Result<()> {
        self.triples.iter().try_for_each(|t| t.check_universe(n))
    }

    /// Keeps the triples for which `keep` holds, preserving order.
    pub fn filtered(&self, mut keep: impl FnMut(&CITriple) -> bool) -> CISet {
        CISet {
            triples: self.triples.iter().copied().filter(|t| keep(t)).collect(),
        }
    }
}

impl FromIterator<CITriple> for CISet {
    fn from_iter<I: IntoIterator<Item = CITriple>>(iter: I) -> Self {
        let mut s = CISet::new();
        for t in iter {
            s.insert(t);
        }
        s
    }
}

impl<'a> IntoIterator for &'a CISet {
    type Item = &'a CITriple;
    type IntoIter = std::slice::Iter<'a, CITriple>;
    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

/// A parsed `I(...)` or `H(...)` expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Term {
    Mutual(CITriple),
    /// `H(target | given)`.
    Entropy { target: VarSet, given: VarSet },
}

/// Names appearing in a term, by position.
#[derive(Debug)]
struct RawTerm {
    kind: char,
    lists: Vec<Vec<(String, usize)>>,
}

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            chars: src.chars().enumerate().map(|(i, c)| (i + 1, c)).collect(),
            pos: 0,
            _src: src,
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn column(&self) -> usize {
        self.chars
            .get(self.pos)
            .map_or(self.chars.len() + 1, |&(col, _)| col)
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(ParseError::new(
                1,
                self.column(),
                format!("expected `{want}`, found `{c}`"),
            )),
            None => Err(ParseError::new(
                1,
                self.column(),
                format!("expected `{want}`, found end of input"),
            )),
        }
    }

    fn name(&mut self) -> Option<(String, usize)> {
        self.skip_ws();
        let col = self.column();
        let start = self.pos;
        while self.peek().is_some_and(is_name_char) {
            self.pos += 1;
        }
        (self.pos > start).then(|| {
            let s: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
            (s, col)
        })
    }

    /// Names up to (not including) one of `stops`.
    fn list(&mut self, stops: &[char]) -> Result<Vec<(String, usize)>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if stops.contains(&c) => return Ok(out),
                Some(',') if !out.is_empty() => {
                    self.pos += 1;
                    self.skip_ws();
                    if !self.peek().is_some_and(is_name_char) {
                        return Err(ParseError::new(1, self.column(), "expected a name after `,`"));
                    }
                }
                Some(c) if is_name_char(c) => out.push(self.name().expect("name char present")),
                Some(c) => {
                    return Err(ParseError::new(1, self.column(), format!("unexpected `{c}`")))
                }
                None => return Err(ParseError::new(1, self.column(), "unexpected end of input")),
            }
        }
    }
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '\''
}

fn parse_raw(text: &str) -> Result<RawTerm, ParseError> {
    let mut cur = Cursor::new(text);
    cur.skip_ws();
    let kind = match cur.peek() {
        Some(c @ ('I' | 'H')) => {
            cur.pos += 1;
            c
        }
        Some(c) => {
            return Err(ParseError::new(
                1,
                cur.column(),
                format!("expected `I` or `H`, found `{c}`"),
            ))
        }
        None => return Err(ParseError::new(1, 1, "empty input")),
    };
    cur.expect('(')?;
    let mut lists = Vec::new();
    if kind == 'I' {
        lists.push(cur.list(&[';'])?);
        cur.expect(';')?;
    }
    lists.push(cur.list(&['|', ')'])?);
    cur.skip_ws();
    if cur.peek() == Some('|') {
        cur.pos += 1;
        lists.push(cur.list(&[')'])?);
    } else {
        lists.push(Vec::new());
    }
    cur.expect(')')?;
    cur.skip_ws();
    if let Some(c) = cur.peek() {
        return Err(ParseError::new(
            1,
            cur.column(),
            format!("trailing input starting at `{c}`"),
        ));
    }
    Ok(RawTerm { kind, lists })
}

fn resolve(
    list: &[(String, usize)],
    universe: &mut Universe,
    intern: bool,
) -> Result<VarSet> {
    let mut set = VarSet::EMPTY;
    for (name, col) in list {
        let i = if intern {
            universe.intern(name)?
        } else {
            universe.index_of(name).ok_or_else(|| {
                Error::Parse(ParseError::new(1, *col, format!("unknown variable `{name}`")))
            })?
        };
        if set.contains(i) {
            return Err(Error::Overlap(format!("`{name}` listed twice")));
        }
        set.insert(i);
    }
    Ok(set)
}

fn build_term(raw: RawTerm, universe: &mut Universe, intern: bool) -> Result<Term> {
    let sets = raw
        .lists
        .iter()
        .map(|l| resolve(l, universe, intern))
        .collect::<Result<Vec<_>>>()?;
    match raw.kind {
        'I' => Ok(Term::Mutual(CITriple::new(sets[0], sets[1], sets[2])?)),
        _ => {
            if sets[0].is_empty() {
                return Err(Error::EmptySide);
            }
            Ok(Term::Entropy {
                target: sets[0],
                given: sets[1],
            })
        }
    }
}

/// Parses `I(X;Y|Z)` against a fixed universe; unknown names are rejected.
pub fn parse_ci_triple(text: &str, universe: &Universe) -> Result<CITriple> {
    let raw = parse_raw(text)?;
    if raw.kind != 'I' {
        return Err(ParseError::new(1, 1, "expected a CI triple `I(...)`").into());
    }
    let mut u = universe.clone();
    match build_term(raw, &mut u, false)? {
        Term::Mutual(t) => Ok(t),
        Term::Entropy { .. } => unreachable!(),
    }
}

/// Parses `I(X;Y|Z)`, adding unseen names to `universe`.
pub fn parse_ci_triple_interning(text: &str, universe: &mut Universe) -> Result<CITriple> {
    let raw = parse_raw(text)?;
    if raw.kind != 'I' {
        return Err(ParseError::new(1, 1, "expected a CI triple `I(...)`").into());
    }
    match build_term(raw, universe, true)? {
        Term::Mutual(t) => Ok(t),
        Term::Entropy { .. } => unreachable!(),
    }
}

/// Parses either `I(X;Y|Z)` or `H(X|Y)` against a fixed universe.
pub fn parse_term(text: &str, universe: &Universe) -> Result<Term> {
    let raw = parse_raw(text)?;
    let mut u = universe.clone();
    build_term(raw, &mut u, false)
}

/// Parses a CI-set file: one `I(...)` per line, `#` comments, and an optional
/// leading `vars <name>...` line fixing the universe order.
///
/// Names not declared by `vars` are appended to `universe` in order of first use.
pub fn parse_ci_set(text: &str, universe: &mut Universe) -> Result<CISet> {
    let mut set = CISet::new();
    for (lineno, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        let trimmed = body.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let offset = body.len() - trimmed.len();
        if let Some(rest) = trimmed.strip_prefix("vars") {
            if rest.starts_with(char::is_whitespace) || rest.is_empty() {
                if !set.is_empty() {
                    return Err(ParseError::new(
                        lineno + 1,
                        offset + 1,
                        "`vars` must precede all triples",
                    )
                    .into());
                }
                for name in rest.split(|c: char| c.is_whitespace() || c == ',') {
                    if !name.is_empty() {
                        universe.intern(name)?;
                    }
                }
                continue;
            }
        }
        let t = parse_ci_triple_interning(trimmed, universe).map_err(|e| match e {
            Error::Parse(p) => Error::Parse(p.at_line(lineno + 1, offset)),
            other => other,
        })?;
        set.insert(t);
    }
    Ok(set)
}
