//! Directed acyclic graphs, their recursive basis, and d-separation.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, ParseError, Result};
use crate::triple::{CISet, CITriple};
use crate::varset::{Universe, VarSet, MAX_VARS};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    universe: Universe,
    parents: Vec<VarSet>,
}

impl Dag {
    /// Builds a graph from `(parent, child)` index pairs.
    pub fn new(universe: Universe, edges: &[(usize, usize)]) -> Result<Self> {
        let n = universe.len();
        let mut parents = vec![VarSet::EMPTY; n];
        for &(p, c) in edges {
            for i in [p, c] {
                if i >= n {
                    return Err(Error::OutOfUniverse { index: i, n });
                }
            }
            if p == c {
                return Err(Error::Cycle);
            }
            parents[c].insert(p);
        }
        let dag = Dag { universe, parents };
        if dag.kahn().len() < n {
            return Err(Error::Cycle);
        }
        Ok(dag)
    }

    /// Graph over `X1..Xn`.
    pub fn numbered(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Dag::new(Universe::numbered(n), edges)
    }

    /// Parses the line format: `var <name>` declarations, then `edge <parent> <child>`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut universe = Universe::default();
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let body = line.split('#').next().unwrap_or("");
            let mut words = Vec::new();
            let mut col = 0;
            for piece in body.split(char::is_whitespace) {
                if !piece.is_empty() {
                    words.push((piece, col + 1));
                }
                col += piece.chars().count() + 1;
            }
            let Some(&(keyword, kcol)) = words.first() else {
                continue;
            };
            match (keyword, words.len()) {
                ("var", 2) => {
                    let (name, ncol) = words[1];
                    if !edges.is_empty() {
                        return Err(ParseError::new(line_no, kcol, "`var` after `edge`").into());
                    }
                    if universe.index_of(name).is_some() {
                        return Err(ParseError::new(
                            line_no,
                            ncol,
                            format!("duplicate variable `{name}`"),
                        )
                        .into());
                    }
                    universe.add(name)?;
                }
                ("edge", 3) => {
                    let mut ends = [0; 2];
                    for (slot, &(name, ncol)) in ends.iter_mut().zip(&words[1..]) {
                        *slot = universe.index_of(name).ok_or_else(|| {
                            ParseError::new(line_no, ncol, format!("unknown variable `{name}`"))
                        })?;
                    }
                    edges.push((ends[0], ends[1]));
                }
                ("var", _) | ("edge", _) => {
                    return Err(ParseError::new(
                        line_no,
                        kcol,
                        format!("wrong number of fields for `{keyword}`"),
                    )
                    .into())
                }
                _ => {
                    return Err(ParseError::new(
                        line_no,
                        kcol,
                        format!("expected `var` or `edge`, found `{keyword}`"),
                    )
                    .into())
                }
            }
        }
        Dag::new(universe, &edges)
    }

    /// Renders in the format accepted by [`Dag::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for name in self.universe.names() {
            out.push_str(&format!("var {name}\n"));
        }
        for (c, ps) in self.parents.iter().enumerate() {
            for p in ps.iter() {
                out.push_str(&format!(
                    "edge {} {}\n",
                    self.universe.name(p),
                    self.universe.name(c)
                ));
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.parents.len()
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn parents(&self, i: usize) -> VarSet {
        self.parents[i]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.parents
            .iter()
            .enumerate()
            .flat_map(|(c, ps)| ps.iter().map(move |p| (p, c)))
            .collect()
    }

    fn kahn(&self) -> Vec<usize> {
        let n = self.n();
        let mut indeg: Vec<usize> = self.parents.iter().map(|p| p.len()).collect();
        let mut order = Vec::with_capacity(n);
        let mut done = vec![false; n];
        // Smallest ready index first; n is tiny so a linear scan is fine.
        while let Some(i) = (0..n).find(|&i| !done[i] && indeg[i] == 0) {
            done[i] = true;
            order.push(i);
            for (c, p) in self.parents.iter().enumerate() {
                if p.contains(i) {
                    indeg[c] -= 1;
                }
            }
        }
        order
    }

    /// Kahn's algorithm, breaking ties by smallest declaration index.
    pub fn topological_order(&self) -> Vec<usize> {
        self.kahn()
    }

    pub fn is_topological_order(&self, order: &[usize]) -> bool {
        let n = self.n();
        if order.len() != n {
            return false;
        }
        let mut seen = VarSet::EMPTY;
        for &i in order {
            if i >= n || seen.contains(i) || !self.parents[i].is_subset(seen) {
                return false;
            }
            seen.insert(i);
        }
        true
    }

    /// `(X_i; earlier ∖ parents | parents)` for each node along `order`, skipping
    /// nodes whose earlier non-parents are empty.
    pub fn recursive_basis(&self, order: &[usize]) -> Result<CISet> {
        if !self.is_topological_order(order) {
            return Err(Error::NotTopological);
        }
        let mut basis = CISet::new();
        let mut earlier = VarSet::EMPTY;
        for &i in order {
            let rest = earlier - self.parents[i];
            if !rest.is_empty() {
                basis.insert(CITriple::canonical(VarSet::singleton(i), rest, self.parents[i]));
            }
            earlier.insert(i);
        }
        Ok(basis)
    }

    /// Recursive basis along [`Dag::topological_order`].
    pub fn default_basis(&self) -> CISet {
        self.recursive_basis(&self.topological_order())
            .expect("own topological order is valid")
    }

    /// `set` together with all of its ancestors.
    pub fn ancestral_closure(&self, set: VarSet) -> VarSet {
        let mut closed = set;
        let mut stack: Vec<usize> = set.iter().collect();
        while let Some(v) = stack.pop() {
            for p in (self.parents[v] - closed).iter() {
                closed.insert(p);
                stack.push(p);
            }
        }
        closed
    }

    /// True iff `z` d-separates `x` from `y`.
    ///
    /// Tested on the moral graph of the ancestral closure of `x ∪ y ∪ z`: after
    /// deleting `z`, no path may connect `x` and `y`.
    pub fn d_separated(&self, x: VarSet, y: VarSet, z: VarSet) -> Result<bool> {
        let t = CITriple::new(x, y, z)?;
        t.check_universe(self.n())?;
        let keep = self.ancestral_closure(t.vars());
        let n = self.n();
        let mut adj = vec![VarSet::EMPTY; n];
        for v in keep.iter() {
            let ps = self.parents[v];
            for p in ps.iter() {
                adj[v].insert(p);
                adj[p].insert(v);
                // marry co-parents
                adj[p] = adj[p] | (ps - VarSet::singleton(p));
            }
        }
        let open = keep - z;
        let mut reached = x;
        let mut queue: VecDeque<usize> = x.iter().collect();
        while let Some(v) = queue.pop_front() {
            for w in (adj[v] & open).iter() {
                if y.contains(w) {
                    return Ok(false);
                }
                if !reached.contains(w) {
                    reached.insert(w);
                    queue.push_back(w);
                }
            }
        }
        Ok(true)
    }
}

/// Random DAG on `X1..Xn`: a seeded random permutation fixes a causal order and
/// each forward pair becomes an edge with probability `edge_prob`.
pub fn random_dag(n: usize, edge_prob: f64, seed: u64) -> Dag {
    assert!(n <= MAX_VARS);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(edge_prob) {
                edges.push((perm[a], perm[b]));
            }
        }
    }
    Dag::numbered(n, &edges).expect("forward edges are acyclic")
}

/// Every labelled DAG on `X1..Xn` (543 for n = 4). Intended for n ≤ 4.
pub fn all_dags(n: usize) -> Vec<Dag> {
    assert!(n <= 5, "enumeration is exponential in n^2");
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        if let Ok(d) = Dag::numbered(n, &edges) {
            out.push(d);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(ix: &[usize]) -> VarSet {
        VarSet::from_indices(ix.iter().copied())
    }

    fn chain() -> Dag {
        Dag::numbered(3, &[(0, 1), (1, 2)]).unwrap()
    }

    fn collider() -> Dag {
        Dag::numbered(3, &[(0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn rejects_cycles() {
        assert!(matches!(Dag::numbered(2, &[(0, 1), (1, 0)]), Err(Error::Cycle)));
        assert!(matches!(Dag::numbered(2, &[(1, 1)]), Err(Error::Cycle)));
    }

    #[test]
    fn topological_order_prefers_small_indices() {
        let d = Dag::numbered(4, &[(3, 0), (2, 1)]).unwrap();
        assert_eq!(d.topological_order(), vec![2, 1, 3, 0]);
        assert!(d.is_topological_order(&[3, 2, 0, 1]));
        assert!(!d.is_topological_order(&[0, 3, 2, 1]));
        assert!(!d.is_topological_order(&[2, 1, 3]));
    }

    #[test]
    fn basis_chain_drops_empty_remainder() {
        let b = chain().recursive_basis(&[0, 1, 2]).unwrap();
        assert_eq!(b.as_slice(), &[CITriple::of(&[2], &[0], &[1])]);
    }

    #[test]
    fn basis_collider() {
        let b = collider().recursive_basis(&[0, 1, 2]).unwrap();
        assert_eq!(b.as_slice(), &[CITriple::of(&[1], &[0], &[])]);
    }

    #[test]
    fn basis_empty_graph() {
        let d = Dag::numbered(3, &[]).unwrap();
        let b = d.recursive_basis(&[0, 1, 2]).unwrap();
        assert_eq!(
            b.as_slice(),
            &[CITriple::of(&[1], &[0], &[]), CITriple::of(&[2], &[0, 1], &[])]
        );
    }

    #[test]
    fn basis_rejects_bad_order() {
        assert!(matches!(
            chain().recursive_basis(&[1, 0, 2]),
            Err(Error::NotTopological)
        ));
    }

    #[test]
    fn basis_covers_predecessors() {
        for seed in 0..50 {
            let d = random_dag(6, 0.4, seed);
            let order = d.topological_order();
            let basis = d.recursive_basis(&order).unwrap();
            assert!(basis.len() <= d.n());
            let mut before = vec![VarSet::EMPTY; d.n()];
            let mut earlier = VarSet::EMPTY;
            for &i in &order {
                before[i] = earlier;
                earlier.insert(i);
            }
            for t in &basis {
                let owned = [(t.x(), t.y()), (t.y(), t.x())].into_iter().any(|(own, rest)| {
                    own.len() == 1 && {
                        let i = own.first().unwrap();
                        (rest | t.z()) == before[i] && t.z() == d.parents(i)
                    }
                });
                assert!(owned, "{t:?}");
            }
            // the last node's triple, when present, is saturated
            let last = VarSet::singleton(*order.last().unwrap());
            if let Some(t) = basis.iter().find(|t| t.x() == last || t.y() == last) {
                assert!(t.is_saturated(6));
            }
        }
    }

    #[test]
    fn dsep_chain_and_collider() {
        assert!(chain().d_separated(s(&[0]), s(&[2]), s(&[1])).unwrap());
        assert!(!chain().d_separated(s(&[0]), s(&[2]), s(&[])).unwrap());
        assert!(collider().d_separated(s(&[0]), s(&[1]), s(&[])).unwrap());
        assert!(!collider().d_separated(s(&[0]), s(&[1]), s(&[2])).unwrap());
    }

    #[test]
    fn dsep_descendant_of_collider_activates() {
        // 0 -> 2 <- 1, 2 -> 3
        let d = Dag::numbered(4, &[(0, 2), (1, 2), (2, 3)]).unwrap();
        assert!(!d.d_separated(s(&[0]), s(&[1]), s(&[3])).unwrap());
        assert!(d.d_separated(s(&[0]), s(&[1]), s(&[])).unwrap());
    }

    #[test]
    fn dsep_rejects_overlap() {
        assert!(chain().d_separated(s(&[0]), s(&[0]), s(&[])).is_err());
        assert!(chain().d_separated(s(&[0]), s(&[1]), s(&[1])).is_err());
    }

    #[test]
    fn dsep_is_symmetric() {
        for seed in 0..30 {
            let d = random_dag(5, 0.5, seed);
            for t in crate::enumerate::all_triples(5) {
                assert_eq!(
                    d.d_separated(t.x(), t.y(), t.z()).unwrap(),
                    d.d_separated(t.y(), t.x(), t.z()).unwrap()
                );
            }
        }
    }

    #[test]
    fn parse_and_render() {
        let text = "# chain\nvar X1\nvar X2\nvar X3\nedge X1 X2\nedge X2 X3 # tail\n";
        let d = Dag::parse(text).unwrap();
        assert_eq!(d, chain());
        assert_eq!(Dag::parse(&d.to_text()).unwrap(), d);
    }

    #[test]
    fn parse_errors_have_positions() {
        let err = Dag::parse("var A\nedge A  B\n").unwrap_err();
        match err {
            Error::Parse(p) => assert_eq!((p.line, p.column), (2, 9)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            Dag::parse("var A\nvar B\nedge A B\nedge B A\n"),
            Err(Error::Cycle)
        ));
        assert!(Dag::parse("node A\n").is_err());
        assert!(Dag::parse("var A\nvar A\n").is_err());
    }

    #[test]
    fn dag_counts() {
        assert_eq!(all_dags(1).len(), 1);
        assert_eq!(all_dags(2).len(), 3);
        assert_eq!(all_dags(3).len(), 25);
        assert_eq!(all_dags(4).len(), 543);
    }
}
