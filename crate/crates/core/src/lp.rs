//! Exact linear programming over the Shannon cone.
//!
//! Points are set functions `h` on the nonempty subsets of `n ≤ 5` variables,
//! constrained by the elemental inequalities. All arithmetic is rational.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::{BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polymatroid::PolymatroidTable;
use crate::triple::{CISet, CITriple};
use crate::value::format_rational;
use crate::varset::{Universe, VarSet};

/// Largest universe accepted by the cone programs.
pub const MAX_LP_VARS: usize = 5;

/// Pivot budget; Bland's rule terminates long before this on cone programs.
const PIVOT_LIMIT: usize = 1_000_000;

/// `Σ c_S·h(S)` over nonempty subsets `S`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearFunctional {
    coeffs: BTreeMap<u32, BigRational>,
}

impl LinearFunctional {
    pub fn zero() -> Self {
        LinearFunctional::default()
    }

    /// Adds `c·h(set)`; terms on the empty set vanish since `h(∅) = 0`.
    pub fn add_term(&mut self, set: VarSet, c: &BigRational) {
        if set.is_empty() || c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(set.bits()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&set.bits());
        }
    }

    /// `h(zx) + h(zy) − h(zxy) − h(z)`.
    pub fn cmi(t: &CITriple) -> Self {
        let mut f = LinearFunctional::zero();
        f.add_cmi(t, &BigRational::one());
        f
    }

    fn add_cmi(&mut self, t: &CITriple, c: &BigRational) {
        let (x, y, z) = (t.x(), t.y(), t.z());
        self.add_term(z | x, c);
        self.add_term(z | y, c);
        self.add_term(z | x | y, &-c);
        self.add_term(z, &-c);
    }

    /// `h(Σ)`.
    pub fn sum_cmi(sigma: &CISet) -> Self {
        let mut f = LinearFunctional::zero();
        for t in sigma {
            f.add_cmi(t, &BigRational::one());
        }
        f
    }

    pub fn entropy(set: VarSet) -> Self {
        let mut f = LinearFunctional::zero();
        f.add_term(set, &BigRational::one());
        f
    }

    pub fn plus(&self, other: &Self, k: &BigRational) -> Self {
        let mut f = self.clone();
        for (&m, c) in &other.coeffs {
            f.add_term(VarSet::from_bits(m), &(c * k));
        }
        f
    }

    pub fn terms(&self) -> impl Iterator<Item = (VarSet, &BigRational)> {
        self.coeffs.iter().map(|(&m, c)| (VarSet::from_bits(m), c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn evaluate(&self, h: &PolymatroidTable<BigRational>) -> BigRational {
        self.terms().map(|(s, c)| c * h.get(s)).sum()
    }

    pub fn render(&self, universe: &Universe) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (s, c)) in self.terms().enumerate() {
            let sign = match (k, c.is_negative()) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            let mag = c.abs();
            let coeff = if mag.is_one() { String::new() } else { format!("{}*", format_rational(&mag)) };
            let _ = write!(out, "{sign}{coeff}h{}", universe.braces(s));
        }
        out
    }
}

fn check_lp_cap(n: usize) -> Result<()> {
    if n == 0 || n > MAX_LP_VARS {
        return Err(Error::CapExceeded {
            what: "the Shannon-cone LP",
            n,
            max: MAX_LP_VARS,
        });
    }
    Ok(())
}

/// The elemental generating set of the Shannon cone: `h(Ω) − h(Ω∖i) ≥ 0` for
/// each `i`, then `I(i;j|K) ≥ 0` for `i < j` and `K ⊆ Ω∖{i,j}`.
pub fn elemental_inequalities(n: usize) -> Result<Vec<LinearFunctional>> {
    check_lp_cap(n)?;
    let full = VarSet::full(n);
    let one = BigRational::one();
    let mut rows = Vec::new();
    for i in 0..n {
        let mut f = LinearFunctional::zero();
        f.add_term(full, &one);
        f.add_term(full - VarSet::singleton(i), &-one.clone());
        rows.push(f);
    }
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (VarSet::singleton(i), VarSet::singleton(j));
            for k in (full - a - b).subsets() {
                rows.push(LinearFunctional::cmi(&CITriple::canonical(a, b, k)));
            }
        }
    }
    Ok(rows)
}

/// `max objective` over the elemental cone intersected with `normalization ≤ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeProgram {
    pub n: usize,
    pub rows: Vec<LinearFunctional>,
    pub objective: LinearFunctional,
    pub normalization: LinearFunctional,
}

impl ConeProgram {
    pub fn new(n: usize, objective: LinearFunctional, normalization: LinearFunctional) -> Result<Self> {
        Ok(ConeProgram {
            n,
            rows: elemental_inequalities(n)?,
            objective,
            normalization,
        })
    }

    /// Plain-text listing of the program for external audit.
    pub fn to_text(&self, universe: &Universe) -> String {
        let mut out = format!("program vars {}\n", universe.names().join(" "));
        let _ = writeln!(out, "maximize {}", self.objective.render(universe));
        let _ = writeln!(out, "subject to {} <= 1", self.normalization.render(universe));
        let _ = writeln!(out, "rows {}", self.rows.len());
        for r in &self.rows {
            let _ = writeln!(out, "  {} >= 0", r.render(universe));
        }
        out
    }

    fn to_linear_program(&self) -> LinearProgram {
        let width = (1usize << self.n) - 1;
        let dense = |f: &LinearFunctional| {
            let mut v = vec![BigRational::zero(); width];
            for (s, c) in f.terms() {
                v[s.bits() as usize - 1] = c.clone();
            }
            v
        };
        let mut lp = LinearProgram::new(dense(&self.objective));
        for r in &self.rows {
            lp.add_constraint(dense(r), Relation::Ge, BigRational::zero());
        }
        lp.add_constraint(dense(&self.normalization), Relation::Le, BigRational::one());
        lp
    }

    pub fn solve(&self) -> Result<ConeOutcome> {
        Ok(match self.to_linear_program().solve()? {
            LpOutcome::Optimal { value, point } => {
                let mut values = vec![BigRational::zero()];
                values.extend(point);
                let h = PolymatroidTable::new(self.n, values)?;
                if !h.satisfies_elemental() || !h.is_polymatroid() {
                    return Err(Error::Internal("simplex returned a point outside the cone".into()));
                }
                ConeOutcome::Optimal { value, point: h }
            }
            LpOutcome::Unbounded => ConeOutcome::Unbounded,
            LpOutcome::Infeasible => return Err(Error::Infeasible),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConeOutcome {
    Optimal {
        value: BigRational,
        point: PolymatroidTable<BigRational>,
    },
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal {
        value: BigRational,
        point: Vec<BigRational>,
    },
    Unbounded,
    Infeasible,
}

/// `max c·x` subject to linear constraints and `x ≥ 0`; dense, exact, two-phase.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    objective: Vec<BigRational>,
    constraints: Vec<(Vec<BigRational>, Relation, BigRational)>,
}

impl LinearProgram {
    pub fn new(objective: Vec<BigRational>) -> Self {
        LinearProgram {
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn add_constraint(&mut self, coeffs: Vec<BigRational>, rel: Relation, rhs: BigRational) {
        assert_eq!(coeffs.len(), self.objective.len(), "constraint width");
        self.constraints.push((coeffs, rel, rhs));
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        Tableau::build(self).run()
    }
}

/// Column layout: structural variables, then one slack/surplus per inequality,
/// then one artificial per `≥`/`=` row. The last entry of each row is the rhs.
struct Tableau {
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    structural: usize,
    first_artificial: usize,
    objective: Vec<BigRational>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let structural = lp.objective.len();
        let mut normalized = Vec::new();
        for (coeffs, rel, rhs) in &lp.constraints {
            if rhs.is_negative() {
                let flipped = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                normalized.push((coeffs.iter().map(|c| -c).collect::<Vec<_>>(), flipped, -rhs));
            } else {
                normalized.push((coeffs.clone(), *rel, rhs.clone()));
            }
        }
        let slacks = normalized.iter().filter(|c| c.1 != Relation::Eq).count();
        let artificials = normalized.iter().filter(|c| c.1 != Relation::Le).count();
        let first_artificial = structural + slacks;
        let width = first_artificial + artificials + 1;
        let mut rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let (mut next_slack, mut next_art) = (structural, first_artificial);
        for (coeffs, rel, rhs) in normalized {
            let mut row = vec![BigRational::zero(); width];
            row[..structural].clone_from_slice(&coeffs);
            row[width - 1] = rhs;
            match rel {
                Relation::Le => {
                    row[next_slack] = BigRational::one();
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -BigRational::one();
                    next_slack += 1;
                    row[next_art] = BigRational::one();
                    basis.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = BigRational::one();
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            rows.push(row);
        }
        Tableau {
            rows,
            basis,
            structural,
            first_artificial,
            objective: lp.objective.clone(),
        }
    }

    fn width(&self) -> usize {
        self.rows.first().map_or(self.first_artificial + 1, Vec::len)
    }

    /// Reduced-cost row `c_j − c_B·B⁻¹A_j` for cost vector `cost` (by column).
    fn reduced(&self, cost: &[BigRational]) -> Vec<BigRational> {
        let w = self.width();
        let mut red: Vec<BigRational> = (0..w)
            .map(|j| cost.get(j).cloned().unwrap_or_else(BigRational::zero))
            .collect();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = cost.get(b).cloned().unwrap_or_else(BigRational::zero);
            if cb.is_zero() {
                continue;
            }
            for (r, a) in red.iter_mut().zip(row) {
                if !a.is_zero() {
                    *r -= &cb * a;
                }
            }
        }
        red
    }

    fn pivot(&mut self, red: &mut [BigRational], r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        for a in self.rows[r].iter_mut() {
            if !a.is_zero() {
                *a /= &p;
            }
        }
        let pivot_row = self.rows[r].clone();
        let nz: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for &j in &nz {
                row[j] -= &f * &pivot_row[j];
            }
        }
        if !red[col].is_zero() {
            let f = red[col].clone();
            for &j in &nz {
                red[j] -= &f * &pivot_row[j];
            }
        }
        self.basis[r] = col;
    }

    /// Bland's rule on columns `< limit`. Returns false when unbounded.
    fn optimize(&mut self, red: &mut [BigRational], limit: usize) -> Result<bool> {
        let rhs = self.width() - 1;
        for _ in 0..PIVOT_LIMIT {
            let Some(col) = (0..limit).find(|&j| red[j].is_positive()) else {
                return Ok(true);
            };
            let mut best: Option<(usize, BigRational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[col].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[col];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return Ok(false);
            };
            self.pivot(red, r, col);
        }
        Err(Error::Internal("simplex pivot limit reached".into()))
    }

    fn run(mut self) -> Result<LpOutcome> {
        let w = self.width();
        let rhs = w - 1;
        if self.first_artificial < rhs {
            // phase one: maximise −Σ artificials
            let mut cost = vec![BigRational::zero(); rhs];
            for c in cost.iter_mut().skip(self.first_artificial) {
                *c = -BigRational::one();
            }
            let mut red = self.reduced(&cost);
            self.optimize(&mut red, rhs)?;
            let infeasibility: BigRational = self
                .rows
                .iter()
                .zip(&self.basis)
                .filter(|(_, &b)| b >= self.first_artificial)
                .map(|(row, _)| row[rhs].clone())
                .sum();
            if infeasibility.is_positive() {
                return Ok(LpOutcome::Infeasible);
            }
            // drive remaining artificials out of the basis, dropping redundant rows
            let mut i = 0;
            while i < self.rows.len() {
                if self.basis[i] < self.first_artificial {
                    i += 1;
                    continue;
                }
                match (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(col) => {
                        let mut scratch = vec![BigRational::zero(); w];
                        self.pivot(&mut scratch, i, col);
                        i += 1;
                    }
                    None => {
                        self.rows.remove(i);
                        self.basis.remove(i);
                    }
                }
            }
            for row in &mut self.rows {
                row.drain(self.first_artificial..rhs);
            }
        }
        let cost = self.objective.clone();
        let mut red = self.reduced(&cost);
        let limit = self.first_artificial;
        if !self.optimize(&mut red, limit)? {
            return Ok(LpOutcome::Unbounded);
        }
        let rhs = self.width() - 1;
        let mut point = vec![BigRational::zero(); self.structural];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.structural {
                point[b] = row[rhs].clone();
            }
        }
        let value = self
            .objective
            .iter()
            .zip(&point)
            .map(|(c, x)| c * x)
            .sum();
        Ok(LpOutcome::Optimal { value, point })
    }
}

/// Least `λ` with `λ·h(Σ) ≥ h(τ)` on the whole Shannon cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LambdaBound {
    Finite(BigRational),
    Unbounded,
}

impl std::fmt::Display for LambdaBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LambdaBound::Finite(q) => f.write_str(&format_rational(q)),
            LambdaBound::Unbounded => f.write_str("unbounded"),
        }
    }
}

fn check_inputs(sigma: &CISet, tau: &CITriple, n: usize) -> Result<()> {
    check_lp_cap(n)?;
    sigma.check_universe(n)?;
    tau.check_universe(n)
}

/// `max I_h(τ)` over the cone subject to `h(Σ) ≤ 1`.
pub fn optimal_lambda(sigma: &CISet, tau: &CITriple, n: usize) -> Result<LambdaBound> {
    check_inputs(sigma, tau, n)?;
    let program = ConeProgram::new(n, LinearFunctional::cmi(tau), LinearFunctional::sum_cmi(sigma))?;
    Ok(match program.solve()? {
        ConeOutcome::Optimal { value, .. } => LambdaBound::Finite(value),
        ConeOutcome::Unbounded => LambdaBound::Unbounded,
    })
}

/// Whether `λ·h(Σ) ≥ h(τ)` holds on the whole cone: the maximum of
/// `I_h(τ) − λ·h(Σ)` over the cone with `h(Ω) ≤ 1` is zero.
pub fn check_ai_gamma(sigma: &CISet, tau: &CITriple, lambda: &BigRational, n: usize) -> Result<bool> {
    check_inputs(sigma, tau, n)?;
    let objective = LinearFunctional::cmi(tau).plus(&LinearFunctional::sum_cmi(sigma), &-lambda);
    let program = ConeProgram::new(n, objective, LinearFunctional::entropy(VarSet::full(n)))?;
    match program.solve()? {
        ConeOutcome::Optimal { value, .. } => Ok(value.is_zero()),
        ConeOutcome::Unbounded => Err(Error::Internal("normalised program is unbounded".into())),
    }
}

/// A cone point with `h(Σ) = 0` and `I_h(τ) = 1`, when one exists.
pub fn separating_point(
    sigma: &CISet,
    tau: &CITriple,
    n: usize,
) -> Result<Option<PolymatroidTable<BigRational>>> {
    check_inputs(sigma, tau, n)?;
    let width = (1usize << n) - 1;
    let program = ConeProgram::new(n, LinearFunctional::cmi(tau), LinearFunctional::entropy(VarSet::full(n)))?;
    let mut lp = program.to_linear_program();
    let mut row = vec![BigRational::zero(); width];
    for (s, c) in LinearFunctional::sum_cmi(sigma).terms() {
        row[s.bits() as usize - 1] = c.clone();
    }
    lp.add_constraint(row, Relation::Le, BigRational::zero());
    match lp.solve()? {
        LpOutcome::Optimal { value, point } if value.is_positive() => {
            let mut values = vec![BigRational::zero()];
            values.extend(point.into_iter().map(|v| v / &value));
            let h = PolymatroidTable::new(n, values)?;
            if !h.satisfies_elemental() || !h.sum_cmi(sigma).is_zero() || !h.cmi(tau).is_one() {
                return Err(Error::Internal("separating point failed verification".into()));
            }
            Ok(Some(h))
        }
        LpOutcome::Optimal { .. } => Ok(None),
        LpOutcome::Unbounded => Err(Error::Internal("normalised program is unbounded".into())),
        LpOutcome::Infeasible => Err(Error::Infeasible),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn set(ts: &[CITriple]) -> CISet {
        ts.iter().copied().collect()
    }

    #[test]
    fn row_counts() {
        assert_eq!(elemental_inequalities(2).unwrap().len(), 3);
        assert_eq!(elemental_inequalities(3).unwrap().len(), 9);
        assert_eq!(elemental_inequalities(4).unwrap().len(), 28);
        assert_eq!(elemental_inequalities(5).unwrap().len(), 85);
        assert!(elemental_inequalities(6).is_err());
    }

    #[test]
    fn rows_hold_on_cardinality() {
        let h = PolymatroidTable::from_fn(4, |s| q(s.len() as i64, 1));
        for r in elemental_inequalities(4).unwrap() {
            assert!(!r.evaluate(&h).is_negative());
        }
    }

    #[test]
    fn generic_lp() {
        // max x + y s.t. x + 2y ≤ 4, 3x + y ≤ 6 → (8/5, 6/5), value 14/5
        let mut lp = LinearProgram::new(vec![q(1, 1), q(1, 1)]);
        lp.add_constraint(vec![q(1, 1), q(2, 1)], Relation::Le, q(4, 1));
        lp.add_constraint(vec![q(3, 1), q(1, 1)], Relation::Le, q(6, 1));
        let LpOutcome::Optimal { value, point } = lp.solve().unwrap() else { panic!() };
        assert_eq!(value, q(14, 5));
        assert_eq!(point, vec![q(8, 5), q(6, 5)]);
    }

    #[test]
    fn generic_lp_phase_one() {
        // max −x s.t. x ≥ 2, x + y = 3 → x = 2
        let mut lp = LinearProgram::new(vec![q(-1, 1), q(0, 1)]);
        lp.add_constraint(vec![q(1, 1), q(0, 1)], Relation::Ge, q(2, 1));
        lp.add_constraint(vec![q(1, 1), q(1, 1)], Relation::Eq, q(3, 1));
        let LpOutcome::Optimal { value, point } = lp.solve().unwrap() else { panic!() };
        assert_eq!(value, q(-2, 1));
        assert_eq!(point, vec![q(2, 1), q(1, 1)]);
        let mut bad = LinearProgram::new(vec![q(1, 1)]);
        bad.add_constraint(vec![q(1, 1)], Relation::Le, q(1, 1));
        bad.add_constraint(vec![q(1, 1)], Relation::Ge, q(2, 1));
        assert_eq!(bad.solve().unwrap(), LpOutcome::Infeasible);
        let mut open = LinearProgram::new(vec![q(1, 1)]);
        open.add_constraint(vec![q(1, 1)], Relation::Ge, q(1, 1));
        assert_eq!(open.solve().unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn trivial_cone_programs() {
        let zero = ConeProgram::new(2, LinearFunctional::zero(), LinearFunctional::entropy(VarSet::full(2))).unwrap();
        let ConeOutcome::Optimal { value, point } = zero.solve().unwrap() else { panic!() };
        assert!(value.is_zero());
        assert!(point.values().iter().all(Zero::is_zero));
        let single = VarSet::singleton(0);
        let p = ConeProgram::new(1, LinearFunctional::entropy(single), LinearFunctional::entropy(single)).unwrap();
        let ConeOutcome::Optimal { value, .. } = p.solve().unwrap() else { panic!() };
        assert_eq!(value, q(1, 1));
    }

    #[test]
    fn chain_example_lambda_one() {
        let sigma = set(&[CITriple::of(&[0], &[1], &[]), CITriple::of(&[0], &[2], &[1])]);
        let tau = CITriple::of(&[0], &[2], &[]);
        assert_eq!(optimal_lambda(&sigma, &tau, 3).unwrap(), LambdaBound::Finite(q(1, 1)));
        assert!(check_ai_gamma(&sigma, &tau, &q(1, 1), 3).unwrap());
        assert!(!check_ai_gamma(&sigma, &tau, &q(99, 100), 3).unwrap());
        assert_eq!(separating_point(&sigma, &tau, 3).unwrap(), None);
    }

    #[test]
    fn marginal_does_not_give_conditional() {
        let sigma = set(&[CITriple::of(&[0], &[1], &[])]);
        let tau = CITriple::of(&[0], &[1], &[2]);
        assert_eq!(optimal_lambda(&sigma, &tau, 3).unwrap(), LambdaBound::Unbounded);
        let h = separating_point(&sigma, &tau, 3).unwrap().unwrap();
        assert!(h.is_polymatroid());
    }

    #[test]
    fn tightness_chain_is_one() {
        for n in 2..=4 {
            let sigma: CISet = (1..n)
                .map(|i| {
                    CITriple::canonical(
                        VarSet::singleton(0),
                        VarSet::singleton(i),
                        VarSet::from_indices(1..i),
                    )
                })
                .collect();
            let tau = CITriple::canonical(VarSet::singleton(0), VarSet::from_indices(1..n), VarSet::EMPTY);
            assert_eq!(optimal_lambda(&sigma, &tau, n).unwrap(), LambdaBound::Finite(q(1, 1)));
        }
    }

    #[test]
    fn program_dump() {
        let u = Universe::numbered(2);
        let p = ConeProgram::new(2, LinearFunctional::cmi(&CITriple::of(&[0], &[1], &[])), LinearFunctional::zero()).unwrap();
        let text = p.to_text(&u);
        assert!(text.starts_with("program vars X1 X2\nmaximize h{X1} + h{X2} - h{X1,X2}\n"), "{text}");
        assert!(text.contains("rows 3\n"));
    }

    #[test]
    fn deterministic() {
        let sigma = set(&[CITriple::of(&[0], &[1, 2], &[])]);
        let tau = CITriple::of(&[0], &[2], &[1]);
        let a = optimal_lambda(&sigma, &tau, 3).unwrap();
        assert_eq!(a, optimal_lambda(&sigma, &tau, 3).unwrap());
        assert_eq!(a, LambdaBound::Finite(q(1, 1)));
    }
}
