//! Decision procedures with certificates: recursive bases of DAGs (`λ = 1`),
//! marginal antecedents (`λ = |A||B|`), the semigraphoid closure, and
//! sampling-based validation of a claimed bound.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use num::{BigRational, One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dag::Dag;
use crate::distribution::{network_distribution, parity_binary, random_distribution, JointDistribution};
use crate::error::{Error, Result};
use crate::imeasure::{implies_positive, single_atom_polymatroid};
use crate::polymatroid::PolymatroidTable;
use crate::triple::{CISet, CITriple};
use crate::value::format_rational;
use crate::varset::{Universe, VarSet};

/// Largest universe for [`semigraphoid_closure`].
pub const MAX_CLOSURE_VARS: usize = 5;

/// Largest universe for which a parity refutation is built.
pub const MAX_PARITY_VARS: usize = 20;

/// Slack allowed by [`validate_bound`].
pub const VALIDATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    Recursive,
    Marginal,
}

/// One step of a marginal cover: `elemental` is bounded using `sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverStep {
    pub elemental: CITriple,
    pub sigma: CITriple,
}

/// The chain of antecedents bounding one elemental of the consequent. Every
/// step but the last trades part of the conditioning set for one antecedent;
/// the last step covers the remaining elemental outright.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    pub elemental: CITriple,
    pub steps: Vec<CoverStep>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Evidence {
    /// Both routes agreed: d-separation and atom inclusion on the basis.
    Recursive { basis: CISet },
    Marginal { covers: Vec<Cover> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    Atom(VarSet),
    Elemental(CITriple),
    /// Seed of the violating distribution from `network_distribution`.
    Network { seed: u64 },
}

/// An exact model with `h(Σ) = 0` and `h(τ) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum Refutation {
    Polymatroid(PolymatroidTable<BigRational>),
    Distribution(JointDistribution),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelaxationCertificate {
    pub tau: CITriple,
    pub implied: bool,
    pub lambda: Option<BigRational>,
    pub kind: CertificateKind,
    pub evidence: Evidence,
    pub witness: Option<Witness>,
    pub refutation: Option<Refutation>,
    /// Largest number of elementals charged to a single antecedent; a valid
    /// but informational factor for marginal certificates.
    pub tight_lambda: Option<BigRational>,
}

impl RelaxationCertificate {
    /// Line-oriented report with a fixed field order.
    pub fn report(&self, universe: &Universe) -> String {
        let mut out = String::new();
        if self.implied {
            let lambda = self.lambda.as_ref().map(format_rational).unwrap_or_default();
            let _ = writeln!(out, "IMPLIED lambda={lambda}");
        } else {
            let witness = match self.witness {
                Some(Witness::Atom(a)) => universe.braces(a),
                Some(Witness::Elemental(t)) => t.display(universe).to_string(),
                Some(Witness::Network { seed }) => format!("network-seed:{seed}"),
                None => String::new(),
            };
            let _ = writeln!(out, "NOT-IMPLIED witness={witness}");
        }
        let kind = match self.kind {
            CertificateKind::Recursive => "recursive",
            CertificateKind::Marginal => "marginal",
        };
        let _ = writeln!(out, "kind={kind}");
        match &self.evidence {
            Evidence::Recursive { basis } => {
                let _ = writeln!(out, "source=d-separation,atom-inclusion");
                for t in basis {
                    let _ = writeln!(out, "basis {}", t.display(universe));
                }
            }
            Evidence::Marginal { covers } => {
                if let Some(t) = &self.tight_lambda {
                    let _ = writeln!(out, "tight_lambda={}", format_rational(t));
                }
                for c in covers {
                    let _ = write!(out, "cover elemental={}", c.elemental.display(universe));
                    for s in &c.steps {
                        let _ = write!(out, " sigma={}", s.sigma.display(universe));
                    }
                    out.push('\n');
                }
            }
        }
        if let Some(r) = &self.refutation {
            let name = match (r, self.witness) {
                (Refutation::Polymatroid(_), _) => "single-atom-polymatroid",
                (Refutation::Distribution(_), Some(Witness::Network { .. })) => "network-distribution",
                (Refutation::Distribution(_), _) => "parity-distribution",
            };
            let _ = writeln!(out, "refutation={name}");
            let _ = writeln!(out, "h_sigma=0");
            let h_tau = match r {
                Refutation::Polymatroid(h) => format_rational(&h.cmi(&self.tau)),
                Refutation::Distribution(d) => match d.exact_cmi(&self.tau).ok().and_then(|v| v.to_rational()) {
                    Some(q) => format_rational(&q),
                    None => format!("{:.12}", d.cmi(&self.tau)),
                },
            };
            let _ = writeln!(out, "h_tau={h_tau}");
        }
        out
    }
}

fn to_rational(v: usize) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Recursive-basis check along the DAG's default topological order.
pub fn check_recursive(dag: &Dag, tau: &CITriple) -> Result<RelaxationCertificate> {
    check_recursive_with_order(dag, &dag.topological_order(), tau)
}

/// Attempts at drawing a network distribution that violates `τ`.
const NETWORK_ATTEMPTS: u64 = 64;

/// Decides `τ` from the recursive basis along `order` by d-separation.
///
/// Atom inclusion on the basis is computed alongside. Every d-separated `τ`
/// must pass it; the converse fails (a collider `X1→X3←X2` gives
/// `m(X1;X2|X3) ⊆ m(X1;X2)`), so a negative verdict is refuted by a
/// single-atom polymatroid when the atom test supplies a witness, and
/// otherwise by an exact distribution factorising along the DAG.
pub fn check_recursive_with_order(
    dag: &Dag,
    order: &[usize],
    tau: &CITriple,
) -> Result<RelaxationCertificate> {
    let n = dag.n();
    tau.check_universe(n)?;
    let basis = dag.recursive_basis(order)?;
    let separated = dag.d_separated(tau.x(), tau.y(), tau.z())?;
    let verdict = implies_positive(&basis, tau, n)?;
    if separated && !verdict.implied {
        return Err(Error::Internal(format!(
            "{tau:?} is d-separated but its atoms are not covered by the basis"
        )));
    }
    if separated {
        return Ok(RelaxationCertificate {
            tau: *tau,
            implied: true,
            lambda: Some(BigRational::one()),
            kind: CertificateKind::Recursive,
            evidence: Evidence::Recursive { basis },
            witness: None,
            refutation: None,
            tight_lambda: None,
        });
    }
    let (witness, refutation) = match verdict.witness {
        Some(atom) => {
            let h = single_atom_polymatroid(atom, n)?;
            if !h.is_polymatroid() || !separates(&h, &basis, tau) {
                return Err(Error::Internal("single-atom refutation failed verification".into()));
            }
            (Witness::Atom(atom), Refutation::Polymatroid(h))
        }
        None => {
            let (seed, d) = violating_network(dag, &basis, tau)?;
            (Witness::Network { seed }, Refutation::Distribution(d))
        }
    };
    Ok(RelaxationCertificate {
        tau: *tau,
        implied: false,
        lambda: None,
        kind: CertificateKind::Recursive,
        evidence: Evidence::Recursive { basis },
        witness: Some(witness),
        refutation: Some(refutation),
        tight_lambda: None,
    })
}

/// First seeded network distribution with `h(Σ) = 0` and `h(τ) > 0`, exactly.
fn violating_network(dag: &Dag, basis: &CISet, tau: &CITriple) -> Result<(u64, JointDistribution)> {
    if dag.n() > MAX_PARITY_VARS {
        return Err(Error::CapExceeded {
            what: "a network refutation",
            n: dag.n(),
            max: MAX_PARITY_VARS,
        });
    }
    for seed in 0..NETWORK_ATTEMPTS {
        let d = network_distribution(dag, seed)?;
        if !d.exact_sum_cmi(basis)?.is_zero() {
            return Err(Error::Internal("network distribution violates its own basis".into()));
        }
        if !d.exact_cmi(tau)?.is_zero() {
            return Ok((seed, d));
        }
    }
    Err(Error::Internal(format!(
        "no violating network distribution for {tau:?} in {NETWORK_ATTEMPTS} attempts"
    )))
}

/// Bounds the elemental `e` by a chain of antecedents, or returns the
/// elemental at which no antecedent applies.
///
/// For `σ = (X;Y)` and `e = (a;b|C)` with `abC ⊆ XY`:
/// - `a ∈ X`, `b ∈ Y` gives `I(e) ≤ I(σ)` directly;
/// - `a, b` on one side `S` with `C` meeting the other side `T` gives
///   `I(a;b|C) ≤ I(a;b|C∩S) + I(σ)`, and the search continues on `(a;b|C∩S)`.
fn cover_elemental(e: CITriple, sigma: &CISet) -> std::result::Result<Vec<CoverStep>, CITriple> {
    let mut steps = Vec::new();
    let mut cur = e;
    loop {
        let (a, b, c) = (cur.x(), cur.y(), cur.z());
        let need = a | b | c;
        let sides = |s: &CITriple| [(s.x(), s.y()), (s.y(), s.x())];
        let direct = sigma.iter().find(|s| {
            need.is_subset(s.x() | s.y())
                && sides(s).iter().any(|&(x, y)| a.is_subset(x) && b.is_subset(y))
        });
        if let Some(s) = direct {
            steps.push(CoverStep { elemental: cur, sigma: *s });
            return Ok(steps);
        }
        let reduce = sigma.iter().find_map(|s| {
            if !need.is_subset(s.x() | s.y()) {
                return None;
            }
            sides(s).into_iter().find_map(|(side, other)| {
                ((a | b).is_subset(side) && c.intersects(other)).then_some((*s, c & side))
            })
        });
        match reduce {
            Some((s, rest)) => {
                steps.push(CoverStep { elemental: cur, sigma: s });
                cur = CITriple::canonical(a, b, rest);
            }
            None => return Err(cur),
        }
    }
}

/// Marginal-antecedent check over `n` variables.
///
/// Implied iff every elemental of `τ = (A;B|D)` is covered; the reported
/// factor is then `|A||B|`. Otherwise the witness is the elemental at which
/// covering stopped, and its parity distribution is returned as a refutation.
pub fn check_marginal(sigma: &CISet, tau: &CITriple, n: usize) -> Result<RelaxationCertificate> {
    sigma.check_universe(n)?;
    tau.check_universe(n)?;
    if let Some(s) = sigma.iter().find(|s| !s.is_marginal()) {
        return Err(Error::NotMarginal(format!("{s:?}")));
    }
    let mut covers = Vec::new();
    let mut uses: BTreeMap<CITriple, usize> = BTreeMap::new();
    for e in tau.elemental_decompose() {
        match cover_elemental(e, sigma) {
            Ok(steps) => {
                for s in &steps {
                    *uses.entry(s.sigma).or_default() += 1;
                }
                covers.push(Cover { elemental: e, steps });
            }
            Err(stuck) => return refute_marginal(sigma, tau, n, covers, stuck),
        }
    }
    let lambda = to_rational(tau.x().len() * tau.y().len());
    let tight = to_rational(uses.values().copied().max().unwrap_or(0));
    Ok(RelaxationCertificate {
        tau: *tau,
        implied: true,
        lambda: Some(lambda),
        kind: CertificateKind::Marginal,
        evidence: Evidence::Marginal { covers },
        witness: None,
        refutation: None,
        tight_lambda: Some(tight),
    })
}

fn refute_marginal(
    sigma: &CISet,
    tau: &CITriple,
    n: usize,
    covers: Vec<Cover>,
    stuck: CITriple,
) -> Result<RelaxationCertificate> {
    if n > MAX_PARITY_VARS {
        return Err(Error::CapExceeded {
            what: "a parity refutation",
            n,
            max: MAX_PARITY_VARS,
        });
    }
    let d = parity_binary(n, &stuck)?;
    let h_sigma = d.exact_sum_cmi(sigma)?;
    let h_tau = d.exact_cmi(tau)?;
    if !h_sigma.is_zero() || h_tau.to_rational() != Some(BigRational::one()) {
        return Err(Error::Internal("parity refutation failed verification".into()));
    }
    Ok(RelaxationCertificate {
        tau: *tau,
        implied: false,
        lambda: None,
        kind: CertificateKind::Marginal,
        evidence: Evidence::Marginal { covers },
        witness: Some(Witness::Elemental(stuck)),
        refutation: Some(Refutation::Distribution(d)),
        tight_lambda: None,
    })
}

fn check_closure_cap(n: usize) -> Result<()> {
    if n > MAX_CLOSURE_VARS {
        return Err(Error::CapExceeded {
            what: "the semigraphoid closure",
            n,
            max: MAX_CLOSURE_VARS,
        });
    }
    Ok(())
}

/// Least set containing `sigma` and closed under symmetry, decomposition,
/// weak union and contraction.
pub fn semigraphoid_closure(sigma: &CISet, n: usize) -> Result<BTreeSet<CITriple>> {
    check_closure_cap(n)?;
    sigma.check_universe(n)?;
    let full = VarSet::full(n);
    let mut known: BTreeSet<CITriple> = BTreeSet::new();
    let mut queue: VecDeque<CITriple> = VecDeque::new();
    let push = |t: CITriple, known: &mut BTreeSet<CITriple>, queue: &mut VecDeque<CITriple>| {
        if known.insert(t) {
            queue.push_back(t);
        }
    };
    for t in sigma {
        push(*t, &mut known, &mut queue);
    }
    while let Some(t) = queue.pop_front() {
        let mut derived = Vec::new();
        for (x, yw) in [(t.x(), t.y()), (t.y(), t.x())] {
            let z = t.z();
            // decomposition and weak union
            for y in yw.subsets().skip(1).filter(|&y| y != yw) {
                derived.push(CITriple::canonical(x, y, z));
                derived.push(CITriple::canonical(x, y, z | (yw - y)));
            }
            // contraction with t as the first premise (x;yw|z), partner (x;w|z∪yw)
            for w in (full - x - yw - z).subsets().skip(1) {
                if known.contains(&CITriple::canonical(x, w, z | yw)) {
                    derived.push(CITriple::canonical(x, yw | w, z));
                }
            }
            // contraction with t as the second premise (x;w|z'), z' = z0 ∪ y
            for y in z.subsets().skip(1) {
                let z0 = z - y;
                if known.contains(&CITriple::canonical(x, y, z0)) {
                    derived.push(CITriple::canonical(x, y | yw, z0));
                }
            }
        }
        for d in derived {
            push(d, &mut known, &mut queue);
        }
    }
    Ok(known)
}

/// `Σ = {(X1;Xi|X2…X_{i−1}) : 2 ≤ i ≤ n}` and `τ = (X1;X2…Xn)`, for which
/// `h(τ) = h(Σ)` on every polymatroid.
pub fn tightness_family(n: usize) -> Result<(CISet, CITriple)> {
    if n < 2 {
        return Err(Error::Precondition("the family needs at least two variables".into()));
    }
    let first = VarSet::singleton(0);
    let sigma = (1..n)
        .map(|i| CITriple::canonical(first, VarSet::singleton(i), VarSet::from_indices(1..i)))
        .collect();
    let tau = CITriple::canonical(first, VarSet::from_indices(1..n), VarSet::EMPTY);
    Ok((sigma, tau))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub trials: usize,
    pub lambda: BigRational,
    /// Largest `h(τ) − λ·h(Σ)` seen.
    pub max_violation: f64,
    /// Distribution seed attaining `max_violation`.
    pub worst_seed: u64,
    pub passed: bool,
}

impl ValidationReport {
    pub fn report(&self) -> String {
        format!(
            "{} trials={} lambda={} max_violation={:.12e} worst_seed={}\n",
            if self.passed { "PASS" } else { "FAIL" },
            self.trials,
            format_rational(&self.lambda),
            self.max_violation,
            self.worst_seed
        )
    }
}

/// Evaluates `h(τ) − λ·h(Σ)` on `trials` random distributions over
/// `domain_sizes`. Trial seeds are drawn from a ChaCha8 stream keyed by `seed`.
pub fn validate_bound(
    sigma: &CISet,
    tau: &CITriple,
    lambda: &BigRational,
    domain_sizes: &[usize],
    trials: usize,
    seed: u64,
) -> Result<ValidationReport> {
    let n = domain_sizes.len();
    sigma.check_universe(n)?;
    tau.check_universe(n)?;
    if trials == 0 {
        return Err(Error::Precondition("at least one trial is needed".into()));
    }
    let lam = lambda.to_f64().unwrap_or(f64::NAN);
    let mut seeds = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = (f64::NEG_INFINITY, 0u64);
    for _ in 0..trials {
        let s: u64 = seeds.gen();
        let d = random_distribution(domain_sizes, s)?;
        let h = d.entropic_table();
        let violation = h.cmi(tau) - lam * h.sum_cmi(sigma);
        if violation > worst.0 {
            worst = (violation, s);
        }
    }
    Ok(ValidationReport {
        trials,
        lambda: lambda.clone(),
        max_violation: worst.0,
        worst_seed: worst.1,
        passed: worst.0 <= VALIDATION_TOLERANCE,
    })
}

/// Whether `h` gives `h(Σ) = 0` and `h(τ) = 1` exactly.
pub fn separates(h: &PolymatroidTable<BigRational>, sigma: &CISet, tau: &CITriple) -> bool {
    h.sum_cmi(sigma).is_zero() && h.cmi(tau) == BigRational::one()
}
