//! Explicit joint distributions over small finite domains and their entropies.

use num::{BigRational, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dag::Dag;
use crate::error::{Error, ParseError, Result};
use crate::exact::ExactBits;
use crate::polymatroid::PolymatroidTable;
use crate::triple::{CISet, CITriple};
use crate::value::{format_rational, parse_rational};
use crate::varset::{Universe, VarSet, MAX_VARS};

/// Largest outcome table accepted.
pub const MAX_OUTCOMES: usize = 1 << 20;

/// Tolerance on the total mass of a floating-point table.
pub const FLOAT_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Probabilities {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

/// A probability per outcome tuple; variable 0 varies fastest in the outcome index.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    domain_sizes: Vec<usize>,
    probs: Probabilities,
}

fn outcome_count(domain_sizes: &[usize]) -> Result<usize> {
    if domain_sizes.len() > MAX_VARS {
        return Err(Error::CapExceeded {
            what: "a distribution",
            n: domain_sizes.len(),
            max: MAX_VARS,
        });
    }
    let mut total: usize = 1;
    for &d in domain_sizes {
        if d == 0 {
            return Err(Error::InvalidDistribution("empty domain".into()));
        }
        total = total
            .checked_mul(d)
            .filter(|&t| t <= MAX_OUTCOMES)
            .ok_or_else(|| Error::InvalidDistribution(format!("more than {MAX_OUTCOMES} outcomes")))?;
    }
    Ok(total)
}

impl JointDistribution {
    pub fn new_exact(domain_sizes: Vec<usize>, probs: Vec<BigRational>) -> Result<Self> {
        let count = outcome_count(&domain_sizes)?;
        if probs.len() != count {
            return Err(Error::InvalidDistribution(format!(
                "expected {count} probabilities, got {}",
                probs.len()
            )));
        }
        if probs.iter().any(Signed::is_negative) {
            return Err(Error::InvalidDistribution("negative probability".into()));
        }
        let total: BigRational = probs.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {}",
                format_rational(&total)
            )));
        }
        Ok(JointDistribution {
            domain_sizes,
            probs: Probabilities::Exact(probs),
        })
    }

    pub fn new_float(domain_sizes: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        let count = outcome_count(&domain_sizes)?;
        if probs.len() != count {
            return Err(Error::InvalidDistribution(format!(
                "expected {count} probabilities, got {}",
                probs.len()
            )));
        }
        if probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::InvalidDistribution("negative or non-finite probability".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > FLOAT_SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
        }
        Ok(JointDistribution {
            domain_sizes,
            probs: Probabilities::Float(probs),
        })
    }

    /// Independent uniform variables, exact.
    pub fn uniform(domain_sizes: Vec<usize>) -> Result<Self> {
        let count = outcome_count(&domain_sizes)?;
        let p = BigRational::new(1.into(), count.into());
        JointDistribution::new_exact(domain_sizes, vec![p; count])
    }

    pub fn n(&self) -> usize {
        self.domain_sizes.len()
    }

    pub fn domain_sizes(&self) -> &[usize] {
        &self.domain_sizes
    }

    pub fn outcome_count(&self) -> usize {
        match &self.probs {
            Probabilities::Exact(p) => p.len(),
            Probabilities::Float(p) => p.len(),
        }
    }

    pub fn probabilities(&self) -> &Probabilities {
        &self.probs
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.probs, Probabilities::Exact(_))
    }

    pub fn prob_f64(&self, outcome: usize) -> f64 {
        match &self.probs {
            Probabilities::Exact(p) => p[outcome].to_f64().unwrap_or(f64::NAN),
            Probabilities::Float(p) => p[outcome],
        }
    }

    /// Values of each variable in outcome `index`.
    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        self.domain_sizes
            .iter()
            .map(|&d| {
                let v = index % d;
                index /= d;
                v
            })
            .collect()
    }

    pub fn encode(&self, values: &[usize]) -> usize {
        values
            .iter()
            .zip(&self.domain_sizes)
            .rev()
            .fold(0, |acc, (&v, &d)| acc * d + v)
    }

    /// For every outcome, its index in the marginal table of `alpha`.
    fn projection(&self, alpha: VarSet) -> (usize, Vec<usize>) {
        let mut stride = vec![0usize; self.n()];
        let mut size = 1;
        for i in alpha.iter().filter(|&i| i < self.n()) {
            stride[i] = size;
            size *= self.domain_sizes[i];
        }
        let count = self.outcome_count();
        let mut digits = vec![0usize; self.n()];
        let mut proj = Vec::with_capacity(count);
        let mut cur = 0;
        for _ in 0..count {
            proj.push(cur);
            // odometer increment
            for i in 0..self.n() {
                digits[i] += 1;
                cur += stride[i];
                if digits[i] < self.domain_sizes[i] {
                    break;
                }
                cur -= stride[i] * digits[i];
                digits[i] = 0;
            }
        }
        (size, proj)
    }

    pub fn marginal_f64(&self, alpha: VarSet) -> Vec<f64> {
        let (size, proj) = self.projection(alpha);
        let mut out = vec![0.0; size];
        for (k, &m) in proj.iter().enumerate() {
            out[m] += self.prob_f64(k);
        }
        out
    }

    /// Exact marginal; `None` for floating-point tables.
    pub fn marginal_exact(&self, alpha: VarSet) -> Option<Vec<BigRational>> {
        let Probabilities::Exact(probs) = &self.probs else {
            return None;
        };
        let (size, proj) = self.projection(alpha);
        let mut out = vec![BigRational::zero(); size];
        for (p, &m) in probs.iter().zip(&proj) {
            if !p.is_zero() {
                out[m] += p;
            }
        }
        Some(out)
    }

    /// `H(X_alpha)` in bits.
    pub fn entropy(&self, alpha: VarSet) -> f64 {
        if alpha.is_empty() {
            return 0.0;
        }
        self.marginal_f64(alpha)
            .into_iter()
            .filter(|&p| p > 0.0)
            .map(|p| -p * p.log2())
            .sum()
    }

    pub fn cmi(&self, t: &CITriple) -> f64 {
        let (x, y, z) = (t.x(), t.y(), t.z());
        self.entropy(z | x) + self.entropy(z | y) - self.entropy(z | x | y) - self.entropy(z)
    }

    pub fn sum_cmi(&self, sigma: &CISet) -> f64 {
        sigma.iter().map(|t| self.cmi(t)).sum()
    }

    /// `H(X_alpha)` as an exact value; requires an exact table.
    pub fn exact_entropy(&self, alpha: VarSet) -> Result<ExactBits> {
        let marg = self
            .marginal_exact(alpha)
            .ok_or_else(|| Error::InexactValue("distribution is floating-point".into()))?;
        marg.iter().try_fold(ExactBits::zero(), |acc, p| {
            Ok(acc.add(&ExactBits::entropy_term(p)?))
        })
    }

    pub fn exact_cmi(&self, t: &CITriple) -> Result<ExactBits> {
        let (x, y, z) = (t.x(), t.y(), t.z());
        Ok(self
            .exact_entropy(z | x)?
            .add(&self.exact_entropy(z | y)?)
            .sub(&self.exact_entropy(z | x | y)?)
            .sub(&self.exact_entropy(z)?))
    }

    pub fn exact_sum_cmi(&self, sigma: &CISet) -> Result<ExactBits> {
        sigma
            .iter()
            .try_fold(ExactBits::zero(), |acc, t| Ok(acc.add(&self.exact_cmi(t)?)))
    }

    /// `h(alpha) = H(X_alpha)` for every subset.
    pub fn entropic_table(&self) -> PolymatroidTable<f64> {
        PolymatroidTable::from_fn(self.n(), |s| self.entropy(s))
    }

    pub fn exact_entropic_table(&self) -> Result<PolymatroidTable<ExactBits>> {
        let values = (0..1u32 << self.n())
            .map(|m| self.exact_entropy(VarSet::from_bits(m)))
            .collect::<Result<Vec<_>>>()?;
        PolymatroidTable::new(self.n(), values)
    }

    /// Reads `vars <name:card> ...` followed by `<v1> ... <vn> <p>` rows.
    ///
    /// Probabilities are parsed exactly. A table summing to exactly 1 is kept
    /// exact; one within [`FLOAT_SUM_TOLERANCE`] of 1 becomes floating-point.
    pub fn parse(text: &str) -> Result<(Universe, Self)> {
        let mut header: Option<(Universe, Vec<usize>)> = None;
        let mut probs: Vec<Option<BigRational>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let body = line.split('#').next().unwrap_or("");
            let words: Vec<&str> = body.split_whitespace().collect();
            if words.is_empty() {
                continue;
            }
            if words[0] == "vars" {
                if header.is_some() {
                    return Err(ParseError::new(line_no, 1, "duplicate `vars` header").into());
                }
                let mut u = Universe::default();
                let mut sizes = Vec::new();
                for w in &words[1..] {
                    let (name, card) = w.split_once(':').ok_or_else(|| {
                        ParseError::new(line_no, 1, format!("expected `name:card`, found `{w}`"))
                    })?;
                    let card: usize = card.parse().ok().filter(|&c| c > 0).ok_or_else(|| {
                        ParseError::new(line_no, 1, format!("bad cardinality in `{w}`"))
                    })?;
                    u.add(name)?;
                    sizes.push(card);
                }
                let count = outcome_count(&sizes)?;
                probs = vec![None; count];
                header = Some((u, sizes));
                continue;
            }
            let Some((_, sizes)) = header.as_ref() else {
                return Err(ParseError::new(line_no, 1, "missing `vars` header").into());
            };
            if words.len() != sizes.len() + 1 {
                return Err(ParseError::new(
                    line_no,
                    1,
                    format!("expected {} values and a probability", sizes.len()),
                )
                .into());
            }
            let mut index = 0;
            for (k, (w, &d)) in words.iter().zip(sizes).enumerate().rev() {
                let v: usize = w.parse().ok().filter(|&v| v < d).ok_or_else(|| {
                    ParseError::new(line_no, 1, format!("value `{w}` out of range for variable {}", k + 1))
                })?;
                index = index * d + v;
            }
            let p = parse_rational(words[sizes.len()]).ok_or_else(|| {
                ParseError::new(line_no, 1, format!("bad probability `{}`", words[sizes.len()]))
            })?;
            if probs[index].replace(p).is_some() {
                return Err(ParseError::new(line_no, 1, "outcome listed twice").into());
            }
        }
        let (universe, sizes) =
            header.ok_or_else(|| ParseError::new(1, 1, "missing `vars` header"))?;
        let probs: Vec<BigRational> = probs
            .into_iter()
            .map(|p| p.unwrap_or_else(BigRational::zero))
            .collect();
        let total: BigRational = probs.iter().sum();
        let dist = if total.is_one() {
            JointDistribution::new_exact(sizes, probs)?
        } else {
            let floats = probs.iter().map(|p| p.to_f64().unwrap_or(f64::NAN)).collect();
            JointDistribution::new_float(sizes, floats)?
        };
        Ok((universe, dist))
    }

    /// Renders in the format read by [`JointDistribution::parse`], skipping zero outcomes.
    pub fn to_text(&self, universe: &Universe) -> String {
        let header: Vec<String> = universe
            .names()
            .iter()
            .zip(&self.domain_sizes)
            .map(|(n, d)| format!("{n}:{d}"))
            .collect();
        let mut out = format!("vars {}\n", header.join(" "));
        for k in 0..self.outcome_count() {
            let p = match &self.probs {
                Probabilities::Exact(p) if p[k].is_zero() => continue,
                Probabilities::Exact(p) => format_rational(&p[k]),
                Probabilities::Float(p) if p[k] == 0.0 => continue,
                Probabilities::Float(p) => format!("{:e}", p[k]),
            };
            let values: Vec<String> = self.decode(k).iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("{} {}\n", values.join(" "), p));
        }
        out
    }
}

/// Parity construction for `tau = (A;B|C)`: every variable except `a1` (the
/// lowest index in `tau.x`) is an independent fair bit, and `a1` is the XOR of
/// the rest of `A ∪ B ∪ C`.
pub fn parity_distribution(domain_sizes: &[usize], tau: &CITriple) -> Result<JointDistribution> {
    if let Some(i) = domain_sizes.iter().position(|&d| d != 2) {
        return Err(Error::Precondition(format!(
            "parity construction needs binary variables; variable {} has {} values",
            i + 1,
            domain_sizes[i]
        )));
    }
    let n = domain_sizes.len();
    tau.check_universe(n)?;
    let count = outcome_count(domain_sizes)?;
    let a1 = tau.x().first().expect("nonempty side");
    let rest = tau.vars() - VarSet::singleton(a1);
    let half_free = BigRational::new(1.into(), (count / 2).into());
    let probs = (0..count)
        .map(|k| {
            let bits = VarSet::from_bits(k as u32);
            let parity = (bits & rest).len() % 2 == 1;
            if bits.contains(a1) == parity {
                half_free.clone()
            } else {
                BigRational::zero()
            }
        })
        .collect();
    JointDistribution::new_exact(domain_sizes.to_vec(), probs)
}

/// [`parity_distribution`] over `n` binary variables.
pub fn parity_binary(n: usize, tau: &CITriple) -> Result<JointDistribution> {
    parity_distribution(&vec![2; n], tau)
}

/// Strictly positive random table: normalised i.i.d. exponential draws from a
/// ChaCha8 stream seeded with `seed`.
pub fn random_distribution(domain_sizes: &[usize], seed: u64) -> Result<JointDistribution> {
    let count = outcome_count(domain_sizes)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights: Vec<f64> = (0..count)
        .map(|_| loop {
            let e = -(1.0 - rng.gen::<f64>()).ln();
            if e > 0.0 {
                break e;
            }
        })
        .collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    JointDistribution::new_float(domain_sizes.to_vec(), weights)
}

/// Denominator of the conditional probabilities drawn by [`network_distribution`].
pub const NETWORK_GRID: u32 = 16;

/// Binary distribution factorising along `dag`: each `P(X_i = 1 | parents)` is
/// an independent draw `k/16` with `1 ≤ k ≤ 15`. Exact, strictly positive.
pub fn network_distribution(dag: &Dag, seed: u64) -> Result<JointDistribution> {
    let n = dag.n();
    let count = outcome_count(&vec![2; n])?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cpds: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            (0..1usize << dag.parents(i).len())
                .map(|_| rng.gen_range(1..NETWORK_GRID))
                .collect()
        })
        .collect();
    let parents: Vec<Vec<usize>> = (0..n).map(|i| dag.parents(i).iter().collect()).collect();
    let denom = num::BigInt::from(NETWORK_GRID).pow(n as u32);
    let probs = (0..count)
        .map(|k| {
            let mut weight = num::BigInt::one();
            for i in 0..n {
                let row = parents[i]
                    .iter()
                    .enumerate()
                    .fold(0usize, |acc, (j, &p)| acc | ((k >> p) & 1) << j);
                let one = cpds[i][row];
                weight *= if (k >> i) & 1 == 1 { one } else { NETWORK_GRID - one };
            }
            BigRational::new(weight, denom.clone())
        })
        .collect();
    JointDistribution::new_exact(vec![2; n], probs)
}

/// Exact values of `h(Σ)` and `h(τ)` under `d`.
pub fn exact_pair(d: &JointDistribution, sigma: &CISet, tau: &CITriple) -> Result<(ExactBits, ExactBits)> {
    Ok((d.exact_sum_cmi(sigma)?, d.exact_cmi(tau)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn s(ix: &[usize]) -> VarSet {
        VarSet::from_indices(ix.iter().copied())
    }

    #[test]
    fn fair_coin_and_two_bits() {
        let coin = JointDistribution::uniform(vec![2]).unwrap();
        assert_eq!(coin.entropy(s(&[0])), 1.0);
        let two = JointDistribution::uniform(vec![2, 2]).unwrap();
        assert_eq!(two.entropy(s(&[0, 1])), 2.0);
        assert_eq!(two.exact_entropy(s(&[0, 1])).unwrap().to_rational(), Some(q(2, 1)));
        assert_eq!(two.entropy(VarSet::EMPTY), 0.0);
    }

    #[test]
    fn product_table_is_cardinality() {
        let d = JointDistribution::uniform(vec![2, 2, 2]).unwrap();
        let h = d.exact_entropic_table().unwrap();
        for m in 0..8u32 {
            let set = VarSet::from_bits(m);
            assert_eq!(h.get(set).to_rational(), Some(q(set.len() as i64, 1)));
        }
        assert!(d.cmi(&CITriple::of(&[0], &[1], &[2])).abs() < 1e-15);
    }

    #[test]
    fn parity_two_vars() {
        let tau = CITriple::of(&[0], &[1], &[]);
        let d = parity_binary(2, &tau).unwrap();
        // uniform on {00, 11}
        let Probabilities::Exact(p) = d.probabilities() else { panic!() };
        assert_eq!(p, &vec![q(1, 2), q(0, 1), q(0, 1), q(1, 2)]);
        let h = d.exact_entropic_table().unwrap();
        for set in [s(&[0]), s(&[1]), s(&[0, 1])] {
            assert_eq!(h.get(set).to_rational(), Some(q(1, 1)));
        }
        assert_eq!(d.exact_cmi(&tau).unwrap().to_rational(), Some(q(1, 1)));
    }

    #[test]
    fn parity_three_vars_joint_entropy() {
        let tau = CITriple::of(&[0], &[1], &[2]);
        let d = parity_binary(3, &tau).unwrap();
        assert_eq!(d.exact_entropy(s(&[0, 1, 2])).unwrap().to_rational(), Some(q(2, 1)));
        assert_eq!(d.exact_cmi(&tau).unwrap().to_rational(), Some(q(1, 1)));
    }

    #[test]
    fn parity_four_vars_independent_extras() {
        let tau = CITriple::of(&[0], &[1], &[2]);
        let d = parity_binary(4, &tau).unwrap();
        assert!(d.exact_cmi(&CITriple::of(&[0], &[3], &[])).unwrap().is_zero());
        assert!(d.exact_cmi(&CITriple::of(&[0, 1, 2], &[3], &[])).unwrap().is_zero());
        assert_eq!(d.exact_cmi(&tau).unwrap().to_rational(), Some(q(1, 1)));
    }

    #[test]
    fn parity_rejects_non_binary() {
        let tau = CITriple::of(&[0], &[1], &[]);
        assert!(parity_distribution(&[2, 3], &tau).is_err());
        assert!(parity_binary(1, &tau).is_err());
    }

    #[test]
    fn random_is_deterministic_and_normalised() {
        let a = random_distribution(&[2, 3, 2], 7).unwrap();
        let b = random_distribution(&[2, 3, 2], 7).unwrap();
        let c = random_distribution(&[2, 3, 2], 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        let total: f64 = (0..a.outcome_count()).map(|k| a.prob_f64(k)).sum();
        assert!((total - 1.0).abs() <= 1e-12);
        assert!((0..a.outcome_count()).all(|k| a.prob_f64(k) > 0.0));
    }

    #[test]
    fn random_tables_are_polymatroids() {
        for seed in 0..100 {
            let d = random_distribution(&[2, 2, 3], seed).unwrap();
            assert!(d.entropic_table().is_polymatroid(), "seed {seed}");
        }
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(JointDistribution::new_exact(vec![2], vec![q(1, 2), q(1, 3)]).is_err());
        assert!(JointDistribution::new_exact(vec![2], vec![q(3, 2), q(-1, 2)]).is_err());
        assert!(JointDistribution::new_float(vec![2], vec![0.5, 0.6]).is_err());
        assert!(JointDistribution::uniform(vec![2; 21]).is_err());
    }

    #[test]
    fn encode_decode() {
        let d = JointDistribution::uniform(vec![2, 3, 2]).unwrap();
        for k in 0..d.outcome_count() {
            assert_eq!(d.encode(&d.decode(k)), k);
        }
        assert_eq!(d.decode(1), vec![1, 0, 0]);
    }

    #[test]
    fn marginal_matches_bruteforce() {
        let d = random_distribution(&[2, 3, 2, 2], 3).unwrap();
        let alpha = s(&[1, 3]);
        let m = d.marginal_f64(alpha);
        let mut brute = vec![0.0; 6];
        for k in 0..d.outcome_count() {
            let v = d.decode(k);
            brute[v[1] + 3 * v[3]] += d.prob_f64(k);
        }
        for (a, b) in m.iter().zip(&brute) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn file_roundtrip() {
        let text = "# coin pair\nvars a:2 b:2\n0 0 1/2\n1 1 0.5\n";
        let (u, d) = JointDistribution::parse(text).unwrap();
        assert_eq!(u.names(), ["a", "b"]);
        assert!(d.is_exact());
        assert_eq!(d.entropy(s(&[0, 1])), 1.0);
        let (_, d2) = JointDistribution::parse(&d.to_text(&u)).unwrap();
        assert_eq!(d, d2);
    }

    #[test]
    fn file_errors() {
        assert!(JointDistribution::parse("vars a:2\n0 1/2\n").is_err());
        assert!(JointDistribution::parse("vars a:2\n0 1/2\n0 1/2\n").is_err());
        assert!(JointDistribution::parse("vars a:2\n2 1\n").is_err());
        assert!(JointDistribution::parse("0 1\n").is_err());
        // within float tolerance of 1 is accepted as floating-point
        let (_, d) = JointDistribution::parse("vars a:3\n0 0.333333333333333\n1 0.333333333333333\n2 0.333333333333333\n").unwrap();
        assert!(!d.is_exact());
    }

    #[test]
    fn network_distribution_factorises() {
        let dag = Dag::numbered(3, &[(0, 2), (1, 2)]).unwrap();
        let d = network_distribution(&dag, 5).unwrap();
        assert!(d.is_exact());
        assert!(d.exact_cmi(&CITriple::of(&[0], &[1], &[])).unwrap().is_zero());
        assert!(!d.exact_cmi(&CITriple::of(&[0], &[1], &[2])).unwrap().is_zero());
        assert_eq!(d, network_distribution(&dag, 5).unwrap());
    }
}
