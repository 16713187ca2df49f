//! Acceptance suite. Each test prints one `PASS`/`FAIL` line straight to the
//! process stdout, so the verdicts show up even when output is captured.

use std::io::Write;
use std::time::{Duration, Instant};

use cirelax_core::dag::{all_dags, random_dag};
use cirelax_core::distribution::parity_binary;
use cirelax_core::enumerate::{all_triples, elemental_triples};
use cirelax_core::implication::{check_marginal, semigraphoid_closure, tightness_family, Refutation};
use cirelax_core::lp::{optimal_lambda, LambdaBound};
use cirelax_core::measure::table_from_atoms_unchecked;
use cirelax_core::*;
use num::{BigRational, One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn verdict(criterion: u32, pass: bool, detail: &str) {
    let line = format!("{} criterion {criterion}: {detail}\n", if pass { "PASS" } else { "FAIL" });
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
}

fn dags_for_sweep() -> Vec<Dag> {
    let mut dags: Vec<Dag> = (2..=4).flat_map(all_dags).collect();
    dags.extend((0..200u64).map(|seed| random_dag(5, 0.5, seed)));
    dags
}

fn triple(x: VarSet, y: VarSet, z: VarSet) -> CITriple {
    CITriple::new(x, y, z).unwrap()
}

/// Random disjoint triple over `n` variables.
fn random_triple(rng: &mut ChaCha8Rng, n: usize) -> CITriple {
    loop {
        let labels: Vec<u8> = (0..n).map(|_| rng.gen_range(0..4)).collect();
        let pick = |k| VarSet::from_indices((0..n).filter(|&i| labels[i] == k));
        if let Ok(t) = CITriple::new(pick(0), pick(1), pick(2)) {
            return t;
        }
    }
}

fn random_marginal(rng: &mut ChaCha8Rng, n: usize) -> CITriple {
    let t = random_triple(rng, n);
    triple(t.x(), t.y(), VarSet::EMPTY)
}

#[test]
fn criterion_1_dsep_matches_atom_inclusion() {
    let start = Instant::now();
    let (mut agree, mut missed, mut unsound, mut queries) = (0usize, 0usize, 0usize, 0usize);
    for dag in dags_for_sweep() {
        let n = dag.n();
        let basis = dag.default_basis();
        for tau in elemental_triples(n, 2) {
            queries += 1;
            let ds = dag.d_separated(tau.x(), tau.y(), tau.z()).unwrap();
            let atoms = implies_positive(&basis, &tau, n).unwrap().implied;
            match (ds, atoms) {
                (a, b) if a == b => agree += 1,
                (false, true) => missed += 1,
                _ => unsound += 1,
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = missed == 0 && unsound == 0 && elapsed < Duration::from_secs(60);
    verdict(
        1,
        pass,
        &format!(
            "queries={queries} agree={agree} atom-only={missed} dsep-only={unsound} agreement={:.4}% elapsed={:.1}s",
            100.0 * agree as f64 / queries as f64,
            elapsed.as_secs_f64()
        ),
    );
    // the separated-implies-included direction must hold without exception
    assert_eq!(unsound, 0);
    assert!(elapsed < Duration::from_secs(60));
}

#[test]
fn criterion_1_disagreement_is_real() {
    // collider X1 → X3 ← X2: the basis is {I(X1;X2)} and m(X1;X2|X3) ⊆ m(X1;X2),
    // yet X1 ⊕ X2 = X3 has I(X1;X2) = 0 and I(X1;X2|X3) = 1
    let dag = Dag::numbered(3, &[(0, 2), (1, 2)]).unwrap();
    let basis = dag.default_basis();
    let tau = CITriple::of(&[0], &[1], &[2]);
    assert!(implies_positive(&basis, &tau, 3).unwrap().implied);
    assert!(!dag.d_separated(tau.x(), tau.y(), tau.z()).unwrap());
    let d = parity_binary(3, &tau).unwrap();
    assert!(d.exact_sum_cmi(&basis).unwrap().is_zero());
    assert_eq!(d.exact_cmi(&tau).unwrap().to_rational(), Some(BigRational::one()));
}

#[test]
fn criterion_2_recursive_unit_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut tuples, mut failures, mut worst) = (0, 0, f64::NEG_INFINITY);
    let mut seed = 0u64;
    while tuples < 200 {
        seed += 1;
        let n = rng.gen_range(2..=5);
        let dag = random_dag(n, rng.gen_range(0.2..0.7), seed);
        let implied: Vec<CITriple> = all_triples(n)
            .into_iter()
            .filter(|t| dag.d_separated(t.x(), t.y(), t.z()).unwrap())
            .collect();
        let Some(tau) = implied.choose(&mut rng) else { continue };
        let basis = dag.default_basis();
        let d = random_distribution(&vec![2; n], rng.gen()).unwrap();
        let gap = d.cmi(tau) - d.sum_cmi(&basis);
        worst = worst.max(gap);
        if gap > TOL {
            failures += 1;
        }
        tuples += 1;
    }
    verdict(2, failures == 0, &format!("tuples={tuples} failures={failures} max_excess={worst:.3e}"));
    assert_eq!(failures, 0);
}

#[test]
fn criterion_3_tightness() {
    let mut worst = 0.0f64;
    let mut lambdas = Vec::new();
    for n in 2..=5 {
        let (sigma, tau) = tightness_family(n).unwrap();
        for seed in 0..100u64 {
            let d = random_distribution(&vec![2; n], 1000 * n as u64 + seed).unwrap();
            worst = worst.max((d.cmi(&tau) - d.sum_cmi(&sigma)).abs());
        }
        lambdas.push(optimal_lambda(&sigma, &tau, n).unwrap());
    }
    let one = LambdaBound::Finite(BigRational::one());
    let pass = worst <= TOL && lambdas.iter().all(|l| *l == one);
    let shown: Vec<String> = lambdas.iter().map(|l| l.to_string()).collect();
    verdict(3, pass, &format!("max_gap={worst:.3e} lambda(n=2..5)={}", shown.join(",")));
    assert!(pass);
}

#[test]
fn criterion_4_parity_construction() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut checked, mut bad) = (0usize, 0usize);
    for _ in 0..50 {
        let n = rng.gen_range(2..=5);
        let tau = random_triple(&mut rng, n);
        let d = parity_binary(n, &tau).unwrap();
        if d.exact_cmi(&tau).unwrap().to_rational() != Some(BigRational::one()) {
            bad += 1;
        }
        let abc = tau.vars();
        for s in all_triples(n) {
            let uncovered = !abc.is_subset(s.vars());
            let one_sided = !abc.intersects(s.x()) || !abc.intersects(s.y());
            if uncovered || one_sided {
                checked += 1;
                if !d.exact_cmi(&s).unwrap().is_zero() {
                    bad += 1;
                }
            }
        }
    }
    verdict(4, bad == 0, &format!("taus=50 zero_checks={checked} violations={bad}"));
    assert_eq!(bad, 0);
}

#[test]
fn criterion_5_marginal_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut implied, mut refuted, mut failures, mut bad_refutations) = (0, 0, 0, 0);
    while implied < 200 {
        let n = rng.gen_range(2..=5);
        let k = rng.gen_range(1..=3);
        let sigma: CISet = (0..k).map(|_| random_marginal(&mut rng, n)).collect();
        let tau = random_triple(&mut rng, n);
        let cert = check_marginal(&sigma, &tau, n).unwrap();
        if cert.implied {
            let lambda = cert.lambda.unwrap().to_f64().unwrap();
            let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=3)).collect();
            let d = random_distribution(&sizes, rng.gen()).unwrap();
            if d.cmi(&tau) > lambda * d.sum_cmi(&sigma) + TOL {
                failures += 1;
            }
            implied += 1;
        } else {
            refuted += 1;
            let ok = match &cert.refutation {
                Some(Refutation::Distribution(d)) => {
                    d.exact_sum_cmi(&sigma).unwrap().is_zero()
                        && d.exact_cmi(&tau).unwrap().to_rational() == Some(BigRational::one())
                }
                _ => false,
            };
            if !ok {
                bad_refutations += 1;
            }
        }
    }
    let pass = failures == 0 && bad_refutations == 0;
    verdict(
        5,
        pass,
        &format!("implied={implied} failures={failures} refuted={refuted} bad_refutations={bad_refutations}"),
    );
    assert!(pass);
}

#[test]
fn criterion_6_single_atom_refutations() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut pairs, mut bad) = (0, 0);
    while pairs < 500 {
        let n = rng.gen_range(2..=6);
        let k = rng.gen_range(0..=3);
        let sigma: CISet = (0..k).map(|_| random_triple(&mut rng, n)).collect();
        let tau = random_triple(&mut rng, n);
        let v = implies_positive(&sigma, &tau, n).unwrap();
        let Some(atom) = v.witness else { continue };
        pairs += 1;
        let h = single_atom_polymatroid(atom, n).unwrap();
        if !(h.is_polymatroid() && h.sum_cmi(&sigma).is_zero() && h.cmi(&tau).is_one()) {
            bad += 1;
        }
    }
    verdict(6, bad == 0, &format!("pairs={pairs} bad={bad}"));
    assert_eq!(bad, 0);
}

#[test]
fn criterion_7_measure_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut worst_h, mut worst_i) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let n = rng.gen_range(1..=4);
        let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=3)).collect();
        let d = random_distribution(&sizes, rng.gen()).unwrap();
        let m = atom_measure(&d).unwrap();
        let back = table_from_atoms_unchecked(&m);
        for alpha in VarSet::full(n).subsets().skip(1) {
            worst_h = worst_h.max((back.get(alpha) - d.entropy(alpha)).abs());
        }
        for t in all_triples(n) {
            worst_i = worst_i.max((m.measure_of(&t) - d.cmi(&t)).abs());
        }
    }
    let pass = worst_h <= TOL && worst_i <= TOL;
    verdict(7, pass, &format!("distributions=200 max_entropy_err={worst_h:.3e} max_cmi_err={worst_i:.3e}"));
    assert!(pass);
}

#[test]
fn criterion_8_lp_coherence() {
    let start = Instant::now();
    let example: CISet = [CITriple::of(&[0], &[1], &[]), CITriple::of(&[0], &[2], &[1])]
        .into_iter()
        .collect();
    let example_lambda = optimal_lambda(&example, &CITriple::of(&[0], &[2], &[]), 3).unwrap();
    let example_ok = example_lambda == LambdaBound::Finite(BigRational::one());

    let (mut non_implied, mut bad) = (0usize, 0usize);
    for n in 2..=3 {
        let triples = all_triples(n);
        let mut sets: Vec<CISet> = vec![CISet::new()];
        for (i, a) in triples.iter().enumerate() {
            sets.push([*a].into_iter().collect());
            for b in &triples[i + 1..] {
                sets.push([*a, *b].into_iter().collect());
            }
        }
        for sigma in &sets {
            for tau in &triples {
                if implies_positive(sigma, tau, n).unwrap().implied {
                    continue;
                }
                non_implied += 1;
                if optimal_lambda(sigma, tau, n).unwrap() != LambdaBound::Unbounded {
                    bad += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = example_ok && bad == 0 && elapsed < Duration::from_secs(120);
    verdict(
        8,
        pass,
        &format!(
            "example_lambda={example_lambda} non_implied={non_implied} bounded={bad} elapsed={:.1}s",
            elapsed.as_secs_f64()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_9_semigraphoid_agreement() {
    let mut dags: Vec<Dag> = (2..=4).flat_map(all_dags).collect();
    dags.extend((0..50u64).map(|seed| random_dag(5, 0.5, seed)));
    let (mut queries, mut bad) = (0usize, 0usize);
    for dag in &dags {
        let n = dag.n();
        let closure = semigraphoid_closure(&dag.default_basis(), n).unwrap();
        for tau in elemental_triples(n, n) {
            queries += 1;
            if closure.contains(&tau) != dag.d_separated(tau.x(), tau.y(), tau.z()).unwrap() {
                bad += 1;
            }
        }
    }
    verdict(9, bad == 0, &format!("dags={} queries={queries} disagreements={bad}", dags.len()));
    assert_eq!(bad, 0);
}
