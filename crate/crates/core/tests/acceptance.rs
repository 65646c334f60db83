mod common;

use std::time::{Duration, Instant};

use common::{corpus, diagonal_end, is_scalar, mutate, params, Mutation, PARAMETER_SETS};
use framed_deformations::counting::{
    count_pairs_bruteforce, count_pairs_field, count_pairs_ring, dimension_slope, CountOptions,
};
use framed_deformations::crystalline::{choose_weights, classify_character_point, witness_components};
use framed_deformations::deformation::{
    canonical_point, check_relation, det_component, ComponentLabel, DeformationPoint, Residual,
};
use framed_deformations::linalg::{eigenvalue_multiplicities, Mat};
use framed_deformations::localring::{
    enumerate_mu_q, hensel_lift_unity, make_field, mu_q_index, primitive_root, LocalElement,
};
use framed_deformations::paths::{connect_to_diagonal, verify_certificate, Clause, PathSegment};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(k: usize, title: &str, started: Instant, limit: Duration, failures: &[String]) -> bool {
    let elapsed = started.elapsed();
    let mut failures = failures.to_vec();
    if elapsed > limit {
        failures.push(format!("took {elapsed:.2?}, limit {limit:?}"));
    }
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {k} ({title}): {verdict} in {elapsed:.2?}");
    for f in &failures {
        println!("  {f}");
    }
    failures.is_empty()
}

fn criterion_1_relation_fixtures() -> bool {
    let t0 = Instant::now();
    let mut failures = Vec::new();
    for (p, q, n, d) in PARAMETER_SETS {
        let pr = params(p, q, n, d, 32);
        for k in 0..q as usize {
            let pt = canonical_point(&pr, &ComponentLabel::new(&pr.field, k).unwrap());
            match check_relation(&pt) {
                Ok(Residual::Infinite) => {}
                other => failures.push(format!("({p},{q},{n},{d}) label {k}: {other:?}")),
            }
        }
    }
    let pr = params(3, 3, 2, 2, 32);
    let f = pr.field.clone();
    let z = primitive_root(&f);
    let one = LocalElement::one(&f);
    let mut mats = vec![Mat::identity(&f, 2); pr.tuple_len()];
    mats[0] = Mat::from_rows(vec![vec![z.clone(), one.sub(&z)], vec![LocalElement::zero(&f), one]]);
    match check_relation(&DeformationPoint::new(pr, mats).unwrap()) {
        Ok(Residual::Infinite) => {}
        other => failures.push(format!("triangular fixture: {other:?}")),
    }
    report(1, "relation fixtures", t0, Duration::from_secs(1), &failures)
}

fn criterion_2_eigenvalues_in_mu_q() -> bool {
    let t0 = Instant::now();
    let mut failures = Vec::new();
    for (p, q, n, d) in PARAMETER_SETS {
        let pr = params(p, q, n, d, 32);
        let one = LocalElement::one(&pr.field);
        let roots = enumerate_mu_q(&pr.field);
        for (seed, (pt, eig)) in corpus(&pr, 100).into_iter().enumerate() {
            let mult = match eigenvalue_multiplicities(&pt.matrices[0]) {
                Ok(m) => m,
                Err(e) => {
                    failures.push(format!("({p},{q},{n},{d}) seed {seed}: {e}"));
                    continue;
                }
            };
            let total: usize = mult.iter().map(|m| m.1).sum();
            let on_mu_q = mult.iter().all(|(k, _)| roots[*k].pow(q).eq_at(&one, pr.field.tau()));
            let mut expected: Vec<(usize, usize)> = Vec::new();
            for &k in &eig {
                match expected.iter_mut().find(|e| e.0 == k) {
                    Some(e) => e.1 += 1,
                    None => expected.push((k, 1)),
                }
            }
            let mut got = mult.clone();
            got.sort();
            expected.sort();
            if total != n || !on_mu_q || got != expected {
                failures.push(format!("({p},{q},{n},{d}) seed {seed}: got {mult:?}, sampled {eig:?}"));
            }
        }
    }
    report(2, "eigenvalues in mu_q", t0, Duration::from_secs(30), &failures)
}

fn criterion_3_path_pipeline() -> bool {
    let t0 = Instant::now();
    let mut failures = Vec::new();
    let mut certs = Vec::new();
    for (p, q, n, d) in PARAMETER_SETS {
        let pr = params(p, q, n, d, 32);
        for (seed, (pt, eig)) in corpus(&pr, 100).into_iter().enumerate() {
            let tag = format!("({p},{q},{n},{d}) seed {seed}");
            let cert = match connect_to_diagonal(&pt) {
                Ok(c) => c,
                Err(e) => {
                    failures.push(format!("{tag}: connect failed: {e}"));
                    continue;
                }
            };
            let rep = verify_certificate(&cert);
            if !rep.passed() {
                failures.push(format!("{tag}: {:?}", rep.failures));
            }
            let end = diagonal_end(&cert);
            let mut sorted = eig.clone();
            sorted.sort_by(|a, b| b.cmp(a));
            let diag: Vec<usize> =
                (0..n).map(|i| mu_q_index(end[0].get(i, i)).unwrap_or(usize::MAX)).collect();
            if diag != sorted || !end[0].is_upper_triangular_at(pr.field.precision()) {
                failures.push(format!("{tag}: end diagonal {diag:?}, expected {sorted:?}"));
            }
            let det0 = pt.matrices[0].det();
            for (i, s) in cert.segments.iter().enumerate() {
                if let PathSegment::Polynomial { slots } = s {
                    let c0 = slots[0].map(|e| e.coeff(0));
                    if !c0.det().approx_eq(&det0) {
                        failures.push(format!("{tag}: segment {i} changes det M1"));
                    }
                }
            }
            certs.push(cert);
        }
    }

    let plan = [
        (Mutation::ConjugationDigit, Clause::A),
        (Mutation::RelationDigit, Clause::B),
        (Mutation::EndpointDigit, Clause::C),
        (Mutation::DeterminantDigit, Clause::D),
        (Mutation::CitationId, Clause::E),
    ];
    let mut done = 0;
    for (kind, clause) in plan {
        let mut used = 0;
        for cert in &certs {
            if used == 4 {
                break;
            }
            if kind == Mutation::ConjugationDigit && is_scalar(&cert.start.matrices[0]) {
                continue;
            }
            let Some(bad) = mutate(cert, kind) else { continue };
            used += 1;
            let rep = verify_certificate(&bad);
            if !rep.failed_clauses().contains(&clause) {
                failures.push(format!("{kind:?}: expected clause {clause}, got {:?}", rep.failed_clauses()));
            }
        }
        done += used;
    }
    if done != 20 {
        failures.push(format!("only {done} of 20 mutations applied"));
    }
    report(3, "path pipeline", t0, Duration::from_secs(120), &failures)
}

fn criterion_4_counting_oracles() -> bool {
    let t0 = Instant::now();
    let o = CountOptions::default();
    let mut failures = Vec::new();
    for (n, p, m, q) in [(1, 3, 1, 3), (1, 5, 1, 5), (1, 7, 1, 7), (1, 3, 2, 3), (2, 3, 1, 3)] {
        let fast = count_pairs_field(n, p, m, q, &o).unwrap();
        let slow = count_pairs_bruteforce(n, p, m, q, &o).unwrap();
        if fast != slow {
            failures.push(format!("n={n} F_{}^{m} q={q}: class sum {fast}, brute force {slow}", p));
        }
    }
    for size in 2u64..=49 {
        let Some((p, m)) = prime_power(size) else { continue };
        let q = if p == 2 { 4 } else { p };
        let c = count_pairs_field(1, p, m, q, &o).unwrap();
        if c != (size - 1) as u128 {
            failures.push(format!("n=1 F_{size}: {c}"));
        }
    }
    let ring = count_pairs_ring(1, 3, 2, 3, &o).unwrap();
    if ring != 18 {
        failures.push(format!("n=1 Z/9 q=3: {ring}"));
    }
    report(4, "counting oracles", t0, Duration::from_secs(60), &failures)
}

fn prime_power(x: u64) -> Option<(u64, u32)> {
    let p = (2..=x).find(|d| x % d == 0)?;
    let mut m = 0;
    let mut y = x;
    while y % p == 0 {
        y /= p;
        m += 1;
    }
    (y == 1).then_some((p, m))
}

fn criterion_5_dimension_slope() -> bool {
    let t0 = Instant::now();
    let o = CountOptions::default();
    let counts: Vec<(u64, u128)> =
        (1..=3).map(|m| (3u64.pow(m), count_pairs_field(2, 3, m, 3, &o).unwrap())).collect();
    let s = dimension_slope(2, &counts);
    let mut failures = Vec::new();
    let detail: Vec<String> = s.slopes.iter().map(|(f, v)| format!("F_{f}: {v:.4}")).collect();
    println!("  counts {counts:?}, slopes {}", detail.join(", "));
    if !s.slopes.iter().all(|(_, v)| (3.0..=5.0).contains(v)) {
        failures.push("a slope is outside [3, 5]".into());
    }
    if !s.monotone_approach {
        failures.push("slopes do not approach 4 monotonically".into());
    }
    report(5, "dimension slope", t0, Duration::from_secs(600), &failures)
}

fn criterion_6_crystalline_coverage() -> bool {
    let t0 = Instant::now();
    let mut failures = Vec::new();
    for (p, q, n) in [(5, 5, 2), (5, 5, 3), (7, 7, 2)] {
        let d = (q - q / p) as usize;
        let pr = params(p, q, n, d, 32);
        let w = choose_weights(q, d, None).unwrap();
        match witness_components(&pr, &w) {
            Ok(r) if r.covers_all_components() && r.all_regular() => {}
            Ok(r) => failures.push(format!("({p},{q},{n}): labels {:?}", r.rows.iter().map(|x| x.label).collect::<Vec<_>>())),
            Err(e) => failures.push(format!("({p},{q},{n}): {e}")),
        }
    }
    report(6, "crystalline coverage", t0, Duration::from_secs(1), &failures)
}

fn criterion_7_character_classifier() -> bool {
    let t0 = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..50 {
        let (p, q, d) = if i % 2 == 0 { (3, 3, 2) } else { (5, 5, 4) };
        let pr = params(p, q, 1, d, 32);
        let f = pr.field.clone();
        let roots = enumerate_mu_q(&f);
        let mut values = vec![roots[rng.gen_range(0..q as usize)].clone()];
        for _ in 1..pr.tuple_len() {
            values.push(LocalElement::one(&f).add(&LocalElement::random_in_maximal(&f, &mut rng)));
        }
        let mats = values.iter().map(|v| Mat::diagonal(std::slice::from_ref(v))).collect();
        let pt = DeformationPoint::new(pr, mats).unwrap();
        let a = classify_character_point(&values).map(|l| l.index);
        let b = det_component(&pt).map(|l| l.index);
        match (a, b) {
            (Ok(a), Ok(b)) if a == b => {}
            (a, b) => failures.push(format!("point {i}: classifier {a:?}, det {b:?}")),
        }
    }
    report(7, "character classifier", t0, Duration::from_secs(5), &failures)
}

fn criterion_8_arithmetic_substrate() -> bool {
    let t0 = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (p, q, prec) in [(3, 3, 32), (5, 5, 32), (7, 7, 32), (3, 9, 48), (5, 25, 80)] {
        let f = make_field(p, q, 1, prec).unwrap();
        let one = LocalElement::one(&f);
        let roots = enumerate_mu_q(&f);
        let distinct = (0..roots.len()).all(|i| (0..i).all(|j| !roots[i].approx_eq(&roots[j])));
        if roots.len() != q as usize || !distinct {
            failures.push(format!("mu_{q}: {} roots, distinct {distinct}", roots.len()));
        }
        let e = f.e() as i64;
        for r in &roots {
            let noise = LocalElement::random_integral(&f, &mut rng).mul(&LocalElement::pi_pow(&f, 3 * e + 1));
            match hensel_lift_unity(&r.add(&noise), q) {
                Ok(x) if x.pow(q).sub(&one).is_zero() && x.approx_eq(r) => {}
                Ok(_) => failures.push(format!("q={q}: lift is not an exact root")),
                Err(err) => failures.push(format!("q={q}: {err}")),
            }
        }
    }
    let f = make_field(5, 5, 1, 32).unwrap();
    for k in 0..200 {
        let n = 1 + k % 4;
        let m = Mat::from_fn(n, n, |_, _| LocalElement::random_integral(&f, &mut rng));
        let r = m.eval_poly(&m.charpoly());
        if !r.entries().all(|x| x.is_zero() || x.valuation_lower_bound() >= f.tau()) {
            failures.push(format!("Cayley-Hamilton fails on matrix {k} (n={n})"));
        }
    }
    report(8, "arithmetic substrate", t0, Duration::from_secs(10), &failures)
}

fn main() {
    let criteria: [fn() -> bool; 8] = [
        criterion_1_relation_fixtures,
        criterion_2_eigenvalues_in_mu_q,
        criterion_3_path_pipeline,
        criterion_4_counting_oracles,
        criterion_5_dimension_slope,
        criterion_6_crystalline_coverage,
        criterion_7_character_classifier,
        criterion_8_arithmetic_substrate,
    ];
    let failed = criteria.iter().filter(|c| !c()).count();
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
