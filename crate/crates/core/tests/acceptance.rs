//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use kshg_core::bounds::{
    classical_bound, classify, family_bound, random_decomposition_trials, random_hypergraph, wheel7_demo_rays,
    Classification, RealizabilityPolicy, DEFAULT_WHEEL7_DELTA,
};
use kshg_core::cli;
use kshg_core::expansion::{
    brute_force_max, evaluate_c, expand, expand_hyper_edge, ks_propagate, mis_oracle, Assignment, AuxKind,
    BruteForceConfig, ExpandedVertex, PropagationOutcome, Violation,
};
use kshg_core::hypergraph::{
    closed_form_independence, generate, max_independent_set, Family, FamilySpec, HyperGraph, Weights,
};
use kshg_core::linalg3::{eigensystem, overlap, projector_sum, Hermitian3, Ray};
use kshg_core::mis::MisConfig;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took <= limit, || format!("took {took:.2?}, limit {limit:?}"))?;
    Ok(took)
}

fn single_edge_maximum() -> Outcome {
    let start = Instant::now();
    let config = BruteForceConfig { max_bits: 20 };
    for n in 0..=3u32 {
        let g = expand_hyper_edge(0, (0, 1), n);
        let max = brute_force_max(&g, &config).map_err(|e| e.to_string())?;
        ensure(max == 2 * i64::from(n) + 1, || format!("n={n}: max {max}, expected {}", 2 * n + 1))?;
    }
    let took = within(Duration::from_secs(5), start)?;
    Ok(format!("max = 2n+1 for n = 0..3 ({took:.2?})"))
}

fn hyper_edge_observable_maximum() -> Outcome {
    for n in 1..=2u32 {
        let g = expand_hyper_edge(0, (0, 1), n);
        let size = g.vertices().len();
        let mut best = i64::MIN;
        for mask in 0..1u64 << size {
            let value = evaluate_c(&g, &Assignment::from_mask(size, mask)).map_err(|e| e.to_string())?;
            best = best.max(value);
        }
        ensure(best == 2 * i64::from(n), || format!("n={n}: max {best}, expected {}", 2 * n))?;
    }
    Ok("max C = 2n for n = 1, 2".into())
}

fn family_theorems() -> Outcome {
    let mut cases = Vec::new();
    for w in [1, 2] {
        cases.extend((2..=6).map(|k| FamilySpec::uniform(Family::Complete { k }, w)));
        cases.extend((2..=8).map(|k| FamilySpec::uniform(Family::Linear { k }, w)));
        cases.extend((3..=8).map(|k| FamilySpec::uniform(Family::Cyclic { k }, w)));
    }
    let mut brute_checked = 0;
    for spec in &cases {
        let tag = format!("{} {:?}", spec.family.name(), spec.weights);
        let closed = family_bound(spec).map_err(|e| e.to_string())?;
        let h = generate(spec).map_err(|e| e.to_string())?;
        let exact = classical_bound(&h, &MisConfig::default()).map_err(|e| e.to_string())?;
        ensure(closed.total == exact.total, || format!("{tag}: family {} vs exact {}", closed.total, exact.total))?;
        let expected = match (spec.family, &spec.weights) {
            (Family::Complete { k }, Weights::Uniform(w)) => (k * (k - 1)) as u64 * u64::from(*w) + 1,
            (Family::Linear { k }, Weights::Uniform(w)) => 2 * (k as u64 - 1) * u64::from(*w) + k.div_ceil(2) as u64,
            (Family::Cyclic { k }, Weights::Uniform(w)) => 2 * k as u64 * u64::from(*w) + (k / 2) as u64,
            _ => unreachable!(),
        };
        ensure(exact.total == expected, || format!("{tag}: bound {} vs formula {expected}", exact.total))?;
        let g = expand(&h);
        if g.vertices().len() <= 22 {
            let max = brute_force_max(&g, &BruteForceConfig { max_bits: 22 }).map_err(|e| e.to_string())?;
            ensure(max == exact.total as i64, || format!("{tag}: brute force {max} vs bound {}", exact.total))?;
            brute_checked += 1;
        }
    }
    Ok(format!("{} instances agree, {brute_checked} attained by brute force", cases.len()))
}

fn random_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let config = MisConfig::with_limit(256);
    let mut equal = 0;
    for trial in 0..200 {
        let h = random_hypergraph(&mut rng, 1, 5, 2);
        let bound = classical_bound(&h, &config).map_err(|e| e.to_string())?.total as i64;
        let max = mis_oracle(&expand(&h), &config).map_err(|e| e.to_string())?;
        ensure(max <= bound, || format!("trial {trial}: oracle {max} exceeds bound {bound}"))?;
        if max == bound {
            equal += 1;
        }
    }
    Ok(format!("200 graphs sound, bound attained in {equal}/200 ({:.1}%)", equal as f64 / 2.0))
}

fn decomposition_identity() -> Outcome {
    let s = random_decomposition_trials(11, 1000).map_err(|e| e.to_string())?;
    ensure(s.failures == 0, || format!("{} of {} trials failed", s.failures, s.trials))?;
    Ok(format!("{} trials, 0 failures", s.trials))
}

fn independence_formulas() -> Outcome {
    let start = Instant::now();
    let mut cases: Vec<(Family, Option<usize>)> = vec![
        (Family::FractalTree { depth: 1 }, Some(2)),
        (Family::FractalTree { depth: 2 }, Some(5)),
        (Family::FractalTree { depth: 3 }, Some(10)),
        (Family::FractalCyclic { depth: 1 }, Some(1)),
        (Family::FractalCyclic { depth: 2 }, Some(3)),
        (Family::FractalCyclic { depth: 3 }, Some(7)),
        (Family::TorusLattice { mx: 3, my: 3 }, Some(3)),
        (Family::TorusLattice { mx: 3, my: 4 }, Some(4)),
        (Family::TorusLattice { mx: 4, my: 4 }, Some(8)),
        (Family::Wheel7, Some(2)),
    ];
    for mx in 1..=4 {
        for my in 1..=4 {
            cases.push((Family::SquareLattice { mx, my }, Some((mx * my).div_ceil(2))));
        }
    }
    for (family, expected) in &cases {
        let spec = FamilySpec::uniform(*family, 1);
        let formula = closed_form_independence(&spec).map_err(|e| e.to_string())?;
        let h = generate(&spec).map_err(|e| e.to_string())?;
        let exact = max_independent_set(&h, &MisConfig::default()).map_err(|e| e.to_string())?.size;
        ensure(formula == exact, || format!("{family:?}: formula {formula} vs exact {exact}"))?;
        if let Some(e) = expected {
            ensure(exact == *e, || format!("{family:?}: exact {exact}, expected {e}"))?;
        }
    }
    let took = within(Duration::from_secs(10), start)?;
    Ok(format!("{} families match ({took:.2?})", cases.len()))
}

fn clifton_contradiction() -> Outcome {
    for n in 1..=4u32 {
        let h = HyperGraph::new(2, [(0, 1, n)]).map_err(|e| e.to_string())?;
        let g = expand(&h);
        let find = |kind: AuxKind| {
            g.vertices()
                .iter()
                .position(|v| *v == ExpandedVertex::Aux { edge: 0, kind, level: 0 })
                .expect("level-0 ray present")
        };
        let (p0, q0) = (find(AuxKind::P), find(AuxKind::Q));
        let outcome = ks_propagate(&g, &[(0, 1), (1, 1)]).map_err(|e| e.to_string())?;
        let PropagationOutcome::Contradiction { trace, violation } = outcome else {
            return Err(format!("n={n}: propagation stayed consistent"));
        };
        let Violation::Edge(a, b) = violation else {
            return Err(format!("n={n}: violation {violation:?} is not an edge"));
        };
        ensure((a.min(b), a.max(b)) == (p0.min(q0), p0.max(q0)), || {
            format!("n={n}: contradiction at ({a}, {b}), expected ({p0}, {q0})")
        })?;
        let last = trace.last().map(|s| s.vertex);
        ensure(last == Some(p0) || last == Some(q0), || format!("n={n}: trace ends at {last:?}"))?;
    }
    Ok("contradiction at the p0 -- q0 edge for n = 1..4".into())
}

fn quantum_wheel() -> Outcome {
    let spec = FamilySpec {
        family: Family::Wheel7,
        weights: Weights::FromRays { rays: wheel7_demo_rays(DEFAULT_WHEEL7_DELTA), cap: None },
    };
    let h = generate(&spec).map_err(|e| e.to_string())?;
    let v = classify(&h, &MisConfig::default(), RealizabilityPolicy::Enforce).map_err(|e| e.to_string())?;
    let lmin = v.quantum.lambda_min;
    ensure((lmin - 7.0 / 3.0).abs() <= 0.05, || format!("lambda_min {lmin}"))?;
    ensure(v.classical.independence_term == 2, || format!("|U| = {}", v.classical.independence_term))?;
    ensure(v.classification == Classification::StateIndependent, || format!("class {:?}", v.classification))?;
    ensure(v.margin > 0.25, || format!("margin {}", v.margin))?;
    Ok(format!("lambda_min = {lmin:.6}, margin = {:.6}, state-independent", v.margin))
}

fn tetrahedron_identity() -> Outcome {
    let rays: Vec<Ray> = [(1.0, 1.0, 1.0), (1.0, -1.0, -1.0), (-1.0, 1.0, -1.0), (-1.0, -1.0, 1.0)]
        .into_iter()
        .map(|(x, y, z)| Ray::from_real(x, y, z).unwrap())
        .collect();
    let sum = projector_sum(&rays).map_err(|e| e.to_string())?;
    let dev = sum.max_abs_diff(&Hermitian3::identity().scale(4.0 / 3.0));
    ensure(dev <= 1e-12, || format!("deviation {dev:e}"))?;
    Ok(format!("max deviation {dev:.1e}"))
}

fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

#[allow(clippy::needless_range_loop)]
fn numerics() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = 0.0f64;
    for trial in 0..1000 {
        let mut m = [[Complex64::new(0.0, 0.0); 3]; 3];
        for i in 0..3 {
            m[i][i] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
            for j in i + 1..3 {
                m[i][j] = random_complex(&mut rng);
                m[j][i] = m[i][j].conj();
            }
        }
        let h = Hermitian3::new(m).map_err(|e| e.to_string())?;
        let r = eigensystem(&h).residuals(&h).into_iter().fold(0.0, f64::max);
        ensure(r <= 1e-12, || format!("trial {trial}: residual {r:e}"))?;
        worst = worst.max(r);
    }
    let mut worst_phase = 0.0f64;
    for _ in 0..1000 {
        let a = Ray::normalized([random_complex(&mut rng), random_complex(&mut rng), random_complex(&mut rng)]);
        let b = Ray::normalized([random_complex(&mut rng), random_complex(&mut rng), random_complex(&mut rng)]);
        let (Ok(a), Ok(b)) = (a, b) else { continue };
        let (s, t) = (rng.gen_range(0.0..std::f64::consts::TAU), rng.gen_range(0.0..std::f64::consts::TAU));
        let d = (overlap(&a.with_phase(s), &b.with_phase(t)) - overlap(&a, &b)).abs();
        worst_phase = worst_phase.max(d);
    }
    ensure(worst_phase <= 1e-12, || format!("phase deviation {worst_phase:e}"))?;
    Ok(format!("worst residual {worst:.1e}, worst phase deviation {worst_phase:.1e}"))
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name).display().to_string();
    let (hg, rays) = (path("wheel7.hg"), path("wheel7.rays"));
    let pipeline = || -> Result<Vec<String>, String> {
        let steps: [Vec<&str>; 3] = [
            vec!["gen", "wheel7", "--demo-rays", "--emit-rays", &rays, "-o", &hg],
            vec!["bound", &hg],
            vec!["quantum", &hg, "--rays", &rays],
        ];
        let mut outputs = Vec::new();
        for args in steps {
            let out = cli::run(["kshg", "--seed", "7"].into_iter().chain(args.iter().copied()));
            ensure(out.status == 0, || format!("{args:?} exited {}: {}", out.status, out.stderr))?;
            outputs.push(out.stdout);
        }
        for file in [&hg, &rays] {
            outputs.push(std::fs::read_to_string(file).map_err(|e| e.to_string())?);
        }
        Ok(outputs)
    };
    let first = pipeline()?;
    let second = pipeline()?;
    ensure(first == second, || "reports differ between runs".into())?;
    ensure(first[2].contains("classification = state-independent"), || first[2].clone())?;
    Ok("gen, bound and quantum reports byte-identical".into())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("single hyper-edge expansion maximum", single_edge_maximum),
        ("hyper-edge observable maximum", hyper_edge_observable_maximum),
        ("complete, linear and cyclic family bounds", family_theorems),
        ("random hyper-graph soundness", random_soundness),
        ("one-vertex-removal identity", decomposition_identity),
        ("closed-form independence numbers", independence_formulas),
        ("8-ray style contradiction", clifton_contradiction),
        ("quantum wheel violation", quantum_wheel),
        ("tetrahedron projector sum", tetrahedron_identity),
        ("eigensolver residuals and phase invariance", numerics),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
