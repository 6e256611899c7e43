//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every oracle here is computed independently of the code under test
//! (direct counts, trial division, closed forms, brute-force enumeration).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shiftarc::arc::{
    arc_csv, arc_point, arc_sweep, bisect_entropy, product_genericity_diagnostic, sample_generic, select_alpha,
    uniform_grid, AlphaPolicy, ArcSample, GenericSource,
};
use shiftarc::entropy::{entropy_estimate, fano_bound};
use shiftarc::families::{
    bfree_characteristic, heredity_check, is_admissible, safe_symbol_check, topological_entropy_estimate,
    EnumerationBudget, ShiftFamilySpec,
};
use shiftarc::measures::{dbar_blocks, dbar_ladder, empirical_blocks, BlockDistribution, DEFAULT_LADDER};
use shiftarc::report::{rational_to_f64, Manifest};
use shiftarc::sequence::{disagreement_density, sturmian_window, Alphabet, FixedFraction, RotationCoding, Window};
use shiftarc::Rational;
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

const N: usize = 1_000_000;
const SEED: u64 = 20_240_611;
const K: usize = 8;
const GRID_STEPS: u64 = 20;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn f(x: &Rational) -> f64 {
    rational_to_f64(x)
}

struct Fixture {
    alpha: FixedFraction,
    x: Window,
    sweep: Vec<ArcSample>,
    sweep_time: Duration,
}

impl Fixture {
    fn build() -> Fixture {
        let alpha = select_alpha(&AlphaPolicy::Default, 128).unwrap();
        let x = sample_generic(&coin(), N, SEED).unwrap();
        let start = Instant::now();
        let sweep = arc_sweep(&x, alpha, &uniform_grid(GRID_STEPS), K, None).unwrap();
        Fixture { alpha, x, sweep, sweep_time: start.elapsed() }
    }
}

fn coin() -> GenericSource {
    GenericSource::Bernoulli(vec![r(1, 2), r(1, 2)])
}

fn within_time(outcome: Outcome, elapsed: Duration, limit: Duration) -> Outcome {
    let detail = outcome?;
    if elapsed > limit {
        return Err(format!("{detail}; took {elapsed:.2?}, limit {limit:.0?}"));
    }
    Ok(format!("{detail}; {elapsed:.2?}"))
}

fn c1_sturmian_density() -> Outcome {
    let start = Instant::now();
    let alpha = FixedFraction::golden(128).unwrap();
    let pairs = [
        (1, 10, 2, 10),
        (0, 1, 1, 1),
        (1, 4, 3, 4),
        (1, 3, 2, 3),
        (3, 10, 31, 100),
        (1, 2, 1, 2),
        (123, 1000, 456, 1000),
        (7, 10, 19, 20),
        (1, 100, 99, 100),
        (5, 8, 1, 8),
    ];
    let mut worst: f64 = 0.0;
    for (a, b, c, d) in pairs {
        let (beta, beta2) = (r(a, b), r(c, d));
        let y = sturmian_window(&RotationCoding::new(alpha, beta.clone()).unwrap(), 0, N).unwrap();
        let y2 = sturmian_window(&RotationCoding::new(alpha, beta2.clone()).unwrap(), 0, N).unwrap();
        // Oracle: direct count of disagreeing coordinates.
        let differ = y.symbols().iter().zip(y2.symbols()).filter(|(p, q)| p != q).count();
        assert_eq!(r(differ as i64, N as i64), disagreement_density(&y, &y2).unwrap());
        worst = worst.max((differ as f64 / N as f64 - (f(&beta) - f(&beta2)).abs()).abs());
    }
    let detail = format!("max |density − |β−β'|| = {worst:.2e} (≤ 5e-3)");
    let outcome = if worst <= 5e-3 { Ok(detail) } else { Err(detail) };
    within_time(outcome, start.elapsed(), Duration::from_secs(10))
}

fn c2_lipschitz(fx: &Fixture) -> Outcome {
    let start = Instant::now();
    let mut worst = f64::NEG_INFINITY;
    for pair in fx.sweep.windows(2) {
        let d = f(&disagreement_density(&pair[0].window, &pair[1].window).unwrap());
        let step = f(&(&pair[1].beta - &pair[0].beta));
        worst = worst.max(d - step);
    }
    let detail = format!("max (d̄_Ω − Δβ) over 20 steps = {worst:.2e} (≤ 5e-3)");
    let outcome = if worst <= 5e-3 { Ok(detail) } else { Err(detail) };
    within_time(outcome, fx.sweep_time + start.elapsed(), Duration::from_secs(30))
}

fn c3_endpoints(fx: &Fixture) -> Outcome {
    let h0 = &fx.sweep[0].entropy_profile;
    let h1 = fx.sweep.last().unwrap().entropy_profile.chosen_estimate;
    let zero_exact = h0.chosen_estimate == 0.0 && h0.block_entropies.iter().all(|&h| h == 0.0);
    let gap = (h1 - std::f64::consts::LN_2).abs();
    let detail = format!("ĥ(Φ(0)) = {}, |ĥ(Φ(1)) − ln 2| = {gap:.2e} (≤ 0.02)", h0.chosen_estimate);
    if zero_exact && gap <= 0.02 && fx.sweep.last().unwrap().window == fx.x {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c4_bisection(fx: &Fixture) -> Outcome {
    let start = Instant::now();
    let out = bisect_entropy(&fx.x, fx.alpha, 0.35, 0.02, 20, K).map_err(|e| e.to_string())?;
    // Oracle: re-estimate at the returned β independently of the search.
    let check = entropy_estimate(&arc_point(&fx.x, fx.alpha, &out.beta_star).unwrap(), K).unwrap().chosen_estimate;
    let detail = format!(
        "β* = {:.6}, ĥ = {:.4}, refinements = {}, converged = {}",
        f(&out.beta_star),
        out.achieved,
        out.iterations,
        out.converged
    );
    let ok = out.converged && out.iterations <= 20 && (check - 0.35).abs() <= 0.02 && check == out.achieved;
    within_time(if ok { Ok(detail) } else { Err(detail) }, start.elapsed(), Duration::from_secs(120))
}

fn c5_inequality_one(fx: &Fixture) -> Outcome {
    let start = Instant::now();
    let dists: Vec<Vec<BlockDistribution>> = fx
        .sweep
        .iter()
        .map(|s| DEFAULT_LADDER.iter().map(|&k| empirical_blocks(&s.window, k).unwrap()).collect())
        .collect();
    let mut worst = f64::NEG_INFINITY;
    let mut checked = 0;
    for i in 0..fx.sweep.len() {
        for j in i + 1..fx.sweep.len() {
            let d = f(&disagreement_density(&fx.sweep[i].window, &fx.sweep[j].window).unwrap());
            for (p, q) in dists[i].iter().zip(&dists[j]) {
                let cost = f(&dbar_blocks(p, q).unwrap().cost);
                worst = worst.max(cost - d);
                checked += 1;
            }
        }
    }
    // The ladder entry point agrees with the cached computation.
    let ladder = dbar_ladder(&fx.sweep[5].window, &fx.sweep[15].window, &DEFAULT_LADDER).unwrap();
    for ((_, c), (p, q)) in ladder.iter().zip(dists[5].iter().zip(&dists[15])) {
        if *c != dbar_blocks(p, q).unwrap().cost {
            return Err("dbar_ladder disagrees with dbar_blocks".into());
        }
    }
    let detail = format!("{checked} costs, max (cost − d̄_Ω) = {worst:.2e} (≤ 0.01); {:.2?}", start.elapsed());
    if worst <= 0.01 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_distribution(rng: &mut ChaCha8Rng, k: usize) -> BlockDistribution {
    loop {
        let raw: Vec<u32> =
            (0..1usize << k).map(|_| if rng.gen_bool(0.3) { 0 } else { rng.gen_range(1..50) }).collect();
        let total: u32 = raw.iter().sum();
        if total == 0 {
            continue;
        }
        let weights: BTreeMap<Vec<u8>, Rational> = raw
            .iter()
            .enumerate()
            .map(|(code, &c)| ((0..k).map(|b| ((code >> b) & 1) as u8).collect(), r(c as i64, total as i64)))
            .collect();
        return BlockDistribution::new(Alphabet::BINARY, k, weights).unwrap();
    }
}

fn c6_metric_axioms() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checks = 0;
    for k in 1..=4 {
        let dists: Vec<BlockDistribution> = (0..50).map(|_| random_distribution(&mut rng, k)).collect();
        for i in 0..dists.len() {
            let (p, q, s) = (&dists[i], &dists[(i + 1) % 50], &dists[(i + 2) % 50]);
            let pq = dbar_blocks(p, q).unwrap();
            let qp = dbar_blocks(q, p).unwrap();
            let qs = dbar_blocks(q, s).unwrap();
            let ps = dbar_blocks(p, s).unwrap();
            let pp = dbar_blocks(p, p).unwrap();
            if pq.cost != qp.cost {
                return Err(format!("asymmetry at k={k}, i={i}"));
            }
            if ps.cost > &pq.cost + &qs.cost {
                return Err(format!("triangle violated at k={k}, i={i}"));
            }
            if !pp.cost.is_integer() || pp.cost != r(0, 1) || (pq.cost == r(0, 1)) != (p == q) {
                return Err(format!("identity of indiscernibles fails at k={k}, i={i}"));
            }
            for (plan, a, b) in [(&pq, p, q), (&qp, q, p), (&qs, q, s), (&ps, p, s)] {
                if !plan.is_feasible_for(a, b) {
                    return Err(format!("infeasible plan at k={k}, i={i}"));
                }
            }
            checks += 1;
        }
    }
    within_time(Ok(format!("200 distributions, {checks} triangles, exact")), start.elapsed(), Duration::from_secs(60))
}

fn c7_family_checkers() -> Outcome {
    let start = Instant::now();
    let budget = EnumerationBudget::default();
    let golden = ShiftFamilySpec::sft_digits(2, &["11"]).unwrap();
    let no00 = ShiftFamilySpec::sft_digits(2, &["00"]).unwrap();
    let no12 = ShiftFamilySpec::sft_digits(3, &["12"]).unwrap();
    let pair = |v: &shiftarc::families::Verdict| v.witness.as_ref().map(|(a, b)| (a.to_string(), b.to_string()));
    let g = heredity_check(&golden, 12, budget).map_err(|e| e.to_string())?;
    let z = heredity_check(&no00, 12, budget).map_err(|e| e.to_string())?;
    let s = safe_symbol_check(&no12, 0, 12, budget).map_err(|e| e.to_string())?;
    let h = heredity_check(&no12, 12, budget).map_err(|e| e.to_string())?;
    let ok = g.holds
        && !z.holds
        && pair(&z) == Some(("11".into(), "00".into()))
        && s.holds
        && !h.holds
        && pair(&h) == Some(("22".into(), "12".into()));
    let detail =
        format!("golden holds={}, 00 witness={:?}, 12 safe(0)={} witness={:?}", g.holds, pair(&z), s.holds, pair(&h));
    within_time(if ok { Ok(detail) } else { Err(detail) }, start.elapsed(), Duration::from_secs(10))
}

fn c8_beta_golden() -> Outcome {
    let spec = ShiftFamilySpec::beta("(1+sqrt(5))/2", 64).unwrap();
    let mut words = 0;
    for len in 1..=12usize {
        for code in 0u32..(1 << len) {
            let word: Vec<u8> = (0..len).map(|i| ((code >> i) & 1) as u8).collect();
            let oracle = !word.windows(2).any(|w| w == [1, 1]);
            let w = Window::new(Alphabet::BINARY, 0, word).unwrap();
            if is_admissible(&spec, &w).map_err(|e| e.to_string())? != oracle {
                return Err(format!("disagreement on {w}"));
            }
            words += 1;
        }
    }
    Ok(format!("{words} words of length ≤ 12 agree with the no-11 predicate"))
}

fn c9_bfree() -> Outcome {
    let primes = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31];
    let b: Vec<u64> = primes.iter().map(|p| p * p).collect();
    let w = bfree_characteristic(&b, 1, 100_000).map_err(|e| e.to_string())?;
    for j in 1..=100_000u64 {
        let oracle = primes.iter().all(|p| j % (p * p) != 0) as u8;
        if w.get(j as i64) != Some(oracle) {
            return Err(format!("mismatch at j={j}"));
        }
    }
    let spec = ShiftFamilySpec::b_admissible(b).unwrap();
    if !is_admissible(&spec, &w).map_err(|e| e.to_string())? {
        return Err("characteristic window is not B-admissible".into());
    }
    Ok("1..10^5 matches trial division; window is B-admissible".into())
}

fn c10_topological_entropy() -> Outcome {
    let budget = EnumerationBudget::default();
    let golden = ShiftFamilySpec::sft_digits(2, &["11"]).unwrap();
    let est = topological_entropy_estimate(&golden, 30, budget).map_err(|e| e.to_string())?.estimate;
    let full = ShiftFamilySpec::Full(Alphabet::BINARY);
    let prof = topological_entropy_estimate(&full, 30, budget).map_err(|e| e.to_string())?;
    let exact = prof.profile.iter().all(|(l, count, h)| {
        *count == (num_bigint::BigUint::from(1u8) << *l).to_string() && (h - std::f64::consts::LN_2).abs() < 1e-15
    });
    let oracle = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    let detail = format!("golden L=30: {est:.5} (oracle {oracle:.5}); full shift exact = {exact}");
    if (est - 0.4812).abs() <= 0.01 && exact {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c11_product_genericity(fx: &Fixture) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for k in [1, 2] {
        let tv = f(&product_genericity_diagnostic(&fx.x, fx.alpha, &r(1, 2), k).map_err(|e| e.to_string())?);
        ok &= tv <= 0.01;
        parts.push(format!("k={k}: TV={tv:.2e}"));
    }
    // Oracle at k = 1: direct joint count of (x_j, y_j).
    let y = sturmian_window(&RotationCoding::new(fx.alpha, r(1, 2)).unwrap(), 0, N).unwrap();
    let mut c = [[0f64; 2]; 2];
    for (&a, &b) in fx.x.symbols().iter().zip(y.symbols()) {
        c[a as usize][b as usize] += 1.0 / N as f64;
    }
    let (px, py) = ([c[0][0] + c[0][1], c[1][0] + c[1][1]], [c[0][0] + c[1][0], c[0][1] + c[1][1]]);
    let direct: f64 =
        (0..2).flat_map(|a| (0..2).map(move |b| (a, b))).map(|(a, b)| (c[a][b] - px[a] * py[b]).abs()).sum::<f64>()
            / 2.0;
    let lib = f(&product_genericity_diagnostic(&fx.x, fx.alpha, &r(1, 2), 1).unwrap());
    ok &= (direct - lib).abs() < 1e-9;
    let detail = format!("{} (≤ 0.01), direct k=1 oracle {direct:.2e}", parts.join(", "));
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c12_fano_envelope(fx: &Fixture) -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    for (i, a) in fx.sweep.iter().enumerate() {
        for b in &fx.sweep[i + 1..] {
            let d = f(&disagreement_density(&a.window, &b.window).unwrap());
            let gap = (a.entropy_profile.chosen_estimate - b.entropy_profile.chosen_estimate).abs();
            worst = worst.max(gap - fano_bound(d, 2).unwrap());
        }
    }
    let detail = format!("210 pairs, max (|Δĥ| − Fano) = {worst:.3} (≤ 0.03)");
    if worst <= 0.03 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c13_determinism(fx: &Fixture) -> Outcome {
    let manifest = Manifest::new("arc")
        .with("source", coin().to_string())
        .with("seed", SEED)
        .with("n", N)
        .with("alpha", fx.alpha.to_hex())
        .with("grid", "0:1:0.05")
        .with("k", K);
    let run = || {
        let x = sample_generic(&coin(), N, SEED).unwrap();
        let alpha = select_alpha(&AlphaPolicy::Default, 128).unwrap();
        let sweep = arc_sweep(&x, alpha, &uniform_grid(GRID_STEPS), K, None).unwrap();
        arc_csv(&sweep, Some(&manifest.hash()))
    };
    let first = arc_csv(&fx.sweep, Some(&manifest.hash()));
    let second = run();
    let bisect_a = bisect_entropy(&fx.x, fx.alpha, 0.35, 0.02, 20, K).unwrap();
    let bisect_b = bisect_entropy(&fx.x, fx.alpha, 0.35, 0.02, 20, K).unwrap();
    let random_alpha = select_alpha(&AlphaPolicy::Randomized(7), 128).unwrap();
    let same_alpha = random_alpha == select_alpha(&AlphaPolicy::Randomized(7), 128).unwrap();
    if first == second && bisect_a == bisect_b && same_alpha {
        Ok(format!("sweep CSV ({} bytes), bisection and random α reproduce exactly", first.len()))
    } else {
        Err("outputs differ between identical runs".into())
    }
}

fn main() {
    let started = Instant::now();
    let fx = Fixture::build();
    let criteria: Vec<Criterion> = vec![
        ("Sturmian density law", Box::new(c1_sturmian_density)),
        ("arc Lipschitz bound", Box::new(|| c2_lipschitz(&fx))),
        ("entropy endpoints", Box::new(|| c3_endpoints(&fx))),
        ("intermediate entropy by bisection", Box::new(|| c4_bisection(&fx))),
        ("empirical d-bar inequality", Box::new(|| c5_inequality_one(&fx))),
        ("transport metric axioms", Box::new(c6_metric_axioms)),
        ("family checkers", Box::new(c7_family_checkers)),
        ("beta-shift criterion", Box::new(c8_beta_golden)),
        ("B-free correctness", Box::new(c9_bfree)),
        ("topological entropy", Box::new(c10_topological_entropy)),
        ("product genericity", Box::new(|| c11_product_genericity(&fx))),
        ("entropy continuity envelope", Box::new(|| c12_fano_envelope(&fx))),
        ("determinism", Box::new(|| c13_determinism(&fx))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed, {:.1?} total", criteria.len() - failed, started.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
