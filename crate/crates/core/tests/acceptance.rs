//! One PASS/FAIL line per acceptance criterion. Each criterion also has a
//! wall-clock limit; exceeding it counts as a failure.

use std::time::{Duration, Instant};

use cybmw::arith::{BigRational, Field, RatFunc, Sample};
use cybmw::brauer::{enumerate_diagrams, gram_matrix, DiagramElement, Thetas, ZrBrauerDiagram};
use cybmw::ground::{
    check_cauchy_and_residue_identities, check_gamma_system, check_weak_admissibility, check_wilcox_yu,
    delta_closed_form, delta_forward_recursion, delta_from_mu, mu, solve_deltas_from_admissibility, z1_series,
    AdmissibilityOptions, GroundParams, RhoChoice,
};
use cybmw::report::Check;
use cybmw::tableaux::{dimension_identity, Multipartition, Partition};
use cybmw::verify::{qtilde_checks, weight_checks};
use cybmw::w2::{build_w2_rep, check_spectral_idempotents, delta_negative_consistency, verify_w2_relations, W2Options};
use cybmw::weights::{semisimple_sufficient, weight_table};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20240601;
const RANDOM_TRIALS: usize = 20;

type Outcome = Result<String, String>;

fn sym(r: usize) -> GroundParams<RatFunc> {
    GroundParams::symbolic(r, RhoChoice::Canonical).unwrap()
}

fn rational(rng: &mut ChaCha8Rng, r: usize) -> GroundParams<BigRational> {
    GroundParams::random(rng, r, RhoChoice::Canonical).unwrap()
}

fn all_pass(what: &str, checks: Vec<Check>) -> Result<usize, String> {
    match checks.iter().find(|c| !c.passed) {
        Some(c) => Err(format!("{what}: {} = {}", c.label(), c.residual)),
        None => Ok(checks.len()),
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn double_factorial(n: u128) -> u128 {
    (1..=n).map(|k| 2 * k - 1).product()
}

fn c1_dimension() -> Outcome {
    for r in 1..=3usize {
        for n in 0..=5usize {
            let want = (r as u128).pow(n as u32) * double_factorial(n as u128);
            let (lhs, rhs) = dimension_identity(n, r);
            if lhs != want || rhs != want {
                return Err(format!("r={r} n={n}: {lhs} vs {want}"));
            }
            if n <= 4 {
                let d = enumerate_diagrams(n, r as u32).len() as u128;
                if d != want {
                    return Err(format!("r={r} n={n}: {d} diagrams, want {want}"));
                }
            }
        }
    }
    Ok("r<=3, n<=5 sums; diagrams n<=4".into())
}

fn w2_all<F: Field>(p: &GroundParams<F>) -> Result<usize, String> {
    let rep = build_w2_rep(p).map_err(err)?;
    let mut c = verify_w2_relations(&rep, p, &W2Options::default()).map_err(err)?;
    c.extend(check_spectral_idempotents(&rep, p).map_err(err)?);
    all_pass(&format!("r={}", p.r()), c)
}

fn c2_w2() -> Outcome {
    let mut n = 0;
    for r in 1..=3 {
        n += w2_all(&sym(r))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for r in 4..=5 {
        for _ in 0..RANDOM_TRIALS {
            n += w2_all(&rational(&mut rng, r))?;
        }
    }
    Ok(format!("{n} relation checks"))
}

fn c3_admissibility() -> Outcome {
    for r in 1..=3usize {
        let p = sym(r);
        let rep = check_wilcox_yu(&p, &AdmissibilityOptions::for_rank(r)).map_err(err)?;
        all_pass(&format!("r={r}"), rep.all_checks())?;
        all_pass(&format!("r={r} weak"), check_weak_admissibility(&p, (-(r as i64), r as i64)).map_err(err)?)?;
        let solved = solve_deltas_from_admissibility(p.rho(), p.q(), &p.a()).map_err(err)?;
        if solved.len() != r.saturating_sub(1) {
            return Err(format!("r={r}: solved {} deltas", solved.len()));
        }
        for (j, d) in solved.iter().enumerate() {
            if !d.equals(&p.delta(j as i64 + 1).map_err(err)?) {
                return Err(format!("r={r}: triangular solve differs at delta_{}", j + 1));
            }
        }
    }
    Ok("r<=3 exact".into())
}

fn c4_deltas() -> Outcome {
    for r in 1..=3usize {
        let p = sym(r);
        let series = z1_series(&p, 9).map_err(err)?;
        let m = mu(p.u(), 9).map_err(err)?;
        for a in 0..=8usize {
            let closed = delta_closed_form(&p, a as u32).map_err(err)?;
            if !series[a].equals(&closed) {
                return Err(format!("r={r} a={a}: series coefficient differs"));
            }
            if !delta_from_mu(&p, a, &m).map_err(err)?.equals(&closed) {
                return Err(format!("r={r} a={a}: mu formula differs"));
            }
            if a >= r && !delta_forward_recursion(&p, a as i64).map_err(err)?.equals(&closed) {
                return Err(format!("r={r} a={a}: forward recursion differs"));
            }
        }
    }
    for r in 1..=2 {
        all_pass(&format!("r={r}"), delta_negative_consistency(&sym(r), 5).map_err(err)?)?;
    }
    Ok("0<=a<=8, r<=3; delta_-a for a<=5, r<=2".into())
}

fn c5_qtilde() -> Outcome {
    let mut n = 0;
    for r in 1..=2 {
        n += all_pass(&format!("r={r}"), qtilde_checks(&sym(r), 3, &RatFunc::t()).map_err(err)?)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    for _ in 0..RANDOM_TRIALS {
        let p = rational(&mut rng, 3);
        let x = BigRational::sample(&mut rng);
        n += all_pass("r=3", qtilde_checks(&p, 3, &x).map_err(err)?)?;
    }
    Ok(format!("{n} (shape, node) residuals"))
}

fn c6_weights() -> Outcome {
    for r in 1..=2usize {
        let p = sym(r);
        let t = weight_table(3, &p).map_err(err)?;
        let d0 = p.delta(0).map_err(err)?;
        let g = &p.gammas().map_err(err)?.gamma;
        for j in 0..r {
            let mut comps = vec![Partition::empty(); r];
            comps[j] = Partition::new(vec![1]).map_err(err)?;
            let w = t.get(1, &Multipartition::new(comps)).ok_or("missing level-1 shape")?;
            if !w.equals(&g[j].div(&d0).map_err(err)?) {
                return Err(format!("r={r}: base weight {j} differs from gamma/delta0"));
            }
        }
        for n in 1..=3 {
            all_pass(&format!("r={r} n={n}"), weight_checks(&p, n).map_err(err)?)?;
        }
    }
    Ok("n<=3, r<=2 symbolic".into())
}

fn random_element(rng: &mut ChaCha8Rng, n: usize, r: u32, t: &Thetas<BigRational>) -> DiagramElement<BigRational> {
    let mut x = DiagramElement::zero(n, r, t.clone());
    for _ in 0..rng.gen_range(1..=3) {
        x.add_term(ZrBrauerDiagram::random(rng, n, r), BigRational::sample(rng));
    }
    x
}

fn c7_brauer() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let thetas: Vec<Thetas<BigRational>> = (1..=3).map(|r| Thetas::random(&mut rng, r)).collect();
    let pick = |rng: &mut ChaCha8Rng, lo: usize| {
        let r = rng.gen_range(1..=3u32);
        (rng.gen_range(lo..=4usize), r, thetas[r as usize - 1].clone())
    };
    for i in 0..200 {
        let (n, r, t) = pick(&mut rng, 0);
        let [x, y, z] = [0; 3].map(|_| random_element(&mut rng, n, r, &t));
        let lhs = x.multiply(&y).map_err(err)?.multiply(&z).map_err(err)?;
        let rhs = x.multiply(&y.multiply(&z).map_err(err)?).map_err(err)?;
        if !lhs.equals(&rhs) {
            return Err(format!("associativity fails at triple {i} (n={n}, r={r})"));
        }
    }
    for i in 0..500 {
        let (n, r, t) = pick(&mut rng, 0);
        let x = random_element(&mut rng, n, r, &t);
        let y = random_element(&mut rng, n, r, &t);
        let a = x.multiply(&y).map_err(err)?.markov_trace().map_err(err)?;
        let b = y.multiply(&x).map_err(err)?.markov_trace().map_err(err)?;
        if !a.equals(&b) {
            return Err(format!("traciality fails at pair {i}"));
        }
    }
    for i in 0..100 {
        let (n, r, t) = pick(&mut rng, 1);
        let x = random_element(&mut rng, n, r, &t);
        let a = random_element(&mut rng, n - 1, r, &t);
        let b = random_element(&mut rng, n - 1, r, &t);
        let lhs = a
            .include()
            .multiply(&x)
            .and_then(|v| v.multiply(&b.include()))
            .and_then(|v| v.conditional_expectation())
            .map_err(err)?;
        let rhs = a
            .multiply(&x.conditional_expectation().map_err(err)?)
            .and_then(|v| v.multiply(&b))
            .map_err(err)?;
        if !lhs.equals(&rhs) {
            return Err(format!("bimodule property fails at triple {i}"));
        }
    }
    for r in [2u32, 3] {
        let (_, det) = gram_matrix(2, r, &thetas[r as usize - 1]).map_err(err)?;
        if det.is_zero() {
            return Err(format!("Gram determinant vanishes for (2,{r})"));
        }
    }
    Ok("200 triples, 500 pairs, 100 bimodule triples, Gram (2,2) (2,3)".into())
}

fn identity_pack<F: Field>(p: &GroundParams<F>) -> Result<usize, String> {
    let mut c = check_cauchy_and_residue_identities(p.u()).map_err(err)?;
    c.extend(check_gamma_system(p).map_err(err)?);
    all_pass(&format!("r={}", p.r()), c)
}

fn c8_identities() -> Outcome {
    let mut n = 0;
    for r in 1..=3 {
        n += identity_pack(&sym(r))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    for r in 4..=5 {
        for _ in 0..RANDOM_TRIALS {
            n += identity_pack(&rational(&mut rng, r))?;
        }
    }
    Ok(format!("{n} identity checks"))
}

fn c9_semisimple() -> Outcome {
    let q = BigRational::from_i64(2);
    let qp = |e: i64| Field::pow(&q, e).unwrap();
    let u = |v: &[i64]| v.iter().map(|&x| BigRational::from_i64(x)).collect::<Vec<_>>();
    let planted: Vec<(&str, Vec<BigRational>, usize)> = vec![
        ("u1 = +q^{+3}", vec![qp(3), BigRational::from_i64(5)], 1),
        ("u2 = -q^{-1}", vec![BigRational::from_i64(5), qp(-1).neg()], 1),
        ("u1/u2 = q^{+2}", vec![BigRational::from_i64(20), BigRational::from_i64(5)], 1),
        ("u1*u2 = q^{-2}", vec![BigRational::from_i64(3), BigRational::new(1.into(), 12.into())], 1),
        ("u1*u1 = q^{+0}", vec![BigRational::from_i64(-1), BigRational::from_i64(5)], 1),
    ];
    for (want, uu, n) in &planted {
        let rep = semisimple_sufficient(&q, uu, *n).map_err(err)?;
        if rep.semisimple || !rep.violations.iter().any(|v| v == want) {
            return Err(format!("planted {want} not detected: {:?}", rep.violations));
        }
    }
    for n in 0..=6 {
        let rep = semisimple_sufficient(&q, &u(&[3, 5, 7]), n).map_err(err)?;
        if !rep.semisimple {
            return Err(format!("generic point flagged at n={n}: {:?}", rep.violations));
        }
    }
    Ok(format!("{} planted clauses detected; q=2, u=(3,5,7) passes n<=6", planted.len()))
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 9] = [
        ("dimension identity", 30, c1_dimension),
        ("W2 relation suite", 60, c2_w2),
        ("admissibility equivalence", 30, c3_admissibility),
        ("delta triple agreement", 60, c4_deltas),
        ("Qtilde recursion", 60, c5_qtilde),
        ("weight suite", 120, c6_weights),
        ("Z_r-Brauer algebra", 120, c7_brauer),
        ("identity pack", 30, c8_identities),
        ("semisimplicity criterion", 5, c9_semisimple),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = f();
        let dt = start.elapsed();
        let limit = Duration::from_secs(*limit);
        let (ok, detail) = match out {
            Ok(d) if dt <= limit => (true, d),
            Ok(d) => (false, format!("{d}; too slow")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {}: {name} ({detail}) [{:.2}s / {}s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            dt.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
