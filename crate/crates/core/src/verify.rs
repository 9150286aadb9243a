//! The verification suite: every relation family, symbolically or at seeded random
//! rational points.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{BigRational, Field, RatFunc};
use crate::brauer::{diagram_trace, gram_matrix, DiagramElement, Thetas, ZrBrauerDiagram};
use crate::error::{Error, Result};
use crate::ground::{
    check_cauchy_and_residue_identities, check_gamma_system, check_wilcox_yu, delta_forward_recursion,
    delta_from_mu, mu, solve_deltas_from_admissibility, z1_closed_form, z1_from_gammas, z1_series,
    AdmissibilityOptions, GroundParams,
};
use crate::io::{constant_params, Mode, ParamSpec};
use crate::report::{all_passed, Check};
use crate::tableaux::{brauer_dimension, count_tableaux, dimension_identity, enumerate_tableaux, gamma_level};
use crate::w2::{build_w2_rep, check_spectral_idempotents, delta_negative_consistency, verify_w2_relations, W2Options};
use crate::weights::{check_weight_table, qtilde_recursion_residual, semisimple_sufficient, weight_table};

#[derive(Clone, Debug, Serialize)]
pub struct Section {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial: Option<u32>,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Section {
    pub fn new(name: &str, trial: Option<u32>, checks: Vec<Check>) -> Self {
        Self { name: name.into(), trial, passed: all_passed(&checks), checks }
    }

    fn from_result(name: &str, trial: Option<u32>, r: Result<Vec<Check>>) -> Self {
        match r {
            Ok(c) => Self::new(name, trial, c),
            Err(e) => Self::new(name, trial, vec![Check::boolean(name, None, false, e.to_string())]),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub r: usize,
    pub n: usize,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u32>,
    pub passed: bool,
    pub sections: Vec<Section>,
}

impl SuiteReport {
    pub fn failures(&self) -> Vec<(&Section, &Check)> {
        self.sections
            .iter()
            .flat_map(|s| s.checks.iter().filter(|c| !c.passed).map(move |c| (s, c)))
            .collect()
    }
}

/// Admissibility, the γ linear system and the triangular solve for δ_1..δ_{r−1}.
pub fn ground_checks<F: Field>(p: &GroundParams<F>) -> Result<Vec<Check>> {
    let mut out = check_wilcox_yu(p, &AdmissibilityOptions::for_rank(p.r()))?.all_checks();
    out.push(match p.check_nondegenerate() {
        Ok(()) => Check::boolean("nondegenerate", None, true, ""),
        Err(e) => Check::boolean("nondegenerate", None, false, e.to_string()),
    });
    if p.is_rho_canonical() {
        out.extend(check_gamma_system(p)?);
    }
    let solved = solve_deltas_from_admissibility(p.rho(), p.q(), &p.a())?;
    for (j, d) in solved.iter().enumerate() {
        let a = j as i64 + 1;
        out.push(Check::from_residual("triangular_solve", Some(a), &d.sub(&p.delta(a)?)));
    }
    Ok(out)
}

/// Closed form against the forward recursion for `r ≤ a ≤ a_max`, and the negative
/// recursion against `E Y^{−a} E`.
pub fn delta_checks<F: Field>(p: &GroundParams<F>, a_max: i64, neg_max: i64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for a in p.r() as i64..=a_max {
        let v = delta_forward_recursion(p, a)?.sub(&p.delta(a)?);
        out.push(Check::from_residual("delta_forward", Some(a), &v));
    }
    out.extend(delta_negative_consistency(p, neg_max)?);
    Ok(out)
}

/// The generating function Z₁(t): closed form against Σγ_j t/(t − u_j), and its
/// series and μ-coefficient formulas against δ_a for `0 ≤ a ≤ a_max`.
pub fn z1_checks(p: &GroundParams<RatFunc>, a_max: usize) -> Result<Vec<Check>> {
    let mut out = vec![Check::from_residual(
        "z1_closed_form",
        None,
        &z1_closed_form(p)?.sub(&z1_from_gammas(p)?),
    )];
    let s = z1_series(p, a_max + 1)?;
    let m = mu(p.u(), a_max + 1)?;
    for a in 0..=a_max {
        let d = p.delta(a as i64)?;
        out.push(Check::from_residual("z1_series", Some(a as i64), &s[a].sub(&d)));
        out.push(Check::from_residual("z1_mu_formula", Some(a as i64), &delta_from_mu(p, a, &m)?.sub(&d)));
    }
    Ok(out)
}

pub fn w2_checks<F: Field>(p: &GroundParams<F>) -> Result<Vec<Check>> {
    let rep = build_w2_rep(p)?;
    let mut out = verify_w2_relations(&rep, p, &W2Options::default())?;
    out.extend(check_spectral_idempotents(&rep, p)?);
    Ok(out)
}

/// Q̃ recursion at `x` for every addable node of every multipartition of size ≤ max_size.
pub fn qtilde_checks<F: Field>(p: &GroundParams<F>, max_size: usize, x: &F) -> Result<Vec<Check>> {
    let mut shapes = gamma_level(max_size, p.r());
    if max_size > 0 {
        shapes.extend(gamma_level(max_size - 1, p.r()));
    }
    let mut out = Vec::new();
    for mu in shapes {
        for a in mu.addable_nodes() {
            let mut c = Check::from_residual(
                "qtilde_recursion",
                Some(mu.size() as i64),
                &qtilde_recursion_residual(&mu, &a, p, x)?,
            );
            if !c.passed {
                c.residual = format!("{mu} {a}: {}", c.residual);
            }
            out.push(c);
        }
    }
    Ok(out)
}

pub fn weight_checks<F: Field>(p: &GroundParams<F>, n: usize) -> Result<Vec<Check>> {
    match weight_table(n, p) {
        Ok(t) => {
            let mut out = vec![Check::boolean("weight_shape_independence", Some(n as i64), true, "")];
            out.extend(check_weight_table(&t, p)?);
            Ok(out)
        }
        Err(e @ Error::ShapeInconsistency { .. }) => Ok(vec![Check::boolean(
            "weight_shape_independence",
            Some(n as i64),
            false,
            e.to_string(),
        )]),
        Err(e) => Err(e),
    }
}

/// Dimension identity, DP count against enumeration, and the diagram count.
pub fn tableaux_checks(r: usize, n: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for k in 0..=n {
        let (lhs, rhs) = dimension_identity(k, r);
        out.push(Check::boolean(
            "dimension_identity",
            Some(k as i64),
            lhs == rhs,
            format!("{lhs} != {rhs}"),
        ));
    }
    for k in 0..=n.min(4) {
        let dp = count_tableaux(k, r, None)?;
        let en = enumerate_tableaux(k, r, None)?.len() as u128;
        out.push(Check::boolean("tableaux_enumeration", Some(k as i64), dp == en, format!("{dp} != {en}")));
        if r <= 3 {
            let d = crate::brauer::enumerate_diagrams(k, r as u32).len() as u128;
            let want = brauer_dimension(k, r);
            out.push(Check::boolean("diagram_count", Some(k as i64), d == want, format!("{d} != {want}")));
        }
    }
    Ok(out)
}

fn random_element(rng: &mut ChaCha8Rng, n: usize, r: u32, t: &Thetas<BigRational>) -> DiagramElement<BigRational> {
    use crate::arith::Sample;
    let mut x = DiagramElement::zero(n, r, t.clone());
    for _ in 0..2 {
        x.add_term(ZrBrauerDiagram::random(rng, n, r), BigRational::sample(rng));
    }
    x
}

/// Associativity, traciality, the bimodule property of ε_n, ε∘ε_n = ε, flip as a
/// trace-preserving antihomomorphism, and the two routes to ε agreeing.
pub fn brauer_checks(n: usize, r: u32, rng: &mut ChaCha8Rng, samples: usize) -> Result<Vec<Check>> {
    let t = Thetas::<BigRational>::random(rng, r);
    let t = Thetas::new(r, t.values().to_vec())?;
    let mut names = vec![
        "brauer_associative",
        "brauer_trace",
        "brauer_flip_antihomomorphism",
        "brauer_flip_trace",
        "brauer_trace_tower",
        "brauer_closure_trace",
    ];
    if n >= 1 {
        names.extend(["brauer_bimodule", "brauer_include_expectation"]);
    }
    // First failing sample per property.
    let mut fails: BTreeMap<&str, String> = BTreeMap::new();
    let mut record = |name: &'static str, ok: bool, i: usize| {
        if !ok {
            fails.entry(name).or_insert_with(|| format!("sample {i}"));
        }
    };
    for i in 0..samples {
        let x = random_element(rng, n, r, &t);
        let y = random_element(rng, n, r, &t);
        let z = random_element(rng, n, r, &t);
        let xy = x.multiply(&y)?;
        let tx = x.markov_trace()?;
        record("brauer_associative", xy.multiply(&z)?.equals(&x.multiply(&y.multiply(&z)?)?), i);
        record("brauer_trace", xy.markov_trace()?.equals(&y.multiply(&x)?.markov_trace()?), i);
        record("brauer_flip_antihomomorphism", xy.flip().equals(&y.flip().multiply(&x.flip())?), i);
        record("brauer_flip_trace", x.flip().markov_trace()?.equals(&tx), i);
        if n >= 1 {
            record("brauer_trace_tower", x.conditional_expectation()?.markov_trace()?.equals(&tx), i);
        }
        let mut direct = BigRational::from_integer(0.into());
        for (dg, c) in x.terms() {
            direct = direct.add(&c.mul(&diagram_trace(dg, &t)?));
        }
        record("brauer_closure_trace", direct.equals(&tx), i);
        if n >= 1 {
            let a = random_element(rng, n - 1, r, &t);
            let b = random_element(rng, n - 1, r, &t);
            let lhs = a.include().multiply(&x)?.multiply(&b.include())?.conditional_expectation()?;
            let rhs = a.multiply(&x.conditional_expectation()?)?.multiply(&b)?;
            record("brauer_bimodule", lhs.equals(&rhs), i);
            record("brauer_include_expectation", a.include().conditional_expectation()?.equals(&a), i);
        }
    }
    let mut out: Vec<Check> = names
        .into_iter()
        .map(|name| match fails.get(name) {
            Some(d) => Check::boolean(name, Some(n as i64), false, d.clone()),
            None => Check::boolean(name, Some(n as i64), true, ""),
        })
        .collect();
    if n <= 2 && r <= 3 {
        let (_, det) = gram_matrix(n, r, &t)?;
        out.push(Check::boolean("gram_nondegenerate", Some(n as i64), !det.is_zero(), "determinant is 0"));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub spec: ParamSpec,
    pub n: usize,
    pub trials: u32,
    pub seed: u64,
    /// Random products per Brauer property.
    pub brauer_samples: usize,
}

impl SuiteConfig {
    pub fn new(spec: ParamSpec, n: usize) -> Self {
        Self { spec, n, trials: 5, seed: 0, brauer_samples: 20 }
    }
}

fn push<F: Field>(out: &mut Vec<Section>, trial: Option<u32>, p: &GroundParams<F>, n: usize, x: &F) {
    out.push(Section::from_result("ground", trial, ground_checks(p)));
    out.push(Section::from_result("identities", trial, check_cauchy_and_residue_identities(p.u())));
    out.push(Section::from_result("deltas", trial, delta_checks(p, 8, 5)));
    out.push(Section::from_result("w2", trial, w2_checks(p)));
    if p.is_rho_canonical() {
        out.push(Section::from_result("qtilde", trial, qtilde_checks(p, n, x)));
        out.push(Section::from_result("weights", trial, weight_checks(p, n)));
    }
}

/// Runs the whole suite. Symbolic mode works over ℚ(q, u); randomized mode repeats
/// every family at `trials` seeded random rational points.
pub fn verify_all(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let r = cfg.spec.r;
    let n = cfg.n;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut sections = Vec::new();
    sections.push(Section::from_result("tableaux", None, tableaux_checks(r, n)));
    let (seed, trials) = match cfg.spec.mode {
        Mode::Symbolic => {
            let p = cfg.spec.symbolic()?;
            push(&mut sections, None, &p, n, &RatFunc::t());
            if p.is_rho_canonical() && cfg.spec.overrides.is_empty() {
                sections.push(Section::from_result("z1", None, z1_checks(&p, 8)));
            }
            (None, None)
        }
        Mode::Randomized => {
            use crate::arith::Sample;
            for trial in 0..cfg.trials {
                let (_, p) = cfg.spec.random_point::<BigRational, _>(&mut rng)?;
                let x = BigRational::sample(&mut rng);
                push(&mut sections, Some(trial), &p, n, &x);
                if p.is_rho_canonical() && cfg.spec.overrides.is_empty() {
                    let sym = constant_params(&p)?;
                    sections.push(Section::from_result("z1", Some(trial), z1_checks(&sym, 8)));
                }
                let ss = semisimple_sufficient(p.q(), p.u(), n)?;
                sections.push(Section::new(
                    "semisimple",
                    Some(trial),
                    vec![Check::boolean("semisimple_sufficient", Some(n as i64), ss.semisimple, ss.violations.join("; "))],
                ));
            }
            (Some(cfg.seed), Some(cfg.trials))
        }
    };
    if r <= 3 {
        let bn = n.min(3);
        sections.push(Section::from_result("brauer", None, brauer_checks(bn, r as u32, &mut rng, cfg.brauer_samples)));
    }
    let passed = sections.iter().all(|s| s.passed);
    Ok(SuiteReport { r, n, mode: cfg.spec.mode, seed, trials, passed, sections })
}
