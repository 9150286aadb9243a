use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use cybmw::arith::{BigRational, Field, RatFunc, Sample};
use cybmw::brauer::{enumerate_diagrams, gram_matrix, DiagramJson, Thetas, ZrBrauerDiagram};
use cybmw::ground::GroundParams;
use cybmw::io::{Mode, ParamFile, ParamSpec};
use cybmw::report::{all_passed, Check};
use cybmw::tableaux::{brauer_dimension, count_tableaux, enumerate_tableaux, BranchingGraph, Multipartition};
use cybmw::verify::{ground_checks, verify_all, w2_checks, SuiteConfig};
use cybmw::weights::weight_table;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "cybmw", version, about = "Cyclotomic BMW algebra computations and checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Ground-ring parameters.
    #[command(subcommand)]
    Params(ParamsCmd),
    /// Up–down tableaux.
    #[command(subcommand)]
    Tableaux(TableauxCmd),
    /// Markov trace weights.
    #[command(subcommand)]
    Weights(WeightsCmd),
    /// The two-strand module.
    #[command(subcommand)]
    W2(W2Cmd),
    /// ℤ_r-Brauer diagrams.
    #[command(subcommand)]
    Brauer(BrauerCmd),
    /// The full suite.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
    Pretty,
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Rank r; defaults to the parameter file's r.
    #[arg(long)]
    r: Option<usize>,
    /// Parameter file (JSON).
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct RandomArgs {
    /// Evaluate at seeded random rational points instead of symbolically.
    #[arg(long)]
    randomized: bool,
    #[arg(long, default_value_t = 5)]
    trials: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum ParamsCmd {
    /// Check the admissibility relations.
    Check {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        random: RandomArgs,
    },
    /// List δ_a for a range of a.
    Deltas {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = -3, allow_negative_numbers = true)]
        from: i64,
        #[arg(long, default_value_t = 5, allow_negative_numbers = true)]
        to: i64,
    },
}

#[derive(Subcommand)]
enum TableauxCmd {
    Count {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        /// Restrict to one shape, e.g. '[[2],[]]' (or '[2]' for r = 1).
        #[arg(long)]
        shape: Option<String>,
    },
    List {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        shape: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum WeightsCmd {
    Table {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Evaluate at one seeded random rational point.
        #[arg(long)]
        randomized: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum W2Cmd {
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        random: RandomArgs,
    },
}

#[derive(Subcommand)]
enum BrauerCmd {
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: u32,
    },
    /// Multiply two diagrams (files or inline JSON); the product is a · b.
    Mul {
        a: String,
        b: String,
        /// Loop parameters ϑ_0..ϑ_{⌊r/2⌋} as a JSON list of rationals.
        #[arg(long)]
        theta: Option<PathBuf>,
    },
    /// Gram matrix of the trace form and its determinant.
    Gram {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        theta: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    All {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        random: RandomArgs,
        /// Random products per Brauer property.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

/// Result of a command: the report and whether every check passed.
struct Outcome {
    out: String,
    ok: bool,
}

impl Outcome {
    fn json(v: Value, ok: bool) -> Result<Self> {
        Ok(Self { out: serde_json::to_string_pretty(&v)? + "\n", ok })
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_spec(a: &ParamArgs, randomized: bool) -> Result<ParamSpec> {
    let mut file = match &a.spec {
        Some(p) => ParamFile::from_json(&read(p)?)?,
        None => ParamFile {
            r: a.r.ok_or_else(|| anyhow!("either --r or --spec is required"))?,
            ..Default::default()
        },
    };
    if let (Some(r), Some(_)) = (a.r, &a.spec) {
        if r != file.r {
            bail!("--r {r} disagrees with r = {} in the parameter file", file.r);
        }
    }
    if randomized {
        file.mode = Mode::Randomized;
    }
    Ok(file.parse()?)
}

fn checks_json(c: &[Check]) -> Value {
    serde_json::to_value(c).expect("checks serialize")
}

fn params_check(a: &ParamArgs, rnd: &RandomArgs) -> Result<Outcome> {
    let spec = load_spec(a, rnd.randomized)?;
    let mut report = Map::new();
    report.insert("r".into(), json!(spec.r));
    let ok = match spec.mode {
        Mode::Symbolic => {
            let p = spec.symbolic()?;
            let checks = ground_checks(&p)?;
            report.insert("mode".into(), json!("symbolic"));
            report.insert("rho_canonical".into(), json!(p.is_rho_canonical()));
            finish_checks(&mut report, &checks)
        }
        Mode::Randomized => {
            let mut rng = ChaCha8Rng::seed_from_u64(rnd.seed);
            let mut all = Vec::new();
            for _ in 0..rnd.trials.max(1) {
                let (_, p) = spec.random_point::<BigRational, _>(&mut rng)?;
                all.extend(ground_checks(&p)?);
            }
            report.insert("mode".into(), json!("randomized"));
            report.insert("seed".into(), json!(rnd.seed));
            report.insert("trials".into(), json!(rnd.trials.max(1)));
            finish_checks(&mut report, &all)
        }
    };
    Outcome::json(Value::Object(report), ok)
}

fn finish_checks(report: &mut Map<String, Value>, checks: &[Check]) -> bool {
    let ok = all_passed(checks);
    let failures: Vec<&Check> = checks.iter().filter(|c| !c.passed).collect();
    report.insert("passed".into(), json!(ok));
    report.insert("failures".into(), serde_json::to_value(&failures).expect("checks serialize"));
    report.insert("checks".into(), checks_json(checks));
    ok
}

fn params_deltas(a: &ParamArgs, from: i64, to: i64) -> Result<Outcome> {
    let p = load_spec(a, false)?.symbolic()?;
    let mut list = Vec::new();
    for k in from..=to {
        let (v, src) = p.delta_with_source(k)?;
        list.push(json!({"a": k, "value": v.to_string(), "source": src}));
    }
    Outcome::json(json!({"r": p.r(), "deltas": list}), true)
}

fn parse_shape(s: &str, r: usize) -> Result<Multipartition> {
    let v: Value = serde_json::from_str(s).context("shape must be JSON")?;
    let rows: Vec<Vec<u32>> = if r == 1 && v.as_array().is_some_and(|a| a.iter().all(Value::is_u64)) {
        vec![serde_json::from_value(v)?]
    } else {
        serde_json::from_value(v)?
    };
    if rows.len() != r {
        bail!("shape has {} components, expected {r}", rows.len());
    }
    Ok(Multipartition::from_rows(rows)?)
}

fn shape_key(l: &Multipartition) -> String {
    if l.r() == 1 {
        l.components()[0].to_string()
    } else {
        l.to_string()
    }
}

fn tableaux_count(r: usize, n: usize, shape: Option<&str>) -> Result<Outcome> {
    if r == 0 {
        bail!("r must be positive");
    }
    if let Some(s) = shape {
        let l = parse_shape(s, r)?;
        let c = count_tableaux(n, r, Some(&l))?;
        return Outcome::json(json!({"r": r, "n": n, "shape": shape_key(&l), "count": json_count(c)}), true);
    }
    let g = BranchingGraph::build(n, r);
    let counts = g.counts();
    let mut by = Map::new();
    let mut total: u128 = 0;
    for (l, c) in g.levels[n].iter().zip(&counts[n]) {
        by.insert(shape_key(l), json_count(*c));
        total += c;
    }
    Outcome::json(json!({"total": json_count(total), "by_shape": by}), true)
}

/// Counts fit in a JSON number up to 2^53; larger ones are written as strings.
fn json_count(c: u128) -> Value {
    if c < (1u128 << 53) {
        json!(c as u64)
    } else {
        json!(c.to_string())
    }
}

fn tableaux_list(r: usize, n: usize, shape: Option<&str>, format: Format) -> Result<Outcome> {
    if r == 0 {
        bail!("r must be positive");
    }
    let l = shape.map(|s| parse_shape(s, r)).transpose()?;
    let ts = enumerate_tableaux(n, r, l.as_ref())?;
    let out = match format {
        Format::Json => {
            let list: Vec<Value> = ts
                .iter()
                .map(|t| {
                    let shapes: Vec<String> = t.shapes().iter().map(shape_key).collect();
                    let eig: Vec<String> = t.eigenvalue_sequence().iter().map(RatFunc::to_string).collect();
                    json!({"shapes": shapes, "eigenvalues": eig})
                })
                .collect();
            serde_json::to_string_pretty(&json!({"r": r, "n": n, "count": ts.len(), "tableaux": list}))? + "\n"
        }
        Format::Tsv => {
            let mut s = String::from("index\tshapes\n");
            for (i, t) in ts.iter().enumerate() {
                let shapes: Vec<String> = t.shapes().iter().map(shape_key).collect();
                s.push_str(&format!("{}\t{}\n", i + 1, shapes.join(" ")));
            }
            s
        }
        Format::Pretty => {
            let mut s = String::new();
            for (i, t) in ts.iter().enumerate() {
                s.push_str(&format!("tableau {}\n", i + 1));
                for (k, sh) in t.shapes().iter().enumerate() {
                    s.push_str(&format!("step {k}\n{}", sh.pretty()));
                }
                s.push('\n');
            }
            s
        }
    };
    Ok(Outcome { out, ok: true })
}

fn weights_table(a: &ParamArgs, n: usize, format: Format, randomized: bool, seed: u64) -> Result<Outcome> {
    let spec = load_spec(a, randomized)?;
    if randomized {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (s, p) = spec.random_point::<BigRational, _>(&mut rng)?;
        let point: Map<String, Value> = s.values().iter().map(|(v, x)| (v.name(), json!(x.to_string()))).collect();
        render_weights(&p, n, format, Some(Value::Object(point)))
    } else {
        render_weights(&spec.symbolic()?, n, format, None)
    }
}

fn render_weights<F: Field>(p: &GroundParams<F>, n: usize, format: Format, point: Option<Value>) -> Result<Outcome> {
    let t = weight_table(n, p)?;
    let counts = t.graph.counts();
    let rows: Vec<(String, String, String)> = t
        .level(n)
        .zip(&counts[n])
        .map(|((l, w), c)| (shape_key(l), c.to_string(), w.to_string()))
        .collect();
    let out = match format {
        Format::Tsv => {
            let mut s = String::from("shape\ttableaux\tweight\n");
            for (l, c, w) in &rows {
                s.push_str(&format!("{l}\t{c}\t{w}\n"));
            }
            s
        }
        _ => {
            let weights: Map<String, Value> = rows.iter().map(|(l, _, w)| (l.clone(), json!(w))).collect();
            let mut v = json!({"r": p.r(), "n": n, "weights": weights});
            if let Some(pt) = point {
                v["point"] = pt;
            }
            serde_json::to_string_pretty(&v)? + "\n"
        }
    };
    Ok(Outcome { out, ok: true })
}

fn w2_verify(a: &ParamArgs, rnd: &RandomArgs) -> Result<Outcome> {
    let spec = load_spec(a, rnd.randomized)?;
    let mut report = Map::new();
    report.insert("r".into(), json!(spec.r));
    let ok = match spec.mode {
        Mode::Symbolic => {
            report.insert("mode".into(), json!("symbolic"));
            finish_checks(&mut report, &w2_checks(&spec.symbolic()?)?)
        }
        Mode::Randomized => {
            let mut rng = ChaCha8Rng::seed_from_u64(rnd.seed);
            let mut all = Vec::new();
            for _ in 0..rnd.trials.max(1) {
                let (_, p) = spec.random_point::<BigRational, _>(&mut rng)?;
                all.extend(w2_checks(&p)?);
            }
            report.insert("mode".into(), json!("randomized"));
            report.insert("seed".into(), json!(rnd.seed));
            report.insert("trials".into(), json!(rnd.trials.max(1)));
            finish_checks(&mut report, &all)
        }
    };
    Outcome::json(Value::Object(report), ok)
}

fn load_diagram(s: &str) -> Result<ZrBrauerDiagram> {
    let text = if s.trim_start().starts_with('{') { s.to_string() } else { read(Path::new(s))? };
    let j: DiagramJson = serde_json::from_str(&text).context("diagram JSON")?;
    Ok(ZrBrauerDiagram::from_json(&j)?)
}

fn load_thetas(path: Option<&Path>, r: u32, seed: u64) -> Result<Thetas<BigRational>> {
    match path {
        Some(p) => {
            let v: Vec<String> = serde_json::from_str(&read(p)?).context("theta file must be a JSON list of strings")?;
            let vals = v
                .iter()
                .map(|s| {
                    s.parse::<RatFunc>()?
                        .as_rational()
                        .ok_or_else(|| anyhow!("theta values must be rational numbers, got {s:?}"))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Thetas::new(r, vals)?)
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let vals = (0..ZrBrauerDiagram::num_thetas(r)).map(|_| BigRational::sample(&mut rng)).collect();
            Ok(Thetas::new(r, vals)?)
        }
    }
}

fn brauer_mul(a: &str, b: &str, theta: Option<&Path>) -> Result<Outcome> {
    let a = load_diagram(a)?;
    let b = load_diagram(b)?;
    let (loops, c) = ZrBrauerDiagram::compose(&a, &b)?;
    let lp: Map<String, Value> = loops
        .iter()
        .enumerate()
        .filter(|(_, &m)| m > 0)
        .map(|(j, &m)| (j.to_string(), json!(m)))
        .collect();
    let mut v = json!({"loops": lp, "diagram": serde_json::to_value(c.to_json())?});
    if let Some(p) = theta {
        let t = load_thetas(Some(p), a.r(), 0)?;
        v["scalar"] = json!(t.monomial(&loops).to_string());
    }
    Outcome::json(v, true)
}

fn brauer_gram(n: usize, r: u32, theta: Option<&Path>, seed: u64) -> Result<Outcome> {
    let t = load_thetas(theta, r, seed)?;
    let (m, det) = gram_matrix(n, r, &t)?;
    let thetas: Vec<String> = t.values().iter().map(|x| x.to_string()).collect();
    let ok = !det.is_zero();
    let v = json!({
        "n": n, "r": r, "size": m.rows(), "thetas": thetas,
        "determinant": det.to_string(), "nondegenerate": ok,
    });
    Outcome::json(v, ok)
}

fn verify_cmd(a: &ParamArgs, n: usize, rnd: &RandomArgs, samples: usize) -> Result<Outcome> {
    let spec = load_spec(a, rnd.randomized)?;
    let mut cfg = SuiteConfig::new(spec, n);
    cfg.trials = rnd.trials.max(1);
    cfg.seed = rnd.seed;
    cfg.brauer_samples = samples;
    let rep = verify_all(&cfg)?;
    let ok = rep.passed;
    Outcome::json(serde_json::to_value(&rep)?, ok)
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.cmd {
        Cmd::Params(ParamsCmd::Check { params, random }) => params_check(&params, &random),
        Cmd::Params(ParamsCmd::Deltas { params, from, to }) => params_deltas(&params, from, to),
        Cmd::Tableaux(TableauxCmd::Count { r, n, shape }) => tableaux_count(r, n, shape.as_deref()),
        Cmd::Tableaux(TableauxCmd::List { r, n, shape, format }) => tableaux_list(r, n, shape.as_deref(), format),
        Cmd::Weights(WeightsCmd::Table { params, n, format, randomized, seed }) => {
            weights_table(&params, n, format, randomized, seed)
        }
        Cmd::W2(W2Cmd::Verify { params, random }) => w2_verify(&params, &random),
        Cmd::Brauer(BrauerCmd::Count { n, r }) => {
            if r == 0 {
                bail!("r must be positive");
            }
            let count = enumerate_diagrams(n, r).len() as u128;
            let formula = brauer_dimension(n, r as usize);
            Outcome::json(json!({"n": n, "r": r, "count": json_count(count), "formula": json_count(formula)}), count == formula)
        }
        Cmd::Brauer(BrauerCmd::Mul { a, b, theta }) => brauer_mul(&a, &b, theta.as_deref()),
        Cmd::Brauer(BrauerCmd::Gram { n, r, theta, seed }) => brauer_gram(n, r, theta.as_deref(), seed),
        Cmd::Verify(VerifyCmd::All { params, n, random, samples }) => verify_cmd(&params, n, &random, samples),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = std::env::var("CYBMW_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // Only fails if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global();
    }
    match run(cli) {
        Ok(o) => {
            print!("{}", o.out);
            if o.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
