//! Markov trace weights on up–down tableaux, the generating function Q̃(t, λ) and
//! the semisimplicity criterion.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{Field, RatFunc};
use crate::error::{Error, Result};
use crate::ground::GroundParams;
use crate::report::Check;
use crate::tableaux::{BranchingGraph, IncidentNode, Multipartition, Node, NodeKind};

/// `A(x) = ρ⁻¹p/(q − q⁻¹) + x/(x² − 1)` (odd r) or `ρ⁻¹p/(q − q⁻¹) − x²/(x² − 1)` (even r).
pub fn a_at<F: Field>(p: &GroundParams<F>, x: &F) -> Result<F> {
    let c = p.p().div(p.rho())?.div(&p.q_minus_qinv())?;
    let x2m1 = x.mul(x).sub(&F::one());
    let tail = if p.r() % 2 == 1 {
        x.div(&x2m1)?
    } else {
        x.mul(x).div(&x2m1)?.neg()
    };
    Ok(c.add(&tail))
}

/// `A(b)(b − b⁻¹)`, written without the removable singularity at b = ±1.
pub fn a_times_b_minus_binv<F: Field>(p: &GroundParams<F>, b: &F) -> Result<F> {
    let c = p.p().div(p.rho())?.div(&p.q_minus_qinv())?;
    let binv = b.inv()?;
    let d = b.sub(&binv);
    // x/(x²−1)·(x − x⁻¹) = 1 and x²/(x²−1)·(x − x⁻¹) = x.
    let tail = if p.r() % 2 == 1 { F::one() } else { b.neg() };
    Ok(c.mul(&d).add(&tail))
}

fn b_values<F: Field>(p: &GroundParams<F>, mu: &Multipartition) -> Result<Vec<(IncidentNode, F)>> {
    mu.incident_nodes()
        .into_iter()
        .map(|n| Ok((n, n.b_in(p.q(), p.u())?)))
        .collect()
}

/// `Q̃(x, λ) = p·A(x)·∏_α (x − b(α,λ)⁻¹)/(x − b(α,λ))` over all incident α.
pub fn qtilde_at<F: Field>(lambda: &Multipartition, p: &GroundParams<F>, x: &F) -> Result<F> {
    check_rank(lambda, p)?;
    let mut v = p.p().mul(&a_at(p, x)?);
    for (_, b) in b_values(p, lambda)? {
        v = v.mul(&x.sub(&b.inv()?).div(&x.sub(&b))?);
    }
    Ok(v)
}

/// Q̃(t, λ) as a rational function of t.
pub fn qtilde(lambda: &Multipartition, p: &GroundParams<RatFunc>) -> Result<RatFunc> {
    qtilde_at(lambda, p, &RatFunc::t())
}

/// `Z̃ = Q̃ + ρ⁻¹/(q⁻¹ − q) + x²/(x² − 1)`.
pub fn ztilde_at<F: Field>(lambda: &Multipartition, p: &GroundParams<F>, x: &F) -> Result<F> {
    let c = p.rho().mul(&p.q().inv()?.sub(p.q())).inv()?;
    let x2 = x.mul(x);
    Ok(qtilde_at(lambda, p, x)?.add(&c).add(&x2.div(&x2.sub(&F::one()))?))
}

/// The factor by which Q̃ changes when a node with content `c` is added:
/// `(x−c)²(x−q⁻²c⁻¹)(x−q²c⁻¹) / ((x−c⁻¹)²(x−q⁻²c)(x−q²c))`.
pub fn qtilde_ratio<F: Field>(q: &F, c: &F, x: &F) -> Result<F> {
    let q2 = q.mul(q);
    let qm2 = q2.inv()?;
    let ci = c.inv()?;
    let a = x.sub(c);
    let b = x.sub(&ci);
    let num = a.mul(&a).mul(&x.sub(&qm2.mul(&ci))).mul(&x.sub(&q2.mul(&ci)));
    let den = b.mul(&b).mul(&x.sub(&qm2.mul(c))).mul(&x.sub(&q2.mul(c)));
    num.div(&den)
}

/// `Q̃(x, λ) − Q̃(x, μ)·ratio(c̃(α))` where λ is μ with the addable node α added.
pub fn qtilde_recursion_residual<F: Field>(mu: &Multipartition, alpha: &Node, p: &GroundParams<F>, x: &F) -> Result<F> {
    if mu.kind_of(alpha) != Some(NodeKind::Addable) {
        return Err(Error::NodeNotIncident(format!("{alpha} is not addable for {mu}")));
    }
    let lambda = mu.apply(&IncidentNode { node: *alpha, kind: NodeKind::Addable })?;
    let c = alpha.content_in(p.q(), p.u())?;
    let lhs = qtilde_at(&lambda, p, x)?;
    let rhs = qtilde_at(mu, p, x)?.mul(&qtilde_ratio(p.q(), &c, x)?);
    Ok(lhs.sub(&rhs))
}

pub fn qtilde_recursion_check(mu: &Multipartition, alpha: &Node, p: &GroundParams<RatFunc>) -> Result<RatFunc> {
    qtilde_recursion_residual(mu, alpha, p, &RatFunc::t())
}

fn check_rank<F: Field>(lambda: &Multipartition, p: &GroundParams<F>) -> Result<()> {
    if lambda.r() != p.r() {
        return Err(Error::SizeMismatch(format!(
            "multipartition has {} components, parameters have r = {}",
            lambda.r(),
            p.r()
        )));
    }
    Ok(())
}

/// The weight of S = U extended by the node β incident to μ = shape(U):
///
/// `δ₀⁻¹ · p · b⁻¹ · A(b)(b − b⁻¹) · ∏_{α≠β} (b − b(α,μ)⁻¹)/(b − b(α,μ)) · w_prev`
///
/// with `b = b(β, μ)` and `p = ∏ u_j`. At canonical ρ this is
/// `δ₀⁻¹ρ b⁻¹((b − b⁻¹)/(q − q⁻¹) + 1)·∏·w_prev` for odd r and
/// `δ₀⁻¹ρ q b⁻¹((q⁻¹b − qb⁻¹)/(q − q⁻¹))·∏·w_prev` for even r.
pub fn weight_step<F: Field>(mu: &Multipartition, beta: &IncidentNode, w_prev: &F, p: &GroundParams<F>) -> Result<F> {
    check_rank(mu, p)?;
    let bs = b_values(p, mu)?;
    let b = bs
        .iter()
        .find(|(n, _)| n == beta)
        .map(|(_, b)| b.clone())
        .ok_or_else(|| Error::NodeNotIncident(format!("{} for {mu}", beta.node)))?;
    step_with(p, &bs, beta, &b, w_prev)
}

fn step_with<F: Field>(p: &GroundParams<F>, bs: &[(IncidentNode, F)], beta: &IncidentNode, b: &F, w_prev: &F) -> Result<F> {
    let mut v = p.p().div(&p.delta(0)?)?.div(b)?.mul(&a_times_b_minus_binv(p, b)?);
    for (n, ba) in bs {
        if n != beta {
            v = v.mul(&b.sub(&ba.inv()?).div(&b.sub(ba))?);
        }
    }
    Ok(v.mul(w_prev))
}

/// Weights `w_k(λ)` for every level k ≤ n.
#[derive(Clone, Debug)]
pub struct WeightTable<F> {
    pub graph: BranchingGraph,
    pub weights: Vec<Vec<F>>,
}

impl<F: Field> WeightTable<F> {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn level(&self, k: usize) -> impl Iterator<Item = (&Multipartition, &F)> {
        self.graph.levels[k].iter().zip(&self.weights[k])
    }

    pub fn get(&self, k: usize, lambda: &Multipartition) -> Option<&F> {
        self.graph.index_of(k, lambda).map(|i| &self.weights[k][i])
    }

    pub fn entries(&self) -> BTreeMap<Multipartition, F> {
        self.level(self.n()).map(|(l, w)| (l.clone(), w.clone())).collect()
    }

    /// `Σ_{λ∈Γ_k} |T(k,λ)| w_k(λ) − 1` for every k.
    pub fn normalization_residuals(&self) -> Vec<F> {
        let counts = self.graph.counts();
        (0..=self.n())
            .map(|k| {
                let mut s = F::zero();
                for (c, w) in counts[k].iter().zip(&self.weights[k]) {
                    s = s.add(&F::from_bigint(&(*c).into()).mul(w));
                }
                s.sub(&F::one())
            })
            .collect()
    }

    /// For every μ ∈ Γ_k (k < n): `Σ_β w_{k+1}(μ ± β) − w_k(μ)`.
    pub fn telescoping_residuals(&self) -> Vec<(usize, Multipartition, F)> {
        let mut out = Vec::new();
        for k in 0..self.n() {
            for (mu, w) in self.level(k) {
                let mut s = F::zero();
                for node in mu.incident_nodes() {
                    let lam = mu.apply(&node).expect("incident node applies");
                    s = s.add(self.get(k + 1, &lam).expect("child lies in the next level"));
                }
                out.push((k, mu.clone(), s.sub(w)));
            }
        }
        out
    }
}

/// Builds the weight table level by level. Every incoming edge of λ must give the
/// same weight; otherwise the result is `ShapeInconsistency`.
pub fn weight_table<F: Field>(n: usize, p: &GroundParams<F>) -> Result<WeightTable<F>> {
    p.require_canonical_rho()?;
    let graph = BranchingGraph::build(n, p.r());
    let mut weights: Vec<Vec<F>> = vec![vec![F::one()]];
    let mut bcache: Vec<Vec<(IncidentNode, F)>> = vec![b_values(p, &graph.levels[0][0])?];
    for k in 1..=n {
        let prev = &weights[k - 1];
        let level: Vec<F> = graph.levels[k]
            .par_iter()
            .zip(graph.incoming[k].par_iter())
            .map(|(lam, edges)| {
                let mut first: Option<F> = None;
                for e in edges {
                    let bs = &bcache[e.from];
                    let b = &bs.iter().find(|(m, _)| *m == e.node).expect("edge node is incident").1;
                    let w = step_with(p, bs, &e.node, b, &prev[e.from])?;
                    match &first {
                        None => first = Some(w),
                        Some(f) if f.equals(&w) => {}
                        Some(_) => {
                            return Err(Error::ShapeInconsistency {
                                n: k,
                                shape: lam.to_string(),
                            })
                        }
                    }
                }
                first.ok_or_else(|| Error::Inconsistent(format!("{lam} has no incoming edge")))
            })
            .collect::<Result<_>>()?;
        weights.push(level);
        if k < n {
            bcache = graph.levels[k].iter().map(|l| b_values(p, l)).collect::<Result<_>>()?;
        }
    }
    Ok(WeightTable { graph, weights })
}

/// Checks of the weight table that hold for any admissible parameters.
pub fn check_weight_table<F: Field>(t: &WeightTable<F>, p: &GroundParams<F>) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let g = p.gammas()?;
    let d0 = p.delta(0)?;
    if t.n() >= 1 {
        for (j, gj) in g.gamma.iter().enumerate() {
            let mut comps = vec![crate::tableaux::Partition::empty(); p.r()];
            comps[j] = crate::tableaux::Partition::new(vec![1])?;
            let w = t.get(1, &Multipartition::new(comps)).expect("single box is in level 1");
            out.push(Check::from_residual("weight_base", Some(j as i64 + 1), &w.sub(&gj.div(&d0)?)));
        }
    }
    for (k, r) in t.normalization_residuals().iter().enumerate() {
        out.push(Check::from_residual("weight_normalization", Some(k as i64), r));
    }
    for (k, mu, r) in t.telescoping_residuals() {
        let mut c = Check::from_residual("weight_telescoping", Some(k as i64), &r);
        if !c.passed {
            c.residual = format!("{mu}: {}", c.residual);
        }
        out.push(c);
    }
    for k in 0..=t.n() {
        let zeros: Vec<String> = t.level(k).filter(|(_, w)| w.is_zero()).map(|(l, _)| l.to_string()).collect();
        out.push(Check::boolean("weight_nonzero", Some(k as i64), zeros.is_empty(), zeros.join(" ")));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemisimpleReport {
    pub semisimple: bool,
    pub violations: Vec<String>,
}

fn signed(e: i64) -> String {
    if e >= 0 {
        format!("+{e}")
    } else {
        e.to_string()
    }
}

/// The sufficient condition for split semisimplicity of the level-n algebra:
/// `u_j ≠ ±q^m` for odd `|m| ≤ 2n + 1`, and `u_j/u_{j'} ≠ q^{2k}` (j ≠ j'),
/// `u_j u_{j'} ≠ q^{2k}` for `|k| ≤ n`.
pub fn semisimple_sufficient<F: Field>(q: &F, u: &[F], n: usize) -> Result<SemisimpleReport> {
    let n = n as i64;
    let mut violations = Vec::new();
    for (j, uj) in u.iter().enumerate() {
        for m in (-(2 * n + 1)..=2 * n + 1).filter(|m| m % 2 != 0) {
            let qm = q.pow(m)?;
            if uj.equals(&qm) {
                violations.push(format!("u{} = +q^{{{}}}", j + 1, signed(m)));
            }
            if uj.equals(&qm.neg()) {
                violations.push(format!("u{} = -q^{{{}}}", j + 1, signed(m)));
            }
        }
    }
    for (i, ui) in u.iter().enumerate() {
        for (j, uj) in u.iter().enumerate() {
            for k in -n..=n {
                let q2k = q.pow(2 * k)?;
                if i != j && ui.div(uj)?.equals(&q2k) {
                    violations.push(format!("u{}/u{} = q^{{{}}}", i + 1, j + 1, signed(2 * k)));
                }
                if i <= j && ui.mul(uj).equals(&q2k) {
                    violations.push(format!("u{}*u{} = q^{{{}}}", i + 1, j + 1, signed(2 * k)));
                }
            }
        }
    }
    Ok(SemisimpleReport {
        semisimple: violations.is_empty(),
        violations,
    })
}
