//! Weak admissibility and the Wilcox–Yu relations.

use serde::Serialize;

use super::{delta_forward_recursion, GroundParams};
use crate::arith::{Field, Matrix};
use crate::error::Result;
use crate::report::{all_passed, Check};

#[derive(Clone, Debug)]
pub struct AdmissibilityOptions {
    /// Inclusive window of `a` for the weak admissibility relation.
    pub weak_window: (i64, i64),
    /// The forward recursion is tested for `r ≤ a ≤ recursion_max`.
    pub recursion_max: i64,
}

impl AdmissibilityOptions {
    pub fn for_rank(r: usize) -> Self {
        let r = r as i64;
        Self {
            weak_window: (-r, r),
            recursion_max: 2 * r + 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AdmissibilityReport {
    pub weakly_admissible: bool,
    pub wilcox_yu_linear: Vec<Check>,
    pub wilcox_yu_rho: Check,
    pub forward_recursion: Vec<Check>,
    pub ground_relation: Check,
    pub weak: Vec<Check>,
    pub u_admissible: bool,
    /// Every failing check.
    pub witnesses: Vec<Check>,
}

impl AdmissibilityReport {
    pub fn all_checks(&self) -> Vec<Check> {
        let mut v = vec![self.ground_relation.clone()];
        v.extend(self.weak.iter().cloned());
        v.extend(self.wilcox_yu_linear.iter().cloned());
        v.push(self.wilcox_yu_rho.clone());
        v.extend(self.forward_recursion.iter().cloned());
        v
    }

    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }
}

fn clamp_sum<F: Field>(a: &[F], lo: i64, hi: i64, ell: i64) -> F {
    let mut s = F::zero();
    for j in lo..=hi {
        s = s.add(&a[(2 * j - ell) as usize]);
    }
    s
}

fn ceil_div2(x: i64) -> i64 {
    (x + 1).div_euclid(2)
}

/// Left side of the linear Wilcox–Yu relation for `1 ≤ ℓ ≤ r − 1`:
///
/// ```text
/// ρ(a_ℓ − a_{r−ℓ}/a_0) + (q − q⁻¹)[ Σ_{j=1}^{r−ℓ} a_{j+ℓ}δ_j
///     − Σ_{j=max(ℓ+1,⌈r/2⌉)}^{⌊(ℓ+r)/2⌋} a_{2j−ℓ} + Σ_{j=⌈ℓ/2⌉}^{min(ℓ,⌈r/2⌉−1)} a_{2j−ℓ} ]
/// ```
pub fn wilcox_yu_linear_residual<F: Field>(p: &GroundParams<F>, ell: usize) -> Result<F> {
    let (constant, coeffs) = linear_parts(p.rho(), p.q(), &p.a(), ell)?;
    let mut s = constant;
    for (j, c) in coeffs.iter().enumerate() {
        s = s.add(&c.mul(&p.delta(j as i64 + 1)?));
    }
    Ok(s)
}

/// Splits the ℓ-th relation into a δ-free part and the coefficients of δ_1..δ_{r−ℓ}.
fn linear_parts<F: Field>(rho: &F, q: &F, a: &[F], ell: usize) -> Result<(F, Vec<F>)> {
    let r = a.len() as i64 - 1;
    let l = ell as i64;
    let qq = q.sub(&q.inv()?);
    let head = rho.mul(&a[ell].sub(&a[(r - l) as usize].div(&a[0])?));
    let s2 = clamp_sum(a, (l + 1).max(ceil_div2(r)), (l + r).div_euclid(2), l);
    let s3 = clamp_sum(a, ceil_div2(l), l.min(ceil_div2(r) - 1), l);
    let constant = head.add(&qq.mul(&s3.sub(&s2)));
    let coeffs = (1..=(r - l)).map(|j| qq.mul(&a[(j + l) as usize])).collect();
    Ok((constant, coeffs))
}

/// `ρ⁻¹a_0 − ρa_0⁻¹ − [r even](q − q⁻¹)`.
pub fn wilcox_yu_rho_residual<F: Field>(p: &GroundParams<F>) -> Result<F> {
    let a0 = p.a()[0].clone();
    let rho = p.rho();
    let mut v = a0.div(rho)?.sub(&rho.div(&a0)?);
    if p.r().is_multiple_of(2) {
        v = v.sub(&p.q_minus_qinv());
    }
    Ok(v)
}

/// `ρ⁻¹ − ρ − (q⁻¹ − q)(δ_0 − 1)`.
pub fn check_ground_relation<F: Field>(p: &GroundParams<F>) -> Result<Check> {
    let rho = p.rho();
    let lhs = rho.inv()?.sub(rho);
    let rhs = p.q().inv()?.sub(p.q()).mul(&p.delta(0)?.sub(&F::one()));
    Ok(Check::from_residual("ground_relation", None, &lhs.sub(&rhs)))
}

/// `Σ_{k=0}^r a_k δ_{k+a} = 0` for every `a` in the window.
pub fn check_weak_admissibility<F: Field>(p: &GroundParams<F>, window: (i64, i64)) -> Result<Vec<Check>> {
    let a = p.a();
    let mut out = Vec::new();
    for shift in window.0..=window.1 {
        let mut s = F::zero();
        for (k, ak) in a.iter().enumerate() {
            s = s.add(&ak.mul(&p.delta(k as i64 + shift)?));
        }
        out.push(Check::from_residual("weak_admissibility", Some(shift), &s));
    }
    Ok(out)
}

pub fn check_wilcox_yu<F: Field>(p: &GroundParams<F>, opts: &AdmissibilityOptions) -> Result<AdmissibilityReport> {
    let r = p.r();
    let ground_relation = check_ground_relation(p)?;
    let weak = check_weak_admissibility(p, opts.weak_window)?;
    let wilcox_yu_linear = (1..r)
        .map(|l| {
            wilcox_yu_linear_residual(p, l)
                .map(|x| Check::from_residual("wilcox_yu_linear", Some(l as i64), &x))
        })
        .collect::<Result<Vec<_>>>()?;
    let wilcox_yu_rho = Check::from_residual("wilcox_yu_rho", None, &wilcox_yu_rho_residual(p)?);
    let forward_recursion = (r as i64..=opts.recursion_max)
        .map(|a| {
            let v = delta_forward_recursion(p, a)?.sub(&p.delta(a)?);
            Ok(Check::from_residual("forward_recursion", Some(a), &v))
        })
        .collect::<Result<Vec<_>>>()?;
    let weakly_admissible = all_passed(&weak);
    let mut report = AdmissibilityReport {
        weakly_admissible,
        wilcox_yu_linear,
        wilcox_yu_rho,
        forward_recursion,
        ground_relation,
        weak,
        u_admissible: false,
        witnesses: Vec::new(),
    };
    report.witnesses = report.all_checks().into_iter().filter(|c| !c.passed).collect();
    report.u_admissible = report.witnesses.is_empty() && p.check_nondegenerate().is_ok();
    Ok(report)
}

/// Coefficient matrix of the linear Wilcox–Yu relations in δ_1..δ_{r−1}, divided by
/// `q − q⁻¹`, with rows ordered ℓ = r−1, …, 1. Row k has entries `a_{r−k+1}, …, a_r`
/// followed by zeros, so the matrix is lower unitriangular.
pub fn triangular_system<F: Field>(a: &[F]) -> Matrix<F> {
    let r = a.len() - 1;
    let n = r.saturating_sub(1);
    Matrix::from_fn(n, n, |row, col| {
        let ell = r - 1 - row;
        let j = col + 1;
        if j <= r - ell {
            a[j + ell].clone()
        } else {
            F::zero()
        }
    })
}

/// Solves the linear Wilcox–Yu relations for δ_1..δ_{r−1} by forward substitution.
pub fn solve_deltas_from_admissibility<F: Field>(rho: &F, q: &F, a: &[F]) -> Result<Vec<F>> {
    let r = a.len() - 1;
    if r <= 1 {
        return Ok(Vec::new());
    }
    let m = triangular_system(a);
    let qq = q.sub(&q.inv()?);
    let rhs = (0..r - 1)
        .map(|row| Ok(linear_parts(rho, q, a, r - 1 - row)?.0.div(&qq)?.neg()))
        .collect::<Result<Vec<F>>>()?;
    let mut x: Vec<F> = Vec::with_capacity(r - 1);
    for row in 0..r - 1 {
        let mut s = rhs[row].clone();
        for (col, xc) in x.iter().enumerate() {
            s = s.sub(&m.get(row, col).mul(xc));
        }
        // Diagonal entry is a_r = 1.
        x.push(s);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::super::RhoChoice;
    use super::*;
    use crate::arith::RatFunc;

    #[test]
    fn triangular_shape() {
        for r in 1..=5 {
            let p = GroundParams::symbolic(r, RhoChoice::Canonical).unwrap();
            let m = triangular_system(&p.a());
            for i in 0..m.rows() {
                assert!(m.get(i, i).is_one());
                for j in i + 1..m.cols() {
                    assert!(m.get(i, j).is_zero());
                }
            }
        }
    }

    #[test]
    fn r1_has_no_linear_relations() {
        let p = GroundParams::symbolic(1, RhoChoice::Canonical).unwrap();
        let rep = check_wilcox_yu(&p, &AdmissibilityOptions::for_rank(1)).unwrap();
        assert!(rep.wilcox_yu_linear.is_empty());
        assert!(rep.passed());
        assert!(solve_deltas_from_admissibility(p.rho(), p.q(), &p.a()).unwrap().is_empty());
    }

    #[test]
    fn doubled_rho_breaks_rho_relation() {
        let base = GroundParams::symbolic(1, RhoChoice::Canonical).unwrap();
        let rho2 = base.rho().mul(&RatFunc::from_int(2));
        let p = GroundParams::new(base.q().clone(), base.u().to_vec(), RhoChoice::Explicit(rho2)).unwrap();
        assert!(!p.is_rho_canonical());
        assert!(!wilcox_yu_rho_residual(&p).unwrap().is_zero());
    }
}
