//! Parameter systems (r, ρ, q, u₁..u_r, δ) and the admissibility machinery.

mod admissibility;
mod generating;
mod identities;

pub use admissibility::{
    check_ground_relation, check_weak_admissibility, check_wilcox_yu, solve_deltas_from_admissibility,
    triangular_system, wilcox_yu_linear_residual, wilcox_yu_rho_residual, AdmissibilityOptions,
    AdmissibilityReport,
};
pub use generating::{
    a_of_t, a_of_t_canonical, delta_from_mu, g_of_t, g_of_t_inverse, mu, z1_closed_form, z1_from_gammas,
    z1_series,
};
pub use identities::{check_cauchy_and_residue_identities, check_gamma_system};

use std::collections::BTreeMap;
use std::sync::{OnceLock, RwLock};

use serde::Serialize;

use crate::arith::field::{product, sum};
use crate::arith::{Field, RatFunc, Sample, Specialization, Var};
use crate::error::{Error, Result};

/// Where a memoized δ entry came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaSource {
    /// Σ_j γ_j u_j^a.
    ClosedForm,
    /// Supplied by the caller.
    Override,
    /// The recursion expressing δ₋ⱼ through δ₁..δ_j.
    NegativeRecursion,
}

#[derive(Clone, Debug)]
pub enum RhoChoice<F> {
    Canonical,
    Explicit(F),
}

/// Signed elementary symmetric functions `a_0..a_r`, with `a_j = (−1)^{r−j} ε_{r−j}(u)`.
pub fn signed_elementary_all<F: Field>(u: &[F]) -> Vec<F> {
    // ∏ (x − u_i) = Σ a_j x^j
    let mut c = vec![F::one()];
    for ui in u {
        let mut next = vec![F::zero(); c.len() + 1];
        for (k, ck) in c.iter().enumerate() {
            next[k + 1] = next[k + 1].add(ck);
            next[k] = next[k].sub(&ck.mul(ui));
        }
        c = next;
    }
    c
}

pub fn signed_elementary<F: Field>(u: &[F], j: usize) -> Result<F> {
    if j > u.len() {
        return Err(Error::IndexOutOfRange {
            index: j as i64,
            max: u.len() as i64,
        });
    }
    Ok(signed_elementary_all(u).swap_remove(j))
}

/// `∏u_j` for odd r, `q⁻¹∏u_j` for even r.
pub fn canonical_rho<F: Field>(q: &F, u: &[F]) -> Result<F> {
    let p = product(u);
    if u.len() % 2 == 1 {
        Ok(p)
    } else {
        p.div(q)
    }
}

#[derive(Clone, Debug)]
pub struct GammaVector<F> {
    pub gamma: Vec<F>,
    pub gamma1: Vec<F>,
    pub gamma2: Vec<F>,
    /// The simplified closed forms, present when ρ is canonical.
    pub simplified: Option<Vec<F>>,
}

pub struct GroundParams<F: Field> {
    r: usize,
    q: F,
    u: Vec<F>,
    rho: F,
    rho_canonical: bool,
    overrides: BTreeMap<i64, F>,
    memo: RwLock<BTreeMap<i64, (F, DeltaSource)>>,
    gammas: OnceLock<std::result::Result<GammaVector<F>, Error>>,
}

impl<F: Field> Clone for GroundParams<F> {
    fn clone(&self) -> Self {
        Self {
            r: self.r,
            q: self.q.clone(),
            u: self.u.clone(),
            rho: self.rho.clone(),
            rho_canonical: self.rho_canonical,
            overrides: self.overrides.clone(),
            memo: RwLock::new(self.memo.read().expect("memo lock").clone()),
            gammas: self.gammas.clone(),
        }
    }
}

impl<F: Field> std::fmt::Debug for GroundParams<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroundParams")
            .field("r", &self.r)
            .field("q", &self.q)
            .field("u", &self.u)
            .field("rho", &self.rho)
            .field("overrides", &self.overrides)
            .finish()
    }
}

impl<F: Field> GroundParams<F> {
    pub fn new(q: F, u: Vec<F>, rho: RhoChoice<F>) -> Result<Self> {
        let r = u.len();
        if r == 0 {
            return Err(Error::DegenerateParameters("r must be positive".into()));
        }
        if q.is_zero() {
            return Err(Error::DegenerateParameters("q = 0".into()));
        }
        if let Some(j) = u.iter().position(|x| x.is_zero()) {
            return Err(Error::DegenerateParameters(format!("u{} = 0", j + 1)));
        }
        let canon = canonical_rho(&q, &u)?;
        let (rho, rho_canonical) = match rho {
            RhoChoice::Canonical => (canon, true),
            RhoChoice::Explicit(x) => {
                let c = x.equals(&canon);
                (x, c)
            }
        };
        if rho.is_zero() {
            return Err(Error::DegenerateParameters("rho = 0".into()));
        }
        Ok(Self {
            r,
            q,
            u,
            rho,
            rho_canonical,
            overrides: BTreeMap::new(),
            memo: RwLock::new(BTreeMap::new()),
            gammas: OnceLock::new(),
        })
    }

    /// Replaces δ_a by a caller-supplied value (used to plant inadmissible data).
    pub fn with_delta_overrides(mut self, overrides: BTreeMap<i64, F>) -> Self {
        self.overrides = overrides;
        self.memo = RwLock::new(BTreeMap::new());
        self
    }

    /// Random specialization of the generic parameters.
    pub fn random<R: rand::Rng + ?Sized>(rng: &mut R, r: usize, rho: RhoChoice<F>) -> Result<Self>
    where
        F: Sample,
    {
        let s = Specialization::<F>::random(rng, r, false)?;
        let q = s.get(Var::Q).cloned().expect("q assigned");
        let u = (1..=r)
            .map(|j| s.get(Var::u(j).expect("r bounded")).cloned().expect("u assigned"))
            .collect();
        Self::new(q, u, rho)
    }

    pub fn r(&self) -> usize {
        self.r
    }
    pub fn q(&self) -> &F {
        &self.q
    }
    pub fn u(&self) -> &[F] {
        &self.u
    }
    pub fn rho(&self) -> &F {
        &self.rho
    }
    pub fn is_rho_canonical(&self) -> bool {
        self.rho_canonical
    }
    pub fn overrides(&self) -> &BTreeMap<i64, F> {
        &self.overrides
    }

    /// `∏ u_j`.
    pub fn p(&self) -> F {
        product(&self.u)
    }

    /// `q − q⁻¹`.
    pub fn q_minus_qinv(&self) -> F {
        self.q.sub(&self.q.inv().expect("q is nonzero"))
    }

    /// `a_0..a_r`.
    pub fn a(&self) -> Vec<F> {
        signed_elementary_all(&self.u)
    }

    /// Fails unless u_i ≠ u_j (i ≠ j), u_i u_j ≠ 1 and q² ≠ 1.
    pub fn check_nondegenerate(&self) -> Result<()> {
        if self.q.mul(&self.q).is_one() {
            return Err(Error::DegenerateParameters("q^2 = 1".into()));
        }
        for i in 0..self.r {
            for j in i..self.r {
                if i != j && self.u[i].equals(&self.u[j]) {
                    return Err(Error::DegenerateParameters(format!("u{} = u{}", i + 1, j + 1)));
                }
                if self.u[i].mul(&self.u[j]).is_one() {
                    return Err(Error::DegenerateParameters(format!("u{}*u{} = 1", i + 1, j + 1)));
                }
            }
        }
        Ok(())
    }

    pub fn gammas(&self) -> Result<&GammaVector<F>> {
        self.gammas
            .get_or_init(|| compute_gammas(self))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn require_canonical_rho(&self) -> Result<()> {
        if self.rho_canonical {
            Ok(())
        } else {
            Err(Error::NonCanonicalRho(self.rho.to_string()))
        }
    }

    /// δ_a for any integer a, memoized.
    pub fn delta(&self, a: i64) -> Result<F> {
        Ok(self.delta_with_source(a)?.0)
    }

    pub fn delta_with_source(&self, a: i64) -> Result<(F, DeltaSource)> {
        if let Some(hit) = self.memo.read().expect("memo lock").get(&a) {
            return Ok(hit.clone());
        }
        let entry = if let Some(v) = self.overrides.get(&a) {
            (v.clone(), DeltaSource::Override)
        } else if a >= 0 {
            (delta_closed_form(self, a as u32)?, DeltaSource::ClosedForm)
        } else {
            (delta_negative(self, (-a) as u32)?, DeltaSource::NegativeRecursion)
        };
        self.memo
            .write()
            .expect("memo lock")
            .entry(a)
            .or_insert_with(|| entry.clone());
        Ok(entry)
    }
}

impl GroundParams<RatFunc> {
    /// Generic parameters: q and u_j are the indeterminates.
    pub fn symbolic(r: usize, rho: RhoChoice<RatFunc>) -> Result<Self> {
        if r > crate::arith::MAX_U {
            return Err(Error::VariableLimit { max: crate::arith::MAX_U });
        }
        let u = (1..=r).map(RatFunc::u).collect::<Result<Vec<_>>>()?;
        Self::new(RatFunc::q(), u, rho)
    }
}

/// γ_j from the general formula, plus the simplified closed forms for canonical ρ.
pub fn compute_gammas<F: Field>(p: &GroundParams<F>) -> Result<GammaVector<F>> {
    p.check_nondegenerate()?;
    let r = p.r;
    let u = &p.u;
    let scale = p.rho.mul(&p.q.inv()?.sub(&p.q)).inv()?;
    let mut gamma = Vec::with_capacity(r);
    let mut gamma1 = Vec::with_capacity(r);
    let mut gamma2 = Vec::with_capacity(r);
    for j in 0..r {
        let mut pr = F::one();
        let mut others = F::one();
        for l in (0..r).filter(|&l| l != j) {
            pr = pr.mul(&u[l].mul(&u[j]).sub(&F::one()).div(&u[j].sub(&u[l]))?);
            others = others.mul(&u[l]);
        }
        let g1 = F::one().sub(&u[j].mul(&u[j])).mul(&others).mul(&pr);
        let g2 = if r % 2 == 1 { pr } else { pr.mul(&u[j]).neg() };
        gamma.push(g1.mul(&scale).add(&g2));
        gamma1.push(g1);
        gamma2.push(g2);
    }
    let simplified = if p.rho_canonical {
        let s = simplified_gammas(p)?;
        if let Some(j) = (0..r).find(|&j| !s[j].equals(&gamma[j])) {
            return Err(Error::Inconsistent(format!(
                "simplified gamma{} disagrees with the general formula",
                j + 1
            )));
        }
        Some(s)
    } else {
        None
    };
    Ok(GammaVector {
        gamma,
        gamma1,
        gamma2,
        simplified,
    })
}

/// `ρ(u_j − q^{∓1})(u_j + q)/(u_j²(q − q⁻¹)) · ∏_{ℓ≠j}(u_j − u_ℓ⁻¹)/(u_j − u_ℓ)`,
/// with `q⁻¹` for odd r and `q` for even r.
pub fn simplified_gammas<F: Field>(p: &GroundParams<F>) -> Result<Vec<F>> {
    let r = p.r;
    let u = &p.u;
    let q = &p.q;
    let qq = p.q_minus_qinv();
    let shift = if r % 2 == 1 { q.inv()? } else { q.clone() };
    (0..r)
        .map(|j| {
            let uj = &u[j];
            let mut v = p
                .rho
                .mul(&uj.sub(&shift))
                .mul(&uj.add(q))
                .div(&uj.mul(uj).mul(&qq))?;
            for l in (0..r).filter(|&l| l != j) {
                v = v.mul(&uj.sub(&u[l].inv()?).div(&uj.sub(&u[l]))?);
            }
            Ok(v)
        })
        .collect()
}

/// `Σ_j γ_j u_j^a`.
pub fn delta_closed_form<F: Field>(p: &GroundParams<F>, a: u32) -> Result<F> {
    let g = p.gammas()?;
    let terms: Vec<F> = g
        .gamma
        .iter()
        .zip(&p.u)
        .map(|(gj, uj)| uj.pow(a as i64).map(|x| gj.mul(&x)))
        .collect::<Result<_>>()?;
    Ok(sum(&terms))
}

/// δ₋ⱼ: `ρ⁻²δ₁` for j = 1, otherwise
/// `ρ⁻²δ_j + (q⁻¹ − q)ρ⁻¹ Σ_{k=1}^{j−1} (δ_k δ_{k−j} − δ_{2k−j})`.
pub fn delta_negative<F: Field>(p: &GroundParams<F>, j: u32) -> Result<F> {
    if j == 0 {
        return p.delta(0);
    }
    let j = j as i64;
    let rho_inv = p.rho.inv()?;
    let mut v = rho_inv.mul(&rho_inv).mul(&p.delta(j)?);
    if j >= 2 {
        let mut s = F::zero();
        for k in 1..j {
            s = s.add(&p.delta(k)?.mul(&p.delta(k - j)?).sub(&p.delta(2 * k - j)?));
        }
        let c = p.q.inv()?.sub(&p.q).mul(&rho_inv);
        v = v.add(&c.mul(&s));
    }
    Ok(v)
}

/// `−Σ_{j=0}^{r−1} a_j δ_{a−r+j}`.
pub fn delta_forward_recursion<F: Field>(p: &GroundParams<F>, a: i64) -> Result<F> {
    let r = p.r as i64;
    if a < r {
        return Err(Error::IndexOutOfRange { index: a, max: r });
    }
    let coeffs = p.a();
    let mut s = F::zero();
    for j in 0..r {
        s = s.add(&coeffs[j as usize].mul(&p.delta(a - r + j)?));
    }
    Ok(s.neg())
}

/// `δ₀` from the closed form in terms of `p = ∏u_j`:
/// `(1 − p²)/(ρ(q⁻¹ − q)) + 1 − [r even]·p`.
pub fn delta0_closed_form<F: Field>(p: &GroundParams<F>) -> Result<F> {
    let pp = p.p();
    let mut v = F::one()
        .sub(&pp.mul(&pp))
        .div(&p.rho.mul(&p.q.inv()?.sub(&p.q)))?
        .add(&F::one());
    if p.r.is_multiple_of(2) {
        v = v.sub(&pp);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse::parse_ratfunc;

    fn rf(s: &str) -> RatFunc {
        parse_ratfunc(s).unwrap()
    }

    #[test]
    fn signed_elementary_examples() {
        let u1 = vec![rf("u1")];
        assert_eq!(signed_elementary(&u1, 0).unwrap(), rf("-u1"));
        assert_eq!(signed_elementary(&u1, 1).unwrap(), rf("1"));
        let u2 = vec![rf("u1"), rf("u2")];
        assert_eq!(signed_elementary(&u2, 0).unwrap(), rf("u1*u2"));
        assert_eq!(signed_elementary(&u2, 1).unwrap(), rf("-u1-u2"));
        assert!(signed_elementary(&u2, 3).is_err());
    }

    #[test]
    fn canonical_rho_examples() {
        let q = RatFunc::q();
        let u: Vec<RatFunc> = (1..=3).map(|j| RatFunc::u(j).unwrap()).collect();
        assert_eq!(canonical_rho(&q, &u[..1]).unwrap(), rf("u1"));
        assert_eq!(canonical_rho(&q, &u[..2]).unwrap(), rf("q^-1*u1*u2"));
        assert_eq!(canonical_rho(&q, &u).unwrap(), rf("u1*u2*u3"));
    }

    #[test]
    fn gamma_r1_closed_form() {
        let p = GroundParams::symbolic(1, RhoChoice::Canonical).unwrap();
        let g = p.gammas().unwrap();
        let expect = rf("u1*(u1 - q^-1)*(u1+q)/(u1^2*(q-q^-1))");
        assert_eq!(g.gamma[0], expect);
    }

    #[test]
    fn delta0_examples() {
        let p1 = GroundParams::symbolic(1, RhoChoice::Canonical).unwrap();
        assert_eq!(p1.delta(0).unwrap(), rf("(1-u1^2)/(u1*(q^-1-q)) + 1"));
        let p2 = GroundParams::symbolic(2, RhoChoice::Canonical).unwrap();
        let expect = rf("(1-u1^2*u2^2)/(q^-1*u1*u2*(q^-1-q)) + 1 - u1*u2");
        assert_eq!(p2.delta(0).unwrap(), expect);
        assert_eq!(delta0_closed_form(&p2).unwrap(), expect);
    }

    #[test]
    fn negative_recursion_first_terms() {
        let p = GroundParams::symbolic(2, RhoChoice::Canonical).unwrap();
        let rho = p.rho().clone();
        let d1 = p.delta(1).unwrap();
        assert_eq!(p.delta(-1).unwrap(), d1.div(&rho.mul(&rho)).unwrap());
        let q = RatFunc::q();
        let expect = p
            .delta(2)
            .unwrap()
            .div(&rho.mul(&rho))
            .unwrap()
            .add(&q.inv().unwrap().sub(&q).div(&rho).unwrap().mul(&d1.mul(&p.delta(-1).unwrap()).sub(&p.delta(0).unwrap())));
        assert_eq!(p.delta(-2).unwrap(), expect);
        assert_eq!(p.delta_with_source(-2).unwrap().1, DeltaSource::NegativeRecursion);
    }

    #[test]
    fn degenerate_parameters_rejected() {
        let q = RatFunc::q();
        let u1 = RatFunc::u(1).unwrap();
        let p = GroundParams::new(q.clone(), vec![u1.clone(), u1.clone()], RhoChoice::Canonical).unwrap();
        assert!(matches!(p.gammas(), Err(Error::DegenerateParameters(_))));
        let p = GroundParams::new(q, vec![u1.clone(), u1.inv().unwrap()], RhoChoice::Canonical).unwrap();
        assert!(matches!(p.gammas(), Err(Error::DegenerateParameters(_))));
    }

    #[test]
    fn variable_limit() {
        assert!(matches!(
            GroundParams::symbolic(7, RhoChoice::Canonical),
            Err(Error::VariableLimit { .. })
        ));
    }
}
