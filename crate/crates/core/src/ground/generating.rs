//! Generating functions in the auxiliary variable t: G(t), μ_a, A(t), Z₁(t).

use super::GroundParams;
use crate::arith::{expand_series, Direction, RatFunc, Var};
use crate::error::Result;

fn t() -> RatFunc {
    RatFunc::t()
}

/// `G(t) = ∏_ℓ (t − u_ℓ)/(t u_ℓ − 1)`.
pub fn g_of_t(u: &[RatFunc]) -> RatFunc {
    let t = t();
    let mut g = RatFunc::one();
    for ul in u {
        let f = t.sub(ul).div(&t.mul(ul).sub(&RatFunc::one())).expect("t*u - 1 is nonzero");
        g = g.mul(&f);
    }
    g
}

/// `G(t⁻¹) = ∏_ℓ (t⁻¹ − u_ℓ)/(t⁻¹ u_ℓ − 1)`.
pub fn g_of_t_inverse(u: &[RatFunc]) -> RatFunc {
    let ti = t().inv().expect("t is nonzero");
    let mut g = RatFunc::one();
    for ul in u {
        let f = ti
            .sub(ul)
            .div(&ti.mul(ul).sub(&RatFunc::one()))
            .expect("u/t - 1 is nonzero");
        g = g.mul(&f);
    }
    g
}

/// `μ_0..μ_{n−1}`, the coefficients of G(t) at t = 0.
pub fn mu(u: &[RatFunc], n: usize) -> Result<Vec<RatFunc>> {
    Ok(expand_series(&g_of_t(u), Var::T, Direction::AtZero, n)?.coeffs)
}

/// `A(t) = ρ⁻¹p/(q − q⁻¹) + t/(t² − 1)` (odd r) or `ρ⁻¹p/(q − q⁻¹) − t²/(t² − 1)` (even r).
pub fn a_of_t(p: &GroundParams<RatFunc>) -> Result<RatFunc> {
    let c = p.p().div(p.rho())?.div(&p.q_minus_qinv())?;
    Ok(c.add(&parity_tail(p.r())))
}

/// A(t) after substituting the canonical ρ: `1/(q − q⁻¹) + t/(t² − 1)` (odd r) or
/// `q/(q − q⁻¹) − t²/(t² − 1)` (even r).
pub fn a_of_t_canonical(r: usize, q: &RatFunc) -> Result<RatFunc> {
    let qq = q.sub(&q.inv()?);
    let c = if r % 2 == 1 { qq.inv()? } else { q.div(&qq)? };
    Ok(c.add(&parity_tail(r)))
}

fn parity_tail(r: usize) -> RatFunc {
    let t = t();
    let t2m1 = t.mul(&t).sub(&RatFunc::one());
    if r % 2 == 1 {
        t.div(&t2m1).expect("t^2 - 1 is nonzero")
    } else {
        t.mul(&t).div(&t2m1).expect("t^2 - 1 is nonzero").neg()
    }
}

/// `1/(ρ(q⁻¹ − q)) + t²/(t² − 1) + A(t)G(t⁻¹)`.
pub fn z1_closed_form(p: &GroundParams<RatFunc>) -> Result<RatFunc> {
    let t = t();
    let c = p.rho().mul(&p.q().inv()?.sub(p.q())).inv()?;
    let t2 = t.mul(&t);
    let geo = t2.div(&t2.sub(&RatFunc::one()))?;
    let a = if p.is_rho_canonical() {
        a_of_t_canonical(p.r(), p.q())?
    } else {
        a_of_t(p)?
    };
    Ok(c.add(&geo).add(&a.mul(&g_of_t_inverse(p.u()))))
}

/// `Σ_j γ_j t/(t − u_j)`.
pub fn z1_from_gammas(p: &GroundParams<RatFunc>) -> Result<RatFunc> {
    let t = t();
    let g = p.gammas()?;
    let mut z = RatFunc::zero();
    for (gj, uj) in g.gamma.iter().zip(p.u()) {
        z = z.add(&gj.mul(&t.div(&t.sub(uj))?));
    }
    Ok(z)
}

/// The first `n` coefficients of Z₁(t) in powers of t⁻¹.
pub fn z1_series(p: &GroundParams<RatFunc>, n: usize) -> Result<Vec<RatFunc>> {
    Ok(expand_series(&z1_closed_form(p)?, Var::T, Direction::AtInfinity, n)?.coeffs)
}

/// δ_a from the μ coefficients:
///
/// odd r:  `[a=0]ρ⁻¹/(q⁻¹−q) + [a even] + μ_a ρ⁻¹p/(q−q⁻¹) + μ_{a−1} + μ_{a−3} + …`
/// even r: `[a=0]ρ⁻¹/(q⁻¹−q) + [a even] + μ_a ρ⁻¹p/(q−q⁻¹) − μ_a − μ_{a−2} − …`
///
/// `mu` must hold at least `a + 1` coefficients.
pub fn delta_from_mu(p: &GroundParams<RatFunc>, a: usize, mu: &[RatFunc]) -> Result<RatFunc> {
    let rho_inv = p.rho().inv()?;
    let mut v = RatFunc::zero();
    if a == 0 {
        v = v.add(&rho_inv.div(&p.q().inv()?.sub(p.q()))?);
    }
    if a.is_multiple_of(2) {
        v = v.add(&RatFunc::one());
    }
    v = v.add(&mu[a].mul(&rho_inv).mul(&p.p()).div(&p.q_minus_qinv())?);
    if p.r() % 2 == 1 {
        for k in (1..=a).step_by(2) {
            v = v.add(&mu[a - k]);
        }
    } else {
        for k in (0..=a).step_by(2) {
            v = v.sub(&mu[a - k]);
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::super::RhoChoice;
    use super::*;
    use crate::arith::Field;
    use crate::arith::parse::parse_ratfunc;

    fn rf(s: &str) -> RatFunc {
        parse_ratfunc(s).unwrap()
    }

    #[test]
    fn g_reciprocal_and_mu0() {
        for r in 1..=3 {
            let u: Vec<RatFunc> = (1..=r).map(|j| RatFunc::u(j).unwrap()).collect();
            assert!(g_of_t(&u).mul(&g_of_t_inverse(&u)).is_one());
            let m = mu(&u, 3).unwrap();
            assert_eq!(m[0], crate::arith::field::product(&u));
        }
        let m = mu(&[rf("u1")], 2).unwrap();
        assert_eq!(m[1], rf("u1^2 - 1"));
    }

    #[test]
    fn z1_agrees_with_gamma_sum() {
        for r in 1..=3 {
            let p = GroundParams::symbolic(r, RhoChoice::Canonical).unwrap();
            assert_eq!(z1_closed_form(&p).unwrap(), z1_from_gammas(&p).unwrap(), "r={r}");
            // The general and canonical A(t) coincide at canonical ρ.
            assert_eq!(a_of_t(&p).unwrap(), a_of_t_canonical(r, p.q()).unwrap());
        }
    }

    #[test]
    fn parts_two_and_three_match_series() {
        for r in 1..=2 {
            let p = GroundParams::symbolic(r, RhoChoice::Canonical).unwrap();
            let m = mu(p.u(), 5).unwrap();
            let s = z1_series(&p, 5).unwrap();
            for a in 0..5 {
                assert_eq!(delta_from_mu(&p, a, &m).unwrap(), s[a], "r={r} a={a}");
            }
        }
    }
}
