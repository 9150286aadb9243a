//! The Cauchy determinant and the residue identities behind the γ formulas.

use super::GroundParams;
use crate::arith::{Field, Matrix};
use crate::error::Result;
use crate::report::Check;

/// `Σ_j γ_j/(1 − u_i u_j) − 1/(1 − u_i²) − 1/(ρ(q⁻¹ − q))` for every i.
pub fn check_gamma_system<F: Field>(p: &GroundParams<F>) -> Result<Vec<Check>> {
    let g = p.gammas()?;
    let u = p.u();
    let c = p.rho().mul(&p.q().inv()?.sub(p.q())).inv()?;
    (0..p.r())
        .map(|i| {
            let mut s = F::zero();
            for (j, gj) in g.gamma.iter().enumerate() {
                s = s.add(&gj.div(&F::one().sub(&u[i].mul(&u[j])))?);
            }
            let rhs = F::one().sub(&u[i].mul(&u[i])).inv()?.add(&c);
            Ok(Check::from_residual("gamma_system", Some(i as i64 + 1), &s.sub(&rhs)))
        })
        .collect()
}

fn vandermonde_mixed<F: Field>(u: &[F], j: usize) -> Result<F> {
    // ∏_{ℓ≠j} (u_ℓ u_j − 1)/(u_j − u_ℓ)
    let mut v = F::one();
    for (l, ul) in u.iter().enumerate() {
        if l != j {
            v = v.mul(&ul.mul(&u[j]).sub(&F::one()).div(&u[j].sub(ul))?);
        }
    }
    Ok(v)
}

/// Verifies, for the given u:
///
/// * `det(1/(1 − u_i u_j)) = ∏_{i<j}(u_i − u_j)² / ∏_{i,j}(1 − u_i u_j)`;
/// * `Σ_j ∏_{ℓ≠i}(u_ℓ u_j − 1) ∏_{ℓ≠j} u_ℓ/(u_j − u_ℓ) = 1` for every i;
/// * `Σ_j (1 − u_i²)/(1 − u_i u_j) · c_j ∏_{ℓ≠j}(u_ℓ u_j − 1)/(u_j − u_ℓ) = 1` for every i,
///   with `c_j = 1` for odd r and `c_j = −u_j` for even r.
pub fn check_cauchy_and_residue_identities<F: Field>(u: &[F]) -> Result<Vec<Check>> {
    let r = u.len();
    let mut out = Vec::new();
    let m = Matrix::try_from_fn(r, r, |i, j| F::one().sub(&u[i].mul(&u[j])).inv())?;
    let mut num = F::one();
    let mut den = F::one();
    for i in 0..r {
        for j in 0..r {
            if i < j {
                let d = u[i].sub(&u[j]);
                num = num.mul(&d.mul(&d));
            }
            den = den.mul(&F::one().sub(&u[i].mul(&u[j])));
        }
    }
    let det = m.determinant();
    out.push(Check::from_residual("cauchy_determinant", None, &det.sub(&num.div(&den)?)));

    for i in 0..r {
        let mut s = F::zero();
        for j in 0..r {
            let mut term = F::one();
            for (l, ul) in u.iter().enumerate() {
                if l != i {
                    term = term.mul(&ul.mul(&u[j]).sub(&F::one()));
                }
                if l != j {
                    term = term.mul(&ul.div(&u[j].sub(ul))?);
                }
            }
            s = s.add(&term);
        }
        out.push(Check::from_residual("gamma_first_identity", Some(i as i64 + 1), &s.sub(&F::one())));
    }

    for i in 0..r {
        let mut s = F::zero();
        for j in 0..r {
            let mut term = F::one()
                .sub(&u[i].mul(&u[i]))
                .div(&F::one().sub(&u[i].mul(&u[j])))?
                .mul(&vandermonde_mixed(u, j)?);
            if r.is_multiple_of(2) {
                term = term.mul(&u[j]).neg();
            }
            s = s.add(&term);
        }
        out.push(Check::from_residual("gamma_second_identity", Some(i as i64 + 1), &s.sub(&F::one())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::RatFunc;

    #[test]
    fn one_by_one_cauchy() {
        let u = vec![RatFunc::u(1).unwrap()];
        let m = Matrix::from_fn(1, 1, |_, _| RatFunc::one().sub(&u[0].mul(&u[0])).inv().unwrap());
        assert_eq!(m.determinant(), "1/(1-u1^2)".parse::<RatFunc>().unwrap());
        assert!(check_cauchy_and_residue_identities(&u).unwrap().iter().all(|c| c.passed));
    }

    #[test]
    fn symbolic_r2() {
        let u: Vec<RatFunc> = (1..=2).map(|j| RatFunc::u(j).unwrap()).collect();
        let checks = check_cauchy_and_residue_identities(&u).unwrap();
        assert_eq!(checks.len(), 5);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }
}
