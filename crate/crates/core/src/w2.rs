//! The r-dimensional module of the two-strand algebra in the y₁-eigenbasis.

use crate::arith::{Field, Matrix};
use crate::error::{Error, Result};
use crate::ground::{delta0_closed_form, GroundParams};
use crate::report::Check;

#[derive(Clone, Debug)]
pub struct W2Rep<F: Field> {
    pub y: Matrix<F>,
    pub e: Matrix<F>,
    pub g: Matrix<F>,
}

/// `Y e_j = u_j e_j`, `E e_j = γ_j Σ_i e_i`,
/// `G e_j = (q⁻¹ − q) Σ_i (γ_j − δ_ij)/(1 − u_i u_j) e_i`.
pub fn build_w2_rep<F: Field>(p: &GroundParams<F>) -> Result<W2Rep<F>> {
    p.check_nondegenerate()?;
    let r = p.r();
    let u = p.u();
    let gamma = &p.gammas()?.gamma;
    let c = p.q().inv()?.sub(p.q());
    let y = Matrix::diagonal(u);
    let e = Matrix::from_fn(r, r, |_, j| gamma[j].clone());
    let g = Matrix::try_from_fn(r, r, |i, j| {
        let mut n = gamma[j].clone();
        if i == j {
            n = n.sub(&F::one());
        }
        c.mul(&n).div(&F::one().sub(&u[i].mul(&u[j])))
    })?;
    Ok(W2Rep { y, e, g })
}

/// `Y^a` for any integer a, as a diagonal matrix.
fn y_pow<F: Field>(u: &[F], a: i64) -> Result<Matrix<F>> {
    let d = u.iter().map(|x| x.pow(a)).collect::<Result<Vec<_>>>()?;
    Ok(Matrix::diagonal(&d))
}

fn mcheck<F: Field>(name: &str, index: Option<i64>, m: &Matrix<F>) -> Check {
    Check::from_entries(name, index, m.entries())
}

#[derive(Clone, Debug)]
pub struct W2Options {
    /// Inclusive window for `E Y^a E = δ_a E`.
    pub window: (i64, i64),
}

impl Default for W2Options {
    fn default() -> Self {
        Self { window: (-5, 5) }
    }
}

/// Residuals of every defining relation restricted to one e, g and y.
pub fn verify_w2_relations<F: Field>(rep: &W2Rep<F>, p: &GroundParams<F>, opts: &W2Options) -> Result<Vec<Check>> {
    let r = p.r();
    let u = p.u();
    let W2Rep { y, e, g } = rep;
    let id = Matrix::<F>::identity(r);
    let rho = p.rho();
    let rho_inv = rho.inv()?;
    let qq = p.q_minus_qinv();
    let mut out = Vec::new();

    let mut cyc = id.clone();
    for uj in u {
        cyc = cyc.mul(&y.sub(&id.scale(uj)));
    }
    out.push(mcheck("cyclotomic", None, &cyc));

    let ee = e.mul(e);
    out.push(mcheck("idempotent", None, &ee.sub(&e.scale(&p.delta(0)?))));
    out.push(Check::from_residual(
        "delta0_closed_form",
        None,
        &p.delta(0)?.sub(&delta0_closed_form(p)?),
    ));
    for a in opts.window.0..=opts.window.1 {
        let lhs = e.mul(&y_pow(u, a)?).mul(e);
        out.push(mcheck("e_y_power_e", Some(a), &lhs.sub(&e.scale(&p.delta(a)?))));
    }

    let ygy = y.mul(g).mul(y);
    let one_minus_e = id.sub(e);
    out.push(mcheck(
        "ygy",
        None,
        &ygy.sub(g).sub(&one_minus_e.scale(&p.q().inv()?.sub(p.q()))),
    ));
    out.push(mcheck("untwisting_left", None, &g.mul(e).sub(&e.scale(&rho_inv))));
    out.push(mcheck("untwisting_right", None, &e.mul(g).sub(&e.scale(&rho_inv))));
    out.push(mcheck("unwrapping_left", None, &e.mul(&ygy).sub(&e.scale(rho))));
    out.push(mcheck("unwrapping_right", None, &ygy.mul(e).sub(&e.scale(rho))));

    let gygy = g.mul(y).mul(g).mul(y);
    out.push(mcheck("gygy_identity", None, &gygy.sub(&id)));
    match g.inverse() {
        Ok(ginv) => {
            out.push(mcheck("g_inverse", None, &ginv.sub(&ygy)));
            out.push(mcheck("skein", None, &g.sub(&ginv).sub(&one_minus_e.scale(&qq))));
        }
        Err(_) => {
            out.push(Check::boolean("g_inverse", None, false, "G is singular"));
            out.push(Check::boolean("skein", None, false, "G is singular"));
        }
    }
    out.push(mcheck("braid", None, &gygy.sub(&ygy.mul(g))));

    out.push(Check::boolean(
        "cyclic_vector",
        None,
        !vandermonde_det(u).is_zero(),
        "m, Ym, ..., Y^{r-1}m are dependent",
    ));
    let krylov = krylov_matrix(y, r);
    out.push(Check::from_residual(
        "krylov_determinant",
        None,
        &krylov.determinant().sub(&vandermonde_det(u)),
    ));
    Ok(out)
}

/// Columns `m, Ym, …, Y^{r−1}m` with `m = Σ e_i`.
fn krylov_matrix<F: Field>(y: &Matrix<F>, r: usize) -> Matrix<F> {
    Matrix::from_fn(r, r, |i, k| y.get(i, i).pow(k as i64).expect("nonzero power"))
}

/// `det(u_i^k) = ∏_{i<j}(u_j − u_i)`.
fn vandermonde_det<F: Field>(u: &[F]) -> F {
    let mut v = F::one();
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            v = v.mul(&u[j].sub(&u[i]));
        }
    }
    v
}

/// `P_j = ∏_{ℓ≠j} (Y − u_ℓ)/(u_j − u_ℓ)`.
pub fn spectral_idempotents<F: Field>(y: &Matrix<F>, u: &[F]) -> Result<Vec<Matrix<F>>> {
    let r = u.len();
    let id = Matrix::identity(r);
    (0..r)
        .map(|j| {
            let mut m = id.clone();
            for l in (0..r).filter(|&l| l != j) {
                let d = u[j].sub(&u[l]);
                if d.is_zero() {
                    return Err(Error::DegenerateParameters(format!("u{} = u{}", j + 1, l + 1)));
                }
                m = m.mul(&y.sub(&id.scale(&u[l])).scale(&d.inv()?));
            }
            Ok(m)
        })
        .collect()
}

/// Idempotency, orthogonality, completeness, eigenvector and trace checks of the P_j.
pub fn check_spectral_idempotents<F: Field>(rep: &W2Rep<F>, p: &GroundParams<F>) -> Result<Vec<Check>> {
    let ps = spectral_idempotents(&rep.y, p.u())?;
    let r = p.r();
    let gamma = &p.gammas()?.gamma;
    let mut out = Vec::new();
    let mut total = Matrix::zeros(r, r);
    for (j, pj) in ps.iter().enumerate() {
        let idx = Some(j as i64 + 1);
        out.push(mcheck("spectral_idempotent", idx, &pj.mul(pj).sub(pj)));
        out.push(mcheck("spectral_eigen", idx, &rep.y.mul(pj).sub(&pj.scale(&p.u()[j]))));
        out.push(mcheck(
            "spectral_trace",
            idx,
            &rep.e.mul(pj).mul(&rep.e).sub(&rep.e.scale(&gamma[j])),
        ));
        for (i, pi) in ps.iter().enumerate() {
            if i != j {
                out.push(mcheck("spectral_orthogonal", Some((i * r + j) as i64), &pi.mul(pj)));
            }
        }
        total = total.add(pj);
    }
    out.push(mcheck("spectral_complete", None, &total.sub(&Matrix::identity(r))));
    Ok(out)
}

/// `E Y^{−a} E − δ₋ₐ E` for `1 ≤ a ≤ a_max`, with δ₋ₐ from the negative recursion.
pub fn delta_negative_consistency<F: Field>(p: &GroundParams<F>, a_max: i64) -> Result<Vec<Check>> {
    let rep = build_w2_rep(p)?;
    (0..=a_max)
        .map(|a| {
            let lhs = rep.e.mul(&y_pow(p.u(), -a)?).mul(&rep.e);
            Ok(mcheck("delta_negative", Some(-a), &lhs.sub(&rep.e.scale(&p.delta(-a)?))))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::RatFunc;
    use crate::ground::RhoChoice;

    fn sym(r: usize) -> GroundParams<RatFunc> {
        GroundParams::symbolic(r, RhoChoice::Canonical).unwrap()
    }

    #[test]
    fn relations_hold_symbolically() {
        for r in 1..=3 {
            let p = sym(r);
            let rep = build_w2_rep(&p).unwrap();
            let checks = verify_w2_relations(&rep, &p, &W2Options::default()).unwrap();
            let bad: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
            assert!(bad.is_empty(), "r={r}: {bad:?}");
            assert!(check_spectral_idempotents(&rep, &p).unwrap().iter().all(|c| c.passed));
        }
    }

    #[test]
    fn rank_one_g_is_rho_inverse() {
        let p = sym(1);
        let rep = build_w2_rep(&p).unwrap();
        assert_eq!(*rep.g.get(0, 0), p.rho().inv().unwrap());
        assert_eq!(*rep.y.get(0, 0), RatFunc::u(1).unwrap());
    }

    #[test]
    fn r2_idempotent_form() {
        let p = sym(2);
        let rep = build_w2_rep(&p).unwrap();
        let ps = spectral_idempotents(&rep.y, p.u()).unwrap();
        let u = p.u();
        let expect = rep.y.sub(&Matrix::identity(2).scale(&u[1])).scale(&u[0].sub(&u[1]).inv().unwrap());
        assert!(ps[0].equals(&expect));
        assert!(spectral_idempotents(&rep.y, &u[..1]).unwrap()[0].equals(&Matrix::identity(1)));
    }

    #[test]
    fn negative_deltas_match() {
        let p = sym(2);
        assert!(delta_negative_consistency(&p, 5).unwrap().iter().all(|c| c.passed));
    }

    #[test]
    fn perturbed_delta_is_detected() {
        let base = sym(2);
        let bad = base.delta(1).unwrap().add(&RatFunc::one());
        let p = GroundParams::new(base.q().clone(), base.u().to_vec(), RhoChoice::Canonical)
            .unwrap()
            .with_delta_overrides([(1, bad)].into_iter().collect());
        let rep = build_w2_rep(&p).unwrap();
        let checks = verify_w2_relations(&rep, &p, &W2Options::default()).unwrap();
        let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(Check::label).collect();
        assert!(failed.contains(&"e_y_power_e[1]".to_string()), "{failed:?}");
    }
}
