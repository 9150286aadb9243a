//! Truncated expansions of rational functions in one variable.

use std::collections::BTreeMap;

use super::poly::{LaurentPoly, Var};
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Powers of `v⁻¹`.
    AtInfinity,
    /// Powers of `v`.
    AtZero,
}

/// `coeffs[a]` is the coefficient of `v^{-a}` (at infinity) or `v^a` (at zero).
#[derive(Clone, Debug)]
pub struct SeriesExpansion {
    pub var: Var,
    pub direction: Direction,
    pub coeffs: Vec<RatFunc>,
}

impl SeriesExpansion {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Re-sums the truncated series as a Laurent polynomial in `var`.
    pub fn resum(&self) -> RatFunc {
        let v = RatFunc::var(self.var);
        let mut acc = RatFunc::zero();
        for (a, c) in self.coeffs.iter().enumerate() {
            let e = match self.direction {
                Direction::AtInfinity => -(a as i32),
                Direction::AtZero => a as i32,
            };
            acc = acc.add(&c.mul(&v.pow(e).expect("variable is nonzero")));
        }
        acc
    }
}

fn coefficient_map(p: &LaurentPoly, v: Var) -> BTreeMap<i32, RatFunc> {
    p.split_by(v)
        .into_iter()
        .map(|(k, c)| (k, RatFunc::from_poly(&c)))
        .collect()
}

/// Expands `f` in `var` to `order` terms.
pub fn expand_series(f: &RatFunc, var: Var, direction: Direction, order: usize) -> Result<SeriesExpansion> {
    let (num, den) = f.num_den();
    let nmap = coefficient_map(&num, var);
    let dmap = coefficient_map(&den, var);
    // Reindex so that both are power series in s (s = 1/var or s = var).
    let (dlead, nlead) = match direction {
        Direction::AtInfinity => (dmap.keys().next_back(), nmap.keys().next_back()),
        Direction::AtZero => (dmap.keys().next(), nmap.keys().next()),
    };
    let dlead = *dlead.ok_or_else(|| Error::NotExpandable("zero denominator".into()))?;
    let coeff_at = |map: &BTreeMap<i32, RatFunc>, i: usize| -> RatFunc {
        let k = match direction {
            Direction::AtInfinity => dlead - i as i32,
            Direction::AtZero => dlead + i as i32,
        };
        map.get(&k).cloned().unwrap_or_else(RatFunc::zero)
    };
    if let Some(&nl) = nlead {
        let bad = match direction {
            Direction::AtInfinity => nl > dlead,
            Direction::AtZero => nl < dlead,
        };
        if bad {
            return Err(Error::NotExpandable(format!(
                "pole in {var} at the expansion point"
            )));
        }
    }
    let d0 = coeff_at(&dmap, 0);
    let d0_inv = d0
        .inv()
        .map_err(|_| Error::NotExpandable("leading denominator coefficient vanishes".into()))?;
    let dcoeffs: Vec<RatFunc> = (0..order).map(|i| coeff_at(&dmap, i)).collect();
    let mut coeffs: Vec<RatFunc> = Vec::with_capacity(order);
    for a in 0..order {
        let mut c = coeff_at(&nmap, a);
        for i in 1..=a {
            if !dcoeffs[i].is_zero() {
                c = c.sub(&dcoeffs[i].mul(&coeffs[a - i]));
            }
        }
        coeffs.push(c.mul(&d0_inv));
    }
    Ok(SeriesExpansion {
        var,
        direction,
        coeffs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse::parse_ratfunc;

    fn rf(s: &str) -> RatFunc {
        parse_ratfunc(s).unwrap()
    }

    #[test]
    fn geometric_in_inverse_square() {
        let s = expand_series(&rf("t^2/(t^2-1)"), Var::T, Direction::AtInfinity, 5).unwrap();
        let expect = [1, 0, 1, 0, 1];
        for (c, e) in s.coeffs.iter().zip(expect) {
            assert_eq!(*c, RatFunc::from_int(e));
        }
    }

    #[test]
    fn geometric_with_parameter() {
        let s = expand_series(&rf("t/(t-u1)"), Var::T, Direction::AtInfinity, 3).unwrap();
        assert_eq!(s.coeffs[0], rf("1"));
        assert_eq!(s.coeffs[1], rf("u1"));
        assert_eq!(s.coeffs[2], rf("u1^2"));
    }

    #[test]
    fn g_of_inverse_t_for_one_parameter() {
        // (t^-1 - u1)/(t^-1 u1 - 1) = (1 - u1 t)/(u1 - t)
        let f = rf("(t^-1 - u1)/(t^-1*u1 - 1)");
        let s = expand_series(&f, Var::T, Direction::AtInfinity, 2).unwrap();
        assert_eq!(s.coeffs[0], rf("u1"));
        assert_eq!(s.coeffs[1], rf("u1^2 - 1"));
    }

    #[test]
    fn at_zero_and_pole_detection() {
        let s = expand_series(&rf("1/(1-t)"), Var::T, Direction::AtZero, 4).unwrap();
        assert!(s.coeffs.iter().all(|c| *c == RatFunc::one()));
        assert!(expand_series(&rf("1/t"), Var::T, Direction::AtZero, 2).is_err());
        assert!(expand_series(&rf("t"), Var::T, Direction::AtInfinity, 2).is_err());
    }

    #[test]
    fn remainder_has_high_order() {
        let f = rf("(t - u1)*(t - u2)/((t*u1 - 1)*(t*u2-1))");
        let n = 6;
        let s = expand_series(&f, Var::T, Direction::AtZero, n).unwrap();
        let rem = f.sub(&s.resum());
        // rem · den is divisible by t^n.
        let (num, _) = rem.num_den();
        assert!(num.min_exponent(Var::T).unwrap() >= n as i32);
    }
}
