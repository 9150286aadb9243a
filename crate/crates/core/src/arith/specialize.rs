//! Evaluation homomorphisms from ℚ(q, u, t) into a concrete field.

use std::collections::BTreeMap;

use super::field::{Field, Sample};
use super::poly::Var;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

/// An assignment of field values to variables.
///
/// Values for `q` and every `u_j` must be nonzero, and `q² ≠ 1`.
#[derive(Clone, Debug)]
pub struct Specialization<F: Field> {
    values: BTreeMap<Var, F>,
}

impl<F: Field> Specialization<F> {
    pub fn new(values: BTreeMap<Var, F>) -> Result<Self> {
        for (v, x) in &values {
            if *v == Var::T {
                continue;
            }
            if x.is_zero() {
                return Err(Error::InvalidSpecialization(format!("{v} = 0")));
            }
            if *v == Var::Q && x.mul(x).is_one() {
                return Err(Error::InvalidSpecialization("q^2 = 1".into()));
            }
        }
        Ok(Self { values })
    }

    pub fn get(&self, v: Var) -> Option<&F> {
        self.values.get(&v)
    }

    pub fn with(mut self, v: Var, x: F) -> Result<Self> {
        self.values.insert(v, x);
        Self::new(self.values)
    }

    pub fn values(&self) -> &BTreeMap<Var, F> {
        &self.values
    }

    /// Draws q, u1..ur (and t when `with_t`) at random, rejecting points with
    /// `u_i = u_j`, `u_i u_j = 1` or `q² = 1`.
    pub fn random<R: rand::Rng + ?Sized>(rng: &mut R, r: usize, with_t: bool) -> Result<Self>
    where
        F: Sample,
    {
        loop {
            let q = F::sample(rng);
            let us: Vec<F> = (0..r).map(|_| F::sample(rng)).collect();
            let mut ok = !q.mul(&q).is_one();
            for i in 0..r {
                for j in 0..r {
                    if i != j && us[i].equals(&us[j]) {
                        ok = false;
                    }
                    if us[i].mul(&us[j]).is_one() {
                        ok = false;
                    }
                }
            }
            if !ok {
                continue;
            }
            let mut values = BTreeMap::new();
            values.insert(Var::Q, q);
            for (j, x) in us.into_iter().enumerate() {
                values.insert(Var::u(j + 1)?, x);
            }
            if with_t {
                values.insert(Var::T, F::sample(rng));
            }
            return Self::new(values);
        }
    }
}

/// Evaluates `f` at `s`.
pub fn specialize<F: Field>(f: &RatFunc, s: &Specialization<F>) -> Result<F> {
    f.eval(&|v| s.get(v).cloned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse::parse_ratfunc;
    use num_rational::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn spec(pairs: &[(&str, i64)]) -> Specialization<BigRational> {
        Specialization::new(
            pairs
                .iter()
                .map(|(v, x)| (Var::parse(v).unwrap(), rat(*x, 1)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn direct_evaluation() {
        let f = parse_ratfunc("q - q^-1").unwrap();
        assert_eq!(specialize(&f, &spec(&[("q", 2)])).unwrap(), rat(3, 2));
        let g = parse_ratfunc("(u1*u2-1)/(u1-u2)").unwrap();
        assert_eq!(specialize(&g, &spec(&[("u1", 3), ("u2", 2)])).unwrap(), rat(5, 1));
    }

    #[test]
    fn pole_and_missing() {
        let f = parse_ratfunc("1/(u1-u2)").unwrap();
        assert_eq!(
            specialize(&f, &spec(&[("u1", 2), ("u2", 2)])),
            Err(Error::PoleAtPoint)
        );
        assert!(matches!(
            specialize(&f, &spec(&[("u1", 2)])),
            Err(Error::MissingAssignment(_))
        ));
    }

    #[test]
    fn rejects_invalid_points() {
        let mut m = BTreeMap::new();
        m.insert(Var::Q, rat(-1, 1));
        assert!(Specialization::new(m).is_err());
        let mut m = BTreeMap::new();
        m.insert(Var::u(1).unwrap(), rat(0, 1));
        assert!(Specialization::new(m).is_err());
    }
}
