//! Multivariate Laurent polynomials with arbitrary-precision integer coefficients.
//!
//! The variable set is fixed: `q`, `u1`..`u6` and `t`. Monomials are dense
//! exponent vectors compared lexicographically in that order; the leading term
//! of a polynomial is its lexicographically largest monomial.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Number of `u` variables available.
pub const MAX_U: usize = 6;
pub(crate) const NVARS: usize = MAX_U + 2;

/// A variable of the coefficient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u8);

impl Var {
    pub const Q: Var = Var(0);
    pub const T: Var = Var((MAX_U + 1) as u8);

    /// The parameter `u_j`, 1-based.
    pub fn u(j: usize) -> Result<Var> {
        if j == 0 || j > MAX_U {
            return Err(Error::VariableLimit { max: MAX_U });
        }
        Ok(Var(j as u8))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// `j` for `u_j`, `None` for q and t.
    pub fn u_index(self) -> Option<usize> {
        (1..=MAX_U).contains(&(self.0 as usize)).then_some(self.0 as usize)
    }

    pub(crate) fn from_index(i: usize) -> Var {
        debug_assert!(i < NVARS);
        Var(i as u8)
    }

    pub fn name(self) -> String {
        match self.0 as usize {
            0 => "q".to_string(),
            i if i == MAX_U + 1 => "t".to_string(),
            i => format!("u{i}"),
        }
    }

    pub fn parse(s: &str) -> Option<Var> {
        match s {
            "q" => Some(Var::Q),
            "t" => Some(Var::T),
            _ => {
                let j: usize = s.strip_prefix('u')?.parse().ok()?;
                Var::u(j).ok()
            }
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A Laurent monomial: one signed exponent per variable.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub(crate) [i32; NVARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; NVARS])
    }

    pub fn var(v: Var, e: i32) -> Self {
        let mut m = Self::one();
        m.0[v.index()] = e;
        m
    }

    pub fn exponent(&self, v: Var) -> i32 {
        self.0[v.index()]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut m = *self;
        for (a, b) in m.0.iter_mut().zip(o.0.iter()) {
            *a += b;
        }
        m
    }

    pub fn inv(&self) -> Monomial {
        let mut m = *self;
        for a in m.0.iter_mut() {
            *a = -*a;
        }
        m
    }

    pub fn pow(&self, k: i32) -> Monomial {
        let mut m = *self;
        for a in m.0.iter_mut() {
            *a *= k;
        }
        m
    }

    /// Componentwise minimum.
    pub fn gcd(&self, o: &Monomial) -> Monomial {
        let mut m = *self;
        for (a, b) in m.0.iter_mut().zip(o.0.iter()) {
            *a = (*a).min(*b);
        }
        m
    }

    /// Splits into (positive part, negative part) so that `self = pos / neg`.
    pub fn split_signs(&self) -> (Monomial, Monomial) {
        let mut pos = Self::one();
        let mut neg = Self::one();
        for i in 0..NVARS {
            let e = self.0[i];
            if e > 0 {
                pos.0[i] = e;
            } else {
                neg.0[i] = -e;
            }
        }
        (pos, neg)
    }

    pub fn vars(&self) -> impl Iterator<Item = (Var, i32)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (Var::from_index(i), e))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, e) in self.vars() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// A Laurent polynomial over the integers.
///
/// Terms are kept sorted by decreasing monomial with no zero coefficients, so
/// structural equality is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: Vec<(Monomial, BigInt)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn from_i64(c: i64) -> Self {
        Self::constant(BigInt::from(c))
    }

    pub fn monomial(m: Monomial, c: BigInt) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Self { terms: vec![(m, c)] }
        }
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(Monomial::var(v, 1), BigInt::one())
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates and
    /// dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(terms: I) -> Self {
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_default() += c;
        }
        Self::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, BigInt>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Self { terms }
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// If this is a single term, returns it.
    pub fn as_term(&self) -> Option<(&Monomial, &BigInt)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((m, c)),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, BigInt)> {
        self.terms.first()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &o.terms[j];
            match ma.cmp(mb) {
                std::cmp::Ordering::Greater => {
                    out.push((*ma, ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((*mb, cb.clone()));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = ca + cb;
                    if !c.is_zero() {
                        out.push((*ma, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        Self { terms: out }
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if let Some((m, c)) = o.as_term() {
            return self.mul_term(m, c);
        }
        if let Some((m, c)) = self.as_term() {
            return o.mul_term(m, c);
        }
        let mut acc: HashMap<Monomial, BigInt> =
            HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                *acc.entry(ma.mul(mb)).or_default() += ca * cb;
            }
        }
        Self::from_map(acc)
    }

    /// Multiplication by a single term; monomial multiplication preserves order.
    pub fn mul_term(&self, m: &Monomial, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(mm, cc)| (mm.mul(m), cc * c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        self.mul_term(&Monomial::one(), c)
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Componentwise minimum exponent over all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        match it.next() {
            None => Monomial::one(),
            Some((m0, _)) => it.fold(*m0, |acc, (m, _)| acc.gcd(m)),
        }
    }

    /// Non-negative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides exactly by an integer; panics in debug if not exact.
    pub fn div_exact_int(&self, c: &BigInt) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, cc)| {
                    debug_assert!((cc % c).is_zero());
                    (*m, cc / c)
                })
                .collect(),
        }
    }

    /// Writes `self = unit · monomial · primitive` where `primitive` has
    /// integer content 1, no monomial factor, and positive leading coefficient.
    /// Returns `(unit, monomial, primitive)`.
    pub fn normalize(&self) -> (BigInt, Monomial, LaurentPoly) {
        if self.is_zero() {
            return (BigInt::zero(), Monomial::one(), Self::zero());
        }
        let mono = self.monomial_content();
        let mut content = self.content();
        if self.terms[0].1.is_negative() {
            content = -content;
        }
        let inv = mono.inv();
        let prim = Self {
            terms: self.terms.iter().map(|(m, c)| (m.mul(&inv), c / &content)).collect(),
        };
        (content, mono, prim)
    }

    /// Exact division by `d` in the Laurent polynomial ring, or `None` if `d`
    /// does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some((m, c)) = d.as_term() {
            if self.terms.iter().any(|(_, cc)| !(cc % c).is_zero()) {
                return None;
            }
            let inv = m.inv();
            return Some(Self {
                terms: self.terms.iter().map(|(mm, cc)| (mm.mul(&inv), cc / c)).collect(),
            });
        }
        // Shift both to genuine polynomials without monomial factors; the
        // quotient monomial is then recovered separately.
        let (dm, dp) = (d.monomial_content(), d.shift(&d.monomial_content().inv()));
        let sm = self.monomial_content();
        let num = self.shift(&sm.inv());
        let (lm, lc) = dp.terms[0].clone();
        let mut rem: std::collections::BTreeMap<Monomial, BigInt> =
            num.terms.into_iter().collect();
        let mut quotient: Vec<(Monomial, BigInt)> = Vec::new();
        while let Some((m, c)) = rem.iter().next_back().map(|(m, c)| (*m, c.clone())) {
            let qm = m.mul(&lm.inv());
            if qm.0.iter().any(|&e| e < 0) {
                return None;
            }
            let (qc, r) = c.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            for (dmm, dc) in &dp.terms {
                let key = dmm.mul(&qm);
                let entry = rem.entry(key).or_default();
                *entry -= &qc * dc;
                if entry.is_zero() {
                    rem.remove(&key);
                }
            }
            quotient.push((qm, qc));
        }
        let shift = sm.mul(&dm.inv());
        quotient.iter_mut().for_each(|(m, _)| *m = m.mul(&shift));
        quotient.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Some(Self { terms: quotient })
    }

    /// Multiplies every monomial by `m`.
    pub fn shift(&self, m: &Monomial) -> Self {
        Self {
            terms: self.terms.iter().map(|(mm, c)| (mm.mul(m), c.clone())).collect(),
        }
    }

    /// Maximum exponent of `v` among the terms (`None` for zero).
    pub fn max_exponent(&self, v: Var) -> Option<i32> {
        self.terms.iter().map(|(m, _)| m.exponent(v)).max()
    }

    pub fn min_exponent(&self, v: Var) -> Option<i32> {
        self.terms.iter().map(|(m, _)| m.exponent(v)).min()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.iter().any(|(m, _)| m.exponent(v) != 0)
    }

    /// Variables with a nonzero exponent somewhere.
    pub fn variables(&self) -> Vec<Var> {
        (0..NVARS)
            .map(Var::from_index)
            .filter(|v| self.contains_var(*v))
            .collect()
    }

    /// Groups by the exponent of `v`: `self = Σ_k coeff_k · v^k`, with `v`
    /// absent from every `coeff_k`.
    pub fn split_by(&self, v: Var) -> std::collections::BTreeMap<i32, LaurentPoly> {
        let mut groups: std::collections::BTreeMap<i32, Vec<(Monomial, BigInt)>> =
            Default::default();
        for (m, c) in &self.terms {
            let k = m.exponent(v);
            let mut rest = *m;
            rest.0[v.index()] = 0;
            groups.entry(k).or_default().push((rest, c.clone()));
        }
        groups
            .into_iter()
            .map(|(k, ts)| (k, LaurentPoly { terms: ts }))
            .collect()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> LaurentPoly {
        LaurentPoly::var(Var::Q)
    }
    fn qi() -> LaurentPoly {
        LaurentPoly::monomial(Monomial::var(Var::Q, -1), BigInt::one())
    }
    fn u(j: usize) -> LaurentPoly {
        LaurentPoly::var(Var::u(j).unwrap())
    }

    #[test]
    fn difference_of_squares() {
        let lhs = q().add(&qi()).mul(&q().sub(&qi()));
        let rhs = q().mul(&q()).sub(&qi().mul(&qi()));
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.to_string(), "q^2 - q^-2");
    }

    #[test]
    fn zero_absorbs_and_inverses_cancel() {
        let p = q().add(&u(1)).pow(3);
        assert!(p.mul(&LaurentPoly::zero()).is_zero());
        let a = u(1).sub(&u(2));
        let b = u(2).sub(&u(1));
        assert!(a.add(&b).is_zero());
    }

    #[test]
    fn exact_division() {
        let a = q().add(&u(1));
        let b = u(2).sub(&qi());
        let prod = a.mul(&b).mul(&a);
        assert_eq!(prod.div_exact(&a).unwrap(), a.mul(&b));
        assert_eq!(prod.div_exact(&b).unwrap(), a.mul(&a));
        assert!(prod.div_exact(&u(1).add(&LaurentPoly::one())).is_none());
        assert!(a.div_exact(&LaurentPoly::from_i64(2)).is_none());
    }

    #[test]
    fn normalization_strips_monomial_and_content() {
        // -6 q^-1 + 6 q  ->  unit 6? leading term q has coefficient +6
        let p = q().sub(&qi()).scale(&BigInt::from(6));
        let (c, m, prim) = p.normalize();
        assert_eq!(c, BigInt::from(6));
        assert_eq!(m, Monomial::var(Var::Q, -1));
        assert_eq!(prim.to_string(), "q^2 - 1");
        let (c2, _, prim2) = p.neg().normalize();
        assert_eq!(c2, BigInt::from(-6));
        assert_eq!(prim2, prim);
    }

    #[test]
    fn var_names_round_trip() {
        for v in [Var::Q, Var::T, Var::u(1).unwrap(), Var::u(6).unwrap()] {
            assert_eq!(Var::parse(&v.name()), Some(v));
        }
        assert!(Var::u(7).is_err());
    }
}
