//! Elements of the fraction field ℚ(q, u₁, …, u₆, t).
//!
//! A [`RatFunc`] is kept in partially factored form
//!
//! ```text
//!     c · m · ∏ fᵢ^eᵢ
//! ```
//!
//! with `c` a nonzero rational, `m` a Laurent monomial and each `fᵢ` a
//! primitive polynomial (no monomial factor, integer content 1, positive
//! leading coefficient) raised to a nonzero integer power. Products and
//! quotients only merge exponents. A sum pulls out the common part of both
//! summands, expands what is left, and tries to cancel the new numerator
//! against the denominator factors by exact division. No multivariate gcd is
//! ever computed; the factors are opaque keys, so equality is decided by
//! subtraction, which is equivalent to cross-multiplication.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::Field;
use super::poly::{LaurentPoly, Monomial, Var};
use crate::error::{Error, Result};

type FactorMap = BTreeMap<Arc<LaurentPoly>, i32>;

#[derive(Clone, Debug)]
pub struct RatFunc {
    coeff: BigRational,
    mono: Monomial,
    factors: FactorMap,
}

impl RatFunc {
    pub fn zero() -> Self {
        Self {
            coeff: <BigRational as Zero>::zero(),
            mono: Monomial::one(),
            factors: FactorMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self {
            coeff: c,
            mono: Monomial::one(),
            factors: FactorMap::new(),
        }
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(Monomial::var(v, 1))
    }

    pub fn monomial(m: Monomial) -> Self {
        Self {
            coeff: <BigRational as One>::one(),
            mono: m,
            factors: FactorMap::new(),
        }
    }

    /// The parameter `u_j` (1-based).
    pub fn u(j: usize) -> Result<Self> {
        Ok(Self::var(Var::u(j)?))
    }

    pub fn q() -> Self {
        Self::var(Var::Q)
    }

    pub fn t() -> Self {
        Self::var(Var::T)
    }

    pub fn from_poly(p: &LaurentPoly) -> Self {
        if p.is_zero() {
            return Self::zero();
        }
        let (unit, mono, prim) = p.normalize();
        let mut factors = FactorMap::new();
        if !prim.is_one() {
            factors.insert(Arc::new(prim), 1);
        }
        Self {
            coeff: BigRational::from_integer(unit),
            mono,
            factors,
        }
    }

    pub fn is_zero(&self) -> bool {
        Zero::is_zero(&self.coeff)
    }

    /// True when the value is a rational constant times a monomial.
    pub fn is_monomial_term(&self) -> bool {
        self.factors.is_empty()
    }

    /// Number of distinct stored factors (a size measure).
    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut factors = self.factors.clone();
        merge_into(&mut factors, &o.factors, 1);
        Self {
            coeff: &self.coeff * &o.coeff,
            mono: self.mono.mul(&o.mono),
            factors,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self {
            coeff: self.coeff.recip(),
            mono: self.mono.inv(),
            factors: self.factors.iter().map(|(k, e)| (k.clone(), -e)).collect(),
        })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn neg(&self) -> Self {
        let mut r = self.clone();
        r.coeff = -r.coeff;
        r
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        if e == 0 {
            return Ok(Self::one());
        }
        if self.is_zero() {
            return if e > 0 { Ok(Self::zero()) } else { Err(Error::DivisionByZero) };
        }
        let c = if e > 0 {
            num_traits::pow(self.coeff.clone(), e as usize)
        } else {
            num_traits::pow(self.coeff.recip(), (-e) as usize)
        };
        Ok(Self {
            coeff: c,
            mono: self.mono.pow(e),
            factors: self.factors.iter().map(|(k, x)| (k.clone(), x * e)).collect(),
        })
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        // Common part: minimal exponent of every factor and variable.
        let mono = self.mono.gcd(&o.mono);
        let mut common = FactorMap::new();
        for (k, &ea) in &self.factors {
            let eb = o.factors.get(k).copied().unwrap_or(0);
            let e = ea.min(eb);
            if e != 0 {
                common.insert(k.clone(), e);
            }
        }
        for (k, &eb) in &o.factors {
            if !self.factors.contains_key(k) && eb < 0 {
                common.insert(k.clone(), eb);
            }
        }
        let coeff = rational_gcd(&self.coeff, &o.coeff);
        // Both cofactors are genuine polynomials.
        let pa = self.cofactor_poly(&coeff, &mono, &common);
        let pb = o.cofactor_poly(&coeff, &mono, &common);
        let s = pa.add(&pb);
        if s.is_zero() {
            return Self::zero();
        }
        let (unit, smono, mut prim) = s.normalize();
        let mut factors = common;
        // Cancel the new numerator against denominator factors.
        let dens: Vec<Arc<LaurentPoly>> = factors
            .iter()
            .filter(|(_, &e)| e < 0)
            .map(|(k, _)| k.clone())
            .collect();
        for k in dens {
            while !prim.is_one() && factors.get(&k).is_some_and(|&e| e < 0) {
                match prim.div_exact(&k) {
                    Some(quot) => {
                        prim = quot;
                        bump(&mut factors, &k, 1);
                    }
                    None => break,
                }
            }
        }
        // div_exact of primitive by primitive stays primitive with positive
        // leading coefficient, but re-normalize defensively against sign drift.
        let (u2, m2, prim) = prim.normalize();
        if !prim.is_one() {
            bump(&mut factors, &Arc::new(prim), 1);
        }
        Self {
            coeff: coeff * BigRational::from_integer(unit * u2),
            mono: mono.mul(&smono).mul(&m2),
            factors,
        }
    }

    /// Expands `self / (coeff · mono · ∏ common)` where the quotient is known
    /// to be a polynomial with integer coefficients up to the rational factor.
    fn cofactor_poly(&self, coeff: &BigRational, mono: &Monomial, common: &FactorMap) -> LaurentPoly {
        let c = &self.coeff / coeff;
        debug_assert!(c.is_integer());
        let mut p = LaurentPoly::monomial(self.mono.mul(&mono.inv()), c.to_integer());
        for (k, &e) in &self.factors {
            let rem = e - common.get(k).copied().unwrap_or(0);
            debug_assert!(rem >= 0);
            if rem > 0 {
                p = p.mul(&k.pow(rem as u32));
            }
        }
        for (k, &e) in common {
            if !self.factors.contains_key(k) {
                debug_assert!(e < 0);
                p = p.mul(&k.pow((-e) as u32));
            }
        }
        p
    }

    /// Expanded numerator and denominator: the denominator is a primitive
    /// polynomial with positive leading term and no monomial factor, and the
    /// pair has integer content 1.
    pub fn num_den(&self) -> (LaurentPoly, LaurentPoly) {
        if self.is_zero() {
            return (LaurentPoly::zero(), LaurentPoly::one());
        }
        let mut num = LaurentPoly::monomial(self.mono, self.coeff.numer().clone());
        let mut den = LaurentPoly::constant(self.coeff.denom().clone());
        for (k, &e) in &self.factors {
            if e > 0 {
                num = num.mul(&k.pow(e as u32));
            } else {
                den = den.mul(&k.pow((-e) as u32));
            }
        }
        (num, den)
    }

    /// Evaluates at values for every variable occurring, in any field.
    pub fn eval<F: Field>(&self, value: &dyn Fn(Var) -> Option<F>) -> Result<F> {
        if self.is_zero() {
            return Ok(F::zero());
        }
        let mut num = F::from_bigint(self.coeff.numer());
        let mut den = F::from_bigint(self.coeff.denom());
        num = num.mul(&eval_monomial(&self.mono, value)?);
        for (k, &e) in &self.factors {
            let v = eval_poly(k, value)?;
            if e > 0 {
                num = num.mul(&v.pow(e as i64)?);
            } else {
                den = den.mul(&v.pow((-e) as i64)?);
            }
        }
        if den.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        num.div(&den)
    }

    /// Substitutes `v ↦ value` symbolically.
    pub fn substitute(&self, v: Var, value: &RatFunc) -> Result<RatFunc> {
        self.eval(&|w| Some(if w == v { value.clone() } else { RatFunc::var(w) }))
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.mono.vars().map(|(v, _)| v).collect();
        for k in self.factors.keys() {
            vs.extend(k.variables());
        }
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.mono.exponent(v) != 0 || self.factors.keys().any(|k| k.contains_var(v))
    }

    /// Exact rational value when no variable occurs.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.variables().is_empty() {
            self.eval::<BigRational>(&|_| None).ok()
        } else {
            None
        }
    }

    pub fn equals(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }
}

fn bump(map: &mut FactorMap, k: &Arc<LaurentPoly>, by: i32) {
    let e = map.entry(k.clone()).or_insert(0);
    *e += by;
    if *e == 0 {
        map.remove(k);
    }
}

fn merge_into(dst: &mut FactorMap, src: &FactorMap, sign: i32) {
    for (k, &e) in src {
        bump(dst, k, sign * e);
    }
}

/// gcd of two nonzero rationals: gcd of numerators over lcm of denominators.
fn rational_gcd(a: &BigRational, b: &BigRational) -> BigRational {
    let n = a.numer().gcd(b.numer());
    let d = a.denom().lcm(b.denom());
    BigRational::new(n, d)
}

fn eval_monomial<F: Field>(m: &Monomial, value: &dyn Fn(Var) -> Option<F>) -> Result<F> {
    let mut acc = F::one();
    for (v, e) in m.vars() {
        let x = value(v).ok_or(Error::MissingAssignment(v))?;
        if e < 0 && x.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        acc = acc.mul(&x.pow(e as i64)?);
    }
    Ok(acc)
}

/// Evaluates a Laurent polynomial; negative powers of a vanishing variable are
/// reported as a pole.
pub fn eval_poly<F: Field>(p: &LaurentPoly, value: &dyn Fn(Var) -> Option<F>) -> Result<F> {
    let vars = p.variables();
    let mut vals: Vec<(Var, F, Option<F>)> = Vec::with_capacity(vars.len());
    for v in vars {
        let x = value(v).ok_or(Error::MissingAssignment(v))?;
        let xi = x.inv().ok();
        vals.push((v, x, xi));
    }
    let mut acc = F::zero();
    for (m, c) in p.terms() {
        let mut term = F::from_bigint(c);
        for (v, x, xi) in &vals {
            let e = m.exponent(*v);
            if e > 0 {
                term = term.mul(&x.pow(e as i64)?);
            } else if e < 0 {
                let xi = xi.as_ref().ok_or(Error::PoleAtPoint)?;
                term = term.mul(&xi.pow((-e) as i64)?);
            }
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn from_bigint(n: &BigInt) -> Self {
        RatFunc::from_rational(BigRational::from_integer(n.clone()))
    }
    fn from_i64(n: i64) -> Self {
        RatFunc::from_int(n)
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RatFunc::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RatFunc::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RatFunc::mul(self, o)
    }
    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }
    fn inv(&self) -> Result<Self> {
        RatFunc::inv(self)
    }
    fn pow(&self, e: i64) -> Result<Self> {
        RatFunc::pow(self, e as i32)
    }
    fn mode_name() -> &'static str {
        "symbolic"
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl From<&LaurentPoly> for RatFunc {
    fn from(p: &LaurentPoly) -> Self {
        RatFunc::from_poly(p)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl std::ops::$tr<&RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $method(self, o: &RatFunc) -> RatFunc {
                $body(self, o)
            }
        }
        impl std::ops::$tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $method(self, o: RatFunc) -> RatFunc {
                $body(&self, &o)
            }
        }
    };
}

forward_binop!(Add, add, RatFunc::add);
forward_binop!(Sub, sub, RatFunc::sub);
forward_binop!(Mul, mul, RatFunc::mul);

impl std::ops::Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc::neg(&self)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = self.num_den();
        let wrap = |p: &LaurentPoly| {
            if p.len() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        if den.is_one() {
            write!(f, "{num}")
        } else {
            write!(f, "{}/{}", wrap(&num), wrap(&den))
        }
    }
}

impl std::str::FromStr for RatFunc {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        super::parse::parse_ratfunc(s)
    }
}

/// Sign of the leading coefficient of a nonzero polynomial.
pub fn leading_sign(p: &LaurentPoly) -> i32 {
    match p.leading() {
        Some((_, c)) if c.is_negative() => -1,
        Some(_) => 1,
        None => 0,
    }
}
