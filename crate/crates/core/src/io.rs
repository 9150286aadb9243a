//! Parameter files.
//!
//! ```json
//! {"r": 2, "rho": "canonical", "q": "q", "u": ["u1", "u2"], "mode": "symbolic",
//!  "delta_overrides": {"1": "u1 + u2 + 1"}}
//! ```
//!
//! Every field except `r` is optional. Expressions use the rational-function text
//! format; `q` and `u` default to the indeterminates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::parse::parse_ratfunc;
use crate::arith::{specialize, Field, RatFunc, Sample, Specialization, Var, MAX_U};
use crate::error::{Error, Result};
use crate::ground::{GroundParams, RhoChoice};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Symbolic,
    Randomized,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamFile {
    pub r: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<String>>,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub delta_overrides: BTreeMap<String, String>,
}

/// A parsed parameter file: q, u, ρ and δ overrides as rational functions.
#[derive(Clone, Debug)]
pub struct ParamSpec {
    pub r: usize,
    pub q: RatFunc,
    pub u: Vec<RatFunc>,
    /// `None` for the canonical choice.
    pub rho: Option<RatFunc>,
    pub overrides: BTreeMap<i64, RatFunc>,
    pub mode: Mode,
}

impl ParamFile {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn parse(&self) -> Result<ParamSpec> {
        if self.r == 0 {
            return Err(Error::Parse("r must be positive".into()));
        }
        let q = match &self.q {
            Some(s) => parse_ratfunc(s)?,
            None => RatFunc::q(),
        };
        let u = match &self.u {
            Some(v) => {
                if v.len() != self.r {
                    return Err(Error::SizeMismatch(format!("{} values of u for r = {}", v.len(), self.r)));
                }
                v.iter().map(|s| parse_ratfunc(s)).collect::<Result<_>>()?
            }
            None => {
                if self.r > MAX_U {
                    return Err(Error::VariableLimit { max: MAX_U });
                }
                (1..=self.r).map(RatFunc::u).collect::<Result<_>>()?
            }
        };
        let rho = match self.rho.as_deref() {
            None | Some("canonical") => None,
            Some(s) => Some(parse_ratfunc(s)?),
        };
        let overrides = self
            .delta_overrides
            .iter()
            .map(|(k, v)| {
                let a: i64 = k.parse().map_err(|_| Error::Parse(format!("bad delta index {k:?}")))?;
                Ok((a, parse_ratfunc(v)?))
            })
            .collect::<Result<_>>()?;
        Ok(ParamSpec { r: self.r, q, u, rho, overrides, mode: self.mode })
    }
}

impl ParamSpec {
    /// Generic parameters for rank r.
    pub fn generic(r: usize) -> Result<Self> {
        ParamFile { r, ..Default::default() }.parse()
    }

    pub fn symbolic(&self) -> Result<GroundParams<RatFunc>> {
        let rho = match &self.rho {
            None => RhoChoice::Canonical,
            Some(x) => RhoChoice::Explicit(x.clone()),
        };
        Ok(GroundParams::new(self.q.clone(), self.u.clone(), rho)?.with_delta_overrides(self.overrides.clone()))
    }

    /// Evaluates every expression at `s`.
    pub fn at<F: Field>(&self, s: &Specialization<F>) -> Result<GroundParams<F>> {
        let q = specialize(&self.q, s)?;
        let u = self.u.iter().map(|x| specialize(x, s)).collect::<Result<_>>()?;
        let rho = match &self.rho {
            None => RhoChoice::Canonical,
            Some(x) => RhoChoice::Explicit(specialize(x, s)?),
        };
        let overrides = self
            .overrides
            .iter()
            .map(|(a, x)| Ok((*a, specialize(x, s)?)))
            .collect::<Result<_>>()?;
        Ok(GroundParams::new(q, u, rho)?.with_delta_overrides(overrides))
    }

    /// Variables q, u_1.. that occur in the expressions.
    pub fn rank_of_variables(&self) -> usize {
        let mut vars: Vec<Var> = self.q.variables();
        for x in self.u.iter().chain(self.rho.iter()).chain(self.overrides.values()) {
            vars.extend(x.variables());
        }
        vars.iter().filter_map(|v| v.u_index()).max().unwrap_or(0)
    }

    /// Draws a random specialization at which the evaluated parameters are
    /// nondegenerate (`u_i ≠ u_j`, `u_i u_j ≠ 1`, `q² ≠ 1`).
    pub fn random_point<F: Sample, R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Result<(Specialization<F>, GroundParams<F>)> {
        let nvars = self.rank_of_variables().max(self.r).min(MAX_U);
        for _ in 0..1000 {
            let s = Specialization::<F>::random(rng, nvars, false)?;
            match self.at(&s) {
                Ok(p) if p.check_nondegenerate().is_ok() => return Ok((s, p)),
                _ => continue,
            }
        }
        Err(Error::DegenerateParameters("no admissible random point found".into()))
    }
}

/// Ground parameters with numeric q, u as constant rational functions, so that
/// t-dependent generating functions can be expanded.
pub fn constant_params(p: &GroundParams<crate::arith::BigRational>) -> Result<GroundParams<RatFunc>> {
    let c = |x: &crate::arith::BigRational| RatFunc::from_rational(x.clone());
    let rho = if p.is_rho_canonical() {
        RhoChoice::Canonical
    } else {
        RhoChoice::Explicit(c(p.rho()))
    };
    let overrides = p.overrides().iter().map(|(a, x)| (*a, c(x))).collect();
    Ok(GroundParams::new(c(p.q()), p.u().iter().map(c).collect(), rho)?.with_delta_overrides(overrides))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_minimal_and_full() {
        let f = ParamFile::from_json(r#"{"r":2}"#).unwrap();
        let s = f.parse().unwrap();
        assert_eq!(s.u, vec![RatFunc::u(1).unwrap(), RatFunc::u(2).unwrap()]);
        assert!(s.symbolic().unwrap().is_rho_canonical());

        let f = ParamFile::from_json(
            r#"{"r":1,"rho":"u1","q":"q","u":["u1"],"mode":"randomized","delta_overrides":{"0":"3"}}"#,
        )
        .unwrap();
        let s = f.parse().unwrap();
        assert_eq!(s.mode, Mode::Randomized);
        let p = s.symbolic().unwrap();
        assert!(p.is_rho_canonical());
        assert_eq!(p.delta(0).unwrap(), RatFunc::from_int(3));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ParamFile::from_json(r#"{"r":2,"u":["u1"]}"#).unwrap().parse().is_err());
        assert!(ParamFile::from_json(r#"{"r":2,"bogus":1}"#).is_err());
        assert!(ParamFile::from_json(r#"{"r":1,"delta_overrides":{"x":"1"}}"#).unwrap().parse().is_err());
    }
}
