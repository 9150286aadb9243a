//! ℤ_r-Brauer diagrams: composition with loop removal, inclusion, conditional
//! expectation, trace and Gram matrices.
//!
//! Endpoints are numbered `0..n` along the top and `n..2n` along the bottom. Each
//! endpoint records its partner and the label of the strand read leaving it, so the
//! two ends of a strand carry opposite labels mod r.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{Field, Matrix};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZrBrauerDiagram {
    n: usize,
    r: u32,
    partner: Vec<usize>,
    label: Vec<u32>,
}

/// A strand `from → to` with the label read along that orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Strand {
    pub from: usize,
    pub to: usize,
    pub label: i64,
}

fn modr(k: i64, r: u32) -> u32 {
    k.rem_euclid(r as i64) as u32
}

impl ZrBrauerDiagram {
    /// Builds the canonical diagram from strands given in any orientation.
    pub fn canonicalize(n: usize, r: u32, strands: &[Strand]) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidMatching("r must be positive".into()));
        }
        let mut partner = vec![usize::MAX; 2 * n];
        let mut label = vec![0; 2 * n];
        for s in strands {
            if s.from >= 2 * n || s.to >= 2 * n || s.from == s.to {
                return Err(Error::InvalidMatching(format!("bad strand {} -> {}", s.from, s.to)));
            }
            if partner[s.from] != usize::MAX || partner[s.to] != usize::MAX {
                return Err(Error::InvalidMatching("endpoint used twice".into()));
            }
            partner[s.from] = s.to;
            partner[s.to] = s.from;
            label[s.from] = modr(s.label, r);
            label[s.to] = modr(-s.label, r);
        }
        if partner.contains(&usize::MAX) {
            return Err(Error::InvalidMatching("not every endpoint is matched".into()));
        }
        Ok(Self { n, r, partner, label })
    }

    pub fn identity(n: usize, r: u32) -> Self {
        let strands: Vec<Strand> = (0..n).map(|i| Strand { from: i, to: n + i, label: 0 }).collect();
        Self::canonicalize(n, r, &strands).expect("identity is a matching")
    }

    /// The vertical diagram of `(σ, k)`: top i joined to bottom σ(i) with label k_i.
    pub fn vertical(r: u32, perm: &[usize], labels: &[i64]) -> Result<Self> {
        let n = perm.len();
        let strands: Vec<Strand> = (0..n)
            .map(|i| Strand { from: i, to: n + perm[i], label: labels[i] })
            .collect();
        Self::canonicalize(n, r, &strands)
    }

    /// `e_i` (1-based), joining top i, i+1 and bottom i, i+1.
    pub fn e(n: usize, r: u32, i: usize) -> Result<Self> {
        if i == 0 || i >= n {
            return Err(Error::IndexOutOfRange { index: i as i64, max: n as i64 - 1 });
        }
        let mut strands = vec![
            Strand { from: i - 1, to: i, label: 0 },
            Strand { from: n + i - 1, to: n + i, label: 0 },
        ];
        for k in (0..n).filter(|&k| k + 1 != i && k != i) {
            strands.push(Strand { from: k, to: n + k, label: 0 });
        }
        Self::canonicalize(n, r, &strands)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Strands oriented from their smaller endpoint, in endpoint order.
    pub fn strands(&self) -> Vec<Strand> {
        (0..2 * self.n)
            .filter(|&e| e < self.partner[e])
            .map(|e| Strand { from: e, to: self.partner[e], label: self.label[e] as i64 })
            .collect()
    }

    pub fn partner(&self, e: usize) -> usize {
        self.partner[e]
    }

    pub fn label_from(&self, e: usize) -> u32 {
        self.label[e]
    }

    pub fn is_vertical(&self) -> bool {
        (0..self.n).all(|i| self.partner[i] >= self.n)
    }

    fn check_same(&self, o: &Self) -> Result<()> {
        if self.n != o.n || self.r != o.r {
            return Err(Error::SizeMismatch(format!(
                "diagrams with (n, r) = ({}, {}) and ({}, {})",
                self.n, self.r, o.n, o.r
            )));
        }
        Ok(())
    }

    /// Top–bottom reflection with every label inverted.
    pub fn flip(&self) -> Self {
        let n = self.n;
        let m = |e: usize| if e < n { e + n } else { e - n };
        let mut partner = vec![0; 2 * n];
        let mut label = vec![0; 2 * n];
        for e in 0..2 * n {
            partner[m(e)] = m(self.partner[e]);
            label[m(e)] = modr(-(self.label[e] as i64), self.r);
        }
        Self { n, r: self.r, partner, label }
    }

    /// Adds a vertical label-0 strand on the right.
    pub fn include(&self) -> Self {
        let n = self.n;
        let m = |e: usize| if e < n { e } else { e + 1 };
        let mut partner = vec![0; 2 * n + 2];
        let mut label = vec![0; 2 * n + 2];
        for e in 0..2 * n {
            partner[m(e)] = m(self.partner[e]);
            label[m(e)] = self.label[e];
        }
        partner[n] = 2 * n + 1;
        partner[2 * n + 1] = n;
        Self { n: n + 1, r: self.r, partner, label }
    }

    /// Index of the loop parameter for a loop labeled ±k.
    pub fn theta_index(&self, k: u32) -> usize {
        let k = k % self.r;
        k.min(self.r - k) as usize
    }

    pub fn num_thetas(r: u32) -> usize {
        r as usize / 2 + 1
    }

    /// `ab`: b stacked over a. Returns the loop counts `m_j` and the reduced diagram.
    pub fn compose(a: &Self, b: &Self) -> Result<(Vec<u32>, Self)> {
        a.check_same(b)?;
        let n = a.n;
        let r = a.r;
        // Glued endpoints: side 0 is a, side 1 is b; a.top(i) meets b.bot(i).
        let result_end = |side: usize, e: usize| -> Option<usize> {
            match (side, e < n) {
                (1, true) => Some(e),
                (0, false) => Some(e),
                _ => None,
            }
        };
        let d = [a, b];
        let mut partner = vec![0; 2 * n];
        let mut label = vec![0; 2 * n];
        let mut seen = vec![false; n];
        let walk = |mut side: usize, mut e: usize, seen: &mut Vec<bool>| -> (usize, i64) {
            let mut sum = 0i64;
            loop {
                let f = d[side].partner[e];
                sum += d[side].label[e] as i64;
                if let Some(out) = result_end(side, f) {
                    return (out, sum);
                }
                if side == 1 {
                    seen[f - n] = true;
                    side = 0;
                    e = f - n;
                } else {
                    seen[f] = true;
                    side = 1;
                    e = f + n;
                }
            }
        };
        for s in 0..2 * n {
            let side = if s < n { 1 } else { 0 };
            let (t, k) = walk(side, s, &mut seen);
            partner[s] = t;
            label[s] = modr(k, r);
        }
        let mut loops = vec![0u32; Self::num_thetas(r)];
        for j in 0..n {
            if seen[j] {
                continue;
            }
            let mut side = 0;
            let mut e = j;
            let mut sum = 0i64;
            loop {
                let f = d[side].partner[e];
                sum += d[side].label[e] as i64;
                let (ns, ne, mid) = if side == 0 { (1, f + n, f) } else { (0, f - n, f - n) };
                seen[mid] = true;
                side = ns;
                e = ne;
                if side == 0 && e == j {
                    break;
                }
            }
            loops[a.theta_index(modr(sum, r))] += 1;
        }
        Ok((loops, Self { n, r, partner, label }))
    }

    /// Joins top(n) and bottom(n) by a label-0 strand. Returns the loop index if a
    /// closed loop is formed, and the (n−1)-strand diagram.
    pub fn close_last(&self) -> (Option<usize>, Self) {
        let n = self.n;
        assert!(n >= 1, "closing needs a strand");
        let (t, bt) = (n - 1, 2 * n - 1);
        let m = |e: usize| if e < n - 1 { e } else { e - 1 };
        let mut partner = vec![0; 2 * n - 2];
        let mut label = vec![0; 2 * n - 2];
        for e in (0..2 * n).filter(|&e| e != t && e != bt) {
            let mut f = self.partner[e];
            let mut k = self.label[e] as i64;
            if f == t || f == bt {
                let g = if f == t { bt } else { t };
                k += self.label[g] as i64;
                f = self.partner[g];
            }
            partner[m(e)] = m(f);
            label[m(e)] = modr(k, self.r);
        }
        let lp = (self.partner[t] == bt).then(|| self.theta_index(self.label[t]));
        (lp, Self { n: n - 1, r: self.r, partner, label })
    }

    /// Loop counts from closing every strand i at once: ε(d) = ϑ₀⁻ⁿ ∏ ϑ_j^{m_j}.
    pub fn closure_loops(&self) -> Vec<u32> {
        let n = self.n;
        let mut seen = vec![false; 2 * n];
        let mut loops = vec![0u32; Self::num_thetas(self.r)];
        for s in 0..2 * n {
            if seen[s] {
                continue;
            }
            let mut e = s;
            let mut sum = 0i64;
            loop {
                seen[e] = true;
                let f = self.partner[e];
                seen[f] = true;
                sum += self.label[e] as i64;
                e = if f < n { f + n } else { f - n };
                if e == s {
                    break;
                }
            }
            loops[self.theta_index(modr(sum, self.r))] += 1;
        }
        loops
    }

    /// A uniformly random diagram: a random perfect matching and random labels.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize, r: u32) -> Self {
        let mut pts: Vec<usize> = (0..2 * n).collect();
        let mut strands = Vec::with_capacity(n);
        while !pts.is_empty() {
            let a = pts.swap_remove(0);
            let b = pts.swap_remove(rng.gen_range(0..pts.len()));
            strands.push(Strand { from: a, to: b, label: rng.gen_range(0..r) as i64 });
        }
        Self::canonicalize(n, r, &strands).expect("random matching")
    }

    pub fn endpoint_name(&self, e: usize) -> String {
        if e < self.n {
            format!("t{}", e + 1)
        } else {
            format!("b{}", e - self.n + 1)
        }
    }

    fn parse_endpoint(n: usize, s: &str) -> Result<usize> {
        let bad = || Error::Parse(format!("bad endpoint {s:?}"));
        let (side, idx) = s.split_at(1);
        let i: usize = idx.parse().map_err(|_| bad())?;
        if i == 0 || i > n {
            return Err(bad());
        }
        match side {
            "t" => Ok(i - 1),
            "b" => Ok(n + i - 1),
            _ => Err(bad()),
        }
    }

    pub fn to_json(&self) -> DiagramJson {
        DiagramJson {
            n: self.n,
            r: self.r,
            strands: self
                .strands()
                .into_iter()
                .map(|s| StrandJson {
                    ends: [self.endpoint_name(s.from), self.endpoint_name(s.to)],
                    label: s.label,
                })
                .collect(),
        }
    }

    pub fn from_json(j: &DiagramJson) -> Result<Self> {
        let strands = j
            .strands
            .iter()
            .map(|s| {
                Ok(Strand {
                    from: Self::parse_endpoint(j.n, &s.ends[0])?,
                    to: Self::parse_endpoint(j.n, &s.ends[1])?,
                    label: s.label,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if strands.len() != j.n {
            return Err(Error::InvalidMatching(format!("{} strands for n = {}", strands.len(), j.n)));
        }
        Self::canonicalize(j.n, j.r, &strands)
    }
}

impl fmt::Display for ZrBrauerDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .strands()
            .iter()
            .map(|s| format!("{}-{}:{}", self.endpoint_name(s.from), self.endpoint_name(s.to), s.label))
            .collect();
        write!(f, "{{{}}}", parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrandJson {
    pub ends: [String; 2],
    pub label: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub n: usize,
    pub r: u32,
    pub strands: Vec<StrandJson>,
}

/// All ℤ_r-Brauer diagrams on n strands; there are `rⁿ(2n−1)!!`.
pub fn enumerate_diagrams(n: usize, r: u32) -> Vec<ZrBrauerDiagram> {
    fn matchings(rest: &[usize], cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        let a = rest[0];
        for i in 1..rest.len() {
            let mut next: Vec<usize> = rest[1..].to_vec();
            let b = next.remove(i - 1);
            cur.push((a, b));
            matchings(&next, cur, out);
            cur.pop();
        }
    }
    let pts: Vec<usize> = (0..2 * n).collect();
    let mut ms = Vec::new();
    matchings(&pts, &mut Vec::new(), &mut ms);
    let mut out = Vec::new();
    for m in ms {
        let total = (r as usize).pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let strands: Vec<Strand> = m
                .iter()
                .map(|&(a, b)| {
                    let k = (c % r as usize) as i64;
                    c /= r as usize;
                    Strand { from: a, to: b, label: k }
                })
                .collect();
            out.push(ZrBrauerDiagram::canonicalize(n, r, &strands).expect("enumerated matching"));
        }
    }
    out
}

/// Loop parameters `ϑ_0, …, ϑ_{⌊r/2⌋}` with ϑ₀ invertible.
#[derive(Clone, Debug)]
pub struct Thetas<F>(Vec<F>);

impl<F: Field> Thetas<F> {
    pub fn new(r: u32, values: Vec<F>) -> Result<Self> {
        if values.len() != ZrBrauerDiagram::num_thetas(r) {
            return Err(Error::SizeMismatch(format!(
                "expected {} loop parameters for r = {r}, got {}",
                ZrBrauerDiagram::num_thetas(r),
                values.len()
            )));
        }
        if values[0].is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self(values))
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, r: u32) -> Self
    where
        F: crate::arith::Sample,
    {
        Self((0..ZrBrauerDiagram::num_thetas(r)).map(|_| F::sample(rng)).collect())
    }

    pub fn values(&self) -> &[F] {
        &self.0
    }

    /// `∏ ϑ_j^{m_j}`.
    pub fn monomial(&self, loops: &[u32]) -> F {
        let mut v = F::one();
        for (t, &m) in self.0.iter().zip(loops) {
            for _ in 0..m {
                v = v.mul(t);
            }
        }
        v
    }

    fn equals(&self, o: &Self) -> bool {
        self.0.len() == o.0.len() && self.0.iter().zip(&o.0).all(|(a, b)| a.equals(b))
    }
}

/// A linear combination of diagrams with fixed (n, r, ϑ).
#[derive(Clone, Debug)]
pub struct DiagramElement<F> {
    n: usize,
    r: u32,
    thetas: Thetas<F>,
    terms: BTreeMap<ZrBrauerDiagram, F>,
}

impl<F: Field> DiagramElement<F> {
    pub fn zero(n: usize, r: u32, thetas: Thetas<F>) -> Self {
        Self { n, r, thetas, terms: BTreeMap::new() }
    }

    pub fn from_diagram(d: ZrBrauerDiagram, c: F, thetas: Thetas<F>) -> Self {
        let mut x = Self::zero(d.n, d.r, thetas);
        x.add_term(d, c);
        x
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<ZrBrauerDiagram, F> {
        &self.terms
    }

    pub fn thetas(&self) -> &Thetas<F> {
        &self.thetas
    }

    pub fn add_term(&mut self, d: ZrBrauerDiagram, c: F) {
        let v = match self.terms.remove(&d) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(d, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_same(&self, o: &Self) -> Result<()> {
        if self.n != o.n || self.r != o.r || !self.thetas.equals(&o.thetas) {
            return Err(Error::ParameterMismatch(format!(
                "elements over (n, r) = ({}, {}) and ({}, {}) or different loop parameters",
                self.n, self.r, o.n, o.r
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        let mut x = self.clone();
        for (d, c) in &o.terms {
            x.add_term(d.clone(), c.clone());
        }
        Ok(x)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&F::one().neg()))
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut x = Self::zero(self.n, self.r, self.thetas.clone());
        for (d, v) in &self.terms {
            x.add_term(d.clone(), v.mul(c));
        }
        x
    }

    pub fn multiply(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        let mut x = Self::zero(self.n, self.r, self.thetas.clone());
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let (loops, d) = ZrBrauerDiagram::compose(a, b)?;
                x.add_term(d, ca.mul(cb).mul(&self.thetas.monomial(&loops)));
            }
        }
        Ok(x)
    }

    pub fn include(&self) -> Self {
        let mut x = Self::zero(self.n + 1, self.r, self.thetas.clone());
        for (d, c) in &self.terms {
            x.add_term(d.include(), c.clone());
        }
        x
    }

    /// `ε_n = ϑ₀⁻¹ cl_n`, onto n − 1 strands.
    pub fn conditional_expectation(&self) -> Result<Self> {
        if self.n == 0 {
            return Err(Error::IndexOutOfRange { index: 0, max: 0 });
        }
        let t0inv = self.thetas.0[0].inv()?;
        let mut x = Self::zero(self.n - 1, self.r, self.thetas.clone());
        for (d, c) in &self.terms {
            let (lp, e) = d.close_last();
            let mut v = c.mul(&t0inv);
            if let Some(j) = lp {
                v = v.mul(&self.thetas.0[j]);
            }
            x.add_term(e, v);
        }
        Ok(x)
    }

    /// `ε = ε_1 ∘ … ∘ ε_n`.
    pub fn markov_trace(&self) -> Result<F> {
        let mut x = self.clone();
        while x.n > 0 {
            x = x.conditional_expectation()?;
        }
        Ok(x.terms.values().next().cloned().unwrap_or_else(F::zero))
    }

    pub fn flip(&self) -> Self {
        let mut x = Self::zero(self.n, self.r, self.thetas.clone());
        for (d, c) in &self.terms {
            x.add_term(d.flip(), c.clone());
        }
        x
    }

    pub fn equals(&self, o: &Self) -> bool {
        self.sub(o).map(|d| d.is_zero()).unwrap_or(false)
    }
}

/// `ε(d) = ϑ₀⁻ⁿ ∏_j ϑ_j^{m_j}` from closing all strands at once.
pub fn diagram_trace<F: Field>(d: &ZrBrauerDiagram, thetas: &Thetas<F>) -> Result<F> {
    let t0 = &thetas.values()[0];
    thetas.monomial(&d.closure_loops()).div(&t0.pow(d.n() as i64)?)
}

/// `G[d, d′] = ε(d d′)` over all diagrams, and its determinant.
pub fn gram_matrix<F: Field>(n: usize, r: u32, thetas: &Thetas<F>) -> Result<(Matrix<F>, F)> {
    let basis = enumerate_diagrams(n, r);
    let rows: Vec<Vec<F>> = basis
        .par_iter()
        .map(|a| {
            basis
                .iter()
                .map(|b| {
                    let (loops, c) = ZrBrauerDiagram::compose(a, b)?;
                    Ok(thetas.monomial(&loops).mul(&diagram_trace(&c, thetas)?))
                })
                .collect::<Result<Vec<F>>>()
        })
        .collect::<Result<_>>()?;
    let m = Matrix::from_fn(basis.len(), basis.len(), |i, j| rows[i][j].clone());
    let det = m.determinant();
    Ok((m, det))
}
