//! Multipartitions, their addable and removable nodes, the branching graph Γ and
//! up–down tableaux.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{Field, RatFunc};
use crate::error::{Error, Result};

/// A partition as its nonzero row lengths, weakly decreasing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn new(rows: Vec<u32>) -> Result<Self> {
        if rows.contains(&0) || rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!("not a partition: {rows:?}")));
        }
        Ok(Self(rows))
    }

    pub fn rows(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn row(&self, x: u32) -> u32 {
        self.0.get(x as usize - 1).copied().unwrap_or(0)
    }

    /// Rows `x` (1-based) where a box `(x, λ_x + 1)` may be added.
    fn addable(&self) -> Vec<(u32, u32)> {
        let len = self.0.len() as u32;
        (1..=len + 1)
            .filter(|&x| x == 1 || self.row(x - 1) > self.row(x))
            .map(|x| (x, self.row(x) + 1))
            .collect()
    }

    fn removable(&self) -> Vec<(u32, u32)> {
        let len = self.0.len() as u32;
        (1..=len)
            .filter(|&x| self.row(x + 1) < self.row(x))
            .map(|x| (x, self.row(x)))
            .collect()
    }

    fn with_box(&self, x: u32) -> Self {
        let mut rows = self.0.clone();
        if x as usize > rows.len() {
            rows.push(1);
        } else {
            rows[x as usize - 1] += 1;
        }
        Self(rows)
    }

    fn without_box(&self, x: u32) -> Self {
        let mut rows = self.0.clone();
        rows[x as usize - 1] -= 1;
        if rows[x as usize - 1] == 0 {
            rows.pop();
        }
        Self(rows)
    }

    /// Number of boxes in exactly one of the two diagrams.
    fn distance(&self, o: &Self) -> u32 {
        let n = self.0.len().max(o.0.len()) as u32;
        (1..=n).map(|x| self.row(x).abs_diff(o.row(x))).sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", rows.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multipartition(Vec<Partition>);

impl Multipartition {
    pub fn empty(r: usize) -> Self {
        Self(vec![Partition::empty(); r])
    }

    pub fn new(components: Vec<Partition>) -> Self {
        Self(components)
    }

    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        Ok(Self(rows.into_iter().map(Partition::new).collect::<Result<_>>()?))
    }

    pub fn r(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[Partition] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().map(Partition::size).sum()
    }

    /// Deterministic listing order: total size, then per component by size
    /// descending and rows in reverse-lexicographic order.
    pub fn order_key(&self) -> (u32, Vec<(Reverse<u32>, Reverse<Vec<u32>>)>) {
        (
            self.size(),
            self.0.iter().map(|p| (Reverse(p.size()), Reverse(p.0.clone()))).collect(),
        )
    }

    pub fn addable_nodes(&self) -> Vec<Node> {
        let mut v = Vec::new();
        for (j, p) in self.0.iter().enumerate() {
            for (x, y) in p.addable() {
                v.push(Node { j: j + 1, x, y });
            }
        }
        v
    }

    pub fn removable_nodes(&self) -> Vec<Node> {
        let mut v = Vec::new();
        for (j, p) in self.0.iter().enumerate() {
            for (x, y) in p.removable() {
                v.push(Node { j: j + 1, x, y });
            }
        }
        v
    }

    /// Addable nodes first, then removable ones, each sorted by (j, x, y).
    pub fn incident_nodes(&self) -> Vec<IncidentNode> {
        let mut v: Vec<IncidentNode> = self
            .addable_nodes()
            .into_iter()
            .map(|node| IncidentNode { node, kind: NodeKind::Addable })
            .collect();
        v.extend(
            self.removable_nodes()
                .into_iter()
                .map(|node| IncidentNode { node, kind: NodeKind::Removable }),
        );
        v
    }

    pub fn kind_of(&self, node: &Node) -> Option<NodeKind> {
        let p = self.0.get(node.j.checked_sub(1)?)?;
        if p.addable().contains(&(node.x, node.y)) {
            Some(NodeKind::Addable)
        } else if p.removable().contains(&(node.x, node.y)) {
            Some(NodeKind::Removable)
        } else {
            None
        }
    }

    /// The shape obtained by adding or removing `n`.
    pub fn apply(&self, n: &IncidentNode) -> Result<Self> {
        if self.kind_of(&n.node) != Some(n.kind) {
            return Err(Error::NodeNotIncident(format!("{} for {self}", n.node)));
        }
        let mut c = self.0.clone();
        let p = &c[n.node.j - 1];
        c[n.node.j - 1] = match n.kind {
            NodeKind::Addable => p.with_box(n.node.x),
            NodeKind::Removable => p.without_box(n.node.x),
        };
        Ok(Self(c))
    }

    fn distance(&self, o: &Self) -> u32 {
        self.0.iter().zip(&o.0).map(|(a, b)| a.distance(b)).sum()
    }

    /// The node by which `next` differs from `self`, when they are adjacent.
    pub fn step_to(&self, next: &Self) -> Option<IncidentNode> {
        self.incident_nodes()
            .into_iter()
            .find(|n| self.apply(n).ok().as_ref() == Some(next))
    }

    /// ASCII rendering, one component after another.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        for (j, p) in self.0.iter().enumerate() {
            out.push_str(&format!("({})", j + 1));
            if p.is_empty() {
                out.push_str(" .\n");
                continue;
            }
            for (i, &len) in p.0.iter().enumerate() {
                let pad = if i == 0 { " " } else { "    " };
                out.push_str(pad);
                out.push_str(&"[]".repeat(len as usize));
                out.push('\n');
            }
        }
        out
    }
}

impl fmt::Display for Multipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Node {
    /// Component, 1-based.
    pub j: usize,
    /// Row, 1-based.
    pub x: u32,
    /// Column, 1-based.
    pub y: u32,
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.j, self.x, self.y)
    }
}

impl Node {
    /// `c̃(α) = u_j q^{2(y−x)}` in any field.
    pub fn content_in<F: Field>(&self, q: &F, u: &[F]) -> Result<F> {
        let e = 2 * (self.y as i64 - self.x as i64);
        Ok(u[self.j - 1].mul(&q.pow(e)?))
    }

    pub fn content(&self) -> RatFunc {
        let q = RatFunc::q();
        let u = RatFunc::u(self.j).expect("component within the variable limit");
        u.mul(&q.pow(2 * (self.y as i32 - self.x as i32)).expect("q is nonzero"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Addable,
    Removable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IncidentNode {
    pub node: Node,
    pub kind: NodeKind,
}

impl IncidentNode {
    /// `b(α, λ)`: the content for an addable node, its inverse for a removable one.
    pub fn b_in<F: Field>(&self, q: &F, u: &[F]) -> Result<F> {
        let c = self.node.content_in(q, u)?;
        match self.kind {
            NodeKind::Addable => Ok(c),
            NodeKind::Removable => c.inv(),
        }
    }
}

/// `b(α, λ)` with the check that α is incident to λ.
pub fn b_value(node: &Node, lambda: &Multipartition) -> Result<RatFunc> {
    let kind = lambda
        .kind_of(node)
        .ok_or_else(|| Error::NodeNotIncident(format!("{node} for {lambda}")))?;
    let c = node.content();
    Ok(match kind {
        NodeKind::Addable => c,
        NodeKind::Removable => c.inv()?,
    })
}

/// Γ_n by breadth-first closure of the branching rule.
pub fn gamma_level(n: usize, r: usize) -> Vec<Multipartition> {
    let mut level = vec![Multipartition::empty(r)];
    for _ in 0..n {
        let mut next = BTreeSet::new();
        for mu in &level {
            for node in mu.incident_nodes() {
                next.insert(mu.apply(&node).expect("incident node applies"));
            }
        }
        level = sort_level(next.into_iter().collect());
    }
    level
}

fn sort_level(mut v: Vec<Multipartition>) -> Vec<Multipartition> {
    v.sort_by_key(Multipartition::order_key);
    v
}

/// One edge μ → λ between consecutive levels: λ = μ with `node` applied.
#[derive(Clone, Debug)]
pub struct Edge {
    pub from: usize,
    pub node: IncidentNode,
}

/// Levels Γ_0..Γ_n with, for every λ ∈ Γ_k (k ≥ 1), its incoming edges from Γ_{k−1}.
#[derive(Clone, Debug)]
pub struct BranchingGraph {
    pub r: usize,
    pub levels: Vec<Vec<Multipartition>>,
    pub incoming: Vec<Vec<Vec<Edge>>>,
}

impl BranchingGraph {
    pub fn build(n: usize, r: usize) -> Self {
        let mut levels = vec![vec![Multipartition::empty(r)]];
        let mut incoming = vec![vec![Vec::new()]];
        for k in 1..=n {
            let prev = &levels[k - 1];
            let mut edges: BTreeMap<Multipartition, Vec<Edge>> = BTreeMap::new();
            for (i, mu) in prev.iter().enumerate() {
                for node in mu.incident_nodes() {
                    let lam = mu.apply(&node).expect("incident node applies");
                    edges.entry(lam).or_default().push(Edge { from: i, node });
                }
            }
            let level = sort_level(edges.keys().cloned().collect());
            let inc = level.iter().map(|l| edges.remove(l).unwrap_or_default()).collect();
            levels.push(level);
            incoming.push(inc);
        }
        Self { r, levels, incoming }
    }

    pub fn n(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn index_of(&self, k: usize, lambda: &Multipartition) -> Option<usize> {
        self.levels.get(k)?.iter().position(|l| l == lambda)
    }

    /// `|T(k, λ)|` for every level k and λ ∈ Γ_k.
    pub fn counts(&self) -> Vec<Vec<u128>> {
        let mut out: Vec<Vec<u128>> = vec![vec![1]];
        for k in 1..self.levels.len() {
            let prev = &out[k - 1];
            let row = self.incoming[k]
                .iter()
                .map(|edges| edges.iter().map(|e| prev[e.from]).sum())
                .collect();
            out.push(row);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UpDownTableau {
    shapes: Vec<Multipartition>,
}

impl UpDownTableau {
    /// Validates that the sequence starts at the empty tuple and moves one node at a time.
    pub fn new(shapes: Vec<Multipartition>) -> Result<Self> {
        let first = shapes
            .first()
            .ok_or_else(|| Error::Parse("empty tableau".into()))?;
        if *first != Multipartition::empty(first.r()) {
            return Err(Error::Parse("tableau must start at the empty multipartition".into()));
        }
        for w in shapes.windows(2) {
            if w[0].step_to(&w[1]).is_none() {
                return Err(Error::NodeNotIncident(format!("{} -> {}", w[0], w[1])));
            }
        }
        Ok(Self { shapes })
    }

    pub fn shapes(&self) -> &[Multipartition] {
        &self.shapes
    }

    pub fn len(&self) -> usize {
        self.shapes.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn shape(&self) -> &Multipartition {
        self.shapes.last().expect("nonempty")
    }

    /// The node used at each step, relative to the preceding shape.
    pub fn steps(&self) -> Vec<IncidentNode> {
        self.shapes
            .windows(2)
            .map(|w| w[0].step_to(&w[1]).expect("validated tableau"))
            .collect()
    }

    /// The tableau with its last step removed.
    pub fn truncate(&self) -> Self {
        Self {
            shapes: self.shapes[..self.shapes.len().saturating_sub(1).max(1)].to_vec(),
        }
    }

    /// `(b(1,T), …, b(n,T))`, the eigenvalues of y_1..y_n on the path idempotent.
    pub fn eigenvalues_in<F: Field>(&self, q: &F, u: &[F]) -> Result<Vec<F>> {
        self.steps().iter().map(|s| s.b_in(q, u)).collect()
    }

    pub fn eigenvalue_sequence(&self) -> Vec<RatFunc> {
        let r = self.shape().r();
        let q = RatFunc::q();
        let u: Vec<RatFunc> = (1..=r).map(|j| RatFunc::u(j).expect("r within limit")).collect();
        self.eigenvalues_in(&q, &u).expect("contents are nonzero")
    }
}

/// All up–down tableaux of length n (optionally of shape λ), depth first over
/// incident nodes in add-before-remove, (j, x, y) order.
pub fn enumerate_tableaux(n: usize, r: usize, lambda: Option<&Multipartition>) -> Result<Vec<UpDownTableau>> {
    if let Some(l) = lambda {
        check_in_level(n, r, l)?;
    }
    let mut out = Vec::new();
    let mut path = vec![Multipartition::empty(r)];
    dfs(n, lambda, &mut path, &mut out);
    Ok(out)
}

fn check_in_level(n: usize, r: usize, l: &Multipartition) -> Result<()> {
    let s = l.size() as usize;
    if l.r() != r || s > n || !(n - s).is_multiple_of(2) {
        return Err(Error::ShapeNotInLevel {
            level: n,
            shape: l.to_string(),
        });
    }
    Ok(())
}

fn dfs(n: usize, target: Option<&Multipartition>, path: &mut Vec<Multipartition>, out: &mut Vec<UpDownTableau>) {
    let cur = path.last().expect("nonempty").clone();
    let remaining = n + 1 - path.len();
    if let Some(t) = target {
        if cur.distance(t) as usize > remaining {
            return;
        }
    }
    if remaining == 0 {
        out.push(UpDownTableau { shapes: path.clone() });
        return;
    }
    for node in cur.incident_nodes() {
        path.push(cur.apply(&node).expect("incident node applies"));
        dfs(n, target, path, out);
        path.pop();
    }
}

/// `|T(n, λ)|`, or the total `|T(n)|` when λ is omitted.
pub fn count_tableaux(n: usize, r: usize, lambda: Option<&Multipartition>) -> Result<u128> {
    let g = BranchingGraph::build(n, r);
    let counts = g.counts();
    match lambda {
        None => Ok(counts[n].iter().sum()),
        Some(l) => {
            check_in_level(n, r, l)?;
            Ok(g.index_of(n, l).map_or(0, |i| counts[n][i]))
        }
    }
}

/// `(Σ_{λ∈Γ_n} |T(n,λ)|², rⁿ(2n−1)!!)`.
pub fn dimension_identity(n: usize, r: usize) -> (u128, u128) {
    let g = BranchingGraph::build(n, r);
    let lhs = g.counts()[n].iter().map(|c| c * c).sum();
    (lhs, brauer_dimension(n, r))
}

/// `rⁿ(2n−1)!!`.
pub fn brauer_dimension(n: usize, r: usize) -> u128 {
    let mut v = (r as u128).pow(n as u32);
    for k in (1..2 * n).step_by(2) {
        v *= k as u128;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp(rows: Vec<Vec<u32>>) -> Multipartition {
        Multipartition::from_rows(rows).unwrap()
    }

    #[test]
    fn nodes_of_small_shapes() {
        let e = Multipartition::empty(3);
        assert_eq!(
            e.addable_nodes(),
            (1..=3).map(|j| Node { j, x: 1, y: 1 }).collect::<Vec<_>>()
        );
        assert!(e.removable_nodes().is_empty());
        let l = mp(vec![vec![2], vec![]]);
        let add: BTreeSet<Node> = l.addable_nodes().into_iter().collect();
        let expect: BTreeSet<Node> = [(1, 1, 3), (1, 2, 1), (2, 1, 1)]
            .into_iter()
            .map(|(j, x, y)| Node { j, x, y })
            .collect();
        assert_eq!(add, expect);
        assert_eq!(l.removable_nodes(), vec![Node { j: 1, x: 1, y: 2 }]);
    }

    #[test]
    fn contents_and_b_values() {
        assert_eq!(Node { j: 2, x: 1, y: 3 }.content(), "u2*q^4".parse::<RatFunc>().unwrap());
        assert_eq!(Node { j: 1, x: 3, y: 1 }.content(), "u1*q^-4".parse::<RatFunc>().unwrap());
        let l = mp(vec![vec![2], vec![]]);
        assert_eq!(
            b_value(&Node { j: 1, x: 1, y: 2 }, &l).unwrap(),
            "u1^-1*q^-2".parse::<RatFunc>().unwrap()
        );
        assert!(b_value(&Node { j: 1, x: 2, y: 2 }, &l).is_err());
    }

    #[test]
    fn small_levels() {
        assert_eq!(gamma_level(0, 2), vec![Multipartition::empty(2)]);
        let l: BTreeSet<_> = gamma_level(2, 1).into_iter().collect();
        let expect: BTreeSet<_> = [vec![vec![]], vec![vec![2]], vec![vec![1, 1]]].into_iter().map(mp).collect();
        assert_eq!(l, expect);
        assert_eq!(gamma_level(2, 2).len(), 6);
    }

    #[test]
    fn counts_r1_n3() {
        for (rows, c) in [(vec![1], 3), (vec![2, 1], 2), (vec![3], 1), (vec![1, 1, 1], 1)] {
            let l = mp(vec![rows]);
            assert_eq!(count_tableaux(3, 1, Some(&l)).unwrap(), c);
            assert_eq!(enumerate_tableaux(3, 1, Some(&l)).unwrap().len() as u128, c);
        }
        assert_eq!(count_tableaux(2, 2, None).unwrap(), 8);
        assert!(count_tableaux(3, 1, Some(&mp(vec![vec![2]]))).is_err());
    }

    #[test]
    fn dimension_small() {
        assert_eq!(dimension_identity(3, 1), (15, 15));
        assert_eq!(dimension_identity(2, 2), (12, 12));
        assert_eq!(dimension_identity(0, 3), (1, 1));
    }

    #[test]
    fn eigenvalues() {
        let e = Multipartition::empty(1);
        let box1 = mp(vec![vec![1]]);
        let t = UpDownTableau::new(vec![e.clone(), box1.clone(), e.clone()]).unwrap();
        let u1: RatFunc = "u1".parse().unwrap();
        assert_eq!(t.eigenvalue_sequence(), vec![u1.clone(), u1.inv().unwrap()]);
        let t = UpDownTableau::new(vec![e, box1, mp(vec![vec![2]])]).unwrap();
        assert_eq!(t.eigenvalue_sequence(), vec![u1.clone(), "u1*q^2".parse().unwrap()]);
    }

    #[test]
    fn pretty_print() {
        let l = mp(vec![vec![2, 1], vec![]]);
        assert_eq!(l.pretty(), "(1) [][]\n    []\n(2) .\n");
    }
}
