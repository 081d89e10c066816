use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use super::bits::{Bits, Color};
use crate::error::{Error, Result};

/// Truncation of a DAG that is materialized completely.
pub const UNBOUNDED: i64 = i64::MAX / 4;

pub(crate) fn add_truncation(t: i64, d: i64) -> i64 {
    if t >= UNBOUNDED / 2 {
        UNBOUNDED
    } else {
        (t + d).min(UNBOUNDED)
    }
}

/// Structural node identity. Keys record how a node was built, so the
/// isomorphisms asserted between constructions are explicit relabelings.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum NodeKey {
    /// The node of the one-point DAG.
    Point,
    /// `2k ∈ 2Z≥0`, stored as `k`.
    Even(i64),
    /// Hypercube node `(λ|μ)`.
    Cube(Bits, Bits),
    /// Node of a Cartesian product.
    Pair(Box<NodeKey>, Box<NodeKey>),
    /// Node `(x|λ|μ)` of a fragment over a base DAG.
    Frag(Box<NodeKey>, Bits, Bits),
}

impl NodeKey {
    pub fn pair(a: &NodeKey, b: &NodeKey) -> NodeKey {
        NodeKey::Pair(Box::new(a.clone()), Box::new(b.clone()))
    }

    pub fn frag(x: &NodeKey, left: Bits, right: Bits) -> NodeKey {
        NodeKey::Frag(Box::new(x.clone()), left, right)
    }
}

impl fmt::Display for NodeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeKey::Point => write!(f, "pt"),
            NodeKey::Even(k) => write!(f, "E{k}"),
            NodeKey::Cube(a, b) => write!(f, "({a}|{b})"),
            NodeKey::Pair(a, b) => write!(f, "<{a};{b}>"),
            NodeKey::Frag(x, a, b) => write!(f, "{x}[{a}|{b}]"),
        }
    }
}

/// A `C_m`-colored DAG, complete up to depth `truncation`: every node of
/// depth `<= truncation` is present, together with all edges among them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredDag {
    bit_len: usize,
    nodes: BTreeMap<NodeKey, Color>,
    edges: BTreeSet<(NodeKey, NodeKey)>,
    truncation: i64,
}

impl ColoredDag {
    pub fn new(
        bit_len: usize,
        nodes: BTreeMap<NodeKey, Color>,
        edges: BTreeSet<(NodeKey, NodeKey)>,
        truncation: i64,
    ) -> Result<ColoredDag> {
        if let Some(c) = nodes.values().find(|c| c.bits.len() != bit_len) {
            return Err(Error::BitLength(bit_len, c.bits.len()));
        }
        if let Some((a, b)) = edges
            .iter()
            .find(|(a, b)| !nodes.contains_key(a) || !nodes.contains_key(b))
        {
            return Err(Error::Shape(format!("edge {a} -> {b} has a missing endpoint")));
        }
        let dag = ColoredDag {
            bit_len,
            nodes,
            edges,
            truncation,
        };
        if !dag.is_acyclic() {
            return Err(Error::Cyclic);
        }
        Ok(dag)
    }

    pub(crate) fn from_parts(
        bit_len: usize,
        nodes: BTreeMap<NodeKey, Color>,
        edges: BTreeSet<(NodeKey, NodeKey)>,
        truncation: i64,
    ) -> ColoredDag {
        debug_assert!(nodes.values().all(|c| c.bits.len() == bit_len));
        ColoredDag {
            bit_len,
            nodes,
            edges,
            truncation,
        }
    }

    pub fn empty(bit_len: usize) -> ColoredDag {
        ColoredDag::from_parts(bit_len, BTreeMap::new(), BTreeSet::new(), UNBOUNDED)
    }

    /// The one-node DAG colored `(∅, 0)`, the unit for `product`.
    pub fn point() -> ColoredDag {
        let nodes = BTreeMap::from([(NodeKey::Point, Color::new(Bits::EMPTY, 0))]);
        ColoredDag::from_parts(0, nodes, BTreeSet::new(), UNBOUNDED)
    }

    /// `[ | ) = 2Z≥0`: one node of every even depth and no edges.
    pub fn even_chain(max_depth: i64) -> ColoredDag {
        let nodes = (0..=max_depth.max(-1) / 2)
            .map(|k| (NodeKey::Even(k), Color::new(Bits::EMPTY, 2 * k)))
            .collect();
        ColoredDag::from_parts(0, nodes, BTreeSet::new(), max_depth)
    }

    /// The induced subgraph `(D|E)` of the `2m`-cube.
    pub fn hypercube(d: &[Bits], e: &[Bits]) -> Result<ColoredDag> {
        let (Some(first_d), Some(_)) = (d.first(), e.first()) else {
            return Err(Error::Shape("hypercube needs nonempty D and E".into()));
        };
        let m = first_d.len();
        if let Some(b) = d.iter().chain(e).find(|b| b.len() != m) {
            return Err(Error::BitLength(m, b.len()));
        }
        let mut nodes = BTreeMap::new();
        for &l in d {
            for &u in e {
                let c = Color::new(l.mul(u)?, l.weight() + u.weight());
                nodes.insert(NodeKey::Cube(l, u), c);
            }
        }
        let mut edges = BTreeSet::new();
        for &l in d {
            for &u in e {
                let a = NodeKey::Cube(l, u);
                for i in 0..m {
                    let mut targets = Vec::new();
                    if l.is_minus(i) {
                        targets.push(NodeKey::Cube(l.with(i, false), u));
                    }
                    if !u.is_minus(i) {
                        targets.push(NodeKey::Cube(l, u.with(i, true)));
                    }
                    for t in targets {
                        if nodes.contains_key(&t) {
                            edges.insert((a.clone(), t));
                        }
                    }
                }
            }
        }
        Ok(ColoredDag::from_parts(m, nodes, edges, UNBOUNDED))
    }

    /// `m` for a `C_m`-colored DAG.
    pub fn bit_len(&self) -> usize {
        self.bit_len
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&NodeKey, &Color)> {
        self.nodes.iter()
    }

    pub fn edges(&self) -> impl Iterator<Item = &(NodeKey, NodeKey)> {
        self.edges.iter()
    }

    pub fn contains(&self, k: &NodeKey) -> bool {
        self.nodes.contains_key(k)
    }

    pub fn color(&self, k: &NodeKey) -> Option<Color> {
        self.nodes.get(k).copied()
    }

    pub fn has_edge(&self, a: &NodeKey, b: &NodeKey) -> bool {
        self.edges.contains(&(a.clone(), b.clone()))
    }

    pub fn min_depth(&self) -> Option<i64> {
        self.nodes.values().map(|c| c.depth).min()
    }

    pub fn max_depth(&self) -> Option<i64> {
        self.nodes.values().map(|c| c.depth).max()
    }

    /// Sorted multiset of node colors.
    pub fn color_multiset(&self) -> Vec<Color> {
        let mut v: Vec<Color> = self.nodes.values().copied().collect();
        v.sort();
        v
    }

    pub fn successors(&self) -> HashMap<&NodeKey, Vec<&NodeKey>> {
        let mut out: HashMap<&NodeKey, Vec<&NodeKey>> = HashMap::new();
        for (a, b) in &self.edges {
            out.entry(a).or_default().push(b);
        }
        out
    }

    fn is_acyclic(&self) -> bool {
        let mut indeg: HashMap<&NodeKey, usize> = self.nodes.keys().map(|k| (k, 0)).collect();
        for (_, b) in &self.edges {
            *indeg.get_mut(b).expect("endpoint checked") += 1;
        }
        let succ = self.successors();
        let mut queue: VecDeque<&NodeKey> =
            indeg.iter().filter(|(_, &d)| d == 0).map(|(k, _)| *k).collect();
        let mut seen = 0;
        while let Some(k) = queue.pop_front() {
            seen += 1;
            for &s in succ.get(k).into_iter().flatten() {
                let d = indeg.get_mut(s).expect("endpoint checked");
                *d -= 1;
                if *d == 0 {
                    queue.push_back(s);
                }
            }
        }
        seen == self.nodes.len()
    }

    /// Color → node, or `None` if two nodes share a color.
    pub fn color_index(&self) -> Option<HashMap<Color, &NodeKey>> {
        let mut index = HashMap::with_capacity(self.nodes.len());
        for (k, c) in &self.nodes {
            if index.insert(*c, k).is_some() {
                return None;
            }
        }
        Some(index)
    }

    pub fn is_labeled(&self) -> bool {
        self.color_index().is_some()
    }

    /// Labeled, and `(b, d)` present implies `(b, d + 2)` present whenever
    /// `d + 2 <= truncation`.
    pub fn is_slim(&self) -> bool {
        self.slim_index().is_ok()
    }

    pub(crate) fn slim_index(&self) -> Result<HashMap<Color, &NodeKey>> {
        let index = self
            .color_index()
            .ok_or_else(|| Error::NotSlim("two nodes share a color".into()))?;
        if self.nodes.is_empty() {
            return Err(Error::NotSlim("empty DAG".into()));
        }
        for c in self.nodes.values() {
            let up = Color::new(c.bits, c.depth + 2);
            if up.depth <= self.truncation && !index.contains_key(&up) {
                return Err(Error::NotSlim(format!("({c}) present but ({up}) missing")));
            }
        }
        if self.truncation >= UNBOUNDED / 2 {
            return Err(Error::NotSlim("finite DAG cannot be closed under depth +2".into()));
        }
        Ok(index)
    }

    /// Keeps the nodes of depth `<= t`; `t` may not exceed the current truncation.
    pub fn truncated(&self, t: i64) -> Result<ColoredDag> {
        if t > self.truncation {
            return Err(Error::InsufficientTruncation {
                needed: t.to_string(),
                available: self.truncation.to_string(),
            });
        }
        let keep = |k: &NodeKey| self.nodes[k].depth <= t;
        let mut out = self.induced(keep);
        out.truncation = t;
        Ok(out)
    }

    /// `λ∗Q_{[d]}`: every color `(b, k)` becomes `(λ∗b, k + d)`. An empty
    /// `λ` shifts the depth only.
    pub fn shift(&self, lambda: Bits, d: i64) -> Result<ColoredDag> {
        if !lambda.is_empty() && lambda.len() != self.bit_len {
            return Err(Error::BitLength(self.bit_len, lambda.len()));
        }
        let nodes = self
            .nodes
            .iter()
            .map(|(k, c)| {
                let bits = if lambda.is_empty() { c.bits } else { lambda.mul(c.bits).expect("checked") };
                (k.clone(), Color::new(bits, c.depth + d))
            })
            .collect();
        Ok(ColoredDag::from_parts(
            self.bit_len,
            nodes,
            self.edges.clone(),
            add_truncation(self.truncation, d),
        ))
    }

    pub fn shift_depth(&self, d: i64) -> ColoredDag {
        self.shift(Bits::EMPTY, d).expect("depth-only shift")
    }

    /// `Q∗`: all arrows reversed.
    pub fn reverse(&self) -> ColoredDag {
        let edges = self.edges.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
        ColoredDag::from_parts(self.bit_len, self.nodes.clone(), edges, self.truncation)
    }

    /// Cartesian product `Q□R`: bits concatenate, depths add. Nodes beyond the
    /// product's truncation are dropped.
    pub fn product(&self, other: &ColoredDag) -> ColoredDag {
        let t = match (self.min_depth(), other.min_depth()) {
            (Some(a), Some(b)) => {
                add_truncation(self.truncation, b).min(add_truncation(other.truncation, a))
            }
            _ => UNBOUNDED,
        };
        let mut nodes = BTreeMap::new();
        for (a, ca) in &self.nodes {
            for (b, cb) in &other.nodes {
                let depth = ca.depth + cb.depth;
                if depth <= t {
                    nodes.insert(NodeKey::pair(a, b), Color::new(ca.bits.concat(cb.bits), depth));
                }
            }
        }
        let mut edges = BTreeSet::new();
        for (a, a2) in &self.edges {
            for b in other.nodes.keys() {
                let (s, d) = (NodeKey::pair(a, b), NodeKey::pair(a2, b));
                if nodes.contains_key(&s) && nodes.contains_key(&d) {
                    edges.insert((s, d));
                }
            }
        }
        for (b, b2) in &other.edges {
            for a in self.nodes.keys() {
                let (s, d) = (NodeKey::pair(a, b), NodeKey::pair(a, b2));
                if nodes.contains_key(&s) && nodes.contains_key(&d) {
                    edges.insert((s, d));
                }
            }
        }
        ColoredDag::from_parts(self.bit_len + other.bit_len, nodes, edges, t)
    }

    /// Induced subgraph on the nodes satisfying `keep`. The truncation is
    /// kept, which is sound for key predicates that select whole families.
    pub fn induced(&self, keep: impl Fn(&NodeKey) -> bool) -> ColoredDag {
        let nodes: BTreeMap<NodeKey, Color> = self
            .nodes
            .iter()
            .filter(|(k, _)| keep(k))
            .map(|(k, c)| (k.clone(), *c))
            .collect();
        let edges = self
            .edges
            .iter()
            .filter(|(a, b)| nodes.contains_key(a) && nodes.contains_key(b))
            .cloned()
            .collect();
        ColoredDag::from_parts(self.bit_len, nodes, edges, self.truncation)
    }

    /// Disjoint union; node keys of the parts must be distinct.
    pub fn disjoint_union<'a>(
        bit_len: usize,
        parts: impl IntoIterator<Item = &'a ColoredDag>,
    ) -> Result<ColoredDag> {
        let mut out = ColoredDag::empty(bit_len);
        for p in parts {
            if p.bit_len != bit_len {
                return Err(Error::BitLength(bit_len, p.bit_len));
            }
            for (k, c) in &p.nodes {
                if out.nodes.insert(k.clone(), *c).is_some() {
                    return Err(Error::Shape(format!("node {k} occurs in two summands")));
                }
            }
            out.edges.extend(p.edges.iter().cloned());
            out.truncation = out.truncation.min(p.truncation);
        }
        Ok(out)
    }

    /// Coordinate `i` of every color becomes coordinate `perm[i]` of the old one.
    pub fn permute_bits(&self, perm: &[usize]) -> Result<ColoredDag> {
        if perm.len() != self.bit_len {
            return Err(Error::BitLength(self.bit_len, perm.len()));
        }
        let nodes = self
            .nodes
            .iter()
            .map(|(k, c)| (k.clone(), Color::new(c.bits.permute(perm), c.depth)))
            .collect();
        Ok(ColoredDag::from_parts(self.bit_len, nodes, self.edges.clone(), self.truncation))
    }

    /// True iff the node set `sub` has no edge entering it from outside.
    pub fn is_closed_under_predecessors(&self, sub: &HashSet<&NodeKey>) -> bool {
        self.edges
            .iter()
            .all(|(a, b)| !sub.contains(b) || sub.contains(a))
    }

    /// Checks that `f` is a color- and edge-preserving bijection from `self`
    /// onto `other`, both cut at the smaller of the two truncations.
    pub fn check_isomorphism(
        &self,
        other: &ColoredDag,
        f: impl Fn(&NodeKey) -> Option<NodeKey>,
    ) -> Result<()> {
        let t = self.truncation.min(other.truncation);
        let a = self.truncated(t)?;
        let b = other.truncated(t)?;
        if a.len() != b.len() {
            return Err(Error::Isomorphism(format!("{} nodes vs {} nodes", a.len(), b.len())));
        }
        if a.edge_count() != b.edge_count() {
            return Err(Error::Isomorphism(format!(
                "{} edges vs {} edges",
                a.edge_count(),
                b.edge_count()
            )));
        }
        let mut image = HashMap::with_capacity(a.len());
        let mut hit = HashSet::with_capacity(a.len());
        for (k, c) in &a.nodes {
            let fk = f(k).ok_or_else(|| Error::Isomorphism(format!("{k} has no image")))?;
            match b.nodes.get(&fk) {
                Some(c2) if c2 == c => {}
                Some(c2) => {
                    return Err(Error::Isomorphism(format!("{k} ({c}) maps to {fk} ({c2})")))
                }
                None => return Err(Error::Isomorphism(format!("{k} maps to absent {fk}"))),
            }
            if !hit.insert(fk.clone()) {
                return Err(Error::Isomorphism(format!("{fk} hit twice")));
            }
            image.insert(k, fk);
        }
        for (x, y) in &a.edges {
            let e = (image[x].clone(), image[y].clone());
            if !b.edges.contains(&e) {
                return Err(Error::Isomorphism(format!("edge {x} -> {y} not preserved")));
            }
        }
        Ok(())
    }

    /// Isomorphism of labeled DAGs, matching nodes by color.
    pub fn check_isomorphism_by_color(&self, other: &ColoredDag) -> Result<()> {
        let index = other
            .color_index()
            .ok_or_else(|| Error::Isomorphism("target is not labeled".into()))?;
        self.check_isomorphism(other, |k| index.get(&self.nodes[k]).map(|&x| x.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: &str) -> Bits {
        s.parse().unwrap()
    }

    fn pat(s: &str) -> Vec<Bits> {
        Bits::pattern(s).unwrap()
    }

    #[test]
    fn hypercube_examples() {
        let q = ColoredDag::hypercube(&pat("±"), &pat("±")).unwrap();
        assert_eq!(q.len(), 4);
        assert_eq!(q.edge_count(), 4);
        let colors: Vec<String> = q.color_multiset().iter().map(|c| c.to_string()).collect();
        assert_eq!(colors, ["+,0", "-,1", "-,1", "+,2"]);

        let q = ColoredDag::hypercube(&pat("+"), &pat("±")).unwrap();
        assert_eq!(q.len(), 2);
        assert!(q.has_edge(&NodeKey::Cube(b("+"), b("+")), &NodeKey::Cube(b("+"), b("-"))));
        assert_eq!(q.edge_count(), 1);

        let q = ColoredDag::hypercube(&pat("±±"), &pat("±±")).unwrap();
        assert_eq!((q.len(), q.edge_count()), (16, 32));

        assert!(ColoredDag::hypercube(&pat("±"), &pat("±±")).is_err());
        assert!(ColoredDag::hypercube(&[], &pat("±")).is_err());
    }

    #[test]
    fn hypercube_grading_drops_by_one() {
        for m in 0..4 {
            let all: Vec<Bits> = Bits::all(m).collect();
            let q = ColoredDag::hypercube(&all, &all).unwrap();
            for (a, c) in q.edges() {
                let g = |k: &NodeKey| match k {
                    NodeKey::Cube(l, u) => l.weight() - u.weight(),
                    _ => unreachable!(),
                };
                assert_eq!(g(a) - g(c), 1);
            }
            // per coordinate the states (-|+), (-|-), (+|+), (+|-) allow 2, 1, 1, 0 moves
            assert_eq!(q.edge_count(), m * 4usize.pow(m as u32));
        }
    }

    #[test]
    fn product_examples() {
        let q = ColoredDag::hypercube(&pat("±"), &pat("±")).unwrap();
        let p = q.product(&ColoredDag::point());
        q.check_isomorphism(&p, |k| Some(NodeKey::pair(k, &NodeKey::Point))).unwrap();
        assert_eq!(q.product(&q).len(), 16);

        // (λ|±)·(μ|±) ≅ (λμ|±²)
        for l in pat("±") {
            for u in pat("±") {
                let a = ColoredDag::hypercube(&[l], &pat("±")).unwrap();
                let c = ColoredDag::hypercube(&[u], &pat("±")).unwrap();
                let joint = ColoredDag::hypercube(&[l.concat(u)], &pat("±±")).unwrap();
                a.product(&c)
                    .check_isomorphism(&joint, |k| match k {
                        NodeKey::Pair(x, y) => match (&**x, &**y) {
                            (NodeKey::Cube(l1, u1), NodeKey::Cube(l2, u2)) => {
                                Some(NodeKey::Cube(l1.concat(*l2), u1.concat(*u2)))
                            }
                            _ => None,
                        },
                        _ => None,
                    })
                    .unwrap();
            }
        }
    }

    #[test]
    fn slim_examples() {
        assert!(ColoredDag::even_chain(10).is_slim());
        assert!(!ColoredDag::point().is_slim());
        let mut nodes = BTreeMap::new();
        nodes.insert(NodeKey::Even(0), Color::new(Bits::EMPTY, 0));
        nodes.insert(NodeKey::Even(1), Color::new(Bits::EMPTY, 0));
        let twin = ColoredDag::new(0, nodes, BTreeSet::new(), 0).unwrap();
        assert!(!twin.is_labeled());
        assert!(!twin.is_slim());
    }

    #[test]
    fn shift_and_reverse() {
        let q = ColoredDag::hypercube(&pat("±"), &pat("±")).unwrap();
        assert_eq!(q.shift(b("+"), 0).unwrap(), q);
        assert_eq!(q.shift(b("-"), 0).unwrap().shift(b("-"), 0).unwrap(), q);
        assert_eq!(q.shift_depth(2).shift_depth(3), q.shift_depth(5));
        assert!(q.shift(b("++"), 0).is_err());
        assert_eq!(q.reverse().reverse(), q);
        assert_eq!(q.reverse().color_multiset(), q.color_multiset());
        assert_eq!(q.reverse().edge_count(), q.edge_count());
        assert_eq!(ColoredDag::even_chain(6).shift_depth(3).truncation(), 9);
    }

    #[test]
    fn cycles_are_rejected() {
        let nodes: BTreeMap<_, _> =
            (0..2).map(|k| (NodeKey::Even(k), Color::new(Bits::EMPTY, 2 * k))).collect();
        let edges = BTreeSet::from([
            (NodeKey::Even(0), NodeKey::Even(1)),
            (NodeKey::Even(1), NodeKey::Even(0)),
        ]);
        assert_eq!(ColoredDag::new(0, nodes, edges, 2), Err(Error::Cyclic));
    }

    #[test]
    fn truncation_refuses_to_grow() {
        let q = ColoredDag::even_chain(6);
        assert_eq!(q.truncated(3).unwrap().len(), 2);
        assert!(q.truncated(7).is_err());
    }
}
