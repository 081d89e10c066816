//! Parameter structures on rooted trees and the nested evaluation of the
//! bosonic sum: per initial condition `(e, ε)`, the tree sum of the colored
//! DAG calculus is assembled node by node and then specialised by the lattice
//! substitution `y_v = e_v·(n_v + m_v/2 + Σ_{i∈v̄} ε_i/(2w_i))`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::dagcat::Bits;
use crate::error::{Error, Result};
use crate::kgroup::{TreeTerm, TreeTerms};
use crate::plumbing::{PlumbedGraph, RootedTree, Tree};
use crate::qseries::QSeries;
use crate::zhat::{Accumulator, Lattice};

/// A choice of 3-parameter `Δ(v)` and ordered 1-parameters at every node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterStructure {
    tree: RootedTree,
    delta: BTreeMap<usize, [usize; 3]>,
    one_params: BTreeMap<usize, Vec<usize>>,
}

fn names(tree: &Tree, vs: &[usize]) -> String {
    vs.iter().map(|&v| tree.id(v)).collect::<Vec<_>>().join(", ")
}

/// Checks that `rt` is centered, has no degree-two vertices and is rooted at a node.
fn check_shape(rt: &RootedTree) -> Result<()> {
    let tree = rt.tree();
    let part = tree.degree_partition();
    if !part.degree2.is_empty() {
        return Err(Error::HasDegreeTwo(names(tree, &part.degree2)));
    }
    if tree.degree(rt.root()) < 3 {
        return Err(Error::NotNodeVersion(format!(
            "root {} has degree {}; run grow_leaves or root at a node",
            tree.id(rt.root()),
            tree.degree(rt.root())
        )));
    }
    if !rt.is_centered() {
        return Err(Error::NotCentered(names(tree, &tree.centers())));
    }
    Ok(())
}

impl ParameterStructure {
    /// `delta[v]` is `(parent, b₁, b₂)` for `v` below the root and three
    /// children for the root; `one_params[v]` lists the other neighbours.
    pub fn new(
        tree: RootedTree,
        delta: BTreeMap<usize, [usize; 3]>,
        one_params: BTreeMap<usize, Vec<usize>>,
    ) -> Result<ParameterStructure> {
        check_shape(&tree)?;
        let t = tree.tree();
        let bad = |msg: String| Err(Error::ParameterStructure(msg));
        let nodes = t.degree_partition().nodes;
        let keys: Vec<usize> = delta.keys().copied().collect();
        if keys != nodes || one_params.keys().copied().collect::<Vec<_>>() != nodes {
            return bad("Δ and 1-parameters must be given at exactly the nodes".into());
        }
        for &v in &nodes {
            let d = delta[&v];
            let ones = &one_params[&v];
            let used: BTreeSet<usize> = d.iter().chain(ones).copied().collect();
            let nbrs: BTreeSet<usize> = t.neighbors(v).iter().copied().collect();
            if used.len() != 3 + ones.len() || used != nbrs {
                return bad(format!("parameters at {} do not use each neighbour once", t.id(v)));
            }
            if let Some(p) = tree.parent(v) {
                if d[0] != p {
                    return bad(format!("Δ({}) must start with the parent {}", t.id(v), t.id(p)));
                }
            }
        }
        Ok(ParameterStructure {
            tree,
            delta,
            one_params,
        })
    }

    pub fn tree(&self) -> &RootedTree {
        &self.tree
    }

    pub fn root(&self) -> usize {
        self.tree.root()
    }

    /// `V≥3` in canonical order.
    pub fn nodes(&self) -> Vec<usize> {
        self.delta.keys().copied().collect()
    }

    pub fn delta(&self, v: usize) -> [usize; 3] {
        self.delta[&v]
    }

    /// The bottom vertices of `Δ(v)`: all three at the root.
    pub fn bottoms(&self, v: usize) -> &[usize] {
        let d = &self.delta[&v];
        if v == self.root() {
            d
        } else {
            &d[1..]
        }
    }

    pub fn one_params(&self, v: usize) -> &[usize] {
        &self.one_params[&v]
    }

    /// `m_v = deg v - 2`.
    pub fn m(&self, v: usize) -> usize {
        1 + self.one_params[&v].len()
    }

    /// Every valid structure on `rt`: all Δ choices and all 1-parameter orders.
    pub fn all(rt: &RootedTree) -> Result<Vec<ParameterStructure>> {
        check_shape(rt)?;
        let mut partial = vec![(BTreeMap::new(), BTreeMap::new())];
        for v in rt.tree().degree_partition().nodes {
            let children = rt.children(v).to_vec();
            let k = if v == rt.root() { 3 } else { 2 };
            let mut next = Vec::new();
            for bottoms in combinations(&children, k) {
                let d = match rt.parent(v) {
                    Some(p) => [p, bottoms[0], bottoms[1]],
                    None => [bottoms[0], bottoms[1], bottoms[2]],
                };
                let rest: Vec<usize> = children.iter().copied().filter(|c| !bottoms.contains(c)).collect();
                for ones in permutations(&rest) {
                    for (dm, om) in &partial {
                        let mut dm: BTreeMap<usize, [usize; 3]> = dm.clone();
                        let mut om: BTreeMap<usize, Vec<usize>> = om.clone();
                        dm.insert(v, d);
                        om.insert(v, ones.clone());
                        next.push((dm, om));
                    }
                }
            }
            partial = next;
        }
        partial
            .into_iter()
            .map(|(d, o)| ParameterStructure::new(rt.clone(), d, o))
            .collect()
    }

    /// The default structure on `pg`: its root if given, else its first center.
    pub fn for_graph(pg: &PlumbedGraph) -> Result<ParameterStructure> {
        default_parameter_structure(&pg.rooted_or_centered())
    }
}

fn combinations(xs: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if xs.len() < k {
        return Vec::new();
    }
    let mut out: Vec<Vec<usize>> = combinations(&xs[1..], k - 1)
        .into_iter()
        .map(|mut c| {
            c.insert(0, xs[0]);
            c
        })
        .collect();
    out.extend(combinations(&xs[1..], k));
    out
}

fn permutations(xs: &[usize]) -> Vec<Vec<usize>> {
    if xs.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..xs.len() {
        let mut rest = xs.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Bottoms of `Δ(v)` are the children with the smallest ids (three at the
/// root); the remaining children become 1-parameters in id order.
pub fn default_parameter_structure(rt: &RootedTree) -> Result<ParameterStructure> {
    check_shape(rt)?;
    let mut delta = BTreeMap::new();
    let mut ones = BTreeMap::new();
    for v in rt.tree().degree_partition().nodes {
        let c = rt.children(v);
        let (d, rest) = match rt.parent(v) {
            Some(p) => ([p, c[0], c[1]], &c[2..]),
            None => ([c[0], c[1], c[2]], &c[3..]),
        };
        delta.insert(v, d);
        ones.insert(v, rest.to_vec());
    }
    ParameterStructure::new(rt.clone(), delta, ones)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    /// The component holds `Δ(rt)`.
    ContainsRootDelta,
    /// Its highest vertex is the root, but `Δ(rt)` is elsewhere.
    TopIsRoot,
    /// Its highest vertex is a 1-parameter of that vertex's parent.
    TopIsOneParam,
}

/// A class of 3-parameters under "shares a non-root vertex".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// The nodes `v` whose `Δ(v)` belong to the class.
    pub deltas: Vec<usize>,
    pub kind: ComponentKind,
    /// The highest vertex (the root for [`ComponentKind::ContainsRootDelta`]).
    pub top: usize,
    /// Bottom vertices of the class that are not themselves the node of a member.
    pub bottoms: Vec<usize>,
}

impl Component {
    /// Every bottom vertex of every member `Δ(v)`.
    pub fn all_bottoms(&self, ps: &ParameterStructure) -> Vec<usize> {
        let mut out: Vec<usize> = self.deltas.iter().flat_map(|&v| ps.bottoms(v).to_vec()).collect();
        out.sort_unstable();
        out
    }
}

pub fn connected_components(ps: &ParameterStructure) -> Vec<Component> {
    let nodes = ps.nodes();
    let root = ps.root();
    let rt = ps.tree();
    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    for (k, &v) in nodes.iter().enumerate() {
        for x in ps.delta(v) {
            if x == root {
                continue;
            }
            match owner.get(&x) {
                Some(&j) => {
                    let (a, b) = (find(&mut parent, j), find(&mut parent, k));
                    parent[a] = b;
                }
                None => {
                    owner.insert(x, k);
                }
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for k in 0..nodes.len() {
        let r = find(&mut parent, k);
        classes.entry(r).or_default().push(nodes[k]);
    }
    let mut out: Vec<Component> = classes
        .into_values()
        .map(|deltas| {
            let (kind, top) = if deltas.contains(&root) {
                (ComponentKind::ContainsRootDelta, root)
            } else {
                let highest = *deltas.iter().min_by_key(|&&v| (rt.depth(v), v)).unwrap();
                let top = rt.parent(highest).expect("non-root node");
                if top == root {
                    (ComponentKind::TopIsRoot, top)
                } else {
                    let g = rt.parent(top).expect("top is below the root");
                    assert!(ps.one_params(g).contains(&top), "top must be a 1-parameter");
                    (ComponentKind::TopIsOneParam, top)
                }
            };
            let bottoms = deltas
                .iter()
                .flat_map(|&v| ps.bottoms(v).to_vec())
                .filter(|x| !deltas.contains(x))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            Component {
                deltas,
                kind,
                top,
                bottoms,
            }
        })
        .collect();
    out.sort_by_key(|c| c.deltas[0]);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    /// `H⁰(-)∘/∼` applied to the 1-parameter `x` at the node.
    OneParam(usize),
    /// The 3-parameter `Δ(v)` of the node.
    Delta,
}

/// One parameter evaluation at a node, with the vertices whose parameters
/// become determined by it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub node: usize,
    pub kind: StepKind,
    pub evaluates: Vec<usize>,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            StepKind::OneParam(x) => write!(f, "{}: 1-param {}", self.node, x)?,
            StepKind::Delta => write!(f, "{}: Δ", self.node)?,
        }
        write!(f, " -> {:?}", self.evaluates)
    }
}

/// Nodes in post-order; at each node its 1-parameters, then `Δ(v)`.
/// Bottoms of a component are finalised when its top is evaluated, or at
/// the final `Δ(rt)` step when the top is the root.
pub fn evaluation_order(ps: &ParameterStructure) -> Vec<Step> {
    let rt = ps.tree();
    let root = ps.root();
    let comps = connected_components(ps);
    let mut steps = Vec::new();
    for v in rt.post_order() {
        if rt.tree().degree(v) < 3 {
            continue;
        }
        for &x in ps.one_params(v) {
            let mut ev = vec![x];
            for c in comps
                .iter()
                .filter(|c| c.kind == ComponentKind::TopIsOneParam && c.top == x)
            {
                ev.extend(c.all_bottoms(ps));
            }
            steps.push(Step {
                node: v,
                kind: StepKind::OneParam(x),
                evaluates: ev,
            });
        }
        let mut ev = Vec::new();
        if v == root {
            ev.push(root);
            for c in comps.iter().filter(|c| c.kind != ComponentKind::TopIsOneParam) {
                ev.extend(c.all_bottoms(ps));
            }
        }
        steps.push(Step {
            node: v,
            kind: StepKind::Delta,
            evaluates: ev,
        });
    }
    steps
}

/// Signs `e` on the nodes and `ε` on the leaves, keyed by vertex index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InitialCondition {
    pub e: BTreeMap<usize, i8>,
    pub eps: BTreeMap<usize, i8>,
}

impl InitialCondition {
    /// The sign attached to vertex `x`: `e_x` on nodes, `ε_x` on leaves.
    pub fn param(&self, x: usize) -> i8 {
        *self
            .e
            .get(&x)
            .or_else(|| self.eps.get(&x))
            .unwrap_or_else(|| panic!("no parameter for vertex {x}"))
    }

    /// Decodes bit `k` of `e_mask` as `e` of the `k`-th node and likewise for leaves.
    pub fn from_masks(tree: &Tree, e_mask: u64, eps_mask: u64) -> InitialCondition {
        let part = tree.degree_partition();
        let sign = |mask: u64, k: usize| if mask >> k & 1 == 1 { -1 } else { 1 };
        InitialCondition {
            e: part.nodes.iter().enumerate().map(|(k, &v)| (v, sign(e_mask, k))).collect(),
            eps: part.leaves.iter().enumerate().map(|(k, &i)| (i, sign(eps_mask, k))).collect(),
        }
    }

    /// All `2^{|V≥3| + |V₁|}` initial conditions.
    pub fn all(tree: &Tree) -> impl Iterator<Item = InitialCondition> + '_ {
        let part = tree.degree_partition();
        let (a, b) = (part.nodes.len(), part.leaves.len());
        assert!(a + b < 64, "too many sign variables");
        (0u64..1 << a).flat_map(move |em| (0u64..1 << b).map(move |lm| InitialCondition::from_masks(tree, em, lm)))
    }

    /// `∏_v e_v^{deg v - |v̄|} · ∏_i ε_i`.
    pub fn prefactor(&self, tree: &Tree) -> i64 {
        let mut s: i64 = self.eps.values().map(|&x| x as i64).product();
        for (&v, &ev) in &self.e {
            if ev == -1 && (tree.degree(v) - tree.leaf_neighbors(v).len()) % 2 == 1 {
                s = -s;
            }
        }
        s
    }
}

/// `ν(v)`: the product of the parameters of `Δ(v)`, then the 1-parameters.
pub fn nu_bits(ps: &ParameterStructure, ic: &InitialCondition, v: usize) -> Bits {
    let first: i8 = ps.delta(v).iter().map(|&x| ic.param(x)).product();
    let signs: Vec<bool> = std::iter::once(first)
        .chain(ps.one_params(v).iter().map(|&x| ic.param(x)))
        .map(|s| s == -1)
        .collect();
    Bits::from_signs(&signs)
}

/// `∏_v (-1)^{|ν(v)|}` agrees with the prefactor of `(e, ε)`.
pub fn verify_prefactor_identity(ps: &ParameterStructure, ic: &InitialCondition) -> bool {
    let weight: i64 = ps.nodes().iter().map(|&v| nu_bits(ps, ic, v).weight()).sum();
    let lhs = if weight % 2 == 0 { 1 } else { -1 };
    lhs == ic.prefactor(ps.tree().tree())
}

/// One summand of the nested sum after substitution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZhatTerm {
    pub ic: InitialCondition,
    pub n: BTreeMap<usize, i64>,
    pub sign: i64,
    pub multiplicity: BigInt,
    /// `y` over `V≥3` in canonical order.
    pub lattice_vector: Vec<BigRational>,
    pub exponent: BigRational,
}

/// Shared setup of the nested evaluation for one plumbing.
struct Nested<'a> {
    pg: &'a PlumbedGraph,
    ps: &'a ParameterStructure,
    lat: Lattice,
    /// Nodes in the order their `Δ` is evaluated.
    order: Vec<usize>,
    pos: Vec<usize>,
    m: Vec<usize>,
}

impl<'a> Nested<'a> {
    fn new(pg: &'a PlumbedGraph, ps: &'a ParameterStructure, order: &BigRational) -> Result<Nested<'a>> {
        let part = pg.tree().degree_partition();
        if !part.degree2.is_empty() {
            return Err(Error::HasDegreeTwo(names(pg.tree(), &part.degree2)));
        }
        if ps.tree().tree() != pg.tree() {
            return Err(Error::ParameterStructure("structure is over a different tree".into()));
        }
        let lat = Lattice::new(pg, order, 0)?;
        let order: Vec<usize> = evaluation_order(ps)
            .into_iter()
            .filter(|s| s.kind == StepKind::Delta)
            .map(|s| s.node)
            .collect();
        let pos = order.iter().map(|&v| lat.form.position(v).expect("node")).collect();
        let m = order.iter().map(|&v| ps.m(v)).collect();
        Ok(Nested {
            pg,
            ps,
            lat,
            order,
            pos,
            m,
        })
    }

    /// The tree-sum terms for `ic` together with the scaled offsets
    /// `D·(m_v/2 + Σ ε_i/(2w_i))`, one per node in evaluation order.
    fn terms(&self, ic: &InitialCondition) -> Result<(TreeTerms, Vec<i64>)> {
        let tree = self.pg.tree();
        let nu: Vec<Bits> = self.order.iter().map(|&v| nu_bits(self.ps, ic, v)).collect();
        let weight: i64 = nu.iter().map(Bits::weight).sum();
        let sign = if weight % 2 == 0 { 1 } else { -1 };
        if sign != ic.prefactor(tree) {
            return Err(Error::SignMismatch(format!("{ic:?}")));
        }
        let off: Vec<i64> = self
            .order
            .iter()
            .zip(&self.m)
            .map(|(&v, &mv)| {
                mv as i64 * self.lat.scale / 2
                    + tree
                        .leaf_neighbors(v)
                        .iter()
                        .map(|&i| ic.eps[&i] as i64 * self.lat.leaf_step(self.pg.weight(i)))
                        .sum::<i64>()
            })
            .collect();
        let n_max: Vec<i64> = off.iter().map(|&o| self.lat.n_max(o)).collect();
        Ok((TreeTerms::new(&self.m, &nu, &n_max)?, off))
    }

    /// `z = D·y` for a tree term, placed at the form positions.
    fn substitute(&self, ic: &InitialCondition, term: &TreeTerm, off: &[i64], z: &mut [i64]) {
        for (k, &v) in self.order.iter().enumerate() {
            let y = term.n[k] * self.lat.scale + off[k];
            z[self.pos[k]] = ic.e[&v] as i64 * y;
        }
    }
}

/// The nested sum truncated at exponent `order`.
pub fn zhat_nested(pg: &PlumbedGraph, ps: &ParameterStructure, order: &BigRational) -> Result<QSeries> {
    let nest = Nested::new(pg, ps, order)?;
    let tree = pg.tree();
    let part = tree.degree_partition();
    let (a, b) = (part.nodes.len(), part.leaves.len());
    if a > 24 || b > 24 {
        return Err(Error::Shape("too many sign variables to enumerate".into()));
    }
    let dim = nest.lat.form.dim();
    let acc = (0u64..1 << a)
        .into_par_iter()
        .map(|em| {
            let mut acc = Accumulator::default();
            let mut z = vec![0i64; dim];
            for lm in 0u64..1 << b {
                let ic = InitialCondition::from_masks(tree, em, lm);
                let (terms, off) = nest.terms(&ic)?;
                for term in terms {
                    nest.substitute(&ic, &term, &off, &mut z);
                    let num = nest.lat.numerator(&z)?;
                    if nest.lat.accepts(num) {
                        let mult = term.multiplicity.to_i128().ok_or(Error::Overflow("multiplicity"))?;
                        acc.add(num, term.sign as i128 * mult)?;
                    }
                }
            }
            Ok(acc)
        })
        .try_reduce(Accumulator::default, |x, y| x.merge(y))?;
    Ok(acc.into_series(&nest.lat, order))
}

/// The individual summands of [`zhat_nested`] with exponent at most `order`,
/// with exact rational lattice vectors.
pub fn zhat_terms(pg: &PlumbedGraph, ps: &ParameterStructure, order: &BigRational) -> Result<Vec<ZhatTerm>> {
    let nest = Nested::new(pg, ps, order)?;
    let scale = BigInt::from(nest.lat.scale);
    let mut nodes_sorted = nest.order.clone();
    nodes_sorted.sort_unstable();
    let mut z = vec![0i64; nest.lat.form.dim()];
    let mut out = Vec::new();
    for ic in InitialCondition::all(pg.tree()) {
        let (terms, off) = nest.terms(&ic)?;
        for term in terms {
            nest.substitute(&ic, &term, &off, &mut z);
            let y: Vec<BigRational> = z.iter().map(|&x| BigRational::new(x.into(), scale.clone())).collect();
            let exponent = nest.lat.form.eval(&y)?;
            if exponent > *order {
                continue;
            }
            let n = nest.order.iter().copied().zip(term.n.iter().copied()).collect();
            let lattice_vector = nodes_sorted
                .iter()
                .map(|&v| y[nest.lat.form.position(v).expect("node")].clone())
                .collect();
            out.push(ZhatTerm {
                ic: ic.clone(),
                n,
                sign: term.sign,
                multiplicity: term.multiplicity.clone(),
                lattice_vector,
                exponent,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zhat::zhat_bosonic;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    fn graph(vs: &[(&str, i64)], es: &[(&str, &str)], root: Option<&str>) -> PlumbedGraph {
        PlumbedGraph::from_parts(vs, es, root).unwrap()
    }

    fn star(ws: &[i64]) -> PlumbedGraph {
        let names = ["c", "l1", "l2", "l3", "l4", "l5"];
        let vs: Vec<(&str, i64)> = names.iter().copied().zip(ws.iter().copied()).collect();
        let es: Vec<(&str, &str)> = (1..ws.len()).map(|i| ("c", names[i])).collect();
        graph(&vs, &es, Some("c"))
    }

    fn h_tree() -> PlumbedGraph {
        graph(
            &[("u", -2), ("v", -2), ("a", -2), ("b", -3), ("c", -2), ("d", -5)],
            &[("u", "v"), ("u", "a"), ("u", "b"), ("v", "c"), ("v", "d")],
            Some("u"),
        )
    }

    fn idx(pg: &PlumbedGraph, id: &str) -> usize {
        pg.tree().index_of(id).unwrap()
    }

    #[test]
    fn default_structures() {
        let pg = star(&[-1, -2, -3, -7]);
        let ps = ParameterStructure::for_graph(&pg).unwrap();
        assert_eq!(ps.delta(0), [1, 2, 3]);
        assert_eq!(ps.m(0), 1);
        let pg = star(&[-2, -2, -2, -2, -2]);
        let ps = ParameterStructure::for_graph(&pg).unwrap();
        assert_eq!(ps.delta(0), [1, 2, 3]);
        assert_eq!(ps.one_params(0), &[4]);
        assert_eq!(ps.m(0), 2);
        let pg = h_tree();
        let ps = ParameterStructure::for_graph(&pg).unwrap();
        let (u, v) = (idx(&pg, "u"), idx(&pg, "v"));
        assert_eq!(ps.delta(v), [u, idx(&pg, "c"), idx(&pg, "d")]);
        assert_eq!(ps.delta(u), [idx(&pg, "a"), idx(&pg, "b"), v]);
    }

    #[test]
    fn shape_errors() {
        let pg = graph(
            &[("a", -2), ("b", -2), ("c", -2), ("d", -2), ("e", -2)],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("c", "e")],
            Some("c"),
        );
        assert!(matches!(ParameterStructure::for_graph(&pg), Err(Error::HasDegreeTwo(_))));
        let pg = h_tree();
        let rt = RootedTree::new(pg.tree().clone(), idx(&pg, "a")).unwrap();
        assert!(matches!(default_parameter_structure(&rt), Err(Error::NotNodeVersion(_))));
        // only u is a center
        let pg = graph(
            &[("u", -2), ("v", -2), ("a", -2), ("b", -2), ("c", -2), ("d", -2), ("w", -2), ("x", -2), ("y", -2)],
            &[("u", "v"), ("u", "a"), ("u", "b"), ("u", "w"), ("w", "x"), ("w", "y"), ("v", "c"), ("v", "d")],
            Some("v"),
        );
        match ParameterStructure::for_graph(&pg) {
            Err(Error::NotCentered(hint)) => assert_eq!(hint, "u"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn validation_of_explicit_structures() {
        let pg = h_tree();
        let ps = ParameterStructure::for_graph(&pg).unwrap();
        let (u, v) = (idx(&pg, "u"), idx(&pg, "v"));
        let mut delta: BTreeMap<usize, [usize; 3]> = [(u, ps.delta(u)), (v, ps.delta(v))].into();
        let ones: BTreeMap<usize, Vec<usize>> = [(u, vec![]), (v, vec![])].into();
        assert!(ParameterStructure::new(ps.tree().clone(), delta.clone(), ones.clone()).is_ok());
        let d = delta[&v];
        delta.insert(v, [d[1], d[0], d[2]]);
        assert!(matches!(
            ParameterStructure::new(ps.tree().clone(), delta, ones),
            Err(Error::ParameterStructure(_))
        ));
    }

    #[test]
    fn components_of_the_h_tree() {
        let pg = h_tree();
        let ps = ParameterStructure::for_graph(&pg).unwrap();
        let comps = connected_components(&ps);
        let (u, v) = (idx(&pg, "u"), idx(&pg, "v"));
        assert_eq!(comps.len(), 2);
        let cu = comps.iter().find(|c| c.deltas == [u]).unwrap();
        let cv = comps.iter().find(|c| c.deltas == [v]).unwrap();
        assert_eq!(cu.kind, ComponentKind::ContainsRootDelta);
        assert_eq!(cv.kind, ComponentKind::TopIsRoot);
        assert_eq!(cv.top, u);
    }

    /// Root r with leaves a, b and node children p, s; p and s each have a
    /// node child with two leaves, so that r is the center.
    fn deep_tree() -> PlumbedGraph {
        graph(
            &[
                ("r", -2), ("a", -2), ("b", -2), ("p", -2), ("s", -2),
                ("pl", -2), ("q1", -2), ("q2", -2), ("q", -2),
                ("sq", -2), ("sl", -2), ("t1", -2), ("t2", -2),
            ],
            &[
                ("r", "a"), ("r", "b"), ("r", "p"), ("r", "s"),
                ("p", "q"), ("p", "pl"), ("q", "q1"), ("q", "q2"),
                ("s", "sq"), ("s", "sl"), ("sq", "t1"), ("sq", "t2"),
            ],
            Some("r"),
        )
    }

    #[test]
    fn components_and_schedule_of_a_deep_tree() {
        let pg = deep_tree();
        let ps = ParameterStructure::for_graph(&pg).unwrap();
        let id = |s| idx(&pg, s);
        // Δ(r) = (a, b, p); s is the 1-parameter of r
        assert_eq!(ps.delta(id("r")), [id("a"), id("b"), id("p")]);
        assert_eq!(ps.one_params(id("r")), &[id("s")]);
        let comps = connected_components(&ps);
        let find = |v| comps.iter().find(|c| c.deltas.contains(&v)).unwrap();
        // Δ(q) shares p with Δ(r), Δ(sq) hangs below the 1-parameter s
        assert_eq!(find(id("q")).deltas, find(id("r")).deltas);
        assert_eq!(find(id("r")).kind, ComponentKind::ContainsRootDelta);
        assert_eq!(find(id("sq")).kind, ComponentKind::TopIsOneParam);
        assert_eq!(find(id("sq")).top, id("s"));
        assert_eq!(find(id("s")).kind, ComponentKind::TopIsRoot);
        assert_eq!(find(id("p")).kind, ComponentKind::TopIsRoot);
        check_schedule(&ps);
    }

    fn check_schedule(ps: &ParameterStructure) {
        let rt = ps.tree();
        let steps = evaluation_order(ps);
        let total: usize = ps.nodes().iter().map(|&v| ps.m(v)).sum();
        assert_eq!(steps.len(), total);
        let mut seen: Vec<usize> = steps.iter().flat_map(|s| s.evaluates.clone()).collect();
        seen.sort_unstable();
        assert_eq!(seen, (0..rt.tree().len()).collect::<Vec<_>>());
        // descendants before ancestors
        for (i, s) in steps.iter().enumerate() {
            for t in &steps[i + 1..] {
                assert!(!rt.is_descendant(t.node, s.node) || t.node == s.node);
            }
        }
        // a component's bottoms are finalised after all of its Δ steps
        for c in connected_components(ps) {
            let fin = steps
                .iter()
                .position(|s| s.evaluates.contains(&c.all_bottoms(ps)[0]))
                .unwrap();
            for &v in &c.deltas {
                let at = steps
                    .iter()
                    .position(|s| s.node == v && s.kind == StepKind::Delta)
                    .unwrap();
                assert!(at <= fin);
            }
        }
    }

    #[test]
    fn schedules() {
        let pg = star(&[-1, -2, -3, -7]);
        let ps = ParameterStructure::for_graph(&pg).unwrap();
        assert_eq!(evaluation_order(&ps).len(), 1);
        check_schedule(&ps);
        let pg = h_tree();
        let ps = ParameterStructure::for_graph(&pg).unwrap();
        let steps = evaluation_order(&ps);
        assert_eq!(steps[0].node, idx(&pg, "v"));
        check_schedule(&ps);
    }

    #[test]
    fn nu_examples() {
        let pg = star(&[-1, -2, -3, -7]);
        let ps = ParameterStructure::for_graph(&pg).unwrap();
        let ic = InitialCondition {
            e: [(0, 1)].into(),
            eps: [(1, 1), (2, 1), (3, -1)].into(),
        };
        assert_eq!(nu_bits(&ps, &ic, 0), "-".parse().unwrap());
        let pg = star(&[-2, -2, -2, -2, -2]);
        let ps = ParameterStructure::for_graph(&pg).unwrap();
        let ic = InitialCondition {
            e: [(0, 1)].into(),
            eps: [(1, 1), (2, -1), (3, -1), (4, 1)].into(),
        };
        assert_eq!(nu_bits(&ps, &ic, 0), "++".parse().unwrap());
        let pg = h_tree();
        let ps = ParameterStructure::for_graph(&pg).unwrap();
        let ic = InitialCondition {
            e: [(idx(&pg, "u"), 1), (idx(&pg, "v"), -1)].into(),
            eps: ["a", "b", "c", "d"].iter().map(|s| (idx(&pg, s), 1)).collect(),
        };
        assert_eq!(nu_bits(&ps, &ic, idx(&pg, "u")), "-".parse().unwrap());
    }

    #[test]
    fn prefactor_identity_everywhere() {
        for pg in [h_tree(), deep_tree(), star(&[-2, -2, -2, -2, -2])] {
            for ps in ParameterStructure::all(&pg.rooted_or_centered()).unwrap().iter().take(8) {
                for ic in InitialCondition::all(pg.tree()) {
                    assert!(verify_prefactor_identity(ps, &ic));
                }
            }
        }
    }

    #[test]
    fn nested_matches_direct() {
        let n = r(10, 1);
        for pg in [star(&[-1, -2, -3, -7]), star(&[-2, -2, -2, -2, -3]), h_tree()] {
            let ps = ParameterStructure::for_graph(&pg).unwrap();
            let nested = zhat_nested(&pg, &ps, &n).unwrap();
            assert!(!nested.is_empty());
            assert_eq!(nested, zhat_bosonic(&pg, &n).unwrap());
        }
    }

    #[test]
    fn terms_reassemble_the_series() {
        let pg = star(&[-1, -2, -3, -7]);
        let ps = ParameterStructure::for_graph(&pg).unwrap();
        let n = r(6, 1);
        let terms = zhat_terms(&pg, &ps, &n).unwrap();
        let mut s = QSeries::zero(n.clone());
        for t in &terms {
            assert_eq!(t.sign, t.ic.prefactor(pg.tree()));
            s.add_term(t.exponent.clone(), BigInt::from(t.sign) * &t.multiplicity);
        }
        assert_eq!(s, zhat_nested(&pg, &ps, &n).unwrap());
    }

    #[test]
    fn structure_choice_does_not_matter() {
        let pg = graph(
            &[("u", -4), ("v", -4), ("a", -2), ("b", -3), ("c", -2), ("d", -2), ("x", -5), ("y", -3)],
            &[("u", "v"), ("u", "a"), ("u", "b"), ("u", "x"), ("v", "c"), ("v", "d"), ("v", "y")],
            Some("u"),
        );
        let n = r(6, 1);
        let all = ParameterStructure::all(&pg.rooted().unwrap()).unwrap();
        assert_eq!(all.len(), 12);
        let first = zhat_nested(&pg, &all[0], &n).unwrap();
        for ps in &all[1..] {
            assert_eq!(zhat_nested(&pg, ps, &n).unwrap(), first);
        }
    }

    #[test]
    fn nested_rejects_degree_two() {
        let pg = graph(
            &[("a", -2), ("b", -2), ("c", -2), ("d", -3), ("e", -5)],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("c", "e")],
            None,
        );
        let ps = ParameterStructure::for_graph(&star(&[-1, -2, -3, -7])).unwrap();
        assert!(matches!(zhat_nested(&pg, &ps, &r(1, 1)), Err(Error::HasDegreeTwo(_))));
    }
}
