use std::collections::{BTreeMap, BTreeSet};

use super::bits::{Bits, Color};
use super::dag::{ColoredDag, NodeKey};
use crate::error::{Error, Result};

/// Depth up to which a fragment over `q` with `fixed` fixed minus signs and
/// `m` free coordinates is complete. Pulled-back edges live `fixed + m`
/// levels deeper in `q`; an edgeless `q` only constrains the node set.
fn fragment_limit(q: &ColoredDag, fixed: i64, m: usize, max_depth: i64) -> i64 {
    let limit = if q.edge_count() == 0 {
        super::dag::add_truncation(q.truncation(), fixed)
    } else {
        q.truncation() - fixed - m as i64
    };
    limit.min(max_depth)
}

fn missing_shift(c: Color, s: i64) -> Error {
    Error::NotSlim(format!("no node of color ({},{}) for the inclusion", c.bits, c.depth + s))
}

/// The left `λ`-fragment `Q[λ|±^m)`. Nodes are those of `Q□(λ|±^m)`; edges
/// are its own plus those pulled back along
/// `ι(x|λ|μ) = (x'|μ̄|λ̄)`, `d(x') = d(x) + 2(|λ| + |μ|)`.
pub fn fragment_left(q: &ColoredDag, lambda: Bits, max_depth: i64) -> Result<ColoredDag> {
    let index = q.slim_index()?;
    let m = lambda.len();
    let fixed = lambda.weight();
    let t = fragment_limit(q, fixed, m, max_depth);
    let mut nodes = BTreeMap::new();
    for (x, c) in q.nodes() {
        for mu in Bits::all(m) {
            let depth = c.depth + fixed + mu.weight();
            if depth <= t {
                let color = Color::new(c.bits.concat(lambda.mul(mu)?), depth);
                nodes.insert(NodeKey::frag(x, lambda, mu), color);
            }
        }
    }
    let succ = q.successors();
    let mut edges = BTreeSet::new();
    let mut add = |a: &NodeKey, b: NodeKey| {
        if nodes.contains_key(&b) {
            edges.insert((a.clone(), b));
        }
    };
    for (x, c) in q.nodes() {
        for mu in Bits::all(m) {
            let a = NodeKey::frag(x, lambda, mu);
            if !nodes.contains_key(&a) {
                continue;
            }
            for &y in succ.get(x).into_iter().flatten() {
                add(&a, NodeKey::frag(y, lambda, mu));
            }
            let below = index.get(&Color::new(c.bits, c.depth - 2));
            for i in (0..m).filter(|&i| !mu.is_minus(i)) {
                let nu = mu.with(i, true);
                add(&a, NodeKey::frag(x, lambda, nu));
                if let Some(&y) = below {
                    add(&a, NodeKey::frag(y, lambda, nu));
                }
            }
            let s = 2 * (fixed + mu.weight());
            match index.get(&Color::new(c.bits, c.depth + s)) {
                Some(&xs) => {
                    for &ys in succ.get(xs).into_iter().flatten() {
                        let cy = q.color(ys).expect("edge endpoint");
                        if let Some(&y) = index.get(&Color::new(cy.bits, cy.depth - s)) {
                            add(&a, NodeKey::frag(y, lambda, mu));
                        }
                    }
                }
                None if c.depth + s <= q.truncation() => return Err(missing_shift(*c, s)),
                None => {}
            }
        }
    }
    Ok(ColoredDag::from_parts(q.bit_len() + m, nodes, edges, t))
}

/// The right `λ̄`-fragment `Q(±^m|λ̄]`, with edges pulled back along
/// `(x|μ|λ̄) ↦ (x'|λ|μ̄)`, `d(x') = d(x) + 2(|μ| + |λ̄|)`, into `Q(λ|±^m)_{[-2m]}`.
pub fn fragment_right(q: &ColoredDag, lambda_bar: Bits, max_depth: i64) -> Result<ColoredDag> {
    let index = q.slim_index()?;
    let m = lambda_bar.len();
    let fixed = lambda_bar.weight();
    let t = fragment_limit(q, fixed, m, max_depth);
    let mut nodes = BTreeMap::new();
    for (x, c) in q.nodes() {
        for mu in Bits::all(m) {
            let depth = c.depth + mu.weight() + fixed;
            if depth <= t {
                let color = Color::new(c.bits.concat(mu.mul(lambda_bar)?), depth);
                nodes.insert(NodeKey::frag(x, mu, lambda_bar), color);
            }
        }
    }
    let succ = q.successors();
    let mut edges = BTreeSet::new();
    let mut add = |a: &NodeKey, b: NodeKey| {
        if nodes.contains_key(&b) {
            edges.insert((a.clone(), b));
        }
    };
    for (x, c) in q.nodes() {
        for mu in Bits::all(m) {
            let a = NodeKey::frag(x, mu, lambda_bar);
            if !nodes.contains_key(&a) {
                continue;
            }
            for &y in succ.get(x).into_iter().flatten() {
                add(&a, NodeKey::frag(y, mu, lambda_bar));
            }
            let above = index.get(&Color::new(c.bits, c.depth + 2));
            for i in (0..m).filter(|&i| mu.is_minus(i)) {
                let nu = mu.with(i, false);
                add(&a, NodeKey::frag(x, nu, lambda_bar));
                if let Some(&y) = above {
                    add(&a, NodeKey::frag(y, nu, lambda_bar));
                }
            }
            let s = 2 * (mu.weight() + fixed);
            match index.get(&Color::new(c.bits, c.depth + s)) {
                Some(&xs) => {
                    for &ys in succ.get(xs).into_iter().flatten() {
                        let cy = q.color(ys).expect("edge endpoint");
                        if let Some(&y) = index.get(&Color::new(cy.bits, cy.depth - s)) {
                            add(&a, NodeKey::frag(y, mu, lambda_bar));
                        }
                    }
                }
                None if c.depth + s <= q.truncation() => return Err(missing_shift(*c, s)),
                None => {}
            }
        }
    }
    Ok(ColoredDag::from_parts(q.bit_len() + m, nodes, edges, t))
}

/// Image of the left-fragment node `(x|λ|μ)` under `ι`: the key
/// `(x'|μ̄|λ̄)` and its color in `Q(±^m|λ̄)_{[-2m]}`.
pub fn left_inclusion(q: &ColoredDag, x: &NodeKey, lambda: Bits, mu: Bits) -> Result<(NodeKey, Color)> {
    inclusion(q, x, lambda, mu, mu.conj(), lambda.conj())
}

/// Image of the right-fragment node `(x|μ|λ̄)`: the key `(x'|λ|μ̄)` and its
/// color in `Q(λ|±^m)_{[-2m]}`.
pub fn right_inclusion(
    q: &ColoredDag,
    x: &NodeKey,
    mu: Bits,
    lambda_bar: Bits,
) -> Result<(NodeKey, Color)> {
    inclusion(q, x, mu, lambda_bar, lambda_bar.conj(), mu.conj())
}

fn inclusion(
    q: &ColoredDag,
    x: &NodeKey,
    a: Bits,
    b: Bits,
    a2: Bits,
    b2: Bits,
) -> Result<(NodeKey, Color)> {
    let index = q.slim_index()?;
    let c = q
        .color(x)
        .ok_or_else(|| Error::Shape(format!("{x} is not a node of the base")))?;
    let s = 2 * (a.weight() + b.weight());
    let target = Color::new(c.bits, c.depth + s);
    if target.depth > q.truncation() {
        return Err(Error::InsufficientTruncation {
            needed: target.depth.to_string(),
            available: q.truncation().to_string(),
        });
    }
    let xs = index.get(&target).ok_or_else(|| missing_shift(c, s))?;
    let m = a.len() as i64;
    let color = Color::new(
        c.bits.concat(a2.mul(b2)?),
        target.depth + a2.weight() + b2.weight() - 2 * m,
    );
    Ok((NodeKey::frag(xs, a2, b2), color))
}

fn check_lengths(set: &[Bits], what: &str) -> Result<usize> {
    let first = set
        .first()
        .ok_or_else(|| Error::Shape(format!("{what} is empty")))?;
    if let Some(b) = set.iter().find(|b| b.len() != first.len()) {
        return Err(Error::BitLength(first.len(), b.len()));
    }
    Ok(first.len())
}

/// A left fragment family `Q[D|E) = ⊔_{λ∈D} Q[λ|±^m)` restricted to `μ ∈ E`,
/// remembering the base it was built from.
#[derive(Clone, Debug)]
pub struct FragmentFamily {
    base: ColoredDag,
    left: Vec<Bits>,
    right: Vec<Bits>,
    max_depth: i64,
    dag: ColoredDag,
}

impl FragmentFamily {
    pub fn new(base: &ColoredDag, d: &[Bits], e: &[Bits], max_depth: i64) -> Result<FragmentFamily> {
        let m = check_lengths(d, "D")?;
        let m2 = check_lengths(e, "E")?;
        if m != m2 {
            return Err(Error::BitLength(m, m2));
        }
        let mut left = d.to_vec();
        left.sort();
        left.dedup();
        let mut right = e.to_vec();
        right.sort();
        right.dedup();
        let keep: BTreeSet<Bits> = right.iter().copied().collect();
        let parts = left
            .iter()
            .map(|&l| {
                let f = fragment_left(base, l, max_depth)?;
                Ok(f.induced(|k| matches!(k, NodeKey::Frag(_, _, u) if keep.contains(u))))
            })
            .collect::<Result<Vec<_>>>()?;
        let union = ColoredDag::disjoint_union(base.bit_len() + m, &parts)?;
        let dag = union.truncated(union.truncation())?;
        Ok(FragmentFamily {
            base: base.clone(),
            left,
            right,
            max_depth,
            dag,
        })
    }

    /// `Q[±^m|±^m)`.
    pub fn full(base: &ColoredDag, m: usize, max_depth: i64) -> Result<FragmentFamily> {
        let all: Vec<Bits> = Bits::all(m).collect();
        FragmentFamily::new(base, &all, &all, max_depth)
    }

    pub fn base(&self) -> &ColoredDag {
        &self.base
    }

    pub fn left_set(&self) -> &[Bits] {
        &self.left
    }

    pub fn right_set(&self) -> &[Bits] {
        &self.right
    }

    pub fn dag(&self) -> &ColoredDag {
        &self.dag
    }

    pub fn into_dag(self) -> ColoredDag {
        self.dag
    }

    /// Number of fragment coordinates.
    pub fn m(&self) -> usize {
        self.left[0].len()
    }
}

/// The right fragment family `Q(D|E] = ⊔_{λ̄∈E} Q(±^m|λ̄]` restricted to `μ ∈ D`.
pub fn fragment_family_right(
    base: &ColoredDag,
    d: &[Bits],
    e: &[Bits],
    max_depth: i64,
) -> Result<ColoredDag> {
    let m = check_lengths(d, "D")?;
    let m2 = check_lengths(e, "E")?;
    if m != m2 {
        return Err(Error::BitLength(m, m2));
    }
    let keep: BTreeSet<Bits> = d.iter().copied().collect();
    let rights: BTreeSet<Bits> = e.iter().copied().collect();
    let parts = rights
        .iter()
        .map(|&r| {
            let f = fragment_right(base, r, max_depth)?;
            Ok(f.induced(|k| matches!(k, NodeKey::Frag(_, u, _) if keep.contains(u))))
        })
        .collect::<Result<Vec<_>>>()?;
    let union = ColoredDag::disjoint_union(base.bit_len() + m, &parts)?;
    union.truncated(union.truncation())
}

fn sorted_all(m: usize) -> Vec<Bits> {
    let mut v: Vec<Bits> = Bits::all(m).collect();
    v.sort();
    v
}

fn split_first(b: Bits) -> (Bits, Bits) {
    (b.slice(0, 1), b.slice(1, b.len()))
}

/// `H⁰`: from `Q[λ₁±^m|±^{m+1})` keep the nodes whose first right coordinate
/// is `+`, giving `Q[λ₁±^m|+±^m)`. Checks the isomorphism with
/// `Q(λ₁|+)[±^m|±^m)` under `(x|λ₁α|+β) ↦ ((x,(λ₁|+))|α|β)`.
pub fn op_h0(f: &FragmentFamily, lambda1: Bits) -> Result<FragmentFamily> {
    if lambda1.len() != 1 {
        return Err(Error::BitLength(1, lambda1.len()));
    }
    let m = f
        .m()
        .checked_sub(1)
        .ok_or_else(|| Error::Shape("H0 needs at least one coordinate".into()))?;
    let mut expected_left: Vec<Bits> = Bits::all(m).map(|a| lambda1.concat(a)).collect();
    expected_left.sort();
    let all = sorted_all(m + 1);
    if f.left != expected_left || f.right != all {
        return Err(Error::Shape(format!(
            "H0 expects a family [{lambda1}±^{m}|±^{}), first right coordinate free",
            m + 1
        )));
    }
    let dag = f
        .dag
        .induced(|k| matches!(k, NodeKey::Frag(_, _, u) if !u.is_minus(0)));
    let plus = Bits::plus(1);
    let result = FragmentFamily {
        base: f.base.clone(),
        left: f.left.clone(),
        right: all.iter().copied().filter(|u| !u.is_minus(0)).collect(),
        max_depth: f.max_depth,
        dag,
    };

    let cube = ColoredDag::hypercube(&[lambda1], &[plus])?;
    let base2 = f.base.product(&cube);
    let target = FragmentFamily::full(&base2, m, f.max_depth)?;
    let cube_key = NodeKey::Cube(lambda1, plus);
    result.dag.check_isomorphism(&target.dag, |k| match k {
        NodeKey::Frag(x, l, u) => {
            let (_, alpha) = split_first(*l);
            let (_, beta) = split_first(*u);
            Some(NodeKey::frag(&NodeKey::pair(x, &cube_key), alpha, beta))
        }
        _ => None,
    })?;
    Ok(result)
}

/// `/∼`: from the full family `Q[±^m|±^m)` keep the nodes whose first left
/// coordinate is `-`. Checks the isomorphism with `Q[-|±)[±^{m-1}|±^{m-1})`
/// under `(x|-α|μ₁β) ↦ ((x|-|μ₁)|α|β)`.
pub fn op_quot(f: &FragmentFamily) -> Result<FragmentFamily> {
    let m = f.m();
    if m == 0 {
        return Err(Error::Shape("the quotient needs m >= 1".into()));
    }
    let all = sorted_all(m);
    if f.left != all || f.right != all {
        return Err(Error::Shape(format!("quotient expects the full family [±^{m}|±^{m})")));
    }
    let dag = f
        .dag
        .induced(|k| matches!(k, NodeKey::Frag(_, l, _) if l.is_minus(0)));
    let result = FragmentFamily {
        base: f.base.clone(),
        left: all.iter().copied().filter(|l| l.is_minus(0)).collect(),
        right: all,
        max_depth: f.max_depth,
        dag,
    };

    let minus = Bits::minus(1);
    let base2 = fragment_left(&f.base, minus, f.max_depth)?;
    let target = FragmentFamily::full(&base2, m - 1, f.max_depth)?;
    result.dag.check_isomorphism(&target.dag, |k| match k {
        NodeKey::Frag(x, l, u) => {
            let (_, alpha) = split_first(*l);
            let (u1, beta) = split_first(*u);
            Some(NodeKey::frag(&NodeKey::frag(x, minus, u1), alpha, beta))
        }
        _ => None,
    })?;
    Ok(result)
}

/// `[λ₁|±] = ⊕_h [λ₁|±]^h` over a window of Cartan weights, built on `[ | )`.
#[derive(Clone, Debug)]
pub struct BilateralObject {
    base: Bits,
    components: BTreeMap<i64, ColoredDag>,
    plus: BTreeMap<i64, ColoredDag>,
}

impl BilateralObject {
    pub fn base_bit(&self) -> Bits {
        self.base
    }

    pub fn weights(&self) -> impl Iterator<Item = i64> + '_ {
        self.components.keys().copied()
    }

    /// `[λ₁|±]^h`.
    pub fn component(&self, h: i64) -> Option<&ColoredDag> {
        self.components.get(&h)
    }

    /// `[λ₁|+]^h`, the sub-family `[λ₁|+)` resp. `(-|λ̄₁]` of the component.
    pub fn plus_component(&self, h: i64) -> Option<&ColoredDag> {
        self.plus.get(&h)
    }
}

fn parity_ok(h: i64, lambda1: Bits) -> bool {
    (h - lambda1.weight()).rem_euclid(2) == 0
}

/// Components `[λ₁|±]^h` for `h_min <= h <= h_max` with `h ≡ |λ₁| (mod 2)`:
/// `[λ₁|±)_{[h-|λ₁|]}` for `h >= |λ₁|`, `(±|λ̄₁]_{[|λ₁|-h-2]}` below.
pub fn bilateral(lambda1: Bits, h_min: i64, h_max: i64, max_depth: i64) -> Result<BilateralObject> {
    if lambda1.len() != 1 {
        return Err(Error::BitLength(1, lambda1.len()));
    }
    for h in [h_min, h_max] {
        if !parity_ok(h, lambda1) {
            return Err(Error::Parity {
                h,
                base: lambda1.to_string(),
            });
        }
    }
    let w = lambda1.weight();
    let mut components = BTreeMap::new();
    let mut plus = BTreeMap::new();
    for h in (h_min..=h_max).step_by(2) {
        let shift = if h >= w { h - w } else { w - h - 2 };
        if shift > max_depth {
            let empty = ColoredDag::empty(1).truncated(max_depth)?;
            plus.insert(h, empty.clone());
            components.insert(h, empty);
            continue;
        }
        let (frag, shift, sub): (ColoredDag, i64, fn(&NodeKey) -> bool) = if h >= w {
            let shift = h - w;
            let q = ColoredDag::even_chain(max_depth - shift);
            let frag = fragment_left(&q, lambda1, max_depth - shift)?;
            (frag, shift, |k| matches!(k, NodeKey::Frag(_, _, u) if !u.is_minus(0)))
        } else {
            let shift = w - h - 2;
            let q = ColoredDag::even_chain(max_depth - shift);
            let frag = fragment_right(&q, lambda1.conj(), max_depth - shift)?;
            (frag, shift, |k| matches!(k, NodeKey::Frag(_, u, _) if u.is_minus(0)))
        };
        let comp = frag.shift_depth(shift);
        plus.insert(h, comp.induced(sub));
        components.insert(h, comp);
    }
    Ok(BilateralObject {
        base: lambda1,
        components,
        plus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn b(s: &str) -> Bits {
        s.parse().unwrap()
    }

    fn pat(s: &str) -> Vec<Bits> {
        Bits::pattern(s).unwrap()
    }

    fn even(n: i64) -> ColoredDag {
        ColoredDag::even_chain(n)
    }

    #[test]
    fn plus_fragment_of_even_chain() {
        let f = fragment_left(&even(20), b("+"), 5).unwrap();
        let colors: Vec<String> = f.color_multiset().iter().map(|c| c.to_string()).collect();
        assert_eq!(colors, ["+,0", "-,1", "+,2", "-,3", "+,4", "-,5"]);
        assert_eq!(f.truncation(), 5);
        // (k|+|+) -> (k|+|-) and the pulled-back (k|+|+) -> (k-1|+|-)
        assert_eq!(f.edge_count(), 3 + 2);
        assert!(f.is_labeled());
    }

    #[test]
    fn fragment_truncation_is_reported() {
        let q = even(10);
        assert_eq!(fragment_left(&q, b("-"), 100).unwrap().truncation(), 11);
        let f = fragment_left(&q, b("+"), 100).unwrap();
        assert_eq!(fragment_left(&f, b("-"), 100).unwrap().truncation(), 10 - 1 - 1);
    }

    #[test]
    fn fragments_keep_the_cube_nodes() {
        let q = even(12);
        for m in 1..=3 {
            for l in Bits::all(m) {
                let f = fragment_left(&q, l, 12).unwrap();
                let cube = ColoredDag::hypercube(&[l], &Bits::all(m).collect::<Vec<_>>()).unwrap();
                let plain = q.product(&cube).truncated(f.truncation()).unwrap();
                assert_eq!(f.color_multiset(), plain.color_multiset());
                let r = fragment_right(&q, l, 12).unwrap();
                let cube = ColoredDag::hypercube(&Bits::all(m).collect::<Vec<_>>(), &[l]).unwrap();
                let plain = q.product(&cube).truncated(r.truncation()).unwrap();
                assert_eq!(r.color_multiset(), plain.color_multiset());
            }
        }
    }

    fn slim_corpus() -> Vec<ColoredDag> {
        let q = even(24);
        let p = fragment_left(&q, b("+"), 24).unwrap();
        let n = fragment_left(&q, b("-"), 24).unwrap();
        let r = fragment_right(&q, b("-"), 24).unwrap();
        let cube = ColoredDag::hypercube(&pat("-"), &pat("+")).unwrap();
        vec![q, p.clone(), n, r, p.product(&cube)]
    }

    #[test]
    fn slimness_is_preserved() {
        for q in slim_corpus() {
            assert!(q.is_slim());
            for m in 1..=2 {
                for l in Bits::all(m) {
                    assert!(fragment_left(&q, l, 16).unwrap().is_slim());
                    assert!(fragment_right(&q, l, 16).unwrap().is_slim());
                }
            }
            assert!(q.shift(Bits::minus(q.bit_len()), 4).unwrap().is_slim());
            let cube = ColoredDag::hypercube(&pat("-"), &pat("-")).unwrap();
            assert!(q.product(&cube).is_slim());
        }
        assert!(matches!(fragment_left(&ColoredDag::point(), b("+"), 4), Err(Error::NotSlim(_))));
    }

    #[test]
    fn inclusions_are_injective_and_color_preserving() {
        for q in slim_corpus() {
            for m in 1..=3 {
                for l in Bits::all(m) {
                    let mut seen = HashSet::new();
                    for (x, c) in q.nodes() {
                        for mu in Bits::all(m) {
                            let depth = c.depth + 2 * (l.weight() + mu.weight());
                            if depth > q.truncation() {
                                continue;
                            }
                            let (key, color) = left_inclusion(&q, x, l, mu).unwrap();
                            assert_eq!(color, Color::new(c.bits.concat(l.mul(mu).unwrap()), c.depth + l.weight() + mu.weight()));
                            assert!(seen.insert(key));
                        }
                    }
                    let mut seen = HashSet::new();
                    for (x, c) in q.nodes() {
                        for mu in Bits::all(m) {
                            let depth = c.depth + 2 * (l.weight() + mu.weight());
                            if depth > q.truncation() {
                                continue;
                            }
                            let (key, color) = right_inclusion(&q, x, mu, l).unwrap();
                            assert_eq!(color, Color::new(c.bits.concat(mu.mul(l).unwrap()), c.depth + l.weight() + mu.weight()));
                            assert!(seen.insert(key));
                        }
                    }
                }
            }
        }
    }

    fn concat_frag(k: &NodeKey) -> Option<NodeKey> {
        // ((x|λ|μ)|λ'|μ') ↦ (x|λλ'|μμ')
        match k {
            NodeKey::Frag(inner, l2, u2) => match &**inner {
                NodeKey::Frag(x, l1, u1) => Some(NodeKey::frag(x, l1.concat(*l2), u1.concat(*u2))),
                _ => None,
            },
            _ => None,
        }
    }

    #[test]
    fn composition_of_fragments() {
        // includes [+|±)[+|±) ≅ [++|±²) over [ | )
        let q = even(30);
        for (m, n) in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1)] {
            for l in Bits::all(m) {
                for u in Bits::all(n) {
                    let inner = fragment_left(&q, l, 30).unwrap();
                    let nested = fragment_left(&inner, u, 30).unwrap();
                    let joint = fragment_left(&q, l.concat(u), 30).unwrap();
                    nested.check_isomorphism(&joint, concat_frag).unwrap();
                }
            }
        }
    }

    #[test]
    fn left_and_right_agree_above_depth_zero() {
        let q = even(30);
        for l in pat("±") {
            let left = fragment_left(&q, l, 20).unwrap();
            let right = fragment_right(&q, l.conj(), 20).unwrap();
            let cut = |d: &ColoredDag| d.induced(|k| d.color(k).unwrap().depth >= 1);
            cut(&left).check_isomorphism_by_color(&cut(&right)).unwrap();
        }
    }

    #[test]
    fn h0_examples() {
        let q = even(30);
        for l in pat("±") {
            let f = FragmentFamily::new(&q, &[l], &pat("±"), 12).unwrap();
            let h = op_h0(&f, l).unwrap();
            // [λ₁|+) has the nodes of (λ₁|+)·[ | )
            let shape = q.product(&ColoredDag::hypercube(&[l], &pat("+")).unwrap());
            let shape = shape.truncated(h.dag().truncation()).unwrap();
            assert_eq!(h.dag().color_multiset(), shape.color_multiset());
            assert!(h.dag().nodes().all(|(k, _)| f.dag().contains(k)));
        }
        for m in 0..=2 {
            for l in pat("±") {
                let left: Vec<Bits> = Bits::all(m).map(|a| l.concat(a)).collect();
                let right: Vec<Bits> = Bits::all(m + 1).collect();
                let f = FragmentFamily::new(&q, &left, &right, 16).unwrap();
                op_h0(&f, l).unwrap();
            }
        }
        let f = FragmentFamily::full(&q, 1, 10).unwrap();
        assert!(matches!(op_h0(&f, b("+")), Err(Error::Shape(_))));
    }

    #[test]
    fn quotient_examples() {
        let q = even(30);
        let f = FragmentFamily::full(&q, 1, 12).unwrap();
        let r = op_quot(&f).unwrap();
        let direct = fragment_left(&q, b("-"), 12).unwrap();
        assert_eq!(r.dag(), &direct);
        for m in 1..=3 {
            let f = FragmentFamily::full(&q, m, 16).unwrap();
            let r = op_quot(&f).unwrap();
            // count only base nodes whose whole cube fiber lies below the truncation
            let t = f.dag().truncation();
            let complete = |d: &ColoredDag| {
                d.nodes()
                    .filter(|(k, _)| match k {
                        NodeKey::Frag(x, _, _) => q.color(x).unwrap().depth + 2 * m as i64 <= t,
                        _ => false,
                    })
                    .count()
            };
            assert!(complete(r.dag()) > 0);
            assert_eq!(2 * complete(r.dag()), complete(f.dag()));
        }
        let f = FragmentFamily::full(&q, 0, 10).unwrap();
        assert!(matches!(op_quot(&f), Err(Error::Shape(_))));
    }

    #[test]
    fn bilateral_examples() {
        for l in pat("±") {
            let w = l.weight();
            let obj = bilateral(l, w - 4, w + 4, 12).unwrap();
            let q = even(30);
            let left = fragment_left(&q, l, 12).unwrap();
            assert_eq!(obj.component(w).unwrap(), &left);
            let right = fragment_right(&q, l.conj(), 12).unwrap();
            assert_eq!(obj.component(w - 2).unwrap(), &right);
            let two = fragment_left(&q, l, 10).unwrap().shift_depth(2);
            assert_eq!(obj.component(w + 2).unwrap(), &two);
            assert_eq!(obj.weights().count(), 5);
        }
        assert!(matches!(bilateral(b("+"), -1, 3, 10), Err(Error::Parity { .. })));
    }
}
