//! Characters of colored DAGs and the alternating-sum identities they satisfy.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::dagcat::{
    bilateral, fragment_left, Bits, Color, ColoredDag, FragmentFamily, NodeKey, UNBOUNDED,
};
use crate::error::{Error, Result};

/// A finite integer combination of colors, known up to depth `truncation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KElement {
    bit_len: usize,
    terms: BTreeMap<Color, i64>,
    truncation: i64,
}

fn checked(x: Option<i64>) -> Result<i64> {
    x.ok_or(Error::Overflow("K-group coefficient"))
}

fn insufficient(needed: i64, available: i64) -> Error {
    Error::InsufficientTruncation {
        needed: needed.to_string(),
        available: available.to_string(),
    }
}

impl KElement {
    pub fn zero(bit_len: usize, truncation: i64) -> KElement {
        KElement {
            bit_len,
            terms: BTreeMap::new(),
            truncation,
        }
    }

    /// The class of the one-point DAG, `(∅, 0)`.
    pub fn unit() -> KElement {
        let mut k = KElement::zero(0, UNBOUNDED);
        k.terms.insert(Color::new(Bits::EMPTY, 0), 1);
        k
    }

    pub fn from_terms(
        bit_len: usize,
        terms: impl IntoIterator<Item = (Color, i64)>,
        truncation: i64,
    ) -> Result<KElement> {
        let mut k = KElement::zero(bit_len, truncation);
        for (c, x) in terms {
            k.add_term(c, x)?;
        }
        Ok(k)
    }

    pub fn bit_len(&self) -> usize {
        self.bit_len
    }

    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms sorted by depth, then bits.
    pub fn iter(&self) -> impl Iterator<Item = (&Color, &i64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, c: &Color) -> i64 {
        self.terms.get(c).copied().unwrap_or(0)
    }

    /// Accumulates `x·c`; terms deeper than the truncation are dropped.
    pub fn add_term(&mut self, c: Color, x: i64) -> Result<()> {
        if c.bits.len() != self.bit_len {
            return Err(Error::BitLength(self.bit_len, c.bits.len()));
        }
        if x == 0 || c.depth > self.truncation {
            return Ok(());
        }
        let slot = self.terms.entry(c).or_insert(0);
        *slot = checked(slot.checked_add(x))?;
        if *slot == 0 {
            self.terms.remove(&c);
        }
        Ok(())
    }

    pub fn add(&self, other: &KElement) -> Result<KElement> {
        if self.bit_len != other.bit_len {
            return Err(Error::BitLength(self.bit_len, other.bit_len));
        }
        let mut out = KElement::zero(self.bit_len, self.truncation.min(other.truncation));
        for (c, x) in self.iter().chain(other.iter()) {
            out.add_term(*c, *x)?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> Result<KElement> {
        let mut out = KElement::zero(self.bit_len, self.truncation);
        for (c, x) in self.iter() {
            out.add_term(*c, checked(x.checked_mul(k))?)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &KElement) -> Result<KElement> {
        self.add(&other.scale(-1)?)
    }

    fn min_depth(&self) -> i64 {
        self.terms.keys().map(|c| c.depth).min().unwrap_or(0)
    }

    /// Character of the Cartesian product: bits concatenate, depths add.
    pub fn kmul(&self, other: &KElement) -> Result<KElement> {
        let t = add_trunc(self.truncation, other.min_depth())
            .min(add_trunc(other.truncation, self.min_depth()));
        let mut out = KElement::zero(self.bit_len + other.bit_len, t);
        for (a, x) in self.iter() {
            for (b, y) in other.iter() {
                if a.depth + b.depth > t {
                    continue;
                }
                let c = Color::new(a.bits.concat(b.bits), a.depth + b.depth);
                out.add_term(c, checked(x.checked_mul(*y))?)?;
            }
        }
        Ok(out)
    }

    /// Every color `(b, k)` becomes `(λ∗b, k + d)`; empty `λ` shifts depth only.
    pub fn shift(&self, lambda: Bits, d: i64) -> Result<KElement> {
        if !lambda.is_empty() && lambda.len() != self.bit_len {
            return Err(Error::BitLength(self.bit_len, lambda.len()));
        }
        let mut out = KElement::zero(self.bit_len, add_trunc(self.truncation, d));
        for (c, x) in self.iter() {
            let bits = if lambda.is_empty() { c.bits } else { lambda.mul(c.bits)? };
            out.add_term(Color::new(bits, c.depth + d), *x)?;
        }
        Ok(out)
    }

    pub fn truncate(&self, t: i64) -> Result<KElement> {
        if t > self.truncation {
            return Err(insufficient(t, self.truncation));
        }
        Ok(KElement {
            bit_len: self.bit_len,
            terms: self.terms.iter().filter(|(c, _)| c.depth <= t).map(|(c, x)| (*c, *x)).collect(),
            truncation: t,
        })
    }

    /// Coordinate `i` of the result is coordinate `perm[i]` of `self`.
    pub fn permute_bits(&self, perm: &[usize]) -> Result<KElement> {
        if perm.len() != self.bit_len {
            return Err(Error::BitLength(self.bit_len, perm.len()));
        }
        KElement::from_terms(
            self.bit_len,
            self.iter().map(|(c, x)| (Color::new(c.bits.permute(perm), c.depth), *x)),
            self.truncation,
        )
    }

    /// Exact equality of all terms of depth `<= n`.
    pub fn equal_to_depth(&self, other: &KElement, n: i64) -> Result<bool> {
        for k in [self, other] {
            if k.truncation < n {
                return Err(insufficient(n, k.truncation));
            }
        }
        if self.bit_len != other.bit_len {
            return Err(Error::BitLength(self.bit_len, other.bit_len));
        }
        Ok(self.truncate(n)?.terms == other.truncate(n)?.terms)
    }

    /// Coefficientwise `self >= other` on depths `<= n`.
    pub fn dominates(&self, other: &KElement, n: i64) -> Result<bool> {
        let diff = self.truncate(n)?.sub(&other.truncate(n)?)?;
        let ok = diff.iter().all(|(_, x)| *x > 0);
        Ok(ok)
    }
}

fn add_trunc(t: i64, d: i64) -> i64 {
    if t >= UNBOUNDED / 2 {
        UNBOUNDED
    } else {
        t + d
    }
}

/// `Σ_{x: d(x) <= n} (b(x), d(x))`.
pub fn char(q: &ColoredDag, n: i64) -> Result<KElement> {
    if q.truncation() < n {
        return Err(insufficient(n, q.truncation()));
    }
    let mut k = KElement::zero(q.bit_len(), n);
    for (_, c) in q.nodes() {
        k.add_term(*c, 1)?;
    }
    Ok(k)
}

fn multiplicity(n: i64, m: usize) -> BigInt {
    binomial(BigInt::from(n + m as i64 - 1), BigInt::from(n))
}

/// `[λ₁|+)` over `[ | )`.
fn plus_slice(lambda1: Bits, depth: i64) -> Result<ColoredDag> {
    let f = fragment_left(&ColoredDag::even_chain(depth), lambda1, depth)?;
    Ok(f.induced(|k| matches!(k, NodeKey::Frag(_, _, u) if !u.is_minus(0))))
}

/// `[λ₁|+)∗[+^{m-1}|-^{m-1})`, the left-hand side of the star identity.
pub fn star_lhs_dag(lambda1: Bits, m: usize, n: i64) -> Result<ColoredDag> {
    if m == 0 {
        return Err(Error::Shape("the star identity needs m >= 1".into()));
    }
    let base = plus_slice(lambda1, n + 2)?.reverse();
    let fam = FragmentFamily::new(&base, &[Bits::plus(m - 1)], &[Bits::minus(m - 1)], n)?;
    Ok(fam.into_dag())
}

/// Character of `[+|±)∗[+^{m-1}|±^{m-1})` to depth `n`.
fn star_base(m: usize, n: i64) -> Result<KElement> {
    let depth = n + 2 * m as i64 + 4;
    let base = fragment_left(&ColoredDag::even_chain(depth), Bits::plus(1), depth)?.reverse();
    let all: Vec<Bits> = Bits::all(m - 1).collect();
    let fam = FragmentFamily::new(&base, &[Bits::plus(m - 1)], &all, n)?;
    char(fam.dag(), n)
}

/// Bits shift of the star sum: `λ₁∗ν₁` on the first coordinate, the
/// remaining coordinates of `ν` conjugated.
pub fn star_bit_shift(lambda1: Bits, nu: Bits) -> Result<Bits> {
    let (head, tail) = (nu.slice(0, 1), nu.slice(1, nu.len()));
    Ok(lambda1.mul(head)?.concat(tail.conj()))
}

fn n_bound(n: i64, m: usize, lambda_bar_weight: i64) -> i64 {
    let num = n - m as i64 + lambda_bar_weight;
    if num < 0 {
        0
    } else {
        (num + 1) / 2 + 1
    }
}

/// `Σ_ν (-1)^{|ν|} Σ_n C(n+m-1, n) · (λ₁∗ν₁)ν̄₂…ν̄_m · char([+|±)∗[+^{m-1}|±^{m-1}))_{[2n+m+|ν|-|λ̄₁|]}`.
pub fn star_rhs(lambda1: Bits, m: usize, n: i64) -> Result<KElement> {
    signed_star_sum(lambda1, m, n, &star_base(m, n)?, true)
}

fn signed_star_sum(lambda1: Bits, m: usize, n: i64, base: &KElement, signed: bool) -> Result<KElement> {
    if m == 0 || lambda1.len() != 1 {
        return Err(Error::Shape("star sums need m >= 1 and a single base bit".into()));
    }
    let lb = lambda1.conj().weight();
    let parts: Vec<Result<KElement>> = Bits::all(m)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|nu| {
            let sign = if signed && nu.weight() % 2 == 1 { -1 } else { 1 };
            let bits = star_bit_shift(lambda1, nu)?;
            let mut acc = KElement::zero(m, n);
            for k in 0..=n_bound(n, m, lb) {
                let d = 2 * k + m as i64 + nu.weight() - lb;
                if d > n {
                    break;
                }
                let mult = multiplicity(k, m).to_i64().ok_or(Error::Overflow("multiplicity"))?;
                acc = acc.add(&base.shift(bits, d)?.scale(sign * mult)?)?;
            }
            Ok(acc)
        })
        .collect();
    parts
        .into_iter()
        .try_fold(KElement::zero(m, n), |acc, p| acc.add(&p?))
}

pub fn verify_star_identity(lambda1: Bits, m: usize, n: i64) -> Result<bool> {
    let lhs = char(&star_lhs_dag(lambda1, m, n)?, n)?;
    lhs.equal_to_depth(&star_rhs(lambda1, m, n)?, n)
}

/// The unsigned star sum over the projective family
/// `⊔_λ [λ|±)∗[±^{m-1}|±^{m-1})` dominates the left-hand side termwise.
pub fn verify_projective_dominance(lambda1: Bits, m: usize, n: i64) -> Result<bool> {
    let depth = n + 2 * m as i64 + 4;
    let all: Vec<Bits> = Bits::all(m - 1).collect();
    let mut base = KElement::zero(m, n);
    for l in Bits::all(1) {
        let b = fragment_left(&ColoredDag::even_chain(depth), l, depth)?.reverse();
        let fam = FragmentFamily::new(&b, &all, &all, n)?;
        base = base.add(&char(fam.dag(), n)?)?;
    }
    let rhs = signed_star_sum(lambda1, m, n, &base, false)?;
    let lhs = char(&star_lhs_dag(lambda1, m, n)?, n)?;
    rhs.dominates(&lhs, n)
}

/// One summand of the tree sum: fixed `ν = (ν_v)` and `n = (n_v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeTerm {
    pub nu: Vec<Bits>,
    pub n: Vec<i64>,
    /// `(-1)^{Σ|ν_v|}`.
    pub sign: i64,
    /// `∏ C(n_v + m_v - 1, n_v)`.
    pub multiplicity: BigInt,
    /// `ν̄_v` per node.
    pub bit_shift: Vec<Bits>,
    /// `2n_v + m_v + |ν_v|` per node.
    pub depth_shift: Vec<i64>,
}

/// Terms of the tree sum for a fixed `ν`, with `n` ranging over the box
/// `0 <= n_v <= n_max[v]` in lexicographic order.
pub struct TreeTerms {
    m: Vec<usize>,
    nu: Vec<Bits>,
    n_max: Vec<i64>,
    next: Option<Vec<i64>>,
}

impl TreeTerms {
    pub fn new(m: &[usize], nu: &[Bits], n_max: &[i64]) -> Result<TreeTerms> {
        if m.len() != nu.len() || m.len() != n_max.len() {
            return Err(Error::DimensionMismatch {
                expected: m.len(),
                got: nu.len().min(n_max.len()),
            });
        }
        if let Some((mv, b)) = m.iter().zip(nu).find(|(mv, b)| **mv != b.len()) {
            return Err(Error::BitLength(*mv, b.len()));
        }
        let empty = n_max.iter().any(|&x| x < 0);
        Ok(TreeTerms {
            m: m.to_vec(),
            nu: nu.to_vec(),
            n_max: n_max.to_vec(),
            next: if empty { None } else { Some(vec![0; m.len()]) },
        })
    }
}

impl Iterator for TreeTerms {
    type Item = TreeTerm;

    fn next(&mut self) -> Option<TreeTerm> {
        let n = self.next.take()?;
        let mut succ = n.clone();
        let mut i = succ.len();
        self.next = loop {
            if i == 0 {
                break None;
            }
            i -= 1;
            if succ[i] < self.n_max[i] {
                succ[i] += 1;
                break Some(succ);
            }
            succ[i] = 0;
        };
        let weight: i64 = self.nu.iter().map(Bits::weight).sum();
        Some(TreeTerm {
            sign: if weight % 2 == 0 { 1 } else { -1 },
            multiplicity: n
                .iter()
                .zip(&self.m)
                .map(|(&k, &mv)| multiplicity(k, mv))
                .product(),
            bit_shift: self.nu.iter().map(|b| b.conj()).collect(),
            depth_shift: n
                .iter()
                .zip(&self.m)
                .zip(&self.nu)
                .map(|((&k, &mv), b)| 2 * k + mv as i64 + b.weight())
                .collect(),
            nu: self.nu.clone(),
            n,
        })
    }
}

/// All `ν ∈ ∏_v Z₂^{m_v}`, in lexicographic order of the blocks.
pub fn nu_choices(m: &[usize]) -> Vec<Vec<Bits>> {
    m.iter().fold(vec![Vec::new()], |acc, &mv| {
        acc.into_iter()
            .flat_map(|prefix| {
                Bits::all(mv).map(move |b| {
                    let mut p = prefix.clone();
                    p.push(b);
                    p
                })
            })
            .collect()
    })
}

/// The tree sum, per-node bit blocks concatenated in the given node order.
pub fn tree_rhs(m: &[usize], n: i64) -> Result<KElement> {
    if m.is_empty() || m.contains(&0) {
        return Err(Error::Shape("the tree sum needs nodes with m_v >= 1".into()));
    }
    let total: usize = m.iter().sum();
    let mut bases = BTreeMap::new();
    for &mv in m {
        if let std::collections::btree_map::Entry::Vacant(e) = bases.entry(mv) {
            e.insert(star_base(mv, n)?);
        }
    }
    let parts: Vec<Result<KElement>> = nu_choices(m)
        .into_par_iter()
        .map(|nu| {
            let n_max: Vec<i64> = m.iter().map(|&mv| n_bound(n, mv, 0)).collect();
            let mut acc = KElement::zero(total, n);
            for term in TreeTerms::new(m, &nu, &n_max)? {
                if term.depth_shift.iter().sum::<i64>() > n {
                    continue;
                }
                let mult = term.multiplicity.to_i64().ok_or(Error::Overflow("multiplicity"))?;
                let mut prod = KElement::unit();
                for (v, &mv) in m.iter().enumerate() {
                    let f = bases[&mv].shift(term.bit_shift[v], term.depth_shift[v])?;
                    prod = prod.kmul(&f)?.truncate(n)?;
                }
                acc = acc.add(&prod.scale(term.sign * mult)?)?;
            }
            Ok(acc)
        })
        .collect();
    parts
        .into_iter()
        .try_fold(KElement::zero(total, n), |acc, p| acc.add(&p?))
}

/// `∏_v [-|+)∗[+^{m_v-1}|-^{m_v-1})` as one product DAG.
pub fn tree_lhs_dag(m: &[usize], n: i64) -> Result<ColoredDag> {
    let mut dag = ColoredDag::point();
    for &mv in m {
        dag = dag.product(&star_lhs_dag(Bits::minus(1), mv, n)?);
    }
    dag.truncated(n)
}

pub fn verify_tree_identity(m: &[usize], n: i64) -> Result<bool> {
    let lhs = char(&tree_lhs_dag(m, n)?, n)?;
    lhs.equal_to_depth(&tree_rhs(m, n)?, n)
}

/// Per Cartan weight `h` (with the parity of `|λ₁|`) in `[h_lo, h_hi]`:
/// `[λ₁|±]^h = [λ₁|+]^h + [λ̄₁|+]^{h+1}` in characters, and `[λ₁|+]^h` is a
/// subobject of `[λ₁|±]^h`.
pub fn verify_felder(lambda1: Bits, h_lo: i64, h_hi: i64, n: i64) -> Result<bool> {
    let w = lambda1.weight();
    let lo = h_lo + (h_lo - w).rem_euclid(2);
    let hi = h_hi - (h_hi - w).rem_euclid(2);
    if lo > hi {
        return Ok(true);
    }
    let this = bilateral(lambda1, lo, hi, n)?;
    let other = bilateral(lambda1.conj(), lo + 1, hi + 1, n)?;
    for h in (lo..=hi).step_by(2) {
        let whole = this.component(h).expect("in window");
        let sub = this.plus_component(h).expect("in window");
        let quot = other.plus_component(h + 1).expect("in window");
        let keys: HashSet<&NodeKey> = sub.nodes().map(|(k, _)| k).collect();
        if !whole.is_closed_under_predecessors(&keys) {
            return Ok(false);
        }
        let lhs = char(whole, n)?;
        let rhs = char(sub, n)?.add(&char(quot, n)?)?;
        if !lhs.equal_to_depth(&rhs, n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(±^I|±^I)·[±^{m-I}|±^{m-I})` over `[ | )`, with colors reordered to the
/// original coordinates.
pub fn defrag_dag(m: usize, i_set: &[usize], n: i64) -> Result<ColoredDag> {
    let (inside, outside) = split_coords(m, i_set)?;
    let cube = full_cube(inside.len())?;
    let fam = FragmentFamily::full(&ColoredDag::even_chain(n + 2), outside.len(), n)?;
    cube.product(fam.dag()).permute_bits(&placement(m, &[&inside, &outside]))
}

fn full_cube(k: usize) -> Result<ColoredDag> {
    let all: Vec<Bits> = Bits::all(k).collect();
    ColoredDag::hypercube(&all, &all)
}

fn split_coords(m: usize, i_set: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut inside = i_set.to_vec();
    inside.sort_unstable();
    inside.dedup();
    if inside.iter().any(|&i| i >= m) {
        return Err(Error::Shape(format!("coordinate set {i_set:?} outside 0..{m}")));
    }
    let outside = (0..m).filter(|i| !inside.contains(i)).collect();
    Ok((inside, outside))
}

/// `perm[i]` is the position of original coordinate `i` when the blocks are
/// laid out one after the other.
fn placement(m: usize, blocks: &[&[usize]]) -> Vec<usize> {
    let mut perm = vec![0; m];
    let mut pos = 0;
    for block in blocks {
        for &i in *block {
            perm[i] = pos;
            pos += 1;
        }
    }
    perm
}

/// Defragmenting the coordinates `I` leaves the character of
/// `[±^m|±^m)` unchanged; for every split `I = I₁ ⊔ I₂` the sequential
/// defragmentation agrees with the joint one.
pub fn verify_defrag(m: usize, i_set: &[usize], n: i64) -> Result<bool> {
    let full = FragmentFamily::full(&ColoredDag::even_chain(n + 2), m, n)?;
    let joint = defrag_dag(m, i_set, n)?;
    if !char(full.dag(), n)?.equal_to_depth(&char(&joint, n)?, n)? {
        return Ok(false);
    }
    let (inside, _) = split_coords(m, i_set)?;
    for mask in 1..(1u32 << inside.len()) - 1 {
        let first: Vec<usize> = inside.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &i)| i).collect();
        if !verify_fubini(m, &first, &inside, n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Defragmenting `I₁` and then `I \ I₁` matches defragmenting `I` at once,
/// both in characters and as colored DAGs.
pub fn verify_fubini(m: usize, first: &[usize], i_set: &[usize], n: i64) -> Result<bool> {
    let (inside, outside) = split_coords(m, i_set)?;
    let (first, _) = split_coords(m, first)?;
    if first.iter().any(|i| !inside.contains(i)) {
        return Err(Error::Shape("the first step must lie inside I".into()));
    }
    let second: Vec<usize> = inside.iter().copied().filter(|i| !first.contains(i)).collect();
    let fam = FragmentFamily::full(&ColoredDag::even_chain(n + 2), outside.len(), n)?;
    let seq = full_cube(first.len())?
        .product(&full_cube(second.len())?.product(fam.dag()))
        .permute_bits(&placement(m, &[&first, &second, &outside]))?;
    let joint = defrag_dag(m, i_set, n)?;
    if !char(&seq, n)?.equal_to_depth(&char(&joint, n)?, n)? {
        return Ok(false);
    }
    let pos_in = |i: usize| inside.iter().position(|&x| x == i).expect("inside I");
    let merge = |a: Bits, b: Bits| {
        let mut out = Bits::plus(inside.len());
        for (k, &i) in first.iter().enumerate() {
            out = out.with(pos_in(i), a.is_minus(k));
        }
        for (k, &i) in second.iter().enumerate() {
            out = out.with(pos_in(i), b.is_minus(k));
        }
        out
    };
    let relabel = |k: &NodeKey| match k {
        NodeKey::Pair(c1, rest) => match (&**c1, &**rest) {
            (NodeKey::Cube(l1, u1), NodeKey::Pair(c2, f)) => match &**c2 {
                NodeKey::Cube(l2, u2) => Some(NodeKey::pair(
                    &NodeKey::Cube(merge(*l1, *l2), merge(*u1, *u2)),
                    f,
                )),
                _ => None,
            },
            _ => None,
        },
        _ => None,
    };
    Ok(seq.check_isomorphism(&joint, relabel).is_ok())
}
