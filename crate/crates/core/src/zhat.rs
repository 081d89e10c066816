//! Direct evaluation of the bosonic sum
//!
//! ```text
//! Σ_e ∏_v e_v^{deg v - |v̄|} Σ_ε ∏_i ε_i Σ_n ∏_v C(n_v + deg v - 3, n_v) q^{Q(ex)}
//! ```
//!
//! over `e ∈ {±1}^{V≥3}`, `ε ∈ {±1}^{V₁}` and `n ∈ Z≥0^{V≥3}`. Vertices of
//! degree two carry neither an `n` nor an `e`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::plumbing::{PlumbedGraph, QuadraticForm};
use crate::qseries::QSeries;

/// One summand of the bosonic sum, kept with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BosonicSummand {
    pub e: BTreeMap<usize, i8>,
    pub eps: BTreeMap<usize, i8>,
    pub n: BTreeMap<usize, i64>,
    /// `x` over `V≥2`, in the order of [`QuadraticForm::index`].
    pub x: Vec<BigRational>,
}

impl BosonicSummand {
    /// Builds the summand for the given signs and shifts. All maps are keyed
    /// by vertex index and must be total on `V≥3` (for `e`, `n`) and `V₁`.
    pub fn new(
        pg: &PlumbedGraph,
        form: &QuadraticForm,
        e: BTreeMap<usize, i8>,
        eps: BTreeMap<usize, i8>,
        n: BTreeMap<usize, i64>,
    ) -> Result<BosonicSummand> {
        let tree = pg.tree();
        let part = tree.degree_partition();
        let missing = |what: &str, v: usize| Error::Shape(format!("no {what} for vertex {}", tree.id(v)));
        for &v in &part.nodes {
            e.get(&v).ok_or_else(|| missing("e", v))?;
            n.get(&v).ok_or_else(|| missing("n", v))?;
        }
        for &i in &part.leaves {
            eps.get(&i).ok_or_else(|| missing("ε", i))?;
        }
        let x = form
            .index()
            .iter()
            .map(|&v| {
                let mut xv = BigRational::zero();
                if tree.degree(v) >= 3 {
                    xv += BigRational::from_integer(n[&v].into())
                        + BigRational::new(BigInt::from(tree.degree(v) - 2), BigInt::from(2));
                }
                for i in tree.leaf_neighbors(v) {
                    xv += BigRational::new(eps[&i].into(), BigInt::from(2 * pg.weight(i)));
                }
                xv
            })
            .collect();
        Ok(BosonicSummand { e, eps, n, x })
    }

    /// `ex`: coordinates on `V≥3` multiplied by `e_v`, those on `V₂` untouched.
    pub fn signed_vector(&self, form: &QuadraticForm) -> Vec<BigRational> {
        form.index()
            .iter()
            .zip(&self.x)
            .map(|(v, xv)| match self.e.get(v) {
                Some(-1) => -xv,
                _ => xv.clone(),
            })
            .collect()
    }

    pub fn sign(&self, pg: &PlumbedGraph) -> i64 {
        let tree = pg.tree();
        let mut s: i64 = self.eps.values().map(|&x| x as i64).product();
        for (&v, &ev) in &self.e {
            let k = tree.degree(v) - tree.leaf_neighbors(v).len();
            if ev == -1 && k % 2 == 1 {
                s = -s;
            }
        }
        s
    }

    pub fn multiplicity(&self, pg: &PlumbedGraph) -> BigInt {
        self.n
            .iter()
            .map(|(&v, &k)| {
                let top = BigInt::from(k + pg.tree().degree(v) as i64 - 3);
                num_integer::binomial(top, BigInt::from(k))
            })
            .product()
    }

    pub fn exponent(&self, form: &QuadraticForm) -> Result<BigRational> {
        form.eval(&self.signed_vector(form))
    }
}

/// Per-coordinate bounds `B` with `Q(y) <= N  ⟹  |y_v| <= B_v`, from
/// `Q(y) >= ‖y‖² / r` where `r` is the maximal absolute row sum of `S⁻¹`.
pub fn enumeration_bound(form: &QuadraticForm, order: &BigRational) -> Vec<i64> {
    let b = if order.is_positive() {
        let t = (order * form.inverse_row_sum_bound()).ceil().to_integer();
        let mut b = t.sqrt();
        if &b * &b < t {
            b += 1;
        }
        b.to_i64().expect("enumeration bound fits in i64")
    } else {
        0
    };
    vec![b; form.dim()]
}

/// The bosonic sum truncated at exponent `order`.
pub fn zhat_bosonic(pg: &PlumbedGraph, order: &BigRational) -> Result<QSeries> {
    zhat_bosonic_with_slack(pg, order, 0)
}

/// As [`zhat_bosonic`], with every enumeration bound enlarged by `slack`.
/// The result must not depend on `slack >= 0`.
pub fn zhat_bosonic_with_slack(pg: &PlumbedGraph, order: &BigRational, slack: i64) -> Result<QSeries> {
    let lat = Lattice::new(pg, order, slack)?;
    let tree = pg.tree();
    let index = lat.form.index().to_vec();
    let node_pos: Vec<usize> = (0..index.len()).filter(|&p| tree.degree(index[p]) >= 3).collect();
    let leaves = tree.degree_partition().leaves;
    if node_pos.len() > 24 || leaves.len() > 24 {
        return Err(Error::Shape("too many sign variables to enumerate".into()));
    }
    // `e_v` enters the prefactor only through the parity of deg v - |v̄|
    let odd: Vec<bool> = node_pos
        .iter()
        .map(|&p| (tree.degree(index[p]) - tree.leaf_neighbors(index[p]).len()) % 2 == 1)
        .collect();
    let m: Vec<usize> = node_pos.iter().map(|&p| tree.degree(index[p]) - 2).collect();

    let acc = (0u32..1 << node_pos.len())
        .into_par_iter()
        .map(|emask| {
            let mut acc = Accumulator::default();
            let e_sign: i128 = (0..node_pos.len())
                .filter(|&k| emask >> k & 1 == 1 && odd[k])
                .fold(1, |s, _| -s);
            for epsmask in 0u32..1 << leaves.len() {
                let eps: Vec<i8> = (0..leaves.len())
                    .map(|k| if epsmask >> k & 1 == 1 { -1 } else { 1 })
                    .collect();
                let eps_sign: i128 = eps.iter().map(|&x| x as i128).product();
                let mut off = vec![0i64; index.len()];
                for (k, &i) in leaves.iter().enumerate() {
                    let p = lat.owner(i);
                    off[p] += eps[k] as i64 * lat.leaf_step(pg.weight(i));
                }
                for (k, &p) in node_pos.iter().enumerate() {
                    off[p] += m[k] as i64 * lat.scale / 2;
                }
                let n_max: Vec<i64> = node_pos.iter().map(|&p| lat.n_max(off[p])).collect();
                if n_max.iter().any(|&x| x < 0) {
                    continue;
                }
                let mult: Vec<Vec<i128>> = n_max
                    .iter()
                    .zip(&m)
                    .map(|(&nm, &mv)| multiplicities(nm, mv))
                    .collect();
                let mut z = off.clone();
                let mut n = vec![0i64; node_pos.len()];
                loop {
                    let mut c = e_sign * eps_sign;
                    for (k, &p) in node_pos.iter().enumerate() {
                        let y = n[k] * lat.scale + off[p];
                        z[p] = if emask >> k & 1 == 1 { -y } else { y };
                        c *= mult[k][n[k] as usize];
                    }
                    let num = lat.numerator(&z)?;
                    if lat.accepts(num) {
                        acc.add(num, c)?;
                    }
                    if !odometer(&mut n, &n_max) {
                        break;
                    }
                }
            }
            Ok(acc)
        })
        .try_reduce(Accumulator::default, |a, b| a.merge(b))?;
    Ok(acc.into_series(&lat, order))
}

/// `C(n + m - 1, n)` for `n = 0..=n_max`.
pub(crate) fn multiplicities(n_max: i64, m: usize) -> Vec<i128> {
    let m = m as i128;
    let mut out = Vec::with_capacity(n_max as usize + 1);
    let mut c: i128 = 1;
    for n in 0..=n_max as i128 {
        if n > 0 {
            c = c * (n + m - 1) / n;
        }
        out.push(c);
    }
    out
}

/// Advances `n` lexicographically through the box `0..=n_max`.
pub(crate) fn odometer(n: &mut [i64], n_max: &[i64]) -> bool {
    for i in (0..n.len()).rev() {
        if n[i] < n_max[i] {
            n[i] += 1;
            return true;
        }
        n[i] = 0;
    }
    false
}

/// The lattice on `V≥2` scaled by `D = 2·lcm |w_i|` over the leaves, so that
/// every summand vector becomes an integer vector `z = D·y`.
pub(crate) struct Lattice {
    pub form: QuadraticForm,
    pub scale: i64,
    pub bound: i64,
    owner: HashMap<usize, usize>,
    a: Vec<Vec<i128>>,
    denom: BigInt,
    limit: i128,
}

impl Lattice {
    pub fn new(pg: &PlumbedGraph, order: &BigRational, slack: i64) -> Result<Lattice> {
        let form = pg.theta_form()?;
        let tree = pg.tree();
        let leaves = tree.degree_partition().leaves;
        let l = leaves
            .iter()
            .fold(1i64, |acc, &i| acc.lcm(&pg.weight(i).abs().max(1)));
        let scale = 2 * l;
        let mut owner = HashMap::new();
        for &i in &leaves {
            let v = tree.neighbors(i)[0];
            owner.insert(i, form.position(v).expect("leaf neighbours are internal"));
        }
        let scaled = form.scaled();
        let a = scaled
            .numerators()
            .iter()
            .map(|r| r.iter().map(|x| x.to_i128()).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::Overflow("quadratic form numerators"))?;
        let denom = scaled.den() * BigInt::from(scale) * BigInt::from(scale);
        let limit = (order * BigRational::from_integer(denom.clone()))
            .floor()
            .to_integer()
            .to_i128()
            .ok_or(Error::Overflow("truncation order"))?;
        let bound = enumeration_bound(&form, order)[0] + slack;
        Ok(Lattice {
            form,
            scale,
            bound,
            owner,
            a,
            denom,
            limit,
        })
    }

    /// Position of the internal neighbour of leaf `i`.
    pub fn owner(&self, i: usize) -> usize {
        self.owner[&i]
    }

    /// `D / (2w)`, exact because `|w|` divides `D / 2`.
    pub fn leaf_step(&self, w: i64) -> i64 {
        self.scale / (2 * w)
    }

    /// Largest `n` with `n·D + offset <= B·D`; negative if there is none.
    pub fn n_max(&self, offset: i64) -> i64 {
        (self.bound * self.scale - offset).div_euclid(self.scale)
    }

    /// `zᵀAz`, where `Q(z / D) = zᵀAz / denom`.
    pub fn numerator(&self, z: &[i64]) -> Result<i128> {
        let overflow = || Error::Overflow("quadratic form evaluation");
        let mut acc: i128 = 0;
        for (i, &zi) in z.iter().enumerate() {
            if zi == 0 {
                continue;
            }
            let mut row: i128 = 0;
            for (aij, &zj) in self.a[i].iter().zip(z) {
                row = aij
                    .checked_mul(zj as i128)
                    .and_then(|t| row.checked_add(t))
                    .ok_or_else(overflow)?;
            }
            acc = row
                .checked_mul(zi as i128)
                .and_then(|t| acc.checked_add(t))
                .ok_or_else(overflow)?;
        }
        Ok(acc)
    }

    pub fn accepts(&self, num: i128) -> bool {
        num <= self.limit
    }

    pub fn exponent(&self, num: i128) -> BigRational {
        BigRational::new(num.into(), self.denom.clone())
    }
}

/// Coefficients keyed by the numerator of the exponent over the common
/// denominator of a [`Lattice`].
#[derive(Default)]
pub(crate) struct Accumulator(HashMap<i128, i128>);

impl Accumulator {
    pub fn add(&mut self, num: i128, c: i128) -> Result<()> {
        let slot = self.0.entry(num).or_insert(0);
        *slot = slot.checked_add(c).ok_or(Error::Overflow("coefficient"))?;
        Ok(())
    }

    pub fn merge(mut self, other: Accumulator) -> Result<Accumulator> {
        for (k, c) in other.0 {
            self.add(k, c)?;
        }
        Ok(self)
    }

    pub fn into_series(self, lat: &Lattice, order: &BigRational) -> QSeries {
        QSeries::from_terms(
            self.0
                .into_iter()
                .filter(|(_, c)| *c != 0)
                .map(|(k, c)| (lat.exponent(k), BigInt::from(c))),
            order.clone(),
        )
    }
}
