//! Plumbed graphs: weighted trees, their linking matrices and the positive
//! definite form `S` obtained from `-W⁻¹` on the internal vertices.

pub mod linalg;
mod tree;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use linalg::{IntMatrix, RatMatrix};
pub use tree::{DegreePartition, RootedTree, Tree};

use crate::error::{Error, Result};

/// A weighted tree, optionally rooted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlumbedGraph {
    tree: Tree,
    weights: Vec<i64>,
    root: Option<usize>,
}

impl PlumbedGraph {
    /// `weights[v]` is the weight of the vertex with canonical index `v`.
    pub fn new(tree: Tree, weights: Vec<i64>, root: Option<usize>) -> Result<PlumbedGraph> {
        if weights.len() != tree.len() {
            return Err(Error::DimensionMismatch {
                expected: tree.len(),
                got: weights.len(),
            });
        }
        if let Some(r) = root {
            if r >= tree.len() {
                return Err(Error::UnknownVertex(format!("#{r}")));
            }
        }
        Ok(PlumbedGraph { tree, weights, root })
    }

    /// Convenience constructor from named vertices and edges.
    pub fn from_parts<S: Into<String> + Clone>(
        vertices: &[(S, i64)],
        edges: &[(S, S)],
        root: Option<&str>,
    ) -> Result<PlumbedGraph> {
        let tree = Tree::new(
            vertices.iter().map(|(id, _)| id.clone().into()),
            edges.iter().map(|(a, b)| (a.clone().into(), b.clone().into())),
        )?;
        let mut weights = vec![0; tree.len()];
        for (id, w) in vertices {
            let id: String = id.clone().into();
            weights[tree.index_of(&id).expect("just inserted")] = *w;
        }
        let root = match root {
            Some(r) => Some(tree.index_of(r).ok_or_else(|| Error::UnknownVertex(r.to_string()))?),
            None => None,
        };
        PlumbedGraph::new(tree, weights, root)
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn weight(&self, v: usize) -> i64 {
        self.weights[v]
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn with_root(&self, root: usize) -> Result<PlumbedGraph> {
        PlumbedGraph::new(self.tree.clone(), self.weights.clone(), Some(root))
    }

    pub fn rooted(&self) -> Option<RootedTree> {
        self.root.map(|r| RootedTree::new(self.tree.clone(), r).expect("root validated"))
    }

    /// The root if one was given, otherwise the first center in canonical order.
    pub fn rooted_or_centered(&self) -> RootedTree {
        let r = self.root.unwrap_or_else(|| self.tree.centers()[0]);
        RootedTree::new(self.tree.clone(), r).expect("root in range")
    }

    /// `W_vv = w_v`, `W_vu = 1` for every edge, zero elsewhere.
    pub fn linking_matrix(&self) -> IntMatrix {
        let n = self.tree.len();
        let mut w = vec![vec![0; n]; n];
        for v in 0..n {
            w[v][v] = self.weights[v];
        }
        for (a, b) in self.tree.edges() {
            w[a][b] = 1;
            w[b][a] = 1;
        }
        w
    }

    pub fn is_negative_definite(&self) -> bool {
        linalg::is_negative_definite(&self.linking_matrix()).expect("linking matrix is symmetric")
    }

    pub fn det(&self) -> BigInt {
        linalg::determinant(&self.linking_matrix())
    }

    /// The form `Q(x) = xᵀSx` with `S` the `V>=2` block of `-W⁻¹`.
    pub fn theta_form(&self) -> Result<QuadraticForm> {
        if !self.is_negative_definite() {
            return Err(Error::NotNegativeDefinite);
        }
        let index = self.tree.degree_partition().internal();
        if index.is_empty() {
            return Err(Error::NoInternalVertices);
        }
        let inv = linalg::inverse(&linalg::to_rational(&self.linking_matrix()))
            .expect("negative definite implies invertible");
        let matrix = index
            .iter()
            .map(|&a| index.iter().map(|&b| -inv[a][b].clone()).collect())
            .collect();
        Ok(QuadraticForm::new(index, matrix))
    }

    /// `4·|det W|·L²` where `L` is the lcm of the absolute leaf weights:
    /// every exponent produced from this plumbing has a denominator dividing it.
    pub fn exponent_denominator_bound(&self) -> BigInt {
        let l = self
            .tree
            .degree_partition()
            .leaves
            .iter()
            .fold(BigInt::one(), |acc, &i| acc.lcm(&BigInt::from(self.weights[i].abs().max(1))));
        BigInt::from(4) * self.det().abs() * &l * &l
    }
}

/// A positive definite form on the internal vertices of a plumbing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    index: Vec<usize>,
    matrix: RatMatrix,
}

impl QuadraticForm {
    pub fn new(index: Vec<usize>, matrix: RatMatrix) -> QuadraticForm {
        QuadraticForm { index, matrix }
    }

    /// Vertex indices labelling the rows of `S`, in canonical order.
    pub fn index(&self) -> &[usize] {
        &self.index
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.index.len()
    }

    /// Position of vertex `v` in the index set.
    pub fn position(&self, v: usize) -> Option<usize> {
        self.index.iter().position(|&x| x == v)
    }

    /// `xᵀSx`, exactly.
    pub fn eval(&self, x: &[BigRational]) -> Result<BigRational> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let mut acc = BigRational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let row = self.matrix[i]
                .iter()
                .zip(x)
                .fold(BigRational::zero(), |s, (sij, xj)| s + sij * xj);
            acc += xi * row;
        }
        Ok(acc)
    }

    /// True iff every leading principal minor of `S` is positive.
    pub fn is_positive_definite(&self) -> bool {
        // clear denominators, then reuse the integer minor test on -S
        let den = self
            .matrix
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let scaled: Option<IntMatrix> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|x| (-(x.numer() * (&den / x.denom()))).to_i64()).collect())
            .collect();
        match scaled {
            Some(m) => linalg::is_negative_definite(&m).unwrap_or(false),
            None => false,
        }
    }

    pub fn inverse(&self) -> RatMatrix {
        linalg::inverse(&self.matrix).expect("positive definite forms are invertible")
    }

    /// Maximum absolute row sum of `S⁻¹`; bounds its largest eigenvalue.
    pub fn inverse_row_sum_bound(&self) -> BigRational {
        self.inverse()
            .iter()
            .map(|r| r.iter().fold(BigRational::zero(), |a, x| a + x.abs()))
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    /// Integer rescaling `S = A / den` for fast repeated evaluation.
    pub fn scaled(&self) -> ScaledForm {
        let den = self
            .matrix
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let a = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|x| x.numer() * (&den / x.denom())).collect())
            .collect();
        ScaledForm { a, den }
    }
}

/// `S = a / den` with an integer matrix `a`.
#[derive(Clone, Debug)]
pub struct ScaledForm {
    a: Vec<Vec<BigInt>>,
    den: BigInt,
}

impl ScaledForm {
    pub fn numerators(&self) -> &[Vec<BigInt>] {
        &self.a
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    /// `Q(z / scale)` for an integer vector `z`.
    pub fn eval_scaled(&self, z: &[i64], scale: &BigInt) -> BigRational {
        let mut acc = BigInt::zero();
        for (i, &zi) in z.iter().enumerate() {
            if zi == 0 {
                continue;
            }
            let mut row = BigInt::zero();
            for (aij, &zj) in self.a[i].iter().zip(z) {
                if zj != 0 {
                    row += aij * zj;
                }
            }
            acc += row * zi;
        }
        BigRational::new(acc, &self.den * scale * scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma237() -> PlumbedGraph {
        PlumbedGraph::from_parts(
            &[("a", -1), ("b", -2), ("c", -3), ("d", -7)],
            &[("a", "b"), ("a", "c"), ("a", "d")],
            Some("a"),
        )
        .unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn linking_matrix_examples() {
        let single = PlumbedGraph::from_parts(&[("a", -3)], &[], None).unwrap();
        assert_eq!(single.linking_matrix(), vec![vec![-3]]);
        let edge = PlumbedGraph::from_parts(&[("a", -1), ("b", -2)], &[("a", "b")], None).unwrap();
        assert_eq!(edge.linking_matrix(), vec![vec![-1, 1], vec![1, -2]]);
        assert_eq!(
            sigma237().linking_matrix(),
            vec![vec![-1, 1, 1, 1], vec![1, -2, 0, 0], vec![1, 0, -3, 0], vec![1, 0, 0, -7]]
        );
    }

    #[test]
    fn theta_form_examples() {
        let edge = PlumbedGraph::from_parts(&[("a", -1), ("b", -2)], &[("a", "b")], None).unwrap();
        assert_eq!(edge.theta_form(), Err(Error::NoInternalVertices));

        // W⁻¹ for the path with weights (-2,-2,-2) has middle entry -1
        let path = PlumbedGraph::from_parts(
            &[("a", -2), ("b", -2), ("c", -2)],
            &[("a", "b"), ("b", "c")],
            None,
        )
        .unwrap();
        let f = path.theta_form().unwrap();
        assert_eq!(f.matrix(), &vec![vec![q(1, 1)]]);

        // Schur complement: (W⁻¹)_aa = 1 / (-1 + 1/2 + 1/3 + 1/7) = -42
        let f = sigma237().theta_form().unwrap();
        assert_eq!(f.matrix(), &vec![vec![q(42, 1)]]);
        assert!(f.is_positive_definite());
        assert_eq!(f.eval(&[q(1, 1)]).unwrap(), q(42, 1));
        assert_eq!(f.eval(&[q(0, 1)]).unwrap(), q(0, 1));
        assert!(f.eval(&[q(1, 1), q(1, 1)]).is_err());

        let pos = PlumbedGraph::from_parts(&[("a", 1), ("b", -2), ("c", -2), ("d", -2)], &[("a", "b"), ("a", "c"), ("a", "d")], None).unwrap();
        assert_eq!(pos.theta_form(), Err(Error::NotNegativeDefinite));
    }

    #[test]
    fn scaled_matches_exact() {
        let f = sigma237().theta_form().unwrap();
        let s = f.scaled();
        let scale = BigInt::from(84);
        assert_eq!(s.eval_scaled(&[1], &scale), f.eval(&[q(1, 84)]).unwrap());
        assert_eq!(s.eval_scaled(&[1], &scale), q(1, 168));
    }

    #[test]
    fn denominator_bound() {
        assert_eq!(sigma237().exponent_denominator_bound(), BigInt::from(4 * 42 * 42));
    }
}
