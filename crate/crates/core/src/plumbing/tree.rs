//! Finite trees and rooted trees.
//!
//! Vertices carry string identifiers but are addressed by their index in
//! the sorted identifier list, so "canonical order" always means index order.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};

/// An undirected, connected, acyclic graph on named vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tree {
    ids: Vec<String>,
    adj: Vec<Vec<usize>>,
}

/// The split of the vertex set into `V1` (degree <= 1), `V2` and `V>=3`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DegreePartition {
    pub leaves: Vec<usize>,
    pub degree2: Vec<usize>,
    pub nodes: Vec<usize>,
}

impl DegreePartition {
    /// `V>=2`, in canonical order.
    pub fn internal(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.degree2.iter().chain(&self.nodes).copied().collect();
        v.sort_unstable();
        v
    }
}

impl Tree {
    /// Builds and validates a tree. Edges may cite vertices in any order.
    pub fn new<I, E, S>(ids: I, edges: E) -> Result<Tree>
    where
        I: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S)>,
        S: Into<String>,
    {
        let mut names: Vec<String> = ids.into_iter().map(Into::into).collect();
        names.sort();
        for w in names.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateVertex(w[0].clone()));
            }
        }
        let mut pairs = Vec::new();
        for (a, b) in edges {
            let (a, b) = (a.into(), b.into());
            let ia = names
                .binary_search(&a)
                .map_err(|_| Error::UnknownVertex(a.clone()))?;
            let ib = names
                .binary_search(&b)
                .map_err(|_| Error::UnknownVertex(b.clone()))?;
            pairs.push((ia, ib));
        }
        Tree::from_indices(names, &pairs)
    }

    pub(crate) fn from_indices(ids: Vec<String>, edges: &[(usize, usize)]) -> Result<Tree> {
        let n = ids.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut adj = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        // union-find to detect cycles as soon as they close
        let mut uf: Vec<usize> = (0..n).collect();
        fn find(uf: &mut [usize], mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        for &(a, b) in edges {
            if a == b {
                return Err(Error::SelfLoop(ids[a].clone()));
            }
            let key = (a.min(b), a.max(b));
            if !seen.insert(key) {
                return Err(Error::DuplicateEdge(ids[key.0].clone(), ids[key.1].clone()));
            }
            let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
            if ra == rb {
                return Err(Error::Cyclic);
            }
            uf[ra] = rb;
            adj[a].push(b);
            adj[b].push(a);
        }
        if edges.len() + 1 != n {
            return Err(Error::Disconnected);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        Ok(Tree { ids, adj })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.binary_search_by(|s| s.as_str().cmp(id)).ok()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    /// All edges as `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.len().saturating_sub(1));
        for (a, l) in self.adj.iter().enumerate() {
            out.extend(l.iter().filter(|&&b| a < b).map(|&b| (a, b)));
        }
        out
    }

    /// An isolated vertex counts as a leaf.
    pub fn degree_partition(&self) -> DegreePartition {
        let mut p = DegreePartition::default();
        for v in 0..self.len() {
            match self.degree(v) {
                0 | 1 => p.leaves.push(v),
                2 => p.degree2.push(v),
                _ => p.nodes.push(v),
            }
        }
        p
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.degree(v) <= 1
    }

    /// The leaves adjacent to `v` (written `v̄` in the bosonic sum).
    pub fn leaf_neighbors(&self, v: usize) -> Vec<usize> {
        self.adj[v].iter().copied().filter(|&u| self.is_leaf(u)).collect()
    }

    pub fn distances_from(&self, v: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len()];
        dist[v] = 0;
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Length of a longest path from `v` to a leaf.
    pub fn height(&self, v: usize) -> usize {
        self.distances_from(v).into_iter().max().unwrap_or(0)
    }

    /// The vertices of minimal height: one vertex, or two adjacent ones.
    pub fn centers(&self) -> Vec<usize> {
        let heights: Vec<usize> = (0..self.len()).map(|v| self.height(v)).collect();
        let min = heights.iter().copied().min().unwrap_or(0);
        (0..self.len()).filter(|&v| heights[v] == min).collect()
    }

    /// A fresh identifier derived from `base` that is not yet used.
    fn fresh_id(&self, taken: &BTreeSet<String>, base: &str) -> String {
        (0..)
            .map(|k| format!("{base}_g{k}"))
            .find(|s| !taken.contains(s) && self.index_of(s).is_none())
            .expect("unbounded search")
    }
}

/// A tree with a distinguished root and the derived parent/child structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    tree: Tree,
    root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
    bfs: Vec<usize>,
}

impl RootedTree {
    pub fn new(tree: Tree, root: usize) -> Result<RootedTree> {
        if root >= tree.len() {
            return Err(Error::UnknownVertex(format!("#{root}")));
        }
        let n = tree.len();
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut depth = vec![0; n];
        let mut bfs = Vec::with_capacity(n);
        let mut visited = vec![false; n];
        visited[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            bfs.push(x);
            for &y in tree.neighbors(x) {
                if !visited[y] {
                    visited[y] = true;
                    parent[y] = Some(x);
                    depth[y] = depth[x] + 1;
                    children[x].push(y);
                    queue.push_back(y);
                }
            }
        }
        Ok(RootedTree {
            tree,
            root,
            parent,
            children,
            depth,
            bfs,
        })
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// Children in canonical order.
    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn siblings(&self, v: usize) -> Vec<usize> {
        match self.parent[v] {
            Some(p) => self.children[p].iter().copied().filter(|&c| c != v).collect(),
            None => Vec::new(),
        }
    }

    /// The path `p_v` from `v` to the root, both ends included.
    pub fn path_to_root(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut x = v;
        while let Some(p) = self.parent[x] {
            path.push(p);
            x = p;
        }
        path
    }

    pub fn ancestors(&self, v: usize) -> Vec<usize> {
        self.path_to_root(v).into_iter().skip(1).collect()
    }

    pub fn is_descendant(&self, d: usize, v: usize) -> bool {
        self.path_to_root(d).contains(&v)
    }

    /// All proper descendants of `v`.
    pub fn descendants(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = self.children[v].clone();
        while let Some(x) = stack.pop() {
            out.push(x);
            stack.extend_from_slice(&self.children[x]);
        }
        out.sort_unstable();
        out
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    /// Longest downward path from `v` to a descendant leaf.
    pub fn subtree_height(&self, v: usize) -> usize {
        self.children[v]
            .iter()
            .map(|&c| 1 + self.subtree_height(c))
            .max()
            .unwrap_or(0)
    }

    /// Height of the rooted tree.
    pub fn height(&self) -> usize {
        self.subtree_height(self.root)
    }

    pub fn is_centered(&self) -> bool {
        self.tree.centers().contains(&self.root)
    }

    /// Vertices ordered so that every vertex comes after all its descendants.
    pub fn post_order(&self) -> Vec<usize> {
        self.bfs.iter().rev().copied().collect()
    }

    /// Vertices ordered root first, level by level.
    pub fn bfs_order(&self) -> &[usize] {
        &self.bfs
    }

    /// Attaches `max(0, 3 - deg v)` new leaves to every non-leaf vertex so
    /// that every internal vertex becomes a node. The root is kept.
    pub fn grow_leaves(&self) -> Result<RootedTree> {
        if self.tree.len() < 2 {
            return Err(Error::CannotGrow);
        }
        let mut ids = self.tree.ids.clone();
        let mut edges: Vec<(String, String)> = self
            .tree
            .edges()
            .into_iter()
            .map(|(a, b)| (ids[a].clone(), ids[b].clone()))
            .collect();
        let mut taken = BTreeSet::new();
        for v in 0..self.tree.len() {
            let deg = self.tree.degree(v);
            if deg < 2 {
                continue;
            }
            for _ in deg..3 {
                let fresh = self.tree.fresh_id(&taken, &self.tree.ids[v]);
                taken.insert(fresh.clone());
                ids.push(fresh.clone());
                edges.push((self.tree.ids[v].clone(), fresh));
            }
        }
        let root_id = self.tree.ids[self.root].clone();
        let tree = Tree::new(ids, edges)?;
        let root = tree.index_of(&root_id).expect("root survives growing");
        RootedTree::new(tree, root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Tree {
        let ids: Vec<String> = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        let edges: Vec<(String, String)> = ids.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
        Tree::new(ids, edges).unwrap()
    }

    fn star(legs: usize) -> Tree {
        let mut ids = vec!["c".to_string()];
        let mut edges = Vec::new();
        for i in 0..legs {
            let l = format!("l{i}");
            ids.push(l.clone());
            edges.push(("c".to_string(), l));
        }
        Tree::new(ids, edges).unwrap()
    }

    fn h_tree() -> Tree {
        Tree::new(
            ["u", "v", "a", "b", "c", "d"],
            [("u", "v"), ("u", "a"), ("u", "b"), ("v", "c"), ("v", "d")],
        )
        .unwrap()
    }

    #[test]
    fn degree_partition_examples() {
        let p = path(3).degree_partition();
        assert_eq!((p.leaves, p.degree2, p.nodes), (vec![0, 2], vec![1], vec![]));
        let s = star(3);
        let p = s.degree_partition();
        assert_eq!(p.nodes, vec![0]);
        assert_eq!(p.leaves.len(), 3);
        let p = path(2).degree_partition();
        assert_eq!((p.leaves, p.degree2, p.nodes), (vec![0, 1], vec![], vec![]));
        let single = Tree::new(["x"], Vec::<(&str, &str)>::new()).unwrap();
        assert_eq!(single.degree_partition().leaves, vec![0]);
    }

    #[test]
    fn centers_examples() {
        assert_eq!(path(3).centers(), vec![1]);
        let t = path(4);
        assert_eq!(t.centers(), vec![1, 2]);
        assert!(t.is_adjacent(1, 2));
        let single = Tree::new(["x"], Vec::<(&str, &str)>::new()).unwrap();
        assert_eq!(single.centers(), vec![0]);
    }

    #[test]
    fn centered_examples() {
        assert!(RootedTree::new(path(3), 1).unwrap().is_centered());
        assert!(!RootedTree::new(path(3), 0).unwrap().is_centered());
        assert!(RootedTree::new(star(5), 0).unwrap().is_centered());
    }

    #[test]
    fn rooted_structure() {
        let rt = RootedTree::new(h_tree(), h_tree().index_of("u").unwrap()).unwrap();
        let t = rt.tree();
        let v = t.index_of("v").unwrap();
        let c = t.index_of("c").unwrap();
        assert_eq!(rt.parent(c), Some(v));
        assert_eq!(rt.depth(c), 2);
        assert_eq!(rt.path_to_root(c), vec![c, v, rt.root()]);
        assert_eq!(rt.siblings(c), vec![t.index_of("d").unwrap()]);
        assert_eq!(rt.height(), 2);
        assert!(rt.is_descendant(c, rt.root()));
        let post = rt.post_order();
        assert_eq!(*post.last().unwrap(), rt.root());
        let pos = |x: usize| post.iter().position(|&y| y == x).unwrap();
        assert!(pos(c) < pos(v));
        assert_eq!(rt.descendants(v).len(), 2);
    }

    #[test]
    fn grow_leaves_examples() {
        let rt = RootedTree::new(path(3), 1).unwrap().grow_leaves().unwrap();
        let p = rt.tree().degree_partition();
        assert_eq!(p.nodes.len(), 1);
        assert_eq!(p.leaves.len(), 3);
        assert_eq!(rt.tree().id(rt.root()), "b");

        let s = RootedTree::new(star(3), 0).unwrap();
        assert_eq!(s.grow_leaves().unwrap(), s);
        let h = RootedTree::new(h_tree(), 0).unwrap();
        assert_eq!(h.grow_leaves().unwrap(), h);

        let single = Tree::new(["x"], Vec::<(&str, &str)>::new()).unwrap();
        assert_eq!(
            RootedTree::new(single, 0).unwrap().grow_leaves(),
            Err(Error::CannotGrow)
        );
    }

    #[test]
    fn invalid_trees() {
        assert_eq!(
            Tree::new(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")]),
            Err(Error::Cyclic)
        );
        assert_eq!(Tree::new(["a", "b", "c"], [("a", "b")]), Err(Error::Disconnected));
        assert_eq!(Tree::new(["a", "a"], Vec::<(&str, &str)>::new()), Err(Error::DuplicateVertex("a".into())));
        assert_eq!(Tree::new(["a"], [("a", "a")]), Err(Error::SelfLoop("a".into())));
        assert_eq!(Tree::new(["a"], [("a", "z")]), Err(Error::UnknownVertex("z".into())));
    }
}
