//! Diagonal-change classes of combinatorial data, as labeled graphs.
//!
//! The involution triple is transported along every move rather than
//! re-derived per vertex: a move swaps the diagonal pairing into the
//! side whose connections were replaced, which keeps the k-cycle
//! invariant `pi_r sigma_d pi_l` literally constant across the class.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use super::moves::act_on_perms;
use super::tree::{combinatorial_tree_of_relations, TreeOfRelations};
use super::{Cycle, HypError, Perm, Side};

/// A DC class: closure of a permutation pair under staircase moves along
/// all cycles of both sides.
#[derive(Debug, Clone)]
pub struct DcGraphHyp {
    pub vertices: Vec<(Perm, Perm)>,
    /// Involution triple carried to each vertex from the seed.
    pub trees: Vec<TreeOfRelations>,
    /// (from, cycle, to)
    pub edges: Vec<(usize, Cycle, usize)>,
}

impl DcGraphHyp {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Per-vertex k-cycle `pi_r sigma_d pi_l` (transported pairing).
    pub fn vertex_cycle(&self, v: usize) -> Perm {
        let (pl, pr) = &self.vertices[v];
        pr.compose(&self.trees[v].sigma_d).compose(pl)
    }

    /// The class invariant `pi_r pi_l sigma_d`, constant across the
    /// whole graph.
    pub fn invariant(&self, v: usize) -> Perm {
        let (pl, pr) = &self.vertices[v];
        pr.compose(pl).compose(&self.trees[v].sigma_d)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dc {\n");
        for (i, (pl, pr)) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "  v{i} [label=\"{pl}\\n{pr}\"];");
        }
        let k = self.vertices[0].0.len();
        for (a, c, b) in &self.edges {
            let _ = writeln!(out, "  v{a} -> v{b} [label=\"{}\"];", c.word(k));
        }
        out.push_str("}\n");
        out
    }
}

/// Transport of the involution triple through a staircase move: the
/// replaced side inherits the diagonal pairing on the moved support and
/// the new diagonal pairing closes the factorization.
pub fn transport_tree(
    tree: &TreeOfRelations,
    pi_l: &Perm,
    pi_r: &Perm,
    c: &Cycle,
) -> TreeOfRelations {
    let k = pi_l.len();
    match c.side {
        Side::Right => {
            let sigma_l = Perm::from_images(
                (0..k)
                    .map(|i| {
                        if c.support.contains(&i) {
                            tree.sigma_d.apply(i)
                        } else {
                            tree.sigma_l.apply(i)
                        }
                    })
                    .collect(),
            )
            .expect("transported pairing");
            // pi'_r = sigma'_l sigma'_d with pi'_r = pi_r
            let sigma_d = sigma_l.compose(pi_r);
            TreeOfRelations {
                sigma_l,
                sigma_r: tree.sigma_r.clone(),
                sigma_d,
            }
        }
        Side::Left => {
            let sigma_r = Perm::from_images(
                (0..k)
                    .map(|i| {
                        if c.support.contains(&i) {
                            tree.sigma_d.apply(i)
                        } else {
                            tree.sigma_r.apply(i)
                        }
                    })
                    .collect(),
            )
            .expect("transported pairing");
            // pi'_l = sigma'_r sigma'_d with pi'_l = pi_l
            let sigma_d = sigma_r.compose(pi_l);
            TreeOfRelations {
                sigma_l: tree.sigma_l.clone(),
                sigma_r,
                sigma_d,
            }
        }
    }
}

/// Builds the DC graph containing `pi = (pi_l, pi_r)`. The datum must
/// come from a hyperelliptic quadrangulation, which is checked through
/// the tree of relations.
pub fn dc_graph(pi_l: &Perm, pi_r: &Perm) -> Result<DcGraphHyp, HypError> {
    let seed_tree = combinatorial_tree_of_relations(pi_l, pi_r)?;
    let key = |pl: &Perm, pr: &Perm| (pl.images().to_vec(), pr.images().to_vec());
    let mut index: BTreeMap<(Vec<usize>, Vec<usize>), usize> = BTreeMap::new();
    let mut vertices = vec![(pi_l.clone(), pi_r.clone())];
    let mut trees = vec![seed_tree];
    index.insert(key(pi_l, pi_r), 0);
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        let (pl, pr) = vertices[v].clone();
        let tree = trees[v].clone();
        for side in [Side::Left, Side::Right] {
            let perm = match side {
                Side::Left => &pl,
                Side::Right => &pr,
            };
            for mut support in perm.cycles() {
                support.sort_unstable();
                let c = Cycle { side, support };
                let (nl, nr) = act_on_perms(&pl, &pr, &c);
                let ntree = transport_tree(&tree, &pl, &pr, &c);
                debug_assert_eq!(ntree.sigma_r.compose(&ntree.sigma_d), nl);
                debug_assert_eq!(ntree.sigma_l.compose(&ntree.sigma_d), nr);
                let j = match index.get(&key(&nl, &nr)) {
                    Some(&j) => j,
                    None => {
                        vertices.push((nl.clone(), nr.clone()));
                        trees.push(ntree);
                        let j = vertices.len() - 1;
                        index.insert(key(&nl, &nr), j);
                        queue.push_back(j);
                        j
                    }
                };
                edges.push((v, c, j));
            }
        }
    }
    Ok(DcGraphHyp {
        vertices,
        trees,
        edges,
    })
}
