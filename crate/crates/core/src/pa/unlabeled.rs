//! Quotient of a DC graph by the relabeling action, and path lifting.

use std::collections::BTreeMap;

use super::PaError;
use crate::hyp::{Cycle, DcGraphHyp, Perm};

/// Quotient graph: vertices are relabeling classes of combinatorial
/// data, edges are relabeling classes of labeled edges.
#[derive(Debug, Clone)]
pub struct UnlabeledDcGraph {
    pub labeled: DcGraphHyp,
    /// Class id per labeled vertex.
    pub vertex_class: Vec<usize>,
    pub class_count: usize,
    /// Unlabeled edges as (from class, edge key, to class); the key is
    /// the least (side, support, target) over the class members lifted
    /// at the class representative.
    pub edges: Vec<UnlabeledEdge>,
    /// For each labeled edge index, the unlabeled edge id.
    pub edge_class: Vec<usize>,
    /// Covering degree (labeled vertices per class; constant).
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct UnlabeledEdge {
    pub from: usize,
    pub to: usize,
    /// Canonical labeled representative: (labeled from-vertex, cycle).
    pub rep: (usize, Cycle),
}

fn relabel_pair(sigma: &Perm, pl: &Perm, pr: &Perm) -> (Perm, Perm) {
    (sigma.conjugate(pl), sigma.conjugate(pr))
}

fn relabel_cycle(sigma: &Perm, c: &Cycle) -> Cycle {
    let mut support: Vec<usize> = c.support.iter().map(|&i| sigma.apply(i)).collect();
    support.sort_unstable();
    Cycle {
        side: c.side,
        support,
    }
}

/// Quotients the labeled graph by all relabelings that preserve it.
pub fn unlabeled_graph(labeled: &DcGraphHyp) -> Result<UnlabeledDcGraph, PaError> {
    let k = labeled.vertices[0].0.len();
    if k.is_multiple_of(2) {
        return Err(PaError::EvenK);
    }
    let key = |pl: &Perm, pr: &Perm| (pl.images().to_vec(), pr.images().to_vec());
    let index: BTreeMap<_, usize> = labeled
        .vertices
        .iter()
        .enumerate()
        .map(|(i, (pl, pr))| (key(pl, pr), i))
        .collect();

    // Vertex classes under relabelings that stay inside the graph.
    let sigmas = Perm::all(k);
    let mut vertex_class = vec![usize::MAX; labeled.vertices.len()];
    let mut class_count = 0usize;
    for v in 0..labeled.vertices.len() {
        if vertex_class[v] != usize::MAX {
            continue;
        }
        let (pl, pr) = &labeled.vertices[v];
        let mut members = Vec::new();
        for sigma in &sigmas {
            let (nl, nr) = relabel_pair(sigma, pl, pr);
            if let Some(&w) = index.get(&key(&nl, &nr)) {
                members.push(w);
            }
        }
        members.sort_unstable();
        members.dedup();
        for w in members {
            debug_assert!(vertex_class[w] == usize::MAX || vertex_class[w] == class_count);
            vertex_class[w] = class_count;
        }
        class_count += 1;
    }
    let degree = labeled.vertices.len() / class_count;

    // Edge classes: (from, cycle, to) ~ (sigma from, sigma cycle, sigma to).
    let mut edge_class = vec![usize::MAX; labeled.edges.len()];
    let mut edges: Vec<UnlabeledEdge> = Vec::new();
    let edge_index: BTreeMap<(usize, Cycle), usize> = labeled
        .edges
        .iter()
        .enumerate()
        .map(|(i, (v, c, _))| ((*v, c.clone()), i))
        .collect();
    for e in 0..labeled.edges.len() {
        if edge_class[e] != usize::MAX {
            continue;
        }
        let (v, c, w) = &labeled.edges[e];
        let (pl, pr) = &labeled.vertices[*v];
        let mut members = Vec::new();
        for sigma in &sigmas {
            let (nl, nr) = relabel_pair(sigma, pl, pr);
            if let Some(&v2) = index.get(&key(&nl, &nr)) {
                let c2 = relabel_cycle(sigma, c);
                if let Some(&e2) = edge_index.get(&(v2, c2)) {
                    members.push(e2);
                }
            }
        }
        members.sort_unstable();
        members.dedup();
        let id = edges.len();
        let rep_edge = &labeled.edges[members[0]];
        edges.push(UnlabeledEdge {
            from: vertex_class[*v],
            to: vertex_class[*w],
            rep: (rep_edge.0, rep_edge.1.clone()),
        });
        for m in members {
            edge_class[m] = id;
        }
    }
    Ok(UnlabeledDcGraph {
        labeled: labeled.clone(),
        vertex_class,
        class_count,
        edges,
        edge_class,
        degree,
    })
}

impl UnlabeledDcGraph {
    /// Labeled outgoing edge from `vertex` projecting to unlabeled edge
    /// `id`; unique for odd `k` by the covering property.
    pub fn lift_edge(&self, vertex: usize, id: usize) -> Result<(Cycle, usize), PaError> {
        let mut found = None;
        for (e, (v, c, w)) in self.labeled.edges.iter().enumerate() {
            if *v == vertex && self.edge_class[e] == id {
                if found.is_some() {
                    return Err(PaError::NoUniqueClosing);
                }
                found = Some((c.clone(), *w));
            }
        }
        found.ok_or(PaError::BadPath)
    }

    /// DOT rendering of the quotient with cycle-word labels from the
    /// representatives.
    pub fn to_dot(&self) -> String {
        use std::fmt::Write as _;
        let k = self.labeled.vertices[0].0.len();
        let mut out = String::from("digraph dc_unlabeled {\n");
        for cls in 0..self.class_count {
            let rep = (0..self.vertex_class.len())
                .find(|&v| self.vertex_class[v] == cls)
                .unwrap();
            let (pl, pr) = &self.labeled.vertices[rep];
            let _ = writeln!(out, "  c{cls} [label=\"[{pl} / {pr}]\"];");
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  c{} -> c{} [label=\"{}\"];",
                e.from,
                e.to,
                e.rep.1.word(k)
            );
        }
        out.push_str("}\n");
        out
    }
}

/// A lifted loop: the labeled path (edge list with start vertex) and the
/// closing relabeling.
#[derive(Debug, Clone)]
pub struct LiftedLoop {
    pub start: usize,
    /// (vertex, cycle) per step, consecutive.
    pub path: Vec<(usize, Cycle)>,
    pub end: usize,
    /// Unique relabeling with `sigma * pi_end = pi_start`.
    pub sigma: Perm,
}

/// Lifts a loop presentation (sequence of unlabeled edge ids) starting
/// from the labeled vertex `start`.
pub fn lift_loop(
    graph: &UnlabeledDcGraph,
    presentation: &[usize],
    start: usize,
) -> Result<LiftedLoop, PaError> {
    if presentation.is_empty() {
        return Err(PaError::BadPath);
    }
    if graph.edges[presentation[0]].from != graph.vertex_class[start] {
        return Err(PaError::StartMismatch);
    }
    let mut path = Vec::with_capacity(presentation.len());
    let mut cur = start;
    for &id in presentation {
        if graph.edges[id].from != graph.vertex_class[cur] {
            return Err(PaError::BadPath);
        }
        let (c, next) = graph.lift_edge(cur, id)?;
        path.push((cur, c));
        cur = next;
    }
    if graph.vertex_class[cur] != graph.vertex_class[start] {
        return Err(PaError::BadPath);
    }
    // Closing relabeling: unique sigma with sigma * pi_end = pi_start.
    let k = graph.labeled.vertices[0].0.len();
    let (sl, sr) = &graph.labeled.vertices[start];
    let (el, er) = &graph.labeled.vertices[cur];
    let mut closing = None;
    for sigma in Perm::all(k) {
        let (nl, nr) = relabel_pair(&sigma, el, er);
        if &nl == sl && &nr == sr {
            if closing.is_some() {
                return Err(PaError::NoUniqueClosing);
            }
            closing = Some(sigma);
        }
    }
    Ok(LiftedLoop {
        start,
        path,
        end: cur,
        sigma: closing.ok_or(PaError::BadPath)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyp::dc_graph;

    fn h2() -> UnlabeledDcGraph {
        let pl = Perm::from_cycles(3, &[&[2, 0]]);
        let pr = Perm::from_cycles(3, &[&[0, 2, 1]]);
        unlabeled_graph(&dc_graph(&pl, &pr).unwrap()).unwrap()
    }

    #[test]
    fn h2_quotient_is_three_to_one() {
        let g = h2();
        assert_eq!(g.class_count, 3);
        assert_eq!(g.degree, 3);
        // fiber sizes divide k
        let mut fibers = vec![0usize; g.class_count];
        for &c in &g.vertex_class {
            fibers[c] += 1;
        }
        assert!(fibers.iter().all(|&f| 3 % f == 0 || f % 3 == 0));
        assert!(fibers.iter().all(|&f| f == 3));
    }

    #[test]
    fn torus_quotient_is_trivial() {
        let g =
            unlabeled_graph(&dc_graph(&Perm::identity(1), &Perm::identity(1)).unwrap()).unwrap();
        assert_eq!(g.class_count, 1);
        assert_eq!(g.degree, 1);
        assert_eq!(g.edges.len(), 2);
    }

    #[test]
    fn lifting_single_edges() {
        let g = h2();
        // every unlabeled self-loop lifts from each fiber vertex with a
        // closing relabeling that is a 3-cycle or the identity
        for (id, e) in g.edges.iter().enumerate() {
            if e.from != e.to {
                continue;
            }
            for v in 0..g.vertex_class.len() {
                if g.vertex_class[v] != e.from {
                    continue;
                }
                let lifted = lift_loop(&g, &[id], v).unwrap();
                let ord = lifted.sigma.order();
                assert!(ord == 1 || ord == 3, "order {ord}");
            }
        }
    }

    #[test]
    fn concatenating_order_times_closes() {
        let g = h2();
        // find a self-loop edge whose closing sigma is nontrivial
        let (id, v) = (0..g.edges.len())
            .flat_map(|id| (0..g.vertex_class.len()).map(move |v| (id, v)))
            .find(|&(id, v)| {
                g.edges[id].from == g.edges[id].to
                    && g.vertex_class[v] == g.edges[id].from
                    && lift_loop(&g, &[id], v)
                        .map(|l| !l.sigma.is_identity())
                        .unwrap_or(false)
            })
            .expect("some lift closes nontrivially");
        let l1 = lift_loop(&g, &[id], v).unwrap();
        let n = l1.sigma.order();
        let presentation: Vec<usize> = std::iter::repeat_n(id, n).collect();
        let ln = lift_loop(&g, &presentation, v).unwrap();
        assert!(ln.sigma.is_identity());
        assert_eq!(ln.end, v);
    }

    #[test]
    fn torus_closing_is_always_identity() {
        let g =
            unlabeled_graph(&dc_graph(&Perm::identity(1), &Perm::identity(1)).unwrap()).unwrap();
        for id in 0..g.edges.len() {
            let l = lift_loop(&g, &[id], 0).unwrap();
            assert!(l.sigma.is_identity());
        }
    }
}
