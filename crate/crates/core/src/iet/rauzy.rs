//! Rauzy classes: closures of combinatorial data under top/bot moves,
//! with the reduced quotient by the monodromy invariant.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use super::{IetError, MoveType, PermPair};

/// A Rauzy class as a labeled graph: every vertex has exactly two
/// outgoing edges (one per move type).
#[derive(Debug, Clone)]
pub struct RauzyClass {
    pub vertices: Vec<PermPair>,
    /// (from, move, to) as vertex indices.
    pub edges: Vec<(usize, MoveType, usize)>,
}

impl RauzyClass {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Distinct monodromy invariants across the class.
    pub fn monodromy_invariants(&self) -> BTreeSet<Vec<usize>> {
        self.vertices.iter().map(|p| p.monodromy()).collect()
    }

    /// Quotient identifying vertices with equal monodromy invariant.
    pub fn reduced(&self) -> ReducedRauzyClass {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut vertex_class = vec![0usize; self.vertices.len()];
        for (i, v) in self.vertices.iter().enumerate() {
            let m = v.monodromy();
            let c = *index.entry(m.clone()).or_insert_with(|| {
                classes.push(m);
                classes.len() - 1
            });
            vertex_class[i] = c;
        }
        let mut edges = BTreeSet::new();
        for &(a, mv, b) in &self.edges {
            edges.insert((vertex_class[a], mv, vertex_class[b]));
        }
        ReducedRauzyClass {
            invariants: classes,
            edges: edges.into_iter().collect(),
        }
    }

    /// Graphviz DOT with edge labels `top`/`bot`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph rauzy {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "  v{i} [label=\"{v}\"];");
        }
        for &(a, mv, b) in &self.edges {
            let _ = writeln!(out, "  v{a} -> v{b} [label=\"{mv}\"];");
        }
        out.push_str("}\n");
        out
    }
}

/// Quotient class listed by monodromy invariant.
#[derive(Debug, Clone)]
pub struct ReducedRauzyClass {
    pub invariants: Vec<Vec<usize>>,
    pub edges: Vec<(usize, MoveType, usize)>,
}

impl ReducedRauzyClass {
    pub fn vertex_count(&self) -> usize {
        self.invariants.len()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph rauzy_reduced {\n");
        for (i, inv) in self.invariants.iter().enumerate() {
            let label: Vec<String> = inv.iter().map(|p| (p + 1).to_string()).collect();
            let _ = writeln!(out, "  v{i} [label=\"({})\"];", label.join(" "));
        }
        for &(a, mv, b) in &self.edges {
            let _ = writeln!(out, "  v{a} -> v{b} [label=\"{mv}\"];");
        }
        out.push_str("}\n");
        out
    }
}

/// Closure of an irreducible combinatorial datum under both moves.
pub fn rauzy_class(start: &PermPair) -> Result<RauzyClass, IetError> {
    if !start.is_irreducible() {
        return Err(IetError::Reducible);
    }
    let key = |p: &PermPair| (p.top_row(), p.bot_row());
    let mut seen: BTreeMap<(Vec<usize>, Vec<usize>), usize> = BTreeMap::new();
    let mut vertices = vec![start.clone()];
    seen.insert(key(start), 0);
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for mv in [MoveType::Top, MoveType::Bot] {
            let next = vertices[i].rauzy_move(mv);
            debug_assert!(next.is_irreducible(), "moves preserve irreducibility");
            let j = match seen.get(&key(&next)) {
                Some(&j) => j,
                None => {
                    vertices.push(next.clone());
                    let j = vertices.len() - 1;
                    seen.insert(key(&next), j);
                    queue.push_back(j);
                    j
                }
            };
            edges.push((i, mv, j));
        }
    }
    Ok(RauzyClass { vertices, edges })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_of_symmetric_four_has_seven_vertices() {
        let c = rauzy_class(&PermPair::parse("ABCD/DCBA").unwrap()).unwrap();
        assert_eq!(c.vertex_count(), 7);
    }

    #[test]
    fn class_of_dcab_and_its_reduction() {
        let c = rauzy_class(&PermPair::parse("ABCD/DCAB").unwrap()).unwrap();
        assert_eq!(c.vertex_count(), 12);
        assert_eq!(c.reduced().vertex_count(), 6);
    }

    #[test]
    fn two_letter_class_is_a_point_with_loops() {
        let c = rauzy_class(&PermPair::parse("AB/BA").unwrap()).unwrap();
        assert_eq!(c.vertex_count(), 1);
        assert_eq!(c.edges.len(), 2);
        assert!(c.edges.iter().all(|&(a, _, b)| a == 0 && b == 0));
    }

    #[test]
    fn out_degree_is_two_everywhere() {
        for start in ["ABCD/DCBA", "ABCD/DCAB", "ABC/CBA"] {
            let c = rauzy_class(&PermPair::parse(start).unwrap()).unwrap();
            for v in 0..c.vertex_count() {
                let out = c.edges.iter().filter(|&&(a, _, _)| a == v).count();
                let inc = c.edges.iter().filter(|&&(_, _, b)| b == v).count();
                assert_eq!(out, 2);
                assert_eq!(inc, 2);
            }
        }
    }

    #[test]
    fn thirteen_irreducible_monodromies_on_four_letters() {
        let a = rauzy_class(&PermPair::parse("ABCD/DCBA").unwrap()).unwrap();
        let b = rauzy_class(&PermPair::parse("ABCD/DCAB").unwrap()).unwrap();
        let mut union = a.monodromy_invariants();
        union.extend(b.monodromy_invariants());
        assert_eq!(union.len(), 13);
        assert_eq!(a.monodromy_invariants().len(), 7);
        assert_eq!(b.monodromy_invariants().len(), 6);
    }

    #[test]
    fn reducible_start_rejected() {
        assert!(matches!(
            rauzy_class(&PermPair::parse("ABCD/BADC").unwrap()),
            Err(IetError::Reducible)
        ));
    }

    #[test]
    fn dot_is_deterministic() {
        let c = rauzy_class(&PermPair::parse("AB/BA").unwrap()).unwrap();
        assert_eq!(c.to_dot(), c.to_dot());
        assert!(c.to_dot().contains("label=\"top\""));
    }
}
