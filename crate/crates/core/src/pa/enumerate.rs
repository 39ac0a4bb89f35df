//! Loop enumeration up to cyclic reordering and commutation of disjoint
//! moves, with dilatation-sorted output.

use std::collections::BTreeSet;

use super::construct::{pa_record, PaRecord};
use super::unlabeled::{lift_loop, unlabeled_graph, UnlabeledDcGraph};
use super::PaError;
use crate::hyp::{dc_graph, DcGraphHyp, Perm};

/// A loop class given by its canonical presentation (edge-id sequence,
/// lexicographically least over cyclic reorderings and swaps of adjacent
/// disjoint-support edges).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LoopClass(pub Vec<usize>);

/// Canonical form of a loop presentation.
pub fn loop_canonical_form(graph: &UnlabeledDcGraph, presentation: &[usize]) -> LoopClass {
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue = vec![presentation.to_vec()];
    seen.insert(presentation.to_vec());
    let mut best = presentation.to_vec();
    while let Some(p) = queue.pop() {
        if p < best {
            best = p.clone();
        }
        let n = p.len();
        // cyclic rotations
        for r in 1..n {
            let mut rot = p.clone();
            rot.rotate_left(r);
            if seen.insert(rot.clone()) {
                queue.push(rot);
            }
        }
        // adjacent swaps of disjoint moves (checked on a lift)
        for i in 0..n.saturating_sub(1) {
            if let Some(swapped) = try_swap(graph, &p, i) {
                if seen.insert(swapped.clone()) {
                    queue.push(swapped);
                }
            }
        }
    }
    LoopClass(best)
}

/// Swaps positions `i, i+1` when the two moves act on disjoint supports
/// at a common lift; returns the new edge-id sequence.
fn try_swap(graph: &UnlabeledDcGraph, p: &[usize], i: usize) -> Option<Vec<usize>> {
    // lift the prefix to locate the two consecutive labeled edges
    let start =
        (0..graph.vertex_class.len()).find(|&v| graph.vertex_class[v] == graph.edges[p[0]].from)?;
    let lifted = lift_loop(graph, p, start).ok()?;
    let (v1, c1) = &lifted.path[i];
    let (_, c2) = &lifted.path[i + 1];
    if !c1.is_disjoint(c2) {
        return None;
    }
    // c2 is also a cycle at v1; the swapped pair projects to edges
    // [class of (v1, c2), class of (c2 v1, c1)]
    let e2_first = graph
        .labeled
        .edges
        .iter()
        .position(|(v, c, _)| v == v1 && c == c2)?;
    let mid = graph.labeled.edges[e2_first].2;
    let e1_second = graph
        .labeled
        .edges
        .iter()
        .position(|(v, c, _)| *v == mid && c == c1)?;
    let mut out = p.to_vec();
    out[i] = graph.edge_class[e2_first];
    out[i + 1] = graph.edge_class[e1_second];
    Some(out)
}

/// True when the canonical word is a proper power of a shorter word.
pub fn is_power(word: &[usize]) -> Option<usize> {
    let n = word.len();
    for period in 1..n {
        if !n.is_multiple_of(period) {
            continue;
        }
        if (0..n).all(|i| word[i] == word[i % period]) {
            return Some(n / period);
        }
    }
    None
}

pub struct EnumerationReport {
    pub graph: UnlabeledDcGraph,
    pub records: Vec<(LoopClass, PaRecord, Option<usize>)>,
    /// Smallest dilatation seen among positive loops one step past the
    /// length bound: the empirical completeness frontier.
    pub frontier: Option<f64>,
    pub max_len: usize,
}

/// Seed combinatorial datum of the hyperelliptic component for odd `k`:
/// the caterpillar tree of relations.
pub fn hyperelliptic_seed(k: usize) -> Result<(Perm, Perm), PaError> {
    if k.is_multiple_of(2) {
        return Err(PaError::EvenK);
    }
    if k == 1 {
        return Ok((Perm::identity(1), Perm::identity(1)));
    }
    // sigma_d pairs (0 1)(2 3)...; sigma_l joins 0-2, 4-6, ...;
    // sigma_r joins 2-4, 6-8, ...
    let mut d_cycles: Vec<Vec<usize>> = Vec::new();
    let mut l_cycles: Vec<Vec<usize>> = Vec::new();
    let mut r_cycles: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i + 1 < k {
        d_cycles.push(vec![i, i + 1]);
        i += 2;
    }
    let mut i = 0;
    while i + 2 < k {
        if (i / 2) % 2 == 0 {
            l_cycles.push(vec![i, i + 2]);
        } else {
            r_cycles.push(vec![i, i + 2]);
        }
        i += 2;
    }
    fn refs(v: &[Vec<usize>]) -> Vec<&[usize]> {
        v.iter().map(|c| c.as_slice()).collect()
    }
    let sigma_d = Perm::from_cycles(k, &refs(&d_cycles));
    let sigma_l = Perm::from_cycles(k, &refs(&l_cycles));
    let sigma_r = Perm::from_cycles(k, &refs(&r_cycles));
    let pi_l = sigma_r.compose(&sigma_d);
    let pi_r = sigma_l.compose(&sigma_d);
    Ok((pi_l, pi_r))
}

/// Enumerates pseudo-Anosov classes by positive loops of length up to
/// `max_len`, sorted by dilatation then canonical form. Completeness is
/// in loop length only.
pub fn enumerate_pa(
    k: usize,
    max_len: usize,
    dilatation_cap: Option<f64>,
) -> Result<EnumerationReport, PaError> {
    let (pl, pr) = hyperelliptic_seed(k)?;
    enumerate_pa_from(&dc_graph(&pl, &pr)?, max_len, dilatation_cap)
}

pub fn enumerate_pa_from(
    labeled: &DcGraphHyp,
    max_len: usize,
    dilatation_cap: Option<f64>,
) -> Result<EnumerationReport, PaError> {
    let graph = unlabeled_graph(labeled)?;
    let classes = collect_loop_classes(&graph, max_len);

    let workers = worker_count();
    let shards: Vec<Vec<LoopClass>> = {
        let mut shards = vec![Vec::new(); workers];
        for (i, c) in classes.iter().enumerate() {
            shards[i % workers].push(c.clone());
        }
        shards
    };
    let results: Vec<Vec<(LoopClass, PaRecord, Option<usize>)>> = if workers == 1 {
        vec![process_shard(&graph, &shards[0])?]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = shards
                .iter()
                .map(|shard| scope.spawn(|| process_shard(&graph, shard)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect::<Result<Vec<_>, _>>()
        })?
    };
    let mut records: Vec<(LoopClass, PaRecord, Option<usize>)> =
        results.into_iter().flatten().collect();
    if let Some(cap) = dilatation_cap {
        records.retain(|(_, r, _)| r.dilatation.value <= cap);
    }
    records.sort_by(|a, b| {
        a.1.dilatation
            .value
            .partial_cmp(&b.1.dilatation.value)
            .unwrap()
            .then_with(|| a.0.cmp(&b.0))
    });

    // Frontier: scan loops of length max_len + 1.
    let frontier = collect_loop_classes(&graph, max_len + 1)
        .into_iter()
        .filter(|c| c.0.len() == max_len + 1)
        .filter_map(|c| {
            let start = representative(&graph, graph.edges[c.0[0]].from);
            let lifted = lift_loop(&graph, &c.0, start).ok()?;
            let rec = pa_record(&graph.labeled, &lifted).ok()?;
            Some(rec.dilatation.value)
        })
        .fold(None, |acc: Option<f64>, d| {
            Some(acc.map_or(d, |a| a.min(d)))
        });
    Ok(EnumerationReport {
        graph,
        records,
        frontier,
        max_len,
    })
}

fn worker_count() -> usize {
    std::env::var("FLATRACK_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(1)
        .min(16)
}

fn representative(graph: &UnlabeledDcGraph, class: usize) -> usize {
    (0..graph.vertex_class.len())
        .find(|&v| graph.vertex_class[v] == class)
        .expect("class is inhabited")
}

fn process_shard(
    graph: &UnlabeledDcGraph,
    shard: &[LoopClass],
) -> Result<Vec<(LoopClass, PaRecord, Option<usize>)>, PaError> {
    let mut out = Vec::new();
    for class in shard {
        let start = representative(graph, graph.edges[class.0[0]].from);
        let lifted = lift_loop(graph, &class.0, start)?;
        match pa_record(&graph.labeled, &lifted) {
            Ok(rec) => {
                let power = is_power(&class.0);
                out.push((class.clone(), rec, power));
            }
            Err(PaError::NotPositive) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// All loop classes (canonical forms) of length 1..=max_len.
fn collect_loop_classes(graph: &UnlabeledDcGraph, max_len: usize) -> Vec<LoopClass> {
    let mut classes: BTreeSet<LoopClass> = BTreeSet::new();
    // DFS over unlabeled paths from each class vertex.
    let out_edges: Vec<Vec<usize>> = (0..graph.class_count)
        .map(|c| {
            (0..graph.edges.len())
                .filter(|&e| graph.edges[e].from == c)
                .collect()
        })
        .collect();
    let mut stack: Vec<(usize, Vec<usize>)> = Vec::new();
    for start in 0..graph.class_count {
        stack.push((start, Vec::new()));
        while let Some((at, path)) = stack.pop() {
            for &e in &out_edges[at] {
                let mut next = path.clone();
                next.push(e);
                let to = graph.edges[e].to;
                if to == start {
                    classes.insert(loop_canonical_form(graph, &next));
                }
                if next.len() < max_len {
                    stack.push((to, next));
                }
            }
        }
    }
    classes.into_iter().collect()
}
