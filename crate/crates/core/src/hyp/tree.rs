//! Tree of relations and the k-cycle invariant of hyperelliptic
//! quadrangulations.
//!
//! The quotient of a quadrangulation by the hyperelliptic involution is
//! a triangulated sphere whose dual graph is a tree with edges labeled
//! l, r, d. The involution pairing is `sigma_d`; the combinatorial datum
//! factors as `pi_l = sigma_r sigma_d` and `pi_r = sigma_l sigma_d`, and
//! `pi_r sigma_d pi_l` is a k-cycle constant on the whole DC class.

use super::{HypError, Perm, Quadrangulation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeOfRelations {
    pub sigma_l: Perm,
    pub sigma_r: Perm,
    pub sigma_d: Perm,
}

impl TreeOfRelations {
    /// Edge-count and connectivity of the labeled tree on `[k]`.
    fn is_tree(&self) -> bool {
        let k = self.sigma_d.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k];
        let mut edge_count = 0usize;
        for sigma in [&self.sigma_l, &self.sigma_r, &self.sigma_d] {
            for i in 0..k {
                let j = sigma.apply(i);
                if j > i {
                    adj[i].push(j);
                    adj[j].push(i);
                    edge_count += 1;
                }
            }
        }
        if edge_count != k.saturating_sub(1) {
            return false;
        }
        let mut seen = vec![false; k];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut visited = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    visited += 1;
                    stack.push(w);
                }
            }
        }
        visited == k
    }
}

/// Searches for the involution triple factorizing the combinatorial
/// datum; errors when none exists (the datum is not hyperelliptic).
pub fn combinatorial_tree_of_relations(
    pi_l: &Perm,
    pi_r: &Perm,
) -> Result<TreeOfRelations, HypError> {
    let k = pi_l.len();
    for sigma_d in involutions(k) {
        let sigma_r = pi_l.compose(&sigma_d);
        let sigma_l = pi_r.compose(&sigma_d);
        if !sigma_r.is_involution() || !sigma_l.is_involution() {
            continue;
        }
        let tree = TreeOfRelations {
            sigma_l,
            sigma_r,
            sigma_d,
        };
        if tree.is_tree() {
            return Ok(tree);
        }
    }
    Err(HypError::NotHyperelliptic)
}

/// Tree of relations of a quadrangulation: the geometric involution must
/// pair quadrilaterals with equal forward diagonals.
pub fn tree_of_relations(q: &Quadrangulation) -> Result<TreeOfRelations, HypError> {
    let tree = combinatorial_tree_of_relations(&q.pi_l, &q.pi_r)?;
    for i in 0..q.k() {
        let j = tree.sigma_d.apply(i);
        if q.forward_diagonal(i) != q.forward_diagonal(j) {
            return Err(HypError::NotHyperelliptic);
        }
    }
    Ok(tree)
}

/// The invariant `pi_r sigma_d pi_l`; a k-cycle for hyperelliptic data.
pub fn invariant_cycle(pi_l: &Perm, pi_r: &Perm) -> Result<Perm, HypError> {
    let tree = combinatorial_tree_of_relations(pi_l, pi_r)?;
    Ok(pi_r.compose(&tree.sigma_d).compose(pi_l))
}

fn involutions(k: usize) -> Vec<Perm> {
    Perm::all(k)
        .into_iter()
        .filter(|p| p.is_involution())
        .collect()
}

/// Relabels a quadrangulation so that the labeling is cyclical and
/// respects the involution: the wedge after `i` is found by rotating
/// wedge `i`'s vertical by pi around the singularity and applying the
/// involution. Odd `k` with a single singularity only.
pub fn cyclical_labeling(
    q: &Quadrangulation,
    start: usize,
) -> Result<(Quadrangulation, Perm), HypError> {
    let k = q.k();
    if k.is_multiple_of(2) {
        return Err(HypError::EvenK);
    }
    let tree = tree_of_relations(q)?;
    // The corner walk of the glued surface gives the angular order
    // around the singularity: quadrilateral i's upward vertical lives in
    // corner (i, 0) and the downward one in corner (i, 2). Rotating the
    // up vertical by pi reaches the first down vertical seen
    // counterclockwise.
    let surface = q.to_surface();
    let cone = surface.build().map_err(|_| HypError::NotHyperelliptic)?;
    if cone.singularities.len() != 1 {
        return Err(HypError::NotHyperelliptic);
    }
    let cycle = &cone.singularities[0].0;
    let next_down = |i: usize| -> Result<usize, HypError> {
        let pos = cycle
            .iter()
            .position(|&c| c == (i, 0))
            .ok_or(HypError::NotHyperelliptic)?;
        for step in 1..=cycle.len() {
            let (p, corner) = cycle[(pos + step) % cycle.len()];
            if corner == 2 {
                return Ok(p);
            }
        }
        Err(HypError::NotHyperelliptic)
    };
    let mut order = Vec::with_capacity(k);
    let mut cur = start;
    for _ in 0..k {
        order.push(cur);
        cur = tree.sigma_d.apply(next_down(cur)?);
    }
    if cur != start || {
        let mut s = order.clone();
        s.sort_unstable();
        s != (0..k).collect::<Vec<_>>()
    } {
        return Err(HypError::NotHyperelliptic);
    }
    // order[m] should carry the new label m: relabel by sigma(old) = new
    let mut images = vec![0usize; k];
    for (new, &old) in order.iter().enumerate() {
        images[old] = new;
    }
    let sigma = Perm::from_images(images)?;
    Ok((q.relabel(&sigma), sigma))
}

/// Reads the labels of the upward verticals in counterclockwise order
/// around the singularity, starting from wedge `start`.
pub fn labels_around_singularity(
    q: &Quadrangulation,
    start: usize,
) -> Result<Vec<usize>, HypError> {
    let surface = q.to_surface();
    let cone = surface.build().map_err(|_| HypError::NotHyperelliptic)?;
    if cone.singularities.len() != 1 {
        return Err(HypError::NotHyperelliptic);
    }
    let cycle = &cone.singularities[0].0;
    let ups: Vec<usize> = cycle
        .iter()
        .filter(|&&(_, corner)| corner == 0)
        .map(|&(p, _)| p)
        .collect();
    let pos = ups
        .iter()
        .position(|&p| p == start)
        .ok_or(HypError::NotHyperelliptic)?;
    Ok((0..ups.len()).map(|j| ups[(pos + j) % ups.len()]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_five_quadrilateral_tree() {
        // sigma_l = (1 3), sigma_r = (3 5), sigma_d = (1 2)(3 4), giving
        // pi_l = (1 2)(3 4 5) and pi_r = (1 2 3 4), one-based.
        let sigma_l = Perm::from_cycles(5, &[&[0, 2]]);
        let sigma_r = Perm::from_cycles(5, &[&[2, 4]]);
        let sigma_d = Perm::from_cycles(5, &[&[0, 1], &[2, 3]]);
        let pi_l = sigma_r.compose(&sigma_d);
        let pi_r = sigma_l.compose(&sigma_d);
        assert_eq!(pi_l, Perm::from_cycles(5, &[&[0, 1], &[2, 3, 4]]));
        assert_eq!(pi_r, Perm::from_cycles(5, &[&[0, 1, 2, 3]]));
        let tree = combinatorial_tree_of_relations(&pi_l, &pi_r).unwrap();
        assert_eq!(tree.sigma_d, sigma_d);
        assert_eq!(tree.sigma_l, sigma_l);
        assert_eq!(tree.sigma_r, sigma_r);
        // invariant is the full 5-cycle (1 2 3 4 5)
        let inv = invariant_cycle(&pi_l, &pi_r).unwrap();
        assert_eq!(inv, Perm::from_cycles(5, &[&[0, 1, 2, 3, 4]]));
    }

    #[test]
    fn torus_invariant_is_trivial_cycle() {
        let id = Perm::identity(1);
        let inv = invariant_cycle(&id, &id).unwrap();
        assert!(inv.is_identity());
        assert!(inv.is_k_cycle());
    }

    #[test]
    fn geometric_involution_checked() {
        let q = super::super::genus_two_example();
        let tree = tree_of_relations(&q).unwrap();
        // quadrilaterals 1 and 3 share the diagonal (-1, 6); 2 is fixed
        assert_eq!(tree.sigma_d, Perm::from_cycles(3, &[&[0, 2]]));
    }

    #[test]
    fn labeling_of_golden_torus_is_identity() {
        let q = super::super::golden_torus_example();
        let (relabeled, sigma) = cyclical_labeling(&q, 0).unwrap();
        assert!(sigma.is_identity());
        assert_eq!(relabeled, q);
    }

    #[test]
    fn even_k_rejected() {
        // build a k=2 hyperelliptic-looking datum: pi_l = pi_r = (1 2)
        let p = Perm::from_cycles(2, &[&[0, 1]]);
        let sqrt2 = crate::num::Scalar::sqrt_int(2).unwrap();
        let one = crate::num::Scalar::one();
        let w = super::super::Wedge {
            l: crate::num::PlanarVec::new(
                -&(&sqrt2 / &crate::num::Scalar::from_int(2)),
                one.clone(),
            ),
            r: crate::num::PlanarVec::new(&sqrt2 / &crate::num::Scalar::from_int(2), one.clone()),
        };
        if let Ok(q) = Quadrangulation::new(p.clone(), p, vec![w.clone(), w]) {
            assert!(matches!(cyclical_labeling(&q, 0), Err(HypError::EvenK)));
        }
    }

    #[test]
    fn genus_two_labeling_cycles_through_all() {
        let q = super::super::genus_two_example();
        let (relabeled, _) = cyclical_labeling(&q, 0).unwrap();
        relabeled.validate().unwrap();
        // relabeled datum still hyperelliptic with the same invariant size
        let inv = invariant_cycle(&relabeled.pi_l, &relabeled.pi_r).unwrap();
        assert!(inv.is_k_cycle());
    }
}
