//! Forward and backward diagonal changes on castle sets.

use super::word::Tree;
use super::{CastleError, CastleSet};
use crate::hyp::Side;
use crate::num::IntMatrix;

/// A diagonal-change choice: polygon index plus the move direction
/// (determined by the slope of the cut diagonal).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CastleMove {
    pub index: usize,
    pub side: Side,
}

impl CastleMove {
    /// Word notation over {., l} or {., r}.
    pub fn word(&self, k: usize) -> String {
        let letter = match self.side {
            Side::Left => 'l',
            Side::Right => 'r',
        };
        (0..k)
            .map(|i| if i == self.index { letter } else { '·' })
            .collect()
    }
}

/// Indices where a forward move is allowed: the non-triangle polygons.
pub fn allowed(set: &CastleSet) -> Vec<usize> {
    (0..set.k())
        .filter(|&i| matches!(set.forest.trees[i], Tree::Node(..)))
        .collect()
}

/// Direction of the forward move at polygon `i`: a left-slanted diagonal
/// is cut by a right move and vice versa.
pub fn move_direction(set: &CastleSet, i: usize) -> Result<Side, CastleError> {
    let d = set.forward_diagonal(i)?;
    match d.x.try_signum()? {
        -1 => Ok(Side::Right),
        1 => Ok(Side::Left),
        _ => Err(CastleError::VerticalDiagonal(i)),
    }
}

/// Matrix of the forward move: one row gains the signed chord of the
/// subtree that is cut away.
pub fn move_matrix(set: &CastleSet, i: usize) -> Result<(IntMatrix, CastleMove), CastleError> {
    let side = move_direction(set, i)?;
    let k = set.k();
    let mut m = IntMatrix::identity(2 * k);
    let Tree::Node(a, b) = &set.forest.trees[i] else {
        return Err(CastleError::TriangleOnly(i));
    };
    match side {
        Side::Right => {
            // w'_{i,l} = w_{i,l} + chord(left subtree)
            for (leaf_side, j) in a.leaves() {
                let col = 2 * j + usize::from(leaf_side == Side::Right);
                let sign = if leaf_side == Side::Right { 1 } else { -1 };
                m[(2 * i, col)] += sign;
            }
        }
        Side::Left => {
            // w'_{i,r} = w_{i,r} - chord(right subtree)
            for (leaf_side, j) in b.leaves() {
                let col = 2 * j + usize::from(leaf_side == Side::Right);
                let sign = if leaf_side == Side::Right { -1 } else { 1 };
                m[(2 * i + 1, col)] += sign;
            }
        }
    }
    Ok((m, CastleMove { index: i, side }))
}

/// Applies the forward diagonal change at polygon `i`. The direction is
/// read from the diagonal.
pub fn forward_move(set: &CastleSet, i: usize) -> Result<(CastleSet, CastleMove), CastleError> {
    let side = move_direction(set, i)?;
    let Tree::Node(a, b) = set.forest.trees[i].clone() else {
        return Err(CastleError::TriangleOnly(i));
    };
    let diagonal = set.forward_diagonal(i)?;
    let mut trees = set.forest.trees.clone();
    let mut wedges = set.wedges.clone();
    match side {
        Side::Right => {
            // keep the right part; glue the left part under l_i
            trees[i] = *b;
            let replacement = Tree::Node(a, Box::new(Tree::Leaf(Side::Left, i)));
            let mut placed = false;
            for t in trees.iter_mut() {
                if t.replace_leaf(Side::Left, i, replacement.clone()) {
                    placed = true;
                    break;
                }
            }
            debug_assert!(placed, "label l_i exists exactly once");
            wedges[i].l = diagonal;
        }
        Side::Left => {
            trees[i] = *a;
            let replacement = Tree::Node(Box::new(Tree::Leaf(Side::Right, i)), b);
            let mut placed = false;
            for t in trees.iter_mut() {
                if t.replace_leaf(Side::Right, i, replacement.clone()) {
                    placed = true;
                    break;
                }
            }
            debug_assert!(placed, "label r_i exists exactly once");
            wedges[i].r = diagonal;
        }
    }
    let next = CastleSet {
        forest: super::ForestWord { trees },
        wedges,
    };
    next.validate()?;
    Ok((next, CastleMove { index: i, side }))
}

/// Direction of the backward move at polygon `i`: the taller wedge side
/// came from the last forward cut there.
pub fn backward_direction(set: &CastleSet, i: usize) -> Result<Side, CastleError> {
    let w = &set.wedges[i];
    match w.r.y.try_cmp(&w.l.y)? {
        std::cmp::Ordering::Less => Ok(Side::Right),
        std::cmp::Ordering::Greater => Ok(Side::Left),
        std::cmp::Ordering::Equal => Err(CastleError::KeaneViolation),
    }
}

/// Applies the backward diagonal change at polygon `i`; exact inverse of
/// the forward move with the same choice.
pub fn backward_move(set: &CastleSet, i: usize) -> Result<(CastleSet, CastleMove), CastleError> {
    let side = backward_direction(set, i)?;
    let mut trees = set.forest.trees.clone();
    let mut wedges = set.wedges.clone();
    match side {
        Side::Right => {
            // undo a right move: detach the sibling of l_i, restore the
            // old left wedge side, re-root tree i under the sibling
            let mut sibling = None;
            for t in trees.iter_mut() {
                if t.leaf_parent_arm(Side::Left, i) == Some(Side::Left) {
                    // l_i is a left child: not the image of a right move
                    return Err(CastleError::BackwardBlocked(i));
                }
                if let Some(s) = t.detach_sibling(Side::Left, i) {
                    sibling = Some(s);
                    break;
                }
            }
            let Some(sibling) = sibling else {
                return Err(CastleError::BackwardBlocked(i));
            };
            let chord = set.chord(&sibling);
            wedges[i].l = &wedges[i].l - &chord;
            trees[i] = Tree::Node(Box::new(sibling), Box::new(trees[i].clone()));
        }
        Side::Left => {
            let mut sibling = None;
            for t in trees.iter_mut() {
                if t.leaf_parent_arm(Side::Right, i) == Some(Side::Right) {
                    return Err(CastleError::BackwardBlocked(i));
                }
                if let Some(s) = t.detach_sibling(Side::Right, i) {
                    sibling = Some(s);
                    break;
                }
            }
            let Some(sibling) = sibling else {
                return Err(CastleError::BackwardBlocked(i));
            };
            let chord = set.chord(&sibling);
            wedges[i].r = &wedges[i].r + &chord;
            trees[i] = Tree::Node(Box::new(trees[i].clone()), Box::new(sibling));
        }
    }
    let next = CastleSet {
        forest: super::ForestWord { trees },
        wedges,
    };
    next.validate()
        .map_err(|_| CastleError::BackwardBlocked(i))?;
    Ok((next, CastleMove { index: i, side }))
}

/// Indices where a backward move is allowed.
pub fn allowed_backward(set: &CastleSet) -> Vec<usize> {
    (0..set.k())
        .filter(|&i| backward_move(set, i).is_ok())
        .collect()
}
