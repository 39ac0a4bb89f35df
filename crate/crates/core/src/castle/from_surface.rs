//! Castle decompositions of arbitrary translation surfaces through
//! veering triangulations.
//!
//! Any flat triangulation is flipped until no triangle is monochromatic
//! in the increasing/decreasing edge coloring; the veering triangles
//! split into base and stack triangles, and stacking each chain above
//! its base triangle assembles the k-set.

use super::word::{ForestWord, Tree};
use super::{CastleError, CastleSet};
use crate::hyp::{Side, Wedge};
use crate::num::PlanarVec;
use crate::surface::{FlatTriangulation, TranslationSurface};

const FLIP_BUDGET: usize = 10_000;

/// Edge color: +1 increasing (positive slope), -1 decreasing. Horizontal
/// or vertical edges violate the Keane precondition.
fn color(v: &PlanarVec) -> Result<i8, CastleError> {
    let s = v.x.try_signum()? * v.y.try_signum()?;
    if s == 0 {
        return Err(CastleError::KeaneViolation);
    }
    Ok(s)
}

fn is_monochromatic(tri: &FlatTriangulation, t: usize) -> Result<bool, CastleError> {
    let c0 = color(&tri.tris[t].edge[0])?;
    let c1 = color(&tri.tris[t].edge[1])?;
    let c2 = color(&tri.tris[t].edge[2])?;
    Ok(c0 == c1 && c1 == c2)
}

/// Flips edges until the triangulation is veering. The flip site is the
/// lowest-index monochromatic triangle; its edges are tried longest
/// first.
fn make_veering(tri: &mut FlatTriangulation) -> Result<(), CastleError> {
    for _ in 0..FLIP_BUDGET {
        let mut mono = None;
        for t in 0..tri.tris.len() {
            if is_monochromatic(tri, t)? {
                mono = Some(t);
                break;
            }
        }
        let Some(t) = mono else {
            return Ok(());
        };
        let mut edges: Vec<usize> = (0..3).collect();
        edges.sort_by(|&a, &b| {
            tri.tris[t].edge[b]
                .norm_sq()
                .cmp_exact(&tri.tris[t].edge[a].norm_sq())
        });
        let mut flipped = false;
        for e in edges {
            if tri.flip(t, e).is_ok() {
                flipped = true;
                break;
            }
        }
        if !flipped {
            return Err(CastleError::Budget(FLIP_BUDGET));
        }
    }
    Err(CastleError::Budget(FLIP_BUDGET))
}

/// Corner of the lowest vertex: both adjacent sides point upward.
fn lowest_corner(tri: &FlatTriangulation, t: usize) -> Result<usize, CastleError> {
    for c in 0..3 {
        let out_up = tri.tris[t].edge[c].y.try_signum()? > 0;
        let in_down = tri.tris[t].edge[(c + 2) % 3].y.try_signum()? < 0;
        if out_up && in_down {
            return Ok(c);
        }
    }
    Err(CastleError::KeaneViolation)
}

/// Base triangle: the lowest corner's sides open into a wedge.
fn is_base(tri: &FlatTriangulation, t: usize) -> Result<bool, CastleError> {
    let c = lowest_corner(tri, t)?;
    let right = &tri.tris[t].edge[c];
    let left = -&tri.tris[t].edge[(c + 2) % 3];
    Ok(right.x.try_signum()? > 0 && left.x.try_signum()? < 0)
}

/// Decomposes a translation surface into a k-set of castle polygons.
pub fn from_surface(surface: &TranslationSurface) -> Result<CastleSet, CastleError> {
    let mut tri = FlatTriangulation::from_surface(surface)?;
    make_veering(&mut tri)?;

    // classify and label base triangles
    let mut base_of = vec![None; tri.tris.len()];
    let mut bases = Vec::new();
    #[allow(clippy::needless_range_loop)]
    for t in 0..tri.tris.len() {
        if is_base(&tri, t)? {
            base_of[t] = Some(bases.len());
            bases.push(t);
        }
    }
    let k = bases.len();
    let wedges: Vec<Wedge> = bases
        .iter()
        .map(|&t| {
            let c = lowest_corner(&tri, t)?;
            Ok(Wedge {
                l: -&tri.tris[t].edge[(c + 2) % 3],
                r: tri.tris[t].edge[c].clone(),
            })
        })
        .collect::<Result<_, CastleError>>()?;

    // grow the tree above each base triangle's top side
    let trees: Vec<Tree> = bases
        .iter()
        .map(|&t| {
            let c = lowest_corner(&tri, t)?;
            // chord side: from right vertex up-left to left vertex is
            // edge c+1; the polygon above it is its twin
            grow(&tri, &base_of, tri.tris[t].twin[(c + 1) % 3])
        })
        .collect::<Result<_, CastleError>>()?;

    let set = CastleSet::new(ForestWord { trees }, wedges)?;
    debug_assert_eq!(set.k(), k);
    Ok(set)
}

/// Follows a chord's twin upward: a base triangle's wedge side becomes a
/// leaf, a stack triangle's lower side becomes a node over its two upper
/// sides.
fn grow(
    tri: &FlatTriangulation,
    base_of: &[Option<usize>],
    entry: (usize, usize),
) -> Result<Tree, CastleError> {
    let (t, e) = entry;
    if let Some(j) = base_of[t] {
        let c = lowest_corner(tri, t)?;
        if e == c {
            return Ok(Tree::Leaf(Side::Right, j));
        }
        if e == (c + 2) % 3 {
            return Ok(Tree::Leaf(Side::Left, j));
        }
        // entered a base triangle through its chord: not stacked
        return Err(CastleError::NotStack(j));
    }
    // stack triangle: the entry edge must be the side opposite the
    // highest vertex
    let apex = (0..3)
        .find(|&c| {
            let up_in = tri.tris[t].edge[(c + 2) % 3].y.signum() > 0;
            let down_out = tri.tris[t].edge[c].y.signum() < 0;
            up_in && down_out
        })
        .ok_or(CastleError::KeaneViolation)?;
    if e != (apex + 1) % 3 {
        return Err(CastleError::NotStack(t));
    }
    // left child: side from the left end (corner e) up to the apex,
    // crossed via edge e+2; right child via edge e+1
    let left = grow(tri, base_of, tri.tris[t].twin[(e + 2) % 3])?;
    let right = grow(tri, base_of, tri.tris[t].twin[(e + 1) % 3])?;
    Ok(Tree::Node(Box::new(left), Box::new(right)))
}

#[cfg(test)]
mod tests {
    use super::super::balance::{balance, detect_closed_orbit};
    use super::*;
    use crate::num::{Rational, Scalar};
    use crate::surface::{regular_octagon, square_torus};

    fn rat(n: i64, d: i64) -> Scalar {
        Scalar::Rat(Rational::new(n, d))
    }

    /// Shear that removes horizontal and vertical directions from the
    /// given surface's saddle connections, keeping the field.
    fn tilt(x: &TranslationSurface) -> TranslationSurface {
        // (1 + st, t; s, 1) with s = 1/5, t = 1/3
        x.linear_map(&rat(16, 15), &rat(1, 3), &rat(1, 5), &rat(1, 1))
    }

    #[test]
    fn tilted_torus_is_a_one_set() {
        let set = from_surface(&tilt(&square_torus())).unwrap();
        assert_eq!(set.k(), 1);
        assert_eq!(set.forest.trees[0].leaf_count(), 2);
        assert_eq!(set.area(), Scalar::one());
    }

    #[test]
    fn tilted_octagon_is_a_three_set() {
        let set = from_surface(&tilt(&regular_octagon())).unwrap();
        assert_eq!(set.k(), 3);
        set.validate().unwrap();
        assert_eq!(set.area(), regular_octagon().area());
    }

    #[test]
    fn sqrt2_surface_round_trips_up_to_moves() {
        // glue the worked 3-set into a surface, decompose again, and
        // compare balanced representatives
        let set = super::super::sqrt2_example();
        let surface = castle_to_surface(&set);
        let again = from_surface(&surface).unwrap();
        let b1 = balance(&set, 1000).unwrap();
        let b2 = balance(&again, 1000).unwrap();
        // unique balanced representative up to relabeling
        let sigmas = crate::hyp::Perm::all(3);
        assert!(
            sigmas.iter().any(|s| b2.relabel(s) == b1),
            "balanced sets differ beyond relabeling"
        );
        // and both carry the same closed orbit
        let o1 = detect_closed_orbit(&set, 20, 1000).unwrap().unwrap();
        let o2 = detect_closed_orbit(&again, 20, 1000).unwrap().unwrap();
        assert_eq!(o1.period_exp, o2.period_exp);
    }

    /// Presents a castle set as polygons with explicit gluing.
    pub(crate) fn castle_to_surface(set: &CastleSet) -> TranslationSurface {
        // polygon i: lowest vertex at origin, boundary 0 -> w_r -> up the
        // right chords -> ... -> w_l -> 0; edges labeled by their leaf.
        let mut polygons = Vec::new();
        let mut edge_of_leaf = std::collections::BTreeMap::new();
        let mut bottom_edges = Vec::new();
        for i in 0..set.k() {
            let mut boundary = vec![PlanarVec::zero(), set.wedges[i].r.clone()];
            // upper boundary from right vertex to left vertex: reversed
            // leaf order, each side reversed
            let leaves = set.forest.trees[i].leaves();
            let mut pos = set.wedges[i].r.clone();
            let mut upper_edges = Vec::new();
            for &(side, j) in leaves.iter().rev() {
                let vec = match side {
                    Side::Right => -&set.wedges[j].r,
                    Side::Left => set.wedges[j].l.clone(),
                };
                pos = &pos + &vec;
                upper_edges.push((side, j));
                boundary.push(pos.clone());
            }
            // last position is the left vertex; drop the duplicate
            debug_assert_eq!(boundary.last().unwrap(), &set.wedges[i].l);
            boundary.pop();
            boundary.push(set.wedges[i].l.clone());
            let n = boundary.len();
            polygons.push(boundary);
            // edge indices: 0 = bottom right (w_{i,r}), then upper sides,
            // last = bottom left (-w_{i,l})
            bottom_edges.push(((i, 0), (i, n - 1)));
            for (slot, &(side, j)) in upper_edges.iter().enumerate() {
                edge_of_leaf.insert((side, j), (i, 1 + slot));
            }
        }
        let mut gluing = Vec::new();
        for i in 0..set.k() {
            let ((pr, er), (pl, el)) = (bottom_edges[i].0, bottom_edges[i].1);
            gluing.push((edge_of_leaf[&(Side::Right, i)], (pr, er)));
            gluing.push((edge_of_leaf[&(Side::Left, i)], (pl, el)));
        }
        TranslationSurface { polygons, gluing }
    }

    #[test]
    fn castle_to_surface_is_consistent() {
        let set = super::super::sqrt2_example();
        let surface = castle_to_surface(&set);
        let cone = surface.build().unwrap();
        assert_eq!(cone.genus, 2);
        assert_eq!(cone.total_cone_multiple(), 3);
        assert_eq!(surface.area(), set.area());
    }
}
