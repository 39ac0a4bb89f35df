//! Staircase moves, their matrices, the rotation operator and the two
//! simultaneous-move algorithms.

use super::{Cycle, HypError, Perm, Quadrangulation, Side, Wedge};
use crate::num::{IntMatrix, PlanarVec};

/// Combinatorial action `c · pi` of a staircase move.
pub fn act_on_perms(pi_l: &Perm, pi_r: &Perm, c: &Cycle) -> (Perm, Perm) {
    let k = pi_l.len();
    match c.side {
        Side::Right => {
            let images = (0..k)
                .map(|i| {
                    if c.support.contains(&i) {
                        pi_l.apply(pi_r.apply(i))
                    } else {
                        pi_l.apply(i)
                    }
                })
                .collect();
            (
                Perm::from_images(images).expect("permutation update"),
                pi_r.clone(),
            )
        }
        Side::Left => {
            let images = (0..k)
                .map(|i| {
                    if c.support.contains(&i) {
                        pi_r.apply(pi_l.apply(i))
                    } else {
                        pi_r.apply(i)
                    }
                })
                .collect();
            (
                pi_l.clone(),
                Perm::from_images(images).expect("permutation update"),
            )
        }
    }
}

/// Staircase matrix `A_{pi,c}` on the wedge basis
/// `(1,l),(1,r),...,(k,l),(k,r)`.
pub fn staircase_matrix(pi_l: &Perm, pi_r: &Perm, c: &Cycle) -> IntMatrix {
    let k = pi_l.len();
    let mut m = IntMatrix::identity(2 * k);
    for &i in &c.support {
        match c.side {
            Side::Right => {
                // row (i,l) gains column (pi_l(i), r)
                m[(2 * i, 2 * pi_l.apply(i) + 1)] += 1;
            }
            Side::Left => {
                // row (i,r) gains column (pi_r(i), l)
                m[(2 * i + 1, 2 * pi_r.apply(i))] += 1;
            }
        }
    }
    m
}

/// Performs the staircase move in `S_c`; requires the staircase to be
/// well-slanted. Returns the new quadrangulation (validated).
pub fn staircase_move(q: &Quadrangulation, c: &Cycle) -> Result<Quadrangulation, HypError> {
    if !q.well_slanted(c)? {
        return Err(HypError::NotWellSlanted);
    }
    let (pi_l, pi_r) = act_on_perms(&q.pi_l, &q.pi_r, c);
    let mut wedges = q.wedges.clone();
    for &i in &c.support {
        let d = q.forward_diagonal(i);
        match c.side {
            Side::Right => wedges[i].l = d,
            Side::Left => wedges[i].r = d,
        }
    }
    let next = Quadrangulation { pi_l, pi_r, wedges };
    next.validate()?;
    Ok(next)
}

fn rot_cw(v: &PlanarVec) -> PlanarVec {
    PlanarVec::new(v.y.clone(), -&v.x)
}

/// Quarter-turn relabeling `R`: `pi'_l = pi_l pi_r pi_l^{-1}`,
/// `pi'_r = pi_l^{-1}`, and in coordinates
/// `w'_{i,l} = (-tau_{i,r}, lambda_{i,r})`,
/// `w'_{i,r} = (tau_{j,l}, -lambda_{j,l})` with `j = pi_l^{-1}(i)`;
/// the natural orientation flips on the side that turns downward.
pub fn rotation(q: &Quadrangulation) -> Quadrangulation {
    let pli = q.pi_l.inverse();
    let pi_l = q.pi_l.compose(&q.pi_r).compose(&pli);
    let pi_r = pli.clone();
    let wedges = (0..q.k())
        .map(|i| Wedge {
            l: q.wedges[i].r.rot90(),
            r: rot_cw(&q.wedges[pli.apply(i)].l),
        })
        .collect();
    let out = Quadrangulation { pi_l, pi_r, wedges };
    debug_assert!(out.validate().is_ok());
    out
}

/// Inverse of [`rotation`].
pub fn rotation_inverse(q: &Quadrangulation) -> Quadrangulation {
    let pri = q.pi_r.inverse();
    let pi_l = pri.clone();
    let pi_r = q.pi_r.compose(&q.pi_l).compose(&pri);
    let wedges = (0..q.k())
        .map(|i| Wedge {
            l: q.wedges[pri.apply(i)].r.rot90(),
            r: rot_cw(&q.wedges[i].l),
        })
        .collect();
    let out = Quadrangulation { pi_l, pi_r, wedges };
    debug_assert!(out.validate().is_ok());
    out
}

/// Image of a cycle under the rotation: a left cycle `c` maps to the
/// right cycle `c^{-1}` (same support), a right cycle to the left cycle
/// `pi_l c` (support pushed through `pi_l`).
pub fn rotated_cycle(pi_l: &Perm, c: &Cycle) -> Cycle {
    match c.side {
        Side::Left => Cycle {
            side: Side::Right,
            support: c.support.clone(),
        },
        Side::Right => {
            let mut support: Vec<usize> = c.support.iter().map(|&i| pi_l.apply(i)).collect();
            support.sort_unstable();
            Cycle {
                side: Side::Left,
                support,
            }
        }
    }
}

/// Inverse staircase move via self-duality: rotate, apply the forward
/// move in the rotated cycle, rotate back. The dual slant condition on
/// the heights is exactly well-slantedness after rotation.
pub fn backward_staircase_move(
    q: &Quadrangulation,
    c: &Cycle,
) -> Result<Quadrangulation, HypError> {
    // q must lie in the image of the forward move along c: check on the
    // rotated side and undo.
    let (prev_l, prev_r) = undo_perms(&q.pi_l, &q.pi_r, c)?;
    let rotated = rotation(q);
    let c_rot = rotated_cycle(&prev_l, c);
    let moved = staircase_move(&rotated, &c_rot).map_err(|e| match e {
        HypError::NotWellSlanted => HypError::BackwardSlant,
        other => other,
    })?;
    let out = rotation_inverse(&moved);
    debug_assert_eq!(out.pi_l, prev_l);
    debug_assert_eq!(out.pi_r, prev_r);
    Ok(out)
}

/// Combinatorial inverse of `c · pi`.
fn undo_perms(pi_l: &Perm, pi_r: &Perm, c: &Cycle) -> Result<(Perm, Perm), HypError> {
    let k = pi_l.len();
    match c.side {
        Side::Right => {
            // pi_l' (i) = pi_l pi_r (i) on the support
            let inv_r = pi_r.inverse();
            let images = (0..k)
                .map(|i| {
                    if c.support.contains(&i) {
                        pi_l.apply(inv_r.apply(i))
                    } else {
                        pi_l.apply(i)
                    }
                })
                .collect();
            // support must be a cycle of pi_r
            check_support_is_cycle(pi_r, &c.support)?;
            Ok((Perm::from_images(images)?, pi_r.clone()))
        }
        Side::Left => {
            let inv_l = pi_l.inverse();
            let images = (0..k)
                .map(|i| {
                    if c.support.contains(&i) {
                        pi_r.apply(inv_l.apply(i))
                    } else {
                        pi_r.apply(i)
                    }
                })
                .collect();
            check_support_is_cycle(pi_l, &c.support)?;
            Ok((pi_l.clone(), Perm::from_images(images)?))
        }
    }
}

fn check_support_is_cycle(p: &Perm, support: &[usize]) -> Result<(), HypError> {
    let ok = p.cycles().iter().any(|cyc| {
        let mut s = cyc.clone();
        s.sort_unstable();
        s == support
    });
    if ok {
        Ok(())
    } else {
        Err(HypError::NotACycle)
    }
}

/// Move-selection policy of [`run_algorithm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    /// Move every well-slanted staircase each step.
    Greedy,
    /// Alternate sides, exhausting each staircase's multiplicity.
    LeftRight,
}

#[derive(Debug, Clone)]
pub struct TraceStep {
    pub moves: Vec<Cycle>,
    pub after: Quadrangulation,
}

/// Runs the chosen simultaneous staircase-move algorithm for the given
/// number of steps. Errors when no well-slanted staircase exists (as on
/// surfaces outside hyperelliptic components).
pub fn run_algorithm(
    q: &Quadrangulation,
    policy: Policy,
    steps: usize,
) -> Result<Vec<TraceStep>, HypError> {
    let mut trace = Vec::with_capacity(steps);
    let mut cur = q.clone();
    for step in 0..steps {
        let mut moved = Vec::new();
        match policy {
            Policy::Greedy => {
                // Disjoint staircases commute; ascending support order is
                // display only.
                let mut ws = cur.well_slanted_staircases()?;
                ws.sort();
                if ws.is_empty() {
                    return Err(HypError::NoWellSlanted);
                }
                for c in ws {
                    // disjointness can break if an earlier move changed
                    // the cycle structure on the same side: recheck
                    if cur.well_slanted(&c).unwrap_or(false) {
                        cur = staircase_move(&cur, &c)?;
                        moved.push(c);
                    }
                }
            }
            Policy::LeftRight => {
                let side = if step % 2 == 0 {
                    Side::Left
                } else {
                    Side::Right
                };
                let mut any = false;
                // exhaust the multiplicity of every staircase on this side
                loop {
                    let candidates: Vec<Cycle> = cur
                        .cycles(side)
                        .into_iter()
                        .filter(|c| cur.well_slanted(c).unwrap_or(false))
                        .collect();
                    if candidates.is_empty() {
                        break;
                    }
                    for c in candidates {
                        if cur.well_slanted(&c).unwrap_or(false) {
                            cur = staircase_move(&cur, &c)?;
                            moved.push(c);
                            any = true;
                        }
                    }
                }
                if !any && cur.well_slanted_staircases()?.is_empty() {
                    return Err(HypError::NoWellSlanted);
                }
            }
        }
        trace.push(TraceStep {
            moves: moved,
            after: cur.clone(),
        });
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::super::{genus_two_example, golden_torus_example, h000_example};
    use super::*;
    use crate::num::{IntMatrix, Scalar};

    fn right(support: &[usize]) -> Cycle {
        Cycle {
            side: Side::Right,
            support: support.to_vec(),
        }
    }

    fn left(support: &[usize]) -> Cycle {
        Cycle {
            side: Side::Left,
            support: support.to_vec(),
        }
    }

    #[test]
    fn worked_right_move() {
        let q = genus_two_example();
        let c = right(&[0, 2]);
        let next = staircase_move(&q, &c).unwrap();
        // pi'_l = (2 3), pi'_r = (1 3) in one-based cycles
        assert_eq!(next.pi_l, Perm::from_cycles(3, &[&[1, 2]]));
        assert_eq!(next.pi_r, Perm::from_cycles(3, &[&[0, 2]]));
        let v = |x: i64, y: i64| PlanarVec::new(Scalar::from_int(x), Scalar::from_int(y));
        assert_eq!(next.wedges[0].l, v(-1, 6));
        assert_eq!(next.wedges[0].r, v(4, 3));
        assert_eq!(next.wedges[1].l, v(-1, 2));
        assert_eq!(next.wedges[1].r, v(2, 4));
        assert_eq!(next.wedges[2].l, v(-1, 6));
        assert_eq!(next.wedges[2].r, v(2, 4));
        next.validate().unwrap();
    }

    #[test]
    fn single_wedge_matrix_is_unipotent() {
        let q = golden_torus_example();
        let c = right(&[0]);
        let m = staircase_matrix(&q.pi_l, &q.pi_r, &c);
        assert_eq!(m, IntMatrix::from_rows(&[&[1, 1], &[0, 1]]));
        let cl = left(&[0]);
        let m = staircase_matrix(&q.pi_l, &q.pi_r, &cl);
        assert_eq!(m, IntMatrix::from_rows(&[&[1, 0], &[1, 1]]));
    }

    #[test]
    fn worked_matrix_instantiation() {
        // c = (1 3) in pi_r with pi_l = (1 2 3):
        // A = I + E_{(1,l)(2,r)} + E_{(3,l)(1,r)}
        let pi_l = Perm::from_cycles(3, &[&[0, 1, 2]]);
        let pi_r = Perm::from_cycles(3, &[&[0, 2]]);
        let m = staircase_matrix(&pi_l, &pi_r, &right(&[0, 2]));
        let mut expect = IntMatrix::identity(6);
        expect[(0, 3)] += 1; // (1,l),(2,r)
        expect[(4, 1)] += 1; // (3,l),(1,r)
        assert_eq!(m, expect);
    }

    #[test]
    fn matrix_reproduces_move() {
        let q = genus_two_example();
        let c = right(&[0, 2]);
        let m = staircase_matrix(&q.pi_l, &q.pi_r, &c);
        let next = staircase_move(&q, &c).unwrap();
        let xs: Vec<Scalar> = q
            .wedges
            .iter()
            .flat_map(|w| [w.l.x.clone(), w.r.x.clone()])
            .collect();
        let moved = m.mul_scalar_vec(&xs);
        let expect: Vec<Scalar> = next
            .wedges
            .iter()
            .flat_map(|w| [w.l.x.clone(), w.r.x.clone()])
            .collect();
        assert_eq!(moved, expect);
    }

    #[test]
    fn rotation_conjugates_perms() {
        let q = genus_two_example();
        let r = rotation(&q);
        // pi'_l = (1 2), pi'_r = (1 3 2) one-based
        assert_eq!(r.pi_l, Perm::from_cycles(3, &[&[0, 1]]));
        assert_eq!(r.pi_r, Perm::from_cycles(3, &[&[0, 2, 1]]));
        let back = rotation_inverse(&r);
        assert_eq!(back, q);
    }

    #[test]
    fn rotation_swaps_width_and_height_roles() {
        let q = golden_torus_example();
        let r = rotation(&q);
        assert_eq!(r.wedges[0].l, q.wedges[0].r.rot90());
    }

    #[test]
    fn backward_inverts_forward() {
        let q = genus_two_example();
        let c = right(&[0, 2]);
        let fwd = staircase_move(&q, &c).unwrap();
        let back = backward_staircase_move(&fwd, &c).unwrap();
        assert_eq!(back, q);

        // single wedge: inverse of the right move is unipotent inverse
        let g = golden_torus_example();
        let c1 = right(&[0]);
        let fwd = staircase_move(&g, &c1).unwrap();
        let back = backward_staircase_move(&fwd, &c1).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn h000_has_no_move() {
        let q = h000_example();
        assert!(matches!(
            run_algorithm(&q, Policy::Greedy, 1),
            Err(HypError::NoWellSlanted)
        ));
    }

    #[test]
    fn golden_greedy_alternates() {
        let q = golden_torus_example();
        let trace = run_algorithm(&q, Policy::Greedy, 4).unwrap();
        let sides: Vec<Side> = trace.iter().map(|s| s.moves[0].side).collect();
        assert_eq!(
            sides,
            vec![Side::Right, Side::Left, Side::Right, Side::Left]
        );
        for s in &trace {
            s.after.validate().unwrap();
        }
    }

    #[test]
    fn genus_two_greedy_stays_valid() {
        let q = genus_two_example();
        let trace = run_algorithm(&q, Policy::Greedy, 2).unwrap();
        for s in &trace {
            s.after.validate().unwrap();
        }
        // area preserved by moves
        assert_eq!(trace.last().unwrap().after.area(), q.area());
    }

    #[test]
    fn cycle_word_notation() {
        assert_eq!(left(&[0, 2, 3]).word(5), "l·ll·");
        assert_eq!(right(&[1, 2]).word(5), "·rr··");
    }
}
