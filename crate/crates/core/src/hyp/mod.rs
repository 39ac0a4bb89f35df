//! Quadrangulations of surfaces in hyperelliptic components and the
//! staircase-move calculus on them.
//!
//! A quadrangulation is a permutation pair on `[k]` plus `k` wedges; the
//! train-track relations make the quadrilaterals close up. Staircase
//! moves act along cycles of one side, linearly on the wedge data via
//! unipotent integer matrices, and are inverted through the rotation
//! operator.

mod fundamental;
mod graph;
mod moves;
mod perm;
mod tree;

pub use fundamental::{
    canonical_quadrangulation, hyp_first_return, is_canonical, post_move_width, FirstReturn,
};
pub use graph::{dc_graph, transport_tree, DcGraphHyp};
pub use moves::{
    backward_staircase_move, rotation, rotation_inverse, run_algorithm, staircase_matrix,
    staircase_move, Policy, TraceStep,
};
pub use perm::Perm;
pub use tree::{
    combinatorial_tree_of_relations, cyclical_labeling, invariant_cycle, labels_around_singularity,
    tree_of_relations, TreeOfRelations,
};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::iet::{IetDatum, PermPair};
use crate::num::{PlanarVec, Scalar};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum HypError {
    #[error("permutation data must act on the same [k]")]
    SizeMismatch,
    #[error("wedge {0}: sign pattern violated")]
    WedgeSigns(usize),
    #[error("train-track relation fails at quadrilateral {0}")]
    TrainTrack(usize),
    #[error("cycle is not a cycle of the stated side")]
    NotACycle,
    #[error("staircase is not well-slanted")]
    NotWellSlanted,
    #[error("vertical forward diagonal at quadrilateral {0}")]
    VerticalDiagonal(usize),
    #[error("no well-slanted staircase exists in this quadrangulation")]
    NoWellSlanted,
    #[error("backward slant condition fails")]
    BackwardSlant,
    #[error("no consistent involution: the quadrangulation is not hyperelliptic")]
    NotHyperelliptic,
    #[error("cyclical labeling needs odd k")]
    EvenK,
    #[error("budget of {0} steps exceeded")]
    Budget(usize),
    #[error("invalid suspension datum")]
    BadSuspension,
    #[error("numeric error: {0}")]
    Num(#[from] crate::num::NumError),
    #[error("iet error: {0}")]
    Iet(#[from] crate::iet::IetError),
}

/// Side selector for staircases and cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// A cycle of one of the two permutations, identified by its support.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cycle {
    pub side: Side,
    /// Support as a sorted set of 0-based indices.
    pub support: Vec<usize>,
}

impl Cycle {
    /// Word notation over {., l} or {., r}: one letter per index.
    pub fn word(&self, k: usize) -> String {
        let letter = match self.side {
            Side::Left => 'l',
            Side::Right => 'r',
        };
        (0..k)
            .map(|i| {
                if self.support.contains(&i) {
                    letter
                } else {
                    '·'
                }
            })
            .collect()
    }

    pub fn is_disjoint(&self, other: &Cycle) -> bool {
        self.support.iter().all(|i| !other.support.contains(i))
    }
}

/// Wedge: a left-slanted and a right-slanted vector from one singular
/// point, bounding a triangle around a vertical.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wedge {
    pub l: PlanarVec,
    pub r: PlanarVec,
}

impl Wedge {
    pub fn check_signs(&self) -> bool {
        self.l.x.signum() < 0
            && self.l.y.signum() > 0
            && self.r.x.signum() > 0
            && self.r.y.signum() > 0
    }
}

/// Quadrangulation data `(pi_l, pi_r, wedges)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Quadrangulation {
    pub pi_l: Perm,
    pub pi_r: Perm,
    pub wedges: Vec<Wedge>,
}

impl Quadrangulation {
    pub fn k(&self) -> usize {
        self.wedges.len()
    }

    pub fn new(pi_l: Perm, pi_r: Perm, wedges: Vec<Wedge>) -> Result<Self, HypError> {
        if pi_l.len() != wedges.len() || pi_r.len() != wedges.len() {
            return Err(HypError::SizeMismatch);
        }
        let q = Quadrangulation { pi_l, pi_r, wedges };
        q.validate()?;
        Ok(q)
    }

    /// Exact wedge sign pattern and train-track verification.
    pub fn validate(&self) -> Result<(), HypError> {
        for (i, w) in self.wedges.iter().enumerate() {
            if !w.check_signs() {
                return Err(HypError::WedgeSigns(i));
            }
        }
        for i in 0..self.k() {
            let lhs = &self.wedges[i].l + &self.wedges[self.pi_l.apply(i)].r;
            let rhs = &self.wedges[i].r + &self.wedges[self.pi_r.apply(i)].l;
            if lhs != rhs {
                return Err(HypError::TrainTrack(i));
            }
        }
        Ok(())
    }

    /// Forward diagonal `w_{i,l} + w_{pi_l(i),r}`, asserted against the
    /// other train-track route.
    pub fn forward_diagonal(&self, i: usize) -> PlanarVec {
        let d = &self.wedges[i].l + &self.wedges[self.pi_l.apply(i)].r;
        debug_assert_eq!(
            d,
            &self.wedges[i].r + &self.wedges[self.pi_r.apply(i)].l,
            "train-tracks must hold"
        );
        d
    }

    /// All cycles of one side.
    pub fn cycles(&self, side: Side) -> Vec<Cycle> {
        let perm = match side {
            Side::Left => &self.pi_l,
            Side::Right => &self.pi_r,
        };
        perm.cycles()
            .into_iter()
            .map(|mut support| {
                support.sort_unstable();
                Cycle { side, support }
            })
            .collect()
    }

    /// A right staircase is well-slanted when every forward diagonal in
    /// it is left-slanted, and symmetrically for left staircases.
    /// A vertical diagonal is a Keane violation.
    pub fn well_slanted(&self, c: &Cycle) -> Result<bool, HypError> {
        self.check_cycle(c)?;
        let want = match c.side {
            Side::Right => -1,
            Side::Left => 1,
        };
        let mut ok = true;
        for &i in &c.support {
            let d = self.forward_diagonal(i);
            let s = d.x.try_signum()?;
            if s == 0 {
                return Err(HypError::VerticalDiagonal(i));
            }
            if s != want {
                ok = false;
            }
        }
        Ok(ok)
    }

    fn check_cycle(&self, c: &Cycle) -> Result<(), HypError> {
        let all = self.cycles(c.side);
        if all.iter().any(|x| x == c) {
            Ok(())
        } else {
            Err(HypError::NotACycle)
        }
    }

    /// Well-slanted staircases of both sides.
    pub fn well_slanted_staircases(&self) -> Result<Vec<Cycle>, HypError> {
        let mut out = Vec::new();
        for side in [Side::Left, Side::Right] {
            for c in self.cycles(side) {
                if self.well_slanted(&c)? {
                    out.push(c);
                }
            }
        }
        Ok(out)
    }

    /// Exact area: shoelace over the quadrilaterals. Quadrilateral `i`
    /// has vertices `0, w_r, w_d, w_l` in counterclockwise order.
    pub fn area(&self) -> Scalar {
        let mut total = Scalar::zero();
        for i in 0..self.k() {
            let d = self.forward_diagonal(i);
            let w = &self.wedges[i];
            let twice = w.r.cross(&d) + d.cross(&w.l);
            total = total + twice;
        }
        total / Scalar::from_int(2)
    }

    /// Widths `(x of w_l, x of w_r)` as the signed interval `I(q_i)`.
    pub fn width_interval(&self, i: usize) -> (Scalar, Scalar) {
        (self.wedges[i].l.x.clone(), self.wedges[i].r.x.clone())
    }

    pub fn width(&self, i: usize) -> Scalar {
        let (a, b) = self.width_interval(i);
        b - a
    }

    /// Applies the geodesic flow `g_t` with `e^t = factor`.
    pub fn teich_flow(&self, factor: &Scalar) -> Quadrangulation {
        Quadrangulation {
            pi_l: self.pi_l.clone(),
            pi_r: self.pi_r.clone(),
            wedges: self
                .wedges
                .iter()
                .map(|w| Wedge {
                    l: w.l.teich_scale(factor),
                    r: w.r.teich_scale(factor),
                })
                .collect(),
        }
    }

    /// Presents the quadrangulation as a translation surface: one
    /// quadrilateral polygon per wedge, glued top-left to bottom-right.
    pub fn to_surface(&self) -> crate::surface::TranslationSurface {
        let polygons = (0..self.k())
            .map(|i| {
                let w = &self.wedges[i];
                let d = self.forward_diagonal(i);
                vec![PlanarVec::zero(), w.r.clone(), d, w.l.clone()]
            })
            .collect();
        let mut gluing = Vec::with_capacity(2 * self.k());
        for i in 0..self.k() {
            // top-left side of i (edge 2) against bottom-right of pi_l(i)
            gluing.push(((i, 2), (self.pi_l.apply(i), 0)));
            // top-right side of i (edge 1) against bottom-left of pi_r(i)
            gluing.push(((i, 1), (self.pi_r.apply(i), 3)));
        }
        crate::surface::TranslationSurface { polygons, gluing }
    }

    /// Relabels quadrilateral `i` to `sigma(i)`.
    pub fn relabel(&self, sigma: &Perm) -> Quadrangulation {
        let k = self.k();
        let mut wedges = vec![None; k];
        for i in 0..k {
            wedges[sigma.apply(i)] = Some(self.wedges[i].clone());
        }
        Quadrangulation {
            pi_l: sigma.conjugate(&self.pi_l),
            pi_r: sigma.conjugate(&self.pi_r),
            wedges: wedges.into_iter().map(Option::unwrap).collect(),
        }
    }

    /// The 2k-interval bipartite exchange of the wedge real parts.
    ///
    /// Both rows decompose the concatenated wedge intervals: the bottom
    /// row is `(1,l)(1,r)(2,l)(2,r)...` (the wedge pieces themselves),
    /// the top row lists within block `i` the pieces `(pi_l(i), r)` then
    /// `(pi_r(i), l)` cut apart by the forward diagonal. A symbol's
    /// length is the width of its wedge piece.
    pub fn bipartite_iet(&self) -> Result<IetDatum, HypError> {
        let k = self.k();
        let sym = |i: usize, side: char| format!("{}{}", i + 1, side);
        let mut top_row = Vec::with_capacity(2 * k);
        let mut bot_row = Vec::with_capacity(2 * k);
        for i in 0..k {
            top_row.push(sym(self.pi_l.apply(i), 'r'));
            top_row.push(sym(self.pi_r.apply(i), 'l'));
            bot_row.push(sym(i, 'l'));
            bot_row.push(sym(i, 'r'));
        }
        let perm = PermPair::new(&top_row, &bot_row)?;
        let lengths = perm
            .alphabet
            .iter()
            .map(|name| {
                let idx: usize = name[..name.len() - 1].parse::<usize>().unwrap() - 1;
                if name.ends_with('l') {
                    -&self.wedges[idx].l.x
                } else {
                    self.wedges[idx].r.x.clone()
                }
            })
            .collect();
        Ok(IetDatum::new(perm, lengths)?)
    }
}

/// Rebuilds a quadrangulation from a bipartite exchange datum and a
/// suspension: `w = lambda + i tau` with both train-tracks demanded.
pub fn suspension(
    pi_l: &Perm,
    pi_r: &Perm,
    lambda: &[(Scalar, Scalar)],
    tau: &[(Scalar, Scalar)],
) -> Result<Quadrangulation, HypError> {
    if lambda.len() != tau.len() || lambda.len() != pi_l.len() {
        return Err(HypError::SizeMismatch);
    }
    for (tl, tr) in tau {
        if tl.try_signum()? <= 0 || tr.try_signum()? <= 0 {
            return Err(HypError::BadSuspension);
        }
    }
    let wedges = lambda
        .iter()
        .zip(tau)
        .map(|((ll, lr), (tl, tr))| Wedge {
            l: PlanarVec::new(ll.clone(), tl.clone()),
            r: PlanarVec::new(lr.clone(), tr.clone()),
        })
        .collect();
    Quadrangulation::new(pi_l.clone(), pi_r.clone(), wedges).map_err(|e| match e {
        HypError::TrainTrack(_) | HypError::WedgeSigns(_) => HypError::BadSuspension,
        other => other,
    })
}

impl fmt::Debug for Quadrangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pi_l = {}, pi_r = {}", self.pi_l, self.pi_r)?;
        for (i, w) in self.wedges.iter().enumerate() {
            writeln!(f, "  w{} = l {} r {}", i + 1, w.l, w.r)?;
        }
        Ok(())
    }
}

// JSON: {"k":3,"pi_l":[2,3,1],"pi_r":[3,2,1],"wedges":[{"l":[x,y],"r":[x,y]},..]}
#[derive(Serialize, Deserialize)]
struct QuadJson {
    k: usize,
    pi_l: Vec<usize>,
    pi_r: Vec<usize>,
    wedges: Vec<WedgeJson>,
}

#[derive(Serialize, Deserialize)]
struct WedgeJson {
    l: (Scalar, Scalar),
    r: (Scalar, Scalar),
}

impl Serialize for Quadrangulation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        QuadJson {
            k: self.k(),
            pi_l: self.pi_l.one_based(),
            pi_r: self.pi_r.one_based(),
            wedges: self
                .wedges
                .iter()
                .map(|w| WedgeJson {
                    l: (w.l.x.clone(), w.l.y.clone()),
                    r: (w.r.x.clone(), w.r.y.clone()),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Quadrangulation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = QuadJson::deserialize(d)?;
        if raw.pi_l.len() != raw.k || raw.pi_r.len() != raw.k || raw.wedges.len() != raw.k {
            return Err(D::Error::custom("k does not match the data"));
        }
        let pi_l = Perm::from_one_based(&raw.pi_l).map_err(D::Error::custom)?;
        let pi_r = Perm::from_one_based(&raw.pi_r).map_err(D::Error::custom)?;
        let wedges = raw
            .wedges
            .into_iter()
            .map(|w| Wedge {
                l: PlanarVec::new(w.l.0, w.l.1),
                r: PlanarVec::new(w.r.0, w.r.1),
            })
            .collect();
        Quadrangulation::new(pi_l, pi_r, wedges).map_err(D::Error::custom)
    }
}

/// The worked genus-two example: `pi_l = (1 2 3)`, `pi_r = (1 3)`,
/// integer wedges.
pub fn genus_two_example() -> Quadrangulation {
    let lam = [(-3i64, 4i64), (-1, 2), (-5, 2)];
    let tau = [(2i64, 3i64), (2, 4), (3, 4)];
    let wedges = lam
        .iter()
        .zip(&tau)
        .map(|(&(ll, lr), &(tl, tr))| Wedge {
            l: PlanarVec::new(Scalar::from_int(ll), Scalar::from_int(tl)),
            r: PlanarVec::new(Scalar::from_int(lr), Scalar::from_int(tr)),
        })
        .collect();
    Quadrangulation::new(
        Perm::from_cycles(3, &[&[0, 1, 2]]),
        Perm::from_cycles(3, &[&[0, 2]]),
        wedges,
    )
    .expect("worked example is valid")
}

/// The stratum H(0,0,0) quadrangulation with no well-slanted staircase.
pub fn h000_example() -> Quadrangulation {
    let r = |n: i64, d: i64| Scalar::Rat(crate::num::Rational::new(n, d));
    let w = |lx: Scalar, ly: Scalar, rx: Scalar, ry: Scalar| Wedge {
        l: PlanarVec::new(lx, ly),
        r: PlanarVec::new(rx, ry),
    };
    let wedges = vec![
        w(r(-2, 1), r(2, 1), r(1, 1), r(1, 1)),
        w(r(-13, 10), r(2, 1), r(17, 10), r(1, 1)),
        w(r(-13, 10), r(2, 1), r(17, 10), r(1, 1)),
    ];
    Quadrangulation::new(
        Perm::from_cycles(3, &[&[0, 1, 2]]),
        Perm::from_cycles(3, &[&[0, 1, 2]]),
        wedges,
    )
    .expect("example is valid")
}

/// The golden single-wedge torus of the first-return example.
pub fn golden_torus_example() -> Quadrangulation {
    let sqrt5 = Scalar::sqrt_int(5).unwrap();
    let g = (sqrt5.clone() - Scalar::one()) / Scalar::from_int(2);
    let h = (Scalar::from_int(3) - sqrt5) / Scalar::from_int(2);
    Quadrangulation::new(
        Perm::identity(1),
        Perm::identity(1),
        vec![Wedge {
            l: PlanarVec::new(-&g, h.clone()),
            r: PlanarVec::new(h, g),
        }],
    )
    .expect("golden wedge is valid")
}
