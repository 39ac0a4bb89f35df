//! Castle-polygon decompositions: diagonal changes in every stratum.
//!
//! A k-set of castle polygons is k wedges plus a forest word — a fully
//! parenthesized partition of the 2k leaf labels into k full binary
//! trees. Each tree spells the upper boundary of one polygon: an `r`
//! leaf is an ascending copy of that wedge's right side, an `l` leaf a
//! descending copy of its left side, and every internal node is a stack
//! triangle whose apex must clear both span endpoints.

mod balance;
mod from_surface;
mod moves;
mod word;

pub use balance::{
    balance, balance_seeded, detect_closed_orbit, first_return, is_balanced, section_normalize,
    teich_flow_castle, CastleReturn, ClosedOrbit,
};
pub use from_surface::from_surface;
pub use moves::{allowed, allowed_backward, backward_move, forward_move, move_matrix, CastleMove};
pub use word::{ForestWord, Tree};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hyp::{Quadrangulation, Side, Wedge};
use crate::num::{PlanarVec, Scalar};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CastleError {
    #[error("cannot parse forest word: {0}")]
    Parse(String),
    #[error("label {0} missing or repeated")]
    Labels(String),
    #[error("wedge {0}: sign pattern violated")]
    WedgeSigns(usize),
    #[error("train-track relation fails at polygon {0}")]
    TrainTrack(usize),
    #[error("triangle at polygon {0} is neither base nor stack")]
    NotStack(usize),
    #[error("leaf {0} hangs on the wrong side of its node")]
    LeafSide(String),
    #[error("index subset {0:?} is closed: the set is reducible")]
    Reducible(Vec<usize>),
    #[error("polygon {0} is a triangle: no forward move there")]
    TriangleOnly(usize),
    #[error("no backward move at polygon {0}")]
    BackwardBlocked(usize),
    #[error("vertical forward diagonal at polygon {0}")]
    VerticalDiagonal(usize),
    #[error("budget of {0} steps exceeded")]
    Budget(usize),
    #[error("not balanced or no unit-width polygon: not on the section")]
    NotOnSection,
    #[error("horizontal or vertical edge: Keane condition fails")]
    KeaneViolation,
    #[error("surface error: {0}")]
    Surface(#[from] crate::surface::SurfaceError),
    #[error("numeric error: {0}")]
    Num(#[from] crate::num::NumError),
}

/// A k-set of castle polygons.
#[derive(Clone, PartialEq, Eq)]
pub struct CastleSet {
    pub forest: ForestWord,
    pub wedges: Vec<Wedge>,
}

impl CastleSet {
    pub fn k(&self) -> usize {
        self.wedges.len()
    }

    pub fn new(forest: ForestWord, wedges: Vec<Wedge>) -> Result<Self, CastleError> {
        let set = CastleSet { forest, wedges };
        set.validate()?;
        Ok(set)
    }

    /// Signed chord of a subtree: `r` leaves ascend by the right wedge
    /// vector, `l` leaves descend by minus the left one.
    pub fn chord(&self, tree: &Tree) -> PlanarVec {
        match tree {
            Tree::Leaf(Side::Right, j) => self.wedges[*j].r.clone(),
            Tree::Leaf(Side::Left, j) => -&self.wedges[*j].l,
            Tree::Node(a, b) => &self.chord(a) + &self.chord(b),
        }
    }

    /// Full validation: labels, leaf sides, wedge signs, train-tracks,
    /// stack-triangle geometry, triangle counts and irreducibility.
    pub fn validate(&self) -> Result<(), CastleError> {
        let k = self.k();
        self.forest.check_labels(k)?;
        for (i, w) in self.wedges.iter().enumerate() {
            if !w.check_signs() {
                return Err(CastleError::WedgeSigns(i));
            }
        }
        let mut stack_triangles = 0usize;
        for i in 0..k {
            let tree = &self.forest.trees[i];
            // train-track: the chord closes from the left vertex to the
            // right vertex
            let expect = &self.wedges[i].r - &self.wedges[i].l;
            if self.chord(tree) != expect {
                return Err(CastleError::TrainTrack(i));
            }
            stack_triangles += self.validate_tree(tree, &self.wedges[i].l, i)?;
        }
        debug_assert_eq!(stack_triangles, k, "one stack triangle per node");
        // irreducibility: no proper closed index subset
        for start in 0..k {
            let mut closed = vec![false; k];
            closed[start] = true;
            let mut frontier = vec![start];
            while let Some(i) = frontier.pop() {
                for (_, j) in self.forest.trees[i].leaves() {
                    if !closed[j] {
                        closed[j] = true;
                        frontier.push(j);
                    }
                }
            }
            if closed.iter().any(|&c| !c) {
                let subset: Vec<usize> = (0..k).filter(|&i| closed[i]).collect();
                return Err(CastleError::Reducible(subset));
            }
        }
        Ok(())
    }

    /// Walks a tree verifying each node is a genuine stack triangle;
    /// returns the node count.
    fn validate_tree(
        &self,
        tree: &Tree,
        start: &PlanarVec,
        polygon: usize,
    ) -> Result<usize, CastleError> {
        match tree {
            Tree::Leaf(side, j) => {
                // leaf side convention is structural except at the root
                let _ = (side, j);
                Ok(0)
            }
            Tree::Node(a, b) => {
                if let Tree::Leaf(Side::Left, j) = **a {
                    return Err(CastleError::LeafSide(format!("l{}", j + 1)));
                }
                if let Tree::Leaf(Side::Right, j) = **b {
                    return Err(CastleError::LeafSide(format!("r{}", j + 1)));
                }
                let apex = start + &self.chord(a);
                let end = &apex + &self.chord(b);
                let up_left = apex.y.try_cmp(&start.y)? == std::cmp::Ordering::Greater;
                let up_right = apex.y.try_cmp(&end.y)? == std::cmp::Ordering::Greater;
                let x_left = apex.x.try_cmp(&start.x)? == std::cmp::Ordering::Greater;
                let x_right = end.x.try_cmp(&apex.x)? == std::cmp::Ordering::Greater;
                if !(up_left && up_right && x_left && x_right) {
                    return Err(CastleError::NotStack(polygon));
                }
                Ok(1 + self.validate_tree(a, start, polygon)?
                    + self.validate_tree(b, &apex, polygon)?)
            }
        }
    }

    /// Forward diagonal of a non-triangle polygon: the vector from the
    /// lowest vertex to the root junction.
    pub fn forward_diagonal(&self, i: usize) -> Result<PlanarVec, CastleError> {
        match &self.forest.trees[i] {
            Tree::Leaf(..) => Err(CastleError::TriangleOnly(i)),
            Tree::Node(a, _) => Ok(&self.wedges[i].l + &self.chord(a)),
        }
    }

    /// Width interval data `(I, I')` of one polygon.
    pub fn width_intervals(&self, i: usize) -> Result<(Scalar, Scalar), CastleError> {
        let w = self.width(i);
        match &self.forest.trees[i] {
            Tree::Leaf(..) => Ok((w.clone(), w)),
            Tree::Node(..) => {
                let d = self.forward_diagonal(i)?;
                let s = d.x.try_signum()?;
                if s == 0 {
                    return Err(CastleError::VerticalDiagonal(i));
                }
                let after = if s > 0 {
                    &d.x - &self.wedges[i].l.x
                } else {
                    &self.wedges[i].r.x - &d.x
                };
                Ok((w, after))
            }
        }
    }

    pub fn width(&self, i: usize) -> Scalar {
        &self.wedges[i].r.x - &self.wedges[i].l.x
    }

    /// Exact total area: shoelace per polygon across the fan from the
    /// lowest vertex.
    pub fn area(&self) -> Scalar {
        let mut total = Scalar::zero();
        for i in 0..self.k() {
            // boundary: 0 -> w_r, up the chords reversed, back down w_l
            let mut vertices = vec![PlanarVec::zero(), self.wedges[i].r.clone()];
            let mut upper = Vec::new();
            let mut pos = self.wedges[i].l.clone();
            self.upper_vertices(&self.forest.trees[i], &mut pos, &mut upper);
            // upper lists interior vertices left to right; walk them
            // right to left above the base
            for v in upper.into_iter().rev() {
                vertices.push(v);
            }
            vertices.push(self.wedges[i].l.clone());
            let n = vertices.len();
            for a in 0..n {
                let b = (a + 1) % n;
                total = total + vertices[a].cross(&vertices[b]);
            }
        }
        total / Scalar::from_int(2)
    }

    fn upper_vertices(&self, tree: &Tree, pos: &mut PlanarVec, out: &mut Vec<PlanarVec>) {
        if let Tree::Node(a, b) = tree {
            self.upper_vertices(a, pos, out);
            let junction = &*pos + &self.chord(a);
            out.push(junction.clone());
            let mut right_pos = junction;
            self.upper_vertices(b, &mut right_pos, out);
        }
    }

    /// Scales widths by `f` and heights by `1/f`.
    pub fn teich_flow(&self, factor: &Scalar) -> CastleSet {
        CastleSet {
            forest: self.forest.clone(),
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

    /// Relabels polygon `i` to `sigma(i)` (wedges, tree order, labels).
    pub fn relabel(&self, sigma: &crate::hyp::Perm) -> CastleSet {
        let k = self.k();
        let mut trees: Vec<Option<Tree>> = vec![None; k];
        for i in 0..k {
            trees[sigma.apply(i)] = Some(self.forest.trees[i].relabel(sigma));
        }
        let mut wedges: Vec<Option<Wedge>> = vec![None; k];
        for i in 0..k {
            wedges[sigma.apply(i)] = Some(self.wedges[i].clone());
        }
        CastleSet {
            forest: ForestWord {
                trees: trees.into_iter().map(Option::unwrap).collect(),
            },
            wedges: wedges.into_iter().map(Option::unwrap).collect(),
        }
    }
}

/// Every quadrangulation is a 2-leaf castle set.
pub fn from_quadrangulation(q: &Quadrangulation) -> CastleSet {
    let trees = (0..q.k())
        .map(|i| {
            Tree::Node(
                Box::new(Tree::Leaf(Side::Right, q.pi_l.apply(i))),
                Box::new(Tree::Leaf(Side::Left, q.pi_r.apply(i))),
            )
        })
        .collect();
    CastleSet {
        forest: ForestWord { trees },
        wedges: q.wedges.clone(),
    }
}

/// The worked 3-set over Q(sqrt 2): unit widths, first return log(2)/2.
pub fn sqrt2_example() -> CastleSet {
    let s = Scalar::sqrt_int(2).unwrap() / Scalar::from_int(2);
    let one = Scalar::one();
    let wl = PlanarVec::new(-&s, &one - &s);
    let wr = PlanarVec::new(&one - &s, s.clone());
    let wedges = vec![
        Wedge {
            l: wl.clone(),
            r: wr.clone(),
        },
        Wedge {
            l: wl.clone(),
            r: wr.clone(),
        },
        Wedge { l: wl, r: wr },
    ];
    // (r1 l2)(r3 l1)(r2 l3)
    let forest = ForestWord::parse("(r1 l2)(r3 l1)(r2 l3)").unwrap();
    CastleSet::new(forest, wedges).expect("worked example is valid")
}

/// The H(0,0,0) example as a castle set; moves are possible here even
/// though no staircase move is.
pub fn h000_castle_example() -> CastleSet {
    let q = crate::hyp::h000_example();
    let mut set = from_quadrangulation(&q);
    // quadrangulation book-keeping writes (r_{pi_l(i)} l_{pi_r(i)});
    // the worked forest word lists the same trees
    set.forest = ForestWord::parse("(r2 l2)(r3 l3)(r1 l1)").unwrap();
    set.validate().expect("example is valid");
    set
}

impl fmt::Debug for CastleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.forest)?;
        for (i, w) in self.wedges.iter().enumerate() {
            writeln!(f, "  w{} = l {} r {}", i + 1, w.l, w.r)?;
        }
        Ok(())
    }
}

// JSON: {"k":3,"forest":"(l2)(r3(r1 l3))(r2 l1)","wedges":[...]}
#[derive(Serialize, Deserialize)]
struct CastleJson {
    k: usize,
    forest: String,
    wedges: Vec<WedgeJson>,
}

#[derive(Serialize, Deserialize)]
struct WedgeJson {
    l: (Scalar, Scalar),
    r: (Scalar, Scalar),
}

impl Serialize for CastleSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CastleJson {
            k: self.k(),
            forest: self.forest.to_string(),
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

impl<'de> Deserialize<'de> for CastleSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = CastleJson::deserialize(d)?;
        let forest = ForestWord::parse(&raw.forest).map_err(D::Error::custom)?;
        if raw.wedges.len() != raw.k || forest.trees.len() != raw.k {
            return Err(D::Error::custom("k does not match the data"));
        }
        let wedges = raw
            .wedges
            .into_iter()
            .map(|w| Wedge {
                l: PlanarVec::new(w.l.0, w.l.1),
                r: PlanarVec::new(w.r.0, w.r.1),
            })
            .collect();
        CastleSet::new(forest, wedges).map_err(D::Error::custom)
    }
}
