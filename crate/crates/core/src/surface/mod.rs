//! Translation surfaces glued from planar polygons.
//!
//! A surface is a list of vertex loops plus a perfect matching of edges;
//! paired edges must be parallel, isometric and oppositely oriented so
//! the identification is a translation. Construction computes vertex
//! cycles, cone angles, genus and connectivity. Saddle connections are
//! enumerated by developing the triangulated surface across edges,
//! pruning once a branch leaves the search disk.

mod saddle;
mod tri;

pub use saddle::{
    is_best_approximation, saddle_connections, saddle_connections_tri, systole_sq, BundleId,
    SaddleConnection,
};
pub use tri::FlatTriangulation;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::num::{PlanarVec, Scalar};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SurfaceError {
    #[error("polygon {0} has fewer than three vertices")]
    DegeneratePolygon(usize),
    #[error("polygon {0} is not positively oriented")]
    NotCounterClockwise(usize),
    #[error("gluing is not a perfect matching of edges")]
    BadMatching,
    #[error("edges ({0},{1}) and ({2},{3}) are not parallel opposite isometric")]
    EdgeMismatch(usize, usize, usize, usize),
    #[error("glued complex is disconnected")]
    Disconnected,
    #[error("no saddle connection within the bound")]
    BoundExceeded,
    #[error("connection not in the enumerated set")]
    UnknownConnection,
    #[error("numeric error: {0}")]
    Num(#[from] crate::num::NumError),
}

/// Edge `e` of polygon `p`: from vertex `e` to vertex `e + 1 (mod len)`.
pub type EdgeRef = (usize, usize);

/// Translation surface presented by polygons and a gluing.
#[derive(Clone)]
pub struct TranslationSurface {
    /// Vertex loops, positively oriented.
    pub polygons: Vec<Vec<PlanarVec>>,
    /// Perfect matching of edges.
    pub gluing: Vec<(EdgeRef, EdgeRef)>,
}

// JSON: {"field":{"d":n},"polygons":[[[x,y],...],...],"gluing":[[p,e,p',e'],...]}
// with d = 1 for purely rational coordinates.
#[derive(Serialize, Deserialize)]
struct SurfaceJson {
    field: FieldTag,
    polygons: Vec<Vec<(Scalar, Scalar)>>,
    gluing: Vec<(usize, usize, usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct FieldTag {
    d: u64,
}

impl TranslationSurface {
    /// The quadratic field tag of the coordinates: `d` of Q(sqrt d), or
    /// 1 when everything is rational.
    pub fn field_tag(&self) -> Option<u64> {
        let mut tag = 1u64;
        for poly in &self.polygons {
            for v in poly {
                for s in [&v.x, &v.y] {
                    if let Some(d) = s.field() {
                        if tag != 1 && tag != d {
                            return None;
                        }
                        tag = d;
                    }
                }
            }
        }
        Some(tag)
    }
}

impl Serialize for TranslationSurface {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let d = self
            .field_tag()
            .ok_or_else(|| serde::ser::Error::custom("mixed quadratic fields"))?;
        SurfaceJson {
            field: FieldTag { d },
            polygons: self
                .polygons
                .iter()
                .map(|poly| poly.iter().map(|v| (v.x.clone(), v.y.clone())).collect())
                .collect(),
            gluing: self
                .gluing
                .iter()
                .map(|&((p, e), (p2, e2))| (p, e, p2, e2))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TranslationSurface {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = SurfaceJson::deserialize(d)?;
        let surface = TranslationSurface {
            polygons: raw
                .polygons
                .into_iter()
                .map(|poly| {
                    poly.into_iter()
                        .map(|(x, y)| PlanarVec::new(x, y))
                        .collect()
                })
                .collect(),
            gluing: raw
                .gluing
                .into_iter()
                .map(|(p, e, p2, e2)| ((p, e), (p2, e2)))
                .collect(),
        };
        let tag = surface
            .field_tag()
            .ok_or_else(|| D::Error::custom("mixed quadratic fields"))?;
        if raw.field.d != tag && !(tag == 1) {
            return Err(D::Error::custom(format!(
                "field tag {} does not match coordinates in Q(sqrt {tag})",
                raw.field.d
            )));
        }
        Ok(surface)
    }
}

/// Cone point data of a built surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeData {
    /// One entry per singularity: the corners `(polygon, vertex)` in
    /// counterclockwise order around the point, and the angle multiple
    /// `k` (cone angle `2*pi*k`).
    pub singularities: Vec<(Vec<(usize, usize)>, usize)>,
    pub genus: usize,
}

impl ConeData {
    pub fn total_cone_multiple(&self) -> usize {
        self.singularities.iter().map(|(_, k)| *k).sum()
    }
}

impl TranslationSurface {
    pub fn edge_vector(&self, (p, e): EdgeRef) -> PlanarVec {
        let poly = &self.polygons[p];
        let n = poly.len();
        &poly[(e + 1) % n] - &poly[e]
    }

    /// Signed area of one polygon (shoelace).
    fn polygon_area_twice(&self, p: usize) -> Scalar {
        let poly = &self.polygons[p];
        let n = poly.len();
        let mut acc = Scalar::zero();
        for i in 0..n {
            acc = acc + poly[i].cross(&poly[(i + 1) % n]);
        }
        acc
    }

    /// Exact total area.
    pub fn area(&self) -> Scalar {
        let twice = (0..self.polygons.len())
            .fold(Scalar::zero(), |acc, p| acc + self.polygon_area_twice(p));
        twice / Scalar::from_int(2)
    }

    /// Validates the presentation and computes cone data and genus.
    pub fn build(&self) -> Result<ConeData, SurfaceError> {
        let mut edge_count = 0usize;
        for (p, poly) in self.polygons.iter().enumerate() {
            if poly.len() < 3 {
                return Err(SurfaceError::DegeneratePolygon(p));
            }
            if self.polygon_area_twice(p).signum() <= 0 {
                return Err(SurfaceError::NotCounterClockwise(p));
            }
            edge_count += poly.len();
        }
        // Perfect matching with translation-compatible pairs.
        let mut seen = BTreeSet::new();
        for &(a, b) in &self.gluing {
            for e in [a, b] {
                if e.0 >= self.polygons.len() || e.1 >= self.polygons[e.0].len() {
                    return Err(SurfaceError::BadMatching);
                }
                if !seen.insert(e) {
                    return Err(SurfaceError::BadMatching);
                }
            }
            let va = self.edge_vector(a);
            let vb = self.edge_vector(b);
            if !(va + vb).is_zero() {
                return Err(SurfaceError::EdgeMismatch(a.0, a.1, b.0, b.1));
            }
        }
        if seen.len() != edge_count {
            return Err(SurfaceError::BadMatching);
        }

        let cone = self.vertex_cycles()?;
        // Connectivity across gluings.
        let n = self.polygons.len();
        let mut visited = vec![false; n];
        let mut stack = vec![0usize];
        visited[0] = true;
        while let Some(p) = stack.pop() {
            for &(a, b) in &self.gluing {
                for (x, y) in [(a, b), (b, a)] {
                    if x.0 == p && !visited[y.0] {
                        visited[y.0] = true;
                        stack.push(y.0);
                    }
                }
            }
        }
        if visited.iter().any(|v| !v) {
            return Err(SurfaceError::Disconnected);
        }
        Ok(cone)
    }

    fn twin(&self, e: EdgeRef) -> Option<EdgeRef> {
        for &(a, b) in &self.gluing {
            if a == e {
                return Some(b);
            }
            if b == e {
                return Some(a);
            }
        }
        None
    }

    /// Corners grouped into vertex cycles with exact cone multiples.
    fn vertex_cycles(&self) -> Result<ConeData, SurfaceError> {
        let mut remaining: BTreeSet<(usize, usize)> = self
            .polygons
            .iter()
            .enumerate()
            .flat_map(|(p, poly)| (0..poly.len()).map(move |v| (p, v)))
            .collect();
        let mut singularities = Vec::new();
        while let Some(&start) = remaining.iter().next() {
            let mut cycle = Vec::new();
            let mut cur = start;
            loop {
                remaining.remove(&cur);
                cycle.push(cur);
                // Rotate ccw past the incoming edge of this corner.
                let (p, v) = cur;
                let n = self.polygons[p].len();
                let in_edge = (p, (v + n - 1) % n);
                let next = self.twin(in_edge).ok_or(SurfaceError::BadMatching)?;
                if next == start {
                    break;
                }
                cur = next;
            }
            let k = self.cycle_cone_multiple(&cycle)?;
            singularities.push((cycle, k));
        }
        // genus from sum k_i = 2g - 2 + n
        let total: usize = singularities.iter().map(|(_, k)| *k).sum();
        let n = singularities.len();
        let two_g = total + 2 - n;
        debug_assert!(
            two_g.is_multiple_of(2),
            "cone multiples force an even value"
        );
        Ok(ConeData {
            singularities,
            genus: two_g / 2,
        })
    }

    /// Counts full turns around a vertex cycle: the number of times the
    /// swept direction crosses the horizontal-right ray.
    fn cycle_cone_multiple(&self, cycle: &[(usize, usize)]) -> Result<usize, SurfaceError> {
        let plus_x = PlanarVec::new(Scalar::one(), Scalar::zero());
        let mut crossings = 0usize;
        for &(p, v) in cycle {
            let poly = &self.polygons[p];
            let n = poly.len();
            let d_out = &poly[(v + 1) % n] - &poly[v];
            let d_in = &poly[(v + n - 1) % n] - &poly[v];
            if sweep_contains(&d_out, &d_in, &plus_x) {
                crossings += 1;
            }
        }
        Ok(crossings)
    }

    /// Rescales `(x, y) -> (f x, y / f)`, the geodesic flow at `e^t = f`.
    pub fn teich_flow(&self, factor: &Scalar) -> TranslationSurface {
        TranslationSurface {
            polygons: self
                .polygons
                .iter()
                .map(|poly| poly.iter().map(|v| v.teich_scale(factor)).collect())
                .collect(),
            gluing: self.gluing.clone(),
        }
    }

    /// Flow for an arbitrary real time: coordinates degrade to certified
    /// float enclosures (area stays within the tracked bounds). Exact
    /// inputs should prefer [`TranslationSurface::teich_flow`] with the
    /// factor `e^t` given exactly.
    pub fn teich_flow_time(&self, t: f64) -> TranslationSurface {
        let factor = Scalar::Approx(crate::num::Enclosure::exact(t.exp()));
        self.teich_flow(&factor)
    }

    /// Applies a linear map with rows `(a b; c d)` to every vertex.
    pub fn linear_map(&self, a: &Scalar, b: &Scalar, c: &Scalar, d: &Scalar) -> TranslationSurface {
        TranslationSurface {
            polygons: self
                .polygons
                .iter()
                .map(|poly| {
                    poly.iter()
                        .map(|v| {
                            PlanarVec::new(&(a * &v.x) + &(b * &v.y), &(c * &v.x) + &(d * &v.y))
                        })
                        .collect()
                })
                .collect(),
            gluing: self.gluing.clone(),
        }
    }
}

/// True when the counterclockwise sweep from `a` to `b` (half-open at
/// `b`, angle in `(0, 2*pi)`) contains direction `x`.
pub(crate) fn sweep_contains(a: &PlanarVec, b: &PlanarVec, x: &PlanarVec) -> bool {
    let same_ray = |u: &PlanarVec, v: &PlanarVec| u.cross(v).is_zero() && u.dot(v).signum() > 0;
    if same_ray(a, x) {
        return true; // inclusive at the start
    }
    if same_ray(b, x) {
        return false; // exclusive at the end
    }
    let cab = a.cross(b).signum();
    let cax = a.cross(x).signum();
    let cxb = x.cross(b).signum();
    match cab {
        1 => cax > 0 && cxb > 0,
        -1 => !(cax < 0 && cxb < 0),
        _ => {
            if a.dot(b).signum() < 0 {
                // straight angle: upper side of a
                cax > 0
            } else {
                // full turn: everything except the ray of b handled above
                true
            }
        }
    }
}

impl fmt::Debug for TranslationSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "surface with {} polygons:", self.polygons.len())?;
        for (i, poly) in self.polygons.iter().enumerate() {
            write!(f, "  P{i}:")?;
            for v in poly {
                write!(f, " {v}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// The unit square torus with opposite sides identified.
pub fn square_torus() -> TranslationSurface {
    let s = |n: i64| Scalar::from_int(n);
    TranslationSurface {
        polygons: vec![vec![
            PlanarVec::new(s(0), s(0)),
            PlanarVec::new(s(1), s(0)),
            PlanarVec::new(s(1), s(1)),
            PlanarVec::new(s(0), s(1)),
        ]],
        gluing: vec![((0, 0), (0, 2)), ((0, 1), (0, 3))],
    }
}

/// Regular octagon of unit side, axis-aligned, opposite sides identified;
/// all coordinates in Q(sqrt 2).
pub fn regular_octagon() -> TranslationSurface {
    let zero = Scalar::zero();
    let one = Scalar::one();
    let s = Scalar::sqrt_int(2).unwrap() / Scalar::from_int(2); // sqrt2/2
    let v = |x: Scalar, y: Scalar| PlanarVec::new(x, y);
    let pts = vec![
        v(zero.clone(), zero.clone()),
        v(one.clone(), zero.clone()),
        v(one.clone() + s.clone(), s.clone()),
        v(one.clone() + s.clone(), one.clone() + s.clone()),
        v(one.clone(), one.clone() + s.clone() + s.clone()),
        v(zero.clone(), one.clone() + s.clone() + s.clone()),
        v(-s.clone(), one.clone() + s.clone()),
        v(-s.clone(), s.clone()),
    ];
    TranslationSurface {
        polygons: vec![pts],
        gluing: vec![
            ((0, 0), (0, 4)),
            ((0, 1), (0, 5)),
            ((0, 2), (0, 6)),
            ((0, 3), (0, 7)),
        ],
    }
}
