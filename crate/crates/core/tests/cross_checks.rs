//! Checks that tie the modules together: the greedy staircase run
//! against the surface-level best-approximation oracle, staircase moves
//! against castle moves on the same data, and presentation independence
//! of the saddle-connection search.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use flatrack::castle;
use flatrack::hyp::{self, Quadrangulation};
use flatrack::num::{PlanarVec, Rational, Scalar};
use flatrack::surface::{self, regular_octagon, BundleId, SaddleConnection, TranslationSurface};

fn rat(n: i64, d: i64) -> Scalar {
    Scalar::Rat(Rational::new(n, d))
}

fn sqrt(n: i64) -> Scalar {
    Scalar::sqrt_int(n).unwrap()
}

fn tilt(x: &TranslationSurface) -> TranslationSurface {
    x.linear_map(&rat(16, 15), &rat(1, 3), &rat(1, 5), &rat(1, 1))
}

/// Greedy staircase run on a quadrangulation, checked against the
/// brute-force best approximations of the glued surface, per bundle and
/// side, up to the run's height ceiling.
fn greedy_matches_surface_oracle(q: &Quadrangulation, steps: usize) {
    let surface = q.to_surface();
    let k = q.k();
    // collect the wedge sides appearing along the run, per (index, side)
    let mut lefts: Vec<Vec<PlanarVec>> = vec![Vec::new(); k];
    let mut rights: Vec<Vec<PlanarVec>> = vec![Vec::new(); k];
    for i in 0..k {
        lefts[i].push(q.wedges[i].l.clone());
        rights[i].push(q.wedges[i].r.clone());
    }
    let trace = hyp::run_algorithm(q, hyp::Policy::Greedy, steps).unwrap();
    for step in &trace {
        for i in 0..k {
            lefts[i].push(step.after.wedges[i].l.clone());
            rights[i].push(step.after.wedges[i].r.clone());
        }
    }
    let ceiling = |v: &Vec<PlanarVec>| {
        v.iter()
            .map(|w| w.y.clone())
            .max_by(|a, b| a.cmp_exact(b))
            .unwrap()
    };
    // enumeration bound: long enough to dominate every collected side
    let mut bound = Scalar::from_int(2);
    for v in lefts.iter().chain(&rights) {
        for w in v {
            let len_sq = w.norm_sq();
            while bound.square().cmp_exact(&len_sq) == Ordering::Less {
                bound = bound * Scalar::from_int(2);
            }
        }
    }
    let connections = surface::saddle_connections(&surface, &bound).unwrap();
    // identify each wedge's bundle: the unique one containing both of
    // its side vectors (a vector alone may recur in several bundles)
    for i in 0..k {
        let bundles_of = |vec: &PlanarVec| -> BTreeSet<BundleId> {
            connections
                .iter()
                .filter(|c| c.holonomy == *vec)
                .map(|c| c.bundle)
                .collect()
        };
        let shared: Vec<BundleId> = bundles_of(&q.wedges[i].l)
            .intersection(&bundles_of(&q.wedges[i].r))
            .copied()
            .collect();
        assert_eq!(shared.len(), 1, "wedge sides share exactly one bundle");
        let bundle = shared[0];
        for (sides, sign) in [(&lefts[i], -1i8), (&rights[i], 1i8)] {
            let ceil = ceiling(sides);
            let floor = sides
                .iter()
                .map(|w| w.y.clone())
                .min_by(|a, b| a.cmp_exact(b))
                .unwrap();
            let oracle: BTreeSet<String> = connections
                .iter()
                .filter(|c| {
                    c.bundle == bundle
                        && c.holonomy.x.signum() == sign
                        && c.holonomy.y.cmp_exact(&ceil) != Ordering::Greater
                        && c.holonomy.y.cmp_exact(&floor) != Ordering::Less
                        && surface::is_best_approximation(&connections, c).unwrap()
                })
                .map(|c| format!("{}", c.holonomy))
                .collect();
            let run: BTreeSet<String> = sides.iter().map(|w| format!("{w}")).collect();
            assert_eq!(run, oracle, "bundle {bundle:?} sign {sign} disagrees");
        }
    }
}

#[test]
fn golden_torus_greedy_matches_surface_oracle() {
    greedy_matches_surface_oracle(&hyp::golden_torus_example(), 6);
}

/// Quadrangulation of the sheared regular octagon: the veering
/// decomposition is two diagonal changes away from a quadrangulation
/// (all castle sets of one surface are connected by moves).
fn octagon_quadrangulation() -> Quadrangulation {
    let sheared = tilt(&regular_octagon());
    let set = castle::from_surface(&sheared).unwrap();
    let (set, _) = castle::forward_move(&set, 1).unwrap();
    let (set, _) = castle::backward_move(&set, 2).unwrap();
    let q = castle_to_quadrangulation(&set).expect("two moves reach a quadrangulation");
    assert_eq!(q.area(), sheared.area());
    q
}

fn castle_to_quadrangulation(set: &castle::CastleSet) -> Option<Quadrangulation> {
    use castle::Tree;
    use flatrack::hyp::{Perm, Side};
    let k = set.k();
    let mut pl = vec![0usize; k];
    let mut pr = vec![0usize; k];
    for i in 0..k {
        match &set.forest.trees[i] {
            Tree::Node(a, b) => match (&**a, &**b) {
                (Tree::Leaf(Side::Right, x), Tree::Leaf(Side::Left, y)) => {
                    // tree (r_x l_y): the top-left side is wedge x's right
                    // part, so pi_l(i) = x and pi_r(i) = y
                    pl[i] = *x;
                    pr[i] = *y;
                }
                _ => return None,
            },
            Tree::Leaf(..) => return None,
        }
    }
    Quadrangulation::new(
        Perm::from_images(pl).ok()?,
        Perm::from_images(pr).ok()?,
        set.wedges.clone(),
    )
    .ok()
}

#[test]
fn octagon_greedy_matches_surface_oracle() {
    let q = octagon_quadrangulation();
    assert_eq!(q.k(), 3);
    greedy_matches_surface_oracle(&q, 4);
}

#[test]
fn staircase_and_castle_moves_agree_on_quadrangulations() {
    // simultaneous staircase moves and per-polygon castle moves generate
    // the same wedge sets on the golden wedge and the genus-two datum
    for q in [hyp::golden_torus_example(), generic_genus_two()] {
        let mut castle_set = castle::from_quadrangulation(&q);
        let mut quad = q.clone();
        for _ in 0..6 {
            let staircases = quad.well_slanted_staircases().unwrap();
            if staircases.is_empty() {
                break;
            }
            for c in &staircases {
                quad = hyp::staircase_move(&quad, c).unwrap();
            }
            // castle: move every polygon that participates
            for c in &staircases {
                for &i in &c.support {
                    let (next, _) = castle::forward_move(&castle_set, i).unwrap();
                    castle_set = next;
                }
            }
            let quad_wedges: BTreeSet<String> = quad
                .wedges
                .iter()
                .flat_map(|w| [format!("{}", w.l), format!("{}", w.r)])
                .collect();
            let castle_wedges: BTreeSet<String> = castle_set
                .wedges
                .iter()
                .flat_map(|w| [format!("{}", w.l), format!("{}", w.r)])
                .collect();
            assert_eq!(quad_wedges, castle_wedges);
        }
    }
}

fn generic_genus_two() -> Quadrangulation {
    let s = sqrt(2) / Scalar::from_int(2);
    let int = Scalar::from_int;
    let frac = |n: i64, d: i64| rat(n, d);
    let lam = vec![
        (-(int(3) + s.clone()), int(4) - frac(3, 10) * s.clone()),
        (
            -(int(1) + frac(1, 3) * s.clone()),
            int(2) + frac(1, 5) * s.clone(),
        ),
        (
            -(int(5) + frac(1, 2) * s.clone()),
            int(2) + frac(1, 5) * s.clone(),
        ),
    ];
    let tau = vec![
        (
            int(2) + frac(1, 7) * s.clone(),
            int(3) + frac(2, 63) * s.clone(),
        ),
        (int(2), int(4)),
        (int(3) + frac(1, 9) * s.clone(), int(4)),
    ];
    hyp::suspension(
        &hyp::Perm::from_cycles(3, &[&[0, 1, 2]]),
        &hyp::Perm::from_cycles(3, &[&[0, 2]]),
        &lam,
        &tau,
    )
    .unwrap()
}

#[test]
fn saddle_connections_are_presentation_invariant() {
    // the involution image (all polygons point-reflected) is the same
    // surface; holonomy sets must agree
    let x = tilt(&regular_octagon());
    let reflected = x.linear_map(&rat(-1, 1), &Scalar::zero(), &Scalar::zero(), &rat(-1, 1));
    let bound = rat(3, 2);
    let holos = |s: &TranslationSurface| -> BTreeSet<String> {
        surface::saddle_connections(s, &bound)
            .unwrap()
            .iter()
            .map(|c: &SaddleConnection| format!("{}", c.holonomy))
            .collect()
    };
    assert_eq!(holos(&x), holos(&reflected));
}

#[test]
fn area_invariant_under_representation_change() {
    // same torus, one-square vs two-triangle presentation
    let square = surface::square_torus();
    let tri = TranslationSurface {
        polygons: vec![
            vec![
                PlanarVec::new(rat(0, 1), rat(0, 1)),
                PlanarVec::new(rat(1, 1), rat(0, 1)),
                PlanarVec::new(rat(1, 1), rat(1, 1)),
            ],
            vec![
                PlanarVec::new(rat(0, 1), rat(0, 1)),
                PlanarVec::new(rat(1, 1), rat(1, 1)),
                PlanarVec::new(rat(0, 1), rat(1, 1)),
            ],
        ],
        gluing: vec![
            ((0, 0), (1, 1)), // bottom to top
            ((0, 1), (1, 2)), // right to left
            ((0, 2), (1, 0)), // shared diagonal
        ],
    };
    let cone = tri.build().unwrap();
    assert_eq!(cone.genus, 1);
    assert_eq!(square.area(), tri.area());
    // and the connection sets agree
    let bound = rat(2, 1);
    let a: BTreeSet<String> = surface::saddle_connections(&square, &bound)
        .unwrap()
        .iter()
        .map(|c| format!("{}", c.holonomy))
        .collect();
    let b: BTreeSet<String> = surface::saddle_connections(&tri, &bound)
        .unwrap()
        .iter()
        .map(|c| format!("{}", c.holonomy))
        .collect();
    assert_eq!(a, b);
}

#[test]
fn float_flow_tracks_area_with_bounds() {
    let x = surface::square_torus().teich_flow_time(0.37);
    let area = x.area();
    match area {
        Scalar::Approx(e) => assert!(e.contains(1.0), "area enclosure holds 1: {e}"),
        other => panic!("expected an enclosure, got {other}"),
    }
}

#[test]
fn hitting_time_quadratic_example() {
    let g = sqrt(6) - Scalar::from_int(2);
    let t = flatrack::iet::IetDatum::new(
        flatrack::iet::PermPair::parse("AB/BA").unwrap(),
        vec![Scalar::one() - g.clone(), g],
    )
    .unwrap();
    let (arg, enc) = t.hitting_time().unwrap();
    assert_eq!(arg, Scalar::from_int(3) - sqrt(6));
    assert!((enc.value + (3.0 - 6f64.sqrt()).ln()).abs() < 1e-12);
}

#[test]
fn triple_cover_loop_is_found_and_certified() {
    // no loop word is assumed for dilatation 3 + 2 sqrt 2: search
    // length <= 5 and certify whatever realizes it
    let report = flatrack::pa::enumerate_pa(3, 5, None).unwrap();
    let target = Scalar::from_int(3) + Scalar::from_int(2) * sqrt(2);
    let hit = report
        .records
        .iter()
        .find(|(_, rec, _)| rec.dilatation_exact.as_ref() == Some(&target))
        .expect("triple-cover class appears by length 5");
    assert_eq!(hit.1.closure, flatrack::pa::ClosureCheck::Exact);
    assert_eq!(hit.1.sigma.order(), 3);
    // smallest dilatation in the component appears first
    assert!(report.records[0].1.dilatation.value < 1.7221);
    assert!(report.records[0].1.dilatation.value > 1.7220);
}

#[test]
fn worker_env_var_does_not_change_results() {
    let baseline = flatrack::pa::enumerate_pa(1, 3, None).unwrap();
    std::env::set_var("FLATRACK_THREADS", "4");
    let sharded = flatrack::pa::enumerate_pa(1, 3, None).unwrap();
    std::env::remove_var("FLATRACK_THREADS");
    assert_eq!(baseline.records.len(), sharded.records.len());
    for (a, b) in baseline.records.iter().zip(&sharded.records) {
        assert_eq!(a.0, b.0);
        assert_eq!(a.1.dilatation_exact, b.1.dilatation_exact);
    }
}
