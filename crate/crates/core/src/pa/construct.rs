//! Loop matrices, Perron–Frobenius data and the closure certificate.

use super::unlabeled::LiftedLoop;
use super::{relabeling_matrix, PaError};
use crate::hyp::{staircase_matrix, staircase_move, suspension, DcGraphHyp, Perm, Quadrangulation};
use crate::num::{Enclosure, IntMatrix, Scalar};

/// Path matrix `A_gamma = A_{n-1} ... A_1 A_0` (first move rightmost).
pub fn loop_matrix(graph: &DcGraphHyp, lifted: &LiftedLoop) -> IntMatrix {
    let k = graph.vertices[0].0.len();
    let mut acc = IntMatrix::identity(2 * k);
    for (v, c) in &lifted.path {
        let (pl, pr) = &graph.vertices[*v];
        let step = staircase_matrix(pl, pr, c);
        acc = &step * &acc;
    }
    acc
}

/// Reversed-order product `A_gamma^dagger = A_0 A_1 ... A_{n-1}`, equal
/// to `J A_gamma^{-1} J`.
pub fn dagger_matrix(graph: &DcGraphHyp, lifted: &LiftedLoop) -> IntMatrix {
    let k = graph.vertices[0].0.len();
    let mut acc = IntMatrix::identity(2 * k);
    for (v, c) in &lifted.path {
        let (pl, pr) = &graph.vertices[*v];
        let step = staircase_matrix(pl, pr, c);
        acc = &acc * &step;
    }
    acc
}

/// Positivity of a lifted loop: primitivity of the composite matrix.
pub fn is_positive(graph: &DcGraphHyp, lifted: &LiftedLoop) -> Result<bool, PaError> {
    let b = &relabeling_matrix(&lifted.sigma) * &loop_matrix(graph, lifted);
    Ok(b.is_primitive()?)
}

/// Outcome of the exact (or certified-float) closure verification
/// `sigma . m_gamma(g_t0 Q0) = Q0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosureCheck {
    Exact,
    /// Certified only within the stated float tolerance (the eigenvalue
    /// left every quadratic field).
    Approximate,
}

/// A certified pseudo-Anosov record.
pub struct PaRecord {
    /// Closing relabeling.
    pub sigma: Perm,
    /// The matrix `Pi_sigma A_gamma`.
    pub matrix: IntMatrix,
    /// Characteristic polynomial of the dagger composite.
    pub char_poly: crate::num::CharPoly,
    /// Dilatation `e^{t0}` as a certified enclosure.
    pub dilatation: Enclosure,
    /// Exact dilatation when it lives in a quadratic field.
    pub dilatation_exact: Option<Scalar>,
    /// `t0` enclosure.
    pub t0: Enclosure,
    /// Invariant quadrangulation: unit-norm widths, heights scaled to
    /// unit area. Exact scalars when the dilatation is quadratic.
    pub invariant: Option<Quadrangulation>,
    pub closure: ClosureCheck,
}

/// Builds the record for a positive lifted loop: eigendata of the
/// composite matrix, the invariant quadrangulation, and the closure
/// certificate, exact whenever the dilatation is quadratic.
pub fn pa_record(graph: &DcGraphHyp, lifted: &LiftedLoop) -> Result<PaRecord, PaError> {
    let k = graph.vertices[0].0.len();
    let n2 = 2 * k;
    let a_gamma = loop_matrix(graph, lifted);
    let pi_sigma = relabeling_matrix(&lifted.sigma);
    let b = &pi_sigma * &a_gamma;
    if !b.is_primitive()? {
        return Err(PaError::NotPositive);
    }
    // Dagger composite B^t = J B^{-1} J, the widths-side matrix.
    let j = IntMatrix::sign_involution(n2);
    let b_inv = b
        .inverse_unimodular()
        .ok_or_else(|| PaError::Closure("composite matrix is not unimodular".into()))?;
    let b_dag = &(&j * &b_inv) * &j;
    debug_assert!(b_dag.is_nonnegative(), "dagger composite is non-negative");
    let pf = b_dag.pf_leading(None)?;
    let t0 = pf.eigenvalue.ln();

    let (invariant, closure, exact) = match pf.exact.clone() {
        Some(lambda_pf) => {
            let q0 = exact_invariant(graph, lifted, &b, &b_dag, &lambda_pf)?;
            verify_closure_exact(graph, lifted, &q0, &lambda_pf)?;
            (Some(q0), ClosureCheck::Exact, Some(lambda_pf))
        }
        None => {
            verify_closure_float(&b, &pf.eigenvector, pf.eigenvalue.value)?;
            (None, ClosureCheck::Approximate, None)
        }
    };
    Ok(PaRecord {
        sigma: lifted.sigma.clone(),
        matrix: b,
        char_poly: pf.char_poly,
        dilatation: pf.eigenvalue,
        dilatation_exact: exact,
        t0,
        invariant,
        closure,
    })
}

/// Solves the eigendata exactly over the quadratic field: widths from
/// the dagger composite (pushed through the sign involution), heights
/// from the composite itself, heights scaled to unit area.
fn exact_invariant(
    graph: &DcGraphHyp,
    lifted: &LiftedLoop,
    b: &IntMatrix,
    b_dag: &IntMatrix,
    lambda_pf: &Scalar,
) -> Result<Quadrangulation, PaError> {
    let (pl0, pr0) = &graph.vertices[lifted.start];
    let v = b_dag
        .eigenvector_exact(lambda_pf)
        .ok_or_else(|| PaError::Closure("no exact eigenvector for the dagger matrix".into()))?;
    // Positive up to global sign; normalize positive.
    let v: Vec<Scalar> = if v.iter().all(|x| x.signum() <= 0) {
        v.into_iter().map(|x| -x).collect()
    } else {
        v
    };
    if !v.iter().all(|x| x.signum() > 0) {
        return Err(PaError::Closure(
            "dagger eigenvector is not positive".into(),
        ));
    }
    // widths = J v: left entries negative
    let lambda: Vec<(Scalar, Scalar)> = (0..pl0.len())
        .map(|i| (-&v[2 * i], v[2 * i + 1].clone()))
        .collect();

    let tau_vec = b
        .eigenvector_exact(lambda_pf)
        .ok_or_else(|| PaError::Closure("no exact eigenvector for the composite".into()))?;
    let tau_vec: Vec<Scalar> = if tau_vec.iter().all(|x| x.signum() <= 0) {
        tau_vec.into_iter().map(|x| -x).collect()
    } else {
        tau_vec
    };
    if !tau_vec.iter().all(|x| x.signum() > 0) {
        return Err(PaError::Closure(
            "height eigenvector is not positive".into(),
        ));
    }
    let tau: Vec<(Scalar, Scalar)> = (0..pl0.len())
        .map(|i| (tau_vec[2 * i].clone(), tau_vec[2 * i + 1].clone()))
        .collect();
    let q_raw = suspension(pl0, pr0, &lambda, &tau)?;
    // Scale heights for unit area; area is linear in the heights.
    let area = q_raw.area();
    if area.try_signum()? <= 0 {
        return Err(PaError::Closure(
            "invariant data has nonpositive area".into(),
        ));
    }
    let inv_area = area.recip()?;
    let tau: Vec<(Scalar, Scalar)> = tau
        .into_iter()
        .map(|(a, b)| (a * inv_area.clone(), b * inv_area.clone()))
        .collect();
    Ok(suspension(pl0, pr0, &lambda, &tau)?)
}

/// Runs the loop's staircase moves on `g_{t0} Q0` with exact data and
/// demands equality with `Q0` after the closing relabeling.
fn verify_closure_exact(
    graph: &DcGraphHyp,
    lifted: &LiftedLoop,
    q0: &Quadrangulation,
    lambda_pf: &Scalar,
) -> Result<(), PaError> {
    // g_{t0} scales widths by e^{t0} = lambda_pf and heights by its
    // reciprocal, all inside the quadratic field.
    let mut cur = q0.teich_flow(lambda_pf);
    for (v, c) in &lifted.path {
        let (pl, pr) = &graph.vertices[*v];
        debug_assert_eq!((&cur.pi_l, &cur.pi_r), (pl, pr), "path matches data");
        cur = staircase_move(&cur, c)
            .map_err(|e| PaError::Closure(format!("move not applicable: {e}")))?;
    }
    let closed = cur.relabel(&lifted.sigma);
    if &closed == q0 {
        Ok(())
    } else {
        Err(PaError::Closure("relabeled image differs from Q0".into()))
    }
}

/// Float fallback: residual check of the eigen equation only.
fn verify_closure_float(b: &IntMatrix, v: &[f64], lambda: f64) -> Result<(), PaError> {
    let rows = b
        .rows_i64()
        .ok_or_else(|| PaError::Closure("matrix overflow".into()))?;
    // J v gives widths with signs; the eigen equation for the dagger
    // matrix transports to B lambda = lambda^{-1} on the signed vector.
    let n = v.len();
    let mut signed: Vec<f64> = v.to_vec();
    for (i, x) in signed.iter_mut().enumerate() {
        if i % 2 == 0 {
            *x = -*x;
        }
    }
    for i in 0..n {
        let mut acc = 0.0;
        for (jj, vj) in signed.iter().enumerate() {
            acc += rows[i][jj] as f64 * vj;
        }
        if (acc - signed[i] / lambda).abs() > 1e-9 {
            return Err(PaError::Closure(format!(
                "float residual {} at row {}",
                (acc - signed[i] / lambda).abs(),
                i
            )));
        }
    }
    Ok(())
}

/// Hitting-time style exact value `(3 + sqrt 5)/2` used across tests.
#[cfg(test)]
pub fn golden_dilatation() -> Scalar {
    (Scalar::from_int(3) + Scalar::sqrt_int(5).unwrap()) / Scalar::from_int(2)
}

#[cfg(test)]
mod tests {
    use super::super::unlabeled::{lift_loop, unlabeled_graph};
    use super::*;
    use crate::hyp::dc_graph;

    fn torus_graph() -> (DcGraphHyp, super::super::UnlabeledDcGraph) {
        let g = dc_graph(&Perm::identity(1), &Perm::identity(1)).unwrap();
        let u = unlabeled_graph(&g).unwrap();
        (g, u)
    }

    /// Edge ids of the right and left self-loops on the torus graph.
    fn torus_edges(u: &super::super::UnlabeledDcGraph) -> (usize, usize) {
        let right = (0..u.edges.len())
            .find(|&i| u.edges[i].rep.1.side == crate::hyp::Side::Right)
            .unwrap();
        let left = (0..u.edges.len())
            .find(|&i| u.edges[i].rep.1.side == crate::hyp::Side::Left)
            .unwrap();
        (right, left)
    }

    #[test]
    fn single_moves_are_not_positive() {
        let (g, u) = torus_graph();
        let (r, l) = torus_edges(&u);
        let lifted = lift_loop(&u, &[r], 0).unwrap();
        assert!(!is_positive(&g, &lifted).unwrap());
        assert!(matches!(pa_record(&g, &lifted), Err(PaError::NotPositive)));
        let rl = lift_loop(&u, &[r, l], 0).unwrap();
        assert!(is_positive(&g, &rl).unwrap());
        // doubling a positive loop stays positive
        let rlrl = lift_loop(&u, &[r, l, r, l], 0).unwrap();
        assert!(is_positive(&g, &rlrl).unwrap());
    }

    #[test]
    fn golden_loop_record() {
        let (g, u) = torus_graph();
        let (r, l) = torus_edges(&u);
        let lifted = lift_loop(&u, &[r, l], 0).unwrap();
        let a = loop_matrix(&g, &lifted);
        // L . R in path order
        assert_eq!(a, IntMatrix::from_rows(&[&[1, 1], &[1, 2]]));
        let rec = pa_record(&g, &lifted).unwrap();
        assert_eq!(rec.closure, ClosureCheck::Exact);
        assert_eq!(rec.dilatation_exact.unwrap(), golden_dilatation());
        // invariant widths match the golden wedge
        let q = rec.invariant.unwrap();
        let g5 = Scalar::sqrt_int(5).unwrap();
        let gr = (g5.clone() - Scalar::one()) / Scalar::from_int(2);
        assert_eq!(q.wedges[0].l.x, -&gr);
        assert_eq!(
            q.wedges[0].r.x,
            (Scalar::from_int(3) - g5) / Scalar::from_int(2)
        );
        // t0 = log((3+sqrt5)/2)
        let expect = ((3.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((rec.t0.value - expect).abs() < 1e-12);
    }

    #[test]
    fn dagger_identity_holds() {
        let (g, u) = torus_graph();
        let (r, l) = torus_edges(&u);
        for pres in [vec![r, l], vec![r, r, l], vec![l, r, l]] {
            let lifted = lift_loop(&u, &pres, 0).unwrap();
            let a = loop_matrix(&g, &lifted);
            let dag = dagger_matrix(&g, &lifted);
            let j = IntMatrix::sign_involution(2);
            let expect = &(&j * &a.inverse_unimodular().unwrap()) * &j;
            assert_eq!(dag, expect);
        }
    }

    #[test]
    fn squared_loop_squares_dilatation() {
        let (g, u) = torus_graph();
        let (r, l) = torus_edges(&u);
        let rec1 = pa_record(&g, &lift_loop(&u, &[r, l], 0).unwrap()).unwrap();
        let rec2 = pa_record(&g, &lift_loop(&u, &[r, l, r, l], 0).unwrap()).unwrap();
        let d1 = rec1.dilatation_exact.unwrap();
        let d2 = rec2.dilatation_exact.unwrap();
        assert_eq!(d2, d1.square());
    }

    #[test]
    fn rrl_has_dilatation_two_plus_sqrt3() {
        let (g, u) = torus_graph();
        let (r, l) = torus_edges(&u);
        let rec = pa_record(&g, &lift_loop(&u, &[r, r, l], 0).unwrap()).unwrap();
        let expect = Scalar::from_int(2) + Scalar::sqrt_int(3).unwrap();
        assert_eq!(rec.dilatation_exact.unwrap(), expect);
        assert_eq!(rec.closure, ClosureCheck::Exact);
    }
}
