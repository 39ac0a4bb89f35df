//! Pseudo-Anosov enumeration in hyperelliptic components, odd `k`.
//!
//! Mapping classes correspond one-to-one with equivalence classes of
//! positive loops in the unlabeled diagonal-changes graph. A positive
//! loop lifts to a path plus a closing relabeling; its integer matrix
//! has certified Perron–Frobenius data from which the invariant
//! quadrangulation, the dilatation and an exact closure certificate are
//! built.

mod construct;
mod enumerate;
mod unlabeled;

pub use construct::{dagger_matrix, is_positive, loop_matrix, pa_record, ClosureCheck, PaRecord};
pub use enumerate::{
    enumerate_pa, enumerate_pa_from, hyperelliptic_seed, is_power, loop_canonical_form,
    EnumerationReport, LoopClass,
};
pub use unlabeled::{lift_loop, unlabeled_graph, LiftedLoop, UnlabeledDcGraph};

use thiserror::Error;

use crate::hyp::Perm;
use crate::num::IntMatrix;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum PaError {
    #[error("k must be odd")]
    EvenK,
    #[error("loop start does not project to the given class")]
    StartMismatch,
    #[error("edge sequence does not concatenate")]
    BadPath,
    #[error("no unique closing relabeling (covering is branched?)")]
    NoUniqueClosing,
    #[error("loop is not positive")]
    NotPositive,
    #[error("closure certificate failed: {0}")]
    Closure(String),
    #[error("resource budget exceeded")]
    Budget,
    #[error("hyp error: {0}")]
    Hyp(#[from] crate::hyp::HypError),
    #[error("numeric error: {0}")]
    Num(#[from] crate::num::NumError),
}

/// Block permutation matrix of a relabeling on the wedge basis:
/// `(i, eps)` maps to `(sigma(i), eps)`.
pub fn relabeling_matrix(sigma: &Perm) -> IntMatrix {
    let k = sigma.len();
    let mut perm = vec![0usize; 2 * k];
    for i in 0..k {
        perm[2 * i] = 2 * sigma.apply(i);
        perm[2 * i + 1] = 2 * sigma.apply(i) + 1;
    }
    IntMatrix::permutation(&perm)
}
