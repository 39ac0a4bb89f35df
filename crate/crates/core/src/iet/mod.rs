//! Interval exchange transformations and Rauzy–Veech induction.
//!
//! An IET is stored as a pair of bijections from a symbol alphabet to
//! positions (the two-row representation) plus a positive length per
//! symbol. Induction steps cut the rightmost interval; the accelerated
//! variant collapses maximal runs of one move type.

mod density;
mod rauzy;
mod torus;

pub use density::{fast_pushforward_error, rho_fast, rho_slow, slow_pushforward_error};
pub use rauzy::{rauzy_class, RauzyClass};
pub use torus::{cf_digits, farey, gauss, gauss_digits, torus_fast, torus_slow, CfExpansion};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::num::{Enclosure, Scalar};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum IetError {
    #[error("row is not a bijection of the alphabet")]
    NotBijection,
    #[error("interval lengths must be strictly positive")]
    NonPositiveLength,
    #[error("length vector does not match the alphabet")]
    LengthMismatch,
    #[error("vertical saddle connection: last intervals tie at length {0}")]
    Tie(Scalar),
    #[error("point {0} is a discontinuity of the exchange")]
    Discontinuity(Scalar),
    #[error("point {0} outside the domain")]
    OutOfRange(Scalar),
    #[error("combinatorial datum is reducible")]
    Reducible,
    #[error("input lies on a branch boundary")]
    BranchBoundary,
    #[error("expansion terminated after {0} digits")]
    Terminated(usize),
    #[error("numeric error: {0}")]
    Num(#[from] crate::num::NumError),
}

/// Which induction move applies: the rightmost interval before the
/// exchange is longer (`Top`) or after (`Bot`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MoveType {
    Top,
    Bot,
}

impl fmt::Display for MoveType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveType::Top => write!(f, "top"),
            MoveType::Bot => write!(f, "bot"),
        }
    }
}

/// Combinatorial datum: an ordered alphabet with the top and bottom row
/// orders. Positions are 0-based internally.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PermPair {
    /// Symbols in canonical display order (= top row order at creation).
    pub alphabet: Vec<String>,
    /// `top[s]` = position of symbol `s` in the top row.
    top: Vec<usize>,
    /// `bot[s]` = position of symbol `s` in the bottom row.
    bot: Vec<usize>,
}

impl PermPair {
    /// Builds from the two rows given as symbol sequences.
    pub fn new<S: AsRef<str>>(top_row: &[S], bot_row: &[S]) -> Result<Self, IetError> {
        let d = top_row.len();
        if d < 2 || bot_row.len() != d {
            return Err(IetError::NotBijection);
        }
        let alphabet: Vec<String> = top_row.iter().map(|s| s.as_ref().to_string()).collect();
        let index: BTreeMap<&str, usize> = alphabet
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        if index.len() != d {
            return Err(IetError::NotBijection);
        }
        let mut top = vec![usize::MAX; d];
        let mut bot = vec![usize::MAX; d];
        for (pos, s) in top_row.iter().enumerate() {
            top[index[s.as_ref()]] = pos;
        }
        for (pos, s) in bot_row.iter().enumerate() {
            let &sym = index.get(s.as_ref()).ok_or(IetError::NotBijection)?;
            if bot[sym] != usize::MAX {
                return Err(IetError::NotBijection);
            }
            bot[sym] = pos;
        }
        if bot.contains(&usize::MAX) {
            return Err(IetError::NotBijection);
        }
        Ok(PermPair { alphabet, top, bot })
    }

    /// Parses compact notation `"ABCD/DCBA"` with one-character symbols.
    pub fn parse(s: &str) -> Result<Self, IetError> {
        let (t, b) = s.split_once('/').ok_or(IetError::NotBijection)?;
        let top: Vec<String> = t.trim().chars().map(|c| c.to_string()).collect();
        let bot: Vec<String> = b.trim().chars().map(|c| c.to_string()).collect();
        PermPair::new(&top, &bot)
    }

    pub fn len(&self) -> usize {
        self.alphabet.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphabet.is_empty()
    }

    /// Symbol index at top position `pos`.
    pub fn top_symbol(&self, pos: usize) -> usize {
        self.top.iter().position(|&p| p == pos).unwrap()
    }

    pub fn bot_symbol(&self, pos: usize) -> usize {
        self.bot.iter().position(|&p| p == pos).unwrap()
    }

    pub fn top_row(&self) -> Vec<usize> {
        (0..self.len()).map(|p| self.top_symbol(p)).collect()
    }

    pub fn bot_row(&self) -> Vec<usize> {
        (0..self.len()).map(|p| self.bot_symbol(p)).collect()
    }

    pub fn top_position(&self, sym: usize) -> usize {
        self.top[sym]
    }

    pub fn bot_position(&self, sym: usize) -> usize {
        self.bot[sym]
    }

    /// Monodromy invariant `p = bot ∘ top⁻¹` on positions (0-based).
    pub fn monodromy(&self) -> Vec<usize> {
        (0..self.len())
            .map(|pos| self.bot[self.top_symbol(pos)])
            .collect()
    }

    /// An IET is reducible when a proper prefix of positions is invariant
    /// under the monodromy invariant.
    pub fn is_irreducible(&self) -> bool {
        let p = self.monodromy();
        let d = self.len();
        let mut max_image = 0usize;
        #[allow(clippy::needless_range_loop)]
        for k in 0..d - 1 {
            max_image = max_image.max(p[k]);
            if max_image == k {
                return false;
            }
        }
        true
    }

    /// Applies a top or bot move to the combinatorial datum alone.
    pub fn rauzy_move(&self, mv: MoveType) -> PermPair {
        let d = self.len();
        let (keep, change) = match mv {
            MoveType::Top => (&self.top, &self.bot),
            MoveType::Bot => (&self.bot, &self.top),
        };
        let winner = keep.iter().position(|&p| p == d - 1).unwrap();
        let loser = change.iter().position(|&p| p == d - 1).unwrap();
        let k = change[winner];
        // Insert the loser right after the winner in the changing row.
        let mut new_change = vec![0usize; d];
        for s in 0..d {
            if s == loser {
                new_change[s] = k + 1;
            } else {
                let p = change[s];
                new_change[s] = if p > k { p + 1 } else { p };
            }
        }
        match mv {
            MoveType::Top => PermPair {
                alphabet: self.alphabet.clone(),
                top: self.top.clone(),
                bot: new_change,
            },
            MoveType::Bot => PermPair {
                alphabet: self.alphabet.clone(),
                top: new_change,
                bot: self.bot.clone(),
            },
        }
    }
}

impl fmt::Display for PermPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |row: Vec<usize>| -> String {
            row.iter()
                .map(|&s| self.alphabet[s].as_str())
                .collect::<Vec<_>>()
                .join("")
        };
        write!(f, "{}/{}", row(self.top_row()), row(self.bot_row()))
    }
}

impl fmt::Debug for PermPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An interval exchange transformation: combinatorial datum plus a
/// positive length for every symbol.
#[derive(Clone, PartialEq)]
pub struct IetDatum {
    pub perm: PermPair,
    /// Lengths indexed like `perm.alphabet`.
    pub lengths: Vec<Scalar>,
}

/// Outcome of one induction step.
pub struct RvStep {
    pub next: IetDatum,
    pub move_type: MoveType,
    pub winner: String,
    pub loser: String,
}

impl IetDatum {
    pub fn new(perm: PermPair, lengths: Vec<Scalar>) -> Result<Self, IetError> {
        if lengths.len() != perm.len() {
            return Err(IetError::LengthMismatch);
        }
        for l in &lengths {
            if l.try_signum()? <= 0 {
                return Err(IetError::NonPositiveLength);
            }
        }
        Ok(IetDatum { perm, lengths })
    }

    pub fn total_length(&self) -> Scalar {
        self.lengths
            .iter()
            .fold(Scalar::zero(), |acc, l| acc + l.clone())
    }

    /// Left endpoints of the intervals in the order of `row`.
    fn starts(&self, row: &[usize]) -> Vec<Scalar> {
        let mut acc = Scalar::zero();
        let mut out = Vec::with_capacity(row.len());
        for &sym in row {
            out.push(acc.clone());
            acc = acc + self.lengths[sym].clone();
        }
        out
    }

    /// Interior cut points of the top decomposition: the positions whose
    /// forward flow hits the singularity before returning.
    pub fn top_cuts(&self) -> Vec<Scalar> {
        let row = self.perm.top_row();
        self.starts(&row).into_iter().skip(1).collect()
    }

    /// Origin plus the interior cut points of the bottom decomposition:
    /// the positions just emitted from the singularity.
    pub fn bot_cuts_with_origin(&self) -> Vec<Scalar> {
        self.starts(&self.perm.bot_row())
    }

    /// Applies the exchange to a point.
    pub fn apply(&self, x: &Scalar) -> Result<Scalar, IetError> {
        if x.try_signum()? < 0 || x.try_cmp(&self.total_length())? != std::cmp::Ordering::Less {
            return Err(IetError::OutOfRange(x.clone()));
        }
        let top_row = self.perm.top_row();
        let top_starts = self.starts(&top_row);
        let bot_starts = self.starts(&self.perm.bot_row());
        let mut sym = None;
        for (i, &s) in top_row.iter().enumerate() {
            let rel = x.try_cmp(&top_starts[i])?;
            if rel == std::cmp::Ordering::Equal && i > 0 {
                return Err(IetError::Discontinuity(x.clone()));
            }
            if rel != std::cmp::Ordering::Less {
                sym = Some((s, i));
            }
        }
        let (s, i) = sym.ok_or_else(|| IetError::OutOfRange(x.clone()))?;
        let offset = x - &top_starts[i];
        let bpos = self.perm.bot_position(s);
        Ok(&bot_starts[bpos] + &offset)
    }

    fn last_symbols(&self) -> (usize, usize) {
        let d = self.perm.len();
        (self.perm.top_symbol(d - 1), self.perm.bot_symbol(d - 1))
    }

    /// Move type of this datum; a tie is a vertical saddle connection.
    pub fn move_type(&self) -> Result<MoveType, IetError> {
        let (a_top, a_bot) = self.last_symbols();
        match self.lengths[a_top].try_cmp(&self.lengths[a_bot])? {
            std::cmp::Ordering::Greater => Ok(MoveType::Top),
            std::cmp::Ordering::Less => Ok(MoveType::Bot),
            std::cmp::Ordering::Equal => Err(IetError::Tie(self.lengths[a_top].clone())),
        }
    }

    /// One Rauzy–Veech induction step, without renormalization.
    pub fn rv_step(&self) -> Result<RvStep, IetError> {
        let mv = self.move_type()?;
        let (a_top, a_bot) = self.last_symbols();
        let (winner, loser) = match mv {
            MoveType::Top => (a_top, a_bot),
            MoveType::Bot => (a_bot, a_top),
        };
        let mut lengths = self.lengths.clone();
        lengths[winner] = &lengths[winner] - &lengths[loser];
        let perm = self.perm.rauzy_move(mv);
        Ok(RvStep {
            next: IetDatum::new(perm, lengths)?,
            move_type: mv,
            winner: self.perm.alphabet[winner].clone(),
            loser: self.perm.alphabet[loser].clone(),
        })
    }

    /// Zorich acceleration: applies induction steps while the move type
    /// matches the initial one, returning the first datum of different
    /// type and the number of collapsed steps.
    pub fn rv_fast(&self) -> Result<(IetDatum, usize), IetError> {
        let t0 = self.move_type()?;
        let mut cur = self.rv_step()?.next;
        let mut n = 1usize;
        while cur.move_type()? == t0 {
            cur = cur.rv_step()?.next;
            n += 1;
        }
        Ok((cur, n))
    }

    /// First positive time the Teichmüller flow returns a unit-base
    /// zippered rectangle to the section: `-log(1 - min(top, bot))`.
    /// Returns the exact argument of the logarithm and its enclosure.
    pub fn hitting_time(&self) -> Result<(Scalar, Enclosure), IetError> {
        let (a_top, a_bot) = self.last_symbols();
        if self.lengths[a_top].try_cmp(&self.lengths[a_bot])? == std::cmp::Ordering::Equal {
            return Err(IetError::Tie(self.lengths[a_top].clone()));
        }
        let min = self.lengths[a_top].clone().min(self.lengths[a_bot].clone());
        let arg = Scalar::one() - min;
        let t = arg.ln_enclosure().neg();
        Ok((arg, t))
    }

    /// Bounded Keane check: iterates the forward orbit of every point
    /// emitted from the singularity for up to `n_steps`, and reports the
    /// first landing on a point whose flow re-enters the singularity.
    pub fn keane_check(&self, n_steps: usize) -> Result<KeaneVerdict, IetError> {
        let seeds = self.bot_cuts_with_origin();
        let targets = self.top_cuts();
        for (start_idx, p) in seeds.iter().enumerate() {
            let mut x = p.clone();
            for step in 1..=n_steps {
                // Apply, treating cut points as left limits: the exchange
                // is defined on left-closed intervals.
                x = self.apply_closed(&x)?;
                if let Some(hit) = targets
                    .iter()
                    .position(|q| q.cmp_exact(&x) == std::cmp::Ordering::Equal)
                {
                    return Ok(KeaneVerdict::Violation {
                        start: start_idx,
                        step,
                        hit,
                    });
                }
            }
        }
        Ok(KeaneVerdict::NoneFound { checked: n_steps })
    }

    /// Like [`IetDatum::apply`] but defined at cut points (left-closed).
    fn apply_closed(&self, x: &Scalar) -> Result<Scalar, IetError> {
        let top_row = self.perm.top_row();
        let top_starts = self.starts(&top_row);
        let bot_starts = self.starts(&self.perm.bot_row());
        let mut sym = None;
        for (i, &s) in top_row.iter().enumerate() {
            if x.try_cmp(&top_starts[i])? != std::cmp::Ordering::Less {
                sym = Some((s, i));
            }
        }
        let (s, i) = sym.ok_or_else(|| IetError::OutOfRange(x.clone()))?;
        let offset = x - &top_starts[i];
        let bpos = self.perm.bot_position(s);
        Ok(&bot_starts[bpos] + &offset)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KeaneVerdict {
    /// Orbit of singular point `start` hits singular point `hit` after
    /// `step` applications.
    Violation {
        start: usize,
        step: usize,
        hit: usize,
    },
    NoneFound {
        checked: usize,
    },
}

impl fmt::Debug for IetDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} @ [", self.perm)?;
        for (i, l) in self.lengths.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "]")
    }
}

// JSON: {"top":["A","B",..],"bot":[..],"lengths":{"A":Scalar,..}}
#[derive(Serialize, Deserialize)]
struct IetJson {
    top: Vec<String>,
    bot: Vec<String>,
    lengths: BTreeMap<String, Scalar>,
}

impl Serialize for IetDatum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let top: Vec<String> = self
            .perm
            .top_row()
            .iter()
            .map(|&i| self.perm.alphabet[i].clone())
            .collect();
        let bot: Vec<String> = self
            .perm
            .bot_row()
            .iter()
            .map(|&i| self.perm.alphabet[i].clone())
            .collect();
        let lengths = self
            .perm
            .alphabet
            .iter()
            .cloned()
            .zip(self.lengths.iter().cloned())
            .collect();
        IetJson { top, bot, lengths }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IetDatum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = IetJson::deserialize(d)?;
        let perm = PermPair::new(&raw.top, &raw.bot).map_err(D::Error::custom)?;
        let lengths = perm
            .alphabet
            .iter()
            .map(|a| {
                raw.lengths
                    .get(a)
                    .cloned()
                    .ok_or_else(|| D::Error::custom(format!("missing length for {a}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        IetDatum::new(perm, lengths).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::Rational;

    fn rat(n: i64, d: i64) -> Scalar {
        Scalar::Rat(Rational::new(n, d))
    }

    fn iet(s: &str, lengths: &[Scalar]) -> IetDatum {
        IetDatum::new(PermPair::parse(s).unwrap(), lengths.to_vec()).unwrap()
    }

    #[test]
    fn monodromy_examples() {
        let p = PermPair::parse("ABCD/DCBA").unwrap();
        assert_eq!(p.monodromy(), vec![3, 2, 1, 0]); // (4,3,2,1) 1-based
        let p = PermPair::parse("AB/BA").unwrap();
        assert_eq!(p.monodromy(), vec![1, 0]);
        let p = PermPair::parse("ABCD/CADB").unwrap();
        assert_eq!(p.monodromy(), vec![1, 3, 0, 2]); // (2,4,1,3)
    }

    #[test]
    fn irreducibility() {
        assert!(!PermPair::parse("ABCD/BADC").unwrap().is_irreducible());
        assert!(PermPair::parse("ABCD/DCBA").unwrap().is_irreducible());
        assert!(PermPair::parse("AB/BA").unwrap().is_irreducible());
    }

    #[test]
    fn apply_rotation() {
        let t = iet("AB/BA", &[rat(7, 10), rat(3, 10)]);
        assert_eq!(t.apply(&rat(1, 5)).unwrap(), rat(1, 2));
        let t = iet("AB/BA", &[rat(1, 2), rat(1, 2)]);
        assert_eq!(t.apply(&rat(1, 4)).unwrap(), rat(3, 4));
    }

    #[test]
    fn apply_four_letter() {
        // lengths all 1; A occupies slot 2 on the bottom, after C
        let t = iet("ABCD/CADB", &[rat(1, 1), rat(1, 1), rat(1, 1), rat(1, 1)]);
        assert_eq!(t.apply(&rat(1, 2)).unwrap(), rat(3, 2));
    }

    #[test]
    fn apply_errors() {
        let t = iet("AB/BA", &[rat(1, 2), rat(1, 2)]);
        assert!(matches!(
            t.apply(&rat(1, 2)),
            Err(IetError::Discontinuity(_))
        ));
        assert!(matches!(t.apply(&rat(3, 2)), Err(IetError::OutOfRange(_))));
    }

    #[test]
    fn rv_step_paper_values() {
        // bot move leaves the combinatorics fixed here
        let t = iet("ABC/CAB", &[rat(3, 5), rat(2, 7), rat(4, 35)]);
        let s = t.rv_step().unwrap();
        assert_eq!(s.move_type, MoveType::Bot);
        assert_eq!(s.next.lengths, vec![rat(3, 5), rat(6, 35), rat(4, 35)]);
        assert_eq!(s.next.perm.to_string(), "ABC/CAB");

        // top move on the double pentagon datum
        let t = iet(
            "ABCD/DCBA",
            &[rat(5, 31), rat(7, 31), rat(9, 31), rat(10, 31)],
        );
        let s = t.rv_step().unwrap();
        assert_eq!(s.move_type, MoveType::Top);
        assert_eq!(s.next.perm.to_string(), "ABCD/DACB");

        // plain subtraction on two letters; the longer interval after the
        // exchange makes this a bot move
        let t = iet("AB/BA", &[rat(3, 4), rat(1, 4)]);
        let s = t.rv_step().unwrap();
        assert_eq!(s.move_type, MoveType::Bot);
        assert_eq!(s.next.lengths, vec![rat(1, 2), rat(1, 4)]);
    }

    #[test]
    fn rv_step_tie_is_error() {
        let t = iet("AB/BA", &[rat(1, 2), rat(1, 2)]);
        assert!(matches!(t.rv_step(), Err(IetError::Tie(_))));
    }

    #[test]
    fn rv_fast_collapses_runs() {
        let t = iet("ABC/CAB", &[rat(3, 5), rat(2, 7), rat(4, 35)]);
        let (next, n) = t.rv_fast().unwrap();
        assert_eq!(n, 2);
        assert_eq!(next.lengths, vec![rat(3, 5), rat(2, 35), rat(4, 35)]);

        let t = iet("AB/BA", &[rat(7, 10), rat(3, 10)]);
        assert_eq!(t.rv_fast().unwrap().1, 2);
        let t = iet("AB/BA", &[rat(3, 10), rat(7, 10)]);
        assert_eq!(t.rv_fast().unwrap().1, 2);
    }

    #[test]
    fn rv_fast_equals_iterated_rv_step() {
        let t = iet(
            "ABCD/DCBA",
            &[rat(5, 31), rat(7, 31), rat(9, 31), rat(10, 31)],
        );
        let (fast, n) = t.rv_fast().unwrap();
        let mut slow = t;
        for _ in 0..n {
            slow = slow.rv_step().unwrap().next;
        }
        assert_eq!(fast, slow);
    }

    #[test]
    fn hitting_time_values() {
        let t = iet("AB/BA", &[rat(7, 10), rat(3, 10)]);
        let (arg, enc) = t.hitting_time().unwrap();
        assert_eq!(arg, rat(7, 10));
        assert!((enc.value - (-(0.7f64.ln()))).abs() < 1e-12);

        // lengths (1 - (sqrt6 - 2), sqrt6 - 2): min is sqrt6-2, arg 3-sqrt6
        let g = Scalar::sqrt_int(6).unwrap() - Scalar::from_int(2);
        let t = iet("AB/BA", &[Scalar::one() - g.clone(), g]);
        let (arg, _) = t.hitting_time().unwrap();
        assert_eq!(arg, Scalar::from_int(3) - Scalar::sqrt_int(6).unwrap());
    }

    #[test]
    fn keane_rational_rotation_violates() {
        let t = iet("AB/BA", &[rat(1, 2), rat(1, 2)]);
        match t.keane_check(10).unwrap() {
            KeaneVerdict::Violation { step, .. } => assert_eq!(step, 1),
            _ => panic!("expected violation"),
        }
    }

    #[test]
    fn keane_golden_rotation_clean() {
        let g = (Scalar::sqrt_int(5).unwrap() - Scalar::one()) / Scalar::from_int(2);
        let t = iet("AB/BA", &[Scalar::one() - g.clone(), g]);
        assert_eq!(
            t.keane_check(10_000).unwrap(),
            KeaneVerdict::NoneFound { checked: 10_000 }
        );
    }

    #[test]
    fn keane_tie_construction_violates() {
        // four letters, two equal lengths force a connection quickly
        let t = iet("ABCD/DCBA", &[rat(1, 4), rat(1, 4), rat(1, 6), rat(1, 3)]);
        assert!(matches!(
            t.keane_check(100).unwrap(),
            KeaneVerdict::Violation { .. }
        ));
    }

    #[test]
    fn length_sum_conserved_modulo_loser() {
        let t = iet("ABC/CAB", &[rat(3, 5), rat(2, 7), rat(4, 35)]);
        let total = t.total_length();
        let s = t.rv_step().unwrap();
        let loser_len = rat(4, 35); // loser is C here
        assert_eq!(s.next.total_length() + loser_len, total);
        assert_eq!(s.loser, "C");
    }

    #[test]
    fn json_round_trip() {
        let t = iet("AB/BA", &[rat(7, 10), rat(3, 10)]);
        let j = serde_json::to_string(&t).unwrap();
        let back: IetDatum = serde_json::from_str(&j).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn monodromy_invariant_under_relabeling() {
        let p = PermPair::parse("ABCD/DCAB").unwrap();
        let q = PermPair::parse("XYZW/WZXY").unwrap();
        assert_eq!(p.monodromy(), q.monodromy());
    }
}
