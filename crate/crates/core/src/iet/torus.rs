//! Explicit genus-one renormalization maps and their continued-fraction
//! factors.
//!
//! On two letters the space of exchanges is parametrized by the length of
//! the right interval before the exchange. The slow induction map, its
//! Zorich acceleration and the Farey/Gauss pair are all exact branch
//! formulas here.

use num_traits::ToPrimitive;

use super::IetError;
use crate::num::{Rational, Scalar};

fn half() -> Scalar {
    Scalar::Rat(Rational::new(1, 2))
}

fn in_open_unit(x: &Scalar) -> Result<(), IetError> {
    if x.try_signum()? <= 0 || x.try_cmp(&Scalar::one())? != std::cmp::Ordering::Less {
        return Err(IetError::OutOfRange(x.clone()));
    }
    Ok(())
}

/// Slow induction map: `x/(1-x)` below 1/2, `2 - 1/x` above.
pub fn torus_slow(x: &Scalar) -> Result<Scalar, IetError> {
    in_open_unit(x)?;
    match x.try_cmp(&half())? {
        std::cmp::Ordering::Less => Ok(x / &(Scalar::one() - x.clone())),
        std::cmp::Ordering::Greater => Ok(Scalar::from_int(2) - x.recip()?),
        std::cmp::Ordering::Equal => Err(IetError::Tie(x.clone())),
    }
}

/// Farey map: `x/(1-x)` below 1/2, `(1-x)/x` above.
pub fn farey(x: &Scalar) -> Result<Scalar, IetError> {
    in_open_unit(x)?;
    let one = Scalar::one();
    match x.try_cmp(&half())? {
        std::cmp::Ordering::Less => Ok(x / &(&one - x)),
        std::cmp::Ordering::Greater => Ok(&(&one - x) / x),
        std::cmp::Ordering::Equal => Err(IetError::BranchBoundary),
    }
}

/// Gauss map `{1/x}`.
pub fn gauss(x: &Scalar) -> Result<Scalar, IetError> {
    in_open_unit(x)?;
    Ok(x.recip()?.fract())
}

/// Accelerated induction map with its branch digit.
///
/// The branches are `P_k = (1/(k+2), 1/(k+1))` below one half and
/// `Q_k = (k/(k+1), (k+1)/(k+2))` above; the digit is the branch index.
/// Values on a branch boundary are an error.
pub fn torus_fast(x: &Scalar) -> Result<(Scalar, u64), IetError> {
    in_open_unit(x)?;
    let one = Scalar::one();
    match x.try_cmp(&half())? {
        std::cmp::Ordering::Less => {
            let inv = x.recip()?;
            let frac = inv.fract();
            if frac.is_zero() {
                return Err(IetError::BranchBoundary);
            }
            let k = inv
                .floor_int()
                .to_u64()
                .expect("digit fits in u64")
                .checked_sub(1)
                .expect("x < 1/2 means floor(1/x) >= 2");
            Ok(((frac + one).recip()?, k))
        }
        std::cmp::Ordering::Greater => {
            let r = x / &(&one - x);
            let frac = r.fract();
            if frac.is_zero() {
                return Err(IetError::BranchBoundary);
            }
            let k = r.floor_int().to_u64().expect("digit fits in u64");
            let inv = (frac + one.clone()).recip()?;
            Ok((one - inv, k))
        }
        std::cmp::Ordering::Equal => Err(IetError::BranchBoundary),
    }
}

/// Continued-fraction digits read from the accelerated induction map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfExpansion {
    pub digits: Vec<u64>,
    /// True when the expansion of a rational ran out before the requested
    /// digit count.
    pub terminated: bool,
}

/// First `n` continued-fraction digits of `x` in (0,1), computed by
/// iterating the accelerated induction map on the preimage `x/(1+x)`
/// under the Farey map. Rational inputs terminate cleanly with a flag.
pub fn cf_digits(x: &Scalar, n: usize) -> Result<CfExpansion, IetError> {
    in_open_unit(x)?;
    // Of the two Farey preimages we take the smaller one, x/(1+x) < 1/2.
    let mut y = x / &(Scalar::one() + x.clone());
    let mut digits = Vec::with_capacity(n);
    while digits.len() < n {
        match torus_fast(&y) {
            Ok((next, k)) => {
                digits.push(k);
                y = next;
            }
            Err(IetError::BranchBoundary) => {
                // On a boundary the tail is exactly one more digit:
                // y = 1/(k+1) or k/(k+1) both push forward to 1/k.
                let last = if y.try_cmp(&half())? == std::cmp::Ordering::Less {
                    y.recip()?.floor_int().to_u64().unwrap() - 1
                } else if y.try_cmp(&half())? == std::cmp::Ordering::Equal {
                    1
                } else {
                    (&y / &(Scalar::one() - y.clone()))
                        .floor_int()
                        .to_u64()
                        .unwrap()
                };
                digits.push(last);
                return Ok(CfExpansion {
                    digits,
                    terminated: true,
                });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(CfExpansion {
        digits,
        terminated: false,
    })
}

/// Independent digit oracle: iterate the Gauss map directly.
pub fn gauss_digits(x: &Scalar, n: usize) -> Result<CfExpansion, IetError> {
    in_open_unit(x)?;
    let mut digits = Vec::with_capacity(n);
    let mut y = x.clone();
    while digits.len() < n {
        if y.is_zero() {
            return Ok(CfExpansion {
                digits,
                terminated: true,
            });
        }
        let inv = y.recip()?;
        digits.push(inv.floor_int().to_u64().expect("digit fits in u64"));
        y = inv.fract();
    }
    Ok(CfExpansion {
        digits,
        terminated: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Scalar {
        Scalar::Rat(Rational::new(n, d))
    }

    fn sqrt(n: i64) -> Scalar {
        Scalar::sqrt_int(n).unwrap()
    }

    #[test]
    fn slow_branches() {
        assert_eq!(torus_slow(&rat(1, 3)).unwrap(), rat(1, 2));
        assert_eq!(torus_slow(&rat(3, 4)).unwrap(), rat(2, 3));
        assert!(matches!(torus_slow(&rat(1, 2)), Err(IetError::Tie(_))));
        // neutral fixed point at the origin: image exceeds input nearby
        let eps = rat(1, 1000);
        let img = torus_slow(&eps).unwrap();
        assert_eq!(img.cmp_exact(&eps), std::cmp::Ordering::Greater);
    }

    #[test]
    fn farey_gauss_values() {
        assert_eq!(farey(&rat(2, 5)).unwrap(), rat(2, 3));
        assert_eq!(gauss(&rat(1, 2)).unwrap(), Scalar::zero());
        // gauss(sqrt6 - 2) = (sqrt6 - 2)/2
        let x = sqrt(6) - Scalar::from_int(2);
        let expect = (sqrt(6) - Scalar::from_int(2)) / Scalar::from_int(2);
        assert_eq!(gauss(&x).unwrap(), expect);
    }

    #[test]
    fn fast_follows_the_worked_example() {
        // (4 - sqrt6)/5 lies in P_2 and maps to sqrt6/3
        let x = (Scalar::from_int(4) - sqrt(6)) / Scalar::from_int(5);
        let (v, k) = torus_fast(&x).unwrap();
        assert_eq!(k, 2);
        assert_eq!(v, sqrt(6) / Scalar::from_int(3));
        // sqrt6/3 lies in Q_4 and maps back
        let (w, k) = torus_fast(&v).unwrap();
        assert_eq!(k, 4);
        assert_eq!(w, x);
    }

    #[test]
    fn fast_golden_orbit() {
        // The golden length has digit 1 everywhere; the value itself
        // alternates between g and 1-g (period two, not a fixed point).
        let g = (sqrt(5) - Scalar::one()) / Scalar::from_int(2);
        let (v, k) = torus_fast(&g).unwrap();
        assert_eq!(k, 1);
        assert_eq!(v, Scalar::one() - g.clone());
        let (w, k) = torus_fast(&v).unwrap();
        assert_eq!(k, 1);
        assert_eq!(w, g);
    }

    #[test]
    fn digits_match_gauss_oracle() {
        let x = sqrt(6) - Scalar::from_int(2);
        let via_rv = cf_digits(&x, 6).unwrap();
        let via_gauss = gauss_digits(&x, 6).unwrap();
        assert_eq!(via_rv, via_gauss);
        assert_eq!(via_rv.digits, vec![2, 4, 2, 4, 2, 4]);

        let g = (sqrt(5) - Scalar::one()) / Scalar::from_int(2);
        assert_eq!(cf_digits(&g, 5).unwrap().digits, vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn rational_terminates() {
        let e = cf_digits(&rat(2, 5), 2).unwrap();
        assert_eq!(e.digits, vec![2, 2]);
        let e = cf_digits(&rat(2, 5), 10).unwrap();
        assert_eq!(e.digits, vec![2, 2]);
        assert!(e.terminated);
        assert_eq!(gauss_digits(&rat(2, 5), 10).unwrap().digits, vec![2, 2]);
    }

    #[test]
    fn factor_diagrams_hold_on_rationals() {
        // F(T(x)) = F(F(x)) and F(G_fast(x)) = Gauss(F(x)) away from
        // branch boundaries.
        let mut checked = 0;
        for num in 1..60i64 {
            for den in (num + 1)..60i64 {
                let x = rat(num, den);
                let Ok(tx) = torus_slow(&x) else { continue };
                let Ok(fx) = farey(&x) else { continue };
                let (Ok(lhs), Ok(rhs)) = (farey(&tx), farey(&fx)) else {
                    continue;
                };
                assert_eq!(lhs, rhs, "slow factor diagram at {x}");
                if let Ok((gx, _)) = torus_fast(&x) {
                    if let (Ok(lhs), Ok(rhs)) = (farey(&gx), gauss(&fx)) {
                        assert_eq!(lhs, rhs, "fast factor diagram at {x}");
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 1000);
    }
}
