use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::{NumError, Rational};

/// Element `a + b*sqrt(d)` of the real quadratic field Q(sqrt(d)).
///
/// `d` is a positive square-free integer fixed per value; arithmetic is
/// closed within one field and mixing two distinct fields is an error.
/// Sign and comparison are decided exactly, without floating point.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadScalar {
    pub a: Rational,
    pub b: Rational,
    pub d: u64,
}

/// Splits `n = s^2 * d` with `d` square-free; returns `(s, d)`.
fn squarefree_part(n: u64) -> (u64, u64) {
    let mut s = 1u64;
    let mut d = n;
    let mut p = 2u64;
    while p * p <= d {
        while d.is_multiple_of(p * p) {
            d /= p * p;
            s *= p;
        }
        p += 1;
    }
    (s, d)
}

impl QuadScalar {
    pub fn new(a: Rational, b: Rational, d: u64) -> Self {
        debug_assert!(d > 1, "field tag must be a square-free integer > 1");
        QuadScalar { a, b, d }
    }

    /// `sqrt(n)` for a non-negative integer `n`, reduced to a square-free tag.
    /// Returns a rational when `n` is a perfect square.
    pub fn sqrt_int(n: i64) -> Result<super::Scalar, NumError> {
        if n < 0 {
            return Err(NumError::NegativeSqrt(n));
        }
        let (s, d) = squarefree_part(n as u64);
        if d == 1 {
            Ok(super::Scalar::from(Rational::from_int(s as i64)))
        } else {
            Ok(super::Scalar::Quad(QuadScalar::new(
                Rational::zero(),
                Rational::from_int(s as i64),
                d,
            )))
        }
    }

    pub fn from_rational(r: Rational, d: u64) -> Self {
        QuadScalar::new(r, Rational::zero(), d)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a - b*sqrt(d)`.
    pub fn conjugate(&self) -> Self {
        QuadScalar::new(self.a.clone(), -&self.b, self.d)
    }

    /// Field norm `a^2 - b^2 d`.
    pub fn norm(&self) -> Rational {
        self.a.square() - self.b.square() * Rational::from_int(self.d as i64)
    }

    /// Exact sign: compares `a` against `-b*sqrt(d)` by squaring.
    pub fn signum(&self) -> i8 {
        let sa = self.a.signum();
        let sb = self.b.signum();
        if sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        // Opposite signs: |a| vs |b| sqrt(d) decided on squares.
        match self
            .a
            .square()
            .cmp(&(self.b.square() * Rational::from_int(self.d as i64)))
        {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, NumError> {
        self.same_field(rhs)?;
        Ok(QuadScalar::new(&self.a + &rhs.a, &self.b + &rhs.b, self.d))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, NumError> {
        self.same_field(rhs)?;
        Ok(QuadScalar::new(&self.a - &rhs.a, &self.b - &rhs.b, self.d))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, NumError> {
        self.same_field(rhs)?;
        let d = Rational::from_int(self.d as i64);
        Ok(QuadScalar::new(
            &self.a * &rhs.a + &(&self.b * &rhs.b) * &d,
            &self.a * &rhs.b + &self.b * &rhs.a,
            self.d,
        ))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, NumError> {
        self.same_field(rhs)?;
        if rhs.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        // 1/(a+b sqrt d) = (a - b sqrt d)/norm
        let n = rhs.norm();
        debug_assert!(!n.is_zero(), "norm of nonzero quadratic is nonzero");
        let inv = QuadScalar::new(&rhs.a / &n, -&(&rhs.b / &n), rhs.d);
        self.checked_mul(&inv)
    }

    fn same_field(&self, rhs: &Self) -> Result<(), NumError> {
        if self.d != rhs.d {
            Err(NumError::MixedFields(self.d, rhs.d))
        } else {
            Ok(())
        }
    }

    pub fn cmp_exact(&self, rhs: &Self) -> Result<Ordering, NumError> {
        Ok(match self.checked_sub(rhs)?.signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        })
    }

    /// Exact floor via the sign test on `self - n`.
    pub fn floor(&self) -> num_bigint::BigInt {
        let mut n = num_bigint::BigInt::from(self.to_f64().floor() as i64);
        // Float estimate can be off by one near integers; fix up exactly.
        loop {
            let lower = self
                .checked_sub(&QuadScalar::from_rational(
                    Rational::from(n.clone()),
                    self.d,
                ))
                .unwrap();
            if lower.signum() < 0 {
                n -= 1;
                continue;
            }
            let upper = self
                .checked_sub(&QuadScalar::from_rational(Rational::from(&n + 1), self.d))
                .unwrap();
            if upper.signum() >= 0 {
                n += 1;
                continue;
            }
            return n;
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * (self.d as f64).sqrt()
    }
}

impl fmt::Display for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}*sqrt({})", self.b, self.d);
        }
        if self.b.signum() < 0 {
            write!(f, "{} - {}*sqrt({})", self.a, self.b.abs(), self.d)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

impl fmt::Debug for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! panicking_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for QuadScalar {
            type Output = QuadScalar;
            fn $method(self, rhs: QuadScalar) -> QuadScalar {
                self.$checked(&rhs).expect("quadratic field mismatch")
            }
        }
        impl<'a> $trait<&'a QuadScalar> for &'a QuadScalar {
            type Output = QuadScalar;
            fn $method(self, rhs: &'a QuadScalar) -> QuadScalar {
                self.$checked(rhs).expect("quadratic field mismatch")
            }
        }
    };
}

panicking_binop!(Add, add, checked_add);
panicking_binop!(Sub, sub, checked_sub);
panicking_binop!(Mul, mul, checked_mul);
panicking_binop!(Div, div, checked_div);

impl Neg for QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        QuadScalar::new(-self.a, -self.b, self.d)
    }
}

impl Neg for &QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        QuadScalar::new(-&self.a, -&self.b, self.d)
    }
}
