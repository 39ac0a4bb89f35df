use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Enclosure, NumError, QuadScalar, Rational};

/// Exact-first scalar: a rational, an element of one real quadratic field,
/// or a float enclosure for values that left the exact world (logarithms,
/// certified eigenvalues).
///
/// Exact variants never silently degrade: arithmetic between two exact
/// operands stays exact, and only an operation with an [`Enclosure`]
/// operand produces an enclosure. Mixing two distinct quadratic fields is
/// a hard error.
#[derive(Clone, PartialEq)]
pub enum Scalar {
    Rat(Rational),
    Quad(QuadScalar),
    Approx(Enclosure),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rat(Rational::from_int(n))
    }

    pub fn sqrt_int(n: i64) -> Result<Self, NumError> {
        QuadScalar::sqrt_int(n)
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Scalar::Approx(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Quad(q) => q.is_zero(),
            Scalar::Approx(e) => e.value == 0.0 && e.radius == 0.0,
        }
    }

    /// Field tag: `None` for rationals and enclosures, `Some(d)` in Q(sqrt d).
    pub fn field(&self) -> Option<u64> {
        match self {
            Scalar::Quad(q) => Some(q.d),
            _ => None,
        }
    }

    /// Normalizes `Quad` values with zero irrational part down to `Rat`.
    pub fn reduce(self) -> Self {
        match self {
            Scalar::Quad(q) if q.is_rational() => Scalar::Rat(q.a),
            s => s,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rat(r) => r.to_f64(),
            Scalar::Quad(q) => q.to_f64(),
            Scalar::Approx(e) => e.value,
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rat(r) => Some(r),
            _ => None,
        }
    }

    fn binop(
        &self,
        rhs: &Self,
        rat: impl Fn(&Rational, &Rational) -> Rational,
        quad: impl Fn(&QuadScalar, &QuadScalar) -> Result<QuadScalar, NumError>,
        approx: impl Fn(&Enclosure, &Enclosure) -> Enclosure,
    ) -> Result<Scalar, NumError> {
        use Scalar::*;
        Ok(match (self, rhs) {
            (Rat(a), Rat(b)) => Rat(rat(a, b)),
            (Quad(a), Quad(b)) => Quad(quad(a, b)?).reduce(),
            (Quad(a), Rat(b)) => {
                Quad(quad(a, &QuadScalar::from_rational(b.clone(), a.d))?).reduce()
            }
            (Rat(a), Quad(b)) => {
                Quad(quad(&QuadScalar::from_rational(a.clone(), b.d), b)?).reduce()
            }
            (a, b) => Approx(approx(&a.enclose(), &b.enclose())),
        })
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Scalar, NumError> {
        self.binop(rhs, |a, b| a + b, |a, b| a.checked_add(b), |a, b| a.add(b))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Scalar, NumError> {
        self.binop(rhs, |a, b| a - b, |a, b| a.checked_sub(b), |a, b| a.sub(b))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Scalar, NumError> {
        self.binop(rhs, |a, b| a * b, |a, b| a.checked_mul(b), |a, b| a.mul(b))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Scalar, NumError> {
        if rhs.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        self.binop(rhs, |a, b| a / b, |a, b| a.checked_div(b), |a, b| a.div(b))
    }

    /// Enclosure view; exact only at this explicit boundary.
    pub fn enclose(&self) -> Enclosure {
        match self {
            Scalar::Rat(r) => Enclosure::exact(r.to_f64()),
            Scalar::Quad(q) => Enclosure::exact(q.to_f64()),
            Scalar::Approx(e) => *e,
        }
    }

    /// Exact sign for exact variants; decidable enclosures only.
    pub fn try_signum(&self) -> Result<i8, NumError> {
        match self {
            Scalar::Rat(r) => Ok(r.signum()),
            Scalar::Quad(q) => Ok(q.signum()),
            Scalar::Approx(e) => e.signum().ok_or(NumError::UndecidedComparison),
        }
    }

    pub fn signum(&self) -> i8 {
        self.try_signum().expect("undecidable sign")
    }

    /// Exact trichotomy; for quadratic values decided without floating point.
    pub fn try_cmp(&self, rhs: &Self) -> Result<Ordering, NumError> {
        let diff = self.checked_sub(rhs)?;
        Ok(match diff.try_signum()? {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        })
    }

    pub fn cmp_exact(&self, rhs: &Self) -> Ordering {
        self.try_cmp(rhs).expect("scalar comparison failed")
    }

    pub fn abs(&self) -> Scalar {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn square(&self) -> Scalar {
        self.checked_mul(self).expect("square is field-closed")
    }

    pub fn recip(&self) -> Result<Scalar, NumError> {
        Scalar::one().checked_div(self)
    }

    pub fn min(self, other: Scalar) -> Scalar {
        if self.cmp_exact(&other) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Scalar) -> Scalar {
        if self.cmp_exact(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    /// Exact floor (exact variants only).
    pub fn floor_int(&self) -> num_bigint::BigInt {
        match self {
            Scalar::Rat(r) => r.floor(),
            Scalar::Quad(q) => q.floor(),
            Scalar::Approx(_) => panic!("floor of an enclosure"),
        }
    }

    /// Fractional part `self - floor(self)`.
    pub fn fract(&self) -> Scalar {
        let f = Scalar::Rat(Rational::from(self.floor_int()));
        self.checked_sub(&f).expect("fract is field-closed")
    }

    /// Natural log as a certified enclosure.
    pub fn ln_enclosure(&self) -> Enclosure {
        self.enclose().ln()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Quad(q) => write!(f, "{q}"),
            Scalar::Approx(e) => write!(f, "{e}"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Eq for Scalar {}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rat(r)
    }
}

impl From<QuadScalar> for Scalar {
    fn from(q: QuadScalar) -> Self {
        Scalar::Quad(q).reduce()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$checked(&rhs).expect("scalar arithmetic failed")
            }
        }
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                self.$checked(rhs).expect("scalar arithmetic failed")
            }
        }
    };
}

scalar_binop!(Add, add, checked_add);
scalar_binop!(Sub, sub, checked_sub);
scalar_binop!(Mul, mul, checked_mul);
scalar_binop!(Div, div, checked_div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Quad(q) => Scalar::Quad(-q),
            Scalar::Approx(e) => Scalar::Approx(e.neg()),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

// JSON encoding: {"q":"p/q"} or {"a":"p/q","b":"r/s","d":n}.
// Enclosures are never serialized as ground truth.
impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        match self {
            Scalar::Rat(r) => {
                let mut m = serializer.serialize_map(Some(1))?;
                m.serialize_entry("q", &format!("{}/{}", r.numer(), r.denom()))?;
                m.end()
            }
            Scalar::Quad(q) => {
                let mut m = serializer.serialize_map(Some(3))?;
                m.serialize_entry("a", &format!("{}/{}", q.a.numer(), q.a.denom()))?;
                m.serialize_entry("b", &format!("{}/{}", q.b.numer(), q.b.denom()))?;
                m.serialize_entry("d", &q.d)?;
                m.end()
            }
            Scalar::Approx(_) => Err(serde::ser::Error::custom(
                "refusing to serialize a float enclosure as ground truth",
            )),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            q: Option<String>,
            a: Option<String>,
            b: Option<String>,
            d: Option<u64>,
        }
        let r = Repr::deserialize(deserializer)?;
        match (r.q, r.a, r.b, r.d) {
            (Some(q), None, None, None) => {
                Ok(Scalar::Rat(Rational::parse(&q).map_err(D::Error::custom)?))
            }
            (None, Some(a), Some(b), Some(d)) => {
                let a = Rational::parse(&a).map_err(D::Error::custom)?;
                let b = Rational::parse(&b).map_err(D::Error::custom)?;
                if d < 2 {
                    return Err(D::Error::custom("field tag must be square-free and > 1"));
                }
                Ok(Scalar::Quad(QuadScalar::new(a, b, d)).reduce())
            }
            _ => Err(D::Error::custom(
                "scalar must be {\"q\":..} or {\"a\":..,\"b\":..,\"d\":..}",
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt(n: i64) -> Scalar {
        Scalar::sqrt_int(n).unwrap()
    }

    #[test]
    fn cmp_examples() {
        // sqrt(2)/2 vs 7/10
        let x = sqrt(2) / Scalar::from_int(2);
        let y = Scalar::Rat(Rational::new(7, 10));
        assert_eq!(x.cmp_exact(&y), Ordering::Greater);
        // equal rationals
        assert_eq!(
            Scalar::Rat(Rational::new(1, 2)).cmp_exact(&Scalar::Rat(Rational::new(1, 2))),
            Ordering::Equal
        );
        // 2 - sqrt(5) < 0
        let z = Scalar::from_int(2) - sqrt(5);
        assert_eq!(z.cmp_exact(&Scalar::zero()), Ordering::Less);
    }

    #[test]
    fn mixed_fields_error() {
        let a = sqrt(2);
        let b = sqrt(3);
        assert!(matches!(
            a.checked_add(&b),
            Err(NumError::MixedFields(2, 3))
        ));
    }

    #[test]
    fn exact_stays_exact() {
        let x = (sqrt(5) - Scalar::one()) / Scalar::from_int(2);
        let y = x.square() + x.clone(); // g^2 + g = 1 for the golden ratio
        assert_eq!(y, Scalar::one());
        assert!(y.is_exact());
    }

    #[test]
    fn json_round_trip() {
        let x = (sqrt(6) - Scalar::from_int(2)).reduce();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"a":"-2/1","b":"1/1","d":6}"#);
        let back: Scalar = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        let r = Scalar::Rat(Rational::new(-3, 10));
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"q":"-3/10"}"#);
        assert_eq!(serde_json::from_str::<Scalar>(&s).unwrap(), r);
    }

    #[test]
    fn enclosure_never_serialized() {
        let e = Scalar::Approx(Enclosure::new(1.5, 1e-9));
        assert!(serde_json::to_string(&e).is_err());
    }
}
