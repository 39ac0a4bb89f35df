use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::Scalar;

/// Planar vector with exact coordinates; `x` is the signed width and `y`
/// the signed height of a holonomy or displacement vector.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarVec {
    pub x: Scalar,
    pub y: Scalar,
}

impl PlanarVec {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        PlanarVec { x, y }
    }

    pub fn zero() -> Self {
        PlanarVec::new(Scalar::zero(), Scalar::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Cross product `self.x * rhs.y - self.y * rhs.x`.
    pub fn cross(&self, rhs: &PlanarVec) -> Scalar {
        &(&self.x * &rhs.y) - &(&self.y * &rhs.x)
    }

    pub fn dot(&self, rhs: &PlanarVec) -> Scalar {
        &(&self.x * &rhs.x) + &(&self.y * &rhs.y)
    }

    pub fn norm_sq(&self) -> Scalar {
        self.dot(self)
    }

    /// Quarter turn `i * v = (-y, x)`.
    pub fn rot90(&self) -> PlanarVec {
        PlanarVec::new(-&self.y, self.x.clone())
    }

    /// Scales x by `f` and y by `1/f` (the Teichmüller action `g_t` with
    /// `f = e^t`).
    pub fn teich_scale(&self, f: &Scalar) -> PlanarVec {
        PlanarVec::new(
            &self.x * f,
            self.y.checked_div(f).expect("flow factor is nonzero"),
        )
    }

    pub fn scale(&self, f: &Scalar) -> PlanarVec {
        PlanarVec::new(&self.x * f, &self.y * f)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl fmt::Display for PlanarVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Debug for PlanarVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &PlanarVec {
    type Output = PlanarVec;
    fn add(self, rhs: &PlanarVec) -> PlanarVec {
        PlanarVec::new(&self.x + &rhs.x, &self.y + &rhs.y)
    }
}

impl Add for PlanarVec {
    type Output = PlanarVec;
    fn add(self, rhs: PlanarVec) -> PlanarVec {
        &self + &rhs
    }
}

impl Sub for &PlanarVec {
    type Output = PlanarVec;
    fn sub(self, rhs: &PlanarVec) -> PlanarVec {
        PlanarVec::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

impl Sub for PlanarVec {
    type Output = PlanarVec;
    fn sub(self, rhs: PlanarVec) -> PlanarVec {
        &self - &rhs
    }
}

impl Neg for &PlanarVec {
    type Output = PlanarVec;
    fn neg(self) -> PlanarVec {
        PlanarVec::new(-&self.x, -&self.y)
    }
}

impl Neg for PlanarVec {
    type Output = PlanarVec;
    fn neg(self) -> PlanarVec {
        -&self
    }
}

impl Mul<&Scalar> for &PlanarVec {
    type Output = PlanarVec;
    fn mul(self, rhs: &Scalar) -> PlanarVec {
        self.scale(rhs)
    }
}
