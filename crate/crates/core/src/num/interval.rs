use std::fmt;

/// A float with an explicit error radius: the represented value lies in
/// `[value - radius, value + radius]`.
///
/// Arithmetic widens the radius conservatively (one ulp-scale slack per
/// operation); exact scalars are converted through [`Enclosure::exact`]
/// only at explicit boundaries, never implicitly.
#[derive(Clone, Copy, PartialEq)]
pub struct Enclosure {
    pub value: f64,
    pub radius: f64,
}

const SLACK: f64 = f64::EPSILON * 4.0;

impl Enclosure {
    pub fn new(value: f64, radius: f64) -> Self {
        Enclosure {
            value,
            radius: radius.abs(),
        }
    }

    /// Encloses an f64 that was itself rounded from an exact value.
    pub fn exact(value: f64) -> Self {
        Enclosure::new(value, value.abs() * SLACK + f64::MIN_POSITIVE)
    }

    pub fn lo(&self) -> f64 {
        self.value - self.radius
    }

    pub fn hi(&self) -> f64 {
        self.value + self.radius
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo() <= x && x <= self.hi()
    }

    fn widen(value: f64, radius: f64) -> Self {
        Enclosure::new(value, radius + value.abs() * SLACK + f64::MIN_POSITIVE)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::widen(self.value + rhs.value, self.radius + rhs.radius)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self::widen(self.value - rhs.value, self.radius + rhs.radius)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let r = self.value.abs() * rhs.radius
            + rhs.value.abs() * self.radius
            + self.radius * rhs.radius;
        Self::widen(self.value * rhs.value, r)
    }

    pub fn div(&self, rhs: &Self) -> Self {
        assert!(
            rhs.lo() > 0.0 || rhs.hi() < 0.0,
            "division by enclosure containing zero"
        );
        let inv = 1.0 / rhs.value;
        let inv_r = rhs.radius / (rhs.lo().abs().min(rhs.hi().abs()).powi(2));
        self.mul(&Enclosure::new(inv, inv_r))
    }

    pub fn neg(&self) -> Self {
        Enclosure::new(-self.value, self.radius)
    }

    pub fn ln(&self) -> Self {
        assert!(self.lo() > 0.0, "log of enclosure touching zero");
        let r = (self.hi().ln() - self.lo().ln()) / 2.0;
        Self::widen((self.lo().ln() + self.hi().ln()) / 2.0, r)
    }

    /// Sign if decidable (enclosure does not straddle zero).
    pub fn signum(&self) -> Option<i8> {
        if self.lo() > 0.0 {
            Some(1)
        } else if self.hi() < 0.0 {
            Some(-1)
        } else if self.radius == 0.0 && self.value == 0.0 {
            Some(0)
        } else {
            None
        }
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:.3e}", self.value, self.radius)
    }
}

impl fmt::Debug for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
