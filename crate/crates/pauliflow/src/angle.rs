//! Exact angles as rational multiples of pi.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::Ratio;

use crate::error::{Error, Result};

/// A rational multiple of pi, reduced modulo `2 pi`.
///
/// Angles only ever parametrise rotations that are compared up to global
/// phase, so `2 pi` periodicity is the right quotient.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Angle(Ratio<i64>);

impl Angle {
    /// `num/den * pi`. Fails on a zero denominator.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidAngle(format!("{num}/0")));
        }
        Ok(Self::from_ratio(Ratio::new(num, den)))
    }

    pub fn from_ratio(r: Ratio<i64>) -> Self {
        let two = Ratio::from_integer(2);
        let q = (r / two).floor();
        Angle(r - q * two)
    }

    pub const fn zero() -> Self {
        Angle(Ratio::new_raw(0, 1))
    }

    pub fn pi() -> Self {
        Angle(Ratio::new_raw(1, 1))
    }

    pub fn half_pi() -> Self {
        Angle(Ratio::new_raw(1, 2))
    }

    pub fn quarter_pi() -> Self {
        Angle(Ratio::new_raw(1, 4))
    }

    /// Multiple `k` of `pi/2`.
    pub fn quarter_turns(k: i64) -> Self {
        Self::from_ratio(Ratio::new(k, 2))
    }

    pub fn num(&self) -> i64 {
        *self.0.numer()
    }

    pub fn den(&self) -> i64 {
        *self.0.denom()
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.num() == 0
    }

    /// Denominator divides 2: the rotation it parametrises is a Clifford.
    pub fn is_clifford(&self) -> bool {
        self.den() <= 2
    }

    /// `0` or `pi`.
    pub fn is_pauli(&self) -> bool {
        self.den() == 1
    }

    /// For Clifford angles, the number of `pi/2` steps in `0..4`.
    pub fn quarter_index(&self) -> Option<u8> {
        if !self.is_clifford() {
            return None;
        }
        let r = self.0 * Ratio::from_integer(2);
        Some((*r.numer()).rem_euclid(4) as u8)
    }

    pub fn radians(&self) -> f64 {
        self.num() as f64 / self.den() as f64 * std::f64::consts::PI
    }

    /// Snap a value in radians to the nearest rational with denominator up to
    /// `max_den`, rejecting values further than `tol` from any candidate.
    pub fn from_radians(x: f64, max_den: i64, tol: f64) -> Result<Self> {
        let t = x / std::f64::consts::PI;
        for den in 1..=max_den {
            let num = (t * den as f64).round();
            if ((num / den as f64) - t).abs() * std::f64::consts::PI <= tol {
                return Self::new(num as i64, den);
            }
        }
        Err(Error::InvalidAngle(format!("{x} is not a rational multiple of pi")))
    }
}

impl Default for Angle {
    fn default() -> Self {
        Angle::zero()
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        Angle::from_ratio(self.0 + rhs.0)
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        Angle::from_ratio(self.0 - rhs.0)
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle::from_ratio(-self.0)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.num(), self.den()) {
            (0, _) => write!(f, "0"),
            (1, 1) => write!(f, "pi"),
            (n, 1) => write!(f, "{n}pi"),
            (1, d) => write!(f, "pi/{d}"),
            (n, d) => write!(f, "{n}pi/{d}"),
        }
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
