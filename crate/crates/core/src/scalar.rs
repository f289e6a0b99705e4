//! Exact scalars in `Q(√2)`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_rational::Rational64;
use num_traits::{One, Zero};

/// `a + b·√2` with rational `a`, `b`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ScalarQ2 {
    pub a: Rational64,
    pub b: Rational64,
}

impl ScalarQ2 {
    pub fn new(a: Rational64, b: Rational64) -> Self {
        ScalarQ2 { a, b }
    }

    pub fn int(n: i64) -> Self {
        ScalarQ2 { a: Rational64::from_integer(n), b: Rational64::zero() }
    }

    pub fn rational(num: i64, den: i64) -> Self {
        ScalarQ2 { a: Rational64::new(num, den), b: Rational64::zero() }
    }

    pub fn sqrt2() -> Self {
        ScalarQ2 { a: Rational64::zero(), b: Rational64::one() }
    }

    /// `1/√2 = √2/2`.
    pub fn inv_sqrt2() -> Self {
        ScalarQ2 { a: Rational64::zero(), b: Rational64::new(1, 2) }
    }

    pub fn conj(self) -> Self {
        ScalarQ2 { a: self.a, b: -self.b }
    }

    /// `a² - 2b²`, nonzero for nonzero scalars since √2 is irrational.
    pub fn norm(self) -> Rational64 {
        self.a * self.a - Rational64::from_integer(2) * self.b * self.b
    }

    pub fn inv(self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conj();
        Some(ScalarQ2 { a: c.a / n, b: c.b / n })
    }
}

impl Zero for ScalarQ2 {
    fn zero() -> Self {
        ScalarQ2::default()
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for ScalarQ2 {
    fn one() -> Self {
        ScalarQ2::int(1)
    }
}

impl Add for ScalarQ2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        ScalarQ2 { a: self.a + o.a, b: self.b + o.b }
    }
}

impl AddAssign for ScalarQ2 {
    fn add_assign(&mut self, o: Self) {
        self.a += o.a;
        self.b += o.b;
    }
}

impl Sub for ScalarQ2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        ScalarQ2 { a: self.a - o.a, b: self.b - o.b }
    }
}

impl Neg for ScalarQ2 {
    type Output = Self;
    fn neg(self) -> Self {
        ScalarQ2 { a: -self.a, b: -self.b }
    }
}

impl Mul for ScalarQ2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let two = Rational64::from_integer(2);
        ScalarQ2 { a: self.a * o.a + two * self.b * o.b, b: self.a * o.b + self.b * o.a }
    }
}

impl Div for ScalarQ2 {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self * o.inv().expect("division by zero in Q(√2)")
    }
}

impl From<i64> for ScalarQ2 {
    fn from(n: i64) -> Self {
        ScalarQ2::int(n)
    }
}

impl fmt::Debug for ScalarQ2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}√2", self.b),
            (false, false) => write!(f, "{}+{}√2", self.a, self.b),
        }
    }
}

impl fmt::Display for ScalarQ2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_squares_to_two() {
        assert_eq!(ScalarQ2::sqrt2() * ScalarQ2::sqrt2(), ScalarQ2::int(2));
        assert_eq!(ScalarQ2::inv_sqrt2() * ScalarQ2::inv_sqrt2(), ScalarQ2::rational(1, 2));
    }

    #[test]
    fn inverse() {
        let x = ScalarQ2::int(3) + ScalarQ2::sqrt2();
        assert_eq!(x * x.inv().unwrap(), ScalarQ2::one());
        assert_eq!(ScalarQ2::zero().inv(), None);
        assert_eq!(ScalarQ2::int(1) / ScalarQ2::sqrt2(), ScalarQ2::inv_sqrt2());
    }
}
