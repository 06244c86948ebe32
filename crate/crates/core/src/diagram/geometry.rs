//! Exact plane geometry with a symbolic infinitesimal.
//!
//! Basepoints sit at distance `ε` from lattice lines. Coordinates are kept as
//! `a + b·ε` with rational `a`, `b` and compared lexicographically, which is the
//! ordering for every sufficiently small positive `ε`.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Rational64;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Eps {
    pub re: Rational64,
    pub eps: Rational64,
}

impl Eps {
    pub fn new(re: Rational64, eps: Rational64) -> Self {
        Eps { re, eps }
    }

    pub fn rat(re: Rational64) -> Self {
        Eps {
            re,
            eps: Rational64::zero(),
        }
    }

    pub fn int(n: i64) -> Self {
        Self::rat(Rational64::from_integer(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::rat(Rational64::new(n, d))
    }

    pub fn scale(self, k: Rational64) -> Self {
        Eps {
            re: self.re * k,
            eps: self.eps * k,
        }
    }

    pub fn signum(&self) -> i64 {
        match self.cmp(&Eps::int(0)) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    /// Largest integer `n` with `n <= self`.
    pub fn floor(&self) -> i64 {
        let f = self.re.floor().to_integer();
        if Rational64::from_integer(f) == self.re && self.eps.is_negative() {
            f - 1
        } else {
            f
        }
    }

    /// Smallest integer `n` with `n >= self`.
    pub fn ceil(&self) -> i64 {
        -(-*self).floor()
    }

    /// Representative in `[0, 1)`.
    pub fn fract(&self) -> Eps {
        *self - Eps::int(self.floor())
    }

    pub fn is_integer(&self) -> bool {
        self.eps.is_zero() && self.re.is_integer()
    }

    /// Number of integers `n` with `lo < n < hi`.
    pub fn integers_strictly_between(lo: Eps, hi: Eps) -> i64 {
        if hi <= lo {
            return 0;
        }
        let first = lo.floor() + 1;
        let last = hi.ceil() - 1;
        (last - first + 1).max(0)
    }
}

impl PartialOrd for Eps {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Eps {
    fn cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then(self.eps.cmp(&other.eps))
    }
}

impl Add for Eps {
    type Output = Eps;
    fn add(self, o: Eps) -> Eps {
        Eps {
            re: self.re + o.re,
            eps: self.eps + o.eps,
        }
    }
}

impl Sub for Eps {
    type Output = Eps;
    fn sub(self, o: Eps) -> Eps {
        Eps {
            re: self.re - o.re,
            eps: self.eps - o.eps,
        }
    }
}

impl Neg for Eps {
    type Output = Eps;
    fn neg(self) -> Eps {
        Eps {
            re: -self.re,
            eps: -self.eps,
        }
    }
}

impl Mul<Rational64> for Eps {
    type Output = Eps;
    fn mul(self, k: Rational64) -> Eps {
        self.scale(k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Eps,
    pub y: Eps,
}

impl Point {
    pub fn new(x: Eps, y: Eps) -> Self {
        Point { x, y }
    }

    pub fn translate(self, dx: Eps, dy: Eps) -> Point {
        Point {
            x: self.x + dx,
            y: self.y + dy,
        }
    }

    /// Same point of the torus `R^2 / Z^2`.
    pub fn congruent(&self, other: &Point) -> bool {
        (self.x - other.x).is_integer() && (self.y - other.y).is_integer()
    }
}
