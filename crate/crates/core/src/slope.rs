//! Slopes of curves inside a complexity-one piece, and the integral
//! unimodular action of twists on them.
//!
//! A slope is a reduced fraction `p/q` with `q >= 0`; the curve at infinity
//! is stored as `1/0`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slope {
    p: i64,
    q: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b)`.
pub(crate) fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

impl Slope {
    pub const ZERO: Slope = Slope { p: 0, q: 1 };
    pub const INFINITY: Slope = Slope { p: 1, q: 0 };

    /// Builds a slope from any nonzero integer vector, reducing and
    /// normalising the sign.
    pub fn new(p: i64, q: i64) -> Result<Slope> {
        if p == 0 && q == 0 {
            return Err(Error::InvalidSlope("0/0".into()));
        }
        let g = gcd(p, q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            p = -p;
            q = -q;
        }
        Ok(Slope { p, q })
    }

    pub fn integer(n: i64) -> Slope {
        Slope { p: n, q: 1 }
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn is_infinite(&self) -> bool {
        self.q == 0
    }

    /// Signed determinant `p*s - q*r`.
    pub fn det(&self, other: &Slope) -> i64 {
        self.p * other.q - self.q * other.p
    }

    /// Farey adjacency: the curves meet minimally in their piece.
    pub fn adjacent(&self, other: &Slope) -> bool {
        self.det(other).abs() == 1
    }

    /// Parity class `(p mod 2, q mod 2)`; one of (0,1), (1,0), (1,1).
    pub fn parity(&self) -> (u8, u8) {
        (self.p.rem_euclid(2) as u8, self.q.rem_euclid(2) as u8)
    }

    /// Canonical representative of a parity class.
    pub fn parity_representative(parity: (u8, u8)) -> Slope {
        match parity {
            (0, 1) => Slope::ZERO,
            (1, 0) => Slope::INFINITY,
            _ => Slope { p: 1, q: 1 },
        }
    }

    pub fn height(&self) -> i64 {
        self.p.abs().max(self.q)
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Slope> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(Slope::INFINITY);
        }
        let bad = || Error::InvalidSlope(s.to_string());
        match s.split_once('/') {
            Some((a, b)) => {
                let p = a.trim().parse::<i64>().map_err(|_| bad())?;
                let q = b.trim().parse::<i64>().map_err(|_| bad())?;
                Slope::new(p, q)
            }
            None => s.parse::<i64>().map(Slope::integer).map_err(|_| bad()),
        }
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Integer 2x2 matrix of determinant one acting on slopes as column vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Unimodular {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Unimodular {
    pub const IDENTITY: Unimodular = Unimodular { a: 1, b: 0, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Unimodular> {
        if a * d - b * c != 1 {
            return Err(Error::InvalidSlope(format!(
                "matrix [[{a},{b}],[{c},{d}]] is not unimodular"
            )));
        }
        Ok(Unimodular { a, b, c, d })
    }

    /// Dehn twist about the curve of slope `u`, to the power `k`:
    /// `v -> v + k * det(u, v) * u`.
    pub fn twist(u: Slope, k: i64) -> Unimodular {
        let (x, y) = (u.p, u.q);
        Unimodular {
            a: 1 - k * x * y,
            b: k * x * x,
            c: -k * y * y,
            d: 1 + k * x * y,
        }
    }

    /// A matrix sending `s` to `1/0`.
    pub fn to_infinity(s: Slope) -> Unimodular {
        // find r, t with p*t - q*r = 1
        let (_, x, y) = ext_gcd(s.p, -s.q);
        // p*x + (-q)*y = 1  =>  t = x, r = y
        Unimodular { a: x, b: -y, c: -s.q, d: s.p }
    }

    /// Fixed matrix carrying the parity class (0,1) onto `parity`, with
    /// `0/1` going to the class representative.
    pub fn parity_frame(parity: (u8, u8)) -> Unimodular {
        match parity {
            (0, 1) => Unimodular::IDENTITY,
            (1, 0) => Unimodular { a: 0, b: -1, c: 1, d: 0 },
            _ => Unimodular { a: 1, b: 1, c: 0, d: 1 },
        }
    }

    pub fn apply(&self, s: Slope) -> Slope {
        let p = self.a * s.p + self.b * s.q;
        let q = self.c * s.p + self.d * s.q;
        Slope::new(p, q).expect("unimodular image of a slope is nonzero")
    }

    pub fn compose(&self, rhs: &Unimodular) -> Unimodular {
        Unimodular {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }

    pub fn inverse(&self) -> Unimodular {
        Unimodular { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }
}
