//! Prime fields GF(p) for small primes.
//!
//! Residues are stored as `u8`; every prime handled here is below 16, so all
//! intermediate products fit comfortably in a `u16`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::Error;

/// Largest modulus (exclusive) supported by the engine.
pub const MAX_PRIME: u8 = 16;

/// A validated prime modulus `p < 16`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u8);

impl Prime {
    pub const TWO: Prime = Prime(2);

    pub fn new(p: u8) -> Result<Self, Error> {
        if p < MAX_PRIME && matches!(p, 2 | 3 | 5 | 7 | 11 | 13) {
            Ok(Prime(p))
        } else {
            Err(Error::InvalidPrime(p as u64))
        }
    }

    #[inline]
    pub fn get(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn is_two(self) -> bool {
        self.0 == 2
    }

    /// Reduces an arbitrary signed integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, x: i64) -> u8 {
        x.rem_euclid(self.0 as i64) as u8
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.0 as u16) as u8
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: u8) -> u8 {
        assert!(
            !a.is_multiple_of(self.0),
            "inverse of zero in GF({})",
            self.0
        );
        // p is tiny, a linear scan is cheaper than extended Euclid bookkeeping.
        (1..self.0)
            .find(|&b| self.mul(a, b) == 1)
            .expect("nonzero residue modulo a prime is invertible")
    }

    /// Integer `n` viewed as an element of the prime field.
    #[inline]
    pub fn from_u64(self, n: u64) -> u8 {
        (n % self.0 as u64) as u8
    }

    /// `p^e` as an integer.
    pub fn pow(self, e: u32) -> u64 {
        (self.0 as u64).pow(e)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of GF(p) carrying its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u8,
    p: Prime,
}

impl FieldElement {
    pub fn new(value: i64, p: Prime) -> Self {
        FieldElement {
            value: p.reduce(value),
            p,
        }
    }

    pub fn zero(p: Prime) -> Self {
        FieldElement { value: 0, p }
    }

    pub fn one(p: Prime) -> Self {
        FieldElement { value: 1, p }
    }

    #[inline]
    pub fn value(self) -> u8 {
        self.value
    }

    #[inline]
    pub fn prime(self) -> Prime {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Option<Self> {
        (self.value != 0).then(|| FieldElement {
            value: self.p.inv(self.value),
            p: self.p,
        })
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FieldElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.p, rhs.p, "mixed moduli");
        FieldElement {
            value: self.p.add(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Sub for FieldElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.p, rhs.p, "mixed moduli");
        FieldElement {
            value: self.p.sub(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Mul for FieldElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.p, rhs.p, "mixed moduli");
        FieldElement {
            value: self.p.mul(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Neg for FieldElement {
    type Output = Self;
    fn neg(self) -> Self {
        FieldElement {
            value: self.p.neg(self.value),
            p: self.p,
        }
    }
}
