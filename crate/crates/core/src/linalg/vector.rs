use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use rand::Rng;

use crate::field::Prime;

/// Storage for a row vector over GF(p).
///
/// GF(2) vectors default to one bit per coordinate; every other modulus uses
/// one byte per coordinate. A GF(2) vector may also be held in byte storage,
/// which is how the generic elimination path is exercised on binary input.
#[derive(Clone)]
enum Data {
    Bits(Vec<u64>),
    Residues(Vec<u8>),
}

#[derive(Clone)]
pub struct Vector {
    p: Prime,
    len: usize,
    data: Data,
}

#[inline]
fn words(len: usize) -> usize {
    len.div_ceil(64)
}

impl Vector {
    pub fn zeros(p: Prime, len: usize) -> Self {
        if p.is_two() {
            Vector {
                p,
                len,
                data: Data::Bits(vec![0; words(len)]),
            }
        } else {
            Self::zeros_dense(p, len)
        }
    }

    /// Byte-per-coordinate storage regardless of the modulus.
    pub fn zeros_dense(p: Prime, len: usize) -> Self {
        Vector {
            p,
            len,
            data: Data::Residues(vec![0; len]),
        }
    }

    pub fn unit(p: Prime, len: usize, i: usize) -> Self {
        let mut v = Self::zeros(p, len);
        v.set(i, 1);
        v
    }

    /// Builds a vector from integer entries, reducing each modulo `p`.
    pub fn from_residues(p: Prime, entries: &[u8]) -> Self {
        let mut v = Self::zeros(p, entries.len());
        for (i, &x) in entries.iter().enumerate() {
            v.set(i, x % p.get());
        }
        v
    }

    pub fn from_residues_dense(p: Prime, entries: &[u8]) -> Self {
        Vector {
            p,
            len: entries.len(),
            data: Data::Residues(entries.iter().map(|&x| x % p.get()).collect()),
        }
    }

    pub fn random<R: Rng + ?Sized>(p: Prime, len: usize, rng: &mut R) -> Self {
        let mut v = Self::zeros(p, len);
        match &mut v.data {
            Data::Bits(w) => {
                for word in w.iter_mut() {
                    *word = rng.gen();
                }
                v.mask_tail();
            }
            Data::Residues(r) => {
                for x in r.iter_mut() {
                    *x = rng.gen_range(0..p.get());
                }
            }
        }
        v
    }

    fn mask_tail(&mut self) {
        if let Data::Bits(w) = &mut self.data {
            let rem = self.len % 64;
            if rem != 0 {
                if let Some(last) = w.last_mut() {
                    *last &= (1u64 << rem) - 1;
                }
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn is_packed(&self) -> bool {
        matches!(self.data, Data::Bits(_))
    }

    /// Same values, byte storage.
    pub fn to_dense(&self) -> Vector {
        Vector::from_residues_dense(self.p, &self.to_residues())
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        debug_assert!(i < self.len);
        match &self.data {
            Data::Bits(w) => ((w[i >> 6] >> (i & 63)) & 1) as u8,
            Data::Residues(r) => r[i],
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: u8) {
        debug_assert!(i < self.len && value < self.p.get());
        match &mut self.data {
            Data::Bits(w) => {
                let bit = 1u64 << (i & 63);
                if value & 1 == 1 {
                    w[i >> 6] |= bit;
                } else {
                    w[i >> 6] &= !bit;
                }
            }
            Data::Residues(r) => r[i] = value,
        }
    }

    /// Adds `c` to coordinate `i`.
    #[inline]
    pub fn add_at(&mut self, i: usize, c: u8) {
        match &mut self.data {
            Data::Bits(w) => {
                if c & 1 == 1 {
                    w[i >> 6] ^= 1u64 << (i & 63);
                }
            }
            Data::Residues(r) => r[i] = self.p.add(r[i], c),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.data {
            Data::Bits(w) => w.iter().all(|&x| x == 0),
            Data::Residues(r) => r.iter().all(|&x| x == 0),
        }
    }

    /// Index of the first nonzero coordinate.
    pub fn leading(&self) -> Option<usize> {
        match &self.data {
            Data::Bits(w) => w
                .iter()
                .enumerate()
                .find(|(_, &x)| x != 0)
                .map(|(k, &x)| (k << 6) + x.trailing_zeros() as usize),
            Data::Residues(r) => r.iter().position(|&x| x != 0),
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Vector, c: u8) {
        assert_eq!(self.len, other.len, "length mismatch");
        debug_assert_eq!(self.p, other.p);
        if c == 0 {
            return;
        }
        match (&mut self.data, &other.data) {
            (Data::Bits(a), Data::Bits(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    *x ^= *y;
                }
            }
            (Data::Residues(a), Data::Residues(b)) => {
                let p = self.p;
                if c == 1 {
                    for (x, &y) in a.iter_mut().zip(b) {
                        *x = p.add(*x, y);
                    }
                } else {
                    for (x, &y) in a.iter_mut().zip(b) {
                        if y != 0 {
                            *x = p.add(*x, p.mul(c, y));
                        }
                    }
                }
            }
            _ => {
                for (i, y) in other.support() {
                    let cy = self.p.mul(c, y);
                    self.add_at(i, cy);
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Vector) {
        self.add_scaled(other, 1);
    }

    pub fn sub_assign(&mut self, other: &Vector) {
        let m = self.p.neg(1);
        self.add_scaled(other, m);
    }

    pub fn scale(&mut self, c: u8) {
        match &mut self.data {
            Data::Bits(w) => {
                if c & 1 == 0 {
                    w.iter_mut().for_each(|x| *x = 0);
                }
            }
            Data::Residues(r) => {
                let p = self.p;
                r.iter_mut().for_each(|x| *x = p.mul(*x, c));
            }
        }
    }

    pub fn scaled(&self, c: u8) -> Vector {
        let mut v = self.clone();
        v.scale(c);
        v
    }

    pub fn dot(&self, other: &Vector) -> u8 {
        assert_eq!(self.len, other.len, "length mismatch");
        match (&self.data, &other.data) {
            (Data::Bits(a), Data::Bits(b)) => {
                let ones: u32 = a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum();
                (ones & 1) as u8
            }
            _ => {
                let p = self.p.get() as u32;
                let mut acc = 0u32;
                for (i, x) in self.support() {
                    acc += x as u32 * other.get(i) as u32;
                }
                (acc % p) as u8
            }
        }
    }

    /// Nonzero coordinates in increasing index order.
    pub fn support(&self) -> Support<'_> {
        Support {
            v: self,
            word: 0,
            bits: match &self.data {
                Data::Bits(w) => w.first().copied().unwrap_or(0),
                Data::Residues(_) => 0,
            },
            pos: 0,
        }
    }

    pub fn nnz(&self) -> usize {
        match &self.data {
            Data::Bits(w) => w.iter().map(|x| x.count_ones() as usize).sum(),
            Data::Residues(r) => r.iter().filter(|&&x| x != 0).count(),
        }
    }

    pub fn to_residues(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Coordinates `range`, as a new vector of the same storage kind.
    pub fn slice(&self, start: usize, end: usize) -> Vector {
        let mut out = if self.is_packed() {
            Vector::zeros(self.p, end - start)
        } else {
            Vector::zeros_dense(self.p, end - start)
        };
        for i in start..end {
            let x = self.get(i);
            if x != 0 {
                out.set(i - start, x);
            }
        }
        out
    }

    pub fn concat(&self, other: &Vector) -> Vector {
        let mut out = if self.is_packed() {
            Vector::zeros(self.p, self.len + other.len)
        } else {
            Vector::zeros_dense(self.p, self.len + other.len)
        };
        for (i, x) in self.support() {
            out.set(i, x);
        }
        for (i, x) in other.support() {
            out.set(self.len + i, x);
        }
        out
    }

    /// Integer encoding of the coordinates in base `p`, coordinate 0 least
    /// significant. Only meaningful while `p^len` fits in a `u64`.
    pub fn encode(&self) -> u64 {
        match &self.data {
            Data::Bits(w) if self.len <= 64 => w.first().copied().unwrap_or(0),
            _ => {
                let p = self.p.get() as u64;
                let mut acc = 0u64;
                for i in (0..self.len).rev() {
                    acc = acc * p + self.get(i) as u64;
                }
                acc
            }
        }
    }

    pub fn decode(p: Prime, len: usize, mut code: u64) -> Vector {
        let mut v = Vector::zeros(p, len);
        let q = p.get() as u64;
        for i in 0..len {
            let d = (code % q) as u8;
            if d != 0 {
                v.set(i, d);
            }
            code /= q;
        }
        v
    }
}

pub struct Support<'a> {
    v: &'a Vector,
    word: usize,
    bits: u64,
    pos: usize,
}

impl Iterator for Support<'_> {
    type Item = (usize, u8);

    fn next(&mut self) -> Option<(usize, u8)> {
        match &self.v.data {
            Data::Bits(w) => loop {
                if self.bits != 0 {
                    let t = self.bits.trailing_zeros() as usize;
                    self.bits &= self.bits - 1;
                    return Some(((self.word << 6) + t, 1));
                }
                self.word += 1;
                if self.word >= w.len() {
                    return None;
                }
                self.bits = w[self.word];
            },
            Data::Residues(r) => {
                while self.pos < r.len() {
                    let i = self.pos;
                    self.pos += 1;
                    if r[i] != 0 {
                        return Some((i, r[i]));
                    }
                }
                None
            }
        }
    }
}

impl PartialEq for Vector {
    fn eq(&self, other: &Self) -> bool {
        if self.p != other.p || self.len != other.len {
            return false;
        }
        match (&self.data, &other.data) {
            (Data::Bits(a), Data::Bits(b)) => a == b,
            (Data::Residues(a), Data::Residues(b)) => a == b,
            _ => (0..self.len).all(|i| self.get(i) == other.get(i)),
        }
    }
}

impl Eq for Vector {}

impl Hash for Vector {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.len.hash(state);
        for (i, x) in self.support() {
            i.hash(state);
            x.hash(state);
        }
    }
}

impl PartialOrd for Vector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on coordinates, coordinate 0 first.
impl Ord for Vector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            (0..self.len)
                .map(|i| self.get(i).cmp(&other.get(i)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.len {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", self.get(i))?;
        }
        write!(f, "]")
    }
}
