//! Per-element invariants and the census of an algebra's elements by them.

use std::collections::HashMap;

use crate::field::Prime;
use crate::lie::{LieAlgebra, SeriesKind};
use crate::linalg::{EchelonBuilder, Matrix, Subspace, Vector};

/// Isomorphism-invariant data of one element `x`:
/// the ranks of `(ad x)^k` until they stabilise, the number of derived and
/// lower central series terms containing `x`, whether `(ad x)^p` is
/// itself inner, and the dimension of the ideal `x` generates.
pub type Signature = Vec<u16>;

/// Computes element signatures for one algebra.
pub(crate) struct SignatureEngine {
    p: Prime,
    n: usize,
    derived: Vec<Subspace>,
    lower: Vec<Subspace>,
    inner: EchelonBuilder,
    bits: Option<BitEngine>,
}

/// GF(2) fast path for `dim <= 64`: rows are single words.
struct BitEngine {
    ad: Vec<Vec<u64>>,
    derived: Vec<Vec<(u64, u64)>>,
    lower: Vec<Vec<(u64, u64)>>,
    inner: Vec<(usize, u64, Vec<u64>)>,
}

fn flatten(m: &Matrix) -> Vector {
    let n = m.ncols();
    let mut v = Vector::zeros(m.prime(), m.nrows() * n);
    for r in 0..m.nrows() {
        for (c, x) in m.row(r).support() {
            v.set(r * n + c, x);
        }
    }
    v
}

/// Echelon rows as `(pivot bit, row)`.
fn bit_echelon(s: &Subspace) -> Vec<(u64, u64)> {
    s.basis()
        .iter()
        .zip(s.pivots())
        .map(|(v, &c)| (1u64 << c, v.encode()))
        .collect()
}

fn bit_reduce(ech: &[(u64, u64)], mut x: u64) -> u64 {
    for &(pivot, row) in ech {
        if x & pivot != 0 {
            x ^= row;
        }
    }
    x
}

fn bit_rank(rows: &[u64]) -> usize {
    let mut rows: Vec<u64> = rows.iter().copied().filter(|&r| r != 0).collect();
    let mut rank = 0;
    while let Some(pos) = rows.iter().position(|&r| r != 0) {
        let pivot = rows.swap_remove(pos);
        let low = pivot & pivot.wrapping_neg();
        for r in rows.iter_mut() {
            if *r & low != 0 {
                *r ^= pivot;
            }
        }
        rows.retain(|&r| r != 0);
        rank += 1;
    }
    rank
}

fn bit_mul(a: &[u64], b: &[u64], out: &mut [u64]) {
    for (o, &row) in out.iter_mut().zip(a) {
        let mut acc = 0u64;
        let mut bits = row;
        while bits != 0 {
            let k = bits.trailing_zeros() as usize;
            acc ^= b[k];
            bits &= bits - 1;
        }
        *o = acc;
    }
}

impl BitEngine {
    fn new(l: &LieAlgebra, derived: &[Subspace], lower: &[Subspace]) -> Self {
        let n = l.dim();
        let ad: Vec<Vec<u64>> = (0..n)
            .map(|i| l.ad_basis(i).rows().iter().map(Vector::encode).collect())
            .collect();
        // Reduced echelon form of the flattened inner derivations, one row per
        // basis element, pivot given as (word, bit).
        let mut inner: Vec<(usize, u64, Vec<u64>)> = Vec::new();
        for rows in &ad {
            let mut v = rows.clone();
            Self::reduce_flat(&inner, &mut v);
            if let Some(w) = v.iter().position(|&x| x != 0) {
                let bit = v[w] & v[w].wrapping_neg();
                for (_, _, r) in inner.iter_mut() {
                    if r[w] & bit != 0 {
                        for (a, b) in r.iter_mut().zip(&v) {
                            *a ^= b;
                        }
                    }
                }
                inner.push((w, bit, v));
            }
        }
        BitEngine {
            ad,
            derived: derived.iter().map(bit_echelon).collect(),
            lower: lower.iter().map(bit_echelon).collect(),
            inner,
        }
    }

    fn reduce_flat(inner: &[(usize, u64, Vec<u64>)], v: &mut [u64]) {
        for (w, bit, r) in inner {
            if v[*w] & bit != 0 {
                for (a, b) in v.iter_mut().zip(r) {
                    *a ^= b;
                }
            }
        }
    }

    fn ad_of(&self, x: u64, out: &mut [u64]) {
        out.iter_mut().for_each(|o| *o = 0);
        let mut bits = x;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            for (o, r) in out.iter_mut().zip(&self.ad[i]) {
                *o ^= r;
            }
            bits &= bits - 1;
        }
    }

    fn signature(&self, x: u64, ad: &[u64], out: &mut Signature) {
        out.clear();
        let n = ad.len();
        let mut power = ad.to_vec();
        let mut next = vec![0u64; n];
        let mut square = None;
        let mut last = bit_rank(&power);
        out.push(last as u16);
        for k in 2..=n + 1 {
            bit_mul(&power, ad, &mut next);
            std::mem::swap(&mut power, &mut next);
            if k == 2 {
                square = Some(power.clone());
            }
            let r = bit_rank(&power);
            if r == last {
                break;
            }
            out.push(r as u16);
            last = r;
        }
        out.push(u16::MAX);
        out.push(depth_bits(&self.derived, x));
        out.push(depth_bits(&self.lower, x));
        let mut sq = square.unwrap_or_else(|| {
            let mut s = vec![0u64; n];
            bit_mul(ad, ad, &mut s);
            s
        });
        Self::reduce_flat(&self.inner, &mut sq);
        out.push(sq.iter().all(|&w| w == 0) as u16);
        out.push(self.ideal_dim(x) as u16);
    }

    /// Dimension of the ideal generated by `x`.
    fn ideal_dim(&self, x: u64) -> usize {
        let mut ech: Vec<(u64, u64)> = Vec::new();
        let mut queue = vec![x];
        while let Some(v) = queue.pop() {
            let r = bit_reduce(&ech, v);
            if r == 0 {
                continue;
            }
            let low = r & r.wrapping_neg();
            for e in ech.iter_mut() {
                if e.1 & low != 0 {
                    e.1 ^= r;
                }
            }
            ech.push((low, r));
            if ech.len() == self.ad.len() {
                break;
            }
            // [e_i, r] for every basis element: column image of r under ad e_i.
            for ad in &self.ad {
                let mut img = 0u64;
                for (row, bits) in ad.iter().enumerate() {
                    if (bits & r).count_ones() & 1 == 1 {
                        img |= 1 << row;
                    }
                }
                if img != 0 {
                    queue.push(img);
                }
            }
        }
        ech.len()
    }
}

fn depth_bits(chain: &[Vec<(u64, u64)>], x: u64) -> u16 {
    chain
        .iter()
        .take_while(|ech| bit_reduce(ech, x) == 0)
        .count() as u16
}

impl SignatureEngine {
    pub fn new(l: &LieAlgebra) -> Self {
        let p = l.prime();
        let n = l.dim();
        let full = l.full_space();
        let derived = l.series(SeriesKind::Derived, &full);
        let lower = l.series(SeriesKind::LowerCentral, &full);
        let mut inner = EchelonBuilder::new(p, n * n);
        let bits = (p.is_two() && n <= 64).then(|| BitEngine::new(l, &derived, &lower));
        if bits.is_none() {
            for i in 0..n {
                inner.insert(flatten(&l.ad_basis(i)));
            }
        }
        SignatureEngine {
            p,
            n,
            derived,
            lower,
            inner,
            bits,
        }
    }

    pub fn signature(&self, l: &LieAlgebra, x: &Vector) -> Signature {
        let mut out = Vec::new();
        if let Some(b) = &self.bits {
            let code = x.encode();
            let mut ad = vec![0u64; self.n];
            b.ad_of(code, &mut ad);
            b.signature(code, &ad, &mut out);
            return out;
        }
        let ad = l.ad(x);
        let mut power = ad.clone();
        let mut last = power.rank();
        out.push(last as u16);
        for _ in 0..self.n {
            power = power.mul(&ad);
            let r = power.rank();
            if r == last {
                break;
            }
            out.push(r as u16);
            last = r;
        }
        out.push(u16::MAX);
        let depth = |chain: &[Subspace]| chain.iter().take_while(|s| s.contains(x)).count() as u16;
        out.push(depth(&self.derived));
        out.push(depth(&self.lower));
        let mut pth = Matrix::identity(self.p, self.n);
        for _ in 0..self.p.get() {
            pth = pth.mul(&ad);
        }
        out.push(self.inner.contains(&flatten(&pth)) as u16);
        out.push(l.ideal_closure([x.clone()]).dim() as u16);
        out
    }
}

/// Every element of an algebra sorted into classes of equal signature.
/// Elements are identified by their base-`p` code.
#[derive(Clone, Debug)]
pub struct ElementCensus {
    class_of: Vec<u32>,
    signatures: Vec<Signature>,
    members: Vec<Vec<u64>>,
    index: HashMap<Signature, u32>,
}

impl ElementCensus {
    /// Enumerates all `p^dim` elements, or returns `None` when that exceeds
    /// `limit`.
    pub fn compute(l: &LieAlgebra, limit: u64) -> Option<Self> {
        let p = l.prime();
        let n = l.dim();
        let total = (p.get() as u64).checked_pow(n as u32)?;
        if total > limit {
            return None;
        }
        let engine = SignatureEngine::new(l);
        let mut census = ElementCensus {
            class_of: vec![0; total as usize],
            signatures: Vec::new(),
            members: Vec::new(),
            index: HashMap::new(),
        };
        let mut sig = Vec::new();
        if let Some(b) = &engine.bits {
            // Gray-code walk: ad x changes by one basis ad per step.
            let mut ad = vec![0u64; n];
            let mut x = 0u64;
            for step in 0..total {
                if step > 0 {
                    let i = step.trailing_zeros() as usize;
                    x ^= 1 << i;
                    for (o, r) in ad.iter_mut().zip(&b.ad[i]) {
                        *o ^= r;
                    }
                }
                b.signature(x, &ad, &mut sig);
                census.record(x, &sig);
            }
        } else {
            for code in 0..total {
                let v = Vector::decode(p, n, code);
                sig = engine.signature(l, &v);
                census.record(code, &sig);
            }
        }
        Some(census)
    }

    fn record(&mut self, code: u64, sig: &[u16]) {
        let id = match self.index.get(sig) {
            Some(&id) => id,
            None => {
                let id = self.signatures.len() as u32;
                self.index.insert(sig.to_vec(), id);
                self.signatures.push(sig.to_vec());
                self.members.push(Vec::new());
                id
            }
        };
        self.class_of[code as usize] = id;
        self.members[id as usize].push(code);
    }

    pub fn class_count(&self) -> usize {
        self.signatures.len()
    }

    pub fn class_of(&self, code: u64) -> u32 {
        self.class_of[code as usize]
    }

    pub fn signature(&self, class: u32) -> &Signature {
        &self.signatures[class as usize]
    }

    pub fn members(&self, class: u32) -> &[u64] {
        &self.members[class as usize]
    }

    pub fn class_with(&self, sig: &Signature) -> Option<u32> {
        self.index.get(sig).copied()
    }

    /// Class sizes keyed by signature, sorted.
    pub fn histogram(&self) -> Vec<(Signature, usize)> {
        let mut h: Vec<(Signature, usize)> = self
            .signatures
            .iter()
            .cloned()
            .zip(self.members.iter().map(Vec::len))
            .collect();
        h.sort();
        h
    }
}
