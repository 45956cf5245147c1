//! The F2 cochain complex of the semi-simplicial object, its homology and Bockstein.

mod bitvec;
mod echelon;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bitvec::F2Vec;
pub use echelon::Echelon;

use crate::semisimp::SemiSimplicialObject;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum F2Error {
    #[error("not a cocycle")]
    NotCocycle,
    #[error("integral coboundary of the lift is odd at generator {0}")]
    OddLift(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cochain {
    pub n: i32,
    pub bits: F2Vec,
}

impl Cochain {
    pub fn zero(x: &SemiSimplicialObject, n: i32) -> Self {
        Cochain {
            n,
            bits: F2Vec::zeros(x.level_len(n)),
        }
    }

    pub fn from_support(x: &SemiSimplicialObject, n: i32, s: impl IntoIterator<Item = u32>) -> Self {
        Cochain {
            n,
            bits: F2Vec::from_ones(x.level_len(n), s.into_iter().map(|i| i as usize)),
        }
    }

    pub fn contains(&self, g: u32) -> bool {
        self.bits.get(g as usize)
    }

    pub fn support(&self) -> Vec<u32> {
        self.bits.ones().map(|i| i as u32).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_zero()
    }

    pub fn add(&self, o: &Cochain) -> Cochain {
        assert_eq!(self.n, o.n);
        let mut bits = self.bits.clone();
        bits.xor_assign(&o.bits);
        Cochain { n: self.n, bits }
    }

    /// Quantum gradings present in the support.
    pub fn gradings(&self, x: &SemiSimplicialObject) -> Vec<i32> {
        let Some(lv) = x.level(self.n) else {
            return vec![];
        };
        let mut js: Vec<i32> = self.bits.ones().map(|g| lv.gens[g].q).collect();
        js.sort();
        js.dedup();
        js
    }
}

/// Proof that f is not a coboundary: a chain y with yᵀδ = 0 and ⟨y, f⟩ = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub n: i32,
    pub functional: F2Vec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coboundary {
    Witness(Cochain),
    NotACoboundary(Certificate),
}

impl Coboundary {
    pub fn witness(&self) -> Option<&Cochain> {
        match self {
            Coboundary::Witness(w) => Some(w),
            Coboundary::NotACoboundary(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyRow {
    pub n: i32,
    pub i: i32,
    pub j: i32,
    pub dim: usize,
}

#[derive(Debug)]
struct Block {
    gens: Vec<u32>,
    kernel: Vec<F2Vec>,
    reps: Vec<F2Vec>,
    /// echelon input index of each representative
    rep_inputs: Vec<usize>,
    /// inputs: coboundaries of the (n-1, j) basis, then the representatives
    ech: Echelon,
    n_bd: usize,
    dual: OnceLock<Vec<F2Vec>>,
}

#[derive(Debug)]
pub struct F2Complex<'a> {
    x: &'a SemiSimplicialObject,
    /// co[n+1][y]: generators z ∈ X_{n+1} with δe_y(z) = 1
    co: Vec<Vec<Vec<u32>>>,
    blocks: BTreeMap<(i32, i32), Block>,
    /// position of each generator inside its (n, j) block
    pos: Vec<Vec<u32>>,
    pub n_minus: i32,
}

fn block_vec(gens_pos: &[u32], len: usize, ones: impl IntoIterator<Item = u32>) -> F2Vec {
    let mut v = F2Vec::zeros(len);
    for g in ones {
        v.flip(gens_pos[g as usize] as usize);
    }
    v
}

pub fn cochain_complex(x: &SemiSimplicialObject, n_minus: usize) -> F2Complex<'_> {
    let top = x.top();
    let mut co = vec![];
    for n in -1..=top {
        let len = x.level_len(n);
        let mut c: Vec<Vec<u32>> = vec![vec![]; len];
        if x.has_faces(n + 1) {
            for i in 0..=(n + 1) as usize {
                for e in &x.face(n + 1, i).elts {
                    c[e.tgt as usize].push(e.src);
                }
            }
        }
        for l in &mut c {
            l.sort();
            let mut out: Vec<u32> = vec![];
            for &z in l.iter() {
                if out.last() == Some(&z) {
                    out.pop();
                } else {
                    out.push(z);
                }
            }
            *l = out;
        }
        co.push(c);
    }

    let mut keys: BTreeMap<(i32, i32), Vec<u32>> = BTreeMap::new();
    let mut pos = vec![];
    for n in -1..=top {
        let lv = x.level(n).unwrap();
        let mut p = vec![0u32; lv.len()];
        for (g, info) in lv.gens.iter().enumerate() {
            let v = keys.entry((n, info.q)).or_default();
            p[g] = v.len() as u32;
            v.push(g as u32);
        }
        pos.push(p);
    }

    let blocks: BTreeMap<(i32, i32), Block> = keys
        .par_iter()
        .map(|(&(n, j), gens)| {
            let idx = (n + 1) as usize;
            let len = gens.len();
            // kernel of δ on this block
            let next = keys.get(&(n + 1, j));
            let next_len = next.map_or(0, |v| v.len());
            let mut e = Echelon::new(next_len, len);
            let mut kernel = vec![];
            for (k, &g) in gens.iter().enumerate() {
                let col = match next {
                    Some(_) => block_vec(&pos[idx + 1], next_len, co[idx][g as usize].iter().copied()),
                    None => F2Vec::zeros(0),
                };
                if let Some(mut c) = e.insert(&col) {
                    c.flip(k);
                    c = truncate(&c, len);
                    kernel.push(c);
                }
            }
            // coboundaries from (n-1, j), then kernel vectors to pick representatives
            let prev = if idx > 0 { keys.get(&(n - 1, j)) } else { None };
            let n_bd = prev.map_or(0, |v| v.len());
            let mut ech = Echelon::new(len, n_bd + kernel.len());
            if let Some(prev) = prev {
                for &h in prev {
                    ech.insert(&block_vec(&pos[idx], len, co[idx - 1][h as usize].iter().copied()));
                }
            }
            let mut reps = vec![];
            let mut rep_inputs = vec![];
            for k in &kernel {
                let at = ech.inputs();
                if ech.insert(k).is_none() {
                    reps.push(k.clone());
                    rep_inputs.push(at);
                }
            }
            (
                (n, j),
                Block {
                    gens: gens.clone(),
                    kernel,
                    reps,
                    rep_inputs,
                    ech,
                    n_bd,
                    dual: OnceLock::new(),
                },
            )
        })
        .collect();

    F2Complex {
        x,
        co,
        blocks,
        pos,
        n_minus: n_minus as i32,
    }
}

fn truncate(v: &F2Vec, len: usize) -> F2Vec {
    F2Vec::from_ones(len, v.ones().filter(|&i| i < len))
}

impl<'a> F2Complex<'a> {
    pub fn object(&self) -> &'a SemiSimplicialObject {
        self.x
    }

    /// (n, j) pairs with a nonempty cochain group.
    pub fn blocks(&self) -> impl Iterator<Item = (i32, i32)> + '_ {
        self.blocks.keys().copied()
    }

    pub fn block_len(&self, n: i32, j: i32) -> usize {
        self.blocks.get(&(n, j)).map_or(0, |b| b.gens.len())
    }

    pub fn delta(&self, a: &Cochain) -> Cochain {
        let mut out = Cochain::zero(self.x, a.n + 1);
        if out.bits.is_empty() {
            return out;
        }
        for y in a.bits.ones() {
            for &z in &self.co[(a.n + 1) as usize][y] {
                out.bits.flip(z as usize);
            }
        }
        out
    }

    /// Integral coboundary with the sign (-1)^i on the i-th face.
    pub fn delta_z(&self, n: i32, a: &[i64]) -> Vec<i64> {
        let len = self.x.level_len(n + 1);
        let mut out = vec![0i64; len];
        if !self.x.has_faces(n + 1) {
            return out;
        }
        for i in 0..=(n + 1) as usize {
            let s = if i % 2 == 0 { 1 } else { -1 };
            for e in &self.x.face(n + 1, i).elts {
                out[e.src as usize] += s * a[e.tgt as usize];
            }
        }
        out
    }

    fn split(&self, f: &Cochain) -> BTreeMap<i32, F2Vec> {
        let mut parts: BTreeMap<i32, F2Vec> = BTreeMap::new();
        let Some(lv) = self.x.level(f.n) else {
            return parts;
        };
        for g in f.bits.ones() {
            let j = lv.gens[g].q;
            let len = self.block_len(f.n, j);
            parts
                .entry(j)
                .or_insert_with(|| F2Vec::zeros(len))
                .flip(self.pos[(f.n + 1) as usize][g] as usize);
        }
        parts
    }

    fn lift(&self, n: i32, j: i32, v: &F2Vec) -> Cochain {
        let gens = &self.blocks[&(n, j)].gens;
        Cochain::from_support(self.x, n, v.ones().map(|k| gens[k]))
    }

    pub fn homology_basis(&self, n: i32, j: i32) -> (usize, Vec<Cochain>) {
        match self.blocks.get(&(n, j)) {
            None => (0, vec![]),
            Some(b) => (b.reps.len(), b.reps.iter().map(|r| self.lift(n, j, r)).collect()),
        }
    }

    pub fn kernel_basis(&self, n: i32, j: i32) -> Vec<Cochain> {
        self.blocks
            .get(&(n, j))
            .map_or(vec![], |b| b.kernel.iter().map(|r| self.lift(n, j, r)).collect())
    }

    /// A random element of ker δ in the (n, j) block; zero if the kernel is trivial.
    pub fn random_cocycle(&self, n: i32, j: i32, rng: &mut impl Rng) -> Cochain {
        let mut c = Cochain::zero(self.x, n);
        if let Some(b) = self.blocks.get(&(n, j)) {
            if b.kernel.is_empty() {
                return c;
            }
            let mut v = F2Vec::zeros(b.gens.len());
            while v.is_zero() {
                for k in &b.kernel {
                    if rng.gen::<bool>() {
                        v.xor_assign(k);
                    }
                }
            }
            c = self.lift(n, j, &v);
        }
        c
    }

    pub fn homology_table(&self) -> Vec<HomologyRow> {
        self.blocks
            .iter()
            .filter(|(_, b)| !b.reps.is_empty())
            .map(|(&(n, j), b)| HomologyRow {
                n,
                i: n + 1 - self.n_minus,
                j,
                dim: b.reps.len(),
            })
            .collect()
    }

    fn dual(&self, n: i32, j: i32) -> &[F2Vec] {
        let b = &self.blocks[&(n, j)];
        b.dual.get_or_init(|| {
            // kernel of δᵀ : chains y on the block with ⟨y, δω⟩ = 0 for all ω
            let len = b.gens.len();
            let prev = self.blocks.get(&(n - 1, j));
            let plen = prev.map_or(0, |p| p.gens.len());
            let mut e = Echelon::new(plen, len);
            let mut out = vec![];
            for (k, &g) in b.gens.iter().enumerate() {
                let mut row = F2Vec::zeros(plen);
                if prev.is_some() {
                    for i in 0..=n as usize {
                        let f = self.x.face(n, i);
                        for s in f.from_src(g) {
                            row.flip(self.pos[n as usize][f.elts[s as usize].tgt as usize] as usize);
                        }
                    }
                }
                if let Some(mut c) = e.insert(&row) {
                    c.flip(k);
                    out.push(c);
                }
            }
            out
        })
    }

    /// Solves δω = f over F2.
    pub fn is_coboundary(&self, f: &Cochain) -> Coboundary {
        let mut w = if f.n >= 0 {
            Cochain::zero(self.x, f.n - 1)
        } else {
            Cochain {
                n: f.n - 1,
                bits: F2Vec::zeros(0),
            }
        };
        for (j, v) in self.split(f) {
            let b = &self.blocks[&(f.n, j)];
            let (r, combo) = b.ech.reduce(&v);
            let ok = r.is_zero() && combo.ones().all(|k| k < b.n_bd);
            if !ok {
                let y = self
                    .dual(f.n, j)
                    .iter()
                    .find(|y| y.dot(&v))
                    .expect("a non-coboundary pairs with some cycle")
                    .clone();
                let functional = F2Vec::from_ones(
                    self.x.level_len(f.n),
                    y.ones().map(|k| b.gens[k] as usize),
                );
                return Coboundary::NotACoboundary(Certificate { n: f.n, functional });
            }
            for k in combo.ones() {
                w.bits.flip(self.blocks[&(f.n - 1, j)].gens[k] as usize);
            }
        }
        Coboundary::Witness(w)
    }

    /// Coordinates of the class of a cocycle f in the homology basis of block (f.n, j).
    pub fn coordinates(&self, f: &Cochain, j: i32) -> Result<Vec<bool>, F2Error> {
        let parts = self.split(f);
        if parts.keys().any(|&k| k != j) {
            return Err(F2Error::NotCocycle);
        }
        let Some(b) = self.blocks.get(&(f.n, j)) else {
            return Ok(vec![]);
        };
        let v = parts.get(&j).cloned().unwrap_or_else(|| F2Vec::zeros(b.gens.len()));
        let (r, combo) = b.ech.reduce(&v);
        if !r.is_zero() {
            return Err(F2Error::NotCocycle);
        }
        Ok(b.rep_inputs.iter().map(|&k| combo.get(k)).collect())
    }

    pub fn bockstein(&self, a: &Cochain) -> Result<Cochain, F2Error> {
        let lift: Vec<i64> = (0..a.bits.len()).map(|g| a.bits.get(g) as i64).collect();
        self.bockstein_of_lift(a.n, &lift)
    }

    /// Half the integral coboundary of a lift, reduced mod 2.
    pub fn bockstein_of_lift(&self, n: i32, lift: &[i64]) -> Result<Cochain, F2Error> {
        let d = self.delta_z(n, lift);
        let mut out = Cochain::zero(self.x, n + 1);
        for (z, &v) in d.iter().enumerate() {
            if v % 2 != 0 {
                return Err(F2Error::OddLift(z as u32));
            }
            if (v / 2) % 2 != 0 {
                out.bits.flip(z);
            }
        }
        Ok(out)
    }
}
