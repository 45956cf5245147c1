//! Morán's second square, evaluated as the sum of three counting terms.

use thiserror::Error;

use crate::f2algebra::{Cochain, F2Complex, F2Error};
use crate::semisimp::{SemiSimplicialObject, SpanOrder};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SqError {
    #[error("input is not a cocycle")]
    InputNotCocycle,
    #[error("output is not a cocycle")]
    OutputNotCocycle(Cochain),
    #[error("odd sum where an even one was expected at generator {0}")]
    Odd(u32),
    #[error("odd number of boundary elements over generator {0}")]
    OddBoundary(u32),
    #[error("invalid matching: {0}")]
    Matching(String),
    #[error(transparent)]
    F2(#[from] F2Error),
}

/// One element of ∂_{ab}(z, α), drawn as a chord between a and b.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Chord {
    pub a: usize,
    pub b: usize,
    /// (q ∈ ∂_a(z), p ∈ ∂_{b-1}(q_out, α))
    pub left: (u32, u32),
    /// (q′ ∈ ∂_b(z), p′ ∈ ∂_a(q′_out, α))
    pub right: (u32, u32),
}

#[derive(Debug, Clone)]
pub struct SqEvalContext<'a> {
    pub x: &'a SemiSimplicialObject,
    pub order: &'a SpanOrder,
    pub alpha: &'a Cochain,
    pub n: i32,
    pub parity: u8,
    /// ∂(y, α) for y ∈ X_{n+1} in derived order, as (face, element index).
    pub bd: Vec<Vec<(usize, u32)>>,
}

/// Everything the square formulas need about one z ∈ X_{n+2}.
#[derive(Debug, Clone)]
pub struct ZView {
    pub z: u32,
    /// number of face indices of z
    pub k: usize,
    m: Vec<i64>,
    /// ∂_c(z) in base order
    pub dz: Vec<Vec<u32>>,
    /// mo[c][s][f] = m_f(s_out, α) for the s-th element of ∂_c(z)
    pub mo: Vec<Vec<Vec<i64>>>,
    pub chords: Vec<Chord>,
}

impl ZView {
    pub fn m(&self, a: usize, b: usize) -> i64 {
        self.m[a * self.k + b]
    }

    /// m(s_out, α) for the s-th element of ∂_c(z).
    pub fn mtot(&self, c: usize, s: usize) -> i64 {
        self.mo[c][s].iter().sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.mo.iter().flatten().flatten().all(|&v| v == 0)
    }
}

impl<'a> SqEvalContext<'a> {
    pub fn new(
        x: &'a SemiSimplicialObject,
        order: &'a SpanOrder,
        alpha: &'a Cochain,
    ) -> Result<Self, SqError> {
        let n = alpha.n;
        let mut bd = vec![];
        if x.has_faces(n + 1) {
            let ny = x.level_len(n + 1);
            bd = vec![vec![]; ny];
            for f in 0..=(n + 1) as usize {
                let span = x.face(n + 1, f);
                for (i, e) in span.elts.iter().enumerate() {
                    if alpha.contains(e.tgt) {
                        bd[e.src as usize].push((f, i as u32));
                    }
                }
            }
            for l in &mut bd {
                l.sort_by_key(|&(f, i)| order.derived(n + 1, f, i));
            }
            if bd.iter().any(|l| l.len() % 2 == 1) {
                return Err(SqError::InputNotCocycle);
            }
        }
        Ok(SqEvalContext {
            x,
            order,
            alpha,
            n,
            parity: n.rem_euclid(2) as u8,
            bd,
        })
    }

    /// Generators of X_{n+2}.
    pub fn targets(&self) -> u32 {
        if self.x.has_faces(self.n + 2) {
            self.x.level_len(self.n + 2) as u32
        } else {
            0
        }
    }

    /// Position of (face, idx) in ∂(y, α).
    pub fn position(&self, y: u32, p: (usize, u32)) -> usize {
        self.bd[y as usize].iter().position(|&e| e == p).expect("element of ∂(y, α)")
    }

    pub fn zview(&self, z: u32) -> ZView {
        let n2 = self.n + 2;
        let k = (self.n + 3) as usize;
        let mut dz = vec![];
        let mut mo = vec![];
        for c in 0..k {
            let f = self.x.face(n2, c);
            let mut l: Vec<u32> = f.from_src(z).collect();
            l.sort_by_key(|&q| self.order.rank(n2, c, q));
            mo.push(
                l.iter()
                    .map(|&q| {
                        let y = f.elts[q as usize].tgt;
                        let mut cnt = vec![0i64; k - 1];
                        for &(g, _) in &self.bd[y as usize] {
                            cnt[g] += 1;
                        }
                        cnt
                    })
                    .collect(),
            );
            dz.push(l);
        }
        let mut m = vec![0i64; k * k];
        let mut chords = vec![];
        for a in 0..k {
            let f = self.x.face(n2, a);
            for &q in &dz[a] {
                let y = f.elts[q as usize].tgt;
                for &(g, p) in &self.bd[y as usize] {
                    if g >= a {
                        let b = g + 1;
                        m[a * k + b] += 1;
                        m[b * k + a] += 1;
                        chords.push(Chord {
                            a,
                            b,
                            left: (q, p),
                            right: self.x.right_break(n2, a, b, q, p),
                        });
                    }
                }
            }
        }
        ZView {
            z,
            k,
            m,
            dz,
            mo,
            chords,
        }
    }

    /// Left-break and right-break sort keys of a chord.
    pub fn break_keys(&self, ch: &Chord) -> ((u32, u32), (u32, u32)) {
        let n2 = self.n + 2;
        let o = self.order;
        (
            (o.rank(n2, ch.a, ch.left.0), o.rank(n2 - 1, ch.b - 1, ch.left.1)),
            (o.rank(n2, ch.b, ch.right.0), o.rank(n2 - 1, ch.a, ch.right.1)),
        )
    }
}

/// Six parity classes of products over a < b < c < d.
pub fn term_i_counts(k: usize, m: impl Fn(usize, usize) -> i64) -> i64 {
    let mut s = 0;
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                for d in c + 1..k {
                    let e = |i: usize| i % 2 == 0;
                    let (ea, eb, ec, ed) = (e(a), e(b), e(c), e(d));
                    if (ea && eb && !ec && !ed) || (ec && ed && !ea && !eb) {
                        s += m(a, d) * m(b, c);
                    }
                    if (ea && ed && !eb && !ec) || (eb && ec && !ea && !ed) {
                        s += m(a, b) * m(c, d);
                    }
                    if (ea && eb && ec && ed) || !(ea || eb || ec || ed) {
                        s += m(a, c) * m(b, d);
                    }
                }
            }
        }
    }
    s
}

/// Σ_c Σ_{s<t ∈ ∂_c(z)} (Σ_{a<b even} m_a(s_out)m_b(t_out) + Σ_{a>b odd} m_a(s_out)m_b(t_out)).
pub fn term_ii_counts(mo: &[Vec<Vec<i64>>]) -> i64 {
    let mut s = 0;
    for l in mo {
        for (i, ms) in l.iter().enumerate() {
            for mt in &l[i + 1..] {
                for (a, &x) in ms.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (b, &y) in mt.iter().enumerate() {
                        if (a < b && a % 2 == 0 && b % 2 == 0) || (a > b && a % 2 == 1 && b % 2 == 1) {
                            s += x * y;
                        }
                    }
                }
            }
        }
    }
    s
}

/// Number of pairs whose two orders disagree; `keys` are (left key, right key) per element.
pub fn term_iii_counts<K: Ord>(keys: &[(K, K)]) -> i64 {
    let mut s = 0;
    for (i, (l1, r1)) in keys.iter().enumerate() {
        for (l2, r2) in &keys[i + 1..] {
            if (l1 < l2) != (r1 < r2) {
                s += 1;
            }
        }
    }
    s
}

/// Fault switch for sensitivity tests: term III compares left-break with itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Term3 {
    #[default]
    Honest,
    LeftForRight,
}

pub fn term_i(v: &ZView) -> u8 {
    (term_i_counts(v.k, |a, b| v.m(a, b)) % 2) as u8
}

pub fn term_ii(v: &ZView) -> u8 {
    (term_ii_counts(&v.mo) % 2) as u8
}

pub fn term_iii(ctx: &SqEvalContext, v: &ZView, fault: Term3) -> u8 {
    let mut s = 0;
    for a in 0..v.k {
        for b in a + 1..v.k {
            let keys: Vec<_> = v
                .chords
                .iter()
                .filter(|c| c.a == a && c.b == b)
                .map(|c| {
                    let (l, r) = ctx.break_keys(c);
                    match fault {
                        Term3::Honest => (l, r),
                        Term3::LeftForRight => (l, l),
                    }
                })
                .collect();
            s += term_iii_counts(&keys);
        }
    }
    (s % 2) as u8
}

pub fn sq2_moran_raw(ctx: &SqEvalContext, fault: Term3) -> Cochain {
    let mut out = Cochain::zero(ctx.x, ctx.n + 2);
    for z in 0..ctx.targets() {
        let v = ctx.zview(z);
        if v.is_trivial() {
            continue;
        }
        if (term_i(&v) + term_ii(&v) + term_iii(ctx, &v, fault)) % 2 == 1 {
            out.bits.flip(z as usize);
        }
    }
    out
}

pub fn sq2_moran(c: &F2Complex, ctx: &SqEvalContext) -> Result<Cochain, SqError> {
    let out = sq2_moran_raw(ctx, Term3::Honest);
    if !c.delta(&out).is_zero() {
        return Err(SqError::OutputNotCocycle(out));
    }
    Ok(out)
}

pub fn sq1(c: &F2Complex, ctx: &SqEvalContext) -> Result<Cochain, SqError> {
    Ok(c.bockstein(ctx.alpha)?)
}

pub fn sq0(ctx: &SqEvalContext) -> Cochain {
    ctx.alpha.clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(ones: &[(usize, usize)]) -> impl Fn(usize, usize) -> i64 + '_ {
        move |a, b| ones.iter().any(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b)) as i64
    }

    #[test]
    fn test_term_i() {
        assert_eq!(term_i_counts(8, |_, _| 0), 0);
        assert_eq!(term_i_counts(8, pairs(&[(2, 7), (4, 5)])) % 2, 1);
        assert_eq!(term_i_counts(8, pairs(&[(1, 3), (2, 4)])) % 2, 0);
    }

    #[test]
    fn test_term_i_coefficient_form() {
        // the six classes equal the polynomial-coefficient form mod 2
        let mut rng = 0x2545f4914f6cdd1du64;
        for _ in 0..200 {
            let k = 7;
            let mut m = vec![0i64; k * k];
            for a in 0..k {
                for b in a + 1..k {
                    rng ^= rng << 13;
                    rng ^= rng >> 7;
                    rng ^= rng << 17;
                    m[a * k + b] = (rng % 4) as i64;
                    m[b * k + a] = m[a * k + b];
                }
            }
            let mm = |a: usize, b: usize| m[a * k + b];
            let mut alt = 0i64;
            for a in 0..k as i64 {
                for b in a + 1..k as i64 {
                    for c in b + 1..k as i64 {
                        for d in c + 1..k as i64 {
                            let (au, bu, cu, du) = (a as usize, b as usize, c as usize, d as usize);
                            let three = a * b * d + a * c * d + a * b * c + b * c * d;
                            let pairs = a * b + a * c + a * d + b * c + b * d + c * d;
                            alt += (three + a * b + c * d) * mm(au, du) * mm(bu, cu);
                            alt += (three + b * c + a * d) * mm(au, bu) * mm(cu, du);
                            alt += (three + pairs + a + b + c + d + 1) * mm(au, cu) * mm(bu, du);
                        }
                    }
                }
            }
            assert_eq!(term_i_counts(k, mm).rem_euclid(2), alt.rem_euclid(2));
        }
    }

    #[test]
    fn test_term_ii() {
        assert_eq!(term_ii_counts(&[vec![vec![1, 0, 1]]]), 0);
        let s = vec![1, 0, 0, 0];
        let t = vec![0, 0, 1, 0];
        assert_eq!(term_ii_counts(&[vec![s, t]]) % 2, 1);
        let s = vec![0, 1, 0, 0];
        let t = vec![0, 0, 0, 1];
        assert_eq!(term_ii_counts(&[vec![s, t]]) % 2, 0);
    }

    #[test]
    fn test_term_iii() {
        assert_eq!(term_iii_counts::<u32>(&[(0, 0)]), 0);
        assert_eq!(term_iii_counts(&[((0, 0), (0, 0)), ((1, 0), (1, 0))]), 0);
        assert_eq!(term_iii_counts(&[((0, 0), (1, 0)), ((1, 0), (0, 0))]), 1);
    }
}
