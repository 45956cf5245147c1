//! Counting identities over a fixed target z and cocycle α.
//!
//! Indices a, b, c, d run over the face indices 0..k of z. For s ∈ ∂_c(z), `mf(c, s, a)` is the
//! number of elements of ∂(s_out, α) on the face that the index a ≠ c becomes after c is removed.

use crate::lssq::{gamma_cycles, ChordPresentation, Cycle, Matching};
use crate::moransq::{SqEvalContext, Term3, ZView};

pub struct Local<'a> {
    pub ctx: &'a SqEvalContext<'a>,
    pub v: &'a ZView,
    pub pres: &'a ChordPresentation,
    pub cycles: Vec<Cycle>,
}

pub enum Eval {
    /// pairs that must agree mod 2
    Exact(fn(&Local) -> Vec<(i64, i64)>),
    Cochain(fn(&Local) -> i64),
}

pub struct Identity {
    pub name: &'static str,
    pub eval: Eval,
    /// reported but not part of the pass/fail verdict
    pub diagnostic: bool,
}


fn ac(a: usize, c: usize) -> usize {
    if a < c {
        a
    } else {
        a - 1
    }
}

fn c2(n: i64) -> i64 {
    n * (n - 1) / 2
}

fn t3(c: usize, a: usize, b: usize) -> bool {
    (c < a && a < b) || (a < b && b < c) || (b < c && c < a)
}

fn t2(c: usize, a: usize, b: usize) -> bool {
    (c < a && a < b) || (a < b && b < c)
}

fn ix(a: usize) -> i64 {
    a as i64
}

impl<'a> Local<'a> {
    pub fn new(ctx: &'a SqEvalContext<'a>, v: &'a ZView, pres: &'a ChordPresentation, m: &Matching) -> Self {
        let cycles = gamma_cycles(pres, m, false).expect("valid matching");
        Local { ctx, v, pres, cycles }
    }

    fn k(&self) -> usize {
        self.v.k
    }

    fn m(&self, a: usize, b: usize) -> i64 {
        self.v.m(a, b)
    }

    fn mf(&self, c: usize, s: usize, a: usize) -> i64 {
        self.v.mo[c][s][ac(a, c)]
    }

    fn len(&self, c: usize) -> usize {
        self.v.dz[c].len()
    }

    /// Σ_c Σ_{s<t ∈ ∂_c} Σ_{a,b ≠ c} w(c,a,b)·mf(c,s,a)·mf(c,t,b)
    fn pairs_st(&self, w: impl Fn(usize, usize, usize) -> i64) -> i64 {
        let k = self.k();
        let mut tot = 0;
        for c in 0..k {
            for s in 0..self.len(c) {
                for t in s + 1..self.len(c) {
                    for a in (0..k).filter(|&a| a != c) {
                        let x = self.mf(c, s, a);
                        if x == 0 {
                            continue;
                        }
                        for b in (0..k).filter(|&b| b != c) {
                            tot += w(c, a, b) * x * self.mf(c, t, b);
                        }
                    }
                }
            }
        }
        tot
    }

    /// Σ_c Σ_{s ∈ ∂_c} Σ_{a<b, both ≠ c} w(c,a,b)·mf(c,s,a)·mf(c,s,b)
    fn pairs_s(&self, w: impl Fn(usize, usize, usize) -> i64) -> i64 {
        let k = self.k();
        let mut tot = 0;
        for c in 0..k {
            for s in 0..self.len(c) {
                for a in (0..k).filter(|&a| a != c) {
                    for b in (a + 1..k).filter(|&b| b != c) {
                        tot += w(c, a, b) * self.mf(c, s, a) * self.mf(c, s, b);
                    }
                }
            }
        }
        tot
    }

    /// Σ_{a<b} w(a,b)·m_ab
    fn sum_ab(&self, w: impl Fn(usize, usize) -> i64) -> i64 {
        let k = self.k();
        let mut tot = 0;
        for a in 0..k {
            for b in a + 1..k {
                tot += w(a, b) * self.m(a, b);
            }
        }
        tot
    }

    /// Σ_{a<b<c<d} (w1·m_ad m_bc, w2·m_ab m_cd, w3·m_ac m_bd)
    fn quads(&self, w: impl Fn(usize, usize, usize, usize) -> [i64; 3]) -> i64 {
        let k = self.k();
        let mut tot = 0;
        for a in 0..k {
            for b in a + 1..k {
                for c in b + 1..k {
                    for d in c + 1..k {
                        let [x, y, z] = w(a, b, c, d);
                        tot += x * self.m(a, d) * self.m(b, c)
                            + y * self.m(a, b) * self.m(c, d)
                            + z * self.m(a, c) * self.m(b, d);
                    }
                }
            }
        }
        tot
    }

    /// Σ_c Σ_{a<b, both ≠ c} w(c,a,b)·m_ac·m_bc
    fn shared(&self, w: impl Fn(usize, usize, usize) -> i64) -> i64 {
        let k = self.k();
        let mut tot = 0;
        for c in 0..k {
            for a in (0..k).filter(|&a| a != c) {
                for b in (a + 1..k).filter(|&b| b != c) {
                    tot += w(c, a, b) * self.m(a, c) * self.m(b, c);
                }
            }
        }
        tot
    }

    /// Σ_{a<b} #{pairs in ∂_ab whose left-break and right-break orders agree}, and the disagreeing count.
    fn break_pairs(&self) -> (i64, i64) {
        let keys: Vec<_> = self.v.chords.iter().map(|c| (c.a, c.b, self.ctx.break_keys(c))).collect();
        let (mut agree, mut dis) = (0, 0);
        for i in 0..keys.len() {
            for j in i + 1..keys.len() {
                let (a, b, (l1, r1)) = keys[i];
                let (a2, b2, (l2, r2)) = keys[j];
                if (a, b) != (a2, b2) {
                    continue;
                }
                if (l1 < l2) == (r1 < r2) {
                    agree += 1;
                } else {
                    dis += 1;
                }
            }
        }
        (agree, dis)
    }

    fn cycle_sum(&self) -> i64 {
        self.cycles.iter().map(Cycle::weight).sum()
    }

    /// Σ over crossing chord pairs of w(ends of both chords).
    fn crossings(&self, w: impl Fn([usize; 4]) -> i64) -> i64 {
        self.pres
            .crossing_pairs()
            .into_iter()
            .map(|(i, j)| {
                let (x, y) = (&self.v.chords[i], &self.v.chords[j]);
                w([x.a, x.b, y.a, y.b])
            })
            .sum()
    }

    /// Σ_{s<t ∈ ∂_c} of the second-term product sums, on raw face indices of s_out, t_out.
    fn term_ii_raw(&self) -> i64 {
        let mut tot = 0;
        for c in 0..self.k() {
            let mo = &self.v.mo[c];
            for s in 0..mo.len() {
                for t in s + 1..mo.len() {
                    for a in 0..self.k() - 1 {
                        for b in a + 1..self.k() - 1 {
                            if a % 2 == 0 && b % 2 == 0 {
                                tot += mo[s][a] * mo[t][b];
                            }
                            if a % 2 == 1 && b % 2 == 1 {
                                tot += mo[s][b] * mo[t][a];
                            }
                        }
                    }
                }
            }
        }
        tot
    }
}

fn m_ab_count(l: &Local) -> Vec<(i64, i64)> {
    (0..l.k())
        .map(|a| ((0..l.k()).filter(|&b| b != a).map(|b| l.m(a, b)).sum(), 0))
        .collect()
}

fn fa_fb(l: &Local) -> Vec<(i64, i64)> {
    let fs: [fn(i64) -> i64; 3] = [|a| a, |a| a * a, c2];
    fs.iter().map(|f| (l.sum_ab(|a, b| f(ix(a)) + f(ix(b))), 0)).collect()
}

fn one_intersection(l: &Local) -> Vec<(i64, i64)> {
    vec![(l.shared(|c, a, b| ix(c) * (ix(a) + ix(b))), 0)]
}

fn leibniz(l: &Local) -> Vec<(i64, i64)> {
    let mut out = vec![];
    let mut check = |n: i64, a: i64| out.push((c2(n * a), a * c2(n) + n * c2(a)));
    for n in 0..12 {
        for a in 0..12 {
            check(n, a);
        }
    }
    for a in 0..l.k() {
        for b in a + 1..l.k() {
            check(l.m(a, b), ix(a));
            check(l.m(a, b), ix(b));
        }
    }
    out
}

fn simple_a_b(l: &Local) -> Vec<(i64, i64)> {
    vec![(l.pairs_s(|_, a, b| ix(a) + ix(b)), 0)]
}

fn three_term(l: &Local) -> Vec<(i64, i64)> {
    let w = |a, b, c, d| {
        let (a, b, c, d) = (ix(a), ix(b), ix(c), ix(d));
        let x = a * b * d + a * c * d + a * b * c + b * c * d;
        [x, x, x]
    };
    vec![(l.quads(w), 0)]
}

fn a_b_identity(l: &Local) -> Vec<(i64, i64)> {
    let k = l.k();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect();
    let mut lhs = 0;
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for &(c, d) in &pairs[i + 1..] {
            if a != c && a != d && b != c && b != d {
                lhs += (ix(a) + ix(b)) * (ix(c) + ix(d)) * l.m(a, b) * l.m(c, d);
            }
        }
    }
    let rhs = l.shared(|_, a, b| ix(a) * ix(b)) + l.sum_ab(|a, b| ix(a) * ix(b));
    vec![(lhs, rhs)]
}

/// Weighted by ac + bd on the sorted indices, i.e. by the products of the interleaved pairs.
fn ab_cd(l: &Local) -> Vec<(i64, i64)> {
    let by_counts = l.quads(|a, b, c, d| {
        let x = ix(a) * ix(c) + ix(b) * ix(d);
        [x, x, x]
    });
    // the same sum read off pairs of chords with four distinct ends
    let ch = &l.v.chords;
    let mut by_chords = 0;
    for i in 0..ch.len() {
        for j in i + 1..ch.len() {
            let mut e = [ch[i].a, ch[i].b, ch[j].a, ch[j].b];
            e.sort();
            if e.windows(2).all(|w| w[0] < w[1]) {
                by_chords += ix(e[0]) * ix(e[2]) + ix(e[1]) * ix(e[3]);
            }
        }
    }
    vec![(by_counts, 0), (by_chords, 0), (by_counts, by_chords)]
}

/// The same sum weighted by ab + cd; false in general, kept as a diagnostic.
fn ab_cd_outer(l: &Local) -> Vec<(i64, i64)> {
    let x = l.quads(|a, b, c, d| {
        let x = ix(a) * ix(b) + ix(c) * ix(d);
        [x, x, x]
    });
    vec![(x, 0)]
}

fn c_lt_a(l: &Local) -> Vec<(i64, i64)> {
    let k = l.k();
    let mut lhs = 0;
    for a in 0..k {
        for b in a + 1..k {
            lhs += c2(l.m(a, b));
        }
    }
    lhs += l.pairs_st(|c, a, b| (a != b && c < a) as i64);
    lhs += l.pairs_s(|c, a, _| (c < a) as i64);
    let mut rhs = 0;
    for c in 0..k {
        for s in 0..l.len(c) {
            rhs += c2((c + 1..k).map(|a| l.mf(c, s, a)).sum());
        }
    }
    vec![(lhs, rhs)]
}

fn weighted_lhs(l: &Local) -> i64 {
    l.quads(|a, b, c, d| [0, 0, ix(a) + ix(b) + ix(c) + ix(d)])
        + l.pairs_st(|c, a, b| t3(c, a, b) as i64 * (ix(a) + ix(b)))
        + l.pairs_s(|c, a, b| t2(c, a, b) as i64 * (ix(a) + ix(b)))
}

fn weighted_cross_counting(l: &Local) -> Vec<(i64, i64)> {
    let lhs = weighted_lhs(l);
    let geometric = l.crossings(|e| e.iter().map(|&x| ix(x)).sum());
    let x = l.ctx.x;
    let n2 = l.ctx.n + 2;
    let mut rhs = 0;
    for b in 0..l.k() {
        let f = x.face(n2, b);
        for &q in &l.v.dz[b] {
            let y = f.elts[q as usize].tgt as usize;
            let bd = &l.ctx.bd[y];
            let r = bd.len() as i64;
            rhs += ix(b) * r / 2;
            for (pos, &(face, _)) in bd.iter().enumerate() {
                let a = if face < b { face } else { face + 1 };
                rhs += (r - 1 - pos as i64) * ix(a);
            }
        }
    }
    vec![(lhs, geometric), (lhs, rhs)]
}

fn even_chords(l: &Local) -> Vec<(i64, i64)> {
    let mut out: Vec<(i64, i64)> = l.pres.order.iter().map(|o| (o.len() as i64, 0)).collect();
    for c in 0..l.k() {
        for s in 0..l.len(c) {
            out.push((l.v.mtot(c, s), 0));
        }
    }
    out
}

fn cross_counting_exact(l: &Local) -> Vec<(i64, i64)> {
    let crossings = l.crossings(|_| 1);
    let (agree, _) = l.break_pairs();
    let lhs = l.quads(|_, _, _, _| [0, 0, 1]) + l.pairs_st(|c, a, b| t3(c, a, b) as i64) + agree;
    let extreme = l.pairs_s(|c, a, b| t2(c, a, b) as i64);
    vec![(crossings, lhs + extreme), (crossings, l.cycle_sum())]
}

fn extreme_c(l: &Local) -> i64 {
    l.pairs_s(|c, a, b| t2(c, a, b) as i64)
}

fn iterate_s_a(l: &Local) -> i64 {
    let w = |c: usize, a: usize, b: usize| ix(a) * (c < a) as i64 + ix(b) * (c < b) as i64;
    l.pairs_st(|c, a, b| if a != b { w(c, a, b) } else { 0 }) + l.pairs_s(w)
}

fn simple_coboundary(l: &Local) -> i64 {
    l.pairs_s(|_, a, b| ix(a) * ix(b))
        + l.pairs_s(|c, a, b| ix(b) * (c < a) as i64 + ix(a) * (c < b) as i64 + (c < a) as i64)
}

fn cross_counting(l: &Local) -> i64 {
    let (agree, _) = l.break_pairs();
    l.quads(|_, _, _, _| [0, 0, 1]) + l.pairs_st(|c, a, b| t3(c, a, b) as i64) + agree + l.cycle_sum()
}

fn big_simplify(l: &Local) -> i64 {
    let lhs = l.shared(|_, a, b| ix(a) * ix(b)) + l.pairs_st(|c, a, b| t3(c, a, b) as i64) + l.term_ii_raw();
    let rhs = l.pairs_st(|c, a, b| t3(c, a, b) as i64 * (ix(a) + ix(b)))
        + l.pairs_s(|c, a, b| t2(c, a, b) as i64 * (ix(a) + ix(b)))
        + l.pairs_st(|c, a, b| (a != b && c < a) as i64)
        + l.pairs_s(|c, a, _| (c < a) as i64);
    lhs + rhs
}

fn moran_rewrite(l: &Local) -> i64 {
    let moran = crate::moransq::term_i(l.v) as i64
        + crate::moransq::term_ii(l.v) as i64
        + crate::moransq::term_iii(l.ctx, l.v, Term3::Honest) as i64;
    let mut rhs = l.shared(|_, a, b| ix(a) * ix(b))
        + l.sum_ab(|a, b| ix(a) * ix(b))
        + l.quads(|a, b, c, d| [0, 0, ix(a) + ix(b) + ix(c) + ix(d)])
        + l.cycle_sum()
        + l.pairs_st(|c, a, b| t3(c, a, b) as i64)
        + l.term_ii_raw();
    for a in 0..l.k() {
        for b in a + 1..l.k() {
            rhs += c2(l.m(a, b));
        }
    }
    moran + rhs
}

pub const IDENTITIES: &[Identity] = &[
    Identity { name: "m_ab count", eval: Eval::Exact(m_ab_count), diagnostic: false },
    Identity { name: "fa+fb", eval: Eval::Exact(fa_fb), diagnostic: false },
    Identity { name: "one intersection", eval: Eval::Exact(one_intersection), diagnostic: false },
    Identity { name: "Leibniz", eval: Eval::Exact(leibniz), diagnostic: false },
    Identity { name: "simple a+b", eval: Eval::Exact(simple_a_b), diagnostic: false },
    Identity { name: "three-index sum", eval: Eval::Exact(three_term), diagnostic: false },
    Identity { name: "a+b", eval: Eval::Exact(a_b_identity), diagnostic: false },
    Identity { name: "ab+cd", eval: Eval::Exact(ab_cd), diagnostic: false },
    Identity { name: "ab+cd, outer weight", eval: Eval::Exact(ab_cd_outer), diagnostic: true },
    Identity { name: "c<a simplify", eval: Eval::Exact(c_lt_a), diagnostic: false },
    Identity { name: "weighted cross counting", eval: Eval::Exact(weighted_cross_counting), diagnostic: false },
    Identity { name: "even chords", eval: Eval::Exact(even_chords), diagnostic: false },
    Identity { name: "cross counting (exact)", eval: Eval::Exact(cross_counting_exact), diagnostic: false },
    Identity { name: "extreme c", eval: Eval::Cochain(extreme_c), diagnostic: false },
    Identity { name: "iterate through s,a", eval: Eval::Cochain(iterate_s_a), diagnostic: false },
    Identity { name: "simple coboundary", eval: Eval::Cochain(simple_coboundary), diagnostic: false },
    Identity { name: "cross counting", eval: Eval::Cochain(cross_counting), diagnostic: false },
    Identity { name: "big simplify", eval: Eval::Cochain(big_simplify), diagnostic: false },
    Identity { name: "three-term rewrite", eval: Eval::Cochain(moran_rewrite), diagnostic: false },
];
