//! sq2 from boundary matchings, chord presentations and cycles.

use crate::f2algebra::{Cochain, F2Complex};
use crate::moransq::{SqError, SqEvalContext, ZView};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MatchingVariant {
    /// (s_1,s_2), (s_3,s_4), …
    #[default]
    Consecutive,
    /// (s_1,s_r), (s_2,s_{r-1}), …
    Nested,
    /// (s_1,s_2), (s_2,s_3), …: a path cover rather than a matching; only for comparison.
    Overlapping,
}

impl MatchingVariant {
    pub fn name(&self) -> &'static str {
        match self {
            MatchingVariant::Consecutive => "consecutive",
            MatchingVariant::Nested => "nested",
            MatchingVariant::Overlapping => "overlapping",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::Consecutive, Self::Nested, Self::Overlapping]
            .into_iter()
            .find(|v| v.name() == s)
    }
}

/// For each y ∈ X_{n+1}, ordered pairs of positions in ∂(y, α).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub variant: MatchingVariant,
    pub pairs: Vec<Vec<(usize, usize)>>,
}

pub fn boundary_matching(ctx: &SqEvalContext, variant: MatchingVariant) -> Result<Matching, SqError> {
    let mut pairs = vec![];
    for (y, l) in ctx.bd.iter().enumerate() {
        let r = l.len();
        if r % 2 == 1 {
            return Err(SqError::OddBoundary(y as u32));
        }
        let p: Vec<(usize, usize)> = match variant {
            MatchingVariant::Consecutive => (0..r / 2).map(|i| (2 * i, 2 * i + 1)).collect(),
            MatchingVariant::Nested => (0..r / 2).map(|i| (i, r - 1 - i)).collect(),
            MatchingVariant::Overlapping => (1..r).map(|i| (i - 1, i)).collect(),
        };
        for &(s, t) in &p {
            assert!(l[s].0 <= l[t].0, "pair violates the face order");
        }
        pairs.push(p);
    }
    Ok(Matching { variant, pairs })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChordEnd {
    pub chord: usize,
    /// face index the end sits at
    pub index: usize,
    /// q ∈ ∂_index(z)
    pub q: u32,
    pub y: u32,
    /// position of the end's element in ∂(y, α)
    pub pos: usize,
}

#[derive(Debug, Clone)]
pub struct ChordPresentation {
    pub view: ZView,
    /// ends[chord] = [end at a, end at b]
    pub ends: Vec<[ChordEnd; 2]>,
    /// per index, ends in perturbed order as (chord, side)
    pub order: Vec<Vec<(usize, usize)>>,
    /// global left-to-right position of each end
    pub place: Vec<[usize; 2]>,
    pub degenerate: bool,
}

pub fn chord_presentation(ctx: &SqEvalContext, z: u32) -> Result<ChordPresentation, SqError> {
    let view = ctx.zview(z);
    let n2 = ctx.n + 2;
    let mut ends = vec![];
    for (i, ch) in view.chords.iter().enumerate() {
        let mk = |index: usize, q: u32, p: (usize, u32)| {
            let y = ctx.x.face(n2, index).elts[q as usize].tgt;
            ChordEnd {
                chord: i,
                index,
                q,
                y,
                pos: ctx.position(y, p),
            }
        };
        ends.push([
            mk(ch.a, ch.left.0, (ch.b - 1, ch.left.1)),
            mk(ch.b, ch.right.0, (ch.a, ch.right.1)),
        ]);
    }
    let mut order = vec![vec![]; view.k];
    for (i, e) in ends.iter().enumerate() {
        order[e[0].index].push((i, 0));
        order[e[1].index].push((i, 1));
    }
    for (c, l) in order.iter_mut().enumerate() {
        if l.len() % 2 == 1 {
            return Err(SqError::OddBoundary(z));
        }
        l.sort_by_key(|&(i, s)| {
            let e = ends[i][s];
            (ctx.order.rank(n2, c, e.q), e.pos)
        });
    }
    let mut place = vec![[0usize; 2]; ends.len()];
    let mut at = 0;
    for l in &order {
        for &(i, s) in l {
            place[i][s] = at;
            at += 1;
        }
    }
    Ok(ChordPresentation {
        view,
        ends,
        order,
        place,
        degenerate: false,
    })
}

impl ChordPresentation {
    pub fn crosses(&self, i: usize, j: usize) -> bool {
        let [a1, a2] = self.place[i];
        let [b1, b2] = self.place[j];
        (a1 < b1 && b1 < a2 && a2 < b2) || (b1 < a1 && a1 < b2 && b2 < a2)
    }

    pub fn crossing_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.ends.len();
        let mut v = vec![];
        for i in 0..n {
            for j in i + 1..n {
                if self.crosses(i, j) {
                    v.push((i, j));
                }
            }
        }
        v
    }

    /// Tab-separated dump: one line per chord end.
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("chord\tside\tindex\tq\ty\tpos\tplace\n");
        for (i, e) in self.ends.iter().enumerate() {
            for (side, end) in e.iter().enumerate() {
                let place = if self.degenerate { end.index } else { self.place[i][side] };
                s += &format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                    i, side, end.index, end.q, end.y, end.pos, place
                );
            }
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Visit {
    /// facet of the previous chord's far end
    pub from: usize,
    pub at: usize,
    pub rightward: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub chords: Vec<usize>,
    pub visits: Vec<Visit>,
}

impl Cycle {
    /// 1 + #{a→b⃗→c | a>b} + #{a→b⃖→c | a<b}
    pub fn weight(&self) -> i64 {
        1 + self
            .visits
            .iter()
            .filter(|v| (v.rightward && v.from > v.at) || (!v.rightward && v.from < v.at))
            .count() as i64
    }
}

pub fn gamma_cycles(
    pres: &ChordPresentation,
    m: &Matching,
    reverse: bool,
) -> Result<Vec<Cycle>, SqError> {
    let bad = |s: String| SqError::Matching(s);
    // partner of each end: the other end over the same q glued by the matching
    let mut partner = vec![[None::<(usize, usize)>; 2]; pres.ends.len()];
    for (c, l) in pres.order.iter().enumerate() {
        let _ = c;
        for &(i, s) in l {
            let e = pres.ends[i][s];
            let pairs = &m.pairs[e.y as usize];
            let hits: Vec<usize> = pairs
                .iter()
                .filter(|p| p.0 == e.pos || p.1 == e.pos)
                .map(|p| if p.0 == e.pos { p.1 } else { p.0 })
                .collect();
            let other = match hits.as_slice() {
                [o] => *o,
                [] => return Err(bad(format!("unglued end over generator {}", e.y))),
                _ => return Err(bad(format!("end glued more than once over generator {}", e.y))),
            };
            let found = l.iter().copied().find(|&(j, t)| {
                let f = pres.ends[j][t];
                f.q == e.q && f.pos == other
            });
            partner[i][s] = Some(found.ok_or_else(|| bad("partner end missing".into()))?);
        }
    }
    let mut seen = vec![false; pres.ends.len()];
    let mut cycles = vec![];
    for start in 0..pres.ends.len() {
        if seen[start] {
            continue;
        }
        let mut chords = vec![];
        let mut visits = vec![];
        let (mut ch, mut out) = (start, if reverse { 0 } else { 1 });
        loop {
            if seen[ch] {
                if ch != start {
                    return Err(bad("walk does not close".into()));
                }
                break;
            }
            seen[ch] = true;
            chords.push(ch);
            let e = pres.ends[ch][out];
            let (nch, nside) = partner[ch][out].unwrap();
            let f = pres.ends[nch][nside];
            visits.push(Visit {
                from: pres.ends[ch][1 - out].index,
                at: e.index,
                rightward: e.pos < f.pos,
            });
            ch = nch;
            out = 1 - nside;
        }
        if chords.len() != visits.len() {
            return Err(bad("walk does not close".into()));
        }
        cycles.push(Cycle { chords, visits });
    }
    Ok(cycles)
}

/// ⟨sq²α, z⟩ from its three terms, each as an integer.
pub fn ls_terms(ctx: &SqEvalContext, z: u32, m: &Matching) -> Result<[i64; 3], SqError> {
    let pres = chord_presentation(ctx, z)?;
    let v = &pres.view;
    let (mut t1, mut h) = (0i64, 0i64);
    for a in 0..v.k {
        for b in a + 1..v.k {
            t1 += (a * b) as i64 * v.m(a, b);
            h += (a + b) as i64 * v.m(a, b);
        }
    }
    if h % 2 != 0 {
        return Err(SqError::Odd(z));
    }
    let t3 = gamma_cycles(&pres, m, false)?.iter().map(Cycle::weight).sum();
    Ok([t1, h / 2, t3])
}

pub fn sq2_ls_raw(ctx: &SqEvalContext, m: &Matching) -> Result<Cochain, SqError> {
    let mut out = Cochain::zero(ctx.x, ctx.n + 2);
    for z in 0..ctx.targets() {
        let [a, b, c] = ls_terms(ctx, z, m)?;
        if (a + b + c) % 2 == 1 {
            out.bits.flip(z as usize);
        }
    }
    Ok(out)
}

pub fn sq2_ls(c: &F2Complex, ctx: &SqEvalContext, m: &Matching) -> Result<Cochain, SqError> {
    let out = sq2_ls_raw(ctx, m)?;
    if !c.delta(&out).is_zero() {
        return Err(SqError::OutputNotCocycle(out));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::burnside::khovanov_functor;
    use crate::f2algebra::cochain_complex;
    use crate::fixtures::fixture;
    use crate::semisimp::{lambda_of, SpanOrder};

    #[test]
    fn test_cycles_partition_chords() {
        let d = fixture("4_1").unwrap();
        let x = lambda_of(khovanov_functor(&d)).unwrap();
        let c = cochain_complex(&x, d.n_minus);
        let o = SpanOrder::seeded(&x, 3);
        for (n, j) in c.blocks().collect::<Vec<_>>() {
            for k in c.kernel_basis(n, j) {
                let ctx = SqEvalContext::new(&x, &o, &k).unwrap();
                let m = boundary_matching(&ctx, MatchingVariant::Consecutive).unwrap();
                for z in 0..ctx.targets() {
                    let p = chord_presentation(&ctx, z).unwrap();
                    let fwd = gamma_cycles(&p, &m, false).unwrap();
                    let back = gamma_cycles(&p, &m, true).unwrap();
                    let len: usize = fwd.iter().map(|c| c.chords.len()).sum();
                    assert_eq!(len, p.ends.len());
                    let w = |cs: &[Cycle]| cs.iter().map(Cycle::weight).sum::<i64>() % 2;
                    assert_eq!(w(&fwd), w(&back));
                }
            }
        }
    }

    #[test]
    fn test_overlapping_glues_twice() {
        let d = fixture("8_19").unwrap();
        let x = lambda_of(khovanov_functor(&d)).unwrap();
        let c = cochain_complex(&x, d.n_minus);
        let o = SpanOrder::canonical(&x);
        let mut seen_long = false;
        for (n, j) in c.blocks().collect::<Vec<_>>() {
            for k in c.kernel_basis(n, j) {
                let ctx = SqEvalContext::new(&x, &o, &k).unwrap();
                let m = boundary_matching(&ctx, MatchingVariant::Overlapping).unwrap();
                let long = |l: &Vec<(usize, u32)>| l.len() >= 4;
                let hit = (0..ctx.targets()).any(|z| {
                    let p = chord_presentation(&ctx, z).unwrap();
                    p.ends.iter().flatten().any(|e| long(&ctx.bd[e.y as usize]))
                });
                if hit {
                    seen_long = true;
                    assert!(matches!(sq2_ls_raw(&ctx, &m), Err(SqError::Matching(_))));
                } else {
                    assert!(sq2_ls_raw(&ctx, &m).is_ok());
                }
            }
        }
        assert!(seen_long);
    }
}
