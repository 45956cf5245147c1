//! The semi-simplicial object of a cube functor: levels, face spans and their orders.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::burnside::{CoherenceReport, CubeFunctor};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemisimpError {
    #[error("cube functor is not coherent: {} face and {} hexagon failures", .0.faces.len(), .0.hexagons.len())]
    Incoherent(CoherenceReport),
    #[error("a_b is undefined for a = b = {0}")]
    EqualIndices(usize),
    #[error("span elements live in different face spans")]
    MixedHomes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelGen {
    pub vertex: u32,
    pub local: u32,
    pub q: i32,
}

#[derive(Debug, Clone)]
pub struct Level {
    pub n: i32,
    pub gens: Vec<LevelGen>,
    /// Vertices of weight n+1 in increasing (colex) order.
    pub vertices: Vec<u32>,
}

impl Level {
    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpanEdge {
    pub src: u32,
    pub tgt: u32,
}

/// ∂ⁿ_i : X_n → X_{n-1}, stored block by block in (source, target) order.
#[derive(Debug, Clone)]
pub struct FaceSpan {
    pub n: i32,
    pub face: usize,
    pub elts: Vec<SpanEdge>,
    src_start: Vec<u32>,
    block_start: Vec<u32>,
}

impl FaceSpan {
    pub fn from_src(&self, z: u32) -> std::ops::Range<u32> {
        self.src_start[z as usize]..self.src_start[z as usize + 1]
    }
}

#[derive(Debug, Clone)]
pub struct SemiSimplicialObject {
    functor: CubeFunctor,
    levels: Vec<Level>,
    faces: Vec<Vec<FaceSpan>>,
    vertex_offset: Vec<u32>,
}

fn nth_bit(a: u32, i: usize) -> usize {
    (0..32).filter(|b| a >> b & 1 == 1).nth(i).unwrap()
}

pub fn a_sub_b(a: usize, b: usize) -> Result<usize, SemisimpError> {
    match a.cmp(&b) {
        Ordering::Less => Ok(a),
        Ordering::Greater => Ok(a - 1),
        Ordering::Equal => Err(SemisimpError::EqualIndices(a)),
    }
}

pub fn lambda_of(f: CubeFunctor) -> Result<SemiSimplicialObject, SemisimpError> {
    let r = f.check_coherence();
    if !r.is_empty() {
        return Err(SemisimpError::Incoherent(r));
    }
    Ok(lambda_of_unchecked(f))
}

/// Builds the object without validating the face bijections first.
pub fn lambda_of_unchecked(f: CubeFunctor) -> SemiSimplicialObject {
    let n = f.n;
    let mut vertex_offset = vec![0u32; 1 << n];
    let mut levels = vec![];
    for w in 0..=n {
        let vertices: Vec<u32> = (0..1u32 << n).filter(|a| a.count_ones() as usize == w).collect();
        let mut gens = vec![];
        for &a in &vertices {
            vertex_offset[a as usize] = gens.len() as u32;
            for (local, g) in f.vertex_sets[a as usize].elements.iter().enumerate() {
                gens.push(LevelGen {
                    vertex: a,
                    local: local as u32,
                    q: g.q,
                });
            }
        }
        levels.push(Level {
            n: w as i32 - 1,
            gens,
            vertices,
        });
    }
    let mut faces = vec![];
    for lv in 0..n {
        // source level lv (weight lv+1)
        let src = &levels[lv + 1];
        let mut spans = vec![];
        for i in 0..=lv {
            let mut elts = vec![];
            let mut src_start = vec![0u32; src.len() + 1];
            let mut block_start = vec![u32::MAX; 1 << n];
            for &a in &src.vertices {
                block_start[a as usize] = elts.len() as u32;
                let c = nth_bit(a, i);
                let e = f.edge(a, c);
                let (so, to) = (vertex_offset[a as usize], vertex_offset[(a & !(1 << c)) as usize]);
                for &(s, t) in &e.elements {
                    elts.push(SpanEdge {
                        src: so + s,
                        tgt: to + t,
                    });
                    src_start[(so + s) as usize + 1] += 1;
                }
            }
            for z in 0..src.len() {
                src_start[z + 1] += src_start[z];
            }
            spans.push(FaceSpan {
                n: lv as i32,
                face: i,
                elts,
                src_start,
                block_start,
            });
        }
        faces.push(spans);
    }
    SemiSimplicialObject {
        functor: f,
        levels,
        faces,
        vertex_offset,
    }
}

impl SemiSimplicialObject {
    pub fn functor(&self) -> &CubeFunctor {
        &self.functor
    }

    /// Largest n with X_n nonempty.
    pub fn top(&self) -> i32 {
        self.functor.n as i32 - 1
    }

    pub fn level(&self, n: i32) -> Option<&Level> {
        if n < -1 {
            return None;
        }
        self.levels.get((n + 1) as usize)
    }

    pub fn level_len(&self, n: i32) -> usize {
        self.level(n).map_or(0, |l| l.len())
    }

    pub fn face(&self, n: i32, i: usize) -> &FaceSpan {
        &self.faces[n as usize][i]
    }

    pub fn has_faces(&self, n: i32) -> bool {
        n >= 0 && (n as usize) < self.faces.len()
    }

    pub fn offset_of(&self, vertex: u32) -> u32 {
        self.vertex_offset[vertex as usize]
    }

    /// Right-break factorization (q′ ∈ ∂_b, p′ ∈ ∂_a) of the element of ∂_{ab} over X_n
    /// whose left-break factorization is (q ∈ ∂_a, p ∈ ∂_{b-1}).
    pub fn right_break(&self, n: i32, a: usize, b: usize, q: u32, p: u32) -> (u32, u32) {
        debug_assert!(a < b);
        let fq = self.face(n, a);
        let z = fq.elts[q as usize].src;
        let top = self.levels[(n + 1) as usize].gens[z as usize].vertex;
        let (u, v) = (nth_bit(top, a), nth_bit(top, b));
        let fp = self.face(n - 1, b - 1);
        let e1 = q - fq.block_start[top as usize];
        let e2 = p - fp.block_start[(top & !(1 << u)) as usize];
        let (f1, f2) = self
            .functor
            .swap(top, u, v, (e1, e2))
            .expect("face bijection covers every composite");
        let q2 = self.face(n, b).block_start[top as usize] + f1;
        let p2 = self.face(n - 1, a).block_start[(top & !(1 << v)) as usize] + f2;
        (q2, p2)
    }
}

/// Base orders on every ∂ⁿ_a as ranks; all derived orders are built from these.
#[derive(Debug, Clone)]
pub struct SpanOrder {
    ranks: Vec<Vec<Vec<u32>>>,
    pub seed: Option<u64>,
}

impl SpanOrder {
    pub fn canonical(x: &SemiSimplicialObject) -> Self {
        let ranks = x
            .faces
            .iter()
            .map(|fs| fs.iter().map(|f| (0..f.elts.len() as u32).collect()).collect())
            .collect();
        SpanOrder { ranks, seed: None }
    }

    pub fn seeded(x: &SemiSimplicialObject, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut o = Self::canonical(x);
        for fs in &mut o.ranks {
            for r in fs {
                r.shuffle(&mut rng);
            }
        }
        o.seed = Some(seed);
        o
    }

    pub fn rank(&self, n: i32, face: usize, idx: u32) -> u32 {
        self.ranks[n as usize][face][idx as usize]
    }

    /// Key of the derived order on ∂ⁿ = ⊔_a ∂ⁿ_a.
    pub fn derived(&self, n: i32, face: usize, idx: u32) -> (usize, u32) {
        (face, self.rank(n, face, idx))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Faces {
    One(usize),
    Two(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Break {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpanElement {
    pub n: i32,
    pub faces: Faces,
    pub source: u32,
    pub target: u32,
    /// q ∈ ∂_a and p ∈ ∂_{b-1}; for a single face only `left.0` is meaningful.
    pub left: (u32, u32),
    /// q′ ∈ ∂_b and p′ ∈ ∂_a.
    pub right: (u32, u32),
}

/// ∂_U(z, T) in derived order (one face) or left-break order (two faces).
pub fn boundary_elements(
    x: &SemiSimplicialObject,
    order: &SpanOrder,
    n: i32,
    z: u32,
    target: impl Fn(u32) -> bool,
    faces: Faces,
) -> Vec<SpanElement> {
    match faces {
        Faces::One(a) => {
            let f = x.face(n, a);
            let mut v: Vec<SpanElement> = f
                .from_src(z)
                .filter(|&i| target(f.elts[i as usize].tgt))
                .map(|i| SpanElement {
                    n,
                    faces,
                    source: z,
                    target: f.elts[i as usize].tgt,
                    left: (i, 0),
                    right: (i, 0),
                })
                .collect();
            v.sort_by_key(|s| order.rank(n, a, s.left.0));
            v
        }
        Faces::Two(a, b) => {
            assert!(a < b);
            let (fq, fp) = (x.face(n, a), x.face(n - 1, b - 1));
            let mut v = vec![];
            for q in fq.from_src(z) {
                let y = fq.elts[q as usize].tgt;
                for p in fp.from_src(y) {
                    let t = fp.elts[p as usize].tgt;
                    if target(t) {
                        v.push(SpanElement {
                            n,
                            faces,
                            source: z,
                            target: t,
                            left: (q, p),
                            right: x.right_break(n, a, b, q, p),
                        });
                    }
                }
            }
            v.sort_by(|s, t| compare(order, Break::Left, s, t).unwrap());
            v
        }
    }
}

pub fn compare(
    order: &SpanOrder,
    brk: Break,
    s: &SpanElement,
    t: &SpanElement,
) -> Result<Ordering, SemisimpError> {
    if s.n != t.n || s.faces != t.faces || s.source != t.source {
        return Err(SemisimpError::MixedHomes);
    }
    let n = s.n;
    let key = |e: &SpanElement| match (e.faces, brk) {
        (Faces::One(a), _) => (order.rank(n, a, e.left.0), 0),
        (Faces::Two(a, b), Break::Left) => {
            (order.rank(n, a, e.left.0), order.rank(n - 1, b - 1, e.left.1))
        }
        (Faces::Two(a, b), Break::Right) => {
            (order.rank(n, b, e.right.0), order.rank(n - 1, a, e.right.1))
        }
    };
    Ok(key(s).cmp(&key(t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::burnside::khovanov_functor;
    use crate::fixtures::fixture;

    #[test]
    fn test_a_sub_b() {
        assert_eq!(a_sub_b(2, 5), Ok(2));
        assert_eq!(a_sub_b(5, 2), Ok(4));
        assert_eq!(a_sub_b(0, 1), Ok(0));
        assert!(a_sub_b(3, 3).is_err());
    }

    #[test]
    fn test_unknot() {
        let x = lambda_of(khovanov_functor(&fixture("unknot").unwrap())).unwrap();
        assert_eq!(x.level_len(-1), 2);
        assert_eq!(x.level_len(0), 0);
        assert!(!x.has_faces(0));
    }

    #[test]
    fn test_hopf_levels() {
        let d = fixture("hopf_pos").unwrap();
        let x = lambda_of(khovanov_functor(&d)).unwrap();
        for n in -1..=1 {
            let expect: usize = (0..4u32)
                .filter(|a| a.count_ones() as i32 == n + 1)
                .map(|a| 1 << d.resolve(a).circle_count())
                .sum();
            assert_eq!(x.level_len(n), expect);
        }
    }

    #[test]
    fn test_composites_agree() {
        // |∂_ab| equals |∂_{a_b} ∘ ∂_b| for every source
        let x = lambda_of(khovanov_functor(&fixture("trefoil_right").unwrap())).unwrap();
        let o = SpanOrder::canonical(&x);
        let n = 2;
        for z in 0..x.level_len(n) as u32 {
            for a in 0..3 {
                for b in a + 1..3 {
                    let left = boundary_elements(&x, &o, n, z, |_| true, Faces::Two(a, b));
                    let mut via_b = vec![];
                    let fb = x.face(n, b);
                    let fa = x.face(n - 1, a);
                    for q in fb.from_src(z) {
                        for p in fa.from_src(fb.elts[q as usize].tgt) {
                            via_b.push((q, p));
                        }
                    }
                    let mut rights: Vec<(u32, u32)> = left.iter().map(|s| s.right).collect();
                    rights.sort();
                    assert_eq!(rights, via_b);
                }
            }
        }
    }

    #[test]
    fn test_compare() {
        let x = lambda_of(khovanov_functor(&fixture("trefoil_right").unwrap())).unwrap();
        let o = SpanOrder::seeded(&x, 7);
        let v = (0..x.level_len(1) as u32)
            .map(|z| boundary_elements(&x, &o, 1, z, |_| true, Faces::Two(0, 1)))
            .find(|v| v.len() > 1)
            .unwrap();
        let z = v[0].source;
        assert_eq!(compare(&o, Break::Left, &v[0], &v[0]), Ok(Ordering::Equal));
        assert_eq!(compare(&o, Break::Left, &v[0], &v[1]), Ok(Ordering::Less));
        let w = boundary_elements(&x, &o, 1, z, |_| true, Faces::One(0));
        assert_eq!(compare(&o, Break::Left, &v[0], &w[0]), Err(SemisimpError::MixedHomes));
    }
}
