//! Correspondences of finite sets and the Khovanov cube functor.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linkio::{LinkDiagram, Resolution};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BurnsideError {
    #[error("cannot compose: target of the first correspondence is not the source of the second")]
    EndpointMismatch,
    #[error("malformed functor data: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub id: u32,
    pub q: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FinSet {
    pub elements: Vec<Generator>,
}

impl FinSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correspondence {
    pub source: Arc<FinSet>,
    pub target: Arc<FinSet>,
    /// (source index, target index)
    pub elements: Vec<(u32, u32)>,
}

impl Correspondence {
    pub fn identity(x: Arc<FinSet>) -> Self {
        let elements = (0..x.len() as u32).map(|i| (i, i)).collect();
        Correspondence {
            source: x.clone(),
            target: x,
            elements,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// A composite correspondence remembering the factor elements of each element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Composite {
    pub corr: Correspondence,
    /// (index in the first factor, index in the second factor)
    pub witnesses: Vec<(u32, u32)>,
}

fn same_set(a: &Arc<FinSet>, b: &Arc<FinSet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// `f` followed by `g`. Elements are ordered by (index in g, index in f).
pub fn compose(f: &Correspondence, g: &Correspondence) -> Result<Composite, BurnsideError> {
    if !same_set(&f.target, &g.source) {
        return Err(BurnsideError::EndpointMismatch);
    }
    let mut by_target: Vec<Vec<u32>> = vec![vec![]; f.target.len()];
    for (i, &(_, t)) in f.elements.iter().enumerate() {
        by_target[t as usize].push(i as u32);
    }
    let mut elements = vec![];
    let mut witnesses = vec![];
    for (j, &(s, t)) in g.elements.iter().enumerate() {
        for &i in &by_target[s as usize] {
            elements.push((f.elements[i as usize].0, t));
            witnesses.push((i, j as u32));
        }
    }
    Ok(Composite {
        corr: Correspondence {
            source: f.source.clone(),
            target: g.target.clone(),
            elements,
        },
        witnesses,
    })
}

/// Bijection between the two composites around the square from `top` to `top ∖ {u, v}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceBijection {
    pub top: u32,
    pub u: usize,
    pub v: usize,
    /// Witnesses of F(top) → F(top∖u) → F(top∖{u,v}), in composite order.
    pub via_u: Vec<(u32, u32)>,
    /// Witnesses of F(top) → F(top∖v) → F(top∖{u,v}), in composite order.
    pub via_v: Vec<(u32, u32)>,
    /// `map[i]` is the index in `via_v` matched with `via_u[i]`.
    pub map: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladybug {
    /// Right pair, read off from the smaller crossing of the square.
    Right,
    /// Right pair, read off from the larger crossing.
    RightFromLarger,
    /// Left pair (the mirror convention).
    Left,
}

#[derive(Debug, Clone)]
pub struct CubeFunctor {
    pub n: usize,
    pub vertex_sets: Vec<Arc<FinSet>>,
    /// (A, a) with a ∈ A: F(A) → F(A∖a)
    pub edges: BTreeMap<(u32, usize), Correspondence>,
    /// (A, u, v) with u < v in A
    pub faces: BTreeMap<(u32, usize, usize), FaceBijection>,
}

fn bits(a: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| a >> i & 1 == 1)
}

fn label(g: u32, k: usize, i: usize) -> u32 {
    g >> (k - 1 - i) & 1
}

fn traced(r: &Resolution) -> usize {
    r.circles.iter().filter(|c| !c.is_empty()).count()
}

pub fn khovanov_functor(d: &LinkDiagram) -> CubeFunctor {
    khovanov_functor_with(d, Ladybug::Right)
}

pub fn khovanov_functor_with(d: &LinkDiagram, ladybug: Ladybug) -> CubeFunctor {
    let n = d.crossing_count();
    let shift = d.n_plus as i32 - 2 * d.n_minus as i32;
    let res: Vec<Resolution> = (0..1u32 << n).map(|a| d.resolve(a)).collect();
    let vertex_sets: Vec<Arc<FinSet>> = res
        .iter()
        .map(|r| {
            let k = r.circle_count();
            let w = r.vertex.count_ones() as i32;
            let elements = (0..1u32 << k)
                .map(|g| Generator {
                    id: g,
                    q: k as i32 - 2 * g.count_ones() as i32 + w + shift,
                })
                .collect();
            Arc::new(FinSet { elements })
        })
        .collect();

    let mut edges = BTreeMap::new();
    for a in 0..1u32 << n {
        for c in bits(a) {
            let b = a & !(1 << c);
            let (ra, rb) = (&res[a as usize], &res[b as usize]);
            let (ka, kb) = (ra.circle_count(), rb.circle_count());
            let arcs = d.pd.crossings[c];
            let mut ta: Vec<usize> = arcs.iter().map(|&l| ra.arc_circle[l as usize]).collect();
            let mut tb: Vec<usize> = arcs.iter().map(|&l| rb.arc_circle[l as usize]).collect();
            ta.sort();
            ta.dedup();
            tb.sort();
            tb.dedup();
            // untouched circles of B and their images in A
            let map: Vec<(usize, usize)> = (0..kb)
                .filter(|i| !tb.contains(i))
                .map(|i| {
                    let j = match rb.circles[i].first() {
                        Some(&l) => ra.arc_circle[l as usize],
                        None => traced(ra) + i - traced(rb),
                    };
                    (i, j)
                })
                .collect();
            let mut elements = vec![];
            for h in 0..1u32 << kb {
                let mut g0 = 0u32;
                for &(i, j) in &map {
                    g0 |= label(h, kb, i) << (ka - 1 - j);
                }
                match (tb.len(), ta.len()) {
                    (2, 1) => {
                        let l = label(h, kb, tb[0]) + label(h, kb, tb[1]);
                        if l < 2 {
                            elements.push((g0 | l << (ka - 1 - ta[0]), h));
                        }
                    }
                    (1, 2) => {
                        let (s0, s1) = (ka - 1 - ta[0], ka - 1 - ta[1]);
                        if label(h, kb, tb[0]) == 0 {
                            elements.push((g0 | 1 << s1, h));
                            elements.push((g0 | 1 << s0, h));
                        } else {
                            elements.push((g0 | 1 << s0 | 1 << s1, h));
                        }
                    }
                    _ => panic!("crossing {} neither merges nor splits", c + 1),
                }
            }
            elements.sort();
            edges.insert(
                (a, c),
                Correspondence {
                    source: vertex_sets[a as usize].clone(),
                    target: vertex_sets[b as usize].clone(),
                    elements,
                },
            );
        }
    }

    let mut f = CubeFunctor {
        n,
        vertex_sets,
        edges,
        faces: BTreeMap::new(),
    };

    for a in 0..1u32 << n {
        let cs: Vec<usize> = bits(a).collect();
        for (i, &u) in cs.iter().enumerate() {
            for &v in &cs[i + 1..] {
                let (via_u, via_v) = f.composites(a, u, v);
                let (e1, e1v) = (&f.edges[&(a, u)], &f.edges[&(a, v)]);
                let (e2, e2v) = (
                    &f.edges[&(a & !(1 << u), v)],
                    &f.edges[&(a & !(1 << v), u)],
                );
                let ends = |x: &Correspondence, y: &Correspondence, w: &(u32, u32)| {
                    (x.elements[w.0 as usize].0, y.elements[w.1 as usize].1)
                };
                let mut groups: HashMap<(u32, u32), (Vec<u32>, Vec<u32>)> = HashMap::new();
                for (k, w) in via_u.iter().enumerate() {
                    groups.entry(ends(e1, e2, w)).or_default().0.push(k as u32);
                }
                for (k, w) in via_v.iter().enumerate() {
                    groups.entry(ends(e1v, e2v, w)).or_default().1.push(k as u32);
                }
                let mut map = vec![u32::MAX; via_u.len()];
                for (_, (xs, ys)) in groups {
                    assert_eq!(xs.len(), ys.len(), "square does not commute");
                    match xs.len() {
                        1 => map[xs[0] as usize] = ys[0],
                        2 => {
                            let (arc, pos) = match ladybug {
                                Ladybug::Right => (u, 0),
                                Ladybug::RightFromLarger => (v, 0),
                                Ladybug::Left => (u, 1),
                            };
                            let arc = d.pd.crossings[arc][pos] as usize;
                            let mid_label = |top: u32, gone: usize, e: &Correspondence, k: u32| {
                                let r = &res[(top & !(1 << gone)) as usize];
                                let g = e.elements[k as usize].1;
                                label(g, r.circle_count(), r.arc_circle[arc])
                            };
                            let lu: Vec<u32> = xs
                                .iter()
                                .map(|&k| mid_label(a, u, e1, via_u[k as usize].0))
                                .collect();
                            let lv: Vec<u32> = ys
                                .iter()
                                .map(|&k| mid_label(a, v, e1v, via_v[k as usize].0))
                                .collect();
                            assert!(lu[0] != lu[1] && lv[0] != lv[1], "degenerate ladybug");
                            for (x, l) in xs.iter().zip(&lu) {
                                let y = if lv[0] == *l { ys[0] } else { ys[1] };
                                map[*x as usize] = y;
                            }
                        }
                        m => panic!("{} parallel paths across a square", m),
                    }
                }
                f.faces.insert(
                    (a, u, v),
                    FaceBijection {
                        top: a,
                        u,
                        v,
                        via_u,
                        via_v,
                        map,
                    },
                );
            }
        }
    }
    f
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceFailure {
    pub top: u32,
    pub u: usize,
    pub v: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HexagonFailure {
    pub top: u32,
    pub crossings: [usize; 3],
    /// Number of paths not returned to themselves.
    pub broken: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoherenceReport {
    pub faces: Vec<FaceFailure>,
    pub hexagons: Vec<HexagonFailure>,
}

impl CoherenceReport {
    pub fn is_empty(&self) -> bool {
        self.faces.is_empty() && self.hexagons.is_empty()
    }
}

impl CubeFunctor {
    pub fn edge(&self, top: u32, a: usize) -> &Correspondence {
        &self.edges[&(top, a)]
    }

    /// Witness lists of the two composites around the square (top; u, v).
    pub fn composites(&self, top: u32, u: usize, v: usize) -> (Vec<(u32, u32)>, Vec<(u32, u32)>) {
        let via = |x: usize, y: usize| {
            compose(&self.edges[&(top, x)], &self.edges[&(top & !(1 << x), y)])
                .unwrap()
                .witnesses
        };
        (via(u, v), via(v, u))
    }

    /// Moves a path that removes `x` then `y` from `top` to the matched path removing `y` then `x`.
    pub fn swap(&self, top: u32, x: usize, y: usize, w: (u32, u32)) -> Option<(u32, u32)> {
        let key = |p: &(u32, u32)| (p.1, p.0);
        if x < y {
            let f = self.faces.get(&(top, x, y))?;
            let i = f.via_u.binary_search_by_key(&key(&w), key).ok()?;
            f.via_v.get(*f.map.get(i)? as usize).copied()
        } else {
            let f = self.faces.get(&(top, y, x))?;
            let j = f.via_v.binary_search_by_key(&key(&w), key).ok()? as u32;
            let i = f.map.iter().position(|&m| m == j)?;
            Some(f.via_u[i])
        }
    }

    /// Swaps the images of two entries of one face bijection.
    pub fn corrupt_face(&mut self, top: u32, u: usize, v: usize, i: usize, j: usize) {
        let f = self.faces.get_mut(&(top, u, v)).expect("no such face");
        f.map.swap(i, j);
    }

    pub fn check_coherence(&self) -> CoherenceReport {
        let mut report = CoherenceReport::default();
        for (&(top, u, v), f) in &self.faces {
            let (via_u, via_v) = self.composites(top, u, v);
            let fail = |reason: &str| FaceFailure {
                top,
                u,
                v,
                reason: reason.to_string(),
            };
            if via_u != f.via_u || via_v != f.via_v {
                report.faces.push(fail("stored composites differ from the edge data"));
                continue;
            }
            if f.map.len() != via_u.len() || via_u.len() != via_v.len() {
                report.faces.push(fail("composites have different sizes"));
                continue;
            }
            let mut hit = vec![false; via_v.len()];
            if f.map.iter().any(|&m| {
                let m = m as usize;
                m >= hit.len() || std::mem::replace(&mut hit[m], true)
            }) {
                report.faces.push(fail("not a bijection"));
                continue;
            }
            let ends = |x: usize, y: usize, w: (u32, u32)| {
                (
                    self.edges[&(top, x)].elements[w.0 as usize].0,
                    self.edges[&(top & !(1 << x), y)].elements[w.1 as usize].1,
                )
            };
            if f
                .map
                .iter()
                .enumerate()
                .any(|(i, &m)| ends(u, v, via_u[i]) != ends(v, u, via_v[m as usize]))
            {
                report.faces.push(fail("endpoints not preserved"));
            }
        }
        if !report.faces.is_empty() {
            return report;
        }
        for top in 0..1u32 << self.n {
            let cs: Vec<usize> = bits(top).collect();
            for i in 0..cs.len() {
                for j in i + 1..cs.len() {
                    for k in j + 1..cs.len() {
                        let c = [cs[i], cs[j], cs[k]];
                        let broken = self.hexagon_breaks(top, c);
                        if broken > 0 {
                            report.hexagons.push(HexagonFailure {
                                top,
                                crossings: c,
                                broken,
                            });
                        }
                    }
                }
            }
        }
        report
    }

    fn hexagon_breaks(&self, top: u32, [u, v, w]: [usize; 3]) -> usize {
        let e1 = &self.edges[&(top, u)];
        let t1 = top & !(1 << u);
        let e2 = &self.edges[&(t1, v)];
        let e3 = &self.edges[&(t1 & !(1 << v), w)];
        let mut broken = 0;
        for i1 in 0..e1.len() as u32 {
            for i2 in 0..e2.len() as u32 {
                if e1.elements[i1 as usize].1 != e2.elements[i2 as usize].0 {
                    continue;
                }
                for i3 in 0..e3.len() as u32 {
                    if e2.elements[i2 as usize].1 != e3.elements[i3 as usize].0 {
                        continue;
                    }
                    let start = [i1, i2, i3];
                    let mut order = [u, v, w];
                    let mut p = start;
                    let mut ok = true;
                    for step in 0..6 {
                        if step % 2 == 0 {
                            match self.swap(top, order[0], order[1], (p[0], p[1])) {
                                Some((a, b)) => p = [a, b, p[2]],
                                None => ok = false,
                            }
                            order.swap(0, 1);
                        } else {
                            let t = top & !(1 << order[0]);
                            match self.swap(t, order[1], order[2], (p[1], p[2])) {
                                Some((a, b)) => p = [p[0], a, b],
                                None => ok = false,
                            }
                            order.swap(1, 2);
                        }
                        if !ok {
                            break;
                        }
                    }
                    if !ok || p != start {
                        broken += 1;
                    }
                }
            }
        }
        broken
    }
}

#[derive(Serialize, Deserialize)]
struct VertexJson {
    vertex: u32,
    generators: Vec<Generator>,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    vertex: u32,
    crossing: usize,
    elements: Vec<(u32, u32)>,
}

#[derive(Serialize, Deserialize)]
struct FaceJson {
    vertex: u32,
    u: usize,
    v: usize,
    bijection: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct FunctorJson {
    schema: String,
    n: usize,
    vertices: Vec<VertexJson>,
    edges: Vec<EdgeJson>,
    faces: Vec<FaceJson>,
}

pub const FUNCTOR_SCHEMA: &str = "khsq-functor/1";

impl CubeFunctor {
    pub fn to_json(&self) -> serde_json::Value {
        let j = FunctorJson {
            schema: FUNCTOR_SCHEMA.into(),
            n: self.n,
            vertices: self
                .vertex_sets
                .iter()
                .enumerate()
                .map(|(a, s)| VertexJson {
                    vertex: a as u32,
                    generators: s.elements.clone(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|(&(vertex, crossing), e)| EdgeJson {
                    vertex,
                    crossing,
                    elements: e.elements.clone(),
                })
                .collect(),
            faces: self
                .faces
                .iter()
                .map(|(&(vertex, u, v), f)| FaceJson {
                    vertex,
                    u,
                    v,
                    bijection: f.map.clone(),
                })
                .collect(),
        };
        serde_json::to_value(j).unwrap()
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, BurnsideError> {
        let bad = |m: String| BurnsideError::Malformed(m);
        let j: FunctorJson = serde_json::from_value(v.clone()).map_err(|e| bad(e.to_string()))?;
        if j.schema != FUNCTOR_SCHEMA {
            return Err(bad(format!("unknown schema {}", j.schema)));
        }
        if j.n > 24 || j.vertices.len() != 1 << j.n {
            return Err(bad("vertex count does not match n".into()));
        }
        let mut vertex_sets = vec![Arc::new(FinSet::default()); 1 << j.n];
        for x in j.vertices {
            let slot = vertex_sets
                .get_mut(x.vertex as usize)
                .ok_or_else(|| bad(format!("vertex {} out of range", x.vertex)))?;
            *slot = Arc::new(FinSet {
                elements: x.generators,
            });
        }
        let mut edges = BTreeMap::new();
        for e in j.edges {
            if e.vertex >> e.crossing & 1 == 0 {
                return Err(bad(format!("edge ({}, {}) leaves the cube", e.vertex, e.crossing)));
            }
            let source = vertex_sets[e.vertex as usize].clone();
            let target = vertex_sets[(e.vertex & !(1 << e.crossing)) as usize].clone();
            if e
                .elements
                .iter()
                .any(|&(s, t)| s as usize >= source.len() || t as usize >= target.len())
            {
                return Err(bad(format!("edge ({}, {}) has a dangling element", e.vertex, e.crossing)));
            }
            edges.insert(
                (e.vertex, e.crossing),
                Correspondence {
                    source,
                    target,
                    elements: e.elements,
                },
            );
        }
        for a in 0..1u32 << j.n {
            for c in bits(a) {
                if !edges.contains_key(&(a, c)) {
                    return Err(bad(format!("missing edge ({}, {})", a, c)));
                }
            }
        }
        let mut f = CubeFunctor {
            n: j.n,
            vertex_sets,
            edges,
            faces: BTreeMap::new(),
        };
        for x in j.faces {
            if x.u >= x.v || x.vertex >> x.u & 1 == 0 || x.vertex >> x.v & 1 == 0 {
                return Err(bad(format!("bad face ({}, {}, {})", x.vertex, x.u, x.v)));
            }
            let (via_u, via_v) = f.composites(x.vertex, x.u, x.v);
            f.faces.insert(
                (x.vertex, x.u, x.v),
                FaceBijection {
                    top: x.vertex,
                    u: x.u,
                    v: x.v,
                    via_u,
                    via_v,
                    map: x.bijection,
                },
            );
        }
        Ok(f)
    }
}
