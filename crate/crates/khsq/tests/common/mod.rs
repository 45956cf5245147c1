//! Independent recomputations shared by the oracle tests and the acceptance run: a plain TQFT cube
//! complex over F2 and Z/4, and a Jones state sum.
#![allow(dead_code)]

use std::collections::BTreeMap;

use khsq::burnside::khovanov_functor;
use khsq::f2algebra::cochain_complex;
use khsq::linkio::LinkDiagram;
use khsq::semisimp::lambda_of;

fn circles(d: &LinkDiagram, v: u32) -> (usize, Vec<usize>) {
    let max = d.pd.crossings.iter().flatten().copied().max().unwrap_or(0) as usize;
    let mut parent: Vec<usize> = (0..=max).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for (c, x) in d.pd.crossings.iter().enumerate() {
        let pairs = if v >> c & 1 == 0 { [(0, 1), (2, 3)] } else { [(0, 3), (1, 2)] };
        for (i, j) in pairs {
            let (a, b) = (find(&mut parent, x[i] as usize), find(&mut parent, x[j] as usize));
            parent[a] = b;
        }
    }
    let mut ids = BTreeMap::new();
    let mut label = vec![usize::MAX; max + 1];
    for x in d.pd.crossings.iter().flatten() {
        let r = find(&mut parent, *x as usize);
        let n = ids.len();
        label[*x as usize] = *ids.entry(r).or_insert(n);
    }
    (ids.len() + d.pd.unknots, label)
}

/// Generator: (vertex, bitmask of circles labelled x). Quantum grading before the global shift.
pub struct Cube {
    gens: Vec<Vec<(u32, u32)>>,
    index: BTreeMap<(u32, u32), usize>,
    n: usize,
    shift_q: i32,
    shift_i: i32,
}

pub fn cube(d: &LinkDiagram) -> Cube {
    let n = d.crossing_count();
    let mut gens = vec![vec![]; n + 1];
    let mut index = BTreeMap::new();
    for v in 0..1u32 << n {
        let (k, _) = circles(d, v);
        for g in 0..1u32 << k {
            let r = v.count_ones() as usize;
            index.insert((v, g), gens[r].len());
            gens[r].push((v, g));
        }
    }
    Cube {
        gens,
        index,
        n,
        shift_q: d.n_plus as i32 - 2 * d.n_minus as i32,
        shift_i: -(d.n_minus as i32),
    }
}

pub fn qdeg(d: &LinkDiagram, v: u32, g: u32) -> i32 {
    let (k, _) = circles(d, v);
    k as i32 - 2 * g.count_ones() as i32 + v.count_ones() as i32
}

/// Image of one generator under the edge map v → v + c, with the standard sign, as (target, coefficient).
pub fn edge_map(d: &LinkDiagram, v: u32, g: u32, c: usize) -> Vec<((u32, u32), i64)> {
    let w = v | 1 << c;
    let (k0, l0) = circles(d, v);
    let (k1, l1) = circles(d, w);
    let sign = if (v & ((1 << c) - 1)).count_ones() % 2 == 0 { 1 } else { -1 };
    let arcs = d.pd.crossings[c];
    let is_x = |g: u32, i: usize| g >> i & 1 == 1;
    // map circles of v to circles of w through shared arcs
    let mut to_w = vec![usize::MAX; k0];
    for (a, &i) in l0.iter().enumerate() {
        if i != usize::MAX {
            to_w[i] = l1[a];
        }
    }
    let nu = d.pd.unknots;
    let (c0, c1) = (k0 - nu, k1 - nu);
    for u in 0..nu {
        to_w[c0 + u] = c1 + u;
    }
    let mut out = vec![];
    if k1 + 1 == k0 {
        // merge: two circles of v become one
        let (a, b) = (l0[arcs[0] as usize], l0[arcs[2] as usize]);
        assert_ne!(a, b);
        if is_x(g, a) && is_x(g, b) {
            return out;
        }
        let mut h = 0u32;
        for i in 0..k0 {
            if is_x(g, i) {
                h |= 1 << to_w[i];
            }
        }
        out.push(((w, h), sign));
    } else {
        assert_eq!(k1, k0 + 1);
        // split: one circle of v becomes two circles of w
        let (a, b) = (l1[arcs[0] as usize], l1[arcs[1] as usize]);
        assert_ne!(a, b);
        let src = l0[arcs[0] as usize];
        let mut base = 0u32;
        for i in (0..k0).filter(|&i| i != src) {
            if is_x(g, i) {
                base |= 1 << to_w[i];
            }
        }
        if is_x(g, src) {
            out.push(((w, base | 1 << a | 1 << b), sign));
        } else {
            out.push(((w, base | 1 << a), sign));
            out.push(((w, base | 1 << b), sign));
        }
    }
    out
}

/// Differential from homological level r, restricted to quantum grading q, mod `modulus`.
pub fn matrix(d: &LinkDiagram, cb: &Cube, r: usize, q: i32, modulus: i64) -> (Vec<usize>, Vec<usize>, Vec<Vec<i64>>) {
    let rows: Vec<usize> = (0..cb.gens[r].len()).filter(|&i| {
        let (v, g) = cb.gens[r][i];
        qdeg(d, v, g) == q
    }).collect();
    if r == cb.n {
        return (rows, vec![], vec![]);
    }
    let cols: Vec<usize> = (0..cb.gens[r + 1].len()).filter(|&i| {
        let (v, g) = cb.gens[r + 1][i];
        qdeg(d, v, g) == q
    }).collect();
    let col_pos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let mut m = vec![vec![0i64; cols.len()]; rows.len()];
    for (ri, &i) in rows.iter().enumerate() {
        let (v, g) = cb.gens[r][i];
        for c in (0..cb.n).filter(|&c| v >> c & 1 == 0) {
            for (t, s) in edge_map(d, v, g, c) {
                let k = col_pos[&cb.index[&t]];
                m[ri][k] = (m[ri][k] + s).rem_euclid(modulus);
            }
        }
    }
    (rows, cols, m)
}

/// Smith form over Z/4: (number of unit pivots, number of pivots equal to 2).
pub fn smith_z4(mut m: Vec<Vec<i64>>) -> (usize, usize) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut units = 0;
    let mut done_r = vec![false; rows];
    let mut done_c = vec![false; cols];
    loop {
        let pivot = (0..rows)
            .filter(|&i| !done_r[i])
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .find(|&(i, j)| !done_c[j] && m[i][j] % 2 == 1);
        let Some((pi, pj)) = pivot else { break };
        // units mod 4 are their own inverses
        let inv = m[pi][pj];
        for i in 0..rows {
            if i != pi && m[i][pj] != 0 {
                let f = (m[i][pj] * inv).rem_euclid(4);
                for j in 0..cols {
                    m[i][j] = (m[i][j] - f * m[pi][j]).rem_euclid(4);
                }
            }
        }
        for j in 0..cols {
            if j != pj && m[pi][j] != 0 {
                let f = (m[pi][j] * inv).rem_euclid(4);
                for i in 0..rows {
                    m[i][j] = (m[i][j] - f * m[i][pj]).rem_euclid(4);
                }
            }
        }
        done_r[pi] = true;
        done_c[pj] = true;
        units += 1;
    }
    // what remains is even; halve and take the F2 rank
    let rest: Vec<Vec<i64>> = (0..rows)
        .filter(|&i| !done_r[i])
        .map(|i| (0..cols).filter(|&j| !done_c[j]).map(|j| m[i][j] / 2).collect())
        .collect();
    (units, rank_f2(rest))
}

pub fn rank_f2(mut m: Vec<Vec<i64>>) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for j in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][j] % 2 != 0) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && m[i][j] % 2 != 0 {
                for k in 0..cols {
                    m[i][k] = (m[i][k] + m[rank][k]) % 2;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub struct Oracle {
    /// (i, j) → F2 dimension
    pub f2: BTreeMap<(i32, i32), usize>,
    /// (i, j) → number of Z/2 summands of integral homology in that bidegree
    pub z2: BTreeMap<(i32, i32), usize>,
}

pub fn oracle(d: &LinkDiagram) -> Oracle {
    let cb = cube(d);
    let mut qs = std::collections::BTreeSet::new();
    for r in 0..=cb.n {
        for &(v, g) in &cb.gens[r] {
            qs.insert(qdeg(d, v, g));
        }
    }
    let mut f2 = BTreeMap::new();
    let mut z2 = BTreeMap::new();
    for &q in &qs {
        let mut rank = vec![0usize; cb.n + 2];
        let mut dims = vec![0usize; cb.n + 1];
        let mut twos = vec![0usize; cb.n + 2];
        for r in 0..=cb.n {
            let (rows, _, m) = matrix(d, &cb, r, q, 4);
            dims[r] = rows.len();
            let (u, t) = smith_z4(m);
            rank[r + 1] = u;
            twos[r + 1] = t;
        }
        for r in 0..=cb.n {
            let out_rank = rank[r + 1];
            let in_rank = if r == 0 { 0 } else { rank[r] };
            let dim = dims[r] - out_rank - in_rank;
            let key = (r as i32 + cb.shift_i, q + cb.shift_q);
            if dim > 0 {
                f2.insert(key, dim);
            }
            if twos[r] > 0 {
                z2.insert(key, twos[r]);
            }
        }
    }
    Oracle { f2, z2 }
}

/// Laurent polynomial in q as exponent → coefficient.
pub type Poly = BTreeMap<i32, i64>;

pub fn jones_unnormalized(d: &LinkDiagram) -> Poly {
    let n = d.crossing_count();
    let mut p = Poly::new();
    for v in 0..1u32 << n {
        let (k, _) = circles(d, v);
        let r = v.count_ones() as i32;
        // (-q)^r (q + q^-1)^k
        for i in 0..=k {
            let binom = (0..i).fold(1i64, |acc, t| acc * (k - t) as i64 / (t + 1) as i64);
            let e = r + k as i32 - 2 * i as i32;
            *p.entry(e).or_default() += if r % 2 == 0 { binom } else { -binom };
        }
    }
    let sign = if d.n_minus % 2 == 0 { 1 } else { -1 };
    let shift = d.n_plus as i32 - 2 * d.n_minus as i32;
    p.into_iter().filter(|&(_, c)| c != 0).map(|(e, c)| (e + shift, sign * c)).collect()
}

pub fn euler(h: &BTreeMap<(i32, i32), usize>) -> Poly {
    let mut p = Poly::new();
    for (&(i, j), &dim) in h {
        *p.entry(j).or_default() += if i % 2 == 0 { dim as i64 } else { -(dim as i64) };
    }
    p.into_iter().filter(|&(_, c)| c != 0).collect()
}

/// |V(-1)| from the unnormalized polynomial: divide by q + q^-1, then evaluate at q = i.
pub fn determinant(p: &Poly) -> i64 {
    // multiply by q, divide by q^2 + 1
    let mut num: BTreeMap<i32, i64> = p.iter().map(|(&e, &c)| (e + 1, c)).collect();
    let mut quot = Poly::new();
    while let Some((&top, &c)) = num.iter().next_back() {
        if c == 0 {
            num.remove(&top);
            continue;
        }
        quot.insert(top - 2, c);
        *num.entry(top).or_default() -= c;
        *num.entry(top - 2).or_default() -= c;
        num.retain(|_, v| *v != 0);
        assert!(top - 2 >= *p.keys().next().unwrap() - 4, "not divisible");
    }
    let (mut re, mut im) = (0i64, 0i64);
    for (&e, &c) in &quot {
        match e.rem_euclid(4) {
            0 => re += c,
            1 => im += c,
            2 => re -= c,
            _ => im -= c,
        }
    }
    ((re * re + im * im) as f64).sqrt().round() as i64
}

pub fn ours(d: &LinkDiagram) -> BTreeMap<(i32, i32), usize> {
    let x = lambda_of(khovanov_functor(d)).unwrap();
    let c = cochain_complex(&x, d.n_minus);
    c.homology_table().into_iter().map(|r| ((r.i, r.j), r.dim)).collect()
}

