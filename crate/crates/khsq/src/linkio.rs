//! PD codes, oriented diagrams and their cube resolutions.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PdError {
    #[error("byte {pos}: {msg}")]
    Malformed { pos: usize, msg: String },
    #[error("byte {pos}: crossing {crossing} has {arity} entries, expected 4")]
    Arity {
        pos: usize,
        crossing: usize,
        arity: usize,
    },
    #[error("byte {pos}: arc label {label} appears {count} times, expected 2")]
    LabelCount { pos: usize, label: u32, count: usize },
    #[error("byte {pos}: arc label {label} is outside 1..={max}")]
    LabelRange { pos: usize, label: u32, max: u32 },
    #[error("byte {pos}: inconsistent orientation at crossing {crossing}: {msg}")]
    Orientation {
        pos: usize,
        crossing: usize,
        msg: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PdCode {
    pub crossings: Vec<[u32; 4]>,
    /// Split unknot components without crossings.
    pub unknots: usize,
}

impl fmt::Display for PdCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.crossings.is_empty() || self.unknots > 0 {
            writeln!(f, "unknots={}", self.unknots)?;
        }
        write!(f, "PD[")?;
        for (i, x) in self.crossings.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "X({},{},{},{})", x[0], x[1], x[2], x[3])?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeType {
    Merge,
    Split,
}

#[derive(Debug, Clone)]
pub struct LinkDiagram {
    pub pd: PdCode,
    /// +1 or -1 per crossing.
    pub signs: Vec<i8>,
    pub n_plus: usize,
    pub n_minus: usize,
    pub components: usize,
    occ: Vec<[(usize, usize); 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    /// Bit c set iff crossing c (0-based) is 1-smoothed.
    pub vertex: u32,
    /// Cyclic arc sequences, ordered by minimal arc label. Split unknots come last and are empty.
    pub circles: Vec<Vec<u32>>,
    /// Circle index of each arc label (index 0 unused).
    pub arc_circle: Vec<usize>,
}

impl Resolution {
    pub fn circle_count(&self) -> usize {
        self.circles.len()
    }
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, chars: &[u8]) -> Result<u8, PdError> {
        match self.peek() {
            Some(c) if chars.contains(&c) => {
                self.pos += 1;
                Ok(c)
            }
            other => Err(PdError::Malformed {
                pos: self.pos,
                msg: format!(
                    "expected one of {:?}, found {}",
                    chars.iter().map(|&c| c as char).collect::<String>(),
                    other.map_or("end of input".to_string(), |c| format!("{:?}", c as char))
                ),
            }),
        }
    }

    fn number(&mut self) -> Result<u32, PdError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(PdError::Malformed {
                pos: start,
                msg: "expected an arc label".into(),
            });
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| PdError::Malformed {
                pos: start,
                msg: "arc label out of range".into(),
            })
    }
}

/// Parses `PD[X(a,b,c,d),...]` (or `[[a,b,c,d],...]`) with an optional `unknots=k` header line.
/// Lines starting with `#` are ignored.
pub fn parse_pd(text: &str) -> Result<LinkDiagram, PdError> {
    // blank out comments and the header so byte positions stay meaningful
    let mut buf = text.as_bytes().to_vec();
    let mut unknots = None;
    let mut line_start = 0;
    for line in text.split_inclusive('\n') {
        let t = line.trim();
        let blank = if t.starts_with('#') {
            true
        } else if let Some(rest) = t.strip_prefix("unknots") {
            let v = rest.trim().strip_prefix('=').map(str::trim);
            match v.and_then(|v| v.parse::<usize>().ok()) {
                Some(k) => unknots = Some(k),
                None => {
                    return Err(PdError::Malformed {
                        pos: line_start,
                        msg: "bad unknots header".into(),
                    })
                }
            }
            true
        } else {
            false
        };
        if blank {
            for b in &mut buf[line_start..line_start + line.len()] {
                *b = b' ';
            }
        }
        line_start += line.len();
    }

    let mut lx = Lexer { s: &buf, pos: 0 };
    // a bare nested list [[a,b,c,d],...] is accepted too
    if lx.peek() != Some(b'[') {
        lx.expect(b"P")?;
        lx.expect(b"D")?;
    }
    let close = match lx.expect(b"[(")? {
        b'[' => b']',
        _ => b')',
    };
    let mut crossings = vec![];
    let mut positions = vec![];
    if lx.peek() == Some(close) {
        lx.pos += 1;
    } else {
        loop {
            let start = {
                lx.skip_ws();
                lx.pos
            };
            if lx.peek() != Some(b'[') {
                lx.expect(b"X")?;
            }
            let xc = match lx.expect(b"[(")? {
                b'[' => b']',
                _ => b')',
            };
            let mut entries = vec![lx.number()?];
            while lx.peek() == Some(b',') {
                lx.pos += 1;
                entries.push(lx.number()?);
            }
            lx.expect(&[xc])?;
            if entries.len() != 4 {
                return Err(PdError::Arity {
                    pos: start,
                    crossing: crossings.len() + 1,
                    arity: entries.len(),
                });
            }
            crossings.push([entries[0], entries[1], entries[2], entries[3]]);
            positions.push(start);
            if lx.expect(&[b',', close])? == close {
                break;
            }
        }
    }
    if let Some(c) = lx.peek() {
        return Err(PdError::Malformed {
            pos: lx.pos,
            msg: format!("trailing input {:?}", c as char),
        });
    }
    let unknots = unknots.unwrap_or(if crossings.is_empty() { 1 } else { 0 });
    LinkDiagram::with_positions(PdCode { crossings, unknots }, &positions)
}

impl LinkDiagram {
    pub fn new(pd: PdCode) -> Result<Self, PdError> {
        Self::with_positions(pd, &[])
    }

    fn with_positions(pd: PdCode, positions: &[usize]) -> Result<Self, PdError> {
        let n = pd.crossings.len();
        let pos_of = |c: usize| positions.get(c).copied().unwrap_or(0);
        let max = 2 * n as u32;
        let mut occ: Vec<Vec<(usize, usize)>> = vec![vec![]; max as usize + 1];
        for (c, x) in pd.crossings.iter().enumerate() {
            for (i, &l) in x.iter().enumerate() {
                if l == 0 || l > max {
                    return Err(PdError::LabelRange {
                        pos: pos_of(c),
                        label: l,
                        max,
                    });
                }
                occ[l as usize].push((c, i));
            }
        }
        for (l, o) in occ.iter().enumerate().skip(1) {
            if o.len() != 2 {
                let c = o.first().map_or(0, |x| x.0);
                return Err(PdError::LabelCount {
                    pos: pos_of(c),
                    label: l as u32,
                    count: o.len(),
                });
            }
        }
        let occ: Vec<[(usize, usize); 2]> = occ
            .into_iter()
            .map(|o| if o.is_empty() { [(0, 0); 2] } else { [o[0], o[1]] })
            .collect();

        // over[c] = Some(true) iff the over strand runs from position 3 to position 1
        let mut over: Vec<Option<bool>> = vec![None; n];
        // arc_in[l] = Some((c, i)): the occurrence where arc l enters a crossing
        let mut arc_in: Vec<Option<(usize, usize)>> = vec![None; max as usize + 1];

        let err = |c: usize, msg: String| PdError::Orientation {
            pos: pos_of(c),
            crossing: c + 1,
            msg,
        };

        fn set_in(
            arc_in: &mut [Option<(usize, usize)>],
            l: usize,
            at: (usize, usize),
        ) -> Result<bool, (usize, String)> {
            match arc_in[l] {
                Some(prev) if prev != at => Err((at.0, format!("arc {} enters twice", l))),
                Some(_) => Ok(false),
                None => {
                    arc_in[l] = Some(at);
                    Ok(true)
                }
            }
        }

        let other = |l: usize, at: (usize, usize)| -> (usize, usize) {
            if occ[l][0] == at {
                occ[l][1]
            } else {
                occ[l][0]
            }
        };

        let mut stack = vec![];
        for (c, x) in pd.crossings.iter().enumerate() {
            let (a, cc) = (x[0] as usize, x[2] as usize);
            set_in(&mut arc_in, a, (c, 0)).map_err(|(c, m)| err(c, m))?;
            let o = other(cc, (c, 2));
            set_in(&mut arc_in, cc, o).map_err(|(c, m)| err(c, m))?;
            stack.push(a);
            stack.push(cc);
        }
        let mut next_unresolved = 0;
        loop {
            while let Some(l) = stack.pop() {
                let Some((ci, pi)) = arc_in[l] else { continue };
                let out = other(l, (ci, pi));
                // the occurrence that is not the entry is the exit
                let ends = [(ci, pi), out];
                for &(c, p) in &ends {
                    if p == 1 || p == 3 {
                        let entering = (c, p) == (ci, pi);
                        let from3 = (p == 3) == entering;
                        match over[c] {
                            Some(v) if v != from3 => {
                                return Err(err(c, "over strand direction conflict".into()))
                            }
                            Some(_) => {}
                            None => {
                                over[c] = Some(from3);
                                let (ip, op) = if from3 { (3, 1) } else { (1, 3) };
                                let la = pd.crossings[c][ip] as usize;
                                let lb = pd.crossings[c][op] as usize;
                                if set_in(&mut arc_in, la, (c, ip)).map_err(|(c, m)| err(c, m))? {
                                    stack.push(la);
                                }
                                let o = other(lb, (c, op));
                                if set_in(&mut arc_in, lb, o).map_err(|(c, m)| err(c, m))? {
                                    stack.push(lb);
                                }
                            }
                        }
                    } else {
                        let entering = (c, p) == (ci, pi);
                        if entering != (p == 0) {
                            return Err(err(c, format!("under strand arc {} runs backwards", l)));
                        }
                    }
                }
            }
            // components lying entirely over everything: orient by increasing labels
            while next_unresolved < n && over[next_unresolved].is_some() {
                next_unresolved += 1;
            }
            if next_unresolved == n {
                break;
            }
            let c = next_unresolved;
            let x = pd.crossings[c];
            let from3 = x[1] == x[3] + 1 || (x[3] > x[1] + 1);
            let (ip, op) = if from3 { (3, 1) } else { (1, 3) };
            over[c] = Some(from3);
            let la = x[ip] as usize;
            let lb = x[op] as usize;
            set_in(&mut arc_in, la, (c, ip)).map_err(|(c, m)| err(c, m))?;
            let o = other(lb, (c, op));
            set_in(&mut arc_in, lb, o).map_err(|(c, m)| err(c, m))?;
            stack.push(la);
            stack.push(lb);
        }

        let signs: Vec<i8> = over.iter().map(|o| if o.unwrap() { 1 } else { -1 }).collect();
        let n_plus = signs.iter().filter(|&&s| s > 0).count();

        // components: follow arcs along orientation
        let mut seen = vec![false; max as usize + 1];
        let mut components = pd.unknots;
        for l in 1..=max as usize {
            if seen[l] {
                continue;
            }
            components += 1;
            let mut cur = l;
            while !seen[cur] {
                seen[cur] = true;
                let (c, p) = arc_in[cur].unwrap();
                let exit = match p {
                    0 => 2,
                    1 => 3,
                    3 => 1,
                    _ => unreachable!(),
                };
                cur = pd.crossings[c][exit] as usize;
            }
        }

        Ok(LinkDiagram {
            signs,
            n_plus,
            n_minus: n - n_plus,
            components,
            pd,
            occ,
        })
    }

    pub fn crossing_count(&self) -> usize {
        self.pd.crossings.len()
    }

    /// Mirror image: every crossing switched, same planar picture.
    pub fn mirror(&self) -> LinkDiagram {
        let crossings = self
            .pd
            .crossings
            .iter()
            .zip(&self.signs)
            .map(|(x, &s)| {
                if s > 0 {
                    [x[3], x[0], x[1], x[2]]
                } else {
                    [x[1], x[2], x[3], x[0]]
                }
            })
            .collect();
        LinkDiagram::new(PdCode {
            crossings,
            unknots: self.pd.unknots,
        })
        .expect("mirror of a valid diagram")
    }

    pub fn resolve(&self, vertex: u32) -> Resolution {
        let x = &self.pd.crossings;
        let max = 2 * x.len();
        let mut arc_circle = vec![usize::MAX; max + 1];
        let mut circles = vec![];
        for start in 1..=max {
            if arc_circle[start] != usize::MAX {
                continue;
            }
            let id = circles.len();
            let mut seq = vec![];
            let mut cur = start;
            let mut leave = self.occ[start][1];
            loop {
                arc_circle[cur] = id;
                seq.push(cur as u32);
                let (c, p) = leave;
                let one = vertex >> c & 1 == 1;
                let q = if one { [3, 2, 1, 0][p] } else { [1, 0, 3, 2][p] };
                let next = x[c][q] as usize;
                let o = self.occ[next];
                leave = if o[0] == (c, q) { o[1] } else { o[0] };
                cur = next;
                if cur == start {
                    break;
                }
            }
            circles.push(seq);
        }
        for _ in 0..self.pd.unknots {
            circles.push(vec![]);
        }
        Resolution {
            vertex,
            circles,
            arc_circle,
        }
    }

    /// Type of the edge A → A ∪ {c}.
    pub fn edge_type(&self, vertex: u32, c: usize) -> EdgeType {
        assert!(vertex >> c & 1 == 0, "crossing {} already 1-smoothed", c + 1);
        let a = self.resolve(vertex).circle_count() as i64;
        let b = self.resolve(vertex | 1 << c).circle_count() as i64;
        match b - a {
            -1 => EdgeType::Merge,
            1 => EdgeType::Split,
            d => panic!("circle count changed by {} across one crossing", d),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HOPF: &str = "PD[X(1,3,2,4),X(3,1,4,2)]";
    const TREFOIL: &str = "PD[X(1,5,2,4),X(3,1,4,6),X(5,3,6,2)]";

    #[test]
    fn test_unknot() {
        let d = parse_pd("unknots=1\nPD[]").unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.resolve(0).circle_count(), 1);
        let d = parse_pd("PD[]").unwrap();
        assert_eq!(d.resolve(0).circle_count(), 1);
    }

    #[test]
    fn test_hopf() {
        let d = parse_pd(HOPF).unwrap();
        assert_eq!(d.crossing_count(), 2);
        assert_eq!(d.signs, vec![1, 1]);
        assert_eq!(d.components, 2);
        assert_eq!(d.resolve(0).circle_count(), 2);
        assert_eq!(d.resolve(1).circle_count(), 1);
        assert_eq!(d.resolve(3).circle_count(), 2);
        assert_eq!(d.edge_type(0, 0), EdgeType::Merge);
        let m = d.mirror();
        assert_eq!(m.signs, vec![-1, -1]);
    }

    #[test]
    fn test_trefoil() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(d.signs, vec![1, 1, 1]);
        assert_eq!(d.components, 1);
        assert_eq!(d.resolve(0).circle_count(), 2);
        assert_eq!(d.resolve(7).circle_count(), 3);
        assert_eq!(d.mirror().n_minus, 3);
        assert_eq!(d.mirror().mirror().pd, d.pd);
    }

    #[test]
    fn test_kink() {
        let pos = parse_pd("PD[X(1,1,2,2)]").unwrap();
        assert_eq!(pos.signs, vec![1]);
        assert_eq!(pos.edge_type(0, 0), EdgeType::Merge);
        let neg = parse_pd("PD[X(1,2,2,1)]").unwrap();
        assert_eq!(neg.signs, vec![-1]);
        assert_eq!(neg.edge_type(0, 0), EdgeType::Split);
    }

    #[test]
    fn test_errors() {
        assert!(matches!(
            parse_pd("PD[X(1,4,2)]"),
            Err(PdError::Arity { arity: 3, .. })
        ));
        assert!(matches!(
            parse_pd("PD[X(1,3,2,4),X(3,1,4,1)]"),
            Err(PdError::LabelCount { .. })
        ));
        assert!(matches!(parse_pd("PD[X(1,3,2,4)"), Err(PdError::Malformed { .. })));
        assert!(matches!(parse_pd("PD[X(1,a,2,4)]"), Err(PdError::Malformed { pos: 7, .. })));
        // both under strands enter through arc 1
        assert!(matches!(
            parse_pd("PD[X(1,3,2,4),X(1,3,2,4)]"),
            Err(PdError::Orientation { .. })
        ));
    }

    #[test]
    fn test_nested_list() {
        let a = parse_pd("[[1,5,2,4],[3,1,4,6],[5,3,6,2]]").unwrap();
        let b = parse_pd("PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]").unwrap();
        assert_eq!(a.pd, b.pd);
        assert_eq!(a.n_plus, 3);
        assert!(parse_pd("[[1,5,2,4],X(3,1,4,6)").is_err());
    }

    #[test]
    fn test_display_roundtrip() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(parse_pd(&d.pd.to_string()).unwrap().pd, d.pd);
        let u = parse_pd("unknots=2\nPD[]").unwrap();
        assert_eq!(parse_pd(&u.pd.to_string()).unwrap().pd.unknots, 2);
    }
}
