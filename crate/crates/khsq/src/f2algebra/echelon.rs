use std::collections::BTreeMap;

use super::F2Vec;

/// Incremental row echelon form that remembers how each stored row was made from the inputs.
#[derive(Debug, Clone)]
pub struct Echelon {
    dim: usize,
    cap: usize,
    inputs: usize,
    rows: Vec<(F2Vec, F2Vec)>,
    by_pivot: BTreeMap<usize, usize>,
}

impl Echelon {
    /// `cap` bounds the number of inputs.
    pub fn new(dim: usize, cap: usize) -> Self {
        Echelon {
            dim,
            cap,
            inputs: 0,
            rows: vec![],
            by_pivot: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    /// Returns (residual, combo) with v = residual + Σ combo_i · input_i.
    pub fn reduce(&self, v: &F2Vec) -> (F2Vec, F2Vec) {
        assert_eq!(v.len(), self.dim);
        let mut r = v.clone();
        let mut combo = F2Vec::zeros(self.cap);
        for (&p, &i) in &self.by_pivot {
            if r.get(p) {
                r.xor_assign(&self.rows[i].0);
                combo.xor_assign(&self.rows[i].1);
            }
        }
        (r, combo)
    }

    /// Adds an input. If it depends on earlier inputs, returns the combination equal to it.
    pub fn insert(&mut self, v: &F2Vec) -> Option<F2Vec> {
        assert!(self.inputs < self.cap);
        let (r, mut combo) = self.reduce(v);
        let k = self.inputs;
        self.inputs += 1;
        match r.first_one() {
            None => Some(combo),
            Some(p) => {
                combo.flip(k);
                self.by_pivot.insert(p, self.rows.len());
                self.rows.push((r, combo));
                None
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_dependency() {
        let mut e = Echelon::new(4, 3);
        let a = F2Vec::from_ones(4, [0, 1]);
        let b = F2Vec::from_ones(4, [1, 2]);
        assert!(e.insert(&a).is_none());
        assert!(e.insert(&b).is_none());
        let c = F2Vec::from_ones(4, [0, 2]);
        let combo = e.insert(&c).unwrap();
        assert_eq!(combo.ones().collect::<Vec<_>>(), vec![0, 1]);
        let (r, _) = e.reduce(&F2Vec::from_ones(4, [3]));
        assert!(!r.is_zero());
    }
}
