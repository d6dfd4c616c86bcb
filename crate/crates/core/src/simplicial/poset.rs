use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};

/// Finite poset stored by its cover relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    /// `(a, b)` with `a` covered by `b`.
    covers: Vec<(usize, usize)>,
    up: Vec<Vec<usize>>,
}

impl Poset {
    /// Builds a poset from any set of strict relations `a < b`; the stored
    /// relation is the transitive reduction of their closure.
    pub fn from_relations(labels: Vec<String>, relations: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(Error::Malformed(format!("relation ({a},{b}) out of range")));
            }
            if a == b {
                return Err(Error::CyclicOrder);
            }
            succ[a].push(b);
        }
        let order = topological_order(&succ).ok_or(Error::CyclicOrder)?;

        // strictly-above sets, filled in reverse topological order
        let mut above = vec![FixedBitSet::with_capacity(n); n];
        for &a in order.iter().rev() {
            let mut s = FixedBitSet::with_capacity(n);
            for &b in &succ[a] {
                s.insert(b);
                s.union_with(&above[b]);
            }
            above[a] = s;
        }
        let mut covers = Vec::new();
        for a in 0..n {
            for b in above[a].ones() {
                let implied = above[a].ones().any(|c| c != b && above[c].contains(b));
                if !implied {
                    covers.push((a, b));
                }
            }
        }
        Ok(Self::from_covers_unchecked(labels, covers))
    }

    /// Caller guarantees `covers` is already a transitive reduction of an
    /// acyclic relation.
    pub(crate) fn from_covers_unchecked(
        labels: Vec<String>,
        mut covers: Vec<(usize, usize)>,
    ) -> Self {
        covers.sort_unstable();
        covers.dedup();
        let mut up = vec![Vec::new(); labels.len()];
        for &(a, b) in &covers {
            up[a].push(b);
        }
        Poset { labels, covers, up }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Elements covering `a`.
    pub fn upper_covers(&self, a: usize) -> &[usize] {
        &self.up[a]
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        let mut has_lower = vec![false; self.len()];
        for &(_, b) in &self.covers {
            has_lower[b] = true;
        }
        (0..self.len()).filter(|&a| !has_lower[a]).collect()
    }

    /// Strict order test `a < b`.
    pub fn less_than(&self, a: usize, b: usize) -> bool {
        let mut seen = FixedBitSet::with_capacity(self.len());
        let mut stack = vec![a];
        while let Some(x) = stack.pop() {
            for &y in &self.up[x] {
                if y == b {
                    return true;
                }
                if !seen.put(y) {
                    stack.push(y);
                }
            }
        }
        false
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            elements: self.labels.clone(),
            covers: self
                .covers
                .iter()
                .map(|&(a, b)| [self.labels[a].clone(), self.labels[b].clone()])
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub covers: Vec<[String; 2]>,
}

fn topological_order(succ: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = succ.len();
    let mut indeg = vec![0usize; n];
    for bs in succ {
        for &b in bs {
            indeg[b] += 1;
        }
    }
    let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop() {
        order.push(v);
        for &b in &succ[v] {
            indeg[b] -= 1;
            if indeg[b] == 0 {
                ready.push(b);
            }
        }
    }
    (order.len() == n).then_some(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn reduction_drops_implied_pairs() {
        let p = Poset::from_relations(labels(3), &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(p.covers(), &[(0, 1), (1, 2)]);
        assert!(p.less_than(0, 2));
        assert!(!p.less_than(2, 0));
        assert_eq!(p.minimal_elements(), vec![0]);
    }

    #[test]
    fn cycles_rejected() {
        assert_eq!(
            Poset::from_relations(labels(2), &[(0, 1), (1, 0)]),
            Err(Error::CyclicOrder)
        );
        assert_eq!(
            Poset::from_relations(labels(1), &[(0, 0)]),
            Err(Error::CyclicOrder)
        );
    }
}
