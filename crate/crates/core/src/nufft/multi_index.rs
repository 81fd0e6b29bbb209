/// Multi-indices `α ∈ ℕ³` with `|α| ≤ p`, graded then lexicographic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiIndexSet {
    p: usize,
    alphas: Vec<[usize; 3]>,
}

impl MultiIndexSet {
    pub fn new(p: usize) -> Self {
        let mut alphas = Vec::with_capacity(Self::count(p));
        for total in 0..=p {
            for a in (0..=total).rev() {
                for b in (0..=total - a).rev() {
                    alphas.push([a, b, total - a - b]);
                }
            }
        }
        Self { p, alphas }
    }

    /// `(p+1)(p+2)(p+3)/6`.
    pub const fn count(p: usize) -> usize {
        (p + 1) * (p + 2) * (p + 3) / 6
    }

    pub fn order(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn as_slice(&self) -> &[[usize; 3]] {
        &self.alphas
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize; 3]> {
        self.alphas.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        for p in 0..9 {
            let s = MultiIndexSet::new(p);
            assert_eq!(s.len(), MultiIndexSet::count(p));
            assert!(s.iter().all(|a| a.iter().sum::<usize>() <= p));
        }
        assert_eq!(MultiIndexSet::count(4), 35);
        assert_eq!(MultiIndexSet::new(0).as_slice(), &[[0, 0, 0]]);
    }

    #[test]
    fn distinct() {
        let s = MultiIndexSet::new(6);
        let mut v = s.as_slice().to_vec();
        v.sort();
        v.dedup();
        assert_eq!(v.len(), s.len());
    }
}
