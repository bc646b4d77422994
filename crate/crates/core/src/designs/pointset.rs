/// Fixed-capacity bit set over points `0..m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct PointSet {
    words: Vec<u64>,
}

impl PointSet {
    pub fn empty(m: usize) -> Self {
        PointSet {
            words: vec![0; m.div_ceil(64).max(1)],
        }
    }

    pub fn from_points(m: usize, points: &[usize]) -> Self {
        let mut s = PointSet::empty(m);
        for &p in points {
            s.words[p / 64] |= 1 << (p % 64);
        }
        s
    }

    pub fn union_with(&mut self, other: &PointSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &PointSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}
