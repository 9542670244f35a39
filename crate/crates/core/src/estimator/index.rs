use serde::{Deserialize, Serialize};

/// Address `(j1, k1; j2, k2)` of a tensor coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Index {
    pub j1: u32,
    pub k1: usize,
    pub j2: u32,
    pub k2: usize,
}

impl Index {
    pub fn new(j1: u32, k1: usize, j2: u32, k2: usize) -> Self {
        Self { j1, k1, j2, k2 }
    }
}

impl std::fmt::Display for Index {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{};{},{})", self.j1, self.k1, self.j2, self.k2)
    }
}

/// One axis of the index grid: scaling level `coarsest - 1`, wavelet levels up to `top - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisRange {
    pub coarsest: u32,
    pub top: u32,
}

impl AxisRange {
    pub fn dim(&self) -> usize {
        1 << self.top
    }

    pub fn scaling_level(&self) -> u32 {
        self.coarsest - 1
    }

    pub fn shifts(&self, j: u32) -> usize {
        if j == self.scaling_level() {
            1 << self.coarsest
        } else {
            1 << j
        }
    }

    pub fn contains(&self, j: u32, k: usize) -> bool {
        j + 1 >= self.coarsest && j < self.top && k < self.shifts(j)
    }

    pub fn position(&self, j: u32, k: usize) -> usize {
        if j == self.scaling_level() {
            k
        } else {
            (1 << j) + k
        }
    }

    pub fn atom(&self, p: usize) -> (u32, usize) {
        if p < 1 << self.coarsest {
            (self.scaling_level(), p)
        } else {
            let j = usize::BITS - 1 - p.leading_zeros();
            (j, p - (1 << j))
        }
    }
}

/// The index set `Ω(J1, J2)` laid out as a `2^J1 × 2^J2` grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSet {
    pub time: AxisRange,
    pub space: AxisRange,
}

impl IndexSet {
    pub fn new(m10: u32, top1: u32, m20: u32, top2: u32) -> Self {
        Self {
            time: AxisRange {
                coarsest: m10,
                top: top1,
            },
            space: AxisRange {
                coarsest: m20,
                top: top2,
            },
        }
    }

    pub fn len(&self) -> usize {
        self.time.dim() * self.space.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, w: &Index) -> bool {
        self.time.contains(w.j1, w.k1) && self.space.contains(w.j2, w.k2)
    }

    /// Row and column of `w` in the coefficient grid.
    pub fn cell(&self, w: &Index) -> (usize, usize) {
        (self.time.position(w.j1, w.k1), self.space.position(w.j2, w.k2))
    }

    pub fn index_at(&self, row: usize, col: usize) -> Index {
        let (j1, k1) = self.time.atom(row);
        let (j2, k2) = self.space.atom(col);
        Index { j1, k1, j2, k2 }
    }

    /// True for the block of pure scaling coefficients.
    pub fn is_scaling(&self, w: &Index) -> bool {
        w.j1 == self.time.scaling_level() && w.j2 == self.space.scaling_level()
    }

    pub fn iter(&self) -> impl Iterator<Item = Index> + '_ {
        (0..self.time.dim()).flat_map(move |r| (0..self.space.dim()).map(move |c| self.index_at(r, c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_is_a_bijection() {
        let set = IndexSet::new(3, 6, 2, 5);
        assert_eq!(set.len(), 64 * 32);
        let mut seen = std::collections::HashSet::new();
        for w in set.iter() {
            assert!(set.contains(&w));
            let cell = set.cell(&w);
            assert_eq!(set.index_at(cell.0, cell.1), w);
            assert!(seen.insert(cell));
        }
        assert!(!set.contains(&Index::new(1, 0, 2, 0)));
        assert!(!set.contains(&Index::new(4, 16, 2, 0)));
        assert!(set.is_scaling(&Index::new(2, 7, 1, 3)));
    }
}
