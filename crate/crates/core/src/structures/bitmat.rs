//! Dense bit-matrix used as the relation store for all finite structures.
//!
//! Staged constructions reach tens of thousands of vertices, so relations
//! are kept as packed adjacency rows rather than pair sets.

pub const WORD_BITS: usize = 64;

pub fn words_for(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

pub fn bit_get(row: &[u64], j: usize) -> bool {
    row[j / WORD_BITS] >> (j % WORD_BITS) & 1 == 1
}

pub fn bit_set(row: &mut [u64], j: usize) {
    row[j / WORD_BITS] |= 1u64 << (j % WORD_BITS);
}

pub fn bit_clear(row: &mut [u64], j: usize) {
    row[j / WORD_BITS] &= !(1u64 << (j % WORD_BITS));
}

pub fn union_into(acc: &mut [u64], other: &[u64]) {
    for (a, b) in acc.iter_mut().zip(other) {
        *a |= b;
    }
}

pub fn intersects(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

pub fn ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        let mut word = word;
        std::iter::from_fn(move || {
            if word == 0 {
                return None;
            }
            let bit = word.trailing_zeros() as usize;
            word &= word - 1;
            Some(w * WORD_BITS + bit)
        })
    })
}

/// Square boolean matrix, row-major, bit-packed.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words = words_for(n);
        BitMatrix {
            n,
            words,
            bits: vec![0u64; n * words],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.n && j < self.n);
        bit_get(self.row(i), j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        debug_assert!(i < self.n && j < self.n);
        let row = self.row_mut(i);
        if value {
            bit_set(row, j);
        } else {
            bit_clear(row, j);
        }
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.bits[i * self.words..(i + 1) * self.words]
    }

    pub fn row_ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        ones(self.row(i))
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Column-major copy; turns "who is above v" rows into "who is below v".
    pub fn transposed(&self) -> BitMatrix {
        let mut t = BitMatrix::new(self.n);
        for i in 0..self.n {
            for j in self.row_ones(i).collect::<Vec<_>>() {
                t.set(j, i, true);
            }
        }
        t
    }

    /// Restriction to the given positions, in the order given.
    pub fn restrict(&self, positions: &[usize]) -> BitMatrix {
        let mut r = BitMatrix::new(positions.len());
        for (a, &i) in positions.iter().enumerate() {
            let row = self.row(i);
            for (b, &j) in positions.iter().enumerate() {
                if bit_get(row, j) {
                    r.set(a, b, true);
                }
            }
        }
        r
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix({})", self.n)?;
        for i in 0..self.n {
            for j in 0..self.n {
                write!(f, "{}", if self.get(i, j) { '1' } else { '.' })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_roundtrip() {
        let mut m = BitMatrix::new(130);
        m.set(0, 129, true);
        m.set(129, 64, true);
        assert!(m.get(0, 129));
        assert!(m.get(129, 64));
        assert!(!m.get(129, 65));
        m.set(0, 129, false);
        assert!(!m.get(0, 129));
    }

    #[test]
    fn ones_iterates_in_order() {
        let mut m = BitMatrix::new(100);
        for j in [3usize, 63, 64, 99] {
            m.set(7, j, true);
        }
        assert_eq!(m.row_ones(7).collect::<Vec<_>>(), vec![3, 63, 64, 99]);
    }

    #[test]
    fn transpose_restrict() {
        let mut m = BitMatrix::new(4);
        m.set(0, 2, true);
        m.set(1, 3, true);
        let t = m.transposed();
        assert!(t.get(2, 0) && t.get(3, 1));
        let r = m.restrict(&[0, 2]);
        assert!(r.get(0, 1) && !r.get(1, 0));
    }
}
