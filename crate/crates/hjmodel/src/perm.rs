//! Permutations of {1,...,T}, stored 0-based internally.

/// A permutation in one-line notation: `seq[k]` is the value at position k.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Perm {
    seq: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm {
            seq: (0..n).collect(),
        }
    }

    /// Build from 0-based one-line notation. Panics if not a permutation.
    pub fn from_seq(seq: Vec<usize>) -> Perm {
        let n = seq.len();
        let mut seen = vec![false; n];
        for &v in &seq {
            assert!(v < n && !seen[v], "not a permutation: {seq:?}");
            seen[v] = true;
        }
        Perm { seq }
    }

    pub fn from_one_based(seq: &[usize]) -> Perm {
        Perm::from_seq(seq.iter().map(|&v| v - 1).collect())
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.seq.iter().map(|&v| v + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    /// Value at 0-based position k.
    pub fn at(&self, k: usize) -> usize {
        self.seq[k]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.seq
    }

    /// Swap the contents of adjacent positions k, k+1 (0-based).
    pub fn swap_positions(&self, k: usize) -> Perm {
        let mut seq = self.seq.clone();
        seq.swap(k, k + 1);
        Perm { seq }
    }

    /// Position (0-based) holding value v.
    pub fn position_of(&self, v: usize) -> usize {
        self.seq.iter().position(|&x| x == v).unwrap()
    }

    /// Number of inversions: pairs i < j with seq[i] > seq[j].
    pub fn inversions(&self) -> usize {
        let n = self.seq.len();
        let mut count = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.seq[i] > self.seq[j] {
                    count += 1;
                }
            }
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_and_inversions() {
        let id = Perm::identity(3);
        assert_eq!(id.inversions(), 0);
        let p = id.swap_positions(0);
        assert_eq!(p.as_slice(), &[1, 0, 2]);
        assert_eq!(p.inversions(), 1);
        let rev = Perm::from_seq(vec![2, 1, 0]);
        assert_eq!(rev.inversions(), 3);
        assert_eq!(rev.position_of(0), 2);
    }

    #[test]
    fn one_based_round_trip() {
        let p = Perm::from_one_based(&[3, 1, 2]);
        assert_eq!(p.as_slice(), &[2, 0, 1]);
        assert_eq!(p.one_based(), vec![3, 1, 2]);
    }
}
