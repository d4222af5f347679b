use crate::{Result, TensorError};

/// A permutation of `{0, ..., k-1}` stored by its images.
///
/// Composition is ordinary function composition, so tensor permutation is a
/// left action: `T.permute(&pi.compose(&rho)) == T.permute(&rho).permute(&pi)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &i in &images {
            if i >= k || seen[i] {
                return Err(TensorError::InvalidPermutation(format!("{images:?}")));
            }
            seen[i] = true;
        }
        Ok(Self(images))
    }

    pub fn identity(k: usize) -> Self {
        Self((0..k).collect())
    }

    /// The cycle `c[0] -> c[1] -> ... -> c[0]` on `k` symbols.
    pub fn cycle(k: usize, c: &[usize]) -> Result<Self> {
        let mut images: Vec<usize> = (0..k).collect();
        for (w, &from) in c.iter().enumerate() {
            if from >= k {
                return Err(TensorError::InvalidPermutation(format!("cycle {c:?} on {k} symbols")));
            }
            images[from] = c[(w + 1) % c.len()];
        }
        Self::new(images)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self, j: usize) -> usize {
        self.0[j]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (j, &i) in self.0.iter().enumerate() {
            inv[i] = j;
        }
        Self(inv)
    }

    /// `(self ∘ other)(j) = self(other(j))`.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.len(), other.len(), "composing permutations of different sizes");
        Self(other.0.iter().map(|&j| self.0[j]).collect())
    }

    /// All `k!` permutations in lexicographic order of their image lists.
    pub fn all(k: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        let mut used = vec![false; k];
        fn rec(k: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if cur.len() == k {
                out.push(Permutation(cur.clone()));
                return;
            }
            for i in 0..k {
                if !used[i] {
                    used[i] = true;
                    cur.push(i);
                    rec(k, cur, used, out);
                    cur.pop();
                    used[i] = false;
                }
            }
        }
        rec(k, &mut cur, &mut used, &mut out);
        out
    }

    /// Applies the permutation to positions of a multi-index: `out[j] = idx[self(j)]`.
    pub fn gather<T: Copy>(&self, idx: &[T]) -> Vec<T> {
        self.0.iter().map(|&p| idx[p]).collect()
    }
}
