use std::collections::HashMap;

/// Monomials of degree at most `max_degree` in `n` variables, graded then lexicographic
/// by exponent vector (descending).
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    n: usize,
    exponents: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

impl MonomialBasis {
    pub fn new(n: usize, max_degree: usize) -> Self {
        let mut exponents = Vec::new();
        for d in 0..=max_degree {
            let mut cur = vec![0u8; n];
            push_degree(&mut exponents, &mut cur, 0, d);
        }
        let index = exponents.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        Self { n, exponents, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponent(&self, m: usize) -> &[u8] {
        &self.exponents[m]
    }

    pub fn degree(&self, m: usize) -> usize {
        self.exponents[m].iter().map(|&e| e as usize).sum()
    }

    pub fn index_of(&self, exponent: &[u8]) -> Option<usize> {
        self.index.get(exponent).copied()
    }

    /// Index of the monomial `x_{i_1} ⋯ x_{i_r}`.
    pub fn of_indices(&self, idx: &[usize]) -> usize {
        let mut e = vec![0u8; self.n];
        for &i in idx {
            e[i] += 1;
        }
        self.index[&e]
    }

    /// Index of `x^m · x_k²`, if within the basis.
    pub fn times_square(&self, m: usize, k: usize) -> Option<usize> {
        let mut e = self.exponents[m].clone();
        e[k] += 2;
        self.index_of(&e)
    }
}

fn push_degree(out: &mut Vec<Vec<u8>>, cur: &mut [u8], pos: usize, left: usize) {
    if pos + 1 == cur.len() || cur.is_empty() {
        if let Some(last) = cur.last_mut() {
            *last = left as u8;
        }
        if !cur.is_empty() || left == 0 {
            out.push(cur.to_vec());
        }
        if let Some(last) = cur.last_mut() {
            *last = 0;
        }
        return;
    }
    for e in (0..=left).rev() {
        cur[pos] = e as u8;
        push_degree(out, cur, pos + 1, left - e);
    }
    cur[pos] = 0;
}

/// Orthonormal basis of the symmetric part of the degree-≤2 tuple space:
/// `1`, `x_i`, `x_i²` and `√2·x_i x_j` for `i < j`.
#[derive(Debug, Clone)]
pub struct ReducedBasis {
    n: usize,
    /// Variable indices of each element (empty, one, or two sorted indices).
    elements: Vec<Vec<usize>>,
}

impl ReducedBasis {
    pub fn new(n: usize) -> Self {
        let mut elements = vec![vec![]];
        elements.extend((0..n).map(|i| vec![i]));
        for i in 0..n {
            for j in i..n {
                elements.push(vec![i, j]);
            }
        }
        Self { n, elements }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, a: usize) -> &[usize] {
        &self.elements[a]
    }

    /// Scale of element `a` as a polynomial (`√2` for off-diagonal quadratics).
    pub fn scale(&self, a: usize) -> f64 {
        match self.elements[a].as_slice() {
            [i, j] if i != j => std::f64::consts::SQRT_2,
            _ => 1.0,
        }
    }

    /// Full tuple-space coordinates `(index, weight)` of element `a`.
    pub fn embedding(&self, a: usize) -> Vec<(usize, f64)> {
        let n = self.n;
        match self.elements[a].as_slice() {
            [] => vec![(0, 1.0)],
            [i] => vec![(1 + i, 1.0)],
            [i, j] if i == j => vec![(1 + n + i * n + j, 1.0)],
            [i, j] => {
                let w = std::f64::consts::FRAC_1_SQRT_2;
                vec![(1 + n + i * n + j, w), (1 + n + j * n + i, w)]
            }
            _ => unreachable!("elements have degree at most 2"),
        }
    }
}
