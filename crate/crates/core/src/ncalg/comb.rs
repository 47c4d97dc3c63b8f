//! Permutations, inversion statistics and subset enumeration.

use itertools::Itertools;

use super::NcError;

/// A permutation of `[1, n]` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Self, NcError> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &x in &images {
            if x == 0 || x > n || seen[x] {
                return Err(NcError::BadPerm(images));
            }
            seen[x] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self { images: (1..=n).collect() }
    }

    /// Adjacent transposition `(i i+1)`, with `1 <= i < n`.
    pub fn transposition(n: usize, i: usize) -> Self {
        let mut images: Vec<usize> = (1..=n).collect();
        images.swap(i - 1, i);
        Self { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// `sigma(i)` for `1 <= i <= n`.
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Perm {
        let mut out = vec![0; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            out[x - 1] = i + 1;
        }
        Perm { images: out }
    }

    /// `self ∘ other`, i.e. `i -> self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm { images: other.images.iter().map(|&x| self.images[x - 1]).collect() }
    }

    pub fn inversions(&self) -> usize {
        seq_inversions(&self.images)
    }

    /// The word read backwards.
    pub fn reversed(&self) -> Perm {
        Perm { images: self.images.iter().rev().copied().collect() }
    }
}

/// `#{(i < j) : s_i > s_j}`.
pub fn seq_inversions<T: Ord>(s: &[T]) -> usize {
    let mut count = 0;
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            if s[i] > s[j] {
                count += 1;
            }
        }
    }
    count
}

pub fn inversions(sigma: &Perm) -> usize {
    sigma.inversions()
}

/// All permutations of `[1, n]` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Perm> {
    (1..=n).permutations(n).map(|images| Perm { images }).collect()
}

/// `#{s : alpha_s > beta_s}`.
pub fn inv_pair(alpha: &[u8], beta: &[u8]) -> Result<usize, NcError> {
    if alpha.len() != beta.len() {
        return Err(NcError::Arity { expected: alpha.len(), found: beta.len() });
    }
    Ok(alpha.iter().zip(beta).filter(|(a, b)| a > b).count())
}

/// `sum_t #{(x, y) in I_t x J_t : x > y}`.
pub fn inv_blocks(i: &[Vec<u8>], j: &[Vec<u8>]) -> Result<usize, NcError> {
    if i.len() != j.len() {
        return Err(NcError::Arity { expected: i.len(), found: j.len() });
    }
    Ok(i.iter()
        .zip(j)
        .map(|(it, jt)| it.iter().map(|x| jt.iter().filter(|y| x > *y).count()).sum::<usize>())
        .sum())
}

/// `sum_{i in J} i - |J|(|J|+1)/2`.
pub fn ell_subset(j: &[u8]) -> i64 {
    let r = j.len() as i64;
    j.iter().map(|&x| x as i64).sum::<i64>() - r * (r + 1) / 2
}

/// The permutation listing `k` ascending, then `[1, total] \ k` ascending.
pub fn shuffle_perm(k: &[u8], total: usize) -> Result<Perm, NcError> {
    let mut images: Vec<usize> = k.iter().map(|&x| x as usize).collect();
    images.extend((1..=total).filter(|x| !k.contains(&(*x as u8))));
    Perm::new(images)
}

/// All `r`-subsets of a sorted set, lexicographically.
pub fn subsets(set: &[u8], r: usize) -> Vec<Vec<u8>> {
    set.iter().copied().combinations(r).collect()
}

/// Complement of `sub` inside `set`, keeping order.
pub fn complement(set: &[u8], sub: &[u8]) -> Vec<u8> {
    set.iter().copied().filter(|x| !sub.contains(x)).collect()
}

/// Arrangements of `set` into consecutive blocks of size `k`, each block
/// ascending, with the inversion count of the concatenated sequence.
///
/// With `minima_increasing` the block minima must also ascend.
pub fn block_arrangements(set: &[u8], k: usize, minima_increasing: bool) -> Vec<(Vec<Vec<u8>>, usize)> {
    assert!(k > 0 && set.len().is_multiple_of(k), "set size must be a multiple of the block size");
    let mut out = Vec::new();
    let mut blocks = Vec::new();
    arrange(set, k, minima_increasing, &mut blocks, &mut out);
    out
}

fn arrange(
    rest: &[u8],
    k: usize,
    minima_increasing: bool,
    blocks: &mut Vec<Vec<u8>>,
    out: &mut Vec<(Vec<Vec<u8>>, usize)>,
) {
    if rest.is_empty() {
        let flat: Vec<u8> = blocks.iter().flatten().copied().collect();
        out.push((blocks.clone(), seq_inversions(&flat)));
        return;
    }
    for block in rest.iter().copied().combinations(k) {
        if minima_increasing && block[0] != rest[0] {
            continue;
        }
        let next = complement(rest, &block);
        blocks.push(block);
        arrange(&next, k, minima_increasing, blocks, out);
        blocks.pop();
    }
}
