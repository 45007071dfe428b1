//! Exact integer lattices of characters and cocharacters.
//!
//! Weights live in the character lattice of a split torus, cocharacters in
//! the dual lattice of one-parameter subgroups; both are plain integer
//! vectors of a fixed rank with the canonical dot-product pairing between
//! them. The kernel computation recovers the cocharacter lattice that pairs
//! constantly with a finite set of weights.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("empty state set")]
    EmptyStateSet,
}

/// A character of the torus: an integer vector in the rank-r character lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    coords: Vec<BigInt>,
}

/// A one-parameter subgroup: an integer vector in the cocharacter lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cocharacter {
    coords: Vec<BigInt>,
}

macro_rules! lattice_vector_impl {
    ($name:ident) => {
        impl $name {
            pub fn new(coords: Vec<BigInt>) -> Self {
                Self { coords }
            }

            pub fn from_i64(coords: &[i64]) -> Self {
                Self {
                    coords: coords.iter().map(|&c| BigInt::from(c)).collect(),
                }
            }

            pub fn zero(rank: usize) -> Self {
                Self {
                    coords: vec![BigInt::zero(); rank],
                }
            }

            pub fn rank(&self) -> usize {
                self.coords.len()
            }

            pub fn coords(&self) -> &[BigInt] {
                &self.coords
            }

            pub fn is_zero(&self) -> bool {
                self.coords.iter().all(|c| c.is_zero())
            }

            /// Componentwise sum. Panics on rank mismatch; callers validate
            /// ranks at their own API boundary.
            pub fn add(&self, other: &Self) -> Self {
                assert_eq!(self.rank(), other.rank(), "rank mismatch");
                Self {
                    coords: self
                        .coords
                        .iter()
                        .zip(&other.coords)
                        .map(|(a, b)| a + b)
                        .collect(),
                }
            }

            pub fn sub(&self, other: &Self) -> Self {
                assert_eq!(self.rank(), other.rank(), "rank mismatch");
                Self {
                    coords: self
                        .coords
                        .iter()
                        .zip(&other.coords)
                        .map(|(a, b)| a - b)
                        .collect(),
                }
            }

            pub fn neg(&self) -> Self {
                Self {
                    coords: self.coords.iter().map(|a| -a).collect(),
                }
            }

            pub fn scaled(&self, k: &BigInt) -> Self {
                Self {
                    coords: self.coords.iter().map(|a| a * k).collect(),
                }
            }
        }
    };
}

lattice_vector_impl!(Weight);
lattice_vector_impl!(Cocharacter);

/// The canonical pairing `<lambda, chi>`: the exact integer dot product of
/// coordinate vectors.
pub fn pair(lambda: &Cocharacter, chi: &Weight) -> Result<BigInt, LatticeError> {
    if lambda.rank() != chi.rank() {
        return Err(LatticeError::RankMismatch {
            expected: lambda.rank(),
            found: chi.rank(),
        });
    }
    Ok(lambda
        .coords()
        .iter()
        .zip(chi.coords())
        .map(|(a, b)| a * b)
        .sum())
}

/// Basis of the sublattice of cocharacters that pair constantly with every
/// weight in `weights`, i.e. the kernel of all differences `chi - chi'`.
/// This is the cocharacter lattice of the identity component of the
/// stabilizer torus of a point with the given state.
///
/// The basis is saturated (a true lattice basis, not a finite-index
/// sublattice), with each vector primitive and the whole basis in
/// echelon-reduced Hermite form.
pub fn constant_cocharacter_lattice(
    rank: usize,
    weights: &[Weight],
) -> Result<Vec<Cocharacter>, LatticeError> {
    let base = weights.first().ok_or(LatticeError::EmptyStateSet)?;
    for w in weights {
        if w.rank() != rank {
            return Err(LatticeError::RankMismatch {
                expected: rank,
                found: w.rank(),
            });
        }
    }
    let rows: Vec<Vec<BigInt>> = weights[1..]
        .iter()
        .map(|w| w.sub(base).coords().to_vec())
        .collect();
    Ok(integer_kernel(&rows, rank)
        .into_iter()
        .map(Cocharacter::new)
        .collect())
}

/// Rank of the integer span of `rows` (vectors of length `n`), by the same
/// fraction-free elimination that drives the kernel computation.
pub fn span_rank(rows: &[Vec<BigInt>], n: usize) -> usize {
    n - integer_kernel(rows, n).len()
}

/// Basis of `{ v in Z^n : row . v = 0 for every row }`, computed by
/// fraction-free column elimination with recorded unimodular operations,
/// then canonicalized to row Hermite form with positive pivots.
pub fn integer_kernel(rows: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    // m (columns of work matrix) tracks the image of each candidate basis
    // vector; u holds the candidates themselves.
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| if i == j { BigInt::from(1) } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut active: Vec<usize> = (0..n).collect();

    for row in 0..rows.len() {
        loop {
            let nonzero: Vec<usize> = active
                .iter()
                .copied()
                .filter(|&j| !m[j][row].is_zero())
                .collect();
            if nonzero.len() <= 1 {
                if let Some(&pivot) = nonzero.first() {
                    active.retain(|&j| j != pivot);
                }
                break;
            }
            // Euclidean step: reduce every entry modulo the smallest one.
            let smallest = *nonzero
                .iter()
                .min_by_key(|&&j| m[j][row].abs())
                .expect("nonempty");
            for &j in &nonzero {
                if j == smallest {
                    continue;
                }
                let q = div_round_to_zero(&m[j][row], &m[smallest][row]);
                if !q.is_zero() {
                    for r in 0..rows.len() {
                        let delta = &q * &m[smallest][r];
                        m[j][r] -= delta;
                    }
                    for i in 0..n {
                        let delta = &q * &u[smallest][i];
                        u[j][i] -= delta;
                    }
                }
            }
        }
    }

    let kernel: Vec<Vec<BigInt>> = active.into_iter().map(|j| u[j].clone()).collect();
    hermite_reduce(kernel, n)
}

fn div_round_to_zero(a: &BigInt, b: &BigInt) -> BigInt {
    a / b
}

/// Row Hermite normal form with positive pivots; entries above each pivot
/// are reduced into `[0, pivot)`. Rows of a saturated kernel come out
/// primitive.
fn hermite_reduce(mut rows: Vec<Vec<BigInt>>, n: usize) -> Vec<Vec<BigInt>> {
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut next = 0usize;
    for col in 0..n {
        if next >= rows.len() {
            break;
        }
        loop {
            let nonzero: Vec<usize> = (next..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .collect();
            if nonzero.len() <= 1 {
                if let Some(&i) = nonzero.first() {
                    rows.swap(next, i);
                    if rows[next][col].is_negative() {
                        for v in rows[next].iter_mut() {
                            *v = -&*v;
                        }
                    }
                    pivots.push((next, col));
                    next += 1;
                }
                break;
            }
            let smallest = *nonzero
                .iter()
                .min_by_key(|&&i| rows[i][col].abs())
                .expect("nonempty");
            for &i in &nonzero {
                if i == smallest {
                    continue;
                }
                let q = div_round_to_zero(&rows[i][col], &rows[smallest][col]);
                for c in 0..n {
                    let delta = &q * &rows[smallest][c];
                    rows[i][c] -= delta;
                }
            }
        }
    }
    rows.truncate(next);
    // Reduce the entries above each pivot into [0, pivot).
    for &(row, col) in &pivots {
        for above in 0..row {
            let q = rows[above][col].div_floor(&rows[row][col]);
            if !q.is_zero() {
                for c in 0..n {
                    let delta = &q * &rows[row][c];
                    rows[above][c] -= delta;
                }
            }
        }
    }
    for r in &rows {
        debug_assert!(
            vector_content(r) == BigInt::from(1),
            "kernel basis row not primitive"
        );
    }
    rows
}

/// Greatest common divisor of the entries (1 for an empty or zero vector is
/// not meaningful; callers only use this on nonzero vectors).
pub fn vector_content(v: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in v {
        g = g.gcd(c);
    }
    g
}

/// Divide out the content, leaving a primitive vector. The direction is
/// preserved (only positive scaling).
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = vector_content(v);
    if g.is_zero() || g == BigInt::from(1) {
        return v.to_vec();
    }
    v.iter().map(|c| c / &g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(coords: &[i64]) -> Weight {
        Weight::from_i64(coords)
    }

    fn cc(coords: &[i64]) -> Cocharacter {
        Cocharacter::from_i64(coords)
    }

    #[test]
    fn pair_is_dot_product() {
        assert_eq!(pair(&cc(&[1, 0]), &w(&[3, 5])).unwrap(), BigInt::from(3));
        assert_eq!(pair(&cc(&[1, 1]), &w(&[2, -2])).unwrap(), BigInt::from(0));
        assert_eq!(
            pair(&cc(&[2, -1, 3]), &w(&[1, 1, 1])).unwrap(),
            BigInt::from(4)
        );
    }

    #[test]
    fn pair_rejects_rank_mismatch() {
        assert_eq!(
            pair(&cc(&[1, 0]), &w(&[1, 2, 3])),
            Err(LatticeError::RankMismatch {
                expected: 2,
                found: 3
            })
        );
    }

    #[test]
    fn pair_is_bilinear_in_integer_scaling() {
        let lambda = cc(&[3, -2, 5]);
        let chi = w(&[1, 4, -1]);
        let base = pair(&lambda, &chi).unwrap();
        for a in [-3i64, -1, 0, 2, 7] {
            let scaled = lambda.scaled(&BigInt::from(a));
            assert_eq!(pair(&scaled, &chi).unwrap(), BigInt::from(a) * &base);
        }
    }

    #[test]
    fn kernel_of_simplex_state_is_trivial() {
        let states = [w(&[1, 0]), w(&[0, 1]), w(&[-1, -1])];
        let basis = constant_cocharacter_lattice(2, &states).unwrap();
        assert!(basis.is_empty());
    }

    #[test]
    fn kernel_of_singleton_is_full_lattice() {
        let basis = constant_cocharacter_lattice(2, &[w(&[1, 0])]).unwrap();
        assert_eq!(basis.len(), 2);
        assert_eq!(basis[0], cc(&[1, 0]));
        assert_eq!(basis[1], cc(&[0, 1]));
    }

    #[test]
    fn kernel_of_opposite_pair() {
        let states = [w(&[1, 0]), w(&[-1, 0])];
        let basis = constant_cocharacter_lattice(2, &states).unwrap();
        assert_eq!(basis, vec![cc(&[0, 1])]);
    }

    #[test]
    fn empty_state_set_is_an_error() {
        assert_eq!(
            constant_cocharacter_lattice(2, &[]),
            Err(LatticeError::EmptyStateSet)
        );
    }

    #[test]
    fn kernel_vectors_pair_constantly() {
        let states = [w(&[2, 3, 1]), w(&[2, 3, 5]), w(&[0, 1, 4])];
        let basis = constant_cocharacter_lattice(3, &states).unwrap();
        for lambda in &basis {
            let first = pair(lambda, &states[0]).unwrap();
            for chi in &states[1..] {
                assert_eq!(pair(lambda, chi).unwrap(), first);
            }
        }
    }

    #[test]
    fn kernel_is_saturated_not_just_spanning() {
        // Rows (2, 0, 0) and (0, 3, 0): kernel must be exactly Z.(0,0,1).
        let rows = vec![
            vec![BigInt::from(2), BigInt::from(0), BigInt::from(0)],
            vec![BigInt::from(0), BigInt::from(3), BigInt::from(0)],
        ];
        let k = integer_kernel(&rows, 3);
        assert_eq!(k, vec![vec![BigInt::from(0), BigInt::from(0), BigInt::from(1)]]);
    }

    #[test]
    fn kernel_rank_matches_complement_of_span() {
        let cases: Vec<Vec<Vec<i64>>> = vec![
            vec![vec![1, 2, 3], vec![2, 4, 6]],
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            vec![vec![5, -3, 2], vec![1, 1, 1], vec![6, -2, 3]],
        ];
        for rows64 in cases {
            let rows: Vec<Vec<BigInt>> = rows64
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            let k = integer_kernel(&rows, 3);
            let rank = span_rank(&rows, 3);
            assert_eq!(k.len() + rank, 3);
            for v in &k {
                for r in &rows {
                    let dot: BigInt = r.iter().zip(v).map(|(a, b)| a * b).sum();
                    assert!(dot.is_zero());
                }
            }
        }
    }
}
