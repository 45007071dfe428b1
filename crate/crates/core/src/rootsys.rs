//! Root systems of type A (and finite products of type-A factors), realized
//! in the trace-zero character lattice of PGL(n)/SL(n), together with Weyl
//! groups as permutations and parabolic subgroup combinatorics.
//!
//! A factor built from PGL(n) carries the rank-(n-1) lattice with basis
//! `chi_1..chi_{n-1}` and the relation `chi_n = -(chi_1 + .. + chi_{n-1})`;
//! the redundant symbols `chi_1..chi_n` exist only transiently when roots
//! are generated and when the symmetric group permutes coordinates.

use crate::lattice::Weight;
use crate::poly::Polynomial;
use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RootSystemError {
    #[error("type A requires n >= 2, got {0}")]
    RankTooSmall(usize),
    #[error("rank mismatch: system has rank {expected}, weight has rank {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("invalid simple-root index {index} (system has {count} simple roots)")]
    InvalidSimpleRoot { index: usize, count: usize },
    #[error("unsupported group descriptor `{0}` (expected e.g. \"A2\" or \"A1xA2\")")]
    BadDescriptor(String),
    #[error("type {0} is reserved but not implemented; only type A factors are available")]
    ReservedType(char),
}

/// A permutation of `{0..n-1}` stored as its one-line image vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Self {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            assert!(i < images.len() && !seen[i], "not a permutation");
            seen[i] = true;
        }
        Permutation { images }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// Composition acting left-to-right as functions: `(self * other)(i) =
    /// self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree());
        Permutation {
            images: (0..self.degree()).map(|i| self.images[other.images[i]]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn sign(&self) -> i64 {
        if self.inversions().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn inversions(&self) -> usize {
        let n = self.degree();
        let mut count = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.images[i] > self.images[j] {
                    count += 1;
                }
            }
        }
        count
    }
}

/// An element of the Weyl group of a product of type-A factors: one
/// symmetric-group permutation per factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    factors: Vec<Permutation>,
}

impl WeylElement {
    pub fn identity(factor_sizes: &[usize]) -> Self {
        WeylElement {
            factors: factor_sizes.iter().map(|&n| Permutation::identity(n)).collect(),
        }
    }

    pub fn from_factors(factors: Vec<Permutation>) -> Self {
        WeylElement { factors }
    }

    pub fn factors(&self) -> &[Permutation] {
        &self.factors
    }

    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        WeylElement {
            factors: self
                .factors
                .iter()
                .zip(&other.factors)
                .map(|(a, b)| a.compose(b))
                .collect(),
        }
    }

    pub fn inverse(&self) -> WeylElement {
        WeylElement {
            factors: self.factors.iter().map(Permutation::inverse).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.factors.iter().all(Permutation::is_identity)
    }

    /// The determinant of the reflection representation: the product of the
    /// permutation signs over the factors.
    pub fn det(&self) -> i64 {
        self.factors.iter().map(Permutation::sign).product()
    }

    /// Total Coxeter length: inversions summed over factors.
    pub fn length(&self) -> usize {
        self.factors.iter().map(Permutation::inversions).sum()
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|p| p.images.iter().map(|i| (i + 1).to_string()).join(""))
            .collect();
        write!(f, "w{}", parts.join("."))
    }
}

/// A root system that is a product of type-A factors, realized in the
/// trace-zero lattice of total rank `sum (n_k - 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    label: String,
    /// Per factor: the `n` of PGL(n), i.e. the factor is A_{n-1}.
    factor_sizes: Vec<usize>,
    rank: usize,
    roots: Vec<Weight>,
    positive_roots: Vec<Weight>,
    simple_roots: Vec<Weight>,
    /// Parallel to `roots`: (factor, i, j) meaning chi_i - chi_j of that
    /// factor, 0-based indices into 0..n.
    root_labels: Vec<(usize, usize, usize)>,
}

impl RootSystem {
    /// The A_{n-1} root system of PGL(n)/SL(n) in trace-zero coordinates.
    pub fn build_type_a(n: usize) -> Result<RootSystem, RootSystemError> {
        Self::product_of_type_a(&[n])
    }

    /// A product of type-A factors, one per entry of `ns`.
    pub fn product_of_type_a(ns: &[usize]) -> Result<RootSystem, RootSystemError> {
        for &n in ns {
            if n < 2 {
                return Err(RootSystemError::RankTooSmall(n));
            }
        }
        let rank: usize = ns.iter().map(|&n| n - 1).sum();
        let mut positive_roots = Vec::new();
        let mut positive_labels = Vec::new();
        let mut simple_roots = Vec::new();
        let mut offset = 0;
        for (f, &n) in ns.iter().enumerate() {
            for i in 0..n {
                for j in i + 1..n {
                    positive_roots.push(chi_difference(rank, offset, n, i, j));
                    positive_labels.push((f, i, j));
                }
            }
            for i in 0..n - 1 {
                simple_roots.push(chi_difference(rank, offset, n, i, i + 1));
            }
            offset += n - 1;
        }
        let mut roots = positive_roots.clone();
        let mut root_labels = positive_labels.clone();
        for (w, &(f, i, j)) in positive_roots.iter().zip(&positive_labels) {
            roots.push(w.neg());
            root_labels.push((f, j, i));
        }
        let label = ns.iter().map(|&n| format!("A{}", n - 1)).join("x");
        Ok(RootSystem {
            label,
            factor_sizes: ns.to_vec(),
            rank,
            roots,
            positive_roots,
            simple_roots,
            root_labels,
        })
    }

    /// A rank-r torus: no roots at all.
    pub fn torus(rank: usize) -> RootSystem {
        RootSystem {
            label: format!("T{}", rank),
            factor_sizes: Vec::new(),
            rank,
            roots: Vec::new(),
            positive_roots: Vec::new(),
            simple_roots: Vec::new(),
            root_labels: Vec::new(),
        }
    }

    /// Parse a group descriptor such as "A2" or "A1xA2". Types B..G are
    /// recognized but reserved.
    pub fn parse(descriptor: &str) -> Result<RootSystem, RootSystemError> {
        let mut ns = Vec::new();
        for token in descriptor.split('x') {
            let mut chars = token.chars();
            let letter = chars
                .next()
                .ok_or_else(|| RootSystemError::BadDescriptor(descriptor.to_string()))?;
            let number: usize = chars
                .as_str()
                .parse()
                .map_err(|_| RootSystemError::BadDescriptor(descriptor.to_string()))?;
            match letter {
                'A' => {
                    if number < 1 {
                        return Err(RootSystemError::BadDescriptor(descriptor.to_string()));
                    }
                    ns.push(number + 1);
                }
                'B' | 'C' | 'D' | 'E' | 'F' | 'G' => {
                    return Err(RootSystemError::ReservedType(letter))
                }
                _ => return Err(RootSystemError::BadDescriptor(descriptor.to_string())),
            }
        }
        if ns.is_empty() {
            return Err(RootSystemError::BadDescriptor(descriptor.to_string()));
        }
        Self::product_of_type_a(&ns)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The `n` of each PGL(n) factor.
    pub fn factor_sizes(&self) -> &[usize] {
        &self.factor_sizes
    }

    pub fn roots(&self) -> &[Weight] {
        &self.roots
    }

    pub fn positive_roots(&self) -> &[Weight] {
        &self.positive_roots
    }

    pub fn negative_roots(&self) -> Vec<Weight> {
        self.positive_roots.iter().map(Weight::neg).collect()
    }

    pub fn simple_roots(&self) -> &[Weight] {
        &self.simple_roots
    }

    pub fn weyl_order(&self) -> u64 {
        self.factor_sizes
            .iter()
            .map(|&n| (1..=n as u64).product::<u64>())
            .product()
    }

    /// All Weyl elements, in a fixed deterministic order.
    pub fn weyl_elements(&self) -> Vec<WeylElement> {
        if self.factor_sizes.is_empty() {
            return vec![WeylElement::identity(&[])];
        }
        self.factor_sizes
            .iter()
            .map(|&n| {
                (0..n)
                    .permutations(n)
                    .map(Permutation::from_images)
                    .collect::<Vec<_>>()
            })
            .multi_cartesian_product()
            .map(WeylElement::from_factors)
            .collect()
    }

    pub fn identity(&self) -> WeylElement {
        WeylElement::identity(&self.factor_sizes)
    }

    /// The longest element: within each factor on n letters, i -> n+1-i.
    pub fn longest_element(&self) -> WeylElement {
        WeylElement::from_factors(
            self.factor_sizes
                .iter()
                .map(|&n| Permutation::from_images((0..n).rev().collect()))
                .collect(),
        )
    }

    /// Simple reflections in simple-root order (global index across factors).
    pub fn simple_reflections(&self) -> Vec<WeylElement> {
        let mut out = Vec::new();
        for (f, &n) in self.factor_sizes.iter().enumerate() {
            for i in 0..n - 1 {
                let mut factors: Vec<Permutation> = self
                    .factor_sizes
                    .iter()
                    .map(|&m| Permutation::identity(m))
                    .collect();
                factors[f] = Permutation::transposition(n, i, i + 1);
                out.push(WeylElement::from_factors(factors));
            }
        }
        out
    }

    /// Weyl action on a weight: permute the underlying `chi_1..chi_n`
    /// coordinates of each factor, then re-express in the trace-zero basis.
    pub fn act(&self, w: &WeylElement, chi: &Weight) -> Result<Weight, RootSystemError> {
        if chi.rank() != self.rank {
            return Err(RootSystemError::RankMismatch {
                expected: self.rank,
                found: chi.rank(),
            });
        }
        let mut out: Vec<BigInt> = Vec::with_capacity(self.rank);
        let mut offset = 0;
        for (f, &n) in self.factor_sizes.iter().enumerate() {
            let block = &chi.coords()[offset..offset + n - 1];
            // Lift to chi-coordinates with the n-th coordinate zero.
            let mut lifted: Vec<BigInt> = block.to_vec();
            lifted.push(BigInt::zero());
            let perm = &w.factors()[f];
            let inv = perm.inverse();
            let permuted: Vec<BigInt> = (0..n).map(|i| lifted[inv.apply(i)].clone()).collect();
            let last = permuted[n - 1].clone();
            for v in permuted[..n - 1].iter() {
                out.push(v - &last);
            }
            offset += n - 1;
        }
        // Coordinates beyond the factor blocks (torus directions) are fixed.
        out.extend_from_slice(&chi.coords()[offset..]);
        Ok(Weight::new(out))
    }

    /// Act on a polynomial in the lattice coordinates by substituting
    /// `x_i -> w . e_i` for each basis weight `e_i`.
    pub fn act_polynomial(
        &self,
        w: &WeylElement,
        p: &Polynomial,
    ) -> Result<Polynomial, RootSystemError> {
        if p.nvars() != self.rank {
            return Err(RootSystemError::RankMismatch {
                expected: self.rank,
                found: p.nvars(),
            });
        }
        let images: Vec<Polynomial> = (0..self.rank)
            .map(|i| {
                let mut coords = vec![BigInt::zero(); self.rank];
                coords[i] = BigInt::from(1);
                let image = self.act(w, &Weight::new(coords)).expect("rank matches");
                Polynomial::linear(image.coords())
            })
            .collect();
        Ok(p.substitute(&images).expect("arity matches"))
    }

    /// Pairings of `chi` with the simple coroots, in simple-root order.
    /// Strict dominance is all pairings positive.
    pub fn simple_coroot_pairings(&self, chi: &Weight) -> Result<Vec<BigInt>, RootSystemError> {
        if chi.rank() != self.rank {
            return Err(RootSystemError::RankMismatch {
                expected: self.rank,
                found: chi.rank(),
            });
        }
        let mut out = Vec::new();
        let mut offset = 0;
        for &n in &self.factor_sizes {
            let block = &chi.coords()[offset..offset + n - 1];
            let mut lifted: Vec<BigInt> = block.to_vec();
            lifted.push(BigInt::zero());
            for i in 0..n - 1 {
                out.push(&lifted[i] - &lifted[i + 1]);
            }
            offset += n - 1;
        }
        Ok(out)
    }

    pub fn is_strictly_dominant(&self, chi: &Weight) -> Result<bool, RootSystemError> {
        Ok(self
            .simple_coroot_pairings(chi)?
            .iter()
            .all(|p| p > &BigInt::zero()))
    }

    /// Fundamental weights in the trace-zero basis, in simple-root order.
    pub fn fundamental_weights(&self) -> Vec<Weight> {
        let mut out = Vec::new();
        let mut offset = 0;
        for &n in &self.factor_sizes {
            for k in 1..n {
                let mut coords = vec![BigInt::zero(); self.rank];
                for item in coords.iter_mut().skip(offset).take(k) {
                    *item = BigInt::from(1);
                }
                out.push(Weight::new(coords));
            }
            offset += n - 1;
        }
        out
    }

    /// The product of the positive roots as a polynomial in the lattice
    /// coordinates (1 for a torus).
    pub fn sqrt_ctop(&self) -> Polynomial {
        product_of_linear_forms(self.rank, &self.positive_roots)
    }

    /// The product of all roots; equals `(-1)^{|Phi+|} sqrt_ctop^2`.
    pub fn ctop(&self) -> Polynomial {
        product_of_linear_forms(self.rank, &self.roots)
    }

    /// Parabolic subgroup data for a subset of simple-root indices
    /// (0-based, global across factors).
    pub fn parabolic(&self, subset: &[usize]) -> Result<ParabolicData, RootSystemError> {
        let simple_count = self.simple_roots.len();
        let mut chosen: Vec<usize> = subset.to_vec();
        chosen.sort_unstable();
        chosen.dedup();
        for &i in &chosen {
            if i >= simple_count {
                return Err(RootSystemError::InvalidSimpleRoot {
                    index: i,
                    count: simple_count,
                });
            }
        }

        // W_P: closure of the chosen simple reflections.
        let reflections = self.simple_reflections();
        let generators: Vec<WeylElement> =
            chosen.iter().map(|&i| reflections[i].clone()).collect();
        let mut subgroup = vec![self.identity()];
        let mut frontier = vec![self.identity()];
        while let Some(w) = frontier.pop() {
            for g in &generators {
                let next = w.compose(g);
                if !subgroup.contains(&next) {
                    subgroup.push(next.clone());
                    frontier.push(next);
                }
            }
        }
        subgroup.sort();

        // Minimal-length coset representatives of W/W_P.
        let mut coset_reps: Vec<WeylElement> = Vec::new();
        let mut seen: Vec<WeylElement> = Vec::new();
        for w in self.weyl_elements() {
            if seen.contains(&w) {
                continue;
            }
            let coset: Vec<WeylElement> = subgroup.iter().map(|u| w.compose(u)).collect();
            let rep = coset
                .iter()
                .min_by_key(|v| v.length())
                .expect("coset nonempty")
                .clone();
            seen.extend(coset);
            coset_reps.push(rep);
        }
        coset_reps.sort();

        // Levi roots: chi_i - chi_j with i, j in the same block of the
        // partition cut out by the chosen simple reflections.
        let blocks = self.levi_blocks(&chosen);
        let levi_negative: Vec<Weight> = self
            .root_labels
            .iter()
            .zip(&self.roots)
            .filter(|(&(f, i, j), _)| i > j && blocks[f][i] == blocks[f][j])
            .map(|(_, w)| w.clone())
            .collect();
        let tangent_weights: Vec<Weight> = self
            .root_labels
            .iter()
            .zip(&self.roots)
            .filter(|(&(f, i, j), _)| i > j && blocks[f][i] != blocks[f][j])
            .map(|(_, w)| w.clone())
            .collect();

        Ok(ParabolicData {
            system: self.clone(),
            subset: chosen,
            weyl_subgroup: subgroup,
            coset_reps,
            tangent_weights,
            levi_negative_roots: levi_negative,
        })
    }

    /// For each factor, a block id per letter: letters i and i+1 share a
    /// block exactly when simple root i of that factor is chosen.
    fn levi_blocks(&self, chosen: &[usize]) -> Vec<Vec<usize>> {
        let mut blocks = Vec::new();
        let mut global = 0;
        for &n in &self.factor_sizes {
            let mut ids = vec![0usize; n];
            let mut current = 0;
            for i in 1..n {
                if !chosen.contains(&(global + i - 1)) {
                    current += 1;
                }
                ids[i] = current;
            }
            blocks.push(ids);
            global += n - 1;
        }
        blocks
    }
}

/// `chi_i - chi_j` of a factor with `n` letters, embedded at `offset` into
/// the rank-`rank` lattice, with `chi_n` expanded as `-(chi_1+..+chi_{n-1})`.
fn chi_difference(rank: usize, offset: usize, n: usize, i: usize, j: usize) -> Weight {
    let mut coords = vec![BigInt::zero(); rank];
    if i < n - 1 {
        coords[offset + i] += 1;
    } else {
        for item in coords.iter_mut().skip(offset).take(n - 1) {
            *item -= 1;
        }
    }
    if j < n - 1 {
        coords[offset + j] -= 1;
    } else {
        for item in coords.iter_mut().skip(offset).take(n - 1) {
            *item += 1;
        }
    }
    Weight::new(coords)
}

fn product_of_linear_forms(rank: usize, forms: &[Weight]) -> Polynomial {
    let mut out = Polynomial::one(rank);
    for w in forms {
        out = &out * &Polynomial::linear(w.coords());
    }
    out
}

/// A parabolic subgroup of a product of type-A factors: the Weyl subgroup
/// W_P, minimal coset representatives of W/W_P, and the tangent weights
/// `Phi(g/p)` of G/P at the identity coset (a subset of the negative roots).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParabolicData {
    system: RootSystem,
    subset: Vec<usize>,
    weyl_subgroup: Vec<WeylElement>,
    coset_reps: Vec<WeylElement>,
    tangent_weights: Vec<Weight>,
    levi_negative_roots: Vec<Weight>,
}

impl ParabolicData {
    pub fn system(&self) -> &RootSystem {
        &self.system
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn weyl_subgroup(&self) -> &[WeylElement] {
        &self.weyl_subgroup
    }

    pub fn coset_reps(&self) -> &[WeylElement] {
        &self.coset_reps
    }

    pub fn tangent_weights(&self) -> &[Weight] {
        &self.tangent_weights
    }

    /// The negative roots of the Levi: `Phi- \ Phi(g/p)`.
    pub fn levi_negative_roots(&self) -> &[Weight] {
        &self.levi_negative_roots
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_roots_in_trace_zero_coordinates() {
        let sys = RootSystem::build_type_a(2).unwrap();
        assert_eq!(sys.rank(), 1);
        assert_eq!(sys.positive_roots(), &[Weight::from_i64(&[2])]);
        assert_eq!(sys.roots().len(), 2);
        assert!(sys.roots().contains(&Weight::from_i64(&[-2])));
    }

    #[test]
    fn root_counts_for_small_ranks() {
        let a2 = RootSystem::build_type_a(3).unwrap();
        assert_eq!(a2.roots().len(), 6);
        assert_eq!(a2.positive_roots().len(), 3);
        let a3 = RootSystem::build_type_a(4).unwrap();
        assert_eq!(a3.roots().len(), 12);
        assert_eq!(a3.simple_roots().len(), 3);
    }

    #[test]
    fn roots_split_into_positive_and_negative() {
        let sys = RootSystem::product_of_type_a(&[3, 2]).unwrap();
        let mut neg: Vec<Weight> = sys.positive_roots().iter().map(Weight::neg).collect();
        let mut all = sys.positive_roots().to_vec();
        all.append(&mut neg);
        all.sort();
        let mut roots = sys.roots().to_vec();
        roots.sort();
        assert_eq!(all, roots);
    }

    #[test]
    fn positive_roots_are_nonnegative_combinations_of_simple_roots() {
        // In type A, chi_i - chi_j for i < j is the sum of consecutive
        // simple roots; verify by telescoping within each factor.
        let sys = RootSystem::product_of_type_a(&[4, 3]).unwrap();
        for (label, root) in sys.root_labels.iter().zip(sys.roots()) {
            let (f, i, j) = *label;
            if i > j {
                continue;
            }
            let offset: usize = sys.factor_sizes[..f].iter().map(|&n| n - 1).sum();
            let local_simple_count = sys.factor_sizes[f] - 1;
            let global: Vec<&Weight> = sys
                .simple_roots()
                .iter()
                .skip(offset)
                .take(local_simple_count)
                .collect();
            let mut acc = Weight::zero(sys.rank());
            for s in &global[i..j] {
                acc = acc.add(s);
            }
            assert_eq!(&acc, root);
        }
    }

    #[test]
    fn weyl_action_examples() {
        let a1 = RootSystem::build_type_a(2).unwrap();
        let chi = Weight::from_i64(&[2]);
        let id = a1.identity();
        assert_eq!(a1.act(&id, &chi).unwrap(), chi);
        let s = &a1.weyl_elements()[1];
        assert!(!s.is_identity());
        assert_eq!(a1.act(s, &chi).unwrap(), Weight::from_i64(&[-2]));
    }

    #[test]
    fn weyl_action_permutes_roots() {
        let sys = RootSystem::product_of_type_a(&[3, 2]).unwrap();
        for w in sys.weyl_elements() {
            let mut image: Vec<Weight> = sys
                .roots()
                .iter()
                .map(|r| sys.act(&w, r).unwrap())
                .collect();
            image.sort();
            let mut roots = sys.roots().to_vec();
            roots.sort();
            assert_eq!(image, roots);
        }
    }

    #[test]
    fn action_is_a_group_action() {
        let sys = RootSystem::build_type_a(3).unwrap();
        let elements = sys.weyl_elements();
        let chi = Weight::from_i64(&[5, -3]);
        for a in &elements {
            for b in &elements {
                let ab = a.compose(b);
                let stepwise = sys.act(a, &sys.act(b, &chi).unwrap()).unwrap();
                assert_eq!(sys.act(&ab, &chi).unwrap(), stepwise);
            }
        }
    }

    #[test]
    fn determinant_values() {
        let a2 = RootSystem::build_type_a(3).unwrap();
        assert_eq!(a2.identity().det(), 1);
        let transposition = WeylElement::from_factors(vec![Permutation::transposition(3, 0, 1)]);
        assert_eq!(transposition.det(), -1);
        for n in 2..=5 {
            let sys = RootSystem::build_type_a(n).unwrap();
            let w0 = sys.longest_element();
            let expected = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
            assert_eq!(w0.det(), expected);
            assert!(w0.compose(&w0).is_identity());
        }
    }

    #[test]
    fn longest_element_reverses() {
        let sys = RootSystem::build_type_a(4).unwrap();
        let w0 = sys.longest_element();
        // (1 4)(2 3) in one-line notation: 4321.
        assert_eq!(w0.factors()[0].images, vec![3, 2, 1, 0]);
    }

    #[test]
    fn sqrt_ctop_and_ctop_for_a1() {
        let sys = RootSystem::build_type_a(2).unwrap();
        let sqrt = sys.sqrt_ctop();
        assert_eq!(sqrt, Polynomial::linear(&[BigInt::from(2)]));
        let ctop = sys.ctop();
        assert_eq!(ctop.coeff(&[2]), num_rational::BigRational::from_integer(BigInt::from(-4)));
        assert_eq!(ctop.num_terms(), 1);
    }

    #[test]
    fn torus_top_classes_are_one() {
        let torus = RootSystem::torus(2);
        assert_eq!(torus.sqrt_ctop(), Polynomial::one(2));
        assert_eq!(torus.ctop(), Polynomial::one(2));
    }

    #[test]
    fn ctop_degree_and_square_relation() {
        for n in 2..=4 {
            let sys = RootSystem::build_type_a(n).unwrap();
            let phi_plus = sys.positive_roots().len();
            let ctop = sys.ctop();
            assert!(ctop.is_homogeneous_of_degree(2 * phi_plus as u32));
            let sqrt = sys.sqrt_ctop();
            let sign = if phi_plus.is_multiple_of(2) { 1 } else { -1 };
            let squared = (&sqrt * &sqrt)
                .scale(&num_rational::BigRational::from_integer(BigInt::from(sign)));
            assert_eq!(ctop, squared);
        }
    }

    #[test]
    fn parabolic_borel_and_extremes_in_a2() {
        let sys = RootSystem::build_type_a(3).unwrap();
        let borel = sys.parabolic(&[]).unwrap();
        assert_eq!(borel.coset_reps().len(), 6);
        assert_eq!(borel.tangent_weights().len(), 3);
        let mut tangent = borel.tangent_weights().to_vec();
        tangent.sort();
        let mut negatives = sys.negative_roots();
        negatives.sort();
        assert_eq!(tangent, negatives);

        let maximal = sys.parabolic(&[0]).unwrap();
        assert_eq!(maximal.coset_reps().len(), 3);

        let full = sys.parabolic(&[0, 1]).unwrap();
        assert_eq!(full.coset_reps().len(), 1);
        assert!(full.tangent_weights().is_empty());
    }

    #[test]
    fn coset_counts_multiply_to_weyl_order() {
        let sys = RootSystem::build_type_a(4).unwrap();
        for subset in [vec![], vec![0], vec![1], vec![0, 1], vec![0, 2], vec![0, 1, 2]] {
            let p = sys.parabolic(&subset).unwrap();
            assert_eq!(
                p.coset_reps().len() * p.weyl_subgroup().len(),
                sys.weyl_order() as usize
            );
        }
    }

    #[test]
    fn tangent_weights_are_negative_roots() {
        let sys = RootSystem::product_of_type_a(&[3, 2]).unwrap();
        let negatives = sys.negative_roots();
        for subset in [vec![], vec![0], vec![2], vec![0, 1, 2]] {
            let p = sys.parabolic(&subset).unwrap();
            for w in p.tangent_weights() {
                assert!(negatives.contains(w));
            }
            assert_eq!(
                p.tangent_weights().len() + p.levi_negative_roots().len(),
                negatives.len()
            );
        }
    }

    #[test]
    fn invalid_parabolic_index_is_rejected() {
        let sys = RootSystem::build_type_a(3).unwrap();
        assert!(matches!(
            sys.parabolic(&[7]),
            Err(RootSystemError::InvalidSimpleRoot { .. })
        ));
    }

    #[test]
    fn descriptor_parsing() {
        assert_eq!(RootSystem::parse("A2").unwrap().factor_sizes(), &[3]);
        assert_eq!(RootSystem::parse("A1xA2").unwrap().factor_sizes(), &[2, 3]);
        assert_eq!(RootSystem::parse("A3").unwrap().rank(), 3);
        assert!(matches!(
            RootSystem::parse("B2"),
            Err(RootSystemError::ReservedType('B'))
        ));
        assert!(matches!(
            RootSystem::parse("A0"),
            Err(RootSystemError::BadDescriptor(_))
        ));
        assert!(matches!(
            RootSystem::parse("Q7"),
            Err(RootSystemError::BadDescriptor(_))
        ));
    }

    #[test]
    fn anti_invariance_of_sqrt_ctop() {
        for n in 2..=4 {
            let sys = RootSystem::build_type_a(n).unwrap();
            let sqrt = sys.sqrt_ctop();
            for w in sys.weyl_elements() {
                let acted = sys.act_polynomial(&w, &sqrt).unwrap();
                let expected = sqrt
                    .scale(&num_rational::BigRational::from_integer(BigInt::from(w.det())));
                assert_eq!(acted, expected);
            }
        }
    }
}
