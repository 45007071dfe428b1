//! Exact Hilbert-Mumford classification of weight states.
//!
//! A point of a linearized torus action is abstracted by its state: the
//! finite set of characters whose weight spaces are nonzero at the point.
//! The point is semi-stable iff 0 lies in the convex hull of the state,
//! stable iff 0 lies in the interior of the hull (full-dimensional interior
//! in the rank-r ambient space). Hull membership is decided by an
//! exact-rational simplex over the feasibility problem
//! `sum c_chi . chi = 0, sum c_chi = 1, c >= 0`, whose Farkas dual yields a
//! strictly separating cocharacter when infeasible. The interior test
//! enumerates candidate facet normals: primitive normals to hyperplanes
//! spanned by (r-1)-subsets of the state.

use crate::lattice::{self, Cocharacter, LatticeError, Weight};
use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StabilityError {
    #[error("state set must be non-empty")]
    Empty,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A non-empty finite set of weights of a common rank, with set semantics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSet {
    rank: usize,
    weights: Vec<Weight>,
}

impl StateSet {
    pub fn new(rank: usize, weights: Vec<Weight>) -> Result<Self, StabilityError> {
        if weights.is_empty() {
            return Err(StabilityError::Empty);
        }
        for w in &weights {
            if w.rank() != rank {
                return Err(StabilityError::Lattice(LatticeError::RankMismatch {
                    expected: rank,
                    found: w.rank(),
                }));
            }
        }
        let mut weights = weights;
        weights.sort();
        weights.dedup();
        Ok(StateSet { rank, weights })
    }

    pub fn from_i64(rank: usize, weights: &[&[i64]]) -> Result<Self, StabilityError> {
        Self::new(rank, weights.iter().map(|w| Weight::from_i64(w)).collect())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn scaled(&self, k: &BigInt) -> StateSet {
        StateSet::new(self.rank, self.weights.iter().map(|w| w.scaled(k)).collect())
            .expect("scaling preserves non-emptiness and rank")
    }

    /// Basis of the cocharacter lattice pairing constantly with this state:
    /// the stabilizer torus of a point with this state.
    pub fn stabilizer_sublattice(&self) -> Vec<Cocharacter> {
        lattice::constant_cocharacter_lattice(self.rank, &self.weights)
            .expect("state set is non-empty with uniform rank")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassificationKind {
    Stable,
    StrictlySemistable,
    Unstable,
}

impl fmt::Display for ClassificationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ClassificationKind::Stable => "Stable",
            ClassificationKind::StrictlySemistable => "StrictlySemistable",
            ClassificationKind::Unstable => "Unstable",
        };
        write!(f, "{}", s)
    }
}

/// Hilbert-Mumford trichotomy with exact certificates.
///
/// `Unstable` carries a strictly separating cocharacter
/// (`pair(lambda, chi) > 0` for every state weight); `StrictlySemistable`
/// carries a supporting one (`pair(lambda, chi) >= 0` everywhere, with
/// equality somewhere); `Stable` needs no certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    Stable,
    StrictlySemistable { certificate: Cocharacter },
    Unstable { certificate: Cocharacter },
}

impl Classification {
    pub fn kind(&self) -> ClassificationKind {
        match self {
            Classification::Stable => ClassificationKind::Stable,
            Classification::StrictlySemistable { .. } => ClassificationKind::StrictlySemistable,
            Classification::Unstable { .. } => ClassificationKind::Unstable,
        }
    }

    pub fn certificate(&self) -> Option<&Cocharacter> {
        match self {
            Classification::Stable => None,
            Classification::StrictlySemistable { certificate } => Some(certificate),
            Classification::Unstable { certificate } => Some(certificate),
        }
    }
}

/// Outcome of a hull or interior membership query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipResult {
    pub contains: bool,
    /// A separating (hull query) or supporting (interior query) cocharacter
    /// when `contains` is false.
    pub certificate: Option<Cocharacter>,
}

/// Does the convex hull of the state contain the origin? When it does not,
/// the certificate pairs strictly positively with every weight.
pub fn contains_zero_hull(states: &StateSet) -> MembershipResult {
    let weights = states.weights();
    let rank = states.rank();
    match simplex_feasible(rank, weights) {
        SimplexOutcome::Feasible => MembershipResult {
            contains: true,
            certificate: None,
        },
        SimplexOutcome::Infeasible { separator } => {
            let mut lcm = BigInt::from(1);
            for v in &separator {
                lcm = lcm.lcm(v.denom());
            }
            let ints: Vec<BigInt> = separator
                .iter()
                .map(|v| (v * BigRational::from_integer(lcm.clone())).to_integer())
                .collect();
            let certificate = sparsify_separator(ints, weights);
            debug_assert!(weights.iter().all(|chi| {
                lattice::pair(&certificate, chi).expect("ranks match") > BigInt::zero()
            }));
            MembershipResult {
                contains: false,
                certificate: Some(certificate),
            }
        }
    }
}

/// Is the origin in the full-dimensional interior of the hull? When not,
/// the certificate `lambda != 0` satisfies `pair(lambda, chi) >= 0` for
/// every weight (a supporting functional when the origin lies in the hull).
pub fn contains_zero_interior(states: &StateSet) -> MembershipResult {
    let rank = states.rank();
    let weights = states.weights();
    if rank == 0 {
        // Zero-rank ambient space: the hull is the whole space.
        return MembershipResult {
            contains: true,
            certificate: None,
        };
    }

    // (a) The differences must span the ambient space; a kernel vector of
    // the differences pairs constantly, and the constant is the certificate
    // margin.
    let stab = states.stabilizer_sublattice();
    if !stab.is_empty() {
        let lambda = &stab[0];
        let value = lattice::pair(lambda, &weights[0]).expect("ranks match");
        let lambda = if value.is_negative() { lambda.neg() } else { lambda.clone() };
        return MembershipResult {
            contains: false,
            certificate: Some(normalize_certificate_int(&lambda, weights)),
        };
    }

    // (b) Candidate facet normals: primitive normals to hyperplanes spanned
    // by (r-1)-subsets of the state. The hull is full-dimensional here, and
    // the origin is interior iff every candidate normal sees weights
    // strictly on both sides.
    for subset in (0..weights.len()).combinations(rank - 1) {
        let rows: Vec<Vec<BigInt>> = subset
            .iter()
            .map(|&i| weights[i].coords().to_vec())
            .collect();
        let kernel = lattice::integer_kernel(&rows, rank);
        if kernel.len() != 1 {
            continue; // degenerate subset: its normals recur elsewhere
        }
        let lambda = Cocharacter::new(kernel.into_iter().next().unwrap());
        let pairings: Vec<BigInt> = weights
            .iter()
            .map(|chi| lattice::pair(&lambda, chi).expect("ranks match"))
            .collect();
        let max_pos = pairings.iter().max().expect("non-empty");
        let max_neg = pairings.iter().min().expect("non-empty");
        if !max_pos.is_positive() {
            // All pairings <= 0: -lambda supports the hull from below.
            return MembershipResult {
                contains: false,
                certificate: Some(normalize_certificate_int(&lambda.neg(), weights)),
            };
        }
        if !max_neg.is_negative() {
            // All pairings >= 0: lambda itself supports.
            return MembershipResult {
                contains: false,
                certificate: Some(normalize_certificate_int(&lambda, weights)),
            };
        }
    }
    MembershipResult {
        contains: true,
        certificate: None,
    }
}

/// The Hilbert-Mumford trichotomy for the state.
pub fn classify(states: &StateSet) -> Classification {
    let hull = contains_zero_hull(states);
    if !hull.contains {
        return Classification::Unstable {
            certificate: hull.certificate.expect("infeasible simplex yields a separator"),
        };
    }
    let interior = contains_zero_interior(states);
    if interior.contains {
        Classification::Stable
    } else {
        Classification::StrictlySemistable {
            certificate: interior
                .certificate
                .expect("non-interior origin admits a supporting functional"),
        }
    }
}

/// Rank of the stabilizer torus of a point with this state.
pub fn stabilizer_rank(states: &StateSet) -> usize {
    states.stabilizer_sublattice().len()
}

enum SimplexOutcome {
    Feasible,
    /// Rational `lambda` with `<lambda, chi>` strictly positive for all
    /// state weights (the negated Farkas dual of the phase-1 optimum).
    Infeasible {
        separator: Vec<BigRational>,
    },
}

/// Phase-1 simplex for `sum_j c_j chi_j = 0, sum_j c_j = 1, c >= 0`,
/// exact over the rationals, Bland's rule throughout.
fn simplex_feasible(rank: usize, weights: &[Weight]) -> SimplexOutcome {
    let m = weights.len();
    let rows = rank + 1;
    let cols = m + rows + 1; // structural, artificial, rhs
    let rhs = cols - 1;

    let mut t: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); cols]; rows];
    for (j, chi) in weights.iter().enumerate() {
        for i in 0..rank {
            t[i][j] = BigRational::from_integer(chi.coords()[i].clone());
        }
        t[rank][j] = BigRational::from_integer(BigInt::from(1));
    }
    for (i, row) in t.iter_mut().enumerate() {
        row[m + i] = BigRational::from_integer(BigInt::from(1));
    }
    t[rank][rhs] = BigRational::from_integer(BigInt::from(1));

    // Artificial rows with negative right-hand side flip sign first; here
    // b = (0,..,0,1) is already non-negative.
    let mut basis: Vec<usize> = (m..m + rows).collect();

    // Reduced costs for minimizing the sum of artificials.
    let mut redcost: Vec<BigRational> = vec![BigRational::zero(); cols - 1];
    for j in 0..cols - 1 {
        let mut z = BigRational::zero();
        for row in t.iter() {
            z += &row[j];
        }
        let direct = if j >= m {
            BigRational::from_integer(BigInt::from(1))
        } else {
            BigRational::zero()
        };
        redcost[j] = direct - z;
    }

    loop {
        // Bland: entering variable is the smallest index with negative
        // reduced cost.
        let entering = (0..cols - 1).find(|&j| redcost[j].is_negative());
        let Some(enter) = entering else {
            break;
        };
        // Ratio test with Bland tie-breaking on the leaving basis index.
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[rhs] / &row[enter];
                match &leave {
                    None => leave = Some((i, ratio)),
                    Some((best_i, best)) => {
                        if ratio < *best || (ratio == *best && basis[i] < basis[*best_i]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let (pivot_row, _) = leave.expect("phase-1 objective is bounded below");
        // Pivot.
        let pivot = t[pivot_row][enter].clone();
        for v in t[pivot_row].iter_mut() {
            *v /= &pivot;
        }
        for i in 0..rows {
            if i == pivot_row || t[i][enter].is_zero() {
                continue;
            }
            let factor = t[i][enter].clone();
            for j in 0..cols {
                let delta = &factor * &t[pivot_row][j];
                t[i][j] -= delta;
            }
        }
        if !redcost[enter].is_zero() {
            let factor = redcost[enter].clone();
            for j in 0..cols - 1 {
                let delta = &factor * &t[pivot_row][j];
                redcost[j] -= delta;
            }
        }
        basis[pivot_row] = enter;
    }

    // Optimal value: artificial levels left in the basis.
    let mut objective = BigRational::zero();
    for (i, &b) in basis.iter().enumerate() {
        if b >= m {
            objective += &t[i][rhs];
        }
    }

    if objective.is_zero() {
        return SimplexOutcome::Feasible;
    }
    // Farkas dual from the artificial columns: y_i = 1 - redcost(a_i);
    // then <y[0..r], chi> + y[r] <= 0 for every weight and y[r] > 0, so
    // lambda = -y[0..r] separates strictly.
    let one = BigRational::from_integer(BigInt::from(1));
    let separator: Vec<BigRational> = (0..rank).map(|i| &redcost[m + i] - &one).collect();
    SimplexOutcome::Infeasible { separator }
}

/// Deterministic cleanup of a strict separator: greedily zero coordinates
/// that are not needed to keep every pairing strictly positive, then reduce
/// to a primitive vector.
fn sparsify_separator(mut lambda: Vec<BigInt>, weights: &[Weight]) -> Cocharacter {
    let strictly_positive = |l: &[BigInt]| {
        weights.iter().all(|chi| {
            let dot: BigInt = l.iter().zip(chi.coords()).map(|(a, b)| a * b).sum();
            dot.is_positive()
        })
    };
    for i in 0..lambda.len() {
        if lambda[i].is_zero() {
            continue;
        }
        let saved = std::mem::replace(&mut lambda[i], BigInt::zero());
        if !strictly_positive(&lambda) {
            lambda[i] = saved;
        }
    }
    normalize_certificate_int(&Cocharacter::new(lambda), weights)
}

/// Positive scaling to a primitive integer vector (preserving the
/// separation direction), then the sign convention: if the vector pairs to
/// zero with every weight, orient it so the leading nonzero entry is
/// positive.
fn normalize_certificate_int(lambda: &Cocharacter, weights: &[Weight]) -> Cocharacter {
    let prim = Cocharacter::new(lattice::primitive(lambda.coords()));
    let all_zero = weights
        .iter()
        .all(|chi| lattice::pair(&prim, chi).expect("ranks match").is_zero());
    if all_zero {
        if let Some(first) = prim.coords().iter().find(|c| !c.is_zero()) {
            if first.is_negative() {
                return prim.neg();
            }
        }
    }
    prim
}

/// Brute-force classification oracle: enumerate every integer cocharacter
/// with coordinates in `[-L, L]` for `L = max(1, maxcoord * |state|)` and
/// test separation directly. Complete for rank <= 2 at that bound; kept
/// independent of the simplex/facet machinery above.
pub mod oracle {
    use super::{ClassificationKind, StateSet};

    pub fn classify_brute_force(states: &StateSet) -> ClassificationKind {
        let rank = states.rank();
        assert!((1..=2).contains(&rank), "oracle bound is proven for rank <= 2");
        let weights: Vec<Vec<i64>> = states
            .weights()
            .iter()
            .map(|w| {
                w.coords()
                    .iter()
                    .map(|c| i64::try_from(c).expect("oracle expects small coordinates"))
                    .collect()
            })
            .collect();
        let maxcoord = weights
            .iter()
            .flat_map(|w| w.iter().map(|c| c.abs()))
            .max()
            .unwrap_or(0);
        let bound = (maxcoord * weights.len() as i64).max(1);

        let mut found_supporting = false;
        let mut lambda = vec![-bound; rank];
        loop {
            if lambda.iter().any(|&c| c != 0) {
                let pairings = weights
                    .iter()
                    .map(|w| w.iter().zip(&lambda).map(|(a, b)| a * b).sum::<i64>());
                let min = pairings.min().expect("state set non-empty");
                if min > 0 {
                    return ClassificationKind::Unstable;
                }
                if min == 0 {
                    found_supporting = true;
                }
            }
            // Odometer increment over the box.
            let mut i = 0;
            loop {
                if i == rank {
                    return if found_supporting {
                        ClassificationKind::StrictlySemistable
                    } else {
                        ClassificationKind::Stable
                    };
                }
                if lambda[i] < bound {
                    lambda[i] += 1;
                    break;
                }
                lambda[i] = -bound;
                i += 1;
            }
        }
    }
}

// JSON shape: {"rank": r, "weights": [[...], ...]} with plain integer
// entries.
#[derive(Serialize, Deserialize)]
struct StateSetJson {
    rank: usize,
    weights: Vec<Vec<i64>>,
}

impl Serialize for StateSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let weights = self
            .weights
            .iter()
            .map(|w| {
                w.coords()
                    .iter()
                    .map(|c| i64::try_from(c).map_err(|_| {
                        serde::ser::Error::custom("weight coordinate exceeds the i64 range")
                    }))
                    .collect::<Result<Vec<i64>, S::Error>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        StateSetJson {
            rank: self.rank,
            weights,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StateSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = StateSetJson::deserialize(deserializer)?;
        let weights = raw.weights.iter().map(|w| Weight::from_i64(w)).collect();
        StateSet::new(raw.rank, weights).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::pair;

    fn set(rank: usize, weights: &[&[i64]]) -> StateSet {
        StateSet::from_i64(rank, weights).unwrap()
    }

    fn check_certificate(states: &StateSet, classification: &Classification) {
        match classification {
            Classification::Stable => {}
            Classification::Unstable { certificate } => {
                assert!(!certificate.is_zero());
                for chi in states.weights() {
                    assert!(pair(certificate, chi).unwrap() > BigInt::zero());
                }
            }
            Classification::StrictlySemistable { certificate } => {
                assert!(!certificate.is_zero());
                let pairings: Vec<BigInt> = states
                    .weights()
                    .iter()
                    .map(|chi| pair(certificate, chi).unwrap())
                    .collect();
                assert!(pairings.iter().all(|p| p >= &BigInt::zero()));
                assert!(pairings.iter().any(|p| p.is_zero()));
            }
        }
    }

    #[test]
    fn simplex_state_is_stable() {
        let s = set(2, &[&[1, 0], &[0, 1], &[-1, -1]]);
        assert!(contains_zero_hull(&s).contains);
        assert!(contains_zero_interior(&s).contains);
        assert_eq!(classify(&s).kind(), ClassificationKind::Stable);
        assert_eq!(stabilizer_rank(&s), 0);
    }

    #[test]
    fn open_halfspace_state_is_unstable() {
        let s = set(2, &[&[1, 0], &[2, 0]]);
        let hull = contains_zero_hull(&s);
        assert!(!hull.contains);
        assert_eq!(hull.certificate, Some(Cocharacter::from_i64(&[1, 0])));
        let c = classify(&s);
        assert_eq!(c.kind(), ClassificationKind::Unstable);
        check_certificate(&s, &c);
    }

    #[test]
    fn opposite_pair_in_rank_two_is_strictly_semistable() {
        let s = set(2, &[&[1, 0], &[-1, 0]]);
        assert!(contains_zero_hull(&s).contains);
        let interior = contains_zero_interior(&s);
        assert!(!interior.contains);
        assert_eq!(interior.certificate, Some(Cocharacter::from_i64(&[0, 1])));
        let c = classify(&s);
        assert_eq!(c.kind(), ClassificationKind::StrictlySemistable);
        check_certificate(&s, &c);
        assert_eq!(stabilizer_rank(&s), 1);
    }

    #[test]
    fn origin_state_is_strictly_semistable() {
        let s = set(2, &[&[0, 0]]);
        assert!(contains_zero_hull(&s).contains);
        let interior = contains_zero_interior(&s);
        assert!(!interior.contains);
        let c = classify(&s);
        assert_eq!(c.kind(), ClassificationKind::StrictlySemistable);
        check_certificate(&s, &c);
        assert_eq!(stabilizer_rank(&s), 2);
    }

    #[test]
    fn opposite_pair_in_rank_one_is_stable() {
        let s = set(1, &[&[1], &[-1]]);
        assert_eq!(classify(&s).kind(), ClassificationKind::Stable);
    }

    #[test]
    fn boundary_point_in_rank_one() {
        let s = set(1, &[&[0], &[1]]);
        let c = classify(&s);
        assert_eq!(c.kind(), ClassificationKind::StrictlySemistable);
        check_certificate(&s, &c);
    }

    #[test]
    fn singleton_states() {
        let s = set(2, &[&[3, -1]]);
        let c = classify(&s);
        assert_eq!(c.kind(), ClassificationKind::Unstable);
        check_certificate(&s, &c);
        assert_eq!(stabilizer_rank(&s), 2);
    }

    #[test]
    fn empty_state_set_is_rejected() {
        assert!(matches!(StateSet::new(2, vec![]), Err(StabilityError::Empty)));
    }

    #[test]
    fn duplicate_weights_collapse() {
        let s = set(2, &[&[1, 1], &[1, 1], &[0, 2]]);
        assert_eq!(s.weights().len(), 2);
    }

    #[test]
    fn scaling_invariance() {
        let sets = [
            set(2, &[&[1, 0], &[0, 1], &[-1, -1]]),
            set(2, &[&[1, 0], &[2, 0]]),
            set(2, &[&[1, 0], &[-1, 0]]),
            set(1, &[&[0], &[2]]),
        ];
        for s in &sets {
            let base = classify(s).kind();
            for k in [2i64, 3, 7] {
                let scaled = s.scaled(&BigInt::from(k));
                assert_eq!(classify(&scaled).kind(), base);
            }
        }
    }

    #[test]
    fn oracle_agrees_on_edge_cases() {
        let cases = [
            set(2, &[&[1, 0], &[0, 1], &[-1, -1]]),
            set(2, &[&[1, 0], &[2, 0]]),
            set(2, &[&[1, 0], &[-1, 0]]),
            set(2, &[&[0, 0]]),
            set(1, &[&[1], &[-1]]),
            set(1, &[&[0], &[1]]),
            set(2, &[&[1, 1], &[-1, 2], &[0, -3]]),
        ];
        for s in &cases {
            assert_eq!(classify(s).kind(), oracle::classify_brute_force(s));
        }
    }

    #[test]
    fn json_round_trip() {
        let s = set(2, &[&[1, 0], &[-1, 0]]);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"rank":2,"weights":[[-1,0],[1,0]]}"#);
        let back: StateSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
