//! Finite combinatorial abstractions of linearized varieties: points with
//! weight states, products of linearizations, the flag-variety model, and
//! the strictly-semistable elimination construction.
//!
//! A `StateModel` samples finitely many points of a linearized variety by
//! their states alone. The flag model of `(G/B, L(chi))` carries the
//! `|W|` torus-fixed points (singleton states `{w.chi}`) plus one generic
//! point with the full orbit state. Eliminating strict semistability
//! repeatedly tensors with a flag linearization whose highest weight avoids
//! the Weyl orbits of the stabilizer-torus annihilators, dropping the
//! maximal stabilizer rank of the strictly semistable locus each round.

use crate::lattice::{self, Cocharacter, Weight};
use crate::rootsys::{RootSystem, RootSystemError};
use crate::stability::{classify, ClassificationKind, StabilityError, StateSet};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("duplicate point id `{0}`")]
    DuplicateId(String),
    #[error("tensor powers must be positive")]
    ZeroTensorPower,
    #[error("chi is not strictly dominant")]
    NotStrictlyDominant,
    #[error("no tensor power stabilized the product classification (searched up to 2^{0})")]
    TensorPowerSearchExhausted(u32),
    #[error(
        "strictly semistable points with zero-dimensional stabilizers at iteration {iteration}; \
         the flag perturbation has no leverage on them"
    )]
    ZeroRankStabilizers { iteration: usize },
    #[error(
        "maximal stabilizer rank did not drop at iteration {iteration} ({previous} -> {current}); \
         the flag perturbation guarantees a strict drop, so this signals an implementation bug"
    )]
    RankDidNotDrop {
        iteration: usize,
        previous: usize,
        current: usize,
    },
    #[error("strictly semistable points remain after {0} iterations")]
    NotEliminated(usize),
    #[error(transparent)]
    Stability(#[from] StabilityError),
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
}

/// A sampled point: an id and its state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelPoint {
    pub id: String,
    pub states: StateSet,
}

/// Finitely many points-with-states of a common rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateModel {
    rank: usize,
    points: Vec<ModelPoint>,
}

impl StateModel {
    pub fn new(rank: usize, points: Vec<ModelPoint>) -> Result<Self, ModelError> {
        let mut ids: Vec<&str> = points.iter().map(|p| p.id.as_str()).collect();
        ids.sort_unstable();
        for pair in ids.windows(2) {
            if pair[0] == pair[1] {
                return Err(ModelError::DuplicateId(pair[0].to_string()));
            }
        }
        for p in &points {
            if p.states.rank() != rank {
                return Err(ModelError::RankMismatch {
                    left: rank,
                    right: p.states.rank(),
                });
            }
        }
        Ok(StateModel { rank, points })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn points(&self) -> &[ModelPoint] {
        &self.points
    }

    pub fn classify_points(&self) -> Vec<(&ModelPoint, ClassificationKind)> {
        self.points
            .iter()
            .map(|p| (p, classify(&p.states).kind()))
            .collect()
    }

    /// Maximum stabilizer-torus rank over the strictly semistable points,
    /// or `None` when no point is strictly semistable.
    pub fn max_strict_stabilizer_rank(&self) -> Option<usize> {
        self.points
            .iter()
            .filter(|p| classify(&p.states).kind() == ClassificationKind::StrictlySemistable)
            .map(|p| p.states.stabilizer_sublattice().len())
            .max()
    }
}

/// The model of a tensor product of linearizations: points are pairs, and
/// the state of `(p, q)` is `{ n_a.chi + n_b.psi }` over the factor states.
pub fn product(
    a: &StateModel,
    b: &StateModel,
    n_a: u64,
    n_b: u64,
) -> Result<StateModel, ModelError> {
    if a.rank != b.rank {
        return Err(ModelError::RankMismatch {
            left: a.rank,
            right: b.rank,
        });
    }
    if n_a == 0 || n_b == 0 {
        return Err(ModelError::ZeroTensorPower);
    }
    let (na, nb) = (BigInt::from(n_a), BigInt::from(n_b));
    let mut points = Vec::with_capacity(a.points.len() * b.points.len());
    for pa in &a.points {
        for pb in &b.points {
            let mut weights = Vec::new();
            for chi in pa.states.weights() {
                for psi in pb.states.weights() {
                    weights.push(chi.scaled(&na).add(&psi.scaled(&nb)));
                }
            }
            points.push(ModelPoint {
                id: format!("({},{})", pa.id, pb.id),
                states: StateSet::new(a.rank, weights)?,
            });
        }
    }
    StateModel::new(a.rank, points)
}

/// The sampled model of `(G/B, L(chi))` for strictly dominant `chi`: one
/// point per Weyl element with singleton state `{w.chi}` (the torus-fixed
/// points) plus a generic point carrying the whole orbit.
pub fn flag_model(sys: &RootSystem, chi: &Weight) -> Result<StateModel, ModelError> {
    if !sys.is_strictly_dominant(chi)? {
        return Err(ModelError::NotStrictlyDominant);
    }
    let mut points = Vec::new();
    let mut orbit = Vec::new();
    for w in sys.weyl_elements() {
        let image = sys.act(&w, chi)?;
        orbit.push(image.clone());
        points.push(ModelPoint {
            id: w.to_string(),
            states: StateSet::new(sys.rank(), vec![image])?,
        });
    }
    points.push(ModelPoint {
        id: "generic".to_string(),
        states: StateSet::new(sys.rank(), orbit)?,
    });
    StateModel::new(sys.rank(), points)
}

/// A strictly dominant character whose Weyl orbit avoids the annihilator of
/// every given stabilizer sublattice: `pair(lambda, w.chi) != 0` for some
/// basis cocharacter `lambda` of each sublattice, for every `w`.
///
/// Search order: dominant weights by total coefficient in the
/// fundamental-weight basis, ties broken lexicographically, so the result
/// is deterministic and minimal. With no sublattices this returns the sum
/// of the fundamental weights.
pub fn choose_chi(sys: &RootSystem, stab_tori: &[Vec<Cocharacter>]) -> Weight {
    let fundamentals = sys.fundamental_weights();
    let s = fundamentals.len();
    let tori: Vec<&Vec<Cocharacter>> =
        stab_tori.iter().filter(|basis| !basis.is_empty()).collect();
    let elements = sys.weyl_elements();
    if s == 0 {
        return Weight::zero(sys.rank());
    }
    for total in s.. {
        let mut coefficients = vec![1u64; s];
        *coefficients.last_mut().expect("s >= 1") = (total - s + 1) as u64;
        loop {
            let mut chi = Weight::zero(sys.rank());
            for (c, f) in coefficients.iter().zip(&fundamentals) {
                chi = chi.add(&f.scaled(&BigInt::from(*c)));
            }
            let avoids = elements.iter().all(|w| {
                let image = sys.act(w, &chi).expect("rank matches");
                tori.iter().all(|basis| {
                    basis
                        .iter()
                        .any(|lambda| !lattice::pair(lambda, &image).expect("rank matches").is_zero())
                })
            });
            if avoids {
                return chi;
            }
            if !next_composition(&mut coefficients) {
                break;
            }
        }
    }
    unreachable!("a regular dominant weight off finitely many hyperplane orbits always exists")
}

/// Advance to the next vector with the same coordinate sum and all entries
/// >= 1, in lexicographic order. Returns false when exhausted.
fn next_composition(c: &mut [u64]) -> bool {
    let s = c.len();
    if s <= 1 {
        return false;
    }
    // Find the rightmost position (before the last) that can donate to the
    // tail; lexicographic successor keeps the prefix maximal.
    for i in (0..s - 1).rev() {
        let tail: u64 = c[i + 1..].iter().sum();
        if tail > (s - 1 - i) as u64 {
            c[i] += 1;
            let remaining = tail - 1;
            for item in c.iter_mut().take(s - 1).skip(i + 1) {
                *item = 1;
            }
            c[s - 1] = remaining - (s - 2 - i) as u64;
            return true;
        }
    }
    false
}

/// Outcome of the tensor-power search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorPowerCertificate {
    /// The certified power: classifications agree at `n` and `2n`, and the
    /// product points inherit unstable/stable status from the base factor.
    pub n: u64,
    /// Coarse audit bound (max flag-state norm x max state size x max base
    /// norm + 1); the doubling certificate above is authoritative.
    pub a_priori_bound: u64,
}

/// Find a tensor power `N` for `L^N boxtimes M` by doubling until the
/// classification of every product point is identical at `N` and `2N` and
/// agrees with the base factor wherever the base point is unstable or
/// stable.
pub fn choose_n(z: &StateModel, flag: &StateModel) -> Result<TensorPowerCertificate, ModelError> {
    if z.rank != flag.rank {
        return Err(ModelError::RankMismatch {
            left: z.rank,
            right: flag.rank,
        });
    }
    let base_kinds: Vec<ClassificationKind> =
        z.points.iter().map(|p| classify(&p.states).kind()).collect();

    let max_norm = |m: &StateModel| -> u64 {
        m.points
            .iter()
            .flat_map(|p| p.states.weights())
            .flat_map(|w| w.coords())
            .map(|c| u64::try_from(c.abs()).unwrap_or(u64::MAX))
            .max()
            .unwrap_or(0)
    };
    let max_size = z
        .points
        .iter()
        .map(|p| p.states.weights().len() as u64)
        .max()
        .unwrap_or(0);
    let a_priori_bound = max_norm(flag)
        .saturating_mul(max_size)
        .saturating_mul(max_norm(z).max(1))
        .saturating_add(1);

    let kinds_at = |n: u64| -> Result<Vec<ClassificationKind>, ModelError> {
        let prod = product(z, flag, n, 1)?;
        Ok(prod.points.iter().map(|p| classify(&p.states).kind()).collect())
    };

    let mut n = 1u64;
    let mut at_n = kinds_at(n)?;
    for _ in 0..32 {
        let at_2n = kinds_at(2 * n)?;
        let stable_under_doubling = at_n == at_2n;
        let factor_consistent = at_n
            .iter()
            .enumerate()
            .all(|(idx, kind)| match base_kinds[idx / flag.points.len()] {
                ClassificationKind::Unstable => *kind == ClassificationKind::Unstable,
                ClassificationKind::Stable => *kind == ClassificationKind::Stable,
                ClassificationKind::StrictlySemistable => true,
            });
        if stable_under_doubling && factor_consistent {
            return Ok(TensorPowerCertificate { n, a_priori_bound });
        }
        n *= 2;
        at_n = at_2n;
    }
    Err(ModelError::TensorPowerSearchExhausted(32))
}

/// One round of the elimination construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EliminationStep {
    /// The flag linearization weight chosen for this round.
    pub chi: Vec<i64>,
    /// The certified tensor power.
    pub n: u64,
    pub a_priori_bound: u64,
    /// Maximal stabilizer rank over strictly semistable points entering the
    /// round.
    pub max_stabilizer_rank_before: usize,
}

/// Repeatedly tensor with flag-variety linearizations until no sampled
/// point classifies strictly semistable. Each round must strictly decrease
/// the maximal stabilizer rank of the strictly semistable locus; at most
/// `rank` rounds can occur.
pub fn eliminate_strictly_semistable(
    z: &StateModel,
    sys: &RootSystem,
) -> Result<(StateModel, Vec<EliminationStep>), ModelError> {
    if z.rank != sys.rank() {
        return Err(ModelError::RankMismatch {
            left: z.rank,
            right: sys.rank(),
        });
    }
    let mut model = z.clone();
    let mut steps: Vec<EliminationStep> = Vec::new();
    let mut previous_rank: Option<usize> = None;

    for iteration in 0..=sys.rank() {
        let strict_sublattices: Vec<Vec<Cocharacter>> = model
            .points
            .iter()
            .filter(|p| classify(&p.states).kind() == ClassificationKind::StrictlySemistable)
            .map(|p| p.states.stabilizer_sublattice())
            .collect();
        if strict_sublattices.is_empty() {
            return Ok((model, steps));
        }
        if iteration == sys.rank() {
            return Err(ModelError::NotEliminated(iteration));
        }

        let max_rank = strict_sublattices
            .iter()
            .map(|basis| basis.len())
            .max()
            .expect("non-empty");
        let mut tori: Vec<Vec<Cocharacter>> = strict_sublattices
            .into_iter()
            .filter(|basis| !basis.is_empty())
            .collect();
        tori.sort();
        tori.dedup();
        if let Some(previous) = previous_rank {
            if max_rank >= previous {
                return Err(ModelError::RankDidNotDrop {
                    iteration,
                    previous,
                    current: max_rank,
                });
            }
        }
        if max_rank == 0 {
            return Err(ModelError::ZeroRankStabilizers { iteration });
        }

        let chi = choose_chi(sys, &tori);
        let flag = flag_model(sys, &chi)?;
        let certificate = choose_n(&model, &flag)?;
        model = product(&model, &flag, certificate.n, 1)?;
        steps.push(EliminationStep {
            chi: chi
                .coords()
                .iter()
                .map(|c| i64::try_from(c).expect("desk-scale weight"))
                .collect(),
            n: certificate.n,
            a_priori_bound: certificate.a_priori_bound,
            max_stabilizer_rank_before: max_rank,
        });
        previous_rank = Some(max_rank);
    }
    unreachable!("loop returns or errors within rank+1 iterations")
}

// JSON shape: {"rank": r, "points": [{"id": s, "weights": [[...]]}]}.
#[derive(Serialize, Deserialize)]
struct PointJson {
    id: String,
    weights: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct StateModelJson {
    rank: usize,
    points: Vec<PointJson>,
}

impl Serialize for StateModel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let points = self
            .points
            .iter()
            .map(|p| {
                let weights = p
                    .states
                    .weights()
                    .iter()
                    .map(|w| {
                        w.coords()
                            .iter()
                            .map(|c| {
                                i64::try_from(c).map_err(|_| {
                                    serde::ser::Error::custom(
                                        "weight coordinate exceeds the i64 range",
                                    )
                                })
                            })
                            .collect::<Result<Vec<i64>, S::Error>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(PointJson {
                    id: p.id.clone(),
                    weights,
                })
            })
            .collect::<Result<Vec<_>, S::Error>>()?;
        StateModelJson {
            rank: self.rank,
            points,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StateModel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = StateModelJson::deserialize(deserializer)?;
        let points = raw
            .points
            .into_iter()
            .map(|p| {
                let weights = p.weights.iter().map(|w| Weight::from_i64(w)).collect();
                StateSet::new(raw.rank, weights)
                    .map(|states| ModelPoint { id: p.id, states })
                    .map_err(D::Error::custom)
            })
            .collect::<Result<Vec<_>, D::Error>>()?;
        StateModel::new(raw.rank, points).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stability::stabilizer_rank;

    fn point(id: &str, rank: usize, weights: &[&[i64]]) -> ModelPoint {
        ModelPoint {
            id: id.to_string(),
            states: StateSet::from_i64(rank, weights).unwrap(),
        }
    }

    #[test]
    fn product_counts_and_trivial_factor() {
        let a = StateModel::new(
            2,
            vec![
                point("p0", 2, &[&[1, 0]]),
                point("p1", 2, &[&[0, 1], &[1, 1]]),
                point("p2", 2, &[&[2, 2]]),
            ],
        )
        .unwrap();
        let trivial = StateModel::new(2, vec![point("o", 2, &[&[0, 0]])]).unwrap();
        let b = StateModel::new(
            2,
            vec![
                point("q0", 2, &[&[1, 1]]),
                point("q1", 2, &[&[1, 0]]),
                point("q2", 2, &[&[0, 1]]),
                point("q3", 2, &[&[-1, -1]]),
            ],
        )
        .unwrap();

        let prod = product(&a, &b, 2, 3).unwrap();
        assert_eq!(prod.points().len(), 12);

        let scaled = product(&a, &trivial, 5, 1).unwrap();
        for (p, q) in scaled.points().iter().zip(a.points()) {
            assert_eq!(p.states, q.states.scaled(&BigInt::from(5)));
        }
    }

    #[test]
    fn product_is_associative_up_to_relabeling() {
        let a = StateModel::new(1, vec![point("a", 1, &[&[1], &[-1]])]).unwrap();
        let b = StateModel::new(1, vec![point("b", 1, &[&[2]])]).unwrap();
        let c = StateModel::new(1, vec![point("c", 1, &[&[0], &[3]])]).unwrap();
        // (a^p (x) b^q)^r (x) c^s  ==  a^(rp) (x) (b^(rq) (x) c^s).
        let left = product(&product(&a, &b, 2, 3).unwrap(), &c, 4, 5).unwrap();
        let right = product(&a, &product(&b, &c, 12, 5).unwrap(), 8, 1).unwrap();
        assert_eq!(left.points().len(), right.points().len());
        for (l, r) in left.points().iter().zip(right.points()) {
            assert_eq!(l.states, r.states);
        }
    }

    #[test]
    fn flag_model_of_a1() {
        let sys = RootSystem::build_type_a(2).unwrap();
        let chi = Weight::from_i64(&[1]);
        let model = flag_model(&sys, &chi).unwrap();
        assert_eq!(model.points().len(), 3); // |W| + 1
        let states: Vec<&StateSet> = model.points().iter().map(|p| &p.states).collect();
        assert!(states.contains(&&StateSet::from_i64(1, &[&[1]]).unwrap()));
        assert!(states.contains(&&StateSet::from_i64(1, &[&[-1]]).unwrap()));
        assert!(states.contains(&&StateSet::from_i64(1, &[&[1], &[-1]]).unwrap()));
        // Every fixed point is unstable on its own.
        for (p, kind) in model.classify_points() {
            if p.id != "generic" {
                assert_eq!(kind, ClassificationKind::Unstable);
            }
        }
    }

    #[test]
    fn flag_model_requires_dominance() {
        let sys = RootSystem::build_type_a(3).unwrap();
        assert!(matches!(
            flag_model(&sys, &Weight::from_i64(&[0, 1])),
            Err(ModelError::NotStrictlyDominant)
        ));
    }

    #[test]
    fn choose_chi_with_no_constraints_is_rho_like() {
        let sys = RootSystem::build_type_a(3).unwrap();
        let chi = choose_chi(&sys, &[]);
        // Sum of the fundamental weights of A2: (1,0) + (1,1) = (2,1).
        assert_eq!(chi, Weight::from_i64(&[2, 1]));
        assert!(sys.is_strictly_dominant(&chi).unwrap());
    }

    #[test]
    fn choose_chi_avoids_stabilizer_annihilators() {
        let sys = RootSystem::build_type_a(3).unwrap();
        // One rank-1 stabilizer torus spanned by (0,1): its annihilator is
        // the x-axis, so every w.chi must have nonzero second pairing.
        let torus = vec![Cocharacter::from_i64(&[0, 1])];
        let chi = choose_chi(&sys, std::slice::from_ref(&torus));
        assert!(sys.is_strictly_dominant(&chi).unwrap());
        for w in sys.weyl_elements() {
            let image = sys.act(&w, &chi).unwrap();
            assert!(!lattice::pair(&torus[0], &image).unwrap().is_zero());
        }
    }

    #[test]
    fn choose_n_with_zero_flag_states() {
        let z = StateModel::new(
            1,
            vec![
                point("stable", 1, &[&[1], &[-1]]),
                point("unstable", 1, &[&[2]]),
            ],
        )
        .unwrap();
        let flat = StateModel::new(1, vec![point("o", 1, &[&[0]])]).unwrap();
        let cert = choose_n(&z, &flat).unwrap();
        assert_eq!(cert.n, 1);
    }

    #[test]
    fn eliminate_no_op_on_clean_model() {
        let sys = RootSystem::build_type_a(2).unwrap();
        let z = StateModel::new(
            1,
            vec![
                point("stable", 1, &[&[1], &[-1]]),
                point("unstable", 1, &[&[1]]),
            ],
        )
        .unwrap();
        let (out, log) = eliminate_strictly_semistable(&z, &sys).unwrap();
        assert_eq!(out, z);
        assert!(log.is_empty());
    }

    #[test]
    fn eliminate_rank_one_origin_point() {
        let sys = RootSystem::build_type_a(2).unwrap();
        let z = StateModel::new(
            1,
            vec![
                point("plus", 1, &[&[1]]),
                point("minus", 1, &[&[-1]]),
                point("pair", 1, &[&[1], &[-1]]),
                point("origin", 1, &[&[0]]),
            ],
        )
        .unwrap();
        assert_eq!(
            stabilizer_rank(&z.points()[3].states),
            1,
            "the origin point is fixed by the whole torus"
        );
        let (out, log) = eliminate_strictly_semistable(&z, &sys).unwrap();
        assert_eq!(log.len(), 1);
        assert_eq!(log[0].max_stabilizer_rank_before, 1);
        assert_eq!(log[0].chi, vec![1], "smallest dominant weight suffices");
        assert!(log[0].n.is_power_of_two(), "tensor power found by doubling");
        assert!(out.max_strict_stabilizer_rank().is_none());
    }

    #[test]
    fn eliminate_preserves_stable_and_unstable_status() {
        let sys = RootSystem::build_type_a(3).unwrap();
        let z = StateModel::new(
            2,
            vec![
                point("stable", 2, &[&[1, 0], &[0, 1], &[-1, -1]]),
                point("unstable", 2, &[&[1, 0], &[2, 0]]),
                point("strict", 2, &[&[1, 0], &[-1, 0]]),
            ],
        )
        .unwrap();
        let (out, log) = eliminate_strictly_semistable(&z, &sys).unwrap();
        assert_eq!(log.len(), 1);
        assert!(out.max_strict_stabilizer_rank().is_none());
        for (p, kind) in out.classify_points() {
            if p.id.starts_with("(stable") {
                assert_eq!(kind, ClassificationKind::Stable);
            }
            if p.id.starts_with("(unstable") {
                assert_eq!(kind, ClassificationKind::Unstable);
            }
        }
    }

    #[test]
    fn fixed_semistable_points_carry_zero_weight() {
        // A semistable point fixed by a subtorus pairs to zero with it.
        let sets = [
            StateSet::from_i64(2, &[&[1, 0], &[-1, 0]]).unwrap(),
            StateSet::from_i64(2, &[&[0, 0]]).unwrap(),
            StateSet::from_i64(3, &[&[1, 0, 0], &[-1, 0, 0]]).unwrap(),
        ];
        for s in &sets {
            let kind = classify(s).kind();
            assert_ne!(kind, ClassificationKind::Unstable);
            for lambda in s.stabilizer_sublattice() {
                for chi in s.weights() {
                    assert!(lattice::pair(&lambda, chi).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn model_json_round_trip() {
        let z = StateModel::new(
            1,
            vec![point("a", 1, &[&[1], &[-1]]), point("b", 1, &[&[0]])],
        )
        .unwrap();
        let json = serde_json::to_string(&z).unwrap();
        let back: StateModel = serde_json::from_str(&json).unwrap();
        assert_eq!(back, z);
    }

    #[test]
    fn duplicate_ids_rejected() {
        let result = StateModel::new(
            1,
            vec![point("a", 1, &[&[1]]), point("a", 1, &[&[2]])],
        );
        assert!(matches!(result, Err(ModelError::DuplicateId(_))));
    }
}
