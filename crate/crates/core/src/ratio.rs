//! The GIT integration ratio for PGL(n) and products of such factors.
//!
//! The model is the projective space of n x n matrices: its torus quotient
//! is a product of projective spaces with rational Chow ring
//! `Q[t_1..t_n]/(t_i^n)`, the group quotient is a reduced point, and the
//! ratio is the integral of `c_top = prod_{i != j} (t_i - t_j)` against the
//! point class. The census enumerates the row-occupancy patterns that
//! encode the torus stability of matrix points, and the Vandermonde and
//! longest-element pairing identities verify the closed form
//! `c_top = n! . prod t_i^{n-1}`.

use crate::lattice::Weight;
use crate::poly::{Polynomial, QuotientRing};
use crate::rootsys::Permutation;
use crate::stability::{classify, ClassificationKind, StateSet};
use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RatioError {
    #[error("n = {n} out of supported range {min}..={max}")]
    OutOfRange { n: usize, min: usize, max: usize },
    #[error("product groups support at most {max} factors, got {got}")]
    TooManyFactors { max: usize, got: usize },
    #[error("empty factor list")]
    NoFactors,
}

/// A named exact check bundled into a ratio report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedCheck {
    pub name: String,
    pub passed: bool,
}

/// The result of a ratio computation, with the section-level identities
/// re-verified alongside.
#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    pub group: String,
    pub weyl_order: u64,
    /// Exact; an integer for every shipped group constructor. Rendered as
    /// a decimal string in JSON.
    #[serde(serialize_with = "serialize_rational")]
    pub ratio: BigRational,
    pub checks: Vec<NamedCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

fn serialize_rational<S: serde::Serializer>(
    value: &BigRational,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(&value.to_string())
}

impl RatioReport {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// One row-occupancy pattern of the matrix model and its classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusEntry {
    /// Occupied rows, 1-based, ascending.
    pub occupied_rows: Vec<usize>,
    pub classification: ClassificationKind,
}

const PGL_MIN: usize = 2;
const PGL_MAX: usize = 6;
const PAIRING_MAX: usize = 5;
const PRODUCT_FACTOR_MAX: usize = 5;
const PRODUCT_LEN_MAX: usize = 3;

fn check_range(n: usize, min: usize, max: usize) -> Result<(), RatioError> {
    if n < min || n > max {
        return Err(RatioError::OutOfRange { n, min, max });
    }
    Ok(())
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// `chi_i` of the diagonal torus of SL(n)/PGL(n) in the rank-(n-1)
/// trace-zero basis (`chi_n = -(chi_1 + .. + chi_{n-1})`).
fn matrix_row_weight(n: usize, i: usize) -> Weight {
    let mut coords = vec![BigInt::zero(); n - 1];
    if i < n - 1 {
        coords[i] = BigInt::from(1);
    } else {
        for c in coords.iter_mut() {
            *c = BigInt::from(-1);
        }
    }
    Weight::new(coords)
}

/// Classify every nonempty row-occupancy pattern of the projective matrix
/// model: the state of a point whose matrix occupies rows `S` is
/// `{chi_i : i in S}`.
pub fn pm_n_state_census(n: usize) -> Result<Vec<CensusEntry>, RatioError> {
    check_range(n, PGL_MIN, PGL_MAX)?;
    let mut entries = Vec::with_capacity((1 << n) - 1);
    for mask in 1u32..(1 << n) {
        let rows: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let weights: Vec<Weight> = rows.iter().map(|&i| matrix_row_weight(n, i)).collect();
        let states = StateSet::new(n - 1, weights).expect("pattern is non-empty");
        entries.push(CensusEntry {
            occupied_rows: rows.iter().map(|&i| i + 1).collect(),
            classification: classify(&states).kind(),
        });
    }
    Ok(entries)
}

/// True when the census matches the matrix-model picture: full occupancy is
/// the unique stable pattern, everything else is unstable, and nothing is
/// strictly semistable.
pub fn census_check(n: usize) -> Result<bool, RatioError> {
    let entries = pm_n_state_census(n)?;
    Ok(entries.iter().all(|e| {
        if e.occupied_rows.len() == n {
            e.classification == ClassificationKind::Stable
        } else {
            e.classification == ClassificationKind::Unstable
        }
    }))
}

/// `prod_{i != j} (t_i - t_j)` over a block of variables, reduced after
/// every factor when a ring is supplied.
fn ctop_in_t_variables(
    nvars: usize,
    offset: usize,
    n: usize,
    ring: Option<&QuotientRing>,
) -> Polynomial {
    let mut out = Polynomial::one(nvars);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut coeffs = vec![BigInt::zero(); nvars];
            coeffs[offset + i] = BigInt::from(1);
            coeffs[offset + j] = BigInt::from(-1);
            out = &out * &Polynomial::linear(&coeffs);
            if let Some(ring) = ring {
                out = ring.reduce(&out).expect("arity matches");
            }
        }
    }
    out
}

/// The closed form of the top Chern class in the quotient ring:
/// `c_top = n! . prod t_i^{n-1}` as full polynomial equality.
pub fn ctop_closed_form_check(n: usize) -> Result<bool, RatioError> {
    check_range(n, PGL_MIN, PGL_MAX)?;
    let ring = QuotientRing::new(vec![n as u32; n]);
    let ctop = ctop_in_t_variables(n, 0, n, Some(&ring));
    let expected = ring
        .point_class()
        .scale(&BigRational::from_integer(BigInt::from(factorial(n))));
    Ok(ctop == expected)
}

/// The GIT integration ratio for PGL(n): the integral of `c_top` over the
/// torus quotient `(P^{n-1})^n`, with the section identities re-checked.
pub fn ratio_pgl(n: usize) -> Result<RatioReport, RatioError> {
    check_range(n, PGL_MIN, PGL_MAX)?;
    let start = Instant::now();
    let ring = QuotientRing::new(vec![n as u32; n]);
    let ctop = ctop_in_t_variables(n, 0, n, Some(&ring));
    let ratio = ring.integrate(&ctop).expect("arity matches");
    let mut checks = vec![
        NamedCheck {
            name: "vandermonde".to_string(),
            passed: vandermonde_check(n)?,
        },
        NamedCheck {
            name: "stability_census".to_string(),
            passed: census_check(n)?,
        },
    ];
    if n <= PAIRING_MAX {
        checks.insert(
            1,
            NamedCheck {
                name: "pairing_rule".to_string(),
                passed: pairing_rule_check(n)?,
            },
        );
    }
    Ok(RatioReport {
        group: format!("A{}", n - 1),
        weyl_order: factorial(n),
        ratio,
        checks,
        timing_ms: Some(start.elapsed().as_millis()),
    })
}

/// The Vandermonde identity as untruncated polynomials:
/// `prod_{i != j} (t_i - t_j) = (-1)^{n(n-1)/2} (det M_V)^2`, with the
/// determinant expanded by the explicit signed permutation sum.
pub fn vandermonde_check(n: usize) -> Result<bool, RatioError> {
    check_range(n, PGL_MIN, PGL_MAX)?;
    let lhs = ctop_in_t_variables(n, 0, n, None);
    let mut det = Polynomial::zero(n);
    for images in (0..n).permutations(n) {
        let perm = Permutation::from_images(images);
        let exps: Vec<u32> = (0..n).map(|i| perm.apply(i) as u32).collect();
        det = &det
            + &Polynomial::monomial(n, exps, BigRational::from_integer(BigInt::from(perm.sign())));
    }
    let sign = if (n * (n - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
    let rhs = (&det * &det).scale(&BigRational::from_integer(BigInt::from(sign)));
    Ok(lhs == rhs)
}

/// The longest-element pairing rule in the quotient ring: for monomials
/// `m_sigma = prod t_i^{sigma(i)-1}`, the product `m_sigma . m_sigma'` is
/// nonzero exactly when `sigma' = w_0 sigma`, lands on the point class, and
/// the sign product is `sgn(w_0) = (-1)^{n(n-1)/2}`.
pub fn pairing_rule_check(n: usize) -> Result<bool, RatioError> {
    check_range(n, PGL_MIN, PAIRING_MAX)?;
    let perms: Vec<Permutation> = (0..n)
        .permutations(n)
        .map(Permutation::from_images)
        .collect();
    let w0 = Permutation::from_images((0..n).rev().collect());
    let w0_sign = if (n * (n - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
    for sigma in &perms {
        let m_sigma: Vec<u32> = (0..n).map(|i| sigma.apply(i) as u32).collect();
        let mut nonzero_partners = 0usize;
        for sigma_prime in &perms {
            let m_prime: Vec<u32> = (0..n).map(|i| sigma_prime.apply(i) as u32).collect();
            let product_exps: Vec<u32> =
                m_sigma.iter().zip(&m_prime).map(|(a, b)| a + b).collect();
            let in_ring = product_exps.iter().all(|&e| e < n as u32);
            let is_w0_partner = *sigma_prime == w0.compose(sigma);
            if in_ring {
                nonzero_partners += 1;
                if !is_w0_partner {
                    return Ok(false);
                }
                if product_exps.iter().any(|&e| e != (n - 1) as u32) {
                    return Ok(false);
                }
                if sigma.sign() * sigma_prime.sign() != w0_sign {
                    return Ok(false);
                }
            } else if is_w0_partner {
                return Ok(false);
            }
        }
        if nonzero_partners != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The ratio for a product `PGL(n_1) x .. x PGL(n_k)`: disjoint variable
/// blocks, the product of the per-factor top Chern classes, integrated over
/// the product ring. Multiplicativity predicts `prod n_i!`.
pub fn ratio_product(ns: &[usize]) -> Result<RatioReport, RatioError> {
    if ns.is_empty() {
        return Err(RatioError::NoFactors);
    }
    if ns.len() > PRODUCT_LEN_MAX {
        return Err(RatioError::TooManyFactors {
            max: PRODUCT_LEN_MAX,
            got: ns.len(),
        });
    }
    for &n in ns {
        check_range(n, PGL_MIN, PRODUCT_FACTOR_MAX)?;
    }
    let start = Instant::now();
    let nvars: usize = ns.iter().sum();
    let mut caps = Vec::with_capacity(nvars);
    for &n in ns {
        caps.extend(std::iter::repeat_n(n as u32, n));
    }
    let ring = QuotientRing::new(caps);
    let mut ctop = Polynomial::one(nvars);
    let mut offset = 0;
    for &n in ns {
        let factor = ctop_in_t_variables(nvars, offset, n, Some(&ring));
        ctop = ring.reduce(&(&ctop * &factor)).expect("arity matches");
        offset += n;
    }
    let ratio = ring.integrate(&ctop).expect("arity matches");

    let mut vandermonde = true;
    let mut pairing = true;
    let mut census = true;
    for &n in ns {
        vandermonde &= vandermonde_check(n)?;
        pairing &= pairing_rule_check(n)?;
        census &= census_check(n)?;
    }
    Ok(RatioReport {
        group: ns.iter().map(|&n| format!("A{}", n - 1)).join("x"),
        weyl_order: ns.iter().map(|&n| factorial(n)).product(),
        ratio,
        checks: vec![
            NamedCheck {
                name: "vandermonde".to_string(),
                passed: vandermonde,
            },
            NamedCheck {
                name: "pairing_rule".to_string(),
                passed: pairing,
            },
            NamedCheck {
                name: "stability_census".to_string(),
                passed: census,
            },
        ],
        timing_ms: Some(start.elapsed().as_millis()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::RootSystem;

    fn int(n: u64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn census_patterns_for_small_n() {
        let entries = pm_n_state_census(2).unwrap();
        assert_eq!(entries.len(), 3);
        for e in &entries {
            if e.occupied_rows.len() == 2 {
                assert_eq!(e.classification, ClassificationKind::Stable);
            } else {
                assert_eq!(e.classification, ClassificationKind::Unstable);
            }
        }
        for n in 2..=5 {
            assert!(census_check(n).unwrap());
            let entries = pm_n_state_census(n).unwrap();
            assert_eq!(entries.len(), (1 << n) - 1);
            assert!(entries
                .iter()
                .all(|e| e.classification != ClassificationKind::StrictlySemistable));
        }
    }

    #[test]
    fn ratio_is_the_weyl_order() {
        for n in 2..=5 {
            let report = ratio_pgl(n).unwrap();
            assert_eq!(report.ratio, int(factorial(n)));
            assert_eq!(report.weyl_order, factorial(n));
            assert!(report.all_checks_pass());
        }
    }

    #[test]
    fn ctop_closed_form() {
        for n in 2..=4 {
            assert!(ctop_closed_form_check(n).unwrap());
        }
    }

    #[test]
    fn vandermonde_identity_small_n() {
        for n in 2..=4 {
            assert!(vandermonde_check(n).unwrap());
        }
    }

    #[test]
    fn pairing_rule_small_n() {
        for n in 2..=4 {
            assert!(pairing_rule_check(n).unwrap());
        }
    }

    #[test]
    fn product_ratio_multiplies() {
        assert_eq!(ratio_product(&[2]).unwrap().ratio, int(2));
        assert_eq!(ratio_product(&[2, 2]).unwrap().ratio, int(4));
        assert_eq!(ratio_product(&[2, 3]).unwrap().ratio, int(12));
    }

    #[test]
    fn range_validation() {
        assert!(matches!(ratio_pgl(1), Err(RatioError::OutOfRange { .. })));
        assert!(matches!(ratio_pgl(7), Err(RatioError::OutOfRange { .. })));
        assert!(matches!(
            ratio_product(&[2, 6]),
            Err(RatioError::OutOfRange { .. })
        ));
        assert!(matches!(
            ratio_product(&[2, 2, 2, 2]),
            Err(RatioError::TooManyFactors { .. })
        ));
        assert!(matches!(ratio_product(&[]), Err(RatioError::NoFactors)));
    }

    #[test]
    fn ctop_pulls_back_from_the_trace_zero_basis() {
        // chi_k -> t_k - (t_1 + .. + t_n)/n maps each root chi_i - chi_j to
        // t_i - t_j, so the abstract ctop lands on the direct product.
        for n in 2..=3 {
            let sys = RootSystem::build_type_a(n).unwrap();
            let average = {
                let mut sum = Polynomial::zero(n);
                for i in 0..n {
                    sum = &sum + &Polynomial::var(n, i);
                }
                sum.scale(&BigRational::new(BigInt::from(1), BigInt::from(n)))
            };
            let images: Vec<Polynomial> = (0..n - 1)
                .map(|k| &Polynomial::var(n, k) - &average)
                .collect();
            let pulled = sys.ctop().substitute(&images).unwrap();
            let direct = ctop_in_t_variables(n, 0, n, None);
            assert_eq!(pulled, direct);
        }
    }
}
