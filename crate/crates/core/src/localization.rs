//! The free S-module model of the equivariant Chow group of the torus-fixed
//! locus of a flag variety G/P, with the push-pull operator of fixed-point
//! localization.
//!
//! Classes are tuples of polynomials in S = Sym X*(T), one component per
//! coset in W/W_P. Pushing forward along the fixed-point inclusion and
//! pulling back again multiplies the component at `w` by the product of the
//! w-translated tangent weights. The module verifies symbolically that the
//! class with every component equal to the product of the positive roots
//! lies in the image of this operator.

use crate::poly::Polynomial;
use crate::rootsys::{ParabolicData, WeylElement};
use num_bigint::BigInt;
use num_rational::BigRational;

/// An element of the free S-module on the cosets W/W_P: one polynomial
/// component per coset representative, in the representative order of the
/// parabolic data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointClass<'a> {
    parabolic: &'a ParabolicData,
    components: Vec<Polynomial>,
}

impl<'a> FixedPointClass<'a> {
    pub fn new(parabolic: &'a ParabolicData, components: Vec<Polynomial>) -> Self {
        assert_eq!(components.len(), parabolic.coset_reps().len());
        FixedPointClass {
            parabolic,
            components,
        }
    }

    pub fn zero(parabolic: &'a ParabolicData) -> Self {
        let rank = parabolic.system().rank();
        FixedPointClass {
            parabolic,
            components: vec![Polynomial::zero(rank); parabolic.coset_reps().len()],
        }
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn parabolic(&self) -> &ParabolicData {
        self.parabolic
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        FixedPointClass {
            parabolic: self.parabolic,
            components: self.components.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }
}

/// The multiplier of the push-pull operator at coset representative `w`:
/// the product over the tangent weights `Phi(g/p)` of their w-translates.
pub fn push_pull_multiplier(parabolic: &ParabolicData, w: &WeylElement) -> Polynomial {
    let sys = parabolic.system();
    let mut out = Polynomial::one(sys.rank());
    for alpha in parabolic.tangent_weights() {
        let moved = sys.act(w, alpha).expect("roots live in the system lattice");
        out = &out * &Polynomial::linear(moved.coords());
    }
    out
}

/// The push-pull multiplier is a W_P-invariant product, so it does not
/// depend on the choice of coset representative. Checked by recomputing at
/// every translate `w.u`, `u` in W_P.
pub fn multiplier_well_defined(parabolic: &ParabolicData) -> bool {
    parabolic.coset_reps().iter().all(|w| {
        let reference = push_pull_multiplier(parabolic, w);
        parabolic
            .weyl_subgroup()
            .iter()
            .all(|u| push_pull_multiplier(parabolic, &w.compose(u)) == reference)
    })
}

/// `i^* . i_*`: multiply each component by its coset's tangent-weight
/// product. Diagonal and S-linear.
pub fn push_pull<'a>(class: &FixedPointClass<'a>) -> FixedPointClass<'a> {
    let parabolic = class.parabolic;
    let components = parabolic
        .coset_reps()
        .iter()
        .zip(class.components())
        .map(|(w, c)| c * &push_pull_multiplier(parabolic, w))
        .collect();
    FixedPointClass {
        parabolic,
        components,
    }
}

/// The restriction of the positive-root product to the fixed locus: every
/// component equals `sqrt_ctop`.
pub fn sqrt_ctop_class(parabolic: &ParabolicData) -> FixedPointClass<'_> {
    let sqrt = parabolic.system().sqrt_ctop();
    FixedPointClass {
        parabolic,
        components: vec![sqrt; parabolic.coset_reps().len()],
    }
}

/// The preimage candidate: the component at `w` is
/// `det(w) . prod over the negative Levi roots of their w-translates`.
pub fn beta_class(parabolic: &ParabolicData) -> FixedPointClass<'_> {
    let sys = parabolic.system();
    let components = parabolic
        .coset_reps()
        .iter()
        .map(|w| {
            let mut out = Polynomial::constant(
                sys.rank(),
                BigRational::from_integer(BigInt::from(w.det())),
            );
            for alpha in parabolic.levi_negative_roots() {
                let moved = sys.act(w, alpha).expect("roots live in the system lattice");
                out = &out * &Polynomial::linear(moved.coords());
            }
            out
        })
        .collect();
    FixedPointClass {
        parabolic,
        components,
    }
}

/// Verify that the anti-invariant class is hit by the push-pull operator:
///
/// `push_pull(beta) = (-1)^{|Phi+|} . sqrt_ctop` componentwise.
///
/// At each coset the two root products combine to the product of *all*
/// negative-root translates, and `prod_{alpha in Phi-} w.alpha =
/// (-1)^{|Phi+|} det(w) sqrt_ctop`; the `det(w)` built into beta cancels
/// the sign of the translate, leaving the global `(-1)^{|Phi+|}`.
pub fn verify_antiinvariant_identity(parabolic: &ParabolicData) -> bool {
    if !multiplier_well_defined(parabolic) {
        return false;
    }
    let phi_plus = parabolic.system().positive_roots().len();
    let sign = if phi_plus.is_multiple_of(2) { 1 } else { -1 };
    let target = sqrt_ctop_class(parabolic).scale(&BigRational::from_integer(BigInt::from(sign)));
    push_pull(&beta_class(parabolic)) == target
}
