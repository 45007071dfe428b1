//! Sparse multivariate polynomial arithmetic over exact rationals, plus
//! truncated quotient rings `Q[t_1..t_m]/(t_i^{d_i})` with integration by
//! top-coefficient extraction.
//!
//! Terms are kept in a hash map from dense exponent vectors to nonzero
//! coefficients; canonical (lexicographic) order is imposed only when
//! iterating for display, serialization, or hashing-free equality checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable count mismatch: expected {expected}, found {found}")]
    VarCountMismatch { expected: usize, found: usize },
    #[error("substitution arity mismatch: {nvars} variables, {images} images")]
    SubstitutionArity { nvars: usize, images: usize },
}

/// A sparse multivariate polynomial with `BigRational` coefficients.
///
/// Invariants: no zero coefficients are stored and exponent vectors all have
/// length `nvars`, so equality of the term maps is equality of polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: HashMap<Vec<u32>, BigRational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: HashMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    /// The monomial `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut exps = vec![0u32; nvars];
        exps[i] = 1;
        Self::monomial(nvars, exps, BigRational::one())
    }

    pub fn monomial(nvars: usize, exps: Vec<u32>, coeff: BigRational) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        if !coeff.is_zero() {
            p.terms.insert(exps, coeff);
        }
        p
    }

    /// The linear form with the given integer coefficients, one per variable.
    pub fn linear(coeffs: &[BigInt]) -> Self {
        let nvars = coeffs.len();
        let mut p = Self::zero(nvars);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut exps = vec![0u32; nvars];
                exps[i] = 1;
                p.terms
                    .insert(exps, BigRational::from_integer(c.clone()));
            }
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// True when every term has the same total degree `d`.
    pub fn is_homogeneous_of_degree(&self, d: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == d)
    }

    pub fn coeff(&self, exps: &[u32]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    fn insert_term(&mut self, exps: Vec<u32>, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(exps) {
            Entry::Occupied(mut slot) => {
                let sum = slot.get() + &coeff;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_arity(other)?;
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert_term(exps, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base).expect("same arity");
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base).expect("same arity");
            }
        }
        result
    }

    /// Ring-homomorphism evaluation: replace variable `i` by `images[i]`.
    /// All images must share a common variable count.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Self, PolyError> {
        if images.len() != self.nvars {
            return Err(PolyError::SubstitutionArity {
                nvars: self.nvars,
                images: images.len(),
            });
        }
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        for im in images {
            if im.nvars != target {
                return Err(PolyError::VarCountMismatch {
                    expected: target,
                    found: im.nvars,
                });
            }
        }
        // Memoized power tables, one per variable.
        let mut powers: Vec<Vec<Polynomial>> =
            images.iter().map(|im| vec![Polynomial::one(target), im.clone()]).collect();
        let mut out = Polynomial::zero(target);
        for (exps, coeff) in self.sorted_terms() {
            let mut term = Polynomial::constant(target, coeff.clone());
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i]
                        .last()
                        .unwrap()
                        .mul(&images[i])
                        .expect("same arity");
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][e as usize]).expect("same arity");
            }
            out = out.add(&term).expect("same arity");
        }
        Ok(out)
    }

    /// Terms in canonical order: lexicographic on the exponent vector,
    /// leading monomial first.
    pub fn sorted_terms(&self) -> Vec<(&Vec<u32>, &BigRational)> {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.cmp(a.0));
        terms
    }

    fn check_arity(&self, other: &Self) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::VarCountMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    /// Render with a caller-chosen variable namer.
    pub fn render(&self, name: impl Fn(usize) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (exps, coeff)) in self.sorted_terms().into_iter().enumerate() {
            let mono: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        name(i)
                    } else {
                        format!("{}^{}", name(i), e)
                    }
                })
                .collect();
            let mono = mono.join("*");
            let abs = coeff.abs();
            let coeff_str = if abs.is_one() && !mono.is_empty() {
                String::new()
            } else {
                format!("{}", abs)
            };
            if idx == 0 {
                if coeff.is_negative() {
                    out.push('-');
                }
            } else if coeff.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            match (coeff_str.is_empty(), mono.is_empty()) {
                (true, false) => out.push_str(&mono),
                (false, true) => out.push_str(&coeff_str),
                (false, false) => {
                    out.push_str(&coeff_str);
                    out.push('*');
                    out.push_str(&mono);
                }
                (true, true) => out.push('1'),
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(|i| format!("x{}", i + 1)))
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            exponents: &'a [u32],
            numerator: String,
            denominator: String,
        }
        let terms = self.sorted_terms();
        let mut seq = serializer.serialize_seq(Some(terms.len()))?;
        for (exps, coeff) in terms {
            seq.serialize_element(&Term {
                exponents: exps,
                numerator: coeff.numer().to_string(),
                denominator: coeff.denom().to_string(),
            })?;
        }
        seq.end()
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::add(self, rhs).expect("variable count mismatch")
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::sub(self, rhs).expect("variable count mismatch")
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::mul(self, rhs).expect("variable count mismatch")
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

/// The quotient ring `Q[t_1..t_m]/(t_1^{d_1},..,t_m^{d_m})`: the rational
/// Chow ring of a product of projective spaces `P^{d_1-1} x .. x P^{d_m-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientRing {
    caps: Vec<u32>,
}

impl QuotientRing {
    pub fn new(caps: Vec<u32>) -> Self {
        assert!(caps.iter().all(|&d| d > 0), "caps must be positive");
        QuotientRing { caps }
    }

    pub fn nvars(&self) -> usize {
        self.caps.len()
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    /// Drop every term with some exponent at or above its cap.
    pub fn reduce(&self, p: &Polynomial) -> Result<Polynomial, PolyError> {
        if p.nvars != self.nvars() {
            return Err(PolyError::VarCountMismatch {
                expected: self.nvars(),
                found: p.nvars,
            });
        }
        let mut out = Polynomial::zero(p.nvars);
        for (e, c) in &p.terms {
            if e.iter().zip(&self.caps).all(|(&exp, &cap)| exp < cap) {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// The degree map: the coefficient of the point class
    /// `prod t_i^{d_i - 1}` after reduction.
    pub fn integrate(&self, p: &Polynomial) -> Result<BigRational, PolyError> {
        if p.nvars != self.nvars() {
            return Err(PolyError::VarCountMismatch {
                expected: self.nvars(),
                found: p.nvars,
            });
        }
        let top: Vec<u32> = self.caps.iter().map(|&d| d - 1).collect();
        Ok(p.coeff(&top))
    }

    /// The point class `prod t_i^{d_i - 1}`.
    pub fn point_class(&self) -> Polynomial {
        let top: Vec<u32> = self.caps.iter().map(|&d| d - 1).collect();
        Polynomial::monomial(self.nvars(), top, BigRational::one())
    }
}
