//! Arithmetic in the prime field GF(p).
//!
//! The modulus is a runtime parameter carried by [`PrimeField`], not by the
//! elements themselves; a [`Coeff`] is only meaningful relative to the field
//! it was produced by. Multiplications that should show up in operation
//! counts go through [`PrimeField::mul_counted`] with an explicit tally.

use std::fmt;

use thiserror::Error;

/// Default field characteristic used by generators and the CLI.
pub const DEFAULT_MODULUS: u64 = 32003;

/// Largest accepted modulus. Keeps products of canonical representatives
/// inside `u64` and coefficient parsing inside `i64`.
pub const MAX_MODULUS: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} out of range (need 2 <= p < 2^31)")]
    ModulusOutOfRange(u64),
    #[error("division by zero in GF(p)")]
    DivisionByZero,
}

/// A canonical residue in `[0, p)`.
///
/// Constructed through [`PrimeField`]; carries no modulus of its own.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Coeff(u64);

impl Coeff {
    /// The additive identity, canonical in every field.
    pub const ZERO: Coeff = Coeff(0);
    /// The multiplicative identity, canonical in every field with p > 1.
    pub const ONE: Coeff = Coeff(1);

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// GF(p) with a validated prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    modulus: u64,
}

impl PrimeField {
    /// Validates that `p` is prime and in range.
    pub fn new(p: u64) -> Result<PrimeField, FieldError> {
        if !(2..MAX_MODULUS).contains(&p) {
            return Err(FieldError::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { modulus: p })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Canonical residue of an unsigned integer.
    pub fn element(&self, value: u64) -> Coeff {
        Coeff(value % self.modulus)
    }

    /// Canonical residue of a signed integer, mapping negatives into `[0, p)`.
    pub fn element_i64(&self, value: i64) -> Coeff {
        let p = self.modulus as i64;
        Coeff(value.rem_euclid(p) as u64)
    }

    pub fn add(&self, a: Coeff, b: Coeff) -> Coeff {
        self.debug_check(a);
        self.debug_check(b);
        let s = a.0 + b.0;
        Coeff(if s >= self.modulus { s - self.modulus } else { s })
    }

    pub fn sub(&self, a: Coeff, b: Coeff) -> Coeff {
        self.add(a, self.neg(b))
    }

    pub fn neg(&self, a: Coeff) -> Coeff {
        self.debug_check(a);
        Coeff(if a.0 == 0 { 0 } else { self.modulus - a.0 })
    }

    /// Plain product. Not tallied; use [`PrimeField::mul_counted`] wherever
    /// the operation counts are part of the result.
    pub fn mul(&self, a: Coeff, b: Coeff) -> Coeff {
        self.debug_check(a);
        self.debug_check(b);
        Coeff(a.0 * b.0 % self.modulus)
    }

    /// Product counted as one field multiplication in `tally`.
    pub fn mul_counted(&self, a: Coeff, b: Coeff, tally: &mut u64) -> Coeff {
        *tally += 1;
        self.mul(a, b)
    }

    /// Inverse by the extended Euclidean algorithm.
    ///
    /// Inversions are deliberately not tallied as multiplications.
    pub fn inv(&self, a: Coeff) -> Result<Coeff, FieldError> {
        self.debug_check(a);
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let (mut r0, mut r1) = (self.modulus as i64, a.0 as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1, "modulus is prime, nonzero elements are units");
        Ok(self.element_i64(t0))
    }

    fn debug_check(&self, a: Coeff) {
        debug_assert!(a.0 < self.modulus, "non-canonical coefficient {a}");
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}
