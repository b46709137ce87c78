//! Monomials under graded reverse lexicographic order and sparse
//! polynomials over GF(p).
//!
//! Variables are ordered `x1 > x2 > ... > xn` (index 0 is the largest).
//! `Ord` on [`Monomial`] *is* grevlex; the whole crate assumes that order.
//! Polynomial terms are kept strictly descending with nonzero coefficients,
//! and the zero polynomial is the empty term list.

use std::cmp::Ordering;
use std::fmt;

use crate::ffield::{Coeff, PrimeField};

/// Hard cap on the number of variables (benchmark systems stay well below).
pub const MAX_VARS: usize = 16;

/// A power product, stored as a dense fixed-length exponent vector with the
/// total degree cached.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
    nvars: u8,
    degree: u32,
}

impl Monomial {
    /// Builds a monomial from an exponent slice. Panics if `exps` is longer
    /// than [`MAX_VARS`].
    pub fn new(exps: &[u16]) -> Monomial {
        assert!(
            exps.len() <= MAX_VARS,
            "at most {MAX_VARS} variables are supported, got {}",
            exps.len()
        );
        let mut m = Monomial {
            exps: [0; MAX_VARS],
            nvars: exps.len() as u8,
            degree: 0,
        };
        m.exps[..exps.len()].copy_from_slice(exps);
        m.degree = exps.iter().map(|&e| e as u32).sum();
        m
    }

    /// The constant monomial 1.
    pub fn one(nvars: usize) -> Monomial {
        assert!(nvars <= MAX_VARS);
        Monomial {
            exps: [0; MAX_VARS],
            nvars: nvars as u8,
            degree: 0,
        }
    }

    /// The variable `x_{i+1}` (0-indexed slot `i`).
    pub fn var(i: usize, nvars: usize) -> Monomial {
        assert!(i < nvars && nvars <= MAX_VARS);
        let mut m = Monomial::one(nvars);
        m.exps[i] = 1;
        m.degree = 1;
        m
    }

    pub fn nvars(&self) -> usize {
        self.nvars as usize
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponent(&self, i: usize) -> u16 {
        self.exps[..self.nvars()][i]
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps[..self.nvars()]
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    fn check_arity(&self, other: &Monomial) {
        assert_eq!(
            self.nvars, other.nvars,
            "monomials live in different variable counts"
        );
    }

    /// Componentwise exponent sum.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.check_arity(other);
        let mut out = *self;
        for i in 0..self.nvars() {
            out.exps[i] += other.exps[i];
        }
        out.degree += other.degree;
        out
    }

    /// Exact quotient, or `None` when `other` does not divide `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        self.check_arity(other);
        let mut out = *self;
        for i in 0..self.nvars() {
            out.exps[i] = self.exps[i].checked_sub(other.exps[i])?;
        }
        out.degree -= other.degree;
        Some(out)
    }

    /// Componentwise `<=` test: does `self` divide `other`?
    pub fn divides(&self, other: &Monomial) -> bool {
        self.check_arity(other);
        if self.degree > other.degree {
            return false;
        }
        self.exps[..self.nvars()]
            .iter()
            .zip(&other.exps[..other.nvars()])
            .all(|(a, b)| a <= b)
    }

    /// Componentwise maximum.
    pub fn lcm(&self, other: &Monomial) -> Monomial {
        self.check_arity(other);
        let mut out = *self;
        let mut degree = 0u32;
        for i in 0..self.nvars() {
            out.exps[i] = self.exps[i].max(other.exps[i]);
            degree += out.exps[i] as u32;
        }
        out.degree = degree;
        out
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.check_arity(other);
        self.exps[..self.nvars()]
            .iter()
            .zip(&other.exps[..other.nvars()])
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Grevlex comparison: total degree first; on ties the monomial whose
    /// exponent deficit appears last (scanning from the smallest variable)
    /// is the larger one.
    pub fn grevlex_cmp(&self, other: &Monomial) -> Ordering {
        self.check_arity(other);
        self.degree.cmp(&other.degree).then_with(|| {
            for i in (0..self.nvars()).rev() {
                if self.exps[i] != other.exps[i] {
                    return other.exps[i].cmp(&self.exps[i]);
                }
            }
            Ordering::Equal
        })
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.grevlex_cmp(other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// One coefficient-monomial pair of a polynomial.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Term {
    pub mono: Monomial,
    pub coeff: Coeff,
}

/// Sparse polynomial: terms strictly descending in grevlex, all coefficients
/// nonzero. The empty list is the zero polynomial.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<Term>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Polynomial {
        Polynomial {
            nvars,
            terms: Vec::new(),
        }
    }

    /// Builds a polynomial from arbitrary (monomial, coefficient) pairs:
    /// sorts, merges duplicates in the field, and drops zeros.
    pub fn from_terms<I>(nvars: usize, field: &PrimeField, terms: I) -> Polynomial
    where
        I: IntoIterator<Item = (Monomial, Coeff)>,
    {
        let mut terms: Vec<Term> = terms
            .into_iter()
            .map(|(mono, coeff)| {
                assert_eq!(mono.nvars(), nvars, "term arity mismatch");
                Term { mono, coeff }
            })
            .collect();
        terms.sort_by(|a, b| b.mono.cmp(&a.mono));
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.mono == t.mono => {
                    last.coeff = field.add(last.coeff, t.coeff);
                }
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !t.coeff.is_zero());
        let p = Polynomial {
            nvars,
            terms: merged,
        };
        p.debug_validate();
        p
    }

    pub fn constant(nvars: usize, c: Coeff) -> Polynomial {
        if c.is_zero() {
            Polynomial::zero(nvars)
        } else {
            Polynomial {
                nvars,
                terms: vec![Term {
                    mono: Monomial::one(nvars),
                    coeff: c,
                }],
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.mono)
    }

    /// Highest total degree among the terms; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.mono.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.total_degree() {
            None => true,
            Some(d) => self.terms.iter().all(|t| t.mono.degree() == d),
        }
    }

    /// Merged sum. Performs no field multiplications.
    pub fn add(&self, other: &Polynomial, field: &PrimeField) -> Polynomial {
        assert_eq!(self.nvars, other.nvars, "polynomial arity mismatch");
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match a.mono.cmp(&b.mono) {
                Ordering::Greater => {
                    out.push(*a);
                    i += 1;
                }
                Ordering::Less => {
                    out.push(*b);
                    j += 1;
                }
                Ordering::Equal => {
                    let c = field.add(a.coeff, b.coeff);
                    if !c.is_zero() {
                        out.push(Term { mono: a.mono, coeff: c });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        let p = Polynomial {
            nvars: self.nvars,
            terms: out,
        };
        p.debug_validate();
        p
    }

    /// Merged difference. Performs no field multiplications.
    pub fn sub(&self, other: &Polynomial, field: &PrimeField) -> Polynomial {
        self.add(&other.neg(field), field)
    }

    pub fn neg(&self, field: &PrimeField) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    mono: t.mono,
                    coeff: field.neg(t.coeff),
                })
                .collect(),
        }
    }

    /// Multiplies by the term `c * m` with `c != 0`. Performs exactly
    /// `self.len()` field multiplications, all recorded in `tally`;
    /// the term order is preserved.
    pub fn mul_term(
        &self,
        c: Coeff,
        m: &Monomial,
        field: &PrimeField,
        tally: &mut u64,
    ) -> Polynomial {
        assert!(!c.is_zero(), "scaling by zero would drop every term");
        let p = Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    mono: t.mono.mul(m),
                    coeff: field.mul_counted(c, t.coeff, tally),
                })
                .collect(),
        };
        p.debug_validate();
        p
    }

    /// Scales so the leading coefficient is 1. Already-monic input is
    /// returned as-is without any multiplications.
    pub fn monic(&self, field: &PrimeField, tally: &mut u64) -> Polynomial {
        match self.leading_term() {
            None => self.clone(),
            Some(lt) if lt.coeff == Coeff::ONE => self.clone(),
            Some(lt) => {
                let inv = field.inv(lt.coeff).expect("leading coefficient nonzero");
                self.mul_term(inv, &Monomial::one(self.nvars), field, tally)
            }
        }
    }

    /// Pads every term with a power of one fresh trailing variable so all
    /// terms reach the total degree.
    pub fn homogenized(&self) -> Polynomial {
        assert!(self.nvars < MAX_VARS, "no room for a homogenizing variable");
        let d = self.total_degree().unwrap_or(0);
        let p = Polynomial {
            nvars: self.nvars + 1,
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let mut exps = [0u16; MAX_VARS];
                    exps[..self.nvars].copy_from_slice(t.mono.exponents());
                    exps[self.nvars] = (d - t.mono.degree()) as u16;
                    Term {
                        mono: Monomial::new(&exps[..self.nvars + 1]),
                        coeff: t.coeff,
                    }
                })
                .collect(),
        };
        // padding to a common degree preserves grevlex order
        p.debug_validate();
        p
    }

    /// Drops the trailing variable, merging any collisions.
    pub fn dehomogenized(&self, field: &PrimeField) -> Polynomial {
        assert!(self.nvars >= 1, "nothing to dehomogenize");
        let n = self.nvars - 1;
        Polynomial::from_terms(
            n,
            field,
            self.terms
                .iter()
                .map(|t| (Monomial::new(&t.mono.exponents()[..n]), t.coeff)),
        )
    }

    /// Checks the representation invariant in debug builds.
    pub fn debug_validate(&self) {
        #[cfg(debug_assertions)]
        {
            for t in &self.terms {
                assert_eq!(t.mono.nvars(), self.nvars);
                assert!(!t.coeff.is_zero(), "zero coefficient stored");
                assert_eq!(
                    t.mono.degree(),
                    t.mono.exponents().iter().map(|&e| e as u32).sum::<u32>(),
                    "stale cached degree"
                );
            }
            for w in self.terms.windows(2) {
                assert!(w[0].mono > w[1].mono, "terms not strictly descending");
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f() -> PrimeField {
        PrimeField::new(32003).unwrap()
    }

    fn mono3(x: u16, y: u16, z: u16) -> Monomial {
        Monomial::new(&[x, y, z])
    }

    #[test]
    fn grevlex_examples() {
        // x^2 > x*y: difference (1,-1,0) has a negative last nonzero entry
        assert_eq!(mono3(2, 0, 0).cmp(&mono3(1, 1, 0)), Ordering::Greater);
        // x^2*y > x*y*z: difference (1,0,-1)
        assert_eq!(mono3(2, 1, 0).cmp(&mono3(1, 1, 1)), Ordering::Greater);
        let a = mono3(3, 1, 2);
        assert_eq!(a.cmp(&a), Ordering::Equal);
        // higher total degree wins
        assert!(mono3(1, 1, 0) > mono3(1, 0, 0));
        // standard 2-variable chain: x^2 > xy > y^2
        let x2 = Monomial::new(&[2, 0]);
        let xy = Monomial::new(&[1, 1]);
        let y2 = Monomial::new(&[0, 2]);
        assert!(x2 > xy && xy > y2);
    }

    #[test]
    #[should_panic(expected = "different variable counts")]
    fn grevlex_rejects_arity_mismatch() {
        let _ = Monomial::new(&[1, 0]).grevlex_cmp(&mono3(1, 0, 0));
    }

    #[test]
    fn mono_mul_div_lcm() {
        let x = mono3(1, 0, 0);
        let y = mono3(0, 1, 0);
        assert_eq!(x.mul(&y), mono3(1, 1, 0));
        let one = Monomial::one(3);
        assert_eq!(x.mul(&one), x);
        assert_eq!(mono3(2, 0, 0).mul(&x), mono3(3, 0, 0));

        // x^2*y / x*y = x
        assert_eq!(mono3(2, 1, 0).checked_div(&mono3(1, 1, 0)), Some(x));
        // x*y / x^2 does not divide
        assert_eq!(mono3(1, 1, 0).checked_div(&mono3(2, 0, 0)), None);
        let a = mono3(3, 2, 1);
        assert_eq!(a.checked_div(&a), Some(one));

        // lcm(x^2, x*y) = x^2*y
        assert_eq!(mono3(2, 0, 0).lcm(&mono3(1, 1, 0)), mono3(2, 1, 0));
        assert_eq!(a.lcm(&a), a);
        assert_eq!(a.lcm(&one), a);
    }

    #[test]
    fn poly_add_cancels() {
        let f = f();
        let x = Monomial::new(&[1, 0]);
        let y = Monomial::new(&[0, 1]);
        let one = Monomial::one(2);
        // (x + y) + (-x + 1) = y + 1
        let a = Polynomial::from_terms(2, &f, [(x, Coeff::ONE), (y, Coeff::ONE)]);
        let b = Polynomial::from_terms(2, &f, [(x, f.element_i64(-1)), (one, Coeff::ONE)]);
        let sum = a.add(&b, &f);
        assert_eq!(
            sum,
            Polynomial::from_terms(2, &f, [(y, Coeff::ONE), (one, Coeff::ONE)])
        );

        assert_eq!(a.add(&Polynomial::zero(2), &f), a);

        // (x + 1) + (x + 1) = 2x + 2
        let c = Polynomial::from_terms(2, &f, [(x, Coeff::ONE), (one, Coeff::ONE)]);
        let doubled = c.add(&c, &f);
        assert_eq!(
            doubled,
            Polynomial::from_terms(2, &f, [(x, f.element(2)), (one, f.element(2))])
        );

        // exact cancellation yields zero
        assert!(a.sub(&a, &f).is_zero());
    }

    #[test]
    fn mul_term_counts_and_scales() {
        let f = f();
        let y = Monomial::new(&[0, 1, 0]);
        let z = Monomial::new(&[0, 0, 1]);
        let g = Polynomial::from_terms(3, &f, [(y, Coeff::ONE), (z, Coeff::ONE)]);
        let mut tally = 0;
        let x = Monomial::new(&[1, 0, 0]);
        let out = g.mul_term(Coeff::ONE, &x, &f, &mut tally);
        assert_eq!(tally, 2);
        assert_eq!(
            out,
            Polynomial::from_terms(
                3,
                &f,
                [(mono3(1, 1, 0), Coeff::ONE), (mono3(1, 0, 1), Coeff::ONE)]
            )
        );

        // identity scaling still returns the same polynomial (and counts)
        let mut tally2 = 0;
        assert_eq!(
            g.mul_term(Coeff::ONE, &Monomial::one(3), &f, &mut tally2),
            g
        );
        assert_eq!(tally2, 2);

        // 3*y*(x + 2) mod 5 = 3xy + y
        let f5 = PrimeField::new(5).unwrap();
        let h = Polynomial::from_terms(
            2,
            &f5,
            [
                (Monomial::new(&[1, 0]), Coeff::ONE),
                (Monomial::one(2), f5.element(2)),
            ],
        );
        let mut tally3 = 0;
        let out = h.mul_term(f5.element(3), &Monomial::new(&[0, 1]), &f5, &mut tally3);
        assert_eq!(tally3, 2);
        assert_eq!(
            out,
            Polynomial::from_terms(
                2,
                &f5,
                [
                    (Monomial::new(&[1, 1]), f5.element(3)),
                    (Monomial::new(&[0, 1]), Coeff::ONE),
                ]
            )
        );
    }

    #[test]
    fn homogenize_pads_and_round_trips() {
        let f = f();
        // x^2 + y -> x^2 + y*h
        let p = Polynomial::from_terms(
            2,
            &f,
            [
                (Monomial::new(&[2, 0]), Coeff::ONE),
                (Monomial::new(&[0, 1]), Coeff::ONE),
            ],
        );
        let h = p.homogenized();
        assert!(h.is_homogeneous());
        assert_eq!(
            h,
            Polynomial::from_terms(
                3,
                &f,
                [(mono3(2, 0, 0), Coeff::ONE), (mono3(0, 1, 1), Coeff::ONE)]
            )
        );
        assert_eq!(h.dehomogenized(&f), p);

        // already homogeneous input gets h-exponent 0 everywhere
        let q = Polynomial::from_terms(
            2,
            &f,
            [
                (Monomial::new(&[2, 0]), Coeff::ONE),
                (Monomial::new(&[1, 1]), f.element(3)),
            ],
        );
        let qh = q.homogenized();
        assert!(qh.terms().iter().all(|t| t.mono.exponent(2) == 0));

        // x + 1 -> x + h
        let r = Polynomial::from_terms(
            1,
            &f,
            [(Monomial::new(&[1]), Coeff::ONE), (Monomial::one(1), Coeff::ONE)],
        );
        let rh = r.homogenized();
        assert_eq!(
            rh,
            Polynomial::from_terms(
                2,
                &f,
                [
                    (Monomial::new(&[1, 0]), Coeff::ONE),
                    (Monomial::new(&[0, 1]), Coeff::ONE)
                ]
            )
        );
    }

    #[test]
    fn monic_skips_when_leading_is_one() {
        let f = f();
        let p = Polynomial::from_terms(
            2,
            &f,
            [
                (Monomial::new(&[2, 0]), f.element(7)),
                (Monomial::new(&[0, 1]), f.element(3)),
            ],
        );
        let mut tally = 0;
        let m = p.monic(&f, &mut tally);
        assert_eq!(tally, 2);
        assert_eq!(m.leading_term().unwrap().coeff, Coeff::ONE);
        let mut tally2 = 0;
        assert_eq!(m.monic(&f, &mut tally2), m);
        assert_eq!(tally2, 0);
    }

    fn arb_mono(nvars: usize, maxe: u16) -> impl Strategy<Value = Monomial> {
        proptest::collection::vec(0..=maxe, nvars).prop_map(|v| Monomial::new(&v))
    }

    proptest! {
        /// Total order: antisymmetry and transitivity on random triples,
        /// multiplicativity, and minimality of 1.
        #[test]
        fn grevlex_order_laws(
            a in arb_mono(4, 6),
            b in arb_mono(4, 6),
            c in arb_mono(4, 6),
            m in arb_mono(4, 6),
        ) {
            prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
            if a <= b && b <= c {
                prop_assert!(a <= c);
            }
            if a < b {
                prop_assert!(a.mul(&m) < b.mul(&m));
            }
            prop_assert!(Monomial::one(4) <= a);
            prop_assert_eq!(a.cmp(&b) == Ordering::Equal, a == b);
        }

        /// Divisibility agrees with checked_div, and lcm is a common
        /// multiple that both factors divide.
        #[test]
        fn division_laws(a in arb_mono(4, 6), b in arb_mono(4, 6)) {
            prop_assert_eq!(b.divides(&a), a.checked_div(&b).is_some());
            if let Some(q) = a.checked_div(&b) {
                prop_assert_eq!(q.mul(&b), a);
            }
            let l = a.lcm(&b);
            prop_assert!(a.divides(&l) && b.divides(&l));
            prop_assert_eq!(a.mul(&b).degree(), a.degree() + b.degree());
        }

        /// Arithmetic preserves the sorted nonzero-coefficient invariant
        /// (validated inside the ops in debug builds) and is commutative.
        #[test]
        fn poly_ops_keep_invariant(
            ta in proptest::collection::vec((arb_mono(3, 4), 0u64..32003), 0..12),
            tb in proptest::collection::vec((arb_mono(3, 4), 0u64..32003), 0..12),
        ) {
            let field = f();
            let a = Polynomial::from_terms(3, &field, ta.into_iter().map(|(m, c)| (m, field.element(c))));
            let b = Polynomial::from_terms(3, &field, tb.into_iter().map(|(m, c)| (m, field.element(c))));
            let s = a.add(&b, &field);
            s.debug_validate();
            prop_assert_eq!(s.clone(), b.add(&a, &field));
            prop_assert!(a.sub(&a, &field).is_zero());
            prop_assert_eq!(s.sub(&b, &field), a);
        }

        /// mul_term's multiplication count always equals the term count.
        #[test]
        fn mul_term_count_matches_len(
            ta in proptest::collection::vec((arb_mono(3, 4), 1u64..32003), 0..12),
            c in 1u64..32003,
            m in arb_mono(3, 4),
        ) {
            let field = f();
            let a = Polynomial::from_terms(3, &field, ta.into_iter().map(|(m, c)| (m, field.element(c))));
            let mut tally = 0;
            let out = a.mul_term(field.element(c), &m, &field, &mut tally);
            prop_assert_eq!(tally, a.len() as u64);
            out.debug_validate();
            prop_assert_eq!(out.len(), a.len());
        }

        /// Homogenization always yields a homogeneous polynomial and
        /// dehomogenization undoes it.
        #[test]
        fn homogenize_round_trip(
            ta in proptest::collection::vec((arb_mono(3, 4), 1u64..32003), 0..12),
        ) {
            let field = f();
            let a = Polynomial::from_terms(3, &field, ta.into_iter().map(|(m, c)| (m, field.element(c))));
            let h = a.homogenized();
            prop_assert!(h.is_homogeneous());
            prop_assert_eq!(h.dehomogenized(&field), a);
        }
    }
}
