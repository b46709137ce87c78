//! Module terms, the position-over-term order, labeled polynomials, and
//! S-pair construction.
//!
//! A labeled polynomial tracks only the pair (signature, image); the full
//! module element it stands for is never materialized. Signatures are kept
//! monic (no coefficient): every comparison the algorithms make is up to a
//! scalar anyway. Regular reductions leave the signature untouched, so the
//! pair is a faithful working representation.

use std::cmp::Ordering;

use crate::ffield::PrimeField;
use crate::poly::{Monomial, Polynomial};

/// A monomial times a module basis vector, `m * e_index` (0-based index).
///
/// `Ord` is the POT order: index first, grevlex on the monomial second.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ModuleTerm {
    pub mono: Monomial,
    pub index: usize,
}

impl ModuleTerm {
    pub fn new(mono: Monomial, index: usize) -> ModuleTerm {
        ModuleTerm { mono, index }
    }

    /// `e_index` itself.
    pub fn basis(index: usize, nvars: usize) -> ModuleTerm {
        ModuleTerm {
            mono: Monomial::one(nvars),
            index,
        }
    }

    /// Multiplies by a ring monomial; order-compatible with POT.
    pub fn mul_mono(&self, m: &Monomial) -> ModuleTerm {
        ModuleTerm {
            mono: self.mono.mul(m),
            index: self.index,
        }
    }

    /// Same basis vector and the monomial divides componentwise.
    pub fn divides(&self, other: &ModuleTerm) -> bool {
        self.index == other.index && self.mono.divides(&other.mono)
    }
}

impl Ord for ModuleTerm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.index
            .cmp(&other.index)
            .then_with(|| self.mono.cmp(&other.mono))
    }
}

impl PartialOrd for ModuleTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// How a basis element came to exist.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Origin {
    /// Seeded from an input generator (or a previous increment's basis).
    Input,
    /// Result of reducing an S-pair; `passed_sf` records whether the
    /// tail-reduction condition held right after top reduction.
    SPair { passed_sf: bool },
}

/// A (signature, image) pair with a creation sequence number.
#[derive(Clone, Debug)]
pub struct LabeledPoly {
    pub sig: ModuleTerm,
    pub image: Polynomial,
    pub id: u64,
    pub origin: Origin,
}

impl LabeledPoly {
    pub fn input(sig: ModuleTerm, image: Polynomial, id: u64) -> LabeledPoly {
        LabeledPoly {
            sig,
            image,
            id,
            origin: Origin::Input,
        }
    }
}

/// One half of an S-pair: the multiplier applied to a parent basis slot.
#[derive(Clone, Copy, Debug)]
pub struct SPairHalf {
    pub mult: Monomial,
    pub parent: usize,
}

/// Descriptor of a regular S-pair. `left` is always the half carrying the
/// pair signature (the POT-larger multiplied signature).
#[derive(Clone, Debug)]
pub struct SPair {
    pub lcm: Monomial,
    pub left: SPairHalf,
    pub right: SPairHalf,
    pub sig: ModuleTerm,
    pub degree: u32,
    pub id: u64,
}

impl SPair {
    fn queue_key(&self) -> (&ModuleTerm, u32, u64) {
        (&self.sig, self.degree, self.id)
    }
}

impl PartialEq for SPair {
    fn eq(&self, other: &Self) -> bool {
        self.queue_key() == other.queue_key()
    }
}

impl Eq for SPair {}

impl Ord for SPair {
    fn cmp(&self, other: &Self) -> Ordering {
        self.queue_key().cmp(&other.queue_key())
    }
}

impl PartialOrd for SPair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Builds the S-pair of two basis elements, or `None` when the pair is
/// singular (both multiplied signatures coincide). `ia`/`ib` are the basis
/// slots of `a`/`b`, recorded for later evaluation.
pub fn make_spair(a: &LabeledPoly, ia: usize, b: &LabeledPoly, ib: usize, id: u64) -> Option<SPair> {
    let la = a.image.leading_monomial().expect("S-pair of a zero image");
    let lb = b.image.leading_monomial().expect("S-pair of a zero image");
    let lcm = la.lcm(lb);
    let ma = lcm.checked_div(la).unwrap();
    let mb = lcm.checked_div(lb).unwrap();
    let sa = a.sig.mul_mono(&ma);
    let sb = b.sig.mul_mono(&mb);
    let degree = lcm.degree();
    match sa.cmp(&sb) {
        Ordering::Equal => None,
        Ordering::Greater => Some(SPair {
            lcm,
            left: SPairHalf { mult: ma, parent: ia },
            right: SPairHalf { mult: mb, parent: ib },
            sig: sa,
            degree,
            id,
        }),
        Ordering::Less => Some(SPair {
            lcm,
            left: SPairHalf { mult: mb, parent: ib },
            right: SPairHalf { mult: ma, parent: ia },
            sig: sb,
            degree,
            id,
        }),
    }
}

/// Evaluates an S-pair into a labeled polynomial: both halves are scaled so
/// the lcm terms cancel exactly. Field multiplications accrue to `tally`
/// (one per term of each parent image); the two inversions are not counted.
pub fn evaluate_spair(
    p: &SPair,
    left: &LabeledPoly,
    right: &LabeledPoly,
    id: u64,
    field: &PrimeField,
    tally: &mut u64,
) -> LabeledPoly {
    let scale = |lp: &LabeledPoly, mult: &Monomial, tally: &mut u64| {
        let lc = lp.image.leading_term().expect("nonzero image").coeff;
        let inv = field.inv(lc).expect("leading coefficient nonzero");
        lp.image.mul_term(inv, mult, field, tally)
    };
    let l = scale(left, &p.left.mult, tally);
    let r = scale(right, &p.right.mult, tally);
    let image = l.sub(&r, field);
    debug_assert!(
        image
            .leading_monomial()
            .map_or(true, |lm| *lm < p.lcm),
        "lcm terms of an S-pair must cancel"
    );
    LabeledPoly {
        sig: p.sig,
        image,
        id,
        origin: Origin::SPair { passed_sf: false },
    }
}
