//! Regular 𝔰-reduction: single top/tail steps, the three strategy-level
//! drivers (only-top, full, selective-full), and the SF condition that
//! gates tail work, all with exact operation counting.
//!
//! A reduction step is *eligible* when the reducer's lead divides the target
//! monomial and the reducer's multiplied signature is strictly below the
//! signature of the element being reduced. Reducers are scanned in basis
//! insertion order and the first eligible one fires; a fired step never
//! changes the signature.

use thiserror::Error;

use crate::ffield::PrimeField;
use crate::poly::Polynomial;
use crate::sig::LabeledPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("reduction step on a zero image")]
    ZeroImage,
}

/// Exact tallies of reduction steps and field multiplications, split by the
/// phase that performed them. All fields are monotonically non-decreasing
/// over a computation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    /// One-time regular 𝔰-reductions (top or tail).
    pub s_red_steps: u64,
    /// One-time usual (unrestricted) reductions.
    pub usual_red_steps: u64,
    /// Coefficient products performed while scaling 𝔰-reducers.
    pub s_red_mults: u64,
    /// Coefficient products from usual reduction and monic scaling.
    pub usual_red_mults: u64,
    /// Coefficient products from evaluating S-pairs.
    pub spair_mults: u64,
}

impl Counters {
    /// Total one-time reductions of both kinds.
    pub fn all_steps(&self) -> u64 {
        self.s_red_steps + self.usual_red_steps
    }

    /// Total counted field multiplications.
    pub fn field_mults(&self) -> u64 {
        self.s_red_mults + self.usual_red_mults + self.spair_mults
    }
}

/// Insertion-ordered working basis. Ids are strictly increasing and images
/// are nonzero; zero reductions never enter the basis.
#[derive(Debug, Clone, Default)]
pub struct Basis {
    elems: Vec<LabeledPoly>,
}

impl Basis {
    pub fn new() -> Basis {
        Basis::default()
    }

    pub fn push(&mut self, elem: LabeledPoly) {
        assert!(!elem.image.is_zero(), "zero image inserted into basis");
        if let Some(last) = self.elems.last() {
            assert!(last.id < elem.id, "basis ids must increase");
        }
        self.elems.push(elem);
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn get(&self, i: usize) -> &LabeledPoly {
        &self.elems[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, LabeledPoly> {
        self.elems.iter()
    }

    pub fn elems(&self) -> &[LabeledPoly] {
        &self.elems
    }

    pub fn images(&self) -> Vec<Polynomial> {
        self.elems.iter().map(|e| e.image.clone()).collect()
    }
}

/// Fires at most one eligible reduction at term index `ti` of `alpha`.
/// Returns true when a step fired.
fn reduce_at(
    g: &Basis,
    alpha: &mut LabeledPoly,
    ti: usize,
    field: &PrimeField,
    counters: &mut Counters,
) -> bool {
    let target = alpha.image.terms()[ti];
    for beta in g.iter() {
        let beta_lt = beta.image.leading_term().expect("basis images are nonzero");
        let Some(quot) = target.mono.checked_div(&beta_lt.mono) else {
            continue;
        };
        if !(beta.sig.mul_mono(&quot) < alpha.sig) {
            continue; // blocked: only strictly smaller signatures may reduce
        }
        #[cfg(debug_assertions)]
        let prefix: Vec<_> = alpha.image.terms()[..ti].to_vec();
        #[cfg(debug_assertions)]
        let sig_before = alpha.sig;

        let scale = field.mul(target.coeff, field.inv(beta_lt.coeff).unwrap());
        let multiple = beta
            .image
            .mul_term(scale, &quot, field, &mut counters.s_red_mults);
        alpha.image = alpha.image.sub(&multiple, field);
        counters.s_red_steps += 1;

        #[cfg(debug_assertions)]
        {
            assert_eq!(alpha.sig, sig_before, "regular reduction changed a signature");
            assert_eq!(
                &alpha.image.terms()[..ti],
                &prefix[..],
                "reduction step touched a larger monomial"
            );
            if let Some(t) = alpha.image.terms().get(ti) {
                assert!(t.mono < target.mono, "reduced monomial did not drop");
            }
        }
        return true;
    }
    false
}

/// One-time regular top 𝔰-reduction: eliminates the leading monomial by the
/// first eligible reducer, or leaves `alpha` unchanged.
pub fn top_reduce_step(
    g: &Basis,
    alpha: &mut LabeledPoly,
    field: &PrimeField,
    counters: &mut Counters,
) -> Result<bool, ReduceError> {
    if alpha.image.is_zero() {
        return Err(ReduceError::ZeroImage);
    }
    Ok(reduce_at(g, alpha, 0, field, counters))
}

/// One-time regular tail 𝔰-reduction: walks the tail monomials in
/// descending order and fires at the first eligible one. Monomials larger
/// than the reduced one are left untouched.
pub fn tail_reduce_step(
    g: &Basis,
    alpha: &mut LabeledPoly,
    field: &PrimeField,
    counters: &mut Counters,
) -> Result<bool, ReduceError> {
    if alpha.image.is_zero() {
        return Err(ReduceError::ZeroImage);
    }
    for ti in 1..alpha.image.len() {
        if reduce_at(g, alpha, ti, field, counters) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Top-reduces to fixpoint. The image may become zero (a zero reduction);
/// the signature never changes.
pub fn only_top_reduce(
    g: &Basis,
    alpha: &mut LabeledPoly,
    field: &PrimeField,
    counters: &mut Counters,
) {
    while !alpha.image.is_zero() && reduce_at(g, alpha, 0, field, counters) {}
}

/// Tail-reduces to fixpoint. Because a step at a monomial never changes the
/// larger monomials (and cannot create new eligibility above it), the scan
/// resumes at the reduced position instead of restarting from the top; the
/// result and the counter values are identical to iterating
/// [`tail_reduce_step`] until it stops firing.
fn tail_reduce_fixpoint(
    g: &Basis,
    alpha: &mut LabeledPoly,
    field: &PrimeField,
    counters: &mut Counters,
) {
    let mut ti = 1;
    while ti < alpha.image.len() {
        if !reduce_at(g, alpha, ti, field, counters) {
            ti += 1;
        }
    }
}

/// Top-reduces to fixpoint, then tail-reduces to fixpoint: the result is
/// completely regular full 𝔰-reduced.
pub fn full_reduce(
    g: &Basis,
    alpha: &mut LabeledPoly,
    field: &PrimeField,
    counters: &mut Counters,
) {
    only_top_reduce(g, alpha, field, counters);
    if alpha.image.is_zero() {
        return;
    }
    tail_reduce_fixpoint(g, alpha, field, counters);
}

/// The tail-work gate: true iff no basis lead divides the lead of `alpha`.
/// Expects `alpha` completely top-reduced with a nonzero image.
pub fn sf_condition(g: &Basis, alpha: &LabeledPoly) -> bool {
    let lm = alpha
        .image
        .leading_monomial()
        .expect("SF condition on a zero image");
    g.iter().all(|beta| {
        !beta
            .image
            .leading_monomial()
            .expect("basis images are nonzero")
            .divides(lm)
    })
}

/// Top-reduces to fixpoint, then tail-reduces only when the SF condition
/// holds; otherwise returns the top-reduced element untouched.
pub fn selective_full_reduce(
    g: &Basis,
    alpha: &mut LabeledPoly,
    field: &PrimeField,
    counters: &mut Counters,
) {
    only_top_reduce(g, alpha, field, counters);
    if alpha.image.is_zero() {
        return;
    }
    if sf_condition(g, alpha) {
        tail_reduce_fixpoint(g, alpha, field, counters);
    }
}

/// Exhaustive check that no eligible top reducer remains.
pub fn is_completely_top_reduced(g: &Basis, alpha: &LabeledPoly) -> bool {
    alpha.image.is_zero() || eligible_at(g, alpha, 0).is_none()
}

/// Exhaustive check that no eligible reducer remains at any monomial.
pub fn is_completely_full_reduced(g: &Basis, alpha: &LabeledPoly) -> bool {
    alpha.image.is_zero() || (0..alpha.image.len()).all(|ti| eligible_at(g, alpha, ti).is_none())
}

fn eligible_at(g: &Basis, alpha: &LabeledPoly, ti: usize) -> Option<usize> {
    let target = &alpha.image.terms()[ti];
    g.iter().position(|beta| {
        let lm = beta.image.leading_monomial().expect("nonzero image");
        match target.mono.checked_div(lm) {
            Some(quot) => beta.sig.mul_mono(&quot) < alpha.sig,
            None => false,
        }
    })
}
