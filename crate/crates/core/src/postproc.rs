//! Minimalization, interreduction to the reduced Gröbner basis, usual
//! (unrestricted) reduction, and an independent Buchberger oracle.
//!
//! The oracle deliberately shares only `poly` and `ffield` with the
//! signature engine so that it can catch reduction bugs there.

use std::time::Instant;

use thiserror::Error;

use crate::ffield::PrimeField;
use crate::poly::Polynomial;
use crate::reduce::Counters;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("empty generator list")]
    EmptyInput,
    #[error("zero polynomial among generators")]
    ZeroGenerator,
    #[error("oracle timed out")]
    Timeout,
}

/// A reduced Gröbner basis: monic elements, stored in descending order of
/// leading monomial, no monomial of any element divisible by another
/// element's lead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    polys: Vec<Polynomial>,
}

impl GroebnerBasis {
    fn new(mut polys: Vec<Polynomial>) -> GroebnerBasis {
        polys.sort_by(|a, b| {
            b.leading_monomial()
                .expect("reduced basis elements are nonzero")
                .cmp(a.leading_monomial().unwrap())
        });
        let gb = GroebnerBasis { polys };
        gb.debug_validate();
        gb
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Polynomial> {
        self.polys.iter()
    }

    fn debug_validate(&self) {
        #[cfg(debug_assertions)]
        {
            use crate::ffield::Coeff;
            for (i, p) in self.polys.iter().enumerate() {
                assert_eq!(p.leading_term().unwrap().coeff, Coeff::ONE, "not monic");
                for (j, q) in self.polys.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    let lq = q.leading_monomial().unwrap();
                    assert!(
                        p.terms().iter().all(|t| !lq.divides(&t.mono)),
                        "not in reduced form"
                    );
                }
            }
        }
    }
}

/// Indices of the elements that survive minimalization: drop every
/// polynomial whose lead is properly divisible by another lead, and keep
/// only the earliest of any group with equal leads.
pub fn minimalize_indices(polys: &[Polynomial]) -> Vec<usize> {
    let leads: Vec<_> = polys
        .iter()
        .map(|p| p.leading_monomial().expect("minimalize of a zero polynomial"))
        .collect();
    (0..polys.len())
        .filter(|&i| {
            !leads.iter().enumerate().any(|(j, lj)| {
                j != i && lj.divides(leads[i]) && (lj != &leads[i] || j < i)
            })
        })
        .collect()
}

/// The surviving polynomials themselves; leads of the output are pairwise
/// non-divisible and every input lead is divisible by some output lead.
pub fn minimalize(polys: &[Polynomial]) -> Vec<Polynomial> {
    minimalize_indices(polys)
        .into_iter()
        .map(|i| polys[i].clone())
        .collect()
}

/// Full normal form of `f` modulo `divisors`: repeatedly eliminates the
/// largest monomial divisible by some divisor lead (first divisor in
/// sequence order wins), until no monomial is reducible. Each single-term
/// elimination counts one usual reduction.
pub fn usual_reduce(
    f: &Polynomial,
    divisors: &[Polynomial],
    field: &PrimeField,
    counters: &mut Counters,
) -> Polynomial {
    let refs: Vec<&Polynomial> = divisors.iter().collect();
    usual_reduce_ref(f, &refs, field, counters)
}

pub(crate) fn usual_reduce_ref(
    f: &Polynomial,
    divisors: &[&Polynomial],
    field: &PrimeField,
    counters: &mut Counters,
) -> Polynomial {
    let mut out = f.clone();
    // monomials above the cursor are already in normal form: eliminating a
    // monomial only introduces strictly smaller ones
    let mut ti = 0;
    'scan: while ti < out.len() {
        let target = out.terms()[ti];
        for g in divisors {
            let glt = g.leading_term().expect("zero divisor polynomial");
            let Some(quot) = target.mono.checked_div(&glt.mono) else {
                continue;
            };
            let scale = field.mul(target.coeff, field.inv(glt.coeff).unwrap());
            let multiple = g.mul_term(scale, &quot, field, &mut counters.usual_red_mults);
            out = out.sub(&multiple, field);
            counters.usual_red_steps += 1;
            continue 'scan;
        }
        ti += 1;
    }
    out
}

/// Interreduces a minimal basis (pairwise non-divisible leads): each element
/// is replaced by its normal form against the current versions of all
/// others, then made monic.
pub fn interreduce(
    minimal: Vec<Polynomial>,
    field: &PrimeField,
    counters: &mut Counters,
) -> GroebnerBasis {
    let mut polys = minimal;
    // descending lead order, for deterministic counters
    polys.sort_by(|a, b| {
        b.leading_monomial()
            .expect("interreduce of a zero polynomial")
            .cmp(a.leading_monomial().unwrap())
    });
    for i in 0..polys.len() {
        let others: Vec<&Polynomial> = polys
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p)
            .collect();
        let nf = usual_reduce_ref(&polys[i], &others, field, counters);
        polys[i] = nf.monic(field, &mut counters.usual_red_mults);
    }
    GroebnerBasis::new(polys)
}

/// The S-polynomial with both halves scaled monic so the lcm terms cancel.
fn s_polynomial(
    f: &Polynomial,
    g: &Polynomial,
    field: &PrimeField,
    counters: &mut Counters,
) -> Polynomial {
    let fl = f.leading_term().unwrap();
    let gl = g.leading_term().unwrap();
    let lcm = fl.mono.lcm(&gl.mono);
    let a = f.mul_term(
        field.inv(fl.coeff).unwrap(),
        &lcm.checked_div(&fl.mono).unwrap(),
        field,
        &mut counters.usual_red_mults,
    );
    let b = g.mul_term(
        field.inv(gl.coeff).unwrap(),
        &lcm.checked_div(&gl.mono).unwrap(),
        field,
        &mut counters.usual_red_mults,
    );
    a.sub(&b, field)
}

/// Textbook Buchberger with the lcm-coprimality criterion and smallest-lcm
/// pair selection, followed by minimalization and interreduction. Its
/// operation counts are internal and discarded.
pub fn buchberger(
    gens: &[Polynomial],
    field: &PrimeField,
    deadline: Option<Instant>,
) -> Result<GroebnerBasis, OracleError> {
    if gens.is_empty() {
        return Err(OracleError::EmptyInput);
    }
    if gens.iter().any(|g| g.is_zero()) {
        return Err(OracleError::ZeroGenerator);
    }
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    let mut scratch = Counters::default();
    let mut basis: Vec<Polynomial> = gens.to_vec();
    // pair queue keyed by (lcm degree, i, j): smallest degree first
    let mut pairs: BinaryHeap<Reverse<(u32, usize, usize)>> = BinaryHeap::new();
    let mut queue_pairs_for =
        |basis: &[Polynomial], pairs: &mut BinaryHeap<Reverse<(u32, usize, usize)>>, j: usize| {
            for i in 0..j {
                let li = basis[i].leading_monomial().unwrap();
                let lj = basis[j].leading_monomial().unwrap();
                pairs.push(Reverse((li.lcm(lj).degree(), i, j)));
            }
        };
    for j in 0..basis.len() {
        queue_pairs_for(&basis, &mut pairs, j);
    }
    while let Some(Reverse((_, i, j))) = pairs.pop() {
        if let Some(d) = deadline {
            if Instant::now() >= d {
                return Err(OracleError::Timeout);
            }
        }
        let li = basis[i].leading_monomial().unwrap();
        let lj = basis[j].leading_monomial().unwrap();
        if li.is_coprime(lj) {
            continue; // S-polynomial of coprime leads reduces to zero
        }
        let s = s_polynomial(&basis[i], &basis[j], field, &mut scratch);
        let nf = usual_reduce(&s, &basis, field, &mut scratch);
        if !nf.is_zero() {
            basis.push(nf);
            queue_pairs_for(&basis, &mut pairs, basis.len() - 1);
        }
    }
    Ok(interreduce(minimalize(&basis), field, &mut scratch))
}

/// Buchberger's criterion as a verifier: true iff every S-polynomial of the
/// set reduces to zero modulo the set.
pub fn gb_check(polys: &[Polynomial], field: &PrimeField) -> bool {
    let mut scratch = Counters::default();
    for i in 0..polys.len() {
        for j in (i + 1)..polys.len() {
            let s = s_polynomial(&polys[i], &polys[j], field, &mut scratch);
            if !usual_reduce(&s, polys, field, &mut scratch).is_zero() {
                return false;
            }
        }
    }
    true
}
