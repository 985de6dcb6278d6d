//! Weyl-type subsets of `I^c` and their Poincaré polynomial.
//!
//! A subset `S ⊆ I^c` is of Weyl type when both `S` and `I^c − S` are
//! `I^c`-closed. Every such set has the form `N(w) ∩ I^c`; the image method
//! enumerates exactly those, while the direct method searches subsets of
//! `I^c` against the definition and serves as its oracle.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideals::{ideal_exponents, Ideal};
use crate::poly::{product_of_geometrics, IntPolynomial};
use crate::rootsys::{RootSet, RootSystem, WeylGroup};

/// Largest `|I^c|` accepted by the direct method.
pub const DIRECT_LIMIT: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// `{N(w) ∩ I^c : w ∈ W}`.
    Image,
    /// Backtracking search over subsets of `I^c` checking both closures.
    Direct,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeylTypeSet {
    pub members: RootSet,
}

impl WeylTypeSet {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// `S` is `R`-closed: `α, β ∈ S`, `α + β ∈ R` ⟹ `α + β ∈ S`.
pub fn is_closed_in(rs: &RootSystem, s: RootSet, r: RootSet) -> bool {
    s.iter().all(|a| s.iter().all(|b| rs.sum(a, b).is_none_or(|c| !r.contains(c) || s.contains(c))))
}

/// `S ⊆ R` with both `S` and `R − S` being `R`-closed.
pub fn is_weyl_type(rs: &RootSystem, s: RootSet, r: RootSet) -> bool {
    s.is_subset(r) && is_closed_in(rs, s, r) && is_closed_in(rs, r.difference(s), r)
}

/// Weyl-type subsets of an arbitrary `R ⊆ Φ⁺`, found by deciding roots of `R`
/// in increasing height. Every decomposition `γ = α + β` inside `R` has both
/// summands decided before `γ`, so the two closure conditions prune exactly.
pub fn weyl_type_subsets(rs: &RootSystem, r: RootSet) -> Result<Vec<RootSet>> {
    if r.len() > DIRECT_LIMIT {
        return Err(Error::ComplementTooLarge { size: r.len(), limit: DIRECT_LIMIT });
    }
    let order: Vec<usize> = r.iter().collect();
    let splits: Vec<Vec<(usize, usize)>> = order
        .iter()
        .map(|&c| {
            let mut v = Vec::new();
            for a in r.iter() {
                for b in r.iter() {
                    if a < b && rs.sum(a, b) == Some(c) {
                        v.push((a, b));
                    }
                }
            }
            v
        })
        .collect();

    fn walk(
        k: usize,
        s: RootSet,
        decided: RootSet,
        order: &[usize],
        splits: &[Vec<(usize, usize)>],
        out: &mut Vec<RootSet>,
    ) {
        if k == order.len() {
            out.push(s);
            return;
        }
        let c = order[k];
        let mut must_in = false;
        let mut must_out = false;
        for &(a, b) in &splits[k] {
            debug_assert!(decided.contains(a) && decided.contains(b));
            match (s.contains(a), s.contains(b)) {
                (true, true) => must_in = true,
                (false, false) => must_out = true,
                _ => {}
            }
        }
        let decided = decided.with(c);
        if !must_in {
            walk(k + 1, s, decided, order, splits, out);
        }
        if !must_out {
            walk(k + 1, s.with(c), decided, order, splits, out);
        }
    }

    let mut out = Vec::new();
    walk(0, RootSet::EMPTY, RootSet::EMPTY, &order, &splits, &mut out);
    out.sort_by_key(|s| (s.len(), *s));
    Ok(out)
}

fn sorted(mut sets: Vec<RootSet>) -> Vec<WeylTypeSet> {
    sets.sort_by_key(|s| (s.len(), *s));
    sets.into_iter().map(|members| WeylTypeSet { members }).collect()
}

/// `W^I` by the requested method, sorted by size then bitset.
pub fn weyl_type_sets(rs: &RootSystem, weyl: &WeylGroup, ideal: &Ideal, method: Method) -> Result<Vec<WeylTypeSet>> {
    match method {
        Method::Image => Ok(image_weyl_type_sets(weyl, ideal)),
        Method::Direct => direct_weyl_type_sets(rs, ideal),
    }
}

pub fn image_weyl_type_sets(weyl: &WeylGroup, ideal: &Ideal) -> Vec<WeylTypeSet> {
    let ic = ideal.complement();
    let seen: HashSet<RootSet> = weyl.elements().iter().map(|w| w.inversion_set().intersection(ic)).collect();
    sorted(seen.into_iter().collect())
}

pub fn direct_weyl_type_sets(rs: &RootSystem, ideal: &Ideal) -> Result<Vec<WeylTypeSet>> {
    Ok(sorted(weyl_type_subsets(rs, ideal.complement())?))
}

fn size_generating_function(sizes: impl Iterator<Item = usize>) -> IntPolynomial {
    let mut counts: Vec<u64> = Vec::new();
    for s in sizes {
        if counts.len() <= s {
            counts.resize(s + 1, 0);
        }
        counts[s] += 1;
    }
    IntPolynomial::from_counts(&counts)
}

/// `Σ_{S ∈ W^I} t^{|S|}` via the image method.
pub fn poincare_poly(weyl: &WeylGroup, ideal: &Ideal) -> IntPolynomial {
    size_generating_function(image_weyl_type_sets(weyl, ideal).iter().map(WeylTypeSet::size))
}

/// Outcome of comparing two polynomials that a theorem claims are equal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationReport {
    /// Root indices of the ideal.
    pub ideal: Vec<usize>,
    #[serde(rename = "lhs_coeffs")]
    pub lhs: IntPolynomial,
    #[serde(rename = "rhs_coeffs")]
    pub rhs: IntPolynomial,
    pub equal: bool,
    pub first_mismatch_degree: Option<usize>,
}

impl FactorizationReport {
    pub fn compare(ideal: &Ideal, lhs: IntPolynomial, rhs: IntPolynomial) -> Self {
        let first_mismatch_degree = lhs.first_difference(&rhs);
        Self {
            ideal: ideal.members().to_vec(),
            equal: first_mismatch_degree.is_none(),
            lhs,
            rhs,
            first_mismatch_degree,
        }
    }
}

/// Compares the Poincaré polynomial of `W^I` with `Π (1 + t + ... + t^{m_i})`.
pub fn check_factorization_thm1(rs: &RootSystem, weyl: &WeylGroup, ideal: &Ideal) -> FactorizationReport {
    let lhs = poincare_poly(weyl, ideal);
    let rhs = product_of_geometrics(&ideal_exponents(rs, ideal).exponents);
    FactorizationReport::compare(ideal, lhs, rhs)
}

/// `w⁻¹(−Π) ∩ Φ⁺ ⊆ I^c`.
pub fn satisfies_min_condition(rs: &RootSystem, weyl: &WeylGroup, w: usize, ideal: &Ideal) -> bool {
    weyl.get(w).descent_preimages(rs.rank()).is_subset(ideal.complement())
}

/// Positions of `W_min`, the elements satisfying [`satisfies_min_condition`].
pub fn w_min(rs: &RootSystem, weyl: &WeylGroup, ideal: &Ideal) -> Vec<usize> {
    (0..weyl.len()).filter(|&w| satisfies_min_condition(rs, weyl, w, ideal)).collect()
}

/// `Σ_{w ∈ W_min} t^{|N(w) ∩ I^c|}`: the cell-dimension generating function
/// of the regular nilpotent Hessenberg variety of `I` (combinatorial only).
pub fn w_min_poincare(rs: &RootSystem, weyl: &WeylGroup, ideal: &Ideal) -> IntPolynomial {
    let ic = ideal.complement();
    size_generating_function(
        w_min(rs, weyl, ideal).into_iter().map(|w| weyl.get(w).inversion_set().intersection(ic).len()),
    )
}

/// The unique `w ∈ W_min` with `N(w) ∩ I^c = S`.
pub fn minimal_representative(rs: &RootSystem, weyl: &WeylGroup, ideal: &Ideal, s: RootSet) -> Result<usize> {
    let ic = ideal.complement();
    if !is_weyl_type(rs, s, ic) {
        return Err(Error::NotWeylType(format!("{s:?} in complement {ic:?}")));
    }
    (0..weyl.len())
        .find(|&w| weyl.get(w).inversion_set().intersection(ic) == s && satisfies_min_condition(rs, weyl, w, ideal))
        .ok_or_else(|| Error::NotWeylType(format!("{s:?} has no representative")))
}

/// Smallest `T ∈ W^{I'}` with `T ∩ I^c = S`, for ideals `I' ⊆ I`.
///
/// Grows `I^c` one root at a time (lowest height first, so every intermediate
/// set is the complement of an ideal) and adds the new root `δ` to `T` exactly
/// when `T` alone stops being of Weyl type.
pub fn minimal_lift(rs: &RootSystem, smaller: &Ideal, larger: &Ideal, s: RootSet) -> Result<RootSet> {
    if !smaller.members().is_subset(larger.members()) {
        return Err(Error::InvalidIdeal("lift needs I' ⊆ I".into()));
    }
    let mut r = larger.complement();
    if !is_weyl_type(rs, s, r) {
        return Err(Error::NotWeylType(format!("{s:?}")));
    }
    let mut t = s;
    // indices are sorted by height
    for delta in larger.members().difference(smaller.members()).iter() {
        r = r.with(delta);
        if !is_weyl_type(rs, t, r) {
            t = t.with(delta);
            debug_assert!(is_weyl_type(rs, t, r));
        }
    }
    Ok(t)
}

/// `{x ∈ W : N(x) ⊆ Φ¹}` where `Φ¹` is Φ⁺ minus the positive roots of the
/// parabolic subsystem on the given simple roots.
pub fn coset_reps(rs: &RootSystem, weyl: &WeylGroup, parabolic: &[usize]) -> Vec<usize> {
    let phi1 = rs.all_positive().difference(rs.parabolic_roots(parabolic));
    (0..weyl.len()).filter(|&x| weyl.get(x).inversion_set().is_subset(phi1)).collect()
}
