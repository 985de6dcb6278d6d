//! Ideal-type hyperplane arrangements `{H_α : α ∈ I^c}` in the coroot space.
//!
//! Characteristic polynomials come from either the intersection lattice
//! (exact integer elimination, Möbius recursion) or point counts over finite
//! fields followed by interpolation. Freeness is certified inductively by an
//! Addition–Deletion search.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideals::{ideal_exponents, Ideal};
use crate::par::Exec;
use crate::poly::{interpolate_integers, product_of_linear_roots, IntPolynomial};
use crate::rootsys::{RootSet, RootSystem, WeylGroup};
use crate::weylcomb::FactorizationReport;

/// Most hyperplanes the lattice method accepts (flats are `u64` label sets).
pub const LATTICE_LIMIT: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Flats the lattice method may create.
    pub max_flats: u64,
    /// `Σ_q q^{n−1} · |A|` for the finite-field method.
    pub field_work: u64,
    /// Arrangements the certificate search may expand.
    pub certificate_nodes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_flats: 2_000_000, field_work: 4_000_000_000, certificate_nodes: 200_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChiMethod {
    Lattice,
    FiniteField,
}

/// Where a hyperplane came from; also drives the deletion order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Label {
    pub root: usize,
    /// Index of the first simple root in the support.
    pub first_support: usize,
    pub height: u32,
}

impl Label {
    fn of_root(rs: &RootSystem, j: usize) -> Self {
        let r = rs.root(j);
        Self { root: j, first_support: r.coords.iter().position(|&c| c != 0).unwrap_or(0), height: r.height }
    }
}

/// A central arrangement given by integer normals on `Q^dim`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrangement {
    dim: usize,
    normals: Vec<Vec<i64>>,
    labels: Vec<Label>,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Primitive representative with a positive first nonzero entry.
fn normalize(v: &mut [i64]) {
    let g = v.iter().fold(0, |g, &x| gcd(g, x));
    if g == 0 {
        return;
    }
    let sign = if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) { -1 } else { 1 };
    for x in v.iter_mut() {
        *x = *x / g * sign;
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Intersects the span of `basis` with the hyperplane `a⊥`; `a` must not
/// vanish on the span.
fn cut(basis: &[Vec<i64>], a: &[i64]) -> Vec<Vec<i64>> {
    let vals: Vec<i64> = basis.iter().map(|x| dot(x, a)).collect();
    let p = (0..vals.len())
        .filter(|&i| vals[i] != 0)
        .min_by_key(|&i| vals[i].abs())
        .expect("hyperplane vanishes on the subspace");
    (0..basis.len())
        .filter(|&i| i != p)
        .map(|i| {
            let mut v: Vec<i64> = basis[i].iter().zip(&basis[p]).map(|(xi, xp)| vals[p] * xi - vals[i] * xp).collect();
            normalize(&mut v);
            v
        })
        .collect()
}

impl Arrangement {
    pub fn new(dim: usize, normals: Vec<Vec<i64>>, labels: Vec<Label>) -> Result<Self> {
        if normals.len() != labels.len() {
            return Err(Error::InvalidArrangement("one label per hyperplane required".into()));
        }
        let mut seen = HashSet::new();
        for (v, l) in normals.iter().zip(&labels) {
            if v.len() != dim {
                return Err(Error::InvalidArrangement(format!("normal of root {} has wrong length", l.root)));
            }
            if v.iter().all(|&x| x == 0) {
                return Err(Error::InvalidArrangement(format!("normal of root {} is zero", l.root)));
            }
            let mut n = v.clone();
            normalize(&mut n);
            if !seen.insert(n) {
                return Err(Error::InvalidArrangement(format!("normal of root {} repeats a hyperplane", l.root)));
            }
        }
        Ok(Self { dim, normals, labels })
    }

    /// Arrangement with positional labels.
    pub fn from_normals(dim: usize, normals: Vec<Vec<i64>>) -> Result<Self> {
        let labels = (0..normals.len()).map(|root| Label { root, first_support: 0, height: 0 }).collect();
        Self::new(dim, normals, labels)
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, normals: Vec::new(), labels: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    pub fn normals(&self) -> &[Vec<i64>] {
        &self.normals
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// `A′ = A − {H_h}`.
    pub fn delete(&self, h: usize) -> Self {
        let mut out = self.clone();
        out.normals.remove(h);
        out.labels.remove(h);
        out
    }

    /// `A″ = A^{H_h}`, written in the integer basis `a_p e_j − a_j e_p` of
    /// `H_h`. Hyperplanes that coincide on `H_h` merge; the merged one keeps
    /// the label deepest in the subsystem order.
    pub fn restrict(&self, h: usize) -> Self {
        let a = &self.normals[h];
        let p = (0..self.dim).filter(|&i| a[i] != 0).min_by_key(|&i| a[i].abs()).expect("nonzero normal");
        let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
        let mut out = Self::empty(self.dim - 1);
        for (g, c) in self.normals.iter().enumerate() {
            if g == h {
                continue;
            }
            let mut v: Vec<i64> = (0..self.dim).filter(|&j| j != p).map(|j| a[p] * c[j] - a[j] * c[p]).collect();
            normalize(&mut v);
            let label = self.labels[g];
            match index.get(&v) {
                Some(&k) => {
                    let old = out.labels[k];
                    let better = (label.first_support, label.height, std::cmp::Reverse(label.root))
                        > (old.first_support, old.height, std::cmp::Reverse(old.root));
                    if better {
                        out.labels[k] = label;
                    }
                }
                None => {
                    index.insert(v.clone(), out.normals.len());
                    out.normals.push(v);
                    out.labels.push(label);
                }
            }
        }
        out
    }

    /// Hyperplane positions in deletion order: first the highest root among
    /// those with the smallest first support, then the rest by decreasing
    /// height.
    pub fn deletion_order(&self) -> Vec<usize> {
        let Some(first) = (0..self.len()).min_by_key(|&i| {
            let l = self.labels[i];
            (l.first_support, std::cmp::Reverse(l.height), l.root)
        }) else {
            return Vec::new();
        };
        let mut rest: Vec<usize> = (0..self.len()).filter(|&i| i != first).collect();
        rest.sort_by_key(|&i| (std::cmp::Reverse(self.labels[i].height), self.labels[i].root));
        std::iter::once(first).chain(rest).collect()
    }

    /// Label-free key identifying the arrangement up to its normal list.
    fn canonical_key(&self) -> CanonicalKey {
        let mut ns: Vec<Vec<i64>> = self
            .normals
            .iter()
            .map(|v| {
                let mut v = v.clone();
                normalize(&mut v);
                v
            })
            .collect();
        ns.sort();
        (self.dim, ns)
    }

    fn max_abs_coordinate(&self) -> i64 {
        self.normals.iter().flatten().map(|x| x.abs()).max().unwrap_or(1).max(1)
    }
}

/// `A_I`: one hyperplane `⟨α, v⟩ = 0` per root of `I^c`.
pub fn build_ideal_arrangement(rs: &RootSystem, ideal: &Ideal) -> Arrangement {
    build_root_arrangement(rs, ideal.complement())
}

/// Arrangement of the hyperplanes of the given positive roots.
pub fn build_root_arrangement(rs: &RootSystem, roots: RootSet) -> Arrangement {
    let normals = roots.iter().map(|j| rs.coroot_covector(j)).collect();
    let labels = roots.iter().map(|j| Label::of_root(rs, j)).collect();
    Arrangement::new(rs.rank(), normals, labels).expect("distinct positive roots give distinct hyperplanes")
}

/// A flat, identified by every hyperplane containing it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flat {
    pub hyperplanes: u64,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionLattice {
    /// Ordered by codimension; `flats[0]` is the whole space.
    pub flats: Vec<Flat>,
    pub mobius: Vec<i64>,
}

impl IntersectionLattice {
    pub fn char_poly(&self) -> IntPolynomial {
        let top = self.flats.first().map_or(0, |f| f.dim);
        let mut coeffs = vec![BigInt::from(0); top + 1];
        for (f, &m) in self.flats.iter().zip(&self.mobius) {
            coeffs[f.dim] += m;
        }
        IntPolynomial::from_coeffs(coeffs)
    }
}

pub fn intersection_lattice(arr: &Arrangement, max_flats: u64) -> Result<IntersectionLattice> {
    let m = arr.len();
    if m > LATTICE_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "lattice hyperplane count",
            needed: m as u64,
            budget: LATTICE_LIMIT as u64,
        });
    }
    let identity: Vec<Vec<i64>> = (0..arr.dim).map(|i| (0..arr.dim).map(|j| i64::from(i == j)).collect()).collect();
    let mut flats = vec![Flat { hyperplanes: 0, dim: arr.dim }];
    let mut seen: HashSet<u64> = HashSet::from([0]);
    let mut level: Vec<(u64, Vec<Vec<i64>>)> = vec![(0, identity)];
    while !level.is_empty() {
        let mut next = Vec::new();
        for (mask, basis) in &level {
            let mut covered = *mask;
            for h in 0..m {
                if covered >> h & 1 == 1 {
                    continue;
                }
                let sub = cut(basis, &arr.normals[h]);
                let closure = (0..m).fold(*mask, |acc, g| {
                    if sub.iter().all(|x| dot(x, &arr.normals[g]) == 0) {
                        acc | 1 << g
                    } else {
                        acc
                    }
                });
                covered |= closure;
                if seen.insert(closure) {
                    flats.push(Flat { hyperplanes: closure, dim: sub.len() });
                    if flats.len() as u64 > max_flats {
                        return Err(Error::BudgetExceeded {
                            what: "intersection lattice flats",
                            needed: flats.len() as u64,
                            budget: max_flats,
                        });
                    }
                    next.push((closure, sub));
                }
            }
        }
        level = next;
    }
    let mut mobius = vec![0i64; flats.len()];
    mobius[0] = 1;
    for x in 1..flats.len() {
        let fx = flats[x];
        mobius[x] = -(0..x)
            .filter(|&z| flats[z].dim > fx.dim && flats[z].hyperplanes & !fx.hyperplanes == 0)
            .map(|z| mobius[z])
            .sum::<i64>();
    }
    Ok(IntersectionLattice { flats, mobius })
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

fn pow_mod(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut r = 1;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % q;
        }
        b = b * b % q;
        e >>= 1;
    }
    r
}

/// `#{v ∈ F_q^n : ⟨a, v⟩ ≠ 0 for every normal a}`.
fn count_complement(arr: &Arrangement, q: u64) -> u64 {
    let n = arr.dim;
    if n == 0 {
        return 1;
    }
    let red = |x: i64| x.rem_euclid(q as i64) as u64;
    let rows: Vec<Vec<u64>> = arr.normals.iter().map(|v| v.iter().map(|&x| red(x)).collect()).collect();
    // hyperplanes not involving the last coordinate kill whole prefixes
    let (free, pinned): (Vec<usize>, Vec<usize>) = (0..rows.len()).partition(|&h| rows[h][n - 1] == 0);
    let neg_inv: Vec<u64> = pinned.iter().map(|&h| (q - pow_mod(rows[h][n - 1], q - 2, q)) % q).collect();
    let mut sums = vec![0u64; rows.len()];
    let mut digits = vec![0u64; n - 1];
    let mut stamp = vec![0u64; q as usize];
    let mut tick = 0u64;
    let mut total = 0u64;
    loop {
        if free.iter().all(|&h| sums[h] != 0) {
            tick += 1;
            let mut forbidden = 0;
            for (k, &h) in pinned.iter().enumerate() {
                let x = sums[h] * neg_inv[k] % q;
                if stamp[x as usize] != tick {
                    stamp[x as usize] = tick;
                    forbidden += 1;
                }
            }
            total += q - forbidden;
        }
        // odometer step: every digit that changes moves by +1 mod q
        let mut i = 0;
        loop {
            if i == n - 1 {
                return total;
            }
            for (h, row) in rows.iter().enumerate() {
                sums[h] = (sums[h] + row[i]) % q;
            }
            digits[i] += 1;
            if digits[i] < q {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Primes used by the finite-field method: `dim + 1` primes above
/// `dim² · max|a_i|`.
pub fn good_primes(arr: &Arrangement) -> Vec<u64> {
    let n = arr.dim as u64;
    let bound = (n * n * arr.max_abs_coordinate() as u64).max(2);
    (bound + 1..).filter(|&q| is_prime(q)).take(arr.dim + 1).collect()
}

pub fn finite_field_work(arr: &Arrangement) -> u64 {
    let e = arr.dim.saturating_sub(1) as u32;
    good_primes(arr)
        .iter()
        .map(|&q| q.saturating_pow(e).saturating_mul(arr.len().max(1) as u64))
        .fold(0u64, u64::saturating_add)
}

/// `χ(A, t)` by the chosen method.
pub fn char_poly(arr: &Arrangement, method: ChiMethod, budget: &Budget) -> Result<IntPolynomial> {
    match method {
        ChiMethod::Lattice => Ok(intersection_lattice(arr, budget.max_flats)?.char_poly()),
        ChiMethod::FiniteField => {
            let work = finite_field_work(arr);
            if work > budget.field_work {
                return Err(Error::BudgetExceeded {
                    what: "finite-field point count",
                    needed: work,
                    budget: budget.field_work,
                });
            }
            let primes = good_primes(arr);
            let counts = Exec::default().map(&primes, |&q| (q as i64, BigInt::from(count_complement(arr, q))));
            Ok(interpolate_integers(&counts)?)
        }
    }
}

/// `t^{n−k} · Π (t − m_i)` for the ideal's exponents.
pub fn thm2_expected(rs: &RootSystem, ideal: &Ideal) -> IntPolynomial {
    let exps = ideal_exponents(rs, ideal).exponents;
    let mut roots: Vec<i64> = vec![0; rs.rank() - exps.len()];
    roots.extend(exps.iter().map(|&m| m as i64));
    product_of_linear_roots(&roots)
}

/// Compares `χ(A_I, t)` (lattice method, default budget) with the predicted
/// product.
pub fn verify_thm2(rs: &RootSystem, ideal: &Ideal) -> Result<FactorizationReport> {
    verify_thm2_with(rs, ideal, ChiMethod::Lattice, &Budget::default())
}

pub fn verify_thm2_with(
    rs: &RootSystem,
    ideal: &Ideal,
    method: ChiMethod,
    budget: &Budget,
) -> Result<FactorizationReport> {
    let chi = char_poly(&build_ideal_arrangement(rs, ideal), method, budget)?;
    Ok(FactorizationReport::compare(ideal, chi, thm2_expected(rs, ideal)))
}

/// One Addition–Deletion step: `A″` free with `B`, `A′` free with
/// `B ∪ {b − 1}`, hence `A` free with `B ∪ {b}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditionStep {
    /// Label of the hyperplane `H₀`.
    pub hyperplane: Label,
    pub deletion: Arc<FreenessCertificate>,
    pub restriction: Arc<FreenessCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreenessCertificate {
    pub dim: usize,
    pub hyperplanes: usize,
    /// Sorted exponent multiset, zeros included.
    pub exponents: Vec<usize>,
    /// `None` at the leaves (empty arrangements).
    pub step: Option<AdditionStep>,
}

impl FreenessCertificate {
    fn leaf(dim: usize) -> Self {
        Self { dim, hyperplanes: 0, exponents: vec![0; dim], step: None }
    }

    pub fn depth(&self) -> usize {
        match &self.step {
            None => 0,
            Some(s) => 1 + s.deletion.depth().max(s.restriction.depth()),
        }
    }

    pub fn nonzero_exponents(&self) -> Vec<usize> {
        self.exponents.iter().copied().filter(|&e| e > 0).collect()
    }

    /// Whether `Π (t − b_i)` is the given characteristic polynomial.
    pub fn matches(&self, chi: &IntPolynomial) -> bool {
        let roots: Vec<i64> = self.exponents.iter().map(|&e| e as i64).collect();
        product_of_linear_roots(&roots) == *chi
    }

    /// Re-checks the exponent bookkeeping at every node.
    pub fn is_consistent(&self) -> bool {
        if self.exponents.len() != self.dim || self.exponents.iter().sum::<usize>() != self.hyperplanes {
            return false;
        }
        match &self.step {
            None => self.hyperplanes == 0,
            Some(s) => {
                s.deletion.hyperplanes + 1 == self.hyperplanes
                    && s.restriction.dim + 1 == self.dim
                    && addition(&s.deletion.exponents, &s.restriction.exponents).as_ref() == Some(&self.exponents)
                    && s.deletion.is_consistent()
                    && s.restriction.is_consistent()
            }
        }
    }
}

/// Exponents of `A` from those of `A′` and `A″`, when the Addition theorem
/// applies.
fn addition(deleted: &[usize], restricted: &[usize]) -> Option<Vec<usize>> {
    if deleted.len() != restricted.len() + 1 {
        return None;
    }
    let mut rest: Vec<usize> = deleted.to_vec();
    for e in restricted {
        let pos = rest.iter().position(|x| x == e)?;
        rest.remove(pos);
    }
    let mut out = restricted.to_vec();
    out.push(rest[0] + 1);
    out.sort_unstable();
    Some(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Freeness {
    Found(Arc<FreenessCertificate>),
    /// No inductive chain within the search; not a proof of non-freeness.
    NotFound,
}

type CanonicalKey = (usize, Vec<Vec<i64>>);

struct Search {
    memo: HashMap<CanonicalKey, Option<Arc<FreenessCertificate>>>,
    expanded: u64,
    budget: u64,
}

impl Search {
    fn certify(&mut self, arr: &Arrangement) -> Result<Option<Arc<FreenessCertificate>>> {
        if arr.is_empty() {
            return Ok(Some(Arc::new(FreenessCertificate::leaf(arr.dim))));
        }
        let key = arr.canonical_key();
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        self.expanded += 1;
        if self.expanded > self.budget {
            return Err(Error::BudgetExceeded {
                what: "freeness certificate search",
                needed: self.expanded,
                budget: self.budget,
            });
        }
        let mut found = None;
        for h in arr.deletion_order() {
            let Some(restriction) = self.certify(&arr.restrict(h))? else {
                continue;
            };
            let Some(deletion) = self.certify(&arr.delete(h))? else {
                continue;
            };
            if let Some(exponents) = addition(&deletion.exponents, &restriction.exponents) {
                found = Some(Arc::new(FreenessCertificate {
                    dim: arr.dim,
                    hyperplanes: arr.len(),
                    exponents,
                    step: Some(AdditionStep { hyperplane: arr.labels[h], deletion, restriction }),
                }));
                break;
            }
        }
        self.memo.insert(key, found.clone());
        Ok(found)
    }
}

/// Searches for an inductive-freeness chain; `budget` bounds the number of
/// distinct arrangements expanded.
pub fn freeness_certificate(arr: &Arrangement, budget: u64) -> Result<Freeness> {
    let mut s = Search { memo: HashMap::new(), expanded: 0, budget };
    Ok(match s.certify(arr)? {
        Some(c) => Freeness::Found(c),
        None => Freeness::NotFound,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateStatus {
    Found,
    NotFound,
    Budget,
}

impl CertificateStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Found => "found",
            Self::NotFound => "not_found",
            Self::Budget => "budget",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementReport {
    pub chi_coeffs: IntPolynomial,
    pub expected_coeffs: IntPolynomial,
    pub thm2_equal: bool,
    pub free_certificate: CertificateStatus,
    pub certificate_depth: usize,
}

/// `χ` (lattice method), the predicted product, and a certificate attempt.
/// A certificate whose exponents disagree with `χ` is reported as not found.
pub fn arrangement_report(rs: &RootSystem, ideal: &Ideal, budget: &Budget) -> Result<ArrangementReport> {
    let arr = build_ideal_arrangement(rs, ideal);
    let chi = char_poly(&arr, ChiMethod::Lattice, budget)?;
    let expected = thm2_expected(rs, ideal);
    let (status, depth) = match freeness_certificate(&arr, budget.certificate_nodes) {
        Ok(Freeness::Found(c)) if c.matches(&chi) => (CertificateStatus::Found, c.depth()),
        Ok(Freeness::Found(_)) => {
            log::error!("certificate exponents disagree with the characteristic polynomial");
            (CertificateStatus::NotFound, 0)
        }
        Ok(Freeness::NotFound) => (CertificateStatus::NotFound, 0),
        Err(Error::BudgetExceeded { .. }) => (CertificateStatus::Budget, 0),
        Err(e) => return Err(e),
    };
    Ok(ArrangementReport {
        thm2_equal: chi == expected,
        chi_coeffs: chi,
        expected_coeffs: expected,
        free_certificate: status,
        certificate_depth: depth,
    })
}

/// Regions of `A_I` as sign patterns: `N(w⁻¹) ∩ I^c` is the set of
/// hyperplanes separating the chamber `wC` from the dominant chamber.
pub fn regions(weyl: &WeylGroup, ideal: &Ideal) -> Vec<RootSet> {
    let ic = ideal.complement();
    let mut seen: Vec<RootSet> = (0..weyl.len())
        .map(|w| weyl.get(weyl.inverse(w)).inversion_set().intersection(ic))
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    seen.sort();
    seen
}

/// `Σ_B t^{l(B)}` over regions, `l(B)` counting hyperplanes separating `B`
/// from the region of the dominant chamber.
pub fn chamber_poly(weyl: &WeylGroup, ideal: &Ideal) -> IntPolynomial {
    let mut counts = vec![0u64; ideal.complement().len() + 1];
    for r in regions(weyl, ideal) {
        counts[r.len()] += 1;
    }
    IntPolynomial::from_counts(&counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::enumerate_ideals;
    use crate::rootsys::{build_root_system, enumerate_weyl};
    use crate::weylcomb::poincare_poly;
    use num_rational::BigRational;
    use num_traits::{Signed, Zero};

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn budget() -> Budget {
        Budget::default()
    }

    /// Rank over Q by plain rational elimination.
    fn rational_rank(rows: &[Vec<i64>]) -> usize {
        let mut m: Vec<Vec<BigRational>> =
            rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
        let cols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
                continue;
            };
            m.swap(rank, piv);
            for r in 0..m.len() {
                if r != rank && !m[r][c].is_zero() {
                    let f = &m[r][c] / &m[rank][c];
                    let pivot_row = m[rank].clone();
                    for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                        *x -= &f * y;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// χ(t) = Σ_{B ⊆ A} (−1)^{|B|} t^{n − rank B}.
    fn whitney(arr: &Arrangement) -> IntPolynomial {
        let m = arr.len();
        let mut coeffs = vec![BigInt::from(0); arr.dim() + 1];
        for mask in 0u32..1 << m {
            let rows: Vec<Vec<i64>> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| arr.normals()[i].clone()).collect();
            let sign = if rows.len().is_multiple_of(2) { 1 } else { -1 };
            coeffs[arr.dim() - rational_rank(&rows)] += sign;
        }
        IntPolynomial::from_coeffs(coeffs)
    }

    fn types(max_rank: usize) -> Vec<(char, usize)> {
        let mut out = Vec::new();
        for n in 1..=max_rank {
            out.push(('A', n));
            if n >= 2 {
                out.push(('B', n));
            }
            if n >= 3 {
                out.push(('C', n));
            }
            if n >= 4 {
                out.push(('D', n));
            }
        }
        out.push(('G', 2));
        if max_rank >= 4 {
            out.push(('F', 4));
        }
        out
    }

    fn both(arr: &Arrangement) -> (IntPolynomial, IntPolynomial) {
        (
            char_poly(arr, ChiMethod::Lattice, &budget()).unwrap(),
            char_poly(arr, ChiMethod::FiniteField, &budget()).unwrap(),
        )
    }

    #[test]
    fn build_examples() {
        let a2 = build_root_system('A', 2).unwrap();
        assert!(build_ideal_arrangement(&a2, &Ideal::full(&a2)).is_empty());
        let arr = build_ideal_arrangement(&a2, &Ideal::empty(&a2));
        assert_eq!((arr.dim(), arr.len()), (2, 3));
        assert_eq!(arr.normals(), &[vec![2, -1], vec![-1, 2], vec![1, 1]]);
        let b2 = build_root_system('B', 2).unwrap();
        assert_eq!(build_ideal_arrangement(&b2, &Ideal::empty(&b2)).len(), 4);
        assert!(Arrangement::from_normals(2, vec![vec![1, 2], vec![-2, -4]]).is_err());
        assert!(Arrangement::from_normals(2, vec![vec![0, 0]]).is_err());
    }

    #[test]
    fn char_poly_examples() {
        let rs = build_root_system('A', 2).unwrap();
        let cases = [
            (Ideal::empty(&rs), p(&[2, -3, 1])),
            (Ideal::theta(&rs), p(&[1, -2, 1])),
            (Ideal::upper_closure(&rs, &[1]).unwrap(), p(&[0, -1, 1])),
            (Ideal::full(&rs), p(&[0, 0, 1])),
        ];
        for (ideal, want) in cases {
            let (l, f) = both(&build_ideal_arrangement(&rs, &ideal));
            assert_eq!(l, want);
            assert_eq!(f, want);
        }
        for n in 0..4 {
            let (l, f) = both(&Arrangement::empty(n));
            assert_eq!(l, IntPolynomial::monomial(n));
            assert_eq!(f, IntPolynomial::monomial(n));
        }
    }

    #[test]
    fn lattice_of_a2() {
        let rs = build_root_system('A', 2).unwrap();
        let lat = intersection_lattice(&build_ideal_arrangement(&rs, &Ideal::empty(&rs)), 100).unwrap();
        assert_eq!(lat.flats.len(), 5);
        assert_eq!(lat.mobius, vec![1, -1, -1, -1, 2]);
        assert_eq!(lat.flats[4], Flat { hyperplanes: 0b111, dim: 0 });
    }

    #[test]
    fn whitney_oracle_agrees() {
        for (l, n) in types(4) {
            let rs = build_root_system(l, n).unwrap();
            for ideal in enumerate_ideals(&rs) {
                let arr = build_ideal_arrangement(&rs, &ideal);
                if arr.len() > 12 {
                    continue;
                }
                let w = whitney(&arr);
                assert_eq!(char_poly(&arr, ChiMethod::Lattice, &budget()).unwrap(), w, "{l}{n}");
                assert_eq!(char_poly(&arr, ChiMethod::FiniteField, &budget()).unwrap(), w, "{l}{n}");
            }
        }
    }

    #[test]
    fn methods_agree_up_to_rank_four() {
        for (l, n) in types(4) {
            let rs = build_root_system(l, n).unwrap();
            for ideal in enumerate_ideals(&rs) {
                let arr = build_ideal_arrangement(&rs, &ideal);
                let (a, b) = both(&arr);
                assert_eq!(a, b, "{l}{n} {:?}", ideal.members());
                assert!(a.is_monic() && a.degree() == Some(n));
                if !arr.is_empty() {
                    assert!(a.exact_divide(&p(&[-1, 1])).is_ok());
                }
            }
        }
    }

    #[test]
    fn deletion_restriction_identity() {
        for (l, n) in [('A', 3), ('B', 3), ('C', 3), ('G', 2), ('D', 4)] {
            let rs = build_root_system(l, n).unwrap();
            for ideal in enumerate_ideals(&rs) {
                let arr = build_ideal_arrangement(&rs, &ideal);
                let chi = char_poly(&arr, ChiMethod::Lattice, &budget()).unwrap();
                for h in 0..arr.len() {
                    let del = arr.delete(h);
                    let res = arr.restrict(h);
                    assert_eq!(del.len() + 1, arr.len());
                    assert_eq!(res.dim() + 1, arr.dim());
                    let cd = char_poly(&del, ChiMethod::Lattice, &budget()).unwrap();
                    let cr = char_poly(&res, ChiMethod::Lattice, &budget()).unwrap();
                    assert_eq!(chi, &cd - &cr);
                }
            }
        }
    }

    /// Restricting to the highest root of `I^c ∩ Φ¹` gives the ideal
    /// arrangement of `I ∩ Φ_{n−1}` in the subsystem on `α_2..α_n`.
    #[test]
    fn restriction_matches_subsystem_arrangement() {
        for l in ['A', 'B', 'C'] {
            for n in 3..=5 {
                let rs = build_root_system(l, n).unwrap();
                let phi1 = rs.phi1();
                for ideal in enumerate_ideals(&rs) {
                    let ic = ideal.complement();
                    let Some(delta) = ic.intersection(phi1).iter().max_by_key(|&j| rs.root(j).height) else {
                        continue;
                    };
                    let arr = build_ideal_arrangement(&rs, &ideal);
                    let h = arr.labels().iter().position(|lb| lb.root == delta).unwrap();
                    let res = arr.restrict(h);
                    let sub_normals: Vec<Vec<i64>> =
                        ic.difference(phi1).iter().map(|j| rs.coroot_covector(j)[1..].to_vec()).collect();
                    let sub = Arrangement::from_normals(n - 1, sub_normals).unwrap();
                    let lr = intersection_lattice(&res, 1 << 20).unwrap();
                    let ls = intersection_lattice(&sub, 1 << 20).unwrap();
                    assert_eq!(lr.flats.len(), ls.flats.len(), "{l}{n}");
                    assert_eq!(lr.char_poly(), ls.char_poly(), "{l}{n}");
                    // the surviving labels are the subsystem roots
                    assert!(res.labels().iter().all(|lb| !phi1.contains(lb.root)));
                }
            }
        }
    }

    #[test]
    fn theta_base_case() {
        for (l, n) in types(4) {
            let rs = build_root_system(l, n).unwrap();
            let mut m = ideal_exponents(&rs, &Ideal::empty(&rs)).exponents;
            *m.last_mut().unwrap() -= 1;
            let want = product_of_linear_roots(&m.iter().map(|&x| x as i64).collect::<Vec<_>>());
            let arr = build_ideal_arrangement(&rs, &Ideal::theta(&rs));
            assert_eq!(char_poly(&arr, ChiMethod::Lattice, &budget()).unwrap(), want, "{l}{n}");
        }
    }

    #[test]
    fn thm2_examples() {
        let rs = build_root_system('A', 2).unwrap();
        let r = verify_thm2(&rs, &Ideal::theta(&rs)).unwrap();
        assert!(r.equal);
        assert_eq!(r.lhs, p(&[1, -2, 1]));
        let r = verify_thm2(&rs, &Ideal::upper_closure(&rs, &[1]).unwrap()).unwrap();
        assert!(r.equal);
        assert_eq!(r.rhs, p(&[0, -1, 1]));
        for (l, n) in [('A', 2), ('B', 3), ('G', 2)] {
            let rs = build_root_system(l, n).unwrap();
            let r = verify_thm2(&rs, &Ideal::full(&rs)).unwrap();
            assert!(r.equal);
            assert_eq!(r.lhs, IntPolynomial::monomial(n));
        }
    }

    #[test]
    fn certificate_examples() {
        match freeness_certificate(&Arrangement::empty(3), 10).unwrap() {
            Freeness::Found(c) => {
                assert_eq!(c.exponents, vec![0, 0, 0]);
                assert_eq!(c.depth(), 0);
            }
            Freeness::NotFound => panic!("empty arrangement is free"),
        }
        let rs = build_root_system('A', 3).unwrap();
        let arr = build_ideal_arrangement(&rs, &Ideal::empty(&rs));
        let Freeness::Found(c) = freeness_certificate(&arr, 10_000).unwrap() else {
            panic!("A3 Coxeter arrangement is free");
        };
        assert_eq!(c.nonzero_exponents(), vec![1, 2, 3]);
        assert!(c.is_consistent());
        assert_eq!(c.step.as_ref().unwrap().hyperplane.root, rs.highest_root());
    }

    #[test]
    fn certificates_for_rank_three_ideals() {
        for (l, n) in [('A', 3), ('B', 3), ('C', 3), ('G', 2), ('B', 2)] {
            let rs = build_root_system(l, n).unwrap();
            for ideal in enumerate_ideals(&rs) {
                let arr = build_ideal_arrangement(&rs, &ideal);
                let chi = char_poly(&arr, ChiMethod::Lattice, &budget()).unwrap();
                let Freeness::Found(c) = freeness_certificate(&arr, 100_000).unwrap() else {
                    panic!("{l}{n}: no certificate for {:?}", ideal.members());
                };
                assert!(c.is_consistent());
                assert!(c.matches(&chi));
                let mut want = ideal_exponents(&rs, &ideal).exponents;
                want.sort_unstable();
                assert_eq!(c.nonzero_exponents(), want);
            }
        }
    }

    #[test]
    fn not_found_and_budget_are_distinct() {
        // four generic planes through the origin in 3-space: χ has the
        // irreducible factor t² − 3t + 3, so no inductive chain exists
        let generic =
            Arrangement::from_normals(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 1]]).unwrap();
        assert_eq!(freeness_certificate(&generic, 10_000).unwrap(), Freeness::NotFound);
        assert_eq!(char_poly(&generic, ChiMethod::Lattice, &budget()).unwrap(), p(&[-3, 6, -4, 1]));
        let rs = build_root_system('B', 3).unwrap();
        let arr = build_ideal_arrangement(&rs, &Ideal::empty(&rs));
        assert!(matches!(freeness_certificate(&arr, 2), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn lattice_limits() {
        let rs = build_root_system('A', 3).unwrap();
        let arr = build_ideal_arrangement(&rs, &Ideal::empty(&rs));
        assert!(matches!(intersection_lattice(&arr, 3), Err(Error::BudgetExceeded { .. })));
        let tiny = Budget { field_work: 10, ..Budget::default() };
        assert!(matches!(char_poly(&arr, ChiMethod::FiniteField, &tiny), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn chamber_examples() {
        let rs = build_root_system('A', 2).unwrap();
        let w = enumerate_weyl(&rs, None).unwrap();
        assert_eq!(chamber_poly(&w, &Ideal::full(&rs)), p(&[1]));
        assert_eq!(chamber_poly(&w, &Ideal::empty(&rs)), p(&[1, 2, 2, 1]));
        assert_eq!(chamber_poly(&w, &Ideal::theta(&rs)), p(&[1, 2, 1]));
    }

    /// Region counts against `|χ(−1)|` and the Poincaré polynomial.
    #[test]
    fn chambers_match_poincare_and_region_count() {
        for (l, n) in types(3) {
            let rs = build_root_system(l, n).unwrap();
            let w = enumerate_weyl(&rs, None).unwrap();
            for ideal in enumerate_ideals(&rs) {
                let cp = chamber_poly(&w, &ideal);
                assert_eq!(cp, poincare_poly(&w, &ideal));
                let chi = char_poly(&build_ideal_arrangement(&rs, &ideal), ChiMethod::Lattice, &budget()).unwrap();
                let at_minus_one = chi.eval(&BigInt::from(-1)).abs();
                assert_eq!(cp.eval(&BigInt::from(1)), at_minus_one);
            }
        }
    }

    #[test]
    fn report_json_shape() {
        let rs = build_root_system('A', 2).unwrap();
        let rep = arrangement_report(&rs, &Ideal::theta(&rs), &budget()).unwrap();
        let v = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["chi_coeffs"], serde_json::json!([1, -2, 1]));
        assert_eq!(v["expected_coeffs"], serde_json::json!([1, -2, 1]));
        assert_eq!(v["thm2_equal"], true);
        assert_eq!(v["free_certificate"], "found");
        assert_eq!(v["certificate_depth"], 2);
    }
}
