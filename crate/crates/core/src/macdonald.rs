//! The Macdonald identity under the height specialization `e^α ↦ t^{ht(α)}`,
//! and the uniform treatment of the ideal `{θ}` built on it.
//!
//! The left side `Σ_w Π_{α∈R} (1 − t^{ht(wα)+1}) / (1 − t^{ht(wα)})` is a
//! sum of rational functions; it is evaluated exactly at `|R| + 1` integer
//! points `t₀ = 2, 3, ...` and interpolated.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideals::{ideal_exponents, Ideal};
use crate::par::Exec;
use crate::poly::{interpolate, product_of_geometrics, IntPolynomial};
use crate::rootsys::{RootSet, RootSystem, SignedRoot, WeylGroup};
use crate::weylcomb::{poincare_poly, w_min, FactorizationReport};

/// The exponents `ht(wα)` for `α ∈ R`, never zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightSpecialization {
    pub roots: RootSet,
    pub heights: Vec<i64>,
}

impl HeightSpecialization {
    pub fn new(rs: &RootSystem, weyl: &WeylGroup, w: usize, roots: RootSet) -> Self {
        let e = weyl.get(w);
        let heights = roots.iter().map(|a| rs.signed_height(e.image_of(a))).collect();
        Self { roots, heights }
    }
}

/// `Σ_{w∈W} t^{|N(w) ∩ R|}`.
pub fn macdonald_rhs(weyl: &WeylGroup, r: RootSet) -> IntPolynomial {
    let mut counts = vec![0u64; r.len() + 1];
    for e in weyl.elements() {
        counts[e.inversion_set().intersection(r).len()] += 1;
    }
    IntPolynomial::from_counts(&counts)
}

/// `(1 − t^{h+1}) / (1 − t^h)` at integer `t`, as `(num, den)`; negative `h`
/// are cleared of negative powers first.
fn factor(t: &BigInt, h: i64) -> (BigInt, BigInt) {
    debug_assert!(h != 0);
    if h > 0 {
        (BigInt::one() - t.pow(h as u32 + 1), BigInt::one() - t.pow(h as u32))
    } else {
        let a = (-h) as u32;
        (t.pow(a) - t, t.pow(a) - BigInt::one())
    }
}

/// `Σ_{w} Π_{α∈R} (1 − t₀^{ht(xwα)+1}) / (1 − t₀^{ht(xwα)})` over the given
/// elements `w`, with an optional left translate `x`.
fn evaluate_sum(
    rs: &RootSystem,
    weyl: &WeylGroup,
    elements: &[usize],
    left: Option<usize>,
    r: RootSet,
    t0: i64,
) -> Result<BigRational> {
    let t = BigInt::from(t0);
    let roots: Vec<usize> = r.iter().collect();
    let mut acc = BigRational::zero();
    for &w in elements {
        let e = weyl.get(w);
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for &a in &roots {
            let mut img: SignedRoot = e.image_of(a);
            if let Some(x) = left {
                img = weyl.get(x).apply(img);
            }
            let (n, d) = factor(&t, rs.signed_height(img));
            if d.is_zero() {
                return Err(Error::EvaluationPole { point: t0 });
            }
            num *= n;
            den *= d;
            if num.is_zero() {
                break;
            }
        }
        if !num.is_zero() {
            acc += BigRational::new(num, den);
        }
    }
    Ok(acc)
}

fn interpolate_sum(
    rs: &RootSystem,
    weyl: &WeylGroup,
    elements: &[usize],
    left: Option<usize>,
    r: RootSet,
    exec: Exec,
) -> Result<IntPolynomial> {
    let values = exec.map_range(r.len() + 1, |k| {
        let t0 = k as i64 + 2;
        evaluate_sum(rs, weyl, elements, left, r, t0).map(|v| (t0, v))
    });
    let points = values.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(interpolate(&points)?)
}

/// Left side of the Macdonald identity for `R`, recovered by interpolation.
pub fn macdonald_lhs(rs: &RootSystem, weyl: &WeylGroup, r: RootSet, exec: Exec) -> Result<IntPolynomial> {
    let all: Vec<usize> = (0..weyl.len()).collect();
    interpolate_sum(rs, weyl, &all, None, r, exec)
}

/// Rough count of big-integer multiplications [`macdonald_lhs`] performs.
pub fn macdonald_lhs_work(weyl: &WeylGroup, r: RootSet) -> u64 {
    weyl.len() as u64 * (r.len() as u64 + 1) * r.len().max(1) as u64
}

/// Individual steps of the `{θ}` route; all must hold for the route to be
/// sound.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Uniform1Route {
    /// Every non-identity `w ∈ W_min` sends some `α ∈ I^c` to height −1,
    /// killing its term.
    pub w_min_terms_vanish: bool,
    /// `Π_{α∈I^c} (1 − t^{ht α + 1}) / (1 − t^{ht α})` is the exponent product.
    pub identity_term_matches: bool,
    /// `⟨γ, θ^∨⟩ ∈ {0, 1}` on `I^c` and `I^c_1` splits into pairs summing to θ.
    pub pairing_holds: bool,
    /// `w ∉ W_min` inverts exactly one root of each pair.
    pub half_of_pairs_inverted: bool,
    /// `W_θ` (stabilizer of θ) is the parabolic subgroup on `I^c_0`, and
    /// `W_min` is a union of left cosets of it.
    pub cosets_respected: bool,
    /// On each coset outside `W_min` the `I^c_0` factor equals the Poincaré
    /// polynomial of `W_θ`, both by counting and by the identity for `W_θ`.
    pub coset_reduction_holds: bool,
    /// `Σ_W t^{|N(w)∩I^c|} − Σ_{W∖W_min} t^{|N(w)∩I^c|}` is the Poincaré
    /// polynomial of `W^{θ}`.
    pub bijection_holds: bool,
}

impl Uniform1Route {
    pub fn all_hold(&self) -> bool {
        self.w_min_terms_vanish
            && self.identity_term_matches
            && self.pairing_holds
            && self.half_of_pairs_inverted
            && self.cosets_respected
            && self.coset_reduction_holds
            && self.bijection_holds
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Uniform1Report {
    pub report: FactorizationReport,
    pub route: Uniform1Route,
}

impl Uniform1Report {
    pub fn passed(&self) -> bool {
        self.report.equal && self.route.all_hold()
    }
}

/// Checks the factorization for `I = {θ}` along the W_min / W_θ split.
pub fn verify_uniform1(rs: &RootSystem, weyl: &WeylGroup) -> Result<Uniform1Report> {
    let ideal = Ideal::theta(rs);
    let ic = ideal.complement();
    let theta = rs.highest_root();
    let exps = ideal_exponents(rs, &ideal).exponents;
    let rhs = product_of_geometrics(&exps);
    let lhs = poincare_poly(weyl, &ideal);
    let mut route = Uniform1Route::default();

    let wmin = w_min(rs, weyl, &ideal);
    let mut in_wmin = vec![false; weyl.len()];
    for &w in &wmin {
        in_wmin[w] = true;
    }

    route.w_min_terms_vanish = wmin.iter().filter(|&&w| w != weyl.identity()).all(|&w| {
        let e = weyl.get(w);
        ic.iter().any(|a| rs.signed_height(e.image_of(a)) == -1)
    });

    let (num, den) = ic.iter().fold((IntPolynomial::one(), IntPolynomial::one()), |(n, d), a| {
        let h = rs.root(a).height as usize;
        let one = IntPolynomial::one();
        (&n * &(&one - &IntPolynomial::monomial(h + 1)), &d * &(&one - &IntPolynomial::monomial(h)))
    });
    route.identity_term_matches = num.exact_divide(&den).is_ok_and(|q| q == rhs);

    // split of I^c by ⟨γ, θ^∨⟩
    let mut ic0 = RootSet::EMPTY;
    let mut ic1 = RootSet::EMPTY;
    let mut pairing_ok = true;
    for g in ic.iter() {
        match rs.pairing(&rs.root(g).coords, theta) {
            0 => ic0.insert(g),
            1 => ic1.insert(g),
            _ => pairing_ok = false,
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for a in ic1.iter() {
        let diff: Vec<i32> = rs.root(theta).coords.iter().zip(&rs.root(a).coords).map(|(x, y)| x - y).collect();
        match rs.index_of(&diff) {
            Some(b) if ic1.contains(b) => {
                if a < b {
                    pairs.push((a, b));
                }
            }
            _ => pairing_ok = false,
        }
    }
    route.pairing_holds = pairing_ok && pairs.len() * 2 == ic1.len();

    let outside: Vec<usize> = (0..weyl.len()).filter(|&w| !in_wmin[w]).collect();
    route.half_of_pairs_inverted = outside.iter().all(|&w| {
        let e = weyl.get(w);
        let theta_img = e.image_of(theta);
        theta_img.is_negative()
            && theta_img.index() < rs.rank()
            && pairs.iter().all(|&(a, b)| {
                let ha = rs.signed_height(e.image_of(a));
                let hb = rs.signed_height(e.image_of(b));
                ha + hb == -1 && (ha < 0) != (hb < 0)
            })
            && e.inversion_set().intersection(ic1).len() * 2 == ic1.len()
    });

    // W_θ as the stabilizer of θ and as the parabolic subgroup on I^c_0
    let stabilizer: Vec<usize> =
        (0..weyl.len()).filter(|&w| weyl.get(w).image_of(theta) == SignedRoot::pos(theta)).collect();
    let parabolic: Vec<usize> = (0..weyl.len()).filter(|&w| weyl.get(w).inversion_set().is_subset(ic0)).collect();
    route.cosets_respected =
        stabilizer == parabolic && wmin.iter().all(|&w| stabilizer.iter().all(|&y| in_wmin[weyl.multiply(w, y)]));

    // coset reduction over minimal representatives outside W_min
    let w_theta_poly = {
        let mut counts = vec![0u64; ic0.len() + 1];
        for &y in &stabilizer {
            counts[weyl.get(y).length()] += 1;
        }
        IntPolynomial::from_counts(&counts)
    };
    let not_ic0 = rs.all_positive().difference(ic0);
    let reps: Vec<usize> =
        outside.iter().copied().filter(|&x| weyl.get(x).inversion_set().is_subset(not_ic0)).collect();
    let mut coset_ok = reps.len() * stabilizer.len() == outside.len();
    for &x in &reps {
        let mut counts = vec![0u64; ic0.len() + 1];
        for &y in &stabilizer {
            let xy = weyl.multiply(x, y);
            counts[weyl.get(xy).inversion_set().intersection(ic0).len()] += 1;
        }
        coset_ok &= IntPolynomial::from_counts(&counts) == w_theta_poly;
        let via_identity = interpolate_sum(rs, weyl, &stabilizer, Some(x), ic0, Exec::Sequential)?;
        coset_ok &= via_identity == w_theta_poly;
    }
    let half = ic1.len() / 2;
    let outside_sum = {
        let mut counts = vec![0u64; ic.len() + 1];
        for &w in &outside {
            counts[weyl.get(w).inversion_set().intersection(ic).len()] += 1;
        }
        IntPolynomial::from_counts(&counts)
    };
    let predicted = &(&IntPolynomial::constant(reps.len() as i64) * &IntPolynomial::monomial(half)) * &w_theta_poly;
    route.coset_reduction_holds = coset_ok && (outside.is_empty() || predicted == outside_sum);

    route.bijection_holds = &macdonald_rhs(weyl, ic) - &outside_sum == lhs;

    Ok(Uniform1Report { report: FactorizationReport::compare(&ideal, lhs, rhs), route })
}
