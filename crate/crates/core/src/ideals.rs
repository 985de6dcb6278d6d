//! Upper order ideals of Φ⁺ and their exponents.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsys::{RootSet, RootSystem};

/// An upper-closed subset `I ⊆ Φ⁺`, stored together with `I^c = Φ⁺ − I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    members: RootSet,
    complement: RootSet,
}

impl Ideal {
    /// Wraps `members`, rejecting sets that are not upper closed.
    pub fn new(rs: &RootSystem, members: RootSet) -> Result<Self> {
        if !members.is_subset(rs.all_positive()) {
            return Err(Error::InvalidIdeal("root index out of range".into()));
        }
        if let Some((a, b)) = closure_violation(rs, members) {
            return Err(Error::InvalidIdeal(format!(
                "root {a} {:?} is in the set but {b} {:?} above it is not",
                rs.root(a).coords,
                rs.root(b).coords
            )));
        }
        Ok(Self::from_upper_closed(rs, members))
    }

    fn from_upper_closed(rs: &RootSystem, members: RootSet) -> Self {
        Self { members, complement: rs.all_positive().difference(members) }
    }

    /// Smallest ideal containing the given roots.
    pub fn upper_closure(rs: &RootSystem, generators: &[usize]) -> Result<Self> {
        let mut members = RootSet::EMPTY;
        for &g in generators {
            if g >= rs.num_positive() {
                return Err(Error::InvalidIdeal(format!("root index {g} out of range (0..{})", rs.num_positive())));
            }
            members = members.union(rs.up_set(g));
        }
        Ok(Self::from_upper_closed(rs, members))
    }

    pub fn empty(rs: &RootSystem) -> Self {
        Self::from_upper_closed(rs, RootSet::EMPTY)
    }

    pub fn full(rs: &RootSystem) -> Self {
        Self::from_upper_closed(rs, rs.all_positive())
    }

    /// `{θ}`, the penultimate ideal.
    pub fn theta(rs: &RootSystem) -> Self {
        Self::from_upper_closed(rs, RootSet::singleton(rs.highest_root()))
    }

    pub fn members(&self) -> RootSet {
        self.members
    }

    /// `I^c`.
    pub fn complement(&self) -> RootSet {
        self.complement
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Minimal generators (the antichain of minimal elements).
    pub fn generators(&self, rs: &RootSystem) -> Vec<usize> {
        self.members.iter().filter(|&a| !self.members.iter().any(|b| b != a && rs.precedes(b, a))).collect()
    }
}

/// First pair `(α, γ)` with `α ∈ set`, `α ≼ γ`, `γ ∉ set`.
pub fn closure_violation(rs: &RootSystem, set: RootSet) -> Option<(usize, usize)> {
    set.iter().find_map(|a| rs.up_set(a).difference(set).iter().next().map(|g| (a, g)))
}

pub fn is_upper_closed(rs: &RootSystem, set: RootSet) -> bool {
    closure_violation(rs, set).is_none()
}

/// All ideals of Φ⁺ (including ∅ and Φ⁺), ordered by size then bitset.
///
/// Roots are decided from the top of the poset down; a root may join only if
/// every root covering it already has, so each ideal is reached exactly once.
pub fn enumerate_ideals(rs: &RootSystem) -> Vec<Ideal> {
    let np = rs.num_positive();
    let covers: Vec<RootSet> = (0..np).map(|a| (0..rs.rank()).filter_map(|i| rs.sum(a, i)).collect()).collect();

    fn walk(pos: usize, acc: RootSet, covers: &[RootSet], out: &mut Vec<RootSet>) {
        if pos == 0 {
            out.push(acc);
            return;
        }
        let r = pos - 1;
        walk(r, acc, covers, out);
        if covers[r].is_subset(acc) {
            walk(r, acc.with(r), covers, out);
        }
    }

    let mut sets = Vec::new();
    walk(np, RootSet::EMPTY, &covers, &mut sets);
    sets.sort_by_key(|s| (s.len(), *s));
    sets.into_iter().map(|s| Ideal::from_upper_closed(rs, s)).collect()
}

/// Height census of `I^c` and its dual partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentProfile {
    /// `λ_i = #{α ∈ I^c : ht(α) = i}` for `i = 1..`, no trailing zeros.
    pub lambda: Vec<usize>,
    /// `λ_1`, the number of simple roots outside the ideal.
    pub k: usize,
    /// Ideal exponents `m_1 ≤ ... ≤ m_k`.
    pub exponents: Vec<usize>,
}

impl ExponentProfile {
    /// Weakly decreasing with a strict first drop (when nonempty).
    pub fn is_strict_partition_head(&self) -> bool {
        let decreasing = self.lambda.windows(2).all(|w| w[0] >= w[1]);
        let strict = self.lambda.len() < 2 || self.lambda[0] > self.lambda[1];
        decreasing && strict
    }
}

/// `m_i = #{j : λ_j ≥ k − i + 1}`, `i = 1..k`, where `k = λ_1`.
pub fn dual_partition(lambda: &[usize]) -> Vec<usize> {
    let k = lambda.first().copied().unwrap_or(0);
    (1..=k).map(|i| lambda.iter().filter(|&&l| l > k - i).count()).collect()
}

pub fn ideal_exponents(rs: &RootSystem, ideal: &Ideal) -> ExponentProfile {
    let mut lambda: Vec<usize> = Vec::new();
    for j in ideal.complement().iter() {
        let h = rs.root(j).height as usize;
        if lambda.len() < h {
            lambda.resize(h, 0);
        }
        lambda[h - 1] += 1;
    }
    while lambda.last() == Some(&0) {
        lambda.pop();
    }
    let exponents = dual_partition(&lambda);
    ExponentProfile { k: lambda.first().copied().unwrap_or(0), lambda, exponents }
}

/// JSON form of an ideal; root indices refer to the deterministic root order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealJson {
    #[serde(rename = "type")]
    pub kind: String,
    pub ideal_roots: Vec<usize>,
    pub lambda: Vec<usize>,
    pub exponents: Vec<usize>,
}

impl IdealJson {
    pub fn new(rs: &RootSystem, ideal: &Ideal) -> Self {
        let p = ideal_exponents(rs, ideal);
        Self {
            kind: rs.kind().to_string(),
            ideal_roots: ideal.members().to_vec(),
            lambda: p.lambda,
            exponents: p.exponents,
        }
    }
}
