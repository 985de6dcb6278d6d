//! Finite crystallographic root systems of types A–G.
//!
//! Roots are integer vectors in the simple-root basis. Simple roots follow
//! Bourbaki numbering. For B_n and C_n this already puts the unique simple
//! root of its length at position n, and the subsystem of rank n-1 spanned by
//! α_2..α_n is the one used by [`RootSystem::phi1`].

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod cache;
mod rootset;
mod weyl;

pub use rootset::RootSet;
pub use weyl::{enumerate_weyl, WeylElement, WeylGroup, DEFAULT_WEYL_CAP};

/// Cartan–Killing type `X_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanType {
    pub letter: char,
    pub rank: usize,
}

impl CartanType {
    /// Validates the pair. C2 is accepted here and resolved to B2 by
    /// [`build_root_system`].
    pub fn new(letter: char, rank: usize) -> Result<Self> {
        let letter = letter.to_ascii_uppercase();
        let ok = match letter {
            'A' => rank >= 1,
            'B' => rank >= 2,
            'C' => rank >= 2,
            'D' => rank >= 4,
            'E' => (6..=8).contains(&rank),
            'F' => rank == 4,
            'G' => rank == 2,
            _ => false,
        };
        // the bitset representation caps |Φ⁺| at 128
        if !ok || rank > 15 {
            return Err(Error::UnsupportedType { letter, rank });
        }
        let kind = Self { letter, rank };
        if kind.positive_root_count() > 128 {
            return Err(Error::UnsupportedType { letter, rank });
        }
        Ok(kind)
    }

    /// |Φ⁺|, from the closed forms.
    pub fn positive_root_count(&self) -> usize {
        let n = self.rank;
        match (self.letter, n) {
            ('A', _) => n * (n + 1) / 2,
            ('B' | 'C', _) => n * n,
            ('D', _) => n * (n - 1),
            ('E', 6) => 36,
            ('E', 7) => 63,
            ('E', 8) => 120,
            ('F', 4) => 24,
            ('G', 2) => 6,
            _ => unreachable!("validated in CartanType::new"),
        }
    }

    /// Order of the Weyl group, saturating at `u64::MAX`.
    pub fn weyl_order(&self) -> u64 {
        let n = self.rank as u128;
        let fact = |k: u128| (1..=k).fold(1u128, |a, b| a.saturating_mul(b));
        let order: u128 = match (self.letter, self.rank) {
            ('A', _) => fact(n + 1),
            ('B' | 'C', _) => (1u128 << n).saturating_mul(fact(n)),
            ('D', _) => (1u128 << (n - 1)).saturating_mul(fact(n)),
            ('E', 6) => 51_840,
            ('E', 7) => 2_903_040,
            ('E', 8) => 696_729_600,
            ('F', 4) => 1_152,
            ('G', 2) => 12,
            _ => unreachable!("validated in CartanType::new"),
        };
        u64::try_from(order).unwrap_or(u64::MAX)
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let letter = chars.next().unwrap_or('?');
        let rank = chars.as_str().parse().map_err(|_| Error::UnsupportedType { letter, rank: 0 })?;
        CartanType::new(letter, rank)
    }
}

/// A positive root.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Root {
    /// Coefficients over the simple roots.
    pub coords: Vec<i32>,
    pub height: u32,
    pub index: usize,
}

/// A root of Φ = Φ⁺ ⊔ −Φ⁺, packed into an `i16`: `j` is the positive root
/// with index `j`, `!j` its negative.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedRoot(i16);

impl SignedRoot {
    pub fn pos(index: usize) -> Self {
        SignedRoot(index as i16)
    }
    pub fn neg(index: usize) -> Self {
        SignedRoot(!(index as i16))
    }
    #[inline]
    pub fn is_negative(self) -> bool {
        self.0 < 0
    }
    #[inline]
    pub fn index(self) -> usize {
        if self.0 < 0 {
            !self.0 as usize
        } else {
            self.0 as usize
        }
    }
    #[inline]
    pub fn negated(self) -> Self {
        SignedRoot(!self.0)
    }
    pub(crate) fn raw(self) -> i16 {
        self.0
    }
    pub(crate) fn from_raw(v: i16) -> Self {
        SignedRoot(v)
    }
}

impl fmt::Debug for SignedRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_negative() {
            write!(f, "-r{}", self.index())
        } else {
            write!(f, "r{}", self.index())
        }
    }
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    kind: CartanType,
    roots: Vec<Root>,
    /// `cartan[i][j] = ⟨α_i, α_j^∨⟩`.
    cartan: Vec<Vec<i64>>,
    /// Symmetric W-invariant form on the simple roots (integer scaled).
    gram: Vec<Vec<i64>>,
    highest: usize,
    sum_table: Vec<Option<u16>>,
    up_sets: Vec<RootSet>,
    /// `simple_reflect[i][j] = s_i(β_j)`.
    simple_reflect: Vec<Vec<SignedRoot>>,
    lookup: HashMap<Vec<i32>, usize>,
}

#[allow(clippy::needless_range_loop)]
fn gram_matrix(t: CartanType) -> Vec<Vec<i64>> {
    let n = t.rank;
    let mut g = vec![vec![0i64; n]; n];
    let link = |g: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
        g[i][j] = v;
        g[j][i] = v;
    };
    match t.letter {
        'A' | 'D' | 'E' => {
            for i in 0..n {
                g[i][i] = 2;
            }
            match t.letter {
                'A' => (1..n).for_each(|i| link(&mut g, i - 1, i, -1)),
                'D' => {
                    (1..n - 1).for_each(|i| link(&mut g, i - 1, i, -1));
                    link(&mut g, n - 3, n - 1, -1);
                }
                _ => {
                    // 1-3-4-5-6-7-8 with 2 attached to 4 (1-based)
                    for (a, b) in [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)] {
                        if a < n && b < n {
                            link(&mut g, a, b, -1);
                        }
                    }
                }
            }
        }
        'B' => {
            for i in 0..n - 1 {
                g[i][i] = 4;
            }
            g[n - 1][n - 1] = 2;
            (1..n).for_each(|i| link(&mut g, i - 1, i, -2));
        }
        'C' => {
            for i in 0..n - 1 {
                g[i][i] = 2;
            }
            g[n - 1][n - 1] = 4;
            (1..n - 1).for_each(|i| link(&mut g, i - 1, i, -1));
            link(&mut g, n - 2, n - 1, -2);
        }
        'F' => {
            g[0][0] = 4;
            g[1][1] = 4;
            g[2][2] = 2;
            g[3][3] = 2;
            link(&mut g, 0, 1, -2);
            link(&mut g, 1, 2, -2);
            link(&mut g, 2, 3, -1);
        }
        'G' => {
            g[0][0] = 2;
            g[1][1] = 6;
            link(&mut g, 0, 1, -3);
        }
        _ => unreachable!(),
    }
    g
}

/// Builds the root system of type `letter``rank`.
///
/// `C2` is returned as `B2` (same system, Bourbaki labels of B2) with a
/// warning; every other invalid pair is [`Error::UnsupportedType`].
pub fn build_root_system(letter: char, rank: usize) -> Result<RootSystem> {
    let mut kind = CartanType::new(letter, rank)?;
    if kind.letter == 'C' && kind.rank == 2 {
        log::warn!("C2 is isomorphic to B2; building B2");
        kind.letter = 'B';
    }
    Ok(RootSystem::new(kind))
}

impl RootSystem {
    fn new(kind: CartanType) -> Self {
        let n = kind.rank;
        let gram = gram_matrix(kind);
        let cartan: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| 2 * gram[i][j] / gram[j][j]).collect()).collect();

        let pair = |c: &[i32], j: usize| -> i64 { c.iter().enumerate().map(|(i, &ci)| ci as i64 * cartan[i][j]).sum() };

        // orbit of the simple roots under the simple reflections
        let mut seen: std::collections::HashSet<Vec<i32>> = Default::default();
        let mut queue = VecDeque::new();
        for i in 0..n {
            let mut e = vec![0i32; n];
            e[i] = 1;
            seen.insert(e.clone());
            queue.push_back(e);
        }
        while let Some(b) = queue.pop_front() {
            for j in 0..n {
                let p = pair(&b, j) as i32;
                let mut r = b.clone();
                r[j] -= p;
                if seen.insert(r.clone()) {
                    queue.push_back(r);
                }
            }
        }
        let mut pos: Vec<Vec<i32>> = seen.into_iter().filter(|c| c.iter().all(|&x| x >= 0)).collect();
        pos.sort_by(|a, b| {
            let ha: i32 = a.iter().sum();
            let hb: i32 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        assert!(pos.len() <= 128, "root system too large for RootSet");

        let roots: Vec<Root> = pos
            .into_iter()
            .enumerate()
            .map(|(index, coords)| Root { height: coords.iter().sum::<i32>() as u32, coords, index })
            .collect();
        let lookup: HashMap<Vec<i32>, usize> = roots.iter().map(|r| (r.coords.clone(), r.index)).collect();
        let np = roots.len();

        let mut sum_table = vec![None; np * np];
        for a in &roots {
            for b in &roots {
                let s: Vec<i32> = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
                if let Some(&k) = lookup.get(&s) {
                    sum_table[a.index * np + b.index] = Some(k as u16);
                }
            }
        }

        // up-sets via the covering relation β ⋖ β + α_i, highest roots first
        let mut up_sets = vec![RootSet::EMPTY; np];
        for a in (0..np).rev() {
            let mut up = RootSet::singleton(a);
            for i in 0..n {
                if let Some(k) = sum_table[a * np + i] {
                    up = up.union(up_sets[k as usize]);
                }
            }
            up_sets[a] = up;
        }

        let simple_reflect = (0..n)
            .map(|i| {
                roots
                    .iter()
                    .map(|b| {
                        let p = pair(&b.coords, i) as i32;
                        let mut r = b.coords.clone();
                        r[i] -= p;
                        if let Some(&k) = lookup.get(&r) {
                            SignedRoot::pos(k)
                        } else {
                            let neg: Vec<i32> = r.iter().map(|x| -x).collect();
                            SignedRoot::neg(lookup[&neg])
                        }
                    })
                    .collect()
            })
            .collect();

        let highest = np - 1;
        RootSystem { kind, roots, cartan, gram, highest, sum_table, up_sets, simple_reflect, lookup }
    }

    pub fn kind(&self) -> CartanType {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.kind.rank
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn root(&self, i: usize) -> &Root {
        &self.roots[i]
    }

    pub fn num_positive(&self) -> usize {
        self.roots.len()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    /// Index of the highest root θ.
    pub fn highest_root(&self) -> usize {
        self.highest
    }

    pub fn all_positive(&self) -> RootSet {
        RootSet::full(self.roots.len())
    }

    /// Simple roots occupy indices `0..rank`, in Bourbaki order.
    pub fn simple_roots(&self) -> RootSet {
        RootSet::full(self.rank())
    }

    pub fn index_of(&self, coords: &[i32]) -> Option<usize> {
        self.lookup.get(coords).copied()
    }

    /// Index of `β_i + β_j` when it is a positive root.
    #[inline]
    pub fn sum(&self, i: usize, j: usize) -> Option<usize> {
        self.sum_table[i * self.roots.len() + j].map(usize::from)
    }

    /// `β_i ≼ β_j`.
    #[inline]
    pub fn precedes(&self, i: usize, j: usize) -> bool {
        self.up_sets[i].contains(j)
    }

    /// All roots `≽ β_i` (including `β_i`).
    pub fn up_set(&self, i: usize) -> RootSet {
        self.up_sets[i]
    }

    pub fn simple_reflection(&self, i: usize, j: usize) -> SignedRoot {
        self.simple_reflect[i][j]
    }

    pub(crate) fn simple_reflection_table(&self, i: usize) -> &[SignedRoot] {
        &self.simple_reflect[i]
    }

    /// Symmetric form `(a, b)` for vectors in the simple-root basis.
    #[allow(clippy::needless_range_loop)]
    pub fn form(&self, a: &[i32], b: &[i32]) -> i64 {
        let n = self.rank();
        let mut s = 0;
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += a[i] as i64 * self.gram[i][j] * b[j] as i64;
            }
        }
        s
    }

    /// `⟨a, β_j^∨⟩ = 2 (a, β_j) / (β_j, β_j)`, always an integer for `a` in the
    /// root lattice.
    pub fn pairing(&self, a: &[i32], j: usize) -> i64 {
        let b = &self.roots[j].coords;
        let num = 2 * self.form(a, b);
        let den = self.form(b, b);
        debug_assert_eq!(num % den, 0);
        num / den
    }

    /// Signed height of a signed root.
    pub fn signed_height(&self, r: SignedRoot) -> i64 {
        let h = self.roots[r.index()].height as i64;
        if r.is_negative() {
            -h
        } else {
            h
        }
    }

    /// Positive roots whose support lies in the given simple-root indices.
    pub fn parabolic_roots(&self, simple: &[usize]) -> RootSet {
        self.roots
            .iter()
            .filter(|r| r.coords.iter().enumerate().all(|(i, &c)| c == 0 || simple.contains(&i)))
            .map(|r| r.index)
            .collect()
    }

    /// Φ¹: positive roots involving α_1, i.e. Φ⁺ minus the positive roots of
    /// the rank n-1 subsystem on α_2..α_n.
    pub fn phi1(&self) -> RootSet {
        self.roots.iter().filter(|r| r.coords[0] > 0).map(|r| r.index).collect()
    }

    /// Integer covector of `β_j` on the coroot space, in the basis of simple
    /// coroots: `(⟨β_j, α_1^∨⟩, ..., ⟨β_j, α_n^∨⟩)`.
    pub fn coroot_covector(&self, j: usize) -> Vec<i64> {
        let c = &self.roots[j].coords;
        (0..self.rank()).map(|k| c.iter().enumerate().map(|(i, &ci)| ci as i64 * self.cartan[i][k]).sum()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heights(rs: &RootSystem) -> Vec<u32> {
        rs.roots().iter().map(|r| r.height).collect()
    }

    /// Independent construction: close the simple roots under adding simple
    /// roots, using α-strings (`β + α_i` is a root iff `p - ⟨β, α_i^∨⟩ > 0`
    /// where `p` is how far `β - k α_i` stays a root).
    fn string_closure(rs: &RootSystem) -> Vec<Vec<i32>> {
        let n = rs.rank();
        let cartan = rs.cartan();
        let mut roots: Vec<Vec<i32>> = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                e
            })
            .collect();
        let mut layer = roots.clone();
        while !layer.is_empty() {
            let mut next = Vec::new();
            for b in &layer {
                for i in 0..n {
                    let mut p = 0;
                    loop {
                        let mut d = b.clone();
                        d[i] -= p + 1;
                        if roots.contains(&d) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let pr: i64 = b.iter().enumerate().map(|(k, &c)| c as i64 * cartan[k][i]).sum();
                    let q = p as i64 - pr;
                    if q > 0 {
                        let mut s = b.clone();
                        s[i] += 1;
                        if !roots.contains(&s) && !next.contains(&s) {
                            next.push(s);
                        }
                    }
                }
            }
            roots.extend(next.iter().cloned());
            layer = next;
        }
        roots.sort();
        roots
    }

    #[test]
    fn a2_and_g2_shapes() {
        let a2 = build_root_system('A', 2).unwrap();
        assert_eq!(a2.num_positive(), 3);
        assert_eq!(heights(&a2), vec![1, 1, 2]);
        assert_eq!(a2.root(a2.highest_root()).coords, vec![1, 1]);

        let g2 = build_root_system('G', 2).unwrap();
        assert_eq!(g2.num_positive(), 6);
        assert_eq!(g2.root(g2.highest_root()).height, 5);
        assert_eq!(g2.root(g2.highest_root()).coords, vec![3, 2]);
    }

    #[test]
    fn unsupported_types() {
        for (l, r) in [('D', 3), ('B', 1), ('E', 5), ('E', 9), ('F', 3), ('G', 3), ('H', 3), ('A', 0)] {
            assert!(matches!(build_root_system(l, r), Err(Error::UnsupportedType { .. })), "{l}{r}");
        }
        let c2 = build_root_system('C', 2).unwrap();
        assert_eq!(c2.kind().to_string(), "B2");
        // beyond 128 positive roots
        for (l, r) in [('A', 16), ('B', 12), ('C', 12), ('D', 12)] {
            assert!(matches!(CartanType::new(l, r), Err(Error::UnsupportedType { .. })), "{l}{r}");
        }
    }

    #[test]
    fn closed_form_root_counts() {
        for (l, r) in [('A', 15), ('B', 11), ('C', 11), ('D', 11), ('E', 8), ('F', 4), ('G', 2), ('D', 4), ('E', 7)] {
            let rs = build_root_system(l, r).unwrap();
            assert_eq!(rs.kind().positive_root_count(), rs.num_positive(), "{l}{r}");
        }
    }

    #[test]
    fn closure_matches_string_construction() {
        for t in ["A1", "A4", "B3", "C4", "D5", "E6", "F4", "G2"] {
            let t: CartanType = t.parse().unwrap();
            let rs = build_root_system(t.letter, t.rank).unwrap();
            let mut ours: Vec<_> = rs.roots().iter().map(|r| r.coords.clone()).collect();
            ours.sort();
            assert_eq!(ours, string_closure(&rs), "{t}");
        }
    }

    #[test]
    fn root_counts_and_highest_roots() {
        let cases = [
            ("A5", 15, vec![1, 1, 1, 1, 1]),
            ("B4", 16, vec![1, 2, 2, 2]),
            ("C4", 16, vec![2, 2, 2, 1]),
            ("D5", 20, vec![1, 2, 2, 1, 1]),
            ("E6", 36, vec![1, 2, 2, 3, 2, 1]),
            ("E7", 63, vec![2, 2, 3, 4, 3, 2, 1]),
            ("E8", 120, vec![2, 3, 4, 6, 5, 4, 3, 2]),
            ("F4", 24, vec![2, 3, 4, 2]),
        ];
        for (t, n, theta) in cases {
            let t: CartanType = t.parse().unwrap();
            let rs = build_root_system(t.letter, t.rank).unwrap();
            assert_eq!(rs.num_positive(), n, "{t}");
            assert_eq!(rs.root(rs.highest_root()).coords, theta, "{t}");
        }
    }

    #[test]
    fn type_invariants() {
        for t in ["A3", "B4", "C3", "D4", "E6", "F4", "G2"] {
            let t: CartanType = t.parse().unwrap();
            let rs = build_root_system(t.letter, t.rank).unwrap();
            for r in rs.roots() {
                assert_eq!(r.height as i32, r.coords.iter().sum::<i32>());
                assert!(r.coords.iter().all(|&c| c >= 0));
            }
            assert_eq!(rs.roots().iter().filter(|r| r.height == 1).count(), rs.rank());
            // θ is the unique maximal element
            let theta = rs.highest_root();
            for r in rs.roots() {
                assert!(rs.precedes(r.index, theta));
                let maximal = rs.up_set(r.index).len() == 1;
                assert_eq!(maximal, r.index == theta);
            }
            // sum table is closed
            for a in rs.roots() {
                for b in rs.roots() {
                    let s: Vec<i32> = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
                    assert_eq!(rs.sum(a.index, b.index), rs.index_of(&s));
                }
            }
        }
    }

    #[test]
    fn order_matches_coordinate_dominance() {
        for t in ["A4", "B3", "C4", "D4", "G2", "F4"] {
            let t: CartanType = t.parse().unwrap();
            let rs = build_root_system(t.letter, t.rank).unwrap();
            for a in rs.roots() {
                for b in rs.roots() {
                    let dominated = a.coords.iter().zip(&b.coords).all(|(x, y)| x <= y);
                    assert_eq!(rs.precedes(a.index, b.index), dominated, "{t}");
                }
            }
        }
    }

    #[test]
    fn pairing_is_integral_and_symmetric_in_sign() {
        let rs = build_root_system('G', 2).unwrap();
        assert_eq!(rs.cartan()[0][1], -1);
        assert_eq!(rs.cartan()[1][0], -3);
        for a in rs.roots() {
            assert_eq!(rs.pairing(&a.coords, a.index), 2);
        }
        let b3 = build_root_system('B', 3).unwrap();
        assert_eq!(b3.cartan()[1][2], -2);
        assert_eq!(b3.cartan()[2][1], -1);
    }

    #[test]
    fn simple_reflection_permutes_other_positive_roots() {
        let rs = build_root_system('F', 4).unwrap();
        for i in 0..4 {
            for j in 0..rs.num_positive() {
                let img = rs.simple_reflection(i, j);
                assert_eq!(img.is_negative(), i == j);
            }
        }
    }

    #[test]
    fn phi1_is_a_chain_in_abc() {
        for letter in ['A', 'B', 'C'] {
            for n in 2..=6 {
                let rs = build_root_system(letter, n).unwrap();
                let phi1: Vec<usize> = rs.phi1().to_vec();
                let mut hs: Vec<u32> = phi1.iter().map(|&i| rs.root(i).height).collect();
                hs.sort();
                let top = hs.len() as u32;
                assert_eq!(hs, (1..=top).collect::<Vec<_>>(), "{letter}{n}");
                for &a in &phi1 {
                    for &b in &phi1 {
                        assert!(rs.precedes(a, b) || rs.precedes(b, a));
                    }
                }
            }
        }
    }

    /// β − bα = cγ with b, c ∈ {1, 2} and γ a root of the subsystem on α_2..α_n.
    #[test]
    fn phi1_difference_lemma() {
        for letter in ['A', 'B', 'C'] {
            for n in 2..=6 {
                let rs = build_root_system(letter, n).unwrap();
                let phi1 = rs.phi1().to_vec();
                for &a in &phi1 {
                    for &b in &phi1 {
                        if a == b || !rs.precedes(a, b) {
                            continue;
                        }
                        let found = [1, 2].iter().any(|&bb| {
                            [1, 2].iter().any(|&cc| {
                                let d: Vec<i32> =
                                    rs.root(b).coords.iter().zip(&rs.root(a).coords).map(|(x, y)| x - bb * y).collect();
                                if d[0] != 0 || d.iter().any(|x| x % cc != 0) {
                                    return false;
                                }
                                let g: Vec<i32> = d.iter().map(|x| x / cc).collect();
                                let ng: Vec<i32> = g.iter().map(|x| -x).collect();
                                rs.index_of(&g).is_some() || rs.index_of(&ng).is_some()
                            })
                        });
                        assert!(found, "{letter}{n}: {a} ≺ {b}");
                    }
                }
            }
        }
    }
}
