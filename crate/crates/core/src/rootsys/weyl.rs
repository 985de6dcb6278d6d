use std::collections::HashMap;

use super::{CartanType, RootSet, RootSystem, SignedRoot};
use crate::error::{Error, Result};

/// Default bound on `|W|`; large enough for E6 (51 840) and B/C/D up to rank 7.
pub const DEFAULT_WEYL_CAP: u64 = 1_000_000;

/// An element of the Weyl group, canonically identified by its inversion set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    /// A reduced word: `w = s_{word[0]} s_{word[1]} ...` (0-based indices).
    word: Vec<u8>,
    /// `w(β_j)` for each positive root `β_j`.
    image: Vec<SignedRoot>,
    inversions: RootSet,
}

impl WeylElement {
    pub(crate) fn from_image(word: Vec<u8>, image: Vec<SignedRoot>) -> Self {
        let inversions = image.iter().enumerate().filter(|(_, r)| r.is_negative()).map(|(j, _)| j).collect();
        Self { word, image, inversions }
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn root_image(&self) -> &[SignedRoot] {
        &self.image
    }

    /// `N(w) = {β ∈ Φ⁺ : w(β) ≺ 0}`.
    pub fn inversion_set(&self) -> RootSet {
        self.inversions
    }

    pub fn length(&self) -> usize {
        self.inversions.len()
    }

    pub fn is_identity(&self) -> bool {
        self.inversions.is_empty()
    }

    /// `w(r)` for any root `r ∈ Φ`.
    #[inline]
    pub fn apply(&self, r: SignedRoot) -> SignedRoot {
        let img = self.image[r.index()];
        if r.is_negative() {
            img.negated()
        } else {
            img
        }
    }

    /// `w(β_j)` for a positive root.
    #[inline]
    pub fn image_of(&self, j: usize) -> SignedRoot {
        self.image[j]
    }

    /// `w⁻¹(−Π) ∩ Φ⁺`: the positive roots sent to negative simple roots.
    pub fn descent_preimages(&self, rank: usize) -> RootSet {
        self.inversions.iter().filter(|&j| self.image[j].index() < rank).collect()
    }
}

/// All of `W`, in order of length, ties broken by inversion bitset.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    kind: CartanType,
    rank: usize,
    elements: Vec<WeylElement>,
    position: HashMap<RootSet, u32>,
    /// `left_mul[w * rank + i]` is the position of `s_i w`.
    left_mul: Vec<u32>,
}

/// Enumerates `W` by breadth-first left multiplication by simple reflections.
pub fn enumerate_weyl(rs: &RootSystem, cap: Option<u64>) -> Result<WeylGroup> {
    let cap = cap.unwrap_or(DEFAULT_WEYL_CAP);
    let order = rs.kind().weyl_order();
    if order > cap {
        return Err(Error::GroupTooLarge { order, cap });
    }
    let rank = rs.rank();
    let np = rs.num_positive();

    let identity = WeylElement::from_image(Vec::new(), (0..np).map(SignedRoot::pos).collect());
    let mut elements = vec![identity];
    let mut position: HashMap<RootSet, u32> = HashMap::new();
    position.insert(RootSet::EMPTY, 0);

    let mut level_start = 0;
    loop {
        let level_end = elements.len();
        let mut next: Vec<WeylElement> = Vec::new();
        let mut next_seen: HashMap<RootSet, ()> = HashMap::new();
        for w in &elements[level_start..level_end] {
            for i in 0..rank {
                let table = rs.simple_reflection_table(i);
                let image: Vec<SignedRoot> = w
                    .image
                    .iter()
                    .map(|&r| {
                        let s = table[r.index()];
                        if r.is_negative() {
                            s.negated()
                        } else {
                            s
                        }
                    })
                    .collect();
                let x = {
                    let mut word = Vec::with_capacity(w.word.len() + 1);
                    word.push(i as u8);
                    word.extend_from_slice(&w.word);
                    WeylElement::from_image(word, image)
                };
                if x.length() == w.length() + 1 && next_seen.insert(x.inversions, ()).is_none() {
                    next.push(x);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        if (elements.len() + next.len()) as u64 > cap {
            return Err(Error::GroupTooLarge { order, cap });
        }
        next.sort_by_key(|e| e.inversions);
        level_start = elements.len();
        for e in next {
            position.insert(e.inversions, elements.len() as u32);
            elements.push(e);
        }
    }
    debug_assert_eq!(elements.len() as u64, order);
    Ok(WeylGroup::assemble(rs, elements, position))
}

impl WeylGroup {
    pub(crate) fn assemble(rs: &RootSystem, elements: Vec<WeylElement>, position: HashMap<RootSet, u32>) -> Self {
        let rank = rs.rank();
        let mut left_mul = vec![0u32; elements.len() * rank];
        for (w, e) in elements.iter().enumerate() {
            for i in 0..rank {
                // N(s_i w) = N(w) ⊔ {w⁻¹α_i} or N(w) ∖ {−w⁻¹α_i}
                let pre = e.image.iter().position(|r| r.index() == i).expect("w permutes Φ");
                let inv = e.inversions;
                let key = if e.image[pre].is_negative() { inv.without(pre) } else { inv.with(pre) };
                left_mul[w * rank + i] = position[&key];
            }
        }
        WeylGroup { kind: rs.kind(), rank, elements, position, left_mul }
    }

    pub fn kind(&self) -> CartanType {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn get(&self, pos: usize) -> &WeylElement {
        &self.elements[pos]
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn longest(&self) -> usize {
        self.elements.len() - 1
    }

    /// Position of the unique element with the given inversion set.
    pub fn position_of(&self, inversions: RootSet) -> Option<usize> {
        self.position.get(&inversions).map(|&p| p as usize)
    }

    /// Position of `s_i w`.
    pub fn left_multiply(&self, i: usize, w: usize) -> usize {
        self.left_mul[w * self.rank + i] as usize
    }

    /// Position of `a · b`.
    pub fn multiply(&self, a: usize, b: usize) -> usize {
        let (ea, eb) = (&self.elements[a], &self.elements[b]);
        let inv: RootSet =
            eb.image.iter().enumerate().filter(|(_, &r)| ea.apply(r).is_negative()).map(|(j, _)| j).collect();
        self.position[&inv] as usize
    }

    /// Position of `w⁻¹`: `N(w⁻¹) = −w(N(w))`.
    pub fn inverse(&self, w: usize) -> usize {
        let e = &self.elements[w];
        let inv: RootSet = e.inversions.iter().map(|j| e.image[j].index()).collect();
        self.position[&inv] as usize
    }

    /// Position of the simple reflection `s_i`.
    pub fn simple_reflection(&self, i: usize) -> usize {
        self.left_multiply(i, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::build_root_system;

    fn group(letter: char, n: usize) -> (RootSystem, WeylGroup) {
        let rs = build_root_system(letter, n).unwrap();
        let w = enumerate_weyl(&rs, None).unwrap();
        (rs, w)
    }

    /// Independent oracle: BFS over words with explicit reflection matrices in
    /// the simple-root basis, deduplicated by matrix.
    fn matrix_bfs_lengths(rs: &RootSystem) -> Vec<usize> {
        let n = rs.rank();
        let c = rs.cartan();
        let refl = |i: usize| -> Vec<Vec<i64>> {
            // s_i(α_k) = α_k − ⟨α_k, α_i^∨⟩ α_i ; column k
            let mut m = vec![vec![0i64; n]; n];
            for k in 0..n {
                m[k][k] += 1;
                m[i][k] -= c[k][i];
            }
            m
        };
        let mul = |a: &Vec<Vec<i64>>, b: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
            (0..n).map(|r| (0..n).map(|col| (0..n).map(|k| a[r][k] * b[k][col]).sum()).collect()).collect()
        };
        let id: Vec<Vec<i64>> = (0..n).map(|r| (0..n).map(|col| (r == col) as i64).collect()).collect();
        let mut seen = std::collections::HashMap::new();
        seen.insert(id.clone(), 0usize);
        let mut frontier = vec![id];
        let mut d = 0;
        while !frontier.is_empty() {
            d += 1;
            let mut next = Vec::new();
            for m in &frontier {
                for i in 0..n {
                    let x = mul(&refl(i), m);
                    if !seen.contains_key(&x) {
                        seen.insert(x.clone(), d);
                        next.push(x);
                    }
                }
            }
            frontier = next;
        }
        let mut v: Vec<usize> = seen.into_values().collect();
        v.sort();
        v
    }

    #[test]
    fn small_groups() {
        let (_, a1) = group('A', 1);
        assert_eq!(a1.len(), 2);
        assert_eq!(a1.get(1).inversion_set(), RootSet::singleton(0));

        let (_, a2) = group('A', 2);
        let lens: Vec<usize> = a2.elements().iter().map(|e| e.length()).collect();
        assert_eq!(lens, vec![0, 1, 1, 2, 2, 3]);
        assert_eq!(a2.get(a2.longest()).inversion_set(), RootSet::full(3));
    }

    #[test]
    fn orders_and_length_profiles_match_matrix_oracle() {
        for (l, n) in [('A', 3), ('B', 3), ('C', 3), ('G', 2), ('D', 4), ('F', 4)] {
            let (rs, w) = group(l, n);
            assert_eq!(w.len() as u64, rs.kind().weyl_order(), "{l}{n}");
            let mut lens: Vec<usize> = w.elements().iter().map(|e| e.length()).collect();
            lens.sort();
            assert_eq!(lens, matrix_bfs_lengths(&rs), "{l}{n}");
        }
        let (_, f4) = group('F', 4);
        assert_eq!(f4.len(), 1152);
    }

    #[test]
    fn cap_is_enforced() {
        let rs = build_root_system('B', 9).unwrap();
        assert!(matches!(enumerate_weyl(&rs, None), Err(Error::GroupTooLarge { .. })));
        let rs = build_root_system('A', 3).unwrap();
        assert!(matches!(enumerate_weyl(&rs, Some(10)), Err(Error::GroupTooLarge { .. })));
    }

    #[test]
    fn words_are_reduced_and_reproduce_elements() {
        let (rs, w) = group('B', 3);
        for (p, e) in w.elements().iter().enumerate() {
            assert_eq!(e.word().len(), e.length());
            let mut cur = w.identity();
            for &i in e.word().iter().rev() {
                cur = w.left_multiply(i as usize, cur);
            }
            assert_eq!(cur, p);
            assert!(e.length() <= rs.num_positive());
        }
    }

    #[test]
    fn inversion_set_examples() {
        let (rs, w) = group('A', 2);
        assert!(w.get(0).inversion_set().is_empty());
        for i in 0..rs.rank() {
            let s = w.get(w.simple_reflection(i));
            assert_eq!(s.inversion_set(), RootSet::singleton(i));
        }
    }

    #[test]
    fn group_laws() {
        let (_, w) = group('G', 2);
        for a in 0..w.len() {
            assert_eq!(w.multiply(a, w.inverse(a)), 0);
            assert_eq!(w.inverse(w.inverse(a)), a);
            for b in 0..w.len() {
                let ab = w.multiply(a, b);
                assert_eq!(w.inverse(ab), w.multiply(w.inverse(b), w.inverse(a)));
            }
        }
    }

    /// For x, y ∈ W the following are equivalent:
    /// N(x) ⊆ N(yx); x⁻¹N(y) ⊆ Φ⁺; N(yx) = N(x) ⊔ x⁻¹N(y); l(yx) = l(y) + l(x).
    #[test]
    fn length_additivity_four_way_equivalence() {
        for (l, n) in [('A', 1), ('A', 2), ('A', 3), ('B', 2), ('B', 3), ('C', 3), ('G', 2)] {
            let (_, w) = group(l, n);
            for x in 0..w.len() {
                let xi = w.get(w.inverse(x));
                let ex = w.get(x);
                for y in 0..w.len() {
                    let ey = w.get(y);
                    let yx = w.get(w.multiply(y, x));
                    let pulled: Vec<SignedRoot> = ey.inversion_set().iter().map(|b| xi.image_of(b)).collect();
                    let c1 = ex.inversion_set().is_subset(yx.inversion_set());
                    let c2 = pulled.iter().all(|r| !r.is_negative());
                    let c3 = c2 && {
                        let pset: RootSet = pulled.iter().map(|r| r.index()).collect();
                        pset.intersection(ex.inversion_set()).is_empty()
                            && yx.inversion_set() == ex.inversion_set().union(pset)
                    };
                    let c4 = yx.length() == ex.length() + ey.length();
                    assert!(c1 == c2 && c2 == c3 && c3 == c4, "{l}{n} x={x} y={y}");
                }
            }
        }
    }

    /// N(x) ⊊ N(w) admits a simple step up from x and a simple step down from w
    /// staying inside the interval.
    #[test]
    fn chain_property() {
        for (l, n) in [('A', 3), ('B', 3), ('C', 3), ('G', 2)] {
            let (rs, w) = group(l, n);
            for x in 0..w.len() {
                let nx = w.get(x).inversion_set();
                for y in 0..w.len() {
                    let nw = w.get(y).inversion_set();
                    if !(nx.is_subset(nw) && nx != nw) {
                        continue;
                    }
                    let up = (0..rs.rank()).any(|a| {
                        let s = w.get(w.left_multiply(a, x)).inversion_set();
                        nx.is_subset(s) && nx != s && s.is_subset(nw)
                    });
                    let down = (0..rs.rank()).any(|b| {
                        let s = w.get(w.left_multiply(b, y)).inversion_set();
                        nx.is_subset(s) && s.is_subset(nw) && s != nw
                    });
                    assert!(up && down, "{l}{n}");
                }
            }
        }
    }

    #[test]
    fn inversion_sets_are_injective() {
        for (l, n) in [('A', 4), ('B', 4), ('D', 4), ('F', 4)] {
            let (_, w) = group(l, n);
            let set: std::collections::HashSet<_> = w.elements().iter().map(|e| e.inversion_set()).collect();
            assert_eq!(set.len(), w.len());
        }
    }
}
