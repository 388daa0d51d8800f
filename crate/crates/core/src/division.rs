//! Janet and Janet-like monomial divisions.
//!
//! Both divisions are encoded the same way: per monomial and per axis, the
//! first nonmultiplicative power. Janet assigns power 1 on every
//! nonmultiplicative axis; Janet-like assigns the gap to the next larger
//! degree inside the lexicographic degree group. A monomial `u` involutively
//! divides `w` when `u` divides `w` ordinarily and `w - u` stays below every
//! nonmultiplicative power of `u`.
//!
//! Assignments are recomputed from scratch whenever the monomial set changes;
//! divisor search is a linear scan in a fixed deterministic order.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::diffring::Monomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DivisionMode {
    #[default]
    Janet,
    JanetLike,
}

/// Per-axis nonmultiplicative powers of one monomial.
pub type NonMultPowers = BTreeMap<usize, u32>;

/// Janet assignment on one dependent class, given as exponent vectors.
/// Returns the multiplicative axis sets, parallel to the input.
pub fn janet_assign(exps: &[Vec<u32>]) -> Vec<BTreeSet<usize>> {
    let n = exps.first().map_or(0, Vec::len);
    exps.iter()
        .map(|u| {
            (0..n)
                .filter(|&i| {
                    let max = exps
                        .iter()
                        .filter(|v| v[..i] == u[..i])
                        .map(|v| v[i])
                        .max()
                        .unwrap_or(0);
                    u[i] == max
                })
                .collect()
        })
        .collect()
}

/// Janet-like assignment on one dependent class: the nonmultiplicative
/// powers, parallel to the input.
pub fn janet_like_assign(exps: &[Vec<u32>]) -> Vec<NonMultPowers> {
    let n = exps.first().map_or(0, Vec::len);
    exps.iter()
        .map(|u| {
            let mut nmp = NonMultPowers::new();
            for i in 0..n {
                let group: Vec<&Vec<u32>> =
                    exps.iter().filter(|v| v[..i] == u[..i]).collect();
                let max = group.iter().map(|v| v[i]).max().unwrap_or(0);
                if max > u[i] {
                    let k = group
                        .iter()
                        .filter(|v| v[i] > u[i])
                        .map(|v| v[i] - u[i])
                        .min()
                        .expect("max above implies a larger degree exists");
                    nmp.insert(i, k);
                }
            }
            nmp
        })
        .collect()
}

/// Division data for a finite monomial set, computed independently per
/// dependent class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisionTable {
    mode: DivisionMode,
    nm: BTreeMap<Monomial, NonMultPowers>,
}

impl DivisionTable {
    pub fn assign(mode: DivisionMode, monomials: &[Monomial]) -> Self {
        let mut by_class: BTreeMap<usize, Vec<&Monomial>> = BTreeMap::new();
        for m in monomials {
            by_class.entry(m.dep).or_default().push(m);
        }
        let mut nm = BTreeMap::new();
        for (_, class) in by_class {
            let exps: Vec<Vec<u32>> = class.iter().map(|m| m.exps.clone()).collect();
            match mode {
                DivisionMode::Janet => {
                    let mult = janet_assign(&exps);
                    for (m, mult_axes) in class.iter().zip(mult) {
                        let powers: NonMultPowers = (0..m.exps.len())
                            .filter(|i| !mult_axes.contains(i))
                            .map(|i| (i, 1))
                            .collect();
                        nm.insert((*m).clone(), powers);
                    }
                }
                DivisionMode::JanetLike => {
                    for (m, powers) in class.iter().zip(janet_like_assign(&exps)) {
                        nm.insert((*m).clone(), powers);
                    }
                }
            }
        }
        DivisionTable { mode, nm }
    }

    pub fn mode(&self) -> DivisionMode {
        self.mode
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.nm.keys()
    }

    pub fn nonmult_powers(&self, m: &Monomial) -> &NonMultPowers {
        &self.nm[m]
    }

    /// Multiplicative axes in the Janet sense (complement of the
    /// nonmultiplicative ones); meaningful for `DivisionMode::Janet`.
    pub fn multiplicative_axes(&self, m: &Monomial) -> BTreeSet<usize> {
        let powers = &self.nm[m];
        (0..m.exps.len()).filter(|i| !powers.contains_key(i)).collect()
    }

    /// Does `u` involutively divide `w` under this assignment?
    pub fn divides(&self, u: &Monomial, w: &Monomial) -> bool {
        if !u.divides(w) {
            return false;
        }
        self.nm[u]
            .iter()
            .all(|(&axis, &power)| w.exps[axis] - u.exps[axis] < power)
    }

    /// First involutive divisor of `w` in the fixed scan order, if any.
    pub fn divisor_of(&self, w: &Monomial) -> Option<&Monomial> {
        self.nm.keys().find(|u| self.divides(u, w))
    }
}

/// Completes a monomial set so that Janet cones cover the whole ordinary
/// divisibility cone (used for the Hilbert combinatorics of Janet-like
/// bases). The input monomials are kept.
pub fn janet_complete_monomials(monomials: &[Monomial]) -> Vec<Monomial> {
    let mut set: BTreeSet<Monomial> = monomials.iter().cloned().collect();
    loop {
        let current: Vec<Monomial> = set.iter().cloned().collect();
        let table = DivisionTable::assign(DivisionMode::Janet, &current);
        let mut fresh: Vec<Monomial> = Vec::new();
        for u in &current {
            for (&axis, _) in table.nonmult_powers(u) {
                let v = u.shifted(axis, 1);
                if table.divisor_of(&v).is_none() {
                    fresh.push(v);
                }
            }
        }
        let before = set.len();
        set.extend(fresh);
        if set.len() == before {
            return set.into_iter().collect();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffring::testkit::mono;
    use alloc::vec;

    fn exps(list: &[&[u32]]) -> Vec<Vec<u32>> {
        list.iter().map(|e| e.to_vec()).collect()
    }

    #[test]
    fn janet_rule_on_degree_two_staircase() {
        let u = exps(&[&[2, 0], &[1, 1], &[0, 2]]);
        let mult = janet_assign(&u);
        assert_eq!(mult[0], BTreeSet::from([0, 1]));
        assert_eq!(mult[1], BTreeSet::from([1]));
        assert_eq!(mult[2], BTreeSet::from([1]));
    }

    #[test]
    fn janet_singleton_all_multiplicative() {
        let mult = janet_assign(&exps(&[&[3, 1, 2]]));
        assert_eq!(mult[0], BTreeSet::from([0, 1, 2]));
    }

    #[test]
    fn janet_pure_powers() {
        let mult = janet_assign(&exps(&[&[4, 0], &[0, 4]]));
        assert_eq!(mult[0], BTreeSet::from([0, 1]));
        assert_eq!(mult[1], BTreeSet::from([1]));
    }

    #[test]
    fn janet_like_pure_powers() {
        let nmp = janet_like_assign(&exps(&[&[4, 0], &[0, 4]]));
        assert!(nmp[0].is_empty());
        assert_eq!(nmp[1], BTreeMap::from([(0, 4)]));
    }

    #[test]
    fn janet_like_singleton_empty() {
        let nmp = janet_like_assign(&exps(&[&[2, 5]]));
        assert!(nmp[0].is_empty());
    }

    #[test]
    fn janet_like_staircase() {
        let nmp = janet_like_assign(&exps(&[&[2, 0], &[1, 1], &[0, 2]]));
        assert!(nmp[0].is_empty());
        assert_eq!(nmp[1], BTreeMap::from([(0, 1)]));
        assert_eq!(nmp[2], BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn divisor_search_janet() {
        let monos = vec![mono(0, &[2, 0]), mono(0, &[1, 1]), mono(0, &[0, 2])];
        let table = DivisionTable::assign(DivisionMode::Janet, &monos);
        assert_eq!(table.divisor_of(&mono(0, &[1, 3])), Some(&mono(0, &[1, 1])));
        assert_eq!(table.divisor_of(&mono(0, &[1, 2])), Some(&mono(0, &[1, 1])));
        assert_eq!(table.divisor_of(&mono(0, &[1, 0])), None);
        // other dependent class is never matched
        assert_eq!(table.divisor_of(&mono(1, &[1, 3])), None);
    }

    #[test]
    fn divisor_search_janet_like() {
        let monos = vec![mono(0, &[4, 0]), mono(0, &[0, 4])];
        let table = DivisionTable::assign(DivisionMode::JanetLike, &monos);
        assert_eq!(table.divisor_of(&mono(0, &[3, 5])), Some(&mono(0, &[0, 4])));
        assert_eq!(table.divisor_of(&mono(0, &[4, 5])), Some(&mono(0, &[4, 0])));
        assert_eq!(table.divisor_of(&mono(0, &[3, 3])), None);
    }

    #[test]
    fn monomial_completion_closes_cones() {
        // {x^4, y^4}: Janet completion must fill in x^a y^4 for 1 <= a <= 3
        let monos = vec![mono(0, &[4, 0]), mono(0, &[0, 4])];
        let completed = janet_complete_monomials(&monos);
        assert_eq!(completed.len(), 5);
        let table = DivisionTable::assign(DivisionMode::Janet, &completed);
        for u in &completed {
            for (&axis, _) in table.nonmult_powers(u) {
                assert!(table.divisor_of(&u.shifted(axis, 1)).is_some());
            }
        }
    }

    fn all_monomials_up_to(bound: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for a in 0..=bound {
            for b in 0..=bound {
                out.push(mono(0, &[a, b]));
            }
        }
        out
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_mono_set() -> impl Strategy<Value = Vec<Monomial>> {
            proptest::collection::btree_set((0u32..4, 0u32..4), 1..5).prop_map(|set| {
                set.into_iter().map(|(a, b)| mono(0, &[a, b])).collect()
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn janet_cones_are_disjoint(monos in arb_mono_set()) {
                let table = DivisionTable::assign(DivisionMode::Janet, &monos);
                for w in all_monomials_up_to(8) {
                    let divisors: Vec<_> =
                        monos.iter().filter(|u| table.divides(u, &w)).collect();
                    prop_assert!(divisors.len() <= 1, "monomial {:?} in two cones", w);
                }
            }

            #[test]
            fn janet_like_generalizes_janet(monos in arb_mono_set()) {
                let janet = DivisionTable::assign(DivisionMode::Janet, &monos);
                let jl = DivisionTable::assign(DivisionMode::JanetLike, &monos);
                for w in all_monomials_up_to(8) {
                    for u in &monos {
                        if janet.divides(u, &w) {
                            prop_assert!(jl.divides(u, &w));
                        }
                    }
                }
            }

            #[test]
            fn janet_cone_is_filter_closed(monos in arb_mono_set()) {
                // if u | w involutively and w' extends w along multiplicative
                // axes of u, then u | w' involutively
                let table = DivisionTable::assign(DivisionMode::Janet, &monos);
                for w in all_monomials_up_to(5) {
                    for u in &monos {
                        if !table.divides(u, &w) {
                            continue;
                        }
                        for &axis in &table.multiplicative_axes(u) {
                            prop_assert!(table.divides(u, &w.shifted(axis, 2)));
                        }
                    }
                }
            }
        }
    }
}
