//! The free module of linear difference polynomials: shift monomials,
//! rankings, arithmetic, and the twisted action of the shift operators.
//!
//! A shift monomial pairs a nonnegative exponent vector (one entry per index
//! variable) with a dependent-variable index. Multiplying a polynomial by a
//! power of a shift operator raises exponents and simultaneously substitutes
//! inside the rational-function coefficients; that twist is the one rule
//! everything downstream depends on.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::scalars::RatFun;
use crate::CoreError;

/// Which way the shift operators move the indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShiftDirection {
    #[default]
    Forward,
    Backward,
}

impl ShiftDirection {
    pub fn sign(self) -> i64 {
        match self {
            ShiftDirection::Forward => 1,
            ShiftDirection::Backward => -1,
        }
    }
}

/// Names and direction of the difference ring: index variables, dependent
/// variables, parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingSpec {
    indep: Vec<String>,
    dep: Vec<String>,
    params: Vec<String>,
    direction: ShiftDirection,
}

impl RingSpec {
    pub fn new(
        indep: Vec<String>,
        dep: Vec<String>,
        params: Vec<String>,
        direction: ShiftDirection,
    ) -> Result<Self, CoreError> {
        if indep.is_empty() {
            return Err(CoreError::RingMismatch("at least one independent variable required"));
        }
        if dep.is_empty() {
            return Err(CoreError::RingMismatch("at least one dependent variable required"));
        }
        let mut seen: Vec<&str> = Vec::new();
        for name in indep.iter().chain(&dep).chain(&params) {
            if name.is_empty() {
                return Err(CoreError::RingMismatch("empty symbol name"));
            }
            if seen.contains(&name.as_str()) {
                return Err(CoreError::RingMismatch("symbol lists must be pairwise disjoint"));
            }
            seen.push(name);
        }
        Ok(RingSpec { indep, dep, params, direction })
    }

    pub fn num_indep(&self) -> usize {
        self.indep.len()
    }

    pub fn num_dep(&self) -> usize {
        self.dep.len()
    }

    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    /// Number of symbols the coefficient field knows: indices then parameters.
    pub fn num_coef_syms(&self) -> usize {
        self.indep.len() + self.params.len()
    }

    pub fn indep_names(&self) -> &[String] {
        &self.indep
    }

    pub fn dep_names(&self) -> &[String] {
        &self.dep
    }

    pub fn param_names(&self) -> &[String] {
        &self.params
    }

    pub fn direction(&self) -> ShiftDirection {
        self.direction
    }

    pub fn coef_sym_names(&self) -> Vec<&str> {
        self.indep.iter().chain(&self.params).map(String::as_str).collect()
    }

    pub fn indep_index(&self, name: &str) -> Option<usize> {
        self.indep.iter().position(|s| s == name)
    }

    pub fn dep_index(&self, name: &str) -> Option<usize> {
        self.dep.iter().position(|s| s == name)
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|s| s == name)
    }

    /// Extends the ring by fresh dependent variables (used for the
    /// compatibility-condition construction).
    pub fn with_extra_dependents(&self, extra: Vec<String>) -> Result<Self, CoreError> {
        let mut dep = self.dep.clone();
        dep.extend(extra);
        RingSpec::new(self.indep.clone(), dep, self.params.clone(), self.direction)
    }
}

/// A shift monomial: exponent vector over the index axes plus a dependent
/// variable index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub dep: usize,
    pub exps: Vec<u32>,
}

impl Monomial {
    pub fn new(dep: usize, exps: Vec<u32>) -> Self {
        Monomial { dep, exps }
    }

    pub fn base(dep: usize, n_axes: usize) -> Self {
        Monomial { dep, exps: vec![0; n_axes] }
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// Ordinary divisibility: same dependent class and componentwise `<=`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.dep == other.dep && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// Componentwise difference `other - self`; requires `self.divides(other)`.
    pub fn quotient_exps(&self, other: &Monomial) -> Vec<u32> {
        debug_assert!(self.divides(other));
        other.exps.iter().zip(&self.exps).map(|(b, a)| b - a).collect()
    }

    pub fn lcm_exps(&self, other: &Monomial) -> Vec<u32> {
        self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect()
    }

    pub fn shifted(&self, axis: usize, power: u32) -> Self {
        let mut exps = self.exps.clone();
        exps[axis] += power;
        Monomial { dep: self.dep, exps }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonomialOrder {
    DegRevLex,
    Lex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Priority {
    /// Term over position: compare the shift part first.
    Top,
    /// Position over term: compare the dependent variable first
    /// (the elimination ranking).
    Pot,
}

/// Total admissible order on shift monomials.
///
/// `dependent_order` lists dependent indices from highest to lowest;
/// `blocks` partitions the axes, compared left to right. `elim_split`
/// makes the first `k` entries of `dependent_order` strictly dominate the
/// rest regardless of `priority`; the compatibility-condition machinery
/// builds rankings that way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    order: MonomialOrder,
    blocks: Vec<Vec<usize>>,
    dependent_order: Vec<usize>,
    priority: Priority,
    elim_split: Option<usize>,
}

impl Ranking {
    pub fn new(order: MonomialOrder, priority: Priority, ring: &RingSpec) -> Self {
        Ranking {
            order,
            blocks: vec![(0..ring.num_indep()).collect()],
            dependent_order: (0..ring.num_dep()).collect(),
            priority,
            elim_split: None,
        }
    }

    pub fn with_blocks(mut self, blocks: Vec<Vec<usize>>, ring: &RingSpec) -> Result<Self, CoreError> {
        let mut seen = vec![false; ring.num_indep()];
        for block in &blocks {
            if block.is_empty() {
                return Err(CoreError::RingMismatch("empty ranking block"));
            }
            for &axis in block {
                if axis >= seen.len() || seen[axis] {
                    return Err(CoreError::RingMismatch("blocks must partition the axes"));
                }
                seen[axis] = true;
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(CoreError::RingMismatch("blocks must cover every axis"));
        }
        self.blocks = blocks;
        Ok(self)
    }

    pub fn with_dependent_order(mut self, order: Vec<usize>, ring: &RingSpec) -> Result<Self, CoreError> {
        let m = ring.num_dep();
        let mut seen = vec![false; m];
        if order.len() != m {
            return Err(CoreError::RingMismatch("dependent order must list every dependent"));
        }
        for &d in &order {
            if d >= m || seen[d] {
                return Err(CoreError::RingMismatch("dependent order must be a permutation"));
            }
            seen[d] = true;
        }
        self.dependent_order = order;
        Ok(self)
    }

    pub(crate) fn with_elim_split(mut self, split: usize) -> Self {
        self.elim_split = Some(split);
        self
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn priority(&self) -> Priority {
        self.priority
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn dependent_order(&self) -> &[usize] {
        &self.dependent_order
    }

    fn dep_position(&self, dep: usize) -> usize {
        self.dependent_order
            .iter()
            .position(|&d| d == dep)
            .expect("dependent outside ranking")
    }

    fn cmp_block(&self, u: &[u32], v: &[u32], block: &[usize]) -> Ordering {
        match self.order {
            MonomialOrder::DegRevLex => {
                let du: u32 = block.iter().map(|&i| u[i]).sum();
                let dv: u32 = block.iter().map(|&i| v[i]).sum();
                du.cmp(&dv).then_with(|| {
                    for &i in block.iter().rev() {
                        if u[i] != v[i] {
                            // smaller exponent in the last differing axis wins
                            return v[i].cmp(&u[i]);
                        }
                    }
                    Ordering::Equal
                })
            }
            MonomialOrder::Lex => {
                for &i in block {
                    if u[i] != v[i] {
                        return u[i].cmp(&v[i]);
                    }
                }
                Ordering::Equal
            }
        }
    }

    fn cmp_theta(&self, u: &[u32], v: &[u32]) -> Ordering {
        for block in &self.blocks {
            let c = self.cmp_block(u, v, block);
            if c != Ordering::Equal {
                return c;
            }
        }
        Ordering::Equal
    }

    /// Total order: `Greater` means `u` ranks above `v`.
    pub fn compare(&self, u: &Monomial, v: &Monomial) -> Ordering {
        let pu = self.dep_position(u.dep);
        let pv = self.dep_position(v.dep);
        if let Some(split) = self.elim_split {
            let (gu, gv) = (pu < split, pv < split);
            if gu != gv {
                return if gu { Ordering::Greater } else { Ordering::Less };
            }
        }
        // a smaller position in dependent_order ranks higher
        let dep_cmp = pv.cmp(&pu);
        match self.priority {
            Priority::Pot => dep_cmp.then_with(|| self.cmp_theta(&u.exps, &v.exps)),
            Priority::Top => self.cmp_theta(&u.exps, &v.exps).then(dep_cmp),
        }
    }
}

/// Linear difference polynomial: a finite coefficient-weighted sum of shift
/// monomials. No zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffPoly {
    nsyms: usize,
    terms: BTreeMap<Monomial, RatFun>,
}

impl DiffPoly {
    pub fn zero(ring: &RingSpec) -> Self {
        DiffPoly { nsyms: ring.num_coef_syms(), terms: BTreeMap::new() }
    }

    pub fn from_terms<I>(ring: &RingSpec, iter: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, RatFun)>,
    {
        let mut p = Self::zero(ring);
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    /// Single term `c * theta^exps (dep)`.
    pub fn term(ring: &RingSpec, dep: usize, exps: Vec<u32>, coef: RatFun) -> Self {
        Self::from_terms(ring, [(Monomial::new(dep, exps), coef)])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &RatFun)> {
        self.terms.iter()
    }

    pub fn coef(&self, m: &Monomial) -> Option<&RatFun> {
        self.terms.get(m)
    }

    pub fn add_term(&mut self, m: Monomial, c: RatFun) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        DiffPoly {
            nsyms: self.nsyms,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &RatFun) -> Self {
        if c.is_zero() {
            return DiffPoly { nsyms: self.nsyms, terms: BTreeMap::new() };
        }
        DiffPoly {
            nsyms: self.nsyms,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.mul(c))).collect(),
        }
    }

    /// Validates that the polynomial structurally fits the ring.
    pub fn check_over(&self, ring: &RingSpec) -> Result<(), CoreError> {
        if self.nsyms != ring.num_coef_syms() {
            return Err(CoreError::RingMismatch("coefficient symbol count"));
        }
        for m in self.terms.keys() {
            if m.exps.len() != ring.num_indep() {
                return Err(CoreError::RingMismatch("axis count"));
            }
            if m.dep >= ring.num_dep() {
                return Err(CoreError::RingMismatch("dependent index out of range"));
            }
        }
        Ok(())
    }

    /// Rank-maximal monomial and its coefficient.
    pub fn leading_term(&self, rk: &Ranking) -> Result<(&Monomial, &RatFun), CoreError> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| rk.compare(a, b))
            .ok_or(CoreError::NoLeadingTerm)
    }

    pub fn leading_monomial(&self, rk: &Ranking) -> Result<Monomial, CoreError> {
        self.leading_term(rk).map(|(m, _)| m.clone())
    }

    /// Terms sorted by descending rank.
    pub fn terms_desc(&self, rk: &Ranking) -> Vec<(&Monomial, &RatFun)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| rk.compare(b, a));
        v
    }

    /// Scales so the leading coefficient becomes one.
    pub fn monic(&self, rk: &Ranking) -> Result<Self, CoreError> {
        let (_, lc) = self.leading_term(rk)?;
        if lc.is_one() {
            return Ok(self.clone());
        }
        let inv = lc.recip()?;
        Ok(self.scale(&inv))
    }

    /// Multiplication by `sigma_axis^power`: exponents rise, coefficients are
    /// substituted along the ring's shift direction.
    pub fn prolong(&self, ring: &RingSpec, axis: usize, power: u32) -> Self {
        if power == 0 {
            return self.clone();
        }
        let step = ring.direction().sign() * i64::from(power);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.shifted(axis, power), c.shift(axis, step)))
            .collect();
        DiffPoly { nsyms: self.nsyms, terms }
    }

    /// Multiplication by `theta^delta` (one prolongation per axis).
    pub fn prolong_by(&self, ring: &RingSpec, delta: &[u32]) -> Self {
        let mut out = self.clone();
        for (axis, &power) in delta.iter().enumerate() {
            if power > 0 {
                out = out.prolong(ring, axis, power);
            }
        }
        out
    }
}

/// `a*p + b*q` with cancellation.
pub fn poly_combine(a: &RatFun, p: &DiffPoly, b: &RatFun, q: &DiffPoly) -> DiffPoly {
    p.scale(a).add(&q.scale(b))
}

#[cfg(test)]
pub(crate) mod testkit {
    use super::*;
    use crate::scalars::{BigRat, CoefPoly};
    use alloc::string::ToString;

    pub fn ring(indep: &[&str], dep: &[&str], params: &[&str]) -> RingSpec {
        RingSpec::new(
            indep.iter().map(|s| s.to_string()).collect(),
            dep.iter().map(|s| s.to_string()).collect(),
            params.iter().map(|s| s.to_string()).collect(),
            ShiftDirection::Forward,
        )
        .unwrap()
    }

    pub fn rat_int(ring: &RingSpec, v: i64) -> RatFun {
        RatFun::integer(v, ring.num_coef_syms())
    }

    pub fn rat_sym(ring: &RingSpec, sym: usize) -> RatFun {
        RatFun::symbol(sym, ring.num_coef_syms())
    }

    /// `(sym + offset)` as a rational function.
    pub fn rat_sym_plus(ring: &RingSpec, sym: usize, offset: i64) -> RatFun {
        let n = ring.num_coef_syms();
        RatFun::from_poly(CoefPoly::symbol(sym, n).add(&CoefPoly::integer(offset, n)))
    }

    /// `1/(sym + offset)`.
    pub fn rat_inv_sym_plus(ring: &RingSpec, sym: usize, offset: i64) -> RatFun {
        RatFun::one(ring.num_coef_syms()).div(&rat_sym_plus(ring, sym, offset)).unwrap()
    }

    pub fn rat_of(ring: &RingSpec, num: i64, den: i64) -> RatFun {
        RatFun::constant(BigRat::new(num.into(), den.into()), ring.num_coef_syms())
    }

    /// Builds a polynomial from integer-coefficient terms.
    pub fn poly(ring: &RingSpec, terms: &[(usize, &[u32], i64)]) -> DiffPoly {
        DiffPoly::from_terms(
            ring,
            terms.iter().map(|(dep, exps, c)| {
                (Monomial::new(*dep, exps.to_vec()), rat_int(ring, *c))
            }),
        )
    }

    pub fn mono(dep: usize, exps: &[u32]) -> Monomial {
        Monomial::new(dep, exps.to_vec())
    }
}
