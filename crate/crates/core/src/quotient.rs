//! The residue-class side of a completed basis: enumeration of standard
//! monomials (master functions), Hilbert series/function/polynomial,
//! compatibility conditions for affine systems, and user-imposed relations
//! on masters.
//!
//! All Hilbert combinatorics route through a Janet assignment of the
//! leading-monomial set; for a Janet-like basis the set is first completed
//! as a monomial set so the disjoint-cone formula applies. Grading is the
//! total degree of the shift part, summed over dependent classes.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::diffring::{DiffPoly, Monomial, Ranking, RingSpec};
use crate::division::{janet_complete_monomials, DivisionMode, DivisionTable};
use crate::engine::{inv_reduce, janet_basis, Basis, CompletionOptions};
use crate::scalars::BigRat;
use crate::CoreError;

// ---------------------------------------------------------------------------
// Hilbert series
// ---------------------------------------------------------------------------

/// Generating series of standard-monomial counts by total degree, in the
/// normalized closed form `numerator(t) / (1 - t)^denom_power` with the
/// numerator not divisible by `1 - t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertSeries {
    numerator: Vec<BigRat>,
    denom_power: u32,
}

fn up_trim(p: &mut Vec<BigRat>) {
    while p.last().map_or(false, BigRat::is_zero) {
        p.pop();
    }
}

fn up_add_scaled(acc: &mut Vec<BigRat>, p: &[BigRat], scale: &BigRat) {
    if acc.len() < p.len() {
        acc.resize(p.len(), BigRat::zero());
    }
    for (a, b) in acc.iter_mut().zip(p) {
        *a += b * scale;
    }
    up_trim(acc);
}

fn up_mul(a: &[BigRat], b: &[BigRat]) -> Vec<BigRat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    up_trim(&mut out);
    out
}

/// `(1 - t)^k` as a dense coefficient vector.
fn one_minus_t_pow(k: u32) -> Vec<BigRat> {
    let mut out = vec![BigRat::one()];
    let minus = vec![BigRat::one(), -BigRat::one()];
    for _ in 0..k {
        out = up_mul(&out, &minus);
    }
    out
}

/// Exact division by `1 - t`; requires the value at `t = 1` to vanish.
fn up_div_one_minus_t(p: &[BigRat]) -> Vec<BigRat> {
    // p = q - t*q  =>  q_i = p_i + q_{i-1}
    let mut q: Vec<BigRat> = Vec::with_capacity(p.len().saturating_sub(1));
    let mut carry = BigRat::zero();
    for (i, c) in p.iter().enumerate() {
        carry += c;
        if i + 1 < p.len() {
            q.push(carry.clone());
        } else {
            debug_assert!(carry.is_zero(), "numerator not divisible by 1 - t");
        }
    }
    up_trim(&mut q);
    q
}

fn binomial_int(n: i64, k: u32) -> BigInt {
    if n < 0 {
        // falling-factorial convention; callers only use n >= 0
        return BigInt::zero();
    }
    let n = n as u64;
    if u64::from(k) > n {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..u64::from(k) {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

impl HilbertSeries {
    fn normalized(mut numerator: Vec<BigRat>, mut denom_power: u32) -> Self {
        up_trim(&mut numerator);
        while denom_power > 0
            && !numerator.is_empty()
            && numerator.iter().fold(BigRat::zero(), |a, b| a + b).is_zero()
        {
            numerator = up_div_one_minus_t(&numerator);
            denom_power -= 1;
        }
        HilbertSeries { numerator, denom_power }
    }

    pub fn numerator(&self) -> &[BigRat] {
        &self.numerator
    }

    pub fn denom_power(&self) -> u32 {
        self.denom_power
    }

    /// Coefficient of `t^d`: the number of standard monomials of degree `d`.
    pub fn coefficient(&self, d: u32) -> u64 {
        let e = self.denom_power;
        let mut acc = BigRat::zero();
        for (j, c) in self.numerator.iter().enumerate() {
            let j = j as u32;
            if j > d {
                break;
            }
            if e == 0 {
                if j == d {
                    acc += c;
                }
            } else {
                let b = binomial_int(i64::from(d - j) + i64::from(e) - 1, e - 1);
                acc += c * BigRat::from_integer(b);
            }
        }
        debug_assert!(acc.denom().is_one() && !acc.is_negative());
        acc.to_integer().to_u64().expect("count fits in u64")
    }

    /// The Hilbert polynomial in the degree variable together with the
    /// regularity bound: function and polynomial agree for every degree at
    /// or beyond the bound.
    pub fn polynomial(&self) -> (Vec<BigRat>, u32) {
        let deg = self.numerator.len().saturating_sub(1) as u32;
        let e = self.denom_power;
        if e == 0 {
            // eventually zero
            return (Vec::new(), deg + 1);
        }
        let mut fact = BigRat::one();
        for i in 1..e {
            fact *= BigRat::from_integer(BigInt::from(i));
        }
        let mut acc: Vec<BigRat> = Vec::new();
        for (j, c) in self.numerator.iter().enumerate() {
            // C(d - j + e - 1, e - 1) as a polynomial in d
            let mut term = vec![BigRat::one()];
            for i in 0..e.saturating_sub(1) {
                let a = i64::from(e) - 1 - (j as i64) - i64::from(i);
                term = up_mul(&term, &[BigRat::from_integer(BigInt::from(a)), BigRat::one()]);
            }
            let scale = c / &fact;
            up_add_scaled(&mut acc, &term, &scale);
        }
        let reg_signed = self.numerator.len() as i64 - i64::from(e);
        let regularity = if reg_signed < 0 { 0 } else { reg_signed as u32 };
        (acc, regularity)
    }

    /// Evaluates the Hilbert polynomial at a degree.
    pub fn polynomial_at(&self, d: u32) -> BigRat {
        let (coeffs, _) = self.polynomial();
        let x = BigRat::from_integer(BigInt::from(d));
        let mut acc = BigRat::zero();
        for c in coeffs.iter().rev() {
            acc = acc * &x + c;
        }
        acc
    }
}

/// Quotient series of a monomial module given by per-class leading
/// monomials: `n_classes/(1-t)^n_axes` minus the disjoint Janet cones.
pub fn hilbert_series_of_monomials(
    lms: &[Monomial],
    n_axes: usize,
    n_classes: usize,
) -> HilbertSeries {
    let table = DivisionTable::assign(DivisionMode::Janet, lms);
    let n = n_axes as u32;
    // common denominator (1 - t)^n
    let mut numerator = vec![BigRat::from_integer(BigInt::from(n_classes as i64))];
    for u in table.monomials() {
        let mult = table.multiplicative_axes(u).len() as u32;
        let mut cone = one_minus_t_pow(n - mult);
        // shift by t^{|u|}
        let deg = u.total_degree() as usize;
        let mut shifted = vec![BigRat::zero(); deg];
        shifted.append(&mut cone);
        up_add_scaled(&mut numerator, &shifted, &-BigRat::one());
    }
    HilbertSeries::normalized(numerator, n)
}

/// Hilbert series of the residue-class module of a completed basis.
pub fn hilbert_series(basis: &Basis) -> HilbertSeries {
    let lms = basis.leading_monomials();
    let lms = match basis.mode() {
        DivisionMode::Janet => lms,
        DivisionMode::JanetLike => janet_complete_monomials(&lms),
    };
    hilbert_series_of_monomials(&lms, basis.ring().num_indep(), basis.ring().num_dep())
}

/// Number of standard monomials of total degree `d`.
pub fn hilbert_function(basis: &Basis, d: u32) -> u64 {
    hilbert_series(basis).coefficient(d)
}

/// Hilbert polynomial (coefficients in the degree variable, ascending) and
/// the regularity bound from which it agrees with the Hilbert function.
pub fn hilbert_polynomial(basis: &Basis) -> (Vec<BigRat>, u32) {
    hilbert_series(basis).polynomial()
}

// ---------------------------------------------------------------------------
// Standard monomials / masters
// ---------------------------------------------------------------------------

/// The set of residue-class representatives: either a finite list or a
/// series descriptor with an optional explicit enumeration up to a degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StandardMonomialSet {
    Finite(Vec<Monomial>),
    Infinite { series: HilbertSeries, enumerated: Option<EnumeratedTo> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumeratedTo {
    pub degree_bound: u32,
    pub monomials: Vec<Monomial>,
}

impl StandardMonomialSet {
    pub fn is_finite(&self) -> bool {
        matches!(self, StandardMonomialSet::Finite(_))
    }

    pub fn monomials(&self) -> Option<&[Monomial]> {
        match self {
            StandardMonomialSet::Finite(m) => Some(m),
            StandardMonomialSet::Infinite { enumerated: Some(e), .. } => Some(&e.monomials),
            StandardMonomialSet::Infinite { .. } => None,
        }
    }
}

fn exps_of_total_degree(n_axes: usize, total: u32) -> Vec<Vec<u32>> {
    if n_axes == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in exps_of_total_degree(n_axes - 1, total - first) {
            let mut e = vec![first];
            e.append(&mut rest);
            out.push(e);
        }
    }
    out
}

/// Finite iff every class and axis has a pure shift power among the heads'
/// ordinary divisibility cone (equivalently, the degree counts vanish
/// eventually).
fn finiteness_box(basis: &Basis) -> Option<Vec<Vec<u32>>> {
    let n = basis.ring().num_indep();
    let m = basis.ring().num_dep();
    let lms = basis.leading_monomials();
    let mut box_bounds: Vec<Vec<u32>> = vec![vec![0; n]; m];
    for dep in 0..m {
        for axis in 0..n {
            let bound = lms
                .iter()
                .filter(|u| {
                    u.dep == dep
                        && u.exps[axis] > 0
                        && u.exps.iter().enumerate().all(|(i, &e)| i == axis || e == 0)
                })
                .map(|u| u.exps[axis])
                .min()?;
            box_bounds[dep][axis] = bound;
        }
    }
    Some(box_bounds)
}

/// Enumerates the residue-class basis. When it is infinite, an explicit
/// enumeration through `degree_bound` is included if one was requested.
pub fn residue_class_basis(basis: &Basis, degree_bound: Option<u32>) -> StandardMonomialSet {
    residue_class_basis_filtered(basis, degree_bound, &RelationStore::new())
}

/// As [`residue_class_basis`], dropping monomials matched by a relation.
pub fn residue_class_basis_filtered(
    basis: &Basis,
    degree_bound: Option<u32>,
    relations: &RelationStore,
) -> StandardMonomialSet {
    let n = basis.ring().num_indep();
    let m = basis.ring().num_dep();
    let rk = basis.ranking();
    match finiteness_box(basis) {
        Some(bounds) => {
            let mut out: Vec<Monomial> = Vec::new();
            for dep in 0..m {
                let mut stack = vec![Vec::<u32>::new()];
                for axis in 0..n {
                    let mut next = Vec::new();
                    for prefix in &stack {
                        for e in 0..bounds[dep][axis] {
                            let mut p = prefix.clone();
                            p.push(e);
                            next.push(p);
                        }
                    }
                    stack = next;
                }
                for exps in stack {
                    let mono = Monomial::new(dep, exps);
                    if basis.is_standard(&mono) && !relations.matches(&mono) {
                        out.push(mono);
                    }
                }
            }
            out.sort_by(|a, b| rk.compare(a, b));
            StandardMonomialSet::Finite(out)
        }
        None => {
            let series = hilbert_series(basis);
            let enumerated = degree_bound.map(|bound| {
                let mut monomials = Vec::new();
                for d in 0..=bound {
                    for dep in 0..m {
                        for exps in exps_of_total_degree(n, d) {
                            let mono = Monomial::new(dep, exps);
                            if basis.is_standard(&mono) && !relations.matches(&mono) {
                                monomials.push(mono);
                            }
                        }
                    }
                }
                monomials.sort_by(|a, b| rk.compare(a, b));
                EnumeratedTo { degree_bound: bound, monomials }
            });
            StandardMonomialSet::Infinite { series, enumerated }
        }
    }
}

// ---------------------------------------------------------------------------
// Relations on masters
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternEntry {
    Fixed(u32),
    Wild,
}

/// Zeroing pattern for residue classes: a dependent index with per-axis
/// entries that either pin a shift offset or stay free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationPattern {
    pub dep: usize,
    pub entries: Vec<PatternEntry>,
}

impl RelationPattern {
    pub fn matches(&self, m: &Monomial) -> bool {
        m.dep == self.dep
            && m.exps.len() == self.entries.len()
            && self.entries.iter().zip(&m.exps).all(|(p, &e)| match p {
                PatternEntry::Fixed(v) => *v == e,
                PatternEntry::Wild => true,
            })
    }

    pub fn check_over(&self, ring: &RingSpec) -> Result<(), CoreError> {
        if self.dep >= ring.num_dep() {
            return Err(CoreError::RingMismatch("pattern dependent out of range"));
        }
        if self.entries.len() != ring.num_indep() {
            return Err(CoreError::RingMismatch("pattern axis count"));
        }
        Ok(())
    }
}

/// Session-scoped list of relation patterns, insertion ordered, duplicates
/// stored once.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationStore {
    patterns: Vec<RelationPattern>,
}

impl RelationStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, pat: RelationPattern) {
        if !self.patterns.contains(&pat) {
            self.patterns.push(pat);
        }
    }

    pub fn list(&self) -> &[RelationPattern] {
        &self.patterns
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn matches(&self, m: &Monomial) -> bool {
        self.patterns.iter().any(|p| p.matches(m))
    }
}

/// Involutive normal form with every term matching a relation deleted.
pub fn reduce_with_relations(
    p: &DiffPoly,
    basis: &Basis,
    relations: &RelationStore,
) -> Result<DiffPoly, CoreError> {
    let nf = inv_reduce(p, basis)?;
    if relations.is_empty() {
        return Ok(nf);
    }
    Ok(DiffPoly::from_terms(
        basis.ring(),
        nf.terms()
            .filter(|(m, _)| !relations.matches(m))
            .map(|(m, c)| (m.clone(), c.clone())),
    ))
}

// ---------------------------------------------------------------------------
// Compatibility conditions
// ---------------------------------------------------------------------------

/// Operator identities the right-hand sides of an affine system must
/// satisfy, expressed in fresh tag dependents appended to the ring.
#[derive(Debug, Clone)]
pub struct CompCond {
    pub ring: RingSpec,
    pub tag_names: Vec<String>,
    pub conditions: Vec<DiffPoly>,
}

fn fresh_tag_names(ring: &RingSpec, count: usize) -> Result<Vec<String>, CoreError> {
    let taken = |name: &str| {
        ring.indep_index(name).is_some()
            || ring.dep_index(name).is_some()
            || ring.param_index(name).is_some()
    };
    for prefix in ["r", "rr", "rhs", "tag"] {
        let names: Vec<String> = (1..=count).map(|i| format!("{prefix}{i}")).collect();
        if !names.iter().any(|n| taken(n)) {
            return Ok(names);
        }
    }
    Err(CoreError::RingMismatch("could not pick fresh tag names"))
}

/// Generating set of compatibility conditions for the affine parts of the
/// system with homogeneous parts `gens`: the tag `r_i` marks the right-hand
/// side of equation `i`, and each returned polynomial is an identity the
/// right-hand sides must satisfy.
pub fn comp_cond(
    gens: &[DiffPoly],
    ring: &RingSpec,
    rk: &Ranking,
    opts: &CompletionOptions,
) -> Result<CompCond, CoreError> {
    let m = ring.num_dep();
    let s = gens.len();
    let tag_names = fresh_tag_names(ring, s)?;
    let ext_ring = ring.with_extra_dependents(tag_names.clone())?;
    let mut dep_order: Vec<usize> = rk.dependent_order().to_vec();
    dep_order.extend(m..m + s);
    let ext_rk = Ranking::new(rk.order(), rk.priority(), &ext_ring)
        .with_blocks(rk.blocks().to_vec(), &ext_ring)?
        .with_dependent_order(dep_order, &ext_ring)?
        .with_elim_split(m);

    let mut tagged: Vec<DiffPoly> = Vec::new();
    for (i, f) in gens.iter().enumerate() {
        f.check_over(ring)?;
        let mut g = DiffPoly::from_terms(&ext_ring, f.terms().map(|(m, c)| (m.clone(), c.clone())));
        g.add_term(
            Monomial::base(m + i, ring.num_indep()),
            crate::scalars::RatFun::integer(-1, ring.num_coef_syms()),
        );
        tagged.push(g);
    }

    let basis = janet_basis(&tagged, &ext_ring, &ext_rk, opts)?;
    let conditions: Vec<DiffPoly> = basis
        .elements()
        .iter()
        .filter(|e| e.poly().terms().all(|(mono, _)| mono.dep >= m))
        .map(|e| e.poly().clone())
        .collect();
    Ok(CompCond { ring: ext_ring, tag_names, conditions })
}
