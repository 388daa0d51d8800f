//! Involutive normal forms and the completion algorithm producing the
//! minimal Janet (or Janet-like Gröbner) basis of a linear difference ideal.
//!
//! The completion loop keeps an intermediate set `T` and a queue `Q`. The
//! queue element with the rank-minimal leading monomial is reduced to its
//! involutive normal form modulo `T`; a nonzero result joins `T`, displacing
//! any element whose head it now divides, and all unexamined
//! nonmultiplicative prolongations of `T` are enqueued. Four criteria can
//! discard prolongations whose normal form is provably zero; with any subset
//! enabled the output must be identical to the criteria-off run.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::diffring::{DiffPoly, Monomial, Ranking, RingSpec};
use crate::division::{DivisionMode, DivisionTable, NonMultPowers};
use crate::scalars::{CoefPoly, RatFun};
use crate::CoreError;

/// Which of the four reduction-avoidance criteria are enabled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CriteriaSet {
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    pub c4: bool,
}

impl CriteriaSet {
    pub fn none() -> Self {
        CriteriaSet { c1: false, c2: false, c3: false, c4: false }
    }

    pub fn all() -> Self {
        CriteriaSet { c1: true, c2: true, c3: true, c4: true }
    }

    pub fn from_flags(flags: &[u8]) -> Self {
        let mut set = Self::none();
        for f in flags {
            match f {
                1 => set.c1 = true,
                2 => set.c2 = true,
                3 => set.c3 = true,
                4 => set.c4 = true,
                _ => {}
            }
        }
        set
    }

    pub fn any(&self) -> bool {
        self.c1 || self.c2 || self.c3 || self.c4
    }
}

impl Default for CriteriaSet {
    fn default() -> Self {
        Self::all()
    }
}

/// Order of extraction among queue entries whose leading monomials tie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    OldestFirst,
    NewestFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompletionOptions {
    pub mode: DivisionMode,
    pub criteria: CriteriaSet,
    pub tie_break: TieBreak,
}

impl Default for CompletionOptions {
    fn default() -> Self {
        CompletionOptions {
            mode: DivisionMode::Janet,
            criteria: CriteriaSet::all(),
            tie_break: TieBreak::OldestFirst,
        }
    }
}

/// Element of a completed basis: a monic polynomial, its division data and
/// its ancestor bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisElement {
    poly: DiffPoly,
    /// Fraction-free scalar multiple of `poly`, used by the reducers.
    ff: DiffPoly,
    lm: Monomial,
    ancestor: Monomial,
    nonmult: NonMultPowers,
}

impl BasisElement {
    pub fn poly(&self) -> &DiffPoly {
        &self.poly
    }

    pub fn leading_monomial(&self) -> &Monomial {
        &self.lm
    }

    pub fn ancestor(&self) -> &Monomial {
        &self.ancestor
    }

    /// Nonmultiplicative prolongation powers under the basis division.
    pub fn nonmult_powers(&self) -> &NonMultPowers {
        &self.nonmult
    }
}

/// Minimal monic tail-autoreduced involutive basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    ring: RingSpec,
    ranking: Ranking,
    mode: DivisionMode,
    elements: Vec<BasisElement>,
    table: DivisionTable,
}

impl Basis {
    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn ranking(&self) -> &Ranking {
        &self.ranking
    }

    pub fn mode(&self) -> DivisionMode {
        self.mode
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements.iter().map(|e| e.lm.clone()).collect()
    }

    pub fn division_table(&self) -> &DivisionTable {
        &self.table
    }

    /// True when the monomial has no involutive divisor among the leading
    /// monomials, i.e. it represents a residue class of its own.
    pub fn is_standard(&self, m: &Monomial) -> bool {
        self.table.divisor_of(m).is_none()
    }
}

// ---------------------------------------------------------------------------
// Reduction
//
// All rewriting is fraction free: reducers are scalar multiples of the basis
// elements with coprime integer-polynomial coefficients, and an elimination
// step cross-multiplies instead of dividing, `r := (h/d)*r - (c/d)*theta^d g`
// with `d = gcd(h, c)`. The scalar drift is tracked and divided out at the
// end, so normal forms still come out exact and canonical, but no
// rational-function gcds happen inside the loop.
// ---------------------------------------------------------------------------

struct Reducers<'a> {
    polys: Vec<&'a DiffPoly>,
    by_lm: BTreeMap<&'a Monomial, usize>,
    table: &'a DivisionTable,
}

impl<'a> Reducers<'a> {
    fn find(&self, w: &Monomial) -> Option<(&'a Monomial, &'a DiffPoly)> {
        let u = self.table.divisor_of(w)?;
        let idx = self.by_lm[&u];
        Some((u, self.polys[idx]))
    }
}

fn all_integer(p: &DiffPoly) -> bool {
    p.terms().all(|(_, c)| {
        c.den().is_one() && c.num().terms().all(|(_, q)| num_traits::One::is_one(q.denom()))
    })
}

/// Polynomial gcds stop paying for themselves once coefficients get big;
/// beyond this many total terms only the integer content is stripped.
const POLY_CONTENT_TERM_LIMIT: usize = 5000;

/// Gcd of the integer-polynomial coefficients; zero for the zero polynomial.
/// Falls back to the integer content alone on oversized polynomials.
fn poly_content(p: &DiffPoly) -> CoefPoly {
    let nsyms = p.terms().next().map_or(0, |(_, c)| c.num().nsyms());
    let total_terms: usize = p.terms().map(|(_, c)| c.num().terms().count()).sum();
    if total_terms > POLY_CONTENT_TERM_LIMIT {
        let mut int_gcd = num_bigint::BigInt::from(0);
        for (_, c) in p.terms() {
            for (_, q) in c.num().terms() {
                int_gcd = num_integer::Integer::gcd(&int_gcd, q.numer());
            }
            if num_traits::One::is_one(&int_gcd) {
                break;
            }
        }
        return CoefPoly::constant(crate::scalars::BigRat::from_integer(int_gcd), nsyms);
    }
    let mut acc = CoefPoly::zero(nsyms);
    for (_, c) in p.terms() {
        acc = crate::scalars::gcd_z(&acc, c.num());
        if acc.is_one() {
            break;
        }
    }
    acc
}

/// Divides out the coefficient content and normalizes the sign of the
/// rank-leading coefficient. No-op on polynomials with denominators.
fn strip_content(p: DiffPoly, ring: &RingSpec, rk: &Ranking) -> DiffPoly {
    if p.is_zero() || !all_integer(&p) {
        return p;
    }
    let content = poly_content(&p);
    let mut out = if content.is_one() {
        p
    } else {
        let inv = RatFun::from_poly(content).recip().expect("content nonzero");
        p.scale(&inv)
    };
    let (_, lc) = out.leading_term(rk).expect("nonzero");
    let negative = lc
        .num()
        .leading_coef()
        .map_or(false, num_traits::Signed::is_negative);
    if negative {
        out = out.neg();
    }
    let _ = ring;
    out
}

/// Multiplies through by the smallest scalar clearing all denominators,
/// then strips content: a fraction-free scalar multiple of `p`.
fn fraction_free(p: &DiffPoly, ring: &RingSpec, rk: &Ranking) -> DiffPoly {
    if p.is_zero() {
        return p.clone();
    }
    let mut out = p.clone();
    if !all_integer(&out) {
        // polynomial part of the denominators
        let mut lcm = CoefPoly::one(ring.num_coef_syms());
        for (_, c) in p.terms() {
            let g = crate::scalars::poly_gcd(&lcm, c.den());
            let cofactor = c.den().exact_div(&g).expect("gcd divides");
            lcm = lcm.mul(&cofactor);
        }
        out = out.scale(&RatFun::from_poly(lcm));
        // integer part hiding inside the numerator coefficients
        let mut int_lcm = num_bigint::BigInt::from(1);
        for (_, c) in out.terms() {
            for (_, q) in c.num().terms() {
                int_lcm = num_integer::Integer::lcm(&int_lcm, q.denom());
            }
        }
        if !num_traits::One::is_one(&int_lcm) {
            let scale = RatFun::constant(
                crate::scalars::BigRat::from_integer(int_lcm),
                ring.num_coef_syms(),
            );
            out = out.scale(&scale);
        }
        debug_assert!(all_integer(&out));
    }
    strip_content(out, ring, rk)
}

/// One fraction-free elimination of the term `c*w` by the reducer with head
/// `u`; returns the new polynomial and the factor the rest of `r` picked up.
fn ff_step(
    r: &DiffPoly,
    w: &Monomial,
    c: &RatFun,
    u: &Monomial,
    g: &DiffPoly,
    ring: &RingSpec,
) -> (DiffPoly, RatFun) {
    let delta = u.quotient_exps(w);
    let shifted = g.prolong_by(ring, &delta);
    let h = shifted.coef(w).expect("reducer head must land on w").clone();
    let small = h.num().terms().count() + c.num().terms().count() <= 2000;
    let (hc, cc) = if small && h.den().is_one() && c.den().is_one() {
        let d = crate::scalars::poly_gcd(h.num(), c.num());
        if d.is_one() {
            (h.clone(), c.clone())
        } else {
            (
                RatFun::from_poly(h.num().exact_div(&d).expect("gcd divides")),
                RatFun::from_poly(c.num().exact_div(&d).expect("gcd divides")),
            )
        }
    } else {
        (h.clone(), c.clone())
    };
    let scaled = if hc.is_one() { r.clone() } else { r.scale(&hc) };
    (scaled.sub(&shifted.scale(&cc)), hc)
}

const STRIP_EVERY: u32 = 16;

/// Head normal form, fraction free. The result is a scalar multiple of the
/// true head normal form; callers strip content afterwards.
fn reduce_head_ff(p: &DiffPoly, red: &Reducers<'_>, ring: &RingSpec, rk: &Ranking) -> DiffPoly {
    let mut r = p.clone();
    let mut steps = 0u32;
    while !r.is_zero() {
        let (w, c) = r.leading_term(rk).expect("nonzero");
        match red.find(w) {
            None => break,
            Some((u, g)) => {
                let (w, c) = (w.clone(), c.clone());
                let (next, _) = ff_step(&r, &w, &c, u, g, ring);
                r = next;
                steps += 1;
                if steps % STRIP_EVERY == 0 {
                    r = strip_content(r, ring, rk);
                }
            }
        }
    }
    r
}

/// Full normal form, fraction free: returns `(r, lambda)` with
/// `r = lambda * NF(p)`. Always rewrites the rank-highest reducible term.
fn reduce_full_ff(
    p: &DiffPoly,
    red: &Reducers<'_>,
    ring: &RingSpec,
    rk: &Ranking,
) -> (DiffPoly, RatFun) {
    let mut r = p.clone();
    let mut lambda = RatFun::one(ring.num_coef_syms());
    let mut steps = 0u32;
    'outer: loop {
        for (w, c) in r.terms_desc(rk) {
            if let Some((u, g)) = red.find(w) {
                let (w, c) = (w.clone(), c.clone());
                let (next, factor) = ff_step(&r, &w, &c, u, g, ring);
                r = next;
                lambda = lambda.mul(&factor);
                steps += 1;
                if steps % STRIP_EVERY == 0 && all_integer(&r) && !r.is_zero() {
                    let content = poly_content(&r);
                    if !content.is_one() {
                        let content = RatFun::from_poly(content);
                        r = r.scale(&content.recip().expect("content nonzero"));
                        lambda = lambda.div(&content).expect("content nonzero");
                    }
                }
                continue 'outer;
            }
        }
        return (r, lambda);
    }
}

/// Involutive normal form of `p` modulo a completed basis. The result
/// contains no term with an involutive divisor among the basis heads.
pub fn inv_reduce(p: &DiffPoly, basis: &Basis) -> Result<DiffPoly, CoreError> {
    p.check_over(&basis.ring)?;
    let polys: Vec<&DiffPoly> = basis.elements.iter().map(|e| &e.ff).collect();
    let by_lm = basis.elements.iter().enumerate().map(|(i, e)| (&e.lm, i)).collect();
    let red = Reducers { polys, by_lm, table: &basis.table };
    let (r, lambda) = reduce_full_ff(p, &red, &basis.ring, &basis.ranking);
    if r.is_zero() {
        return Ok(r);
    }
    Ok(r.scale(&lambda.recip()?))
}

/// Head-autoreduction on fraction-free representatives: pairwise
/// non-divisible leading monomials, zero results dropped, each element a
/// primitive integer-coefficient scalar multiple of the monic form.
fn autoreduce_ff(polys: &[DiffPoly], ring: &RingSpec, rk: &Ranking) -> Result<Vec<DiffPoly>, CoreError> {
    let mut work: Vec<DiffPoly> = Vec::new();
    for p in polys {
        p.check_over(ring)?;
        if !p.is_zero() {
            work.push(fraction_free(p, ring, rk));
        }
    }
    loop {
        let mut changed = false;
        'scan: for i in 0..work.len() {
            let lm_i = work[i].leading_monomial(rk)?;
            for j in 0..work.len() {
                if i == j {
                    continue;
                }
                let lm_j = work[j].leading_monomial(rk)?;
                if lm_j.divides(&lm_i) {
                    let c = work[i].coef(&lm_i).expect("head present").clone();
                    let (reduced, _) = ff_step(&work[i], &lm_i, &c, &lm_j, &work[j], ring);
                    if reduced.is_zero() {
                        work.remove(i);
                    } else {
                        work[i] = strip_content(reduced, ring, rk);
                    }
                    changed = true;
                    break 'scan;
                }
            }
        }
        if !changed {
            return Ok(work);
        }
    }
}

/// Pairwise ordinary head-autoreduction: monic output, pairwise
/// non-divisible leading monomials, zero results dropped.
pub fn autoreduce(polys: &[DiffPoly], ring: &RingSpec, rk: &Ranking) -> Result<Vec<DiffPoly>, CoreError> {
    let work = autoreduce_ff(polys, ring, rk)?;
    work.into_iter().map(|p| p.monic(rk)).collect()
}

// ---------------------------------------------------------------------------
// Completion
// ---------------------------------------------------------------------------

struct WorkElement {
    poly: DiffPoly,
    lm: Monomial,
    ancestor: Monomial,
    nonmult: NonMultPowers,
    processed: BTreeSet<(usize, u32)>,
}

struct QueueEntry {
    poly: DiffPoly,
    lm: Monomial,
    ancestor: Option<Monomial>,
    /// Head of the element this prolongation was built from; criteria
    /// partners must be distinct from it.
    source_lm: Option<Monomial>,
    processed: BTreeSet<(usize, u32)>,
    is_prolongation: bool,
    seq: u64,
}

fn refresh_assignments(work: &mut [WorkElement], mode: DivisionMode) -> DivisionTable {
    let lms: Vec<Monomial> = work.iter().map(|e| e.lm.clone()).collect();
    let table = DivisionTable::assign(mode, &lms);
    for e in work.iter_mut() {
        e.nonmult = table.nonmult_powers(&e.lm).clone();
    }
    table
}

fn exps_sum_equals(a: &Monomial, b: &Monomial, w: &Monomial) -> bool {
    a.exps.iter().zip(&b.exps).zip(&w.exps).all(|((x, y), z)| x + y == *z)
}

fn lcm_divides(lcm: &[u32], w: &Monomial) -> bool {
    lcm.iter().zip(&w.exps).all(|(l, e)| l <= e)
}

fn lcm_properly_divides(lcm: &[u32], w: &Monomial) -> bool {
    lcm_divides(lcm, w) && lcm.iter().zip(&w.exps).any(|(l, e)| l < e)
}

/// Does an enabled criterion certify that this prolongation reduces to zero?
///
/// `C1` fires when the ancestors of the source and of some head divisor
/// multiply exactly to the prolonged monomial; `C2` when their lcm properly
/// divides it. `C3` and `C4` are chain refinements through a third ancestor:
/// `C3` requires both partial lcms to divide properly, `C4` accepts partial
/// lcms whose prolongations were already dispatched earlier in the run.
///
/// The product criterion is only valid when elements multiply like ring
/// elements, i.e. with a single dependent variable; in the module case a
/// coprime-head pair can still leave an irreducible cross term, so `C1` is
/// suppressed there. The chain criteria are syzygy arguments and remain
/// sound for modules.
fn criterion_applies(
    entry: &QueueEntry,
    work: &[WorkElement],
    criteria: &CriteriaSet,
    dispatched: &BTreeSet<Monomial>,
    rank_one: bool,
) -> bool {
    if !criteria.any() || !entry.is_prolongation {
        return false;
    }
    let w = &entry.lm;
    let a = entry.ancestor.as_ref().expect("prolongations carry an ancestor");
    debug_assert_eq!(a.dep, w.dep);
    for h in work {
        if !h.lm.divides(w) || Some(&h.lm) == entry.source_lm.as_ref() {
            continue;
        }
        let b = &h.ancestor;
        if b.dep != w.dep {
            continue;
        }
        if criteria.c1 && rank_one && exps_sum_equals(a, b, w) {
            return true;
        }
        let lab = a.lcm_exps(b);
        if criteria.c2 && lcm_properly_divides(&lab, w) {
            return true;
        }
        if (criteria.c3 || criteria.c4) && lcm_divides(&lab, w) {
            for t in work {
                let c = &t.ancestor;
                if c.dep != w.dep || !c.divides(w) {
                    continue;
                }
                let lac = a.lcm_exps(c);
                let lcb = c.lcm_exps(b);
                if criteria.c3
                    && lcm_properly_divides(&lac, w)
                    && lcm_properly_divides(&lcb, w)
                {
                    return true;
                }
                if criteria.c4
                    && dispatched.contains(&Monomial::new(w.dep, lac.clone()))
                    && dispatched.contains(&Monomial::new(w.dep, lcb.clone()))
                {
                    return true;
                }
            }
        }
    }
    false
}

/// Computes the minimal monic tail-autoreduced involutive basis of the ideal
/// generated by `gens`.
pub fn janet_basis(
    gens: &[DiffPoly],
    ring: &RingSpec,
    rk: &Ranking,
    opts: &CompletionOptions,
) -> Result<Basis, CoreError> {
    let inputs = autoreduce_ff(gens, ring, rk)?;
    if inputs.is_empty() {
        return Err(CoreError::ZeroIdealInput);
    }

    let mut seq: u64 = 0;
    let mut next_seq = move || {
        seq += 1;
        seq
    };

    let mut queue: Vec<QueueEntry> = Vec::new();
    for p in inputs {
        let lm = p.leading_monomial(rk)?;
        queue.push(QueueEntry {
            poly: p,
            lm,
            ancestor: None,
            source_lm: None,
            processed: BTreeSet::new(),
            is_prolongation: false,
            seq: next_seq(),
        });
    }

    let mut work: Vec<WorkElement> = Vec::new();
    let mut table = DivisionTable::assign(opts.mode, &[]);
    let mut dispatched: BTreeSet<Monomial> = BTreeSet::new();

    loop {
        // enqueue every unexamined nonmultiplicative prolongation
        let prolongs: Vec<(usize, usize, u32)> = work
            .iter()
            .enumerate()
            .flat_map(|(i, e)| {
                e.nonmult
                    .iter()
                    .filter(|&(&axis, &power)| !e.processed.contains(&(axis, power)))
                    .map(move |(&axis, &power)| (i, axis, power))
            })
            .collect();
        for (i, axis, power) in prolongs {
            work[i].processed.insert((axis, power));
            let poly = work[i].poly.prolong(ring, axis, power);
            let lm = work[i].lm.shifted(axis, power);
            queue.push(QueueEntry {
                poly,
                lm,
                ancestor: Some(work[i].ancestor.clone()),
                source_lm: Some(work[i].lm.clone()),
                processed: BTreeSet::new(),
                is_prolongation: true,
                seq: next_seq(),
            });
        }

        if queue.is_empty() {
            break;
        }
        #[cfg(feature = "trace-completion")]
        {
            extern crate std;
            let sizes: alloc::vec::Vec<(usize, usize)> = work
                .iter()
                .map(|e| {
                    let terms = e.poly.len();
                    let coefsize: usize = e
                        .poly
                        .terms()
                        .map(|(_, c)| {
                            c.num().terms().count() + c.den().terms().count()
                        })
                        .sum();
                    (terms, coefsize)
                })
                .collect();
            std::eprintln!("loop: T={} Q={} sizes={:?}", work.len(), queue.len(), sizes);
        }

        // pick the entry with rank-minimal leading monomial
        let best = (0..queue.len())
            .min_by(|&i, &j| {
                rk.compare(&queue[i].lm, &queue[j].lm).then_with(|| match opts.tie_break {
                    TieBreak::OldestFirst => queue[i].seq.cmp(&queue[j].seq),
                    TieBreak::NewestFirst => queue[j].seq.cmp(&queue[i].seq),
                })
            })
            .expect("queue nonempty");
        let entry = queue.remove(best);

        if criterion_applies(&entry, &work, &opts.criteria, &dispatched, ring.num_dep() == 1) {
            dispatched.insert(entry.lm);
            continue;
        }

        let red = Reducers {
            polys: work.iter().map(|e| &e.poly).collect(),
            by_lm: work.iter().enumerate().map(|(i, e)| (&e.lm, i)).collect(),
            table: &table,
        };
        let nf = reduce_head_ff(&entry.poly, &red, ring, rk);
        dispatched.insert(entry.lm.clone());
        if nf.is_zero() {
            continue;
        }

        let nf = strip_content(nf, ring, rk);
        let lm = nf.leading_monomial(rk)?;
        let head_survived = lm == entry.lm;
        let ancestor = match (&entry.ancestor, head_survived) {
            (Some(a), true) => a.clone(),
            _ => lm.clone(),
        };
        let processed = if head_survived { entry.processed } else { BTreeSet::new() };

        // displace elements whose heads the new element divides
        let mut i = 0;
        while i < work.len() {
            if lm.divides(&work[i].lm) && lm != work[i].lm {
                let old = work.remove(i);
                queue.push(QueueEntry {
                    poly: old.poly,
                    lm: old.lm,
                    ancestor: Some(old.ancestor),
                    source_lm: None,
                    processed: old.processed,
                    is_prolongation: false,
                    seq: next_seq(),
                });
            } else {
                i += 1;
            }
        }

        work.push(WorkElement { poly: nf, lm, ancestor, nonmult: NonMultPowers::new(), processed });
        table = refresh_assignments(&mut work, opts.mode);
    }

    // tail reduction and monic normalization: normal forms are unique now,
    // so the output is canonical whatever path the completion took
    let snapshot: Vec<DiffPoly> = work.iter().map(|e| e.poly.clone()).collect();
    let lms: Vec<Monomial> = work.iter().map(|e| e.lm.clone()).collect();
    for i in 0..work.len() {
        let (head, lc) = {
            let (m, c) = work[i].poly.leading_term(rk)?;
            (m.clone(), c.clone())
        };
        let tail = work[i].poly.sub(&DiffPoly::term(ring, head.dep, head.exps.clone(), lc.clone()));
        let red = Reducers {
            polys: snapshot.iter().collect(),
            by_lm: lms.iter().enumerate().map(|(j, m)| (m, j)).collect(),
            table: &table,
        };
        // tail' = lambda * NF(tail); the canonical element is
        // head + NF(tail)/lc = head + tail'/(lambda*lc)
        let (tail_nf, lambda) = reduce_full_ff(&tail, &red, ring, rk);
        let scale = lambda.mul(&lc).recip()?;
        let mut poly = tail_nf.scale(&scale);
        poly.add_term(head, RatFun::one(ring.num_coef_syms()));
        work[i].poly = poly;
    }

    work.sort_by(|a, b| rk.compare(&a.lm, &b.lm));
    let mut elements: Vec<BasisElement> = work
        .into_iter()
        .map(|e| BasisElement {
            ff: fraction_free(&e.poly, ring, rk),
            poly: e.poly,
            lm: e.lm,
            ancestor: e.ancestor,
            nonmult: NonMultPowers::new(),
        })
        .collect();
    let lms: Vec<Monomial> = elements.iter().map(|e| e.lm.clone()).collect();
    let table = DivisionTable::assign(opts.mode, &lms);
    for e in &mut elements {
        e.nonmult = table.nonmult_powers(&e.lm).clone();
    }

    Ok(Basis { ring: ring.clone(), ranking: rk.clone(), mode: opts.mode, elements, table })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffring::testkit::*;
    use crate::diffring::{MonomialOrder, Priority};
    use alloc::vec;

    fn fib_ring() -> (RingSpec, Ranking) {
        let r = ring(&["n"], &["f"], &[]);
        let rk = Ranking::new(MonomialOrder::DegRevLex, Priority::Top, &r);
        (r, rk)
    }

    /// f(n+1) - (1/(n+1)) f(n)
    fn factorial_poly(r: &RingSpec) -> DiffPoly {
        DiffPoly::from_terms(
            r,
            [
                (mono(0, &[1]), rat_int(r, 1)),
                (mono(0, &[0]), rat_inv_sym_plus(r, 0, 1).neg()),
            ],
        )
    }

    #[test]
    fn inv_reduce_twists_through_two_steps() {
        let (r, rk) = fib_ring();
        let basis =
            janet_basis(&[factorial_poly(&r)], &r, &rk, &CompletionOptions::default()).unwrap();
        let p = poly(&r, &[(0, &[2], 1)]);
        let nf = inv_reduce(&p, &basis).unwrap();
        // 1/((n+1)(n+2)) f(n)
        let expected_coef = rat_inv_sym_plus(&r, 0, 1).mul(&rat_inv_sym_plus(&r, 0, 2));
        assert_eq!(nf.len(), 1);
        assert_eq!(nf.coef(&mono(0, &[0])).unwrap(), &expected_coef);
    }

    #[test]
    fn basis_elements_self_reduce_to_zero() {
        let (r, rk) = fib_ring();
        let fib = poly(&r, &[(0, &[2], 1), (0, &[1], -1), (0, &[0], -1)]);
        let basis = janet_basis(&[fib], &r, &rk, &CompletionOptions::default()).unwrap();
        for e in basis.elements() {
            assert!(inv_reduce(e.poly(), &basis).unwrap().is_zero());
        }
        assert!(inv_reduce(&DiffPoly::zero(&r), &basis).unwrap().is_zero());
    }

    #[test]
    fn cross_system_is_already_complete() {
        let r = ring(&["x", "y"], &["u"], &[]);
        let rk = Ranking::new(MonomialOrder::DegRevLex, Priority::Top, &r);
        let f1 = poly(&r, &[(0, &[1, 0], 1), (0, &[0, 0], -1)]);
        let f2 = poly(&r, &[(0, &[0, 1], 1), (0, &[0, 0], -1)]);
        let basis =
            janet_basis(&[f1.clone(), f2.clone()], &r, &rk, &CompletionOptions::default()).unwrap();
        assert_eq!(basis.len(), 2);
        let lms = basis.leading_monomials();
        assert!(lms.contains(&mono(0, &[1, 0])));
        assert!(lms.contains(&mono(0, &[0, 1])));
        assert_eq!(basis.elements()[0].poly(), &f2);
        assert_eq!(basis.elements()[1].poly(), &f1);
    }

    #[test]
    fn singleton_input_is_its_own_basis() {
        let (r, rk) = fib_ring();
        let fib = poly(&r, &[(0, &[2], 1), (0, &[1], -1), (0, &[0], -1)]);
        let basis = janet_basis(&[fib.clone()], &r, &rk, &CompletionOptions::default()).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis.elements()[0].poly(), &fib);
        assert!(basis.elements()[0].nonmult_powers().is_empty());
    }

    #[test]
    fn zero_input_is_rejected() {
        let (r, rk) = fib_ring();
        let err = janet_basis(&[DiffPoly::zero(&r)], &r, &rk, &CompletionOptions::default());
        assert_eq!(err.unwrap_err(), CoreError::ZeroIdealInput);
    }

    #[test]
    fn autoreduce_merges_duplicates() {
        let (r, rk) = fib_ring();
        let p = poly(&r, &[(0, &[1], 2), (0, &[0], -2)]);
        let out = autoreduce(&[p.clone(), p.clone()], &r, &rk).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0], poly(&r, &[(0, &[1], 1), (0, &[0], -1)]));
    }

    #[test]
    fn autoreduce_chains_head_reductions() {
        let r = ring(&["x", "y"], &["u"], &[]);
        let rk = Ranking::new(MonomialOrder::DegRevLex, Priority::Top, &r);
        let a = poly(&r, &[(0, &[1, 0], 1)]);
        let b = poly(&r, &[(0, &[2, 0], 1), (0, &[0, 0], -1)]);
        let out = autoreduce(&[a, b], &r, &rk).unwrap();
        assert_eq!(out, vec![poly(&r, &[(0, &[0, 0], 1)])]);
    }

    #[test]
    fn criteria_do_not_change_the_result() {
        let (r, rk) = fib_ring();
        let fib = poly(&r, &[(0, &[2], 1), (0, &[1], -1), (0, &[0], -1)]);
        let base = janet_basis(
            &[fib.clone()],
            &r,
            &rk,
            &CompletionOptions { criteria: CriteriaSet::none(), ..Default::default() },
        )
        .unwrap();
        let with = janet_basis(&[fib], &r, &rk, &CompletionOptions::default()).unwrap();
        assert_eq!(base, with);
    }

    #[test]
    fn reduction_is_linear_over_the_field() {
        let (r, rk) = fib_ring();
        let basis =
            janet_basis(&[factorial_poly(&r)], &r, &rk, &CompletionOptions::default()).unwrap();
        let p = poly(&r, &[(0, &[3], 1), (0, &[1], 2)]);
        let q = poly(&r, &[(0, &[2], 5), (0, &[0], -1)]);
        let a = rat_sym_plus(&r, 0, 2);
        let b = rat_of(&r, -3, 7);
        let combined = inv_reduce(&poly_combine_helper(&a, &p, &b, &q), &basis).unwrap();
        let separate = inv_reduce(&p, &basis)
            .unwrap()
            .scale(&a)
            .add(&inv_reduce(&q, &basis).unwrap().scale(&b));
        assert_eq!(combined, separate);
        // idempotence
        let nf = inv_reduce(&p, &basis).unwrap();
        assert_eq!(inv_reduce(&nf, &basis).unwrap(), nf);
    }

    fn poly_combine_helper(a: &crate::scalars::RatFun, p: &DiffPoly, b: &crate::scalars::RatFun, q: &DiffPoly) -> DiffPoly {
        crate::diffring::poly_combine(a, p, b, q)
    }

    #[test]
    fn ring_mismatch_is_detected() {
        let (r, rk) = fib_ring();
        let basis =
            janet_basis(&[factorial_poly(&r)], &r, &rk, &CompletionOptions::default()).unwrap();
        let other = ring(&["x", "y"], &["u"], &[]);
        let p = poly(&other, &[(0, &[1, 0], 1)]);
        assert!(matches!(inv_reduce(&p, &basis), Err(CoreError::RingMismatch(_))));
    }

    #[test]
    fn laplace_elimination_produces_five_point_scheme() {
        // ux(x,y) - u(x+1,y) + u(x,y); uy(x,y) - u(x,y+1) + u(x,y);
        // ux(x+1,y) - ux(x,y) + uy(x,y+1) - uy(x,y)
        // POT elimination with ux > uy > u
        let r = ring(&["x", "y"], &["ux", "uy", "u"], &[]);
        let rk = Ranking::new(MonomialOrder::DegRevLex, Priority::Pot, &r);
        let f1 = poly(&r, &[(0, &[0, 0], 1), (2, &[1, 0], -1), (2, &[0, 0], 1)]);
        let f2 = poly(&r, &[(1, &[0, 0], 1), (2, &[0, 1], -1), (2, &[0, 0], 1)]);
        let f3 = poly(
            &r,
            &[(0, &[1, 0], 1), (0, &[0, 0], -1), (1, &[0, 1], 1), (1, &[0, 0], -1)],
        );
        let basis = janet_basis(&[f1, f2, f3], &r, &rk, &CompletionOptions::default()).unwrap();
        let scheme = poly(
            &r,
            &[
                (2, &[2, 0], 1),
                (2, &[0, 2], 1),
                (2, &[1, 0], -2),
                (2, &[0, 1], -2),
                (2, &[0, 0], 2),
            ],
        );
        let found = basis
            .elements()
            .iter()
            .filter(|e| e.poly().terms().all(|(m, _)| m.dep == 2))
            .any(|e| e.poly() == &scheme);
        assert!(found, "basis must contain the 5-point scheme");
    }
}
