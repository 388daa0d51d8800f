//! Exact arithmetic in the coefficient field: rational functions over the
//! rationals in the index variables and the parameters.
//!
//! A [`RatFun`] is kept in a canonical form at all times, so equality of
//! values is structural equality of representations. Canonical form: the
//! numerator/denominator pair is reduced by their polynomial gcd, then scaled
//! so that the denominator is a primitive integer polynomial whose leading
//! coefficient (under the internal symbol order) is positive. Zero is `0/1`.
//!
//! Coefficients are generic: a rational function is nonzero iff it is nonzero
//! as a rational function, even if it vanishes at particular integer values
//! of the indices.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::CoreError;

/// Arbitrary-precision rational number, always reduced, denominator positive.
pub type BigRat = num_rational::BigRational;

/// Exponent vector over the symbol set (index variables first, then
/// parameters). Compared lexicographically, which fixes the internal
/// symbol order used for leading coefficients and rendering.
pub type Exponents = Vec<u32>;

/// Multivariate polynomial over the rationals in a fixed number of symbols.
///
/// No zero coefficients are stored; the zero polynomial has an empty term map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefPoly {
    nsyms: usize,
    terms: BTreeMap<Exponents, BigRat>,
}

impl CoefPoly {
    pub fn zero(nsyms: usize) -> Self {
        CoefPoly { nsyms, terms: BTreeMap::new() }
    }

    pub fn one(nsyms: usize) -> Self {
        Self::constant(BigRat::one(), nsyms)
    }

    pub fn constant(value: BigRat, nsyms: usize) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(vec![0; nsyms], value);
        }
        CoefPoly { nsyms, terms }
    }

    pub fn integer(value: i64, nsyms: usize) -> Self {
        Self::constant(BigRat::from_integer(BigInt::from(value)), nsyms)
    }

    /// The polynomial consisting of the single symbol `sym`.
    pub fn symbol(sym: usize, nsyms: usize) -> Self {
        assert!(sym < nsyms, "symbol index out of range");
        let mut exps = vec![0; nsyms];
        exps[sym] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exps, BigRat::one());
        CoefPoly { nsyms, terms }
    }

    pub fn from_terms<I>(nsyms: usize, iter: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, BigRat)>,
    {
        let mut p = Self::zero(nsyms);
        for (exps, c) in iter {
            assert_eq!(exps.len(), nsyms);
            p.add_term(exps, c);
        }
        p
    }

    pub fn nsyms(&self) -> usize {
        self.nsyms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.terms.values().next().map_or(false, BigRat::is_one)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
            || (self.terms.len() == 1 && self.terms.keys().next().unwrap().iter().all(|&e| e == 0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRat)> {
        self.terms.iter()
    }

    /// Total degree in the given symbol.
    pub fn degree_in(&self, sym: usize) -> u32 {
        self.terms.keys().map(|e| e[sym]).max().unwrap_or(0)
    }

    /// Leading term under the internal (lexicographic) symbol order.
    fn leading(&self) -> Option<(&Exponents, &BigRat)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coef(&self) -> Option<&BigRat> {
        self.leading().map(|(_, c)| c)
    }

    fn add_term(&mut self, exps: Exponents, c: BigRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nsyms, other.nsyms);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        CoefPoly { nsyms: self.nsyms, terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nsyms, other.nsyms);
        let mut out = Self::zero(self.nsyms);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        if c.is_zero() {
            return Self::zero(self.nsyms);
        }
        let terms = self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect();
        CoefPoly { nsyms: self.nsyms, terms }
    }

    /// Substitutes `sym -> sym + steps`, expanding binomially.
    pub fn shift_symbol(&self, sym: usize, steps: i64) -> Self {
        if steps == 0 {
            return self.clone();
        }
        let k = BigInt::from(steps);
        let mut out = Self::zero(self.nsyms);
        for (e, c) in &self.terms {
            let deg = e[sym];
            // (x + k)^deg = sum_j C(deg, j) k^(deg-j) x^j
            for j in 0..=deg {
                let mut exps = e.clone();
                exps[sym] = j;
                let coef = BigRat::from_integer(binomial(deg, j) * k.pow(deg - j));
                out.add_term(exps, c * coef);
            }
        }
        out
    }

    /// Splits into `(content, primitive)` with `self = content * primitive`,
    /// where `primitive` is an integer polynomial with coprime coefficients
    /// and positive leading coefficient. Zero splits as `(0, 0)`.
    fn rat_content_split(&self) -> (BigRat, CoefPoly) {
        if self.is_zero() {
            return (BigRat::zero(), self.clone());
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(&c.numer().abs());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut content = BigRat::new(num_gcd, den_lcm);
        if self.leading_coef().unwrap().is_negative() {
            content = -content;
        }
        let inv = content.recip();
        (content, self.scale(&inv))
    }

    /// Exact division; `None` when the divisor does not divide exactly.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        assert!(!divisor.is_zero(), "exact division by zero polynomial");
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nsyms);
        let (dexp, dcoef) = {
            let (e, c) = divisor.leading().unwrap();
            (e.clone(), c.clone())
        };
        while !rem.is_zero() {
            let (rexp, rcoef) = {
                let (e, c) = rem.leading().unwrap();
                (e.clone(), c.clone())
            };
            if rexp.iter().zip(&dexp).any(|(r, d)| r < d) {
                return None;
            }
            let qexp: Exponents = rexp.iter().zip(&dexp).map(|(r, d)| r - d).collect();
            let qcoef = rcoef / &dcoef;
            let mut mono = Self::zero(self.nsyms);
            mono.add_term(qexp, qcoef);
            rem = rem.sub(&mono.mul(divisor));
            quot = quot.add(&mono);
        }
        Some(quot)
    }

    /// Renders with the given symbol names: terms in descending internal
    /// order, `^` for powers, explicit `*` between factors.
    pub fn render(&self, names: &[&str]) -> String {
        assert_eq!(names.len(), self.nsyms);
        if self.is_zero() {
            return String::from("0");
        }
        let mut out = String::new();
        for (i, (exps, coef)) in self.terms.iter().rev().enumerate() {
            let neg = coef.is_negative();
            let mag = coef.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || exps.iter().all(|&e| e == 0) {
                factors.push(render_rat(&mag));
            }
            for (sym, &e) in exps.iter().enumerate() {
                if e == 1 {
                    factors.push(String::from(names[sym]));
                } else if e > 1 {
                    let mut s = String::from(names[sym]);
                    let _ = write!(s, "^{e}");
                    factors.push(s);
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

fn render_rat(c: &BigRat) -> String {
    if c.denom().is_one() {
        alloc::format!("{}", c.numer())
    } else {
        alloc::format!("{}/{}", c.numer(), c.denom())
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    debug_assert!(k <= n);
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

// ---------------------------------------------------------------------------
// Polynomial gcd: primitive pseudo-remainder sequences, recursing on the
// number of symbols. Canonicality is the contract, not speed.
// ---------------------------------------------------------------------------

/// Univariate view of a polynomial with respect to one main symbol.
struct UniView {
    main: usize,
    coeffs: BTreeMap<u32, CoefPoly>,
}

impl UniView {
    fn of(p: &CoefPoly, main: usize) -> Self {
        let mut coeffs: BTreeMap<u32, CoefPoly> = BTreeMap::new();
        for (e, c) in p.terms() {
            let d = e[main];
            let mut rest = e.clone();
            rest[main] = 0;
            coeffs
                .entry(d)
                .or_insert_with(|| CoefPoly::zero(p.nsyms))
                .add_term(rest, c.clone());
        }
        coeffs.retain(|_, c| !c.is_zero());
        UniView { main, coeffs }
    }

    fn into_poly(self, nsyms: usize) -> CoefPoly {
        let mut out = CoefPoly::zero(nsyms);
        for (d, c) in self.coeffs {
            for (e, v) in c.terms {
                let mut exps = e;
                exps[self.main] += d;
                out.add_term(exps, v);
            }
        }
        out
    }

    fn degree(&self) -> u32 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn lc(&self) -> &CoefPoly {
        self.coeffs.values().next_back().unwrap()
    }

    fn scale_poly(&self, c: &CoefPoly) -> Self {
        let coeffs = self.coeffs.iter().map(|(d, v)| (*d, v.mul(c))).collect();
        UniView { main: self.main, coeffs }
    }

    fn sub(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (d, c) in &other.coeffs {
            let entry = coeffs.entry(*d).or_insert_with(|| CoefPoly::zero(c.nsyms()));
            *entry = entry.sub(c);
        }
        coeffs.retain(|_, c| !c.is_zero());
        UniView { main: self.main, coeffs }
    }

    /// Multiplies by `c * main^shift`.
    fn shifted_scale(&self, c: &CoefPoly, shift: u32) -> Self {
        let coeffs = self.coeffs.iter().map(|(d, v)| (d + shift, v.mul(c))).collect();
        UniView { main: self.main, coeffs }
    }
}

/// Exact pseudo-remainder `lc(g)^(deg f - deg g + 1) * f mod g` in the main
/// symbol, as the subresultant divisors require.
fn pseudo_rem(f: &UniView, g: &UniView) -> UniView {
    let mut r = UniView { main: f.main, coeffs: f.coeffs.clone() };
    let dg = g.degree();
    let lcg = g.lc().clone();
    let mut spare = f.degree() - dg + 1;
    while !r.is_zero() && r.degree() >= dg {
        let dr = r.degree();
        let lcr = r.lc().clone();
        // lc(g)*r - lc(r)*main^(dr-dg)*g
        r = r.scale_poly(&lcg).sub(&g.shifted_scale(&lcr, dr - dg));
        spare -= 1;
        if !r.is_zero() && r.degree() == dr {
            // the leading terms must have cancelled
            unreachable!("pseudo-remainder failed to reduce degree");
        }
    }
    // degrees can drop by more than one per step; pad the missing factors
    for _ in 0..spare {
        r = r.scale_poly(&lcg);
    }
    r
}

fn int_split(p: &CoefPoly) -> (BigInt, CoefPoly) {
    let (c, pp) = p.rat_content_split();
    debug_assert!(c.denom().is_one(), "int_split on non-integer polynomial");
    (c.numer().clone(), pp)
}

/// True gcd in the integer polynomial ring, positive leading coefficient.
pub(crate) fn gcd_z(p: &CoefPoly, q: &CoefPoly) -> CoefPoly {
    if p.is_zero() {
        if q.is_zero() {
            return q.clone();
        }
        let (c, pp) = int_split(q);
        return pp.scale(&BigRat::from_integer(c.abs()));
    }
    if q.is_zero() {
        return gcd_z(q, p);
    }
    let (cp, pp) = int_split(p);
    let (cq, qq) = int_split(q);
    let c = cp.gcd(&cq);
    gcd_primitive(&pp, &qq).scale(&BigRat::from_integer(c))
}

fn content_in(p: &CoefPoly, main: usize) -> CoefPoly {
    let view = UniView::of(p, main);
    let mut acc = CoefPoly::zero(p.nsyms());
    for c in view.coeffs.values() {
        acc = gcd_z(&acc, c);
        if acc.is_one() {
            break;
        }
    }
    acc
}

fn primitive_in(p: &CoefPoly, main: usize) -> CoefPoly {
    let cont = content_in(p, main);
    let pp = p.exact_div(&cont).expect("content must divide");
    let (_, pp) = int_split(&pp);
    pp
}

/// Largest absolute numerator among the coefficients.
fn height(p: &CoefPoly) -> BigInt {
    let mut h = BigInt::zero();
    for c in p.terms.values() {
        let a = c.numer().abs();
        if a > h {
            h = a;
        }
    }
    h
}

/// Substitutes an integer for one symbol.
fn eval_symbol(p: &CoefPoly, sym: usize, value: &BigInt) -> CoefPoly {
    let mut out = CoefPoly::zero(p.nsyms);
    for (e, c) in &p.terms {
        let mut exps = e.clone();
        let deg = exps[sym];
        exps[sym] = 0;
        out.add_term(exps, c * BigRat::from_integer(value.pow(deg)));
    }
    out
}

/// Balanced remainder in `(-xi/2, xi/2]`, applied coefficient-wise.
fn smod_poly(p: &CoefPoly, xi: &BigInt) -> CoefPoly {
    let half = xi / 2;
    let mut out = CoefPoly::zero(p.nsyms);
    for (e, c) in &p.terms {
        debug_assert!(c.denom().is_one());
        let mut r = c.numer().mod_floor(xi);
        if r > half {
            r -= xi;
        }
        out.add_term(e.clone(), BigRat::from_integer(r));
    }
    out
}

/// Heuristic gcd of integer polynomials: evaluate one symbol at a large
/// point, take the gcd one level down, lift back through balanced base-xi
/// digits, and verify by trial division. `None` when the guess fails.
fn heugcd(a: &CoefPoly, b: &CoefPoly, depth: u32) -> Option<CoefPoly> {
    let main = (0..a.nsyms)
        .filter(|&s| a.degree_in(s) > 0 || b.degree_in(s) > 0)
        .max_by_key(|&s| a.degree_in(s).max(b.degree_in(s)));
    let main = match main {
        Some(m) => m,
        None => {
            // integer gcd of two constants
            let ca = a.leading_coef().map(|c| c.numer().clone()).unwrap_or_default();
            let cb = b.leading_coef().map(|c| c.numer().clone()).unwrap_or_default();
            return Some(CoefPoly::constant(BigRat::from_integer(ca.gcd(&cb)), a.nsyms));
        }
    };
    if depth > 8 {
        return None;
    }
    let mut xi: BigInt =
        (height(a).min(height(b)) + BigInt::from(2)) * BigInt::from(2) + BigInt::from(29);
    for _ in 0..6 {
        let pa = eval_symbol(a, main, &xi);
        let pb = eval_symbol(b, main, &xi);
        if !pa.is_zero() && !pb.is_zero() {
            if let Some(gv) = heugcd(&pa, &pb, depth + 1) {
                // lift: balanced base-xi digits, coefficient-wise
                let mut g = CoefPoly::zero(a.nsyms);
                let mut rest = gv;
                let mut power: u32 = 0;
                let bound = a.degree_in(main).max(b.degree_in(main)) + 1;
                while !rest.is_zero() && power <= bound {
                    let digit = smod_poly(&rest, &xi);
                    if !digit.is_zero() {
                        let mut lifted = CoefPoly::zero(a.nsyms);
                        for (e, c) in &digit.terms {
                            let mut exps = e.clone();
                            exps[main] = power;
                            lifted.add_term(exps, c.clone());
                        }
                        g = g.add(&lifted);
                    }
                    let num = rest.sub(&digit);
                    rest = num.scale(&BigRat::new(BigInt::one(), xi.clone()));
                    debug_assert!(rest.terms.values().all(|c| c.denom().is_one()));
                    power += 1;
                }
                if rest.is_zero() && !g.is_zero() {
                    // the integer content encodes the outer evaluation
                    // points, so it may only be stripped at the top level
                    let g = if depth == 0 { g.rat_content_split().1 } else { g };
                    if a.exact_div(&g).is_some() && b.exact_div(&g).is_some() {
                        return Some(g);
                    }
                }
            }
        }
        // next evaluation point, same flavor as the classical iteration
        xi = &xi * BigInt::from(73794) / BigInt::from(27011);
    }
    None
}

/// Gcd of two primitive integer polynomials: heuristic evaluation gcd with
/// the subresultant PRS (pseudo-remainders with the Brown-Traub divisors)
/// as the deterministic fallback.
fn gcd_primitive(a: &CoefPoly, b: &CoefPoly) -> CoefPoly {
    if a.is_one() || b.is_one() {
        return CoefPoly::one(a.nsyms());
    }
    if let Some(g) = heugcd(a, b, 0) {
        return g;
    }
    gcd_primitive_prs(a, b)
}

/// Subresultant PRS gcd; correct on any primitive integer inputs.
fn gcd_primitive_prs(a: &CoefPoly, b: &CoefPoly) -> CoefPoly {
    if a.is_one() || b.is_one() {
        return CoefPoly::one(a.nsyms());
    }
    // main variable: smallest positive degree keeps the chain short
    let main = (0..a.nsyms())
        .filter(|&s| a.degree_in(s) > 0 || b.degree_in(s) > 0)
        .min_by_key(|&s| a.degree_in(s).max(b.degree_in(s)));
    let main = match main {
        Some(m) => m,
        // both constants; primitive constants are +-1
        None => return CoefPoly::one(a.nsyms()),
    };
    if a.degree_in(main) == 0 {
        return gcd_z(a, &content_in(b, main));
    }
    if b.degree_in(main) == 0 {
        return gcd_z(&content_in(a, main), b);
    }
    let cont_a = content_in(a, main);
    let cont_b = content_in(b, main);
    let c = gcd_z(&cont_a, &cont_b);
    let ppa = a.exact_div(&cont_a).expect("content must divide");
    let ppb = b.exact_div(&cont_b).expect("content must divide");
    let (mut f, mut g) = if ppa.degree_in(main) >= ppb.degree_in(main) {
        (UniView::of(&ppa, main), UniView::of(&ppb, main))
    } else {
        (UniView::of(&ppb, main), UniView::of(&ppa, main))
    };
    let nsyms = c.nsyms();
    let mut s = CoefPoly::one(nsyms);
    let mut h = CoefPoly::one(nsyms);
    loop {
        let delta = f.degree() - g.degree();
        let r = pseudo_rem(&f, &g);
        if r.is_zero() {
            break;
        }
        if r.degree() == 0 {
            return c;
        }
        let divisor = s.mul(&pow_poly(&h, delta));
        let reduced = r
            .into_poly(nsyms)
            .exact_div(&divisor)
            .expect("subresultant divisor must divide");
        f = g;
        g = UniView::of(&reduced, main);
        s = f.lc().clone();
        if delta > 0 {
            h = pow_poly(&s, delta)
                .exact_div(&pow_poly(&h, delta - 1))
                .expect("subresultant h update must divide");
        }
    }
    let gp = primitive_in(&g.into_poly(nsyms), main);
    c.mul(&gp)
}

fn pow_poly(p: &CoefPoly, e: u32) -> CoefPoly {
    let mut out = CoefPoly::one(p.nsyms());
    for _ in 0..e {
        out = out.mul(p);
    }
    out
}

/// Canonical polynomial gcd over the rationals: the primitive integer
/// representative with positive leading coefficient (1 for coprime inputs).
pub fn poly_gcd(a: &CoefPoly, b: &CoefPoly) -> CoefPoly {
    if a.is_zero() {
        return b.rat_content_split().1;
    }
    if b.is_zero() {
        return a.rat_content_split().1;
    }
    let (_, pa) = a.rat_content_split();
    let (_, pb) = b.rat_content_split();
    gcd_primitive(&pa, &pb)
}

// ---------------------------------------------------------------------------
// Rational functions
// ---------------------------------------------------------------------------

/// Element of the coefficient field, kept canonical (see module docs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFun {
    num: CoefPoly,
    den: CoefPoly,
}

impl RatFun {
    /// Builds the canonical representative of `num/den`.
    pub fn new(num: CoefPoly, den: CoefPoly) -> Result<Self, CoreError> {
        assert_eq!(num.nsyms(), den.nsyms());
        if den.is_zero() {
            return Err(CoreError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFun { den: CoefPoly::one(num.nsyms()), num });
        }
        let g = poly_gcd(&num, &den);
        let num = num.exact_div(&g).expect("gcd must divide numerator");
        let den = den.exact_div(&g).expect("gcd must divide denominator");
        // scale the pair so the denominator is primitive with positive lead
        let (dc, dpp) = den.rat_content_split();
        let num = num.scale(&dc.recip());
        Ok(RatFun { num, den: dpp })
    }

    /// Constructor for pairs already known to be coprime; only the scale
    /// normalization of the denominator is applied.
    fn from_coprime(num: CoefPoly, den: CoefPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatFun { den: CoefPoly::one(num.nsyms()), num };
        }
        if den.is_one() {
            return RatFun { num, den };
        }
        let (dc, dpp) = den.rat_content_split();
        RatFun { num: num.scale(&dc.recip()), den: dpp }
    }

    pub fn from_poly(p: CoefPoly) -> Self {
        let den = CoefPoly::one(p.nsyms());
        RatFun { num: p, den }
    }

    pub fn constant(c: BigRat, nsyms: usize) -> Self {
        Self::from_poly(CoefPoly::constant(c, nsyms))
    }

    pub fn integer(v: i64, nsyms: usize) -> Self {
        Self::from_poly(CoefPoly::integer(v, nsyms))
    }

    pub fn zero(nsyms: usize) -> Self {
        Self::from_poly(CoefPoly::zero(nsyms))
    }

    pub fn one(nsyms: usize) -> Self {
        Self::from_poly(CoefPoly::one(nsyms))
    }

    pub fn symbol(sym: usize, nsyms: usize) -> Self {
        Self::from_poly(CoefPoly::symbol(sym, nsyms))
    }

    pub fn nsyms(&self) -> usize {
        self.num.nsyms()
    }

    pub fn num(&self) -> &CoefPoly {
        &self.num
    }

    pub fn den(&self) -> &CoefPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(self.num.add(&other.num));
        }
        // gcd(num, a.den*b.den/d) = gcd(num, d) once the fractions are
        // reduced, so only small gcds are ever taken here
        let d = poly_gcd(&self.den, &other.den);
        if d.is_one() {
            let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            let den = self.den.mul(&other.den);
            return Self::from_coprime(num, den);
        }
        let da = self.den.exact_div(&d).expect("gcd divides");
        let db = other.den.exact_div(&d).expect("gcd divides");
        let t = self.num.mul(&db).add(&other.num.mul(&da));
        if t.is_zero() {
            return Self::zero(self.nsyms());
        }
        let g = poly_gcd(&t, &d);
        if g.is_one() {
            Self::from_coprime(t, self.den.mul(&db))
        } else {
            let num = t.exact_div(&g).expect("gcd divides");
            let den = da.mul(&db).mul(&d.exact_div(&g).expect("gcd divides"));
            Self::from_coprime(num, den)
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nsyms());
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(self.num.mul(&other.num));
        }
        // cross-cancel so the product pair stays coprime
        let g1 = poly_gcd(&self.num, &other.den);
        let g2 = poly_gcd(&other.num, &self.den);
        let num_a = self.num.exact_div(&g1).expect("gcd divides");
        let num_b = other.num.exact_div(&g2).expect("gcd divides");
        let den_a = self.den.exact_div(&g2).expect("gcd divides");
        let den_b = other.den.exact_div(&g1).expect("gcd divides");
        Self::from_coprime(num_a.mul(&num_b), den_a.mul(&den_b))
    }

    pub fn div(&self, other: &Self) -> Result<Self, CoreError> {
        if other.is_zero() {
            return Err(CoreError::DivisionByZero);
        }
        Ok(self.mul(&Self::from_coprime(other.den.clone(), other.num.clone())))
    }

    pub fn recip(&self) -> Result<Self, CoreError> {
        Self::one(self.nsyms()).div(self)
    }

    /// The shift action on coefficients: substitutes `sym -> sym + steps` in
    /// numerator and denominator. Symbols other than `sym` are untouched, so
    /// parameters are constants of the shift.
    pub fn shift(&self, sym: usize, steps: i64) -> Self {
        if steps == 0 || self.is_zero() {
            return self.clone();
        }
        let num = self.num.shift_symbol(sym, steps);
        let den = self.den.shift_symbol(sym, steps);
        // shifting is a ring automorphism: coprimality and primitivity of the
        // pair survive, only the sign normalization can change
        let (dc, dpp) = den.rat_content_split();
        debug_assert!(dc.abs().is_one());
        RatFun { num: num.scale(&dc.recip()), den: dpp }
    }

    /// Canonical text rendering: `num` or `(num)/(den)`.
    pub fn render(&self, names: &[&str]) -> String {
        if self.den.is_one() {
            self.num.render(names)
        } else {
            alloc::format!("({})/({})", self.num.render(names), self.den.render(names))
        }
    }
}

impl core::ops::Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        RatFun::add(self, rhs)
    }
}

impl core::ops::Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        RatFun::sub(self, rhs)
    }
}

impl core::ops::Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        RatFun::mul(self, rhs)
    }
}

impl core::ops::Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(i: usize) -> CoefPoly {
        CoefPoly::symbol(i, 2)
    }

    fn int(v: i64) -> CoefPoly {
        CoefPoly::integer(v, 2)
    }

    #[test]
    fn normalize_removes_content() {
        // (2x+2)/2 -> x+1
        let num = sym(0).scale(&BigRat::from_integer(2.into())).add(&int(2));
        let den = int(2);
        let f = RatFun::new(num, den).unwrap();
        assert_eq!(f.num(), &sym(0).add(&int(1)));
        assert!(f.den().is_one());
    }

    #[test]
    fn normalize_cancels_common_factor() {
        // (x^2-1)/(x-1) -> x+1; cross-check by multiplication
        let x = sym(0);
        let num = x.mul(&x).sub(&int(1));
        let den = x.sub(&int(1));
        let f = RatFun::new(num.clone(), den.clone()).unwrap();
        assert_eq!(f.num(), &x.add(&int(1)));
        assert!(f.den().is_one());
        // (x^2-1)*1 == (x+1)*(x-1)
        assert_eq!(num.mul(&CoefPoly::one(2)), f.num().mul(&den));
    }

    #[test]
    fn normalize_zero_is_unique() {
        let f = RatFun::new(CoefPoly::zero(2), sym(0).mul(&sym(0)).add(&int(5))).unwrap();
        assert!(f.is_zero());
        assert!(f.den().is_one());
        assert_eq!(f, RatFun::zero(2));
    }

    #[test]
    fn zero_denominator_is_an_error() {
        assert_eq!(
            RatFun::new(int(1), CoefPoly::zero(2)).unwrap_err(),
            CoreError::DivisionByZero
        );
    }

    #[test]
    fn add_with_common_denominator() {
        // 1/x + 1/(x+1) = (2x+1)/(x^2+x)
        let x = RatFun::symbol(0, 2);
        let one = RatFun::one(2);
        let a = one.div(&x).unwrap();
        let b = one.div(&x.add(&one)).unwrap();
        let s = a.add(&b);
        let expect_num = sym(0).scale(&BigRat::from_integer(2.into())).add(&int(1));
        let expect_den = sym(0).mul(&sym(0)).add(&sym(0));
        assert_eq!(s.num(), &expect_num);
        assert_eq!(s.den(), &expect_den);
    }

    #[test]
    fn mul_by_zero_absorbs() {
        let a = RatFun::new(sym(0).add(&int(3)), sym(1).add(&int(1))).unwrap();
        assert!(a.mul(&RatFun::zero(2)).is_zero());
    }

    #[test]
    fn div_self_is_one() {
        let a = RatFun::new(sym(0).add(&int(3)), sym(1).add(&int(7))).unwrap();
        assert!(a.div(&a).unwrap().is_one());
        assert_eq!(RatFun::one(2).div(&RatFun::zero(2)), Err(CoreError::DivisionByZero));
    }

    #[test]
    fn shift_substitutes() {
        // x^2/(x+1) shifted by 1 on x -> (x+1)^2/(x+2)
        let x = sym(0);
        let f = RatFun::new(x.mul(&x), x.add(&int(1))).unwrap();
        let g = f.shift(0, 1);
        let xp1 = x.add(&int(1));
        assert_eq!(g.num(), &xp1.mul(&xp1));
        assert_eq!(g.den(), &x.add(&int(2)));
    }

    #[test]
    fn shift_fixes_parameters() {
        // symbols: 0 = n (index), 1 = d (parameter); shifting n leaves d alone
        let d = RatFun::symbol(1, 2);
        let dsq = d.mul(&d);
        assert_eq!(dsq.shift(0, 3), dsq);
    }

    #[test]
    fn shift_reciprocal_index() {
        // 1/n shifted by 2 -> 1/(n+2)
        let n = RatFun::symbol(0, 2);
        let f = RatFun::one(2).div(&n).unwrap();
        let g = f.shift(0, 2);
        assert_eq!(g.den(), &sym(0).add(&int(2)));
        assert!(g.num().is_one());
    }

    #[test]
    fn gcd_is_canonical() {
        // gcd(2x+2, 2) over Q is the unit, rendered as 1
        let g = poly_gcd(&sym(0).scale(&BigRat::from_integer(2.into())).add(&int(2)), &int(2));
        assert!(g.is_one());
        // gcd((x^2-1)*(y+1), (x-1)*(y+1)) = (x-1)*(y+1)
        let x = sym(0);
        let y = sym(1);
        let a = x.mul(&x).sub(&int(1)).mul(&y.add(&int(1)));
        let b = x.sub(&int(1)).mul(&y.add(&int(1)));
        let g = poly_gcd(&a, &b);
        assert_eq!(g, x.sub(&int(1)).mul(&y.add(&int(1))));
    }

    #[test]
    fn render_is_deterministic() {
        let f = RatFun::new(
            sym(0).scale(&BigRat::from_integer(2.into())).add(&int(1)),
            sym(0).mul(&sym(0)).add(&sym(0)),
        )
        .unwrap();
        assert_eq!(f.render(&["x", "y"]), "(2*x + 1)/(x^2 + x)");
        assert_eq!(RatFun::zero(2).render(&["x", "y"]), "0");
        let half = RatFun::constant(BigRat::new(1.into(), 2.into()), 2);
        assert_eq!(half.render(&["x", "y"]), "1/2");
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_poly() -> impl Strategy<Value = CoefPoly> {
            proptest::collection::vec(
                ((0u32..3, 0u32..2), -4i64..5),
                0..4,
            )
            .prop_map(|terms| {
                CoefPoly::from_terms(
                    2,
                    terms.into_iter().map(|((e0, e1), c)| {
                        (vec![e0, e1], BigRat::from_integer(c.into()))
                    }),
                )
            })
        }

        fn arb_ratfun() -> impl Strategy<Value = RatFun> {
            (arb_poly(), arb_poly()).prop_filter_map("zero denominator", |(n, d)| {
                if d.is_zero() {
                    None
                } else {
                    Some(RatFun::new(n, d).unwrap())
                }
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn field_axioms(a in arb_ratfun(), b in arb_ratfun(), c in arb_ratfun()) {
                prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
                prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
                prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
                prop_assert!(a.add(&a.neg()).is_zero());
                if !a.is_zero() {
                    prop_assert!(a.mul(&a.recip().unwrap()).is_one());
                }
            }

            #[test]
            fn shift_is_a_homomorphism(a in arb_ratfun(), b in arb_ratfun(), k in -3i64..4) {
                prop_assert_eq!(a.add(&b).shift(0, k), a.shift(0, k).add(&b.shift(0, k)));
                prop_assert_eq!(a.mul(&b).shift(0, k), a.shift(0, k).mul(&b.shift(0, k)));
            }

            #[test]
            fn shifts_compose_and_commute(a in arb_ratfun(), k1 in -3i64..4, k2 in -3i64..4) {
                prop_assert_eq!(a.shift(0, k1 + k2), a.shift(0, k1).shift(0, k2));
                prop_assert_eq!(a.shift(0, k1).shift(1, k2), a.shift(1, k2).shift(0, k1));
            }

            #[test]
            fn gcd_divides_both(a in arb_poly(), b in arb_poly()) {
                let g = poly_gcd(&a, &b);
                if !g.is_zero() {
                    prop_assert!(a.exact_div(&g).is_some());
                    prop_assert!(b.exact_div(&g).is_some());
                }
            }

            #[test]
            fn equal_fractions_have_equal_forms(a in arb_ratfun(), m in arb_poly()) {
                if !m.is_zero() && !a.is_zero() {
                    let num = a.num().mul(&m);
                    let den = a.den().mul(&m);
                    prop_assert_eq!(RatFun::new(num, den).unwrap(), a);
                }
            }
        }
    }
}
