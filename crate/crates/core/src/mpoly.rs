//! Sparse multivariate polynomials over arbitrary-precision integers.
//!
//! Terms are keyed by exponent tuples in a fixed number of variables; no
//! zero coefficient is ever stored. The gcd is the classical primitive
//! pseudo-remainder sequence in a selected variable with content
//! recursion, adequate at desk scale and fully exact.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Exponents = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Exponents, BigInt>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        Self { nvars, terms }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars);
        let mut exps = vec![0; nvars];
        exps[index] = 1;
        Self::monomial(nvars, exps, BigInt::one())
    }

    pub fn monomial(nvars: usize, exps: Exponents, coeff: BigInt) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exps, coeff);
        }
        Self { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Maximal total degree, or None for the zero polynomial.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// The common total degree if every term has the same one.
    pub fn homogeneous_degree(&self) -> Option<u64> {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u64>());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn degree_in(&self, var: usize) -> u64 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(e.clone()).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        Self {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut terms: BTreeMap<Exponents, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let entry = terms.entry(e).or_insert_with(BigInt::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Self {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn mul_scalar(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, exponent: u64) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Substitutes one polynomial per variable.
    pub fn substitute(&self, args: &[MPoly]) -> Self {
        assert_eq!(args.len(), self.nvars);
        let out_vars = args.first().map_or(0, |a| a.nvars);
        let mut max_exp = vec![0u64; self.nvars];
        for e in self.terms.keys() {
            for (i, &x) in e.iter().enumerate() {
                max_exp[i] = max_exp[i].max(x);
            }
        }
        // incremental tables pay off for dense arguments at small degree;
        // huge exponents (monomial iterates) need binary powering instead
        let mut tables: Vec<Option<Vec<MPoly>>> = Vec::with_capacity(self.nvars);
        for (i, arg) in args.iter().enumerate() {
            if max_exp[i] <= 64 {
                let mut table = vec![MPoly::one(out_vars)];
                for _ in 0..max_exp[i] {
                    let next = table.last().unwrap().mul(arg);
                    table.push(next);
                }
                tables.push(Some(table));
            } else {
                tables.push(None);
            }
        }
        let mut memo: BTreeMap<(usize, u64), MPoly> = BTreeMap::new();
        let mut acc = MPoly::zero(out_vars);
        for (e, c) in &self.terms {
            let mut term = MPoly::constant(out_vars, c.clone());
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let factor = match &tables[i] {
                    Some(table) => table[x as usize].clone(),
                    None => memo.entry((i, x)).or_insert_with(|| args[i].pow(x)).clone(),
                };
                term = term.mul(&factor);
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Exact evaluation at an integer point.
    pub fn eval_int(&self, point: &[BigInt]) -> BigInt {
        assert_eq!(point.len(), self.nvars);
        let mut max_exp = vec![0u64; self.nvars];
        for e in self.terms.keys() {
            for (i, &x) in e.iter().enumerate() {
                max_exp[i] = max_exp[i].max(x);
            }
        }
        let mut powers: Vec<Vec<BigInt>> = Vec::with_capacity(self.nvars);
        for (i, v) in point.iter().enumerate() {
            let mut table = vec![BigInt::one()];
            for _ in 0..max_exp[i] {
                let next = table.last().unwrap() * v;
                table.push(next);
            }
            powers.push(table);
        }
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    term *= &powers[i][x as usize];
                }
            }
            acc += term;
        }
        acc
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, point: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = BigRational::from_integer(c.clone());
            for (i, &x) in e.iter().enumerate() {
                for _ in 0..x {
                    term *= &point[i];
                }
            }
            acc += term;
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut terms: BTreeMap<Exponents, BigInt> = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[var] -= 1;
            let coeff = c * BigInt::from(e[var]);
            let entry = terms.entry(ne).or_insert_with(BigInt::zero);
            *entry += coeff;
        }
        terms.retain(|_, c| !c.is_zero());
        Self {
            nvars: self.nvars,
            terms,
        }
    }

    /// Gcd of all coefficients, nonnegative.
    pub fn integer_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides every coefficient by the (nonzero) scalar; panics if any
    /// division is inexact.
    pub fn div_scalar_exact(&self, c: &BigInt) -> Self {
        assert!(!c.is_zero());
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| {
                    let (q, r) = v.div_rem(c);
                    assert!(r.is_zero(), "inexact scalar division in polynomial");
                    (e.clone(), q)
                })
                .collect(),
        }
    }

    /// The coefficient of `var^power`, as a polynomial with that variable
    /// zeroed out.
    pub fn coeff_of_power(&self, var: usize, power: u64) -> Self {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[var] == power {
                let mut ne = e.clone();
                ne[var] = 0;
                terms.insert(ne, c.clone());
            }
        }
        Self {
            nvars: self.nvars,
            terms,
        }
    }

    fn mul_var_power(&self, var: usize, power: u64) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut ne = e.clone();
                    ne[var] += power;
                    (ne, c.clone())
                })
                .collect(),
        }
    }

    fn leading_coeff_in(&self, var: usize) -> Self {
        self.coeff_of_power(var, self.degree_in(var))
    }

    /// Content with respect to one variable: the gcd of the coefficient
    /// polynomials, taken over the degrees actually present.
    fn content_in(&self, var: usize) -> Self {
        let mut degrees: Vec<u64> = self.terms.keys().map(|e| e[var]).collect();
        degrees.sort_unstable();
        degrees.dedup();
        let mut g = Self::zero(self.nvars);
        for d in degrees {
            g = gcd(&g, &self.coeff_of_power(var, d));
            if g.is_constant() && g.integer_content().is_one() {
                break;
            }
        }
        g
    }

    /// Exact division by a known divisor using lexicographic long division.
    /// Returns None if the division is not exact.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        assert_eq!(self.nvars, divisor.nvars);
        assert!(!divisor.is_zero());
        let (lead_e, lead_c) = divisor.terms.iter().next_back()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while !rem.is_zero() {
            let (re, rc) = rem
                .terms
                .iter()
                .next_back()
                .map(|(e, c)| (e.clone(), c.clone()))?;
            if re.iter().zip(lead_e).any(|(a, b)| a < b) {
                return None;
            }
            let (qc, qr) = rc.div_rem(lead_c);
            if !qr.is_zero() {
                return None;
            }
            let qe: Exponents = re.iter().zip(lead_e).map(|(a, b)| a - b).collect();
            let qterm = Self::monomial(self.nvars, qe, qc);
            rem = rem.sub(&qterm.mul(divisor));
            quot = quot.add(&qterm);
        }
        Some(quot)
    }

    /// Coefficient of the lexicographically greatest term, if any.
    pub fn lex_leading_coeff(&self) -> Option<&BigInt> {
        self.terms.iter().next_back().map(|(_, c)| c)
    }

    /// Lexicographically leading coefficient sign made positive.
    pub fn normalize_sign(&self) -> Self {
        match self.terms.iter().next_back() {
            Some((_, c)) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }
}

/// Pseudo-remainder of `a` by `b` in the chosen variable: repeatedly
/// cancels the leading term after scaling by the leading coefficient of
/// `b`; the result is `lc(b)^s a - q b` for some `s`, which preserves gcds
/// up to factors of `lc(b)` that the primitive parts strip out.
fn pseudo_rem(a: &MPoly, b: &MPoly, var: usize) -> MPoly {
    let db = b.degree_in(var);
    let lb = b.leading_coeff_in(var);
    let mut r = a.clone();
    while !r.is_zero() {
        let dr = r.degree_in(var);
        if dr < db {
            break;
        }
        let lr = r.leading_coeff_in(var);
        r = r.mul(&lb).sub(&lr.mul_var_power(var, dr - db).mul(b));
    }
    r
}

/// Multivariate gcd over Z, normalized to a positive leading coefficient.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    assert_eq!(a.nvars, b.nvars);
    if a.is_zero() {
        return b.normalize_sign();
    }
    if b.is_zero() {
        return a.normalize_sign();
    }
    if a.is_constant() || b.is_constant() {
        let g = a.integer_content().gcd(&b.integer_content());
        return MPoly::constant(a.nvars, g);
    }
    // main variable: both degrees positive, smallest maximum degree
    let mut var = None;
    let mut best = u64::MAX;
    for v in 0..a.nvars {
        let da = a.degree_in(v);
        let db = b.degree_in(v);
        if da > 0 && db > 0 {
            let m = da.max(db);
            if m < best {
                best = m;
                var = Some(v);
            }
        }
    }
    let Some(var) = var else {
        // no shared variable: only the integer contents can be shared
        let g = a.integer_content().gcd(&b.integer_content());
        return MPoly::constant(a.nvars, g);
    };

    let cont_a = a.content_in(var);
    let cont_b = b.content_in(var);
    let cont_gcd = gcd(&cont_a, &cont_b);
    let mut pa = a.exact_div(&cont_a).expect("content divides");
    let mut pb = b.exact_div(&cont_b).expect("content divides");
    if pa.degree_in(var) < pb.degree_in(var) {
        std::mem::swap(&mut pa, &mut pb);
    }
    loop {
        if pb.is_zero() {
            let pp = pa.exact_div(&pa.content_in(var)).expect("content divides");
            return cont_gcd.mul(&pp).normalize_sign();
        }
        if pb.degree_in(var) == 0 {
            // a nonzero degree-0 remainder: the primitive parts are coprime
            return cont_gcd.normalize_sign();
        }
        let r = pseudo_rem(&pa, &pb, var);
        pa = pb;
        pb = if r.is_zero() {
            r
        } else {
            let c = r.content_in(var);
            r.exact_div(&c).expect("content divides")
        };
    }
}

/// Gcd of a list of polynomials.
pub fn gcd_many(polys: &[MPoly]) -> MPoly {
    let mut acc = MPoly::zero(polys[0].nvars());
    for p in polys {
        acc = gcd(&acc, p);
        if acc.is_constant() && acc.integer_content().is_one() {
            break;
        }
    }
    acc
}
