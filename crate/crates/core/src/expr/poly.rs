//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Variables are indices into an external table; every polynomial carries
//! its variable count. Terms are kept in a `BTreeMap` under graded
//! lexicographic order, so the leading term is the last entry.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into_boxed_slice())
    }

    pub fn var(nvars: usize, v: usize, e: u32) -> Self {
        let mut exps = vec![0; nvars];
        exps[v] = e;
        Monomial(exps.into_boxed_slice())
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps.into_boxed_slice())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            out.push(a.checked_sub(*b)?);
        }
        Some(Monomial(out.into_boxed_slice()))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.0)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}*{m:?}")?;
        }
        Ok(())
    }
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        Self::monomial(Monomial::var(nvars, v, 1), BigRational::one())
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        let mut p = Self::zero(m.0.len());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        match self.terms.len() {
            0 => true,
            1 => self.terms.keys().next().unwrap().is_one(),
            _ => false,
        }
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn lead_coeff(&self) -> BigRational {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.0[v] > 0)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(n, a)| (n.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut result = Poly::one(self.nvars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Gcd of all monomials occurring in the polynomial.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(self.nvars),
            Some(first) => it.fold(first.clone(), |acc, m| acc.gcd(m)),
        }
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<Poly> {
        let mut terms = BTreeMap::new();
        for (n, c) in &self.terms {
            terms.insert(n.div(m)?, c.clone());
        }
        Some(Poly {
            nvars: self.nvars,
            terms,
        })
    }

    /// Coefficient of `v^k`, as a polynomial free of `v`.
    pub fn coeff_of_power(&self, v: usize, k: u32) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.0[v] == k {
                let mut e = m.0.clone();
                e[v] = 0;
                out.terms.insert(Monomial(e), c.clone());
            }
        }
        out
    }

    /// Coefficients with respect to `v`, indexed by power.
    pub fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![Poly::zero(self.nvars); d + 1];
        for (m, c) in &self.terms {
            let k = m.0[v] as usize;
            let mut e = m.0.clone();
            e[v] = 0;
            out[k].terms.insert(Monomial(e), c.clone());
        }
        if self.is_zero() {
            out.clear();
        }
        out
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (lm, lc) = d.leading()?;
        if d.is_constant() {
            return Some(self.scale(&lc.recip()));
        }
        let (lm, lc_inv) = (lm.clone(), lc.recip());
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((m, c)) = rem.leading() {
            let qm = m.div(&lm)?;
            let qc = c * &lc_inv;
            for (dm, dc) in &d.terms {
                rem.add_term(dm.mul(&qm), -(dc * &qc));
            }
            quot.terms.insert(qm, qc);
        }
        Some(quot)
    }

    /// Content with respect to `v`: gcd of the coefficients of the powers of `v`.
    pub fn content_in(&self, v: usize) -> Poly {
        let mut coeffs = self.coeffs_in(v).into_iter().filter(|c| !c.is_zero());
        let Some(first) = coeffs.next() else {
            return Poly::zero(self.nvars);
        };
        let mut g = first.monic();
        for c in coeffs {
            if g.is_constant() {
                break;
            }
            g = gcd(&g, &c);
        }
        if g.is_constant() {
            Poly::one(self.nvars)
        } else {
            g
        }
    }

    fn primitive_in(&self, v: usize) -> Poly {
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides").monic()
    }

    /// Pseudo-remainder of `self` by `d` as polynomials in `v`.
    pub fn pseudo_rem(&self, d: &Poly, v: usize) -> Poly {
        let dd = d.degree_in(v);
        let ld = d.coeff_of_power(v, dd);
        let mut r = self.clone();
        while !r.is_zero() {
            let dr = r.degree_in(v);
            if dr < dd {
                break;
            }
            let lr = r.coeff_of_power(v, dr);
            let shift = Monomial::var(self.nvars, v, dr - dd);
            let lhs = &ld * &r;
            let rhs = &lr.mul_term(&shift, &BigRational::one()) * d;
            r = &lhs - &rhs;
        }
        r
    }

    /// Exact square root when `self` is the square of a polynomial.
    /// The result has a positive leading coefficient.
    pub fn sqrt(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let (lm, lc) = self.leading()?;
        let root_c = rational_sqrt(lc)?;
        let root_m = Monomial(lm.0.iter().map(|e| e / 2).collect());
        if root_m.0.iter().zip(lm.0.iter()).any(|(r, e)| 2 * r != *e) {
            return None;
        }
        let two_lead = (root_m.clone(), &root_c + &root_c);
        let mut root = Poly::monomial(root_m, root_c);
        let bound = self.len() + 1;
        for _ in 0..=bound * bound {
            let r = self - &(&root * &root);
            let Some((m, c)) = r.leading() else {
                return Some(root);
            };
            let tm = m.div(&two_lead.0)?;
            if tm >= two_lead.0 {
                return None;
            }
            let tc = c / &two_lead.1;
            root.add_term(tm, tc);
        }
        None
    }

    /// Re-index variables. `map[old] = Some(new)`; variables mapped to `None`
    /// must not occur.
    pub fn remap(&self, nvars: usize, map: &[Option<usize>]) -> Poly {
        let mut out = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; nvars];
            for (old, &k) in m.0.iter().enumerate() {
                if k > 0 {
                    let new = map[old].expect("remap drops a used variable");
                    e[new] += k;
                }
            }
            out.add_term(Monomial(e.into_boxed_slice()), c.clone());
        }
        out
    }

    /// Replace `v^k` by `v^(k/g)` (all exponents of `v` must be multiples of `g`).
    pub fn deflate_var(&self, v: usize, g: u32) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            debug_assert_eq!(e[v] % g, 0);
            e[v] /= g;
            out.terms.insert(Monomial(e), c.clone());
        }
        out
    }

    /// Substitute a polynomial for variable `v`.
    pub fn compose_var(&self, v: usize, value: &Poly) -> Poly {
        let coeffs = self.coeffs_in(v);
        let mut acc = Poly::zero(self.nvars);
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    /// Exponent gcd of `v` across all terms (0 when `v` does not occur).
    pub fn exponent_gcd(&self, v: usize) -> u32 {
        self.terms.keys().fold(0u32, |g, m| g.gcd(&m.0[v]))
    }
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = int_sqrt(q.numer())?;
    let d = int_sqrt(q.denom())?;
    Some(BigRational::new(n, d))
}

fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Greatest common divisor over Q, normalized to leading coefficient 1.
///
/// Recursive primitive polynomial remainder sequence: the main variable is
/// chosen among those occurring in both inputs, contents are taken
/// recursively in the remaining variables.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    let n = a.nvars;
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(n);
    }
    if a == b {
        return a.monic();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    if !ma.is_one() || !mb.is_one() {
        let a1 = a.div_monomial(&ma).unwrap();
        let b1 = b.div_monomial(&mb).unwrap();
        let g = gcd(&a1, &b1);
        return g.mul_term(&ma.gcd(&mb), &BigRational::one());
    }
    if coprime_mod_p(a, b) {
        return Poly::one(n);
    }
    if let Some(g) = heuristic_gcd(&integer_primitive(a), &integer_primitive(b), 0) {
        return if g.is_constant() {
            Poly::one(n)
        } else {
            g.monic()
        };
    }
    let (small, large) = if a.total_degree() <= b.total_degree() {
        (a, b)
    } else {
        (b, a)
    };
    if large.div_exact(small).is_some() {
        return small.monic();
    }

    let mut main = None;
    for v in 0..n {
        match (a.uses_var(v), b.uses_var(v)) {
            (true, false) => return gcd(&a.content_in(v), b),
            (false, true) => return gcd(a, &b.content_in(v)),
            (true, true) => {
                let d = a.degree_in(v).max(b.degree_in(v));
                if main.is_none_or(|(_, best)| d < best) {
                    main = Some((v, d));
                }
            }
            (false, false) => {}
        }
    }
    let (v, _) = main.expect("non-constant inputs share a variable");

    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let c = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).unwrap();
    let mut q = b.div_exact(&cb).unwrap();
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = p.pseudo_rem(&q, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            q = Poly::one(n);
            break;
        }
        p = q;
        q = r.primitive_in(v);
    }
    let g = if q.is_constant() {
        Poly::one(n)
    } else {
        q.primitive_in(v)
    };
    (&g * &c).monic()
}

const P: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, P - 2)
}

fn rational_mod(q: &BigRational) -> Option<u64> {
    let p = BigInt::from(P);
    let n = q.numer().mod_floor(&p);
    let d = q.denom().mod_floor(&p);
    let (n, d): (u64, u64) = (n.try_into().ok()?, d.try_into().ok()?);
    (d != 0).then(|| mul_mod(n, inv_mod(d)))
}

/// Image in `F_p[v]` after evaluating every other variable at `point`,
/// lowest power first.
fn univariate_image(a: &Poly, v: usize, point: &[u64]) -> Option<Vec<u64>> {
    let mut out = vec![0u64; a.degree_in(v) as usize + 1];
    for (m, c) in &a.terms {
        let mut t = rational_mod(c)?;
        for (u, &e) in m.0.iter().enumerate() {
            if u != v && e > 0 {
                t = mul_mod(t, pow_mod(point[u], e as u64));
            }
        }
        let k = m.0[v] as usize;
        out[k] = (out[k] + t) % P;
    }
    Some(out)
}

fn trim(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

/// Degree of the gcd of two univariate polynomials over `F_p`.
fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // a <- a mod b
        let lb_inv = inv_mod(*b.last().unwrap());
        while a.len() >= b.len() {
            let f = mul_mod(*a.last().unwrap(), lb_inv);
            let shift = a.len() - b.len();
            for (i, &c) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] + P - mul_mod(f, c)) % P;
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// Sufficient test for `gcd(a, b) = 1`. For every shared variable `v`,
/// the images at a point where both leading coefficients in `v` survive
/// must have a constant gcd mod p; a common factor of positive degree in
/// `v` would survive in the images.
fn coprime_mod_p(a: &Poly, b: &Poly) -> bool {
    let n = a.nvars;
    for v in (0..n).filter(|&v| a.uses_var(v) && b.uses_var(v)) {
        let (da, db) = (a.degree_in(v) as usize, b.degree_in(v) as usize);
        let mut proven = false;
        for attempt in 0..3u64 {
            let point: Vec<u64> = (0..n as u64)
                .map(|u| (u * 7919 + attempt * 104_729 + 12_345) % P + 2)
                .collect();
            let (Some(ia), Some(ib)) = (
                univariate_image(a, v, &point),
                univariate_image(b, v, &point),
            ) else {
                return false;
            };
            if ia[da] == 0 || ib[db] == 0 {
                continue;
            }
            if gcd_degree_mod(ia, ib) > 0 {
                return false;
            }
            proven = true;
            break;
        }
        if !proven {
            return false;
        }
    }
    true
}

/// `a` scaled to integer coefficients with content 1.
fn integer_primitive(a: &Poly) -> Poly {
    let l = a
        .terms
        .values()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let scaled: Vec<BigInt> = a
        .terms
        .values()
        .map(|c| c.numer() * (&l / c.denom()))
        .collect();
    let g = scaled.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let mut out = Poly::zero(a.nvars);
    for ((m, _), c) in a.terms.iter().zip(scaled) {
        out.terms
            .insert(m.clone(), BigRational::from_integer(c / &g));
    }
    out
}

fn max_norm(a: &Poly) -> BigInt {
    a.terms
        .values()
        .map(|c| c.numer().abs())
        .max()
        .unwrap_or_default()
}

fn integer_content(a: &Poly) -> BigInt {
    a.terms
        .values()
        .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()))
}

fn eval_var(a: &Poly, v: usize, xi: &BigInt) -> Poly {
    let mut out = Poly::zero(a.nvars);
    for (m, c) in &a.terms {
        let mut e = m.0.clone();
        let k = e[v];
        e[v] = 0;
        out.add_term(Monomial(e), c * BigRational::from_integer(xi.pow(k)));
    }
    out
}

/// Symmetric `xi`-adic expansion of `gamma` as a polynomial in `v`.
fn rebuild(gamma: &Poly, v: usize, xi: &BigInt, max_deg: u32) -> Option<Poly> {
    let half = xi / 2;
    let mut rest = gamma.clone();
    let mut out = Poly::zero(gamma.nvars);
    let mut k = 0u32;
    while !rest.is_zero() {
        if k > max_deg {
            return None;
        }
        let mut digit = Poly::zero(gamma.nvars);
        for (m, c) in &rest.terms {
            let mut d = c.numer().mod_floor(xi);
            if d > half {
                d -= xi;
            }
            if !d.is_zero() {
                digit.terms.insert(m.clone(), BigRational::from_integer(d));
            }
        }
        rest = &rest - &digit;
        rest = rest.scale(&BigRational::new(BigInt::one(), xi.clone()));
        out = &out + &digit.mul_term(&Monomial::var(gamma.nvars, v, k), &BigRational::one());
        k += 1;
    }
    Some(out)
}

/// Heuristic gcd of integer polynomials: evaluate one variable at a large
/// integer, recurse, rebuild the result and confirm by trial division.
/// `None` when the heuristic gives up.
fn heuristic_gcd(a: &Poly, b: &Poly, depth: usize) -> Option<Poly> {
    let n = a.nvars;
    let ca = integer_content(a);
    let cb = integer_content(b);
    let c = ca.gcd(&cb);
    let Some(v) = (0..n).find(|&v| a.uses_var(v) || b.uses_var(v)) else {
        return Some(Poly::constant(n, BigRational::from_integer(c)));
    };
    let a = a.scale(&BigRational::new(BigInt::one(), ca));
    let b = b.scale(&BigRational::new(BigInt::one(), cb));
    let max_deg = a.degree_in(v).max(b.degree_in(v));
    let mut xi = BigInt::from(2) * max_norm(&a).min(max_norm(&b)) + BigInt::from(29);
    for _ in 0..4 {
        if xi.bits() * (max_deg as u64 + 1) > 4000 || depth > 8 {
            return None;
        }
        let ea = eval_var(&a, v, &xi);
        let eb = eval_var(&b, v, &xi);
        if !ea.is_zero() && !eb.is_zero() {
            // an inner failure would only repeat with a larger point
            let gamma = heuristic_gcd(&ea, &eb, depth + 1)?;
            {
                if let Some(g) = rebuild(&gamma, v, &xi, max_deg) {
                    if !g.is_zero() {
                        let g = integer_primitive(&g);
                        if a.div_exact(&g).is_some() && b.div_exact(&g).is_some() {
                            return Some(g.scale(&BigRational::from_integer(c)));
                        }
                    }
                }
            }
        }
        xi = xi * BigInt::from(73_794) / BigInt::from(27_011);
    }
    None
}

/// Least common multiple, monic.
pub fn lcm(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero(a.nvars);
    }
    let g = gcd(a, b);
    (&a.div_exact(&g).unwrap() * b).monic()
}

impl ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (mut big, small) = if self.len() >= rhs.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    // x = var 0, y = var 1, z = var 2
    fn p(terms: &[(i64, [u32; 3])]) -> Poly {
        let mut out = Poly::zero(3);
        for (c, e) in terms {
            out.add_term(Monomial::from_exponents(e.to_vec()), q(*c));
        }
        out
    }

    #[test]
    fn gcd_of_products_recovers_common_factor() {
        let f = p(&[(1, [1, 0, 0]), (1, [0, 1, 0])]); // x + y
        let g = p(&[(1, [2, 0, 0]), (-3, [0, 0, 1])]); // x^2 - 3z
        let h = p(&[(2, [0, 1, 1]), (1, [0, 0, 0])]); // 2yz + 1
        let a = &(&f * &g) * &f;
        let b = &(&f * &h) * &g;
        let expect = (&(&f * &g)).monic();
        assert_eq!(gcd(&a, &b), expect);
    }

    #[test]
    fn gcd_coprime_is_one() {
        let a = p(&[(1, [2, 0, 0]), (1, [0, 2, 0]), (-1, [0, 0, 0])]);
        let b = p(&[(1, [1, 0, 0]), (-1, [0, 1, 0])]);
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn gcd_with_monomial_factors() {
        let a = p(&[(3, [2, 1, 0]), (6, [1, 2, 0])]); // 3xy(x + 2y)
        let b = p(&[(1, [1, 3, 0])]); // x y^3
        assert_eq!(gcd(&a, &b), p(&[(1, [1, 1, 0])]));
    }

    #[test]
    fn exact_division() {
        let f = p(&[(1, [1, 0, 0]), (2, [0, 1, 0])]);
        let g = p(&[(1, [1, 1, 0]), (-1, [0, 0, 1])]);
        let prod = &f * &g;
        assert_eq!(prod.div_exact(&f).unwrap(), g);
        assert!(prod
            .div_exact(&p(&[(1, [0, 0, 1]), (1, [0, 0, 0])]))
            .is_none());
    }

    #[test]
    fn square_roots() {
        let f = p(&[(1, [1, 0, 0]), (-2, [0, 1, 0]), (3, [0, 0, 0])]);
        let sq = &f * &f;
        let r = sq.sqrt().unwrap();
        assert!(r == f || r == -&f);
        let not_square = &sq + &Poly::one(3);
        assert!(not_square.sqrt().is_none());
    }

    #[test]
    fn compose_substitutes() {
        // (x + y)^2 with y := 1 - x  ->  1
        let f = p(&[(1, [1, 0, 0]), (1, [0, 1, 0])]).pow(2);
        let one_minus_x = p(&[(1, [0, 0, 0]), (-1, [1, 0, 0])]);
        assert!(f.compose_var(1, &one_minus_x).is_one());
    }
}
