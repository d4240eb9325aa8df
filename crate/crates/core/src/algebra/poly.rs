//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;

/// Exponent vector of a monomial. Entry `i` is the power of coordinate `i`.
pub type Monomial = Vec<u32>;

/// A polynomial in `nvars` coordinates.
///
/// Terms live in a `BTreeMap` keyed by exponent vectors; the lexicographic
/// key order is also the monomial order used for division, so the last
/// entry is the leading term. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

fn pad(m: &[u32], n: usize) -> Monomial {
    let mut v = m.to_vec();
    v.resize(n, 0);
    v
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(Rational::one(), nvars)
    }

    pub fn constant(c: Rational, nvars: usize) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn from_int(c: i64, nvars: usize) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(c)), nvars)
    }

    /// The coordinate function `u_var`.
    pub fn var(var: usize, nvars: usize) -> Self {
        assert!(var < nvars, "variable {var} out of range for {nvars} coordinates");
        let mut e = vec![0; nvars];
        e[var] = 1;
        Self::monomial(Rational::one(), e)
    }

    pub fn monomial(c: Rational, exps: Monomial) -> Self {
        let nvars = exps.len();
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs, summing repeats.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Rational, Monomial)>,
    {
        let mut p = Self::zero(nvars);
        for (c, e) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length must equal the variable count");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Constant value if the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        let key = pad(exps, self.nvars);
        self.terms.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e.get(var).copied().unwrap_or(0)).max().unwrap_or(0)
    }

    /// Variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.degree_in(v) > 0).collect()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Re-embeds into a ring with at least `n` variables.
    pub fn with_nvars(&self, n: usize) -> Poly {
        if n == self.nvars {
            return self.clone();
        }
        assert!(n >= self.nvars || self.support().iter().all(|&v| v < n), "cannot drop used variables");
        let terms = self.terms.iter().map(|(e, c)| (pad(e, n), c.clone())).collect();
        Poly { nvars: n, terms }
    }

    fn add_term(&mut self, e: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn aligned(a: &Poly, b: &Poly) -> (Poly, Poly) {
        let n = a.nvars.max(b.nvars);
        (a.with_nvars(n), b.with_nvars(n))
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect();
        Poly { nvars: self.nvars, terms }
    }

    pub fn mul_monomial(&self, exps: &[u32], c: &Rational) -> Poly {
        let n = self.nvars.max(exps.len());
        let mut out = Poly::zero(n);
        if c.is_zero() {
            return out;
        }
        for (e, x) in &self.terms {
            let mut k = pad(e, n);
            for (i, p) in exps.iter().enumerate() {
                k[i] += p;
            }
            out.terms.insert(k, x * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        if var >= self.nvars {
            return out;
        }
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut k = e.clone();
            k[var] -= 1;
            out.add_term(k, c * Rational::from_integer(BigInt::from(e[var])));
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &p) in e.iter().enumerate() {
                if p > 0 {
                    t *= num_traits::pow(point[i].clone(), p as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = rational_to_f64(c);
                for (i, &p) in e.iter().enumerate() {
                    if p > 0 {
                        t *= point[i].powi(p as i32);
                    }
                }
                t
            })
            .sum()
    }

    /// Substitutes `u_var = value`.
    pub fn substitute_value(&self, var: usize, value: &Rational) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut k = e.clone();
            let p = k[var];
            k[var] = 0;
            out.add_term(k, c * num_traits::pow(value.clone(), p as usize));
        }
        out
    }

    /// Substitutes every variable by a polynomial (all in a common ring).
    pub fn compose(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars);
        let n = images.iter().map(|p| p.nvars).max().unwrap_or(0);
        let mut out = Poly::zero(n);
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(n), p.with_nvars(n)]).collect();
        for (e, c) in &self.terms {
            let mut t = Poly::constant(c.clone(), n);
            for (i, &p) in e.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                while powers[i].len() <= p as usize {
                    let next = powers[i].last().unwrap() * &powers[i][1];
                    powers[i].push(next);
                }
                t = &t * &powers[i][p as usize];
            }
            out += &t;
        }
        out
    }

    /// Exact quotient `self / d` if `d` divides `self`, else `None`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero(self.nvars.max(d.nvars)));
        }
        let (mut rem, d) = Self::aligned(self, d);
        if let Some(c) = d.as_constant() {
            return Some(rem.scale(&c.recip()));
        }
        let (lm, lc) = d.leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let lcinv = lc.recip();
        let mut quot = Poly::zero(rem.nvars);
        while let Some((m, c)) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            if m.iter().zip(&lm).any(|(a, b)| a < b) {
                return None;
            }
            let q: Monomial = m.iter().zip(&lm).map(|(a, b)| a - b).collect();
            let qc = &c * &lcinv;
            rem -= &d.mul_monomial(&q, &qc);
            quot.add_term(q, qc);
        }
        Some(quot)
    }

    /// Leading coefficient under the term order, or zero.
    pub fn leading_coefficient(&self) -> Rational {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| {
                    let name = names.get(i).cloned().unwrap_or_else(|| format!("u{i}"));
                    if p == 1 {
                        name
                    } else {
                        format!("{name}^{p}")
                    }
                })
                .collect();
            if mono.is_empty() {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&mono.join("*"));
            } else {
                out.push_str(&format!("{}*{}", a, mono.join("*")));
            }
        }
        out
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Huge numerators or denominators: scale down both by the same power of two.
        let n = r.numer();
        let d = r.denom();
        let shift = (n.bits().max(d.bits())).saturating_sub(1000);
        let n = (n >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (d >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        if rhs.nvars > self.nvars {
            *self = self.with_nvars(rhs.nvars);
        }
        let n = self.nvars;
        for (e, c) in &rhs.terms {
            let k = if e.len() == n { e.clone() } else { pad(e, n) };
            self.add_term(k, c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        if rhs.nvars > self.nvars {
            *self = self.with_nvars(rhs.nvars);
        }
        let n = self.nvars;
        for (e, c) in &rhs.terms {
            let k = if e.len() == n { e.clone() } else { pad(e, n) };
            self.add_term(k, -c.clone());
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect();
        Poly { nvars: self.nvars, terms }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let n = self.nvars.max(rhs.nvars);
        let mut out = Poly::zero(n);
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut k = vec![0u32; n];
                for (i, p) in ea.iter().enumerate() {
                    k[i] += p;
                }
                for (i, p) in eb.iter().enumerate() {
                    k[i] += p;
                }
                out.add_term(k, ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}
