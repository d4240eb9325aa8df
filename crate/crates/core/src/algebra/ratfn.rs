//! Rational functions with a factored denominator.
//!
//! The denominator is kept as a list of monic non-constant factors with
//! multiplicities. Sums take the least common multiple of the two factor
//! lists and every result tries to divide the numerator by each factor, so
//! cancellations that come from the construction (powers of one
//! determinant, say) are found without a polynomial gcd. Equality is
//! decided by cross-multiplication and never depends on the normal form.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Poly, Rational};
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct RationalFn {
    nvars: usize,
    num: Poly,
    den: Vec<(Poly, u32)>,
}

fn make_monic(p: &Poly) -> (Poly, Rational) {
    let lc = p.leading_coefficient();
    (p.scale(&lc.recip()), lc)
}

impl RationalFn {
    pub fn zero(nvars: usize) -> Self {
        RationalFn { nvars, num: Poly::zero(nvars), den: Vec::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(Poly::one(nvars))
    }

    pub fn constant(c: Rational, nvars: usize) -> Self {
        Self::from_poly(Poly::constant(c, nvars))
    }

    pub fn from_int(c: i64, nvars: usize) -> Self {
        Self::from_poly(Poly::from_int(c, nvars))
    }

    pub fn var(v: usize, nvars: usize) -> Self {
        Self::from_poly(Poly::var(v, nvars))
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFn { nvars: p.nvars(), num: p, den: Vec::new() }
    }

    /// `num / den`, rejecting the zero denominator.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = num.nvars().max(den.nvars());
        let num = num.with_nvars(n);
        let den = den.with_nvars(n);
        if let Some(c) = den.as_constant() {
            return Ok(Self::from_poly(num.scale(&c.recip())));
        }
        let (f, lc) = make_monic(&den);
        let mut r = RationalFn { nvars: n, num: num.scale(&lc.recip()), den: vec![(f, 1)] };
        r.reduce();
        Ok(r)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    /// Denominator factors with multiplicities.
    pub fn denominator_factors(&self) -> &[(Poly, u32)] {
        &self.den
    }

    /// The denominator as a single polynomial.
    pub fn denominator(&self) -> Poly {
        let mut d = Poly::one(self.nvars);
        for (f, e) in &self.den {
            d = &d * &f.pow(*e);
        }
        d
    }

    /// `1 / denominator`, keeping the factorization.
    pub fn reciprocal_denominator(&self) -> RationalFn {
        RationalFn { nvars: self.nvars, num: Poly::one(self.nvars), den: self.den.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        if self.den.is_empty() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn with_nvars(&self, n: usize) -> Self {
        if n == self.nvars {
            return self.clone();
        }
        RationalFn {
            nvars: n,
            num: self.num.with_nvars(n),
            den: self.den.iter().map(|(f, e)| (f.with_nvars(n), *e)).collect(),
        }
    }

    /// Total degree of numerator plus denominator.
    pub fn total_degree(&self) -> u32 {
        self.num.total_degree() + self.den.iter().map(|(f, e)| f.total_degree() * e).sum::<u32>()
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        for (f, e) in self.den.iter_mut() {
            while *e > 0 {
                match self.num.div_exact(f) {
                    Some(q) => {
                        self.num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|(_, e)| *e > 0);
    }

    fn exponent_of(&self, f: &Poly) -> u32 {
        self.den.iter().find(|(g, _)| g == f).map(|(_, e)| *e).unwrap_or(0)
    }

    fn lcm_factors(a: &RationalFn, b: &RationalFn) -> Vec<(Poly, u32)> {
        let mut out = a.den.clone();
        for (f, e) in &b.den {
            match out.iter_mut().find(|(g, _)| g == f) {
                Some((_, ea)) => *ea = (*ea).max(*e),
                None => out.push((f.clone(), *e)),
            }
        }
        out
    }

    /// Numerator of `self` rewritten over the denominator `l`.
    fn lifted_numerator(&self, l: &[(Poly, u32)]) -> Poly {
        let mut p = self.num.clone();
        for (f, e) in l {
            let k = e - self.exponent_of(f);
            if k > 0 {
                p = &p * &f.pow(k);
            }
        }
        p
    }

    fn combine(a: &RationalFn, b: &RationalFn, sub: bool) -> RationalFn {
        let n = a.nvars.max(b.nvars);
        let (a, b) = (a.with_nvars(n), b.with_nvars(n));
        if b.is_zero() {
            return a;
        }
        if a.is_zero() {
            return if sub { -&b } else { b };
        }
        let l = Self::lcm_factors(&a, &b);
        let pa = a.lifted_numerator(&l);
        let pb = b.lifted_numerator(&l);
        let num = if sub { &pa - &pb } else { &pa + &pb };
        let mut r = RationalFn { nvars: n, num, den: l };
        r.reduce();
        r
    }

    pub fn scale(&self, c: &Rational) -> RationalFn {
        if c.is_zero() {
            return RationalFn::zero(self.nvars);
        }
        RationalFn { nvars: self.nvars, num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul_poly(&self, p: &Poly) -> RationalFn {
        self * &RationalFn::from_poly(p.clone())
    }

    pub fn recip(&self) -> Result<RationalFn> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let num = self.denominator();
        RationalFn::new(num, self.num.clone())
    }

    pub fn checked_div(&self, other: &RationalFn) -> Result<RationalFn> {
        Ok(self * &other.recip()?)
    }

    pub fn pow(&self, k: u32) -> RationalFn {
        let mut r = RationalFn {
            nvars: self.nvars,
            num: self.num.pow(k),
            den: self.den.iter().map(|(f, e)| (f.clone(), e * k)).collect(),
        };
        if k == 0 {
            r.den.clear();
        }
        r
    }

    pub fn derivative(&self, var: usize) -> RationalFn {
        if self.den.is_empty() {
            return RationalFn::from_poly(self.num.derivative(var));
        }
        // d(N / prod f^e) = (N' prod f - N sum e f' prod_{other} f) / (prod f^(e+1))
        let fs: Vec<&Poly> = self.den.iter().map(|(f, _)| f).collect();
        let mut prod_all = Poly::one(self.nvars);
        for f in &fs {
            prod_all = &prod_all * f;
        }
        let mut num = &self.num.derivative(var) * &prod_all;
        for (i, (f, e)) in self.den.iter().enumerate() {
            let df = f.derivative(var);
            if df.is_zero() {
                continue;
            }
            let mut t = self.num.mul_monomial(&[], &Rational::from_integer((*e).into()));
            t = &t * &df;
            for (j, g) in fs.iter().enumerate() {
                if j != i {
                    t = &t * g;
                }
            }
            num = &num - &t;
        }
        let den = self.den.iter().map(|(f, e)| (f.clone(), e + 1)).collect();
        let mut r = RationalFn { nvars: self.nvars, num, den };
        r.reduce();
        r
    }

    /// Value at an exact point; `None` on a pole.
    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        let mut d = Rational::one();
        for (f, e) in &self.den {
            d *= num_traits::pow(f.eval(point), *e as usize);
        }
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point) / d)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        let mut d = 1.0;
        for (f, e) in &self.den {
            d *= f.eval_f64(point).powi(*e as i32);
        }
        self.num.eval_f64(point) / d
    }

    /// Denominator value at a point, zero on a pole.
    pub fn denominator_at(&self, point: &[Rational]) -> Rational {
        let mut d = Rational::one();
        for (f, e) in &self.den {
            d *= num_traits::pow(f.eval(point), *e as usize);
        }
        d
    }

    /// Substitutes `u_var = value`; fails if the denominator vanishes identically.
    pub fn substitute_value(&self, var: usize, value: &Rational) -> Result<RationalFn> {
        let mut r = RationalFn::from_poly(self.num.substitute_value(var, value));
        for (f, e) in &self.den {
            let g = f.substitute_value(var, value);
            if g.is_zero() {
                return Err(Error::DivisionByZero);
            }
            let q = RationalFn::new(Poly::one(self.nvars), g)?;
            r = &r * &q.pow(*e);
        }
        Ok(r)
    }

    /// Applies `f` to the numerator and every denominator factor.
    pub fn map_polys<F: Fn(&Poly) -> Poly>(&self, f: F) -> Result<RationalFn> {
        let mut r = RationalFn::from_poly(f(&self.num));
        for (g, e) in &self.den {
            let q = RationalFn::new(Poly::one(self.nvars), f(g))?;
            r = &r * &q.pow(*e);
        }
        Ok(r)
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.den.is_empty() {
            return self.num.display_with(names);
        }
        format!("({})/({})", self.num.display_with(names), self.denominator().display_with(names))
    }
}

impl PartialEq for RationalFn {
    fn eq(&self, other: &Self) -> bool {
        let n = self.nvars.max(other.nvars);
        let (a, b) = (self.with_nvars(n), other.with_nvars(n));
        if a.den.is_empty() && b.den.is_empty() {
            return a.num == b.num;
        }
        let l = Self::lcm_factors(&a, &b);
        a.lifted_numerator(&l) == b.lifted_numerator(&l)
    }
}

impl Eq for RationalFn {}

impl From<Poly> for RationalFn {
    fn from(p: Poly) -> Self {
        RationalFn::from_poly(p)
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

impl Add for &RationalFn {
    type Output = RationalFn;
    fn add(self, rhs: &RationalFn) -> RationalFn {
        RationalFn::combine(self, rhs, false)
    }
}

impl Sub for &RationalFn {
    type Output = RationalFn;
    fn sub(self, rhs: &RationalFn) -> RationalFn {
        RationalFn::combine(self, rhs, true)
    }
}

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn { nvars: self.nvars, num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        -&self
    }
}

impl Mul for &RationalFn {
    type Output = RationalFn;
    fn mul(self, rhs: &RationalFn) -> RationalFn {
        let n = self.nvars.max(rhs.nvars);
        if self.is_zero() || rhs.is_zero() {
            return RationalFn::zero(n);
        }
        let (a, b) = (self.with_nvars(n), rhs.with_nvars(n));
        if a.den.is_empty() && b.den.is_empty() {
            return RationalFn::from_poly(&a.num * &b.num);
        }
        // Cancel each numerator against the other's factors before multiplying.
        let mut na = a.num.clone();
        let mut nb = b.num.clone();
        let mut den = Vec::new();
        let mut merged = a.den.clone();
        for (f, e) in &b.den {
            match merged.iter_mut().find(|(g, _)| g == f) {
                Some((_, ea)) => *ea += e,
                None => merged.push((f.clone(), *e)),
            }
        }
        for (f, mut e) in merged {
            for side in [&mut na, &mut nb] {
                while e > 0 && side.total_degree() >= f.total_degree() {
                    match side.div_exact(&f) {
                        Some(q) => {
                            *side = q;
                            e -= 1;
                        }
                        None => break,
                    }
                }
            }
            if e > 0 {
                den.push((f, e));
            }
        }
        RationalFn { nvars: n, num: &na * &nb, den }
    }
}

impl Div for &RationalFn {
    type Output = RationalFn;
    /// Panics on division by zero; use [`RationalFn::checked_div`] to handle it.
    fn div(self, rhs: &RationalFn) -> RationalFn {
        self.checked_div(rhs).expect("division by the zero rational function")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalFn {
            type Output = RationalFn;
            fn $m(self, rhs: RationalFn) -> RationalFn {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn x() -> Poly {
        Poly::var(0, 2)
    }

    #[test]
    fn cross_multiplication_equality() {
        let one = Poly::one(2);
        let a = RationalFn::new(&(&x() * &x()) - &one, &x() - &one).unwrap();
        let b = RationalFn::from_poly(&x() + &one);
        assert_eq!(a, b);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let p = [rat(rng.gen_range(-50..50), rng.gen_range(1..20)), rat(rng.gen_range(-50..50), 7)];
            if let Some(v) = a.eval(&p) {
                assert_eq!(v, b.eval(&p).unwrap());
            }
        }
    }

    #[test]
    fn zero_denominator_is_rejected() {
        assert_eq!(RationalFn::new(x(), Poly::zero(2)).unwrap_err(), Error::DivisionByZero);
        assert!(RationalFn::zero(2).recip().is_err());
    }

    #[test]
    fn reciprocal_derivative() {
        let f = RationalFn::new(Poly::one(2), x()).unwrap();
        let expected = RationalFn::new(Poly::from_int(-1, 2), &x() * &x()).unwrap();
        assert_eq!(f.derivative(0), expected);
    }

    #[test]
    fn field_inverse() {
        let y = Poly::var(1, 2);
        let a = RationalFn::new(&x() + &y, &(&x() * &y) + &Poly::one(2)).unwrap();
        let prod = &a * &a.recip().unwrap();
        assert_eq!(prod, RationalFn::one(2));
        assert!(prod.is_poly());
    }

    #[test]
    fn sums_share_denominators() {
        let d = &x() + &Poly::one(2);
        let a = RationalFn::new(Poly::one(2), d.clone()).unwrap();
        let b = &(&a * &a) * &RationalFn::from_poly(x());
        let s = &a + &b;
        assert_eq!(s.denominator_factors().len(), 1);
        assert_eq!(s.denominator_factors()[0].1, 2);
        let back = &s - &b;
        assert_eq!(back, a);
    }
}
