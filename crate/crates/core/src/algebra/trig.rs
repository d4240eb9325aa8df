//! Real trigonometric polynomials in a flow parameter `t` with polynomial coefficients.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::{rat, Poly, Rational};

/// `c_0(u) + Σ_{k≥1} a_k(u) cos(kt) + b_k(u) sin(kt)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrigPoly {
    nvars: usize,
    /// `k -> (cos coefficient, sin coefficient)`; the sine part of mode 0 is always zero.
    modes: BTreeMap<u32, (Poly, Poly)>,
}

impl TrigPoly {
    pub fn zero(nvars: usize) -> Self {
        TrigPoly { nvars, modes: BTreeMap::new() }
    }

    pub fn constant(c: Poly) -> Self {
        let mut t = TrigPoly::zero(c.nvars());
        t.push(0, c, Poly::zero(0));
        t
    }

    pub fn cos(k: u32, c: Poly) -> Self {
        let mut t = TrigPoly::zero(c.nvars());
        t.push(k, c, Poly::zero(0));
        t
    }

    pub fn sin(k: u32, c: Poly) -> Self {
        let mut t = TrigPoly::zero(c.nvars());
        if k > 0 {
            t.push(k, Poly::zero(0), c);
        }
        t
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn modes(&self) -> impl Iterator<Item = (u32, &Poly, &Poly)> {
        self.modes.iter().map(|(k, (c, s))| (*k, c, s))
    }

    pub fn max_frequency(&self) -> u32 {
        self.modes.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty()
    }

    fn push(&mut self, k: u32, c: Poly, s: Poly) {
        let n = self.nvars.max(c.nvars()).max(s.nvars());
        if n > self.nvars {
            self.nvars = n;
        }
        let entry = self.modes.entry(k).or_insert_with(|| (Poly::zero(n), Poly::zero(n)));
        entry.0 += &c;
        if k > 0 {
            entry.1 += &s;
        }
        if entry.0.is_zero() && entry.1.is_zero() {
            self.modes.remove(&k);
        }
    }

    /// Multiplies every coefficient by a polynomial.
    pub fn mul_poly(&self, p: &Poly) -> TrigPoly {
        let mut out = TrigPoly::zero(self.nvars.max(p.nvars()));
        for (k, (c, s)) in &self.modes {
            out.push(*k, c * p, s * p);
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> TrigPoly {
        let mut out = TrigPoly::zero(self.nvars);
        for (k, (c, s)) in &self.modes {
            out.push(*k, c.scale(r), s.scale(r));
        }
        out
    }

    pub fn pow(&self, e: u32) -> TrigPoly {
        let mut acc = TrigPoly::constant(Poly::one(self.nvars));
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Mean over one period: the constant mode.
    pub fn mean(&self) -> Poly {
        self.modes.get(&0).map(|(c, _)| c.clone()).unwrap_or_else(|| Poly::zero(self.nvars))
    }

    /// `-(1/2π) ∫_0^{2π} (t - π) g(t) dt = Σ_k b_k / k`.
    pub fn weighted_mean(&self) -> Poly {
        let mut acc = Poly::zero(self.nvars);
        for (k, (_, s)) in &self.modes {
            if *k > 0 {
                acc += &s.scale(&rat(1, *k as i64));
            }
        }
        acc
    }

    /// Value at `t = 0` (equivalently at `t = 2π`).
    pub fn at_zero(&self) -> Poly {
        let mut acc = Poly::zero(self.nvars);
        for (c, _) in self.modes.values() {
            acc += c;
        }
        acc
    }

    /// Derivative in `t`.
    pub fn dt(&self) -> TrigPoly {
        let mut out = TrigPoly::zero(self.nvars);
        for (k, (c, s)) in &self.modes {
            if *k == 0 {
                continue;
            }
            let kk = Rational::from_integer((*k).into());
            out.push(*k, s.scale(&kk), c.scale(&-kk));
        }
        out
    }

    pub fn eval_f64(&self, t: f64, point: &[f64]) -> f64 {
        self.modes
            .iter()
            .map(|(k, (c, s))| {
                let kt = *k as f64 * t;
                c.eval_f64(point) * kt.cos() + if s.is_zero() { 0.0 } else { s.eval_f64(point) * kt.sin() }
            })
            .sum()
    }

    /// Coefficient polynomial obtained by fixing `t` where `cos(kt), sin(kt)` are given exactly.
    pub fn eval_exact_angle<F: Fn(u32) -> (Rational, Rational)>(&self, cs: F) -> Poly {
        let mut acc = Poly::zero(self.nvars);
        for (k, (c, s)) in &self.modes {
            let (ck, sk) = cs(*k);
            if !ck.is_zero() {
                acc += &c.scale(&ck);
            }
            if !sk.is_zero() {
                acc += &s.scale(&sk);
            }
        }
        acc
    }
}

impl Add for &TrigPoly {
    type Output = TrigPoly;
    fn add(self, rhs: &TrigPoly) -> TrigPoly {
        let mut out = self.clone();
        for (k, (c, s)) in &rhs.modes {
            out.push(*k, c.clone(), s.clone());
        }
        out
    }
}

impl Sub for &TrigPoly {
    type Output = TrigPoly;
    fn sub(self, rhs: &TrigPoly) -> TrigPoly {
        self + &(-rhs)
    }
}

impl Neg for &TrigPoly {
    type Output = TrigPoly;
    fn neg(self) -> TrigPoly {
        let mut out = TrigPoly::zero(self.nvars);
        for (k, (c, s)) in &self.modes {
            out.push(*k, -c, -s);
        }
        out
    }
}

impl Mul for &TrigPoly {
    type Output = TrigPoly;
    fn mul(self, rhs: &TrigPoly) -> TrigPoly {
        let n = self.nvars.max(rhs.nvars);
        let mut out = TrigPoly::zero(n);
        let half = rat(1, 2);
        for (&a, (ca, sa)) in &self.modes {
            for (&b, (cb, sb)) in &rhs.modes {
                let sum = a + b;
                let diff = a.abs_diff(b);
                // sign of sin((a - b)t) relative to sin(|a - b|t)
                let dsign = if a >= b { half.clone() } else { -half.clone() };
                if !ca.is_zero() && !cb.is_zero() {
                    let p = (ca * cb).scale(&half);
                    out.push(sum, p.clone(), Poly::zero(n));
                    out.push(diff, p, Poly::zero(n));
                }
                if !sa.is_zero() && !sb.is_zero() {
                    let p = (sa * sb).scale(&half);
                    out.push(diff, p.clone(), Poly::zero(n));
                    out.push(sum, -&p, Poly::zero(n));
                }
                if !sa.is_zero() && !cb.is_zero() {
                    // sin a cos b = ½[sin(a+b) + sin(a−b)]
                    let p = sa * cb;
                    out.push(sum, Poly::zero(n), p.scale(&half));
                    out.push(diff, Poly::zero(n), p.scale(&dsign));
                }
                if !ca.is_zero() && !sb.is_zero() {
                    // cos a sin b = ½[sin(a+b) − sin(a−b)]
                    let p = ca * sb;
                    out.push(sum, Poly::zero(n), p.scale(&half));
                    out.push(diff, Poly::zero(n), p.scale(&-dsign.clone()));
                }
            }
        }
        out
    }
}
