//! Storage shared by multivector fields and differential forms.

use std::collections::BTreeMap;

use crate::algebra::{RationalFn, Rational};

/// Largest tensor degree accepted from user input.
pub const MAX_DEGREE: usize = 4;

/// Sorts an index tuple, returning the sorted tuple and the permutation sign,
/// or `None` if an index repeats.
pub fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    // insertion sort counts transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// All strictly increasing `k`-tuples from `0..n`.
pub fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Sign of the shuffle that sorts `a ++ b`, or `None` when they overlap.
pub fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut joined = a.to_vec();
    joined.extend_from_slice(b);
    sort_with_sign(&joined)
}

/// Antisymmetric components keyed by strictly increasing index tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alt {
    pub(crate) dim: usize,
    pub(crate) degree: usize,
    pub(crate) comps: BTreeMap<Vec<usize>, RationalFn>,
}

impl Alt {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(degree <= dim, "degree {degree} exceeds dimension {dim}");
        Alt { dim, degree, comps: BTreeMap::new() }
    }

    pub fn get(&self, idx: &[usize]) -> RationalFn {
        assert_eq!(idx.len(), self.degree, "index arity must equal the degree");
        match sort_with_sign(idx) {
            None => RationalFn::zero(self.dim),
            Some((k, s)) => match self.comps.get(&k) {
                None => RationalFn::zero(self.dim),
                Some(v) if s > 0 => v.clone(),
                Some(v) => -v,
            },
        }
    }

    pub fn set(&mut self, idx: &[usize], v: RationalFn) {
        assert!(idx.iter().all(|&i| i < self.dim), "index out of range");
        let Some((k, s)) = sort_with_sign(idx) else {
            assert!(v.is_zero(), "nonzero value on a repeated index");
            return;
        };
        let v = if s > 0 { v } else { -v };
        if v.is_zero() {
            self.comps.remove(&k);
        } else {
            self.comps.insert(k, v.with_nvars(self.dim));
        }
    }

    pub fn add_at(&mut self, idx: &[usize], v: &RationalFn) {
        if v.is_zero() {
            return;
        }
        let Some((k, s)) = sort_with_sign(idx) else { return };
        let v = if s > 0 { v.clone() } else { -v };
        let next = match self.comps.get(&k) {
            Some(old) => old + &v,
            None => v.with_nvars(self.dim),
        };
        if next.is_zero() {
            self.comps.remove(&k);
        } else {
            self.comps.insert(k, next);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn combine(&self, o: &Alt, sub: bool) -> Alt {
        assert_eq!((self.dim, self.degree), (o.dim, o.degree), "shape mismatch");
        let mut out = self.clone();
        for (k, v) in &o.comps {
            if sub {
                out.add_at(k, &-v);
            } else {
                out.add_at(k, v);
            }
        }
        out
    }

    pub fn map<F: Fn(&RationalFn) -> RationalFn>(&self, f: F) -> Alt {
        let mut out = Alt::zero(self.dim, self.degree);
        for (k, v) in &self.comps {
            let w = f(v);
            if !w.is_zero() {
                out.comps.insert(k.clone(), w);
            }
        }
        out
    }

    pub fn try_map<E, F: Fn(&RationalFn) -> Result<RationalFn, E>>(&self, f: F) -> Result<Alt, E> {
        let mut out = Alt::zero(self.dim, self.degree);
        for (k, v) in &self.comps {
            let w = f(v)?;
            if !w.is_zero() {
                out.comps.insert(k.clone(), w);
            }
        }
        Ok(out)
    }

    pub fn wedge(&self, o: &Alt) -> Alt {
        assert_eq!(self.dim, o.dim);
        let mut out = Alt::zero(self.dim, self.degree + o.degree);
        for (a, va) in &self.comps {
            for (b, vb) in &o.comps {
                if let Some((k, s)) = merge_sign(a, b) {
                    let p = va * vb;
                    out.add_at(&k, &if s > 0 { p } else { -p });
                }
            }
        }
        out
    }

    /// Contraction of a degree-1 tensor `v` (given by components) into the first slot.
    pub fn contract_first(&self, v: &[RationalFn]) -> Alt {
        assert_eq!(v.len(), self.dim);
        assert!(self.degree >= 1);
        let mut out = Alt::zero(self.dim, self.degree - 1);
        for (k, c) in &self.comps {
            for (p, &i) in k.iter().enumerate() {
                if v[i].is_zero() {
                    continue;
                }
                let mut rest = k.clone();
                rest.remove(p);
                let t = &v[i] * c;
                out.add_at(&rest, &if p % 2 == 0 { t } else { -t });
            }
        }
        out
    }

    /// Exact component values at a point; `None` on a pole.
    pub fn eval(&self, point: &[Rational]) -> Option<BTreeMap<Vec<usize>, Rational>> {
        let mut out = BTreeMap::new();
        for (k, v) in &self.comps {
            out.insert(k.clone(), v.eval(point)?);
        }
        Some(out)
    }

    pub fn max_total_degree(&self) -> u32 {
        self.comps.values().map(|v| v.total_degree()).max().unwrap_or(0)
    }
}
