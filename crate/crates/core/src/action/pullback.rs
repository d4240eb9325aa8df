//! Pullback of tensors along the flow of a circle action.

use std::collections::BTreeMap;

use super::circle::CircleAction;
use crate::algebra::{Poly, RationalFn, TrigPoly};
use crate::error::{Error, Result};
use crate::tensor::any::Tensor;

/// Components of `(Fl^t)^* T` as sums of `trig · (1 / invariant denominator)`.
#[derive(Clone, Debug)]
pub struct TrigTensor {
    template: Tensor,
    entries: BTreeMap<Vec<usize>, Vec<(TrigPoly, RationalFn)>>,
}

impl TrigTensor {
    /// Applies a `t`-functional (mean, weighted mean, …) componentwise.
    pub fn reduce<F: Fn(&TrigPoly) -> Poly>(&self, f: F) -> Tensor {
        let mut out = Vec::new();
        for (k, parts) in &self.entries {
            let mut acc = RationalFn::zero(self.template.dim());
            for (tp, inv_den) in parts {
                let p = f(tp);
                if !p.is_zero() {
                    acc = &acc + &(&RationalFn::from_poly(p) * inv_den);
                }
            }
            if !acc.is_zero() {
                out.push((k.clone(), acc));
            }
        }
        self.template.from_entries_like(out)
    }

    /// Numeric components at flow time `t`.
    pub fn eval_f64(&self, t: f64, point: &[f64]) -> BTreeMap<Vec<usize>, f64> {
        self.entries
            .iter()
            .map(|(k, parts)| (k.clone(), parts.iter().map(|(tp, d)| tp.eval_f64(t, point) * d.eval_f64(point)).sum()))
            .collect()
    }

    pub fn keys(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.entries.keys()
    }

    /// Largest frequency that occurs.
    pub fn max_frequency(&self) -> u32 {
        self.entries.values().flatten().map(|(tp, _)| tp.max_frequency()).max().unwrap_or(0)
    }
}

fn partner(act: &CircleAction, c: usize) -> Option<usize> {
    act.planes().iter().find_map(|p| {
        if p.i == c {
            Some(p.j)
        } else if p.j == c {
            Some(p.i)
        } else {
            None
        }
    })
}

/// Index tuples reachable from `j` by swapping entries with their plane partners.
fn candidates(act: &CircleAction, j: &[usize]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for &c in j {
        let mut next = Vec::new();
        for prefix in &out {
            for d in std::iter::once(c).chain(partner(act, c)) {
                if !prefix.contains(&d) {
                    let mut v = prefix.clone();
                    v.push(d);
                    next.push(v);
                }
            }
        }
        out = next;
    }
    let mut sorted: Vec<Vec<usize>> = out
        .into_iter()
        .map(|mut v| {
            v.sort_unstable();
            v
        })
        .collect();
    sorted.sort();
    sorted.dedup();
    sorted
}

/// Determinant of the submatrix with the given rows and columns.
fn minor(m: &[Vec<TrigPoly>], rows: &[usize], cols: &[usize], n: usize) -> TrigPoly {
    let k = rows.len();
    if k == 0 {
        return TrigPoly::constant(Poly::one(n));
    }
    if k == 1 {
        return m[rows[0]][cols[0]].clone();
    }
    // Laplace expansion along the first row
    let mut acc = TrigPoly::zero(n);
    for (c, &col) in cols.iter().enumerate() {
        let e = &m[rows[0]][col];
        if e.is_zero() {
            continue;
        }
        let sub_cols: Vec<usize> = cols.iter().enumerate().filter(|(i, _)| *i != c).map(|(_, &v)| v).collect();
        let sub = minor(m, &rows[1..], &sub_cols, n);
        let term = e * &sub;
        acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Splits a coefficient into a pulled-back numerator and its reciprocal denominator,
/// checking that the denominator is invariant.
fn pull_coefficient(act: &CircleAction, c: &RationalFn) -> Result<(TrigPoly, RationalFn)> {
    for (f, _) in c.denominator_factors() {
        if !act.is_invariant_poly(f) {
            return Err(Error::NonInvariantDenominator(format!("{f}")));
        }
    }
    Ok((act.pullback_poly(c.numerator()), c.reciprocal_denominator()))
}

/// `(Fl^t)^* T` with trigonometric components.
pub fn pullback_flow(act: &CircleAction, t: &Tensor) -> Result<TrigTensor> {
    let n = act.dim();
    if t.dim() != n {
        return Err(Error::Dimension(format!("tensor on {} coordinates, action on {n}", t.dim())));
    }
    let mut entries: BTreeMap<Vec<usize>, Vec<(TrigPoly, RationalFn)>> = BTreeMap::new();
    let mut push = |k: Vec<usize>, tp: TrigPoly, d: &RationalFn| {
        if !tp.is_zero() {
            entries.entry(k).or_default().push((tp, d.clone()));
        }
    };
    match t {
        Tensor::Form(_) => {
            let r = act.matrix(false);
            for (j, c) in t.entries() {
                let (pc, d) = pull_coefficient(act, &c)?;
                for i in candidates(act, &j) {
                    let m = minor(&r, &j, &i, n);
                    if !m.is_zero() {
                        push(i, &pc * &m, &d);
                    }
                }
            }
        }
        Tensor::Multivector(_) => {
            let rinv = act.matrix(true);
            for (j, c) in t.entries() {
                let (pc, d) = pull_coefficient(act, &c)?;
                for i in candidates(act, &j) {
                    let m = minor(&rinv, &i, &j, n);
                    if !m.is_zero() {
                        push(i, &pc * &m, &d);
                    }
                }
            }
        }
        Tensor::Endo(_) => {
            let r = act.matrix(false);
            let rinv = act.matrix(true);
            for (kl, c) in t.entries() {
                let (pc, d) = pull_coefficient(act, &c)?;
                let (k, l) = (kl[0], kl[1]);
                for i in std::iter::once(k).chain(partner(act, k)) {
                    for j in std::iter::once(l).chain(partner(act, l)) {
                        let m = &rinv[i][k] * &r[l][j];
                        if !m.is_zero() {
                            push(vec![i, j], &pc * &m, &d);
                        }
                    }
                }
            }
        }
    }
    Ok(TrigTensor { template: t.zero_like(), entries })
}
