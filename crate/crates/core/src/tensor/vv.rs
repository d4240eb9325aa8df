//! Vector-valued 1- and 2-forms and the Frölicher–Nijenhuis bracket.

use std::collections::BTreeMap;

use super::multivector::{Form, VectorField};
use crate::algebra::{Matrix, RationalFn};

/// `K: TM → TM`, stored as the matrix with `K(∂_j) = Σ_i K[i][j] ∂_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorValued1Form {
    matrix: Matrix<RationalFn>,
}

impl VectorValued1Form {
    pub fn new(matrix: Matrix<RationalFn>) -> Self {
        assert_eq!(matrix.rows(), matrix.cols(), "vector-valued 1-form must be square");
        VectorValued1Form { matrix }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(Matrix::zeros(n, n, &RationalFn::zero(n)))
    }

    pub fn identity(n: usize) -> Self {
        Self::new(Matrix::identity(n, &RationalFn::zero(n)))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix<RationalFn> {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> &RationalFn {
        self.matrix.get(i, j)
    }

    pub fn apply(&self, x: &VectorField) -> VectorField {
        VectorField::from_vec(self.matrix.mul_vec(&x.to_vec()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self::new(self.matrix.mul(&other.matrix))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.matrix.add(&o.matrix))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.matrix.sub(&o.matrix))
    }

    pub fn is_projection(&self) -> bool {
        self.compose(self) == *self
    }

    /// `(L_X K)(Y) = [X, KY] − K[X, Y]`, evaluated on the coordinate frame.
    pub fn lie_derivative(&self, x: &VectorField) -> Self {
        let n = self.dim();
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let e = VectorField::basis(n, j);
            let a = x.bracket(&self.apply(&e));
            let b = self.apply(&x.bracket(&e));
            cols.push((&a - &b).to_vec());
        }
        Self::new(Matrix::from_fn(n, n, |i, j| cols[j][i].clone()))
    }

    pub fn map_entries<F: Fn(&RationalFn) -> RationalFn>(&self, f: F) -> Self {
        Self::new(self.matrix.map(f))
    }

    /// Image of each coordinate basis vector.
    pub fn columns(&self) -> Vec<VectorField> {
        let n = self.dim();
        (0..n).map(|j| self.apply(&VectorField::basis(n, j))).collect()
    }
}

/// Antisymmetric vector-valued 2-form stored on coordinate pairs `a < b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorValued2Form {
    dim: usize,
    comps: BTreeMap<(usize, usize), Vec<RationalFn>>,
}

impl VectorValued2Form {
    pub fn zero(dim: usize) -> Self {
        VectorValued2Form { dim, comps: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn set(&mut self, a: usize, b: usize, v: Vec<RationalFn>) {
        assert!(a != b);
        let (key, v) = if a < b { ((a, b), v) } else { ((b, a), v.iter().map(|c| -c).collect()) };
        if v.iter().all(|c| c.is_zero()) {
            self.comps.remove(&key);
        } else {
            self.comps.insert(key, v);
        }
    }

    /// Value on the coordinate pair `(∂_a, ∂_b)`.
    pub fn get(&self, a: usize, b: usize) -> Vec<RationalFn> {
        let z = || vec![RationalFn::zero(self.dim); self.dim];
        if a == b {
            return z();
        }
        if a < b {
            self.comps.get(&(a, b)).cloned().unwrap_or_else(z)
        } else {
            self.comps.get(&(b, a)).map(|v| v.iter().map(|c| -c).collect()).unwrap_or_else(z)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// `R(X, Y) = Σ_{a<b} (X^a Y^b − X^b Y^a) R_{ab}`.
    pub fn evaluate(&self, x: &VectorField, y: &VectorField) -> VectorField {
        let n = self.dim;
        let xv = x.to_vec();
        let yv = y.to_vec();
        let mut out = vec![RationalFn::zero(n); n];
        for ((a, b), v) in &self.comps {
            let c = &(&xv[*a] * &yv[*b]) - &(&xv[*b] * &yv[*a]);
            if c.is_zero() {
                continue;
            }
            for (o, vi) in out.iter_mut().zip(v) {
                *o = &*o + &(&c * vi);
            }
        }
        VectorField::from_vec(out)
    }

    pub fn scale_rational(&self, c: &crate::algebra::Rational) -> Self {
        let mut out = Self::zero(self.dim);
        for ((a, b), v) in &self.comps {
            out.set(*a, *b, v.iter().map(|x| x.scale(c)).collect());
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b), v) in &o.comps {
            let cur = out.get(*a, *b);
            out.set(*a, *b, cur.iter().zip(v).map(|(p, q)| p + q).collect());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale_rational(&crate::algebra::rat(-1, 1)))
    }

    /// `i_V R` as a vector-valued 1-form, column `b` being `R(V, ∂_b)`.
    pub fn contract(&self, v: &VectorField) -> VectorValued1Form {
        let n = self.dim;
        let cols: Vec<Vec<RationalFn>> = (0..n).map(|b| self.evaluate(v, &VectorField::basis(n, b)).to_vec()).collect();
        VectorValued1Form::new(Matrix::from_fn(n, n, |i, j| cols[j][i].clone()))
    }

    /// Component along `∂_i` as an ordinary 2-form.
    pub fn component_form(&self, i: usize) -> Form {
        let mut f = Form::zero(self.dim, 2);
        for ((a, b), v) in &self.comps {
            f.set(&[*a, *b], v[i].clone());
        }
        f
    }
}

/// Frölicher–Nijenhuis bracket of two vector-valued 1-forms, by the eight-term formula
/// on coordinate fields.
pub fn fn_bracket(k: &VectorValued1Form, l: &VectorValued1Form) -> VectorValued2Form {
    let n = k.dim();
    assert_eq!(n, l.dim());
    let mut out = VectorValued2Form::zero(n);
    let kc = k.columns();
    let lc = l.columns();
    for a in 0..n {
        for b in a + 1..n {
            let x = VectorField::basis(n, a);
            let y = VectorField::basis(n, b);
            let (kx, ky, lx, ly) = (&kc[a], &kc[b], &lc[a], &lc[b]);
            let t1 = kx.bracket(ly);
            let t2 = ky.bracket(lx);
            let t3 = l.apply(&(&kx.bracket(&y) - &ky.bracket(&x)));
            let t4 = k.apply(&(&lx.bracket(&y) - &ly.bracket(&x)));
            // [X, Y] = 0 for coordinate fields, so the (LK + KL)[X, Y] term drops
            let v = &(&(&t1 - &t2) - &t3) - &t4;
            out.set(a, b, v.to_vec());
        }
    }
    out
}
