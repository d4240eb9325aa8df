//! Multivector fields and differential forms.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use super::alt::{increasing_tuples, Alt, MAX_DEGREE};
use crate::algebra::{Poly, RationalFn, Rational};
use crate::error::{Error, Result};

macro_rules! alternating_common {
    ($t:ident) => {
        impl $t {
            pub fn zero(dim: usize, degree: usize) -> Self {
                $t(Alt::zero(dim, degree))
            }

            /// Builds from `(indices, coefficient)` pairs, summing repeats.
            pub fn from_terms<I>(dim: usize, degree: usize, terms: I) -> Result<Self>
            where
                I: IntoIterator<Item = (Vec<usize>, RationalFn)>,
            {
                if degree > MAX_DEGREE {
                    return Err(Error::DegreeOverflow(format!("degree {degree} exceeds {MAX_DEGREE}")));
                }
                if degree > dim {
                    return Err(Error::DegreeOverflow(format!("degree {degree} exceeds dimension {dim}")));
                }
                let mut a = Alt::zero(dim, degree);
                for (idx, c) in terms {
                    if idx.len() != degree {
                        return Err(Error::Dimension(format!(
                            "index tuple {idx:?} has {} entries, expected {degree}",
                            idx.len()
                        )));
                    }
                    if let Some(&i) = idx.iter().find(|&&i| i >= dim) {
                        return Err(Error::Dimension(format!("index {i} out of range for dimension {dim}")));
                    }
                    a.add_at(&idx, &c);
                }
                Ok($t(a))
            }

            pub fn scalar(f: RationalFn) -> Self {
                let dim = f.nvars();
                let mut a = Alt::zero(dim, 0);
                a.set(&[], f);
                $t(a)
            }

            pub fn dim(&self) -> usize {
                self.0.dim
            }

            pub fn degree(&self) -> usize {
                self.0.degree
            }

            pub fn get(&self, idx: &[usize]) -> RationalFn {
                self.0.get(idx)
            }

            pub fn set(&mut self, idx: &[usize], v: RationalFn) {
                self.0.set(idx, v)
            }

            pub fn add_at(&mut self, idx: &[usize], v: &RationalFn) {
                self.0.add_at(idx, v)
            }

            /// Stored components on strictly increasing tuples.
            pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &RationalFn)> {
                self.0.comps.iter()
            }

            pub fn num_components(&self) -> usize {
                self.0.comps.len()
            }

            pub fn is_zero(&self) -> bool {
                self.0.is_zero()
            }

            pub fn scale(&self, f: &RationalFn) -> Self {
                if f.is_zero() {
                    return Self::zero(self.dim(), self.degree());
                }
                $t(self.0.map(|v| v * f))
            }

            pub fn scale_rational(&self, c: &Rational) -> Self {
                $t(self.0.map(|v| v.scale(c)))
            }

            pub fn map_coeffs<F: Fn(&RationalFn) -> RationalFn>(&self, f: F) -> Self {
                $t(self.0.map(f))
            }

            pub fn try_map_coeffs<F: Fn(&RationalFn) -> Result<RationalFn>>(&self, f: F) -> Result<Self> {
                Ok($t(self.0.try_map(f)?))
            }

            pub fn wedge(&self, o: &Self) -> Result<Self> {
                let d = self.degree() + o.degree();
                if d > self.dim() {
                    return Err(Error::DegreeOverflow(format!("wedge of degree {d} in dimension {}", self.dim())));
                }
                Ok($t(self.0.wedge(&o.0)))
            }

            /// Value of the scalar part of a degree-0 tensor.
            pub fn as_scalar(&self) -> RationalFn {
                assert_eq!(self.degree(), 0);
                self.get(&[])
            }

            /// Components of a degree-1 tensor as a dense vector.
            pub fn to_vec(&self) -> Vec<RationalFn> {
                assert_eq!(self.degree(), 1, "expected a degree-1 tensor");
                (0..self.dim()).map(|i| self.get(&[i])).collect()
            }

            pub fn from_vec(v: Vec<RationalFn>) -> Self {
                let dim = v.len();
                let mut a = Alt::zero(dim, 1);
                for (i, c) in v.into_iter().enumerate() {
                    a.set(&[i], c);
                }
                $t(a)
            }

            /// The `i`-th coordinate basis element.
            pub fn basis(dim: usize, i: usize) -> Self {
                let mut a = Alt::zero(dim, 1);
                a.set(&[i], RationalFn::one(dim));
                $t(a)
            }

            pub fn eval(&self, point: &[Rational]) -> Option<BTreeMap<Vec<usize>, Rational>> {
                self.0.eval(point)
            }

            pub fn eval_f64(&self, point: &[f64]) -> BTreeMap<Vec<usize>, f64> {
                self.0.comps.iter().map(|(k, v)| (k.clone(), v.eval_f64(point))).collect()
            }

            /// Component-wise `∂/∂u_var`.
            pub fn coordinate_derivative(&self, var: usize) -> Self {
                $t(self.0.map(|v| v.derivative(var)))
            }

            pub fn max_total_degree(&self) -> u32 {
                self.0.max_total_degree()
            }

            /// Every strictly increasing tuple of this degree, zero or not.
            pub fn index_tuples(&self) -> Vec<Vec<usize>> {
                increasing_tuples(self.dim(), self.degree())
            }

            pub fn display_with(&self, names: &[String]) -> String {
                if self.is_zero() {
                    return "0".into();
                }
                self.0
                    .comps
                    .iter()
                    .map(|(k, v)| {
                        let legs: Vec<String> = k
                            .iter()
                            .map(|&i| format!("{}{}", $t::LEG, names.get(i).cloned().unwrap_or_else(|| format!("u{i}"))))
                            .collect();
                        if legs.is_empty() {
                            format!("({})", v.display_with(names))
                        } else {
                            format!("({}) {}", v.display_with(names), legs.join("^"))
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(" + ")
            }
        }

        impl Add for &$t {
            type Output = $t;
            fn add(self, o: &$t) -> $t {
                $t(self.0.combine(&o.0, false))
            }
        }

        impl Sub for &$t {
            type Output = $t;
            fn sub(self, o: &$t) -> $t {
                $t(self.0.combine(&o.0, true))
            }
        }

        impl Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t {
                $t(self.0.map(|v| -v))
            }
        }

        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }

        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }

        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }

        impl std::fmt::Display for $t {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                write!(f, "{}", self.display_with(&[]))
            }
        }
    };
}

/// Contravariant antisymmetric tensor field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multivector(pub(crate) Alt);

/// Covariant antisymmetric tensor field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form(pub(crate) Alt);

impl Multivector {
    const LEG: &'static str = "d/d";
}

impl Form {
    const LEG: &'static str = "d";
}

alternating_common!(Multivector);
alternating_common!(Form);

/// A vector field is a degree-1 multivector.
pub type VectorField = Multivector;

impl Multivector {
    /// `i_α A`: contraction of a 1-form into the first slot.
    pub fn interior(&self, alpha: &Form) -> Multivector {
        assert_eq!(alpha.degree(), 1);
        Multivector(self.0.contract_first(&alpha.to_vec()))
    }

    /// `Π♯α = i_α Π`, so `(Π♯α)^j = Σ_i α_i Π^{ij}`.
    pub fn sharp(&self, alpha: &Form) -> VectorField {
        assert_eq!(self.degree(), 2, "sharp needs a bivector");
        self.interior(alpha)
    }

    /// Matrix of `Π♯` acting on covector columns: entry `(j, i)` is `Π^{ij}`.
    pub fn sharp_matrix(&self) -> crate::algebra::Matrix<RationalFn> {
        assert_eq!(self.degree(), 2);
        let n = self.dim();
        crate::algebra::Matrix::from_fn(n, n, |j, i| self.get(&[i, j]))
    }

    /// Bivector whose sharp map has the given matrix (entry `(j, i)` is `Π^{ij}`).
    pub fn from_sharp_matrix(m: &crate::algebra::Matrix<RationalFn>) -> Multivector {
        let n = m.rows();
        let mut a = Alt::zero(n, 2);
        for i in 0..n {
            for j in i + 1..n {
                a.set(&[i, j], m.get(j, i).clone());
            }
        }
        Multivector(a)
    }

    /// Full evaluation on covectors: `A(α_1, …, α_k) = i_{α_k} ⋯ i_{α_1} A`.
    pub fn evaluate(&self, alphas: &[&Form]) -> RationalFn {
        assert_eq!(alphas.len(), self.degree());
        let mut t = self.clone();
        for a in alphas {
            t = t.interior(a);
        }
        t.as_scalar()
    }

    /// Applies a vector field to a function: `X(f)`.
    pub fn apply(&self, f: &RationalFn) -> RationalFn {
        assert_eq!(self.degree(), 1);
        let mut acc = RationalFn::zero(self.dim());
        for (k, v) in self.components() {
            let d = f.derivative(k[0]);
            if !d.is_zero() {
                acc = &acc + &(v * &d);
            }
        }
        acc
    }

    /// Lie bracket of vector fields.
    pub fn bracket(&self, o: &VectorField) -> VectorField {
        let n = self.dim();
        let x = self.to_vec();
        let y = o.to_vec();
        let mut out = vec![RationalFn::zero(n); n];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = &self.apply(&y[i]) - &o.apply(&x[i]);
        }
        Multivector::from_vec(out)
    }

    /// Bivector `X ∧ Y`.
    pub fn wedge_vectors(x: &VectorField, y: &VectorField) -> Multivector {
        Multivector(x.0.wedge(&y.0))
    }
}

impl Form {
    pub fn function(f: RationalFn) -> Form {
        Form::scalar(f)
    }

    /// `df` for a scalar.
    pub fn differential(f: &RationalFn) -> Form {
        let n = f.nvars();
        Form::from_vec((0..n).map(|i| f.derivative(i)).collect())
    }

    /// `d` in coordinates.
    pub fn d(&self) -> Form {
        let n = self.dim();
        let mut out = Alt::zero(n, (self.degree() + 1).min(n));
        if self.degree() == n {
            return Form(Alt::zero(n, n));
        }
        for (k, v) in &self.0.comps {
            for i in 0..n {
                if k.contains(&i) {
                    continue;
                }
                let dv = v.derivative(i);
                if dv.is_zero() {
                    continue;
                }
                let mut idx = vec![i];
                idx.extend_from_slice(k);
                out.add_at(&idx, &dv);
            }
        }
        Form(out)
    }

    /// `i_X ω` on the first slot.
    pub fn interior(&self, x: &VectorField) -> Form {
        assert_eq!(x.degree(), 1);
        Form(self.0.contract_first(&x.to_vec()))
    }

    /// `ω(X_1, …, X_k) = i_{X_k} ⋯ i_{X_1} ω`.
    pub fn evaluate(&self, xs: &[&VectorField]) -> RationalFn {
        assert_eq!(xs.len(), self.degree());
        let mut t = self.clone();
        for x in xs {
            t = t.interior(x);
        }
        t.as_scalar()
    }

    /// `B♯X = i_X B` for a 2-form; as a matrix, entry `(k, j)` is `B_{jk}`.
    pub fn sharp(&self, x: &VectorField) -> Form {
        assert_eq!(self.degree(), 2);
        self.interior(x)
    }

    /// Matrix of `B♯` acting on vector columns: entry `(k, j)` is `B_{jk}`.
    pub fn sharp_matrix(&self) -> crate::algebra::Matrix<RationalFn> {
        assert_eq!(self.degree(), 2);
        let n = self.dim();
        crate::algebra::Matrix::from_fn(n, n, |k, j| self.get(&[j, k]))
    }

    /// Cartan formula `L_X ω = i_X dω + d i_X ω`.
    pub fn lie_derivative(&self, x: &VectorField) -> Form {
        if self.degree() == 0 {
            return Form::scalar(x.apply(&self.as_scalar()));
        }
        let a = self.d();
        let a = if a.degree() == self.degree() { Form::zero(self.dim(), self.degree()) } else { a.interior(x) };
        let b = self.interior(x).d();
        &a + &b
    }

    /// 1-form `Σ c_i du_i` with polynomial coefficients.
    pub fn from_polys(v: Vec<Poly>) -> Form {
        Form::from_vec(v.into_iter().map(RationalFn::from_poly).collect())
    }

    /// Wedge of 1-forms given in order.
    pub fn wedge_all(forms: &[&Form]) -> Form {
        let n = forms[0].dim();
        let mut acc = Form::scalar(RationalFn::one(n));
        for f in forms {
            acc = Form(acc.0.wedge(&f.0));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn r(p: Poly) -> RationalFn {
        RationalFn::from_poly(p)
    }

    #[test]
    fn wedge_antisymmetry() {
        let dx = Form::basis(2, 0);
        let dy = Form::basis(2, 1);
        assert!(dx.wedge(&dx).unwrap().is_zero());
        assert_eq!(dx.wedge(&dy).unwrap(), -dy.wedge(&dx).unwrap());
        assert!(dx.wedge(&dx.wedge(&dy).unwrap()).is_err() || dx.wedge(&dx.wedge(&dy).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn contractions() {
        let dx = Form::basis(2, 0);
        let dy = Form::basis(2, 1);
        let ex = Multivector::basis(2, 0);
        let ey = Multivector::basis(2, 1);
        assert_eq!(dx.wedge(&dy).unwrap().interior(&ex), dy);
        assert_eq!(Multivector::wedge_vectors(&ex, &ey).interior(&dx), ey);
    }

    #[test]
    fn sharp_of_angular_momentum() {
        // coordinates (y1, y2), P = d/dy1 ^ d/dy2, J = (y1^2 + y2^2)/2
        let p = Multivector::wedge_vectors(&Multivector::basis(2, 0), &Multivector::basis(2, 1));
        let y1 = Poly::var(0, 2);
        let y2 = Poly::var(1, 2);
        let j = r((&(&y1 * &y1) + &(&y2 * &y2)).scale(&rat(1, 2)));
        let x = p.sharp(&Form::differential(&j));
        assert_eq!(x.to_vec(), vec![r(-&y2), r(y1.clone())]);
        assert_eq!(p.sharp(&Form::basis(2, 0)), Multivector::basis(2, 1));
    }

    #[test]
    fn exterior_derivative_examples() {
        let x = Poly::var(0, 2);
        let w = Form::from_polys(vec![Poly::zero(2), x]);
        let dxdy = Form::basis(2, 0).wedge(&Form::basis(2, 1)).unwrap();
        assert_eq!(w.d(), dxdy);
        let y1 = Poly::var(0, 2);
        let y2 = Poly::var(1, 2);
        let rot = Form::from_polys(vec![-&y2, y1]);
        assert_eq!(rot.d(), dxdy.scale_rational(&rat(2, 1)));
    }

    #[test]
    fn sharp_matrix_matches_interior() {
        let n = 3;
        let p = Multivector::from_terms(
            n,
            2,
            vec![(vec![0, 1], RationalFn::var(2, n)), (vec![1, 2], RationalFn::from_int(3, n))],
        )
        .unwrap();
        let alpha = Form::from_vec(vec![RationalFn::var(0, n), RationalFn::one(n), RationalFn::var(1, n)]);
        let m = p.sharp_matrix();
        assert_eq!(m.mul_vec(&alpha.to_vec()), p.sharp(&alpha).to_vec());
        assert_eq!(Multivector::from_sharp_matrix(&m), p);
    }
}
