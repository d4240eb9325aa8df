//! A tagged union over the tensor kinds the averaging operators act on.

use super::multivector::{Form, Multivector, VectorField};
use super::schouten::schouten;
use super::vv::VectorValued1Form;
use crate::algebra::{Matrix, RationalFn, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tensor {
    Multivector(Multivector),
    Form(Form),
    /// Vector-valued 1-form.
    Endo(VectorValued1Form),
}

impl Tensor {
    pub fn scalar(f: RationalFn) -> Tensor {
        Tensor::Form(Form::scalar(f))
    }

    pub fn dim(&self) -> usize {
        match self {
            Tensor::Multivector(m) => m.dim(),
            Tensor::Form(f) => f.dim(),
            Tensor::Endo(k) => k.dim(),
        }
    }

    /// Empty tensor of the same kind and shape.
    pub fn zero_like(&self) -> Tensor {
        match self {
            Tensor::Multivector(m) => Tensor::Multivector(Multivector::zero(m.dim(), m.degree())),
            Tensor::Form(f) => Tensor::Form(Form::zero(f.dim(), f.degree())),
            Tensor::Endo(k) => Tensor::Endo(VectorValued1Form::zero(k.dim())),
        }
    }

    /// Nonzero components keyed by index tuple; `[i, j]` is the matrix entry for endomorphisms.
    pub fn entries(&self) -> Vec<(Vec<usize>, RationalFn)> {
        match self {
            Tensor::Multivector(m) => m.components().map(|(k, v)| (k.clone(), v.clone())).collect(),
            Tensor::Form(f) => f.components().map(|(k, v)| (k.clone(), v.clone())).collect(),
            Tensor::Endo(k) => {
                let n = k.dim();
                let mut out = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        let v = k.entry(i, j);
                        if !v.is_zero() {
                            out.push((vec![i, j], v.clone()));
                        }
                    }
                }
                out
            }
        }
    }

    /// Rebuilds a tensor of this shape from components (keys as in [`Tensor::entries`]).
    pub fn from_entries_like(&self, entries: Vec<(Vec<usize>, RationalFn)>) -> Tensor {
        let n = self.dim();
        match self {
            Tensor::Multivector(m) => {
                let mut out = Multivector::zero(n, m.degree());
                for (k, v) in entries {
                    out.add_at(&k, &v);
                }
                Tensor::Multivector(out)
            }
            Tensor::Form(f) => {
                let mut out = Form::zero(n, f.degree());
                for (k, v) in entries {
                    out.add_at(&k, &v);
                }
                Tensor::Form(out)
            }
            Tensor::Endo(_) => {
                let mut m = Matrix::zeros(n, n, &RationalFn::zero(n));
                for (k, v) in entries {
                    let cur = m.get(k[0], k[1]).clone();
                    m.set(k[0], k[1], &cur + &v);
                }
                Tensor::Endo(VectorValued1Form::new(m))
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Tensor::Multivector(m) => m.is_zero(),
            Tensor::Form(f) => f.is_zero(),
            Tensor::Endo(k) => k.matrix().is_zero(),
        }
    }

    pub fn add(&self, o: &Tensor) -> Tensor {
        match (self, o) {
            (Tensor::Multivector(a), Tensor::Multivector(b)) => Tensor::Multivector(a + b),
            (Tensor::Form(a), Tensor::Form(b)) => Tensor::Form(a + b),
            (Tensor::Endo(a), Tensor::Endo(b)) => Tensor::Endo(a.add(b)),
            _ => panic!("adding tensors of different kinds"),
        }
    }

    pub fn sub(&self, o: &Tensor) -> Tensor {
        self.add(&o.scale_rational(&crate::algebra::rat(-1, 1)))
    }

    pub fn scale_rational(&self, c: &Rational) -> Tensor {
        match self {
            Tensor::Multivector(a) => Tensor::Multivector(a.scale_rational(c)),
            Tensor::Form(a) => Tensor::Form(a.scale_rational(c)),
            Tensor::Endo(a) => Tensor::Endo(a.map_entries(|x| x.scale(c))),
        }
    }

    pub fn map_coeffs<F: Fn(&RationalFn) -> RationalFn>(&self, f: F) -> Tensor {
        match self {
            Tensor::Multivector(a) => Tensor::Multivector(a.map_coeffs(f)),
            Tensor::Form(a) => Tensor::Form(a.map_coeffs(f)),
            Tensor::Endo(a) => Tensor::Endo(a.map_entries(f)),
        }
    }

    /// `L_X` of the tensor.
    pub fn lie_derivative(&self, x: &VectorField) -> Tensor {
        match self {
            Tensor::Multivector(m) => Tensor::Multivector(schouten(x, m)),
            Tensor::Form(f) => Tensor::Form(f.lie_derivative(x)),
            Tensor::Endo(k) => Tensor::Endo(k.lie_derivative(x)),
        }
    }

    pub fn as_form(&self) -> Option<&Form> {
        match self {
            Tensor::Form(f) => Some(f),
            _ => None,
        }
    }

    pub fn as_multivector(&self) -> Option<&Multivector> {
        match self {
            Tensor::Multivector(m) => Some(m),
            _ => None,
        }
    }

    pub fn as_endo(&self) -> Option<&VectorValued1Form> {
        match self {
            Tensor::Endo(k) => Some(k),
            _ => None,
        }
    }

    pub fn into_form(self) -> Form {
        match self {
            Tensor::Form(f) => f,
            _ => panic!("expected a form"),
        }
    }

    pub fn into_multivector(self) -> Multivector {
        match self {
            Tensor::Multivector(m) => m,
            _ => panic!("expected a multivector"),
        }
    }

    pub fn into_endo(self) -> VectorValued1Form {
        match self {
            Tensor::Endo(k) => k,
            _ => panic!("expected a vector-valued 1-form"),
        }
    }
}

impl From<Form> for Tensor {
    fn from(f: Form) -> Self {
        Tensor::Form(f)
    }
}

impl From<Multivector> for Tensor {
    fn from(m: Multivector) -> Self {
        Tensor::Multivector(m)
    }
}

impl From<VectorValued1Form> for Tensor {
    fn from(k: VectorValued1Form) -> Self {
        Tensor::Endo(k)
    }
}
