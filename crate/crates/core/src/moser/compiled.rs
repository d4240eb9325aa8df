//! Rational functions flattened to `f64` monomial lists.

use crate::algebra::{rational_to_f64, Poly, RationalFn};

#[derive(Clone, Debug, Default)]
struct CompiledPoly {
    /// Coefficient and `(variable, exponent)` pairs with positive exponents.
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl CompiledPoly {
    fn new(p: &Poly) -> Self {
        let terms = p
            .terms()
            .map(|(e, c)| {
                let vars = e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(v, &k)| (v, k as i32)).collect();
                (rational_to_f64(c), vars)
            })
            .collect();
        CompiledPoly { terms }
    }

    fn eval(&self, p: &[f64]) -> f64 {
        self.terms.iter().map(|(c, vars)| vars.iter().fold(*c, |acc, &(v, k)| acc * p[v].powi(k))).sum()
    }
}

/// A rational function ready for repeated floating-point evaluation.
#[derive(Clone, Debug, Default)]
pub struct CompiledFn {
    num: CompiledPoly,
    den: Option<CompiledPoly>,
}

impl CompiledFn {
    pub fn new(f: &RationalFn) -> Self {
        let den = f.denominator();
        CompiledFn {
            num: CompiledPoly::new(f.numerator()),
            den: if den.is_constant() && den.as_constant().is_some_and(|c| c == num_traits::One::one()) {
                None
            } else {
                Some(CompiledPoly::new(&den))
            },
        }
    }

    pub fn eval(&self, p: &[f64]) -> f64 {
        let n = self.num.eval(p);
        match &self.den {
            None => n,
            Some(d) => n / d.eval(p),
        }
    }
}
