use crate::error::{Error, Result};

use super::Poly;

/// Size guard on symbolic inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_vars: usize,
    pub max_degree: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_vars: 8, max_degree: 12 }
    }
}

impl Limits {
    pub fn check_vars(&self, n: usize) -> Result<()> {
        if n > self.max_vars {
            return Err(Error::SizeGuard(format!("{n} coordinates exceed the cap of {}", self.max_vars)));
        }
        Ok(())
    }

    pub fn check_poly(&self, p: &Poly) -> Result<()> {
        self.check_vars(p.nvars())?;
        let d = p.total_degree();
        if d > self.max_degree {
            return Err(Error::SizeGuard(format!("total degree {d} exceeds the cap of {}", self.max_degree)));
        }
        Ok(())
    }
}
