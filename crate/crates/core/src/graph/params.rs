use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scale parameters: the tree radius `R = floor((c/4) log_{d-1} N)`, the
/// resampling radius `ell`, and the isolation radius used by the switching
/// admissibility test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    pub n: usize,
    pub d: usize,
    pub radius_exponent: f64,
    pub eta_exponent: f64,
    pub slack_exponent: f64,
    pub radius: usize,
    pub ell: usize,
    pub isolation_radius: usize,
}

pub const DEFAULT_RADIUS_EXPONENT: f64 = 0.5;
pub const DEFAULT_ETA_EXPONENT: f64 = 0.1;
pub const DEFAULT_ELL: usize = 2;

impl Parameters {
    pub fn new(n: usize, d: usize) -> Self {
        Self::with_radius_exponent(n, d, DEFAULT_RADIUS_EXPONENT)
    }

    pub fn with_radius_exponent(n: usize, d: usize, radius_exponent: f64) -> Self {
        let radius = tree_radius(n, d, radius_exponent);
        Self {
            n,
            d,
            radius_exponent,
            eta_exponent: DEFAULT_ETA_EXPONENT,
            slack_exponent: 0.0,
            radius,
            ell: DEFAULT_ELL.min(radius),
            isolation_radius: default_isolation_radius(radius),
        }
    }

    /// Override `R`; the isolation radius follows as `max(2, floor(R/4))`.
    pub fn with_radius(mut self, radius: usize) -> Self {
        self.radius = radius;
        self.isolation_radius = default_isolation_radius(radius);
        self
    }

    pub fn with_ell(mut self, ell: usize) -> Self {
        self.ell = ell;
        self
    }

    pub fn with_isolation_radius(mut self, r: usize) -> Self {
        self.isolation_radius = r;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if !(self.radius_exponent > 0.0 && self.radius_exponent < 1.0) {
            errs.push(format!("radius_exponent = {} must lie in (0, 1)", self.radius_exponent));
        }
        if self.radius < 1 {
            errs.push("tree radius R must be >= 1".to_string());
        }
        if self.ell < 1 {
            errs.push("ell must be >= 1".to_string());
        }
        if self.ell > self.radius {
            errs.push(format!("ell = {} exceeds tree radius R = {}", self.ell, self.radius));
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(errs))
        }
    }

    /// Lower edge `N^{-1+g}` of the admissible spectral window.
    pub fn min_eta(&self) -> f64 {
        (self.n as f64).powf(-1.0 + self.eta_exponent)
    }

    /// Membership in `{ N^{-1+g} <= Im z <= N^{-o}, |Re z| <= 2 + N^{-o} }`.
    pub fn in_domain(&self, re: f64, im: f64) -> bool {
        let n = self.n as f64;
        im >= self.min_eta() && im <= n.powf(-self.slack_exponent) && re.abs() <= 2.0 + n.powf(-self.slack_exponent)
    }
}

/// `floor((c/4) log_{d-1} N)`.
pub fn tree_radius(n: usize, d: usize, radius_exponent: f64) -> usize {
    if n < 2 || d < 3 {
        return 0;
    }
    ((radius_exponent / 4.0) * (n as f64).ln() / ((d - 1) as f64).ln()).floor() as usize
}

fn default_isolation_radius(radius: usize) -> usize {
    (radius / 4).max(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_radius_at_desk_scale() {
        assert_eq!(tree_radius(2000, 3, 0.5), 1);
        assert_eq!(tree_radius(1 << 16, 3, 0.5), 2);
        assert_eq!(tree_radius(5000, 3, 0.9), 2);
    }

    #[test]
    fn validation_rejects_ell_above_radius() {
        let p = Parameters::new(2000, 3).with_ell(2);
        assert!(p.validate().is_err());
        let p = p.with_radius(4);
        assert!(p.validate().is_ok());
        assert_eq!(p.isolation_radius, 2);
    }
}
