use crate::error::{Error, Result};
use crate::scalar::{cplx, Cplx, Real};

/// A point `z` of the open upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralPoint<T: Real> {
    z: Cplx<T>,
}

impl<T: Real> SpectralPoint<T> {
    pub fn new(z: Cplx<T>) -> Result<Self> {
        if !(z.im > T::zero()) || !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::SpectralDomain(format!(
                "z = {} + {}i is not in the upper half-plane",
                z.re, z.im
            )));
        }
        Ok(Self { z })
    }

    pub fn from_parts(re: T, im: T) -> Result<Self> {
        Self::new(cplx(re, im))
    }

    pub fn z(&self) -> Cplx<T> {
        self.z
    }

    pub fn re(&self) -> T {
        self.z.re
    }

    pub fn eta(&self) -> T {
        self.z.im
    }

    /// Distance of `Re z` to the nearer spectral edge `±2`.
    pub fn kappa(&self) -> T {
        let two = T::lit(2.0);
        (self.z.re - two).abs().min((self.z.re + two).abs())
    }
}
