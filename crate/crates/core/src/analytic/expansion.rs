use crate::analytic::{m_d, m_sc, SpectralPoint};
use crate::error::Result;
use crate::scalar::{Cplx, Real};

/// Second-order Taylor coefficients of `Δ ↦ Y_ℓ(Δ, z)` around `Δ = m_sc(z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpansionCoefficients<T: Real> {
    pub linear: Cplx<T>,
    pub quadratic: Cplx<T>,
}

pub fn y_expansion_coeffs<T: Real>(
    p: SpectralPoint<T>,
    ell: usize,
    d: usize,
) -> Result<ExpansionCoefficients<T>> {
    let m = m_sc(p);
    let md = m_d(p, d)?;
    let one = Cplx::new(T::one(), T::zero());
    let (d1, d2) = (T::count(d - 1), T::count(d - 2));
    let lin = m.powu(2 * ell as u32 + 2);
    let tail = one - lin;
    let quadratic = lin * md * (tail / d1 + tail / (one - m * m) * (d2 / d1));
    Ok(ExpansionCoefficients {
        linear: lin,
        quadratic,
    })
}
