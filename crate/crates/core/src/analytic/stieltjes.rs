use crate::analytic::SpectralPoint;
use crate::error::{Error, Result};
use crate::scalar::{cplx, sqrt_z2_minus_4, Cplx, Real};

pub fn check_degree(d: usize) -> Result<()> {
    if d < 3 {
        Err(Error::Degree(d))
    } else {
        Ok(())
    }
}

/// Semicircle Stieltjes transform: the root of `m² + z m + 1 = 0` with `Im m > 0`.
pub fn m_sc<T: Real>(p: SpectralPoint<T>) -> Cplx<T> {
    let z = p.z();
    let two = T::lit(2.0);
    (-z + sqrt_z2_minus_4(z)) / two
}

/// Kesten–McKay Stieltjes transform `1 / (-z - d/(d-1) m_sc(z))`.
pub fn m_d<T: Real>(p: SpectralPoint<T>, d: usize) -> Result<Cplx<T>> {
    check_degree(d)?;
    let ratio = T::count(d) / T::count(d - 1);
    Ok((-p.z() - m_sc(p) * ratio).inv())
}

/// The same transform written with the radical
/// `(d-1)(-(d-2) z + d √(z²-4)) / (2 (d² - (d-1) z²))`.
pub fn m_d_radical<T: Real>(p: SpectralPoint<T>, d: usize) -> Result<Cplx<T>> {
    check_degree(d)?;
    let z = p.z();
    let (df, d1, d2) = (T::count(d), T::count(d - 1), T::count(d - 2));
    let num = (-z * d2 + sqrt_z2_minus_4(z) * df) * d1;
    let den = (cplx(df * df, T::zero()) - z * z * d1) * T::lit(2.0);
    Ok(num / den)
}

/// Kesten–McKay density on `[-2, 2]` (normalized adjacency scale).
pub fn km_density<T: Real>(x: T, d: usize) -> T {
    assert!(d >= 3, "Kesten–McKay density needs d >= 3");
    let four = T::lit(4.0);
    if x.abs() >= T::lit(2.0) {
        return T::zero();
    }
    let df = T::count(d);
    let denom = T::one() + T::one() / (df - T::one()) - x * x / df;
    (four - x * x).sqrt() / (denom * T::lit(2.0) * T::PI())
}

/// Kesten–McKay distribution function, by composite Simpson quadrature in
/// the angle variable `x = -2 cos θ` (which removes the square-root edges).
pub fn km_cdf(x: f64, d: usize) -> f64 {
    if x <= -2.0 {
        return 0.0;
    }
    if x >= 2.0 {
        return 1.0;
    }
    let theta = (-x / 2.0).acos();
    let df = d as f64;
    let f = |t: f64| {
        let (c, s) = (t.cos(), t.sin());
        4.0 * s * s / (2.0 * std::f64::consts::PI * (1.0 + 1.0 / (df - 1.0) - 4.0 * c * c / df))
    };
    let n = 4096;
    let h = theta / n as f64;
    let mut acc = f(0.0) + f(theta);
    for k in 1..n {
        acc += if k % 2 == 1 { 4.0 } else { 2.0 } * f(k as f64 * h);
    }
    (acc * h / 3.0).clamp(0.0, 1.0)
}

/// Edge constant `d(d-1)/(d-2)²`, the limit of `ρ_d(2 - s) π / √s` as `s → 0⁺`.
pub fn edge_constant<T: Real>(d: usize) -> Result<T> {
    check_degree(d)?;
    let (df, d1, d2) = (T::count(d), T::count(d - 1), T::count(d - 2));
    Ok(df * d1 / (d2 * d2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pt(re: f64, im: f64) -> SpectralPoint<f64> {
        SpectralPoint::from_parts(re, im).unwrap()
    }

    #[test]
    fn semicircle_on_imaginary_axis() {
        let m = m_sc(pt(0.0, 2.0));
        assert!(m.re.abs() < 1e-15);
        assert_relative_eq!(m.im, 2f64.sqrt() - 1.0, epsilon = 1e-14);
        let m = m_sc(pt(0.0, 1.0));
        assert_relative_eq!(m.im, (5f64.sqrt() - 1.0) / 2.0, epsilon = 1e-14);
        let m = m_sc(pt(0.0, 1e-12));
        assert!((m - cplx(0.0, 1.0)).norm() < 1e-9);
    }

    #[test]
    fn km_transform_near_origin() {
        let m = m_d(pt(0.0, 1e-12), 3).unwrap();
        assert!((m - cplx(0.0, 2.0 / 3.0)).norm() < 1e-9);
        assert!(m_d(pt(0.0, 1.0), 2).is_err());
    }

    #[test]
    fn density_values() {
        assert_relative_eq!(km_density(0.0, 3), 2.0 / (3.0 * std::f64::consts::PI), epsilon = 1e-14);
        assert_eq!(km_density(2.0, 3), 0.0);
        assert_eq!(km_density(-2.0f32, 5), 0.0);
        assert_relative_eq!(km_cdf(0.0, 3), 0.5, epsilon = 1e-12);
        assert_relative_eq!(km_cdf(1.999_999, 4), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn edge_constants() {
        assert_eq!(edge_constant::<f64>(3).unwrap(), 6.0);
        assert_eq!(edge_constant::<f64>(4).unwrap(), 3.0);
        assert!(edge_constant::<f64>(2).is_err());
    }

    #[test]
    fn single_precision_agrees() {
        let p32 = SpectralPoint::from_parts(0.5f32, 0.3).unwrap();
        let m32 = m_d(p32, 4).unwrap();
        let m64 = m_d(pt(0.5, 0.3), 4).unwrap();
        assert!((m32.re as f64 - m64.re).abs() < 1e-5);
        assert!((m32.im as f64 - m64.im).abs() < 1e-5);
    }
}
