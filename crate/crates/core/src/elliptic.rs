//! Legendre elliptic integrals and Jacobi elliptic functions for real
//! arguments and moduli `0 <= k <= 1`.
//!
//! Incomplete integrals are evaluated through Carlson's symmetric forms
//! `R_F` and `R_D` (duplication algorithm) and extended past `|φ| = π/2`
//! with the quasi-periodicity `F(φ + nπ) = F(φ) + 2nK`. The complete
//! integral of the first kind uses the arithmetic-geometric mean and the
//! Jacobi functions use descending Landen transformations on an argument
//! already reduced to `[-K, K]`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// Elliptic modulus `k ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Modulus(f64);

impl Modulus {
    pub fn new(k: f64) -> Result<Self> {
        check_modulus(k)?;
        Ok(Self(k))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Complementary modulus `k' = sqrt(1 - k²)`, computed without cancellation.
    pub fn complementary(self) -> f64 {
        complementary(self.0)
    }
}

impl TryFrom<f64> for Modulus {
    type Error = Error;

    fn try_from(k: f64) -> Result<Self> {
        Self::new(k)
    }
}

fn check_modulus(k: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::Domain(format!("modulus {k} outside [0, 1]")));
    }
    Ok(())
}

fn complementary(k: f64) -> f64 {
    ((1.0 - k) * (1.0 + k)).max(0.0).sqrt()
}

/// Values of the Jacobi functions at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiValues {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
    /// Jacobi amplitude, continuous and unbounded in `u` for `k < 1`.
    pub am: f64,
}

/// Complete elliptic integral of the first kind `K(k) = F(π/2, k)`.
pub fn complete_k(k: f64) -> Result<f64> {
    check_modulus(k)?;
    if k == 1.0 {
        return Err(Error::Divergence);
    }
    Ok(FRAC_PI_2 / agm(1.0, complementary(k)))
}

/// Complete elliptic integral of the second kind `E(k) = E(π/2, k)`.
pub fn complete_e(k: f64) -> Result<f64> {
    check_modulus(k)?;
    if k == 1.0 {
        return Ok(1.0);
    }
    let kp2 = (1.0 - k) * (1.0 + k);
    Ok(carlson_rf(0.0, kp2, 1.0) - k * k / 3.0 * carlson_rd(0.0, kp2, 1.0))
}

/// Legendre incomplete integral of the first kind
/// `F(φ, k) = ∫₀^φ da / sqrt(1 - k² sin² a)`.
///
/// For `k = 1` the integral is finite only on `|φ| < π/2`.
pub fn incomplete_f(phi: f64, k: f64) -> Result<f64> {
    check_modulus(k)?;
    if !phi.is_finite() {
        return Err(Error::Domain(format!("amplitude {phi} is not finite")));
    }
    let (n, r) = reduce_amplitude(phi);
    if k == 1.0 {
        if n != 0 || r.abs() >= FRAC_PI_2 {
            return Err(Error::Divergence);
        }
        return Ok(r.sin().atanh());
    }
    let base = principal_f(r, k);
    if n == 0 {
        Ok(base)
    } else {
        Ok(base + 2.0 * n as f64 * complete_k(k)?)
    }
}

/// Legendre incomplete integral of the second kind
/// `E(φ, k) = ∫₀^φ sqrt(1 - k² sin² a) da`.
pub fn incomplete_e(phi: f64, k: f64) -> Result<f64> {
    check_modulus(k)?;
    if !phi.is_finite() {
        return Err(Error::Domain(format!("amplitude {phi} is not finite")));
    }
    let (n, r) = reduce_amplitude(phi);
    if k == 1.0 {
        return Ok(2.0 * n as f64 + r.sin());
    }
    let base = principal_e(r, k);
    if n == 0 {
        Ok(base)
    } else {
        Ok(base + 2.0 * n as f64 * complete_e(k)?)
    }
}

/// Jacobi's epsilon function `E(am(u, k), k) = ∫₀^u dn²(v, k) dv`, i.e. the
/// second-kind integral in argument rather than amplitude convention.
pub fn jacobi_epsilon(u: f64, k: f64) -> Result<f64> {
    check_modulus(k)?;
    if !u.is_finite() {
        return Err(Error::Domain(format!("argument {u} is not finite")));
    }
    if k == 1.0 {
        return Ok(u.tanh());
    }
    let (n, phi0) = reduced_amplitude(u, k)?;
    let base = principal_e(phi0, k);
    if n == 0 {
        Ok(base)
    } else {
        Ok(base + 2.0 * n as f64 * complete_e(k)?)
    }
}

/// Jacobi elliptic functions `sn, cn, dn` and the amplitude `am`.
///
/// `k = 0` and `k = 1` use the circular and hyperbolic closed forms.
pub fn jacobi(u: f64, k: f64) -> Result<JacobiValues> {
    check_modulus(k)?;
    if !u.is_finite() {
        return Err(Error::Domain(format!("argument {u} is not finite")));
    }
    if k == 0.0 {
        let (sn, cn) = u.sin_cos();
        return Ok(JacobiValues {
            sn,
            cn,
            dn: 1.0,
            am: u,
        });
    }
    if k == 1.0 {
        let sech = 1.0 / u.cosh();
        return Ok(JacobiValues {
            sn: u.tanh(),
            cn: sech,
            dn: sech,
            am: u.sinh().atan(),
        });
    }
    let (n, phi0) = reduced_amplitude(u, k)?;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let (s, c) = phi0.sin_cos();
    let (sn, cn) = (sign * s, sign * c);
    let kp = complementary(k);
    // 1 - k² sn² rewritten as k'² + k² cn² keeps accuracy near k = 1.
    let dn = (kp * kp + k * k * cn * cn).sqrt();
    Ok(JacobiValues {
        sn,
        cn,
        dn,
        am: phi0 + n as f64 * PI,
    })
}

/// Jacobi functions for any modulus `k >= 0`, including `k > 1` through the
/// reciprocal-modulus transformation
/// `sn(u, k) = sn(ku, 1/k) / k`, `cn(u, k) = dn(ku, 1/k)`, `dn(u, k) = cn(ku, 1/k)`.
pub(crate) fn sn_cn_dn_any(u: f64, k: f64) -> Result<(f64, f64, f64)> {
    if k <= 1.0 {
        let j = jacobi(u, k)?;
        Ok((j.sn, j.cn, j.dn))
    } else {
        let m = 1.0 / k;
        let j = jacobi(k * u, m)?;
        Ok((j.sn / k, j.dn, j.cn))
    }
}

/// `∫₀^u dn²(v, k) dv` for any modulus `k >= 0`.
///
/// For `k > 1`: `u (1 - k²) + k ε(ku, 1/k)` where `ε` is [`jacobi_epsilon`].
pub(crate) fn epsilon_any(u: f64, k: f64) -> Result<f64> {
    if k <= 1.0 {
        jacobi_epsilon(u, k)
    } else {
        let m = 1.0 / k;
        Ok(u * (1.0 - k * k) + k * jacobi_epsilon(k * u, m)?)
    }
}

/// Split an amplitude as `nπ + r` with `r ∈ [-π/2, π/2]`.
fn reduce_amplitude(phi: f64) -> (i64, f64) {
    let n = (phi / PI).round();
    (n as i64, phi - n * PI)
}

/// Amplitude of `u` as `nπ + φ₀` with `φ₀ ∈ [-π/2, π/2]`, using the
/// half-period shift `am(u + 2K) = am(u) + π`.
fn reduced_amplitude(u: f64, k: f64) -> Result<(i64, f64)> {
    let kk = complete_k(k)?;
    let n = (u / (2.0 * kk)).round();
    let ur = u - n * 2.0 * kk;
    Ok((n as i64, landen_amplitude(ur, k)))
}

/// Amplitude via descending Landen / AGM iteration (A&S 16.4).
fn landen_amplitude(u: f64, k: f64) -> f64 {
    let mut a = vec![1.0];
    let mut c = vec![k];
    let mut b = complementary(k);
    while c.last().unwrap().abs() > 1e-17 && a.len() < 40 {
        let an = *a.last().unwrap();
        c.push(0.5 * (an - b));
        a.push(0.5 * (an + b));
        b = (an * b).sqrt();
    }
    let steps = a.len() - 1;
    let mut phi = (1u64 << steps) as f64 * a[steps] * u;
    for i in (1..=steps).rev() {
        let ratio = (c[i] / a[i] * phi.sin()).clamp(-1.0, 1.0);
        phi = 0.5 * (phi + ratio.asin());
    }
    phi
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    0.5 * (a + b)
}

fn principal_f(phi: f64, k: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    s * carlson_rf(c * c, 1.0 - k * k * s * s, 1.0)
}

fn principal_e(phi: f64, k: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    let (x, y) = (c * c, 1.0 - k * k * s * s);
    s * carlson_rf(x, y, 1.0) - k * k * s * s * s / 3.0 * carlson_rd(x, y, 1.0)
}

/// Carlson's symmetric integral `R_F(x, y, z)`.
fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + z) / 3.0;
    let q = (3.0e-16f64).powf(-1.0 / 6.0) * (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs());
    let (x0, y0) = (x, y);
    let mut a = a0;
    let mut scale = 1.0;
    while scale * q >= a.abs() {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sy * sz + sz * sx;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        a = 0.25 * (a + lambda);
        scale *= 0.25;
    }
    let xx = (a0 - x0) * scale / a;
    let yy = (a0 - y0) * scale / a;
    let zz = -xx - yy;
    let e2 = xx * yy - zz * zz;
    let e3 = xx * yy * zz;
    (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / a.sqrt()
}

/// Carlson's symmetric integral `R_D(x, y, z)`.
fn carlson_rd(x: f64, y: f64, z: f64) -> f64 {
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + 3.0 * z) / 5.0;
    let q = (1.0e-16f64 / 4.0).powf(-1.0 / 6.0)
        * (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs());
    let (x0, y0) = (x, y);
    let mut a = a0;
    let mut scale = 1.0;
    let mut sum = 0.0;
    while scale * q >= a.abs() {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sy * sz + sz * sx;
        sum += scale / (sz * (z + lambda));
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        a = 0.25 * (a + lambda);
        scale *= 0.25;
    }
    let xx = (a0 - x0) * scale / a;
    let yy = (a0 - y0) * scale / a;
    let zz = -(xx + yy) / 3.0;
    let xy = xx * yy;
    let z2 = zz * zz;
    let e2 = xy - 6.0 * z2;
    let e3 = (3.0 * xy - 8.0 * z2) * zz;
    let e4 = 3.0 * (xy - z2) * z2;
    let e5 = xy * z2 * zz;
    let series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0
        - 3.0 * e4 / 22.0
        - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0;
    scale * series / (a * a.sqrt()) + 3.0 * sum
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Adaptive Simpson quadrature, kept independent of the Carlson path.
    fn quad(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
            (b - a) / 6.0 * (fa + 4.0 * fm + fb)
        }
        #[allow(clippy::too_many_arguments)]
        fn rec(
            f: &dyn Fn(f64) -> f64,
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            eps: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = simpson(a, m, fa, flm, fm);
            let right = simpson(m, b, fm, frm, fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * eps {
                return left + right + (left + right - whole) / 15.0;
            }
            rec(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
        }
        let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
        let whole = simpson(a, b, fa, fm, fb);
        rec(f, a, b, fa, fm, fb, whole, 1e-14, 40)
    }

    #[test]
    fn complete_k_values() {
        assert_eq!(complete_k(0.0).unwrap(), FRAC_PI_2);
        let k = std::f64::consts::FRAC_1_SQRT_2;
        let oracle = quad(
            &|a: f64| 1.0 / (1.0 - k * k * a.sin().powi(2)).sqrt(),
            0.0,
            FRAC_PI_2,
        );
        assert!((complete_k(k).unwrap() - oracle).abs() < 1e-12 * oracle);
        assert!(complete_k(0.999).unwrap() > complete_k(0.9).unwrap());
        assert_eq!(complete_k(1.0), Err(Error::Divergence));
        assert!(complete_k(1.5).is_err());
        assert!(complete_k(-0.1).is_err());
    }

    #[test]
    fn incomplete_examples() {
        for k in [0.0, 0.3, 0.9] {
            assert_eq!(incomplete_f(0.0, k).unwrap(), 0.0);
            assert_eq!(incomplete_e(0.0, k).unwrap(), 0.0);
            let kk = complete_k(k).unwrap();
            assert!((incomplete_f(FRAC_PI_2, k).unwrap() - kk).abs() < 1e-14 * kk);
        }
        for phi in [-4.0, -0.3, 0.7, 2.5, 11.0] {
            assert!((incomplete_f(phi, 0.0).unwrap() - phi).abs() < 1e-13);
            assert!((incomplete_e(phi, 0.0).unwrap() - phi).abs() < 1e-13);
        }
        let oracle = quad(
            &|a: f64| (1.0 - 0.25 * a.sin().powi(2)).sqrt(),
            0.0,
            FRAC_PI_2,
        );
        assert!((incomplete_e(FRAC_PI_2, 0.5).unwrap() - oracle).abs() < 1e-13);
        assert!(incomplete_f(0.2, 1.01).is_err());
    }

    #[test]
    fn quasi_periodic_extension() {
        let k = 0.8;
        let kk = complete_k(k).unwrap();
        let ee = complete_e(k).unwrap();
        for phi in [-1.2, 0.1, 1.4] {
            for n in [-3i32, -1, 2, 5] {
                let shifted = phi + n as f64 * PI;
                let f = incomplete_f(shifted, k).unwrap();
                assert!((f - incomplete_f(phi, k).unwrap() - 2.0 * n as f64 * kk).abs() < 1e-12);
                let e = incomplete_e(shifted, k).unwrap();
                assert!((e - incomplete_e(phi, k).unwrap() - 2.0 * n as f64 * ee).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn jacobi_limits() {
        let j = jacobi(0.0, 0.6).unwrap();
        assert_eq!((j.sn, j.cn, j.dn, j.am), (0.0, 1.0, 1.0, 0.0));
        let j = jacobi(0.5, 0.0).unwrap();
        assert_eq!(
            (j.sn, j.cn, j.dn, j.am),
            (0.5f64.sin(), 0.5f64.cos(), 1.0, 0.5)
        );
        let j = jacobi(2.0, 1.0).unwrap();
        let sech = 1.0 / 2.0f64.cosh();
        assert!((j.sn - 2.0f64.tanh()).abs() < 1e-15);
        assert!((j.cn - sech).abs() < 1e-15 && (j.dn - sech).abs() < 1e-15);
        let gd = 2.0 * (1.0f64).tanh().atan();
        assert!((j.am - gd).abs() < 1e-15);
    }

    #[test]
    fn amplitude_inverts_f() {
        for k in [0.1, 0.5, 0.9, 0.999] {
            for i in -15..=15 {
                let phi = i as f64 * 0.1;
                let u = incomplete_f(phi, k).unwrap();
                assert!(
                    (jacobi(u, k).unwrap().am - phi).abs() < 1e-12,
                    "k={k} phi={phi}"
                );
            }
        }
    }

    #[test]
    fn dn_derivative() {
        for k in [0.2, 0.7, 0.95] {
            for i in 0..20 {
                let u = -3.0 + 0.37 * i as f64;
                let h = 1e-6;
                let fd = (jacobi(u + h, k).unwrap().dn - jacobi(u - h, k).unwrap().dn) / (2.0 * h);
                let j = jacobi(u, k).unwrap();
                assert!((fd + k * k * j.sn * j.cn).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn epsilon_matches_dn_squared_integral() {
        for k in [0.3, 0.9] {
            for u in [-2.5, 0.4, 3.0, 7.5] {
                let oracle = quad(&|v: f64| jacobi(v, k).unwrap().dn.powi(2), 0.0, u);
                assert!((jacobi_epsilon(u, k).unwrap() - oracle).abs() < 1e-11);
            }
        }
        assert!((jacobi_epsilon(0.7, 1.0).unwrap() - 0.7f64.tanh()).abs() < 1e-15);
    }

    #[test]
    fn reciprocal_modulus_extension() {
        // sn(u, k) for k > 1 solves sn'' = -(1 + k²) sn + 2k² sn³ like any modulus.
        let k = 1.6;
        for u in [0.1, 0.3, 0.5] {
            let (sn, cn, dn) = sn_cn_dn_any(u, k).unwrap();
            assert!((sn * sn + cn * cn - 1.0).abs() < 1e-13);
            assert!((dn * dn + k * k * sn * sn - 1.0).abs() < 1e-13);
            let h = 1e-5;
            let fd =
                (sn_cn_dn_any(u + h, k).unwrap().0 - sn_cn_dn_any(u - h, k).unwrap().0) / (2.0 * h);
            assert!((fd - cn * dn).abs() < 1e-8);
            let oracle = quad(&|v: f64| sn_cn_dn_any(v, k).unwrap().2.powi(2), 0.0, u);
            assert!((epsilon_any(u, k).unwrap() - oracle).abs() < 1e-11);
        }
    }
}
