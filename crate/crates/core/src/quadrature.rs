//! Adaptive Gauss–Legendre quadrature of dual-valued integrands.

use std::sync::OnceLock;

use crate::dual::DualScalar;
use crate::error::{Error, Result};

/// Nodes per panel.
pub const GL_ORDER: usize = 16;

/// Nodes and weights on `[-1, 1]`, computed once by Newton iteration on the
/// Legendre polynomial.
pub fn gauss_legendre() -> &'static ([f64; GL_ORDER], [f64; GL_ORDER]) {
    static TABLE: OnceLock<([f64; GL_ORDER], [f64; GL_ORDER])> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = GL_ORDER;
        let mut x = [0.0; GL_ORDER];
        let mut w = [0.0; GL_ORDER];
        for i in 0..n.div_ceil(2) {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, z);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
                let dz = p1 / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            x[i] = -z;
            x[n - 1 - i] = z;
            let wi = 2.0 / ((1.0 - z * z) * dp * dp);
            w[i] = wi;
            w[n - 1 - i] = wi;
        }
        (x, w)
    })
}

fn panel<F>(f: &F, a: f64, b: f64) -> Result<DualScalar>
where
    F: Fn(f64) -> Result<DualScalar>,
{
    let (x, w) = gauss_legendre();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = DualScalar::ZERO;
    for (xi, wi) in x.iter().zip(w) {
        acc += f(mid + half * xi)?.scale(*wi);
    }
    Ok(acc.scale(half))
}

/// Integrate `f` over `[a, b]`.
///
/// Panels are bisected until the real part of the two-half estimate agrees
/// with the whole-panel estimate to `tol`; the dual part rides along on the
/// same subdivision.
pub fn integrate<F>(f: &F, a: f64, b: f64, tol: f64, max_depth: usize) -> Result<DualScalar>
where
    F: Fn(f64) -> Result<DualScalar>,
{
    if a == b {
        return Ok(DualScalar::ZERO);
    }
    let whole = panel(f, a, b)?;
    refine(f, a, b, whole, tol, max_depth)
}

fn refine<F>(f: &F, a: f64, b: f64, whole: DualScalar, tol: f64, depth: usize) -> Result<DualScalar>
where
    F: Fn(f64) -> Result<DualScalar>,
{
    let m = 0.5 * (a + b);
    let left = panel(f, a, m)?;
    let right = panel(f, m, b)?;
    let sum = left + right;
    if (sum.re - whole.re).abs() <= tol {
        return Ok(sum);
    }
    if depth == 0 {
        return Err(Error::QuadratureFailure { a, b, tol });
    }
    Ok(refine(f, a, m, left, 0.5 * tol, depth - 1)? + refine(f, m, b, right, 0.5 * tol, depth - 1)?)
}
