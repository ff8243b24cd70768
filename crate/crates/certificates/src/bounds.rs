use serde::{Deserialize, Serialize};

use crate::{CertError, Result};

/// `γ = 1 / ln((1 - e^{-2})^{-1})`.
pub fn gamma() -> f64 {
    1.0 / -(1.0 - (-2.0f64).exp()).ln()
}

/// The scalar certificates a bound depends on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertValues {
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "S")]
    pub s: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundDims {
    pub d_z: usize,
    pub d_w: usize,
}

// Logs of ratios below one would make the square-root term undefined; the
// bounds are only meaningful where they are positive, so clamp at zero.
fn pos_ln(x: f64) -> f64 {
    x.ln().max(0.0)
}

/// The three terms shared by the main and simplex bounds (everything except
/// the exponential tail).
fn common_terms(cert: &CertValues, dims: &BoundDims, n: f64, eta: f64, delta: f64) -> f64 {
    let g = gamma();
    let dz = dims.d_z as f64;
    let si = 1.0 / cert.s + 1.0;
    let l = pos_ln(dz * cert.r / delta);
    8.0 * eta * si * dz * (dz + 1.0) * (g * l * n).sqrt()
        + g * cert.c * dz * dz * l
        + si * dz * (36.0 * dz + 8.0) * n * delta
}

fn main_tail(cert: &CertValues, dims: &BoundDims, n: f64, eta: f64, c_exp: f64) -> f64 {
    let dw = dims.d_w as f64;
    cert.c
        * dw
        * n
        * n
        * (n + 1.0)
        * (-c_exp * eta * eta / (cert.r * cert.r * dw.powf(5.0 / 3.0))).exp()
}

/// Four-term regret bound with the unspecified constant in the exponent set
/// to `c_exp`.
pub fn bound_main(
    cert: &CertValues,
    dims: &BoundDims,
    n: usize,
    eta: f64,
    delta: f64,
    c_exp: f64,
) -> f64 {
    let n = n as f64;
    common_terms(cert, dims, n, eta, delta) + main_tail(cert, dims, n, eta, c_exp)
}

/// The simplex-outcome variant, all constants explicit.
pub fn bound_simplex(
    cert: &CertValues,
    dims: &BoundDims,
    n: usize,
    eta: f64,
    delta: f64,
    labels: usize,
) -> f64 {
    let nf = n as f64;
    let k = dims.d_w as f64 + 1.0;
    let base = 2.0 * std::f64::consts::E * labels as f64 / k;
    let tail = 0.5
        * cert.c
        * base.powf(k)
        * nf
        * nf
        * (nf + 1.0)
        * (-eta * eta / (2.0 * cert.r * cert.r)).exp();
    common_terms(cert, dims, nf, eta, delta) + tail
}

/// Logarithmic bound for a positive gap `g`.
pub fn bound_gap(
    cert: &CertValues,
    dims: &BoundDims,
    n: usize,
    eta: f64,
    g: f64,
    c_exp: f64,
) -> Result<f64> {
    if !(g > 0.0) {
        return Err(CertError::ZeroGap);
    }
    let dz = dims.d_z as f64;
    let si = 1.0 / cert.s;
    let lead = 256.0 * si * (si + 1.0) * (dz + 1.0).powi(2) * eta * eta / g + cert.c;
    let l = pos_ln(144.0 * si * dz.powi(3) * cert.r / g);
    Ok(gamma() * dz * dz * lead * l + main_tail(cert, dims, n as f64, eta, c_exp))
}

/// Recommended `η` for the simplex bound.
pub fn eta_simplex(cert: &CertValues, dims: &BoundDims, n: usize, labels: usize) -> f64 {
    let k = dims.d_w as f64 + 1.0;
    let nf = n as f64;
    cert.r * (2.0 * k * pos_ln(cert.c * nf.powi(3) * labels as f64 / k)).sqrt()
}

/// Recommended `η` for the main and gap bounds, with the free constant `scale`.
pub fn eta_main(cert: &CertValues, dims: &BoundDims, n: usize, scale: f64) -> f64 {
    let dw = dims.d_w.max(1) as f64;
    scale * cert.r * dw.powf(5.0 / 6.0) * pos_ln(cert.c * dw * n as f64).sqrt()
}

/// The `δ = 1/√N` both bounds recommend.
pub fn delta_default(n: usize) -> f64 {
    1.0 / (n as f64).sqrt()
}
