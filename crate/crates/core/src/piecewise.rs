//! Closed-form pieces joining consecutive carrier radii.
//!
//! Each piece spans one revolution in normalized time `τ ∈ [0, 1)`. The
//! radius is a sigmoid step from `r_i` to `r_{i+1}` plus two Gaussian-shaped
//! oscillator terms; the elevation is a fourth-power bump scaled by `r_i`.
//! Points rotate uniformly in the X, Y plane with a π phase so that the orbit
//! starts on the negative X axis.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use crate::error::{ensure, Error, Result};
use crate::trajectory::{Provenance, Trajectory, TrajectoryPoint};

/// Shape constants of the radius and elevation profiles.
///
/// Serialized names follow the command-line flags (`m3`..`m8`, `gauss_a`,
/// `c3`).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShapeParams {
    #[cfg_attr(feature = "serde", serde(rename = "m3"))]
    pub sigmoid_center: f64,
    #[cfg_attr(feature = "serde", serde(rename = "m4"))]
    pub sigmoid_width: f64,
    #[cfg_attr(feature = "serde", serde(rename = "m5"))]
    pub first_level_amplitude: f64,
    #[cfg_attr(feature = "serde", serde(rename = "m6"))]
    pub first_level_center: f64,
    #[cfg_attr(feature = "serde", serde(rename = "m7"))]
    pub zero_level_amplitude: f64,
    #[cfg_attr(feature = "serde", serde(rename = "m8"))]
    pub zero_level_center: f64,
    /// Gaussian sharpness; scales the argument of both oscillator terms.
    #[cfg_attr(feature = "serde", serde(rename = "gauss_a"))]
    pub sharpness: f64,
    #[cfg_attr(feature = "serde", serde(rename = "c3"))]
    pub elevation_scale: f64,
    /// Elevation phase shift in radians.
    pub phase: f64,
    /// Samples per piece.
    pub npoints: usize,
}

impl Default for ShapeParams {
    fn default() -> Self {
        Self {
            sigmoid_center: 0.5,
            sigmoid_width: 0.05,
            first_level_amplitude: 3.5,
            first_level_center: 0.5,
            zero_level_amplitude: 2.5,
            zero_level_center: 0.55,
            sharpness: 7.0,
            elevation_scale: 1.0 / 3.5,
            phase: PI / 6.0,
            npoints: 80,
        }
    }
}

impl ShapeParams {
    pub fn validate(&self) -> Result<()> {
        ensure(self.sigmoid_width > 0.0, "m4", self.sigmoid_width, "m4 > 0")?;
        ensure(
            self.sharpness > 0.0,
            "gauss_a",
            self.sharpness,
            "gauss_a > 0",
        )?;
        ensure(
            self.elevation_scale > 0.0,
            "c3",
            self.elevation_scale,
            "c3 > 0",
        )?;
        for (name, v) in [
            ("m3", self.sigmoid_center),
            ("m5", self.first_level_amplitude),
            ("m6", self.first_level_center),
            ("m7", self.zero_level_amplitude),
            ("m8", self.zero_level_center),
            ("phase", self.phase),
        ] {
            ensure(v.is_finite(), name, v, "finite")?;
        }
        if self.npoints < 2 {
            return Err(Error::InsufficientData {
                what: "points per piece",
                needed: 2,
                got: self.npoints,
            });
        }
        Ok(())
    }
}

fn check_tau(tau: f64) -> Result<()> {
    ensure((0.0..1.0).contains(&tau), "tau", tau, "0 <= tau < 1")
}

fn check_radius(name: &'static str, r: f64) -> Result<()> {
    ensure(r >= 0.0 && r.is_finite(), name, r, "finite radius >= 0")
}

fn gauss(u: f64) -> f64 {
    libm::exp(-0.5 * u * u)
}

fn sigmoid(tau: f64, p: &ShapeParams) -> f64 {
    1.0 / (1.0 + libm::exp(-(tau - p.sigmoid_center) / p.sigmoid_width))
}

/// Radius formula without the `τ < 1` restriction; junction checks need `τ = 1`.
fn radius_at(r_i: f64, r_next: f64, tau: f64, p: &ShapeParams) -> f64 {
    let u = p.sharpness * (tau - p.first_level_center);
    let w = p.sharpness * (tau - p.zero_level_center);
    r_i + (r_next - r_i) * sigmoid(tau, p) - p.first_level_amplitude * u * gauss(u)
        + p.zero_level_amplitude * gauss(w)
}

fn elevation_at(r_i: f64, tau: f64, p: &ShapeParams) -> f64 {
    let base = (r_i / 10.0) * libm::exp(-libm::cos(TAU * tau - p.phase));
    let sq = base * base;
    p.elevation_scale * sq * sq
}

/// Radius in the X, Y plane at normalized time `tau` of the piece from `r_i`
/// to `r_next`.
pub fn radius_profile(r_i: f64, r_next: f64, tau: f64, params: &ShapeParams) -> Result<f64> {
    check_tau(tau)?;
    check_radius("r_i", r_i)?;
    check_radius("r_next", r_next)?;
    Ok(radius_at(r_i, r_next, tau, params))
}

/// Analytic `dR/dτ`.
pub fn radius_slope(r_i: f64, r_next: f64, tau: f64, params: &ShapeParams) -> Result<f64> {
    check_tau(tau)?;
    check_radius("r_i", r_i)?;
    check_radius("r_next", r_next)?;
    let p = params;
    let s = sigmoid(tau, p);
    let u = p.sharpness * (tau - p.first_level_center);
    let w = p.sharpness * (tau - p.zero_level_center);
    let step = (r_next - r_i) * s * (1.0 - s) / p.sigmoid_width;
    let first = -p.first_level_amplitude * p.sharpness * (1.0 - u * u) * gauss(u);
    let zero = -p.zero_level_amplitude * p.sharpness * w * gauss(w);
    Ok(step + first + zero)
}

/// Height above the X, Y plane; always `>= 0`.
pub fn elevation_profile(r_i: f64, tau: f64, params: &ShapeParams) -> Result<f64> {
    check_tau(tau)?;
    check_radius("r_i", r_i)?;
    Ok(elevation_at(r_i, tau, params))
}

fn check_radii(radii: &[f64], needed: usize) -> Result<()> {
    if radii.len() < needed {
        return Err(Error::InsufficientData {
            what: "radii",
            needed,
            got: radii.len(),
        });
    }
    radii.iter().try_for_each(|&r| check_radius("radius", r))
}

/// Samples of one piece, `npoints` of them at `τ = k / npoints`.
///
/// `first_index` is the global sample index of `k = 0`.
pub fn synthesize_piece(
    r_i: f64,
    r_next: f64,
    first_index: usize,
    params: &ShapeParams,
) -> impl Iterator<Item = TrajectoryPoint> + '_ {
    let n = params.npoints;
    (0..n).map(move |k| {
        let tau = k as f64 / n as f64;
        let angle = TAU * tau;
        let r = radius_at(r_i, r_next, tau, params);
        TrajectoryPoint {
            t: (first_index + k) as f64,
            x: -r * libm::cos(angle),
            y: -r * libm::sin(angle),
            z: elevation_at(r_i, tau, params),
        }
    })
}

/// Joins every consecutive pair of `radii` into one piece, giving
/// `(radii.len() − 1) · npoints` samples indexed by a running counter.
pub fn assemble_trajectory(radii: &[f64], params: &ShapeParams) -> Result<Trajectory> {
    params.validate()?;
    check_radii(radii, 2)?;
    let n = params.npoints;
    let pieces = radii.len() - 1;
    let mut points = Vec::with_capacity(pieces * n);
    for (i, pair) in radii.windows(2).enumerate() {
        points.extend(synthesize_piece(pair[0], pair[1], i * n, params));
    }
    Ok(Trajectory::from_sorted(
        points,
        Provenance::Synthesized {
            shape: *params,
            pieces,
        },
    ))
}

/// `|R_i(τ=1) − R_{i+1}(τ=0)|` at every interior junction.
pub fn piece_junction_gap(radii: &[f64], params: &ShapeParams) -> Result<Vec<f64>> {
    params.validate()?;
    check_radii(radii, 3)?;
    Ok(radii
        .windows(3)
        .map(|w| {
            let end = radius_at(w[0], w[1], 1.0, params);
            let start = radius_at(w[1], w[2], 0.0, params);
            libm::fabs(end - start)
        })
        .collect())
}
