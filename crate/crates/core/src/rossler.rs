//! Reference Rössler flow.
//!
//! `x' = −y − z`, `y' = x + a·y`, `z' = b + x·z − c·z`, integrated with
//! fixed-step classical RK4. X maxima of the integrated curve feed the
//! first-return map that the logistic carrier imitates.

use alloc::vec::Vec;

use crate::error::{ensure, Error, Result};
use crate::trajectory::{Provenance, Trajectory, TrajectoryPoint};

pub type State = [f64; 3];

/// Any coordinate beyond this magnitude aborts the integration.
pub const BLOW_UP_LIMIT: f64 = 1e6;

/// Maxima closer than this fall into the same cluster.
pub const DEFAULT_CLUSTER_TOL: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RosslerParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub dt: f64,
    pub t_end: f64,
    /// Leading time span ignored by the analysis stage.
    pub transient: f64,
    pub initial_state: State,
}

impl Default for RosslerParams {
    fn default() -> Self {
        Self {
            a: 0.2,
            b: 0.2,
            c: 4.0,
            dt: 0.01,
            t_end: 500.0,
            transient: 200.0,
            initial_state: [0.1, 0.1, 0.1],
        }
    }
}

impl RosslerParams {
    pub fn with_c(c: f64) -> Self {
        Self {
            c,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a", self.a), ("b", self.b), ("c", self.c)] {
            ensure(v.is_finite(), name, v, "finite")?;
        }
        ensure(
            self.dt > 0.0 && self.dt.is_finite(),
            "dt",
            self.dt,
            "dt > 0",
        )?;
        ensure(
            self.transient >= 0.0,
            "transient",
            self.transient,
            "transient >= 0",
        )?;
        ensure(
            self.t_end > self.transient && self.t_end.is_finite(),
            "t_end",
            self.t_end,
            "t_end > transient",
        )?;
        for v in self.initial_state {
            ensure(v.is_finite(), "initial_state", v, "finite")?;
        }
        Ok(())
    }

    fn steps(&self) -> usize {
        libm::round(self.t_end / self.dt) as usize
    }
}

pub fn rossler_derivative(state: &State, params: &RosslerParams) -> State {
    let [x, y, z] = *state;
    [-y - z, x + params.a * y, params.b + x * z - params.c * z]
}

fn axpy(base: &State, h: f64, k: &State) -> State {
    [base[0] + h * k[0], base[1] + h * k[1], base[2] + h * k[2]]
}

/// One classical fourth-order Runge–Kutta step.
pub fn rk4_step(state: &State, dt: f64, params: &RosslerParams) -> State {
    let k1 = rossler_derivative(state, params);
    let k2 = rossler_derivative(&axpy(state, 0.5 * dt, &k1), params);
    let k3 = rossler_derivative(&axpy(state, 0.5 * dt, &k2), params);
    let k4 = rossler_derivative(&axpy(state, dt, &k3), params);
    let mut next = *state;
    for i in 0..3 {
        next[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    next
}

fn check_bounded(state: &State, t: f64) -> Result<()> {
    if state.iter().all(|v| libm::fabs(*v) <= BLOW_UP_LIMIT) {
        Ok(())
    } else {
        Err(Error::Divergence {
            t,
            limit: BLOW_UP_LIMIT,
        })
    }
}

fn run(params: &RosslerParams, mut visit: impl FnMut(f64, &State)) -> Result<State> {
    params.validate()?;
    let mut state = params.initial_state;
    visit(0.0, &state);
    for n in 1..=params.steps() {
        state = rk4_step(&state, params.dt, params);
        // Times from the step count, not an accumulated sum.
        let t = n as f64 * params.dt;
        check_bounded(&state, t)?;
        visit(t, &state);
    }
    Ok(state)
}

/// Integrates from `initial_state` over `[0, t_end]`, one sample per step.
pub fn integrate(params: &RosslerParams) -> Result<Trajectory> {
    let mut points = Vec::with_capacity(params.steps().saturating_add(1).min(1 << 26));
    run(params, |t, s| {
        points.push(TrajectoryPoint::new(t, s[0], s[1], s[2]))
    })?;
    Ok(Trajectory::from_sorted(
        points,
        Provenance::Integrated { params: *params },
    ))
}

/// State at `t_end` without storing the path.
pub fn integrate_endpoint(params: &RosslerParams) -> Result<State> {
    run(params, |_, _| {})
}

fn norm(a: &State, b: &State) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    libm::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2])
}

/// Endpoint Richardson ratio `|e(h) − e(h/2)| / |e(h/2) − e(h/4)|` with
/// `h = params.dt`. Close to 16 for a fourth-order scheme.
pub fn self_convergence_ratio(params: &RosslerParams) -> Result<f64> {
    let at = |dt: f64| {
        integrate_endpoint(&RosslerParams {
            dt,
            transient: 0.0,
            ..*params
        })
    };
    let coarse = at(params.dt)?;
    let mid = at(params.dt / 2.0)?;
    let fine = at(params.dt / 4.0)?;
    Ok(norm(&coarse, &mid) / norm(&mid, &fine))
}

/// A refined local maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Maximum {
    pub t: f64,
    pub value: f64,
}

/// Interior maxima `s[i−1] < s[i] >= s[i+1]` with `t > transient`, each
/// refined with a three-point parabola. Endpoints never qualify.
pub fn find_maxima(ts: &[f64], values: &[f64], transient: f64) -> Vec<Maximum> {
    debug_assert_eq!(ts.len(), values.len());
    let mut out = Vec::new();
    for i in 1..values.len().saturating_sub(1) {
        let (y0, y1, y2) = (values[i - 1], values[i], values[i + 1]);
        if !(y0 < y1 && y1 >= y2) || ts[i] <= transient {
            continue;
        }
        let curvature = y0 - 2.0 * y1 + y2;
        let offset = if curvature != 0.0 {
            0.5 * (y0 - y2) / curvature
        } else {
            0.0
        };
        let dt = ts[i] - ts[i - 1];
        out.push(Maximum {
            t: ts[i] + offset * dt,
            value: y1 - 0.25 * (y0 - y2) * offset,
        });
    }
    out
}

/// Local maxima of X after `transient`. An empty result means the run was
/// too short.
pub fn extract_x_maxima(traj: &Trajectory, transient: f64) -> Vec<Maximum> {
    let ts: Vec<f64> = traj.points().iter().map(|p| p.t).collect();
    let xs: Vec<f64> = traj.xs().collect();
    find_maxima(&ts, &xs, transient)
}

/// Successive maxima and their `(X_n, X_{n+1})` pairs.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReturnMap {
    pub maxima: Vec<Maximum>,
    pub pairs: Vec<(f64, f64)>,
}

pub fn first_return_map(maxima: &[Maximum]) -> Result<ReturnMap> {
    if maxima.len() < 2 {
        return Err(Error::InsufficientData {
            what: "maxima",
            needed: 2,
            got: maxima.len(),
        });
    }
    let pairs = maxima
        .windows(2)
        .map(|w| (w[0].value, w[1].value))
        .collect();
    Ok(ReturnMap {
        maxima: maxima.to_vec(),
        pairs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Cluster {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub count: usize,
}

impl Cluster {
    pub fn spread(&self) -> f64 {
        self.max - self.min
    }
}

/// Single-linkage grouping on the sorted values: a gap of at least `tol`
/// starts a new cluster. Clusters come out in ascending order.
pub fn cluster_values(values: &[f64], tol: f64) -> Vec<Cluster> {
    let mut sorted: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    sorted.sort_by(f64::total_cmp);
    let mut clusters: Vec<Cluster> = Vec::new();
    let mut sum = 0.0;
    for v in sorted {
        match clusters.last_mut() {
            Some(c) if v - c.max < tol => {
                c.max = v;
                c.count += 1;
                sum += v;
                c.mean = sum / c.count as f64;
            }
            _ => {
                sum = v;
                clusters.push(Cluster {
                    min: v,
                    max: v,
                    mean: v,
                    count: 1,
                });
            }
        }
    }
    clusters
}

/// Smallest gap between neighbouring clusters, `None` with fewer than two.
pub fn min_cluster_gap(clusters: &[Cluster]) -> Option<f64> {
    clusters
        .windows(2)
        .map(|w| w[1].min - w[0].max)
        .min_by(f64::total_cmp)
}

/// The last `period` maxima values in time order.
pub fn maxima_cycle(maxima: &[Maximum], period: usize) -> Result<Vec<f64>> {
    if period == 0 || maxima.len() < period {
        return Err(Error::InsufficientData {
            what: "maxima",
            needed: period.max(1),
            got: maxima.len(),
        });
    }
    Ok(maxima[maxima.len() - period..]
        .iter()
        .map(|m| m.value)
        .collect())
}

/// Least-squares quadratic `X_{n+1} = c0 + c1·X_n + c2·X_n²` on a return
/// map, read as a logistic map under a common affine rescaling of both axes.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LogisticFit {
    pub coefficients: [f64; 3],
    pub rms: f64,
    /// `max − min` over all maxima.
    pub range: f64,
    /// Logistic parameter of the conjugate map, when the fitted parabola
    /// opens downward and crosses the diagonal.
    pub equivalent_lambda: Option<f64>,
    /// Position of the conjugate of the logistic fixed point 0.
    pub offset: Option<f64>,
    /// Length mapped onto the logistic unit interval.
    pub scale: Option<f64>,
}

impl LogisticFit {
    pub fn relative_rms(&self) -> f64 {
        self.rms / self.range
    }

    pub fn predict(&self, x: f64) -> f64 {
        let [c0, c1, c2] = self.coefficients;
        c0 + x * (c1 + x * c2)
    }
}

/// Pure origin-anchored form `X_{n+1} = α·X_n·(β − X_n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OriginLogisticFit {
    pub alpha: f64,
    pub beta: f64,
    pub rms: f64,
    pub range: f64,
}

impl OriginLogisticFit {
    pub fn relative_rms(&self) -> f64 {
        self.rms / self.range
    }
}

fn maxima_range(map: &ReturnMap) -> f64 {
    let (lo, hi) = map
        .maxima
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), m| {
            (lo.min(m.value), hi.max(m.value))
        });
    hi - lo
}

/// Solves a small dense system by Gaussian elimination with partial pivoting.
fn solve<const N: usize>(mut a: [[f64; N]; N], mut b: [f64; N]) -> Option<[f64; N]> {
    for col in 0..N {
        let pivot =
            (col..N).max_by(|&i, &j| libm::fabs(a[i][col]).total_cmp(&libm::fabs(a[j][col])))?;
        if libm::fabs(a[pivot][col]) < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..N {
            let f = a[row][col] / a[col][col];
            for k in col..N {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; N];
    for row in (0..N).rev() {
        let tail: f64 = (row + 1..N).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Some(x)
}

fn insufficient_pairs(got: usize, needed: usize) -> Error {
    Error::InsufficientData {
        what: "return-map pairs",
        needed,
        got,
    }
}

pub fn fit_logistic(map: &ReturnMap) -> Result<LogisticFit> {
    let n = map.pairs.len();
    if n < 3 {
        return Err(insufficient_pairs(n, 3));
    }
    // Centered and scaled abscissa keeps the normal equations well conditioned.
    let mean = map.pairs.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let var = map
        .pairs
        .iter()
        .map(|p| (p.0 - mean) * (p.0 - mean))
        .sum::<f64>()
        / n as f64;
    let sd = libm::sqrt(var);
    if !(sd > 0.0) {
        return Err(insufficient_pairs(1, 3));
    }
    let mut ata = [[0.0; 3]; 3];
    let mut atb = [0.0; 3];
    for &(x, y) in &map.pairs {
        let s = (x - mean) / sd;
        let basis = [1.0, s, s * s];
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += basis[i] * basis[j];
            }
            atb[i] += basis[i] * y;
        }
    }
    let [d0, d1, d2] = solve(ata, atb).ok_or_else(|| insufficient_pairs(2, 3))?;
    let c2 = d2 / (sd * sd);
    let c1 = d1 / sd - 2.0 * d2 * mean / (sd * sd);
    let c0 = d0 - d1 * mean / sd + d2 * mean * mean / (sd * sd);

    let sse: f64 = map
        .pairs
        .iter()
        .map(|&(x, y)| {
            let s = (x - mean) / sd;
            let r = y - (d0 + d1 * s + d2 * s * s);
            r * r
        })
        .sum();

    // Fixed points of the fit; the one with slope λ > 1 maps to 0 of
    // λu(1−u), and u = 1 sits `scale` away from it.
    let (mut equivalent_lambda, mut offset, mut scale) = (None, None, None);
    if c2 < 0.0 {
        let disc = (c1 - 1.0) * (c1 - 1.0) - 4.0 * c2 * c0;
        if disc >= 0.0 {
            let root = libm::sqrt(disc);
            let candidates = [
                (-(c1 - 1.0) + root) / (2.0 * c2),
                (-(c1 - 1.0) - root) / (2.0 * c2),
            ];
            let slope = |x: f64| c1 + 2.0 * c2 * x;
            let o = if slope(candidates[0]) >= slope(candidates[1]) {
                candidates[0]
            } else {
                candidates[1]
            };
            let lambda = slope(o);
            equivalent_lambda = Some(lambda);
            offset = Some(o);
            scale = Some(-lambda / c2);
        }
    }

    Ok(LogisticFit {
        coefficients: [c0, c1, c2],
        rms: libm::sqrt(sse / n as f64),
        range: maxima_range(map),
        equivalent_lambda,
        offset,
        scale,
    })
}

pub fn fit_origin_logistic(map: &ReturnMap) -> Result<OriginLogisticFit> {
    let n = map.pairs.len();
    if n < 2 {
        return Err(insufficient_pairs(n, 2));
    }
    let mut ata = [[0.0; 2]; 2];
    let mut atb = [0.0; 2];
    for &(x, y) in &map.pairs {
        let basis = [x, x * x];
        for i in 0..2 {
            for j in 0..2 {
                ata[i][j] += basis[i] * basis[j];
            }
            atb[i] += basis[i] * y;
        }
    }
    let [p, q] = solve(ata, atb).ok_or_else(|| insufficient_pairs(1, 2))?;
    let sse: f64 = map
        .pairs
        .iter()
        .map(|&(x, y)| {
            let r = y - (p * x + q * x * x);
            r * r
        })
        .sum();
    let alpha = -q;
    Ok(OriginLogisticFit {
        alpha,
        beta: p / alpha,
        rms: libm::sqrt(sse / n as f64),
        range: maxima_range(map),
    })
}
