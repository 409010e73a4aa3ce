//! Geodesics of `D` and `∇ = D + S_f`.
//!
//! `∇`-geodesics solve `x'' + S_{x'} x' = 0`. For a constant cubic form the
//! orbit map `Φ(x) = x + ½ S_x x` satisfies `∇ = Φ*D`, so geodesics are
//! `Φ⁻¹` of straight lines, which reduces to
//! `x(t) = p₀ + t v₀ − (t²/2) S_{v₀} v₀`.

use std::fmt::Write as _;

use super::structure::SKStructure;
use crate::affine::GroupChart;
use crate::error::{Error, Result};
use crate::numeric::{scalar_to_f64, vec_ops, Field, Scalar, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Connection {
    /// The flat Levi-Civita connection.
    LeviCivita,
    /// The special connection `∇ = D + S`.
    Special,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub points: Vec<Vec<f64>>,
}

impl Trajectory {
    /// CSV with header `t,x_1,..,x_{2n}`.
    pub fn to_csv(&self) -> String {
        let dim = self.points.first().map_or(0, Vec::len);
        let mut out = String::from("t");
        for i in 1..=dim {
            let _ = write!(out, ",x_{i}");
        }
        out.push('\n');
        for (t, x) in self.times.iter().zip(&self.points) {
            let _ = write!(out, "{t}");
            for v in x {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out
    }

    /// `max_k |a(t_k) − b(t_k)|_∞`; trajectories must share time stamps.
    pub fn sup_distance(&self, other: &Self) -> f64 {
        self.points
            .iter()
            .zip(&other.points)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }
}

/// Closed-form `∇`-geodesic for a constant cubic form.
#[derive(Clone, Debug)]
pub struct ClosedFormGeodesic {
    chart: GroupChart,
    p0: Vector,
    v0: Vector,
    /// `Φ(p₀)` and `dΦ_{p₀} v₀ = v₀ + S_{p₀} v₀`.
    base: Vector,
    direction: Vector,
    p0_f: Vec<f64>,
    v0_f: Vec<f64>,
    accel_f: Vec<f64>,
}

impl ClosedFormGeodesic {
    /// `x(t) = Φ⁻¹(Φ(p₀) + t·dΦ_{p₀} v₀)`, exact.
    pub fn eval_exact(&self, t: &Scalar) -> Result<Vector> {
        let y = vec_ops::add(&self.base, &vec_ops::scale(&self.direction, t));
        self.chart.orbit_map_inverse(&y)
    }

    /// `p₀ + t v₀ − (t²/2) S_{v₀} v₀`.
    pub fn eval(&self, t: f64) -> Vec<f64> {
        let c = 0.5 * t * t;
        self.p0_f.iter().zip(&self.v0_f).zip(&self.accel_f).map(|((p, v), a)| p + t * v - c * a).collect()
    }

    pub fn p0(&self) -> &[Scalar] {
        &self.p0
    }

    pub fn v0(&self) -> &[Scalar] {
        &self.v0
    }

    pub fn sample(&self, t_end: f64, dt: f64) -> Trajectory {
        let times = time_grid(t_end, dt);
        let points = times.iter().map(|&t| self.eval(t)).collect();
        Trajectory { times, points }
    }
}

/// `t_k = k·dt` for `k = 0..=round(t_end/dt)`.
pub fn time_grid(t_end: f64, dt: f64) -> Vec<f64> {
    let steps = (t_end / dt).round().max(0.0) as usize;
    (0..=steps).map(|k| k as f64 * dt).collect()
}

impl SKStructure {
    pub fn closed_form_geodesic(&self, p0: &[Scalar], v0: &[Scalar]) -> Result<ClosedFormGeodesic> {
        if !self.potential().has_constant_cubic() {
            return Err(Error::NonConstantCubic(self.potential().degree()));
        }
        let d = self.space().real_dim();
        Error::check_dim(d, p0.len())?;
        Error::check_dim(d, v0.len())?;
        let chart = GroupChart::new(self.s_at(&vec![Scalar::zero(); d])?)?;
        let base = chart.orbit_map(p0)?;
        let direction = vec_ops::add(v0, &chart.family().apply(p0, v0)?);
        let accel = chart.family().apply(v0, v0)?;
        Ok(ClosedFormGeodesic {
            p0_f: p0.iter().map(scalar_to_f64).collect(),
            v0_f: v0.iter().map(scalar_to_f64).collect(),
            accel_f: accel.iter().map(scalar_to_f64).collect(),
            chart,
            p0: p0.to_vec(),
            v0: v0.to_vec(),
            base,
            direction,
        })
    }

    /// Classical RK4 on `(x, v)` with `x' = v`, `v' = −S_{f,x}(v, v)` (or `0`
    /// for the Levi-Civita connection).
    pub fn rk4_geodesic(
        &self,
        connection: Connection,
        p0: &[f64],
        v0: &[f64],
        t_end: f64,
        dt: f64,
    ) -> Result<Trajectory> {
        let d = self.space().real_dim();
        Error::check_dim(d, p0.len())?;
        Error::check_dim(d, v0.len())?;
        if !(dt > 0.0) || !t_end.is_finite() {
            return Err(Error::InvalidDimension(format!("bad time step dt={dt}, t_end={t_end}")));
        }
        let potential = self.potential();
        let accel = |x: &[f64], v: &[f64]| -> Result<Vec<f64>> {
            match connection {
                Connection::LeviCivita => Ok(vec![0.0; d]),
                Connection::Special => Ok(potential.quadratic_f64(x, v)?.into_iter().map(|a| -a).collect()),
            }
        };
        let axpy = |a: &[f64], s: f64, b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x + s * y).collect() };

        let times = time_grid(t_end, dt);
        let mut points = Vec::with_capacity(times.len());
        let (mut x, mut v) = (p0.to_vec(), v0.to_vec());
        points.push(x.clone());
        for _ in 1..times.len() {
            let k1x = v.clone();
            let k1v = accel(&x, &v)?;
            let (x2, v2) = (axpy(&x, 0.5 * dt, &k1x), axpy(&v, 0.5 * dt, &k1v));
            let k2x = v2.clone();
            let k2v = accel(&x2, &v2)?;
            let (x3, v3) = (axpy(&x, 0.5 * dt, &k2x), axpy(&v, 0.5 * dt, &k2v));
            let k3x = v3.clone();
            let k3v = accel(&x3, &v3)?;
            let (x4, v4) = (axpy(&x, dt, &k3x), axpy(&v, dt, &k3v));
            let k4x = v4;
            let k4v = accel(&x4, &k4x)?;
            for i in 0..d {
                x[i] += dt / 6.0 * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i]);
                v[i] += dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
            }
            points.push(x.clone());
        }
        Ok(Trajectory { times, points })
    }
}
