//! Finite-difference solver for the reduced radial equation
//!
//! ```text
//! -kappa u'' + V_eff(r) u = E u,   u(r_min) = u(r_max) = 0
//! ```
//!
//! on a uniform grid. It knows nothing about the closed forms and serves as
//! an independent check on them.

pub mod tridiag;

use std::io;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::molecule::MoleculeParams;
use crate::potential::{effective_unchecked, shape, CentrifugalMode};

pub use tridiag::SymTridiagonal;

pub const DEFAULT_R_MIN: f64 = 1e-4;
pub const DEFAULT_COUNT: usize = 40_000;
pub const MIN_COUNT: usize = 1000;

/// Uniform grid of `count` interior points; the two ends carry the
/// Dirichlet condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub count: usize,
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, count: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
            return Err(domain(format!("grid needs 0 < r_min < r_max, got [{r_min}, {r_max}]")));
        }
        if count < MIN_COUNT {
            return Err(domain(format!("grid needs at least {MIN_COUNT} points, got {count}")));
        }
        Ok(Self { r_min, r_max, count })
    }

    /// `r_min = 1e-4`, `r_max = r_e + 40/a`, 40000 points.
    pub fn default_for(params: &MoleculeParams) -> Self {
        Self {
            r_min: DEFAULT_R_MIN,
            r_max: params.r_e + 40.0 / params.a,
            count: DEFAULT_COUNT,
        }
    }

    pub fn spacing(&self) -> f64 {
        (self.r_max - self.r_min) / (self.count + 1) as f64
    }

    /// Interior point `i` in `0..count`.
    pub fn point(&self, i: usize) -> f64 {
        self.r_min + (i + 1) as f64 * self.spacing()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.point(i))
    }

    /// Same interval with the spacing halved.
    pub fn refined(&self) -> Self {
        Self {
            count: 2 * self.count + 1,
            ..*self
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialSolution {
    pub eigenvalue: f64,
    /// Amplitudes at the interior points, `sum psi^2 h = 1`.
    pub wavefunction: Vec<f64>,
    pub node_count: usize,
    pub grid: RadialGrid,
}

impl RadialSolution {
    /// `sum f(r_i) psi_i^2 h`.
    pub fn expectation<F: Fn(f64) -> f64>(&self, f: F) -> Result<f64> {
        let h = self.grid.spacing();
        let mut acc = 0.0;
        for (i, psi) in self.wavefunction.iter().enumerate() {
            let v = f(self.grid.point(i));
            if !v.is_finite() {
                return Err(domain(format!(
                    "observable is not finite at r = {}",
                    self.grid.point(i)
                )));
            }
            acc += v * psi * psi * h;
        }
        Ok(acc)
    }

    /// `<-kappa d^2/dr^2>` with the same three-point stencil as the solver.
    pub fn kinetic_expectation(&self, kappa: f64) -> f64 {
        let psi = &self.wavefunction;
        let h = self.grid.spacing();
        let n = psi.len();
        let mut acc = 0.0;
        for i in 0..n {
            let left = if i > 0 { psi[i - 1] } else { 0.0 };
            let right = if i + 1 < n { psi[i + 1] } else { 0.0 };
            acc += psi[i] * (2.0 * psi[i] - left - right);
        }
        kappa * acc / h
    }

    /// Writes `r_angstrom,psi` rows.
    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["r_angstrom", "psi"])?;
        for (i, psi) in self.wavefunction.iter().enumerate() {
            w.write_record([self.grid.point(i).to_string(), psi.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Free function form of [`RadialSolution::expectation`].
pub fn numeric_expectation<F: Fn(f64) -> f64>(sol: &RadialSolution, observable: F) -> Result<f64> {
    sol.expectation(observable)
}

fn count_nodes(psi: &[f64]) -> usize {
    let peak = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cutoff = 1e-10 * peak;
    let mut last = 0.0f64;
    let mut nodes = 0;
    for &v in psi {
        if v.abs() < cutoff {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            nodes += 1;
        }
        last = v;
    }
    nodes
}

/// Lowest `n_states` eigenpairs for an arbitrary potential on the grid.
pub fn solve_potential<V: Fn(f64) -> f64>(
    grid: &RadialGrid,
    kappa: f64,
    potential: V,
    n_states: usize,
) -> Result<Vec<RadialSolution>> {
    if n_states == 0 || n_states > grid.count {
        return Err(domain(format!(
            "cannot request {n_states} states on {} points",
            grid.count
        )));
    }
    let h = grid.spacing();
    let kin = kappa / (h * h);
    let diag: Vec<f64> = grid.points().map(|r| 2.0 * kin + potential(r)).collect();
    let matrix = SymTridiagonal::new(diag, vec![-kin; grid.count - 1])?;

    (0..n_states)
        .map(|k| {
            let eigenvalue = matrix.eigenvalue(k);
            let mut psi = matrix.eigenvector(eigenvalue)?;
            let norm = (psi.iter().map(|v| v * v).sum::<f64>() * h).sqrt();
            let peak = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let first = psi.iter().find(|v| v.abs() >= 1e-10 * peak).copied().unwrap_or(1.0);
            let sign = if first < 0.0 { -1.0 } else { 1.0 };
            psi.iter_mut().for_each(|v| *v *= sign / norm);
            let node_count = count_nodes(&psi);
            if node_count != k {
                return Err(Error::Solver(format!(
                    "state {k} has {node_count} nodes; eigenvalues too close to resolve"
                )));
            }
            Ok(RadialSolution {
                eigenvalue,
                wavefunction: psi,
                node_count,
                grid: *grid,
            })
        })
        .collect()
}

/// Bound states from [`solve_radial`]; `complete` is false when fewer than
/// the requested number had negative energy.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSpectrum {
    pub solutions: Vec<RadialSolution>,
    pub requested: usize,
    pub complete: bool,
}

pub fn solve_radial(
    params: &MoleculeParams,
    l: u32,
    mode: CentrifugalMode,
    grid: &RadialGrid,
    n_states: usize,
) -> Result<RadialSpectrum> {
    let sh = shape(params)?;
    let kappa = params.kappa()?;
    let all = solve_potential(grid, kappa, |r| effective_unchecked(&sh, kappa, l, r, mode), n_states)?;
    let solutions: Vec<RadialSolution> = all.into_iter().filter(|s| s.eigenvalue < 0.0).collect();
    Ok(RadialSpectrum {
        complete: solutions.len() == n_states,
        requested: n_states,
        solutions,
    })
}
