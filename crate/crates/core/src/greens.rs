//! Vacuum dyadic Green's tensor and the polarization-projected coupling tables.
//!
//! Lengths are in units of 1/k_0 and rates in units of Γ.

use nalgebra::{Complex, DMatrix, Matrix3};
use rand::Rng;

use crate::angular::{spherical_vector, Polarization};
use crate::error::{Error, Result};
use crate::C64;

/// Explicit site positions, k_0 r dimensionless.
#[derive(Clone, Debug, PartialEq)]
pub struct Geometry {
    positions: Vec<[f64; 3]>,
}

impl Geometry {
    pub fn new(positions: Vec<[f64; 3]>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::Geometry("no sites".into()));
        }
        if positions.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Geometry("non-finite coordinate".into()));
        }
        for i in 0..positions.len() {
            for j in (i + 1)..positions.len() {
                if distance(&positions[i], &positions[j]) == 0.0 {
                    return Err(Error::Geometry(format!("sites {i} and {j} coincide")));
                }
            }
        }
        Ok(Geometry { positions })
    }

    pub fn single_site() -> Self {
        Geometry { positions: vec![[0.0; 3]] }
    }

    /// Simple cubic block of `dims` sites with spacing `lattice_constant`.
    pub fn cubic(lattice_constant: f64, dims: [usize; 3]) -> Result<Self> {
        if !(lattice_constant > 0.0) {
            return Err(Error::Geometry(format!("lattice constant {lattice_constant} must be positive")));
        }
        let mut positions = Vec::new();
        for x in 0..dims[0] {
            for y in 0..dims[1] {
                for z in 0..dims[2] {
                    positions.push([x as f64, y as f64, z as f64].map(|c| c * lattice_constant));
                }
            }
        }
        Geometry::new(positions)
    }

    /// Uniform positions in a cube of side `side`, redrawn until every pair is
    /// at least `min_separation` apart.
    pub fn random_cube<R: Rng>(n_sites: usize, side: f64, min_separation: f64, rng: &mut R) -> Result<Self> {
        const MAX_DRAWS: usize = 100_000;
        let mut positions: Vec<[f64; 3]> = Vec::with_capacity(n_sites);
        let mut draws = 0;
        while positions.len() < n_sites {
            draws += 1;
            if draws > MAX_DRAWS {
                return Err(Error::Geometry(format!(
                    "could not place {n_sites} sites with separation {min_separation} in a cube of side {side}"
                )));
            }
            let p = [rng.gen::<f64>() * side, rng.gen::<f64>() * side, rng.gen::<f64>() * side];
            if positions.iter().all(|q| distance(&p, q) >= min_separation) {
                positions.push(p);
            }
        }
        Geometry::new(positions)
    }

    pub fn n_sites(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[[f64; 3]] {
        &self.positions
    }
}

fn distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// G(r) = (3Γ/4){[1 − r̂r̂] e^{ix}/x + [1 − 3r̂r̂](i e^{ix}/x² − e^{ix}/x³)}, x = k_0 r.
pub fn green_tensor(r: [f64; 3], gamma: f64) -> Result<Matrix3<C64>> {
    let x = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if x == 0.0 {
        return Err(Error::Geometry("green_tensor at r = 0; use onsite_green".into()));
    }
    let rhat = [r[0] / x, r[1] / x, r[2] / x];
    let phase = Complex::new(0.0, x).exp();
    let far = phase / x;
    let near = phase * (Complex::new(0.0, 1.0) / (x * x) - Complex::new(1.0 / (x * x * x), 0.0));
    let pref = 0.75 * gamma;
    Ok(Matrix3::from_fn(|a, b| {
        let delta = if a == b { 1.0 } else { 0.0 };
        let rr = rhat[a] * rhat[b];
        (far * (delta - rr) + near * (delta - 3.0 * rr)) * pref
    }))
}

/// Deep-trap onsite limit: Re G^{ii} = 0, Im G^{ii} = (Γ/2)·1.
pub fn onsite_green(gamma: f64) -> Matrix3<C64> {
    Matrix3::from_fn(|a, b| if a == b { Complex::new(0.0, gamma / 2.0) } else { Complex::new(0.0, 0.0) })
}

/// R^{ij}_{qq'} and I^{ij}_{qq'} stored as 3L×3L matrices over the composite
/// index (site, q), with q ordered −1, 0, +1.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingTable {
    n_sites: usize,
    coherent: DMatrix<C64>,
    dissipative: DMatrix<C64>,
}

impl CouplingTable {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn index(site: usize, q: Polarization) -> usize {
        3 * site + q.index()
    }

    /// R^{ij}_{qq'}.
    pub fn r(&self, i: usize, q: Polarization, j: usize, qp: Polarization) -> C64 {
        self.coherent[(Self::index(i, q), Self::index(j, qp))]
    }

    /// I^{ij}_{qq'}.
    pub fn i(&self, i: usize, q: Polarization, j: usize, qp: Polarization) -> C64 {
        self.dissipative[(Self::index(i, q), Self::index(j, qp))]
    }

    pub fn coherent_matrix(&self) -> &DMatrix<C64> {
        &self.coherent
    }

    pub fn dissipative_matrix(&self) -> &DMatrix<C64> {
        &self.dissipative
    }

    /// Smallest eigenvalue of the Hermitian dissipator matrix [I^{ij}_{qq'}].
    pub fn min_dissipator_eigenvalue(&self) -> f64 {
        self.dissipative.clone().symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn project(g: &Matrix3<f64>, q: Polarization, qp: Polarization) -> C64 {
    let a = spherical_vector(q);
    let b = spherical_vector(qp);
    let mut acc = Complex::new(0.0, 0.0);
    for (x, ax) in a.0.iter().enumerate() {
        for (y, by) in b.0.iter().enumerate() {
            acc += ax.conj() * g[(x, y)] * by;
        }
    }
    acc
}

/// Projects the Green's tensor of every site pair onto the spherical basis.
pub fn coupling_table(geometry: &Geometry, gamma: f64) -> Result<CouplingTable> {
    let n = geometry.n_sites();
    let mut coherent = DMatrix::zeros(3 * n, 3 * n);
    let mut dissipative = DMatrix::zeros(3 * n, 3 * n);
    let pos = geometry.positions();
    for i in 0..n {
        for j in 0..n {
            let g = if i == j {
                onsite_green(gamma)
            } else {
                let r = [pos[i][0] - pos[j][0], pos[i][1] - pos[j][1], pos[i][2] - pos[j][2]];
                green_tensor(r, gamma)?
            };
            let re = g.map(|c| c.re);
            let im = g.map(|c| c.im);
            for q in Polarization::ALL {
                for qp in Polarization::ALL {
                    let (a, b) = (CouplingTable::index(i, q), CouplingTable::index(j, qp));
                    coherent[(a, b)] = project(&re, q, qp);
                    dissipative[(a, b)] = project(&im, q, qp);
                }
            }
        }
    }
    Ok(CouplingTable { n_sites: n, coherent, dissipative })
}
