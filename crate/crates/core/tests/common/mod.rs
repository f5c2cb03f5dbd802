#![allow(dead_code)]

//! Independent reference implementations used only by the test suites.

use fermidark::angular::{HalfInt, LevelScheme, Polarization};
use fermidark::greens::{coupling_table, CouplingTable, Geometry};
use fermidark::hilbert::{lowering_operator, CompositeBasis, SiteBasis};
use fermidark::C64;
use nalgebra::{Complex, DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

/// Clebsch-Gordan coefficients by explicit construction: start from the
/// highest-weight state of each J, lower with J_-, and orthogonalize against
/// all states of larger J with the same M. Returns ⟨j1 m1; j2 m2|J M⟩.
pub struct CgOracle {
    j1: HalfInt,
    j2: HalfInt,
    /// states[(J, M)] as vectors over the product basis (m1, m2) both descending from the top.
    states: Vec<(i32, i32, DVector<f64>)>,
}

impl CgOracle {
    pub fn new(j1: HalfInt, j2: HalfInt) -> Self {
        let n1 = j1.multiplicity();
        let n2 = j2.multiplicity();
        let idx = |a: usize, b: usize| a * n2 + b;
        // Index a ↔ m1 = j1 − a, b ↔ m2 = j2 − b.
        let lower_1 = |a: usize| {
            let j = j1.to_f64();
            let m = j - a as f64;
            (j * (j + 1.0) - m * (m - 1.0)).sqrt()
        };
        let lower_2 = |b: usize| {
            let j = j2.to_f64();
            let m = j - b as f64;
            (j * (j + 1.0) - m * (m - 1.0)).sqrt()
        };
        let apply_lowering = |v: &DVector<f64>| {
            let mut out = DVector::zeros(n1 * n2);
            for a in 0..n1 {
                for b in 0..n2 {
                    let x = v[idx(a, b)];
                    if x == 0.0 {
                        continue;
                    }
                    if a + 1 < n1 {
                        out[idx(a + 1, b)] += lower_1(a) * x;
                    }
                    if b + 1 < n2 {
                        out[idx(a, b + 1)] += lower_2(b) * x;
                    }
                }
            }
            out
        };
        let m_of = |a: usize, b: usize| j1.twice() - 2 * a as i32 + j2.twice() - 2 * b as i32;

        let mut states: Vec<(i32, i32, DVector<f64>)> = Vec::new();
        let tj_max = j1.twice() + j2.twice();
        let tj_min = (j1.twice() - j2.twice()).abs();
        let mut tj = tj_max;
        while tj >= tj_min {
            // Highest weight: M = J, orthogonal to all larger-J states with M = J.
            let mut v = DVector::zeros(n1 * n2);
            let support: Vec<usize> = (0..n1 * n2).filter(|&k| m_of(k / n2, k % n2) == tj).collect();
            for (s, &k) in support.iter().enumerate() {
                v[k] = 1.0 + 0.37 * s as f64;
            }
            project_out(&mut v, &states, tj);
            // Condon-Shortley: ⟨j1 j1; j2 J−j1|J J⟩ > 0, i.e. the component with largest m1.
            let lead = support.iter().map(|&k| v[k]).find(|x| x.abs() > 1e-12).unwrap();
            if lead < 0.0 {
                v = -v;
            }
            let mut tm = tj;
            states.push((tj, tm, v.clone()));
            while tm > -tj {
                let mut w = apply_lowering(&v);
                tm -= 2;
                // Exact arithmetic would keep w orthogonal to larger J; clean
                // up the rounding that accumulates along long ladders.
                project_out(&mut w, &states, tm);
                states.push((tj, tm, w.clone()));
                v = w;
            }
            tj -= 2;
        }
        CgOracle { j1, j2, states }
    }

    pub fn coefficient(&self, m1: HalfInt, m2: HalfInt, j: HalfInt, m: HalfInt) -> f64 {
        let n2 = self.j2.multiplicity();
        let a = ((self.j1.twice() - m1.twice()) / 2) as usize;
        let b = ((self.j2.twice() - m2.twice()) / 2) as usize;
        self.states
            .iter()
            .find(|(tj, tm, _)| *tj == j.twice() && *tm == m.twice())
            .map(|(_, _, v)| v[a * n2 + b])
            .unwrap_or(0.0)
    }
}

/// Removes the components along every stored state with projection `tm`
/// (two Gram-Schmidt passes) and normalizes.
fn project_out(v: &mut DVector<f64>, states: &[(i32, i32, DVector<f64>)], tm: i32) {
    for _ in 0..2 {
        for (_, m, w) in states {
            if *m == tm {
                let p = w.dot(v);
                *v -= w * p;
            }
        }
        let n = v.norm();
        *v /= n;
    }
}

/// Dense column-major vectorization of the Lindblad generator:
/// vec(AXB) = (Bᵀ ⊗ A) vec(X).
pub fn brute_liouvillian(basis: &CompositeBasis, table: &CouplingTable, h_extra: Option<&DMatrix<C64>>) -> DMatrix<C64> {
    let d = basis.dim();
    let id = DMatrix::<C64>::identity(d, d);
    let mut lowering = Vec::new();
    for i in 0..basis.n_sites() {
        for q in Polarization::ALL {
            lowering.push(lowering_operator(basis, i, q).unwrap().matrix);
        }
    }
    let n = lowering.len();
    let mut h = DMatrix::<C64>::zeros(d, d);
    for a in 0..n {
        for b in 0..n {
            h -= lowering[a].adjoint() * &lowering[b] * table.coherent_matrix()[(a, b)];
        }
    }
    if let Some(x) = h_extra {
        h += x;
    }
    let mi = Complex::new(0.0, -1.0);
    let mut l = (id.kronecker(&h) - h.transpose().kronecker(&id)) * mi;
    for a in 0..n {
        for b in 0..n {
            let rate = table.dissipative_matrix()[(a, b)];
            if rate.norm() == 0.0 {
                continue;
            }
            let da_dag = lowering[a].adjoint();
            let p = &da_dag * &lowering[b];
            let term = id.kronecker(&p) + p.transpose().kronecker(&id) - da_dag.transpose().kronecker(&lowering[b]) * c(2.0);
            l -= term * rate;
        }
    }
    l
}

/// Seeded geometry in a cube of side 5 with minimum separation 0.1.
pub fn random_geometry(n_sites: usize, seed: u64) -> Geometry {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Geometry::random_cube(n_sites, 5.0, 0.1, &mut rng).unwrap()
}

pub fn random_table(n_sites: usize, seed: u64) -> CouplingTable {
    coupling_table(&random_geometry(n_sites, seed), 1.0).unwrap()
}

pub fn scheme(g: &str, e: &str) -> LevelScheme {
    LevelScheme::parse(g, e).unwrap()
}

pub fn site(g: &str, e: &str) -> SiteBasis {
    SiteBasis::new(&scheme(g, e)).unwrap()
}

/// Hermitian positive density matrix with unit trace from a seeded generator.
pub fn random_density(d: usize, seed: u64) -> DMatrix<C64> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = DMatrix::from_fn(d, d, |_, _| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let m = &a * a.adjoint();
    let tr = m.trace();
    m / tr
}
