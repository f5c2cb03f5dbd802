//! Analytic dark states, the darkness check and a numerical dark-space
//! enumerator for a single site.

use nalgebra::{Complex, DMatrix, DVector};

use crate::angular::{clebsch_gordan, HalfInt, LevelScheme, Polarization};
use crate::error::{Error, Result};
use crate::greens::CouplingTable;
use crate::hilbert::{product_state, CompositeBasis, Mode, SiteBasis, StateVector};
use crate::sparse::SparseMatrix;
use crate::C64;

/// Default tolerance for calling a residual zero.
pub const DARK_TOLERANCE: f64 = 1e-10;

/// Relative singular-value threshold of the null-space search.
pub const NULL_THRESHOLD: f64 = 1e-10;

/// Rotates ψ so that its first non-negligible amplitude (in basis order) is real positive.
pub fn fix_phase(psi: &mut DVector<C64>) {
    let scale = psi.iter().map(|a| a.norm()).fold(0.0, f64::max);
    if let Some(first) = psi.iter().find(|a| a.norm() > 1e-12 * scale.max(1e-300)).copied() {
        let phase = first.conj() / first.norm();
        *psi *= phase;
    }
}

/// Σ_m (−1)^{F−m} |g_m e_{−m}⟩ / √(2F+1), the unique one-excitation dark state for F_g = F_e = F.
pub fn dark_equal_f(scheme: &LevelScheme) -> Result<StateVector> {
    if scheme.ground != scheme.excited {
        return Err(Error::InvalidArgument(format!("equal-F dark state needs F_g = F_e, got {scheme}")));
    }
    let f = scheme.ground;
    let site = SiteBasis::new(scheme)?;
    let mut v = DVector::zeros(site.dim());
    for m in f.projections() {
        // F − m is an integer for every allowed m.
        let sign = if (f - m).as_integer().unwrap_or(0) % 2 == 0 { 1.0 } else { -1.0 };
        v += site.fock(&Mode::ground(m), &Mode::excited(-m))? * Complex::new(sign, 0.0);
    }
    v /= Complex::new(v.norm(), 0.0);
    fix_phase(&mut v);
    Ok(StateVector::new(site.tag(), v))
}

/// Σ_m ⟨F,m; F+1,M−m | 2F+1,M⟩ |g_m e_{M−m}⟩ for F_e = F_g + 1.
pub fn dark_f_plus_one(scheme: &LevelScheme, total_m: HalfInt) -> Result<StateVector> {
    let f = scheme.ground;
    if scheme.excited != f + HalfInt::ONE {
        return Err(Error::InvalidArgument(format!("F+1 dark states need F_e = F_g + 1, got {scheme}")));
    }
    let top = f + scheme.excited;
    if total_m.abs() > top || !total_m.same_parity(top) {
        return Err(Error::InvalidArgument(format!("M = {total_m} is outside -{top}..{top}")));
    }
    let site = SiteBasis::new(scheme)?;
    let mut v = DVector::zeros(site.dim());
    for m in f.projections() {
        let me = total_m - m;
        if me.abs() > scheme.excited {
            continue;
        }
        let alpha = clebsch_gordan(f, m, scheme.excited, me, top, total_m);
        if alpha != 0.0 {
            v += site.fock(&Mode::ground(m), &Mode::excited(me))? * Complex::new(alpha, 0.0);
        }
    }
    v /= Complex::new(v.norm(), 0.0);
    fix_phase(&mut v);
    Ok(StateVector::new(site.tag(), v))
}

/// All ground Fock states |g_a g_b⟩ of one site, a < b.
pub fn ground_fock_states(site: &SiteBasis) -> Vec<StateVector> {
    let n = site.scheme().n_ground();
    (0..site.dim())
        .filter(|&k| {
            let (p, q) = site.states()[k];
            p < n && q < n
        })
        .map(|k| {
            let mut v = DVector::zeros(site.dim());
            v[k] = Complex::new(1.0, 0.0);
            StateVector::new(site.tag(), v)
        })
        .collect()
}

/// max_q ‖D^-_q ψ‖ for a single-site state.
pub fn site_lowering_residual(site: &SiteBasis, psi: &StateVector) -> Result<f64> {
    if psi.tag != site.tag() {
        return Err(Error::BasisMismatch(psi.tag.to_string(), site.tag().to_string()));
    }
    Ok(Polarization::ALL
        .iter()
        .map(|&q| (site.lowering(q) * &psi.amplitudes).norm())
        .fold(0.0, f64::max))
}

/// ⊗_i ψ_i after checking that every site factor is dark on its own.
pub fn product_dark(basis: &CompositeBasis, per_site: &[StateVector]) -> Result<StateVector> {
    for (i, psi) in per_site.iter().enumerate() {
        let residual = site_lowering_residual(basis.site_basis(), &psi.normalized())?;
        if residual >= DARK_TOLERANCE {
            return Err(Error::NotDark { site: i, residual });
        }
    }
    let normalized: Vec<StateVector> = per_site.iter().map(StateVector::normalized).collect();
    product_state(basis, &normalized)
}

/// Outcome of a darkness check.
#[derive(Clone, Debug, PartialEq)]
pub struct DarkReport {
    /// ‖D^-_{i,q} ψ‖ indexed by 3·site + q.index().
    pub lowering_residuals: Vec<f64>,
    /// ‖H_dd ψ‖.
    pub hamiltonian_residual: f64,
    pub tolerance: f64,
    pub is_dark: bool,
}

impl DarkReport {
    pub fn residual(&self, site: usize, q: Polarization) -> f64 {
        self.lowering_residuals[CouplingTable::index(site, q)]
    }

    pub fn max_lowering_residual(&self) -> f64 {
        self.lowering_residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Applies every D^-_{i,q} to ψ and evaluates H_dd ψ = −Σ R_ab D^+_a (D^-_b ψ)
/// site by site, so the composite operators are never formed.
pub fn verify_dark(psi: &StateVector, basis: &CompositeBasis, table: &CouplingTable) -> Result<DarkReport> {
    verify_dark_with_tolerance(psi, basis, table, DARK_TOLERANCE)
}

pub fn verify_dark_with_tolerance(
    psi: &StateVector,
    basis: &CompositeBasis,
    table: &CouplingTable,
    tolerance: f64,
) -> Result<DarkReport> {
    if table.n_sites() != basis.n_sites() {
        return Err(Error::InvalidArgument(format!(
            "coupling table has {} sites, basis has {}",
            table.n_sites(),
            basis.n_sites()
        )));
    }
    let site = basis.site_basis();
    let lower: Vec<SparseMatrix> = Polarization::ALL.iter().map(|&q| SparseMatrix::from_dense(&site.lowering(q))).collect();
    let raise: Vec<SparseMatrix> = Polarization::ALL.iter().map(|&q| SparseMatrix::from_dense(&site.raising(q))).collect();

    let n = 3 * basis.n_sites();
    let mut phi = Vec::with_capacity(n);
    for i in 0..basis.n_sites() {
        for l in &lower {
            phi.push(basis.apply_site(l, i, psi)?);
        }
    }
    let lowering_residuals: Vec<f64> = phi.iter().map(|p| p.norm()).collect();

    let r = table.coherent_matrix();
    let mut h_psi = DVector::<C64>::zeros(basis.dim());
    for a in 0..n {
        let mut chi = DVector::<C64>::zeros(basis.dim());
        for (b, p) in phi.iter().enumerate() {
            let c = r[(a, b)];
            if c != Complex::new(0.0, 0.0) {
                chi.axpy(c, &p.amplitudes, Complex::new(1.0, 0.0));
            }
        }
        if chi.norm() == 0.0 {
            continue;
        }
        let chi = StateVector::new(basis.tag(), chi);
        let raised = basis.apply_site(&raise[a % 3], a / 3, &chi)?;
        h_psi -= raised.amplitudes;
    }
    let hamiltonian_residual = h_psi.norm();
    let is_dark = lowering_residuals.iter().all(|&x| x < tolerance) && hamiltonian_residual < tolerance;
    Ok(DarkReport { lowering_residuals, hamiltonian_residual, tolerance, is_dark })
}

/// One vector of the enumerated dark space with its quantum numbers.
#[derive(Clone, Debug)]
pub struct DarkVector {
    pub state: StateVector,
    pub n_excitations: usize,
    pub total_m: HalfInt,
    /// ⟨F_T²⟩ = F_T(F_T+1) for an eigenstate.
    pub ft_squared: f64,
    /// max_q ‖D^-_q ψ‖.
    pub residual: f64,
    /// A single Fock component whose decay is forbidden by occupation alone.
    pub pauli_blocked: bool,
}

/// Orthonormal basis of the joint null space of D^-_{-1}, D^-_0, D^-_{+1} on one site.
#[derive(Clone, Debug)]
pub struct DarkSpace {
    pub scheme: LevelScheme,
    pub vectors: Vec<DarkVector>,
}

impl DarkSpace {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn states(&self) -> Vec<StateVector> {
        self.vectors.iter().map(|v| v.state.clone()).collect()
    }

    /// Largest principal-angle sine between span(ψ) and the dark space, i.e. ‖(1 − P)ψ‖ for unit ψ.
    pub fn distance_from(&self, psi: &StateVector) -> f64 {
        let v = psi.amplitudes.normalize();
        let mut rest = v.clone();
        for d in &self.vectors {
            let c = d.state.amplitudes.dotc(&v);
            rest.axpy(-c, &d.state.amplitudes, Complex::new(1.0, 0.0));
        }
        rest.norm()
    }
}

/// Enumerates the single-site dark space restricted to states with at least
/// `min_excitations` excited atoms. Each (n_exc, M) block is handled separately;
/// inside a block the null space is found by SVD of the stacked lowering
/// operators and then diagonalized in F_T².
pub fn enumerate_dark_space(scheme: &LevelScheme, min_excitations: usize) -> Result<DarkSpace> {
    let site = SiteBasis::new(scheme)?;
    let d = site.dim();
    let lower: Vec<DMatrix<C64>> = Polarization::ALL.iter().map(|&q| site.lowering(q)).collect();
    let ft2 = site.total_f_squared();

    let mut blocks: Vec<(usize, HalfInt, Vec<usize>)> = Vec::new();
    for k in 0..d {
        let key = (site.excitations(k), site.total_m(k));
        if key.0 < min_excitations {
            continue;
        }
        match blocks.iter_mut().find(|(n, m, _)| (*n, *m) == key) {
            Some(b) => b.2.push(k),
            None => blocks.push((key.0, key.1, vec![k])),
        }
    }
    blocks.sort_by_key(|(n, m, _)| (*n, m.twice()));

    let mut vectors = Vec::new();
    for (n_exc, total_m, cols) in blocks {
        let k = cols.len();
        let mut stacked = DMatrix::<C64>::zeros(3 * d, k);
        for (j, &c) in cols.iter().enumerate() {
            for (qi, l) in lower.iter().enumerate() {
                for r in 0..d {
                    stacked[(qi * d + r, j)] = l[(r, c)];
                }
            }
        }
        let null = null_space(&stacked);
        if null.ncols() == 0 {
            continue;
        }
        // Diagonalize F_T² within the null space.
        let ft2_block = DMatrix::from_fn(k, k, |a, b| ft2[(cols[a], cols[b])]);
        let projected = null.adjoint() * &ft2_block * &null;
        let projected = (&projected + projected.adjoint()) * Complex::new(0.5, 0.0);
        let eig = projected.symmetric_eigen();
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        for idx in order {
            let local = &null * eig.eigenvectors.column(idx);
            let mut full = DVector::<C64>::zeros(d);
            for (j, &c) in cols.iter().enumerate() {
                full[c] = local[j];
            }
            full /= Complex::new(full.norm(), 0.0);
            fix_phase(&mut full);
            let residual = lower.iter().map(|l| (l * &full).norm()).fold(0.0, f64::max);
            let largest = full.iter().map(|a| a.norm()).fold(0.0, f64::max);
            vectors.push(DarkVector {
                state: StateVector::new(site.tag(), full),
                n_excitations: n_exc,
                total_m,
                ft_squared: eig.eigenvalues[idx],
                residual,
                pauli_blocked: n_exc >= 1 && largest > 1.0 - 1e-12,
            });
        }
    }
    Ok(DarkSpace { scheme: *scheme, vectors })
}

/// Orthonormal columns spanning {x : A x = 0} for a tall A, with singular
/// values below NULL_THRESHOLD·σ_max counted as zero.
fn null_space(a: &DMatrix<C64>) -> DMatrix<C64> {
    let k = a.ncols();
    debug_assert!(a.nrows() >= k);
    let svd = a.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let mut cols = Vec::new();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if sigma_max == 0.0 || s < NULL_THRESHOLD * sigma_max {
            cols.push(v_t.row(i).adjoint());
        }
    }
    if cols.is_empty() {
        DMatrix::zeros(k, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}
