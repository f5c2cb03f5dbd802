//! Laser and Zeeman Hamiltonians, pulse sequences and the Ramsey protocol.

use nalgebra::{Complex, DMatrix};
use rayon::prelude::*;

use crate::angular::{clebsch_gordan, dipole_allowed, polarization_overlap, HalfInt, LevelScheme, Polarization, PolarizationVector};
use crate::dynamics::{
    evolve_compiled, CompiledGenerator, DensityMatrix, EvolveOptions, Evolution, GeneratorSet, Hygiene, Observable,
    ObservableKind, TimeSeries, Grid,
};
use crate::error::{Error, Result};
use crate::fit::{fit_decay_rate, DecayFit};
use crate::hilbert::{CompositeBasis, Mode, OperatorMatrix, SiteBasis, StateVector};
use crate::C64;

fn site_sum(basis: &CompositeBasis, site_op: &DMatrix<C64>) -> Result<OperatorMatrix> {
    let d = basis.dim();
    let mut total = DMatrix::zeros(d, d);
    for i in 0..basis.n_sites() {
        total += basis.embed(site_op, i)?.matrix;
    }
    Ok(OperatorMatrix::new(basis.tag(), total))
}

/// H_L = −Σ_i Σ_q (Ω_q D^+_{i,q} + h.c.) with Ω_q = Ω (e_q† · eps_L), applied
/// uniformly to every site.
pub fn single_photon_hamiltonian(basis: &CompositeBasis, omega: f64, eps_l: &PolarizationVector) -> Result<OperatorMatrix> {
    let site = basis.site_basis();
    let d = site.dim();
    let mut h = DMatrix::<C64>::zeros(d, d);
    for q in Polarization::ALL {
        let omega_q = polarization_overlap(q, eps_l)? * omega;
        if omega_q.norm() == 0.0 {
            continue;
        }
        let up = site.raising(q) * omega_q;
        h -= &up + up.adjoint();
    }
    site_sum(basis, &h)
}

/// Parameters of the underlying two-photon scheme, only used to judge whether
/// adiabatic elimination of the intermediate level is justified.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RamanValidity {
    pub omega_sg: f64,
    pub omega_se: f64,
    pub delta: f64,
    pub gamma_s: f64,
}

/// Raman coupling of g and e through an intermediate manifold F_s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RamanConfig {
    pub f_s: HalfInt,
    pub eps_sg: PolarizationVector,
    pub eps_se: PolarizationVector,
    pub omega_eff: f64,
    pub validity: Option<RamanValidity>,
}

impl RamanConfig {
    /// A warning when |Δ| is not at least ten times every other rate.
    pub fn validity_warning(&self) -> Option<String> {
        let v = self.validity?;
        let largest = v.omega_sg.abs().max(v.omega_se.abs()).max(v.gamma_s.abs());
        if v.delta.abs() >= 10.0 * largest {
            None
        } else {
            Some(format!(
                "intermediate detuning |Δ| = {} is not large compared to max(Ω_sg, Ω_se, Γ_s) = {}; \
                 the effective Raman description may be inaccurate",
                v.delta.abs(),
                largest
            ))
        }
    }

    pub fn with_omega(&self, omega_eff: f64) -> Self {
        RamanConfig { omega_eff, ..*self }
    }
}

/// C̃_{n,q} = ⟨F_a, n; 1, q | F_s, n+q⟩ (e_q† · eps) for a lower manifold F_a.
fn leg(f_a: HalfInt, n: HalfInt, f_s: HalfInt, q: i32, eps: &PolarizationVector) -> Result<C64> {
    let Some(pol) = Polarization::from_q(q) else {
        return Ok(Complex::new(0.0, 0.0));
    };
    let qh = pol.as_halfint();
    let cg = clebsch_gordan(f_a, n, HalfInt::ONE, qh, f_s, n + qh);
    if cg == 0.0 {
        return Ok(Complex::new(0.0, 0.0));
    }
    Ok(polarization_overlap(pol, eps)? * cg)
}

/// Ω^eff_{mn} = Ω^eff Σ_k C̃^{(se)*}_{m,k−m} C̃^{(sg)}_{n,k−n}, rows indexed by
/// excited m ascending, columns by ground n ascending.
pub fn raman_couplings(scheme: &LevelScheme, cfg: &RamanConfig) -> Result<DMatrix<C64>> {
    for f in [scheme.ground, scheme.excited] {
        if !dipole_allowed(f, cfg.f_s) {
            return Err(Error::NotDipoleAllowed { ground: f.to_string(), excited: cfg.f_s.to_string() });
        }
    }
    let mut out = DMatrix::zeros(scheme.n_excited(), scheme.n_ground());
    for (r, m) in scheme.excited.projections().enumerate() {
        for (c, n) in scheme.ground.projections().enumerate() {
            let mut acc = Complex::new(0.0, 0.0);
            for k in cfg.f_s.projections() {
                let qe = (k - m).as_integer().expect("integer projection difference");
                let qg = (k - n).as_integer().expect("integer projection difference");
                let se = leg(scheme.excited, m, cfg.f_s, qe, &cfg.eps_se)?;
                let sg = leg(scheme.ground, n, cfg.f_s, qg, &cfg.eps_sg)?;
                acc += se.conj() * sg;
            }
            out[(r, c)] = acc * cfg.omega_eff;
        }
    }
    Ok(out)
}

/// H_eff = Σ_i Σ_{mn} [Ω^eff_{mn} f†_{e_m} f_{g_n} + h.c.].
pub fn raman_effective_hamiltonian(basis: &CompositeBasis, cfg: &RamanConfig) -> Result<OperatorMatrix> {
    if let Some(w) = cfg.validity_warning() {
        log::warn!("{w}");
    }
    let site = basis.site_basis();
    let scheme = *site.scheme();
    let omega = raman_couplings(&scheme, cfg)?;
    let d = site.dim();
    let mut h = DMatrix::<C64>::zeros(d, d);
    let n_g = scheme.n_ground();
    for r in 0..omega.nrows() {
        for c in 0..omega.ncols() {
            let w = omega[(r, c)];
            if w.norm() == 0.0 {
                continue;
            }
            let up = site_one_body(site, n_g + r, c) * w;
            h += &up + up.adjoint();
        }
    }
    site_sum(basis, &h)
}

fn site_one_body(site: &SiteBasis, out: usize, inn: usize) -> DMatrix<C64> {
    site.one_body(&site.modes()[out], &site.modes()[inn]).expect("mode of this site")
}

/// Linear Zeeman shifts along the quantization axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeemanConfig {
    pub delta_z: f64,
    /// Shift of g_m is ground_slope · m · Δ_z.
    pub ground_slope: f64,
    /// Shift of e_m is excited_slope · m · Δ_z.
    pub excited_slope: f64,
}

impl ZeemanConfig {
    pub fn new(delta_z: f64) -> Self {
        ZeemanConfig { delta_z, ground_slope: 0.0, excited_slope: 1.0 }
    }

    pub fn with_delta(&self, delta_z: f64) -> Self {
        ZeemanConfig { delta_z, ..*self }
    }
}

/// Diagonal H_z = Σ_i Σ_modes shift(mode) n_mode.
pub fn zeeman_hamiltonian(basis: &CompositeBasis, cfg: &ZeemanConfig) -> OperatorMatrix {
    let site = basis.site_basis();
    let shift = |mode: &Mode| {
        let slope = match mode.manifold {
            crate::hilbert::Manifold::Ground => cfg.ground_slope,
            crate::hilbert::Manifold::Excited => cfg.excited_slope,
        };
        slope * mode.m.to_f64() * cfg.delta_z
    };
    let site_energy: Vec<f64> = (0..site.dim())
        .map(|k| {
            let (a, b) = site.state_modes(k);
            shift(&a) + shift(&b)
        })
        .collect();
    let d = basis.dim();
    let mut h = DMatrix::zeros(d, d);
    for k in 0..d {
        let e: f64 = basis.site_indices(k).iter().map(|&s| site_energy[s]).sum();
        h[(k, k)] = Complex::new(e, 0.0);
    }
    OperatorMatrix::new(basis.tag(), h)
}

/// One stretch of a protocol with drive and Zeeman field switched on or off.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub duration: f64,
    pub drive: bool,
    pub zeeman: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PulseSequence {
    segments: Vec<Segment>,
}

impl PulseSequence {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if let Some(s) = segments.iter().find(|s| !(s.duration > 0.0) || !s.duration.is_finite()) {
            return Err(Error::InvalidArgument(format!("segment duration {} must be positive", s.duration)));
        }
        Ok(PulseSequence { segments })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Start time of each segment relative to the sequence start.
    pub fn boundaries(&self) -> Vec<f64> {
        let mut t = 0.0;
        self.segments
            .iter()
            .map(|s| {
                let start = t;
                t += s.duration;
                start
            })
            .collect()
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }
}

/// Runs a pulse sequence, switching `h_drive` and `h_zeeman` per segment on
/// top of the drive-free generator `base`.
#[allow(clippy::too_many_arguments)]
pub fn run_sequence(
    rho0: &DensityMatrix,
    base: &GeneratorSet,
    h_drive: &OperatorMatrix,
    h_zeeman: &OperatorMatrix,
    sequence: &PulseSequence,
    dt: f64,
    sample_every: usize,
    observables: &[Observable],
) -> Result<Evolution> {
    let mut series = TimeSeries::default();
    let mut hygiene = Hygiene::default();
    let mut rho = rho0.clone();
    for seg in sequence.segments() {
        let mut h = OperatorMatrix::zeros(base.tag(), base.dim());
        if seg.drive {
            h = h.add(h_drive)?;
        }
        if seg.zeeman {
            h = h.add(h_zeeman)?;
        }
        let gen = CompiledGenerator::new(&base.with_drive(h)?)?;
        let ev = evolve_compiled(&rho, &gen, Grid::new(seg.duration, dt, sample_every), observables, EvolveOptions::default())?;
        series.extend(&ev.series)?;
        hygiene = hygiene.merge(&ev.hygiene);
        rho = ev.final_state;
    }
    Ok(Evolution { series, final_state: rho, hygiene })
}

/// |⟨target|H|initial⟩|; fails when the two states are not coupled.
pub fn two_level_coupling(h: &OperatorMatrix, initial: &StateVector, target: &StateVector) -> Result<f64> {
    let g = h.matrix_element(target, initial)?.norm();
    if g < 1e-14 {
        Err(Error::ZeroCoupling)
    } else {
        Ok(g)
    }
}

/// Ramsey protocol: π/2 pulse, free evolution in a Zeeman field, π/2 pulse.
#[derive(Clone, Debug)]
pub struct RamseyConfig {
    pub raman: RamanConfig,
    pub zeeman: ZeemanConfig,
    pub delta_z: Vec<f64>,
    pub free_time: f64,
    /// Time after the first pulse excluded from the decay fit.
    pub fit_skip: f64,
    pub zeeman_during_pulses: bool,
    pub dt: f64,
    pub sample_every: usize,
    /// Parallel workers; 0 uses the global pool.
    pub threads: usize,
}

#[derive(Clone, Debug)]
pub struct RamseyPoint {
    pub delta_z: f64,
    pub evolution: Evolution,
    pub fit: DecayFit,
    pub pulse_duration: f64,
}

/// Runs the Ramsey sequence for each Δ_z. The initial and target states fix
/// the pulse through g_eff = |⟨target|H_eff|initial⟩|, t_{π/2} = π/(4 g_eff),
/// and the decay rate is fitted to the target population during the free
/// evolution. The target population must be the first observable recorded.
pub fn ramsey_run(
    basis: &CompositeBasis,
    base: &GeneratorSet,
    initial: &StateVector,
    target: &StateVector,
    cfg: &RamseyConfig,
    extra_observables: &[Observable],
) -> Result<Vec<RamseyPoint>> {
    let h_eff = raman_effective_hamiltonian(basis, &cfg.raman)?;
    let g_eff = two_level_coupling(&h_eff, initial, target)?;
    let t_pulse = std::f64::consts::PI / (4.0 * g_eff);
    let sequence = PulseSequence::new(vec![
        Segment { duration: t_pulse, drive: true, zeeman: cfg.zeeman_during_pulses },
        Segment { duration: cfg.free_time, drive: false, zeeman: true },
        Segment { duration: t_pulse, drive: true, zeeman: cfg.zeeman_during_pulses },
    ])?;
    if !(cfg.fit_skip >= 0.0 && cfg.fit_skip < cfg.free_time) {
        return Err(Error::InvalidArgument(format!(
            "fit skip {} must lie within the free evolution time {}",
            cfg.fit_skip, cfg.free_time
        )));
    }
    let window = (t_pulse + cfg.fit_skip, t_pulse + cfg.free_time);

    let mut observables = vec![Observable::new("target", ObservableKind::Projector(vec![target.normalized()]))];
    observables.extend_from_slice(extra_observables);
    let rho0 = DensityMatrix::pure(initial);

    let run_one = |delta_z: f64| -> Result<RamseyPoint> {
        let hz = zeeman_hamiltonian(basis, &cfg.zeeman.with_delta(delta_z));
        let evolution = run_sequence(&rho0, base, &h_eff, &hz, &sequence, cfg.dt, cfg.sample_every, &observables)?;
        let pop = evolution.series.real("target").expect("target channel is real");
        let fit = fit_decay_rate(&evolution.series.times, pop, window)?;
        Ok(RamseyPoint { delta_z, evolution, fit, pulse_duration: t_pulse })
    };

    if cfg.threads == 1 {
        cfg.delta_z.iter().map(|&dz| run_one(dz)).collect()
    } else if cfg.threads == 0 {
        cfg.delta_z.par_iter().map(|&dz| run_one(dz)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
        pool.install(|| cfg.delta_z.par_iter().map(|&dz| run_one(dz)).collect())
    }
}

/// Average photon emission rate while the drive rotates `initial` into
/// `target` and back once, i.e. over t = π/g_eff. In the Zeno regime this is
/// the leak rate out of the dark/ground subspace.
pub fn zeno_leak_rate(
    basis: &CompositeBasis,
    base: &GeneratorSet,
    raman: &RamanConfig,
    initial: &StateVector,
    target: &StateVector,
    dt: f64,
) -> Result<f64> {
    let h_eff = raman_effective_hamiltonian(basis, raman)?;
    let g_eff = two_level_coupling(&h_eff, initial, target)?;
    let period = std::f64::consts::PI / g_eff;
    let gen = base.with_drive(h_eff)?;
    let rate = Observable::new("emission", ObservableKind::Operator(gen.emission_rate_operator()));
    let compiled = CompiledGenerator::new(&gen)?;
    let ev = evolve_compiled(
        &DensityMatrix::pure(initial),
        &compiled,
        Grid::new(period, dt, 1),
        &[rate],
        EvolveOptions { eigen_check_every: 0, ..EvolveOptions::default() },
    )?;
    let t = &ev.series.times;
    let r = ev.series.real("emission").expect("emission rate is real");
    let integral: f64 = t.windows(2).zip(r.windows(2)).map(|(tw, rw)| 0.5 * (rw[0] + rw[1]) * (tw[1] - tw[0])).sum();
    Ok(integral / period)
}
