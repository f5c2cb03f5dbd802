//! Turns a scenario into in-memory results. Nothing touches the file system
//! here, so a failing scenario never leaves partial output behind.

use anyhow::{anyhow, bail, ensure, Context, Result};
use fermidark::angular::{spherical_vector, HalfInt, LevelScheme, Polarization, PolarizationVector};
use fermidark::darkstates::{
    dark_equal_f, dark_f_plus_one, enumerate_dark_space, ground_fock_states, verify_dark_with_tolerance, DarkReport,
    DarkSpace, DARK_TOLERANCE,
};
use fermidark::drive::{
    raman_effective_hamiltonian, ramsey_run, two_level_coupling, zeeman_hamiltonian, zeno_leak_rate, RamanConfig,
    RamanValidity, RamseyConfig, RamseyPoint, ZeemanConfig,
};
use fermidark::dynamics::{
    evolve_compiled, CompiledGenerator, DensityMatrix, EvolveOptions, GeneratorSet, Grid, Hygiene, Observable,
    ObservableKind, TimeSeries,
};
use fermidark::greens::{coupling_table, CouplingTable, Geometry};
use fermidark::hilbert::{
    excitation_number_operator, fock_state, product_state, CompositeBasis, Mode, OperatorMatrix, SiteBasis,
    StateVector,
};
use fermidark::C64;
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rayon::prelude::*;

use crate::config::{
    ChannelSpec, DriveSpec, GeometrySpec, IntegrationSpec, Kind, ObservableSpec, PolarizationSpec, Scenario,
    SitesSpec, StateSpec,
};

/// A CSV cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Text(String),
    Num(f64),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

/// One point of an Ω^eff sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepPoint {
    pub omega_eff: f64,
    pub g_eff: f64,
    pub leak_rate: f64,
}

#[derive(Clone, Debug, Default)]
pub struct Outcome {
    /// (file stem, series) for every integrated trajectory.
    pub series: Vec<(String, TimeSeries)>,
    /// (file name, table) for the remaining CSV outputs.
    pub tables: Vec<(String, Table)>,
    pub hygiene: Option<Hygiene>,
    pub report: Vec<String>,
    pub dark_space: Option<DarkSpace>,
    pub verification: Option<DarkReport>,
    pub ramsey: Vec<RamseyPoint>,
    pub sweep: Vec<SweepPoint>,
}

impl Outcome {
    pub fn series(&self, stem: &str) -> Option<&TimeSeries> {
        self.series.iter().find(|(s, _)| s == stem).map(|(_, ts)| ts)
    }
}

pub fn level_scheme(scenario: &Scenario) -> Result<LevelScheme> {
    Ok(LevelScheme::parse(&scenario.scheme.f_g, &scenario.scheme.f_e)?)
}

pub fn geometry(spec: &GeometrySpec) -> Result<Geometry> {
    Ok(match spec {
        GeometrySpec::SingleSite => Geometry::single_site(),
        GeometrySpec::Positions(p) => Geometry::new(p.clone())?,
        GeometrySpec::Lattice { constant, dims } => Geometry::cubic(*constant, *dims)?,
        GeometrySpec::Random { sites, side, min_separation, seed } => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(*seed);
            Geometry::random_cube(*sites, *side, *min_separation, &mut rng)?
        }
    })
}

pub fn site_state(site: &SiteBasis, spec: &StateSpec) -> Result<StateVector> {
    let scheme = site.scheme();
    let state = match spec {
        StateSpec::Fock { modes } => {
            let a: Mode = modes[0].parse()?;
            let b: Mode = modes[1].parse()?;
            fock_state(site, [&a, &b])?
        }
        StateSpec::DarkEqualF => dark_equal_f(scheme)?,
        StateSpec::DarkFPlusOne { m } => dark_f_plus_one(scheme, m.parse()?)?,
        StateSpec::Superposition { terms } => {
            ensure!(!terms.is_empty(), "superposition needs at least one term");
            let mut acc = DVector::<C64>::zeros(site.dim());
            for t in terms {
                let s = site_state(site, &t.state)?;
                acc += s.amplitudes * C64::new(t.re, t.im);
            }
            let norm = acc.norm();
            ensure!(norm > 1e-12, "superposition vanishes");
            StateVector::new(site.tag(), acc / C64::new(norm, 0.0))
        }
    };
    Ok(state)
}

pub fn composite_state(basis: &CompositeBasis, spec: &SitesSpec) -> Result<StateVector> {
    let site = basis.site_basis();
    let factors = match spec {
        SitesSpec::Each(s) => vec![site_state(site, s)?; basis.n_sites()],
        SitesSpec::Product(v) => {
            ensure!(v.len() == basis.n_sites(), "{} site states given for {} sites", v.len(), basis.n_sites());
            v.iter().map(|s| site_state(site, s)).collect::<Result<_>>()?
        }
    };
    Ok(product_state(basis, &factors)?)
}

pub fn polarization(spec: &PolarizationSpec) -> Result<PolarizationVector> {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let v = match spec {
        PolarizationSpec::Named(name) => match name.as_str() {
            "z" => spherical_vector(Polarization::Zero),
            "+" => spherical_vector(Polarization::Plus),
            "-" => spherical_vector(Polarization::Minus),
            "x" => PolarizationVector::new(one, zero, zero),
            "y" => PolarizationVector::new(zero, one, zero),
            other => bail!("unknown polarization {other:?}; use z, +, -, x, y or a complex vector"),
        },
        PolarizationSpec::Vector(c) => {
            PolarizationVector::new(C64::new(c[0][0], c[0][1]), C64::new(c[1][0], c[1][1]), C64::new(c[2][0], c[2][1]))
        }
    };
    ensure!((v.norm() - 1.0).abs() < 1e-12, "polarization vector must have unit norm, got {}", v.norm());
    Ok(v)
}

fn raman_config(drive: &DriveSpec) -> Result<RamanConfig> {
    Ok(RamanConfig {
        f_s: drive.f_s.parse::<HalfInt>().context("f_s")?,
        eps_sg: polarization(&drive.eps_sg).context("eps_sg")?,
        eps_se: polarization(&drive.eps_se).context("eps_se")?,
        omega_eff: drive.omega_eff,
        validity: drive.validity.as_ref().map(|v| RamanValidity {
            omega_sg: v.omega_sg,
            omega_se: v.omega_se,
            delta: v.delta,
            gamma_s: v.gamma_s,
        }),
    })
}

fn zeeman_config(scenario: &Scenario) -> Option<ZeemanConfig> {
    scenario.zeeman.as_ref().map(|z| ZeemanConfig {
        delta_z: z.delta_z,
        ground_slope: z.ground_slope,
        excited_slope: z.excited_slope,
    })
}

/// Orthonormal single-site basis of dark states with at least one excitation
/// together with the ground Fock states.
fn site_protected_basis(site: &SiteBasis) -> Result<Vec<StateVector>> {
    let mut v = enumerate_dark_space(site.scheme(), 1)?.states();
    v.extend(ground_fock_states(site));
    Ok(v)
}

/// All products of single-site factors drawn from `factors`.
fn products(basis: &CompositeBasis, factors: &[StateVector]) -> Result<Vec<StateVector>> {
    let l = basis.n_sites();
    let k = factors.len();
    let total = k.checked_pow(l as u32).filter(|&t| t <= 1 << 22).ok_or_else(|| anyhow!("too many product states"))?;
    let mut out = Vec::with_capacity(total);
    for mut idx in 0..total {
        let mut per_site = vec![factors[0].clone(); l];
        for slot in per_site.iter_mut().rev() {
            *slot = factors[idx % k].clone();
            idx /= k;
        }
        out.push(product_state(basis, &per_site)?);
    }
    Ok(out)
}

fn ground_projector(basis: &CompositeBasis) -> DMatrix<C64> {
    let site = basis.site_basis();
    let n = basis.dim();
    let mut p = DMatrix::zeros(n, n);
    for k in 0..n {
        if basis.site_indices(k).iter().all(|&s| site.excitations(s) == 0) {
            p[(k, k)] = C64::new(1.0, 0.0);
        }
    }
    p
}

pub fn observables(basis: &CompositeBasis, base: &GeneratorSet, channels: &[ChannelSpec]) -> Result<Vec<Observable>> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for ch in channels {
        ensure!(!ch.name.is_empty() && !ch.name.contains([',', '\n', '"']), "invalid channel name {:?}", ch.name);
        ensure!(ch.name != "t" && seen.insert(ch.name.clone()), "duplicate channel name {:?}", ch.name);
        let kind = match &ch.observable {
            ObservableSpec::State { state } => ObservableKind::Projector(vec![composite_state(basis, state)?]),
            ObservableSpec::ProjectorSum { states } => {
                let v: Vec<StateVector> = states.iter().map(|s| composite_state(basis, s)).collect::<Result<_>>()?;
                for (i, a) in v.iter().enumerate() {
                    for b in &v[i + 1..] {
                        ensure!(a.inner(b)?.norm() < 1e-10, "states of channel {:?} are not orthogonal", ch.name);
                    }
                }
                ObservableKind::Projector(v)
            }
            ObservableSpec::GroundManifold { exclude } => {
                let mut p = ground_projector(basis);
                for s in exclude {
                    let x = composite_state(basis, s)?;
                    let inside = (&p * &x.amplitudes - &x.amplitudes).norm();
                    ensure!(inside < 1e-10, "excluded state of channel {:?} is not in the ground manifold", ch.name);
                    p -= &x.amplitudes * x.amplitudes.adjoint();
                }
                ObservableKind::Operator(OperatorMatrix::new(basis.tag(), p))
            }
            ObservableSpec::Nondark => {
                let factors = site_protected_basis(basis.site_basis())?;
                ObservableKind::Complement(products(basis, &factors)?)
            }
            ObservableSpec::Excitations => ObservableKind::Operator(excitation_number_operator(basis)),
            ObservableSpec::EmissionRate => ObservableKind::Operator(base.emission_rate_operator()),
            ObservableSpec::Coherence { bra, ket } => {
                ObservableKind::Coherence(composite_state(basis, bra)?, composite_state(basis, ket)?)
            }
        };
        out.push(Observable::new(ch.name.clone(), kind));
    }
    Ok(out)
}

/// Runs `f` over `items` on the requested number of workers, keeping order.
fn map_threads<T, R, F>(threads: usize, items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync + Send,
{
    match threads {
        1 => items.iter().map(f).collect(),
        0 => items.par_iter().map(f).collect(),
        n => rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(|| items.par_iter().map(&f).collect()),
    }
}

fn integration(scenario: &Scenario) -> Result<&IntegrationSpec> {
    scenario.integration.as_ref().ok_or_else(|| anyhow!("kind {:?} needs an integration block", scenario.kind))
}

fn drive(scenario: &Scenario) -> Result<&DriveSpec> {
    scenario.drive.as_ref().ok_or_else(|| anyhow!("kind {:?} needs a drive block", scenario.kind))
}

fn hygiene_lines(h: &Hygiene) -> Vec<String> {
    vec![
        format!("max |tr rho - 1|: {:.3e}", h.max_trace_drift),
        format!("max hermiticity drift: {:.3e}", h.max_hermiticity_drift),
        format!("min sampled eigenvalue: {:.3e}", h.min_eigenvalue),
    ]
}

/// Builds and runs everything the scenario asks for.
pub fn run_scenario(scenario: &Scenario) -> Result<Outcome> {
    ensure!((1..=17).contains(&scenario.output.precision), "output precision must be between 1 and 17");
    let scheme = level_scheme(scenario)?;
    let geom = geometry(&scenario.geometry)?;
    let mut out = Outcome::default();
    out.report.push(format!("kind: {}", serde_json::to_value(scenario.kind)?.as_str().unwrap_or_default()));
    out.report.push(format!("scheme: {scheme}"));
    out.report.push(format!("sites: {}", geom.n_sites()));
    match scenario.kind {
        Kind::EnumerateDark => enumerate(scenario, &scheme, &mut out)?,
        Kind::GreensTable => greens(&geom, &mut out)?,
        Kind::VerifyDark => verify(scenario, &scheme, &geom, &mut out)?,
        Kind::RamanDrive => raman_drive(scenario, &scheme, &geom, &mut out)?,
        Kind::Ramsey => ramsey(scenario, &scheme, &geom, &mut out)?,
    }
    if let Some(h) = &out.hygiene {
        out.report.extend(hygiene_lines(h));
    }
    Ok(out)
}

fn enumerate(scenario: &Scenario, scheme: &LevelScheme, out: &mut Outcome) -> Result<()> {
    let min = scenario.enumerate.as_ref().map_or(1, |e| e.min_excitations);
    let space = enumerate_dark_space(scheme, min)?;
    let mut table = Table {
        header: ["index", "n_exc", "M", "FT2", "residual"].map(String::from).to_vec(),
        rows: Vec::new(),
    };
    for (k, v) in space.vectors.iter().enumerate() {
        table.rows.push(vec![
            Cell::Int(k as i64),
            Cell::Int(v.n_excitations as i64),
            Cell::Text(v.total_m.to_string()),
            Cell::Num(v.ft_squared),
            Cell::Num(v.residual),
        ]);
    }
    out.report.push(format!("minimum excitations: {min}"));
    out.report.push(format!("dark space dimension: {}", space.dim()));
    for (k, v) in space.vectors.iter().enumerate() {
        out.report.push(format!(
            "  #{k}: n_exc = {}, M = {}, FT^2 = {:.6}, residual = {:.2e}{}",
            v.n_excitations,
            v.total_m,
            v.ft_squared,
            v.residual,
            if v.pauli_blocked { " (Pauli blocked)" } else { "" }
        ));
    }
    out.tables.push(("darkspace.csv".into(), table));
    out.dark_space = Some(space);
    Ok(())
}

fn greens(geom: &Geometry, out: &mut Outcome) -> Result<()> {
    let table = coupling_table(geom, 1.0)?;
    let mut csv = Table {
        header: ["i", "q_i", "j", "q_j", "R_re", "R_im", "I_re", "I_im"].map(String::from).to_vec(),
        rows: Vec::new(),
    };
    for i in 0..table.n_sites() {
        for q in Polarization::ALL {
            for j in 0..table.n_sites() {
                for qp in Polarization::ALL {
                    let r = table.r(i, q, j, qp);
                    let im = table.i(i, q, j, qp);
                    csv.rows.push(vec![
                        Cell::Int(i as i64),
                        Cell::Int(q.q() as i64),
                        Cell::Int(j as i64),
                        Cell::Int(qp.q() as i64),
                        Cell::Num(r.re),
                        Cell::Num(r.im),
                        Cell::Num(im.re),
                        Cell::Num(im.im),
                    ]);
                }
            }
        }
    }
    out.report.push(format!("min eigenvalue of I: {:.6e}", table.min_dissipator_eigenvalue()));
    out.tables.push(("couplings.csv".into(), csv));
    Ok(())
}

fn default_dark(scheme: &LevelScheme) -> Result<StateSpec> {
    if scheme.ground == scheme.excited {
        Ok(StateSpec::DarkEqualF)
    } else if scheme.excited == scheme.ground + HalfInt::ONE {
        Ok(StateSpec::DarkFPlusOne { m: "0".into() })
    } else {
        bail!("no analytic dark state for {scheme}; give verify.state explicitly")
    }
}

fn verify(scenario: &Scenario, scheme: &LevelScheme, geom: &Geometry, out: &mut Outcome) -> Result<()> {
    let basis = CompositeBasis::new(SiteBasis::new(scheme)?, geom.n_sites())?;
    let table: CouplingTable = coupling_table(geom, 1.0)?;
    let (spec, tol) = match &scenario.verify {
        Some(v) => (v.state.clone(), v.tolerance.unwrap_or(DARK_TOLERANCE)),
        None => (SitesSpec::Each(default_dark(scheme)?), DARK_TOLERANCE),
    };
    let psi = composite_state(&basis, &spec)?;
    let report = verify_dark_with_tolerance(&psi, &basis, &table, tol)?;
    let mut csv = Table { header: ["site", "q", "residual"].map(String::from).to_vec(), rows: Vec::new() };
    for site in 0..geom.n_sites() {
        for q in Polarization::ALL {
            csv.rows.push(vec![Cell::Int(site as i64), Cell::Int(q.q() as i64), Cell::Num(report.residual(site, q))]);
        }
    }
    out.report.push(format!("max lowering residual: {:.3e}", report.max_lowering_residual()));
    out.report.push(format!("hamiltonian residual: {:.3e}", report.hamiltonian_residual));
    out.report.push(format!("tolerance: {:.1e}", report.tolerance));
    out.report.push(format!("dark: {}", if report.is_dark { "yes" } else { "no" }));
    out.tables.push(("residuals.csv".into(), csv));
    out.verification = Some(report);
    Ok(())
}

struct DriveSetup {
    basis: CompositeBasis,
    base: GeneratorSet,
    raman: RamanConfig,
    initial: StateVector,
    target: Option<StateVector>,
    observables: Vec<Observable>,
}

fn drive_setup(scenario: &Scenario, scheme: &LevelScheme, geom: &Geometry) -> Result<DriveSetup> {
    let d = drive(scenario)?;
    let basis = CompositeBasis::new(SiteBasis::new(scheme)?, geom.n_sites())?;
    let base = GeneratorSet::new(&basis, &coupling_table(geom, 1.0)?, None)?;
    let raman = raman_config(d)?;
    let initial = composite_state(&basis, &d.initial).context("drive.initial")?;
    let target = d.target.as_ref().map(|t| composite_state(&basis, t)).transpose().context("drive.target")?;
    let observables = observables(&basis, &base, &scenario.channels)?;
    Ok(DriveSetup { basis, base, raman, initial, target, observables })
}

fn raman_drive(scenario: &Scenario, scheme: &LevelScheme, geom: &Geometry, out: &mut Outcome) -> Result<()> {
    let integ = integration(scenario)?;
    let t_end = integ.t_end.ok_or_else(|| anyhow!("raman-drive needs integration.t_end"))?;
    let setup = drive_setup(scenario, scheme, geom)?;
    let d = drive(scenario)?;
    let hz = zeeman_config(scenario).map(|z| zeeman_hamiltonian(&setup.basis, &z));
    let omegas = d.omega_eff_sweep.clone().unwrap_or_else(|| vec![d.omega_eff]);
    ensure!(!omegas.is_empty(), "omega_eff_sweep is empty");
    let sweep = d.omega_eff_sweep.is_some();
    let target = match (&setup.target, sweep) {
        (Some(t), _) => Some(t),
        (None, true) => bail!("an omega_eff sweep needs drive.target for the leak rate"),
        (None, false) => None,
    };
    if let Some(w) = setup.raman.validity_warning() {
        out.report.push(format!("warning: {w}"));
    }

    let rho0 = DensityMatrix::pure(&setup.initial);
    let results = map_threads(integ.threads, &omegas, |&omega| {
        let raman = setup.raman.with_omega(omega);
        let mut h = raman_effective_hamiltonian(&setup.basis, &raman)?;
        if let Some(hz) = &hz {
            h = h.add(hz)?;
        }
        let g_eff = target.map(|t| two_level_coupling(&h, &setup.initial, t)).transpose()?;
        let gen = CompiledGenerator::new(&setup.base.with_drive(h)?)?;
        let ev = evolve_compiled(
            &rho0,
            &gen,
            Grid::new(t_end, integ.dt, integ.sample_every),
            &setup.observables,
            EvolveOptions::default(),
        )?;
        let leak = match (sweep, target) {
            (true, Some(t)) => Some(zeno_leak_rate(&setup.basis, &setup.base, &raman, &setup.initial, t, integ.dt)?),
            _ => None,
        };
        Ok((omega, g_eff, ev, leak))
    })?;

    let mut hygiene = Hygiene::default();
    let mut sweep_table = Table {
        header: ["omega_eff", "g_eff", "leak_rate"].map(String::from).to_vec(),
        rows: Vec::new(),
    };
    for (k, (omega, g_eff, ev, leak)) in results.into_iter().enumerate() {
        hygiene = hygiene.merge(&ev.hygiene);
        let stem = if sweep { format!("series_{k}") } else { "series".to_string() };
        out.report.push(format!("{stem}: omega_eff = {omega}, {} samples", ev.series.len()));
        if let Some(g) = g_eff {
            out.report.push(format!("  g_eff = |<target|H|initial>| = {g:.6e}"));
        }
        if let (Some(g), Some(rate)) = (g_eff, leak) {
            out.report.push(format!("  leak rate = {rate:.6e}"));
            sweep_table.rows.push(vec![Cell::Num(omega), Cell::Num(g), Cell::Num(rate)]);
            out.sweep.push(SweepPoint { omega_eff: omega, g_eff: g, leak_rate: rate });
        }
        out.series.push((stem, ev.series));
    }
    if sweep {
        if out.sweep.len() >= 2 {
            let x: Vec<f64> = out.sweep.iter().map(|p| p.omega_eff).collect();
            let y: Vec<f64> = out.sweep.iter().map(|p| p.leak_rate).collect();
            if let Ok(fit) = fermidark::fit::loglog_slope(&x, &y) {
                out.report.push(format!("leak rate log-log slope: {:.4}", fit.slope));
            }
        }
        out.tables.push(("sweep.csv".into(), sweep_table));
    }
    out.hygiene = Some(hygiene);
    Ok(())
}

fn ramsey(scenario: &Scenario, scheme: &LevelScheme, geom: &Geometry, out: &mut Outcome) -> Result<()> {
    let integ = integration(scenario)?;
    let spec = scenario.ramsey.as_ref().ok_or_else(|| anyhow!("kind ramsey needs a ramsey block"))?;
    ensure!(!spec.delta_z.is_empty(), "ramsey.delta_z is empty");
    let setup = drive_setup(scenario, scheme, geom)?;
    let target = setup.target.as_ref().ok_or_else(|| anyhow!("kind ramsey needs drive.target"))?;
    ensure!(
        !setup.observables.iter().any(|o| o.name == "target"),
        "channel name \"target\" is reserved for ramsey runs"
    );
    let cfg = RamseyConfig {
        raman: setup.raman,
        zeeman: zeeman_config(scenario).unwrap_or_else(|| ZeemanConfig::new(0.0)),
        delta_z: spec.delta_z.clone(),
        free_time: spec.free_time,
        fit_skip: spec.fit_skip,
        zeeman_during_pulses: spec.zeeman_during_pulses,
        dt: integ.dt,
        sample_every: integ.sample_every,
        threads: integ.threads,
    };
    if let Some(w) = cfg.raman.validity_warning() {
        out.report.push(format!("warning: {w}"));
    }
    let points = ramsey_run(&setup.basis, &setup.base, &setup.initial, target, &cfg, &setup.observables)?;
    let mut table = Table {
        header: ["delta_z", "gamma_eff", "amplitude", "r_squared", "pulse_duration"].map(String::from).to_vec(),
        rows: Vec::new(),
    };
    let mut hygiene = Hygiene::default();
    if let Some(p) = points.first() {
        out.report.push(format!("pi/2 pulse duration: {:.6}", p.pulse_duration));
    }
    for (k, p) in points.iter().enumerate() {
        hygiene = hygiene.merge(&p.evolution.hygiene);
        table.rows.push(vec![
            Cell::Num(p.delta_z),
            Cell::Num(p.fit.rate),
            Cell::Num(p.fit.amplitude),
            Cell::Num(p.fit.r_squared),
            Cell::Num(p.pulse_duration),
        ]);
        out.report.push(format!("series_{k}: delta_z = {}, gamma_eff = {:.6e}", p.delta_z, p.fit.rate));
        out.series.push((format!("series_{k}"), p.evolution.series.clone()));
    }
    let nonzero: Vec<&RamseyPoint> = points.iter().filter(|p| p.delta_z != 0.0 && p.fit.rate > 0.0).collect();
    if nonzero.len() >= 2 {
        let x: Vec<f64> = nonzero.iter().map(|p| p.delta_z.abs()).collect();
        let y: Vec<f64> = nonzero.iter().map(|p| p.fit.rate).collect();
        if let Ok(fit) = fermidark::fit::loglog_slope(&x, &y) {
            out.report.push(format!("gamma_eff log-log slope: {:.4}", fit.slope));
        }
    }
    out.tables.push(("ramsey.csv".into(), table));
    out.hygiene = Some(hygiene);
    out.ramsey = points;
    Ok(())
}
