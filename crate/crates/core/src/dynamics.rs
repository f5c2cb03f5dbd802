//! The dipolar master equation: Hamiltonian and dissipator assembly, a fixed
//! step RK4 integrator and observables.
//!
//! dρ/dt = −i[H_dd + H_drive, ρ] − Σ I^{ij}_{qq'} ({D^+_{i,q} D^-_{j,q'}, ρ} − 2 D^-_{j,q'} ρ D^+_{i,q}),
//! with H_dd = −Σ R^{ij}_{qq'} D^+_{i,q} D^-_{j,q'}. We work in the frame
//! rotating at the bare transition frequency.

use nalgebra::{Complex, DMatrix, DVector};

use crate::angular::Polarization;
use crate::error::{Error, Result};
use crate::greens::CouplingTable;
use crate::hilbert::{BasisTag, CompositeBasis, OperatorMatrix, StateVector};
use crate::sparse::SparseMatrix;
use crate::C64;

const ZERO: C64 = Complex { re: 0.0, im: 0.0 };

fn check_tags(a: &BasisTag, b: &BasisTag) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::BasisMismatch(a.to_string(), b.to_string()))
    }
}

/// A density matrix at a given time (in 1/Γ).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    pub tag: BasisTag,
    pub matrix: DMatrix<C64>,
    pub time: f64,
}

impl DensityMatrix {
    pub fn new(tag: BasisTag, matrix: DMatrix<C64>, time: f64) -> Self {
        DensityMatrix { tag, matrix, time }
    }

    /// |ψ⟩⟨ψ| for normalized ψ.
    pub fn pure(psi: &StateVector) -> Self {
        let v = psi.amplitudes.normalize();
        DensityMatrix { tag: psi.tag, matrix: &v * v.adjoint(), time: 0.0 }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.matrix + self.matrix.adjoint()) * Complex::new(0.5, 0.0);
        h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn hermiticity_error(m: &DMatrix<C64>) -> f64 {
    let mut worst: f64 = 0.0;
    for c in 0..m.ncols() {
        for r in 0..=c {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// tr(ρ O).
pub fn expectation(rho: &DensityMatrix, op: &OperatorMatrix) -> Result<C64> {
    check_tags(&rho.tag, &op.tag)?;
    Ok(trace_product(&rho.matrix, &op.matrix))
}

fn trace_product(a: &DMatrix<C64>, b: &DMatrix<C64>) -> C64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for r in 0..n {
        for c in 0..n {
            acc += a[(r, c)] * b[(c, r)];
        }
    }
    acc
}

/// ⟨ψ|ρ|ψ⟩ for normalized ψ.
pub fn population(rho: &DensityMatrix, psi: &StateVector) -> Result<f64> {
    check_tags(&rho.tag, &psi.tag)?;
    Ok(quadratic_form(&rho.matrix, &psi.amplitudes).re)
}

fn quadratic_form(m: &DMatrix<C64>, v: &DVector<C64>) -> C64 {
    v.dotc(&(m * v))
}

/// H_dd = −Σ R^{ij}_{qq'} D^+_{i,q} D^-_{j,q'}; dense.
pub fn build_hamiltonian(basis: &CompositeBasis, table: &CouplingTable) -> Result<OperatorMatrix> {
    let lowering = embedded_lowering(basis, table)?;
    let d = basis.dim();
    let mut h = DMatrix::zeros(d, d);
    let r = table.coherent_matrix();
    for (a, la) in lowering.iter().enumerate() {
        let raise = la.adjoint();
        for (b, lb) in lowering.iter().enumerate() {
            let c = r[(a, b)];
            if c != ZERO {
                h -= (&raise * lb) * c;
            }
        }
    }
    Ok(OperatorMatrix::new(basis.tag(), h))
}

fn embedded_lowering(basis: &CompositeBasis, table: &CouplingTable) -> Result<Vec<DMatrix<C64>>> {
    if table.n_sites() != basis.n_sites() {
        return Err(Error::InvalidArgument(format!(
            "coupling table has {} sites, basis has {}",
            table.n_sites(),
            basis.n_sites()
        )));
    }
    let site = basis.site_basis();
    let mut out = Vec::with_capacity(3 * basis.n_sites());
    for i in 0..basis.n_sites() {
        for q in Polarization::ALL {
            out.push(basis.embed(&site.lowering(q), i)?.matrix);
        }
    }
    Ok(out)
}

/// One dissipator term I^{ij}_{qq'} with D^+ index a = (i, q) and D^- index b = (j, q').
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JumpTerm {
    pub rate: C64,
    pub raising: usize,
    pub lowering: usize,
}

/// Everything needed to evaluate the master-equation right-hand side.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    tag: BasisTag,
    pub h_dd: OperatorMatrix,
    pub h_drive: OperatorMatrix,
    lowering: Vec<DMatrix<C64>>,
    jumps: Vec<JumpTerm>,
    dissipator: DMatrix<C64>,
}

impl GeneratorSet {
    pub fn new(basis: &CompositeBasis, table: &CouplingTable, h_drive: Option<OperatorMatrix>) -> Result<Self> {
        let lowering = embedded_lowering(basis, table)?;
        let h_dd = build_hamiltonian(basis, table)?;
        let h_drive = match h_drive {
            Some(h) => {
                check_tags(&basis.tag(), &h.tag)?;
                h
            }
            None => OperatorMatrix::zeros(basis.tag(), basis.dim()),
        };
        let i = table.dissipative_matrix();
        let mut jumps = Vec::new();
        for a in 0..i.nrows() {
            for b in 0..i.ncols() {
                if i[(a, b)] != ZERO {
                    jumps.push(JumpTerm { rate: i[(a, b)], raising: a, lowering: b });
                }
            }
        }
        Ok(GeneratorSet { tag: basis.tag(), h_dd, h_drive, lowering, jumps, dissipator: i.clone() })
    }

    /// Same dissipative structure with a different drive Hamiltonian.
    pub fn with_drive(&self, h_drive: OperatorMatrix) -> Result<Self> {
        check_tags(&self.tag, &h_drive.tag)?;
        Ok(GeneratorSet { h_drive, ..self.clone() })
    }

    pub fn tag(&self) -> BasisTag {
        self.tag
    }

    pub fn dim(&self) -> usize {
        self.h_dd.dim()
    }

    pub fn jumps(&self) -> &[JumpTerm] {
        &self.jumps
    }

    /// Embedded D^-_{i,q}.
    pub fn lowering(&self, site: usize, q: Polarization) -> &DMatrix<C64> {
        &self.lowering[CouplingTable::index(site, q)]
    }

    pub fn lowering_by_index(&self, a: usize) -> &DMatrix<C64> {
        &self.lowering[a]
    }

    pub fn dissipator_matrix(&self) -> &DMatrix<C64> {
        &self.dissipator
    }

    /// H_dd + H_drive.
    pub fn hamiltonian(&self) -> DMatrix<C64> {
        &self.h_dd.matrix + &self.h_drive.matrix
    }

    /// K = Σ I^{ij}_{qq'} D^+_{i,q} D^-_{j,q'}.
    pub fn decay_operator(&self) -> DMatrix<C64> {
        let d = self.dim();
        let mut k = DMatrix::zeros(d, d);
        for jt in &self.jumps {
            k += (self.lowering[jt.raising].adjoint() * &self.lowering[jt.lowering]) * jt.rate;
        }
        k
    }

    /// Photon emission rate operator 2K; its expectation is the instantaneous
    /// total decay rate of the state.
    pub fn emission_rate_operator(&self) -> OperatorMatrix {
        OperatorMatrix::new(self.tag, self.decay_operator() * Complex::new(2.0, 0.0))
    }
}

/// dρ/dt by direct matrix products over the listed jump terms.
pub fn liouvillian_apply(rho: &DensityMatrix, gen: &GeneratorSet) -> Result<DMatrix<C64>> {
    check_tags(&rho.tag, &gen.tag)?;
    let h = gen.hamiltonian();
    let r = &rho.matrix;
    let mi = Complex::new(0.0, -1.0);
    let mut out = (&h * r - r * &h) * mi;
    for jt in &gen.jumps {
        let lower = &gen.lowering[jt.lowering];
        let raise = gen.lowering[jt.raising].adjoint();
        let pd = &raise * lower;
        out -= (&pd * r + r * &pd - (lower * r * &raise) * Complex::new(2.0, 0.0)) * jt.rate;
    }
    Ok(out)
}

/// Sparse form of a generator used by the integrator:
/// dρ/dt = Aρ + ρA† + Σ_k J_k ρ J_k†, A = −i(H − iK), J_k weighted jump operators.
#[derive(Clone, Debug)]
pub struct CompiledGenerator {
    tag: BasisTag,
    dim: usize,
    a: SparseMatrix,
    jumps: Vec<SparseMatrix>,
    scale: f64,
}

impl CompiledGenerator {
    pub fn new(gen: &GeneratorSet) -> Result<Self> {
        let d = gen.dim();
        let h = gen.hamiltonian();
        let k = gen.decay_operator();
        let a = (h - k * Complex::new(0.0, 1.0)) * Complex::new(0.0, -1.0);

        // Diagonalize the Hermitian PSD rate matrix I = U Λ U† so that
        // Σ_ab I_ab D_b ρ D_a† = Σ_k λ_k J_k ρ J_k†, J_k = Σ_b conj(U_bk) D_b.
        let i = gen.dissipator_matrix();
        let diagonal = (0..i.nrows()).all(|r| (0..i.ncols()).all(|c| r == c || i[(r, c)] == ZERO));
        let (weights, vectors): (Vec<f64>, DMatrix<C64>) = if diagonal {
            ((0..i.nrows()).map(|r| i[(r, r)].re).collect(), DMatrix::identity(i.nrows(), i.ncols()))
        } else {
            let eig = i.clone().symmetric_eigen();
            (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
        };
        let mut jumps = Vec::new();
        let mut jump_scale = 0.0;
        for (kk, &lambda) in weights.iter().enumerate() {
            if lambda < -1e-10 {
                return Err(Error::InvalidArgument(format!(
                    "dissipator matrix is not positive semidefinite (eigenvalue {lambda:.3e})"
                )));
            }
            if lambda <= 1e-14 {
                continue;
            }
            let mut j = DMatrix::zeros(d, d);
            for b in 0..vectors.nrows() {
                let u = vectors[(b, kk)].conj();
                if u != ZERO {
                    j += gen.lowering_by_index(b) * u;
                }
            }
            j *= Complex::new((2.0 * lambda).sqrt(), 0.0);
            jump_scale += j.norm_squared() / d as f64;
            jumps.push(SparseMatrix::from_dense(&j));
        }
        let a_scale = (0..d).map(|r| (0..d).map(|c| a[(r, c)].norm()).sum::<f64>()).fold(0.0, f64::max);
        Ok(CompiledGenerator {
            tag: gen.tag(),
            dim: d,
            a: SparseMatrix::from_dense(&a),
            jumps,
            scale: a_scale.max(jump_scale),
        })
    }

    pub fn tag(&self) -> BasisTag {
        self.tag
    }

    /// Rough upper bound on the generator's rates, used to sanity-check dt.
    pub fn rate_scale(&self) -> f64 {
        self.scale
    }

    /// out = L(ρ) for column-major ρ; `scratch` must hold dim² entries.
    fn apply(&self, rho: &[C64], out: &mut [C64], scratch: &mut [C64]) {
        let n = self.dim;
        out.fill(ZERO);
        self.a.left_mul_acc(rho, n, out);
        self.a.right_mul_adjoint_acc(rho, n, out);
        for j in &self.jumps {
            scratch.fill(ZERO);
            j.left_mul_acc(rho, n, scratch);
            j.right_mul_adjoint_acc(scratch, n, out);
        }
    }

    /// dρ/dt as a dense matrix.
    pub fn rhs(&self, rho: &DensityMatrix) -> Result<DMatrix<C64>> {
        check_tags(&self.tag, &rho.tag)?;
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        let mut scratch = vec![ZERO; n * n];
        self.apply(rho.matrix.as_slice(), &mut out, &mut scratch);
        Ok(DMatrix::from_vec(n, n, out))
    }
}

/// What to record along a trajectory.
#[derive(Clone, Debug)]
pub enum ObservableKind {
    /// tr(ρO); recorded as real when O is Hermitian.
    Operator(OperatorMatrix),
    /// Σ_k ⟨ψ_k|ρ|ψ_k⟩ over orthonormal states.
    Projector(Vec<StateVector>),
    /// 1 − Σ_k ⟨ψ_k|ρ|ψ_k⟩.
    Complement(Vec<StateVector>),
    /// ⟨a|ρ|b⟩.
    Coherence(StateVector, StateVector),
}

#[derive(Clone, Debug)]
pub struct Observable {
    pub name: String,
    pub kind: ObservableKind,
}

impl Observable {
    pub fn new(name: impl Into<String>, kind: ObservableKind) -> Self {
        Observable { name: name.into(), kind }
    }

    pub fn population(name: impl Into<String>, psi: StateVector) -> Self {
        Observable::new(name, ObservableKind::Projector(vec![psi]))
    }

    fn check(&self, tag: &BasisTag) -> Result<()> {
        match &self.kind {
            ObservableKind::Operator(o) => check_tags(tag, &o.tag),
            ObservableKind::Projector(v) | ObservableKind::Complement(v) => {
                v.iter().try_for_each(|s| check_tags(tag, &s.tag))
            }
            ObservableKind::Coherence(a, b) => check_tags(tag, &a.tag).and(check_tags(tag, &b.tag)),
        }
    }

    fn is_real(&self) -> bool {
        match &self.kind {
            ObservableKind::Operator(o) => o.hermiticity_error() < 1e-12,
            ObservableKind::Projector(_) | ObservableKind::Complement(_) => true,
            ObservableKind::Coherence(_, _) => false,
        }
    }

    fn evaluate(&self, rho: &DMatrix<C64>) -> C64 {
        match &self.kind {
            ObservableKind::Operator(o) => trace_product(rho, &o.matrix),
            ObservableKind::Projector(v) => {
                Complex::new(v.iter().map(|s| quadratic_form(rho, &s.amplitudes).re).sum(), 0.0)
            }
            ObservableKind::Complement(v) => {
                Complex::new(1.0 - v.iter().map(|s| quadratic_form(rho, &s.amplitudes).re).sum::<f64>(), 0.0)
            }
            ObservableKind::Coherence(a, b) => a.amplitudes.dotc(&(rho * &b.amplitudes)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ChannelData {
    Real(Vec<f64>),
    Complex(Vec<C64>),
}

impl ChannelData {
    fn len(&self) -> usize {
        match self {
            ChannelData::Real(v) => v.len(),
            ChannelData::Complex(v) => v.len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Channel {
    pub name: String,
    pub data: ChannelData,
}

/// Sampled observables on a strictly increasing time grid.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub channels: Vec<Channel>,
}

impl TimeSeries {
    pub fn channel(&self, name: &str) -> Option<&Channel> {
        self.channels.iter().find(|c| c.name == name)
    }

    /// Values of a real channel.
    pub fn real(&self, name: &str) -> Option<&[f64]> {
        match &self.channel(name)?.data {
            ChannelData::Real(v) => Some(v),
            ChannelData::Complex(_) => None,
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Appends `other`, dropping its leading samples that do not advance time.
    pub fn extend(&mut self, other: &TimeSeries) -> Result<()> {
        if self.channels.is_empty() && self.times.is_empty() {
            *self = other.clone();
            return Ok(());
        }
        let names_match = self.channels.len() == other.channels.len()
            && self.channels.iter().zip(&other.channels).all(|(a, b)| a.name == b.name);
        if !names_match {
            return Err(Error::InvalidArgument("cannot join time series with different channels".into()));
        }
        let last = self.times.last().copied().unwrap_or(f64::NEG_INFINITY);
        let skip = other.times.iter().take_while(|&&t| t <= last).count();
        self.times.extend_from_slice(&other.times[skip..]);
        for (mine, theirs) in self.channels.iter_mut().zip(&other.channels) {
            match (&mut mine.data, &theirs.data) {
                (ChannelData::Real(a), ChannelData::Real(b)) => a.extend_from_slice(&b[skip..]),
                (ChannelData::Complex(a), ChannelData::Complex(b)) => a.extend_from_slice(&b[skip..]),
                _ => return Err(Error::InvalidArgument(format!("channel {} changes type", mine.name))),
            }
        }
        Ok(())
    }

    fn is_consistent(&self) -> bool {
        self.channels.iter().all(|c| c.data.len() == self.times.len())
            && self.times.windows(2).all(|w| w[1] > w[0])
    }
}

/// Fixed-step integration grid. `t_end` is the duration measured from the
/// initial state's time; the step is shrunk slightly if needed so that an
/// integer number of steps lands exactly on it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub t_end: f64,
    pub dt: f64,
    pub sample_every: usize,
}

impl Grid {
    pub fn new(t_end: f64, dt: f64, sample_every: usize) -> Self {
        Grid { t_end, dt, sample_every }
    }

    fn validate(&self) -> Result<()> {
        if !(self.t_end >= 0.0) || !(self.dt > 0.0) || !self.t_end.is_finite() || self.sample_every == 0 {
            return Err(Error::InvalidArgument(format!(
                "invalid grid: t_end = {}, dt = {}, sample_every = {}",
                self.t_end, self.dt, self.sample_every
            )));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        ((self.t_end / self.dt) - 1e-9).ceil().max(0.0) as usize
    }
}

/// Integrator safeguards.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolveOptions {
    /// Abort when |tr ρ − 1| exceeds this.
    pub trace_abort: f64,
    /// Compute the minimum eigenvalue of ρ at every n-th sample (0 disables).
    pub eigen_check_every: usize,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions { trace_abort: 1e-6, eigen_check_every: 1 }
    }
}

/// Worst-case drift statistics observed during a run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hygiene {
    pub max_trace_drift: f64,
    pub max_hermiticity_drift: f64,
    pub min_eigenvalue: f64,
}

impl Default for Hygiene {
    fn default() -> Self {
        Hygiene { max_trace_drift: 0.0, max_hermiticity_drift: 0.0, min_eigenvalue: f64::INFINITY }
    }
}

impl Hygiene {
    pub fn merge(&self, other: &Hygiene) -> Hygiene {
        Hygiene {
            max_trace_drift: self.max_trace_drift.max(other.max_trace_drift),
            max_hermiticity_drift: self.max_hermiticity_drift.max(other.max_hermiticity_drift),
            min_eigenvalue: self.min_eigenvalue.min(other.min_eigenvalue),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Evolution {
    pub series: TimeSeries,
    pub final_state: DensityMatrix,
    pub hygiene: Hygiene,
}

/// Integrates the master equation from `rho0` with classical RK4.
pub fn evolve(rho0: &DensityMatrix, gen: &GeneratorSet, grid: Grid, observables: &[Observable]) -> Result<Evolution> {
    let compiled = CompiledGenerator::new(gen)?;
    evolve_compiled(rho0, &compiled, grid, observables, EvolveOptions::default())
}

pub fn evolve_compiled(
    rho0: &DensityMatrix,
    gen: &CompiledGenerator,
    grid: Grid,
    observables: &[Observable],
    options: EvolveOptions,
) -> Result<Evolution> {
    grid.validate()?;
    check_tags(&rho0.tag, &gen.tag)?;
    for o in observables {
        o.check(&rho0.tag)?;
    }
    let n_steps = grid.steps();
    let dt = if n_steps == 0 { 0.0 } else { grid.t_end / n_steps as f64 };
    if dt * gen.rate_scale() > 0.05 {
        log::warn!(
            "dt = {dt} exceeds 0.05 / (rate scale {:.3}); results may be inaccurate",
            gen.rate_scale()
        );
    }

    let n = gen.dim;
    let len = n * n;
    let mut rho: Vec<C64> = rho0.matrix.as_slice().to_vec();
    let mut k1 = vec![ZERO; len];
    let mut k2 = vec![ZERO; len];
    let mut k3 = vec![ZERO; len];
    let mut k4 = vec![ZERO; len];
    let mut stage = vec![ZERO; len];
    let mut scratch = vec![ZERO; len];

    let mut series = TimeSeries {
        times: Vec::new(),
        channels: observables
            .iter()
            .map(|o| Channel {
                name: o.name.clone(),
                data: if o.is_real() { ChannelData::Real(Vec::new()) } else { ChannelData::Complex(Vec::new()) },
            })
            .collect(),
    };
    let mut hygiene = Hygiene::default();
    let mut n_samples = 0usize;

    let mut record = |t: f64, rho: &[C64], series: &mut TimeSeries, hygiene: &mut Hygiene| {
        let m = DMatrix::from_column_slice(n, n, rho);
        series.times.push(t);
        for (o, ch) in observables.iter().zip(series.channels.iter_mut()) {
            let v = o.evaluate(&m);
            match &mut ch.data {
                ChannelData::Real(x) => x.push(v.re),
                ChannelData::Complex(x) => x.push(v),
            }
        }
        hygiene.max_hermiticity_drift = hygiene.max_hermiticity_drift.max(hermiticity_error(&m));
        hygiene.max_trace_drift = hygiene.max_trace_drift.max((m.trace() - Complex::new(1.0, 0.0)).norm());
        if options.eigen_check_every > 0 && n_samples.is_multiple_of(options.eigen_check_every) {
            let h = (&m + m.adjoint()) * Complex::new(0.5, 0.0);
            let min = h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
            hygiene.min_eigenvalue = hygiene.min_eigenvalue.min(min);
        }
        n_samples += 1;
    };

    record(rho0.time, &rho, &mut series, &mut hygiene);
    let half = Complex::new(dt / 2.0, 0.0);
    let full = Complex::new(dt, 0.0);
    let sixth = Complex::new(dt / 6.0, 0.0);
    for step in 1..=n_steps {
        gen.apply(&rho, &mut k1, &mut scratch);
        for ((s, r), k) in stage.iter_mut().zip(&rho).zip(&k1) {
            *s = r + k * half;
        }
        gen.apply(&stage, &mut k2, &mut scratch);
        for ((s, r), k) in stage.iter_mut().zip(&rho).zip(&k2) {
            *s = r + k * half;
        }
        gen.apply(&stage, &mut k3, &mut scratch);
        for ((s, r), k) in stage.iter_mut().zip(&rho).zip(&k3) {
            *s = r + k * full;
        }
        gen.apply(&stage, &mut k4, &mut scratch);
        for i in 0..len {
            rho[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * sixth;
        }

        let t = rho0.time + step as f64 * dt;
        let trace: C64 = (0..n).map(|k| rho[k * n + k]).sum();
        let drift = (trace - Complex::new(1.0, 0.0)).norm();
        hygiene.max_trace_drift = hygiene.max_trace_drift.max(drift);
        if drift > options.trace_abort || !drift.is_finite() {
            return Err(Error::TraceDrift { drift, time: t, dt });
        }
        if step % grid.sample_every == 0 || step == n_steps {
            record(t, &rho, &mut series, &mut hygiene);
        }
    }
    debug_assert!(series.is_consistent());
    let final_state = DensityMatrix::new(rho0.tag, DMatrix::from_vec(n, n, rho), rho0.time + grid.t_end);
    Ok(Evolution { series, final_state, hygiene })
}
