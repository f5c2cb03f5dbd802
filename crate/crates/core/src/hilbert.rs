//! Two-fermion-per-site Fock spaces and the operators acting on them.
//!
//! Single-particle modes on a site are ordered ground ascending in m, then
//! excited ascending in m. A site state |p q⟩ with p < q stands for
//! f†_p f†_q |vac⟩. Operators that appear in the master equation are all
//! quadratic and site-local, so fermionic signs only have to be tracked
//! within a site; sites are combined with an ordinary tensor product, site 0
//! being the most significant index.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Complex, DMatrix, DVector};

use crate::angular::{cg_transition, spin_matrices, HalfInt, LevelScheme, Polarization};
use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Manifold {
    Ground,
    Excited,
}

/// A single-particle internal level |g_m⟩ or |e_m⟩.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mode {
    pub manifold: Manifold,
    pub m: HalfInt,
}

impl Mode {
    pub fn ground(m: HalfInt) -> Self {
        Mode { manifold: Manifold::Ground, m }
    }

    pub fn excited(m: HalfInt) -> Self {
        Mode { manifold: Manifold::Excited, m }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.manifold {
            Manifold::Ground => 'g',
            Manifold::Excited => 'e',
        };
        if self.m.twice() >= 0 {
            write!(f, "{c}+{}", self.m)
        } else {
            write!(f, "{c}{}", self.m)
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    /// Accepts `g-1/2`, `e+3/2`, `e_3/2` or `g:-9/2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let manifold = match chars.next() {
            Some('g') | Some('G') => Manifold::Ground,
            Some('e') | Some('E') => Manifold::Excited,
            _ => return Err(Error::InvalidMode(s.to_string())),
        };
        let rest = chars.as_str();
        let rest = rest.strip_prefix(['_', ':']).unwrap_or(rest);
        let m: HalfInt = rest.parse().map_err(|_| Error::InvalidMode(s.to_string()))?;
        Ok(Mode { manifold, m })
    }
}

/// Identifies the space a vector or operator lives on. Bases are built
/// deterministically from (scheme, number of sites), so equal tags mean equal bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisTag {
    pub scheme: LevelScheme,
    pub n_sites: usize,
}

impl fmt::Display for BasisTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} x {} sites]", self.scheme, self.n_sites)
    }
}

fn check_tags(a: &BasisTag, b: &BasisTag) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::BasisMismatch(a.to_string(), b.to_string()))
    }
}

/// Antisymmetric two-fermion basis of one lattice site.
#[derive(Clone, Debug)]
pub struct SiteBasis {
    scheme: LevelScheme,
    modes: Vec<Mode>,
    states: Vec<(usize, usize)>,
    lookup: Vec<Option<usize>>,
}

/// Builds the C(N_modes, 2)-dimensional site basis, states sorted lexicographically.
pub fn build_site_basis(scheme: &LevelScheme) -> Result<SiteBasis> {
    SiteBasis::new(scheme)
}

impl SiteBasis {
    pub fn new(scheme: &LevelScheme) -> Result<Self> {
        // Re-validate in case the scheme was assembled by hand.
        let scheme = LevelScheme::new(scheme.ground, scheme.excited)?;
        let modes: Vec<Mode> = scheme
            .ground
            .projections()
            .map(Mode::ground)
            .chain(scheme.excited.projections().map(Mode::excited))
            .collect();
        let n = modes.len();
        if n > 64 {
            return Err(Error::InvalidArgument(format!("{n} modes per site is more than supported")));
        }
        let mut states = Vec::with_capacity(n * (n - 1) / 2);
        let mut lookup = vec![None; n * n];
        for p in 0..n {
            for q in (p + 1)..n {
                lookup[p * n + q] = Some(states.len());
                lookup[q * n + p] = Some(states.len());
                states.push((p, q));
            }
        }
        Ok(SiteBasis { scheme, modes, states, lookup })
    }

    pub fn scheme(&self) -> &LevelScheme {
        &self.scheme
    }

    pub fn tag(&self) -> BasisTag {
        BasisTag { scheme: self.scheme, n_sites: 1 }
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    /// Mode-index pairs (p, q), p < q, in basis order.
    pub fn states(&self) -> &[(usize, usize)] {
        &self.states
    }

    pub fn mode_index(&self, mode: &Mode) -> Result<usize> {
        let (offset, f) = match mode.manifold {
            Manifold::Ground => (0, self.scheme.ground),
            Manifold::Excited => (self.scheme.n_ground(), self.scheme.excited),
        };
        if mode.m.abs() > f || !mode.m.same_parity(f) {
            return Err(Error::InvalidMode(format!("{mode} for F = {f}")));
        }
        Ok(offset + ((mode.m.twice() + f.twice()) / 2) as usize)
    }

    /// Index of the state occupying modes `p` and `q` (either order).
    pub fn index_of(&self, p: usize, q: usize) -> Option<usize> {
        let n = self.modes.len();
        if p >= n || q >= n {
            return None;
        }
        self.lookup[p * n + q]
    }

    pub fn state_modes(&self, index: usize) -> (Mode, Mode) {
        let (p, q) = self.states[index];
        (self.modes[p], self.modes[q])
    }

    pub fn excitations(&self, index: usize) -> usize {
        let ng = self.scheme.n_ground();
        let (p, q) = self.states[index];
        usize::from(p >= ng) + usize::from(q >= ng)
    }

    pub fn total_m(&self, index: usize) -> HalfInt {
        let (a, b) = self.state_modes(index);
        a.m + b.m
    }

    /// Human-readable label like `|g-1/2 e+1/2⟩`.
    pub fn label(&self, index: usize) -> String {
        let (a, b) = self.state_modes(index);
        format!("|{a} {b}⟩")
    }

    /// Site matrix of f†_out f_in.
    pub fn one_body(&self, out: &Mode, inn: &Mode) -> Result<DMatrix<C64>> {
        let a = self.mode_index(out)?;
        let b = self.mode_index(inn)?;
        Ok(self.one_body_by_index(a, b))
    }

    pub(crate) fn one_body_by_index(&self, out: usize, inn: usize) -> DMatrix<C64> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for (col, &occ) in self.states.iter().enumerate() {
            if let Some((sign, (p, q))) = hop(occ, out, inn) {
                let row = self.lookup[p * self.modes.len() + q].expect("pair in basis");
                m[(row, col)] += Complex::new(sign, 0.0);
            }
        }
        m
    }

    /// D^-_q = Σ_m C^q_m f†_{g_m} f_{e_{m+q}} on this site.
    pub fn lowering(&self, q: Polarization) -> DMatrix<C64> {
        let d = self.dim();
        let mut out = DMatrix::zeros(d, d);
        let qh = q.as_halfint();
        for m in self.scheme.ground.projections() {
            let c = cg_transition(&self.scheme, m, q);
            if c == 0.0 {
                continue;
            }
            let g = self.mode_index(&Mode::ground(m)).expect("ground mode");
            let e = self.mode_index(&Mode::excited(m + qh)).expect("excited mode");
            out += self.one_body_by_index(g, e) * Complex::new(c, 0.0);
        }
        out
    }

    /// D^+_q = Σ_m C^q_m f†_{e_{m+q}} f_{g_m}, assembled from the raising hops
    /// directly rather than by taking an adjoint.
    pub fn raising(&self, q: Polarization) -> DMatrix<C64> {
        let d = self.dim();
        let mut out = DMatrix::zeros(d, d);
        let qh = q.as_halfint();
        for m in self.scheme.ground.projections() {
            let c = cg_transition(&self.scheme, m, q);
            if c == 0.0 {
                continue;
            }
            let g = self.mode_index(&Mode::ground(m)).expect("ground mode");
            let e = self.mode_index(&Mode::excited(m + qh)).expect("excited mode");
            out += self.one_body_by_index(e, g) * Complex::new(c, 0.0);
        }
        out
    }

    pub fn excitation_number(&self) -> DMatrix<C64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |r, c| if r == c { Complex::new(self.excitations(r) as f64, 0.0) } else { Complex::new(0.0, 0.0) })
    }

    /// Components (F_T,x, F_T,y, F_T,z) of the total angular momentum of the site.
    pub fn total_f(&self) -> [DMatrix<C64>; 3] {
        let d = self.dim();
        let mut out = [DMatrix::zeros(d, d), DMatrix::zeros(d, d), DMatrix::zeros(d, d)];
        let blocks = [(0usize, self.scheme.ground), (self.scheme.n_ground(), self.scheme.excited)];
        for (offset, f) in blocks {
            let spins = spin_matrices(f);
            let n = f.multiplicity();
            for a in 0..n {
                for b in 0..n {
                    let hop_ab = self.one_body_by_index(offset + a, offset + b);
                    for (acc, s) in out.iter_mut().zip(spins.iter()) {
                        let v = s[(a, b)];
                        if v != Complex::new(0.0, 0.0) {
                            *acc += &hop_ab * v;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn total_f_squared(&self) -> DMatrix<C64> {
        let [fx, fy, fz] = self.total_f();
        &fx * &fx + &fy * &fy + &fz * &fz
    }

    /// Unit vector |a b⟩ = f†_a f†_b |vac⟩, with the sign of the given order.
    pub fn fock(&self, a: &Mode, b: &Mode) -> Result<DVector<C64>> {
        let p = self.mode_index(a)?;
        let q = self.mode_index(b)?;
        if p == q {
            return Err(Error::PauliViolation(a.to_string()));
        }
        let mut v = DVector::zeros(self.dim());
        let idx = self.lookup[p * self.modes.len() + q].expect("pair in basis");
        v[idx] = Complex::new(if p < q { 1.0 } else { -1.0 }, 0.0);
        Ok(v)
    }
}

/// f†_out f_in applied to f†_p f†_q |vac⟩ (p < q), using Jordan-Wigner signs
/// over the site's mode ordering. Returns the sign and sorted result pair.
fn hop(occ: (usize, usize), out: usize, inn: usize) -> Option<(f64, (usize, usize))> {
    let (p, q) = occ;
    let mut bits: u64 = (1 << p) | (1 << q);
    if bits & (1 << inn) == 0 {
        return None;
    }
    let below = |bits: u64, k: usize| (bits & ((1u64 << k) - 1)).count_ones();
    let mut sign = if below(bits, inn) % 2 == 0 { 1.0 } else { -1.0 };
    bits &= !(1 << inn);
    if bits & (1 << out) != 0 {
        return None;
    }
    if below(bits, out) % 2 == 1 {
        sign = -sign;
    }
    bits |= 1 << out;
    let lo = bits.trailing_zeros() as usize;
    let hi = 63 - bits.leading_zeros() as usize;
    Some((sign, (lo, hi)))
}

/// Tensor product of identical site bases.
#[derive(Clone, Debug)]
pub struct CompositeBasis {
    site: SiteBasis,
    n_sites: usize,
}

impl CompositeBasis {
    pub fn new(site: SiteBasis, n_sites: usize) -> Result<Self> {
        if n_sites == 0 {
            return Err(Error::InvalidArgument("a composite basis needs at least one site".into()));
        }
        Ok(CompositeBasis { site, n_sites })
    }

    pub fn single(scheme: &LevelScheme) -> Result<Self> {
        CompositeBasis::new(SiteBasis::new(scheme)?, 1)
    }

    pub fn site_basis(&self) -> &SiteBasis {
        &self.site
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn site_dim(&self) -> usize {
        self.site.dim()
    }

    pub fn dim(&self) -> usize {
        self.site.dim().pow(self.n_sites as u32)
    }

    pub fn tag(&self) -> BasisTag {
        BasisTag { scheme: self.site.scheme, n_sites: self.n_sites }
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.n_sites {
            Err(Error::SiteOutOfRange { site, n_sites: self.n_sites })
        } else {
            Ok(())
        }
    }

    /// Per-site state indices of a composite index.
    pub fn site_indices(&self, mut index: usize) -> Vec<usize> {
        let d = self.site.dim();
        let mut out = vec![0; self.n_sites];
        for slot in out.iter_mut().rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    /// (outer, inner) extents around `site` when the vector is viewed as a row-major tensor.
    fn axis_extents(&self, site: usize) -> (usize, usize) {
        let d = self.site.dim();
        (d.pow(site as u32), d.pow((self.n_sites - site - 1) as u32))
    }

    /// Dense kron(1, site_op, 1). Only sensible for modest composite dimensions.
    pub fn embed(&self, site_op: &DMatrix<C64>, site: usize) -> Result<OperatorMatrix> {
        self.check_site(site)?;
        let (outer, inner) = self.axis_extents(site);
        let m = DMatrix::<C64>::identity(outer, outer)
            .kronecker(site_op)
            .kronecker(&DMatrix::<C64>::identity(inner, inner));
        Ok(OperatorMatrix { tag: self.tag(), matrix: m })
    }

    /// Applies a site operator to a composite state without forming the full matrix.
    pub fn apply_site(&self, site_op: &SparseMatrix, site: usize, psi: &StateVector) -> Result<StateVector> {
        self.check_site(site)?;
        check_tags(&self.tag(), &psi.tag)?;
        let (outer, inner) = self.axis_extents(site);
        let out = site_op.apply_on_axis(psi.amplitudes.as_slice(), outer, inner);
        Ok(StateVector { tag: self.tag(), amplitudes: DVector::from_vec(out) })
    }
}

/// Complex amplitudes over a tagged basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    pub tag: BasisTag,
    pub amplitudes: DVector<C64>,
}

impl StateVector {
    pub fn new(tag: BasisTag, amplitudes: DVector<C64>) -> Self {
        StateVector { tag, amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn normalized(&self) -> StateVector {
        StateVector { tag: self.tag, amplitudes: self.amplitudes.normalize() }
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        check_tags(&self.tag, &other.tag)?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }
}

/// Dense operator over a tagged basis.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub tag: BasisTag,
    pub matrix: DMatrix<C64>,
}

impl OperatorMatrix {
    pub fn new(tag: BasisTag, matrix: DMatrix<C64>) -> Self {
        OperatorMatrix { tag, matrix }
    }

    pub fn zeros(tag: BasisTag, dim: usize) -> Self {
        OperatorMatrix { tag, matrix: DMatrix::zeros(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        check_tags(&self.tag, &psi.tag)?;
        Ok(StateVector { tag: self.tag, amplitudes: &self.matrix * &psi.amplitudes })
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        OperatorMatrix { tag: self.tag, matrix: self.matrix.adjoint() }
    }

    pub fn add(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        check_tags(&self.tag, &other.tag)?;
        Ok(OperatorMatrix { tag: self.tag, matrix: &self.matrix + &other.matrix })
    }

    pub fn mul(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        check_tags(&self.tag, &other.tag)?;
        Ok(OperatorMatrix { tag: self.tag, matrix: &self.matrix * &other.matrix })
    }

    pub fn scale(&self, s: C64) -> OperatorMatrix {
        OperatorMatrix { tag: self.tag, matrix: &self.matrix * s }
    }

    /// max |A - A†|.
    pub fn hermiticity_error(&self) -> f64 {
        let m = &self.matrix;
        let mut worst: f64 = 0.0;
        for c in 0..m.ncols() {
            for r in 0..=c {
                worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// ⟨a|A|b⟩.
    pub fn matrix_element(&self, a: &StateVector, b: &StateVector) -> Result<C64> {
        check_tags(&self.tag, &a.tag)?;
        check_tags(&self.tag, &b.tag)?;
        Ok(a.amplitudes.dotc(&(&self.matrix * &b.amplitudes)))
    }
}

/// f†_out f_in on `site` of the composite space.
pub fn one_body_operator(basis: &CompositeBasis, site: usize, out: &Mode, inn: &Mode) -> Result<OperatorMatrix> {
    let m = basis.site_basis().one_body(out, inn)?;
    basis.embed(&m, site)
}

/// D^-_{i,q}.
pub fn lowering_operator(basis: &CompositeBasis, site: usize, q: Polarization) -> Result<OperatorMatrix> {
    basis.embed(&basis.site_basis().lowering(q), site)
}

/// D^+_{i,q}, built from raising hops.
pub fn raising_operator(basis: &CompositeBasis, site: usize, q: Polarization) -> Result<OperatorMatrix> {
    basis.embed(&basis.site_basis().raising(q), site)
}

/// Total number of excited atoms, diagonal in the Fock basis.
pub fn excitation_number_operator(basis: &CompositeBasis) -> OperatorMatrix {
    let d = basis.dim();
    let mut m = DMatrix::zeros(d, d);
    for k in 0..d {
        let n: usize = basis.site_indices(k).iter().map(|&s| basis.site_basis().excitations(s)).sum();
        m[(k, k)] = Complex::new(n as f64, 0.0);
    }
    OperatorMatrix { tag: basis.tag(), matrix: m }
}

/// F_T · F_T for the two atoms of one site.
pub fn total_f_squared_operator(site: &SiteBasis) -> OperatorMatrix {
    OperatorMatrix { tag: site.tag(), matrix: site.total_f_squared() }
}

/// F_T,z for one site.
pub fn total_fz_operator(site: &SiteBasis) -> OperatorMatrix {
    let [_, _, fz] = site.total_f();
    OperatorMatrix { tag: site.tag(), matrix: fz }
}

/// Single-site Fock state |a b⟩.
pub fn fock_state(basis: &SiteBasis, labels: [&Mode; 2]) -> Result<StateVector> {
    Ok(StateVector { tag: basis.tag(), amplitudes: basis.fock(labels[0], labels[1])? })
}

/// ⊗_i ψ_i over the composite basis; each factor must be a single-site vector
/// of the same scheme.
pub fn product_state(basis: &CompositeBasis, per_site: &[StateVector]) -> Result<StateVector> {
    if per_site.len() != basis.n_sites() {
        return Err(Error::InvalidArgument(format!(
            "{} site states given for {} sites",
            per_site.len(),
            basis.n_sites()
        )));
    }
    let site_tag = basis.site_basis().tag();
    let mut acc = DVector::from_element(1, Complex::new(1.0, 0.0));
    for s in per_site {
        check_tags(&site_tag, &s.tag)?;
        acc = acc.kronecker(&s.amplitudes);
    }
    Ok(StateVector { tag: basis.tag(), amplitudes: acc })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scheme(g: &str, e: &str) -> LevelScheme {
        LevelScheme::parse(g, e).unwrap()
    }

    fn mode(s: &str) -> Mode {
        s.parse().unwrap()
    }

    #[test]
    fn basis_dimensions() {
        assert_eq!(SiteBasis::new(&scheme("1/2", "1/2")).unwrap().dim(), 6);
        assert_eq!(SiteBasis::new(&scheme("9/2", "9/2")).unwrap().dim(), 190);
        assert_eq!(SiteBasis::new(&scheme("1/2", "3/2")).unwrap().dim(), 15);
        let bad = LevelScheme { ground: HalfInt::HALF, excited: HalfInt::from_twice(5) };
        assert!(matches!(build_site_basis(&bad), Err(Error::NotDipoleAllowed { .. })));
    }

    #[test]
    fn basis_lookup_roundtrip() {
        let b = SiteBasis::new(&scheme("3/2", "5/2")).unwrap();
        for (k, &(p, q)) in b.states().iter().enumerate() {
            assert!(p < q);
            assert_eq!(b.index_of(p, q), Some(k));
            assert_eq!(b.index_of(q, p), Some(k));
        }
        let mut sorted = b.states().to_vec();
        sorted.sort();
        assert_eq!(sorted, b.states());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!(mode("g-1/2"), Mode::ground(HalfInt::from_twice(-1)));
        assert_eq!(mode("e+3/2"), Mode::excited(HalfInt::from_twice(3)));
        assert_eq!(mode("e_3/2"), mode("e:+3/2"));
        assert!("x1/2".parse::<Mode>().is_err());
        assert_eq!(mode("g-1/2").to_string(), "g-1/2");
    }

    #[test]
    fn number_operator_on_ground_pair() {
        let b = SiteBasis::new(&scheme("1/2", "1/2")).unwrap();
        let n = b.one_body(&mode("g+1/2"), &mode("g+1/2")).unwrap();
        let psi = b.fock(&mode("g-1/2"), &mode("g+1/2")).unwrap();
        assert!((&n * &psi - &psi).norm() < 1e-15);
    }

    #[test]
    fn hop_sign_fixture() {
        // modes: g-1/2 = 0, g+1/2 = 1, e-1/2 = 2, e+1/2 = 3.
        // f†_0 f_3 f†_1 f†_3 |0⟩ = f†_0 (-f†_1) |0⟩ ... = -|0 1⟩
        let b = SiteBasis::new(&scheme("1/2", "1/2")).unwrap();
        let op = b.one_body(&mode("g-1/2"), &mode("e+1/2")).unwrap();
        let psi = b.fock(&mode("g+1/2"), &mode("e+1/2")).unwrap();
        let out = &op * &psi;
        let target = b.fock(&mode("g-1/2"), &mode("g+1/2")).unwrap();
        assert!((out + target).norm() < 1e-15);
    }

    #[test]
    fn hop_matches_pair_rules() {
        // Hand rules for f†_a f_b on f†_p f†_q|0⟩, p<q.
        fn rule(p: usize, q: usize, a: usize, b: usize) -> Option<(f64, (usize, usize))> {
            if b == p {
                if a == q {
                    return None;
                }
                return Some(if a < q { (1.0, (a, q)) } else { (-1.0, (q, a)) });
            }
            if b == q {
                if a == p {
                    return None;
                }
                return Some(if a < p { (-1.0, (a, p)) } else { (1.0, (p, a)) });
            }
            None
        }
        for p in 0..8 {
            for q in (p + 1)..8 {
                for a in 0..8 {
                    for b in 0..8 {
                        assert_eq!(hop((p, q), a, b), rule(p, q, a, b), "p={p} q={q} a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn excited_number_is_sum_of_excited_occupations() {
        let b = SiteBasis::new(&scheme("3/2", "5/2")).unwrap();
        let mut sum = DMatrix::zeros(b.dim(), b.dim());
        for m in HalfInt::from_twice(5).projections() {
            let e = Mode::excited(m);
            sum += b.one_body(&e, &e).unwrap();
        }
        assert!((sum - b.excitation_number()).norm() < 1e-14);
    }

    #[test]
    fn fock_rejects_double_occupation() {
        let b = SiteBasis::new(&scheme("1/2", "1/2")).unwrap();
        assert!(matches!(
            fock_state(&b, [&mode("g+1/2"), &mode("g+1/2")]),
            Err(Error::PauliViolation(_))
        ));
        assert!(fock_state(&b, [&mode("g+3/2"), &mode("g+1/2")]).is_err());
    }

    #[test]
    fn lowering_kills_ground_states() {
        let b = SiteBasis::new(&scheme("3/2", "5/2")).unwrap();
        for q in Polarization::ALL {
            let d = b.lowering(q);
            for k in 0..b.dim() {
                if b.excitations(k) == 0 {
                    assert!(d.column(k).norm() == 0.0);
                }
            }
        }
    }

    #[test]
    fn lowering_on_half_half() {
        let s = scheme("1/2", "1/2");
        let b = SiteBasis::new(&s).unwrap();
        let d0 = b.lowering(Polarization::Zero);
        let psi = b.fock(&mode("g+1/2"), &mode("e-1/2")).unwrap();
        let gg = b.fock(&mode("g-1/2"), &mode("g+1/2")).unwrap();
        let c = cg_transition(&s, HalfInt::from_twice(-1), Polarization::Zero);
        // f†_{g-1/2} f_{e-1/2} f†_{g+1/2} f†_{e-1/2}|0⟩ = -|g-1/2 g+1/2⟩
        assert!((&d0 * &psi + &gg * Complex::new(c, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn raising_is_adjoint_of_lowering() {
        for (g, e) in [("1/2", "1/2"), ("1/2", "3/2"), ("3/2", "1/2"), ("5/2", "5/2")] {
            let b = SiteBasis::new(&scheme(g, e)).unwrap();
            for q in Polarization::ALL {
                assert!((b.lowering(q).adjoint() - b.raising(q)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn lowering_changes_m_by_q() {
        let b = SiteBasis::new(&scheme("3/2", "5/2")).unwrap();
        let [_, _, fz] = b.total_f();
        for q in Polarization::ALL {
            let d = b.lowering(q);
            let comm = &fz * &d - &d * &fz;
            assert!((comm + &d * Complex::new(q.q() as f64, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn composite_embedding_and_axis_application_agree() {
        let s = scheme("1/2", "1/2");
        let basis = CompositeBasis::new(SiteBasis::new(&s).unwrap(), 3).unwrap();
        let d = basis.dim();
        let psi = StateVector::new(
            basis.tag(),
            DVector::from_fn(d, |k, _| Complex::new((k as f64).sin(), (k as f64 * 0.3).cos())),
        );
        let site_op = basis.site_basis().lowering(Polarization::Zero);
        for site in 0..3 {
            let dense = lowering_operator(&basis, site, Polarization::Zero).unwrap().apply(&psi).unwrap();
            let fast = basis.apply_site(&SparseMatrix::from_dense(&site_op), site, &psi).unwrap();
            assert!((dense.amplitudes - fast.amplitudes).norm() < 1e-12);
        }
    }

    #[test]
    fn site_indices_are_row_major() {
        let s = scheme("1/2", "1/2");
        let basis = CompositeBasis::new(SiteBasis::new(&s).unwrap(), 2).unwrap();
        assert_eq!(basis.site_indices(6 * 2 + 5), vec![2, 5]);
    }

    #[test]
    fn mismatched_tags_rejected() {
        let a = CompositeBasis::single(&scheme("1/2", "1/2")).unwrap();
        let b = CompositeBasis::single(&scheme("1/2", "3/2")).unwrap();
        let op = excitation_number_operator(&a);
        let psi = StateVector::new(b.tag(), DVector::zeros(b.dim()));
        assert!(matches!(op.apply(&psi), Err(Error::BasisMismatch(_, _))));
    }

    #[test]
    fn product_of_unit_vectors_is_unit() {
        let s = scheme("1/2", "3/2");
        let basis = CompositeBasis::new(SiteBasis::new(&s).unwrap(), 2).unwrap();
        let a = fock_state(basis.site_basis(), [&mode("g-1/2"), &mode("e+3/2")]).unwrap();
        let b = fock_state(basis.site_basis(), [&mode("g-1/2"), &mode("g+1/2")]).unwrap();
        let p = product_state(&basis, &[a, b]).unwrap();
        assert!((p.norm() - 1.0).abs() < 1e-15);
        let n = excitation_number_operator(&basis);
        assert!((n.matrix_element(&p, &p).unwrap().re - 1.0).abs() < 1e-15);
    }
}
