mod common;

use common::{c, random_table, scheme, site};
use fermidark::angular::{cg_transition, HalfInt, Polarization};
use fermidark::darkstates::{dark_equal_f, dark_f_plus_one};
use fermidark::dynamics::build_hamiltonian;
use fermidark::greens::{coupling_table, Geometry};
use fermidark::hilbert::{excitation_number_operator, product_state, CompositeBasis, Mode, SiteBasis, StateVector};
use fermidark::C64;
use nalgebra::{Complex, DMatrix, DVector};
use proptest::prelude::*;

/// Isometry from the pair basis into the antisymmetric part of the
/// two-particle product space: |p q⟩ ↦ (|p⟩|q⟩ − |q⟩|p⟩)/√2.
fn antisymmetrizer(site: &SiteBasis) -> DMatrix<C64> {
    let n = site.n_modes();
    let mut w = DMatrix::zeros(n * n, site.dim());
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for (k, &(p, q)) in site.states().iter().enumerate() {
        w[(p * n + q, k)] += c(s);
        w[(q * n + p, k)] -= c(s);
    }
    w
}

fn two_body(h: &DMatrix<C64>) -> DMatrix<C64> {
    let id = DMatrix::<C64>::identity(h.nrows(), h.ncols());
    h.kronecker(&id) + id.kronecker(h)
}

/// Single-particle d_q = Σ_m C^q_m |g_m⟩⟨e_{m+q}|.
fn single_particle_lowering(site: &SiteBasis, q: Polarization) -> DMatrix<C64> {
    let n = site.n_modes();
    let sch = site.scheme();
    let mut d = DMatrix::zeros(n, n);
    for m in sch.ground.projections() {
        let cg = cg_transition(sch, m, q);
        if cg == 0.0 {
            continue;
        }
        let g = site.mode_index(&Mode::ground(m)).unwrap();
        let e = site.mode_index(&Mode::excited(m + q.as_halfint())).unwrap();
        d[(g, e)] = c(cg);
    }
    d
}

#[test]
fn one_body_operators_match_first_quantization() {
    for (g, e) in [("1/2", "1/2"), ("1/2", "3/2"), ("3/2", "1/2"), ("3/2", "5/2")] {
        let s = site(g, e);
        let w = antisymmetrizer(&s);
        let n = s.n_modes();
        for a in 0..n {
            for b in 0..n {
                let mut h = DMatrix::zeros(n, n);
                h[(a, b)] = c(1.0);
                let first = w.adjoint() * two_body(&h) * &w;
                let second = s.one_body(&s.modes()[a], &s.modes()[b]).unwrap();
                assert!((first - second).norm() < 1e-14, "{g}->{e} hop {a}<-{b}");
            }
        }
        for q in Polarization::ALL {
            let first = w.adjoint() * two_body(&single_particle_lowering(&s, q)) * &w;
            assert!((first - s.lowering(q)).norm() < 1e-14);
        }
    }
}

fn first_quantized_pair(site: &SiteBasis, terms: &[(f64, Mode, Mode)]) -> DVector<C64> {
    let n = site.n_modes();
    let mut v = DVector::zeros(n * n);
    for (amp, a, b) in terms {
        let p = site.mode_index(a).unwrap();
        let q = site.mode_index(b).unwrap();
        v[p * n + q] += c(*amp);
        v[q * n + p] -= c(*amp);
    }
    let norm = v.norm();
    v / c(norm)
}

fn same_ray(a: &DVector<C64>, b: &DVector<C64>) -> bool {
    (a.dotc(b).norm() - a.norm() * b.norm()).abs() < 1e-13
}

#[test]
fn dark_constructors_match_antisymmetrized_products() {
    for f in ["1/2", "3/2", "5/2", "7/2", "9/2"] {
        let s = site(f, f);
        let ff: HalfInt = f.parse().unwrap();
        let terms: Vec<(f64, Mode, Mode)> = ff
            .projections()
            .map(|m| {
                let sign = if (ff - m).as_integer().unwrap() % 2 == 0 { 1.0 } else { -1.0 };
                (sign, Mode::ground(m), Mode::excited(-m))
            })
            .collect();
        let first = first_quantized_pair(&s, &terms);
        let d = dark_equal_f(s.scheme()).unwrap();
        let mapped = antisymmetrizer(&s) * &d.amplitudes;
        assert!(same_ray(&first, &mapped), "F = {f}");
        for q in Polarization::ALL {
            let lowered = two_body(&single_particle_lowering(&s, q)) * &first;
            assert!(lowered.norm() < 1e-13);
        }
    }
    // |D_{+1}⟩ for 1/2 → 3/2 with hand-written amplitudes.
    let s = site("1/2", "3/2");
    let m = |x: &str| x.parse::<Mode>().unwrap();
    let first = first_quantized_pair(
        &s,
        &[(0.75f64.sqrt(), m("g+1/2"), m("e+1/2")), (0.5, m("g-1/2"), m("e+3/2"))],
    );
    let d = dark_f_plus_one(s.scheme(), HalfInt::ONE).unwrap();
    assert!(same_ray(&first, &(antisymmetrizer(&s) * &d.amplitudes)));
}

fn swap_sites(basis: &CompositeBasis) -> DMatrix<C64> {
    let d = basis.site_dim();
    let mut p = DMatrix::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            p[(b * d + a, a * d + b)] = c(1.0);
        }
    }
    p
}

#[test]
fn two_site_hamiltonian_is_symmetric_under_relabeling() {
    let sch = scheme("1/2", "3/2");
    let basis = CompositeBasis::new(SiteBasis::new(&sch).unwrap(), 2).unwrap();
    let x = [0.3, -1.2, 0.8];
    let forward = coupling_table(&Geometry::new(vec![[0.0; 3], x]).unwrap(), 1.0).unwrap();
    let backward = coupling_table(&Geometry::new(vec![x, [0.0; 3]]).unwrap(), 1.0).unwrap();
    let h1 = build_hamiltonian(&basis, &forward).unwrap().matrix;
    let h2 = build_hamiltonian(&basis, &backward).unwrap().matrix;
    let p = swap_sites(&basis);
    assert!((&p * h1 * &p - h2).norm() < 1e-12);
}

#[test]
fn product_states_have_additive_excitation_number() {
    let sch = scheme("1/2", "1/2");
    let s = SiteBasis::new(&sch).unwrap();
    let basis = CompositeBasis::new(s.clone(), 3).unwrap();
    let d = dark_equal_f(&sch).unwrap();
    let gg = StateVector::new(s.tag(), s.fock(&"g-1/2".parse().unwrap(), &"g+1/2".parse().unwrap()).unwrap());
    let psi = product_state(&basis, &[d.clone(), gg, d]).unwrap();
    let n = excitation_number_operator(&basis);
    assert!((n.matrix_element(&psi, &psi).unwrap() - c(2.0)).norm() < 1e-13);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn dipolar_hamiltonian_is_hermitian_and_conserves_excitations(seed in 0u64..10_000) {
        let sch = scheme("1/2", "1/2");
        let basis = CompositeBasis::new(SiteBasis::new(&sch).unwrap(), 2).unwrap();
        let h = build_hamiltonian(&basis, &random_table(2, seed)).unwrap();
        prop_assert!(h.hermiticity_error() < 1e-12);
        let n = excitation_number_operator(&basis).matrix;
        prop_assert!((&h.matrix * &n - &n * &h.matrix).norm() < 1e-12);
    }

    #[test]
    fn lowering_and_raising_are_adjoint(tg in 1i32..8, delta in -1i32..=1) {
        let te = tg + 2 * delta;
        prop_assume!(te >= 1);
        let s = SiteBasis::new(&fermidark::angular::LevelScheme::new(HalfInt::from_twice(tg), HalfInt::from_twice(te)).unwrap()).unwrap();
        for q in Polarization::ALL {
            prop_assert!((s.lowering(q).adjoint() - s.raising(q)).norm() < 1e-14);
        }
    }
}

#[test]
fn tags_prevent_mixing_bases() {
    let a = site("1/2", "1/2");
    let b = site("1/2", "3/2");
    let va = StateVector::new(a.tag(), DVector::from_element(a.dim(), Complex::new(0.1, 0.0)));
    let vb = StateVector::new(b.tag(), DVector::from_element(a.dim(), Complex::new(0.1, 0.0)));
    assert!(va.inner(&vb).is_err());
}
