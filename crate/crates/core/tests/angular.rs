mod common;

use common::CgOracle;
use fermidark::angular::{clebsch_gordan, cg_transition, HalfInt, LevelScheme, Polarization};
use proptest::prelude::*;

fn all_j() -> Vec<HalfInt> {
    (0..=9).map(HalfInt::from_twice).collect()
}

#[test]
fn racah_formula_matches_lowering_construction() {
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for j1 in all_j() {
        for j2 in all_j() {
            let oracle = CgOracle::new(j1, j2);
            let mut tj = (j1.twice() - j2.twice()).abs();
            while tj <= j1.twice() + j2.twice() {
                let j = HalfInt::from_twice(tj);
                for m1 in j1.projections() {
                    for m2 in j2.projections() {
                        let m = m1 + m2;
                        if m.abs() > j {
                            continue;
                        }
                        let got = clebsch_gordan(j1, m1, j2, m2, j, m);
                        let expect = oracle.coefficient(m1, m2, j, m);
                        worst = worst.max((got - expect).abs());
                        checked += 1;
                    }
                }
                tj += 2;
            }
        }
    }
    assert!(checked > 10_000);
    assert!(worst < 1e-13, "largest deviation {worst:e}");
}

#[test]
fn known_values() {
    let h = HalfInt::HALF;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    assert!((clebsch_gordan(h, h, h, -h, HalfInt::ZERO, HalfInt::ZERO) - s).abs() < 1e-15);
    assert!((clebsch_gordan(h, -h, h, h, HalfInt::ZERO, HalfInt::ZERO) + s).abs() < 1e-15);
    // ⟨1/2 1/2; 1 0 | 1/2 1/2⟩ = 1/√3
    let v = clebsch_gordan(h, h, HalfInt::ONE, HalfInt::ZERO, h, h);
    assert!((v - 1.0 / 3f64.sqrt()).abs() < 1e-15);
}

#[test]
fn selection_rules_give_zero() {
    let f = HalfInt::from_twice(3);
    assert_eq!(clebsch_gordan(f, f, HalfInt::ONE, HalfInt::ONE, f, f), 0.0);
    assert_eq!(clebsch_gordan(f, f, HalfInt::ONE, HalfInt::ZERO, HalfInt::from_twice(9), f), 0.0);
    let scheme = LevelScheme::parse("1/2", "1/2").unwrap();
    assert_eq!(cg_transition(&scheme, HalfInt::HALF, Polarization::Plus), 0.0);
}

fn half_int(max_twice: i32) -> impl Strategy<Value = HalfInt> {
    (0..=max_twice).prop_map(HalfInt::from_twice)
}

proptest! {
    #[test]
    fn orthogonality(j1 in half_int(9), j2 in half_int(9), pick in 0usize..100, pick2 in 0usize..100, pm in 0usize..100) {
        let tmin = (j1.twice() - j2.twice()).abs();
        let tmax = j1.twice() + j2.twice();
        let n_j = ((tmax - tmin) / 2 + 1) as usize;
        let ja = HalfInt::from_twice(tmin + 2 * (pick % n_j) as i32);
        let jb = HalfInt::from_twice(tmin + 2 * (pick2 % n_j) as i32);
        let small = if ja < jb { ja } else { jb };
        let ms: Vec<HalfInt> = small.projections().collect();
        let m = ms[pm % ms.len()];
        let mut sum = 0.0;
        for m1 in j1.projections() {
            let m2 = m - m1;
            if m2.abs() > j2 {
                continue;
            }
            sum += clebsch_gordan(j1, m1, j2, m2, ja, m) * clebsch_gordan(j1, m1, j2, m2, jb, m);
        }
        let expect = if ja == jb { 1.0 } else { 0.0 };
        prop_assert!((sum - expect).abs() < 1e-12);
    }

    #[test]
    fn parse_round_trip(t in -41i32..41) {
        let h = HalfInt::from_twice(t);
        prop_assert_eq!(h.to_string().parse::<HalfInt>().unwrap(), h);
    }
}
