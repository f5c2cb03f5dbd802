//! Angular-momentum algebra: exact half-integers, Clebsch-Gordan coefficients
//! in the Condon-Shortley convention, the spherical polarization basis and
//! spin matrices.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use nalgebra::{Complex, DMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::C64;

/// An integer or half-integer, stored as twice its value (F = 9/2 is `HalfInt(9)`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(n: i32) -> Self {
        HalfInt(2 * n)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    /// The value as an integer, if it is one.
    pub fn as_integer(self) -> Option<i32> {
        self.is_integer().then_some(self.0 / 2)
    }

    /// True when `self` and `other` differ by an integer.
    pub fn same_parity(self, other: HalfInt) -> bool {
        (self.0 - other.0) % 2 == 0
    }

    /// Projections -j, -j+1, ..., j in ascending order.
    pub fn projections(self) -> impl Iterator<Item = HalfInt> {
        let j = self.0;
        (0..=j).map(move |k| HalfInt(2 * k - j))
    }

    /// Number of projections, 2j+1.
    pub fn multiplicity(self) -> usize {
        (self.0 + 1).max(0) as usize
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Parses `"3"`, `"-1"`, `"9/2"`, `"+3/2"` or `"-1/2"`. Decimal notation is rejected.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidAngularMomentum(format!("cannot parse {s:?} as an integer or half-integer"));
        let t = s.trim();
        let t = t.strip_prefix('+').unwrap_or(t);
        match t.split_once('/') {
            None => t.parse::<i32>().map(HalfInt::from_int).map_err(|_| bad()),
            Some((num, den)) => {
                if den.trim() != "2" {
                    return Err(bad());
                }
                let n: i32 = num.trim().parse().map_err(|_| bad())?;
                if n % 2 == 0 {
                    return Err(bad());
                }
                Ok(HalfInt(n))
            }
        }
    }
}

/// Photon polarization index q in the spherical basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarization {
    Minus,
    Zero,
    Plus,
}

impl Polarization {
    pub const ALL: [Polarization; 3] = [Polarization::Minus, Polarization::Zero, Polarization::Plus];

    pub fn q(self) -> i32 {
        match self {
            Polarization::Minus => -1,
            Polarization::Zero => 0,
            Polarization::Plus => 1,
        }
    }

    pub fn from_q(q: i32) -> Option<Self> {
        match q {
            -1 => Some(Polarization::Minus),
            0 => Some(Polarization::Zero),
            1 => Some(Polarization::Plus),
            _ => None,
        }
    }

    /// Position 0, 1, 2 for q = -1, 0, +1.
    pub fn index(self) -> usize {
        (self.q() + 1) as usize
    }

    pub fn as_halfint(self) -> HalfInt {
        HalfInt::from_int(self.q())
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.q())
    }
}

/// A complex Cartesian 3-vector describing a polarization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarizationVector(pub [C64; 3]);

impl PolarizationVector {
    pub fn new(x: C64, y: C64, z: C64) -> Self {
        PolarizationVector([x, y, z])
    }

    pub fn components(&self) -> &[C64; 3] {
        &self.0
    }

    /// Conjugate-linear in `self`: returns self† · other.
    pub fn dot_conj(&self, other: &PolarizationVector) -> C64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        PolarizationVector(self.0.map(|c| c / n))
    }
}

/// Spherical basis vector: e_0 = e_z, e_± = ∓(e_x ± i e_y)/√2.
pub fn spherical_vector(q: Polarization) -> PolarizationVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex::new(0.0, 0.0);
    match q {
        Polarization::Zero => PolarizationVector::new(z, z, Complex::new(1.0, 0.0)),
        Polarization::Plus => PolarizationVector::new(Complex::new(-s, 0.0), Complex::new(0.0, -s), z),
        Polarization::Minus => PolarizationVector::new(Complex::new(s, 0.0), Complex::new(0.0, -s), z),
    }
}

/// e_q† · eps_L. Rejects `eps_l` whose norm differs from 1 by more than 1e-10.
pub fn polarization_overlap(q: Polarization, eps_l: &PolarizationVector) -> Result<C64> {
    let norm = eps_l.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NonUnitPolarization(norm));
    }
    Ok(spherical_vector(q).dot_conj(eps_l))
}

fn factorial(n: i32) -> BigInt {
    (2..=n.max(0)).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// ⟨j1 m1; j2 m2 | J M⟩ in the Condon-Shortley convention.
///
/// Evaluated from the Racah sum with exact big-integer factorials; the only
/// rounding happens in the final conversion and square root. Couplings that
/// violate the projection or triangle rules return 0.
pub fn clebsch_gordan(j1: HalfInt, m1: HalfInt, j2: HalfInt, m2: HalfInt, j: HalfInt, m: HalfInt) -> f64 {
    let (tj1, tm1, tj2, tm2, tj, tm) = (j1.0, m1.0, j2.0, m2.0, j.0, m.0);
    if tj1 < 0 || tj2 < 0 || tj < 0 {
        return 0.0;
    }
    if tm1 + tm2 != tm || tm1.abs() > tj1 || tm2.abs() > tj2 || tm.abs() > tj {
        return 0.0;
    }
    if (tj1 - tm1) % 2 != 0 || (tj2 - tm2) % 2 != 0 || (tj - tm) % 2 != 0 {
        return 0.0;
    }
    if tj < (tj1 - tj2).abs() || tj > tj1 + tj2 || (tj1 + tj2 + tj) % 2 != 0 {
        return 0.0;
    }
    // All of these are integers once the selection rules hold.
    let a = (tj1 + tj2 - tj) / 2;
    let b = (tj1 - tj2 + tj) / 2;
    let c = (-tj1 + tj2 + tj) / 2;
    let s = (tj1 + tj2 + tj) / 2 + 1;
    let j1m = (tj1 - tm1) / 2;
    let j1p = (tj1 + tm1) / 2;
    let j2m = (tj2 - tm2) / 2;
    let j2p = (tj2 + tm2) / 2;
    let jm = (tj - tm) / 2;
    let jp = (tj + tm) / 2;
    let d1 = (tj - tj2 + tm1) / 2;
    let d2 = (tj - tj1 - tm2) / 2;

    let prefactor = BigRational::new(
        BigInt::from(tj + 1)
            * factorial(a)
            * factorial(b)
            * factorial(c)
            * factorial(jp)
            * factorial(jm)
            * factorial(j1m)
            * factorial(j1p)
            * factorial(j2m)
            * factorial(j2p),
        factorial(s),
    );

    let k_min = 0.max(-d1).max(-d2);
    let k_max = a.min(j1m).min(j2p);
    let mut sum = BigRational::zero();
    for k in k_min..=k_max {
        let den = factorial(k)
            * factorial(a - k)
            * factorial(j1m - k)
            * factorial(j2p - k)
            * factorial(d1 + k)
            * factorial(d2 + k);
        let term = BigRational::new(BigInt::one(), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return 0.0;
    }
    let squared = prefactor * &sum * &sum;
    let magnitude = squared.to_f64().unwrap_or(f64::NAN).sqrt();
    if sum.is_negative() {
        -magnitude
    } else {
        magnitude
    }
}

/// A dipole transition F_g → F_e between degenerate manifolds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LevelScheme {
    pub ground: HalfInt,
    pub excited: HalfInt,
}

impl LevelScheme {
    /// Validates that both F are non-negative, differ by an integer and are
    /// connected by a rank-1 (dipole) transition.
    pub fn new(ground: HalfInt, excited: HalfInt) -> Result<Self> {
        if ground.twice() < 0 || excited.twice() < 0 {
            return Err(Error::InvalidAngularMomentum(format!("negative F in {ground} -> {excited}")));
        }
        if !dipole_allowed(ground, excited) {
            return Err(Error::NotDipoleAllowed { ground: ground.to_string(), excited: excited.to_string() });
        }
        Ok(LevelScheme { ground, excited })
    }

    pub fn parse(ground: &str, excited: &str) -> Result<Self> {
        LevelScheme::new(ground.parse()?, excited.parse()?)
    }

    pub fn n_ground(&self) -> usize {
        self.ground.multiplicity()
    }

    pub fn n_excited(&self) -> usize {
        self.excited.multiplicity()
    }
}

impl fmt::Display for LevelScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.ground, self.excited)
    }
}

/// Whether a rank-1 operator connects angular momenta `a` and `b`.
pub fn dipole_allowed(a: HalfInt, b: HalfInt) -> bool {
    let diff = (a.twice() - b.twice()).abs();
    diff % 2 == 0 && diff <= 2 && !(a.twice() == 0 && b.twice() == 0)
}

/// C^q_m = ⟨F_g, m; 1, q | F_e, m+q⟩; zero when |m+q| > F_e.
pub fn cg_transition(scheme: &LevelScheme, m: HalfInt, q: Polarization) -> f64 {
    let qh = q.as_halfint();
    clebsch_gordan(scheme.ground, m, HalfInt::ONE, qh, scheme.excited, m + qh)
}

/// (F_x, F_y, F_z) in the basis m = -F, ..., F (ascending).
pub fn spin_matrices(f: HalfInt) -> [DMatrix<C64>; 3] {
    let dim = f.multiplicity();
    let ff = f.to_f64();
    let mut fx = DMatrix::<C64>::zeros(dim, dim);
    let mut fy = DMatrix::<C64>::zeros(dim, dim);
    let mut fz = DMatrix::<C64>::zeros(dim, dim);
    for (k, m) in f.projections().enumerate() {
        let mf = m.to_f64();
        fz[(k, k)] = Complex::new(mf, 0.0);
        if k + 1 < dim {
            // ⟨m+1|F_+|m⟩
            let up = (ff * (ff + 1.0) - mf * (mf + 1.0)).sqrt();
            fx[(k + 1, k)] = Complex::new(up / 2.0, 0.0);
            fx[(k, k + 1)] = Complex::new(up / 2.0, 0.0);
            fy[(k + 1, k)] = Complex::new(0.0, -up / 2.0);
            fy[(k, k + 1)] = Complex::new(0.0, up / 2.0);
        }
    }
    [fx, fy, fz]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn h(s: &str) -> HalfInt {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(h("9/2").twice(), 9);
        assert_eq!(h("-1/2").twice(), -1);
        assert_eq!(h("+3/2").twice(), 3);
        assert_eq!(h("2").twice(), 4);
        assert_eq!(h("-3/2").to_string(), "-3/2");
        assert_eq!(h("1").to_string(), "1");
        assert!("4.5".parse::<HalfInt>().is_err());
        assert!("4/2".parse::<HalfInt>().is_err());
        assert!("1/3".parse::<HalfInt>().is_err());
    }

    #[test]
    fn projections_ascending() {
        let ms: Vec<i32> = h("3/2").projections().map(|m| m.twice()).collect();
        assert_eq!(ms, vec![-3, -1, 1, 3]);
        assert_eq!(HalfInt::ZERO.projections().count(), 1);
    }

    #[test]
    fn cg_sign_relations_for_half_to_half() {
        let a = clebsch_gordan(h("1/2"), h("1/2"), h("1"), h("0"), h("1/2"), h("1/2"));
        let b = clebsch_gordan(h("1/2"), h("-1/2"), h("1"), h("0"), h("1/2"), h("-1/2"));
        assert_abs_diff_eq!(a, -b, epsilon = 1e-15);
        assert_abs_diff_eq!(a.abs(), 1.0 / 3f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn cg_sign_relations_for_half_to_three_halves() {
        let a = clebsch_gordan(h("1/2"), h("1/2"), h("1"), h("0"), h("3/2"), h("1/2"));
        let b = clebsch_gordan(h("1/2"), h("-1/2"), h("1"), h("0"), h("3/2"), h("-1/2"));
        assert_abs_diff_eq!(a, b, epsilon = 1e-15);
    }

    #[test]
    fn cg_selection_rules() {
        assert_eq!(clebsch_gordan(h("1/2"), h("1/2"), h("1"), h("1"), h("3/2"), h("1/2")), 0.0);
        assert_eq!(clebsch_gordan(h("1/2"), h("1/2"), h("1"), h("0"), h("5/2"), h("1/2")), 0.0);
        assert_eq!(clebsch_gordan(h("1/2"), h("3/2"), h("1"), h("0"), h("3/2"), h("3/2")), 0.0);
    }

    #[test]
    fn cg_stretched_is_one() {
        let f = h("9/2");
        assert_abs_diff_eq!(clebsch_gordan(f, f, h("1"), h("1"), h("11/2"), h("11/2")), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn transition_beyond_excited_manifold_vanishes() {
        let s = LevelScheme::parse("1/2", "1/2").unwrap();
        assert_eq!(cg_transition(&s, h("1/2"), Polarization::Plus), 0.0);
        let s = LevelScheme::parse("1/2", "3/2").unwrap();
        assert_abs_diff_eq!(
            cg_transition(&s, h("-1/2"), Polarization::Zero),
            cg_transition(&s, h("1/2"), Polarization::Zero),
            epsilon = 1e-15
        );
    }

    #[test]
    fn scheme_validation() {
        assert!(LevelScheme::parse("1/2", "5/2").is_err());
        assert!(LevelScheme::parse("1/2", "1").is_err());
        assert!(LevelScheme::parse("0", "0").is_err());
        assert!(LevelScheme::parse("3/2", "1/2").is_ok());
    }

    #[test]
    fn spherical_basis() {
        let e0 = spherical_vector(Polarization::Zero);
        assert_eq!(e0.0[2], Complex::new(1.0, 0.0));
        let ep = spherical_vector(Polarization::Plus);
        let em = spherical_vector(Polarization::Minus);
        assert_abs_diff_eq!(ep.dot_conj(&em).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ep.dot_conj(&ep).re, 1.0, epsilon = 1e-15);
        // completeness: Σ_q e_q e_q† = 1
        for a in 0..3 {
            for b in 0..3 {
                let s: C64 = Polarization::ALL
                    .iter()
                    .map(|&q| {
                        let e = spherical_vector(q);
                        e.0[a] * e.0[b].conj()
                    })
                    .sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert_abs_diff_eq!((s - Complex::new(expect, 0.0)).norm(), 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn overlaps() {
        let ez = spherical_vector(Polarization::Zero);
        let ep = spherical_vector(Polarization::Plus);
        assert_abs_diff_eq!(polarization_overlap(Polarization::Zero, &ez).unwrap().re, 1.0);
        assert_abs_diff_eq!(polarization_overlap(Polarization::Plus, &ez).unwrap().norm(), 0.0);
        assert_abs_diff_eq!(polarization_overlap(Polarization::Plus, &ep).unwrap().re, 1.0, epsilon = 1e-15);
        let long = PolarizationVector::new(Complex::new(2.0, 0.0), Complex::new(0.0, 0.0), Complex::new(0.0, 0.0));
        assert!(matches!(polarization_overlap(Polarization::Zero, &long), Err(Error::NonUnitPolarization(_))));
    }

    #[test]
    fn spin_half_matrices() {
        let [fx, fy, fz] = spin_matrices(HalfInt::HALF);
        for m in [&fx, &fy, &fz] {
            let eig = m.clone().symmetric_eigenvalues();
            let mut e: Vec<f64> = eig.iter().copied().collect();
            e.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert_abs_diff_eq!(e[0], -0.5, epsilon = 1e-14);
            assert_abs_diff_eq!(e[1], 0.5, epsilon = 1e-14);
        }
    }

    #[test]
    fn casimir_and_commutators() {
        for tw in 1..=9 {
            let f = HalfInt::from_twice(tw);
            let [fx, fy, fz] = spin_matrices(f);
            let cas = &fx * &fx + &fy * &fy + &fz * &fz;
            let ff = f.to_f64();
            let expect = DMatrix::<C64>::identity(f.multiplicity(), f.multiplicity()) * Complex::new(ff * (ff + 1.0), 0.0);
            assert!((cas - expect).norm() < 1e-12);
            let i = Complex::new(0.0, 1.0);
            assert!((&fx * &fy - &fy * &fx - &fz * i).norm() < 1e-13);
            assert!((&fy * &fz - &fz * &fy - &fx * i).norm() < 1e-13);
            assert!((&fz * &fx - &fx * &fz - &fy * i).norm() < 1e-13);
        }
        let [fx, fy, fz] = spin_matrices(h("9/2"));
        let cas = &fx * &fx + &fy * &fy + &fz * &fz;
        assert_abs_diff_eq!(cas[(3, 3)].re, 99.0 / 4.0, epsilon = 1e-12);
    }
}
