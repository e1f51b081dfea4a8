use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub};

use super::{KinematicsError, Vec3, MASS2_TOLERANCE};

/// Relativistic four-momentum `(E, px, py, pz)` in GeV.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FourVector {
    pub e: f64,
    pub px: f64,
    pub py: f64,
    pub pz: f64,
}

impl FourVector {
    pub const ZERO: FourVector = FourVector { e: 0.0, px: 0.0, py: 0.0, pz: 0.0 };

    pub const fn new(e: f64, px: f64, py: f64, pz: f64) -> Self {
        FourVector { e, px, py, pz }
    }

    /// On-shell vector with three-momentum `p` and mass `m`.
    pub fn from_p_m(p: Vec3, m: f64) -> Self {
        FourVector::new((p.norm2() + m * m).sqrt(), p.x, p.y, p.z)
    }

    /// Massless vector of energy `e` pointing along `(theta, phi)`.
    pub fn massless(e: f64, theta: f64, phi: f64) -> Self {
        let d = Vec3::from_angles(theta, phi) * e;
        FourVector::new(e, d.x, d.y, d.z)
    }

    /// Particle of mass `m` at rest.
    pub fn at_rest(m: f64) -> Self {
        FourVector::new(m, 0.0, 0.0, 0.0)
    }

    pub fn p3(&self) -> Vec3 {
        Vec3::new(self.px, self.py, self.pz)
    }

    pub fn p(&self) -> f64 {
        self.p3().norm()
    }

    pub fn pt(&self) -> f64 {
        self.px.hypot(self.py)
    }

    pub fn m2(&self) -> f64 {
        self.e * self.e - self.p3().norm2()
    }

    /// Mass with tiny negative `m²` clamped to zero.
    pub fn mass(&self) -> f64 {
        self.m2().max(0.0).sqrt()
    }

    pub fn theta(&self) -> f64 {
        self.p3().theta()
    }

    pub fn phi(&self) -> f64 {
        self.p3().phi()
    }

    /// Velocity of the frame in which this momentum is at rest.
    pub fn beta(&self) -> Vec3 {
        self.p3() * (1.0 / self.e)
    }

    pub fn dot(&self, o: &FourVector) -> f64 {
        self.e * o.e - self.p3().dot(o.p3())
    }

    /// Lorentz boost by velocity `beta`.
    pub fn boost(&self, beta: Vec3) -> Result<FourVector, KinematicsError> {
        let b2 = beta.norm2();
        if b2 >= 1.0 {
            return Err(KinematicsError::Superluminal(b2.sqrt()));
        }
        if b2 == 0.0 {
            return Ok(*self);
        }
        let gamma = 1.0 / (1.0 - b2).sqrt();
        let bp = beta.dot(self.p3());
        let g2 = (gamma - 1.0) / b2;
        let p = self.p3() + beta * (g2 * bp + gamma * self.e);
        Ok(FourVector::new(gamma * (self.e + bp), p.x, p.y, p.z))
    }

    /// Largest absolute componentwise difference.
    pub fn max_abs_diff(&self, o: &FourVector) -> f64 {
        (self.e - o.e)
            .abs()
            .max((self.px - o.px).abs())
            .max((self.py - o.py).abs())
            .max((self.pz - o.pz).abs())
    }
}

impl Add for FourVector {
    type Output = FourVector;
    fn add(self, o: FourVector) -> FourVector {
        FourVector::new(self.e + o.e, self.px + o.px, self.py + o.py, self.pz + o.pz)
    }
}

impl AddAssign for FourVector {
    fn add_assign(&mut self, o: FourVector) {
        *self = *self + o;
    }
}

impl Sub for FourVector {
    type Output = FourVector;
    fn sub(self, o: FourVector) -> FourVector {
        FourVector::new(self.e - o.e, self.px - o.px, self.py - o.py, self.pz - o.pz)
    }
}

impl Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector::new(-self.e, -self.px, -self.py, -self.pz)
    }
}

impl Sum for FourVector {
    fn sum<I: Iterator<Item = FourVector>>(iter: I) -> FourVector {
        iter.fold(FourVector::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a FourVector> for FourVector {
    fn sum<I: Iterator<Item = &'a FourVector>>(iter: I) -> FourVector {
        iter.copied().sum()
    }
}

/// Invariant mass of the summed four-momenta.
///
/// `m²` slightly below zero (down to `-1e-6 GeV²`) is treated as rounding and
/// clamped; anything more negative is rejected.
pub fn invariant_mass(vs: &[FourVector]) -> Result<f64, KinematicsError> {
    if vs.is_empty() {
        return Err(KinematicsError::EmptyInput);
    }
    let m2 = vs.iter().sum::<FourVector>().m2();
    if m2 < -MASS2_TOLERANCE {
        return Err(KinematicsError::Unphysical(m2));
    }
    Ok(m2.max(0.0).sqrt())
}

/// Boosts `v` by velocity `beta`; fails for `|beta| >= 1`.
pub fn boost(v: &FourVector, beta: Vec3) -> Result<FourVector, KinematicsError> {
    v.boost(beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn back_to_back_pi0() {
        let a = FourVector::new(0.0675, 0.0, 0.0, 0.0675);
        let b = FourVector::new(0.0675, 0.0, 0.0, -0.0675);
        let m = invariant_mass(&[a, b]).unwrap();
        assert!((m - 0.135).abs() < 1e-12);
    }

    #[test]
    fn massless_photon() {
        let g = FourVector::new(3.0, 0.0, 0.0, 3.0);
        assert_eq!(invariant_mass(&[g]).unwrap(), 0.0);
    }

    #[test]
    fn invariant_mass_errors() {
        assert!(matches!(invariant_mass(&[]), Err(KinematicsError::EmptyInput)));
        let tachyon = FourVector::new(1.0, 0.0, 0.0, 1.1);
        assert!(matches!(
            invariant_mass(&[tachyon]),
            Err(KinematicsError::Unphysical(_))
        ));
        // rounding-level negative m² is clamped
        let almost = FourVector::new(1.0, 0.0, 0.0, 1.0 + 1e-7);
        assert_eq!(invariant_mass(&[almost]).unwrap(), 0.0);
    }

    #[test]
    fn boost_rest_particle() {
        let m = 5.27965;
        let beta = 0.6;
        let v = FourVector::at_rest(m).boost(Vec3::new(0.0, 0.0, beta)).unwrap();
        let gamma = 1.0 / (1.0f64 - beta * beta).sqrt();
        assert!((v.e - gamma * m).abs() < 1e-12);
        assert!((v.pz - gamma * beta * m).abs() < 1e-12);
        assert_eq!(v.px, 0.0);
    }

    #[test]
    fn boost_inverse() {
        let v = FourVector::from_p_m(Vec3::new(1.2, -0.4, 3.3), 0.775);
        let b = Vec3::new(0.3, 0.5, -0.6);
        let back = v.boost(b).unwrap().boost(-b).unwrap();
        assert!(back.max_abs_diff(&v) < 1e-9);
    }

    #[test]
    fn superluminal_boost() {
        let v = FourVector::at_rest(1.0);
        assert!(matches!(
            v.boost(Vec3::new(0.6, 0.8, 0.0)),
            Err(KinematicsError::Superluminal(_))
        ));
    }
}
