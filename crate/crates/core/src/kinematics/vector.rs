use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use super::KinematicsError;

/// Cartesian three-vector. Momenta in GeV, positions in mm, velocities in units of c.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    /// Unit vector from polar angle and azimuth.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Vec3::new(st * cp, st * sp, ct)
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm2().sqrt()
    }

    /// Returns `None` for the zero vector.
    pub fn unit(self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0).then(|| self * (1.0 / n))
    }

    pub fn theta(self) -> f64 {
        self.x.hypot(self.y).atan2(self.z)
    }

    pub fn phi(self) -> f64 {
        self.y.atan2(self.x)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Vec3 {
    fn sub_assign(&mut self, o: Vec3) {
        *self = *self - o;
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Sum for Vec3 {
    fn sum<I: Iterator<Item = Vec3>>(iter: I) -> Vec3 {
        iter.fold(Vec3::ZERO, Add::add)
    }
}

/// A direction with unit norm. The thrust axis lives here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitAxis {
    nx: f64,
    ny: f64,
    nz: f64,
}

impl UnitAxis {
    pub const Z: UnitAxis = UnitAxis { nx: 0.0, ny: 0.0, nz: 1.0 };

    /// Normalizes `(x, y, z)`.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, KinematicsError> {
        Self::from_vec(Vec3::new(x, y, z))
    }

    pub fn from_vec(v: Vec3) -> Result<Self, KinematicsError> {
        let u = v.unit().ok_or(KinematicsError::DegenerateEvent)?;
        Ok(UnitAxis { nx: u.x, ny: u.y, nz: u.z })
    }

    pub fn nx(&self) -> f64 {
        self.nx
    }

    pub fn ny(&self) -> f64 {
        self.ny
    }

    pub fn nz(&self) -> f64 {
        self.nz
    }

    pub fn as_vec(&self) -> Vec3 {
        Vec3::new(self.nx, self.ny, self.nz)
    }

    pub fn dot(&self, v: Vec3) -> f64 {
        self.as_vec().dot(v)
    }

    /// Flips the axis so that z > 0, falling back to x > 0 then y > 0 when
    /// the leading component vanishes.
    pub fn canonical(self) -> Self {
        const EPS: f64 = 1e-12;
        let flip = if self.nz.abs() > EPS {
            self.nz < 0.0
        } else if self.nx.abs() > EPS {
            self.nx < 0.0
        } else {
            self.ny < 0.0
        };
        if flip {
            UnitAxis { nx: -self.nx, ny: -self.ny, nz: -self.nz }
        } else {
            self
        }
    }
}
