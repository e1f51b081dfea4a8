//! 1C mass-constrained fit of a photon pair, by iterated Lagrange multipliers.
//!
//! Each photon is described by `(E, θ, φ)` with a diagonal covariance. The
//! constraint is `H(α) = m²(α) − m_target² = 0` with
//! `m² = 2 E₁ E₂ (1 − cos ψ₁₂)`.

use statrs::function::erf::erfc;

use crate::detector::ReconstructedPhoton;
use crate::kinematics::FourVector;

pub const MAX_ITERATIONS: usize = 20;
/// Convergence threshold on |H|, GeV².
pub const CONSTRAINT_TOLERANCE: f64 = 1e-6;
pub const CHI2_TOLERANCE: f64 = 1e-6;
const MAX_HALVINGS: usize = 30;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FitError {
    #[error("invalid fit input: {0}")]
    Input(String),
    #[error("degenerate covariance: D V Dᵀ = {0}")]
    DegenerateCovariance(f64),
    #[error("χ² must be non-negative, got {0}")]
    NegativeChi2(f64),
}

/// Measured parameters `(E₁, θ₁, φ₁, E₂, θ₂, φ₂)` with their variances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonParameters {
    pub alpha: [f64; 6],
    pub variance: [f64; 6],
}

impl PhotonParameters {
    pub fn new(alpha: [f64; 6], variance: [f64; 6]) -> Self {
        PhotonParameters { alpha, variance }
    }

    pub fn from_photons(a: &ReconstructedPhoton, b: &ReconstructedPhoton) -> Self {
        PhotonParameters {
            alpha: [a.e, a.theta, a.phi, b.e, b.theta, b.phi],
            variance: [a.cov_diag[0], a.cov_diag[1], a.cov_diag[2], b.cov_diag[0], b.cov_diag[1], b.cov_diag[2]],
        }
    }

    pub fn swapped(&self) -> Self {
        let s = |v: [f64; 6]| [v[3], v[4], v[5], v[0], v[1], v[2]];
        PhotonParameters { alpha: s(self.alpha), variance: s(self.variance) }
    }

    pub fn mass(&self) -> f64 {
        mass2(&self.alpha).max(0.0).sqrt()
    }

    fn validate(&self) -> Result<(), FitError> {
        if !self.alpha.iter().all(|x| x.is_finite()) {
            return Err(FitError::Input("non-finite parameter".into()));
        }
        if self.alpha[0] <= 0.0 || self.alpha[3] <= 0.0 {
            return Err(FitError::Input("photon energies must be positive".into()));
        }
        if !self.variance.iter().all(|&v| v > 0.0 && v.is_finite()) {
            return Err(FitError::Input("variances must be positive".into()));
        }
        if mass2(&self.alpha) <= 0.0 {
            return Err(FitError::Input("measured invariant mass must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub alpha_fit: [f64; 6],
    pub chi2: f64,
    pub n_iter: usize,
    pub converged: bool,
    pub pulls: [f64; 6],
    pub fitted_pi0: FourVector,
}

impl FitResult {
    pub fn photon_energies(&self) -> (f64, f64) {
        (self.alpha_fit[0], self.alpha_fit[3])
    }
}

fn cos_opening(a: &[f64; 6]) -> f64 {
    let (s1, c1) = a[1].sin_cos();
    let (s2, c2) = a[4].sin_cos();
    s1 * s2 * (a[2] - a[5]).cos() + c1 * c2
}

fn mass2(a: &[f64; 6]) -> f64 {
    2.0 * a[0] * a[3] * (1.0 - cos_opening(a))
}

fn gradient(a: &[f64; 6]) -> [f64; 6] {
    let (s1, c1) = a[1].sin_cos();
    let (s2, c2) = a[4].sin_cos();
    let (sd, cd) = (a[2] - a[5]).sin_cos();
    let cos_psi = s1 * s2 * cd + c1 * c2;
    let ee = 2.0 * a[0] * a[3];
    [
        2.0 * a[3] * (1.0 - cos_psi),
        -ee * (c1 * s2 * cd - s1 * c2),
        ee * s1 * s2 * sd,
        2.0 * a[0] * (1.0 - cos_psi),
        -ee * (s1 * c2 * cd - c1 * s2),
        -ee * s1 * s2 * sd,
    ]
}

fn dvd(d: &[f64; 6], v: &[f64; 6]) -> f64 {
    d.iter().zip(v).map(|(d, v)| d * d * v).sum()
}

fn fitted_four_vector(a: &[f64; 6]) -> FourVector {
    FourVector::massless(a[0], a[1], a[2]) + FourVector::massless(a[3], a[4], a[5])
}

/// Fits the photon pair to invariant mass `m_target`.
pub fn fit_pi0_mass(p: &PhotonParameters, m_target: f64) -> Result<FitResult, FitError> {
    p.validate()?;
    if !(m_target > 0.0) {
        return Err(FitError::Input(format!("target mass must be positive, got {m_target}")));
    }
    let a0 = p.alpha;
    let v = p.variance;
    let target2 = m_target * m_target;

    let mut a = a0;
    let mut chi2_prev = 0.0;
    let mut chi2 = 0.0;
    let mut converged = false;
    let mut n_iter = 0;
    let mut failed = false;
    let mut d_last = gradient(&a);
    let mut s_last = dvd(&d_last, &v);

    while n_iter < MAX_ITERATIONS {
        n_iter += 1;
        let h = mass2(&a) - target2;
        let d = gradient(&a);
        let s = dvd(&d, &v);
        if !(s > 0.0) || !s.is_finite() {
            return Err(FitError::DegenerateCovariance(s));
        }
        let lin: f64 = (0..6).map(|i| d[i] * (a0[i] - a[i])).sum();
        let lambda = (h + lin) / s;
        let mut next = [0.0; 6];
        for i in 0..6 {
            next[i] = a0[i] - v[i] * d[i] * lambda;
        }
        let mut halvings = 0;
        while (next[0] <= 0.0 || next[3] <= 0.0) && halvings < MAX_HALVINGS {
            for i in 0..6 {
                next[i] = a[i] + 0.5 * (next[i] - a[i]);
            }
            halvings += 1;
        }
        if next[0] <= 0.0 || next[3] <= 0.0 {
            failed = true;
            break;
        }
        a = next;
        d_last = d;
        s_last = s;
        chi2 = (0..6).map(|i| (a0[i] - a[i]).powi(2) / v[i]).sum();
        let h_new = mass2(&a) - target2;
        if h_new.abs() < CONSTRAINT_TOLERANCE && (chi2 - chi2_prev).abs() < CHI2_TOLERANCE {
            converged = true;
            break;
        }
        chi2_prev = chi2;
    }

    // V_fit = V − V Dᵀ (D V Dᵀ)⁻¹ D V, with D from the final linearisation
    let (d, s) = (d_last, s_last);
    let mut pulls = [0.0; 6];
    if s > 0.0 {
        for i in 0..6 {
            let reduced = v[i] * v[i] * d[i] * d[i] / s;
            if reduced > 0.0 {
                pulls[i] = (a0[i] - a[i]) / reduced.sqrt();
            }
        }
    }
    Ok(FitResult {
        alpha_fit: a,
        chi2,
        n_iter,
        converged: converged && !failed,
        pulls,
        fitted_pi0: fitted_four_vector(&a),
    })
}

/// Upper-tail probability of χ² with one degree of freedom.
pub fn chi2_probability(chi2: f64) -> Result<f64, FitError> {
    if !(chi2 >= 0.0) {
        return Err(FitError::NegativeChi2(chi2));
    }
    Ok(erfc((chi2 / 2.0).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::PI0_MASS;
    use crate::kinematics::two_body_decay;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn symmetric_pair(e: f64) -> [f64; 6] {
        // two photons of energy e/2 at half-opening ψ/2 about the z axis
        let half = e / 2.0;
        let cos_psi = 1.0 - PI0_MASS * PI0_MASS / (2.0 * half * half);
        let psi = cos_psi.acos();
        [half, 1.2 - psi / 2.0, 0.3, half, 1.2 + psi / 2.0, 0.3]
    }

    #[test]
    fn exact_input_is_left_alone() {
        let alpha = symmetric_pair(5.0);
        let p = PhotonParameters::new(alpha, [0.01, 1e-6, 1e-6, 0.01, 1e-6, 1e-6]);
        assert!((p.mass() - PI0_MASS).abs() < 1e-12);
        let r = fit_pi0_mass(&p, PI0_MASS).unwrap();
        assert!(r.converged);
        assert_eq!(r.n_iter, 1);
        assert!(r.chi2 < 1e-20);
        for i in 0..6 {
            assert!((r.alpha_fit[i] - alpha[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn fitted_mass_hits_target() {
        let mut alpha = symmetric_pair(4.0);
        alpha[0] *= 1.1;
        alpha[4] += 0.004;
        let p = PhotonParameters::new(alpha, [0.02, 4e-6, 4e-6, 0.02, 4e-6, 4e-6]);
        let r = fit_pi0_mass(&p, PI0_MASS).unwrap();
        assert!(r.converged);
        assert!((r.fitted_pi0.mass() - PI0_MASS).abs() < 1e-4);
        for pull in r.pulls {
            assert!((pull.abs() - r.chi2.sqrt()).abs() < 1e-6 || pull == 0.0);
        }
    }

    #[test]
    fn upward_energy_fluctuation_is_pulled_down() {
        let e = 6.0;
        let mut alpha = symmetric_pair(e);
        let var_e = 0.16f64.powi(2) * e / 2.0;
        alpha[0] += 3.0 * var_e.sqrt();
        let v = [var_e, 1e-7, 1e-7, var_e, 1e-7, 1e-7];
        let p = PhotonParameters::new(alpha, v);
        let r = fit_pi0_mass(&p, PI0_MASS).unwrap();
        assert!(r.converged);
        assert!(r.alpha_fit[0] < alpha[0]);

        // brute-force minimum of χ² over the constraint surface: scan five
        // parameters on a grid and solve the constraint for E₁
        let chi2_at = |a: &[f64; 6]| (0..6).map(|i| (a[i] - alpha[i]).powi(2) / v[i]).sum::<f64>();
        let mut best = (f64::INFINITY, [0.0; 6]);
        let steps = 24;
        for ie2 in -steps..=steps {
            for it1 in -6..=6 {
                for it2 in -6..=6 {
                    let mut a = alpha;
                    a[3] = alpha[3] + ie2 as f64 * 3.0 * var_e.sqrt() / steps as f64;
                    a[1] = alpha[1] + it1 as f64 * 5e-4;
                    a[4] = alpha[4] + it2 as f64 * 5e-4;
                    let c = cos_opening(&a);
                    a[0] = PI0_MASS * PI0_MASS / (2.0 * a[3] * (1.0 - c));
                    let x = chi2_at(&a);
                    if x < best.0 {
                        best = (x, a);
                    }
                }
            }
        }
        assert!(r.chi2 <= best.0 * (1.0 + 1e-6));
        assert!(best.1[0] < alpha[0]);
        assert!((r.alpha_fit[0] - best.1[0]).abs() < 0.05 * 3.0 * var_e.sqrt());
    }

    #[test]
    fn swap_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (g1, g2) = two_body_decay(PI0_MASS, 0.0, 0.0, &mut rng).unwrap();
        let beta = crate::kinematics::Vec3::new(0.3, -0.2, 0.9);
        let (g1, g2) = (g1.boost(beta).unwrap(), g2.boost(beta).unwrap());
        let mut alpha = [g1.e * 1.05, g1.theta() + 0.002, g1.phi(), g2.e * 0.97, g2.theta(), g2.phi() - 0.003];
        alpha[2] += 0.001;
        let v = [0.01, 1e-6, 2e-6, 0.015, 1.5e-6, 3e-6];
        let p = PhotonParameters::new(alpha, v);
        let a = fit_pi0_mass(&p, PI0_MASS).unwrap();
        let b = fit_pi0_mass(&p.swapped(), PI0_MASS).unwrap();
        assert!((a.chi2 - b.chi2).abs() < 1e-9 * (1.0 + a.chi2));
        for i in 0..3 {
            assert!((a.alpha_fit[i] - b.alpha_fit[i + 3]).abs() < 1e-9);
            assert!((a.alpha_fit[i + 3] - b.alpha_fit[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn degenerate_covariance() {
        // D V Dᵀ overflows: no usable metric on the constraint
        let mut p = PhotonParameters::new(symmetric_pair(2000.0), [1e308; 6]);
        p.alpha[0] *= 1.5;
        assert!(matches!(fit_pi0_mass(&p, PI0_MASS), Err(FitError::DegenerateCovariance(_))));
        p.variance[0] = 0.0;
        assert!(matches!(fit_pi0_mass(&p, PI0_MASS), Err(FitError::Input(_))));
    }

    #[test]
    fn eta_target() {
        let mut alpha = symmetric_pair(10.0);
        alpha[1] -= 0.04;
        alpha[4] += 0.04;
        let p = PhotonParameters::new(alpha, [0.05, 1e-4, 1e-4, 0.05, 1e-4, 1e-4]);
        let r = fit_pi0_mass(&p, crate::constants::ETA_MASS).unwrap();
        assert!(r.converged);
        assert!((r.fitted_pi0.mass() - crate::constants::ETA_MASS).abs() < 1e-4);
    }

    #[test]
    fn chi2_tail() {
        assert_eq!(chi2_probability(0.0).unwrap(), 1.0);
        assert!((chi2_probability(3.841).unwrap() - 0.050).abs() < 1e-3);
        assert!((chi2_probability(1.0).unwrap() - 0.3173).abs() < 1e-3);
        assert!(chi2_probability(-0.1).is_err());
    }
}
