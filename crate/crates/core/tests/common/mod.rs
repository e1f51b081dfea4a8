#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sample mean and standard deviation (n - 1 denominator).
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// True when `k` successes out of `n` are within `n_sigma` binomial
/// standard deviations of probability `p`.
pub fn within_binomial(k: u64, n: u64, p: f64, n_sigma: f64) -> bool {
    let n = n as f64;
    let sigma = (n * p * (1.0 - p)).sqrt();
    (k as f64 - n * p).abs() <= n_sigma * sigma
}

/// Asymptotic Kolmogorov distribution tail `P(K > lambda)`.
pub fn kolmogorov_tail(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let k = k as f64;
        let term = 2.0 * (-1f64).powf(k - 1.0) * (-2.0 * k * k * lambda * lambda).exp();
        sum += term;
        if term.abs() < 1e-16 {
            break;
        }
    }
    sum.clamp(0.0, 1.0)
}

/// One-sample KS test of `samples` against `cdf`; returns `(D, p)`.
pub fn ks_test(samples: &[f64], cdf: impl Fn(f64) -> f64) -> (f64, f64) {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    let sqrt_n = n.sqrt();
    (d, kolmogorov_tail((sqrt_n + 0.12 + 0.11 / sqrt_n) * d))
}

use ecalsim::constants::PI0_MASS;
use ecalsim::detector::{smear_photon, DetectorScenario, PhotonOrigin, ReconstructedPhoton};
use ecalsim::kinematics::{random_direction, two_body_decay, FourVector};
use rand::Rng;

/// Truth photons of a π⁰ of energy `e` flying in a random direction.
pub fn pi0_photons<R: Rng + ?Sized>(e: f64, rng: &mut R) -> (FourVector, FourVector) {
    let (a, b) = two_body_decay(PI0_MASS, 0.0, 0.0, rng).unwrap();
    let p = (e * e - PI0_MASS * PI0_MASS).sqrt();
    let beta = random_direction(rng) * (p / e);
    (a.boost(beta).unwrap(), b.boost(beta).unwrap())
}

/// Smeared photon pair of a π⁰ of energy `e`.
pub fn smeared_pi0<R: Rng + ?Sized>(
    e: f64,
    s: &DetectorScenario,
    rng: &mut R,
) -> (ReconstructedPhoton, ReconstructedPhoton) {
    let (a, b) = pi0_photons(e, rng);
    (smear_photon(&a, PhotonOrigin::Genuine(1), s, rng), smear_photon(&b, PhotonOrigin::Genuine(2), s, rng))
}
