use std::f64::consts::PI;

use rand::Rng;

use super::{FourVector, KinematicsError, Vec3};

/// Largest multiplicity accepted by [`n_body_phase_space`].
pub const MAX_BODIES: usize = 8;

/// Break-up momentum of a two-body decay `M -> m1 m2` in the parent rest frame.
pub fn two_body_momentum(parent_mass: f64, m1: f64, m2: f64) -> Result<f64, KinematicsError> {
    if parent_mass < m1 + m2 {
        return Err(KinematicsError::BelowThreshold { parent: parent_mass, daughters: m1 + m2 });
    }
    let m2p = parent_mass * parent_mass;
    let s = (m1 + m2) * (m1 + m2);
    let d = (m1 - m2) * (m1 - m2);
    Ok(((m2p - s) * (m2p - d)).max(0.0).sqrt() / (2.0 * parent_mass))
}

/// Isotropic unit vector.
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    let cos_theta: f64 = rng.random_range(-1.0..1.0);
    let phi: f64 = rng.random_range(0.0..2.0 * PI);
    let sin_theta = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
    Vec3::new(sin_theta * phi.cos(), sin_theta * phi.sin(), cos_theta)
}

/// Back-to-back daughters of an isotropic two-body decay, in the parent rest frame.
pub fn two_body_decay<R: Rng + ?Sized>(
    parent_mass: f64,
    m1: f64,
    m2: f64,
    rng: &mut R,
) -> Result<(FourVector, FourVector), KinematicsError> {
    let p = two_body_momentum(parent_mass, m1, m2)?;
    let dir = random_direction(rng) * p;
    Ok((FourVector::from_p_m(dir, m1), FourVector::from_p_m(-dir, m2)))
}

/// Unweighted flat phase-space decay of `parent` into daughters of the given masses.
///
/// Sequential two-body splittings with intermediate masses drawn uniformly and
/// accepted against the product of break-up momenta (Raubold–Lynch). Momenta
/// are returned in the frame of `parent`, in the order of `masses`.
pub fn n_body_phase_space<R: Rng + ?Sized>(
    parent: &FourVector,
    masses: &[f64],
    rng: &mut R,
) -> Result<Vec<FourVector>, KinematicsError> {
    let n = masses.len();
    if !(2..=MAX_BODIES).contains(&n) {
        return Err(KinematicsError::Multiplicity(n));
    }
    let m_parent = parent.mass();
    let sum_m: f64 = masses.iter().sum();
    if m_parent < sum_m {
        return Err(KinematicsError::BelowThreshold { parent: m_parent, daughters: sum_m });
    }
    let kinetic = m_parent - sum_m;

    // cumulative[i] = m_0 + ... + m_i
    let cumulative: Vec<f64> = masses
        .iter()
        .scan(0.0, |acc, &m| {
            *acc += m;
            Some(*acc)
        })
        .collect();

    let mut w_max = 1.0;
    for i in 1..n {
        w_max *= two_body_momentum(cumulative[i] + kinetic, cumulative[i - 1], masses[i])?;
    }

    // invariant masses of the sub-systems {0..=i}
    let mut sub = vec![0.0; n];
    let mut r = vec![0.0; n];
    let mut pstar = vec![0.0; n];
    loop {
        r[0] = 0.0;
        r[n - 1] = 1.0;
        for x in r.iter_mut().take(n - 1).skip(1) {
            *x = rng.random::<f64>();
        }
        r[1..n - 1].sort_by(f64::total_cmp);
        for i in 0..n {
            sub[i] = cumulative[i] + r[i] * kinetic;
        }
        let mut w = 1.0;
        for i in 1..n {
            pstar[i] = two_body_momentum(sub[i], sub[i - 1], masses[i])?;
            w *= pstar[i];
        }
        if w_max <= 0.0 || rng.random::<f64>() * w_max <= w {
            break;
        }
    }

    // Build outward: in the rest frame of sub-system i, the system {0..i-1}
    // recoils against daughter i.
    let mut out: Vec<FourVector> = Vec::with_capacity(n);
    let dir = random_direction(rng) * pstar[1];
    out.push(FourVector::from_p_m(dir, masses[0]));
    out.push(FourVector::from_p_m(-dir, masses[1]));
    for i in 2..n {
        let dir = random_direction(rng) * pstar[i];
        let system = FourVector::from_p_m(-dir, sub[i - 1]);
        let beta = system.beta();
        for v in out.iter_mut() {
            *v = v.boost(beta)?;
        }
        out.push(FourVector::from_p_m(dir, masses[i]));
    }

    let beta = parent.beta();
    for v in out.iter_mut() {
        *v = v.boost(beta)?;
    }
    Ok(out)
}
