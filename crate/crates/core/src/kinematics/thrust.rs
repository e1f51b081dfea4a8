use super::{FourVector, KinematicsError, UnitAxis, Vec3};

/// Above this multiplicity the exhaustive sign scan gives way to seeded iteration.
pub const EXHAUSTIVE_LIMIT: usize = 12;

const MAX_ITERATIONS: usize = 100;

/// Thrust value and axis of a set of momenta.
///
/// `T = max_n Σ|p·n| / Σ|p|`. Up to [`EXHAUSTIVE_LIMIT`] particles the maximum is
/// found exactly by scanning every sign assignment; above it, a seeded
/// fixed-point iteration is used. The axis is returned with positive z
/// (ties fall back to positive x, then y).
pub fn thrust(momenta: &[FourVector]) -> Result<(f64, UnitAxis), KinematicsError> {
    let ps = three_momenta(momenta)?;
    if ps.len() <= EXHAUSTIVE_LIMIT {
        Ok(exhaustive(&ps))
    } else {
        Ok(iterative(&ps))
    }
}

/// Exact thrust by enumerating all sign combinations. Cost grows as `2^N`.
pub fn thrust_exhaustive(momenta: &[FourVector]) -> Result<(f64, UnitAxis), KinematicsError> {
    let ps = three_momenta(momenta)?;
    if ps.len() > 24 {
        return Err(KinematicsError::Multiplicity(ps.len()));
    }
    Ok(exhaustive(&ps))
}

/// Thrust by seeded fixed-point iteration `n <- Σ sign(p·n) p`.
pub fn thrust_iterative(momenta: &[FourVector]) -> Result<(f64, UnitAxis), KinematicsError> {
    let ps = three_momenta(momenta)?;
    Ok(iterative(&ps))
}

fn three_momenta(momenta: &[FourVector]) -> Result<Vec<Vec3>, KinematicsError> {
    let ps: Vec<Vec3> = momenta.iter().map(FourVector::p3).filter(|p| p.norm2() > 0.0).collect();
    if ps.is_empty() {
        return Err(KinematicsError::DegenerateEvent);
    }
    Ok(ps)
}

fn finish(best: Vec3, sum_abs: f64) -> (f64, UnitAxis) {
    let axis = UnitAxis::from_vec(best).map(UnitAxis::canonical).unwrap_or(UnitAxis::Z);
    (best.norm() / sum_abs, axis)
}

fn exhaustive(ps: &[Vec3]) -> (f64, UnitAxis) {
    let n = ps.len();
    let sum_abs: f64 = ps.iter().map(|p| p.norm()).sum();
    let last = ps[n - 1];
    let mut best = Vec3::ZERO;
    let mut best_norm2 = -1.0;
    // the last particle's sign is fixed; the opposite assignment gives -axis
    for mask in 0u32..(1u32 << (n - 1)) {
        let mut s = last;
        for (i, p) in ps[..n - 1].iter().enumerate() {
            if mask & (1 << i) != 0 {
                s += *p;
            } else {
                s -= *p;
            }
        }
        let n2 = s.norm2();
        if n2 > best_norm2 {
            best_norm2 = n2;
            best = s;
        }
    }
    finish(best, sum_abs)
}

fn project_sum(ps: &[Vec3], axis: Vec3) -> Vec3 {
    ps.iter().map(|&p| if p.dot(axis) >= 0.0 { p } else { -p }).sum()
}

fn iterative(ps: &[Vec3]) -> (f64, UnitAxis) {
    let sum_abs: f64 = ps.iter().map(|p| p.norm()).sum();
    let mut seeds: Vec<Vec3> = Vec::with_capacity(ps.len() * ps.len());
    for (i, &a) in ps.iter().enumerate() {
        seeds.push(a);
        for &b in &ps[i + 1..] {
            seeds.push(a + b);
            seeds.push(a - b);
        }
    }
    let mut best = Vec3::ZERO;
    let mut best_norm2 = -1.0;
    for seed in seeds {
        if seed.norm2() == 0.0 {
            continue;
        }
        let mut current = project_sum(ps, seed);
        for _ in 0..MAX_ITERATIONS {
            let next = project_sum(ps, current);
            if next == current {
                break;
            }
            current = next;
        }
        let n2 = current.norm2();
        if n2 > best_norm2 {
            best_norm2 = n2;
            best = current;
        }
    }
    finish(best, sum_abs)
}
