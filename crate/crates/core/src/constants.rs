//! Physics constants: particle masses, widths, charges and proper decay lengths.
//!
//! Masses and widths in GeV, `ctau` in mm. Antiparticles share the entry of
//! their particle; use [`conjugate`] to map codes.

/// Z pole centre-of-mass energy.
pub const SQRT_S: f64 = 91.19;

pub const PI0_MASS: f64 = 0.1349768;
pub const ETA_MASS: f64 = 0.547862;

pub const GAMMA: i32 = 22;
pub const Z0: i32 = 23;
pub const PI0: i32 = 111;
pub const PI_PLUS: i32 = 211;
pub const K_PLUS: i32 = 321;
pub const K_LONG: i32 = 130;
pub const K_SHORT: i32 = 310;
pub const ETA: i32 = 221;
pub const RHO0: i32 = 113;
pub const RHO_PLUS: i32 = 213;
pub const OMEGA: i32 = 223;
pub const PHI: i32 = 333;
pub const K_STAR0: i32 = 313;
pub const K_STAR_PLUS: i32 = 323;
pub const D0: i32 = 421;
pub const D_PLUS: i32 = 411;
pub const DS_PLUS: i32 = 431;
pub const D_STAR_PLUS: i32 = 413;
pub const D_STAR0: i32 = 423;
pub const LAMBDA_C: i32 = 4122;
pub const B0: i32 = 511;
pub const B_PLUS: i32 = 521;
pub const BS: i32 = 531;
pub const LAMBDA_B: i32 = 5122;
pub const PROTON: i32 = 2212;
pub const NEUTRON: i32 = 2112;
pub const LAMBDA: i32 = 3122;
pub const ELECTRON: i32 = 11;
pub const NU_E: i32 = 12;
pub const MUON: i32 = 13;
pub const NU_MU: i32 = 14;
pub const JPSI: i32 = 443;
pub const QUARK_D: i32 = 1;
pub const QUARK_U: i32 = 2;
pub const QUARK_S: i32 = 3;
pub const QUARK_C: i32 = 4;
pub const QUARK_B: i32 = 5;

/// Static properties of one particle species.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleData {
    pub pdg: i32,
    pub name: &'static str,
    pub mass: f64,
    /// Breit–Wigner width used for line-shape sampling; zero means fixed mass.
    pub width: f64,
    /// Electric charge in units of e for the particle (positive code).
    pub charge: i32,
    /// Proper decay length for weakly decaying hadrons; zero for prompt decays.
    pub ctau: f64,
    /// Decays during generation. Stable species reach the detector.
    pub unstable: bool,
    pub baryon: bool,
}

const fn p(
    pdg: i32,
    name: &'static str,
    mass: f64,
    width: f64,
    charge: i32,
    ctau: f64,
    unstable: bool,
    baryon: bool,
) -> ParticleData {
    ParticleData { pdg, name, mass, width, charge, ctau, unstable, baryon }
}

static TABLE: &[ParticleData] = &[
    p(QUARK_D, "d", 0.0047, 0.0, 0, 0.0, false, false),
    p(QUARK_U, "u", 0.0022, 0.0, 1, 0.0, false, false),
    p(QUARK_S, "s", 0.095, 0.0, 0, 0.0, false, false),
    p(QUARK_C, "c", 1.27, 0.0, 1, 0.0, false, false),
    p(QUARK_B, "b", 4.18, 0.0, 0, 0.0, false, false),
    p(ELECTRON, "e-", 0.000510999, 0.0, -1, 0.0, false, false),
    p(NU_E, "nu_e", 0.0, 0.0, 0, 0.0, false, false),
    p(MUON, "mu-", 0.1056584, 0.0, -1, 0.0, false, false),
    p(NU_MU, "nu_mu", 0.0, 0.0, 0, 0.0, false, false),
    p(GAMMA, "gamma", 0.0, 0.0, 0, 0.0, false, false),
    p(Z0, "Z0", 91.1876, 0.0, 0, 0.0, false, false),
    p(PI0, "pi0", PI0_MASS, 0.0, 0, 0.0, true, false),
    p(PI_PLUS, "pi+", 0.13957039, 0.0, 1, 0.0, false, false),
    p(K_PLUS, "K+", 0.493677, 0.0, 1, 0.0, false, false),
    p(K_LONG, "K_L0", 0.497611, 0.0, 0, 0.0, false, false),
    p(K_SHORT, "K_S0", 0.497611, 0.0, 0, 0.0, false, false),
    p(311, "K0", 0.497611, 0.0, 0, 0.0, true, false),
    p(ETA, "eta", ETA_MASS, 0.0, 0, 0.0, true, false),
    p(331, "eta'", 0.95778, 0.0, 0, 0.0, true, false),
    p(RHO0, "rho0", 0.77526, 0.1491, 0, 0.0, true, false),
    p(RHO_PLUS, "rho+", 0.77511, 0.1491, 1, 0.0, true, false),
    p(OMEGA, "omega", 0.78266, 0.00868, 0, 0.0, true, false),
    p(PHI, "phi", 1.019461, 0.004249, 0, 0.0, true, false),
    p(K_STAR0, "K*0", 0.89555, 0.0473, 0, 0.0, true, false),
    p(K_STAR_PLUS, "K*+", 0.89167, 0.0514, 1, 0.0, true, false),
    p(JPSI, "J/psi", 3.0969, 0.0, 0, 0.0, true, false),
    p(D0, "D0", 1.86484, 0.0, 0, 0.1229, true, false),
    p(D_PLUS, "D+", 1.86966, 0.0, 1, 0.3118, true, false),
    p(DS_PLUS, "D_s+", 1.96835, 0.0, 1, 0.1510, true, false),
    p(D_STAR_PLUS, "D*+", 2.01026, 0.0, 1, 0.0, true, false),
    p(D_STAR0, "D*0", 2.00685, 0.0, 0, 0.0, true, false),
    p(LAMBDA_C, "Lambda_c+", 2.28646, 0.0, 1, 0.0602, true, true),
    p(B0, "B0", 5.27965, 0.0, 0, 0.4554, true, false),
    p(B_PLUS, "B+", 5.27934, 0.0, 1, 0.4911, true, false),
    p(BS, "B_s0", 5.36688, 0.0, 0, 0.4527, true, false),
    p(LAMBDA_B, "Lambda_b0", 5.6196, 0.0, 0, 0.4411, true, true),
    p(PROTON, "p", 0.938272, 0.0, 1, 0.0, false, true),
    p(NEUTRON, "n", 0.939565, 0.0, 0, 0.0, false, true),
    p(LAMBDA, "Lambda", 1.115683, 0.0, 0, 0.0, false, true),
];

/// Codes that are their own antiparticle.
fn self_conjugate(pdg: i32) -> bool {
    matches!(
        pdg,
        GAMMA | Z0 | PI0 | K_LONG | K_SHORT | ETA | 331 | RHO0 | OMEGA | PHI | JPSI
    )
}

/// Looks up a species by code; antiparticles resolve to their particle entry.
pub fn particle(pdg: i32) -> Option<&'static ParticleData> {
    let key = pdg.abs();
    TABLE.iter().find(|d| d.pdg == key)
}

/// Charge-conjugate code.
pub fn conjugate(pdg: i32) -> i32 {
    if self_conjugate(pdg.abs()) {
        pdg.abs()
    } else {
        -pdg
    }
}

/// Electric charge of `pdg`, antiparticles included. Unknown codes are neutral.
pub fn charge(pdg: i32) -> i32 {
    match particle(pdg) {
        Some(d) if pdg < 0 => -d.charge,
        Some(d) => d.charge,
        None => 0,
    }
}

pub fn mass(pdg: i32) -> Option<f64> {
    particle(pdg).map(|d| d.mass)
}

pub fn name(pdg: i32) -> String {
    match particle(pdg) {
        Some(d) if pdg < 0 => format!("anti-{}", d.name),
        Some(d) => d.name.to_string(),
        None => format!("pdg{pdg}"),
    }
}

/// True for b-flavoured hadrons.
pub fn is_b_hadron(pdg: i32) -> bool {
    let a = pdg.abs();
    (500..600).contains(&a) || (5000..6000).contains(&a)
}

/// True for charm hadrons (open charm only).
pub fn is_c_hadron(pdg: i32) -> bool {
    let a = pdg.abs();
    (400..500).contains(&a) && a != JPSI || (4000..5000).contains(&a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugation() {
        assert_eq!(conjugate(PI0), PI0);
        assert_eq!(conjugate(PI_PLUS), -PI_PLUS);
        assert_eq!(conjugate(-DS_PLUS), DS_PLUS);
        assert_eq!(charge(-PI_PLUS), -1);
        assert_eq!(charge(-LAMBDA_C), -1);
        assert_eq!(charge(B0), 0);
    }

    #[test]
    fn bs_b0_mass_difference() {
        let dm = mass(BS).unwrap() - mass(B0).unwrap();
        assert!((dm - 0.0872).abs() < 1e-4);
    }

    #[test]
    fn flavour_classes() {
        assert!(is_b_hadron(-531));
        assert!(is_b_hadron(LAMBDA_B));
        assert!(is_c_hadron(D0));
        assert!(!is_c_hadron(JPSI));
        assert!(!is_b_hadron(D0));
    }
}
