//! Named signal decay chains.

use super::DecayChannel;
use crate::constants::*;

fn ch(parent: i32, daughters: &[i32]) -> DecayChannel {
    DecayChannel::new(parent, daughters, 1.0)
}

/// B_s0 → D_s⁻ π⁺, D_s⁻ → φ ρ⁻, φ → K⁺K⁻, ρ⁻ → π⁻π⁰, π⁰ → γγ.
pub fn bs_ds_pi() -> Vec<DecayChannel> {
    vec![
        ch(BS, &[-DS_PLUS, PI_PLUS]),
        ch(-DS_PLUS, &[PHI, -RHO_PLUS]),
        ch(PHI, &[K_PLUS, -K_PLUS]),
        ch(-RHO_PLUS, &[-PI_PLUS, PI0]),
        ch(PI0, &[GAMMA, GAMMA]),
    ]
}

/// B0 → D_s⁺ π⁻ followed by the same D_s chain as [`bs_ds_pi`].
pub fn b0_ds_pi() -> Vec<DecayChannel> {
    vec![
        ch(B0, &[DS_PLUS, -PI_PLUS]),
        ch(DS_PLUS, &[PHI, RHO_PLUS]),
        ch(PHI, &[K_PLUS, -K_PLUS]),
        ch(RHO_PLUS, &[PI_PLUS, PI0]),
        ch(PI0, &[GAMMA, GAMMA]),
    ]
}

/// B0 → π⁰π⁰, π⁰ → γγ.
pub fn b0_pi0_pi0() -> Vec<DecayChannel> {
    vec![ch(B0, &[PI0, PI0]), ch(PI0, &[GAMMA, GAMMA])]
}

/// B0 → K*0 γ, K*0 → K⁺π⁻.
pub fn b0_kstar_gamma() -> Vec<DecayChannel> {
    vec![ch(B0, &[K_STAR0, GAMMA]), ch(K_STAR0, &[K_PLUS, -PI_PLUS])]
}

/// Chain by name: `bs_dspi`, `b0_dspi`, `b0_pi0pi0`, `b0_kstargamma`.
pub fn by_name(name: &str) -> Option<Vec<DecayChannel>> {
    match name {
        "bs_dspi" => Some(bs_ds_pi()),
        "b0_dspi" => Some(b0_ds_pi()),
        "b0_pi0pi0" => Some(b0_pi0_pi0()),
        "b0_kstargamma" => Some(b0_kstar_gamma()),
        _ => None,
    }
}

pub const NAMES: [&str; 4] = ["bs_dspi", "b0_dspi", "b0_pi0pi0", "b0_kstargamma"];

/// Product of the branching fractions of the chain in the built-in table,
/// counting each repeated π⁰ → γγ once per occurrence.
pub fn nominal_branching(name: &str) -> Option<f64> {
    // PDG values; π⁰ → γγ taken as 1 like the decay table
    let ds_phi_rho = 0.056;
    let phi_kk = 0.492;
    match name {
        "bs_dspi" => Some(0.00298 * ds_phi_rho * phi_kk),
        "b0_dspi" => Some(2.16e-5 * ds_phi_rho * phi_kk),
        "b0_pi0pi0" => Some(1.55e-6),
        "b0_kstargamma" => Some(4.33e-5 * 0.6667),
        _ => None,
    }
}
