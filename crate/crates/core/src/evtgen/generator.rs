use rand::Rng;
use rand_distr::{Distribution, Exp1, Normal, Poisson};

use super::config::{DecayChannel, DecayTable, GeneratorConfig};
use super::record::{Event, Flavour, ParticleRecord, Status};
use super::EvtGenError;
use crate::constants::{self, particle};
use crate::kinematics::{n_body_phase_space, random_direction, FourVector, Vec3};
use crate::rng::{self, Stage};

/// Attempts before a generation loop gives up; reaching it means the
/// configuration cannot produce a balanced event.
const MAX_ATTEMPTS: usize = 10_000;

/// Primary hadrons of one event, before global balancing and decays.
#[derive(Debug, Clone, PartialEq)]
pub struct EventTemplate {
    pub event_id: u64,
    pub seed: u64,
    pub flavour: Flavour,
    /// Direction of the quark; the antiquark goes the opposite way.
    pub quark_axis: Vec3,
    /// `[quark hemisphere, antiquark hemisphere]`.
    pub hemispheres: [HemisphereSeed; 2],
    /// Hemisphere whose leading hadron was forced, if any.
    pub forced_side: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HemisphereSeed {
    pub leading_pdg: i32,
    pub leading_x: f64,
    pub leading: FourVector,
    /// Fragmentation pions as `(pdg, momentum)`.
    pub fragments: Vec<(i32, FourVector)>,
}

fn sample_flavour<R: Rng + ?Sized>(cfg: &GeneratorConfig, rng: &mut R) -> Flavour {
    let (rb, rc, ruds) = if cfg.generate_uds {
        (cfg.r_b, cfg.r_c, cfg.r_uds)
    } else {
        (cfg.r_b, cfg.r_c, 0.0)
    };
    let u = rng.random::<f64>() * (rb + rc + ruds);
    if u < rb {
        Flavour::B
    } else if u < rb + rc {
        Flavour::C
    } else {
        Flavour::Uds
    }
}

/// Leading hadron containing the quark (`antiquark = false`) or antiquark.
fn sample_species<R: Rng + ?Sized>(
    cfg: &GeneratorConfig,
    flavour: Flavour,
    antiquark: bool,
    rng: &mut R,
) -> i32 {
    let u: f64 = rng.random();
    let pick = |fr: [f64; 4], codes: [i32; 4]| {
        let mut acc = 0.0;
        for (f, c) in fr.iter().zip(codes) {
            acc += f;
            if u < acc {
                return c;
            }
        }
        codes[3]
    };
    let code = match flavour {
        Flavour::B => {
            let s = &cfg.b_species;
            // B0 = d b̄: positive meson codes carry the antiquark
            let c = pick(
                [s.b0, s.b_plus, s.bs, s.baryon],
                [constants::B0, constants::B_PLUS, constants::BS, -constants::LAMBDA_B],
            );
            if antiquark { c } else { constants::conjugate(c) }
        }
        Flavour::C => {
            let s = &cfg.c_species;
            let c = pick(
                [s.d0, s.d_plus, s.ds, s.baryon],
                [constants::D0, constants::D_PLUS, constants::DS_PLUS, constants::LAMBDA_C],
            );
            if antiquark { constants::conjugate(c) } else { c }
        }
        Flavour::Uds => {
            let c = if u < 0.8 { constants::PI_PLUS } else { constants::K_PLUS };
            if antiquark { -c } else { c }
        }
    };
    code
}

fn orthonormal_basis(n: Vec3) -> (Vec3, Vec3) {
    let helper = if n.x.abs() < 0.9 { Vec3::new(1.0, 0.0, 0.0) } else { Vec3::new(0.0, 1.0, 0.0) };
    let e1 = n.cross(helper).unit().expect("non-parallel helper");
    let e2 = n.cross(e1);
    (e1, e2)
}

fn sample_x<R: Rng + ?Sized>(cfg: &GeneratorConfig, rng: &mut R) -> f64 {
    let f = &cfg.fragmentation;
    let normal = Normal::new(f.x_mean, f.x_width).expect("positive width");
    loop {
        let x = normal.sample(rng);
        if (f.x_min..=f.x_max).contains(&x) {
            return x;
        }
    }
}

/// Momentum of energy `e` and mass `m` along `axis`, tilted by a Gaussian
/// transverse kick. Returns `None` if the kick exceeds the momentum.
fn tilted<R: Rng + ?Sized>(axis: Vec3, e: f64, m: f64, pt_sigma: f64, rng: &mut R) -> Option<FourVector> {
    let p = (e * e - m * m).max(0.0).sqrt();
    let (e1, e2) = orthonormal_basis(axis);
    let (k1, k2) = if pt_sigma > 0.0 {
        let n = Normal::new(0.0, pt_sigma).expect("positive width");
        (n.sample(rng), n.sample(rng))
    } else {
        (0.0, 0.0)
    };
    let pt2 = k1 * k1 + k2 * k2;
    if pt2 > p * p {
        return None;
    }
    let pl = (p * p - pt2).sqrt();
    Some(FourVector::from_p_m(axis * pl + e1 * k1 + e2 * k2, m))
}

fn hemisphere_seed<R: Rng + ?Sized>(
    cfg: &GeneratorConfig,
    leading_pdg: i32,
    axis: Vec3,
    rng: &mut R,
) -> HemisphereSeed {
    let f = &cfg.fragmentation;
    let e_beam = cfg.sqrt_s / 2.0;
    let m = constants::mass(leading_pdg).unwrap_or(0.0);
    let (leading_x, leading) = loop {
        let x = sample_x(cfg, rng);
        if x * e_beam <= m {
            continue;
        }
        if let Some(v) = tilted(axis, x * e_beam, m, f.pt_sigma, rng) {
            break (x, v);
        }
    };

    let n_frag = if f.mu_frag > 0.0 {
        Poisson::new(f.mu_frag).expect("positive mean").sample(rng) as usize
    } else {
        0
    };
    let mut remaining = e_beam - leading.e;
    let mut fragments = Vec::with_capacity(n_frag);
    for k in 0..n_frag {
        let share = if k + 1 == n_frag { remaining } else { rng.random::<f64>() * remaining };
        remaining -= share;
        let pdg = if rng.random::<f64>() < f.neutral_fraction {
            constants::PI0
        } else if rng.random::<bool>() {
            constants::PI_PLUS
        } else {
            -constants::PI_PLUS
        };
        let mpi = constants::mass(pdg).unwrap_or(0.0);
        // longitudinal share; the kick keeps the direction roughly along the jet
        let pl = share.max(0.0);
        let (e1, e2) = orthonormal_basis(axis);
        let n = Normal::new(0.0, f.pt_sigma.max(1e-12)).expect("positive width");
        let p = axis * pl + e1 * n.sample(rng) + e2 * n.sample(rng);
        fragments.push((pdg, FourVector::from_p_m(p, mpi)));
    }
    HemisphereSeed { leading_pdg, leading_x, leading, fragments }
}

fn sample_axis<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    // 1 + cos²θ angular distribution of e+e- -> Z -> q q̄
    loop {
        let d = random_direction(rng);
        if rng.random::<f64>() * 2.0 <= 1.0 + d.z * d.z {
            return d;
        }
    }
}

/// Draws the primary hadrons of one event. `forced` replaces the leading hadron
/// of a randomly chosen hemisphere.
pub fn generate_template<R: Rng + ?Sized>(
    cfg: &GeneratorConfig,
    event_id: u64,
    seed: u64,
    forced: Option<i32>,
    rng: &mut R,
) -> EventTemplate {
    let flavour = match forced {
        Some(p) if constants::is_b_hadron(p) => Flavour::B,
        Some(p) if constants::is_c_hadron(p) => Flavour::C,
        Some(_) => Flavour::Uds,
        None => sample_flavour(cfg, rng),
    };
    let axis = sample_axis(rng);
    let forced_side = forced.map(|_| usize::from(rng.random::<bool>()));
    let mut species = [
        sample_species(cfg, flavour, false, rng),
        sample_species(cfg, flavour, true, rng),
    ];
    if let (Some(pdg), Some(side)) = (forced, forced_side) {
        species[side] = pdg;
    }
    let h0 = hemisphere_seed(cfg, species[0], axis, rng);
    let h1 = hemisphere_seed(cfg, species[1], -axis, rng);
    EventTemplate { event_id, seed, flavour, quark_axis: axis, hemispheres: [h0, h1], forced_side }
}

/// Rescales the fragmentation system so that it carries exactly `target`.
///
/// The fragments are boosted to their rest frame, their momenta scaled by a
/// common factor to reach the target mass, then boosted to the target velocity.
fn balance(fragments: &mut [FourVector], masses: &[f64], target: FourVector) -> bool {
    if fragments.len() < 2 || target.e <= 0.0 {
        return false;
    }
    let m_target2 = target.m2();
    let sum_m: f64 = masses.iter().sum();
    if m_target2 <= sum_m * sum_m {
        return false;
    }
    let m_target = m_target2.sqrt();
    let total: FourVector = fragments.iter().sum();
    let to_rest = -total.beta();
    let rest: Vec<Vec3> = match fragments.iter().map(|v| v.boost(to_rest)).collect::<Result<Vec<_>, _>>() {
        Ok(v) => v.into_iter().map(|f| f.p3()).collect(),
        Err(_) => return false,
    };
    let energy = |s: f64| -> f64 {
        rest.iter().zip(masses).map(|(p, m)| (m * m + s * s * p.norm2()).sqrt()).sum()
    };
    let mut hi = 1.0;
    while energy(hi) < m_target {
        hi *= 2.0;
        if hi > 1e12 {
            return false;
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if energy(mid) < m_target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = 0.5 * (lo + hi);
    let beta = target.beta();
    for ((f, p), &m) in fragments.iter_mut().zip(&rest).zip(masses) {
        match FourVector::from_p_m(*p * s, m).boost(beta) {
            Ok(v) => *f = v,
            Err(_) => return false,
        }
    }
    // absorb the residual rounding in the last fragment's momentum
    let residual = target - fragments.iter().sum::<FourVector>();
    let last = fragments.len() - 1;
    fragments[last] = FourVector::new(
        fragments[last].e + residual.e,
        fragments[last].px + residual.px,
        fragments[last].py + residual.py,
        fragments[last].pz + residual.pz,
    );
    true
}

/// Turns a template into primary particle records with exact event balance.
/// Returns `None` when the fragmentation system cannot absorb the imbalance.
fn primaries(cfg: &GeneratorConfig, t: &EventTemplate) -> Option<Vec<ParticleRecord>> {
    let e_beam = cfg.sqrt_s / 2.0;
    let mut frag_p: Vec<FourVector> = Vec::new();
    let mut frag_m: Vec<f64> = Vec::new();
    for h in &t.hemispheres {
        for (pdg, v) in &h.fragments {
            frag_p.push(*v);
            frag_m.push(constants::mass(*pdg).unwrap_or(0.0));
        }
    }
    let target = FourVector::new(cfg.sqrt_s, 0.0, 0.0, 0.0) - t.hemispheres[0].leading - t.hemispheres[1].leading;
    if !balance(&mut frag_p, &frag_m, target) {
        return None;
    }

    let quark_code = match t.flavour {
        Flavour::B => constants::QUARK_B,
        Flavour::C => constants::QUARK_C,
        Flavour::Uds => constants::QUARK_D,
    };
    let origin = Vec3::ZERO;
    let mut records = vec![ParticleRecord {
        pdg_id: constants::Z0,
        status: Status::Initial,
        mother_index: -1,
        p: FourVector::new(cfg.sqrt_s, 0.0, 0.0, 0.0),
        production_vertex: origin,
    }];
    for (side, sign) in [(0usize, 1.0), (1, -1.0)] {
        let q = t.quark_axis * (sign * e_beam);
        records.push(ParticleRecord {
            pdg_id: if side == 0 { quark_code } else { -quark_code },
            status: Status::Initial,
            mother_index: 0,
            p: FourVector::new(e_beam, q.x, q.y, q.z),
            production_vertex: origin,
        });
    }
    let mut k = 0;
    for (side, h) in t.hemispheres.iter().enumerate() {
        let mother = side as i64 + 1;
        records.push(ParticleRecord {
            pdg_id: h.leading_pdg,
            status: Status::Final,
            mother_index: mother,
            p: h.leading,
            production_vertex: origin,
        });
        for (pdg, _) in &h.fragments {
            records.push(ParticleRecord {
                pdg_id: *pdg,
                status: Status::Final,
                mother_index: mother,
                p: frag_p[k],
                production_vertex: origin,
            });
            k += 1;
        }
    }
    Some(records)
}

fn sample_line_shape<R: Rng + ?Sized>(pdg: i32, rng: &mut R) -> f64 {
    let d = particle(pdg).expect("validated code");
    if d.width <= 0.0 {
        return d.mass;
    }
    // non-relativistic Breit–Wigner truncated at ±3Γ: m = m0 + Γ/2·tan(u), |tan u| ≤ 6
    let umax = 6.0f64.atan();
    let u = rng.random_range(-umax..umax);
    d.mass + 0.5 * d.width * u.tan()
}

/// Generic hadronic final state for the part of the width not listed in the table.
pub fn filler_daughters(parent: i32) -> Vec<i32> {
    let a = parent.abs();
    let pd = match particle(a) {
        Some(p) => p,
        None => return Vec::new(),
    };
    // heavy remnant and the number of accompanying pions, for the particle code
    let (remnant, mut n_pions): (Option<i32>, usize) = if constants::is_b_hadron(a) {
        if pd.baryon {
            (Some(constants::LAMBDA_C), 4)
        } else {
            (Some(-constants::D0), 4)
        }
    } else if constants::is_c_hadron(a) {
        if pd.baryon {
            (Some(constants::LAMBDA), 3)
        } else {
            (Some(-constants::K_PLUS), 3)
        }
    } else {
        (None, ((pd.mass / 0.35) as usize).clamp(2, 7))
    };
    let remnant_mass = remnant.and_then(constants::mass).unwrap_or(0.0);
    let q_remnant = remnant.map(constants::charge).unwrap_or(0);
    let q_pions = pd.charge - q_remnant;
    loop {
        let mut n_charged = ((2 * n_pions + 1) / 3).max(q_pions.unsigned_abs() as usize);
        if (n_charged as i32 - q_pions).rem_euclid(2) != 0 {
            n_charged += 1;
        }
        if n_charged > n_pions {
            n_charged -= 2;
        }
        let n_plus = (n_charged as i32 + q_pions) / 2;
        let n_minus = n_charged as i32 - n_plus;
        let mut out: Vec<i32> = remnant.into_iter().collect();
        out.extend(std::iter::repeat(constants::PI_PLUS).take(n_plus.max(0) as usize));
        out.extend(std::iter::repeat(-constants::PI_PLUS).take(n_minus.max(0) as usize));
        out.extend(std::iter::repeat(constants::PI0).take(n_pions - n_charged));
        let mass: f64 = remnant_mass
            + out.iter().skip(usize::from(remnant.is_some())).map(|&c| constants::mass(c).unwrap_or(0.0)).sum::<f64>();
        if mass < pd.mass || n_pions <= 1 {
            return if parent < 0 { out.into_iter().map(constants::conjugate).collect() } else { out };
        }
        n_pions -= 1;
    }
}

fn choose_daughters<R: Rng + ?Sized>(
    table: &DecayTable,
    pdg: i32,
    forced: Option<&[DecayChannel]>,
    rng: &mut R,
) -> Vec<i32> {
    if let Some(chain) = forced {
        if let Some(ch) = chain.iter().find(|c| c.parent_pdg == pdg) {
            return ch.daughter_pdgs.clone();
        }
    }
    let conj = |ds: &[i32]| -> Vec<i32> {
        if pdg < 0 {
            ds.iter().map(|&d| constants::conjugate(d)).collect()
        } else {
            ds.to_vec()
        }
    };
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for ch in table.channels(pdg) {
        acc += ch.branching_fraction;
        if u < acc {
            return conj(&ch.daughter_pdgs);
        }
    }
    filler_daughters(pdg)
}

fn decay_one<R: Rng + ?Sized>(
    parent: &FourVector,
    daughters: &[i32],
    rng: &mut R,
) -> Result<Vec<FourVector>, EvtGenError> {
    if daughters.len() == 1 {
        return Ok(vec![*parent]);
    }
    let m_parent = parent.mass();
    let mut masses: Vec<f64> = Vec::with_capacity(daughters.len());
    for _ in 0..MAX_ATTEMPTS {
        masses.clear();
        masses.extend(daughters.iter().map(|&d| sample_line_shape(d, rng)));
        if masses.iter().sum::<f64>() < m_parent {
            return Ok(n_body_phase_space(parent, &masses, rng)?);
        }
    }
    Err(EvtGenError::Config(format!("closed decay of mass {m_parent} into {daughters:?}")))
}

/// Decays every unstable particle recursively. Records of `forced_root` and its
/// descendants follow `chain` where a channel matches their code.
fn decay_all<R: Rng + ?Sized>(
    records: &mut Vec<ParticleRecord>,
    table: &DecayTable,
    forced_root: Option<usize>,
    chain: &[DecayChannel],
    rng: &mut R,
) -> Result<(), EvtGenError> {
    let mut in_chain: Vec<bool> = vec![false; records.len()];
    if let Some(root) = forced_root {
        in_chain[root] = true;
    }
    let mut i = 0;
    while i < records.len() {
        let rec = &records[i];
        let unstable = particle(rec.pdg_id).is_some_and(|d| d.unstable);
        if rec.status == Status::Final && unstable {
            let forced = in_chain[i].then_some(chain);
            let daughters = choose_daughters(table, rec.pdg_id, forced, rng);
            if !daughters.is_empty() {
                let parent_p = rec.p;
                let momenta = decay_one(&parent_p, &daughters, rng)?;
                records[i].status = Status::Decayed;
                let vtx = records[i].production_vertex;
                for (pdg, p) in daughters.into_iter().zip(momenta) {
                    records.push(ParticleRecord {
                        pdg_id: pdg,
                        status: Status::Final,
                        mother_index: i as i64,
                        p,
                        production_vertex: vtx,
                    });
                    in_chain.push(in_chain[i]);
                }
            }
        }
        i += 1;
    }
    Ok(())
}

/// Flight distance `γβ·cτ·t`, `t ~ Exp(1)`.
pub fn flight_distance<R: Rng + ?Sized>(p: &FourVector, ctau: f64, rng: &mut R) -> f64 {
    let m = p.mass();
    if ctau <= 0.0 || m <= 0.0 {
        return 0.0;
    }
    let t: f64 = Exp1.sample(rng);
    p.p() / m * ctau * t
}

/// Places decay vertices of weakly decaying hadrons and propagates them to the
/// production vertices of their descendants.
pub fn decay_vertex_placement<R: Rng + ?Sized>(event: &mut Event, rng: &mut R) {
    let n = event.records.len();
    let mut decay_vertex = vec![Vec3::ZERO; n];
    for i in 0..n {
        let prod = match event.records[i].mother() {
            Some(m) => decay_vertex[m],
            None => Vec3::ZERO,
        };
        let rec = &mut event.records[i];
        rec.production_vertex = prod;
        decay_vertex[i] = match rec.status {
            Status::Initial => Vec3::ZERO,
            Status::Final => prod,
            Status::Decayed => {
                let ctau = particle(rec.pdg_id).map_or(0.0, |d| d.ctau);
                let d = flight_distance(&rec.p, ctau, rng);
                match rec.p.p3().unit() {
                    Some(u) if d > 0.0 => prod + u * d,
                    _ => prod,
                }
            }
        };
    }
}

fn finalize<R: Rng + ?Sized>(
    cfg: &GeneratorConfig,
    t: &EventTemplate,
    forced_side: Option<usize>,
    chain: &[DecayChannel],
    rng: &mut R,
) -> Result<Option<Event>, EvtGenError> {
    let mut records = match primaries(cfg, t) {
        Some(r) => r,
        None => return Ok(None),
    };
    let leading_index = |side: usize| -> usize {
        // Z, q, q̄, then per hemisphere: leading hadron followed by fragments
        if side == 0 { 3 } else { 4 + t.hemispheres[0].fragments.len() }
    };
    let root = forced_side.map(leading_index);
    decay_all(&mut records, &cfg.decays, root, chain, rng)?;
    let mut event = Event {
        event_id: t.event_id,
        seed: t.seed,
        records,
        primary_flavour: t.flavour,
        signal_root: root,
    };
    decay_vertex_placement(&mut event, rng);
    Ok(Some(event))
}

/// Generates one Z → qq̄ event whose randomness is drawn from `rng`.
pub fn generate_event_with<R: Rng + ?Sized>(
    cfg: &GeneratorConfig,
    event_id: u64,
    seed: u64,
    rng: &mut R,
) -> Result<Event, EvtGenError> {
    for _ in 0..MAX_ATTEMPTS {
        let t = generate_template(cfg, event_id, seed, None, rng);
        if let Some(ev) = finalize(cfg, &t, None, &[], rng)? {
            return Ok(ev);
        }
    }
    Err(EvtGenError::Config("fragmentation never balanced the event".into()))
}

/// Generates event `event_id` of a run seeded with `master_seed`.
pub fn generate_event(cfg: &GeneratorConfig, master_seed: u64, event_id: u64) -> Result<Event, EvtGenError> {
    let seed = rng::event_seed(master_seed, event_id);
    let mut r = rng::stream(seed, Stage::Generation);
    generate_event_with(cfg, event_id, seed, &mut r)
}

/// Checks that every channel after the first decays a particle produced earlier in the chain.
pub fn validate_chain(chain: &[DecayChannel]) -> Result<(), EvtGenError> {
    let first = chain
        .first()
        .ok_or_else(|| EvtGenError::Config("empty signal chain".into()))?;
    let mut produced: Vec<i32> = vec![first.parent_pdg];
    for ch in chain {
        if !produced.contains(&ch.parent_pdg) {
            return Err(EvtGenError::Config(format!(
                "signal chain references undefined parent {}",
                ch.parent_pdg
            )));
        }
        ch.validate()?;
        produced.extend(&ch.daughter_pdgs);
    }
    Ok(())
}

/// Generates an event in which the leading hadron of one hemisphere decays
/// exactly through `chain`; the rest of the event decays generically.
pub fn force_signal_chain<R: Rng + ?Sized>(
    cfg: &GeneratorConfig,
    event_id: u64,
    seed: u64,
    chain: &[DecayChannel],
    rng: &mut R,
) -> Result<Event, EvtGenError> {
    validate_chain(chain)?;
    let parent = chain[0].parent_pdg;
    for _ in 0..MAX_ATTEMPTS {
        let t = generate_template(cfg, event_id, seed, Some(parent), rng);
        if let Some(ev) = finalize(cfg, &t, t.forced_side, chain, rng)? {
            return Ok(ev);
        }
    }
    Err(EvtGenError::Config("fragmentation never balanced the event".into()))
}

/// Signal event `event_id` of a run seeded with `master_seed`.
pub fn generate_signal_event(
    cfg: &GeneratorConfig,
    master_seed: u64,
    event_id: u64,
    chain: &[DecayChannel],
) -> Result<Event, EvtGenError> {
    let seed = rng::event_seed(master_seed, event_id);
    let mut r = rng::stream(seed, Stage::Generation);
    force_signal_chain(cfg, event_id, seed, chain, &mut r)
}

/// Isolated particle of energy `energy` in a random direction, decayed through
/// the table. Used for single-π⁰ studies.
pub fn single_particle_event<R: Rng + ?Sized>(
    table: &DecayTable,
    pdg: i32,
    energy: f64,
    event_id: u64,
    seed: u64,
    rng: &mut R,
) -> Result<Event, EvtGenError> {
    let m = constants::mass(pdg).ok_or_else(|| EvtGenError::Config(format!("unknown code {pdg}")))?;
    if energy < m {
        return Err(EvtGenError::Config(format!("energy {energy} below mass of {pdg}")));
    }
    let dir = random_direction(rng);
    let p = dir * (energy * energy - m * m).sqrt();
    let mut records = vec![ParticleRecord {
        pdg_id: pdg,
        status: Status::Final,
        mother_index: -1,
        p: FourVector::new(energy, p.x, p.y, p.z),
        production_vertex: Vec3::ZERO,
    }];
    decay_all(&mut records, table, Some(0), &[], rng)?;
    let mut event = Event {
        event_id,
        seed,
        records,
        primary_flavour: Flavour::Uds,
        signal_root: Some(0),
    };
    decay_vertex_placement(&mut event, rng);
    Ok(event)
}
