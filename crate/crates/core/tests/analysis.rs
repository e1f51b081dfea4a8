mod common;

use ecalsim::analysis::{
    bs_b0_separation, scale_yield, select_ds_pi, select_kstar_gamma, select_pi0pi0, split_hemispheres, BTagModel,
    Cuts, Side,
};
use ecalsim::constants::{self, BS, DS_PLUS, PI0_MASS};
use ecalsim::detector::{
    reconstruct_event, DetectorScenario, PhotonId, PhotonOrigin, Pid, RecoEvent, ReconstructedPhoton,
    ReconstructedTrack, ScenarioSet,
};
use ecalsim::evtgen::{chains, generate_event, generate_signal_event, Event, Flavour, GeneratorConfig};
use ecalsim::kinematics::{two_body_decay, FourVector, UnitAxis, Vec3};
use ecalsim::report::core_width;
use ecalsim::rng::{self, Stage};
use proptest::prelude::*;
use rand::Rng;

const K_MASS: f64 = 0.493677;
const PI_MASS: f64 = 0.13957039;

fn decay2<R: Rng + ?Sized>(parent: FourVector, m1: f64, m2: f64, rng: &mut R) -> (FourVector, FourVector) {
    let (a, b) = two_body_decay(parent.mass(), m1, m2, rng).unwrap();
    let beta = parent.beta();
    (a.boost(beta).unwrap(), b.boost(beta).unwrap())
}

fn moving(m: f64, e: f64, dir: Vec3) -> FourVector {
    FourVector::from_p_m(dir * ((e * e - m * m).sqrt() / dir.norm()), m)
}

fn photon(p: FourVector, origin: PhotonOrigin) -> ReconstructedPhoton {
    ReconstructedPhoton {
        e: p.e,
        theta: p.theta(),
        phi: p.phi(),
        cov_diag: [0.0256 * p.e, 1e-8, 1e-8],
        origin,
    }
}

fn track(p: FourVector, pid: Pid, charge: i32, vertex: Vec3) -> ReconstructedTrack {
    ReconstructedTrack { p: FourVector::from_p_m(p.p3(), pid.mass()), charge, pid, impact_vertex: vertex, truth_index: 0 }
}

fn reco(photons: Vec<ReconstructedPhoton>, tracks: Vec<ReconstructedTrack>) -> RecoEvent {
    RecoEvent { event_id: 0, photons, tracks, thrust_axis: UnitAxis::Z, thrust: 1.0 }
}

/// B_s → D_s π, D_s → (K⁺K⁻) ρ, ρ → π π⁰, with the K⁺K⁻ system at mass `m_kk`.
fn ds_pi_event(m_kk: f64, seed: u64) -> RecoEvent {
    let mut r = common::rng(seed);
    let b = moving(constants::mass(BS).unwrap(), 30.0, Vec3::new(0.05, 0.02, 1.0));
    let (ds, bachelor) = decay2(b, constants::mass(DS_PLUS).unwrap(), PI_MASS, &mut r);
    let (kk, rho) = decay2(ds, m_kk, 0.775, &mut r);
    let (kp, km) = decay2(kk, K_MASS, K_MASS, &mut r);
    let (pim, pi0) = decay2(rho, PI_MASS, PI0_MASS, &mut r);
    let (g1, g2) = decay2(pi0, 0.0, 0.0, &mut r);
    reco(
        vec![photon(g1, PhotonOrigin::Genuine(1)), photon(g2, PhotonOrigin::Genuine(2))],
        vec![
            track(kp, Pid::Kaon, 1, Vec3::ZERO),
            track(km, Pid::Kaon, -1, Vec3::ZERO),
            track(pim, Pid::Pion, -1, Vec3::ZERO),
            track(bachelor, Pid::Pion, 1, Vec3::ZERO),
        ],
    )
}

/// A system of mass `m` and energy `e` along +z decaying to π⁰π⁰ → 4γ.
fn four_photon_event(m: f64, e: f64, seed: u64) -> Vec<ReconstructedPhoton> {
    let mut r = common::rng(seed);
    let x = moving(m, e, Vec3::new(0.0, 0.03, 1.0));
    let (p1, p2) = decay2(x, PI0_MASS, PI0_MASS, &mut r);
    let (g1, g2) = decay2(p1, 0.0, 0.0, &mut r);
    let (g3, g4) = decay2(p2, 0.0, 0.0, &mut r);
    [g1, g2, g3, g4].iter().enumerate().map(|(i, &g)| photon(g, PhotonOrigin::Genuine(i + 1))).collect()
}

fn cuts_always_tagged() -> Cuts {
    let mut c = Cuts::builtin();
    c.btag = BTagModel { eff_b: 1.0, mistag_c: 1.0, mistag_uds: 1.0 };
    c
}

#[test]
fn ds_pi_synthetic_phi_window() {
    let s = DetectorScenario::perfect();
    let cuts = Cuts::builtin();
    let ok = select_ds_pi(&ds_pi_event(1.0195, 1), &s, &cuts);
    assert_eq!(ok.len(), 1);
    assert!((ok[0].m_b - constants::mass(BS).unwrap()).abs() < 1e-6);
    assert!((ok[0].m_kk - 1.0195).abs() < 1e-9);
    assert!(select_ds_pi(&ds_pi_event(1.08, 1), &s, &cuts).is_empty());
}

fn perfect_reco(ev: &Event, master: u64) -> RecoEvent {
    let seed = rng::event_seed(master, ev.event_id);
    reconstruct_event(ev, &DetectorScenario::perfect(), &mut rng::stream(seed, Stage::Detector))
}

#[test]
fn perfect_detector_ds_pi_pipeline() {
    let cfg = GeneratorConfig::builtin();
    let s = DetectorScenario::perfect();
    let cuts = Cuts::builtin();
    let n = 300;
    let mut matched = 0;
    for i in 0..n {
        let ev = generate_signal_event(&cfg, 101, i, &chains::bs_ds_pi()).unwrap();
        for c in select_ds_pi(&perfect_reco(&ev, 101), &s, &cuts).iter().filter(|c| c.is_signal(&ev)) {
            assert!((c.m_ds - 1.9683).abs() < 1e-3, "m_Ds = {}", c.m_ds);
            assert!((c.m_b - 5.3669).abs() < 1e-3, "m_B = {}", c.m_b);
            matched += 1;
        }
    }
    // ρ line-shape tails fall outside the window, and with no smearing every true π⁰
    // pair ties at the best metric, so fragmentation π⁰s sometimes win the hemisphere
    assert!(matched as f64 > 0.5 * n as f64, "{matched} of {n}");
}

#[test]
fn perfect_detector_pi0pi0_pipeline() {
    let cfg = GeneratorConfig::builtin();
    let s = DetectorScenario::perfect();
    let cuts = cuts_always_tagged();
    let mut matched = 0;
    for i in 0..300 {
        let ev = generate_signal_event(&cfg, 102, i, &chains::b0_pi0_pi0()).unwrap();
        let r = perfect_reco(&ev, 102);
        let mut arng = rng::stream(rng::event_seed(102, i), Stage::Analysis);
        for c in select_pi0pi0(&r, ev.primary_flavour, &s, &cuts, &mut arng).iter().filter(|c| c.is_signal(&ev)) {
            assert!((c.mass - 5.2797).abs() < 1e-3, "m = {}", c.mass);
            matched += 1;
        }
    }
    assert!(matched > 100, "{matched}");
}

#[test]
fn pi0pi0_mass_window_and_vertex_veto() {
    let s = DetectorScenario::perfect();
    let cuts = cuts_always_tagged();
    let mut r = common::rng(0);
    let accepted = reco(four_photon_event(5.0, 40.0, 3), vec![]);
    let c = select_pi0pi0(&accepted, Flavour::B, &s, &cuts, &mut r);
    assert_eq!(c.len(), 1);
    assert!((c[0].mass - 5.0).abs() < 1e-6);
    assert_eq!(c[0].side, Side::Plus);

    let low = reco(four_photon_event(3.5, 40.0, 3), vec![]);
    assert!(select_pi0pi0(&low, Flavour::B, &s, &cuts, &mut r).is_empty());

    let v = Vec3::new(0.0, 0.0, 1.0);
    let displaced = vec![
        track(FourVector::from_p_m(Vec3::new(0.3, 0.1, 2.0), PI_MASS), Pid::Pion, 1, v),
        track(FourVector::from_p_m(Vec3::new(-0.2, 0.1, 1.5), PI_MASS), Pid::Pion, -1, v),
    ];
    let vetoed = reco(four_photon_event(5.0, 40.0, 3), displaced);
    assert!(select_pi0pi0(&vetoed, Flavour::B, &s, &cuts, &mut r).is_empty());

    // no b-tag in the opposite hemisphere, no search
    let mut never = Cuts::builtin();
    never.btag = BTagModel { eff_b: 0.0, mistag_c: 0.0, mistag_uds: 0.0 };
    assert!(select_pi0pi0(&accepted, Flavour::B, &s, &never, &mut r).is_empty());
}

/// K* of mass `m_kpi` with energy `e_sys - e_gamma` decaying at distance `d`
/// along its flight direction, plus a photon of energy `e_gamma`.
fn kstar_gamma_event(m_kpi: f64, d: f64, e_gamma: f64, e_sys: f64, origin: PhotonOrigin) -> RecoEvent {
    let mut r = common::rng(7);
    let dir = Vec3::new(0.1, 0.0, 1.0);
    let ks = moving(m_kpi, e_sys - e_gamma, dir);
    let (k, pi) = decay2(ks, K_MASS, PI_MASS, &mut r);
    let vertex = dir * (d / dir.norm());
    let g = moving(0.0, e_gamma, Vec3::new(-0.1, 0.05, 1.0));
    reco(
        vec![photon(g, origin)],
        vec![track(k, Pid::Kaon, 1, vertex), track(pi, Pid::Pion, -1, vertex)],
    )
}

#[test]
fn kstar_gamma_examples() {
    let s = DetectorScenario::perfect();
    let cuts = Cuts::builtin();
    let mut r = common::rng(8);
    let ok = select_kstar_gamma(&kstar_gamma_event(0.92, 0.2, 6.0, 35.0, PhotonOrigin::Genuine(1)), &s, &cuts, &mut r);
    assert_eq!(ok.len(), 1);
    assert!((ok[0].m_kpi - 0.92).abs() < 1e-9);
    assert!((ok[0].system_energy - 35.0).abs() < 1e-9);
    assert_eq!(ok[0].photon_id, PhotonId::SinglePhoton);
    assert!(ok[0].passes(&cuts));

    let near = kstar_gamma_event(0.92, 0.040, 6.0, 35.0, PhotonOrigin::Genuine(1));
    assert!(select_kstar_gamma(&near, &s, &cuts, &mut r).is_empty());
    let merged = kstar_gamma_event(0.92, 0.2, 6.0, 35.0, PhotonOrigin::MergedPi0(1));
    assert!(select_kstar_gamma(&merged, &s, &cuts, &mut r).is_empty());
    let soft = kstar_gamma_event(0.92, 0.2, 4.5, 35.0, PhotonOrigin::Genuine(1));
    assert!(select_kstar_gamma(&soft, &s, &cuts, &mut r).is_empty());
    let outside = kstar_gamma_event(1.05, 0.2, 6.0, 35.0, PhotonOrigin::Genuine(1));
    assert!(select_kstar_gamma(&outside, &s, &cuts, &mut r).is_empty());
    let slow = kstar_gamma_event(0.92, 0.2, 6.0, 25.0, PhotonOrigin::Genuine(1));
    assert!(select_kstar_gamma(&slow, &s, &cuts, &mut r).is_empty());
}

#[test]
fn kstar_gamma_keeps_every_combination() {
    let s = DetectorScenario::perfect();
    let cuts = Cuts::builtin();
    let mut ev = kstar_gamma_event(0.92, 0.2, 6.0, 35.0, PhotonOrigin::Genuine(1));
    // a harder photon in the opposite hemisphere still combines with the Kπ pair
    let extra = moving(0.0, 9.0, Vec3::new(0.0, 0.3, -1.0));
    ev.photons.push(photon(extra, PhotonOrigin::Genuine(2)));
    let cands = select_kstar_gamma(&ev, &s, &cuts, &mut common::rng(9));
    assert_eq!(cands.len(), 2);
    assert!(cands.iter().all(|c| c.side == cands[0].side));
    let mut energies: Vec<f64> = cands.iter().map(|c| c.photon_energy).collect();
    energies.sort_by(f64::total_cmp);
    assert!((energies[0] - 6.0).abs() < 1e-9 && (energies[1] - 9.0).abs() < 1e-9);
}

#[test]
fn fitted_ds_pi_mass_is_narrower_on_ultra_granular() {
    let cfg = GeneratorConfig::builtin();
    let fit = ScenarioSet::builtin().get("ultra-granular").unwrap().clone();
    assert!(fit.pi0_mass_fit_enabled);
    let nofit = DetectorScenario { pi0_mass_fit_enabled: false, ..fit.clone() };
    let cuts = Cuts::builtin();
    let (mut with, mut without) = (Vec::new(), Vec::new());
    for i in 0..1500 {
        let ev = generate_signal_event(&cfg, 103, i, &chains::bs_ds_pi()).unwrap();
        let seed = rng::event_seed(103, i);
        let r = reconstruct_event(&ev, &fit, &mut rng::stream(seed, Stage::Detector));
        with.extend(select_ds_pi(&r, &fit, &cuts).iter().filter(|c| c.is_signal(&ev)).map(|c| c.m_b));
        without.extend(select_ds_pi(&r, &nofit, &cuts).iter().filter(|c| c.is_signal(&ev)).map(|c| c.m_b));
    }
    let w = core_width(&with).unwrap();
    let wo = core_width(&without).unwrap();
    assert!(w.sigma < wo.sigma, "fit {} vs no fit {}", w.sigma, wo.sigma);
}

#[test]
fn btag_rates() {
    let model = BTagModel::default();
    let mut r = common::rng(9);
    let n = 100_000u64;
    let count = |f: Flavour, r: &mut rand_chacha::ChaCha8Rng| (0..n).filter(|_| model.tag(f, r)).count() as u64;
    let b = count(Flavour::B, &mut r);
    let c = count(Flavour::C, &mut r);
    assert!(common::within_binomial(b, n, 0.90, 5.0), "{b}");
    assert!(common::within_binomial(c, n, 0.10, 5.0), "{c}");
    assert_eq!(count(Flavour::Uds, &mut r), 0);
}

#[test]
fn yield_examples() {
    let y = scale_yield(1, 1, 1.55e-6, 0.2158, 0.40, 1e9).unwrap();
    assert!((y - 267.6).abs() < 0.1, "{y}");
    assert_eq!(scale_yield(0, 100, 1.55e-6, 0.2158, 0.40, 1e9).unwrap(), 0.0);
    assert_eq!(scale_yield(7, 7, 1.0, 1.0, 1.0, 1e9).unwrap(), 2e9);
    assert!(scale_yield(0, 0, 1.0, 1.0, 1.0, 1e9).is_err());
}

#[test]
fn separation_examples() {
    assert!((bs_b0_separation(0.1453 / 2f64.sqrt(), 0.1453 / 2f64.sqrt(), 0.0872).unwrap() - 0.600).abs() < 1e-3);
    assert!((bs_b0_separation(0.0545 / 2f64.sqrt(), 0.0545 / 2f64.sqrt(), 0.0872).unwrap() - 1.600).abs() < 1e-3);
    assert_eq!(bs_b0_separation(0.01, 0.02, 0.0).unwrap(), 0.0);
    assert!(bs_b0_separation(0.0, 0.02, 0.1).is_err());
}

/// Candidates of every channel on realistic samples: each re-passes its cuts,
/// fitted π⁰s sit on the π⁰ mass, and selection repeats exactly.
#[test]
fn candidates_recheck_and_determinism() {
    let cfg = GeneratorConfig::builtin();
    let set = ScenarioSet::builtin();
    let cuts = Cuts::builtin();
    let mut n_cands = [0usize; 3];
    for name in ["crystal-ref", "ultra-granular"] {
        let s = set.get(name).unwrap();
        for i in 0..300u64 {
            let events = [
                generate_signal_event(&cfg, 104, i, &chains::b0_ds_pi()).unwrap(),
                generate_signal_event(&cfg, 105, i, &chains::b0_pi0_pi0()).unwrap(),
                generate_signal_event(&cfg, 106, i, &chains::b0_kstar_gamma()).unwrap(),
                generate_event(&cfg, 107, i).unwrap(),
            ];
            for ev in &events {
                let seed = rng::event_seed(108, i);
                let r = reconstruct_event(ev, s, &mut rng::stream(seed, Stage::Detector));

                let ds = select_ds_pi(&r, s, &cuts);
                assert_eq!(ds, select_ds_pi(&r, s, &cuts));
                for c in &ds {
                    assert!(c.passes(&cuts));
                    if let Some(f) = c.pi0.fit {
                        assert!(f.converged);
                        assert!((c.pi0.p.mass() - PI0_MASS).abs() < 1e-4);
                    }
                }
                n_cands[0] += ds.len();

                let pp = select_pi0pi0(&r, ev.primary_flavour, s, &cuts, &mut rng::stream(seed, Stage::Analysis));
                let again = select_pi0pi0(&r, ev.primary_flavour, s, &cuts, &mut rng::stream(seed, Stage::Analysis));
                assert_eq!(pp, again);
                for c in &pp {
                    assert!(c.passes(&cuts));
                    for p in &c.pi0s {
                        if p.fit.is_some() {
                            assert!((p.p.mass() - PI0_MASS).abs() < 1e-4);
                        }
                    }
                    if s.fake_rate == 0.0 {
                        assert!(!c.has_fake_photon());
                    }
                }
                n_cands[1] += pp.len();

                let kg = select_kstar_gamma(&r, s, &cuts, &mut rng::stream(seed, Stage::Analysis));
                assert_eq!(kg, select_kstar_gamma(&r, s, &cuts, &mut rng::stream(seed, Stage::Analysis)));
                for c in &kg {
                    assert!(c.passes(&cuts));
                    assert_eq!(c.photon_id, PhotonId::SinglePhoton);
                }
                n_cands[2] += kg.len();
            }
        }
    }
    assert!(n_cands.iter().all(|&n| n > 50), "{n_cands:?}");
}

fn reco_objects() -> impl Strategy<Value = (Vec<ReconstructedPhoton>, Vec<ReconstructedTrack>)> {
    let photons = prop::collection::vec((0.1..20.0f64, 0.0..3.1416f64, -3.1416..3.1416f64), 0..12);
    let tracks = prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64), 0..12);
    (photons, tracks).prop_map(|(ps, ts)| {
        let ps = ps
            .into_iter()
            .map(|(e, th, ph)| photon(FourVector::massless(e, th, ph), PhotonOrigin::Genuine(1)))
            .collect();
        let ts = ts
            .into_iter()
            .map(|(x, y, z)| track(FourVector::from_p_m(Vec3::new(x, y, z), PI_MASS), Pid::Pion, 1, Vec3::ZERO))
            .collect();
        (ps, ts)
    })
}

proptest! {
    #[test]
    fn hemispheres_partition_objects(
        (ps, ts) in reco_objects(),
        ax in -1.0..1.0f64, ay in -1.0..1.0f64, az in -1.0..1.0f64,
    ) {
        prop_assume!(Vec3::new(ax, ay, az).norm() > 1e-3);
        let axis = UnitAxis::new(ax, ay, az).unwrap();
        let (plus, minus) = split_hemispheres(&ps, &ts, axis);
        prop_assert_eq!(plus.photons.len() + minus.photons.len(), ps.len());
        prop_assert_eq!(plus.tracks.len() + minus.tracks.len(), ts.len());
        prop_assert!(plus.photons.iter().all(|g| axis.dot(g.direction()) >= 0.0));
        prop_assert!(minus.photons.iter().all(|g| axis.dot(g.direction()) < 0.0));
        prop_assert!(plus.tracks.iter().all(|t| axis.dot(t.p.p3()) >= 0.0));
        prop_assert!(minus.tracks.iter().all(|t| axis.dot(t.p.p3()) < 0.0));
    }

    #[test]
    fn separation_is_symmetric(a in 1e-4..1.0f64, b in 1e-4..1.0f64, dm in 0.0..1.0f64) {
        prop_assert_eq!(bs_b0_separation(a, b, dm).unwrap(), bs_b0_separation(b, a, dm).unwrap());
    }
}

#[test]
fn orthogonal_object_goes_plus() {
    let t = track(FourVector::from_p_m(Vec3::new(0.0, 1.0, 0.0), PI_MASS), Pid::Pion, 1, Vec3::ZERO);
    assert_eq!(UnitAxis::Z.dot(t.p.p3()), 0.0);
    let (plus, minus) = split_hemispheres(&[], &[t], UnitAxis::Z);
    assert_eq!((plus.tracks.len(), minus.tracks.len()), (1, 0));
}
