mod common;

use ecalsim::constants::{ETA_MASS, PI0_MASS};
use ecalsim::detector::ScenarioSet;
use ecalsim::kinfit::{chi2_probability, fit_pi0_mass, FitError, PhotonParameters};
use proptest::prelude::*;

#[test]
fn converged_fits_hit_the_target_mass() {
    let s = ScenarioSet::builtin().get("ultra-granular").unwrap().clone();
    let mut rng = common::rng(1);
    let mut n_conv = 0;
    for k in 0..20_000 {
        let e = [1.0, 2.0, 5.0, 10.0, 20.0][k % 5];
        let (a, b) = common::smeared_pi0(e, &s, &mut rng);
        let p = PhotonParameters::from_photons(&a, &b);
        let Ok(fit) = fit_pi0_mass(&p, PI0_MASS) else { continue };
        assert!(fit.chi2 >= 0.0);
        if fit.converged {
            n_conv += 1;
            assert!((fit.fitted_pi0.mass() - PI0_MASS).abs() < 1e-4, "m = {}", fit.fitted_pi0.mass());
            assert!(fit.n_iter <= 20);
            let refit = PhotonParameters::new(fit.alpha_fit, p.variance);
            assert!((refit.mass() - PI0_MASS).abs() < 1e-4);
        }
    }
    assert!(n_conv > 19_000, "{n_conv}");
}

/// Smaller version of the acceptance closure, on π⁰s of 20 GeV.
#[test]
fn pull_and_chi2_closure() {
    let s = ScenarioSet::builtin().get("ultra-granular").unwrap().clone();
    let mut rng = common::rng(2);
    let mut pulls: Vec<Vec<f64>> = vec![Vec::new(); 6];
    let mut chi2 = Vec::new();
    while chi2.len() < 20_000 {
        let (a, b) = common::smeared_pi0(20.0, &s, &mut rng);
        let fit = fit_pi0_mass(&PhotonParameters::from_photons(&a, &b), PI0_MASS).unwrap();
        if !fit.converged {
            continue;
        }
        for (i, p) in fit.pulls.iter().enumerate() {
            pulls[i].push(*p);
        }
        chi2.push(fit.chi2);
    }
    for (i, p) in pulls.iter().enumerate() {
        let (m, w) = common::mean_std(p);
        assert!(m.abs() < 0.04, "pull {i} mean {m}");
        assert!((w - 1.0).abs() < 0.05, "pull {i} width {w}");
    }
    let (m, _) = common::mean_std(&chi2);
    assert!((m - 1.0).abs() < 0.05, "chi2 mean {m}");
    let tail = chi2.iter().filter(|&&c| c > 3.841).count() as f64 / chi2.len() as f64;
    assert!((tail - 0.05).abs() < 0.006, "tail {tail}");
}

#[test]
fn eta_pairs_fit_to_the_eta_mass() {
    let mut s = ScenarioSet::builtin().get("ultra-granular").unwrap().clone();
    s.ecal_stochastic = 0.05;
    let mut rng = common::rng(3);
    for _ in 0..200 {
        let (a, b) = common::smeared_pi0(10.0, &s, &mut rng);
        let fit = fit_pi0_mass(&PhotonParameters::from_photons(&a, &b), ETA_MASS).unwrap();
        if fit.converged {
            assert!((fit.fitted_pi0.mass() - ETA_MASS).abs() < 1e-4);
        }
    }
}

#[test]
fn chi2_probability_values() {
    assert_eq!(chi2_probability(0.0).unwrap(), 1.0);
    assert!((chi2_probability(3.841).unwrap() - 0.050).abs() < 1e-3);
    assert!((chi2_probability(1.0).unwrap() - 0.3173).abs() < 1e-3);
    assert!(matches!(chi2_probability(-0.5), Err(FitError::NegativeChi2(_))));
}

#[test]
fn invalid_inputs() {
    let v = [1e-3, 1e-6, 1e-6, 1e-3, 1e-6, 1e-6];
    let bad_energy = PhotonParameters::new([-1.0, 1.0, 0.0, 1.0, 1.1, 0.0], v);
    assert!(matches!(fit_pi0_mass(&bad_energy, PI0_MASS), Err(FitError::Input(_))));
    let collinear = PhotonParameters::new([1.0, 1.0, 0.0, 1.0, 1.0, 0.0], v);
    assert!(matches!(fit_pi0_mass(&collinear, PI0_MASS), Err(FitError::Input(_))));
    let zero_var = PhotonParameters::new([1.0, 1.0, 0.0, 1.0, 1.1, 0.0], [0.0; 6]);
    assert!(matches!(fit_pi0_mass(&zero_var, PI0_MASS), Err(FitError::Input(_))));
}

fn params() -> impl Strategy<Value = PhotonParameters> {
    (0.5..30.0f64, 0.5..30.0f64, 0.3..2.8f64, -3.0..3.0f64, 0.002..0.2f64, 0.0..6.28f64).prop_map(
        |(e1, e2, th, ph, psi, rot)| {
            // second photon at opening angle psi around the first
            let th2 = th + psi * rot.cos();
            let ph2 = ph + psi * rot.sin() / th.sin();
            let var = |e: f64| [(0.16 * e.sqrt()).powi(2), 1e-7, 1e-7 / th.sin().powi(2)];
            let (v1, v2) = (var(e1), var(e2));
            PhotonParameters::new([e1, th, ph, e2, th2, ph2], [v1[0], v1[1], v1[2], v2[0], v2[1], v2[2]])
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn swap_symmetry(p in params()) {
        let a = fit_pi0_mass(&p, PI0_MASS);
        let b = fit_pi0_mass(&p.swapped(), PI0_MASS);
        match (a, b) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.converged, b.converged);
                prop_assert!((a.chi2 - b.chi2).abs() <= 1e-9 * (1.0 + a.chi2));
                for i in 0..3 {
                    let scale = 1.0 + a.alpha_fit[i].abs();
                    prop_assert!((a.alpha_fit[i] - b.alpha_fit[i + 3]).abs() < 1e-9 * scale);
                    prop_assert!((a.alpha_fit[i + 3] - b.alpha_fit[i]).abs() < 1e-9 * scale);
                }
            }
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "asymmetric outcome {:?} / {:?}", a, b),
        }
    }

    #[test]
    fn chi2_non_negative_and_pulls_consistent(p in params()) {
        if let Ok(fit) = fit_pi0_mass(&p, PI0_MASS) {
            prop_assert!(fit.chi2 >= 0.0);
            if fit.converged {
                let root = fit.chi2.sqrt();
                for q in fit.pulls {
                    prop_assert!((q.abs() - root).abs() < 1e-6 * (1.0 + root));
                }
            }
        }
    }
}
