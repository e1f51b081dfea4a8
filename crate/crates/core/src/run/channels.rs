use super::{num, Channel, Resolved, RunError};
use crate::analysis::{
    bs_b0_separation, make_pi0, scale_yield, select_ds_pi, select_kstar_gamma, select_pi0pi0, single_pi0_study,
};
use crate::constants::{self, B0, BS};
use crate::detector::{reconstruct_event, DetectorScenario, RecoEvent};
use crate::evtgen::{chains, generate_event, generate_signal_event, Event};
use crate::parallel::map_indexed;
use crate::report::{core_width, Histogram, Layout, PeakFit, PlotSpec, RunReport, Section};
use crate::rng::{stream, EventRng, Stage};

/// Offset between the event ids of the samples of one run.
const SAMPLE_STRIDE: u64 = 1 << 40;
const UNCONVERGED_WARNING: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub name: String,
    pub label: String,
    pub histogram: Histogram,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisOutput {
    pub channel: Channel,
    pub components: Vec<Component>,
    /// Sum of all components.
    pub spectrum: Histogram,
    pub report: RunReport,
    pub plot: PlotSpec,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Cand {
    mass: f64,
    signal: bool,
    fake: bool,
}

#[derive(Debug, Default)]
struct EventSummary {
    cands: Vec<Cand>,
    /// Same selection with the π⁰ fit switched off.
    nofit: Vec<Cand>,
    fit_attempts: u64,
    fit_failures: u64,
}

struct SampleSummary {
    name: String,
    n_generated: u64,
    events: Vec<EventSummary>,
}

impl SampleSummary {
    fn candidates(&self) -> impl Iterator<Item = &Cand> {
        self.events.iter().flat_map(|e| e.cands.iter())
    }

    fn n_events_pass(&self) -> u64 {
        self.events.iter().filter(|e| !e.cands.is_empty()).count() as u64
    }

    fn n_events_matched(&self) -> u64 {
        self.events.iter().filter(|e| e.cands.iter().any(|c| c.signal)).count() as u64
    }

    fn peak(&self, nofit: bool) -> Option<PeakFit> {
        let v: Vec<f64> = self
            .events
            .iter()
            .flat_map(|e| if nofit { e.nofit.iter() } else { e.cands.iter() })
            .filter(|c| c.signal)
            .map(|c| c.mass)
            .collect();
        core_width(&v).ok()
    }
}

fn fit_diagnostics(reco: &RecoEvent, r: &Resolved) -> (u64, u64) {
    if !r.scenario.pi0_mass_fit_enabled {
        return (0, 0);
    }
    let (mut attempts, mut failures) = (0, 0);
    let g = &reco.photons;
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            if !r.cuts.common.pi0_window.contains((g[i].p4() + g[j].p4()).mass()) {
                continue;
            }
            attempts += 1;
            if make_pi0(g, i, j, true, &r.cuts.common).is_none() {
                failures += 1;
            }
        }
    }
    (attempts, failures)
}

fn without_fit(s: &DetectorScenario) -> DetectorScenario {
    let mut s = s.clone();
    s.pi0_mass_fit_enabled = false;
    s
}

fn select(channel: Channel, event: &Event, reco: &RecoEvent, r: &Resolved, ana: &mut EventRng) -> EventSummary {
    let nofit_scenario = without_fit(&r.scenario);
    let mut out = EventSummary::default();
    match channel {
        Channel::DsPi => {
            let conv = |c: &crate::analysis::DsPiCandidate| Cand { mass: c.m_b, signal: c.is_signal(event), fake: false };
            out.cands = select_ds_pi(reco, &r.scenario, &r.cuts).iter().map(conv).collect();
            if r.scenario.pi0_mass_fit_enabled {
                out.nofit = select_ds_pi(reco, &nofit_scenario, &r.cuts).iter().map(conv).collect();
            }
        }
        Channel::Pi0pi0 => {
            let conv = |c: &crate::analysis::Pi0Pi0Candidate| Cand {
                mass: c.mass,
                signal: c.is_signal(event),
                fake: c.has_fake_photon(),
            };
            let mut tag_rng = ana.clone();
            out.cands = select_pi0pi0(reco, event.primary_flavour, &r.scenario, &r.cuts, ana).iter().map(conv).collect();
            if r.scenario.pi0_mass_fit_enabled {
                out.nofit = select_pi0pi0(reco, event.primary_flavour, &nofit_scenario, &r.cuts, &mut tag_rng)
                    .iter()
                    .map(conv)
                    .collect();
            }
        }
        Channel::KstarGamma => {
            out.cands = select_kstar_gamma(reco, &r.scenario, &r.cuts, ana)
                .iter()
                .map(|c| Cand { mass: c.mass, signal: c.is_signal(event), fake: false })
                .collect();
        }
        Channel::SinglePi0 => unreachable!("single π⁰ study has its own path"),
    }
    let (a, f) = fit_diagnostics(reco, r);
    out.fit_attempts = a;
    out.fit_failures = f;
    out
}

fn process_event(channel: Channel, event: &Event, r: &Resolved) -> EventSummary {
    let mut det = stream(event.seed, Stage::Detector);
    let mut ana = stream(event.seed, Stage::Analysis);
    let reco = reconstruct_event(event, &r.scenario, &mut det);
    select(channel, event, &reco, r, &mut ana)
}

fn signal_sample(
    channel: Channel,
    r: &Resolved,
    name: &str,
    chain: &str,
    index: u64,
) -> Result<SampleSummary, RunError> {
    let chain_def = chains::by_name(chain).ok_or_else(|| RunError::Config(format!("unknown chain {chain}")))?;
    let n = r.run.n_events;
    let events = map_indexed(n, |i| {
        let ev = generate_signal_event(&r.generator, r.run.master_seed, index * SAMPLE_STRIDE + i, &chain_def)?;
        Ok(process_event(channel, &ev, r))
    })
    .into_iter()
    .collect::<Result<Vec<_>, crate::evtgen::EvtGenError>>()
    .map_err(|e| RunError::Data(e.to_string()))?;
    Ok(SampleSummary { name: name.into(), n_generated: n, events })
}

fn background_sample(channel: Channel, r: &Resolved, external: Option<&[Event]>) -> Result<SampleSummary, RunError> {
    let events = match external {
        Some(evs) => map_indexed(evs.len() as u64, |i| process_event(channel, &evs[i as usize], r)),
        None => map_indexed(r.run.n_background, |i| {
            generate_event(&r.generator, r.run.master_seed, 3 * SAMPLE_STRIDE + i).map(|ev| process_event(channel, &ev, r))
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| RunError::Data(e.to_string()))?,
    };
    Ok(SampleSummary { name: "background".into(), n_generated: events.len() as u64, events })
}

fn histogram_of(sample: &SampleSummary, n_bins: usize, lo: f64, hi: f64) -> Result<Histogram, RunError> {
    let mut h = Histogram::new(n_bins, lo, hi).map_err(|e| RunError::Data(e.to_string()))?;
    for c in sample.candidates() {
        h.fill(c.mass).map_err(|e| RunError::Data(e.to_string()))?;
    }
    Ok(h)
}

fn peak_entries(s: &mut Section, prefix: &str, peak: Option<PeakFit>) {
    match peak {
        Some(p) => {
            s.push(format!("{prefix}.peak_mean"), num(p.mean)).push(format!("{prefix}.peak_sigma"), num(p.sigma));
        }
        None => {
            s.push(format!("{prefix}.peak_mean"), "n/a").push(format!("{prefix}.peak_sigma"), "n/a");
        }
    }
}

fn sample_entries(s: &mut Section, sample: &SampleSummary) {
    let p = &sample.name;
    let n_cands = sample.candidates().count();
    s.push(format!("{p}.n_generated"), sample.n_generated)
        .push(format!("{p}.n_events_pass"), sample.n_events_pass())
        .push(format!("{p}.n_candidates"), n_cands);
}

fn signal_entries(s: &mut Section, sample: &SampleSummary, fit: bool) -> f64 {
    sample_entries(s, sample);
    let p = &sample.name;
    let matched = sample.n_events_matched();
    let eff = matched as f64 / sample.n_generated as f64;
    s.push(format!("{p}.n_events_matched"), matched).push(format!("{p}.efficiency"), num(eff));
    peak_entries(s, p, sample.peak(false));
    if fit {
        peak_entries(s, &format!("{p}.nofit"), sample.peak(true));
    }
    eff
}

fn header(r: &Resolved) -> Vec<Section> {
    let mut run = Section::new("run");
    run.push("channel", r.run.channel)
        .push("scenario", &r.scenario.name)
        .push("master_seed", r.run.master_seed)
        .push("n_events", r.run.n_events)
        .push(
            "n_background",
            match &r.run.event_file {
                Some(p) => format!("from {}", p.file_name().and_then(|f| f.to_str()).unwrap_or("event file")),
                None => r.run.n_background.to_string(),
            },
        )
        .push("n_z", num(r.run.n_z));
    let s = &r.scenario;
    let mut sc = Section::new("scenario");
    sc.push("name", &s.name)
        .push("ecal_stochastic", num(s.ecal_stochastic))
        .push("ecal_constant", num(s.ecal_constant))
        .push("pos_res_stochastic", num(s.pos_res_stochastic))
        .push("pos_res_constant", num(s.pos_res_constant))
        .push("ecal_radius", num(s.ecal_radius))
        .push("photon_threshold", num(s.photon_threshold))
        .push("fake_rate", num(s.fake_rate))
        .push("fake_energy_mean", num(s.fake_energy_mean))
        .push("merge_distance", num(s.merge_distance))
        .push("pi0_mass_fit_enabled", s.pi0_mass_fit_enabled)
        .push("gamma_pi0_sep_max_energy", num(s.gamma_pi0_sep_max_energy))
        .push("gamma_id_efficiency", num(s.gamma_id_efficiency))
        .push("track_pt_res", num(s.track_pt_res))
        .push("vertex_res", num(s.vertex_res));
    vec![run, sc, r.cuts.report_section()]
}

fn warnings(samples: &[&SampleSummary]) -> Section {
    let mut w = Section::new("warnings");
    let (a, f) = samples
        .iter()
        .flat_map(|s| s.events.iter())
        .fold((0u64, 0u64), |(a, f), e| (a + e.fit_attempts, f + e.fit_failures));
    w.push("fit_attempts", a).push("fit_unconverged", f);
    if a > 0 && f as f64 / a as f64 > UNCONVERGED_WARNING {
        w.push("warning", format!("{} of {a} π⁰ fits did not converge", f));
    }
    w
}

fn yield_of(r: &Resolved, matched: u64, n: u64, chain: &str, species: i32) -> Result<f64, RunError> {
    let br = chains::nominal_branching(chain).unwrap_or(0.0);
    scale_yield(matched, n, br, r.generator.r_b, r.generator.species_fraction(species), r.run.n_z)
        .map_err(|e| RunError::Data(e.to_string()))
}

fn assemble(
    r: &Resolved,
    components: Vec<Component>,
    results: Section,
    warn: Section,
    plot: PlotSpec,
) -> Result<AnalysisOutput, RunError> {
    let mut spectrum = components[0].histogram.clone();
    for c in &components[1..] {
        spectrum.merge(&c.histogram).map_err(|e| RunError::Data(e.to_string()))?;
    }
    let mut sections = header(r);
    let mut ps = Section::new("plot");
    ps.push("x_label", &plot.x_label);
    sections.push(ps);
    sections.push(results);
    sections.push(warn);
    Ok(AnalysisOutput { channel: r.run.channel, components, spectrum, report: RunReport { sections }, plot })
}

/// Runs the channel configured in `r`. Background events come from
/// `external` when given, otherwise they are generated.
pub fn analyze(r: &Resolved, external: Option<&[Event]>) -> Result<AnalysisOutput, RunError> {
    let channel = r.run.channel;
    let fit = r.scenario.pi0_mass_fit_enabled;
    let want_bkg = external.is_some() || r.run.n_background > 0;
    match channel {
        Channel::DsPi => {
            let bs = signal_sample(channel, r, "bs", "bs_dspi", 0)?;
            let b0 = signal_sample(channel, r, "b0", "b0_dspi", 1)?;
            let bkg = if want_bkg { Some(background_sample(channel, r, external)?) } else { None };
            let mut res = Section::new("results");
            signal_entries(&mut res, &bs, fit);
            signal_entries(&mut res, &b0, fit);
            if let Some(b) = &bkg {
                sample_entries(&mut res, b);
            }
            let delta_m = constants::mass(BS).unwrap_or(0.0) - constants::mass(B0).unwrap_or(0.0);
            res.push("delta_m", num(delta_m));
            let sep = |nofit: bool| match (bs.peak(nofit), b0.peak(nofit)) {
                (Some(a), Some(b)) => bs_b0_separation(a.sigma, b.sigma, delta_m).map(num).unwrap_or("n/a".into()),
                _ => "n/a".into(),
            };
            res.push("separation", sep(false));
            if fit {
                res.push("nofit.separation", sep(true));
            }
            res.push("scaled_yield.bs", num(yield_of(r, bs.n_events_matched(), bs.n_generated, "bs_dspi", BS)?));
            res.push("scaled_yield.b0", num(yield_of(r, b0.n_events_matched(), b0.n_generated, "b0_dspi", B0)?));
            let (lo, hi, nb) = (4.9, 5.8, 90);
            let mut comps = vec![
                Component { name: "bs".into(), label: "Bs → Ds π".into(), histogram: histogram_of(&bs, nb, lo, hi)? },
                Component { name: "b0".into(), label: "B0 → Ds π".into(), histogram: histogram_of(&b0, nb, lo, hi)? },
            ];
            if let Some(b) = &bkg {
                comps.push(Component { name: "background".into(), label: "Z → bb̄, cc̄".into(), histogram: histogram_of(b, nb, lo, hi)? });
            }
            let mut all = vec![&bs, &b0];
            all.extend(bkg.as_ref());
            let warn = warnings(&all);
            let plot = PlotSpec {
                title: format!("m(Ds π), {}", r.scenario.name),
                x_label: "m(Ds π) [GeV]".into(),
                y_label: "candidates".into(),
                layout: Layout::Overlay,
            };
            assemble(r, comps, res, warn, plot)
        }
        Channel::Pi0pi0 | Channel::KstarGamma => {
            let (chain, title) = if channel == Channel::Pi0pi0 {
                ("b0_pi0pi0", "m(π⁰π⁰)")
            } else {
                ("b0_kstargamma", "m(K π γ)")
            };
            let sig = signal_sample(channel, r, "signal", chain, 0)?;
            let bkg = if want_bkg { Some(background_sample(channel, r, external)?) } else { None };
            let mut res = Section::new("results");
            signal_entries(&mut res, &sig, fit && channel == Channel::Pi0pi0);
            if let Some(b) = &bkg {
                sample_entries(&mut res, b);
            }
            if channel == Channel::Pi0pi0 {
                let fakes = sig.candidates().chain(bkg.iter().flat_map(|b| b.candidates())).filter(|c| c.fake).count();
                res.push("n_fake_candidates", fakes);
            }
            res.push("scaled_yield", num(yield_of(r, sig.n_events_matched(), sig.n_generated, chain, B0)?));
            let (lo, hi, nb) = (4.0, 6.0, 50);
            let mut comps =
                vec![Component { name: "signal".into(), label: "signal".into(), histogram: histogram_of(&sig, nb, lo, hi)? }];
            if let Some(b) = &bkg {
                comps.push(Component { name: "background".into(), label: "Z → bb̄, cc̄".into(), histogram: histogram_of(b, nb, lo, hi)? });
            }
            let mut all = vec![&sig];
            all.extend(bkg.as_ref());
            let warn = warnings(&all);
            let plot = PlotSpec {
                title: format!("{title}, {}", r.scenario.name),
                x_label: format!("{title} [GeV]"),
                y_label: "candidates".into(),
                layout: Layout::Overlay,
            };
            assemble(r, comps, res, warn, plot)
        }
        Channel::SinglePi0 => {
            let bins = single_pi0_study(
                &r.generator.decays,
                &r.scenario,
                &r.cuts.common,
                &r.run.pi0_energies,
                r.run.n_events,
                r.run.master_seed,
            )
            .map_err(|e| RunError::Data(e.to_string()))?;
            let mut res = Section::new("results");
            let mut raw_h = Histogram::new(120, -0.3, 0.3).map_err(|e| RunError::Data(e.to_string()))?;
            let mut fit_h = raw_h.clone();
            let (mut attempts, mut failures) = (0, 0);
            for b in &bins {
                let p = format!("E{}", num(b.energy));
                res.push(format!("{p}.n_reconstructed"), b.n_reconstructed)
                    .push(format!("{p}.n_unconverged"), b.n_unconverged)
                    .push(format!("{p}.raw_resolution"), num(b.raw.sigma))
                    .push(format!("{p}.fit_resolution"), num(b.fitted.sigma))
                    .push(format!("{p}.nominal_resolution"), num(r.scenario.relative_energy_resolution(b.energy)));
                for &x in &b.raw_residuals {
                    raw_h.fill(x).map_err(|e| RunError::Data(e.to_string()))?;
                }
                for &x in &b.fitted_residuals {
                    fit_h.fill(x).map_err(|e| RunError::Data(e.to_string()))?;
                }
                attempts += b.n_reconstructed;
                failures += b.n_unconverged;
            }
            let mut warn = Section::new("warnings");
            warn.push("fit_attempts", attempts).push("fit_unconverged", failures);
            if attempts > 0 && failures as f64 / attempts as f64 > UNCONVERGED_WARNING {
                warn.push("warning", format!("{failures} of {attempts} π⁰ fits did not converge"));
            }
            let comps = vec![
                Component { name: "raw".into(), label: "γγ energy".into(), histogram: raw_h },
                Component { name: "fit".into(), label: "1C fit".into(), histogram: fit_h },
            ];
            let plot = PlotSpec {
                title: format!("π⁰ energy residuals, {}", r.scenario.name),
                x_label: "(E − E_true)/E_true".into(),
                y_label: "π⁰".into(),
                layout: Layout::Overlay,
            };
            assemble(r, comps, res, warn, plot)
        }
    }
}
