//! Built-in figure scenarios. The parameter sets are representative choices
//! covering each figure's model, antenna setup and noise shapes; they are not
//! read off the original plots.

use aber_core::config::{FadingConfig, FitChoice, MimoSection, NoiseSection, ScenarioConfig, SnrRange};

pub const NAMES: [&str; 6] = ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6"];

pub const NOTE: &str = "representative parameter set; the original figure values are printed on the plots and are not reproduced verbatim";

pub struct Curve {
    pub label: String,
    pub config: ScenarioConfig,
}

fn eta_mu(eta: f64, mu: f64) -> FadingConfig {
    FadingConfig { model: "eta-mu".into(), format: Some(1), eta: Some(eta), mu: Some(mu), ..Default::default() }
}

fn kms(kappa: f64, mu: f64, m: f64) -> FadingConfig {
    FadingConfig { model: "kappa-mu-shadowed".into(), kappa: Some(kappa), mu: Some(mu), m: Some(m), ..Default::default() }
}

fn named(model: &str) -> FadingConfig {
    FadingConfig { model: model.into(), ..Default::default() }
}

fn curve(label: &str, fading: FadingConfig, nt: u32, modulation: &str, a: f64) -> Curve {
    Curve {
        label: label.to_string(),
        config: ScenarioConfig {
            fading,
            mimo: MimoSection { nt, nr: nt },
            noise: NoiseSection { a, fit: FitChoice::Table },
            modulation: modulation.to_string(),
            snr_db: SnrRange { start: 0.0, step: 2.0, stop: 30.0 },
        },
    }
}

fn eta_mu_family(n: u32) -> Vec<Curve> {
    vec![
        curve("eta0.5_mu1_bpsk_a2", eta_mu(0.5, 1.0), n, "bpsk", 2.0),
        curve("eta0.5_mu2_bpsk_a2", eta_mu(0.5, 2.0), n, "bpsk", 2.0),
        curve("eta0.1_mu1_qpsk_a1", eta_mu(0.1, 1.0), n, "qpsk", 1.0),
        curve("eta0.9_mu1_16qam_a2.5", eta_mu(0.9, 1.0), n, "16qam", 2.5),
        curve("eta0.5_mu1_8psk_a0.5", eta_mu(0.5, 1.0), n, "8psk", 0.5),
    ]
}

fn kms_family(n: u32) -> Vec<Curve> {
    vec![
        curve("k2_mu2_m1_bpsk_a2", kms(2.0, 2.0, 1.0), n, "bpsk", 2.0),
        curve("k2_mu2_m5_bpsk_a2", kms(2.0, 2.0, 5.0), n, "bpsk", 2.0),
        curve("k5_mu2_m5_qpsk_a1.5", kms(5.0, 2.0, 5.0), n, "qpsk", 1.5),
        curve("k2_mu4_m1_16qam_a1", kms(2.0, 4.0, 1.0), n, "16qam", 1.0),
        curve("k0_mu1_m1_4pam_a2.5", kms(0.0, 1.0, 1.0), n, "4pam", 2.5),
    ]
}

/// Curves of a preset, or `None` for an unknown name.
pub fn preset(name: &str) -> Option<Vec<Curve>> {
    let curves = match name {
        "fig1" => eta_mu_family(2),
        "fig2" => eta_mu_family(1),
        "fig3" => kms_family(2),
        "fig4" => kms_family(1),
        "fig5" => vec![
            curve("rayleigh", named("rayleigh"), 1, "bpsk", 2.0),
            curve("one_sided_gaussian", named("one-sided-gaussian"), 1, "bpsk", 2.0),
            curve("nakagami_m2", FadingConfig { m: Some(2.0), ..named("nakagami-m") }, 1, "bpsk", 2.0),
            curve("rician_k5", FadingConfig { k: Some(5.0), ..named("rician") }, 1, "bpsk", 2.0),
            curve("hoyt_q0.5", FadingConfig { q: Some(0.5), ..named("hoyt") }, 1, "bpsk", 2.0),
        ],
        "fig6" => vec![
            curve("kappa_mu_k1_mu2", FadingConfig { kappa: Some(1.0), mu: Some(2.0), ..named("kappa-mu") }, 1, "bpsk", 2.0),
            curve(
                "rician_shadowed_k5_m2",
                FadingConfig { k: Some(5.0), m: Some(2.0), ..named("rician-shadowed") },
                1,
                "bpsk",
                2.0,
            ),
            curve("eta_mu_eta0.5_mu1", eta_mu(0.5, 1.0), 1, "bpsk", 2.0),
            curve("eta_mu_eta0.1_mu2", eta_mu(0.1, 2.0), 1, "bpsk", 2.0),
        ],
        _ => return None,
    };
    Some(curves)
}
