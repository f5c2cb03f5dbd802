//! Ready-made scenarios for the standard experiments.

use anyhow::{bail, Result};

use crate::config::{
    ChannelSpec, DriveSpec, GeometrySpec, IntegrationSpec, Kind, ObservableSpec, OutputSpec, PolarizationSpec,
    RamseySpec, Scenario, SchemeSpec, SitesSpec, StateSpec, Term, ZeemanSpec,
};

pub const PRESETS: [&str; 6] = ["fig3b", "fig3c", "fig3d", "figS1-strong", "figS1-weak", "zeno-sweep"];

fn fock(a: &str, b: &str) -> StateSpec {
    StateSpec::Fock { modes: [a.into(), b.into()] }
}

fn each(s: StateSpec) -> SitesSpec {
    SitesSpec::Each(s)
}

fn channel(name: &str, observable: ObservableSpec) -> ChannelSpec {
    ChannelSpec { name: name.into(), observable }
}

fn population(name: &str, s: StateSpec) -> ChannelSpec {
    channel(name, ObservableSpec::State { state: each(s) })
}

fn named(p: &str) -> PolarizationSpec {
    PolarizationSpec::Named(p.into())
}

fn scheme(g: &str, e: &str) -> SchemeSpec {
    SchemeSpec { f_g: g.into(), f_e: e.into() }
}

fn drive(f_s: &str, sg: &str, se: &str, omega: f64, initial: StateSpec, target: StateSpec) -> DriveSpec {
    DriveSpec {
        f_s: f_s.into(),
        eps_sg: named(sg),
        eps_se: named(se),
        omega_eff: omega,
        omega_eff_sweep: None,
        initial: each(initial),
        target: Some(each(target)),
        validity: None,
    }
}

fn integration(t_end: Option<f64>, dt: f64, sample_every: usize, threads: usize) -> IntegrationSpec {
    IntegrationSpec { t_end, dt, sample_every, threads }
}

fn base(kind: Kind, scheme: SchemeSpec, name: &str) -> Scenario {
    Scenario {
        kind,
        scheme,
        geometry: GeometrySpec::SingleSite,
        verify: None,
        enumerate: None,
        drive: None,
        zeeman: None,
        ramsey: None,
        channels: Vec::new(),
        integration: None,
        output: OutputSpec { directory: name.into(), precision: 12 },
    }
}

/// Channels for the F = 1/2 Raman runs.
fn half_channels() -> Vec<ChannelSpec> {
    let bright = StateSpec::Superposition {
        terms: vec![
            Term { re: 1.0, im: 0.0, state: fock("g-1/2", "e+1/2") },
            Term { re: 1.0, im: 0.0, state: fock("g+1/2", "e-1/2") },
        ],
    };
    vec![
        population("dark", StateSpec::DarkEqualF),
        population("ground", fock("g-1/2", "g+1/2")),
        population("S", bright),
        population("ee", fock("e-1/2", "e+1/2")),
    ]
}

fn figs1(name: &str, omega: f64, t_end: f64, dt: f64, sample_every: usize) -> Scenario {
    let mut s = base(Kind::RamanDrive, scheme("1/2", "3/2"), name);
    s.drive = Some(drive(
        "3/2",
        "+",
        "z",
        omega,
        fock("g-1/2", "g+1/2"),
        StateSpec::DarkFPlusOne { m: "1".into() },
    ));
    let b1 = StateSpec::Superposition {
        terms: vec![
            Term { re: 0.5, im: 0.0, state: fock("g+1/2", "e+1/2") },
            Term { re: -(3f64.sqrt()) / 2.0, im: 0.0, state: fock("g-1/2", "e+3/2") },
        ],
    };
    s.channels = vec![
        population("ground", fock("g-1/2", "g+1/2")),
        population("D+1", StateSpec::DarkFPlusOne { m: "1".into() }),
        population("D+2", StateSpec::DarkFPlusOne { m: "2".into() }),
        population("B+1", b1),
        population("ee", fock("e+1/2", "e+3/2")),
        channel("nondark", ObservableSpec::Nondark),
    ];
    s.integration = Some(integration(Some(t_end), dt, sample_every, 1));
    s
}

pub fn preset(name: &str) -> Result<Scenario> {
    let s = match name {
        "fig3b" => {
            let mut s = base(Kind::RamanDrive, scheme("1/2", "1/2"), name);
            s.drive = Some(drive("1/2", "z", "z", 0.03, fock("g-1/2", "g+1/2"), StateSpec::DarkEqualF));
            s.channels = half_channels();
            s.integration = Some(integration(Some(500.0), 0.04, 25, 1));
            s
        }
        "fig3c" => {
            let mut s = base(Kind::RamanDrive, scheme("9/2", "9/2"), name);
            let g = fock("g-9/2", "g+9/2");
            s.drive = Some(drive("9/2", "z", "z", 0.001, g.clone(), StateSpec::DarkEqualF));
            s.channels = vec![
                population("dark", StateSpec::DarkEqualF),
                population("ground", g.clone()),
                channel("ground_other", ObservableSpec::GroundManifold { exclude: vec![each(g)] }),
                channel("excitations", ObservableSpec::Excitations),
            ];
            s.integration = Some(integration(Some(100.0), 0.01, 100, 1));
            s
        }
        "fig3d" => {
            let mut s = base(Kind::Ramsey, scheme("1/2", "1/2"), name);
            s.drive = Some(drive("1/2", "z", "z", 0.03, fock("g-1/2", "g+1/2"), StateSpec::DarkEqualF));
            s.zeeman = Some(ZeemanSpec { delta_z: 0.0, ground_slope: 0.0, excited_slope: 1.0 });
            s.ramsey = Some(RamseySpec {
                delta_z: vec![0.0, 0.004, 0.008, 0.016, 0.032],
                free_time: 400.0,
                fit_skip: 20.0,
                zeeman_during_pulses: false,
            });
            s.channels = half_channels().into_iter().skip(1).collect();
            s.integration = Some(integration(None, 0.04, 10, 0));
            s
        }
        "figS1-strong" => figs1(name, 1.0, 20.0, 0.005, 20),
        "figS1-weak" => figs1(name, 0.01, 2000.0, 0.04, 250),
        "zeno-sweep" => {
            let mut s = base(Kind::RamanDrive, scheme("1/2", "1/2"), name);
            let mut d = drive("1/2", "z", "z", 0.1, fock("g-1/2", "g+1/2"), StateSpec::DarkEqualF);
            d.omega_eff_sweep = Some(vec![0.1, 0.03, 0.01]);
            s.drive = Some(d);
            s.channels = vec![
                population("dark", StateSpec::DarkEqualF),
                population("ground", fock("g-1/2", "g+1/2")),
                channel("nondark", ObservableSpec::Nondark),
                channel("emission", ObservableSpec::EmissionRate),
            ];
            s.integration = Some(integration(Some(700.0), 0.04, 25, 0));
            s
        }
        other => bail!("unknown preset {other:?}; available: {}", PRESETS.join(", ")),
    };
    Ok(s)
}
