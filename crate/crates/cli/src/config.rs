//! Scenario schema. Every block rejects unknown keys.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    VerifyDark,
    EnumerateDark,
    RamanDrive,
    Ramsey,
    GreensTable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub kind: Kind,
    pub scheme: SchemeSpec,
    #[serde(default)]
    pub geometry: GeometrySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enumerate: Option<EnumerateSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drive: Option<DriveSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeeman: Option<ZeemanSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ramsey: Option<RamseySpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub channels: Vec<ChannelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integration: Option<IntegrationSpec>,
    #[serde(default)]
    pub output: OutputSpec,
}

/// Angular momenta as exact strings such as "9/2".
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSpec {
    pub f_g: String,
    pub f_e: String,
}

/// Site positions in units of 1/k0.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeometrySpec {
    #[default]
    SingleSite,
    Positions(Vec<[f64; 3]>),
    Lattice { constant: f64, dims: [usize; 3] },
    Random { sites: usize, side: f64, min_separation: f64, seed: u64 },
}

/// A single-site state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StateSpec {
    Fock { modes: [String; 2] },
    DarkEqualF,
    DarkFPlusOne { m: String },
    /// Σ (re + i im) |state⟩, normalized after summation.
    Superposition { terms: Vec<Term> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
    pub state: StateSpec,
}

/// A composite state: the same factor on every site or one factor per site.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum SitesSpec {
    Each(StateSpec),
    Product(Vec<StateSpec>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySpec {
    pub state: SitesSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnumerateSpec {
    pub min_excitations: usize,
}

/// Polarization: "z", "+", "-", "x", "y", or three complex components [re, im].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolarizationSpec {
    Named(String),
    Vector([[f64; 2]; 3]),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValiditySpec {
    pub omega_sg: f64,
    pub omega_se: f64,
    pub delta: f64,
    pub gamma_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveSpec {
    pub f_s: String,
    pub eps_sg: PolarizationSpec,
    pub eps_se: PolarizationSpec,
    pub omega_eff: f64,
    /// Runs one evolution per value instead of `omega_eff` and reports the Zeno leak rate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_eff_sweep: Option<Vec<f64>>,
    pub initial: SitesSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<SitesSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validity: Option<ValiditySpec>,
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZeemanSpec {
    #[serde(default)]
    pub delta_z: f64,
    #[serde(default)]
    pub ground_slope: f64,
    #[serde(default = "one")]
    pub excited_slope: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RamseySpec {
    pub delta_z: Vec<f64>,
    pub free_time: f64,
    pub fit_skip: f64,
    #[serde(default)]
    pub zeeman_during_pulses: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    pub name: String,
    pub observable: ObservableSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ObservableSpec {
    /// Population of one state.
    State { state: SitesSpec },
    /// Summed populations of mutually orthogonal states.
    ProjectorSum { states: Vec<SitesSpec> },
    /// Population with no excited atom, minus the listed ground states.
    GroundManifold {
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        exclude: Vec<SitesSpec>,
    },
    /// Population outside the products of single-site dark and ground states.
    Nondark,
    /// Mean number of excited atoms.
    Excitations,
    /// Photon emission rate tr(2Kρ).
    EmissionRate,
    /// ⟨bra|ρ|ket⟩, written as a complex pair.
    Coherence { bra: SitesSpec, ket: SitesSpec },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrationSpec {
    /// Evolution time for raman-drive; ramsey derives its own duration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    pub dt: f64,
    pub sample_every: usize,
    /// 0 uses all cores, 1 runs serially.
    #[serde(default)]
    pub threads: usize,
}

fn default_directory() -> String {
    "out".into()
}

fn default_precision() -> usize {
    12
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_directory")]
    pub directory: String,
    /// Significant digits in CSV output.
    #[serde(default = "default_precision")]
    pub precision: usize,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec { directory: default_directory(), precision: default_precision() }
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }
}
