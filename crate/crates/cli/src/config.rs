//! Run configuration: TOML with bracketed sections, unknown keys rejected.
//! The grammar is described in `docs/config.md`.

use std::path::Path;

use irlab::dollard::{LongRangePotential, PotentialForm};
use irlab::fock::{DirectionSet, GridSpec};
use irlab::nrqed::{ChargeProfile, CouplingVariant, NelsonFiberParams};
use irlab::softphoton::{ChargedLeg, LegDirection, ProcessCurrents, SoftQuadrature};
use serde::{Deserialize, Serialize};

/// Invalid or incomplete configuration; always exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    /// 0 lets the executor choose; never part of the cache key.
    #[serde(default)]
    pub threads: usize,
    pub grid: Option<GridSection>,
    pub model: Option<ModelSection>,
    pub scan: Option<ScanSection>,
    pub dollard: Option<DollardSection>,
    pub yfs: Option<YfsSection>,
    pub output: Option<OutputSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default = "three")]
    pub dimension: usize,
    pub ir_cutoff: f64,
    pub uv_cutoff: f64,
    pub points_per_decade: usize,
    /// `line`, `axes6`, `lebedev14` or `gauss-<polar>x<azimuthal>`.
    pub directions: String,
}

fn three() -> usize {
    3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    /// `scalar`, `transversal` or `transversal-no-a2`.
    pub variant: String,
    pub mass: f64,
    pub coupling: f64,
    /// `electron`, `atom` or `flat`.
    pub profile: String,
    #[serde(default = "one")]
    pub rho0: f64,
    /// Defaults to the grid's UV cutoff.
    pub profile_cutoff: Option<f64>,
    pub max_total: usize,
    pub max_per_mode: usize,
    #[serde(default = "lanczos_tol")]
    pub lanczos_tol: f64,
}

fn one() -> f64 {
    1.0
}

fn lanczos_tol() -> f64 {
    1e-10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    pub momentum: Option<[f64; 3]>,
    pub momenta: Option<Vec<[f64; 3]>>,
    pub lambdas: Option<Vec<f64>>,
    pub times: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DollardSection {
    /// `regularized_coulomb_1d`, `coulomb_3d_radial` or `power_law`.
    pub potential: String,
    pub exponent: Option<f64>,
    pub strength: f64,
    #[serde(default = "one")]
    pub regulator: f64,
    #[serde(default = "one")]
    pub mass: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub dx: f64,
    #[serde(default = "dollard_dt")]
    pub dt: f64,
    pub center: f64,
    pub width: f64,
    pub momentum: f64,
    pub times: Vec<f64>,
    /// Exponent of a short-range power law run alongside as a control.
    pub control_exponent: Option<f64>,
    #[serde(default)]
    pub s_wave: bool,
    #[serde(default = "mass_loss")]
    pub max_mass_loss: f64,
}

fn dollard_dt() -> f64 {
    5e-3
}

fn mass_loss() -> f64 {
    1e-3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LegSection {
    pub velocity: [f64; 3],
    pub charge: f64,
    /// `in` or `out`.
    pub direction: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct YfsSection {
    pub legs: Vec<LegSection>,
    #[serde(default = "one")]
    pub sigma0: f64,
    pub uv_cutoff: f64,
    /// Detector resolution E.
    pub resolution: f64,
    #[serde(default)]
    pub lambdas: Vec<f64>,
    #[serde(default = "n_max")]
    pub n_max: usize,
    #[serde(default = "yfs_ppd")]
    pub points_per_decade: usize,
    #[serde(default = "yfs_directions")]
    pub directions: String,
    #[serde(default)]
    pub epsilons: Vec<f64>,
    #[serde(default = "onset")]
    pub onset: f64,
    /// Coupling for the propagator exponent; defaults to the largest |charge|.
    pub coupling: Option<f64>,
}

fn n_max() -> usize {
    60
}

fn yfs_ppd() -> usize {
    4
}

fn yfs_directions() -> String {
    "gauss-24x24".into()
}

fn onset() -> f64 {
    0.1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub directory: Option<String>,
    #[serde(default)]
    pub svg: bool,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
    }

    fn section<'a, T>(s: &'a Option<T>, name: &str) -> Result<&'a T, ConfigError> {
        s.as_ref().ok_or_else(|| ConfigError(format!("missing section [{name}]")))
    }

    pub fn fiber_params(&self) -> Result<NelsonFiberParams, ConfigError> {
        let grid = Self::section(&self.grid, "grid")?;
        let model = Self::section(&self.model, "model")?;
        let variant = match model.variant.as_str() {
            "scalar" => CouplingVariant::Scalar,
            "transversal" => CouplingVariant::Transversal { a_squared: true },
            "transversal-no-a2" => CouplingVariant::Transversal { a_squared: false },
            other => return err(format!("model.variant: unknown variant `{other}`")),
        };
        let cutoff = model.profile_cutoff.unwrap_or(grid.uv_cutoff);
        let profile = match model.profile.as_str() {
            "electron" => ChargeProfile::Electron { rho0: model.rho0, cutoff },
            "atom" => ChargeProfile::Atom { rho0: model.rho0, cutoff },
            "flat" => ChargeProfile::Flat { rho0: model.rho0 },
            other => return err(format!("model.profile: unknown profile `{other}`")),
        };
        let params = NelsonFiberParams {
            mass: model.mass,
            coupling: model.coupling,
            profile,
            variant,
            grid: GridSpec {
                dimension: grid.dimension,
                ir_cutoff: grid.ir_cutoff,
                uv_cutoff: grid.uv_cutoff,
                points_per_decade: grid.points_per_decade,
                directions: parse_directions(&grid.directions, "grid.directions")?,
                polarized: matches!(variant, CouplingVariant::Transversal { .. }),
            },
            max_total: model.max_total,
            max_per_mode: model.max_per_mode,
        };
        params.validate().map_err(|e| ConfigError(format!("[model]/[grid]: {e}")))?;
        if !(model.lanczos_tol > 0.0) {
            return err("model.lanczos_tol must be positive");
        }
        Ok(params)
    }

    pub fn lanczos_tol(&self) -> f64 {
        self.model.as_ref().map_or(1e-10, |m| m.lanczos_tol)
    }

    pub fn scan(&self) -> Result<&ScanSection, ConfigError> {
        Self::section(&self.scan, "scan")
    }

    pub fn momentum(&self) -> Result<[f64; 3], ConfigError> {
        self.scan()?
            .momentum
            .ok_or_else(|| ConfigError("missing key scan.momentum".into()))
    }

    pub fn lambdas(&self) -> Result<Vec<f64>, ConfigError> {
        let l = self
            .scan()?
            .lambdas
            .clone()
            .ok_or_else(|| ConfigError("missing key scan.lambdas".into()))?;
        if l.is_empty() || l.windows(2).any(|w| w[1] >= w[0]) || l.iter().any(|&x| !(x > 0.0)) {
            return err("scan.lambdas must be positive and strictly decreasing");
        }
        Ok(l)
    }

    pub fn times(&self) -> Result<Vec<f64>, ConfigError> {
        let t = self
            .scan()?
            .times
            .clone()
            .ok_or_else(|| ConfigError("missing key scan.times".into()))?;
        check_times(&t, "scan.times")?;
        Ok(t)
    }

    pub fn dollard(&self) -> Result<&DollardSection, ConfigError> {
        let d = Self::section(&self.dollard, "dollard")?;
        check_times(&d.times, "dollard.times")?;
        Ok(d)
    }

    pub fn yfs(&self) -> Result<&YfsSection, ConfigError> {
        let y = Self::section(&self.yfs, "yfs")?;
        if !(y.sigma0 > 0.0 && y.uv_cutoff > 0.0 && y.resolution > 0.0 && y.resolution <= y.uv_cutoff) {
            return err("yfs: need σ0 > 0 and 0 < resolution <= uv_cutoff");
        }
        if y.lambdas.iter().any(|&l| !(l > 0.0 && l < y.resolution)) {
            return err("yfs.lambdas must lie in (0, resolution)");
        }
        if y.epsilons.iter().any(|&e| !(e > 0.0 && e <= 1.0)) {
            return err("yfs.epsilons must lie in (0, 1]");
        }
        Ok(y)
    }

    pub fn process(&self) -> Result<ProcessCurrents, ConfigError> {
        let y = self.yfs()?;
        let legs = y
            .legs
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let direction = match l.direction.as_str() {
                    "in" => LegDirection::In,
                    "out" => LegDirection::Out,
                    other => return err(format!("yfs.legs[{i}].direction: expected `in` or `out`, got `{other}`")),
                };
                ChargedLeg::from_velocity(l.velocity, l.charge, direction)
                    .map_err(|e| ConfigError(format!("yfs.legs[{i}]: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        ProcessCurrents::new(legs, y.sigma0).map_err(|e| ConfigError(format!("[yfs]: {e}")))
    }

    pub fn soft_quadrature(&self) -> Result<SoftQuadrature, ConfigError> {
        let y = self.yfs()?;
        if y.points_per_decade == 0 {
            return err("yfs.points_per_decade must be >= 1");
        }
        Ok(SoftQuadrature {
            points_per_decade: y.points_per_decade,
            directions: parse_directions(&y.directions, "yfs.directions")?,
        })
    }

    /// Content hash of the canonical form, ignoring the thread count and the
    /// output directory, which never change the bytes written.
    pub fn cache_key(&self, command: &str) -> String {
        use sha2::{Digest, Sha256};
        let mut canonical = self.clone();
        canonical.threads = 0;
        canonical.output = None;
        let json = serde_json::to_string(&canonical).expect("config serializes");
        let mut h = Sha256::new();
        h.update(command.as_bytes());
        h.update([0u8]);
        h.update(env!("CARGO_PKG_VERSION").as_bytes());
        h.update([0u8]);
        h.update(json.as_bytes());
        hex::encode(h.finalize())
    }
}

fn check_times(t: &[f64], key: &str) -> Result<(), ConfigError> {
    if t.len() < 2 || t.windows(2).any(|w| w[1] <= w[0]) || t.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
        return err(format!("{key} needs at least two increasing non-negative times"));
    }
    Ok(())
}

pub fn parse_directions(s: &str, key: &str) -> Result<DirectionSet, ConfigError> {
    match s {
        "line" => Ok(DirectionSet::Line),
        "axes6" => Ok(DirectionSet::Axes6),
        "lebedev14" => Ok(DirectionSet::Lebedev14),
        _ => {
            let parsed = s.strip_prefix("gauss-").and_then(|rest| {
                let (p, a) = rest.split_once('x')?;
                Some((p.parse::<usize>().ok()?, a.parse::<usize>().ok()?))
            });
            match parsed {
                Some((polar, azimuthal)) if polar > 0 && azimuthal > 0 => {
                    Ok(DirectionSet::GaussProduct { polar, azimuthal })
                }
                _ => err(format!("{key}: unknown direction set `{s}`")),
            }
        }
    }
}

impl DollardSection {
    pub fn potential(&self) -> Result<LongRangePotential, ConfigError> {
        let form = match self.potential.as_str() {
            "regularized_coulomb_1d" => PotentialForm::RegularizedCoulomb1d,
            "coulomb_3d_radial" => PotentialForm::Coulomb3dRadial,
            "power_law" => PotentialForm::PowerLaw {
                exponent: self
                    .exponent
                    .ok_or_else(|| ConfigError("dollard.exponent is required for power_law".into()))?,
            },
            other => return err(format!("dollard.potential: unknown form `{other}`")),
        };
        LongRangePotential::new(form, self.strength, self.regulator).map_err(|e| ConfigError(format!("[dollard]: {e}")))
    }

    pub fn control(&self) -> Result<Option<LongRangePotential>, ConfigError> {
        self.control_exponent
            .map(|a| {
                LongRangePotential::power_law(self.strength, a, self.regulator)
                    .map_err(|e| ConfigError(format!("dollard.control_exponent: {e}")))
            })
            .transpose()
    }
}
