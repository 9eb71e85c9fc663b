//! The six batch commands. Each resolves its whole configuration before any
//! numerical work, so a malformed config never produces output.

use irlab::dollard::{coulomb_log_slope_fit, moller_residual, Grid1d, GridWavefunction, MollerOptions, PropagationOptions};
use irlab::exec;
use irlab::fit::fit_line;
use irlab::nrqed::{
    bdg_cloud_norm_sqr, cloud_function, dispersion, ir_scan, velocity, ApproxKind, ApproxOptions, ApproximatingVectors,
    DollardPhases, FiberModel, ScanOptions,
};
use irlab::softphoton::{
    coulomb_log_coefficient, coulomb_phase, exclusive_cross_section, inclusive_partial_sum, propagator_exponent,
    soft_exponent, weyl_vacuum_overlap, CoulombPhaseOptions, SwitchingFunction,
};
use irlab::spectral::LanczosOptions;
use irlab::Error;

use crate::config::{ConfigError, RunConfig};
use crate::output::{line_plot, num, Csv, ErrorLog, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Command {
    Irscan,
    Dispersion,
    Cfp,
    Dollard,
    Yfs,
    Phase,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Irscan,
        Command::Dispersion,
        Command::Cfp,
        Command::Dollard,
        Command::Yfs,
        Command::Phase,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Irscan => "irscan",
            Command::Dispersion => "dispersion",
            Command::Cfp => "cfp",
            Command::Dollard => "dollard",
            Command::Yfs => "yfs",
            Command::Phase => "phase",
        }
    }
}

#[derive(Debug)]
pub enum CommandError {
    Config(ConfigError),
    Run(Error),
}

impl From<ConfigError> for CommandError {
    fn from(e: ConfigError) -> Self {
        CommandError::Config(e)
    }
}

impl std::fmt::Display for CommandError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CommandError::Config(e) => write!(f, "config error: {e}"),
            CommandError::Run(e) => write!(f, "{e}"),
        }
    }
}

/// Argument errors raised by the numerics before any row runs are
/// configuration problems too.
fn outer(e: Error) -> CommandError {
    match e {
        Error::Argument(msg) => CommandError::Config(ConfigError(msg)),
        other => CommandError::Run(other),
    }
}

#[derive(Debug, Clone)]
pub struct CommandOutput {
    /// File name and contents, in write order.
    pub files: Vec<(String, String)>,
    pub errors: ErrorLog,
    pub rows: usize,
}

impl CommandOutput {
    fn new() -> Self {
        Self {
            files: Vec::new(),
            errors: ErrorLog::default(),
            rows: 0,
        }
    }

    fn add(&mut self, name: &str, contents: String) {
        self.files.push((name.to_string(), contents));
    }

    pub fn file(&self, name: &str) -> Option<&str> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, c)| c.as_str())
    }

    fn finish(mut self) -> Self {
        let log = self.errors.render();
        self.add("errors.csv", log);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunSettings {
    pub threads: usize,
    pub svg: bool,
}

pub fn run_command(cmd: Command, cfg: &RunConfig, settings: RunSettings) -> Result<CommandOutput, CommandError> {
    let out = match cmd {
        Command::Irscan => irscan(cfg, settings)?,
        Command::Dispersion => dispersion_cmd(cfg, settings)?,
        Command::Cfp => cfp(cfg, settings)?,
        Command::Dollard => dollard(cfg, settings)?,
        Command::Yfs => yfs(cfg, settings)?,
        Command::Phase => phase(cfg, settings)?,
    };
    Ok(out.finish())
}

fn lanczos(cfg: &RunConfig) -> LanczosOptions {
    LanczosOptions {
        tol: cfg.lanczos_tol(),
        seed: cfg.seed,
        ..LanczosOptions::default()
    }
}

fn vec3(p: &[f64; 3]) -> String {
    format!("{};{};{}", num(p[0]), num(p[1]), num(p[2]))
}

fn irscan(cfg: &RunConfig, s: RunSettings) -> Result<CommandOutput, CommandError> {
    let params = cfg.fiber_params()?;
    let p = cfg.momentum()?;
    let lambdas = cfg.lambdas()?;
    let opts = ScanOptions {
        lanczos: lanczos(cfg),
        threads: s.threads,
    };
    let rows = ir_scan(&params, &p, &lambdas, &opts).map_err(outer)?;

    let mut out = CommandOutput::new();
    let mut csv = Csv::new(&["lambda", "E", "meanN", "vac_overlap", "dressedN", "residual"]);
    let (mut xs, mut ys, mut dressed) = (Vec::new(), Vec::new(), Vec::new());
    for (i, (lambda, row)) in lambdas.iter().zip(&rows).enumerate() {
        out.rows += 1;
        match row {
            Ok(r) => {
                csv.push_numbers(&[
                    r.lambda,
                    r.energy,
                    r.mean_photon_number,
                    r.vacuum_overlap,
                    r.dressed_mean_photon_number,
                    r.residual,
                ]);
                xs.push((1.0 / r.lambda).ln());
                ys.push(r.mean_photon_number);
                dressed.push((r.lambda, r.dressed_mean_photon_number));
            }
            Err(e) => out.errors.push("irscan", i, num(*lambda), e),
        }
    }
    if let Ok(fit) = fit_line(&xs, &ys) {
        // ⟨N⟩ = α + β log(1/λ)
        csv.push_labelled("fit:", &[fit.intercept, fit.slope, fit.r_squared]);
    }
    out.add("irscan.csv", csv.render());
    if s.svg {
        let undressed: Vec<(f64, f64)> = xs.iter().zip(&ys).map(|(x, y)| ((-x).exp(), *y)).collect();
        out.add(
            "irscan.svg",
            line_plot(
                "photon number of the fiber ground state",
                "λ",
                "⟨N⟩",
                &[
                    Series {
                        name: "undressed",
                        points: undressed,
                    },
                    Series {
                        name: "dressed",
                        points: dressed,
                    },
                ],
                true,
            ),
        );
    }
    Ok(out)
}

fn dispersion_cmd(cfg: &RunConfig, s: RunSettings) -> Result<CommandOutput, CommandError> {
    let params = cfg.fiber_params()?;
    let momenta = cfg
        .scan()?
        .momenta
        .clone()
        .ok_or_else(|| ConfigError("missing key scan.momenta".into()))?;
    if momenta.is_empty() {
        return Err(ConfigError("scan.momenta is empty".into()).into());
    }
    let table = dispersion(&params, &momenta, &lanczos(cfg), s.threads).map_err(outer)?;

    let mut out = CommandOutput::new();
    let mut csv = Csv::new(&["px", "py", "pz", "E", "residual", "vx", "vy", "vz"]);
    let mut curve = Vec::new();
    for i in 0..table.len() {
        out.rows += 1;
        let p = table.momenta[i];
        if let Some(e) = &table.failures[i] {
            out.errors.push("dispersion", i, vec3(&p), e);
            continue;
        }
        let v = table.velocities[i].unwrap_or([f64::NAN; 3]);
        csv.push_numbers(&[p[0], p[1], p[2], table.energies[i], table.residuals[i], v[0], v[1], v[2]]);
        curve.push(((p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt(), table.energies[i]));
    }
    out.add("dispersion.csv", csv.render());
    if s.svg {
        out.add(
            "dispersion.svg",
            line_plot("dispersion", "|p|", "E(p)", &[Series { name: "E", points: curve }], false),
        );
    }
    Ok(out)
}

fn cfp(cfg: &RunConfig, s: RunSettings) -> Result<CommandOutput, CommandError> {
    let params = cfg.fiber_params()?;
    let p = cfg.momentum()?;
    let times = cfg.times()?;
    let lambdas = cfg.lambdas()?;
    let opts = ApproxOptions {
        lanczos: lanczos(cfg),
        ..ApproxOptions::default()
    };
    let model = FiberModel::new(params.clone()).map_err(outer)?;
    model.check_momentum(&p).map_err(outer)?;
    let t_last = *times.last().expect("at least two times");

    let mut out = CommandOutput::new();
    let vectors = ApproximatingVectors::new(model, &p, opts).map_err(CommandError::Run)?;
    let tasks: Vec<(ApproxKind, f64)> = [ApproxKind::Cfp, ApproxKind::Bdg]
        .iter()
        .flat_map(|&k| times.iter().map(move |&t| (k, t)))
        .collect();
    let computed = exec::execute(tasks, s.threads, |(k, t)| vectors.vector(k, t, &DollardPhases::default()));
    let computed: Vec<_> = computed.into_iter().map(|r| r.map_err(Error::from).and_then(|x| x)).collect();
    let (cfp_vecs, bdg_vecs) = computed.split_at(times.len());

    let mut csv = Csv::new(&["t", "t_next", "cfp", "bdg", "cfp_leakage", "bdg_leakage"]);
    let mut curves = (Vec::new(), Vec::new());
    for i in 0..times.len() - 1 {
        out.rows += 1;
        let pair = |v: &[irlab::Result<irlab::nrqed::ApproxVector>]| match (&v[i], &v[i + 1]) {
            (Ok(a), Ok(b)) => Ok((a.vector.phase_quotient_distance(&b.vector), b.leakage)),
            (Err(e), _) | (_, Err(e)) => Err(e.clone()),
        };
        match (pair(cfp_vecs), pair(bdg_vecs)) {
            (Ok((rc, lc)), Ok((rb, lb))) => {
                csv.push_numbers(&[times[i], times[i + 1], rc, rb, lc, lb]);
                curves.0.push((times[i + 1], rc));
                curves.1.push((times[i + 1], rb));
            }
            (Err(e), _) | (_, Err(e)) => out.errors.push("cfp", i, num(times[i]), e),
        }
    }
    out.add("cfp.csv", csv.render());

    let lanczos_opts = lanczos(cfg);
    let clouds = exec::execute(lambdas.clone(), s.threads, |lambda| {
        let model = FiberModel::new(params.with_ir_cutoff(lambda))?;
        let v = velocity(&model, &p, &lanczos_opts)?;
        let cloud = cloud_function(&model, &v.velocity)?;
        Ok::<_, Error>((cloud.norm_sqr(), bdg_cloud_norm_sqr(&cloud, t_last)))
    });
    let mut clouds_csv = Csv::new(&["lambda", "cloud_norm", "bdg_cloud_norm"]);
    for (i, (lambda, r)) in lambdas.iter().zip(clouds).enumerate() {
        out.rows += 1;
        match r.map_err(Error::from).and_then(|x| x) {
            Ok((full, bdg)) => clouds_csv.push_numbers(&[*lambda, full, bdg]),
            Err(e) => out.errors.push("bdg_cloud", i, num(*lambda), e),
        }
    }
    out.add("bdg_cloud.csv", clouds_csv.render());
    if s.svg {
        out.add(
            "cfp.svg",
            line_plot(
                "Cauchy residuals of the approximating vectors",
                "t",
                "distance to the previous time",
                &[
                    Series {
                        name: "CFP",
                        points: curves.0,
                    },
                    Series {
                        name: "BDG",
                        points: curves.1,
                    },
                ],
                true,
            ),
        );
    }
    Ok(out)
}

fn dollard(cfg: &RunConfig, s: RunSettings) -> Result<CommandOutput, CommandError> {
    let d = cfg.dollard()?;
    let v = d.potential()?;
    let control = d.control()?;
    let grid = Grid1d::new(d.x_min, d.x_max, d.dx).map_err(outer)?;
    let psi = if d.s_wave {
        GridWavefunction::s_wave(grid, d.center, d.width, d.momentum)
    } else {
        GridWavefunction::gaussian(grid, d.center, d.width, d.momentum)
    }
    .map_err(outer)?;
    let opts = MollerOptions {
        propagation: PropagationOptions { dt: d.dt, absorb: true },
        max_mass_loss: d.max_mass_loss,
        threads: s.threads,
    };

    let mut out = CommandOutput::new();
    let n = d.times.len() - 1;
    let plain = moller_residual(&psi, &v, d.mass, &d.times, false, &opts);
    let modified = moller_residual(&psi, &v, d.mass, &d.times, true, &opts);
    if let Err(Error::Argument(msg)) = plain.as_ref().or(modified.as_ref()).map(|_| ()) {
        return Err(ConfigError(format!("[dollard]: {msg}")).into());
    }
    let mut csv = Csv::new(&["t", "t_next", "unmodified", "modified", "phase"]);
    let mut curves = (Vec::new(), Vec::new());
    out.rows += n;
    match (&plain, &modified) {
        (Ok(a), Ok(b)) => {
            let (ra, rb) = (a.consecutive(), b.consecutive());
            for i in 0..n {
                csv.push_numbers(&[d.times[i], d.times[i + 1], ra[i], rb[i], a.phase_track[i + 1]]);
                curves.0.push((d.times[i + 1], ra[i]));
                curves.1.push((d.times[i + 1], rb[i]));
            }
            if let Ok(fit) = coulomb_log_slope_fit(a) {
                let predicted = v.strength * d.mass / psi.mean_abs_momentum();
                csv.push_labelled("fit:", &[fit.slope, predicted, fit.r_squared]);
            }
        }
        (Err(e), _) | (_, Err(e)) => {
            for i in 0..n {
                out.errors.push("dollard", i, num(d.times[i]), e);
            }
        }
    }
    out.add("dollard.csv", csv.render());

    if let Some(c) = control {
        let mut ctl = Csv::new(&["t", "t_next", "unmodified"]);
        out.rows += n;
        match moller_residual(&psi, &c, d.mass, &d.times, false, &opts) {
            Ok(diag) => {
                for (i, r) in diag.consecutive().iter().enumerate() {
                    ctl.push_numbers(&[d.times[i], d.times[i + 1], *r]);
                }
            }
            Err(e) => {
                for i in 0..n {
                    out.errors.push("control", i, num(d.times[i]), &e);
                }
            }
        }
        out.add("control.csv", ctl.render());
    }
    if s.svg {
        out.add(
            "dollard.svg",
            line_plot(
                "Møller residuals",
                "t",
                "distance to the previous time",
                &[
                    Series {
                        name: "unmodified",
                        points: curves.0,
                    },
                    Series {
                        name: "modified",
                        points: curves.1,
                    },
                ],
                true,
            ),
        );
    }
    Ok(out)
}

fn yfs(cfg: &RunConfig, s: RunSettings) -> Result<CommandOutput, CommandError> {
    let y = cfg.yfs()?;
    let process = cfg.process()?;
    let quad = cfg.soft_quadrature()?;
    if y.lambdas.is_empty() {
        return Err(ConfigError("yfs.lambdas is empty".into()).into());
    }
    let lambda_min = y.lambdas.iter().cloned().fold(f64::INFINITY, f64::min);
    let exponent = soft_exponent(&process, lambda_min, y.uv_cutoff, &quad).map_err(outer)?;

    let rows = exec::execute(y.lambdas.clone(), s.threads, |lambda| {
        let exclusive = exclusive_cross_section(&process, lambda, y.uv_cutoff, &quad)?;
        let inclusive = inclusive_partial_sum(&process, lambda, y.resolution, y.uv_cutoff, y.n_max, &quad)?;
        Ok::<_, Error>((exclusive, inclusive))
    });
    let mut out = CommandOutput::new();
    let mut csv = Csv::new(&["lambda", "exclusive", "inclusive_limit", "inclusive_partial", "terms_needed"]);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    let mut curves = (Vec::new(), Vec::new());
    for (i, (lambda, r)) in y.lambdas.iter().zip(rows).enumerate() {
        out.rows += 1;
        match r.map_err(Error::from).and_then(|x| x) {
            Ok((exclusive, series)) => {
                let partial = *series.partial_sums.last().expect("n_max >= 0");
                csv.push_numbers(&[*lambda, exclusive, series.limit, partial, series.terms_needed as f64]);
                xs.push(lambda.ln());
                ys.push(exclusive.ln());
                curves.0.push((*lambda, exclusive));
                curves.1.push((*lambda, series.limit));
            }
            Err(e) => out.errors.push("yfs", i, num(*lambda), e),
        }
    }
    // σ ∝ λ^a, so the fitted slope of ln σ against ln λ is the exclusive exponent
    let slope = fit_line(&xs, &ys).map(|f| f.slope).unwrap_or(f64::NAN);
    csv.push_labelled("fit:", &[exponent.a, slope, exponent.fit_residual]);
    out.add("yfs.csv", csv.render());
    if s.svg {
        out.add(
            "yfs.svg",
            line_plot(
                "exclusive and inclusive cross sections",
                "λ",
                "σ",
                &[
                    Series {
                        name: "exclusive",
                        points: curves.0,
                    },
                    Series {
                        name: "inclusive",
                        points: curves.1,
                    },
                ],
                true,
            ),
        );
    }
    Ok(out)
}

fn phase(cfg: &RunConfig, s: RunSettings) -> Result<CommandOutput, CommandError> {
    let y = cfg.yfs()?;
    let process = cfg.process()?;
    let quad = cfg.soft_quadrature()?;
    if y.epsilons.is_empty() {
        return Err(ConfigError("missing key yfs.epsilons".into()).into());
    }
    if !(y.onset > 0.0) {
        return Err(ConfigError("yfs.onset must be positive".into()).into());
    }
    let coupling = y
        .coupling
        .unwrap_or_else(|| process.legs().iter().map(|l| l.charge().abs()).fold(0.0, f64::max));
    let exponent = propagator_exponent(coupling).map_err(|e| ConfigError(format!("yfs.coupling: {e}")))?;
    let legs = process.legs();
    let mut pairs = Vec::new();
    for i in 0..legs.len() {
        for j in i + 1..legs.len() {
            pairs.push((legs[i], legs[j]));
        }
    }
    let mut log_coefficient = 0.0;
    for (a, b) in &pairs {
        log_coefficient += coulomb_log_coefficient(a, b).map_err(|e| ConfigError(format!("[yfs] legs: {e}")))?;
    }
    let opts = CoulombPhaseOptions {
        onset: y.onset,
        ..CoulombPhaseOptions::default()
    };

    let rows = exec::execute(y.epsilons.clone(), s.threads, |eps| {
        let g = SwitchingFunction::gaussian(eps)?;
        let (mut phi, mut err) = (0.0, 0.0);
        for (a, b) in &pairs {
            let c = coulomb_phase(a, b, &g, &opts)?;
            phi += c.value;
            err += c.error;
        }
        let overlap = weyl_vacuum_overlap(&process, eps, y.uv_cutoff, &quad)?;
        Ok::<_, Error>((phi, err, overlap))
    });
    let mut out = CommandOutput::new();
    let mut csv = Csv::new(&["epsilon", "phi", "phi_error", "weyl_overlap"]);
    let mut curves = (Vec::new(), Vec::new());
    for (i, (eps, r)) in y.epsilons.iter().zip(rows).enumerate() {
        out.rows += 1;
        match r.map_err(Error::from).and_then(|x| x) {
            Ok((phi, err, overlap)) => {
                csv.push_numbers(&[*eps, phi, err, overlap]);
                curves.0.push((*eps, phi));
                curves.1.push((*eps, overlap));
            }
            Err(e) => out.errors.push("phase", i, num(*eps), e),
        }
    }
    csv.push_labelled("fit:", &[log_coefficient, exponent, coupling]);
    out.add("phase.csv", csv.render());
    if s.svg {
        out.add(
            "phase.svg",
            line_plot(
                "Coulomb phase and vacuum overlap",
                "ε",
                "",
                &[
                    Series {
                        name: "Φ(ε)",
                        points: curves.0,
                    },
                    Series {
                        name: "⟨Ω, W Ω⟩",
                        points: curves.1,
                    },
                ],
                true,
            ),
        );
    }
    Ok(out)
}
