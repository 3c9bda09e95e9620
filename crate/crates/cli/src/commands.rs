//! One function per subcommand. Each returns the full output text.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use ragame::success_prob::uniform_grid;
use ragame::{
    estimate_expected_utility, estimate_success_curve, solve_sequential, solve_symmetric_uniform,
    success_curve as curve, verify_nash, GameConfig, GameConfigSpec, SimConfig, SimEstimate,
    Strategy, StrategyProfile, StrategySpec,
};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::{CliError, RunManifest};

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_owned(),
        source,
    })
}

pub fn load_config(path: &Path) -> Result<GameConfig, CliError> {
    let spec: GameConfigSpec = read_json(path)?;
    Ok(GameConfig::try_from(spec)?)
}

pub fn load_profile(path: &Path) -> Result<StrategyProfile, CliError> {
    let specs: Vec<StrategySpec> = read_json(path)?;
    let strategies = specs
        .into_iter()
        .map(Strategy::try_from)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(StrategyProfile::new(strategies))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn emit(out: Option<&Path>, body: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, body).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

pub fn success_curve(m: &RunManifest, node: usize, grid: usize) -> Result<String, CliError> {
    let cfg = load_config(m.config_path())?;
    let profile = load_profile(m.profile_path())?;
    let c = curve(&profile, &cfg, node, grid)?;
    let mut buf = Vec::new();
    c.write_csv(&mut buf).expect("writing to memory");
    Ok(String::from_utf8(buf).expect("csv is ascii"))
}

pub fn cutoff_sweep(n_list: &[usize], c_grid: &[f64], radius: f64) -> Result<String, CliError> {
    if let Some(&c) = c_grid.iter().find(|&&c| c.is_nan() || c <= 0.0) {
        return Err(CliError::Invalid(format!("costs must be > 0, got {c}")));
    }
    let mut s = String::from("n,c,d\n");
    for &n in n_list {
        for &c in c_grid {
            let d = solve_symmetric_uniform(n, c, radius)?;
            writeln!(s, "{n},{c},{d}").unwrap();
        }
    }
    Ok(s)
}

pub fn equilibrium(m: &RunManifest) -> Result<String, CliError> {
    let cfg = load_config(m.config_path())?;
    let report = solve_sequential(&cfg, &m.tolerances())?;
    Ok(to_json(&report))
}

/// Returns the report and whether the profile is an equilibrium.
pub fn verify(m: &RunManifest) -> Result<(String, bool), CliError> {
    let cfg = load_config(m.config_path())?;
    let profile = load_profile(m.profile_path())?;
    let report = verify_nash(&profile, &cfg, &m.tolerances())?;
    Ok((to_json(&report), report.is_nash))
}

pub fn simulate(
    m: &RunManifest,
    node: usize,
    d: Option<f64>,
    grid: usize,
    samples: u64,
    seed: u64,
    utility: bool,
) -> Result<String, CliError> {
    let cfg = load_config(m.config_path())?;
    let profile = load_profile(m.profile_path())?;
    let sim = SimConfig::new(samples, seed);
    let points = match d {
        Some(d) => vec![d],
        None => uniform_grid(cfg.radius(), grid),
    };
    let estimates: Vec<SimEstimate> = if utility {
        points
            .iter()
            .map(|&d| estimate_expected_utility(&profile, &cfg, node, d, &sim))
            .collect::<Result<_, _>>()?
    } else {
        estimate_success_curve(&profile, &cfg, node, &points, &sim)?
    };
    let mut s = String::from("d,estimate,std_error\n");
    for (d, e) in points.iter().zip(&estimates) {
        writeln!(s, "{d},{},{}", e.mean, e.std_error).unwrap();
    }
    Ok(s)
}
