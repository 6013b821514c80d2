//! Flat `key = value` scenario files.
//!
//! ```text
//! # comment
//! name = reference
//! alpha = 0.5
//! fd.cells_M = 2000
//! counterexample.shifts = 1, 2, 3, 4, 5
//! ```
//!
//! Keys are unique; unknown keys are rejected so that typos never silently
//! fall back to defaults.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use degenwave::exponential::TimeWeight;
use degenwave::fd::Regularization;
use degenwave::liouville::PotentialKind;

const KNOWN_KEYS: &[&str] = &[
    "name",
    "alpha",
    "length_L",
    "horizon_T",
    "horizon_factor",
    "mode_count_N",
    "seed",
    "output_dir",
    "fd.cells_M",
    "fd.epsilon",
    "fd.cfl",
    "data.kind",
    "data.mode",
    "data.amplitude",
    "solve.snapshots",
    "observe.T_list",
    "observe.N_list",
    "observe.trials",
    "control.weight",
    "counterexample.shifts",
    "counterexample.radius",
    "counterexample.cells_per_unit",
    "counterexample.potential",
];

/// Raw key/value pairs in file order, duplicates rejected.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("config line {}: expected `key = value`, got `{raw}`", lineno + 1))?;
        let k = k.trim();
        if !KNOWN_KEYS.contains(&k) {
            bail!("config line {}: unknown key `{k}`", lineno + 1);
        }
        if out.insert(k.to_string(), v.trim().to_string()).is_some() {
            bail!("config line {}: duplicate key `{k}`", lineno + 1);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DataKind {
    /// `v0_n = A / n^2`, `v1_n = A (-1)^n / (2 n^2)`.
    Smooth,
    /// Unit energy, drawn from the seed.
    Random,
    /// `v0 = A Phi_mode`.
    Mode(usize),
    Zero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FdSection {
    pub cells: usize,
    pub regularization: Regularization,
    pub cfl: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleSection {
    pub shifts: Vec<i64>,
    pub radius: f64,
    pub cells_per_unit: usize,
    pub potential: PotentialKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub alpha: f64,
    pub length: f64,
    horizon: Option<f64>,
    horizon_factor: Option<f64>,
    pub modes: usize,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub fd: FdSection,
    pub data: DataKind,
    pub amplitude: f64,
    pub snapshots: usize,
    pub t_list: Vec<f64>,
    pub n_list: Vec<usize>,
    pub trials: usize,
    pub weight: TimeWeight,
    pub counterexample: CounterexampleSection,
}

fn get<T: std::str::FromStr>(pairs: &BTreeMap<String, String>, key: &str, default: T) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    match pairs.get(key) {
        None => Ok(default),
        Some(v) => v.parse::<T>().map_err(|e| anyhow!("config key `{key}`: cannot parse `{v}`: {e}")),
    }
}

fn get_opt<T: std::str::FromStr>(pairs: &BTreeMap<String, String>, key: &str) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    pairs
        .get(key)
        .map(|v| v.parse::<T>().map_err(|e| anyhow!("config key `{key}`: cannot parse `{v}`: {e}")))
        .transpose()
}

fn get_list<T: std::str::FromStr>(pairs: &BTreeMap<String, String>, key: &str) -> Result<Option<Vec<T>>>
where
    T::Err: std::fmt::Display,
{
    let Some(v) = pairs.get(key) else { return Ok(None) };
    v.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<T>().map_err(|e| anyhow!("config key `{key}`: cannot parse `{s}`: {e}"))
        })
        .collect::<Result<Vec<T>>>()
        .map(Some)
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        let p = parse_pairs(text)?;
        let alpha: f64 = get_opt(&p, "alpha")?.context("config key `alpha` is required")?;
        let modes: usize = get(&p, "mode_count_N", 8)?;
        let regularization = match p.get("fd.epsilon").map(String::as_str) {
            None | Some("mesh") => Regularization::MeshSize,
            Some(v) => Regularization::Fixed(
                v.parse()
                    .map_err(|e| anyhow!("config key `fd.epsilon`: expected `mesh` or a number, got `{v}`: {e}"))?,
            ),
        };
        let data = match p.get("data.kind").map(String::as_str).unwrap_or("smooth") {
            "smooth" => DataKind::Smooth,
            "random" => DataKind::Random,
            "zero" => DataKind::Zero,
            "mode" => DataKind::Mode(get(&p, "data.mode", 1)?),
            other => bail!("config key `data.kind`: expected smooth|random|mode|zero, got `{other}`"),
        };
        let weight = match p.get("control.weight").map(String::as_str).unwrap_or("sin4") {
            "sin4" => TimeWeight::sin_fourth(),
            "uniform" => TimeWeight::uniform(),
            other => bail!("config key `control.weight`: expected sin4|uniform, got `{other}`"),
        };
        let potential = match p.get("counterexample.potential").map(String::as_str).unwrap_or("transformed") {
            "transformed" => PotentialKind::Transformed,
            "zero" => PotentialKind::Zero,
            other => bail!("config key `counterexample.potential`: expected transformed|zero, got `{other}`"),
        };
        let s = Scenario {
            name: p.get("name").cloned().unwrap_or_else(|| "scenario".into()),
            alpha,
            length: get(&p, "length_L", 1.0)?,
            horizon: get_opt(&p, "horizon_T")?,
            horizon_factor: get_opt(&p, "horizon_factor")?,
            modes,
            seed: get(&p, "seed", 0)?,
            output_dir: PathBuf::from(p.get("output_dir").cloned().unwrap_or_else(|| "out".into())),
            fd: FdSection {
                cells: get(&p, "fd.cells_M", 2000)?,
                regularization,
                cfl: get(&p, "fd.cfl", degenwave::fd::DEFAULT_CFL)?,
            },
            data,
            amplitude: get(&p, "data.amplitude", 1.0)?,
            snapshots: get(&p, "solve.snapshots", 20)?,
            t_list: get_list(&p, "observe.T_list")?.unwrap_or_default(),
            n_list: get_list(&p, "observe.N_list")?.unwrap_or_else(|| vec![modes]),
            trials: get(&p, "observe.trials", 100)?,
            weight,
            counterexample: CounterexampleSection {
                shifts: get_list(&p, "counterexample.shifts")?.unwrap_or_else(|| vec![1, 2, 3, 4, 5]),
                radius: get(&p, "counterexample.radius", 0.75)?,
                cells_per_unit: get(&p, "counterexample.cells_per_unit", 200)?,
                potential,
            },
        };
        s.validate()?;
        Ok(s)
    }

    /// Checks that do not depend on the subcommand. Regime checks on `alpha`
    /// are left to the subcommands since `counterexample` wants `alpha >= 2`.
    fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || self.alpha < 0.0 {
            bail!("spectral_basis: alpha must be finite and >= 0, got {}", self.alpha);
        }
        if !(self.length > 0.0 && self.length.is_finite()) {
            bail!("spectral_basis: length_L must be > 0, got {}", self.length);
        }
        if self.modes == 0 {
            bail!("spectral_basis: mode_count_N must be >= 1");
        }
        if self.horizon.is_some() && self.horizon_factor.is_some() {
            bail!("config: give either horizon_T or horizon_factor, not both");
        }
        if let Some(t) = self.horizon {
            if !(t > 0.0 && t.is_finite()) {
                bail!("config: horizon_T must be > 0, got {t}");
            }
        }
        if let Some(f) = self.horizon_factor {
            if !(f > 0.0 && f.is_finite()) {
                bail!("config: horizon_factor must be > 0, got {f}");
            }
        }
        if let DataKind::Mode(n) = self.data {
            if n == 0 || n > self.modes {
                bail!("modal_solver: data.mode = {n} outside 1..={}", self.modes);
            }
        }
        if self.snapshots == 0 {
            bail!("config: solve.snapshots must be >= 1");
        }
        if self.trials < 10 {
            bail!("observability: observe.trials must be >= 10, got {}", self.trials);
        }
        if self.n_list.iter().any(|&n| n == 0) {
            bail!("observability: observe.N_list entries must be >= 1");
        }
        if self.t_list.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
            bail!("observability: observe.T_list entries must be > 0");
        }
        Ok(())
    }

    /// `horizon_T`, else `horizon_factor * T_alpha`, else `1.2 T_alpha`
    /// (`4` when `alpha >= 2`, where no finite `T_alpha` exists).
    pub fn horizon(&self) -> Result<f64> {
        if let Some(t) = self.horizon {
            return Ok(t);
        }
        if self.alpha >= 2.0 {
            return Ok(self.horizon_factor.unwrap_or(4.0));
        }
        let ta = degenwave::observability::controllability_time(self.alpha, self.length)?;
        Ok(self.horizon_factor.unwrap_or(1.2) * ta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_defaults() {
        let s = Scenario::parse(
            "# reference\nname = ref\nalpha = 0.5\nfd.cells_M = 500 # trailing\nfd.epsilon = 0\nobserve.T_list = 2.0, 3.5\n",
        )
        .unwrap();
        assert_eq!(s.name, "ref");
        assert_eq!(s.fd.cells, 500);
        assert_eq!(s.fd.regularization, Regularization::Fixed(0.0));
        assert_eq!(s.t_list, vec![2.0, 3.5]);
        assert_eq!(s.n_list, vec![8]);
        assert_eq!(s.data, DataKind::Smooth);
        let t = s.horizon().unwrap();
        assert!((t - 1.2 * 8.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "alpha = 0.5\nalpah = 1",
            "alpha = 0.5\nalpha = 0.6",
            "length_L = 1",
            "alpha = x",
            "alpha = 0.5\nlength_L = -1",
            "alpha = 0.5\ndata.kind = mode\ndata.mode = 9",
            "alpha = 0.5\nhorizon_T = 1\nhorizon_factor = 2",
            "alpha = 0.5\nfd.epsilon = tiny",
            "alpha = 0.5\njunk",
        ] {
            assert!(Scenario::parse(text).is_err(), "{text}");
        }
    }

    #[test]
    fn horizon_for_the_half_line() {
        let s = Scenario::parse("alpha = 4").unwrap();
        assert_eq!(s.horizon().unwrap(), 4.0);
    }
}
