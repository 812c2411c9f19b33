//! Run configuration and CSV artifacts.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::approx::ReferenceSolver;
use crate::constants::ProjectionConstants;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::poly::Poly1;
use crate::problem::{Nonlinearity, ProblemSpec};
use crate::verifier::{RunReport, StepReport};

/// A real number as written in the config: a TOML number or a `"p/q"` string.
/// Floats are taken as their exact binary value; use the string form to
/// enclose a decimal such as `1/10` rigorously.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Scalar {
    pub fn to_interval(&self, path: &str) -> Result<Interval> {
        match self {
            Scalar::Int(n) => Ok(Interval::from_i64(*n)),
            Scalar::Float(x) if x.is_finite() => Ok(Interval::point(*x)),
            Scalar::Float(_) => Err(Error::config(path, "must be finite")),
            Scalar::Text(s) => parse_ratio(s).ok_or_else(|| Error::config(path, format!("cannot parse `{s}` as p/q"))),
        }
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::Int(n)
    }
}

fn parse_ratio(s: &str) -> Option<Interval> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => Interval::from_ratio(p.trim().parse().ok()?, q.trim().parse().ok()?).ok(),
        None => s.parse::<i64>().ok().map(Interval::from_i64),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Constants,
    #[default]
    Verify,
    Reference,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Nonlinear {
    /// Monomial coefficients `g = [g0, g1, g2, g3]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<Scalar>>,
    /// Allen-Cahn parameter, `g(u) = u (1 - u)(u - a)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mesh {
    pub space_elements: usize,
    pub time_elements: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Reference {
    #[serde(default = "default_px")]
    pub px: usize,
    #[serde(default = "default_pt")]
    pub pt: usize,
}

fn default_px() -> usize {
    5
}

fn default_pt() -> usize {
    2
}

impl Default for Reference {
    fn default() -> Self {
        Reference { px: 5, pt: 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub mode: Mode,
    pub nu: Scalar,
    /// Step length `T_i`.
    #[serde(rename = "T")]
    pub t: Scalar,
    pub steps: usize,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    /// Monomial coefficients of `u0`, ascending.
    pub u0: Vec<Scalar>,
    pub nonlinearity: Nonlinear,
    pub mesh: Mesh,
    #[serde(default)]
    pub reference: Reference,
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

/// Collects every violated constraint into a single error.
fn combine(errs: Vec<Error>) -> Result<()> {
    let mut it = errs.into_iter();
    let Some(first) = it.next() else { return Ok(()) };
    let rest: Vec<Error> = it.collect();
    if rest.is_empty() {
        return Err(first);
    }
    let (path, _) = config_parts(&first);
    let message = std::iter::once(&first)
        .chain(&rest)
        .map(|e| {
            let (p, m) = config_parts(e);
            format!("`{p}`: {m}")
        })
        .collect::<Vec<_>>()
        .join("; ");
    Err(Error::Config { path, message })
}

fn config_parts(e: &Error) -> (String, String) {
    match e {
        Error::Config { path, message } => (path.clone(), message.clone()),
        other => (String::new(), other.to_string()),
    }
}

impl RunConfig {
    fn scalars(list: &[Scalar], path: &str, errs: &mut Vec<Error>) -> Vec<Interval> {
        list.iter()
            .enumerate()
            .filter_map(|(i, s)| s.to_interval(&format!("{path}[{i}]")).map_err(|e| errs.push(e)).ok())
            .collect()
    }

    fn nonlinearity(&self, errs: &mut Vec<Error>) -> Option<Nonlinearity> {
        match (&self.nonlinearity.g, &self.nonlinearity.a) {
            (Some(_), Some(_)) => {
                errs.push(Error::config("nonlinearity", "give either `g` or `a`, not both"));
                None
            }
            (None, None) => {
                errs.push(Error::config("nonlinearity", "missing `g` or `a`"));
                None
            }
            (None, Some(a)) => a
                .to_interval("nonlinearity.a")
                .map(Nonlinearity::allen_cahn)
                .map_err(|e| errs.push(e))
                .ok(),
            (Some(g), None) => {
                let n = errs.len();
                let c = Self::scalars(g, "nonlinearity.g", errs);
                if errs.len() > n {
                    return None;
                }
                Nonlinearity::new(&c)
                    .map_err(|_| Error::config("nonlinearity.g", "unsupported nonlinearity degree"))
                    .map_err(|e| errs.push(e))
                    .ok()
            }
        }
    }

    /// The validated problem, or an error naming every violated field.
    pub fn problem(&self) -> Result<ProblemSpec> {
        let mut errs = Vec::new();
        let nu = self.nu.to_interval("nu").map_err(|e| errs.push(e)).ok();
        let t = self.t.to_interval("T").map_err(|e| errs.push(e)).ok();
        let g = self.nonlinearity(&mut errs);
        let u0 = Poly1::new(Self::scalars(&self.u0, "u0", &mut errs));
        if self.reference.pt != 2 {
            errs.push(Error::config("reference.pt", "only the two-stage Gauss scheme (pt = 2) is available"));
        }
        let (Some(nu), Some(t), Some(g)) = (nu, t, g) else {
            combine(errs)?;
            unreachable!("missing field without error");
        };
        let p = ProblemSpec {
            nu,
            g,
            u0,
            space_elements: self.mesh.space_elements,
            time_elements: self.mesh.time_elements,
            step_length: t,
            steps: self.steps,
            px: self.reference.px,
        };
        p.validate_all().into_iter().for_each(|e| errs.push(e));
        combine(errs)?;
        Ok(p)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Io(e.to_string()))
    }
}

/// Parses and validates a TOML config.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| {
        let path = toml_error_path(&e);
        Error::config(path, e.message().to_string())
    })?;
    cfg.problem()?;
    Ok(cfg)
}

fn toml_error_path(e: &toml::de::Error) -> String {
    let msg = e.message();
    if let Some(rest) = msg.strip_prefix("missing field `") {
        return rest.split('`').next().unwrap_or("").to_string();
    }
    if let Some(rest) = msg.split("unknown field `").nth(1) {
        return rest.split('`').next().unwrap_or("").to_string();
    }
    String::new()
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

/// Upper-rounded scientific notation with four significant digits, e.g.
/// `9.310E-04`.
pub fn fmt_upper(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x == f64::INFINITY {
        return "Inf".into();
    }
    if x == f64::NEG_INFINITY {
        return "-Inf".into();
    }
    if x == 0.0 {
        return "0.000E+00".into();
    }
    // 800 digits reproduce any f64 exactly.
    let exact = format!("{:.800e}", x.abs());
    let (mant, exp) = exact.split_once('e').expect("exponent");
    let mut exp: i32 = exp.parse().expect("exponent");
    let digits: Vec<u8> = mant.bytes().filter(u8::is_ascii_digit).map(|b| b - b'0').collect();
    let mut lead: u32 = digits[..4].iter().fold(0, |acc, &d| acc * 10 + d as u32);
    let tail = digits[4..].iter().any(|&d| d != 0);
    // Truncation rounds negatives up; nonzero tails of positives bump.
    if tail && x > 0.0 {
        lead += 1;
        if lead == 10_000 {
            lead = 1000;
            exp += 1;
        }
    }
    let sign = if x < 0.0 { "-" } else { "" };
    let esign = if exp < 0 { '-' } else { '+' };
    format!("{sign}{}.{:03}E{esign}{:02}", lead / 1000, lead % 1000, exp.abs())
}

fn upper(x: Option<Interval>) -> String {
    x.map_or_else(|| "Inf".to_string(), |v| fmt_upper(v.hi()))
}

pub const STEPS_HEADER: &str = "i,M1_cal,M0_cal,Mt_cal,C_Delta,M1,M0,MT,alpha,beta,delta,eps_H1,eps_L2,status";

pub fn step_row(s: &StepReport) -> String {
    let ab = |x: f64| if s.status == crate::verifier::StepStatus::Ok { fmt_upper(x) } else { "Inf".into() };
    [
        s.index.to_string(),
        upper(s.m1_cal),
        upper(s.m0_cal),
        upper(s.mt_cal),
        upper(s.c_delta),
        upper(s.m1),
        upper(s.m0),
        upper(s.mt),
        ab(s.alpha),
        ab(s.beta),
        upper(s.delta),
        upper(s.eps_h1),
        upper(s.eps_l2),
        s.status.as_str().to_string(),
    ]
    .join(",")
}

fn log10_upper(x: f64) -> String {
    if x <= 0.0 {
        return "-Inf".into();
    }
    if !x.is_finite() {
        return "Inf".into();
    }
    // f64 log10 is faithful to within a couple of ulps
    let l = x.log10();
    let l = l + 4.0 * f64::EPSILON * l.abs().max(1.0);
    format!("{:.4}", (l * 1e4).ceil() / 1e4)
}

fn create(dir: &Path, name: &str) -> Result<fs::File> {
    let path = dir.join(name);
    fs::File::create(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write_constants(constants: &ProjectionConstants, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut f = create(dir, "constants.csv")?;
    writeln!(f, "name,value")?;
    for (name, v) in constants.named() {
        writeln!(f, "{name},{}", fmt_upper(v.hi()))?;
    }
    Ok(())
}

/// Writes `steps.csv`, `constants.csv` and `epsilon_log10.csv`.
pub fn emit_csv(report: &RunReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut f = create(dir, "steps.csv")?;
    writeln!(f, "{STEPS_HEADER}")?;
    for s in &report.steps {
        writeln!(f, "{}", step_row(s))?;
    }
    write_constants(&report.constants, dir)?;
    let mut f = create(dir, "epsilon_log10.csv")?;
    writeln!(f, "i,log10_eps_L2,log10_eps_H1")?;
    let (h1, l2) = report.initial_mismatch;
    writeln!(f, "1,{},{}", log10_upper(l2.hi()), log10_upper(h1.hi()))?;
    for s in &report.steps {
        if let (Some(h1), Some(l2)) = (s.eps_h1, s.eps_l2) {
            writeln!(f, "{},{},{}", s.index + 1, log10_upper(l2.hi()), log10_upper(h1.hi()))?;
        }
    }
    Ok(())
}

/// Writes the config echo `config.toml`.
pub fn write_config_echo(cfg: &RunConfig, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut f = create(dir, "config.toml")?;
    f.write_all(cfg.to_toml()?.as_bytes())?;
    Ok(())
}

/// Samples the reference trajectory on a grid of `nx + 1` points in space and
/// `nt + 1` per step in time, writing `contour.csv` with columns `x,t,u`.
pub fn write_contour(problem: &ProblemSpec, nx: usize, nt: usize, dir: &Path) -> Result<()> {
    problem.validate()?;
    fs::create_dir_all(dir)?;
    let solver = ReferenceSolver::new(problem)?;
    let mut dofs = solver.space().interpolate(&problem.u0);
    let mut f = std::io::BufWriter::new(create(dir, "contour.csv")?);
    writeln!(f, "x,t,u")?;
    let len = problem.step_length.mid();
    for step in 0..problem.steps {
        let u = solver.solve_step(&dofs)?;
        let first = if step == 0 { 0 } else { 1 };
        for j in first..=nt {
            let tl = len * j as f64 / nt as f64;
            for i in 0..=nx {
                let x = i as f64 / nx as f64;
                writeln!(f, "{x},{},{:e}", step as f64 * len + tl, u.eval(x, tl))?;
            }
        }
        dofs = u.end_dofs().to_vec();
    }
    f.flush()?;
    Ok(())
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ok = self.steps.iter().filter(|s| s.status == crate::verifier::StepStatus::Ok).count();
        write!(f, "{ok}/{} steps verified in {:.1?}", self.requested_steps, self.wall_time)?;
        if let Some(i) = self.stabilized_at {
            write!(f, ", alpha stabilized at step {i}")?;
        }
        Ok(())
    }
}
