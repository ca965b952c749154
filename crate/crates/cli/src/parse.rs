//! Flag-value grammars shared by the subcommands: integer ranges, geometric
//! time grids, body specifications, and the `key = value` defaults file.
//!
//! Everything here turns user text into validated values before any math
//! runs, so malformed input dies as a usage error (exit 3) instead of a
//! mid-run domain error.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sausage_core::geometry::{CompactBody, PlanarCurveDomain};

use crate::CliError;

/// Inclusive integer range, written `lo..hi` or as a single value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntRange {
    pub lo: u32,
    pub hi: u32,
}

impl IntRange {
    pub fn iter(self) -> impl Iterator<Item = u32> {
        self.lo..=self.hi
    }

    pub fn len(self) -> u32 {
        self.hi - self.lo + 1
    }
}

impl FromStr for IntRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (a, b),
            None => (s, s),
        };
        let lo: u32 = lo
            .trim()
            .parse()
            .map_err(|_| format!("expected an integer or `lo..hi`, got \"{s}\""))?;
        let hi: u32 = hi
            .trim()
            .parse()
            .map_err(|_| format!("expected an integer or `lo..hi`, got \"{s}\""))?;
        if hi < lo {
            return Err(format!("empty range {lo}..{hi}"));
        }
        Ok(IntRange { lo, hi })
    }
}

impl Display for IntRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

/// Geometric time grid, written `lo:hi:n`: n points from lo to hi with a
/// constant ratio, endpoints pinned exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl TimeGrid {
    pub fn points(&self) -> Vec<f64> {
        let ratio = (self.hi / self.lo).powf(1.0 / (self.n - 1) as f64);
        let mut g: Vec<f64> = (0..self.n).map(|i| self.lo * ratio.powi(i as i32)).collect();
        g[0] = self.lo;
        g[self.n - 1] = self.hi; // powf drift must not move the endpoints
        g
    }
}

impl FromStr for TimeGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected `lo:hi:n`, got \"{s}\""));
        }
        let lo: f64 = parts[0]
            .trim()
            .parse()
            .map_err(|_| format!("\"{}\" is not a number", parts[0]))?;
        let hi: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| format!("\"{}\" is not a number", parts[1]))?;
        let n: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| format!("\"{}\" is not a point count", parts[2]))?;
        if !(lo > 0.0) || !lo.is_finite() {
            return Err(format!("grid start must be positive, got {lo}"));
        }
        if !(hi > lo) || !hi.is_finite() {
            return Err(format!("grid end must exceed the start, got {lo}:{hi}"));
        }
        if n < 2 {
            return Err(format!("a grid needs at least 2 points, got {n}"));
        }
        Ok(TimeGrid { lo, hi, n })
    }
}

impl Display for TimeGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.n)
    }
}

/// A body specification string:
///
/// * `ball:m:r`      — round ball, ambient dimension m, radius r
/// * `disk`          — shorthand for `ball:2:1`
/// * `circle:r`      — smooth planar circle of radius r
/// * `ellipse:a:b`   — smooth planar ellipse with semi-axes a, b
/// * `curve:<path>`  — planar curve samples from a file
///
/// `compact` yields the body for coefficient tables and Monte Carlo;
/// `planar` yields the smooth curve domain the boundary-layer functional
/// needs (`ball:2:r` and `disk` convert to a circle there).
#[derive(Debug, Clone, PartialEq)]
pub enum BodySpec {
    Ball { m: u32, r: f64 },
    Circle { r: f64 },
    Ellipse { a: f64, b: f64 },
    Curve(PathBuf),
}

impl BodySpec {
    pub fn compact(&self) -> Result<CompactBody, CliError> {
        match self {
            BodySpec::Ball { m, r } => Ok(CompactBody::ball(*m, *r)?),
            BodySpec::Circle { r } => Ok(CompactBody::planar(PlanarCurveDomain::circle(*r)?)),
            BodySpec::Ellipse { a, b } => {
                Ok(CompactBody::planar(PlanarCurveDomain::ellipse(*a, *b)?))
            }
            BodySpec::Curve(path) => Ok(CompactBody::planar(PlanarCurveDomain::from_curve_file(path)?)),
        }
    }

    pub fn planar(&self) -> Result<PlanarCurveDomain, CliError> {
        match self {
            BodySpec::Ball { m: 2, r } => Ok(PlanarCurveDomain::circle(*r)?),
            BodySpec::Ball { m, .. } => Err(CliError::Usage(format!(
                "planar functionals need a two-dimensional body; ball:{m}:… is not one"
            ))),
            BodySpec::Circle { r } => Ok(PlanarCurveDomain::circle(*r)?),
            BodySpec::Ellipse { a, b } => Ok(PlanarCurveDomain::ellipse(*a, *b)?),
            BodySpec::Curve(path) => Ok(PlanarCurveDomain::from_curve_file(path)?),
        }
    }

    /// Canonical text form, recorded in run summaries.
    pub fn describe(&self) -> String {
        match self {
            BodySpec::Ball { m, r } => format!("ball:{m}:{r}"),
            BodySpec::Circle { r } => format!("circle:{r}"),
            BodySpec::Ellipse { a, b } => format!("ellipse:{a}:{b}"),
            BodySpec::Curve(path) => format!("curve:{}", path.display()),
        }
    }
}

impl FromStr for BodySpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "disk" {
            return Ok(BodySpec::Ball { m: 2, r: 1.0 });
        }
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| format!("unknown body \"{s}\" (try ball:m:r, disk, circle:r, ellipse:a:b, curve:<path>)"))?;
        fn num(part: &str, what: &str) -> Result<f64, String> {
            let v: f64 = part
                .trim()
                .parse()
                .map_err(|_| format!("{what} \"{part}\" is not a number"))?;
            if !(v > 0.0) || !v.is_finite() {
                return Err(format!("{what} must be positive, got {v}"));
            }
            Ok(v)
        }
        match kind {
            "ball" => {
                let (m, r) = rest
                    .split_once(':')
                    .ok_or_else(|| format!("ball spec needs `ball:m:r`, got \"{s}\""))?;
                let m: u32 = m
                    .trim()
                    .parse()
                    .map_err(|_| format!("ball dimension \"{m}\" is not an integer"))?;
                Ok(BodySpec::Ball { m, r: num(r, "ball radius")? })
            }
            "circle" => Ok(BodySpec::Circle { r: num(rest, "circle radius")? }),
            "ellipse" => {
                let (a, b) = rest
                    .split_once(':')
                    .ok_or_else(|| format!("ellipse spec needs `ellipse:a:b`, got \"{s}\""))?;
                Ok(BodySpec::Ellipse {
                    a: num(a, "ellipse semi-axis")?,
                    b: num(b, "ellipse semi-axis")?,
                })
            }
            "curve" => Ok(BodySpec::Curve(PathBuf::from(rest))),
            other => Err(format!(
                "unknown body kind \"{other}\" (try ball:m:r, disk, circle:r, ellipse:a:b, curve:<path>)"
            )),
        }
    }
}

/// Defaults file: one `key = value` per line, `#` comments, keys named
/// exactly like the long flags they stand in for. Explicit flags win.
#[derive(Debug, Default)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
    /// Where the values came from, for error messages.
    origin: Option<PathBuf>,
}

impl FileConfig {
    pub fn empty() -> Self {
        FileConfig::default()
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Usage(format!("cannot read config {}: {e}", path.display()))
        })?;
        let mut values = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!(
                    "{}:{}: expected `key = value`, got \"{line}\"",
                    path.display(),
                    idx + 1
                ))
            })?;
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(FileConfig { values, origin: Some(path.to_path_buf()) })
    }

    /// Typed lookup; a present-but-malformed value is a usage error.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|e| {
                CliError::Usage(format!(
                    "config {}: key \"{key}\": {e}",
                    self.origin.as_deref().map(Path::display).map(|d| d.to_string()).unwrap_or_default()
                ))
            }),
        }
    }

    /// Flag value if given, else the config value, else the default.
    pub fn resolve<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: Display,
    {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.get(key)?.unwrap_or(default)),
        }
    }

    /// Flag value if given, else the config value, else `None`.
    pub fn resolve_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }
}
