//! Run configuration and the compact spec-string parsers.
//!
//! Every subcommand accepts the same small vocabulary: colorings like
//! `strip` or `grid:1/3`, properties like `regular:2` or
//! `edge-lengths:3:3,4,5`, and value sets like `(0,1)` or `3,4,5`. Raw
//! JSON (anything starting with `{` or `[`) passes straight to serde, so
//! the full structures stay reachable from the command line. Flags
//! override values loaded from a `--config` file, and the resolved
//! configuration is echoed into every report.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sphere_forcing::engine::CenterSet;
use sphere_forcing::{AdmissibleValues, Coloring, Property, Scalar};

use crate::CliError;

/// Everything a run needs, with optional fields so partial files and
/// partial flag sets can merge.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub n: Option<usize>,
    pub mode: Option<String>,
    pub seed: Option<u64>,
    pub budget_spheres: Option<usize>,
    pub budget_witnesses: Option<usize>,
    pub coloring: Option<String>,
    pub property: Option<String>,
    pub radii: Option<String>,
    pub colors: Option<u32>,
    pub epsilon: Option<f64>,
    pub centers: Option<String>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// `self` (the flags) wins over `file` wherever both are set.
    pub fn merged_over(self, file: RunConfig) -> RunConfig {
        RunConfig {
            n: self.n.or(file.n),
            mode: self.mode.or(file.mode),
            seed: self.seed.or(file.seed),
            budget_spheres: self.budget_spheres.or(file.budget_spheres),
            budget_witnesses: self.budget_witnesses.or(file.budget_witnesses),
            coloring: self.coloring.or(file.coloring),
            property: self.property.or(file.property),
            radii: self.radii.or(file.radii),
            colors: self.colors.or(file.colors),
            epsilon: self.epsilon.or(file.epsilon),
            centers: self.centers.or(file.centers),
            out: self.out.or(file.out),
        }
    }

    pub fn require<T: Clone>(field: &Option<T>, name: &str) -> Result<T, CliError> {
        field
            .clone()
            .ok_or_else(|| CliError::Usage(format!("missing required value: {name}")))
    }
}

fn looks_like_json(s: &str) -> bool {
    matches!(s.trim_start().chars().next(), Some('{') | Some('['))
}

pub fn parse_scalar(s: &str) -> Result<Scalar, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("cannot parse scalar: {s:?}")))
}

/// `(a,b)` for an open interval, `geometric:q` for `{q^k}`, a comma list
/// for a finite set, or raw JSON for everything else.
pub fn parse_values(spec: &str) -> Result<AdmissibleValues, CliError> {
    let spec = spec.trim();
    if looks_like_json(spec) {
        return Ok(serde_json::from_str(spec)?);
    }
    if let Some(rest) = spec.strip_prefix("geometric:") {
        return Ok(AdmissibleValues::Geometric {
            ratio: parse_scalar(rest)?,
        });
    }
    if let Some(inner) = spec.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        let (lo, hi) = inner
            .split_once(',')
            .ok_or_else(|| CliError::Usage(format!("interval needs two bounds: {spec:?}")))?;
        return Ok(AdmissibleValues::Interval {
            lo: parse_scalar(lo)?,
            hi: parse_scalar(hi)?,
        });
    }
    let values = spec
        .split(',')
        .map(parse_scalar)
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err(CliError::Usage("empty value set".into()));
    }
    Ok(AdmissibleValues::Finite(values))
}

/// `cardinality:y`, `regular:m`, `isosceles:m`, `right:m`,
/// `volume:m:VALUES`, `edge-lengths:k:VALUES`, or raw JSON.
pub fn parse_property(spec: &str) -> Result<Property, CliError> {
    let spec = spec.trim();
    if looks_like_json(spec) {
        return Ok(serde_json::from_str(spec)?);
    }
    let bad = || CliError::Usage(format!("cannot parse property: {spec:?}"));
    let (head, rest) = spec.split_once(':').ok_or_else(bad)?;
    let int = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    match head {
        "cardinality" => Ok(Property::Cardinality {
            y: rest.trim().parse().map_err(|_| bad())?,
        }),
        "regular" => Ok(Property::Regular { m: int(rest)? }),
        "isosceles" => Ok(Property::Isosceles { m: int(rest)? }),
        "right" => Ok(Property::Right { m: int(rest)? }),
        "volume" => {
            let (m, values) = rest.split_once(':').ok_or_else(bad)?;
            Ok(Property::Volume {
                m: int(m)?,
                volumes: parse_values(values)?,
            })
        }
        "edge-lengths" => {
            let (k, values) = rest.split_once(':').ok_or_else(bad)?;
            Ok(Property::EdgeLengths {
                k: int(k)?,
                lengths: parse_values(values)?,
            })
        }
        _ => Err(bad()),
    }
}

/// `strip`, `grid:DELTA`, `merged-strip:COLORS`, `constant:C`,
/// `rational2d`, `two-ball`, or raw JSON.
pub fn parse_coloring(spec: &str, n: usize) -> Result<Coloring, CliError> {
    let spec = spec.trim();
    if looks_like_json(spec) {
        return Ok(serde_json::from_str(spec)?);
    }
    let bad = || CliError::Usage(format!("cannot parse coloring: {spec:?}"));
    match spec.split_once(':') {
        None => match spec {
            "strip" => Ok(Coloring::Strip { n }),
            "rational2d" => Ok(Coloring::Rational2d),
            "two-ball" => Ok(Coloring::TwoBall),
            _ => Err(bad()),
        },
        Some(("grid", delta)) => Coloring::grid(n, parse_scalar(delta)?).map_err(CliError::from),
        Some(("merged-strip", colors)) => Ok(Coloring::MergedStrip {
            n,
            colors: colors.trim().parse().map_err(|_| bad())?,
        }),
        Some(("constant", c)) => Ok(Coloring::Constant {
            color: c.trim().parse().map_err(|_| bad())?,
        }),
        _ => Err(bad()),
    }
}

/// `all` or a JSON `CenterSet`.
pub fn parse_centers(spec: &str) -> Result<CenterSet, CliError> {
    let spec = spec.trim();
    if spec == "all" {
        return Ok(CenterSet::All);
    }
    if looks_like_json(spec) || spec.starts_with('"') {
        return Ok(serde_json::from_str(spec)?);
    }
    Err(CliError::Usage(format!(
        "cannot parse center set: {spec:?}"
    )))
}

/// `x0,y0,x1,y1` with `x0 < x1` and `y0 < y1`.
pub fn parse_view(spec: &str) -> Result<[f64; 4], CliError> {
    let parts = spec
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<Vec<f64>, _>>()
        .map_err(|_| CliError::Usage(format!("cannot parse view box: {spec:?}")))?;
    let [x0, y0, x1, y1] = parts[..] else {
        return Err(CliError::Usage("view box needs four numbers".into()));
    };
    if !(x0 < x1 && y0 < y1) || parts.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Usage(format!("degenerate view box: {spec:?}")));
    }
    Ok([x0, y0, x1, y1])
}
