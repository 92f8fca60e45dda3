//! Flat `key = value` run configuration.
//!
//! ```text
//! # comment
//! epsilon = 1
//! n = 4
//! base.kind = geodesic_sphere
//! base.r = 0.5236
//! profile.family = linear
//! profile.alpha = 1
//! s_range = 0, 0.5, 11
//! ```
//!
//! In sweep configs every key except `s_range` may hold a comma-separated
//! list; the sweep runs over the cartesian product in file order.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use prodform_core::{
    make_base, AnalyticProfile, BaseKind, IsoparametricBase, Profile, SpaceForm, DEFAULT_TOL,
};

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Parse { line: usize, msg: String },
    Field { field: String, msg: String },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Parse { line, msg } => write!(f, "line {line}: {msg}"),
            ConfigError::Field { field, msg } => write!(f, "{field}: {msg}"),
        }
    }
}

impl std::error::Error for ConfigError {}

fn field_err(field: &str, msg: impl Into<String>) -> ConfigError {
    ConfigError::Field {
        field: field.to_string(),
        msg: msg.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutFormat::Csv),
            "json" => Ok(OutFormat::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

const KEYS: &[&str] = &[
    "epsilon",
    "n",
    "tol",
    "s_range",
    "base.kind",
    "base.r",
    "base.p",
    "base.q",
    "base.orientation",
    "profile.family",
    "profile.alpha",
    "profile.beta",
    "profile.c0",
    "profile.c1",
    "profile.c2",
    "profile.amplitude",
    "profile.rate",
    "profile.offset",
    "profile.angle",
    "profile.file",
    "out.format",
    "out.path",
];

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    line: usize,
    values: Vec<String>,
}

/// Parsed but unvalidated document; keys are checked, values are raw.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    entries: BTreeMap<String, Entry>,
    order: Vec<String>,
    dir: Option<PathBuf>,
}

impl Document {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        let mut order = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError::Parse {
                    line,
                    msg: format!("expected `key = value`, got `{content}`"),
                });
            };
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(ConfigError::Parse {
                    line,
                    msg: format!("unknown key `{key}`"),
                });
            }
            let values: Vec<String> = if key == "s_range" {
                vec![value.trim().to_string()]
            } else {
                value.split(',').map(|v| v.trim().to_string()).collect()
            };
            if values.iter().any(|v| v.is_empty()) {
                return Err(ConfigError::Parse {
                    line,
                    msg: format!("empty value for `{key}`"),
                });
            }
            if entries
                .insert(key.to_string(), Entry { line, values })
                .is_some()
            {
                return Err(ConfigError::Parse {
                    line,
                    msg: format!("duplicate key `{key}`"),
                });
            }
            order.push(key.to_string());
        }
        Ok(Self {
            entries,
            order,
            dir: None,
        })
    }

    pub fn from_path(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
        let mut doc = Self::parse(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
        doc.dir = path.parent().map(Path::to_path_buf);
        Ok(doc)
    }

    /// One document per point of the cartesian product of list values.
    pub fn expand(&self) -> Vec<Document> {
        let mut first = self.clone();
        for entry in first.entries.values_mut() {
            entry.values.truncate(1);
        }
        let mut out = vec![first];
        for key in &self.order {
            let count = self.entries[key].values.len();
            if count == 1 {
                continue;
            }
            out = out
                .into_iter()
                .flat_map(|doc| {
                    (0..count).map(move |k| {
                        let mut d = doc.clone();
                        let entry = d.entries.get_mut(key).expect("key present");
                        entry.values = vec![self.entries[key].values[k].clone()];
                        d
                    })
                })
                .collect();
        }
        out
    }

    fn get(&self, key: &str) -> Result<Option<&str>, ConfigError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(e) if e.values.len() == 1 => Ok(Some(e.values[0].as_str())),
            Some(e) => Err(ConfigError::Parse {
                line: e.line,
                msg: format!(
                    "`{key}` lists several values; lists are only allowed in sweep configs"
                ),
            }),
        }
    }

    fn number<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        let Some(v) = self.get(key)? else {
            return Ok(None);
        };
        v.parse::<T>().map(Some).map_err(|_| ConfigError::Parse {
            line: self.entries[key].line,
            msg: format!("`{key}`: cannot parse `{v}` as a number"),
        })
    }

    fn required<T: FromStr>(&self, key: &str) -> Result<T, ConfigError> {
        self.number(key)?
            .ok_or_else(|| field_err(key, "missing required field"))
    }

    /// Short `key=value` description of the list-valued keys of `self`, used
    /// to label sweep rows.
    pub fn label(&self, of: &Document) -> String {
        of.order
            .iter()
            .filter(|k| of.entries[*k].values.len() > 1)
            .filter_map(|k| self.get(k).ok().flatten().map(|v| format!("{k}={v}")))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileSpec {
    Analytic(AnalyticProfile),
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SRange {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl SRange {
    pub fn grid(&self) -> Vec<f64> {
        prodform_core::suites::uniform_grid(self.start, self.stop, self.count)
    }
}

impl FromStr for SRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!("expected `start, stop, count`, got `{s}`"));
        }
        let num = |p: &str| {
            p.parse::<f64>()
                .map_err(|_| format!("cannot parse `{p}` as a number"))
        };
        let start = num(parts[0])?;
        let stop = num(parts[1])?;
        let count = parts[2]
            .parse::<usize>()
            .map_err(|_| format!("cannot parse `{}` as a count", parts[2]))?;
        if count == 0 {
            return Err("count must be >= 1".into());
        }
        if count > 1 && !(start < stop) {
            return Err(format!(
                "start < stop required when count > 1, got {start} >= {stop}"
            ));
        }
        if !start.is_finite() || !stop.is_finite() {
            return Err("range endpoints must be finite".into());
        }
        Ok(SRange { start, stop, count })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub sf: SpaceForm,
    pub base: BaseKind,
    pub orientation: i32,
    pub profile: ProfileSpec,
    pub s_range: SRange,
    pub tol: f64,
    pub out_format: Option<OutFormat>,
    pub out_path: Option<PathBuf>,
}

impl RunConfig {
    #[cfg(test)]
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Self::from_document(&Document::parse(text)?)
    }

    pub fn from_document(doc: &Document) -> Result<Self, ConfigError> {
        let mut used = vec!["epsilon", "n", "tol", "s_range", "out.format", "out.path"];

        let epsilon: i32 = doc.required("epsilon")?;
        if epsilon != 1 && epsilon != -1 {
            return Err(field_err("epsilon", "epsilon must be ±1"));
        }
        let n: usize = doc.required("n")?;
        let sf = SpaceForm::new(epsilon, n).map_err(|e| field_err("n", e.to_string()))?;

        let tol: f64 = doc.number("tol")?.unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0) {
            return Err(field_err("tol", format!("tol must be > 0, got {tol}")));
        }
        let s_range: SRange = doc
            .get("s_range")?
            .ok_or_else(|| field_err("s_range", "missing required field"))?
            .parse()
            .map_err(|e: String| field_err("s_range", e))?;

        let kind = doc
            .get("base.kind")?
            .ok_or_else(|| field_err("base.kind", "missing required field"))?;
        let base = match kind {
            "totally_geodesic" => BaseKind::TotallyGeodesic,
            "geodesic_sphere" => {
                used.push("base.r");
                BaseKind::GeodesicSphere {
                    radius: doc.required("base.r")?,
                }
            }
            "horosphere" => BaseKind::Horosphere,
            "equidistant" => {
                used.push("base.r");
                BaseKind::Equidistant {
                    distance: doc.required("base.r")?,
                }
            }
            "clifford_product" => {
                used.extend(["base.r", "base.p", "base.q"]);
                BaseKind::CliffordProduct {
                    angle: doc.required("base.r")?,
                    p: doc.required("base.p")?,
                    q: doc.required("base.q")?,
                }
            }
            other => {
                return Err(field_err(
                    "base.kind",
                    format!("unknown base kind `{other}`"),
                ))
            }
        };
        used.extend(["base.kind", "base.orientation"]);
        let orientation: i32 = doc.number("base.orientation")?.unwrap_or(1);

        let family = doc
            .get("profile.family")?
            .ok_or_else(|| field_err("profile.family", "missing required field"))?;
        used.push("profile.family");
        let mut take = |key: &'static str, default: Option<f64>| -> Result<f64, ConfigError> {
            used.push(key);
            match default {
                Some(d) => Ok(doc.number(key)?.unwrap_or(d)),
                None => doc.required(key),
            }
        };
        let profile = match family {
            "linear" => ProfileSpec::Analytic(AnalyticProfile::Linear {
                alpha: take("profile.alpha", None)?,
                beta: take("profile.beta", Some(0.0))?,
            }),
            "quadratic" => ProfileSpec::Analytic(AnalyticProfile::Quadratic {
                c0: take("profile.c0", Some(0.0))?,
                c1: take("profile.c1", None)?,
                c2: take("profile.c2", None)?,
            }),
            "exponential" => ProfileSpec::Analytic(AnalyticProfile::Exponential {
                amplitude: take("profile.amplitude", None)?,
                rate: take("profile.rate", None)?,
                offset: take("profile.offset", Some(0.0))?,
            }),
            "sinh" => ProfileSpec::Analytic(AnalyticProfile::Sinh {
                amplitude: take("profile.amplitude", None)?,
                rate: take("profile.rate", None)?,
            }),
            "constant_angle" => ProfileSpec::Analytic(AnalyticProfile::ConstantAngle {
                angle: take("profile.angle", None)?,
            }),
            "samples" => {
                used.push("profile.file");
                let file = doc
                    .get("profile.file")?
                    .ok_or_else(|| field_err("profile.file", "missing required field"))?;
                let path = PathBuf::from(file);
                ProfileSpec::File(match &doc.dir {
                    Some(dir) if path.is_relative() => dir.join(path),
                    _ => path,
                })
            }
            other => {
                return Err(field_err(
                    "profile.family",
                    format!("unknown profile family `{other}`"),
                ))
            }
        };

        if let Some(stray) = doc.order.iter().find(|k| !used.contains(&k.as_str())) {
            return Err(ConfigError::Parse {
                line: doc.entries[stray].line,
                msg: format!(
                    "key `{stray}` does not apply to base `{kind}` with profile `{family}`"
                ),
            });
        }

        let out_format = doc
            .get("out.format")?
            .map(|v| {
                v.parse::<OutFormat>()
                    .map_err(|e| field_err("out.format", e))
            })
            .transpose()?;
        let out_path = doc.get("out.path")?.map(PathBuf::from);

        Ok(RunConfig {
            sf,
            base,
            orientation,
            profile,
            s_range,
            tol,
            out_format,
            out_path,
        })
    }

    pub fn build_base(&self) -> anyhow::Result<IsoparametricBase> {
        let base = make_base(self.sf, self.base).map_err(|e| anyhow::anyhow!("base: {e}"))?;
        base.with_orientation(self.orientation)
            .map_err(|e| anyhow::anyhow!("base.orientation: {e}"))
    }

    pub fn build_profile(&self) -> anyhow::Result<Profile> {
        let profile = match &self.profile {
            ProfileSpec::Analytic(family) => {
                let lo = self.s_range.start;
                let hi = if self.s_range.count > 1 {
                    self.s_range.stop
                } else {
                    lo
                };
                // a single-point grid still needs a non-degenerate domain
                let hi = if hi > lo { hi } else { lo + 1.0 };
                Profile::analytic(*family, (lo, hi))
            }
            ProfileSpec::File(path) => Profile::from_csv_path(path),
        };
        profile.map_err(|e| anyhow::anyhow!("profile: {e}"))
    }
}
