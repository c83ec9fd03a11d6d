use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::parse::parse_kv;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceSpec {
    Bloch,
    BlochLog { alpha: f64 },
    Besov { p: f64 },
    DirichletType { s: f64 },
    Qs { s: f64 },
    QsGreen { s: f64 },
    QsLog { s: f64, alpha: f64 },
    /// Logarithmic `Q_s` with the kernel `(1/|phi_a|^2 - 1)^s`, `s < 1`.
    QsLogAlt { s: f64, alpha: f64 },
    BmoaStar,
}

impl SpaceSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::domain(m.to_string()));
        match *self {
            SpaceSpec::BlochLog { alpha } if !(alpha >= 0.0) => bad("blochlog needs alpha >= 0"),
            SpaceSpec::Besov { p } if !(p >= 1.0) || !p.is_finite() => bad("besov needs 1 <= p < inf"),
            SpaceSpec::DirichletType { s } if !(s > -1.0) => bad("dirichlet needs s > -1"),
            SpaceSpec::Qs { s } | SpaceSpec::QsGreen { s } if !(s > 0.0) => bad("Q_s needs s > 0"),
            SpaceSpec::QsLog { s, alpha } if !(s > 0.0) || !(alpha >= 0.0) => bad("qslog needs s > 0, alpha >= 0"),
            SpaceSpec::QsLogAlt { s, alpha } if !(s > 0.0 && s < 1.0) || !(alpha >= 0.0) => {
                bad("qslogalt needs 0 < s < 1, alpha >= 0")
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::Bloch => write!(f, "bloch"),
            SpaceSpec::BlochLog { alpha } => write!(f, "blochlog:alpha={alpha}"),
            SpaceSpec::Besov { p } => write!(f, "besov:p={p}"),
            SpaceSpec::DirichletType { s } => write!(f, "dirichlet:s={s}"),
            SpaceSpec::Qs { s } => write!(f, "qs:s={s}"),
            SpaceSpec::QsGreen { s } => write!(f, "qsgreen:s={s}"),
            SpaceSpec::QsLog { s, alpha } => write!(f, "qslog:s={s},alpha={alpha}"),
            SpaceSpec::QsLogAlt { s, alpha } => write!(f, "qslogalt:s={s},alpha={alpha}"),
            SpaceSpec::BmoaStar => write!(f, "bmoa"),
        }
    }
}

impl FromStr for SpaceSpec {
    type Err = Error;

    fn from_str(src: &str) -> Result<Self> {
        let (name, rest) = src.split_once(':').unwrap_or((src, ""));
        let kv = parse_kv(rest)?;
        let get = |k: &str| -> Result<f64> {
            let v = kv.get(k).ok_or_else(|| Error::Parse {
                pos: name.len() + 1,
                token: src.to_string(),
                msg: format!("missing parameter '{k}'"),
            })?;
            v.parse::<f64>().map_err(|_| Error::Parse {
                pos: name.len() + 1,
                token: v.clone(),
                msg: format!("parameter '{k}' is not a number"),
            })
        };
        let spec = match name.trim() {
            "bloch" => SpaceSpec::Bloch,
            "blochlog" => SpaceSpec::BlochLog { alpha: get("alpha")? },
            "besov" => SpaceSpec::Besov { p: get("p")? },
            "dirichlet" => SpaceSpec::DirichletType { s: get("s")? },
            "qs" => SpaceSpec::Qs { s: get("s")? },
            "qsgreen" => SpaceSpec::QsGreen { s: get("s")? },
            "qslog" => SpaceSpec::QsLog { s: get("s")?, alpha: get("alpha")? },
            "qslogalt" => SpaceSpec::QsLogAlt { s: get("s")?, alpha: get("alpha")? },
            "bmoa" => SpaceSpec::BmoaStar,
            other => {
                return Err(Error::Parse { pos: 0, token: other.to_string(), msg: "unknown space".into() });
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}
