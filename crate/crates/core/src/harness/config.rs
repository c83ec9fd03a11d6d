use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::func::lacunary::MAX_EVAL_DEPTH;
use crate::gapseries::{ScanThresholds, SeriesThresholds};
use crate::norms::{GridConfig, NormContext};
use crate::operators::ProbeThresholds;
use crate::quad::SchemeConfig;

/// Parameter schedules for the probe families (dyadic exponents `n` with
/// `a = 1 - 2^{-n}`, or truncation depths for gap series).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Schedules {
    pub boundary: Vec<u32>,
    /// Members of `h_a` when measured in `B^p`; the growth is a power of `n`.
    pub qs_to_besov: Vec<u32>,
    pub monomial_degrees: Vec<u32>,
    pub fp_depths: Vec<u32>,
    /// Dyadic radii for divergence scans.
    pub scan: Vec<u32>,
    /// Dyadic radii for gap-series growth checks.
    pub m2: Vec<u32>,
}

impl Default for Schedules {
    fn default() -> Self {
        Schedules {
            boundary: (6..=14).collect(),
            qs_to_besov: (4..=14).collect(),
            monomial_degrees: vec![2, 4, 8, 16, 32, 64, 128, 256],
            fp_depths: (6..=14).collect(),
            scan: (1..=18).collect(),
            m2: (4..=22).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Depths {
    /// Gap-series depth for coefficient criteria.
    pub gap: usize,
    /// Gap-series depth for functions evaluated in the disc.
    pub scan: usize,
    /// Depth of the sharp constructions.
    pub agw: usize,
}

impl Default for Depths {
    fn default() -> Self {
        Depths { gap: 512, scan: 40, agw: 48 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Coefficientwise algebraic identities.
    pub exact: f64,
    /// Pointwise identities evaluated through derivatives.
    pub pointwise: f64,
    pub division: f64,
    pub contraction_slack: f64,
    /// Lower bound for `M_2(r_n, f') (1-r_n)^gamma` of sharp constructions.
    pub agw_min_ratio: f64,
    /// Upper bound for the `B^p` growth margin of the `f_a` family.
    pub growth_margin: f64,
    /// Corpus-wide spread allowed between the two log-Q constants.
    pub variant_factor: f64,
    /// Relative error allowed on the `Q_s -> B^p` log-log slope `1/p'`.
    pub slope_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            exact: 1e-12,
            pointwise: 1e-10,
            division: 1e-8,
            contraction_slack: 1e-8,
            agw_min_ratio: 0.3,
            growth_margin: 2.0,
            variant_factor: 16.0,
            slope_rel: 0.25,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    pub profile: String,
    pub scheme: SchemeConfig,
    pub grid: GridConfig,
    pub probe: ProbeThresholds,
    pub series: SeriesThresholds,
    pub scan: ScanThresholds,
    pub schedules: Schedules,
    pub depths: Depths,
    pub tolerances: Tolerances,
    /// Output directory for `report.json`, `evidence/` and `scans/`.
    pub out_dir: Option<PathBuf>,
    /// Worker threads; 0 uses the available parallelism.
    pub parallelism: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        let scheme = SchemeConfig { octaves: 18, ..SchemeConfig::default() };
        let grid = GridConfig { n_max: 16, angle_cap: 128, ..GridConfig::default() };
        SuiteConfig {
            profile: "default".into(),
            scheme,
            grid,
            probe: ProbeThresholds::default(),
            series: SeriesThresholds::default(),
            scan: ScanThresholds::default(),
            schedules: Schedules::default(),
            depths: Depths::default(),
            tolerances: Tolerances::default(),
            out_dir: None,
            parallelism: 0,
        }
    }
}

impl SuiteConfig {
    /// Coarse quadrature and short schedules, for smoke runs. Too coarse to
    /// certify the divergence checks, which then report inconclusive.
    pub fn low_resolution() -> Self {
        let mut c = SuiteConfig::default();
        c.profile = "low".into();
        c.scheme.octaves = 12;
        c.scheme.angles = 256;
        c.grid.n_max = 8;
        c.grid.angle_cap = 32;
        c.schedules.boundary = (3..=7).collect();
        c.schedules.qs_to_besov = (3..=7).collect();
        c.schedules.monomial_degrees = vec![2, 4, 8, 16];
        c.schedules.fp_depths = (4..=8).collect();
        c.schedules.scan = (1..=10).collect();
        c.schedules.m2 = (4..=12).collect();
        c.depths.gap = 16;
        c.depths.scan = 16;
        c.depths.agw = 16;
        c
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.to_path_buf(), source: e })?;
        let cfg: SuiteConfig = serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        for (name, v) in [
            ("exact", t.exact),
            ("pointwise", t.pointwise),
            ("division", t.division),
            ("contraction_slack", t.contraction_slack),
            ("agw_min_ratio", t.agw_min_ratio),
            ("growth_margin", t.growth_margin),
            ("variant_factor", t.variant_factor),
            ("slope_rel", t.slope_rel),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("tolerance {name} must be positive, got {v}")));
            }
        }
        let s = &self.schedules;
        for (name, v) in [
            ("boundary", &s.boundary),
            ("qs_to_besov", &s.qs_to_besov),
            ("monomial_degrees", &s.monomial_degrees),
            ("fp_depths", &s.fp_depths),
            ("scan", &s.scan),
            ("m2", &s.m2),
        ] {
            if v.len() < 2 {
                return Err(Error::Config(format!("schedule {name} needs at least two entries")));
            }
        }
        let d = &self.depths;
        if d.gap < 4 || d.scan < 4 || d.agw < 4 {
            return Err(Error::Config("gap depths must be at least 4".into()));
        }
        if d.scan > MAX_EVAL_DEPTH || d.agw > MAX_EVAL_DEPTH {
            return Err(Error::Config(format!("scan and agw depths must be at most {MAX_EVAL_DEPTH}")));
        }
        if !(self.probe.divergence_slope > self.probe.bounded_slope) {
            return Err(Error::Config("divergence slope must exceed the bounded slope".into()));
        }
        if !(self.probe.saturation_ratio > 0.0 && self.probe.saturation_ratio < 1.0) {
            return Err(Error::Config("saturation ratio must lie in (0, 1)".into()));
        }
        NormContext::new(self.scheme.clone(), self.grid.clone())?;
        Ok(())
    }

    pub fn context(&self) -> Result<NormContext> {
        NormContext::new(self.scheme.clone(), self.grid.clone())
    }

    /// SHA-256 of the canonical JSON form, without the output directory and
    /// the thread count, which do not affect results.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.out_dir = None;
        c.parallelism = 0;
        let json = serde_json::to_string(&c).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
