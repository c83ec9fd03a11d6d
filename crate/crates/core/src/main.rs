use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cisl::carleson::{carleson_constant, density_from, CarlesonMethod, DensityMeasure};
use cisl::error::{Error, Result};
use cisl::func::{parse_coefficients, parse_function, parse_kv, FunctionExpr};
use cisl::gapseries::{divergence_scan, lacunary_membership, m2_gap_bound};
use cisl::harness::{run_suite, SuiteConfig, TheoremId};
use cisl::norms::{seminorm, GridConfig, MobiusGrid, NormContext, SpaceSpec};
use cisl::operators::{probe_boundedness, Family, OperatorKind, OperatorSpec};
use cisl::quad::{DiscScheme, RadialSchedule, SchemeConfig};

#[derive(Parser)]
#[command(name = "cisl", version, about = "Norms, Carleson constants and operator probes on the unit disc")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Out {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Box,
    Zhao,
    Both,
}

#[derive(clap::Args)]
struct Resolution {
    /// Suite configuration file; its scheme and grid are used.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Grid overrides, e.g. `n_max=20,angcap=512`.
    #[arg(long)]
    grid: Option<String>,
    /// Scheme overrides, e.g. `octaves=20,angles=1024`.
    #[arg(long)]
    scheme: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Seminorm of a function in a space.
    Norm {
        #[arg(long)]
        space: String,
        #[arg(long)]
        func: String,
        #[command(flatten)]
        res: Resolution,
        #[arg(long, value_enum, default_value = "json")]
        out: Out,
    },
    /// Carleson constant of `(1-|z|^2)^s |f'|^2 dA`, or of area measure with `--func area`.
    Carleson {
        #[arg(long)]
        func: String,
        #[arg(long)]
        s: f64,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
        #[command(flatten)]
        res: Resolution,
        #[arg(long, value_enum, default_value = "json")]
        out: Out,
    },
    /// Norm ratios of an operator along a test family.
    Probe {
        #[arg(long)]
        op: OperatorKind,
        #[arg(long)]
        symbol: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        family: String,
        /// Parameter range `lo..=hi` or a comma list.
        #[arg(long, default_value = "4..=13")]
        params: String,
        #[command(flatten)]
        res: Resolution,
        #[arg(long, value_enum, default_value = "json")]
        out: Out,
    },
    /// Gap-series criteria: `qs:s=..`, `besov:p=..`, `m2bound[:p=..]`, `diverge:g=<expr>,s=..`.
    Gap {
        #[arg(long)]
        coeffs: String,
        #[arg(long)]
        test: String,
        /// Dyadic radii `lo..=hi` for `m2bound` and `diverge`.
        #[arg(long, default_value = "1..=18")]
        radii: String,
        #[arg(long, value_enum, default_value = "json")]
        out: Out,
    },
    /// Run verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        ids: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Coarse built-in profile.
        #[arg(long)]
        low_res: bool,
    },
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn num(k: &str, v: &str) -> Result<f64> {
    v.parse::<f64>().map_err(|_| config_err(format!("{k}: {v:?} is not a number")))
}

fn context(res: &Resolution) -> Result<NormContext> {
    let (mut scheme, mut grid) = match &res.config {
        Some(p) => {
            let c = SuiteConfig::from_path(p)?;
            (c.scheme, c.grid)
        }
        None => (SchemeConfig::default(), GridConfig::default()),
    };
    if let Some(g) = &res.grid {
        for (k, v) in parse_kv(g)? {
            match k.as_str() {
                "n_max" => grid.n_max = num(&k, &v)? as u32,
                "angcap" | "angle_cap" => grid.angle_cap = num(&k, &v)? as usize,
                "angle_base" => grid.angle_base = num(&k, &v)? as usize,
                "refine" => grid.refine = v == "true" || v == "1",
                _ => return Err(config_err(format!("unknown grid key {k:?}"))),
            }
        }
    }
    if let Some(s) = &res.scheme {
        for (k, v) in parse_kv(s)? {
            match k.as_str() {
                "octaves" => scheme.octaves = num(&k, &v)? as u32,
                "angles" => scheme.angles = num(&k, &v)? as usize,
                "bands_per_octave" => scheme.bands_per_octave = num(&k, &v)? as u32,
                "nodes_per_band" => scheme.nodes_per_band = num(&k, &v)? as usize,
                "oversample" => scheme.oversample = num(&k, &v)?,
                _ => return Err(config_err(format!("unknown scheme key {k:?}"))),
            }
        }
    }
    NormContext::new(scheme, grid)
}

fn range(s: &str) -> Result<Vec<u32>> {
    let bad = || config_err(format!("bad range {s:?}"));
    if let Some((a, b)) = s.split_once("..=") {
        let (a, b): (u32, u32) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        return Ok((a..=b).collect());
    }
    s.split(',').map(|t| t.trim().parse::<u32>().map_err(|_| bad())).collect()
}

fn emit_json<T: Serialize>(v: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v).map_err(|e| config_err(e.to_string()))?);
    Ok(())
}

fn emit_csv(header: &str, rows: impl IntoIterator<Item = Vec<f64>>) {
    println!("{header}");
    for r in rows {
        println!("{}", r.iter().map(|v| format!("{v:e}")).collect::<Vec<_>>().join(","));
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Norm { space, func, res, out } => {
            let space: SpaceSpec = space.parse()?;
            let f = parse_function(&func)?;
            let rep = seminorm(space, &f, &context(&res)?)?;
            match out {
                Out::Json => emit_json(&rep)?,
                Out::Csv => emit_csv("level,value", rep.refinement_trace.iter().map(|t| vec![t.0, t.1])),
            }
        }
        Cmd::Carleson { func, s, alpha, method, res, out } => {
            let ctx = context(&res)?;
            let mu = if func.trim() == "area" {
                DensityMeasure::area(ctx.scheme.clone())
            } else {
                density_from(&parse_function(&func)?, s, DiscScheme::new(ctx.scheme.config.clone())?)?
            };
            let grid = MobiusGrid::new(ctx.grid.config.clone())?;
            let methods: Vec<CarlesonMethod> = match method {
                Method::Box => vec![CarlesonMethod::Box],
                Method::Zhao => vec![CarlesonMethod::Zhao],
                Method::Both => vec![CarlesonMethod::Box, CarlesonMethod::Zhao],
            };
            let reps = methods.iter().map(|&m| Ok((m.to_string(), carleson_constant(&mu, s, alpha, m, &grid)?))).collect::<Result<Vec<_>>>()?;
            let ratio = (reps.len() == 2).then(|| reps[1].1.value / reps[0].1.value);
            match out {
                Out::Json => {
                    let mut obj = serde_json::Map::new();
                    for (name, r) in &reps {
                        obj.insert(name.clone(), serde_json::to_value(r).map_err(|e| config_err(e.to_string()))?);
                    }
                    if let Some(q) = ratio {
                        obj.insert("zhao_over_box".into(), q.into());
                    }
                    emit_json(&obj)?;
                }
                Out::Csv => {
                    println!("method,value,converged");
                    for (name, r) in &reps {
                        println!("{name},{:e},{}", r.value, r.converged);
                    }
                }
            }
        }
        Cmd::Probe { op, symbol, from, to, family, params, res, out } => {
            let spec = OperatorSpec::new(op, parse_function(&symbol)?)?;
            let family: Family = family.parse()?;
            let ctx = context(&res)?;
            let rep = probe_boundedness(&spec, from.parse()?, to.parse()?, &family, &range(&params)?, &ctx, &Default::default())?;
            match out {
                Out::Json => emit_json(&rep)?,
                Out::Csv => emit_csv(
                    "param,x_norm,y_norm,ratio",
                    (0..rep.params.len()).map(|i| vec![rep.params[i], rep.x_norms[i], rep.y_norms[i], rep.ratios[i]]),
                ),
            }
        }
        Cmd::Gap { coeffs, test, radii, out } => {
            let a = parse_coefficients(&coeffs)?;
            let (name, rest) = test.split_once(':').unwrap_or((test.as_str(), ""));
            let sched = RadialSchedule::dyadic(range(&radii)?)?;
            match name.trim() {
                "m2bound" => {
                    let kv = parse_kv(rest)?;
                    let p = kv.get("p").map(|v| num("p", v)).transpose()?;
                    let rep = m2_gap_bound(&a, &sched, p)?;
                    match out {
                        Out::Json => emit_json(&rep)?,
                        Out::Csv => emit_csv("r,m2,ratio", rep.rows.iter().map(|r| vec![r.r, r.m2, r.ratio.unwrap_or(f64::NAN)])),
                    }
                }
                "diverge" => {
                    let kv = parse_kv(rest)?;
                    let g = parse_function(kv.get("g").map(String::as_str).unwrap_or("poly:[1]"))?;
                    let s = num("s", kv.get("s").ok_or_else(|| config_err("diverge needs s="))?)?;
                    let rep = divergence_scan(&g, &FunctionExpr::Gap(a), s, &sched, &Default::default())?;
                    match out {
                        Out::Json => emit_json(&rep)?,
                        Out::Csv => emit_csv(
                            "r,partial,increment",
                            (0..rep.partials.len()).map(|i| vec![rep.radii.radii[i], rep.partials[i], rep.increments_per_doubling[i]]),
                        ),
                    }
                }
                _ => {
                    let space: SpaceSpec = test.parse()?;
                    let rep = lacunary_membership(&a, space, &Default::default())?;
                    match out {
                        Out::Json => emit_json(&rep)?,
                        Out::Csv => emit_csv(
                            "k,partial_sum",
                            rep.partial_sums.iter().enumerate().map(|(k, &s)| vec![(k + 1) as f64, s]),
                        ),
                    }
                }
            }
        }
        Cmd::Verify { ids, config, out, low_res } => {
            let mut cfg = match (&config, low_res) {
                (Some(p), _) => SuiteConfig::from_path(p)?,
                (None, true) => SuiteConfig::low_resolution(),
                (None, false) => SuiteConfig::default(),
            };
            if out.is_some() {
                cfg.out_dir = out;
            }
            let ids = TheoremId::parse_list(&ids)?;
            let rep = run_suite(&ids, &cfg)?;
            for v in &rep.verdicts {
                println!("{:<18} {:<13} {:>8} ms", v.id.as_str(), v.status.to_string(), v.runtime_ms);
            }
            println!("aggregate: {}  config {}", rep.status, rep.config_hash);
            return Ok(rep.exit_code());
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            let invalid = matches!(
                e,
                Error::Parse { .. } | Error::Domain(_) | Error::Config(_) | Error::Registry(_) | Error::EmptyInput(_)
            );
            ExitCode::from(if invalid { 2 } else { 1 })
        }
    }
}
