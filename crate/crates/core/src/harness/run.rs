use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::config::SuiteConfig;
use crate::harness::registry::TheoremId;
use crate::harness::suites::{run, Suite};
use crate::harness::verdict::{Status, TheoremVerdict};

pub fn verify(id: TheoremId, config: &SuiteConfig) -> Result<TheoremVerdict> {
    config.validate()?;
    let start = Instant::now();
    let mut suite = Suite::new(config)?;
    run(id, &mut suite)?;
    if suite.evidence.is_empty() {
        return Err(Error::Registry(format!("{id} produced no evidence")));
    }
    Ok(TheoremVerdict {
        id,
        status: Status::aggregate(suite.evidence.iter().map(|e| e.status)),
        evidence: suite.evidence,
        notes: suite.notes,
        runtime_ms: start.elapsed().as_millis(),
        config_hash: config.hash(),
        tables: suite.tables,
        scans: suite.scans,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config_hash: String,
    pub profile: String,
    pub status: Status,
    pub verdicts: Vec<TheoremVerdict>,
}

impl SuiteReport {
    /// 0 all pass, 1 any fail, 3 inconclusive only.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 3,
        }
    }
}

fn threads(config: &SuiteConfig, jobs: usize) -> usize {
    let n = if config.parallelism == 0 {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    } else {
        config.parallelism
    };
    n.clamp(1, jobs.max(1))
}

/// Runs the ids on a worker pool; verdicts come back in the order given.
pub fn run_suite(ids: &[TheoremId], config: &SuiteConfig) -> Result<SuiteReport> {
    if ids.is_empty() {
        return Err(Error::EmptyInput("theorem id list".into()));
    }
    config.validate()?;
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<TheoremVerdict>>>> = ids.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..threads(config, ids.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= ids.len() {
                    break;
                }
                let v = verify(ids[i], config);
                *slots[i].lock().unwrap() = Some(v);
            });
        }
    });
    let verdicts = slots
        .into_iter()
        .map(|m| m.into_inner().unwrap().expect("every slot is filled"))
        .collect::<Result<Vec<_>>>()?;
    let report = SuiteReport {
        config_hash: config.hash(),
        profile: config.profile.clone(),
        status: Status::aggregate(verdicts.iter().map(|v| v.status)),
        verdicts,
    };
    if let Some(dir) = &config.out_dir {
        write_report(&report, dir)?;
    }
    Ok(report)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |e| Error::Io { path: path.to_path_buf(), source: e }
}

fn file_stem(id: TheoremId, name: &str) -> String {
    let id: String = id.as_str().chars().map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '_' }).collect();
    format!("{id}__{name}.csv")
}

/// `report.json`, `evidence/*.csv` and `scans/*.csv` under `dir`.
pub fn write_report(report: &SuiteReport, dir: &Path) -> Result<()> {
    let evidence = dir.join("evidence");
    let scans = dir.join("scans");
    for d in [dir, evidence.as_path(), scans.as_path()] {
        std::fs::create_dir_all(d).map_err(io_err(d))?;
    }
    let path = dir.join("report.json");
    let json = serde_json::to_string_pretty(report).map_err(|e| Error::Config(e.to_string()))?;
    std::fs::write(&path, json).map_err(io_err(&path))?;
    for v in &report.verdicts {
        for (sub, tables) in [(&evidence, &v.tables), (&scans, &v.scans)] {
            for t in tables.iter() {
                let p = sub.join(file_stem(v.id, &t.name));
                std::fs::write(&p, t.to_csv()).map_err(io_err(&p))?;
            }
        }
    }
    Ok(())
}
