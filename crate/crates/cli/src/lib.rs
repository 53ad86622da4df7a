//! Front end for the `cleanflex` binary: resolves a [`RunConfig`], runs the
//! requested analysis and writes the CSV report and optional SVG plot.

pub mod config;
pub mod report;
pub mod svg;

use std::io::Write;
use std::path::PathBuf;

use cleanflex::census::{antiperiodic_corpus, fourier_corpus};
use cleanflex::chebyshev::hermite_interpolate;
use cleanflex::osculation::Multiplicity;
use cleanflex::{
    bose_tally, clean_flex_census, flex_scan, operator_sign_change_check, osculating_circle, sextactic_scan,
    vertex_scan, Arc, ContactEntry, Error, FlexKind, FlexRecord, GridProfile, HermiteData, PeriodicFunction,
    SpaceDescriptor, SupportCurve, TheoremCheck,
};
use rayon::prelude::*;
use thiserror::Error;

pub use config::{Command, Flags, RunConfig, Source};
use report::{Check, Report, Row};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Analysis(#[from] Error),
    #[error("{}: {1}", .0.display())]
    Io(PathBuf, std::io::Error),
    #[error("writing CSV: {0}")]
    Csv(#[from] csv::Error),
}

/// What a run produced, before anything is written.
#[derive(Debug, Clone)]
pub struct Artifacts {
    pub csv: Vec<u8>,
    pub svg: Option<String>,
    pub passed: bool,
}

impl Artifacts {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_OK
        } else {
            EXIT_CHECK_FAILED
        }
    }
}

/// Runs the analysis and writes its outputs; returns the exit status.
pub fn run(cfg: &RunConfig) -> Result<i32, CliError> {
    let art = execute(cfg)?;
    match &cfg.out {
        Some(p) => std::fs::write(p, &art.csv).map_err(|e| CliError::Io(p.clone(), e))?,
        None => std::io::stdout()
            .write_all(&art.csv)
            .map_err(|e| CliError::Io("<stdout>".into(), e))?,
    }
    if let (Some(p), Some(svg)) = (&cfg.svg, &art.svg) {
        std::fs::write(p, svg).map_err(|e| CliError::Io(p.clone(), e))?;
    }
    Ok(art.exit_code())
}

pub fn execute(cfg: &RunConfig) -> Result<Artifacts, CliError> {
    if cfg.command == Command::Corpus {
        let blocks = corpus(cfg);
        let passed = blocks.iter().all(|(_, cs)| !cs.iter().any(Check::failed));
        let mut csv = Vec::new();
        report::emit_corpus_csv(&blocks, &mut csv)?;
        return Ok(Artifacts {
            csv,
            svg: None,
            passed,
        });
    }

    let want_svg = cfg.svg.is_some();
    let (report, svg) = match cfg.command {
        Command::Flexes | Command::Census | Command::Bose => {
            let u = cfg.function()?;
            let (mut report, records) = if cfg.antiperiodic {
                antiperiodic_flexes(&u, cfg.n, &cfg.grid)?
            } else {
                let rep = clean_flex_census(&u, cfg.n, &cfg.grid)?;
                let rows = rep.records.iter().map(flex_row).collect();
                let checks = rep.theorem_checks.iter().map(Check::from).collect();
                (Report { rows, checks }, rep.records)
            };
            match cfg.command {
                Command::Flexes => report.checks.clear(),
                Command::Bose => {
                    let tally = bose_tally(&u, &cfg.grid)?;
                    report.checks = vec![
                        Check::info("single-contact-members", tally.s_count),
                        Check::info("excess-contact-members", tally.t_count),
                        Check {
                            name: "supporting-difference".into(),
                            required: Some("2".into()),
                            observed: tally.difference.to_string(),
                            pass: Some(tally.difference == 2),
                        },
                    ];
                }
                _ => {}
            }
            let svg = want_svg.then(|| svg::function_svg(&u, &records));
            (report, svg)
        }
        Command::Curve => {
            let c = cfg.curve()?;
            curve_report(&c, &cfg.grid, want_svg)?
        }
        Command::Sextactic => {
            let c = cfg.curve()?;
            let recs = sextactic_scan(&c, &cfg.grid)?;
            let count = |k: FlexKind| recs.iter().filter(|r| r.kind == k).count();
            let report = Report {
                rows: recs
                    .iter()
                    .map(|r| Row {
                        kind: r.kind.as_str().into(),
                        location: r.location,
                        multiplicity: total(&r.contact),
                        coeffs: r.conic.coeffs.to_vec(),
                    })
                    .collect(),
                checks: [
                    TheoremCheck::at_least("sextactic-count", 6, recs.len()),
                    TheoremCheck::at_least("inscribed-sextactic", 3, count(FlexKind::CleanMax)),
                    TheoremCheck::at_least("circumscribed-sextactic", 3, count(FlexKind::CleanMin)),
                ]
                .iter()
                .map(Check::from)
                .collect(),
            };
            let svg = want_svg.then(|| svg::sextactic_svg(&c, &recs));
            (report, svg)
        }
        Command::Corpus => unreachable!(),
    };

    let mut csv = Vec::new();
    report::emit_csv(&report, &mut csv)?;
    Ok(Artifacts {
        csv,
        svg,
        passed: !report.failed(),
    })
}

fn flex_row(r: &FlexRecord) -> Row {
    Row {
        kind: r.kind.as_str().into(),
        location: r.location,
        multiplicity: r.contact.as_ref().map(|c| c.total()),
        coeffs: r.osculating.coeffs().to_vec(),
    }
}

fn total(entries: &[ContactEntry]) -> Option<Multiplicity> {
    (!entries.is_empty()).then(|| {
        entries
            .iter()
            .fold(Multiplicity::Finite(0), |acc, e| acc + e.multiplicity)
    })
}

/// Flexes against the order-`2k` antiperiodic space. There is no clean
/// classification here, so rows carry kind `flex` and the plot uses plain
/// markers.
fn antiperiodic_flexes(
    u: &PeriodicFunction,
    k: usize,
    grid: &GridProfile,
) -> Result<(Report, Vec<FlexRecord>), CliError> {
    let space = SpaceDescriptor::antiperiodic(k);
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for arc in flex_scan(u, space, grid)? {
        let data = HermiteData::sample(u, vec![(arc.midpoint(), space.order())])?;
        let osc = hermite_interpolate(space, &data)?;
        rows.push(Row {
            kind: "flex".into(),
            location: arc,
            multiplicity: None,
            coeffs: osc.coeffs().to_vec(),
        });
        records.push(FlexRecord {
            location: arc,
            kind: FlexKind::Plain,
            osculating: osc,
            contact: None,
        });
    }
    let checks = vec![Check::from(&operator_check(u, space, grid)?)];
    Ok((Report { rows, checks }, records))
}

fn operator_check(u: &PeriodicFunction, space: SpaceDescriptor, grid: &GridProfile) -> Result<TheoremCheck, Error> {
    let (count, _) = operator_sign_change_check(u, space, grid)?;
    Ok(TheoremCheck::at_least("operator-sign-changes", space.order() + 1, count))
}

fn curve_report(c: &SupportCurve, grid: &GridProfile, want_svg: bool) -> Result<(Report, Option<String>), CliError> {
    let circle_row = |kind: &str, location: Arc, multiplicity, t: f64| {
        let circ = osculating_circle(c, t);
        Row {
            kind: kind.into(),
            location,
            multiplicity,
            // support function of the circle: r + cx cos t + cy sin t
            coeffs: vec![circ.radius, circ.center[0], circ.center[1]],
        }
    };
    match vertex_scan(c, grid) {
        Err(Error::CircleDegenerate) => {
            let report = Report {
                rows: vec![circle_row("degenerate", Arc::full(), Some(Multiplicity::Infinite), 0.0)],
                checks: vec![Check::info("circle-degenerate", true)],
            };
            Ok((report, want_svg.then(|| svg::bare_curve_svg(c))))
        }
        Err(e) => Err(e.into()),
        Ok(recs) => {
            let count = |k: FlexKind| recs.iter().filter(|r| r.kind == k).count();
            let report = Report {
                rows: recs
                    .iter()
                    .map(|r| circle_row(r.kind.as_str(), r.location, total(&r.contact), r.location.midpoint()))
                    .collect(),
                checks: [
                    TheoremCheck::at_least("vertex-count", 4, recs.len()),
                    TheoremCheck::at_least("inscribed-vertices", 2, count(FlexKind::CleanMax)),
                    TheoremCheck::at_least("circumscribed-vertices", 2, count(FlexKind::CleanMin)),
                ]
                .iter()
                .map(Check::from)
                .collect(),
            };
            Ok((report, want_svg.then(|| svg::vertex_svg(c, &recs))))
        }
    }
}

/// Per-function checks over the seeded corpus, in index order. A function
/// that cannot be analysed gets a failing `error` line.
fn corpus(cfg: &RunConfig) -> Vec<(usize, Vec<Check>)> {
    let funcs = if cfg.antiperiodic {
        antiperiodic_corpus(cfg.seed, cfg.n, cfg.count)
    } else {
        fourier_corpus(cfg.seed, cfg.n, cfg.count)
    };
    funcs
        .par_iter()
        .enumerate()
        .map(|(i, u)| {
            let checks = if cfg.antiperiodic {
                operator_check(u, SpaceDescriptor::antiperiodic(cfg.n), &cfg.grid).map(|c| vec![Check::from(&c)])
            } else {
                clean_flex_census(u, cfg.n, &cfg.grid).map(|r| r.theorem_checks.iter().map(Check::from).collect())
            };
            let checks = checks.unwrap_or_else(|e| {
                vec![Check {
                    name: "error".into(),
                    required: None,
                    observed: e.to_string(),
                    pass: Some(false),
                }]
            });
            (i, checks)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failed_checks_exit_with_one() {
        let art = Artifacts {
            csv: Vec::new(),
            svg: None,
            passed: false,
        };
        assert_eq!(art.exit_code(), EXIT_CHECK_FAILED);
        let art = Artifacts { passed: true, ..art };
        assert_eq!(art.exit_code(), EXIT_OK);
    }

    #[test]
    fn corpus_checks_come_in_index_order() {
        let cfg = RunConfig::resolve(
            Some(Command::Corpus),
            Flags {
                count: Some(6),
                seed: Some(11),
                ..Flags::default()
            },
        )
        .unwrap();
        let blocks = corpus(&cfg);
        assert_eq!(blocks.iter().map(|b| b.0).collect::<Vec<_>>(), (0..6).collect::<Vec<_>>());
        assert!(blocks.iter().all(|(_, cs)| cs.len() == 3 && !cs.iter().any(Check::failed)));
    }
}
