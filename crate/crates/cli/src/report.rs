use std::f64::consts::TAU;
use std::io::Write;

use cleanflex::osculation::Multiplicity;
use cleanflex::{Arc, TheoremCheck};

pub const FLEX_HEADER: [&str; 5] = [
    "kind",
    "location_start",
    "location_end",
    "multiplicity_total",
    "osculating_coeffs",
];
pub const CHECK_HEADER: [&str; 4] = ["check", "required", "observed", "pass"];

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub kind: String,
    pub location: Arc,
    pub multiplicity: Option<Multiplicity>,
    pub coeffs: Vec<f64>,
}

/// A summary line. Informational lines carry no requirement and no verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub required: Option<String>,
    pub observed: String,
    pub pass: Option<bool>,
}

impl Check {
    pub fn info(name: &str, observed: impl ToString) -> Self {
        Self {
            name: name.into(),
            required: None,
            observed: observed.to_string(),
            pass: None,
        }
    }

    pub fn failed(&self) -> bool {
        self.pass == Some(false)
    }
}

impl From<&TheoremCheck> for Check {
    fn from(c: &TheoremCheck) -> Self {
        Self {
            name: c.name.clone(),
            required: Some(c.required.to_string()),
            observed: c.observed.to_string(),
            pass: Some(c.pass),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub rows: Vec<Row>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn failed(&self) -> bool {
        self.checks.iter().any(Check::failed)
    }
}

/// Rounds to 12 significant digits and prints the shortest form.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let r: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    if (1e-5..1e15).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn check_fields(c: &Check) -> [String; 4] {
    [
        c.name.clone(),
        c.required.clone().unwrap_or_default(),
        c.observed.clone(),
        c.pass.map(|p| p.to_string()).unwrap_or_default(),
    ]
}

pub fn emit_csv<W: Write>(report: &Report, w: W) -> csv::Result<()> {
    let mut out = csv::WriterBuilder::new().flexible(true).from_writer(w);
    out.write_record(FLEX_HEADER)?;
    for r in &report.rows {
        // a start just below 2π would print as 2π after rounding
        let (start, end) = if sig12(r.location.start) == sig12(TAU) {
            (0.0, r.location.end - r.location.start)
        } else {
            (r.location.start, r.location.end)
        };
        let coeffs: Vec<String> = r.coeffs.iter().map(|c| sig12(*c)).collect();
        out.write_record([
            r.kind.clone(),
            sig12(start),
            sig12(end),
            r.multiplicity.map(|m| m.to_string()).unwrap_or_default(),
            coeffs.join(";"),
        ])?;
    }
    out.write_record(CHECK_HEADER)?;
    for c in &report.checks {
        out.write_record(check_fields(c))?;
    }
    out.flush()?;
    Ok(())
}

/// One summary block per corpus function, keyed by its index in the
/// seeded corpus.
pub fn emit_corpus_csv<W: Write>(blocks: &[(usize, Vec<Check>)], w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["index", "check", "required", "observed", "pass"])?;
    for (i, checks) in blocks {
        for c in checks {
            let [name, req, obs, pass] = check_fields(c);
            out.write_record([i.to_string(), name, req, obs, pass])?;
        }
    }
    out.flush()?;
    Ok(())
}
