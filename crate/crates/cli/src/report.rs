//! Verification reports and their text / JSON-lines renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;
use symtrans_core::numeric::{Field, VecDisplay};

pub const SCHEMA: &str = "symtrans.report";
pub const SCHEMA_VERSION: u32 = 1;

/// Named exact values that let a failing verdict be re-checked by hand.
pub type Witness = BTreeMap<String, String>;

pub fn witness<'a>(entries: impl IntoIterator<Item = (&'a str, String)>) -> Witness {
    entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

pub fn vec_str<T: Field>(v: &[T]) -> String {
    VecDisplay(v).to_string()
}

/// Aggregate verdict for one named check across all trials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    /// First failing trial, by trial index.
    pub witness: Option<Witness>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub trials: usize,
    /// Ordered descriptive data (stratum, dimensions, ...).
    pub data: Vec<(String, String)>,
    pub checks: Vec<Check>,
    /// Wall-clock time; shown in text output only.
    pub elapsed: Option<Duration>,
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum Line<'a> {
    Header { schema: &'a str, version: u32, command: &'a str, seed: u64, trials: usize },
    Datum { key: &'a str, value: &'a str },
    Check(&'a Check),
    Summary { status: &'a str, checks: usize, failed: usize },
}

impl Report {
    pub fn new(command: &str, seed: u64, trials: usize) -> Self {
        Self { command: command.to_string(), seed, trials, ..Self::default() }
    }

    pub fn datum(&mut self, key: &str, value: impl ToString) {
        self.data.push((key.to_string(), value.to_string()));
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Single-trial verdict.
    pub fn verdict(&mut self, name: &str, witness: Option<Witness>) {
        self.checks.push(Check { name: name.to_string(), trials: 1, failures: usize::from(witness.is_some()), witness });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    fn status(&self) -> &'static str {
        if self.passed() {
            "pass"
        } else {
            "fail"
        }
    }

    /// One JSON object per line; contains no timings.
    pub fn to_structured(&self) -> String {
        let mut lines = vec![Line::Header {
            schema: SCHEMA,
            version: SCHEMA_VERSION,
            command: &self.command,
            seed: self.seed,
            trials: self.trials,
        }];
        lines.extend(self.data.iter().map(|(k, v)| Line::Datum { key: k, value: v }));
        lines.extend(self.checks.iter().map(Line::Check));
        lines.push(Line::Summary {
            status: self.status(),
            checks: self.checks.len(),
            failed: self.checks.iter().filter(|c| !c.passed()).count(),
        });
        let mut out = String::new();
        for line in &lines {
            out.push_str(&serde_json::to_string(line).expect("report lines serialize"));
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("symtrans {} (seed {}, trials {})\n", self.command, self.seed, self.trials);
        for (k, v) in &self.data {
            let _ = writeln!(out, "  {k}: {v}");
        }
        for c in &self.checks {
            let tag = if c.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "  {tag} {} ({}/{} ok)", c.name, c.trials - c.failures, c.trials);
            if let Some(w) = &c.witness {
                for (k, v) in w {
                    let _ = writeln!(out, "       {k} = {v}");
                }
            }
        }
        let _ = write!(out, "result: {}", self.status().to_uppercase());
        if let Some(e) = self.elapsed {
            let _ = write!(out, " in {:.3}s", e.as_secs_f64());
        }
        out.push('\n');
        out
    }
}

/// Folds per-trial outcomes into one `Check` per name, keeping first-seen
/// name order and the lowest-index failure as witness.
#[derive(Default)]
pub struct Tally {
    checks: Vec<Check>,
}

impl Tally {
    pub fn record(&mut self, trial: usize, name: &str, failure: Option<Witness>) {
        let idx = match self.checks.iter().position(|c| c.name == name) {
            Some(i) => i,
            None => {
                self.checks.push(Check { name: name.to_string(), trials: 0, failures: 0, witness: None });
                self.checks.len() - 1
            }
        };
        let c = &mut self.checks[idx];
        c.trials += 1;
        if let Some(mut w) = failure {
            c.failures += 1;
            if c.witness.is_none() {
                w.insert("trial".into(), trial.to_string());
                c.witness = Some(w);
            }
        }
    }

    pub fn into_checks(self) -> Vec<Check> {
        self.checks
    }
}
