//! Structured check reports.
//!
//! Verdicts mirror module outputs verbatim; `UNDECIDED` is never coerced.
//! The machine-readable `.msr` rendering is deterministic for a fixed scene
//! and seed (timings stay in the human text only) and re-parses to the same
//! verdict list.

use serde::Serialize;

use multisym::Tri;
use multisym::ZeroVerdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "UNDECIDED")]
    Undecided,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Pass => write!(f, "PASS"),
            Verdict::Fail => write!(f, "FAIL"),
            Verdict::Undecided => write!(f, "UNDECIDED"),
        }
    }
}

impl From<Tri> for Verdict {
    fn from(t: Tri) -> Verdict {
        match t {
            Tri::Yes => Verdict::Pass,
            Tri::No => Verdict::Fail,
            Tri::Undecided => Verdict::Undecided,
        }
    }
}

impl From<ZeroVerdict> for Verdict {
    fn from(z: ZeroVerdict) -> Verdict {
        match z {
            ZeroVerdict::Zero => Verdict::Pass,
            ZeroVerdict::NonZero => Verdict::Fail,
            ZeroVerdict::Undecided => Verdict::Undecided,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub targets: Vec<String>,
    pub verdict: Verdict,
    pub certificates: Vec<String>,
}

impl CheckRecord {
    pub fn new(id: impl Into<String>, targets: &[&str], verdict: Verdict) -> CheckRecord {
        CheckRecord {
            id: id.into(),
            targets: targets.iter().map(|s| s.to_string()).collect(),
            verdict,
            certificates: Vec::new(),
        }
    }

    pub fn cert(mut self, text: impl Into<String>) -> CheckRecord {
        let text = text.into();
        debug_assert!(!text.contains(" :: "));
        self.certificates.push(text.replace('\n', " "));
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub samples: u32,
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn new(command: &str, seed: u64, samples: u32) -> Report {
        Report {
            command: command.to_string(),
            seed,
            samples,
            records: Vec::new(),
        }
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        let mut pass = 0;
        let mut fail = 0;
        let mut undecided = 0;
        for r in &self.records {
            match r.verdict {
                Verdict::Pass => pass += 1,
                Verdict::Fail => fail += 1,
                Verdict::Undecided => undecided += 1,
            }
        }
        (pass, fail, undecided)
    }

    /// Exit code: 0 iff no FAIL; UNDECIDED is 0 unless `strict`.
    pub fn exit_code(&self, strict: bool) -> i32 {
        let (_, fail, undecided) = self.counts();
        if fail > 0 || (strict && undecided > 0) {
            1
        } else {
            0
        }
    }

    /// The deterministic machine-readable rendering (`.msr`).
    pub fn to_msr(&self) -> String {
        let mut out = String::new();
        out.push_str("msr-version 1\n");
        out.push_str(&format!("command {}\n", self.command));
        out.push_str(&format!("seed {}\n", self.seed));
        out.push_str(&format!("samples {}\n", self.samples));
        for r in &self.records {
            out.push_str(&format!(
                "check {} verdict={} targets={}",
                r.id,
                r.verdict,
                r.targets.join(",")
            ));
            for c in &r.certificates {
                out.push_str(" :: ");
                out.push_str(c);
            }
            out.push('\n');
        }
        let (pass, fail, undecided) = self.counts();
        out.push_str(&format!(
            "summary pass={pass} fail={fail} undecided={undecided}\n"
        ));
        out
    }

    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        let (pass, fail, undecided) = self.counts();
        v["summary"] = serde_json::json!({
            "pass": pass, "fail": fail, "undecided": undecided,
        });
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    /// Human text; timing is shown here and only here.
    pub fn human(&self, elapsed_ms: f64, quiet: bool) -> String {
        let mut out = String::new();
        if !quiet {
            out.push_str(&format!(
                "multisym {} (seed {}, {} sample points)\n",
                self.command, self.seed, self.samples
            ));
            for r in &self.records {
                out.push_str(&format!("  [{}] {}\n", r.verdict, r.id));
                for c in &r.certificates {
                    out.push_str(&format!("      {c}\n"));
                }
            }
        }
        let (pass, fail, undecided) = self.counts();
        out.push_str(&format!(
            "summary: {pass} pass, {fail} fail, {undecided} undecided ({elapsed_ms:.1} ms)\n"
        ));
        out
    }
}

/// Re-parse the verdict lines of an `.msr` rendering.
pub fn parse_msr(text: &str) -> Vec<(String, Verdict)> {
    let mut out = Vec::new();
    for line in text.lines() {
        let Some(rest) = line.strip_prefix("check ") else {
            continue;
        };
        let head = rest.split(" :: ").next().unwrap_or(rest);
        let mut id = None;
        let mut verdict = None;
        for (i, tok) in head.split_whitespace().enumerate() {
            if i == 0 {
                id = Some(tok.to_string());
            } else if let Some(v) = tok.strip_prefix("verdict=") {
                verdict = match v {
                    "PASS" => Some(Verdict::Pass),
                    "FAIL" => Some(Verdict::Fail),
                    "UNDECIDED" => Some(Verdict::Undecided),
                    _ => None,
                };
            }
        }
        if let (Some(id), Some(verdict)) = (id, verdict) {
            out.push((id, verdict));
        }
    }
    out
}
