use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::f2algebra::HomologyRow;

pub const REPORT_SCHEMA: &str = "khsq-report/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassResult {
    pub n: i32,
    pub i: i32,
    pub j: i32,
    pub class: usize,
    /// None for the canonical order
    pub order_seed: Option<u64>,
    pub matching: String,
    pub moran_support: usize,
    pub ls_support: usize,
    pub witness_found: bool,
    pub witness: Option<Vec<u32>>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub n: i32,
    pub j: i32,
    pub sample: String,
    pub z: Option<u32>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    /// "exact", "mod-coboundary" or "diagnostic" for identities; "property" otherwise
    pub kind: String,
    pub evaluations: usize,
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
}

impl CheckResult {
    pub fn new(name: &str, kind: &str) -> Self {
        CheckResult {
            name: name.to_string(),
            kind: kind.to_string(),
            evaluations: 0,
            passed: true,
            counterexample: None,
        }
    }

    pub fn record(&mut self, ok: bool, at: impl FnOnce() -> Counterexample) {
        self.evaluations += 1;
        if !ok && self.passed {
            self.passed = false;
            self.counterexample = Some(at());
        }
    }

    pub fn gating(&self) -> bool {
        self.kind != "diagnostic"
    }

    pub fn merge(&mut self, o: CheckResult) {
        self.evaluations += o.evaluations;
        if !o.passed && self.passed {
            self.passed = false;
            self.counterexample = o.counterexample;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqMatrix {
    /// "sq1", or "sq2" with a method
    pub op: String,
    pub method: String,
    pub n: i32,
    pub i: i32,
    pub j: i32,
    /// rows index target basis classes, columns source classes
    pub matrix: Vec<Vec<u8>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub fixture: String,
    pub crossings: usize,
    pub n_plus: usize,
    pub n_minus: usize,
    pub homology: Vec<HomologyRow>,
    pub classes: Vec<ClassResult>,
    pub identities: Vec<CheckResult>,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn compute_passed(&mut self) {
        self.passed = self.classes.iter().all(|c| c.witness_found && c.error.is_none())
            && self.identities.iter().chain(&self.checks).all(|c| c.passed || !c.gating());
    }

    pub fn failures(&self) -> Vec<String> {
        let mut v = vec![];
        for c in &self.classes {
            if !c.witness_found || c.error.is_some() {
                v.push(format!(
                    "class n={} j={} #{} order={:?} matching={}: {}",
                    c.n,
                    c.j,
                    c.class,
                    c.order_seed,
                    c.matching,
                    c.error.as_deref().unwrap_or("difference is not a coboundary")
                ));
            }
        }
        for c in self.identities.iter().chain(&self.checks) {
            if !c.passed && c.gating() {
                let at = c.counterexample.as_ref().map_or(String::new(), |x| {
                    format!(" at n={} j={} {} z={:?}: {}", x.n, x.j, x.sample, x.z, x.detail)
                });
                v.push(format!("{}{}", c.name, at));
            }
        }
        v
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{}: {} crossings (n+ {}, n- {}) {}",
            self.fixture,
            self.crossings,
            self.n_plus,
            self.n_minus,
            if self.passed { "PASS" } else { "FAIL" }
        );
        let ok = self.classes.iter().filter(|c| c.witness_found && c.error.is_none()).count();
        let _ = writeln!(s, "  sq2 agreement: {}/{} class checks certified", ok, self.classes.len());
        for c in self.identities.iter().chain(&self.checks) {
            let _ = writeln!(
                s,
                "  {:<28} {:<14} {:>7} {}",
                c.name,
                c.kind,
                c.evaluations,
                if c.passed { "ok" } else { "FAIL" }
            );
        }
        for f in self.failures() {
            let _ = writeln!(s, "  failure: {}", f);
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: String,
    pub fixtures: Vec<VerificationReport>,
    pub passed: bool,
}

pub fn render_table(rows: &[SqMatrix]) -> String {
    let mut s = String::new();
    for r in rows {
        let _ = writeln!(s, "{} [{}] Kh^{{{},{}}} (n={}):", r.op, r.method, r.i, r.j, r.n);
        for row in &r.matrix {
            let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, "  {}", line.join(" "));
        }
    }
    s
}
