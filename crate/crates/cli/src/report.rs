use serde::Serialize;
use serde_json::{Map, Value};
use submodkit::tol::Relation;
use submodkit::Check;

/// Accumulates a JSON document, a text rendering and the violated checks.
pub struct Report {
    doc: Map<String, Value>,
    text: String,
    violations: Vec<String>,
}

pub fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut doc = Map::new();
        doc.insert("command".into(), Value::from(command));
        Report {
            doc,
            text: String::new(),
            violations: Vec::new(),
        }
    }

    pub fn put(&mut self, key: &str, value: impl Serialize) {
        self.doc.insert(key.to_string(), to_value(value));
    }

    pub fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    pub fn heading(&mut self, s: &str) {
        if !self.text.is_empty() {
            self.text.push('\n');
        }
        self.line(format!("== {s}"));
    }

    /// Renders `c` and records it as a violation when it fails.
    pub fn check(&mut self, c: &Check) {
        let rel = match c.relation {
            Relation::Le => "<=",
            Relation::Ge => ">=",
        };
        self.line(format!(
            "  {:<46} {:>20} {rel} {:<20} slack {:>11.3e}  {}",
            c.name,
            fmt_num(c.lhs),
            fmt_num(c.rhs),
            c.slack,
            if c.holds { "ok" } else { "VIOLATED" }
        ));
        if !c.holds {
            self.violation(format!(
                "{}: {} {rel} {} fails (slack {:e})",
                c.name, c.lhs, c.rhs, c.slack
            ));
        }
    }

    pub fn checks<'a>(&mut self, cs: impl IntoIterator<Item = &'a Check>) {
        for c in cs {
            self.check(c);
        }
    }

    pub fn violation(&mut self, msg: String) {
        self.violations.push(msg);
    }

    /// Rendered output and whether every asserted inequality held.
    pub fn finish(mut self, json: bool) -> (String, bool) {
        let ok = self.violations.is_empty();
        if json {
            self.doc.insert("all_hold".into(), Value::Bool(ok));
            self.doc
                .insert("violations".into(), to_value(&self.violations));
            let mut s = serde_json::to_string_pretty(&Value::Object(self.doc)).expect("json");
            s.push('\n');
            (s, ok)
        } else {
            let mut s = self.text;
            if ok {
                s.push_str("\nall asserted inequalities hold\n");
            } else {
                s.push_str("\nviolated:\n");
                for v in &self.violations {
                    s.push_str(&format!("  {v}\n"));
                }
            }
            (s, ok)
        }
    }
}

/// Fixed notation for moderate magnitudes, scientific otherwise.
pub fn fmt_num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e9).contains(&a) {
        format!("{x:.10}")
    } else {
        format!("{x:.10e}")
    }
}

pub fn fmt_values(v: &[f64]) -> String {
    v.iter().map(|&x| fmt_num(x)).collect::<Vec<_>>().join(" ")
}
