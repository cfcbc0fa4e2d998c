//! Line-oriented, byte-stable reports: `== section ==` headers and one
//! `key: value` pair per line. Everything that feeds a report iterates
//! ordered collections, so rendering the same input twice gives identical
//! bytes.

#[derive(Debug, Clone, Default)]
pub struct Report {
    sections: Vec<(String, Vec<(String, String)>)>,
    failures: usize,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn begin(&mut self, name: &str) {
        self.sections.push((name.to_string(), Vec::new()));
    }

    pub fn kv(&mut self, key: &str, value: &str) {
        if self.sections.is_empty() {
            self.begin("report");
        }
        self.sections
            .last_mut()
            .unwrap()
            .1
            .push((key.to_string(), value.to_string()));
    }

    /// Record a named check; failures flip the report status and carry the
    /// witness inline.
    pub fn check(&mut self, name: &str, passed: bool, witness: Option<&str>) {
        let value = match (passed, witness) {
            (true, _) => "pass".to_string(),
            (false, Some(w)) => format!("FAIL at {w}"),
            (false, None) => "FAIL".to_string(),
        };
        if !passed {
            self.failures += 1;
        }
        self.kv(&format!("check {name}"), &value);
    }

    pub fn all_passed(&self) -> bool {
        self.failures == 0
    }

    pub fn failures(&self) -> usize {
        self.failures
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (name, lines) in &self.sections {
            out.push_str(&format!("== {name} ==\n"));
            for (k, v) in lines {
                out.push_str(&format!("{k}: {v}\n"));
            }
        }
        out
    }

    /// Value of the first line with this key, for tests and tooling.
    pub fn get(&self, key: &str) -> Option<&str> {
        for (_, lines) in &self.sections {
            for (k, v) in lines {
                if k == key {
                    return Some(v);
                }
            }
        }
        None
    }
}
