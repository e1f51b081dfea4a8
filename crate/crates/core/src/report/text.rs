use std::fmt::Write as _;

use super::ReportError;

const TITLE: &str = "# ecalsim run report";

/// Plain-text run report: `[section]` headers followed by `key: value` lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunReport {
    pub sections: Vec<Section>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Section {
    pub name: String,
    pub entries: Vec<(String, String)>,
}

impl Section {
    pub fn new(name: impl Into<String>) -> Self {
        Section { name: name.into(), entries: Vec::new() }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.entries.push((key.into(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

impl RunReport {
    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.section(section)?.get(key)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{TITLE}");
        for s in &self.sections {
            let _ = writeln!(out, "\n[{}]", s.name);
            for (k, v) in &s.entries {
                let _ = writeln!(out, "{k}: {v}");
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, ReportError> {
        let mut report = RunReport::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                report.sections.push(Section::new(name));
                continue;
            }
            let Some(section) = report.sections.last_mut() else {
                return Err(ReportError::Parse { line: n + 1, msg: "entry outside a section".into() });
            };
            let Some((k, v)) = line.split_once(": ").or_else(|| line.strip_suffix(':').map(|k| (k, ""))) else {
                return Err(ReportError::Parse { line: n + 1, msg: format!("expected 'key: value', got '{line}'") });
            };
            section.entries.push((k.to_string(), v.to_string()));
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_parse() {
        let mut a = Section::new("run");
        a.push("channel", "ds_pi").push("seed", 7);
        let mut b = Section::new("results");
        b.push("separation", "1.23").push("note", "");
        let r = RunReport { sections: vec![a, b] };
        let text = r.render();
        assert!(text.starts_with(TITLE));
        let back = RunReport::parse(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.get("run", "seed"), Some("7"));
        assert!(RunReport::parse("orphan: 1").is_err());
    }
}
