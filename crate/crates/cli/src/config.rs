use serde::Serialize;

/// Everything that determines a run. Echoed into the header of every
/// artifact so that an output file says how to reproduce it.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    /// `(name, value)` pairs in command-line order.
    pub args: Vec<(&'static str, String)>,
    pub flags: Vec<&'static str>,
}

fn quote(v: &str) -> String {
    let plain = !v.is_empty()
        && v.chars()
            .all(|c| c.is_ascii_alphanumeric() || "_./:,=+-@".contains(c));
    if plain {
        v.to_owned()
    } else {
        format!("'{}'", v.replace('\'', "'\\''"))
    }
}

impl RunConfig {
    pub fn new(command: &'static str) -> Self {
        RunConfig {
            command,
            args: Vec::new(),
            flags: Vec::new(),
        }
    }

    pub fn arg(mut self, name: &'static str, value: impl ToString) -> Self {
        self.args.push((name, value.to_string()));
        self
    }

    pub fn opt<T: ToString>(self, name: &'static str, value: Option<&T>) -> Self {
        match value {
            Some(v) => self.arg(name, v.to_string()),
            None => self,
        }
    }

    pub fn flag(mut self, name: &'static str, on: bool) -> Self {
        if on {
            self.flags.push(name);
        }
        self
    }

    /// The equivalent command line, shell-quoted.
    pub fn command_line(&self) -> String {
        let mut out = format!("complements {}", self.command);
        for (k, v) in &self.args {
            out.push_str(&format!(" --{k} {}", quote(v)));
        }
        for k in &self.flags {
            out.push_str(&format!(" --{k}"));
        }
        out
    }

    /// Comment lines for set files and CSVs (without the leading `#`).
    pub fn header(&self) -> Vec<String> {
        vec![self.command_line()]
    }

    pub fn to_json(&self) -> serde_json::Value {
        let args: serde_json::Map<String, serde_json::Value> = self
            .args
            .iter()
            .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.clone())))
            .collect();
        serde_json::json!({
            "command": self.command,
            "args": args,
            "flags": self.flags,
            "command_line": self.command_line(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_line_quotes_when_needed() {
        let c = RunConfig::new("make-sparse")
            .arg("f", "sqrt(a)")
            .arg("g", "0")
            .arg("horizon", 100)
            .flag("finite", true);
        assert_eq!(
            c.command_line(),
            "complements make-sparse --f 'sqrt(a)' --g 0 --horizon 100 --finite"
        );
        assert_eq!(quote("it's"), "'it'\\''s'");
    }
}
