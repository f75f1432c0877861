//! Set files: UTF-8 text, one decimal integer per line, strictly increasing.
//! Lines starting with `#` are comments; `# horizon: H` records the horizon.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::IntegerSet;
use crate::error::{Error, Result};

/// Serializes a set. `header` lines are emitted as `#` comments first.
pub fn write_set_string(set: &IntegerSet, header: &[String]) -> String {
    let mut out = String::with_capacity(set.len() * 8 + 64);
    for line in header {
        let _ = writeln!(out, "# {line}");
    }
    let _ = writeln!(out, "# horizon: {}", set.horizon());
    for x in set.iter() {
        let _ = writeln!(out, "{x}");
    }
    out
}

pub fn write_set(path: &Path, set: &IntegerSet, header: &[String]) -> Result<()> {
    fs::write(path, write_set_string(set, header)).map_err(|e| Error::io(path, e))
}

/// Parses set-file text. The horizon is, in order of preference, the
/// explicit argument, the `# horizon:` header, or the largest element.
pub fn read_set_str(text: &str, origin: &Path, horizon: Option<u64>) -> Result<IntegerSet> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };
    let mut elements: Vec<u64> = Vec::new();
    let mut declared = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(h) = comment.trim().strip_prefix("horizon:") {
                let h = h
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(i + 1, format!("bad horizon header {line:?}")))?;
                declared = Some(h);
            }
            continue;
        }
        let x: u64 = line
            .parse()
            .map_err(|_| parse_err(i + 1, format!("not a non-negative integer: {line:?}")))?;
        if let Some(&prev) = elements.last() {
            if x <= prev {
                return Err(parse_err(
                    i + 1,
                    format!("not strictly increasing: {x} after {prev}"),
                ));
            }
        }
        elements.push(x);
    }
    let max = elements.last().copied().unwrap_or(0);
    let horizon = horizon.or(declared).unwrap_or(max).max(1);
    if max > horizon {
        return Err(Error::Input(format!(
            "{}: element {max} exceeds horizon {horizon}",
            origin.display()
        )));
    }
    IntegerSet::from_sorted(elements, horizon)
}

pub fn read_set(path: &Path, horizon: Option<u64>) -> Result<IntegerSet> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    read_set_str(&text, path, horizon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_non_monotone_and_garbage() {
        let p = Path::new("t.set");
        assert!(matches!(
            read_set_str("1\n3\n2\n", p, None),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            read_set_str("1\n1\n", p, None),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(read_set_str("1\n-4\n", p, None).is_err());
        assert!(read_set_str("1.5\n", p, None).is_err());
        assert!(read_set_str("5\n", p, Some(3)).is_err());
    }

    #[test]
    fn unreadable_file_is_an_io_error() {
        let err = read_set(Path::new("/nonexistent/dir/x.set"), None).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }

    #[test]
    fn header_carries_horizon() {
        let s = IntegerSet::new(vec![0, 3, 9], 40).unwrap();
        let text = write_set_string(&s, &["command: test".into()]);
        assert!(text.starts_with("# command: test\n# horizon: 40\n0\n3\n9\n"));
        assert_eq!(read_set_str(&text, Path::new("x"), None).unwrap(), s);
    }

    proptest! {
        #[test]
        fn write_then_read_is_identity(xs in proptest::collection::btree_set(0u64..100_000, 0..200)) {
            let s = IntegerSet::new(xs.into_iter().collect(), 100_000).unwrap();
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("s.set");
            write_set(&path, &s, &[]).unwrap();
            prop_assert_eq!(read_set(&path, None).unwrap(), s);
        }
    }
}
