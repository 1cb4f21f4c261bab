//! Byte-stable CSV output.
//!
//! All tables produced by the harness go through this module so that a rerun
//! with the same configuration and seed yields byte-identical files: floats
//! are printed at 12 significant digits in scientific notation, line endings
//! are always LF, and fields are quoted RFC-4180-style exactly when they
//! contain a comma, quote, or line break.

use std::fs;
use std::io;
use std::path::Path;

/// Formats a float at 12 significant digits.  `NaN` renders as the empty
/// field (the column does not apply at this grid point); negative zero is
/// normalised so the sign of a rounded-off value cannot flip bytes.
pub fn float_field(v: f64) -> String {
    if v.is_nan() {
        return String::new();
    }
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.11e}")
}

/// Quotes a field RFC-4180-style if it contains a comma, quote, CR, or LF.
pub fn escape_field(field: &str) -> String {
    if field.contains([',', '"', '\r', '\n']) {
        let mut out = String::with_capacity(field.len() + 2);
        out.push('"');
        for ch in field.chars() {
            if ch == '"' {
                out.push('"');
            }
            out.push(ch);
        }
        out.push('"');
        out
    } else {
        field.to_string()
    }
}

/// Renders a header and rows as CSV text with LF line endings and a trailing
/// newline.
pub fn render(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    push_row(&mut out, header.iter().copied());
    for row in rows {
        debug_assert_eq!(row.len(), header.len(), "row width must match header");
        push_row(&mut out, row.iter().map(String::as_str));
    }
    out
}

fn push_row<'a>(out: &mut String, fields: impl Iterator<Item = &'a str>) {
    let mut first = true;
    for field in fields {
        if !first {
            out.push(',');
        }
        first = false;
        out.push_str(&escape_field(field));
    }
    out.push('\n');
}

/// Writes a table to `path`, creating parent directories as needed.
pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, render(header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_use_twelve_significant_digits() {
        assert_eq!(float_field(0.9838963875961308), "9.83896387596e-1");
        assert_eq!(float_field(191748.16047311136), "1.91748160473e5");
        assert_eq!(float_field(1.0), "1.00000000000e0");
        assert_eq!(float_field(-0.0), "0.00000000000e0");
        assert_eq!(float_field(f64::NAN), "");
    }

    #[test]
    fn quoting_matches_rfc_4180() {
        assert_eq!(escape_field("plain"), "plain");
        assert_eq!(escape_field("a,b"), "\"a,b\"");
        assert_eq!(escape_field("say \"hi\""), "\"say \"\"hi\"\"\"");
        assert_eq!(escape_field("two\nlines"), "\"two\nlines\"");
    }

    #[test]
    fn rendering_uses_lf_and_trailing_newline() {
        let rows = vec![vec!["1".to_string(), "x,y".to_string()]];
        assert_eq!(render(&["a", "b"], &rows), "a,b\n1,\"x,y\"\n");
    }
}
