//! Deterministic CSV output: floats rendered with six significant digits,
//! files written atomically (temp file + rename) so a crash never leaves a
//! half-written result behind.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};

/// Render with six significant digits, plain decimal where readable and
/// exponent notation otherwise (printf `%g` behaviour). Rust float
/// formatting is platform-independent, so output bytes are stable.
pub fn fmt_g6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.5e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("numeric exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let plain = format!("{:.*}", decimals, x);
        let trimmed = plain.trim_end_matches('0').trim_end_matches('.');
        if trimmed == "-0" {
            "0".to_string()
        } else {
            trimmed.to_string()
        }
    } else {
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exp}")
    }
}

/// Write `content` to `path` atomically.
pub fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)
            .with_context(|| format!("creating {}", tmp.display()))?;
        f.write_all(content.as_bytes())?;
        f.flush()?;
    }
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(fmt_g6(0.0), "0");
        assert_eq!(fmt_g6(1.0), "1");
        assert_eq!(fmt_g6(2.125), "2.125");
        assert_eq!(fmt_g6(123.456789), "123.457");
        assert_eq!(fmt_g6(0.0123456789), "0.0123457");
        assert_eq!(fmt_g6(123456.789), "123457");
        assert_eq!(fmt_g6(1234567.89), "1.23457e6");
        assert_eq!(fmt_g6(0.0001), "0.0001");
        assert_eq!(fmt_g6(1e-5), "1e-5");
        assert_eq!(fmt_g6(-42.4242424), "-42.4242");
        assert_eq!(fmt_g6(2.0000000000000004), "2");
    }
}
