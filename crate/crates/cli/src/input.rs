use std::fs;
use std::io::{self, Read};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use mindisc::{parse, Polynomial, Ring};

/// Reads a file, or stdin for `-`.
pub fn read_source(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading stdin")?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn parse_ring(decl: &str) -> Result<Ring> {
    Ring::parse(decl.trim()).map_err(|e| anyhow!("bad ring `{}`: {e}", decl.trim()))
}

/// Parses `expr` in `ring`, pointing at the offending character on error.
pub fn parse_expr(ring: &Ring, expr: &str) -> Result<Polynomial> {
    parse(ring, expr).map_err(|e| {
        let caret: String = " ".repeat(e.offset);
        anyhow!("{e}\n  {expr}\n  {caret}^")
    })
}

/// Input files hold a `ring: a,b,c` line and then the polynomial, which may
/// span several lines. Blank lines and `#` comments are skipped.
pub fn parse_input_file(text: &str, ring_override: Option<&str>) -> Result<Polynomial> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .peekable();
    let header = lines
        .peek()
        .and_then(|l| l.strip_prefix("ring:"))
        .map(str::to_owned);
    let ring = match (header, ring_override) {
        (Some(h), _) => {
            lines.next();
            parse_ring(&h)?
        }
        (None, Some(r)) => parse_ring(r)?,
        (None, None) => bail!("input must start with a `ring: v1,v2,...` line"),
    };
    let expr = lines.collect::<Vec<_>>().join(" ");
    if expr.is_empty() {
        bail!("no polynomial after the ring line");
    }
    parse_expr(&ring, &expr)
}

pub fn load(file: Option<&Path>, ring: Option<&str>, expr: Option<&str>) -> Result<Polynomial> {
    match (file, ring, expr) {
        (None, Some(r), Some(e)) => parse_expr(&parse_ring(r)?, e),
        (Some(_), _, Some(_)) => bail!("give either an input file or --expr, not both"),
        (Some(path), r, None) => parse_input_file(&read_source(path)?, r),
        _ => bail!("no input: pass a file (or `-`), or --ring with --expr"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_multiline_body() {
        let p = parse_input_file("# cD4\nring: y1,y2,y3,t\ny1^2 +\n  y2*y3^2 + y3^3\n", None).unwrap();
        assert_eq!(p.to_string(), "y2*y3^2 + y3^3 + y1^2");
    }

    #[test]
    fn missing_header() {
        assert!(parse_input_file("x^2\n", None).is_err());
        assert!(parse_input_file("x^2\n", Some("x")).is_ok());
        assert!(parse_input_file("ring: x\n", None).is_err());
    }

    #[test]
    fn caret_points_at_error() {
        let r = Ring::parse("x,y").unwrap();
        let msg = parse_expr(&r, "x + z").unwrap_err().to_string();
        assert!(msg.ends_with("      ^"), "{msg}");
    }
}
