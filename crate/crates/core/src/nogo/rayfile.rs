// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

//! Ray-set text format.
//!
//! One ray per line; components separated by commas, each written as
//! `re+imj` or `re-imj`. Everything after `#` is a comment and blank lines
//! are ignored. The dimension is the component count of the first ray.

use crate::linalg::{ComplexVector, C64};
use crate::{Error, Result};

pub fn parse_rays(text: &str) -> Result<Vec<ComplexVector>> {
    let mut out: Vec<ComplexVector> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let comps: Vec<C64> = line
            .split(',')
            .map(|c| parse_complex(c.trim()).map_err(|message| Error::Parse { line: line_no, message }))
            .collect::<Result<_>>()?;
        if let Some(first) = out.first() {
            if first.dim() != comps.len() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected {} components, found {}", first.dim(), comps.len()),
                });
            }
        }
        let v = ComplexVector::new(comps).map_err(|e| Error::Parse { line: line_no, message: e.to_string() })?;
        if v.norm() == 0.0 {
            return Err(Error::Parse { line: line_no, message: "zero vector".into() });
        }
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::Parse { line: 0, message: "no rays in input".into() });
    }
    Ok(out)
}

/// Parses one amplitude: a plain real (`0.6`) or the ray-file form `re+imj`.
pub fn parse_amplitude(s: &str) -> Result<C64> {
    let s = s.trim();
    if let Ok(re) = s.parse::<f64>() {
        return Ok(C64::new(re, 0.0));
    }
    parse_complex(s).map_err(|message| Error::Parse { line: 0, message })
}

fn parse_complex(s: &str) -> std::result::Result<C64, String> {
    let body = s.strip_suffix('j').ok_or_else(|| format!("component `{s}` must end in `j`"))?;
    // split at the last sign that is not leading and not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
        .ok_or_else(|| format!("component `{s}` is not of the form re+imj"))?;
    let re: f64 = body[..split].parse().map_err(|e| format!("real part of `{s}`: {e}"))?;
    let im: f64 = body[split..].trim_start_matches('+').parse().map_err(|e| format!("imaginary part of `{s}`: {e}"))?;
    Ok(C64::new(re, im))
}

/// Inverse of [`parse_rays`] (up to float formatting).
pub fn format_rays(rays: &[ComplexVector]) -> String {
    let mut s = String::new();
    for r in rays {
        let comps: Vec<String> = r
            .amplitudes()
            .iter()
            .map(|c| if c.im < 0.0 || (c.im == 0.0 && c.im.is_sign_negative()) {
                format!("{}{}j", c.re, c.im)
            } else {
                format!("{}+{}j", c.re, c.im)
            })
            .collect();
        s.push_str(&comps.join(","));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn amplitudes_accept_plain_reals() {
        assert_eq!(parse_amplitude("0.6").unwrap(), C64::new(0.6, 0.0));
        assert_eq!(parse_amplitude(" 0-0.8j").unwrap(), C64::new(0.0, -0.8));
        assert!(matches!(parse_amplitude("abc"), Err(Error::Parse { .. })));
    }

    #[test]
    fn parses_components() {
        assert_eq!(parse_complex("1+0j").unwrap(), C64::new(1.0, 0.0));
        assert_eq!(parse_complex("-1.5-2j").unwrap(), C64::new(-1.5, -2.0));
        assert_eq!(parse_complex("1e-3+2.5E+2j").unwrap(), C64::new(1e-3, 250.0));
        assert!(parse_complex("1+0").is_err());
        assert!(parse_complex("abc+1j").is_err());
        assert!(parse_complex("1j").is_err());
    }

    #[test]
    fn comments_and_blank_lines() {
        let rays = parse_rays("# header\n\n1+0j, 0+0j  # trailing\n0+0j,1+0j\n").unwrap();
        assert_eq!(rays.len(), 2);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_rays(""), Err(Error::Parse { line: 0, .. })));
        assert!(matches!(parse_rays("# only comments\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_rays("1+0j,0+0j\n1+0j\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_rays("0+0j,0+0j\n"), Err(Error::Parse { line: 1, .. })));
    }

    proptest! {
        #[test]
        fn format_parse_roundtrip(vals in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 1..6)) {
            prop_assume!(vals.iter().any(|(a, b)| *a != 0.0 || *b != 0.0));
            let v = ComplexVector::new(vals.iter().map(|&(a, b)| C64::new(a, b)).collect()).unwrap();
            let back = parse_rays(&format_rays(std::slice::from_ref(&v))).unwrap();
            prop_assert_eq!(&back[0], &v);
        }
    }
}
