//! Parser for the textual set specification used on the command line.
//!
//! ```text
//! set    := cap | hemi | "union(" list ")" | "inter(" list ")" | "compl(" set ")"
//! list   := set ("," set)*
//! cap    := "cap:" angles ":" number
//! hemi   := "hemi" [":" angles]
//! angles := number ("," number)*
//! ```
//!
//! Angles are hyperspherical coordinates of the center in radians, the first
//! being the polar angle from the north pole. Missing trailing angles are
//! zero. A bare `hemi` is centered at the caller's default polar angle.

use super::{Cap, SetExpr};
use crate::error::{Error, Result};
use crate::sphere::{Dimension, SpherePoint};

pub fn parse_set(spec: &str, d: Dimension, default_polar: f64) -> Result<SetExpr> {
    let src: Vec<u8> = spec.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
    let mut p = Parser {
        src: &src,
        pos: 0,
        d,
        default_polar,
    };
    let set = p.set()?;
    if p.pos != src.len() {
        return p.fail("trailing input");
    }
    Ok(set)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    d: Dimension,
    default_polar: f64,
}

impl Parser<'_> {
    fn fail<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.src[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            self.fail(&format!("expected `{lit}`"))
        }
    }

    fn peek_number(&self) -> bool {
        matches!(
            self.src.get(self.pos),
            Some(b'0'..=b'9' | b'-' | b'+' | b'.')
        )
    }

    fn set(&mut self) -> Result<SetExpr> {
        if self.eat("union(") {
            return Ok(SetExpr::Union(self.list()?));
        }
        if self.eat("inter(") {
            return Ok(SetExpr::Inter(self.list()?));
        }
        if self.eat("compl(") {
            let inner = self.set()?;
            self.expect(")")?;
            return Ok(inner.complement());
        }
        if self.eat("cap:") {
            let angles = self.angles()?;
            self.expect(":")?;
            let radius = self.number()?;
            let center = self.center(&angles)?;
            return match Cap::new(center, radius) {
                Ok(c) => Ok(c.into()),
                Err(e) => self.fail(&e.to_string()),
            };
        }
        if self.eat("hemi") {
            let angles = if self.eat(":") {
                self.angles()?
            } else {
                vec![self.default_polar]
            };
            return Ok(Cap::hemisphere(self.center(&angles)?).into());
        }
        self.fail("expected cap, hemi, union, inter or compl")
    }

    fn list(&mut self) -> Result<Vec<SetExpr>> {
        let mut parts = vec![self.set()?];
        while self.eat(",") {
            parts.push(self.set()?);
        }
        self.expect(")")?;
        Ok(parts)
    }

    // A comma continues the angle list only when a number follows it;
    // otherwise it separates list elements.
    fn angles(&mut self) -> Result<Vec<f64>> {
        let mut out = vec![self.number()?];
        while self.src.get(self.pos) == Some(&b',') {
            let save = self.pos;
            self.pos += 1;
            if self.peek_number() {
                out.push(self.number()?);
            } else {
                self.pos = save;
                break;
            }
        }
        Ok(out)
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        while let Some(&b) = self.src.get(self.pos) {
            let prev = self.pos.checked_sub(1).and_then(|i| self.src.get(i));
            let sign_ok = matches!(b, b'-' | b'+')
                && (self.pos == start || matches!(prev, Some(b'e' | b'E')));
            if b.is_ascii_digit() || matches!(b, b'.' | b'e' | b'E') || sign_ok {
                self.pos += 1;
            } else {
                break;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => {
                self.pos = start;
                self.fail("expected a number")
            }
        }
    }

    fn center(&self, angles: &[f64]) -> Result<SpherePoint> {
        SpherePoint::from_angles(self.d, angles).or_else(|e| self.fail(&e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn dim(d: usize) -> Dimension {
        Dimension::new(d).unwrap()
    }

    #[test]
    fn simple_cap() {
        let s = parse_set("cap:0:1.0", dim(2), 0.0).unwrap();
        let c = s.as_cap().unwrap();
        assert_eq!(c.radius(), 1.0);
        assert_eq!(c.center(), &SpherePoint::north_pole(dim(2)));
        let s = parse_set("cap:0.5,1.2:0.3", dim(2), 0.0).unwrap();
        let c = s.as_cap().unwrap();
        assert!((c.center().polar_distance() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn hemisphere_default_and_explicit() {
        let s = parse_set("hemi", dim(3), 0.2).unwrap();
        let c = s.as_cap().unwrap();
        assert_eq!(c.radius(), FRAC_PI_2);
        assert!((c.center().polar_distance() - 0.2).abs() < 1e-14);
        let s = parse_set("hemi:1.0", dim(3), 0.2).unwrap();
        assert!((s.as_cap().unwrap().center().polar_distance() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn composite_with_comma_angles() {
        let s = parse_set(
            "union(cap:0.1,0.2:0.5, inter(hemi:1,2,compl(cap:2.0:0.6)), hemi)",
            dim(3),
            0.4,
        )
        .unwrap();
        let SetExpr::Union(parts) = &s else {
            panic!("expected union")
        };
        assert_eq!(parts.len(), 3);
        let SetExpr::Inter(inner) = &parts[1] else {
            panic!("expected inter")
        };
        assert_eq!(inner.len(), 2);
        assert!(matches!(inner[1], SetExpr::Complement(_)));
        let h = inner[0].as_cap().unwrap();
        assert!((h.center().polar_distance() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn malformed_specs() {
        let d = dim(2);
        for bad in [
            "",
            "cap",
            "cap:0",
            "cap:0:",
            "cap:0:4.0",
            "cap:1,2,3:0.5",
            "union(cap:0:1",
            "union()",
            "disk:0:1",
            "hemi:0.1 extra",
            "cap:0:1)",
            "cap:x:1",
        ] {
            assert!(
                matches!(parse_set(bad, d, 0.0), Err(Error::Parse { .. })),
                "{bad:?} should fail"
            );
        }
    }

    #[test]
    fn scientific_notation() {
        let s = parse_set("cap:1e-1:2.5E-1", dim(2), 0.0).unwrap();
        assert!((s.as_cap().unwrap().radius() - 0.25).abs() < 1e-15);
    }
}
