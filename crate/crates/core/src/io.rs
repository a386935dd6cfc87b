//! Text formats: lattice files and serialized formal sums.
//!
//! A lattice file lists its elements on one line and one cover pair per line:
//!
//! ```text
//! # the diamond
//! elements: 0 a b 1
//! covers:
//! 0 a
//! 0 b
//! a 1
//! b 1
//! ```
//!
//! Blank lines and everything after `#` are ignored.

use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::algebra::FormalSum;
use crate::error::{Error, Result};
use crate::lattice::{ChainFamilyKind, Lattice};
use crate::morphism::{alpha_of_chain, JoinMap};
use crate::poset::Poset;
use crate::ring::RingSpec;

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses a lattice file into a poset; lattice axioms are not checked.
pub fn parse_poset_file(text: &str) -> Result<Poset> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line_no, first) = lines
        .next()
        .ok_or_else(|| parse_error(1, "missing `elements:` line"))?;
    let names: Vec<&str> = first
        .strip_prefix("elements:")
        .ok_or_else(|| parse_error(line_no, "expected `elements:`"))?
        .split_whitespace()
        .collect();
    if names.is_empty() {
        return Err(parse_error(line_no, "no elements declared"));
    }

    let (line_no, second) = lines
        .next()
        .ok_or_else(|| parse_error(line_no + 1, "missing `covers:` line"))?;
    if second != "covers:" {
        return Err(parse_error(line_no, "expected `covers:`"));
    }

    let mut covers = Vec::new();
    for (line_no, line) in lines {
        let pair: Vec<&str> = line.split_whitespace().collect();
        let [x, y] = pair[..] else {
            return Err(parse_error(line_no, "expected a cover pair `x y`"));
        };
        for label in [x, y] {
            if !names.contains(&label) {
                return Err(parse_error(line_no, format!("unknown label `{label}`")));
            }
        }
        covers.push((x, y));
    }
    Poset::from_covers(&names, &covers)
}

pub fn parse_lattice_file(text: &str) -> Result<Lattice> {
    Lattice::from_poset(parse_poset_file(text)?)
}

/// Writes the canonical lattice file (elements in index order, transitive
/// reduction as covers).
pub fn write_lattice_file(lattice: &Lattice) -> String {
    let poset = lattice.poset();
    let mut out = format!("elements: {}\ncovers:\n", poset.names().join(" "));
    for &(x, y) in poset.covers() {
        out.push_str(&format!("{} {}\n", poset.name(x), poset.name(y)));
    }
    out
}

/// Serialized form of a [`FormalSum`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalSumDocument {
    pub ring: RingSpec,
    /// Fingerprint of the source lattice.
    pub source: String,
    /// Fingerprint of the target lattice.
    pub target: String,
    pub terms: Vec<TermDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDocument {
    pub coefficient: String,
    /// Source label to target label, in source index order.
    pub map: IndexMap<String, String>,
}

impl FormalSumDocument {
    pub fn from_sum(sum: &FormalSum) -> Self {
        let terms = sum
            .maps()
            .map(|(map, c)| TermDocument {
                coefficient: RingSpec::format(c),
                map: map
                    .labelled()
                    .into_iter()
                    .map(|(x, y)| (x.to_owned(), y.to_owned()))
                    .collect(),
            })
            .collect();
        Self {
            ring: sum.ring(),
            source: sum.source().fingerprint(),
            target: sum.target().fingerprint(),
            terms,
        }
    }

    /// Rebuilds the sum against concrete lattices, whose fingerprints must
    /// match the document.
    pub fn to_sum(&self, source: &Arc<Lattice>, target: &Arc<Lattice>) -> Result<FormalSum> {
        for (expected, lattice) in [(&self.source, source), (&self.target, target)] {
            let got = lattice.fingerprint();
            if *expected != got {
                return Err(Error::FingerprintMismatch {
                    expected: expected.clone(),
                    got,
                });
            }
        }
        let mut sum = FormalSum::zero(self.ring, source, target);
        for (i, term) in self.terms.iter().enumerate() {
            let coeff = self
                .ring
                .coerce(&RingSpec::parse_coeff(&term.coefficient)?)?;
            if num_traits::Zero::is_zero(&coeff) {
                return Err(parse_error(i + 1, "zero coefficient"));
            }
            let mut values = vec![None; source.len()];
            for (x, y) in &term.map {
                values[source.index_of(x)?] = Some(target.index_of(y)?);
            }
            let values = values
                .into_iter()
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| parse_error(i + 1, "map is not total"))?;
            let map = JoinMap::new(source.clone(), target.clone(), values)?;
            if !num_traits::Zero::is_zero(&sum.coefficient(&map)) {
                return Err(parse_error(i + 1, "repeated term"));
            }
            sum.add_scaled(&map, &coeff)?;
        }
        Ok(sum)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| parse_error(e.line(), e.to_string()))
    }
}

/// Human-readable rendering: one signed term per line, `α_{…}` for maps of
/// the form `α_B` with `B ∈ 𝒵_T`, explicit tables otherwise.
pub fn render_text(sum: &FormalSum) -> String {
    if sum.is_zero() {
        return "0\n".to_owned();
    }
    let mut out = String::new();
    for (map, c) in sum.maps() {
        let text = RingSpec::format(c);
        let signed = if text.starts_with('-') {
            text
        } else {
            format!("+{text}")
        };
        out.push_str(&signed);
        out.push('·');
        out.push_str(&describe_map(&map));
        out.push('\n');
    }
    out
}

fn describe_map(map: &JoinMap) -> String {
    let lattice = map.source();
    if crate::morphism::same_lattice(lattice, map.target()) {
        if let Some(image) = map.image_chain() {
            if lattice.is_in_family(&image, ChainFamilyKind::Z)
                && alpha_of_chain(lattice, &image).is_ok_and(|a| a == *map)
            {
                return format!("α_{}", image.display(lattice.poset()));
            }
        }
    }
    let pairs: Vec<String> = map
        .labelled()
        .into_iter()
        .map(|(x, y)| format!("{x}↦{y}"))
        .collect();
    format!("[{}]", pairs.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::generate;
    use crate::idempotent::idempotent_direct;

    const DIAMOND: &str = "# diamond\nelements: 0 a b 1\n\ncovers:\n0 a\n0 b  # left\na 1\nb 1\n";

    #[test]
    fn parse_diamond() {
        let l = parse_lattice_file(DIAMOND).unwrap();
        assert_eq!(l.len(), 4);
        assert_eq!(l.join(1, 2), 3);
        assert_eq!(parse_lattice_file(&write_lattice_file(&l)).unwrap(), l);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let err = parse_poset_file("elements: 0 1\ncovers:\n0\n").unwrap_err();
        assert_eq!(err, parse_error(3, "expected a cover pair `x y`"));
        let err = parse_poset_file("elements: 0 1\ncovers:\n0 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse_poset_file("\n\nnodes: 0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        assert!(matches!(
            parse_poset_file("elements: 0 1\n0 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_poset_file(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn not_a_lattice_from_file() {
        let err = parse_lattice_file("elements: a b\ncovers:\n").unwrap_err();
        assert!(matches!(err, Error::NotALattice { .. }));
    }

    #[test]
    fn document_round_trip() {
        let d = Arc::new(generate("boolean:2").unwrap());
        let e = idempotent_direct(&d, RingSpec::Integers, false);
        let doc = FormalSumDocument::from_sum(&e);
        let json = doc.to_json();
        let back = FormalSumDocument::from_json(&json).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_sum(&d, &d).unwrap(), e);

        let other = Arc::new(generate("chain:3").unwrap());
        assert!(matches!(
            back.to_sum(&other, &other),
            Err(Error::FingerprintMismatch { .. })
        ));
    }

    #[test]
    fn text_rendering() {
        let d = Arc::new(generate("boolean:2").unwrap());
        let e = idempotent_direct(&d, RingSpec::Integers, false);
        let text = render_text(&e);
        let mut lines: Vec<&str> = text.lines().collect();
        lines.sort();
        assert_eq!(lines, vec!["+1·α_{0,a,1}", "+1·α_{0,b,1}", "-1·α_{0,1}"]);
        let id = FormalSum::identity(RingSpec::Integers, &d);
        assert_eq!(render_text(&id), "+1·[0↦0, a↦a, b↦b, 1↦1]\n");
    }
}
