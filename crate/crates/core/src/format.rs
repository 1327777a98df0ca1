//! Text formats for instances, hypergraphs, colorings, multi-families and partitions.
//!
//! Instances and hypergraphs are JSON documents written one item (or edge) per line; rationals
//! are `"num/den"` strings. Multi-families and partitions use a line-per-member plain text form.
//! Emitting is canonical, so `emit(parse(emit(x))) == emit(x)`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_rational::Rational64;
use serde::Deserialize;

use crate::adversary::AdversaryTranscript;
use crate::error::{Error, Result};
use crate::hypergraph::{Coloring, Hypergraph};
use crate::partition::{BlockPartition, ColorId, MultiFamily};
use crate::vbp::{ItemVector, Mode, VbpInstance};

/// Parses `"a/b"` or `"a"`.
pub fn parse_rational(s: &str) -> std::result::Result<Rational64, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: i64 = num.parse().map_err(|_| format!("bad numerator in {:?}", s))?;
    let den: i64 = den.parse().map_err(|_| format!("bad denominator in {:?}", s))?;
    if den == 0 {
        return Err(format!("zero denominator in {:?}", s));
    }
    Ok(Rational64::new(num, den))
}

pub fn rational_to_string(r: &Rational64) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Serde adapter storing a rational as a `"num/den"` string.
pub mod rational_string {
    use num_rational::Rational64;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::rational_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational64, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// A JSON scalar that may be an integer or a `"num/den"` string.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Scalar(Rational64);

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(i) => Ok(Scalar(Rational64::from_integer(i))),
            Raw::Text(t) => parse_rational(&t).map(Scalar).map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceRecord {
    mode: Mode,
    dimension: usize,
    bin_size: Scalar,
    items: Vec<Vec<Scalar>>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        message: e.to_string(),
    }
}

/// Line on which the `index`-th entry of the `nth` `key` array starts (1-based).
fn item_line(text: &str, key: &str, nth: usize, index: usize) -> usize {
    let Some((start, _)) = text.match_indices(&format!("\"{}\"", key)).nth(nth) else {
        return 1;
    };
    let mut depth = 0;
    let mut seen = 0;
    let mut line = text[..start].matches('\n').count() + 1;
    for ch in text[start..].chars() {
        match ch {
            '\n' => line += 1,
            '[' => {
                depth += 1;
                if depth == 2 {
                    if seen == index {
                        return line;
                    }
                    seen += 1;
                }
            }
            ']' => {
                depth -= 1;
                if depth == 0 {
                    break;
                }
            }
            _ => {}
        }
    }
    line
}

fn record_to_instance(rec: InstanceRecord, text: &str, nth: usize) -> Result<VbpInstance> {
    let items = rec
        .items
        .into_iter()
        .map(|it| ItemVector::new(it.into_iter().map(|s| s.0).collect()))
        .collect::<Vec<_>>();
    for (i, item) in items.iter().enumerate() {
        if let Err(e) = VbpInstance::new(rec.mode, rec.dimension, rec.bin_size.0, vec![item.clone()]) {
            let line = if matches!(e, Error::Malformed(ref m) if m.starts_with("item")) {
                item_line(text, "items", nth, i)
            } else {
                1
            };
            return Err(Error::Parse {
                line,
                message: e.to_string().replace("item 1", &format!("item {}", i + 1)),
            });
        }
    }
    VbpInstance::new(rec.mode, rec.dimension, rec.bin_size.0, items).map_err(|e| Error::Parse {
        line: 1,
        message: e.to_string(),
    })
}

pub fn parse_instance(text: &str) -> Result<VbpInstance> {
    let rec: InstanceRecord = serde_json::from_str(text).map_err(json_error)?;
    record_to_instance(rec, text, 0)
}

/// Zero or more instances: an empty document, one instance object, or an array of them.
pub fn parse_instances(text: &str) -> Result<Vec<VbpInstance>> {
    let trimmed = text.trim_start();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    if trimmed.starts_with('[') {
        let recs: Vec<InstanceRecord> = serde_json::from_str(text).map_err(json_error)?;
        recs.into_iter()
            .enumerate()
            .map(|(i, r)| record_to_instance(r, text, i))
            .collect()
    } else {
        parse_instance(text).map(|i| vec![i])
    }
}

fn scalar_text(mode: Mode, r: &Rational64) -> String {
    match mode {
        Mode::Binary => r.numer().to_string(),
        Mode::Unit => format!("\"{}\"", rational_to_string(r)),
    }
}

pub fn emit_instance(inst: &VbpInstance) -> String {
    let mode = inst.mode();
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"mode\": \"{}\",", mode);
    let _ = writeln!(out, "  \"dimension\": {},", inst.dimension());
    let _ = writeln!(out, "  \"bin_size\": {},", scalar_text(mode, &inst.bin_size()));
    if inst.is_empty() {
        out.push_str("  \"items\": []\n}\n");
        return out;
    }
    out.push_str("  \"items\": [\n");
    for (i, item) in inst.items().iter().enumerate() {
        let cells: Vec<String> = item.entries().iter().map(|e| scalar_text(mode, e)).collect();
        let sep = if i + 1 == inst.len() { "" } else { "," };
        let _ = writeln!(out, "    [{}]{}", cells.join(", "), sep);
    }
    out.push_str("  ]\n}\n");
    out
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    serde_json::from_str(text).map_err(json_error)
}

pub fn emit_hypergraph(h: &Hypergraph) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"k\": {},", h.k());
    let _ = writeln!(out, "  \"n\": {},", h.n());
    let edges: Vec<String> = h
        .edges_in_arrival_order()
        .map(|e| {
            let labels: Vec<String> = e.vertices().iter().map(|v| v.to_string()).collect();
            format!("    [{}]", labels.join(", "))
        })
        .collect();
    if edges.is_empty() {
        out.push_str("  \"edges\": []\n}\n");
    } else {
        let _ = write!(out, "  \"edges\": [\n{}\n  ]\n}}\n", edges.join(",\n"));
    }
    out
}

/// One `vertex color` pair per line.
pub fn emit_coloring(c: &Coloring) -> String {
    let mut out = String::new();
    for (v, color) in c.pairs() {
        let _ = writeln!(out, "{} {}", v, color);
    }
    out
}

pub fn parse_coloring(text: &str) -> Result<Coloring> {
    let mut colors = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |m: &str| Error::Parse {
            line: i + 1,
            message: m.to_string(),
        };
        let mut parts = line.split_whitespace();
        let v: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("expected a vertex label"))?;
        let c: u32 = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("expected a color"))?;
        if parts.next().is_some() {
            return Err(bad("trailing text"));
        }
        if v != colors.len() + 1 {
            return Err(bad("vertices must be listed in order 1, 2, ..."));
        }
        colors.push(c);
    }
    Ok(Coloring::new(colors))
}

fn colors_line(set: &BTreeSet<ColorId>) -> String {
    if set.is_empty() {
        "-".to_string()
    } else {
        set.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
    }
}

/// `ground: c1 c2 ...` followed by one member per line (`-` is the empty set).
pub fn emit_multifamily(f: &MultiFamily) -> String {
    let mut out = String::new();
    let ground: Vec<String> = f.ground().iter().map(|c| c.to_string()).collect();
    let _ = writeln!(out, "ground: {}", ground.join(" "));
    for m in f.members() {
        let _ = writeln!(out, "{}", colors_line(m));
    }
    out
}

fn parse_colors(line: &str, lineno: usize) -> Result<Vec<ColorId>> {
    if line == "-" {
        return Ok(Vec::new());
    }
    line.split_whitespace()
        .map(|t| {
            t.parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("{:?} is not a color", t),
            })
        })
        .collect()
}

pub fn parse_multifamily(text: &str) -> Result<MultiFamily> {
    let mut ground = None;
    let mut members = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match (line.strip_prefix("ground:"), &ground) {
            (Some(rest), None) => ground = Some(parse_colors(rest.trim(), i + 1)?),
            (Some(_), Some(_)) => {
                return Err(Error::Parse {
                    line: i + 1,
                    message: "second ground line".into(),
                })
            }
            (None, None) => {
                return Err(Error::Parse {
                    line: i + 1,
                    message: "the ground line must come first".into(),
                })
            }
            (None, Some(_)) => members.push(parse_colors(line, i + 1)?.into_iter().collect()),
        }
    }
    let ground = ground.ok_or_else(|| Error::Parse {
        line: 1,
        message: "missing ground line".into(),
    })?;
    MultiFamily::new(ground, members).map_err(|e| Error::Parse {
        line: 1,
        message: e.to_string(),
    })
}

/// `block i: idx idx ...`, one line per block, member indices 0-based.
pub fn emit_partition(p: &BlockPartition) -> String {
    let mut out = String::new();
    for (i, b) in p.blocks().iter().enumerate() {
        let ids: Vec<String> = b.iter().map(|x| x.to_string()).collect();
        if ids.is_empty() {
            let _ = writeln!(out, "block {}:", i + 1);
        } else {
            let _ = writeln!(out, "block {}: {}", i + 1, ids.join(" "));
        }
    }
    out
}

pub fn parse_partition(text: &str) -> Result<BlockPartition> {
    let mut blocks = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |m: String| Error::Parse {
            line: i + 1,
            message: m,
        };
        let (head, rest) = line
            .split_once(':')
            .ok_or_else(|| bad("expected `block i: ...`".into()))?;
        let idx: usize = head
            .trim()
            .strip_prefix("block")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| bad(format!("bad block header {:?}", head)))?;
        if idx != blocks.len() + 1 {
            return Err(bad(format!("expected block {}, found block {}", blocks.len() + 1, idx)));
        }
        let members = rest
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad(format!("{:?} is not a member index", t))))
            .collect::<Result<Vec<usize>>>()?;
        blocks.push(members);
    }
    Ok(BlockPartition::new(blocks))
}

pub fn emit_transcript(t: &AdversaryTranscript) -> String {
    let mut s = serde_json::to_string_pretty(t).expect("transcripts serialize");
    s.push('\n');
    s
}

pub fn parse_transcript(text: &str) -> Result<AdversaryTranscript> {
    serde_json::from_str(text).map_err(json_error)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::{Adversary, HypertreeAdversary};
    use crate::colorer::PermutedGreedyColorer;

    #[test]
    fn binary_instance_text() {
        let inst = VbpInstance::binary(3, 2, &[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        let text = emit_instance(&inst);
        assert_eq!(
            text,
            "{\n  \"mode\": \"binary\",\n  \"dimension\": 3,\n  \"bin_size\": 2,\n  \"items\": [\n    [1, 0, 1],\n    [0, 1, 1]\n  ]\n}\n"
        );
        assert_eq!(parse_instance(&text).unwrap(), inst);
    }

    #[test]
    fn unit_instance_text() {
        let items = vec![ItemVector::new(vec![
            Rational64::new(1, 4),
            Rational64::from_integer(1),
        ])];
        let inst = VbpInstance::new(Mode::Unit, 2, Rational64::new(3, 2), items).unwrap();
        let text = emit_instance(&inst);
        assert!(text.contains("\"bin_size\": \"3/2\""));
        assert!(text.contains("[\"1/4\", \"1/1\"]"));
        assert_eq!(parse_instance(&text).unwrap(), inst);
    }

    #[test]
    fn bad_entry_reports_its_line() {
        let text = "{\n  \"mode\": \"binary\",\n  \"dimension\": 2,\n  \"bin_size\": 1,\n  \"items\": [\n    [1, 0],\n    [2, 0]\n  ]\n}\n";
        match parse_instance(text) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 7);
                assert!(message.contains("item 2"), "{message}");
            }
            other => panic!("unexpected {:?}", other),
        }
        match parse_instance("{\"mode\": \"binary\",\n \"dimension\": 2,\n \"bin_size\": \"x\", \"items\": []}") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn empty_and_multi_instance_documents() {
        assert!(parse_instances("  \n").unwrap().is_empty());
        let a = VbpInstance::binary(1, 1, &[vec![1]]).unwrap();
        let doc = format!("[{}, {}]", emit_instance(&a), emit_instance(&a));
        assert_eq!(parse_instances(&doc).unwrap(), vec![a.clone(), a.clone()]);
        let bad = format!("[{},\n{}]", emit_instance(&a), emit_instance(&a).replace("[1]", "[2]"));
        assert!(matches!(parse_instances(&bad), Err(Error::Parse { line: 15, .. })));
    }

    #[test]
    fn hypergraph_text() {
        let h = Hypergraph::new(4, 2, vec![vec![2, 3], vec![1, 4]]).unwrap();
        let text = emit_hypergraph(&h);
        assert_eq!(
            text,
            "{\n  \"k\": 2,\n  \"n\": 4,\n  \"edges\": [\n    [2, 3],\n    [1, 4]\n  ]\n}\n"
        );
        assert_eq!(parse_hypergraph(&text).unwrap(), h);
        assert!(matches!(
            parse_hypergraph("{\"k\": 2, \"n\": 3, \"edges\": [[1, 5]]}"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn coloring_text() {
        let c = Coloring::new(vec![1, 1, 2]);
        assert_eq!(emit_coloring(&c), "1 1\n2 1\n3 2\n");
        assert_eq!(parse_coloring(&emit_coloring(&c)).unwrap(), c);
        assert!(matches!(parse_coloring("2 1\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn multifamily_and_partition_text() {
        let f = MultiFamily::from_slices(&[1, 2, 3], &[&[1], &[], &[1, 3]]).unwrap();
        let text = emit_multifamily(&f);
        assert_eq!(text, "ground: 1 2 3\n1\n-\n1 3\n");
        assert_eq!(parse_multifamily(&text).unwrap(), f);
        assert!(matches!(parse_multifamily("1 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_multifamily("ground: 1\n1\n2 x\n"),
            Err(Error::Parse { line: 3, .. })
        ));

        let p = BlockPartition::new(vec![vec![0, 2], vec![], vec![1]]);
        let text = emit_partition(&p);
        assert_eq!(text, "block 1: 0 2\nblock 2:\nblock 3: 1\n");
        assert_eq!(parse_partition(&text).unwrap(), p);
        assert!(matches!(
            parse_partition("block 2: 1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn transcript_round_trip() {
        let t = HypertreeAdversary::new(3, 3)
            .unwrap()
            .run(&mut PermutedGreedyColorer::new())
            .unwrap();
        let text = emit_transcript(&t);
        let back = parse_transcript(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(emit_transcript(&back), text);
        assert!(back.replay(&mut PermutedGreedyColorer::new()).unwrap());
    }
}
