//! Line-oriented scenario files.
//!
//! ```text
//! # partial Cheshire cat
//! space path=L,R pol=H,V
//! input L (x) H
//! element bs L,R name=BS1
//! marker arms
//! element hwp R angle=45 name=HWP
//! element bs L,R name=BS2
//! element pbs L,R name=PBS
//! detector D1 L (x) H
//! postselect D1
//! probe SzL at arms
//! ```
//!
//! Directives:
//!
//! * `space path=L,R pol=H,V [ancilla=H,V]` must come first.
//! * `input <ket-expr>` once.
//! * `element <kind> <location> [angle=deg] [phase=deg] [name=...]` in stage
//!   order. Kinds: `bs`, `hwp`, `pbs`, `mirror`, `singlet` (long forms
//!   `beamsplitter`, `halfwaveplate`, `polarizingbeamsplitter` also accepted).
//!   Locations: `L` or `R` for one arm, `L,R` for both, `S,A` for the system
//!   and ancilla polarizations.
//! * `marker <name>` between elements.
//! * `detector <name> <bra-expr>`: the coefficients are the bra's own, so
//!   `detector D i L` is `i⟨L|`.
//! * `postselect <detector> [& <detector> ...]` once; several detectors form a
//!   coincidence.
//! * `probe <observable> [at <marker>]`; without `at` the first marker.
//!
//! `#` starts a comment. Expressions are described in [`crate::expr`].

use std::fmt;

use cheshire_core::{
    Circuit, CircuitElement, ElementKind, LabeledState, Location, Observable, Path, Probe, Scenario, Space,
};

use crate::expr::{evaluate_state, format_state};

#[derive(Clone, Debug, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A whitespace-separated word and its 1-based column.
#[derive(Clone, Copy, Debug)]
struct Word<'a> {
    text: &'a str,
    col: usize,
}

fn words(line: &str) -> Vec<Word<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, (byte, c)) in line.char_indices().enumerate() {
        if c.is_whitespace() {
            if let Some((b, cstart)) = start.take() {
                out.push(Word { text: &line[b..byte], col: cstart });
            }
        } else if start.is_none() {
            start = Some((byte, i + 1));
        }
    }
    if let Some((b, cstart)) = start {
        out.push(Word { text: &line[b..], col: cstart });
    }
    out
}

/// Byte offset and column of the text after the first `n` words.
fn rest_after(line: &str, n: usize) -> (&str, usize) {
    let mut seen = 0;
    let mut in_word = false;
    for (i, (byte, c)) in line.char_indices().enumerate() {
        if c.is_whitespace() {
            if in_word {
                seen += 1;
                in_word = false;
                if seen == n {
                    return (&line[byte..], i + 1);
                }
            }
        } else {
            in_word = true;
        }
    }
    ("", line.chars().count() + 1)
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == '.')
}

struct Pending {
    line: usize,
    col: usize,
}

struct Builder {
    circuit: Option<Circuit>,
    input: Option<LabeledState>,
    postselect: Option<(Pending, Vec<(String, usize)>)>,
    probes: Vec<(Pending, Observable, Option<(String, usize)>)>,
}

impl Builder {
    fn circuit(&mut self, line: usize, col: usize) -> Result<&mut Circuit, ParseError> {
        self.circuit.as_mut().ok_or_else(|| ParseError::new(line, col, "`space` must come before this directive"))
    }
}

/// Parse scenario text.
pub fn parse_scenario(text: &str) -> Result<Scenario, ParseError> {
    let mut b = Builder { circuit: None, input: None, postselect: None, probes: Vec::new() };
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let ws = words(line);
        let Some(head) = ws.first().copied() else { continue };
        let err = |col: usize, msg: String| ParseError::new(line_no, col, msg);
        match head.text {
            "space" => {
                if b.circuit.is_some() {
                    return Err(err(head.col, "`space` given twice".into()));
                }
                b.circuit = Some(Circuit::new(parse_space(&ws[1..], line_no, head.col)?));
            }
            "input" => {
                if b.input.is_some() {
                    return Err(err(head.col, "`input` given twice".into()));
                }
                let space = b.circuit(line_no, head.col)?.space();
                let (rest, col) = rest_after(line, 1);
                let ket = evaluate_state(rest, line_no, col)?;
                if ket.space() != space {
                    return Err(err(col, format!("input lives on {}, the scenario space is {space}", ket.space())));
                }
                b.input = Some(ket);
            }
            "element" => {
                let element = parse_element(&ws[1..], line_no, head.col)?;
                let label = element.name.clone().map_or_else(String::new, |n| format!("element `{n}`: "));
                let circuit = b.circuit(line_no, head.col)?;
                circuit.push(element).map_err(|e| err(head.col, format!("{label}{e}")))?;
            }
            "marker" => {
                let name = single_name(&ws, line_no, head.col, "marker")?;
                let circuit = b.circuit(line_no, head.col)?;
                circuit.mark(name.text).map_err(|_| err(name.col, format!("duplicate marker `{}`", name.text)))?;
            }
            "detector" => {
                let Some(name) = ws.get(1).copied() else {
                    return Err(err(head.col, "detector needs a name and a bra".into()));
                };
                if !is_name(name.text) {
                    return Err(err(name.col, format!("invalid detector name `{}`", name.text)));
                }
                let (rest, col) = rest_after(line, 2);
                if rest.trim().is_empty() {
                    return Err(err(col, format!("detector `{}` needs a bra", name.text)));
                }
                let bra = evaluate_state(rest, line_no, col)?.as_bra_literal();
                let circuit = b.circuit(line_no, head.col)?;
                if circuit.detector(name.text).is_ok() {
                    return Err(err(name.col, format!("duplicate detector `{}`", name.text)));
                }
                circuit.add_detector(name.text, bra).map_err(|e| err(col, format!("detector `{}`: {e}", name.text)))?;
            }
            "postselect" => {
                if b.postselect.is_some() {
                    return Err(err(head.col, "`postselect` given twice".into()));
                }
                let mut names = Vec::new();
                let mut expect_name = true;
                for w in &ws[1..] {
                    for (k, part) in w.text.split('&').enumerate() {
                        let col = w.col + w.text.split('&').take(k).map(|p| p.chars().count() + 1).sum::<usize>();
                        if k > 0 {
                            if expect_name {
                                return Err(err(col - 1, "expected a detector name before `&`".into()));
                            }
                            expect_name = true;
                        }
                        if part.is_empty() {
                            continue;
                        }
                        if !expect_name {
                            return Err(err(col, format!("expected `&` before `{part}`")));
                        }
                        names.push((part.to_string(), col));
                        expect_name = false;
                    }
                }
                if names.is_empty() || expect_name {
                    return Err(err(head.col, "postselect needs detector names joined by `&`".into()));
                }
                b.postselect = Some((Pending { line: line_no, col: head.col }, names));
            }
            "probe" => {
                let Some(obs) = ws.get(1) else {
                    return Err(err(head.col, "probe needs an observable".into()));
                };
                let observable: Observable = obs.text.parse().map_err(|_| {
                    err(obs.col, format!("unknown observable `{}` (PiL, PiR, SxL, SyL, SzL, SxR, SyR, SzR, I)", obs.text))
                })?;
                let marker = match &ws[2..] {
                    [] => None,
                    [at, m] if at.text == "at" => Some((m.text.to_string(), m.col)),
                    [w, ..] => return Err(err(w.col, "expected `at <marker>`".into())),
                };
                b.probes.push((Pending { line: line_no, col: obs.col }, observable, marker));
            }
            other => return Err(err(head.col, format!("unknown directive `{other}`"))),
        }
    }
    finish(b, last_line + 1)
}

fn finish(b: Builder, eof: usize) -> Result<Scenario, ParseError> {
    let circuit = b.circuit.ok_or_else(|| ParseError::new(eof, 1, "missing `space`"))?;
    let input = b.input.ok_or_else(|| ParseError::new(eof, 1, "missing `input`"))?;
    let (at, names) = b.postselect.ok_or_else(|| ParseError::new(eof, 1, "missing `postselect`"))?;
    for (n, col) in &names {
        if circuit.detector(n).is_err() {
            return Err(ParseError::new(at.line, *col, format!("unknown detector `{n}`")));
        }
    }
    let postselect: Vec<String> = names.into_iter().map(|(n, _)| n).collect();
    circuit.pattern_bra(&postselect).map_err(|e| {
        ParseError::new(at.line, at.col, format!("detectors {} do not form a coincidence: {e}", postselect.join(" & ")))
    })?;
    let mut probes = Vec::new();
    for (at, observable, marker) in b.probes {
        let marker = match marker {
            Some((m, col)) => {
                if circuit.marker(&m).is_err() {
                    return Err(ParseError::new(at.line, col, format!("unknown marker `{m}`")));
                }
                m
            }
            None => match circuit.markers().first() {
                Some(m) => m.name.clone(),
                None => return Err(ParseError::new(at.line, at.col, "probe needs a marker and none is declared")),
            },
        };
        probes.push(Probe { observable, marker });
    }
    Ok(Scenario { circuit, input, postselect, probes })
}

fn parse_space(ws: &[Word<'_>], line: usize, col: usize) -> Result<Space, ParseError> {
    let mut space = Space { path: false, pol: false, ancilla: false };
    for w in ws {
        let (flag, expected) = match w.text.split_once('=') {
            Some(("path", v)) => (&mut space.path, ("L,R", v)),
            Some(("pol", v)) => (&mut space.pol, ("H,V", v)),
            Some(("ancilla", v)) => (&mut space.ancilla, ("H,V", v)),
            _ => return Err(ParseError::new(line, w.col, format!("unknown space factor `{}`", w.text))),
        };
        if expected.0 != expected.1 {
            return Err(ParseError::new(line, w.col, format!("factor basis must be `{}`, found `{}`", expected.0, expected.1)));
        }
        if *flag {
            return Err(ParseError::new(line, w.col, format!("factor `{}` repeated", w.text)));
        }
        *flag = true;
    }
    if space.is_empty() {
        return Err(ParseError::new(line, col, "space needs at least one factor"));
    }
    Ok(space)
}

fn single_name<'a>(ws: &[Word<'a>], line: usize, col: usize, what: &str) -> Result<Word<'a>, ParseError> {
    match ws {
        [_, name] if is_name(name.text) => Ok(*name),
        [_, name] => Err(ParseError::new(line, name.col, format!("invalid {what} name `{}`", name.text))),
        [_] => Err(ParseError::new(line, col, format!("{what} needs a name"))),
        [_, _, extra, ..] => Err(ParseError::new(line, extra.col, format!("unexpected `{}`", extra.text))),
        [] => unreachable!(),
    }
}

fn parse_element(ws: &[Word<'_>], line: usize, col: usize) -> Result<CircuitElement, ParseError> {
    let err = |col: usize, msg: String| ParseError::new(line, col, msg);
    let (Some(kind_w), Some(loc_w)) = (ws.first(), ws.get(1)) else {
        return Err(err(col, "element needs a kind and a location".into()));
    };
    let mut name = None;
    let mut angle = None;
    let mut phase = None;
    for w in &ws[2..] {
        let Some((k, v)) = w.text.split_once('=') else {
            return Err(err(w.col, format!("expected key=value, found `{}`", w.text)));
        };
        let number = |v: &str| v.parse::<f64>().ok().filter(|x| x.is_finite());
        match k {
            "name" if is_name(v) => name = Some(v.to_string()),
            "name" => return Err(err(w.col, format!("invalid element name `{v}`"))),
            "angle" => angle = Some(number(v).ok_or_else(|| err(w.col, format!("bad angle `{v}`")))?),
            "phase" => phase = Some(number(v).ok_or_else(|| err(w.col, format!("bad phase `{v}`")))?),
            _ => return Err(err(w.col, format!("unknown parameter `{k}`"))),
        }
    }
    let label = name.as_ref().map_or_else(String::new, |n| format!("element `{n}`: "));
    let kind = match kind_w.text {
        "bs" | "beamsplitter" => ElementKind::BeamSplitter,
        "hwp" | "halfwaveplate" => ElementKind::HalfWavePlate { angle_deg: angle.unwrap_or(45.0) },
        "pbs" | "polarizingbeamsplitter" => ElementKind::PolarizingBeamSplitter,
        "mirror" => ElementKind::Mirror { phase_deg: phase.unwrap_or(0.0) },
        "singlet" => ElementKind::SingletSource,
        "detector" => return Err(err(kind_w.col, format!("{label}detectors are declared with the `detector` directive"))),
        other => return Err(err(kind_w.col, format!("{label}unknown element kind `{other}`"))),
    };
    if angle.is_some() && !matches!(kind, ElementKind::HalfWavePlate { .. }) {
        return Err(err(kind_w.col, format!("{label}`angle` only applies to hwp")));
    }
    if phase.is_some() && !matches!(kind, ElementKind::Mirror { .. }) {
        return Err(err(kind_w.col, format!("{label}`phase` only applies to mirror")));
    }
    let location = match loc_w.text {
        "L" => Location::Arm(Path::L),
        "R" => Location::Arm(Path::R),
        "L,R" | "R,L" => Location::BothArms,
        "S,A" => Location::SystemAncilla,
        other => return Err(err(loc_w.col, format!("{label}unknown arm `{other}`"))),
    };
    let e = CircuitElement { kind, location, name };
    Ok(e)
}

fn format_location(l: Location) -> &'static str {
    match l {
        Location::Arm(Path::L) => "L",
        Location::Arm(Path::R) => "R",
        Location::BothArms => "L,R",
        Location::SystemAncilla => "S,A",
    }
}

fn format_element(e: &CircuitElement) -> String {
    let mut s = match e.kind {
        ElementKind::BeamSplitter => format!("element bs {}", format_location(e.location)),
        ElementKind::HalfWavePlate { angle_deg } => {
            format!("element hwp {} angle={angle_deg}", format_location(e.location))
        }
        ElementKind::PolarizingBeamSplitter => format!("element pbs {}", format_location(e.location)),
        ElementKind::Mirror { phase_deg } => format!("element mirror {} phase={phase_deg}", format_location(e.location)),
        ElementKind::SingletSource => format!("element singlet {}", format_location(e.location)),
        ElementKind::Detector => "element detector".to_string(),
    };
    if let Some(n) = &e.name {
        s.push_str(" name=");
        s.push_str(n);
    }
    s
}

/// Canonical text of a scenario; parsing it gives back an equal scenario.
pub fn serialize_scenario(sc: &Scenario) -> String {
    let c = &sc.circuit;
    let space = c.space();
    let mut parts = Vec::new();
    if space.path {
        parts.push("path=L,R");
    }
    if space.pol {
        parts.push("pol=H,V");
    }
    if space.ancilla {
        parts.push("ancilla=H,V");
    }
    let mut out = format!("space {}\n", parts.join(" "));
    out.push_str(&format!("input {}\n", format_state(&sc.input)));
    let stages = c.stages();
    for pos in 0..=stages.len() {
        for m in c.markers().iter().filter(|m| m.position == pos) {
            out.push_str(&format!("marker {}\n", m.name));
        }
        if let Some(e) = stages.get(pos) {
            out.push_str(&format_element(e));
            out.push('\n');
        }
    }
    for d in c.detectors() {
        out.push_str(&format!("detector {} {}\n", d.name, format_state(&d.bra)));
    }
    out.push_str(&format!("postselect {}\n", sc.postselect.join(" & ")));
    for p in &sc.probes {
        out.push_str(&format!("probe {} at {}\n", p.observable, p.marker));
    }
    out
}
