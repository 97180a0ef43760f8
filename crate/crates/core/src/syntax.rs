//! Text syntax for diagrams, exchanges and cells.
//!
//! Diagram terms: `id[w]`, `gen[f]`, `sym[a,b]`, `seq(t,t)`, `par(t,t)`.
//! Exchanges: entries `w^o` (outgoing) and `w^*` (incoming) joined by `.`,
//! with `i` for the empty exchange.
//! Cell terms: `vid[w]`, `hid[x]`, `mor(t)`, `emitR[w]`, `absL[w]`,
//! `emitL[w]`, `absR[w]`, `cross[w; x]`, `v(c,c)`, `h(c,c)`.

use crate::cornering::{Cell, Exchange, Polarity};
use crate::theory::{Diagram, FreeTheory, PortSink, PortSource, Theory, TheoryError};
use std::collections::BTreeMap;

fn parse_err(s: impl Into<String>) -> TheoryError {
    TheoryError::Parse(s.into())
}

// ---------------------------------------------------------------------------
// Term assembly helpers
// ---------------------------------------------------------------------------

fn seq2(a: String, b: String) -> String {
    format!("seq({a},{b})")
}

fn par2(a: String, b: String) -> String {
    format!("par({a},{b})")
}

fn id_term(letters: &[String]) -> String {
    if letters.is_empty() {
        "id[I]".to_string()
    } else {
        format!("id[{}]", letters.join("*"))
    }
}

/// `before ⊗ mid ⊗ after`, omitting empty identity factors.
fn layer(before: &[String], mid: String, after: &[String]) -> String {
    let mut t = mid;
    if !before.is_empty() {
        t = par2(id_term(before), t);
    }
    if !after.is_empty() {
        t = par2(t, id_term(after));
    }
    t
}

// ---------------------------------------------------------------------------
// Diagram printing: layered decomposition
// ---------------------------------------------------------------------------

/// One live wire during layering: its sink and the object letter it carries.
#[derive(Clone)]
struct Strand {
    snk: PortSink,
    letter: String,
}

/// Render a diagram as a term. The diagram is decomposed into layers: for
/// each box (in a topological order) the strands feeding it are bubbled to
/// the front by adjacent symmetries, the box is applied, and finally the
/// outputs are sorted into place. Parsing the result back yields an
/// isomorphic diagram.
pub fn print_diagram(d: &Diagram) -> String {
    if d.boxes.is_empty() && d.is_identity() {
        return id_term(d.dom.letters());
    }
    let sink_of: BTreeMap<PortSource, PortSink> = d.wires.iter().cloned().collect();
    let mut frontier: Vec<Strand> = (0..d.dom.len())
        .map(|i| Strand {
            snk: sink_of[&PortSource::Input(i)],
            letter: d.dom.letters()[i].clone(),
        })
        .collect();
    let mut layers: Vec<String> = Vec::new();
    let mut fired = vec![false; d.boxes.len()];

    // Swap frontier positions i-1 and i, recording the symmetry layer.
    let swap = |frontier: &mut Vec<Strand>, layers: &mut Vec<String>, i: usize| {
        let before: Vec<String> = frontier[..i - 1].iter().map(|s| s.letter.clone()).collect();
        let after: Vec<String> = frontier[i + 1..].iter().map(|s| s.letter.clone()).collect();
        let mid = format!("sym[{},{}]", frontier[i - 1].letter, frontier[i].letter);
        layers.push(layer(&before, mid, &after));
        frontier.swap(i - 1, i);
    };

    for _ in 0..d.boxes.len() {
        // A box is ready when all strands feeding it are on the frontier.
        let bx = (0..d.boxes.len())
            .find(|&bx| {
                !fired[bx]
                    && (0..d.boxes[bx].dom.len()).all(|port| {
                        frontier
                            .iter()
                            .any(|s| s.snk == PortSink::BoxIn { bx, port })
                    })
            })
            .expect("acyclic diagram always has a ready box");
        fired[bx] = true;
        let arity = d.boxes[bx].dom.len();
        // Bubble input strand `port` to frontier position `port`.
        for port in 0..arity {
            let mut at = frontier
                .iter()
                .position(|s| s.snk == PortSink::BoxIn { bx, port })
                .unwrap();
            while at > port {
                swap(&mut frontier, &mut layers, at);
                at -= 1;
            }
        }
        let after: Vec<String> = frontier[arity..].iter().map(|s| s.letter.clone()).collect();
        layers.push(layer(&[], format!("gen[{}]", d.boxes[bx].gen), &after));
        let outputs: Vec<Strand> = (0..d.boxes[bx].cod.len())
            .map(|port| Strand {
                snk: sink_of[&PortSource::BoxOut { bx, port }],
                letter: d.boxes[bx].cod.letters()[port].clone(),
            })
            .collect();
        frontier.splice(0..arity, outputs);
    }

    // Sort the remaining strands into output order.
    for j in 0..frontier.len() {
        let mut at = frontier
            .iter()
            .position(|s| s.snk == PortSink::Output(j))
            .expect("all strands end at outputs");
        while at > j {
            swap(&mut frontier, &mut layers, at);
            at -= 1;
        }
    }

    let mut iter = layers.into_iter();
    let first = iter.next().expect("non-identity diagram has a layer");
    iter.fold(first, |acc, l| seq2(acc, l))
}

// ---------------------------------------------------------------------------
// Shared parsing utilities
// ---------------------------------------------------------------------------

/// Split `s` as `head DELIM inner CLOSE`, where DELIM is `[` or `(` and the
/// matching close bracket ends the string.
fn split_head(s: &str) -> Result<(&str, char, &str), TheoryError> {
    let open = s
        .find(['[', '('])
        .ok_or_else(|| parse_err(format!("expected a bracketed term, found `{s}`")))?;
    let delim = s.as_bytes()[open] as char;
    let close = if delim == '[' { ']' } else { ')' };
    if !s.ends_with(close) {
        return Err(parse_err(format!("unbalanced `{delim}` in `{s}`")));
    }
    let inner = &s[open + 1..s.len() - 1];
    let mut depth = 0i32;
    for c in inner.chars() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(parse_err(format!("unbalanced brackets in `{s}`")));
                }
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(parse_err(format!("unbalanced brackets in `{s}`")));
    }
    Ok((s[..open].trim(), delim, inner))
}

/// Split at top-level occurrences of `sep`, ignoring separators inside
/// brackets.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(s[start..].trim());
    parts
}

fn two<'a>(parts: Vec<&'a str>, what: &str, s: &str) -> Result<(&'a str, &'a str), TheoryError> {
    if parts.len() == 2 {
        Ok((parts[0], parts[1]))
    } else {
        Err(parse_err(format!("`{what}` takes two arguments in `{s}`")))
    }
}

// ---------------------------------------------------------------------------
// Diagram parsing
// ---------------------------------------------------------------------------

/// Parse a diagram term over the given free theory.
pub fn parse_diagram(th: &FreeTheory, s: &str) -> Result<Diagram, TheoryError> {
    let s = s.trim();
    let (head, delim, inner) = split_head(s)?;
    match (head, delim) {
        ("id", '[') => Ok(Diagram::identity(&th.parse_obj(inner)?)),
        ("gen", '[') => th.generator(inner.trim()),
        ("sym", '[') => {
            let (a, b) = two(split_top(inner, ','), "sym", s)?;
            Ok(Diagram::symmetry(&th.parse_obj(a)?, &th.parse_obj(b)?))
        }
        ("seq", '(') => {
            let parts = split_top(inner, ',');
            if parts.len() < 2 {
                return Err(parse_err(format!("`seq` takes two arguments in `{s}`")));
            }
            let mut acc = parse_diagram(th, parts[0])?;
            for p in &parts[1..] {
                acc = acc.compose(&parse_diagram(th, p)?)?;
            }
            Ok(acc)
        }
        ("par", '(') => {
            let parts = split_top(inner, ',');
            if parts.len() < 2 {
                return Err(parse_err(format!("`par` takes two arguments in `{s}`")));
            }
            let mut acc = parse_diagram(th, parts[0])?;
            for p in &parts[1..] {
                acc = acc.tensor(&parse_diagram(th, p)?);
            }
            Ok(acc)
        }
        _ => Err(parse_err(format!("unknown diagram term `{s}`"))),
    }
}

// ---------------------------------------------------------------------------
// Exchanges
// ---------------------------------------------------------------------------

pub fn print_exchange<T: Theory>(th: &T, x: &Exchange<T>) -> String {
    if x.is_empty() {
        return "i".to_string();
    }
    x.entries()
        .iter()
        .map(|(o, p)| format!("{}^{}", th.print_obj(o), p.symbol()))
        .collect::<Vec<_>>()
        .join(".")
}

pub fn parse_exchange<T: Theory>(th: &T, s: &str) -> Result<Exchange<T>, TheoryError> {
    let s = s.trim();
    if s.is_empty() || s == "i" {
        return Ok(Exchange::empty());
    }
    let mut entries = Vec::new();
    for item in s.split('.') {
        let item = item.trim();
        let (obj, pol) = if let Some(o) = item.strip_suffix("^o") {
            (o, Polarity::Out)
        } else if let Some(o) = item.strip_suffix("^*") {
            (o, Polarity::In)
        } else {
            return Err(parse_err(format!(
                "exchange entry `{item}` needs a `^o` or `^*` polarity"
            )));
        };
        entries.push((th.parse_obj(obj)?, pol));
    }
    Ok(Exchange(entries))
}

// ---------------------------------------------------------------------------
// Cells
// ---------------------------------------------------------------------------

pub fn print_cell<T: Theory>(th: &T, c: &Cell<T>) -> String {
    match c {
        Cell::Mor(m) => format!("mor({})", th.print_mor(m)),
        Cell::VId(a) => format!("vid[{}]", th.print_obj(a)),
        Cell::HId(x) => format!("hid[{}]", print_exchange(th, x)),
        Cell::EmitRight(a) => format!("emitR[{}]", th.print_obj(a)),
        Cell::AbsorbLeft(a) => format!("absL[{}]", th.print_obj(a)),
        Cell::EmitLeft(a) => format!("emitL[{}]", th.print_obj(a)),
        Cell::AbsorbRight(a) => format!("absR[{}]", th.print_obj(a)),
        Cell::Crossing(b, x) => {
            format!("cross[{}; {}]", th.print_obj(b), print_exchange(th, x))
        }
        Cell::VComp(a, b) => format!("v({},{})", print_cell(th, a), print_cell(th, b)),
        Cell::HComp(a, b) => format!("h({},{})", print_cell(th, a), print_cell(th, b)),
    }
}

pub fn parse_cell<T: Theory>(th: &T, s: &str) -> Result<Cell<T>, TheoryError> {
    let s = s.trim();
    let (head, delim, inner) = split_head(s)?;
    match (head, delim) {
        ("mor", '(') => Ok(Cell::Mor(th.parse_mor(inner)?)),
        ("vid", '[') => Ok(Cell::VId(th.parse_obj(inner)?)),
        ("hid", '[') => Ok(Cell::HId(parse_exchange(th, inner)?)),
        ("emitR", '[') => Ok(Cell::EmitRight(th.parse_obj(inner)?)),
        ("absL", '[') => Ok(Cell::AbsorbLeft(th.parse_obj(inner)?)),
        ("emitL", '[') => Ok(Cell::EmitLeft(th.parse_obj(inner)?)),
        ("absR", '[') => Ok(Cell::AbsorbRight(th.parse_obj(inner)?)),
        ("cross", '[') => {
            let (b, x) = two(split_top(inner, ';'), "cross", s)?;
            Ok(Cell::Crossing(th.parse_obj(b)?, parse_exchange(th, x)?))
        }
        ("v", '(') => {
            let (a, b) = two(split_top(inner, ','), "v", s)?;
            Ok(Cell::VComp(
                Box::new(parse_cell(th, a)?),
                Box::new(parse_cell(th, b)?),
            ))
        }
        ("h", '(') => {
            let (a, b) = two(split_top(inner, ','), "h", s)?;
            Ok(Cell::HComp(
                Box::new(parse_cell(th, a)?),
                Box::new(parse_cell(th, b)?),
            ))
        }
        _ => Err(parse_err(format!("unknown cell term `{s}`"))),
    }
}
