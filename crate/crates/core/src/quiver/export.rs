use std::fmt::Write;
use std::str::FromStr;

use super::parse::QuiverDoc;
use super::types::{GradedQuiver, TranslationQuiver};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Dot,
    Tikz,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "dot" => Ok(Format::Dot),
            "tikz" => Ok(Format::Tikz),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

pub fn export_quiver(q: &GradedQuiver, format: Format) -> String {
    export_translation_quiver(
        &TranslationQuiver {
            quiver: q.clone(),
            ..Default::default()
        },
        format,
    )
}

pub fn export_translation_quiver(tq: &TranslationQuiver, format: Format) -> String {
    match format {
        Format::Json => to_json(tq),
        Format::Dot => to_dot(&tq.quiver),
        Format::Tikz => to_tikz(&tq.quiver),
    }
}

pub(crate) fn to_json_value(tq: &TranslationQuiver) -> serde_json::Value {
    serde_json::to_value(QuiverDoc::from_tq(tq)).expect("quiver documents serialize")
}

fn to_json(tq: &TranslationQuiver) -> String {
    let mut s = serde_json::to_string_pretty(&to_json_value(tq)).expect("serializable");
    s.push('\n');
    s
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn to_dot(q: &GradedQuiver) -> String {
    let mut out = String::from("digraph Q {\n");
    for v in &q.vertices {
        let shape = if v.projective { "box" } else { "circle" };
        writeln!(out, "  {} [shape={shape}];", quote(&v.id)).unwrap();
    }
    for a in &q.arrows {
        let style = if a.degree < 0 { ", style=dashed" } else { "" };
        writeln!(
            out,
            "  {} -> {} [label={}{style}];",
            quote(&a.src),
            quote(&a.tgt),
            quote(&a.label)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

fn tex_label(label: &str) -> String {
    let mut s = String::new();
    let mut chars = label.chars().peekable();
    match chars.peek() {
        Some('α') => s.push_str("\\alpha"),
        Some('γ') => s.push_str("\\gamma"),
        Some('ρ') => s.push_str("\\rho"),
        Some(c) => s.push(*c),
        None => return s,
    }
    chars.next();
    let rest: String = chars.collect();
    let (body, star) = match rest.strip_suffix('*') {
        Some(b) => (b, "^*"),
        None => (rest.as_str(), ""),
    };
    if !body.is_empty() {
        write!(s, "_{{{body}}}").unwrap();
    }
    s.push_str(star);
    s
}

/// Vertices on a two-row grid (tau-pairs stacked when ids are consecutive),
/// parallel arrows bent apart, loops drawn above.
fn to_tikz(q: &GradedQuiver) -> String {
    let mut out =
        String::from("\\begin{tikzpicture}[>=stealth, every node/.style={font=\\small}]\n");
    for (i, v) in q.vertices.iter().enumerate() {
        let (x, y) = (2 * (i / 2), 2 * (1 - i % 2));
        let shape = if v.projective { "[draw]" } else { "" };
        writeln!(out, "  \\node{shape} (v{i}) at ({x},{y}) {{${}$}};", v.id).unwrap();
    }
    let pos = |id: &str| q.vertex_position(id).unwrap_or(0);
    for a in &q.arrows {
        let (s, t) = (pos(&a.src), pos(&a.tgt));
        let style = if a.degree < 0 { "->,dashed" } else { "->" };
        let how = if s == t {
            "to[loop above]".to_string()
        } else {
            let parallel = q
                .arrows
                .iter()
                .filter(|b| pos(&b.src) == s && pos(&b.tgt) == t)
                .count();
            let rank = q
                .arrows
                .iter()
                .filter(|b| pos(&b.src) == s && pos(&b.tgt) == t)
                .position(|b| b.id == a.id)
                .unwrap_or(0);
            format!(
                "to[bend left={}]",
                12 + 12 * rank + if parallel > 1 { 6 } else { 0 }
            )
        };
        writeln!(
            out,
            "  \\draw[{style}] (v{s}) {how} node[midway, above] {{${}$}} (v{t});",
            tex_label(&a.label)
        )
        .unwrap();
    }
    out.push_str("\\end{tikzpicture}\n");
    out
}
