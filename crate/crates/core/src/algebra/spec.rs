//! Text format for bound quiver algebras.
//!
//! ```text
//! # comments run to end of line
//! field 5
//! vertices 1 2 3
//! arrow a: 1 -> 2
//! arrow b: 2 -> 3
//! relation b*a
//! ```
//!
//! A path `b*a` means "a, then b". Relation terms may carry a coefficient
//! (`2*b*a`) and are joined with `+` or `-`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exactlin::Fp;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArrowSpec {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A linear combination of parallel paths. Each path lists arrow indices in
/// the order they are traversed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    pub terms: Vec<(u32, Vec<usize>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuiverSpec {
    pub p: u32,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
    pub relations: Vec<Relation>,
}

impl QuiverSpec {
    pub fn field(&self) -> Fp {
        Fp::new(self.p).expect("validated at construction")
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// Source and target of a nonempty path, if composable.
    pub fn path_endpoints(&self, path: &[usize]) -> Option<(usize, usize)> {
        let first = self.arrows.get(*path.first()?)?;
        let mut at = first.target;
        for &a in &path[1..] {
            let arr = self.arrows.get(a)?;
            if arr.source != at {
                return None;
            }
            at = arr.target;
        }
        Some((first.source, at))
    }

    pub fn path_name(&self, path: &[usize]) -> String {
        path.iter()
            .rev()
            .map(|&a| self.arrows[a].name.as_str())
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Builds and validates a spec from parts; relations are normalized
    /// (like terms merged, zero terms and empty relations dropped).
    pub fn new(
        p: u32,
        vertices: Vec<String>,
        arrows: Vec<ArrowSpec>,
        relations: Vec<Relation>,
    ) -> Result<Self> {
        let field = Fp::new(p)?;
        let mut seen = HashMap::new();
        for v in &vertices {
            if seen.insert(v.clone(), ()).is_some() {
                return Err(Error::DuplicateLabel(v.clone()));
            }
        }
        let mut seen = HashMap::new();
        for a in &arrows {
            if a.source >= vertices.len() || a.target >= vertices.len() {
                return Err(Error::UnknownVertex(a.name.clone()));
            }
            if seen.insert(a.name.clone(), ()).is_some() {
                return Err(Error::DuplicateLabel(a.name.clone()));
            }
        }
        let mut spec = QuiverSpec {
            p,
            vertices,
            arrows,
            relations: Vec::new(),
        };
        for rel in relations {
            let mut merged: BTreeMap<Vec<usize>, u32> = BTreeMap::new();
            let mut order = Vec::new();
            let mut ends = None;
            for (c, path) in rel.terms {
                if path.iter().any(|&a| a >= spec.arrows.len()) {
                    return Err(Error::UnknownLabel(format!("{path:?}")));
                }
                let name = spec.path_name(&path);
                if path.len() < 2 {
                    return Err(Error::ShortRelationPath(name));
                }
                let e = spec
                    .path_endpoints(&path)
                    .ok_or_else(|| Error::NotComposable(name.clone()))?;
                match ends {
                    None => ends = Some(e),
                    Some(prev) if prev != e => return Err(Error::NonParallelRelation(name)),
                    _ => {}
                }
                if !merged.contains_key(&path) {
                    order.push(path.clone());
                }
                let slot = merged.entry(path).or_insert(0);
                *slot = field.add(*slot, c % p);
            }
            let terms: Vec<_> = order
                .into_iter()
                .filter_map(|path| {
                    let c = merged[&path];
                    (c != 0).then_some((c, path))
                })
                .collect();
            if !terms.is_empty() {
                spec.relations.push(Relation { terms });
            }
        }
        Ok(spec)
    }

    /// Opposite quiver: every arrow reversed (same index and name), every
    /// relation path reversed.
    pub fn opposite(&self) -> QuiverSpec {
        QuiverSpec {
            p: self.p,
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| ArrowSpec {
                    name: a.name.clone(),
                    source: a.target,
                    target: a.source,
                })
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|r| Relation {
                    terms: r
                        .terms
                        .iter()
                        .map(|(c, path)| (*c, path.iter().rev().copied().collect()))
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "field {}", self.p);
        let _ = writeln!(out, "vertices {}", self.vertices.join(" "));
        for a in &self.arrows {
            let _ = writeln!(
                out,
                "arrow {}: {} -> {}",
                a.name, self.vertices[a.source], self.vertices[a.target]
            );
        }
        for r in &self.relations {
            let terms: Vec<String> = r
                .terms
                .iter()
                .map(|(c, path)| {
                    if *c == 1 {
                        self.path_name(path)
                    } else {
                        format!("{}*{}", c, self.path_name(path))
                    }
                })
                .collect();
            let _ = writeln!(out, "relation {}", terms.join(" + "));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Word(String),
    Colon,
    Arrow,
    Star,
    Plus,
    Minus,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn tokenize(line_no: usize, text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if is_word_char(c) {
            let start = i;
            while i < chars.len() && is_word_char(chars[i]) {
                i += 1;
            }
            out.push((Tok::Word(chars[start..i].iter().collect()), col));
        } else if c == ':' {
            out.push((Tok::Colon, col));
            i += 1;
        } else if c == '*' {
            out.push((Tok::Star, col));
            i += 1;
        } else if c == '+' {
            out.push((Tok::Plus, col));
            i += 1;
        } else if c == '-' {
            if chars.get(i + 1) == Some(&'>') {
                out.push((Tok::Arrow, col));
                i += 2;
            } else {
                out.push((Tok::Minus, col));
                i += 1;
            }
        } else {
            return Err(syntax(line_no, col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

fn is_arrow_name(w: &str) -> bool {
    w.chars()
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
}

struct PendingRelation {
    terms: Vec<(i64, Vec<(String, usize)>)>,
}

/// Parses the algebra-spec text format.
pub fn parse_spec(text: &str) -> Result<QuiverSpec> {
    let mut field: Option<(u32, usize)> = None;
    let mut vertices: Vec<String> = Vec::new();
    let mut arrows: Vec<(String, String, String, usize, usize)> = Vec::new();
    let mut rels: Vec<PendingRelation> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let body = raw.split('#').next().unwrap_or("");
        let toks = tokenize(line_no, body)?;
        let Some((head, head_col)) = toks.first() else {
            continue;
        };
        let Tok::Word(kw) = head else {
            return Err(syntax(line_no, *head_col, "expected a keyword"));
        };
        let rest = &toks[1..];
        match kw.as_str() {
            "field" => {
                if field.is_some() {
                    return Err(syntax(line_no, *head_col, "duplicate field declaration"));
                }
                match rest {
                    [(Tok::Word(w), col)] => {
                        let p: u32 = w
                            .parse()
                            .map_err(|_| syntax(line_no, *col, "field characteristic must be an integer"))?;
                        Fp::new(p)?;
                        field = Some((p, line_no));
                    }
                    _ => return Err(syntax(line_no, *head_col, "expected `field <p>`")),
                }
            }
            "vertices" => {
                for (t, col) in rest {
                    match t {
                        Tok::Word(w) if !w.contains('\'') => vertices.push(w.clone()),
                        _ => return Err(syntax(line_no, *col, "expected a vertex label")),
                    }
                }
            }
            "arrow" => match rest {
                [(Tok::Word(name), ncol), (Tok::Colon, _), (Tok::Word(src), scol), (Tok::Arrow, _), (Tok::Word(tgt), _)] =>
                {
                    if !is_arrow_name(name) {
                        return Err(syntax(line_no, *ncol, "arrow names must start with a letter or `_`"));
                    }
                    arrows.push((name.clone(), src.clone(), tgt.clone(), line_no, *scol));
                }
                _ => {
                    return Err(syntax(
                        line_no,
                        *head_col,
                        "expected `arrow <name>: <source> -> <target>`",
                    ))
                }
            },
            "relation" => {
                rels.push(parse_relation_tokens(line_no, *head_col, rest)?);
            }
            _ => {
                return Err(syntax(line_no, *head_col, format!("unknown keyword `{kw}`")));
            }
        }
    }

    let Some((p, _)) = field else {
        return Err(syntax(last_line.max(1), 1, "missing `field <p>` declaration"));
    };
    let f = Fp::new(p)?;

    let mut seen = HashMap::new();
    for v in &vertices {
        if seen.insert(v.as_str(), ()).is_some() {
            return Err(Error::DuplicateLabel(v.clone()));
        }
    }
    let vindex = |label: &str| -> Result<usize> {
        vertices
            .iter()
            .position(|v| v == label)
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    };
    let mut arrow_specs = Vec::new();
    for (name, src, tgt, _, _) in &arrows {
        arrow_specs.push(ArrowSpec {
            name: name.clone(),
            source: vindex(src)?,
            target: vindex(tgt)?,
        });
    }
    let aindex = |name: &str| -> Result<usize> {
        arrow_specs
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    };

    let mut relations = Vec::new();
    for rel in rels {
        let mut terms = Vec::new();
        for (c, names) in rel.terms {
            // Written right to left; traversal order is the reverse.
            let mut path = Vec::with_capacity(names.len());
            for (n, _) in names.iter().rev() {
                path.push(aindex(n)?);
            }
            terms.push((f.from_i64(c), path));
        }
        relations.push(Relation { terms });
    }

    QuiverSpec::new(p, vertices, arrow_specs, relations)
}

fn parse_relation_tokens(line: usize, col: usize, toks: &[(Tok, usize)]) -> Result<PendingRelation> {
    if toks.is_empty() {
        return Err(syntax(line, col, "empty relation"));
    }
    let mut terms = Vec::new();
    let mut i = 0;
    let mut sign: i64 = 1;
    loop {
        match toks.get(i) {
            Some((Tok::Plus, _)) if terms.is_empty() => i += 1,
            Some((Tok::Minus, _)) if terms.is_empty() => {
                sign = -1;
                i += 1;
            }
            _ => {}
        }
        let mut coef: i64 = 1;
        let mut names = Vec::new();
        match toks.get(i) {
            Some((Tok::Word(w), c)) if w.chars().all(|ch| ch.is_ascii_digit()) => {
                coef = w
                    .parse::<i64>()
                    .map_err(|_| syntax(line, *c, "coefficient out of range"))?;
                i += 1;
                match toks.get(i) {
                    Some((Tok::Star, _)) => i += 1,
                    Some((_, c)) => return Err(syntax(line, *c, "expected `*` after coefficient")),
                    None => return Err(syntax(line, col, "coefficient without a path")),
                }
            }
            _ => {}
        }
        loop {
            match toks.get(i) {
                Some((Tok::Word(w), c)) if is_arrow_name(w) => {
                    names.push((w.clone(), *c));
                    i += 1;
                }
                Some((_, c)) => return Err(syntax(line, *c, "expected an arrow name")),
                None => return Err(syntax(line, col, "relation ends early")),
            }
            match toks.get(i) {
                Some((Tok::Star, _)) => i += 1,
                _ => break,
            }
        }
        terms.push((sign * coef, names));
        match toks.get(i) {
            None => break,
            Some((Tok::Plus, _)) => {
                sign = 1;
                i += 1;
            }
            Some((Tok::Minus, _)) => {
                sign = -1;
                i += 1;
            }
            Some((_, c)) => return Err(syntax(line, *c, "expected `+` or `-` between terms")),
        }
    }
    Ok(PendingRelation { terms })
}
