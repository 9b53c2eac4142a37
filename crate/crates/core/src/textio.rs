//! Line-oriented input files and key-value reports.
//!
//! ```text
//! # A_2 with an extra module
//! vertices 2
//! arrow a: 1 -> 2
//! module M dims = (1,1)
//! map M.a = [[1]]
//! summand M
//! summand shift P1
//! ```
//!
//! Relations read `relation: a*b - 2*c*d`. Arrow matrices have
//! `dims[target]` rows and `dims[source]` columns; omitted maps are zero.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactalg::{ExactMatrix, Rationals};
use crate::quiverrep::{Algebra, MatrixRep, Quiver, Relation, RelationSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleDecl {
    pub name: String,
    pub dims: Vec<usize>,
    /// `(arrow name, rows)`, in declaration order.
    pub maps: Vec<(String, Vec<Vec<i64>>)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QuiverFile {
    pub vertices: usize,
    /// `(name, source, target)`, vertices 1-based as written.
    pub arrows: Vec<(String, usize, usize)>,
    /// Each relation as `(coefficient, arrow names)` terms.
    pub relations: Vec<Vec<(i64, Vec<String>)>>,
    pub modules: Vec<ModuleDecl>,
    pub summands: Vec<String>,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn ident_ok(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') && !s.starts_with(|c: char| c.is_ascii_digit())
}

fn parse_relation(line: usize, body: &str) -> Result<Vec<(i64, Vec<String>)>> {
    let normalized = body.replace('-', "+-");
    let mut terms = Vec::new();
    for raw in normalized.split('+') {
        let raw: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
        if raw.is_empty() {
            continue;
        }
        let (sign, rest) = match raw.strip_prefix('-') {
            Some(r) => (-1, r.to_string()),
            None => (1, raw.clone()),
        };
        let mut parts: Vec<&str> = rest.split('*').collect();
        let coeff = match parts[0].parse::<i64>() {
            Ok(c) => {
                parts.remove(0);
                c
            }
            Err(_) => 1,
        };
        if parts.is_empty() || !parts.iter().all(|p| ident_ok(p)) {
            return Err(perr(line, format!("malformed relation term `{raw}`")));
        }
        terms.push((sign * coeff, parts.iter().map(|s| s.to_string()).collect()));
    }
    if terms.is_empty() {
        return Err(perr(line, "empty relation"));
    }
    Ok(terms)
}

fn parse_dims(line: usize, s: &str) -> Result<Vec<usize>> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| perr(line, "dimension vector must look like (d1,...,dN)"))?;
    inner
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| perr(line, format!("bad dimension `{}`", t.trim()))))
        .collect()
}

impl QuiverFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut f = QuiverFile::default();
        let mut seen_vertices = false;
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (head, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
            let rest = rest.trim();
            match head.trim_end_matches(':') {
                "vertices" => {
                    if seen_vertices {
                        return Err(perr(line, "duplicate `vertices` line"));
                    }
                    f.vertices = rest.parse().map_err(|_| perr(line, "expected `vertices N`"))?;
                    seen_vertices = true;
                }
                "arrow" => {
                    let (name, ends) = rest.split_once(':').ok_or_else(|| perr(line, "expected `arrow NAME: I -> J`"))?;
                    let (s, t) = ends.split_once("->").ok_or_else(|| perr(line, "expected `I -> J`"))?;
                    let name = name.trim();
                    if !ident_ok(name) {
                        return Err(perr(line, format!("bad arrow name `{name}`")));
                    }
                    let s: usize = s.trim().parse().map_err(|_| perr(line, "bad source vertex"))?;
                    let t: usize = t.trim().parse().map_err(|_| perr(line, "bad target vertex"))?;
                    if !seen_vertices || s == 0 || t == 0 || s > f.vertices || t > f.vertices {
                        return Err(perr(line, "arrow endpoint outside the declared vertices"));
                    }
                    if f.arrows.iter().any(|a| a.0 == name) {
                        return Err(perr(line, format!("duplicate arrow `{name}`")));
                    }
                    f.arrows.push((name.to_string(), s, t));
                }
                "relation" => {
                    let body = content.split_once(':').map(|x| x.1).unwrap_or(rest);
                    f.relations.push(parse_relation(line, body)?);
                }
                "module" => {
                    let (name, spec) = rest.split_once(char::is_whitespace).ok_or_else(|| perr(line, "expected `module NAME dims = (..)`"))?;
                    let spec = spec.trim().strip_prefix("dims").and_then(|r| r.trim().strip_prefix('=')).ok_or_else(|| perr(line, "expected `dims = (..)`"))?;
                    let dims = parse_dims(line, spec)?;
                    if dims.len() != f.vertices {
                        return Err(perr(line, format!("expected {} dimensions", f.vertices)));
                    }
                    if !ident_ok(name) || f.modules.iter().any(|m| m.name == name) {
                        return Err(perr(line, format!("bad or duplicate module name `{name}`")));
                    }
                    f.modules.push(ModuleDecl { name: name.to_string(), dims, maps: Vec::new() });
                }
                "map" => {
                    let (target, value) = rest.split_once('=').ok_or_else(|| perr(line, "expected `map M.a = [[..]]`"))?;
                    let (m, a) = target.trim().split_once('.').ok_or_else(|| perr(line, "expected `M.a`"))?;
                    let rows: Vec<Vec<i64>> =
                        serde_json::from_str(value.trim()).map_err(|e| perr(line, format!("bad matrix: {e}")))?;
                    let arrow = f.arrows.iter().find(|x| x.0 == a).ok_or_else(|| perr(line, format!("unknown arrow `{a}`")))?.clone();
                    let decl = f.modules.iter_mut().find(|d| d.name == m).ok_or_else(|| perr(line, format!("unknown module `{m}`")))?;
                    let (r, c) = (decl.dims[arrow.2 - 1], decl.dims[arrow.1 - 1]);
                    let shape_ok = if r == 0 { rows.is_empty() || rows.iter().all(|x| x.is_empty()) } else { rows.len() == r && rows.iter().all(|x| x.len() == c) };
                    if !shape_ok {
                        return Err(perr(line, format!("matrix for {m}.{a} must be {r}x{c}")));
                    }
                    if decl.maps.iter().any(|x| x.0 == a) {
                        return Err(perr(line, format!("duplicate map {m}.{a}")));
                    }
                    decl.maps.push((a.to_string(), if r == 0 { Vec::new() } else { rows }));
                }
                "summand" => {
                    if rest.is_empty() {
                        return Err(perr(line, "empty summand"));
                    }
                    f.summands.push(rest.split_whitespace().collect::<Vec<_>>().join(" "));
                }
                other => return Err(perr(line, format!("unknown directive `{other}`"))),
            }
        }
        if !seen_vertices {
            return Err(perr(1, "missing `vertices N`"));
        }
        for rel in &f.relations {
            for (_, path) in rel {
                for a in path {
                    if !f.arrows.iter().any(|x| &x.0 == a) {
                        return Err(perr(0, format!("relation uses unknown arrow `{a}`")));
                    }
                }
            }
        }
        Ok(f)
    }

    /// Canonical text; `parse(print(f)) == f`.
    pub fn print(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "vertices {}", self.vertices);
        for (name, s, t) in &self.arrows {
            let _ = writeln!(out, "arrow {name}: {s} -> {t}");
        }
        for rel in &self.relations {
            let mut body = String::new();
            for (k, (c, path)) in rel.iter().enumerate() {
                let p = path.join("*");
                let mag = c.unsigned_abs();
                let term = if mag == 1 { p } else { format!("{mag}*{p}") };
                match (k, *c < 0) {
                    (0, false) => body.push_str(&term),
                    (0, true) => body.push_str(&format!("-{term}")),
                    (_, false) => body.push_str(&format!(" + {term}")),
                    (_, true) => body.push_str(&format!(" - {term}")),
                }
            }
            let _ = writeln!(out, "relation: {body}");
        }
        for m in &self.modules {
            let dims: Vec<String> = m.dims.iter().map(|d| d.to_string()).collect();
            let _ = writeln!(out, "module {} dims = ({})", m.name, dims.join(","));
            for (a, rows) in &m.maps {
                let _ = writeln!(out, "map {}.{a} = {}", m.name, serde_json::to_string(rows).expect("serializable"));
            }
        }
        for s in &self.summands {
            let _ = writeln!(out, "summand {s}");
        }
        out
    }

    pub fn algebra(&self) -> Result<Algebra> {
        let mut q = Quiver::new(self.vertices);
        for (name, s, t) in &self.arrows {
            q.add_arrow(name, s - 1, t - 1)?;
        }
        let mut relations = Vec::new();
        for rel in &self.relations {
            let terms = rel
                .iter()
                .map(|(c, path)| (*c, path.iter().map(|a| q.arrow_index(a).expect("checked at parse time")).collect()))
                .collect();
            relations.push(Relation { terms });
        }
        Algebra::new(q, RelationSet { relations })
    }

    pub fn module(&self, algebra: &Arc<Algebra>, name: &str) -> Result<MatrixRep<Rationals>> {
        let decl = self.modules.iter().find(|m| m.name == name).ok_or_else(|| Error::UnknownObject(name.to_string()))?;
        let q = algebra.quiver();
        let mats = q
            .arrows()
            .iter()
            .map(|a| match decl.maps.iter().find(|(n, _)| *n == a.name) {
                Some((_, rows)) if !rows.is_empty() => ExactMatrix::from_i64(Rationals, rows),
                _ => ExactMatrix::zeros(Rationals, decl.dims[a.target], decl.dims[a.source]),
            })
            .collect();
        MatrixRep::new(algebra.clone(), Rationals, decl.dims.clone(), mats)
    }
}

/// Key-value report: `[kind]` headers, each followed by `key = value` lines.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReportFile {
    pub records: Vec<Record>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Record {
    pub kind: String,
    pub fields: Vec<(String, String)>,
}

impl Record {
    pub fn new(kind: &str) -> Self {
        Record { kind: kind.to_string(), fields: Vec::new() }
    }

    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

impl ReportFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut records: Vec<Record> = Vec::new();
        for (k, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            if let Some(kind) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                records.push(Record::new(kind));
                continue;
            }
            let (key, value) = line.split_once(" = ").ok_or_else(|| perr(k + 1, "expected `key = value`"))?;
            records.last_mut().ok_or_else(|| perr(k + 1, "field before any record"))?.push(key, value);
        }
        Ok(ReportFile { records })
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let _ = writeln!(out, "[{}]", r.kind);
            for (k, v) in &r.fields {
                let _ = writeln!(out, "{k} = {v}");
            }
        }
        out
    }

    pub fn records_of<'a>(&'a self, kind: &'a str) -> impl Iterator<Item = &'a Record> + 'a {
        self.records.iter().filter(move |r| r.kind == kind)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A2: &str = "vertices 2\narrow a: 1 -> 2\nmodule M dims = (1,1)\nmap M.a = [[1]]\nsummand M\nsummand shift P1\n";

    #[test]
    fn round_trip() {
        let f = QuiverFile::parse(A2).unwrap();
        assert_eq!(f.print(), A2);
        let g = QuiverFile::parse("vertices 2 # two\narrow a: 1 -> 2\narrow b: 2 -> 1\nrelation: a*b\nrelation: -2*b*a + b*a\n").unwrap();
        assert_eq!(QuiverFile::parse(&g.print()).unwrap(), g);
        assert_eq!(g.relations[1], vec![(-2, vec!["b".into(), "a".into()]), (1, vec!["b".into(), "a".into()])]);
    }

    #[test]
    fn module_from_file() {
        let f = QuiverFile::parse(A2).unwrap();
        let alg = Arc::new(f.algebra().unwrap());
        let m = f.module(&alg, "M").unwrap();
        assert_eq!(m.dims(), &[1, 1]);
    }

    #[test]
    fn parse_errors_carry_lines() {
        for (text, line) in [
            ("vertices 2\narrow a: 1 -> 3\n", 2),
            ("vertices 2\narrow a: 1 -> 2\nmodule M dims = (1,1)\nmap M.a = [[1,2]]\n", 4),
            ("vertices 2\nfoo\n", 2),
            ("vertices x\n", 1),
        ] {
            match QuiverFile::parse(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn report_round_trip() {
        let text = "[verify]\nL = S1\npass = true\n[stratum]\nchi = 1\n";
        let r = ReportFile::parse(text).unwrap();
        assert_eq!(r.render(), text);
        assert_eq!(r.records_of("stratum").count(), 1);
        assert_eq!(r.records[0].get("pass"), Some("true"));
    }
}
