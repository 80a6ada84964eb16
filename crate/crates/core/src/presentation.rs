//! Text format for module presentations.
//!
//! ```text
//! # comment
//! algebra p=2 gens=X,Y,Z
//! generators u, v
//! relations
//! X*u
//! Z*Y*u
//! Y*u - X*v
//! ```
//!
//! A relation is a sum of terms `[c*]monomial*generator`, where the monomial is a product of
//! algebra generators, each optionally raised to a power (`Y^2`). Coefficients are integers
//! reduced mod p. `0` is the empty relation.

use std::sync::Arc;

use crate::algebra::{AlgElem, AlgebraSpec, Presentation};
use crate::error::{Error, Result};

fn err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Star,
    Caret,
    Plus,
    Minus,
}

/// Tokens with their 1-based column.
fn lex(line_no: usize, line: &str, col0: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        match c {
            ' ' | '\t' => i += 1,
            '*' => {
                out.push((Tok::Star, col));
                i += 1
            }
            '^' => {
                out.push((Tok::Caret, col));
                i += 1
            }
            '+' => {
                out.push((Tok::Plus, col));
                i += 1
            }
            '-' | '\u{2212}' => {
                out.push((Tok::Minus, col));
                i += 1
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let v = s.parse::<i64>().map_err(|_| err(line_no, col, format!("integer `{s}` out of range")))?;
                out.push((Tok::Int(v), col));
            }
            c if is_ident_start(c) => {
                let start = i;
                while i < chars.len() && is_ident(chars[i]) {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            }
            other => return Err(err(line_no, col, format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct RelationParser<'a> {
    alg: &'a AlgebraSpec,
    generators: &'a [String],
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> RelationParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
    }

    fn next(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn relation(&mut self) -> Result<Vec<AlgElem>> {
        let f = self.alg.field();
        let mut rel = vec![self.alg.zero(); self.generators.len()];
        if self.toks.len() == 1 && self.toks[0].0 == Tok::Int(0) {
            return Ok(rel);
        }
        let mut first = true;
        while self.pos < self.toks.len() || first {
            let mut sign = 1i64;
            match self.peek() {
                Some(Tok::Plus) if !first => {
                    self.next();
                }
                Some(Tok::Minus) => {
                    self.next();
                    sign = -1;
                }
                _ if first => {}
                _ => return Err(err(self.line, self.col(), "expected `+` or `-` between terms")),
            }
            first = false;
            let (coeff, mono, gen) = self.term()?;
            let c = f.reduce(sign * coeff);
            let idx = self.alg.monomial_index(&mono).expect("exponents checked");
            rel[gen].0[idx] = f.add(rel[gen].0[idx], c);
        }
        Ok(rel)
    }

    /// `[int [*]] (factor *)* generator`
    fn term(&mut self) -> Result<(i64, Vec<u8>, usize)> {
        let p = self.alg.p() as i64;
        let mut coeff = 1i64;
        if let Some(Tok::Int(v)) = self.peek() {
            coeff = *v;
            self.next();
            if self.peek() == Some(&Tok::Star) {
                self.next();
            }
        }
        let mut expo = vec![0i64; self.alg.rank()];
        loop {
            let col = self.col();
            let name = match self.next() {
                Some((Tok::Ident(s), _)) => s,
                _ => return Err(err(self.line, col, "expected an algebra or module generator")),
            };
            if let Some(g) = self.generators.iter().position(|s| *s == name) {
                if self.peek() == Some(&Tok::Caret) || self.peek() == Some(&Tok::Star) {
                    return Err(err(self.line, self.col(), format!("module generator `{name}` must end the term")));
                }
                let mono: Vec<u8> = expo.iter().map(|&e| e as u8).collect();
                return Ok((coeff, mono, g));
            }
            let Some(i) = self.alg.names().iter().position(|s| *s == name) else {
                return Err(err(self.line, col, format!("unknown generator `{name}`")));
            };
            let mut e = 1i64;
            if self.peek() == Some(&Tok::Caret) {
                self.next();
                let c = self.col();
                match self.next() {
                    Some((Tok::Int(v), _)) => e = v,
                    _ => return Err(err(self.line, c, "expected an exponent after `^`")),
                }
            }
            expo[i] += e;
            if expo[i] >= p {
                return Err(err(
                    self.line,
                    col,
                    format!("exponent {} of `{name}` is not below p = {p}", expo[i]),
                ));
            }
            let c = self.col();
            match self.next() {
                Some((Tok::Star, _)) => {}
                _ => return Err(err(self.line, c, "expected `*` followed by more factors or a module generator")),
            }
        }
    }
}

fn split_list(s: &str) -> Vec<String> {
    s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).map(str::to_string).collect()
}

/// Parses the presentation text format.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut alg: Option<Arc<AlgebraSpec>> = None;
    let mut generators: Option<Vec<String>> = None;
    let mut in_relations = false;
    let mut relations = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let content = raw.split('#').next().unwrap();
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col0 = content.len() - content.trim_start().len() + 1;
        if in_relations {
            let alg = alg.as_ref().unwrap();
            let gens = generators.as_ref().unwrap();
            let toks = lex(line_no, trimmed, col0)?;
            let mut p = RelationParser { alg, generators: gens, toks, pos: 0, line: line_no, end_col: col0 + trimmed.len() };
            relations.push(p.relation()?);
            continue;
        }
        let (kw, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
        match kw {
            "algebra" => {
                let mut p = None;
                let mut names = None;
                for item in rest.split_whitespace() {
                    let item_col = col0 + raw[col0 - 1..].find(item).unwrap_or(0);
                    match item.split_once('=') {
                        Some(("p", v)) => {
                            p = Some(v.parse::<u32>().map_err(|_| err(line_no, item_col, format!("bad prime `{v}`")))?)
                        }
                        Some(("gens", v)) => names = Some(split_list(v)),
                        _ => return Err(err(line_no, item_col, format!("unknown algebra field `{item}`"))),
                    }
                }
                let p = p.ok_or_else(|| err(line_no, col0, "algebra line needs p=<prime>"))?;
                let names = names.ok_or_else(|| err(line_no, col0, "algebra line needs gens=<names>"))?;
                for n in &names {
                    if !n.chars().next().is_some_and(is_ident_start) || !n.chars().all(is_ident) {
                        return Err(err(line_no, col0, format!("bad generator name `{n}`")));
                    }
                }
                alg = Some(AlgebraSpec::from_names(p, names).map_err(|e| err(line_no, col0, e.to_string()))?);
            }
            "generators" => {
                let Some(a) = alg.as_ref() else {
                    return Err(err(line_no, col0, "`generators` must follow the `algebra` line"));
                };
                let gens = split_list(rest);
                for g in &gens {
                    if a.names().contains(g) {
                        return Err(err(line_no, col0, format!("module generator `{g}` clashes with an algebra generator")));
                    }
                    if !g.chars().next().is_some_and(is_ident_start) || !g.chars().all(is_ident) {
                        return Err(err(line_no, col0, format!("bad generator name `{g}`")));
                    }
                }
                generators = Some(gens);
            }
            "relations" => {
                if generators.is_none() {
                    return Err(err(line_no, col0, "`relations` must follow the `generators` line"));
                }
                if !rest.trim().is_empty() {
                    return Err(err(line_no, col0 + 10, "relations start on the next line"));
                }
                in_relations = true;
            }
            other => return Err(err(line_no, col0, format!("unknown section `{other}`"))),
        }
    }
    let alg = alg.ok_or_else(|| err(last_line.max(1), 1, "missing `algebra` line"))?;
    let generator_names = generators.ok_or_else(|| err(last_line.max(1), 1, "missing `generators` line"))?;
    Ok(Presentation { alg, generator_names, relations })
}

/// Canonical text of a presentation; `parse_presentation` inverts it exactly.
pub fn format_presentation(pres: &Presentation) -> String {
    let alg = &pres.alg;
    let mut s = format!("algebra p={} gens={}\n", alg.p(), alg.names().join(","));
    s.push_str(&format!("generators {}\n", pres.generator_names.join(", ")));
    s.push_str("relations\n");
    for rel in &pres.relations {
        let mut terms = Vec::new();
        for (g, a) in rel.iter().enumerate() {
            for (m, &c) in a.coeffs().iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let mut parts = Vec::new();
                if c != 1 {
                    parts.push(c.to_string());
                }
                for (i, &e) in alg.monomial(m).iter().enumerate() {
                    match e {
                        0 => {}
                        1 => parts.push(alg.names()[i].clone()),
                        e => parts.push(format!("{}^{e}", alg.names()[i])),
                    }
                }
                parts.push(pres.generator_names[g].clone());
                terms.push(parts.join("*"));
            }
        }
        if terms.is_empty() {
            s.push_str("0\n");
        } else {
            s.push_str(&terms.join(" + "));
            s.push('\n');
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::quotient_by_relations;

    const M71: &str = "# test\nalgebra p=2 gens=X,Y,Z\ngenerators u, v\nrelations\nX*u\nZ*Y*u\nY*u - X*v\n";

    #[test]
    fn parses_example_file() {
        let p = parse_presentation(M71).unwrap();
        assert_eq!(p.relations.len(), 3);
        assert_eq!(p.generator_names, vec!["u", "v"]);
        assert_eq!(quotient_by_relations(&p).unwrap().dim(), 7);
    }

    #[test]
    fn empty_relations_give_free_module() {
        let p = parse_presentation("algebra p=2 gens=X,Y,Z\ngenerators u, v\nrelations\n").unwrap();
        assert!(p.relations.is_empty());
        assert_eq!(quotient_by_relations(&p).unwrap().dim(), 16);
    }

    #[test]
    fn unknown_generator_is_named() {
        let e = parse_presentation("algebra p=2 gens=X,Y,Z\ngenerators u\nrelations\nW*u\n").unwrap_err();
        match e {
            Error::Parse { line, col, msg } => {
                assert_eq!((line, col), (4, 1));
                assert!(msg.contains("`W`"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn exponent_at_least_p_is_rejected() {
        let e = parse_presentation("algebra p=3 gens=X,Y\ngenerators u\nrelations\nX^3*u\n").unwrap_err();
        assert!(e.to_string().contains("not below p = 3"), "{e}");
        let e = parse_presentation("algebra p=2 gens=X,Y\ngenerators u\nrelations\nX*Y*X*u\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, col: 5, .. }), "{e:?}");
    }

    #[test]
    fn syntax_errors_carry_location() {
        let e = parse_presentation("algebra p=2 gens=X\ngenerators u\nrelations\n  X*u +\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, col: 8, .. }), "{e:?}");
        let e = parse_presentation("algebra p=2 gens=X\ngenerators u\nrelations\nX u\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, col: 3, .. }), "{e:?}");
        let e = parse_presentation("generators u\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }), "{e:?}");
    }

    #[test]
    fn coefficients_reduce_mod_p() {
        let p = parse_presentation("algebra p=5 gens=X,Y\ngenerators u, v\nrelations\n7*Y^2*u - 2 X*v\n0\n").unwrap();
        let a = &p.alg;
        let y2 = a.monomial_index(&[0, 2]).unwrap();
        let x = a.monomial_index(&[1, 0]).unwrap();
        assert_eq!(p.relations[0][0].0[y2], 2);
        assert_eq!(p.relations[0][1].0[x], 3);
        assert!(p.relations[1].iter().all(AlgElem::is_zero));
    }

    #[test]
    fn round_trip() {
        for text in [M71, "algebra p=3 gens=X,Y\ngenerators u, v\nrelations\nX^2*u\nY*u - X*v\n2*X*Y*u + Y^2*v\n0\n"] {
            let p = parse_presentation(text).unwrap();
            let printed = format_presentation(&p);
            let q = parse_presentation(&printed).unwrap();
            assert_eq!(p, q);
            assert_eq!(format_presentation(&q), printed);
        }
    }
}
