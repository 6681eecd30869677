//! The line-oriented `.cdg` text format.
//!
//! ```text
//! # comment
//! field F 2          (optional; `field Q` is the default)
//! gens a b c
//! verts x1 x2 y0
//! a: x1 -> y0
//! ```

use crate::exactlin::FieldSpec;

use super::{DiagramError, ModuleDiagram};

#[derive(Debug)]
struct Token<'a> {
    text: &'a str,
    col: usize,
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Splits a line into tokens; `:` and `->` are tokens of their own.
fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let bytes = line.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c == b':' {
            out.push(Token {
                text: &line[i..i + 1],
                col: i + 1,
            });
            i += 1;
        } else if line[i..].starts_with("->") {
            out.push(Token {
                text: &line[i..i + 2],
                col: i + 1,
            });
            i += 2;
        } else {
            let start = i;
            while i < bytes.len()
                && !bytes[i].is_ascii_whitespace()
                && bytes[i] != b':'
                && !line[i..].starts_with("->")
            {
                i += 1;
            }
            out.push(Token {
                text: &line[start..i],
                col: start + 1,
            });
        }
    }
    out
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> DiagramError {
    DiagramError::Syntax {
        line,
        col,
        message: message.into(),
    }
}

fn names<'a>(
    line: usize,
    tokens: &[Token<'a>],
    what: &str,
    end_col: usize,
) -> Result<Vec<String>, DiagramError> {
    if tokens.is_empty() {
        return Err(syntax(
            line,
            end_col,
            format!("expected at least one {what} name"),
        ));
    }
    tokens
        .iter()
        .map(|t| {
            if is_name(t.text) {
                Ok(t.text.to_string())
            } else {
                Err(syntax(
                    line,
                    t.col,
                    format!("invalid {what} name `{}`", t.text),
                ))
            }
        })
        .collect()
}

pub fn parse_diagram(text: &str) -> Result<ModuleDiagram, DiagramError> {
    let mut field = None;
    let mut gens: Option<Vec<String>> = None;
    let mut diagram: Option<ModuleDiagram> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let content = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(content);
        let Some(first) = tokens.first() else {
            continue;
        };
        let end_col = content.trim_end().len() + 1;
        match first.text {
            "field" => {
                if field.is_some() || gens.is_some() {
                    return Err(syntax(
                        line,
                        first.col,
                        "`field` must appear once, before `gens`",
                    ));
                }
                let rest: String = tokens[1..].iter().map(|t| t.text).collect();
                if rest.is_empty() {
                    return Err(syntax(line, end_col, "expected a field after `field`"));
                }
                let f = FieldSpec::parse(&rest)
                    .map_err(|_| syntax(line, tokens[1].col, format!("unknown field `{rest}`")))?;
                field = Some(f);
            }
            "gens" => {
                if gens.is_some() {
                    return Err(syntax(line, first.col, "`gens` declared twice"));
                }
                gens = Some(names(line, &tokens[1..], "generator", end_col)?);
            }
            "verts" => {
                if diagram.is_some() {
                    return Err(syntax(line, first.col, "`verts` declared twice"));
                }
                let Some(g) = gens.take() else {
                    return Err(syntax(line, first.col, "`verts` must follow `gens`"));
                };
                let v = names(line, &tokens[1..], "vertex", end_col)?;
                diagram = Some(ModuleDiagram::new(
                    field.unwrap_or(FieldSpec::Rationals),
                    g,
                    v,
                )?);
            }
            _ => {
                let Some(d) = diagram.as_mut() else {
                    return Err(syntax(
                        line,
                        first.col,
                        "edges must follow `gens` and `verts`",
                    ));
                };
                let expect = |i: usize, want: &str| -> Result<(), DiagramError> {
                    match tokens.get(i) {
                        Some(t) if t.text == want => Ok(()),
                        Some(t) => Err(syntax(
                            line,
                            t.col,
                            format!("expected `{want}`, found `{}`", t.text),
                        )),
                        None => Err(syntax(line, end_col, format!("expected `{want}`"))),
                    }
                };
                expect(1, ":")?;
                expect(3, "->")?;
                if tokens.len() < 5 {
                    return Err(syntax(line, end_col, "expected a target vertex"));
                }
                if let Some(extra) = tokens.get(5) {
                    return Err(syntax(line, extra.col, "unexpected text after edge"));
                }
                for i in [0, 2, 4] {
                    if !is_name(tokens[i].text) {
                        return Err(syntax(
                            line,
                            tokens[i].col,
                            format!("invalid name `{}`", tokens[i].text),
                        ));
                    }
                }
                let unknown = |name: &str| DiagramError::UnknownName {
                    line,
                    name: name.to_string(),
                };
                let g = d
                    .generator_index(tokens[0].text)
                    .ok_or_else(|| unknown(tokens[0].text))?;
                let s = d
                    .vertex_index(tokens[2].text)
                    .ok_or_else(|| unknown(tokens[2].text))?;
                let t = d
                    .vertex_index(tokens[4].text)
                    .ok_or_else(|| unknown(tokens[4].text))?;
                d.add_edge(g, s, t)?;
            }
        }
    }
    diagram.ok_or_else(|| syntax(last_line + 1, 1, "missing `gens` or `verts` declaration"))
}

pub fn serialize_diagram(d: &ModuleDiagram) -> String {
    let mut out = String::new();
    match d.field() {
        FieldSpec::Rationals => out.push_str("field Q\n"),
        FieldSpec::PrimeField(p) => out.push_str(&format!("field F {p}\n")),
    }
    out.push_str(&format!("gens {}\n", d.generators().join(" ")));
    out.push_str(&format!("verts {}\n", d.vertices().join(" ")));
    for e in d.edges() {
        out.push_str(&format!(
            "{}: {} -> {}\n",
            d.generators()[e.generator],
            d.vertices()[e.source],
            d.vertices()[e.target]
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        let text = "# two cyclics glued\nfield F 2\ngens a b\r\nverts x y z\na: x -> z  # shared\nb: y -> z\n";
        let d = parse_diagram(text).unwrap();
        assert_eq!(d.field(), FieldSpec::prime(2).unwrap());
        assert_eq!(d.edges().len(), 2);
        let again = parse_diagram(&serialize_diagram(&d)).unwrap();
        assert_eq!(again, d);
    }

    #[test]
    fn default_field_is_rational() {
        let d = parse_diagram("gens a\nverts x\n").unwrap();
        assert_eq!(d.field(), FieldSpec::Rationals);
    }

    #[test]
    fn empty_vertex_list() {
        let err = parse_diagram("gens a\nverts\n").unwrap_err();
        assert_eq!(
            err,
            DiagramError::Syntax {
                line: 2,
                col: 6,
                message: "expected at least one vertex name".into()
            }
        );
    }

    #[test]
    fn duplicate_edge() {
        let err = parse_diagram("gens a\nverts x y z\na: x -> y\na: x -> z\n").unwrap_err();
        assert_eq!(
            err,
            DiagramError::DuplicateEdge {
                vertex: "x".into(),
                generator: "a".into()
            }
        );
    }

    #[test]
    fn unknown_names_and_cycles() {
        assert_eq!(
            parse_diagram("gens a\nverts x y\nb: x -> y\n").unwrap_err(),
            DiagramError::UnknownName {
                line: 3,
                name: "b".into()
            }
        );
        assert!(matches!(
            parse_diagram("gens a b\nverts x y\na: x -> y\nb: y -> x\n").unwrap_err(),
            DiagramError::Cycle(_)
        ));
        assert!(matches!(
            parse_diagram("gens a\nverts x\na: x -> x\n").unwrap_err(),
            DiagramError::Cycle(_)
        ));
    }

    #[test]
    fn syntax_positions() {
        match parse_diagram("gens a\nverts x y\na x -> y\n").unwrap_err() {
            DiagramError::Syntax { line, col, .. } => assert_eq!((line, col), (3, 3)),
            other => panic!("{other:?}"),
        }
        match parse_diagram("a: x -> y\n").unwrap_err() {
            DiagramError::Syntax { line, col, .. } => assert_eq!((line, col), (1, 1)),
            other => panic!("{other:?}"),
        }
        match parse_diagram("field F 4\n").unwrap_err() {
            DiagramError::Syntax { line, col, .. } => assert_eq!((line, col), (1, 7)),
            other => panic!("{other:?}"),
        }
        assert!(parse_diagram("").is_err());
    }
}
