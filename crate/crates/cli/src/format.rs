//! Plain-text files for matrices, vectors, observable coefficients and
//! Bloch vectors.
//!
//! Every document starts with a header line naming its kind:
//!
//! ```text
//! matrix R C        followed by R rows of C entries "re,im"
//! vector N          followed by N entries "re,im", any layout
//! coeffs D a0 a1 .. a_{D²-1}
//! bloch D b1 .. b_{D²-1}
//! ```
//!
//! `#` starts a comment. A file may hold several documents in a row.

use std::fmt::Write as _;

use obsmask::{BlochVector, ComplexMatrix, ObservableCoeffs, C64};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Matrix(ComplexMatrix),
    Vector(Vec<C64>),
    Coeffs(ObservableCoeffs),
    Bloch(BlochVector),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Matrix(_) => "matrix",
            Self::Vector(_) => "vector",
            Self::Coeffs(_) => "coeffs",
            Self::Bloch(_) => "bloch",
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl Token<'_> {
    fn error(&self, message: impl Into<String>) -> CliError {
        CliError::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }
}

/// Tokens of each non-blank line, comments stripped; positions are 1-based.
fn tokenize(text: &str) -> Vec<Vec<Token<'_>>> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (j, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(j),
                (true, Some(s)) => {
                    tokens.push(Token {
                        text: &content[s..j],
                        line: i + 1,
                        column: content[..s].chars().count() + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if !tokens.is_empty() {
            lines.push(tokens);
        }
    }
    lines
}

fn real(t: &Token<'_>) -> Result<f64, CliError> {
    t.text
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| t.error(format!("expected a real number, found {:?}", t.text)))
}

fn complex(t: &Token<'_>) -> Result<C64, CliError> {
    let Some((re, im)) = t.text.split_once(',') else {
        return Err(t.error(format!("expected an entry re,im, found {:?}", t.text)));
    };
    let parse = |s: &str| s.parse::<f64>().ok().filter(|x| x.is_finite());
    match (parse(re), parse(im)) {
        (Some(re), Some(im)) => Ok(C64::new(re, im)),
        _ => Err(t.error(format!("malformed complex entry {:?}", t.text))),
    }
}

fn count(t: &Token<'_>) -> Result<usize, CliError> {
    t.text
        .parse::<usize>()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| t.error(format!("expected a positive integer, found {:?}", t.text)))
}

fn arity(header: &[Token<'_>], n: usize) -> Result<(), CliError> {
    match header.get(n) {
        Some(extra) => Err(extra.error("unexpected token after header")),
        None if header.len() < n => Err(header[0].error(format!("{} header needs {} fields", header[0].text, n - 1))),
        None => Ok(()),
    }
}

/// Values after `tag D`; the count must be `D² − 1` (plus `a0` for coeffs).
fn bloch_values(header: &[Token<'_>], with_a0: bool) -> Result<(usize, Vec<f64>), CliError> {
    let tag = &header[0];
    let d = count(header.get(1).ok_or_else(|| tag.error(format!("{} header needs a dimension", tag.text)))?)?;
    if d < 2 {
        return Err(header[1].error("dimension must be at least 2"));
    }
    let values = header[2..].iter().map(real).collect::<Result<Vec<_>, _>>()?;
    let expected = d * d - 1 + usize::from(with_a0);
    if values.len() != expected {
        return Err(CliError::DimensionMismatch {
            line: tag.line,
            expected,
            got: values.len(),
        });
    }
    Ok((d, values))
}

/// Parses every document in `text`, in order.
pub fn parse_documents(text: &str) -> Result<Vec<Document>, CliError> {
    let lines = tokenize(text);
    let mut docs = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let header = &lines[i];
        let tag = &header[0];
        i += 1;
        let doc = match tag.text {
            "matrix" => {
                arity(header, 3)?;
                let (r, c) = (count(&header[1])?, count(&header[2])?);
                let mut data = Vec::with_capacity(r * c);
                for k in 0..r {
                    let row = lines.get(i).ok_or_else(|| {
                        tag.error(format!("matrix ends after {k} of {r} rows"))
                    })?;
                    if row.len() != c {
                        let at = row.get(c).unwrap_or(&row[row.len() - 1]);
                        return Err(at.error(format!("row has {} entries, expected {c}", row.len())));
                    }
                    data.extend(row.iter().map(complex).collect::<Result<Vec<_>, _>>()?);
                    i += 1;
                }
                Document::Matrix(ComplexMatrix::new(r, c, data)?)
            }
            "vector" => {
                arity(header, 2)?;
                let n = count(&header[1])?;
                let mut entries = Vec::with_capacity(n);
                while entries.len() < n {
                    let row = lines.get(i).ok_or_else(|| {
                        tag.error(format!("vector ends after {} of {n} entries", entries.len()))
                    })?;
                    if entries.len() + row.len() > n {
                        return Err(row[n - entries.len()].error(format!("vector has more than {n} entries")));
                    }
                    entries.extend(row.iter().map(complex).collect::<Result<Vec<_>, _>>()?);
                    i += 1;
                }
                Document::Vector(entries)
            }
            "coeffs" => {
                let (d, values) = bloch_values(header, true)?;
                Document::Coeffs(ObservableCoeffs::new(d, values[0], values[1..].to_vec())?)
            }
            "bloch" => {
                let (d, values) = bloch_values(header, false)?;
                Document::Bloch(BlochVector::new(d, values)?)
            }
            other => {
                return Err(tag.error(format!(
                    "unknown header {other:?}; expected matrix, vector, coeffs or bloch"
                )))
            }
        };
        docs.push(doc);
    }
    Ok(docs)
}

/// Parses a file holding exactly one document.
pub fn parse_document(text: &str) -> Result<Document, CliError> {
    let mut docs = parse_documents(text)?;
    match docs.len() {
        1 => Ok(docs.remove(0)),
        0 => Err(CliError::Parse {
            line: 1,
            column: 1,
            message: "file holds no document".into(),
        }),
        n => Err(CliError::Parse {
            line: 1,
            column: 1,
            message: format!("expected one document, found {n}"),
        }),
    }
}

fn entry(z: C64) -> String {
    format!("{},{}", z.re, z.im)
}

fn join(xs: impl IntoIterator<Item = String>) -> String {
    xs.into_iter().collect::<Vec<_>>().join(" ")
}

/// Canonical text; `parse_document(render(doc))` returns `doc` exactly.
pub fn render(doc: &Document) -> String {
    let mut out = String::new();
    match doc {
        Document::Matrix(m) => {
            let _ = writeln!(out, "matrix {} {}", m.rows(), m.cols());
            for i in 0..m.rows() {
                let _ = writeln!(out, "{}", join(m.row(i).iter().map(|&z| entry(z))));
            }
        }
        Document::Vector(v) => {
            let _ = writeln!(out, "vector {}", v.len());
            let _ = writeln!(out, "{}", join(v.iter().map(|&z| entry(z))));
        }
        Document::Coeffs(c) => {
            let values = std::iter::once(c.a0).chain(c.a.iter().copied());
            let _ = writeln!(out, "coeffs {} {}", c.dim(), join(values.map(|x| x.to_string())));
        }
        Document::Bloch(b) => {
            let _ = writeln!(out, "bloch {} {}", b.dim(), join(b.components().iter().map(|x| x.to_string())));
        }
    }
    out
}

pub fn render_all(docs: &[Document]) -> String {
    docs.iter().map(render).collect()
}
