//! Line-oriented N-Triples reader and writer. Blank nodes are not supported.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

use super::graph::KnowledgeGraph;
use super::term::{is_language_tag, Iri, Literal, Object, Triple};

pub fn parse_ntriples(id: impl Into<String>, text: &str) -> Result<KnowledgeGraph> {
    let mut triples = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if let Some(t) = parse_line(line).map_err(|message| Error::NTriples { line: idx + 1, message })? {
            triples.push(t);
        }
    }
    Ok(KnowledgeGraph::new(id, triples))
}

pub fn read_ntriples(id: impl Into<String>, reader: impl BufRead) -> Result<KnowledgeGraph> {
    let mut triples = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::NTriples { line: idx + 1, message: e.to_string() })?;
        if let Some(t) = parse_line(&line).map_err(|message| Error::NTriples { line: idx + 1, message })? {
            triples.push(t);
        }
    }
    Ok(KnowledgeGraph::new(id, triples))
}

pub fn serialize_ntriples(kg: &KnowledgeGraph) -> String {
    let mut out = String::new();
    for t in kg.triples() {
        t.write_nt(&mut out);
    }
    out
}

pub fn write_ntriples(kg: &KnowledgeGraph, mut writer: impl Write) -> std::io::Result<()> {
    let mut buf = String::new();
    for t in kg.triples() {
        buf.clear();
        t.write_nt(&mut buf);
        writer.write_all(buf.as_bytes())?;
    }
    writer.flush()
}

/// Parses one statement; `Ok(None)` for blank and comment lines.
pub fn parse_line(line: &str) -> Result<Option<Triple>, String> {
    let mut cur = Cursor { s: line, pos: 0 };
    cur.skip_ws();
    if cur.at_end() || cur.peek() == Some('#') {
        return Ok(None);
    }
    let subject = cur.iri().map_err(|e| format!("subject: {e}"))?;
    cur.skip_ws();
    let predicate = cur.iri().map_err(|e| format!("predicate: {e}"))?;
    cur.skip_ws();
    let object = match cur.peek() {
        Some('<') => Object::Iri(cur.iri().map_err(|e| format!("object: {e}"))?),
        Some('"') => Object::Literal(cur.literal()?),
        Some('_') => return Err("blank nodes are not supported".into()),
        Some(c) => return Err(format!("unexpected {c:?} at column {}", cur.pos + 1)),
        None => return Err("missing object".into()),
    };
    cur.skip_ws();
    if cur.peek() != Some('.') {
        return Err("missing terminating '.'".into());
    }
    cur.pos += 1;
    cur.skip_ws();
    if !cur.at_end() && cur.peek() != Some('#') {
        return Err(format!("trailing content at column {}", cur.pos + 1));
    }
    Ok(Some(Triple::new(subject, predicate, object)))
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl Cursor<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.s.len()
    }

    fn peek(&self) -> Option<char> {
        self.s[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t')) {
            self.pos += 1;
        }
    }

    fn iri(&mut self) -> Result<Iri, String> {
        match self.bump() {
            Some('<') => {}
            Some(c) => return Err(format!("expected '<', found {c:?}")),
            None => return Err("expected IRI, found end of line".into()),
        }
        let start = self.pos;
        let end = self.s[start..].find('>').ok_or("unterminated IRI")? + start;
        self.pos = end + 1;
        Iri::new(&self.s[start..end]).map_err(|e| e.to_string())
    }

    fn literal(&mut self) -> Result<Literal, String> {
        self.bump();
        let mut lexical = String::new();
        loop {
            match self.bump() {
                None => return Err("unterminated literal".into()),
                Some('"') => break,
                Some('\\') => lexical.push(self.escape()?),
                Some(c) => lexical.push(c),
            }
        }
        match self.peek() {
            Some('^') => {
                self.bump();
                if self.bump() != Some('^') {
                    return Err("expected '^^'".into());
                }
                let dt = self.iri().map_err(|e| format!("datatype: {e}"))?;
                Ok(Literal::typed(lexical, dt))
            }
            Some('@') => {
                self.bump();
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '-') {
                    self.pos += 1;
                }
                let tag = &self.s[start..self.pos];
                if !is_language_tag(tag) {
                    return Err(format!("bad language tag {tag:?}"));
                }
                Ok(Literal::lang(lexical, tag).expect("tag validated"))
            }
            _ => Ok(Literal::plain(lexical)),
        }
    }

    fn escape(&mut self) -> Result<char, String> {
        let c = self.bump().ok_or("dangling escape")?;
        Ok(match c {
            't' => '\t',
            'b' => '\u{8}',
            'n' => '\n',
            'r' => '\r',
            'f' => '\u{c}',
            '"' => '"',
            '\'' => '\'',
            '\\' => '\\',
            'u' => self.hex(4)?,
            'U' => self.hex(8)?,
            c => return Err(format!("unknown escape \\{c}")),
        })
    }

    fn hex(&mut self, digits: usize) -> Result<char, String> {
        let end = self.pos + digits;
        let hex = self.s.get(self.pos..end).ok_or("truncated unicode escape")?;
        let code = u32::from_str_radix(hex, 16).map_err(|_| format!("bad unicode escape {hex:?}"))?;
        self.pos = end;
        char::from_u32(code).ok_or_else(|| format!("invalid code point {code:#x}"))
    }
}
