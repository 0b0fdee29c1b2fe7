use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An absolute IRI. Cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Iri(Arc<str>);

impl Iri {
    pub fn new(value: impl AsRef<str>) -> Result<Self> {
        let value = value.as_ref();
        if value.is_empty() {
            return Err(Error::InvalidIri { iri: value.into(), reason: "empty" });
        }
        if !value.contains("://") {
            return Err(Error::InvalidIri { iri: value.into(), reason: "missing scheme separator" });
        }
        if value.chars().any(|c| c.is_control() || c.is_whitespace() || "<>\"{}|^`\\".contains(c)) {
            return Err(Error::InvalidIri { iri: value.into(), reason: "illegal character" });
        }
        Ok(Iri(Arc::from(value)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Substring after the last `/`.
    pub fn fragment(&self) -> &str {
        match self.0.rfind('/') {
            Some(pos) => &self.0[pos + 1..],
            None => &self.0,
        }
    }
}

impl fmt::Debug for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Literal {
    lexical: String,
    datatype: Option<Iri>,
    language: Option<String>,
}

impl Literal {
    pub fn plain(lexical: impl Into<String>) -> Self {
        Literal { lexical: lexical.into(), datatype: None, language: None }
    }

    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        Literal { lexical: lexical.into(), datatype: Some(datatype), language: None }
    }

    pub fn lang(lexical: impl Into<String>, language: impl Into<String>) -> Result<Self> {
        let language = language.into();
        if !is_language_tag(&language) {
            return Err(Error::InvalidLiteral(format!("bad language tag {language:?}")));
        }
        Ok(Literal { lexical: lexical.into(), datatype: None, language: Some(language) })
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> Option<&Iri> {
        self.datatype.as_ref()
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }

    pub(crate) fn write_nt(&self, out: &mut String) {
        out.push('"');
        for c in self.lexical.chars() {
            match c {
                '"' => out.push_str("\\\""),
                '\\' => out.push_str("\\\\"),
                '\n' => out.push_str("\\n"),
                '\r' => out.push_str("\\r"),
                '\t' => out.push_str("\\t"),
                c => out.push(c),
            }
        }
        out.push('"');
        if let Some(dt) = &self.datatype {
            out.push_str("^^<");
            out.push_str(dt.as_str());
            out.push('>');
        } else if let Some(lang) = &self.language {
            out.push('@');
            out.push_str(lang);
        }
    }
}

pub(crate) fn is_language_tag(tag: &str) -> bool {
    let mut parts = tag.split('-');
    let first = parts.next().unwrap_or("");
    !first.is_empty()
        && first.chars().all(|c| c.is_ascii_alphabetic())
        && parts.all(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_alphanumeric()))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Object {
    Iri(Iri),
    Literal(Literal),
}

impl Object {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Object::Iri(iri) => Some(iri),
            Object::Literal(_) => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Object::Literal(lit) => Some(lit),
            Object::Iri(_) => None,
        }
    }

    pub fn to_nt(&self) -> String {
        let mut s = String::new();
        self.write_nt(&mut s);
        s
    }

    pub(crate) fn write_nt(&self, out: &mut String) {
        match self {
            Object::Iri(iri) => {
                out.push('<');
                out.push_str(iri.as_str());
                out.push('>');
            }
            Object::Literal(lit) => lit.write_nt(out),
        }
    }
}

impl From<Iri> for Object {
    fn from(iri: Iri) -> Self {
        Object::Iri(iri)
    }
}

impl From<Literal> for Object {
    fn from(lit: Literal) -> Self {
        Object::Literal(lit)
    }
}

// Objects order by their N-Triples serialization.
impl Ord for Object {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Object::Iri(a), Object::Iri(b)) if a == b => Ordering::Equal,
            _ => self.to_nt().cmp(&other.to_nt()),
        }
    }
}

impl PartialOrd for Object {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Iri,
    pub predicate: Iri,
    pub object: Object,
}

impl Triple {
    pub fn new(subject: Iri, predicate: Iri, object: impl Into<Object>) -> Self {
        Triple { subject, predicate, object: object.into() }
    }

    pub fn to_nt(&self) -> String {
        let mut s = String::new();
        self.write_nt(&mut s);
        s
    }

    pub(crate) fn write_nt(&self, out: &mut String) {
        out.push('<');
        out.push_str(self.subject.as_str());
        out.push_str("> <");
        out.push_str(self.predicate.as_str());
        out.push_str("> ");
        self.object.write_nt(out);
        out.push_str(" .\n");
    }

    /// Every IRI mentioned by this triple, in subject/predicate/object order.
    pub fn iris(&self) -> impl Iterator<Item = &Iri> {
        [Some(&self.subject), Some(&self.predicate), self.object.as_iri()].into_iter().flatten()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iri_validation() {
        assert!(Iri::new("http://x/a").is_ok());
        assert!(Iri::new("").is_err());
        assert!(Iri::new("urn:x").is_err());
        assert!(Iri::new("http://x/a b").is_err());
        assert!(Iri::new("http://x/a>").is_err());
    }

    #[test]
    fn fragment_is_after_last_slash() {
        let iri = Iri::new("http://kgforge.local/w1/resource/New_York").unwrap();
        assert_eq!(iri.fragment(), "New_York");
        assert_eq!(Iri::new("http://x/a/").unwrap().fragment(), "");
    }

    #[test]
    fn object_order_follows_serialization() {
        let lit = Object::Literal(Literal::plain("z"));
        let iri = Object::Iri(Iri::new("http://a/").unwrap());
        // '"' sorts before '<'
        assert!(lit < iri);
    }

    #[test]
    fn literal_escaping() {
        let lit = Literal::plain("a\"b\\c\nd");
        let mut s = String::new();
        lit.write_nt(&mut s);
        assert_eq!(s, r#""a\"b\\c\nd""#);
    }

    #[test]
    fn language_tags() {
        assert!(Literal::lang("x", "en-GB").is_ok());
        assert!(Literal::lang("x", "en-").is_err());
        assert!(Literal::lang("x", "").is_err());
    }
}
