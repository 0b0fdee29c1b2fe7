//! MediaWiki XML export reader (`mediawiki/page/{title,ns,redirect,revision/text}`).

use std::collections::HashSet;
use std::io::BufRead;
use std::path::Path;

use quick_xml::events::Event;
use quick_xml::Reader;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WikiPage {
    pub title: String,
    pub wikitext: String,
    pub is_redirect: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WikiDump {
    pub wiki_id: String,
    pub pages: Vec<WikiPage>,
}

impl WikiDump {
    pub fn open(wiki_id: &str, path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(Error::io(path))?;
        parse_dump(wiki_id, std::io::BufReader::new(file))
    }
}

#[derive(Default)]
struct PageBuilder {
    title: Option<String>,
    namespace: Option<String>,
    redirect: bool,
    text: Option<String>,
}

/// Reads every article-namespace page. Pages from other namespaces are
/// dropped, as are later duplicates of an already seen title.
pub fn parse_dump(wiki_id: &str, input: impl BufRead) -> Result<WikiDump> {
    let mut reader = Reader::from_reader(input);
    let mut buf = Vec::new();
    let mut pages = Vec::new();
    let mut seen = HashSet::new();
    let mut page: Option<PageBuilder> = None;
    let mut in_revision = false;
    let mut saw_root = false;

    let xml_err = |reader: &Reader<_>, message: String| Error::Xml { offset: reader.buffer_position(), message };

    loop {
        let event = reader
            .read_event_into(&mut buf)
            .map_err(|e| Error::Xml { offset: reader.error_position(), message: e.to_string() })?;
        match event {
            Event::Start(e) => {
                let name = e.local_name().as_ref().to_vec();
                match name.as_slice() {
                    b"mediawiki" => saw_root = true,
                    b"page" => page = Some(PageBuilder::default()),
                    b"revision" => in_revision = true,
                    b"redirect" => {
                        if let Some(p) = page.as_mut() {
                            p.redirect = true;
                        }
                    }
                    b"title" | b"ns" | b"text" if page.is_some() => {
                        let text = read_text(&mut reader, &name)?;
                        let p = page.as_mut().expect("checked");
                        match name.as_slice() {
                            b"title" if !in_revision => p.title = Some(text),
                            b"ns" if !in_revision => p.namespace = Some(text),
                            b"text" if in_revision => p.text = Some(text),
                            _ => {}
                        }
                    }
                    _ => {}
                }
            }
            Event::Empty(e) => match e.local_name().as_ref() {
                b"redirect" => {
                    if let Some(p) = page.as_mut() {
                        p.redirect = true;
                    }
                }
                b"text" if in_revision => {
                    if let Some(p) = page.as_mut() {
                        p.text = Some(String::new());
                    }
                }
                _ => {}
            },
            Event::End(e) => match e.local_name().as_ref() {
                b"revision" => in_revision = false,
                b"page" => {
                    let p = page.take().ok_or_else(|| xml_err(&reader, "unexpected </page>".into()))?;
                    let title = p.title.ok_or_else(|| xml_err(&reader, "page without <title>".into()))?;
                    let article = p.namespace.as_deref().is_none_or(|ns| ns.trim() == "0");
                    if !article {
                        continue;
                    }
                    if !seen.insert(title.clone()) {
                        log::warn!("{wiki_id}: duplicate page title {title:?} ignored");
                        continue;
                    }
                    let wikitext = p.text.unwrap_or_default();
                    let is_redirect = p.redirect || is_redirect_text(&wikitext);
                    pages.push(WikiPage { title, wikitext, is_redirect });
                }
                _ => {}
            },
            Event::Eof => break,
            _ => {}
        }
        buf.clear();
    }
    if page.is_some() {
        return Err(xml_err(&reader, "unterminated <page>".into()));
    }
    if !saw_root {
        return Err(xml_err(&reader, "missing <mediawiki> root element".into()));
    }
    Ok(WikiDump { wiki_id: wiki_id.to_string(), pages })
}

fn read_text<R: BufRead>(reader: &mut Reader<R>, name: &[u8]) -> Result<String> {
    let mut buf = Vec::new();
    let mut out = String::new();
    loop {
        let event = reader
            .read_event_into(&mut buf)
            .map_err(|e| Error::Xml { offset: reader.error_position(), message: e.to_string() })?;
        match event {
            Event::Text(t) => {
                let text = t
                    .unescape()
                    .map_err(|e| Error::Xml { offset: reader.buffer_position(), message: e.to_string() })?;
                out.push_str(&text);
            }
            Event::CData(c) => out.push_str(&String::from_utf8_lossy(&c.into_inner())),
            Event::End(e) if e.local_name().as_ref() == name => return Ok(out),
            Event::Start(e) => {
                return Err(Error::Xml {
                    offset: reader.buffer_position(),
                    message: format!(
                        "unexpected <{}> inside text element",
                        String::from_utf8_lossy(e.local_name().as_ref())
                    ),
                })
            }
            Event::Eof => {
                return Err(Error::Xml { offset: reader.buffer_position(), message: "unexpected end of input".into() })
            }
            _ => {}
        }
        buf.clear();
    }
}

fn is_redirect_text(text: &str) -> bool {
    text.trim_start().get(..9).is_some_and(|s| s.eq_ignore_ascii_case("#redirect"))
}
