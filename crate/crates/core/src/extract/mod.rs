//! Infobox-based extraction of one knowledge graph per wiki dump.
//!
//! Each non-redirect article becomes a resource with its title as label.
//! Each infobox on the page types the resource with a class named after the
//! template, and each `key=value` pair becomes a property assertion.

mod dump;
mod keys;
mod metadata;
pub mod wikitext;

use rayon::prelude::*;

pub use dump::{parse_dump, WikiDump, WikiPage};
pub(crate) use keys::split_words;
pub use keys::{normalize_property_key, SynonymMap};
pub use metadata::{load_wiki_metadata, parse_wiki_metadata, WikiMetadata};
pub use wikitext::{extract_infoboxes, scan_infoboxes, InfoboxInstance, TemplateWarning};

use crate::error::Result;
use crate::kg::namespace::{check_wiki_id, rdf_type, rdfs_comment, rdfs_label};
use crate::kg::{Iri, KnowledgeGraph, Literal, Namespace, Object, Triple};

#[derive(Clone, Debug)]
pub struct ExtractConfig {
    pub namespace: Namespace,
    pub synonyms: SynonymMap,
    /// Emit the first paragraph of each page as an `rdfs:comment`.
    pub abstracts: bool,
}

impl Default for ExtractConfig {
    fn default() -> Self {
        ExtractConfig { namespace: Namespace::default(), synonyms: SynonymMap::default(), abstracts: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractWarning {
    pub page: String,
    pub message: String,
}

#[derive(Clone, Debug)]
pub struct Extraction {
    pub graph: KnowledgeGraph,
    pub warnings: Vec<ExtractWarning>,
}

/// Local name of the marker property that tags infobox-derived classes.
pub const DERIVED_FROM: &str = "derivedFrom";

/// Title to IRI fragment: whitespace runs become `_`, characters that are
/// illegal in IRIs or would break fragment extraction are percent-encoded.
pub fn encode_title(title: &str) -> String {
    let joined = title.split_whitespace().collect::<Vec<_>>().join("_");
    let mut out = String::with_capacity(joined.len());
    for c in joined.chars() {
        if c.is_control() || "<>\"{}|^`\\/%?#".contains(c) {
            let mut buf = [0u8; 4];
            for b in c.encode_utf8(&mut buf).bytes() {
                out.push_str(&format!("%{b:02X}"));
            }
        } else {
            out.push(c);
        }
    }
    out
}

pub fn decode_fragment(fragment: &str) -> String {
    let bytes = fragment.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'%' && i + 2 < bytes.len() {
            let hex = |b: u8| (b as char).to_digit(16);
            if let (Some(hi), Some(lo)) = (hex(bytes[i + 1]), hex(bytes[i + 2])) {
                out.push((hi * 16 + lo) as u8);
                i += 3;
                continue;
            }
        }
        out.push(bytes[i]);
        i += 1;
    }
    String::from_utf8_lossy(&out).into_owned()
}

/// `Infobox soap character` -> `Soap_character`.
pub fn class_fragment(template_name: &str) -> String {
    let name = template_name.trim();
    let name = match name.get(..9) {
        Some(prefix) if prefix.eq_ignore_ascii_case("template:") => &name[9..],
        _ => name,
    };
    let lower = name.to_lowercase();
    let stripped = match lower.find("infobox") {
        // lowercasing can change byte lengths for non-ASCII text; fall back to the full name then
        Some(pos) if lower.len() == name.len() => format!("{} {}", &name[..pos], &name[pos + 7..]),
        _ => name.to_string(),
    };
    let trimmed = stripped.trim_matches(|c: char| c.is_whitespace() || "_-:".contains(c));
    let base = if trimmed.is_empty() { "Infobox" } else { trimmed };
    let encoded = encode_title(base);
    let mut chars = encoded.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => encoded,
    }
}

/// A value that is exactly one wiki link becomes a resource IRI, anything
/// else a plain literal of its stripped text. `None` means the pair is skipped.
pub fn value_to_object(ns: &Namespace, raw: &str, wiki_id: &str) -> Option<Object> {
    if let Some(target) = wikitext::sole_link_target(raw) {
        if let Ok(iri) = ns.resource(wiki_id, &encode_title(target)) {
            return Some(Object::Iri(iri));
        }
    }
    let text = wikitext::strip_markup(raw);
    (!text.is_empty()).then(|| Object::Literal(Literal::plain(text)))
}

pub fn extract_wiki(dump: &WikiDump, config: &ExtractConfig) -> Result<Extraction> {
    check_wiki_id(&dump.wiki_id)?;
    let per_page: Vec<(Vec<Triple>, Vec<ExtractWarning>)> = dump
        .pages
        .par_iter()
        .filter(|p| !p.is_redirect)
        .map(|page| extract_page(&dump.wiki_id, page, config))
        .collect::<Result<_>>()?;
    let mut warnings = Vec::new();
    let mut triples = Vec::new();
    for (t, w) in per_page {
        triples.extend(t);
        warnings.extend(w);
    }
    Ok(Extraction { graph: KnowledgeGraph::new(dump.wiki_id.clone(), triples), warnings })
}

fn extract_page(wiki: &str, page: &WikiPage, config: &ExtractConfig) -> Result<(Vec<Triple>, Vec<ExtractWarning>)> {
    let ns = &config.namespace;
    let mut triples = Vec::new();
    let title = page.title.trim();
    let fragment = encode_title(title);
    if fragment.is_empty() {
        return Ok((triples, Vec::new()));
    }
    let resource = ns.resource(wiki, &fragment)?;
    triples.push(Triple::new(resource.clone(), rdfs_label(), Literal::plain(title)));

    if config.abstracts {
        if let Some(text) = wikitext::first_paragraph(&page.wikitext) {
            triples.push(Triple::new(resource.clone(), rdfs_comment(), Literal::plain(text)));
        }
    }

    let (infoboxes, template_warnings) = scan_infoboxes(&page.wikitext);
    let warnings = template_warnings
        .into_iter()
        .map(|w| ExtractWarning { page: page.title.clone(), message: w.message })
        .collect();
    let derived_from = ns.meta(DERIVED_FROM);
    for infobox in infoboxes {
        let class: Iri = ns.class(wiki, &class_fragment(&infobox.template_name))?;
        triples.push(Triple::new(resource.clone(), rdf_type(), class.clone()));
        triples.push(Triple::new(class, derived_from.clone(), Literal::plain("infobox")));
        for (key, value) in &infobox.pairs {
            let name = normalize_property_key(key, &config.synonyms);
            if name.is_empty() {
                continue;
            }
            let Some(object) = value_to_object(ns, value, wiki) else {
                continue;
            };
            let property = ns.property(wiki, &encode_title(&name))?;
            triples.push(Triple::new(resource.clone(), property, object));
        }
    }
    Ok((triples, warnings))
}
