use crate::error::{Error, Result};

use super::term::Iri;

pub const DEFAULT_BASE: &str = "http://kgforge.local";

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDFS_LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
pub const RDFS_COMMENT: &str = "http://www.w3.org/2000/01/rdf-schema#comment";
pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
pub const XSD_DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
pub const RDF_LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";

/// Wiki ids that would collide with the provenance or fused namespaces.
pub const RESERVED_IDS: [&str; 2] = ["meta", "fused"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntityKind {
    Instance,
    Class,
    Property,
    Other,
}

impl EntityKind {
    pub const MATCHABLE: [EntityKind; 3] = [EntityKind::Instance, EntityKind::Class, EntityKind::Property];

    pub fn name(self) -> &'static str {
        match self {
            EntityKind::Instance => "instance",
            EntityKind::Class => "class",
            EntityKind::Property => "property",
            EntityKind::Other => "other",
        }
    }

    fn segment(self) -> &'static str {
        match self {
            EntityKind::Instance => "resource",
            EntityKind::Class => "class",
            EntityKind::Property => "property",
            EntityKind::Other => "other",
        }
    }
}

impl std::str::FromStr for EntityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "instance" => Ok(EntityKind::Instance),
            "class" => Ok(EntityKind::Class),
            "property" => Ok(EntityKind::Property),
            "other" => Ok(EntityKind::Other),
            _ => Err(Error::InvalidInput(format!("unknown entity kind {s:?}"))),
        }
    }
}

/// IRI layout `<base>/<wikiId>/{resource|class|property}/<fragment>`, plus the
/// provenance vocabulary under `<base>/meta/`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Namespace {
    base: String,
}

impl Default for Namespace {
    fn default() -> Self {
        Namespace { base: DEFAULT_BASE.to_string() }
    }
}

impl Namespace {
    pub fn new(base: impl Into<String>) -> Result<Self> {
        let base = base.into().trim_end_matches('/').to_string();
        Iri::new(format!("{base}/"))?;
        Ok(Namespace { base })
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn entity(&self, wiki: &str, kind: EntityKind, fragment: &str) -> Result<Iri> {
        Iri::new(format!("{}/{}/{}/{}", self.base, wiki, kind.segment(), fragment))
    }

    pub fn resource(&self, wiki: &str, fragment: &str) -> Result<Iri> {
        self.entity(wiki, EntityKind::Instance, fragment)
    }

    pub fn class(&self, wiki: &str, fragment: &str) -> Result<Iri> {
        self.entity(wiki, EntityKind::Class, fragment)
    }

    pub fn property(&self, wiki: &str, fragment: &str) -> Result<Iri> {
        self.entity(wiki, EntityKind::Property, fragment)
    }

    pub fn meta(&self, local: &str) -> Iri {
        Iri::new(format!("{}/meta/{}", self.base, local)).expect("meta vocabulary IRI is valid")
    }

    pub fn meta_prefix(&self) -> String {
        format!("{}/meta/", self.base)
    }

    pub fn wiki_resource(&self, wiki: &str) -> Iri {
        self.meta(&format!("wiki/{wiki}"))
    }

    pub fn entity_kind(&self, iri: &Iri) -> EntityKind {
        let Some(rest) = iri.as_str().strip_prefix(self.base.as_str()).and_then(|r| r.strip_prefix('/')) else {
            return EntityKind::Other;
        };
        let mut parts = rest.splitn(3, '/');
        let (Some(wiki), Some(segment), Some(_)) = (parts.next(), parts.next(), parts.next()) else {
            return EntityKind::Other;
        };
        if wiki.is_empty() || wiki == "meta" {
            return EntityKind::Other;
        }
        match segment {
            "resource" => EntityKind::Instance,
            "class" => EntityKind::Class,
            "property" => EntityKind::Property,
            _ => EntityKind::Other,
        }
    }

    /// Wiki id segment of an entity IRI in this namespace.
    pub fn wiki_of<'a>(&self, iri: &'a Iri) -> Option<&'a str> {
        let rest = iri.as_str().strip_prefix(self.base.as_str())?.strip_prefix('/')?;
        rest.split('/').next().filter(|w| !w.is_empty())
    }
}

pub fn check_wiki_id(id: &str) -> Result<()> {
    let ok = !id.is_empty()
        && id.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c))
        && !RESERVED_IDS.contains(&id);
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidWikiId(id.to_string()))
    }
}

/// `entity_kind` under the default namespace.
pub fn entity_kind(iri: &Iri) -> EntityKind {
    Namespace::default().entity_kind(iri)
}

pub fn rdf_type() -> Iri {
    Iri::new(RDF_TYPE).unwrap()
}

pub fn rdfs_label() -> Iri {
    Iri::new(RDFS_LABEL).unwrap()
}

pub fn rdfs_comment() -> Iri {
    Iri::new(RDFS_COMMENT).unwrap()
}

pub fn xsd(local: &str) -> Iri {
    Iri::new(format!("http://www.w3.org/2001/XMLSchema#{local}")).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(s: &str) -> EntityKind {
        entity_kind(&Iri::new(s).unwrap())
    }

    #[test]
    fn namespace_rule() {
        assert_eq!(kind("http://kgforge.local/w1/resource/Tom_Cruise"), EntityKind::Instance);
        assert_eq!(kind("http://kgforge.local/w1/class/Character"), EntityKind::Class);
        assert_eq!(kind("http://kgforge.local/w1/property/birthDate"), EntityKind::Property);
        assert_eq!(kind(RDFS_LABEL), EntityKind::Other);
        assert_eq!(kind("http://kgforge.local/meta/usedIn"), EntityKind::Other);
        assert_eq!(kind("http://kgforge.local/meta/wiki/w1"), EntityKind::Other);
        assert_eq!(kind("http://kgforge.local/w1/resource"), EntityKind::Other);
        assert_eq!(kind("http://kgforge.localhost/w1/resource/X"), EntityKind::Other);
    }

    #[test]
    fn custom_base() {
        let ns = Namespace::new("https://example.org/kg/").unwrap();
        let iri = ns.class("w", "Film").unwrap();
        assert_eq!(iri.as_str(), "https://example.org/kg/w/class/Film");
        assert_eq!(ns.entity_kind(&iri), EntityKind::Class);
        assert_eq!(ns.wiki_of(&iri), Some("w"));
        assert_eq!(entity_kind(&iri), EntityKind::Other);
    }

    #[test]
    fn wiki_ids() {
        assert!(check_wiki_id("memory-alpha").is_ok());
        assert!(check_wiki_id("meta").is_err());
        assert!(check_wiki_id("a/b").is_err());
        assert!(check_wiki_id("").is_err());
    }
}
