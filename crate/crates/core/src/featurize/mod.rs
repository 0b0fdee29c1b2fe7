//! Bag-of-words tf-idf document vectors per knowledge graph.

pub mod cache;
mod porter;
mod tfidf;
mod tokenize;

pub use porter::stem;
pub(crate) use tfidf::distance_from_dot;
pub use tfidf::{cosine_distance, tfidf_vectors, SparseVector, TfIdf, Vocabulary};
pub use tokenize::{default_tokenizer, tokenize, TokenStream, Tokenizer};

use crate::kg::namespace::{RDF_LANG_STRING, XSD_STRING};
use crate::kg::{KnowledgeGraph, Object};

/// Tokens of every string-valued literal in the graph.
pub fn kg_document(kg: &KnowledgeGraph, tokenizer: &Tokenizer) -> TokenStream {
    let mut doc = TokenStream::default();
    for t in kg.triples() {
        if let Object::Literal(lit) = &t.object {
            let stringy = match lit.datatype() {
                None => true,
                Some(dt) => dt.as_str() == XSD_STRING || dt.as_str() == RDF_LANG_STRING,
            };
            if stringy {
                doc.extend(tokenizer.tokenize(lit.lexical()));
            }
        }
    }
    doc
}
