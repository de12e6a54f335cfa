//! Reading elements and polyvectors from their text forms.

use crate::error::{Error, Result};
use crate::graph::{Constraints, EdgeKind};
use crate::lie::{Element, Flavor};
use crate::vector::GraphVector;

/// Parses an element file: either the full form with a `complex=` header or a
/// bare list of `<rational> * <graph>` lines. A bare directed vector is read in
/// `dfGC`; a bare undirected one in `GC` when every term qualifies, otherwise
/// in `fGC`. `flavor` overrides the complex; `truncation` the vertex bound.
pub fn parse_element(text: &str, flavor: Option<Flavor>, truncation: Option<usize>) -> Result<Element> {
    let mut el = if text.starts_with("complex=") {
        text.parse::<Element>()?
    } else {
        let v: GraphVector = text.parse()?;
        let inferred = match v.iter().next().map(|(g, _)| g.kind()) {
            None | Some(EdgeKind::Directed) => Flavor::Dfgc,
            Some(EdgeKind::Undirected) => {
                if v.iter().all(|(g, _)| Constraints::kontsevich().accepts(g)) {
                    Flavor::Gc
                } else {
                    Flavor::Fgc
                }
            }
        };
        let flavor = flavor.unwrap_or(inferred);
        Element::from_vector(flavor, &v)?
    };
    if let Some(f) = flavor {
        el = el.retag(f)?;
    }
    if el.flavor() == Flavor::Gc && !el.in_gc() {
        return Err(Error::Incompatible(
            "terms must be connected, at least trivalent and without cut vertices to lie in GC".into(),
        ));
    }
    if let Some(t) = truncation {
        el = el.with_truncation(t);
    }
    Ok(el)
}
