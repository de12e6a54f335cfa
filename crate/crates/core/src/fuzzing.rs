//! Entry points shared by the fuzz targets and the corpus test. Each parses
//! its input and, when that succeeds, checks that printing and parsing again
//! reproduces the value exactly. A violated round trip panics.

use std::fmt::Display;
use std::str::FromStr;

use crate::cli::config::parse_config;
use crate::cli::parse_element;
use crate::cohomology::SparseMatrix;
use crate::graph::canonicalize;
use crate::lie::Element;
use crate::poly::Polyvector;
use crate::{Graph, GraphVector};

fn round_trip<T>(x: &T)
where
    T: Display + FromStr + PartialEq + std::fmt::Debug,
    T::Err: std::fmt::Debug,
{
    let text = x.to_string();
    let back: T = text.parse().expect("printed form parses");
    assert_eq!(&back, x, "round trip changed the value");
    assert_eq!(back.to_string(), text, "round trip changed the text");
}

pub fn graph(text: &str) {
    if let Ok(g) = text.parse::<Graph>() {
        round_trip(&g);
        let c = canonicalize(&g);
        assert_eq!(canonicalize(&c.graph).graph, c.graph, "canonical form is not idempotent");
    }
}

pub fn graph_vector(text: &str) {
    if let Ok(v) = text.parse::<GraphVector>() {
        round_trip(&v);
    }
}

pub fn element(text: &str) {
    if let Ok(el) = parse_element(text, None, None) {
        round_trip::<Element>(&el);
    }
}

pub fn polyvector(text: &str) {
    if let Ok(v) = text.parse::<Polyvector>() {
        round_trip(&v);
    }
}

pub fn matrix(text: &str) {
    if let Ok(m) = text.parse::<SparseMatrix>() {
        round_trip(&m);
    }
}

pub fn config(text: &str) {
    if let Ok(s) = parse_config(text) {
        let printed = s.to_string();
        assert_eq!(parse_config(&printed).expect("printed config parses"), s);
    }
}
