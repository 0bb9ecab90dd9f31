//! Build automation for ontology projects.
//!
//! The crate bundles everything the `ontomvn` command line tool needs:
//! an OWL 2 functional-style syntax subset ([`ofs`]) over a small axiom
//! model ([`model`]), Maven-style artifact storage and transfer
//! ([`repo`]), dependency and import resolution ([`resolver`]), aspect
//! weaving ([`aspects`]), an EL classifier ([`reasoner`]), ontology
//! diffing ([`diff`]), report generation ([`report`]) and a test
//! harness for ontology test manifests ([`testkit`]).

pub mod aspects;
pub mod catalog;
pub mod descriptor;
pub mod diff;
pub mod iri;
pub mod markup;
pub mod model;
pub mod ofs;
pub mod reasoner;
pub mod repo;
pub mod report;
pub mod resolver;
pub mod stub;
pub mod testkit;
