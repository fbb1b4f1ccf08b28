//! Orientably regular maps with a prescribed orientation-preserving
//! automorphism group: enumeration up to isomorphism, invariants, the
//! duality/hole operation graph, and independent counts.

pub mod atlas;
pub mod automorphism;
pub mod census;
pub mod error;
pub mod field;
pub mod group;
pub mod map;
pub mod ops;
pub mod symmetric;

pub use atlas::{build_atlas, enumerate_maps, AtlasDocument, AtlasGraph, Component, Edge, MapClass};
pub use automorphism::{compute_aut, AutGroup, AutId, Automorphism, InvolutionOrbit};
pub use census::{
    count_triples, count_triples_by_name, hall_square_criterion, order_of_o, phi_direct, phi_moebius,
    psl2_even_closed_form, subgroup_lattice, HallVerdict, SubgroupLattice, TripleCount,
};
pub use error::{Error, Result};
pub use field::FiniteField;
pub use group::{build_group, ClassData, ConjugacyClass, Elem, Family, FiniteGroup, GroupSpec, Limits, TracePair};
pub use map::{make_map, MapInvariants, MapTriple, Reflexibility, Word};
pub use ops::{apply_word, dual, hole, mirror, parse_ops, parse_word, Operation, DEFAULT_OPS};
