//! Online vector bin packing, online coloring of k-uniform hypergraphs, and the
//! incidence-matrix reduction that turns any online packer into an online colorer.
//!
//! The adversaries in [`adversary`] build streams on which every online colorer is forced
//! to use many colors; through [`reduction`] those streams become packing instances on
//! which every online packer is forced to open many bins.

pub mod adversary;
pub mod colorer;
pub mod error;
pub mod format;
pub mod generate;
pub mod hypergraph;
pub mod partition;
pub mod reduction;
pub mod subsets;
pub mod vbp;

pub use adversary::{Adversary, AdversaryTranscript, HypertreeAdversary, KillerAdversary};
pub use colorer::{colorer_by_name, ColoringSession, FirstFitColorer, OnlineColorer};
pub use error::{Error, Result};
pub use hypergraph::{Color, Coloring, Edge, Hypergraph, Vertex};
pub use partition::{diverse_to_starry, BlockPartition, MultiFamily};
pub use reduction::{packer_to_colorer, AdversaryKind, PackerColorer, Variant};
pub use vbp::{FirstFitPacker, ItemVector, Mode, OnlinePacker, PackingAssignment, VbpInstance};
