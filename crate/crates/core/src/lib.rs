//! Science mapping over bibliographic corpora.
//!
//! The crate turns bibliographic exports into co-authorship, bibliographic
//! coupling and co-word networks, then scores them at three levels:
//!
//! * macro: [`metrics::density`] and [`metrics::average_path_length`]
//! * meso: [`community::modularity`] and [`community::louvain`] clusters
//! * micro: [`metrics::betweenness`] with [`metrics::top_k`] tables
//!
//! [`layout::fruchterman_reingold`] positions nodes for drawing, and the
//! [`report`] module assembles everything into JSON/Markdown reports and
//! GEXF, GraphML or edge-list exports.

pub mod community;
pub mod corpus;
pub mod error;
pub mod layout;
pub mod metrics;
pub mod network;
pub mod report;
pub mod synth;
pub mod text;

pub use community::{louvain, modularity, Partition};
pub use corpus::{BibRecord, Corpus, DedupReport};
pub use error::{Error, Result};
pub use layout::{fruchterman_reingold, LayoutCoords, LayoutParams};
pub use metrics::{average_path_length, betweenness, density, CentralityVector};
pub use network::{Network, NodeKind};
pub use report::{analyze, AnalysisParams, AnalysisReport};
