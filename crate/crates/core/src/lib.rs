//! Exact resistance-distance index for graphs of small treewidth.
//!
//! A minimum-degree elimination ordering yields a vertex hierarchy; each node
//! stores one column of the inverse Laplacian restricted to its subtree.
//! Pair queries then read `O(height)` labels and single-source queries one
//! pass over the labels on a single root path.
//!
//! ```
//! use resdist_core::{generators, query_pair, LabelIndex};
//!
//! let g = generators::cycle(3);
//! let idx = LabelIndex::build(&g).unwrap();
//! let r = query_pair(&idx, 0, 1).unwrap().resistance;
//! assert!((r - 2.0 / 3.0).abs() < 1e-12);
//! ```

pub mod flow;
pub mod generators;
pub mod graph;
pub mod labelling;
pub mod oracle;
pub mod query;
pub mod rng;
pub mod treedecomp;

pub use flow::{
    alternative_paths, electrical_flow, route_metrics, shortest_path_length, FlowAssignment, FlowError, FlowPath,
    MetricParams, RouteMetrics,
};
pub use graph::{build_graph, BuildReport, EdgeRecord, Graph, GraphError, NodeId, ParseError, WeightMode};
pub use labelling::{build_labels, IndexIoError, LabelError, LabelIndex};
pub use query::{lca, query_pair, query_source, PairResult, QueryError, SourceResult};
pub use treedecomp::{mde_decompose, TreeDecomposition, TreeStats, VertexHierarchy};
