//! Graphs, shortest-path metrics, measures, and fixture families.

mod family;
mod graph;
mod io;
mod measure;
mod metric;

pub use family::{generate, Family, FamilySpec, MAX_REGULAR_ATTEMPTS};
pub(crate) use graph::mask_of;
pub use graph::{
    bfs_distances, bfs_within, components_within, induced_diameter, multi_source_distances,
    vertex_boundary, Graph, GraphFile, UNREACHABLE,
};
pub use io::{parse_edge_list, parse_graph, parse_graph_json, write_edge_list, write_graph_json};
pub use measure::{
    far_pair_measure, measure_restrict, MeasureFile, PairMeasure, PairMeasureFile, VertexMeasure,
    VertexMeasureFile, PAIR_MASS_TOL,
};
pub use metric::{metric_of, proximity_graph, MetricSpace};
