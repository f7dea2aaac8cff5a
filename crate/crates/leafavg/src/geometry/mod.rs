//! Mesh geometry of the explicit surfaces: the strip and pants metrics, the
//! tree surface assembled from pants, the planar plug piece with three
//! equidistant arcs, plug trees, and the leaf bookkeeping that ties copies of
//! the pants to the ping-pong maps.

pub mod corner;
pub mod graph;
pub mod leaf;
pub mod metric;
pub mod pants;
pub mod plug_tree;
pub mod sigma;

pub use corner::{build_corner_plug, Ceiling, CornerPlug, PlanarMesh};
pub use graph::{dijkstra, stencil, DisjointSets};
pub use leaf::{leaf_recursion, level_sign, LeafBook, LeafEntry};
pub use metric::{build_strip, smoothstep5, PantsMetric, Strip, StripSpec, BUMP_RADIUS, CONE_POINTS};
pub use pants::{build_pants, Chart, CopyLabel, PantsGrid, PantsMesh, Slot};
pub use plug_tree::{plug_tree_distances, plug_tree_root_to_leaves};
pub use sigma::{assemble_sigma, height_of, SeriesRow, Sigma, SigmaSeries, SigmaSpec, SurfaceObservable};
