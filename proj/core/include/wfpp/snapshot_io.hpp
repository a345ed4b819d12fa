#pragma once

#include <iosfwd>
#include <string>

#include "wfpp/engine.hpp"

namespace wfpp {

/// Cluster serialization.  Two formats, both round-trip exact:
///
/// CSV: a metadata comment `# dim=<d> root=<c0,..> clock=<t>`, a header
/// `step,time,ax,ay,bx,by` (endpoint columns follow the dimension), then one
/// row per absorbed edge in absorption order.  Times print as %.17g.
///
/// Binary (little-endian): magic "EDN1", u8 version=1, u8 dim, u16 zero,
/// root coords as i32[dim], clock as f64, edge count as u64, then per edge
/// the zigzag-varint deltas of the low endpoint from the previous edge's low
/// endpoint (the root for the first edge), one varint axis, and the
/// absorption time as f64.
///
/// Vertex first-passage times are not stored; loaders rebuild them by
/// replaying the edge list, which reproduces them exactly because the engine
/// assigns vertex times the same way.

void write_cluster_csv(std::ostream& os, const ClusterState& state);
void write_cluster_csv(const std::string& path, const ClusterState& state);
ClusterState read_cluster_csv(std::istream& is);
ClusterState read_cluster_csv(const std::string& path);

void write_cluster_binary(std::ostream& os, const ClusterState& state);
void write_cluster_binary(const std::string& path, const ClusterState& state);
ClusterState read_cluster_binary(std::istream& is);
ClusterState read_cluster_binary(const std::string& path);

/// The cluster as it stood at a recorded snapshot: the prefix
/// edges[0..snap.step) of the run's final edge list, clock = snap.time.
ClusterState cluster_at_snapshot(const ClusterState& final_state, const Snapshot& snap);

}  // namespace wfpp
