// OuMv as a partially dynamic reachability workload on a four-layer graph.
//
// Layers a, b, c, d of n vertices each; vertex ids are a_i = i, b_j = n + j,
// c_j = 2n + j, d_i = 3n + i. Row i of M becomes edges b_i -> c_j. Query i
// wires a_i to the b-nodes of u_i and the c-nodes of v_i to d_i, so that
// a_i reaches d_i exactly when u_i^T M v_i = 1.
#pragma once

#include <vector>

#include "dynoracle/harness/workloads.hpp"
#include "dynoracle/omv.hpp"

namespace dynoracle::harness {

struct OumvQuery {
  BoolVector u, v;
};

/// At most n queries. Incremental: predicted order is E_M then the
/// interleaved (a_i, b_j), (c_j, d_i) schedule, and edges for ones in u_i,
/// v_i arrive before the query, zeros after. Decremental: every edge starts
/// present and the schedule runs first in the prediction, E_M last; zeros
/// are deleted before the query, ones after.
PartialWorkload oumv_workload(const BoolMatrix& m, const std::vector<OumvQuery>& queries,
                              DynamicMode mode);

}  // namespace dynoracle::harness
