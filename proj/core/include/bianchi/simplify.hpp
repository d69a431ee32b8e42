#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bianchi/triangulation.hpp"

namespace bianchi {

// Merges the four simplices around each (edge centre, face centre) edge.
Triangulation coarsen_barycentric(const Triangulation& T);

enum class CollapseOrder { MaxDegree, Shuffled };

struct CollapseStats {
  size_t tets_before = 0, tets_after = 0;
  int finite_before = 0, finite_after = 0;
  size_t collapses = 0;
  size_t rejected_checks = 0;
  size_t passes = 0;
};

Triangulation collapse_edges(const Triangulation& T, CollapseStats* stats = nullptr,
                             CollapseOrder order = CollapseOrder::MaxDegree, uint64_t seed = 0);

struct SimplifyStats {
  size_t built = 0, coarsened = 0, collapsed = 0;
  int finite_vertices = 0;
  int attempts = 0;
  uint64_t seed = 0;  // 0: max-degree order succeeded
};

constexpr int kCollapseRetries = 16;

// Coarsen (when barycentric), then collapse in max-degree order; if finite
// vertices survive, retry from the coarsened complex with seeded shuffles.
Triangulation simplify(const Triangulation& T, SimplifyStats* stats = nullptr);

}  // namespace bianchi
