#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fbc/growth.hpp"

namespace fbc {

  // Edge of the splitting contributed by one top-degree generator. Edge
  // groups are infinite cyclic, generated by a conjugate of the stable
  // letter; attaching maps are not materialised.
  struct EdgeRecord {
    std::size_t generator = 0;  // 1-based, in the parent's indexing
    std::string group     = "Z";
  };

  struct SplittingStep {
    std::size_t              degree      = 0;  // d of the parent
    std::size_t              parent_rank = 0;
    std::vector<std::size_t> removed;  // 1-based, parent's indexing
    std::vector<std::size_t> retained;
    TriangularAutomorphism   vertex;
    std::vector<EdgeRecord>  edges;
  };

  enum class LeafTag { fixed, linear };

  char const* to_string(LeafTag tag) noexcept;

  struct HierarchyLeaf {
    LeafTag                tag = LeafTag::fixed;
    std::size_t            rank = 0;
    TriangularAutomorphism monodromy;
    // Group-theoretic description of the leaf vertex group. For linear
    // leaves this is recorded only; the Z^2-edge splitting is not built.
    std::string description;
  };

  struct HierarchyTree {
    TriangularAutomorphism     root;
    std::size_t                root_degree = 0;
    std::vector<SplittingStep> steps;
    HierarchyLeaf              leaf;
  };

  // Removes every generator of top degree d >= 2. Throws PreconditionError
  // when d <= 1 or some generator fails split verification.
  SplittingStep strip_top_stratum(TriangularAutomorphism const& phi);

  HierarchyTree build_hierarchy(TriangularAutomorphism const& phi);

  struct HierarchyReport {
    bool                       ok = true;
    std::optional<std::size_t> step;  // 0-based index of the bad step
    std::string                message;
  };

  // Never throws; reports the first violation found.
  HierarchyReport validate_hierarchy(HierarchyTree const& tree);

}  // namespace fbc
