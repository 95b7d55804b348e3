#include "fbc/hierarchy.hpp"

#include <algorithm>
#include <exception>
#include <string>
#include <vector>

#include "fbc/errors.hpp"

namespace fbc {

  char const* to_string(LeafTag tag) noexcept {
    switch (tag) {
      case LeafTag::fixed:
        return "fixed";
      case LeafTag::linear:
        return "linear";
    }
    return "unknown";
  }

  namespace {
    std::string leaf_description(LeafTag tag, std::size_t rank) {
      auto r = std::to_string(rank);
      if (tag == LeafTag::fixed) {
        return "F_" + r + " x Z";
      }
      return "F_" + r + " x| Z, linear monodromy: splits with vertex groups"
             " F_k x Z and Z^2 edge groups";
    }
  }  // namespace

  SplittingStep strip_top_stratum(TriangularAutomorphism const& phi) {
    auto report = edge_growth_degrees(phi);
    if (report.degree <= 1) {
      throw PreconditionError("strip_top_stratum needs degree >= 2, got "
                              + std::to_string(report.degree)
                              + "; degree 0 and 1 are hierarchy leaves");
    }
    if (!report.exact()) {
      throw PreconditionError(
          "strip_top_stratum needs split-verified input; matrix degrees are "
          "only upper bounds here");
    }
    SplittingStep step;
    step.degree      = report.degree;
    step.parent_rank = phi.rank();
    for (std::size_t i = 1; i <= phi.rank(); ++i) {
      if (report.degrees[i - 1] == report.degree) {
        step.removed.push_back(i);
        step.edges.push_back(EdgeRecord{i, "Z"});
      } else {
        step.retained.push_back(i);
      }
    }
    // Top-degree generators never occur in lower suffixes, so restriction
    // is well defined; restrict_to throws if that ever fails.
    step.vertex = phi.restrict_to(step.retained);
    return step;
  }

  HierarchyTree build_hierarchy(TriangularAutomorphism const& phi) {
    HierarchyTree tree;
    tree.root        = phi;
    auto degree      = automorphism_degree(phi);
    tree.root_degree = degree.degree;
    if (degree.upper_bound) {
      throw PreconditionError(
          "build_hierarchy needs split-verified input");
    }
    TriangularAutomorphism current = phi;
    std::size_t            d       = degree.degree;
    while (d >= 2) {
      auto step = strip_top_stratum(current);
      current   = step.vertex;
      tree.steps.push_back(std::move(step));
      d = automorphism_degree(current).degree;
    }
    tree.leaf.tag         = d == 0 ? LeafTag::fixed : LeafTag::linear;
    tree.leaf.rank        = current.rank();
    tree.leaf.monodromy   = current;
    tree.leaf.description = leaf_description(tree.leaf.tag, current.rank());
    return tree;
  }

  HierarchyReport validate_hierarchy(HierarchyTree const& tree) {
    auto fail = [](std::optional<std::size_t> step, std::string msg) {
      return HierarchyReport{false, step, std::move(msg)};
    };
    try {
      TriangularAutomorphism parent = tree.root;
      std::size_t parent_rank   = tree.root.rank();
      std::size_t parent_degree = automorphism_degree(tree.root).degree;
      if (parent_degree != tree.root_degree) {
        return fail(std::nullopt, "root degree " + std::to_string(tree.root_degree)
                                      + " does not match recomputed degree "
                                      + std::to_string(parent_degree));
      }
      for (std::size_t s = 0; s < tree.steps.size(); ++s) {
        auto const& step = tree.steps[s];
        auto        name = "step " + std::to_string(s) + ": ";
        if (step.parent_rank != parent_rank) {
          return fail(s, name + "parent rank " + std::to_string(step.parent_rank)
                             + " does not match " + std::to_string(parent_rank));
        }
        if (step.degree != parent_degree) {
          return fail(s, name + "recorded degree " + std::to_string(step.degree)
                             + " but parent degree is "
                             + std::to_string(parent_degree));
        }
        if (step.degree < 2) {
          return fail(s, name + "splitting step below degree 2");
        }
        if (step.removed.empty()) {
          return fail(s, name + "no generators removed");
        }
        if (step.vertex.rank() >= parent_rank) {
          return fail(s, name + "vertex rank " + std::to_string(step.vertex.rank())
                             + " does not decrease from "
                             + std::to_string(parent_rank));
        }
        if (step.vertex.rank() + step.removed.size() != parent_rank
            || step.retained.size() != step.vertex.rank()) {
          return fail(s, name + "removed and retained generators do not "
                                "partition the parent rank");
        }
        std::vector<std::size_t> all(step.removed);
        all.insert(all.end(), step.retained.begin(), step.retained.end());
        std::sort(all.begin(), all.end());
        for (std::size_t i = 0; i < all.size(); ++i) {
          if (all[i] != i + 1) {
            return fail(s, name + "removed and retained generators do not "
                                  "partition the parent rank");
          }
        }
        if (!std::is_sorted(step.retained.begin(), step.retained.end())) {
          return fail(s, name + "retained generators are out of order");
        }
        auto degrees = edge_growth_degrees(parent).degrees;
        for (auto g : step.removed) {
          if (degrees[g - 1] != step.degree) {
            return fail(s, name + "removed generator " + std::to_string(g)
                               + " has degree " + std::to_string(degrees[g - 1]));
          }
        }
        for (auto g : step.retained) {
          if (degrees[g - 1] >= step.degree) {
            return fail(s, name + "retained generator " + std::to_string(g)
                               + " has top degree");
          }
        }
        if (!(step.vertex == parent.restrict_to(step.retained))) {
          return fail(s, name + "vertex monodromy is not the restriction of "
                                "the parent");
        }
        if (step.edges.size() != step.removed.size()) {
          return fail(s, name + "expected one edge per removed generator");
        }
        for (std::size_t e = 0; e < step.edges.size(); ++e) {
          if (step.edges[e].group != "Z"
              || step.edges[e].generator != step.removed[e]) {
            return fail(s, name + "edge " + std::to_string(e)
                               + " is not a Z edge for a removed generator");
          }
        }
        auto vd = automorphism_degree(step.vertex).degree;
        if (vd + 1 > step.degree) {
          return fail(s, name + "vertex degree " + std::to_string(vd)
                             + " does not drop below " + std::to_string(step.degree));
        }
        parent        = step.vertex;
        parent_rank   = step.vertex.rank();
        parent_degree = vd;
      }
      auto const& leaf = tree.leaf;
      if (leaf.rank != parent_rank || leaf.monodromy.rank() != parent_rank) {
        return fail(std::nullopt, "leaf rank " + std::to_string(leaf.rank)
                                      + " does not match last vertex rank "
                                      + std::to_string(parent_rank));
      }
      auto ld = automorphism_degree(leaf.monodromy).degree;
      if (ld != parent_degree || !(leaf.monodromy == parent)) {
        return fail(std::nullopt, "leaf monodromy is not the last vertex");
      }
      auto expected = ld == 0 ? LeafTag::fixed : LeafTag::linear;
      if (ld > 1 || leaf.tag != expected) {
        return fail(std::nullopt, std::string("leaf tagged ") + to_string(leaf.tag)
                                      + " but its degree is " + std::to_string(ld));
      }
    } catch (std::exception const& e) {
      return fail(std::nullopt, std::string("validation raised: ") + e.what());
    }
    return HierarchyReport{};
  }

}  // namespace fbc
