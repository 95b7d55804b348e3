#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "fbc/chains.hpp"
#include "fbc/exactla.hpp"
#include "fbc/words.hpp"

namespace fbc {

  // Reidemeister-Schreier presentation of a finite-index subgroup. The
  // Schreier transversal is the breadth-first tree from coset 0 with
  // generator order x_1, ..., x_m, t; tree generators are pruned.
  struct SubgroupPresentation {
    std::size_t       generators = 0;
    std::vector<Word> relators;  // words of rank `generators`
    std::size_t       index      = 0;
    // Schreier generator j is (coset, generator) = labels[j], 0-based coset,
    // 1-based generator.
    std::vector<std::pair<coset_type, std::size_t>> labels;
  };

  // Number of generators and relators rewriting would produce, without
  // doing it: (index * m + 1, index * m).
  std::pair<std::size_t, std::size_t> rewritten_shape(
      GroupPresentation const& p,
      CosetTable const&        t);

  SubgroupPresentation rewrite_presentation(GroupPresentation const& p,
                                            CosetTable const&        t);

  // Rows are relators, columns Schreier generators, entries exponent sums.
  IntMatrix abelianized_relation_matrix(SubgroupPresentation const& s);

  struct HomologySummary {
    std::size_t          betti = 0;
    std::vector<Integer> divisors;  // full nonzero Smith diagonal
    Integer              torsion_order{1};
    double               log_torsion = 0.0;

    // Divisors greater than one: the torsion coefficients.
    std::vector<Integer> torsion_coefficients() const;
  };

  // Natural log of a positive integer, accurate for any size.
  double log_integer(Integer const& n);

  // Cokernel of the matrix as a quotient of Z^generators.
  HomologySummary torsion_order(IntMatrix const& m,
                                std::size_t      generators,
                                SnfLimits const& limits = {});

  // H_1 of the mapping torus of phi^n: coker(A^n - I) + Z.
  HomologySummary mapping_torus_h1(Automorphism const& phi, std::size_t n);

  struct GradientLevel {
    std::size_t index = 0;
    // Unset when the level was refused by the matrix size cap.
    std::optional<HomologySummary> homology;
    std::string                    skip_reason;
    double                         gradient = 0.0;
    // torsion_order / index^d, exactly; set when a degree is known.
    std::optional<mpq_class> conjecture_ratio;

    bool skipped() const noexcept {
      return !homology.has_value();
    }
  };

  struct GradientSeries {
    std::optional<std::size_t> degree;
    std::vector<GradientLevel> levels;

    bool complete() const noexcept;
  };

  // Rewrite, abelianise and take the Smith form at every level of the
  // chain. Levels whose relation matrix exceeds the cap are marked
  // skipped. `degree` is the monodromy's growth degree for the conjecture
  // ratio column.
  GradientSeries gradient_series(Automorphism const&        phi,
                                 SubgroupChain const&       chain,
                                 std::optional<std::size_t> degree,
                                 SnfLimits const&           limits = {});

  // The dimension-0 gradient is identically zero: H_0 = Z.
  inline constexpr double degree_zero_gradient = 0.0;

}  // namespace fbc
