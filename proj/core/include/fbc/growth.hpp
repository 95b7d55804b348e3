#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fbc/exactla.hpp"
#include "fbc/words.hpp"

namespace fbc {

  // UPG datum on a rose: x_i -> x_i * rho_i, where rho_i is a reduced word
  // in x_1, ..., x_{i-1}. Generator order is the filtration order.
  class TriangularAutomorphism {
   public:
    TriangularAutomorphism() = default;
    // Throws ValidationError naming the first generator whose suffix uses
    // an index >= its own, InputError on out-of-range letters.
    TriangularAutomorphism(std::size_t rank, std::vector<Word> suffixes);

    static TriangularAutomorphism identity(std::size_t rank);

    std::size_t rank() const noexcept {
      return _rank;
    }
    std::vector<Word> const& suffixes() const noexcept {
      return _suffixes;
    }
    // rho_i, 1-based.
    Word const& suffix(std::size_t i) const {
      return _suffixes.at(i - 1);
    }
    Automorphism const& automorphism() const noexcept {
      return _phi;
    }

    // phi^k is again triangular: x_i -> x_i rho_i phi(rho_i) ...
    // phi^{k-1}(rho_i).
    TriangularAutomorphism power(std::size_t k) const;

    // Restriction to the listed generators (1-based, increasing),
    // re-indexed in order. Throws ValidationError if a kept suffix uses a
    // dropped generator.
    TriangularAutomorphism restrict_to(
        std::span<std::size_t const> kept) const;

    friend bool operator==(TriangularAutomorphism const& a,
                           TriangularAutomorphism const& b) {
      return a._rank == b._rank && a._suffixes == b._suffixes;
    }

   private:
    std::size_t       _rank = 0;
    std::vector<Word> _suffixes;
    Automorphism      _phi;
  };

  // Column i is the exponent-sum vector of phi(x_i).
  IntMatrix abelianization_matrix(Automorphism const& phi);

  // N[i][j] = occurrences of x_j^{+-1} in rho_i (0-based storage).
  IntMatrix occurrence_matrix(TriangularAutomorphism const& phi);

  struct UpgCertificate {
    // Least k >= 1 with (A - I)^k = 0.
    std::size_t nilpotency_index = 1;
  };

  // Confirms strict triangularity and unipotence of the abelianised action.
  UpgCertificate check_upg_triangular(TriangularAutomorphism const& phi);

  inline std::size_t default_split_window(std::size_t rank) {
    return 2 * rank + 4;
  }

  // Generator i is verified iff no free cancellation happens in
  // phi^k(x_i) for 1 <= k <= window, i.e. the lengths match the
  // cancellation-free prediction from the occurrence matrix.
  std::vector<bool> verify_split(TriangularAutomorphism const& phi,
                                 std::size_t                   window);

  struct DegreeReport {
    std::vector<std::size_t> degrees;         // d_i, one per generator
    std::vector<bool>        split_verified;  // per generator
    std::size_t              degree = 0;      // max d_i

    bool exact() const noexcept {
      for (bool b : split_verified) {
        if (!b) {
          return false;
        }
      }
      return true;
    }
  };

  // Degrees read off the occurrence matrix; exact for split-verified
  // generators, upper bounds otherwise.
  DegreeReport edge_growth_degrees(TriangularAutomorphism const& phi,
                                   std::optional<std::size_t> window
                                   = std::nullopt);

  struct EmpiricalDegree {
    std::optional<std::size_t> degree;  // unset when nothing was committed
    bool                       stable = false;
  };

  // Smallest d whose d-th finite difference is eventually constant on the
  // window. The constant run must cover at least two points and half of
  // the d-th difference sequence; it is stable when it covers three.
  EmpiricalDegree empirical_degree(std::span<std::uint64_t const> lengths);

  struct AutomorphismDegree {
    std::size_t degree      = 0;
    bool        upper_bound = false;  // some generator failed splitting
  };

  AutomorphismDegree automorphism_degree(TriangularAutomorphism const& phi);

}  // namespace fbc
