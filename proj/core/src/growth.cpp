#include "fbc/growth.hpp"

#include <algorithm>
#include <string>

#include "fbc/errors.hpp"

namespace fbc {

  namespace {
    Word generator_word(std::size_t rank, std::size_t i) {
      return Word(rank, {static_cast<letter_type>(i)});
    }

    Word checked_suffix(std::size_t rank, std::size_t i, Word const& rho) {
      if (rho.rank() != rank) {
        throw InputError("suffix of generator " + std::to_string(i)
                         + " has rank " + std::to_string(rho.rank())
                         + ", expected " + std::to_string(rank));
      }
      for (auto a : rho.letters()) {
        if (generator_of(a) >= i) {
          throw ValidationError("suffix of generator " + std::to_string(i)
                                    + " uses x_" + std::to_string(generator_of(a))
                                    + "; only x_1..x_" + std::to_string(i - 1)
                                    + " are allowed",
                                i);
        }
      }
      return rho;
    }
  }  // namespace

  TriangularAutomorphism::TriangularAutomorphism(std::size_t       rank,
                                                 std::vector<Word> suffixes)
      : _rank(rank) {
    if (suffixes.size() != rank) {
      throw InputError("triangular automorphism of rank "
                       + std::to_string(rank) + " needs "
                       + std::to_string(rank) + " suffixes, got "
                       + std::to_string(suffixes.size()));
    }
    std::vector<Word> images;
    images.reserve(rank);
    for (std::size_t i = 1; i <= rank; ++i) {
      _suffixes.push_back(checked_suffix(rank, i, suffixes[i - 1]));
      images.push_back(generator_word(rank, i) * _suffixes.back());
    }
    _phi = Automorphism(rank, std::move(images));
  }

  TriangularAutomorphism TriangularAutomorphism::identity(std::size_t rank) {
    return TriangularAutomorphism(rank, std::vector<Word>(rank, Word(rank)));
  }

  TriangularAutomorphism TriangularAutomorphism::power(std::size_t k) const {
    auto              phik = fbc::power(_phi, k);
    std::vector<Word> suffixes;
    suffixes.reserve(_rank);
    for (std::size_t i = 1; i <= _rank; ++i) {
      suffixes.push_back(generator_word(_rank, i).inverse() * phik.image(i));
    }
    return TriangularAutomorphism(_rank, std::move(suffixes));
  }

  TriangularAutomorphism TriangularAutomorphism::restrict_to(
      std::span<std::size_t const> kept) const {
    std::vector<std::size_t> new_index(_rank + 1, 0);
    for (std::size_t k = 0; k < kept.size(); ++k) {
      if (kept[k] == 0 || kept[k] > _rank
          || (k > 0 && kept[k] <= kept[k - 1])) {
        throw InputError("restrict_to needs increasing in-range generators");
      }
      new_index[kept[k]] = k + 1;
    }
    std::size_t const r = kept.size();
    std::vector<Word> suffixes;
    suffixes.reserve(r);
    for (auto g : kept) {
      std::vector<letter_type> letters;
      for (auto a : suffix(g).letters()) {
        auto j = new_index[generator_of(a)];
        if (j == 0) {
          throw ValidationError("suffix of generator " + std::to_string(g)
                                    + " uses dropped generator x_"
                                    + std::to_string(generator_of(a)),
                                g);
        }
        letters.push_back(a > 0 ? static_cast<letter_type>(j)
                                : -static_cast<letter_type>(j));
      }
      suffixes.emplace_back(r, letters);
    }
    return TriangularAutomorphism(r, std::move(suffixes));
  }

  IntMatrix abelianization_matrix(Automorphism const& phi) {
    IntMatrix a(phi.rank(), phi.rank());
    for (std::size_t i = 1; i <= phi.rank(); ++i) {
      for (auto x : phi.image(i).letters()) {
        a.add_to(generator_of(x) - 1, i - 1, Integer(x > 0 ? 1 : -1));
      }
    }
    return a;
  }

  IntMatrix occurrence_matrix(TriangularAutomorphism const& phi) {
    IntMatrix n(phi.rank(), phi.rank());
    for (std::size_t i = 1; i <= phi.rank(); ++i) {
      for (auto x : phi.suffix(i).letters()) {
        n.add_to(i - 1, generator_of(x) - 1, Integer(1));
      }
    }
    return n;
  }

  UpgCertificate check_upg_triangular(TriangularAutomorphism const& phi) {
    // The constructor already enforces triangularity; re-check so that the
    // certificate never depends on how the value was produced.
    for (std::size_t i = 1; i <= phi.rank(); ++i) {
      checked_suffix(phi.rank(), i, phi.suffix(i));
    }
    auto const m     = phi.rank();
    auto const shift = abelianization_matrix(phi.automorphism())
                       - IntMatrix::identity(m);
    IntMatrix p = shift;
    for (std::size_t k = 1; k <= std::max<std::size_t>(m, 1); ++k) {
      if (p.is_zero()) {
        return UpgCertificate{k};
      }
      p = p * shift;
    }
    throw ValidationError("abelianised action is not unipotent");
  }

  std::vector<bool> verify_split(TriangularAutomorphism const& phi,
                                 std::size_t                   window) {
    if (window < 2) {
      throw PreconditionError("verify_split needs window >= 2");
    }
    constexpr std::size_t letter_cap = std::size_t(1) << 26;

    auto const         m = phi.rank();
    auto const         n = occurrence_matrix(phi);
    std::vector<Integer> predicted(m, Integer(1));
    std::vector<Word>    current;
    current.reserve(m);
    for (std::size_t i = 1; i <= m; ++i) {
      current.push_back(generator_word(m, i));
    }
    std::vector<bool> verified(m, true);
    for (std::size_t k = 1; k <= window; ++k) {
      std::vector<Integer> next = predicted;
      for (std::size_t i = 0; i < m; ++i) {
        for (auto const& e : n.row(i)) {
          next[i] += e.value * predicted[e.col];
        }
      }
      predicted = std::move(next);
      for (std::size_t i = 0; i < m; ++i) {
        if (!verified[i]) {
          continue;
        }
        if (cmp(predicted[i], letter_cap) > 0) {
          throw ResourceError("verify_split: predicted length of phi^"
                              + std::to_string(k) + "(x_"
                              + std::to_string(i + 1) + ") exceeds cap");
        }
        current[i] = apply(phi.automorphism(), current[i]);
        if (cmp(predicted[i], current[i].length()) != 0) {
          verified[i] = false;
        }
      }
    }
    return verified;
  }

  DegreeReport edge_growth_degrees(TriangularAutomorphism const& phi,
                                   std::optional<std::size_t>    window) {
    check_upg_triangular(phi);
    DegreeReport report;
    report.degrees = nilpotent_row_degrees(occurrence_matrix(phi));
    report.split_verified
        = verify_split(phi, window.value_or(default_split_window(phi.rank())));
    report.degree = report.degrees.empty()
                        ? 0
                        : *std::max_element(report.degrees.begin(),
                                            report.degrees.end());
    return report;
  }

  EmpiricalDegree empirical_degree(std::span<std::uint64_t const> lengths) {
    std::vector<Integer> diff;
    diff.reserve(lengths.size());
    for (auto x : lengths) {
      diff.emplace_back(static_cast<unsigned long>(x));
    }
    for (std::size_t d = 0; diff.size() >= 2; ++d) {
      std::size_t run = 1;
      while (run < diff.size()
             && diff[diff.size() - 1 - run] == diff.back()) {
        ++run;
      }
      std::size_t const need = std::max<std::size_t>(2, (diff.size() + 1) / 2);
      if (run >= need) {
        return EmpiricalDegree{d, run >= 3};
      }
      for (std::size_t k = 0; k + 1 < diff.size(); ++k) {
        diff[k] = diff[k + 1] - diff[k];
      }
      diff.pop_back();
    }
    return EmpiricalDegree{std::nullopt, false};
  }

  AutomorphismDegree automorphism_degree(TriangularAutomorphism const& phi) {
    auto report = edge_growth_degrees(phi);
    return AutomorphismDegree{report.degree, !report.exact()};
  }

}  // namespace fbc
