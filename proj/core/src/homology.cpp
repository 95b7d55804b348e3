#include "fbc/homology.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fbc/errors.hpp"
#include "fbc/growth.hpp"

namespace fbc {

  namespace {
    constexpr std::size_t not_a_generator = static_cast<std::size_t>(-1);

    // Breadth-first Schreier tree over the positive generators; returns,
    // for each (coset, generator), the subgroup generator number or
    // not_a_generator for tree edges.
    std::vector<std::size_t> schreier_numbering(
        CosetTable const& t,
        std::vector<std::pair<coset_type, std::size_t>>& labels) {
      auto const              gens = t.generators();
      std::vector<char>       seen(t.index(), 0);
      std::vector<std::size_t> number(t.index() * gens, 0);
      std::vector<char>        tree(t.index() * gens, 0);
      std::vector<coset_type>  queue{0};
      seen[0] = 1;
      for (std::size_t k = 0; k < queue.size(); ++k) {
        auto c = queue[k];
        for (std::size_t g = 0; g < gens; ++g) {
          auto d = t.perm(g)[c];
          if (!seen[d]) {
            seen[d]              = 1;
            tree[c * gens + g]   = 1;
            queue.push_back(d);
          }
        }
      }
      if (queue.size() != t.index()) {
        throw InputError("coset table is not transitive");
      }
      labels.clear();
      for (coset_type c = 0; c < t.index(); ++c) {
        for (std::size_t g = 0; g < gens; ++g) {
          if (tree[c * gens + g]) {
            number[c * gens + g] = not_a_generator;
          } else {
            number[c * gens + g] = labels.size();
            labels.emplace_back(c, g + 1);
          }
        }
      }
      return number;
    }
  }  // namespace

  std::pair<std::size_t, std::size_t> rewritten_shape(
      GroupPresentation const& p,
      CosetTable const&        t) {
    auto const n = t.index();
    return {n * p.generators() - (n - 1), n * p.relators.size()};
  }

  SubgroupPresentation rewrite_presentation(GroupPresentation const& p,
                                            CosetTable const&        t) {
    if (t.generators() != p.generators()) {
      throw InputError("coset table and presentation disagree on generators");
    }
    if (!t.satisfies(p)) {
      throw InputError("coset table does not satisfy the relators");
    }
    SubgroupPresentation s;
    s.index         = t.index();
    auto const gens = t.generators();
    auto const number = schreier_numbering(t, s.labels);
    s.generators      = s.labels.size();
    s.relators.reserve(t.index() * p.relators.size());
    for (coset_type c = 0; c < t.index(); ++c) {
      for (auto const& r : p.relators) {
        WordBuilder b(s.generators);
        coset_type  d = c;
        for (auto a : r.letters()) {
          auto g = generator_of(a) - 1;
          if (a > 0) {
            auto j = number[d * gens + g];
            if (j != not_a_generator) {
              b.push(static_cast<letter_type>(j + 1));
            }
            d = t.perm(g)[d];
          } else {
            d      = t.act(d, a);
            auto j = number[d * gens + g];
            if (j != not_a_generator) {
              b.push(-static_cast<letter_type>(j + 1));
            }
          }
        }
        s.relators.push_back(std::move(b).finish());
      }
    }
    return s;
  }

  IntMatrix abelianized_relation_matrix(SubgroupPresentation const& s) {
    IntMatrix m(s.relators.size(), s.generators);
    for (std::size_t i = 0; i < s.relators.size(); ++i) {
      std::vector<std::pair<std::size_t, long>> counts;
      for (auto a : s.relators[i].letters()) {
        counts.emplace_back(generator_of(a) - 1, a > 0 ? 1 : -1);
      }
      std::sort(counts.begin(), counts.end());
      IntMatrix::row_type row;
      for (std::size_t k = 0; k < counts.size();) {
        long        v = 0;
        std::size_t j = counts[k].first;
        while (k < counts.size() && counts[k].first == j) {
          v += counts[k].second;
          ++k;
        }
        if (v != 0) {
          row.push_back({j, Integer(v)});
        }
      }
      m.set_row(i, std::move(row));
    }
    return m;
  }

  std::vector<Integer> HomologySummary::torsion_coefficients() const {
    std::vector<Integer> out;
    for (auto const& d : divisors) {
      if (d > 1) {
        out.push_back(d);
      }
    }
    return out;
  }

  double log_integer(Integer const& n) {
    if (n <= 0) {
      throw InputError("log of a nonpositive integer");
    }
    if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 53) {
      return std::log(n.get_d());
    }
    long   exp = 0;
    double man = mpz_get_d_2exp(&exp, n.get_mpz_t());
    return std::log(man) + static_cast<double>(exp) * std::log(2.0);
  }

  HomologySummary torsion_order(IntMatrix const& m,
                                std::size_t      generators,
                                SnfLimits const& limits) {
    if (m.cols() != generators) {
      throw InputError("matrix has " + std::to_string(m.cols())
                       + " columns but " + std::to_string(generators)
                       + " generators were given");
    }
    auto            snf = smith_normal_form(m, false, limits);
    HomologySummary h;
    h.betti    = generators - snf.rank;
    h.divisors = std::move(snf.divisors);
    for (auto const& d : h.divisors) {
      if (d > 1) {
        h.torsion_order *= d;
      }
    }
    h.log_torsion = log_integer(h.torsion_order);
    return h;
  }

  HomologySummary mapping_torus_h1(Automorphism const& phi, std::size_t n) {
    if (n < 1) {
      throw PreconditionError("mapping_torus_h1 needs n >= 1");
    }
    auto const a     = abelianization_matrix(phi);
    auto const shift = matrix_power(a, n) - IntMatrix::identity(phi.rank());
    auto       h     = torsion_order(shift, phi.rank());
    h.betti += 1;
    return h;
  }

  bool GradientSeries::complete() const noexcept {
    for (auto const& l : levels) {
      if (l.skipped()) {
        return false;
      }
    }
    return true;
  }

  GradientSeries gradient_series(Automorphism const&        phi,
                                 SubgroupChain const&       chain,
                                 std::optional<std::size_t> degree,
                                 SnfLimits const&           limits) {
    if (chain.levels.empty()) {
      throw PreconditionError("gradient_series needs a nonempty chain");
    }
    auto const     p = presentation(phi);
    GradientSeries series;
    series.degree = degree;
    for (auto const& t : chain.levels) {
      GradientLevel level;
      level.index               = t.index();
      auto const [cols, rows] = rewritten_shape(p, t);
      if (rows > limits.max_rows || cols > limits.max_cols) {
        level.skip_reason = "relation matrix " + std::to_string(rows) + " x "
                            + std::to_string(cols) + " exceeds cap "
                            + std::to_string(limits.max_rows) + " x "
                            + std::to_string(limits.max_cols);
        series.levels.push_back(std::move(level));
        continue;
      }
      auto const s = rewrite_presentation(p, t);
      auto const m = abelianized_relation_matrix(s);
      try {
        level.homology = torsion_order(m, s.generators, limits);
      } catch (ResourceError const& e) {
        level.skip_reason = e.what();
        series.levels.push_back(std::move(level));
        continue;
      }
      level.gradient = level.homology->log_torsion
                       / static_cast<double>(t.index());
      if (degree) {
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), t.index(), *degree);
        mpq_class r(level.homology->torsion_order, den);
        r.canonicalize();
        level.conjecture_ratio = r;
      }
      series.levels.push_back(std::move(level));
    }
    return series;
  }

}  // namespace fbc
