#include <doctest.h>

#include <cmath>

#include "fbc/chains.hpp"
#include "fbc/errors.hpp"
#include "fbc/homology.hpp"
#include "support/oracles.hpp"

using namespace fbc;
using fbc::test::make_triangular;

namespace {
  std::vector<Integer> ints(std::initializer_list<long> v) {
    return std::vector<Integer>(v.begin(), v.end());
  }

  Automorphism linear() {
    return make_triangular(2, {{}, {1}}).automorphism();
  }

  HomologySummary rewrite_h1(Automorphism const& phi, CosetTable const& t) {
    auto p = presentation(phi);
    auto s = rewrite_presentation(p, t);
    return torsion_order(abelianized_relation_matrix(s), s.generators);
  }

  // Torsion of coker(A^n - I) computed with the naive oracle.
  std::vector<Integer> oracle_torsion(Automorphism const& phi, std::size_t n) {
    auto a = abelianization_matrix(phi);
    auto m = matrix_power(a, n) - IntMatrix::identity(phi.rank());
    std::vector<Integer> out;
    for (auto const& d : test::naive_snf_oracle(m).divisors) {
      if (d > 1) {
        out.push_back(d);
      }
    }
    return out;
  }
}  // namespace

TEST_SUITE("homology") {
  TEST_CASE("rewrite_presentation examples") {
    auto p = presentation(Automorphism::identity(1));
    auto s = rewrite_presentation(p, CosetTable::trivial(2));
    CHECK(s.generators == 2);
    CHECK(s.relators.size() == 1);
    CHECK(s.relators[0] == p.relators[0]);

    // Index-2 kernel of t -> Z/2 in Z^2: pruned to 3 generators, 2 relators.
    auto c = cyclic_chain(Automorphism::identity(1), 2);
    auto k = rewrite_presentation(p, c.levels[1]);
    CHECK(k.index == 2);
    CHECK(k.generators == 3);
    CHECK(k.relators.size() == 2);
    auto h = torsion_order(abelianized_relation_matrix(k), k.generators);
    CHECK(h.betti == 2);
    CHECK(h.torsion_order == 1);
    CHECK(rewritten_shape(p, c.levels[1]) == std::pair<std::size_t, std::size_t>{3, 2});

    auto lc = cyclic_chain(linear(), 2);
    auto lh = rewrite_h1(linear(), lc.levels[1]);
    CHECK(lh.betti == 2);
    CHECK(lh.torsion_coefficients() == ints({2}));
  }

  TEST_CASE("abelianized_relation_matrix examples") {
    SubgroupPresentation none{3, {}, 1, {}};
    auto                 m = abelianized_relation_matrix(none);
    CHECK(m.rows() == 0);
    CHECK(m.cols() == 3);
    CHECK(torsion_order(m, 3).betti == 3);

    SubgroupPresentation comm{2, {Word(2, {1, 2, -1, -2})}, 1, {}};
    CHECK(abelianized_relation_matrix(comm).is_zero());

    SubgroupPresentation pw{2, {Word(2, {1, 1, 2, 2, 2})}, 1, {}};
    CHECK(abelianized_relation_matrix(pw) == IntMatrix{{2, 3}});
  }

  TEST_CASE("torsion_order examples") {
    auto z = torsion_order(IntMatrix(2, 3), 3);
    CHECK(z.betti == 3);
    CHECK(z.torsion_order == 1);
    CHECK(z.log_torsion == 0.0);

    auto a = torsion_order(IntMatrix{{0, 2}, {0, 0}}, 2);
    CHECK(a.divisors == ints({2}));
    CHECK(a.betti == 1);
    CHECK(a.torsion_order == 2);

    auto b = torsion_order(IntMatrix{{2, 0}, {0, 3}}, 2);
    CHECK(b.divisors == ints({1, 6}));
    CHECK(b.torsion_order == 6);
    CHECK(b.betti == 0);
    CHECK(b.log_torsion == doctest::Approx(std::log(6.0)));
    CHECK_THROWS_AS(torsion_order(IntMatrix(2, 2), 3), InputError);
  }

  TEST_CASE("log_integer handles huge values") {
    Integer big;
    mpz_ui_pow_ui(big.get_mpz_t(), 10, 400);
    CHECK(log_integer(big) == doctest::Approx(400 * std::log(10.0)));
    CHECK(log_integer(Integer(1)) == 0.0);
  }

  TEST_CASE("mapping_torus_h1 examples") {
    for (std::size_t n : {1, 3, 7}) {
      auto h = mapping_torus_h1(Automorphism::identity(3), n);
      CHECK(h.betti == 4);
      CHECK(h.torsion_order == 1);
    }
    auto h1 = mapping_torus_h1(linear(), 1);
    CHECK(h1.betti == 2);
    CHECK(h1.torsion_order == 1);
    auto h5 = mapping_torus_h1(linear(), 5);
    CHECK(h5.betti == 2);
    CHECK(h5.torsion_order == 5);
    CHECK_THROWS_AS(mapping_torus_h1(linear(), 0), PreconditionError);
  }

  TEST_CASE("gradient_series examples") {
    auto z2 = Automorphism::identity(1);
    auto s  = gradient_series(z2, cyclic_chain(z2, 3), 0);
    REQUIRE(s.levels.size() == 3);
    CHECK(s.complete());
    for (auto const& l : s.levels) {
      CHECK(l.homology->torsion_order == 1);
      CHECK(l.gradient == 0.0);
    }

    auto g = gradient_series(linear(), cyclic_chain(linear(), 5), 1);
    std::vector<long> expect{1, 2, 6, 24, 120};
    REQUIRE(g.levels.size() == 5);
    for (std::size_t k = 0; k < 5; ++k) {
      CHECK(g.levels[k].index == static_cast<std::size_t>(expect[k]));
      CHECK(g.levels[k].homology->torsion_order == expect[k]);
      CHECK(*g.levels[k].conjecture_ratio == 1);
    }
    for (std::size_t k = 2; k < 5; ++k) {
      CHECK(g.levels[k].gradient < g.levels[k - 1].gradient);
    }
    CHECK(g.levels[0].gradient == 0.0);
    CHECK(degree_zero_gradient == 0.0);
  }

  TEST_CASE("gradient_series marks capped levels as skipped") {
    SnfLimits small;
    small.max_rows = 10;
    auto g         = gradient_series(linear(), cyclic_chain(linear(), 4), 1, small);
    CHECK_FALSE(g.complete());
    CHECK_FALSE(g.levels[1].skipped());
    CHECK(g.levels[3].skipped());
    CHECK_FALSE(g.levels[3].skip_reason.empty());
    CHECK_FALSE(g.levels[3].conjecture_ratio);
  }

  TEST_CASE("oracle equivalence on cyclic chains") {
    for (auto const& phi :
         {linear(), make_triangular(3, {{}, {1}, {2}}).automorphism(),
          make_triangular(3, {{}, {-1, -1}, {1, 2, -1}}).automorphism()}) {
      auto c = cyclic_chain(phi, 4);
      auto p = presentation(phi);
      for (auto const& t : c.levels) {
        auto s = rewrite_presentation(p, t);
        CHECK(s.generators == t.index() * phi.rank() + 1);
        CHECK(s.relators.size() == t.index() * phi.rank());
        auto mine = torsion_order(abelianized_relation_matrix(s), s.generators);
        auto ref  = mapping_torus_h1(phi, t.index());
        CHECK(mine.betti == ref.betti);
        CHECK(mine.torsion_coefficients() == ref.torsion_coefficients());
        CHECK(ref.torsion_coefficients() == oracle_torsion(phi, t.index()));
      }
    }
  }

  TEST_CASE("identity monodromy has torsion-free H1 on every chain") {
    auto phi = TriangularAutomorphism::identity(2);
    std::vector<std::uint32_t> ps{2, 3};
    for (auto const& c : {cyclic_chain(phi.automorphism(), 3), mod_p_chain(phi, ps),
                          low_index_chain(phi.automorphism(), 2)}) {
      auto s = gradient_series(phi.automorphism(), c, 0);
      for (auto const& l : s.levels) {
        REQUIRE_FALSE(l.skipped());
        CHECK(l.homology->torsion_order == 1);
      }
    }
  }

  TEST_CASE("Euler characteristic is preserved by rewriting") {
    auto phi = make_triangular(3, {{}, {1}, {2}}).automorphism();
    auto p   = presentation(phi);
    auto c   = low_index_chain(phi, 3);
    for (auto const& t : c.levels) {
      auto s = rewrite_presentation(p, t);
      // chi = 1 - generators + relators, zero for the group and its subgroups.
      CHECK(1 + s.relators.size() == s.generators);
      CHECK(rewritten_shape(p, t)
            == std::pair<std::size_t, std::size_t>{s.generators, s.relators.size()});
    }
  }
}
