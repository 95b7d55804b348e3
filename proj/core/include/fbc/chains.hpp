#pragma once

#include <cstddef>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fbc/growth.hpp"
#include "fbc/words.hpp"

namespace fbc {

  // <x_1, ..., x_m, t | t x_i t^-1 = phi(x_i)>. Words over the presentation
  // have rank m + 1; letter m + 1 is the stable letter t.
  struct GroupPresentation {
    std::size_t       fiber_rank = 0;
    std::vector<Word> relators;

    std::size_t generators() const noexcept {
      return fiber_rank + 1;
    }
    letter_type stable_letter() const noexcept {
      return static_cast<letter_type>(fiber_rank + 1);
    }
  };

  GroupPresentation presentation(Automorphism const& phi);

  using coset_type = std::uint32_t;

  // Right action of the generators on the cosets H g of a finite-index
  // subgroup H. Cosets are 0-based internally; coset 0 is H itself.
  class CosetTable {
   public:
    CosetTable() = default;
    // perms[g][c] = c . x_{g+1}. Throws InputError unless every row is a
    // permutation of {0, ..., n-1}.
    CosetTable(std::size_t generators,
               std::vector<std::vector<coset_type>> perms);

    static CosetTable trivial(std::size_t generators);

    std::size_t index() const noexcept {
      return _index;
    }
    std::size_t generators() const noexcept {
      return _perms.size();
    }
    std::vector<coset_type> const& perm(std::size_t g) const {
      return _perms.at(g);
    }

    coset_type act(coset_type c, letter_type a) const {
      return a > 0 ? _perms[a - 1][c] : _inverse[-a - 1][c];
    }
    coset_type act(coset_type c, Word const& w) const {
      for (auto a : w.letters()) {
        c = act(c, a);
      }
      return c;
    }

    bool is_transitive() const;
    // Every relator fixes every coset.
    bool satisfies(GroupPresentation const& p) const;

    // Same action renumbered breadth-first from `base` with letter order
    // x_1, x_1^-1, x_2, ...; this is the table of the conjugate subgroup
    // stabilising `base`.
    CosetTable rebased(coset_type base) const;

    friend bool operator==(CosetTable const& a, CosetTable const& b) {
      return a._perms == b._perms;
    }
    friend auto operator<=>(CosetTable const& a, CosetTable const& b) {
      return a._perms <=> b._perms;
    }

   private:
    std::size_t                          _index = 0;
    std::vector<std::vector<coset_type>> _perms;
    std::vector<std::vector<coset_type>> _inverse;
  };

  struct ChainLimits {
    std::size_t max_cosets = std::size_t(1) << 22;
  };

  // Map from the cosets of the finer table onto those of the coarser one,
  // base point to base point, commuting with every generator. Exists iff
  // the finer subgroup is contained in the coarser.
  std::optional<std::vector<coset_type>> find_projection(
      CosetTable const& finer,
      CosetTable const& coarser);

  // Orbit of the diagonal base point in the product action, numbered
  // breadth-first. Throws ResourceError past limits.max_cosets.
  CosetTable intersect_tables(std::span<CosetTable const> tables,
                              ChainLimits const&          limits = {});

  enum class ChainKind { cyclic, mod_p, low_index_intersection };

  char const* to_string(ChainKind kind) noexcept;

  struct SubgroupChain {
    ChainKind               kind = ChainKind::cyclic;
    std::vector<CosetTable> levels;
    // projections[k] maps level k+1 onto level k.
    std::vector<std::vector<coset_type>> projections;
    // Construction parameters: levels for cyclic, primes for mod_p, the
    // index bound for each low-index level.
    std::vector<std::size_t> parameters;
  };

  // Checks strict growth of indices, relator closure, transitivity and that
  // every projection commutes with the generators. Throws ValidationError.
  void verify_chain(SubgroupChain const& chain, GroupPresentation const& p);

  // Level n (1-based) is the kernel of t -> 1 in Z / n!, x_i -> 0.
  SubgroupChain cyclic_chain(Automorphism const& phi,
                             std::size_t         levels,
                             ChainLimits const&  limits = {});

  // The quotient (Z/p)^m x| Z/o_p of the mapping torus, where t acts by
  // the abelianised monodromy reduced mod p and o_p is its order.
  class ModPQuotient {
   public:
    ModPQuotient(Automorphism const& phi, std::uint32_t p);

    std::uint32_t prime() const noexcept {
      return _p;
    }
    std::size_t order_of_action() const noexcept {
      return _order;
    }
    std::size_t size() const noexcept {
      return _size;
    }

    struct Element {
      std::vector<std::uint32_t> v;
      std::size_t                s = 0;
      friend bool operator==(Element const&, Element const&) = default;
    };

    Element identity() const;
    Element multiply(Element const& a, Element const& b) const;
    Element generator(letter_type a) const;
    // Image of a word over the presentation, by the group law.
    Element image(Word const& w) const;
    bool    is_trivial(Word const& w) const;

    // Regular right action of the quotient on itself: the coset table of
    // the kernel.
    CosetTable kernel_table(ChainLimits const& limits = {}) const;

   private:
    std::size_t encode(Element const& e) const;

    std::uint32_t _p;
    std::size_t   _m;
    std::size_t   _order = 1;
    std::size_t   _size  = 1;
    // _powers[s] is A^s mod p, column-major: _powers[s][j * m + i].
    std::vector<std::vector<std::uint32_t>> _powers;
  };

  bool is_prime(std::uint64_t n) noexcept;

  // Level k is the intersection of the kernels for primes[0..k].
  SubgroupChain mod_p_chain(TriangularAutomorphism const&   phi,
                            std::span<std::uint32_t const> primes,
                            ChainLimits const&             limits = {});

  struct LowIndexLimits {
    std::size_t max_index = 12;
    std::size_t max_nodes = 50'000'000;
  };

  // One table per conjugacy class of subgroups of index <= max_index, each
  // the lexicographically least among its base-point standardisations.
  // Sorted by index, then lexicographically. Throws ResourceError when the
  // search exceeds limits.max_nodes.
  std::vector<CosetTable> low_index_subgroups(GroupPresentation const& p,
                                              std::size_t max_index,
                                              LowIndexLimits const& limits
                                              = {});

  // Level k is the intersection of all subgroups of index <= k (every
  // conjugate included), so each level is normal. Bounds that do not
  // enlarge the index produce no level.
  SubgroupChain low_index_chain(Automorphism const& phi,
                                std::size_t         max_index,
                                ChainLimits const&  limits     = {},
                                LowIndexLimits const& li_limits = {});

  struct Ratio {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    friend bool operator==(Ratio const&, Ratio const&) = default;
    friend std::strong_ordering operator<=>(Ratio const& a, Ratio const& b);
    std::string str() const;
  };

  Ratio make_ratio(std::uint64_t num, std::uint64_t den);

  // |{cosets fixed by gamma}| / index, exactly.
  Ratio fixed_point_ratio(Word const& gamma, CosetTable const& table);

  // Nontrivial reduced words of length <= max_length over `generators`
  // generators, ordered by length then by letter order x_1, x_1^-1, x_2...
  std::vector<Word> reduced_ball(std::size_t generators,
                                 std::size_t max_length);
  std::uint64_t     ball_size(std::size_t generators, std::size_t max_length);

  // Deterministic uniform-ish sample of nontrivial reduced words.
  std::vector<Word> sample_reduced_words(std::size_t   generators,
                                         std::size_t   max_length,
                                         std::size_t   count,
                                         std::uint64_t seed);

  enum class FarberStatus { decreasing, obstructed, inconclusive };

  char const* to_string(FarberStatus status) noexcept;

  struct FarberLevel {
    std::size_t index = 0;
    Ratio       max_fx;
    Word        witness;  // first word attaining max_fx
  };

  struct FarberDiagnostic {
    std::vector<FarberLevel> levels;
    std::size_t              words_tested = 0;
    bool                     exhaustive   = true;
    FarberStatus             status       = FarberStatus::inconclusive;
    // For obstructed chains: a word fixing every coset at every level.
    std::optional<Word> witness;
  };

  inline constexpr std::uint64_t farber_exhaustive_cap = 10'000;

  FarberDiagnostic farber_diagnostic(SubgroupChain const& chain,
                                     std::size_t          max_length,
                                     std::size_t          sample,
                                     std::uint64_t        seed = 0);

}  // namespace fbc
