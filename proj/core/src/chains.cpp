#include "fbc/chains.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>
#include <string>
#include <unordered_map>

#include "fbc/errors.hpp"

namespace fbc {

  GroupPresentation presentation(Automorphism const& phi) {
    auto const        m = phi.rank();
    GroupPresentation p;
    p.fiber_rank = m;
    auto const t = p.stable_letter();
    for (std::size_t i = 1; i <= m; ++i) {
      WordBuilder b(m + 1);
      b.push(t);
      b.push(static_cast<letter_type>(i));
      b.push(-t);
      auto const& img = phi.image(i).letters();
      for (auto it = img.rbegin(); it != img.rend(); ++it) {
        b.push(-*it);
      }
      p.relators.push_back(std::move(b).finish());
    }
    return p;
  }

  ////////////////////////////////////////////////////////////////////////
  // CosetTable
  ////////////////////////////////////////////////////////////////////////

  CosetTable::CosetTable(std::size_t                          generators,
                         std::vector<std::vector<coset_type>> perms)
      : _perms(std::move(perms)) {
    if (_perms.size() != generators || generators == 0) {
      throw InputError("coset table needs one permutation per generator");
    }
    _index = _perms[0].size();
    if (_index == 0) {
      throw InputError("coset table needs at least one coset");
    }
    _inverse.assign(generators, std::vector<coset_type>(_index));
    for (std::size_t g = 0; g < generators; ++g) {
      if (_perms[g].size() != _index) {
        throw InputError("coset table rows have different lengths");
      }
      std::vector<char> seen(_index, 0);
      for (std::size_t c = 0; c < _index; ++c) {
        auto d = _perms[g][c];
        if (d >= _index || seen[d]) {
          throw InputError("row " + std::to_string(g + 1)
                           + " of the coset table is not a permutation");
        }
        seen[d]         = 1;
        _inverse[g][d]  = static_cast<coset_type>(c);
      }
    }
  }

  CosetTable CosetTable::trivial(std::size_t generators) {
    return CosetTable(generators,
                      std::vector<std::vector<coset_type>>(
                          generators, std::vector<coset_type>{0}));
  }

  bool CosetTable::is_transitive() const {
    std::vector<char>       seen(_index, 0);
    std::vector<coset_type> stack{0};
    seen[0]           = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      auto c = stack.back();
      stack.pop_back();
      for (auto const& p : _perms) {
        if (!seen[p[c]]) {
          seen[p[c]] = 1;
          ++count;
          stack.push_back(p[c]);
        }
      }
    }
    return count == _index;
  }

  bool CosetTable::satisfies(GroupPresentation const& p) const {
    if (p.generators() != generators()) {
      return false;
    }
    for (auto const& r : p.relators) {
      for (coset_type c = 0; c < _index; ++c) {
        if (act(c, r) != c) {
          return false;
        }
      }
    }
    return true;
  }

  CosetTable CosetTable::rebased(coset_type base) const {
    if (base >= _index) {
      throw InputError("rebased: base coset out of range");
    }
    constexpr coset_type    unset = static_cast<coset_type>(-1);
    std::vector<coset_type> label(_index, unset);
    std::vector<coset_type> order;
    order.reserve(_index);
    label[base] = 0;
    order.push_back(base);
    for (std::size_t k = 0; k < order.size(); ++k) {
      auto c = order[k];
      for (std::size_t g = 0; g < generators(); ++g) {
        for (auto d : {_perms[g][c], _inverse[g][c]}) {
          if (label[d] == unset) {
            label[d] = static_cast<coset_type>(order.size());
            order.push_back(d);
          }
        }
      }
    }
    if (order.size() != _index) {
      throw InputError("rebased: coset action is not transitive");
    }
    std::vector<std::vector<coset_type>> perms(
        generators(), std::vector<coset_type>(_index));
    for (std::size_t g = 0; g < generators(); ++g) {
      for (coset_type c = 0; c < _index; ++c) {
        perms[g][label[c]] = label[_perms[g][c]];
      }
    }
    return CosetTable(generators(), std::move(perms));
  }

  std::optional<std::vector<coset_type>> find_projection(
      CosetTable const& finer,
      CosetTable const& coarser) {
    if (finer.generators() != coarser.generators()) {
      return std::nullopt;
    }
    constexpr coset_type    unset = static_cast<coset_type>(-1);
    std::vector<coset_type> map(finer.index(), unset);
    std::vector<coset_type> queue{0};
    map[0]            = 0;
    auto const gens   = static_cast<letter_type>(finer.generators());
    for (std::size_t k = 0; k < queue.size(); ++k) {
      auto c = queue[k];
      for (letter_type g = 1; g <= gens; ++g) {
        for (letter_type a : {g, static_cast<letter_type>(-g)}) {
          auto d      = finer.act(c, a);
          auto expect = coarser.act(map[c], a);
          if (map[d] == unset) {
            map[d] = expect;
            queue.push_back(d);
          } else if (map[d] != expect) {
            return std::nullopt;
          }
        }
      }
    }
    if (queue.size() != finer.index()) {
      return std::nullopt;
    }
    return map;
  }

  namespace {
    struct TupleHash {
      std::size_t operator()(std::vector<coset_type> const& v) const noexcept {
        std::uint64_t h = 1469598103934665603ULL;
        for (auto x : v) {
          h ^= x;
          h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
      }
    };
  }  // namespace

  CosetTable intersect_tables(std::span<CosetTable const> tables,
                              ChainLimits const&          limits) {
    if (tables.empty()) {
      throw InputError("intersect_tables needs at least one table");
    }
    if (tables.size() == 1) {
      return tables[0];
    }
    auto const gens = tables[0].generators();
    for (auto const& t : tables) {
      if (t.generators() != gens) {
        throw InputError("intersect_tables: generator counts differ");
      }
    }
    std::unordered_map<std::vector<coset_type>, coset_type, TupleHash> id;
    std::vector<std::vector<coset_type>> states;
    std::vector<std::vector<coset_type>> perms(gens);
    states.emplace_back(tables.size(), 0);
    id.emplace(states[0], 0);
    std::vector<coset_type> next(tables.size());
    for (std::size_t k = 0; k < states.size(); ++k) {
      for (std::size_t g = 0; g < gens; ++g) {
        for (std::size_t j = 0; j < tables.size(); ++j) {
          next[j] = tables[j].perm(g)[states[k][j]];
        }
        auto [it, inserted]
            = id.emplace(next, static_cast<coset_type>(states.size()));
        if (inserted) {
          if (states.size() >= limits.max_cosets) {
            throw ResourceError("intersection exceeds "
                                + std::to_string(limits.max_cosets)
                                + " cosets");
          }
          states.push_back(next);
        }
        perms[g].push_back(it->second);
      }
    }
    return CosetTable(gens, std::move(perms));
  }

  char const* to_string(ChainKind kind) noexcept {
    switch (kind) {
      case ChainKind::cyclic:
        return "cyclic";
      case ChainKind::mod_p:
        return "mod_p";
      case ChainKind::low_index_intersection:
        return "low_index_intersection";
    }
    return "unknown";
  }

  void verify_chain(SubgroupChain const& chain, GroupPresentation const& p) {
    if (chain.levels.empty()) {
      throw ValidationError("chain has no levels");
    }
    if (chain.projections.size() + 1 != chain.levels.size()) {
      throw ValidationError("chain needs one projection per adjacent pair");
    }
    for (std::size_t k = 0; k < chain.levels.size(); ++k) {
      auto const& t    = chain.levels[k];
      auto        name = "level " + std::to_string(k + 1);
      if (!t.satisfies(p)) {
        throw ValidationError(name + " does not satisfy the relators");
      }
      if (!t.is_transitive()) {
        throw ValidationError(name + " is not transitive");
      }
      if (k == 0) {
        continue;
      }
      auto const& coarse = chain.levels[k - 1];
      if (t.index() <= coarse.index()) {
        throw ValidationError(name + " does not increase the index");
      }
      auto const& proj = chain.projections[k - 1];
      if (proj.size() != t.index()) {
        throw ValidationError(name + " projection has the wrong size");
      }
      for (std::size_t g = 0; g < t.generators(); ++g) {
        for (coset_type c = 0; c < t.index(); ++c) {
          if (proj[t.perm(g)[c]] != coarse.perm(g)[proj[c]]) {
            throw ValidationError(name + " projection does not commute with "
                                  "generator " + std::to_string(g + 1));
          }
        }
      }
    }
  }

  namespace {
    void link_levels(SubgroupChain& chain) {
      chain.projections.clear();
      for (std::size_t k = 1; k < chain.levels.size(); ++k) {
        auto proj = find_projection(chain.levels[k], chain.levels[k - 1]);
        if (!proj) {
          throw ValidationError("level " + std::to_string(k + 1)
                                + " is not contained in level "
                                + std::to_string(k));
        }
        chain.projections.push_back(std::move(*proj));
      }
    }
  }  // namespace

  SubgroupChain cyclic_chain(Automorphism const& phi,
                             std::size_t         levels,
                             ChainLimits const&  limits) {
    if (levels < 1) {
      throw PreconditionError("cyclic_chain needs at least one level");
    }
    SubgroupChain chain;
    chain.kind = ChainKind::cyclic;
    chain.parameters.push_back(levels);
    auto const  gens  = phi.rank() + 1;
    std::size_t index = 1;
    for (std::size_t n = 1; n <= levels; ++n) {
      index *= n;
      if (index > limits.max_cosets) {
        throw ResourceError("cyclic_chain level " + std::to_string(n)
                            + " has index " + std::to_string(index)
                            + ", above the coset cap");
      }
      std::vector<std::vector<coset_type>> perms(
          gens, std::vector<coset_type>(index));
      for (std::size_t g = 0; g + 1 < gens; ++g) {
        std::iota(perms[g].begin(), perms[g].end(), coset_type(0));
      }
      for (std::size_t c = 0; c < index; ++c) {
        perms[gens - 1][c] = static_cast<coset_type>((c + 1) % index);
      }
      chain.levels.emplace_back(gens, std::move(perms));
    }
    link_levels(chain);
    return chain;
  }

  ////////////////////////////////////////////////////////////////////////
  // Mod-p quotients
  ////////////////////////////////////////////////////////////////////////

  bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) {
      return false;
    }
    for (std::uint64_t d = 2; d * d <= n; ++d) {
      if (n % d == 0) {
        return false;
      }
    }
    return true;
  }

  ModPQuotient::ModPQuotient(Automorphism const& phi, std::uint32_t p)
      : _p(p), _m(phi.rank()) {
    if (!is_prime(p)) {
      throw InputError(std::to_string(p) + " is not prime");
    }
    auto const               a = abelianization_matrix(phi);
    std::vector<std::uint32_t> base(_m * _m, 0);
    for (std::size_t i = 0; i < _m; ++i) {
      for (auto const& e : a.row(i)) {
        mpz_class r;
        mpz_fdiv_r_ui(r.get_mpz_t(), e.value.get_mpz_t(), p);
        base[e.col * _m + i] = static_cast<std::uint32_t>(r.get_ui());
      }
    }
    std::vector<std::uint32_t> id(_m * _m, 0);
    for (std::size_t i = 0; i < _m; ++i) {
      id[i * _m + i] = 1 % p;
    }
    _powers.push_back(id);
    constexpr std::size_t order_cap = 1U << 20;
    while (true) {
      auto const&                prev = _powers.back();
      std::vector<std::uint32_t> next(_m * _m, 0);
      for (std::size_t j = 0; j < _m; ++j) {
        for (std::size_t i = 0; i < _m; ++i) {
          std::uint64_t s = 0;
          for (std::size_t k = 0; k < _m; ++k) {
            s += std::uint64_t(base[k * _m + i]) * prev[j * _m + k];
          }
          next[j * _m + i] = static_cast<std::uint32_t>(s % p);
        }
      }
      if (next == id) {
        break;
      }
      if (_powers.size() >= order_cap) {
        throw ResourceError("order of the action mod " + std::to_string(p)
                            + " exceeds cap");
      }
      _powers.push_back(std::move(next));
    }
    _order = _powers.size();
    _size  = _order;
    for (std::size_t i = 0; i < _m; ++i) {
      if (_size > (std::size_t(1) << 40) / p) {
        throw ResourceError("mod-p quotient is too large");
      }
      _size *= p;
    }
  }

  ModPQuotient::Element ModPQuotient::identity() const {
    return Element{std::vector<std::uint32_t>(_m, 0), 0};
  }

  ModPQuotient::Element ModPQuotient::multiply(Element const& a,
                                               Element const& b) const {
    Element     r{a.v, (a.s + b.s) % _order};
    auto const& as = _powers[a.s];
    for (std::size_t j = 0; j < _m; ++j) {
      if (b.v[j] == 0) {
        continue;
      }
      for (std::size_t i = 0; i < _m; ++i) {
        r.v[i] = static_cast<std::uint32_t>(
            (r.v[i] + std::uint64_t(as[j * _m + i]) * b.v[j]) % _p);
      }
    }
    return r;
  }

  ModPQuotient::Element ModPQuotient::generator(letter_type a) const {
    auto e = identity();
    auto g = generator_of(a);
    if (g == _m + 1) {
      e.s = a > 0 ? 1 % _order : (_order - 1) % _order;
    } else {
      e.v[g - 1] = a > 0 ? 1 % _p : _p - 1;
    }
    return e;
  }

  ModPQuotient::Element ModPQuotient::image(Word const& w) const {
    auto e = identity();
    for (auto a : w.letters()) {
      e = multiply(e, generator(a));
    }
    return e;
  }

  bool ModPQuotient::is_trivial(Word const& w) const {
    return image(w) == identity();
  }

  std::size_t ModPQuotient::encode(Element const& e) const {
    std::size_t x = e.s;
    for (std::size_t i = _m; i-- > 0;) {
      x = x * _p + e.v[i];
    }
    return x;
  }

  CosetTable ModPQuotient::kernel_table(ChainLimits const& limits) const {
    if (_size > limits.max_cosets) {
      throw ResourceError("mod-" + std::to_string(_p) + " quotient has "
                          + std::to_string(_size)
                          + " elements, above the coset cap");
    }
    auto const gens = _m + 1;
    std::vector<std::vector<coset_type>> perms(
        gens, std::vector<coset_type>(_size));
    std::vector<Element> gen_elems;
    for (std::size_t g = 1; g <= gens; ++g) {
      gen_elems.push_back(generator(static_cast<letter_type>(g)));
    }
    Element e = identity();
    for (std::size_t s = 0; s < _order; ++s) {
      e.s = s;
      std::fill(e.v.begin(), e.v.end(), 0);
      std::size_t const block = _size / _order;
      for (std::size_t k = 0; k < block; ++k) {
        auto const here = encode(e);
        for (std::size_t g = 0; g < gens; ++g) {
          perms[g][here] = static_cast<coset_type>(encode(multiply(e, gen_elems[g])));
        }
        for (std::size_t i = 0; i < _m; ++i) {
          if (++e.v[i] < _p) {
            break;
          }
          e.v[i] = 0;
        }
      }
    }
    return CosetTable(gens, std::move(perms));
  }

  SubgroupChain mod_p_chain(TriangularAutomorphism const&  phi,
                            std::span<std::uint32_t const> primes,
                            ChainLimits const&             limits) {
    check_upg_triangular(phi);
    if (primes.empty()) {
      throw PreconditionError("mod_p_chain needs at least one prime");
    }
    for (std::size_t k = 0; k < primes.size(); ++k) {
      if (!is_prime(primes[k])) {
        throw InputError(std::to_string(primes[k]) + " is not prime");
      }
      for (std::size_t j = 0; j < k; ++j) {
        if (primes[j] == primes[k]) {
          throw InputError("prime " + std::to_string(primes[k])
                           + " listed twice");
        }
      }
    }
    SubgroupChain chain;
    chain.kind = ChainKind::mod_p;
    for (auto p : primes) {
      chain.parameters.push_back(p);
      ModPQuotient q(phi.automorphism(), p);
      auto         kernel = q.kernel_table(limits);
      if (chain.levels.empty()) {
        chain.levels.push_back(std::move(kernel));
      } else {
        CosetTable pair[] = {chain.levels.back(), std::move(kernel)};
        chain.levels.push_back(intersect_tables(pair, limits));
      }
    }
    link_levels(chain);
    return chain;
  }

  SubgroupChain low_index_chain(Automorphism const&   phi,
                                std::size_t           max_index,
                                ChainLimits const&    limits,
                                LowIndexLimits const& li_limits) {
    if (max_index < 1) {
      throw PreconditionError("low_index_chain needs max_index >= 1");
    }
    auto const p    = presentation(phi);
    auto const subs = low_index_subgroups(p, max_index, li_limits);
    SubgroupChain chain;
    chain.kind = ChainKind::low_index_intersection;
    std::vector<CosetTable> conjugates;
    for (std::size_t k = 1; k <= max_index; ++k) {
      for (auto const& t : subs) {
        if (t.index() != k) {
          continue;
        }
        for (coset_type b = 0; b < t.index(); ++b) {
          auto c = t.rebased(b);
          if (std::find(conjugates.begin(), conjugates.end(), c)
              == conjugates.end()) {
            conjugates.push_back(std::move(c));
          }
        }
      }
      if (conjugates.empty()) {
        continue;
      }
      auto level = intersect_tables(conjugates, limits);
      if (!chain.levels.empty()
          && level.index() <= chain.levels.back().index()) {
        continue;
      }
      chain.parameters.push_back(k);
      chain.levels.push_back(std::move(level));
    }
    link_levels(chain);
    return chain;
  }

  ////////////////////////////////////////////////////////////////////////
  // Fixed-point ratios and the Farber diagnostic
  ////////////////////////////////////////////////////////////////////////

  Ratio make_ratio(std::uint64_t num, std::uint64_t den) {
    if (den == 0) {
      throw InputError("ratio with zero denominator");
    }
    auto g = std::gcd(num, den);
    if (g == 0) {
      g = 1;
    }
    return Ratio{num / g, den / g};
  }

  std::strong_ordering operator<=>(Ratio const& a, Ratio const& b) {
    __extension__ using wide = unsigned __int128;
    return wide(a.num) * b.den <=> wide(b.num) * a.den;
  }

  std::string Ratio::str() const {
    if (den == 1) {
      return std::to_string(num);
    }
    return std::to_string(num) + "/" + std::to_string(den);
  }

  Ratio fixed_point_ratio(Word const& gamma, CosetTable const& table) {
    if (gamma.rank() != table.generators()) {
      throw InputError("word rank does not match the table's generators");
    }
    std::uint64_t fixed = 0;
    for (coset_type c = 0; c < table.index(); ++c) {
      if (table.act(c, gamma) == c) {
        ++fixed;
      }
    }
    return make_ratio(fixed, table.index());
  }

  namespace {
    std::vector<letter_type> letter_order(std::size_t generators) {
      std::vector<letter_type> out;
      for (std::size_t g = 1; g <= generators; ++g) {
        out.push_back(static_cast<letter_type>(g));
        out.push_back(-static_cast<letter_type>(g));
      }
      return out;
    }

    void extend(std::vector<letter_type>&       prefix,
                std::size_t                     target,
                std::vector<letter_type> const& letters,
                std::size_t                     rank,
                std::vector<Word>&              out) {
      if (prefix.size() == target) {
        out.emplace_back(rank, prefix);
        return;
      }
      for (auto a : letters) {
        if (!prefix.empty() && prefix.back() == -a) {
          continue;
        }
        prefix.push_back(a);
        extend(prefix, target, letters, rank, out);
        prefix.pop_back();
      }
    }
  }  // namespace

  std::uint64_t ball_size(std::size_t generators, std::size_t max_length) {
    std::uint64_t total = 0;
    std::uint64_t layer = 2 * generators;
    for (std::size_t k = 1; k <= max_length; ++k) {
      total += layer;
      if (total > (std::uint64_t(1) << 62)) {
        return total;
      }
      layer *= 2 * generators - 1;
    }
    return total;
  }

  std::vector<Word> reduced_ball(std::size_t generators,
                                 std::size_t max_length) {
    auto const               letters = letter_order(generators);
    std::vector<Word>        out;
    std::vector<letter_type> prefix;
    for (std::size_t k = 1; k <= max_length; ++k) {
      extend(prefix, k, letters, generators, out);
    }
    return out;
  }

  std::vector<Word> sample_reduced_words(std::size_t   generators,
                                         std::size_t   max_length,
                                         std::size_t   count,
                                         std::uint64_t seed) {
    if (max_length < 1 || generators < 1) {
      throw PreconditionError("sampling needs max_length >= 1");
    }
    // Plain modular reduction of mt19937_64 output so that samples are
    // identical across standard library implementations.
    std::mt19937_64          rng(seed);
    auto const               letters = letter_order(generators);
    std::vector<Word>        out;
    std::vector<letter_type> w;
    out.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
      auto len = 1 + static_cast<std::size_t>(rng() % max_length);
      w.clear();
      while (w.size() < len) {
        auto a = letters[rng() % letters.size()];
        if (!w.empty() && w.back() == -a) {
          continue;
        }
        w.push_back(a);
      }
      out.emplace_back(generators, w);
    }
    return out;
  }

  char const* to_string(FarberStatus status) noexcept {
    switch (status) {
      case FarberStatus::decreasing:
        return "fx-decreasing to 0 on window";
      case FarberStatus::obstructed:
        return "obstructed";
      case FarberStatus::inconclusive:
        return "inconclusive";
    }
    return "unknown";
  }

  FarberDiagnostic farber_diagnostic(SubgroupChain const& chain,
                                     std::size_t          max_length,
                                     std::size_t          sample,
                                     std::uint64_t        seed) {
    if (max_length < 1) {
      throw PreconditionError("farber_diagnostic needs L >= 1");
    }
    if (chain.levels.empty()) {
      throw PreconditionError("farber_diagnostic needs a nonempty chain");
    }
    FarberDiagnostic diag;
    auto const       gens = chain.levels.front().generators();
    std::vector<Word> words;
    if (ball_size(gens, max_length) <= farber_exhaustive_cap) {
      words = reduced_ball(gens, max_length);
    } else {
      words           = sample_reduced_words(gens, max_length, sample, seed);
      diag.exhaustive = false;
    }
    diag.words_tested = words.size();
    std::vector<char> always_fixed(words.size(), 1);
    for (auto const& t : chain.levels) {
      FarberLevel level;
      level.index = t.index();
      bool first  = true;
      for (std::size_t w = 0; w < words.size(); ++w) {
        auto fx = fixed_point_ratio(words[w], t);
        if (fx.num != fx.den) {
          always_fixed[w] = 0;
        }
        if (first || fx > level.max_fx) {
          level.max_fx  = fx;
          level.witness = words[w];
          first         = false;
        }
      }
      diag.levels.push_back(std::move(level));
    }
    for (std::size_t w = 0; w < words.size(); ++w) {
      if (always_fixed[w]) {
        diag.status  = FarberStatus::obstructed;
        diag.witness = words[w];
        return diag;
      }
    }
    bool non_increasing = true;
    for (std::size_t k = 1; k < diag.levels.size(); ++k) {
      if (diag.levels[k].max_fx > diag.levels[k - 1].max_fx) {
        non_increasing = false;
      }
    }
    auto const& first = diag.levels.front().max_fx;
    auto const& last  = diag.levels.back().max_fx;
    if (non_increasing && (last.num == 0 || last < first)) {
      diag.status = FarberStatus::decreasing;
    }
    return diag;
  }

}  // namespace fbc
