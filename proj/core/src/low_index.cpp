#include <algorithm>
#include <string>

#include "fbc/chains.hpp"
#include "fbc/errors.hpp"

namespace fbc {

  namespace {

    constexpr std::int32_t undefined = -1;

    // Column 2g holds x_{g+1}, column 2g+1 its inverse.
    inline std::size_t column(letter_type a) {
      return a > 0 ? 2 * std::size_t(a - 1) : 2 * std::size_t(-a - 1) + 1;
    }

    struct PartialTable {
      std::size_t               width = 0;
      std::size_t               count = 1;
      std::vector<std::int32_t> entries;  // capacity x width

      std::int32_t get(std::size_t c, std::size_t col) const {
        return entries[c * width + col];
      }
      void define(std::size_t c, letter_type a, std::size_t d) {
        entries[c * width + column(a)]  = static_cast<std::int32_t>(d);
        entries[d * width + column(-a)] = static_cast<std::int32_t>(c);
      }
    };

    class LowIndexSearch {
     public:
      LowIndexSearch(GroupPresentation const& p,
                     std::size_t              max_index,
                     LowIndexLimits const&    limits)
          : _gens(p.generators()), _max(max_index), _limits(limits) {
        for (auto const& r : p.relators) {
          auto const& l = r.letters();
          for (std::size_t s = 0; s < l.size(); ++s) {
            std::vector<letter_type> rot(l.begin() + s, l.end());
            rot.insert(rot.end(), l.begin(), l.begin() + s);
            if (std::find(_scans.begin(), _scans.end(), rot) == _scans.end()) {
              _scans.push_back(std::move(rot));
            }
          }
        }
        _relators = p.relators;
      }

      std::vector<CosetTable> run() {
        PartialTable t;
        t.width = 2 * _gens;
        t.entries.assign(_max * t.width, undefined);
        search(std::move(t));
        std::sort(_found.begin(), _found.end(),
                  [](CosetTable const& a, CosetTable const& b) {
                    if (a.index() != b.index()) {
                      return a.index() < b.index();
                    }
                    return a < b;
                  });
        return std::move(_found);
      }

     private:
      // Scans every rotation of every relator at every coset, making
      // deductions when a single gap remains. Returns false on a
      // contradiction.
      bool close(PartialTable& t) const {
        bool changed = true;
        while (changed) {
          changed = false;
          for (auto const& r : _scans) {
            auto const len = r.size();
            for (std::size_t c = 0; c < t.count; ++c) {
              std::size_t  i = 0;
              std::int32_t f = static_cast<std::int32_t>(c);
              while (i < len) {
                auto next = t.get(std::size_t(f), column(r[i]));
                if (next == undefined) {
                  break;
                }
                f = next;
                ++i;
              }
              if (i == len) {
                if (f != static_cast<std::int32_t>(c)) {
                  return false;
                }
                continue;
              }
              std::size_t  j = len;
              std::int32_t b = static_cast<std::int32_t>(c);
              while (j > i) {
                auto prev = t.get(std::size_t(b), column(-r[j - 1]));
                if (prev == undefined) {
                  break;
                }
                b = prev;
                --j;
              }
              if (j == i) {
                if (f != b) {
                  return false;
                }
              } else if (j == i + 1) {
                t.define(std::size_t(f), r[i], std::size_t(b));
                changed = true;
              }
            }
          }
        }
        return true;
      }

      void search(PartialTable t) {
        if (++_nodes > _limits.max_nodes) {
          throw ResourceError("low-index search exceeded "
                              + std::to_string(_limits.max_nodes) + " nodes");
        }
        if (!close(t)) {
          return;
        }
        std::size_t c = 0, col = 0;
        bool        open = false;
        for (c = 0; c < t.count && !open; ++c) {
          for (col = 0; col < t.width; ++col) {
            if (t.get(c, col) == undefined) {
              open = true;
              break;
            }
          }
          if (open) {
            break;
          }
        }
        if (!open) {
          record(t);
          return;
        }
        letter_type a = (col % 2 == 0) ? static_cast<letter_type>(col / 2 + 1)
                                       : -static_cast<letter_type>(col / 2 + 1);
        for (std::size_t d = 0; d < t.count; ++d) {
          if (t.get(d, column(-a)) == undefined) {
            PartialTable next = t;
            next.define(c, a, d);
            search(std::move(next));
          }
        }
        if (t.count < _max) {
          PartialTable next = t;
          auto         d    = next.count++;
          next.define(c, a, d);
          search(std::move(next));
        }
      }

      void record(PartialTable const& t) {
        std::vector<std::vector<coset_type>> perms(
            _gens, std::vector<coset_type>(t.count));
        for (std::size_t g = 0; g < _gens; ++g) {
          for (std::size_t c = 0; c < t.count; ++c) {
            perms[g][c] = static_cast<coset_type>(t.get(c, 2 * g));
          }
        }
        CosetTable table(_gens, std::move(perms));
        for (auto const& r : _relators) {
          for (coset_type c = 0; c < table.index(); ++c) {
            if (table.act(c, r) != c) {
              return;
            }
          }
        }
        for (coset_type b = 1; b < table.index(); ++b) {
          if (table.rebased(b) < table) {
            return;
          }
        }
        _found.push_back(std::move(table));
      }

      std::size_t                           _gens;
      std::size_t                           _max;
      LowIndexLimits                        _limits;
      std::vector<std::vector<letter_type>> _scans;
      std::vector<Word>                     _relators;
      std::vector<CosetTable>               _found;
      std::size_t                           _nodes = 0;
    };

  }  // namespace

  std::vector<CosetTable> low_index_subgroups(GroupPresentation const& p,
                                              std::size_t max_index,
                                              LowIndexLimits const& limits) {
    if (max_index < 1) {
      throw PreconditionError("low_index_subgroups needs max_index >= 1");
    }
    if (max_index > limits.max_index) {
      throw ResourceError("low_index_subgroups: index bound "
                          + std::to_string(max_index) + " above cap "
                          + std::to_string(limits.max_index));
    }
    return LowIndexSearch(p, max_index, limits).run();
  }

}  // namespace fbc
