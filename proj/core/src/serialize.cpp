#include "fbc/serialize.hpp"

#include <charconv>
#include <sstream>

#include "fbc/errors.hpp"

namespace fbc::io {

  namespace {
    template <typename F>
    auto guarded(char const* what, F&& f) {
      try {
        return f();
      } catch (json::exception const& e) {
        throw InputError(std::string("malformed ") + what + ": " + e.what());
      }
    }

    std::size_t get_count(json const& j, char const* key) {
      if (!j.is_object() || !j.contains(key)) {
        throw InputError(std::string("missing field \"") + key + "\"");
      }
      auto const& v = j.at(key);
      if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw InputError(std::string("field \"") + key
                         + "\" must be a nonnegative integer");
      }
      return v.get<std::size_t>();
    }

    json const& get_array(json const& j, char const* key) {
      if (!j.is_object() || !j.contains(key) || !j.at(key).is_array()) {
        throw InputError(std::string("field \"") + key
                         + "\" must be an array");
      }
      return j.at(key);
    }

    json integers(std::vector<Integer> const& v) {
      json a = json::array();
      for (auto const& x : v) {
        a.push_back(x.get_str());
      }
      return a;
    }

    template <typename T>
    json indices(std::vector<T> const& v) {
      json a = json::array();
      for (auto x : v) {
        a.push_back(x);
      }
      return a;
    }
  }  // namespace

  json word_to_json(Word const& w) {
    return indices(w.letters());
  }

  Word word_from_json(json const& j, std::size_t rank) {
    return guarded("word", [&] {
      if (!j.is_array()) {
        throw InputError("word must be an array of signed integers");
      }
      std::vector<letter_type> raw;
      for (auto const& x : j) {
        if (!x.is_number_integer()) {
          throw InputError("word letters must be integers");
        }
        auto v = x.get<long long>();
        if (v == 0 || v > static_cast<long long>(rank)
            || -v > static_cast<long long>(rank)) {
          throw InputError("letter " + std::to_string(v)
                           + " out of range for rank " + std::to_string(rank));
        }
        raw.push_back(static_cast<letter_type>(v));
      }
      return Word(rank, raw);
    });
  }

  json automorphism_to_json(Automorphism const& phi) {
    json images = json::array();
    for (auto const& w : phi.images()) {
      images.push_back(word_to_json(w));
    }
    return json{{"rank", phi.rank()}, {"images", images}};
  }

  Automorphism automorphism_from_json(json const& j) {
    return guarded("automorphism", [&] {
      auto const        rank   = get_count(j, "rank");
      auto const&       images = get_array(j, "images");
      std::vector<Word> words;
      for (auto const& w : images) {
        words.push_back(word_from_json(w, rank));
      }
      return Automorphism(rank, std::move(words));
    });
  }

  json triangular_to_json(TriangularAutomorphism const& phi) {
    json suffixes = json::array();
    for (auto const& w : phi.suffixes()) {
      suffixes.push_back(word_to_json(w));
    }
    return json{{"rank", phi.rank()}, {"suffixes", suffixes}};
  }

  TriangularAutomorphism triangular_from_json(json const& j) {
    return guarded("triangular automorphism", [&] {
      auto const        rank     = get_count(j, "rank");
      auto const&       suffixes = get_array(j, "suffixes");
      std::vector<Word> words;
      for (auto const& w : suffixes) {
        words.push_back(word_from_json(w, rank));
        if (words.back().length() != w.size()) {
          throw ValidationError("suffix of generator "
                                    + std::to_string(words.size())
                                    + " is not freely reduced",
                                words.size());
        }
      }
      return TriangularAutomorphism(rank, std::move(words));
    });
  }

  json coset_table_to_json(CosetTable const& t) {
    json perms = json::array();
    for (std::size_t g = 0; g < t.generators(); ++g) {
      json p = json::array();
      for (auto c : t.perm(g)) {
        p.push_back(c + 1);
      }
      perms.push_back(std::move(p));
    }
    return json{{"index", t.index()}, {"perms", perms}};
  }

  CosetTable coset_table_from_json(json const& j) {
    return guarded("coset table", [&] {
      auto const  n     = get_count(j, "index");
      auto const& perms = get_array(j, "perms");
      std::vector<std::vector<coset_type>> rows;
      for (auto const& p : perms) {
        if (!p.is_array() || p.size() != n) {
          throw InputError("each permutation must list " + std::to_string(n)
                           + " images");
        }
        std::vector<coset_type> row;
        for (auto const& x : p) {
          auto v = x.get<long long>();
          if (v < 1 || v > static_cast<long long>(n)) {
            throw InputError("coset " + std::to_string(v) + " out of range");
          }
          row.push_back(static_cast<coset_type>(v - 1));
        }
        rows.push_back(std::move(row));
      }
      auto const gens = rows.size();
      return CosetTable(gens, std::move(rows));
    });
  }

  json matrix_to_json(IntMatrix const& m) {
    json entries = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (auto const& e : m.row(i)) {
        entries.push_back(json::array({i + 1, e.col + 1, e.value.get_str()}));
      }
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
  }

  IntMatrix matrix_from_json(json const& j) {
    return guarded("matrix", [&] {
      auto const  rows    = get_count(j, "rows");
      auto const  cols    = get_count(j, "cols");
      auto const& entries = get_array(j, "entries");
      IntMatrix   m(rows, cols);
      for (auto const& e : entries) {
        if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer()
            || !e[1].is_number_integer() || !e[2].is_string()) {
          throw InputError("matrix entries must be [i, j, \"decimal\"]");
        }
        auto i = e[0].get<long long>();
        auto c = e[1].get<long long>();
        if (i < 1 || c < 1 || i > static_cast<long long>(rows)
            || c > static_cast<long long>(cols)) {
          throw InputError("matrix entry index out of range");
        }
        Integer v;
        if (v.set_str(e[2].get<std::string>(), 10) != 0) {
          throw InputError("matrix entry is not a decimal integer");
        }
        m.add_to(std::size_t(i - 1), std::size_t(c - 1), v);
      }
      return m;
    });
  }

  json degree_report_to_json(DegreeReport const& r) {
    json gens = json::array();
    for (std::size_t i = 0; i < r.degrees.size(); ++i) {
      gens.push_back(json{{"generator", i + 1},
                          {"degree", r.degrees[i]},
                          {"split_verified", bool(r.split_verified[i])}});
    }
    return json{{"degree", r.degree},
                {"exact", r.exact()},
                {"generators", gens}};
  }

  json hierarchy_to_json(HierarchyTree const& t) {
    json steps = json::array();
    for (auto const& s : t.steps) {
      json edges = json::array();
      for (auto const& e : s.edges) {
        edges.push_back(json{{"generator", e.generator}, {"group", e.group}});
      }
      steps.push_back(json{{"degree", s.degree},
                           {"removed", indices(s.removed)},
                           {"vertex_rank", s.vertex.rank()},
                           {"edges", edges}});
    }
    return json{{"root_rank", t.root.rank()},
                {"root_degree", t.root_degree},
                {"steps", steps},
                {"leaf",
                 json{{"tag", to_string(t.leaf.tag)},
                      {"rank", t.leaf.rank},
                      {"group", t.leaf.description}}}};
  }

  json homology_to_json(HomologySummary const& h) {
    std::size_t units = 0;
    for (auto const& d : h.divisors) {
      if (d == 1) {
        ++units;
      }
    }
    return json{{"betti", h.betti},
                {"unit_divisors", units},
                {"torsion_coefficients", integers(h.torsion_coefficients())},
                {"torsion_order", h.torsion_order.get_str()}};
  }

  json chain_to_json(SubgroupChain const& c, std::size_t include_up_to) {
    json levels = json::array();
    for (std::size_t k = 0; k < c.levels.size(); ++k) {
      auto const& t = c.levels[k];
      json        l{{"level", k + 1}, {"index", t.index()}};
      if (t.index() <= include_up_to) {
        l["table"] = coset_table_to_json(t);
      }
      if (k > 0) {
        l["nesting_witness"]
            = t.index() <= include_up_to
                  ? [&] {
                      json p = json::array();
                      for (auto x : c.projections[k - 1]) {
                        p.push_back(x + 1);
                      }
                      return p;
                    }()
                  : json("verified");
      }
      levels.push_back(std::move(l));
    }
    return json{{"construction", to_string(c.kind)},
                {"parameters", indices(c.parameters)},
                {"levels", levels}};
  }

  json farber_to_json(FarberDiagnostic const& d) {
    json j{{"status", to_string(d.status)},
           {"words_tested", d.words_tested},
           {"exhaustive", d.exhaustive}};
    if (d.witness) {
      j["witness"] = word_to_json(*d.witness);
    }
    return j;
  }

  std::string format_double(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc{}) {
      throw Error("format_double failed");
    }
    return std::string(buf, end);
  }

  std::string rational_to_string(mpq_class q) {
    q.canonicalize();
    if (q.get_den() == 1) {
      return q.get_num().get_str();
    }
    return q.get_num().get_str() + "/" + q.get_den().get_str();
  }

  std::string gradient_csv(GradientSeries const& s) {
    std::ostringstream out;
    out << "level,index,torsion_order,gradient,conjecture_ratio\n";
    for (std::size_t k = 0; k < s.levels.size(); ++k) {
      auto const& l = s.levels[k];
      out << (k + 1) << ',' << l.index << ',';
      if (l.skipped()) {
        out << "skipped,skipped,skipped\n";
        continue;
      }
      out << l.homology->torsion_order.get_str() << ','
          << format_double(l.gradient) << ','
          << (l.conjecture_ratio ? rational_to_string(*l.conjecture_ratio)
                                 : std::string("n/a"))
          << '\n';
    }
    return out.str();
  }

  std::string word_to_string(Word const& w) {
    std::string s;
    for (auto a : w.letters()) {
      if (!s.empty()) {
        s += ' ';
      }
      s += std::to_string(a);
    }
    return s;
  }

  std::string farber_csv(FarberDiagnostic const& d) {
    std::ostringstream out;
    out << "level,index,words_tested,max_fx,witness\n";
    for (std::size_t k = 0; k < d.levels.size(); ++k) {
      auto const& l = d.levels[k];
      out << (k + 1) << ',' << l.index << ',' << d.words_tested << ','
          << l.max_fx.str() << ',' << word_to_string(l.witness) << '\n';
    }
    return out.str();
  }

}  // namespace fbc::io
