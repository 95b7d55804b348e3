#include "runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>

#include "fbc/chains.hpp"
#include "fbc/errors.hpp"
#include "fbc/growth.hpp"
#include "fbc/hierarchy.hpp"
#include "fbc/homology.hpp"
#include "fbc/serialize.hpp"

namespace fbc::cli {

  namespace fs = std::filesystem;
  using io::json;

  namespace {

    char const* command_name(Command c) {
      switch (c) {
        case Command::analyze:
          return "analyze";
        case Command::chain:
          return "chain";
        case Command::gradient:
          return "gradient";
        case Command::oracle:
          return "oracle";
        case Command::snf:
          return "snf";
      }
      return "unknown";
    }

    json load_document(std::string const& source, char const* what) {
      if (source.empty()) {
        throw InputError(std::string("no ") + what + " given");
      }
      std::string text;
      if (source.front() == '{') {
        text = source;
      } else {
        std::ifstream in(source);
        if (!in) {
          throw InputError(std::string("cannot read ") + what + " file "
                           + source);
        }
        text.assign(std::istreambuf_iterator<char>(in), {});
      }
      try {
        return json::parse(text);
      } catch (json::parse_error const& e) {
        throw InputError(std::string(what) + " is not valid JSON: " + e.what());
      }
    }

    struct Monodromy {
      Automorphism                          phi;
      std::optional<TriangularAutomorphism> triangular;
    };

    // Image-form input is accepted as triangular when every image has the
    // shape x_i * rho_i with rho_i over lower generators.
    std::optional<TriangularAutomorphism> as_triangular(Automorphism const& phi) {
      std::vector<Word> suffixes;
      for (std::size_t i = 1; i <= phi.rank(); ++i) {
        auto const& img = phi.image(i);
        if (img.empty() || img[0] != static_cast<letter_type>(i)) {
          return std::nullopt;
        }
        std::vector<letter_type> rest(img.letters().begin() + 1,
                                      img.letters().end());
        for (auto a : rest) {
          if (generator_of(a) >= i) {
            return std::nullopt;
          }
        }
        suffixes.emplace_back(phi.rank(), rest);
      }
      return TriangularAutomorphism(phi.rank(), std::move(suffixes));
    }

    Monodromy load_monodromy(std::string const& source) {
      auto doc = load_document(source, "monodromy");
      if (doc.is_object() && doc.contains("suffixes")) {
        auto t = io::triangular_from_json(doc);
        return Monodromy{t.automorphism(), t};
      }
      if (doc.is_object() && doc.contains("images")) {
        auto phi = io::automorphism_from_json(doc);
        return Monodromy{phi, as_triangular(phi)};
      }
      throw InputError("monodromy needs \"suffixes\" or \"images\"");
    }

    TriangularAutomorphism const& need_triangular(Monodromy const& m,
                                                  char const*      why) {
      if (!m.triangular) {
        throw ValidationError(std::string(why)
                              + " needs a triangular monodromy x_i -> x_i rho_i");
      }
      return *m.triangular;
    }

    std::string csv_with_provenance(std::string const& banner,
                                    std::string const& body) {
      return banner + body;
    }

    std::string dump(json const& j) {
      return j.dump(2) + "\n";
    }

    json analysis_json(TriangularAutomorphism const& phi) {
      auto cert   = check_upg_triangular(phi);
      auto report = edge_growth_degrees(phi);
      auto window = default_split_window(phi.rank());
      json empirical = json::array();
      for (std::size_t i = 1; i <= phi.rank(); ++i) {
        CyclicWord g = cyclically_reduce(
            Word(phi.rank(), {static_cast<letter_type>(i)}));
        auto lengths = iterate_lengths(phi.automorphism(), g, window);
        auto est     = empirical_degree(lengths);
        json e{{"generator", i}, {"stable", est.stable}};
        e["degree"] = est.degree ? json(*est.degree) : json(nullptr);
        empirical.push_back(std::move(e));
      }
      json j = io::degree_report_to_json(report);
      j["nilpotency_index"] = cert.nilpotency_index;
      j["window"]           = window;
      j["empirical"]        = std::move(empirical);
      return j;
    }

    json hierarchy_json(TriangularAutomorphism const& phi) {
      try {
        auto tree   = build_hierarchy(phi);
        auto report = validate_hierarchy(tree);
        json j      = io::hierarchy_to_json(tree);
        j["valid"]  = report.ok;
        if (!report.ok) {
          j["violation"] = report.message;
        }
        return j;
      } catch (PreconditionError const& e) {
        return json{{"built", false}, {"reason", e.what()}};
      }
    }

    SubgroupChain make_chain(ExperimentConfig const& c, Monodromy const& m) {
      if (c.chain == "cyclic") {
        return cyclic_chain(m.phi, c.levels);
      }
      if (c.chain == "modp") {
        return mod_p_chain(need_triangular(m, "the mod-p chain"), c.primes);
      }
      if (c.chain == "lowindex") {
        return low_index_chain(m.phi, c.max_index);
      }
      throw InputError("unknown chain kind \"" + c.chain
                       + "\"; expected cyclic, modp or lowindex");
    }

    void validate_config(ExperimentConfig const& c) {
      if (c.command == Command::snf) {
        return;
      }
      if (c.levels < 1) {
        throw InputError("--levels must be at least 1");
      }
      if (c.ball < 1) {
        throw InputError("--ball must be at least 1");
      }
      if (c.chain == "modp" && c.primes.empty()) {
        throw InputError("--primes must list at least one prime");
      }
      if (c.chain == "lowindex" && c.max_index < 1) {
        throw InputError("--max-index must be at least 1");
      }
    }

  }  // namespace

  std::string config_hash(ExperimentConfig const& c) {
    std::ostringstream key;
    key << command_name(c.command) << '\n';
    if (c.command == Command::snf) {
      key << load_document(c.matrix, "matrix").dump() << '\n';
    } else {
      key << load_document(c.monodromy, "monodromy").dump() << '\n'
          << c.chain << '\n'
          << c.levels << '\n';
      for (auto p : c.primes) {
        key << p << ',';
      }
      key << '\n' << c.max_index << '\n' << c.ball << '\n' << c.sample << '\n'
          << c.seed << '\n';
    }
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : key.str()) {
      h ^= ch;
      h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
  }

  std::map<std::string, std::string> build_artifacts(
      ExperimentConfig const& c) {
    validate_config(c);
    auto const hash   = config_hash(c);
    auto const banner = std::string("# ") + tool_version + " config=" + hash
                        + "\n";
    json const provenance{{"tool", tool_version}, {"config_hash", hash}};
    std::map<std::string, std::string> out;

    if (c.command == Command::snf) {
      auto m   = io::matrix_from_json(load_document(c.matrix, "matrix"));
      auto snf = smith_normal_form(m);
      json d   = json::array();
      for (auto const& x : snf.divisors) {
        d.push_back(x.get_str());
      }
      out["snf.json"] = dump(json{{"provenance", provenance},
                                  {"rows", m.rows()},
                                  {"cols", m.cols()},
                                  {"rank", snf.rank},
                                  {"divisors", d}});
      return out;
    }

    auto const mono = load_monodromy(c.monodromy);

    if (c.command == Command::oracle) {
      std::string body = "n,betti,torsion_order,torsion_coefficients\n";
      for (std::size_t n = 1; n <= c.levels; ++n) {
        auto        h = mapping_torus_h1(mono.phi, n);
        std::string coeffs;
        for (auto const& d : h.torsion_coefficients()) {
          coeffs += (coeffs.empty() ? "" : " ") + d.get_str();
        }
        body += std::to_string(n) + "," + std::to_string(h.betti) + ","
                + h.torsion_order.get_str() + "," + coeffs + "\n";
      }
      out["oracle.csv"] = csv_with_provenance(banner, body);
      return out;
    }

    std::optional<std::size_t> degree;
    if (c.command == Command::analyze || c.command == Command::gradient) {
      auto const& phi   = need_triangular(mono, "growth analysis");
      json        a     = analysis_json(phi);
      a["provenance"]   = provenance;
      out["degrees.json"] = dump(a);
      json h            = hierarchy_json(phi);
      h["provenance"]   = provenance;
      out["hierarchy.json"] = dump(h);
      auto ad = automorphism_degree(phi);
      degree  = ad.degree;
    } else if (mono.triangular) {
      degree = automorphism_degree(*mono.triangular).degree;
    }
    if (c.command == Command::analyze) {
      return out;
    }

    auto chain = make_chain(c, mono);
    verify_chain(chain, presentation(mono.phi));
    auto diag = farber_diagnostic(chain, c.ball, c.sample, c.seed);
    json cj   = io::chain_to_json(chain);
    cj["farber"]     = io::farber_to_json(diag);
    cj["ball"]       = c.ball;
    cj["seed"]       = c.seed;
    cj["provenance"] = provenance;
    out["chain.json"] = dump(cj);
    out["farber.csv"] = csv_with_provenance(banner, io::farber_csv(diag));
    if (c.command == Command::chain) {
      return out;
    }

    auto series = gradient_series(mono.phi, chain, degree);
    out["gradient.csv"] = csv_with_provenance(banner, io::gradient_csv(series));
    json levels = json::array();
    for (std::size_t k = 0; k < series.levels.size(); ++k) {
      auto const& l = series.levels[k];
      json        j{{"level", k + 1}, {"index", l.index}};
      if (l.skipped()) {
        j["skipped"] = l.skip_reason;
      } else {
        j["homology"] = io::homology_to_json(*l.homology);
      }
      levels.push_back(std::move(j));
    }
    json hj{{"provenance", provenance},
            {"degree", degree ? json(*degree) : json(nullptr)},
            {"h0_gradient", degree_zero_gradient},
            {"levels", levels}};
    out["homology.json"] = dump(hj);
    return out;
  }

  int run(ExperimentConfig const& config, std::ostream& log) {
    std::map<std::string, std::string> artifacts;
    try {
      artifacts = build_artifacts(config);
    } catch (ValidationError const& e) {
      log << "validation error: " << e.what() << '\n';
      return exit_validation;
    } catch (ResourceError const& e) {
      log << "resource cap exceeded: " << e.what() << '\n';
      return exit_resource;
    } catch (InputError const& e) {
      log << "config error: " << e.what() << '\n';
      return exit_config;
    } catch (PreconditionError const& e) {
      log << "config error: " << e.what() << '\n';
      return exit_config;
    } catch (std::exception const& e) {
      log << "error: " << e.what() << '\n';
      return exit_internal;
    }

    std::vector<fs::path> written;
    try {
      fs::path dir(config.out);
      fs::create_directories(dir);
      for (auto const& [name, content] : artifacts) {
        auto          path = dir / name;
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) {
          throw Error("cannot write " + path.string());
        }
        written.push_back(path);
        f << content;
        if (!f) {
          throw Error("short write to " + path.string());
        }
      }
    } catch (std::exception const& e) {
      std::error_code ec;
      for (auto const& p : written) {
        fs::remove(p, ec);
      }
      log << "config error: " << e.what() << '\n';
      return exit_config;
    }
    for (auto const& [name, content] : artifacts) {
      log << "wrote " << (fs::path(config.out) / name).string() << '\n';
    }
    return exit_ok;
  }

}  // namespace fbc::cli
