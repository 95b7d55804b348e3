#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "fbc/chains.hpp"
#include "fbc/exactla.hpp"
#include "fbc/growth.hpp"
#include "fbc/hierarchy.hpp"
#include "fbc/homology.hpp"
#include "fbc/words.hpp"

// JSON and CSV forms of the library's values. Parsing failures raise
// InputError; structural violations raise ValidationError.
namespace fbc::io {

  using json = nlohmann::ordered_json;

  json word_to_json(Word const& w);
  Word word_from_json(json const& j, std::size_t rank);

  // {"rank": m, "images": [[...], ...]}
  json         automorphism_to_json(Automorphism const& phi);
  Automorphism automorphism_from_json(json const& j);

  // {"rank": m, "suffixes": [[...], ...]}
  json                   triangular_to_json(TriangularAutomorphism const& phi);
  TriangularAutomorphism triangular_from_json(json const& j);

  // {"index": n, "perms": [[...], ...]}, one-line notation, 1-based.
  json       coset_table_to_json(CosetTable const& t);
  CosetTable coset_table_from_json(json const& j);

  // {"rows": r, "cols": c, "entries": [[i, j, "decimal"], ...]}, 1-based.
  json      matrix_to_json(IntMatrix const& m);
  IntMatrix matrix_from_json(json const& j);

  json degree_report_to_json(DegreeReport const& r);
  // Steps as {degree, removed, vertex_rank}; leaf as {tag, rank}.
  json hierarchy_to_json(HierarchyTree const& t);
  // Divisor lists are arrays of decimal strings.
  json homology_to_json(HomologySummary const& h);

  // `include_tables_up_to` bounds the index of levels whose permutations
  // are written out.
  json chain_to_json(SubgroupChain const& c,
                     std::size_t          include_tables_up_to = 5000);
  json farber_to_json(FarberDiagnostic const& d);

  // Shortest round-trip decimal for a double, '.' separator.
  std::string format_double(double x);
  std::string rational_to_string(mpq_class q);

  // level,index,torsion_order,gradient,conjecture_ratio with LF endings.
  std::string gradient_csv(GradientSeries const& s);
  // level,index,words_tested,max_fx,witness
  std::string farber_csv(FarberDiagnostic const& d);

  std::string word_to_string(Word const& w);

}  // namespace fbc::io
