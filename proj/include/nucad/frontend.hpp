#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "nucad/formula.hpp"
#include "nucad/nucad.hpp"

namespace nucad {

enum class ProblemMode { Sat, Decide, Qe };
enum class VarOrdering { Input, Degree };

/// A parsed SMT-LIB problem. `vars` holds the declared constants first (in
/// declaration order) followed by every bound variable in order of
/// appearance; a binder that shadows an earlier name gets a fresh suffixed name.
struct ProblemInstance {
  bool quantified = false;
  VarOrder vars;
  std::size_t declared = 0;
  Formula assertion;  // conjunction of all assertions
  ProblemMode mode = ProblemMode::Sat;

  friend bool operator==(const ProblemInstance& a, const ProblemInstance& b);
};

/// Parses the SMT-LIB subset. Throws ParseError (with line and column) on
/// malformed text or sort errors, UnsupportedError on terms outside
/// polynomial real arithmetic.
ProblemInstance parse_smtlib(std::string_view text);

/// SMT-LIB script that parses back to an equal instance.
std::string print_smtlib(const ProblemInstance& p);
std::string formula_smtlib(const Formula& f, const VarOrder& vars);

/// Prenex problem with the declared variables ordered as requested. With
/// Degree, declared variables are sorted by ascending total degree over all
/// atoms (ties by declaration order), so the highest-degree variable is
/// projected first.
PrenexFormula prepare(const ProblemInstance& p, VarOrdering order = VarOrdering::Input);

struct PlotOptions {
  int resolution = 400;
  bool samples = false;
};

/// SVG picture of a decomposition of dimension 1 (strip) or 2. Throws
/// UnsupportedError for higher dimensions.
std::string render_svg(const NuCadTree& t, const VarOrder& vars, std::size_t dimension,
                       const PlotOptions& opt = {});

/// Structured dump of a tree: nested objects with interval text, bound data,
/// label and decimal sample.
std::string tree_to_json(const NuCadTree& t, const VarOrder& vars);

/// Exit codes of run_cli.
inline constexpr int kExitOk = 0, kExitUsage = 1, kExitUnsupported = 2, kExitBudget = 3, kExitInternal = 4;

/// Command-line driver; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nucad
