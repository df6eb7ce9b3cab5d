#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nucad/formula.hpp"
#include "nucad/nucad.hpp"
#include "nucad/onecell.hpp"

namespace nucad {

/// Seed of every sampled check.
inline constexpr std::uint64_t kOracleSeed = 0x6e75636164ULL;

/// Region of the line with the truth value of a univariate formula on it.
struct Region1D {
  RealizedInterval interval;
  bool label = false;
};

/// Sign-invariant decomposition of R for the polynomials of f (level <= 1),
/// labelled by exact evaluation at one point of each region.
std::vector<Region1D> oracle_1d(const Formula& f);
/// Label of the region containing x.
bool label_1d(const std::vector<Region1D>& regions, const AlgebraicNumber& x);

/// Grid for the outer bound variables of oracle_quantified.
struct GridSpec {
  Rational low = -3;
  Rational high = 3;
  Rational step = Rational(1, 4);
};

struct OracleAnswer {
  bool value = false;
  /// Set when the answer is certain: the innermost variable is decided exactly,
  /// outer existentials by a witness and outer universals by a counterexample.
  bool certain = false;
};

/// Truth of a prenex formula with its free variables fixed to `params`.
/// The innermost variable is eliminated exactly; outer bound variables range
/// over the grid. At most three bound variables.
OracleAnswer oracle_quantified(const PrenexFormula& f, const GridSpec& grid, const std::vector<Rational>& params = {});

/// Random rational in a realized interval; unbounded sides extend `spread`
/// past the finite end (or around 0). Sections yield their exact point.
AlgebraicNumber random_in(const RealizedInterval& r, std::mt19937_64& rng, double spread = 8.0);
/// Random point of a locally cylindrical cell given by intervals of levels
/// 1..k; false when a bound is undefined or a level is empty.
bool random_point_in(const std::vector<SymbolicInterval>& cell, std::mt19937_64& rng, SamplePoint& out);

struct DecompositionCheck {
  std::size_t dimension = 1;
  Rational box = 6;  // coverage points are drawn from [-box, box]^dimension
  std::size_t points = 1000;
  std::size_t per_leaf = 100;
  std::uint64_t seed = kOracleSeed;
};

struct DecompositionReport {
  std::size_t points = 0;
  std::size_t leaves = 0;
  std::size_t leaf_points = 0;
  std::size_t uncovered = 0;
  std::size_t overlapping = 0;
  std::size_t wrong_label = 0;
  std::vector<std::string> counterexamples;

  bool ok() const { return uncovered == 0 && overlapping == 0 && wrong_label == 0; }
  std::string to_string() const;
  std::string to_json() const;
};

/// Sampled check of coverage, disjointness and truth-invariance of t against
/// the reference truth function.
/// `truth` may return nullopt where the reference is unknown; such points are skipped.
DecompositionReport check_decomposition(const NuCadTree& t,
                                        const std::function<std::optional<bool>(const SamplePoint&)>& truth,
                                        const DecompositionCheck& config = {});

/// Cells of all leaves: the intervals of the innermost nested segment of each
/// root-to-leaf path (levels 1..k), with the leaf label.
struct LeafCell {
  std::vector<SymbolicInterval> cell;
  bool label = false;
  const NuCadTree* leaf = nullptr;
};
std::vector<LeafCell> leaf_cells(const NuCadTree& t);

/// Exact comparison of a decomposition of R with oracle regions: both are
/// evaluated at every end point and between consecutive end points. Returns
/// the first point where they differ or where the tree has no unique cell.
std::optional<AlgebraicNumber> first_difference_1d(const NuCadTree& t, const std::vector<Region1D>& regions);

}  // namespace nucad
