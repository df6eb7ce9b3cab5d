#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nucad/formula.hpp"
#include "nucad/onecell.hpp"

namespace nucad {

enum class SplitMode { Classic, Improved };

struct SolverConfig {
  SplitMode split = SplitMode::Improved;
  std::uint64_t step_budget = 0;  // explored cells; 0 = unlimited
  double timeout_seconds = 0;     // 0 = unlimited
  unsigned threads = 1;           // > 1 explores the top-level pending cells concurrently
};

struct SolveStats {
  std::uint64_t atoms = 0;
  std::uint64_t cells = 0;
  std::uint64_t symbolic_intervals = 0;
  std::uint64_t sections = 0;
  double real_root_seconds = 0;
  double non_algebraic_seconds = 0;
  double total_seconds = 0;
  bool aborted = false;

  SolveStats& operator+=(const SolveStats& o);
};

/// Node of a NuCAD. The root has no edge interval; every other node is reached
/// through `interval`. A node is a leaf when `label` is set. The children of a
/// node all have the same level: one more than the node's own level along a
/// path, or the first level of the block again where a nested NuCAD starts.
struct NuCadTree {
  SymbolicInterval interval;
  std::optional<bool> label;
  /// Leaves: the cell's sample. Branches: a point of the node's cell over
  /// which the children's intervals are ordered (length = child level - 1).
  SamplePoint sample;
  /// Last level of the block the children belong to.
  std::size_t top = 0;
  std::vector<NuCadTree> children;

  static NuCadTree leaf(bool label, SamplePoint sample);
  static NuCadTree branch(SamplePoint base, std::size_t top);

  bool is_leaf() const { return label.has_value(); }
  std::size_t child_level() const { return children.empty() ? 0 : children.front().interval.level; }
  std::size_t leaf_count() const;
  /// Nested text form, one edge per line.
  std::string to_string(const VarOrder* vars = nullptr) const;
};

/// Appends the path below t (sharing an existing prefix of equal intervals)
/// and attaches `end` at its last node: a leaf, or a nested NuCAD whose children
/// restart at the level of the path's first interval. Intermediate nodes get
/// prefixes of `sample` as their governing samples.
void insert_path(NuCadTree& t, const std::vector<SymbolicInterval>& path, NuCadTree end,
                 const SamplePoint& sample);

/// Leaves whose realized cells contain the point (exactly one for a decomposition).
std::vector<const NuCadTree*> locate_all(const NuCadTree& t, const SamplePoint& x);
/// Label of the unique leaf containing x; throws DomainError if none.
bool label_at(const NuCadTree& t, const SamplePoint& x);

using PendingCell = std::vector<SymbolicInterval>;

/// Regions of outer not covered by inner, split cylindrically level by level.
/// Realizations use the prefixes of r, a point of inner.
std::vector<PendingCell> split_region(const PendingCell& outer, const PendingCell& inner, const SamplePoint& r,
                                      SplitMode mode = SplitMode::Classic);

/// First sample of s x region, level by level; nullopt when the region is empty.
std::optional<SamplePoint> choose_sample(const SamplePoint& s, const PendingCell& region);

struct Decomposition {
  ProjectionSet projection;
  NuCadTree tree;
  SamplePoint sample;  // first sample of the region
};

struct QuantifierResult {
  ProjectionSet projection;
  bool value = false;
};

/// NuCAD construction for one prenex problem.
class NuCadSolver {
 public:
  NuCadSolver(PrenexFormula problem, SolverConfig config = {});

  /// Truth-invariant NuCAD of cell(P, s) x region over cell(P, s); nullopt for an empty region.
  std::optional<Decomposition> nucad_full(const SamplePoint& s, const PendingCell& region);
  /// (P, t) with phi(s') = t for every s' in cell(P, s).
  QuantifierResult nucad_recurse(const SamplePoint& s);
  /// Truth of the quantified block over region; nullopt for an empty region.
  std::optional<QuantifierResult> nucad_quantifier(Quantifier q, const SamplePoint& s, const PendingCell& region);

  /// Decomposition of the free-variable space (requires a free variable).
  NuCadTree decompose();
  /// Truth of a sentence (no free variables).
  bool decide();

  /// A point where the matrix holds, recorded the first time one is sampled.
  const std::optional<SamplePoint>& witness() const { return witness_; }
  /// Sample of the outermost existential block at which the rest of the
  /// sentence was decided true (set by decide()).
  const std::optional<SamplePoint>& block_witness() const { return block_witness_; }
  const SolveStats& stats() const { return stats_; }
  const PrenexFormula& problem() const { return problem_; }

 private:
  void tick();
  void finish_timers();
  CellResult construct(const ProjectionSet& P, const SamplePoint& r, std::size_t top, std::size_t bottom);
  void absorb_region(ProjectionSet& P, const PendingCell& region) const;

  std::optional<Decomposition> explore_parallel(const SamplePoint& s, std::vector<PendingCell> pieces,
                                                Decomposition out);

  PrenexFormula problem_;
  SolverConfig config_;
  std::vector<QuantifierBlock> blocks_;
  SolveStats stats_;
  std::optional<SamplePoint> witness_;
  std::optional<SamplePoint> block_witness_;
  std::chrono::steady_clock::time_point start_;
  double root_seconds_at_start_ = 0;
  double worker_root_seconds_ = 0;
  std::shared_ptr<std::atomic<std::uint64_t>> steps_;
  int depth_ = 0;
};

}  // namespace nucad
