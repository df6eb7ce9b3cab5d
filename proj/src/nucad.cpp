#include "nucad/nucad.hpp"

#include <algorithm>
#include <future>
#include <map>

#include "nucad/errors.hpp"
#include "nucad/realroots.hpp"

namespace nucad {

namespace {

SamplePoint prefix(const SamplePoint& s, std::size_t n) {
  return SamplePoint(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(std::min(n, s.size())));
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

}  // namespace

SolveStats& SolveStats::operator+=(const SolveStats& o) {
  atoms += o.atoms;
  cells += o.cells;
  symbolic_intervals += o.symbolic_intervals;
  sections += o.sections;
  real_root_seconds += o.real_root_seconds;
  non_algebraic_seconds += o.non_algebraic_seconds;
  total_seconds += o.total_seconds;
  aborted = aborted || o.aborted;
  return *this;
}

// ---------------------------------------------------------------------------
// Tree

NuCadTree NuCadTree::leaf(bool label, SamplePoint sample) {
  NuCadTree t;
  t.label = label;
  t.sample = std::move(sample);
  return t;
}

NuCadTree NuCadTree::branch(SamplePoint base, std::size_t top) {
  NuCadTree t;
  t.sample = std::move(base);
  t.top = top;
  return t;
}

std::size_t NuCadTree::leaf_count() const {
  if (is_leaf()) return 1;
  std::size_t n = 0;
  for (const auto& c : children) n += c.leaf_count();
  return n;
}

namespace {

void print_tree(const NuCadTree& t, const VarOrder* vars, int depth, std::string& out) {
  for (const auto& c : t.children) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += c.interval.to_string(vars);
    if (c.is_leaf()) {
      out += *c.label ? " : TRUE\n" : " : FALSE\n";
    } else {
      bool nested = c.child_level() <= c.interval.level;
      out += nested ? " =>\n" : "\n";
      print_tree(c, vars, depth + 1, out);
    }
  }
}

}  // namespace

std::string NuCadTree::to_string(const VarOrder* vars) const {
  if (is_leaf()) return *label ? "TRUE\n" : "FALSE\n";
  std::string out;
  print_tree(*this, vars, 0, out);
  return out;
}

void insert_path(NuCadTree& t, const std::vector<SymbolicInterval>& path, NuCadTree end, const SamplePoint& sample) {
  if (path.empty()) throw DomainError("insert_path: empty path");
  if (t.is_leaf()) throw DomainError("insert_path: cannot extend a leaf");
  NuCadTree* node = &t;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const SymbolicInterval& I = path[k];
    if (I.level != node->sample.size() + 1) throw DomainError("insert_path: level discipline violated");
    auto it = std::find_if(node->children.begin(), node->children.end(),
                           [&](const NuCadTree& c) { return c.interval == I; });
    if (it == node->children.end()) {
      NuCadTree child;
      child.interval = I;
      child.sample = prefix(sample, I.level);
      child.top = node->top;
      node->children.push_back(std::move(child));
      node = &node->children.back();
    } else {
      if (it->is_leaf() || k + 1 == path.size()) throw DomainError("insert_path: cell already present");
      node = &*it;
    }
  }
  if (end.is_leaf()) {
    node->label = end.label;
    node->sample = std::move(end.sample);
    return;
  }
  if (!end.children.empty() && end.child_level() != path.front().level)
    throw DomainError("insert_path: nested NuCAD must restart at the block's first level");
  node->children = std::move(end.children);
  node->sample = std::move(end.sample);
  node->top = end.top;
}

namespace {

// Point location with the roots over the point's own prefixes cached.
class Locator {
 public:
  explicit Locator(const SamplePoint& x) : x_(x) {}

  void walk(const NuCadTree& node, std::vector<const NuCadTree*>& out) {
    if (node.is_leaf()) {
      out.push_back(&node);
      return;
    }
    for (const auto& c : node.children)
      if (inside(c.interval)) walk(c, out);
  }

 private:
  std::optional<AlgebraicNumber> value(const IndexedRoot& r) {
    auto key = std::make_pair(r.level, r.poly);
    auto it = roots_.find(key);
    if (it == roots_.end()) it = roots_.emplace(key, roots_at_sample(r.poly, prefix(x_, r.level - 1))).first;
    const RootsAtSample& rs = it->second;
    if (rs.nullified || r.index == 0 || r.index > rs.roots.size()) return std::nullopt;
    return rs.roots[r.index - 1];
  }

  bool inside(const SymbolicInterval& I) {
    if (I.level > x_.size()) throw DomainError("point too short for the decomposition");
    const AlgebraicNumber& v = x_[I.level - 1];
    if (I.lower) {
      auto lo = value(*I.lower);
      if (!lo) return false;
      int c = compare(v, *lo);
      if (c < 0 || (c == 0 && !I.lower_closed)) return false;
    }
    if (I.upper) {
      auto hi = value(*I.upper);
      if (!hi) return false;
      int c = compare(v, *hi);
      if (c > 0 || (c == 0 && !I.upper_closed)) return false;
    }
    return true;
  }

  const SamplePoint& x_;
  std::map<std::pair<std::size_t, Polynomial>, RootsAtSample> roots_;
};

}  // namespace

std::vector<const NuCadTree*> locate_all(const NuCadTree& t, const SamplePoint& x) {
  std::vector<const NuCadTree*> out;
  Locator loc(x);
  loc.walk(t, out);
  return out;
}

bool label_at(const NuCadTree& t, const SamplePoint& x) {
  auto leaves = locate_all(t, x);
  if (leaves.empty()) throw DomainError("point " + to_string(x) + " lies in no cell");
  return *leaves.front()->label;
}

// ---------------------------------------------------------------------------
// Splitting

namespace {

bool same_end(const std::optional<AlgebraicNumber>& a, bool a_closed, const std::optional<AlgebraicNumber>& b,
              bool b_closed) {
  if (!a || !b) return !a && !b;
  return a_closed == b_closed && compare(*a, *b) == 0;
}

}  // namespace

std::vector<PendingCell> split_region(const PendingCell& outer, const PendingCell& inner, const SamplePoint& r,
                                      SplitMode mode) {
  if (outer.size() != inner.size()) throw DomainError("split_region: dimension mismatch");
  std::vector<PendingCell> out;
  for (std::size_t idx = 0; idx < outer.size(); ++idx) {
    const SymbolicInterval& O = outer[idx];
    const SymbolicInterval& I = inner[idx];
    std::size_t j = O.level;
    SamplePoint base = prefix(r, j - 1);
    auto ro = O.realize(base);
    auto ri = I.realize(base);
    if (!ro || !ri) throw Error("split_region: bound undefined at the sample");

    auto emit = [&](SymbolicInterval piece) {
      auto rp = piece.realize(base);
      if (!rp || rp->empty()) return;
      if (!piece.is_section() && rp->is_point()) piece = SymbolicInterval::section(*piece.lower);
      PendingCell cell(inner.begin(), inner.begin() + static_cast<std::ptrdiff_t>(idx));
      cell.push_back(std::move(piece));
      cell.insert(cell.end(), outer.begin() + static_cast<std::ptrdiff_t>(idx) + 1, outer.end());
      out.push_back(std::move(cell));
    };

    if (!same_end(ro->lower, O.lower_closed, ri->lower, I.lower_closed)) {
      if (!I.lower) throw Error("split_region: inner cell exceeds the region");
      SymbolicInterval piece;
      piece.level = j;
      piece.lower = O.lower;
      piece.lower_closed = O.lower_closed;
      piece.upper = I.lower;
      piece.upper_closed = mode == SplitMode::Improved && !I.lower_closed;
      emit(std::move(piece));
      if (mode == SplitMode::Classic && !I.is_section()) emit(SymbolicInterval::section(*I.lower));
    }
    if (!same_end(ro->upper, O.upper_closed, ri->upper, I.upper_closed)) {
      if (!I.upper) throw Error("split_region: inner cell exceeds the region");
      SymbolicInterval piece;
      piece.level = j;
      piece.lower = I.upper;
      piece.lower_closed = mode == SplitMode::Improved && !I.upper_closed;
      piece.upper = O.upper;
      piece.upper_closed = O.upper_closed;
      emit(std::move(piece));
      if (mode == SplitMode::Classic && !I.is_section()) emit(SymbolicInterval::section(*I.upper));
    }
  }
  return out;
}

std::optional<SamplePoint> choose_sample(const SamplePoint& s, const PendingCell& region) {
  SamplePoint r = s;
  for (const auto& I : region) {
    if (I.level != r.size() + 1) throw DomainError("choose_sample: region levels out of order");
    auto R = I.realize(r);
    if (!R) throw Error("choose_sample: bound " + I.to_string() + " undefined over " + to_string(r));
    if (R->empty()) return std::nullopt;
    r.push_back(R->sample());
  }
  return r;
}

// ---------------------------------------------------------------------------
// Solver

namespace {

// The leaf ending the only path of t when that path is exactly `path`.
const NuCadTree* single_cell(const NuCadTree& t, const PendingCell& path) {
  const NuCadTree* node = &t;
  for (const auto& I : path) {
    if (node->is_leaf() || node->children.size() != 1 || !(node->children.front().interval == I)) return nullptr;
    node = &node->children.front();
  }
  return node->is_leaf() ? node : nullptr;
}

// Attaches the decomposition of the piece q; a piece explored as one cell becomes a leaf.
void attach(NuCadTree& tree, const PendingCell& q, Decomposition&& sub) {
  if (const NuCadTree* leaf = single_cell(sub.tree, q)) {
    insert_path(tree, q, *leaf, sub.sample);
    return;
  }
  insert_path(tree, q, std::move(sub.tree), sub.sample);
}

}  // namespace

NuCadSolver::NuCadSolver(PrenexFormula problem, SolverConfig config)
    : problem_(std::move(problem)),
      config_(config),
      blocks_(problem_.blocks()),
      start_(std::chrono::steady_clock::now()),
      root_seconds_at_start_(real_root_seconds()),
      steps_(std::make_shared<std::atomic<std::uint64_t>>(0)) {
  stats_.atoms = problem_.matrix.atom_count();
}

void NuCadSolver::tick() {
  ++stats_.cells;
  std::uint64_t n = ++*steps_;
  if (config_.step_budget && n > config_.step_budget) {
    stats_.aborted = true;
    throw BudgetExceeded("step budget of " + std::to_string(config_.step_budget) + " cells exhausted");
  }
  if (config_.timeout_seconds > 0 && seconds_since(start_) > config_.timeout_seconds) {
    stats_.aborted = true;
    throw BudgetExceeded("timeout after " + std::to_string(config_.timeout_seconds) + " s");
  }
}

void NuCadSolver::finish_timers() {
  stats_.total_seconds = seconds_since(start_);
  stats_.real_root_seconds = real_root_seconds() - root_seconds_at_start_ + worker_root_seconds_;
  stats_.non_algebraic_seconds = std::max(0.0, stats_.total_seconds - stats_.real_root_seconds);
}

CellResult NuCadSolver::construct(const ProjectionSet& P, const SamplePoint& r, std::size_t top,
                                  std::size_t bottom) {
  CellResult cell = construct_cell(P, r, top, bottom, config_.split == SplitMode::Improved);
  stats_.symbolic_intervals += cell.intervals.size();
  for (const auto& I : cell.intervals)
    if (I.is_section()) ++stats_.sections;
  return cell;
}

void NuCadSolver::absorb_region(ProjectionSet& P, const PendingCell& region) const {
  bool flags = config_.split == SplitMode::Improved;
  for (const auto& I : region) {
    if (I.lower) P.insert(I.lower->poly, flags && I.lower_closed);
    if (I.upper) P.insert(I.upper->poly, flags && I.upper_closed);
  }
}

std::optional<Decomposition> NuCadSolver::nucad_full(const SamplePoint& s, const PendingCell& region) {
  auto r = choose_sample(s, region);
  if (!r) return std::nullopt;
  tick();
  std::size_t i = s.size(), top = i + region.size();
  QuantifierResult rec = nucad_recurse(*r);
  ProjectionSet P = std::move(rec.projection);
  absorb_region(P, region);
  CellResult cell = construct(P, *r, top, i + 1);

  Decomposition out{std::move(cell.residual), NuCadTree::branch(s, top), *r};
  insert_path(out.tree, cell.intervals, NuCadTree::leaf(rec.value, *r), *r);
  std::vector<PendingCell> pieces = split_region(region, cell.intervals, *r, config_.split);
  if (config_.threads > 1 && depth_ == 0 && pieces.size() > 1)
    return explore_parallel(s, std::move(pieces), std::move(out));
  for (const auto& q : pieces) {
    ++depth_;
    auto sub = nucad_full(s, q);
    --depth_;
    if (!sub) continue;
    out.projection.merge(sub->projection);
    attach(out.tree, q, std::move(*sub));
  }
  return out;
}

std::optional<Decomposition> NuCadSolver::explore_parallel(const SamplePoint& s, std::vector<PendingCell> pieces,
                                                           Decomposition out) {
  struct Outcome {
    std::optional<Decomposition> result;
    SolveStats stats;
    std::optional<SamplePoint> witness;
  };
  std::vector<std::future<Outcome>> futures;
  std::vector<Outcome> outcomes(pieces.size());
  std::size_t next = 0;
  auto launch = [&](std::size_t k) {
    return std::async(std::launch::async, [this, s, piece = pieces[k]]() {
      NuCadSolver worker(problem_, config_);
      worker.start_ = start_;
      worker.steps_ = steps_;
      worker.depth_ = 1;
      double before = real_root_seconds();
      Outcome o;
      o.result = worker.nucad_full(s, piece);
      worker.stats_.real_root_seconds = real_root_seconds() - before;
      o.stats = worker.stats_;
      o.witness = worker.witness_;
      return o;
    });
  };
  // bounded number of workers; results are consumed in emission order
  while (next < pieces.size() && next < config_.threads) futures.push_back(launch(next++));
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    outcomes[k] = futures[k].get();
    if (next < pieces.size()) futures.push_back(launch(next++));
  }
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    Outcome& o = outcomes[k];
    SolveStats st = o.stats;
    worker_root_seconds_ += st.real_root_seconds;
    st.real_root_seconds = st.non_algebraic_seconds = st.total_seconds = 0;
    st.atoms = 0;
    stats_ += st;
    if (!witness_ && o.witness) witness_ = o.witness;
    if (!o.result) continue;
    out.projection.merge(o.result->projection);
    attach(out.tree, pieces[k], std::move(*o.result));
  }
  return out;
}

QuantifierResult NuCadSolver::nucad_recurse(const SamplePoint& s) {
  TruthValue t = evaluate(problem_.matrix, s);
  if (t != TruthValue::Undetermined) {
    Implicant imp = implicant(problem_.matrix, s);
    if (t == TruthValue::True && !witness_) {
      SamplePoint w = s;
      while (w.size() < problem_.variable_count()) w.emplace_back(0L);
      witness_ = std::move(w);
    }
    return {ProjectionSet(imp.polynomials()), t == TruthValue::True};
  }
  for (const auto& b : blocks_) {
    if (b.first != s.size() + 1) continue;
    PendingCell region;
    for (std::size_t l = b.first; l <= b.last; ++l) region.push_back(SymbolicInterval::full(l));
    return *nucad_quantifier(b.quantifier, s, region);
  }
  throw Error("nucad_recurse: matrix undetermined at " + to_string(s) + " with no quantifier block to expand");
}

std::optional<QuantifierResult> NuCadSolver::nucad_quantifier(Quantifier q, const SamplePoint& s,
                                                              const PendingCell& region) {
  auto r = choose_sample(s, region);
  if (!r) return std::nullopt;
  tick();
  std::size_t i = s.size(), top = i + region.size();
  QuantifierResult rec = nucad_recurse(*r);
  bool witness_value = q == Quantifier::Exists;
  if (rec.value == witness_value) {
    if (i == 0 && q == Quantifier::Exists && !block_witness_) block_witness_ = *r;
    CellResult c = construct(rec.projection, *r, top, i + 1);
    return QuantifierResult{std::move(c.residual), rec.value};
  }
  ProjectionSet P = std::move(rec.projection);
  absorb_region(P, region);
  CellResult cell = construct(P, *r, top, i + 1);
  QuantifierResult out{std::move(cell.residual), !witness_value};
  for (const auto& piece : split_region(region, cell.intervals, *r, config_.split)) {
    auto sub = nucad_quantifier(q, s, piece);
    if (!sub) continue;
    if (sub->value == witness_value) return sub;
    out.projection.merge(sub->projection);
  }
  return out;
}

NuCadTree NuCadSolver::decompose() {
  if (problem_.free_count == 0) throw DomainError("decompose: the problem has no free variables");
  start_ = std::chrono::steady_clock::now();
  root_seconds_at_start_ = real_root_seconds();
  PendingCell region;
  for (std::size_t l = 1; l <= problem_.free_count; ++l) region.push_back(SymbolicInterval::full(l));
  try {
    auto d = nucad_full({}, region);
    finish_timers();
    return std::move(d->tree);
  } catch (...) {
    finish_timers();
    throw;
  }
}

bool NuCadSolver::decide() {
  if (problem_.free_count != 0) throw DomainError("decide: the problem has free variables");
  start_ = std::chrono::steady_clock::now();
  root_seconds_at_start_ = real_root_seconds();
  try {
    bool v = nucad_recurse({}).value;
    finish_timers();
    return v;
  } catch (...) {
    finish_timers();
    throw;
  }
}

}  // namespace nucad
