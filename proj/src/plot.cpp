#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "nucad/errors.hpp"
#include "nucad/frontend.hpp"
#include "nucad/oracle.hpp"

namespace nucad {

namespace {

constexpr const char* kTrueFill = "#5cb85c";
constexpr const char* kFalseFill = "#d9534f";
constexpr const char* kStroke = "#222222";

struct Axis {
  double lo = -5, hi = 5;
  bool seen = false;

  void add(const std::optional<AlgebraicNumber>& a) {
    if (!a) return;
    double v = a->approx();
    if (!seen) {
      lo = hi = v;
      seen = true;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }

  void pad() {
    if (!seen) return;
    double w = hi - lo;
    if (w <= 0) {
      lo -= 1;
      hi += 1;
    } else {
      lo -= 0.2 * w;
      hi += 0.2 * w;
    }
  }
};

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

struct Cell {
  std::optional<RealizedInterval> x;
  const LeafCell* leaf = nullptr;
};

std::string header(int w, int h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) + "\" height=\"" +
         std::to_string(h) + "\" viewBox=\"0 0 " + std::to_string(w) + " " + std::to_string(h) +
         "\" shape-rendering=\"crispEdges\">\n";
}

std::string rect(int x, int y, int w, int h, const char* fill) {
  return "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) + "\" width=\"" + std::to_string(w) +
         "\" height=\"" + std::to_string(h) + "\" fill=\"" + fill + "\"/>\n";
}

std::string caption(const std::string& text, int x, int y) {
  return "<text x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
         "\" font-family=\"monospace\" font-size=\"11\" fill=\"" + kStroke + "\">" + text + "</text>\n";
}

std::string render_1d(const std::vector<LeafCell>& leaves, const VarOrder& vars, const PlotOptions& opt) {
  std::vector<Cell> cells;
  Axis ax;
  for (const auto& l : leaves) {
    Cell c{l.cell.at(0).realize({}), &l};
    if (c.x) {
      ax.add(c.x->lower);
      ax.add(c.x->upper);
    }
    cells.push_back(std::move(c));
  }
  ax.pad();
  const int n = opt.resolution, top = 10, height = 40;
  double dx = (ax.hi - ax.lo) / n;
  std::string out = header(n, top + height + 30);
  auto column_of = [&](double v) { return static_cast<int>(std::floor((v - ax.lo) / dx)); };
  int run_start = 0;
  const char* run_fill = nullptr;
  std::vector<int> owner(n, -1);
  for (int i = 0; i < n; ++i) {
    AlgebraicNumber x(Rational(ax.lo + (i + 0.5) * dx));
    for (std::size_t k = 0; k < cells.size(); ++k)
      if (cells[k].x && cells[k].x->contains(x)) {
        owner[i] = static_cast<int>(k);
        break;
      }
    const char* fill = owner[i] < 0 ? "#ffffff" : cells[owner[i]].leaf->label ? kTrueFill : kFalseFill;
    if (fill != run_fill) {
      if (run_fill) out += rect(run_start, top, i - run_start, height, run_fill);
      run_start = i;
      run_fill = fill;
    }
  }
  if (run_fill) out += rect(run_start, top, n - run_start, height, run_fill);
  // sections are single points; draw them as ticks in their own colour
  for (const auto& c : cells) {
    if (!c.x || !c.x->lower || !c.x->upper || compare(*c.x->lower, *c.x->upper) != 0) continue;
    int i = column_of(c.x->lower->approx());
    if (i < 0 || i >= n) continue;
    out += rect(i, top - 4, 1, height + 8, kStroke);
    out += rect(i, top, 1, height, c.leaf->label ? kTrueFill : kFalseFill);
  }
  if (opt.samples)
    for (const auto& c : cells) {
      const auto& s = c.leaf->leaf->sample;
      if (s.empty()) continue;
      double v = s[0].approx();
      if (v < ax.lo || v > ax.hi) continue;
      out += "<circle cx=\"" + num((v - ax.lo) / dx) + "\" cy=\"" + std::to_string(top + height / 2) +
             "\" r=\"2.5\" fill=\"" + kStroke + "\"/>\n";
    }
  out += caption(vars.name(1) + " in [" + num(ax.lo) + ", " + num(ax.hi) + "]", 4, top + height + 20);
  return out + "</svg>\n";
}

std::string render_2d(const std::vector<LeafCell>& leaves, const VarOrder& vars, const PlotOptions& opt) {
  std::vector<Cell> cells;
  Axis ax, ay;
  for (const auto& l : leaves) {
    Cell c{l.cell.at(0).realize({}), &l};
    if (c.x) {
      ax.add(c.x->lower);
      ax.add(c.x->upper);
    }
    const SamplePoint& s = l.leaf->sample;
    if (s.size() >= 1)
      if (auto y = l.cell.at(1).realize({s[0]})) {
        ay.add(y->lower);
        ay.add(y->upper);
      }
    cells.push_back(std::move(c));
  }
  ax.pad();
  ay.pad();
  const int n = opt.resolution, margin = 20;
  double dx = (ax.hi - ax.lo) / n, dy = (ay.hi - ay.lo) / n;
  // owner[j * n + i]: leaf covering pixel column i, row j (row 0 at the top)
  std::vector<int> owner(static_cast<std::size_t>(n) * n, -1);
  for (int i = 0; i < n; ++i) {
    Rational xq(ax.lo + (i + 0.5) * dx);
    AlgebraicNumber x(xq);
    SamplePoint base{x};
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (!cells[k].x || !cells[k].x->contains(x)) continue;
      auto y = cells[k].leaf->cell[1].realize(base);
      if (!y) continue;
      bool point = y->lower && y->upper && compare(*y->lower, *y->upper) == 0;
      if (point) continue;
      double lo = y->lower ? y->lower->approx() : -INFINITY;
      double hi = y->upper ? y->upper->approx() : INFINITY;
      for (int j = 0; j < n; ++j) {
        double yc = ay.hi - (j + 0.5) * dy;
        int& o = owner[static_cast<std::size_t>(j) * n + i];
        if (o < 0 && yc > lo && yc < hi) o = static_cast<int>(k);
      }
    }
  }
  auto at = [&](int i, int j) { return owner[static_cast<std::size_t>(j) * n + i]; };
  auto fill_of = [&](int o) { return o < 0 ? "#ffffff" : cells[o].leaf->label ? kTrueFill : kFalseFill; };

  std::string out = header(n, n + margin);
  for (int i = 0; i < n; ++i) {
    int start = 0;
    for (int j = 1; j <= n; ++j)
      if (j == n || fill_of(at(i, j)) != fill_of(at(i, start))) {
        out += rect(i, start, 1, j - start, fill_of(at(i, start)));
        start = j;
      }
  }
  for (int i = 0; i < n; ++i) {
    int start = -1;
    for (int j = 0; j <= n; ++j) {
      bool edge = j < n && ((i + 1 < n && at(i, j) != at(i + 1, j)) || (j + 1 < n && at(i, j) != at(i, j + 1)));
      if (edge && start < 0) start = j;
      if (!edge && start >= 0) {
        out += rect(i, start, 1, j - start, kStroke);
        start = -1;
      }
    }
  }
  if (opt.samples)
    for (const auto& c : cells) {
      const auto& s = c.leaf->leaf->sample;
      if (s.size() < 2) continue;
      double x = s[0].approx(), y = s[1].approx();
      if (x < ax.lo || x > ax.hi || y < ay.lo || y > ay.hi) continue;
      out += "<circle cx=\"" + num((x - ax.lo) / dx) + "\" cy=\"" + num((ay.hi - y) / dy) + "\" r=\"2.5\" fill=\"" +
             kStroke + "\"/>\n";
    }
  out += caption(vars.name(1) + " in [" + num(ax.lo) + ", " + num(ax.hi) + "], " + vars.name(2) + " in [" +
                     num(ay.lo) + ", " + num(ay.hi) + "]",
                 4, n + 14);
  return out + "</svg>\n";
}

nlohmann::json bound_json(const std::optional<IndexedRoot>& r, const VarOrder& vars) {
  if (!r) return nullptr;
  return {{"poly", r->poly.to_string(&vars)}, {"index", r->index}};
}

nlohmann::json node_json(const NuCadTree& t, const VarOrder& vars, bool root) {
  nlohmann::json j;
  if (!root) {
    const SymbolicInterval& I = t.interval;
    j["level"] = I.level;
    j["interval"] = I.to_string(&vars);
    j["lower"] = bound_json(I.lower, vars);
    j["upper"] = bound_json(I.upper, vars);
    j["lower_closed"] = I.lower_closed;
    j["upper_closed"] = I.upper_closed;
  }
  if (t.is_leaf()) {
    j["label"] = *t.label;
    nlohmann::json s = nlohmann::json::array();
    for (const auto& a : t.sample) s.push_back(a.to_decimal());
    j["sample"] = s;
    return j;
  }
  if (t.top) j["top"] = t.top;
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : t.children) cs.push_back(node_json(c, vars, false));
  j["children"] = cs;
  return j;
}

}  // namespace

std::string render_svg(const NuCadTree& t, const VarOrder& vars, std::size_t dimension, const PlotOptions& opt) {
  if (dimension == 0 || dimension > 2)
    throw UnsupportedError("plots need one or two dimensions, got " + std::to_string(dimension));
  if (opt.resolution < 2) throw DomainError("plot resolution must be at least 2");
  std::vector<LeafCell> leaves = leaf_cells(t);
  if (t.is_leaf()) {
    // a single leaf covers everything
    LeafCell& l = leaves.front();
    for (std::size_t d = 1; d <= dimension; ++d) l.cell.push_back(SymbolicInterval::full(d));
  }
  return dimension == 1 ? render_1d(leaves, vars, opt) : render_2d(leaves, vars, opt);
}

std::string tree_to_json(const NuCadTree& t, const VarOrder& vars) { return node_json(t, vars, true).dump(1); }

}  // namespace nucad
