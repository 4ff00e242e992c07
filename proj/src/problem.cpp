#include "drfeas/problem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace drfeas::cli {

using nlohmann::json;

namespace {

bool same(const Vector& a, const Vector& b) { return a.size() == b.size() && a == b; }

bool same(const std::vector<Vector>& a, const std::vector<Vector>& b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(),
                                            [](const Vector& u, const Vector& v) { return same(u, v); });
}

bool same(const ConstraintSpec& a, const ConstraintSpec& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, HalfSpaceSpec> || std::is_same_v<T, HyperplaneSpec>) {
          return same(x.normal, y.normal) && x.offset == y.offset;
        } else if constexpr (std::is_same_v<T, SlabSpec>) {
          return same(x.normal, y.normal) && x.lower == y.lower && x.upper == y.upper;
        } else if constexpr (std::is_same_v<T, ConeSpec>) {
          return same(x.apex, y.apex) && same(x.first, y.first) && same(x.second, y.second) &&
                 x.through_points == y.through_points;
        } else {
          return x.block_dim == y.block_dim && x.blocks == y.blocks;
        }
      },
      a);
}

bool same(const SetSpec& a, const SetSpec& b) {
  if (a.value.index() != b.value.index()) return false;
  return std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.value);
        if constexpr (std::is_same_v<T, FiniteSpec>) {
          return same(x.points, y.points);
        } else if constexpr (std::is_same_v<T, SphereSpec>) {
          return same(x.center, y.center) && x.radius == y.radius;
        } else if constexpr (std::is_same_v<T, KnapsackSpec>) {
          return same(x.weights, y.weights) && x.threshold == y.threshold && x.cap == y.cap;
        } else if constexpr (std::is_same_v<T, TriadicSpec>) {
          return x.depth == y.depth;
        } else if constexpr (std::is_same_v<T, ProductSpec>) {
          return x.components.size() == y.components.size() &&
                 std::equal(x.components.begin(), x.components.end(), y.components.begin(),
                            [](const SetSpec& u, const SetSpec& v) { return same(u, v); });
        } else {
          return same(x, y);
        }
      },
      a.value);
}

bool same(const ConfigOverrides& a, const ConfigOverrides& b) {
  return a.max_iter == b.max_iter && a.tol == b.tol && a.cycle_tol == b.cycle_tol &&
         a.window == b.window && a.tie_rule == b.tie_rule && a.reflect_order == b.reflect_order &&
         a.seed == b.seed && a.norm_limit == b.norm_limit;
}

// --- reading ---------------------------------------------------------------

/// A JSON object being read, with its path for diagnostics.
class Node {
 public:
  Node(const json& j, std::string path, const std::string& source)
      : j_(j), path_(std::move(path)), source_(source) {
    if (!j_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& what) const { fail_at(path_, what); }
  [[noreturn]] void fail_at(const std::string& path, const std::string& what) const {
    throw ProblemError(source_ + ": " + (path.empty() ? "<root>" : path) + ": " + what);
  }

  std::string child_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void allow(std::initializer_list<const char*> keys) const {
    for (const auto& item : j_.items()) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return item.key() == k; }))
        fail("unknown field '" + item.key() + "'");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }

  const json& need(const char* key) const {
    auto it = j_.find(key);
    if (it == j_.end()) fail("missing field '" + std::string(key) + "'");
    return *it;
  }

  Node object(const char* key) const { return Node(need(key), child_path(key), source_); }

  std::string string(const char* key) const {
    const json& v = need(key);
    if (!v.is_string()) fail_at(child_path(key), "expected a string");
    return v.get<std::string>();
  }

  double number(const char* key) const { return number_value(need(key), child_path(key)); }

  double number_or(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

  std::int64_t integer(const char* key, std::int64_t min) const {
    const json& v = need(key);
    if (!v.is_number_integer()) fail_at(child_path(key), "expected an integer");
    std::int64_t n = v.is_number_unsigned() ? static_cast<std::int64_t>(v.get<std::uint64_t>())
                                            : v.get<std::int64_t>();
    if (n < min) fail_at(child_path(key), "must be at least " + std::to_string(min));
    return n;
  }

  std::uint64_t unsigned_integer(const char* key) const {
    const json& v = need(key);
    if (!v.is_number_unsigned()) fail_at(child_path(key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  Vector vector(const char* key) const { return vector_value(need(key), child_path(key)); }

  std::vector<Vector> vectors(const char* key) const {
    const json& v = need(key);
    std::string p = child_path(key);
    if (!v.is_array() || v.empty()) fail_at(p, "expected a non-empty array of points");
    std::vector<Vector> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(vector_value(v[i], p + "[" + std::to_string(i) + "]"));
      if (out.back().size() != out.front().size())
        fail_at(p + "[" + std::to_string(i) + "]", "dimension " + std::to_string(out.back().size()) +
                                                       " differs from " + std::to_string(out.front().size()));
    }
    return out;
  }

  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }
  const std::string& source() const { return source_; }

 private:
  double number_value(const json& v, const std::string& p) const {
    if (!v.is_number()) fail_at(p, "expected a number");
    double d = v.get<double>();
    if (!std::isfinite(d)) fail_at(p, "expected a finite number");
    return d;
  }

  Vector vector_value(const json& v, const std::string& p) const {
    if (!v.is_array() || v.empty()) fail_at(p, "expected a non-empty array of numbers");
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
      out[static_cast<Eigen::Index>(i)] = number_value(v[i], p + "[" + std::to_string(i) + "]");
    return out;
  }

  const json& j_;
  std::string path_;
  const std::string& source_;
};

ConstraintSpec read_constraint(const Node& n) {
  std::string type = n.string("type");
  if (type == "halfspace" || type == "hyperplane") {
    n.allow({"type", "normal", "offset"});
    Vector a = n.vector("normal");
    double b = n.number_or("offset", 0.0);
    if (type == "halfspace") return HalfSpaceSpec{a, b};
    return HyperplaneSpec{a, b};
  }
  if (type == "slab") {
    n.allow({"type", "normal", "lower", "upper"});
    return SlabSpec{n.vector("normal"), n.number("lower"), n.number("upper")};
  }
  if (type == "cone") {
    n.allow({"type", "apex", "through", "directions"});
    bool through = n.has("through");
    if (through == n.has("directions")) n.fail("give exactly one of 'through' and 'directions'");
    std::vector<Vector> pair = n.vectors(through ? "through" : "directions");
    if (pair.size() != 2) n.fail_at(n.child_path(through ? "through" : "directions"), "expected two points");
    return ConeSpec{n.vector("apex"), pair[0], pair[1], through};
  }
  if (type == "diagonal") {
    n.allow({"type", "block_dim", "blocks"});
    auto blocks = n.has("blocks") ? n.integer("blocks", 2) : 2;
    return DiagonalSpec{static_cast<Eigen::Index>(n.integer("block_dim", 1)),
                        static_cast<Eigen::Index>(blocks)};
  }
  n.fail_at(n.child_path("type"), "unknown constraint type '" + type + "'");
}

bool is_constraint_type(const std::string& t) {
  return t == "halfspace" || t == "hyperplane" || t == "slab" || t == "cone" || t == "diagonal";
}

SetSpec read_set(const Node& n, bool allow_constraint) {
  std::string type = n.string("type");
  if (type == "finite") {
    n.allow({"type", "points"});
    return {FiniteSpec{n.vectors("points")}};
  }
  if (type == "sphere") {
    n.allow({"type", "center", "radius"});
    return {SphereSpec{n.vector("center"), n.number("radius")}};
  }
  if (type == "knapsack") {
    n.allow({"type", "weights", "threshold", "cap"});
    int cap = n.has("cap") ? static_cast<int>(n.integer("cap", 1)) : BinaryKnapsackSet::kDefaultCap;
    return {KnapsackSpec{n.vector("weights"), n.number("threshold"), cap}};
  }
  if (type == "triadic") {
    n.allow({"type", "depth"});
    int depth = n.has("depth") ? static_cast<int>(n.integer("depth", 0)) : TriadicSet::kDefaultDepth;
    return {TriadicSpec{depth}};
  }
  if (type == "product") {
    n.allow({"type", "components"});
    const json& c = n.need("components");
    std::string p = n.child_path("components");
    if (!c.is_array() || c.empty()) n.fail_at(p, "expected a non-empty array of sets");
    ProductSpec prod;
    for (std::size_t i = 0; i < c.size(); ++i)
      prod.components.push_back(read_set(Node(c[i], p + "[" + std::to_string(i) + "]", n.source()), true));
    return {std::move(prod)};
  }
  if (allow_constraint && is_constraint_type(type)) return {read_constraint(n)};
  n.fail_at(n.child_path("type"), "unknown set type '" + type + "'");
}

ConfigOverrides read_config(const Node& n) {
  n.allow({"max_iter", "tol", "cycle_tol", "window", "tie_rule", "reflect_order", "seed", "norm_limit"});
  ConfigOverrides c;
  if (n.has("max_iter")) c.max_iter = static_cast<std::size_t>(n.integer("max_iter", 1));
  if (n.has("tol")) c.tol = n.number("tol");
  if (n.has("cycle_tol")) c.cycle_tol = n.number("cycle_tol");
  if (n.has("window")) c.window = static_cast<std::size_t>(n.integer("window", 2));
  if (n.has("norm_limit")) c.norm_limit = n.number("norm_limit");
  if (n.has("seed")) c.seed = n.unsigned_integer("seed");
  try {
    if (n.has("tie_rule")) c.tie_rule = parse_tie_rule(n.string("tie_rule"));
  } catch (const InvalidArgument& e) {
    n.fail_at(n.child_path("tie_rule"), e.what());
  }
  try {
    if (n.has("reflect_order")) c.reflect_order = parse_reflect_order(n.string("reflect_order"));
  } catch (const InvalidArgument& e) {
    n.fail_at(n.child_path("reflect_order"), e.what());
  }
  for (const char* key : {"tol", "cycle_tol", "norm_limit"}) {
    if (n.has(key) && !(n.number(key) > 0.0)) n.fail_at(n.child_path(key), "must be positive");
  }
  return c;
}

// --- writing ---------------------------------------------------------------

json to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json to_json(const ConstraintSpec& c) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, HalfSpaceSpec>) {
          return {{"type", "halfspace"}, {"normal", to_json(x.normal)}, {"offset", x.offset}};
        } else if constexpr (std::is_same_v<T, HyperplaneSpec>) {
          return {{"type", "hyperplane"}, {"normal", to_json(x.normal)}, {"offset", x.offset}};
        } else if constexpr (std::is_same_v<T, SlabSpec>) {
          return {{"type", "slab"}, {"normal", to_json(x.normal)}, {"lower", x.lower}, {"upper", x.upper}};
        } else if constexpr (std::is_same_v<T, ConeSpec>) {
          return {{"type", "cone"},
                  {"apex", to_json(x.apex)},
                  {x.through_points ? "through" : "directions", json::array({to_json(x.first), to_json(x.second)})}};
        } else {
          return {{"type", "diagonal"}, {"block_dim", x.block_dim}, {"blocks", x.blocks}};
        }
      },
      c);
}

json to_json(const SetSpec& s) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FiniteSpec>) {
          json pts = json::array();
          for (const auto& p : x.points) pts.push_back(to_json(p));
          return {{"type", "finite"}, {"points", pts}};
        } else if constexpr (std::is_same_v<T, SphereSpec>) {
          return {{"type", "sphere"}, {"center", to_json(x.center)}, {"radius", x.radius}};
        } else if constexpr (std::is_same_v<T, KnapsackSpec>) {
          return {{"type", "knapsack"}, {"weights", to_json(x.weights)}, {"threshold", x.threshold}, {"cap", x.cap}};
        } else if constexpr (std::is_same_v<T, TriadicSpec>) {
          return {{"type", "triadic"}, {"depth", x.depth}};
        } else if constexpr (std::is_same_v<T, ProductSpec>) {
          json comps = json::array();
          for (const auto& c : x.components) comps.push_back(to_json(c));
          return {{"type", "product"}, {"components", comps}};
        } else {
          return to_json(x);
        }
      },
      s.value);
}

json to_json(const ConfigOverrides& c) {
  json j = json::object();
  if (c.max_iter) j["max_iter"] = *c.max_iter;
  if (c.tol) j["tol"] = *c.tol;
  if (c.cycle_tol) j["cycle_tol"] = *c.cycle_tol;
  if (c.window) j["window"] = *c.window;
  if (c.tie_rule) j["tie_rule"] = to_string(*c.tie_rule);
  if (c.reflect_order) j["reflect_order"] = to_string(*c.reflect_order);
  if (c.seed) j["seed"] = *c.seed;
  if (c.norm_limit) j["norm_limit"] = *c.norm_limit;
  return j;
}

// --- building --------------------------------------------------------------

ConstraintPtr build_constraint(const ConstraintSpec& c) {
  return std::visit(
      [](const auto& x) -> ConstraintPtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, HalfSpaceSpec>) {
          return std::make_shared<HalfSpaceConstraint>(HalfSpaced(x.normal, x.offset));
        } else if constexpr (std::is_same_v<T, HyperplaneSpec>) {
          return std::make_shared<HyperplaneConstraint>(Hyperplaned(x.normal, x.offset));
        } else if constexpr (std::is_same_v<T, SlabSpec>) {
          return std::make_shared<Slab>(x.normal, x.lower, x.upper);
        } else if constexpr (std::is_same_v<T, ConeSpec>) {
          if (x.through_points)
            return std::make_shared<PlanarCone>(PlanarCone::through_points(x.apex, x.first, x.second));
          return std::make_shared<PlanarCone>(x.apex, x.first, x.second);
        } else {
          return std::make_shared<DiagonalSet>(x.block_dim, x.blocks);
        }
      },
      c);
}

SetPtr build_set(const SetSpec& s) {
  return std::visit(
      [](const auto& x) -> SetPtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FiniteSpec>) {
          return std::make_shared<FinitePointSet>(x.points);
        } else if constexpr (std::is_same_v<T, SphereSpec>) {
          return std::make_shared<Sphere>(x.center, x.radius);
        } else if constexpr (std::is_same_v<T, KnapsackSpec>) {
          return std::make_shared<BinaryKnapsackSet>(x.weights, x.threshold, x.cap);
        } else if constexpr (std::is_same_v<T, TriadicSpec>) {
          return std::make_shared<TriadicSet>(x.depth);
        } else if constexpr (std::is_same_v<T, ProductSpec>) {
          std::vector<SetPtr> parts;
          for (const auto& c : x.components) parts.push_back(build_set(c));
          return std::make_shared<ProductSet>(std::move(parts));
        } else {
          return std::make_shared<ConstraintSet>(build_constraint(x));
        }
      },
      s.value);
}

std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()) && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

}  // namespace

void ConfigOverrides::apply(SolverConfig& cfg) const {
  if (max_iter) cfg.max_iter = *max_iter;
  if (tol) cfg.membership_tol = *tol;
  if (cycle_tol) cfg.cycle_tol = *cycle_tol;
  if (window) cfg.divergence_window = *window;
  if (tie_rule) cfg.tie_rule = *tie_rule;
  if (reflect_order) cfg.reflect_order = *reflect_order;
  if (seed) cfg.seed = *seed;
  if (norm_limit) cfg.norm_limit = *norm_limit;
}

bool operator==(const ProblemFile& a, const ProblemFile& b) {
  return a.name == b.name && same(a.constraint, b.constraint) && same(a.set, b.set) && same(a.x0, b.x0) &&
         same(a.config, b.config);
}

ProblemFile parse_problem(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    auto colon = msg.find(": ");
    if (msg.find("parse error") != std::string::npos && colon != std::string::npos) msg = msg.substr(colon + 2);
    throw ProblemError(source + ":" + line_column(text, e.byte) + ": malformed JSON: " + msg);
  }

  Node root(j, "", source);
  root.allow({"name", "constraint", "set", "x0", "config"});
  ProblemFile p;
  if (root.has("name")) p.name = root.string("name");
  p.constraint = read_constraint(root.object("constraint"));
  p.set = read_set(root.object("set"), false);
  p.x0 = root.vector("x0");
  if (root.has("config")) p.config = read_config(root.object("config"));
  return p;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ProblemError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str(), path);
}

std::string serialize_problem(const ProblemFile& p) {
  json j = json::object();
  if (!p.name.empty()) j["name"] = p.name;
  j["constraint"] = to_json(p.constraint);
  j["set"] = to_json(p.set);
  j["x0"] = to_json(p.x0);
  json cfg = to_json(p.config);
  if (!cfg.empty()) j["config"] = cfg;
  return j.dump(2) + "\n";
}

Problem build_problem(const ProblemFile& file) {
  Problem out;
  try {
    out.constraint = build_constraint(file.constraint);
    out.set = build_set(file.set);
  } catch (const Error& e) {
    throw ProblemError(std::string("invalid problem: ") + e.what());
  }
  auto n = out.constraint->dim();
  if (out.set->dim() != n)
    throw ProblemError("set has dimension " + std::to_string(out.set->dim()) + " but the constraint has " +
                       std::to_string(n));
  if (file.x0.size() != n)
    throw ProblemError("x0 has dimension " + std::to_string(file.x0.size()) + " but the constraint has " +
                       std::to_string(n));
  out.x0 = file.x0;
  file.config.apply(out.config);
  try {
    out.config.validate();
  } catch (const InvalidArgument& e) {
    throw ProblemError(std::string("invalid config: ") + e.what());
  }
  return out;
}

}  // namespace drfeas::cli
