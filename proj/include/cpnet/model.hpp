#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace cpnet {

using BigInt = boost::multiprecision::cpp_int;

using VarId = int;    // index into CPNet::variables
using ValueId = int;  // index into a variable's domain

// Input that is syntactically fine but semantically unusable (unknown
// variable, evidence outside the domain, equal outcomes where distinct
// ones are required, ...).
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Desk-scale guard tripped (outcome-space cap, ranking-count cap).
struct ScaleError : std::runtime_error {
  explicit ScaleError(const std::string& what) : std::runtime_error(what) {}
};

struct Variable {
  std::string name;
  std::vector<std::string> values;

  bool binary() const { return values.size() == 2; }

  std::optional<ValueId> value_index(const std::string& v) const {
    for (ValueId i = 0; i < static_cast<ValueId>(values.size()); ++i)
      if (values[i] == v) return i;
    return std::nullopt;
  }
};

enum class Cmp { Better, Worse, Equal, Incomparable };

inline Cmp flip_cmp(Cmp c) {
  if (c == Cmp::Better) return Cmp::Worse;
  if (c == Cmp::Worse) return Cmp::Better;
  return c;
}

enum class StatementKind { Strict, Indifferent };

// One local preference statement over a single variable's values.
// Indifferent statements are stored with left < right.
struct Statement {
  StatementKind kind;
  ValueId left;
  ValueId right;

  friend bool operator<(const Statement& a, const Statement& b) {
    return std::tie(a.left, a.right, a.kind) < std::tie(b.left, b.right, b.kind);
  }
  friend bool operator==(const Statement& a, const Statement& b) {
    return a.kind == b.kind && a.left == b.left && a.right == b.right;
  }
};

// The relation a CPT row induces over one variable's domain: a statement
// set plus the reflexive-transitive closure of (strict + indifferent +
// reversed indifferent). All verdicts are read off the closure, so a
// partial row {x1 > x2, x2 > x3} still orders x1 against x3.
class LocalRelation {
 public:
  LocalRelation() = default;

  LocalRelation(std::vector<Statement> statements, int domain_size)
      : domain_size_(domain_size) {
    for (Statement s : statements) {
      if (s.kind == StatementKind::Indifferent && s.right < s.left)
        std::swap(s.left, s.right);
      statements_.push_back(s);
    }
    std::sort(statements_.begin(), statements_.end());
    statements_.erase(std::unique(statements_.begin(), statements_.end()),
                      statements_.end());
    build_closure();
  }

  static LocalRelation total_order(const std::vector<ValueId>& best_first,
                                   int domain_size) {
    std::vector<Statement> st;
    for (size_t i = 0; i + 1 < best_first.size(); ++i)
      st.push_back({StatementKind::Strict, best_first[i], best_first[i + 1]});
    return LocalRelation(std::move(st), domain_size);
  }

  const std::vector<Statement>& statements() const { return statements_; }
  int domain_size() const { return domain_size_; }
  bool empty() const { return statements_.empty(); }

  // v1 >= v2 in the closure.
  bool reaches(ValueId v1, ValueId v2) const {
    return reach_[static_cast<size_t>(v1) * domain_size_ + v2];
  }

  Cmp compare(ValueId v1, ValueId v2) const {
    if (v1 == v2) return Cmp::Equal;
    bool fwd = reaches(v1, v2);
    bool bwd = reaches(v2, v1);
    if (fwd && bwd) return Cmp::Equal;
    if (fwd) return Cmp::Better;
    if (bwd) return Cmp::Worse;
    return Cmp::Incomparable;
  }

  // A strict statement inside a mutually-reachable component leaves the
  // row without any consistent preorder reading.
  bool has_strict_cycle() const {
    for (const Statement& s : statements_)
      if (s.kind == StatementKind::Strict && reaches(s.right, s.left))
        return true;
    return false;
  }

  bool has_indifference() const {
    for (const Statement& s : statements_)
      if (s.kind == StatementKind::Indifferent) return true;
    return false;
  }

  bool all_pairs_comparable() const {
    for (ValueId a = 0; a < domain_size_; ++a)
      for (ValueId b = a + 1; b < domain_size_; ++b)
        if (compare(a, b) == Cmp::Incomparable) return false;
    return true;
  }

  bool is_total_order() const {
    return !has_indifference() && all_pairs_comparable();
  }
  bool is_preorder() const { return all_pairs_comparable(); }
  bool is_partial() const { return !all_pairs_comparable(); }

  // Values not strictly beaten by any other value.
  std::vector<ValueId> nondominated() const {
    std::vector<ValueId> out;
    for (ValueId v = 0; v < domain_size_; ++v) {
      bool dominated = false;
      for (ValueId w = 0; w < domain_size_ && !dominated; ++w)
        if (w != v && compare(w, v) == Cmp::Better) dominated = true;
      if (!dominated) out.push_back(v);
    }
    return out;
  }

  // For a total-order row: domain values sorted most preferred first.
  std::vector<ValueId> ranked_values() const {
    std::vector<ValueId> vals(domain_size_);
    for (ValueId v = 0; v < domain_size_; ++v) vals[v] = v;
    std::stable_sort(vals.begin(), vals.end(), [&](ValueId a, ValueId b) {
      return compare(a, b) == Cmp::Better;
    });
    return vals;
  }

  bool same_relation(const LocalRelation& other) const {
    if (domain_size_ != other.domain_size_) return false;
    for (ValueId a = 0; a < domain_size_; ++a)
      for (ValueId b = 0; b < domain_size_; ++b)
        if (compare(a, b) != other.compare(a, b)) return false;
    return true;
  }

  friend bool operator==(const LocalRelation& a, const LocalRelation& b) {
    return a.domain_size_ == b.domain_size_ && a.statements_ == b.statements_;
  }

 private:
  void build_closure() {
    size_t n = static_cast<size_t>(domain_size_);
    reach_.assign(n * n, false);
    for (size_t i = 0; i < n; ++i) reach_[i * n + i] = true;
    for (const Statement& s : statements_) {
      reach_[static_cast<size_t>(s.left) * n + s.right] = true;
      if (s.kind == StatementKind::Indifferent)
        reach_[static_cast<size_t>(s.right) * n + s.left] = true;
    }
    for (size_t k = 0; k < n; ++k)
      for (size_t i = 0; i < n; ++i)
        if (reach_[i * n + k])
          for (size_t j = 0; j < n; ++j)
            if (reach_[k * n + j]) reach_[i * n + j] = true;
  }

  std::vector<Statement> statements_;
  int domain_size_ = 0;
  std::vector<bool> reach_;
};

struct CPT {
  VarId variable = -1;
  std::vector<VarId> parents;
  // Keyed by the total parent-context (value per parent, in parent order).
  // std::map keeps rows in lexicographic context order, which is the
  // canonical row order everywhere.
  std::map<std::vector<ValueId>, LocalRelation> rows;

  const LocalRelation* row(const std::vector<ValueId>& context) const {
    auto it = rows.find(context);
    return it == rows.end() ? nullptr : &it->second;
  }

  friend bool operator==(const CPT& a, const CPT& b) {
    return a.variable == b.variable && a.parents == b.parents && a.rows == b.rows;
  }
};

struct Outcome {
  std::vector<ValueId> values;  // one per variable, net declaration order

  friend bool operator==(const Outcome& a, const Outcome& b) {
    return a.values == b.values;
  }
  friend bool operator<(const Outcome& a, const Outcome& b) {
    return a.values < b.values;
  }
};

struct PartialAssignment {
  std::vector<ValueId> values;  // -1 for unassigned

  explicit PartialAssignment(size_t n = 0) : values(n, -1) {}

  bool assigned(VarId v) const { return values[v] >= 0; }
  bool empty() const {
    return std::all_of(values.begin(), values.end(),
                       [](ValueId v) { return v < 0; });
  }
  bool total() const {
    return std::all_of(values.begin(), values.end(),
                       [](ValueId v) { return v >= 0; });
  }
  Outcome as_outcome() const {
    if (!total()) throw InputError("assignment is not total");
    return Outcome{values};
  }

  friend bool operator==(const PartialAssignment& a, const PartialAssignment& b) {
    return a.values == b.values;
  }
};

struct CPNet {
  std::vector<Variable> variables;
  std::vector<CPT> cpts;  // one per variable, same indexing

  size_t size() const { return variables.size(); }

  std::optional<VarId> var_index(const std::string& name) const {
    for (VarId i = 0; i < static_cast<VarId>(variables.size()); ++i)
      if (variables[i].name == name) return i;
    return std::nullopt;
  }

  std::vector<std::vector<VarId>> children() const {
    std::vector<std::vector<VarId>> ch(variables.size());
    for (const CPT& c : cpts)
      for (VarId p : c.parents)
        if (p >= 0 && p < static_cast<VarId>(variables.size()) && p != c.variable)
          ch[p].push_back(c.variable);
    return ch;
  }

  bool acyclic() const { return topological_order().has_value(); }

  // Kahn's algorithm with declaration-order tie-breaking.
  std::optional<std::vector<VarId>> topological_order() const {
    size_t n = variables.size();
    std::vector<int> indeg(n, 0);
    auto ch = children();
    for (const CPT& c : cpts)
      for (VarId p : c.parents) {
        (void)p;
        ++indeg[c.variable];
      }
    std::priority_queue<VarId, std::vector<VarId>, std::greater<VarId>> ready;
    for (VarId v = 0; v < static_cast<VarId>(n); ++v)
      if (indeg[v] == 0) ready.push(v);
    std::vector<VarId> order;
    while (!ready.empty()) {
      VarId v = ready.top();
      ready.pop();
      order.push_back(v);
      for (VarId c : ch[v])
        if (--indeg[c] == 0) ready.push(c);
    }
    if (order.size() != n) return std::nullopt;
    return order;
  }

  // Transitive ancestor sets from the parent graph (valid for acyclic nets).
  std::vector<std::vector<bool>> ancestor_matrix() const {
    size_t n = variables.size();
    std::vector<std::vector<bool>> anc(n, std::vector<bool>(n, false));
    auto order = topological_order();
    if (!order) throw InputError("ancestor sets require an acyclic net");
    for (VarId v : *order)
      for (VarId p : cpts[v].parents) {
        anc[v][p] = true;
        for (size_t a = 0; a < n; ++a)
          if (anc[p][a]) anc[v][a] = true;
      }
    return anc;
  }

  // Product of domain sizes; nullopt once it no longer fits in 64 bits.
  std::optional<std::uint64_t> outcome_count() const {
    std::uint64_t prod = 1;
    for (const Variable& v : variables) {
      std::uint64_t d = v.values.size();
      if (prod > UINT64_MAX / d) return std::nullopt;
      prod *= d;
    }
    return prod;
  }

  std::vector<ValueId> context_of(VarId x, const Outcome& o) const {
    std::vector<ValueId> ctx;
    ctx.reserve(cpts[x].parents.size());
    for (VarId p : cpts[x].parents) ctx.push_back(o.values[p]);
    return ctx;
  }

  std::vector<ValueId> context_of(VarId x, const PartialAssignment& pa) const {
    std::vector<ValueId> ctx;
    ctx.reserve(cpts[x].parents.size());
    for (VarId p : cpts[x].parents) {
      if (!pa.assigned(p))
        throw InputError("context does not assign parent '" +
                         variables[p].name + "'");
      ctx.push_back(pa.values[p]);
    }
    return ctx;
  }

  friend bool operator==(const CPNet& a, const CPNet& b) {
    if (a.variables.size() != b.variables.size()) return false;
    for (size_t i = 0; i < a.variables.size(); ++i) {
      if (a.variables[i].name != b.variables[i].name) return false;
      if (a.variables[i].values != b.variables[i].values) return false;
    }
    return a.cpts == b.cpts;
  }
};

struct Violation {
  std::string code;     // "self-parent", "strict-cycle", ...
  std::string where;    // variable name, optionally with row context
  std::string message;
};

struct ValidationReport {
  bool acyclic = true;
  bool strict = true;           // all rows total orders
  bool complete_tables = true;  // a row for every parent context
  bool binary = true;
  std::vector<Violation> violations;

  bool clean() const { return violations.empty(); }
};

namespace detail {

inline std::uint64_t context_count(const CPNet& net, const CPT& cpt) {
  std::uint64_t n = 1;
  for (VarId p : cpt.parents) n *= net.variables[p].values.size();
  return n;
}

inline std::string context_label(const CPNet& net, const CPT& cpt,
                                 const std::vector<ValueId>& ctx) {
  if (ctx.empty()) return "-";
  std::string s;
  for (size_t i = 0; i < ctx.size(); ++i) {
    if (i) s += ",";
    s += net.variables[cpt.parents[i]].values[ctx[i]];
  }
  return s;
}

}  // namespace detail

// Computes all derived flags and enumerates invariant violations.
// Reports only; it never throws on bad nets.
inline ValidationReport validate(const CPNet& net) {
  ValidationReport rep;
  size_t n = net.size();

  for (size_t i = 0; i < n; ++i) {
    const Variable& v = net.variables[i];
    if (v.values.size() < 2)
      rep.violations.push_back({"small-domain", v.name,
                                "domain must have at least 2 values"});
    if (!v.binary()) rep.binary = false;
    std::set<std::string> uniq(v.values.begin(), v.values.end());
    if (uniq.size() != v.values.size())
      rep.violations.push_back({"duplicate-value", v.name,
                                "domain values must be distinct"});
    for (size_t j = i + 1; j < n; ++j)
      if (net.variables[j].name == v.name)
        rep.violations.push_back({"duplicate-variable", v.name,
                                  "variable declared twice"});
  }

  for (const CPT& cpt : net.cpts) {
    const std::string& xname = net.variables[cpt.variable].name;
    for (VarId p : cpt.parents) {
      if (p < 0 || p >= static_cast<VarId>(n)) {
        rep.violations.push_back({"unknown-parent", xname,
                                  "parent does not resolve to a variable"});
      } else if (p == cpt.variable) {
        rep.violations.push_back({"self-parent", xname,
                                  "variable lists itself as a parent"});
      }
    }
    std::uint64_t expected = detail::context_count(net, cpt);
    if (cpt.rows.size() < expected) rep.complete_tables = false;
    for (const auto& [ctx, rel] : cpt.rows) {
      if (rel.has_strict_cycle())
        rep.violations.push_back(
            {"strict-cycle", xname + " [" + detail::context_label(net, cpt, ctx) + "]",
             "row statements admit no preorder"});
      if (!rel.is_total_order()) rep.strict = false;
    }
    if (cpt.rows.empty() && expected > 0) rep.strict = false;
  }

  rep.acyclic = net.acyclic();
  if (!rep.acyclic)
    rep.violations.push_back({"cyclic", "-", "parent graph has a directed cycle"});
  return rep;
}

inline void check_value(const CPNet& net, VarId x, ValueId v) {
  if (x < 0 || x >= static_cast<VarId>(net.size()))
    throw InputError("unknown variable index");
  if (v < 0 || v >= static_cast<ValueId>(net.variables[x].values.size()))
    throw InputError("value out of range for variable '" +
                     net.variables[x].name + "'");
}

// Local comparison of two values of x under a total assignment to Pa(x).
// A missing row makes all distinct pairs incomparable.
inline Cmp compare_local(const CPNet& net, VarId x,
                         const std::vector<ValueId>& context, ValueId v1,
                         ValueId v2) {
  check_value(net, x, v1);
  check_value(net, x, v2);
  const CPT& cpt = net.cpts[x];
  if (context.size() != cpt.parents.size())
    throw InputError("context does not match Pa(" + net.variables[x].name + ")");
  for (size_t i = 0; i < context.size(); ++i)
    check_value(net, cpt.parents[i], context[i]);
  if (v1 == v2) return Cmp::Equal;
  const LocalRelation* rel = cpt.row(context);
  if (!rel) return Cmp::Incomparable;
  return rel->compare(v1, v2);
}

// Values of x with no locally better alternative under the given context.
inline std::vector<ValueId> nondominated_local(const CPNet& net, VarId x,
                                               const std::vector<ValueId>& context) {
  const CPT& cpt = net.cpts[x];
  if (context.size() != cpt.parents.size())
    throw InputError("context does not match Pa(" + net.variables[x].name + ")");
  const LocalRelation* rel = cpt.row(context);
  int d = static_cast<int>(net.variables[x].values.size());
  if (!rel) {
    std::vector<ValueId> all(d);
    for (int i = 0; i < d; ++i) all[i] = i;
    return all;
  }
  return rel->nondominated();
}

struct NetClass {
  bool is_tree = false;      // every node has at most one parent
  bool is_polytree = false;  // underlying undirected graph is acyclic
  bool is_dpsc = false;      // at most one directed path between any pair
  BigInt max_delta = 0;      // max directed-path count over ordered pairs
};

// Structure classification by exact path counting over a topological order.
inline NetClass classify_structure(const CPNet& net) {
  auto order = net.topological_order();
  if (!order) throw InputError("classify_structure requires an acyclic net");
  size_t n = net.size();
  NetClass cls;

  cls.is_tree = true;
  for (const CPT& c : net.cpts)
    if (c.parents.size() > 1) cls.is_tree = false;

  // Polytree: undirected edge count per component must stay below node count.
  {
    std::vector<int> uf(n);
    for (size_t i = 0; i < n; ++i) uf[i] = static_cast<int>(i);
    auto find = [&](int a) {
      while (uf[a] != a) a = uf[a] = uf[uf[a]];
      return a;
    };
    cls.is_polytree = true;
    for (const CPT& c : net.cpts)
      for (VarId p : c.parents) {
        int ra = find(p), rb = find(c.variable);
        if (ra == rb) {
          cls.is_polytree = false;
        } else {
          uf[ra] = rb;
        }
      }
  }

  auto ch = net.children();
  cls.is_dpsc = true;
  for (size_t src = 0; src < n; ++src) {
    std::vector<BigInt> paths(n, 0);
    paths[src] = 1;
    for (VarId v : *order)
      for (VarId c : ch[v])
        if (paths[v] != 0) paths[c] += paths[v];
    for (size_t dst = 0; dst < n; ++dst) {
      if (dst == src) continue;
      if (paths[dst] > cls.max_delta) cls.max_delta = paths[dst];
      if (paths[dst] > 1) cls.is_dpsc = false;
    }
  }
  return cls;
}

struct LintWarning {
  VarId variable;   // the variable carrying the indifference
  VarId child;      // the child whose rows disagree
  std::string message;
};

// Sufficient safety condition for indifference: whenever x ~ x' appears in
// some row of X, every child's rows must be identical across x and x' for
// each fixed assignment to the child's other parents. No warnings implies
// satisfiability; warnings do not prove the opposite.
inline std::vector<LintWarning> indifference_safety_lint(const CPNet& net) {
  std::vector<LintWarning> warnings;
  if (!net.acyclic()) throw InputError("lint requires an acyclic net");
  auto ch = net.children();

  for (VarId x = 0; x < static_cast<VarId>(net.size()); ++x) {
    // All value pairs of x that some context makes indifferent.
    std::set<std::pair<ValueId, ValueId>> pairs;
    int d = static_cast<int>(net.variables[x].values.size());
    for (const auto& [ctx, rel] : net.cpts[x].rows)
      for (ValueId a = 0; a < d; ++a)
        for (ValueId b = a + 1; b < d; ++b)
          if (rel.compare(a, b) == Cmp::Equal) pairs.insert({a, b});
    if (pairs.empty()) continue;

    for (VarId c : ch[x]) {
      const CPT& ccpt = net.cpts[c];
      std::vector<size_t> xslots;
      for (size_t i = 0; i < ccpt.parents.size(); ++i)
        if (ccpt.parents[i] == x) xslots.push_back(i);
      // Enumerate assignments y to the child's other parents.
      std::vector<VarId> others;
      for (VarId p : ccpt.parents)
        if (p != x) others.push_back(p);
      std::vector<ValueId> y(others.size(), 0);
      bool warned = false;
      while (!warned) {
        for (auto [a, b] : pairs) {
          auto make_ctx = [&](ValueId xv) {
            std::vector<ValueId> ctx(ccpt.parents.size());
            size_t yi = 0;
            for (size_t i = 0; i < ccpt.parents.size(); ++i)
              ctx[i] = (ccpt.parents[i] == x) ? xv : y[yi++];
            return ctx;
          };
          const LocalRelation* ra = ccpt.row(make_ctx(a));
          const LocalRelation* rb = ccpt.row(make_ctx(b));
          bool same = (!ra && !rb) || (ra && rb && ra->same_relation(*rb));
          if (!same) {
            warnings.push_back(
                {x, c,
                 "indifference " + net.variables[x].values[a] + " ~ " +
                     net.variables[x].values[b] + " on " + net.variables[x].name +
                     " but CPT(" + net.variables[c].name +
                     ") rows differ across the pair"});
            warned = true;
            break;
          }
        }
        // next assignment to the other parents
        size_t i = 0;
        for (; i < others.size(); ++i) {
          if (++y[i] < static_cast<ValueId>(net.variables[others[i]].values.size()))
            break;
          y[i] = 0;
        }
        if (i == others.size()) break;
      }
    }
  }
  return warnings;
}

}  // namespace cpnet
