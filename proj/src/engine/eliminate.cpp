#include <algorithm>
#include <map>
#include <unordered_set>

#include "mereo/engine.hpp"

namespace mereo::engine {

NotASentence::NotASentence(const std::vector<std::string>& free_vars)
    : std::invalid_argument([&] {
        std::string msg = "not a sentence; free variables:";
        for (const auto& v : free_vars) msg += " " + v;
        return msg;
      }()) {}

namespace {

class Budget {
 public:
  explicit Budget(std::size_t limit) : limit_(limit) {}

  void check(std::size_t nodes, const char* stage) const {
    if (nodes > limit_) {
      throw BudgetExceeded(std::string("node budget of ") + std::to_string(limit_) + " exceeded during " +
                           stage + " (" + std::to_string(nodes) + " nodes)");
    }
  }
  std::size_t limit() const { return limit_; }

 private:
  std::size_t limit_;
};

// A size constraint on one cell over the step's variable list (bit 0 is the
// eliminated variable).
struct CellLit {
  std::uint32_t cell;
  SizeConstraint c;
};

// Positive Boolean combination produced by size rewriting. And with no
// children is true, Or with no children is false.
struct PosNode {
  enum class Kind { Lit, Opaque, And, Or };
  Kind kind = Kind::And;
  CellLit lit{};
  Formula opaque;
  std::vector<PosNode> kids;
};

struct Clause {
  std::vector<std::pair<std::uint32_t, SizeConstraint>> cells;  // sorted by cell
  std::vector<Formula> opaque;                                  // sorted by hash

  std::size_t size() const { return 1 + cells.size() + opaque.size(); }

  friend bool operator==(const Clause& a, const Clause& b) {
    return a.cells == b.cells && a.opaque == b.opaque;
  }
};

struct ClauseHash {
  std::size_t operator()(const Clause& c) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    auto mix = [&](std::size_t v) { h = (h ^ v) * 0x100000001b3ULL; };
    for (const auto& [cell, sc] : c.cells) {
      mix(cell);
      mix(static_cast<std::size_t>(sc.kind));
      mix(static_cast<std::size_t>(sc.k));
    }
    for (const Formula& f : c.opaque) mix(f.hash());
    return h;
  }
};

std::optional<Clause> merge(const Clause& a, const Clause& b) {
  Clause out;
  out.cells.reserve(a.cells.size() + b.cells.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.cells.size() || j < b.cells.size()) {
    if (j == b.cells.size() || (i < a.cells.size() && a.cells[i].first < b.cells[j].first)) {
      out.cells.push_back(a.cells[i++]);
    } else if (i == a.cells.size() || b.cells[j].first < a.cells[i].first) {
      out.cells.push_back(b.cells[j++]);
    } else {
      Slot s = reduce(a.cells[i].second, b.cells[j].second);
      if (!s) return std::nullopt;
      out.cells.emplace_back(a.cells[i].first, *s);
      ++i;
      ++j;
    }
  }
  out.opaque = a.opaque;
  for (const Formula& f : b.opaque) {
    if (std::find(out.opaque.begin(), out.opaque.end(), f) == out.opaque.end()) out.opaque.push_back(f);
  }
  std::stable_sort(out.opaque.begin(), out.opaque.end(),
                   [](const Formula& l, const Formula& r) { return l.hash() < r.hash(); });
  return out;
}

using Dnf = std::vector<Clause>;

void push_unique(Dnf& out, std::unordered_set<Clause, ClauseHash>& seen, Clause c) {
  if (seen.insert(c).second) out.push_back(std::move(c));
}

std::size_t dnf_size(const Dnf& d) {
  std::size_t n = 1;
  for (const Clause& c : d) n += c.size();
  return n;
}

// Number of compositions of n into m parts, saturating at `cap`.
std::size_t composition_count(std::uint64_t n, std::size_t m, std::size_t cap) {
  // C(n + m - 1, m - 1), computed incrementally.
  if (m == 0) return 1;
  long double acc = 1;
  for (std::size_t i = 1; i < m; ++i) {
    acc = acc * static_cast<long double>(n + i) / static_cast<long double>(i);
    if (acc > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::size_t>(acc + 0.5L);
}

class ExistsStep {
 public:
  ExistsStep(std::string x, const Budget& budget, EliminationTrace* trace)
      : x_(std::move(x)), budget_(budget), trace_(trace) {}

  Formula run(const Formula& body) {
    Formula normalized = normalize_atoms(body);
    record(kStageAtoms, body, normalized);
    budget_.check(normalized.size(), kStageAtoms);

    Formula positive = positivize(normalized);
    record(kStagePositive, normalized, positive);
    budget_.check(positive.size(), kStagePositive);

    if (!occurs_free(positive, x_)) {
      Formula out = simplify(positive);
      record(kStageEliminate, positive, out);
      return out;
    }

    vars_.assign(1, x_);
    collect_vars(positive);
    others_.assign(vars_.begin() + 1, vars_.end());
    base_terms_.assign(std::size_t{1} << others_.size(), std::nullopt);

    if (trace_) {
      Formula cellified = map_x_atoms(positive, [&](const Formula& atom) {
        std::vector<Term> terms;
        for (const CellTerm& c : cellify(atom.term(), vars_)) terms.push_back(c.term());
        Term u = join_all(terms);
        return atom.kind() == FormulaKind::CardEq ? Formula::card_eq(u, atom.bound())
                                                  : Formula::card_geq(u, atom.bound());
      });
      record(kStageCells, positive, cellified);
      Formula sized = map_x_atoms(positive, [&](const Formula& atom) {
        return rewrite_union_sizes(cellify(atom.term(), vars_), atom.kind(), atom.bound());
      });
      record(kStageSizes, cellified, sized);
      sized_ = sized;
    }

    PosNode tree = build(positive);
    Dnf dnf = to_dnf(tree);
    budget_.check(dnf_size(dnf), kStageDnf);

    Formula dnf_formula;
    if (trace_) {
      std::vector<Formula> clauses;
      for (const Clause& c : dnf) clauses.push_back(clause_formula(c));
      dnf_formula = disj_all(clauses);
      record(kStageDnf, sized_, dnf_formula);
    }

    std::vector<Formula> results;
    std::unordered_set<Formula, FormulaHash> seen;
    for (const Clause& c : dnf) {
      Formula r = eliminate_clause(c);
      if (r.is_false_literal()) continue;
      if (r.is_true_literal()) {
        results.assign(1, r);
        break;
      }
      if (seen.insert(r).second) results.push_back(std::move(r));
    }
    Formula out = simplify(disj_all(results));
    budget_.check(out.size(), kStageEliminate);
    if (trace_) record(kStageEliminate, dnf_formula, out);
    return out;
  }

 private:
  void record(const char* stage, const Formula& before, const Formula& after) {
    if (!trace_) return;
    trace_->push_back(TraceStep{stage, Formula::exists(x_, before),
                                stage == std::string(kStageEliminate) ? after : Formula::exists(x_, after)});
  }

  bool mentions_x(const Formula& atom) const { return atom.term().mentions(x_); }

  void collect_vars(const Formula& f) {
    if (f.is_card_atom()) {
      if (!mentions_x(f)) return;
      for (const std::string& v : term_variables(f.term())) {
        if (std::find(vars_.begin(), vars_.end(), v) == vars_.end()) vars_.push_back(v);
      }
      return;
    }
    if (f.kind() == FormulaKind::And || f.kind() == FormulaKind::Or) {
      collect_vars(f.left());
      collect_vars(f.right());
      return;
    }
    throw std::logic_error("unexpected connective after positivization: " + render(f));
  }

  template <typename Fn>
  Formula map_x_atoms(const Formula& f, Fn&& fn) {
    if (!occurs_free(f, x_)) return f;
    if (f.is_card_atom()) return fn(f);
    Formula l = map_x_atoms(f.left(), fn);
    Formula r = map_x_atoms(f.right(), fn);
    return f.kind() == FormulaKind::And ? Formula::conj(l, r) : Formula::disj(l, r);
  }

  PosNode build(const Formula& f) {
    PosNode node;
    if (!occurs_free(f, x_)) {
      node.kind = PosNode::Kind::Opaque;
      node.opaque = f;
      return node;
    }
    if (f.is_card_atom()) return size_rewrite(f);
    node.kind = f.kind() == FormulaKind::And ? PosNode::Kind::And : PosNode::Kind::Or;
    node.kids.push_back(build(f.left()));
    node.kids.push_back(build(f.right()));
    return node;
  }

  PosNode size_rewrite(const Formula& atom) {
    const std::vector<std::uint32_t> cells = cell_masks(atom.term(), vars_);
    const bool exact = atom.kind() == FormulaKind::CardEq;
    const std::uint64_t n = atom.bound();
    PosNode node;
    if (cells.empty()) {
      node.kind = n == 0 ? PosNode::Kind::And : PosNode::Kind::Or;
      return node;
    }
    auto lit = [&](std::uint32_t cell, std::uint64_t k) {
      PosNode l;
      l.kind = PosNode::Kind::Lit;
      l.lit = CellLit{cell, exact ? SizeConstraint::exact(k) : SizeConstraint::at_least(k)};
      return l;
    };
    if (cells.size() == 1) return lit(cells.front(), n);

    const std::size_t count = composition_count(n, cells.size(), budget_.limit());
    if (count > budget_.limit() || count * cells.size() > budget_.limit())
      budget_.check(budget_.limit() + 1, kStageSizes);

    node.kind = PosNode::Kind::Or;
    std::vector<std::uint64_t> parts(cells.size(), 0);
    auto recurse = [&](auto& self, std::size_t i, std::uint64_t remaining) -> void {
      if (i + 1 == cells.size()) {
        parts[i] = remaining;
        PosNode conj;
        conj.kind = PosNode::Kind::And;
        for (std::size_t j = 0; j < cells.size(); ++j) {
          if (!exact && parts[j] == 0) continue;
          conj.kids.push_back(lit(cells[j], parts[j]));
        }
        node.kids.push_back(std::move(conj));
        return;
      }
      for (std::uint64_t v = 0; v <= remaining; ++v) {
        parts[i] = v;
        self(self, i + 1, remaining - v);
      }
    };
    recurse(recurse, 0, n);
    return node;
  }

  Dnf to_dnf(const PosNode& node) {
    Dnf out;
    switch (node.kind) {
      case PosNode::Kind::Lit: {
        Clause c;
        if (!node.lit.c.trivial()) c.cells.emplace_back(node.lit.cell, node.lit.c);
        out.push_back(std::move(c));
        return out;
      }
      case PosNode::Kind::Opaque: {
        if (node.opaque.is_false_literal()) return out;
        Clause c;
        if (!node.opaque.is_true_literal()) c.opaque.push_back(node.opaque);
        out.push_back(std::move(c));
        return out;
      }
      case PosNode::Kind::Or: {
        std::unordered_set<Clause, ClauseHash> seen;
        std::size_t total = 1;
        for (const PosNode& kid : node.kids) {
          for (Clause& c : to_dnf(kid)) {
            total += c.size();
            push_unique(out, seen, std::move(c));
          }
          budget_.check(total, kStageDnf);
        }
        return out;
      }
      case PosNode::Kind::And: {
        out.push_back(Clause{});
        for (const PosNode& kid : node.kids) {
          Dnf rhs = to_dnf(kid);
          if (out.size() * rhs.size() > 8 * budget_.limit())
            budget_.check(budget_.limit() + 1, kStageDnf);
          Dnf next;
          std::unordered_set<Clause, ClauseHash> seen;
          std::size_t total = 1;
          for (const Clause& a : out) {
            for (const Clause& b : rhs) {
              std::optional<Clause> m = merge(a, b);
              if (!m) continue;
              total += m->size();
              push_unique(next, seen, std::move(*m));
            }
            budget_.check(total, kStageDnf);
          }
          out = std::move(next);
          if (out.empty()) return out;
        }
        return out;
      }
    }
    return out;
  }

  const Term& base_term(std::uint32_t base) {
    auto& slot = base_terms_[base];
    if (!slot) slot = cell_term(base, others_);
    return *slot;
  }

  static Formula size_atom(const Term& t, SizeConstraint c) {
    return c.kind == SizeConstraint::Kind::Exact ? Formula::card_eq(t, c.k) : Formula::card_geq(t, c.k);
  }

  Formula clause_formula(const Clause& c) {
    std::vector<Formula> parts;
    for (const auto& [cell, sc] : c.cells) parts.push_back(size_atom(cell_term(cell, vars_), sc));
    parts.insert(parts.end(), c.opaque.begin(), c.opaque.end());
    return conj_all(parts);
  }

  Formula eliminate_clause(const Clause& c) {
    // Group by base cell: bit 0 of a cell is x, the remaining bits select a
    // cell over the other variables.
    CellConstraintSystem system;
    std::map<std::uint32_t, std::size_t> index;
    for (const auto& [cell, sc] : c.cells) {
      const std::uint32_t base = cell >> 1;
      if (base == 0) {
        system.add_fresh(sc);
        continue;
      }
      auto it = index.find(base);
      if (it == index.end()) it = index.emplace(base, system.base_index(base_term(base))).first;
      if (cell & 1U) {
        system.add_inner(it->second, sc);
      } else {
        system.add_outer(it->second, sc);
      }
    }
    Formula resolved = system.resolve();
    if (resolved.is_false_literal()) return resolved;
    std::vector<Formula> parts;
    if (!resolved.is_true_literal()) parts.push_back(resolved);
    parts.insert(parts.end(), c.opaque.begin(), c.opaque.end());
    return simplify(conj_all(parts));
  }

  std::string x_;
  const Budget& budget_;
  EliminationTrace* trace_;
  std::vector<std::string> vars_;
  std::vector<std::string> others_;
  std::vector<std::optional<Term>> base_terms_;
  Formula sized_;
};

Formula eliminate_rec(const Formula& f, const Budget& budget, EliminationTrace* trace) {
  switch (f.kind()) {
    case FormulaKind::Sub:
    case FormulaKind::Eq:
    case FormulaKind::CardEq:
    case FormulaKind::CardGeq:
      return f;
    case FormulaKind::Not:
      return Formula::negation(eliminate_rec(f.left(), budget, trace));
    case FormulaKind::And:
      return Formula::conj(eliminate_rec(f.left(), budget, trace), eliminate_rec(f.right(), budget, trace));
    case FormulaKind::Or:
      return Formula::disj(eliminate_rec(f.left(), budget, trace), eliminate_rec(f.right(), budget, trace));
    case FormulaKind::Implies:
      return Formula::implies(eliminate_rec(f.left(), budget, trace),
                              eliminate_rec(f.right(), budget, trace));
    case FormulaKind::Iff:
      return Formula::iff(eliminate_rec(f.left(), budget, trace), eliminate_rec(f.right(), budget, trace));
    case FormulaKind::Exists: {
      Formula body = eliminate_rec(f.body(), budget, trace);
      return ExistsStep(f.var(), budget, trace).run(body);
    }
    case FormulaKind::Forall: {
      Formula body = eliminate_rec(f.body(), budget, trace);
      Formula inner = ExistsStep(f.var(), budget, trace).run(Formula::negation(body));
      return simplify(Formula::negation(inner));
    }
  }
  return f;
}

}  // namespace

Formula eliminate(const Formula& f, const Options& options, EliminationTrace* trace) {
  if (options.node_budget == 0) throw std::invalid_argument("node budget must be at least 1");
  Budget budget(options.node_budget);
  EliminationTrace* sink = options.record_trace ? trace : nullptr;
  Formula out = simplify(eliminate_rec(f, budget, sink));
  budget.check(out.size(), kStageEliminate);
  return out;
}

Decision decide(const Formula& sentence, const Options& options) {
  std::vector<std::string> free = free_variables(sentence);
  if (!free.empty()) throw NotASentence(free);
  Decision d;
  Formula qf = eliminate(sentence, options, &d.trace);
  d.verdict = eval_ground(qf);
  if (options.record_trace) {
    d.trace.push_back(TraceStep{kStageGround, qf, d.verdict ? Formula::truth() : Formula::falsity()});
  }
  return d;
}

}  // namespace mereo::engine
