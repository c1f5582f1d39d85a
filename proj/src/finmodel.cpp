#include "mereo/finmodel.hpp"

#include <algorithm>
#include <bitset>
#include <iterator>
#include <unordered_map>

namespace mereo::finmodel {

FinSet::FinSet(std::initializer_list<std::uint64_t> elements) : FinSet(std::vector<std::uint64_t>(elements)) {}

FinSet::FinSet(std::vector<std::uint64_t> elements) : elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
}

bool FinSet::contains(std::uint64_t e) const {
  return std::binary_search(elements_.begin(), elements_.end(), e);
}

FinSet FinSet::intersection(const FinSet& other) const {
  FinSet out;
  std::set_intersection(elements_.begin(), elements_.end(), other.elements_.begin(), other.elements_.end(),
                        std::back_inserter(out.elements_));
  return out;
}

FinSet FinSet::union_with(const FinSet& other) const {
  FinSet out;
  std::set_union(elements_.begin(), elements_.end(), other.elements_.begin(), other.elements_.end(),
                 std::back_inserter(out.elements_));
  return out;
}

FinSet FinSet::difference(const FinSet& other) const {
  FinSet out;
  std::set_difference(elements_.begin(), elements_.end(), other.elements_.begin(), other.elements_.end(),
                      std::back_inserter(out.elements_));
  return out;
}

bool FinSet::subset_of(const FinSet& other) const {
  return std::includes(other.elements_.begin(), other.elements_.end(), elements_.begin(), elements_.end());
}

std::string FinSet::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(elements_[i]);
  }
  return out + "}";
}

FinSet eval_term(const Term& t, const Assignment& a) {
  switch (t.kind()) {
    case TermKind::Zero:
      return FinSet{};
    case TermKind::Var: {
      auto it = a.find(t.name());
      if (it == a.end()) throw EvaluationError("unbound variable '" + t.name() + "'");
      return it->second;
    }
    case TermKind::Meet:
      return eval_term(t.left(), a).intersection(eval_term(t.right(), a));
    case TermKind::Join:
      return eval_term(t.left(), a).union_with(eval_term(t.right(), a));
    case TermKind::Diff:
      return eval_term(t.left(), a).difference(eval_term(t.right(), a));
  }
  return FinSet{};
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kMaxElements = 256;
using Bits = std::bitset<kMaxElements>;

struct CTerm {
  TermKind kind;
  int slot = -1;
  int left = -1;
  int right = -1;
};

struct CFormula {
  FormulaKind kind;
  int lhs = -1;  // term index
  int rhs = -1;
  std::uint64_t n = 0;
  int a = -1;  // child formula index
  int b = -1;
  int slot = -1;  // binder slot
};

// Formula compiled against variable slots, so evaluation never looks up names.
class Program {
 public:
  Program(const Formula& f, const Assignment& a) {
    for (const auto& [name, set] : a) {
      scope_.emplace_back(name, static_cast<int>(slot_count_));
      ++slot_count_;
    }
    root_ = compile(f);
  }

  std::size_t slot_count() const { return slot_count_; }
  int root() const { return root_; }
  const CTerm& term(int i) const { return terms_[static_cast<std::size_t>(i)]; }
  const CFormula& formula(int i) const { return formulas_[static_cast<std::size_t>(i)]; }

 private:
  int lookup(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == name) return it->second;
    }
    throw EvaluationError("unbound variable '" + name + "'");
  }

  int compile(const Term& t) {
    CTerm c{t.kind()};
    if (t.kind() == TermKind::Var) {
      c.slot = lookup(t.name());
    } else if (t.kind() != TermKind::Zero) {
      c.left = compile(t.left());
      c.right = compile(t.right());
    }
    terms_.push_back(c);
    return static_cast<int>(terms_.size() - 1);
  }

  int compile(const Formula& f) {
    CFormula c{f.kind()};
    switch (f.kind()) {
      case FormulaKind::Sub:
      case FormulaKind::Eq:
        c.lhs = compile(f.lhs());
        c.rhs = compile(f.rhs());
        break;
      case FormulaKind::CardEq:
      case FormulaKind::CardGeq:
        c.lhs = compile(f.term());
        c.n = f.bound();
        break;
      case FormulaKind::Not:
        c.a = compile(f.left());
        break;
      case FormulaKind::Exists:
      case FormulaKind::Forall:
        c.slot = static_cast<int>(slot_count_++);
        scope_.emplace_back(f.var(), c.slot);
        c.a = compile(f.body());
        scope_.pop_back();
        break;
      default:
        c.a = compile(f.left());
        c.b = compile(f.right());
    }
    formulas_.push_back(c);
    return static_cast<int>(formulas_.size() - 1);
  }

  std::vector<std::pair<std::string, int>> scope_;
  std::size_t slot_count_ = 0;
  std::vector<CTerm> terms_;
  std::vector<CFormula> formulas_;
  int root_ = -1;
};

class Evaluator {
 public:
  Evaluator(const Program& program, const Assignment& a, std::uint64_t fresh_budget, Search search)
      : prog_(program), fresh_budget_(fresh_budget), search_(search), env_(program.slot_count()) {
    int slot = 0;
    for (const auto& [name, set] : a) {
      Bits bits;
      for (std::uint64_t e : set.elements()) bits.set(index_of(e));
      env_[static_cast<std::size_t>(slot)] = bits;
      active_.push_back(slot);
      ++slot;
    }
  }

  bool run() { return eval(prog_.root()); }

 private:
  std::size_t index_of(std::uint64_t natural) {
    auto it = index_.find(natural);
    if (it != index_.end()) return it->second;
    if (naturals_.size() >= kMaxElements)
      throw EvaluationError("bounded search needs more than " + std::to_string(kMaxElements) + " elements");
    naturals_.push_back(natural);
    index_.emplace(natural, naturals_.size() - 1);
    return naturals_.size() - 1;
  }

  Bits term(int i) const {
    const CTerm& t = prog_.term(i);
    switch (t.kind) {
      case TermKind::Zero: return Bits{};
      case TermKind::Var: return env_[static_cast<std::size_t>(t.slot)];
      case TermKind::Meet: return term(t.left) & term(t.right);
      case TermKind::Join: return term(t.left) | term(t.right);
      case TermKind::Diff: return term(t.left) & ~term(t.right);
    }
    return Bits{};
  }

  bool eval(int i) {
    const CFormula& f = prog_.formula(i);
    switch (f.kind) {
      case FormulaKind::Sub: return (term(f.lhs) & ~term(f.rhs)).none();
      case FormulaKind::Eq: return term(f.lhs) == term(f.rhs);
      case FormulaKind::CardEq: return term(f.lhs).count() == f.n;
      case FormulaKind::CardGeq: return term(f.lhs).count() >= f.n;
      case FormulaKind::Not: return !eval(f.a);
      case FormulaKind::And: return eval(f.a) && eval(f.b);
      case FormulaKind::Or: return eval(f.a) || eval(f.b);
      case FormulaKind::Implies: return !eval(f.a) || eval(f.b);
      case FormulaKind::Iff: return eval(f.a) == eval(f.b);
      case FormulaKind::Exists: return quantify(f, true);
      case FormulaKind::Forall: return quantify(f, false);
    }
    return false;
  }

  // Bits of the current support S, and F fresh elements outside it.
  std::pair<Bits, std::vector<std::size_t>> support() {
    Bits s;
    for (int slot : active_) s |= env_[static_cast<std::size_t>(slot)];
    std::vector<std::uint64_t> used;
    for (std::size_t b = 0; b < naturals_.size(); ++b) {
      if (s.test(b)) used.push_back(naturals_[b]);
    }
    std::sort(used.begin(), used.end());
    std::vector<std::size_t> fresh;
    std::uint64_t candidate = 0;
    std::size_t u = 0;
    while (fresh.size() < fresh_budget_) {
      while (u < used.size() && used[u] < candidate) ++u;
      if (u < used.size() && used[u] == candidate) {
        ++candidate;
        continue;
      }
      fresh.push_back(index_of(candidate));
      ++candidate;
    }
    return {s, fresh};
  }

  std::vector<std::size_t> ascending(const Bits& bits) const {
    std::vector<std::size_t> out;
    for (std::size_t b = 0; b < naturals_.size(); ++b) {
      if (bits.test(b)) out.push_back(b);
    }
    std::sort(out.begin(), out.end(), [&](std::size_t l, std::size_t r) { return naturals_[l] < naturals_[r]; });
    return out;
  }

  bool quantify(const CFormula& f, bool exists) {
    auto [s, fresh] = support();
    const auto slot = static_cast<std::size_t>(f.slot);
    const Bits saved = env_[slot];
    active_.push_back(f.slot);
    bool result = search_ == Search::Exhaustive ? exhaustive(f, exists, s, fresh) : orbits(f, exists, s, fresh);
    active_.pop_back();
    env_[slot] = saved;
    return result;
  }

  bool exhaustive(const CFormula& f, bool exists, const Bits& s, const std::vector<std::size_t>& fresh) {
    std::vector<std::size_t> candidates = ascending(s);
    candidates.insert(candidates.end(), fresh.begin(), fresh.end());
    if (candidates.size() > kMaxExhaustiveSupport) {
      throw EvaluationError("exhaustive search support of " + std::to_string(candidates.size()) +
                            " elements exceeds " + std::to_string(kMaxExhaustiveSupport));
    }
    const auto slot = static_cast<std::size_t>(f.slot);
    const std::uint64_t count = std::uint64_t{1} << candidates.size();
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      Bits x;
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        if ((mask >> i) & 1U) x.set(candidates[i]);
      }
      env_[slot] = x;
      if (eval(f.a) == exists) return exists;
    }
    return !exists;
  }

  bool orbits(const CFormula& f, bool exists, const Bits& s, const std::vector<std::size_t>& fresh) {
    // Partition S by membership in each set in scope; fresh elements form one more region.
    std::vector<std::vector<std::size_t>> regions;
    {
      std::map<std::vector<bool>, std::size_t> by_signature;
      for (std::size_t b : ascending(s)) {
        std::vector<bool> sig;
        sig.reserve(active_.size() - 1);
        for (std::size_t i = 0; i + 1 < active_.size(); ++i) sig.push_back(env_[static_cast<std::size_t>(active_[i])].test(b));
        auto [it, inserted] = by_signature.emplace(sig, regions.size());
        if (inserted) regions.emplace_back();
        regions[it->second].push_back(b);
      }
    }
    if (!fresh.empty()) regions.push_back(fresh);

    const auto slot = static_cast<std::size_t>(f.slot);
    std::vector<std::size_t> take(regions.size(), 0);
    for (;;) {
      Bits x;
      for (std::size_t r = 0; r < regions.size(); ++r) {
        for (std::size_t i = 0; i < take[r]; ++i) x.set(regions[r][i]);
      }
      env_[slot] = x;
      if (eval(f.a) == exists) return exists;
      std::size_t r = 0;
      while (r < regions.size() && take[r] == regions[r].size()) take[r++] = 0;
      if (r == regions.size()) return !exists;
      ++take[r];
    }
  }

  const Program& prog_;
  std::uint64_t fresh_budget_;
  Search search_;
  std::vector<Bits> env_;
  std::vector<int> active_;
  std::vector<std::uint64_t> naturals_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

}  // namespace

bool eval_formula(const Formula& f, const Assignment& a, std::uint64_t fresh_budget, Search search) {
  Program program(f, a);
  Evaluator evaluator(program, a, fresh_budget, search);
  return evaluator.run();
}

Assignment random_assignment(const std::vector<std::string>& vars, std::size_t universe_size,
                             std::mt19937_64& rng) {
  Assignment a;
  for (const std::string& v : vars) {
    std::vector<std::uint64_t> elems;
    for (std::size_t e = 0; e < universe_size; ++e) {
      if (rng() >> 63) elems.push_back(e);
    }
    a[v] = FinSet(std::move(elems));
  }
  return a;
}

std::optional<Counterexample> check_equivalence(const Formula& f, const Formula& g, std::size_t sample_count,
                                                std::size_t universe_size, std::uint64_t seed,
                                                std::optional<std::uint64_t> fresh_budget) {
  std::vector<std::string> vars = free_variables(f);
  for (const std::string& v : free_variables(g)) {
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  }
  // A quantifier-free side never draws fresh atoms, so only quantified sides
  // contribute; the eliminated side's bound grows with its (large) atom count.
  std::uint64_t fresh = 0;
  for (const Formula* side : {&f, &g}) {
    if (quantifier_depth(*side) > 0) fresh = std::max(fresh, witness_bound(*side));
  }
  if (fresh_budget) fresh = *fresh_budget;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < sample_count; ++i) {
    Assignment a = random_assignment(vars, universe_size, rng);
    bool lhs = eval_formula(f, a, fresh);
    bool rhs = eval_formula(g, a, fresh);
    if (lhs != rhs) return Counterexample{std::move(a), lhs, rhs, i};
  }
  return std::nullopt;
}

std::string to_string(const Assignment& a) {
  std::string out = "{";
  bool first = true;
  for (const auto& [name, set] : a) {
    if (!first) out += ", ";
    first = false;
    out += name + " -> " + set.to_string();
  }
  return out + "}";
}

}  // namespace mereo::finmodel
