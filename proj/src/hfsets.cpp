#include "mereo/hfsets.hpp"

#include <algorithm>
#include <random>
#include <unordered_map>

namespace mereo::hf {

struct HfSet::Node {
  std::vector<HfSet> children;
  std::size_t hash = 0x9e3779b97f4a7c15ULL;
  std::uint32_t rank = 0;
};

HfSet::HfSet() {
  static const std::shared_ptr<const Node> empty = std::make_shared<const Node>();
  node_ = empty;
}

HfSet HfSet::of(std::vector<HfSet> children) {
  std::sort(children.begin(), children.end());
  children.erase(std::unique(children.begin(), children.end()), children.end());
  if (children.empty()) return HfSet{};
  auto node = std::make_shared<Node>();
  std::size_t h = 0x51ed27a3c4f1b2d9ULL ^ children.size();
  for (const HfSet& c : children) {
    h ^= c.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    node->rank = std::max(node->rank, c.rank() + 1);
  }
  node->hash = h;
  node->children = std::move(children);
  return HfSet(std::shared_ptr<const Node>(std::move(node)));
}

const std::vector<HfSet>& HfSet::children() const { return node_->children; }
std::uint32_t HfSet::rank() const { return node_->rank; }
std::size_t HfSet::hash() const { return node_->hash; }

bool operator==(const HfSet& a, const HfSet& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.rank() != b.rank() || a.size() != b.size()) return false;
  return a.children() == b.children();
}

std::strong_ordering operator<=>(const HfSet& a, const HfSet& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.rank() <=> b.rank(); c != 0) return c;
  return std::lexicographical_compare_three_way(a.children().begin(), a.children().end(), b.children().begin(),
                                                b.children().end());
}

// ---------------------------------------------------------------------------

namespace {

class BraceParser {
 public:
  explicit BraceParser(std::string_view text) : text_(text) {}

  HfSet run() {
    HfSet s = set();
    skip();
    if (pos_ != text_.size()) fail("trailing input");
    return s;
  }

 private:
  void skip() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                   text_[pos_] == '\r'))
      ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw HfParseError("hereditarily finite set, column " + std::to_string(pos_ + 1) + ": " + what);
  }

  void expect(char c) {
    skip();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  HfSet set() {
    expect('{');
    std::vector<HfSet> children;
    skip();
    if (pos_ < text_.size() && text_[pos_] == '}') {
      ++pos_;
      return HfSet{};
    }
    for (;;) {
      children.push_back(set());
      skip();
      if (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      expect('}');
      return HfSet::of(std::move(children));
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void render_into(const HfSet& s, std::string& out) {
  out += '{';
  bool first = true;
  for (const HfSet& c : s.children()) {
    if (!first) out += ',';
    first = false;
    render_into(c, out);
  }
  out += '}';
}

}  // namespace

HfSet parse_hf(std::string_view text) { return BraceParser(text).run(); }

std::string render(const HfSet& s) {
  std::string out;
  render_into(s, out);
  return out;
}

bool mem(const HfSet& a, const HfSet& b) {
  return std::binary_search(b.children().begin(), b.children().end(), a);
}

bool subset(const HfSet& u, const HfSet& v) {
  return std::includes(v.children().begin(), v.children().end(), u.children().begin(), u.children().end());
}

HfSet singleton(const HfSet& a) { return HfSet::of({a}); }

HfSet theta(const HfSet& a, const HfSet& z) {
  if (a == z) return singleton(z);
  if (a.size() == 1 && a.children().front() == z) return z;
  return a;
}

HfSet tau(const HfSet& u, const HfSet& z) {
  std::vector<HfSet> image;
  image.reserve(u.size());
  for (const HfSet& a : u.children()) image.push_back(theta(a, z));
  return HfSet::of(std::move(image));
}

bool mem_star(const HfSet& a, const HfSet& b, const HfSet& z) { return mem(tau(a, z), tau(b, z)); }

// ---------------------------------------------------------------------------

RankUniverse::RankUniverse(std::size_t max_rank) : max_rank_(max_rank) {
  if (max_rank > kMaxUniverseRank)
    throw std::invalid_argument("universe rank " + std::to_string(max_rank) + " exceeds the feasibility limit " +
                                std::to_string(kMaxUniverseRank));
  sets_ = {HfSet{}};
  for (std::size_t r = 1; r <= max_rank; ++r) {
    const std::vector<HfSet> lower = std::move(sets_);
    const std::size_t count = std::size_t{1} << lower.size();
    sets_.clear();
    sets_.reserve(count);
    for (std::size_t code = 0; code < count; ++code) {
      std::vector<HfSet> children;
      for (std::size_t j = 0; j < lower.size(); ++j) {
        if ((code >> j) & 1U) children.push_back(lower[j]);
      }
      sets_.push_back(HfSet::of(std::move(children)));
    }
    lower_size_ = lower.size();
  }
}

namespace {

// Ackermann code; only called on sets of rank <= 4, whose child codes are < 16.
std::uint32_t ackermann(const HfSet& s) {
  std::uint32_t code = 0;
  for (const HfSet& c : s.children()) code |= std::uint32_t{1} << ackermann(c);
  return code;
}

}  // namespace

std::optional<std::uint32_t> RankUniverse::index_of(const HfSet& s) const {
  if (s.rank() > max_rank_) return std::nullopt;
  return ackermann(s);
}

// ---------------------------------------------------------------------------

nlohmann::ordered_json Report::to_json() const {
  nlohmann::ordered_json j;
  j["check"] = check;
  j["universe_rank"] = universe_rank;
  j["z"] = z.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(z);
  j["pairs_checked"] = pairs_checked;
  j["exhaustive"] = exhaustive;
  j["verdict"] = pass ? "pass" : "fail";
  if (counterexample) j["counterexample"] = *counterexample;
  if (!witnesses.empty()) j["witnesses"] = witnesses;
  return j;
}

void check_universe_for(std::size_t n, const HfSet& z) {
  if (n > kMaxUniverseRank)
    throw std::invalid_argument("universe rank " + std::to_string(n) + " exceeds the feasibility limit " +
                                std::to_string(kMaxUniverseRank));
  if (z.rank() + 2 > n)
    throw std::invalid_argument("universe of rank " + std::to_string(n) + " is too small for z = " + render(z) +
                                ": need rank(z) + 2 <= rank");
}

namespace {

using Json = nlohmann::ordered_json;

// tau over the universe by code, in both directions. nullopt forward means
// tau(u) left the universe; nullopt backward means nothing maps there.
struct TauTable {
  std::vector<std::optional<std::uint32_t>> fwd;
  std::vector<std::optional<std::uint32_t>> inv;
  std::optional<std::uint32_t> escaping;   // first u with tau(u) outside
  std::optional<std::uint32_t> collision;  // first u whose image was already taken

  TauTable(const RankUniverse& u, const std::optional<HfSet>& z) : fwd(u.size()), inv(u.size()) {
    for (std::uint32_t code = 0; code < u.size(); ++code) {
      const HfSet& s = u.sets()[code];
      fwd[code] = z ? u.index_of(tau(s, *z)) : std::optional<std::uint32_t>(code);
      if (!fwd[code]) {
        if (!escaping) escaping = code;
        continue;
      }
      if (inv[*fwd[code]]) {
        if (!collision) collision = code;
        continue;
      }
      inv[*fwd[code]] = code;
    }
  }
};

// Visits every ordered pair when that fits the budget, otherwise `budget`
// sampled pairs: even draws uniform, odd draws from `structured`. Stops early
// when `visit` returns false.
template <class Structured, class Visit>
void sweep_pairs(std::size_t size, const Sampling& sampling, Structured structured, Visit visit, Report& report) {
  const std::uint64_t total = static_cast<std::uint64_t>(size) * size;
  if (total <= sampling.pair_budget) {
    report.exhaustive = true;
    for (std::uint32_t u = 0; u < size; ++u) {
      for (std::uint32_t v = 0; v < size; ++v) {
        ++report.pairs_checked;
        if (!visit(u, v)) return;
      }
    }
    return;
  }
  report.exhaustive = false;
  std::mt19937_64 rng(sampling.seed);
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(size - 1));
  for (std::uint64_t i = 0; i < sampling.pair_budget; ++i) {
    std::uint32_t u = pick(rng);
    std::uint32_t v = pick(rng);
    if (i % 2 == 1) std::tie(u, v) = structured(u, v);
    ++report.pairs_checked;
    if (!visit(u, v)) return;
  }
}

// Sizes are powers of two, so or-ing codes stays in range and gives a superset.
auto superset_pair(std::uint32_t u, std::uint32_t v) { return std::pair{u, u | v}; }

Report base_report(const char* check, std::size_t n, const std::optional<HfSet>& z) {
  Report r;
  r.check = check;
  r.universe_rank = n;
  if (z) r.z = render(*z);
  return r;
}

bool tau_closed(const TauTable& t, const RankUniverse& u, Report& report) {
  if (t.escaping) {
    report.counterexample = Json{{"reason", "tau leaves the universe"}, {"u", render(u.sets()[*t.escaping])}};
    return false;
  }
  if (t.collision) {
    report.counterexample = Json{{"reason", "tau is not injective"}, {"u", render(u.sets()[*t.collision])}};
    return false;
  }
  return true;
}

}  // namespace

Report verify_same_inclusion(std::size_t n, const HfSet& z, const Sampling& sampling) {
  check_universe_for(n, z);
  Report report = base_report("same-inclusion", n, z);
  RankUniverse universe(n);
  const auto& sets = universe.sets();
  TauTable t(universe, z);
  if (!tau_closed(t, universe, report)) return report;

  // star[u] = { a : a in* u } as a mask over codes. Every child of tau(u) has
  // a code below lower_size(), and so does its preimage whenever tau
  // permutes the lower universe; anything else is reported.
  std::vector<std::uint64_t> star(universe.size(), 0);
  for (std::uint32_t u = 0; u < universe.size(); ++u) {
    for (const HfSet& c : sets[*t.fwd[u]].children()) {
      const std::optional<std::uint32_t> a = t.inv[*universe.index_of(c)];
      if (!a) continue;
      if (*a >= 64) {
        report.counterexample = Json{{"reason", "in*-member outside the lower universe"},
                                     {"a", render(sets[*a])},
                                     {"u", render(sets[u])}};
        return report;
      }
      star[u] |= std::uint64_t{1} << *a;
    }
  }

  bool agree = true;
  sweep_pairs(
      universe.size(), sampling, superset_pair,
      [&](std::uint32_t u, std::uint32_t v) {
        const bool inclusion = subset(sets[u], sets[v]);
        const bool star_inclusion = (star[u] & ~star[v]) == 0;
        if (inclusion == star_inclusion) return true;
        agree = false;
        report.counterexample = Json{{"u", render(sets[u])},
                                     {"v", render(sets[v])},
                                     {"subset", inclusion},
                                     {"star_subset", star_inclusion}};
        return false;
      },
      report);
  if (!agree) return report;

  // The two membership relations differ somewhere.
  for (std::uint32_t a = 0; a < universe.size(); ++a) {
    for (std::uint32_t b = 0; b < universe.size(); ++b) {
      const bool m = mem(sets[a], sets[b]);
      const bool ms = mem_star(sets[a], sets[b], z);
      if (m != ms) {
        report.witnesses["membership_discrepancy"] =
            Json{{"a", render(sets[a])}, {"b", render(sets[b])}, {"mem", m}, {"mem_star", ms}};
        report.pass = true;
        return report;
      }
    }
  }
  report.counterexample = Json{{"reason", "mem and mem_star agree on the whole universe"}};
  return report;
}

Report verify_automorphism(std::size_t n, const HfSet& z, const Sampling& sampling, bool identity_control) {
  check_universe_for(n, z);
  Report report = base_report(identity_control ? "automorphism-identity-control" : "automorphism", n, z);
  RankUniverse universe(n);
  const auto& sets = universe.sets();
  TauTable t(universe, identity_control ? std::nullopt : std::optional<HfSet>(z));
  // Injective on a finite set, hence onto.
  if (!tau_closed(t, universe, report)) return report;

  std::optional<Json> moved;
  bool ok = true;
  sweep_pairs(
      universe.size(), sampling, superset_pair,
      [&](std::uint32_t u, std::uint32_t v) {
        const HfSet& tu = sets[*t.fwd[u]];
        const HfSet& tv = sets[*t.fwd[v]];
        const bool s = subset(sets[u], sets[v]);
        const bool ts = subset(tu, tv);
        if (s != ts) {
          ok = false;
          report.counterexample = Json{{"u", render(sets[u])}, {"v", render(sets[v])}, {"subset", s},
                                       {"tau_subset", ts}};
          return false;
        }
        if (!moved && mem(sets[u], sets[v]) != mem(tu, tv)) {
          moved = Json{{"a", render(sets[u])}, {"b", render(sets[v])}, {"mem", mem(sets[u], sets[v])},
                       {"mem_tau", mem(tu, tv)}};
        }
        return true;
      },
      report);
  if (!ok) return report;

  std::optional<std::uint32_t> nontrivial;
  for (std::uint32_t u = 0; u < universe.size() && !nontrivial; ++u) {
    if (*t.fwd[u] != u) nontrivial = u;
  }

  if (identity_control) {
    if (nontrivial) {
      report.counterexample = Json{{"reason", "identity theta moved a set"}, {"u", render(sets[*nontrivial])}};
      return report;
    }
    if (moved) {
      report.counterexample = Json{{"reason", "identity theta moved membership"}, {"pair", *moved}};
      return report;
    }
    report.witnesses["tau_is_identity"] = true;
    report.pass = true;
    return report;
  }

  if (!nontrivial) {
    report.counterexample = Json{{"reason", "tau is the identity"}};
    return report;
  }
  report.witnesses["nontrivial"] = Json{{"u", render(sets[*nontrivial])}, {"tau_u", render(sets[*t.fwd[*nontrivial]])}};
  // Report the first witness in code order rather than whatever the sweep hit.
  moved.reset();
  {
    for (std::uint32_t a = 0; a < universe.lower_size() && !moved; ++a) {
      for (std::uint32_t b = 0; b < universe.size() && !moved; ++b) {
        const bool m = mem(sets[a], sets[b]);
        const bool mt = mem(sets[*t.fwd[a]], sets[*t.fwd[b]]);
        if (m != mt) moved = Json{{"a", render(sets[a])}, {"b", render(sets[b])}, {"mem", m}, {"mem_tau", mt}};
      }
    }
  }
  if (!moved) {
    report.counterexample = Json{{"reason", "tau preserves membership"}};
    return report;
  }
  report.witnesses["membership_moved"] = *moved;
  report.pass = true;
  return report;
}

// ---------------------------------------------------------------------------

EtaExtraction::EtaExtraction(std::size_t n, const HfSet& z)
    : universe_((check_universe_for(n, z), n)),
      z_(z),
      eta_(universe_.size()),
      theta_rec_(universe_.size()),
      star_cache_(universe_.size()) {
  const auto& sets = universe_.sets();
  TauTable t(universe_, z);
  for (std::uint32_t a = 0; a < universe_.size(); ++a) {
    const std::optional<std::uint32_t> s = universe_.index_of(singleton(sets[a]));
    if (!s || !t.fwd[*s]) continue;  // {a} is outside the universe: eta(a) undefined here
    // x in* {a} iff tau(x) is a child of tau({a}); the inverse table lists
    // every such x in the universe.
    std::vector<std::uint32_t> witnesses;
    for (const HfSet& c : sets[*t.fwd[*s]].children()) {
      if (auto x = t.inv[*universe_.index_of(c)]) witnesses.push_back(*x);
    }
    if (witnesses.size() != 1) {
      issues_.push_back(Issue{sets[a], witnesses.size()});
      continue;
    }
    eta_[a] = witnesses.front();
    theta_rec_[witnesses.front()] = a;
  }
}

std::optional<HfSet> EtaExtraction::eta(const HfSet& a) const {
  auto code = universe_.index_of(a);
  if (!code || !eta_[*code]) return std::nullopt;
  return universe_.sets()[*eta_[*code]];
}

std::optional<HfSet> EtaExtraction::theta_rec(const HfSet& y) const {
  auto code = universe_.index_of(y);
  if (!code || !theta_rec_[*code]) return std::nullopt;
  return universe_.sets()[*theta_rec_[*code]];
}

std::optional<std::uint32_t> EtaExtraction::star_code(std::uint32_t b) const {
  if (star_cache_[b]) return *star_cache_[b];
  std::vector<HfSet> children;
  std::optional<std::uint32_t> result;
  bool defined = true;
  for (const HfSet& a : universe_.sets()[b].children()) {
    const std::optional<std::uint32_t> as = star_code(*universe_.index_of(a));
    if (!as || !theta_rec_[*as]) {
      defined = false;
      break;
    }
    children.push_back(universe_.sets()[*theta_rec_[*as]]);
  }
  if (defined) result = universe_.index_of(HfSet::of(std::move(children)));
  star_cache_[b] = result;
  return result;
}

std::optional<HfSet> EtaExtraction::star_map(const HfSet& b) const {
  auto code = universe_.index_of(b);
  if (!code) return std::nullopt;
  auto s = star_code(*code);
  if (!s) return std::nullopt;
  return universe_.sets()[*s];
}

EtaExtraction extract_eta(std::size_t n, const HfSet& z) { return EtaExtraction(n, z); }

Report verify_eta(std::size_t n, const HfSet& z, std::size_t max_rank) {
  Report report = base_report("eta-extraction", n, z);
  EtaExtraction e(n, z);
  const auto& sets = e.universe().sets();
  std::vector<std::uint32_t> domain;
  for (std::uint32_t a = 0; a < sets.size(); ++a) {
    if (sets[a].rank() <= max_rank) domain.push_back(a);
  }
  report.witnesses["checked_rank"] = max_rank;

  for (const auto& issue : e.issues()) {
    if (issue.a.rank() <= max_rank) {
      report.counterexample = Json{{"reason", issue.witnesses == 0 ? "no eta witness" : "eta witness not unique"},
                                   {"a", render(issue.a)},
                                   {"witnesses", issue.witnesses}};
      return report;
    }
  }
  Json etas = Json::array();
  for (std::uint32_t a : domain) {
    auto x = e.eta(sets[a]);
    if (!x) {
      report.counterexample = Json{{"reason", "eta undefined inside the checked rank"}, {"a", render(sets[a])}};
      return report;
    }
    etas.push_back(Json{{"a", render(sets[a])}, {"eta", render(*x)}});
  }
  report.witnesses["eta"] = etas;

  std::size_t undefined_outside = 0;
  for (std::uint32_t a = 0; a < sets.size(); ++a) {
    if (sets[a].rank() > max_rank && !e.eta(sets[a])) ++undefined_outside;
  }
  report.witnesses["eta_undefined_above_checked_rank"] = undefined_outside;

  std::vector<std::optional<HfSet>> star(domain.size());
  Json star_undefined = Json::array();
  std::unordered_map<HfSet, std::uint32_t, HfSetHash> preimage;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    const HfSet& b = sets[domain[i]];
    star[i] = e.star_map(b);
    if (!star[i]) {
      star_undefined.push_back(render(b));
      continue;
    }
    auto [it, inserted] = preimage.emplace(*star[i], domain[i]);
    if (!inserted) {
      report.counterexample = Json{{"reason", "star_map is not injective"},
                                   {"a", render(sets[it->second])},
                                   {"b", render(b)},
                                   {"star", render(*star[i])}};
      return report;
    }
  }
  report.witnesses["star_map_undefined"] = star_undefined;

  for (std::size_t i = 0; i < domain.size(); ++i) {
    for (std::size_t j = 0; j < domain.size(); ++j) {
      if (!star[i] || !star[j]) continue;
      ++report.pairs_checked;
      const bool m = mem(sets[domain[i]], sets[domain[j]]);
      const bool ms = mem_star(*star[i], *star[j], z);
      if (m != ms) {
        report.counterexample = Json{{"reason", "star_map does not transport membership"},
                                     {"a", render(sets[domain[i]])},
                                     {"b", render(sets[domain[j]])},
                                     {"mem", m},
                                     {"mem_star_of_images", ms}};
        return report;
      }
    }
  }
  report.pass = true;
  return report;
}

Report verify_singleton_interdef(std::size_t n, const Sampling& sampling) {
  Report report = base_report("singleton-interdefinability", n, std::nullopt);
  RankUniverse universe(n);
  const auto& sets = universe.sets();
  const std::size_t lower = universe.lower_size();
  sweep_pairs(
      universe.size(), sampling,
      // Put x into y so that membership holds for half the sampled pairs.
      [&](std::uint32_t x, std::uint32_t y) {
        x %= static_cast<std::uint32_t>(std::max<std::size_t>(lower, 1));
        return std::pair{x, lower ? (y | (std::uint32_t{1} << x)) : y};
      },
      [&](std::uint32_t x, std::uint32_t y) {
        const bool m = mem(sets[x], sets[y]);
        const bool s = subset(singleton(sets[x]), sets[y]);
        if (m == s) return true;
        report.counterexample = Json{{"x", render(sets[x])}, {"y", render(sets[y])}, {"mem", m},
                                     {"singleton_subset", s}};
        return false;
      },
      report);
  report.pass = !report.counterexample;
  if (report.pass) {
    report.witnesses["instance"] = Json{{"x", "{}"}, {"y", "{{}}"}, {"mem", mem(HfSet{}, singleton(HfSet{}))},
                                        {"singleton_subset", subset(singleton(HfSet{}), singleton(HfSet{}))}};
  }
  return report;
}

}  // namespace mereo::hf
