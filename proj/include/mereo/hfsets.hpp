// Hereditarily finite sets at bounded rank: the tau automorphism of inclusion,
// eta extraction with the b -> b* recursion, and singleton interdefinability.

#ifndef MEREO_HFSETS_HPP
#define MEREO_HFSETS_HPP

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace mereo::hf {

// Canonical hereditarily finite set: children are duplicate-free and sorted by
// the total order below (rank first, then lexicographic on children).
class HfSet {
 public:
  HfSet();  // the empty set
  static HfSet of(std::vector<HfSet> children);

  const std::vector<HfSet>& children() const;
  std::size_t size() const { return children().size(); }
  bool empty() const { return children().empty(); }
  std::uint32_t rank() const;
  std::size_t hash() const;

  friend bool operator==(const HfSet& a, const HfSet& b);
  friend std::strong_ordering operator<=>(const HfSet& a, const HfSet& b);

 private:
  struct Node;
  explicit HfSet(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct HfSetHash {
  std::size_t operator()(const HfSet& s) const { return s.hash(); }
};

class HfParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Brace notation: "{}", "{{},{{}}}". Whitespace is ignored.
HfSet parse_hf(std::string_view text);
std::string render(const HfSet& s);

bool mem(const HfSet& a, const HfSet& b);
bool subset(const HfSet& u, const HfSet& v);
HfSet singleton(const HfSet& a);

// Swaps z and {z}, fixes everything else.
HfSet theta(const HfSet& a, const HfSet& z);
// Pointwise image under theta.
HfSet tau(const HfSet& u, const HfSet& z);
// a in* b  <->  tau(a) in tau(b)
bool mem_star(const HfSet& a, const HfSet& b, const HfSet& z);

inline constexpr std::size_t kMaxUniverseRank = 4;

// All sets of rank <= max_rank. sets()[i] is the set whose Ackermann code is i,
// so every lower universe is a prefix of the higher ones.
class RankUniverse {
 public:
  explicit RankUniverse(std::size_t max_rank);

  std::size_t max_rank() const { return max_rank_; }
  const std::vector<HfSet>& sets() const { return sets_; }
  std::size_t size() const { return sets_.size(); }
  // Number of sets of rank < max_rank: the possible children of a member.
  std::size_t lower_size() const { return lower_size_; }

  // Ackermann code of s when rank(s) <= max_rank.
  std::optional<std::uint32_t> index_of(const HfSet& s) const;

 private:
  std::size_t max_rank_;
  std::size_t lower_size_ = 0;
  std::vector<HfSet> sets_;
};

struct Sampling {
  // Most pairs a sweep may check; larger universes are sampled.
  std::uint64_t pair_budget = 1'000'000;
  std::uint64_t seed = 0;
};

struct Report {
  std::string check;
  std::size_t universe_rank = 0;
  std::string z;
  std::uint64_t pairs_checked = 0;
  bool exhaustive = true;
  bool pass = false;
  std::optional<nlohmann::ordered_json> counterexample;
  nlohmann::ordered_json witnesses = nlohmann::ordered_json::object();

  nlohmann::ordered_json to_json() const;
};

// Throws std::invalid_argument unless rank(z) + 2 <= n <= kMaxUniverseRank.
void check_universe_for(std::size_t n, const HfSet& z);

// For all u, v: (for all a: a in* u -> a in* v) <-> u subset v.
// Also requires some a, b with mem(a, b) != mem_star(a, b).
Report verify_same_inclusion(std::size_t n, const HfSet& z, const Sampling& sampling = {});

// tau is a bijection of the universe preserving inclusion both ways, is not
// the identity, and moves membership. With `identity_control` theta is the
// identity instead, and the report expects tau = id with membership preserved.
Report verify_automorphism(std::size_t n, const HfSet& z, const Sampling& sampling = {},
                           bool identity_control = false);

// eta(a) is the unique x with x in* {a}; theta_rec = eta^-1 and
// b* = { theta_rec(a*) | a in b }. Everything is computed inside RankUniverse(n)
// and is undefined (std::nullopt) where it would leave it.
class EtaExtraction {
 public:
  struct Issue {
    HfSet a;
    std::size_t witnesses = 0;  // 0 = missing, > 1 = not unique
  };

  EtaExtraction(std::size_t n, const HfSet& z);

  const RankUniverse& universe() const { return universe_; }
  const HfSet& z() const { return z_; }
  std::optional<HfSet> eta(const HfSet& a) const;
  std::optional<HfSet> theta_rec(const HfSet& y) const;
  std::optional<HfSet> star_map(const HfSet& b) const;
  const std::vector<Issue>& issues() const { return issues_; }

 private:
  std::optional<std::uint32_t> star_code(std::uint32_t b) const;

  RankUniverse universe_;
  HfSet z_;
  std::vector<std::optional<std::uint32_t>> eta_;        // by code of a
  std::vector<std::optional<std::uint32_t>> theta_rec_;  // by code of eta(a)
  mutable std::vector<std::optional<std::optional<std::uint32_t>>> star_cache_;
  std::vector<Issue> issues_;
};

EtaExtraction extract_eta(std::size_t n, const HfSet& z);

// eta exists and is unique for every a of rank <= max_rank; star_map transports
// membership on those pairs and is injective where defined.
Report verify_eta(std::size_t n, const HfSet& z, std::size_t max_rank);

// For all x, y: mem(x, y) <-> subset(singleton(x), y).
Report verify_singleton_interdef(std::size_t n, const Sampling& sampling = {});

}  // namespace mereo::hf

#endif  // MEREO_HFSETS_HPP
