#pragma once

#include "cayley/group.hpp"
#include "cayley/numeric.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace cayley {

/// Ball and sphere counts b_r, s_r and the length sums sum_{|g| <= r} |g|,
/// for 0 <= r <= max_radius.
struct GrowthSeries {
  std::vector<BigInt> b;
  std::vector<BigInt> s;
  std::vector<BigInt> length_sum;

  int max_radius() const { return static_cast<int>(b.size()) - 1; }
  /// True when some sphere of radius >= 1 is empty: the group is finite and
  /// every ball from there on is the whole group.
  bool exhausted() const;
};

struct BallOptions {
  /// Upper bound on stored elements; BFS stops with MemoryBudgetExceeded past it.
  std::size_t max_elements = 4'000'000;
};

/// Memoized BFS of the Cayley graph around e. Elements are stored in BFS order
/// (generator order within a layer), so the first b_r entries are exactly B(r).
class BallTable {
 public:
  const Group& group() const { return group_; }
  int max_radius() const { return series_.max_radius(); }
  bool exhausted() const { return series_.exhausted(); }
  const GrowthSeries& series() const { return series_; }

  const BigInt& b(int r) const;
  const BigInt& s(int r) const;
  const BigInt& length_sum(int r) const;

  /// |B(x)| for a real radius x: 0 when x < 0, b_floor(x) otherwise.
  /// Past the horizon this is only known for exhausted tables.
  BigInt ball_size_at(const Rational& radius) const;

  bool has_elements() const { return !elements_.empty(); }
  std::size_t element_count() const { return elements_.size(); }
  const Element& element(std::size_t index) const { return elements_.at(index); }
  int norm_at(std::size_t index) const { return norms_.at(index); }
  /// Number of stored elements with norm <= r.
  std::size_t prefix_size(int r) const;

  std::optional<std::size_t> index_of(std::string_view key) const;
  /// Word norm if |g| <= max_radius, nullopt otherwise.
  std::optional<int> norm_of(const Element& g) const;

  /// A table that carries counts only (no elements). Lets callers model a
  /// finite group's stabilized ball, or reuse counts obtained elsewhere.
  static BallTable from_counts(Group group, std::vector<BigInt> b, std::vector<BigInt> length_sum);

 private:
  explicit BallTable(Group group) : group_(std::move(group)) {}
  friend BallTable enumerate_ball(const Group&, int, const BallOptions&);

  Group group_;
  GrowthSeries series_;
  std::vector<Element> elements_;
  std::vector<int> norms_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// BFS to radius R. Throws MemoryBudgetExceeded (carrying the last completed
/// radius) when the ball outgrows the budget.
BallTable enumerate_ball(const Group& group, int radius, const BallOptions& options = {});

/// Smallest table whose ball strictly exceeds `volume` (or which is exhausted),
/// never going past `radius_limit`.
BallTable enumerate_ball_beyond(const Group& group, const Rational& volume, int radius_limit,
                                const BallOptions& options = {});

/// d_S(x, y) = |x^-1 y| when it is within the table's horizon.
std::optional<int> distance(const BallTable& table, const Element& x, const Element& y);

/// Growth counts of the free group of the given rank, obtained by counting
/// reduced words with a last-letter automaton. Needs no element storage, so
/// it reaches radii where BFS cannot.
GrowthSeries free_group_growth(int rank, int radius);

/// Result of the generalized inverse Phi[v] = min{r : b_r > v}. Infinity is
/// only produced for exhausted (finite) groups.
class PhiValue {
 public:
  static PhiValue finite(std::int64_t radius) { return PhiValue(radius); }
  static PhiValue infinity() { return PhiValue(std::nullopt); }

  bool is_infinite() const { return !radius_.has_value(); }
  std::int64_t radius() const;
  std::string str() const;
  bool operator==(const PhiValue&) const = default;

 private:
  explicit PhiValue(std::optional<std::int64_t> r) : radius_(r) {}
  std::optional<std::int64_t> radius_;
};

/// Throws HorizonExceeded when b_R <= v on a table that is not exhausted.
PhiValue phi(const BallTable& table, const Rational& v);

/// E[|X_r|] = length_sum_r / b_r. Throws RadiusOutOfRange.
Rational average_length(const BallTable& table, int r);

struct GrowthEstimate {
  int horizon = 0;
  /// per_n[n - 1] = ln(b_n) / n for 1 <= n <= horizon.
  std::vector<double> per_n;
  double fekete_inf = 0.0;
  int argmin = 0;
  /// Heuristic only: the Fekete infimum did not collapse when the horizon
  /// doubled (>= 3/4 of its value at ceil(N/2)). Polynomial growth makes it
  /// roughly halve.
  bool is_exponential_evidence = false;
};

/// Upper estimate of lim ln(b_n)/n = inf_n ln(b_n)/n at horizon N.
GrowthEstimate growth_rate_upper(const GrowthSeries& series, int horizon);
GrowthEstimate growth_rate_upper(const BallTable& table, int horizon);

/// CSV with columns r,b_r,s_r,length_sum_r,avg_len_num,avg_len_den.
void write_csv(std::ostream& os, const BallTable& table);
nlohmann::json to_json(const BallTable& table);

}  // namespace cayley
