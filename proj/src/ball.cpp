#include "cayley/ball.hpp"

#include "cayley/error.hpp"

#include <algorithm>
#include <ostream>

namespace cayley {

bool GrowthSeries::exhausted() const {
  for (std::size_t r = 1; r < s.size(); ++r) {
    if (s[r] == 0) return true;
  }
  return false;
}

namespace {

void check_radius(const GrowthSeries& series, int r) {
  if (r < 0 || r > series.max_radius()) {
    throw Error(ErrorCode::RadiusOutOfRange,
                "radius " + std::to_string(r) + " outside [0, " + std::to_string(series.max_radius()) + "]");
  }
}

}  // namespace

const BigInt& BallTable::b(int r) const {
  check_radius(series_, r);
  return series_.b[static_cast<std::size_t>(r)];
}

const BigInt& BallTable::s(int r) const {
  check_radius(series_, r);
  return series_.s[static_cast<std::size_t>(r)];
}

const BigInt& BallTable::length_sum(int r) const {
  check_radius(series_, r);
  return series_.length_sum[static_cast<std::size_t>(r)];
}

BigInt BallTable::ball_size_at(const Rational& radius) const {
  if (radius < 0) return 0;
  const BigInt r = floor_of(radius);
  if (r <= max_radius()) return b(static_cast<int>(r));
  if (exhausted()) return series_.b.back();
  throw Error(ErrorCode::HorizonExceeded,
              "|B(" + to_string(radius) + ")| needs radius beyond " + std::to_string(max_radius()));
}

std::size_t BallTable::prefix_size(int r) const {
  if (!has_elements()) throw Error(ErrorCode::PreconditionUnmet, "ball table carries counts only");
  return static_cast<std::size_t>(b(r));
}

std::optional<std::size_t> BallTable::index_of(std::string_view key) const {
  const auto it = index_.find(std::string(key));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> BallTable::norm_of(const Element& g) const {
  const auto idx = index_of(group_.key(g));
  if (!idx) return std::nullopt;
  return norms_[*idx];
}

BallTable BallTable::from_counts(Group group, std::vector<BigInt> b, std::vector<BigInt> length_sum) {
  if (b.empty() || b[0] != 1 || length_sum.size() != b.size() || length_sum[0] != 0) {
    throw Error(ErrorCode::BadParams, "counts must start with b_0 = 1, length_sum_0 = 0");
  }
  BallTable table(std::move(group));
  table.series_.s.push_back(1);
  for (std::size_t r = 1; r < b.size(); ++r) {
    if (b[r] < b[r - 1]) throw Error(ErrorCode::BadParams, "ball counts must be non-decreasing");
    table.series_.s.push_back(b[r] - b[r - 1]);
  }
  table.series_.b = std::move(b);
  table.series_.length_sum = std::move(length_sum);
  return table;
}

BallTable enumerate_ball(const Group& group, int radius, const BallOptions& options) {
  if (radius < 0) throw Error(ErrorCode::RadiusOutOfRange, "negative radius");
  BallTable table(group);
  auto& elements = table.elements_;
  auto& norms = table.norms_;
  auto& series = table.series_;

  elements.push_back(group.identity());
  norms.push_back(0);
  table.index_.emplace(group.key(elements.back()), 0);
  series.b.push_back(1);
  series.s.push_back(1);
  series.length_sum.push_back(0);

  const auto& gens = group.generators();
  std::size_t layer_begin = 0;
  std::size_t layer_end = 1;
  for (int r = 1; r <= radius; ++r) {
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (const auto& s : gens) {
        Element y = group.mul(elements[i], s);
        std::string key = group.key(y);
        if (table.index_.count(key) != 0) continue;
        if (elements.size() >= options.max_elements) {
          throw Error(ErrorCode::MemoryBudgetExceeded,
                      "ball of radius " + std::to_string(r) + " exceeds " +
                          std::to_string(options.max_elements) + " elements",
                      r - 1);
        }
        table.index_.emplace(std::move(key), elements.size());
        elements.push_back(std::move(y));
        norms.push_back(r);
      }
    }
    const std::size_t sphere = elements.size() - layer_end;
    series.s.push_back(sphere);
    series.b.push_back(series.b.back() + sphere);
    series.length_sum.push_back(series.length_sum.back() + BigInt(sphere) * r);
    layer_begin = layer_end;
    layer_end = elements.size();
  }
  return table;
}

BallTable enumerate_ball_beyond(const Group& group, const Rational& volume, int radius_limit,
                                const BallOptions& options) {
  // Doubling keeps the repeated BFS cost within a constant factor.
  int radius = 1;
  while (true) {
    radius = std::min(radius, radius_limit);
    BallTable table = enumerate_ball(group, radius, options);
    if (Rational(table.b(radius)) > volume || table.exhausted() || radius == radius_limit) return table;
    radius *= 2;
  }
}

std::optional<int> distance(const BallTable& table, const Element& x, const Element& y) {
  const Group& g = table.group();
  return table.norm_of(g.mul(g.inv(x), y));
}

GrowthSeries free_group_growth(int rank, int radius) {
  if (rank < 1 || radius < 0) throw Error(ErrorCode::InvalidParams, "free group growth needs rank >= 1, radius >= 0");
  const std::size_t letters = 2 * static_cast<std::size_t>(rank);
  // State i: the word ends with letter i (even = generator, odd = its inverse).
  std::vector<BigInt> ending(letters, 0);
  GrowthSeries series;
  series.b.push_back(1);
  series.s.push_back(1);
  series.length_sum.push_back(0);
  for (int r = 1; r <= radius; ++r) {
    std::vector<BigInt> next(letters, 0);
    for (std::size_t to = 0; to < letters; ++to) {
      if (r == 1) {
        next[to] = 1;
        continue;
      }
      const std::size_t forbidden = to ^ 1U;  // appending `to` after its inverse cancels
      for (std::size_t from = 0; from < letters; ++from) {
        if (from != forbidden) next[to] += ending[from];
      }
    }
    ending = std::move(next);
    BigInt sphere = 0;
    for (const auto& c : ending) sphere += c;
    series.s.push_back(sphere);
    series.b.push_back(series.b.back() + sphere);
    series.length_sum.push_back(series.length_sum.back() + sphere * r);
  }
  return series;
}

std::int64_t PhiValue::radius() const {
  if (!radius_) throw Error(ErrorCode::PreconditionUnmet, "Phi is infinite");
  return *radius_;
}

std::string PhiValue::str() const { return radius_ ? std::to_string(*radius_) : "infinite"; }

PhiValue phi(const BallTable& table, const Rational& v) {
  for (int r = 0; r <= table.max_radius(); ++r) {
    if (Rational(table.b(r)) > v) return PhiValue::finite(r);
  }
  if (table.exhausted()) return PhiValue::infinity();
  throw Error(ErrorCode::HorizonExceeded, "b_" + std::to_string(table.max_radius()) + " = " +
                                              table.b(table.max_radius()).str() + " <= " + to_string(v));
}

Rational average_length(const BallTable& table, int r) {
  return Rational(table.length_sum(r), table.b(r));
}

GrowthEstimate growth_rate_upper(const GrowthSeries& series, int horizon) {
  if (horizon < 1 || horizon > series.max_radius()) {
    throw Error(ErrorCode::RadiusOutOfRange, "growth horizon " + std::to_string(horizon) + " outside [1, " +
                                                 std::to_string(series.max_radius()) + "]");
  }
  GrowthEstimate est;
  est.horizon = horizon;
  double half_inf = 0.0;
  const int half = (horizon + 1) / 2;
  for (int n = 1; n <= horizon; ++n) {
    const double value = log_of(series.b[static_cast<std::size_t>(n)]) / n;
    est.per_n.push_back(value);
    if (n == 1 || value < est.fekete_inf) {
      est.fekete_inf = value;
      est.argmin = n;
    }
    if (n == half) half_inf = est.fekete_inf;
  }
  est.is_exponential_evidence = horizon >= 2 && est.fekete_inf > 0.0 && est.fekete_inf >= 0.75 * half_inf;
  return est;
}

GrowthEstimate growth_rate_upper(const BallTable& table, int horizon) {
  return growth_rate_upper(table.series(), horizon);
}

void write_csv(std::ostream& os, const BallTable& table) {
  os << "r,b_r,s_r,length_sum_r,avg_len_num,avg_len_den\n";
  for (int r = 0; r <= table.max_radius(); ++r) {
    const Rational avg = average_length(table, r);
    os << r << ',' << table.b(r) << ',' << table.s(r) << ',' << table.length_sum(r) << ','
       << numerator_of(avg) << ',' << denominator_of(avg) << '\n';
  }
}

nlohmann::json to_json(const BallTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r <= table.max_radius(); ++r) {
    rows.push_back({{"r", r},
                    {"b_r", to_json(table.b(r))},
                    {"s_r", to_json(table.s(r))},
                    {"length_sum_r", to_json(table.length_sum(r))},
                    {"avg_len", to_json(average_length(table, r))}});
  }
  return {{"group", table.group().descriptor()},
          {"max_radius", table.max_radius()},
          {"exhausted", table.exhausted()},
          {"rows", rows}};
}

}  // namespace cayley
