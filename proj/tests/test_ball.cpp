#include "cayley/ball.hpp"
#include "cayley/error.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_map>

using namespace cayley;

namespace {

const std::vector<std::string> kGroups = {"z:1", "z:2", "z:3", "free:2", "dinf", "heis", "lamplighter"};

/// Shortest word length of each element reached by a word of length <= radius.
std::unordered_map<std::string, int> word_lengths(const Group& g, int radius) {
  std::unordered_map<std::string, int> best;
  std::function<void(const Element&, int)> walk = [&](const Element& x, int len) {
    auto [it, inserted] = best.emplace(g.key(x), len);
    if (!inserted) {
      if (it->second <= len) {
        // A shorter visit already explored everything reachable from here.
        return;
      }
      it->second = len;
    }
    if (len == radius) return;
    for (const auto& s : g.generators()) walk(g.mul(x, s), len + 1);
  };
  walk(g.identity(), 0);
  return best;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no cayley::Error thrown");
  return ErrorCode::Usage;
}

}  // namespace

TEST_CASE("closed forms for abelian and free groups") {
  const BallTable z1 = enumerate_ball(parse_group("z:1"), 20);
  const BallTable z2 = enumerate_ball(parse_group("z:2"), 20);
  const BallTable z3 = enumerate_ball(parse_group("z:3"), 12);
  const BallTable f2 = enumerate_ball(parse_group("free:2"), 7);
  const BallTable dinf = enumerate_ball(parse_group("dinf"), 20);
  for (int r = 0; r <= 20; ++r) {
    CHECK(z1.b(r) == 2 * r + 1);
    CHECK(z2.b(r) == 2 * r * r + 2 * r + 1);
    CHECK(dinf.b(r) == 2 * r + 1);
  }
  for (int r = 0; r <= 12; ++r) CHECK(z3.b(r) == (2 * r + 1) * (2 * r * r + 2 * r + 3) / 3);
  int pow3 = 1;
  for (int r = 0; r <= 7; ++r, pow3 *= 3) CHECK(f2.b(r) == 2 * pow3 - 1);
  CHECK(enumerate_ball(parse_group("z:1"), 3).series().b == std::vector<BigInt>{1, 3, 5, 7});
  CHECK(enumerate_ball(parse_group("z:2"), 2).series().b == std::vector<BigInt>{1, 5, 13});
}

TEST_CASE("BFS norms agree with word enumeration") {
  for (const auto& name : kGroups) {
    CAPTURE(name);
    const Group g = parse_group(name);
    const int radius = g.generator_count() > 4 ? 3 : 4;
    const BallTable t = enumerate_ball(g, radius);
    const auto lengths = word_lengths(g, radius);
    CHECK(lengths.size() == t.element_count());
    for (const auto& [key, len] : lengths) {
      const auto idx = t.index_of(key);
      REQUIRE(idx.has_value());
      CHECK(t.norm_at(*idx) == len);
    }
  }
}

TEST_CASE("radius zero holds only the identity") {
  for (const auto& name : kGroups) {
    const BallTable t = enumerate_ball(parse_group(name), 0);
    CHECK(t.series().b == std::vector<BigInt>{1});
    CHECK(t.element_count() == 1);
    CHECK(t.group().is_identity(t.element(0)));
  }
}

TEST_CASE("table invariants and subadditivity") {
  for (const auto& name : kGroups) {
    CAPTURE(name);
    const Group g = parse_group(name);
    const int radius = name == "lamplighter" ? 5 : (name == "free:2" ? 6 : 8);
    const BallTable t = enumerate_ball(g, radius);
    CHECK(t.b(0) == 1);
    for (int r = 1; r <= radius; ++r) {
      CHECK(t.b(r) == t.b(r - 1) + t.s(r));
      CHECK(t.length_sum(r) == t.length_sum(r - 1) + r * t.s(r));
    }
    for (int m = 0; m <= radius; ++m)
      for (int n = 0; m + n <= radius; ++n) CHECK(t.b(m + n) <= t.b(m) * t.b(n));
    for (int r = 2; r <= radius; ++r) {
      CHECK(t.s(r) <= (static_cast<int>(g.generator_count()) - 1) * t.s(r - 1));
      CHECK(t.b(r) <= static_cast<int>(g.generator_count()) * t.b(r - 1));
    }
    for (std::size_t i = 0; i < t.element_count(); ++i) {
      if (i > 0) CHECK(t.norm_at(i - 1) <= t.norm_at(i));
      CHECK(t.norm_of(t.element(i)) == t.norm_at(i));
    }
  }
}

TEST_CASE("distance is a metric on samples") {
  std::mt19937_64 rng(3);
  for (const auto& name : {"z:2", "heis", "lamplighter", "dinf"}) {
    const Group g = parse_group(name);
    const BallTable t = enumerate_ball(g, 6);
    for (int trial = 0; trial < 200; ++trial) {
      const Element x = oracle::random_element(g, rng, 2);
      const Element y = oracle::random_element(g, rng, 2);
      const Element w = oracle::random_element(g, rng, 2);
      const auto dxy = distance(t, x, y);
      REQUIRE(dxy.has_value());
      CHECK(dxy == distance(t, y, x));
      CHECK(*dxy <= *distance(t, x, w) + *distance(t, w, y));
      CHECK((*dxy == 0) == (g.key(x) == g.key(y)));
    }
  }
}

TEST_CASE("phi scans the table") {
  const BallTable z = enumerate_ball(parse_group("z:1"), 12);
  CHECK(phi(z, 5).radius() == 3);
  CHECK(phi(z, 0).radius() == 0);
  CHECK(phi(z, 1).radius() == 1);
  CHECK(phi(z, 20).radius() == 10);
  CHECK(phi(z, Rational(5, 2)).radius() == 1);
  CHECK(code_of([&] { phi(z, 25); }) == ErrorCode::HorizonExceeded);
  for (int r = 0; r <= 12; ++r) {
    CHECK(phi(z, Rational(z.b(r) - 1)).radius() <= r);
    if (r < 12) CHECK(phi(z, Rational(z.b(r))).radius() > r);
  }
}

TEST_CASE("a stabilized ball gives the infinite sentinel") {
  // Z/4 with generators +-1: b = 1, 3, 4, then constant.
  const BallTable finite = BallTable::from_counts(parse_group("z:1"), {1, 3, 4, 4}, {0, 2, 4, 4});
  CHECK(finite.exhausted());
  CHECK(phi(finite, 3).radius() == 2);
  CHECK(phi(finite, 4).is_infinite());
  CHECK(phi(finite, 1000).is_infinite());
  CHECK(phi(finite, 4).str() == "infinite");
  CHECK(finite.ball_size_at(Rational(50)) == 4);
}

TEST_CASE("average length") {
  const BallTable z = enumerate_ball(parse_group("z:1"), 4);
  CHECK(average_length(z, 2) == Rational(6, 5));
  CHECK(average_length(z, 0) == 0);
  const BallTable z2 = enumerate_ball(parse_group("z:2"), 3);
  CHECK(average_length(z2, 1) == Rational(4, 5));
  for (const auto& name : kGroups) {
    const BallTable t = enumerate_ball(parse_group(name), 4);
    for (int r = 0; r <= 4; ++r) CHECK(average_length(t, r) <= r);
  }
  CHECK(code_of([&] { average_length(z, 5); }) == ErrorCode::RadiusOutOfRange);
  CHECK(code_of([&] { z.b(-1); }) == ErrorCode::RadiusOutOfRange);
}

TEST_CASE("ball size at real radii") {
  const BallTable z = enumerate_ball(parse_group("z:1"), 5);
  CHECK(z.ball_size_at(Rational(-1, 2)) == 0);
  CHECK(z.ball_size_at(Rational(0)) == 1);
  CHECK(z.ball_size_at(Rational(5, 2)) == 5);
  CHECK(code_of([&] { z.ball_size_at(Rational(6)); }) == ErrorCode::HorizonExceeded);
}

TEST_CASE("memory budget reports the last completed radius") {
  BallOptions tight;
  tight.max_elements = 100;
  try {
    enumerate_ball(parse_group("free:2"), 6, tight);
    FAIL("expected MemoryBudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MemoryBudgetExceeded);
    REQUIRE(e.last_completed_radius().has_value());
    CHECK(*e.last_completed_radius() == 3);  // b_3 = 53, b_4 = 161
  }
}

TEST_CASE("reduced-word counts match BFS") {
  for (const int rank : {1, 2, 3}) {
    const GrowthSeries automaton = free_group_growth(rank, 6);
    const BallTable t = enumerate_ball(make_group(GroupKind::FreeGroup, rank), 6);
    CHECK(automaton.b == t.series().b);
    CHECK(automaton.s == t.series().s);
    CHECK(automaton.length_sum == t.series().length_sum);
  }
  const GrowthSeries big = free_group_growth(2, 40);
  BigInt pow3 = 1;
  for (int r = 0; r <= 40; ++r, pow3 *= 3) CHECK(big.b[static_cast<std::size_t>(r)] == 2 * pow3 - 1);
}

TEST_CASE("growth rate estimates") {
  const BallTable z = enumerate_ball(parse_group("z:1"), 20);
  const GrowthEstimate ez = growth_rate_upper(z, 10);
  CHECK(ez.argmin == 10);
  CHECK(ez.fekete_inf == doctest::Approx(std::log(21.0) / 10));
  CHECK_FALSE(growth_rate_upper(z, 20).is_exponential_evidence);

  const BallTable f = enumerate_ball(parse_group("free:2"), 5);
  const GrowthEstimate ef = growth_rate_upper(f, 5);
  CHECK(ef.fekete_inf == doctest::Approx(std::log(485.0) / 5));
  CHECK(ef.is_exponential_evidence);
  for (const double v : ef.per_n) CHECK(ef.fekete_inf <= v);
  for (std::size_t i = 1; i < ef.per_n.size(); ++i) CHECK(ef.per_n[i] < ef.per_n[i - 1]);

  CHECK(growth_rate_upper(f, 1).fekete_inf == doctest::Approx(std::log(5.0)));
  CHECK(code_of([&] { growth_rate_upper(f, 6); }) == ErrorCode::RadiusOutOfRange);
  CHECK(code_of([&] { growth_rate_upper(f, 0); }) == ErrorCode::RadiusOutOfRange);
}

TEST_CASE("CSV and JSON export") {
  const BallTable t = enumerate_ball(parse_group("z:2"), 5);
  std::ostringstream os;
  write_csv(os, t);
  std::istringstream lines(os.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "r,b_r,s_r,length_sum_r,avg_len_num,avg_len_den");
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 6);
  CHECK(rows[1] == "1,5,4,4,4,5");
  CHECK(rows[5].rfind("5,61,20,", 0) == 0);
  const auto j = to_json(t);
  CHECK(j["max_radius"] == 5);
  CHECK(j["rows"].size() == 6);
}
