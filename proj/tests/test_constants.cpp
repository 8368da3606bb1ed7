#include "cayley/constants.hpp"
#include "cayley/error.hpp"

#include <doctest.h>

#include <cmath>

using namespace cayley;

namespace {

BoundParams csc(Rational c, Rational alpha, std::int64_t s_size = 2) {
  BoundParams p;
  p.form = BoundForm::Csc;
  p.c = std::move(c);
  p.alpha = std::move(alpha);
  p.s_size = s_size;
  return p;
}

BoundParams folner(Rational c, Rational alpha, Rational rho, std::int64_t s_size) {
  BoundParams p;
  p.form = BoundForm::Folner;
  p.c = std::move(c);
  p.alpha = std::move(alpha);
  p.rho = std::move(rho);
  p.s_size = s_size;
  return p;
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

/// |B(x)| in Z for a real radius x.
BigInt z_ball(const Rational& x) { return x < 0 ? BigInt(0) : BigInt(2 * floor_of(x) + 1); }

/// Boundary of a subset of Z/4 (bitmask) with generators +1, -1.
std::size_t cyclic_boundary(unsigned mask) {
  std::size_t count = 0;
  for (unsigned i = 0; i < 4; ++i) {
    if (!((mask >> i) & 1)) continue;
    const bool right = (mask >> ((i + 1) % 4)) & 1;
    const bool left = (mask >> ((i + 3) % 4)) & 1;
    if (!right || !left) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("csc to folner passes parameters through") {
  const BoundParams out = csc_to_folner(csc(Rational(1, 2), 1), 1);
  CHECK(out.form == BoundForm::Folner);
  CHECK(out.c == Rational(1, 2));
  CHECK(out.alpha == 1);
  CHECK(out.rho == 1);
  CHECK(code_of([] { csc_to_folner(csc(0, 1), 1); }) == ErrorCode::BadParams);
  CHECK(code_of([] { csc_to_folner(csc(1, 1), 0); }) == ErrorCode::BadParams);
}

TEST_CASE("folner to csc inflates the volume") {
  const BoundParams a = folner_to_csc(folner(1, 0, 0, 2));
  CHECK(a.form == BoundForm::Csc);
  CHECK(a.inflation() == 2);
  CHECK(a.alpha == 1);
  CHECK(folner_to_csc(folner(Rational(1, 2), 1, Rational(3, 2), 4)).inflation() == 32);
  CHECK(folner_to_csc(folner(Rational(1, 3), 0, Rational(1, 3), 3)).inflation() == 3);
  CHECK(code_of([] { folner_to_csc(folner(1, 0, 0, 0)); }) == ErrorCode::EmptyGeneratingSet);
  CHECK(code_of([] { folner_to_csc(folner(0, 0, 0, 2)); }) == ErrorCode::BadParams);
}

TEST_CASE("converted strict bound holds on Z records") {
  const BoundParams fol = csc_to_folner(csc(Rational(1, 2), 1), 1);
  const auto records = folner_records(parse_group("z:1"), 6, 14);
  const FolnerFormCheck check = check_folner_form(fol, records, enumerate_ball(parse_group("z:1"), 4));
  CHECK(check.holds);
  REQUIRE(check.rows.size() == 6);
  for (const auto& row : check.rows) {
    CHECK(row.fol == (row.n == 1 ? 1 : 2 * row.n));
    CHECK(row.rhs == Rational(z_ball(Rational(row.n, 2) - 1)) / 2);
  }
  // A bound that is too strong is caught: Fol(n) = 2n < |B(2n)| = 4n + 1.
  const FolnerFormCheck strong = check_folner_form(folner(2, 0, 0, 2), records, enumerate_ball(parse_group("z:1"), 12));
  CHECK_FALSE(strong.holds);
}

TEST_CASE("certification over all subsets of B(2)") {
  const Group z = parse_group("z:1");
  const Certificate pass = certify_at_scale(z, csc(Rational(3, 4), 3), Scope::all_subsets_of_ball2());
  CHECK(pass.holds);
  CHECK(pass.sets_checked == 31);
  CHECK(pass.scope == "all-subsets-of-B(2)");
  CHECK_FALSE(pass.derived_bounds.empty());

  const Certificate fail = certify_at_scale(z, csc(3, 0), Scope::all_subsets_of_ball2());
  CHECK_FALSE(fail.holds);
  REQUIRE(fail.witness.has_value());
  CHECK(fail.witness->size() == 1);
  CHECK(fail.witness->contains(z.identity()));
  const auto j = to_json(fail);
  CHECK(j["holds"] == false);
  CHECK(j["witness"]["size"] == 1);
  CHECK(j["scope"] == "all-subsets-of-B(2)");

  const Certificate z2 = certify_at_scale(parse_group("z:2"), csc(Rational(3, 4), 3), Scope::all_subsets_of_ball2());
  CHECK(z2.holds);
  CHECK(z2.sets_checked == 8191);

  CertifyOptions small;
  small.max_ball2_size = 10;
  CHECK(code_of([&] { certify_at_scale(parse_group("z:2"), csc(1, 0), Scope::all_subsets_of_ball2(), small); }) ==
        ErrorCode::MemoryBudgetExceeded);
}

TEST_CASE("certification over connected sets") {
  const Certificate dinf = certify_at_scale(parse_group("dinf"), csc(Rational(3, 4), 3), Scope::connected(9));
  CHECK(dinf.holds);
  CHECK(dinf.sets_checked == 45);
  CHECK(dinf.scope == "connected-containing-e:9");

  // The inflated bound from folner_to_csc on every connected set of Z up to 9.
  const BoundParams inflated = folner_to_csc(folner(1, 0, 0, 2));
  CHECK(certify_at_scale(parse_group("z:1"), inflated, Scope::connected(9)).holds);
}

TEST_CASE("a finite group passes vacuously") {
  // Z/4 with +-1: balls 1, 3, 4, 4, ...
  const BallTable finite = BallTable::from_counts(parse_group("z:1"), {1, 3, 4, 4}, {0, 2, 4, 4});
  std::vector<SetProfile> profiles;
  for (unsigned mask = 1; mask < 16; ++mask) {
    profiles.push_back(SetProfile{static_cast<std::size_t>(__builtin_popcount(mask)), cyclic_boundary(mask), {}});
  }
  CHECK(profiles.back().boundary == 0);  // the whole group
  const Certificate cert = certify_profiles(profiles, finite, csc(100, 10), "all-subsets-of-Z/4");
  CHECK(cert.holds);
  CHECK(cert.sets_checked == 15);
  // Even the whole group, with empty boundary, has Phi[4] infinite; a
  // singleton still refutes a large constant.
  CHECK(certify_profiles(profiles, finite, csc(1, 0), "all-subsets-of-Z/4").holds);
  const Certificate refuted = certify_profiles(profiles, finite, csc(3, 0), "all-subsets-of-Z/4");
  CHECK_FALSE(refuted.holds);
  CHECK(refuted.failing->size == 1);
}

TEST_CASE("csc and folner forms agree at scale on Z") {
  const Group z = parse_group("z:1");
  const auto records = folner_records(z, 4, 9);
  const BallTable table = enumerate_ball(z, 12);
  for (const Rational c : {Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1), Rational(2)}) {
    for (const Rational alpha : {Rational(0), Rational(1), Rational(3)}) {
      CAPTURE(to_string(c));
      CAPTURE(to_string(alpha));
      const Certificate cert = certify_at_scale(z, csc(c, alpha), Scope::connected(9));
      if (cert.holds) {
        const BoundParams fol = csc_to_folner(csc(c, alpha), 1);
        CHECK(check_folner_form(fol, records, table).holds);
      }
      const BoundParams fol = folner(c, alpha, 1, 2);
      if (check_folner_form(fol, records, table).holds) {
        CHECK(certify_at_scale(z, folner_to_csc(fol), Scope::connected(9)).holds);
      }
    }
  }
}

TEST_CASE("scope labels") {
  CHECK(parse_scope("all-subsets-of-B(2)")->kind == Scope::Kind::AllSubsetsOfBall2);
  CHECK(parse_scope("connected:7")->max_size == 7);
  CHECK(parse_scope("connected-containing-e:9")->label() == "connected-containing-e:9");
  CHECK_FALSE(parse_scope("connected:0").has_value());
  CHECK_FALSE(parse_scope("everything").has_value());
}

TEST_CASE("quotient estimate needs exponential growth") {
  const auto records = folner_records(parse_group("z:1"), 4, 8);
  for (const auto& name : {"z:1", "z:2", "z:3", "heis", "dinf"}) {
    const Group g = parse_group(name);
    CHECK(code_of([&] { quotient_estimate(g, 4, records, enumerate_ball(g, 4)); }) == ErrorCode::NotApplicable);
  }
}

TEST_CASE("quotient estimate for the free group") {
  const Group g = parse_group("free:2");
  const auto records = folner_records(g, 5, 4);
  const QuotientEstimate q = quotient_estimate(g, 5, records, enumerate_ball(g, 5));
  CHECK(q.numerator_lower.infinite);
  CHECK(q.c_lower.infinite);
  CHECK(q.certified);
  CHECK(q.denominator_upper == doctest::Approx(std::log(485.0) / 5));
  CHECK(std::abs(q.denominator_lower_evidence - std::log(3.0)) < 0.02);
  CHECK(q.window_start == 3);
}

TEST_CASE("quotient estimate for the lamplighter stays uncertified") {
  const Group g = parse_group("lamplighter");
  const auto records = folner_records(g, 6, 6);
  const QuotientEstimate q = quotient_estimate(g, 6, records, enumerate_ball(g, 6));
  CHECK_FALSE(q.certified);
  CHECK_FALSE(q.numerator_lower.infinite);
  CHECK_FALSE(q.numerator_upper.infinite);
  CHECK(q.numerator_lower.value <= q.numerator_upper.value);
  CHECK(q.denominator_lower_evidence <= q.denominator_upper);
  CHECK(q.c_lower.value <= q.c_upper_evidence.value);
  CHECK_FALSE(q.caveats.empty());
  const auto j = to_json(q);
  CHECK(j["certified"] == false);

  CHECK(code_of([&] { quotient_estimate(g, 6, records, enumerate_ball(g, 5)); }) == ErrorCode::InsufficientData);
  const auto short_records = folner_records(g, 3, 4);
  CHECK(code_of([&] { quotient_estimate(g, 6, short_records, enumerate_ball(g, 6)); }) ==
        ErrorCode::InsufficientData);
}
