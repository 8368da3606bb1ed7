#include "cayley/error.hpp"
#include "cayley/group.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

using namespace cayley;

namespace {

const std::vector<std::string> kGroups = {"z:1", "z:2", "z:3", "free:1", "free:2", "free:3", "dinf", "heis",
                                          "lamplighter"};

Element z(std::int64_t v) { return ZVector{{v}}; }

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

TEST_CASE("descriptors build the standard generating sets") {
  CHECK(parse_group("z:1").generator_count() == 2);
  CHECK(parse_group("z:3").generator_count() == 6);
  CHECK(parse_group("free:2").generator_count() == 4);
  CHECK(parse_group("dinf").generator_count() == 2);
  CHECK(parse_group("heis").generator_count() == 4);
  CHECK(parse_group("lamplighter").generator_count() == 8);
  for (const auto& name : kGroups) CHECK(parse_group(name).descriptor() == name);

  const Group zz = parse_group("z:1");
  CHECK(zz.generators()[0] == z(1));
  CHECK(zz.generators()[1] == z(-1));
}

TEST_CASE("bad descriptors are rejected") {
  CHECK(code_of([] { parse_group("q:2"); }) == ErrorCode::UnknownKind);
  CHECK(code_of([] { parse_group("sl2"); }) == ErrorCode::UnknownKind);
  CHECK(code_of([] { parse_group("z:0"); }) == ErrorCode::InvalidParams);
  CHECK(code_of([] { parse_group("free:x"); }) == ErrorCode::InvalidParams);
  CHECK(code_of([] { make_group(GroupKind::FreeGroup, 0); }) == ErrorCode::InvalidParams);
}

TEST_CASE("integer arithmetic in Z") {
  const Group g = parse_group("z:1");
  CHECK(g.mul(z(3), z(-5)) == z(-2));
  CHECK(g.inv(z(7)) == z(-7));
  CHECK(g.key(z(0)) == g.key(g.identity()));
  CHECK(g.key(g.mul(z(4), z(-4))) == g.key(g.identity()));
}

TEST_CASE("free group inverse reverses and inverts") {
  const Group g = parse_group("free:2");
  const Element ab_inv = FreeWord{{1, -2}};
  CHECK(g.format(ab_inv) == "ab^-1");
  CHECK(g.format(g.inv(ab_inv)) == "ba^-1");
  CHECK(g.is_identity(g.mul(ab_inv, g.inv(ab_inv))));
}

TEST_CASE("free group products match stack reduction") {
  const Group g = parse_group("free:3");
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> letter(1, 3);
  std::uniform_int_distribution<int> sign(0, 1);
  std::uniform_int_distribution<int> len(0, 9);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::int32_t> u, v;
    for (int i = len(rng); i > 0; --i) u.push_back(letter(rng) * (sign(rng) ? 1 : -1));
    for (int i = len(rng); i > 0; --i) v.push_back(letter(rng) * (sign(rng) ? 1 : -1));
    std::vector<std::int32_t> uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    const Element product = g.mul(FreeWord{oracle::reduce(u)}, FreeWord{oracle::reduce(v)});
    CHECK(product == Element(FreeWord{oracle::reduce(uv)}));
  }
  CHECK(code_of([&] { g.check(FreeWord{{1, -1}}); }) == ErrorCode::MalformedElement);
  CHECK(code_of([&] { g.check(FreeWord{{4}}); }) == ErrorCode::MalformedElement);
}

TEST_CASE("infinite dihedral group against its action on Z") {
  const Group g = parse_group("dinf");
  const Element x = g.generators()[0];
  const Element y = g.generators()[1];
  CHECK(x == Element(DihedralElement{0, 1}));
  CHECK(y == Element(DihedralElement{-1, 1}));  // xa = a^-1 x
  CHECK(g.is_identity(g.mul(x, x)));
  CHECK(g.is_identity(g.mul(y, y)));
  const Element a = DihedralElement{1, 0};
  CHECK(g.mul(x, y) == a);
  CHECK(g.mul(g.mul(x, a), x) == g.inv(a));
  CHECK(g.format(DihedralElement{2, 1}) == "a^2 x");
  CHECK(g.key(DihedralElement{0, 1}) == g.key(g.mul(g.identity(), x)));

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::int64_t> shift(-50, 50);
  std::uniform_int_distribution<int> flip(0, 1);
  for (int trial = 0; trial < 1000; ++trial) {
    const DihedralElement p{shift(rng), flip(rng)};
    const DihedralElement q{shift(rng), flip(rng)};
    const auto product = std::get<DihedralElement>(g.mul(p, q));
    const oracle::AffineMap expected = oracle::as_map(p).then_apply_after(oracle::as_map(q));
    const oracle::AffineMap got = oracle::as_map(product);
    CHECK(got.sign == expected.sign);
    CHECK(got.shift == expected.shift);
  }
}

TEST_CASE("Heisenberg products against 3x3 matrices") {
  const Group g = parse_group("heis");
  CHECK(g.mul(HeisenbergElement{1, 0, 0}, HeisenbergElement{0, 1, 0}) == Element(HeisenbergElement{1, 1, 1}));
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> entry(-20, 20);
  for (int trial = 0; trial < 1000; ++trial) {
    const HeisenbergElement p{entry(rng), entry(rng), entry(rng)};
    const HeisenbergElement q{entry(rng), entry(rng), entry(rng)};
    CHECK(g.mul(p, q) == Element(oracle::matrix_product(p, q)));
    CHECK(g.is_identity(g.mul(p, g.inv(p))));
  }
}

TEST_CASE("lamplighter generators and products against the lamp machine") {
  const Group g = parse_group("lamplighter");
  const std::vector<std::string> words = {"t", "T", "st", "sT", "ts", "Ts", "sts", "sTs"};
  REQUIRE(g.generators().size() == words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    oracle::LampMachine m;
    for (const char c : words[i]) m.step(c);
    CHECK(g.generators()[i] == Element(m.element()));
  }

  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> pick(0, 2);
  std::uniform_int_distribution<int> len(0, 12);
  const char moves[] = {'s', 't', 'T'};
  for (int trial = 0; trial < 500; ++trial) {
    std::string u, v;
    for (int i = len(rng); i > 0; --i) u += moves[pick(rng)];
    for (int i = len(rng); i > 0; --i) v += moves[pick(rng)];
    oracle::LampMachine mu, mv, muv;
    for (const char c : u) mu.step(c);
    for (const char c : v) mv.step(c);
    for (const char c : u + v) muv.step(c);
    CHECK(g.mul(mu.element(), mv.element()) == Element(muv.element()));
  }

  const Element p = LampConfiguration{2, {0}};
  CHECK(g.inv(p) == Element(LampConfiguration{-2, {-2}}));
  CHECK(g.is_identity(g.mul(p, g.inv(p))));
  CHECK(code_of([&] { g.check(LampConfiguration{0, {3, 1}}); }) == ErrorCode::MalformedElement);
}

TEST_CASE("lamp insertion order does not change the key") {
  const Group g = parse_group("lamplighter");
  std::mt19937_64 rng(17);
  std::vector<std::int64_t> lamps = {-4, -1, 0, 3, 8};
  const std::string reference = g.key(LampConfiguration{1, lamps});
  for (int trial = 0; trial < 50; ++trial) {
    std::shuffle(lamps.begin(), lamps.end(), rng);
    oracle::LampMachine m;
    m.position = 1;
    for (const auto l : lamps) m.lit.insert(l);
    CHECK(g.key(m.element()) == reference);
  }
}

TEST_CASE("generator validation") {
  for (const auto& name : kGroups) {
    const Group g = parse_group(name);
    CHECK(validate_generators(g).size == g.generator_count());
  }
  const Group zz = parse_group("z:1");
  CHECK(code_of([&] { validate_generators(zz.with_generators({z(1)})); }) == ErrorCode::NotSymmetric);
  CHECK(code_of([&] { validate_generators(zz.with_generators({z(1), z(-1), z(0)})); }) ==
        ErrorCode::ContainsIdentity);
  CHECK(code_of([&] { validate_generators(zz.with_generators({z(1), z(-1), z(1)})); }) == ErrorCode::Duplicate);
}

TEST_CASE("structural facts") {
  CHECK(parse_group("free:2").known_non_amenable());
  CHECK_FALSE(parse_group("free:1").known_non_amenable());
  CHECK_FALSE(parse_group("lamplighter").known_non_amenable());
  CHECK(parse_group("lamplighter").growth_class() == GrowthClass::Exponential);
  CHECK(parse_group("free:2").growth_class() == GrowthClass::Exponential);
  CHECK(parse_group("heis").growth_class() == GrowthClass::Polynomial);
  CHECK(parse_group("z:3").growth_class() == GrowthClass::Polynomial);
  CHECK(parse_group("dinf").growth_class() == GrowthClass::Polynomial);
}

TEST_CASE("group laws hold on random triples") {
  std::mt19937_64 rng(2024);
  for (const auto& name : kGroups) {
    CAPTURE(name);
    const Group g = parse_group(name);
    for (int trial = 0; trial < 1000; ++trial) {
      const Element a = oracle::random_element(g, rng, 8);
      const Element b = oracle::random_element(g, rng, 8);
      const Element c = oracle::random_element(g, rng, 8);
      CHECK(g.key(g.mul(g.mul(a, b), c)) == g.key(g.mul(a, g.mul(b, c))));
      CHECK(g.key(g.inv(g.inv(a))) == g.key(a));
      CHECK(g.key(g.mul(a, g.inv(a))) == g.key(g.identity()));
      CHECK(g.key(g.mul(g.identity(), a)) == g.key(a));
      CHECK(g.from_key(g.key(a)) == a);
    }
  }
}

TEST_CASE("keys are injective on random samples") {
  std::mt19937_64 rng(99);
  for (const auto& name : kGroups) {
    const Group g = parse_group(name);
    std::map<std::string, Element> seen;
    for (int trial = 0; trial < 2000; ++trial) {
      const Element a = oracle::random_element(g, rng, 6);
      auto [it, inserted] = seen.emplace(g.key(a), a);
      if (!inserted) CHECK(it->second == a);
    }
  }
  CHECK(from_hex(to_hex(std::string("\x00\x7f\xff", 3))) == std::string("\x00\x7f\xff", 3));
}
