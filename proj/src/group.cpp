#include "cayley/group.hpp"

#include "cayley/error.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <set>
#include <sstream>

namespace cayley {

struct Group::Impl {
  GroupKind kind;
  int param;
  std::vector<Element> generators;
};

Group::Group(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

GroupKind Group::kind() const { return impl_->kind; }
int Group::param() const { return impl_->param; }
const std::vector<Element>& Group::generators() const { return impl_->generators; }
std::size_t Group::generator_count() const { return impl_->generators.size(); }

std::string Group::descriptor() const {
  switch (kind()) {
    case GroupKind::ZPowerD: return "z:" + std::to_string(param());
    case GroupKind::FreeGroup: return "free:" + std::to_string(param());
    case GroupKind::DihedralInfinite: return "dinf";
    case GroupKind::Heisenberg: return "heis";
    case GroupKind::LamplighterZ2: return "lamplighter";
  }
  return "?";
}

GrowthClass Group::growth_class() const {
  switch (kind()) {
    case GroupKind::FreeGroup: return param() >= 2 ? GrowthClass::Exponential : GrowthClass::Polynomial;
    case GroupKind::LamplighterZ2: return GrowthClass::Exponential;
    default: return GrowthClass::Polynomial;
  }
}

bool Group::known_non_amenable() const { return kind() == GroupKind::FreeGroup && param() >= 2; }

Group Group::with_generators(std::vector<Element> generators) const {
  return Group(std::make_shared<const Impl>(Impl{kind(), param(), std::move(generators)}));
}

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::MalformedElement, what); }

template <typename T>
const T& payload(const Element& a) {
  const T* p = std::get_if<T>(&a);
  if (p == nullptr) malformed("element payload does not match the group kind");
  return *p;
}

std::vector<std::int64_t> symmetric_difference(const std::vector<std::int64_t>& lhs,
                                               const std::vector<std::int64_t>& rhs) {
  std::vector<std::int64_t> out;
  out.reserve(lhs.size() + rhs.size());
  std::set_symmetric_difference(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(), std::back_inserter(out));
  return out;
}

void put_i64(std::string& out, std::int64_t v) {
  const auto u = static_cast<std::uint64_t>(v);
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<char>((u >> shift) & 0xFF));
}

class KeyReader {
 public:
  explicit KeyReader(std::string_view bytes) : bytes_(bytes) {}

  std::int64_t next() {
    if (pos_ + 8 > bytes_.size()) malformed("truncated element key");
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u = (u << 8) | static_cast<unsigned char>(bytes_[pos_ + i]);
    pos_ += 8;
    return static_cast<std::int64_t>(u);
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 1;  // skip the kind tag
};

std::string power(std::string_view base, std::int64_t exp) {
  if (exp == 1) return std::string(base);
  return std::string(base) + "^" + std::to_string(exp);
}

}  // namespace

Element Group::identity() const {
  switch (kind()) {
    case GroupKind::ZPowerD: return ZVector{std::vector<std::int64_t>(static_cast<std::size_t>(param()), 0)};
    case GroupKind::FreeGroup: return FreeWord{};
    case GroupKind::DihedralInfinite: return DihedralElement{};
    case GroupKind::Heisenberg: return HeisenbergElement{};
    case GroupKind::LamplighterZ2: return LampConfiguration{};
  }
  return ZVector{};
}

bool Group::is_identity(const Element& a) const { return a == identity(); }

void Group::check(const Element& a) const {
  switch (kind()) {
    case GroupKind::ZPowerD:
      if (payload<ZVector>(a).coords.size() != static_cast<std::size_t>(param())) malformed("wrong dimension");
      return;
    case GroupKind::FreeGroup: {
      const auto& w = payload<FreeWord>(a).letters;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0 || std::abs(w[i]) > param()) malformed("letter out of range");
        if (i > 0 && w[i] == -w[i - 1]) malformed("word is not freely reduced");
      }
      return;
    }
    case GroupKind::DihedralInfinite: {
      const auto& d = payload<DihedralElement>(a);
      if (d.flip != 0 && d.flip != 1) malformed("dihedral flip must be 0 or 1");
      return;
    }
    case GroupKind::Heisenberg:
      payload<HeisenbergElement>(a);
      return;
    case GroupKind::LamplighterZ2: {
      const auto& lamps = payload<LampConfiguration>(a).lamps;
      for (std::size_t i = 1; i < lamps.size(); ++i) {
        if (lamps[i - 1] >= lamps[i]) malformed("lamp set must be strictly increasing");
      }
      return;
    }
  }
}

Element Group::mul(const Element& a, const Element& b) const {
  switch (kind()) {
    case GroupKind::ZPowerD: {
      const auto& x = payload<ZVector>(a).coords;
      const auto& y = payload<ZVector>(b).coords;
      if (x.size() != y.size()) malformed("dimension mismatch");
      ZVector out{x};
      for (std::size_t i = 0; i < y.size(); ++i) out.coords[i] += y[i];
      return out;
    }
    case GroupKind::FreeGroup: {
      FreeWord out = payload<FreeWord>(a);
      for (const auto letter : payload<FreeWord>(b).letters) {
        if (!out.letters.empty() && out.letters.back() == -letter) {
          out.letters.pop_back();
        } else {
          out.letters.push_back(letter);
        }
      }
      return out;
    }
    case GroupKind::DihedralInfinite: {
      const auto& x = payload<DihedralElement>(a);
      const auto& y = payload<DihedralElement>(b);
      // a^n x^e * a^m x^d = a^(n + (-1)^e m) x^(e + d)
      return DihedralElement{x.shift + (x.flip ? -y.shift : y.shift), x.flip ^ y.flip};
    }
    case GroupKind::Heisenberg: {
      const auto& x = payload<HeisenbergElement>(a);
      const auto& y = payload<HeisenbergElement>(b);
      return HeisenbergElement{x.a + y.a, x.b + y.b, x.c + y.c + x.a * y.b};
    }
    case GroupKind::LamplighterZ2: {
      const auto& x = payload<LampConfiguration>(a);
      const auto& y = payload<LampConfiguration>(b);
      std::vector<std::int64_t> shifted(y.lamps);
      for (auto& l : shifted) l += x.position;
      return LampConfiguration{x.position + y.position, symmetric_difference(x.lamps, shifted)};
    }
  }
  return a;
}

Element Group::inv(const Element& a) const {
  switch (kind()) {
    case GroupKind::ZPowerD: {
      ZVector out = payload<ZVector>(a);
      for (auto& c : out.coords) c = -c;
      return out;
    }
    case GroupKind::FreeGroup: {
      const auto& w = payload<FreeWord>(a).letters;
      FreeWord out;
      out.letters.reserve(w.size());
      for (auto it = w.rbegin(); it != w.rend(); ++it) out.letters.push_back(-*it);
      return out;
    }
    case GroupKind::DihedralInfinite: {
      const auto& d = payload<DihedralElement>(a);
      if (d.flip) return d;  // reflections are involutions
      return DihedralElement{-d.shift, 0};
    }
    case GroupKind::Heisenberg: {
      const auto& h = payload<HeisenbergElement>(a);
      return HeisenbergElement{-h.a, -h.b, -h.c + h.a * h.b};
    }
    case GroupKind::LamplighterZ2: {
      const auto& l = payload<LampConfiguration>(a);
      LampConfiguration out{-l.position, l.lamps};
      for (auto& lamp : out.lamps) lamp -= l.position;
      return out;
    }
  }
  return a;
}

std::string Group::key(const Element& a) const {
  std::string out;
  out.push_back(static_cast<char>(static_cast<int>(kind())));
  switch (kind()) {
    case GroupKind::ZPowerD:
      for (const auto c : payload<ZVector>(a).coords) put_i64(out, c);
      break;
    case GroupKind::FreeGroup:
      for (const auto l : payload<FreeWord>(a).letters) put_i64(out, l);
      break;
    case GroupKind::DihedralInfinite: {
      const auto& d = payload<DihedralElement>(a);
      put_i64(out, d.shift);
      put_i64(out, d.flip);
      break;
    }
    case GroupKind::Heisenberg: {
      const auto& h = payload<HeisenbergElement>(a);
      put_i64(out, h.a);
      put_i64(out, h.b);
      put_i64(out, h.c);
      break;
    }
    case GroupKind::LamplighterZ2: {
      const auto& l = payload<LampConfiguration>(a);
      put_i64(out, l.position);
      for (const auto lamp : l.lamps) put_i64(out, lamp);
      break;
    }
  }
  return out;
}

Element Group::from_key(std::string_view bytes) const {
  if (bytes.empty() || static_cast<int>(bytes[0]) != static_cast<int>(kind())) {
    malformed("key does not belong to group " + descriptor());
  }
  if ((bytes.size() - 1) % 8 != 0) malformed("key length is not a multiple of 8");
  KeyReader reader(bytes);
  Element out;
  switch (kind()) {
    case GroupKind::ZPowerD: {
      ZVector v;
      while (!reader.done()) v.coords.push_back(reader.next());
      out = v;
      break;
    }
    case GroupKind::FreeGroup: {
      FreeWord w;
      while (!reader.done()) w.letters.push_back(static_cast<std::int32_t>(reader.next()));
      out = w;
      break;
    }
    case GroupKind::DihedralInfinite: {
      DihedralElement d;
      d.shift = reader.next();
      d.flip = static_cast<int>(reader.next());
      out = d;
      break;
    }
    case GroupKind::Heisenberg: {
      HeisenbergElement h;
      h.a = reader.next();
      h.b = reader.next();
      h.c = reader.next();
      out = h;
      break;
    }
    case GroupKind::LamplighterZ2: {
      LampConfiguration l;
      l.position = reader.next();
      while (!reader.done()) l.lamps.push_back(reader.next());
      out = l;
      break;
    }
  }
  if (!reader.done()) malformed("trailing bytes in key");
  check(out);
  return out;
}

std::string Group::format(const Element& a) const {
  std::ostringstream os;
  switch (kind()) {
    case GroupKind::ZPowerD: {
      const auto& c = payload<ZVector>(a).coords;
      if (c.size() == 1) {
        os << c[0];
        break;
      }
      os << '(';
      for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
      os << ')';
      break;
    }
    case GroupKind::FreeGroup: {
      const auto& w = payload<FreeWord>(a).letters;
      if (w.empty()) return "e";
      for (const auto l : w) {
        os << static_cast<char>('a' + std::abs(l) - 1);
        if (l < 0) os << "^-1";
      }
      break;
    }
    case GroupKind::DihedralInfinite: {
      const auto& d = payload<DihedralElement>(a);
      if (d.shift == 0 && d.flip == 0) return "e";
      if (d.shift != 0) os << power("a", d.shift);
      if (d.flip) os << (d.shift != 0 ? " x" : "x");
      break;
    }
    case GroupKind::Heisenberg: {
      const auto& h = payload<HeisenbergElement>(a);
      os << '(' << h.a << ',' << h.b << ',' << h.c << ')';
      break;
    }
    case GroupKind::LamplighterZ2: {
      const auto& l = payload<LampConfiguration>(a);
      os << "(pos=" << l.position << ", lamps={";
      for (std::size_t i = 0; i < l.lamps.size(); ++i) os << (i ? "," : "") << l.lamps[i];
      os << "})";
      break;
    }
  }
  return os.str();
}

Group make_group(GroupKind kind, int param) {
  std::vector<Element> gens;
  switch (kind) {
    case GroupKind::ZPowerD:
      if (param < 1) throw Error(ErrorCode::InvalidParams, "Z^d needs d >= 1");
      for (int i = 0; i < param; ++i) {
        for (const int sign : {1, -1}) {
          ZVector v{std::vector<std::int64_t>(static_cast<std::size_t>(param), 0)};
          v.coords[static_cast<std::size_t>(i)] = sign;
          gens.emplace_back(std::move(v));
        }
      }
      break;
    case GroupKind::FreeGroup:
      if (param < 1) throw Error(ErrorCode::InvalidParams, "free group needs rank >= 1");
      for (int i = 1; i <= param; ++i) {
        gens.emplace_back(FreeWord{{i}});
        gens.emplace_back(FreeWord{{-i}});
      }
      break;
    case GroupKind::DihedralInfinite:
      param = 0;
      gens.emplace_back(DihedralElement{0, 1});   // x
      gens.emplace_back(DihedralElement{-1, 1});  // y = xa = a^-1 x
      break;
    case GroupKind::Heisenberg:
      param = 0;
      gens.emplace_back(HeisenbergElement{1, 0, 0});
      gens.emplace_back(HeisenbergElement{-1, 0, 0});
      gens.emplace_back(HeisenbergElement{0, 1, 0});
      gens.emplace_back(HeisenbergElement{0, -1, 0});
      break;
    case GroupKind::LamplighterZ2:
      param = 0;
      // Switch-walk-switch: t, t^-1, st, st^-1, ts, t^-1 s, sts, st^-1 s.
      gens.emplace_back(LampConfiguration{1, {}});
      gens.emplace_back(LampConfiguration{-1, {}});
      gens.emplace_back(LampConfiguration{1, {0}});
      gens.emplace_back(LampConfiguration{-1, {0}});
      gens.emplace_back(LampConfiguration{1, {1}});
      gens.emplace_back(LampConfiguration{-1, {-1}});
      gens.emplace_back(LampConfiguration{1, {0, 1}});
      gens.emplace_back(LampConfiguration{-1, {-1, 0}});
      break;
    default:
      throw Error(ErrorCode::UnknownKind, "unknown group kind");
  }
  Group group(std::make_shared<const Group::Impl>(Group::Impl{kind, param, std::move(gens)}));
  validate_generators(group);
  return group;
}

namespace {

int parse_param(std::string_view text, std::string_view descriptor) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 1) {
    throw Error(ErrorCode::InvalidParams, "bad parameter in group descriptor '" + std::string(descriptor) + "'");
  }
  return value;
}

}  // namespace

Group parse_group(std::string_view descriptor) {
  if (descriptor == "dinf") return make_group(GroupKind::DihedralInfinite);
  if (descriptor == "heis") return make_group(GroupKind::Heisenberg);
  if (descriptor == "lamplighter") return make_group(GroupKind::LamplighterZ2);
  const auto colon = descriptor.find(':');
  if (colon != std::string_view::npos) {
    const auto name = descriptor.substr(0, colon);
    const auto arg = descriptor.substr(colon + 1);
    if (name == "z") return make_group(GroupKind::ZPowerD, parse_param(arg, descriptor));
    if (name == "free") return make_group(GroupKind::FreeGroup, parse_param(arg, descriptor));
  }
  throw Error(ErrorCode::UnknownKind, "unknown group descriptor '" + std::string(descriptor) + "'");
}

GeneratorReport validate_generators(const Group& group) {
  std::set<std::string> keys;
  for (const auto& s : group.generators()) {
    group.check(s);
    if (group.is_identity(s)) throw Error(ErrorCode::ContainsIdentity, "generating set contains the identity");
    if (!keys.insert(group.key(s)).second) {
      throw Error(ErrorCode::Duplicate, "generator " + group.format(s) + " listed twice");
    }
  }
  for (const auto& s : group.generators()) {
    if (keys.count(group.key(group.inv(s))) == 0) {
      throw Error(ErrorCode::NotSymmetric, "inverse of " + group.format(s) + " is missing");
    }
  }
  return GeneratorReport{group.generator_count()};
}

std::string to_hex(std::string_view bytes) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (const char c : bytes) {
    const auto u = static_cast<unsigned char>(c);
    out.push_back(digits[u >> 4]);
    out.push_back(digits[u & 0xF]);
  }
  return out;
}

std::string from_hex(std::string_view hex) {
  auto nibble = [&](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    malformed("bad hex digit in element key");
  };
  if (hex.size() % 2 != 0) malformed("odd-length hex key");
  std::string out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    out.push_back(static_cast<char>(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
  }
  return out;
}

}  // namespace cayley
