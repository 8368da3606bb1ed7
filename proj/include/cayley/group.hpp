#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cayley {

/// Element of Z^d, as its coordinate vector.
struct ZVector {
  std::vector<std::int64_t> coords;
  bool operator==(const ZVector&) const = default;
};

/// Freely reduced word. Letter +k is the k-th free generator (1-based), -k its inverse.
struct FreeWord {
  std::vector<std::int32_t> letters;
  bool operator==(const FreeWord&) const = default;
};

/// a^shift x^flip in the infinite dihedral group <a, x | x^2, xax = a^-1>.
struct DihedralElement {
  std::int64_t shift = 0;
  int flip = 0;
  bool operator==(const DihedralElement&) const = default;
};

/// Upper unitriangular integer matrix [[1, a, c], [0, 1, b], [0, 0, 1]].
struct HeisenbergElement {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;
  bool operator==(const HeisenbergElement&) const = default;
};

/// Lamplighter element: walker position and the (sorted) set of lit lamps.
struct LampConfiguration {
  std::int64_t position = 0;
  std::vector<std::int64_t> lamps;
  bool operator==(const LampConfiguration&) const = default;
};

using Element = std::variant<ZVector, FreeWord, DihedralElement, HeisenbergElement, LampConfiguration>;

enum class GroupKind { ZPowerD, FreeGroup, DihedralInfinite, Heisenberg, LamplighterZ2 };

enum class GrowthClass { Polynomial, Exponential };

/// A finitely generated group together with an ordered symmetric generating
/// set. Cheap to copy; immutable once built.
///
/// The generator order is part of the group's identity: BFS order, geodesic
/// tie-breaking and subset enumeration order all follow it.
class Group {
 public:
  GroupKind kind() const;
  /// d for Z^d, the rank for free groups, 0 otherwise.
  int param() const;
  /// "z:2", "free:3", "dinf", "heis", "lamplighter".
  std::string descriptor() const;

  const std::vector<Element>& generators() const;
  std::size_t generator_count() const;

  Element identity() const;
  bool is_identity(const Element& a) const;

  Element mul(const Element& a, const Element& b) const;
  Element inv(const Element& a) const;

  /// Injective, run-stable byte encoding: a kind tag followed by big-endian
  /// 64-bit integers.
  std::string key(const Element& a) const;
  Element from_key(std::string_view bytes) const;

  /// Human-readable form, e.g. "a^2 x" or "(pos=1, lamps={0,1})".
  std::string format(const Element& a) const;

  /// Throws Error(MalformedElement) unless `a` is a canonical form for this group.
  void check(const Element& a) const;

  /// Structural facts supplied with the group, not derived from computation.
  GrowthClass growth_class() const;
  bool known_non_amenable() const;

  /// Same group, arbitrary generator list; no validation. Used to probe
  /// validate_generators with deliberately broken sets.
  Group with_generators(std::vector<Element> generators) const;

 private:
  struct Impl;
  explicit Group(std::shared_ptr<const Impl> impl);
  friend Group make_group(GroupKind kind, int param);
  std::shared_ptr<const Impl> impl_;
};

/// Builds the group with its standard generating set (see README for the lists).
Group make_group(GroupKind kind, int param = 0);

/// Parses a CLI/config descriptor; throws UnknownKind or InvalidParams.
Group parse_group(std::string_view descriptor);

struct GeneratorReport {
  std::size_t size = 0;
};

/// Confirms S is symmetric, free of the identity and of duplicates.
/// Throws NotSymmetric, ContainsIdentity or Duplicate.
GeneratorReport validate_generators(const Group& group);

std::string to_hex(std::string_view bytes);
std::string from_hex(std::string_view hex);

}  // namespace cayley
