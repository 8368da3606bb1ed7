#pragma once

#include "cayley/ball.hpp"
#include "cayley/group.hpp"
#include "cayley/numeric.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace cayley {

/// A finite set of group elements, deduplicated and sorted by key. The inner
/// boundary {x in Omega : xs not in Omega for some s in S} is computed once at
/// construction; the object is immutable afterwards.
class FiniteSubset {
 public:
  FiniteSubset(Group group, std::vector<Element> elements);

  const Group& group() const { return group_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }

  const std::vector<Element>& elements() const { return elements_; }
  const std::vector<std::string>& keys() const { return keys_; }
  std::optional<std::size_t> index_of(std::string_view key) const;
  bool contains(const Element& g) const;

  /// Indices (into elements()) of boundary points, ascending.
  const std::vector<std::size_t>& boundary_indices() const { return boundary_; }
  std::size_t boundary_size() const { return boundary_.size(); }
  bool in_boundary(std::size_t index) const { return boundary_mask_[index] != 0; }

  /// g * Omega.
  FiniteSubset translated(const Element& g) const;

  bool operator==(const FiniteSubset& other) const { return keys_ == other.keys_; }

 private:
  Group group_;
  std::vector<Element> elements_;
  std::vector<std::string> keys_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::size_t> boundary_;
  std::vector<char> boundary_mask_;
};

/// The boundary as a subset in its own right.
FiniteSubset boundary(const FiniteSubset& omega);

/// |boundary| / |Omega|. Throws EmptySet.
Rational boundary_ratio(const FiniteSubset& omega);

/// {lo, lo+1, ..., hi} in Z (group must be z:1).
FiniteSubset integer_interval(const Group& group, std::int64_t lo, std::int64_t hi);

enum class InequalityForm { CscOriginal, AvgGrowth, GrowthCor, Epsilon, PeteCorreia };

std::string_view to_string(InequalityForm form);
/// "csc-original", "avg-growth", "growth-cor", "epsilon", "pete-correia".
std::optional<InequalityForm> parse_form(std::string_view name);

struct InequalityParams {
  Rational alpha{0};
  Rational epsilon{1, 2};
};

/// Outcome of checking |dOmega|/|Omega| against one lower bound. `holds` is
/// lhs >= rhs, or lhs > rhs for the strict forms; an infinite radius means the
/// right-hand side is 0 and the check holds.
struct InequalityReport {
  InequalityForm form = InequalityForm::CscOriginal;
  Rational lhs;
  Rational rhs;
  bool holds = false;
  bool strict = false;
  PhiValue radius_used = PhiValue::finite(0);
  InequalityParams params;
};

InequalityReport check_inequality(const FiniteSubset& omega, const BallTable& table, InequalityForm form,
                                  const InequalityParams& params = {});

/// Every form depends on Omega only through |Omega| and |dOmega|; this is the
/// shared core, usable when a caller tracks just those two numbers.
InequalityReport check_inequality_counts(std::size_t omega_size, std::size_t boundary_size, const BallTable& table,
                                         InequalityForm form, const InequalityParams& params = {});

nlohmann::json to_json(const InequalityReport& report);

}  // namespace cayley
