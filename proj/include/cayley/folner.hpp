#pragma once

#include "cayley/ball.hpp"
#include "cayley/group.hpp"
#include "cayley/isoperimetry.hpp"
#include "cayley/numeric.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace cayley {

enum class FolnerKind { Exact, LowerBound, Infinite };

/// "exact", "lower", "infinite".
std::string_view to_string(FolnerKind kind);

/// Fol(n) = min{|Omega| : |dOmega| / |Omega| <= 1/n}, or what is known of it.
/// For LowerBound, `value` is a strict lower bound's successor: every set of
/// size < value was searched and none qualified. `value` is unused for
/// Infinite.
struct FolnerRecord {
  int n = 1;
  FolnerKind kind = FolnerKind::Exact;
  std::int64_t value = 1;
  std::optional<FiniteSubset> witness;
  int search_cap = 0;
  std::optional<BigInt> family_upper;
};

struct FolnerOptions {
  unsigned threads = 1;
  BallOptions ball;
};

/// Searches connected sets containing e by increasing cardinality, up to
/// `cap` elements. Any minimizer can be moved to such a set: a translate has
/// the same size and boundary, and a component of minimal ratio is no larger
/// and no worse. The witness is the first set, in enumeration order, of the
/// minimal size and the smallest boundary at that size.
FolnerRecord folner_exact(const Group& group, int n, int cap, const FolnerOptions& options = {});

/// folner_exact for n = 1..n_max from a single search pass; each record also
/// carries the family upper bound when the group has a family.
std::vector<FolnerRecord> folner_records(const Group& group, int n_max, int cap, const FolnerOptions& options = {});

class CayleyPatch;
struct ProfileCensus;

/// The same records read off a census of connected sets (search cap =
/// census.max_size); gives identical results to folner_records.
std::vector<FolnerRecord> folner_records(const Group& group, const CayleyPatch& patch, const ProfileCensus& census,
                                         int n_max);

/// Size of the smallest member of the group's standard Folner family with
/// ratio <= 1/n: intervals (Z), cubes (Z^d), path segments (D-infinity),
/// lamp rectangles (lamplighter). Throws NoFamilyForKind.
BigInt folner_family_upper(const Group& group, int n);

/// The family member realizing folner_family_upper (or {e} for n = 1).
FiniteSubset folner_family_member(const Group& group, int n);

/// Every connected set containing e with at most max_size elements, each once,
/// ordered by cardinality and then by enumeration order.
std::vector<FiniteSubset> connected_subset_enum(const Group& group, std::size_t max_size,
                                                const FolnerOptions& options = {});

/// Connected components of the Cayley graph induced on Omega, ordered by the
/// smallest key they contain.
std::vector<FiniteSubset> cayley_components(const FiniteSubset& omega);

/// The component of smallest |dC|/|C| (first one on ties). Throws EmptySet.
FiniteSubset min_ratio_component(const FiniteSubset& omega);

/// CSV with columns n,value_or_bound,kind,witness_size,family_upper.
void write_csv(std::ostream& os, const std::vector<FolnerRecord>& records);
nlohmann::json to_json(const FolnerRecord& record);

}  // namespace cayley
