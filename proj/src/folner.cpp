#include "cayley/folner.hpp"

#include "cayley/error.hpp"
#include "cayley/patch.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <string>

namespace cayley {

std::string_view to_string(FolnerKind kind) {
  switch (kind) {
    case FolnerKind::Exact:
      return "exact";
    case FolnerKind::LowerBound:
      return "lower";
    case FolnerKind::Infinite:
      return "infinite";
  }
  return "?";
}

namespace {

void check_args(int n, int cap) {
  if (n < 1) throw Error(ErrorCode::BadParams, "n must be >= 1");
  if (cap < 1) throw Error(ErrorCode::BadParams, "cap must be >= 1");
}

FiniteSubset singleton(const Group& group) { return FiniteSubset(group, {group.identity()}); }

/// Smallest boundary among connected sets of one size, and the first set
/// attaining it.
struct SizeProfile {
  std::size_t min_boundary = std::numeric_limits<std::size_t>::max();
  std::vector<std::int32_t> witness;
};

SizeProfile profile_of_size(const CayleyPatch& patch, std::size_t size, unsigned threads) {
  auto chunks = enumerate_connected<SizeProfile>(patch, size, size, threads, [](SizeProfile& acc, const SubsetView& v) {
    const std::size_t d = v.boundary_size();
    if (d < acc.min_boundary) {
      acc.min_boundary = d;
      acc.witness.assign(v.members().begin(), v.members().end());
    }
    return true;
  });
  SizeProfile best;
  for (auto& chunk : chunks) {
    if (chunk.min_boundary < best.min_boundary) best = std::move(chunk);
  }
  return best;
}

bool has_family(const Group& group) {
  switch (group.kind()) {
    case GroupKind::ZPowerD:
    case GroupKind::DihedralInfinite:
    case GroupKind::LamplighterZ2:
      return true;
    case GroupKind::FreeGroup:
      return group.param() == 1;
    case GroupKind::Heisenberg:
      return false;
  }
  return false;
}

BigInt int_pow(const BigInt& base, unsigned exponent) {
  BigInt result = 1;
  for (unsigned i = 0; i < exponent; ++i) result *= base;
  return result;
}

/// Side length of the smallest qualifying cube in Z^d.
std::int64_t cube_side(int d, int n) {
  for (std::int64_t m = 2;; ++m) {
    const BigInt volume = int_pow(m, static_cast<unsigned>(d));
    const BigInt inner = int_pow(m - 2, static_cast<unsigned>(d));
    if ((volume - inner) * n <= volume) return m;
  }
}

}  // namespace

FolnerRecord folner_exact(const Group& group, int n, int cap, const FolnerOptions& options) {
  auto records = folner_records(group, n, cap, options);
  return records.back();
}

std::vector<FolnerRecord> folner_records(const Group& group, int n_max, int cap, const FolnerOptions& options) {
  check_args(n_max, cap);
  std::vector<FolnerRecord> records(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    auto& rec = records[static_cast<std::size_t>(n - 1)];
    rec.n = n;
    rec.search_cap = cap;
    if (has_family(group)) rec.family_upper = folner_family_upper(group, n);
  }
  records[0].kind = FolnerKind::Exact;
  records[0].value = 1;
  records[0].witness = singleton(group);
  if (n_max == 1) return records;

  if (group.known_non_amenable()) {
    for (std::size_t i = 1; i < records.size(); ++i) records[i].kind = FolnerKind::Infinite;
    return records;
  }

  const BallTable table = enumerate_ball(group, cap - 1, options.ball);
  const CayleyPatch patch = CayleyPatch::from_ball(table, cap - 1);
  int resolved = 1;
  for (std::size_t k = 1; k <= static_cast<std::size_t>(cap) && resolved < n_max; ++k) {
    const SizeProfile profile = profile_of_size(patch, k, options.threads);
    if (profile.witness.empty()) continue;
    // Every unresolved n that this size satisfies is resolved here; n with a
    // smaller requirement were resolved at a smaller size.
    while (resolved < n_max && profile.min_boundary * static_cast<std::size_t>(resolved + 1) <= k) {
      auto& rec = records[static_cast<std::size_t>(resolved)];
      rec.kind = FolnerKind::Exact;
      rec.value = static_cast<std::int64_t>(k);
      rec.witness = patch.subset(profile.witness);
      ++resolved;
    }
  }
  for (std::size_t i = static_cast<std::size_t>(resolved); i < records.size(); ++i) {
    records[i].kind = FolnerKind::LowerBound;
    records[i].value = static_cast<std::int64_t>(cap) + 1;
  }
  return records;
}

std::vector<FolnerRecord> folner_records(const Group& group, const CayleyPatch& patch, const ProfileCensus& census,
                                         int n_max) {
  const int cap = static_cast<int>(census.max_size);
  check_args(n_max, cap);
  std::vector<FolnerRecord> records(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    auto& rec = records[static_cast<std::size_t>(n - 1)];
    rec.n = n;
    rec.search_cap = cap;
    if (has_family(group)) rec.family_upper = folner_family_upper(group, n);
    if (n == 1) {
      rec.value = 1;
      rec.witness = singleton(group);
      continue;
    }
    if (group.known_non_amenable()) {
      rec.kind = FolnerKind::Infinite;
      continue;
    }
    rec.kind = FolnerKind::LowerBound;
    rec.value = static_cast<std::int64_t>(cap) + 1;
    for (std::size_t k = 1; k <= census.max_size; ++k) {
      std::size_t d = 0;
      while (d <= k && !census.seen(k, d)) ++d;
      if (d <= k && d * static_cast<std::size_t>(n) <= k) {
        rec.kind = FolnerKind::Exact;
        rec.value = static_cast<std::int64_t>(k);
        rec.witness = patch.subset(census.first_witness[k][d]);
        break;
      }
    }
  }
  return records;
}

BigInt folner_family_upper(const Group& group, int n) {
  if (n < 1) throw Error(ErrorCode::BadParams, "n must be >= 1");
  if (n == 1) return 1;
  if (!has_family(group)) {
    throw Error(ErrorCode::NoFamilyForKind, "no Folner family for " + group.descriptor());
  }
  switch (group.kind()) {
    case GroupKind::ZPowerD: {
      const std::int64_t m = cube_side(group.param(), n);
      return int_pow(m, static_cast<unsigned>(group.param()));
    }
    case GroupKind::FreeGroup:
    case GroupKind::DihedralInfinite:
      return BigInt(2) * n;
    case GroupKind::LamplighterZ2: {
      const unsigned m = static_cast<unsigned>(2 * n);
      return BigInt(m) * int_pow(2, m);
    }
    case GroupKind::Heisenberg:
      break;
  }
  throw Error(ErrorCode::NoFamilyForKind, "no Folner family for " + group.descriptor());
}

FiniteSubset folner_family_member(const Group& group, int n) {
  const BigInt size = folner_family_upper(group, n);
  if (n == 1) return singleton(group);
  std::vector<Element> items;
  switch (group.kind()) {
    case GroupKind::ZPowerD: {
      const int d = group.param();
      const std::int64_t m = cube_side(d, n);
      std::vector<std::int64_t> coords(static_cast<std::size_t>(d), 0);
      while (true) {
        items.push_back(ZVector{coords});
        std::size_t i = 0;
        while (i < coords.size() && ++coords[i] == m) coords[i++] = 0;
        if (i == coords.size()) break;
      }
      break;
    }
    case GroupKind::FreeGroup:
      for (std::int64_t i = 0; i < 2 * n; ++i) {
        items.push_back(FreeWord{std::vector<std::int32_t>(static_cast<std::size_t>(i), 1)});
      }
      break;
    case GroupKind::DihedralInfinite: {
      // Walk the path e, x, xy, xyx, ... using the generators alternately.
      Element g = group.identity();
      for (int i = 0; i < 2 * n; ++i) {
        items.push_back(g);
        g = group.mul(g, group.generators()[static_cast<std::size_t>(i % 2)]);
      }
      break;
    }
    case GroupKind::LamplighterZ2: {
      const std::int64_t m = 2 * n;
      for (std::int64_t mask = 0; mask < (std::int64_t{1} << m); ++mask) {
        std::vector<std::int64_t> lamps;
        for (std::int64_t j = 0; j < m; ++j) {
          if ((mask >> j) & 1) lamps.push_back(j);
        }
        for (std::int64_t p = 0; p < m; ++p) items.push_back(LampConfiguration{p, lamps});
      }
      break;
    }
    case GroupKind::Heisenberg:
      break;
  }
  FiniteSubset member(group, std::move(items));
  if (BigInt(member.size()) != size) throw std::logic_error("family member size mismatch");
  return member;
}

std::vector<FiniteSubset> connected_subset_enum(const Group& group, std::size_t max_size,
                                                const FolnerOptions& options) {
  if (max_size == 0) return {};
  const int radius = static_cast<int>(max_size) - 1;
  const BallTable table = enumerate_ball(group, radius, options.ball);
  const CayleyPatch patch = CayleyPatch::from_ball(table, radius);
  using Found = std::vector<std::vector<std::int32_t>>;
  auto chunks = enumerate_connected<Found>(patch, 1, max_size, options.threads, [](Found& acc, const SubsetView& v) {
    acc.emplace_back(v.members().begin(), v.members().end());
    return true;
  });
  Found all;
  for (auto& chunk : chunks) {
    for (auto& members : chunk) all.push_back(std::move(members));
  }
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  std::vector<FiniteSubset> out;
  out.reserve(all.size());
  for (const auto& members : all) out.push_back(patch.subset(members));
  return out;
}

std::vector<FiniteSubset> cayley_components(const FiniteSubset& omega) {
  const Group& group = omega.group();
  const std::size_t n = omega.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& s : group.generators()) {
      const auto j = omega.index_of(group.key(group.mul(omega.elements()[i], s)));
      if (j) parent[find(i)] = find(*j);
    }
  }
  // Elements are sorted by key, so visiting them in order sorts components
  // by their smallest key.
  std::map<std::size_t, std::size_t> slot;
  std::vector<std::vector<Element>> parts;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = find(i);
    auto [it, inserted] = slot.emplace(root, parts.size());
    if (inserted) parts.emplace_back();
    parts[it->second].push_back(omega.elements()[i]);
  }
  std::vector<FiniteSubset> out;
  out.reserve(parts.size());
  for (auto& part : parts) out.emplace_back(group, std::move(part));
  return out;
}

FiniteSubset min_ratio_component(const FiniteSubset& omega) {
  if (omega.empty()) throw Error(ErrorCode::EmptySet, "empty set has no components");
  auto parts = cayley_components(omega);
  std::size_t best = 0;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (boundary_ratio(parts[i]) < boundary_ratio(parts[best])) best = i;
  }
  return parts[best];
}

void write_csv(std::ostream& os, const std::vector<FolnerRecord>& records) {
  os << "n,value_or_bound,kind,witness_size,family_upper\n";
  for (const auto& rec : records) {
    os << rec.n << ',';
    if (rec.kind == FolnerKind::Infinite) {
      os << "inf";
    } else {
      os << rec.value;
    }
    os << ',' << to_string(rec.kind) << ',';
    if (rec.witness) os << rec.witness->size();
    os << ',';
    if (rec.family_upper) os << to_string(*rec.family_upper);
    os << '\n';
  }
}

nlohmann::json to_json(const FolnerRecord& record) {
  nlohmann::json j;
  j["n"] = record.n;
  j["kind"] = std::string(to_string(record.kind));
  if (record.kind == FolnerKind::Infinite) {
    j["value"] = "infinite";
  } else {
    j["value"] = record.value;
  }
  j["search_cap"] = record.search_cap;
  if (record.witness) {
    nlohmann::json keys = nlohmann::json::array();
    for (const auto& k : record.witness->keys()) keys.push_back(to_hex(k));
    j["witness"] = keys;
    j["witness_size"] = record.witness->size();
  } else {
    j["witness"] = nullptr;
  }
  j["family_upper"] = record.family_upper ? to_json(*record.family_upper) : nlohmann::json(nullptr);
  return j;
}

}  // namespace cayley
