#include "cayley/patch.hpp"

#include <map>
#include <utility>

namespace cayley {

CayleyPatch CayleyPatch::from_ball(const BallTable& table, int radius) {
  if (radius < 0 || radius > table.series().max_radius()) {
    throw Error(ErrorCode::RadiusOutOfRange, "patch radius " + std::to_string(radius) + " outside the enumerated ball");
  }
  if (!table.has_elements()) {
    throw Error(ErrorCode::PreconditionUnmet, "ball table holds counts only");
  }
  CayleyPatch patch(table.group(), radius);
  const auto& gens = table.group().generators();
  patch.degree_ = gens.size();
  const std::size_t n = static_cast<std::size_t>(table.prefix_size(radius));
  patch.elements_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) patch.elements_.push_back(table.element(i));
  patch.neighbors_.assign(n * patch.degree_, -1);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t s = 0; s < patch.degree_; ++s) {
      const auto idx = table.index_of(patch.group_.key(patch.group_.mul(patch.elements_[v], gens[s])));
      if (idx && *idx < n) patch.neighbors_[v * patch.degree_ + s] = static_cast<std::int32_t>(*idx);
    }
  }
  return patch;
}

FiniteSubset CayleyPatch::subset(std::span<const std::int32_t> members) const {
  std::vector<Element> items;
  items.reserve(members.size());
  for (const auto v : members) items.push_back(elements_[static_cast<std::size_t>(v)]);
  return FiniteSubset(group_, std::move(items));
}

ProfileCensus census_connected(const CayleyPatch& patch, std::size_t max_size, unsigned threads) {
  struct Acc {
    std::uint64_t count = 0;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::int32_t>> first;
  };
  auto chunks = enumerate_connected<Acc>(patch, 1, max_size, threads, [](Acc& acc, const SubsetView& view) {
    ++acc.count;
    const auto key = std::make_pair(view.size(), view.boundary_size());
    if (!acc.first.contains(key)) {
      acc.first.emplace(key, std::vector<std::int32_t>(view.members().begin(), view.members().end()));
    }
    return true;
  });
  ProfileCensus census;
  census.max_size = max_size;
  census.first_witness.assign(max_size + 1, std::vector<std::vector<std::int32_t>>(max_size + 1));
  for (auto& chunk : chunks) {
    census.sets_seen += chunk.count;
    for (auto& [key, members] : chunk.first) {
      auto& slot = census.first_witness[key.first][key.second];
      if (slot.empty()) slot = std::move(members);
    }
  }
  return census;
}

}  // namespace cayley
