#include "cayley/transport.hpp"

#include "cayley/error.hpp"

#include <algorithm>
#include <stdexcept>

namespace cayley {

GeodesicWord geodesic_word(const BallTable& table, const Element& g) {
  const Group& group = table.group();
  const auto norm = table.norm_of(g);
  if (!norm) {
    throw Error(ErrorCode::HorizonExceeded,
                group.format(g) + " is outside B(" + std::to_string(table.max_radius()) + ")");
  }
  GeodesicWord word{g, {}, {group.identity()}};
  Element rest = g;
  for (int remaining = *norm; remaining > 0; --remaining) {
    bool stepped = false;
    for (std::size_t i = 0; i < group.generator_count(); ++i) {
      const Element& s = group.generators()[i];
      Element shorter = group.mul(group.inv(s), rest);
      const auto n = table.norm_of(shorter);
      if (n && *n == remaining - 1) {
        word.letters.push_back(i);
        word.prefixes.push_back(group.mul(word.prefixes.back(), s));
        rest = std::move(shorter);
        stepped = true;
        break;
      }
    }
    if (!stepped) throw std::logic_error("BFS norms are inconsistent: no descending generator");
  }
  return word;
}

std::size_t TransportLedger::sum_rays() const {
  std::size_t total = 0;
  for (const auto& r : rays_) total += r.size();
  return total;
}

std::size_t TransportLedger::sum_leaving() const {
  std::size_t total = 0;
  for (const auto& o : offsets_) total += o.leaving.size();
  return total;
}

std::size_t TransportLedger::max_fiber() const {
  std::size_t best = 0;
  for (const auto& [where, count] : fibers_) best = std::max(best, count);
  return best;
}

TransportLedger build_ledger(const FiniteSubset& omega, const BallTable& table, int radius,
                             const LedgerLimits& limits) {
  if (omega.empty()) throw Error(ErrorCode::EmptySet, "ledger needs a non-empty set");
  if (omega.size() > limits.max_omega || radius > limits.max_radius) {
    throw Error(ErrorCode::BadParams, "ledger limits are |Omega| <= " + std::to_string(limits.max_omega) +
                                          ", r <= " + std::to_string(limits.max_radius));
  }
  if (radius < 0) throw Error(ErrorCode::RadiusOutOfRange, "negative ledger radius");
  if (radius > table.max_radius()) {
    throw Error(ErrorCode::HorizonExceeded, "ledger radius " + std::to_string(radius) + " beyond table horizon " +
                                                std::to_string(table.max_radius()));
  }
  const Group& group = omega.group();
  TransportLedger ledger(omega, radius);
  const std::size_t ball = table.prefix_size(radius);

  // Rays, x-major.
  ledger.rays_.resize(omega.size());
  for (std::size_t x = 0; x < omega.size(); ++x) {
    for (std::size_t gi = 0; gi < ball; ++gi) {
      if (!omega.contains(group.mul(omega.elements()[x], table.element(gi)))) ledger.rays_[x].push_back(gi);
    }
  }

  // Omega_g and exit points, g-major.
  ledger.offsets_.reserve(ball);
  for (std::size_t gi = 0; gi < ball; ++gi) {
    OffsetRecord rec{table.element(gi), table.norm_at(gi), {}, {}};
    const GeodesicWord word = geodesic_word(table, rec.g);
    for (std::size_t x = 0; x < omega.size(); ++x) {
      const Element& point = omega.elements()[x];
      if (omega.contains(group.mul(point, rec.g))) continue;
      rec.leaving.push_back(x);
      std::optional<std::size_t> exit;
      for (const auto& prefix : word.prefixes) {
        const auto idx = omega.index_of(group.key(group.mul(point, prefix)));
        if (idx && omega.in_boundary(*idx)) {
          exit = *idx;
          break;
        }
      }
      if (!exit) {
        throw Error(ErrorCode::ExitNotFound, "no boundary point on the path from " + group.format(point) + " by " +
                                                 group.format(rec.g));
      }
      rec.exit_point.push_back(*exit);
      ++ledger.fibers_[{gi, *exit}];
    }
    ledger.offsets_.push_back(std::move(rec));
  }

  if (ledger.sum_rays() != ledger.sum_leaving()) {
    throw std::logic_error("two-way count mismatch: " + std::to_string(ledger.sum_rays()) +
                           " rays vs " + std::to_string(ledger.sum_leaving()) + " leaving points");
  }
  return ledger;
}

std::string_view to_string(Lemma which) {
  switch (which) {
    case Lemma::Spheres: return "spheres";
    case Lemma::Balls: return "balls";
    case Lemma::Transport: return "transport";
    case Lemma::Counting: return "counting";
    case Lemma::RayLower: return "ray-lower";
    case Lemma::Conclude: return "conclude";
    case Lemma::Fiber: return "fiber";
  }
  return "?";
}

std::optional<Lemma> parse_lemma(std::string_view name) {
  for (const auto l : {Lemma::Spheres, Lemma::Balls, Lemma::Transport, Lemma::Counting, Lemma::RayLower,
                       Lemma::Conclude, Lemma::Fiber}) {
    if (to_string(l) == name) return l;
  }
  return std::nullopt;
}

LemmaReport verify_lemma(const GrowthSeries& series, std::size_t generator_count, Lemma which) {
  if (which != Lemma::Spheres && which != Lemma::Balls) {
    throw Error(ErrorCode::BadParams, "growth series only supports the spheres and balls lemmas");
  }
  LemmaReport report{which, true, true, {}};
  const BigInt s_size = generator_count;
  for (int r = 2; r <= series.max_radius(); ++r) {
    const auto i = static_cast<std::size_t>(r);
    const bool ok = which == Lemma::Spheres ? series.s[i] <= (s_size - 1) * series.s[i - 1]
                                            : series.b[i] <= s_size * series.b[i - 1];
    if (!ok) {
      report.holds = false;
      report.witness = "r=" + std::to_string(r);
      break;
    }
  }
  return report;
}

LemmaReport verify_lemma(const BallTable& table, Lemma which) {
  return verify_lemma(table.series(), table.group().generator_count(), which);
}

LemmaReport verify_lemma(const TransportLedger& ledger, const BallTable& table, Lemma which, const Rational& alpha) {
  const FiniteSubset& omega = ledger.omega();
  const Group& group = omega.group();
  const int r = ledger.radius();
  LemmaReport report{which, true, true, {}};
  auto fail = [&](std::string witness) {
    if (report.holds) {
      report.holds = false;
      report.witness = std::move(witness);
    }
  };

  switch (which) {
    case Lemma::Spheres:
    case Lemma::Balls:
      return verify_lemma(table, which);

    case Lemma::Transport: {
      const std::size_t boundary = omega.boundary_size();
      for (const auto& rec : ledger.offsets()) {
        if (rec.leaving.size() > static_cast<std::size_t>(rec.norm) * boundary) {
          fail("g=" + group.format(rec.g));
        }
      }
      return report;
    }

    case Lemma::Counting:
      if (ledger.sum_rays() != ledger.sum_leaving()) {
        fail("sum_rays=" + std::to_string(ledger.sum_rays()) + " sum_omega_g=" + std::to_string(ledger.sum_leaving()));
      }
      return report;

    case Lemma::Fiber:
      for (const auto& [where, count] : ledger.exit_fibers()) {
        const auto& rec = ledger.offsets()[where.first];
        if (count > static_cast<std::size_t>(rec.norm)) {
          fail("g=" + group.format(rec.g) + " b=" + group.format(omega.elements()[where.second]));
        }
      }
      return report;

    case Lemma::RayLower: {
      if (alpha < 0) throw Error(ErrorCode::BadParams, "alpha must be >= 0");
      if (Rational(table.b(r)) < (alpha + 1) * omega.size()) {
        report.precondition_met = false;
        report.holds = false;
        report.witness = "|B(" + std::to_string(r) + ")| < (alpha+1)|Omega|";
        return report;
      }
      const Rational need = alpha * omega.size();
      for (std::size_t x = 0; x < omega.size(); ++x) {
        if (Rational(ledger.rays()[x].size()) < need) fail("x=" + group.format(omega.elements()[x]));
      }
      return report;
    }

    case Lemma::Conclude: {
      if (alpha < 0) throw Error(ErrorCode::BadParams, "alpha must be >= 0");
      const PhiValue target = phi(table, (1 + alpha) * omega.size());
      if (target.is_infinite() || target.radius() != r) {
        report.precondition_met = false;
        report.holds = false;
        report.witness = "ledger radius " + std::to_string(r) + " != Phi[(1+alpha)|Omega|] = " + target.str();
        return report;
      }
      const Rational need = alpha / (1 + alpha) * Rational(table.b(r - 1));
      for (std::size_t x = 0; x < omega.size(); ++x) {
        if (Rational(ledger.rays()[x].size()) < need) fail("x=" + group.format(omega.elements()[x]));
      }
      return report;
    }
  }
  return report;
}

ChainReport verify_average_growth_chain(const TransportLedger& ledger, const BallTable& table, const Rational& alpha) {
  ChainReport chain;
  const FiniteSubset& omega = ledger.omega();
  const int r = ledger.radius();
  const PhiValue target = phi(table, (1 + alpha) * omega.size());
  if (target.is_infinite() || target.radius() != r || r < 1) {
    chain.precondition_met = false;
    return chain;
  }
  chain.weighted_boundary = table.length_sum(r) * omega.boundary_size();
  chain.sum_leaving = ledger.sum_leaving();
  chain.sum_rays = ledger.sum_rays();
  chain.lower = alpha / (1 + alpha) * omega.size() * Rational(table.b(r - 1));
  chain.transport_link = chain.weighted_boundary >= chain.sum_leaving;
  chain.counting_link = chain.sum_leaving == chain.sum_rays;
  chain.ray_link = Rational(chain.sum_rays) >= chain.lower;
  return chain;
}

nlohmann::json summary_json(const TransportLedger& ledger, const std::vector<LemmaReport>& lemmas) {
  nlohmann::json results = nlohmann::json::array();
  for (const auto& l : lemmas) {
    nlohmann::json entry{{"which", std::string(to_string(l.which))},
                         {"holds", l.holds},
                         {"precondition_met", l.precondition_met}};
    if (!l.witness.empty()) entry["witness"] = l.witness;
    results.push_back(std::move(entry));
  }
  return {{"omega_size", ledger.omega().size()},
          {"r", ledger.radius()},
          {"sum_rays", ledger.sum_rays()},
          {"sum_omega_g", ledger.sum_leaving()},
          {"max_fiber", ledger.max_fiber()},
          {"lemma_results", results}};
}

}  // namespace cayley
