#include "cayley/constants.hpp"

#include "cayley/error.hpp"
#include "cayley/patch.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

namespace cayley {

std::string_view to_string(BoundForm form) { return form == BoundForm::Csc ? "csc" : "folner"; }

nlohmann::json to_json(const BoundParams& params) {
  nlohmann::json j;
  j["form"] = std::string(to_string(params.form));
  j["c"] = to_string(params.c);
  j["alpha"] = to_string(params.alpha);
  if (params.form == BoundForm::Folner) j["rho"] = to_string(params.rho);
  j["s_size"] = params.s_size;
  if (params.form == BoundForm::Csc) j["inflation"] = to_string(params.inflation());
  return j;
}

BoundParams csc_to_folner(const BoundParams& csc, const Rational& rho) {
  if (csc.form != BoundForm::Csc) throw Error(ErrorCode::BadParams, "expected a csc-form bound");
  if (csc.c <= 0) throw Error(ErrorCode::BadParams, "c must be > 0");
  if (rho <= 0) throw Error(ErrorCode::BadParams, "rho must be > 0");
  if (csc.alpha < 0) throw Error(ErrorCode::BadParams, "alpha must be >= 0");
  BoundParams out = csc;
  out.form = BoundForm::Folner;
  out.rho = rho;
  return out;
}

BoundParams folner_to_csc(const BoundParams& folner) {
  if (folner.form != BoundForm::Folner) throw Error(ErrorCode::BadParams, "expected a folner-form bound");
  if (folner.c <= 0) throw Error(ErrorCode::BadParams, "c must be > 0");
  if (folner.alpha < 0 || folner.rho < 0) throw Error(ErrorCode::BadParams, "alpha and rho must be >= 0");
  if (folner.s_size <= 0) throw Error(ErrorCode::EmptyGeneratingSet, "generating set is empty");
  const BigInt exponent = ceil_of(folner.rho + folner.c);
  BigInt power = 1;
  for (BigInt i = 0; i < exponent; ++i) power *= folner.s_size;
  const Rational factor = Rational(power) * (1 + folner.alpha);
  BoundParams out = folner;
  out.form = BoundForm::Csc;
  out.rho = 0;
  out.alpha = factor - 1;
  return out;
}

std::string Scope::label() const {
  if (kind == Kind::AllSubsetsOfBall2) return "all-subsets-of-B(2)";
  return "connected-containing-e:" + std::to_string(max_size);
}

std::optional<Scope> parse_scope(std::string_view text) {
  if (text == "all-subsets-of-B(2)" || text == "ball2") return Scope::all_subsets_of_ball2();
  for (std::string_view prefix : {"connected-containing-e:", "connected:"}) {
    if (text.starts_with(prefix)) {
      const auto digits = text.substr(prefix.size());
      std::size_t k = 0;
      const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
      if (ec != std::errc() || ptr != digits.data() + digits.size() || k == 0) return std::nullopt;
      return Scope::connected(k);
    }
  }
  return std::nullopt;
}

nlohmann::json to_json(const Certificate& certificate) {
  nlohmann::json j;
  j["form"] = std::string(to_string(certificate.params.form));
  j["params"] = to_json(certificate.params);
  j["scope"] = certificate.scope;
  j["holds"] = certificate.holds;
  j["sets_checked"] = certificate.sets_checked;
  if (certificate.failing) {
    nlohmann::json w;
    w["size"] = certificate.failing->size;
    w["boundary"] = certificate.failing->boundary;
    if (certificate.witness) {
      nlohmann::json keys = nlohmann::json::array();
      for (const auto& k : certificate.witness->keys()) keys.push_back(to_hex(k));
      w["keys"] = keys;
    }
    j["witness"] = w;
  }
  j["derived_bounds"] = certificate.derived_bounds;
  return j;
}

Certificate certify_profiles(const std::vector<SetProfile>& profiles, const BallTable& table,
                             const BoundParams& params, std::string scope_label) {
  if (params.form != BoundForm::Csc) throw Error(ErrorCode::BadParams, "certification needs a csc-form bound");
  if (params.c < 0 || params.alpha < 0) throw Error(ErrorCode::BadParams, "c and alpha must be >= 0");
  Certificate cert;
  cert.params = params;
  cert.scope = std::move(scope_label);
  std::map<std::size_t, Rational> rhs_by_size;
  for (const auto& profile : profiles) {
    ++cert.sets_checked;
    auto it = rhs_by_size.find(profile.size);
    if (it == rhs_by_size.end()) {
      const PhiValue r = phi(table, params.inflation() * profile.size);
      const Rational rhs = r.is_infinite() ? Rational(0) : params.c / Rational(r.radius());
      it = rhs_by_size.emplace(profile.size, rhs).first;
    }
    if (Rational(profile.boundary, profile.size) < it->second) {
      cert.holds = false;
      cert.failing = profile;
      if (!profile.members.empty() && table.has_elements()) {
        std::vector<Element> items;
        for (const auto v : profile.members) items.push_back(table.element(static_cast<std::size_t>(v)));
        cert.witness = FiniteSubset(table.group(), std::move(items));
      }
      break;
    }
  }
  if (cert.holds && params.c > 0) {
    nlohmann::json derived = to_json(csc_to_folner(params, 1));
    derived["note"] = "folner form implied if the bound held for every finite set";
    cert.derived_bounds.push_back(derived);
  }
  return cert;
}

namespace {

std::size_t scope_max_size(const Group& group, const Scope& scope, const CertifyOptions& options) {
  if (scope.kind == Scope::Kind::ConnectedContainingIdentity) return scope.max_size;
  const BallTable b2 = enumerate_ball(group, 2, options.ball);
  return static_cast<std::size_t>(b2.prefix_size(2));
}

std::vector<SetProfile> ball2_profiles(const BallTable& table, const CertifyOptions& options, std::uint64_t* seen) {
  const std::size_t n = table.prefix_size(2);
  if (n > options.max_ball2_size) {
    throw Error(ErrorCode::MemoryBudgetExceeded,
                "B(2) has " + std::to_string(n) + " elements; too many subsets to enumerate");
  }
  const Group& group = table.group();
  std::vector<std::uint64_t> inside(n, 0);
  std::vector<bool> leaks(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& s : group.generators()) {
      const auto j = table.index_of(group.key(group.mul(table.element(i), s)));
      if (j && *j < n) {
        inside[i] |= std::uint64_t{1} << *j;
      } else {
        leaks[i] = true;
      }
    }
  }
  std::vector<SetProfile> out;
  const std::uint64_t limit = std::uint64_t{1} << n;
  out.reserve(static_cast<std::size_t>(limit - 1));
  for (std::uint64_t mask = 1; mask < limit; ++mask) {
    SetProfile p;
    for (std::size_t i = 0; i < n; ++i) {
      if (!((mask >> i) & 1)) continue;
      ++p.size;
      p.members.push_back(static_cast<std::int32_t>(i));
      if (leaks[i] || (inside[i] & ~mask) != 0) ++p.boundary;
    }
    out.push_back(std::move(p));
  }
  if (seen) *seen = limit - 1;
  return out;
}

std::vector<SetProfile> connected_profiles(const BallTable& table, std::size_t k, unsigned threads,
                                           std::uint64_t* seen) {
  const CayleyPatch patch = CayleyPatch::from_ball(table, static_cast<int>(k) - 1);
  const ProfileCensus census = census_connected(patch, k, threads);
  std::vector<SetProfile> out;
  for (std::size_t size = 1; size <= k; ++size) {
    for (std::size_t d = 0; d <= size; ++d) {
      if (census.seen(size, d)) out.push_back(SetProfile{size, d, census.first_witness[size][d]});
    }
  }
  if (seen) *seen = census.sets_seen;
  return out;
}

/// A table that both holds the scope's sets and resolves Phi for them.
BallTable scope_table(const Group& group, const Scope& scope, const Rational& volume, const CertifyOptions& options) {
  const int needed = scope.kind == Scope::Kind::AllSubsetsOfBall2 ? 2 : static_cast<int>(scope.max_size) - 1;
  BallTable table = enumerate_ball_beyond(group, volume, 4096, options.ball);
  if (table.max_radius() < needed) table = enumerate_ball(group, needed, options.ball);
  return table;
}

}  // namespace

std::vector<SetProfile> scope_profiles(const Group& group, const Scope& scope, const CertifyOptions& options,
                                       std::uint64_t* sets_seen) {
  const int needed = scope.kind == Scope::Kind::AllSubsetsOfBall2 ? 2 : static_cast<int>(scope.max_size) - 1;
  if (needed < 0) throw Error(ErrorCode::BadParams, "scope must allow sets of size >= 1");
  const BallTable table = enumerate_ball(group, needed, options.ball);
  if (scope.kind == Scope::Kind::AllSubsetsOfBall2) return ball2_profiles(table, options, sets_seen);
  return connected_profiles(table, scope.max_size, options.threads, sets_seen);
}

Certificate certify_at_scale(const Group& group, const BoundParams& params, const Scope& scope,
                             const CertifyOptions& options) {
  if (params.form != BoundForm::Csc) throw Error(ErrorCode::BadParams, "certification needs a csc-form bound");
  if (scope.kind == Scope::Kind::ConnectedContainingIdentity && scope.max_size == 0) {
    throw Error(ErrorCode::BadParams, "scope must allow sets of size >= 1");
  }
  const std::size_t max_size = scope_max_size(group, scope, options);
  const BallTable table = scope_table(group, scope, params.inflation() * max_size, options);
  std::uint64_t seen = 0;
  std::vector<SetProfile> profiles = scope.kind == Scope::Kind::AllSubsetsOfBall2
                                         ? ball2_profiles(table, options, &seen)
                                         : connected_profiles(table, scope.max_size, options.threads, &seen);
  Certificate cert = certify_profiles(profiles, table, params, scope.label());
  if (cert.holds) cert.sets_checked = seen;
  return cert;
}

FolnerFormCheck check_folner_form(const BoundParams& params, const std::vector<FolnerRecord>& records,
                                  const BallTable& table) {
  if (params.form != BoundForm::Folner) throw Error(ErrorCode::BadParams, "expected a folner-form bound");
  FolnerFormCheck check;
  for (const auto& rec : records) {
    if (rec.kind == FolnerKind::LowerBound) continue;
    FolnerFormRow row;
    row.n = rec.n;
    row.fol_infinite = rec.kind == FolnerKind::Infinite;
    row.fol = rec.value;
    row.rhs = Rational(table.ball_size_at(params.c * rec.n - params.rho)) / (1 + params.alpha);
    row.holds = row.fol_infinite || Rational(rec.value) >= row.rhs;
    check.holds = check.holds && row.holds;
    check.rows.push_back(std::move(row));
  }
  return check;
}

nlohmann::json to_json(const Extended& x) {
  if (x.infinite) return "inf";
  return x.value;
}

nlohmann::json to_json(const QuotientEstimate& e) {
  nlohmann::json j;
  j["horizon"] = e.horizon;
  j["window"] = {e.window_start, e.horizon};
  j["numerator_lower"] = to_json(e.numerator_lower);
  j["numerator_upper"] = to_json(e.numerator_upper);
  j["denominator_upper"] = e.denominator_upper;
  j["denominator_lower_evidence"] = e.denominator_lower_evidence;
  j["c_lower"] = to_json(e.c_lower);
  j["c_upper_evidence"] = to_json(e.c_upper_evidence);
  j["certified"] = e.certified;
  j["caveats"] = e.caveats;
  return j;
}

namespace {

Extended ratio(const Extended& num, double den) {
  if (num.infinite) return Extended::inf();
  if (den <= 0.0) return Extended::inf();
  return Extended::of(num.value / den);
}

}  // namespace

QuotientEstimate quotient_estimate(const Group& group, int horizon, const std::vector<FolnerRecord>& records,
                                   const BallTable& table) {
  if (group.growth_class() == GrowthClass::Polynomial) {
    throw Error(ErrorCode::NotApplicable, group.descriptor() + " has polynomial growth; the quotient needs exponential growth");
  }
  if (horizon < 2) throw Error(ErrorCode::InsufficientData, "horizon must be >= 2");
  if (table.max_radius() < horizon) {
    throw Error(ErrorCode::InsufficientData, "ball table stops at radius " + std::to_string(table.max_radius()));
  }
  QuotientEstimate e;
  e.horizon = horizon;
  e.window_start = (horizon + 1) / 2;
  std::map<int, const FolnerRecord*> by_n;
  for (const auto& rec : records) by_n[rec.n] = &rec;
  for (int n = e.window_start; n <= horizon; ++n) {
    if (!by_n.contains(n)) {
      throw Error(ErrorCode::InsufficientData, "no Folner record for n = " + std::to_string(n));
    }
  }

  const GrowthEstimate growth = growth_rate_upper(table, horizon);
  e.denominator_upper = growth.fekete_inf;
  e.denominator_lower_evidence = log_of(table.b(horizon)) - log_of(table.b(horizon - 1));

  e.numerator_lower = Extended::inf();
  e.numerator_upper = Extended::inf();
  bool all_infinite = true;
  bool any_lower_only = false;
  bool any_unbounded_above = false;
  for (int n = e.window_start; n <= horizon; ++n) {
    const FolnerRecord& rec = *by_n[n];
    Extended lower = Extended::inf();
    Extended upper = Extended::inf();
    if (rec.kind != FolnerKind::Infinite) {
      all_infinite = false;
      lower = Extended::of(std::log(static_cast<double>(rec.value)) / n);
      if (rec.kind == FolnerKind::Exact) {
        upper = lower;
      } else {
        any_lower_only = true;
        if (rec.family_upper) {
          upper = Extended::of(log_of(*rec.family_upper) / n);
        } else {
          any_unbounded_above = true;
        }
      }
    }
    if (!lower.infinite && (e.numerator_lower.infinite || lower.value < e.numerator_lower.value)) {
      e.numerator_lower = lower;
    }
    if (!upper.infinite && (e.numerator_upper.infinite || upper.value < e.numerator_upper.value)) {
      e.numerator_upper = upper;
    }
  }
  e.c_lower = ratio(e.numerator_lower, e.denominator_upper);
  e.c_upper_evidence = ratio(e.numerator_upper, e.denominator_lower_evidence);

  e.caveats.push_back("numerator values are window minima over n in [" + std::to_string(e.window_start) + ", " +
                      std::to_string(horizon) + "], not the liminf");
  e.caveats.push_back("denominator_upper is the Fekete infimum at the horizon; the limit can only be smaller");
  e.caveats.push_back("denominator_lower_evidence is ln(b_N / b_(N-1)), a heuristic, not a bound");
  if (!growth.is_exponential_evidence) {
    e.caveats.push_back("ball counts up to the horizon give weak evidence of exponential growth");
  }
  if (all_infinite) {
    e.certified = group.known_non_amenable();
    e.caveats.push_back("Folner records are infinite because the group is supplied as non-amenable; C is infinite");
  } else {
    if (any_lower_only) e.caveats.push_back("some records are search lower bounds, not exact values");
    if (any_unbounded_above) e.caveats.push_back("some records have no upper bound; numerator_upper is partial");
    e.caveats.push_back("c_lower divides by an upper bound of the denominator and is not a certified lower bound");
  }
  return e;
}

}  // namespace cayley
