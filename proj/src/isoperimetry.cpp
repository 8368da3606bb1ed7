#include "cayley/isoperimetry.hpp"

#include "cayley/error.hpp"

#include <algorithm>
#include <numeric>

namespace cayley {

FiniteSubset::FiniteSubset(Group group, std::vector<Element> elements) : group_(std::move(group)) {
  std::vector<std::pair<std::string, Element>> keyed;
  keyed.reserve(elements.size());
  for (auto& e : elements) {
    group_.check(e);
    keyed.emplace_back(group_.key(e), std::move(e));
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());
  for (auto& [key, element] : keyed) {
    index_.emplace(key, keys_.size());
    keys_.push_back(std::move(key));
    elements_.push_back(std::move(element));
  }
  boundary_mask_.assign(elements_.size(), 0);
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    for (const auto& s : group_.generators()) {
      if (index_.count(group_.key(group_.mul(elements_[i], s))) == 0) {
        boundary_mask_[i] = 1;
        boundary_.push_back(i);
        break;
      }
    }
  }
}

std::optional<std::size_t> FiniteSubset::index_of(std::string_view key) const {
  const auto it = index_.find(std::string(key));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool FiniteSubset::contains(const Element& g) const { return index_of(group_.key(g)).has_value(); }

FiniteSubset FiniteSubset::translated(const Element& g) const {
  std::vector<Element> moved;
  moved.reserve(elements_.size());
  for (const auto& x : elements_) moved.push_back(group_.mul(g, x));
  return FiniteSubset(group_, std::move(moved));
}

FiniteSubset boundary(const FiniteSubset& omega) {
  std::vector<Element> points;
  for (const auto i : omega.boundary_indices()) points.push_back(omega.elements()[i]);
  return FiniteSubset(omega.group(), std::move(points));
}

Rational boundary_ratio(const FiniteSubset& omega) {
  if (omega.empty()) throw Error(ErrorCode::EmptySet, "boundary ratio of the empty set");
  return Rational(omega.boundary_size(), omega.size());
}

FiniteSubset integer_interval(const Group& group, std::int64_t lo, std::int64_t hi) {
  if (group.kind() != GroupKind::ZPowerD || group.param() != 1) {
    throw Error(ErrorCode::BadParams, "integer intervals live in z:1");
  }
  std::vector<Element> points;
  for (std::int64_t k = lo; k <= hi; ++k) points.emplace_back(ZVector{{k}});
  return FiniteSubset(group, std::move(points));
}

std::string_view to_string(InequalityForm form) {
  switch (form) {
    case InequalityForm::CscOriginal: return "csc-original";
    case InequalityForm::AvgGrowth: return "avg-growth";
    case InequalityForm::GrowthCor: return "growth-cor";
    case InequalityForm::Epsilon: return "epsilon";
    case InequalityForm::PeteCorreia: return "pete-correia";
  }
  return "?";
}

std::optional<InequalityForm> parse_form(std::string_view name) {
  for (const auto form : {InequalityForm::CscOriginal, InequalityForm::AvgGrowth, InequalityForm::GrowthCor,
                          InequalityForm::Epsilon, InequalityForm::PeteCorreia}) {
    if (to_string(form) == name) return form;
  }
  return std::nullopt;
}

InequalityReport check_inequality_counts(std::size_t omega_size, std::size_t boundary_size, const BallTable& table,
                                         InequalityForm form, const InequalityParams& params) {
  if (omega_size == 0) throw Error(ErrorCode::EmptySet, "inequalities need a non-empty set");
  if (boundary_size > omega_size) throw Error(ErrorCode::BadParams, "boundary larger than the set");

  InequalityReport report;
  report.form = form;
  report.params = params;
  report.lhs = Rational(boundary_size, omega_size);
  const Rational volume(omega_size);

  switch (form) {
    case InequalityForm::CscOriginal: {
      report.strict = false;
      report.radius_used = phi(table, 2 * volume);
      if (!report.radius_used.is_infinite()) {
        const BigInt s_size = table.group().generator_count();
        report.rhs = Rational(BigInt(1), 4 * s_size * report.radius_used.radius());
      }
      break;
    }
    case InequalityForm::AvgGrowth:
    case InequalityForm::GrowthCor: {
      if (params.alpha < 0) throw Error(ErrorCode::BadParams, "alpha must be >= 0");
      report.strict = false;
      report.radius_used = phi(table, (1 + params.alpha) * volume);
      if (!report.radius_used.is_infinite()) {
        // r >= 1 because b_0 = 1 <= (1 + alpha)|Omega|.
        const int r = static_cast<int>(report.radius_used.radius());
        const Rational shrink = params.alpha / (1 + params.alpha) * Rational(table.b(r - 1), table.b(r));
        if (form == InequalityForm::AvgGrowth) {
          report.rhs = shrink / average_length(table, r);
        } else {
          report.rhs = shrink / r;
        }
      }
      break;
    }
    case InequalityForm::Epsilon: {
      if (params.epsilon <= 0 || params.epsilon >= 1) throw Error(ErrorCode::BadParams, "epsilon must lie in (0, 1)");
      report.strict = true;
      report.radius_used = phi(table, volume / params.epsilon);
      if (!report.radius_used.is_infinite()) {
        report.rhs = (1 - params.epsilon) / Rational(report.radius_used.radius());
      }
      break;
    }
    case InequalityForm::PeteCorreia: {
      report.strict = true;
      report.radius_used = phi(table, 2 * volume);
      if (!report.radius_used.is_infinite()) {
        report.rhs = Rational(1, 2) / Rational(report.radius_used.radius());
      }
      break;
    }
  }

  if (report.radius_used.is_infinite()) {
    report.rhs = 0;
    report.holds = true;
  } else {
    report.holds = report.strict ? report.lhs > report.rhs : report.lhs >= report.rhs;
  }
  return report;
}

InequalityReport check_inequality(const FiniteSubset& omega, const BallTable& table, InequalityForm form,
                                  const InequalityParams& params) {
  return check_inequality_counts(omega.size(), omega.boundary_size(), table, form, params);
}

nlohmann::json to_json(const InequalityReport& report) {
  nlohmann::json params = nlohmann::json::object();
  switch (report.form) {
    case InequalityForm::AvgGrowth:
    case InequalityForm::GrowthCor:
      params["alpha"] = to_json(report.params.alpha);
      break;
    case InequalityForm::Epsilon:
      params["epsilon"] = to_json(report.params.epsilon);
      break;
    default:
      break;
  }
  nlohmann::json radius = report.radius_used.is_infinite() ? nlohmann::json("infinite")
                                                           : nlohmann::json(report.radius_used.radius());
  return {{"form", std::string(to_string(report.form))},
          {"lhs", to_json(report.lhs)},
          {"rhs", to_json(report.rhs)},
          {"holds", report.holds},
          {"strict", report.strict},
          {"radius_used", radius},
          {"params", params}};
}

}  // namespace cayley
