#pragma once

#include "cayley/ball.hpp"
#include "cayley/folner.hpp"
#include "cayley/group.hpp"
#include "cayley/isoperimetry.hpp"
#include "cayley/numeric.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace cayley {

enum class BoundForm {
  /// |dOmega| / |Omega| >= c / Phi[(1 + alpha) |Omega|] for all finite Omega.
  Csc,
  /// Fol(n) >= |B(c n - rho)| / (1 + alpha) for all n.
  Folner,
};

std::string_view to_string(BoundForm form);

struct BoundParams {
  BoundForm form = BoundForm::Csc;
  Rational c{0};
  Rational alpha{0};
  Rational rho{0};
  std::int64_t s_size = 0;
  /// Volume factor inside Phi for the Csc form; always 1 + alpha.
  Rational inflation() const { return 1 + alpha; }
};

nlohmann::json to_json(const BoundParams& params);

/// Csc (c, alpha) -> Folner (c, alpha, rho). Throws BadParams unless c > 0
/// and rho > 0.
BoundParams csc_to_folner(const BoundParams& csc, const Rational& rho);

/// Folner (c, alpha, rho) -> Csc whose volume factor is
/// |S|^ceil(rho + c) (1 + alpha), i.e. alpha' = that factor - 1.
/// Throws BadParams (c <= 0) or EmptyGeneratingSet (|S| = 0).
BoundParams folner_to_csc(const BoundParams& folner);

/// The family of sets a certificate speaks about.
struct Scope {
  enum class Kind { AllSubsetsOfBall2, ConnectedContainingIdentity };
  Kind kind = Kind::AllSubsetsOfBall2;
  /// Largest set size, for ConnectedContainingIdentity.
  std::size_t max_size = 0;

  static Scope all_subsets_of_ball2() { return {Kind::AllSubsetsOfBall2, 0}; }
  static Scope connected(std::size_t k) { return {Kind::ConnectedContainingIdentity, k}; }

  /// "all-subsets-of-B(2)" or "connected-containing-e:<k>".
  std::string label() const;
};

/// Parses the label format above; "connected:<k>" is accepted too.
std::optional<Scope> parse_scope(std::string_view text);

/// (|Omega|, |dOmega|) of one set. `members` indexes the set's elements in
/// BFS order of the ball table; it may be left empty.
struct SetProfile {
  std::size_t size = 0;
  std::size_t boundary = 0;
  std::vector<std::int32_t> members;
};

/// Outcome of testing a Csc bound over a finite scope. A pass is evidence at
/// that scope only; a failure carries a set that disproves the bound.
struct Certificate {
  BoundParams params;
  std::string scope;
  bool holds = true;
  std::uint64_t sets_checked = 0;
  /// First failing profile, and its set when it could be rebuilt.
  std::optional<SetProfile> failing;
  std::optional<FiniteSubset> witness;
  nlohmann::json derived_bounds = nlohmann::json::array();
};

nlohmann::json to_json(const Certificate& certificate);

struct CertifyOptions {
  unsigned threads = 1;
  BallOptions ball;
  /// Largest |B(2)| for which every subset is enumerated.
  std::size_t max_ball2_size = 20;
};

/// Checks the Csc bound against every set in scope. Throws BadParams for a
/// non-Csc form, HorizonExceeded if Phi cannot be resolved, and
/// MemoryBudgetExceeded when the scope is too large to enumerate.
Certificate certify_at_scale(const Group& group, const BoundParams& params, const Scope& scope,
                             const CertifyOptions& options = {});

/// The shared core: checks the Csc bound on given profiles, in order, with Phi
/// taken from `table`. The witness is the first failing profile.
Certificate certify_profiles(const std::vector<SetProfile>& profiles, const BallTable& table,
                             const BoundParams& params, std::string scope_label);

/// Profiles of every set in scope, in canonical order: subsets of B(2) by
/// increasing bitmask over BFS order; connected sets as the (size, boundary)
/// census, one representative per pair.
std::vector<SetProfile> scope_profiles(const Group& group, const Scope& scope, const CertifyOptions& options,
                                       std::uint64_t* sets_seen = nullptr);

struct FolnerFormRow {
  int n = 0;
  std::int64_t fol = 0;
  bool fol_infinite = false;
  Rational rhs;
  bool holds = false;
};

struct FolnerFormCheck {
  bool holds = true;
  std::vector<FolnerFormRow> rows;
};

/// Fol(n) >= |B(c n - rho)| / (1 + alpha) on every exact or infinite record;
/// lower-bound records are skipped. Throws BadParams for a non-Folner form.
FolnerFormCheck check_folner_form(const BoundParams& params, const std::vector<FolnerRecord>& records,
                                  const BallTable& table);

/// An extended non-negative real: a double or +infinity.
struct Extended {
  bool infinite = false;
  double value = 0.0;

  static Extended inf() { return {true, 0.0}; }
  static Extended of(double v) { return {false, v}; }
};

nlohmann::json to_json(const Extended& x);

/// Window statistics toward liminf ln Fol(n)/n over lim ln b_n / n.
///
/// The numerator fields are minima of ln(.)/n over n in [ceil(N/2), N], from
/// lower bounds (exact values or search bounds) and upper bounds (exact values
/// or family sizes). They are not bounds on the liminf itself. The
/// denominator is bracketed by denominator_upper (the Fekete infimum, a true
/// upper bound) and denominator_lower_evidence (ln(b_N / b_{N-1}), heuristic).
struct QuotientEstimate {
  int horizon = 0;
  int window_start = 0;
  Extended numerator_lower;
  Extended numerator_upper;
  double denominator_upper = 0.0;
  double denominator_lower_evidence = 0.0;
  /// numerator_lower / denominator_upper.
  Extended c_lower;
  /// numerator_upper / denominator_lower_evidence.
  Extended c_upper_evidence;
  /// True only when the value of C follows without asymptotic guesswork:
  /// the Folner records are infinite by a supplied non-amenability fact.
  bool certified = false;
  std::vector<std::string> caveats;
};

nlohmann::json to_json(const QuotientEstimate& estimate);

/// Throws NotApplicable for groups of polynomial growth and InsufficientData
/// when records do not cover the window or the table is shorter than N.
QuotientEstimate quotient_estimate(const Group& group, int horizon, const std::vector<FolnerRecord>& records,
                                   const BallTable& table);

}  // namespace cayley
