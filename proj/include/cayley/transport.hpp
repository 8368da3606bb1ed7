#pragma once

#include "cayley/ball.hpp"
#include "cayley/isoperimetry.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace cayley {

/// A minimal-length expression g = s_1 ... s_n with its prefixes
/// g_0 = e, g_k = s_1 ... s_k.
struct GeodesicWord {
  Element target;
  std::vector<std::size_t> letters;  // generator indices
  std::vector<Element> prefixes;     // n + 1 entries
};

/// Lexicographically smallest geodesic in generator order: at each step take
/// the first generator s with |s^-1 g| = |g| - 1. Throws HorizonExceeded when
/// |g| is beyond the table.
GeodesicWord geodesic_word(const BallTable& table, const Element& g);

/// Data attached to one offset g in B(r).
struct OffsetRecord {
  Element g;
  int norm = 0;
  /// Omega_g = {x in Omega : xg not in Omega}, as ascending indices into Omega.
  std::vector<std::size_t> leaving;
  /// exit_point[i] = E_g(leaving[i]): index into Omega of the first prefix
  /// point x g_k that lies on the boundary.
  std::vector<std::size_t> exit_point;
};

struct LedgerLimits {
  std::size_t max_omega = 64;
  int max_radius = 6;
};

/// Mass-transport bookkeeping for a pair (Omega, r), built by exhaustive
/// iteration over Omega x B(r). Immutable; two builds from the same inputs are
/// identical.
class TransportLedger {
 public:
  const FiniteSubset& omega() const { return omega_; }
  int radius() const { return radius_; }

  /// One record per g in B(r), in BFS order.
  const std::vector<OffsetRecord>& offsets() const { return offsets_; }
  /// rays()[x] lists the offsets g (indices into offsets()) with xg outside
  /// Omega, i.e. R_x^r(Omega).
  const std::vector<std::vector<std::size_t>>& rays() const { return rays_; }
  /// (offset index, boundary point index) -> |E_g^-1(b)|.
  const std::map<std::pair<std::size_t, std::size_t>, std::size_t>& exit_fibers() const { return fibers_; }

  std::size_t sum_rays() const;
  std::size_t sum_leaving() const;
  std::size_t max_fiber() const;

 private:
  friend TransportLedger build_ledger(const FiniteSubset&, const BallTable&, int, const LedgerLimits&);
  TransportLedger(FiniteSubset omega, int radius) : omega_(std::move(omega)), radius_(radius) {}

  FiniteSubset omega_;
  int radius_;
  std::vector<OffsetRecord> offsets_;
  std::vector<std::vector<std::size_t>> rays_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> fibers_;
};

/// Throws HorizonExceeded, BadParams (limits), EmptySet, or ExitNotFound (which
/// would mean a bug: a path leaving Omega must cross its boundary).
TransportLedger build_ledger(const FiniteSubset& omega, const BallTable& table, int radius,
                             const LedgerLimits& limits = {});

enum class Lemma { Spheres, Balls, Transport, Counting, RayLower, Conclude, Fiber };

std::string_view to_string(Lemma which);
std::optional<Lemma> parse_lemma(std::string_view name);

struct LemmaReport {
  Lemma which = Lemma::Spheres;
  bool precondition_met = true;
  bool holds = false;
  /// Names the violating (r, g, x or b) on failure, or the unmet precondition.
  std::string witness;
};

/// Spheres: s_r <= (|S|-1) s_{r-1}; Balls: b_r <= |S| b_{r-1}; both for r >= 2.
LemmaReport verify_lemma(const GrowthSeries& series, std::size_t generator_count, Lemma which);
LemmaReport verify_lemma(const BallTable& table, Lemma which);

/// Ledger-level lemmas. `alpha` is used by RayLower and Conclude only.
LemmaReport verify_lemma(const TransportLedger& ledger, const BallTable& table, Lemma which,
                         const Rational& alpha = Rational(0));

/// The chain behind the average-length inequality, each link checked on its own:
///   b_r E[|X_r|] |dOmega| >= sum_g |Omega_g| = sum_x |R_x^r| >= alpha/(1+alpha) |Omega| b_{r-1}
/// with r = Phi[(1+alpha)|Omega|] (which must equal the ledger radius).
struct ChainReport {
  bool precondition_met = true;
  BigInt weighted_boundary;  // length_sum_r * |dOmega|
  BigInt sum_leaving;
  BigInt sum_rays;
  Rational lower;
  bool transport_link = false;
  bool counting_link = false;
  bool ray_link = false;
  bool holds() const { return precondition_met && transport_link && counting_link && ray_link; }
};

ChainReport verify_average_growth_chain(const TransportLedger& ledger, const BallTable& table, const Rational& alpha);

/// {omega_size, r, sum_rays, sum_omega_g, max_fiber, lemma_results}
nlohmann::json summary_json(const TransportLedger& ledger, const std::vector<LemmaReport>& lemmas);

}  // namespace cayley
