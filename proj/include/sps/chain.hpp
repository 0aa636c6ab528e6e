#ifndef SPS_CHAIN_HPP
#define SPS_CHAIN_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sps/gcd.hpp"

namespace sps {

/// A proven bound failed on a verified input.
class BoundViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Internal consistency check failed (bad input or implementation bug).
class ChainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matching data of one round. Positions index L(T_q) of the original circuit;
/// term indices are 0-based.
struct MData {
  std::vector<std::size_t> q;
  FormList v;
  /// Per q: tau_q from v to V_q.
  std::vector<OrderedMatching> tau;
  /// Per q: positions of V_q in L(T_q), aligned with v.
  std::vector<std::vector<std::size_t>> v_pos;
  /// Per q: positions of V_q in sp(I) and outside sp(S u I).
  std::vector<std::vector<std::size_t>> v0_pos, v1_pos;
  /// Indices into v of V_0 and V_1.
  std::vector<std::size_t> v0, v1;
  /// sum_q sc(tau_q) alpha_q M(L(T_q) \ V_q), terms in q order.
  Circuit residual;
  int type = 0;
  bool external = false;

  FormList v_q(const Circuit& c, std::size_t idx) const;
  FormList v_q0(const Circuit& c, std::size_t idx) const;
  FormList v_q1(const Circuit& c, std::size_t idx) const;
};

struct RoundResult {
  FormIdeal ideal;
  MData mdata;
  std::size_t iterations = 0;
};

/// One round of the iterative procedure starting from the partial basis s.
/// The circuit must be a simple identity with k >= 3 and some form outside sp(s).
RoundResult single_round(const Circuit& c, const SpanBasis& s, const OracleConfig& cfg);

struct ChainLink {
  SpanBasis s;
  FormIdeal ideal;
  MData mdata;
  std::size_t green_rank = 0;  // dim sp(S_i u I_i)
};

struct ChainBounds {
  std::size_t k = 0, d = 0;
  bool log_bounds_apply = false;  // d >= 2
  std::size_t chain_length = 0;   // C(k,2)(log2 d + 3) + (k - 1), floored
  std::size_t type1 = 0;          // C(k,2)(log2 d + 2), floored
  std::size_t type2 = 0;          // C(k,2)
  std::size_t type3 = 0;          // k - 1
};

/// The bound values with floor(c log2 d) computed exactly.
ChainBounds chain_bounds(std::size_t k, std::size_t d);
/// floor(k^3 log2 d).
std::size_t factor_rank_bound(std::size_t k, std::size_t d);

struct ChainSummary {
  std::size_t m = 0;
  std::size_t rank = 0;
  ChainBounds bounds;
  std::size_t n1 = 0, n2 = 0, n3 = 0;
  std::size_t external = 0, internal = 0;
  bool maximal = false;
  bool ok = false;
  std::vector<std::string> violations;
  std::vector<std::string> notes;
};

struct Chain {
  std::vector<ChainLink> links;
  /// Forest over k leaves (0..k-1) followed by one node per external link.
  std::vector<std::size_t> forest_parent;
  std::vector<std::size_t> forest_label;  // link index of each internal node
  ChainSummary summary;
};

struct ChainOptions {
  OracleConfig oracle;
  /// Verify simplicity, minimality and zero-ness before building.
  bool verify_input = true;
  /// Throw BoundViolation when a bound fails; otherwise only record it.
  bool throw_on_violation = true;
};

/// Type per link by comparing each q against the first element of Q.
int classify_mdata(const Circuit& c, const MData& md);

/// Builds a maximal chain, classifies it, builds the forest, and checks every
/// bound. Throws CircuitError or ChainError on invalid input and
/// BoundViolation on a failed bound.
Chain build_chain(const Circuit& c, const ChainOptions& opts = {});

/// One JSON object per round followed by the summary object.
std::vector<nlohmann::json> chain_trace(const Circuit& c, const Chain& chain);
nlohmann::json summary_to_json(const ChainSummary& s);

}  // namespace sps

#endif  // SPS_CHAIN_HPP
