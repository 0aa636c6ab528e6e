#ifndef SPS_MATCHING_HPP
#define SPS_MATCHING_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sps/quotient.hpp"

namespace sps {

class MatchingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Certificate for U[i] -> V[target]: V[target] = c U[i] + w with w in sp_level.
/// For ordered matchings U[i] is outside sp_level and level is minimal.
struct MatchEdge {
  std::size_t target = 0;
  Elem c;
  LinearForm w;
  std::size_t level = 0;
};

/// Position-level bijection between two form lists by a form-ideal.
class OrderedMatching {
 public:
  /// Certifies sigma (U[i] -> V[sigma[i]]). With ordered = false only the
  /// plain ideal-matching condition at the top level is required.
  static std::optional<OrderedMatching> certify(const FormIdeal& ideal, FormList u, FormList v,
                                                std::vector<std::size_t> sigma, bool ordered = true);
  /// As certify, but throws MatchingError when sigma is not a valid matching.
  static OrderedMatching make(const FormIdeal& ideal, FormList u, FormList v, std::vector<std::size_t> sigma,
                              bool ordered = true);

  const FormIdeal& ideal() const { return ideal_; }
  const FormList& domain() const { return u_; }
  const FormList& codomain() const { return v_; }
  const std::vector<MatchEdge>& edges() const { return edges_; }
  std::vector<std::size_t> sigma() const;
  bool ordered() const { return ordered_; }
  std::size_t size() const { return u_.size(); }

  /// Re-checks every edge certificate against the ideal.
  bool verify() const;

 private:
  OrderedMatching(FormIdeal ideal, FormList u, FormList v, std::vector<MatchEdge> edges, bool ordered)
      : ideal_(std::move(ideal)), u_(std::move(u)), v_(std::move(v)), edges_(std::move(edges)), ordered_(ordered) {}

  FormIdeal ideal_;
  FormList u_;
  FormList v_;
  std::vector<MatchEdge> edges_;
  bool ordered_ = true;
};

/// Pairs U and V class by class modulo I in list order. The result is ordered
/// whenever its pairs admit ordered certificates, which holds when no form of
/// U or V lies in sp(I).
std::optional<OrderedMatching> find_matching(const FormList& u, const FormList& v, const FormIdeal& ideal);

/// Product of edge scalars; 1 for the empty matching. Needs an ordered matching.
Elem sc(const OrderedMatching& pi);

OrderedMatching invert(const OrderedMatching& pi);
OrderedMatching disjoint_union(const OrderedMatching& a, const OrderedMatching& b);
/// second after first; first's codomain must equal second's domain.
OrderedMatching compose(const OrderedMatching& second, const OrderedMatching& first);
/// Keeps the domain positions `keep` (ascending); their images become the
/// codomain, in ascending position order.
OrderedMatching restrict_to(const OrderedMatching& pi, const std::vector<std::size_t>& keep);

/// Flips images until U[u_sub[i]] are matched to similar forms among V[v_sub].
/// u_sub and v_sub are ascending position lists naming similar sublists.
OrderedMatching unscramble(const OrderedMatching& pi, const std::vector<std::size_t>& u_sub,
                           const std::vector<std::size_t>& v_sub);
/// Every edge becomes a similarity; needs U and V similar.
OrderedMatching trivialize(const OrderedMatching& pi);

enum class DoublingVerdict { similar, bound_ok, contradiction };
std::string to_string(DoublingVerdict v);

struct DoublingRound {
  std::size_t round = 0;  // 1-based
  std::size_t green_u = 0;
  std::size_t green_v = 0;
  bool doubled = false;
  bool doubling_required = false;
};

struct DoublingReport {
  DoublingVerdict verdict = DoublingVerdict::similar;
  std::size_t d = 0;
  std::size_t d_prime = 0;
  std::size_t r = 0;
  std::size_t i0 = 0;  // 1-based; r + 1 when the seed never enters sp(J_i)
  std::size_t initial_green = 0;
  std::vector<DoublingRound> rounds;
  std::vector<std::string> failures;
};

/// Constructive check of the doubling argument on concrete matchings.
/// Throws MatchingError on invalid matchings or non-orthogonal ideals.
DoublingReport doubling_check(const FormList& u, const FormList& v, const std::vector<FormIdeal>& ideals,
                              const std::vector<OrderedMatching>& matchings);

}  // namespace sps

#endif  // SPS_MATCHING_HPP
