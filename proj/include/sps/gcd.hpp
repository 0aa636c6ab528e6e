#ifndef SPS_GCD_HPP
#define SPS_GCD_HPP

#include <vector>

#include "json.hpp"
#include "sps/matching.hpp"

namespace sps {

/// gcd data of a circuit modulo I. Term j of the input plays the role of q_j.
struct GcdData {
  FormList u;  // taken from the first term
  /// Per term: positions of U_q in the term's form list, aligned with u
  /// (u[i] is matched to forms[u_pos[q][i]]).
  std::vector<std::vector<std::size_t>> u_pos;
  /// Per term: ordered matching U -> U_q by I.
  std::vector<OrderedMatching> pi;
  /// Per term: sc(pi_q).
  std::vector<Elem> scaling;
  /// Per term: positions not in U_q, in list order.
  std::vector<std::vector<std::size_t>> rest_pos;
  /// sum_q sc(pi_q) alpha_q M(L(T_q) \ U_q); term j corresponds to input term j.
  Circuit sim;
};

/// gcd data of every term of c modulo I. Throws CircuitError when c is not
/// regular modulo I.
GcdData gcd_data(const Circuit& c, const FormIdeal& ideal);

/// sim(C mod I).
Circuit sim_part(const Circuit& c, const FormIdeal& ideal);

/// gcd M(U) as a single term.
Term gcd_term(const GcdData& g, const Field& f);

nlohmann::json gcd_to_json(const GcdData& g, const Field& f);

}  // namespace sps

#endif  // SPS_GCD_HPP
