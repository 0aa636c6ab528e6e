#ifndef SPS_FAMILIES_HPP
#define SPS_FAMILIES_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sps/matching.hpp"

namespace sps {

enum class FamilyKind { ks, joined, tight_lists, nonsimple_intro, nonminimal_intro };

struct FamilySpec {
  FamilyKind kind = FamilyKind::ks;
  std::size_t r = 0, i = 0, s = 0, d = 0;
};

/// The three-term identity over F_2 on x_1..x_r with degree 2^(r-2).
Circuit gen_ks(std::size_t r);

/// Joins D with the three terms of base on fresh variables appended after
/// D's. With verify set, the output is checked to be a simple minimal identity.
Circuit gen_joined(const Circuit& d, const Circuit& base, bool verify = true);

/// D_i: i joins starting from gen_ks(r). Throws BudgetExceeded when the
/// total number of forms exceeds form_budget.
Circuit gen_family(std::size_t r, std::size_t i, std::size_t form_budget = 1u << 22);

/// r_i > (k_i / 3) log2 d_i, evaluated as 2^(3 r_i) > d_i^k_i.
bool family_rank_inequality(std::size_t rank, std::size_t k, std::size_t d);

struct TightLists {
  Field field;
  std::size_t n = 0;
  FormList u, v;
  /// All claimed ideals: (x_1), ..., (x_{s-1}), (x_1 + ... + x_{s-1} + 2 x_s).
  std::vector<FormIdeal> claimed;
  /// Claimed ideals whose matching verifies, in claimed order, with matchings.
  std::vector<FormIdeal> ideals;
  std::vector<OrderedMatching> matchings;
  std::vector<std::size_t> verified_index;
};

/// Lists U (even parity) and V (odd parity) over F_p, p >= 5.
TightLists gen_tight_lists(std::size_t s, std::uint64_t p = 5);

/// (x_1...x_d) - (x_1...x_d), and
/// (y_1...y_d) x_1 - (y_1...y_d) x_1 + (z_1...z_d) x_2 - (z_1...z_d) x_2.
std::pair<Circuit, Circuit> gen_intro_counterexamples(std::size_t d, std::uint64_t p = 2);

/// Lists file: {"p", "e", "n", "U", "V", "ideals"}.
nlohmann::json lists_to_json(const Field& f, std::size_t n, const FormList& u, const FormList& v,
                             const std::vector<FormIdeal>& ideals);
struct ListsInput {
  Field field;
  std::size_t n = 0;
  FormList u, v;
  std::vector<FormIdeal> ideals;
};
ListsInput lists_from_json(const nlohmann::json& j);

}  // namespace sps

#endif  // SPS_FAMILIES_HPP
