#ifndef SPS_CIRCUIT_HPP
#define SPS_CIRCUIT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "sps/forms.hpp"

namespace sps {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr std::uint64_t kDefaultExpansionBudget = 10'000'000;
constexpr std::uint64_t kDefaultFactorBudget = 1'000'000;

/// SPS_BUDGET from the environment, else kDefaultExpansionBudget.
std::uint64_t expansion_budget_from_env();

struct OracleConfig {
  enum class Mode { exact, randomized, automatic };
  Mode mode = Mode::automatic;
  unsigned trials = 20;
  std::uint64_t seed = 1;
  std::uint64_t budget = kDefaultExpansionBudget;
  /// Evaluation field for randomized tests; chosen automatically when absent.
  std::optional<Field> eval_field;
};

/// Polynomial as a map from exponent vectors to nonzero coefficients.
struct SparsePoly {
  Field field;
  std::size_t vars = 0;
  std::map<std::vector<unsigned>, Elem> coeffs;

  bool is_zero() const { return coeffs.empty(); }
  static SparsePoly constant(const Field& f, std::size_t vars, Elem c);
  static SparsePoly linear(const Field& f, const LinearForm& l);
  SparsePoly operator+(const SparsePoly& o) const;
  SparsePoly operator-(const SparsePoly& o) const;
  SparsePoly operator*(const SparsePoly& o) const;
  SparsePoly scaled(Elem c) const;
  bool operator==(const SparsePoly& o) const { return vars == o.vars && coeffs == o.coeffs; }
};

/// coef * M(forms) expanded in the forms' ambient variables.
SparsePoly expand_product(const Field& f, std::size_t n, Elem coef, const FormList& forms);
/// Full sparse expansion in n variables (test oracle, no compression).
SparsePoly expand(const Circuit& c);

FormList circuit_L(const Circuit& c);
SpanBasis span_of(const Field& f, std::size_t n, const FormList& forms);
std::size_t circuit_rank(const Circuit& c);

/// Upper bound on the dense monomial count of the compressed expansion.
std::uint64_t expansion_cost(const Circuit& c);
/// Exact expansion after rank compression. Throws BudgetExceeded.
bool zero_test_exact(const Circuit& c, std::uint64_t budget = kDefaultExpansionBudget);
/// Seeded Schwartz-Zippel test. Evaluates over `eval` when given, otherwise
/// over the circuit field or its smallest extension with more than 4d elements
/// when the circuit field has at most 2d.
bool zero_test_random(const Circuit& c, unsigned trials, std::uint64_t seed,
                      const std::optional<Field>& eval = std::nullopt);
/// Zero verdict under the configured oracle. Exact and automatic modes first
/// look for a nonzero evaluation, which is a sound early exit.
bool is_identity(const Circuit& c, const OracleConfig& cfg);

bool is_simple(const Circuit& c);
/// Every nonempty proper subset of terms sums to a nonzero polynomial. k <= 16.
bool is_minimal(const Circuit& c, const OracleConfig& cfg);
/// Terms at 0-based indices q (ascending, distinct).
Circuit subcircuit(const Circuit& c, const std::vector<std::size_t>& q);

/// Normalized q with C = 0 mod (q), for prime fields with a feasible candidate
/// count. The caller is responsible for C being nonzero.
FormList linear_factors(const Circuit& c, const OracleConfig& cfg,
                        std::uint64_t budget = kDefaultFactorBudget);

/// Replaces x by A x: each form row l becomes l A. A is n x n.
Circuit change_variables(const Circuit& c, const std::vector<Vector>& a);
LinearForm transform_form(const Field& f, const LinearForm& l, const std::vector<Vector>& a);

nlohmann::json element_to_json(const Field& f, Elem a);
Elem element_from_json(const Field& f, const nlohmann::json& j);
nlohmann::json form_to_json(const Field& f, const LinearForm& l);
LinearForm form_from_json(const Field& f, std::size_t n, const nlohmann::json& j);
nlohmann::json circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const nlohmann::json& j);
/// Canonical text: sorted keys, no whitespace.
std::string emit_circuit(const Circuit& c);
Circuit parse_circuit(const std::string& text);

}  // namespace sps

#endif  // SPS_CIRCUIT_HPP
