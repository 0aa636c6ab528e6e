#ifndef SPS_FORMS_HPP
#define SPS_FORMS_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sps/algebra.hpp"

namespace sps {

// A homogeneous linear form sum a_i x_i, stored as its coefficient vector.
using LinearForm = Vector;
// Ordered multiset of forms. Order only disambiguates repeated forms.
using FormList = std::vector<LinearForm>;

class CircuitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// alpha * prod(forms). Degree-0 terms (empty product) are allowed.
struct Term {
  Elem coef;
  FormList forms;
  std::size_t degree() const { return forms.size(); }
  bool operator==(const Term&) const = default;
};

struct Circuit {
  Field field;
  std::size_t n = 0;
  std::vector<Term> terms;

  std::size_t k() const { return terms.size(); }
  std::size_t max_degree() const;
  /// All terms share one degree.
  bool homogeneous() const;
  /// Throws CircuitError on empty circuits, zero constants, zero forms or
  /// dimension mismatch.
  void validate() const;
  bool operator==(const Circuit& o) const {
    return field == o.field && n == o.n && terms == o.terms;
  }
};

struct Normalized {
  LinearForm canonical;
  Elem scalar;
};

/// l = scalar * canonical with canonical's leading coefficient 1.
Normalized normalize(const Field& f, const LinearForm& l);

/// c with a = c * b, if any. Zero is similar only to zero (with c = 1).
std::optional<Elem> similar(const Field& f, const LinearForm& a, const LinearForm& b);

/// Sublist of s similar to l, in list order.
FormList simi(const Field& f, const LinearForm& l, const FormList& s);

/// Witnessing bijection u[i] ~ v[perm[i]], matching repeated classes in list order.
std::optional<std::vector<std::size_t>> lists_similar(const Field& f, const FormList& u,
                                                      const FormList& v);

bool lists_coprime(const Field& f, const FormList& u, const FormList& v);

struct AffineForm {
  Vector coeffs;
  Elem constant;
};

struct AffineTerm {
  Elem coef;
  std::vector<AffineForm> forms;
};

/// Constants become multiples of a fresh last variable x_{n+1}, and every term
/// is padded with copies of x_{n+1} up to the largest degree.
Circuit homogenize(const Field& f, const std::vector<AffineTerm>& terms, std::size_t n);

/// e_i in dimension n.
LinearForm unit_form(const Field& f, std::size_t n, std::size_t i);

std::string form_to_string(const Field& f, const LinearForm& l);

}  // namespace sps

#endif  // SPS_FORMS_HPP
