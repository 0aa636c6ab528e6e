#ifndef SPS_QUOTIENT_HPP
#define SPS_QUOTIENT_HPP

#include <memory>
#include <optional>
#include <vector>

#include "sps/circuit.hpp"

namespace sps {

/// Ideal generated by an ordered list of independent linear forms v_1..v_r,
/// together with the prefix spans sp_0 = {0} through sp_r. r = 0 is the zero
/// ideal.
class FormIdeal {
 public:
  static FormIdeal zero(const Field& f, std::size_t n);
  /// Throws CircuitError if gens is empty or dependent.
  FormIdeal(const Field& f, std::size_t n, const FormList& gens);

  /// This ideal with one more generator appended; throws if it is dependent.
  FormIdeal extended(const LinearForm& l) const;

  const Field& field() const { return data_->span.back().field(); }
  std::size_t dim() const { return data_->span.back().dim(); }
  std::size_t size() const { return data_->gens.size(); }
  bool is_zero_ideal() const { return data_->gens.empty(); }
  const FormList& gens() const { return data_->gens; }
  const SpanBasis& span() const { return data_->span.back(); }
  /// sp(v_0..v_j), 0 <= j <= size().
  const SpanBasis& prefix(std::size_t j) const { return data_->span.at(j); }

  bool operator==(const FormIdeal& o) const { return data_ == o.data_ || data_->gens == o.data_->gens; }

 private:
  struct Data {
    FormList gens;
    std::vector<SpanBasis> span;
  };
  explicit FormIdeal(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
  std::shared_ptr<const Data> data_;
};

/// Representative of l + sp(I) with I's pivot coordinates eliminated.
LinearForm reduce_form(const LinearForm& l, const FormIdeal& ideal);

/// c with f = c g (mod I). Two forms in sp(I) give c = 1.
std::optional<Elem> similar_mod(const LinearForm& f, const LinearForm& g, const FormIdeal& ideal);

/// No term has a form in sp(I).
bool is_regular(const Circuit& c, const FormIdeal& ideal);

/// The circuit in R/I: forms reduced, vanishing terms dropped. nullopt when
/// every term vanishes.
std::optional<Circuit> reduce_circuit(const Circuit& c, const FormIdeal& ideal);

/// Zero verdict for c modulo I.
bool is_identity_mod(const Circuit& c, const FormIdeal& ideal, const OracleConfig& cfg);

/// Similarity class key of l modulo I: normalize(reduce_form(l, I)), or the
/// zero vector for forms in sp(I).
Vector class_key(const LinearForm& l, const FormIdeal& ideal);

}  // namespace sps

#endif  // SPS_QUOTIENT_HPP
