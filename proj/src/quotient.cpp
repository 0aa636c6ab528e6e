#include "sps/quotient.hpp"

namespace sps {

FormIdeal FormIdeal::zero(const Field& f, std::size_t n) {
  auto d = std::make_shared<Data>();
  d->span.emplace_back(f, n);
  return FormIdeal(std::move(d));
}

FormIdeal::FormIdeal(const Field& f, std::size_t n, const FormList& gens) {
  if (gens.empty()) throw CircuitError("a form-ideal needs at least one generator");
  auto d = std::make_shared<Data>();
  d->span.emplace_back(f, n);
  for (const auto& g : gens) {
    SpanBasis next = d->span.back();
    if (!next.insert(g)) throw CircuitError("form-ideal generators are linearly dependent");
    d->span.push_back(std::move(next));
    d->gens.push_back(g);
  }
  data_ = std::move(d);
}

FormIdeal FormIdeal::extended(const LinearForm& l) const {
  auto d = std::make_shared<Data>(*data_);
  SpanBasis next = d->span.back();
  if (!next.insert(l)) throw CircuitError("new generator lies in the ideal's span");
  d->span.push_back(std::move(next));
  d->gens.push_back(l);
  return FormIdeal(std::move(d));
}

LinearForm reduce_form(const LinearForm& l, const FormIdeal& ideal) { return ideal.span().reduce(l); }

std::optional<Elem> similar_mod(const LinearForm& f, const LinearForm& g, const FormIdeal& ideal) {
  return similar(ideal.field(), reduce_form(f, ideal), reduce_form(g, ideal));
}

bool is_regular(const Circuit& c, const FormIdeal& ideal) {
  for (const auto& t : c.terms)
    for (const auto& l : t.forms)
      if (ideal.span().contains(l)) return false;
  return true;
}

std::optional<Circuit> reduce_circuit(const Circuit& c, const FormIdeal& ideal) {
  Circuit out{c.field, c.n, {}};
  for (const auto& t : c.terms) {
    Term rt{t.coef, {}};
    bool vanishes = false;
    for (const auto& l : t.forms) {
      LinearForm r = reduce_form(l, ideal);
      if (is_zero(r)) {
        vanishes = true;
        break;
      }
      rt.forms.push_back(std::move(r));
    }
    if (!vanishes) out.terms.push_back(std::move(rt));
  }
  if (out.terms.empty()) return std::nullopt;
  return out;
}

bool is_identity_mod(const Circuit& c, const FormIdeal& ideal, const OracleConfig& cfg) {
  auto r = reduce_circuit(c, ideal);
  return !r || is_identity(*r, cfg);
}

Vector class_key(const LinearForm& l, const FormIdeal& ideal) {
  LinearForm r = reduce_form(l, ideal);
  if (is_zero(r)) return r;
  return normalize(ideal.field(), r).canonical;
}

}  // namespace sps
