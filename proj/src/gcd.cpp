#include "sps/gcd.hpp"

#include <algorithm>
#include <map>

namespace sps {

GcdData gcd_data(const Circuit& c, const FormIdeal& ideal) {
  c.validate();
  if (!is_regular(c, ideal)) throw CircuitError("gcd data needs a circuit regular modulo the ideal");
  const Field& f = c.field;
  const std::size_t k = c.k();

  std::vector<std::vector<Vector>> keys(k);
  std::map<Vector, std::size_t> quota;
  for (std::size_t q = 0; q < k; ++q) {
    std::map<Vector, std::size_t> counts;
    for (const auto& l : c.terms[q].forms) {
      keys[q].push_back(class_key(l, ideal));
      ++counts[keys[q].back()];
    }
    if (q == 0) {
      quota = counts;
    } else {
      for (auto it = quota.begin(); it != quota.end();) {
        auto found = counts.find(it->first);
        if (found == counts.end()) {
          it = quota.erase(it);
        } else {
          it->second = std::min(it->second, found->second);
          ++it;
        }
      }
    }
  }

  GcdData g{{}, {}, {}, {}, {}, Circuit{f, c.n, {}}};
  // U from the first term in list order; per class, the i-th occurrence in T_q
  // is matched to the i-th occurrence in U.
  std::map<Vector, std::vector<std::size_t>> u_slots;  // class -> indices into u
  {
    std::map<Vector, std::size_t> left = quota;
    for (std::size_t i = 0; i < keys[0].size(); ++i) {
      auto it = left.find(keys[0][i]);
      if (it != left.end() && it->second > 0) {
        --it->second;
        u_slots[keys[0][i]].push_back(g.u.size());
        g.u.push_back(c.terms[0].forms[i]);
      }
    }
  }

  for (std::size_t q = 0; q < k; ++q) {
    std::map<Vector, std::size_t> used;
    std::vector<std::size_t> pos(g.u.size());
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < keys[q].size(); ++i) {
      auto it = u_slots.find(keys[q][i]);
      std::size_t& n_used = used[keys[q][i]];
      if (it != u_slots.end() && n_used < it->second.size()) {
        pos[it->second[n_used]] = i;
        ++n_used;
      } else {
        rest.push_back(i);
      }
    }
    // U_q in list order of T_q; sigma maps u indices into it.
    std::vector<std::size_t> order(pos);
    std::sort(order.begin(), order.end());
    FormList uq;
    for (std::size_t i : order) uq.push_back(c.terms[q].forms[i]);
    std::vector<std::size_t> sigma;
    for (std::size_t p : pos)
      sigma.push_back(static_cast<std::size_t>(std::lower_bound(order.begin(), order.end(), p) - order.begin()));
    OrderedMatching pi = OrderedMatching::make(ideal, g.u, std::move(uq), std::move(sigma), true);
    Elem s = sc(pi);

    Term simt{f.mul(s, c.terms[q].coef), {}};
    for (std::size_t i : rest) simt.forms.push_back(c.terms[q].forms[i]);
    g.sim.terms.push_back(std::move(simt));
    g.u_pos.push_back(std::move(pos));
    g.pi.push_back(std::move(pi));
    g.scaling.push_back(s);
    g.rest_pos.push_back(std::move(rest));
  }
  return g;
}

Circuit sim_part(const Circuit& c, const FormIdeal& ideal) { return gcd_data(c, ideal).sim; }

Term gcd_term(const GcdData& g, const Field& f) { return Term{f.one(), g.u}; }

nlohmann::json gcd_to_json(const GcdData& g, const Field& f) {
  nlohmann::json u = nlohmann::json::array();
  for (const auto& l : g.u) u.push_back(form_to_json(f, l));
  nlohmann::json per = nlohmann::json::array();
  for (std::size_t q = 0; q < g.pi.size(); ++q) {
    nlohmann::json pos = nlohmann::json::array();
    for (std::size_t p : g.u_pos[q]) pos.push_back(p + 1);
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : g.pi[q].edges())
      edges.push_back({{"c", element_to_json(f, e.c)}, {"level", e.level}, {"target", e.target + 1}});
    per.push_back({{"U_q", pos}, {"edges", edges}, {"sc", element_to_json(f, g.scaling[q])}});
  }
  return {{"U", u}, {"terms", per}, {"sim", circuit_to_json(g.sim)}};
}

}  // namespace sps
