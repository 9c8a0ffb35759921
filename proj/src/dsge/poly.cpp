#include "ftvp/dsge/poly.hpp"

#include <cmath>

namespace ftvp::dsge {

StatePoly StatePoly::var(PathVar v, double coef) {
  StatePoly p;
  Monomial m{0, 0, 0, 0};
  m[v] = 1;
  if (coef != 0.0) p.terms_[m] = coef;
  return p;
}

StatePoly& StatePoly::operator+=(const StatePoly& o) {
  for (const auto& [m, c] : o.terms_) {
    double& t = terms_[m];
    t += c;
    if (t == 0.0) terms_.erase(m);
  }
  return *this;
}

StatePoly& StatePoly::operator-=(const StatePoly& o) { return *this += -o; }

StatePoly StatePoly::operator-() const {
  StatePoly p = *this;
  for (auto& kv : p.terms_) kv.second = -kv.second;
  return p;
}

StatePoly operator*(const StatePoly& a, const StatePoly& b) {
  StatePoly p;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      StatePoly::Monomial m;
      for (int i = 0; i < kNumPathVars; ++i) m[i] = ma[i] + mb[i];
      double& t = p.terms_[m];
      t += ca * cb;
      if (t == 0.0) p.terms_.erase(m);
    }
  return p;
}

StatePoly operator*(double s, const StatePoly& a) {
  StatePoly p;
  if (s == 0.0) return p;
  p = a;
  for (auto& kv : p.terms_) kv.second *= s;
  return p;
}

double StatePoly::eval(const PathPoint& x) const {
  double s = 0.0;
  for (const auto& [m, c] : terms_) {
    double v = c;
    for (int i = 0; i < kNumPathVars; ++i)
      for (int e = 0; e < m[i]; ++e) v *= x[i];
    s += v;
  }
  return s;
}

double StatePoly::constant() const {
  auto it = terms_.find(Monomial{0, 0, 0, 0});
  return it == terms_.end() ? 0.0 : it->second;
}

int StatePoly::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) {
    int s = 0;
    for (int e : m) s += e;
    d = std::max(d, s);
  }
  return d;
}

}  // namespace ftvp::dsge
