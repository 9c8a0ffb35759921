#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

namespace ftvp::dsge {

// Indices of the path variables the coefficient builders depend on.
enum PathVar { kC = 0, kK = 1, kKnext = 2, kZ = 3 };
inline constexpr int kNumPathVars = 4;

using PathPoint = std::array<double, kNumPathVars>;  // (ĉ_t, k̂_t, k̂_{t+1}, z_t)

// Sparse polynomial in the four path variables. Coefficient builders are
// stored in this form so their degree can be inspected.
class StatePoly {
 public:
  using Monomial = std::array<int, kNumPathVars>;

  StatePoly() = default;
  StatePoly(double c) { if (c != 0.0) terms_[Monomial{0, 0, 0, 0}] = c; }  // NOLINT
  static StatePoly var(PathVar v, double coef = 1.0);

  StatePoly& operator+=(const StatePoly& o);
  StatePoly& operator-=(const StatePoly& o);
  StatePoly operator-() const;
  friend StatePoly operator+(StatePoly a, const StatePoly& b) { return a += b; }
  friend StatePoly operator-(StatePoly a, const StatePoly& b) { return a -= b; }
  friend StatePoly operator*(const StatePoly& a, const StatePoly& b);
  friend StatePoly operator*(double s, const StatePoly& a);

  double eval(const PathPoint& x) const;
  double constant() const;
  int degree() const;  // -1 for the zero polynomial
  bool is_constant() const { return degree() <= 0; }
  const std::map<Monomial, double>& terms() const { return terms_; }

 private:
  std::map<Monomial, double> terms_;
};

}  // namespace ftvp::dsge
