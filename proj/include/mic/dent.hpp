#pragma once

#include <string>
#include <variant>

namespace mic {

// Unit dent functions: even, zero at zero, nondecreasing on [0, inf) and
// tending to (or reaching) one. They stand in for the indicator I(x != 0).
struct HyperbolicTangent {
  double a;
};
struct TruncatedLr {
  double a;
  double r;
};
struct ModifiedScad {
  double a;  // 0 < a < sqrt(2/3)
};
struct ModifiedMcp {
  double a;  // 0 < a < sqrt(2)
};
struct ConverseMollifier {
  double b;
};

using DentKind = std::variant<HyperbolicTangent, TruncatedLr, ModifiedScad, ModifiedMcp, ConverseMollifier>;

class DentFunction {
 public:
  // Throws InvalidInput when a parameter is outside its admissible range.
  explicit DentFunction(DentKind kind);

  static DentFunction tanh(double a) { return DentFunction(HyperbolicTangent{a}); }

  const DentKind& kind() const { return kind_; }
  std::string name() const;

  double value(double x) const;
  // Analytic for the hyperbolic tangent, central differences otherwise.
  double d1(double x) const;
  double d2(double x) const;

 private:
  DentKind kind_;
};

double dent_value(const DentFunction& f, double x);
double dent_d1(const DentFunction& f, double x);
double dent_d2(const DentFunction& f, double x);

// x -> w(x)^k; the family is closed under positive integer powers.
class PoweredDent {
 public:
  PoweredDent(DentFunction base, int k);
  double value(double x) const;
  int power() const { return k_; }

 private:
  DentFunction base_;
  int k_;
};

PoweredDent dent_power(const DentFunction& f, int k);

// tanh(a x^2) and its first two derivatives, used on hot paths.
struct TanhDent {
  double w;
  double wdot;
  double wddot;
};
TanhDent tanh_dent(double x, double a);

}  // namespace mic
