#include "mic/dent.hpp"

#include <cmath>
#include <limits>

#include "mic/glm.hpp"

namespace mic {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const char* what) {
  if (!ok) throw InvalidInput(what);
}

double central_diff(const auto& f, double x, double h) { return (f(x + h) - f(x - h)) / (2.0 * h); }

}  // namespace

TanhDent tanh_dent(double x, double a) {
  const double u = a * x * x;
  const double w = std::tanh(u);
  const double c = std::cosh(u);
  const double sech2 = 1.0 / (c * c);  // 1 - w*w cancels to 0 once tanh rounds to 1
  return {w, 2.0 * a * x * sech2, 2.0 * a * sech2 * (1.0 - 4.0 * a * x * x * w)};
}

DentFunction::DentFunction(DentKind kind) : kind_(kind) {
  std::visit(overloaded{
                 [](const HyperbolicTangent& k) { require(k.a > 0 && std::isfinite(k.a), "tanh dent needs a > 0"); },
                 [](const TruncatedLr& k) {
                   require(k.a > 0 && std::isfinite(k.a), "truncated L_r dent needs a > 0");
                   require(k.r > 0 && std::isfinite(k.r), "truncated L_r dent needs r > 0");
                 },
                 [](const ModifiedScad& k) {
                   require(k.a > 0 && k.a < std::sqrt(2.0 / 3.0), "modified SCAD dent needs 0 < a < sqrt(2/3)");
                 },
                 [](const ModifiedMcp& k) {
                   require(k.a > 0 && k.a < std::sqrt(2.0), "modified MCP dent needs 0 < a < sqrt(2)");
                 },
                 [](const ConverseMollifier& k) {
                   require(k.b > 0 && std::isfinite(k.b), "converse mollifier needs b > 0");
                 },
             },
             kind_);
}

std::string DentFunction::name() const {
  return std::visit(overloaded{
                        [](const HyperbolicTangent&) { return std::string("tanh"); },
                        [](const TruncatedLr&) { return std::string("truncated_lr"); },
                        [](const ModifiedScad&) { return std::string("modified_scad"); },
                        [](const ModifiedMcp&) { return std::string("modified_mcp"); },
                        [](const ConverseMollifier&) { return std::string("converse_mollifier"); },
                    },
                    kind_);
}

double DentFunction::value(double x) const {
  const double ax = std::abs(x);
  return std::visit(overloaded{
                        [&](const HyperbolicTangent& k) { return std::tanh(k.a * x * x); },
                        [&](const TruncatedLr& k) { return ax <= k.a ? std::pow(ax / k.a, k.r) : 1.0; },
                        [&](const ModifiedScad& k) {
                          const double a = k.a;
                          if (ax <= a) return a * ax;
                          const double knot = (2.0 - a * a) / a;
                          if (ax < knot)
                            return (2.0 * a * (2.0 - a * a) * ax - a * a * a * a - a * a * ax * ax) /
                                   (4.0 * (1.0 - a * a));
                          return 1.0;
                        },
                        [&](const ModifiedMcp& k) {
                          return ax <= 2.0 / k.a ? k.a * ax - k.a * k.a * ax * ax / 4.0 : 1.0;
                        },
                        [&](const ConverseMollifier& k) {
                          if (ax >= k.b) return 1.0;
                          return 1.0 - std::exp(-x * x / (k.b * k.b - x * x));
                        },
                    },
                    kind_);
}

double DentFunction::d1(double x) const {
  if (const auto* t = std::get_if<HyperbolicTangent>(&kind_)) return tanh_dent(x, t->a).wdot;
  if (x == 0.0) return 0.0;
  const double h = 1e-6 * std::max(1.0, std::abs(x));
  return central_diff([this](double v) { return value(v); }, x, h);
}

double DentFunction::d2(double x) const {
  if (const auto* t = std::get_if<HyperbolicTangent>(&kind_)) return tanh_dent(x, t->a).wddot;
  const double h = 1e-4 * std::max(1.0, std::abs(x));
  return (value(x + h) - 2.0 * value(x) + value(x - h)) / (h * h);
}

double dent_value(const DentFunction& f, double x) { return f.value(x); }
double dent_d1(const DentFunction& f, double x) { return f.d1(x); }
double dent_d2(const DentFunction& f, double x) { return f.d2(x); }

PoweredDent::PoweredDent(DentFunction base, int k) : base_(std::move(base)), k_(k) {
  if (k < 1) throw InvalidInput("dent power must be a positive integer");
}

double PoweredDent::value(double x) const { return std::pow(base_.value(x), k_); }

PoweredDent dent_power(const DentFunction& f, int k) { return PoweredDent(f, k); }

}  // namespace mic
