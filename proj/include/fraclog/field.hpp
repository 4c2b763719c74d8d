#pragma once

#include <string>
#include <variant>
#include <vector>

namespace fraclog {

// Closed-form exterior data families. They describe the field everywhere
// outside the interior; in particular beyond the box [-L, L].

struct ZeroExterior {};

struct ConstantExterior {
    double c = 0.0;
};

/// g(x) = c |x|^{-s}. Any real s is accepted; weighted_l1 reports divergence for s <= -2 alpha.
struct PowerDecayExterior {
    double c = 0.0;
    double s = 1.0;
};

/// g(x) = c exp(-x^2 / (2 sigma^2)).
struct GaussianBumpExterior {
    double c = 0.0;
    double sigma = 1.0;
};

/// g(x) = c cos(k x). Used to continue trigonometric test fields analytically.
struct CosineExterior {
    double c = 0.0;
    double k = 0.0;
};

using ExteriorSpec =
    std::variant<ZeroExterior, ConstantExterior, PowerDecayExterior, GaussianBumpExterior, CosineExterior>;

double exterior_value(const ExteriorSpec& g, double x);

std::string describe(const ExteriorSpec& g);

/// Node values on every box node plus the law governing the field outside the interior.
struct Field {
    std::vector<double> values;
    ExteriorSpec exterior = ZeroExterior{};
};

}  // namespace fraclog
