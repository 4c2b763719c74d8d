#include "fraclog/field.hpp"

#include <cmath>
#include <sstream>

namespace fraclog {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

double exterior_value(const ExteriorSpec& g, double x) {
    return std::visit(
        overloaded{
            [](const ZeroExterior&) { return 0.0; },
            [](const ConstantExterior& e) { return e.c; },
            [x](const PowerDecayExterior& e) { return e.c * std::pow(std::abs(x), -e.s); },
            [x](const GaussianBumpExterior& e) { return e.c * std::exp(-x * x / (2.0 * e.sigma * e.sigma)); },
            [x](const CosineExterior& e) { return e.c * std::cos(e.k * x); },
        },
        g);
}

std::string describe(const ExteriorSpec& g) {
    std::ostringstream os;
    os.precision(17);
    std::visit(overloaded{
                   [&](const ZeroExterior&) { os << "zero"; },
                   [&](const ConstantExterior& e) { os << "constant(c=" << e.c << ")"; },
                   [&](const PowerDecayExterior& e) { os << "power_decay(c=" << e.c << ", s=" << e.s << ")"; },
                   [&](const GaussianBumpExterior& e) {
                       os << "gaussian_bump(c=" << e.c << ", sigma=" << e.sigma << ")";
                   },
                   [&](const CosineExterior& e) { os << "cosine(c=" << e.c << ", k=" << e.k << ")"; },
               },
               g);
    return os.str();
}

}  // namespace fraclog
