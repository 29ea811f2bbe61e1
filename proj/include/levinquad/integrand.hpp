#pragma once

#include <complex>
#include <functional>
#include <string_view>

namespace levinquad {

/// Which oscillator multiplies f: exp(i g), cos(g) or sin(g).
enum class Kernel { exp, cos, sin };

[[nodiscard]] std::string_view to_string(Kernel kernel) noexcept;
/// Throws std::invalid_argument for anything but "exp", "cos", "sin".
[[nodiscard]] Kernel parse_kernel(std::string_view name);

/// The pair (f, g) of an integral of f(x) K(g(x)) over an interval. Both
/// callables must be re-entrant; the driver may call them from several threads.
struct Integrand {
    std::function<std::complex<double>(double)> f;
    std::function<double(double)> g;
    Kernel kernel = Kernel::exp;
};

}  // namespace levinquad
