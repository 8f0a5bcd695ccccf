#pragma once

#include <functional>
#include <string>

namespace divrate {

/// Growth and division rates as evaluable functions, so that tabulations can
/// be rebuilt when the solver enlarges its domain. Built-in names:
///   one     : 1
///   linear  : x
///   square  : x^2
///   b2      : 1 for x <= 1.5, affine up to 5 at x = 1.7, then 5
///   b3      : exp(-8 (x - 2)^2) + 1
using RateFunction = std::function<double(double)>;

/// Look up a built-in rate by name; throws ArgumentError for unknown names.
RateFunction named_rate(const std::string& name);

bool is_named_rate(const std::string& name);

}  // namespace divrate
