#include "divrate/models.hpp"

#include <cmath>

#include "divrate/errors.hpp"

namespace divrate {

RateFunction named_rate(const std::string& name) {
  if (name == "one") return [](double) { return 1.0; };
  if (name == "linear") return [](double x) { return x; };
  if (name == "square") return [](double x) { return x * x; };
  if (name == "b2")
    return [](double x) {
      if (x <= 1.5) return 1.0;
      if (x >= 1.7) return 5.0;
      return 1.0 + (x - 1.5) * (5.0 - 1.0) / 0.2;
    };
  if (name == "b3") return [](double x) { return std::exp(-8.0 * (x - 2.0) * (x - 2.0)) + 1.0; };
  throw ArgumentError("unknown rate model: " + name);
}

bool is_named_rate(const std::string& name) {
  return name == "one" || name == "linear" || name == "square" || name == "b2" || name == "b3";
}

}  // namespace divrate
