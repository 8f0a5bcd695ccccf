#include "divrate/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "divrate/rng.hpp"

namespace divrate {

SizeSample rejection_sample(const GridFunction& N, std::size_t n, std::uint64_t seed,
                            RejectionStats* stats) {
  if (n < 1) throw ArgumentError("rejection_sample: n must be >= 1");
  if (N.min_value() < 0.0) throw ArgumentError("rejection_sample: density must be nonnegative");
  const double peak = N.max_value();
  if (peak <= 0.0) throw DegenerateDensityError("rejection_sample: density vanishes identically");

  const double bound = 1.0001 * peak;
  const double lo = N.x_min();
  const double len = N.x_max() - N.x_min();

  SizeSample sample;
  sample.seed = seed;
  sample.values.resize(n);
  RejectionStats local;

  for (std::size_t i = 0; i < n; ++i) {
    SplitMix64 rng(seed_combine(seed, i));
    for (std::uint64_t guard = 0;; ++guard) {
      if (guard > 100000000ULL)
        throw DegenerateDensityError("rejection_sample: acceptance rate is effectively zero");
      const double y = lo + len * rng.next_double();
      const double u = rng.next_double();
      ++local.proposals;
      if (u * bound <= interp_eval(N, y)) {
        sample.values[i] = y;
        ++local.accepts;
        break;
      }
    }
  }
  if (stats) *stats = local;
  return sample;
}

namespace {

// Cumulative trapezoid integral at the nodes, normalized to end at 1.
std::vector<double> cumulative_mass(const GridFunction& N) {
  const std::size_t m = N.size();
  std::vector<double> c(m, 0.0);
  const double dx = N.dx();
  for (std::size_t j = 1; j < m; ++j) c[j] = c[j - 1] + 0.5 * (N[j - 1] + N[j]) * dx;
  const double total = c.back();
  if (total <= 0.0) throw DegenerateDensityError("density has zero mass");
  for (double& v : c) v /= total;
  return c;
}

double cdf_from_cumulative(const GridFunction& N, const std::vector<double>& c, double total,
                           double x) {
  if (x <= N.x_min()) return 0.0;
  if (x >= N.x_max()) return 1.0;
  const double dx = N.dx();
  double t = (x - N.x_min()) / dx;
  auto j = static_cast<std::size_t>(t);
  if (j > N.size() - 2) j = N.size() - 2;
  const double s = (t - static_cast<double>(j)) * dx;  // offset into the cell
  const double slope = (N[j + 1] - N[j]) / dx;
  // Integral of the linear interpolant over [x_j, x_j + s].
  const double part = N[j] * s + 0.5 * slope * s * s;
  return c[j] + part / total;
}

}  // namespace

double tabulated_cdf(const GridFunction& N, double x) {
  const auto c = cumulative_mass(N);
  return cdf_from_cumulative(N, c, 1.0, x);
}

double tabulated_quantile(const GridFunction& N, double u) {
  if (u < 0.0 || u > 1.0) throw ArgumentError("tabulated_quantile: u must be in [0, 1]");
  const auto c = cumulative_mass(N);
  double lo = N.x_min(), hi = N.x_max();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cdf_from_cumulative(N, c, 1.0, mid) < u)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double ks_distance(const SizeSample& sample, const GridFunction& N) {
  if (sample.values.empty()) throw ArgumentError("ks_distance: empty sample");
  std::vector<double> sorted = sample.values;
  std::sort(sorted.begin(), sorted.end());
  const auto c = cumulative_mass(N);
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf_from_cumulative(N, c, 1.0, sorted[i]);
    d = std::max(d, std::fabs(f - static_cast<double>(i + 1) / n));
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
  }
  return d;
}

void write_sample_csv(const SizeSample& sample, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "x\n";
  char buf[40];
  for (double v : sample.values) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out << buf;
  }
  if (!out) throw IoError("write failed: " + path);
}

SizeSample read_sample_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty sample CSV: " + path);
  SizeSample s;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    s.values.push_back(std::stod(line));
  }
  if (s.values.empty()) throw IoError("sample CSV has no rows: " + path);
  return s;
}

}  // namespace divrate
