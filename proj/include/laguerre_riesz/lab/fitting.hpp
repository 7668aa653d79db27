#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace laguerre_riesz::lab {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Ordinary least squares y = intercept + slope * x.
inline LineFit ols(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("ols: need at least two paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("ols: abscissae are all equal");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

// FNV-1a, used to derive per-experiment streams from one user seed.
inline std::uint64_t stable_hash(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::string_view stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stable_hash(stream)), static_cast<std::uint32_t>(stable_hash(stream) >> 32)};
  return std::mt19937_64(seq);
}

struct SlopeFit {
  double slope = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
  double stderr_bootstrap = std::numeric_limits<double>::quiet_NaN();
  std::size_t points = 0;
  double decades = 0.0;  // log10(max abscissa / min abscissa)
  int resamples = 0;
};

inline constexpr std::size_t kMinFitPoints = 6;
inline constexpr double kMinFitDecades = 1.2;

inline bool conclusive(const SlopeFit& f) { return f.points >= kMinFitPoints && f.decades >= kMinFitDecades; }

// Log-log slope of values against abscissae, with a pairs-bootstrap
// standard error. Resamples whose abscissae collapse to one value are redrawn.
inline SlopeFit fit_loglog(std::span<const double> abscissa, std::span<const double> values, std::uint64_t seed,
                           std::string_view stream, int resamples = 200) {
  if (abscissa.size() != values.size()) throw std::invalid_argument("fit_loglog: size mismatch");
  if (resamples < 200) throw std::invalid_argument("fit_loglog: at least 200 bootstrap resamples are required");
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < abscissa.size(); ++i) {
    if (!(abscissa[i] > 0.0) || !(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw std::domain_error("fit_loglog: abscissae and values must be positive and finite");
    }
    lx.push_back(std::log(abscissa[i]));
    ly.push_back(std::log(values[i]));
  }
  SlopeFit out;
  out.points = lx.size();
  if (lx.size() < 2) return out;
  double lo = lx[0];
  double hi = lx[0];
  for (double v : lx) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  out.decades = (hi - lo) / std::log(10.0);
  if (!(hi > lo)) return out;
  const LineFit base = ols(lx, ly);
  out.slope = base.slope;
  out.intercept = base.intercept;

  auto rng = make_rng(seed, stream);
  std::uniform_int_distribution<std::size_t> pick(0, lx.size() - 1);
  std::vector<double> bx(lx.size());
  std::vector<double> by(lx.size());
  double sum = 0.0;
  double sum2 = 0.0;
  for (int r = 0; r < resamples; ++r) {
    bool spread = false;
    while (!spread) {
      for (std::size_t i = 0; i < lx.size(); ++i) {
        const std::size_t j = pick(rng);
        bx[i] = lx[j];
        by[i] = ly[j];
        spread = spread || bx[i] != bx[0];
      }
    }
    const double s = ols(bx, by).slope;
    sum += s;
    sum2 += s * s;
  }
  const double mean = sum / resamples;
  out.stderr_bootstrap = std::sqrt(std::max(0.0, sum2 / resamples - mean * mean) * resamples / (resamples - 1.0));
  out.resamples = resamples;
  return out;
}

}  // namespace laguerre_riesz::lab
