#include "stefan/roots.hpp"

#include "stefan/error.hpp"

#include <algorithm>
#include <cmath>

namespace stefan {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Domain: return "DomainError";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::NoMeltingPoint: return "NoMeltingPoint";
    case ErrorCode::NoAdmissibleRadius: return "NoAdmissibleRadius";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DegenerateLatentHeat: return "DegenerateLatentHeat";
    case ErrorCode::NoAdmissibleRange: return "NoAdmissibleRange";
    case ErrorCode::PerturbationTooLarge: return "PerturbationTooLarge";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::WellPosednessLost: return "WellPosednessLost";
    case ErrorCode::TemperaturePositivityLost: return "TemperaturePositivityLost";
    case ErrorCode::GeometryEvent: return "GeometryEvent";
    case ErrorCode::EnergyClosureFailed: return "EnergyClosureFailed";
    case ErrorCode::Config: return "ConfigError";
  }
  return "Error";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config:
    case ErrorCode::InvalidModel:
      return 2;
    case ErrorCode::WellPosednessLost:
    case ErrorCode::TemperaturePositivityLost:
    case ErrorCode::GeometryEvent:
      return 4;
    default:
      return 3;
  }
}

}  // namespace stefan

namespace stefan::roots {

double bisect(const ScalarFn& f, double lo, double hi, double rel_tol, double abs_tol,
              int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi)) {
    throw Error(ErrorCode::NumericalBreakdown, "bisect: bracket has no sign change");
  }
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double width = std::abs(hi - lo);
    const double scale = std::max(std::abs(lo), std::abs(hi));
    if (width <= rel_tol * scale || width <= abs_tol || mid == lo || mid == hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return std::abs(flo) <= std::abs(fhi) ? lo : hi;
}

double brent(const ScalarFn& f, double lo, double hi, double x_tol, int max_iter) {
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (std::signbit(fa) == std::signbit(fb)) {
    throw Error(ErrorCode::NumericalBreakdown, "brent: bracket has no sign change");
  }
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if (std::signbit(fb) == std::signbit(fc)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol = 2.0 * 2.2e-16 * std::abs(b) + 0.5 * x_tol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q; else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol) ? d : (m > 0 ? tol : -tol);
    fb = f(b);
  }
  return b;
}

double golden_min(const ScalarFn& f, double lo, double hi, double x_tol, int max_iter) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < max_iter && (b - a) > x_tol; ++it) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    }
  }
  return f1 < f2 ? x1 : x2;
}

std::vector<double> sample_grid(double lo, double hi, int intervals) {
  std::vector<double> x(static_cast<std::size_t>(intervals) + 1);
  const bool geometric = lo > 0.0 && hi / lo > 10.0;
  for (int i = 0; i <= intervals; ++i) {
    const double t = static_cast<double>(i) / intervals;
    x[i] = geometric ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
  }
  x.front() = lo;
  x.back() = hi;
  return x;
}

std::vector<double> scan_roots(const ScalarFn& f, double lo, double hi, int intervals,
                               double rel_tol) {
  const auto x = sample_grid(lo, hi, intervals);
  std::vector<double> fx(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) fx[i] = f(x[i]);
  std::vector<double> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (fx[i] == 0.0) {
      out.push_back(x[i]);
      continue;
    }
    if (i + 1 < x.size() && fx[i + 1] != 0.0 && std::signbit(fx[i]) != std::signbit(fx[i + 1])) {
      out.push_back(bisect(f, x[i], x[i + 1], rel_tol));
    }
  }
  return out;
}

}  // namespace stefan::roots
