#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace stefan::roots {

using ScalarFn = std::function<double(double)>;

struct Bracket {
  double lo;
  double hi;
};

// Bisection on a sign-changing bracket until the width is below
// rel_tol * max(|lo|, |hi|) (or abs_tol for brackets around zero).
double bisect(const ScalarFn& f, double lo, double hi, double rel_tol = 1e-12,
              double abs_tol = 1e-300, int max_iter = 400);

// Brent's method on a sign-changing bracket.
double brent(const ScalarFn& f, double lo, double hi, double x_tol, int max_iter = 200);

// Golden-section minimization on [lo, hi].
double golden_min(const ScalarFn& f, double lo, double hi, double x_tol, int max_iter = 300);

// Sample grid with `intervals` subintervals; geometric when hi/lo is large and lo > 0.
std::vector<double> sample_grid(double lo, double hi, int intervals);

// All sign changes (and exact zeros at nodes) of f on a sampled grid, refined by bisection.
std::vector<double> scan_roots(const ScalarFn& f, double lo, double hi, int intervals,
                               double rel_tol = 1e-12);

}  // namespace stefan::roots
