// Small shared numeric helpers for the solvers: golden-section line search
// over a closed interval.

#pragma once

#include <functional>

namespace syndec {

struct LineSearchResult {
  double x = 0.0;
  double value = 0.0;
};

/// Minimize f over [lo, hi] by golden-section search, stopping when the
/// bracket width drops below tol * max(1, |lo| + |hi|). Assumes f is
/// unimodal on the interval; endpoints are candidates, so a monotone f
/// resolves to the better endpoint.
LineSearchResult golden_section_minimize(const std::function<double(double)>& f,
                                         double lo, double hi, double tol);

}  // namespace syndec
