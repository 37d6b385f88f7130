#include "syndec/optimize.hpp"

#include <cmath>

namespace syndec {

LineSearchResult golden_section_minimize(const std::function<double(double)>& f,
                                         double lo, double hi, double tol) {
  const double inv_phi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  if (!(b > a)) return {a, f(a)};
  const double width_tol = tol * std::fmax(1.0, std::fabs(lo) + std::fabs(hi));
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > width_tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  // Compare the interior candidate with both endpoints so that monotone
  // objectives return the boundary instead of a point width_tol inside.
  double best_x = fc <= fd ? c : d;
  double best_v = fc <= fd ? fc : fd;
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo < best_v) {
    best_x = lo;
    best_v = flo;
  }
  if (fhi < best_v) {
    best_x = hi;
    best_v = fhi;
  }
  return {best_x, best_v};
}

}  // namespace syndec
