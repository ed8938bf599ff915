#include "detail/nelder_mead.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace ortholab::detail {

SimplexOutcome nelder_mead(const std::function<double(const Vector&)>& f, const Vector& x0,
                           const SimplexSettings& settings) {
  const Index n = x0.size();
  SimplexOutcome out;
  std::vector<Vector> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  auto eval = [&](const Vector& x) {
    ++out.evaluations;
    return f(x);
  };
  for (Index i = 0; i < n; ++i) pts[i + 1](i) += settings.initial_step;
  for (Index i = 0; i <= n; ++i) vals[i] = eval(pts[i]);

  std::vector<Index> order(n + 1);
  while (true) {
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return vals[a] < vals[b]; });
    {
      std::vector<Vector> p2;
      std::vector<double> v2;
      for (Index i : order) p2.push_back(pts[i]), v2.push_back(vals[i]);
      pts.swap(p2);
      vals.swap(v2);
    }
    double diameter = 0.0;
    for (Index i = 1; i <= n; ++i)
      diameter = std::max(diameter, (pts[i] - pts[0]).cwiseAbs().maxCoeff());
    if (diameter <= settings.x_tol && vals[n] - vals[0] <= settings.f_tol) {
      out.finished = true;
      break;
    }
    if (out.evaluations >= settings.max_evaluations) break;

    Vector centroid = Vector::Zero(n);
    for (Index i = 0; i < n; ++i) centroid += pts[i];
    centroid /= static_cast<double>(n);

    const Vector xr = centroid + (centroid - pts[n]);
    const double fr = eval(xr);
    if (fr < vals[0]) {
      const Vector xe = centroid + 2.0 * (centroid - pts[n]);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[n] = xe, vals[n] = fe;
      } else {
        pts[n] = xr, vals[n] = fr;
      }
      continue;
    }
    if (fr < vals[n - 1]) {
      pts[n] = xr, vals[n] = fr;
      continue;
    }
    const bool outside = fr < vals[n];
    const Vector xc = outside ? Vector(centroid + 0.5 * (xr - centroid))
                              : Vector(centroid + 0.5 * (pts[n] - centroid));
    const double fc = eval(xc);
    if (fc < (outside ? fr : vals[n])) {
      pts[n] = xc, vals[n] = fc;
      continue;
    }
    for (Index i = 1; i <= n; ++i) {
      pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
      vals[i] = eval(pts[i]);
    }
  }
  out.x = pts[0];
  out.value = vals[0];
  return out;
}

}  // namespace ortholab::detail
