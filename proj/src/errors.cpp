#include "curvewave/errors.hpp"

#include <cmath>

#include "curvewave/error.hpp"

namespace curvewave {

namespace {

NormError finish(double diff2, double ref2) {
  NormError r;
  r.difference = std::sqrt(diff2);
  r.reference = std::sqrt(ref2);
  r.absolute = !(r.reference > 1e-300);
  r.error = r.absolute ? r.difference : r.difference / r.reference;
  return r;
}

}  // namespace

NormError l2_error(const GlobalSystem& system, const Eigen::VectorXd& p_h, const ScalarField& p_ex) {
  double diff2 = 0.0, ref2 = 0.0;
  for (std::size_t e = 0; e < system.spaces.size(); ++e) {
    const LocalSpace& s = system.spaces[e];
    const Eigen::VectorXd coeff = s.pi0_star() * system.local(p_h, static_cast<int>(e));
    const CellRule& rule = s.cell_rule();
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2& x = rule.points[q];
      const double exact = p_ex(x);
      const double d = exact - s.basis().values(x).dot(coeff);
      diff2 += rule.weights[q] * d * d;
      ref2 += rule.weights[q] * exact * exact;
    }
  }
  return finish(diff2, ref2);
}

NormError h1_error(const GlobalSystem& system, const Eigen::VectorXd& p_h, const VectorField& grad_ex) {
  double diff2 = 0.0, ref2 = 0.0;
  for (std::size_t e = 0; e < system.spaces.size(); ++e) {
    const LocalSpace& s = system.spaces[e];
    const Eigen::VectorXd local = system.local(p_h, static_cast<int>(e));
    const int nl = s.n_low();
    const Eigen::VectorXd gx = s.pi0_grad_star(0) * local, gy = s.pi0_grad_star(1) * local;
    const CellRule& rule = s.cell_rule();
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2& x = rule.points[q];
      const Eigen::VectorXd m = s.basis().values(x).head(nl);
      const Vec2 exact = grad_ex(x);
      const Vec2 d = exact - Vec2(m.dot(gx), m.dot(gy));
      diff2 += rule.weights[q] * d.squaredNorm();
      ref2 += rule.weights[q] * exact.squaredNorm();
    }
  }
  return finish(diff2, ref2);
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("slope fit needs at least two matching samples");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("slope fit needs positive samples");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (!(std::abs(den) > 0.0)) throw DomainError("slope fit needs distinct abscissae");
  return (n * sxy - sx * sy) / den;
}

RateTable rate_table(const std::vector<ErrorReport>& reports, int fit_window) {
  if (reports.size() < 3) throw DomainError("a rate table needs a family of at least 3 meshes");
  if (fit_window < 2 || fit_window > static_cast<int>(reports.size()))
    throw DomainError("fit window must lie in [2, family size]");
  RateTable t;
  t.family = reports.front().family;
  t.mode = reports.front().mode;
  t.k = reports.front().k;
  t.fit_window = fit_window;
  for (std::size_t j = 0; j < reports.size(); ++j) {
    const ErrorReport& r = reports[j];
    if (r.family != t.family || r.mode != t.mode || r.k != t.k)
      throw DomainError("rate table reports must share family, mode and k");
    if (j > 0 && !(r.h < reports[j - 1].h)) throw DomainError("mesh sizes must strictly decrease along a family");
    t.h.push_back(r.h);
  }
  for (std::size_t j = 0; j + 1 < reports.size(); ++j) {
    const double lh = std::log(reports[j].h / reports[j + 1].h);
    t.l2_successive.push_back(std::log(reports[j].l2 / reports[j + 1].l2) / lh);
    t.h1_successive.push_back(std::log(reports[j].h1 / reports[j + 1].h1) / lh);
  }
  std::vector<double> h, l2, h1;
  for (std::size_t j = reports.size() - fit_window; j < reports.size(); ++j) {
    h.push_back(reports[j].h);
    l2.push_back(reports[j].l2);
    h1.push_back(reports[j].h1);
  }
  t.l2_fit = log_log_slope(h, l2);
  t.h1_fit = log_log_slope(h, h1);
  return t;
}

}  // namespace curvewave
