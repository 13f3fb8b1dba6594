#include "hdg/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hdg {

namespace {

void check_degree(int degree) {
  if (degree < 0 || degree > kMaxQuadratureDegree) {
    throw std::invalid_argument("quadrature: unsupported exactness degree " +
                                std::to_string(degree) + " (supported 0.." +
                                std::to_string(kMaxQuadratureDegree) + ")");
  }
}

int points_for(int poly_degree) { return poly_degree / 2 + 1; }

}  // namespace

void gauss_legendre(int npoints, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  if (npoints < 1) throw std::invalid_argument("gauss_legendre: npoints < 1");
  nodes.assign(npoints, 0.5);
  weights.assign(npoints, 1.0);
  if (npoints == 1) return;

  // Legendre P_n and its derivative at x, by the three-term recurrence.
  auto legendre = [npoints](double x, double& dp) {
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= npoints; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = npoints * (x * p1 - p0) / (x * x - 1.0);
    return p1;
  };

  for (int i = 0; i < (npoints + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (npoints + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double dx = legendre(x, dp) / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(x, dp);
    const double w = 1.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = 0.5 * (1.0 - x);
    nodes[npoints - 1 - i] = 0.5 * (1.0 + x);
    weights[i] = w;
    weights[npoints - 1 - i] = w;
  }
}

TetRule tet_quadrature(int degree) {
  check_degree(degree);
  if (degree <= 1) {
    return TetRule{{TetRule::Point(0.25, 0.25, 0.25)}, {1.0 / 6.0}, degree};
  }
  // x = a(1-b)(1-c), y = b(1-c), z = c, Jacobian (1-b)(1-c)^2.
  std::vector<double> na, wa, nb, wb, nc, wc;
  gauss_legendre(points_for(degree), na, wa);
  gauss_legendre(points_for(degree + 1), nb, wb);
  gauss_legendre(points_for(degree + 2), nc, wc);
  TetRule rule;
  rule.degree = degree;
  for (std::size_t k = 0; k < nc.size(); ++k) {
    for (std::size_t j = 0; j < nb.size(); ++j) {
      for (std::size_t i = 0; i < na.size(); ++i) {
        const double a = na[i], b = nb[j], c = nc[k];
        rule.points.emplace_back(a * (1 - b) * (1 - c), b * (1 - c), c);
        rule.weights.push_back(wa[i] * wb[j] * wc[k] * (1 - b) * (1 - c) *
                               (1 - c));
      }
    }
  }
  return rule;
}

TriRule tri_quadrature(int degree) {
  check_degree(degree);
  if (degree <= 1) {
    return TriRule{{TriRule::Point(1.0 / 3.0, 1.0 / 3.0)}, {0.5}, degree};
  }
  std::vector<double> na, wa, nb, wb;
  gauss_legendre(points_for(degree), na, wa);
  gauss_legendre(points_for(degree + 1), nb, wb);
  TriRule rule;
  rule.degree = degree;
  for (std::size_t j = 0; j < nb.size(); ++j) {
    for (std::size_t i = 0; i < na.size(); ++i) {
      rule.points.emplace_back(na[i] * (1 - nb[j]), nb[j]);
      rule.weights.push_back(wa[i] * wb[j] * (1 - nb[j]));
    }
  }
  return rule;
}

}  // namespace hdg
