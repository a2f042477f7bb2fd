// Test-only oracles, independent of the library's computation paths: they
// evaluate the same quantities through sequential predictive factorizations,
// brute-force enumeration or numerical quadrature.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "iclust/partition.hpp"

namespace oracles {

// log p(Z | alpha) as a product of sequential predictives
// p(z_i = k | z_<i) = (alpha + n_k^<i) / (i - 1 + K alpha), with K the total
// number of clusters of the final partition.
inline double seq_partition_term(const std::vector<int>& labels, int k, double alpha) {
  std::vector<int> counts(k, 0);
  double lp = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    lp += std::log(alpha + counts[labels[i]]) -
          std::log(static_cast<double>(i) + k * alpha);
    ++counts[labels[i]];
  }
  return lp;
}

// Direct evaluation of the adjusted Rand index from the pair-count
// definition (loops over all object pairs).
inline double ari_pairwise(const std::vector<int>& a, const std::vector<int>& b) {
  const int n = static_cast<int>(a.size());
  long long both = 0, in_a = 0, in_b = 0;
  const long long pairs = static_cast<long long>(n) * (n - 1) / 2;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool sa = a[i] == a[j];
      const bool sb = b[i] == b[j];
      both += sa && sb;
      in_a += sa;
      in_b += sb;
    }
  }
  const double expected = static_cast<double>(in_a) * in_b / pairs;
  const double maximum = 0.5 * (in_a + in_b);
  if (maximum == expected) return 1.0;
  return (both - expected) / (maximum - expected);
}

// Adaptive Simpson integration on [a, b].
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 24) {
  const double c = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fc = f(c);
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double x0, double x2, double f0, double f1, double f2, double whole, double eps,
          int d) -> double {
    const double x1l = 0.5 * (x0 + 0.5 * (x0 + x2));
    const double xm = 0.5 * (x0 + x2);
    const double x1r = 0.5 * (xm + x2);
    const double fl = f(x1l);
    const double fr = f(x1r);
    const double left = (xm - x0) / 6.0 * (f0 + 4.0 * fl + f1);
    const double right = (x2 - xm) / 6.0 * (f1 + 4.0 * fr + f2);
    if (d <= 0 || std::abs(left + right - whole) < 15.0 * eps)
      return left + right + (left + right - whole) / 15.0;
    return rec(x0, xm, f0, fl, f1, left, 0.5 * eps, d - 1) +
           rec(xm, x2, f1, fr, f2, right, 0.5 * eps, d - 1);
  };
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
  return rec(a, b, fa, fc, fb, whole, tol, depth);
}

// Collapsed marginal likelihood of 1-D Gaussian data under the
// normal-inverse-Wishart prior (1-D Wishart(eps^-1, n0) = Gamma(n0/2,
// rate eps/2) on the precision), by 2-D numerical quadrature over
// (precision, mean). Tractable for a handful of points.
inline double gmm1d_quadrature(const std::vector<double>& xs, double mu0, double tau,
                               double n0, double eps) {
  const double a0 = 0.5 * n0;      // Gamma shape for the precision
  const double rate = 0.5 * eps;   // Gamma rate

  auto integrand_mu = [&](double lambda) {
    // For fixed precision, integrate the mean over a wide bracket around
    // the data and the prior mean.
    double lo = mu0, hi = mu0;
    for (double x : xs) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    const double sd = 1.0 / std::sqrt(std::min(tau, 1.0) * lambda);
    lo -= 12.0 * sd;
    hi += 12.0 * sd;
    auto f = [&](double mu) {
      double lp = 0.0;
      for (double x : xs)
        lp += 0.5 * std::log(lambda / (2.0 * M_PI)) - 0.5 * lambda * (x - mu) * (x - mu);
      const double prior_prec = tau * lambda;
      lp += 0.5 * std::log(prior_prec / (2.0 * M_PI)) -
            0.5 * prior_prec * (mu - mu0) * (mu - mu0);
      return std::exp(lp);
    };
    return adaptive_simpson(f, lo, hi, 1e-12);
  };

  // Integrate the precision on a log grid: lambda = exp(u).
  auto f_u = [&](double u) {
    const double lambda = std::exp(u);
    const double prior = std::exp(a0 * std::log(rate) - std::lgamma(a0) +
                                  (a0 - 1.0) * std::log(lambda) - rate * lambda);
    return integrand_mu(lambda) * prior * lambda;  // du-substitution Jacobian
  };
  double total = adaptive_simpson(f_u, -30.0, 12.0, 1e-13);
  return std::log(total);
}

// Same collapsed marginal via the product of Student-t posterior
// predictives (sequential factorization of the NIG model).
inline double gmm1d_student_product(const std::vector<double>& xs, double mu0, double tau,
                                    double n0, double eps) {
  double a = 0.5 * n0;
  double b = 0.5 * eps;
  double t = tau;
  double m = mu0;
  double lp = 0.0;
  for (double x : xs) {
    const double dof = 2.0 * a;
    const double scale2 = b * (t + 1.0) / (a * t);
    const double z = (x - m) / std::sqrt(scale2);
    lp += std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof) -
          0.5 * std::log(dof * M_PI * scale2) -
          0.5 * (dof + 1.0) * std::log1p(z * z / dof);
    // Posterior update.
    const double t_new = t + 1.0;
    const double m_new = (t * m + x) / t_new;
    b += 0.5 * t * (x - m) * (x - m) / t_new;
    a += 0.5;
    t = t_new;
    m = m_new;
  }
  return lp;
}

// Collapsed SBM marginal via sequential Beta-Bernoulli predictives over the
// pairs in a fixed order (Polya-urn style), given the labels.
inline double sbm_seq_marginal(int n, bool directed,
                               const std::vector<std::vector<int>>& adj,
                               const std::vector<int>& labels, int k, double a0, double b0) {
  std::vector<double> e(static_cast<std::size_t>(k) * k, 0.0);
  std::vector<double> m(static_cast<std::size_t>(k) * k, 0.0);
  auto block = [&](int a, int b) {
    int ka = labels[a], kb = labels[b];
    if (!directed && ka > kb) std::swap(ka, kb);
    return static_cast<std::size_t>(ka) * k + kb;
  };
  double lp = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = directed ? 0 : i + 1; j < n; ++j) {
      if (i == j) continue;
      const std::size_t key = block(i, j);
      const bool edge = adj[i][j] != 0;
      const double p_edge = (a0 + e[key]) / (a0 + b0 + m[key]);
      lp += std::log(edge ? p_edge : 1.0 - p_edge);
      e[key] += edge ? 1.0 : 0.0;
      m[key] += 1.0;
    }
  }
  return lp;
}

// Collapsed LCA marginal via sequential Dirichlet-multinomial predictives.
inline double lca_seq_marginal(const std::vector<std::vector<int>>& codes,  // [j][i]
                               const std::vector<int>& arity, const std::vector<int>& labels,
                               int k, double beta) {
  const int p = static_cast<int>(arity.size());
  const int n = static_cast<int>(labels.size());
  double lp = 0.0;
  for (int j = 0; j < p; ++j) {
    std::vector<std::vector<double>> counts(k, std::vector<double>(arity[j], 0.0));
    std::vector<double> totals(k, 0.0);
    for (int i = 0; i < n; ++i) {
      const int z = labels[i];
      const int c = codes[j][i];
      lp += std::log((beta + counts[z][c]) / (arity[j] * beta + totals[z]));
      counts[z][c] += 1.0;
      totals[z] += 1.0;
    }
  }
  return lp;
}

// Collapsed MoM marginal (including the rows' multinomial coefficients) via
// sequential predictives over individual count units.
inline double mom_seq_marginal(const std::vector<std::vector<long long>>& rows,
                               const std::vector<int>& labels, int k, double beta) {
  const int p = static_cast<int>(rows[0].size());
  std::vector<std::vector<double>> t(k, std::vector<double>(p, 0.0));
  std::vector<double> totals(k, 0.0);
  double lp = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int z = labels[i];
    long long r = 0;
    for (int j = 0; j < p; ++j) r += rows[i][j];
    // multinomial coefficient of the row
    lp += std::lgamma(static_cast<double>(r) + 1.0);
    for (int j = 0; j < p; ++j) lp -= std::lgamma(static_cast<double>(rows[i][j]) + 1.0);
    // sequential predictive for each unit of count mass
    for (int j = 0; j < p; ++j) {
      for (long long u = 0; u < rows[i][j]; ++u) {
        lp += std::log((beta + t[z][j]) / (p * beta + totals[z]));
        t[z][j] += 1.0;
        totals[z] += 1.0;
      }
    }
  }
  return lp;
}

}  // namespace oracles
