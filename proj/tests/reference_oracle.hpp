// Literal transcription of the block-sparse algorithm pseudocode, kept in test code
// as an independent reference. It shares nothing with the library: the
// regressor is shifted explicitly, G is a dense L x L matrix, and every sum is
// written out as in the pseudocode (1-based indices mapped by hand).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

enum class BlockLaw { kBsPnlms, kBsIpnlms };

struct ReferenceParams {
  std::size_t L = 8;
  std::size_t P = 2;
  double mu = 0.5;
  double delta = 0.01;
  double rho = 0.01;
  double q = 0.01;
  double alpha = 0.0;
  double guard = 1e-10;  // same tiny constant the library adds to the IPNLMS denominator
};

// Returns h_hat(n) after every step n = 0 .. x.size()-1.
inline std::vector<std::vector<double>> run_reference(BlockLaw law, const ReferenceParams& p,
                                                   const std::vector<double>& x_samples,
                                                   const std::vector<double>& d_samples) {
  const std::size_t L = p.L;
  const std::size_t P = p.P;
  const std::size_t N = L / P;
  // Initializations: h_hat = 0_{Lx1}, N = L/P
  std::vector<double> h_hat(L, 0.0);
  std::vector<double> x(L, 0.0);
  std::vector<std::vector<double>> trajectory;

  for (std::size_t n = 0; n < x_samples.size(); ++n) {
    // x(n) = [x(n), x(n-1), ..., x(n-L+1)]^T
    for (std::size_t l = L - 1; l > 0; --l) x[l] = x[l - 1];
    x[0] = x_samples[n];

    // e(n) = d(n) - x^T(n) h_hat(n-1)
    double xth = 0.0;
    for (std::size_t l = 1; l <= L; ++l) xth += x[l - 1] * h_hat[l - 1];
    const double e = d_samples[n] - xth;

    // for i = 1..N: ||h_[i]||_2 = sqrt(sum_{k=1}^{P} h_{(i-1)P+k}^2)
    std::vector<double> norm(N + 1, 0.0);
    for (std::size_t i = 1; i <= N; ++i) {
      double s = 0.0;
      for (std::size_t k = 1; k <= P; ++k) {
        const double hk = h_hat[(i - 1) * P + k - 1];
        s += hk * hk;
      }
      norm[i] = std::sqrt(s);
    }

    std::vector<double> g(N + 1, 0.0);
    if (law == BlockLaw::kBsPnlms) {
      double inner = p.q;
      for (std::size_t i = 1; i <= N; ++i) inner = std::max(inner, norm[i]);
      std::vector<double> gamma(N + 1, 0.0);
      for (std::size_t i = 1; i <= N; ++i) gamma[i] = std::max(p.rho * inner, norm[i]);
      double sum_gamma = 0.0;
      for (std::size_t l = 1; l <= N; ++l) sum_gamma += gamma[l];
      for (std::size_t i = 1; i <= N; ++i)
        g[i] = gamma[i] / ((1.0 / static_cast<double>(N)) * sum_gamma);
    } else {
      double sum_norm = 0.0;
      for (std::size_t i = 1; i <= N; ++i) sum_norm += norm[i];
      for (std::size_t i = 1; i <= N; ++i) {
        g[i] = (1.0 - p.alpha) / (2.0 * static_cast<double>(L)) +
               (1.0 + p.alpha) * norm[i] /
                   (2.0 * static_cast<double>(P) * sum_norm + p.guard);
      }
    }

    // G(n-1) = diag[g_1 1_P, ..., g_N 1_P]
    std::vector<std::vector<double>> G(L, std::vector<double>(L, 0.0));
    for (std::size_t i = 1; i <= N; ++i)
      for (std::size_t k = 1; k <= P; ++k) {
        const std::size_t r = (i - 1) * P + k - 1;
        G[r][r] = g[i];
      }

    // h_hat(n) = h_hat(n-1) + mu G x e / (x^T G x + delta)
    std::vector<double> Gx(L, 0.0);
    for (std::size_t r = 0; r < L; ++r)
      for (std::size_t c = 0; c < L; ++c) Gx[r] += G[r][c] * x[c];
    double xGx = 0.0;
    for (std::size_t r = 0; r < L; ++r) xGx += x[r] * Gx[r];
    for (std::size_t r = 0; r < L; ++r) h_hat[r] += p.mu * Gx[r] * e / (xGx + p.delta);

    trajectory.push_back(h_hat);
  }
  return trajectory;
}

}  // namespace oracle
