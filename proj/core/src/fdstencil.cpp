#include "shrinkerlab/fdstencil.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

namespace shrinkerlab {

Eigen::VectorXd fd_weights(double z, const Eigen::VectorXd& xs, int m) {
  const int n = static_cast<int>(xs.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, m + 1);
  double c1 = 1.0;
  double c4 = xs[0] - z;
  c(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
        c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k)
        c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
      c(j, 0) = c4 * c(j, 0) / c3;
    }
    c1 = c2;
  }
  return c.col(m);
}

namespace {

int window_size(int m) { return m <= 2 ? 5 : 7; }

struct Stencil {
  std::vector<int> offsets;
  Eigen::VectorXd w;
};

// centered stencil on unit-spaced nodes, cached per derivative order
const Stencil& centered_stencil(int m) {
  static std::map<int, Stencil> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lk(mu);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  const int w = window_size(m);
  const int c = w / 2;
  Stencil st;
  Eigen::VectorXd xs(w);
  for (int i = 0; i < w; ++i) {
    st.offsets.push_back(i - c);
    xs[i] = i - c;
  }
  st.w = fd_weights(0.0, xs, m);
  return cache.emplace(m, std::move(st)).first->second;
}

// one-sided/offset stencil for bounded edges: window of (size) nodes starting
// at `first`, evaluated at node `at` (unit spacing, absolute indices)
Eigen::VectorXd offset_weights(int first, int size, int at, int m) {
  Eigen::VectorXd xs(size);
  for (int i = 0; i < size; ++i) xs[i] = first + i;
  return fd_weights(at, xs, m);
}

}  // namespace

Grid2D d_periodic(const Grid2D& f, int m, double h) {
  const auto& st = centered_stencil(m);
  const int M = static_cast<int>(f.rows());
  const int J = static_cast<int>(f.cols());
  Grid2D out(M, J);
  const double scale = 1.0 / std::pow(h, m);
  for (int i = 0; i < M; ++i) {
    Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(J);
    for (size_t k = 0; k < st.offsets.size(); ++k) {
      int ii = (i + st.offsets[k]) % M;
      if (ii < 0) ii += M;
      acc += st.w[static_cast<int>(k)] * f.row(ii).transpose();
    }
    out.row(i) = (acc * scale).transpose();
  }
  return out;
}

Grid2D d_bounded(const Grid2D& f, int m, double h) {
  const auto& st = centered_stencil(m);
  const int M = static_cast<int>(f.rows());
  const int J = static_cast<int>(f.cols());
  const int c = window_size(m) / 2;
  Grid2D out(M, J);
  const double scale = 1.0 / std::pow(h, m);

  for (int j = 0; j < J; ++j) {
    if (j >= c && j + c < J) {
      Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(M);
      for (size_t k = 0; k < st.offsets.size(); ++k)
        acc += st.w[static_cast<int>(k)] * f.col(j + st.offsets[k]);
      out.col(j) = acc * scale;
    } else {
      const int size = window_size(m) + 1;  // one extra point at the edges
      const int first = std::min(std::max(0, j - c), J - size);
      Eigen::VectorXd w = offset_weights(first, size, j, m);
      Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(M);
      for (int k = 0; k < size; ++k) acc += w[k] * f.col(first + k);
      out.col(j) = acc * scale;
    }
  }
  return out;
}

Eigen::ArrayXd d_spectral_periodic(const Eigen::ArrayXd& f, double period) {
  const int M = static_cast<int>(f.size());
  Eigen::ArrayXd out(M);
  // even M: (D)_{kj} = (1/2)(-1)^{k-j} cot((k-j) pi / M)
  // odd  M: (D)_{kj} = (1/2)(-1)^{k-j} / sin((k-j) pi / M)
  // scaled from [0,2pi) to [0,period)
  const double scale = 2.0 * M_PI / period;
  std::vector<double> d(M, 0.0);
  for (int k = 1; k < M; ++k) {
    double sgn = (k % 2 == 0) ? 1.0 : -1.0;
    d[k] = (M % 2 == 0) ? 0.5 * sgn / std::tan(k * M_PI / M)
                        : 0.5 * sgn / std::sin(k * M_PI / M);
  }
  for (int i = 0; i < M; ++i) {
    double acc = 0.0;
    for (int j = 0; j < M; ++j) {
      int k = i - j;
      if (k == 0) continue;
      double dk = (k > 0) ? d[k] : -d[-k];
      acc += dk * f[j];
    }
    out[i] = acc * scale;
  }
  return out;
}

}  // namespace shrinkerlab
