// Copyright 2026 The uacoref Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef UACOREF_MATH_HPP_
#define UACOREF_MATH_HPP_

#include <cmath>
#include <vector>

namespace coref {

// Which kernel path to run. `parallel == false` selects the serial
// reference implementation kept for testing and benchmarking.
struct Exec {
  bool parallel = true;
  int threads = 0;  // 0 = all available

  static Exec serial() { return {false, 1}; }
};

using Vec = std::vector<double>;

struct Matrix {
  int rows = 0, cols = 0;
  Vec a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}
  double* row(int r) { return a.data() + static_cast<size_t>(r) * cols; }
  const double* row(int r) const { return a.data() + static_cast<size_t>(r) * cols; }
  double& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
};

// Smooth ReLU-family nonlinearity (exact GELU); analytic everywhere, which
// keeps finite-difference gradient checks clean.
inline double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x * 0.70710678118654752440)); }

inline double gelu_grad(double x) {
  const double cdf = 0.5 * (1.0 + std::erf(x * 0.70710678118654752440));
  const double pdf = 0.39894228040143267794 * std::exp(-0.5 * x * x);
  return cdf + x * pdf;
}

inline double sigmoid(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

// log(1 + e^x), overflow-safe
inline double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

// Two hidden layers + scalar output head.
struct Ffnn {
  Matrix w1;           // hidden x in
  Vec b1;              // hidden
  Matrix w2;           // hidden x hidden
  Vec b2;              // hidden
  Vec w_out;           // hidden
  Vec b_out{1, 0.0};   // single output bias, kept as a tensor for the optimizer

  int in_dim() const { return w1.cols; }
  int hidden_dim() const { return w1.rows; }
  // Activation record size per item: [z1 h1 z2 h2].
  int acts_size() const { return 4 * hidden_dim(); }
};

inline Ffnn zeros_like(const Ffnn& f) {
  Ffnn z;
  z.w1 = Matrix(f.w1.rows, f.w1.cols);
  z.b1.assign(f.b1.size(), 0.0);
  z.w2 = Matrix(f.w2.rows, f.w2.cols);
  z.b2.assign(f.b2.size(), 0.0);
  z.w_out.assign(f.w_out.size(), 0.0);
  z.b_out.assign(1, 0.0);
  return z;
}

// Forward for one input; when `acts` is non-null it must have room for
// acts_size() doubles and is filled for use by ffnn_backward_one.
double ffnn_one(const Ffnn& f, const double* x, double* acts);

// Accumulates parameter gradients into `grad` (same shapes as `f`) and the
// input gradient into `dx` (length in_dim, accumulated, may be null).
void ffnn_backward_one(const Ffnn& f, const double* x, const double* acts, double dout,
                       Ffnn& grad, double* dx);

}  // namespace coref

#endif  // UACOREF_MATH_HPP_
