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

#include "coref/math.hpp"

namespace coref {

double ffnn_one(const Ffnn& f, const double* x, double* acts) {
  const int in = f.in_dim(), h = f.hidden_dim();
  Vec local;
  double* z1;
  double* h1;
  double* z2;
  double* h2;
  if (acts) {
    z1 = acts;
    h1 = acts + h;
    z2 = acts + 2 * h;
    h2 = acts + 3 * h;
  } else {
    local.resize(4 * h);
    z1 = local.data();
    h1 = z1 + h;
    z2 = z1 + 2 * h;
    h2 = z1 + 3 * h;
  }
  for (int i = 0; i < h; ++i) {
    const double* w = f.w1.row(i);
    double s = f.b1[i];
    for (int j = 0; j < in; ++j) s += w[j] * x[j];
    z1[i] = s;
    h1[i] = gelu(s);
  }
  for (int i = 0; i < h; ++i) {
    const double* w = f.w2.row(i);
    double s = f.b2[i];
    for (int j = 0; j < h; ++j) s += w[j] * h1[j];
    z2[i] = s;
    h2[i] = gelu(s);
  }
  double out = f.b_out[0];
  for (int i = 0; i < h; ++i) out += f.w_out[i] * h2[i];
  return out;
}

void ffnn_backward_one(const Ffnn& f, const double* x, const double* acts, double dout,
                       Ffnn& grad, double* dx) {
  const int in = f.in_dim(), h = f.hidden_dim();
  const double* z1 = acts;
  const double* h1 = acts + h;
  const double* z2 = acts + 2 * h;
  const double* h2 = acts + 3 * h;

  Vec dz2(h), dh1(h, 0.0);
  for (int i = 0; i < h; ++i) {
    grad.w_out[i] += dout * h2[i];
    dz2[i] = dout * f.w_out[i] * gelu_grad(z2[i]);
  }
  grad.b_out[0] += dout;
  for (int i = 0; i < h; ++i) {
    double* gw = grad.w2.row(i);
    const double* w = f.w2.row(i);
    const double d = dz2[i];
    for (int j = 0; j < h; ++j) {
      gw[j] += d * h1[j];
      dh1[j] += d * w[j];
    }
    grad.b2[i] += d;
  }
  for (int i = 0; i < h; ++i) {
    const double d = dh1[i] * gelu_grad(z1[i]);
    double* gw = grad.w1.row(i);
    const double* w = f.w1.row(i);
    for (int j = 0; j < in; ++j) {
      gw[j] += d * x[j];
      if (dx) dx[j] += d * w[j];
    }
    grad.b1[i] += d;
  }
}

}  // namespace coref
