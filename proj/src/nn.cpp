// Copyright 2026 The atrc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "atrc/nn.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "atrc/error.hpp"

namespace atrc {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using MapConstMat = Eigen::Map<const RowMat>;

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

int conv_out_extent(int in, int k, int s, int p) {
  require(k >= 1 && s >= 1 && p >= 0, "kernel/stride must be >= 1 and padding >= 0");
  int out = (in + 2 * p - k) / s + 1;
  if (out < 1)
    throw ConfigError("window does not fit: extent " + std::to_string(in) + ", kernel " +
                      std::to_string(k) + ", stride " + std::to_string(s) + ", padding " +
                      std::to_string(p));
  return out;
}

Tensor conv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b,
                      const ConvSpec& spec, ConvCache* cache) {
  if (x.rank() != 4 || w.rank() != 4)
    throw ConfigError("conv2d expects 4-d input and weights, got " + x.shape_str() +
                      " and " + w.shape_str());
  const std::size_t n = x.extent(0), c_in = x.extent(1);
  const int h = static_cast<int>(x.extent(2)), wd = static_cast<int>(x.extent(3));
  const std::size_t c_out = spec.out_channels;
  if (w.extent(0) != c_out || w.extent(1) != c_in ||
      w.extent(2) != static_cast<std::size_t>(spec.kh) ||
      w.extent(3) != static_cast<std::size_t>(spec.kw) || b.size() != c_out) {
    throw ConfigError("conv2d shape mismatch: input " + x.shape_str() + ", weights " +
                      w.shape_str() + ", spec wants (" + std::to_string(c_out) + ", " +
                      std::to_string(c_in) + ", " + std::to_string(spec.kh) + ", " +
                      std::to_string(spec.kw) + ")");
  }
  const int oh = conv_out_extent(h, spec.kh, spec.sh, spec.ph);
  const int ow = conv_out_extent(wd, spec.kw, spec.sw, spec.pw);
  const std::size_t ohw = static_cast<std::size_t>(oh) * ow;
  const std::size_t kdim = c_in * spec.kh * spec.kw;

  Tensor cols({n, ohw, kdim});
  for (std::size_t ni = 0; ni < n; ++ni) {
    double* colp = cols.data() + ni * ohw * kdim;
    for (int oy = 0; oy < oh; ++oy) {
      for (int ox = 0; ox < ow; ++ox) {
        double* row = colp + (static_cast<std::size_t>(oy) * ow + ox) * kdim;
        std::size_t idx = 0;
        for (std::size_t ci = 0; ci < c_in; ++ci) {
          for (int ky = 0; ky < spec.kh; ++ky) {
            int sy = oy * spec.sh - spec.ph + ky;
            for (int kx = 0; kx < spec.kw; ++kx, ++idx) {
              int sx = ox * spec.sw - spec.pw + kx;
              row[idx] = (sy >= 0 && sy < h && sx >= 0 && sx < wd)
                             ? x.at4(ni, ci, sy, sx)
                             : 0.0;
            }
          }
        }
      }
    }
  }

  Tensor out({n, c_out, static_cast<std::size_t>(oh), static_cast<std::size_t>(ow)});
  MapConstMat wm(w.data(), static_cast<Eigen::Index>(c_out), static_cast<Eigen::Index>(kdim));
  for (std::size_t ni = 0; ni < n; ++ni) {
    MapConstMat cm(cols.data() + ni * ohw * kdim, static_cast<Eigen::Index>(ohw),
                   static_cast<Eigen::Index>(kdim));
    MapMat om(out.data() + ni * c_out * ohw, static_cast<Eigen::Index>(c_out),
              static_cast<Eigen::Index>(ohw));
    om.noalias() = wm * cm.transpose();
  }
  for (std::size_t ni = 0; ni < n; ++ni) {
    for (std::size_t co = 0; co < c_out; ++co) {
      double bias = b[co];
      double* p = out.data() + (ni * c_out + co) * ohw;
      for (std::size_t i = 0; i < ohw; ++i) p[i] += bias;
    }
  }

  if (cache) {
    cache->cols = std::move(cols);
    cache->n = n;
    cache->ohw = ohw;
    cache->k = kdim;
  }
  return out;
}

void conv2d_backward(const Tensor& dy, const Tensor& w, const ConvSpec& spec,
                     const std::vector<std::size_t>& x_shape, const ConvCache& cache,
                     Tensor* dx, Tensor* dw, Tensor* db) {
  const std::size_t n = x_shape[0], c_in = x_shape[1];
  const int h = static_cast<int>(x_shape[2]), wd = static_cast<int>(x_shape[3]);
  const std::size_t c_out = spec.out_channels;
  const std::size_t ohw = cache.ohw, kdim = cache.k;
  const int ow = conv_out_extent(wd, spec.kw, spec.sw, spec.pw);

  MapConstMat wm(w.data(), static_cast<Eigen::Index>(c_out), static_cast<Eigen::Index>(kdim));
  Tensor dcols({ohw, kdim});
  if (dx) dx->zero();

  for (std::size_t ni = 0; ni < n; ++ni) {
    MapConstMat dym(dy.data() + ni * c_out * ohw, static_cast<Eigen::Index>(c_out),
                    static_cast<Eigen::Index>(ohw));
    MapConstMat cm(cache.cols.data() + ni * ohw * kdim, static_cast<Eigen::Index>(ohw),
                   static_cast<Eigen::Index>(kdim));
    if (dw) {
      MapMat dwm(dw->data(), static_cast<Eigen::Index>(c_out),
                 static_cast<Eigen::Index>(kdim));
      dwm.noalias() += dym * cm;
    }
    if (db) {
      for (std::size_t co = 0; co < c_out; ++co) {
        const double* p = dy.data() + (ni * c_out + co) * ohw;
        double acc = 0.0;
        for (std::size_t i = 0; i < ohw; ++i) acc += p[i];
        (*db)[co] += acc;
      }
    }
    if (dx) {
      MapMat dcm(dcols.data(), static_cast<Eigen::Index>(ohw),
                 static_cast<Eigen::Index>(kdim));
      dcm.noalias() = dym.transpose() * wm;
      // col2im scatter-add in fixed row-major order.
      for (std::size_t r = 0; r < ohw; ++r) {
        int oy = static_cast<int>(r) / ow;
        int ox = static_cast<int>(r) % ow;
        const double* row = dcols.data() + r * kdim;
        std::size_t idx = 0;
        for (std::size_t ci = 0; ci < c_in; ++ci) {
          for (int ky = 0; ky < spec.kh; ++ky) {
            int sy = oy * spec.sh - spec.ph + ky;
            for (int kx = 0; kx < spec.kw; ++kx, ++idx) {
              int sx = ox * spec.sw - spec.pw + kx;
              if (sy >= 0 && sy < h && sx >= 0 && sx < wd) {
                dx->at4(ni, ci, sy, sx) += row[idx];
              }
            }
          }
        }
      }
    }
  }
}

Tensor maxpool_forward(const Tensor& x, const PoolSpec& spec, PoolCache* cache) {
  if (x.rank() != 4) throw ConfigError("maxpool expects a 4-d input, got " + x.shape_str());
  require(spec.ph < spec.kh && spec.pw < spec.kw,
          "maxpool padding must be smaller than the window");
  const std::size_t n = x.extent(0), c = x.extent(1);
  const int h = static_cast<int>(x.extent(2)), w = static_cast<int>(x.extent(3));
  const int oh = conv_out_extent(h, spec.kh, spec.sh, spec.ph);
  const int ow = conv_out_extent(w, spec.kw, spec.sw, spec.pw);

  Tensor out({n, c, static_cast<std::size_t>(oh), static_cast<std::size_t>(ow)});
  if (cache) {
    cache->argmax.assign(out.size(), -1);
    cache->in_shape = x.shape();
  }
  std::size_t oi = 0;
  for (std::size_t ni = 0; ni < n; ++ni) {
    for (std::size_t ci = 0; ci < c; ++ci) {
      for (int oy = 0; oy < oh; ++oy) {
        for (int ox = 0; ox < ow; ++ox, ++oi) {
          double best = -std::numeric_limits<double>::infinity();
          std::int64_t best_idx = -1;
          for (int ky = 0; ky < spec.kh; ++ky) {
            int sy = oy * spec.sh - spec.ph + ky;
            if (sy < 0 || sy >= h) continue;
            for (int kx = 0; kx < spec.kw; ++kx) {
              int sx = ox * spec.sw - spec.pw + kx;
              if (sx < 0 || sx >= w) continue;
              double v = x.at4(ni, ci, sy, sx);
              if (v > best) {  // strict: first maximal element wins ties
                best = v;
                best_idx = static_cast<std::int64_t>(((ni * c + ci) * h + sy) * w + sx);
              }
            }
          }
          out[oi] = best;
          if (cache) cache->argmax[oi] = best_idx;
        }
      }
    }
  }
  return out;
}

Tensor maxpool_backward(const Tensor& dy, const PoolCache& cache) {
  Tensor dx(cache.in_shape);
  for (std::size_t i = 0; i < dy.size(); ++i) {
    if (cache.argmax[i] >= 0) dx[static_cast<std::size_t>(cache.argmax[i])] += dy[i];
  }
  return dx;
}

Tensor batchnorm_forward(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                         BatchNormState& state, bool train, BatchNormCache* cache) {
  if (x.rank() != 4) throw ConfigError("batchnorm expects a 4-d input, got " + x.shape_str());
  const std::size_t n = x.extent(0), c = x.extent(1), h = x.extent(2), w = x.extent(3);
  if (gamma.size() != c || beta.size() != c)
    throw ConfigError("batchnorm parameter size mismatch for " + x.shape_str());
  if (train && n < 2) throw DataError("batchnorm training requires batch size >= 2");

  const std::size_t plane = h * w;
  const double m = static_cast<double>(n * plane);
  Tensor out(x.shape());
  if (cache) {
    cache->xhat = Tensor(x.shape());
    cache->mean.assign(c, 0.0);
    cache->var.assign(c, 0.0);
  }

  for (std::size_t ci = 0; ci < c; ++ci) {
    double mean, var;
    if (train) {
      double acc = 0.0;
      for (std::size_t ni = 0; ni < n; ++ni) {
        const double* p = x.data() + (ni * c + ci) * plane;
        for (std::size_t i = 0; i < plane; ++i) acc += p[i];
      }
      mean = acc / m;
      double acc2 = 0.0;
      for (std::size_t ni = 0; ni < n; ++ni) {
        const double* p = x.data() + (ni * c + ci) * plane;
        for (std::size_t i = 0; i < plane; ++i) {
          double d = p[i] - mean;
          acc2 += d * d;
        }
      }
      var = acc2 / m;  // population variance, also used for the running stats
      state.running_mean[ci] = kBnMomentum * state.running_mean[ci] + (1 - kBnMomentum) * mean;
      state.running_var[ci] = kBnMomentum * state.running_var[ci] + (1 - kBnMomentum) * var;
    } else {
      mean = state.running_mean[ci];
      var = state.running_var[ci];
    }
    double inv_std = 1.0 / std::sqrt(var + kBnEpsilon);
    for (std::size_t ni = 0; ni < n; ++ni) {
      const double* p = x.data() + (ni * c + ci) * plane;
      double* q = out.data() + (ni * c + ci) * plane;
      double* xh = cache ? cache->xhat.data() + (ni * c + ci) * plane : nullptr;
      for (std::size_t i = 0; i < plane; ++i) {
        double xhat = (p[i] - mean) * inv_std;
        if (xh) xh[i] = xhat;
        q[i] = gamma[ci] * xhat + beta[ci];
      }
    }
    if (cache) {
      cache->mean[ci] = mean;
      cache->var[ci] = var;
    }
  }
  return out;
}

void batchnorm_backward(const Tensor& dy, const Tensor& gamma, const BatchNormCache& cache,
                        Tensor* dx, Tensor* dgamma, Tensor* dbeta) {
  const auto& shape = cache.xhat.shape();
  const std::size_t n = shape[0], c = shape[1], plane = shape[2] * shape[3];
  const double m = static_cast<double>(n * plane);

  for (std::size_t ci = 0; ci < c; ++ci) {
    double sum_dy = 0.0, sum_dy_xhat = 0.0;
    for (std::size_t ni = 0; ni < n; ++ni) {
      const double* pdy = dy.data() + (ni * c + ci) * plane;
      const double* pxh = cache.xhat.data() + (ni * c + ci) * plane;
      for (std::size_t i = 0; i < plane; ++i) {
        sum_dy += pdy[i];
        sum_dy_xhat += pdy[i] * pxh[i];
      }
    }
    if (dgamma) (*dgamma)[ci] += sum_dy_xhat;
    if (dbeta) (*dbeta)[ci] += sum_dy;
    if (dx) {
      double inv_std = 1.0 / std::sqrt(cache.var[ci] + kBnEpsilon);
      double g = gamma[ci];
      for (std::size_t ni = 0; ni < n; ++ni) {
        const double* pdy = dy.data() + (ni * c + ci) * plane;
        const double* pxh = cache.xhat.data() + (ni * c + ci) * plane;
        double* pdx = dx->data() + (ni * c + ci) * plane;
        for (std::size_t i = 0; i < plane; ++i) {
          pdx[i] += g * inv_std * (pdy[i] - sum_dy / m - pxh[i] * sum_dy_xhat / m);
        }
      }
    }
  }
}

double stable_sigmoid(double x) {
  if (x >= 0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

Tensor activation_forward(const Tensor& x, Activation kind) {
  Tensor y(x.shape());
  const double* p = x.data();
  double* q = y.data();
  switch (kind) {
    case Activation::Relu:
      for (std::size_t i = 0; i < x.size(); ++i) q[i] = p[i] > 0 ? p[i] : 0.0;
      break;
    case Activation::Sigmoid:
      for (std::size_t i = 0; i < x.size(); ++i) q[i] = stable_sigmoid(p[i]);
      break;
    case Activation::Tanh:
      for (std::size_t i = 0; i < x.size(); ++i) q[i] = std::tanh(p[i]);
      break;
  }
  return y;
}

Tensor activation_backward(const Tensor& dy, const Tensor& x, const Tensor& y,
                           Activation kind) {
  Tensor dx(dy.shape());
  const double* pdy = dy.data();
  const double* px = x.data();
  const double* py = y.data();
  double* pdx = dx.data();
  switch (kind) {
    case Activation::Relu:
      for (std::size_t i = 0; i < dy.size(); ++i) pdx[i] = px[i] > 0 ? pdy[i] : 0.0;
      break;
    case Activation::Sigmoid:
      for (std::size_t i = 0; i < dy.size(); ++i) pdx[i] = pdy[i] * py[i] * (1.0 - py[i]);
      break;
    case Activation::Tanh:
      for (std::size_t i = 0; i < dy.size(); ++i) pdx[i] = pdy[i] * (1.0 - py[i] * py[i]);
      break;
  }
  return dx;
}

}  // namespace atrc
