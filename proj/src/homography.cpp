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

#include "atrc/homography.hpp"

#include <cmath>

#include "atrc/error.hpp"

namespace atrc {

Homography Homography::translation(double tx, double ty) {
  Homography h;
  h.m = {1, 0, tx, 0, 1, ty, 0, 0, 1};
  return h;
}

double Homography::det() const {
  const auto& a = m;
  return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
         a[2] * (a[3] * a[7] - a[4] * a[6]);
}

bool Homography::invertible() const { return std::abs(det()) > 1e-9; }

Homography Homography::inverse() const {
  double d = det();
  if (std::abs(d) <= 1e-9) throw NumericError("homography is near-singular");
  const auto& a = m;
  std::array<double, 9> c;
  c[0] = a[4] * a[8] - a[5] * a[7];
  c[1] = a[2] * a[7] - a[1] * a[8];
  c[2] = a[1] * a[5] - a[2] * a[4];
  c[3] = a[5] * a[6] - a[3] * a[8];
  c[4] = a[0] * a[8] - a[2] * a[6];
  c[5] = a[2] * a[3] - a[0] * a[5];
  c[6] = a[3] * a[7] - a[4] * a[6];
  c[7] = a[1] * a[6] - a[0] * a[7];
  c[8] = a[0] * a[4] - a[1] * a[3];
  Homography inv;
  for (int i = 0; i < 9; ++i) inv.m[i] = c[i] / d;
  // Renormalize so the bottom-right entry stays pinned at 1.
  double z = inv.m[8];
  if (z == 0.0) throw NumericError("homography inverse degenerate");
  for (int i = 0; i < 9; ++i) inv.m[i] /= z;
  return inv;
}

Homography Homography::operator*(const Homography& rhs) const {
  Homography out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += m[i * 3 + k] * rhs.m[k * 3 + j];
      out.m[i * 3 + j] = s;
    }
  }
  if (out.m[8] != 0.0 && out.m[8] != 1.0) {
    double z = out.m[8];
    for (int i = 0; i < 9; ++i) out.m[i] /= z;
  }
  return out;
}

Point2 Homography::apply(Point2 p) const {
  double X = m[0] * p.x + m[1] * p.y + m[2];
  double Y = m[3] * p.x + m[4] * p.y + m[5];
  double W = m[6] * p.x + m[7] * p.y + m[8];
  if (W == 0.0) throw NumericError("point maps to infinity under homography");
  return {X / W, Y / W};
}

namespace {

// Gaussian elimination with partial pivoting on the 8x8 DLT system.
void solve8(double a[8][9]) {
  for (int col = 0; col < 8; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 8; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-12)
      throw NumericError("degenerate corner correspondence in homography fit");
    if (pivot != col) {
      for (int c = 0; c < 9; ++c) std::swap(a[pivot][c], a[col][c]);
    }
    for (int r = 0; r < 8; ++r) {
      if (r == col) continue;
      double f = a[r][col] / a[col][col];
      for (int c = col; c < 9; ++c) a[r][c] -= f * a[col][c];
    }
  }
  for (int r = 0; r < 8; ++r) a[r][8] /= a[r][r];
}

}  // namespace

Homography Homography::from_corners(const std::array<Point2, 4>& src,
                                    const std::array<Point2, 4>& dst) {
  // Rows for h = (h0..h7), h8 = 1:
  //   x' = (h0 x + h1 y + h2) / (h6 x + h7 y + 1)
  //   y' = (h3 x + h4 y + h5) / (h6 x + h7 y + 1)
  double a[8][9] = {};
  for (int i = 0; i < 4; ++i) {
    double x = src[i].x, y = src[i].y, u = dst[i].x, v = dst[i].y;
    double* r0 = a[2 * i];
    double* r1 = a[2 * i + 1];
    r0[0] = x; r0[1] = y; r0[2] = 1; r0[6] = -u * x; r0[7] = -u * y; r0[8] = u;
    r1[3] = x; r1[4] = y; r1[5] = 1; r1[6] = -v * x; r1[7] = -v * y; r1[8] = v;
  }
  solve8(a);
  Homography h;
  for (int i = 0; i < 8; ++i) h.m[i] = a[i][8];
  h.m[8] = 1.0;
  if (!h.invertible()) throw NumericError("fitted homography is near-singular");
  return h;
}

}  // namespace atrc
