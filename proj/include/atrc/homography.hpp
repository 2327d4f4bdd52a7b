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

#ifndef ATRC_HOMOGRAPHY_HPP_
#define ATRC_HOMOGRAPHY_HPP_

#include <array>

namespace atrc {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// 3x3 projective transform, row-major, normalized so m[8] == 1.
struct Homography {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static Homography identity() { return {}; }
  static Homography translation(double tx, double ty);
  // Exact direct linear transform through four point pairs. Throws
  // NumericError when the correspondence is degenerate.
  static Homography from_corners(const std::array<Point2, 4>& src,
                                 const std::array<Point2, 4>& dst);

  double det() const;
  bool invertible() const;  // |det| > 1e-9
  Homography inverse() const;
  Homography operator*(const Homography& rhs) const;
  Point2 apply(Point2 p) const;  // projective divide
};

}  // namespace atrc

#endif  // ATRC_HOMOGRAPHY_HPP_
