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

#include "atrc/image.hpp"

#include <cctype>
#include <cmath>
#include <fstream>

#include "atrc/error.hpp"

namespace atrc {

void write_pgm(const std::string& path, const GrayImage& img) {
  if (img.h <= 0 || img.w <= 0) throw DataError("cannot write empty image: " + path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << "P5\n" << img.w << " " << img.h << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.px.data()),
            static_cast<std::streamsize>(img.px.size()));
  if (!out) throw DataError("short write: " + path);
}

namespace {

int read_pgm_token(std::istream& in, const std::string& path) {
  // Skips whitespace and '#' comments per the netpbm grammar.
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  if (c == EOF || !std::isdigit(c)) throw DataError("malformed PGM header: " + path);
  int value = 0;
  while (c != EOF && std::isdigit(c)) {
    value = value * 10 + (c - '0');
    if (value > 1 << 30) throw DataError("PGM header value overflow: " + path);
    c = in.get();
  }
  return value;
}

}  // namespace

GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open PGM: " + path);
  char m0 = 0, m1 = 0;
  in.get(m0);
  in.get(m1);
  if (m0 != 'P' || m1 != '5') throw DataError("not a binary PGM (P5): " + path);
  int w = read_pgm_token(in, path);
  int h = read_pgm_token(in, path);
  int maxval = read_pgm_token(in, path);
  if (maxval != 255) throw DataError("unsupported PGM maxval: " + path);
  if (w <= 0 || h <= 0) throw DataError("degenerate PGM dimensions: " + path);
  GrayImage img(h, w);
  in.read(reinterpret_cast<char*>(img.px.data()), static_cast<std::streamsize>(img.px.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.px.size()))
    throw DataError("truncated PGM payload: " + path);
  return img;
}

bool is_valid_pgm(const std::string& path) {
  try {
    read_pgm(path);
    return true;
  } catch (const DataError&) {
    return false;
  }
}

std::uint8_t quantize_gray(double v) {
  double r = std::floor(v + 0.5);
  if (r < 0.0) r = 0.0;
  if (r > 255.0) r = 255.0;
  return static_cast<std::uint8_t>(r);
}

namespace {

// Half-pixel-centre source coordinate; identity when in == out.
inline double src_coord(int out_i, double scale) { return (out_i + 0.5) * scale - 0.5; }

template <typename Get>
double sample_bilinear(int h, int w, double y, double x, Get get) {
  if (y < 0) y = 0;
  if (x < 0) x = 0;
  if (y > h - 1) y = h - 1;
  if (x > w - 1) x = w - 1;
  int y0 = static_cast<int>(y);
  int x0 = static_cast<int>(x);
  int y1 = y0 + 1 < h ? y0 + 1 : y0;
  int x1 = x0 + 1 < w ? x0 + 1 : x0;
  double fy = y - y0;
  double fx = x - x0;
  double v00 = get(y0, x0), v01 = get(y0, x1), v10 = get(y1, x0), v11 = get(y1, x1);
  return v00 * (1 - fy) * (1 - fx) + v01 * (1 - fy) * fx + v10 * fy * (1 - fx) +
         v11 * fy * fx;
}

}  // namespace

GrayImage resize_bilinear(const GrayImage& img, int out_h, int out_w) {
  if (img.h <= 0 || img.w <= 0) throw DataError("cannot resize an empty image");
  if (out_h <= 0 || out_w <= 0) throw DataError("resize target must be positive");
  GrayImage out(out_h, out_w);
  double sy = static_cast<double>(img.h) / out_h;
  double sx = static_cast<double>(img.w) / out_w;
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      double v = sample_bilinear(img.h, img.w, src_coord(y, sy), src_coord(x, sx),
                                 [&](int yy, int xx) { return double(img.at(yy, xx)); });
      out.at(y, x) = quantize_gray(v);
    }
  }
  return out;
}

Layer resize_bilinear(const Layer& img, int out_h, int out_w) {
  if (img.h <= 0 || img.w <= 0) throw DataError("cannot resize an empty layer");
  if (out_h <= 0 || out_w <= 0) throw DataError("resize target must be positive");
  Layer out(out_h, out_w);
  double sy = static_cast<double>(img.h) / out_h;
  double sx = static_cast<double>(img.w) / out_w;
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      double yy = src_coord(y, sy), xx = src_coord(x, sx);
      out.gray[out.idx(y, x)] = sample_bilinear(
          img.h, img.w, yy, xx, [&](int a, int b) { return img.gray[img.idx(a, b)]; });
      out.alpha[out.idx(y, x)] = sample_bilinear(
          img.h, img.w, yy, xx, [&](int a, int b) { return img.alpha[img.idx(a, b)]; });
    }
  }
  return out;
}

namespace {

// [1 2 1; 2 4 2; 1 2 1] / 16 with clamped borders.
template <typename Src, typename Dst>
void blur3_plane(int h, int w, const Src& src, Dst&& dst) {
  auto clampi = [](int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      static const double k[3] = {1.0, 2.0, 1.0};
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          int yy = clampi(y + dy, 0, h - 1);
          int xx = clampi(x + dx, 0, w - 1);
          acc += k[dy + 1] * k[dx + 1] * src(yy, xx);
        }
      }
      dst(y, x, acc / 16.0);
    }
  }
}

}  // namespace

Layer blur3(const Layer& img) {
  Layer out(img.h, img.w);
  blur3_plane(img.h, img.w,
              [&](int y, int x) { return img.gray[img.idx(y, x)]; },
              [&](int y, int x, double v) { out.gray[out.idx(y, x)] = v; });
  blur3_plane(img.h, img.w,
              [&](int y, int x) { return img.alpha[img.idx(y, x)]; },
              [&](int y, int x, double v) { out.alpha[out.idx(y, x)] = v; });
  return out;
}

GrayImage blur3(const GrayImage& img) {
  GrayImage out(img.h, img.w);
  blur3_plane(img.h, img.w, [&](int y, int x) { return double(img.at(y, x)); },
              [&](int y, int x, double v) { out.at(y, x) = quantize_gray(v); });
  return out;
}

}  // namespace atrc
