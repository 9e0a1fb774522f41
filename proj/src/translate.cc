// Copyright 2026 The envlight Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "envlight/translate.h"

#include <algorithm>
#include <numeric>

namespace envlight {

namespace {

// Normal equations of one least-squares system: G = A^T A, g = A^T b,
// bb = b^T b. G is row-major k x k.
struct GramSystem {
  int k = 0;
  std::vector<double> gram;
  std::vector<double> atb;
  double btb = 0;
};

void MatVec(const std::vector<double>& gram, int k, const std::vector<double>& x, std::vector<double>& out) {
  for (int i = 0; i < k; ++i) {
    const double* row = &gram[static_cast<std::size_t>(i) * k];
    double s = 0;
    for (int j = 0; j < k; ++j) s += row[j] * x[j];
    out[i] = s;
  }
}

double LargestEigenvalue(const std::vector<double>& gram, int k) {
  std::vector<double> v(k, 1.0 / std::sqrt(static_cast<double>(k))), gv(k);
  double lambda = 0;
  for (int it = 0; it < 200; ++it) {
    MatVec(gram, k, v, gv);
    const double norm = std::sqrt(std::inner_product(gv.begin(), gv.end(), gv.begin(), 0.0));
    if (norm == 0) return 0;
    const double next = std::inner_product(v.begin(), v.end(), gv.begin(), 0.0);
    for (int i = 0; i < k; ++i) v[i] = gv[i] / norm;
    if (it > 10 && std::abs(next - lambda) <= 1e-10 * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda;
}

struct GramSolve {
  std::vector<double> x;
  double objective = 0;
  int iterations = 0;
  std::vector<double> trace;
};

// Jacobi-scaled quadratic: with x = y / d, d_i = sqrt(G_ii + reg),
// F = y^T H y - 2 (g / d)^T y + bb and H = D^-1 (G + reg I) D^-1. The
// scaling is positive, so the non-negativity constraint carries over.
struct ScaledSystem {
  int k = 0;
  std::vector<double> h;
  std::vector<double> d;
  double lipschitz = 0;  // largest eigenvalue of H
};

ScaledSystem ScaleGram(const GramSystem& sys, double reg) {
  const int k = sys.k;
  ScaledSystem out;
  out.k = k;
  out.d.assign(k, 1.0);
  for (int i = 0; i < k; ++i) {
    const double diag = sys.gram[static_cast<std::size_t>(i) * k + i] + reg;
    if (diag > 0) out.d[i] = std::sqrt(diag);
  }
  out.h.resize(sys.gram.size());
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const std::size_t ij = static_cast<std::size_t>(i) * k + j;
      out.h[ij] = (sys.gram[ij] + (i == j ? reg : 0.0)) / (out.d[i] * out.d[j]);
    }
  out.lipschitz = LargestEigenvalue(out.h, k);
  return out;
}

// Monotone FISTA with adaptive restart (O'Donoghue & Candes) on the scaled
// problem; see ScaledSystem.
GramSolve SolveGram(const ScaledSystem& sys, const std::vector<double>& atb, double btb,
                    const DiffuseSolveConfig& cfg) {
  const int k = sys.k;
  std::vector<double> g(k);
  for (int i = 0; i < k; ++i) g[i] = atb[i] / sys.d[i];
  const double lip = 2.0 * sys.lipschitz * 1.01;
  const double step = lip > 0 ? 1.0 / lip : 0.0;
  auto objective = [&](const std::vector<double>& x, const std::vector<double>& hx) {
    double quad = 0, lin = 0;
    for (int i = 0; i < k; ++i) {
      quad += x[i] * hx[i];
      lin += g[i] * x[i];
    }
    return quad - 2.0 * lin + btb;
  };

  std::vector<double> x(k, 0.0), hx(k, 0.0);  // accepted iterate and H x
  std::vector<double> y(k, 0.0), hy(k, 0.0);  // extrapolated point and H y
  std::vector<double> z(k), hz(k);
  double fx = objective(x, hx);
  double t = 1.0;
  GramSolve out;
  if (cfg.record_trace) out.trace.push_back(fx);

  for (int it = 1; it <= cfg.max_iter; ++it) {
    out.iterations = it;
    double zn = 0, dn = 0;
    for (int i = 0; i < k; ++i) {
      const double grad = 2.0 * (hy[i] - g[i]);
      double zi = y[i] - step * grad;
      if (cfg.nonneg && zi < 0) zi = 0;
      z[i] = zi;
      zn += zi * zi;
      dn += (zi - y[i]) * (zi - y[i]);
    }
    MatVec(sys.h, k, z, hz);
    const double fz = objective(z, hz);
    if (!(fz <= fx)) {
      // Function restart: drop the momentum and step again from x.
      t = 1.0;
      y = x;
      hy = hx;
      if (cfg.record_trace) out.trace.push_back(fx);
      continue;
    }
    // Gradient restart when the momentum points against the step.
    double align = 0;
    for (int i = 0; i < k; ++i) align += (y[i] - z[i]) * (z[i] - x[i]);
    double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    double b = (t - 1.0) / t_next;
    if (align > 0) {
      t_next = 1.0;
      b = 0.0;
    }
    // y = z + b (z - x); H y by linearity.
    for (int i = 0; i < k; ++i) {
      y[i] = z[i] + b * (z[i] - x[i]);
      hy[i] = hz[i] + b * (hz[i] - hx[i]);
    }
    x.swap(z);
    hx.swap(hz);
    fx = fz;
    t = t_next;
    if (cfg.record_trace) out.trace.push_back(fx);
    if (dn <= cfg.tol * cfg.tol * zn) break;
  }
  for (int i = 0; i < k; ++i) x[i] /= sys.d[i];
  out.x = std::move(x);
  out.objective = fx;
  return out;
}

GramSystem BuildGram(const std::vector<double>& a_colmajor, int rows, int cols, const std::vector<double>& b) {
  GramSystem sys;
  sys.k = cols;
  sys.gram.assign(static_cast<std::size_t>(cols) * cols, 0.0);
  sys.atb.assign(cols, 0.0);
  for (int i = 0; i < cols; ++i) {
    const double* ci = &a_colmajor[static_cast<std::size_t>(i) * rows];
    for (int j = i; j < cols; ++j) {
      const double* cj = &a_colmajor[static_cast<std::size_t>(j) * rows];
      double s = 0;
      for (int r = 0; r < rows; ++r) s += ci[r] * cj[r];
      sys.gram[static_cast<std::size_t>(i) * cols + j] = s;
      sys.gram[static_cast<std::size_t>(j) * cols + i] = s;
    }
    double s = 0;
    for (int r = 0; r < rows; ++r) s += ci[r] * b[r];
    sys.atb[i] = s;
  }
  sys.btb = std::inner_product(b.begin(), b.end(), b.begin(), 0.0);
  return sys;
}

double MeanDiagonal(const GramSystem& sys) {
  double s = 0;
  for (int i = 0; i < sys.k; ++i) s += sys.gram[static_cast<std::size_t>(i) * sys.k + i];
  return s / std::max(1, sys.k);
}

double Residual(const std::vector<double>& a, int rows, int cols, const std::vector<double>& x,
                const std::vector<double>& b) {
  std::vector<double> r(b.begin(), b.end());
  for (int j = 0; j < cols; ++j) {
    if (x[j] == 0) continue;
    const double* cj = &a[static_cast<std::size_t>(j) * rows];
    for (int i = 0; i < rows; ++i) r[i] -= cj[i] * x[j];
  }
  return std::sqrt(std::inner_product(r.begin(), r.end(), r.begin(), 0.0));
}

}  // namespace

void DiffuseSolveConfig::Validate() const {
  if (!(lambda >= 0)) throw ContractError("DiffuseSolveConfig: lambda must be >= 0");
  if (max_iter < 1) throw ContractError("DiffuseSolveConfig: max_iter must be >= 1");
  if (!(tol >= 0)) throw ContractError("DiffuseSolveConfig: tol must be >= 0");
}

NnlsResult SolveNnls(const NnlsProblem& problem, const DiffuseSolveConfig& config) {
  config.Validate();
  if (problem.rows < 1 || problem.cols < 1 ||
      problem.a.size() != static_cast<std::size_t>(problem.rows) * problem.cols ||
      problem.b.size() != static_cast<std::size_t>(problem.rows)) {
    throw ContractError("SolveNnls: inconsistent problem dimensions");
  }
  const GramSystem sys = BuildGram(problem.a, problem.rows, problem.cols, problem.b);
  const double mean_diag = MeanDiagonal(sys);
  if (!(mean_diag > 0)) throw DegenerateSystemError("SolveNnls: design matrix is all zero");
  const double reg = config.lambda * mean_diag;
  GramSolve s = SolveGram(ScaleGram(sys, reg), sys.atb, sys.btb, config);
  NnlsResult out;
  out.residual = Residual(problem.a, problem.rows, problem.cols, s.x, problem.b);
  out.x = std::move(s.x);
  out.objective = s.objective;
  out.iterations = s.iterations;
  out.trace = std::move(s.trace);
  return out;
}

DiffuseSolution SolveDiffuse(const Image& shading, const IrradianceStack& stack, const DiffuseSolveConfig& config) {
  config.Validate();
  if (shading.width() != stack.width || shading.height() != stack.height || shading.channels() != 3) {
    throw ContractError("SolveDiffuse: shading " + ShapeString(shading) + " does not match stack resolution " +
                        std::to_string(stack.width) + "x" + std::to_string(stack.height));
  }
  if (stack.size() == 0) throw DegenerateSystemError("SolveDiffuse: empty irradiance stack");
  const int rows = stack.width * stack.height;
  const int cols = static_cast<int>(stack.size());
  std::vector<double> a(static_cast<std::size_t>(rows) * cols);
  for (int k = 0; k < cols; ++k) {
    const auto map = stack.map(k);
    for (int i = 0; i < rows; ++i) a[static_cast<std::size_t>(k) * rows + i] = map[i] * stack.solid_angles[k];
  }

  // The Gram matrix is shared across channels.
  GramSystem sys = BuildGram(a, rows, cols, std::vector<double>(rows, 0.0));
  const double mean_diag = MeanDiagonal(sys);
  if (!(mean_diag > 0)) throw DegenerateSystemError("SolveDiffuse: every irradiance basis image is zero");
  const double reg = config.lambda * mean_diag;
  const ScaledSystem scaled = ScaleGram(sys, reg);

  DiffuseSolution out;
  out.values.assign(cols, Rgb{0, 0, 0});
  std::vector<double> s(rows);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < stack.height; ++y)
      for (int x = 0; x < stack.width; ++x) s[static_cast<std::size_t>(y) * stack.width + x] = shading.at(x, y, c);
    for (int k = 0; k < cols; ++k) {
      const double* ck = &a[static_cast<std::size_t>(k) * rows];
      double acc = 0;
      for (int i = 0; i < rows; ++i) acc += ck[i] * s[i];
      sys.atb[k] = acc;
    }
    sys.btb = std::inner_product(s.begin(), s.end(), s.begin(), 0.0);
    GramSolve sol = SolveGram(scaled, sys.atb, sys.btb, config);
    for (int k = 0; k < cols; ++k) out.values[k][c] = static_cast<float>(sol.x[k]);
    out.residual[c] = Residual(a, rows, cols, sol.x, s);
    out.shading_norm[c] = std::sqrt(sys.btb);
    out.iterations[c] = sol.iterations;
    out.trace[c] = std::move(sol.trace);
  }
  return out;
}

std::size_t SparseAngularMap::ValidCount() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), uint8_t{1}));
}

SparseAngularMap ProjectSpecular(const Decomposition& decomp, const DepthFrame& frame, const Mat3& cam_to_world,
                                 int out_width, int out_height) {
  const int w = frame.width(), h = frame.height();
  if (decomp.width() != w || decomp.height() != h) {
    throw ContractError("ProjectSpecular: decomposition " + ShapeString(decomp.albedo) +
                        " does not match depth " + ShapeString(frame.depth));
  }
  SparseAngularMap out(out_width, out_height);
  std::vector<std::array<double, 3>> sums(out.mask.size(), {0, 0, 0});
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      if (!decomp.valid(u, v) || !decomp.normals.is_valid(u, v) || !frame.valid(u, v)) continue;
      const float r = decomp.specular.at(u, v, 0), g = decomp.specular.at(u, v, 1), b = decomp.specular.at(u, v, 2);
      if (!(r > 0 || g > 0 || b > 0)) continue;
      const Vec3 n = decomp.normals.at(u, v);
      const Vec3 view = -Normalize(Unproject(u, v, frame));
      const double c = Dot(n, view);
      if (c <= 1e-4) continue;
      const Vec3 o = cam_to_world * Normalize(2.0 * c * n - view);
      const LatLongBin bin = DirToBin(o, out_width, out_height);
      const std::size_t i = out.index(bin.u, bin.v);
      sums[i][0] += r;
      sums[i][1] += g;
      sums[i][2] += b;
      ++out.counts[i];
    }
  }
  for (int v = 0; v < out_height; ++v) {
    for (int u = 0; u < out_width; ++u) {
      const std::size_t i = out.index(u, v);
      if (out.counts[i] == 0) continue;
      out.mask[i] = 1;
      for (int c = 0; c < 3; ++c) out.values.at(u, v, c) = static_cast<float>(sums[i][c] / out.counts[i]);
    }
  }
  return out;
}

}  // namespace envlight
