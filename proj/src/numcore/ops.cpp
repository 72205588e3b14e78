/*
 * Copyright (c) 2026, The affect authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "affect/numcore/ops.hpp"

#include <cmath>

#include "affect/errors.hpp"

namespace affect::num {

namespace {

void require_same(const char* op, Var a, Var b) {
  if (!a.value().same_shape(b.value())) {
    throw DimensionError(std::string(op) + " shape mismatch: " + a.value().shape_str() + " vs " +
                         b.value().shape_str());
  }
}

void require_same_tape(Var a, Var b) {
  if (&a.tape() != &b.tape()) throw ContractError("operands live on different tapes");
}

void axpy(Tensor2& dst, const Tensor2& src, double s = 1.0) {
  auto d = dst.data();
  auto x = src.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += s * x[i];
}

}  // namespace

Var matmul(Var a, Var b) {
  require_same_tape(a, b);
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul shape mismatch: " + a.value().shape_str() + " * " +
                         b.value().shape_str());
  }
  Tensor2 out(a.rows(), b.cols());
  kernels::gemm_nn(a.value(), b.value(), out);
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape().record(std::move(out), {a, b}, [ia, ib](Tape& t, std::size_t, const Tensor2& g) {
    if (t.needs_grad(ia)) kernels::gemm_nt(g, t.value(ib), t.grad(ia));
    if (t.needs_grad(ib)) kernels::gemm_tn(t.value(ia), g, t.grad(ib));
  });
}

Var matmul_nt(Var a, Var b) {
  require_same_tape(a, b);
  if (a.cols() != b.cols()) {
    throw DimensionError("matmul_nt shape mismatch: " + a.value().shape_str() + " * " +
                         b.value().shape_str() + "^T");
  }
  Tensor2 out(a.rows(), b.rows());
  kernels::gemm_nt(a.value(), b.value(), out);
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape().record(std::move(out), {a, b}, [ia, ib](Tape& t, std::size_t, const Tensor2& g) {
    // out = a b^T: da = g b, db = g^T a
    if (t.needs_grad(ia)) kernels::gemm_nn(g, t.value(ib), t.grad(ia));
    if (t.needs_grad(ib)) kernels::gemm_tn(g, t.value(ia), t.grad(ib));
  });
}

Var add(Var a, Var b) {
  require_same_tape(a, b);
  require_same("add", a, b);
  Tensor2 out = a.value();
  axpy(out, b.value());
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape().record(std::move(out), {a, b}, [ia, ib](Tape& t, std::size_t, const Tensor2& g) {
    if (t.needs_grad(ia)) axpy(t.grad(ia), g);
    if (t.needs_grad(ib)) axpy(t.grad(ib), g);
  });
}

Var sub(Var a, Var b) {
  require_same_tape(a, b);
  require_same("sub", a, b);
  Tensor2 out = a.value();
  axpy(out, b.value(), -1.0);
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape().record(std::move(out), {a, b}, [ia, ib](Tape& t, std::size_t, const Tensor2& g) {
    if (t.needs_grad(ia)) axpy(t.grad(ia), g);
    if (t.needs_grad(ib)) axpy(t.grad(ib), g, -1.0);
  });
}

Var mul(Var a, Var b) {
  require_same_tape(a, b);
  require_same("mul", a, b);
  Tensor2 out = a.value();
  {
    auto o = out.data();
    auto y = b.value().data();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] *= y[i];
  }
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape().record(std::move(out), {a, b}, [ia, ib](Tape& t, std::size_t, const Tensor2& g) {
    auto gv = g.data();
    if (t.needs_grad(ia)) {
      auto d = t.grad(ia).data();
      auto y = t.value(ib).data();
      for (std::size_t i = 0; i < d.size(); ++i) d[i] += gv[i] * y[i];
    }
    if (t.needs_grad(ib)) {
      auto d = t.grad(ib).data();
      auto x = t.value(ia).data();
      for (std::size_t i = 0; i < d.size(); ++i) d[i] += gv[i] * x[i];
    }
  });
}

Var scale(Var a, double s) {
  Tensor2 out = a.value();
  for (double& v : out.data()) v *= s;
  const std::size_t ia = a.id();
  return a.tape().record(std::move(out), {a}, [ia, s](Tape& t, std::size_t, const Tensor2& g) {
    axpy(t.grad(ia), g, s);
  });
}

Var tanh(Var a) {
  Tensor2 out = a.value();
  for (double& v : out.data()) v = std::tanh(v);
  const std::size_t ia = a.id();
  return a.tape().record(std::move(out), {a}, [ia](Tape& t, std::size_t self, const Tensor2& g) {
    auto d = t.grad(ia).data();
    auto y = t.value(self).data();
    auto gv = g.data();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += gv[i] * (1.0 - y[i] * y[i]);
  });
}

Var sigmoid(Var a) {
  Tensor2 out = a.value();
  for (double& v : out.data()) v = 1.0 / (1.0 + std::exp(-v));
  const std::size_t ia = a.id();
  return a.tape().record(std::move(out), {a}, [ia](Tape& t, std::size_t self, const Tensor2& g) {
    auto d = t.grad(ia).data();
    auto y = t.value(self).data();
    auto gv = g.data();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += gv[i] * y[i] * (1.0 - y[i]);
  });
}

Var linear(Var x, Var w, Var b) {
  require_same_tape(x, w);
  require_same_tape(x, b);
  if (x.cols() != w.cols()) {
    throw DimensionError("linear shape mismatch: input " + x.value().shape_str() + " vs weight " +
                         w.value().shape_str());
  }
  if (b.rows() != w.rows() || b.cols() != 1) {
    throw DimensionError("linear bias shape " + b.value().shape_str() + " does not fit weight " +
                         w.value().shape_str());
  }
  const std::size_t n = x.rows(), m = w.rows();
  Tensor2 out(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) out(i, j) = b.value()(j, 0);
  }
  kernels::gemm_nt(x.value(), w.value(), out);
  const std::size_t ix = x.id(), iw = w.id(), ib = b.id();
  return x.tape().record(std::move(out), {x, w, b},
                         [ix, iw, ib](Tape& t, std::size_t, const Tensor2& g) {
                           if (t.needs_grad(ix)) kernels::gemm_nn(g, t.value(iw), t.grad(ix));
                           if (t.needs_grad(iw)) kernels::gemm_tn(g, t.value(ix), t.grad(iw));
                           if (t.needs_grad(ib)) {
                             Tensor2& db = t.grad(ib);
                             for (std::size_t i = 0; i < g.rows(); ++i)
                               for (std::size_t j = 0; j < g.cols(); ++j) db(j, 0) += g(i, j);
                           }
                         });
}

Var slice_cols(Var x, std::size_t start, std::size_t count) {
  if (start + count > x.cols()) {
    throw DimensionError("slice_cols [" + std::to_string(start) + ", " +
                         std::to_string(start + count) + ") out of range for " +
                         x.value().shape_str());
  }
  const Tensor2& src = x.value();
  Tensor2 out(src.rows(), count);
  for (std::size_t i = 0; i < src.rows(); ++i)
    for (std::size_t j = 0; j < count; ++j) out(i, j) = src(i, start + j);
  const std::size_t ix = x.id();
  return x.tape().record(std::move(out), {x}, [ix, start](Tape& t, std::size_t, const Tensor2& g) {
    Tensor2& d = t.grad(ix);
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < g.cols(); ++j) d(i, start + j) += g(i, j);
  });
}

Var concat_cols(std::span<const Var> parts) {
  if (parts.empty()) throw InputError("concat_cols of an empty list");
  const std::size_t rows = parts[0].rows();
  std::size_t cols = 0;
  for (const Var& p : parts) {
    require_same_tape(parts[0], p);
    if (p.rows() != rows) {
      throw DimensionError("concat_cols row mismatch: " + parts[0].value().shape_str() + " vs " +
                           p.value().shape_str());
    }
    cols += p.cols();
  }
  Tensor2 out(rows, cols);
  std::vector<std::size_t> ids, offsets;
  std::size_t off = 0;
  for (const Var& p : parts) {
    const Tensor2& v = p.value();
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < v.cols(); ++j) out(i, off + j) = v(i, j);
    ids.push_back(p.id());
    offsets.push_back(off);
    off += v.cols();
  }
  std::vector<Var> parents(parts.begin(), parts.end());
  return parts[0].tape().record(
      std::move(out), parents,
      [ids = std::move(ids), offsets = std::move(offsets)](Tape& t, std::size_t, const Tensor2& g) {
        for (std::size_t k = 0; k < ids.size(); ++k) {
          if (!t.needs_grad(ids[k])) continue;
          Tensor2& d = t.grad(ids[k]);
          for (std::size_t i = 0; i < d.rows(); ++i)
            for (std::size_t j = 0; j < d.cols(); ++j) d(i, j) += g(i, offsets[k] + j);
        }
      });
}

Var gather_rows(Var x, std::span<const std::size_t> indices) {
  const Tensor2& src = x.value();
  Tensor2 out(indices.size(), src.cols());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= src.rows()) {
      throw DimensionError("gather_rows index " + std::to_string(indices[i]) +
                           " out of range for " + src.shape_str());
    }
    auto r = src.row(indices[i]);
    std::copy(r.begin(), r.end(), out.row(i).begin());
  }
  const std::size_t ix = x.id();
  std::vector<std::size_t> idx(indices.begin(), indices.end());
  return x.tape().record(std::move(out), {x},
                         [ix, idx = std::move(idx)](Tape& t, std::size_t, const Tensor2& g) {
                           Tensor2& d = t.grad(ix);
                           for (std::size_t i = 0; i < idx.size(); ++i) {
                             auto dr = d.row(idx[i]);
                             auto gr = g.row(i);
                             for (std::size_t j = 0; j < gr.size(); ++j) dr[j] += gr[j];
                           }
                         });
}

Var sum(std::span<const Var> parts) {
  if (parts.empty()) throw InputError("sum of an empty list");
  Tensor2 out = parts[0].value();
  for (std::size_t k = 1; k < parts.size(); ++k) {
    require_same_tape(parts[0], parts[k]);
    require_same("sum", parts[0], parts[k]);
    axpy(out, parts[k].value());
  }
  std::vector<Var> parents(parts.begin(), parts.end());
  std::vector<std::size_t> ids;
  for (const Var& p : parts) ids.push_back(p.id());
  return parts[0].tape().record(std::move(out), parents,
                                [ids = std::move(ids)](Tape& t, std::size_t, const Tensor2& g) {
                                  for (std::size_t id : ids) {
                                    if (t.needs_grad(id)) axpy(t.grad(id), g);
                                  }
                                });
}

Var lstm_cell(Var x, Var hc_prev, Var w, Var u, Var b) {
  require_same_tape(x, hc_prev);
  require_same_tape(x, w);
  require_same_tape(x, u);
  require_same_tape(x, b);
  const std::size_t H = u.cols();
  const std::size_t B = x.rows();
  if (u.rows() != 4 * H || w.rows() != 4 * H || b.rows() != 4 * H || b.cols() != 1) {
    throw DimensionError("lstm gate shapes inconsistent: W " + w.value().shape_str() + ", U " +
                         u.value().shape_str() + ", b " + b.value().shape_str());
  }
  if (x.cols() != w.cols()) {
    throw DimensionError("lstm input " + x.value().shape_str() + " does not match W " +
                         w.value().shape_str());
  }
  if (hc_prev.rows() != B || hc_prev.cols() != 2 * H) {
    throw DimensionError("lstm state " + hc_prev.value().shape_str() + " does not fit batch " +
                         std::to_string(B) + " and hidden " + std::to_string(H));
  }

  // gates holds activated i, f, o, g; tc holds tanh(c).
  Tensor2 gates(B, 4 * H);
  for (std::size_t r = 0; r < B; ++r)
    for (std::size_t j = 0; j < 4 * H; ++j) gates(r, j) = b.value()(j, 0);
  kernels::gemm_nt(x.value(), w.value(), gates);
  Tensor2 h_prev(B, H);
  const Tensor2& hc = hc_prev.value();
  for (std::size_t r = 0; r < B; ++r)
    for (std::size_t j = 0; j < H; ++j) h_prev(r, j) = hc(r, j);
  kernels::gemm_nt(h_prev, u.value(), gates);

  Tensor2 out(B, 2 * H);
  Tensor2 tc(B, H);
  for (std::size_t r = 0; r < B; ++r) {
    double* z = &gates(r, 0);
    for (std::size_t j = 0; j < 3 * H; ++j) z[j] = 1.0 / (1.0 + std::exp(-z[j]));
    for (std::size_t j = 3 * H; j < 4 * H; ++j) z[j] = std::tanh(z[j]);
    for (std::size_t j = 0; j < H; ++j) {
      const double c = z[H + j] * hc(r, H + j) + z[j] * z[3 * H + j];
      tc(r, j) = std::tanh(c);
      out(r, H + j) = c;
      out(r, j) = z[2 * H + j] * tc(r, j);
    }
  }

  const std::size_t ix = x.id(), is = hc_prev.id(), iw = w.id(), iu = u.id(), ib = b.id();
  return x.tape().record(
      std::move(out), {x, hc_prev, w, u, b},
      [=, gates = std::move(gates), tc = std::move(tc), h_prev = std::move(h_prev)](
          Tape& t, std::size_t, const Tensor2& g) {
        const Tensor2& prev = t.value(is);
        Tensor2 dz(B, 4 * H);
        Tensor2 dc_prev(B, H);
        for (std::size_t r = 0; r < B; ++r) {
          const double* a = gates.data().data() + r * 4 * H;
          double* d = &dz(r, 0);
          for (std::size_t j = 0; j < H; ++j) {
            const double i = a[j], f = a[H + j], o = a[2 * H + j], gg = a[3 * H + j];
            const double dh = g(r, j);
            const double dc = g(r, H + j) + dh * o * (1.0 - tc(r, j) * tc(r, j));
            d[j] = dc * gg * i * (1.0 - i);
            d[H + j] = dc * prev(r, H + j) * f * (1.0 - f);
            d[2 * H + j] = dh * tc(r, j) * o * (1.0 - o);
            d[3 * H + j] = dc * i * (1.0 - gg * gg);
            dc_prev(r, j) = dc * f;
          }
        }
        if (t.needs_grad(ix)) kernels::gemm_nn(dz, t.value(iw), t.grad(ix));
        if (t.needs_grad(iw)) kernels::gemm_tn(dz, t.value(ix), t.grad(iw));
        if (t.needs_grad(iu)) kernels::gemm_tn(dz, h_prev, t.grad(iu));
        if (t.needs_grad(ib)) {
          Tensor2& db = t.grad(ib);
          for (std::size_t r = 0; r < B; ++r)
            for (std::size_t j = 0; j < 4 * H; ++j) db(j, 0) += dz(r, j);
        }
        if (t.needs_grad(is)) {
          Tensor2 dh_prev(B, H);
          kernels::gemm_nn(dz, t.value(iu), dh_prev);
          Tensor2& ds = t.grad(is);
          for (std::size_t r = 0; r < B; ++r) {
            for (std::size_t j = 0; j < H; ++j) {
              ds(r, j) += dh_prev(r, j);
              ds(r, H + j) += dc_prev(r, j);
            }
          }
        }
      });
}

Var sum_squares(Var a) {
  double s = 0.0;
  for (double v : a.value().data()) s += v * v;
  const std::size_t ia = a.id();
  return a.tape().record(Tensor2(1, 1, s), {a}, [ia](Tape& t, std::size_t, const Tensor2& g) {
    axpy(t.grad(ia), t.value(ia), 2.0 * g(0, 0));
  });
}

Var mse(Var pred, Var target) {
  require_same_tape(pred, target);
  require_same("mse", pred, target);
  const std::size_t n = pred.value().size();
  if (n == 0) throw InputError("mse of empty tensors");
  double s = 0.0;
  auto p = pred.value().data();
  auto y = target.value().data();
  for (std::size_t i = 0; i < n; ++i) s += (p[i] - y[i]) * (p[i] - y[i]);
  const std::size_t ip = pred.id(), iy = target.id();
  return pred.tape().record(
      Tensor2(1, 1, s / static_cast<double>(n)), {pred, target},
      [ip, iy, n](Tape& t, std::size_t, const Tensor2& g) {
        const double k = 2.0 * g(0, 0) / static_cast<double>(n);
        auto p = t.value(ip).data();
        auto y = t.value(iy).data();
        if (t.needs_grad(ip)) {
          auto d = t.grad(ip).data();
          for (std::size_t i = 0; i < n; ++i) d[i] += k * (p[i] - y[i]);
        }
        if (t.needs_grad(iy)) {
          auto d = t.grad(iy).data();
          for (std::size_t i = 0; i < n; ++i) d[i] -= k * (p[i] - y[i]);
        }
      });
}

}  // namespace affect::num
