// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ivedit/nn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "ivedit/core/errors.hpp"

namespace ivedit::nn {

using core::ParameterError;

void Node::ensure_grad() {
  if (grad.size() != value.size()) grad = Tensor(value.shape());
}

void Node::accumulate(const Tensor& g) {
  if (!g.same_shape(value)) {
    throw ParameterError("gradient shape " + g.shape_str() + " != value shape " +
                         value.shape_str());
  }
  ensure_grad();
  for (int64_t i = 0; i < g.size(); ++i) grad[i] += g[i];
}

NodePtr leaf(Tensor value, bool requires_grad, std::string name) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  n->requires_grad = requires_grad;
  n->name = std::move(name);
  return n;
}

NodePtr constant(Tensor value) { return leaf(std::move(value), false); }

namespace {

NodePtr make(Tensor v, std::vector<NodePtr> parents, std::function<void(Node&)> bp) {
  auto n = std::make_shared<Node>();
  n->value = std::move(v);
  n->parents = std::move(parents);
  bool rg = false;
  for (const auto& p : n->parents) rg = rg || p->requires_grad;
  n->requires_grad = rg;
  if (rg) n->backprop = std::move(bp);
  return n;
}

// Strides of `b` right-aligned against `out`; 0 where b is broadcast.
std::vector<int64_t> broadcast_strides(const std::vector<int>& out_shape,
                                       const std::vector<int>& b_shape) {
  size_t nd = out_shape.size();
  if (b_shape.size() > nd) throw ParameterError("broadcast: operand rank exceeds target");
  std::vector<int64_t> strides(nd, 0);
  int64_t s = 1;
  for (size_t i = 0; i < b_shape.size(); ++i) {
    size_t bi = b_shape.size() - 1 - i;
    size_t oi = nd - 1 - i;
    if (b_shape[bi] == out_shape[oi]) {
      strides[oi] = s;
      s *= b_shape[bi];
    } else if (b_shape[bi] == 1) {
      strides[oi] = 0;
      s *= 1;
    } else {
      throw ParameterError("broadcast: incompatible shapes");
    }
  }
  return strides;
}

// Iterates the flat indices of out alongside the broadcast index into b.
template <typename Fn>
void for_each_broadcast(const std::vector<int>& out_shape, const std::vector<int64_t>& bstride,
                        Fn&& fn) {
  int64_t n = shape_size(out_shape);
  size_t nd = out_shape.size();
  std::vector<int> ctr(nd, 0);
  int64_t bidx = 0;
  for (int64_t i = 0; i < n; ++i) {
    fn(i, bidx);
    for (size_t d = nd; d-- > 0;) {
      ++ctr[d];
      bidx += bstride[d];
      if (ctr[d] < out_shape[d]) break;
      ctr[d] = 0;
      bidx -= static_cast<int64_t>(out_shape[d]) * bstride[d];
    }
  }
}

enum class BinOp { Add, Sub, Mul };

NodePtr binary_elementwise(const NodePtr& a, const NodePtr& b, BinOp op) {
  const auto& as = a->value.shape();
  const auto& bs = b->value.shape();
  auto bstride = broadcast_strides(as, bs);
  Tensor out(as);
  const Tensor& av = a->value;
  const Tensor& bv = b->value;
  for_each_broadcast(as, bstride, [&](int64_t i, int64_t bi) {
    switch (op) {
      case BinOp::Add: out[i] = av[i] + bv[bi]; break;
      case BinOp::Sub: out[i] = av[i] - bv[bi]; break;
      case BinOp::Mul: out[i] = av[i] * bv[bi]; break;
    }
  });
  return make(std::move(out), {a, b}, [op, bstride](Node& n) {
    const NodePtr& pa = n.parents[0];
    const NodePtr& pb = n.parents[1];
    if (pa->requires_grad) {
      Tensor ga(pa->value.shape());
      for_each_broadcast(n.value.shape(), bstride, [&](int64_t i, int64_t bi) {
        double g = n.grad[i];
        if (op == BinOp::Mul) g *= pb->value[bi];
        ga[i] += g;
      });
      pa->accumulate(ga);
    }
    if (pb->requires_grad) {
      Tensor gb(pb->value.shape());
      for_each_broadcast(n.value.shape(), bstride, [&](int64_t i, int64_t bi) {
        double g = n.grad[i];
        if (op == BinOp::Sub) g = -g;
        if (op == BinOp::Mul) g *= pa->value[i];
        gb[bi] += g;
      });
      pb->accumulate(gb);
    }
  });
}

}  // namespace

NodePtr add(const NodePtr& a, const NodePtr& b) { return binary_elementwise(a, b, BinOp::Add); }
NodePtr sub(const NodePtr& a, const NodePtr& b) { return binary_elementwise(a, b, BinOp::Sub); }
NodePtr mul(const NodePtr& a, const NodePtr& b) { return binary_elementwise(a, b, BinOp::Mul); }

NodePtr matmul(const NodePtr& a, const NodePtr& b) {
  const auto& as = a->value.shape();
  const auto& bs = b->value.shape();
  if (as.size() < 2 || bs.size() < 2) throw ParameterError("matmul: operands must be rank >= 2");
  int m = as[as.size() - 2];
  int k = as[as.size() - 1];
  int kb = bs[bs.size() - 2];
  int ncol = bs[bs.size() - 1];
  if (k != kb) {
    throw ParameterError("matmul: inner dims differ " + a->value.shape_str() + " x " +
                         b->value.shape_str());
  }
  bool shared_b = bs.size() == 2;
  if (!shared_b) {
    if (bs.size() != as.size() ||
        !std::equal(as.begin(), as.end() - 2, bs.begin(), bs.end() - 2)) {
      throw ParameterError("matmul: leading dims differ");
    }
  }
  std::vector<int> out_shape(as.begin(), as.end() - 1);
  out_shape.push_back(ncol);
  int64_t batch = 1;
  for (size_t i = 0; i + 2 < as.size(); ++i) batch *= as[i];

  Tensor out(out_shape);
  const double* ap = a->value.data();
  const double* bp = b->value.data();
  double* op = out.data();
  for (int64_t bidx = 0; bidx < batch; ++bidx) {
    const double* A = ap + bidx * m * k;
    const double* B = shared_b ? bp : bp + bidx * static_cast<int64_t>(k) * ncol;
    double* O = op + bidx * m * ncol;
    for (int i = 0; i < m; ++i) {
      for (int kk = 0; kk < k; ++kk) {
        double av = A[i * k + kk];
        if (av == 0.0) continue;
        const double* Brow = B + kk * ncol;
        double* Orow = O + i * ncol;
        for (int j = 0; j < ncol; ++j) Orow[j] += av * Brow[j];
      }
    }
  }
  return make(std::move(out), {a, b}, [m, k, ncol, batch, shared_b](Node& n) {
    const NodePtr& pa = n.parents[0];
    const NodePtr& pb = n.parents[1];
    const double* gp = n.grad.data();
    const double* ap2 = pa->value.data();
    const double* bp2 = pb->value.data();
    if (pa->requires_grad) {
      Tensor ga(pa->value.shape());
      double* gap = ga.data();
      for (int64_t bidx = 0; bidx < batch; ++bidx) {
        const double* G = gp + bidx * m * ncol;
        const double* B = shared_b ? bp2 : bp2 + bidx * static_cast<int64_t>(k) * ncol;
        double* GA = gap + bidx * m * k;
        // dA = G * B^T
        for (int i = 0; i < m; ++i) {
          for (int kk = 0; kk < k; ++kk) {
            double s = 0.0;
            const double* Grow = G + i * ncol;
            const double* Brow = B + kk * ncol;
            for (int j = 0; j < ncol; ++j) s += Grow[j] * Brow[j];
            GA[i * k + kk] += s;
          }
        }
      }
      pa->accumulate(ga);
    }
    if (pb->requires_grad) {
      Tensor gb(pb->value.shape());
      double* gbp = gb.data();
      for (int64_t bidx = 0; bidx < batch; ++bidx) {
        const double* G = gp + bidx * m * ncol;
        const double* A = ap2 + bidx * m * k;
        double* GB = shared_b ? gbp : gbp + bidx * static_cast<int64_t>(k) * ncol;
        // dB += A^T * G
        for (int i = 0; i < m; ++i) {
          const double* Arow = A + i * k;
          const double* Grow = G + i * ncol;
          for (int kk = 0; kk < k; ++kk) {
            double av = Arow[kk];
            if (av == 0.0) continue;
            double* GBrow = GB + kk * ncol;
            for (int j = 0; j < ncol; ++j) GBrow[j] += av * Grow[j];
          }
        }
      }
      pb->accumulate(gb);
    }
  });
}

NodePtr scale(const NodePtr& a, double s) {
  Tensor out = a->value;
  for (int64_t i = 0; i < out.size(); ++i) out[i] *= s;
  return make(std::move(out), {a}, [s](Node& n) {
    Tensor g(n.parents[0]->value.shape());
    for (int64_t i = 0; i < g.size(); ++i) g[i] = n.grad[i] * s;
    n.parents[0]->accumulate(g);
  });
}

NodePtr add_scalar(const NodePtr& a, double s) {
  Tensor out = a->value;
  for (int64_t i = 0; i < out.size(); ++i) out[i] += s;
  return make(std::move(out), {a},
              [](Node& n) { n.parents[0]->accumulate(n.grad); });
}

NodePtr gelu(const NodePtr& a) {
  constexpr double inv_sqrt2 = 0.70710678118654752440;
  constexpr double inv_sqrt2pi = 0.39894228040143267794;
  Tensor out(a->value.shape());
  for (int64_t i = 0; i < out.size(); ++i) {
    double x = a->value[i];
    out[i] = 0.5 * x * (1.0 + std::erf(x * inv_sqrt2));
  }
  return make(std::move(out), {a}, [inv_sqrt2, inv_sqrt2pi](Node& n) {
    const Tensor& x = n.parents[0]->value;
    Tensor g(x.shape());
    for (int64_t i = 0; i < g.size(); ++i) {
      double xi = x[i];
      double cdf = 0.5 * (1.0 + std::erf(xi * inv_sqrt2));
      double pdf = inv_sqrt2pi * std::exp(-0.5 * xi * xi);
      g[i] = n.grad[i] * (cdf + xi * pdf);
    }
    n.parents[0]->accumulate(g);
  });
}

NodePtr sigmoid(const NodePtr& a) {
  Tensor out(a->value.shape());
  for (int64_t i = 0; i < out.size(); ++i) out[i] = 1.0 / (1.0 + std::exp(-a->value[i]));
  return make(std::move(out), {a}, [](Node& n) {
    Tensor g(n.parents[0]->value.shape());
    for (int64_t i = 0; i < g.size(); ++i) {
      double y = n.value[i];
      g[i] = n.grad[i] * y * (1.0 - y);
    }
    n.parents[0]->accumulate(g);
  });
}

NodePtr softmax_lastdim(const NodePtr& a) {
  const auto& shape = a->value.shape();
  if (shape.empty()) throw ParameterError("softmax: rank must be >= 1");
  int d = shape.back();
  int64_t rows = a->value.size() / d;
  Tensor out(shape);
  for (int64_t r = 0; r < rows; ++r) {
    const double* x = a->value.data() + r * d;
    double* y = out.data() + r * d;
    double mx = x[0];
    for (int j = 1; j < d; ++j) mx = std::max(mx, x[j]);
    double z = 0.0;
    for (int j = 0; j < d; ++j) {
      y[j] = std::exp(x[j] - mx);
      z += y[j];
    }
    for (int j = 0; j < d; ++j) y[j] /= z;
  }
  return make(std::move(out), {a}, [d, rows](Node& n) {
    Tensor g(n.parents[0]->value.shape());
    for (int64_t r = 0; r < rows; ++r) {
      const double* p = n.value.data() + r * d;
      const double* go = n.grad.data() + r * d;
      double* gi = g.data() + r * d;
      double dot = 0.0;
      for (int j = 0; j < d; ++j) dot += go[j] * p[j];
      for (int j = 0; j < d; ++j) gi[j] = p[j] * (go[j] - dot);
    }
    n.parents[0]->accumulate(g);
  });
}

NodePtr layer_norm(const NodePtr& a, const NodePtr& gain, const NodePtr& bias, double eps) {
  const auto& shape = a->value.shape();
  int d = shape.back();
  if (gain->value.size() != d || bias->value.size() != d) {
    throw ParameterError("layer_norm: gain/bias must have size of last dim");
  }
  int64_t rows = a->value.size() / d;
  Tensor out(shape);
  Tensor xhat(shape);
  Tensor inv_sigma({static_cast<int>(rows)});
  for (int64_t r = 0; r < rows; ++r) {
    const double* x = a->value.data() + r * d;
    double mu = 0.0;
    for (int j = 0; j < d; ++j) mu += x[j];
    mu /= d;
    double var = 0.0;
    for (int j = 0; j < d; ++j) var += (x[j] - mu) * (x[j] - mu);
    var /= d;
    double inv = 1.0 / std::sqrt(var + eps);
    inv_sigma[r] = inv;
    for (int j = 0; j < d; ++j) {
      double xh = (x[j] - mu) * inv;
      xhat[r * d + j] = xh;
      out[r * d + j] = gain->value[j] * xh + bias->value[j];
    }
  }
  return make(std::move(out), {a, gain, bias},
              [d, rows, xhat = std::move(xhat), inv_sigma = std::move(inv_sigma)](Node& n) {
    const NodePtr& pa = n.parents[0];
    const NodePtr& pg = n.parents[1];
    const NodePtr& pb = n.parents[2];
    if (pg->requires_grad) {
      Tensor gg(pg->value.shape());
      for (int64_t r = 0; r < rows; ++r) {
        for (int j = 0; j < d; ++j) gg[j] += n.grad[r * d + j] * xhat[r * d + j];
      }
      pg->accumulate(gg);
    }
    if (pb->requires_grad) {
      Tensor gb(pb->value.shape());
      for (int64_t r = 0; r < rows; ++r) {
        for (int j = 0; j < d; ++j) gb[j] += n.grad[r * d + j];
      }
      pb->accumulate(gb);
    }
    if (pa->requires_grad) {
      Tensor ga(pa->value.shape());
      for (int64_t r = 0; r < rows; ++r) {
        double mean_dxhat = 0.0, mean_dxhat_xhat = 0.0;
        for (int j = 0; j < d; ++j) {
          double dxh = n.grad[r * d + j] * pg->value[j];
          mean_dxhat += dxh;
          mean_dxhat_xhat += dxh * xhat[r * d + j];
        }
        mean_dxhat /= d;
        mean_dxhat_xhat /= d;
        for (int j = 0; j < d; ++j) {
          double dxh = n.grad[r * d + j] * pg->value[j];
          ga[r * d + j] =
              inv_sigma[r] * (dxh - mean_dxhat - xhat[r * d + j] * mean_dxhat_xhat);
        }
      }
      pa->accumulate(ga);
    }
  });
}

NodePtr reshape(const NodePtr& a, std::vector<int> shape) {
  Tensor out = a->value.reshaped(shape);
  return make(std::move(out), {a}, [](Node& n) {
    n.parents[0]->accumulate(n.grad.reshaped(n.parents[0]->value.shape()));
  });
}

namespace {

std::vector<int64_t> contiguous_strides(const std::vector<int>& shape) {
  std::vector<int64_t> s(shape.size(), 1);
  for (size_t i = shape.size() - 1; i-- > 0;) {
    s[i] = s[i + 1] * shape[i + 1];
  }
  return s;
}

void permute_into(const Tensor& in, Tensor& out, const std::vector<int>& perm) {
  // out axis d corresponds to in axis perm[d]
  const auto& os = out.shape();
  auto istrides = contiguous_strides(in.shape());
  size_t nd = os.size();
  std::vector<int> ctr(nd, 0);
  int64_t iidx = 0;
  std::vector<int64_t> step(nd);
  for (size_t d = 0; d < nd; ++d) step[d] = istrides[static_cast<size_t>(perm[d])];
  for (int64_t o = 0; o < out.size(); ++o) {
    out[o] = in[iidx];
    for (size_t d = nd; d-- > 0;) {
      ++ctr[d];
      iidx += step[d];
      if (ctr[d] < os[d]) break;
      ctr[d] = 0;
      iidx -= static_cast<int64_t>(os[d]) * step[d];
    }
  }
}

void permute_accumulate(const Tensor& grad_out, Tensor& grad_in, const std::vector<int>& perm) {
  const auto& os = grad_out.shape();
  auto istrides = contiguous_strides(grad_in.shape());
  size_t nd = os.size();
  std::vector<int> ctr(nd, 0);
  int64_t iidx = 0;
  std::vector<int64_t> step(nd);
  for (size_t d = 0; d < nd; ++d) step[d] = istrides[static_cast<size_t>(perm[d])];
  for (int64_t o = 0; o < grad_out.size(); ++o) {
    grad_in[iidx] += grad_out[o];
    for (size_t d = nd; d-- > 0;) {
      ++ctr[d];
      iidx += step[d];
      if (ctr[d] < os[d]) break;
      ctr[d] = 0;
      iidx -= static_cast<int64_t>(os[d]) * step[d];
    }
  }
}

}  // namespace

NodePtr permute(const NodePtr& a, std::vector<int> perm) {
  const auto& as = a->value.shape();
  if (perm.size() != as.size()) throw ParameterError("permute: rank mismatch");
  std::vector<int> out_shape(perm.size());
  for (size_t d = 0; d < perm.size(); ++d) out_shape[d] = as[static_cast<size_t>(perm[d])];
  Tensor out(out_shape);
  permute_into(a->value, out, perm);
  return make(std::move(out), {a}, [perm](Node& n) {
    Tensor ga(n.parents[0]->value.shape());
    permute_accumulate(n.grad, ga, perm);
    n.parents[0]->accumulate(ga);
  });
}

NodePtr transpose_last2(const NodePtr& a) {
  std::vector<int> perm(a->value.shape().size());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  std::swap(perm[perm.size() - 1], perm[perm.size() - 2]);
  return permute(a, perm);
}

NodePtr concat(const std::vector<NodePtr>& xs, int axis) {
  if (xs.empty()) throw ParameterError("concat: no inputs");
  const auto& s0 = xs[0]->value.shape();
  size_t nd = s0.size();
  if (axis < 0 || static_cast<size_t>(axis) >= nd) throw ParameterError("concat: bad axis");
  std::vector<int> out_shape = s0;
  int total = 0;
  for (const auto& x : xs) {
    const auto& s = x->value.shape();
    if (s.size() != nd) throw ParameterError("concat: rank mismatch");
    for (size_t d = 0; d < nd; ++d) {
      if (d != static_cast<size_t>(axis) && s[d] != s0[d]) {
        throw ParameterError("concat: shape mismatch");
      }
    }
    total += s[static_cast<size_t>(axis)];
  }
  out_shape[static_cast<size_t>(axis)] = total;

  int64_t outer = 1;
  for (int d = 0; d < axis; ++d) outer *= s0[static_cast<size_t>(d)];
  int64_t inner = 1;
  for (size_t d = static_cast<size_t>(axis) + 1; d < nd; ++d) inner *= s0[d];

  Tensor out(out_shape);
  int64_t row_out = static_cast<int64_t>(total) * inner;
  int64_t offset = 0;
  for (const auto& x : xs) {
    int len = x->value.shape()[static_cast<size_t>(axis)];
    int64_t row_in = static_cast<int64_t>(len) * inner;
    for (int64_t o = 0; o < outer; ++o) {
      const double* src = x->value.data() + o * row_in;
      double* dst = out.data() + o * row_out + offset;
      std::copy(src, src + row_in, dst);
    }
    offset += row_in;
  }
  return make(std::move(out), xs, [axis, outer, inner, total](Node& n) {
    int64_t row_out = static_cast<int64_t>(total) * inner;
    int64_t offset = 0;
    for (const auto& p : n.parents) {
      int len = p->value.shape()[static_cast<size_t>(axis)];
      int64_t row_in = static_cast<int64_t>(len) * inner;
      if (p->requires_grad) {
        Tensor g(p->value.shape());
        for (int64_t o = 0; o < outer; ++o) {
          const double* src = n.grad.data() + o * row_out + offset;
          double* dst = g.data() + o * row_in;
          for (int64_t i = 0; i < row_in; ++i) dst[i] += src[i];
        }
        p->accumulate(g);
      }
      offset += row_in;
    }
  });
}

NodePtr slice(const NodePtr& a, int axis, int start, int len) {
  const auto& as = a->value.shape();
  size_t nd = as.size();
  if (axis < 0 || static_cast<size_t>(axis) >= nd) throw ParameterError("slice: bad axis");
  int dim = as[static_cast<size_t>(axis)];
  if (start < 0 || len < 0 || start + len > dim) throw ParameterError("slice: out of range");
  std::vector<int> out_shape = as;
  out_shape[static_cast<size_t>(axis)] = len;
  int64_t outer = 1;
  for (int d = 0; d < axis; ++d) outer *= as[static_cast<size_t>(d)];
  int64_t inner = 1;
  for (size_t d = static_cast<size_t>(axis) + 1; d < nd; ++d) inner *= as[d];

  Tensor out(out_shape);
  int64_t row_in = static_cast<int64_t>(dim) * inner;
  int64_t row_out = static_cast<int64_t>(len) * inner;
  for (int64_t o = 0; o < outer; ++o) {
    const double* src = a->value.data() + o * row_in + static_cast<int64_t>(start) * inner;
    std::copy(src, src + row_out, out.data() + o * row_out);
  }
  return make(std::move(out), {a}, [axis, start, len, outer, inner, dim](Node& n) {
    (void)axis;
    (void)len;
    Tensor g(n.parents[0]->value.shape());
    int64_t row_in = static_cast<int64_t>(dim) * inner;
    int64_t row_out = n.grad.size() / (outer == 0 ? 1 : outer);
    for (int64_t o = 0; o < outer; ++o) {
      const double* src = n.grad.data() + o * row_out;
      double* dst = g.data() + o * row_in + static_cast<int64_t>(start) * inner;
      for (int64_t i = 0; i < row_out; ++i) dst[i] += src[i];
    }
    n.parents[0]->accumulate(g);
  });
}

NodePtr gather_lastdim(const NodePtr& a, const std::vector<int>& indices) {
  const auto& as = a->value.shape();
  int d = as.back();
  for (int idx : indices) {
    if (idx < 0 || idx >= d) throw ParameterError("gather: index out of range");
  }
  int64_t rows = a->value.size() / d;
  std::vector<int> out_shape = as;
  out_shape.back() = static_cast<int>(indices.size());
  Tensor out(out_shape);
  int k = static_cast<int>(indices.size());
  for (int64_t r = 0; r < rows; ++r) {
    for (int j = 0; j < k; ++j) out[r * k + j] = a->value[r * d + indices[j]];
  }
  return make(std::move(out), {a}, [indices, d, rows](Node& n) {
    Tensor g(n.parents[0]->value.shape());
    int k = static_cast<int>(indices.size());
    for (int64_t r = 0; r < rows; ++r) {
      for (int j = 0; j < k; ++j) g[r * d + indices[j]] += n.grad[r * k + j];
    }
    n.parents[0]->accumulate(g);
  });
}

NodePtr tile_leading(const NodePtr& a, int n) {
  if (n < 1) throw ParameterError("tile_leading: n must be >= 1");
  std::vector<int> out_shape;
  out_shape.push_back(n);
  for (int d : a->value.shape()) out_shape.push_back(d);
  Tensor out(out_shape);
  int64_t sz = a->value.size();
  for (int i = 0; i < n; ++i) {
    std::copy(a->value.data(), a->value.data() + sz, out.data() + static_cast<int64_t>(i) * sz);
  }
  return make(std::move(out), {a}, [n](Node& node) {
    int64_t sz = node.parents[0]->value.size();
    Tensor g(node.parents[0]->value.shape());
    for (int i = 0; i < n; ++i) {
      const double* src = node.grad.data() + static_cast<int64_t>(i) * sz;
      for (int64_t j = 0; j < sz; ++j) g[j] += src[j];
    }
    node.parents[0]->accumulate(g);
  });
}

NodePtr sum_all(const NodePtr& a) {
  double s = 0.0;
  for (int64_t i = 0; i < a->value.size(); ++i) s += a->value[i];
  return make(Tensor::scalar(s), {a}, [](Node& n) {
    Tensor g(n.parents[0]->value.shape());
    for (int64_t i = 0; i < g.size(); ++i) g[i] = n.grad[0];
    n.parents[0]->accumulate(g);
  });
}

NodePtr mean_all(const NodePtr& a) {
  int64_t n = a->value.size();
  return scale(sum_all(a), 1.0 / static_cast<double>(n));
}

NodePtr mse(const NodePtr& a, const NodePtr& b) {
  if (!a->value.same_shape(b->value)) throw ParameterError("mse: shape mismatch");
  int64_t n = a->value.size();
  double s = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    double d = a->value[i] - b->value[i];
    s += d * d;
  }
  return make(Tensor::scalar(s / static_cast<double>(n)), {a, b}, [n](Node& node) {
    const NodePtr& pa = node.parents[0];
    const NodePtr& pb = node.parents[1];
    double g0 = node.grad[0] * 2.0 / static_cast<double>(n);
    if (pa->requires_grad) {
      Tensor ga(pa->value.shape());
      for (int64_t i = 0; i < n; ++i) ga[i] = g0 * (pa->value[i] - pb->value[i]);
      pa->accumulate(ga);
    }
    if (pb->requires_grad) {
      Tensor gb(pb->value.shape());
      for (int64_t i = 0; i < n; ++i) gb[i] = -g0 * (pa->value[i] - pb->value[i]);
      pb->accumulate(gb);
    }
  });
}

void backward(const NodePtr& root) {
  // Iterative post-order DFS; reverse gives root-first sweep.
  std::vector<Node*> order;
  std::unordered_set<Node*> visited;
  std::vector<std::pair<Node*, size_t>> stack;
  std::unordered_set<Node*> on_stack_done;
  stack.emplace_back(root.get(), 0);
  visited.insert(root.get());
  while (!stack.empty()) {
    auto& [node, child] = stack.back();
    if (child < node->parents.size()) {
      Node* next = node->parents[child].get();
      ++child;
      if (next->requires_grad && !visited.count(next)) {
        visited.insert(next);
        stack.emplace_back(next, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  root->ensure_grad();
  for (int64_t i = 0; i < root->grad.size(); ++i) root->grad[i] = 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* node = *it;
    if (node->backprop && node->requires_grad) {
      node->ensure_grad();
      node->backprop(*node);
    }
  }
}

void zero_grad(const std::vector<NodePtr>& params) {
  for (const auto& p : params) {
    if (p->grad.size() == p->value.size()) {
      for (int64_t i = 0; i < p->grad.size(); ++i) p->grad[i] = 0.0;
    }
  }
}

}  // namespace ivedit::nn
