#include "ascnet/tensor/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ascnet/common/error.hpp"
#include "ascnet/simd/kernels.hpp"

namespace ascnet::tensor {

namespace {

const simd::KernelTable& kern() { return simd::active(); }

[[noreturn]] void shape_fail(const char* op, const Shape& a, const Shape& b) {
  throw ShapeError(std::string(op) + ": incompatible shapes " + shape_str(a) + " and " + shape_str(b));
}

// Builds an op output. Only inputs that require grad are recorded; with none
// the result is a constant and no backward rule is kept.
Tensor make_result(Shape shape, std::vector<double> value, std::initializer_list<Tensor> inputs,
                   const char* op, std::function<void(Node&)> backward) {
  auto n = std::make_shared<Node>();
  n->shape = std::move(shape);
  n->value = std::move(value);
  bool rg = false;
  for (const auto& t : inputs) rg = rg || t.requires_grad();
  if (rg) {
    n->requires_grad = true;
    n->op = op;
    for (const auto& t : inputs) n->inputs.push_back(t.node_ptr());
    n->backward = std::move(backward);
  }
  return Tensor(std::move(n));
}

bool wants(const Node& n) { return n.requires_grad; }

struct AxisSplit {
  std::size_t outer = 1, len = 1, inner = 1;
};

AxisSplit split_axis(const Shape& s, std::size_t axis) {
  AxisSplit a;
  for (std::size_t i = 0; i < axis; ++i) a.outer *= s[i];
  a.len = s[axis];
  for (std::size_t i = axis + 1; i < s.size(); ++i) a.inner *= s[i];
  return a;
}

void require_rank(const char* op, const Tensor& t, std::size_t rank) {
  if (t.rank() != rank)
    throw ShapeError(std::string(op) + ": expected rank " + std::to_string(rank) + ", got " +
                     shape_str(t.shape()));
}

double stable_sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

// ---- linear algebra ---------------------------------------------------------

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_rank("matmul", a, 2);
  require_rank("matmul", b, 2);
  const std::size_t n = a.dim(0), k = a.dim(1), m = b.dim(1);
  if (b.dim(0) != k) shape_fail("matmul", a.shape(), b.shape());
  std::vector<double> out(n * m, 0.0);
  kern().gemm_nn(n, m, k, a.values().data(), k, b.values().data(), m, out.data(), m);
  return make_result({n, m}, std::move(out), {a, b}, "matmul", [n, k, m](Node& self) {
    Node& A = *self.inputs[0];
    Node& B = *self.inputs[1];
    if (wants(A)) kern().gemm_nt(n, k, m, self.grad.data(), m, B.value.data(), m, A.grad.data(), k);
    if (wants(B)) kern().gemm_tn(k, m, n, A.value.data(), k, self.grad.data(), m, B.grad.data(), m);
  });
}

Tensor add_bias(const Tensor& x, const Tensor& b) {
  require_rank("add_bias", x, 2);
  require_rank("add_bias", b, 1);
  const std::size_t n = x.dim(0), m = x.dim(1);
  if (b.dim(0) != m) shape_fail("add_bias", x.shape(), b.shape());
  std::vector<double> out(x.values().begin(), x.values().end());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) out[i * m + j] += b[j];
  return make_result({n, m}, std::move(out), {x, b}, "add_bias", [n, m](Node& self) {
    Node& X = *self.inputs[0];
    Node& B = *self.inputs[1];
    if (wants(X))
      for (std::size_t i = 0; i < n * m; ++i) X.grad[i] += self.grad[i];
    if (wants(B))
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) B.grad[j] += self.grad[i * m + j];
  });
}

Tensor dense(const Tensor& x, const Tensor& w, const std::optional<Tensor>& b) {
  if (x.rank() != 2 || w.rank() != 2 || x.dim(1) != w.dim(0)) shape_fail("dense", x.shape(), w.shape());
  Tensor y = matmul(x, w);
  return b ? add_bias(y, *b) : y;
}

// ---- elementwise ------------------------------------------------------------

namespace {

template <class Fwd, class BwdA, class BwdB>
Tensor binary(const char* op, const Tensor& a, const Tensor& b, Fwd fwd, BwdA bwd_a, BwdB bwd_b) {
  if (a.shape() != b.shape()) shape_fail(op, a.shape(), b.shape());
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fwd(a[i], b[i]);
  return make_result(a.shape(), std::move(out), {a, b}, op, [bwd_a, bwd_b](Node& self) {
    Node& A = *self.inputs[0];
    Node& B = *self.inputs[1];
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      if (wants(A)) A.grad[i] += self.grad[i] * bwd_a(A.value[i], B.value[i]);
      if (wants(B)) B.grad[i] += self.grad[i] * bwd_b(A.value[i], B.value[i]);
    }
  });
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  return binary(
      "add", a, b, [](double x, double y) { return x + y; }, [](double, double) { return 1.0; },
      [](double, double) { return 1.0; });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  return binary(
      "sub", a, b, [](double x, double y) { return x - y; }, [](double, double) { return 1.0; },
      [](double, double) { return -1.0; });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  return binary(
      "mul", a, b, [](double x, double y) { return x * y; }, [](double, double y) { return y; },
      [](double x, double) { return x; });
}

Tensor scale(const Tensor& x, double s) {
  std::vector<double> out(x.values().begin(), x.values().end());
  for (auto& v : out) v *= s;
  return make_result(x.shape(), std::move(out), {x}, "scale", [s](Node& self) {
    kern().axpy(s, self.grad.data(), self.inputs[0]->grad.data(), self.grad.size());
  });
}

Tensor add_scalar(const Tensor& x, double s) {
  std::vector<double> out(x.values().begin(), x.values().end());
  for (auto& v : out) v += s;
  return make_result(x.shape(), std::move(out), {x}, "add_scalar", [](Node& self) {
    kern().axpy(1.0, self.grad.data(), self.inputs[0]->grad.data(), self.grad.size());
  });
}

Tensor tanh(const Tensor& x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(x[i]);
  return make_result(x.shape(), std::move(out), {x}, "tanh", [](Node& self) {
    Node& X = *self.inputs[0];
    for (std::size_t i = 0; i < self.grad.size(); ++i)
      X.grad[i] += self.grad[i] * (1.0 - self.value[i] * self.value[i]);
  });
}

Tensor sigmoid(const Tensor& x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = stable_sigmoid(x[i]);
  return make_result(x.shape(), std::move(out), {x}, "sigmoid", [](Node& self) {
    Node& X = *self.inputs[0];
    for (std::size_t i = 0; i < self.grad.size(); ++i)
      X.grad[i] += self.grad[i] * self.value[i] * (1.0 - self.value[i]);
  });
}

Tensor softmax(const Tensor& x, std::size_t axis) {
  if (axis >= x.rank())
    throw ShapeError("softmax: axis " + std::to_string(axis) + " invalid for " + shape_str(x.shape()));
  const AxisSplit s = split_axis(x.shape(), axis);
  std::vector<double> out(x.size());
  for (std::size_t o = 0; o < s.outer; ++o)
    for (std::size_t i = 0; i < s.inner; ++i) {
      const std::size_t base = o * s.len * s.inner + i;
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < s.len; ++j) mx = std::max(mx, x[base + j * s.inner]);
      double z = 0.0;
      for (std::size_t j = 0; j < s.len; ++j) {
        const double e = std::exp(x[base + j * s.inner] - mx);
        out[base + j * s.inner] = e;
        z += e;
      }
      for (std::size_t j = 0; j < s.len; ++j) out[base + j * s.inner] /= z;
    }
  return make_result(x.shape(), std::move(out), {x}, "softmax", [s](Node& self) {
    Node& X = *self.inputs[0];
    for (std::size_t o = 0; o < s.outer; ++o)
      for (std::size_t i = 0; i < s.inner; ++i) {
        const std::size_t base = o * s.len * s.inner + i;
        double dotgy = 0.0;
        for (std::size_t j = 0; j < s.len; ++j)
          dotgy += self.grad[base + j * s.inner] * self.value[base + j * s.inner];
        for (std::size_t j = 0; j < s.len; ++j) {
          const std::size_t k = base + j * s.inner;
          X.grad[k] += self.value[k] * (self.grad[k] - dotgy);
        }
      }
  });
}

// ---- structure --------------------------------------------------------------

Tensor reshape(const Tensor& x, Shape shape) {
  if (shape_size(shape) != x.size()) shape_fail("reshape", x.shape(), shape);
  std::vector<double> out(x.values().begin(), x.values().end());
  return make_result(std::move(shape), std::move(out), {x}, "reshape", [](Node& self) {
    kern().axpy(1.0, self.grad.data(), self.inputs[0]->grad.data(), self.grad.size());
  });
}

Tensor select(const Tensor& x, std::size_t axis, std::size_t index) {
  if (axis >= x.rank() || index >= x.dim(axis))
    throw ShapeError("select: axis " + std::to_string(axis) + " index " + std::to_string(index) +
                     " out of range for " + shape_str(x.shape()));
  const AxisSplit s = split_axis(x.shape(), axis);
  Shape out_shape = x.shape();
  out_shape.erase(out_shape.begin() + static_cast<std::ptrdiff_t>(axis));
  std::vector<double> out(s.outer * s.inner);
  for (std::size_t o = 0; o < s.outer; ++o)
    for (std::size_t i = 0; i < s.inner; ++i)
      out[o * s.inner + i] = x[(o * s.len + index) * s.inner + i];
  return make_result(std::move(out_shape), std::move(out), {x}, "select", [s, index](Node& self) {
    Node& X = *self.inputs[0];
    for (std::size_t o = 0; o < s.outer; ++o)
      for (std::size_t i = 0; i < s.inner; ++i)
        X.grad[(o * s.len + index) * s.inner + i] += self.grad[o * s.inner + i];
  });
}

Tensor mean(const Tensor& x, std::size_t axis) {
  if (axis >= x.rank() || x.dim(axis) == 0)
    throw ShapeError("mean: axis " + std::to_string(axis) + " invalid for " + shape_str(x.shape()));
  const AxisSplit s = split_axis(x.shape(), axis);
  Shape out_shape = x.shape();
  out_shape.erase(out_shape.begin() + static_cast<std::ptrdiff_t>(axis));
  std::vector<double> out(s.outer * s.inner, 0.0);
  const double inv = 1.0 / static_cast<double>(s.len);
  for (std::size_t o = 0; o < s.outer; ++o)
    for (std::size_t j = 0; j < s.len; ++j)
      for (std::size_t i = 0; i < s.inner; ++i) out[o * s.inner + i] += x[(o * s.len + j) * s.inner + i];
  for (auto& v : out) v *= inv;
  return make_result(std::move(out_shape), std::move(out), {x}, "mean", [s, inv](Node& self) {
    Node& X = *self.inputs[0];
    for (std::size_t o = 0; o < s.outer; ++o)
      for (std::size_t j = 0; j < s.len; ++j)
        for (std::size_t i = 0; i < s.inner; ++i)
          X.grad[(o * s.len + j) * s.inner + i] += inv * self.grad[o * s.inner + i];
  });
}

Tensor sum_all(const Tensor& x) {
  double total = 0.0;
  for (double v : x.values()) total += v;
  return make_result({}, {total}, {x}, "sum_all", [](Node& self) {
    Node& X = *self.inputs[0];
    for (auto& g : X.grad) g += self.grad[0];
  });
}

Tensor mean_all(const Tensor& x) {
  if (x.size() == 0) throw ShapeError("mean_all of empty tensor");
  return scale(sum_all(x), 1.0 / static_cast<double>(x.size()));
}

Tensor concat(const std::vector<Tensor>& parts, std::size_t axis) {
  if (parts.empty()) throw ShapeError("concat: no inputs");
  const Shape& first = parts.front().shape();
  if (axis >= first.size()) throw ShapeError("concat: axis out of range for " + shape_str(first));
  Shape out_shape = first;
  out_shape[axis] = 0;
  for (const auto& p : parts) {
    if (p.rank() != first.size()) shape_fail("concat", first, p.shape());
    for (std::size_t d = 0; d < first.size(); ++d)
      if (d != axis && p.dim(d) != first[d]) shape_fail("concat", first, p.shape());
    out_shape[axis] += p.dim(axis);
  }
  const AxisSplit s = split_axis(out_shape, axis);
  std::vector<double> out(shape_size(out_shape));
  std::vector<std::size_t> offsets;
  std::size_t off = 0;
  for (const auto& p : parts) {
    offsets.push_back(off);
    const std::size_t len = p.dim(axis);
    for (std::size_t o = 0; o < s.outer; ++o)
      std::copy_n(p.values().data() + o * len * s.inner, len * s.inner,
                  out.data() + (o * s.len + off) * s.inner);
    off += len;
  }

  auto n = std::make_shared<Node>();
  n->shape = out_shape;
  n->value = std::move(out);
  bool rg = false;
  for (const auto& p : parts) rg = rg || p.requires_grad();
  if (rg) {
    n->requires_grad = true;
    n->op = "concat";
    for (const auto& p : parts) n->inputs.push_back(p.node_ptr());
    n->backward = [s, offsets](Node& self) {
      for (std::size_t k = 0; k < self.inputs.size(); ++k) {
        Node& P = *self.inputs[k];
        if (!wants(P)) continue;
        const std::size_t len = P.value.size() / (s.outer * s.inner);
        for (std::size_t o = 0; o < s.outer; ++o)
          kern().axpy(1.0, self.grad.data() + (o * s.len + offsets[k]) * s.inner,
                      P.grad.data() + o * len * s.inner, len * s.inner);
      }
    };
  }
  return Tensor(std::move(n));
}

// ---- sequence layers --------------------------------------------------------

Tensor embedding_lookup(const Tensor& table, const std::vector<std::size_t>& ids, bool trainable) {
  require_rank("embedding_lookup", table, 2);
  const std::size_t vocab = table.dim(0), d = table.dim(1);
  std::vector<double> out(ids.size() * d, 0.0);
  for (std::size_t t = 0; t < ids.size(); ++t) {
    if (ids[t] >= vocab)
      throw DataError("embedding_lookup: id " + std::to_string(ids[t]) + " out of range for vocabulary of " +
                      std::to_string(vocab));
    if (ids[t] == 0) continue;
    std::copy_n(table.values().data() + ids[t] * d, d, out.data() + t * d);
  }
  Shape shape{ids.size(), d};
  if (!trainable || !table.requires_grad()) return Tensor::from(std::move(shape), std::move(out));
  return make_result(std::move(shape), std::move(out), {table}, "embedding", [ids, d](Node& self) {
    Node& T = *self.inputs[0];
    for (std::size_t t = 0; t < ids.size(); ++t)
      if (ids[t] != 0) kern().axpy(1.0, self.grad.data() + t * d, T.grad.data() + ids[t] * d, d);
  });
}

namespace {

struct GruCache {
  std::size_t steps = 0, in = 0, hid = 0;
  std::vector<double> z, r, n, hprev, rh;  // each [T,h], indexed by position
  std::vector<double> dgates;              // scratch [T,3h]
};

}  // namespace

Tensor gru(const Tensor& x, const GruParams& p, bool reverse) {
  require_rank("gru", x, 2);
  require_rank("gru", p.w, 2);
  require_rank("gru", p.u, 2);
  require_rank("gru", p.b, 1);
  const std::size_t T = x.dim(0), d = x.dim(1), h = p.u.dim(0);
  if (T == 0) throw ShapeError("gru: empty sequence");
  if (p.w.dim(0) != d || p.w.dim(1) != 3 * h) shape_fail("gru", x.shape(), p.w.shape());
  if (p.u.dim(1) != 3 * h) shape_fail("gru", p.u.shape(), p.w.shape());
  if (p.b.dim(0) != 3 * h) shape_fail("gru", p.b.shape(), p.w.shape());

  const auto& K = kern();
  const std::size_t g3 = 3 * h;
  std::vector<double> gates(T * g3, 0.0);
  K.gemm_nn(T, g3, d, x.values().data(), d, p.w.values().data(), g3, gates.data(), g3);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t j = 0; j < g3; ++j) gates[t * g3 + j] += p.b[j];

  auto cache = std::make_shared<GruCache>();
  cache->steps = T;
  cache->in = d;
  cache->hid = h;
  cache->z.resize(T * h);
  cache->r.resize(T * h);
  cache->n.resize(T * h);
  cache->hprev.resize(T * h);
  cache->rh.resize(T * h);

  std::vector<double> out(T * h, 0.0);
  std::vector<double> state(h, 0.0), zr(2 * h), cand(h);
  const double* U = p.u.values().data();
  for (std::size_t s = 0; s < T; ++s) {
    const std::size_t t = reverse ? T - 1 - s : s;
    std::fill(zr.begin(), zr.end(), 0.0);
    K.gemm_nn(1, 2 * h, h, state.data(), h, U, g3, zr.data(), 2 * h);
    double* z = cache->z.data() + t * h;
    double* r = cache->r.data() + t * h;
    double* rh = cache->rh.data() + t * h;
    std::copy(state.begin(), state.end(), cache->hprev.begin() + static_cast<std::ptrdiff_t>(t * h));
    const double* g = gates.data() + t * g3;
    for (std::size_t j = 0; j < h; ++j) {
      z[j] = stable_sigmoid(g[j] + zr[j]);
      r[j] = stable_sigmoid(g[h + j] + zr[h + j]);
      rh[j] = r[j] * state[j];
    }
    std::fill(cand.begin(), cand.end(), 0.0);
    K.gemm_nn(1, h, h, rh, h, U + 2 * h, g3, cand.data(), h);
    double* nn = cache->n.data() + t * h;
    for (std::size_t j = 0; j < h; ++j) {
      nn[j] = std::tanh(g[2 * h + j] + cand[j]);
      state[j] = (1.0 - z[j]) * state[j] + z[j] * nn[j];
      out[t * h + j] = state[j];
    }
  }

  auto node = std::make_shared<Node>();
  node->shape = {T, h};
  node->value = std::move(out);
  const bool rg = x.requires_grad() || p.w.requires_grad() || p.u.requires_grad() || p.b.requires_grad();
  if (!rg) return Tensor(std::move(node));
  node->requires_grad = true;
  node->op = "gru";
  node->inputs = {x.node_ptr(), p.w.node_ptr(), p.u.node_ptr(), p.b.node_ptr()};
  node->backward = [cache, reverse](Node& self) {
    const auto& K = kern();
    Node& X = *self.inputs[0];
    Node& W = *self.inputs[1];
    Node& Uw = *self.inputs[2];
    Node& B = *self.inputs[3];
    const std::size_t T = cache->steps, d = cache->in, h = cache->hid, g3 = 3 * h;
    std::vector<double>& dg = cache->dgates;
    dg.assign(T * g3, 0.0);
    std::vector<double> carry(h, 0.0), dh(h), dhp(h), drh(h);
    const double* U = Uw.value.data();
    for (std::size_t s = T; s-- > 0;) {
      const std::size_t t = reverse ? T - 1 - s : s;
      const double* z = cache->z.data() + t * h;
      const double* r = cache->r.data() + t * h;
      const double* nn = cache->n.data() + t * h;
      const double* hp = cache->hprev.data() + t * h;
      double* g = dg.data() + t * g3;
      for (std::size_t j = 0; j < h; ++j) {
        dh[j] = self.grad[t * h + j] + carry[j];
        const double dz = dh[j] * (nn[j] - hp[j]);
        const double dn = dh[j] * z[j];
        dhp[j] = dh[j] * (1.0 - z[j]);
        g[2 * h + j] = dn * (1.0 - nn[j] * nn[j]);
        g[j] = dz * z[j] * (1.0 - z[j]);
      }
      std::fill(drh.begin(), drh.end(), 0.0);
      K.gemm_nt(1, h, h, g + 2 * h, h, U + 2 * h, g3, drh.data(), h);
      for (std::size_t j = 0; j < h; ++j) {
        g[h + j] = drh[j] * hp[j] * r[j] * (1.0 - r[j]);
        dhp[j] += drh[j] * r[j];
      }
      K.gemm_nt(1, h, 2 * h, g, g3, U, g3, dhp.data(), h);
      carry.swap(dhp);
    }
    if (wants(Uw)) {
      K.gemm_tn(h, 2 * h, T, cache->hprev.data(), h, dg.data(), g3, Uw.grad.data(), g3);
      K.gemm_tn(h, h, T, cache->rh.data(), h, dg.data() + 2 * h, g3, Uw.grad.data() + 2 * h, g3);
    }
    if (wants(W)) K.gemm_tn(d, g3, T, X.value.data(), d, dg.data(), g3, W.grad.data(), g3);
    if (wants(B))
      for (std::size_t t = 0; t < T; ++t)
        for (std::size_t j = 0; j < g3; ++j) B.grad[j] += dg[t * g3 + j];
    if (wants(X)) K.gemm_nt(T, d, g3, dg.data(), g3, W.value.data(), g3, X.grad.data(), d);
  };
  return Tensor(std::move(node));
}

Tensor bi_gru(const Tensor& x, const GruParams& forward, const GruParams& backward) {
  return concat({gru(x, forward, false), gru(x, backward, true)}, 1);
}

Tensor conv_maxpool(const Tensor& h, const std::vector<ConvBank>& banks) {
  require_rank("conv_maxpool", h, 2);
  const std::size_t T = h.dim(0), D = h.dim(1);
  if (banks.empty()) throw ShapeError("conv_maxpool: no filter banks");
  std::size_t total = 0, max_width = 0;
  for (const auto& bank : banks) {
    max_width = std::max(max_width, bank.width);
    if (bank.width == 0 || bank.kernel.rank() != 2 || bank.kernel.dim(0) != bank.width * D ||
        bank.bias.rank() != 1 || bank.bias.dim(0) != bank.kernel.dim(1))
      shape_fail("conv_maxpool", h.shape(), bank.kernel.shape());
    total += bank.kernel.dim(1);
  }
  if (T < max_width)
    throw ShapeError("conv_maxpool: sequence length " + std::to_string(T) + " shorter than filter width " +
                     std::to_string(max_width));

  std::vector<double> out(total);
  std::vector<std::size_t> argmax(total);
  std::size_t off = 0;
  std::vector<double> conv;
  for (const auto& bank : banks) {
    const std::size_t w = bank.width, F = bank.kernel.dim(1), L = T - w + 1;
    conv.assign(L * F, 0.0);
    // Row i of the window matrix is H[i..i+w) flattened, i.e. a stride-D view.
    kern().gemm_nn(L, F, w * D, h.values().data(), D, bank.kernel.values().data(), F, conv.data(), F);
    for (std::size_t f = 0; f < F; ++f) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < L; ++i)
        if (conv[i * F + f] > conv[best * F + f]) best = i;
      out[off + f] = conv[best * F + f] + bank.bias[f];
      argmax[off + f] = best;
    }
    off += F;
  }

  auto node = std::make_shared<Node>();
  node->shape = {total};
  node->value = std::move(out);
  bool rg = h.requires_grad();
  for (const auto& bank : banks) rg = rg || bank.kernel.requires_grad() || bank.bias.requires_grad();
  if (!rg) return Tensor(std::move(node));
  node->requires_grad = true;
  node->op = "conv_maxpool";
  node->inputs.push_back(h.node_ptr());
  std::vector<std::size_t> widths;
  for (const auto& bank : banks) {
    node->inputs.push_back(bank.kernel.node_ptr());
    node->inputs.push_back(bank.bias.node_ptr());
    widths.push_back(bank.width);
  }
  node->backward = [argmax = std::move(argmax), widths, D](Node& self) {
    Node& H = *self.inputs[0];
    std::size_t off = 0;
    for (std::size_t b = 0; b < widths.size(); ++b) {
      Node& Kn = *self.inputs[1 + 2 * b];
      Node& Bn = *self.inputs[2 + 2 * b];
      const std::size_t F = Kn.shape[1], rows = widths[b] * D;
      for (std::size_t f = 0; f < F; ++f) {
        const double g = self.grad[off + f];
        if (g == 0.0) continue;
        const std::size_t start = argmax[off + f] * D;
        if (wants(Bn)) Bn.grad[f] += g;
        for (std::size_t p = 0; p < rows; ++p) {
          if (wants(Kn)) Kn.grad[p * F + f] += g * H.value[start + p];
          if (wants(H)) H.grad[start + p] += g * Kn.value[p * F + f];
        }
      }
      off += F;
    }
  };
  return Tensor(std::move(node));
}

// ---- losses -----------------------------------------------------------------

Tensor cross_entropy(const Tensor& p, const Tensor& y) {
  if (p.shape() != y.shape() || p.rank() == 0) shape_fail("cross_entropy", p.shape(), y.shape());
  const std::size_t classes = p.shape().back();
  const std::size_t rows = p.size() / classes;
  static constexpr double kTiny = 1e-300;
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (y[i] != 0.0) total -= y[i] * std::log(std::max(p[i], kTiny));
  const double inv = 1.0 / static_cast<double>(rows);
  Tensor target = y.detach();
  return make_result({}, {total * inv}, {p}, "cross_entropy", [target, inv](Node& self) {
    Node& P = *self.inputs[0];
    const double g = self.grad[0];
    for (std::size_t i = 0; i < P.value.size(); ++i)
      if (target[i] != 0.0) P.grad[i] -= g * inv * target[i] / std::max(P.value[i], kTiny);
  });
}

Tensor mse(const Tensor& pred, const Tensor& target) {
  if (pred.shape() != target.shape() || pred.size() == 0) shape_fail("mse", pred.shape(), target.shape());
  double total = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double e = pred[i] - target[i];
    total += e * e;
  }
  const double inv = 1.0 / static_cast<double>(pred.size());
  return make_result({}, {total * inv}, {pred, target}, "mse", [inv](Node& self) {
    Node& P = *self.inputs[0];
    Node& Y = *self.inputs[1];
    const double g = self.grad[0];
    for (std::size_t i = 0; i < P.value.size(); ++i) {
      const double e = 2.0 * inv * g * (P.value[i] - Y.value[i]);
      if (wants(P)) P.grad[i] += e;
      if (wants(Y)) Y.grad[i] -= e;
    }
  });
}

Tensor tanimoto(const Tensor& pred, const Tensor& target, double eps) {
  if (pred.shape() != target.shape() || pred.rank() == 0) shape_fail("tanimoto", pred.shape(), target.shape());
  const std::size_t cols = pred.shape().back();
  const std::size_t rows = pred.size() / cols;
  std::vector<double> inner(rows), denom(rows);
  double total = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    double s = 0.0, l1 = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t i = r * cols + c;
      s += pred[i] * target[i];
      l1 += std::abs(pred[i] + target[i]);
    }
    inner[r] = s;
    denom[r] = l1 - s + eps;
    total += 1.0 - s / denom[r];
  }
  const double inv = 1.0 / static_cast<double>(rows);
  return make_result({}, {total * inv}, {pred, target}, "tanimoto",
                     [inner, denom, cols, inv](Node& self) {
                       Node& P = *self.inputs[0];
                       Node& Y = *self.inputs[1];
                       const double g = self.grad[0] * inv;
                       for (std::size_t r = 0; r < inner.size(); ++r) {
                         const double s = inner[r], den = denom[r], den2 = den * den;
                         for (std::size_t c = 0; c < cols; ++c) {
                           const std::size_t i = r * cols + c;
                           const double sum = P.value[i] + Y.value[i];
                           const double sgn = sum > 0 ? 1.0 : (sum < 0 ? -1.0 : 0.0);
                           // dL/dp_i = -(y_i * den - s * (sgn - y_i)) / den^2, symmetric in y.
                           if (wants(P)) P.grad[i] -= g * (Y.value[i] * den - s * (sgn - Y.value[i])) / den2;
                           if (wants(Y)) Y.grad[i] -= g * (P.value[i] * den - s * (sgn - P.value[i])) / den2;
                         }
                       }
                     });
}

}  // namespace ascnet::tensor
