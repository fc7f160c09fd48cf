#include <alcir/kernels.hpp>
#include <alcir/tape.hpp>

#include <cmath>
#include <cstdio>
#include <utility>

namespace alcir {

namespace {

void warn_log_clamp() {
  static int warned = 0;
  if (warned < 3) {
    std::fprintf(stderr, "[alcir] warning: log argument clamped to 1e-12\n");
    ++warned;
  }
}

}  // namespace

Tape::Id Tape::push(Node node) {
  node.grad = Array::zeros(node.value.shape);
  nodes_.push_back(std::move(node));
  return static_cast<Id>(nodes_.size() - 1);
}

Tape::Node& Tape::at(Id id) {
  if (id >= nodes_.size()) throw DimensionError("tape node id out of range");
  return nodes_[id];
}

const Tape::Node& Tape::at(Id id) const {
  if (id >= nodes_.size()) throw DimensionError("tape node id out of range");
  return nodes_[id];
}

const Array& Tape::vec(Id id, const char* what) const {
  const Array& v = at(id).value;
  if (v.rank() != 1) throw DimensionError(std::string(what) + " expects a rank-1 node");
  return v;
}

Tape::Id Tape::input(Array value) {
  Node n;
  n.op = Op::input;
  n.value = std::move(value);
  return push(std::move(n));
}

Tape::Id Tape::param(const ParamStore& store, const std::string& path) {
  auto it = param_ids_.find(path);
  if (it != param_ids_.end()) return it->second;
  Node n;
  n.op = Op::param;
  n.value = store.at(path);
  n.path = path;
  const Id id = push(std::move(n));
  param_ids_.emplace(path, id);
  return id;
}

Tape::Id Tape::dense(Id weights, Id bias, Id x) {
  const Array& w = at(weights).value;
  const Array& b = vec(bias, "dense bias");
  const Array& in = vec(x, "dense input");
  if (w.rank() != 2) throw DimensionError("dense weights must be rank-2");
  if (w.cols() != in.size() || w.rows() != b.size()) {
    throw DimensionError("dense shapes do not agree");
  }
  Node n;
  n.op = Op::dense;
  n.a = weights;
  n.b = bias;
  n.c = x;
  n.value = Array::zeros({w.rows()});
  kernels::matvec(w.data(), in.data(), n.value.data(), w.rows(), w.cols());
  kernels::axpy(1.0, b.data(), n.value.data(), b.size());
  return push(std::move(n));
}

Tape::Id Tape::relu(Id x) {
  const Array& in = at(x).value;
  Node n;
  n.op = Op::relu;
  n.a = x;
  n.value = Array::zeros(in.shape);
  kernels::relu_forward(in.data(), n.value.data(), in.size());
  return push(std::move(n));
}

Tape::Id Tape::concat(const std::vector<Id>& parts) {
  if (parts.empty()) throw DimensionError("concat of zero parts");
  std::size_t total = 0;
  for (Id p : parts) total += vec(p, "concat part").size();
  Node n;
  n.op = Op::concat;
  n.inputs = parts;
  n.value = Array::zeros({total});
  std::size_t off = 0;
  for (Id p : parts) {
    const Array& v = at(p).value;
    for (std::size_t i = 0; i < v.size(); ++i) n.value[off + i] = v[i];
    off += v.size();
  }
  return push(std::move(n));
}

Tape::Id Tape::softmax(Id logits) {
  const Array& in = vec(logits, "softmax");
  if (in.size() == 0) throw DimensionError("softmax of empty vector");
  Node n;
  n.op = Op::softmax;
  n.a = logits;
  n.value = Array::zeros(in.shape);
  double mx = in[0];
  for (std::size_t i = 1; i < in.size(); ++i) mx = std::max(mx, in[i]);
  double total = 0.0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    n.value[i] = std::exp(in[i] - mx);
    total += n.value[i];
  }
  kernels::scale(1.0 / total, n.value.data(), n.value.size());
  return push(std::move(n));
}

Tape::Id Tape::pick(Id v, std::size_t index) {
  const Array& in = vec(v, "pick");
  if (index >= in.size()) throw DimensionError("pick index out of range");
  Node n;
  n.op = Op::pick;
  n.a = v;
  n.index = index;
  n.value = Array::scalar(in[index]);
  return push(std::move(n));
}

Tape::Id Tape::log(Id x) {
  const Array& in = at(x).value;
  Node n;
  n.op = Op::log_op;
  n.a = x;
  n.value = Array::zeros(in.shape);
  for (std::size_t i = 0; i < in.size(); ++i) {
    double v = in[i];
    if (v < kLogFloor) {
      warn_log_clamp();
      v = kLogFloor;
    }
    n.value[i] = std::log(v);
  }
  return push(std::move(n));
}

Tape::Id Tape::neg(Id x) {
  const Array& in = at(x).value;
  Node n;
  n.op = Op::neg;
  n.a = x;
  n.value = in;
  kernels::scale(-1.0, n.value.data(), n.value.size());
  return push(std::move(n));
}

Tape::Id Tape::add(Id a, Id b) {
  const Array& va = at(a).value;
  const Array& vb = at(b).value;
  if (!va.same_shape(vb)) throw DimensionError("add shape mismatch");
  Node n;
  n.op = Op::add;
  n.a = a;
  n.b = b;
  n.value = va;
  kernels::axpy(1.0, vb.data(), n.value.data(), vb.size());
  return push(std::move(n));
}

Tape::Id Tape::sub(Id a, Id b) {
  const Array& va = at(a).value;
  const Array& vb = at(b).value;
  if (!va.same_shape(vb)) throw DimensionError("sub shape mismatch");
  Node n;
  n.op = Op::sub;
  n.a = a;
  n.b = b;
  n.value = va;
  kernels::axpy(-1.0, vb.data(), n.value.data(), vb.size());
  return push(std::move(n));
}

Tape::Id Tape::add_const(Id x, double c) {
  Node n;
  n.op = Op::add_const;
  n.a = x;
  n.k = c;
  n.value = at(x).value;
  for (double& v : n.value.values) v += c;
  return push(std::move(n));
}

Tape::Id Tape::mul_const(Id x, double c) {
  Node n;
  n.op = Op::mul_const;
  n.a = x;
  n.k = c;
  n.value = at(x).value;
  kernels::scale(c, n.value.data(), n.value.size());
  return push(std::move(n));
}

Tape::Id Tape::sqrt(Id x) {
  const Array& in = at(x).value;
  Node n;
  n.op = Op::sqrt_op;
  n.a = x;
  n.value = Array::zeros(in.shape);
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in[i] < 0.0) throw NumericError("sqrt of a negative value");
    n.value[i] = std::sqrt(in[i]);
  }
  return push(std::move(n));
}

Tape::Id Tape::sum(Id x) {
  const Array& in = at(x).value;
  Node n;
  n.op = Op::sum;
  n.a = x;
  n.value = Array::scalar(kernels::sum(in.data(), in.size()));
  return push(std::move(n));
}

Tape::Id Tape::weighted_sum(const std::vector<Id>& scalars, const std::vector<double>& weights) {
  if (scalars.size() != weights.size() || scalars.empty()) {
    throw DimensionError("weighted_sum needs matching non-empty ids and weights");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < scalars.size(); ++i) {
    const Array& v = at(scalars[i]).value;
    if (v.size() != 1) throw DimensionError("weighted_sum expects scalar nodes");
    total += weights[i] * v[0];
  }
  Node n;
  n.op = Op::weighted_sum;
  n.inputs = scalars;
  n.weights = weights;
  n.value = Array::scalar(total);
  return push(std::move(n));
}

Tape::Id Tape::cosine(Id u, Id v) {
  const Array& a = vec(u, "cosine");
  const Array& b = vec(v, "cosine");
  if (a.size() != b.size()) throw DimensionError("cosine operands differ in width");
  const double na = std::sqrt(kernels::dot(a.data(), a.data(), a.size()));
  const double nb = std::sqrt(kernels::dot(b.data(), b.data(), b.size()));
  if (na == 0.0 || nb == 0.0) {
    throw DegenerateVectorError("cosine similarity of a zero-norm vector");
  }
  const double d = kernels::dot(a.data(), b.data(), a.size());
  double c = d / (na * nb);
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  Node n;
  n.op = Op::cosine;
  n.a = u;
  n.b = v;
  n.aux0 = na;
  n.aux1 = nb;
  n.aux2 = d;
  n.value = Array::scalar(c);
  return push(std::move(n));
}

Tape::Id Tape::squared_distance(Id a, Id b) {
  const Array& va = vec(a, "squared_distance");
  const Array& vb = vec(b, "squared_distance");
  if (va.size() != vb.size()) throw DimensionError("squared_distance operands differ in width");
  Node n;
  n.op = Op::squared_distance;
  n.a = a;
  n.b = b;
  n.value = Array::scalar(kernels::sum_squared_diff(va.data(), vb.data(), va.size()));
  return push(std::move(n));
}

Tape::Id Tape::embedding(Id table, std::size_t row) {
  const Array& t = at(table).value;
  if (t.rank() != 2) throw DimensionError("embedding table must be rank-2");
  if (row >= t.rows()) {
    throw DataError("embedding lookup out of range: row " + std::to_string(row) + " of " +
                    std::to_string(t.rows()));
  }
  Node n;
  n.op = Op::embedding;
  n.a = table;
  n.index = row;
  n.value = Array::zeros({t.cols()});
  for (std::size_t i = 0; i < t.cols(); ++i) n.value[i] = t[row * t.cols() + i];
  return push(std::move(n));
}

Tape::Id Tape::grad_reverse(Id x) {
  Node n;
  n.op = Op::grad_reverse;
  n.a = x;
  n.value = at(x).value;
  return push(std::move(n));
}

Tape::Id Tape::stop_gradient(Id x) {
  Node n;
  n.op = Op::stop_gradient;
  n.a = x;
  n.value = at(x).value;
  return push(std::move(n));
}

void Tape::backward(Id root) { backward(root, Array::scalar(1.0)); }

void Tape::backward(Id root, const Array& seed) {
  Node& r = at(root);
  if (!r.value.same_shape(seed)) throw DimensionError("backward seed shape mismatch");
  touched_.assign(nodes_.size(), 0);
  for (Node& n : nodes_) n.grad.fill(0.0);
  r.grad = seed;
  touched_[root] = 1;
  for (Id i = root + 1; i-- > 0;) {
    if (touched_[i]) propagate(i);
  }
}

void Tape::add_grad(Id id, const double* g, std::size_t n) {
  Node& node = nodes_[id];
  kernels::axpy(1.0, g, node.grad.data(), n);
  touched_[id] = 1;
}

void Tape::propagate(Id id) {
  Node& n = nodes_[id];
  const Array& gy = n.grad;
  switch (n.op) {
    case Op::input:
    case Op::param:
      break;
    case Op::dense: {
      const Array& w = nodes_[n.a].value;
      const Array& x = nodes_[n.c].value;
      Node& wn = nodes_[n.a];
      Node& bn = nodes_[n.b];
      Node& xn = nodes_[n.c];
      kernels::outer_accum(gy.data(), x.data(), wn.grad.data(), w.rows(), w.cols());
      kernels::axpy(1.0, gy.data(), bn.grad.data(), gy.size());
      kernels::matvec_transposed_accum(w.data(), gy.data(), xn.grad.data(), w.rows(), w.cols());
      touched_[n.a] = touched_[n.b] = touched_[n.c] = 1;
      break;
    }
    case Op::relu: {
      const Array& x = nodes_[n.a].value;
      kernels::relu_backward(x.data(), gy.data(), nodes_[n.a].grad.data(), x.size());
      touched_[n.a] = 1;
      break;
    }
    case Op::concat: {
      std::size_t off = 0;
      for (Id p : n.inputs) {
        const std::size_t w = nodes_[p].value.size();
        add_grad(p, gy.data() + off, w);
        off += w;
      }
      break;
    }
    case Op::softmax: {
      const Array& s = n.value;
      const double inner = kernels::dot(s.data(), gy.data(), s.size());
      Node& xn = nodes_[n.a];
      for (std::size_t i = 0; i < s.size(); ++i) {
        xn.grad[i] += s[i] * (gy[i] - inner);
      }
      touched_[n.a] = 1;
      break;
    }
    case Op::pick: {
      nodes_[n.a].grad[n.index] += gy[0];
      touched_[n.a] = 1;
      break;
    }
    case Op::log_op: {
      const Array& x = nodes_[n.a].value;
      Node& xn = nodes_[n.a];
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = x[i] < kLogFloor ? kLogFloor : x[i];
        xn.grad[i] += gy[i] / v;
      }
      touched_[n.a] = 1;
      break;
    }
    case Op::neg: {
      kernels::axpy(-1.0, gy.data(), nodes_[n.a].grad.data(), gy.size());
      touched_[n.a] = 1;
      break;
    }
    case Op::add: {
      add_grad(n.a, gy.data(), gy.size());
      add_grad(n.b, gy.data(), gy.size());
      break;
    }
    case Op::sub: {
      add_grad(n.a, gy.data(), gy.size());
      kernels::axpy(-1.0, gy.data(), nodes_[n.b].grad.data(), gy.size());
      touched_[n.b] = 1;
      break;
    }
    case Op::add_const: {
      add_grad(n.a, gy.data(), gy.size());
      break;
    }
    case Op::mul_const: {
      kernels::axpy(n.k, gy.data(), nodes_[n.a].grad.data(), gy.size());
      touched_[n.a] = 1;
      break;
    }
    case Op::sqrt_op: {
      const Array& y = n.value;
      Node& xn = nodes_[n.a];
      for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] > 0.0) xn.grad[i] += gy[i] / (2.0 * y[i]);
      }
      touched_[n.a] = 1;
      break;
    }
    case Op::sum: {
      Node& xn = nodes_[n.a];
      for (std::size_t i = 0; i < xn.grad.size(); ++i) xn.grad[i] += gy[0];
      touched_[n.a] = 1;
      break;
    }
    case Op::weighted_sum: {
      for (std::size_t i = 0; i < n.inputs.size(); ++i) {
        nodes_[n.inputs[i]].grad[0] += n.weights[i] * gy[0];
        touched_[n.inputs[i]] = 1;
      }
      break;
    }
    case Op::cosine: {
      const Array& a = nodes_[n.a].value;
      const Array& b = nodes_[n.b].value;
      const double na = n.aux0, nb = n.aux1, d = n.aux2;
      const double c = d / (na * nb);
      const double g = gy[0];
      Node& an = nodes_[n.a];
      Node& bn = nodes_[n.b];
      const double inv = 1.0 / (na * nb);
      const double ca = c / (na * na);
      const double cb = c / (nb * nb);
      for (std::size_t i = 0; i < a.size(); ++i) {
        an.grad[i] += g * (b[i] * inv - a[i] * ca);
        bn.grad[i] += g * (a[i] * inv - b[i] * cb);
      }
      touched_[n.a] = touched_[n.b] = 1;
      break;
    }
    case Op::squared_distance: {
      const Array& a = nodes_[n.a].value;
      const Array& b = nodes_[n.b].value;
      const double g2 = 2.0 * gy[0];
      Node& an = nodes_[n.a];
      Node& bn = nodes_[n.b];
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        an.grad[i] += g2 * d;
        bn.grad[i] -= g2 * d;
      }
      touched_[n.a] = touched_[n.b] = 1;
      break;
    }
    case Op::embedding: {
      Node& tn = nodes_[n.a];
      const std::size_t cols = tn.value.cols();
      kernels::axpy(1.0, gy.data(), tn.grad.data() + n.index * cols, cols);
      touched_[n.a] = 1;
      break;
    }
    case Op::grad_reverse: {
      kernels::axpy(-1.0, gy.data(), nodes_[n.a].grad.data(), gy.size());
      touched_[n.a] = 1;
      break;
    }
    case Op::stop_gradient:
      break;
  }
}

const Array& Tape::value(Id id) const { return at(id).value; }

const Array& Tape::grad(Id id) const { return at(id).grad; }

double Tape::scalar_value(Id id) const {
  const Array& v = at(id).value;
  if (v.size() != 1) throw DimensionError("scalar_value on a non-scalar node");
  return v[0];
}

std::map<std::string, const Array*> Tape::param_gradients() const {
  std::map<std::string, const Array*> out;
  for (const auto& [path, id] : param_ids_) out.emplace(path, &nodes_[id].grad);
  return out;
}

}  // namespace alcir
