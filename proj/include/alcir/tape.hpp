#pragma once

#include <alcir/array.hpp>
#include <alcir/params.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace alcir {

// Reverse-mode tape over the op set the model needs. Nodes are recorded in
// forward order; backward() walks them in reverse and accumulates gradients
// into every node, including parameter leaves. A parameter path appearing in
// several places maps to one node, so its gradient accumulates naturally.
class Tape {
 public:
  using Id = std::uint32_t;
  static constexpr Id kNone = 0xffffffffu;
  static constexpr double kLogFloor = 1e-12;

  Id input(Array value);
  Id param(const ParamStore& store, const std::string& path);

  Id dense(Id weights, Id bias, Id x);  // [out,in] matrix, [out] bias, [in] input
  Id relu(Id x);
  Id concat(const std::vector<Id>& parts);
  Id softmax(Id logits);
  Id pick(Id v, std::size_t index);
  Id log(Id x);  // elementwise, clamps arguments below kLogFloor
  Id neg(Id x);
  Id add(Id a, Id b);
  Id sub(Id a, Id b);
  Id add_const(Id x, double c);
  Id mul_const(Id x, double c);
  Id sqrt(Id x);
  Id sum(Id x);
  Id weighted_sum(const std::vector<Id>& scalars, const std::vector<double>& weights);
  Id cosine(Id u, Id v);            // throws DegenerateVectorError on a zero norm
  Id squared_distance(Id a, Id b);  // sum of squared differences
  Id embedding(Id table, std::size_t row);
  // Identity forward, exact negation backward.
  Id grad_reverse(Id x);
  // Identity forward, blocks all gradient flow.
  Id stop_gradient(Id x);

  void backward(Id root);  // root must be a scalar node; seeds with 1.0
  void backward(Id root, const Array& seed);

  const Array& value(Id id) const;
  const Array& grad(Id id) const;  // zeros unless the last backward reached it
  double scalar_value(Id id) const;

  // Parameter gradients accumulated by the last backward, keyed by path.
  std::map<std::string, const Array*> param_gradients() const;

  std::size_t node_count() const { return nodes_.size(); }

 private:
  enum class Op : std::uint8_t {
    input,
    param,
    dense,
    relu,
    concat,
    softmax,
    pick,
    log_op,
    neg,
    add,
    sub,
    add_const,
    mul_const,
    sqrt_op,
    sum,
    weighted_sum,
    cosine,
    squared_distance,
    embedding,
    grad_reverse,
    stop_gradient,
  };

  struct Node {
    Array value;
    Array grad;
    Op op = Op::input;
    Id a = kNone;
    Id b = kNone;
    Id c = kNone;
    std::vector<Id> inputs;       // concat / weighted_sum
    std::size_t index = 0;        // pick / embedding
    double k = 0.0;               // add_const / mul_const
    std::vector<double> weights;  // weighted_sum
    double aux0 = 0.0, aux1 = 0.0, aux2 = 0.0;  // cosine caches: |u|, |v|, u.v
    std::string path;                           // param leaves
  };

  Id push(Node node);
  Node& at(Id id);
  const Node& at(Id id) const;
  const Array& vec(Id id, const char* what) const;  // rank-1 check
  void propagate(Id id);
  void add_grad(Id id, const double* g, std::size_t n);

  std::vector<Node> nodes_;
  std::vector<char> touched_;
  std::map<std::string, Id> param_ids_;
};

}  // namespace alcir
