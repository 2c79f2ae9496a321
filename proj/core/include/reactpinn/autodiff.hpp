// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "reactpinn/network.hpp"

namespace reactpinn {

/// Network output with its first and second derivatives with respect to each
/// input coordinate (pure seconds only; residuals in scope use no mixed
/// partials).
struct Jet {
  double value = 0;
  std::vector<double> d1;
  std::vector<double> d2;
};

/// Exact forward evaluation carrying input derivatives up to `order` (0..2).
/// Throws ConfigError on dimension mismatch and NumericError (naming the
/// layer) if an intermediate goes non-finite.
Jet evaluate_with_input_derivatives(const ParameterView& view,
                                    std::span<const double> input, int order);

// ---------------------------------------------------------------------------
// Recording tape. Values on the tape are truncated Taylor jets in up to two
// input directions, so a recorded scalar may contain input-derivative terms
// (e.g. a PDE residual); the reverse sweep then yields exact gradients with
// respect to every registered parameter, including parameters that only act
// through those derivative terms.
// ---------------------------------------------------------------------------

class Tape;

class Var {
 public:
  Var() = default;
  double value() const;
  Jet jet() const;
  /// Reverse sweep on the owning tape (see Tape::gradient).
  GradientMap gradient() const;

 private:
  friend class Tape;
  Var(Tape* tape, std::int32_t idx) : tape_(tape), idx_(idx) {}
  Tape* tape_ = nullptr;
  std::int32_t idx_ = -1;
  friend Var operator+(Var, Var);
  friend Var operator-(Var, Var);
  friend Var operator*(Var, Var);
  friend Var operator/(Var, Var);
  friend Var operator-(Var);
  friend Var exp(Var);
  friend Var log(Var);
  friend Var sin(Var);
  friend Var cos(Var);
  friend Var tanh(Var);
  friend Var sigmoid(Var);
  friend Var softplus(Var);
  friend Var relu(Var);
  friend Var sqr(Var);
  friend Var inv(Var);
  friend Var d1(Var, int);
  friend Var d2(Var, int);
};

class Tape {
 public:
  enum class Op : std::uint8_t {
    Const, Param, Input, Add, Sub, Mul, Neg, Inv,
    Exp, Log, Sin, Cos, Tanh, Sigmoid, Softplus, Relu, Sqr,
    ExtractD1, ExtractD2
  };

  /// n_dirs: number of input directions carried (0..2); order: highest input
  /// derivative carried (0..2).
  Tape(int n_dirs, int order);

  /// Fixes the number of parameter slots; param() outside [0,n) then throws.
  void declare_params(std::size_t n);

  Var constant(double v);
  /// Trainable leaf occupying flat slot `slot`.
  Var param(std::size_t slot, double value);
  /// Input leaf seeded with d/d(direction) = 1.
  Var input(double value, int direction);

  double value(Var v) const;
  Jet jet(Var v) const;

  /// Reverse sweep from a recorded scalar. Throws NumericError if the scalar
  /// is non-finite. The result has one entry per declared parameter slot.
  GradientMap gradient(Var loss) const;

  std::size_t size() const { return nodes_.size(); }
  int dirs() const { return n_dirs_; }
  int order() const { return order_; }

 private:
  friend class Var;
  friend Var operator+(Var, Var);
  friend Var operator-(Var, Var);
  friend Var operator*(Var, Var);
  friend Var operator/(Var, Var);
  friend Var operator-(Var);
  friend Var exp(Var);
  friend Var log(Var);
  friend Var sin(Var);
  friend Var cos(Var);
  friend Var tanh(Var);
  friend Var sigmoid(Var);
  friend Var softplus(Var);
  friend Var relu(Var);
  friend Var sqr(Var);
  friend Var inv(Var);
  friend Var d1(Var, int);
  friend Var d2(Var, int);

  struct JetVal {
    double v = 0;
    std::array<double, 2> g{0, 0};
    std::array<double, 2> h{0, 0};
  };
  struct Node {
    Op op;
    std::int32_t a = -1, b = -1;
    std::size_t slot = 0;
  };

  Var push_unary(Op op, Var a);
  Var push_binary(Op op, Var a, Var b);

  std::vector<Node> nodes_;
  std::vector<JetVal> vals_;
  int n_dirs_;
  int order_;
  std::size_t n_params_ = 0;
  bool params_declared_ = false;
};

Var operator+(Var a, Var b);
Var operator-(Var a, Var b);
Var operator*(Var a, Var b);
Var operator/(Var a, Var b);
Var operator-(Var a);
Var exp(Var a);
Var log(Var a);
Var sin(Var a);
Var cos(Var a);
Var tanh(Var a);
Var sigmoid(Var a);
Var softplus(Var a);
Var relu(Var a);
Var sqr(Var a);
Var inv(Var a);

/// Extracts the first (d1) or pure second (d2) input derivative of a recorded
/// value along direction k as a new scalar node. The extracted node carries no
/// input-derivative components of its own, so it must not be differentiated
/// with respect to inputs again; parameter gradients through it stay exact.
Var d1(Var a, int k);
Var d2(Var a, int k);

/// Convenience wrapper matching the contract "gradient of a recorded scalar".
GradientMap gradient_of_scalar(Var loss);

/// Records a ParameterView's parameters as tape leaves once, then replays
/// network forward passes per input point. Activations are recorded from
/// tape primitives so shape-parameter gradients flow exactly.
class TapeNetwork {
 public:
  TapeNetwork(Tape& tape, const ParameterView& view);

  /// Records one forward pass; fresh input leaves are created per call.
  Var output(std::span<const double> input);
  /// Leaf of a registered physical parameter.
  Var physical(const std::string& name) const;

  Tape& tape() { return *tape_; }

 private:
  Tape* tape_;
  const ParameterView* view_;
  std::vector<Var> leaves_;  // one per flat parameter slot
};

}  // namespace reactpinn
