#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sirpinn/vendor_json.hpp"

namespace sirpinn {

enum class Activation { tanh, identity };
enum class OutputConstraint { square, none };

/// Scalar-input, scalar-output dense network with an optional squared output
/// (hard non-negativity) and exact derivatives:
///
///  - forward(t): the network value
///  - dinput(t):  d(value)/dt, propagated as a tangent alongside the forward
///    pass
///  - backward(): parameter gradients of any per-point linear combination
///    seed_v * value + seed_d * dinput, accumulated over a batch
///
/// Evaluations are batched column-wise so layer operations are matrix-matrix
/// products. A degenerate "constant" network (no layers, one squared scalar)
/// is supported so constant coefficients share the optimizer path.
///
/// Parameters live in one flat array laid out [W1, b1, W2, b2, ...] in Eigen
/// storage order. A network value is immutable during evaluation.
class DenseNet {
public:
    DenseNet() = default;

    /// Glorot-uniform weights (±sqrt(6/(n_in+n_out))), zero biases,
    /// deterministic in the seed.
    static DenseNet glorot(const std::vector<int>& layer_sizes, std::uint64_t seed,
                           OutputConstraint constraint = OutputConstraint::square,
                           Activation activation = Activation::tanh);

    /// Single trainable scalar behind the output constraint; ignores the input.
    static DenseNet constant(double raw_value,
                             OutputConstraint constraint = OutputConstraint::square);

    bool is_constant() const { return sizes_.size() == 1; }
    int n_hidden_layers() const { return is_constant() ? 0 : static_cast<int>(sizes_.size()) - 2; }
    const std::vector<int>& layer_sizes() const { return sizes_; }
    OutputConstraint constraint() const { return constraint_; }
    Activation activation() const { return act_; }
    std::uint64_t init_seed() const { return seed_; }

    std::size_t param_count() const { return theta_.size(); }
    std::span<double> params() { return theta_; }
    std::span<const double> params() const { return theta_; }

    double forward(double t) const;
    double dinput(double t) const;

    /// Cached state of a batched tangent-augmented forward pass.
    struct Batch {
        Eigen::RowVectorXd value;    // y_i (post-constraint)
        Eigen::RowVectorXd dvalue;   // dy_i/dt (filled when with_tangent)
        bool with_tangent = false;
        // internals for the reverse pass
        Eigen::RowVectorXd pre;      // pre-constraint output v
        Eigen::RowVectorXd pre_tan;  // tangent of v
        std::vector<Eigen::MatrixXd> act;   // A_0..A_L, A_0 = inputs (1 x P)
        std::vector<Eigen::MatrixXd> tan;   // U_0..U_L
        std::vector<Eigen::MatrixXd> lin;   // W_l U_{l-1} per hidden layer
        Eigen::Index points() const { return value.cols(); }
    };

    Batch eval_batch(const Eigen::ArrayXd& ts, bool with_tangent) const;

    /// Accumulates sum_i [seed_v_i * d(value_i)/dtheta + seed_d_i * d(dvalue_i)/dtheta]
    /// into grad (length param_count). seed_d may be null for value-only seeds.
    void backward(const Batch& batch, const Eigen::ArrayXd& seed_v,
                  const Eigen::ArrayXd* seed_d, std::span<double> grad) const;

    /// Per-point squared parameter-gradient norms of the same seeded
    /// combination; used for kernel-trace estimates without materializing
    /// per-point gradients.
    Eigen::ArrayXd per_point_grad_sqnorm(const Batch& batch, const Eigen::ArrayXd& seed_v,
                                         const Eigen::ArrayXd* seed_d) const;

    /// Point-wise API: value, input derivative, and parameter gradients of both.
    struct PointEval {
        double value = 0.0;
        double dvalue = 0.0;
        std::vector<double> value_grad;
        std::vector<double> dvalue_grad;
    };
    PointEval eval_with_gradients(double t) const;

    /// Accumulates upstream * d(value)/dtheta for a single point.
    void grad_params(double t, double upstream, std::span<double> grad) const;

    nlohmann::json to_json() const;
    static DenseNet from_json(const nlohmann::json& j);

private:
    void build_layout();
    Eigen::Map<const Eigen::MatrixXd> weight(int layer) const;
    Eigen::Map<const Eigen::VectorXd> bias(int layer) const;

    std::vector<int> sizes_;  // {1, hidden..., 1}; {1} marks a constant
    Activation act_ = Activation::tanh;
    OutputConstraint constraint_ = OutputConstraint::square;
    std::uint64_t seed_ = 0;
    std::vector<double> theta_;
    std::vector<std::ptrdiff_t> w_off_, b_off_;
};

/// Parameter count of a glorot architecture without building it.
std::size_t dense_param_count(const std::vector<int>& layer_sizes);

}  // namespace sirpinn
