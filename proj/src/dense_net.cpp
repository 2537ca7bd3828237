#include "sirpinn/dense_net.hpp"

#include <cmath>

#include "sirpinn/errors.hpp"
#include "sirpinn/rng.hpp"

namespace sirpinn {

namespace {

void apply_activation(Eigen::MatrixXd& z, Activation act) {
    if (act == Activation::identity) return;
    double* p = z.data();
    const Eigen::Index n = z.size();
    for (Eigen::Index i = 0; i < n; ++i) p[i] = std::tanh(p[i]);
}

}  // namespace

void DenseNet::build_layout() {
    w_off_.clear();
    b_off_.clear();
    if (is_constant()) return;
    std::ptrdiff_t off = 0;
    for (std::size_t l = 1; l < sizes_.size(); ++l) {
        w_off_.push_back(off);
        off += static_cast<std::ptrdiff_t>(sizes_[l]) * sizes_[l - 1];
        b_off_.push_back(off);
        off += sizes_[l];
    }
}

Eigen::Map<const Eigen::MatrixXd> DenseNet::weight(int layer) const {
    return {theta_.data() + w_off_[static_cast<std::size_t>(layer)],
            sizes_[static_cast<std::size_t>(layer) + 1], sizes_[static_cast<std::size_t>(layer)]};
}

Eigen::Map<const Eigen::VectorXd> DenseNet::bias(int layer) const {
    return {theta_.data() + b_off_[static_cast<std::size_t>(layer)],
            sizes_[static_cast<std::size_t>(layer) + 1]};
}

std::size_t dense_param_count(const std::vector<int>& layer_sizes) {
    if (layer_sizes.size() == 1) return 1;
    std::size_t n = 0;
    for (std::size_t l = 1; l < layer_sizes.size(); ++l) {
        n += static_cast<std::size_t>(layer_sizes[l]) * layer_sizes[l - 1] + layer_sizes[l];
    }
    return n;
}

DenseNet DenseNet::glorot(const std::vector<int>& layer_sizes, std::uint64_t seed,
                          OutputConstraint constraint, Activation activation) {
    if (layer_sizes.size() < 2) {
        throw InvalidArchitecture("need input and output layers; use constant() for scalars");
    }
    for (int n : layer_sizes) {
        if (n <= 0) throw InvalidArchitecture("layer sizes must be positive");
    }
    if (layer_sizes.front() != 1 || layer_sizes.back() != 1) {
        throw InvalidArchitecture("input and output widths must be 1");
    }
    DenseNet net;
    net.sizes_ = layer_sizes;
    net.act_ = activation;
    net.constraint_ = constraint;
    net.seed_ = seed;
    net.theta_.assign(dense_param_count(layer_sizes), 0.0);
    net.build_layout();
    Rng rng(seed);
    for (std::size_t l = 1; l < layer_sizes.size(); ++l) {
        const double limit = std::sqrt(6.0 / (layer_sizes[l - 1] + layer_sizes[l]));
        double* w = net.theta_.data() + net.w_off_[l - 1];
        const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(layer_sizes[l]) * layer_sizes[l - 1];
        for (std::ptrdiff_t i = 0; i < count; ++i) w[i] = rng.uniform(-limit, limit);
        // biases stay zero
    }
    return net;
}

DenseNet DenseNet::constant(double raw_value, OutputConstraint constraint) {
    DenseNet net;
    net.sizes_ = {1};
    net.constraint_ = constraint;
    net.theta_ = {raw_value};
    return net;
}

DenseNet::Batch DenseNet::eval_batch(const Eigen::ArrayXd& ts, bool with_tangent) const {
    const Eigen::Index P = ts.size();
    Batch b;
    b.with_tangent = with_tangent;
    if (is_constant()) {
        const double c = theta_[0];
        const double y = constraint_ == OutputConstraint::square ? c * c : c;
        b.pre = Eigen::RowVectorXd::Constant(P, c);
        b.pre_tan = Eigen::RowVectorXd::Zero(P);
        b.value = Eigen::RowVectorXd::Constant(P, y);
        b.dvalue = Eigen::RowVectorXd::Zero(P);
        return b;
    }
    const int L = n_hidden_layers();
    b.act.resize(static_cast<std::size_t>(L) + 1);
    b.act[0] = ts.transpose().matrix();
    if (with_tangent) {
        b.tan.resize(static_cast<std::size_t>(L) + 1);
        b.lin.resize(static_cast<std::size_t>(L) + 1);  // lin[0] unused
        b.tan[0] = Eigen::MatrixXd::Ones(1, P);
    }
    for (int l = 0; l < L; ++l) {
        const auto W = weight(l);
        Eigen::MatrixXd z = W * b.act[static_cast<std::size_t>(l)];
        z.colwise() += bias(l);
        apply_activation(z, act_);
        b.act[static_cast<std::size_t>(l) + 1] = std::move(z);
        if (with_tangent) {
            const auto& a = b.act[static_cast<std::size_t>(l) + 1];
            b.lin[static_cast<std::size_t>(l) + 1].noalias() = W * b.tan[static_cast<std::size_t>(l)];
            const auto& t = b.lin[static_cast<std::size_t>(l) + 1];
            if (act_ == Activation::tanh) {
                b.tan[static_cast<std::size_t>(l) + 1] =
                    ((1.0 - a.array().square()) * t.array()).matrix();
            } else {
                b.tan[static_cast<std::size_t>(l) + 1] = t;
            }
        }
    }
    const auto Wout = weight(L);
    b.pre = (Wout * b.act[static_cast<std::size_t>(L)]).row(0);
    b.pre.array() += bias(L)(0);
    if (constraint_ == OutputConstraint::square) {
        b.value = b.pre.array().square().matrix();
    } else {
        b.value = b.pre;
    }
    if (with_tangent) {
        b.pre_tan = (Wout * b.tan[static_cast<std::size_t>(L)]).row(0);
        if (constraint_ == OutputConstraint::square) {
            b.dvalue = (2.0 * b.pre.array() * b.pre_tan.array()).matrix();
        } else {
            b.dvalue = b.pre_tan;
        }
    }
    return b;
}

void DenseNet::backward(const Batch& batch, const Eigen::ArrayXd& seed_v,
                        const Eigen::ArrayXd* seed_d, std::span<double> grad) const {
    if (grad.size() != theta_.size()) throw ShapeMismatch("gradient buffer size mismatch");
    if (seed_d && !batch.with_tangent) {
        throw ShapeMismatch("tangent seed given but batch was evaluated without tangent");
    }
    const Eigen::Index P = batch.points();
    if (seed_v.size() != P || (seed_d && seed_d->size() != P)) {
        throw ShapeMismatch("seed length does not match batch size");
    }
    if (is_constant()) {
        // value = g(c); dvalue = 0 has no parameter dependence.
        const double c = theta_[0];
        const double gp = constraint_ == OutputConstraint::square ? 2.0 * c : 1.0;
        grad[0] += gp * seed_v.sum();
        return;
    }
    const int L = n_hidden_layers();
    // seeds on the pre-constraint output v and its tangent
    Eigen::RowVectorXd vbar, ubar;
    if (constraint_ == OutputConstraint::square) {
        vbar = (2.0 * batch.pre.array() * seed_v.transpose()).matrix();
        if (seed_d) {
            vbar.array() += 2.0 * batch.pre_tan.array() * seed_d->transpose();
            ubar = (2.0 * batch.pre.array() * seed_d->transpose()).matrix();
        }
    } else {
        vbar = seed_v.matrix().transpose();
        if (seed_d) ubar = seed_d->matrix().transpose();
    }
    const bool tang = seed_d != nullptr;

    const auto Wout = weight(L);
    {
        Eigen::Map<Eigen::MatrixXd> Wg(grad.data() + w_off_[static_cast<std::size_t>(L)], 1,
                                       sizes_[static_cast<std::size_t>(L)]);
        Wg.noalias() += vbar * batch.act[static_cast<std::size_t>(L)].transpose();
        if (tang) Wg.noalias() += ubar * batch.tan[static_cast<std::size_t>(L)].transpose();
        grad[static_cast<std::size_t>(b_off_[static_cast<std::size_t>(L)])] += vbar.sum();
    }
    Eigen::MatrixXd abar = Wout.transpose() * vbar;
    Eigen::MatrixXd ubar_m;
    if (tang) ubar_m = Wout.transpose() * ubar;

    for (int l = L - 1; l >= 0; --l) {
        const auto& a = batch.act[static_cast<std::size_t>(l) + 1];
        const Eigen::ArrayXXd phi1 = 1.0 - a.array().square();
        Eigen::MatrixXd zbar;
        Eigen::MatrixXd gmat;  // ubar ⊙ phi'
        if (act_ == Activation::tanh) {
            zbar = (abar.array() * phi1).matrix();
            if (tang) {
                const auto& t = batch.lin[static_cast<std::size_t>(l) + 1];
                // phi'' ⊙ (W u) = -2 a (1 - a^2) ⊙ t
                zbar.array() += ubar_m.array() * (-2.0 * a.array() * phi1) * t.array();
                gmat = (ubar_m.array() * phi1).matrix();
            }
        } else {
            zbar = abar;
            if (tang) gmat = ubar_m;
        }
        const auto W = weight(l);
        const int nl = sizes_[static_cast<std::size_t>(l) + 1];
        const int nprev = sizes_[static_cast<std::size_t>(l)];
        Eigen::Map<Eigen::MatrixXd> Wg(grad.data() + w_off_[static_cast<std::size_t>(l)], nl, nprev);
        Wg.noalias() += zbar * batch.act[static_cast<std::size_t>(l)].transpose();
        if (tang) Wg.noalias() += gmat * batch.tan[static_cast<std::size_t>(l)].transpose();
        Eigen::Map<Eigen::VectorXd> bg(grad.data() + b_off_[static_cast<std::size_t>(l)], nl);
        bg.noalias() += zbar.rowwise().sum();
        if (l > 0) {
            abar.noalias() = W.transpose() * zbar;
            if (tang) ubar_m = W.transpose() * gmat;
        }
    }
}

Eigen::ArrayXd DenseNet::per_point_grad_sqnorm(const Batch& batch, const Eigen::ArrayXd& seed_v,
                                               const Eigen::ArrayXd* seed_d) const {
    const Eigen::Index P = batch.points();
    Eigen::ArrayXd out = Eigen::ArrayXd::Zero(P);
    if (is_constant()) {
        const double c = theta_[0];
        const double gp = constraint_ == OutputConstraint::square ? 2.0 * c : 1.0;
        out = (seed_v * gp).square();
        return out;
    }
    const int L = n_hidden_layers();
    Eigen::RowVectorXd vbar, ubar;
    if (constraint_ == OutputConstraint::square) {
        vbar = (2.0 * batch.pre.array() * seed_v.transpose()).matrix();
        if (seed_d) {
            vbar.array() += 2.0 * batch.pre_tan.array() * seed_d->transpose();
            ubar = (2.0 * batch.pre.array() * seed_d->transpose()).matrix();
        }
    } else {
        vbar = seed_v.matrix().transpose();
        if (seed_d) ubar = seed_d->matrix().transpose();
    }
    const bool tang = seed_d != nullptr;

    // Per point, the weight gradient of layer l is a sum of at most two
    // outer products, so its squared norm reduces to column norms and dots.
    const auto rank2_sqnorm = [&out](const Eigen::MatrixXd& x1, const Eigen::MatrixXd& y1,
                                     const Eigen::MatrixXd* x2, const Eigen::MatrixXd* y2) {
        out += x1.colwise().squaredNorm().array().transpose() *
               y1.colwise().squaredNorm().array().transpose();
        if (x2) {
            out += 2.0 * (x1.array() * x2->array()).colwise().sum().transpose() *
                   (y1.array() * y2->array()).colwise().sum().transpose() +
                   x2->colwise().squaredNorm().array().transpose() *
                       y2->colwise().squaredNorm().array().transpose();
        }
    };

    const auto Wout = weight(L);
    {
        const auto& aL = batch.act[static_cast<std::size_t>(L)];
        if (tang) {
            const auto& uL = batch.tan[static_cast<std::size_t>(L)];
            rank2_sqnorm(vbar, aL, &ubar, &uL);
        } else {
            rank2_sqnorm(vbar, aL, nullptr, nullptr);
        }
        out += vbar.array().square().transpose();  // output bias
    }
    Eigen::MatrixXd abar = Wout.transpose() * vbar;
    Eigen::MatrixXd ubar_m;
    if (tang) ubar_m = Wout.transpose() * ubar;

    for (int l = L - 1; l >= 0; --l) {
        const auto& a = batch.act[static_cast<std::size_t>(l) + 1];
        const Eigen::ArrayXXd phi1 = 1.0 - a.array().square();
        Eigen::MatrixXd zbar;
        Eigen::MatrixXd gmat;
        if (act_ == Activation::tanh) {
            zbar = (abar.array() * phi1).matrix();
            if (tang) {
                const auto& t = batch.lin[static_cast<std::size_t>(l) + 1];
                zbar.array() += ubar_m.array() * (-2.0 * a.array() * phi1) * t.array();
                gmat = (ubar_m.array() * phi1).matrix();
            }
        } else {
            zbar = abar;
            if (tang) gmat = ubar_m;
        }
        if (tang) {
            rank2_sqnorm(zbar, batch.act[static_cast<std::size_t>(l)], &gmat,
                         &batch.tan[static_cast<std::size_t>(l)]);
        } else {
            rank2_sqnorm(zbar, batch.act[static_cast<std::size_t>(l)], nullptr, nullptr);
        }
        out += zbar.colwise().squaredNorm().array().transpose();  // biases
        if (l > 0) {
            const auto W = weight(l);
            abar = W.transpose() * zbar;
            if (tang) ubar_m = W.transpose() * gmat;
        }
    }
    return out;
}

double DenseNet::forward(double t) const {
    Eigen::ArrayXd ts(1);
    ts << t;
    return eval_batch(ts, false).value(0);
}

double DenseNet::dinput(double t) const {
    Eigen::ArrayXd ts(1);
    ts << t;
    return eval_batch(ts, true).dvalue(0);
}

DenseNet::PointEval DenseNet::eval_with_gradients(double t) const {
    Eigen::ArrayXd ts(1);
    ts << t;
    const Batch b = eval_batch(ts, true);
    PointEval out;
    out.value = b.value(0);
    out.dvalue = b.dvalue(0);
    out.value_grad.assign(theta_.size(), 0.0);
    out.dvalue_grad.assign(theta_.size(), 0.0);
    Eigen::ArrayXd one = Eigen::ArrayXd::Ones(1), zero = Eigen::ArrayXd::Zero(1);
    backward(b, one, &zero, out.value_grad);
    backward(b, zero, &one, out.dvalue_grad);
    return out;
}

void DenseNet::grad_params(double t, double upstream, std::span<double> grad) const {
    Eigen::ArrayXd ts(1);
    ts << t;
    const Batch b = eval_batch(ts, false);
    Eigen::ArrayXd seed(1);
    seed << upstream;
    backward(b, seed, nullptr, grad);
}

nlohmann::json DenseNet::to_json() const {
    return {{"layer_sizes", sizes_},
            {"activation", act_ == Activation::tanh ? "tanh" : "identity"},
            {"output_constraint", constraint_ == OutputConstraint::square ? "square" : "none"},
            {"seed", seed_},
            {"params", theta_}};
}

DenseNet DenseNet::from_json(const nlohmann::json& j) {
    DenseNet net;
    net.sizes_ = j.at("layer_sizes").get<std::vector<int>>();
    const std::string act = j.at("activation").get<std::string>();
    net.act_ = act == "identity" ? Activation::identity : Activation::tanh;
    const std::string oc = j.at("output_constraint").get<std::string>();
    net.constraint_ = oc == "none" ? OutputConstraint::none : OutputConstraint::square;
    net.seed_ = j.at("seed").get<std::uint64_t>();
    net.theta_ = j.at("params").get<std::vector<double>>();
    if (net.theta_.size() != dense_param_count(net.sizes_)) {
        throw ShapeMismatch("snapshot parameter count does not match architecture");
    }
    net.build_layout();
    return net;
}

}  // namespace sirpinn
