#include <doctest.h>

#include <cmath>
#include <vector>

#include "sirpinn/dense_net.hpp"
#include "sirpinn/errors.hpp"
#include "sirpinn/optimizer.hpp"
#include "sirpinn/rng.hpp"

using namespace sirpinn;

namespace {

// Central finite differences on the network parameters; the independent
// oracle for every analytic gradient below.
std::vector<double> fd_value_grad(DenseNet net, double t, double h = 1e-6) {
    std::vector<double> g(net.param_count());
    auto theta = net.params();
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double keep = theta[k];
        theta[k] = keep + h;
        const double up = net.forward(t);
        theta[k] = keep - h;
        const double dn = net.forward(t);
        theta[k] = keep;
        g[k] = (up - dn) / (2.0 * h);
    }
    return g;
}

std::vector<double> fd_dinput_grad(DenseNet net, double t, double h = 1e-6) {
    std::vector<double> g(net.param_count());
    auto theta = net.params();
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double keep = theta[k];
        theta[k] = keep + h;
        const double up = net.dinput(t);
        theta[k] = keep - h;
        const double dn = net.dinput(t);
        theta[k] = keep;
        g[k] = (up - dn) / (2.0 * h);
    }
    return g;
}

void check_close(const std::vector<double>& got, const std::vector<double>& want, double rel,
                 double abs_tol) {
    REQUIRE(got.size() == want.size());
    for (std::size_t k = 0; k < got.size(); ++k) {
        const double tol = abs_tol + rel * std::abs(want[k]);
        CHECK(std::abs(got[k] - want[k]) <= tol);
    }
}

DenseNet one_neuron(double a, double c, OutputConstraint oc) {
    DenseNet net = DenseNet::glorot({1, 1, 1}, 7, oc);
    auto p = net.params();
    p[0] = a;   // W1
    p[1] = 0.0; // b1
    p[2] = c;   // W2
    p[3] = 0.0; // b2
    return net;
}

}  // namespace

TEST_CASE("glorot init is deterministic and bounded with zero biases") {
    const std::vector<int> arch = {1, 50, 50, 1};
    const DenseNet a = DenseNet::glorot(arch, 42);
    const DenseNet b = DenseNet::glorot(arch, 42);
    REQUIRE(a.param_count() == b.param_count());
    for (std::size_t k = 0; k < a.param_count(); ++k) CHECK(a.params()[k] == b.params()[k]);

    const DenseNet c = DenseNet::glorot(arch, 43);
    bool any_diff = false;
    for (std::size_t k = 0; k < a.param_count(); ++k) any_diff |= a.params()[k] != c.params()[k];
    CHECK(any_diff);

    // the 50->50 blocks stay within the glorot bound
    const double limit = std::sqrt(6.0 / 100.0);
    const std::size_t inner_begin = 50 + 50;  // after W1,b1
    for (std::size_t k = inner_begin; k < inner_begin + 2500; ++k) {
        CHECK(std::abs(a.params()[k]) <= limit);
    }
    // biases zero: W1(50) b1(50) W2(2500) b2(50)...
    for (std::size_t k = 50; k < 100; ++k) CHECK(a.params()[k] == 0.0);
}

TEST_CASE("glorot rejects bad architectures") {
    CHECK_THROWS_AS(DenseNet::glorot({1}, 1), InvalidArchitecture);
    CHECK_THROWS_AS(DenseNet::glorot({1, 0, 1}, 1), InvalidArchitecture);
    CHECK_THROWS_AS(DenseNet::glorot({2, 10, 1}, 1), InvalidArchitecture);
}

TEST_CASE("parameter counts") {
    CHECK(dense_param_count({1, 50, 50, 50, 50, 1}) == 7801);
    CHECK(dense_param_count({1, 5, 1}) == 16);
    CHECK(dense_param_count({1}) == 1);
}

TEST_CASE("forward of the zero network is zero") {
    DenseNet net = DenseNet::glorot({1, 8, 1}, 3, OutputConstraint::square);
    for (double& v : net.params()) v = 0.0;
    CHECK(net.forward(0.0) == 0.0);
    CHECK(net.forward(-3.7) == 0.0);
    CHECK(net.dinput(1.3) == 0.0);
}

TEST_CASE("single-neuron forward values") {
    const DenseNet plain = one_neuron(1.0, 1.0, OutputConstraint::none);
    CHECK(plain.forward(0.0) == 0.0);

    // squared output: choose t so the pre-output tanh equals -0.5
    const DenseNet squared = one_neuron(1.0, 1.0, OutputConstraint::square);
    const double t = std::atanh(-0.5);
    CHECK(squared.forward(t) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("single-neuron input derivative closed form") {
    const double a = 0.8, c = -1.3;
    const DenseNet net = one_neuron(a, c, OutputConstraint::none);
    for (double t : {-1.0, 0.0, 0.4, 2.0}) {
        const double th = std::tanh(a * t);
        CHECK(net.dinput(t) == doctest::Approx(c * a * (1.0 - th * th)).epsilon(1e-12));
    }
}

TEST_CASE("linear identity-activation net has gradient equal to the input") {
    DenseNet net = DenseNet::glorot({1, 1}, 5, OutputConstraint::none, Activation::identity);
    auto p = net.params();
    p[0] = 0.7;  // W
    p[1] = 0.0;  // b
    for (double t : {-2.0, 0.3, 1.7}) {
        std::vector<double> g(net.param_count(), 0.0);
        net.grad_params(t, 1.0, g);
        CHECK(g[0] == doctest::Approx(t).epsilon(1e-12));
        CHECK(g[1] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("zero upstream gives zero gradients") {
    const DenseNet net = DenseNet::glorot({1, 10, 10, 1}, 11);
    std::vector<double> g(net.param_count(), 0.0);
    net.grad_params(0.37, 0.0, g);
    for (double v : g) CHECK(v == 0.0);
}

TEST_CASE("parameter and input-derivative gradients match finite differences") {
    Rng rng(2024);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int width = 2 + static_cast<int>(rng.next_u64() % 5);
        const int depth = 1 + static_cast<int>(rng.next_u64() % 3);
        std::vector<int> arch = {1};
        for (int l = 0; l < depth; ++l) arch.push_back(width);
        arch.push_back(1);
        const auto oc = (trial % 2 == 0) ? OutputConstraint::square : OutputConstraint::none;
        DenseNet net = DenseNet::glorot(arch, 100 + static_cast<std::uint64_t>(trial), oc);
        for (double& v : net.params()) v += rng.uniform(-0.3, 0.3);  // break bias symmetry
        const double t = rng.uniform(-1.0, 1.5);

        const auto eval = net.eval_with_gradients(t);
        CHECK(eval.value == doctest::Approx(net.forward(t)).epsilon(1e-12));
        CHECK(eval.dvalue == doctest::Approx(net.dinput(t)).epsilon(1e-12));
        check_close(eval.value_grad, fd_value_grad(net, t), 1e-5, 1e-8);
        check_close(eval.dvalue_grad, fd_dinput_grad(net, t), 1e-5, 1e-6);
        ++checked;
    }
    CHECK(checked == 100);
}

TEST_CASE("dinput matches finite differences in t") {
    Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        DenseNet net = DenseNet::glorot({1, 12, 12, 1}, 500 + static_cast<std::uint64_t>(trial));
        const double t = rng.uniform(-0.5, 1.2);
        const double h = 1e-6;
        const double fd = (net.forward(t + h) - net.forward(t - h)) / (2.0 * h);
        CHECK(std::abs(net.dinput(t) - fd) <= 1e-6 + 1e-6 * std::abs(fd));
    }
}

TEST_CASE("squared output stays nonnegative under extrapolation") {
    const DenseNet net = DenseNet::glorot({1, 20, 20, 1}, 77, OutputConstraint::square);
    for (int k = 0; k <= 100; ++k) {
        const double t = -0.5 + 2.0 * k / 100.0;  // extends past the unit interval
        CHECK(net.forward(t) >= 0.0);
    }
}

TEST_CASE("batch gradients equal the sum of per-point gradients") {
    const DenseNet net = DenseNet::glorot({1, 9, 9, 1}, 13);
    Eigen::ArrayXd ts(4), sv(4), sd(4);
    ts << -0.2, 0.1, 0.6, 1.1;
    sv << 1.0, -0.5, 2.0, 0.25;
    sd << 0.5, 1.5, -1.0, 0.0;
    std::vector<double> batch_grad(net.param_count(), 0.0);
    const auto batch = net.eval_batch(ts, true);
    net.backward(batch, sv, &sd, batch_grad);
    std::vector<double> sum_grad(net.param_count(), 0.0);
    for (int j = 0; j < 4; ++j) {
        const auto e = net.eval_with_gradients(ts[j]);
        for (std::size_t k = 0; k < sum_grad.size(); ++k) {
            sum_grad[k] += sv[j] * e.value_grad[k] + sd[j] * e.dvalue_grad[k];
        }
    }
    check_close(batch_grad, sum_grad, 1e-12, 1e-12);
}

TEST_CASE("per-point gradient norms match explicit per-point gradients") {
    const DenseNet net = DenseNet::glorot({1, 7, 5, 1}, 21);
    Eigen::ArrayXd ts(3), sv(3), sd(3);
    ts << 0.0, 0.4, 0.9;
    sv << 1.0, 2.0, -1.0;
    sd << 0.0, -0.5, 1.0;
    const auto batch = net.eval_batch(ts, true);
    const Eigen::ArrayXd norms = net.per_point_grad_sqnorm(batch, sv, &sd);
    for (int j = 0; j < 3; ++j) {
        const auto e = net.eval_with_gradients(ts[j]);
        double expect = 0.0;
        for (std::size_t k = 0; k < net.param_count(); ++k) {
            const double g = sv[j] * e.value_grad[k] + sd[j] * e.dvalue_grad[k];
            expect += g * g;
        }
        CHECK(norms[j] == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("constant network behaves like a squared scalar") {
    DenseNet c = DenseNet::constant(0.775);
    CHECK(c.is_constant());
    CHECK(c.forward(0.0) == doctest::Approx(0.775 * 0.775));
    CHECK(c.forward(123.0) == c.forward(-5.0));
    CHECK(c.dinput(0.3) == 0.0);
    std::vector<double> g(1, 0.0);
    c.grad_params(0.1, 1.0, g);
    CHECK(g[0] == doctest::Approx(2.0 * 0.775));
}

TEST_CASE("snapshot json round-trips bit-exactly") {
    const DenseNet net = DenseNet::glorot({1, 6, 4, 1}, 3141, OutputConstraint::square);
    const auto j = net.to_json();
    const std::string text = j.dump();
    const DenseNet back = DenseNet::from_json(nlohmann::json::parse(text));
    REQUIRE(back.param_count() == net.param_count());
    for (std::size_t k = 0; k < net.param_count(); ++k) {
        CHECK(back.params()[k] == net.params()[k]);
    }
    CHECK(back.forward(0.37) == net.forward(0.37));
}

TEST_CASE("adam first step closed form") {
    std::vector<double> theta = {1.0};
    std::vector<double> grad = {1.0};
    AdamState st(1);
    adam_step(theta, grad, st, 0.001);
    const double expect = 1.0 - 0.001 / (1.0 + 1e-8);
    CHECK(theta[0] == doctest::Approx(expect).epsilon(1e-6));
    CHECK(st.step_count == 1);
}

TEST_CASE("adam with zero gradient leaves parameters unchanged") {
    std::vector<double> theta = {0.4, -0.7};
    std::vector<double> grad = {0.0, 0.0};
    AdamState st(2);
    st.first_moment = {0.5, 0.5};
    st.second_moment = {0.25, 0.25};
    for (int k = 0; k < 5; ++k) adam_step(theta, grad, st, 0.001);
    CHECK(theta[0] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(theta[1] == doctest::Approx(-0.7).epsilon(1e-12));
    CHECK(st.first_moment[0] < 0.5);  // moments decay toward zero
    CHECK(st.second_moment[0] < 0.25);
}

TEST_CASE("adam steps with constant gradient move about lr per step") {
    std::vector<double> theta = {0.0};
    std::vector<double> grad = {3.7};
    AdamState st(1);
    adam_step(theta, grad, st, 0.001);
    const double first = theta[0];
    adam_step(theta, grad, st, 0.001);
    CHECK(st.step_count == 2);
    CHECK(std::abs(first) == doctest::Approx(0.001).epsilon(1e-4));
    CHECK(std::abs(theta[0] - first) == doctest::Approx(0.001).epsilon(1e-3));
}

TEST_CASE("adam rejects mismatched shapes") {
    std::vector<double> theta = {0.0, 1.0};
    std::vector<double> grad = {1.0};
    AdamState st(2);
    CHECK_THROWS_AS(adam_step(theta, grad, st, 1e-3), ShapeMismatch);
}

TEST_CASE("plateau schedule halves only on stagnation") {
    LrSchedule sched;
    sched.patience = 10;
    double loss = 100.0;
    for (int e = 0; e < 50; ++e) {
        CHECK(sched.observe(loss) == 0.001);
        loss *= 0.9;  // steady improvement
    }
    LrSchedule flat;
    flat.patience = 10;
    for (int e = 0; e < 10; ++e) flat.observe(5.0);
    CHECK(flat.current_lr == 0.001);
    flat.observe(5.0);  // patience consecutive non-improvements reached
    CHECK(flat.current_lr == doctest::Approx(0.0005));
}

TEST_CASE("plateau schedule is monotone and floored") {
    LrSchedule sched;
    sched.patience = 3;
    double prev = sched.current_lr;
    for (int e = 0; e < 60; ++e) {
        const double lr = sched.observe(1.0);
        CHECK(lr <= prev);
        prev = lr;
    }
    CHECK(prev >= sched.floor);
    CHECK(prev == doctest::Approx(sched.floor));
}
