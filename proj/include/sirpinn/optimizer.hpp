#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace sirpinn {

/// Adam accumulator state for one flat parameter array.
struct AdamState {
    std::vector<double> first_moment;
    std::vector<double> second_moment;
    long step_count = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    explicit AdamState(std::size_t n = 0) { resize(n); }
    void resize(std::size_t n) {
        first_moment.assign(n, 0.0);
        second_moment.assign(n, 0.0);
        step_count = 0;
    }
};

/// Bias-corrected Adam update, in place.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr);

/// Reduce-on-plateau learning rate: halves when no relative improvement
/// larger than min_delta is seen for `patience` consecutive observations.
struct LrSchedule {
    double current_lr = 1e-3;
    int patience = 100;
    double min_delta = 1e-4;  // relative improvement threshold
    double floor = 1e-5;

    double best = std::numeric_limits<double>::infinity();
    int stall = 0;

    /// Feed one epoch loss; returns the (possibly halved) learning rate.
    double observe(double epoch_loss);
};

}  // namespace sirpinn
