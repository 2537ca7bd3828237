#include "sirpinn/optimizer.hpp"

#include <cmath>

#include "sirpinn/errors.hpp"

namespace sirpinn {

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr) {
    const std::size_t n = params.size();
    if (grads.size() != n || state.first_moment.size() != n) {
        throw ShapeMismatch("adam_step: parameter/gradient/state sizes differ");
    }
    state.step_count += 1;
    const double b1 = state.beta1, b2 = state.beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(state.step_count));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(state.step_count));
    for (std::size_t i = 0; i < n; ++i) {
        const double g = grads[i];
        double& m = state.first_moment[i];
        double& v = state.second_moment[i];
        m = b1 * m + (1.0 - b1) * g;
        v = b2 * v + (1.0 - b2) * g * g;
        const double mhat = m / c1;
        const double vhat = v / c2;
        params[i] -= lr * mhat / (std::sqrt(vhat) + state.epsilon);
    }
}

double LrSchedule::observe(double epoch_loss) {
    const double scale = std::abs(best);
    const bool improved =
        !std::isfinite(best) ||
        (best - epoch_loss) > min_delta * (scale > 0.0 ? scale : 1.0);
    if (improved) {
        best = epoch_loss;
        stall = 0;
    } else {
        ++stall;
        if (stall >= patience) {
            current_lr = std::max(current_lr * 0.5, floor);
            stall = 0;
        }
    }
    return current_lr;
}

}  // namespace sirpinn
