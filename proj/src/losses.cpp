#include "sirpinn/losses.hpp"

#include <cmath>

#include "sirpinn/errors.hpp"

namespace sirpinn {

using Eigen::ArrayXd;

LossWeights LossWeights::from_vector(const std::vector<double>& v) {
    if (v.size() != count) throw ShapeMismatch("LossWeights needs 7 values");
    LossWeights w;
    w.data = v[0];
    w.ode_s = v[1];
    w.ode_i = v[2];
    w.ode_r = v[3];
    w.ic_s = v[4];
    w.ic_i = v[5];
    w.ic_r = v[6];
    return w;
}

const char* LossWeights::name(int k) {
    static const char* names[] = {"w_data", "w_ode_s", "w_ode_i", "w_ode_r",
                                  "w_ic_s", "w_ic_i", "w_ic_r"};
    return names[k];
}

namespace {

void require_same_length(const ArrayXd& a, const ArrayXd& b, const char* what) {
    if (a.size() != b.size()) throw LengthMismatch(std::string(what) + ": lengths differ");
}

double mean_sq(const ArrayXd& r) { return r.square().mean(); }

ArrayXd floored(const ArrayXd& sigma) { return sigma.max(kSigmaFloor); }

}  // namespace

void check_sigma(const Eigen::ArrayXd& sigma) {
    if ((sigma < kSigmaFloor).any()) {
        throw SigmaUnderflow("hospitalization fraction below floor at an evaluated point");
    }
}

ArrayXd full_residual_s(const Series& s, const Series& i, const ArrayXd& beta, double c1) {
    return s.dvalue + c1 * beta * i.value * s.value;
}

ArrayXd full_residual_i(const Series& s, const Series& i, const ArrayXd& beta, double c1,
                        double c2) {
    return i.dvalue - c1 * beta * i.value * s.value + c2 * i.value;
}

ArrayXd full_residual_r(const Series& s, const Series& i, double c2) {
    return -i.dvalue - s.dvalue - c2 * i.value;
}

ArrayXd reduced_residual(const Series& i, const ArrayXd& rt, double c2) {
    return i.dvalue - c2 * (rt - 1.0) * i.value;
}

ArrayXd hosp_link_residual(const ArrayXd& dh, const ArrayXd& sigma, const ArrayXd& i,
                           double link) {
    return dh - link * sigma * i;
}

ArrayXd infection_link_residual(const ArrayXd& di, const ArrayXd& rt, const ArrayXd& i,
                                double delta) {
    return di - delta * rt * i;
}

ArrayXd infected_from_hosp(const ArrayXd& dh, const ArrayXd& sigma, const ModelParams& p,
                           const ScalingConstants& sc) {
    return dh / (sc.hosp_link(p) * floored(sigma));
}

ArrayXd daily_infections_from_hosp(const ArrayXd& dh, const ArrayXd& sigma, const ArrayXd& rt,
                                   const ModelParams& p, const ScalingConstants& sc) {
    return (sc.hosp_scale / sc.count_scale) * rt * dh / floored(sigma);
}

ArrayXd hosp_quotient_residual(const Series& dh, const Series& sigma, const ArrayXd& rt,
                               const ModelParams& p, const ScalingConstants& sc) {
    const ArrayXd sig = floored(sigma.value);
    const ArrayXd quot = dh.value / sig;
    // d/dt (dh/sigma) by the quotient rule on the two exact tangents
    const ArrayXd dquot = (dh.dvalue * sig - dh.value * sigma.dvalue) / sig.square();
    const double ratio = sc.hosp_scale / sc.count_scale;
    return ratio * (dquot / p.removal_rate - p.window() * (rt - 1.0) * quot);
}

double data_loss(const ArrayXd& predicted, const ArrayXd& observed, double omega) {
    require_same_length(predicted, observed, "data_loss");
    return omega * mean_sq(predicted - observed);
}

double full_ode_loss(const Series& s, const Series& i, const ArrayXd& beta,
                     const LossWeights& w, double c1, double c2) {
    require_same_length(s.value, i.value, "full_ode_loss");
    require_same_length(s.value, beta, "full_ode_loss");
    return w.ode_s * mean_sq(full_residual_s(s, i, beta, c1)) +
           w.ode_i * mean_sq(full_residual_i(s, i, beta, c1, c2)) +
           w.ode_r * mean_sq(full_residual_r(s, i, c2));
}

double ic_loss(double s0, double i0, const ModelParams& p, const ScalingConstants& sc,
               const LossWeights& w) {
    const double s_target = (p.population - p.initial_infected) / sc.count_scale;
    const double i_target = p.initial_infected / sc.count_scale;
    const double r0 = p.population / sc.count_scale - s0 - i0;
    const double ds = s0 - s_target;
    const double di = i0 - i_target;
    return w.ic_s * ds * ds + w.ic_i * di * di + w.ic_r * r0 * r0;
}

double full_joint_loss(const ArrayXd& pred_at_data, const ArrayXd& observed, const Series& s,
                       const Series& i, const ArrayXd& beta, double s0, double i0,
                       const ModelParams& p, const ScalingConstants& sc, const LossWeights& w) {
    return data_loss(pred_at_data, observed, w.data) +
           full_ode_loss(s, i, beta, w, sc.c1(p), sc.c2(p)) + ic_loss(s0, i0, p, sc, w);
}

double full_split_loss(const Series& s, const Series& i_frozen, const ArrayXd& beta, double s0,
                       double i0_frozen, const ModelParams& p, const ScalingConstants& sc,
                       const LossWeights& w) {
    return full_ode_loss(s, i_frozen, beta, w, sc.c1(p), sc.c2(p)) +
           ic_loss(s0, i0_frozen, p, sc, w);
}

double reduced_ode_loss(const Series& i, const ArrayXd& rt, const ModelParams& p) {
    require_same_length(i.value, rt, "reduced_ode_loss");
    return mean_sq(reduced_residual(i, rt, p.window() * p.removal_rate));
}

double reduced_joint_loss(const ArrayXd& pred_at_data, const ArrayXd& observed, const Series& i,
                          const ArrayXd& rt, const ModelParams& p) {
    return data_loss(pred_at_data, observed) + reduced_ode_loss(i, rt, p);
}

double reduced_split_loss(const Series& i_frozen, const ArrayXd& rt, const ModelParams& p) {
    return reduced_ode_loss(i_frozen, rt, p);
}

double hosp_data_loss(const ArrayXd& dh_pred, const ArrayXd& dh_obs) {
    return data_loss(dh_pred, dh_obs);
}

double hosp_ode_loss(const Series& i, const ArrayXd& rt, const ArrayXd& dh, const ArrayXd& sigma,
                     const ModelParams& p, const ScalingConstants& sc) {
    require_same_length(dh, sigma, "hosp_ode_loss");
    require_same_length(dh, i.value, "hosp_ode_loss");
    return reduced_ode_loss(i, rt, p) +
           mean_sq(hosp_link_residual(dh, sigma, i.value, sc.hosp_link(p)));
}

double hosp_joint_loss(const ArrayXd& i_pred_at_data, const ArrayXd& i_obs,
                       const ArrayXd& dh_pred_at_data, const ArrayXd& dh_obs, const Series& i,
                       const ArrayXd& rt, const ArrayXd& dh, const ArrayXd& sigma,
                       const ModelParams& p, const ScalingConstants& sc) {
    return data_loss(i_pred_at_data, i_obs) + hosp_data_loss(dh_pred_at_data, dh_obs) +
           hosp_ode_loss(i, rt, dh, sigma, p, sc);
}

double hosp_split_loss(const ArrayXd& dh_at_data, const ArrayXd& sigma_at_data,
                       const ArrayXd& i_obs, const Series& dh_c, const Series& sigma_c,
                       const ArrayXd& rt_c, const ModelParams& p, const ScalingConstants& sc) {
    check_sigma(sigma_at_data);
    check_sigma(sigma_c.value);
    const ArrayXd implied = infected_from_hosp(dh_at_data, sigma_at_data, p, sc);
    return data_loss(implied, i_obs) +
           mean_sq(hosp_quotient_residual(dh_c, sigma_c, rt_c, p, sc));
}

double infection_data_loss(const ArrayXd& di_pred, const ArrayXd& di_obs) {
    return data_loss(di_pred, di_obs);
}

double hosp_infection_ode_loss(const Series& i, const ArrayXd& rt, const ArrayXd& dh,
                               const ArrayXd& di, const ArrayXd& sigma, const ModelParams& p,
                               const ScalingConstants& sc) {
    require_same_length(dh, di, "hosp_infection_ode_loss");
    return hosp_ode_loss(i, rt, dh, sigma, p, sc) +
           mean_sq(infection_link_residual(di, rt, i.value, p.removal_rate));
}

double hosp_infection_joint_loss(const ArrayXd& di_pred_at_data, const ArrayXd& di_obs,
                                 const ArrayXd& dh_pred_at_data, const ArrayXd& dh_obs,
                                 const Series& i, const ArrayXd& rt, const ArrayXd& dh,
                                 const ArrayXd& di, const ArrayXd& sigma, const ModelParams& p,
                                 const ScalingConstants& sc) {
    return infection_data_loss(di_pred_at_data, di_obs) +
           hosp_data_loss(dh_pred_at_data, dh_obs) +
           hosp_infection_ode_loss(i, rt, dh, di, sigma, p, sc);
}

double hosp_infection_split_loss(const ArrayXd& dh_at_data, const ArrayXd& sigma_at_data,
                                 const ArrayXd& rt_at_data, const ArrayXd& di_obs,
                                 const Series& dh_c, const Series& sigma_c, const ArrayXd& rt_c,
                                 const ModelParams& p, const ScalingConstants& sc) {
    check_sigma(sigma_at_data);
    check_sigma(sigma_c.value);
    const ArrayXd implied =
        daily_infections_from_hosp(dh_at_data, sigma_at_data, rt_at_data, p, sc);
    return data_loss(implied, di_obs) +
           mean_sq(hosp_quotient_residual(dh_c, sigma_c, rt_c, p, sc));
}

std::vector<double> ntk_rebalance(const std::vector<double>& traces,
                                  const std::vector<double>& current) {
    if (traces.size() != current.size()) throw ShapeMismatch("ntk_rebalance: size mismatch");
    constexpr double tiny = 1e-300;
    double total = 0.0;
    int active = 0;
    for (double t : traces) {
        if (t > tiny) {
            total += t;
            ++active;
        }
    }
    std::vector<double> out = current;
    if (active == 0) return out;
    double raw_sum = 0.0;
    for (std::size_t k = 0; k < traces.size(); ++k) {
        if (traces[k] > tiny) raw_sum += total / traces[k];
    }
    const double norm = raw_sum / static_cast<double>(active);
    for (std::size_t k = 0; k < traces.size(); ++k) {
        if (traces[k] > tiny) out[k] = (total / traces[k]) / norm;
    }
    return out;
}

}  // namespace sirpinn
