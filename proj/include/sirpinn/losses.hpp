#pragma once

#include <vector>

#include <Eigen/Dense>

#include "sirpinn/sir_model.hpp"

namespace sirpinn {

/// Count scales turning raw compartment values into O(1) training variables.
/// The derived ODE coefficients are always recomputed from the current
/// parameters, never cached.
struct ScalingConstants {
    double count_scale = 1e5;  // divides infection counts
    double hosp_scale = 1e3;   // divides daily hospitalizations

    /// Coefficient of the scaled infection term: window * C / N.
    double c1(const ModelParams& p) const { return p.window() * count_scale / p.population; }
    /// Coefficient of the scaled removal term: window * delta.
    double c2(const ModelParams& p) const { return p.window() * p.removal_rate; }
    /// Scaled hospitalization link: delta * C / C_H.
    double hosp_link(const ModelParams& p) const {
        return p.removal_rate * count_scale / hosp_scale;
    }
};

/// Multipliers balancing the data, residual, and initial-condition terms of
/// the full-model loss. Unit weights unless adaptively rebalanced.
struct LossWeights {
    double data = 1.0;
    double ode_s = 1.0;
    double ode_i = 1.0;
    double ode_r = 1.0;
    double ic_s = 1.0;
    double ic_i = 1.0;
    double ic_r = 1.0;

    static constexpr int count = 7;
    std::vector<double> to_vector() const { return {data, ode_s, ode_i, ode_r, ic_s, ic_i, ic_r}; }
    static LossWeights from_vector(const std::vector<double>& v);
    static const char* name(int k);
};

/// A function evaluated at a set of points together with its time derivative.
struct Series {
    Eigen::ArrayXd value;
    Eigen::ArrayXd dvalue;
};

constexpr double kSigmaFloor = 1e-6;

// ---------------------------------------------------------------------------
// residual builders (scaled variables; shared by loss values and training)
// ---------------------------------------------------------------------------

/// dS + c1 * beta * I * S
Eigen::ArrayXd full_residual_s(const Series& s, const Series& i, const Eigen::ArrayXd& beta,
                               double c1);
/// dI - c1 * beta * I * S + c2 * I
Eigen::ArrayXd full_residual_i(const Series& s, const Series& i, const Eigen::ArrayXd& beta,
                               double c1, double c2);
/// dR - c2 * I with R = N/C - I - S
Eigen::ArrayXd full_residual_r(const Series& s, const Series& i, double c2);
/// dI - c2 * (rt - 1) * I
Eigen::ArrayXd reduced_residual(const Series& i, const Eigen::ArrayXd& rt, double c2);
/// dH - (delta C / C_H) * sigma * I
Eigen::ArrayXd hosp_link_residual(const Eigen::ArrayXd& dh, const Eigen::ArrayXd& sigma,
                                  const Eigen::ArrayXd& i, double link);
/// dI_daily - delta * rt * I
Eigen::ArrayXd infection_link_residual(const Eigen::ArrayXd& di, const Eigen::ArrayXd& rt,
                                       const Eigen::ArrayXd& i, double delta);
/// Infected compartment implied by the hospitalization series:
/// C_H * dH / (delta * C * sigma). Sigma is floored at kSigmaFloor.
Eigen::ArrayXd infected_from_hosp(const Eigen::ArrayXd& dh, const Eigen::ArrayXd& sigma,
                                  const ModelParams& p, const ScalingConstants& sc);
/// Daily-infection series implied by the hospitalization series:
/// (C_H / C) * rt * dH / sigma.
Eigen::ArrayXd daily_infections_from_hosp(const Eigen::ArrayXd& dh, const Eigen::ArrayXd& sigma,
                                          const Eigen::ArrayXd& rt, const ModelParams& p,
                                          const ScalingConstants& sc);
/// Infection-dynamics residual with the infected compartment substituted by
/// the hospitalization quotient:
/// (C_H/C) * [ (1/delta) d/dt (dH/sigma) - window * (rt - 1) * dH/sigma ].
/// The quotient derivative is exact (quotient rule on the two tangents).
Eigen::ArrayXd hosp_quotient_residual(const Series& dh, const Series& sigma,
                                      const Eigen::ArrayXd& rt, const ModelParams& p,
                                      const ScalingConstants& sc);

/// Throws SigmaUnderflow when any entry drops below kSigmaFloor.
void check_sigma(const Eigen::ArrayXd& sigma);

// ---------------------------------------------------------------------------
// loss values
// ---------------------------------------------------------------------------

/// omega * mean squared misfit. Lengths must agree.
double data_loss(const Eigen::ArrayXd& predicted, const Eigen::ArrayXd& observed,
                 double omega = 1.0);

/// Weighted mean squared norms of the three full-model residuals.
double full_ode_loss(const Series& s, const Series& i, const Eigen::ArrayXd& beta,
                     const LossWeights& w, double c1, double c2);

/// Weighted squared misfits on the scaled initial conditions.
double ic_loss(double s0, double i0, const ModelParams& p, const ScalingConstants& sc,
               const LossWeights& w);

double full_joint_loss(const Eigen::ArrayXd& pred_at_data, const Eigen::ArrayXd& observed,
                       const Series& s, const Series& i, const Eigen::ArrayXd& beta, double s0,
                       double i0, const ModelParams& p, const ScalingConstants& sc,
                       const LossWeights& w);

/// Physics-only phase of the split strategy; the infected-compartment series
/// enters as frozen values.
double full_split_loss(const Series& s, const Series& i_frozen, const Eigen::ArrayXd& beta,
                       double s0, double i0_frozen, const ModelParams& p,
                       const ScalingConstants& sc, const LossWeights& w);

double reduced_ode_loss(const Series& i, const Eigen::ArrayXd& rt, const ModelParams& p);
double reduced_joint_loss(const Eigen::ArrayXd& pred_at_data, const Eigen::ArrayXd& observed,
                          const Series& i, const Eigen::ArrayXd& rt, const ModelParams& p);
double reduced_split_loss(const Series& i_frozen, const Eigen::ArrayXd& rt,
                          const ModelParams& p);

/// Unit-weight misfit on hospitalization data.
double hosp_data_loss(const Eigen::ArrayXd& dh_pred, const Eigen::ArrayXd& dh_obs);

double hosp_ode_loss(const Series& i, const Eigen::ArrayXd& rt, const Eigen::ArrayXd& dh,
                     const Eigen::ArrayXd& sigma, const ModelParams& p,
                     const ScalingConstants& sc);

double hosp_joint_loss(const Eigen::ArrayXd& i_pred_at_data, const Eigen::ArrayXd& i_obs,
                       const Eigen::ArrayXd& dh_pred_at_data, const Eigen::ArrayXd& dh_obs,
                       const Series& i, const Eigen::ArrayXd& rt, const Eigen::ArrayXd& dh,
                       const Eigen::ArrayXd& sigma, const ModelParams& p,
                       const ScalingConstants& sc);

/// Split-phase objective with hospitalizations as the anchor data: implied
/// infected fitted to the infection data plus the quotient residual.
double hosp_split_loss(const Eigen::ArrayXd& dh_at_data, const Eigen::ArrayXd& sigma_at_data,
                       const Eigen::ArrayXd& i_obs, const Series& dh_c, const Series& sigma_c,
                       const Eigen::ArrayXd& rt_c, const ModelParams& p,
                       const ScalingConstants& sc);

double infection_data_loss(const Eigen::ArrayXd& di_pred, const Eigen::ArrayXd& di_obs);

double hosp_infection_ode_loss(const Series& i, const Eigen::ArrayXd& rt,
                               const Eigen::ArrayXd& dh, const Eigen::ArrayXd& di,
                               const Eigen::ArrayXd& sigma, const ModelParams& p,
                               const ScalingConstants& sc);

double hosp_infection_joint_loss(const Eigen::ArrayXd& di_pred_at_data,
                                 const Eigen::ArrayXd& di_obs,
                                 const Eigen::ArrayXd& dh_pred_at_data,
                                 const Eigen::ArrayXd& dh_obs, const Series& i,
                                 const Eigen::ArrayXd& rt, const Eigen::ArrayXd& dh,
                                 const Eigen::ArrayXd& di, const Eigen::ArrayXd& sigma,
                                 const ModelParams& p, const ScalingConstants& sc);

double hosp_infection_split_loss(const Eigen::ArrayXd& dh_at_data,
                                 const Eigen::ArrayXd& sigma_at_data,
                                 const Eigen::ArrayXd& rt_at_data, const Eigen::ArrayXd& di_obs,
                                 const Series& dh_c, const Series& sigma_c,
                                 const Eigen::ArrayXd& rt_c, const ModelParams& p,
                                 const ScalingConstants& sc);

/// Inverse-trace weight rebalancing: weight_k proportional to
/// (sum_j trace_j) / trace_k, normalized to mean 1 over the updated terms.
/// Terms with vanishing trace keep their current weight.
std::vector<double> ntk_rebalance(const std::vector<double>& traces,
                                  const std::vector<double>& current);

}  // namespace sirpinn
