#pragma once

#include <cstdint>
#include <vector>

#include "ramen/rng.hpp"
#include "ramen/search.hpp"

namespace ramen {

// Soft subset-selection gates: B_j = sigmoid((w_j + G1_j - G2_j) / tau).
struct GateVector {
  Eigen::VectorXd logits;
  double temperature = 1.0;
};

// One-hidden-layer tanh network fit to the gated conditional mean.
struct MlpModel {
  Eigen::MatrixXd w1;  // q x h
  Eigen::VectorXd b1;  // h
  Eigen::VectorXd w2;  // h
  double b2 = 0.0;

  int input_dim() const { return static_cast<int>(w1.rows()); }
  int hidden() const { return static_cast<int>(w1.cols()); }

  static MlpModel init(int input_dim, int hidden, Rng& rng);
  Eigen::VectorXd forward(const Eigen::MatrixXd& zw) const;
};

struct MlpGrads {
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::VectorXd w2;
  double b2 = 0.0;

  static MlpGrads zero(const MlpModel& m);
  void axpy(double a, const MlpGrads& other);
};

struct TrainConfig {
  int epochs = 700;
  int patience = 100;          // epochs without improvement before stopping
  double lr_gate = 0.1;
  double lr_model = 0.1;
  double tau_init = 1.0;
  double tau_final = 0.1;
  double anneal_rate = 0.9;    // alpha < 1
  int anneal_every = 10;       // epochs between temperature updates
  int hidden_width = 32;
  int bandwidth_cap = 512;     // median-heuristic subsample inside training
  double ridge_lambda = kDefaultRidgeLambda;  // exact-loss adjudication
  std::uint64_t seed = 0;

  void validate() const;
};

Eigen::VectorXd gumbel_gate(const Eigen::VectorXd& w, double tau,
                            const Eigen::VectorXd& g1,
                            const Eigen::VectorXd& g2);
Eigen::VectorXd gumbel_gate_sample(const Eigen::VectorXd& w, double tau,
                                   Rng& rng);

// One environment/arm batch of the differentiable loss: rows of x are the
// full covariate vectors, v is the target, h1/h2 is a fixed half-split.
struct GateBatch {
  Eigen::MatrixXd x;
  Eigen::VectorXd v;
  std::vector<int> h1;
  std::vector<int> h2;
};

struct BatchEval {
  double stat = 0.0;
  double denom = kStudentizeFloor;
  double loss = 0.0;  // |stat| / denom
  Eigen::VectorXd grad_gate;
  MlpGrads grad_model;
};

// Cross U-statistic of (v - f(B(w) * x)) on gated features, studentized and
// taken in absolute value. sigma and the studentization denominator are
// constants of the backward pass; frozen_denom <= 0 recomputes the
// denominator from this batch's h values (the training path), a positive
// value pins it (the gradient-check path).
BatchEval gated_invariance_loss(const GateBatch& batch,
                                const Eigen::VectorXd& gate_logits, double tau,
                                const Eigen::VectorXd& g1,
                                const Eigen::VectorXd& g2, const MlpModel& model,
                                double sigma, double frozen_denom,
                                bool want_grad);

struct TraceRow {
  int epoch = 0;
  double tau = 0.0;
  double loss_t = 0.0;
  double loss_y = 0.0;
};

// Gumbel-relaxed gate training over covariates for both the T and Y losses
// (environment-averaged), followed by exact-loss adjudication between
// S_T = {i : w_pi_i > 0} and S_Y = {i : w_y_i > 0}. A NaN loss halves both
// learning rates and restarts once; a second failure throws.
SelectionResult gumbel_select(const MultiEnvDataset& data,
                              const TrainConfig& cfg,
                              std::vector<TraceRow>* trace = nullptr);

// 27-point grid: lr in {0.001, 0.01, 0.1} (gate and model together),
// tau_init in {0.5, 0.8, 1.0}, anneal_rate in {0.9, 0.95, 0.99}.
std::vector<TrainConfig> default_sweep_grid(const TrainConfig& base);

// Runs gumbel_select per grid point and returns the config whose final exact
// combined loss is smallest (ties -> earlier grid point). Failed points are
// skipped; throws if every point fails. `best` receives the winning
// selection when non-null.
TrainConfig hyperparameter_sweep(const MultiEnvDataset& data,
                                 const std::vector<TrainConfig>& grid,
                                 SelectionResult* best = nullptr);

}  // namespace ramen
