#include "ramen/relax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ramen/kernel.hpp"

namespace ramen {

namespace {

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& x, const std::vector<int>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = x.row(rows[i]);
  return out;
}

Eigen::VectorXd take(const Eigen::VectorXd& v, const std::vector<int>& rows) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = v(rows[i]);
  return out;
}

// Forward cache for one half-sample.
struct MlpPass {
  Eigen::MatrixXd zw;      // gated inputs
  Eigen::MatrixXd hidden;  // tanh activations
  Eigen::VectorXd out;
};

MlpPass mlp_pass(const MlpModel& m, Eigen::MatrixXd zw) {
  MlpPass pass;
  pass.hidden = ((zw * m.w1).rowwise() + m.b1.transpose()).array().tanh().matrix();
  pass.out = (pass.hidden * m.w2).array() + m.b2;
  pass.zw = std::move(zw);
  return pass;
}

// Backward through the MLP for output gradient `gout`; accumulates parameter
// gradients and returns the input gradient.
Eigen::MatrixXd mlp_backward(const MlpModel& m, const MlpPass& pass,
                             const Eigen::VectorXd& gout, MlpGrads& grads) {
  const Eigen::MatrixXd ghidden = gout * m.w2.transpose();
  const Eigen::MatrixXd gpre =
      (ghidden.array() * (1.0 - pass.hidden.array().square())).matrix();
  grads.w2 += pass.hidden.transpose() * gout;
  grads.b2 += gout.sum();
  grads.w1 += pass.zw.transpose() * gpre;
  grads.b1 += gpre.colwise().sum().transpose();
  return gpre * m.w1.transpose();
}

}  // namespace

MlpModel MlpModel::init(int input_dim, int hidden, Rng& rng) {
  MlpModel m;
  m.w1.resize(input_dim, hidden);
  m.b1 = Eigen::VectorXd::Zero(hidden);
  m.w2.resize(hidden);
  m.b2 = 0.0;
  const double s1 = input_dim > 0 ? 1.0 / std::sqrt(static_cast<double>(input_dim)) : 1.0;
  const double s2 = hidden > 0 ? 1.0 / std::sqrt(static_cast<double>(hidden)) : 1.0;
  for (Eigen::Index j = 0; j < m.w1.cols(); ++j)
    for (Eigen::Index i = 0; i < m.w1.rows(); ++i) m.w1(i, j) = s1 * rng.normal();
  for (Eigen::Index i = 0; i < m.w2.size(); ++i) m.w2(i) = s2 * rng.normal();
  return m;
}

Eigen::VectorXd MlpModel::forward(const Eigen::MatrixXd& zw) const {
  if (zw.cols() != w1.rows())
    throw std::invalid_argument("MlpModel::forward: dimension mismatch");
  return ((zw * w1).rowwise() + b1.transpose()).array().tanh().matrix() * w2 +
         Eigen::VectorXd::Constant(zw.rows(), b2);
}

MlpGrads MlpGrads::zero(const MlpModel& m) {
  MlpGrads g;
  g.w1 = Eigen::MatrixXd::Zero(m.w1.rows(), m.w1.cols());
  g.b1 = Eigen::VectorXd::Zero(m.b1.size());
  g.w2 = Eigen::VectorXd::Zero(m.w2.size());
  g.b2 = 0.0;
  return g;
}

void MlpGrads::axpy(double a, const MlpGrads& other) {
  w1 += a * other.w1;
  b1 += a * other.b1;
  w2 += a * other.w2;
  b2 += a * other.b2;
}

void TrainConfig::validate() const {
  if (epochs < 0) throw std::invalid_argument("TrainConfig: negative epochs");
  if (patience < 1) throw std::invalid_argument("TrainConfig: patience must be >= 1");
  if (lr_gate <= 0.0 || lr_model <= 0.0)
    throw std::invalid_argument("TrainConfig: learning rates must be positive");
  if (tau_init <= 0.0 || tau_final <= 0.0 || tau_final > tau_init)
    throw std::invalid_argument("TrainConfig: need 0 < tau_final <= tau_init");
  if (anneal_rate <= 0.0 || anneal_rate >= 1.0)
    throw std::invalid_argument("TrainConfig: anneal rate must be in (0, 1)");
  if (anneal_every < 1)
    throw std::invalid_argument("TrainConfig: anneal_every must be >= 1");
  if (hidden_width < 1)
    throw std::invalid_argument("TrainConfig: hidden width must be >= 1");
  if (bandwidth_cap < 2)
    throw std::invalid_argument("TrainConfig: bandwidth cap must be >= 2");
}

Eigen::VectorXd gumbel_gate(const Eigen::VectorXd& w, double tau,
                            const Eigen::VectorXd& g1,
                            const Eigen::VectorXd& g2) {
  if (tau <= 0.0) throw std::invalid_argument("gumbel_gate: tau must be positive");
  if (g1.size() != w.size() || g2.size() != w.size())
    throw std::invalid_argument("gumbel_gate: noise dimension mismatch");
  return (1.0 / (1.0 + (-(w + g1 - g2) / tau).array().exp())).matrix();
}

Eigen::VectorXd gumbel_gate_sample(const Eigen::VectorXd& w, double tau,
                                   Rng& rng) {
  Eigen::VectorXd g1(w.size()), g2(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) g1(i) = rng.gumbel();
  for (Eigen::Index i = 0; i < w.size(); ++i) g2(i) = rng.gumbel();
  return gumbel_gate(w, tau, g1, g2);
}

BatchEval gated_invariance_loss(const GateBatch& batch,
                                const Eigen::VectorXd& gate_logits, double tau,
                                const Eigen::VectorXd& g1,
                                const Eigen::VectorXd& g2, const MlpModel& model,
                                double sigma, double frozen_denom,
                                bool want_grad) {
  if (batch.h1.size() != batch.h2.size() || batch.h1.empty())
    throw std::invalid_argument("gated_invariance_loss: bad half-split");
  if (sigma <= 0.0)
    throw std::invalid_argument("gated_invariance_loss: sigma must be positive");

  const int m = static_cast<int>(batch.h1.size());
  const double n = 2.0 * m;
  const double c = 4.0 / (n * n);
  const Eigen::Index q = batch.x.cols();

  const Eigen::VectorXd mask = gumbel_gate(gate_logits, tau, g1, g2);
  const Eigen::MatrixXd x1 = take_rows(batch.x, batch.h1);
  const Eigen::MatrixXd x2 = take_rows(batch.x, batch.h2);
  const Eigen::MatrixXd a =
      (x1.array().rowwise() * mask.transpose().array()).matrix();
  const Eigen::MatrixXd b =
      (x2.array().rowwise() * mask.transpose().array()).matrix();

  const MlpPass p1 = mlp_pass(model, a);
  const MlpPass p2 = mlp_pass(model, b);
  const Eigen::VectorXd r1 = take(batch.v, batch.h1) - p1.out;
  const Eigen::VectorXd r2 = take(batch.v, batch.h2) - p2.out;

  const Eigen::MatrixXd k = gaussian_gram(p1.zw, p2.zw, sigma);
  const Eigen::VectorXd kr2 = k * r2;
  const Eigen::VectorXd ktr1 = k.transpose() * r1;
  const Eigen::VectorXd h = (2.0 / n) * (r1.array() * kr2.array()).matrix();

  BatchEval out;
  out.stat = (2.0 / n) * h.sum();
  if (frozen_denom > 0.0) {
    out.denom = frozen_denom;
  } else {
    const double h_mean = h.mean();
    const double var = (h.array() - h_mean).square().mean();
    out.denom = std::max(std::sqrt(var / static_cast<double>(m)), kStudentizeFloor);
  }
  out.loss = std::abs(out.stat) / out.denom;

  if (!want_grad) return out;

  // dloss/dstat; sigma and the denominator are held constant.
  const double s = (out.stat > 0.0 ? 1.0 : (out.stat < 0.0 ? -1.0 : 0.0)) / out.denom;

  out.grad_model = MlpGrads::zero(model);
  const Eigen::VectorXd gout1 = -s * c * kr2;   // dloss/df(a_i), via r1 = v - f
  const Eigen::VectorXd gout2 = -s * c * ktr1;
  Eigen::MatrixXd ga = mlp_backward(model, p1, gout1, out.grad_model);
  Eigen::MatrixXd gb = mlp_backward(model, p2, gout2, out.grad_model);

  if (q > 0) {
    // Kernel path: dstat/da_i = (c / sigma^2) (sum_j M_ij b_j - a_i sum_j M_ij)
    // with M = K .* (r1 r2'); products with M are evaluated as scaled GEMMs.
    const double cs = s * c / (sigma * sigma);
    const Eigen::MatrixXd b_r2 = (b.array().colwise() * r2.array()).matrix();
    const Eigen::MatrixXd a_r1 = (a.array().colwise() * r1.array()).matrix();
    ga.array() += cs * (((k * b_r2).array().colwise() * r1.array()) -
                        (a.array().colwise() * (r1.array() * kr2.array())));
    gb.array() += cs * (((k.transpose() * a_r1).array().colwise() * r2.array()) -
                        (b.array().colwise() * (r2.array() * ktr1.array())));

    // Gates: zw = mask .* x rowwise, then dB/dw = B (1 - B) / tau.
    const Eigen::VectorXd dmask =
        ((ga.array() * x1.array()).colwise().sum() +
         (gb.array() * x2.array()).colwise().sum())
            .matrix()
            .transpose();
    out.grad_gate =
        (dmask.array() * mask.array() * (1.0 - mask.array()) / tau).matrix();
  } else {
    out.grad_gate = Eigen::VectorXd::Zero(0);
  }
  return out;
}

namespace {

struct TrainedGates {
  Eigen::VectorXd w_pi;
  Eigen::VectorXd w_y;
  bool diverged = false;
};

struct EnvBatches {
  GateBatch t_batch;   // all rows, target T
  GateBatch y1_batch;  // T = 1 rows, target Y
  GateBatch y0_batch;  // T = 0 rows, target Y
};

std::vector<int> half_indices(int n, std::uint64_t seed, bool first) {
  Rng rng(seed);
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  rng.shuffle(idx);
  const int m = (n - n % 2) / 2;
  if (first) return {idx.begin(), idx.begin() + m};
  return {idx.begin() + m, idx.begin() + 2 * m};
}

GateBatch make_batch(Eigen::MatrixXd x, Eigen::VectorXd v, std::uint64_t seed) {
  GateBatch b;
  b.h1 = half_indices(static_cast<int>(x.rows()), seed, true);
  b.h2 = half_indices(static_cast<int>(x.rows()), seed, false);
  b.x = std::move(x);
  b.v = std::move(v);
  return b;
}

// Pooled gated features for the per-epoch bandwidth heuristic.
double epoch_bandwidth(const std::vector<const GateBatch*>& batches,
                       const std::vector<Eigen::VectorXd>& masks, int cap,
                       std::uint64_t seed) {
  Eigen::Index total = 0;
  for (const auto* b : batches) total += b->x.rows();
  const Eigen::Index q = batches.empty() ? 0 : batches.front()->x.cols();
  Eigen::MatrixXd pooled(total, q);
  Eigen::Index at = 0;
  for (std::size_t i = 0; i < batches.size(); ++i) {
    pooled.middleRows(at, batches[i]->x.rows()) =
        (batches[i]->x.array().rowwise() * masks[i].transpose().array()).matrix();
    at += batches[i]->x.rows();
  }
  return median_bandwidth(pooled, cap, seed);
}

TrainedGates train_gates(const MultiEnvDataset& data, const TrainConfig& cfg,
                         double lr_scale, std::vector<TraceRow>* trace) {
  const int d = data.dim();
  const int n_env = data.env_count();

  std::vector<EnvBatches> batches(static_cast<std::size_t>(n_env));
  for (int e = 0; e < n_env; ++e) {
    const auto& env = data.envs[static_cast<std::size_t>(e)];
    const int n = static_cast<int>(env.rows());
    if (n < 8)
      throw std::invalid_argument(
          "gumbel_select: environment " + std::to_string(e) +
          " has fewer than 8 rows");
    std::vector<int> rows1, rows0;
    for (int i = 0; i < n; ++i)
      (env.t(i) == 1.0 ? rows1 : rows0).push_back(i);
    if (rows1.size() < 4 || rows0.size() < 4)
      throw std::runtime_error(
          "gumbel_select: environment " + std::to_string(e) +
          " needs at least 4 rows in each treatment arm");

    auto& eb = batches[static_cast<std::size_t>(e)];
    eb.t_batch = make_batch(env.x, env.t, derive_seed(cfg.seed, 30, static_cast<std::uint64_t>(e)));
    eb.y1_batch = make_batch(take_rows(env.x, rows1), take(env.y, rows1),
                             derive_seed(cfg.seed, 31, static_cast<std::uint64_t>(e)));
    eb.y0_batch = make_batch(take_rows(env.x, rows0), take(env.y, rows0),
                             derive_seed(cfg.seed, 32, static_cast<std::uint64_t>(e)));
  }

  Rng init_rng(derive_seed(cfg.seed, 40));
  Eigen::VectorXd w_pi = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd w_y = Eigen::VectorXd::Zero(d);
  MlpModel th_pi = MlpModel::init(d, cfg.hidden_width, init_rng);
  MlpModel th_y1 = MlpModel::init(d, cfg.hidden_width, init_rng);
  MlpModel th_y0 = MlpModel::init(d, cfg.hidden_width, init_rng);

  const double lr_gate = cfg.lr_gate * lr_scale;
  const double lr_model = cfg.lr_model * lr_scale;

  TrainedGates best{w_pi, w_y, false};
  double best_total = std::numeric_limits<double>::infinity();
  int since_best = 0;
  double tau = cfg.tau_init;
  Rng noise_rng(derive_seed(cfg.seed, 41));

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    if (epoch % cfg.anneal_every == 0)
      tau = std::max(cfg.tau_final, tau * cfg.anneal_rate);

    // Draw every mask first, then fix the bandwidths for this epoch.
    std::vector<Eigen::VectorXd> g1_pi(batches.size()), g2_pi(batches.size());
    std::vector<Eigen::VectorXd> g1_y(batches.size()), g2_y(batches.size());
    std::vector<Eigen::VectorXd> mask_pi(batches.size()), mask_y(batches.size());
    for (std::size_t e = 0; e < batches.size(); ++e) {
      auto draw = [&](Eigen::VectorXd& g) {
        g.resize(d);
        for (int i = 0; i < d; ++i) g(i) = noise_rng.gumbel();
      };
      draw(g1_pi[e]);
      draw(g2_pi[e]);
      draw(g1_y[e]);
      draw(g2_y[e]);
      mask_pi[e] = gumbel_gate(w_pi, tau, g1_pi[e], g2_pi[e]);
      mask_y[e] = gumbel_gate(w_y, tau, g1_y[e], g2_y[e]);
    }

    std::vector<const GateBatch*> t_ptrs, y_ptrs;
    std::vector<Eigen::VectorXd> y_masks;
    for (std::size_t e = 0; e < batches.size(); ++e) {
      t_ptrs.push_back(&batches[e].t_batch);
      y_ptrs.push_back(&batches[e].y1_batch);
      y_ptrs.push_back(&batches[e].y0_batch);
      y_masks.push_back(mask_y[e]);
      y_masks.push_back(mask_y[e]);
    }
    const std::uint64_t bw_seed = derive_seed(cfg.seed, 42, static_cast<std::uint64_t>(epoch));
    const double sigma_pi = epoch_bandwidth(t_ptrs, mask_pi, cfg.bandwidth_cap, bw_seed);
    const double sigma_y = epoch_bandwidth(y_ptrs, y_masks, cfg.bandwidth_cap,
                                           derive_seed(bw_seed, 1));

    Eigen::VectorXd gw_pi = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd gw_y = Eigen::VectorXd::Zero(d);
    MlpGrads g_pi = MlpGrads::zero(th_pi);
    MlpGrads g_y1 = MlpGrads::zero(th_y1);
    MlpGrads g_y0 = MlpGrads::zero(th_y0);
    double loss_t = 0.0, loss_y = 0.0;

    const double wt = 1.0 / n_env;        // environment average
    const double wy = 1.0 / (2.0 * n_env);  // arms share the Y loss
    for (std::size_t e = 0; e < batches.size(); ++e) {
      const BatchEval et = gated_invariance_loss(
          batches[e].t_batch, w_pi, tau, g1_pi[e], g2_pi[e], th_pi, sigma_pi,
          0.0, true);
      loss_t += wt * et.loss;
      gw_pi += wt * et.grad_gate;
      g_pi.axpy(wt, et.grad_model);

      const BatchEval e1 = gated_invariance_loss(
          batches[e].y1_batch, w_y, tau, g1_y[e], g2_y[e], th_y1, sigma_y, 0.0,
          true);
      const BatchEval e0 = gated_invariance_loss(
          batches[e].y0_batch, w_y, tau, g1_y[e], g2_y[e], th_y0, sigma_y, 0.0,
          true);
      loss_y += wy * (e1.loss + e0.loss);
      gw_y += wy * (e1.grad_gate + e0.grad_gate);
      g_y1.axpy(wy, e1.grad_model);
      g_y0.axpy(wy, e0.grad_model);
    }

    if (!std::isfinite(loss_t) || !std::isfinite(loss_y)) {
      TrainedGates failed;
      failed.diverged = true;
      return failed;
    }

    w_pi -= lr_gate * gw_pi;
    w_y -= lr_gate * gw_y;
    th_pi.w1 -= lr_model * g_pi.w1;
    th_pi.b1 -= lr_model * g_pi.b1;
    th_pi.w2 -= lr_model * g_pi.w2;
    th_pi.b2 -= lr_model * g_pi.b2;
    th_y1.w1 -= lr_model * g_y1.w1;
    th_y1.b1 -= lr_model * g_y1.b1;
    th_y1.w2 -= lr_model * g_y1.w2;
    th_y1.b2 -= lr_model * g_y1.b2;
    th_y0.w1 -= lr_model * g_y0.w1;
    th_y0.b1 -= lr_model * g_y0.b1;
    th_y0.w2 -= lr_model * g_y0.w2;
    th_y0.b2 -= lr_model * g_y0.b2;

    if (trace) trace->push_back({epoch, tau, loss_t, loss_y});

    const double total = loss_t + loss_y;
    if (total < best_total) {
      best_total = total;
      best.w_pi = w_pi;
      best.w_y = w_y;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }

  if (cfg.epochs == 0) {
    best.w_pi = w_pi;
    best.w_y = w_y;
  }
  return best;
}

SubsetMask positive_gate_subset(const Eigen::VectorXd& w) {
  SubsetMask s;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (w(i) > 0.0) s.push_back(static_cast<int>(i));
  return s;
}

}  // namespace

SelectionResult gumbel_select(const MultiEnvDataset& data, const TrainConfig& cfg,
                              std::vector<TraceRow>* trace) {
  data.validate();
  cfg.validate();

  TrainedGates gates = train_gates(data, cfg, 1.0, trace);
  if (gates.diverged) {
    if (trace) trace->clear();
    gates = train_gates(data, cfg, 0.5, trace);  // halve both learning rates
    if (gates.diverged)
      throw std::runtime_error(
          "gumbel_select: training loss diverged twice (NaN), even after "
          "halving the learning rates");
  }

  const SubsetMask s_t = positive_gate_subset(gates.w_pi);
  const SubsetMask s_y = positive_gate_subset(gates.w_y);

  // Exact adjudication in environment-average mode.
  SubsetObjective obj_t = objective(data, s_t, EnvAggregate::Mean, cfg.seed,
                                    cfg.ridge_lambda);
  SubsetObjective obj_y;
  if (s_y == s_t) {
    obj_y = obj_t;
  } else {
    obj_y = objective(data, s_y, EnvAggregate::Mean, cfg.seed, cfg.ridge_lambda);
  }

  const SubsetObjective& win = obj_y.combined <= obj_t.combined ? obj_y : obj_t;

  SelectionResult out;
  out.subset = win.subset;
  out.node = win.node;
  out.method = "gumbel";
  out.loss_t = win.loss_t;
  out.loss_y = win.loss_y;
  out.combined = win.combined;
  out.table = {obj_t};
  if (!(s_y == s_t)) out.table.push_back(obj_y);
  out.seed = cfg.seed;
  return out;
}

std::vector<TrainConfig> default_sweep_grid(const TrainConfig& base) {
  std::vector<TrainConfig> grid;
  for (double lr : {0.001, 0.01, 0.1})
    for (double tau : {0.5, 0.8, 1.0})
      for (double alpha : {0.9, 0.95, 0.99}) {
        TrainConfig cfg = base;
        cfg.lr_gate = lr;
        cfg.lr_model = lr;
        cfg.tau_init = tau;
        cfg.tau_final = std::min(base.tau_final, tau);
        cfg.anneal_rate = alpha;
        grid.push_back(cfg);
      }
  return grid;
}

TrainConfig hyperparameter_sweep(const MultiEnvDataset& data,
                                 const std::vector<TrainConfig>& grid,
                                 SelectionResult* best) {
  if (grid.empty())
    throw std::invalid_argument("hyperparameter_sweep: empty grid");

  int win = -1;
  SelectionResult win_sel;
  std::string last_error = "none";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      SelectionResult sel = gumbel_select(data, grid[i]);
      if (win < 0 || sel.combined < win_sel.combined) {
        win = static_cast<int>(i);
        win_sel = std::move(sel);
      }
    } catch (const std::exception& e) {
      last_error = e.what();  // failed grid points are skipped
    }
  }
  if (win < 0)
    throw std::runtime_error(
        "hyperparameter_sweep: every grid point failed; last error: " +
        last_error);
  if (best) *best = std::move(win_sel);
  return grid[static_cast<std::size_t>(win)];
}

}  // namespace ramen
