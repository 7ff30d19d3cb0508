#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "specop/bootstrap.hpp"
#include "specop/fdata.hpp"
#include "specop/grid.hpp"
#include "specop/rng.hpp"

namespace specop {

// Curve-valued moving average driven by i.i.d. Brownian-bridge innovations:
//   x_t = A1(eps_{t-1}) + a2 * eps_{t-2} + eps_t     (a2 = 0: same law as y)
//   y_t = A1(e_{t-1}) + e_t
// with A1 the integral operator whose kernel is the scaled Gaussian bump
// psi(u, v) = exp(-(u^2 + v^2)/2) / (4 * int_0^1 exp(-w^2) dw).
struct FMAModel {
  double a2;
  int T;
  Grid grid;
  Eigen::MatrixXd psi;     // psi(s_i, s_j), symmetric, positive
  double psi_normalizer;   // 4 * int_0^1 exp(-w^2) dw

  static FMAModel create(double a2, int T, const Grid& grid);

 private:
  FMAModel(double a2_, int T_, Grid grid_, Eigen::MatrixXd psi_, double normalizer)
      : a2(a2_), T(T_), grid(std::move(grid_)), psi(std::move(psi_)),
        psi_normalizer(normalizer) {}
};

// Brownian bridge on the grid: cumulative Gaussian increments pinned to zero
// at both ends; exact finite-dimensional law cov(u, v) = min(u, v) - uv.
// Always consumes k + 1 draws.
Eigen::VectorXd brownian_bridge(const Grid& grid, GaussianSampler& rng);

// out_i = k^{-1} sum_j psi(s_i, s_j) curve_j.
Eigen::VectorXd apply_a1(const FMAModel& model, const Eigen::VectorXd& curve);

// One (x, y) pair of length T. Innovation streams are disjoint children of
// `stream` (0 for eps, 1 for e). Uses exact moving-average starts with
// T+2 / T+1 pre-extended innovations, no burn-in. n_basis > 0 projects every
// curve onto that many trigonometric basis functions; 0 skips the step.
std::pair<FunctionalSample, FunctionalSample> gen_pair(const FMAModel& model,
                                                       const RngStream& stream,
                                                       int n_basis = 21);

struct ExperimentConfig {
  std::vector<int> T_list;
  std::vector<double> b_list;
  std::vector<double> a2_list;
  std::vector<double> alpha_list;
  int R = 500;
  int B = 1000;
  std::uint64_t master_seed = 0;
  int n_basis = 21;
  int k = 21;
  GridPolicy grid_policy = GridPolicy::midpoint;
  int workers = 0;
  StudentizationMode studentization = StudentizationMode::full;
};

struct CellResult {
  int T = 0;
  double b = 0.0;
  double a2 = 0.0;
  std::vector<double> alpha;           // copied from the config
  std::vector<double> rejection_rate;  // per alpha: #(p <= alpha) / R
  std::vector<double> std_error;       // sqrt(rate (1 - rate) / R)
  std::vector<double> p_values;        // per repetition
  std::vector<double> t_stats;         // per repetition
};

// Full Monte-Carlo sweep over the (T, b, a2) product. Repetition r of cell c
// draws from substream child(c).child(r) of the master seed, so the table is
// a pure function of the config for any worker count.
std::vector<CellResult> run_table(const ExperimentConfig& config, const WeightKernel& kernel);

struct NullDensityResult {
  std::vector<double> exact_t;                   // one t per null dataset
  std::vector<int> dataset_indices;              // which datasets got a bootstrap pass
  std::vector<std::vector<double>> bootstrap_t;  // per chosen dataset, B draws
};

// Draws R_exact independent null datasets (a2 = 0) and records each exact
// statistic; then reruns the full bootstrap on n_datasets randomly chosen
// ones. Feeds density comparisons of the exact, bootstrap, and Gaussian
// approximations.
NullDensityResult run_null_density(int T, double b, int R_exact, int B, int n_datasets,
                                   std::uint64_t master_seed, const WeightKernel& kernel,
                                   int workers = 0, int n_basis = 21, int k = 21,
                                   GridPolicy grid_policy = GridPolicy::midpoint);

}  // namespace specop
