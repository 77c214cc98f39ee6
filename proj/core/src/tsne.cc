// Copyright 2026 The Conceptual Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include <fmt/format.h>

#include "conceptual/embedding_space.h"
#include "conceptual/error.h"

namespace conceptual {

namespace {

constexpr double kMachineEpsilon = std::numeric_limits<double>::epsilon();
// Smallest plain-gradient step tried before a guarded iteration stays put.
constexpr double kMinBacktrackStep = 1e-12;

struct RowCalibration {
  double beta = 1.0;
  double entropy = 0.0;
};

// Fills `row` (length n, zero at `self`) with p(j|i) for precision `beta`
// and returns its entropy in bits.
double ConditionalRow(const Eigen::MatrixXd& distances, Eigen::Index self,
                      double beta, double min_distance, Eigen::Ref<Eigen::RowVectorXd> row) {
  const Eigen::Index n = distances.cols();
  double sum = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j == self) {
      row(j) = 0.0;
      continue;
    }
    row(j) = std::exp(-beta * (distances(self, j) - min_distance));
    sum += row(j);
  }
  row /= sum;
  double entropy = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (row(j) > 0.0) entropy -= row(j) * std::log2(row(j));
  }
  return entropy;
}

RowCalibration CalibrateRow(const Eigen::MatrixXd& distances, Eigen::Index i,
                            double target_entropy,
                            Eigen::Ref<Eigen::RowVectorXd> row) {
  const Eigen::Index n = distances.cols();
  double min_distance = std::numeric_limits<double>::infinity();
  double mean_distance = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j == i) continue;
    min_distance = std::min(min_distance, distances(i, j));
    mean_distance += distances(i, j);
  }
  mean_distance /= static_cast<double>(n - 1);
  const double spread = mean_distance - min_distance;

  // Start from a scale-aware precision so the bisection budget is spent on
  // precision, not on finding the right order of magnitude.
  RowCalibration cal;
  cal.beta = spread > 0.0 ? 1.0 / spread : 1.0;
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  for (int step = 0; step < kPerplexityMaxSteps; ++step) {
    cal.entropy = ConditionalRow(distances, i, cal.beta, min_distance, row);
    const double diff = cal.entropy - target_entropy;
    if (std::abs(diff) <= kPerplexityTolerance * 1e-2) break;
    if (diff > 0.0) {
      lo = cal.beta;
      cal.beta = std::isinf(hi) ? cal.beta * 2.0 : 0.5 * (cal.beta + hi);
    } else {
      hi = cal.beta;
      cal.beta = 0.5 * (cal.beta + lo);
    }
    if (step + 1 == kPerplexityMaxSteps) {
      cal.entropy = ConditionalRow(distances, i, cal.beta, min_distance, row);
    }
  }
  return cal;
}

std::uint64_t SplitMix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Portable N(0, sigma) draws: std::normal_distribution is not specified
// bit-for-bit across standard libraries.
Eigen::MatrixXd GaussianInit(Eigen::Index n, Eigen::Index dims, double sigma,
                             std::uint64_t seed) {
  std::uint64_t state = seed;
  auto uniform = [&state] {
    return (static_cast<double>(SplitMix64(state) >> 11) + 0.5) * 0x1.0p-53;
  };
  Eigen::MatrixXd y(n, dims);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < dims; ++j) {
      const double u1 = uniform();
      const double u2 = uniform();
      y(i, j) = sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
  }
  return y;
}

Eigen::MatrixXd PcaInit(const EmbeddingMatrix& x, int dims) {
  const Eigen::MatrixXd pca = PcaFitTransform(x, dims).rows();
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(x.n(), dims);
  y.leftCols(pca.cols()) = pca;
  const Eigen::VectorXd first = y.col(0);
  const double stddev =
      std::sqrt((first.array() - first.mean()).square().mean());
  if (stddev <= 0.0) throw NumericalError("PCA initialization has zero spread");
  return y / stddev * 1e-4;
}

}  // namespace

double ReductionConfig::ResolvedDegreesOfFreedom() const {
  if (degrees_of_freedom > 0.0) return degrees_of_freedom;
  return std::max(tsne_components - 1, 1);
}

void ReductionConfig::Validate() const {
  if (pca_components < 1 || tsne_components < 1) {
    throw ValidationError("component counts must be positive");
  }
  if (!(perplexity > 0.0)) throw ValidationError("perplexity must be positive");
  if (tsne_iters < 1 || exaggeration_iters < 0 || exaggeration_iters > tsne_iters) {
    throw ValidationError("t-SNE iteration counts are inconsistent");
  }
  if (!(learning_rate > 0.0) || !(exaggeration_factor > 0.0)) {
    throw ValidationError("learning rate and exaggeration must be positive");
  }
  if (momentum < 0.0 || momentum >= 1.0 || final_momentum < 0.0 ||
      final_momentum >= 1.0) {
    throw ValidationError("momentum must lie in [0, 1)");
  }
  if (!(min_gain > 0.0)) throw ValidationError("min_gain must be positive");
}

Eigen::MatrixXd SquaredEuclideanDistances(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      d(i, j) = d(j, i) = (x.row(i) - x.row(j)).squaredNorm();
    }
  }
  return d;
}

Affinities CalibratePerplexity(const Eigen::MatrixXd& distances,
                               double perplexity) {
  const Eigen::Index n = distances.rows();
  if (distances.cols() != n) throw ValidationError("distance matrix is not square");
  if (n < 2) throw ValidationError("perplexity calibration needs at least two points");
  if (!(perplexity > 0.0)) throw ValidationError("perplexity must be positive");
  if (perplexity >= static_cast<double>(n)) {
    throw ValidationError(fmt::format(
        "perplexity {} must be smaller than the number of points {}", perplexity, n));
  }
  if (!distances.allFinite()) throw NumericalError("distance matrix is not finite");

  const double target = std::log2(perplexity);
  Affinities out;
  out.conditional = Eigen::MatrixXd::Zero(n, n);
  out.precisions.resize(n);
  out.entropies.resize(n);

  auto work = [&](Eigen::Index begin, Eigen::Index end) {
    Eigen::RowVectorXd row(n);
    for (Eigen::Index i = begin; i < end; ++i) {
      const RowCalibration cal = CalibrateRow(distances, i, target, row);
      out.conditional.row(i) = row;
      out.precisions(i) = cal.beta;
      out.entropies(i) = cal.entropy;
    }
  };
  const Eigen::Index workers = std::clamp<Eigen::Index>(
      static_cast<Eigen::Index>(std::thread::hardware_concurrency()), 1,
      std::max<Eigen::Index>(1, n / 64));
  if (workers == 1) {
    work(0, n);
  } else {
    std::vector<std::jthread> threads;
    const Eigen::Index chunk = (n + workers - 1) / workers;
    for (Eigen::Index b = 0; b < n; b += chunk) {
      threads.emplace_back(work, b, std::min(n, b + chunk));
    }
  }
  out.joint = (out.conditional + out.conditional.transpose()) / (2.0 * n);
  return out;
}

Eigen::MatrixXd TsneLowDimAffinities(const Eigen::MatrixXd& y,
                                     double degrees_of_freedom) {
  const Eigen::Index n = y.rows();
  const double alpha = degrees_of_freedom;
  const double power = -(alpha + 1.0) / 2.0;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d2 = (y.row(i) - y.row(j)).squaredNorm();
      w(i, j) = w(j, i) = std::pow(1.0 + d2 / alpha, power);
    }
  }
  return w / w.sum();
}

double TsneObjective(const Eigen::MatrixXd& joint, const Eigen::MatrixXd& y,
                     double degrees_of_freedom, Eigen::MatrixXd* gradient) {
  const Eigen::Index n = y.rows();
  const double alpha = degrees_of_freedom;
  const double power = -(alpha + 1.0) / 2.0;

  Eigen::MatrixXd inv = Eigen::MatrixXd::Zero(n, n);  // (1 + d2/alpha)^-1
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double base = 1.0 + (y.row(i) - y.row(j)).squaredNorm() / alpha;
      inv(i, j) = inv(j, i) = 1.0 / base;
      w(i, j) = w(j, i) = std::pow(base, power);
    }
  }
  const double z = w.sum();
  double kl = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double p = joint(i, j);
      if (p <= 0.0) continue;
      const double q = std::max(w(i, j) / z, kMachineEpsilon);
      kl += p * std::log(std::max(p, kMachineEpsilon) / q);
    }
  }
  if (gradient != nullptr) {
    const double c = 2.0 * (alpha + 1.0) / alpha;
    gradient->setZero(n, y.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        const double coeff = (joint(i, j) - w(i, j) / z) * inv(i, j);
        gradient->row(i) += coeff * (y.row(i) - y.row(j));
      }
    }
    *gradient *= c;
  }
  return kl;
}

TsneResult TsneEmbed(const EmbeddingMatrix& x, const ReductionConfig& cfg) {
  cfg.Validate();
  const int n = x.n();
  if (!(static_cast<double>(n) > cfg.perplexity)) {
    throw ValidationError(fmt::format(
        "t-SNE needs more points ({}) than the perplexity ({})", n, cfg.perplexity));
  }
  const double alpha = cfg.ResolvedDegreesOfFreedom();
  const int dims = cfg.tsne_components;

  const Affinities affinities =
      CalibratePerplexity(SquaredEuclideanDistances(x.rows()), cfg.perplexity);
  Eigen::MatrixXd p = affinities.joint.cwiseMax(kMachineEpsilon);
  p.diagonal().setZero();

  Eigen::MatrixXd y = cfg.init == TsneInit::kPca
                          ? PcaInit(x, dims)
                          : GaussianInit(n, dims, 1e-4, cfg.seed);

  TsneResult result;
  result.kl_trace.reserve(cfg.tsne_iters + 1);
  Eigen::MatrixXd grad(n, dims);

  struct Stage {
    int begin, end;
    double p_scale, momentum;
  };
  const Stage stages[] = {
      {0, cfg.exaggeration_iters, cfg.exaggeration_factor, cfg.momentum},
      {cfg.exaggeration_iters, cfg.tsne_iters, 1.0, cfg.final_momentum},
  };
  // After exaggeration every step must not raise KL. A momentum step that
  // does is replaced by a backtracked plain gradient step, and the momentum
  // and gains restart. The objective at the accepted point is reused by the
  // next iteration.
  double kl = 0.0;
  for (const Stage& stage : stages) {
    const Eigen::MatrixXd stage_p = p * stage.p_scale;
    const bool guarded = stage.p_scale == 1.0;
    Eigen::MatrixXd update = Eigen::MatrixXd::Zero(n, dims);
    Eigen::MatrixXd gains = Eigen::MatrixXd::Ones(n, dims);
    if (stage.begin < stage.end) kl = TsneObjective(stage_p, y, alpha, &grad);
    for (int it = stage.begin; it < stage.end; ++it) {
      if (!grad.allFinite() || !std::isfinite(kl)) {
        throw NumericalError(fmt::format("t-SNE gradient diverged at iteration {}", it));
      }
      result.kl_trace.push_back(kl);
      for (Eigen::Index i = 0; i < grad.size(); ++i) {
        double& g = gains.data()[i];
        g = (update.data()[i] * grad.data()[i] < 0.0) ? g + 0.2 : g * 0.8;
        g = std::max(g, cfg.min_gain);
      }
      update = stage.momentum * update - cfg.learning_rate * gains.cwiseProduct(grad);
      Eigen::MatrixXd next_grad(n, dims);
      double next_kl = TsneObjective(stage_p, y + update, alpha, &next_grad);
      if (guarded && !(next_kl <= kl)) {
        gains.setOnes();
        update.setZero();
        next_kl = kl;
        next_grad = grad;
        for (double step = cfg.learning_rate / 2; step > kMinBacktrackStep; step /= 2) {
          Eigen::MatrixXd trial_grad(n, dims);
          const double trial_kl = TsneObjective(stage_p, y - step * grad, alpha, &trial_grad);
          if (trial_kl <= kl) {
            update = -step * grad;
            next_kl = trial_kl;
            next_grad = std::move(trial_grad);
            break;
          }
        }
      }
      y += update;
      kl = next_kl;
      grad = std::move(next_grad);
    }
  }
  result.kl_trace.push_back(TsneObjective(p, y, alpha));
  if (!y.allFinite()) throw NumericalError("t-SNE produced non-finite coordinates");
  result.embedding = EmbeddingMatrix(std::move(y), x.labels());
  return result;
}

EmbeddingMatrix ReduceEmbeddings(const EmbeddingMatrix& x,
                                 const ReductionConfig& cfg) {
  cfg.Validate();
  return TsneEmbed(PcaFitTransform(x, cfg.pca_components), cfg).embedding;
}

}  // namespace conceptual
