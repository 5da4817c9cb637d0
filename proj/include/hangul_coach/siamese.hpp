// Copyright 2026 The Hangul Coach Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Twin convolutional network scoring the acoustic similarity of two MFCC
// matrices.
//
// Each twin sees a 200x13 MFCC matrix as a one-channel 13x200 image:
//
//   conv 8@3x7 -> ReLU -> maxpool 2x2 -> conv 16@8x3x5 -> ReLU -> maxpool 2x2
//     -> flatten (736) -> dense 64 -> sigmoid
//
// Both twins read the same parameters. The head maps the two embeddings to
//
//   p = sigmoid(sum_j alpha_j |ea_j - eb_j| + b)
//
// and training minimizes binary cross-entropy with Adam.

#ifndef HANGUL_COACH_SIAMESE_HPP
#define HANGUL_COACH_SIAMESE_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "hangul_coach/error.hpp"
#include "hangul_coach/mfcc.hpp"

namespace hangul_coach {

namespace net {
inline constexpr std::size_t kInputFrames = 200;
inline constexpr std::size_t kInputCoeffs = 13;

inline constexpr std::size_t kConv1Maps = 8;
inline constexpr std::size_t kConv1KernelH = 3;
inline constexpr std::size_t kConv1KernelW = 7;
inline constexpr std::size_t kConv2Maps = 16;
inline constexpr std::size_t kConv2KernelH = 3;
inline constexpr std::size_t kConv2KernelW = 5;

// Image height is the coefficient axis, width the frame axis.
inline constexpr std::size_t kInH = kInputCoeffs;
inline constexpr std::size_t kInW = kInputFrames;
inline constexpr std::size_t kConv1H = kInH - kConv1KernelH + 1;
inline constexpr std::size_t kConv1W = kInW - kConv1KernelW + 1;
inline constexpr std::size_t kPool1H = kConv1H / 2;
inline constexpr std::size_t kPool1W = kConv1W / 2;
inline constexpr std::size_t kConv2H = kPool1H - kConv2KernelH + 1;
inline constexpr std::size_t kConv2W = kPool1W - kConv2KernelW + 1;
inline constexpr std::size_t kPool2H = kConv2H / 2;
inline constexpr std::size_t kPool2W = kConv2W / 2;
inline constexpr std::size_t kFlat = kConv2Maps * kPool2H * kPool2W;
inline constexpr std::size_t kEmbedding = 64;

static_assert(kFlat == 736);
}  // namespace net

/// Dense row-major tensor. Rank 0 holds one value.
struct Tensor {
  std::vector<std::uint32_t> dims;
  std::vector<double> values;

  explicit Tensor(std::vector<std::uint32_t> shape = {});
  std::size_t size() const { return values.size(); }
  bool operator==(const Tensor&) const = default;
};

/// One copy of every parameter; both twins use it.
struct SiameseModel {
  Tensor conv1_w{{net::kConv1Maps, net::kConv1KernelH, net::kConv1KernelW}};
  Tensor conv1_b{{net::kConv1Maps}};
  Tensor conv2_w{{net::kConv2Maps, net::kConv1Maps, net::kConv2KernelH, net::kConv2KernelW}};
  Tensor conv2_b{{net::kConv2Maps}};
  Tensor fc_w{{net::kFlat, net::kEmbedding}};
  Tensor fc_b{{net::kEmbedding}};
  Tensor head_alpha{{net::kEmbedding}};
  Tensor head_b{{}};

  static constexpr std::array<std::string_view, 8> kTensorNames = {
      "conv1.w", "conv1.b", "conv2.w", "conv2.b", "fc.w", "fc.b", "head.alpha", "head.b"};

  /// All tensors in serialization order.
  std::array<std::reference_wrapper<Tensor>, 8> tensors();
  std::array<std::reference_wrapper<const Tensor>, 8> tensors() const;

  std::size_t parameter_count() const;
  double head_bias() const { return head_b.values[0]; }

  bool operator==(const SiameseModel&) const = default;
};

/// Xavier-uniform conv/dense weights, zero biases, alpha = 1, b = 0.
SiameseModel init_model(std::uint64_t seed);

double sigmoid(double x);

/// Throws Error{ShapeMismatch} unless m is 200x13.
std::vector<double> embed(const SiameseModel& model, const MfccMatrix& m);

double similarity(const SiameseModel& model, const MfccMatrix& a, const MfccMatrix& b);

/// Probability is clamped to [1e-12, 1 - 1e-12] before the logs.
double bce_loss(double p, int label);

struct PairExample {
  MfccMatrix a;
  MfccMatrix b;
  int label = 0;  // 1 similar, 0 dissimilar
};

struct TrainConfig {
  double learning_rate = 1e-3;
  std::size_t batch_size = 16;
  std::size_t epochs = 0;
  std::uint64_t seed = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

/// Which side of every non-differentiable point (ReLU, max-pool choice,
/// |.| in the head) a forward pass landed on.
struct ActivationPattern {
  std::vector<std::uint8_t> relu_signs;
  std::vector<std::uint32_t> pool_choices;
  std::vector<std::int8_t> head_signs;
  bool operator==(const ActivationPattern&) const = default;
};

/// Mean BCE over the batch; optionally records the activation pattern.
double batch_loss(const SiameseModel& model, std::span<const PairExample> batch,
                  ActivationPattern* pattern = nullptr);

/// Gradient of the mean batch BCE. Returned in a model-shaped container;
/// twin contributions are summed into the one shared set of parameters.
/// Throws Error{NonFiniteLoss}.
SiameseModel compute_gradients(const SiameseModel& model, std::span<const PairExample> batch,
                               double* mean_loss = nullptr);

/// Owns a model and its Adam state. Single writer.
class Trainer {
 public:
  Trainer(SiameseModel model, TrainConfig config);

  /// One Adam update from the mean BCE over `batch`; returns that loss.
  /// Throws Error{NonFiniteLoss} without touching the model.
  double train_step(std::span<const PairExample> batch);
  double train_step(std::span<const PairExample* const> batch);

  const SiameseModel& model() const { return model_; }
  SiameseModel release() && { return std::move(model_); }
  std::uint64_t steps() const { return step_; }

 private:
  SiameseModel model_;
  TrainConfig config_;
  SiameseModel first_moment_;
  SiameseModel second_moment_;
  std::uint64_t step_ = 0;
};

struct TrainResult {
  SiameseModel model;
  std::vector<double> history;  // mean loss per epoch
};

/// Thrown by train() on divergence; carries the per-epoch history so far.
class TrainingAborted : public Error {
 public:
  TrainingAborted(const std::string& detail, std::vector<double> history)
      : Error(Errc::NonFiniteLoss, detail), history_(std::move(history)) {}
  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

/// Shuffles with a generator seeded from config.seed at the start of each
/// epoch, then steps through mini-batches. `on_epoch` sees (epoch, loss).
TrainResult train(SiameseModel model, std::span<const PairExample> dataset,
                  const TrainConfig& config,
                  const std::function<void(std::size_t, double)>& on_epoch = {});

/// "KSNM" v1: magic, u32 version, then per tensor u32 rank, u32 dims,
/// float64 values, all little-endian.
std::vector<std::uint8_t> serialize_model(const SiameseModel& model);
/// Throws Error{BadMagic | UnsupportedVersion | TruncatedFile | ShapeMismatch}.
SiameseModel deserialize_model(std::span<const std::uint8_t> bytes);
void save_model(const SiameseModel& model, const std::filesystem::path& path);
SiameseModel load_model(const std::filesystem::path& path);

}  // namespace hangul_coach

#endif  // HANGUL_COACH_SIAMESE_HPP
