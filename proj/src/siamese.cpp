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

#include "hangul_coach/siamese.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>
#include <random>

namespace hangul_coach {
namespace {

using namespace net;

constexpr double kProbClamp = 1e-12;
constexpr char kMagic[4] = {'K', 'S', 'N', 'M'};
constexpr std::uint32_t kFormatVersion = 1;

// Uniform double in [0, 1) from the top 53 bits; identical on every platform,
// unlike std::uniform_real_distribution.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, bound).
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

// Forward activations of one twin, kept for the backward pass.
struct TwinTrace {
  std::vector<double> x = std::vector<double>(kInH * kInW);
  std::vector<double> z1 = std::vector<double>(kConv1Maps * kConv1H * kConv1W);
  std::vector<double> p1 = std::vector<double>(kConv1Maps * kPool1H * kPool1W);
  std::vector<std::uint32_t> p1_arg = std::vector<std::uint32_t>(kConv1Maps * kPool1H * kPool1W);
  std::vector<double> z2 = std::vector<double>(kConv2Maps * kConv2H * kConv2W);
  std::vector<double> flat = std::vector<double>(kFlat);
  std::vector<std::uint32_t> p2_arg = std::vector<std::uint32_t>(kFlat);
  std::vector<double> emb = std::vector<double>(kEmbedding);
};

void check_shape(const MfccMatrix& m) {
  if (m.frames() != kInputFrames || m.coeffs() != kInputCoeffs) {
    throw Error(Errc::ShapeMismatch, "expected " + std::to_string(kInputFrames) + "x" +
                                         std::to_string(kInputCoeffs) + " MFCC input, got " +
                                         std::to_string(m.frames()) + "x" + std::to_string(m.coeffs()));
  }
}

// ReLU followed by 2x2 max-pool (odd trailing row/column dropped). Records
// the flat index into `z` of each window's winner.
void relu_maxpool(const std::vector<double>& z, std::size_t maps, std::size_t h, std::size_t w,
                  double* out, std::uint32_t* arg) {
  const std::size_t oh = h / 2;
  const std::size_t ow = w / 2;
  for (std::size_t c = 0; c < maps; ++c) {
    for (std::size_t i = 0; i < oh; ++i) {
      for (std::size_t j = 0; j < ow; ++j) {
        const std::size_t base = (c * h + 2 * i) * w + 2 * j;
        const std::size_t cand[4] = {base, base + 1, base + w, base + w + 1};
        std::size_t best = cand[0];
        double best_v = std::max(z[cand[0]], 0.0);
        for (int k = 1; k < 4; ++k) {
          const double v = std::max(z[cand[k]], 0.0);
          if (v > best_v) {
            best_v = v;
            best = cand[k];
          }
        }
        const std::size_t o = (c * oh + i) * ow + j;
        out[o] = best_v;
        arg[o] = static_cast<std::uint32_t>(best);
      }
    }
  }
}

void forward(const SiameseModel& model, const MfccMatrix& m, TwinTrace& t) {
  check_shape(m);
  for (std::size_t h = 0; h < kInH; ++h) {
    for (std::size_t w = 0; w < kInW; ++w) t.x[h * kInW + w] = m.at(w, h);
  }

  const double* w1 = model.conv1_w.values.data();
  for (std::size_t c = 0; c < kConv1Maps; ++c) {
    double* z = t.z1.data() + c * kConv1H * kConv1W;
    std::fill(z, z + kConv1H * kConv1W, model.conv1_b.values[c]);
    for (std::size_t kh = 0; kh < kConv1KernelH; ++kh) {
      for (std::size_t kw = 0; kw < kConv1KernelW; ++kw) {
        const double wv = w1[(c * kConv1KernelH + kh) * kConv1KernelW + kw];
        for (std::size_t oh = 0; oh < kConv1H; ++oh) {
          const double* xrow = t.x.data() + (oh + kh) * kInW + kw;
          double* zrow = z + oh * kConv1W;
          for (std::size_t ow = 0; ow < kConv1W; ++ow) zrow[ow] += wv * xrow[ow];
        }
      }
    }
  }
  relu_maxpool(t.z1, kConv1Maps, kConv1H, kConv1W, t.p1.data(), t.p1_arg.data());

  const double* w2 = model.conv2_w.values.data();
  for (std::size_t c = 0; c < kConv2Maps; ++c) {
    double* z = t.z2.data() + c * kConv2H * kConv2W;
    std::fill(z, z + kConv2H * kConv2W, model.conv2_b.values[c]);
    for (std::size_t ci = 0; ci < kConv1Maps; ++ci) {
      const double* p = t.p1.data() + ci * kPool1H * kPool1W;
      for (std::size_t kh = 0; kh < kConv2KernelH; ++kh) {
        for (std::size_t kw = 0; kw < kConv2KernelW; ++kw) {
          const double wv = w2[((c * kConv1Maps + ci) * kConv2KernelH + kh) * kConv2KernelW + kw];
          for (std::size_t oh = 0; oh < kConv2H; ++oh) {
            const double* prow = p + (oh + kh) * kPool1W + kw;
            double* zrow = z + oh * kConv2W;
            for (std::size_t ow = 0; ow < kConv2W; ++ow) zrow[ow] += wv * prow[ow];
          }
        }
      }
    }
  }
  relu_maxpool(t.z2, kConv2Maps, kConv2H, kConv2W, t.flat.data(), t.p2_arg.data());

  std::vector<double> u(model.fc_b.values);
  const double* fw = model.fc_w.values.data();
  for (std::size_t i = 0; i < kFlat; ++i) {
    const double xi = t.flat[i];
    if (xi == 0.0) continue;
    const double* row = fw + i * kEmbedding;
    for (std::size_t j = 0; j < kEmbedding; ++j) u[j] += xi * row[j];
  }
  for (std::size_t j = 0; j < kEmbedding; ++j) t.emb[j] = sigmoid(u[j]);
}

// Accumulates d(loss)/d(params) for one twin given d(loss)/d(embedding).
void backward(const SiameseModel& model, const TwinTrace& t, const std::vector<double>& d_emb,
              SiameseModel& grad) {
  std::vector<double> du(kEmbedding);
  for (std::size_t j = 0; j < kEmbedding; ++j) du[j] = d_emb[j] * t.emb[j] * (1.0 - t.emb[j]);

  std::vector<double> d_flat(kFlat, 0.0);
  const double* fw = model.fc_w.values.data();
  double* gfw = grad.fc_w.values.data();
  for (std::size_t i = 0; i < kFlat; ++i) {
    const double xi = t.flat[i];
    const double* row = fw + i * kEmbedding;
    double* grow = gfw + i * kEmbedding;
    double acc = 0.0;
    for (std::size_t j = 0; j < kEmbedding; ++j) {
      grow[j] += xi * du[j];
      acc += row[j] * du[j];
    }
    d_flat[i] = acc;
  }
  for (std::size_t j = 0; j < kEmbedding; ++j) grad.fc_b.values[j] += du[j];

  // Unpool into conv2 pre-activations; the ReLU gate zeroes non-positive z.
  std::vector<double> dz2(t.z2.size(), 0.0);
  for (std::size_t i = 0; i < kFlat; ++i) {
    const std::uint32_t k = t.p2_arg[i];
    if (t.z2[k] > 0.0) dz2[k] += d_flat[i];
  }

  std::vector<double> dp1(t.p1.size(), 0.0);
  const double* w2 = model.conv2_w.values.data();
  double* gw2 = grad.conv2_w.values.data();
  for (std::size_t c = 0; c < kConv2Maps; ++c) {
    const double* dz = dz2.data() + c * kConv2H * kConv2W;
    double bias_acc = 0.0;
    for (std::size_t k = 0; k < kConv2H * kConv2W; ++k) bias_acc += dz[k];
    grad.conv2_b.values[c] += bias_acc;
    for (std::size_t ci = 0; ci < kConv1Maps; ++ci) {
      const double* p = t.p1.data() + ci * kPool1H * kPool1W;
      double* dp = dp1.data() + ci * kPool1H * kPool1W;
      for (std::size_t kh = 0; kh < kConv2KernelH; ++kh) {
        for (std::size_t kw = 0; kw < kConv2KernelW; ++kw) {
          const std::size_t widx = ((c * kConv1Maps + ci) * kConv2KernelH + kh) * kConv2KernelW + kw;
          const double wv = w2[widx];
          double acc = 0.0;
          for (std::size_t oh = 0; oh < kConv2H; ++oh) {
            const double* prow = p + (oh + kh) * kPool1W + kw;
            double* dprow = dp + (oh + kh) * kPool1W + kw;
            const double* dzrow = dz + oh * kConv2W;
            for (std::size_t ow = 0; ow < kConv2W; ++ow) {
              acc += dzrow[ow] * prow[ow];
              dprow[ow] += wv * dzrow[ow];
            }
          }
          gw2[widx] += acc;
        }
      }
    }
  }

  std::vector<double> dz1(t.z1.size(), 0.0);
  for (std::size_t i = 0; i < dp1.size(); ++i) {
    const std::uint32_t k = t.p1_arg[i];
    if (t.z1[k] > 0.0) dz1[k] += dp1[i];
  }

  double* gw1 = grad.conv1_w.values.data();
  for (std::size_t c = 0; c < kConv1Maps; ++c) {
    const double* dz = dz1.data() + c * kConv1H * kConv1W;
    double bias_acc = 0.0;
    for (std::size_t k = 0; k < kConv1H * kConv1W; ++k) bias_acc += dz[k];
    grad.conv1_b.values[c] += bias_acc;
    for (std::size_t kh = 0; kh < kConv1KernelH; ++kh) {
      for (std::size_t kw = 0; kw < kConv1KernelW; ++kw) {
        double acc = 0.0;
        for (std::size_t oh = 0; oh < kConv1H; ++oh) {
          const double* xrow = t.x.data() + (oh + kh) * kInW + kw;
          const double* dzrow = dz + oh * kConv1W;
          for (std::size_t ow = 0; ow < kConv1W; ++ow) acc += dzrow[ow] * xrow[ow];
        }
        gw1[(c * kConv1KernelH + kh) * kConv1KernelW + kw] += acc;
      }
    }
  }
}

double head_logit(const SiameseModel& model, const std::vector<double>& ea,
                  const std::vector<double>& eb) {
  double s = model.head_b.values[0];
  for (std::size_t j = 0; j < kEmbedding; ++j) s += model.head_alpha.values[j] * std::abs(ea[j] - eb[j]);
  return s;
}

void record_pattern(const TwinTrace& t, ActivationPattern& p) {
  for (double z : t.z1) p.relu_signs.push_back(z > 0.0);
  for (double z : t.z2) p.relu_signs.push_back(z > 0.0);
  p.pool_choices.insert(p.pool_choices.end(), t.p1_arg.begin(), t.p1_arg.end());
  p.pool_choices.insert(p.pool_choices.end(), t.p2_arg.begin(), t.p2_arg.end());
}

template <typename PairRange>
double loss_and_gradients(const SiameseModel& model, const PairRange& batch, SiameseModel* grad,
                          ActivationPattern* pattern) {
  if (batch.empty()) throw Error(Errc::InvalidArgument, "empty batch");
  const double scale = 1.0 / static_cast<double>(batch.size());
  TwinTrace ta;
  TwinTrace tb;
  std::vector<double> d_ea(kEmbedding);
  std::vector<double> d_eb(kEmbedding);
  double total = 0.0;
  for (const auto& item : batch) {
    const PairExample& pair = [&]() -> const PairExample& {
      if constexpr (std::is_pointer_v<std::decay_t<decltype(item)>>) {
        return *item;
      } else {
        return item;
      }
    }();
    forward(model, pair.a, ta);
    forward(model, pair.b, tb);
    const double p = sigmoid(head_logit(model, ta.emb, tb.emb));
    total += bce_loss(p, pair.label);
    if (pattern) {
      record_pattern(ta, *pattern);
      record_pattern(tb, *pattern);
      for (std::size_t j = 0; j < kEmbedding; ++j) {
        const double d = ta.emb[j] - tb.emb[j];
        pattern->head_signs.push_back(static_cast<std::int8_t>((d > 0.0) - (d < 0.0)));
      }
    }
    if (!grad) continue;

    // d(BCE)/d(logit) = p - y for the sigmoid head.
    const double g = (p - pair.label) * scale;
    grad->head_b.values[0] += g;
    bool any_distance = false;
    for (std::size_t j = 0; j < kEmbedding; ++j) {
      const double d = ta.emb[j] - tb.emb[j];
      grad->head_alpha.values[j] += g * std::abs(d);
      const double sign = (d > 0.0) - (d < 0.0);
      d_ea[j] = g * model.head_alpha.values[j] * sign;
      d_eb[j] = -d_ea[j];
      any_distance = any_distance || d != 0.0;
    }
    // Identical embeddings give |d| = 0 at its kink; the subgradient 0 leaves
    // the embedding untouched.
    if (any_distance) {
      backward(model, ta, d_ea, *grad);
      backward(model, tb, d_eb, *grad);
    }
  }
  return total * scale;
}

bool all_finite(const SiameseModel& m) {
  for (const Tensor& t : m.tensors()) {
    for (double v : t.values) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) {
      throw Error(Errc::TruncatedFile, std::string("file ends inside ") + what);
    }
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  double f64(const char* what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(v);
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

Tensor::Tensor(std::vector<std::uint32_t> shape) : dims(std::move(shape)) {
  std::size_t n = 1;
  for (std::uint32_t d : dims) n *= d;
  values.assign(n, 0.0);
}

std::array<std::reference_wrapper<Tensor>, 8> SiameseModel::tensors() {
  return {conv1_w, conv1_b, conv2_w, conv2_b, fc_w, fc_b, head_alpha, head_b};
}

std::array<std::reference_wrapper<const Tensor>, 8> SiameseModel::tensors() const {
  return {conv1_w, conv1_b, conv2_w, conv2_b, fc_w, fc_b, head_alpha, head_b};
}

std::size_t SiameseModel::parameter_count() const {
  std::size_t n = 0;
  for (const Tensor& t : tensors()) n += t.size();
  return n;
}

SiameseModel init_model(std::uint64_t seed) {
  SiameseModel m;
  std::mt19937_64 rng(seed);
  auto xavier = [&rng](Tensor& t, double fan_in, double fan_out) {
    const double r = std::sqrt(6.0 / (fan_in + fan_out));
    for (double& v : t.values) v = -r + 2.0 * r * unit_uniform(rng);
  };
  constexpr double k1 = kConv1KernelH * kConv1KernelW;
  constexpr double k2 = kConv2KernelH * kConv2KernelW;
  xavier(m.conv1_w, 1 * k1, kConv1Maps * k1);
  xavier(m.conv2_w, kConv1Maps * k2, kConv2Maps * k2);
  xavier(m.fc_w, kFlat, kEmbedding);
  std::fill(m.head_alpha.values.begin(), m.head_alpha.values.end(), 1.0);
  return m;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::vector<double> embed(const SiameseModel& model, const MfccMatrix& m) {
  TwinTrace t;
  forward(model, m, t);
  return t.emb;
}

double similarity(const SiameseModel& model, const MfccMatrix& a, const MfccMatrix& b) {
  TwinTrace ta;
  TwinTrace tb;
  forward(model, a, ta);
  forward(model, b, tb);
  return sigmoid(head_logit(model, ta.emb, tb.emb));
}

double bce_loss(double p, int label) {
  const double q = std::clamp(p, kProbClamp, 1.0 - kProbClamp);
  const double y = label;
  return -(y * std::log(q) + (1.0 - y) * std::log(1.0 - q));
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw Error(Errc::InvalidConfig, "learning_rate must be positive");
  if (batch_size < 1) throw Error(Errc::InvalidConfig, "batch_size must be at least 1");
}

double batch_loss(const SiameseModel& model, std::span<const PairExample> batch,
                  ActivationPattern* pattern) {
  return loss_and_gradients(model, batch, nullptr, pattern);
}

SiameseModel compute_gradients(const SiameseModel& model, std::span<const PairExample> batch,
                               double* mean_loss) {
  SiameseModel grad;
  const double loss = loss_and_gradients(model, batch, &grad, nullptr);
  if (!std::isfinite(loss) || !all_finite(grad)) {
    throw Error(Errc::NonFiniteLoss, "non-finite loss or gradient");
  }
  if (mean_loss) *mean_loss = loss;
  return grad;
}

Trainer::Trainer(SiameseModel model, TrainConfig config)
    : model_(std::move(model)), config_(config) {
  config_.validate();
}

double Trainer::train_step(std::span<const PairExample> batch) {
  std::vector<const PairExample*> ptrs;
  ptrs.reserve(batch.size());
  for (const PairExample& p : batch) ptrs.push_back(&p);
  return train_step(std::span<const PairExample* const>(ptrs));
}

double Trainer::train_step(std::span<const PairExample* const> batch) {
  SiameseModel grad;
  const double loss = loss_and_gradients(model_, batch, &grad, nullptr);
  if (!std::isfinite(loss) || !all_finite(grad)) {
    throw Error(Errc::NonFiniteLoss, "non-finite loss or gradient at step " + std::to_string(step_ + 1));
  }

  ++step_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  auto params = model_.tensors();
  auto grads = grad.tensors();
  auto m1 = first_moment_.tensors();
  auto m2 = second_moment_.tensors();
  for (std::size_t t = 0; t < params.size(); ++t) {
    std::vector<double>& w = params[t].get().values;
    const std::vector<double>& g = grads[t].get().values;
    std::vector<double>& m = m1[t].get().values;
    std::vector<double>& v = m2[t].get().values;
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = b1 * m[i] + (1.0 - b1) * g[i];
      v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      w[i] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
  }
  return loss;
}

TrainResult train(SiameseModel model, std::span<const PairExample> dataset,
                  const TrainConfig& config,
                  const std::function<void(std::size_t, double)>& on_epoch) {
  config.validate();
  TrainResult result;
  if (config.epochs == 0) {
    result.model = std::move(model);
    return result;
  }
  if (dataset.empty()) throw Error(Errc::InvalidArgument, "empty training set");

  Trainer trainer(std::move(model), config);
  std::mt19937_64 rng(config.seed);
  std::vector<const PairExample*> order;
  order.reserve(dataset.size());
  for (const PairExample& p : dataset) order.push_back(&p);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    // Fisher-Yates with our own bounded draw so the order is portable.
    for (std::size_t i = order.size() - 1; i > 0; --i) {
      std::swap(order[i], order[bounded(rng, i + 1)]);
    }
    double weighted = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t len = std::min(config.batch_size, order.size() - start);
      try {
        const double loss =
            trainer.train_step(std::span<const PairExample* const>(order.data() + start, len));
        weighted += loss * static_cast<double>(len);
      } catch (const Error& e) {
        throw TrainingAborted("epoch " + std::to_string(epoch + 1) + ": " + e.detail(),
                              std::move(result.history));
      }
    }
    const double epoch_loss = weighted / static_cast<double>(order.size());
    result.history.push_back(epoch_loss);
    if (on_epoch) on_epoch(epoch + 1, epoch_loss);
  }
  result.model = std::move(trainer).release();
  return result;
}

std::vector<std::uint8_t> serialize_model(const SiameseModel& model) {
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put_u32(out, kFormatVersion);
  for (const Tensor& t : model.tensors()) {
    put_u32(out, static_cast<std::uint32_t>(t.dims.size()));
    for (std::uint32_t d : t.dims) put_u32(out, d);
    for (double v : t.values) put_f64(out, v);
  }
  return out;
}

SiameseModel deserialize_model(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw Error(Errc::TruncatedFile, "file shorter than the magic number");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw Error(Errc::BadMagic, "not a KSNM model file");
  Reader in(bytes.subspan(4));
  const std::uint32_t version = in.u32("version");
  if (version != kFormatVersion) {
    throw Error(Errc::UnsupportedVersion, "model format version " + std::to_string(version));
  }

  SiameseModel m;
  auto tensors = m.tensors();
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    Tensor& t = tensors[i];
    const std::string name(SiameseModel::kTensorNames[i]);
    const std::uint32_t rank = in.u32("tensor rank");
    std::vector<std::uint32_t> dims(rank);
    for (std::uint32_t& d : dims) d = in.u32("tensor dims");
    if (dims != t.dims) throw Error(Errc::ShapeMismatch, name + " has unexpected dimensions");
    for (double& v : t.values) {
      v = in.f64("tensor values");
      if (!std::isfinite(v)) throw Error(Errc::InvalidArgument, name + " holds a non-finite value");
    }
  }
  if (in.remaining() != 0) throw Error(Errc::InvalidArgument, "trailing bytes after last tensor");
  return m;
}

void save_model(const SiameseModel& model, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = serialize_model(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::IoError, "short write to " + path.string());
}

SiameseModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                        std::istreambuf_iterator<char>()};
  return deserialize_model(bytes);
}

}  // namespace hangul_coach
