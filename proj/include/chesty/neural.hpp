#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <string>
#include <vector>

#include "chesty/util.hpp"

// Embedding -> Conv1D(ReLU) -> MaxPool1D(2) -> Flatten -> Dense(sigmoid),
// with hand-written backward passes. Everything is templated on the scalar so
// the float training path and the double gradient checks share one code path.
namespace chesty::nn {

using Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
/// [batch x input_length] token indices.
using IndexBatch = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense row-major tensor; product(shape) == size().
template <typename Scalar>
class Tensor {
  public:
    Tensor() = default;
    explicit Tensor(std::vector<Index> shape) : shape_(std::move(shape)) {
        Index n = std::accumulate(shape_.begin(), shape_.end(), Index{1}, std::multiplies<>());
        data_ = Vector<Scalar>::Zero(n);
    }

    const std::vector<Index>& shape() const { return shape_; }
    Index dim(std::size_t i) const { return shape_.at(i); }
    Index rank() const { return static_cast<Index>(shape_.size()); }
    Index size() const { return data_.size(); }
    Scalar* data() { return data_.data(); }
    const Scalar* data() const { return data_.data(); }
    Vector<Scalar>& values() { return data_; }
    const Vector<Scalar>& values() const { return data_; }

    /// Rank-3 view of example b as a [dim(1) x dim(2)] matrix.
    Eigen::Map<Matrix<Scalar>> slice(Index b) {
        return {data_.data() + b * dim(1) * dim(2), dim(1), dim(2)};
    }
    Eigen::Map<const Matrix<Scalar>> slice(Index b) const {
        return {data_.data() + b * dim(1) * dim(2), dim(1), dim(2)};
    }
    /// [dim(0) x rest] view, i.e. the flattened batch.
    Eigen::Map<Matrix<Scalar>> as_matrix() { return {data_.data(), dim(0), size() / std::max<Index>(dim(0), 1)}; }
    Eigen::Map<const Matrix<Scalar>> as_matrix() const {
        return {data_.data(), dim(0), size() / std::max<Index>(dim(0), 1)};
    }

    Scalar& at(Index b, Index t, Index c) { return data_[(b * dim(1) + t) * dim(2) + c]; }
    Scalar at(Index b, Index t, Index c) const { return data_[(b * dim(1) + t) * dim(2) + c]; }

  private:
    std::vector<Index> shape_;
    Vector<Scalar> data_;
};

struct Architecture {
    Index input_dim = 1536;
    Index input_length = 64;
    Index dense_vectors = 16;
    Index num_filters = 32;
    Index kernel = 5;

    Index conv_length() const { return input_length - kernel + 1; }
    Index pooled_length() const { return conv_length() / 2; }
    Index flatten_length() const { return pooled_length() * num_filters; }

    void validate() const {
        if (input_dim < 2 || dense_vectors < 1 || num_filters < 1 || kernel < 1)
            throw ShapeError("architecture dimensions must be positive");
        if (input_length < kernel + 1) throw ShapeError("input_length too short for the convolution and pooling");
    }
    friend bool operator==(const Architecture&, const Architecture&) = default;
};

template <typename Scalar>
struct LayerParams {
    Matrix<Scalar> embedding;     // input_dim x dense_vectors
    Matrix<Scalar> conv_weights;  // num_filters x (kernel * dense_vectors); column = tap * D + channel
    Vector<Scalar> conv_bias;     // num_filters
    Vector<Scalar> dense_weights; // flatten_length
    Vector<Scalar> dense_bias;    // 1

    static LayerParams zeros(const Architecture& a) {
        LayerParams p;
        p.embedding = Matrix<Scalar>::Zero(a.input_dim, a.dense_vectors);
        p.conv_weights = Matrix<Scalar>::Zero(a.num_filters, a.kernel * a.dense_vectors);
        p.conv_bias = Vector<Scalar>::Zero(a.num_filters);
        p.dense_weights = Vector<Scalar>::Zero(a.flatten_length());
        p.dense_bias = Vector<Scalar>::Zero(1);
        return p;
    }

    /// Flat views over every trainable array, in checkpoint order.
    std::array<Eigen::Map<Vector<Scalar>>, 5> arrays() {
        return {Eigen::Map<Vector<Scalar>>(embedding.data(), embedding.size()),
                Eigen::Map<Vector<Scalar>>(conv_weights.data(), conv_weights.size()),
                Eigen::Map<Vector<Scalar>>(conv_bias.data(), conv_bias.size()),
                Eigen::Map<Vector<Scalar>>(dense_weights.data(), dense_weights.size()),
                Eigen::Map<Vector<Scalar>>(dense_bias.data(), dense_bias.size())};
    }

    Index parameter_count() const {
        return embedding.size() + conv_weights.size() + conv_bias.size() + dense_weights.size() + dense_bias.size();
    }

    template <typename Other>
    LayerParams<Other> cast() const {
        return {embedding.template cast<Other>(), conv_weights.template cast<Other>(),
                conv_bias.template cast<Other>(), dense_weights.template cast<Other>(),
                dense_bias.template cast<Other>()};
    }

    void check(const Architecture& a) const {
        if (embedding.rows() != a.input_dim || embedding.cols() != a.dense_vectors ||
            conv_weights.rows() != a.num_filters || conv_weights.cols() != a.kernel * a.dense_vectors ||
            conv_bias.size() != a.num_filters || dense_weights.size() != a.flatten_length() || dense_bias.size() != 1)
            throw ShapeError("parameters do not match the architecture");
    }
};

/// Embeddings uniform(-0.05, 0.05); conv and dense weights uniform with bound
/// 1/sqrt(fan_in); biases zero.
template <typename Scalar>
LayerParams<Scalar> init_params(const Architecture& a, std::uint64_t seed) {
    a.validate();
    Rng rng(seed);
    auto p = LayerParams<Scalar>::zeros(a);
    for (Index i = 0; i < p.embedding.size(); ++i) p.embedding.data()[i] = static_cast<Scalar>(rng.uniform(-0.05, 0.05));
    const double conv_bound = 1.0 / std::sqrt(static_cast<double>(a.kernel * a.dense_vectors));
    for (Index i = 0; i < p.conv_weights.size(); ++i)
        p.conv_weights.data()[i] = static_cast<Scalar>(rng.uniform(-conv_bound, conv_bound));
    const double dense_bound = 1.0 / std::sqrt(static_cast<double>(a.flatten_length()));
    for (Index i = 0; i < p.dense_weights.size(); ++i)
        p.dense_weights[i] = static_cast<Scalar>(rng.uniform(-dense_bound, dense_bound));
    return p;
}

// ---------------------------------------------------------------------------
// Layer kernels

/// Row t of example b is embedding row indices(b, t).
template <typename Scalar>
Tensor<Scalar> embed_forward(const IndexBatch& indices, const Matrix<Scalar>& embedding) {
    Tensor<Scalar> out({indices.rows(), indices.cols(), embedding.cols()});
    for (Index b = 0; b < indices.rows(); ++b) {
        auto x = out.slice(b);
        for (Index t = 0; t < indices.cols(); ++t) {
            auto idx = indices(b, t);
            if (idx < 0 || idx >= embedding.rows()) throw InvalidInput("token index out of vocabulary range");
            x.row(t) = embedding.row(idx);
        }
    }
    return out;
}

template <typename Scalar>
void embed_backward(const IndexBatch& indices, const Tensor<Scalar>& grad_out, Matrix<Scalar>& grad_embedding) {
    for (Index b = 0; b < indices.rows(); ++b) {
        auto g = grad_out.slice(b);
        for (Index t = 0; t < indices.cols(); ++t) grad_embedding.row(indices(b, t)) += g.row(t);
    }
}

namespace detail {

// Overlapping [out_len x kernel*C] window view over a row-major [L x C] slice:
// row t is the contiguous block of rows t..t+kernel-1.
template <typename Scalar>
Eigen::Map<const Matrix<Scalar>, 0, Eigen::OuterStride<>> windows(const Scalar* data, Index out_len, Index kernel,
                                                                   Index channels) {
    return {data, out_len, kernel * channels, Eigen::OuterStride<>(channels)};
}

}  // namespace detail

/// Valid 1-D convolution along time; returns pre-activations [B x (L-K+1) x F].
template <typename Scalar>
Tensor<Scalar> conv1d_forward(const Tensor<Scalar>& x, const Matrix<Scalar>& weights, const Vector<Scalar>& bias,
                              Index kernel) {
    const Index length = x.dim(1), channels = x.dim(2);
    if (length < kernel) throw ShapeError("sequence shorter than the convolution kernel");
    if (weights.cols() != kernel * channels || weights.rows() != bias.size())
        throw ShapeError("convolution weights do not match the input channels");
    const Index out_len = length - kernel + 1;
    Tensor<Scalar> out({x.dim(0), out_len, weights.rows()});
    for (Index b = 0; b < x.dim(0); ++b) {
        auto patches = detail::windows(x.slice(b).data(), out_len, kernel, channels);
        auto y = out.slice(b);
        y.noalias() = patches * weights.transpose();
        y.rowwise() += bias.transpose();
    }
    return out;
}

/// Accumulates weight/bias gradients and returns the gradient wrt x.
template <typename Scalar>
Tensor<Scalar> conv1d_backward(const Tensor<Scalar>& x, const Matrix<Scalar>& weights, const Tensor<Scalar>& grad_out,
                               Index kernel, Matrix<Scalar>& grad_weights, Vector<Scalar>& grad_bias) {
    const Index channels = x.dim(2), out_len = grad_out.dim(1);
    Tensor<Scalar> grad_x(x.shape());
    Matrix<Scalar> grad_patches;
    for (Index b = 0; b < x.dim(0); ++b) {
        auto patches = detail::windows(x.slice(b).data(), out_len, kernel, channels);
        auto g = grad_out.slice(b);
        grad_weights.noalias() += g.transpose() * patches;
        grad_bias += g.colwise().sum().transpose();
        grad_patches.noalias() = g * weights;
        Scalar* gx = grad_x.slice(b).data();
        for (Index t = 0; t < out_len; ++t) {
            Eigen::Map<Vector<Scalar>>(gx + t * channels, kernel * channels) += grad_patches.row(t).transpose();
        }
    }
    return grad_x;
}

template <typename Scalar>
Tensor<Scalar> relu_forward(Tensor<Scalar> x) {
    x.values() = x.values().cwiseMax(Scalar(0));
    return x;
}

/// `pre` is the input that went into relu_forward.
template <typename Scalar>
Tensor<Scalar> relu_backward(const Tensor<Scalar>& pre, Tensor<Scalar> grad_out) {
    grad_out.values() = (pre.values().array() > Scalar(0)).select(grad_out.values(), Scalar(0));
    return grad_out;
}

template <typename Scalar>
struct PoolResult {
    Tensor<Scalar> output;
    std::vector<Index> argmax;  // flat input offset feeding each output element
};

/// Non-overlapping window 2, stride 2; an odd trailing step is dropped.
/// Equal pair values route to the earlier step.
template <typename Scalar>
PoolResult<Scalar> maxpool1d_forward(const Tensor<Scalar>& x) {
    const Index steps = x.dim(1), features = x.dim(2);
    if (steps < 2) throw ShapeError("max pooling needs at least 2 time steps");
    const Index out_steps = steps / 2;
    PoolResult<Scalar> r{Tensor<Scalar>({x.dim(0), out_steps, features}), {}};
    r.argmax.resize(static_cast<std::size_t>(r.output.size()));
    std::size_t k = 0;
    for (Index b = 0; b < x.dim(0); ++b) {
        for (Index j = 0; j < out_steps; ++j) {
            for (Index f = 0; f < features; ++f, ++k) {
                Index first = (b * steps + 2 * j) * features + f;
                Index second = first + features;
                Index pick = x.data()[second] > x.data()[first] ? second : first;
                r.output.data()[k] = x.data()[pick];
                r.argmax[k] = pick;
            }
        }
    }
    return r;
}

template <typename Scalar>
Tensor<Scalar> maxpool1d_backward(const std::vector<Index>& input_shape, const std::vector<Index>& argmax,
                                  const Tensor<Scalar>& grad_out) {
    Tensor<Scalar> grad_x(input_shape);
    for (std::size_t k = 0; k < argmax.size(); ++k) grad_x.data()[argmax[k]] += grad_out.data()[static_cast<Index>(k)];
    return grad_x;
}

template <typename Scalar>
Scalar sigmoid(Scalar z) {
    if (z >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-z));
    Scalar e = std::exp(z);
    return e / (Scalar(1) + e);
}

/// Logits w.x + b for a flattened [B x N] batch.
template <typename Scalar>
Vector<Scalar> dense_forward(const Eigen::Ref<const Matrix<Scalar>>& x, const Vector<Scalar>& weights,
                             const Vector<Scalar>& bias) {
    if (x.cols() != weights.size()) throw ShapeError("dense input width does not match the weights");
    return ((x * weights).array() + bias[0]).matrix();
}

/// sigma(w.x + b) per example; never NaN, saturates toward 0 or 1.
template <typename Scalar>
Vector<Scalar> dense_sigmoid_forward(const Eigen::Ref<const Matrix<Scalar>>& x, const Vector<Scalar>& weights,
                                     const Vector<Scalar>& bias) {
    return dense_forward<Scalar>(x, weights, bias).unaryExpr([](Scalar z) { return sigmoid(z); });
}

inline constexpr double kProbabilityClamp = 1e-7;

/// Mean binary cross-entropy with p clamped to [1e-7, 1 - 1e-7].
template <typename Scalar>
Scalar bce_loss(const Vector<Scalar>& p, const Vector<Scalar>& y, Scalar positive_weight = Scalar(1)) {
    if (p.size() != y.size() || p.size() == 0) throw ShapeError("prediction/target size mismatch");
    const Scalar lo = static_cast<Scalar>(kProbabilityClamp), hi = Scalar(1) - lo;
    Scalar total = 0;
    for (Index i = 0; i < p.size(); ++i) {
        Scalar q = std::clamp(p[i], lo, hi);
        Scalar w = y[i] > Scalar(0.5) ? positive_weight : Scalar(1);
        total -= w * (y[i] * std::log(q) + (Scalar(1) - y[i]) * std::log(Scalar(1) - q));
    }
    return total / static_cast<Scalar>(p.size());
}

/// d bce_loss / d logit; zero where the clamp is active.
template <typename Scalar>
Vector<Scalar> bce_logit_gradient(const Vector<Scalar>& p, const Vector<Scalar>& y, Scalar positive_weight = Scalar(1)) {
    const Scalar lo = static_cast<Scalar>(kProbabilityClamp), hi = Scalar(1) - lo;
    Vector<Scalar> g(p.size());
    for (Index i = 0; i < p.size(); ++i) {
        Scalar w = y[i] > Scalar(0.5) ? positive_weight : Scalar(1);
        g[i] = (p[i] < lo || p[i] > hi) ? Scalar(0) : w * (p[i] - y[i]) / static_cast<Scalar>(p.size());
    }
    return g;
}

// ---------------------------------------------------------------------------
// Full model

template <typename Scalar>
class ConvTextModel {
  public:
    ConvTextModel() = default;
    ConvTextModel(Architecture arch, LayerParams<Scalar> params) : arch_(arch), params_(std::move(params)) {
        arch_.validate();
        params_.check(arch_);
    }
    static ConvTextModel initialized(const Architecture& arch, std::uint64_t seed) {
        return ConvTextModel(arch, init_params<Scalar>(arch, seed));
    }

    const Architecture& architecture() const { return arch_; }
    const LayerParams<Scalar>& params() const { return params_; }
    LayerParams<Scalar>& params() { return params_; }

    struct Activations {
        Tensor<Scalar> embedded;   // [B x L x D]
        Tensor<Scalar> conv_pre;   // [B x (L-K+1) x F]
        Tensor<Scalar> conv_post;  // ReLU(conv_pre)
        PoolResult<Scalar> pooled; // [B x (L-K+1)/2 x F]
        Vector<Scalar> logits;     // [B]
        Vector<Scalar> probs;      // [B]
    };

    Activations forward(const IndexBatch& indices) const {
        if (indices.cols() != arch_.input_length) throw ShapeError("batch width does not match input_length");
        Activations a;
        a.embedded = embed_forward<Scalar>(indices, params_.embedding);
        a.conv_pre = conv1d_forward<Scalar>(a.embedded, params_.conv_weights, params_.conv_bias, arch_.kernel);
        a.conv_post = relu_forward<Scalar>(a.conv_pre);
        a.pooled = maxpool1d_forward<Scalar>(a.conv_post);
        a.logits = dense_forward<Scalar>(a.pooled.output.as_matrix(), params_.dense_weights, params_.dense_bias);
        a.probs = a.logits.unaryExpr([](Scalar z) { return sigmoid(z); });
        return a;
    }

    Vector<Scalar> predict(const IndexBatch& indices) const { return forward(indices).probs; }

    Scalar loss(const IndexBatch& indices, const Vector<Scalar>& targets, Scalar positive_weight = Scalar(1)) const {
        return bce_loss<Scalar>(predict(indices), targets, positive_weight);
    }

    /// Mean BCE over the batch; `grad` is overwritten with its gradient.
    Scalar loss_and_gradient(const IndexBatch& indices, const Vector<Scalar>& targets, LayerParams<Scalar>& grad,
                             Scalar positive_weight = Scalar(1)) const {
        auto a = forward(indices);
        grad = LayerParams<Scalar>::zeros(arch_);
        Vector<Scalar> d_logits = bce_logit_gradient<Scalar>(a.probs, targets, positive_weight);

        auto flat = a.pooled.output.as_matrix();
        grad.dense_weights.noalias() = flat.transpose() * d_logits;
        grad.dense_bias[0] = d_logits.sum();

        Tensor<Scalar> d_pooled(a.pooled.output.shape());
        d_pooled.as_matrix().noalias() = d_logits * params_.dense_weights.transpose();
        auto d_conv_post = maxpool1d_backward<Scalar>(a.conv_post.shape(), a.pooled.argmax, d_pooled);
        auto d_conv_pre = relu_backward<Scalar>(a.conv_pre, std::move(d_conv_post));
        auto d_embedded = conv1d_backward<Scalar>(a.embedded, params_.conv_weights, d_conv_pre, arch_.kernel,
                                                  grad.conv_weights, grad.conv_bias);
        embed_backward<Scalar>(indices, d_embedded, grad.embedding);
        return bce_loss<Scalar>(a.probs, targets, positive_weight);
    }

  private:
    Architecture arch_;
    LayerParams<Scalar> params_;
};

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

template <typename Scalar>
class Adam {
  public:
    Adam(const Architecture& arch, AdamConfig cfg)
        : cfg_(cfg), m_(LayerParams<Scalar>::zeros(arch)), v_(LayerParams<Scalar>::zeros(arch)) {}

    void set_learning_rate(double lr) { cfg_.learning_rate = lr; }
    double learning_rate() const { return cfg_.learning_rate; }
    long steps() const { return t_; }

    void step(LayerParams<Scalar>& params, LayerParams<Scalar>& grad) {
        ++t_;
        const Scalar b1 = static_cast<Scalar>(cfg_.beta1), b2 = static_cast<Scalar>(cfg_.beta2);
        const Scalar c1 = static_cast<Scalar>(1.0 - std::pow(cfg_.beta1, static_cast<double>(t_)));
        const Scalar c2 = static_cast<Scalar>(1.0 - std::pow(cfg_.beta2, static_cast<double>(t_)));
        const Scalar lr = static_cast<Scalar>(cfg_.learning_rate), eps = static_cast<Scalar>(cfg_.epsilon);
        auto p = params.arrays();
        auto g = grad.arrays();
        auto m = m_.arrays();
        auto v = v_.arrays();
        for (std::size_t i = 0; i < p.size(); ++i) {
            m[i] = b1 * m[i] + (Scalar(1) - b1) * g[i];
            v[i] = b2 * v[i] + (Scalar(1) - b2) * g[i].cwiseAbs2();
            p[i].array() -= lr * (m[i].array() / c1) / ((v[i].array() / c2).sqrt() + eps);
        }
    }

  private:
    AdamConfig cfg_;
    LayerParams<Scalar> m_;
    LayerParams<Scalar> v_;
    long t_ = 0;
};

// Checkpoint: "CHESTYNN" magic, u32 format version, u32 input_dim,
// input_length, dense_vectors, num_filters, kernel, then little-endian
// float32 arrays: embedding, conv weights, conv bias, dense weights, dense bias.
inline constexpr std::uint32_t kCheckpointVersion = 1;

std::string checkpoint_bytes(const Architecture& arch, const LayerParams<float>& params);
ConvTextModel<float> model_from_checkpoint_bytes(std::string_view bytes);
void save_checkpoint(const ConvTextModel<float>& model, const std::filesystem::path& path);
ConvTextModel<float> load_checkpoint(const std::filesystem::path& path);

}  // namespace chesty::nn
