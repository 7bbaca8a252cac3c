#include <doctest.h>

#include <cmath>

#include "chesty/neural.hpp"

using namespace chesty;
using namespace chesty::nn;

namespace {

nn::IndexBatch random_batch(Index b, Index l, Index vocab, Rng& rng) {
    nn::IndexBatch x(b, l);
    for (Index i = 0; i < x.size(); ++i) x.data()[i] = static_cast<std::int32_t>(rng.uniform_index(static_cast<std::uint64_t>(vocab)));
    return x;
}

// out[b][t][f] = bias[f] + sum_k sum_c x[b][t+k][c] * w[f][k*C + c]
Tensor<double> naive_conv(const Tensor<double>& x, const Matrix<double>& w, const Vector<double>& bias, Index kernel) {
    const Index out_len = x.dim(1) - kernel + 1, channels = x.dim(2);
    Tensor<double> out({x.dim(0), out_len, w.rows()});
    for (Index b = 0; b < x.dim(0); ++b)
        for (Index t = 0; t < out_len; ++t)
            for (Index f = 0; f < w.rows(); ++f) {
                double acc = bias[f];
                for (Index k = 0; k < kernel; ++k)
                    for (Index c = 0; c < channels; ++c) acc += x.at(b, t + k, c) * w(f, k * channels + c);
                out.at(b, t, f) = acc;
            }
    return out;
}

}  // namespace

TEST_CASE("conv1d matches a direct loop") {
    Rng rng(3);
    Tensor<double> x({2, 9, 3});
    for (Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-1, 1);
    Matrix<double> w(4, 3 * 3);
    for (Index i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(-1, 1);
    Vector<double> bias(4);
    for (Index i = 0; i < 4; ++i) bias[i] = rng.uniform(-1, 1);
    auto got = conv1d_forward<double>(x, w, bias, 3);
    auto want = naive_conv(x, w, bias, 3);
    REQUIRE(got.shape() == want.shape());
    CHECK((got.values() - want.values()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("conv1d rejects sequences shorter than the kernel") {
    Tensor<double> x({1, 3, 2});
    Matrix<double> w = Matrix<double>::Zero(1, 8);
    Vector<double> bias = Vector<double>::Zero(1);
    CHECK_THROWS_AS(conv1d_forward<double>(x, w, bias, 4), ShapeError);
}

TEST_CASE("maxpool picks the larger of each pair and prefers the earlier on ties") {
    Tensor<double> x({1, 5, 1});
    double v[] = {1, 3, 2, 2, 9};
    for (int i = 0; i < 5; ++i) x.data()[i] = v[i];
    auto r = maxpool1d_forward<double>(x);
    REQUIRE(r.output.dim(1) == 2);
    CHECK(r.output.data()[0] == 3);
    CHECK(r.output.data()[1] == 2);
    CHECK(r.argmax[0] == 1);
    CHECK(r.argmax[1] == 2);
}

TEST_CASE("sigmoid saturates without NaN") {
    CHECK(sigmoid(1000.0) == doctest::Approx(1.0));
    CHECK(sigmoid(-1000.0) == doctest::Approx(0.0));
    CHECK(!std::isnan(sigmoid(-1000.0f)));
    CHECK(sigmoid(0.0) == 0.5);
}

TEST_CASE("bce of a confident correct prediction is near zero and clamped when wrong") {
    Vector<double> p(2), y(2);
    p << 1.0 - 1e-12, 1e-12;
    y << 1.0, 0.0;
    CHECK(bce_loss<double>(p, y) < 1e-6);
    y << 0.0, 1.0;
    CHECK(bce_loss<double>(p, y) == doctest::Approx(-std::log(kProbabilityClamp)));
}

TEST_CASE("shape contract") {
    struct Case {
        Index length, dims, conv, pooled;
    };
    for (auto c : {Case{64, 16, 60, 30}, Case{32, 8, 28, 14}, Case{100, 4, 96, 48}, Case{9, 3, 5, 2}}) {
        Architecture a;
        a.input_dim = 40;
        a.input_length = c.length;
        a.dense_vectors = c.dims;
        auto model = ConvTextModel<double>::initialized(a, 1);
        Rng rng(2);
        auto x = random_batch(3, c.length, a.input_dim, rng);
        auto act = model.forward(x);
        CHECK(act.embedded.shape() == std::vector<Index>{3, c.length, c.dims});
        CHECK(act.conv_pre.shape() == std::vector<Index>{3, c.conv, 32});
        CHECK(act.pooled.output.shape() == std::vector<Index>{3, c.pooled, 32});
        CHECK(a.flatten_length() == c.pooled * 32);
        CHECK(act.probs.size() == 3);
    }
    Architecture defaults;
    CHECK(defaults.conv_length() == 60);
    CHECK(defaults.pooled_length() == 30);
    CHECK(defaults.flatten_length() == 960);
}

TEST_CASE("batch width must equal input_length") {
    Architecture a;
    a.input_dim = 10;
    a.input_length = 12;
    auto model = ConvTextModel<double>::initialized(a, 1);
    nn::IndexBatch x = nn::IndexBatch::Zero(1, 11);
    CHECK_THROWS_AS(model.forward(x), ShapeError);
}

TEST_CASE("backprop matches central finite differences") {
    Architecture a;
    a.input_dim = 30;
    a.input_length = 12;
    a.dense_vectors = 4;
    a.num_filters = 6;
    a.kernel = 5;
    for (std::uint64_t seed : {1, 2, 3}) {
        CAPTURE(seed);
        auto model = ConvTextModel<double>::initialized(a, seed);
        // Larger weights so every layer carries signal.
        for (auto arr : model.params().arrays()) arr *= 8.0;
        Rng rng(seed + 100);
        auto x = random_batch(3, a.input_length, a.input_dim, rng);
        Vector<double> y(3);
        y << 1, 0, 1;
        LayerParams<double> grad;
        model.loss_and_gradient(x, y, grad, 2.0);

        auto params = model.params().arrays();
        auto grads = grad.arrays();
        const double eps = 1e-3;
        std::size_t checked = 0;
        for (std::size_t k = 0; k < params.size(); ++k) {
            for (Index i = 0; i < params[k].size(); ++i) {
                double saved = params[k][i];
                params[k][i] = saved + eps;
                double up = model.loss(x, y, 2.0);
                params[k][i] = saved - eps;
                double down = model.loss(x, y, 2.0);
                params[k][i] = saved;
                double numeric = (up - down) / (2 * eps);
                double analytic = grads[k][i];
                double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-12});
                double tol = scale < 1e-6 ? 1e-2 : 1e-3;
                double rel = std::abs(numeric - analytic) / scale;
                if (scale < 1e-6) rel = std::abs(numeric - analytic);
                INFO("array " << k << " index " << i << " analytic " << analytic << " numeric " << numeric);
                CHECK(rel <= tol);
                ++checked;
            }
        }
        CHECK(checked == static_cast<std::size_t>(model.params().parameter_count()));
    }
}

TEST_CASE("adam moves parameters against the gradient") {
    Architecture a;
    a.input_dim = 10;
    a.input_length = 8;
    a.dense_vectors = 2;
    a.num_filters = 2;
    a.kernel = 3;
    auto p = init_params<double>(a, 4);
    auto before = p.dense_bias[0];
    auto g = LayerParams<double>::zeros(a);
    g.dense_bias[0] = 1.0;
    Adam<double> adam(a, {});
    adam.step(p, g);
    CHECK(p.dense_bias[0] == doctest::Approx(before - 1e-3));
}

TEST_CASE("checkpoint round trip and corruption") {
    Architecture a;
    a.input_dim = 20;
    a.input_length = 10;
    auto model = ConvTextModel<float>::initialized(a, 9);
    auto bytes = checkpoint_bytes(a, model.params());
    auto back = model_from_checkpoint_bytes(bytes);
    CHECK(back.architecture() == a);
    CHECK(back.params().conv_weights == model.params().conv_weights);
    CHECK(checkpoint_bytes(a, back.params()) == bytes);
    CHECK_THROWS_AS(model_from_checkpoint_bytes(bytes.substr(0, bytes.size() - 1)), FormatError);
    CHECK_THROWS_AS(model_from_checkpoint_bytes(bytes + "x"), FormatError);
    auto bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_AS(model_from_checkpoint_bytes(bad), FormatError);
}
