#include "smc/layers.hpp"

#include <cmath>

namespace smc::nn {

Conv2d::Conv2d(int in_c, int out_c, int k, int stride_, int pad_, PadMode mode)
    : w(out_c, in_c, k, k), b(out_c, 0.0), stride(stride_), pad(pad_), pad_mode(mode),
      wg(out_c, in_c, k, k), bg(out_c, 0.0) {}

Tensor Conv2d::forward(const Tensor& x, Cache& c) const {
    c.in_h = x.h;
    c.in_w = x.w;
    c.x_padded = pad > 0 ? par::pad2d_forward(x, pad, pad_mode) : x;
    return par::conv2d_forward(c.x_padded, w, b, stride);
}

Tensor Conv2d::backward(const Tensor& gout, const Cache& c) {
    par::conv2d_backward_filter(gout, c.x_padded, stride, wg, bg);
    Tensor gp = par::conv2d_backward_data(gout, w, stride, c.x_padded.h, c.x_padded.w);
    if (pad > 0) return par::pad2d_backward(gp, pad, pad_mode, c.in_h, c.in_w);
    return gp;
}

void Conv2d::init(std::mt19937_64& rng, double stddev) {
    for (auto& v : w.data) {
        std::normal_distribution<double> dist(0.0, stddev);
        v = dist(rng);
    }
    std::fill(b.begin(), b.end(), 0.0);
}

void Conv2d::init_he(std::mt19937_64& rng) {
    const double fan_in = static_cast<double>(w.c) * w.h * w.w;
    init(rng, std::sqrt(2.0 / fan_in));
}

void Conv2d::for_each_param(const ParamFn& fn) {
    fn(std::span<double>(w.data), std::span<double>(wg.data));
    fn(std::span<double>(b), std::span<double>(bg));
}

void Conv2d::zero_grad() {
    wg.zero();
    std::fill(bg.begin(), bg.end(), 0.0);
}

Tensor InstanceNorm::forward(const Tensor& x, Cache& c) const {
    c.xhat = par::instnorm_forward(x, kEps, c.invstd);
    return c.xhat;
}

Tensor InstanceNorm::backward(const Tensor& gout, const Cache& c) const {
    return par::instnorm_backward(gout, c.xhat, c.invstd);
}

Tensor Activation::forward(const Tensor& x, Cache& c) const {
    c.y = par::act_forward(x, kind);
    return c.y;
}

Tensor Activation::backward(const Tensor& gout, const Cache& c) const {
    return par::act_backward(gout, c.y, kind);
}

Tensor MaxPool2::forward(const Tensor& x, Cache& c) const {
    c.in_h = x.h;
    c.in_w = x.w;
    return par::maxpool2_forward(x, c.argmax);
}

Tensor MaxPool2::backward(const Tensor& gout, const Cache& c) const {
    return par::maxpool2_backward(gout, c.argmax, c.in_h, c.in_w);
}

Tensor UpsampleNearest2::forward(const Tensor& x, Cache&) const {
    return par::upsample2_forward(x);
}

Tensor UpsampleNearest2::backward(const Tensor& gout, Cache const&) const {
    return par::upsample2_backward(gout);
}

Tensor Seq::forward(const Tensor& x, Tape& tape) const {
    tape.entries.resize(layers.size());
    Tensor cur = x;
    for (size_t i = 0; i < layers.size(); ++i) {
        cur = std::visit(
            [&](const auto& layer) -> Tensor {
                using L = std::decay_t<decltype(layer)>;
                tape.entries[i] = typename L::Cache{};
                return layer.forward(cur, std::get<typename L::Cache>(tape.entries[i]));
            },
            layers[i]);
    }
    return cur;
}

Tensor Seq::backward(const Tensor& gout, const Tape& tape) {
    Tensor cur = gout;
    for (size_t i = layers.size(); i-- > 0;) {
        cur = std::visit(
            [&](auto& layer) -> Tensor {
                using L = std::decay_t<decltype(layer)>;
                return layer.backward(cur, std::get<typename L::Cache>(tape.entries[i]));
            },
            layers[i]);
    }
    return cur;
}

void Seq::for_each_param(const ParamFn& fn) {
    for (auto& l : layers)
        if (auto* conv = std::get_if<Conv2d>(&l)) conv->for_each_param(fn);
}

void Seq::zero_grad() {
    for (auto& l : layers)
        if (auto* conv = std::get_if<Conv2d>(&l)) conv->zero_grad();
}

Tensor ResBlock::forward(const Tensor& x, Tape& tape) const {
    Tensor y = body.forward(x, tape.body_tape);
    require_same_shape(x, y, "ResBlock");
    for (size_t i = 0; i < y.size(); ++i) y.data[i] += x.data[i];
    return y;
}

Tensor ResBlock::backward(const Tensor& gout, const Tape& tape) {
    Tensor g = body.backward(gout, tape.body_tape);
    for (size_t i = 0; i < g.size(); ++i) g.data[i] += gout.data[i];
    return g;
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
    if (a.n != b.n || a.h != b.h || a.w != b.w)
        throw ShapeError("concat_channels: spatial/batch dims differ");
    Tensor out(a.n, a.c + b.c, a.h, a.w);
    const size_t plane = static_cast<size_t>(a.h) * a.w;
    for (int n = 0; n < a.n; ++n) {
        double* dst = out.data.data() + static_cast<size_t>(n) * out.c * plane;
        const double* pa = a.data.data() + static_cast<size_t>(n) * a.c * plane;
        const double* pb = b.data.data() + static_cast<size_t>(n) * b.c * plane;
        std::copy(pa, pa + a.c * plane, dst);
        std::copy(pb, pb + b.c * plane, dst + a.c * plane);
    }
    return out;
}

std::pair<Tensor, Tensor> split_channels(const Tensor& g, int c_first) {
    if (c_first <= 0 || c_first >= g.c)
        throw ShapeError("split_channels: bad split point");
    Tensor a(g.n, c_first, g.h, g.w), b(g.n, g.c - c_first, g.h, g.w);
    const size_t plane = static_cast<size_t>(g.h) * g.w;
    for (int n = 0; n < g.n; ++n) {
        const double* src = g.data.data() + static_cast<size_t>(n) * g.c * plane;
        std::copy(src, src + c_first * plane,
                  a.data.data() + static_cast<size_t>(n) * a.c * plane);
        std::copy(src + c_first * plane, src + g.c * plane,
                  b.data.data() + static_cast<size_t>(n) * b.c * plane);
    }
    return {std::move(a), std::move(b)};
}

} // namespace smc::nn
