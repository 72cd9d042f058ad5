#include "smc/nets.hpp"

namespace smc::nn {

void ParamModule::zero_grad() {
    for_each_param([](std::span<double>, std::span<double> g) {
        std::fill(g.begin(), g.end(), 0.0);
    });
}

size_t ParamModule::param_count() {
    size_t total = 0;
    for_each_param([&](std::span<double> p, std::span<double>) { total += p.size(); });
    return total;
}

namespace {

void init_seq(Seq& seq, std::mt19937_64& rng, double stddev) {
    for (auto& l : seq.layers)
        if (auto* conv = std::get_if<Conv2d>(&l)) conv->init(rng, stddev);
}

void init_seq_he(Seq& seq, std::mt19937_64& rng) {
    for (auto& l : seq.layers)
        if (auto* conv = std::get_if<Conv2d>(&l)) conv->init_he(rng);
}

} // namespace

ResNetGenerator::ResNetGenerator(const GeneratorConfig& cfg) : cfg_(cfg) {
    const int b = cfg.base_channels;
    head_.layers = {
        Conv2d(cfg.in_channels, b, 7, 1, 3, PadMode::Reflect),
        InstanceNorm{},
        Activation{Act::Relu},
        Conv2d(b, b * 2, 3, 2, 1, PadMode::Zero),
        InstanceNorm{},
        Activation{Act::Relu},
        Conv2d(b * 2, b * 4, 3, 2, 1, PadMode::Zero),
        InstanceNorm{},
        Activation{Act::Relu},
    };
    res_.resize(cfg.n_res_blocks);
    for (auto& r : res_) {
        r.body.layers = {
            Conv2d(b * 4, b * 4, 3, 1, 1, PadMode::Reflect),
            InstanceNorm{},
            Activation{Act::Relu},
            Conv2d(b * 4, b * 4, 3, 1, 1, PadMode::Reflect),
            InstanceNorm{},
        };
    }
    tail_.layers = {
        UpsampleNearest2{},
        Conv2d(b * 4, b * 2, 3, 1, 1, PadMode::Zero),
        InstanceNorm{},
        Activation{Act::Relu},
        UpsampleNearest2{},
        Conv2d(b * 2, b, 3, 1, 1, PadMode::Zero),
        InstanceNorm{},
        Activation{Act::Relu},
        Conv2d(b, cfg.in_channels, 7, 1, 3, PadMode::Reflect),
        Activation{Act::Tanh},
    };
}

void ResNetGenerator::init(std::mt19937_64& rng) {
    init_seq(head_, rng, 0.02);
    for (auto& r : res_) init_seq(r.body, rng, 0.02);
    init_seq(tail_, rng, 0.02);
}

Tensor ResNetGenerator::forward(const Tensor& x, Tape& tape) const {
    if (x.h % kDownFactor != 0 || x.w % kDownFactor != 0)
        throw ShapeError("generator input dims must be divisible by " +
                         std::to_string(kDownFactor));
    tape.res_tapes.resize(res_.size());
    Tensor cur = head_.forward(x, tape.head_tape);
    for (size_t i = 0; i < res_.size(); ++i)
        cur = res_[i].forward(cur, tape.res_tapes[i]);
    return tail_.forward(cur, tape.tail_tape);
}

Tensor ResNetGenerator::backward(const Tensor& gout, Tape& tape) {
    Tensor g = tail_.backward(gout, tape.tail_tape);
    for (size_t i = res_.size(); i-- > 0;)
        g = res_[i].backward(g, tape.res_tapes[i]);
    return head_.backward(g, tape.head_tape);
}

void ResNetGenerator::for_each_param(const ParamFn& fn) {
    head_.for_each_param(fn);
    for (auto& r : res_) r.body.for_each_param(fn);
    tail_.for_each_param(fn);
}

PatchDiscriminator::PatchDiscriminator(const DiscriminatorConfig& cfg) : cfg_(cfg) {
    if (cfg.n_layers < 1) throw ConfigError("discriminator needs at least one layer");
    const int b = cfg.base_channels;
    seq_.layers.push_back(Conv2d(cfg.in_channels, b, 4, 2, 1, PadMode::Zero));
    seq_.layers.push_back(Activation{Act::LeakyRelu02});
    int ch = b;
    for (int i = 1; i < cfg.n_layers; ++i) {
        const int next = std::min(ch * 2, b * 8);
        seq_.layers.push_back(Conv2d(ch, next, 4, 2, 1, PadMode::Zero));
        seq_.layers.push_back(InstanceNorm{});
        seq_.layers.push_back(Activation{Act::LeakyRelu02});
        ch = next;
    }
    const int next = std::min(ch * 2, b * 8);
    seq_.layers.push_back(Conv2d(ch, next, 4, 1, 1, PadMode::Zero));
    seq_.layers.push_back(InstanceNorm{});
    seq_.layers.push_back(Activation{Act::LeakyRelu02});
    seq_.layers.push_back(Conv2d(next, 1, 4, 1, 1, PadMode::Zero));
    if (cfg.sigmoid_head)
        seq_.layers.push_back(Activation{Act::Sigmoid});
}

void PatchDiscriminator::init(std::mt19937_64& rng) { init_seq(seq_, rng, 0.02); }

Tensor PatchDiscriminator::forward(const Tensor& x, Tape& tape) const {
    return seq_.forward(x, tape.tape);
}

Tensor PatchDiscriminator::backward(const Tensor& gout, Tape& tape) {
    return seq_.backward(gout, tape.tape);
}

void PatchDiscriminator::for_each_param(const ParamFn& fn) { seq_.for_each_param(fn); }

namespace {

Seq double_conv(int in_c, int out_c) {
    Seq s;
    s.layers = {
        Conv2d(in_c, out_c, 3, 1, 1, PadMode::Zero),
        Activation{Act::Relu},
        Conv2d(out_c, out_c, 3, 1, 1, PadMode::Zero),
        Activation{Act::Relu},
    };
    return s;
}

} // namespace

UNet::UNet(const UNetConfig& cfg) : cfg_(cfg) {
    if (cfg.depth < 1) throw ConfigError("unet depth must be >= 1");
    const int b = cfg.base_channels;
    int in_c = cfg.in_channels;
    for (int i = 0; i < cfg.depth; ++i) {
        enc_.push_back(double_conv(in_c, b << i));
        in_c = b << i;
    }
    bottleneck_ = double_conv(b << (cfg.depth - 1), b << cfg.depth);
    up_.resize(cfg.depth);
    dec_.resize(cfg.depth);
    for (int i = cfg.depth - 1; i >= 0; --i) {
        Seq up;
        up.layers = {
            UpsampleNearest2{},
            Conv2d(b << (i + 1), b << i, 3, 1, 1, PadMode::Zero),
            Activation{Act::Relu},
        };
        up_[i] = std::move(up);
        dec_[i] = double_conv((b << i) * 2, b << i);
    }
    head_.layers = {
        Conv2d(b, 1, 1, 1, 0, PadMode::Zero),
        Activation{Act::Sigmoid},
    };
}

void UNet::init(std::mt19937_64& rng) {
    for (auto& e : enc_) init_seq_he(e, rng);
    init_seq_he(bottleneck_, rng);
    for (int i = cfg_.depth - 1; i >= 0; --i) {
        init_seq_he(up_[i], rng);
        init_seq_he(dec_[i], rng);
    }
    init_seq_he(head_, rng);
}

Tensor UNet::forward(const Tensor& x, Tape& tape) const {
    const int df = down_factor();
    if (x.h % df != 0 || x.w % df != 0)
        throw ShapeError("unet input dims must be divisible by " + std::to_string(df));
    tape.enc_tapes.resize(cfg_.depth);
    tape.pool_caches.resize(cfg_.depth);
    tape.up_tapes.resize(cfg_.depth);
    tape.dec_tapes.resize(cfg_.depth);

    std::vector<Tensor> skips(cfg_.depth);
    Tensor cur = x;
    for (int i = 0; i < cfg_.depth; ++i) {
        skips[i] = enc_[i].forward(cur, tape.enc_tapes[i]);
        cur = pool_.forward(skips[i], tape.pool_caches[i]);
    }
    cur = bottleneck_.forward(cur, tape.bottleneck_tape);
    for (int i = cfg_.depth - 1; i >= 0; --i) {
        cur = up_[i].forward(cur, tape.up_tapes[i]);
        cur = concat_channels(skips[i], cur);
        cur = dec_[i].forward(cur, tape.dec_tapes[i]);
    }
    return head_.forward(cur, tape.head_tape);
}

Tensor UNet::backward(const Tensor& gout, Tape& tape) {
    Tensor g = head_.backward(gout, tape.head_tape);
    std::vector<Tensor> skip_grads(cfg_.depth);
    for (int i = 0; i < cfg_.depth; ++i) {
        g = dec_[i].backward(g, tape.dec_tapes[i]);
        auto [gs, gu] = split_channels(g, cfg_.base_channels << i);
        skip_grads[i] = std::move(gs);
        g = up_[i].backward(gu, tape.up_tapes[i]);
    }
    g = bottleneck_.backward(g, tape.bottleneck_tape);
    for (int i = cfg_.depth - 1; i >= 0; --i) {
        g = pool_.backward(g, tape.pool_caches[i]);
        for (size_t k = 0; k < g.size(); ++k) g.data[k] += skip_grads[i].data[k];
        g = enc_[i].backward(g, tape.enc_tapes[i]);
    }
    return g;
}

void UNet::for_each_param(const ParamFn& fn) {
    for (auto& e : enc_) e.for_each_param(fn);
    bottleneck_.for_each_param(fn);
    for (int i = cfg_.depth - 1; i >= 0; --i) {
        up_[i].for_each_param(fn);
        dec_[i].for_each_param(fn);
    }
    head_.for_each_param(fn);
}

Tensor image_to_tensor(const Image& img) {
    Tensor t(1, img.channels, img.height, img.width);
    t.data = img.data;
    return t;
}

Image tensor_to_image(const Tensor& t, RangeTag range) {
    if (t.n != 1) throw ShapeError("tensor_to_image: batch size must be 1");
    Image img(t.h, t.w, t.c, range);
    img.data = t.data;
    return img;
}

Tensor mask_to_tensor(const Mask& m) {
    Tensor t(1, 1, m.height, m.width);
    t.data = m.data;
    return t;
}

Mask tensor_to_mask(const Tensor& t) {
    if (t.n != 1 || t.c != 1) throw ShapeError("tensor_to_mask: expected 1x1xHxW");
    Mask m(t.h, t.w);
    m.data = t.data;
    return m;
}

Tensor stack_images(const std::vector<Image>& imgs) {
    if (imgs.empty()) throw DataError("stack_images: empty batch");
    const Image& first = imgs.front();
    Tensor t(static_cast<int>(imgs.size()), first.channels, first.height, first.width);
    const size_t stride = first.data.size();
    for (size_t i = 0; i < imgs.size(); ++i) {
        if (imgs[i].height != first.height || imgs[i].width != first.width ||
            imgs[i].channels != first.channels)
            throw ShapeError("stack_images: inconsistent image dims");
        std::copy(imgs[i].data.begin(), imgs[i].data.end(), t.data.begin() + i * stride);
    }
    return t;
}

} // namespace smc::nn
