#ifndef SMC_LAYERS_HPP
#define SMC_LAYERS_HPP

#include <functional>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "smc/kernels.hpp"
#include "smc/tensor.hpp"

// Explicit forward/backward layers, no autograd graph. Activations for a
// forward pass live in an external cache object so the same network can
// run several forward passes per training step (G is applied to x, F(y)
// and y within one step) before any backward.

namespace smc::nn {

using ParamFn = std::function<void(std::span<double> params, std::span<double> grads)>;

struct Conv2d {
    Tensor w;               // (out_c, in_c, k, k)
    std::vector<double> b;  // out_c
    int stride = 1;
    int pad = 0;
    PadMode pad_mode = PadMode::Zero;
    Tensor wg;
    std::vector<double> bg;

    struct Cache {
        Tensor x_padded;
        int in_h = 0, in_w = 0;
    };

    Conv2d() = default;
    Conv2d(int in_c, int out_c, int k, int stride_, int pad_, PadMode mode);

    Tensor forward(const Tensor& x, Cache& c) const;
    Tensor backward(const Tensor& gout, const Cache& c);

    void init(std::mt19937_64& rng, double stddev);
    void init_he(std::mt19937_64& rng);
    void for_each_param(const ParamFn& fn);
    void zero_grad();
};

struct InstanceNorm {
    static constexpr double kEps = 1e-5;
    struct Cache {
        Tensor xhat;
        std::vector<double> invstd;
    };
    Tensor forward(const Tensor& x, Cache& c) const;
    Tensor backward(const Tensor& gout, const Cache& c) const;
};

struct Activation {
    Act kind = Act::Relu;
    struct Cache {
        Tensor y;
    };
    Tensor forward(const Tensor& x, Cache& c) const;
    Tensor backward(const Tensor& gout, const Cache& c) const;
};

struct MaxPool2 {
    struct Cache {
        std::vector<int64_t> argmax;
        int in_h = 0, in_w = 0;
    };
    Tensor forward(const Tensor& x, Cache& c) const;
    Tensor backward(const Tensor& gout, const Cache& c) const;
};

struct UpsampleNearest2 {
    struct Cache {};
    Tensor forward(const Tensor& x, Cache& c) const;
    Tensor backward(const Tensor& gout, const Cache& c) const;
};

using Layer = std::variant<Conv2d, InstanceNorm, Activation, MaxPool2, UpsampleNearest2>;
using LayerCache = std::variant<Conv2d::Cache, InstanceNorm::Cache, Activation::Cache,
                                MaxPool2::Cache, UpsampleNearest2::Cache>;

// Linear stack of layers.
struct Seq {
    std::vector<Layer> layers;

    struct Tape {
        std::vector<LayerCache> entries;
    };

    Tensor forward(const Tensor& x, Tape& tape) const;
    Tensor backward(const Tensor& gout, const Tape& tape);

    void for_each_param(const ParamFn& fn);
    void zero_grad();
};

// y = x + body(x); body must preserve shape.
struct ResBlock {
    Seq body;

    struct Tape {
        Seq::Tape body_tape;
    };

    Tensor forward(const Tensor& x, Tape& tape) const;
    Tensor backward(const Tensor& gout, const Tape& tape);
};

// Channel-dim concat/split used by U-Net skip connections.
Tensor concat_channels(const Tensor& a, const Tensor& b);
std::pair<Tensor, Tensor> split_channels(const Tensor& g, int c_first);

} // namespace smc::nn

#endif
