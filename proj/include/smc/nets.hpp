#ifndef SMC_NETS_HPP
#define SMC_NETS_HPP

#include <random>
#include <vector>

#include "smc/image.hpp"
#include "smc/layers.hpp"

namespace smc::nn {

// Common parameter-enumeration surface for optimizers / checkpoints.
// Enumeration order is fixed by construction order and is the checkpoint
// payload order.
struct ParamModule {
    virtual ~ParamModule() = default;
    virtual void for_each_param(const ParamFn& fn) = 0;

    void zero_grad();
    size_t param_count();
};

// Residual encoder-transform-decoder translator. Two stride-2 downsampling
// levels (factor 4), n res blocks at the bottleneck width, nearest-neighbor
// upsampling with 3x3 convs on the way back, tanh output in [-1,1].
struct GeneratorConfig {
    int in_channels = 3;
    int base_channels = 64;
    int n_res_blocks = 9;

    static GeneratorConfig full_scale() { return {3, 64, 9}; }
    static GeneratorConfig toy_scale() { return {3, 16, 3}; }
};

class ResNetGenerator : public ParamModule {
  public:
    struct Tape {
        Seq::Tape head_tape;
        std::vector<ResBlock::Tape> res_tapes;
        Seq::Tape tail_tape;
    };

    explicit ResNetGenerator(const GeneratorConfig& cfg);
    void init(std::mt19937_64& rng);

    Tensor forward(const Tensor& x, Tape& tape) const;
    Tensor backward(const Tensor& gout, Tape& tape);

    void for_each_param(const ParamFn& fn) override;
    const GeneratorConfig& config() const { return cfg_; }
    static constexpr int kDownFactor = 4;

  private:
    GeneratorConfig cfg_;
    Seq head_;                    // 7x7 stem + two downsampling convs
    std::vector<ResBlock> res_;
    Seq tail_;                    // two upsampling stages + 7x7 head to RGB + tanh
};

// Patch-level convolutional classifier. n_layers stride-2 convs, then a
// stride-1 conv pair; emits one score per receptive-field patch.
struct DiscriminatorConfig {
    int in_channels = 3;
    int base_channels = 64;
    int n_layers = 3;
    bool sigmoid_head = true;

    static DiscriminatorConfig full_scale() { return {3, 64, 3, true}; }
    static DiscriminatorConfig toy_scale() { return {3, 16, 2, true}; }
};

class PatchDiscriminator : public ParamModule {
  public:
    struct Tape {
        Seq::Tape tape;
    };

    explicit PatchDiscriminator(const DiscriminatorConfig& cfg);
    void init(std::mt19937_64& rng);

    Tensor forward(const Tensor& x, Tape& tape) const;
    Tensor backward(const Tensor& gout, Tape& tape);

    void for_each_param(const ParamFn& fn) override;
    const DiscriminatorConfig& config() const { return cfg_; }

  private:
    DiscriminatorConfig cfg_;
    Seq seq_;
};

// U-Net encoder-decoder with skip connections; sigmoid head maps each
// pixel to [0,1].
struct UNetConfig {
    int in_channels = 3;
    int depth = 4;
    int base_channels = 64;

    static UNetConfig full_scale() { return {3, 4, 64}; }
    static UNetConfig toy_scale() { return {3, 3, 16}; }
};

class UNet : public ParamModule {
  public:
    struct Tape {
        std::vector<Seq::Tape> enc_tapes;
        std::vector<MaxPool2::Cache> pool_caches;
        Seq::Tape bottleneck_tape;
        std::vector<Seq::Tape> up_tapes;   // indexed by level, applied depth-1 .. 0
        std::vector<Seq::Tape> dec_tapes;
        Seq::Tape head_tape;
    };

    explicit UNet(const UNetConfig& cfg);
    void init(std::mt19937_64& rng);

    Tensor forward(const Tensor& x, Tape& tape) const;
    Tensor backward(const Tensor& gout, Tape& tape);

    void for_each_param(const ParamFn& fn) override;
    const UNetConfig& config() const { return cfg_; }
    int down_factor() const { return 1 << cfg_.depth; }

  private:
    UNetConfig cfg_;
    std::vector<Seq> enc_;
    MaxPool2 pool_;
    Seq bottleneck_;
    std::vector<Seq> up_;   // upsample + conv + relu, one per level
    std::vector<Seq> dec_;  // double conv after skip concat
    Seq head_;              // 1x1 conv to one channel + sigmoid
};

// Image/Tensor bridges. Images are single samples; tensors carry a batch dim.
Tensor image_to_tensor(const Image& img);
Image tensor_to_image(const Tensor& t, RangeTag range);
Tensor mask_to_tensor(const Mask& m);
Mask tensor_to_mask(const Tensor& t);
Tensor stack_images(const std::vector<Image>& imgs);

} // namespace smc::nn

#endif
