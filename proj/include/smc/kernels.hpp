#ifndef SMC_KERNELS_HPP
#define SMC_KERNELS_HPP

#include <cstdint>
#include <vector>

#include "smc/tensor.hpp"

// Low-level numeric kernels. Two implementations with identical
// signatures and bit-identical results:
//
//   smc::nn::ref  — plain serial loops, the reference used by tests
//   smc::nn::par  — OpenMP versions; every parallel loop writes disjoint
//                   outputs and keeps the reference's per-element
//                   accumulation order, so results match bit for bit
//                   regardless of thread count.
//
// Layers call par::. tools/bench_kernels compares the two.

namespace smc::nn {

enum class Act { Relu, LeakyRelu02, Tanh, Sigmoid };
enum class PadMode { Zero, Reflect };

#define SMC_DECLARE_KERNELS                                                                        \
    Tensor conv2d_forward(const Tensor& x, const Tensor& w, const std::vector<double>& bias,       \
                          int stride);                                                             \
    Tensor conv2d_backward_data(const Tensor& gout, const Tensor& w, int stride, int in_h,         \
                                int in_w);                                                         \
    void conv2d_backward_filter(const Tensor& gout, const Tensor& x, int stride, Tensor& wgrad,    \
                                std::vector<double>& bgrad);                                       \
    Tensor instnorm_forward(const Tensor& x, double eps, std::vector<double>& invstd);             \
    Tensor instnorm_backward(const Tensor& gout, const Tensor& xhat,                               \
                             const std::vector<double>& invstd);                                   \
    Tensor act_forward(const Tensor& x, Act a);                                                    \
    Tensor act_backward(const Tensor& gout, const Tensor& y, Act a);                               \
    Tensor maxpool2_forward(const Tensor& x, std::vector<int64_t>& argmax);                        \
    Tensor maxpool2_backward(const Tensor& gout, const std::vector<int64_t>& argmax, int in_h,     \
                             int in_w);                                                            \
    Tensor upsample2_forward(const Tensor& x);                                                     \
    Tensor upsample2_backward(const Tensor& gout);                                                 \
    Tensor pad2d_forward(const Tensor& x, int pad, PadMode m);                                     \
    Tensor pad2d_backward(const Tensor& gout, int pad, PadMode m, int in_h, int in_w);

namespace ref {
SMC_DECLARE_KERNELS
}
namespace par {
SMC_DECLARE_KERNELS
}

#undef SMC_DECLARE_KERNELS

// Output spatial size of a valid (unpadded) convolution; throws ShapeError
// when the kernel does not fit.
int conv_out_dim(int in, int kernel, int stride);

} // namespace smc::nn

#endif
