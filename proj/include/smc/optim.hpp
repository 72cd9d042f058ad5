#ifndef SMC_OPTIM_HPP
#define SMC_OPTIM_HPP

#include <cstdint>
#include <vector>

#include "smc/nets.hpp"

namespace smc::nn {

// Adam with bias correction. State is lazily sized on first step and is
// part of the training checkpoint (resume must be bit-exact).
struct Adam {
    double lr = 2e-4;
    double beta1 = 0.5;
    double beta2 = 0.999;
    double eps = 1e-8;
    int64_t t = 0;
    std::vector<double> m, v;

    // lr_scale multiplies the base rate (epoch-dependent decay).
    void step(ParamModule& net, double lr_scale = 1.0);
};

struct Adagrad {
    double lr = 1e-2;
    double eps = 1e-10;
    std::vector<double> accum;

    void step(ParamModule& net);
};

} // namespace smc::nn

#endif
