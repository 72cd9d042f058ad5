#include "smc/optim.hpp"

#include <cmath>

namespace smc::nn {

void Adam::step(ParamModule& net, double lr_scale) {
    if (m.empty()) {
        const size_t total = net.param_count();
        m.assign(total, 0.0);
        v.assign(total, 0.0);
    }
    ++t;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    const double rate = lr * lr_scale;
    size_t off = 0;
    net.for_each_param([&](std::span<double> p, std::span<double> g) {
        double* mi = m.data() + off;
        double* vi = v.data() + off;
        const int64_t count = static_cast<int64_t>(p.size());
#pragma omp parallel for schedule(static)
        for (int64_t i = 0; i < count; ++i) {
            mi[i] = beta1 * mi[i] + (1.0 - beta1) * g[i];
            vi[i] = beta2 * vi[i] + (1.0 - beta2) * g[i] * g[i];
            const double mhat = mi[i] / bc1;
            const double vhat = vi[i] / bc2;
            p[i] -= rate * mhat / (std::sqrt(vhat) + eps);
        }
        off += p.size();
    });
}

void Adagrad::step(ParamModule& net) {
    if (accum.empty()) accum.assign(net.param_count(), 0.0);
    size_t off = 0;
    net.for_each_param([&](std::span<double> p, std::span<double> g) {
        double* acc = accum.data() + off;
        const int64_t count = static_cast<int64_t>(p.size());
#pragma omp parallel for schedule(static)
        for (int64_t i = 0; i < count; ++i) {
            acc[i] += g[i] * g[i];
            p[i] -= lr * g[i] / (std::sqrt(acc[i]) + eps);
        }
        off += p.size();
    });
}

} // namespace smc::nn
