#ifndef SMC_TENSOR_HPP
#define SMC_TENSOR_HPP

#include <cstddef>
#include <vector>

#include "smc/errors.hpp"

namespace smc {

// Dense NCHW tensor, double precision. Value-semantic; all network and
// kernel code operates on these.
struct Tensor {
    int n = 0, c = 0, h = 0, w = 0;
    std::vector<double> data;

    Tensor() = default;
    Tensor(int n_, int c_, int h_, int w_)
        : n(n_), c(c_), h(h_), w(w_),
          data(static_cast<size_t>(n_) * c_ * h_ * w_, 0.0) {
        if (n_ <= 0 || c_ <= 0 || h_ <= 0 || w_ <= 0)
            throw ShapeError("tensor dims must be positive");
    }

    size_t size() const { return data.size(); }

    double& at(int in, int ic, int iy, int ix) {
        return data[((static_cast<size_t>(in) * c + ic) * h + iy) * w + ix];
    }
    double at(int in, int ic, int iy, int ix) const {
        return data[((static_cast<size_t>(in) * c + ic) * h + iy) * w + ix];
    }

    bool same_shape(const Tensor& o) const {
        return n == o.n && c == o.c && h == o.h && w == o.w;
    }

    void zero() { std::fill(data.begin(), data.end(), 0.0); }
};

inline void require_same_shape(const Tensor& a, const Tensor& b, const char* what) {
    if (!a.same_shape(b))
        throw ShapeError(std::string(what) + ": tensor shapes differ");
}

} // namespace smc

#endif
