#include "smc/kernels.hpp"

#include <cmath>

namespace smc::nn {

int conv_out_dim(int in, int kernel, int stride) {
    int out = (in - kernel) / stride + 1;
    if (in < kernel || out <= 0)
        throw ShapeError("convolution kernel does not fit input");
    return out;
}

namespace ref {

Tensor conv2d_forward(const Tensor& x, const Tensor& w, const std::vector<double>& bias,
                      int stride) {
    if (w.c != x.c)
        throw ShapeError("conv2d: weight input channels mismatch");
    if (static_cast<int>(bias.size()) != w.n)
        throw ShapeError("conv2d: bias size mismatch");
    const int oh = conv_out_dim(x.h, w.h, stride);
    const int ow = conv_out_dim(x.w, w.w, stride);
    Tensor y(x.n, w.n, oh, ow);
    for (int n = 0; n < x.n; ++n)
        for (int oc = 0; oc < w.n; ++oc)
            for (int oy = 0; oy < oh; ++oy)
                for (int ox = 0; ox < ow; ++ox) {
                    double acc = bias[oc];
                    for (int ic = 0; ic < x.c; ++ic)
                        for (int ky = 0; ky < w.h; ++ky)
                            for (int kx = 0; kx < w.w; ++kx)
                                acc += w.at(oc, ic, ky, kx) *
                                       x.at(n, ic, oy * stride + ky, ox * stride + kx);
                    y.at(n, oc, oy, ox) = acc;
                }
    return y;
}

Tensor conv2d_backward_data(const Tensor& gout, const Tensor& w, int stride, int in_h, int in_w) {
    Tensor gin(gout.n, w.c, in_h, in_w);
    for (int n = 0; n < gout.n; ++n)
        for (int ic = 0; ic < w.c; ++ic)
            for (int iy = 0; iy < in_h; ++iy)
                for (int ix = 0; ix < in_w; ++ix) {
                    double acc = 0.0;
                    for (int oc = 0; oc < gout.c; ++oc)
                        for (int ky = 0; ky < w.h; ++ky) {
                            int ty = iy - ky;
                            if (ty < 0 || ty % stride != 0) continue;
                            int oy = ty / stride;
                            if (oy >= gout.h) continue;
                            for (int kx = 0; kx < w.w; ++kx) {
                                int tx = ix - kx;
                                if (tx < 0 || tx % stride != 0) continue;
                                int ox = tx / stride;
                                if (ox >= gout.w) continue;
                                acc += w.at(oc, ic, ky, kx) * gout.at(n, oc, oy, ox);
                            }
                        }
                    gin.at(n, ic, iy, ix) = acc;
                }
    return gin;
}

void conv2d_backward_filter(const Tensor& gout, const Tensor& x, int stride, Tensor& wgrad,
                            std::vector<double>& bgrad) {
    for (int oc = 0; oc < wgrad.n; ++oc) {
        for (int n = 0; n < gout.n; ++n)
            for (int oy = 0; oy < gout.h; ++oy)
                for (int ox = 0; ox < gout.w; ++ox) {
                    const double g = gout.at(n, oc, oy, ox);
                    bgrad[oc] += g;
                    for (int ic = 0; ic < wgrad.c; ++ic)
                        for (int ky = 0; ky < wgrad.h; ++ky)
                            for (int kx = 0; kx < wgrad.w; ++kx)
                                wgrad.at(oc, ic, ky, kx) +=
                                    g * x.at(n, ic, oy * stride + ky, ox * stride + kx);
                }
    }
}

Tensor instnorm_forward(const Tensor& x, double eps, std::vector<double>& invstd) {
    Tensor xhat(x.n, x.c, x.h, x.w);
    invstd.assign(static_cast<size_t>(x.n) * x.c, 0.0);
    const int hw = x.h * x.w;
    for (int n = 0; n < x.n; ++n)
        for (int c = 0; c < x.c; ++c) {
            double mean = 0.0;
            for (int iy = 0; iy < x.h; ++iy)
                for (int ix = 0; ix < x.w; ++ix)
                    mean += x.at(n, c, iy, ix);
            mean /= hw;
            double var = 0.0;
            for (int iy = 0; iy < x.h; ++iy)
                for (int ix = 0; ix < x.w; ++ix) {
                    double d = x.at(n, c, iy, ix) - mean;
                    var += d * d;
                }
            var /= hw;
            const double is = 1.0 / std::sqrt(var + eps);
            invstd[static_cast<size_t>(n) * x.c + c] = is;
            for (int iy = 0; iy < x.h; ++iy)
                for (int ix = 0; ix < x.w; ++ix)
                    xhat.at(n, c, iy, ix) = (x.at(n, c, iy, ix) - mean) * is;
        }
    return xhat;
}

Tensor instnorm_backward(const Tensor& gout, const Tensor& xhat, const std::vector<double>& invstd) {
    Tensor gin(gout.n, gout.c, gout.h, gout.w);
    const int hw = gout.h * gout.w;
    for (int n = 0; n < gout.n; ++n)
        for (int c = 0; c < gout.c; ++c) {
            double gsum = 0.0, gxsum = 0.0;
            for (int iy = 0; iy < gout.h; ++iy)
                for (int ix = 0; ix < gout.w; ++ix) {
                    gsum += gout.at(n, c, iy, ix);
                    gxsum += gout.at(n, c, iy, ix) * xhat.at(n, c, iy, ix);
                }
            const double gmean = gsum / hw;
            const double gxmean = gxsum / hw;
            const double is = invstd[static_cast<size_t>(n) * gout.c + c];
            for (int iy = 0; iy < gout.h; ++iy)
                for (int ix = 0; ix < gout.w; ++ix)
                    gin.at(n, c, iy, ix) =
                        is * (gout.at(n, c, iy, ix) - gmean - xhat.at(n, c, iy, ix) * gxmean);
        }
    return gin;
}

static double act_apply(double v, Act a) {
    switch (a) {
    case Act::Relu: return v > 0.0 ? v : 0.0;
    case Act::LeakyRelu02: return v > 0.0 ? v : 0.2 * v;
    case Act::Tanh: return std::tanh(v);
    case Act::Sigmoid: return 1.0 / (1.0 + std::exp(-v));
    }
    return v;
}

// Derivatives are expressed through the activation output y; every
// supported activation admits that form.
static double act_deriv_from_y(double y, Act a) {
    switch (a) {
    case Act::Relu: return y > 0.0 ? 1.0 : 0.0;
    case Act::LeakyRelu02: return y > 0.0 ? 1.0 : 0.2;
    case Act::Tanh: return 1.0 - y * y;
    case Act::Sigmoid: return y * (1.0 - y);
    }
    return 1.0;
}

Tensor act_forward(const Tensor& x, Act a) {
    Tensor y(x.n, x.c, x.h, x.w);
    for (size_t i = 0; i < x.size(); ++i)
        y.data[i] = act_apply(x.data[i], a);
    return y;
}

Tensor act_backward(const Tensor& gout, const Tensor& y, Act a) {
    require_same_shape(gout, y, "act_backward");
    Tensor gin(gout.n, gout.c, gout.h, gout.w);
    for (size_t i = 0; i < gout.size(); ++i)
        gin.data[i] = gout.data[i] * act_deriv_from_y(y.data[i], a);
    return gin;
}

Tensor maxpool2_forward(const Tensor& x, std::vector<int64_t>& argmax) {
    if (x.h % 2 != 0 || x.w % 2 != 0)
        throw ShapeError("maxpool2: input dims must be even");
    const int oh = x.h / 2, ow = x.w / 2;
    Tensor y(x.n, x.c, oh, ow);
    argmax.assign(y.size(), 0);
    for (int n = 0; n < x.n; ++n)
        for (int c = 0; c < x.c; ++c)
            for (int oy = 0; oy < oh; ++oy)
                for (int ox = 0; ox < ow; ++ox) {
                    double best = -1e300;
                    int64_t bi = 0;
                    for (int dy = 0; dy < 2; ++dy)
                        for (int dx = 0; dx < 2; ++dx) {
                            const int iy = oy * 2 + dy, ix = ox * 2 + dx;
                            const double v = x.at(n, c, iy, ix);
                            if (v > best) {
                                best = v;
                                bi = ((static_cast<int64_t>(n) * x.c + c) * x.h + iy) * x.w + ix;
                            }
                        }
                    y.at(n, c, oy, ox) = best;
                    argmax[((static_cast<size_t>(n) * x.c + c) * oh + oy) * ow + ox] = bi;
                }
    return y;
}

Tensor maxpool2_backward(const Tensor& gout, const std::vector<int64_t>& argmax, int in_h,
                         int in_w) {
    Tensor gin(gout.n, gout.c, in_h, in_w);
    for (size_t i = 0; i < gout.size(); ++i)
        gin.data[static_cast<size_t>(argmax[i])] += gout.data[i];
    return gin;
}

Tensor upsample2_forward(const Tensor& x) {
    Tensor y(x.n, x.c, x.h * 2, x.w * 2);
    for (int n = 0; n < x.n; ++n)
        for (int c = 0; c < x.c; ++c)
            for (int iy = 0; iy < y.h; ++iy)
                for (int ix = 0; ix < y.w; ++ix)
                    y.at(n, c, iy, ix) = x.at(n, c, iy / 2, ix / 2);
    return y;
}

Tensor upsample2_backward(const Tensor& gout) {
    if (gout.h % 2 != 0 || gout.w % 2 != 0)
        throw ShapeError("upsample2_backward: dims must be even");
    Tensor gin(gout.n, gout.c, gout.h / 2, gout.w / 2);
    for (int n = 0; n < gout.n; ++n)
        for (int c = 0; c < gout.c; ++c)
            for (int iy = 0; iy < gin.h; ++iy)
                for (int ix = 0; ix < gin.w; ++ix) {
                    double acc = 0.0;
                    for (int dy = 0; dy < 2; ++dy)
                        for (int dx = 0; dx < 2; ++dx)
                            acc += gout.at(n, c, iy * 2 + dy, ix * 2 + dx);
                    gin.at(n, c, iy, ix) = acc;
                }
    return gin;
}

// Reflection index into [0, n): -1 -> 1, n -> n-2 (edge not repeated).
static int reflect_index(int t, int n) {
    if (t < 0) return -t;
    if (t >= n) return 2 * (n - 1) - t;
    return t;
}

Tensor pad2d_forward(const Tensor& x, int pad, PadMode m) {
    if (pad < 0) throw ShapeError("pad2d: negative pad");
    if (m == PadMode::Reflect && (pad >= x.h || pad >= x.w))
        throw ShapeError("pad2d: reflect pad exceeds input dims");
    Tensor y(x.n, x.c, x.h + 2 * pad, x.w + 2 * pad);
    for (int n = 0; n < x.n; ++n)
        for (int c = 0; c < x.c; ++c)
            for (int oy = 0; oy < y.h; ++oy)
                for (int ox = 0; ox < y.w; ++ox) {
                    const int ty = oy - pad, tx = ox - pad;
                    if (m == PadMode::Zero) {
                        y.at(n, c, oy, ox) = (ty >= 0 && ty < x.h && tx >= 0 && tx < x.w)
                                                 ? x.at(n, c, ty, tx)
                                                 : 0.0;
                    } else {
                        y.at(n, c, oy, ox) = x.at(n, c, reflect_index(ty, x.h), reflect_index(tx, x.w));
                    }
                }
    return y;
}

Tensor pad2d_backward(const Tensor& gout, int pad, PadMode m, int in_h, int in_w) {
    Tensor gin(gout.n, gout.c, in_h, in_w);
    if (m == PadMode::Zero) {
        for (int n = 0; n < gout.n; ++n)
            for (int c = 0; c < gout.c; ++c)
                for (int iy = 0; iy < in_h; ++iy)
                    for (int ix = 0; ix < in_w; ++ix)
                        gin.at(n, c, iy, ix) = gout.at(n, c, iy + pad, ix + pad);
        return gin;
    }
    // Reflect: gather the <=3 padded rows/cols that fold back onto each
    // source index; candidate order is fixed so par:: matches bit-exactly.
    for (int n = 0; n < gout.n; ++n)
        for (int c = 0; c < gout.c; ++c)
            for (int iy = 0; iy < in_h; ++iy)
                for (int ix = 0; ix < in_w; ++ix) {
                    int ycand[3], xcand[3];
                    int ny = 0, nx = 0;
                    ycand[ny++] = iy;
                    if (iy > 0 && iy <= pad) ycand[ny++] = -iy;
                    if (iy < in_h - 1 && iy >= in_h - 1 - pad) ycand[ny++] = 2 * (in_h - 1) - iy;
                    xcand[nx++] = ix;
                    if (ix > 0 && ix <= pad) xcand[nx++] = -ix;
                    if (ix < in_w - 1 && ix >= in_w - 1 - pad) xcand[nx++] = 2 * (in_w - 1) - ix;
                    double acc = 0.0;
                    for (int a = 0; a < ny; ++a)
                        for (int b = 0; b < nx; ++b)
                            acc += gout.at(n, c, ycand[a] + pad, xcand[b] + pad);
                    gin.at(n, c, iy, ix) = acc;
                }
    return gin;
}

} // namespace ref
} // namespace smc::nn
