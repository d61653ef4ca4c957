#include "ellipfuse/point_kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace ellipfuse::kernels {

bool avx2_compiled(); // defined in point_kernels_avx2.cpp

QuadForm quadform(const Ellipsoid& e) {
    const SpdMatrix2 inv = e.shape.inverse();
    return QuadForm{e.center.x, e.center.y, inv.xx(), 2.0 * inv.xy(), inv.yy()};
}

void eval_scalar(const QuadForm& q, const double* xs, const double* ys, std::size_t n,
                 double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - q.cx;
        const double dy = ys[i] - q.cy;
        const double dxx = dx * dx;
        const double dxy = dx * dy;
        const double dyy = dy * dy;
        out[i] = (q.ia * dxx + q.ib2 * dxy) + q.ic * dyy;
    }
}

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
    return avx2_compiled() && __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend active_backend() {
    static const Backend backend = [] {
        const char* env = std::getenv("ELLIPFUSE_SIMD");
        if (env != nullptr) {
            if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
            if (std::strcmp(env, "avx2") == 0 && avx2_available()) return Backend::avx2;
            // "auto" or anything unrecognized falls through to detection.
        }
        return avx2_available() ? Backend::avx2 : Backend::scalar;
    }();
    return backend;
}

const char* backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

void eval(const QuadForm& q, const double* xs, const double* ys, std::size_t n, double* out) {
    if (active_backend() == Backend::avx2) {
        eval_avx2(q, xs, ys, n, out);
    } else {
        eval_scalar(q, xs, ys, n, out);
    }
}

void contains_mask(const QuadForm& q, const double* xs, const double* ys, std::size_t n,
                   double tol, std::uint8_t* mask) {
    // Values buffer kept on the stack in chunks so callers need no scratch.
    constexpr std::size_t kChunk = 1024;
    double vals[kChunk];
    const double limit = 1.0 + tol;
    std::size_t off = 0;
    while (off < n) {
        const std::size_t len = (n - off < kChunk) ? n - off : kChunk;
        eval(q, xs + off, ys + off, len, vals);
        for (std::size_t i = 0; i < len; ++i) {
            mask[off + i] = vals[i] <= limit ? 1 : 0;
        }
        off += len;
    }
}

} // namespace ellipfuse::kernels
