#pragma once

#include <cstddef>
#include <cstdint>

#include "ellipfuse/ellipsoid.hpp"

namespace ellipfuse::kernels {

/// Precomputed coefficients of an ellipsoid's quadratic form
///   q(x, y) = ia*dx^2 + ib2*dx*dy + ic*dy^2,  dx = x - cx, dy = y - cy,
/// where (ia, ib2/2, ic) are the entries of shape^{-1}. Membership in the
/// ellipsoid is q <= 1.
struct QuadForm {
    double cx, cy;
    double ia, ib2, ic;
};

QuadForm quadform(const Ellipsoid& e);

/// Scalar reference kernel: out[i] = q(xs[i], ys[i]).
void eval_scalar(const QuadForm& q, const double* xs, const double* ys, std::size_t n,
                 double* out);

/// AVX2 variant. Uses the same operation order as the scalar kernel (mul/add,
/// no FMA) so results are bit-identical; falls back to the scalar kernel when
/// built without AVX2 support.
void eval_avx2(const QuadForm& q, const double* xs, const double* ys, std::size_t n,
               double* out);

/// True when the AVX2 kernel was compiled in AND the CPU reports AVX2.
bool avx2_available();

enum class Backend { scalar, avx2 };

/// Backend selected at startup: AVX2 when available, overridable with
/// ELLIPFUSE_SIMD=scalar|avx2|auto.
Backend active_backend();
const char* backend_name(Backend b);

/// Dispatched batch evaluation.
void eval(const QuadForm& q, const double* xs, const double* ys, std::size_t n, double* out);

/// Dispatched membership classification: mask[i] = (q(x,y) <= 1 + tol).
void contains_mask(const QuadForm& q, const double* xs, const double* ys, std::size_t n,
                   double tol, std::uint8_t* mask);

} // namespace ellipfuse::kernels
