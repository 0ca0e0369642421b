#pragma once

// Data-parallel inner loops used by the section scans and the quadrature.
//
// Every kernel has a scalar reference implementation (kernels::scalar) and,
// on x86-64 builds, an AVX2 variant (kernels::avx2). The unqualified entry
// points dispatch once per process to the widest variant the CPU supports.
// Setting FIDUCIAL_KERNELS=scalar in the environment forces the reference path.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace fiducial::kernels {

enum class Backend { scalar, avx2 };

std::string_view backend_name(Backend backend) noexcept;

/// True when the AVX2 variants were compiled in and the CPU supports them.
bool avx2_available() noexcept;

/// Backend used by the dispatching entry points.
Backend active_backend() noexcept;

// Dispatching entry points.

/// max_k |a[k] - b[k]|; a and b must have equal length.
double max_abs_diff(std::span<const double> a, std::span<const double> b);

/// True iff |a[k] - b[k]| <= tol for every k. Stops at the first violation.
bool all_close(std::span<const double> a, std::span<const double> b, double tol);

/// out[k] = sign(v[k+1] - v[k]) with differences inside [-eps, eps] mapped to 0.
/// out.size() must equal v.size() - 1.
void diff_signs(std::span<const double> v, double eps, std::span<std::int8_t> out);

/// min_k (v[k+1] - v[k]); +inf for fewer than two samples.
double min_step(std::span<const double> v);

/// out[k] = 1 - in[k].
void complement(std::span<const double> in, std::span<double> out);

/// Trapezoid rule over (possibly non-uniform) nodes.
double trapezoid(std::span<const double> nodes, std::span<const double> values);

/// acc[k] += v[k].
void accumulate(std::span<double> acc, std::span<const double> v);

/// max_k v[k]; -inf for an empty span.
double max_value(std::span<const double> v);

namespace scalar {
double max_abs_diff(std::span<const double> a, std::span<const double> b);
bool all_close(std::span<const double> a, std::span<const double> b, double tol);
void diff_signs(std::span<const double> v, double eps, std::span<std::int8_t> out);
double min_step(std::span<const double> v);
void complement(std::span<const double> in, std::span<double> out);
double trapezoid(std::span<const double> nodes, std::span<const double> values);
void accumulate(std::span<double> acc, std::span<const double> v);
double max_value(std::span<const double> v);
}  // namespace scalar

#if defined(FIDUCIAL_HAVE_AVX2)
namespace avx2 {
double max_abs_diff(std::span<const double> a, std::span<const double> b);
bool all_close(std::span<const double> a, std::span<const double> b, double tol);
void diff_signs(std::span<const double> v, double eps, std::span<std::int8_t> out);
double min_step(std::span<const double> v);
void complement(std::span<const double> in, std::span<double> out);
double trapezoid(std::span<const double> nodes, std::span<const double> values);
void accumulate(std::span<double> acc, std::span<const double> v);
double max_value(std::span<const double> v);
}  // namespace avx2
#endif

}  // namespace fiducial::kernels
