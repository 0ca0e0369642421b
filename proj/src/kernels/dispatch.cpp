#include "fiducial/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace fiducial::kernels {

namespace {

struct Table {
    Backend backend;
    double (*max_abs_diff)(std::span<const double>, std::span<const double>);
    bool (*all_close)(std::span<const double>, std::span<const double>, double);
    void (*diff_signs)(std::span<const double>, double, std::span<std::int8_t>);
    double (*min_step)(std::span<const double>);
    void (*complement)(std::span<const double>, std::span<double>);
    double (*trapezoid)(std::span<const double>, std::span<const double>);
    void (*accumulate)(std::span<double>, std::span<const double>);
    double (*max_value)(std::span<const double>);
};

constexpr Table kScalar{Backend::scalar,    scalar::max_abs_diff, scalar::all_close,  scalar::diff_signs,
                        scalar::min_step,   scalar::complement,   scalar::trapezoid,  scalar::accumulate,
                        scalar::max_value};

#if defined(FIDUCIAL_HAVE_AVX2)
constexpr Table kAvx2{Backend::avx2,     avx2::max_abs_diff, avx2::all_close,  avx2::diff_signs,
                      avx2::min_step,    avx2::complement,   avx2::trapezoid,  avx2::accumulate,
                      avx2::max_value};
#endif

bool forced_scalar() {
    const char* env = std::getenv("FIDUCIAL_KERNELS");
    return env != nullptr && std::strcmp(env, "scalar") == 0;
}

const Table& table() {
    static const Table& selected = []() -> const Table& {
#if defined(FIDUCIAL_HAVE_AVX2)
        if (avx2_available() && !forced_scalar()) {
            return kAvx2;
        }
#endif
        return kScalar;
    }();
    return selected;
}

}  // namespace

std::string_view backend_name(Backend backend) noexcept {
    return backend == Backend::avx2 ? "avx2" : "scalar";
}

bool avx2_available() noexcept {
#if defined(FIDUCIAL_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported;
#else
    return false;
#endif
}

Backend active_backend() noexcept { return table().backend; }

double max_abs_diff(std::span<const double> a, std::span<const double> b) { return table().max_abs_diff(a, b); }
bool all_close(std::span<const double> a, std::span<const double> b, double tol) { return table().all_close(a, b, tol); }
void diff_signs(std::span<const double> v, double eps, std::span<std::int8_t> out) { table().diff_signs(v, eps, out); }
double min_step(std::span<const double> v) { return table().min_step(v); }
void complement(std::span<const double> in, std::span<double> out) { table().complement(in, out); }
double trapezoid(std::span<const double> nodes, std::span<const double> values) { return table().trapezoid(nodes, values); }
void accumulate(std::span<double> acc, std::span<const double> v) { table().accumulate(acc, v); }
double max_value(std::span<const double> v) { return table().max_value(v); }

}  // namespace fiducial::kernels
