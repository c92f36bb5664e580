#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "sdbf/kernels.hpp"

namespace sdbf::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(SDBF_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa detect() noexcept {
    if (const char* forced = std::getenv("SDBF_ISA")) {
        if (std::string_view(forced) == "scalar") return Isa::scalar;
    }
    return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
    return isa == Isa::avx2 ? "avx2" : "scalar";
}

bool isa_supported(Isa isa) noexcept { return isa == Isa::scalar || cpu_has_avx2(); }

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
    if (!isa_supported(isa)) {
        throw std::invalid_argument("ISA '" + std::string(to_string(isa)) + "' is not available");
    }
    current().store(isa, std::memory_order_relaxed);
}

#if defined(SDBF_HAVE_AVX2_KERNELS)
#define SDBF_DISPATCH(fn, ...)                                              \
    do {                                                                   \
        if (active_isa() == Isa::avx2) return avx2::fn(__VA_ARGS__);       \
        return scalar::fn(__VA_ARGS__);                                    \
    } while (0)
#else
#define SDBF_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

void evaluate(const ProductIntegrand& params, std::span<const double> theta, std::span<double> out) {
    SDBF_DISPATCH(evaluate, params, theta, out);
}

void exp(std::span<const double> x, std::span<double> out) { SDBF_DISPATCH(exp, x, out); }

void log(std::span<const double> x, std::span<double> out) { SDBF_DISPATCH(log, x, out); }

}  // namespace sdbf::kernels
