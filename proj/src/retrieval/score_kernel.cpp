#include "raisf/retrieval/score_kernel.hpp"

#include <atomic>

#include "raisf/retrieval/index.hpp"

namespace raisf {

#if defined(RAISF_HAVE_AVX2_TU)
void accumulate_avx2(const std::uint32_t* chunk_ords, const double* tfs,
                     std::size_t n, double idf, const double* norms,
                     double* scores);
#endif

void accumulate_scalar(const std::uint32_t* chunk_ords, const double* tfs,
                       std::size_t n, double idf, const double* norms,
                       double* scores) {
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t ord = chunk_ords[i];
        double tf = tfs[i];
        double num = tf * (kBm25K1 + 1.0);
        double den = tf + norms[ord];
        double contrib = idf * (num / den);
        scores[ord] += contrib;
    }
}

namespace {
std::atomic<bool> g_force_scalar{false};
}

AccumulateFn scalar_kernel() { return accumulate_scalar; }

AccumulateFn avx2_kernel_or_null() {
#if defined(RAISF_HAVE_AVX2_TU)
    if (__builtin_cpu_supports("avx2")) {
        return accumulate_avx2;
    }
#endif
    return nullptr;
}

AccumulateFn active_kernel() {
    if (g_force_scalar.load(std::memory_order_relaxed)) {
        return accumulate_scalar;
    }
    if (AccumulateFn avx2 = avx2_kernel_or_null()) {
        return avx2;
    }
    return accumulate_scalar;
}

const char* active_kernel_name() {
    return active_kernel() == accumulate_scalar ? "scalar" : "avx2";
}

void force_scalar_kernel(bool on) {
    g_force_scalar.store(on, std::memory_order_relaxed);
}

} // namespace raisf
