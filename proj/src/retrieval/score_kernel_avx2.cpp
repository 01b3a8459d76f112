#include <immintrin.h>

#include <cstddef>
#include <cstdint>

#include "raisf/retrieval/index.hpp"

namespace raisf {

// Must stay bit-exact with accumulate_scalar: identical operation order per
// element (mul, add, div, mul, add) and no FMA. Gathered norms feed four
// independent lanes; the scatter back into scores is scalar because AVX2 has
// no scatter, and posting ordinals are strictly ascending so lanes never
// alias within a block.
void accumulate_avx2(const std::uint32_t* chunk_ords, const double* tfs,
                     std::size_t n, double idf, const double* norms,
                     double* scores) {
    const __m256d k1p1 = _mm256_set1_pd(kBm25K1 + 1.0);
    const __m256d vidf = _mm256_set1_pd(idf);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m128i idx = _mm_loadu_si128(
            reinterpret_cast<const __m128i*>(chunk_ords + i));
        __m256d tf = _mm256_loadu_pd(tfs + i);
        __m256d norm = _mm256_i32gather_pd(norms, idx, 8);
        __m256d num = _mm256_mul_pd(tf, k1p1);
        __m256d den = _mm256_add_pd(tf, norm);
        __m256d quotient = _mm256_div_pd(num, den);
        __m256d contrib = _mm256_mul_pd(vidf, quotient);
        alignas(32) double lanes[4];
        _mm256_store_pd(lanes, contrib);
        scores[chunk_ords[i + 0]] += lanes[0];
        scores[chunk_ords[i + 1]] += lanes[1];
        scores[chunk_ords[i + 2]] += lanes[2];
        scores[chunk_ords[i + 3]] += lanes[3];
    }
    for (; i < n; ++i) {
        std::uint32_t ord = chunk_ords[i];
        double tf = tfs[i];
        double num = tf * (kBm25K1 + 1.0);
        double den = tf + norms[ord];
        double contrib = idf * (num / den);
        scores[ord] += contrib;
    }
}

} // namespace raisf
