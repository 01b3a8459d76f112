#pragma once

#include <cstddef>
#include <cstdint>

namespace raisf {

// Hot loop of BM25 scoring: folds one term's posting list into the dense
// score array. scores[ord] += idf * (tf * (k1+1)) / (tf + norms[ord]).
// The scalar kernel is the reference; the AVX2 variant is bit-exact with it
// (same operations in the same order, no FMA contraction) and is selected at
// runtime when the CPU supports it.
using AccumulateFn = void (*)(const std::uint32_t* chunk_ords,
                              const double* tfs,
                              std::size_t n,
                              double idf,
                              const double* norms,
                              double* scores);

void accumulate_scalar(const std::uint32_t* chunk_ords, const double* tfs,
                       std::size_t n, double idf, const double* norms,
                       double* scores);

AccumulateFn scalar_kernel();
// Null when the binary was built without the AVX2 translation unit or the
// CPU lacks AVX2.
AccumulateFn avx2_kernel_or_null();

AccumulateFn active_kernel();
const char* active_kernel_name();

// Test hook: pin dispatch to the scalar reference.
void force_scalar_kernel(bool on);

} // namespace raisf
