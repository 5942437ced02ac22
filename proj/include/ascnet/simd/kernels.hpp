#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

// Dense double-precision kernels behind every inner loop of the tensor
// module. Each table entry has a scalar reference implementation and, on
// x86-64, an AVX2/FMA variant chosen at runtime from CPUID. The variants
// agree with the reference to rounding (FMA contraction and a different
// summation order in `dot`), which tests/unit/test_simd.cpp pins down.
//
// All matrices are row-major with explicit leading dimensions. The gemm
// entries accumulate into C.
namespace ascnet::simd {

struct KernelTable {
  const char* name;

  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // C[m,n] += A[m,k] * B[k,n]
  void (*gemm_nn)(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
                  const double* b, std::size_t ldb, double* c, std::size_t ldc);
  // C[m,n] += A^T * B, with A stored as [k,m]
  void (*gemm_tn)(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
                  const double* b, std::size_t ldb, double* c, std::size_t ldc);
  // C[m,n] += A * B^T, with B stored as [n,k]
  void (*gemm_nt)(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
                  const double* b, std::size_t ldb, double* c, std::size_t ldc);
};

const KernelTable& scalar_kernels();
// nullptr when not compiled in or the CPU lacks AVX2+FMA.
const KernelTable* avx2_kernels();

// Table used by the tensor ops. Chosen once at startup: the best supported
// variant, overridable with ASCNET_SIMD=scalar|avx2.
const KernelTable& active();
// Switches the active table by name; returns false if unavailable.
bool select(std::string_view name);
std::vector<std::string_view> available();

}  // namespace ascnet::simd
