#pragma once

// Dense arithmetic kernels used by every solver inner loop. A scalar reference
// implementation is always present; an AVX2/FMA variant is compiled on x86-64
// and picked at runtime when the CPU supports it. Setting the environment
// variable REGRETFOLIO_SIMD=scalar pins the reference kernels.

#include <cstddef>
#include <span>
#include <string_view>

#include "regretfolio/matrix.hpp"

namespace regretfolio::kernels {

struct KernelTable {
    std::string_view name;
    double (*dot)(std::span<const double> a, std::span<const double> b);
    // out = M x, M row-major rows x cols.
    void (*matvec)(std::span<const double> m, std::size_t rows, std::size_t cols,
                   std::span<const double> x, std::span<double> out);
    // x^T M x for square M.
    double (*quad_form)(std::span<const double> m, std::size_t n, std::span<const double> x);
    // y += alpha x
    void (*axpy)(double alpha, std::span<const double> x, std::span<double> y);
};

const KernelTable& scalar_table() noexcept;

/// Null when the AVX2 variant was not compiled in or the CPU lacks AVX2+FMA.
const KernelTable* avx2_table() noexcept;

/// Table selected once per process.
const KernelTable& active() noexcept;

// Convenience wrappers over active().
double dot(std::span<const double> a, std::span<const double> b);
void matvec(const Matrix& m, std::span<const double> x, std::span<double> out);
double quad_form(const Matrix& m, std::span<const double> x);
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace regretfolio::kernels
