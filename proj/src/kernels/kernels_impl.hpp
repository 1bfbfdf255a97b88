#pragma once

#include "regretfolio/kernels.hpp"

namespace regretfolio::kernels {

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
void matvec(std::span<const double> m, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> out);
double quad_form(std::span<const double> m, std::size_t n, std::span<const double> x);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
}  // namespace scalar

#if defined(REGRETFOLIO_HAVE_AVX2)
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
void matvec(std::span<const double> m, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> out);
double quad_form(std::span<const double> m, std::size_t n, std::span<const double> x);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
}  // namespace avx2
#endif

}  // namespace regretfolio::kernels
