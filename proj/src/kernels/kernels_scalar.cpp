#include "kernels_impl.hpp"

namespace regretfolio::kernels::scalar {

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

void matvec(std::span<const double> m, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> out) {
    for (std::size_t i = 0; i < rows; ++i) out[i] = dot(m.subspan(i * cols, cols), x);
}

double quad_form(std::span<const double> m, std::size_t n, std::span<const double> x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * dot(m.subspan(i * n, n), x);
    return acc;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace regretfolio::kernels::scalar
